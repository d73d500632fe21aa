//! Integer simplicial cohomology via Smith normal form.
//!
//! Cochain complexes are built from simplicial face posets (absolute or
//! relative to a down-closed subcomplex); cohomology groups come out in
//! canonical form (rank plus a divisibility chain of torsion orders), and
//! presentations remember enough of the normal-form transforms to express
//! induced maps of simplicial maps as integer matrices between canonical
//! coordinates.

use crate::error::{Error, Result};
use crate::matrix::{self, Mat};
use crate::poset::{FacePoset, Kind};
use std::collections::{BTreeMap, BTreeSet};

/// A finitely generated abelian group in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FgAbGroup {
    pub rank: usize,
    /// Torsion orders, each at least 2, each dividing the next.
    pub torsion: Vec<i128>,
}

impl FgAbGroup {
    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: vec![] }
    }

    pub fn zero() -> Self {
        FgAbGroup::free(0)
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Number of coordinates in the canonical presentation
    /// (free coordinates first, then torsion coordinates).
    pub fn dims(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn validate(&self) -> Result<()> {
        for w in self.torsion.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::TowerShape(format!(
                    "torsion orders {:?} do not form a divisibility chain",
                    self.torsion
                )));
            }
        }
        if self.torsion.iter().any(|&d| d < 2) {
            return Err(Error::TowerShape("torsion order below 2".into()));
        }
        Ok(())
    }
}

impl std::fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Signed boundary data of the simplicial cells of `k` outside `rel`.
struct Basis {
    /// per degree: element indices forming the cochain basis
    cells: Vec<Vec<usize>>,
}

fn relative_basis(k: &FacePoset, rel: &BTreeSet<usize>) -> Basis {
    let dim = k.dim().map_or(0, |d| d + 1);
    let mut cells = vec![Vec::new(); dim];
    for i in 0..k.len() {
        if !rel.contains(&i) {
            cells[k.rank(i)].push(i);
        }
    }
    Basis { cells }
}

/// The boundary matrix from degree `d` cells to degree `d-1` cells, with
/// the usual alternating signs over sorted vertex lists.
fn boundary_matrix(k: &FacePoset, basis: &Basis, d: usize) -> Mat {
    let cols = &basis.cells[d];
    let rows = if d == 0 { &[] as &[usize] } else { &basis.cells[d - 1] };
    let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut m = Mat::zeros(rows.len(), cols.len());
    if d == 0 {
        return m;
    }
    for (cj, &cell) in cols.iter().enumerate() {
        let verts = k.vertices_of(cell); // sorted element indices
        for &facet in k.down_covers(cell) {
            let Some(&ri) = row_pos.get(&facet) else { continue };
            let fv = k.vertices_of(facet);
            // position of the dropped vertex gives the sign
            let mut dropped = None;
            let mut fi = 0;
            for (pos, &v) in verts.iter().enumerate() {
                if fi < fv.len() && fv[fi] == v {
                    fi += 1;
                } else {
                    dropped = Some(pos);
                }
            }
            let pos = dropped.expect("facet drops one vertex");
            m[(ri, cj)] = if pos % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

/// A cohomology presentation in a fixed degree: the kernel of the
/// coboundary, the image of the previous coboundary expressed in kernel
/// coordinates, and the Smith transform carrying kernel coordinates to
/// canonical group coordinates.
pub struct Presentation {
    pub group: FgAbGroup,
    /// element indices of the degree-`d` cochain basis
    pub basis: Vec<usize>,
    kernel: Mat,          // cochain coords x kernel coords
    to_canonical: Mat,    // U from the SNF of the image-in-kernel matrix
    from_canonical: Mat,  // U^{-1}
    diag: Vec<i128>,      // invariant factors padded with zeros to kernel rank
}

impl Presentation {
    /// Order of canonical coordinates: free coordinates first, then
    /// torsion coordinates in divisibility order.
    fn coordinate_slots(&self) -> Vec<usize> {
        let r = self.diag.len();
        let mut free: Vec<usize> = (0..r).filter(|&j| self.diag[j] == 0).collect();
        let torsion: Vec<usize> = (0..r).filter(|&j| self.diag[j] >= 2).collect();
        free.extend(torsion);
        free
    }

    /// A cocycle (in cochain coordinates) representing canonical generator `g`.
    pub fn generator(&self, g: usize) -> Vec<i128> {
        let slots = self.coordinate_slots();
        let mut e = vec![0i128; self.diag.len()];
        e[slots[g]] = 1;
        let x = self.from_canonical.mul_vec(&e);
        self.kernel.mul_vec(&x)
    }

    /// Canonical coordinates of a cocycle. Fails if the vector is not a
    /// cocycle of this degree.
    pub fn project(&self, cocycle: &[i128]) -> Result<Vec<i128>> {
        let x = matrix::solve(&self.kernel, cocycle)
            .ok_or_else(|| Error::Invalid("vector is not a cocycle here".into()))?;
        let y = self.to_canonical.mul_vec(&x);
        let slots = self.coordinate_slots();
        Ok(slots
            .iter()
            .map(|&j| {
                if self.diag[j] >= 2 {
                    y[j].rem_euclid(self.diag[j])
                } else {
                    y[j]
                }
            })
            .collect())
    }
}

/// Presentation of `H^d(K, L; Z)` (or reduced `H̃^d(K)` when `reduced`).
pub fn presentation(
    k: &FacePoset,
    rel: &BTreeSet<usize>,
    d: usize,
    reduced: bool,
) -> Result<Presentation> {
    if k.kind() != Kind::Simplicial && !k.is_empty() {
        return Err(Error::NotSimplicial("cohomology needs a simplicial complex".into()));
    }
    let basis = relative_basis(k, rel);
    let top = basis.cells.len();
    let n_d = if d < top { basis.cells[d].len() } else { 0 };

    // δ^d = transpose of the boundary from degree d+1.
    let delta_d = if d + 1 < top {
        boundary_matrix(k, &basis, d + 1).transpose()
    } else {
        Mat::zeros(0, n_d)
    };
    let kernel_cols = matrix::kernel_basis(&delta_d);
    let kernel = Mat::from_columns(n_d, kernel_cols);

    // image of δ^{d-1}: columns are coboundaries of the lower basis.
    let image = if d == 0 {
        if reduced && !rel.is_empty() {
            return Err(Error::Invalid("reduced cohomology is absolute only".into()));
        }
        if reduced {
            // augmentation: the all-ones cochain is a coboundary
            Mat::from_columns(n_d, vec![vec![1i128; n_d]])
        } else {
            Mat::zeros(n_d, 0)
        }
    } else if d < top {
        boundary_matrix(k, &basis, d).transpose()
    } else {
        Mat::zeros(n_d, 0)
    };

    // Express the image in kernel coordinates.
    let r = kernel.cols;
    let mut in_kernel = Mat::zeros(r, image.cols);
    for c in 0..image.cols {
        let col = image.column(c);
        let x = matrix::solve(&kernel, &col)
            .ok_or_else(|| Error::Invalid("coboundary is not a cocycle (bug)".into()))?;
        in_kernel.set_column(c, &x);
    }
    let snf = matrix::smith_normal_form(&in_kernel);
    let mut diag = vec![0i128; r];
    for i in 0..r.min(in_kernel.cols) {
        diag[i] = snf.d[(i, i)];
    }
    let rank = diag.iter().filter(|&&x| x == 0).count();
    let torsion: Vec<i128> = diag.iter().copied().filter(|&x| x >= 2).collect();
    Ok(Presentation {
        group: FgAbGroup { rank, torsion },
        basis: basis.cells.get(d).cloned().unwrap_or_default(),
        kernel,
        to_canonical: snf.u,
        from_canonical: snf.uinv,
        diag,
    })
}

/// `H^d(K, L; Z)` in canonical form. `rel` is a down-closed set of element
/// indices of `k` (empty for absolute cohomology).
pub fn cohomology(k: &FacePoset, rel: &BTreeSet<usize>, d: usize) -> Result<FgAbGroup> {
    if !k.is_down_closed(rel) {
        return Err(Error::NotDownClosed("relative subcomplex".into()));
    }
    Ok(presentation(k, rel, d, false)?.group)
}

/// Reduced cohomology of a nonempty complex.
pub fn reduced_cohomology(k: &FacePoset, d: usize) -> Result<FgAbGroup> {
    Ok(presentation(k, &BTreeSet::new(), d, true)?.group)
}

/// A simplicial map given on raw vertex labels. The target must use
/// canonical simplex ids so image simplices can be looked up.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: FacePoset,
    pub target: FacePoset,
    pub vertex_map: BTreeMap<String, String>,
}

impl SimplicialMap {
    pub fn inclusion(source: FacePoset, target: FacePoset) -> Result<SimplicialMap> {
        let mut vertex_map = BTreeMap::new();
        for v in source.elements_of_rank(0) {
            let label = crate::id::raw_vertex_label(source.id(v))
                .ok_or_else(|| Error::Invalid(format!("vertex id {} is not {{label}}", source.id(v))))?;
            vertex_map.insert(label.to_string(), label.to_string());
        }
        let m = SimplicialMap { source, target, vertex_map };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..self.source.len() {
            self.image_labels(i)?;
        }
        Ok(())
    }

    fn label_of(&self, v: usize) -> Result<&str> {
        crate::id::raw_vertex_label(self.source.id(v))
            .ok_or_else(|| Error::Invalid(format!("vertex id {} is not {{label}}", self.source.id(v))))
    }

    /// Image vertex labels of cell `i`, in source-vertex order (repeats kept).
    fn image_labels(&self, i: usize) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for v in self.source.vertices_of(i) {
            let l = self.label_of(v)?;
            let w = self
                .vertex_map
                .get(l)
                .ok_or_else(|| Error::Invalid(format!("vertex {l} has no image")))?;
            out.push(w.clone());
        }
        // the image vertex set must span a target simplex
        let set: BTreeSet<&String> = out.iter().collect();
        let id = crate::id::simplex_id(&set.iter().map(|s| s.as_str()).collect::<Vec<_>>());
        if self.target.index_of(&id).is_none() {
            return Err(Error::Invalid(format!(
                "image of {} is not a simplex of the target",
                self.source.id(i)
            )));
        }
        Ok(out)
    }

    /// Nondegenerate image simplex and orientation sign, or None.
    fn image_with_sign(&self, i: usize) -> Result<Option<(usize, i128)>> {
        let labels = self.image_labels(i)?;
        let set: BTreeSet<&String> = labels.iter().collect();
        if set.len() != labels.len() {
            return Ok(None); // degenerate
        }
        let id = crate::id::simplex_id(&labels);
        let target = self.target.require(&id)?;
        // parity of the permutation sorting `labels`
        let mut inversions = 0u64;
        for a in 0..labels.len() {
            for b in a + 1..labels.len() {
                if labels[a] > labels[b] {
                    inversions += 1;
                }
            }
        }
        Ok(Some((target, if inversions % 2 == 0 { 1 } else { -1 })))
    }
}

/// Matrix of `H^d(f): H^d(target) -> H^d(source)` between canonical
/// presentations (rows: source coordinates, columns: target generators).
pub fn induced_matrix(f: &SimplicialMap, d: usize) -> Result<Mat> {
    induced_matrix_rel(f, &BTreeSet::new(), &BTreeSet::new(), d)
}

/// Relative version: `rel_source` and `rel_target` are down-closed index
/// sets carried into each other by `f`.
pub fn induced_matrix_rel(
    f: &SimplicialMap,
    rel_source: &BTreeSet<usize>,
    rel_target: &BTreeSet<usize>,
    d: usize,
) -> Result<Mat> {
    let ps = presentation(&f.source, rel_source, d, false)?;
    let pt = presentation(&f.target, rel_target, d, false)?;
    // cochain pullback: rows source cells, cols target cells
    let col_of: BTreeMap<usize, usize> =
        pt.basis.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut pullback = Mat::zeros(ps.basis.len(), pt.basis.len());
    for (r, &cell) in ps.basis.iter().enumerate() {
        if let Some((img, sign)) = f.image_with_sign(cell)? {
            if let Some(&c) = col_of.get(&img) {
                pullback[(r, c)] = sign;
            }
        }
    }
    let mut out = Mat::zeros(ps.group.dims(), pt.group.dims());
    for g in 0..pt.group.dims() {
        let z = pt.generator(g);
        let w = pullback.mul_vec(&z);
        let coords = ps.project(&w)?;
        out.set_column(g, &coords);
    }
    Ok(out)
}

/// Pair a 1-cocycle with an oriented edge cycle given as a closed vertex
/// walk; used to normalize generator signs.
pub fn pair_with_cycle(
    k: &FacePoset,
    basis: &[usize],
    cocycle: &[i128],
    walk: &[&str],
) -> Result<i128> {
    let pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let mut total = 0i128;
    for w in walk.windows(2) {
        let (a, b) = (w[0], w[1]);
        let id = crate::id::simplex_id(&[a, b]);
        let e = k.require(&id)?;
        let p = pos
            .get(&e)
            .ok_or_else(|| Error::Invalid(format!("edge {id} missing from cochain basis")))?;
        // +1 when the walk agrees with the sorted orientation [min, max]
        let sign = if a <= b { 1 } else { -1 };
        total += sign * cocycle[*p];
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere2() -> FacePoset {
        // boundary of the 3-simplex
        FacePoset::simplicial_from_facets(vec![
            vec!["1", "2", "3"],
            vec!["1", "2", "4"],
            vec!["1", "3", "4"],
            vec!["2", "3", "4"],
        ])
        .unwrap()
    }

    fn circle(n: usize) -> FacePoset {
        let facets: Vec<Vec<String>> = (0..n)
            .map(|i| vec![format!("v{:02}", i), format!("v{:02}", (i + 1) % n)])
            .collect();
        FacePoset::simplicial_from_facets(facets).unwrap()
    }

    #[test]
    fn point_has_z_in_degree_zero() {
        let p = FacePoset::point("x");
        let none = BTreeSet::new();
        assert_eq!(cohomology(&p, &none, 0).unwrap(), FgAbGroup::free(1));
        assert_eq!(cohomology(&p, &none, 1).unwrap(), FgAbGroup::zero());
    }

    #[test]
    fn two_sphere_cohomology() {
        let s = sphere2();
        let none = BTreeSet::new();
        assert_eq!(cohomology(&s, &none, 0).unwrap(), FgAbGroup::free(1));
        assert_eq!(cohomology(&s, &none, 1).unwrap(), FgAbGroup::zero());
        assert_eq!(cohomology(&s, &none, 2).unwrap(), FgAbGroup::free(1));
    }

    #[test]
    fn circle_cohomology_and_euler_identity() {
        let c = circle(6);
        let none = BTreeSet::new();
        let h0 = cohomology(&c, &none, 0).unwrap();
        let h1 = cohomology(&c, &none, 1).unwrap();
        assert_eq!(h0, FgAbGroup::free(1));
        assert_eq!(h1, FgAbGroup::free(1));
        let chi: i64 = h0.rank as i64 - h1.rank as i64;
        assert_eq!(chi, c.euler_characteristic());
    }

    #[test]
    fn projective_plane_torsion() {
        // minimal 6-vertex triangulation of RP^2 (antipodal icosahedron):
        // the five faces around vertex 1 plus the pentagram faces
        let rp2 = FacePoset::simplicial_from_facets(vec![
            vec!["1", "2", "3"],
            vec!["1", "3", "4"],
            vec!["1", "4", "5"],
            vec!["1", "5", "6"],
            vec!["1", "2", "6"],
            vec!["2", "3", "5"],
            vec!["3", "4", "6"],
            vec!["2", "4", "5"],
            vec!["3", "5", "6"],
            vec!["2", "4", "6"],
        ])
        .unwrap();
        let none = BTreeSet::new();
        assert_eq!(cohomology(&rp2, &none, 2).unwrap(), FgAbGroup { rank: 0, torsion: vec![2] });
        assert_eq!(cohomology(&rp2, &none, 1).unwrap(), FgAbGroup::zero());
    }

    #[test]
    fn relative_disk_mod_boundary() {
        // (D^2, S^1): H^2 = Z, H^1 = 0
        let disk = FacePoset::simplicial_from_facets(vec![
            vec!["c", "1", "2"],
            vec!["c", "2", "3"],
            vec!["c", "3", "1"],
        ])
        .unwrap();
        let rim: BTreeSet<usize> = ["{1}", "{2}", "{3}", "{1,2}", "{2,3}", "{1,3}"]
            .iter()
            .map(|id| disk.index_of(id).unwrap())
            .collect();
        assert_eq!(cohomology(&disk, &rim, 2).unwrap(), FgAbGroup::free(1));
        assert_eq!(cohomology(&disk, &rim, 1).unwrap(), FgAbGroup::zero());
        assert_eq!(cohomology(&disk, &rim, 0).unwrap(), FgAbGroup::zero());
    }

    #[test]
    fn reduced_cohomology_of_contractible_things() {
        let t = FacePoset::simplicial_from_facets(vec![vec!["1", "2", "3"]]).unwrap();
        for d in 0..3 {
            assert_eq!(reduced_cohomology(&t, d).unwrap(), FgAbGroup::zero());
        }
    }

    #[test]
    fn identity_map_induces_identity() {
        let s = sphere2();
        let f = SimplicialMap::inclusion(s.clone(), s.clone()).unwrap();
        let m = induced_matrix(&f, 2).unwrap();
        assert_eq!(m.rows, 1);
        assert_eq!(m.cols, 1);
        assert_eq!(m[(0, 0)].abs(), 1);
    }

    #[test]
    fn degree_two_circle_cover_induces_times_two() {
        // double cover: 8-gon -> 4-gon, v_t -> w_{t mod 4}
        let big = circle(8);
        let small = FacePoset::simplicial_from_facets(
            (0..4)
                .map(|i| vec![format!("w{:02}", i), format!("w{:02}", (i + 1) % 4)])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let mut vm = BTreeMap::new();
        for t in 0..8 {
            vm.insert(format!("v{:02}", t), format!("w{:02}", t % 4));
        }
        let f = SimplicialMap { source: big.clone(), target: small.clone(), vertex_map: vm };
        f.validate().unwrap();
        let m = induced_matrix(&f, 1).unwrap();
        assert_eq!((m.rows, m.cols), (1, 1));
        assert_eq!(m[(0, 0)].abs(), 2);
    }

    #[test]
    fn functoriality_on_composable_covers() {
        // 8-gon -> 4-gon -> 2-gon is not simplicial; use 16 -> 8 -> 4 instead.
        let a = circle(16);
        let b = circle(8);
        let c = circle(4);
        let cover = |src: &FacePoset, n_src: usize, n_dst: usize| -> SimplicialMap {
            let mut vm = BTreeMap::new();
            for t in 0..n_src {
                vm.insert(format!("v{:02}", t), format!("v{:02}", t % n_dst));
            }
            SimplicialMap { source: src.clone(), target: circle(n_dst), vertex_map: vm }
        };
        let f = cover(&a, 16, 8); // a -> b
        let g = cover(&b, 8, 4); // b -> c
        let gf = {
            let mut vm = BTreeMap::new();
            for t in 0..16 {
                vm.insert(format!("v{:02}", t), format!("v{:02}", t % 4));
            }
            SimplicialMap { source: a.clone(), target: c.clone(), vertex_map: vm }
        };
        let mf = induced_matrix(&f, 1).unwrap(); // H(b) -> H(a)
        let mg = induced_matrix(&g, 1).unwrap(); // H(c) -> H(b)
        let mgf = induced_matrix(&gf, 1).unwrap(); // H(c) -> H(a)
        assert_eq!(mf.mul(&mg), mgf);
    }

    #[test]
    fn pairing_detects_orientation() {
        let c = circle(4);
        let none = BTreeSet::new();
        let p = presentation(&c, &none, 1, false).unwrap();
        let g = p.generator(0);
        let walk: Vec<String> = (0..=4).map(|i| format!("v{:02}", i % 4)).collect();
        let walk_refs: Vec<&str> = walk.iter().map(|s| s.as_str()).collect();
        let v = pair_with_cycle(&c, &p.basis, &g, &walk_refs).unwrap();
        assert_eq!(v.abs(), 1);
    }
}
