//! Finite graded posets presenting regular cell complexes.
//!
//! A [`FacePoset`] stores elements with integer ranks and explicit cover
//! relations; the full order is derived on demand (subdivisions blow up,
//! and the transitive closure is the memory hot spot). The `kind` tag
//! records whether every down-set is the face poset of a simplex
//! (simplicial), of a cube (cubical), or arbitrary (general).
//!
//! Elements carry canonical string ids derived from their construction
//! history (see [`crate::id`]), which keeps every operator deterministic:
//! identical inputs give identical element identifiers.

mod iso;
pub(crate) mod ops;

pub use iso::{isomorphism, isomorphism_with, IsoVerdict};
pub use ops::{
    barycentric, cone_star, coboundary, interval_subdivision, join, link, prejoin, product, star,
    star_factorization, StarFactorization,
};

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Kind {
    #[serde(rename = "simplicial")]
    Simplicial,
    #[serde(rename = "cubical")]
    Cubical,
    #[serde(rename = "general")]
    General,
}

#[derive(Clone, Debug)]
pub struct FacePoset {
    kind: Kind,
    ids: Vec<String>,
    ranks: Vec<usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl PartialEq for FacePoset {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.same_structure(other)
    }
}
impl Eq for FacePoset {}

impl FacePoset {
    /// Build a poset from `(id, rank)` pairs and cover relations given as
    /// index pairs `(lower, upper)` into `elements`. Elements are re-sorted
    /// into the canonical `(rank, id)` order.
    pub fn from_parts(
        kind: Kind,
        elements: Vec<(String, usize)>,
        covers: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n = elements.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            (elements[a].1, &elements[a].0).cmp(&(elements[b].1, &elements[b].0))
        });
        let mut place = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            place[old] = new;
        }

        let mut ids = Vec::with_capacity(n);
        let mut ranks = Vec::with_capacity(n);
        for &old in &order {
            ids.push(elements[old].0.clone());
            ranks.push(elements[old].1);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate element id `{id}`")));
            }
        }

        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (lo, hi) in covers {
            if lo >= n || hi >= n {
                return Err(Error::Invalid("cover index out of range".into()));
            }
            let (lo, hi) = (place[lo], place[hi]);
            if !seen.insert((lo, hi)) {
                continue;
            }
            let (rl, rh) = (ranks[lo], ranks[hi]);
            match kind {
                Kind::Simplicial | Kind::Cubical => {
                    if rh != rl + 1 {
                        return Err(Error::NotGraded(format!(
                            "cover {} < {} changes rank by {}",
                            ids[lo],
                            ids[hi],
                            rh as i64 - rl as i64
                        )));
                    }
                }
                Kind::General => {
                    if rh <= rl {
                        return Err(Error::NotGraded(format!(
                            "cover {} < {} does not increase rank",
                            ids[lo], ids[hi]
                        )));
                    }
                }
            }
            up[lo].push(hi);
            down[hi].push(lo);
        }
        for v in up.iter_mut().chain(down.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        Ok(FacePoset { kind, ids, ranks, up, down, index })
    }

    pub fn empty(kind: Kind) -> Self {
        FacePoset { kind, ids: vec![], ranks: vec![], up: vec![], down: vec![], index: HashMap::new() }
    }

    pub fn point(label: &str) -> Self {
        FacePoset::from_parts(Kind::Simplicial, vec![(crate::id::simplex_id(&[label]), 0)], vec![])
            .expect("single point")
    }

    /// Simplicial complex from an explicit, down-closed set of faces, each a
    /// set of vertex labels. Ids are canonical simplex ids.
    pub fn simplicial_from_faces<I>(faces: I) -> Result<Self>
    where
        I: IntoIterator<Item = BTreeSet<String>>,
    {
        let faces: BTreeSet<BTreeSet<String>> = faces.into_iter().collect();
        for f in &faces {
            if f.is_empty() {
                return Err(Error::Invalid("empty face".into()));
            }
            if f.len() > 1 {
                for v in f {
                    let mut sub = f.clone();
                    sub.remove(v);
                    if !faces.contains(&sub) {
                        return Err(Error::NotDownClosed(format!(
                            "face {:?} present but its subface without `{v}` is missing",
                            f
                        )));
                    }
                }
            }
        }
        let list: Vec<&BTreeSet<String>> = faces.iter().collect();
        let mut pos: BTreeMap<&BTreeSet<String>, usize> = BTreeMap::new();
        for (i, f) in list.iter().enumerate() {
            pos.insert(*f, i);
        }
        let mut elements = Vec::new();
        let mut covers = Vec::new();
        for (i, f) in list.iter().enumerate() {
            let vs: Vec<&String> = f.iter().collect();
            elements.push((crate::id::simplex_id(&vs), f.len() - 1));
            if f.len() > 1 {
                for v in f.iter() {
                    let mut sub = (*f).clone();
                    sub.remove(v);
                    covers.push((pos[&sub], i));
                }
            }
        }
        FacePoset::from_parts(Kind::Simplicial, elements, covers)
    }

    /// Simplicial complex from maximal faces; the down-closure is computed.
    pub fn simplicial_from_facets<I, S>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<S>>,
        S: Into<String>,
    {
        let mut faces: BTreeSet<BTreeSet<String>> = BTreeSet::new();
        let mut stack: Vec<BTreeSet<String>> = Vec::new();
        for facet in facets {
            let f: BTreeSet<String> = facet.into_iter().map(Into::into).collect();
            if f.is_empty() {
                return Err(Error::Invalid("empty facet".into()));
            }
            stack.push(f);
        }
        while let Some(f) = stack.pop() {
            if faces.contains(&f) {
                continue;
            }
            if f.len() > 1 {
                for v in f.iter() {
                    let mut sub = f.clone();
                    sub.remove(v);
                    stack.push(sub);
                }
            }
            faces.insert(f);
        }
        FacePoset::simplicial_from_faces(faces)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub(crate) fn with_kind(mut self, kind: Kind) -> Self {
        self.kind = kind;
        self
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(|s| s.as_str())
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    /// Dimension: the largest rank, or `None` for the empty poset.
    pub fn dim(&self) -> Option<usize> {
        self.ranks.iter().copied().max()
    }

    pub fn up_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn down_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_empty()).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.down[i].is_empty()).collect()
    }

    pub fn elements_of_rank(&self, r: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.ranks[i] == r).collect()
    }

    /// All elements strictly above `i`, sorted.
    pub fn strict_up_set(&self, i: usize) -> Vec<usize> {
        self.reachable(i, true)
    }

    /// All elements strictly below `i`, sorted.
    pub fn strict_down_set(&self, i: usize) -> Vec<usize> {
        self.reachable(i, false)
    }

    fn reachable(&self, start: usize, upward: bool) -> Vec<usize> {
        let adj = if upward { &self.up } else { &self.down };
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = adj[start].clone();
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                stack.extend_from_slice(&adj[x]);
            }
        }
        seen.into_iter().collect()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || (self.ranks[a] < self.ranks[b] && self.strict_up_set(a).binary_search(&b).is_ok())
    }

    /// Down-closure of a set of element indices, sorted.
    pub fn down_closure(&self, set: &[usize]) -> Vec<usize> {
        let mut seen: BTreeSet<usize> = set.iter().copied().collect();
        let mut stack: Vec<usize> = set.to_vec();
        while let Some(x) = stack.pop() {
            for &d in &self.down[x] {
                if seen.insert(d) {
                    stack.push(d);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn is_down_closed(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&i| self.down[i].iter().all(|d| set.contains(d)))
    }

    /// Rank-0 elements below `i` (including `i` itself when it has rank 0).
    pub fn vertices_of(&self, i: usize) -> Vec<usize> {
        if self.ranks[i] == 0 {
            return vec![i];
        }
        self.strict_down_set(i).into_iter().filter(|&j| self.ranks[j] == 0).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().map(|&r| if r % 2 == 0 { 1i64 } else { -1i64 }).sum()
    }

    /// Structural equality ignoring the kind tag.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.ids == other.ids && self.ranks == other.ranks && self.up == other.up
    }

    /// Check the invariants promised by the kind tag.
    pub fn validate(&self) -> Result<()> {
        match self.kind {
            Kind::Simplicial => self.validate_simplicial(),
            Kind::Cubical => self.validate_cubical(),
            Kind::General => Ok(()),
        }
    }

    fn validate_simplicial(&self) -> Result<()> {
        let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for i in 0..self.len() {
            let vs = self.vertices_of(i);
            if vs.len() != self.ranks[i] + 1 {
                return Err(Error::NotSimplicial(format!(
                    "element {} has rank {} but {} vertices",
                    self.ids[i],
                    self.ranks[i],
                    vs.len()
                )));
            }
            if let Some(&j) = seen.get(&vs) {
                return Err(Error::NotSimplicial(format!(
                    "elements {} and {} share the vertex set",
                    self.ids[j], self.ids[i]
                )));
            }
            seen.insert(vs.clone(), i);
            if self.ranks[i] >= 1 {
                let facets = &self.down[i];
                if facets.len() != self.ranks[i] + 1 {
                    return Err(Error::NotSimplicial(format!(
                        "element {} covers {} faces, expected {}",
                        self.ids[i],
                        facets.len(),
                        self.ranks[i] + 1
                    )));
                }
                let mut subs = BTreeSet::new();
                for &f in facets {
                    let fv = self.vertices_of(f);
                    if !fv.iter().all(|v| vs.contains(v)) {
                        return Err(Error::NotSimplicial(format!(
                            "facet {} of {} is not spanned by its vertices",
                            self.ids[f], self.ids[i]
                        )));
                    }
                    subs.insert(fv);
                }
                if subs.len() != facets.len() {
                    return Err(Error::NotSimplicial(format!(
                        "element {} has repeated facets",
                        self.ids[i]
                    )));
                }
            }
        }
        Ok(())
    }

    fn validate_cubical(&self) -> Result<()> {
        let mut memo: Vec<Option<bool>> = vec![None; self.len()];
        for m in self.maximal_elements() {
            if !self.is_cube(m, &mut memo) {
                return Err(Error::NotCubical(format!(
                    "down-set of {} is not a cube poset",
                    self.ids[m]
                )));
            }
        }
        Ok(())
    }

    fn is_cube(&self, i: usize, memo: &mut Vec<Option<bool>>) -> bool {
        if let Some(v) = memo[i] {
            return v;
        }
        let k = self.ranks[i];
        let ok = 'chk: {
            if k == 0 {
                break 'chk true;
            }
            let facets = &self.down[i];
            if facets.len() != 2 * k {
                break 'chk false;
            }
            if !facets.iter().all(|&f| self.is_cube(f, memo)) {
                break 'chk false;
            }
            let below = self.strict_down_set(i);
            if below.len() + 1 != 3usize.pow(k as u32) {
                break 'chk false;
            }
            let verts = self.vertices_of(i);
            if verts.len() != 2usize.pow(k as u32) {
                break 'chk false;
            }
            // Faces of a cube are determined by their vertex sets, and any
            // two facets are either disjoint (one opposite partner each) or
            // meet in a common (k-2)-face worth of vertices.
            let mut seen = BTreeSet::new();
            for &b in below.iter().chain(std::iter::once(&i)) {
                if !seen.insert(self.vertices_of(b)) {
                    break 'chk false;
                }
            }
            let adj_share = if k >= 2 { 2usize.pow(k as u32 - 2) } else { 0 };
            for (a_pos, &a) in facets.iter().enumerate() {
                let va: BTreeSet<usize> = self.vertices_of(a).into_iter().collect();
                let mut opposite = 0;
                for (b_pos, &b) in facets.iter().enumerate() {
                    if a_pos == b_pos {
                        continue;
                    }
                    let vb = self.vertices_of(b);
                    let share = vb.iter().filter(|v| va.contains(v)).count();
                    if share == 0 {
                        opposite += 1;
                    } else if share != adj_share {
                        break 'chk false;
                    }
                }
                if opposite != 1 {
                    break 'chk false;
                }
            }
            true
        };
        memo[i] = Some(ok);
        ok
    }
}

/// A down-closed subset of an ambient [`FacePoset`].
#[derive(Clone, Debug)]
pub struct SubComplex {
    ambient: Arc<FacePoset>,
    members: Vec<usize>, // sorted
}

impl SubComplex {
    pub fn new(ambient: Arc<FacePoset>, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if !ambient.is_down_closed(&set) {
            return Err(Error::NotDownClosed("subcomplex members".into()));
        }
        Ok(SubComplex { ambient, members })
    }

    pub fn from_ids(ambient: Arc<FacePoset>, ids: &[&str]) -> Result<Self> {
        let mut members = Vec::with_capacity(ids.len());
        for id in ids {
            members.push(ambient.require(id)?);
        }
        SubComplex::new(ambient, members)
    }

    /// Down-closure of the given elements.
    pub fn closure(ambient: Arc<FacePoset>, seed: &[usize]) -> Self {
        let members = ambient.down_closure(seed);
        SubComplex { ambient, members }
    }

    pub fn ambient(&self) -> &Arc<FacePoset> {
        &self.ambient
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn member_ids(&self) -> Vec<&str> {
        self.members.iter().map(|&i| self.ambient.id(i)).collect()
    }

    /// The induced standalone poset (same ids, ranks and covers).
    pub fn as_poset(&self) -> FacePoset {
        let mut elements = Vec::with_capacity(self.members.len());
        let mut local = HashMap::new();
        for (li, &gi) in self.members.iter().enumerate() {
            elements.push((self.ambient.ids[gi].clone(), self.ambient.ranks[gi]));
            local.insert(gi, li);
        }
        let mut covers = Vec::new();
        for (li, &gi) in self.members.iter().enumerate() {
            for &u in &self.ambient.up[gi] {
                if let Some(&lu) = local.get(&u) {
                    covers.push((li, lu));
                }
            }
        }
        FacePoset::from_parts(self.ambient.kind, elements, covers)
            .expect("induced subposet is well formed")
    }
}

/// Facets of the combinatorial boundary of a pure `d`-complex: the
/// `(d-1)`-cells with exactly one `d`-coface, together with their closure.
pub fn pseudoboundary(p: &FacePoset) -> Vec<usize> {
    let Some(d) = p.dim() else { return vec![] };
    if d == 0 {
        return vec![];
    }
    let rim: Vec<usize> = (0..p.len())
        .filter(|&i| p.rank(i) + 1 == d && p.up_covers(i).len() == 1)
        .collect();
    p.down_closure(&rim)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> FacePoset {
        FacePoset::simplicial_from_facets(vec![vec!["1", "2", "3"]]).unwrap()
    }

    #[test]
    fn canonical_order_and_lookup() {
        let t = triangle();
        assert_eq!(t.len(), 7);
        assert_eq!(t.dim(), Some(2));
        assert_eq!(t.id(0), "{1}");
        assert_eq!(t.id(6), "{1,2,3}");
        assert_eq!(t.index_of("{1,2}"), Some(3));
        assert!(t.validate().is_ok());
        assert_eq!(t.euler_characteristic(), 1);
    }

    #[test]
    fn rejects_non_down_closed_faces() {
        let faces: BTreeSet<BTreeSet<String>> = [
            ["a".to_string(), "b".to_string()].into_iter().collect::<BTreeSet<_>>(),
            ["a".to_string()].into_iter().collect(),
        ]
        .into_iter()
        .collect();
        assert!(FacePoset::simplicial_from_faces(faces).is_err());
    }

    #[test]
    fn vertices_and_order_queries() {
        let t = triangle();
        let top = t.index_of("{1,2,3}").unwrap();
        assert_eq!(t.vertices_of(top).len(), 3);
        let v = t.index_of("{1}").unwrap();
        assert!(t.le(v, top));
        assert!(!t.le(top, v));
        assert_eq!(t.strict_up_set(v).len(), 3); // two edges and the face
    }

    #[test]
    fn boundary_of_triangle_is_its_rim() {
        let t = triangle();
        let b = pseudoboundary(&t);
        assert_eq!(b.len(), 6); // 3 vertices + 3 edges
    }

    #[test]
    fn subcomplex_requires_down_closure() {
        let t = Arc::new(triangle());
        let top = t.index_of("{1,2,3}").unwrap();
        assert!(SubComplex::new(t.clone(), vec![top]).is_err());
        let sc = SubComplex::closure(t.clone(), &[top]);
        assert_eq!(sc.len(), 7);
        let ind = sc.as_poset();
        assert!(ind.same_structure(&t));
    }
}
