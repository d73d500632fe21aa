//! Eventually periodic inverse towers of finitely generated abelian
//! groups, with Mittag-Leffler and derived-limit verdicts.
//!
//! A tower is a finite prefix of stages followed by a periodic block that
//! repeats forever; bonding maps point toward index 0 and are integer
//! matrices between canonical presentation coordinates (free coordinates
//! first, then torsion coordinates).
//!
//! The Mittag-Leffler condition asks that the images im(G_{k+j} -> G_k)
//! stabilize for every k. For eventually periodic towers this is decided
//! exactly: images are tracked as sublattices of the presentation
//! (together with the torsion relations), equality of two lattices one
//! period apart certifies stabilization forever, and a strictly growing
//! image index at stable free rank certifies failure forever (the free
//! part contracts by a fixed determinant each period). For towers of
//! countable groups the derived limit vanishes iff Mittag-Leffler holds,
//! so the lim^1 verdict is derived from the same computation.

use crate::cohomology::{
    induced_matrix, pair_with_cycle, presentation, FgAbGroup, SimplicialMap,
};
use crate::error::{Error, Result};
use crate::matrix::{self, Mat};
use crate::telescope::{build_telescope, TelescopeComplex};
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
pub struct TowerStage {
    pub group: FgAbGroup,
    /// Bonding map from this stage to the previous one (toward index 0);
    /// `None` only for the very first stage.
    pub map: Option<Mat>,
}

#[derive(Clone, Debug)]
pub struct GroupTower {
    pub prefix: Vec<TowerStage>,
    pub period: Vec<TowerStage>,
}

impl GroupTower {
    /// The constant tower on `g` with identity bonding maps.
    pub fn constant(g: FgAbGroup) -> GroupTower {
        let n = g.dims();
        GroupTower {
            prefix: vec![],
            period: vec![TowerStage { group: g, map: Some(Mat::identity(n)) }],
        }
    }

    /// The tower Z <-x2- Z <-x2- ...
    pub fn doubling() -> GroupTower {
        let mut m = Mat::zeros(1, 1);
        m[(0, 0)] = 2;
        GroupTower {
            prefix: vec![],
            period: vec![TowerStage { group: FgAbGroup::free(1), map: Some(m) }],
        }
    }

    fn stage_count(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Group at tower index `k` (periodic continuation).
    pub fn group_at(&self, k: usize) -> &FgAbGroup {
        if k < self.prefix.len() {
            &self.prefix[k].group
        } else {
            &self.period[(k - self.prefix.len()) % self.period.len()].group
        }
    }

    /// Bonding map from stage `k+1` to stage `k`.
    pub fn map_into(&self, k: usize) -> Result<&Mat> {
        let idx = k + 1;
        let stage = if idx < self.prefix.len() {
            &self.prefix[idx]
        } else {
            &self.period[(idx - self.prefix.len()) % self.period.len()]
        };
        stage
            .map
            .as_ref()
            .ok_or_else(|| Error::TowerShape(format!("stage {idx} has no bonding map")))
    }

    /// Relation lattice generators of the stage-`k` presentation.
    fn relations(&self, k: usize) -> Mat {
        let g = self.group_at(k);
        let n = g.dims();
        let mut m = Mat::zeros(n, g.torsion.len());
        for (j, &d) in g.torsion.iter().enumerate() {
            m[(g.rank + j, j)] = d;
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        if self.period.is_empty() {
            return Err(Error::TowerShape("periodic block must be nonempty".into()));
        }
        for stage in self.prefix.iter().chain(&self.period) {
            stage.group.validate()?;
        }
        if self.prefix.first().map_or(false, |s| s.map.is_some()) {
            return Err(Error::TowerShape("first stage cannot have a bonding map".into()));
        }
        // Shapes must chain, including the wrap-around of the period.
        let total = self.stage_count();
        let start = if self.prefix.is_empty() { 1 } else { 0 };
        for k in start..total + self.period.len() {
            let src = self.group_at(k + 1);
            let dst = self.group_at(k);
            let m = self.map_into(k)?;
            if m.rows != dst.dims() || m.cols != src.dims() {
                return Err(Error::TowerShape(format!(
                    "map into stage {k} has shape {}x{}, expected {}x{}",
                    m.rows,
                    m.cols,
                    dst.dims(),
                    src.dims()
                )));
            }
            // Well-defined modulo torsion: order(src_j) * column_j must lie
            // in the relation lattice of the target.
            for (j, &d) in src.torsion.iter().enumerate() {
                let col = src.rank + j;
                for row in 0..dst.dims() {
                    let v = d * m[(row, col)];
                    let ok = if row < dst.rank {
                        v == 0
                    } else {
                        v % dst.torsion[row - dst.rank] == 0
                    };
                    if !ok {
                        return Err(Error::TowerShape(format!(
                            "map into stage {k} is not defined modulo torsion (column {col})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum MlVerdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "fails")]
    Fails,
    #[serde(rename = "unknown")]
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Lim1Verdict {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "nonzero")]
    Nonzero,
    #[serde(rename = "unknown")]
    Unknown,
}

/// Image lattice of the composite map into stage `k` after `j` steps,
/// together with the relation lattice, in canonical (HNF) form.
fn image_lattice(t: &GroupTower, k: usize, j: usize) -> Result<Mat> {
    let n = t.group_at(k).dims();
    let mut composite = Mat::identity(n);
    for step in 0..j {
        composite = composite.mul(t.map_into(k + step)?);
    }
    let rel = t.relations(k);
    let mut cols: Vec<Vec<i128>> = (0..composite.cols).map(|c| composite.column(c)).collect();
    cols.extend((0..rel.cols).map(|c| rel.column(c)));
    Ok(matrix::column_lattice_hnf(&Mat::from_columns(n, cols)))
}

/// Free-part projection of an HNF lattice basis (rows are basis vectors).
fn free_part(lattice: &Mat, rank: usize) -> Mat {
    let rows: Vec<Vec<i128>> = lattice
        .to_rows()
        .into_iter()
        .map(|r| r[..rank].to_vec())
        .collect();
    if rows.is_empty() {
        Mat::zeros(0, rank)
    } else {
        matrix::row_hnf(&Mat::from_rows(rows))
    }
}

fn decide_at_base(t: &GroupTower, k: usize, max_periods: usize) -> Result<MlVerdict> {
    let pi = t.period.len();
    let rank = t.group_at(k).rank;
    // first aligned step count at which k+j is inside the periodic regime
    let j0 = t.prefix.len().saturating_sub(k);
    let mut prev = image_lattice(t, k, j0)?;
    for m in 1..=max_periods {
        let cur = image_lattice(t, k, j0 + m * pi)?;
        if cur == prev {
            return Ok(MlVerdict::Holds);
        }
        let f_prev = free_part(&prev, rank);
        let f_cur = free_part(&cur, rank);
        if f_prev.rows == f_cur.rows {
            // equal free rank: the period map is injective on the span, so
            // the index per period is a fixed determinant from here on
            if let Some(idx) =
                matrix::lattice_index(&f_prev.transpose(), &f_cur.transpose())
            {
                if idx >= 2 {
                    return Ok(MlVerdict::Fails);
                }
            }
        }
        prev = cur;
    }
    Ok(MlVerdict::Unknown)
}

/// Decide the Mittag-Leffler condition for an eventually periodic tower.
pub fn ml_check(t: &GroupTower) -> Result<MlVerdict> {
    ml_check_with(t, 64)
}

pub fn ml_check_with(t: &GroupTower, max_periods: usize) -> Result<MlVerdict> {
    t.validate()?;
    let mut verdict = MlVerdict::Holds;
    for k in 0..t.stage_count() {
        match decide_at_base(t, k, max_periods)? {
            MlVerdict::Fails => return Ok(MlVerdict::Fails),
            MlVerdict::Unknown => verdict = MlVerdict::Unknown,
            MlVerdict::Holds => {}
        }
    }
    Ok(verdict)
}

/// Derived-limit verdict. For towers of finitely generated (hence
/// countable) groups, lim^1 vanishes iff the tower is Mittag-Leffler.
pub fn lim1_vanishes(t: &GroupTower) -> Result<(Lim1Verdict, Option<String>)> {
    let verdict = match ml_check(t)? {
        MlVerdict::Holds => Lim1Verdict::Zero,
        MlVerdict::Fails => Lim1Verdict::Nonzero,
        MlVerdict::Unknown => Lim1Verdict::Unknown,
    };
    Ok((verdict, doubling_note(t)))
}

/// A documentation note for the doubling tower: its derived limit is the
/// quotient of the 2-adic integers by the integers.
fn doubling_note(t: &GroupTower) -> Option<String> {
    let is_z = |g: &FgAbGroup| g.rank == 1 && g.torsion.is_empty();
    let all = t.prefix.iter().chain(&t.period).all(|s| {
        is_z(&s.group)
            && s.map
                .as_ref()
                .map_or(true, |m| m.rows == 1 && m.cols == 1 && m[(0, 0)].abs() == 2)
    });
    (all && !t.period.is_empty()).then(|| {
        "derived limit of the doubling tower is the quotient of the 2-adic integers by Z"
            .to_string()
    })
}

/// Everything the telescope obstruction computation produced.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ObstructionReport {
    pub cube_factor: usize,
    pub stages: usize,
    /// degree of the cohomology tower after the Kunneth shift (2 + k)
    pub tower_degree: usize,
    /// degree of the nonvanishing local group (3 + k)
    pub local_degree: usize,
    /// normalized bonding entries of the computed first-cohomology tower
    pub bonding: Vec<i128>,
    pub ml: MlVerdict,
    pub lim1: Lim1Verdict,
    pub obstruction_nonzero: bool,
    pub note: String,
}

/// Extract the first-cohomology tower of the partial telescopes
/// F_1 ⊂ F_2 ⊂ ... with signs normalized against the circle orientations;
/// each bonding entry comes out as +2.
pub fn telescope_h1_tower(tel: &TelescopeComplex) -> Result<(GroupTower, Vec<i128>)> {
    let stages = tel.stages;
    let none = BTreeSet::new();
    let mut signs = Vec::with_capacity(stages);
    let mut groups = Vec::with_capacity(stages);
    for j in 1..=stages {
        let f = tel.partial(j)?;
        let pres = presentation(&f, &none, 1, false)?;
        if pres.group != FgAbGroup::free(1) {
            return Err(Error::VerificationFailed(format!(
                "H^1 of partial telescope {j} is {}, expected Z",
                pres.group
            )));
        }
        let gen = pres.generator(0);
        let walk = tel.circle_walk(j)?;
        let pairing = pair_with_cycle(&f, &pres.basis, &gen, &walk)?;
        if pairing.abs() != 1 {
            return Err(Error::VerificationFailed(format!(
                "generator of H^1(F_{j}) pairs to {pairing} against its circle"
            )));
        }
        signs.push(pairing.signum());
        groups.push(pres.group.clone());
    }
    let mut bonding = Vec::new();
    let mut stagesv = vec![TowerStage { group: groups[0].clone(), map: None }];
    for j in 1..stages {
        let src = tel.partial(j + 1)?;
        let dst = tel.partial(j)?;
        let incl = SimplicialMap::inclusion(dst, src)?;
        // H^1(F_{j+1}) -> H^1(F_j), normalized by both orientation signs
        let m = induced_matrix(&incl, 1)?;
        let entry = m[(0, 0)] * signs[j - 1] * signs[j];
        bonding.push(entry);
        let mut nm = Mat::zeros(1, 1);
        nm[(0, 0)] = entry;
        stagesv.push(TowerStage { group: groups[j].clone(), map: Some(nm) });
    }
    let tower = GroupTower { prefix: stagesv, period: GroupTower::doubling().period };
    Ok((tower, bonding))
}

/// Build the telescope tower, confirm it is the doubling tower, apply the
/// Kunneth degree shift for the cube factor symbolically, and report the
/// derived-limit obstruction.
pub fn telescope_obstruction(cube_factor: usize, stages: usize) -> Result<ObstructionReport> {
    if stages < 2 {
        return Err(Error::Invalid("obstruction needs at least two stages".into()));
    }
    let tel = build_telescope(stages)?;
    let (tower, bonding) = telescope_h1_tower(&tel)?;
    if bonding.iter().any(|&b| b != 2) {
        return Err(Error::VerificationFailed(format!(
            "telescope tower bonding {bonding:?} is not the doubling pattern"
        )));
    }
    let ml = ml_check(&tower)?;
    let (lim1, note) = lim1_vanishes(&tower)?;
    if ml != MlVerdict::Fails || lim1 != Lim1Verdict::Nonzero {
        return Err(Error::VerificationFailed(
            "doubling tower unexpectedly satisfies Mittag-Leffler".into(),
        ));
    }
    Ok(ObstructionReport {
        cube_factor,
        stages,
        tower_degree: 2 + cube_factor,
        local_degree: 3 + cube_factor,
        bonding,
        ml,
        lim1,
        obstruction_nonzero: true,
        note: note.unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_tower_holds_and_lim1_zero() {
        let t = GroupTower::constant(FgAbGroup::free(1));
        assert_eq!(ml_check(&t).unwrap(), MlVerdict::Holds);
        assert_eq!(lim1_vanishes(&t).unwrap().0, Lim1Verdict::Zero);
    }

    #[test]
    fn doubling_tower_fails_and_lim1_nonzero() {
        let t = GroupTower::doubling();
        assert_eq!(ml_check(&t).unwrap(), MlVerdict::Fails);
        let (v, note) = lim1_vanishes(&t).unwrap();
        assert_eq!(v, Lim1Verdict::Nonzero);
        assert!(note.is_some());
    }

    #[test]
    fn sign_flips_do_not_change_verdicts() {
        let mut m = Mat::zeros(1, 1);
        m[(0, 0)] = -2;
        let t = GroupTower {
            prefix: vec![],
            period: vec![TowerStage { group: FgAbGroup::free(1), map: Some(m) }],
        };
        assert_eq!(ml_check(&t).unwrap(), MlVerdict::Fails);
    }

    #[test]
    fn rank_two_diagonal_fails_by_index_growth() {
        let mut m = Mat::identity(2);
        m[(1, 1)] = 2;
        let t = GroupTower {
            prefix: vec![],
            period: vec![TowerStage { group: FgAbGroup::free(2), map: Some(m) }],
        };
        assert_eq!(ml_check(&t).unwrap(), MlVerdict::Fails);
    }

    #[test]
    fn finite_towers_always_stabilize() {
        // Z/2 <-0- Z/2 <-0- ...
        let z2 = FgAbGroup { rank: 0, torsion: vec![2] };
        let t = GroupTower {
            prefix: vec![],
            period: vec![TowerStage { group: z2.clone(), map: Some(Mat::zeros(1, 1)) }],
        };
        assert_eq!(ml_check(&t).unwrap(), MlVerdict::Holds);
        assert_eq!(lim1_vanishes(&t).unwrap().0, Lim1Verdict::Zero);

        // and a finite tower with identity maps
        let t2 = GroupTower::constant(z2);
        assert_eq!(lim1_vanishes(&t2).unwrap().0, Lim1Verdict::Zero);
    }

    #[test]
    fn projection_then_inclusion_mix() {
        // Z^2 with map swapping coordinates: images are everything, holds.
        let mut m = Mat::zeros(2, 2);
        m[(0, 1)] = 1;
        m[(1, 0)] = 1;
        let t = GroupTower {
            prefix: vec![],
            period: vec![TowerStage { group: FgAbGroup::free(2), map: Some(m) }],
        };
        assert_eq!(ml_check(&t).unwrap(), MlVerdict::Holds);
    }

    #[test]
    fn prefix_stages_do_not_flip_a_periodic_holds() {
        // prefix map kills everything; periodic tail is constant
        let z = FgAbGroup::free(1);
        let t = GroupTower {
            prefix: vec![
                TowerStage { group: z.clone(), map: None },
                TowerStage { group: z.clone(), map: Some(Mat::zeros(1, 1)) },
            ],
            period: vec![TowerStage { group: z.clone(), map: Some(Mat::identity(1)) }],
        };
        assert_eq!(ml_check(&t).unwrap(), MlVerdict::Holds);
    }

    #[test]
    fn telescope_tower_is_doubling() {
        let tel = build_telescope(3).unwrap();
        let (tower, bonding) = telescope_h1_tower(&tel).unwrap();
        assert_eq!(bonding, vec![2, 2]);
        assert_eq!(ml_check(&tower).unwrap(), MlVerdict::Fails);
    }

    #[test]
    fn obstruction_reports_nonzero_for_small_cube_factors() {
        for k in 0..=2 {
            let r = telescope_obstruction(k, 2).unwrap();
            assert!(r.obstruction_nonzero);
            assert_eq!(r.local_degree, 3 + k);
        }
    }

    #[test]
    fn malformed_towers_are_rejected() {
        let bad = GroupTower { prefix: vec![], period: vec![] };
        assert!(ml_check(&bad).is_err());
        let shape = GroupTower {
            prefix: vec![],
            period: vec![TowerStage { group: FgAbGroup::free(2), map: Some(Mat::identity(1)) }],
        };
        assert!(ml_check(&shape).is_err());
    }
}
