//! Telescope complexes built from degree-two circle covers.
//!
//! Stage `j` carries a polygon circle with `2^(stages-j+2)` vertices, so
//! each map to the next (halved) polygon is simplicial of degree two. The
//! mapping cylinder of each cover is triangulated with two triangles per
//! source edge; the full complex X caps the last circle with a cone, and
//! the partial telescopes F_1 ⊂ F_2 ⊂ ... ⊂ F_stages sit inside it as
//! labeled subcomplexes.

use crate::error::{Error, Result};
use crate::poset::FacePoset;
use std::collections::BTreeSet;

#[derive(Clone, Debug)]
pub struct TelescopeComplex {
    pub stages: usize,
    /// X: the telescope of all stages, capped by the final cone.
    pub x: FacePoset,
    /// circle vertex labels per stage (index 0 is the largest circle)
    circle_vertices: Vec<Vec<String>>,
    /// facets of each partial telescope F_k, k = 1..=stages
    f_facets: Vec<Vec<Vec<String>>>,
}

pub const APEX: &str = "apex";

fn circle_label(stage: usize, t: usize) -> String {
    format!("c{stage}v{t:03}")
}

/// Number of vertices on the stage-`j` circle (1-based, largest first).
fn circle_size(stages: usize, j: usize) -> usize {
    1 << (stages - j + 2)
}

/// Build the telescope with the given number of circle stages (>= 1).
pub fn build_telescope(stages: usize) -> Result<TelescopeComplex> {
    if stages == 0 {
        return Err(Error::Invalid("telescope needs at least one stage".into()));
    }
    if stages > 12 {
        return Err(Error::BudgetExhausted(format!(
            "telescope with {stages} stages exceeds the size budget"
        )));
    }
    let mut circle_vertices = Vec::new();
    for j in 1..=stages {
        let n = circle_size(stages, j);
        circle_vertices.push((0..n).map(|t| circle_label(j, t)).collect::<Vec<_>>());
    }

    // cylinder between circle j and circle j+1 (two triangles per source edge)
    let cylinder = |j: usize| -> Vec<Vec<String>> {
        let src = circle_size(stages, j);
        let dst = src / 2;
        let mut tris = Vec::with_capacity(2 * src);
        for t in 0..src {
            let u0 = circle_label(j, t);
            let u1 = circle_label(j, (t + 1) % src);
            let w0 = circle_label(j + 1, t % dst);
            let w1 = circle_label(j + 1, (t + 1) % dst);
            tris.push(vec![u0.clone(), u1.clone(), w1.clone()]);
            tris.push(vec![u0, w0, w1]);
        }
        tris
    };

    let circle_facets = |j: usize| -> Vec<Vec<String>> {
        let n = circle_size(stages, j);
        (0..n)
            .map(|t| vec![circle_label(j, t), circle_label(j, (t + 1) % n)])
            .collect()
    };

    let mut f_facets: Vec<Vec<Vec<String>>> = Vec::new();
    let mut acc: Vec<Vec<String>> = circle_facets(1);
    f_facets.push(acc.clone());
    for k in 2..=stages {
        acc.extend(cylinder(k - 1));
        // the new circle is contained in the cylinder's closure, but listing
        // it keeps F_k well defined even for edge-only queries
        acc.extend(circle_facets(k));
        f_facets.push(acc.clone());
    }

    let mut x_facets = acc;
    let last = circle_size(stages, stages);
    for t in 0..last {
        x_facets.push(vec![
            APEX.to_string(),
            circle_label(stages, t),
            circle_label(stages, (t + 1) % last),
        ]);
    }
    let x = FacePoset::simplicial_from_facets(x_facets)?;
    Ok(TelescopeComplex { stages, x, circle_vertices, f_facets })
}

impl TelescopeComplex {
    /// The partial telescope F_k (k in 1..=stages) as a standalone complex.
    pub fn partial(&self, k: usize) -> Result<FacePoset> {
        if k == 0 || k > self.stages {
            return Err(Error::Invalid(format!("stage {k} out of range")));
        }
        FacePoset::simplicial_from_facets(self.f_facets[k - 1].clone())
    }

    /// F = F_stages, the telescope without the final cone.
    pub fn telescope_part(&self) -> Result<FacePoset> {
        self.partial(self.stages)
    }

    /// Vertex labels of the stage-`j` circle, in counterclockwise order.
    pub fn circle(&self, j: usize) -> Result<&[String]> {
        self.circle_vertices
            .get(j - 1)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::Invalid(format!("circle {j} out of range")))
    }

    /// Element indices of the stage-`j` circle inside X.
    pub fn circle_cells(&self, j: usize) -> Result<BTreeSet<usize>> {
        let verts = self.circle(j)?;
        let mut out = BTreeSet::new();
        let n = verts.len();
        for t in 0..n {
            out.insert(self.x.require(&crate::id::simplex_id(&[verts[t].as_str()]))?);
            out.insert(
                self.x
                    .require(&crate::id::simplex_id(&[verts[t].as_str(), verts[(t + 1) % n].as_str()]))?,
            );
        }
        Ok(out)
    }

    /// The closed walk around circle `j`, for orientation-sensitive pairing.
    pub fn circle_walk(&self, j: usize) -> Result<Vec<&str>> {
        let verts = self.circle(j)?;
        let mut walk: Vec<&str> = verts.iter().map(|s| s.as_str()).collect();
        walk.push(verts[0].as_str());
        Ok(walk)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{cohomology, FgAbGroup};
    use crate::collapse::{find_collapse_sequence, CollapseOutcome, SearchBudget};

    #[test]
    fn stage_one_is_a_cone_over_a_square_circle() {
        let t = build_telescope(1).unwrap();
        // 4-gon circle plus apex: 5 vertices, 8 edges, 4 triangles
        assert_eq!(t.x.elements_of_rank(0).len(), 5);
        assert_eq!(t.x.elements_of_rank(2).len(), 4);
        assert!(t.x.validate().is_ok());
        assert!(matches!(
            find_collapse_sequence(&t.x, SearchBudget::default()),
            CollapseOutcome::Collapsed(_)
        ));
    }

    #[test]
    fn stage_two_telescope_collapses() {
        let t = build_telescope(2).unwrap();
        assert!(t.x.validate().is_ok());
        assert!(matches!(
            find_collapse_sequence(&t.x, SearchBudget::default()),
            CollapseOutcome::Collapsed(_)
        ));
    }

    #[test]
    fn partial_telescopes_are_homotopy_circles() {
        let t = build_telescope(3).unwrap();
        for k in 1..=3 {
            let f = t.partial(k).unwrap();
            let none = std::collections::BTreeSet::new();
            assert_eq!(cohomology(&f, &none, 0).unwrap(), FgAbGroup::free(1), "F_{k} connected");
            assert_eq!(cohomology(&f, &none, 1).unwrap(), FgAbGroup::free(1), "F_{k} circle H^1");
            assert_eq!(cohomology(&f, &none, 2).unwrap(), FgAbGroup::zero(), "F_{k} no H^2");
        }
    }

    #[test]
    fn partials_nest_as_subcomplexes() {
        let t = build_telescope(3).unwrap();
        let f2 = t.partial(2).unwrap();
        let f3 = t.partial(3).unwrap();
        for i in 0..f2.len() {
            assert!(f3.index_of(f2.id(i)).is_some(), "F_2 cell {} inside F_3", f2.id(i));
        }
    }
}
