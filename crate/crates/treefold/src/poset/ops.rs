//! The order-theoretic operator calculus: cones, links, stars, joins,
//! prejoins, products, and the two subdivisions (barycentric `♭` and the
//! interval subdivision `#`). All operators are pure and deterministic.

use super::{isomorphism, FacePoset, IsoVerdict, Kind, SubComplex};
use crate::error::{Error, Result};
use crate::id;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// The subposet of all elements strictly above `cell`, re-ranked so minimal
/// elements sit at rank 0. Links in simplicial and cubical complexes are
/// simplicial.
pub fn link(p: &FacePoset, cell: &str) -> Result<FacePoset> {
    let c = p.require(cell)?;
    let above = p.strict_up_set(c);
    let shift = p.rank(c) + 1;
    let mut local = BTreeMap::new();
    let mut elements = Vec::with_capacity(above.len());
    for (li, &gi) in above.iter().enumerate() {
        local.insert(gi, li);
        elements.push((p.id(gi).to_string(), p.rank(gi) - shift));
    }
    let mut covers = Vec::new();
    for (li, &gi) in above.iter().enumerate() {
        for &u in p.up_covers(gi) {
            if let Some(&lu) = local.get(&u) {
                covers.push((li, lu));
            }
        }
    }
    let kind = match p.kind() {
        Kind::Simplicial | Kind::Cubical => Kind::Simplicial,
        Kind::General => Kind::General,
    };
    FacePoset::from_parts(kind, elements, covers)
}

/// The closed star: the down-closure of all cofaces of `cell`.
pub fn star(p: &Arc<FacePoset>, cell: &str) -> Result<SubComplex> {
    let c = p.require(cell)?;
    let mut seed = p.strict_up_set(c);
    seed.push(c);
    Ok(SubComplex::closure(p.clone(), &seed))
}

/// Join of simplicial complexes: faces are unions of a (possibly empty)
/// face of each side. When one side is empty the other is returned as is;
/// otherwise vertex labels are tagged by side to keep them disjoint.
pub fn join(p: &FacePoset, q: &FacePoset) -> Result<FacePoset> {
    if p.kind() != Kind::Simplicial && !p.is_empty() {
        return Err(Error::NotSimplicial("left join factor".into()));
    }
    if q.kind() != Kind::Simplicial && !q.is_empty() {
        return Err(Error::NotSimplicial("right join factor".into()));
    }
    if p.is_empty() {
        return Ok(q.clone());
    }
    if q.is_empty() {
        return Ok(p.clone());
    }
    let side_faces = |x: &FacePoset, side: usize| -> Vec<BTreeSet<String>> {
        let mut out = vec![BTreeSet::new()];
        for i in 0..x.len() {
            out.push(
                x.vertices_of(i)
                    .into_iter()
                    .map(|v| id::tagged_id(side, x.id(v)))
                    .collect(),
            );
        }
        out
    };
    let left = side_faces(p, 0);
    let right = side_faces(q, 1);
    let mut faces = BTreeSet::new();
    for a in &left {
        for b in &right {
            if a.is_empty() && b.is_empty() {
                continue;
            }
            faces.insert(a.union(b).cloned().collect::<BTreeSet<String>>());
        }
    }
    FacePoset::simplicial_from_faces(faces)
}

/// Prejoin `P + Q`: the disjoint union with every element of `P` below
/// every element of `Q`. Ranks of `Q` are shifted above `P`.
pub fn prejoin(p: &FacePoset, q: &FacePoset) -> FacePoset {
    if p.is_empty() {
        return q.clone();
    }
    if q.is_empty() {
        return p.clone();
    }
    let shift = p.dim().map_or(0, |d| d + 1);
    let mut elements = Vec::with_capacity(p.len() + q.len());
    for i in 0..p.len() {
        elements.push((id::tagged_id(0, p.id(i)), p.rank(i)));
    }
    for j in 0..q.len() {
        elements.push((id::tagged_id(1, q.id(j)), q.rank(j) + shift));
    }
    let mut covers = Vec::new();
    for i in 0..p.len() {
        for &u in p.up_covers(i) {
            covers.push((i, u));
        }
    }
    for j in 0..q.len() {
        for &u in q.up_covers(j) {
            covers.push((p.len() + j, p.len() + u));
        }
    }
    for &m in &p.maximal_elements() {
        for &n in &q.minimal_elements() {
            covers.push((m, p.len() + n));
        }
    }
    FacePoset::from_parts(Kind::General, elements, covers).expect("prejoin is graded")
}

fn cubical_compatible(p: &FacePoset) -> bool {
    p.is_empty()
        || p.kind() == Kind::Cubical
        || (p.kind() == Kind::Simplicial && p.dim().unwrap_or(0) <= 1)
}

/// Componentwise-ordered product. Products of cubical complexes (graphs
/// count, as one-dimensional complexes are cubical) are cubical.
pub fn product(p: &FacePoset, q: &FacePoset) -> FacePoset {
    let kind = if cubical_compatible(p) && cubical_compatible(q) {
        Kind::Cubical
    } else {
        Kind::General
    };
    let n = p.len();
    let m = q.len();
    let at = |i: usize, j: usize| i * m + j;
    let mut elements = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            elements.push((id::pair_id(p.id(i), q.id(j)), p.rank(i) + q.rank(j)));
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..m {
            for &u in p.up_covers(i) {
                covers.push((at(i, j), at(u, j)));
            }
            for &u in q.up_covers(j) {
                covers.push((at(i, j), at(i, u)));
            }
        }
    }
    FacePoset::from_parts(kind, elements, covers).expect("product is graded")
}

/// The dual cone `C*P`: a new bottom element below everything, with all
/// ranks shifted up by one.
pub fn cone_star(p: &FacePoset) -> FacePoset {
    let mut elements = vec![(id::BOTTOM.to_string(), 0usize)];
    for i in 0..p.len() {
        elements.push((p.id(i).to_string(), p.rank(i) + 1));
    }
    let mut covers = Vec::new();
    for &m in &p.minimal_elements() {
        covers.push((0, m + 1));
    }
    for i in 0..p.len() {
        for &u in p.up_covers(i) {
            covers.push((i + 1, u + 1));
        }
    }
    FacePoset::from_parts(Kind::General, elements, covers).expect("cone is graded")
}

/// The coboundary of a dual cone: removes the unique bottom element and
/// shifts ranks back down. Exact inverse of [`cone_star`].
pub fn coboundary(p: &FacePoset) -> Result<FacePoset> {
    if p.is_empty() {
        return Err(Error::Invalid("coboundary of the empty poset".into()));
    }
    let mins = p.minimal_elements();
    if mins.len() != 1 {
        return Err(Error::Invalid(format!(
            "coboundary needs a unique bottom element, found {} minimal elements",
            mins.len()
        )));
    }
    let bottom = mins[0];
    let mut elements = Vec::with_capacity(p.len() - 1);
    let mut local = BTreeMap::new();
    for i in 0..p.len() {
        if i == bottom {
            continue;
        }
        local.insert(i, elements.len());
        elements.push((p.id(i).to_string(), p.rank(i) - 1));
    }
    let mut covers = Vec::new();
    for i in 0..p.len() {
        if i == bottom {
            continue;
        }
        for &u in p.up_covers(i) {
            covers.push((local[&i], local[&u]));
        }
    }
    let out = FacePoset::from_parts(Kind::General, elements, covers)?;
    Ok(rederive_kind(out))
}

fn rederive_kind(p: FacePoset) -> FacePoset {
    let s = p.clone().with_kind(Kind::Simplicial);
    if s.validate().is_ok() {
        return s;
    }
    let c = p.clone().with_kind(Kind::Cubical);
    if c.validate().is_ok() {
        return c;
    }
    p.with_kind(Kind::General)
}

/// Barycentric subdivision `P♭`: the order complex, a simplicial complex
/// whose vertices are the elements of `P` and whose faces are the chains.
pub fn barycentric(p: &FacePoset) -> FacePoset {
    // Elements are canonically ordered by (rank, id), so every chain is
    // strictly increasing in index and can be enumerated by upward DFS.
    let mut faces: Vec<BTreeSet<String>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..p.len()).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("nonempty chain");
        faces.push(chain.iter().map(|&i| p.id(i).to_string()).collect());
        for j in p.strict_up_set(last) {
            let mut next = chain.clone();
            next.push(j);
            stack.push(next);
        }
    }
    FacePoset::simplicial_from_faces(faces).expect("chains are down-closed")
}

/// Interval subdivision `P#`: the poset of order intervals `[x, y]`
/// ordered by inclusion. For simplicial `P` (in particular for dual cones
/// of simplicial complexes) the result is a cubical complex.
pub fn interval_subdivision(p: &FacePoset) -> FacePoset {
    let mut idx: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut elements = Vec::new();
    for i in 0..p.len() {
        idx.insert((i, i), elements.len());
        elements.push((id::interval_id(p.id(i), p.id(i)), 0usize));
        for j in p.strict_up_set(i) {
            idx.insert((i, j), elements.len());
            elements.push((
                id::interval_id(p.id(i), p.id(j)),
                p.rank(j) - p.rank(i),
            ));
        }
    }
    let mut covers = Vec::new();
    for (&(a, b), &e) in &idx {
        // Grow the interval one cover step at either end.
        for &a2 in p.down_covers(a) {
            covers.push((e, idx[&(a2, b)]));
        }
        for &b2 in p.up_covers(b) {
            covers.push((e, idx[&(a, b2)]));
        }
    }
    let cubical = p.kind() == Kind::Simplicial || is_simplicial_dual_cone(p);
    let kind = if cubical { Kind::Cubical } else { Kind::General };
    FacePoset::from_parts(kind, elements, covers).expect("interval poset is graded")
}

/// Is `p` the dual cone of a simplicial complex (a unique bottom with a
/// simplicial poset above it)?
fn is_simplicial_dual_cone(p: &FacePoset) -> bool {
    if p.is_empty() {
        return false;
    }
    let mins = p.minimal_elements();
    if mins.len() != 1 {
        return false;
    }
    match coboundary(p) {
        Ok(inner) => inner.kind() == Kind::Simplicial || inner.is_empty(),
        Err(_) => false,
    }
}

/// A verified factorization of a cubical star: an abstract model
/// `⌊q⌋ × (C*lk(q,Q))#` together with an isomorphism onto `st(q,Q)`.
#[derive(Clone, Debug)]
pub struct StarFactorization {
    pub cell: String,
    pub model: FacePoset,
    /// model element id -> star element id
    pub witness: BTreeMap<String, String>,
}

/// Expose the factorization `st(q,Q) ≅ ⌊q⌋ × (C*lk(q,Q))#` of a cubical
/// star as an explicit isomorphism record, found by exhaustive matching.
pub fn star_factorization(p: &Arc<FacePoset>, cell: &str) -> Result<StarFactorization> {
    if p.kind() != Kind::Cubical {
        return Err(Error::NotCubical("star factorization needs a cubical complex".into()));
    }
    let c = p.require(cell)?;
    let closed_cell = SubComplex::closure(p.clone(), &[c]).as_poset();
    let lk = link(p, cell)?;
    let model = product(&closed_cell, &interval_subdivision(&cone_star(&lk)));
    let st = star(p, cell)?.as_poset();
    match isomorphism(&model, &st, 1_000_000) {
        IsoVerdict::Isomorphic(witness) => {
            Ok(StarFactorization { cell: cell.to_string(), model, witness })
        }
        IsoVerdict::NotIsomorphic => Err(Error::VerificationFailed(format!(
            "star of {cell} does not factor as cell x cone-link subdivision"
        ))),
        IsoVerdict::BudgetExhausted => {
            Err(Error::BudgetExhausted("star factorization matching".into()))
        }
    }
}
