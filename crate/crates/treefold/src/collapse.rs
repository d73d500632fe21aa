//! Elementary collapses and collapse certificates.
//!
//! A free face is a cell with exactly one proper coface (which is then
//! automatically a facet); an elementary collapse removes the pair. In a
//! down-closed complex freeness is a local test: the cell has exactly one
//! live cover and that cover has none.
//!
//! Searching for a full collapse is heuristic: greedy descent with
//! lexicographic tie-breaking, then seeded randomized restarts, then
//! depth-bounded backtracking. "Not found" is never a proof - only an
//! empty free-face list certifies non-collapsibility of a triangulation.

use crate::error::{Error, Result};
use crate::poset::{FacePoset, SubComplex, Kind};
use crate::tree::TreeProduct;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Where a collapse certificate starts. Tree products are kept symbolic:
/// their face posets are too large to materialize routinely.
#[derive(Clone, Debug)]
pub enum StartComplex {
    Poset(FacePoset),
    Product(TreeProduct),
}

/// An ordered, replayable certificate of elementary collapses.
#[derive(Clone, Debug)]
pub struct CollapseSequence {
    pub start: StartComplex,
    /// Pairs (free face, its unique coface), by canonical cell id.
    pub steps: Vec<(String, String)>,
    /// The declared final complex, as cell ids.
    pub final_ids: BTreeSet<String>,
}

impl CollapseSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// All free pairs of `p`: cells with a unique cover that is itself maximal.
pub fn free_faces(p: &FacePoset) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..p.len() {
        if p.up_covers(i).len() == 1 {
            let t = p.up_covers(i)[0];
            if p.up_covers(t).is_empty() {
                out.push((i, t));
            }
        }
    }
    out
}

/// Remove a free pair, returning the smaller complex.
pub fn apply_elementary_collapse(p: &FacePoset, face: &str, coface: &str) -> Result<FacePoset> {
    let s = p.require(face)?;
    let t = p.require(coface)?;
    if !(p.up_covers(s) == [t] && p.up_covers(t).is_empty()) {
        return Err(Error::NotFreePair(face.to_string(), coface.to_string()));
    }
    let members: Vec<usize> = (0..p.len()).filter(|&i| i != s && i != t).collect();
    let sub = SubComplex::new(std::sync::Arc::new(p.clone()), members)?;
    Ok(sub.as_poset())
}

/// Mutable collapse state over a fixed poset: alive flags plus live cover
/// counts, enough to test freeness locally.
struct State<'a> {
    p: &'a FacePoset,
    alive: Vec<bool>,
    live_up: Vec<usize>,
    remaining: usize,
}

impl<'a> State<'a> {
    fn new(p: &'a FacePoset) -> Self {
        let live_up = (0..p.len()).map(|i| p.up_covers(i).len()).collect();
        State { p, alive: vec![true; p.len()], live_up, remaining: p.len() }
    }

    fn is_free(&self, s: usize) -> Option<usize> {
        if !self.alive[s] || self.live_up[s] != 1 {
            return None;
        }
        let t = *self.p.up_covers(s).iter().find(|&&t| self.alive[t])?;
        (self.live_up[t] == 0).then_some(t)
    }

    fn free_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.p.len()).filter_map(|s| self.is_free(s).map(|t| (s, t))).collect()
    }

    fn remove_pair(&mut self, s: usize, t: usize) {
        for &x in [s, t].iter() {
            self.alive[x] = false;
            self.remaining -= 1;
            for &d in self.p.down_covers(x) {
                self.live_up[d] -= 1;
            }
        }
    }

    fn restore_pair(&mut self, s: usize, t: usize) {
        for &x in [s, t].iter() {
            self.alive[x] = true;
            self.remaining += 1;
            for &d in self.p.down_covers(x) {
                self.live_up[d] += 1;
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum CollapseOutcome {
    /// A verified sequence reaching a single vertex.
    Collapsed(CollapseSequence),
    /// The complex has no free faces at all; for more than one cell this
    /// certifies non-collapsibility of this triangulation.
    NoFreeFaces,
    /// The search budget ran out; says nothing about collapsibility.
    NotFound,
}

/// Search controls. `restarts` seeded runs follow the greedy pass; the
/// backtracking pass explores at most `backtrack_nodes` choice points.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub restarts: u32,
    pub backtrack_nodes: u64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { restarts: 16, backtrack_nodes: 200_000, seed: 20260810 }
    }
}

impl SearchBudget {
    pub fn from_env() -> Self {
        let mut b = SearchBudget::default();
        if let Ok(v) = std::env::var("TREEFOLD_BUDGET") {
            if let Ok(n) = v.parse::<u64>() {
                b.backtrack_nodes = n;
                b.restarts = (n / 10_000).clamp(4, 256) as u32;
            }
        }
        b
    }
}

fn lex_least(p: &FacePoset, pairs: &[(usize, usize)]) -> Option<(usize, usize)> {
    pairs
        .iter()
        .min_by(|a, b| (p.id(a.0), p.id(a.1)).cmp(&(p.id(b.0), p.id(b.1))))
        .copied()
}

/// Greedy descent to a single vertex with a pluggable chooser.
fn run_greedy(
    p: &FacePoset,
    mut choose: impl FnMut(&FacePoset, &[(usize, usize)]) -> Option<(usize, usize)>,
) -> Option<Vec<(usize, usize)>> {
    let mut st = State::new(p);
    let mut steps = Vec::new();
    while st.remaining > 1 {
        let pairs = st.free_pairs();
        let (s, t) = choose(p, &pairs)?;
        st.remove_pair(s, t);
        steps.push((s, t));
    }
    Some(steps)
}

fn backtrack(
    st: &mut State,
    steps: &mut Vec<(usize, usize)>,
    nodes: &mut u64,
    limit: u64,
) -> bool {
    if st.remaining == 1 {
        return true;
    }
    if *nodes >= limit {
        return false;
    }
    *nodes += 1;
    let pairs = st.free_pairs();
    for (s, t) in pairs {
        st.remove_pair(s, t);
        steps.push((s, t));
        if backtrack(st, steps, nodes, limit) {
            return true;
        }
        if *nodes >= limit {
            return false;
        }
        steps.pop();
        st.restore_pair(s, t);
    }
    false
}

/// Search for a collapse of `p` all the way to a single vertex.
pub fn find_collapse_sequence(p: &FacePoset, budget: SearchBudget) -> CollapseOutcome {
    if p.is_empty() {
        return CollapseOutcome::NotFound;
    }
    if p.len() > 1 && free_faces(p).is_empty() {
        return CollapseOutcome::NoFreeFaces;
    }
    let wrap = |steps: Vec<(usize, usize)>| {
        let seq = CollapseSequence {
            start: StartComplex::Poset(p.clone()),
            steps: steps
                .iter()
                .map(|&(s, t)| (p.id(s).to_string(), p.id(t).to_string()))
                .collect(),
            final_ids: final_ids_after(p, &steps),
        };
        debug_assert!(verify_collapse_sequence(&seq).is_ok());
        CollapseOutcome::Collapsed(seq)
    };

    if let Some(steps) = run_greedy(p, lex_least) {
        return wrap(steps);
    }
    for r in 0..budget.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(r as u64));
        let chooser = |_: &FacePoset, pairs: &[(usize, usize)]| pairs.choose(&mut rng).copied();
        if let Some(steps) = run_greedy(p, chooser) {
            return wrap(steps);
        }
    }
    let mut st = State::new(p);
    let mut steps = Vec::new();
    let mut nodes = 0u64;
    if backtrack(&mut st, &mut steps, &mut nodes, budget.backtrack_nodes) {
        return wrap(steps);
    }
    CollapseOutcome::NotFound
}

fn final_ids_after(p: &FacePoset, steps: &[(usize, usize)]) -> BTreeSet<String> {
    let mut gone = vec![false; p.len()];
    for &(s, t) in steps {
        gone[s] = true;
        gone[t] = true;
    }
    (0..p.len()).filter(|&i| !gone[i]).map(|i| p.id(i).to_string()).collect()
}

/// Replay a certificate step by step, checking freeness each time and that
/// the remaining cells match the declared final complex.
pub fn verify_collapse_sequence(seq: &CollapseSequence) -> Result<()> {
    match &seq.start {
        StartComplex::Poset(p) => verify_on_poset(p, seq),
        StartComplex::Product(tp) => verify_on_product(tp, seq),
    }
}

fn verify_on_poset(p: &FacePoset, seq: &CollapseSequence) -> Result<()> {
    let mut st = State::new(p);
    for (k, (sid, tid)) in seq.steps.iter().enumerate() {
        let bad = |reason: &str| Error::InvalidStep { index: k, reason: reason.to_string() };
        let s = p.index_of(sid).ok_or_else(|| bad(&format!("unknown cell {sid}")))?;
        let t = p.index_of(tid).ok_or_else(|| bad(&format!("unknown cell {tid}")))?;
        if !st.alive[s] || !st.alive[t] {
            return Err(bad("cell already removed"));
        }
        if st.is_free(s) != Some(t) {
            return Err(bad(&format!("({sid}, {tid}) is not a free pair here")));
        }
        st.remove_pair(s, t);
    }
    let remaining: BTreeSet<String> = (0..p.len())
        .filter(|&i| st.alive[i])
        .map(|i| p.id(i).to_string())
        .collect();
    if remaining != seq.final_ids {
        return Err(Error::VerificationFailed(format!(
            "final complex mismatch: {} cells remain, {} declared",
            remaining.len(),
            seq.final_ids.len()
        )));
    }
    Ok(())
}

/// Product replay works arithmetically on cell tuples; the ambient face
/// poset is never materialized.
fn verify_on_product(tp: &TreeProduct, seq: &CollapseSequence) -> Result<()> {
    use crate::tree::PCell;
    let parse = |k: usize, id: &str| -> Result<PCell> {
        parse_product_cell(tp, id).ok_or_else(|| Error::InvalidStep {
            index: k,
            reason: format!("{id} is not a cell of the tree product"),
        })
    };
    let mut removed: BTreeSet<PCell> = BTreeSet::new();
    for (k, (sid, tid)) in seq.steps.iter().enumerate() {
        let bad = |reason: String| Error::InvalidStep { index: k, reason };
        let s = parse(k, sid)?;
        let t = parse(k, tid)?;
        if removed.contains(&s) || removed.contains(&t) {
            return Err(bad("cell already removed".into()));
        }
        let live_covers: Vec<PCell> = tp
            .up_covers(&s)
            .into_iter()
            .filter(|c| !removed.contains(c))
            .collect();
        if live_covers.as_slice() != std::slice::from_ref(&t) {
            return Err(bad(format!("({sid}, {tid}) is not a free pair here")));
        }
        if tp.up_covers(&t).iter().any(|c| !removed.contains(c)) {
            return Err(bad(format!("{tid} is not maximal here")));
        }
        removed.insert(s);
        removed.insert(t);
    }
    let total = tp.cell_count();
    let alive = total - 2 * seq.steps.len() as u64;
    if alive != seq.final_ids.len() as u64 {
        return Err(Error::VerificationFailed(format!(
            "final complex mismatch: {alive} cells remain, {} declared",
            seq.final_ids.len()
        )));
    }
    for id in &seq.final_ids {
        let c = parse_product_cell(tp, id)
            .ok_or_else(|| Error::VerificationFailed(format!("{id} is not a product cell")))?;
        if removed.contains(&c) {
            return Err(Error::VerificationFailed(format!("declared final cell {id} was removed")));
        }
    }
    Ok(())
}

/// Parse a canonical product cell id `(c1,...,cn)` back into a tuple.
pub fn parse_product_cell(tp: &TreeProduct, id: &str) -> Option<crate::tree::PCell> {
    use crate::tree::{FCell, PCell};
    let inner = id.strip_prefix('(')?.strip_suffix(')')?;
    let parts: Vec<&str> = if inner.is_empty() { vec![] } else { inner.split(',').collect() };
    if parts.len() != tp.arity() {
        return None;
    }
    let mut cell = Vec::with_capacity(parts.len());
    for (i, part) in parts.iter().enumerate() {
        let t = &tp.trees[i];
        if let Some((a, b)) = part.split_once('~') {
            let (u, w) = (t.vertex_index(a)?, t.vertex_index(b)?);
            let e = t
                .incident_edges(u)
                .iter()
                .find(|&&(_, far)| far == w)
                .map(|&(e, _)| e)?;
            cell.push(FCell::E(e));
        } else {
            cell.push(FCell::V(t.vertex_index(part)?));
        }
    }
    Some(PCell(cell))
}

/// Attach a cone over the subcomplex `q` of its ambient complex, with a
/// fresh apex vertex. Simplicial ambient complexes stay simplicial.
pub fn attach_cone(q: &SubComplex) -> Result<FacePoset> {
    let p = q.ambient();
    let apex = "apex";
    // Simplicial path: cone cells are simplices extended by the apex label.
    let simplicial_labels: Option<Vec<String>> = if p.kind() == Kind::Simplicial {
        let mut labels = Vec::with_capacity(p.len());
        let mut ok = true;
        for i in 0..p.len() {
            if p.rank(i) == 0 {
                match raw_vertex_label(p.id(i)) {
                    Some(l) if l != apex => labels.push(l.to_string()),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            } else {
                labels.push(String::new());
            }
        }
        ok.then_some(labels)
    } else {
        None
    };

    let n = p.len();
    let mut elements: Vec<(String, usize)> = (0..n).map(|i| (p.id(i).to_string(), p.rank(i))).collect();
    let apex_idx = elements.len();
    let cone_id = |i: usize| -> String {
        if let Some(labels) = &simplicial_labels {
            let mut vs: Vec<String> = p
                .vertices_of(i)
                .into_iter()
                .map(|v| labels[v].clone())
                .collect();
            vs.push(apex.to_string());
            crate::id::simplex_id(&vs)
        } else {
            format!("{}:{}", apex, p.id(i))
        }
    };
    elements.push((
        if simplicial_labels.is_some() {
            crate::id::simplex_id(&[apex])
        } else {
            apex.to_string()
        },
        0,
    ));
    let mut cone_of: BTreeMap<usize, usize> = BTreeMap::new();
    for &i in q.members() {
        cone_of.insert(i, elements.len());
        elements.push((cone_id(i), p.rank(i) + 1));
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for &u in p.up_covers(i) {
            covers.push((i, u));
        }
    }
    for &i in q.members() {
        let ci = cone_of[&i];
        covers.push((i, ci));
        if p.rank(i) == 0 {
            covers.push((apex_idx, ci));
        }
        for &d in p.down_covers(i) {
            covers.push((cone_of[&d], ci));
        }
    }
    let kind = if simplicial_labels.is_some() { Kind::Simplicial } else { Kind::General };
    FacePoset::from_parts(kind, elements, covers)
}

use crate::id::raw_vertex_label;

/// Collapse greedily (lexicographically least free pair first) until no
/// free faces remain; returns the core and the certificate reaching it.
pub fn core(p: &FacePoset) -> (FacePoset, CollapseSequence) {
    let mut st = State::new(p);
    let mut steps = Vec::new();
    loop {
        let pairs = st.free_pairs();
        let Some((s, t)) = lex_least(p, &pairs) else { break };
        st.remove_pair(s, t);
        steps.push((s, t));
    }
    let members: Vec<usize> = (0..p.len()).filter(|&i| st.alive[i]).collect();
    let core_poset = SubComplex::new(std::sync::Arc::new(p.clone()), members)
        .expect("collapse keeps down-closure")
        .as_poset();
    let seq = CollapseSequence {
        start: StartComplex::Poset(p.clone()),
        steps: steps
            .iter()
            .map(|&(s, t)| (p.id(s).to_string(), p.id(t).to_string()))
            .collect(),
        final_ids: final_ids_after(p, &steps),
    };
    (core_poset, seq)
}

/// Order a perfect matching on a removal set into a valid elementary
/// collapse sequence (Kahn peeling of the blocker graph). `up_covers`
/// enumerates covers in the ambient complex and `is_alive` says which
/// ambient cells are present before the removal starts. Every cover of a
/// matched face must itself be scheduled for removal, otherwise no order
/// can work; cycles are reported as errors.
pub fn order_matching<C: Ord + Clone + std::fmt::Debug>(
    pairs: &[(C, C)],
    mut up_covers: impl FnMut(&C) -> Vec<C>,
    mut is_alive: impl FnMut(&C) -> bool,
) -> Result<Vec<(C, C)>> {
    let mut owner: BTreeMap<&C, usize> = BTreeMap::new();
    for (k, (s, t)) in pairs.iter().enumerate() {
        if owner.insert(s, k).is_some() || owner.insert(t, k).is_some() {
            return Err(Error::Invalid("matching reuses a cell".into()));
        }
    }
    let mut blockers = vec![0usize; pairs.len()];
    let mut dependents: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, (s, t)) in pairs.iter().enumerate() {
        for (cell, skip) in [(s, Some(t)), (t, None)] {
            for c in up_covers(cell) {
                if skip.map_or(false, |x| *x == c) {
                    continue;
                }
                if !is_alive(&c) {
                    continue;
                }
                match owner.get(&c) {
                    Some(&j) if j != k => {
                        blockers[k] += 1;
                        dependents.entry(j).or_default().push(k);
                    }
                    Some(_) => {}
                    None => {
                        return Err(Error::Invalid(format!(
                            "cover {c:?} of matched cell {cell:?} is not scheduled for removal"
                        )));
                    }
                }
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..pairs.len()).filter(|&k| blockers[k] == 0).collect();
    let mut out = Vec::with_capacity(pairs.len());
    while let Some(&k) = ready.iter().next() {
        ready.remove(&k);
        out.push(pairs[k].clone());
        if let Some(deps) = dependents.get(&k) {
            let deps = deps.clone();
            for d in deps {
                blockers[d] -= 1;
                if blockers[d] == 0 {
                    ready.insert(d);
                }
            }
        }
    }
    if out.len() != pairs.len() {
        return Err(Error::Invalid("matching has a cyclic dependency".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FacePoset;

    fn triangle() -> FacePoset {
        FacePoset::simplicial_from_facets(vec![vec!["1", "2", "3"]]).unwrap()
    }

    fn hollow_triangle() -> FacePoset {
        FacePoset::simplicial_from_facets(vec![vec!["1", "2"], vec!["2", "3"], vec!["1", "3"]])
            .unwrap()
    }

    #[test]
    fn full_triangle_has_three_free_edges() {
        let t = triangle();
        let ff = free_faces(&t);
        assert_eq!(ff.len(), 3);
        for (s, _) in ff {
            assert_eq!(t.rank(s), 1);
        }
    }

    #[test]
    fn lone_vertex_has_no_free_faces() {
        let p = FacePoset::point("v");
        assert!(free_faces(&p).is_empty());
    }

    #[test]
    fn collapse_step_on_triangle() {
        let t = triangle();
        let after = apply_elementary_collapse(&t, "{1,2}", "{1,2,3}").unwrap();
        assert_eq!(after.len(), 5);
        assert_eq!(after.elements_of_rank(0).len(), 3);
        assert_eq!(after.elements_of_rank(1).len(), 2);
        assert!(apply_elementary_collapse(&t, "{1}", "{1,2}").is_err());
    }

    #[test]
    fn collapse_edge_to_vertex() {
        let e = FacePoset::simplicial_from_facets(vec![vec!["1", "2"]]).unwrap();
        let after = apply_elementary_collapse(&e, "{1}", "{1,2}").unwrap();
        assert_eq!(after.len(), 1);
    }

    #[test]
    fn square_collapses_to_a_path() {
        let sq = crate::poset::ops::tests::square();
        let after = apply_elementary_collapse(&sq, "ab", "s").unwrap();
        assert_eq!(after.elements_of_rank(1).len(), 3);
        assert_eq!(after.elements_of_rank(0).len(), 4);
        assert_eq!(after.dim(), Some(1));
    }

    #[test]
    fn simplices_collapse_greedily() {
        for n in 1..=4 {
            let facet: Vec<String> = (0..=n).map(|i| format!("v{i}")).collect();
            let p = FacePoset::simplicial_from_facets(vec![facet]).unwrap();
            match find_collapse_sequence(&p, SearchBudget::default()) {
                CollapseOutcome::Collapsed(seq) => {
                    assert_eq!(seq.final_ids.len(), 1);
                    assert!(verify_collapse_sequence(&seq).is_ok());
                }
                other => panic!("simplex dim {n} did not collapse: {other:?}"),
            }
        }
    }

    #[test]
    fn hollow_triangle_is_its_own_core() {
        let h = hollow_triangle();
        assert!(free_faces(&h).is_empty());
        let (c, seq) = core(&h);
        assert_eq!(c.len(), h.len());
        assert!(seq.is_empty());
        assert!(matches!(
            find_collapse_sequence(&h, SearchBudget::default()),
            CollapseOutcome::NoFreeFaces
        ));
    }

    #[test]
    fn core_of_triangle_is_a_vertex() {
        let (c, seq) = core(&triangle());
        assert_eq!(c.len(), 1);
        assert_eq!(seq.len(), 3);
        assert!(verify_collapse_sequence(&seq).is_ok());
        assert!(free_faces(&c).is_empty());
    }

    #[test]
    fn tampered_sequence_is_rejected_at_its_index() {
        let t = triangle();
        let CollapseOutcome::Collapsed(mut seq) = find_collapse_sequence(&t, SearchBudget::default())
        else {
            panic!("triangle collapses");
        };
        // Make the second step a non-free pair.
        seq.steps[1] = (seq.steps[1].1.clone(), seq.steps[1].0.clone());
        match verify_collapse_sequence(&seq) {
            Err(Error::InvalidStep { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected invalid step, got {other:?}"),
        }
    }

    #[test]
    fn attach_cone_edge_over_vertex_is_a_path() {
        let e = std::sync::Arc::new(FacePoset::simplicial_from_facets(vec![vec!["1", "2"]]).unwrap());
        let q = SubComplex::from_ids(e.clone(), &["{1}"]).unwrap();
        let c = attach_cone(&q).unwrap();
        assert_eq!(c.kind(), Kind::Simplicial);
        assert!(c.validate().is_ok());
        assert_eq!(c.elements_of_rank(0).len(), 3);
        assert_eq!(c.elements_of_rank(1).len(), 2);
    }

    #[test]
    fn attach_cone_over_self_of_point_is_an_edge() {
        let p = std::sync::Arc::new(FacePoset::point("x"));
        let q = SubComplex::from_ids(p.clone(), &["{x}"]).unwrap();
        let c = attach_cone(&q).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.dim(), Some(1));
    }

    #[test]
    fn coning_off_a_collapse_target_restores_collapsibility() {
        // triangle collapses onto an edge; triangle + cone(edge) collapses to a point
        let t = std::sync::Arc::new(triangle());
        let q = SubComplex::from_ids(t.clone(), &["{1}", "{2}", "{1,2}"]).unwrap();
        let c = attach_cone(&q).unwrap();
        assert!(matches!(
            find_collapse_sequence(&c, SearchBudget::default()),
            CollapseOutcome::Collapsed(_)
        ));
    }

    #[test]
    fn euler_characteristic_one_after_full_collapse() {
        let t = triangle();
        if let CollapseOutcome::Collapsed(_) = find_collapse_sequence(&t, SearchBudget::default()) {
            assert_eq!(t.euler_characteristic(), 1);
        }
    }

    #[test]
    fn order_matching_sorts_a_cone_peel() {
        // Removing the whole triangle except vertex {3}: pairs must come out
        // in an order where each face is free when removed.
        let t = triangle();
        let pairs = vec![
            ("{1}".to_string(), "{1,3}".to_string()),
            ("{2}".to_string(), "{2,3}".to_string()),
            ("{1,2}".to_string(), "{1,2,3}".to_string()),
        ];
        let idx = |id: &String| t.index_of(id).unwrap();
        let ordered = order_matching(
            &pairs,
            |c| {
                t.up_covers(idx(c))
                    .iter()
                    .map(|&u| t.id(u).to_string())
                    .collect()
            },
            |_| true,
        )
        .unwrap();
        assert_eq!(ordered[0], pairs[2], "top pair must peel first");
        let seq = CollapseSequence {
            start: StartComplex::Poset(t.clone()),
            steps: ordered,
            final_ids: ["{3}".to_string()].into_iter().collect(),
        };
        assert!(verify_collapse_sequence(&seq).is_ok());
    }
}
