//! Finite trees and products of trees.
//!
//! A product of trees is a cubical complex whose cells are tuples with one
//! vertex-or-edge entry per factor. Products get large quickly, so
//! [`TreeProduct`] never stores its cells: faces, cofaces and membership
//! are computed arithmetically on [`PCell`] tuples, and a [`FacePoset`] is
//! materialized only on demand (for small instances and final artifacts).

use crate::error::{Error, Result};
use crate::id;
use crate::poset::{FacePoset, Kind};
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Debug)]
pub struct Tree {
    vertex_ids: Vec<String>,
    vertex_stage: Vec<u32>,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<(u32, u32)>>, // vertex -> (edge index, far endpoint)
    base: Option<u32>,
    index: HashMap<String, u32>,
}

impl Tree {
    pub fn single_vertex(label: impl Into<String>) -> Tree {
        let label = label.into();
        let mut index = HashMap::new();
        index.insert(label.clone(), 0);
        Tree {
            vertex_ids: vec![label],
            vertex_stage: vec![0],
            edges: vec![],
            adj: vec![vec![]],
            base: Some(0),
            index,
        }
    }

    pub fn from_edges(
        vertices: Vec<String>,
        edges: Vec<(String, String)>,
        base: Option<String>,
    ) -> Result<Tree> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i as u32).is_some() {
                return Err(Error::Invalid(format!("duplicate tree vertex `{v}`")));
            }
        }
        let mut t = Tree {
            adj: vec![vec![]; vertices.len()],
            vertex_stage: vec![0; vertices.len()],
            vertex_ids: vertices,
            edges: vec![],
            base: None,
            index,
        };
        for (a, b) in edges {
            let (Some(&u), Some(&w)) = (t.index.get(&a), t.index.get(&b)) else {
                return Err(Error::UnknownElement(format!("tree edge endpoint {a} or {b}")));
            };
            if u == w {
                return Err(Error::Invalid(format!("loop edge at `{a}`")));
            }
            let e = t.edges.len() as u32;
            t.edges.push(if u < w { (u, w) } else { (w, u) });
            t.adj[u as usize].push((e, w));
            t.adj[w as usize].push((e, u));
        }
        if let Some(b) = base {
            t.base = Some(*t.index.get(&b).ok_or_else(|| Error::UnknownElement(b.clone()))?);
        }
        t.check_tree()?;
        Ok(t)
    }

    pub fn path(labels: &[&str]) -> Tree {
        let vertices: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let edges = labels
            .windows(2)
            .map(|w| (w[0].to_string(), w[1].to_string()))
            .collect();
        Tree::from_edges(vertices, edges, Some(labels[0].to_string())).expect("path is a tree")
    }

    fn check_tree(&self) -> Result<()> {
        let n = self.vertex_ids.len();
        if n == 0 {
            return Err(Error::Invalid("empty tree".into()));
        }
        if self.edges.len() + 1 != n {
            return Err(Error::Invalid(format!(
                "{} vertices and {} edges cannot form a tree",
                n,
                self.edges.len()
            )));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(_, w) in &self.adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != n {
            return Err(Error::Invalid("tree is not connected".into()));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn cell_count(&self) -> usize {
        self.vertex_ids.len() + self.edges.len()
    }

    pub fn vertex_id(&self, v: u32) -> &str {
        &self.vertex_ids[v as usize]
    }

    pub fn vertex_index(&self, label: &str) -> Option<u32> {
        self.index.get(label).copied()
    }

    pub fn base(&self) -> Option<u32> {
        self.base
    }

    pub fn stage_of(&self, v: u32) -> u32 {
        self.vertex_stage[v as usize]
    }

    pub fn edge_endpoints(&self, e: u32) -> (u32, u32) {
        self.edges[e as usize]
    }

    pub fn far_endpoint(&self, e: u32, v: u32) -> u32 {
        let (a, b) = self.edges[e as usize];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn incident_edges(&self, v: u32) -> &[(u32, u32)] {
        &self.adj[v as usize]
    }

    pub fn edge_id(&self, e: u32) -> String {
        let (a, b) = self.edges[e as usize];
        id::edge_id(&self.vertex_ids[a as usize], &self.vertex_ids[b as usize])
    }

    pub fn cell_id(&self, c: FCell) -> String {
        match c {
            FCell::V(v) => self.vertex_ids[v as usize].clone(),
            FCell::E(e) => self.edge_id(e),
        }
    }

    /// Attach a fresh leaf edge at `at`; returns (edge index, new vertex).
    pub fn attach_edge(&mut self, at: u32, leaf_label: impl Into<String>, stage: u32) -> (u32, u32) {
        let label = leaf_label.into();
        assert!(
            !self.index.contains_key(&label),
            "leaf label `{label}` already used in tree"
        );
        let v = self.vertex_ids.len() as u32;
        self.index.insert(label.clone(), v);
        self.vertex_ids.push(label);
        self.vertex_stage.push(stage);
        self.adj.push(vec![]);
        let e = self.edges.len() as u32;
        self.edges.push(if at < v { (at, v) } else { (v, at) });
        self.adj[at as usize].push((e, v));
        self.adj[v as usize].push((e, at));
        (e, v)
    }

    /// Growth-stage partial order on vertices: `v < w` when `v` was added at
    /// an earlier stage and `w` grew out of the same branch, i.e. `v` and `w`
    /// are connected through vertices no older than `v`.
    pub fn stage_lt(&self, v: u32, w: u32) -> bool {
        if v == w || self.vertex_stage[v as usize] >= self.vertex_stage[w as usize] {
            return false;
        }
        let cutoff = self.vertex_stage[v as usize];
        let mut seen = vec![false; self.vertex_ids.len()];
        seen[v as usize] = true;
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            if x == w {
                return true;
            }
            for &(_, y) in &self.adj[x as usize] {
                if !seen[y as usize] && self.vertex_stage[y as usize] >= cutoff {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    /// The tree as a one-dimensional simplicial face poset. Vertex ids are
    /// the raw labels so they agree with product cell ids.
    pub fn as_poset(&self) -> FacePoset {
        let mut elements = Vec::with_capacity(self.cell_count());
        for v in &self.vertex_ids {
            elements.push((v.clone(), 0));
        }
        for e in 0..self.edges.len() {
            elements.push((self.edge_id(e as u32), 1));
        }
        let nv = self.vertex_ids.len();
        let mut covers = Vec::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            covers.push((a as usize, nv + e));
            covers.push((b as usize, nv + e));
        }
        FacePoset::from_parts(Kind::Simplicial, elements, covers).expect("tree poset")
    }
}

/// One coordinate of a product cell: a vertex or an edge of that factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FCell {
    V(u32),
    E(u32),
}

/// A cell of a product of trees: one vertex-or-edge entry per factor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PCell(pub Vec<FCell>);

impl PCell {
    pub fn dim(&self) -> usize {
        self.0.iter().filter(|c| matches!(c, FCell::E(_))).count()
    }

    pub fn vertex_coords(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, c)| matches!(c, FCell::V(_)).then_some(i))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct TreeProduct {
    pub trees: Vec<Tree>,
}

impl TreeProduct {
    pub fn new(trees: Vec<Tree>) -> TreeProduct {
        TreeProduct { trees }
    }

    pub fn arity(&self) -> usize {
        self.trees.len()
    }

    pub fn cell_count(&self) -> u64 {
        self.trees.iter().map(|t| t.cell_count() as u64).product()
    }

    pub fn cell_id(&self, c: &PCell) -> String {
        let parts: Vec<String> = c
            .0
            .iter()
            .zip(&self.trees)
            .map(|(&f, t)| t.cell_id(f))
            .collect();
        id::tuple_id(&parts)
    }

    pub fn contains(&self, c: &PCell) -> bool {
        c.0.len() == self.trees.len()
            && c.0.iter().zip(&self.trees).all(|(&f, t)| match f {
                FCell::V(v) => (v as usize) < t.vertex_count(),
                FCell::E(e) => (e as usize) < t.edge_count(),
            })
    }

    /// Cells covered by `c`: replace one edge coordinate by an endpoint.
    pub fn down_covers(&self, c: &PCell) -> Vec<PCell> {
        let mut out = Vec::new();
        for (i, &f) in c.0.iter().enumerate() {
            if let FCell::E(e) = f {
                let (a, b) = self.trees[i].edge_endpoints(e);
                for v in [a, b] {
                    let mut d = c.clone();
                    d.0[i] = FCell::V(v);
                    out.push(d);
                }
            }
        }
        out
    }

    /// Cells covering `c`: replace one vertex coordinate by an incident edge.
    pub fn up_covers(&self, c: &PCell) -> Vec<PCell> {
        let mut out = Vec::new();
        for (i, &f) in c.0.iter().enumerate() {
            if let FCell::V(v) = f {
                for &(e, _) in self.trees[i].incident_edges(v) {
                    let mut u = c.clone();
                    u.0[i] = FCell::E(e);
                    out.push(u);
                }
            }
        }
        out
    }

    pub fn is_face(&self, a: &PCell, b: &PCell) -> bool {
        a.0.iter().zip(&b.0).enumerate().all(|(i, (&fa, &fb))| match (fa, fb) {
            (FCell::V(u), FCell::V(w)) => u == w,
            (FCell::E(e), FCell::E(f)) => e == f,
            (FCell::V(u), FCell::E(e)) => {
                let (x, y) = self.trees[i].edge_endpoints(e);
                u == x || u == y
            }
            (FCell::E(_), FCell::V(_)) => false,
        })
    }

    /// All faces of `c` (including `c`), as the product of coordinate faces.
    pub fn faces_of(&self, c: &PCell) -> Vec<PCell> {
        let mut out = vec![PCell(vec![])];
        for (i, &f) in c.0.iter().enumerate() {
            let choices: Vec<FCell> = match f {
                FCell::V(v) => vec![FCell::V(v)],
                FCell::E(e) => {
                    let (a, b) = self.trees[i].edge_endpoints(e);
                    vec![FCell::V(a), FCell::V(b), FCell::E(e)]
                }
            };
            let mut next = Vec::with_capacity(out.len() * choices.len());
            for base in &out {
                for &ch in &choices {
                    let mut ext = base.clone();
                    ext.0.push(ch);
                    next.push(ext);
                }
            }
            out = next;
        }
        out
    }

    pub fn closure(&self, cells: &BTreeSet<PCell>) -> BTreeSet<PCell> {
        let mut out = BTreeSet::new();
        for c in cells {
            for f in self.faces_of(c) {
                out.insert(f);
            }
        }
        out
    }

    pub fn is_down_closed(&self, cells: &BTreeSet<PCell>) -> bool {
        cells.iter().all(|c| self.down_covers(c).iter().all(|d| cells.contains(d)))
    }

    /// The vertex cell at the tuple of per-tree base vertices.
    pub fn base_vertex(&self) -> PCell {
        PCell(self.trees.iter().map(|t| FCell::V(t.base().unwrap_or(0))).collect())
    }

    fn radix(&self, i: usize) -> usize {
        self.trees[i].cell_count()
    }

    fn digit(&self, i: usize, f: FCell) -> usize {
        match f {
            FCell::V(v) => v as usize,
            FCell::E(e) => self.trees[i].vertex_count() + e as usize,
        }
    }

    fn position(&self, c: &PCell) -> usize {
        let mut pos = 0usize;
        for (i, &f) in c.0.iter().enumerate() {
            pos = pos * self.radix(i) + self.digit(i, f);
        }
        pos
    }

    fn all_cells(&self) -> Vec<PCell> {
        let mut out = vec![PCell(vec![])];
        for (i, t) in self.trees.iter().enumerate() {
            let mut choices: Vec<FCell> = (0..t.vertex_count() as u32).map(FCell::V).collect();
            choices.extend((0..t.edge_count() as u32).map(FCell::E));
            let mut next = Vec::with_capacity(out.len() * choices.len());
            for base in &out {
                for &ch in &choices {
                    let mut ext = base.clone();
                    ext.0.push(ch);
                    next.push(ext);
                }
            }
            out = next;
            let _ = i;
        }
        out
    }

    /// Materialize the full cubical face poset. Only sensible for small
    /// products; the embedding pipeline works arithmetically instead.
    pub fn materialize(&self) -> FacePoset {
        let cells = self.all_cells();
        let mut elements = Vec::with_capacity(cells.len());
        for c in &cells {
            elements.push((self.cell_id(c), c.dim()));
        }
        let mut covers = Vec::new();
        for (ci, c) in cells.iter().enumerate() {
            debug_assert_eq!(self.position(c), ci);
            for d in self.down_covers(c) {
                covers.push((self.position(&d), ci));
            }
        }
        FacePoset::from_parts(Kind::Cubical, elements, covers).expect("tree product poset")
    }

    /// Materialize the induced poset on a down-closed set of cells.
    pub fn materialize_subcomplex(&self, cells: &BTreeSet<PCell>) -> Result<FacePoset> {
        if !self.is_down_closed(cells) {
            return Err(Error::NotDownClosed("tree product subcomplex".into()));
        }
        let list: Vec<&PCell> = cells.iter().collect();
        let mut pos = HashMap::new();
        for (i, c) in list.iter().enumerate() {
            pos.insert((*c).clone(), i);
        }
        let mut elements = Vec::with_capacity(list.len());
        let mut covers = Vec::new();
        for (i, c) in list.iter().enumerate() {
            elements.push((self.cell_id(c), c.dim()));
            for d in self.down_covers(c) {
                covers.push((pos[&d], i));
            }
        }
        FacePoset::from_parts(Kind::Cubical, elements, covers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_tree_basics() {
        let t = Tree::path(&["u0", "u1", "u2"]);
        assert_eq!(t.vertex_count(), 3);
        assert_eq!(t.edge_count(), 2);
        assert_eq!(t.edge_id(0), "u0~u1");
        assert!(t.as_poset().validate().is_ok());
    }

    #[test]
    fn rejects_cycles_and_disconnected() {
        let cyc = Tree::from_edges(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                ("a".into(), "b".into()),
                ("b".into(), "c".into()),
                ("c".into(), "a".into()),
            ],
            None,
        );
        assert!(cyc.is_err());
        let disc = Tree::from_edges(vec!["a".into(), "b".into()], vec![], None);
        assert!(disc.is_err());
    }

    #[test]
    fn product_cell_arithmetic_matches_materialization() {
        let p = TreeProduct::new(vec![Tree::path(&["a", "b", "c"]), Tree::path(&["x", "y"])]);
        assert_eq!(p.cell_count(), 5 * 3);
        let m = p.materialize();
        assert_eq!(m.len(), 15);
        assert!(m.validate().is_ok());
        assert_eq!(m.elements_of_rank(2).len(), 2); // two squares

        let sq = PCell(vec![FCell::E(0), FCell::E(0)]);
        assert_eq!(p.down_covers(&sq).len(), 4);
        assert_eq!(p.faces_of(&sq).len(), 9);
        let v = PCell(vec![FCell::V(1), FCell::V(0)]);
        assert_eq!(p.up_covers(&v).len(), 3);
        assert!(p.is_face(&v, &sq));
    }

    #[test]
    fn subcomplex_materialization_requires_down_closure() {
        let p = TreeProduct::new(vec![Tree::path(&["a", "b"]), Tree::path(&["x", "y"])]);
        let sq = PCell(vec![FCell::E(0), FCell::E(0)]);
        let just_top: BTreeSet<PCell> = [sq.clone()].into_iter().collect();
        assert!(p.materialize_subcomplex(&just_top).is_err());
        let closed = p.closure(&just_top);
        let sub = p.materialize_subcomplex(&closed).unwrap();
        assert_eq!(sub.len(), 9);
    }

    #[test]
    fn stage_order_tracks_branches() {
        let mut t = Tree::single_vertex("r");
        let (_, a) = t.attach_edge(0, "a", 1);
        let (_, b) = t.attach_edge(0, "b", 1);
        let (_, a2) = t.attach_edge(a, "a2", 2);
        assert!(t.stage_lt(a, a2));
        assert!(!t.stage_lt(b, a2)); // different branch off the stage-0 tree
        assert!(!t.stage_lt(a2, a));
        assert!(!t.stage_lt(a, b)); // same stage
    }
}
