//! Poset isomorphism by color refinement plus backtracking.
//!
//! Elements are first partitioned by iterated structural colors (rank and
//! the multiset of neighbor colors along covers, both ways). Backtracking
//! then matches the smallest color classes first. A node budget turns huge
//! searches into an explicit third verdict instead of silently spinning.

use super::FacePoset;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// Witness mapping: id in the left poset -> id in the right poset.
    Isomorphic(BTreeMap<String, String>),
    NotIsomorphic,
    BudgetExhausted,
}

fn fnv(mut h: u64, x: u64) -> u64 {
    h ^= x;
    h = h.wrapping_mul(0x100000001b3);
    h
}

fn refine(p: &FacePoset, initial: &[u64]) -> Vec<u64> {
    let mut colors = initial.to_vec();
    for _ in 0..(2 + (p.len() as f64).log2().ceil() as usize) {
        let mut next = Vec::with_capacity(p.len());
        for i in 0..p.len() {
            let mut h = fnv(0xcbf29ce484222325, colors[i]);
            let mut ups: Vec<u64> = p.up_covers(i).iter().map(|&j| colors[j]).collect();
            ups.sort_unstable();
            h = fnv(h, 0x75);
            for c in ups {
                h = fnv(h, c);
            }
            let mut downs: Vec<u64> = p.down_covers(i).iter().map(|&j| colors[j]).collect();
            downs.sort_unstable();
            h = fnv(h, 0x64);
            for c in downs {
                h = fnv(h, c);
            }
            next.push(h);
        }
        if next == colors {
            break;
        }
        colors = next;
    }
    colors
}

/// Isomorphism of posets (cover-relation digraph isomorphism respecting
/// rank). The kind tags are ignored.
pub fn isomorphism(p: &FacePoset, q: &FacePoset, budget: u64) -> IsoVerdict {
    isomorphism_with(p, q, budget, |_, _| true)
}

/// Isomorphism with an extra compatibility predicate on element pairs
/// (used for color-preserving matching of colored complexes).
pub fn isomorphism_with(
    p: &FacePoset,
    q: &FacePoset,
    budget: u64,
    compat: impl Fn(usize, usize) -> bool,
) -> IsoVerdict {
    if p.len() != q.len() {
        return IsoVerdict::NotIsomorphic;
    }
    if p.is_empty() {
        return IsoVerdict::Isomorphic(BTreeMap::new());
    }
    let init = |x: &FacePoset| -> Vec<u64> {
        (0..x.len())
            .map(|i| {
                fnv(
                    fnv(fnv(0x9e3779b97f4a7c15, x.rank(i) as u64), x.up_covers(i).len() as u64),
                    x.down_covers(i).len() as u64,
                )
            })
            .collect()
    };
    let pc = refine(p, &init(p));
    let qc = refine(q, &init(q));

    let mut p_classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, &c) in pc.iter().enumerate() {
        p_classes.entry(c).or_default().push(i);
    }
    let mut q_classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (i, &c) in qc.iter().enumerate() {
        q_classes.entry(c).or_default().push(i);
    }
    if p_classes.len() != q_classes.len()
        || p_classes
            .iter()
            .any(|(c, v)| q_classes.get(c).map_or(true, |w| w.len() != v.len()))
    {
        return IsoVerdict::NotIsomorphic;
    }

    // Match elements in order of ascending class size, then canonical order.
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| (p_classes[&pc[i]].len(), i));

    struct Search<'a, F> {
        p: &'a FacePoset,
        q: &'a FacePoset,
        pc: &'a [u64],
        qc: &'a [u64],
        order: &'a [usize],
        compat: F,
        map: Vec<Option<usize>>,
        used: Vec<bool>,
        nodes: u64,
        budget: u64,
        exhausted: bool,
    }

    impl<F: Fn(usize, usize) -> bool> Search<'_, F> {
        fn consistent(&self, a: usize, b: usize) -> bool {
            if self.p.rank(a) != self.q.rank(b) || self.pc[a] != self.qc[b] {
                return false;
            }
            if !(self.compat)(a, b) {
                return false;
            }
            for &u in self.p.up_covers(a) {
                if let Some(v) = self.map[u] {
                    if !self.q.up_covers(b).contains(&v) {
                        return false;
                    }
                }
            }
            for &d in self.p.down_covers(a) {
                if let Some(v) = self.map[d] {
                    if !self.q.down_covers(b).contains(&v) {
                        return false;
                    }
                }
            }
            // Covers must be matched in both directions: check preimages too.
            for &v in self.q.up_covers(b) {
                if self.used[v] {
                    let a2 = self.map.iter().position(|&m| m == Some(v)).unwrap();
                    if !self.p.up_covers(a).contains(&a2) {
                        return false;
                    }
                }
            }
            for &v in self.q.down_covers(b) {
                if self.used[v] {
                    let a2 = self.map.iter().position(|&m| m == Some(v)).unwrap();
                    if !self.p.down_covers(a).contains(&a2) {
                        return false;
                    }
                }
            }
            true
        }

        fn go(&mut self, depth: usize) -> bool {
            if depth == self.order.len() {
                return true;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exhausted = true;
                return false;
            }
            let a = self.order[depth];
            for b in 0..self.q.len() {
                if self.used[b] || !self.consistent(a, b) {
                    continue;
                }
                self.map[a] = Some(b);
                self.used[b] = true;
                if self.go(depth + 1) {
                    return true;
                }
                if self.exhausted {
                    return false;
                }
                self.map[a] = None;
                self.used[b] = false;
            }
            false
        }
    }

    let mut s = Search {
        p,
        q,
        pc: &pc,
        qc: &qc,
        order: &order,
        compat,
        map: vec![None; p.len()],
        used: vec![false; q.len()],
        nodes: 0,
        budget,
        exhausted: false,
    };
    if s.go(0) {
        let mut witness = BTreeMap::new();
        for (a, b) in s.map.iter().enumerate() {
            witness.insert(p.id(a).to_string(), q.id(b.unwrap()).to_string());
        }
        IsoVerdict::Isomorphic(witness)
    } else if s.exhausted {
        IsoVerdict::BudgetExhausted
    } else {
        IsoVerdict::NotIsomorphic
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(labels: &[&str]) -> FacePoset {
        let n = labels.len();
        let facets: Vec<Vec<String>> = (0..n)
            .map(|i| vec![labels[i].to_string(), labels[(i + 1) % n].to_string()])
            .collect();
        FacePoset::simplicial_from_facets(facets).unwrap()
    }

    #[test]
    fn triangle_vs_square_differ() {
        let t = FacePoset::simplicial_from_facets(vec![vec!["1", "2", "3"]]).unwrap();
        let s = super::super::ops::tests::square();
        assert_eq!(isomorphism(&t, &s, 10_000), IsoVerdict::NotIsomorphic);
    }

    #[test]
    fn hexagon_relabelings_are_isomorphic() {
        let a = cycle(&["1", "2", "3", "4", "5", "6"]);
        let b = cycle(&["4", "6", "2", "5", "1", "3"]);
        assert!(matches!(isomorphism(&a, &b, 100_000), IsoVerdict::Isomorphic(_)));
    }

    #[test]
    fn hexagon_vs_two_triangles_differ() {
        let a = cycle(&["1", "2", "3", "4", "5", "6"]);
        let b = FacePoset::simplicial_from_facets(vec![
            vec!["1", "2"],
            vec!["2", "3"],
            vec!["3", "1"],
            vec!["4", "5"],
            vec!["5", "6"],
            vec!["6", "4"],
        ])
        .unwrap();
        assert_eq!(isomorphism(&a, &b, 100_000), IsoVerdict::NotIsomorphic);
    }

    #[test]
    fn witness_maps_covers_to_covers() {
        let a = cycle(&["1", "2", "3", "4"]);
        let b = cycle(&["w", "x", "y", "z"]);
        let IsoVerdict::Isomorphic(w) = isomorphism(&a, &b, 100_000) else {
            panic!("expected isomorphism");
        };
        for i in 0..a.len() {
            let bi = b.index_of(&w[a.id(i)]).unwrap();
            for &u in a.up_covers(i) {
                let bu = b.index_of(&w[a.id(u)]).unwrap();
                assert!(b.up_covers(bi).contains(&bu));
            }
        }
    }
}
