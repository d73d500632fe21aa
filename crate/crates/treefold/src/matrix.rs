//! Dense integer matrices with the exact normal forms needed for integer
//! cohomology and subgroup lattices: Smith normal form with unimodular
//! transforms (and their inverses), Hermite normal form as a canonical
//! lattice representative, and exact linear solving over the integers.
//!
//! Entries are `i128`; all arithmetic is exact and panics on overflow in
//! debug builds. Matrices in this crate stay small (a few hundred rows),
//! so the cubic pivoting algorithms are fine.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i128>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = i128;
    fn index(&self, (r, c): (usize, usize)) -> &i128 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut i128 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self[(r, c)]).collect()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<i128> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[i128]) {
        assert_eq!(v.len(), self.rows);
        for r in 0..self.rows {
            self[(r, c)] = v[r];
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<i128>>) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            m.set_column(j, col);
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let t = self[(a, c)];
            self[(a, c)] = self[(b, c)];
            self[(b, c)] = t;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let t = self[(r, a)];
            self[(r, a)] = self[(r, b)];
            self[(r, b)] = t;
        }
    }

    /// row[a] += q * row[b]
    fn add_row(&mut self, a: usize, b: usize, q: i128) {
        for c in 0..self.cols {
            let t = self[(b, c)];
            self[(a, c)] += q * t;
        }
    }

    /// col[a] += q * col[b]
    fn add_col(&mut self, a: usize, b: usize, q: i128) {
        for r in 0..self.rows {
            let t = self[(r, b)];
            self[(r, a)] += q * t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for c in 0..self.cols {
            self[(a, c)] = -self[(a, c)];
        }
    }

    fn negate_col(&mut self, a: usize) {
        for r in 0..self.rows {
            self[(r, a)] = -self[(r, a)];
        }
    }
}

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and `D`
/// diagonal with a divisibility chain `d_1 | d_2 | ...`. Inverses of the
/// transforms are tracked alongside, so presentations can be pulled back.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Mat,
    pub uinv: Mat,
    pub d: Mat,
    pub v: Mat,
    pub vinv: Mat,
}

impl Snf {
    pub fn rank(&self) -> usize {
        let n = self.d.rows.min(self.d.cols);
        (0..n).filter(|&i| self.d[(i, i)] != 0).count()
    }

    /// Nonzero diagonal entries (the invariant factors).
    pub fn invariant_factors(&self) -> Vec<i128> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d[(i, i)]).filter(|&x| x != 0).collect()
    }
}

pub fn smith_normal_form(m: &Mat) -> Snf {
    let mut d = m.clone();
    let mut u = Mat::identity(m.rows);
    let mut uinv = Mat::identity(m.rows);
    let mut v = Mat::identity(m.cols);
    let mut vinv = Mat::identity(m.cols);

    let n = d.rows.min(d.cols);
    let mut k = 0;
    while k < n {
        // Find a pivot of minimal absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for r in k..d.rows {
            for c in k..d.cols {
                let x = d[(r, c)].abs();
                if x != 0 && pivot.map_or(true, |(pr, pc)| x < d[(pr, pc)].abs()) {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        d.swap_rows(k, pr);
        u.swap_rows(k, pr);
        uinv.swap_cols(k, pr);
        d.swap_cols(k, pc);
        v.swap_cols(k, pc);
        vinv.swap_rows(k, pc);

        // Clear row and column k; restart if a remainder creates a smaller pivot.
        let mut dirty = true;
        while dirty {
            dirty = false;
            for r in k + 1..d.rows {
                if d[(r, k)] != 0 {
                    let q = d[(r, k)].div_euclid(d[(k, k)]);
                    d.add_row(r, k, -q);
                    u.add_row(r, k, -q);
                    uinv.add_col(k, r, q);
                    if d[(r, k)] != 0 {
                        d.swap_rows(k, r);
                        u.swap_rows(k, r);
                        uinv.swap_cols(k, r);
                        dirty = true;
                    }
                }
            }
            for c in k + 1..d.cols {
                if d[(k, c)] != 0 {
                    let q = d[(k, c)].div_euclid(d[(k, k)]);
                    d.add_col(c, k, -q);
                    v.add_col(c, k, -q);
                    vinv.add_row(k, c, q);
                    if d[(k, c)] != 0 {
                        d.swap_cols(k, c);
                        v.swap_cols(k, c);
                        vinv.swap_rows(k, c);
                        dirty = true;
                    }
                }
            }
        }

        // Enforce divisibility of the trailing block by the pivot.
        let p = d[(k, k)];
        let mut fixed = true;
        'scan: for r in k + 1..d.rows {
            for c in k + 1..d.cols {
                if d[(r, c)] % p != 0 {
                    d.add_row(k, r, 1);
                    u.add_row(k, r, 1);
                    uinv.add_col(r, k, -1);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            if d[(k, k)] < 0 {
                d.negate_row(k);
                u.negate_row(k);
                uinv.negate_col(k);
            }
            k += 1;
        }
    }

    debug_assert_eq!(u.mul(m).mul(&v), d);
    debug_assert_eq!(u.mul(&uinv), Mat::identity(m.rows));
    debug_assert_eq!(vinv.mul(&v), Mat::identity(m.cols));
    Snf { u, uinv, d, v, vinv }
}

/// Basis for the integer kernel of `m`, as columns.
pub fn kernel_basis(m: &Mat) -> Vec<Vec<i128>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols).map(|j| snf.v.column(j)).collect()
}

/// Solve `m x = b` exactly over the integers.
pub fn solve(m: &Mat, b: &[i128]) -> Option<Vec<i128>> {
    let snf = smith_normal_form(m);
    let y = snf.u.mul_vec(b);
    let mut z = vec![0i128; m.cols];
    let n = m.rows.min(m.cols);
    for i in 0..n {
        let d = snf.d[(i, i)];
        if d == 0 {
            if y[i] != 0 {
                return None;
            }
        } else {
            if y[i] % d != 0 {
                return None;
            }
            z[i] = y[i] / d;
        }
    }
    for (i, &yi) in y.iter().enumerate().skip(n) {
        if yi != 0 {
            return None;
        }
        let _ = i;
    }
    Some(snf.v.mul_vec(&z))
}

/// Row-style Hermite normal form: the canonical upper-echelon basis of the
/// row space. Two matrices have equal row lattices iff their HNFs agree.
pub fn row_hnf(m: &Mat) -> Mat {
    let mut a = m.clone();
    let mut pivot_row = 0;
    for col in 0..a.cols {
        if pivot_row >= a.rows {
            break;
        }
        // gcd-eliminate below pivot_row in this column
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..a.rows {
                if a[(r, col)] != 0
                    && best.map_or(true, |b| a[(r, col)].abs() < a[(b, col)].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(pivot_row, b);
            let mut any = false;
            for r in pivot_row + 1..a.rows {
                if a[(r, col)] != 0 {
                    let q = a[(r, col)].div_euclid(a[(pivot_row, col)]);
                    a.add_row(r, pivot_row, -q);
                    if a[(r, col)] != 0 {
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
        }
        if a[(pivot_row, col)] != 0 {
            if a[(pivot_row, col)] < 0 {
                a.negate_row(pivot_row);
            }
            let p = a[(pivot_row, col)];
            for r in 0..pivot_row {
                let q = a[(r, col)].div_euclid(p);
                if q != 0 {
                    a.add_row(r, pivot_row, -q);
                }
            }
            pivot_row += 1;
        }
    }
    // Drop zero rows for canonicity.
    let rows: Vec<Vec<i128>> = a
        .to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    if rows.is_empty() {
        Mat::zeros(0, m.cols)
    } else {
        Mat::from_rows(rows)
    }
}

/// Canonical form of the lattice spanned by the columns of `m`.
pub fn column_lattice_hnf(m: &Mat) -> Mat {
    row_hnf(&m.transpose())
}

/// The index `[L1 : L2]` of column lattices with `L2 ⊆ L1` of equal rank.
/// Returns `None` when ranks differ (infinite index) or containment fails.
pub fn lattice_index(l1: &Mat, l2: &Mat) -> Option<i128> {
    let b1 = column_lattice_hnf(l1); // rows = basis vectors
    let b2 = column_lattice_hnf(l2);
    if b1.rows != b2.rows {
        return None;
    }
    if b1.rows == 0 {
        return Some(1);
    }
    // Express each basis vector of L2 in the basis of L1.
    let basis1 = b1.transpose(); // columns are basis of L1
    let mut coords = Vec::new();
    for i in 0..b2.rows {
        let v: Vec<i128> = (0..b2.cols).map(|c| b2[(i, c)]).collect();
        coords.push(solve(&basis1, &v)?);
    }
    let c = Mat::from_rows(coords);
    let snf = smith_normal_form(&c);
    if snf.rank() < c.rows {
        return None;
    }
    Some(snf.invariant_factors().iter().product::<i128>().abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn snf_identity() {
        let m = Mat::identity(3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, Mat::identity(3));
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_diag_2_3_gives_1_6() {
        let m = Mat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors(), vec![1, 6]);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_matches_gcd_det_oracle() {
        // d1 = gcd of entries, d1*d2 = |det|.
        let m = Mat::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let entries_gcd = gcd(gcd(2, 4), gcd(6, 8));
        let det: i128 = 2 * 8 - 4 * 6;
        let snf = smith_normal_form(&m);
        let f = snf.invariant_factors();
        assert_eq!(f[0], entries_gcd);
        assert_eq!(f[0] * f[1], det.abs());
        assert_eq!(f, vec![2, 4]);
    }

    #[test]
    fn snf_divisibility_chain_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..5);
            let mut m = Mat::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m[(r, c)] = rng.gen_range(-9..=9);
                }
            }
            let snf = smith_normal_form(&m);
            assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d, "UMV = D");
            assert_eq!(snf.u.mul(&snf.uinv), Mat::identity(rows));
            assert_eq!(snf.vinv.mul(&snf.v), Mat::identity(cols));
            let f = snf.invariant_factors();
            for w in f.windows(2) {
                assert_eq!(w[1] % w[0], 0, "divisibility chain in {f:?}");
            }
        }
    }

    #[test]
    fn kernel_and_solve() {
        let m = Mat::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let kb = kernel_basis(&m);
        assert_eq!(kb.len(), 2);
        for v in &kb {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
        assert_eq!(solve(&m, &[1, 2]), Some(vec![1, 0, 0]));
        assert_eq!(solve(&m, &[1, 3]), None);
    }

    #[test]
    fn hnf_canonicalizes_lattices() {
        // Two bases of the same lattice.
        let a = Mat::from_rows(vec![vec![2, 0], vec![0, 3]]).transpose();
        let b = Mat::from_rows(vec![vec![2, 3], vec![2, -3]]).transpose();
        let la = column_lattice_hnf(&a);
        let lb = column_lattice_hnf(&b);
        assert_ne!(la, lb);
        let c = Mat::from_rows(vec![vec![2, 0], vec![2, 3]]).transpose();
        assert_eq!(la, column_lattice_hnf(&c));
    }

    #[test]
    fn lattice_index_multiples() {
        let z2 = Mat::identity(2);
        let mut l2 = Mat::identity(2);
        l2[(0, 0)] = 2;
        l2[(1, 1)] = 3;
        assert_eq!(lattice_index(&z2, &l2), Some(6));
        assert_eq!(lattice_index(&z2, &z2), Some(1));
    }
}
