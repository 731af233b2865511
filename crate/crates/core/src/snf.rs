//! Smith normal form over ℤ and the integer linear solves built on it.

use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::level::Rational;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Matrix product; panics on dimension mismatch or `i64` overflow.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let p = checked_mul(a, other[(k, j)]);
                    out[(i, j)] = checked_add(out[(i, j)], p);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| checked_add(acc, checked_mul(a, b)))
            })
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        i64::try_from(sign * a[n * n - 1]).expect("determinant overflows i64")
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: i64) {
        for j in 0..self.cols {
            let v = checked_add(self[(dst, j)], checked_mul(f, self[(src, j)]));
            self[(dst, j)] = v;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: i64) {
        for i in 0..self.rows {
            let v = checked_add(self[(i, dst)], checked_mul(f, self[(i, src)]));
            self[(i, dst)] = v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[i64]> = (0..self.rows).map(|i| self.row(i)).collect();
        write!(f, "IntMatrix{:?}", rows)
    }
}

fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow in matrix arithmetic")
}

fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer overflow in matrix arithmetic")
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d₁ | d₂ | …`, all diagonal entries nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)])
            .take_while(|&x| x != 0)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smallest nonzero |entry| in the trailing block starting at `(t, t)`;
/// ties go to the lowest (row, column) in row-major order.
fn min_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i64, usize, usize)> = None;
    for i in t..m.rows {
        for j in t..m.cols {
            let x = m[(i, j)].abs();
            if x != 0 && best.is_none_or(|(b, _, _)| x < b) {
                best = Some((x, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Computes the Smith normal form. Deterministic: pivots are chosen by
/// smallest absolute value with lowest-index tie-break.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);

    for t in 0..m.rows.min(m.cols) {
        let Some((pi, pj)) = min_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for i in t + 1..d.rows {
                if d[(i, t)] != 0 {
                    let q = Integer::div_floor(&d[(i, t)], &d[(t, t)]);
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                    dirty |= d[(i, t)] != 0;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..d.cols {
                if d[(t, j)] != 0 {
                    let q = Integer::div_floor(&d[(t, j)], &d[(t, t)]);
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                    dirty |= d[(t, j)] != 0;
                }
            }
            if dirty {
                // a remainder survived: move the smallest entry of row/col t to the pivot
                let mut best = (d[(t, t)].abs(), t, t);
                for i in t + 1..d.rows {
                    let x = d[(i, t)].abs();
                    if x != 0 && x < best.0 {
                        best = (x, i, t);
                    }
                }
                for j in t + 1..d.cols {
                    let x = d[(t, j)].abs();
                    if x != 0 && x < best.0 {
                        best = (x, t, j);
                    }
                }
                d.swap_rows(t, best.1);
                u.swap_rows(t, best.1);
                d.swap_cols(t, best.2);
                v.swap_cols(t, best.2);
                continue;
            }
            // divisibility of the trailing block
            let p = d[(t, t)];
            let offender = (t + 1..d.rows)
                .find(|&i| (t + 1..d.cols).any(|j| d[(i, j)] % p != 0));
            match offender {
                Some(i) => {
                    d.add_row(t, i, 1);
                    u.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

/// Finitely generated abelian group `ℤ^rank ⊕ ⨁ ℤ/tᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{}", t)));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Result of solving `M x = b` over ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerSolve {
    /// An integer solution.
    Solution(Vec<i64>),
    /// A rational row vector `w` with `wᵀM` integral and `w·b` not an
    /// integer; its existence proves that no integer solution exists.
    Obstruction(Vec<Rational>),
}

/// Decides `M x = b` over ℤ via the Smith form of `M`.
pub fn solve_integer(m: &IntMatrix, b: &[i64]) -> IntegerSolve {
    assert_eq!(m.rows, b.len(), "dimension mismatch");
    let snf = smith_normal_form(m);
    let ub = snf.u.mul_vec(b);
    let factors = snf.invariant_factors();

    let mut y = vec![0i64; m.cols];
    for (j, &c) in ub.iter().enumerate() {
        let dj = factors.get(j).copied().unwrap_or(0);
        let bad = if dj == 0 { c != 0 } else { c % dj != 0 };
        if bad {
            // row j of U, scaled so that it pairs integrally with every column of M
            let scale = if dj == 0 { c.abs() + 1 } else { dj };
            let w = snf.u.row(j).iter().map(|&x| Rational::new(x, scale)).collect();
            return IntegerSolve::Obstruction(w);
        }
        if dj != 0 {
            y[j] = c / dj;
        }
    }
    IntegerSolve::Solution(snf.v.mul_vec(&y))
}

/// Checks an [`IntegerSolve::Obstruction`] witness without any factorisation.
pub fn check_obstruction(m: &IntMatrix, b: &[i64], w: &[Rational]) -> bool {
    if w.len() != m.rows || b.len() != m.rows {
        return false;
    }
    let pairs_integrally = (0..m.cols).all(|j| {
        let s: Rational = (0..m.rows).map(|i| w[i] * Rational::from(m[(i, j)])).sum();
        s.is_integer()
    });
    let wb: Rational = w.iter().zip(b).map(|(wi, &bi)| wi * Rational::from(bi)).sum();
    pairs_integrally && !wb.is_integer() && !(wb - wb.floor()).is_zero()
}
