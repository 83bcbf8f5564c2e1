//! Smith normal form with unimodular transforms, generic over the integer type.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Mat<T> = Vec<Vec<T>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf<T> {
    /// U * M * V = D
    pub u: Mat<T>,
    pub u_inv: Mat<T>,
    pub v: Mat<T>,
    pub v_inv: Mat<T>,
    /// Diagonal of D (length min(rows, cols)), nonnegative, divisibility chain.
    pub diag: Vec<T>,
    pub rank: usize,
}

pub fn identity<T: Clone + Zero + One>(n: usize) -> Mat<T> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        })
        .collect()
}

pub fn matmul<T: Clone + Zero + std::ops::Mul<Output = T> + std::ops::Add<Output = T>>(
    a: &Mat<T>,
    b: &Mat<T>,
    inner: usize,
) -> Mat<T> {
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = T::zero();
                    for k in 0..inner {
                        s = s + row[k].clone() * b[k][j].clone();
                    }
                    s
                })
                .collect()
        })
        .collect()
}

struct State<T> {
    a: Mat<T>,
    u: Mat<T>,
    u_inv: Mat<T>,
    v: Mat<T>,
    v_inv: Mat<T>,
    rows: usize,
    cols: usize,
}

impl<T: Clone + Integer + Signed> State<T> {
    // row_i += q * row_j
    fn row_add(&mut self, i: usize, j: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = self.a[j][c].clone() * q.clone();
            self.a[i][c] = self.a[i][c].clone() + t;
        }
        for c in 0..self.rows {
            let t = self.u[j][c].clone() * q.clone();
            self.u[i][c] = self.u[i][c].clone() + t;
        }
        for r in 0..self.rows {
            let t = self.u_inv[r][i].clone() * q.clone();
            self.u_inv[r][j] = self.u_inv[r][j].clone() - t;
        }
    }
    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for r in 0..self.rows {
            self.u_inv[r].swap(i, j);
        }
    }
    fn row_neg(&mut self, i: usize) {
        for c in 0..self.cols {
            self.a[i][c] = -self.a[i][c].clone();
        }
        for c in 0..self.rows {
            self.u[i][c] = -self.u[i][c].clone();
        }
        for r in 0..self.rows {
            self.u_inv[r][i] = -self.u_inv[r][i].clone();
        }
    }
    // col_i += q * col_j
    fn col_add(&mut self, i: usize, j: usize, q: &T) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = self.a[r][j].clone() * q.clone();
            self.a[r][i] = self.a[r][i].clone() + t;
        }
        for r in 0..self.cols {
            let t = self.v[r][j].clone() * q.clone();
            self.v[r][i] = self.v[r][i].clone() + t;
        }
        for c in 0..self.cols {
            let t = self.v_inv[i][c].clone() * q.clone();
            self.v_inv[j][c] = self.v_inv[j][c].clone() - t;
        }
    }
    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.a[r].swap(i, j);
        }
        for r in 0..self.cols {
            self.v[r].swap(i, j);
        }
        self.v_inv.swap(i, j);
    }
}

/// Smith normal form of an integer matrix given by rows.
pub fn smith<T: Clone + Integer + Signed>(m: &Mat<T>, cols: usize) -> Snf<T> {
    let rows = m.len();
    let mut s = State {
        a: m.clone(),
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
        rows,
        cols,
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the lower-right block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !s.a[i][j].is_zero() {
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => s.a[i][j].abs() < s.a[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.row_swap(t, pi);
        s.col_swap(t, pj);
        loop {
            let mut changed = false;
            for i in (t + 1)..rows {
                if !s.a[i][t].is_zero() {
                    let q = s.a[i][t].div_floor(&s.a[t][t]);
                    s.row_add(i, t, &-q);
                    if !s.a[i][t].is_zero() {
                        s.row_swap(t, i);
                        changed = true;
                    }
                }
            }
            for j in (t + 1)..cols {
                if !s.a[t][j].is_zero() {
                    let q = s.a[t][j].div_floor(&s.a[t][t]);
                    s.col_add(j, t, &-q);
                    if !s.a[t][j].is_zero() {
                        s.col_swap(t, j);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // divisibility of the remaining block
            let mut fix = None;
            'outer: for i in (t + 1)..rows {
                for j in (t + 1)..cols {
                    if !s.a[i][j].is_multiple_of(&s.a[t][t]) {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    s.row_add(t, i, &T::one());
                }
                None => break,
            }
        }
        if s.a[t][t].is_negative() {
            s.row_neg(t);
        }
        t += 1;
    }
    let diag: Vec<T> = (0..rows.min(cols)).map(|i| s.a[i][i].clone()).collect();
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    Snf {
        u: s.u,
        u_inv: s.u_inv,
        v: s.v,
        v_inv: s.v_inv,
        diag,
        rank,
    }
}

/// Public big-integer entry point: returns (U, D, V) with U M V = D.
pub fn smith_normal_form(m: &Mat<BigInt>) -> (Mat<BigInt>, Mat<BigInt>, Mat<BigInt>) {
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let r = smith(m, cols);
    let rows = m.len();
    let mut d = vec![vec![BigInt::zero(); cols]; rows];
    for (i, x) in r.diag.iter().enumerate() {
        d[i][i] = x.clone();
    }
    (r.u, d, r.v)
}

pub fn to_big(m: &[Vec<i64>]) -> Mat<BigInt> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn determinant(m: &Mat<BigInt>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}
