//! Smith normal form over the integers, with both transforms and their inverses.
//!
//! `snf(a)` returns unimodular `u`, `v` with `u * a * v = d`, where `d` is diagonal,
//! nonnegative, and each diagonal entry divides the next. The pivot is always the
//! nonzero entry of least absolute value in the active block.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    diagonal: Vec<BigInt>,
}

type Rows = Vec<Vec<BigInt>>;

fn identity_rows(n: usize) -> Rows {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_matrix(rows: Rows, cols: usize) -> IntMatrix {
    let n = rows.len();
    IntMatrix::from_vec(n, cols, rows.into_iter().flatten().collect()).expect("rectangular rows")
}

struct Reducer {
    a: Rows,
    u: Rows,
    u_inv: Rows,
    v: Rows,
    v_inv: Rows,
    m: usize,
    n: usize,
}

impl Reducer {
    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for rows in [&mut self.a, &mut self.u] {
            let (src, dst) = if i < j {
                let (lo, hi) = rows.split_at_mut(j);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = rows.split_at_mut(i);
                (&lo[j], &mut hi[0])
            };
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d += c * s;
                }
            }
        }
        // u_inv picks up the inverse column operation: col_j -= c * col_i
        for row in self.u_inv.iter_mut() {
            if !row[i].is_zero() {
                let t = c * &row[i];
                row[j] -= t;
            }
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for rows in [&mut self.a, &mut self.v] {
            for row in rows.iter_mut() {
                if !row[j].is_zero() {
                    let t = c * &row[j];
                    row[i] += t;
                }
            }
        }
        // v_inv: row_j -= c * row_i
        let (src, dst) = if i < j {
            let (lo, hi) = self.v_inv.split_at_mut(j);
            (&lo[i], &mut hi[0])
        } else {
            let (lo, hi) = self.v_inv.split_at_mut(i);
            (&hi[0], &mut lo[j])
        };
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d -= c * s;
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -std::mem::take(x);
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -std::mem::take(&mut row[i]);
        }
    }

    fn min_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    if x.abs().is_one() {
                        return Some((i, j));
                    }
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn min_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let key = |x: &BigInt| if x.is_zero() { None } else { Some(x.abs()) };
        let better = |cand: &BigInt, cur: &BigInt| match (key(cand), key(cur)) {
            (Some(c), Some(k)) => c < k,
            (Some(_), None) => true,
            _ => false,
        };
        for i in t..self.m {
            if better(&self.a[i][t], &self.a[best.0][best.1]) {
                best = (i, t);
            }
        }
        for j in t..self.n {
            if better(&self.a[t][j], &self.a[best.0][best.1]) {
                best = (t, j);
            }
        }
        best
    }

    fn run(&mut self) {
        let mut t = 0;
        while t < self.m.min(self.n) {
            let Some((pi, pj)) = self.min_in_block(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = -(&self.a[i][t] / &self.a[t][t]);
                    self.add_row(i, t, &q);
                    clean &= self.a[i][t].is_zero();
                }
                for j in t + 1..self.n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = -(&self.a[t][j] / &self.a[t][t]);
                    self.add_col(j, t, &q);
                    clean &= self.a[t][j].is_zero();
                }
                if !clean {
                    let (i, j) = self.min_in_cross(t);
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                let pivot = self.a[t][t].clone();
                let offender = (t + 1..self.m).find(|&i| {
                    (t + 1..self.n).any(|j| !self.a[i][j].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

pub fn snf(a: &IntMatrix) -> SmithForm {
    let (m, n) = a.shape();
    let mut r = Reducer {
        a: (0..m).map(|i| a.row(i).to_vec()).collect(),
        u: identity_rows(m),
        u_inv: identity_rows(m),
        v: identity_rows(n),
        v_inv: identity_rows(n),
        m,
        n,
    };
    r.run();
    let diagonal = (0..m.min(n)).map(|i| r.a[i][i].clone()).collect();
    SmithForm {
        u: to_matrix(r.u, m),
        u_inv: to_matrix(r.u_inv, m),
        d: to_matrix(r.a, n),
        v: to_matrix(r.v, n),
        v_inv: to_matrix(r.v_inv, n),
        diagonal,
    }
}

impl SmithForm {
    /// Diagonal entries d₁ | d₂ | … (including trailing zeros up to min(rows, cols)).
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diagonal
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.diagonal[..self.rank()]
    }

    /// Some integer solution of `a x = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let (m, n) = self.d.shape();
        assert_eq!(b.len(), m, "right-hand side length");
        let ub = self.u.mul_vec(b);
        let r = self.rank();
        let mut y = vec![BigInt::zero(); n];
        for i in 0..m {
            if i < r {
                let (q, rem) = ub[i].div_rem(&self.diagonal[i]);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !ub[i].is_zero() {
                return None;
            }
        }
        Some(self.v.mul_vec(&y))
    }

    /// Columns form a basis of the integer kernel of `a`.
    pub fn kernel_basis(&self) -> IntMatrix {
        let n = self.v.cols();
        self.v.select_columns(self.rank()..n)
    }

    /// Columns form a basis of the column lattice of `a`.
    pub fn image_basis(&self) -> IntMatrix {
        let r = self.rank();
        let mut b = self.u_inv.select_columns(0..r);
        for j in 0..r {
            for i in 0..b.rows() {
                let x = &b[(i, j)] * &self.diagonal[j];
                b[(i, j)] = x;
            }
        }
        b
    }
}
