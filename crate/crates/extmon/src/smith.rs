//! Smith normal form over the integers, with the unimodular transforms
//! recorded, plus an integer kernel basis. Exact arithmetic only.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Decomposition `u · m · w = diag(d)` with `u`, `w` unimodular and the
/// nonzero diagonal entries positive, leading, and each dividing the next.
pub struct Smith {
    pub d: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub w: Vec<Vec<BigInt>>,
    pub rank: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() }).collect())
        .collect()
}

struct Calc {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    w: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

impl Calc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for row in &mut self.a {
                row.swap(i, j);
            }
            for row in &mut self.w {
                row.swap(i, j);
            }
        }
    }

    /// row i -= q * row j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for t in 0..self.cols {
            let delta = q * &self.a[j][t];
            self.a[i][t] -= delta;
        }
        for t in 0..self.rows {
            let delta = q * &self.u[j][t];
            self.u[i][t] -= delta;
        }
    }

    /// col i -= q * col j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.a {
            let delta = q * &row[j];
            row[i] -= delta;
        }
        for row in &mut self.w {
            let delta = q * &row[j];
            row[i] -= delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for t in 0..self.cols {
            let v = -&self.a[i][t];
            self.a[i][t] = v;
        }
        for t in 0..self.rows {
            let v = -&self.u[i][t];
            self.u[i][t] = v;
        }
    }

    /// Diagonalizes the submatrix starting at `(t0, t0)`. Returns the index
    /// one past the last nonzero pivot.
    fn diagonalize_from(&mut self, t0: usize) -> usize {
        let n = self.rows.min(self.cols);
        let mut t = t0;
        while t < n {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..self.rows {
                for j in t..self.cols {
                    if !self.a[i][j].is_zero()
                        && pivot
                            .map_or(true, |(pi, pj)| self.a[i][j].abs() < self.a[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut swapped = false;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = &self.a[i][t] / &self.a[t][t];
                    self.row_sub(i, t, &q);
                    if !self.a[i][t].is_zero() {
                        // Remainder is a strictly smaller pivot.
                        self.swap_rows(t, i);
                        swapped = true;
                    }
                }
                if swapped {
                    continue;
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = &self.a[t][j] / &self.a[t][t];
                    self.col_sub(j, t, &q);
                    if !self.a[t][j].is_zero() {
                        self.swap_cols(t, j);
                        swapped = true;
                    }
                }
                if !swapped {
                    break;
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

/// Smith normal form of a `mat.len() × cols` matrix.
pub fn smith_normal_form(mat: &[Vec<BigInt>], cols: usize) -> Smith {
    let rows = mat.len();
    for row in mat {
        assert_eq!(row.len(), cols, "ragged matrix");
    }
    let mut calc = Calc { a: mat.to_vec(), u: identity(rows), w: identity(cols), rows, cols };
    let mut rank = calc.diagonalize_from(0);
    // Enforce the divisibility chain d_1 | d_2 | ...
    loop {
        let mut violation = None;
        for i in 0..rank.saturating_sub(1) {
            let (di, dj) = (&calc.a[i][i], &calc.a[i + 1][i + 1]);
            if !(dj % di).is_zero() {
                violation = Some(i);
                break;
            }
        }
        let Some(i) = violation else { break };
        // Pull column i+1 into column i and rediagonalize the tail.
        let minus_one = BigInt::from(-1);
        calc.col_sub(i, i + 1, &minus_one);
        rank = calc.diagonalize_from(i);
    }
    let n = rows.min(cols);
    let d = (0..n).map(|i| calc.a[i][i].clone()).collect();
    Smith { d, u: calc.u, w: calc.w, rank }
}

/// Integer basis of `{x ∈ ℤ^cols : mat · x = 0}`. The basis spans the full
/// (saturated) kernel lattice; each vector is sign-normalized so its first
/// nonzero entry is positive.
pub fn kernel_basis(mat: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let smith = smith_normal_form(mat, cols);
    let mut basis = Vec::new();
    for j in smith.rank..cols {
        let mut v: Vec<BigInt> = (0..cols).map(|i| smith.w[i][j].clone()).collect();
        if let Some(first) = v.iter().find(|e| !e.is_zero()) {
            if first.is_negative() {
                for e in &mut v {
                    *e = -&*e;
                }
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let rows = a.len();
        let inner = b.len();
        let cols = if inner > 0 { b[0].len() } else { 0 };
        (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| (0..inner).map(|t| &a[i][t] * &b[t][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn det(a: &[Vec<BigInt>]) -> BigInt {
        let n = a.len();
        if n == 0 {
            return BigInt::from(1);
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            if a[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = (1..n)
                .map(|i| (0..n).filter(|&t| t != j).map(|t| a[i][t].clone()).collect())
                .collect();
            let term = &a[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn check(mat: &[Vec<BigInt>], cols: usize) -> Smith {
        let s = smith_normal_form(mat, cols);
        let product = mat_mul(&mat_mul(&s.u, mat), &s.w);
        for (i, row) in product.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == j && i < s.d.len() {
                    assert_eq!(*v, s.d[i]);
                } else {
                    assert!(v.is_zero(), "nonzero off-diagonal at ({i},{j})");
                }
            }
        }
        assert!(det(&s.u).abs() == BigInt::from(1));
        assert!(det(&s.w).abs() == BigInt::from(1));
        for i in 0..s.rank {
            assert!(s.d[i] > BigInt::zero());
            if i + 1 < s.rank {
                assert!((&s.d[i + 1] % &s.d[i]).is_zero(), "divisibility chain broken");
            }
        }
        for i in s.rank..s.d.len() {
            assert!(s.d[i].is_zero());
        }
        s
    }

    #[test]
    fn diagonal_examples() {
        let s = check(&m(&[&[1, 2, 0], &[1, 0, 2]]), 3);
        assert_eq!(s.rank, 2);
        assert_eq!(s.d, vec![BigInt::from(1), BigInt::from(2)]);

        let s = check(&m(&[&[2, 4], &[6, 8]]), 2);
        assert_eq!(s.d, vec![BigInt::from(2), BigInt::from(4)]);

        let s = check(&m(&[&[0, 0], &[0, 0]]), 2);
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn handles_empty_shapes() {
        let s = smith_normal_form(&[], 3);
        assert_eq!(s.rank, 0);
        assert_eq!(s.w.len(), 3);
        let s = smith_normal_form(&m(&[&[], &[]]), 0);
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn kernel_of_difference_row() {
        let basis = kernel_basis(&m(&[&[1, -1]]), 2);
        assert_eq!(basis, vec![vec![BigInt::from(1), BigInt::from(1)]]);
        let basis = kernel_basis(&m(&[&[1, 1]]), 2);
        assert_eq!(basis, vec![vec![BigInt::from(1), BigInt::from(-1)]]);
    }

    #[test]
    fn kernel_is_saturated() {
        // Kernel of (2 -2) is spanned by (1,1), not (2,2).
        let basis = kernel_basis(&m(&[&[2, -2]]), 2);
        assert_eq!(basis, vec![vec![BigInt::from(1), BigInt::from(1)]]);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mat = m(&[&[3, 1, -2, 0], &[1, 0, 4, -1]]);
        let basis = kernel_basis(&mat, 4);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for row in &mat {
                let dot: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn randomized_round_trips() {
        // Deterministic pseudo-random small matrices.
        let mut seed = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..40 {
            let rows = (next() % 4 + 1) as usize;
            let cols = (next() % 4 + 1) as usize;
            let mat: Vec<Vec<BigInt>> = (0..rows)
                .map(|_| (0..cols).map(|_| BigInt::from((next() % 11) as i64 - 5)).collect())
                .collect();
            check(&mat, cols);
        }
    }
}
