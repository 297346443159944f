//! Dense matrices of [`BigReal`] and LU factorization with partial pivoting.
//!
//! Loop orders are fixed so that a given input and width always produce the
//! same rounding sequence. Multiply-accumulate steps round the product and the
//! sum separately.

use std::cmp::Ordering;
use std::fmt;

use rug::Assign;

use crate::hpnum::{BigReal, Context};
use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigReal>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            let row: Vec<String> = self.row(i).iter().take(8).map(|v| crate::hpnum::to_sci(v, 6)).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(ctx: &Context, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: &Context, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m[(i, i)].assign(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigReal>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: 0, what: "row length" });
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigReal) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigReal] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigReal] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigReal> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[BigReal] {
        &self.data
    }

    /// Stacks `other` below `self`.
    pub fn vstack(mut self, other: &Matrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols, what: "stacked columns" });
        }
        self.data.extend(other.data.iter().cloned());
        self.rows += other.rows;
        Ok(self)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// `self * v`, accumulating each row left to right.
    pub fn mul_vec(&self, ctx: &Context, v: &[BigReal]) -> Result<Vec<BigReal>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len(), what: "vector length" });
        }
        let mut prod = ctx.zero();
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = ctx.zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    prod.assign(a * x);
                    acc += &prod;
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, ctx: &Context, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows, what: "inner dimension" });
        }
        let mut out = Matrix::zeros(ctx, self.rows, rhs.cols);
        let mut prod = ctx.zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    prod.assign(a * b);
                    *o += &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&mut self, factor: &BigReal) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, ctx: &Context, factor: &BigReal, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.data.len(),
                found: other.data.len(),
                what: "matrix shape",
            });
        }
        let mut prod = ctx.zero();
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            prod.assign(factor * b);
            *a += &prod;
        }
        Ok(())
    }

    pub fn max_abs(&self, ctx: &Context) -> BigReal {
        crate::hpnum::max_abs(ctx, &self.data)
    }

    pub fn max_abs_diff(&self, ctx: &Context, other: &Matrix) -> BigReal {
        crate::hpnum::max_abs_diff(ctx, &self.data, &other.data)
    }

    /// `max |self - I|` for a square matrix.
    pub fn identity_residual(&self, ctx: &Context) -> BigReal {
        let mut best = ctx.zero();
        let mut d = ctx.zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                d.assign(&self[(i, j)]);
                if i == j {
                    d -= 1;
                }
                if d.cmp_abs(&best) == Some(Ordering::Greater) {
                    best.assign(d.abs_ref());
                }
            }
        }
        best
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = BigReal;
    fn index(&self, (i, j): (usize, usize)) -> &BigReal {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigReal {
        &mut self.data[i * self.cols + j]
    }
}

/// Packed `PA = LU` factors: unit lower `L` below the diagonal, `U` on and
/// above it. `perm[i]` is the original row now at position `i`.
#[derive(Debug, Clone)]
pub struct Lu {
    ctx: Context,
    factors: Matrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    /// Right-looking elimination with row pivoting on the largest magnitude
    /// (first one wins ties). The multipliers are formed with the reciprocal
    /// of the pivot.
    pub fn factor(ctx: &Context, a: &Matrix) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols, what: "square matrix" });
        }
        let n = a.rows;
        let mut m = a.clone();
        for v in &mut m.data {
            if v.prec() != ctx.bits() {
                *v = ctx.adopt(v);
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut inv = ctx.zero();
        let mut prod = ctx.zero();
        for k in 0..n {
            let mut piv = k;
            for i in k + 1..n {
                if m[(i, k)].cmp_abs(&m[(piv, k)]) == Some(Ordering::Greater) {
                    piv = i;
                }
            }
            if m[(piv, k)].is_zero() {
                return Err(Error::Singular { step: k, context: "LU factorization" });
            }
            if piv != k {
                for j in 0..n {
                    m.data.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
                swaps += 1;
            }
            inv.assign(1);
            inv /= &m[(k, k)];
            for i in k + 1..n {
                m[(i, k)] *= &inv;
            }
            let (upper, lower) = m.data.split_at_mut((k + 1) * n);
            let pivot_row = &upper[k * n..(k + 1) * n];
            for i in 0..n - k - 1 {
                let row = &mut lower[i * n..(i + 1) * n];
                let (head, tail) = row.split_at_mut(k + 1);
                let l = &head[k];
                if l.is_zero() {
                    continue;
                }
                for (dst, u) in tail.iter_mut().zip(&pivot_row[k + 1..]) {
                    prod.assign(l * u);
                    *dst -= &prod;
                }
            }
        }
        Ok(Lu { ctx: *ctx, factors: m, perm, swaps })
    }

    pub fn dim(&self) -> usize {
        self.factors.rows
    }

    pub fn factors(&self) -> &Matrix {
        &self.factors
    }

    /// Determinant as the signed product of the pivots.
    pub fn det(&self) -> BigReal {
        let mut d = self.ctx.one();
        for i in 0..self.dim() {
            d *= &self.factors[(i, i)];
        }
        if self.swaps % 2 == 1 {
            d = -d;
        }
        d
    }

    /// Solves `A x = b` in place: forward then backward substitution, both
    /// column-oriented.
    pub fn solve_in_place(&self, b: &mut [BigReal]) -> Result<()> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: b.len(), what: "rhs length" });
        }
        let mut permuted: Vec<BigReal> = self.perm.iter().map(|&p| b[p].clone()).collect();
        self.substitute(&mut permuted);
        for (dst, src) in b.iter_mut().zip(permuted) {
            *dst = src;
        }
        Ok(())
    }

    fn substitute(&self, x: &mut [BigReal]) {
        let n = self.dim();
        let f = &self.factors;
        let mut prod = self.ctx.zero();
        for j in 0..n {
            if x[j].is_zero() {
                continue;
            }
            let (done, rest) = x.split_at_mut(j + 1);
            let xj = &done[j];
            for (i, xi) in rest.iter_mut().enumerate() {
                prod.assign(&f[(j + 1 + i, j)] * xj);
                *xi -= &prod;
            }
        }
        for j in (0..n).rev() {
            x[j] /= &f[(j, j)];
            if x[j].is_zero() {
                continue;
            }
            let (head, tail) = x.split_at_mut(j);
            let xj = &tail[0];
            for (i, xi) in head.iter_mut().enumerate() {
                prod.assign(&f[(i, j)] * xj);
                *xi -= &prod;
            }
        }
    }

    pub fn solve(&self, b: &[BigReal]) -> Result<Vec<BigReal>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    /// `A^{-1}` from `n` solves against the identity columns.
    pub fn inverse(&self) -> Matrix {
        let n = self.dim();
        let mut inv = Matrix::zeros(&self.ctx, n, n);
        let mut col = vec![self.ctx.zero(); n];
        for j in 0..n {
            // Row i of P*I holds a one in column perm[i].
            for (i, c) in col.iter_mut().enumerate() {
                c.assign(u32::from(self.perm[i] == j));
            }
            self.substitute(&mut col);
            for (i, c) in col.iter().enumerate() {
                inv[(i, j)].assign(c);
            }
        }
        inv
    }
}

/// Least-squares solution of an overdetermined system through the normal
/// equations `AᵀA x = Aᵀb`.
pub fn normal_equations(ctx: &Context, a: &Matrix, b: &[BigReal]) -> Result<Vec<BigReal>> {
    let at = a.transpose();
    let ata = at.mul(ctx, a)?;
    let atb = at.mul_vec(ctx, b)?;
    Lu::factor(ctx, &ata)?.solve(&atb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new(128).unwrap()
    }

    fn m(ctx: &Context, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| ctx.int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn identity_inverts_to_identity() {
        let c = ctx();
        let id = Matrix::identity(&c, 3);
        let lu = Lu::factor(&c, &id).unwrap();
        assert_eq!(lu.inverse(), id);
        assert_eq!(lu.det(), 1);
    }

    #[test]
    fn pivoting_and_determinant_sign() {
        let c = ctx();
        let a = m(&c, &[&[0, 1], &[1, 0]]);
        let lu = Lu::factor(&c, &a).unwrap();
        assert_eq!(lu.det(), -1);
        assert_eq!(lu.inverse(), a);
        let b = m(&c, &[&[2, 1, 1], &[4, -6, 0], &[-2, 7, 2]]);
        assert_eq!(Lu::factor(&c, &b).unwrap().det(), -16);
    }

    #[test]
    fn solve_matches_known_solution() {
        let c = ctx();
        let a = m(&c, &[&[2, 1, 1], &[4, -6, 0], &[-2, 7, 2]]);
        let x = Lu::factor(&c, &a).unwrap().solve(&[c.int(5), c.int(-2), c.int(9)]).unwrap();
        let want = [1, 1, 2];
        for (xi, w) in x.iter().zip(want) {
            assert!(BigReal::with_val(128, xi - w).abs() < c.pow2(-120));
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let c = ctx();
        let a = m(&c, &[&[1, 2], &[2, 4]]);
        assert!(matches!(Lu::factor(&c, &a), Err(Error::Singular { step: 1, .. })));
    }

    #[test]
    fn product_and_residual() {
        let c = ctx();
        let a = m(&c, &[&[4, 7], &[2, 6]]);
        let inv = Lu::factor(&c, &a).unwrap().inverse();
        let r = a.mul(&c, &inv).unwrap().identity_residual(&c);
        assert!(r < c.pow2(-120));
    }

    #[test]
    fn least_squares_line() {
        // y = 1 + 2t through exact data.
        let c = ctx();
        let a = m(&c, &[&[1, 0], &[1, 1], &[1, 2], &[1, 3]]);
        let b: Vec<_> = [1, 3, 5, 7].iter().map(|&v| c.int(v)).collect();
        let x = normal_equations(&c, &a, &b).unwrap();
        assert!(BigReal::with_val(128, &x[0] - 1).abs() < c.pow2(-110));
        assert!(BigReal::with_val(128, &x[1] - 2).abs() < c.pow2(-110));
    }
}
