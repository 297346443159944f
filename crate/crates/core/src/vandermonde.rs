//! Vandermonde matrices `v_ij = x_i^j` (0-based `j`) and their derivative and
//! integral variants.
//!
//! The inverse is available two ways: the closed form `V⁻¹ = U⁻¹ L⁻¹` built
//! from two triangular recurrences, and LU elimination with partial pivoting.
//! Comparing the two (and comparing `∏_{i<j} (x_j - x_i)` with the pivot
//! product) shows how much of the arithmetic survives at a given width.

use rug::Assign;

use crate::hpnum::{BigReal, Context};
use crate::linalg::{Lu, Matrix};
use crate::{Error, Result};

/// Pairwise distinct sample locations.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    nodes: Vec<BigReal>,
}

impl NodeSet {
    pub fn new(nodes: Vec<BigReal>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidNodeSet("no nodes".into()));
        }
        let mut sorted: Vec<&BigReal> = nodes.iter().collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("nodes must not be NaN"));
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidNodeSet(format!("duplicate node {}", crate::hpnum::to_sci(w[0], 10))));
        }
        Ok(NodeSet { nodes })
    }

    /// `n` equispaced nodes on `[-half_width, half_width]`.
    pub fn symmetric_grid(ctx: &Context, half_width: &BigReal, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidNodeSet("a grid needs at least two nodes".into()));
        }
        let m = (n - 1) as i64;
        let nodes = (0..n as i64)
            .map(|i| {
                let mut x = ctx.adopt(half_width);
                x *= 2 * i - m;
                x /= m;
                x
            })
            .collect();
        NodeSet::new(nodes)
    }

    /// `n` equispaced nodes from `start` to `end` inclusive.
    pub fn uniform(ctx: &Context, start: &BigReal, end: &BigReal, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidNodeSet("a grid needs at least two nodes".into()));
        }
        let m = (n - 1) as i64;
        let span = ctx.adopt(&BigReal::with_val(ctx.bits(), end - start));
        let nodes = (0..n as i64)
            .map(|i| {
                let mut x = span.clone();
                x *= i;
                x /= m;
                x += start;
                x
            })
            .collect();
        NodeSet::new(nodes)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn as_slice(&self) -> &[BigReal] {
        &self.nodes
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigReal> {
        self.nodes.iter()
    }
}

/// `[1, x, x², …, x^(n-1)]` by repeated multiplication.
pub fn monomial_row(ctx: &Context, x: &BigReal, n: usize) -> Vec<BigReal> {
    let mut row = Vec::with_capacity(n);
    let mut p = ctx.one();
    for _ in 0..n {
        row.push(p.clone());
        p *= x;
    }
    row
}

/// Row of the `k`-th derivative of the monomials at `x`:
/// `j!/(j-k)! · x^(j-k)` for `j ≥ k`, zero before.
pub fn derivative_row(ctx: &Context, x: &BigReal, n: usize, k: usize) -> Vec<BigReal> {
    let mut row = vec![ctx.zero(); n];
    let mut p = ctx.one();
    for (j, slot) in row.iter_mut().enumerate().skip(k) {
        let mut v = falling_factorial(ctx, j, k);
        v *= &p;
        *slot = v;
        p *= x;
    }
    row
}

/// `j (j-1) … (j-k+1)`, exact for the sizes used here.
pub fn falling_factorial(ctx: &Context, j: usize, k: usize) -> BigReal {
    let mut f = ctx.one();
    for m in 0..k {
        f *= (j - m) as u64;
    }
    f
}

/// Which linear operator an [`OperatorMatrix`] applies to a coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Derivative(usize),
    Antiderivative(usize),
}

/// Maps coefficients `a` to values of an operator applied to the polynomial
/// at every node.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub matrix: Matrix,
}

/// The plain Vandermonde matrix over a node set.
#[derive(Debug, Clone)]
pub struct VandermondeSystem {
    nodes: NodeSet,
    matrix: Matrix,
}

/// Outcome of the numeric (LU) inversion.
#[derive(Debug, Clone)]
pub struct NumericInverse {
    pub inverse: Matrix,
    pub det: BigReal,
}

impl VandermondeSystem {
    pub fn build(ctx: &Context, nodes: NodeSet) -> Self {
        let n = nodes.len();
        let rows: Vec<BigReal> = nodes.iter().flat_map(|x| monomial_row(ctx, x, n)).collect();
        let matrix = Matrix::from_fn(n, n, |i, j| rows[i * n + j].clone());
        VandermondeSystem { nodes, matrix }
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn det_analytic(&self, ctx: &Context) -> BigReal {
        det_product(ctx, &self.nodes)
    }

    pub fn inverse_closed_form(&self, ctx: &Context) -> Matrix {
        inverse_closed_form(ctx, &self.nodes)
    }

    pub fn inverse_numeric(&self, ctx: &Context) -> Result<NumericInverse> {
        inverse_numeric(ctx, &self.matrix)
    }

    pub fn derivative_matrix(&self, ctx: &Context, order: usize) -> Result<OperatorMatrix> {
        derivative_matrix(ctx, &self.nodes, order)
    }

    pub fn integral_matrix(&self, ctx: &Context, order: usize) -> Result<OperatorMatrix> {
        integral_matrix(ctx, &self.nodes, order)
    }
}

/// `∏_{i<j} (x_j - x_i)`, multiplied in row-major `(i, j)` order.
pub fn det_product(ctx: &Context, nodes: &NodeSet) -> BigReal {
    let x = nodes.as_slice();
    let mut det = ctx.one();
    let mut d = ctx.zero();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            d.assign(&x[j] - &x[i]);
            det *= &d;
        }
    }
    det
}

/// Closed-form inverse `U⁻¹ L⁻¹` with
/// `l_ij = ∏_{k≤i, k≠j} 1/(x_j - x_k)` (lower, `l_11 = 1`) and
/// `u_ij = u_{i-1,j-1} - u_{i,j-1} x_{j-1}` (unit upper, `u_{i1} = 0`).
pub fn inverse_closed_form(ctx: &Context, nodes: &NodeSet) -> Matrix {
    let x = nodes.as_slice();
    let n = x.len();
    let mut d = ctx.zero();

    // L⁻¹, one column at a time: start at the diagonal, then extend the
    // product down the column.
    let mut l = Matrix::zeros(ctx, n, n);
    for j in 0..n {
        let mut diag = ctx.one();
        for k in 0..j {
            d.assign(&x[j] - &x[k]);
            diag /= &d;
        }
        l[(j, j)].assign(&diag);
        for i in j + 1..n {
            d.assign(&x[j] - &x[i]);
            let mut v = l[(i - 1, j)].clone();
            v /= &d;
            l[(i, j)] = v;
        }
    }

    // U⁻¹ column by column.
    let mut u = Matrix::zeros(ctx, n, n);
    u[(0, 0)].assign(1);
    let mut prod = ctx.zero();
    for j in 1..n {
        for i in 0..=j {
            let mut v = if i >= 1 { u[(i - 1, j - 1)].clone() } else { ctx.zero() };
            if i < j {
                prod.assign(&u[(i, j - 1)] * &x[j - 1]);
                v -= &prod;
            }
            u[(i, j)] = v;
        }
    }

    // U⁻¹ is upper and L⁻¹ lower, so entry (i, j) sums k ≥ max(i, j).
    let mut out = Matrix::zeros(ctx, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = ctx.zero();
            for k in i.max(j)..n {
                prod.assign(&u[(i, k)] * &l[(k, j)]);
                acc += &prod;
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Inverse and determinant via LU with partial pivoting.
pub fn inverse_numeric(ctx: &Context, v: &Matrix) -> Result<NumericInverse> {
    let lu = Lu::factor(ctx, v)?;
    Ok(NumericInverse { inverse: lu.inverse(), det: lu.det() })
}

pub fn derivative_matrix(ctx: &Context, nodes: &NodeSet, order: usize) -> Result<OperatorMatrix> {
    let n = nodes.len();
    if order == 0 || order >= n {
        return Err(Error::DegenerateOperator { order, terms: n });
    }
    let rows: Vec<Vec<BigReal>> = nodes.iter().map(|x| derivative_row(ctx, x, n, order)).collect();
    Ok(OperatorMatrix { kind: OperatorKind::Derivative(order), matrix: Matrix::from_rows(rows)? })
}

/// Order 1: `t^(j+1)/(j+1)`; order 2: `t^(j+2)/((j+1)(j+2))`. Applied to
/// coefficients these give `∫_0^t` and `∫_0^t ∫_0^τ` of the polynomial.
pub fn integral_matrix(ctx: &Context, nodes: &NodeSet, order: usize) -> Result<OperatorMatrix> {
    if order != 1 && order != 2 {
        return Err(Error::UnsupportedOrder(order));
    }
    let n = nodes.len();
    let rows = nodes
        .iter()
        .map(|t| {
            let mut p = ctx.adopt(t);
            if order == 2 {
                p *= t;
            }
            (0..n)
                .map(|j| {
                    let mut v = p.clone();
                    v /= falling_factorial(ctx, j + order, order);
                    p *= t;
                    v
                })
                .collect()
        })
        .collect();
    Ok(OperatorMatrix { kind: OperatorKind::Antiderivative(order), matrix: Matrix::from_rows(rows)? })
}

/// Disagreement between the closed-form and numeric routes on one node set.
#[derive(Debug, Clone)]
pub struct InverseDiagnostics {
    pub det_analytic: BigReal,
    pub det_numeric: BigReal,
    /// `det_analytic - det_numeric`.
    pub det_gap: BigReal,
    /// `max |V⁻¹_closed - V⁻¹_numeric|`.
    pub inverse_gap: BigReal,
    /// `max |V·V⁻¹_closed - I|`.
    pub residual_closed_form: BigReal,
    /// `max |V·V⁻¹_numeric - I|`.
    pub residual_numeric: BigReal,
}

pub fn inverse_diagnostics(
    ctx: &Context,
    system: &VandermondeSystem,
    numeric: &NumericInverse,
    closed: &Matrix,
) -> Result<InverseDiagnostics> {
    let det_analytic = system.det_analytic(ctx);
    let mut det_gap = det_analytic.clone();
    det_gap -= &numeric.det;
    Ok(InverseDiagnostics {
        det_gap,
        det_numeric: numeric.det.clone(),
        det_analytic,
        inverse_gap: closed.max_abs_diff(ctx, &numeric.inverse),
        residual_closed_form: system.matrix.mul(ctx, closed)?.identity_residual(ctx),
        residual_numeric: system.matrix.mul(ctx, &numeric.inverse)?.identity_residual(ctx),
    })
}
