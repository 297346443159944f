//! Linear constant-coefficient ODE boundary-value problems by Taylor
//! collocation.
//!
//! The differential operator is imposed at `n` collocation nodes through the
//! derivative rows of the Vandermonde matrix and each boundary condition adds
//! one row, so the polynomial carries `n + |bcs|` coefficients and the system
//! is square.

use crate::hpnum::{BigReal, Context};
use crate::linalg::{Lu, Matrix};
use crate::taylor1d::TaylorPoly1D;
use crate::vandermonde::{derivative_row, NodeSet};
use crate::{Error, Result};

/// `w^(order)(location) = value`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    pub location: BigReal,
    pub derivative_order: usize,
    pub value: BigReal,
}

impl BoundaryCondition {
    pub fn new(location: BigReal, derivative_order: usize, value: BigReal) -> Self {
        BoundaryCondition { location, derivative_order, value }
    }

    /// Parses `<order>@<x>=<value>`, e.g. `1@1=0` for `w'(1) = 0`.
    pub fn parse(ctx: &Context, spec: &str) -> Result<Self> {
        let bad = || Error::InvalidProblem(format!("boundary condition {spec:?} is not <order>@<x>=<value>"));
        let (order, rest) = spec.split_once('@').ok_or_else(bad)?;
        let (x, value) = rest.split_once('=').ok_or_else(bad)?;
        let derivative_order = order.trim().parse().map_err(|_| bad())?;
        Ok(BoundaryCondition { location: ctx.parse(x)?, derivative_order, value: ctx.parse(value)? })
    }
}

/// `Σ_k c_k w^(k)(x_i) = q_i` at the collocation nodes plus boundary rows.
#[derive(Debug, Clone)]
pub struct OdeProblem {
    /// `(derivative order, coefficient)` pairs, e.g. `[(4, EI)]` for a beam.
    pub lhs_terms: Vec<(usize, BigReal)>,
    pub rhs: Vec<BigReal>,
    pub nodes: NodeSet,
    pub bcs: Vec<BoundaryCondition>,
}

impl OdeProblem {
    pub fn coefficient_count(&self) -> usize {
        self.nodes.len() + self.bcs.len()
    }

    fn validate(&self) -> Result<()> {
        if self.rhs.len() != self.nodes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.nodes.len(),
                found: self.rhs.len(),
                what: "right-hand side values",
            });
        }
        if self.lhs_terms.is_empty() {
            return Err(Error::InvalidProblem("no differential terms".into()));
        }
        let n = self.coefficient_count();
        for &order in self.lhs_terms.iter().map(|(k, _)| k).chain(self.bcs.iter().map(|b| &b.derivative_order)) {
            if order >= n {
                return Err(Error::DegenerateOperator { order, terms: n });
            }
        }
        Ok(())
    }
}

/// `EI w'''' = q` with a constant load on `n_grid` equispaced points of
/// `[0, length]`; the two end points carry the boundary conditions and the
/// interior points are collocated.
pub fn beam_problem(
    ctx: &Context,
    length: &BigReal,
    n_grid: usize,
    ei: &BigReal,
    load: &BigReal,
    bcs: Vec<BoundaryCondition>,
) -> Result<OdeProblem> {
    let grid = NodeSet::uniform(ctx, &ctx.zero(), length, n_grid)?;
    let interior = collocation_nodes(grid.as_slice(), &bcs);
    let nodes = NodeSet::new(interior)?;
    Ok(OdeProblem { lhs_terms: vec![(4, ctx.adopt(ei))], rhs: vec![ctx.adopt(load); nodes.len()], nodes, bcs })
}

/// Grid nodes that do not coincide with a boundary-condition location.
pub fn collocation_nodes(grid: &[BigReal], bcs: &[BoundaryCondition]) -> Vec<BigReal> {
    grid.iter().filter(|x| bcs.iter().all(|b| &b.location != *x)).cloned().collect()
}

/// Square system `[Σ c_k d^kV ; boundary rows] a = [q ; values]`.
pub fn assemble(ctx: &Context, problem: &OdeProblem) -> Result<(Matrix, Vec<BigReal>)> {
    problem.validate()?;
    let n = problem.coefficient_count();
    let mut rows = Vec::with_capacity(n);
    for x in problem.nodes.iter() {
        let mut row = vec![ctx.zero(); n];
        for (k, c) in &problem.lhs_terms {
            for (dst, v) in row.iter_mut().zip(derivative_row(ctx, x, n, *k)) {
                *dst += v * c;
            }
        }
        rows.push(row);
    }
    for bc in &problem.bcs {
        rows.push(derivative_row(ctx, &bc.location, n, bc.derivative_order));
    }
    let rhs = problem.rhs.iter().cloned().chain(problem.bcs.iter().map(|b| ctx.adopt(&b.value))).collect();
    Ok((Matrix::from_rows(rows)?, rhs))
}

/// Coefficients from `a = A⁻¹ b`.
pub fn solve(ctx: &Context, problem: &OdeProblem) -> Result<TaylorPoly1D> {
    let (a, rhs) = assemble(ctx, problem)?;
    let inverse = Lu::factor(ctx, &a).map_err(singular_in("ODE collocation system"))?.inverse();
    TaylorPoly1D::at_origin(ctx, inverse.mul_vec(ctx, &rhs)?)
}

pub(crate) fn singular_in(context: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Singular { step, .. } => Error::Singular { step, context },
        other => other,
    }
}

/// `max |A a - b|` over the collocation rows and over the boundary rows.
#[derive(Debug, Clone)]
pub struct OdeResidual {
    pub collocation: BigReal,
    pub boundary: BigReal,
}

pub fn residual(ctx: &Context, problem: &OdeProblem, solution: &TaylorPoly1D) -> Result<OdeResidual> {
    let (a, rhs) = assemble(ctx, problem)?;
    let got = a.mul_vec(ctx, solution.coeffs())?;
    let n = problem.nodes.len();
    Ok(OdeResidual {
        collocation: crate::hpnum::max_abs_diff(ctx, &got[..n], &rhs[..n]),
        boundary: crate::hpnum::max_abs_diff(ctx, &got[n..], &rhs[n..]),
    })
}

/// Clamped-clamped beam boundary conditions on `[0, length]` with an end
/// deflection `w(length) = end_deflection`.
pub fn clamped_bcs(ctx: &Context, length: &BigReal, end_deflection: &BigReal) -> Vec<BoundaryCondition> {
    vec![
        BoundaryCondition::new(ctx.zero(), 0, ctx.zero()),
        BoundaryCondition::new(ctx.zero(), 1, ctx.zero()),
        BoundaryCondition::new(ctx.adopt(length), 0, ctx.adopt(end_deflection)),
        BoundaryCondition::new(ctx.adopt(length), 1, ctx.zero()),
    ]
}
