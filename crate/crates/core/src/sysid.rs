//! Identifying a linear law `b₁₀₀ s + b₀₁₀ ṡ + b₀₀₁ s̈ = 1` from samples of
//! `s(t)`, and rebuilding `s` from the identified law by integrating twice.

use crate::fit1d::{fit_explicit, SampleSet1D};
use crate::hpnum::{BigReal, Context};
use crate::linalg::{normal_equations, Matrix};
use crate::taylor1d::TaylorPoly1D;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct IdentificationResult {
    /// `(b₁₀₀, b₀₁₀, b₀₀₁)`.
    pub weights_b: [BigReal; 3],
    /// Right-hand side `c′`, always one.
    pub normalization_c: BigReal,
    pub fitted_poly: TaylorPoly1D,
    /// `max_i |(D b)_i - 1|` over the design rows.
    pub residual: BigReal,
}

/// Design matrix with columns `s(t_i)`, `ṡ(t_i)`, `s̈(t_i)` from the fit.
pub fn design_matrix(ctx: &Context, poly: &TaylorPoly1D, nodes: &[BigReal]) -> Matrix {
    let derivs = [poly.clone(), poly.differentiate(ctx, 1), poly.differentiate(ctx, 2)];
    let rows = nodes.iter().map(|t| derivs.iter().map(|d| d.evaluate(ctx, t)).collect()).collect();
    Matrix::from_rows(rows).expect("rows of equal length")
}

/// Fits `s` through the explicit Vandermonde inverse, then solves the
/// design rows for `b` in the least-squares sense.
pub fn identify(ctx: &Context, samples: &SampleSet1D) -> Result<IdentificationResult> {
    if samples.len() < 3 {
        return Err(Error::Unidentifiable(format!("{} samples, at least 3 are needed", samples.len())));
    }
    let poly = fit_explicit(ctx, samples)?;
    let design = design_matrix(ctx, &poly, samples.nodes().as_slice());
    let ones = vec![ctx.one(); samples.len()];
    let b = solve_weights(ctx, &design, &ones)?;
    let got = design.mul_vec(ctx, &b)?;
    let residual = crate::hpnum::max_abs_diff(ctx, &got, &ones);
    let [b100, b010, b001]: [BigReal; 3] = b.try_into().expect("three unknowns");
    Ok(IdentificationResult { weights_b: [b100, b010, b001], normalization_c: ctx.one(), fitted_poly: poly, residual })
}

/// Normal equations over the columns that survive working precision. A
/// column whose largest entry is below `2^(-p/2)` of the largest entry in
/// the design is rounding noise of a vanishing derivative; its weight is
/// zero.
fn solve_weights(ctx: &Context, design: &Matrix, rhs: &[BigReal]) -> Result<Vec<BigReal>> {
    let norms: Vec<BigReal> = (0..design.cols()).map(|j| crate::hpnum::max_abs(ctx, &design.column(j))).collect();
    let scale = crate::hpnum::max_abs(ctx, &norms);
    let floor = scale * ctx.pow2(-(ctx.bits() as i32) / 2);
    let kept: Vec<usize> = (0..design.cols()).filter(|&j| norms[j] > floor).collect();
    if kept.is_empty() {
        return Err(Error::Unidentifiable("design matrix vanishes".into()));
    }
    let reduced = Matrix::from_fn(design.rows(), kept.len(), |i, k| design[(i, kept[k])].clone());
    let partial = normal_equations(ctx, &reduced, rhs).map_err(|e| match e {
        Error::Singular { .. } => Error::Unidentifiable("design matrix is rank deficient".into()),
        other => other,
    })?;
    let mut b = vec![ctx.zero(); design.cols()];
    for (k, v) in kept.into_iter().zip(partial) {
        b[k] = v;
    }
    Ok(b)
}

/// `s(t) = (t²/2 - b₁₀₀ SS(t) - b₀₁₀ S(t)) / b₀₀₁` with `S = ∫₀ᵗ s` and
/// `SS = ∫₀ᵗ S` taken from the fitted polynomial.
#[derive(Debug, Clone)]
pub struct ReconstructionModel {
    pub weights_b: [BigReal; 3],
    /// `S`, vanishing at zero.
    pub first_integral: TaylorPoly1D,
    /// `SS`, vanishing at zero.
    pub second_integral: TaylorPoly1D,
    pub t_end: BigReal,
}

impl ReconstructionModel {
    pub fn new(ctx: &Context, weights_b: [BigReal; 3], poly: &TaylorPoly1D, t_end: BigReal) -> Result<Self> {
        if weights_b[2].is_zero() {
            return Err(Error::ReconstructionUndefined);
        }
        let s = integral_from_zero(ctx, poly);
        let ss = integral_from_zero(ctx, &s);
        Ok(ReconstructionModel { weights_b, first_integral: s, second_integral: ss, t_end })
    }

    /// Model for the samples the law was identified from, with `t_end` the
    /// last node.
    pub fn from_identification(ctx: &Context, id: &IdentificationResult, samples: &SampleSet1D) -> Result<Self> {
        let t_end = samples.nodes().as_slice().last().cloned().ok_or(Error::ReconstructionUndefined)?;
        Self::new(ctx, id.weights_b.clone(), &id.fitted_poly, t_end)
    }
}

/// Antiderivative that vanishes at `t = 0`, whatever the center.
fn integral_from_zero(ctx: &Context, poly: &TaylorPoly1D) -> TaylorPoly1D {
    let free = poly.antiderivative(ctx, &ctx.zero());
    poly.antiderivative(ctx, &-free.evaluate(ctx, &ctx.zero()))
}

pub fn reconstruct(ctx: &Context, model: &ReconstructionModel, t: &BigReal) -> Result<BigReal> {
    let [b100, b010, b001] = &model.weights_b;
    if b001.is_zero() {
        return Err(Error::ReconstructionUndefined);
    }
    let mut s = BigReal::with_val(ctx.bits(), t * t);
    s /= 2;
    s -= BigReal::with_val(ctx.bits(), b100 * &model.second_integral.evaluate(ctx, t));
    s -= BigReal::with_val(ctx.bits(), b010 * &model.first_integral.evaluate(ctx, t));
    s /= b001;
    Ok(s)
}

/// Ratio between successive probes of [`extrapolation_limit`].
pub const PROBE_RATIO: &str = "1.01";
/// Last probe of [`extrapolation_limit`].
pub const PROBE_CAP: &str = "1e12";

/// Largest probe `t = t_end · 1.01^k` such that every probe up to it keeps
/// `|reconstruct(t) - oracle(t)| < threshold`. Returns `t_end` if the first
/// probe already fails and the cap if none does.
pub fn extrapolation_limit(
    ctx: &Context,
    model: &ReconstructionModel,
    oracle: impl Fn(&BigReal) -> BigReal,
    threshold: &BigReal,
) -> Result<BigReal> {
    if threshold.is_zero() || threshold.is_sign_negative() {
        return Err(Error::InvalidProblem("threshold must be positive".into()));
    }
    let ratio = ctx.parse(PROBE_RATIO)?;
    let cap = ctx.parse(PROBE_CAP)?;
    let mut last_good = ctx.adopt(&model.t_end);
    let mut t = ctx.adopt(&model.t_end);
    if t.is_zero() || t.is_sign_negative() {
        return Err(Error::InvalidProblem("t_end must be positive for a geometric probe schedule".into()));
    }
    loop {
        t *= &ratio;
        if t > cap {
            return Ok(cap);
        }
        let mut err = reconstruct(ctx, model, &t)?;
        err -= oracle(&t);
        err.abs_mut();
        if err.is_nan() || err >= *threshold {
            return Ok(last_good);
        }
        last_good.clone_from(&t);
    }
}
