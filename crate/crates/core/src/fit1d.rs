//! Fitting a [`TaylorPoly1D`] to samples through the Vandermonde inverse, and
//! probing how far the fit extrapolates.

use std::cmp::Ordering;

use crate::hpnum::{BigReal, Context};
use crate::linalg::Lu;
use crate::taylor1d::TaylorPoly1D;
use crate::vandermonde::{NodeSet, VandermondeSystem};
use crate::{Error, Result};

/// Values `f_i` observed at distinct nodes `x_i`.
#[derive(Debug, Clone)]
pub struct SampleSet1D {
    nodes: NodeSet,
    values: Vec<BigReal>,
}

impl SampleSet1D {
    pub fn new(nodes: NodeSet, values: Vec<BigReal>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: nodes.len(), found: values.len(), what: "sample values" });
        }
        Ok(SampleSet1D { nodes, values })
    }

    /// Samples a function at every node.
    pub fn from_fn(nodes: NodeSet, f: impl Fn(&BigReal) -> BigReal) -> Self {
        let values = nodes.iter().map(f).collect();
        SampleSet1D { nodes, values }
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn values(&self) -> &[BigReal] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `a = V⁻¹ f` from one LU solve of `V a = f`, centered at zero.
pub fn fit(ctx: &Context, samples: &SampleSet1D) -> Result<TaylorPoly1D> {
    let system = VandermondeSystem::build(ctx, samples.nodes.clone());
    let coeffs = Lu::factor(ctx, system.matrix())?.solve(&samples.values)?;
    TaylorPoly1D::at_origin(ctx, coeffs)
}

/// `a = V⁻¹ f` with `V⁻¹` formed explicitly, column by column.
pub fn fit_explicit(ctx: &Context, samples: &SampleSet1D) -> Result<TaylorPoly1D> {
    let system = VandermondeSystem::build(ctx, samples.nodes.clone());
    let inverse = system.inverse_numeric(ctx)?.inverse;
    fit_with_inverse(ctx, &inverse, samples)
}

/// Same as [`fit_explicit`] for a caller who already holds `V⁻¹`.
pub fn fit_with_inverse(ctx: &Context, inverse: &crate::linalg::Matrix, samples: &SampleSet1D) -> Result<TaylorPoly1D> {
    let coeffs = inverse.mul_vec(ctx, &samples.values)?;
    TaylorPoly1D::at_origin(ctx, coeffs)
}

pub fn interpolate(ctx: &Context, poly: &TaylorPoly1D, probes: &[BigReal]) -> Vec<BigReal> {
    poly.evaluate_many(ctx, probes)
}

/// Knobs for [`extrapolate`].
#[derive(Debug, Clone)]
pub struct ExtrapolationSettings {
    /// Error at which the walk stops.
    pub threshold: BigReal,
    /// Distance between probes.
    pub step: BigReal,
    /// Start of the walk (the edge of the fitted domain), measured from the
    /// center.
    pub start: BigReal,
    /// Farthest distance from the center that is probed.
    pub cap: BigReal,
    /// Window passed to the radius estimator.
    pub tail_window: usize,
}

/// One probe of the extrapolation walk.
#[derive(Debug, Clone)]
pub struct Probe {
    pub x: BigReal,
    pub error: BigReal,
}

#[derive(Debug, Clone)]
pub struct ExtrapolationReport {
    pub predicted_span: BigReal,
    /// Smaller of the two one-sided spans.
    pub observed_span: BigReal,
    pub observed_right: BigReal,
    pub observed_left: BigReal,
    pub threshold: BigReal,
    /// Probes on the positive side, in walk order.
    pub grid: Vec<Probe>,
    /// Whether the walk reached the cap without crossing the threshold.
    pub capped: bool,
}

/// Walks outward from the fitted domain on both sides of the center until
/// `|poly(x) - oracle(x)| ≥ threshold`, and reports the last distance that
/// stayed below it next to the root-test prediction.
pub fn extrapolate(
    ctx: &Context,
    poly: &TaylorPoly1D,
    oracle: impl Fn(&BigReal) -> BigReal,
    settings: &ExtrapolationSettings,
) -> Result<ExtrapolationReport> {
    if !settings.threshold.is_sign_positive() || settings.threshold.is_zero() {
        return Err(Error::InvalidProblem("threshold must be positive".into()));
    }
    if !settings.step.is_sign_positive() || settings.step.is_zero() {
        return Err(Error::InvalidProblem("probe step must be positive".into()));
    }
    let predicted_span = poly.radius_of_convergence(ctx, settings.tail_window)?.r_root;

    let mut grid = Vec::new();
    let mut capped = true;
    let mut walk = |sign: i32, record: bool| -> BigReal {
        let mut last_good = ctx.adopt(&settings.start);
        let mut k: u64 = 0;
        loop {
            k += 1;
            let mut dist = ctx.adopt(&settings.step);
            dist *= k;
            dist += &settings.start;
            if dist > settings.cap {
                return last_good;
            }
            let mut x = ctx.adopt(&dist);
            if sign < 0 {
                x = -x;
            }
            x += poly.center();
            let mut err = poly.evaluate(ctx, &x);
            err -= oracle(&x);
            err.abs_mut();
            let failed = err.cmp_abs(&settings.threshold) != Some(Ordering::Less);
            if record {
                grid.push(Probe { x, error: err });
            }
            if failed {
                capped = false;
                return last_good;
            }
            last_good = dist;
        }
    };
    let observed_right = walk(1, true);
    let observed_left = walk(-1, false);
    let observed_span = if observed_left < observed_right { observed_left.clone() } else { observed_right.clone() };
    Ok(ExtrapolationReport {
        predicted_span,
        observed_span,
        observed_right,
        observed_left,
        threshold: settings.threshold.clone(),
        grid,
        capped,
    })
}
