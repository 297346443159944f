//! Reference problems: the sin study on `[-1, 1]`, the clamped beam, the
//! Newton identification, the random 2-D fit and the square slab.
//!
//! Each function builds its inputs under the given context and returns the
//! diagnostics that the tables and the acceptance suite compare.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Assign;

use crate::basis2d::{self, equilibrium_error, reference_slab, solve_plate, PlateLoad, Point};
use crate::calculus::definite_integral;
use crate::fit1d::{extrapolate, fit, ExtrapolationReport, ExtrapolationSettings, SampleSet1D};
use crate::hpnum::{max_abs_diff, BigReal, Context, Elementary};
use crate::odebvp::{beam_problem, clamped_bcs};
use crate::sysid::{extrapolation_limit, identify, IdentificationResult, ReconstructionModel};
use crate::taylor1d::TaylorPoly1D;
use crate::vandermonde::{inverse_diagnostics, InverseDiagnostics, NodeSet, VandermondeSystem};
use crate::Result;

/// Node count of the sin study.
pub const SIN_NODES: usize = 201;

/// Maclaurin coefficients of `sin` up to degree `n - 1`.
pub fn sin_series(ctx: &Context, n: usize) -> Vec<BigReal> {
    let mut coeffs = Vec::with_capacity(n);
    let mut inv_fact = ctx.one();
    for k in 0..n {
        if k > 0 {
            inv_fact /= k as u32;
        }
        coeffs.push(match k % 4 {
            1 => inv_fact.clone(),
            3 => -inv_fact.clone(),
            _ => ctx.zero(),
        });
    }
    coeffs
}

pub fn sin(ctx: &Context, x: &BigReal) -> BigReal {
    ctx.elementary(Elementary::Sin, x).expect("sin is total")
}

/// Everything the three tables report for one precision.
#[derive(Debug, Clone)]
pub struct SinStudy {
    pub bits: u32,
    pub n: usize,
    pub diagnostics: InverseDiagnostics,
    pub poly: TaylorPoly1D,
    /// `max |a_k - sin^(k)(0)/k!|` against the exact coefficients.
    pub coeff_gap_exact: BigReal,
    /// Same gap against the coefficients rounded to binary64.
    pub coeff_gap_binary64: BigReal,
    pub node_error: BigReal,
    pub midpoint_error: BigReal,
    /// Midpoint errors in grid order.
    pub midpoint_errors: Vec<BigReal>,
    /// `∫_{-1}^{1}` of the fit; the exact value is zero.
    pub integral: BigReal,
}

/// Fits `sin` on `n` equispaced nodes of `[-1, 1]` and measures it.
pub fn sin_study(ctx: &Context, n: usize) -> Result<SinStudy> {
    let nodes = NodeSet::symmetric_grid(ctx, &ctx.one(), n)?;
    let system = VandermondeSystem::build(ctx, nodes.clone());
    let numeric = system.inverse_numeric(ctx)?;
    let closed = system.inverse_closed_form(ctx);
    let diagnostics = inverse_diagnostics(ctx, &system, &numeric, &closed)?;
    let samples = SampleSet1D::from_fn(nodes.clone(), |x| sin(ctx, x));
    let poly = fit(ctx, &samples)?;

    let exact = sin_series(ctx, n);
    let coeff_gap_exact = max_abs_diff(ctx, poly.coeffs(), &exact);
    let binary64: Vec<BigReal> = exact.iter().map(|a| ctx.adopt(&BigReal::with_val(53, a))).collect();
    let coeff_gap_binary64 = max_abs_diff(ctx, poly.coeffs(), &binary64);

    let fitted = poly.evaluate_many(ctx, nodes.as_slice());
    let node_error = max_abs_diff(ctx, &fitted, samples.values());

    let midpoints: Vec<BigReal> = nodes
        .as_slice()
        .windows(2)
        .map(|w| {
            let mut m = ctx.adopt(&w[0]);
            m += &w[1];
            m /= 2;
            m
        })
        .collect();
    let midpoint_errors: Vec<BigReal> = midpoints
        .iter()
        .map(|x| {
            let mut e = poly.evaluate(ctx, x);
            e -= sin(ctx, x);
            e.abs_mut();
            e
        })
        .collect();
    let midpoint_error = crate::hpnum::max_abs(ctx, &midpoint_errors);
    let integral = definite_integral(ctx, &poly, &-ctx.one(), &ctx.one());

    Ok(SinStudy {
        bits: ctx.bits(),
        n,
        diagnostics,
        poly,
        coeff_gap_exact,
        coeff_gap_binary64,
        node_error,
        midpoint_error,
        midpoint_errors,
        integral,
    })
}

/// Extrapolation walk for a sin fit: probes every `dx` beyond `x = ±1`.
pub fn sin_extrapolation(
    ctx: &Context,
    poly: &TaylorPoly1D,
    n: usize,
    threshold: &BigReal,
) -> Result<ExtrapolationReport> {
    let mut step = ctx.int(2);
    step /= (n - 1) as u32;
    let settings = ExtrapolationSettings {
        threshold: ctx.adopt(threshold),
        step,
        start: ctx.one(),
        cap: ctx.int(200),
        tail_window: 10,
    };
    extrapolate(ctx, poly, |x| sin(ctx, x), &settings)
}

/// Clamped beam `w'''' = 0` on `[0, 1]` with `w(1) = 1`; the exact solution
/// is `3x² - 2x³`.
pub fn beam_reference(ctx: &Context, n_grid: usize) -> Result<TaylorPoly1D> {
    let length = ctx.one();
    let problem = beam_problem(ctx, &length, n_grid, &ctx.one(), &ctx.zero(), clamped_bcs(ctx, &length, &ctx.one()))?;
    crate::odebvp::solve(ctx, &problem)
}

/// Largest `|a_k|` for `k ≥ 4`, zero for the exact beam solution.
pub fn beam_trailing(ctx: &Context, poly: &TaylorPoly1D) -> BigReal {
    crate::hpnum::max_abs(ctx, poly.coeffs().iter().skip(4))
}

#[derive(Debug, Clone)]
pub struct NewtonStudy {
    pub identification: IdentificationResult,
    pub model: ReconstructionModel,
    /// Extrapolation limit `t′`.
    pub limit: BigReal,
}

/// Samples `s = t²` on `n` equispaced nodes of `[0, 1]`, identifies the law
/// and walks the reconstruction out to the error threshold.
/// Uniform node count on `[0, 1]` for the Newton identification.
pub const NEWTON_NODES: usize = 101;

pub fn newton_study(ctx: &Context, n: usize, threshold: &BigReal) -> Result<NewtonStudy> {
    let nodes = NodeSet::uniform(ctx, &ctx.zero(), &ctx.one(), n)?;
    let samples = SampleSet1D::from_fn(nodes, |t| BigReal::with_val(ctx.bits(), t * t));
    let identification = identify(ctx, &samples)?;
    let model = ReconstructionModel::from_identification(ctx, &identification, &samples)?;
    let limit = extrapolation_limit(ctx, &model, |t| BigReal::with_val(ctx.bits(), t * t), threshold)?;
    Ok(NewtonStudy { identification, model, limit })
}

/// `sin(5x) + cos(e^{2y})`.
pub fn surface(ctx: &Context, x: &BigReal, y: &BigReal) -> BigReal {
    let mut a = BigReal::with_val(ctx.bits(), x * 5);
    a.sin_mut();
    let mut b = BigReal::with_val(ctx.bits(), y * 2);
    b.exp_mut();
    b.cos_mut();
    a + b
}

/// `count` points uniform in `[-half, half]²`. Each coordinate is an exact
/// multiple of `2^-53`, so the set is the same at every precision.
pub fn random_points(ctx: &Context, rng: &mut ChaCha8Rng, count: usize, half: &BigReal) -> Vec<Point> {
    let coord = |rng: &mut ChaCha8Rng| {
        let k: u64 = rng.gen::<u64>() >> 11;
        let mut u = ctx.zero();
        u.assign(k);
        u *= ctx.pow2(-53);
        u *= 2;
        u -= 1;
        u *= half;
        u
    };
    (0..count).map(|_| (coord(rng), coord(rng))).collect()
}

#[derive(Debug, Clone)]
pub struct Fit2dStudy {
    pub seed: u64,
    pub points: Vec<Point>,
    pub probes: Vec<Point>,
    pub poly: basis2d::TaylorPoly2D,
    pub node_error: BigReal,
    pub probe_error: BigReal,
}

/// Fits [`surface`] on `count` random points of `[-0.5, 0.5]²` and probes
/// `count` random points of `[-0.35, 0.35]²`.
pub fn fit2d_study(ctx: &Context, seed: u64, count: usize) -> Result<Fit2dStudy> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = random_points(ctx, &mut rng, count, &ctx.ratio(1, 2));
    let probes = random_points(ctx, &mut rng, count, &ctx.parse("0.35")?);
    let values: Vec<BigReal> = points.iter().map(|(x, y)| surface(ctx, x, y)).collect();
    let poly = basis2d::fit2(ctx, &points, &values)?;
    let at_nodes: Vec<BigReal> = points.iter().map(|(x, y)| poly.evaluate(ctx, x, y)).collect();
    let node_error = max_abs_diff(ctx, &at_nodes, &values);
    let fitted: Vec<BigReal> = probes.iter().map(|(x, y)| poly.evaluate(ctx, x, y)).collect();
    let truth: Vec<BigReal> = probes.iter().map(|(x, y)| surface(ctx, x, y)).collect();
    let probe_error = max_abs_diff(ctx, &fitted, &truth);
    Ok(Fit2dStudy { seed, points, probes, poly, node_error, probe_error })
}

/// Grid nodes per side of the reference slab.
pub const SLAB_DIVISIONS: usize = 20;

/// Grid spacing `1/99` of the reference slab.
pub fn slab_spacing(ctx: &Context) -> BigReal {
    ctx.ratio(1, 99)
}

#[derive(Debug, Clone)]
pub struct PlateStudy {
    pub equilibrium: crate::basis2d::EquilibriumReport,
    pub inversion_residual: BigReal,
    pub solution: crate::basis2d::PlateSolution,
}

/// Square slab with `D = 1`, solved and checked.
pub fn plate_study(ctx: &Context, divisions: usize, dx: &BigReal, load: &PlateLoad) -> Result<PlateStudy> {
    let problem = reference_slab(ctx, divisions, dx, load, &ctx.one())?;
    let solution = solve_plate(ctx, &problem)?;
    let equilibrium = equilibrium_error(ctx, &problem, &solution.deflection);
    let inversion_residual = solution.inversion_residual(ctx)?;
    Ok(PlateStudy { equilibrium, inversion_residual, solution })
}
