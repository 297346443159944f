use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, ensure, Context as _, Result};
use hap_taylor::basis2d::{self, shear_forces, PlateLoad};
use hap_taylor::calculus::{definite_integral, derivative_at};
use hap_taylor::experiments::{self, sin};
use hap_taylor::fit1d::{extrapolate, fit, ExtrapolationSettings, SampleSet1D};
use hap_taylor::hpnum::{max_abs, max_abs_diff, Elementary};
use hap_taylor::io::{columns_to_csv, read_rows, read_samples, read_samples_2d};
use hap_taylor::odebvp::{self, beam_problem, clamped_bcs, BoundaryCondition};
use hap_taylor::sysid::{extrapolation_limit, identify, ReconstructionModel};
use hap_taylor::vandermonde::NodeSet;
use hap_taylor::{taylor1d, BigReal, Context, TaylorPoly1D};
use serde_json::json;

use crate::report::{dec, header, num, write, write_json, write_timing};
use crate::{
    BeamArgs, Command, Common, DiffArgs, ExtrapArgs, Fit2dArgs, Function, IntegrateArgs, InterpArgs, PlateArgs, Source,
    SysidArgs, TableArgs,
};

pub fn run(common: &Common, command: &Command) -> Result<()> {
    fs::create_dir_all(&common.output_dir).with_context(|| format!("creating {}", common.output_dir.display()))?;
    let start = Instant::now();
    let dir = common.output_dir.as_path();
    match command {
        Command::Table1(args) | Command::Table2(args) | Command::Table3(args) => {
            return table(common, command, args);
        }
        _ => {}
    }
    let ctx = Context::new(common.precision_bits)?;
    match command {
        Command::Fit(source) => fit_cmd(&ctx, common, command, source)?,
        Command::Interp(args) => interp(&ctx, dir, args)?,
        Command::Extrap(args) => extrap(&ctx, common, command, args)?,
        Command::Diff(args) => diff(&ctx, dir, args)?,
        Command::Integrate(args) => integrate(&ctx, common, command, args)?,
        Command::OdeBeam(args) => beam(&ctx, common, command, args)?,
        Command::PdePlate(args) => plate(&ctx, common, command, args)?,
        Command::Sysid(args) => sysid(&ctx, common, command, args)?,
        Command::Fit2d(args) => fit2d(&ctx, common, command, args)?,
        Command::Table1(_) | Command::Table2(_) | Command::Table3(_) => unreachable!("handled above"),
    }
    write_timing(dir, common, command, start.elapsed())
}

/// Decimal string, or a ratio `a/b` of two decimals.
fn parse(ctx: &Context, s: &str) -> Result<BigReal> {
    Ok(match s.split_once('/') {
        Some((a, b)) => {
            let den = ctx.parse(b)?;
            ensure!(!den.is_zero(), "{s:?} divides by zero");
            ctx.parse(a)? / den
        }
        None => ctx.parse(s)?,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

struct Loaded {
    samples: SampleSet1D,
    oracle: Option<Function>,
}

impl Loaded {
    fn truth(&self, ctx: &Context, x: &BigReal, order: usize) -> Option<BigReal> {
        self.oracle.map(|f| oracle(ctx, f, x, order))
    }
}

/// `order`-th derivative of a built-in function.
fn oracle(ctx: &Context, f: Function, x: &BigReal, order: usize) -> BigReal {
    match f {
        Function::Sin => {
            let mut shift = ctx.pi();
            shift *= order as u32;
            shift /= 2;
            shift += x;
            sin(ctx, &shift)
        }
        Function::T2 => match order {
            0 => BigReal::with_val(ctx.bits(), x * x),
            1 => BigReal::with_val(ctx.bits(), x * 2),
            2 => ctx.int(2),
            _ => ctx.zero(),
        },
    }
}

fn load(ctx: &Context, source: &Source) -> Result<Loaded> {
    if let Some(path) = &source.input {
        let samples = read_samples(ctx, &read(path)?).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(Loaded { samples, oracle: None });
    }
    let f = source.function.context("either --input or --function is required")?;
    let half = parse(ctx, &source.length)?;
    let nodes = NodeSet::symmetric_grid(ctx, &half, source.n)?;
    let samples = SampleSet1D::from_fn(nodes, |x| oracle(ctx, f, x, 0));
    Ok(Loaded { samples, oracle: Some(f) })
}

fn midpoints(ctx: &Context, nodes: &[BigReal]) -> Vec<BigReal> {
    nodes
        .windows(2)
        .map(|w| {
            let mut m = ctx.adopt(&w[0]);
            m += &w[1];
            m /= 2;
            m
        })
        .collect()
}

fn abs_diff(ctx: &Context, a: &BigReal, b: &BigReal) -> BigReal {
    let mut d = ctx.adopt(a);
    d -= b;
    d.abs_mut();
    d
}

/// Walk settings for a fit on a grid: step `dx`, starting at the farther
/// end of the domain.
fn walk_settings(ctx: &Context, nodes: &[BigReal], threshold: BigReal, cap: BigReal) -> Result<ExtrapolationSettings> {
    ensure!(nodes.len() >= 2, "extrapolation needs at least two nodes");
    let mut step = ctx.adopt(&nodes[nodes.len() - 1]);
    step -= &nodes[0];
    step /= (nodes.len() - 1) as u32;
    let start = max_abs(ctx, [&nodes[0], &nodes[nodes.len() - 1]]);
    Ok(ExtrapolationSettings { threshold, step, start, cap, tail_window: 10 })
}

/// Shared body of `fit` and `extrap`: errors at nodes and midpoints, the
/// predicted span and, with an oracle, the observed one.
fn fit_report(
    ctx: &Context,
    common: &Common,
    command: &Command,
    loaded: &Loaded,
    poly: &TaylorPoly1D,
    threshold: BigReal,
    cap: BigReal,
) -> Result<(serde_json::Map<String, serde_json::Value>, Option<hap_taylor::fit1d::ExtrapolationReport>)> {
    let nodes = loaded.samples.nodes().as_slice();
    let at_nodes = poly.evaluate_many(ctx, nodes);
    let node_error = max_abs_diff(ctx, &at_nodes, loaded.samples.values());
    let mids = midpoints(ctx, nodes);
    let midpoint_error = loaded.oracle.map(|_| {
        let errs: Vec<BigReal> =
            mids.iter().map(|x| abs_diff(ctx, &poly.evaluate(ctx, x), &loaded.truth(ctx, x, 0).unwrap())).collect();
        max_abs(ctx, &errs)
    });
    let r_predicted = poly.radius_of_convergence(ctx, 10)?.r_root;
    let walk = match loaded.oracle {
        Some(f) => {
            let settings = walk_settings(ctx, nodes, threshold, cap)?;
            Some(extrapolate(ctx, poly, |x| oracle(ctx, f, x, 0), &settings)?)
        }
        None => None,
    };
    let mut map = header(common, command);
    map.insert("n".into(), json!(loaded.samples.len()));
    map.insert("max_node_error".into(), dec(&node_error));
    map.insert("max_midpoint_error".into(), num(midpoint_error.as_ref()));
    map.insert("r_predicted".into(), dec(&r_predicted));
    map.insert("span_observed".into(), num(walk.as_ref().map(|w| &w.observed_span)));
    Ok((map, walk))
}

fn fit_cmd(ctx: &Context, common: &Common, command: &Command, source: &Source) -> Result<()> {
    let loaded = load(ctx, source)?;
    let poly = fit(ctx, &loaded.samples)?;
    let dir = common.output_dir.as_path();
    write(dir, "coefficients.csv", &taylor1d::to_csv(&poly))?;
    let (map, _) = fit_report(ctx, common, command, &loaded, &poly, ctx.one(), ctx.int(200))?;
    write_json(dir, "fit.json", map)
}

fn interp(ctx: &Context, dir: &Path, args: &InterpArgs) -> Result<()> {
    let loaded = load(ctx, &args.source)?;
    let poly = fit(ctx, &loaded.samples)?;
    let probes = match &args.points {
        Some(path) => read_rows(ctx, &read(path)?, 1)?.into_iter().map(|mut r| r.remove(0)).collect(),
        None => midpoints(ctx, loaded.samples.nodes().as_slice()),
    };
    let values = poly.evaluate_many(ctx, &probes);
    let text = if loaded.oracle.is_some() {
        let errors: Vec<BigReal> =
            probes.iter().zip(&values).map(|(x, v)| abs_diff(ctx, v, &loaded.truth(ctx, x, 0).unwrap())).collect();
        columns_to_csv(&["x", "value", "error"], &[&probes, &values, &errors])
    } else {
        columns_to_csv(&["x", "value"], &[&probes, &values])
    };
    write(dir, "interp.csv", &text)
}

fn extrap(ctx: &Context, common: &Common, command: &Command, args: &ExtrapArgs) -> Result<()> {
    let loaded = load(ctx, &args.source)?;
    let poly = fit(ctx, &loaded.samples)?;
    let threshold = parse(ctx, &args.threshold)?;
    let cap = parse(ctx, &args.cap)?;
    let (mut map, walk) = fit_report(ctx, common, command, &loaded, &poly, ctx.adopt(&threshold), cap)?;
    let dir = common.output_dir.as_path();
    map.insert("threshold".into(), dec(&threshold));
    if let Some(walk) = &walk {
        map.insert("span_right".into(), dec(&walk.observed_right));
        map.insert("span_left".into(), dec(&walk.observed_left));
        map.insert("capped".into(), json!(walk.capped));
        let xs: Vec<BigReal> = walk.grid.iter().map(|p| p.x.clone()).collect();
        let errs: Vec<BigReal> = walk.grid.iter().map(|p| p.error.clone()).collect();
        write(dir, "extrap.csv", &columns_to_csv(&["x", "error"], &[&xs, &errs]))?;
    } else {
        write(dir, "extrap.csv", "x,error\n")?;
    }
    write_json(dir, "extrap.json", map)
}

fn diff(ctx: &Context, dir: &Path, args: &DiffArgs) -> Result<()> {
    let loaded = load(ctx, &args.source)?;
    let poly = fit(ctx, &loaded.samples)?;
    let points: Vec<BigReal> = if args.at.is_empty() {
        loaded.samples.nodes().as_slice().to_vec()
    } else {
        args.at.iter().map(|s| parse(ctx, s)).collect::<Result<_>>()?
    };
    let values: Vec<BigReal> = points.iter().map(|x| derivative_at(ctx, &poly, args.order, x).value).collect();
    let text = if loaded.oracle.is_some() {
        let errors: Vec<BigReal> = points
            .iter()
            .zip(&values)
            .map(|(x, v)| abs_diff(ctx, v, &loaded.truth(ctx, x, args.order).unwrap()))
            .collect();
        columns_to_csv(&["x", "derivative", "error"], &[&points, &values, &errors])
    } else {
        columns_to_csv(&["x", "derivative"], &[&points, &values])
    };
    write(dir, "diff.csv", &text)
}

fn integrate(ctx: &Context, common: &Common, command: &Command, args: &IntegrateArgs) -> Result<()> {
    let loaded = load(ctx, &args.source)?;
    let poly = fit(ctx, &loaded.samples)?;
    let nodes = loaded.samples.nodes().as_slice();
    let lower = match &args.lower {
        Some(s) => parse(ctx, s)?,
        None => nodes[0].clone(),
    };
    let upper = match &args.upper {
        Some(s) => parse(ctx, s)?,
        None => nodes[nodes.len() - 1].clone(),
    };
    let value = definite_integral(ctx, &poly, &lower, &upper);
    let exact = loaded.oracle.map(|f| match f {
        Function::Sin => {
            let cos = |x: &BigReal| ctx.elementary(Elementary::Cos, x).expect("cos is total");
            cos(&lower) - cos(&upper)
        }
        Function::T2 => {
            let cube = |x: &BigReal| BigReal::with_val(ctx.bits(), x * x) * x;
            (cube(&upper) - cube(&lower)) / 3u32
        }
    });
    let error = exact.as_ref().map(|e| abs_diff(ctx, &value, e));
    let mut map = header(common, command);
    map.insert("lower".into(), dec(&lower));
    map.insert("upper".into(), dec(&upper));
    map.insert("integral".into(), dec(&value));
    map.insert("exact".into(), num(exact.as_ref()));
    map.insert("error".into(), num(error.as_ref()));
    write_json(common.output_dir.as_path(), "integrate.json", map)
}

fn beam(ctx: &Context, common: &Common, command: &Command, args: &BeamArgs) -> Result<()> {
    let length = parse(ctx, &args.length)?;
    let ei = parse(ctx, &args.ei)?;
    let q = match args.load.split_once(':') {
        Some(("const", v)) => parse(ctx, v)?,
        _ => bail!("load {:?} is not const:<q>", args.load),
    };
    let bcs = if args.bcs.is_empty() {
        clamped_bcs(ctx, &length, &ctx.one())
    } else {
        args.bcs.iter().map(|s| BoundaryCondition::parse(ctx, s)).collect::<hap_taylor::Result<_>>()?
    };
    let problem = beam_problem(ctx, &length, args.n, &ei, &q, bcs)?;
    let poly = odebvp::solve(ctx, &problem)?;
    let residual = odebvp::residual(ctx, &problem, &poly)?;
    let dir = common.output_dir.as_path();
    write(dir, "coefficients.csv", &taylor1d::to_csv(&poly))?;
    let mut map = header(common, command);
    map.insert("coefficients".into(), json!(poly.coeffs().len()));
    map.insert("collocation_residual".into(), dec(&residual.collocation));
    map.insert("boundary_residual".into(), dec(&residual.boundary));
    map.insert("max_trailing_coefficient".into(), dec(&experiments::beam_trailing(ctx, &poly)));
    write_json(dir, "residual.json", map)
}

fn plate(ctx: &Context, common: &Common, command: &Command, args: &PlateArgs) -> Result<()> {
    let dx = parse(ctx, &args.dx)?;
    let load = PlateLoad::parse(ctx, &args.load)?;
    let rigidity = parse(ctx, &args.rigidity)?;
    let problem = basis2d::reference_slab(ctx, args.divisions, &dx, &load, &rigidity)?;
    let solution = basis2d::solve_plate(ctx, &problem)?;
    let w = &solution.deflection;
    let equilibrium = basis2d::equilibrium_error(ctx, &problem, w);
    let inversion = solution.inversion_residual(ctx)?;
    let residual = basis2d::plate::residual(ctx, &problem, w)?;

    let mut points: Vec<basis2d::Point> = problem.interior_points.clone();
    points.extend(problem.boundary_rows.iter().map(|r| r.point.clone()));
    points.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));
    let xs: Vec<BigReal> = points.iter().map(|p| p.0.clone()).collect();
    let ys: Vec<BigReal> = points.iter().map(|p| p.1.clone()).collect();
    let ws: Vec<BigReal> = points.iter().map(|(x, y)| w.evaluate(ctx, x, y)).collect();
    let (qx, qy) = shear_forces(ctx, w, &rigidity, &points);

    let dir = common.output_dir.as_path();
    write(dir, "deflection.csv", &columns_to_csv(&["x", "y", "w"], &[&xs, &ys, &ws]))?;
    write(dir, "shear.csv", &columns_to_csv(&["x", "y", "qx", "qy"], &[&xs, &ys, &qx, &qy]))?;
    let mut map = header(common, command);
    map.insert("total_load".into(), dec(&equilibrium.total_load));
    map.insert("total_shear".into(), dec(&equilibrium.total_shear));
    map.insert("equilibrium_error".into(), dec(&equilibrium.error));
    map.insert(
        "equilibrium_quadrature".into(),
        json!("exact: applied force against the outward shear integrated exactly along the four edges"),
    );
    map.insert("inversion_residual".into(), dec(&inversion));
    map.insert("interior_residual".into(), dec(&residual.interior));
    map.insert("boundary_residual".into(), dec(&residual.boundary));
    map.insert("unknowns".into(), json!(problem.basis.len()));
    write_json(dir, "equilibrium.json", map)
}

fn sysid(ctx: &Context, common: &Common, command: &Command, args: &SysidArgs) -> Result<()> {
    let (samples, has_oracle) = match &args.input {
        Some(path) => (read_samples(ctx, &read(path)?).with_context(|| format!("parsing {}", path.display()))?, false),
        None => {
            let nodes = NodeSet::uniform(ctx, &ctx.zero(), &ctx.one(), args.n)?;
            (SampleSet1D::from_fn(nodes, |t| BigReal::with_val(ctx.bits(), t * t)), true)
        }
    };
    let threshold = parse(ctx, &args.threshold)?;
    let id = identify(ctx, &samples)?;
    let limit = if has_oracle {
        let model = ReconstructionModel::from_identification(ctx, &id, &samples)?;
        Some(extrapolation_limit(ctx, &model, |t| BigReal::with_val(ctx.bits(), t * t), &threshold)?)
    } else {
        None
    };
    let mut map = header(common, command);
    map.insert("n".into(), json!(samples.len()));
    map.insert("b".into(), json!(id.weights_b.iter().map(dec).collect::<Vec<_>>()));
    map.insert("c".into(), dec(&id.normalization_c));
    map.insert("residual".into(), dec(&id.residual));
    map.insert("t_prime".into(), num(limit.as_ref()));
    write_json(common.output_dir.as_path(), "sysid.json", map)
}

fn fit2d(ctx: &Context, common: &Common, command: &Command, args: &Fit2dArgs) -> Result<()> {
    let dir = common.output_dir.as_path();
    let mut map = header(common, command);
    let poly = match &args.input {
        Some(path) => {
            let (points, values) =
                read_samples_2d(ctx, &read(path)?).with_context(|| format!("parsing {}", path.display()))?;
            let poly = basis2d::fit2(ctx, &points, &values)?;
            let at: Vec<BigReal> = points.iter().map(|(x, y)| poly.evaluate(ctx, x, y)).collect();
            map.insert("n".into(), json!(points.len()));
            map.insert("max_node_error".into(), dec(&max_abs_diff(ctx, &at, &values)));
            map.insert("max_probe_error".into(), serde_json::Value::Null);
            poly
        }
        None => {
            let study = experiments::fit2d_study(ctx, common.seed, args.count)?;
            map.insert("n".into(), json!(study.points.len()));
            map.insert("max_node_error".into(), dec(&study.node_error));
            map.insert("max_probe_error".into(), dec(&study.probe_error));
            study.poly
        }
    };
    let mut text = String::from("nx,ny,a\n");
    for ((i, j), a) in poly.basis().terms().iter().zip(poly.coeffs()) {
        text.push_str(&format!("{i},{j},{}\n", hap_taylor::hpnum::to_decimal(a)));
    }
    write(dir, "coefficients.csv", &text)?;
    write_json(dir, "fit2d.json", map)
}

fn table(common: &Common, command: &Command, args: &TableArgs) -> Result<()> {
    ensure!(!args.precisions.is_empty(), "--precisions is empty");
    let (name, headers): (&str, &[&str]) = match command {
        Command::Table1(_) => {
            ("table1", &["p", "det_analytic", "det_numeric", "det_gap", "inverse_gap", "coeff_gap", "coeff_gap_exact"])
        }
        Command::Table2(_) => ("table2", &["p", "node_error", "midpoint_error"]),
        _ => ("table3", &["p", "integral"]),
    };
    let mut text = headers.join(",");
    text.push('\n');
    let mut seconds = Vec::new();
    for &bits in &args.precisions {
        let start = Instant::now();
        let ctx = Context::new(bits)?;
        let s = experiments::sin_study(&ctx, args.n)?;
        let d = &s.diagnostics;
        let row: Vec<&BigReal> = match command {
            Command::Table1(_) => vec![
                &d.det_analytic,
                &d.det_numeric,
                &d.det_gap,
                &d.inverse_gap,
                &s.coeff_gap_binary64,
                &s.coeff_gap_exact,
            ],
            Command::Table2(_) => vec![&s.node_error, &s.midpoint_error],
            _ => vec![&s.integral],
        };
        text.push_str(&bits.to_string());
        for v in row {
            text.push(',');
            text.push_str(&hap_taylor::hpnum::to_decimal(v));
        }
        text.push('\n');
        seconds.push(json!({ "p": bits, "wall_seconds": start.elapsed().as_secs_f64() }));
    }
    let dir = common.output_dir.as_path();
    write(dir, &format!("{name}.csv"), &text)?;
    let mut map = header(common, command);
    map.insert("precisions".into(), json!(args.precisions));
    map.insert("n".into(), json!(args.n));
    write_json(dir, &format!("{name}.json"), map.clone())?;
    map.insert("per_precision".into(), json!(seconds));
    write_json(dir, "timing.json", map)
}
