//! Kirchhoff plate bending, `∇⁴w = -q/D`, by collocation on a monomial basis.
//!
//! Biharmonic rows are imposed at the interior points and one row per
//! boundary condition closes the system. On an `m × m` grid with `w = 0` on
//! the `4(m-1)` edge nodes the tensor basis `x^i y^j, i, j < m` holds exactly
//! `4(m-1)` biharmonic polynomials, so the assembled matrix is square and
//! nonsingular, and the solution satisfies `∇⁴w = -q/D` identically for a
//! uniform load.

use rug::Assign;

use super::{partial_matrix, MonomialBasis2D, Point, TaylorPoly2D};
use crate::calculus::definite_integral;
use crate::hpnum::{BigReal, Context};
use crate::linalg::{Lu, Matrix};
use crate::{Error, Result};

/// `∂^{k+l} w / ∂x^k ∂y^l (point) = value`.
#[derive(Debug, Clone)]
pub struct BoundaryRow {
    pub point: Point,
    pub order: (usize, usize),
    pub value: BigReal,
}

#[derive(Debug, Clone)]
pub struct Rectangle {
    pub x_min: BigReal,
    pub x_max: BigReal,
    pub y_min: BigReal,
    pub y_max: BigReal,
}

impl Rectangle {
    pub fn area(&self, ctx: &Context) -> BigReal {
        let mut w = ctx.adopt(&self.x_max);
        w -= &self.x_min;
        let mut h = ctx.adopt(&self.y_max);
        h -= &self.y_min;
        w * h
    }
}

#[derive(Debug, Clone)]
pub enum PlateLoad {
    /// Constant pressure over the whole slab.
    Uniform(BigReal),
    /// A total force split equally over the four grid nodes nearest `(0, 0)`.
    Point(BigReal),
}

impl PlateLoad {
    /// Parses `uniform:<q>` or `point:<P>`.
    pub fn parse(ctx: &Context, spec: &str) -> Result<Self> {
        match spec.split_once(':') {
            Some(("uniform", v)) => Ok(PlateLoad::Uniform(ctx.parse(v)?)),
            Some(("point", v)) => Ok(PlateLoad::Point(ctx.parse(v)?)),
            _ => Err(Error::InvalidProblem(format!("load {spec:?} is not uniform:<q> or point:<P>"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlateProblem {
    pub domain: Rectangle,
    pub interior_points: Vec<Point>,
    /// Pressure at each interior point.
    pub load: Vec<BigReal>,
    /// Exact total applied force, the reference for the equilibrium check.
    pub applied_load: BigReal,
    pub rigidity: BigReal,
    pub boundary_rows: Vec<BoundaryRow>,
    pub basis: MonomialBasis2D,
}

/// `D = 2h³E / (3(1 - ν²))`.
pub fn flexural_rigidity(ctx: &Context, modulus: &BigReal, height: &BigReal, poisson: &BigReal) -> BigReal {
    let mut num = ctx.adopt(height);
    num *= height;
    num *= height;
    num *= modulus;
    num *= 2;
    let mut den = ctx.one();
    den -= BigReal::with_val(ctx.bits(), poisson * poisson);
    den *= 3;
    num / den
}

/// Square slab on an `m × m` grid with spacing `dx`, centered on the origin,
/// simply supported through `w = 0` at every edge node.
pub fn reference_slab(
    ctx: &Context,
    divisions: usize,
    dx: &BigReal,
    load: &PlateLoad,
    rigidity: &BigReal,
) -> Result<PlateProblem> {
    if divisions < 3 {
        return Err(Error::InvalidProblem("a slab needs at least 3 grid nodes per side".into()));
    }
    let m = divisions;
    let coord = |i: usize| {
        let mut c = ctx.adopt(dx);
        c *= 2 * i as i64 - (m as i64 - 1);
        c /= 2;
        c
    };
    let coords: Vec<BigReal> = (0..m).map(coord).collect();
    let mut interior_points = Vec::new();
    let mut boundary_rows = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let p = (coords[i].clone(), coords[j].clone());
            if i == 0 || j == 0 || i == m - 1 || j == m - 1 {
                boundary_rows.push(BoundaryRow { point: p, order: (0, 0), value: ctx.zero() });
            } else {
                interior_points.push(p);
            }
        }
    }

    let (load_values, applied_load) = match load {
        PlateLoad::Uniform(q) => {
            let side = BigReal::with_val(ctx.bits(), &coords[m - 1] - &coords[0]);
            let area = BigReal::with_val(ctx.bits(), &side * &side);
            (vec![ctx.adopt(q); interior_points.len()], area * q)
        }
        PlateLoad::Point(total) => {
            // Nearest four by squared distance, ties in grid order.
            let mut order: Vec<(BigReal, usize)> = interior_points
                .iter()
                .enumerate()
                .map(|(idx, (x, y))| (BigReal::with_val(ctx.bits(), x * x) + BigReal::with_val(ctx.bits(), y * y), idx))
                .collect();
            order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let mut pressure = ctx.adopt(total);
            pressure /= 4;
            pressure /= BigReal::with_val(ctx.bits(), dx * dx);
            let mut values = vec![ctx.zero(); interior_points.len()];
            for &(_, idx) in order.iter().take(4) {
                values[idx].assign(&pressure);
            }
            (values, ctx.adopt(total))
        }
    };

    Ok(PlateProblem {
        domain: Rectangle {
            x_min: coords[0].clone(),
            x_max: coords[m - 1].clone(),
            y_min: coords[0].clone(),
            y_max: coords[m - 1].clone(),
        },
        interior_points,
        load: load_values,
        applied_load,
        rigidity: ctx.adopt(rigidity),
        boundary_rows,
        basis: MonomialBasis2D::tensor(m)?,
    })
}

/// `[V_x⁴ + 2V_x²y² + V_y⁴ ; boundary rows] a = [-q/D ; values]`.
pub fn assemble(ctx: &Context, problem: &PlateProblem) -> Result<(Matrix, Vec<BigReal>)> {
    let n = problem.basis.len();
    let rows = problem.interior_points.len() + problem.boundary_rows.len();
    if rows != n {
        return Err(Error::DimensionMismatch { expected: n, found: rows, what: "plate rows vs basis size" });
    }
    if problem.load.len() != problem.interior_points.len() {
        return Err(Error::DimensionMismatch {
            expected: problem.interior_points.len(),
            found: problem.load.len(),
            what: "load values",
        });
    }
    if problem.rigidity.is_zero() {
        return Err(Error::InvalidProblem("rigidity must be nonzero".into()));
    }
    let pts = &problem.interior_points;
    let mut bih = partial_matrix(ctx, pts, &problem.basis, 4, 0);
    bih.add_scaled(ctx, &ctx.int(2), &partial_matrix(ctx, pts, &problem.basis, 2, 2))?;
    bih.add_scaled(ctx, &ctx.one(), &partial_matrix(ctx, pts, &problem.basis, 0, 4))?;

    let mut rhs: Vec<BigReal> = problem
        .load
        .iter()
        .map(|q| {
            let mut v = ctx.adopt(q);
            v /= &problem.rigidity;
            -v
        })
        .collect();
    let mut bc = Matrix::zeros(ctx, 0, n);
    for row in &problem.boundary_rows {
        let (x, y) = (&row.point.0, &row.point.1);
        let r = problem.basis.partial_row(ctx, (x, y), row.order.0, row.order.1);
        bc = bc.vstack(&Matrix::from_rows(vec![r])?)?;
        rhs.push(ctx.adopt(&row.value));
    }
    Ok((bih.vstack(&bc)?, rhs))
}

#[derive(Debug, Clone)]
pub struct PlateSolution {
    pub deflection: TaylorPoly2D,
    pub system: Matrix,
    pub inverse: Matrix,
}

impl PlateSolution {
    /// `max |A⁻¹ A - I|` for the assembled matrix.
    pub fn inversion_residual(&self, ctx: &Context) -> Result<BigReal> {
        Ok(self.inverse.mul(ctx, &self.system)?.identity_residual(ctx))
    }
}

/// `a = A⁻¹ b` for the assembled plate system.
pub fn solve_plate(ctx: &Context, problem: &PlateProblem) -> Result<PlateSolution> {
    let (system, rhs) = assemble(ctx, problem)?;
    let inverse = Lu::factor(ctx, &system).map_err(crate::odebvp::singular_in("plate system"))?.inverse();
    let coeffs = inverse.mul_vec(ctx, &rhs)?;
    Ok(PlateSolution { deflection: TaylorPoly2D::new(problem.basis.clone(), coeffs)?, system, inverse })
}

/// `D ∇⁴w + q` at the interior points and `w - value` on the boundary rows.
#[derive(Debug, Clone)]
pub struct PlateResidual {
    pub interior: BigReal,
    pub boundary: BigReal,
}

pub fn residual(ctx: &Context, problem: &PlateProblem, w: &TaylorPoly2D) -> Result<PlateResidual> {
    let (a, rhs) = assemble(ctx, problem)?;
    let got = a.mul_vec(ctx, w.coeffs())?;
    let n = problem.interior_points.len();
    let mut interior = crate::hpnum::max_abs_diff(ctx, &got[..n], &rhs[..n]);
    interior *= &problem.rigidity;
    interior.abs_mut();
    Ok(PlateResidual { interior, boundary: crate::hpnum::max_abs_diff(ctx, &got[n..], &rhs[n..]) })
}

/// `Q_x = -D ∂/∂x ∇²w` and `Q_y = -D ∂/∂y ∇²w` as polynomials.
pub fn shear_polynomials(ctx: &Context, w: &TaylorPoly2D, rigidity: &BigReal) -> (TaylorPoly2D, TaylorPoly2D) {
    let neg_d = -ctx.adopt(rigidity);
    let zero = TaylorPoly2D::new(MonomialBasis2D::from_terms(vec![(0, 0)]).expect("one term"), vec![ctx.zero()])
        .expect("matching sizes");
    let qx = zero.add_scaled(ctx, &neg_d, &w.partial(ctx, 3, 0)).add_scaled(ctx, &neg_d, &w.partial(ctx, 1, 2));
    let qy = zero.add_scaled(ctx, &neg_d, &w.partial(ctx, 2, 1)).add_scaled(ctx, &neg_d, &w.partial(ctx, 0, 3));
    (qx, qy)
}

/// Shear forces at the given points.
pub fn shear_forces(
    ctx: &Context,
    w: &TaylorPoly2D,
    rigidity: &BigReal,
    points: &[Point],
) -> (Vec<BigReal>, Vec<BigReal>) {
    let (qx, qy) = shear_polynomials(ctx, w, rigidity);
    points.iter().map(|(x, y)| (qx.evaluate(ctx, x, y), qy.evaluate(ctx, x, y))).unzip()
}

#[derive(Debug, Clone)]
pub struct EquilibriumReport {
    pub total_load: BigReal,
    /// `∮ Q·n ds` over the rectangle, outward normal.
    pub total_shear: BigReal,
    /// `|total_load - total_shear|`.
    pub error: BigReal,
}

/// Compares the applied force with the outward shear integrated exactly
/// along the four edges.
pub fn equilibrium_error(ctx: &Context, problem: &PlateProblem, w: &TaylorPoly2D) -> EquilibriumReport {
    let (qx, qy) = shear_polynomials(ctx, w, &problem.rigidity);
    let d = &problem.domain;
    let mut total = definite_integral(ctx, &qx.restrict_x(ctx, &d.x_max), &d.y_min, &d.y_max);
    total -= definite_integral(ctx, &qx.restrict_x(ctx, &d.x_min), &d.y_min, &d.y_max);
    total += definite_integral(ctx, &qy.restrict_y(ctx, &d.y_max), &d.x_min, &d.x_max);
    total -= definite_integral(ctx, &qy.restrict_y(ctx, &d.y_min), &d.x_min, &d.x_max);
    let mut error = ctx.adopt(&problem.applied_load);
    error -= &total;
    error.abs_mut();
    EquilibriumReport { total_load: ctx.adopt(&problem.applied_load), total_shear: total, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new(400).unwrap()
    }

    #[test]
    fn reference_slab_layout() {
        let c = ctx();
        let dx = c.ratio(1, 99);
        let p = reference_slab(&c, 6, &dx, &PlateLoad::Uniform(c.one()), &c.one()).unwrap();
        assert_eq!(p.interior_points.len(), 16);
        assert_eq!(p.boundary_rows.len(), 20);
        assert_eq!(p.basis.len(), 36);
        assert_eq!(p.domain.x_max, BigReal::with_val(400, &dx * 5) / 2);
        let point = reference_slab(&c, 6, &dx, &PlateLoad::Point(c.one()), &c.one()).unwrap();
        let loaded: Vec<_> = point.load.iter().filter(|v| !v.is_zero()).collect();
        assert_eq!(loaded.len(), 4);
        let total = loaded.iter().fold(c.zero(), |acc, v| acc + *v) * BigReal::with_val(400, &dx * &dx);
        assert!(BigReal::with_val(400, &total - 1).abs() < c.pow2(-380));
    }

    #[test]
    fn zero_load_gives_zero_solution() {
        let c = ctx();
        let p = reference_slab(&c, 5, &c.ratio(1, 10), &PlateLoad::Uniform(c.zero()), &c.one()).unwrap();
        let s = solve_plate(&c, &p).unwrap();
        assert!(s.deflection.coeffs().iter().all(|a| a.is_zero()));
        assert!(equilibrium_error(&c, &p, &s.deflection).error.is_zero());
    }

    #[test]
    fn uniform_slab_satisfies_rows_and_equilibrium() {
        let c = ctx();
        let p = reference_slab(&c, 7, &c.ratio(1, 20), &PlateLoad::Uniform(c.int(3)), &c.int(2)).unwrap();
        let s = solve_plate(&c, &p).unwrap();
        let r = residual(&c, &p, &s.deflection).unwrap();
        let tol = c.pow2(-400 + 64);
        assert!(r.interior < tol && r.boundary < tol);
        let eq = equilibrium_error(&c, &p, &s.deflection);
        assert!(eq.error < tol, "{:?}", eq);
        assert!(s.inversion_residual(&c).unwrap() < tol);
    }

    #[test]
    fn shear_of_cubic() {
        let c = ctx();
        let basis = MonomialBasis2D::from_terms(vec![(3, 0)]).unwrap();
        let w = TaylorPoly2D::new(basis, vec![c.one()]).unwrap();
        let d = c.int(5);
        let pts = vec![(c.int(1), c.int(2)), (c.parse("-0.5").unwrap(), c.int(0))];
        let (qx, qy) = shear_forces(&c, &w, &d, &pts);
        assert!(qx.iter().all(|v| *v == -30));
        assert!(qy.iter().all(|v| v.is_zero()));
        let zero = TaylorPoly2D::new(MonomialBasis2D::graded(3).unwrap(), vec![c.zero(); 3]).unwrap();
        let (qx, qy) = shear_forces(&c, &zero, &d, &pts);
        assert!(qx.iter().chain(&qy).all(|v| v.is_zero()));
    }

    #[test]
    fn rigidity_formula() {
        let c = ctx();
        // 2·1·12 / (3·(1 - 1/4)) = 32/3
        let d = flexural_rigidity(&c, &c.int(12), &c.one(), &c.ratio(1, 2));
        assert!(BigReal::with_val(400, &d - c.ratio(32, 3)).abs() < c.pow2(-390));
    }

    #[test]
    fn load_parsing() {
        let c = ctx();
        assert!(matches!(PlateLoad::parse(&c, "uniform:1").unwrap(), PlateLoad::Uniform(_)));
        assert!(matches!(PlateLoad::parse(&c, "point:2.5").unwrap(), PlateLoad::Point(_)));
        assert!(PlateLoad::parse(&c, "line:1").is_err());
    }
}
