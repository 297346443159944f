//! Bivariate monomial bases, 2-D Vandermonde fitting and partial-derivative
//! matrices.

pub mod plate;

use rug::Assign;

use crate::hpnum::{BigReal, Context};
use crate::linalg::{Lu, Matrix};
use crate::taylor1d::TaylorPoly1D;
use crate::vandermonde::falling_factorial;
use crate::{Error, Result};

pub use plate::{
    equilibrium_error, flexural_rigidity, reference_slab, shear_forces, solve_plate, BoundaryRow, EquilibriumReport,
    PlateLoad, PlateProblem, PlateResidual, PlateSolution, Rectangle,
};

/// A point `(x, y)`.
pub type Point = (BigReal, BigReal);

/// Ordered exponent pairs `(i, j)` standing for `x^i y^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis2D {
    terms: Vec<(usize, usize)>,
}

/// Graded order: total degree first, then descending `min(i, j)`, then
/// descending `i`. Degree two comes out as `xy, x², y²`.
fn graded_cmp(a: &(usize, usize), b: &(usize, usize)) -> std::cmp::Ordering {
    (a.0 + a.1).cmp(&(b.0 + b.1)).then_with(|| b.0.min(b.1).cmp(&a.0.min(a.1))).then_with(|| b.0.cmp(&a.0))
}

impl MonomialBasis2D {
    /// The first `size` monomials in graded order.
    pub fn graded(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidProblem("basis size must be positive".into()));
        }
        let mut terms = Vec::with_capacity(size);
        let mut degree = 0;
        while terms.len() < size {
            let mut block: Vec<(usize, usize)> = (0..=degree).map(|i| (i, degree - i)).collect();
            block.sort_by(graded_cmp);
            terms.extend(block.into_iter().take(size - terms.len()));
            degree += 1;
        }
        Ok(MonomialBasis2D { terms })
    }

    /// Every `x^i y^j` with `i, j < per_axis`, in graded order. This is the
    /// basis whose size matches an `m × m` grid.
    pub fn tensor(per_axis: usize) -> Result<Self> {
        if per_axis == 0 {
            return Err(Error::InvalidProblem("basis size must be positive".into()));
        }
        let mut terms: Vec<(usize, usize)> = (0..per_axis).flat_map(|i| (0..per_axis).map(move |j| (i, j))).collect();
        terms.sort_by(graded_cmp);
        Ok(MonomialBasis2D { terms })
    }

    pub fn from_terms(terms: Vec<(usize, usize)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidProblem("basis size must be positive".into()));
        }
        Ok(MonomialBasis2D { terms })
    }

    pub fn terms(&self) -> &[(usize, usize)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn max_exponents(&self) -> (usize, usize) {
        self.terms.iter().fold((0, 0), |(mx, my), &(i, j)| (mx.max(i), my.max(j)))
    }

    /// `∂^{k+l}/∂x^k ∂y^l` of every basis monomial at `(x, y)`.
    pub fn partial_row(&self, ctx: &Context, (x, y): (&BigReal, &BigReal), k: usize, l: usize) -> Vec<BigReal> {
        let (mx, my) = self.max_exponents();
        let px = powers(ctx, x, mx + 1);
        let py = powers(ctx, y, my + 1);
        let mut prod = ctx.zero();
        self.terms
            .iter()
            .map(|&(i, j)| {
                if i < k || j < l {
                    return ctx.zero();
                }
                let mut v = falling_factorial(ctx, i, k);
                v *= falling_factorial(ctx, j, l);
                prod.assign(&px[i - k] * &py[j - l]);
                v *= &prod;
                v
            })
            .collect()
    }
}

fn powers(ctx: &Context, x: &BigReal, n: usize) -> Vec<BigReal> {
    crate::vandermonde::monomial_row(ctx, x, n)
}

/// `V` with `v_it = x_i^{e_t} y_i^{f_t}`.
pub fn build_v2(ctx: &Context, points: &[Point], basis: &MonomialBasis2D) -> Matrix {
    partial_matrix(ctx, points, basis, 0, 0)
}

/// Rows of `∂^{k+l}/∂x^k ∂y^l` applied to the basis at each point.
pub fn partial_matrix(ctx: &Context, points: &[Point], basis: &MonomialBasis2D, k: usize, l: usize) -> Matrix {
    let rows: Vec<Vec<BigReal>> = points.iter().map(|(x, y)| basis.partial_row(ctx, (x, y), k, l)).collect();
    let cols = basis.len();
    let mut it = rows.into_iter().flatten();
    Matrix::from_fn(points.len(), cols, |_, _| it.next().expect("row length matches basis"))
}

/// `Σ_t a_t x^{e_t} y^{f_t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPoly2D {
    basis: MonomialBasis2D,
    coeffs: Vec<BigReal>,
}

impl TaylorPoly2D {
    pub fn new(basis: MonomialBasis2D, coeffs: Vec<BigReal>) -> Result<Self> {
        if basis.len() != coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: coeffs.len(),
                what: "2-D coefficients",
            });
        }
        Ok(TaylorPoly2D { basis, coeffs })
    }

    pub fn basis(&self) -> &MonomialBasis2D {
        &self.basis
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn evaluate(&self, ctx: &Context, x: &BigReal, y: &BigReal) -> BigReal {
        self.evaluate_partial(ctx, x, y, 0, 0)
    }

    pub fn evaluate_partial(&self, ctx: &Context, x: &BigReal, y: &BigReal, k: usize, l: usize) -> BigReal {
        let row = self.basis.partial_row(ctx, (x, y), k, l);
        let mut acc = ctx.zero();
        let mut prod = ctx.zero();
        for (v, a) in row.iter().zip(&self.coeffs) {
            prod.assign(v * a);
            acc += &prod;
        }
        acc
    }

    /// The polynomial `∂^{k+l} p / ∂x^k ∂y^l`, over the surviving monomials.
    pub fn partial(&self, ctx: &Context, k: usize, l: usize) -> TaylorPoly2D {
        let mut terms = Vec::new();
        let mut coeffs = Vec::new();
        for (&(i, j), a) in self.basis.terms.iter().zip(&self.coeffs) {
            if i < k || j < l {
                continue;
            }
            let mut c = falling_factorial(ctx, i, k);
            c *= falling_factorial(ctx, j, l);
            c *= a;
            terms.push((i - k, j - l));
            coeffs.push(c);
        }
        if terms.is_empty() {
            terms.push((0, 0));
            coeffs.push(ctx.zero());
        }
        TaylorPoly2D { basis: MonomialBasis2D { terms }, coeffs }
    }

    /// `self + factor · other` over the union of both bases.
    pub fn add_scaled(&self, ctx: &Context, factor: &BigReal, other: &TaylorPoly2D) -> TaylorPoly2D {
        let mut terms = self.basis.terms.clone();
        let mut coeffs = self.coeffs.clone();
        let mut prod = ctx.zero();
        for (t, a) in other.basis.terms.iter().zip(&other.coeffs) {
            prod.assign(factor * a);
            match terms.iter().position(|s| s == t) {
                Some(pos) => coeffs[pos] += &prod,
                None => {
                    terms.push(*t);
                    coeffs.push(prod.clone());
                }
            }
        }
        TaylorPoly2D { basis: MonomialBasis2D { terms }, coeffs }
    }

    /// The one-variable polynomial `y ↦ p(x0, y)`.
    pub fn restrict_x(&self, ctx: &Context, x0: &BigReal) -> TaylorPoly1D {
        self.restrict(ctx, x0, true)
    }

    /// The one-variable polynomial `x ↦ p(x, y0)`.
    pub fn restrict_y(&self, ctx: &Context, y0: &BigReal) -> TaylorPoly1D {
        self.restrict(ctx, y0, false)
    }

    fn restrict(&self, ctx: &Context, fixed: &BigReal, fix_x: bool) -> TaylorPoly1D {
        let (mx, my) = self.basis.max_exponents();
        let (fixed_max, free_max) = if fix_x { (mx, my) } else { (my, mx) };
        let p = powers(ctx, fixed, fixed_max + 1);
        let mut out = vec![ctx.zero(); free_max + 1];
        let mut prod = ctx.zero();
        for (&(i, j), a) in self.basis.terms.iter().zip(&self.coeffs) {
            let (e_fixed, e_free) = if fix_x { (i, j) } else { (j, i) };
            prod.assign(a * &p[e_fixed]);
            out[e_free] += &prod;
        }
        TaylorPoly1D::at_origin(ctx, out).expect("at least one coefficient")
    }
}

/// `a = V⁻¹ f` for a square 2-D Vandermonde system, in graded order.
pub fn fit2(ctx: &Context, points: &[Point], values: &[BigReal]) -> Result<TaylorPoly2D> {
    let basis = MonomialBasis2D::graded(points.len())?;
    fit2_with_basis(ctx, points, values, basis)
}

pub fn fit2_with_basis(
    ctx: &Context,
    points: &[Point],
    values: &[BigReal],
    basis: MonomialBasis2D,
) -> Result<TaylorPoly2D> {
    if points.len() != basis.len() || values.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: points.len().min(values.len()),
            what: "2-D samples",
        });
    }
    let v = build_v2(ctx, points, &basis);
    let inverse = Lu::factor(ctx, &v).map_err(crate::odebvp::singular_in("2-D Vandermonde fit"))?.inverse();
    TaylorPoly2D::new(basis, inverse.mul_vec(ctx, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_enumeration() {
        assert_eq!(MonomialBasis2D::graded(3).unwrap().terms(), &[(0, 0), (1, 0), (0, 1)]);
        let six = MonomialBasis2D::graded(6).unwrap();
        assert_eq!(&six.terms()[3..], &[(1, 1), (2, 0), (0, 2)]);
        let ten = MonomialBasis2D::graded(10).unwrap();
        assert_eq!(&ten.terms()[6..], &[(2, 1), (1, 2), (3, 0), (0, 3)]);
        assert!(MonomialBasis2D::graded(0).is_err());
    }

    #[test]
    fn graded_300_is_complete_through_degree_23() {
        // 24·25/2 = 300 monomials have total degree ≤ 23.
        let b = MonomialBasis2D::graded(300).unwrap();
        assert!(b.terms().iter().all(|&(i, j)| i + j <= 23));
        let mut all: Vec<_> = (0..=23).flat_map(|d| (0..=d).map(move |i| (i, d - i))).collect();
        let mut got = b.terms().to_vec();
        all.sort();
        got.sort();
        assert_eq!(all, got);
    }

    #[test]
    fn tensor_basis_covers_grid() {
        let b = MonomialBasis2D::tensor(4).unwrap();
        assert_eq!(b.len(), 16);
        assert_eq!(&b.terms()[..6], &[(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]);
        assert_eq!(b.terms()[15], (3, 3));
    }

    #[test]
    fn v2_rows() {
        let ctx = Context::new(64).unwrap();
        let basis = MonomialBasis2D::graded(6).unwrap();
        let pts = vec![(ctx.zero(), ctx.zero()), (ctx.one(), ctx.one()), (ctx.int(2), ctx.int(3))];
        let v = build_v2(&ctx, &pts, &basis);
        assert_eq!(v.row(0)[0], 1);
        assert!(v.row(0)[1..].iter().all(|x| x.is_zero()));
        assert!(v.row(1).iter().all(|x| *x == 1));
        assert_eq!(v[(2, 3)], 6);
    }

    #[test]
    fn partials() {
        let ctx = Context::new(64).unwrap();
        let basis = MonomialBasis2D::from_terms(vec![(2, 0), (2, 2), (1, 1)]).unwrap();
        let pts = vec![(ctx.int(3), ctx.int(-5))];
        assert_eq!(partial_matrix(&ctx, &pts, &basis, 0, 0), build_v2(&ctx, &pts, &basis));
        assert_eq!(partial_matrix(&ctx, &pts, &basis, 2, 0)[(0, 0)], 2);
        assert_eq!(partial_matrix(&ctx, &pts, &basis, 2, 2)[(0, 1)], 4);
        assert!(partial_matrix(&ctx, &pts, &basis, 2, 2)[(0, 2)].is_zero());
    }

    #[test]
    fn fit_plane() {
        let ctx = Context::new(128).unwrap();
        let pts = vec![
            (ctx.parse("0.1").unwrap(), ctx.parse("0.7").unwrap()),
            (ctx.parse("-0.4").unwrap(), ctx.parse("0.2").unwrap()),
            (ctx.parse("0.3").unwrap(), ctx.parse("-0.6").unwrap()),
        ];
        let f: Vec<_> = pts.iter().map(|(x, y)| BigReal::with_val(128, x + y)).collect();
        let p = fit2(&ctx, &pts, &f).unwrap();
        for (a, want) in p.coeffs().iter().zip([0, 1, 1]) {
            assert!(BigReal::with_val(128, a - want).abs() < ctx.pow2(-110));
        }
    }

    #[test]
    fn restriction_and_partial_poly() {
        let ctx = Context::new(64).unwrap();
        // p = 1 + 2x + 3xy + 4y²
        let basis = MonomialBasis2D::from_terms(vec![(0, 0), (1, 0), (1, 1), (0, 2)]).unwrap();
        let p = TaylorPoly2D::new(basis, vec![ctx.int(1), ctx.int(2), ctx.int(3), ctx.int(4)]).unwrap();
        let along_y = p.restrict_x(&ctx, &ctx.int(2));
        assert_eq!(along_y.coeffs(), &[ctx.int(5), ctx.int(6), ctx.int(4)]);
        let along_x = p.restrict_y(&ctx, &ctx.int(1));
        assert_eq!(along_x.coeffs(), &[ctx.int(5), ctx.int(5)]);
        let px = p.partial(&ctx, 1, 0);
        assert_eq!(px.evaluate(&ctx, &ctx.int(7), &ctx.int(2)), 8);
        let sum = p.add_scaled(&ctx, &ctx.int(-1), &p);
        assert!(sum.evaluate(&ctx, &ctx.int(3), &ctx.int(4)).is_zero());
    }
}
