//! Derivatives, definite integrals and the Lagrange remainder of a fitted
//! polynomial.

use rug::ops::Pow;

use crate::hpnum::{BigReal, Context};
use crate::taylor1d::TaylorPoly1D;

/// Value of the `k`-th derivative at `x`.
#[derive(Debug, Clone)]
pub struct DerivativeValue {
    pub value: BigReal,
    /// Set when `k` exceeds the degree and the value is identically zero.
    pub degenerate_order: bool,
}

pub fn derivative_at(ctx: &Context, poly: &TaylorPoly1D, order: usize, x: &BigReal) -> DerivativeValue {
    DerivativeValue { value: poly.differentiate(ctx, order).evaluate(ctx, x), degenerate_order: order > poly.degree() }
}

/// `∫_lower^upper p`, computed as `F(upper)` for the antiderivative `F` whose
/// constant makes `F(lower) = 0`.
pub fn definite_integral(ctx: &Context, poly: &TaylorPoly1D, lower: &BigReal, upper: &BigReal) -> BigReal {
    let unanchored = poly.antiderivative(ctx, &ctx.zero());
    let constant = -unanchored.evaluate(ctx, lower);
    poly.antiderivative(ctx, &constant).evaluate(ctx, upper)
}

/// `F(upper) - F(lower)` with a zero integration constant.
pub fn integral_difference(ctx: &Context, poly: &TaylorPoly1D, lower: &BigReal, upper: &BigReal) -> BigReal {
    let f = poly.antiderivative(ctx, &ctx.zero());
    let mut v = f.evaluate(ctx, upper);
    v -= f.evaluate(ctx, lower);
    v
}

/// `sup|f^(n+1)| · span^(n+1) / (n+1)!`.
pub fn remainder_bound(ctx: &Context, sup_deriv: &BigReal, order: u32, span: &BigReal) -> BigReal {
    let mut r = ctx.adopt(span);
    r = BigReal::with_val(ctx.bits(), r.pow(order + 1));
    r *= sup_deriv;
    r /= ctx.factorial(order + 1);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit1d::{fit, SampleSet1D};
    use crate::vandermonde::NodeSet;

    #[test]
    fn second_derivative_of_cube() {
        let ctx = Context::new(128).unwrap();
        let nodes = NodeSet::symmetric_grid(&ctx, &ctx.one(), 6).unwrap();
        let p = fit(&ctx, &SampleSet1D::from_fn(nodes, |x| x.clone().pow(3u32))).unwrap();
        let d = derivative_at(&ctx, &p, 2, &ctx.int(2));
        assert!(BigReal::with_val(128, &d.value - 12).abs() < ctx.pow2(-100));
        assert!(!d.degenerate_order);
        let past = derivative_at(&ctx, &p, 9, &ctx.int(2));
        assert!(past.degenerate_order && past.value.is_zero());
        let k0 = derivative_at(&ctx, &p, 0, &ctx.parse("0.3").unwrap());
        assert_eq!(k0.value, p.evaluate(&ctx, &ctx.parse("0.3").unwrap()));
    }

    #[test]
    fn integral_of_square() {
        let ctx = Context::new(200).unwrap();
        let nodes = NodeSet::symmetric_grid(&ctx, &ctx.one(), 5).unwrap();
        let p = fit(&ctx, &SampleSet1D::from_fn(nodes, |x| BigReal::with_val(200, x * x))).unwrap();
        let v = definite_integral(&ctx, &p, &ctx.zero(), &ctx.one());
        assert!(BigReal::with_val(200, &v - ctx.ratio(1, 3)).abs() <= ctx.pow2(-200 + 16));
    }

    #[test]
    fn anchored_and_difference_routes_agree() {
        let ctx = Context::new(300).unwrap();
        let coeffs: Vec<_> = (1..30).map(|k| ctx.ratio(if k % 3 == 0 { -1 } else { 1 }, k)).collect();
        let p = TaylorPoly1D::at_origin(&ctx, coeffs).unwrap();
        let (lo, hi) = (ctx.parse("-0.9").unwrap(), ctx.parse("0.7").unwrap());
        let a = definite_integral(&ctx, &p, &lo, &hi);
        let b = integral_difference(&ctx, &p, &lo, &hi);
        assert!(BigReal::with_val(300, &a - &b).abs() <= ctx.pow2(-300 + 8));
    }

    #[test]
    fn remainder_values() {
        let ctx = Context::new(200).unwrap();
        let b = remainder_bound(&ctx, &ctx.one(), 200, &ctx.one());
        assert_eq!(crate::hpnum::to_sci(&b, 4), "6.308e-378");
        assert!(remainder_bound(&ctx, &ctx.zero(), 200, &ctx.one()).is_zero());
        assert_eq!(remainder_bound(&ctx, &ctx.one(), 1, &ctx.int(2)), 2);
    }
}
