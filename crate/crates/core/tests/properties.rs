use hap_taylor::basis2d::{self, MonomialBasis2D, PlateLoad, TaylorPoly2D};
use hap_taylor::calculus::definite_integral;
use hap_taylor::fit1d::{fit, SampleSet1D};
use hap_taylor::hpnum::{max_abs, max_abs_diff, to_decimal};
use hap_taylor::odebvp::{beam_problem, solve, BoundaryCondition};
use hap_taylor::sysid::identify;
use hap_taylor::vandermonde::{inverse_closed_form, NodeSet};
use hap_taylor::{BigReal, Context, TaylorPoly1D};
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};

const BITS: u32 = 256;

fn ctx() -> Context {
    Context::new(BITS).unwrap()
}

fn ulps(k: i32) -> Float {
    Float::with_val(BITS, 2).pow(-(BITS as i32) + k)
}

fn poly(ctx: &Context, coeffs: &[i64]) -> TaylorPoly1D {
    TaylorPoly1D::at_origin(ctx, coeffs.iter().map(|&c| ctx.ratio(c, 7)).collect()).unwrap()
}

fn rational_inverse(nodes: &[Rational]) -> Vec<Vec<Rational>> {
    let n = nodes.len();
    let mut a: Vec<Vec<Rational>> = nodes
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut row: Vec<Rational> = (0..n).map(|j| x.clone().pow(j as i32)).collect();
            row.extend((0..n).map(|j| Rational::from(u32::from(i == j))));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| a[i][k] != 0).unwrap();
        a.swap(k, p);
        let inv = Rational::from(1) / a[k][k].clone();
        for v in a[k].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != k && row[k] != 0 {
                let f = row[k].clone();
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v -= Rational::from(&f * pv);
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_form_inverse_matches_rational_oracle(raw in prop::collection::btree_set(-40i64..40, 2..=12)) {
        let c = ctx();
        let nodes: Vec<Rational> = raw.iter().map(|&k| Rational::from((k, 8))).collect();
        let exact = rational_inverse(&nodes);
        let set = NodeSet::new(nodes.iter().map(|r| Float::with_val(BITS, r)).collect()).unwrap();
        let closed = inverse_closed_form(&c, &set);
        let scale = exact.iter().flatten().map(|r| Float::with_val(BITS, r).abs()).fold(Float::new(BITS), |m, e| if e > m { e } else { m });
        for (i, row) in exact.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                let d = Float::with_val(BITS, &closed[(i, j)] - Float::with_val(BITS, e)).abs();
                prop_assert!(d <= ulps(16) * &scale);
            }
        }
    }

    #[test]
    fn fit_reproduces_low_degree_polynomials(coeffs in prop::collection::vec(-20i64..20, 1..=7)) {
        let c = ctx();
        let p = poly(&c, &coeffs);
        let nodes = NodeSet::symmetric_grid(&c, &c.one(), coeffs.len().max(2)).unwrap();
        let samples = SampleSet1D::from_fn(nodes, |x| p.evaluate(&c, x));
        let back = fit(&c, &samples).unwrap();
        let scale = max_abs(&c, p.coeffs()).max(&c.one()).clone();
        let gap = max_abs_diff(&c, &back.coeffs()[..coeffs.len()], p.coeffs());
        prop_assert!(gap <= ulps(16) * scale);
    }

    #[test]
    fn derivative_inverts_antiderivative(coeffs in prop::collection::vec(-50i64..50, 1..30), k in -9i64..9) {
        let c = ctx();
        let p = poly(&c, &coeffs);
        let back = p.antiderivative(&c, &c.int(k)).differentiate(&c, 1);
        let scale = max_abs(&c, p.coeffs()).max(&c.one()).clone();
        prop_assert!(max_abs_diff(&c, back.coeffs(), p.coeffs()) <= ulps(8) * scale);
    }

    #[test]
    fn integrals_are_additive(coeffs in prop::collection::vec(-50i64..50, 1..20), a in -8i64..8, b in -8i64..8, d in -8i64..8) {
        let c = ctx();
        let p = poly(&c, &coeffs);
        let (a, b, d) = (c.ratio(a, 8), c.ratio(b, 8), c.ratio(d, 8));
        let left = definite_integral(&c, &p, &a, &b) + definite_integral(&c, &p, &b, &d);
        let whole = definite_integral(&c, &p, &a, &d);
        let scale = max_abs(&c, p.coeffs()).max(&c.one()).clone() * 20u32;
        prop_assert!(Float::with_val(BITS, &left - &whole).abs() <= ulps(12) * scale);
    }

    #[test]
    fn identification_is_scale_covariant(b in 1i64..9, c1 in -5i64..5, scale in 2i64..9) {
        let c = ctx();
        let nodes = NodeSet::uniform(&c, &c.zero(), &c.one(), 15).unwrap();
        let s = |t: &BigReal| Float::with_val(BITS, t * t) * b + Float::with_val(BITS, t * c1);
        let one = identify(&c, &SampleSet1D::from_fn(nodes.clone(), s)).unwrap().weights_b;
        let many = identify(&c, &SampleSet1D::from_fn(nodes, |t| s(t) * scale)).unwrap().weights_b;
        for (x, y) in one.iter().zip(&many) {
            let d = Float::with_val(BITS, x - Float::with_val(BITS, y * scale)).abs();
            prop_assert!(d <= Float::with_val(BITS, 2).pow(-(BITS as i32) / 2));
        }
    }

    #[test]
    fn decimal_strings_round_trip(num in any::<i64>(), den in 1i64..1_000_000, exp in -400i32..400) {
        let c = ctx();
        let x = c.ratio(num, den) * c.pow10(exp);
        prop_assert_eq!(c.parse(&to_decimal(&x)).unwrap(), x);
    }

    #[test]
    fn mixed_partials_compose(coeffs in prop::collection::vec(-9i64..9, 15), k in 0usize..3, l in 0usize..3, k2 in 0usize..3, l2 in 0usize..3) {
        let c = ctx();
        let basis = MonomialBasis2D::graded(15).unwrap();
        let w = TaylorPoly2D::new(basis, coeffs.iter().map(|&v| c.int(v)).collect()).unwrap();
        let (x, y) = (c.ratio(3, 10), c.ratio(-7, 10));
        let twice = w.partial(&c, k, l).evaluate_partial(&c, &x, &y, k2, l2);
        let once = w.evaluate_partial(&c, &x, &y, k + k2, l + l2);
        prop_assert!(Float::with_val(BITS, &twice - &once).abs() <= ulps(20) * 1000u32);
    }
}

#[test]
fn geometric_series_has_unit_radius() {
    let c = ctx();
    for n in [10, 40, 120] {
        let p = TaylorPoly1D::at_origin(&c, vec![c.one(); n]).unwrap();
        let r = p.radius_of_convergence(&c, 10).unwrap().r_root;
        assert!(Float::with_val(BITS, &r - 1u32).abs() <= ulps(8));
    }
}

#[test]
fn zero_load_gives_zero_plate() {
    let c = ctx();
    for m in [4, 6, 8] {
        let problem = basis2d::reference_slab(&c, m, &c.ratio(1, 10), &PlateLoad::Uniform(c.zero()), &c.one()).unwrap();
        let w = basis2d::solve_plate(&c, &problem).unwrap().deflection;
        assert!(w.coeffs().iter().all(|a| a.is_zero()));
    }
}

#[test]
fn beam_solution_is_linear_in_the_load() {
    let c = ctx();
    let length = c.one();
    let bcs = || {
        vec![
            BoundaryCondition::new(c.zero(), 0, c.zero()),
            BoundaryCondition::new(c.zero(), 1, c.zero()),
            BoundaryCondition::new(c.one(), 0, c.zero()),
            BoundaryCondition::new(c.one(), 1, c.zero()),
        ]
    };
    let solve_for = |q: i64| solve(&c, &beam_problem(&c, &length, 11, &c.int(2), &c.int(q), bcs()).unwrap()).unwrap();
    let (a, b, ab) = (solve_for(3), solve_for(-5), solve_for(-2));
    let sum: Vec<BigReal> = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| Float::with_val(BITS, x + y)).collect();
    assert!(max_abs_diff(&c, &sum, ab.coeffs()) <= ulps(24));
    // q x²(1-x)²/(24 EI) solves the clamped beam under constant q.
    let q = c.int(3);
    let expect = [0, 0, 1, -2, 1].map(|k| Float::with_val(BITS, &q * k) / 48u32);
    assert!(max_abs_diff(&c, &a.coeffs()[..5], &expect) <= ulps(24));
}
