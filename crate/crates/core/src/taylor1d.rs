//! Truncated Taylor polynomials in one variable.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::Assign;

use crate::hpnum::{self, BigReal, Context};
use crate::{Error, Result};

/// `a_0 + a_1 (x - x0) + … + a_{n-1} (x - x0)^(n-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPoly1D {
    center: BigReal,
    coeffs: Vec<BigReal>,
}

impl TaylorPoly1D {
    pub fn new(center: BigReal, coeffs: Vec<BigReal>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidProblem("a polynomial needs at least one coefficient".into()));
        }
        Ok(TaylorPoly1D { center, coeffs })
    }

    /// Expansion about zero.
    pub fn at_origin(ctx: &Context, coeffs: Vec<BigReal>) -> Result<Self> {
        Self::new(ctx.zero(), coeffs)
    }

    pub fn center(&self) -> &BigReal {
        &self.center
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner's rule in `x - x0`.
    pub fn evaluate(&self, ctx: &Context, x: &BigReal) -> BigReal {
        let mut t = ctx.adopt(x);
        t -= &self.center;
        let mut acc = ctx.zero();
        for a in self.coeffs.iter().rev() {
            acc *= &t;
            acc += a;
        }
        acc
    }

    pub fn evaluate_many(&self, ctx: &Context, xs: &[BigReal]) -> Vec<BigReal> {
        xs.iter().map(|x| self.evaluate(ctx, x)).collect()
    }

    /// Coefficients of the `k`-th derivative: `b_j = a_{j+k} (j+k)!/j!`.
    /// Differentiating past the degree yields the zero polynomial.
    pub fn differentiate(&self, ctx: &Context, k: usize) -> TaylorPoly1D {
        if k > self.degree() {
            return TaylorPoly1D { center: self.center.clone(), coeffs: vec![ctx.zero()] };
        }
        let coeffs = self.coeffs[k..]
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let mut b = ctx.adopt(a);
                for m in 1..=k {
                    b *= (j + m) as u64;
                }
                b
            })
            .collect();
        TaylorPoly1D { center: self.center.clone(), coeffs }
    }

    /// Coefficients `{c, a_0, a_1/2, …, a_{n-1}/n}` of the antiderivative whose
    /// value at the center is `c`.
    pub fn antiderivative(&self, ctx: &Context, constant: &BigReal) -> TaylorPoly1D {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ctx.adopt(constant));
        for (j, a) in self.coeffs.iter().enumerate() {
            let mut b = ctx.adopt(a);
            b /= (j + 1) as u64;
            coeffs.push(b);
        }
        TaylorPoly1D { center: self.center.clone(), coeffs }
    }

    /// `x -> -x` about the center: flips the sign of odd coefficients.
    pub fn reflect(&self) -> TaylorPoly1D {
        let coeffs =
            self.coeffs.iter().enumerate().map(|(j, a)| if j % 2 == 1 { -a.clone() } else { a.clone() }).collect();
        TaylorPoly1D { center: self.center.clone(), coeffs }
    }

    pub fn radius_of_convergence(&self, ctx: &Context, tail_window: usize) -> Result<RadiusEstimate> {
        radius_of_convergence(ctx, self, tail_window)
    }
}

/// Root-test estimate of the radius of convergence from a finite coefficient
/// list.
#[derive(Debug, Clone)]
pub struct RadiusEstimate {
    /// `(n, |a_n|^(1/(n+1)))` for every `n ≥ 1` whose coefficient clears the
    /// underflow floor. The root is taken over the term count `n + 1`.
    pub inv_r_sequence: Vec<(usize, BigReal)>,
    /// The last `w` entries of `inv_r_sequence`.
    pub tail: Vec<(usize, BigReal)>,
    /// `1 / max` of the last two sequence values; infinite when that root
    /// underflows.
    pub r_root: BigReal,
    /// `1 / |a_{n+1}/a_n|` at the last consecutive nonzero pair. Diagnostic
    /// only; infinite when no such pair exists.
    pub r_ratio: BigReal,
    /// `max - min` of the tail values, a rough convergence indicator.
    pub tail_spread: BigReal,
}

/// Root test `r = 1 / limsup |a_n|^(1/(n+1))` over the coefficients that are
/// not structural zeros (`|a_n| < 10^(-10 p)`).
///
/// The lim sup is read over the last two qualifying terms. A series of one
/// parity, like `sin`, carries rounding residue in the other parity, and the
/// larger of the final pair is the one that belongs to the series.
pub fn radius_of_convergence(ctx: &Context, poly: &TaylorPoly1D, tail_window: usize) -> Result<RadiusEstimate> {
    let floor = ctx.underflow_floor();
    let qualifies = |a: &BigReal| a.cmp_abs(&floor) != Some(Ordering::Less) && !a.is_zero();
    if !poly.coeffs.iter().any(qualifies) {
        return Err(Error::UndefinedRadius);
    }

    let mut inv_r_sequence = Vec::new();
    for (n, a) in poly.coeffs.iter().enumerate().skip(1) {
        if !qualifies(a) {
            continue;
        }
        let mut root = ctx.adopt(a);
        root.abs_mut();
        let root = BigReal::with_val(ctx.bits(), root.pow(ctx.ratio(1, n as i64 + 1)));
        inv_r_sequence.push((n, root));
    }

    let last_pair = &inv_r_sequence[inv_r_sequence.len().saturating_sub(2)..];
    let sup = last_pair.iter().map(|(_, v)| v).max_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    let r_root = match sup {
        Some(v) if !v.is_zero() => {
            let mut r = ctx.one();
            r /= v;
            r
        }
        _ => ctx.infinity(),
    };

    let mut r_ratio = ctx.infinity();
    for n in (0..poly.coeffs.len().saturating_sub(1)).rev() {
        let (a, b) = (&poly.coeffs[n], &poly.coeffs[n + 1]);
        if qualifies(a) && qualifies(b) {
            r_ratio.assign(a / b);
            r_ratio.abs_mut();
            break;
        }
    }

    let start = inv_r_sequence.len().saturating_sub(tail_window.max(1));
    let tail = inv_r_sequence[start..].to_vec();
    let mut lo = ctx.infinity();
    let mut hi = ctx.zero();
    for (_, v) in &tail {
        if *v < lo {
            lo.assign(v);
        }
        if *v > hi {
            hi.assign(v);
        }
    }
    let tail_spread = if tail.is_empty() { ctx.zero() } else { BigReal::with_val(ctx.bits(), &hi - &lo) };

    Ok(RadiusEstimate { inv_r_sequence, tail, r_root, r_ratio, tail_spread })
}

/// CSV form: a `center,degree` header, then one coefficient per line.
pub fn to_csv(poly: &TaylorPoly1D) -> String {
    let mut out = format!("center,degree\n{},{}\n", hpnum::to_decimal(&poly.center), poly.degree());
    for a in &poly.coeffs {
        out.push_str(&hpnum::to_decimal(a));
        out.push('\n');
    }
    out
}

pub fn from_csv(ctx: &Context, text: &str) -> Result<TaylorPoly1D> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let csv_err = |line: usize, message: &str| Error::Csv { line: line + 1, message: message.into() };
    match lines.next() {
        Some((_, l)) if l.trim() == "center,degree" => {}
        Some((i, _)) => return Err(csv_err(i, "expected header `center,degree`")),
        None => return Err(csv_err(0, "empty polynomial file")),
    }
    let (i, meta) = lines.next().ok_or_else(|| csv_err(1, "missing center,degree row"))?;
    let (center, degree) = meta.split_once(',').ok_or_else(|| csv_err(i, "expected two fields"))?;
    let center = ctx.parse(center).map_err(|e| csv_err(i, &e.to_string()))?;
    let degree: usize = degree.trim().parse().map_err(|_| csv_err(i, "degree is not an integer"))?;
    let coeffs =
        lines.map(|(i, l)| ctx.parse(l).map_err(|e| csv_err(i, &e.to_string()))).collect::<Result<Vec<_>>>()?;
    if coeffs.len() != degree + 1 {
        return Err(csv_err(i, &format!("degree {degree} but {} coefficients", coeffs.len())));
    }
    TaylorPoly1D::new(center, coeffs)
}
