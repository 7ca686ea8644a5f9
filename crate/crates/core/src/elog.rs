//! Elliptic logarithms via the `r/t` iteration.
//!
//! Starting from `r = √((x0 - e3)/(x0 - e2))` and `t = -y0 / (2 r (x0 - e2))`
//! (so that `t^2 = x0 - e1`), each AGM step updates
//! `r <- √(a_n (r + 1) / (b_{n-1} r + a_{n-1}))` and `t <- r t`; in the limit
//! `z = arctan(M / t) / M` with `M` the AGM limit.

use rug::Float;

use crate::agm::{goodness, AgmPair, Goodness};
use crate::curve::{CurveRoots, Point};
use crate::error::{Error, Result};
use crate::lattice::Coordinates;
use crate::numerics::{principal_arctan, principal_sqrt, CNum, PrecisionContext};
use crate::periods::{
    period_basis, periods_real_negative_disc, periods_real_positive_disc, PeriodTriple,
};

#[derive(Clone, Debug, PartialEq)]
pub struct ElogResult {
    pub z: CNum,
    /// The AGM limit `M = π/w1`.
    pub m: CNum,
    /// Coordinates of `z` in the basis of the period triple's lattice.
    pub coords: Coordinates,
    pub iterations: usize,
    pub tie_broken: bool,
}

/// Iteration state: `r_n`, `t_n` and the step index.
#[derive(Clone, Debug)]
struct ElogState {
    r: CNum,
    t: CNum,
    step: usize,
}

fn point_coords(p: &Point, ctx: &PrecisionContext) -> Result<(CNum, CNum)> {
    match p {
        Point::Infinity => Err(Error::InfinityInput),
        Point::Affine { x, y } => {
            let (x, y) = (ctx.adopt(x), ctx.adopt(y));
            let scale = Float::with_val(ctx.work_bits, x.abs().max(&Float::with_val(ctx.work_bits, 1)));
            if y.abs() <= scale * ctx.eps_tie() {
                return Err(Error::TwoTorsionInput);
            }
            Ok((x, y))
        }
    }
}

/// Subtract the multiple of `w1` putting `Re(z/w1)` in `(-1/2, 1/2]`.
fn reduce_strip(z: &CNum, w1: &CNum) -> CNum {
    let p = z.prec();
    let u = Float::with_val(p, (z / w1).re());
    let k = Float::with_val(p, &u - Float::with_val(p, 0.5)).ceil();
    if k.is_zero() {
        z.clone()
    } else {
        z - &w1.scale(&k)
    }
}

fn finish(z: CNum, m: CNum, triple: &PeriodTriple, iterations: usize, tie: bool) -> ElogResult {
    let z = reduce_strip(&z, &triple.w1);
    let coords = triple.lattice.coordinates(&z);
    ElogResult {
        z,
        m,
        coords,
        iterations,
        tie_broken: tie,
    }
}

/// The good square root of `ab` next to `a1`, with the `Im(a1/b1) > 0`
/// convention on ties.
fn good_root(a1: &CNum, prod: &CNum, ctx: &PrecisionContext) -> (CNum, bool) {
    let g = principal_sqrt(prod);
    match goodness(a1, &g, ctx) {
        Goodness::Good => (g, false),
        Goodness::Bad => (-g, false),
        Goodness::Tie => {
            if a1.cross(&g) < 0 {
                (g, true)
            } else {
                (-g, true)
            }
        }
    }
}

fn below(x: &Float, ctx: &PrecisionContext) -> bool {
    *x <= *ctx.eps_tie()
}

/// Complex elliptic logarithm of an affine point of order other than 2.
pub fn elog(r: &CurveRoots, p: &Point, ctx: &PrecisionContext) -> Result<ElogResult> {
    let triple = period_basis(r, ctx)?;
    elog_with_periods(&triple, p, ctx)
}

/// As [`elog`], reusing a period triple from [`period_basis`].
pub fn elog_with_periods(
    triple: &PeriodTriple,
    p: &Point,
    ctx: &PrecisionContext,
) -> Result<ElogResult> {
    let (x0, y0) = point_coords(p, ctx)?;
    let sel = triple
        .selection
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("period triple has no sign selection".into()))?;
    let roots = &sel.permuted_roots;
    let d2 = &x0 - &roots.e2;
    let d3 = &x0 - &roots.e3;
    if d2.is_zero() {
        return Err(Error::TwoTorsionInput);
    }
    let r0 = principal_sqrt(&(&d3 / &d2));
    if r0.is_zero() {
        return Err(Error::TwoTorsionInput);
    }
    let t0 = -(&y0 / &(&r0 * &d2).scale_i64(2));
    let mut st = ElogState {
        r: r0,
        t: t0,
        step: 0,
    };
    let mut pair = AgmPair::new(sel.a.clone(), sel.b.clone(), ctx)?;
    let mut tie = false;
    let cap = ctx.iteration_cap();
    let one = ctx.one();
    let mut extra = false;
    loop {
        if st.step >= cap {
            return Err(Error::NonConvergence {
                what: "elliptic logarithm",
                iterations: st.step,
            });
        }
        let a1 = (&pair.a + &pair.b).shr(1);
        let (b1, t) = good_root(&a1, &(&pair.a * &pair.b), ctx);
        tie |= t;
        let den = &(&pair.b * &st.r) + &pair.a;
        if den.is_zero() {
            return Err(Error::Internal("vanishing denominator in r update".into()));
        }
        let r = principal_sqrt(&(&(&a1 * &(&st.r + &one)) / &den));
        st.step += 1;
        if st.step >= 2 && *r.re() <= 0 {
            return Err(Error::Internal(format!(
                "Re(r) = 0 at step {}",
                st.step
            )));
        }
        st.t = &r * &st.t;
        st.r = r;
        pair = AgmPair { a: a1, b: b1 };
        if extra {
            break;
        }
        let ab = (&(&pair.a / &pair.b) - &one).abs();
        let rr = (&st.r - &one).abs();
        if below(&ab, ctx) && below(&rr, ctx) {
            extra = true;
        }
    }
    let m = pair.a;
    let z = &principal_arctan(&(&m / &st.t), ctx)? / &m;
    Ok(finish(z, m, triple, st.step, tie))
}

/// Elliptic logarithm of any point; the point at infinity maps to 0 and
/// 2-torsion points to their half-periods.
pub fn elog_any(r: &CurveRoots, p: &Point, ctx: &PrecisionContext) -> Result<ElogResult> {
    let triple = period_basis(r, ctx)?;
    match p {
        Point::Infinity => Ok(finish(ctx.zero(), pi_over_w1(&triple, ctx), &triple, 0, false)),
        Point::Affine { x, .. } => match elog_with_periods(&triple, p, ctx) {
            Err(Error::TwoTorsionInput) => {
                let idx = nearest_root(r, x);
                elog_2torsion(r, idx, ctx)
            }
            other => other,
        },
    }
}

fn pi_over_w1(t: &PeriodTriple, ctx: &PrecisionContext) -> CNum {
    ctx.lift(&ctx.pi()) / t.w1.clone()
}

fn nearest_root(r: &CurveRoots, x: &CNum) -> usize {
    let d = [r.e1.dist(x), r.e2.dist(x), r.e3.dist(x)];
    let mut best = 0;
    for i in 1..3 {
        if d[i] < d[best] {
            best = i;
        }
    }
    best
}

/// `z = π / (2 M(√(e - e'), √(e - e'')))` for the chosen root `e`, with the
/// good sign; `℘(z) = e`.
pub fn elog_2torsion(r: &CurveRoots, which_root: usize, ctx: &PrecisionContext) -> Result<ElogResult> {
    let [e1, e2, e3] = r.as_array();
    let (f1, f2, f3) = match which_root {
        0 => (e1, e2, e3),
        1 => (e2, e1, e3),
        2 => (e3, e1, e2),
        _ => return Err(Error::InvalidInput(format!("root index {which_root} out of range"))),
    };
    let triple = period_basis(r, ctx)?;
    let a = principal_sqrt(&(&ctx.adopt(f1) - &ctx.adopt(f3)));
    let b0 = principal_sqrt(&(&ctx.adopt(f1) - &ctx.adopt(f2)));
    let b = match goodness(&a, &b0, ctx) {
        Goodness::Good => b0,
        Goodness::Bad => -b0,
        Goodness::Tie => {
            if a.cross(&b0) < 0 {
                b0
            } else {
                -b0
            }
        }
    };
    let pair = AgmPair::new(a, b, ctx).map_err(|_| Error::DegenerateCurve("repeated roots".into()))?;
    let res = crate::agm::agm_optimal(&pair, ctx)?;
    let z = (ctx.lift(&ctx.pi()) / res.m.clone()).shr(1);
    Ok(finish(z, res.m, &triple, res.iterations, res.tie_broken))
}

fn real_component_point(p: &Point, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let (x, y) = point_coords(p, ctx)?;
    let scale = Float::with_val(ctx.work_bits, x.abs().max(&y.abs()).max(&Float::with_val(ctx.work_bits, 1)));
    let lim = scale * ctx.eps_tie();
    if Float::with_val(ctx.work_bits, x.im().abs_ref()) > lim
        || Float::with_val(ctx.work_bits, y.im().abs_ref()) > lim
    {
        return Err(Error::InvalidInput("point is not real".into()));
    }
    let (xr, _) = x.into_parts();
    let (yr, _) = y.into_parts();
    Ok((xr, yr))
}

/// Real iteration from `(a, b, r, t)`, all positive except `t`; returns
/// `(atan(M/t)/M, M, steps)`.
fn real_iteration(
    mut a: Float,
    mut b: Float,
    mut r: Float,
    mut t: Float,
    mut steps: usize,
    ctx: &PrecisionContext,
) -> Result<(Float, Float, usize)> {
    let p = ctx.work_bits;
    let cap = ctx.iteration_cap();
    let mut extra = false;
    loop {
        if steps >= cap {
            return Err(Error::NonConvergence {
                what: "elliptic logarithm",
                iterations: steps,
            });
        }
        let a1 = Float::with_val(p, &a + &b) >> 1u32;
        let b1 = Float::with_val(p, &a * &b).sqrt();
        let num = Float::with_val(p, &r + 1u32) * &a1;
        let den = Float::with_val(p, &b * &r) + &a;
        r = (num / den).sqrt();
        t *= &r;
        a = a1;
        b = b1;
        steps += 1;
        if extra {
            break;
        }
        let ab = Float::with_val(p, &a / &b) - 1u32;
        let rr = Float::with_val(p, &r - 1u32);
        if below(&ab.abs(), ctx) && below(&rr.abs(), ctx) {
            extra = true;
        }
    }
    let z = Float::with_val(p, &a / &t).atan() / &a;
    Ok((z, a, steps))
}

/// Real curve with three real roots `e1 > e2 > e3` and a real point.
///
/// On the identity component (`x0 > e1`) the standard iteration runs over
/// the positive reals. On the egg (`e3 < x0 < e2`) it runs on
/// `P' = P + (e3, 0)`, starting from `r' = a0/√(e1 - x0)`,
/// `t' = r' y0 / (2 (x0 - e3))`, and the result is shifted by `w2/2`.
pub fn elog_real_posdisc(
    e1: &Float,
    e2: &Float,
    e3: &Float,
    p: &Point,
    ctx: &PrecisionContext,
) -> Result<ElogResult> {
    let prec = ctx.work_bits;
    let triple = periods_real_positive_disc(e1, e2, e3, ctx)?;
    let (x0, y0) = real_component_point(p, ctx)?;
    let a0 = Float::with_val(prec, e1 - e3).sqrt();
    let b0 = Float::with_val(prec, e1 - e2).sqrt();
    if x0 > *e1 {
        let d2 = Float::with_val(prec, &x0 - e2);
        let d3 = Float::with_val(prec, &x0 - e3);
        let r = Float::with_val(prec, &d3 / &d2).sqrt();
        let t = -Float::with_val(prec, &y0 / Float::with_val(prec, &r * &d2)) >> 1u32;
        let (z, m, steps) = real_iteration(a0, b0, r, t, 0, ctx)?;
        Ok(finish(ctx.lift(&z), ctx.lift(&m), &triple, steps, false))
    } else if x0 > *e3 && x0 < *e2 {
        let r = Float::with_val(prec, &a0 / Float::with_val(prec, e1 - &x0).sqrt());
        let t = Float::with_val(prec, &r * &y0) / Float::with_val(prec, &x0 - e3) >> 1u32;
        let (xp, m, steps) = real_iteration(a0, b0, r, t, 0, ctx)?;
        let z = &ctx.lift(&xp) + &triple.w2.shr(1);
        Ok(finish(z, ctx.lift(&m), &triple, steps, false))
    } else {
        Err(Error::Component(format!(
            "x0 = {} lies where the cubic is negative or at a root",
            x0.to_f64()
        )))
    }
}

/// Real curve with one real root `e1` and `e3 = conj(e2)`, `Im(e2) > 0`.
///
/// With `√(x0 - e3) = u + iv`: `r1 = (u + iv)/(u - iv)`,
/// `t1 = -y0 / (2(u^2 + v^2))`; after the first step `a1 = x`, `b1 = R`,
/// `r2 = √(ux / (ux + vy))` and the rest is real.
pub fn elog_real_negdisc(
    e1: &Float,
    e2: &CNum,
    p: &Point,
    ctx: &PrecisionContext,
) -> Result<ElogResult> {
    let prec = ctx.work_bits;
    let triple = periods_real_negative_disc(e1, e2, ctx)?;
    let (x0, y0) = real_component_point(p, ctx)?;
    let e3 = e2.conj();
    let a0 = principal_sqrt(&(&ctx.lift(e1) - &e3));
    let x = Float::with_val(prec, a0.re());
    let y = Float::with_val(prec, a0.im());
    let big_r = a0.abs();
    let s = principal_sqrt(&(&ctx.lift(&x0) - &e3));
    let (u, v) = s.into_parts();
    let norm = Float::with_val(prec, u.square_ref()) + Float::with_val(prec, v.square_ref());
    let t1 = -Float::with_val(prec, &y0 / norm) >> 1u32;
    let ux = Float::with_val(prec, &u * &x);
    let vy = Float::with_val(prec, &v * &y);
    let r2 = Float::with_val(prec, &ux / Float::with_val(prec, &ux + &vy)).sqrt();
    let t2 = Float::with_val(prec, &r2 * &t1);
    let (z, m, steps) = real_iteration(x, big_r, r2, t2, 1, ctx)?;
    Ok(finish(ctx.lift(&z), ctx.lift(&m), &triple, steps, false))
}
