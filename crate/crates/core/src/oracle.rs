//! Verification machinery that does not go through the AGM: `℘` and `℘'`
//! of a lattice, their rank-one limits, and the group law on
//! `Y^2 = 4X^3 - g2 X - g3`.

use rug::Float;

use crate::curve::{CurveInvariants, Point};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, ReduceMode};
use crate::numerics::{exp, sin_cos, CNum, PrecisionContext};

/// `(℘(z), ℘'(z))`
#[derive(Clone, Debug, PartialEq)]
pub struct WpValue {
    pub wp: CNum,
    pub wp_prime: CNum,
}

/// `(g2, g3)` of the lattice from the Eisenstein series
/// `E4 = 1 + 240 Σ σ3(n) q^n`, `E6 = 1 - 504 Σ σ5(n) q^n` at `q = e^{2πiτ}`,
/// summed in Lambert form `Σ d^k q^d / (1 - q^d)`.
pub fn lattice_invariants(l: &Lattice, ctx: &PrecisionContext) -> (CNum, CNum) {
    let red = l.reduce_basis(ctx);
    let p = ctx.work_bits;
    let pi = ctx.pi();
    let tau = red.tau();
    let two_pi_i = ctx.lift(&Float::with_val(p, &pi * 2u32)).mul_i();
    let q = exp(&(&two_pi_i * &tau));
    let one = ctx.one();
    let mut s3 = ctx.zero();
    let mut s5 = ctx.zero();
    let mut qd = q.clone();
    let floor = Float::with_val(p, 1) >> (p as i32 + 8);
    let mut d: i64 = 1;
    loop {
        let lam = &qd / &(&one - &qd);
        let d3 = d * d * d;
        let t3 = lam.scale_i64(d3);
        let t5 = t3.scale_i64(d * d);
        let size = t5.abs();
        s3 = &s3 + &t3;
        s5 = &s5 + &t5;
        if size <= floor || d > 100_000 {
            break;
        }
        d += 1;
        qd = &qd * &q;
    }
    let e4 = &one + &s3.scale_i64(240);
    let e6 = &one - &s5.scale_i64(504);
    // (2π/w1)^2
    let k = ctx.lift(&Float::with_val(p, &pi * 2u32)) / red.w1.clone();
    let k2 = k.square();
    let k4 = k2.square();
    let k6 = &k4 * &k2;
    let g2 = (&k4 * &e4).scale(&(Float::with_val(p, 1) / 12u32));
    let g3 = (&k6 * &e6).scale(&(Float::with_val(p, 1) / 216u32));
    (g2, g3)
}

/// Laurent coefficients `c_2, c_3, ...` of `℘(w) - 1/w^2 = Σ c_k w^{2k-2}`.
fn laurent_coeffs(g2: &CNum, g3: &CNum, n: usize) -> Vec<CNum> {
    let p = g2.prec();
    // index k holds c_k; 0 and 1 unused
    let mut c: Vec<CNum> = vec![CNum::zero(p); n.max(4) + 1];
    c[2] = g2.scale(&(Float::with_val(p, 1) / 20u32));
    c[3] = g3.scale(&(Float::with_val(p, 1) / 28u32));
    for k in 4..=n {
        let mut s = CNum::zero(p);
        for m in 2..=k - 2 {
            s = &s + &(&c[m] * &c[k - m]);
        }
        let den = ((2 * k + 1) * (k - 3)) as u32;
        c[k] = s.scale(&(Float::with_val(p, 3) / den));
    }
    c
}

fn series(w: &CNum, g2: &CNum, g3: &CNum, ctx: &PrecisionContext) -> WpValue {
    let p = ctx.work_bits;
    let w2 = w.square();
    let inv_w = w.recip();
    let inv_w2 = inv_w.square();
    let mut wp = inv_w2.clone();
    let mut wpp = (&inv_w2 * &inv_w).scale_i64(-2);
    let floor = Float::with_val(p, 1) >> p as i32;
    // |w| <= λ_min/8 bounds the ratio of consecutive terms by about 1/64;
    // coefficients are grown in blocks so the recursion is not redone.
    let mut n = 16usize;
    let mut c = laurent_coeffs(g2, g3, n);
    let mut pow = w2.clone(); // w^{2k-2} for k = 2
    let mut k = 2usize;
    let mut small = 0;
    loop {
        if k > n {
            n *= 2;
            c = laurent_coeffs(g2, g3, n);
        }
        let term = &c[k] * &pow;
        // derivative term (2k - 2) c_k w^{2k-3}
        let dterm = (&term * &inv_w).scale_i64(2 * k as i64 - 2);
        wp = &wp + &term;
        wpp = &wpp + &dterm;
        let lim = Float::with_val(p, wp.abs() * &floor);
        if term.abs() <= lim {
            small += 1;
            if small > 4 {
                break;
            }
        } else {
            small = 0;
        }
        pow = &pow * &w2;
        k += 1;
        if k > 100_000 {
            break;
        }
    }
    WpValue {
        wp,
        wp_prime: wpp,
    }
}

fn double(v: &WpValue, g2: &CNum) -> Result<WpValue> {
    if v.wp_prime.is_zero() {
        return Err(Error::Pole("doubling a 2-torsion point".into()));
    }
    let x = &v.wp;
    let y = &v.wp_prime;
    let lam = &(&x.square().scale_i64(12) - g2) / &y.scale_i64(2);
    let x2 = &lam.square().shr(2) - &x.scale_i64(2);
    let y2 = -(y + &(&lam * &(&x2 - x)));
    Ok(WpValue { wp: x2, wp_prime: y2 })
}

/// `℘_Λ(z)` and `℘'_Λ(z)`: reduce `z`, halve until `|z| <= λ_min/8`, sum the
/// Laurent series, then double back.
pub fn wp(z: &CNum, l: &Lattice, ctx: &PrecisionContext) -> Result<WpValue> {
    let (g2, g3) = lattice_invariants(l, ctx);
    wp_with_invariants(z, l, &g2, &g3, ctx)
}

/// As [`wp`], with precomputed lattice invariants.
pub fn wp_with_invariants(
    z: &CNum,
    l: &Lattice,
    g2: &CNum,
    g3: &CNum,
    ctx: &PrecisionContext,
) -> Result<WpValue> {
    let red = l.reduce_basis(ctx);
    let lmin = red.w1.abs();
    let z0 = red.reduce_mod(&ctx.adopt(z), ReduceMode::Centered);
    let tol = Float::with_val(ctx.work_bits, &lmin * ctx.member_tol());
    if z0.abs() <= tol {
        return Err(Error::Pole("z is a lattice point".into()));
    }
    let bound = Float::with_val(ctx.work_bits, &lmin >> 3u32);
    let mut k = 0i32;
    let mut w = z0;
    while w.abs() > bound {
        w = w.shr(1);
        k += 1;
    }
    let mut v = series(&w, g2, g3, ctx);
    for _ in 0..k {
        v = double(&v, g2)?;
    }
    Ok(v)
}

/// The rank-one limits
/// `℘ = (π/w1)^2 (1/sin^2(zπ/w1) - 1/3)`,
/// `℘' = -2 (π/w1)^3 cos(zπ/w1) / sin^3(zπ/w1)`.
pub fn wp_limit(z: &CNum, w1: &CNum, ctx: &PrecisionContext) -> Result<WpValue> {
    let k = ctx.lift(&ctx.pi()) / ctx.adopt(w1);
    let arg = &ctx.adopt(z) * &k;
    let (s, c) = sin_cos(&arg);
    let scale = Float::with_val(ctx.work_bits, arg.abs().max(&Float::with_val(ctx.work_bits, 1)));
    if s.abs() <= scale * ctx.member_tol() {
        return Err(Error::Pole("z is a multiple of w1".into()));
    }
    let k2 = k.square();
    let s2 = s.square();
    let third = ctx.lift(&(Float::with_val(ctx.work_bits, 1) / 3u32));
    let wp = &k2 * &(&s2.recip() - &third);
    let wpp = (&(&k2 * &k) * &(&c / &(&s2 * &s))).scale_i64(-2);
    Ok(WpValue { wp, wp_prime: wpp })
}

pub fn point_neg(p: &Point) -> Point {
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::Affine {
            x: x.clone(),
            y: -y,
        },
    }
}

/// Chord-and-tangent addition on `Y^2 = 4X^3 - g2 X - g3`.
pub fn point_add(
    p: &Point,
    q: &Point,
    inv: &CurveInvariants,
    ctx: &PrecisionContext,
) -> Result<Point> {
    let tol = ctx.member_tol();
    for pt in [p, q] {
        if !inv.contains(pt, &tol) {
            return Err(Error::OffCurve("summand does not satisfy the curve equation".into()));
        }
    }
    let (xp, yp, xq, yq) = match (p, q) {
        (Point::Infinity, _) => return Ok(q.clone()),
        (_, Point::Infinity) => return Ok(p.clone()),
        (Point::Affine { x: xp, y: yp }, Point::Affine { x: xq, y: yq }) => (xp, yp, xq, yq),
    };
    let scale = Float::with_val(ctx.work_bits, xp.abs().max(&xq.abs()).max(&Float::with_val(ctx.work_bits, 1)));
    let same_x = xp.dist(xq) <= Float::with_val(ctx.work_bits, &scale * &tol);
    let lam = if same_x {
        let yscale = Float::with_val(ctx.work_bits, yp.abs().max(&yq.abs()).max(&Float::with_val(ctx.work_bits, 1)));
        if (yp + yq).abs() <= yscale * &tol {
            return Ok(Point::Infinity);
        }
        &(&xp.square().scale_i64(12) - &inv.g2) / &yp.scale_i64(2)
    } else {
        &(yq - yp) / &(xq - xp)
    };
    let xr = &(&lam.square().shr(2) - xp) - xq;
    let yr = -(yp + &(&lam * &(&xr - xp)));
    Ok(Point::Affine { x: xr, y: yr })
}

/// `n P` by double-and-add; `n` may be negative.
pub fn point_mul(n: i64, p: &Point, inv: &CurveInvariants, ctx: &PrecisionContext) -> Result<Point> {
    let mut base = if n < 0 { point_neg(p) } else { p.clone() };
    let mut k = n.unsigned_abs();
    let mut acc = Point::Infinity;
    while k > 0 {
        if k & 1 == 1 {
            acc = point_add(&acc, &base, inv, ctx)?;
        }
        k >>= 1;
        if k > 0 {
            base = point_add(&base, &base, inv, ctx)?;
        }
    }
    Ok(acc)
}
