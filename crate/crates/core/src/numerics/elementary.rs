//! Principal-branch complex elementary functions at the precision of their
//! arguments.

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{CNum, PrecisionContext};

/// Replace a signed zero by `+0` so branch selection never depends on the
/// sign bit of an exact zero.
fn unsign_zero(x: &Float) -> Float {
    if x.is_zero() {
        Float::new(x.prec())
    } else {
        x.clone()
    }
}

/// Principal square root: `Re(w) >= 0`, and `Im(w) >= 0` when `Re(w) = 0`.
pub fn principal_sqrt(z: &CNum) -> CNum {
    let p = z.prec();
    if z.is_zero() {
        return CNum::zero(p);
    }
    let r = z.abs();
    if *z.re() >= 0 {
        let s = Float::with_val(p, (Float::with_val(p, &r + z.re()) >> 1u32).sqrt_ref());
        let im = Float::with_val(p, z.im() / Float::with_val(p, &s << 1u32));
        CNum::new(s, unsign_zero(&im))
    } else {
        let t = Float::with_val(p, (Float::with_val(p, &r - z.re()) >> 1u32).sqrt_ref());
        let re = Float::with_val(p, z.im().abs_ref()) / Float::with_val(p, &t << 1u32);
        let im = if z.im().is_sign_negative() && !z.im().is_zero() {
            -t
        } else {
            t
        };
        CNum::new(re, im)
    }
}

/// Principal arctangent with `-pi/2 < Re(w) <= pi/2`.
///
/// Evaluated as
/// `Re w = (atan2(x, 1 - y) + atan2(x, 1 + y)) / 2` and
/// `Im w = log1p(4y / ((1 - y)^2 + x^2)) / 4` for `z = x + iy`, which keeps
/// full relative accuracy near the origin and puts both branch cuts on the
/// `+pi/2` side.
pub fn principal_arctan(z: &CNum, ctx: &PrecisionContext) -> Result<CNum> {
    let p = z.prec();
    let i = CNum::from_i64(p, 0, 1);
    let tol = ctx.eps_tie();
    if z.dist(&i) <= *tol || z.dist(&-&i) <= *tol {
        return Err(Error::Pole("arctan is singular at z = ±i".into()));
    }
    let x = unsign_zero(z.re());
    let y = z.im();
    let one_minus_y = Float::with_val(p, 1 - y);
    let one_plus_y = Float::with_val(p, 1 + y);
    let mut re = Float::with_val(p, x.atan2_ref(&one_minus_y));
    re += Float::with_val(p, x.atan2_ref(&one_plus_y));
    re >>= 1u32;

    let mut denom = Float::with_val(p, one_minus_y.square_ref());
    denom += Float::with_val(p, x.square_ref());
    let ratio = Float::with_val(p, Float::with_val(p, y << 2u32) / &denom);
    let mut im = ratio.ln_1p();
    im >>= 2u32;

    // Rounding can push the real part a hair below -pi/2 on the lower cut.
    let half_pi = Float::with_val(p, ctx.pi() >> 1u32);
    if re <= -half_pi.clone() {
        re += ctx.pi();
    }
    Ok(CNum::new(re, unsign_zero(&im)))
}

/// Principal logarithm, `-pi < Im(w) <= pi`.
pub fn principal_log(z: &CNum) -> Result<CNum> {
    if z.is_zero() {
        return Err(Error::Pole("log(0)".into()));
    }
    let p = z.prec();
    let re = Float::with_val(p, z.abs().ln_ref());
    let im = Float::with_val(p, unsign_zero(z.im()).atan2_ref(z.re()));
    Ok(CNum::new(re, im))
}

pub fn exp(z: &CNum) -> CNum {
    let p = z.prec();
    let m = Float::with_val(p, z.re().exp_ref());
    let (s, c) = z.im().clone().sin_cos(Float::new(p));
    CNum::new(m.clone() * c, m * s)
}

/// `(sin z, cos z)`
pub fn sin_cos(z: &CNum) -> (CNum, CNum) {
    let p = z.prec();
    let (s, c) = z.re().clone().sin_cos(Float::new(p));
    let (sh, ch) = z.im().clone().sinh_cosh(Float::new(p));
    let sin = CNum::new(
        Float::with_val(p, &s * &ch),
        Float::with_val(p, &c * &sh),
    );
    let cos = CNum::new(
        Float::with_val(p, &c * &ch),
        Float::with_val(p, -Float::with_val(p, &s * &sh)),
    );
    (sin, cos)
}

/// Positive integer powers by repeated squaring.
pub fn powu(z: &CNum, mut n: u32) -> CNum {
    let p = z.prec();
    let mut acc = CNum::from_i64(p, 1, 0);
    let mut base = z.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = &acc * &base;
        }
        n >>= 1;
        if n > 0 {
            base = base.square();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(40).unwrap()
    }

    fn close(a: &CNum, b: &CNum, tol: f64) -> bool {
        a.dist(b).to_f64() <= tol
    }

    #[test]
    fn sqrt_examples() {
        let ctx = ctx();
        assert_eq!(principal_sqrt(&ctx.cint(4, 0)), ctx.cint(2, 0));
        assert_eq!(principal_sqrt(&ctx.cint(-1, 0)), ctx.cint(0, 1));
        assert_eq!(principal_sqrt(&ctx.cint(0, 2)), ctx.cint(1, 1));
        assert_eq!(principal_sqrt(&ctx.cint(0, -2)), ctx.cint(1, -1));
        assert_eq!(principal_sqrt(&ctx.zero()), ctx.zero());
    }

    #[test]
    fn sqrt_negative_real_with_negative_zero_imag() {
        let ctx = ctx();
        let z = CNum::new(ctx.real(-4.0), -Float::new(ctx.work_bits));
        assert_eq!(principal_sqrt(&z), ctx.cint(0, 2));
    }

    #[test]
    fn arctan_examples() {
        let ctx = ctx();
        assert!(principal_arctan(&ctx.zero(), &ctx).unwrap().is_zero());
        let quarter_pi = ctx.lift(&Float::with_val(ctx.work_bits, ctx.pi() >> 2u32));
        let at1 = principal_arctan(&ctx.one(), &ctx).unwrap();
        assert!(close(&at1, &quarter_pi, 1e-45));

        // i * atanh(1/2); atanh(1/2) = ln(3)/2 = 0.54930614433405484570...
        let w = principal_arctan(&ctx.cnum(0.0, 0.5), &ctx).unwrap();
        assert!(w.re().is_zero());
        let expected = Float::with_val(ctx.work_bits, 3).ln() >> 1u32;
        assert!((w.im().clone() - expected).abs() < 1e-45);
        assert_eq!(
            w.im().to_string_radix(10, Some(20)),
            "5.4930614433405484570e-1"
        );
    }

    #[test]
    fn arctan_poles() {
        let ctx = ctx();
        assert!(matches!(
            principal_arctan(&ctx.i(), &ctx),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            principal_arctan(&-ctx.i(), &ctx),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn arctan_branch_cuts_map_to_plus_half_pi() {
        let ctx = ctx();
        let half_pi = Float::with_val(ctx.work_bits, ctx.pi() >> 1u32);
        for y in [2i64, -2, 5, -7] {
            let w = principal_arctan(&ctx.cint(0, y), &ctx).unwrap();
            assert!((w.re().clone() - &half_pi).abs() < 1e-45, "y = {y}: {w:?}");
        }
    }

    #[test]
    fn arctan_tan_roundtrip() {
        let ctx = ctx();
        for (x, y) in [(0.3, -0.2), (-4.0, 1.5), (1e-30, 2e-31), (10.0, -10.0)] {
            let z = ctx.cnum(x, y);
            let w = principal_arctan(&z, &ctx).unwrap();
            let (s, c) = sin_cos(&w);
            let t = &s / &c;
            let rel = t.dist(&z) / z.abs();
            assert!(rel < 1e-44, "{x} {y}: {}", rel.to_f64());
        }
    }

    #[test]
    fn exp_and_log() {
        let ctx = ctx();
        let z = ctx.cnum(0.25, -1.75);
        let back = principal_log(&exp(&z)).unwrap();
        assert!(close(&back, &z, 1e-45));
        let l = principal_log(&ctx.cint(-1, 0)).unwrap();
        assert!((l.im().clone() - ctx.pi()).abs() < 1e-45);
    }

    #[test]
    fn integer_powers() {
        let ctx = ctx();
        let z = ctx.cint(1, 1);
        assert_eq!(powu(&z, 0), ctx.one());
        assert_eq!(powu(&z, 4), ctx.cint(-4, 0));
        assert_eq!(powu(&z, 5), ctx.cint(-4, -4));
    }
}
