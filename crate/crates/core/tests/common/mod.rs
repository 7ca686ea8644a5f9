#![allow(dead_code)]

use ellagm_core::curve::{invariants_from_roots, CurveRoots, Point};
use ellagm_core::numerics::{format_real, parse_cnum, CNum, PrecisionContext};
use ellagm_core::oracle::{wp, WpValue};
use ellagm_core::periods::PeriodTriple;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::Float;

pub fn ctx(digits: u32) -> PrecisionContext {
    PrecisionContext::new(digits).unwrap()
}

pub fn num(c: &PrecisionContext, s: &str) -> CNum {
    parse_cnum(s, c).unwrap()
}

pub fn roots(c: &PrecisionContext, r: [&str; 3]) -> CurveRoots {
    CurveRoots::new(num(c, r[0]), num(c, r[1]), num(c, r[2]), c).unwrap()
}

/// `|z - w|` as an f64, for reporting.
pub fn err(z: &CNum, w: &CNum) -> f64 {
    z.dist(w).to_f64()
}

/// `10^-k`
pub fn tol(k: i32) -> f64 {
    10f64.powi(-k)
}

pub fn tenpow(c: &PrecisionContext, k: i32) -> Float {
    c.ten_pow_neg(k)
}

/// `x` cut (not rounded) to `digits` decimals, the way printed tables
/// with trailing ellipses are produced.
pub fn truncated(x: &Float, digits: usize) -> String {
    let s = format_real(x, digits as u32 + 20);
    s[..s.len() - 20].to_string()
}

/// Both parts of `z` agree with the printed value in every printed decimal.
pub fn matches_20(z: &CNum, printed: &str, c: &PrecisionContext) -> bool {
    let p = num(c, printed);
    truncated(z.re(), 20) == format_real(p.re(), 20)
        && truncated(z.im(), 20) == format_real(p.im(), 20)
}

pub fn rand_cnum(rng: &mut ChaCha8Rng, c: &PrecisionContext, box_: f64) -> CNum {
    c.cnum(rng.gen_range(-box_..box_), rng.gen_range(-box_..box_))
}

/// Three random distinct roots in the box `[-box_, box_]^2`, kept away from
/// near-collisions so the curve is comfortably nonsingular.
pub fn rand_roots(rng: &mut ChaCha8Rng, c: &PrecisionContext, box_: f64) -> CurveRoots {
    loop {
        let e = [
            rand_cnum(rng, c, box_),
            rand_cnum(rng, c, box_),
            rand_cnum(rng, c, box_),
        ];
        let sep = e[0].dist(&e[1]).min(&e[0].dist(&e[2])).min(&e[1].dist(&e[2]));
        if sep > box_ / 50.0 {
            let [a, b, d] = e;
            return CurveRoots::new(a, b, d, c).unwrap();
        }
    }
}

/// Random `z = u w1 + v w2` with `u, v` in `[-1, 1]`, away from the
/// half-lattice so that the point has order other than 1 and 2.
pub fn rand_z(rng: &mut ChaCha8Rng, t: &PeriodTriple, c: &PrecisionContext) -> CNum {
    loop {
        let u: f64 = rng.gen_range(-1.0..1.0);
        let v: f64 = rng.gen_range(-1.0..1.0);
        let near_half = |x: f64| ((2.0 * x).round() - 2.0 * x).abs() < 0.02;
        if near_half(u) && near_half(v) {
            continue;
        }
        return t.lattice.combine(&c.real(u), &c.real(v));
    }
}

/// The curve point with elliptic logarithm `z`, on the model with the given
/// (not necessarily centered) roots.
pub fn point_at(z: &CNum, r: &CurveRoots, t: &PeriodTriple, c: &PrecisionContext) -> Point {
    let WpValue { wp: x, wp_prime: y } = wp(z, &t.lattice, c).unwrap();
    Point::affine(&x + &r.shift(), y)
}

/// `℘` at `z` on the model of `r` (undoing the centering shift).
pub fn wp_shifted(z: &CNum, r: &CurveRoots, t: &PeriodTriple, c: &PrecisionContext) -> WpValue {
    let v = wp(z, &t.lattice, c).unwrap();
    WpValue {
        wp: &v.wp + &r.shift(),
        wp_prime: v.wp_prime,
    }
}

pub fn short_invariants(r: &CurveRoots, c: &PrecisionContext) -> ellagm_core::CurveInvariants {
    invariants_from_roots(r, c).unwrap()
}

/// Translate a point on the `r` model to the centered short model and back.
pub fn to_short(p: &Point, r: &CurveRoots) -> Point {
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::affine(x - &r.shift(), y.clone()),
    }
}

pub fn from_short(p: &Point, r: &CurveRoots) -> Point {
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine { x, y } => Point::affine(x + &r.shift(), y.clone()),
    }
}
