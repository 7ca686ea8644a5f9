//! Curve models: roots of `4X^3 - g2 X - g3`, the invariants `(g2, g3)`,
//! long Weierstrass coefficients, and points.

use std::cmp::Ordering;

use num_complex::Complex64;
use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{CNum, PrecisionContext};

/// The roots of `Y^2 = 4(X - e1)(X - e2)(X - e3)`, in a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRoots {
    pub e1: CNum,
    pub e2: CNum,
    pub e3: CNum,
}

/// `Y^2 = 4X^3 - g2 X - g3`
#[derive(Clone, Debug, PartialEq)]
pub struct CurveInvariants {
    pub g2: CNum,
    pub g3: CNum,
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassCoeffs {
    pub a1: CNum,
    pub a2: CNum,
    pub a3: CNum,
    pub a4: CNum,
    pub a6: CNum,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Infinity,
    Affine { x: CNum, y: CNum },
}

impl Point {
    pub fn affine(x: CNum, y: CNum) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

fn pair_separation(a: &CNum, b: &CNum, c: &CNum) -> (Float, Float) {
    let d12 = a.dist(b);
    let d13 = a.dist(c);
    let d23 = b.dist(c);
    let min = d12.clone().min(&d13).min(&d23);
    let max = d12.max(&d13).max(&d23);
    (min, max)
}

impl CurveRoots {
    /// Roots must be pairwise distinct relative to their spread.
    pub fn new(e1: CNum, e2: CNum, e3: CNum, ctx: &PrecisionContext) -> Result<Self> {
        let (min, max) = pair_separation(&e1, &e2, &e3);
        if max.is_zero() || min <= max * ctx.eps_tie() {
            return Err(Error::DegenerateCurve("repeated roots".into()));
        }
        Ok(CurveRoots { e1, e2, e3 })
    }

    pub fn as_array(&self) -> [&CNum; 3] {
        [&self.e1, &self.e2, &self.e3]
    }

    pub fn sum(&self) -> CNum {
        &(&self.e1 + &self.e2) + &self.e3
    }

    /// The common translation `(e1 + e2 + e3) / 3`.
    pub fn shift(&self) -> CNum {
        let s = self.sum();
        let p = s.prec();
        s.scale(&(Float::with_val(p, 1) / 3u32))
    }

    /// The roots translated so that they sum to zero.
    pub fn centered(&self) -> CurveRoots {
        let t = self.shift();
        CurveRoots {
            e1: &self.e1 - &t,
            e2: &self.e2 - &t,
            e3: &self.e3 - &t,
        }
    }

    pub fn translate(&self, t: &CNum) -> CurveRoots {
        CurveRoots {
            e1: &self.e1 + t,
            e2: &self.e2 + t,
            e3: &self.e3 + t,
        }
    }

    /// Largest `|e_i - e_j|`.
    pub fn spread(&self) -> Float {
        pair_separation(&self.e1, &self.e2, &self.e3).1
    }

    /// `4(x - e1)(x - e2)(x - e3)`
    pub fn cubic_at(&self, x: &CNum) -> CNum {
        (&(&(x - &self.e1) * &(x - &self.e2)) * &(x - &self.e3)).scale_i64(4)
    }

    /// Whether `p` satisfies the curve equation to relative `tol`.
    pub fn contains(&self, p: &Point, tol: &Float) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let rhs = self.cubic_at(x);
                let lhs = y.square();
                let scale = lhs.abs().max(&rhs.abs()).max(&self.spread().square());
                lhs.dist(&rhs) <= scale * tol
            }
        }
    }

    /// Whether all roots are real (imaginary parts within `eps_tie` of the
    /// spread).
    pub fn all_real(&self, ctx: &PrecisionContext) -> bool {
        let lim = self.spread() * ctx.eps_tie();
        self.as_array()
            .iter()
            .all(|e| Float::with_val(ctx.work_bits, e.im().abs_ref()) <= lim)
    }
}

fn discriminant(g2: &CNum, g3: &CNum) -> (CNum, Float) {
    let g2c = &g2.square() * g2;
    let g3s = g3.square().scale_i64(27);
    let scale = g2c.abs() + g3s.abs();
    (&g2c - &g3s, scale)
}

impl CurveInvariants {
    pub fn new(g2: CNum, g3: CNum, ctx: &PrecisionContext) -> Result<Self> {
        let (disc, scale) = discriminant(&g2, &g3);
        if scale.is_zero() || disc.abs() <= scale * ctx.eps_tie() {
            return Err(Error::SingularCurve(
                "discriminant g2^3 - 27 g3^2 vanishes".into(),
            ));
        }
        Ok(CurveInvariants { g2, g3 })
    }

    /// `g2^3 - 27 g3^2`
    pub fn discriminant(&self) -> CNum {
        discriminant(&self.g2, &self.g3).0
    }

    /// `4x^3 - g2 x - g3`
    pub fn cubic_at(&self, x: &CNum) -> CNum {
        let x3 = &x.square() * x;
        &(&x3.scale_i64(4) - &(&self.g2 * x)) - &self.g3
    }

    pub fn contains(&self, p: &Point, tol: &Float) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => {
                let lhs = y.square();
                let x3 = (&x.square() * x).scale_i64(4);
                let rhs = self.cubic_at(x);
                let scale = lhs
                    .abs()
                    .max(&x3.abs())
                    .max(&(&self.g2 * x).abs())
                    .max(&self.g3.abs());
                lhs.dist(&rhs) <= scale * tol
            }
        }
    }
}

impl WeierstrassCoeffs {
    /// `(b2, b4, b6)`
    pub fn b_invariants(&self) -> (CNum, CNum, CNum) {
        let b2 = &self.a1.square() + &self.a2.scale_i64(4);
        let b4 = &self.a4.scale_i64(2) + &(&self.a1 * &self.a3);
        let b6 = &self.a3.square() + &self.a6.scale_i64(4);
        (b2, b4, b6)
    }

    /// Map a point on the long model to `Y^2 = 4X^3 - g2 X - g3`:
    /// `X = x + b2/12`, `Y = 2y + a1 x + a3`.
    pub fn to_short_point(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => {
                let (b2, _, _) = self.b_invariants();
                let prec = x.prec();
                let twelfth = Float::with_val(prec, 1) / 12u32;
                let xs = x + &b2.scale(&twelfth);
                let ys = &(&y.scale_i64(2) + &(&self.a1 * x)) + &self.a3;
                Point::Affine { x: xs, y: ys }
            }
        }
    }
}

/// `g2 = (b2^2 - 24 b4) / 12`, `g3 = (36 b2 b4 - b2^3 - 216 b6) / 216`.
pub fn invariants_from_coeffs(
    w: &WeierstrassCoeffs,
    ctx: &PrecisionContext,
) -> Result<CurveInvariants> {
    let (b2, b4, b6) = w.b_invariants();
    let p = ctx.work_bits;
    let g2 = (&b2.square() - &b4.scale_i64(24)).scale(&(Float::with_val(p, 1) / 12u32));
    let b2b4 = (&b2 * &b4).scale_i64(36);
    let b2c = &b2.square() * &b2;
    let g3 = (&(&b2b4 - &b2c) - &b6.scale_i64(216)).scale(&(Float::with_val(p, 1) / 216u32));
    CurveInvariants::new(g2, g3, ctx)
}

/// `g2 = -4(e1e2 + e1e3 + e2e3)`, `g3 = 4 e1e2e3` after translating the
/// roots to sum zero.
pub fn invariants_from_roots(r: &CurveRoots, ctx: &PrecisionContext) -> Result<CurveInvariants> {
    let (min, max) = pair_separation(&r.e1, &r.e2, &r.e3);
    if max.is_zero() || min <= max * ctx.eps_tie() {
        return Err(Error::DegenerateCurve("repeated roots".into()));
    }
    let c = r.centered();
    let s2 = &(&(&c.e1 * &c.e2) + &(&c.e1 * &c.e3)) + &(&c.e2 * &c.e3);
    let g2 = s2.scale_i64(-4);
    let g3 = (&(&c.e1 * &c.e2) * &c.e3).scale_i64(4);
    CurveInvariants::new(g2, g3, ctx)
}

/// Roots of `4Y^3 - p Y - q` in double precision by simultaneous
/// (Durand–Kerner) iteration.
fn seed_roots(p: Complex64, q: Complex64) -> [Complex64; 3] {
    let f = |y: Complex64| 4.0 * y * y * y - p * y - q;
    let mut z = [
        Complex64::from_polar(1.0, 0.4),
        Complex64::from_polar(1.0, 0.4 + 2.0 * std::f64::consts::FRAC_PI_3),
        Complex64::from_polar(1.0, 0.4 + 4.0 * std::f64::consts::FRAC_PI_3),
    ];
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for k in 0..3 {
            let mut den = Complex64::new(4.0, 0.0);
            for j in 0..3 {
                if j != k {
                    den *= z[k] - z[j];
                }
            }
            let step = f(z[k]) / den;
            if step.is_finite() {
                z[k] -= step;
                delta = delta.max(step.norm());
            }
        }
        if delta < 1e-16 {
            break;
        }
    }
    z
}

fn order_roots(roots: &mut [CNum; 3], ctx: &PrecisionContext) {
    let tol = ctx.eps_tie().clone();
    let cmp = |a: &CNum, b: &CNum| -> Ordering {
        let (na, nb) = (a.abs(), b.abs());
        let scale = Float::with_val(ctx.work_bits, na.max_ref(&nb)) * &tol;
        if Float::with_val(ctx.work_bits, &na - &nb).abs() > scale {
            return nb.partial_cmp(&na).unwrap_or(Ordering::Equal);
        }
        b.re()
            .partial_cmp(a.re())
            .unwrap_or(Ordering::Equal)
            .then(b.im().partial_cmp(a.im()).unwrap_or(Ordering::Equal))
    };
    // three elements: a fixed insertion sort keeps the order deterministic
    for i in 1..3 {
        let mut j = i;
        while j > 0 && cmp(&roots[j - 1], &roots[j]) == Ordering::Greater {
            roots.swap(j - 1, j);
            j -= 1;
        }
    }
}

/// The three roots of `4X^3 - g2 X - g3`, ordered by decreasing modulus
/// (ties: decreasing real part, then decreasing imaginary part).
pub fn roots_from_invariants(inv: &CurveInvariants, ctx: &PrecisionContext) -> Result<CurveRoots> {
    let wp = ctx.work_bits;
    // Scale X = λY so the double-precision seed sees O(1) coefficients.
    let l2 = Float::with_val(wp, inv.g2.abs().sqrt_ref());
    let l3 = Float::with_val(wp, inv.g3.abs().cbrt_ref());
    let lambda = l2.max(&l3);
    let lam2 = Float::with_val(wp, lambda.square_ref());
    let lam3 = Float::with_val(wp, &lam2 * &lambda);
    let p = inv.g2.scale(&Float::with_val(wp, 1 / &lam2));
    let q = inv.g3.scale(&Float::with_val(wp, 1 / &lam3));
    let seeds = seed_roots(p.to_c64(), q.to_c64());

    let scale = Float::with_val(wp, lambda.square_ref()) * &lambda;
    let mut roots: Vec<CNum> = Vec::with_capacity(3);
    for s in seeds {
        let mut x = CNum::from_f64(wp, s.re, s.im).scale(&lambda);
        let mut prev_step: Option<Float> = None;
        for _ in 0..ctx.iteration_cap() {
            let fx = inv.cubic_at(&x);
            let dfx = &x.square().scale_i64(12) - &inv.g2;
            if dfx.is_zero() {
                break;
            }
            let step = &fx / &dfx;
            let size = step.abs();
            x = &x - &step;
            let lim = Float::with_val(wp, x.abs() * ctx.eps_conv());
            if size <= lim {
                break;
            }
            // stagnation: the step stopped shrinking
            if let Some(prev) = &prev_step {
                if size >= *prev && size <= Float::with_val(wp, &lim * 1024u32) {
                    break;
                }
            }
            prev_step = Some(size);
        }
        let resid = inv.cubic_at(&x).abs();
        let bound = Float::with_val(wp, &scale * ctx.eps_tie()) * 64u32;
        if resid > bound {
            return Err(Error::SingularCurve(
                "Newton refinement did not reach a root".into(),
            ));
        }
        roots.push(x);
    }
    let mut arr: [CNum; 3] = [roots[0].clone(), roots[1].clone(), roots[2].clone()];
    let (min, _) = pair_separation(&arr[0], &arr[1], &arr[2]);
    if min <= Float::with_val(wp, &lambda * ctx.eps_tie()) * 1024u32 {
        return Err(Error::SingularCurve("near-multiple roots".into()));
    }
    order_roots(&mut arr, ctx);
    let [e1, e2, e3] = arr;
    CurveRoots::new(e1, e2, e3, ctx).map_err(|_| Error::SingularCurve("near-multiple roots".into()))
}
