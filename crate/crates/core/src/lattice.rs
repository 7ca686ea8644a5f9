//! Rank-2 lattices `Zw1 + Zw2` in the complex plane.

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::numerics::{CNum, PrecisionContext};

/// A lattice basis. Bases built with [`Lattice::make_oriented`] or returned
/// by [`Lattice::reduce_basis`] satisfy `Im(w2/w1) > 0`; [`Lattice::from_basis`]
/// accepts either orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    pub w1: CNum,
    pub w2: CNum,
}

/// Real coordinates `(u, v)` with `z = u w1 + v w2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coordinates {
    pub u: Float,
    pub v: Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    /// Coordinates in `(-1/2, 1/2]`.
    Centered,
    /// Coordinates in `[0, 1)`.
    Fundamental,
}

fn check_nondegenerate(wa: &CNum, wb: &CNum, ctx: &PrecisionContext) -> Result<Float> {
    if wa.is_zero() || wb.is_zero() {
        return Err(Error::DegenerateLattice("zero generator".into()));
    }
    let cross = wa.cross(wb);
    let scale = Float::with_val(ctx.work_bits, wa.abs() * wb.abs());
    if Float::with_val(ctx.work_bits, cross.abs_ref()) <= scale * ctx.eps_tie() {
        return Err(Error::DegenerateLattice(
            "generators have a real ratio".into(),
        ));
    }
    Ok(cross)
}

/// `x - ceil(x - 1/2)`, the representative in `(-1/2, 1/2]`, and the shift.
fn centered(x: &Float) -> (Float, Float) {
    let p = x.prec();
    let k = Float::with_val(p, x - Float::with_val(p, 0.5)).ceil();
    (Float::with_val(p, x - &k), k)
}

fn fundamental(x: &Float) -> (Float, Float) {
    let p = x.prec();
    let k = Float::with_val(p, x.floor_ref());
    (Float::with_val(p, x - &k), k)
}

impl Lattice {
    /// Any basis with a non-real ratio, kept as given.
    pub fn from_basis(w1: CNum, w2: CNum, ctx: &PrecisionContext) -> Result<Self> {
        check_nondegenerate(&w1, &w2, ctx)?;
        Ok(Lattice { w1, w2 })
    }

    /// `(wa, ±wb)` with the sign making `Im(w2/w1) > 0`.
    pub fn make_oriented(wa: CNum, wb: CNum, ctx: &PrecisionContext) -> Result<Self> {
        let cross = check_nondegenerate(&wa, &wb, ctx)?;
        let w2 = if cross > 0 { wb } else { -wb };
        Ok(Lattice { w1: wa, w2 })
    }

    pub fn is_oriented(&self) -> bool {
        self.w1.cross(&self.w2) > 0
    }

    /// `τ = w2/w1`
    pub fn tau(&self) -> CNum {
        &self.w2 / &self.w1
    }

    /// Signed area of the fundamental parallelogram.
    pub fn covolume(&self) -> Float {
        self.w1.cross(&self.w2)
    }

    pub fn point(&self, m: i64, n: i64) -> CNum {
        &self.w1.scale_i64(m) + &self.w2.scale_i64(n)
    }

    pub fn combine(&self, u: &Float, v: &Float) -> CNum {
        &self.w1.scale(u) + &self.w2.scale(v)
    }

    /// Gauss reduction: the result is oriented, `|Re τ| <= 1/2`, `|τ| >= 1`,
    /// and `w1` is a shortest nonzero vector.
    pub fn reduce_basis(&self, ctx: &PrecisionContext) -> Lattice {
        let mut w1 = self.w1.clone();
        let mut w2 = if self.is_oriented() {
            self.w2.clone()
        } else {
            -&self.w2
        };
        for _ in 0..ctx.iteration_cap() * 4 {
            if w2.norm_sqr() < w1.norm_sqr() {
                // (w1, w2) -> (w2, -w1) keeps the orientation
                let t = w1;
                w1 = w2;
                w2 = -t;
            }
            let mu = Float::with_val(ctx.work_bits, w2.dot(&w1) / w1.norm_sqr());
            let (_, k) = centered(&mu);
            if k.is_zero() {
                break;
            }
            w2 = &w2 - &w1.scale(&k);
        }
        if w2.norm_sqr() < w1.norm_sqr() {
            let t = w1;
            w1 = w2;
            w2 = -t;
        }
        Lattice { w1, w2 }
    }

    /// Solve `z = u w1 + v w2` over the reals.
    pub fn coordinates(&self, z: &CNum) -> Coordinates {
        let p = z.prec().max(self.w1.prec());
        let det = self.covolume();
        let mut u = Float::with_val(p, z.re() * self.w2.im());
        u -= Float::with_val(p, z.im() * self.w2.re());
        u /= &det;
        let mut v = Float::with_val(p, self.w1.re() * z.im());
        v -= Float::with_val(p, self.w1.im() * z.re());
        v /= &det;
        Coordinates { u, v }
    }

    /// Reduce `z` modulo the lattice; also returns the integer shifts
    /// `(m, n)` with `reduced = z - m w1 - n w2`.
    pub fn reduce_with_shift(&self, z: &CNum, mode: ReduceMode) -> (CNum, Integer, Integer) {
        let Coordinates { u, v } = self.coordinates(z);
        let pick = match mode {
            ReduceMode::Centered => centered,
            ReduceMode::Fundamental => fundamental,
        };
        let (_, m) = pick(&u);
        let (_, n) = pick(&v);
        let reduced = &(z - &self.w1.scale(&m)) - &self.w2.scale(&n);
        let mi = m.to_integer().unwrap_or_default();
        let ni = n.to_integer().unwrap_or_default();
        (reduced, mi, ni)
    }

    pub fn reduce_mod(&self, z: &CNum, mode: ReduceMode) -> CNum {
        self.reduce_with_shift(z, mode).0
    }

    /// Reduce modulo `⟨w1⟩` only, so that `-1/2 < Re(z/w1) <= 1/2` in the
    /// coordinates of this basis.
    pub fn reduce_strip(&self, z: &CNum) -> CNum {
        let Coordinates { u, .. } = self.coordinates(z);
        let (_, m) = centered(&u);
        z - &self.w1.scale(&m)
    }

    /// Nearest integer coordinates and the larger of the two rounding errors.
    pub fn nearest_integers(&self, z: &CNum) -> (Integer, Integer, Float) {
        let Coordinates { u, v } = self.coordinates(z);
        let ru = Float::with_val(u.prec(), u.round_ref());
        let rv = Float::with_val(v.prec(), v.round_ref());
        let eu = Float::with_val(u.prec(), &u - &ru).abs();
        let ev = Float::with_val(v.prec(), &v - &rv).abs();
        (
            ru.to_integer().unwrap_or_default(),
            rv.to_integer().unwrap_or_default(),
            eu.max(&ev),
        )
    }

    /// Coordinates within `tol` of integers.
    pub fn is_member(&self, z: &CNum, tol: &Float) -> bool {
        let (_, _, err) = self.nearest_integers(z);
        err <= *tol
    }

    /// A member whose integer coordinates are coprime.
    pub fn is_primitive(&self, z: &CNum, tol: &Float) -> bool {
        let (m, n, err) = self.nearest_integers(z);
        err <= *tol && m.gcd(&n) == 1
    }

    /// Whether the lattice has a basis with `Re(w2/w1) = 0`; if so, one such
    /// (reduced, oriented) basis.
    pub fn is_rectangular(&self, ctx: &PrecisionContext) -> (bool, Option<Lattice>) {
        let red = self.reduce_basis(ctx);
        let tau = red.tau();
        let lim = Float::with_val(ctx.work_bits, tau.abs() * ctx.eps_tie());
        if Float::with_val(ctx.work_bits, tau.re().abs_ref()) <= lim {
            (true, Some(red))
        } else {
            (false, None)
        }
    }

    /// Both bases generate the same lattice: each vector of one has integer
    /// coordinates (within `tol`) in the other and the change of basis is
    /// unimodular.
    pub fn same_lattice(&self, other: &Lattice, tol: &Float) -> bool {
        let (a, b, e1) = self.nearest_integers(&other.w1);
        let (c, d, e2) = self.nearest_integers(&other.w2);
        if e1 > *tol || e2 > *tol {
            return false;
        }
        let det = Integer::from(&a * &d) - Integer::from(&b * &c);
        det.abs() == 1
    }

    /// Whether `w` is a shortest vector of `w + 2Λ`, checked against
    /// `w + 2(m w1 + n w2)` for `|m|, |n| <= radius` with relative slack `tol`.
    pub fn is_minimal_in_coset(&self, w: &CNum, radius: i64, tol: &Float) -> bool {
        let norm = w.abs();
        let floor = Float::with_val(norm.prec(), &norm * (Float::with_val(norm.prec(), 1) - tol));
        for m in -radius..=radius {
            for n in -radius..=radius {
                if m == 0 && n == 0 {
                    continue;
                }
                let v = w + &self.point(2 * m, 2 * n);
                if v.abs() < floor {
                    return false;
                }
            }
        }
        true
    }

    /// Shortest nonzero vector length.
    pub fn min_norm(&self, ctx: &PrecisionContext) -> Float {
        self.reduce_basis(ctx).w1.abs()
    }
}
