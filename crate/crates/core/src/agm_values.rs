//! All AGM values of a pair as lattice points.
//!
//! For `c = √(a^2 - b^2)` with `(a, c)` good, let `w = π/M(a, b)` and
//! `w' = iπ/M(a, c)`. Every `π/M_S(±a, ±b)` is a primitive element of
//! `Λ = Zw + Zw'` whose coordinates `(u, v)` satisfy
//!
//! | signs    | u mod 4 | v mod 4 |
//! |----------|---------|---------|
//! | `(a, b)`   | 1 | 0 |
//! | `(a, -b)`  | 1 | 2 |
//! | `(-a, -b)` | 3 | 0 |
//! | `(-a, b)`  | 3 | 2 |

use rug::{Float, Integer};

use crate::agm::{agm, agm_scheduled, goodness, AgmPair, Goodness, SignSet};
use crate::error::{Error, Result};
use crate::lattice::{Coordinates, Lattice};
use crate::numerics::{principal_sqrt, CNum, PrecisionContext};

#[derive(Clone, Debug, PartialEq)]
pub struct CosetReport {
    /// `π/M_S(sign_a a, sign_b b)`
    pub value: CNum,
    /// Coordinates in the basis `(w, w')`.
    pub coords: Coordinates,
    pub u: Integer,
    pub v: Integer,
    pub residues: (u32, u32),
    pub primitive: bool,
    /// Largest distance of a coordinate from its rounded integer.
    pub error: Float,
}

/// Residues `(u mod 4, v mod 4)` predicted for the given signs.
pub fn expected_residues(sign_a: i8, sign_b: i8) -> (u32, u32) {
    match (sign_a >= 0, sign_b >= 0) {
        (true, true) => (1, 0),
        (true, false) => (1, 2),
        (false, false) => (3, 0),
        (false, true) => (3, 2),
    }
}

/// The basis `(w, w')` attached to `(a, b)`.
pub fn coset_basis(a: &CNum, b: &CNum, ctx: &PrecisionContext) -> Result<Lattice> {
    let (a, b) = (ctx.adopt(a), ctx.adopt(b));
    let mut c = principal_sqrt(&(&a.square() - &b.square()));
    if goodness(&a, &c, ctx) == Goodness::Bad {
        c = -c;
    }
    let pi = ctx.lift(&ctx.pi());
    let w = &pi / &agm(&a, &b, ctx)?;
    let w_alt = (&pi / &agm(&a, &c, ctx)?).mul_i();
    Lattice::from_basis(w, w_alt, ctx)
}

/// Locate `π/M_S(sign_a a, sign_b b)` in the lattice and check its coset.
///
/// Fails with `CosetViolation` if the value is not a lattice point within
/// the membership tolerance, lies in the wrong coset of `4Λ`, or is not
/// primitive.
pub fn classify_agm_value(
    a: &CNum,
    b: &CNum,
    s: &SignSet,
    sign_a: i8,
    sign_b: i8,
    ctx: &PrecisionContext,
) -> Result<CosetReport> {
    let basis = coset_basis(a, b, ctx)?;
    classify_in_basis(&basis, a, b, s, sign_a, sign_b, ctx)
}

/// As [`classify_agm_value`] with the basis from [`coset_basis`] supplied.
pub fn classify_in_basis(
    basis: &Lattice,
    a: &CNum,
    b: &CNum,
    s: &SignSet,
    sign_a: i8,
    sign_b: i8,
    ctx: &PrecisionContext,
) -> Result<CosetReport> {
    let sa = if sign_a >= 0 { ctx.adopt(a) } else { -ctx.adopt(a) };
    let sb = if sign_b >= 0 { ctx.adopt(b) } else { -ctx.adopt(b) };
    let pair = AgmPair::new(sa, sb, ctx)?;
    let m = agm_scheduled(&pair, s, ctx)?.m;
    let value = &ctx.lift(&ctx.pi()) / &m;
    let coords = basis.coordinates(&value);
    let (u, v, error) = basis.nearest_integers(&value);
    let residues = (u.mod_u(4), v.mod_u(4));
    let primitive = Integer::from(u.gcd_ref(&v)) == 1;
    let report = CosetReport {
        value,
        coords,
        u,
        v,
        residues,
        primitive,
        error,
    };
    if report.error > ctx.member_tol() {
        return Err(Error::CosetViolation(format!(
            "coordinates are {} away from integers",
            report.error.to_f64()
        )));
    }
    let expect = expected_residues(sign_a, sign_b);
    if report.residues != expect {
        return Err(Error::CosetViolation(format!(
            "(u, v) = ({}, {}) has residues {:?}, expected {:?}",
            report.u, report.v, report.residues, expect
        )));
    }
    if !report.primitive {
        return Err(Error::CosetViolation(format!(
            "(u, v) = ({}, {}) is not primitive",
            report.u, report.v
        )));
    }
    Ok(report)
}
