//! Period lattices from the roots `e1, e2, e3`.
//!
//! With `a^2 = e1 - e3`, `b^2 = e1 - e2`, `c^2 = e2 - e3` and signs such that
//! `(a, b)`, `(c, ib)` and `(a, c)` are good pairs,
//! `w1 = π/M(a, b)`, `w2 = π/M(c, ib)`, `w3 = iπ/M(a, c)` are the minimal
//! vectors of the three nontrivial cosets of `2Λ` in `Λ`, and any two of
//! them form a basis.

use rug::Float;

use crate::agm::{agm, agm_real, goodness, Goodness};
use crate::curve::CurveRoots;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::numerics::{principal_sqrt, CNum, PrecisionContext};

/// Square roots of the root differences with compatible signs.
#[derive(Clone, Debug, PartialEq)]
pub struct SignSelection {
    pub a: CNum,
    pub b: CNum,
    pub c: CNum,
    /// The roots in the order the periods refer to (`e1` and `e3` possibly
    /// interchanged).
    pub permuted_roots: CurveRoots,
    pub swapped: bool,
    /// Goodness of `(a, b)`, `(c, ib)`, `(a, c)`.
    pub conditions: [Goodness; 3],
}

impl SignSelection {
    /// Index (0, 1, 2) of the first condition that holds with equality.
    pub fn tie(&self) -> Option<usize> {
        self.conditions.iter().position(|g| *g == Goodness::Tie)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodTriple {
    pub w1: CNum,
    pub w2: CNum,
    pub w3: CNum,
    /// Basis used for coordinates: `(w1, w2)` in general, the orthogonal
    /// basis when the lattice is rectangular.
    pub lattice: Lattice,
    pub rectangular: bool,
    pub ortho_basis: Option<(CNum, CNum)>,
    /// In the tie case, `w = π/M(x, y)` and `w' = π/M(x, -y)` for the tied
    /// pair (times `i` for the pair `(a, c)`).
    pub tie_periods: Option<(CNum, CNum)>,
    /// `None` for the real-arithmetic paths.
    pub selection: Option<SignSelection>,
}

impl PeriodTriple {
    /// Whether `w3 = ±w1 ± w2` for some choice of signs, within `tol`
    /// relative to `|w1| + |w2|`.
    pub fn satisfies_relation(&self, tol: &Float) -> bool {
        let scale = Float::with_val(self.w1.prec(), self.w1.abs() + self.w2.abs());
        let lim = scale * tol;
        [
            &self.w1 + &self.w2,
            &self.w1 - &self.w2,
        ]
        .iter()
        .any(|s| self.w3.dist(s) <= lim || (&self.w3 + s).abs() <= lim)
    }
}

fn pi_over(m: &CNum, ctx: &PrecisionContext) -> CNum {
    ctx.lift(&ctx.pi()) / m.clone()
}

/// Choose the signs of `a`, `b`, `c`.
///
/// `a` is the principal root; `b` and `c` are negated where needed to make
/// `(a, b)` and `(a, c)` good. If one of those is a tie, the sign is instead
/// chosen to make `(c, ib)` good. If `(c, ib)` is still bad, `e1` and `e3`
/// are interchanged and `(a, b, c)` replaced by `(ia, ic, ib)`.
pub fn choose_signs(r: &CurveRoots, ctx: &PrecisionContext) -> Result<SignSelection> {
    let roots = CurveRoots::new(
        ctx.adopt(&r.e1),
        ctx.adopt(&r.e2),
        ctx.adopt(&r.e3),
        ctx,
    )?;
    let mut a = principal_sqrt(&(&roots.e1 - &roots.e3));
    let mut b = principal_sqrt(&(&roots.e1 - &roots.e2));
    let mut c = principal_sqrt(&(&roots.e2 - &roots.e3));
    let g1 = goodness(&a, &b, ctx);
    let g3 = goodness(&a, &c, ctx);
    if g1 == Goodness::Bad {
        b = -b;
    }
    if g3 == Goodness::Bad {
        c = -c;
    }
    if g1 == Goodness::Tie && goodness(&c, &b.mul_i(), ctx) == Goodness::Bad {
        b = -b;
    }
    if g3 == Goodness::Tie && goodness(&c, &b.mul_i(), ctx) == Goodness::Bad {
        c = -c;
    }
    let mut permuted = roots;
    let mut swapped = false;
    if goodness(&c, &b.mul_i(), ctx) == Goodness::Bad {
        std::mem::swap(&mut permuted.e1, &mut permuted.e3);
        let (na, nb, nc) = (a.mul_i(), c.mul_i(), b.mul_i());
        a = na;
        b = nb;
        c = nc;
        swapped = true;
    }
    let conditions = [
        goodness(&a, &b, ctx),
        goodness(&c, &b.mul_i(), ctx),
        goodness(&a, &c, ctx),
    ];
    if conditions.iter().any(|g| !g.holds()) {
        return Err(Error::Internal(
            "no sign choice satisfies all three goodness conditions".into(),
        ));
    }
    Ok(SignSelection {
        a,
        b,
        c,
        permuted_roots: permuted,
        swapped,
        conditions,
    })
}

/// The period triple of the curve with the given roots.
pub fn period_basis(r: &CurveRoots, ctx: &PrecisionContext) -> Result<PeriodTriple> {
    let sel = choose_signs(r, ctx)?;
    let ib = sel.b.mul_i();
    let w1 = pi_over(&agm(&sel.a, &sel.b, ctx)?, ctx);
    let w2 = pi_over(&agm(&sel.c, &ib, ctx)?, ctx);
    let w3 = pi_over(&agm(&sel.a, &sel.c, ctx)?, ctx).mul_i();

    if let Some(idx) = sel.tie() {
        let (x, y, rotate) = match idx {
            0 => (&sel.a, &sel.b, false),
            1 => (&sel.c, &ib, false),
            _ => (&sel.a, &sel.c, true),
        };
        let mut w = pi_over(&agm(x, y, ctx)?, ctx);
        let mut w_alt = pi_over(&agm(x, &-y, ctx)?, ctx);
        if rotate {
            w = w.mul_i();
            w_alt = w_alt.mul_i();
        }
        let o1 = (&w + &w_alt).shr(1);
        let o2 = (&w - &w_alt).shr(1);
        let lattice = Lattice::make_oriented(o1.clone(), o2.clone(), ctx)?;
        return Ok(PeriodTriple {
            w1,
            w2,
            w3,
            lattice,
            rectangular: true,
            ortho_basis: Some((o1, o2)),
            tie_periods: Some((w, w_alt)),
            selection: Some(sel),
        });
    }

    let lattice = Lattice::from_basis(w1.clone(), w2.clone(), ctx)?;
    let (rectangular, ortho) = lattice.is_rectangular(ctx);
    Ok(PeriodTriple {
        w1,
        w2,
        w3,
        lattice,
        rectangular,
        ortho_basis: ortho.map(|l| (l.w1, l.w2)),
        tie_periods: None,
        selection: Some(sel),
    })
}

fn positive_sqrt(x: Float, what: &str) -> Result<Float> {
    if x <= 0 {
        return Err(Error::DegenerateCurve(format!("{what} is not positive")));
    }
    Ok(x.sqrt())
}

/// Real roots `e1 > e2 > e3`: `w1 = π/M(√(e1-e2), √(e1-e3))` and
/// `w2 = iπ/M(√(e2-e3), √(e1-e3))`, both AGMs over the positive reals.
pub fn periods_real_positive_disc(
    e1: &Float,
    e2: &Float,
    e3: &Float,
    ctx: &PrecisionContext,
) -> Result<PeriodTriple> {
    let p = ctx.work_bits;
    let d12 = positive_sqrt(Float::with_val(p, e1 - e2), "e1 - e2")?;
    let d13 = positive_sqrt(Float::with_val(p, e1 - e3), "e1 - e3")?;
    let d23 = positive_sqrt(Float::with_val(p, e2 - e3), "e2 - e3")?;
    let pi = ctx.pi();
    let w1 = ctx.lift(&Float::with_val(p, &pi / agm_real(&d12, &d13, ctx)?));
    let w2 = ctx
        .lift(&Float::with_val(p, &pi / agm_real(&d23, &d13, ctx)?))
        .mul_i();
    let w3 = &w1 - &w2;
    let lattice = Lattice::make_oriented(w1.clone(), w2.clone(), ctx)?;
    Ok(PeriodTriple {
        ortho_basis: Some((w1.clone(), w2.clone())),
        w1,
        w2,
        w3,
        lattice,
        rectangular: true,
        tie_periods: None,
        selection: None,
    })
}

/// One real root `e1` and a conjugate pair `e2`, `e3 = conj(e2)` with
/// `Im(e2) > 0`. With `√(e1 - e3) = x + iy` and `R = |x + iy|`,
/// `w+ = π/M(x, R)`, `w- = iπ/M(y, R)`, `w1 = w+`, `w2 = (w+ + w-)/2`.
pub fn periods_real_negative_disc(
    e1: &Float,
    e2: &CNum,
    ctx: &PrecisionContext,
) -> Result<PeriodTriple> {
    let p = ctx.work_bits;
    if *e2.im() <= 0 {
        return Err(Error::InvalidInput("expected Im(e2) > 0".into()));
    }
    let e3 = e2.conj();
    let a0 = principal_sqrt(&(&ctx.lift(e1) - &e3));
    let x = Float::with_val(p, a0.re());
    let y = Float::with_val(p, a0.im());
    let r = a0.abs();
    if x <= 0 || y <= 0 {
        return Err(Error::DegenerateCurve("e1 - e3 is real".into()));
    }
    let pi = ctx.pi();
    let wplus = ctx.lift(&Float::with_val(p, &pi / agm_real(&x, &r, ctx)?));
    let wminus = ctx
        .lift(&Float::with_val(p, &pi / agm_real(&y, &r, ctx)?))
        .mul_i();
    let w1 = wplus.clone();
    let w2 = (&wplus + &wminus).shr(1);
    let w3 = &w2 - &w1;
    let lattice = Lattice::make_oriented(w1.clone(), w2.clone(), ctx)?;
    let (rectangular, ortho) = lattice.is_rectangular(ctx);
    Ok(PeriodTriple {
        w1,
        w2,
        w3,
        lattice,
        rectangular,
        ortho_basis: ortho.map(|l| (l.w1, l.w2)),
        tie_periods: None,
        selection: None,
    })
}
