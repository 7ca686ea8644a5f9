//! Complex arithmetic-geometric mean sequences.
//!
//! Each step replaces `(a, b)` by `((a + b) / 2, ±sqrt(ab))`. The *good*
//! choice of sign is the one with `|a' - b'| <= |a' + b'|`; always taking it
//! gives the optimal sequence, whose limit `M(a, b)` has maximal modulus among
//! all limits reachable from `(a, b)`. A [`SignSet`] lists the steps at which
//! the bad sign is taken instead, giving `M_S(a, b)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::{principal_sqrt, CNum, PrecisionContext};

/// Classification of a pair under `|a - b| <= |a + b|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goodness {
    Good,
    Bad,
    Tie,
}

impl Goodness {
    /// Good or tied; the weak inequality holds.
    pub fn holds(self) -> bool {
        self != Goodness::Bad
    }
}

/// Classify `(a, b)`.
///
/// Uses `|a + b|^2 - |a - b|^2 = 4 Re(a conj(b))`; a tie is declared when
/// `|Re(a conj(b))| <= eps_tie * (|a|^2 + |b|^2) / 2`, which is the relative
/// test `| |a - b| - |a + b| | <= eps_tie |a + b|` to first order.
pub fn goodness(a: &CNum, b: &CNum, ctx: &PrecisionContext) -> Goodness {
    let d = a.dot(b);
    let mut band = a.norm_sqr();
    band += b.norm_sqr();
    band *= ctx.eps_tie();
    band >>= 1u32;
    if Float::with_val(d.prec(), d.abs_ref()) <= band {
        Goodness::Tie
    } else if d > 0 {
        Goodness::Good
    } else {
        Goodness::Bad
    }
}

/// A pair satisfying `a != 0`, `b != 0`, `a != ±b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AgmPair {
    pub a: CNum,
    pub b: CNum,
}

impl AgmPair {
    pub fn new(a: CNum, b: CNum, ctx: &PrecisionContext) -> Result<Self> {
        let na = a.abs();
        let nb = b.abs();
        let tol = ctx.eps_tie();
        let scale = Float::with_val(ctx.work_bits, na.max_ref(&nb));
        if na.is_zero() || na <= Float::with_val(ctx.work_bits, &nb * tol) {
            return Err(Error::DegeneratePair("a = 0".into()));
        }
        if nb <= Float::with_val(ctx.work_bits, &na * tol) {
            return Err(Error::DegeneratePair("b = 0".into()));
        }
        let bound = Float::with_val(ctx.work_bits, &scale * tol);
        if a.dist(&b) <= bound || (&a + &b).abs() <= bound {
            return Err(Error::DegeneratePair("a = ±b".into()));
        }
        Ok(AgmPair { a, b })
    }

    pub fn goodness(&self, ctx: &PrecisionContext) -> Goodness {
        goodness(&self.a, &self.b, ctx)
    }
}

/// Finite set of step indices (all `>= 1`) at which the bad sign is taken.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignSet(BTreeSet<u32>);

impl SignSet {
    pub fn empty() -> Self {
        SignSet::default()
    }

    pub fn new<I: IntoIterator<Item = u32>>(indices: I) -> Result<Self> {
        let set: BTreeSet<u32> = indices.into_iter().collect();
        if set.contains(&0) {
            return Err(Error::InvalidInput(
                "schedule indices start at 1; the initial pair is not scheduled".into(),
            ));
        }
        Ok(SignSet(set))
    }

    /// All subsets of `{1, ..., n}`, in binary counting order.
    pub fn all_subsets(n: u32) -> impl Iterator<Item = SignSet> {
        (0u64..(1u64 << n)).map(move |mask| {
            SignSet((1..=n).filter(|k| mask & (1 << (k - 1)) != 0).collect())
        })
    }

    pub fn contains(&self, n: u32) -> bool {
        self.0.contains(&n)
    }

    pub fn max(&self) -> u32 {
        self.0.iter().next_back().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for SignSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for SignSet {
    type Err = Error;

    /// Comma-separated indices, e.g. `"1,3"`; the empty string is `∅`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.trim().is_empty() {
            return Ok(SignSet::empty());
        }
        let mut out = Vec::new();
        let mut offset = 0;
        for part in s.split(',') {
            let n = part.trim().parse::<u32>().map_err(|e| Error::Parse {
                position: offset,
                message: format!("bad schedule index {part:?}: {e}"),
            })?;
            out.push(n);
            offset += part.len() + 1;
        }
        SignSet::new(out)
    }
}

/// Limit of an AGM sequence.
#[derive(Clone, Debug)]
pub struct AgmResult {
    pub m: CNum,
    pub iterations: usize,
    /// Whether some step had `|a - b| = |a + b|` and the `Im(a/b) > 0`
    /// convention decided the sign.
    pub tie_broken: bool,
    pub schedule: SignSet,
}

/// One step, reporting whether the sign had to be decided by the tie rule.
pub(crate) fn step_detail(
    p: &AgmPair,
    flip: bool,
    ctx: &PrecisionContext,
) -> Result<(AgmPair, bool)> {
    let a1 = (&p.a + &p.b).shr(1);
    let g = principal_sqrt(&(&p.a * &p.b));
    let (mut b1, tie) = match goodness(&a1, &g, ctx) {
        Goodness::Good => (g, false),
        Goodness::Bad => (-g, false),
        Goodness::Tie => {
            // Im(a1 / g) has the sign of Im(a1 conj(g)) = -cross(a1, g)
            if a1.cross(&g) < 0 {
                (g, true)
            } else {
                (-g, true)
            }
        }
    };
    if flip {
        b1 = -b1;
    }
    // a' = b' is the limit being reached, so only vanishing terms are
    // rejected here; a = ±b is checked on the starting pair alone.
    if a1.is_zero() || b1.is_zero() {
        return Err(Error::DegeneratePair("sequence reached 0".into()));
    }
    Ok((AgmPair { a: a1, b: b1 }, tie))
}

/// One AGM step: `((a + b) / 2, b')` with `b'^2 = ab`, `b'` the good choice
/// (ties resolved so `Im(a'/b') > 0`), negated when `flip` is set.
pub fn agm_step(p: &AgmPair, flip: bool, ctx: &PrecisionContext) -> Result<AgmPair> {
    step_detail(p, flip, ctx).map(|(q, _)| q)
}

fn converged(p: &AgmPair, ctx: &PrecisionContext) -> bool {
    // Convergence is quadratic, so once |a - b| is inside the tie band the
    // extra step lands below one ulp; a tighter test could stall on rounding.
    let lim = Float::with_val(ctx.work_bits, p.a.abs() * ctx.eps_tie());
    p.a.dist(&p.b) <= lim
}

/// `M_S(a, b)`: flip the sign at the steps in `schedule`, then continue
/// optimally until `|a_n - b_n| <= eps_tie |a_n|`, and take one more step.
pub fn agm_scheduled(
    p: &AgmPair,
    schedule: &SignSet,
    ctx: &PrecisionContext,
) -> Result<AgmResult> {
    let cap = ctx.iteration_cap();
    let last_flip = schedule.max() as usize;
    let mut pair = p.clone();
    let mut n = 0usize;
    let mut tie_broken = false;
    loop {
        if n >= last_flip && converged(&pair, ctx) {
            let (next, tie) = step_detail(&pair, false, ctx)?;
            tie_broken |= tie;
            return Ok(AgmResult {
                m: next.a,
                iterations: n + 1,
                tie_broken,
                schedule: schedule.clone(),
            });
        }
        if n >= cap {
            return Err(Error::NonConvergence {
                what: "AGM",
                iterations: n,
            });
        }
        n += 1;
        let (next, tie) = step_detail(&pair, schedule.contains(n as u32), ctx)?;
        tie_broken |= tie;
        pair = next;
    }
}

/// The optimal AGM value `M(a, b)`.
pub fn agm_optimal(p: &AgmPair, ctx: &PrecisionContext) -> Result<AgmResult> {
    agm_scheduled(p, &SignSet::empty(), ctx)
}

/// Convenience wrapper: validate `(a, b)` and return `M(a, b)`.
pub fn agm(a: &CNum, b: &CNum, ctx: &PrecisionContext) -> Result<CNum> {
    let p = AgmPair::new(ctx.adopt(a), ctx.adopt(b), ctx)?;
    Ok(agm_optimal(&p, ctx)?.m)
}

/// Classical AGM of two positive reals, in real arithmetic.
pub fn agm_real(a: &Float, b: &Float, ctx: &PrecisionContext) -> Result<Float> {
    if *a <= 0 || *b <= 0 {
        return Err(Error::DegeneratePair(
            "real AGM needs positive arguments".into(),
        ));
    }
    let p = ctx.work_bits;
    let mut x = Float::with_val(p, a);
    let mut y = Float::with_val(p, b);
    for _ in 0..ctx.iteration_cap() {
        let diff = Float::with_val(p, &x - &y).abs();
        let lim = Float::with_val(p, &x * ctx.eps_tie());
        let nx = Float::with_val(p, &x + &y) >> 1u32;
        let ny = Float::with_val(p, &x * &y).sqrt();
        x = nx;
        y = ny;
        if diff <= lim {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence {
        what: "real AGM",
        iterations: ctx.iteration_cap(),
    })
}
