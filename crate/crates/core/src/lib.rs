//! Arbitrary-precision periods and elliptic logarithms of complex elliptic
//! curves via the optimal complex arithmetic-geometric mean.
//!
//! The pipeline is
//!
//! 1. [`curve`]: obtain the roots `e1, e2, e3` of `4X^3 - g2 X - g3`;
//! 2. [`periods`]: choose signs of `sqrt(e_i - e_j)` and compute three
//!    primitive periods, each minimal in its coset modulo `2Λ`, as `π/M`;
//! 3. [`elog`]: run the AGM together with the `r/t` point iteration and
//!    return `z = arctan(M/t) / M`.
//!
//! [`oracle`] evaluates `℘` and `℘'` independently of the AGM (Laurent series
//! plus duplication, with `g2, g3` from Eisenstein q-series) and supplies the
//! group law; [`agm_values`] checks the classification of all AGM limits as
//! primitive lattice elements of explicit cosets.

pub mod agm;
pub mod agm_values;
pub mod curve;
pub mod elog;
pub mod error;
pub mod lattice;
pub mod numerics;
pub mod oracle;
pub mod periods;

pub use agm::{agm_optimal, agm_scheduled, agm_step, AgmPair, AgmResult, Goodness, SignSet};
pub use agm_values::{classify_agm_value, CosetReport};
pub use curve::{CurveInvariants, CurveRoots, Point, WeierstrassCoeffs};
pub use elog::{elog, elog_2torsion, ElogResult};
pub use error::{Error, Result};
pub use lattice::{Coordinates, Lattice, ReduceMode};
pub use numerics::{format_cnum, parse_cnum, CNum, PrecisionContext};
pub use oracle::{wp, wp_limit, WpValue};
pub use periods::{choose_signs, period_basis, PeriodTriple, SignSelection};
