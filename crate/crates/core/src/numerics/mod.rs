//! Precision management, complex numbers at working precision, principal
//! branches and decimal I/O.

mod cnum;
mod decimal;
mod elementary;
mod precision;

pub use cnum::CNum;
pub use decimal::{cnum_from_json, cnum_to_json, format_cnum, format_real, parse_cnum};
pub use elementary::{exp, powu, principal_arctan, principal_log, principal_sqrt, sin_cos};
pub use precision::PrecisionContext;
