use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::CNum;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working-precision settings shared by every computation.
///
/// `work_bits = ceil(target_digits * log2 10) + guard_bits`, where the guard
/// is `max(64, ceil(target_digits / 4 * log2 10))` bits.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    pub target_digits: u32,
    pub work_bits: u32,
    pub guard_bits: u32,
    eps_conv: Float,
    eps_tie: Float,
}

impl PrecisionContext {
    pub fn new(target_digits: u32) -> Result<Self> {
        if target_digits == 0 {
            return Err(Error::InvalidInput("target_digits must be positive".into()));
        }
        if target_digits > 1_000_000 {
            return Err(Error::InvalidInput(format!(
                "target_digits {target_digits} is unreasonably large"
            )));
        }
        let guard_bits = 64u32.max((target_digits as f64 / 4.0 * LOG2_10).ceil() as u32);
        let work_bits = (target_digits as f64 * LOG2_10).ceil() as u32 + guard_bits;
        let eps_conv = Float::with_val(work_bits, 1) >> (work_bits as i32 - 2);
        let eps_tie = Float::with_val(work_bits, 1) >> (work_bits as i32 - 8);
        Ok(PrecisionContext {
            target_digits,
            work_bits,
            guard_bits,
            eps_conv,
            eps_tie,
        })
    }

    /// Relative convergence threshold, `2^(-work_bits + 2)`.
    pub fn eps_conv(&self) -> &Float {
        &self.eps_conv
    }

    /// Relative tie-detection threshold, `2^(-work_bits + 8)`.
    pub fn eps_tie(&self) -> &Float {
        &self.eps_tie
    }

    /// Default lattice-membership tolerance, `2^(-work_bits / 2)`.
    pub fn member_tol(&self) -> Float {
        Float::with_val(self.work_bits, 1) >> (self.work_bits / 2) as i32
    }

    /// `10^(-exp)` at working precision.
    pub fn ten_pow_neg(&self, exp: i32) -> Float {
        Float::with_val(self.work_bits, 10).pow(-exp)
    }

    pub fn real(&self, x: f64) -> Float {
        Float::with_val(self.work_bits, x)
    }

    pub fn real_int(&self, x: i64) -> Float {
        Float::with_val(self.work_bits, x)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.work_bits, Constant::Pi)
    }

    pub fn zero(&self) -> CNum {
        CNum::zero(self.work_bits)
    }

    pub fn one(&self) -> CNum {
        CNum::from_i64(self.work_bits, 1, 0)
    }

    pub fn i(&self) -> CNum {
        CNum::from_i64(self.work_bits, 0, 1)
    }

    pub fn cnum(&self, re: f64, im: f64) -> CNum {
        CNum::from_f64(self.work_bits, re, im)
    }

    pub fn cint(&self, re: i64, im: i64) -> CNum {
        CNum::from_i64(self.work_bits, re, im)
    }

    /// Lift a real value to the working precision as a complex number.
    pub fn lift(&self, x: &Float) -> CNum {
        CNum::new(
            Float::with_val(self.work_bits, x),
            Float::with_val(self.work_bits, 0),
        )
    }

    /// Re-round a complex number to the working precision.
    pub fn adopt(&self, z: &CNum) -> CNum {
        CNum::new(
            Float::with_val(self.work_bits, z.re()),
            Float::with_val(self.work_bits, z.im()),
        )
    }

    /// Iteration cap for quadratically convergent loops.
    pub fn iteration_cap(&self) -> usize {
        8 * ceil_log2(self.work_bits) + 64
    }
}

pub(crate) fn ceil_log2(n: u32) -> usize {
    (32 - (n.max(1) - 1).leading_zeros()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let ctx = PrecisionContext::new(100).unwrap();
        // 25 decimal digits of guard = 84 bits
        assert_eq!(ctx.guard_bits, 84);
        assert_eq!(ctx.work_bits, 333 + 84);
        assert_eq!(ctx.eps_conv().get_exp(), Some(-(ctx.work_bits as i32) + 3));
        assert_eq!(ctx.eps_tie().get_exp(), Some(-(ctx.work_bits as i32) + 9));

        let small = PrecisionContext::new(20).unwrap();
        assert_eq!(small.guard_bits, 64);
        assert_eq!(small.work_bits, 67 + 64);
    }

    #[test]
    fn zero_digits_rejected() {
        assert!(PrecisionContext::new(0).is_err());
    }

    #[test]
    fn log2_ceiling() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(417), 9);
        assert_eq!(ceil_log2(512), 9);
        assert_eq!(ceil_log2(513), 10);
    }
}
