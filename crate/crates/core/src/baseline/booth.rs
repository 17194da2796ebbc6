// SPDX-License-Identifier: Apache-2.0

use super::{run_serial, BaselineRun, SerialDatapath};
use crate::arith::{Operand8, Product16, VectorJob};
use crate::trace::CycleTrace;
use crate::Result;

/// Width of the signed Booth accumulator.
pub const BOOTH_ACC_BITS: u32 = 18;

/// Radix-4 recoding of an unsigned 8-bit multiplier.
///
/// The four digits encode the two's-complement reading of the byte,
/// `b - 256 * b[7]`; `correction` carries the `256 * b[7]` term that restores
/// the unsigned value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoothDigits {
    pub digits: [i8; 4],
    pub correction: bool,
}

impl BoothDigits {
    /// `Σ dᵢ·4ⁱ + 256·correction`.
    pub fn value(&self) -> i32 {
        let signed: i32 = self
            .digits
            .iter()
            .enumerate()
            .map(|(i, &d)| i32::from(d) << (2 * i))
            .sum();
        signed + if self.correction { 256 } else { 0 }
    }
}

pub fn booth_recode(b: Operand8) -> BoothDigits {
    let bit = |i: i32| -> i8 {
        if i < 0 {
            0
        } else {
            ((b.0 >> i) & 1) as i8
        }
    };
    let digits = std::array::from_fn(|k| {
        let k = k as i32;
        -2 * bit(2 * k + 1) + bit(2 * k) + bit(2 * k - 1)
    });
    BoothDigits {
        digits,
        correction: b.0 & 0x80 != 0,
    }
}

fn wrap_signed(v: i32, bits: u32) -> i32 {
    let shift = 32 - bits;
    (v << shift) >> shift
}

/// Sequential radix-4 Booth datapath, two multiplier bits per cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoothState {
    pub multiplicand: Operand8,
    pub recoded_digits: BoothDigits,
    /// Signed accumulator, kept to [`BOOTH_ACC_BITS`] bits.
    pub acc: i32,
    pub step: u8,
}

impl SerialDatapath for BoothState {
    const STEPS: u8 = 4;

    fn load(a: Operand8, b: Operand8) -> Self {
        BoothState {
            multiplicand: a,
            recoded_digits: booth_recode(b),
            acc: 0,
            step: 0,
        }
    }

    fn step(&mut self) -> u32 {
        assert!(
            self.step < Self::STEPS,
            "Booth datapath stepped past completion"
        );
        let a = i32::from(self.multiplicand.0);
        let k = usize::from(self.step);
        if k == 0 {
            // Unsigned correction enters as the accumulator's initial value.
            self.acc = if self.recoded_digits.correction {
                a << 8
            } else {
                0
            };
        }
        let term = (i32::from(self.recoded_digits.digits[k]) * a) << (2 * k);
        let next = self.acc + term;
        debug_assert_eq!(
            next,
            wrap_signed(next, BOOTH_ACC_BITS),
            "accumulator overflow"
        );
        self.acc = wrap_signed(next, BOOTH_ACC_BITS);
        self.step += 1;
        (self.acc as u32) & ((1 << BOOTH_ACC_BITS) - 1)
    }

    fn product(&self) -> Product16 {
        Product16(self.acc as u16)
    }
}

pub fn booth_multiply(job: &VectorJob) -> Result<BaselineRun> {
    run_serial::<BoothState>(job, None)
}

pub fn booth_traced(job: &VectorJob) -> Result<(BaselineRun, CycleTrace)> {
    let mut trace = CycleTrace::new(job.b().0);
    let run = run_serial::<BoothState>(job, Some(&mut trace))?;
    Ok((run, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::oracle_mul;

    fn single(a: u8, b: u8) -> u16 {
        booth_multiply(&VectorJob::single(a, b)).unwrap().products[0].0
    }

    #[test]
    fn examples() {
        assert_eq!(single(0xFF, 0xFF), 0xFE01);
        assert_eq!(single(0x80, 0x02), 0x0100);
        assert_eq!(booth_recode(Operand8(0x02)).digits, [-2, 1, 0, 0]);
        let run = booth_multiply(&VectorJob::from_bytes(&[7; 8], 9).unwrap()).unwrap();
        assert_eq!(run.cycles, 32);
    }

    #[test]
    fn recoding_reconstructs_every_multiplier() {
        for b in 0..=255u8 {
            let d = booth_recode(Operand8(b));
            assert!(d.digits.iter().all(|&x| (-2..=2).contains(&x)));
            assert_eq!(d.value(), i32::from(b));
        }
    }

    #[test]
    fn exhaustive_against_oracle() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                let mut dp = BoothState::load(Operand8(a), Operand8(b));
                for _ in 0..4 {
                    dp.step();
                    assert!(dp.acc >= -(1 << 17) && dp.acc < (1 << 17));
                }
                assert_eq!(dp.product(), oracle_mul(Operand8(a), Operand8(b)));
            }
        }
    }
}
