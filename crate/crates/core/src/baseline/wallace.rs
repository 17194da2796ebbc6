// SPDX-License-Identifier: Apache-2.0

use super::BaselineRun;
use crate::arith::{check_len, Operand8, Product16, VectorJob};
use crate::Result;

/// Column width of the 8×8 partial-product matrix plus carries.
pub const WALLACE_COLUMNS: usize = 16;

/// One row of the partial-product matrix; `None` marks an empty position.
pub type Row<B> = Vec<Option<B>>;

/// Adders used by the reduction, over whatever a "bit" is for the caller.
pub trait BitAlgebra {
    type Bit: Clone;

    /// Returns `(sum, carry)`.
    fn full_add(&mut self, a: Self::Bit, b: Self::Bit, c: Self::Bit) -> (Self::Bit, Self::Bit);
    /// Returns `(sum, carry)`.
    fn half_add(&mut self, a: Self::Bit, b: Self::Bit) -> (Self::Bit, Self::Bit);
}

/// Shape of one carry-save layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayerSpec {
    pub rows_in: usize,
    pub rows_out: usize,
    pub full_adders: usize,
    pub half_adders: usize,
}

fn compress3<A: BitAlgebra>(
    alg: &mut A,
    rows: [&Row<A::Bit>; 3],
    width: usize,
    spec: &mut LayerSpec,
) -> (Row<A::Bit>, Row<A::Bit>) {
    let mut sum = vec![None; width];
    let mut carry = vec![None; width];
    for col in 0..width {
        let bits: Vec<A::Bit> = rows.iter().filter_map(|r| r[col].clone()).collect();
        let (s, c) = match bits.len() {
            3 => {
                spec.full_adders += 1;
                let (s, c) = alg.full_add(bits[0].clone(), bits[1].clone(), bits[2].clone());
                (Some(s), Some(c))
            }
            2 => {
                spec.half_adders += 1;
                let (s, c) = alg.half_add(bits[0].clone(), bits[1].clone());
                (Some(s), Some(c))
            }
            1 => (Some(bits[0].clone()), None),
            _ => (None, None),
        };
        sum[col] = s;
        if col + 1 < width {
            carry[col + 1] = c;
        }
    }
    (sum, carry)
}

/// Reduces rows three at a time until two remain; leftover rows of a layer
/// pass through unchanged. Returns the two final rows and the layer shapes.
pub fn wallace_reduce<A: BitAlgebra>(
    alg: &mut A,
    mut rows: Vec<Row<A::Bit>>,
) -> (Vec<Row<A::Bit>>, Vec<LayerSpec>) {
    let width = rows.first().map_or(0, Vec::len);
    let mut layers = Vec::new();
    while rows.len() > 2 {
        let mut spec = LayerSpec {
            rows_in: rows.len(),
            rows_out: 0,
            full_adders: 0,
            half_adders: 0,
        };
        let mut next = Vec::new();
        let mut chunks = rows.chunks_exact(3);
        for group in &mut chunks {
            let (s, c) = compress3(alg, [&group[0], &group[1], &group[2]], width, &mut spec);
            next.push(s);
            next.push(c);
        }
        next.extend(chunks.remainder().iter().cloned());
        spec.rows_out = next.len();
        layers.push(spec);
        rows = next;
    }
    (rows, layers)
}

/// Ripple carry-propagate addition of the final two rows; carry out of the
/// top column is dropped.
pub fn carry_propagate<A: BitAlgebra>(
    alg: &mut A,
    x: &Row<A::Bit>,
    y: &Row<A::Bit>,
) -> Vec<Option<A::Bit>> {
    let mut out = Vec::with_capacity(x.len());
    let mut carry: Option<A::Bit> = None;
    for col in 0..x.len() {
        let bits: Vec<A::Bit> = [x[col].clone(), y[col].clone(), carry.take()]
            .into_iter()
            .flatten()
            .collect();
        let (s, c) = match bits.len() {
            3 => {
                let (s, c) = alg.full_add(bits[0].clone(), bits[1].clone(), bits[2].clone());
                (Some(s), Some(c))
            }
            2 => {
                let (s, c) = alg.half_add(bits[0].clone(), bits[1].clone());
                (Some(s), Some(c))
            }
            1 => (Some(bits[0].clone()), None),
            _ => (None, None),
        };
        out.push(s);
        carry = c;
    }
    out
}

/// The 8×8 AND matrix: row `i` holds `a[j] & b[i]` at column `i + j`.
pub fn partial_product_rows<B: Clone>(mut and: impl FnMut(usize, usize) -> B) -> Vec<Row<B>> {
    (0..8)
        .map(|i| {
            let mut row = vec![None; WALLACE_COLUMNS];
            for j in 0..8 {
                row[i + j] = Some(and(i, j));
            }
            row
        })
        .collect()
}

struct Presence;

impl BitAlgebra for Presence {
    type Bit = ();
    fn full_add(&mut self, _: (), _: (), _: ()) -> ((), ()) {
        ((), ())
    }
    fn half_add(&mut self, _: (), _: ()) -> ((), ()) {
        ((), ())
    }
}

struct Boolean;

impl BitAlgebra for Boolean {
    type Bit = bool;
    fn full_add(&mut self, a: bool, b: bool, c: bool) -> (bool, bool) {
        (a ^ b ^ c, (a & b) | (c & (a ^ b)))
    }
    fn half_add(&mut self, a: bool, b: bool) -> (bool, bool) {
        (a ^ b, a & b)
    }
}

/// Structure of the 8×8 Wallace tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallaceNet {
    /// Partial-product bits (AND gates).
    pub partial_bits: usize,
    pub layers: Vec<LayerSpec>,
    /// Full and half adders in the final carry-propagate adder.
    pub cpa_full_adders: usize,
    pub cpa_half_adders: usize,
}

impl WallaceNet {
    pub fn standard() -> WallaceNet {
        let rows = partial_product_rows(|_, _| ());
        let (rest, layers) = wallace_reduce(&mut Presence, rows);
        let mut counter = CountingPresence::default();
        carry_propagate(&mut counter, &rest[0], &rest[1]);
        WallaceNet {
            partial_bits: 64,
            layers,
            cpa_full_adders: counter.full,
            cpa_half_adders: counter.half,
        }
    }

    /// Row counts entering each layer, followed by the final count.
    pub fn row_schedule(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.layers.iter().map(|l| l.rows_in).collect();
        s.extend(self.layers.last().map(|l| l.rows_out));
        s
    }
}

#[derive(Default)]
struct CountingPresence {
    full: usize,
    half: usize,
}

impl BitAlgebra for CountingPresence {
    type Bit = ();
    fn full_add(&mut self, _: (), _: (), _: ()) -> ((), ()) {
        self.full += 1;
        ((), ())
    }
    fn half_add(&mut self, _: (), _: ()) -> ((), ()) {
        self.half += 1;
        ((), ())
    }
}

/// Bit-level evaluation through the AND matrix, carry-save layers and the
/// final adder.
pub fn wallace_product(a: Operand8, b: Operand8) -> Product16 {
    let rows = partial_product_rows(|i, j| (a.0 >> j) & 1 == 1 && (b.0 >> i) & 1 == 1);
    let (rest, _) = wallace_reduce(&mut Boolean, rows);
    let bits = carry_propagate(&mut Boolean, &rest[0], &rest[1]);
    let value = bits
        .iter()
        .enumerate()
        .filter(|(_, bit)| bit.unwrap_or(false))
        .fold(0u16, |acc, (i, _)| acc | (1 << i));
    Product16(value)
}

/// One fully combinational tree per element; the whole vector takes one cycle.
pub fn wallace_multiply(job: &VectorJob) -> Result<BaselineRun> {
    check_len(job.len())?;
    Ok(BaselineRun {
        products: job
            .a_ops()
            .iter()
            .map(|&a| wallace_product(a, job.b()))
            .collect(),
        cycles: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::oracle_mul;

    #[test]
    fn schedule_is_8_6_4_3_2() {
        let net = WallaceNet::standard();
        assert_eq!(net.row_schedule(), vec![8, 6, 4, 3, 2]);
        assert_eq!(net.layers.len(), 4);
        assert_eq!(net.partial_bits, 64);
    }

    #[test]
    fn identity_row() {
        for x in 0..=255u8 {
            assert_eq!(wallace_product(Operand8(1), Operand8(x)).0, u16::from(x));
        }
    }

    #[test]
    fn exhaustive_against_oracle() {
        for a in 0..=255u8 {
            for b in 0..=255u8 {
                assert_eq!(
                    wallace_product(Operand8(a), Operand8(b)),
                    oracle_mul(Operand8(a), Operand8(b))
                );
            }
        }
    }

    #[test]
    fn vector_is_single_cycle() {
        let job = VectorJob::from_bytes(&[0xA5; 16], 0x3C).unwrap();
        let run = wallace_multiply(&job).unwrap();
        assert_eq!(run.cycles, 1);
        assert_eq!(run.products, job.oracle());
    }
}
