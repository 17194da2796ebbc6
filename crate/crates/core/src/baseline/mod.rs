// SPDX-License-Identifier: Apache-2.0

//! Comparison architectures: shift-add, radix-4 Booth and Wallace tree.

mod booth;
mod shift_add;
mod wallace;

pub use booth::{
    booth_multiply, booth_recode, booth_traced, BoothDigits, BoothState, BOOTH_ACC_BITS,
};
pub use shift_add::{shift_add_multiply, shift_add_traced, ShiftAddState};
pub use wallace::{
    carry_propagate, partial_product_rows, wallace_multiply, wallace_product, wallace_reduce,
    BitAlgebra, LayerSpec, Row, WallaceNet, WALLACE_COLUMNS,
};

use crate::arith::{check_len, Operand8, Product16, VectorJob};
use crate::trace::{CycleTrace, TraceEvent};
use crate::Result;

/// Products and total cycles of one vector job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaselineRun {
    pub products: Vec<Product16>,
    pub cycles: u64,
}

/// A multi-cycle datapath that retires one element in `STEPS` cycles.
pub(crate) trait SerialDatapath: Sized {
    const STEPS: u8;

    fn load(a: Operand8, b: Operand8) -> Self;
    /// One clock cycle; returns the register value after the edge.
    fn step(&mut self) -> u32;
    fn product(&self) -> Product16;
}

/// Runs every element of the job through one datapath, back to back.
pub(crate) fn run_serial<D: SerialDatapath>(
    job: &VectorJob,
    mut trace: Option<&mut CycleTrace>,
) -> Result<BaselineRun> {
    check_len(job.len())?;
    let mut cycle = 0u64;
    let mut products = Vec::with_capacity(job.len());
    for (i, &a) in job.a_ops().iter().enumerate() {
        let mut dp = D::load(a, job.b());
        for k in 0..D::STEPS {
            cycle += 1;
            let value = dp.step();
            if let Some(t) = trace.as_deref_mut() {
                if k == 0 {
                    t.push(cycle, i, TraceEvent::Load, u32::from(a.0));
                }
                t.push(cycle, i, TraceEvent::Step(k), value);
            }
        }
        let p = dp.product();
        if let Some(t) = trace.as_deref_mut() {
            t.push(cycle, i, TraceEvent::WriteOutput, u32::from(p.0));
        }
        products.push(p);
    }
    Ok(BaselineRun {
        products,
        cycles: cycle,
    })
}
