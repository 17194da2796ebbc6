// SPDX-License-Identifier: Apache-2.0

//! One entry point over the functional models of every architecture.

use crate::arith::{check_len, ArchKind, Product16, VectorJob};
use crate::baseline::{
    booth_multiply, booth_traced, shift_add_multiply, shift_add_traced, wallace_multiply,
};
use crate::lut_array::LutArrayMultiplier;
use crate::nibble::{nibble_multiply, nibble_multiply_traced, NibbleMode};
use crate::trace::{CycleTrace, TraceEvent};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalRun {
    pub products: Vec<Product16>,
    pub cycles: u64,
}

/// Runs `job` through the functional model of `arch`. `mode` only applies to
/// the nibble multiplier.
pub fn multiply(arch: ArchKind, job: &VectorJob, mode: NibbleMode) -> Result<FunctionalRun> {
    let run = match arch {
        ArchKind::ShiftAdd => {
            let r = shift_add_multiply(job)?;
            (r.products, r.cycles)
        }
        ArchKind::Booth => {
            let r = booth_multiply(job)?;
            (r.products, r.cycles)
        }
        ArchKind::Nibble => {
            let r = nibble_multiply(job, mode)?;
            (r.products, r.cycles)
        }
        ArchKind::Wallace => {
            let r = wallace_multiply(job)?;
            (r.products, r.cycles)
        }
        ArchKind::LutArray => {
            let r = LutArrayMultiplier::new().multiply(job)?;
            (r.products, r.cycles)
        }
    };
    Ok(FunctionalRun {
        products: run.0,
        cycles: run.1,
    })
}

pub fn multiply_traced(
    arch: ArchKind,
    job: &VectorJob,
    mode: NibbleMode,
) -> Result<(FunctionalRun, CycleTrace)> {
    let (products, cycles, trace) = match arch {
        ArchKind::ShiftAdd => {
            let (r, t) = shift_add_traced(job)?;
            (r.products, r.cycles, t)
        }
        ArchKind::Booth => {
            let (r, t) = booth_traced(job)?;
            (r.products, r.cycles, t)
        }
        ArchKind::Nibble => {
            let (r, t) = nibble_multiply_traced(job, mode)?;
            (r.products, r.cycles, t)
        }
        ArchKind::Wallace => {
            check_len(job.len())?;
            let r = wallace_multiply(job)?;
            let mut t = CycleTrace::new(job.b().0);
            for (i, a) in job.a_ops().iter().enumerate() {
                t.push(1, i, TraceEvent::Load, u32::from(a.0));
            }
            for (i, p) in r.products.iter().enumerate() {
                t.push(1, i, TraceEvent::WriteOutput, u32::from(p.0));
            }
            (r.products, r.cycles, t)
        }
        ArchKind::LutArray => {
            let (r, t) = LutArrayMultiplier::new().multiply_traced(job)?;
            (r.products, r.cycles, t)
        }
    };
    Ok((FunctionalRun { products, cycles }, trace))
}
