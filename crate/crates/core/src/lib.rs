// SPDX-License-Identifier: Apache-2.0

//! Bit-accurate and cycle-accurate models of 8-bit vector-scalar multipliers.
//!
//! Two nibble-decomposed designs are modelled alongside three baselines:
//!
//! * [`lut_array`]: a single-cycle array of lookup multipliers that slice
//!   precomputed result strings selected by the scalar's nibbles.
//! * [`nibble`]: a precompute-reuse multiplier that builds scaled copies of
//!   each element with shift-and-add logic, one scalar nibble per cycle.
//! * [`baseline`]: shift-add, radix-4 Booth and Wallace-tree multipliers.
//!
//! Every architecture also has a gate-level realization in [`netlist`], with
//! area, depth and switching-activity proxies and a structural Verilog
//! writer/reader.

pub mod arith;
pub mod baseline;
pub mod engine;
pub mod lut_array;
pub mod netlist;
pub mod nibble;
pub mod reference;
pub mod trace;

pub use arith::{
    oracle_mul, split_nibbles, vector_latency, ArchKind, LatencyModel, Nibble, Operand8, Product16,
    VectorJob, MAX_VECTOR_LEN,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("vector job is empty")]
    EmptyJob,
    #[error("vector job has {0} elements, at most {max} supported", max = MAX_VECTOR_LEN)]
    JobTooLong(usize),
    #[error("nibble value {0} out of range 0..16")]
    NibbleOutOfRange(u8),
    #[error("unknown architecture `{0}`")]
    UnknownArch(String),
    #[error("lane count {lanes} unsupported for {n} elements")]
    BadLanes { lanes: usize, n: usize },
    #[error("engine already finished")]
    EngineFinished,
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("netlist: {0}")]
    Netlist(String),
    #[error("combinational cycle through net {0}")]
    CombinationalCycle(String),
    #[error("stimulus width mismatch: {0}")]
    WidthMismatch(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("verilog parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
