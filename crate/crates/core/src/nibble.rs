// SPDX-License-Identifier: Apache-2.0

//! Precompute-reuse nibble multiplier.
//!
//! The broadcast scalar is decoded once into two nibbles. Each nibble selects
//! a precompute configuration, a fixed set of left shifts of the element that
//! are summed to form `element * nibble`. The per-element datapath adds the
//! partial value into an accumulator after aligning it by `4 * nibble_index`.
//!
//! Two modes are modelled: `Sequential` consumes one nibble per cycle and
//! `UnrolledNibbles` evaluates both nibbles in the same cycle with duplicated
//! precompute logic. Either mode can be replicated over several lanes, lane
//! `l` handling elements `l, l + lanes, l + 2 * lanes, ...`.

use std::fmt;
use std::str::FromStr;

use crate::arith::{check_len, Nibble, Operand8, Product16, VectorJob};
use crate::trace::{CycleTrace, TraceEvent};
use crate::{Error, Result};

/// Shift-add decomposition selected by one scalar nibble.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlConfig {
    nibble: Nibble,
    shifts: Vec<u8>,
}

impl PlConfig {
    /// Binary decomposition: one shifted copy of the element per set bit.
    pub fn for_nibble(nibble: Nibble) -> PlConfig {
        let shifts = (0..4u8).filter(|&i| nibble.bit(u32::from(i))).collect();
        PlConfig { nibble, shifts }
    }

    pub fn nibble(&self) -> Nibble {
        self.nibble
    }

    /// Shift amounts in ascending order.
    pub fn shifts(&self) -> &[u8] {
        &self.shifts
    }

    /// Number of adders the configuration needs.
    pub fn additions(&self) -> u32 {
        (self.shifts.len() as u32).saturating_sub(1)
    }

    /// Evaluates the configuration on an element. The result fits 12 bits.
    pub fn apply(&self, a: Operand8) -> u16 {
        self.shifts.iter().map(|&s| u16::from(a.0) << s).sum()
    }
}

pub fn pl_config_table() -> [PlConfig; 16] {
    std::array::from_fn(|n| PlConfig::for_nibble(Nibble::truncate(n as u8)))
}

/// Scaled value `a * n` built from shifts and additions only.
pub fn pl(a: Operand8, n: Nibble) -> u16 {
    PlConfig::for_nibble(n).apply(a)
}

/// The scalar decoded into the two configurations shared by every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BroadcastScalar {
    b: Operand8,
    configs: [PlConfig; 2],
}

impl BroadcastScalar {
    pub fn decode(b: Operand8) -> BroadcastScalar {
        BroadcastScalar {
            b,
            configs: [PlConfig::for_nibble(b.lo()), PlConfig::for_nibble(b.hi())],
        }
    }

    pub fn b(&self) -> Operand8 {
        self.b
    }

    pub fn config(&self, nibble_index: usize) -> &PlConfig {
        &self.configs[nibble_index]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NibbleModeKind {
    /// One scalar nibble per cycle.
    Sequential,
    /// Both scalar nibbles per cycle.
    UnrolledNibbles,
}

impl fmt::Display for NibbleModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NibbleModeKind::Sequential => f.write_str("sequential"),
            NibbleModeKind::UnrolledNibbles => f.write_str("unrolled"),
        }
    }
}

impl FromStr for NibbleModeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sequential" | "seq" => Ok(NibbleModeKind::Sequential),
            "unrolled" | "unrollednibbles" | "unrolled_nibbles" => {
                Ok(NibbleModeKind::UnrolledNibbles)
            }
            other => Err(Error::Unsupported(format!("nibble mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NibbleMode {
    pub kind: NibbleModeKind,
    pub lanes: usize,
}

impl Default for NibbleMode {
    fn default() -> Self {
        NibbleMode::sequential()
    }
}

impl NibbleMode {
    pub fn sequential() -> NibbleMode {
        NibbleMode {
            kind: NibbleModeKind::Sequential,
            lanes: 1,
        }
    }

    pub fn unrolled(lanes: usize) -> NibbleMode {
        NibbleMode {
            kind: NibbleModeKind::UnrolledNibbles,
            lanes,
        }
    }

    pub fn with_lanes(self, lanes: usize) -> NibbleMode {
        NibbleMode { lanes, ..self }
    }

    pub fn cycles_per_element(&self) -> u64 {
        match self.kind {
            NibbleModeKind::Sequential => 2,
            NibbleModeKind::UnrolledNibbles => 1,
        }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        check_len(n)?;
        if self.lanes == 0 || self.lanes > n {
            return Err(Error::BadLanes {
                lanes: self.lanes,
                n,
            });
        }
        Ok(())
    }

    /// Total cycles for an `n`-element job.
    pub fn cycles(&self, n: usize) -> Result<u64> {
        self.check(n)?;
        Ok(self.cycles_per_element() * n.div_ceil(self.lanes) as u64)
    }
}

/// Architectural state of one sequential datapath.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NibbleEngineState {
    /// Element currently in the datapath.
    pub element_index: usize,
    /// Scalar nibble consumed next (0 = low, 1 = high).
    pub nibble_index: u8,
    pub acc: u16,
    pub outputs: Vec<Option<Product16>>,
    /// Cycles elapsed.
    pub cycle: u64,
    stride: usize,
    finished: bool,
}

impl NibbleEngineState {
    /// Fresh single-lane state for an `n`-element job.
    pub fn new(n: usize) -> NibbleEngineState {
        NibbleEngineState::for_lane(0, 1, n)
    }

    fn for_lane(lane: usize, lanes: usize, n: usize) -> NibbleEngineState {
        NibbleEngineState {
            element_index: lane,
            nibble_index: 0,
            acc: 0,
            outputs: vec![None; n],
            cycle: 0,
            stride: lanes,
            finished: lane >= n,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }
}

/// Per-step observations, used for the trace and the invariant counters.
#[derive(Default)]
struct StepStats {
    max_acc: u16,
    max_additions: u32,
}

fn advance(
    state: &mut NibbleEngineState,
    a_ops: &[Operand8],
    scalar: &BroadcastScalar,
    kind: NibbleModeKind,
    stats: &mut StepStats,
    trace: Option<&mut CycleTrace>,
) -> Result<()> {
    if state.finished {
        return Err(Error::EngineFinished);
    }
    state.cycle += 1;
    let idx = state.element_index;
    let a = a_ops[idx];
    let nibbles: &[usize] = match kind {
        NibbleModeKind::Sequential => match state.nibble_index {
            0 => &[0],
            _ => &[1],
        },
        NibbleModeKind::UnrolledNibbles => &[0, 1],
    };
    let mut events = Vec::with_capacity(4);
    if nibbles[0] == 0 {
        state.acc = 0;
        events.push((TraceEvent::Load, u32::from(a.0)));
    }
    for &k in nibbles {
        let config = scalar.config(k);
        let partial = config.apply(a);
        stats.max_additions = stats.max_additions.max(config.additions());
        state.acc += partial << (4 * k);
        stats.max_acc = stats.max_acc.max(state.acc);
        let event = if k == 0 {
            TraceEvent::Nibble0
        } else {
            TraceEvent::Nibble1
        };
        events.push((event, u32::from(state.acc)));
    }
    if *nibbles.last().unwrap() == 1 {
        state.outputs[idx] = Some(Product16(state.acc));
        events.push((TraceEvent::WriteOutput, u32::from(state.acc)));
        state.nibble_index = 0;
        state.element_index += state.stride;
        state.finished = state.element_index >= a_ops.len();
    } else {
        state.nibble_index = 1;
    }
    if let Some(trace) = trace {
        for (event, value) in events {
            trace.push(state.cycle, idx, event, value);
        }
    }
    Ok(())
}

/// Advances a single-lane sequential engine by one clock cycle.
pub fn nibble_step(mut state: NibbleEngineState, job: &VectorJob) -> Result<NibbleEngineState> {
    let scalar = BroadcastScalar::decode(job.b());
    advance(
        &mut state,
        job.a_ops(),
        &scalar,
        NibbleModeKind::Sequential,
        &mut StepStats::default(),
        None,
    )?;
    Ok(state)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NibbleRun {
    pub products: Vec<Product16>,
    pub cycles: u64,
    /// Times the broadcast scalar was decoded into configurations.
    pub b_decodes: usize,
    /// Largest accumulator value seen in any lane.
    pub max_acc: u16,
    /// Most additions used by a single precompute evaluation.
    pub max_pl_additions: u32,
}

/// All lanes of one job, stepped in lockstep.
pub struct NibbleEngine<'a> {
    job: &'a VectorJob,
    mode: NibbleMode,
    scalar: BroadcastScalar,
    lanes: Vec<NibbleEngineState>,
    cycle: u64,
    stats: StepStats,
    trace: Option<CycleTrace>,
}

impl<'a> NibbleEngine<'a> {
    pub fn new(job: &'a VectorJob, mode: NibbleMode) -> Result<NibbleEngine<'a>> {
        mode.check(job.len())?;
        let lanes = (0..mode.lanes)
            .map(|l| NibbleEngineState::for_lane(l, mode.lanes, job.len()))
            .collect();
        Ok(NibbleEngine {
            job,
            mode,
            scalar: BroadcastScalar::decode(job.b()),
            lanes,
            cycle: 0,
            stats: StepStats::default(),
            trace: None,
        })
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(CycleTrace::new(self.job.b().0));
        self
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn lanes(&self) -> &[NibbleEngineState] {
        &self.lanes
    }

    pub fn is_finished(&self) -> bool {
        self.lanes.iter().all(NibbleEngineState::is_finished)
    }

    pub fn step(&mut self) -> Result<()> {
        if self.is_finished() {
            return Err(Error::EngineFinished);
        }
        self.cycle += 1;
        for lane in self.lanes.iter_mut().filter(|l| !l.finished) {
            advance(
                lane,
                self.job.a_ops(),
                &self.scalar,
                self.mode.kind,
                &mut self.stats,
                self.trace.as_mut(),
            )?;
        }
        Ok(())
    }

    pub fn run(mut self) -> Result<(NibbleRun, Option<CycleTrace>)> {
        while !self.is_finished() {
            self.step()?;
        }
        let n = self.job.len();
        let products = (0..n)
            .map(|i| self.lanes[i % self.mode.lanes].outputs[i].expect("element completed"))
            .collect();
        let run = NibbleRun {
            products,
            cycles: self.cycle,
            b_decodes: 1,
            max_acc: self.stats.max_acc,
            max_pl_additions: self.stats.max_additions,
        };
        Ok((run, self.trace))
    }
}

pub fn nibble_multiply(job: &VectorJob, mode: NibbleMode) -> Result<NibbleRun> {
    Ok(NibbleEngine::new(job, mode)?.run()?.0)
}

pub fn nibble_multiply_traced(
    job: &VectorJob,
    mode: NibbleMode,
) -> Result<(NibbleRun, CycleTrace)> {
    let (run, trace) = NibbleEngine::new(job, mode)?.with_trace().run()?;
    Ok((run, trace.expect("trace enabled")))
}
