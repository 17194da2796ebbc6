// SPDX-License-Identifier: Apache-2.0

//! Run configuration: defaults, `key=value` files and flag overrides.
//!
//! Config files hold one `key = value` per line; `#` starts a comment.
//! Keys: `arch`, `n`, `mode`, `lanes`, `seed`, `stimulus`, `out`. List values
//! are comma separated.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use nibmul_core::nibble::{NibbleMode, NibbleModeKind};
use nibmul_core::{ArchKind, MAX_VECTOR_LEN};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stimulus {
    /// Every `(a, b)` pair.
    Exhaustive,
    /// This many seeded random jobs per vector length.
    Random(usize),
}

impl FromStr for Stimulus {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Stimulus, HarnessError> {
        let s = s.trim();
        if s == "exhaustive" {
            return Ok(Stimulus::Exhaustive);
        }
        s.strip_prefix("random:")
            .and_then(|c| c.parse().ok())
            .filter(|&c| c > 0)
            .map(Stimulus::Random)
            .ok_or_else(|| {
                HarnessError::Usage(format!(
                    "bad stimulus `{s}`, expected `exhaustive` or `random:COUNT`"
                ))
            })
    }
}

impl fmt::Display for Stimulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stimulus::Exhaustive => f.write_str("exhaustive"),
            Stimulus::Random(c) => write!(f, "random:{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub archs: Vec<ArchKind>,
    pub ns: Vec<usize>,
    pub mode: NibbleMode,
    pub seed: u64,
    /// `None` leaves the choice to the command.
    pub stimulus: Option<Stimulus>,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            archs: ArchKind::ALL.to_vec(),
            ns: vec![4, 8, 16],
            mode: NibbleMode::sequential(),
            seed: 1,
            stimulus: None,
            out: PathBuf::from("out"),
        }
    }
}

fn usage(msg: String) -> HarnessError {
    HarnessError::Usage(msg)
}

pub fn parse_archs(value: &str) -> Result<Vec<ArchKind>, HarnessError> {
    let mut archs = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let a: ArchKind = item
            .parse()
            .map_err(|e: nibmul_core::Error| usage(e.to_string()))?;
        if !archs.contains(&a) {
            archs.push(a);
        }
    }
    if archs.is_empty() {
        return Err(usage("empty architecture list".into()));
    }
    Ok(archs)
}

pub fn parse_ns(value: &str) -> Result<Vec<usize>, HarnessError> {
    let ns = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| usage(format!("bad vector length `{s}`")))
        })
        .collect::<Result<Vec<usize>, _>>()?;
    if ns.is_empty() {
        return Err(usage("empty vector length list".into()));
    }
    Ok(ns)
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let value = value.trim();
        match key.trim() {
            "arch" => self.archs = parse_archs(value)?,
            "n" => self.ns = parse_ns(value)?,
            "mode" => {
                self.mode.kind = NibbleModeKind::from_str(value)
                    .map_err(|_| usage(format!("bad mode `{value}`")))?
            }
            "lanes" => {
                self.mode.lanes = value
                    .parse()
                    .map_err(|_| usage(format!("bad lane count `{value}`")))?
            }
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| usage(format!("bad seed `{value}`")))?
            }
            "stimulus" => self.stimulus = Some(value.parse()?),
            "out" => self.out = PathBuf::from(value),
            other => return Err(usage(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), HarnessError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn stimulus_or(&self, default: Stimulus) -> Stimulus {
        self.stimulus.unwrap_or(default)
    }

    /// Mode passed to the nibble multiplier for vector length `n`; lanes
    /// are clamped to `n` so one lane setting can serve a sweep.
    pub fn mode_for(&self, n: usize) -> NibbleMode {
        self.mode.with_lanes(self.mode.lanes.min(n).max(1))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.mode.lanes == 0 {
            return Err(usage("lane count must be at least 1".into()));
        }
        for &n in &self.ns {
            if n == 0 || n > MAX_VECTOR_LEN {
                return Err(usage(format!(
                    "vector length {n} outside 1..={MAX_VECTOR_LEN}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides() {
        let mut c = RunConfig::default();
        c.apply_text("# sweep\narch = nibble, lutarray\nn=1,2\nmode=unrolled\nlanes=2\nseed=7 # x\nstimulus=random:5\n")
            .unwrap();
        assert_eq!(c.archs, vec![ArchKind::Nibble, ArchKind::LutArray]);
        assert_eq!(c.ns, vec![1, 2]);
        assert_eq!(c.mode, NibbleMode::unrolled(2));
        assert_eq!(c.mode_for(1), NibbleMode::unrolled(1));
        assert_eq!(c.seed, 7);
        assert_eq!(c.stimulus, Some(Stimulus::Random(5)));
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("colour=red").is_err());
        assert!(c.apply_text("arch=karatsuba").is_err());
        assert!(c.apply_text("stimulus=random:0").is_err());
        assert!(c.apply_text("just text").is_err());
        c.set("n", "0").unwrap();
        assert!(matches!(c.validate(), Err(HarnessError::Usage(_))));
    }
}
