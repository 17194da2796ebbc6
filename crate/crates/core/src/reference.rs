// SPDX-License-Identifier: Apache-2.0

//! Published post-synthesis area and power figures (28 nm, 1 GHz, 1.05 V,
//! FF corner) for side-by-side reporting. These are reference data only;
//! nothing in this crate attempts to reproduce them.

use std::fmt;

use crate::arith::ArchKind;

/// A published number, kept with the precision it was printed with.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PublishedValue {
    pub value: f64,
    pub decimals: usize,
}

impl fmt::Display for PublishedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.*}", self.decimals, self.value)
    }
}

const fn pv(value: f64, decimals: usize) -> PublishedValue {
    PublishedValue { value, decimals }
}

use ArchKind::*;

/// Area in μm², `(arch, n, value)`.
const AREA_UM2: &[(ArchKind, usize, PublishedValue)] = &[
    (ShiftAdd, 4, pv(528.57, 2)),
    (Nibble, 4, pv(463.55, 2)),
    (Booth, 4, pv(465.32, 2)),
    (Wallace, 4, pv(584.14, 2)),
    (LutArray, 4, pv(806.78, 2)),
    (Nibble, 8, pv(673.60, 2)),
    (ShiftAdd, 8, pv(982.42, 2)),
    (LutArray, 8, pv(1523.72, 2)),
    (Nibble, 16, pv(1132.29, 2)),
    (Wallace, 16, pv(2336.54, 2)),
    (LutArray, 16, pv(2954.20, 2)),
];

/// Total power in mW, `(arch, n, value)`.
const POWER_MW: &[(ArchKind, usize, PublishedValue)] = &[
    (ShiftAdd, 4, pv(0.0269, 4)),
    (Nibble, 4, pv(0.0325, 4)),
    (Booth, 4, pv(0.0257, 4)),
    (Wallace, 4, pv(0.054, 3)),
    (LutArray, 4, pv(0.0727, 4)),
    (Nibble, 8, pv(0.0442, 4)),
    (ShiftAdd, 8, pv(0.051, 3)),
    (Wallace, 8, pv(0.108, 3)),
    (LutArray, 8, pv(0.138, 3)),
    (Nibble, 16, pv(0.0605, 4)),
    (ShiftAdd, 16, pv(0.0988, 4)),
    (Wallace, 16, pv(0.216, 3)),
    (LutArray, 16, pv(0.276, 3)),
];

/// Published improvement factors over shift-add (baseline ÷ design), for
/// entries where the text states a factor.
const AREA_FACTOR: &[(ArchKind, usize, PublishedValue)] = &[
    (Nibble, 4, pv(1.14, 2)),
    (Nibble, 8, pv(1.46, 2)),
    (Nibble, 16, pv(1.69, 2)),
];

const POWER_FACTOR: &[(ArchKind, usize, PublishedValue)] = &[
    (Nibble, 4, pv(0.83, 2)),
    (Booth, 4, pv(1.05, 2)),
    (Wallace, 4, pv(0.50, 2)),
    (LutArray, 4, pv(0.37, 2)),
    (Nibble, 8, pv(1.15, 2)),
    (Wallace, 8, pv(0.47, 2)),
    (LutArray, 8, pv(0.37, 2)),
    (Nibble, 16, pv(1.63, 2)),
    (Wallace, 16, pv(0.46, 2)),
    (LutArray, 16, pv(0.36, 2)),
];

fn lookup(
    table: &[(ArchKind, usize, PublishedValue)],
    arch: ArchKind,
    n: usize,
) -> Option<PublishedValue> {
    table
        .iter()
        .find(|(a, k, _)| *a == arch && *k == n)
        .map(|&(_, _, v)| v)
}

/// Published figures for one `(arch, n)` cell; absent entries are `None`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PaperReference {
    pub arch: ArchKind,
    pub n: usize,
    pub area_um2: Option<PublishedValue>,
    pub power_mw: Option<PublishedValue>,
    pub area_factor: Option<PublishedValue>,
    pub power_factor: Option<PublishedValue>,
}

impl PaperReference {
    pub fn get(arch: ArchKind, n: usize) -> PaperReference {
        PaperReference {
            arch,
            n,
            area_um2: lookup(AREA_UM2, arch, n),
            power_mw: lookup(POWER_MW, arch, n),
            area_factor: lookup(AREA_FACTOR, arch, n),
            power_factor: lookup(POWER_FACTOR, arch, n),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.area_um2.is_none() && self.power_mw.is_none()
    }
}

/// Operand counts the published sweep covers.
pub const PUBLISHED_N: [usize; 3] = [4, 8, 16];
