// SPDX-License-Identifier: Apache-2.0

use nibmul_core::engine::{multiply, multiply_traced};
use nibmul_core::lut_array::{build_res_string, extract_slice, lm_multiply, HexLut, LmInput};
use nibmul_core::nibble::{pl, pl_config_table, NibbleMode};
use nibmul_core::trace::TraceEvent;
use nibmul_core::{oracle_mul, ArchKind, Nibble, Operand8, VectorJob};
use proptest::prelude::*;

/// All 65,536 pairs, packed 64 elements per job.
fn exhaustive_jobs() -> Vec<VectorJob> {
    (0..=255u8)
        .flat_map(|b| {
            (0..4).map(move |chunk| {
                let a: Vec<u8> = (0..64).map(|i| (chunk * 64 + i) as u8).collect();
                VectorJob::from_bytes(&a, b).unwrap()
            })
        })
        .collect()
}

#[test]
fn every_architecture_is_exhaustively_exact() {
    let jobs = exhaustive_jobs();
    for arch in ArchKind::ALL {
        let mut checked = 0;
        for job in &jobs {
            let run = multiply(arch, job, NibbleMode::default()).unwrap();
            assert_eq!(run.products, job.oracle(), "{arch} b={}", job.b().0);
            checked += run.products.len();
        }
        assert_eq!(checked, 65_536);
    }
}

#[test]
fn unrolled_nibble_is_exhaustively_exact() {
    for job in exhaustive_jobs() {
        let run = multiply(ArchKind::Nibble, &job, NibbleMode::unrolled(8)).unwrap();
        assert_eq!(run.products, job.oracle());
        assert_eq!(run.cycles, 8);
    }
}

#[test]
fn res_strings_and_precompute_are_exact() {
    for b in Nibble::all() {
        let s = build_res_string(b);
        for a in Nibble::all() {
            assert_eq!(
                u32::from(extract_slice(s, a)),
                u32::from(a.value()) * u32::from(b.value())
            );
        }
    }
    let table = pl_config_table();
    for a in 0..=255u8 {
        for n in Nibble::all() {
            assert_eq!(
                u32::from(pl(Operand8(a), n)),
                u32::from(a) * u32::from(n.value())
            );
            assert!(table[usize::from(n.value())].additions() <= 3);
        }
    }
}

#[test]
fn nibble_trace_shape() {
    let job = VectorJob::from_bytes(&[1, 2, 3, 4, 5, 6, 7, 8], 0xA5).unwrap();
    let (run, trace) = multiply_traced(ArchKind::Nibble, &job, NibbleMode::sequential()).unwrap();
    assert_eq!(run.cycles, 16);
    let writes = trace.writes();
    assert_eq!(writes.len(), 8);
    for (k, (cycle, idx, value)) in writes.into_iter().enumerate() {
        assert_eq!(cycle, 2 * (k as u64 + 1));
        assert_eq!(idx, k);
        assert_eq!(value, u32::from(job.oracle()[k].0));
    }
    let nibble_events = trace
        .records
        .iter()
        .filter(|r| matches!(r.event, TraceEvent::Nibble0 | TraceEvent::Nibble1))
        .count();
    assert_eq!(nibble_events, 16);
}

#[test]
fn lut_array_and_shift_add_trace_shape() {
    let job = VectorJob::from_bytes(&[9; 8], 9).unwrap();
    let (_, trace) = multiply_traced(ArchKind::LutArray, &job, NibbleMode::default()).unwrap();
    assert!(trace.writes().iter().all(|w| w.0 == 1));
    assert_eq!(trace.writes().len(), 8);

    let (_, trace) = multiply_traced(
        ArchKind::ShiftAdd,
        &VectorJob::single(200, 3),
        NibbleMode::default(),
    )
    .unwrap();
    assert_eq!(trace.writes(), vec![(8, 0, 600)]);
}

#[test]
fn latency_scales_with_length() {
    let mode = NibbleMode::default();
    let job = VectorJob::from_bytes(&[0x55; 16], 0x33).unwrap();
    let cycles = |arch| multiply(arch, &job, mode).unwrap().cycles;
    assert_eq!(cycles(ArchKind::Nibble), 32);
    assert_eq!(cycles(ArchKind::ShiftAdd), 128);
    assert_eq!(cycles(ArchKind::Booth), 64);
    assert_eq!(cycles(ArchKind::Wallace), 1);
    assert_eq!(cycles(ArchKind::LutArray), 1);
}

#[test]
fn bad_jobs_are_rejected() {
    assert!(VectorJob::from_bytes(&[], 1).is_err());
    assert!(VectorJob::from_bytes(&[0; 65], 1).is_err());
    let job = VectorJob::from_bytes(&[1; 4], 1).unwrap();
    assert!(multiply(ArchKind::Nibble, &job, NibbleMode::unrolled(5)).is_err());
    assert!(multiply(ArchKind::Nibble, &job, NibbleMode::unrolled(0)).is_err());
}

proptest! {
    #[test]
    fn random_jobs_match_oracle(
        a in prop::collection::vec(any::<u8>(), 1..=64),
        b in any::<u8>(),
        lanes in 1usize..=64,
        unrolled in any::<bool>(),
    ) {
        let job = VectorJob::from_bytes(&a, b).unwrap();
        let lanes = lanes.min(a.len());
        let mode = if unrolled { NibbleMode::unrolled(lanes) } else { NibbleMode::sequential().with_lanes(lanes) };
        for arch in ArchKind::ALL {
            let run = multiply(arch, &job, mode).unwrap();
            prop_assert_eq!(&run.products, &job.oracle());
        }
        let run = multiply(ArchKind::Nibble, &job, mode).unwrap();
        prop_assert_eq!(run.cycles, mode.cycles(a.len()).unwrap());
    }

    #[test]
    fn lookup_multiplier_packs_two_products(lo in any::<u8>(), hi in any::<u8>(), b in any::<u8>()) {
        let out = lm_multiply(LmInput::new(Operand8(lo), Operand8(hi), Operand8(b)), &HexLut::new());
        prop_assert_eq!(out.out1, oracle_mul(Operand8(lo), Operand8(b)));
        prop_assert_eq!(out.out2, oracle_mul(Operand8(hi), Operand8(b)));
    }
}
