use sssst::atam::{replay, run, StopPolicy};
use sssst::compiler::generate;
use sssst::io::{emit_tileset, parse_tileset};
use sssst::verifier::{check_local_determinism, decision_locations, fairness_test, liveness_check, safety_check, uniqueness_check};
use sssst::CodingPrefix;

#[test]
fn tileset_file_simulates_like_the_compiled_set() {
    let (ts, _) = generate().unwrap();
    let loaded = parse_tileset(&emit_tileset(&ts)).unwrap();
    for seed in 0..10 {
        let a = run(&ts, StopPolicy::StageComplete(2), seed, None).unwrap();
        let b = run(&loaded, StopPolicy::StageComplete(2), seed, None).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn every_stage_two_prefix_is_live_and_safe() {
    let (ts, _) = generate().unwrap();
    let rep = liveness_check(&ts, 2);
    assert!(rep.pass(), "{:?}", rep.failures);
    assert_eq!(rep.realized, 9);
}

#[test]
fn decisions_are_the_only_nondeterminism() {
    let (ts, _) = generate().unwrap();
    for p in CodingPrefix::all(2) {
        for seed in 0..5 {
            let t = run(&ts, StopPolicy::StageComplete(2), seed, Some(&p)).unwrap();
            let excluded: Vec<_> = decision_locations(&t).into_iter().map(|(l, _)| l).collect();
            assert_eq!(excluded.len(), 2);
            let rep = check_local_determinism(&t, &ts, &excluded).unwrap();
            assert!(rep.pass(), "{p}: {rep}");
            // Without the exclusions each decision site has two rivals.
            let strict = check_local_determinism(&t, &ts, &[]).unwrap();
            assert_eq!(strict.violations.len(), 2);
        }
        let pairs: Vec<(u64, u64)> = (0..10).map(|i| (i, 1000 + i)).collect();
        uniqueness_check(&ts, &p, &pairs).unwrap();
    }
}

#[test]
fn stage_one_choices_are_uniform() {
    let (ts, _) = generate().unwrap();
    let rep = fairness_test(&ts, 900, 2, 7).unwrap();
    assert!(rep.pass(), "{rep}");
    assert_eq!(rep.counts.iter().sum::<usize>(), 900);
}

#[test]
fn unforced_runs_replay_and_pass_safety() {
    let (ts, _) = generate().unwrap();
    for seed in 100..120 {
        let t = run(&ts, StopPolicy::StageComplete(2), seed, None).unwrap();
        assert!(safety_check(&t, &ts).unwrap().pass());
        assert_eq!(replay(&t, &ts).unwrap().len(), 16);
    }
}

#[test]
fn stage_two_north_edge_spells_the_ruler_sequence() {
    use sssst::atam::Side;
    use sssst::compiler::glue::GluePayload;
    use sssst::oracle::frontier_labels;
    let (ts, _) = generate().unwrap();
    for p in CodingPrefix::all(2) {
        let t = run(&ts, StopPolicy::StageComplete(2), 4, Some(&p)).unwrap();
        let c = replay(&t, &ts).unwrap();
        let want: Vec<u8> = frontier_labels(2).iter().map(|&k| p.get(k as usize).unwrap()).collect();
        for side in [Side::North, Side::East] {
            let got: Vec<u8> = (1..4u32)
                .map(|i| {
                    let loc = if side == Side::North { (i, 4) } else { (4, i) };
                    let g = ts.tile(c.get(loc).unwrap()).glue(side);
                    assert_eq!(g.strength, 0);
                    GluePayload::parse(&g.token).unwrap().trits[0]
                })
                .collect();
            assert_eq!(got, want, "{p} {side:?}");
        }
    }
}
