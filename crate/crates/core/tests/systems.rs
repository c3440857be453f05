mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::fixture;
use spacetime::system::{
    random_system, run_system, run_system_fsm, run_with_jitter, JitterMode, JitterSpec, Realign,
    SystemConfig,
};
use spacetime::value::{Finite, TValue};

fn half_adder_over_all_pairs() -> SystemConfig {
    let mut src = String::from(
        "k=4\ncycles=16\n[segments]\nha = non-st half_adder.tbl\n[wiring]\nA -> ha.A\nB -> ha.B\n[inputs]\n",
    );
    for c in 0..16 {
        src += &format!("{c}: A={} B={}\n", c / 4, c % 4);
    }
    let dir = fixture("");
    SystemConfig::parse(&src, |p| {
        std::fs::read_to_string(dir.join(p))
            .map_err(|e| spacetime::error::Error::Config(e.to_string()))
    })
    .unwrap()
}

#[test]
fn half_adder_fsm_matches_ideal_on_every_pair() {
    let cfg = half_adder_over_all_pairs();
    let ideal = run_system(&cfg).unwrap();
    for c in 0..16u32 {
        let (a, b) = (c / 4, c % 4);
        assert_eq!(ideal.sequence("ha.S")[c as usize], Finite((a + b) % 4));
        assert_eq!(ideal.sequence("ha.Cout")[c as usize], Finite((a + b) / 4));
    }
    let fsm = run_system_fsm(&cfg).unwrap();
    assert_eq!(fsm, ideal);
    assert_eq!(fsm.violations().count(), 0);
}

#[test]
fn random_systems_fsm_matches_ideal() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..100 {
        let cfg = random_system(&mut rng, 4, 6, 3, i % 2 == 0);
        let ideal = run_system(&cfg).unwrap();
        let fsm = run_system_fsm(&cfg).unwrap();
        assert_eq!(fsm.to_tsv(), ideal.to_tsv(), "system {i}");
    }
}

#[test]
fn runs_are_deterministic() {
    let cfg = SystemConfig::load(fixture("running_sum.sys")).unwrap();
    assert_eq!(run_system(&cfg).unwrap(), run_system(&cfg).unwrap());
    assert_eq!(run_system_fsm(&cfg).unwrap(), run_system_fsm(&cfg).unwrap());
    assert_eq!(
        run_with_jitter(&cfg).unwrap(),
        run_with_jitter(&cfg).unwrap()
    );
}

#[test]
fn boundary_values_are_in_the_finite_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..50 {
        let cfg = random_system(&mut rng, 4, 5, 3, true);
        for c in run_system(&cfg).unwrap().cycles {
            assert!(c.outputs.values().all(|v: &TValue| v.normalize(4) == *v));
        }
    }
}

#[test]
fn realignment_holds_whenever_paths_stay_under_half_a_unit() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..60 {
        let depth = 1 + i % 4;
        let mut cfg = random_system(&mut rng, 4, 6, depth, false);
        cfg.jitter = Some(JitterSpec {
            epsilon: 0.49 / depth as f64,
            seed: i as u64,
            mode: JitterMode::Random,
        });
        let r = run_with_jitter(&cfg).unwrap();
        assert!(r.drift.path_bound < 0.5);
        assert_eq!(r.trace, r.ideal, "system {i}");
    }
}

/// The minimized half adder has paths of up to nine jittered gates, so at
/// ±0.2 per gate some offset draws push a spike past half a unit before it
/// reaches the realigning output gate. Every mismatch must come from such a
/// draw; with a smaller bound no mismatch occurs.
#[test]
fn half_adder_jitter_mismatches_need_a_long_path() {
    let base = half_adder_over_all_pairs();
    let mut clean = 0;
    for seed in 0..40 {
        let cfg = SystemConfig {
            jitter: Some(JitterSpec {
                epsilon: 0.2,
                seed,
                mode: JitterMode::Random,
            }),
            ..base.clone()
        };
        let r = run_with_jitter(&cfg).unwrap();
        assert!(r.drift.path_bound >= 0.5 || r.trace == r.ideal);
        if r.trace == r.ideal {
            clean += 1;
        }
    }
    assert!(clean > 0);
    let cfg = SystemConfig {
        jitter: Some(JitterSpec {
            epsilon: 0.05,
            seed: 1,
            mode: JitterMode::Max,
        }),
        ..base
    };
    let r = run_with_jitter(&cfg).unwrap();
    assert!(r.drift.path_bound < 0.5);
    assert_eq!(r.trace, r.ideal);
}

#[test]
fn explicit_realignment_list() {
    let chain = SystemConfig::load(fixture("drift_chain.sys")).unwrap();
    let every: Vec<(String, String)> = (0..6).map(|i| (format!("s{i}"), "Y".to_string())).collect();
    let all = run_with_jitter(&SystemConfig {
        realign: Realign::Lines(every),
        ..chain.clone()
    })
    .unwrap();
    assert_eq!(all.trace, all.ideal);
    let alternate = (1..6)
        .step_by(2)
        .map(|i| (format!("s{i}"), "Y".to_string()))
        .collect();
    let half = run_with_jitter(&SystemConfig {
        realign: Realign::Lines(alternate),
        ..chain.clone()
    })
    .unwrap();
    assert_eq!(half.drift.mismatches, 0, "2 x 0.2 stays under half a unit");
    let once = run_with_jitter(&SystemConfig {
        realign: Realign::Lines(vec![("s2".into(), "Y".into())]),
        ..chain
    })
    .unwrap();
    assert!(once.drift.mismatches > 0, "s3..s5 accumulate 0.6");
}

#[test]
fn trace_file_is_stable() {
    let cfg = SystemConfig::load(fixture("running_sum.sys")).unwrap();
    let tsv = run_system(&cfg).unwrap().to_tsv();
    let expected = "\
cycle\tline\tvalue
0\tA0\t0
0\tB\t1
0\tadder.Cout\t0
0\tadder.S\t1
0\tcarry.Y\tinf
1\tA0\tinf
1\tB\t1
1\tadder.Cout\t0
1\tadder.S\t2
1\tcarry.Y\t0
2\tA0\tinf
2\tB\t1
2\tadder.Cout\t0
2\tadder.S\t3
2\tcarry.Y\t0
";
    assert_eq!(tsv, expected);
}
