//! Real-valued spike times with per-gate offsets.
//!
//! Gates decide on the nearest model time of each input and emit at the
//! real time of the input that triggered them plus their own offset, so
//! offsets add up along the path a spike takes. Gamma-derived taps (delays
//! and `next` gates fed only by the reference) come from the clock and are
//! exact.
//!
//! A realignment gate is a max against a unit clock whose ticks sit half a
//! unit after each model time: it emits on the first tick at or after the
//! data spike, and that fixed half-unit latency is dropped from the model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{drive, quantize, run_system, CycleTrace, Evaluated, JitterMode, Real, SystemConfig};
use crate::error::Result;
use crate::network::{CheckedNetlist, GateOp};
use crate::value::{apply_binary, BinOp, Finite, Inf};

#[derive(Clone, Debug, PartialEq)]
pub struct DriftReport {
    /// Largest distance between a jittered output and its ideal time, taken
    /// before realignment.
    pub max_deviation: f64,
    /// Cycle and `segment.line` where that happened.
    pub worst: Option<(u32, String)>,
    /// Trace entries that differ from the jitter-free run.
    pub mismatches: usize,
    /// Largest sum of offset magnitudes along any path within one segment.
    pub path_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JitterRun {
    pub trace: CycleTrace,
    pub ideal: CycleTrace,
    pub drift: DriftReport,
    /// Offset of every gate, per segment in declaration order.
    pub offsets: Vec<Vec<f64>>,
}

/// Gates driven only by the reference through delays.
fn clock_gates(net: &CheckedNetlist) -> Vec<bool> {
    let n = net.netlist();
    let mut clock = vec![false; net.wires.len()];
    if let Some(r) = net.reference {
        clock[r] = true;
    }
    let mut out = vec![false; n.gates.len()];
    for &g in &net.order {
        let passes = matches!(
            n.gates[g].op,
            GateOp::Delay(_) | GateOp::Next | GateOp::Identity
        );
        let c = passes && clock[net.gate_in[g][0]];
        clock[net.gate_out[g]] = c;
        out[g] = c || n.gates[g].op == GateOp::Identity;
    }
    out
}

fn draw_offsets(cfg: &SystemConfig, nets: &[CheckedNetlist]) -> Vec<Vec<f64>> {
    let (eps, seed, mode) = cfg.jitter.map_or((0.0, 0, JitterMode::Random), |j| {
        (j.epsilon, j.seed, j.mode)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    nets.iter()
        .map(|net| {
            clock_gates(net)
                .into_iter()
                .map(|exact| {
                    let d = match mode {
                        JitterMode::Random => rng.gen_range(-eps..=eps),
                        JitterMode::Max => eps,
                    };
                    if exact {
                        0.0
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect()
}

fn path_bound(net: &CheckedNetlist, offsets: &[f64]) -> f64 {
    let mut acc = vec![0.0f64; net.wires.len()];
    for &g in &net.order {
        let worst = net.gate_in[g].iter().map(|&w| acc[w]).fold(0.0, f64::max);
        acc[net.gate_out[g]] = worst + offsets[g].abs();
    }
    net.outputs.iter().map(|&w| acc[w]).fold(0.0, f64::max)
}

fn eval_real(net: &CheckedNetlist, offsets: &[f64], inputs: &[Real]) -> Vec<Real> {
    let n = net.netlist();
    let k = n.k;
    let mut vals: Vec<Real> = vec![None; net.wires.len()];
    vals[..inputs.len()].copy_from_slice(inputs);
    for &g in &net.order {
        let ins = &net.gate_in[g];
        let a = vals[ins[0]];
        let b = ins.get(1).and_then(|&i| vals[i]);
        let out = match n.gates[g].op {
            GateOp::Binary(op) => match apply_binary(op, quantize(a), quantize(b)) {
                Inf => None,
                v => {
                    let cands = [a, b]
                        .into_iter()
                        .flatten()
                        .filter(|&x| quantize(Some(x)) == v);
                    match op {
                        BinOp::Min | BinOp::XMin => cands.reduce(f64::min),
                        BinOp::Max | BinOp::XMax | BinOp::Eq => cands.reduce(f64::max),
                        _ => a,
                    }
                }
            },
            GateOp::Delay(c) => match quantize(a) {
                Finite(t) if t + c < k => a.map(|x| x + f64::from(c)),
                _ => None,
            },
            GateOp::Next => a.map(|x| x + f64::from(k)),
            GateOp::Identity => a,
            GateOp::Advance => a.map(|x| x - 1.0),
        };
        vals[net.gate_out[g]] = out.map(|x| x + offsets[g]);
    }
    net.outputs.iter().map(|&w| vals[w]).collect()
}

/// Runs the system with the configured jitter and realignment, next to a
/// jitter-free run for comparison. Without a `[jitter]` section every
/// offset is zero.
pub fn run_with_jitter(cfg: &SystemConfig) -> Result<JitterRun> {
    let cc = cfg.compile()?;
    let ideal = run_system(cfg)?;
    let offsets = draw_offsets(cfg, &cc.nets);
    let (trace, raw) = drive(cfg, &cc, &cfg.realign, |si, _, ins| {
        Ok(Evaluated {
            outputs: eval_real(&cc.nets[si], &offsets[si], ins),
            violations: Vec::new(),
        })
    })?;

    let mut drift = DriftReport {
        max_deviation: 0.0,
        worst: None,
        mismatches: 0,
        path_bound: cc
            .nets
            .iter()
            .zip(&offsets)
            .map(|(n, o)| path_bound(n, o))
            .fold(0.0, f64::max),
    };
    for (c, (got, want)) in trace.cycles.iter().zip(&ideal.cycles).enumerate() {
        drift.mismatches += got
            .outputs
            .iter()
            .filter(|(line, v)| want.outputs.get(*line) != Some(v))
            .count();
        for (line, x) in &raw[c] {
            if let (Some(x), Finite(t)) = (x, want.outputs[line]) {
                let d = (x - f64::from(t)).abs();
                if d > drift.max_deviation {
                    drift.max_deviation = d;
                    drift.worst = Some((c as u32, line.clone()));
                }
            }
        }
    }
    Ok(JitterRun {
        trace,
        ideal,
        drift,
        offsets,
    })
}
