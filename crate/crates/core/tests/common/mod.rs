#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use spacetime::network::{GateOp, Netlist};
use spacetime::synth::FunctionTable;
use spacetime::value::{BinOp, Finite, Inf, TValue};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn random_value(rng: &mut impl Rng, k: u32) -> TValue {
    match rng.gen_range(0..=k) {
        t if t == k => Inf,
        t => Finite(t),
    }
}

const OPS: [BinOp; 5] = [BinOp::Min, BinOp::Max, BinOp::Lt, BinOp::Le, BinOp::Eq];

/// Feedforward netlist over min, max, lt, le, eq and delays with
/// `1..=max_inputs` inputs and `1..=max_gates` gates.
pub fn random_netlist(rng: &mut impl Rng, k: u32, max_inputs: usize, max_gates: usize) -> Netlist {
    let q = rng.gen_range(1..=max_inputs);
    let mut net = Netlist::new(k);
    let mut wires = Vec::new();
    for i in 0..q {
        let name = format!("x{i}");
        net = net.input(&name);
        wires.push(name);
    }
    let n = rng.gen_range(1..=max_gates);
    for g in 0..n {
        let name = format!("g{g}");
        let a = wires.choose(rng).unwrap().clone();
        if rng.gen_bool(0.2) {
            net = net.gate(&name, GateOp::Delay(rng.gen_range(1..k)), &[&a]);
        } else {
            let b = wires.choose(rng).unwrap().clone();
            net = net.gate(&name, GateOp::Binary(*OPS.choose(rng).unwrap()), &[&a, &b]);
        }
        wires.push(name);
    }
    let last = wires.last().unwrap().clone();
    net = net.output_from("y", &last);
    let other = wires.choose(rng).unwrap().clone();
    net.output_from("z", &other)
}

/// Total table with random outputs (inf included).
pub fn random_table(
    rng: &mut impl Rng,
    k: u32,
    inputs: &[&str],
    outputs: &[&str],
) -> FunctionTable {
    let t = FunctionTable::from_fn(k, inputs, outputs, |_| vec![Inf; outputs.len()]);
    let rows = t
        .rows
        .iter()
        .map(|(x, _)| {
            (
                x.clone(),
                outputs.iter().map(|_| random_value(rng, k)).collect(),
            )
        })
        .collect();
    FunctionTable { rows, ..t }
}
