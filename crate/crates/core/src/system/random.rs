use rand::seq::SliceRandom;
use rand::Rng;

use super::{Realign, Segment, SegmentKind, Source, SystemConfig, Target};
use crate::network::{GateOp, Netlist, Volley};
use crate::synth::{minimize, table_to_minterms, FunctionTable};
use crate::value::{BinOp, Finite, Inf, TValue};

fn random_value(rng: &mut impl Rng, k: u32) -> TValue {
    match rng.gen_range(0..=k) {
        t if t == k => Inf,
        t => Finite(t),
    }
}

/// A layered st netlist on inputs `x0, x1` with outputs `y0, y1`. No path
/// passes through more than `depth` gates.
fn random_st_body(rng: &mut impl Rng, k: u32, depth: usize) -> Netlist {
    let mut net = Netlist::new(k).input("x0").input("x1");
    let mut wires: Vec<String> = vec!["x0".into(), "x1".into()];
    let mut n = 0;
    for _ in 0..depth {
        let mut layer = Vec::new();
        for _ in 0..2 {
            let name = format!("g{n}");
            n += 1;
            let a = wires.choose(rng).unwrap().clone();
            if rng.gen_bool(0.15) {
                net = net.gate(&name, GateOp::Delay(rng.gen_range(1..k)), &[&a]);
            } else {
                let op = *BinOp::ALL.choose(rng).unwrap();
                let b = wires.choose(rng).unwrap().clone();
                net = net.gate(&name, GateOp::Binary(op), &[&a, &b]);
            }
            layer.push(name);
        }
        wires.extend(layer);
    }
    let top = &wires[wires.len() - 2..];
    net.output_from("y0", &top[0]).output_from("y1", &top[1])
}

/// A minimized two-input table with random entries.
fn random_table_body(rng: &mut impl Rng, k: u32) -> Netlist {
    let t = FunctionTable::from_fn(k, &["x0", "x1"], &["y0", "y1"], |_| vec![Inf, Inf]);
    let rows = t
        .rows
        .into_iter()
        .map(|(x, _)| (x, vec![random_value(rng, k), random_value(rng, k)]))
        .collect();
    let t = FunctionTable { rows, ..t };
    minimize(&table_to_minterms(&t))
        .to_netlist()
        .expect("table constants are in range")
}

/// Two segments `s0` and `s1` with random bodies, random wiring among the
/// externals `e0, e1` and each other's outputs (self-loops included), and a
/// random input schedule. Each input has one driver. With `with_table`,
/// `s1` is a synthesized non-st segment; otherwise both are st netlists of
/// at most `depth` gates per path.
pub fn random_system(
    rng: &mut impl Rng,
    k: u32,
    cycles: u32,
    depth: usize,
    with_table: bool,
) -> SystemConfig {
    let s0 = random_st_body(rng, k, depth);
    let (s1, kind) = if with_table {
        (random_table_body(rng, k), SegmentKind::NonSt)
    } else {
        (random_st_body(rng, k, depth), SegmentKind::St)
    };
    let segments = vec![
        Segment {
            name: "s0".into(),
            kind: SegmentKind::St,
            body: s0,
        },
        Segment {
            name: "s1".into(),
            kind,
            body: s1,
        },
    ];
    let mut sources = vec![Source::External("e0".into()), Source::External("e1".into())];
    for s in ["s0", "s1"] {
        for y in ["y0", "y1"] {
            sources.push(Source::Segment {
                segment: s.into(),
                line: y.into(),
            });
        }
    }
    let mut wiring = Vec::new();
    for s in ["s0", "s1"] {
        for x in ["x0", "x1"] {
            let src = sources.choose(rng).unwrap().clone();
            wiring.push((
                src,
                Target {
                    segment: s.into(),
                    line: x.into(),
                },
            ));
        }
    }
    let schedule = (0..cycles)
        .map(|_| {
            ["e0", "e1"]
                .into_iter()
                .map(|e| (e.to_string(), random_value(rng, k)))
                .collect::<Volley>()
        })
        .collect();
    SystemConfig {
        k,
        cycles,
        segments,
        wiring,
        schedule,
        jitter: None,
        realign: Realign::Outputs,
    }
}
