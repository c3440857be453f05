use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cell::Cell;
use super::trace::{EventTrace, Violation};
use super::{FsmKind, FsmSpec, State};
use crate::axioms::{enumerate, AlgebraMode};
use crate::error::{Error, Result};
use crate::network::{CheckedNetlist, GateOp, Netlist};
use crate::value::{BinOp, Finite, Inf, OpKind, TValue};

/// Which tables drive the table-based gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSet {
    pub delay: FsmSpec,
    pub min: FsmSpec,
    pub max: FsmSpec,
}

impl Default for ModelSet {
    fn default() -> Self {
        ModelSet {
            delay: FsmSpec::delay(),
            min: FsmSpec::min(),
            max: FsmSpec::max(),
        }
    }
}

impl ModelSet {
    pub fn with(mut self, spec: FsmSpec) -> Self {
        match spec.kind {
            FsmKind::Delay => self.delay = spec,
            FsmKind::Min => self.min = spec,
            FsmKind::Max => self.max = spec,
        }
        self
    }

    fn cells(&self, op: GateOp) -> Result<Vec<Cell>> {
        Ok(match op {
            GateOp::Binary(BinOp::Min) => vec![Cell::table(self.min.clone())],
            GateOp::Binary(BinOp::Max) => vec![Cell::table(self.max.clone())],
            GateOp::Binary(op @ (BinOp::Eq | BinOp::Ne)) => vec![Cell::Comparator(op)],
            GateOp::Binary(op) => vec![Cell::behavioral(op)],
            GateOp::Delay(c) => vec![Cell::table(self.delay.clone()); c as usize],
            GateOp::Identity => vec![Cell::Wire],
            GateOp::Next => vec![],
            GateOp::Advance => {
                return Err(Error::Netlist("sub1 has no pulse-mode model".into()));
            }
        })
    }
}

#[derive(Clone, Debug)]
struct GateSim {
    cells: Vec<Cell>,
    /// Pending outputs of a `next` gate, in window steps.
    pending: Vec<u32>,
    is_next: bool,
    /// Downstream of a `next` gate: active past step `k` and not reset there.
    phase2: bool,
    seen: [bool; 2],
}

/// Spikes seen on each output during one window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleOutput {
    pub outputs: Vec<Vec<u32>>,
    pub violations: Vec<Violation>,
}

impl CycleOutput {
    /// Output `i` as a value; `None` when it spiked more than once.
    pub fn value(&self, i: usize) -> Option<TValue> {
        match self.outputs[i].as_slice() {
            [] => Some(Inf),
            [t] => Some(Finite(*t)),
            _ => None,
        }
    }
}

/// Gate-by-gate pulse-mode simulation of a netlist, one gamma cycle per call.
///
/// A netlist without `next` gates runs in windows of `k` steps. With them,
/// each cycle's window is `2k` steps: gates upstream of `next` see the gamma
/// reset again at step `k`, gates downstream of it are left alone so they
/// can finish with the next-cycle taps. Gate state carries from window to
/// window, so disabling resets leaves leftover i-state in place.
#[derive(Clone, Debug)]
pub struct FsmSim {
    net: CheckedNetlist,
    gates: Vec<GateSim>,
    resets: bool,
    window: u32,
    cycle: u32,
    fired: Vec<bool>,
}

impl FsmSim {
    pub fn new(net: &CheckedNetlist, models: &ModelSet, resets: bool) -> Result<FsmSim> {
        let n = net.netlist();
        let mut phase2 = vec![false; net.wires.len()];
        let mut gates: Vec<GateSim> = Vec::with_capacity(n.gates.len());
        for g in &n.gates {
            gates.push(GateSim {
                cells: models.cells(g.op)?,
                pending: Vec::new(),
                is_next: g.op == GateOp::Next,
                phase2: false,
                seen: [false; 2],
            });
        }
        for &g in &net.order {
            let p = n.gates[g].op == GateOp::Next || net.gate_in[g].iter().any(|&w| phase2[w]);
            phase2[net.gate_out[g]] = p;
            gates[g].phase2 = p && n.gates[g].op != GateOp::Next;
        }
        let window = if n.has_next() { 2 * n.k } else { n.k };
        Ok(FsmSim {
            net: net.clone(),
            gates,
            resets,
            window,
            cycle: 0,
            fired: vec![false; net.wires.len()],
        })
    }

    pub fn window(&self) -> u32 {
        self.window
    }

    pub fn cycle(&self) -> u32 {
        self.cycle
    }

    /// State of the first table cell of gate `g`.
    pub fn gate_state(&self, g: usize) -> Option<State> {
        self.gates[g].cells.first().and_then(Cell::state)
    }

    /// Runs one cycle with a single spike (or none) per input.
    pub fn run_volley(&mut self, inputs: &[TValue]) -> Result<CycleOutput> {
        let times: Vec<Vec<u32>> = inputs
            .iter()
            .map(|v| match v {
                Finite(t) => vec![*t],
                Inf => vec![],
            })
            .collect();
        self.run_cycle(&times)
    }

    /// Runs one cycle. `inputs[i]` lists the spike times on input `i`.
    pub fn run_cycle(&mut self, inputs: &[Vec<u32>]) -> Result<CycleOutput> {
        let k = self.net.k();
        if inputs.len() != self.net.input_names().len() {
            return Err(Error::Trace(format!(
                "expected {} input lines, got {}",
                self.net.input_names().len(),
                inputs.len()
            )));
        }
        if let Some(t) = inputs.iter().flatten().find(|&&t| t >= k) {
            return Err(Error::Trace(format!("spike time {t} outside 0..{}", k - 1)));
        }
        let out = self.steps(inputs, self.window);
        self.cycle += 1;
        Ok(out)
    }

    /// Step 0 of the cycle after the last one: lets pending spikes surface
    /// (or be cancelled by the reset).
    pub fn finish(&mut self) -> CycleOutput {
        let none = vec![Vec::new(); self.net.input_names().len()];
        self.steps(&none, 1)
    }

    fn steps(&mut self, inputs: &[Vec<u32>], steps: u32) -> CycleOutput {
        let k = self.net.k();
        let n = self.net.netlist();
        let mut out = CycleOutput {
            outputs: vec![Vec::new(); self.net.outputs.len()],
            violations: Vec::new(),
        };
        for t in 0..steps {
            self.fired.iter_mut().for_each(|f| *f = false);
            for (i, times) in inputs.iter().enumerate() {
                self.fired[i] = times.contains(&t);
            }
            for &g in &self.net.order {
                let gs = &mut self.gates[g];
                let reset = self.resets && (t == 0 || (t == k && !gs.phase2));
                if t == 0 {
                    gs.seen = [false; 2];
                }
                let mut ins = [false; 2];
                for (j, &w) in self.net.gate_in[g].iter().enumerate() {
                    ins[j] = self.fired[w];
                    if ins[j] {
                        if gs.seen[j] {
                            out.violations.push(Violation {
                                gate: n.gates[g].output.clone(),
                                cycle: self.cycle,
                                time: t,
                            });
                        }
                        gs.seen[j] = true;
                    }
                }
                let fire = if gs.is_next {
                    if self.resets && t == 0 {
                        gs.pending.clear();
                    }
                    if ins[0] {
                        gs.pending.push(t + k);
                    }
                    let hit = gs.pending.contains(&t);
                    gs.pending.retain(|&p| p != t);
                    hit
                } else {
                    let mut x = ins;
                    for cell in &mut gs.cells {
                        let r = cell.step(x, reset);
                        if r.error {
                            out.violations.push(Violation {
                                gate: n.gates[g].output.clone(),
                                cycle: self.cycle,
                                time: t,
                            });
                        }
                        x = [r.fire, false];
                    }
                    x[0]
                };
                self.fired[self.net.gate_out[g]] = fire;
            }
            for (o, &w) in self.net.outputs.iter().enumerate() {
                if self.fired[w] {
                    out.outputs[o].push(t);
                }
            }
        }
        out.violations.sort();
        out.violations.dedup();
        out
    }
}

/// Outcome of driving one machine with a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsmRun {
    /// Spikes on line `y`; a spike surfacing after the last cycle is listed
    /// under the following cycle number.
    pub output: EventTrace,
    pub violations: Vec<Violation>,
    /// Machine state at the end of each cycle, before the next reset.
    pub end_states: Vec<State>,
}

fn one_gate(op: GateOp, k: u32) -> Netlist {
    let mut n = Netlist::new(k).input("a");
    let mut ins = vec!["a"];
    if op.arity() == 2 {
        n = n.input("b");
        ins.push("b");
    }
    n.gate("y", op, &ins).output("y")
}

fn spec_op(kind: FsmKind) -> GateOp {
    match kind {
        FsmKind::Delay => GateOp::Delay(1),
        FsmKind::Min => GateOp::Binary(BinOp::Min),
        FsmKind::Max => GateOp::Binary(BinOp::Max),
    }
}

/// Drives a table machine with spikes on lines `a` (and `b`) over
/// `cycles` gamma cycles.
pub fn run_fsm(
    spec: &FsmSpec,
    trace: &EventTrace,
    k: u32,
    cycles: u32,
    resets: bool,
) -> Result<FsmRun> {
    let net = one_gate(spec_op(spec.kind), k).validate()?;
    trace.check_window(k)?;
    let lines = net.input_names().to_vec();
    if let Some(s) = trace.spikes().iter().find(|s| !lines.contains(&s.line)) {
        return Err(Error::Trace(format!(
            "unknown line `{}`; expected {}",
            s.line,
            lines.join(" or ")
        )));
    }
    if trace.cycles() > cycles {
        return Err(Error::Trace(format!(
            "trace has spikes in cycle {} but only {cycles} cycles run",
            trace.cycles() - 1
        )));
    }
    let mut sim = FsmSim::new(&net, &ModelSet::default().with(spec.clone()), resets)?;
    let mut run = FsmRun {
        output: EventTrace::new(),
        violations: Vec::new(),
        end_states: Vec::new(),
    };
    for c in 0..cycles {
        let ins: Vec<Vec<u32>> = lines.iter().map(|l| trace.times(c, l)).collect();
        let out = sim.run_cycle(&ins)?;
        for &t in &out.outputs[0] {
            run.output.push(c, "y", t);
        }
        run.violations.extend(out.violations);
        run.end_states.push(sim.gate_state(0).expect("table cell"));
    }
    let tail = sim.finish();
    for &t in &tail.outputs[0] {
        run.output.push(cycles, "y", t);
    }
    run.violations.extend(tail.violations);
    Ok(run)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalencePlan {
    /// Every sequence of `cycles` input tuples.
    Exhaustive { cycles: u32 },
    Random {
        sequences: usize,
        cycles: u32,
        seed: u64,
    },
}

/// First sequence on which the machine and the ideal operator disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    /// Input tuple per cycle.
    pub inputs: Vec<Vec<TValue>>,
    pub expected: Vec<TValue>,
    /// `None` where the output spiked more than once.
    pub observed: Vec<Option<TValue>>,
    pub violations: Vec<Violation>,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<TValue>| v.map_or("multiple".to_string(), |v| v.to_string());
        for (c, x) in self.inputs.iter().enumerate() {
            let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            writeln!(
                f,
                "cycle {c}: inputs ({}) expected {} observed {}",
                xs.join(","),
                self.expected[c],
                show(&self.observed[c])
            )?;
        }
        if self.observed.len() > self.inputs.len() {
            writeln!(
                f,
                "after last cycle: observed {}",
                show(&self.observed[self.inputs.len()])
            )?;
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub sequences: usize,
    pub divergence: Option<Divergence>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

fn ideal(op: OpKind, x: &[TValue], k: u32) -> TValue {
    let g = match op {
        OpKind::Binary(b) => GateOp::Binary(b),
        OpKind::Delay(c) => GateOp::Delay(c),
        OpKind::Identity => GateOp::Identity,
    };
    g.apply(
        x[0],
        x.get(1).copied().unwrap_or(Inf),
        k,
        AlgebraMode::Finite,
    )
}

fn run_sequence(
    net: &CheckedNetlist,
    models: &ModelSet,
    op: OpKind,
    seq: &[Vec<TValue>],
    k: u32,
    resets: bool,
) -> Result<Option<Divergence>> {
    let mut sim = FsmSim::new(net, models, resets)?;
    let mut expected = Vec::new();
    let mut observed = Vec::new();
    let mut violations = Vec::new();
    for x in seq {
        let out = sim.run_volley(x)?;
        expected.push(ideal(op, x, k));
        observed.push(out.value(0));
        violations.extend(out.violations);
    }
    let tail = sim.finish();
    violations.extend(tail.violations.iter().cloned());
    let stray = !tail.outputs[0].is_empty();
    if stray {
        observed.push(tail.value(0));
    }
    let same = expected.iter().zip(&observed).all(|(e, o)| Some(*e) == *o);
    if same && !stray && violations.is_empty() {
        return Ok(None);
    }
    Ok(Some(Divergence {
        inputs: seq.to_vec(),
        expected,
        observed,
        violations,
    }))
}

/// Compares a gate's pulse-mode model with its ideal operator, cycle by
/// cycle. Resets may be disabled to show what the gamma reset is for.
pub fn check_equivalence(
    op: OpKind,
    k: u32,
    plan: EquivalencePlan,
    resets: bool,
    models: &ModelSet,
) -> Result<EquivalenceReport> {
    let gop = match op {
        OpKind::Binary(b) => GateOp::Binary(b),
        OpKind::Delay(c) => GateOp::Delay(c),
        OpKind::Identity => GateOp::Identity,
    };
    let net = one_gate(gop, k).validate()?;
    let q = gop.arity();
    let mut sequences = 0;
    match plan {
        EquivalencePlan::Exhaustive { cycles } => {
            let c = cycles as usize;
            for flat in enumerate(q * c, k)? {
                let seq: Vec<Vec<TValue>> = flat.chunks(q).map(|s| s.to_vec()).collect();
                sequences += 1;
                if let Some(d) = run_sequence(&net, models, op, &seq, k, resets)? {
                    return Ok(EquivalenceReport {
                        sequences,
                        divergence: Some(d),
                    });
                }
            }
        }
        EquivalencePlan::Random {
            sequences: n,
            cycles,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..n {
                let seq: Vec<Vec<TValue>> = (0..cycles)
                    .map(|_| {
                        (0..q)
                            .map(|_| {
                                let d = rng.gen_range(0..=k);
                                if d == k {
                                    Inf
                                } else {
                                    Finite(d)
                                }
                            })
                            .collect()
                    })
                    .collect();
                sequences += 1;
                if let Some(d) = run_sequence(&net, models, op, &seq, k, resets)? {
                    return Ok(EquivalenceReport {
                        sequences,
                        divergence: Some(d),
                    });
                }
            }
        }
    }
    Ok(EquivalenceReport {
        sequences,
        divergence: None,
    })
}
