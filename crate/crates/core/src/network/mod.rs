//! Feedforward gate netlists.
//!
//! A [`Netlist`] is plain data: it can be built by hand, parsed from text, or
//! emitted from equations, and may be malformed. [`Netlist::validate`] turns
//! it into a [`CheckedNetlist`], which has resolved wire indices and a
//! topological gate order and is what every evaluator works from.

mod emit;
mod text;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

pub use emit::{expr_to_netlist, REFERENCE};

use crate::axioms::{self, AlgebraMode, Verdict};
use crate::error::{Error, Result};
use crate::value::{apply_binary, delay_finite, AlgebraConfig, BinOp, Finite, Inf, TValue};

/// One spike time per named line.
pub type Volley = BTreeMap<String, TValue>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateOp {
    Binary(BinOp),
    Delay(u32),
    Identity,
    /// The same tap one gamma cycle later: adds `k` with no cap. Carries the
    /// output constants of standard-form networks.
    Next,
    /// Emits one unit *before* its input. Not a space-time operator; it exists
    /// so negative controls can exercise the axiom checker.
    Advance,
}

impl GateOp {
    pub fn arity(self) -> usize {
        match self {
            GateOp::Binary(_) => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> String {
        match self {
            GateOp::Binary(op) => op.name().to_string(),
            GateOp::Delay(c) => format!("delay{c}"),
            GateOp::Identity => "id".to_string(),
            GateOp::Next => "next".to_string(),
            GateOp::Advance => "sub1".to_string(),
        }
    }

    pub fn from_name(s: &str) -> Option<GateOp> {
        if let Some(op) = BinOp::from_name(s) {
            return Some(GateOp::Binary(op));
        }
        match s {
            "id" => Some(GateOp::Identity),
            "next" => Some(GateOp::Next),
            "sub1" => Some(GateOp::Advance),
            _ => s
                .strip_prefix("delay")
                .and_then(|c| c.parse::<u32>().ok())
                .filter(|&c| c >= 1)
                .map(GateOp::Delay),
        }
    }

    /// Ideal zero-delay semantics of the gate.
    pub fn apply(self, a: TValue, b: TValue, k: u32, mode: AlgebraMode) -> TValue {
        match self {
            GateOp::Binary(op) => apply_binary(op, a, b),
            GateOp::Delay(c) => match mode {
                AlgebraMode::Finite => delay_finite(a, c, k),
                AlgebraMode::Unbounded => a.shifted(c),
            },
            GateOp::Identity => a,
            GateOp::Next => a.shifted(k),
            GateOp::Advance => match a {
                Finite(t) => Finite(t.saturating_sub(1)),
                Inf => Inf,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub output: String,
    pub op: GateOp,
    pub inputs: Vec<String>,
}

impl Gate {
    pub fn new(output: impl Into<String>, op: GateOp, inputs: &[&str]) -> Gate {
        Gate {
            output: output.into(),
            op,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Netlist {
    pub k: u32,
    pub inputs: Vec<String>,
    /// An input that stands for the gamma reference. It reads as time 0
    /// unless a volley binds it explicitly.
    pub reference: Option<String>,
    /// `(output line, driving wire)`.
    pub outputs: Vec<(String, String)>,
    pub gates: Vec<Gate>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    InvalidK(u32),
    DuplicateWire(String),
    Dangling {
        gate: String,
        wire: String,
    },
    Arity {
        gate: String,
        op: String,
        expected: usize,
        got: usize,
    },
    Cycle(Vec<String>),
    UnknownOutput {
        output: String,
        wire: String,
    },
    DuplicateOutput(String),
    ReferenceNotInput(String),
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::InvalidK(k) => write!(f, "k must be at least 2, got {k}"),
            Diagnostic::DuplicateWire(w) => write!(f, "wire `{w}` has more than one driver"),
            Diagnostic::Dangling { gate, wire } => {
                write!(f, "gate `{gate}` reads undriven wire `{wire}`")
            }
            Diagnostic::Arity {
                gate,
                op,
                expected,
                got,
            } => {
                write!(
                    f,
                    "gate `{gate}` ({op}) takes {expected} input(s), got {got}"
                )
            }
            Diagnostic::Cycle(ws) => write!(f, "combinational cycle through {}", ws.join(" -> ")),
            Diagnostic::UnknownOutput { output, wire } => {
                write!(f, "output `{output}` refers to unknown wire `{wire}`")
            }
            Diagnostic::DuplicateOutput(o) => write!(f, "output `{o}` declared twice"),
            Diagnostic::ReferenceNotInput(r) => {
                write!(f, "reference `{r}` is not a declared input")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "  {d}")?;
        }
        Ok(())
    }
}

impl From<Diagnostics> for Error {
    fn from(d: Diagnostics) -> Self {
        Error::Netlist(d.to_string())
    }
}

impl Netlist {
    pub fn new(k: u32) -> Netlist {
        Netlist {
            k,
            inputs: Vec::new(),
            reference: None,
            outputs: Vec::new(),
            gates: Vec::new(),
        }
    }

    pub fn input(mut self, name: &str) -> Self {
        self.inputs.push(name.to_string());
        self
    }

    pub fn gate(mut self, out: &str, op: GateOp, ins: &[&str]) -> Self {
        self.gates.push(Gate::new(out, op, ins));
        self
    }

    /// Declares an output line driven by the wire of the same name.
    pub fn output(mut self, name: &str) -> Self {
        self.outputs.push((name.to_string(), name.to_string()));
        self
    }

    pub fn output_from(mut self, name: &str, wire: &str) -> Self {
        self.outputs.push((name.to_string(), wire.to_string()));
        self
    }

    pub fn has_next(&self) -> bool {
        self.gates.iter().any(|g| g.op == GateOp::Next)
    }

    /// Number of logic gates (two-input operators).
    pub fn logic_gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g.op, GateOp::Binary(_)))
            .count()
    }

    pub fn delay_gate_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g.op, GateOp::Delay(_)))
            .count()
    }

    /// Checks structure and resolves wires. Collects every problem rather
    /// than stopping at the first.
    pub fn validate(&self) -> std::result::Result<CheckedNetlist, Diagnostics> {
        let mut diags = Vec::new();
        if self.k < 2 {
            diags.push(Diagnostic::InvalidK(self.k));
        }
        let mut wires: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut driver: Vec<Option<usize>> = Vec::new();
        for name in &self.inputs {
            if index.contains_key(name) {
                diags.push(Diagnostic::DuplicateWire(name.clone()));
                continue;
            }
            index.insert(name.clone(), wires.len());
            wires.push(name.clone());
            driver.push(None);
        }
        if let Some(r) = &self.reference {
            if !self.inputs.contains(r) {
                diags.push(Diagnostic::ReferenceNotInput(r.clone()));
            }
        }
        let mut gate_out = Vec::with_capacity(self.gates.len());
        for (gi, g) in self.gates.iter().enumerate() {
            if g.inputs.len() != g.op.arity() {
                diags.push(Diagnostic::Arity {
                    gate: g.output.clone(),
                    op: g.op.name(),
                    expected: g.op.arity(),
                    got: g.inputs.len(),
                });
            }
            if index.contains_key(&g.output) {
                diags.push(Diagnostic::DuplicateWire(g.output.clone()));
                gate_out.push(usize::MAX);
                continue;
            }
            index.insert(g.output.clone(), wires.len());
            gate_out.push(wires.len());
            wires.push(g.output.clone());
            driver.push(Some(gi));
        }
        let mut gate_in = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let mut ins = Vec::new();
            for w in &g.inputs {
                match index.get(w) {
                    Some(&i) => ins.push(i),
                    None => diags.push(Diagnostic::Dangling {
                        gate: g.output.clone(),
                        wire: w.clone(),
                    }),
                }
            }
            gate_in.push(ins);
        }
        let mut outputs = Vec::new();
        let mut seen_out = Vec::new();
        for (name, wire) in &self.outputs {
            if seen_out.contains(name) {
                diags.push(Diagnostic::DuplicateOutput(name.clone()));
            }
            seen_out.push(name.clone());
            match index.get(wire) {
                Some(&i) => outputs.push(i),
                None => diags.push(Diagnostic::UnknownOutput {
                    output: name.clone(),
                    wire: wire.clone(),
                }),
            }
        }

        // Kahn's algorithm over gates.
        let mut readers: Vec<Vec<usize>> = vec![Vec::new(); wires.len()];
        let mut pending = vec![0usize; self.gates.len()];
        for (gi, ins) in gate_in.iter().enumerate() {
            for &w in ins {
                if driver[w].is_some() {
                    pending[gi] += 1;
                }
                readers[w].push(gi);
            }
        }
        let mut queue: VecDeque<usize> =
            (0..self.gates.len()).filter(|&g| pending[g] == 0).collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(g) = queue.pop_front() {
            order.push(g);
            let out = gate_out[g];
            if out == usize::MAX {
                continue;
            }
            for &r in &readers[out] {
                pending[r] -= 1;
                if pending[r] == 0 {
                    queue.push_back(r);
                }
            }
        }
        if order.len() < self.gates.len() {
            let stuck: Vec<String> = (0..self.gates.len())
                .filter(|&g| pending[g] > 0)
                .map(|g| self.gates[g].output.clone())
                .collect();
            diags.push(Diagnostic::Cycle(stuck));
        }

        if !diags.is_empty() {
            return Err(Diagnostics(diags));
        }
        let reference = self
            .reference
            .as_ref()
            .and_then(|r| self.inputs.iter().position(|i| i == r));
        Ok(CheckedNetlist {
            net: self.clone(),
            wires,
            gate_in,
            gate_out,
            order,
            outputs,
            reference,
        })
    }

    pub fn evaluate(&self, volley: &Volley) -> Result<Volley> {
        self.validate()?.evaluate(volley)
    }

    pub fn check_st_axioms(&self) -> Result<AxiomReport> {
        self.validate()?.check_st_axioms()
    }
}

/// A validated netlist with resolved wiring.
#[derive(Clone, Debug)]
pub struct CheckedNetlist {
    net: Netlist,
    pub(crate) wires: Vec<String>,
    pub(crate) gate_in: Vec<Vec<usize>>,
    pub(crate) gate_out: Vec<usize>,
    /// Gate indices in topological order.
    pub(crate) order: Vec<usize>,
    pub(crate) outputs: Vec<usize>,
    /// Position of the reference among the inputs.
    pub(crate) reference: Option<usize>,
}

/// Outcome of an exhaustive axiom sweep, one verdict per output line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub mode: AlgebraMode,
    pub outputs: Vec<(String, Verdict)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.outputs.iter().all(|(_, v)| v.is_ok())
    }

    pub fn first_failure(&self) -> Option<(&str, &axioms::Counterexample)> {
        self.outputs.iter().find_map(|(name, v)| match v {
            Err(cx) => Some((name.as_str(), cx)),
            Ok(()) => None,
        })
    }
}

impl CheckedNetlist {
    pub fn netlist(&self) -> &Netlist {
        &self.net
    }

    pub fn k(&self) -> u32 {
        self.net.k
    }

    pub fn gate_count(&self) -> usize {
        self.net.gates.len()
    }

    pub fn input_names(&self) -> &[String] {
        &self.net.inputs
    }

    pub fn output_names(&self) -> impl Iterator<Item = &str> {
        self.net.outputs.iter().map(|(n, _)| n.as_str())
    }

    /// Inputs in declaration order, reference included.
    pub fn eval_slice(&self, inputs: &[TValue], mode: AlgebraMode) -> Vec<TValue> {
        let wires = self.eval_wires(inputs, mode);
        self.outputs.iter().map(|&w| wires[w]).collect()
    }

    pub(crate) fn eval_wires(&self, inputs: &[TValue], mode: AlgebraMode) -> Vec<TValue> {
        let mut vals = vec![Inf; self.wires.len()];
        vals[..inputs.len()].copy_from_slice(inputs);
        for &g in &self.order {
            let ins = &self.gate_in[g];
            let a = vals[ins[0]];
            let b = ins.get(1).map_or(Inf, |&i| vals[i]);
            vals[self.gate_out[g]] = self.net.gates[g].op.apply(a, b, self.net.k, mode);
        }
        vals
    }

    /// Resolves a volley into input order. The reference defaults to 0.
    pub fn bind(&self, volley: &Volley) -> Result<Vec<TValue>> {
        self.net
            .inputs
            .iter()
            .enumerate()
            .map(|(i, name)| match volley.get(name) {
                Some(&v) => Ok(v),
                None if Some(i) == self.reference => Ok(Finite(0)),
                None => Err(Error::Unbound(name.clone())),
            })
            .collect()
    }

    /// Zero-delay evaluation in topological order; delay gates follow the
    /// finite rule.
    pub fn evaluate(&self, volley: &Volley) -> Result<Volley> {
        let inputs = self.bind(volley)?;
        let outs = self.eval_slice(&inputs, AlgebraMode::Finite);
        Ok(self
            .net
            .outputs
            .iter()
            .zip(outs)
            .map(|((name, _), v)| (name.clone(), v))
            .collect())
    }

    /// Networks that carry next-cycle constants are judged in the unbounded
    /// algebra; all others in `S_k`.
    pub fn axiom_mode(&self) -> AlgebraMode {
        if self.net.has_next() {
            AlgebraMode::Unbounded
        } else {
            AlgebraMode::Finite
        }
    }

    /// Exhaustive causality and invariance sweep over every input, the
    /// reference included.
    pub fn check_st_axioms(&self) -> Result<AxiomReport> {
        let mode = self.axiom_mode();
        let k = self.net.k;
        AlgebraConfig::new(k)?;
        let q = self.net.inputs.len();
        axioms::enumerate(q, k)?;
        let mut outputs = Vec::new();
        for (oi, (name, _)) in self.net.outputs.iter().enumerate() {
            let f = |x: &[TValue]| self.eval_slice(x, mode)[oi];
            let verdict = axioms::check_st_function(f, q, k, mode)?;
            outputs.push((name.clone(), verdict));
        }
        Ok(AxiomReport { mode, outputs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vol(pairs: &[(&str, TValue)]) -> Volley {
        pairs.iter().map(|&(n, v)| (n.to_string(), v)).collect()
    }

    fn min_lt() -> Netlist {
        Netlist::new(4)
            .input("a")
            .input("b")
            .input("c")
            .gate("m", GateOp::Binary(BinOp::Min), &["a", "b"])
            .gate("y", GateOp::Binary(BinOp::Lt), &["m", "c"])
            .output("y")
    }

    #[test]
    fn two_gate_network_validates() {
        let c = min_lt().validate().unwrap();
        assert_eq!(c.order.len(), 2);
        let out = c
            .evaluate(&vol(&[
                ("a", Finite(2)),
                ("b", Finite(1)),
                ("c", Finite(3)),
            ]))
            .unwrap();
        assert_eq!(out["y"], Finite(1));
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let n = Netlist::new(4)
            .input("a")
            .gate("x", GateOp::Binary(BinOp::Min), &["a", "x"])
            .output("x");
        let d = n.validate().unwrap_err();
        assert_eq!(d.0, vec![Diagnostic::Cycle(vec!["x".into()])]);
    }

    #[test]
    fn arity_and_dangling_are_reported_together() {
        let n = Netlist::new(4)
            .input("a")
            .gate("x", GateOp::Binary(BinOp::Max), &["a"])
            .gate("y", GateOp::Identity, &["nowhere"])
            .output("y")
            .output_from("z", "missing");
        let d = n.validate().unwrap_err();
        assert!(d.0.contains(&Diagnostic::Arity {
            gate: "x".into(),
            op: "max".into(),
            expected: 2,
            got: 1
        }));
        assert!(d.0.contains(&Diagnostic::Dangling {
            gate: "y".into(),
            wire: "nowhere".into()
        }));
        assert!(d.0.contains(&Diagnostic::UnknownOutput {
            output: "z".into(),
            wire: "missing".into()
        }));
    }

    #[test]
    fn duplicate_driver() {
        let n = Netlist::new(4)
            .input("a")
            .gate("a", GateOp::Identity, &["a"])
            .output("a");
        assert!(n
            .validate()
            .unwrap_err()
            .0
            .contains(&Diagnostic::DuplicateWire("a".into())));
    }

    #[test]
    fn identity_network_passes_values() {
        let n = Netlist::new(4)
            .input("x")
            .gate("y", GateOp::Identity, &["x"])
            .output("y");
        for v in AlgebraConfig::new(4).unwrap().values() {
            assert_eq!(n.evaluate(&vol(&[("x", v)])).unwrap()["y"], v);
        }
    }

    #[test]
    fn unbound_input() {
        assert_eq!(
            min_lt().evaluate(&vol(&[("a", Finite(0))])),
            Err(Error::Unbound("b".into()))
        );
    }

    #[test]
    fn reference_defaults_to_zero() {
        let mut n = Netlist::new(4)
            .input("R")
            .gate("t1", GateOp::Delay(1), &["R"])
            .output("t1");
        n.reference = Some("R".into());
        assert_eq!(n.evaluate(&Volley::new()).unwrap()["t1"], Finite(1));
        assert_eq!(n.evaluate(&vol(&[("R", Inf)])).unwrap()["t1"], Inf);
    }

    #[test]
    fn axioms_pass_for_sound_network() {
        let r = min_lt().check_st_axioms().unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        assert_eq!(r.mode, AlgebraMode::Finite);
    }

    #[test]
    fn advance_gate_is_caught() {
        let n = min_lt().gate("z", GateOp::Advance, &["y"]).output("z");
        let r = n.check_st_axioms().unwrap();
        assert!(!r.passed());
        let (name, _) = r.first_failure().unwrap();
        assert_eq!(name, "z");
    }

    #[test]
    fn gate_op_names_round_trip() {
        for op in BinOp::ALL {
            assert_eq!(GateOp::from_name(op.name()), Some(GateOp::Binary(op)));
        }
        for g in [
            GateOp::Delay(3),
            GateOp::Identity,
            GateOp::Next,
            GateOp::Advance,
        ] {
            assert_eq!(GateOp::from_name(&g.name()), Some(g));
        }
        assert_eq!(GateOp::from_name("delay0"), None);
        assert_eq!(GateOp::from_name("and"), None);
    }
}
