//! Gamma-synchronized systems of feedforward segments.
//!
//! Every segment output reaches its consumers one gamma cycle later, so
//! feedback between segments (or from a segment to itself) is always legal.
//! An `st` segment's outputs cross unchanged; a `non-st` segment's outputs
//! are referenced to the next cycle's `R` and lose `k` on the way.

mod config;
mod jitter;
mod random;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use config::load_body;
pub use jitter::{run_with_jitter, DriftReport, JitterRun};
pub use random::random_system;

use crate::axioms::AlgebraMode;
use crate::error::{Error, Result};
use crate::fsm::{FsmSim, ModelSet, Violation};
use crate::network::{CheckedNetlist, Netlist, Volley};
use crate::value::{AlgebraConfig, Finite, Inf, TValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    /// Outputs in `0..k`, passed to the next cycle as they are.
    St,
    /// Outputs referenced to `R`, in `k..2k`.
    NonSt,
}

impl SegmentKind {
    pub fn name(self) -> &'static str {
        match self {
            SegmentKind::St => "st",
            SegmentKind::NonSt => "non-st",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub name: String,
    pub kind: SegmentKind,
    pub body: Netlist,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Source {
    External(String),
    Segment { segment: String, line: String },
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::External(n) => f.write_str(n),
            Source::Segment { segment, line } => write!(f, "{segment}.{line}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Target {
    pub segment: String,
    pub line: String,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.segment, self.line)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JitterMode {
    /// Each gate gets a fixed offset drawn uniformly from `[-ε, ε]`.
    Random,
    /// Every gate is late by exactly `ε`.
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JitterSpec {
    pub epsilon: f64,
    pub seed: u64,
    pub mode: JitterMode,
}

/// Where realignment gates sit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realign {
    Outputs,
    None,
    /// `(segment, line)` pairs.
    Lines(Vec<(String, String)>),
}

impl Realign {
    pub fn covers(&self, segment: &str, line: &str) -> bool {
        match self {
            Realign::Outputs => true,
            Realign::None => false,
            Realign::Lines(ls) => ls.iter().any(|(s, l)| s == segment && l == line),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemConfig {
    pub k: u32,
    pub cycles: u32,
    pub segments: Vec<Segment>,
    /// Several sources may drive one target; they are wire-ORed.
    pub wiring: Vec<(Source, Target)>,
    /// External line values for each cycle. Unlisted lines are `inf`.
    pub schedule: Vec<Volley>,
    pub jitter: Option<JitterSpec>,
    pub realign: Realign,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        self.compile().map(|_| ())
    }

    pub(crate) fn compile(&self) -> Result<Compiled> {
        let k = self.k;
        AlgebraConfig::new(k)?;
        if self.schedule.len() != self.cycles as usize {
            return Err(Error::Config(format!(
                "schedule covers {} cycles, expected {}",
                self.schedule.len(),
                self.cycles
            )));
        }
        let mut names = BTreeSet::new();
        for s in &self.segments {
            if !names.insert(s.name.as_str()) {
                return Err(Error::Config(format!("segment `{}` defined twice", s.name)));
            }
        }
        let mut order: Vec<usize> = (0..self.segments.len()).collect();
        order.sort_by(|&a, &b| self.segments[a].name.cmp(&self.segments[b].name));

        let mut nets = Vec::new();
        for s in &self.segments {
            if s.body.k != k {
                return Err(Error::Config(format!(
                    "segment `{}` has k={}, system has k={k}",
                    s.name, s.body.k
                )));
            }
            if s.kind == SegmentKind::St && s.body.has_next() {
                return Err(Error::Config(format!(
                    "segment `{}` uses `next` and must be declared non-st",
                    s.name
                )));
            }
            let net = s
                .body
                .validate()
                .map_err(|d| Error::Config(format!("segment `{}`: {d}", s.name)))?;
            nets.push(net);
        }
        let find = |seg: &str| self.segments.iter().position(|s| s.name == seg);

        let mut drivers: Vec<Vec<Vec<Source>>> = nets
            .iter()
            .map(|n| vec![Vec::new(); n.input_names().len()])
            .collect();
        for (src, dst) in &self.wiring {
            let si = find(&dst.segment)
                .ok_or_else(|| Error::Config(format!("wiring target `{dst}`: no such segment")))?;
            let net = &nets[si];
            let li = net
                .input_names()
                .iter()
                .position(|n| *n == dst.line)
                .ok_or_else(|| Error::Config(format!("wiring target `{dst}`: no such input")))?;
            if net.netlist().reference.as_deref() == Some(dst.line.as_str()) {
                return Err(Error::Config(format!(
                    "wiring target `{dst}` is the segment's reference"
                )));
            }
            if let Source::Segment { segment, line } = src {
                let pi = find(segment).ok_or_else(|| {
                    Error::Config(format!("wiring source `{src}`: no such segment"))
                })?;
                if !nets[pi].output_names().any(|o| o == line) {
                    return Err(Error::Config(format!(
                        "wiring source `{src}`: no such output"
                    )));
                }
            }
            drivers[si][li].push(src.clone());
        }
        for (si, net) in nets.iter().enumerate() {
            for (li, name) in net.input_names().iter().enumerate() {
                let is_ref = net.netlist().reference.as_deref() == Some(name.as_str());
                if !is_ref && drivers[si][li].is_empty() {
                    return Err(Error::Unbound(format!("{}.{name}", self.segments[si].name)));
                }
            }
        }
        for (c, volley) in self.schedule.iter().enumerate() {
            if let Some((n, v)) = volley
                .iter()
                .find(|(_, v)| v.finite().is_some_and(|t| t >= k))
            {
                return Err(Error::Config(format!(
                    "cycle {c}: input {n}={v} is outside 0..{}",
                    k - 1
                )));
            }
        }
        if let Realign::Lines(ls) = &self.realign {
            for (s, l) in ls {
                let ok = find(s).is_some_and(|i| nets[i].output_names().any(|o| o == l));
                if !ok {
                    return Err(Error::Config(format!("realign: no output `{s}.{l}`")));
                }
            }
        }
        if let Some(j) = &self.jitter {
            if !(j.epsilon >= 0.0 && j.epsilon < 0.5) {
                return Err(Error::JitterTooLarge(j.epsilon));
            }
        }
        let externals = self
            .wiring
            .iter()
            .filter_map(|(s, _)| match s {
                Source::External(n) => Some(n.clone()),
                _ => None,
            })
            .collect();
        Ok(Compiled {
            nets,
            order,
            drivers,
            externals,
        })
    }
}

pub(crate) struct Compiled {
    pub nets: Vec<CheckedNetlist>,
    /// Segment indices in name order.
    pub order: Vec<usize>,
    /// `drivers[segment][input]`.
    pub drivers: Vec<Vec<Vec<Source>>>,
    pub externals: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRecord {
    pub cycle: u32,
    /// External lines.
    pub inputs: Volley,
    /// Segment outputs as the next cycle sees them, keyed `segment.line`.
    pub outputs: Volley,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleTrace {
    pub cycles: Vec<CycleRecord>,
}

impl CycleTrace {
    /// Values of one line (external or `segment.line`) cycle by cycle.
    pub fn sequence(&self, line: &str) -> Vec<TValue> {
        self.cycles
            .iter()
            .map(|c| {
                c.outputs
                    .get(line)
                    .or_else(|| c.inputs.get(line))
                    .copied()
                    .unwrap_or(Inf)
            })
            .collect()
    }

    pub fn violations(&self) -> impl Iterator<Item = &Violation> {
        self.cycles.iter().flat_map(|c| c.violations.iter())
    }

    /// `cycle<TAB>line<TAB>value` rows; violations follow their cycle as
    /// `# E:` comments.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("cycle\tline\tvalue\n");
        for c in &self.cycles {
            for (line, v) in c.inputs.iter().chain(&c.outputs) {
                out.push_str(&format!("{}\t{line}\t{v}\n", c.cycle));
            }
            for v in &c.violations {
                out.push_str(&format!("# {v}\n"));
            }
        }
        out
    }
}

/// Spike times while a cycle is evaluated: `None` never arrives.
pub(crate) type Real = Option<f64>;

pub(crate) fn to_real(v: TValue) -> Real {
    v.finite().map(f64::from)
}

/// Nearest model time.
pub(crate) fn quantize(x: Real) -> TValue {
    match x {
        Some(t) => Finite(t.round().max(0.0) as u32),
        None => Inf,
    }
}

pub(crate) struct Evaluated {
    pub outputs: Vec<Real>,
    pub violations: Vec<Violation>,
}

/// Per-cycle outputs before realignment, keyed `segment.line`.
pub(crate) type RawOutputs = Vec<BTreeMap<String, Real>>;

/// Runs the cycle loop. `eval(segment, cycle, inputs)` evaluates one
/// segment body; `realign` chooses which outputs are snapped to the unit
/// clock before they are fed forward.
pub(crate) fn drive(
    cfg: &SystemConfig,
    cc: &Compiled,
    realign: &Realign,
    mut eval: impl FnMut(usize, u32, &[Real]) -> Result<Evaluated>,
) -> Result<(CycleTrace, RawOutputs)> {
    let k = cfg.k;
    let mut prev: BTreeMap<(usize, String), Real> = BTreeMap::new();
    let mut trace = CycleTrace::default();
    let mut raw = Vec::new();
    for c in 0..cfg.cycles {
        let sched = &cfg.schedule[c as usize];
        let mut rec = CycleRecord {
            cycle: c,
            inputs: cc
                .externals
                .iter()
                .map(|n| (n.clone(), sched.get(n).copied().unwrap_or(Inf)))
                .collect(),
            outputs: Volley::new(),
            violations: Vec::new(),
        };
        let mut next = BTreeMap::new();
        let mut raw_c = BTreeMap::new();
        for &si in &cc.order {
            let seg = &cfg.segments[si];
            let net = &cc.nets[si];
            let mut ins: Vec<Real> = Vec::with_capacity(net.input_names().len());
            for (li, name) in net.input_names().iter().enumerate() {
                if net.netlist().reference.as_deref() == Some(name.as_str()) {
                    ins.push(Some(0.0));
                    continue;
                }
                let mut hit: Real = None;
                for src in &cc.drivers[si][li] {
                    let v = match src {
                        Source::External(n) => to_real(rec.inputs[n]),
                        Source::Segment { segment, line } => {
                            let pi = cfg
                                .segments
                                .iter()
                                .position(|s| &s.name == segment)
                                .unwrap();
                            prev.get(&(pi, line.clone())).copied().flatten()
                        }
                    };
                    if v.is_some() {
                        if hit.is_some() {
                            return Err(Error::VolleyViolation {
                                line: format!("{}.{name}", seg.name),
                                cycle: c as usize,
                            });
                        }
                        hit = v;
                    }
                }
                ins.push(hit);
            }
            let out = eval(si, c, &ins)?;
            rec.violations.extend(out.violations);
            for ((line, _), x) in net.netlist().outputs.iter().zip(out.outputs) {
                let crossed = match seg.kind {
                    SegmentKind::St => x.filter(|_| quantize(x).normalize(k) != Inf),
                    SegmentKind::NonSt => match quantize(x) {
                        Finite(t) if (k..2 * k).contains(&t) => x.map(|t| t - f64::from(k)),
                        _ => None,
                    },
                };
                let key = format!("{}.{line}", seg.name);
                raw_c.insert(key.clone(), crossed);
                let fed = if realign.covers(&seg.name, line) {
                    crossed.map(|t| (t - 0.5).ceil())
                } else {
                    crossed
                };
                rec.outputs.insert(key, quantize(crossed));
                next.insert((si, line.clone()), fed);
            }
        }
        prev = next;
        raw.push(raw_c);
        trace.cycles.push(rec);
    }
    Ok((trace, raw))
}

/// Zero-delay evaluation of every segment.
pub fn run_system(cfg: &SystemConfig) -> Result<CycleTrace> {
    let cc = cfg.compile()?;
    let (trace, _) = drive(cfg, &cc, &Realign::None, |si, _, ins| {
        let x: Vec<TValue> = ins.iter().map(|&v| quantize(v)).collect();
        let outputs = cc.nets[si]
            .eval_slice(&x, AlgebraMode::Finite)
            .into_iter()
            .map(to_real)
            .collect();
        Ok(Evaluated {
            outputs,
            violations: Vec::new(),
        })
    })?;
    Ok(trace)
}

/// Every gate replaced by its pulse-mode machine, with gamma resets.
pub fn run_system_fsm(cfg: &SystemConfig) -> Result<CycleTrace> {
    run_system_fsm_with(cfg, &ModelSet::default(), true)
}

/// As [`run_system_fsm`], with chosen tables and optionally no resets.
/// A line that spikes more than once in a window reads as `inf` and is
/// recorded as a violation.
pub fn run_system_fsm_with(
    cfg: &SystemConfig,
    models: &ModelSet,
    resets: bool,
) -> Result<CycleTrace> {
    let cc = cfg.compile()?;
    let mut sims = cc
        .nets
        .iter()
        .map(|n| FsmSim::new(n, models, resets))
        .collect::<Result<Vec<_>>>()?;
    let (trace, _) = drive(cfg, &cc, &Realign::None, |si, c, ins| {
        let x: Vec<TValue> = ins.iter().map(|&v| quantize(v)).collect();
        let out = sims[si].run_volley(&x)?;
        let seg = &cfg.segments[si].name;
        let mut violations: Vec<Violation> = out
            .violations
            .iter()
            .map(|v| Violation {
                gate: format!("{seg}.{}", v.gate),
                cycle: c,
                time: v.time,
            })
            .collect();
        let outputs = (0..out.outputs.len())
            .map(|i| match out.value(i) {
                Some(v) => to_real(v),
                None => {
                    let (name, _) = &cc.nets[si].netlist().outputs[i];
                    violations.push(Violation {
                        gate: format!("{seg}.{name}"),
                        cycle: c,
                        time: out.outputs[i][1],
                    });
                    None
                }
            })
            .collect();
        Ok(Evaluated {
            outputs,
            violations,
        })
    })?;
    Ok(trace)
}
