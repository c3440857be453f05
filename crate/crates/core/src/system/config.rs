//! System configuration text.
//!
//! ```text
//! k=4
//! cycles=3
//! realign: outputs          # or `none`, or a list like `adder.S, adder.Cout`
//!
//! [segments]
//! adder = non-st half_adder.tbl   # tables are synthesized and minimized
//! carry = st identity.net
//!
//! [wiring]
//! A0 -> adder.A                   # external line
//! adder.S -> adder.A              # feedback, one cycle later
//!
//! [inputs]
//! 0: A0=0                         # per cycle
//! *: B=1                          # every cycle
//!
//! [jitter]
//! epsilon = 0.2
//! seed = 7
//! mode = random                   # or `max`: every gate late by epsilon
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use super::{JitterMode, JitterSpec, Realign, Segment, SegmentKind, Source, SystemConfig, Target};
use crate::error::{Error, Result};
use crate::network::Netlist;
use crate::synth::{minimize, table_to_minterms, FunctionTable};
use crate::value::TValue;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Top,
    Segments,
    Wiring,
    Inputs,
    Jitter,
}

fn split_dot(s: &str) -> Option<(String, String)> {
    s.split_once('.')
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
}

/// Loads a segment body: `.tbl` files are tables, anything else a netlist.
pub fn load_body(path: &str, text: &str) -> Result<Netlist> {
    if path.ends_with(".tbl") {
        let t: FunctionTable = text.parse()?;
        minimize(&table_to_minterms(&t)).to_netlist()
    } else {
        text.parse()
    }
}

impl SystemConfig {
    /// Reads a config file, resolving segment paths against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<SystemConfig> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        SystemConfig::parse(&src, |p| {
            let full = dir.join(p);
            std::fs::read_to_string(&full)
                .map_err(|e| Error::Config(format!("{}: {e}", full.display())))
        })
    }

    /// Parses config text; `read` supplies the contents of referenced files.
    pub fn parse(src: &str, mut read: impl FnMut(&str) -> Result<String>) -> Result<SystemConfig> {
        let mut k = None;
        let mut cycles = None;
        let mut realign = Realign::Outputs;
        let mut segments = Vec::new();
        let mut wiring = Vec::new();
        let mut inputs: BTreeMap<u32, BTreeMap<String, TValue>> = BTreeMap::new();
        let mut every: BTreeMap<String, TValue> = BTreeMap::new();
        let mut jitter: Option<JitterSpec> = None;
        let mut section = Section::Top;

        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Format { line, msg };
            if let Some(name) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                section = match name.trim() {
                    "segments" => Section::Segments,
                    "wiring" => Section::Wiring,
                    "inputs" => Section::Inputs,
                    "jitter" => {
                        jitter.get_or_insert(JitterSpec {
                            epsilon: 0.0,
                            seed: 0,
                            mode: JitterMode::Random,
                        });
                        Section::Jitter
                    }
                    other => return Err(err(format!("unknown section `[{other}]`"))),
                };
                continue;
            }
            match section {
                Section::Top => {
                    if let Some(v) = text.strip_prefix("realign:") {
                        realign = match v.trim() {
                            "outputs" => Realign::Outputs,
                            "none" => Realign::None,
                            list => Realign::Lines(
                                list.split(',')
                                    .map(|s| {
                                        split_dot(s).ok_or_else(|| {
                                            err(format!(
                                                "expected `segment.line`, got `{}`",
                                                s.trim()
                                            ))
                                        })
                                    })
                                    .collect::<Result<_>>()?,
                            ),
                        };
                        continue;
                    }
                    let (key, v) = text
                        .split_once('=')
                        .ok_or_else(|| err(format!("unrecognized line `{text}`")))?;
                    let n = v
                        .trim()
                        .parse::<u32>()
                        .map_err(|_| err(format!("bad number `{}`", v.trim())))?;
                    match key.trim() {
                        "k" => k = Some(n),
                        "cycles" => cycles = Some(n),
                        other => return Err(err(format!("unknown setting `{other}`"))),
                    }
                }
                Section::Segments => {
                    let (name, rest) = text
                        .split_once('=')
                        .ok_or_else(|| err("expected `<name> = st|non-st <path>`".into()))?;
                    let mut parts = rest.split_whitespace();
                    let kind = match parts.next() {
                        Some("st") => SegmentKind::St,
                        Some("non-st") => SegmentKind::NonSt,
                        other => {
                            return Err(err(format!(
                                "segment kind must be `st` or `non-st`, got `{}`",
                                other.unwrap_or("")
                            )))
                        }
                    };
                    let path = parts
                        .next()
                        .ok_or_else(|| err("missing segment body path".into()))?;
                    if path.ends_with(".tbl") && kind == SegmentKind::St {
                        return Err(err(
                            "table bodies are referenced to R and must be `non-st`".into()
                        ));
                    }
                    let body = load_body(path, &read(path)?)?;
                    segments.push(Segment {
                        name: name.trim().to_string(),
                        kind,
                        body,
                    });
                }
                Section::Wiring => {
                    let (src, dst) = text
                        .split_once("->")
                        .ok_or_else(|| err("expected `<source> -> <segment>.<line>`".into()))?;
                    let source = match split_dot(src) {
                        Some((segment, line)) => Source::Segment { segment, line },
                        None => Source::External(src.trim().to_string()),
                    };
                    let (segment, line) = split_dot(dst)
                        .ok_or_else(|| err(format!("bad wiring target `{}`", dst.trim())))?;
                    wiring.push((source, Target { segment, line }));
                }
                Section::Inputs => {
                    let (when, assigns) = text
                        .split_once(':')
                        .ok_or_else(|| err("expected `<cycle>: line=value ...`".into()))?;
                    let slot = match when.trim() {
                        "*" => &mut every,
                        c => {
                            let c = c
                                .parse::<u32>()
                                .map_err(|_| err(format!("bad cycle `{c}`")))?;
                            inputs.entry(c).or_default()
                        }
                    };
                    for a in assigns.split_whitespace() {
                        let (name, v) = a
                            .split_once('=')
                            .ok_or_else(|| err(format!("expected `line=value`, got `{a}`")))?;
                        let v = v
                            .parse::<TValue>()
                            .map_err(|_| err(format!("bad value `{v}`")))?;
                        slot.insert(name.to_string(), v);
                    }
                }
                Section::Jitter => {
                    let j = jitter.as_mut().expect("set on section entry");
                    let (key, v) = text
                        .split_once('=')
                        .ok_or_else(|| err(format!("expected `key = value`, got `{text}`")))?;
                    let v = v.trim();
                    match key.trim() {
                        "epsilon" => {
                            j.epsilon = v
                                .parse::<f64>()
                                .map_err(|_| err(format!("bad epsilon `{v}`")))?
                        }
                        "seed" => {
                            j.seed = v
                                .parse::<u64>()
                                .map_err(|_| err(format!("bad seed `{v}`")))?
                        }
                        "mode" => {
                            j.mode = match v {
                                "random" => JitterMode::Random,
                                "max" => JitterMode::Max,
                                _ => return Err(err(format!("unknown jitter mode `{v}`"))),
                            }
                        }
                        other => return Err(err(format!("unknown jitter setting `{other}`"))),
                    }
                }
            }
        }
        let k = k.ok_or_else(|| Error::Config("missing `k=`".into()))?;
        let cycles = cycles.ok_or_else(|| Error::Config("missing `cycles=`".into()))?;
        let mut schedule = vec![BTreeMap::new(); cycles as usize];
        for (c, slot) in schedule.iter_mut().enumerate() {
            slot.extend(every.iter().map(|(n, v)| (n.clone(), *v)));
            if let Some(m) = inputs.get(&(c as u32)) {
                slot.extend(m.iter().map(|(n, v)| (n.clone(), *v)));
            }
        }
        if let Some(c) = inputs.keys().find(|&&c| c >= cycles) {
            return Err(Error::Config(format!(
                "inputs scheduled for cycle {c} but only {cycles} cycles run"
            )));
        }
        let cfg = SystemConfig {
            k,
            cycles,
            segments,
            wiring,
            schedule,
            jitter,
            realign,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
