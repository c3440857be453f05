use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use spacetime::expr::{gate_cost, parse, Expr};
use spacetime::fsm::{
    check_equivalence, run_fsm, EquivalencePlan, EventTrace, FsmKind, FsmSim, FsmSpec, ModelSet,
};
use spacetime::network::{expr_to_netlist, CheckedNetlist, Netlist, Volley, REFERENCE};
use spacetime::synth::{equality_combine, minimize, table_to_minterms, FunctionTable};
use spacetime::system::{
    run_system, run_system_fsm, run_with_jitter, JitterMode, JitterSpec, SystemConfig,
};
use spacetime::{BinOp, OpKind, TValue};

use crate::Outcome;

const DEFAULT_K: u32 = 16;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// `name=value` pairs into a volley.
fn bindings<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Volley> {
    let mut v = Volley::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("expected name=value, got `{item}`"))?;
        let value: TValue = value.trim().parse()?;
        if v.insert(name.trim().to_string(), value).is_some() {
            bail!("`{name}` bound twice");
        }
    }
    Ok(v)
}

fn load_netlist(path: &Path) -> Result<CheckedNetlist> {
    let net: Netlist = read(path)?
        .parse()
        .with_context(|| format!("parsing {}", path.display()))?;
    net.validate()
        .map_err(|d| anyhow!("{}: {d}", path.display()))
}

pub fn eval(src: &str, items: &[String], k: Option<u32>) -> Result<Outcome> {
    let mut env = bindings(items.iter().map(String::as_str))?;
    let k_binding = env
        .remove("k")
        .map(|v| v.finite().ok_or_else(|| anyhow!("k must be finite")));
    let k = match (k, k_binding) {
        (Some(_), Some(_)) => bail!("k given twice"),
        (Some(k), None) => k,
        (None, Some(k)) => k?,
        (None, None) => DEFAULT_K,
    };
    let e = parse(src)?;
    env.entry(REFERENCE.to_string())
        .or_insert(TValue::Finite(0));
    println!("{}", e.eval(&env, k)?);
    Ok(Outcome::Ok)
}

pub fn simulate(path: &Path, items: &[String], volleys: &[String], fsm: bool) -> Result<Outcome> {
    let net = load_netlist(path)?;
    let volleys: Vec<Volley> = if volleys.is_empty() {
        vec![bindings(items.iter().map(String::as_str))?]
    } else {
        if !items.is_empty() {
            bail!("give bindings either positionally or with --volley, not both");
        }
        volleys
            .iter()
            .map(|v| bindings(v.split_whitespace()))
            .collect::<Result<_>>()?
    };
    let names: Vec<&str> = net.output_names().collect();
    let mut sim = if fsm {
        Some(FsmSim::new(&net, &ModelSet::default(), true)?)
    } else {
        None
    };
    let mut clean = true;
    for (c, v) in volleys.iter().enumerate() {
        let inputs = net.bind(v)?;
        let shown: Vec<String> = match &mut sim {
            None => {
                let out = net.evaluate(v)?;
                names.iter().map(|n| format!("{n}={}", out[*n])).collect()
            }
            Some(sim) => {
                let out = sim.run_volley(&inputs)?;
                for viol in &out.violations {
                    eprintln!("{viol}");
                    clean = false;
                }
                (0..names.len())
                    .map(|i| match out.value(i) {
                        Some(v) => format!("{}={v}", names[i]),
                        None => {
                            clean = false;
                            format!("{}=multiple", names[i])
                        }
                    })
                    .collect()
            }
        };
        println!("cycle {c}: {}", shown.join(" "));
    }
    if let Some(sim) = &mut sim {
        let tail = sim.finish();
        for viol in &tail.violations {
            eprintln!("{viol}");
            clean = false;
        }
    }
    Ok(if clean { Outcome::Ok } else { Outcome::Failed })
}

pub fn synthesize(
    path: &Path,
    minimized: bool,
    combine: bool,
    netlist: bool,
    cost: bool,
) -> Result<Outcome> {
    let table: FunctionTable = read(path)?
        .parse()
        .with_context(|| format!("parsing {}", path.display()))?;
    let minterms = table_to_minterms(&table);
    let form = if minimized {
        minimize(&minterms)
    } else {
        minterms.clone()
    };
    let exprs: Vec<(String, Expr)> = if combine {
        equality_combine(&form).exprs
    } else {
        form.to_exprs()
    };
    if netlist {
        print!("{}", expr_to_netlist(&exprs, table.k)?);
    } else {
        for (name, e) in &exprs {
            println!("{name} = {e}");
        }
    }
    if cost {
        let before = minterms.cost();
        let after = gate_cost(exprs.iter().map(|(_, e)| e));
        println!("# cost before: {} after: {}", before.total(), after.total());
        println!("#   before: {before}");
        println!("#   after: {after}");
    }
    Ok(Outcome::Ok)
}

pub fn verify_netlist(path: &Path) -> Result<Outcome> {
    let net = load_netlist(path)?;
    let report = net.check_st_axioms()?;
    for (name, verdict) in &report.outputs {
        match verdict {
            Ok(()) => println!("{name}: pass"),
            Err(cx) => println!("{name}: FAIL {cx}"),
        }
    }
    Ok(if report.passed() {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn op_kind(name: &str) -> Result<OpKind> {
    if let Some(c) = name.strip_prefix("delay") {
        let c = if c.is_empty() {
            1
        } else {
            c.parse().context("delay amount")?
        };
        return Ok(OpKind::Delay(c));
    }
    BinOp::from_name(name)
        .map(OpKind::Binary)
        .ok_or_else(|| anyhow!("unknown operator `{name}`"))
}

pub fn verify_fsm(
    op: &str,
    k: u32,
    cycles: u32,
    random: Option<usize>,
    seed: u64,
    resets: bool,
) -> Result<Outcome> {
    let op = op_kind(op)?;
    let plan = match random {
        Some(sequences) => EquivalencePlan::Random {
            sequences,
            cycles,
            seed,
        },
        None => EquivalencePlan::Exhaustive { cycles },
    };
    let report = check_equivalence(op, k, plan, resets, &ModelSet::default())?;
    match &report.divergence {
        None => {
            println!("pass: {} sequences", report.sequences);
            Ok(Outcome::Ok)
        }
        Some(d) => {
            println!("FAIL at sequence {}:\n{d}", report.sequences);
            Ok(Outcome::Failed)
        }
    }
}

pub fn fsm_check(
    path: &Path,
    op: &str,
    k: u32,
    cycles: Option<u32>,
    resets: bool,
) -> Result<Outcome> {
    let kind = match op {
        "delay" => FsmKind::Delay,
        "min" => FsmKind::Min,
        "max" => FsmKind::Max,
        _ => bail!("no pulse-mode table for `{op}` (expected delay, min or max)"),
    };
    let trace: EventTrace = read(path)?
        .parse()
        .with_context(|| format!("parsing {}", path.display()))?;
    let cycles = cycles.unwrap_or(trace.cycles());
    let run = run_fsm(&FsmSpec::builtin(kind), &trace, k, cycles, resets)?;
    print!("{}", run.output.render(cycles));
    let mut ok = run.violations.is_empty();
    for v in &run.violations {
        println!("{v}");
    }
    let ideal = |x: &[TValue]| match kind {
        FsmKind::Delay => spacetime::delay_finite(x[0], 1, k),
        FsmKind::Min => BinOp::Min.apply(x[0], x[1]),
        FsmKind::Max => BinOp::Max.apply(x[0], x[1]),
    };
    let lines: &[&str] = if kind == FsmKind::Delay {
        &["a"]
    } else {
        &["a", "b"]
    };
    for c in 0..cycles {
        let mut x = Vec::new();
        for l in lines {
            let mut t = trace.times(c, l);
            t.dedup();
            match t.as_slice() {
                [] => x.push(TValue::Inf),
                [t] => x.push(TValue::Finite(*t)),
                _ => break,
            }
        }
        if x.len() < lines.len() {
            continue;
        }
        let expected = ideal(&x);
        let got = run.output.times(c, "y");
        let matches = match expected {
            TValue::Inf => got.is_empty(),
            TValue::Finite(t) => got == [t],
        };
        if !matches {
            println!("mismatch: cycle {c} expected y={expected}");
            ok = false;
        }
    }
    Ok(if ok { Outcome::Ok } else { Outcome::Failed })
}

pub fn run(
    path: &Path,
    fsm: bool,
    jitter: Option<u64>,
    epsilon: Option<f64>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let mut cfg = SystemConfig::load(path)?;
    if fsm && jitter.is_some() {
        bail!("--fsm and --jitter are separate modes");
    }
    let mut summary = Vec::new();
    let trace = if let Some(seed) = jitter {
        let mode = cfg.jitter.as_ref().map_or(JitterMode::Random, |j| j.mode);
        let epsilon = epsilon
            .or(cfg.jitter.as_ref().map(|j| j.epsilon))
            .ok_or_else(|| anyhow!("no jitter bound: add a [jitter] section or pass --epsilon"))?;
        cfg.jitter = Some(JitterSpec {
            epsilon,
            seed,
            mode,
        });
        let r = run_with_jitter(&cfg)?;
        let d = &r.drift;
        summary.push(format!(
            "jitter: epsilon {epsilon} seed {seed}, path bound {:.3}, max deviation {:.3}{}",
            d.path_bound,
            d.max_deviation,
            d.worst
                .as_ref()
                .map_or(String::new(), |(c, l)| format!(" at cycle {c} {l}"))
        ));
        summary.push(format!(
            "mismatches against the jitter-free run: {}",
            d.mismatches
        ));
        r.trace
    } else if epsilon.is_some() {
        bail!("--epsilon needs --jitter");
    } else if fsm {
        run_system_fsm(&cfg)?
    } else {
        run_system(&cfg)?
    };
    let tsv = trace.to_tsv();
    match out {
        Some(p) => std::fs::write(p, &tsv).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{tsv}"),
    }
    let violations = trace.violations().count();
    eprintln!("cycles: {}", trace.cycles.len());
    eprintln!("violations: {violations}");
    for line in summary {
        eprintln!("{line}");
    }
    Ok(if violations == 0 {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}
