//! Line-oriented netlist text.
//!
//! ```text
//! k=4
//! inputs: R, A, B
//! reference: R
//! outputs: S, Cout=c1
//! n0 = eq(A, B)
//! c1 = delay1(n0)
//! ```

use std::fmt;
use std::str::FromStr;

use super::{Gate, GateOp, Netlist};
use crate::error::{Error, Result};

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn names(line: usize, list: &str) -> Result<Vec<String>> {
    let list = list.trim();
    if list.is_empty() {
        return Ok(Vec::new());
    }
    list.split(',')
        .map(|n| {
            let n = n.trim();
            if is_ident(n) {
                Ok(n.to_string())
            } else {
                Err(Error::Format {
                    line,
                    msg: format!("bad name `{n}`"),
                })
            }
        })
        .collect()
}

impl FromStr for Netlist {
    type Err = Error;

    fn from_str(src: &str) -> Result<Netlist> {
        let mut k = None;
        let mut net = Netlist::new(0);
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Format { line, msg };
            let header_k = text
                .split_once('=')
                .filter(|(l, r)| l.trim() == "k" && !r.contains('('));
            if let Some((_, v)) = header_k {
                let v = v
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| err(format!("bad k `{v}`")))?;
                k = Some(v);
            } else if let Some(list) = text.strip_prefix("inputs:") {
                net.inputs.extend(names(line, list)?);
            } else if let Some(r) = text.strip_prefix("reference:") {
                let r = r.trim();
                if !is_ident(r) {
                    return Err(err(format!("bad reference `{r}`")));
                }
                net.reference = Some(r.to_string());
            } else if let Some(list) = text.strip_prefix("outputs:") {
                for entry in list.split(',').map(str::trim).filter(|e| !e.is_empty()) {
                    let (name, wire) = match entry.split_once('=') {
                        Some((n, w)) => (n.trim(), w.trim()),
                        None => (entry, entry),
                    };
                    if !is_ident(name) || !is_ident(wire) {
                        return Err(err(format!("bad output `{entry}`")));
                    }
                    net.outputs.push((name.to_string(), wire.to_string()));
                }
            } else if let Some((out, rhs)) = text.split_once('=') {
                let out = out.trim();
                if !is_ident(out) {
                    return Err(err(format!("bad wire name `{out}`")));
                }
                let rhs = rhs.trim();
                let (op, args) = rhs
                    .strip_suffix(')')
                    .and_then(|r| r.split_once('('))
                    .ok_or_else(|| err(format!("expected `<op>(<inputs>)`, got `{rhs}`")))?;
                let op = op.trim();
                let op = GateOp::from_name(op).ok_or_else(|| err(format!("unknown op `{op}`")))?;
                net.gates.push(Gate {
                    output: out.to_string(),
                    op,
                    inputs: names(line, args)?,
                });
            } else {
                return Err(err(format!("unrecognized line `{text}`")));
            }
        }
        net.k = k.ok_or(Error::Format {
            line: 0,
            msg: "missing `k=` header".into(),
        })?;
        Ok(net)
    }
}

impl fmt::Display for Netlist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "inputs: {}", self.inputs.join(", "))?;
        if let Some(r) = &self.reference {
            writeln!(f, "reference: {r}")?;
        }
        let outs: Vec<String> = self
            .outputs
            .iter()
            .map(|(n, w)| {
                if n == w {
                    n.clone()
                } else {
                    format!("{n}={w}")
                }
            })
            .collect();
        writeln!(f, "outputs: {}", outs.join(", "))?;
        for g in &self.gates {
            writeln!(f, "{} = {}({})", g.output, g.op.name(), g.inputs.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::BinOp;

    const SRC: &str = "\
# comparator
k=4
inputs: a, b, c
outputs: y, z=m
m = min(a, b)   # first
y = lt(m, c)
d = delay2(y)
";

    #[test]
    fn parses_and_round_trips() {
        let n: Netlist = SRC.parse().unwrap();
        assert_eq!(n.k, 4);
        assert_eq!(n.inputs, ["a", "b", "c"]);
        assert_eq!(
            n.outputs,
            [("y".into(), "y".into()), ("z".into(), "m".into())]
        );
        assert_eq!(n.gates[0].op, GateOp::Binary(BinOp::Min));
        assert_eq!(n.gates[2].op, GateOp::Delay(2));
        let again: Netlist = n.to_string().parse().unwrap();
        assert_eq!(again, n);
    }

    #[test]
    fn format_errors_name_the_line() {
        let bad = "k=4\ninputs: a\nx = frob(a)\n";
        assert!(matches!(
            bad.parse::<Netlist>(),
            Err(Error::Format { line: 3, .. })
        ));
        assert!(matches!(
            "inputs: a\n".parse::<Netlist>(),
            Err(Error::Format { line: 0, .. })
        ));
        assert!(matches!(
            "k=4\nx = min a, b\n".parse::<Netlist>(),
            Err(Error::Format { line: 2, .. })
        ));
    }

    #[test]
    fn arity_errors_survive_parsing() {
        let n: Netlist = "k=4\ninputs: a\noutputs: x\nx = max(a)\n".parse().unwrap();
        assert!(n.validate().is_err());
    }
}
