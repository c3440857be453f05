use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::value::{AlgebraConfig, Finite, TValue};

/// Rows map input tuples in `{0..k-1}^q` to conventional outputs in
/// `{0..k-1, inf}`. Missing rows are don't-cares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    pub k: u32,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub rows: Vec<(Vec<u32>, Vec<TValue>)>,
}

impl FunctionTable {
    pub fn new(k: u32, inputs: &[&str], outputs: &[&str]) -> FunctionTable {
        FunctionTable {
            k,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            outputs: outputs.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(mut self, ins: &[u32], outs: &[TValue]) -> Self {
        self.rows.push((ins.to_vec(), outs.to_vec()));
        self
    }

    /// Builds a total table from a function of the input tuple.
    pub fn from_fn(
        k: u32,
        inputs: &[&str],
        outputs: &[&str],
        f: impl Fn(&[u32]) -> Vec<TValue>,
    ) -> FunctionTable {
        let mut t = FunctionTable::new(k, inputs, outputs);
        let q = inputs.len();
        let total = (k as usize).pow(q as u32);
        for idx in 0..total {
            let mut x = vec![0; q];
            let mut r = idx;
            for slot in x.iter_mut().rev() {
                *slot = (r % k as usize) as u32;
                r /= k as usize;
            }
            let y = f(&x);
            t.rows.push((x, y));
        }
        t
    }

    /// Quaternary half adder: `S = (A+B) mod 4`, `Cout = (A+B) div 4`.
    pub fn half_adder() -> FunctionTable {
        FunctionTable::from_fn(4, &["A", "B"], &["S", "Cout"], |x| {
            let s = x[0] + x[1];
            vec![Finite(s % 4), Finite(s / 4)]
        })
    }

    pub fn is_total(&self) -> bool {
        self.rows.len() as u128 == (self.k as u128).pow(self.inputs.len() as u32)
    }

    /// True when every input tuple has a row and the column never reads inf.
    pub fn column_is_total(&self, out: usize) -> bool {
        self.is_total() && self.rows.iter().all(|(_, y)| !y[out].is_inf())
    }

    pub fn lookup(&self, ins: &[u32]) -> Option<&[TValue]> {
        self.rows
            .iter()
            .find(|(x, _)| x == ins)
            .map(|(_, y)| y.as_slice())
    }

    /// Format errors carry the 1-based row number.
    pub fn validate(&self) -> Result<()> {
        AlgebraConfig::new(self.k)?;
        let mut seen = BTreeSet::new();
        for (i, (x, y)) in self.rows.iter().enumerate() {
            let line = i + 1;
            if x.len() != self.inputs.len() || y.len() != self.outputs.len() {
                return Err(Error::Format {
                    line,
                    msg: format!(
                        "row has {} inputs and {} outputs, expected {} and {}",
                        x.len(),
                        y.len(),
                        self.inputs.len(),
                        self.outputs.len()
                    ),
                });
            }
            if x.iter().any(|&v| v >= self.k) {
                return Err(Error::Format {
                    line,
                    msg: format!("input value out of range for k={}", self.k),
                });
            }
            if y.iter().any(|v| matches!(v, Finite(t) if *t >= self.k)) {
                return Err(Error::Format {
                    line,
                    msg: format!("output value out of range for k={}", self.k),
                });
            }
            if !seen.insert(x.clone()) {
                return Err(Error::Format {
                    line,
                    msg: "duplicate input row".into(),
                });
            }
        }
        Ok(())
    }
}

impl FromStr for FunctionTable {
    type Err = Error;

    fn from_str(src: &str) -> Result<FunctionTable> {
        let mut k = None;
        let mut t = FunctionTable::new(0, &[], &[]);
        let mut row_lines = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Format { line, msg };
            let list = |s: &str| -> Vec<String> {
                s.split(',')
                    .map(|n| n.trim().to_string())
                    .filter(|n| !n.is_empty())
                    .collect()
            };
            if let Some(v) = text.strip_prefix("k=") {
                k = Some(
                    v.trim()
                        .parse::<u32>()
                        .map_err(|_| err(format!("bad k `{v}`")))?,
                );
            } else if let Some(v) = text.strip_prefix("inputs:") {
                t.inputs = list(v);
            } else if let Some(v) = text.strip_prefix("outputs:") {
                t.outputs = list(v);
            } else if let Some((ins, outs)) = text.split_once(':') {
                let x = ins
                    .split_whitespace()
                    .map(|v| {
                        v.parse::<u32>()
                            .map_err(|_| err(format!("bad input `{v}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let y = outs
                    .split_whitespace()
                    .map(|v| {
                        v.parse::<TValue>()
                            .map_err(|_| err(format!("bad output `{v}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                t.rows.push((x, y));
                row_lines.push(line);
            } else {
                return Err(err(format!("unrecognized line `{text}`")));
            }
        }
        t.k = k.ok_or(Error::Format {
            line: 0,
            msg: "missing `k=` header".into(),
        })?;
        // validate numbers rows from 1; report file lines instead
        t.validate().map_err(|e| match e {
            Error::Format { line, msg } if line > 0 => Error::Format {
                line: row_lines[line - 1],
                msg,
            },
            e => e,
        })?;
        Ok(t)
    }
}

impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "inputs: {}", self.inputs.join(", "))?;
        writeln!(f, "outputs: {}", self.outputs.join(", "))?;
        for (x, y) in &self.rows {
            let xs: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            let ys: Vec<String> = y.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{} : {}", xs.join(" "), ys.join(" "))?;
        }
        Ok(())
    }
}
