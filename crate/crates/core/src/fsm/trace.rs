use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spike {
    pub cycle: u32,
    /// Unit steps from the cycle's gamma reset.
    pub time: u32,
    pub line: String,
}

/// Spikes ordered by cycle, time, then line.
///
/// Text form, one line per cycle:
///
/// ```text
/// cycle 0: a@1, b@2
/// cycle 1:
/// ```
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EventTrace {
    spikes: Vec<Spike>,
}

impl EventTrace {
    pub fn new() -> EventTrace {
        EventTrace::default()
    }

    pub fn push(&mut self, cycle: u32, line: &str, time: u32) {
        let s = Spike {
            cycle,
            time,
            line: line.to_string(),
        };
        let at = self.spikes.partition_point(|x| *x <= s);
        self.spikes.insert(at, s);
    }

    pub fn with(mut self, cycle: u32, line: &str, time: u32) -> Self {
        self.push(cycle, line, time);
        self
    }

    pub fn spikes(&self) -> &[Spike] {
        &self.spikes
    }

    pub fn is_empty(&self) -> bool {
        self.spikes.is_empty()
    }

    pub fn cycle(&self, cycle: u32) -> impl Iterator<Item = &Spike> {
        self.spikes.iter().filter(move |s| s.cycle == cycle)
    }

    pub fn times(&self, cycle: u32, line: &str) -> Vec<u32> {
        self.cycle(cycle)
            .filter(|s| s.line == line)
            .map(|s| s.time)
            .collect()
    }

    pub fn cycles(&self) -> u32 {
        self.spikes.last().map_or(0, |s| s.cycle + 1)
    }

    pub fn check_window(&self, k: u32) -> Result<()> {
        match self.spikes.iter().find(|s| s.time >= k) {
            Some(s) => Err(Error::Trace(format!(
                "spike {}@{} in cycle {} is outside 0..{}",
                s.line,
                s.time,
                s.cycle,
                k - 1
            ))),
            None => Ok(()),
        }
    }

    /// Writes cycles `0..n`, including empty ones.
    pub fn render(&self, n: u32) -> String {
        let mut out = String::new();
        for c in 0..n.max(self.cycles()) {
            let items: Vec<String> = self
                .cycle(c)
                .map(|s| format!("{}@{}", s.line, s.time))
                .collect();
            if items.is_empty() {
                out.push_str(&format!("cycle {c}:\n"));
            } else {
                out.push_str(&format!("cycle {c}: {}\n", items.join(", ")));
            }
        }
        out
    }
}

impl fmt::Display for EventTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

impl FromStr for EventTrace {
    type Err = Error;

    fn from_str(src: &str) -> Result<EventTrace> {
        let mut t = EventTrace::new();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Format { line, msg };
            let rest = text
                .strip_prefix("cycle")
                .ok_or_else(|| err(format!("expected `cycle <n>: ...`, got `{text}`")))?;
            let (n, items) = rest
                .split_once(':')
                .ok_or_else(|| err("missing `:` after cycle number".into()))?;
            let cycle = n
                .trim()
                .parse::<u32>()
                .map_err(|_| err(format!("bad cycle number `{}`", n.trim())))?;
            for item in items.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (name, time) = item
                    .split_once('@')
                    .ok_or_else(|| err(format!("expected `<line>@<time>`, got `{item}`")))?;
                let time = time
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| err(format!("bad time in `{item}`")))?;
                t.push(cycle, name.trim(), time);
            }
        }
        Ok(t)
    }
}

/// A second spike on one line within a gamma cycle, or an `E` transition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub gate: String,
    pub cycle: u32,
    pub time: u32,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "E: gate {} cycle {} time {}",
            self.gate, self.cycle, self.time
        )
    }
}
