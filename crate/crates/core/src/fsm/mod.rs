//! Pulse-mode asynchronous state machines for the gates.
//!
//! Delay, min and max are table-driven ([`FsmSpec`]). The other relational
//! operators run as behavioral models holding one bit of i-state per input;
//! `eq` and `ne` are stateless comparators. Time advances in unit steps and
//! spikes landing on the same step are presented to a machine as one input
//! pattern. The gamma reset is the last pattern symbol and occurs at step 0.

mod cell;
mod sim;
mod trace;

use std::fmt;

pub use cell::Cell;
pub use sim::{
    check_equivalence, run_fsm, CycleOutput, Divergence, EquivalencePlan, EquivalenceReport,
    FsmRun, FsmSim, ModelSet,
};
pub use trace::{EventTrace, Spike, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum State {
    Y0,
    Y1,
    /// A line spiked twice in one gamma cycle. Held until the next reset.
    E,
}

/// One position of an input pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sym {
    /// `-`: no spike.
    Quiet,
    /// `τ`: a spike away from the reset.
    Tau,
    /// `0`: a spike coincident with the reset (or the reset itself).
    Zero,
}

impl Sym {
    fn glyph(self) -> char {
        match self {
            Sym::Quiet => '-',
            Sym::Tau => 'τ',
            Sym::Zero => '0',
        }
    }

    fn from_glyph(c: char) -> Option<Sym> {
        match c {
            '-' => Some(Sym::Quiet),
            'τ' | 't' => Some(Sym::Tau),
            '0' => Some(Sym::Zero),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    None,
    /// Spike now, at the time of the triggering input.
    Echo,
    /// Spike one unit after the stored trigger; the row fires on the first
    /// quiet step after it.
    DelayOut,
    /// Spike at time 0, with the reset.
    Zero,
    Error,
}

impl Action {
    fn glyph(self) -> &'static str {
        match self {
            Action::None => "-",
            Action::Echo => "τ",
            Action::DelayOut => "τ+1",
            Action::Zero => "0",
            Action::Error => "E",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FsmKind {
    Delay,
    Min,
    Max,
}

impl FsmKind {
    pub fn name(self) -> &'static str {
        match self {
            FsmKind::Delay => "delay",
            FsmKind::Min => "min",
            FsmKind::Max => "max",
        }
    }

    pub fn data_lines(self) -> usize {
        match self {
            FsmKind::Delay => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub state: State,
    /// Data lines, then the reset.
    pub pattern: Vec<Sym>,
    pub next: State,
    pub action: Action,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FsmSpec {
    pub kind: FsmKind,
    pub rows: Vec<Row>,
}

fn rows(table: &[(State, &str, State, Action)]) -> Vec<Row> {
    table
        .iter()
        .map(|&(state, pat, next, action)| Row {
            state,
            pattern: pat
                .chars()
                .map(|c| Sym::from_glyph(c).expect("valid glyph"))
                .collect(),
            next,
            action,
        })
        .collect()
}

use Action as A;
use State::{E, Y0, Y1};

impl FsmSpec {
    pub fn builtin(kind: FsmKind) -> FsmSpec {
        match kind {
            FsmKind::Delay => FsmSpec::delay(),
            FsmKind::Min => FsmSpec::min(),
            FsmKind::Max => FsmSpec::max(),
        }
    }

    pub fn delay() -> FsmSpec {
        FsmSpec {
            kind: FsmKind::Delay,
            rows: rows(&[
                (Y0, "--", Y0, A::None),
                (Y0, "τ-", Y1, A::None),
                (Y0, "00", Y1, A::None),
                (Y0, "-0", Y0, A::None),
                (Y1, "--", Y0, A::DelayOut),
                (Y1, "τ-", E, A::Error),
                (Y1, "00", Y1, A::None),
                (Y1, "-0", Y0, A::None),
            ]),
        }
    }

    /// Min with reset taking priority over leftover i-state: a single input
    /// arriving with the reset while in `Y1` is handled as from `Y0`.
    pub fn min() -> FsmSpec {
        let mut spec = FsmSpec::min_without_reset_priority();
        for row in &mut spec.rows {
            if row.state == Y1 && row.pattern[2] == Sym::Zero && row.pattern[..2] != [Sym::Quiet; 2]
            {
                let single = row.pattern[..2].contains(&Sym::Quiet);
                row.next = if single { Y1 } else { Y0 };
                row.action = A::Zero;
            }
        }
        spec
    }

    /// Min exactly as first tabulated. From `Y1`, a lone input coincident with
    /// the reset produces no output, so a leftover state from the previous
    /// cycle swallows a time-0 result.
    pub fn min_without_reset_priority() -> FsmSpec {
        FsmSpec {
            kind: FsmKind::Min,
            rows: rows(&[
                (Y0, "---", Y0, A::None),
                (Y0, "τ--", Y1, A::Echo),
                (Y0, "-τ-", Y1, A::Echo),
                (Y0, "ττ-", Y0, A::Echo),
                (Y0, "--0", Y0, A::None),
                (Y0, "-00", Y1, A::Zero),
                (Y0, "0-0", Y1, A::Zero),
                (Y0, "000", Y0, A::Zero),
                (Y1, "---", Y1, A::None),
                (Y1, "τ--", Y0, A::None),
                (Y1, "-τ-", Y0, A::None),
                (Y1, "ττ-", E, A::Error),
                (Y1, "--0", Y0, A::None),
                (Y1, "-00", Y0, A::None),
                (Y1, "0-0", Y0, A::None),
                (Y1, "000", Y0, A::Echo),
            ]),
        }
    }

    pub fn max() -> FsmSpec {
        FsmSpec {
            kind: FsmKind::Max,
            rows: rows(&[
                (Y0, "---", Y0, A::None),
                (Y0, "τ--", Y1, A::None),
                (Y0, "-τ-", Y1, A::None),
                (Y0, "ττ-", Y0, A::Echo),
                (Y0, "--0", Y0, A::None),
                (Y0, "-00", Y1, A::None),
                (Y0, "0-0", Y1, A::None),
                (Y0, "000", Y0, A::Zero),
                (Y1, "---", Y1, A::None),
                (Y1, "τ--", Y0, A::Echo),
                (Y1, "-τ-", Y0, A::Echo),
                (Y1, "ττ-", E, A::Error),
                (Y1, "--0", Y0, A::None),
                (Y1, "-00", Y1, A::None),
                (Y1, "0-0", Y1, A::None),
                (Y1, "000", Y0, A::Zero),
            ]),
        }
    }

    pub fn lookup(&self, state: State, pattern: &[Sym]) -> Option<&Row> {
        self.rows
            .iter()
            .find(|r| r.state == state && r.pattern == pattern)
    }
}

impl fmt::Display for FsmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = if self.kind == FsmKind::Delay {
            "ar"
        } else {
            "abr"
        };
        writeln!(f, "# {}\nstate\t{header}\tnext\toutput", self.kind.name())?;
        for r in &self.rows {
            let pat: String = r.pattern.iter().map(|s| s.glyph()).collect();
            writeln!(
                f,
                "{:?}\t{pat}\t{:?}\t{}",
                r.state,
                r.next,
                r.action.glyph()
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> Vec<Sym> {
        s.chars().map(|c| Sym::from_glyph(c).unwrap()).collect()
    }

    #[test]
    fn tables_are_complete() {
        for spec in [FsmSpec::delay(), FsmSpec::min(), FsmSpec::max()] {
            let n = spec.kind.data_lines();
            let data_syms = [Sym::Quiet, Sym::Tau];
            for state in [Y0, Y1] {
                for reset in [false, true] {
                    for mask in 0..(1 << n) {
                        let mut p: Vec<Sym> = (0..n)
                            .map(|i| {
                                let s = data_syms[(mask >> i) & 1];
                                if reset && s == Sym::Tau {
                                    Sym::Zero
                                } else {
                                    s
                                }
                            })
                            .collect();
                        p.push(if reset { Sym::Zero } else { Sym::Quiet });
                        assert!(
                            spec.lookup(state, &p).is_some(),
                            "{:?} {state:?} {p:?}",
                            spec.kind
                        );
                    }
                }
            }
            assert_eq!(spec.rows.len(), 2 << (n + 1));
        }
    }

    #[test]
    fn documented_rows() {
        let d = FsmSpec::delay();
        assert_eq!(d.lookup(Y0, &pat("τ-")).unwrap().next, Y1);
        let r = d.lookup(Y1, &pat("--")).unwrap();
        assert_eq!((r.next, r.action), (Y0, Action::DelayOut));

        let m = FsmSpec::min();
        let r = m.lookup(Y0, &pat("τ--")).unwrap();
        assert_eq!((r.next, r.action), (Y1, Action::Echo));

        let x = FsmSpec::max();
        let r = x.lookup(Y0, &pat("ττ-")).unwrap();
        assert_eq!((r.next, r.action), (Y0, Action::Echo));
    }

    #[test]
    fn reset_priority_only_touches_three_rows() {
        let fixed = FsmSpec::min();
        let raw = FsmSpec::min_without_reset_priority();
        let changed: Vec<_> = fixed
            .rows
            .iter()
            .zip(&raw.rows)
            .filter(|(a, b)| a != b)
            .collect();
        assert_eq!(changed.len(), 3);
        let r = fixed.lookup(Y1, &pat("-00")).unwrap();
        assert_eq!((r.next, r.action), (Y1, Action::Zero));
        let r = fixed.lookup(Y1, &pat("000")).unwrap();
        assert_eq!((r.next, r.action), (Y0, Action::Zero));
    }

    #[test]
    fn display_lists_rows() {
        let s = FsmSpec::delay().to_string();
        assert!(s.contains("Y1\t--\tY0\tτ+1"));
        assert_eq!(s.lines().count(), 10);
    }
}
