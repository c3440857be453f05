use super::{Action, FsmSpec, State, Sym};
use crate::value::BinOp;

/// One simulated element. `step` sees the spikes that land on its inputs at
/// the current unit step and reports whether it spikes now.
#[derive(Clone, Debug)]
pub enum Cell {
    Table {
        spec: FsmSpec,
        state: State,
    },
    /// Relational operators without a published table: one arrival bit per
    /// input, cleared by the reset.
    Behavioral {
        op: BinOp,
        a_seen: bool,
        b_seen: bool,
    },
    /// `eq` and `ne` need no memory once same-step spikes are coalesced.
    Comparator(BinOp),
    Wire,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepResult {
    pub fire: bool,
    /// The table hit an `E` row.
    pub error: bool,
}

impl Cell {
    pub fn table(spec: FsmSpec) -> Cell {
        Cell::Table {
            spec,
            state: State::Y0,
        }
    }

    pub fn behavioral(op: BinOp) -> Cell {
        Cell::Behavioral {
            op,
            a_seen: false,
            b_seen: false,
        }
    }

    pub fn state(&self) -> Option<State> {
        match self {
            Cell::Table { state, .. } => Some(*state),
            _ => None,
        }
    }

    /// Data inputs are `ins`; `reset` is the gamma spike, always at step 0.
    pub fn step(&mut self, ins: [bool; 2], reset: bool) -> StepResult {
        match self {
            Cell::Table { spec, state } => {
                if *state == State::E {
                    if !reset {
                        return StepResult::default();
                    }
                    *state = State::Y0;
                }
                let n = spec.kind.data_lines();
                let mut pattern: Vec<Sym> = ins[..n]
                    .iter()
                    .map(|&s| match (s, reset) {
                        (false, _) => Sym::Quiet,
                        (true, false) => Sym::Tau,
                        (true, true) => Sym::Zero,
                    })
                    .collect();
                pattern.push(if reset { Sym::Zero } else { Sym::Quiet });
                let row = spec
                    .lookup(*state, &pattern)
                    .expect("transition tables cover every pattern");
                *state = row.next;
                match row.action {
                    Action::None => StepResult::default(),
                    Action::Echo | Action::DelayOut | Action::Zero => StepResult {
                        fire: true,
                        error: false,
                    },
                    Action::Error => StepResult {
                        fire: false,
                        error: true,
                    },
                }
            }
            Cell::Behavioral { op, a_seen, b_seen } => {
                if reset {
                    *a_seen = false;
                    *b_seen = false;
                }
                let [a, b] = ins;
                let fire = match op {
                    BinOp::Lt => a && !b && !*b_seen,
                    BinOp::Le => a && !*b_seen,
                    BinOp::Gt => a && *b_seen,
                    BinOp::Ge => a && (b || *b_seen),
                    BinOp::XMin => (a != b) && !*a_seen && !*b_seen,
                    BinOp::XMax => {
                        (a && !b && *b_seen && !*a_seen) || (b && !a && *a_seen && !*b_seen)
                    }
                    BinOp::Min => (a || b) && !*a_seen && !*b_seen,
                    BinOp::Max => (a && (b || *b_seen) && !*a_seen) || (b && *a_seen && !*b_seen),
                    BinOp::Eq => a && b,
                    BinOp::Ne => a && !b,
                };
                *a_seen |= a;
                *b_seen |= b;
                StepResult { fire, error: false }
            }
            Cell::Comparator(op) => {
                let [a, b] = ins;
                let fire = match op {
                    BinOp::Eq => a && b,
                    BinOp::Ne => a && !b,
                    _ => unreachable!("only eq and ne are comparators"),
                };
                StepResult { fire, error: false }
            }
            Cell::Wire => StepResult {
                fire: ins[0],
                error: false,
            },
        }
    }
}
