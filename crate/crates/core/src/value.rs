//! Temporal values and the primitive space-time operators.
//!
//! A value is the arrival time of a spike on a line, measured in model time
//! units, or [`TValue::Inf`] when the spike never arrives. `Inf` orders above
//! every finite time, which the derived `Ord` gives us because `Finite` is
//! declared first.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A spike time: finite, or never.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TValue {
    Finite(u32),
    Inf,
}

pub use TValue::{Finite, Inf};

impl TValue {
    pub fn is_inf(self) -> bool {
        matches!(self, Inf)
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Finite(t) => Some(t),
            Inf => None,
        }
    }

    /// Adds `c` with no upper cap. Used for intra-segment values that are
    /// referenced to the next gamma cycle.
    pub fn shifted(self, c: u32) -> TValue {
        match self {
            Finite(t) => Finite(t + c),
            Inf => Inf,
        }
    }

    /// Clamps to the finite algebra `S_k`: anything at or past `k` never
    /// occurs within the cycle.
    pub fn normalize(self, k: u32) -> TValue {
        match self {
            Finite(t) if t < k => self,
            _ => Inf,
        }
    }
}

impl fmt::Display for TValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(t) => write!(f, "{t}"),
            Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for TValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(Inf);
        }
        s.parse::<u32>()
            .map(Finite)
            .map_err(|_| Error::InvalidValue(s.to_string()))
    }
}

impl From<u32> for TValue {
    fn from(t: u32) -> Self {
        Finite(t)
    }
}

/// Parameters of a finite algebra `S_k = {0, .., k-1, inf}`. The gamma period
/// equals `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlgebraConfig {
    k: u32,
}

impl AlgebraConfig {
    pub fn new(k: u32) -> Result<Self, Error> {
        if k < 2 {
            return Err(Error::InvalidK(k));
        }
        Ok(Self { k })
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn gamma_period(self) -> u32 {
        self.k
    }

    /// Every element of `S_k`, finite values first.
    pub fn values(self) -> impl Iterator<Item = TValue> + Clone {
        (0..self.k).map(Finite).chain(std::iter::once(Inf))
    }
}

/// The ten two-input space-time operators.
///
/// Relational operators pass their first argument through when the relation
/// holds and produce `Inf` otherwise, so `Lt` and `Gt` are distinct functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinOp {
    Min,
    Le,
    Ne,
    XMin,
    Lt,
    Max,
    XMax,
    Ge,
    Eq,
    Gt,
}

impl BinOp {
    pub const ALL: [BinOp; 10] = [
        BinOp::Min,
        BinOp::Le,
        BinOp::Ne,
        BinOp::XMin,
        BinOp::Lt,
        BinOp::Max,
        BinOp::XMax,
        BinOp::Ge,
        BinOp::Eq,
        BinOp::Gt,
    ];

    /// `ne` returns its first argument, so unlike `eq` it is not symmetric.
    pub fn is_commutative(self) -> bool {
        matches!(
            self,
            BinOp::Min | BinOp::Max | BinOp::Eq | BinOp::XMin | BinOp::XMax
        )
    }

    pub fn is_relational(self) -> bool {
        matches!(
            self,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne
        )
    }

    /// Name used in the netlist text format.
    pub fn name(self) -> &'static str {
        match self {
            BinOp::Min => "min",
            BinOp::Le => "le",
            BinOp::Ne => "ne",
            BinOp::XMin => "xmin",
            BinOp::Lt => "lt",
            BinOp::Max => "max",
            BinOp::XMax => "xmax",
            BinOp::Ge => "ge",
            BinOp::Eq => "eq",
            BinOp::Gt => "gt",
        }
    }

    pub fn from_name(name: &str) -> Option<BinOp> {
        BinOp::ALL.into_iter().find(|op| op.name() == name)
    }

    pub fn apply(self, a: TValue, b: TValue) -> TValue {
        apply_binary(self, a, b)
    }
}

impl fmt::Display for BinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Any primitive operator, unary ones included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Binary(BinOp),
    /// A chain of `c >= 1` unit delays.
    Delay(u32),
    Identity,
}

/// Evaluates a two-input operator.
pub fn apply_binary(op: BinOp, a: TValue, b: TValue) -> TValue {
    let pick = |holds: bool| if holds { a } else { Inf };
    match op {
        BinOp::Min => a.min(b),
        BinOp::Max => a.max(b),
        BinOp::Lt => pick(a < b),
        BinOp::Le => pick(a <= b),
        BinOp::Gt => pick(a > b),
        BinOp::Ge => pick(a >= b),
        BinOp::Eq => pick(a == b),
        BinOp::Ne => pick(a != b),
        BinOp::XMin => match a.cmp(&b) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => Inf,
        },
        BinOp::XMax => match a.cmp(&b) {
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Equal => Inf,
        },
    }
}

/// `c` composed unit delays under the finite rule: a spike that would land at
/// or past `k` never occurs.
pub fn delay_finite(a: TValue, c: u32, k: u32) -> TValue {
    match a {
        Finite(t) if t.saturating_add(c) < k => Finite(t + c),
        _ => Inf,
    }
}

/// Unit delay with no cap, as used by the unbounded algebra.
pub fn delay_unbounded(a: TValue, c: u32) -> TValue {
    a.shifted(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(t: u32) -> TValue {
        Finite(t)
    }

    #[test]
    fn table_examples() {
        assert_eq!(apply_binary(BinOp::Min, f(2), f(5)), f(2));
        assert_eq!(apply_binary(BinOp::Lt, f(3), f(3)), Inf);
        assert_eq!(apply_binary(BinOp::Max, Inf, f(3)), Inf);
        assert_eq!(apply_binary(BinOp::Min, Inf, f(3)), f(3));
        assert_eq!(apply_binary(BinOp::Gt, Inf, f(3)), Inf);
        assert_eq!(apply_binary(BinOp::XMin, f(4), f(4)), Inf);
        assert_eq!(apply_binary(BinOp::Eq, Inf, Inf), Inf);
    }

    // Every row of the operator table, checked column by column against the
    // three orderings a<b, a=b, b<a.
    #[test]
    fn operator_table_columns() {
        #[derive(Clone, Copy)]
        enum Out {
            A,
            B,
            Never,
        }
        use Out::*;
        let rows = [
            (BinOp::Min, [A, A, B]),
            (BinOp::Le, [A, A, Never]),
            (BinOp::Ne, [A, Never, A]),
            (BinOp::XMin, [A, Never, B]),
            (BinOp::Lt, [A, Never, Never]),
            (BinOp::Max, [B, A, A]),
            (BinOp::XMax, [B, Never, A]),
            (BinOp::Ge, [Never, A, A]),
            (BinOp::Eq, [Never, A, Never]),
            (BinOp::Gt, [Never, Never, A]),
        ];
        for (op, cols) in rows {
            for (a, b, col) in [(1, 4, 0), (3, 3, 1), (5, 2, 2)] {
                let want = match cols[col] {
                    A => f(a),
                    B => f(b),
                    Never => Inf,
                };
                assert_eq!(apply_binary(op, f(a), f(b)), want, "{op} {a} {b}");
            }
        }
    }

    #[test]
    fn finite_delay() {
        assert_eq!(delay_finite(f(2), 1, 8), f(3));
        assert_eq!(delay_finite(f(7), 1, 8), Inf);
        assert_eq!(delay_finite(Inf, 3, 8), Inf);
        assert_eq!(delay_finite(f(4), 3, 8), f(7));
        assert_eq!(delay_finite(f(5), 3, 8), Inf);
    }

    #[test]
    fn delay_chain_equals_composed_unit_delays() {
        for k in 2..7 {
            for a in AlgebraConfig::new(k).unwrap().values() {
                for c in 1..6 {
                    let stepped = (0..c).fold(a, |v, _| delay_finite(v, 1, k));
                    assert_eq!(delay_finite(a, c, k), stepped);
                }
            }
        }
    }

    #[test]
    fn value_text() {
        assert_eq!("inf".parse::<TValue>().unwrap(), Inf);
        assert_eq!(" 3".parse::<TValue>().unwrap(), f(3));
        assert!("x".parse::<TValue>().is_err());
        assert_eq!(Inf.to_string(), "inf");
        assert!(f(1_000_000) < Inf);
    }

    #[test]
    fn k_must_be_at_least_two() {
        assert!(AlgebraConfig::new(1).is_err());
        assert_eq!(AlgebraConfig::new(4).unwrap().values().count(), 5);
    }
}
