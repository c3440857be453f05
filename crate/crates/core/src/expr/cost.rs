use std::collections::{BTreeMap, HashSet};
use std::fmt;

use super::Expr;
use crate::value::BinOp;

/// Operator counts after structural sharing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CostReport {
    pub per_op: BTreeMap<BinOp, usize>,
    /// Delay nodes, counted apart from the logic gates.
    pub delays: usize,
}

impl CostReport {
    pub fn count(&self, op: BinOp) -> usize {
        self.per_op.get(&op).copied().unwrap_or(0)
    }

    /// Logic gates only; delays are reported separately.
    pub fn total(&self) -> usize {
        self.per_op.values().sum()
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (op, n) in &self.per_op {
            write!(f, "{n} {op}, ")?;
        }
        if self.delays > 0 {
            write!(f, "{} delay, ", self.delays)?;
        }
        write!(f, "{} total", self.total())
    }
}

/// Counts operator nodes across all expressions, charging each structurally
/// distinct subterm once. Variables and constants are free.
pub fn gate_cost<'a>(exprs: impl IntoIterator<Item = &'a Expr>) -> CostReport {
    let mut seen: HashSet<&Expr> = HashSet::new();
    let mut report = CostReport::default();
    fn walk<'a>(e: &'a Expr, seen: &mut HashSet<&'a Expr>, report: &mut CostReport) {
        if !seen.insert(e) {
            return;
        }
        match e {
            Expr::Var(_) | Expr::Const(_) => {}
            Expr::Delay(c, _) => {
                report.delays += 1;
                walk(c, seen, report);
            }
            Expr::Bin(op, a, b) => {
                *report.per_op.entry(*op).or_default() += 1;
                walk(a, seen, report);
                walk(b, seen, report);
            }
        }
    }
    for e in exprs {
        walk(e, &mut seen, &mut report);
    }
    report
}
