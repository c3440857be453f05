//! Function tables to standard-form equations.
//!
//! Every table row with a finite output `v` becomes a minterm
//! `[X1 == x1 | X2 == x2 | ... | v+k]`. Minterms with the same cap form a
//! meta implicant (their min), and the output is the min over its meta
//! implicants in cap order. Values are referenced to `R`, so outputs read
//! `k..2k-1`; subtracting `k` gives the conventional value.

mod equality;
mod minimize;
mod table;

use std::collections::BTreeMap;
use std::fmt;

pub use equality::{equality_combine, EqualityCombined};
pub use minimize::{combine_implicants, eliminate_full_range, minimize, NotCombinable};
pub use table::FunctionTable;

use crate::error::Result;
use crate::expr::{gate_cost, CostReport, Expr};
use crate::network::{expr_to_netlist, Netlist, Volley, REFERENCE};
use crate::value::{BinOp, Finite, Inf, TValue};

/// Constraint an implicant places on one input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    Eq(u32),
    /// `lo <= X <= hi`.
    Interval(u32, u32),
    Free,
}

impl Constraint {
    pub fn bounds(self, k: u32) -> (u32, u32) {
        match self {
            Constraint::Eq(i) => (i, i),
            Constraint::Interval(lo, hi) => (lo, hi),
            Constraint::Free => (0, k - 1),
        }
    }

    /// `Eq(i)` becomes `Interval(i, i)`.
    pub fn normalized(self) -> Constraint {
        match self {
            Constraint::Eq(i) => Constraint::Interval(i, i),
            c => c,
        }
    }

    /// `Interval(i, i)` becomes `Eq(i)`.
    pub fn tidied(self) -> Constraint {
        match self {
            Constraint::Interval(lo, hi) if lo == hi => Constraint::Eq(lo),
            c => c,
        }
    }

    /// Every value this admits, `other` admits too.
    pub fn covers(self, other: Constraint) -> bool {
        match (self, other) {
            (Constraint::Free, _) => true,
            (_, Constraint::Free) => false,
            (a, b) => {
                let (alo, ahi) = a.bounds(u32::MAX);
                let (blo, bhi) = b.bounds(u32::MAX);
                alo <= blo && bhi <= ahi
            }
        }
    }

    /// Operator terms for this constraint on `var`, joined by max.
    ///
    /// With `finite_inputs`, a bound at the top of the range is dropped:
    /// `hi = k-1` always holds for a finite input.
    pub fn terms(self, var: &str, k: u32, finite_inputs: bool) -> Vec<Expr> {
        let v = || Expr::var(var);
        match self.tidied() {
            Constraint::Free => vec![],
            Constraint::Eq(i) => vec![Expr::eq(v(), Expr::Const(i))],
            Constraint::Interval(lo, hi) => {
                let mut out = Vec::new();
                // `0 <= X` only ever reads 0, which max ignores
                if lo > 0 {
                    out.push(Expr::le(Expr::Const(lo), v()));
                }
                if hi < k - 1 || !finite_inputs || out.is_empty() {
                    out.push(Expr::le(v(), Expr::Const(hi)));
                }
                out
            }
        }
    }
}

/// `[constraints | T | m]`: reads `m` when every constraint holds (and every
/// shared term is finite), otherwise inf.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implicant {
    /// One entry per table input, in order.
    pub constraints: Vec<Constraint>,
    pub shared: Vec<Expr>,
    pub cap: u32,
}

impl Implicant {
    pub fn minterm(row: &[u32], cap: u32) -> Implicant {
        Implicant {
            constraints: row.iter().map(|&v| Constraint::Eq(v)).collect(),
            shared: Vec::new(),
            cap,
        }
    }

    pub fn constant(q: usize, cap: u32) -> Implicant {
        Implicant {
            constraints: vec![Constraint::Free; q],
            shared: Vec::new(),
            cap,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.shared.is_empty() && self.constraints.iter().all(|c| *c == Constraint::Free)
    }

    pub fn to_expr(&self, inputs: &[String], k: u32, finite_inputs: bool) -> Expr {
        let terms = self
            .constraints
            .iter()
            .zip(inputs)
            .flat_map(|(c, v)| c.terms(v, k, finite_inputs))
            .chain(self.shared.iter().cloned())
            .chain([Expr::Const(self.cap)]);
        Expr::max_all(terms).expect("cap term is always present")
    }
}

/// One output: meta implicants keyed by cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputForm {
    pub name: String,
    pub metas: BTreeMap<u32, Vec<Implicant>>,
    /// Every finite input tuple has a finite specified value, so the
    /// largest meta implicant can stand as a bare constant.
    pub total: bool,
}

impl OutputForm {
    pub fn implicant_count(&self) -> usize {
        self.metas.values().map(Vec::len).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    pub k: u32,
    pub inputs: Vec<String>,
    /// Inputs are known to be finite, which licenses full-range elimination.
    pub finite_inputs: bool,
    pub outputs: Vec<OutputForm>,
}

impl StandardForm {
    pub fn output(&self, name: &str) -> Option<&OutputForm> {
        self.outputs.iter().find(|o| o.name == name)
    }

    /// The meta implicant's equation: the min of its implicants.
    pub fn meta_expr(&self, meta: &[Implicant]) -> Option<Expr> {
        Expr::min_all(
            meta.iter()
                .map(|p| p.to_expr(&self.inputs, self.k, self.finite_inputs)),
        )
    }

    /// An output with no implicants never fires; it is written `R < R`.
    pub fn output_expr(&self, out: &OutputForm) -> Expr {
        Expr::min_all(out.metas.values().filter_map(|m| self.meta_expr(m)))
            .unwrap_or_else(|| Expr::bin(BinOp::Lt, Expr::var(REFERENCE), Expr::var(REFERENCE)))
    }

    pub fn to_exprs(&self) -> Vec<(String, Expr)> {
        self.outputs
            .iter()
            .map(|o| (o.name.clone(), self.output_expr(o)))
            .collect()
    }

    pub fn cost(&self) -> CostReport {
        let exprs = self.to_exprs();
        gate_cost(exprs.iter().map(|(_, e)| e))
    }

    pub fn to_netlist(&self) -> Result<Netlist> {
        expr_to_netlist(&self.to_exprs(), self.k)
    }
}

impl fmt::Display for StandardForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, e) in self.to_exprs() {
            writeln!(f, "{name} = {e}")?;
        }
        Ok(())
    }
}

pub fn table_to_minterms(table: &FunctionTable) -> StandardForm {
    let k = table.k;
    let outputs = table
        .outputs
        .iter()
        .enumerate()
        .map(|(oi, name)| {
            let mut metas: BTreeMap<u32, Vec<Implicant>> = BTreeMap::new();
            for (x, y) in &table.rows {
                if let Finite(v) = y[oi] {
                    metas
                        .entry(v + k)
                        .or_default()
                        .push(Implicant::minterm(x, v + k));
                }
            }
            OutputForm {
                name: name.clone(),
                metas,
                total: table.column_is_total(oi),
            }
        })
        .collect();
    StandardForm {
        k,
        inputs: table.inputs.clone(),
        finite_inputs: table.is_total(),
        outputs,
    }
}

/// Evaluates each output on a volley. The reference reads 0 unless bound.
pub fn eval_form(form: &StandardForm, volley: &Volley) -> Result<Volley> {
    let mut env = volley.clone();
    env.entry(REFERENCE.to_string()).or_insert(Finite(0));
    form.to_exprs()
        .into_iter()
        .map(|(name, e)| Ok((name, e.eval(&env, form.k)?)))
        .collect()
}

/// Conventional (next-segment) value of an `R`-referenced output.
pub fn rereference(v: TValue, k: u32) -> TValue {
    match v {
        Finite(t) if (k..2 * k).contains(&t) => Finite(t - k),
        _ => Inf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::expr::parse;

    fn vol(a: u32, b: u32) -> Volley {
        [("A".to_string(), Finite(a)), ("B".to_string(), Finite(b))].into()
    }

    #[test]
    fn first_minterm_of_s() {
        let form = table_to_minterms(&FunctionTable::half_adder());
        let s = form.output("S").unwrap();
        let first = &s.metas[&4][0];
        assert_eq!(
            first.to_expr(&form.inputs, 4, true),
            parse("(A == 0 | B == 0 | 4)").unwrap()
        );
    }

    #[test]
    fn cout_meta_sizes() {
        let form = table_to_minterms(&FunctionTable::half_adder());
        let c = form.output("Cout").unwrap();
        assert_eq!(c.metas.len(), 2);
        assert_eq!(c.metas[&4].len(), 10);
        assert_eq!(c.metas[&5].len(), 6);
    }

    #[test]
    fn empty_table_gives_empty_form() {
        let t = FunctionTable::new(4, &["A", "B"], &[]);
        let form = table_to_minterms(&t);
        assert!(form.outputs.is_empty());
        assert!(form.to_exprs().is_empty());
    }

    #[test]
    fn minterm_form_reproduces_half_adder() {
        let t = FunctionTable::half_adder();
        let form = table_to_minterms(&t);
        assert_eq!(
            eval_form(&form, &vol(1, 3)).unwrap(),
            [
                ("Cout".to_string(), Finite(5)),
                ("S".to_string(), Finite(4))
            ]
            .into()
        );
        for (x, y) in &t.rows {
            let out = eval_form(&form, &vol(x[0], x[1])).unwrap();
            assert_eq!(out["S"], y[0].shifted(4));
            assert_eq!(out["Cout"], y[1].shifted(4));
            assert_eq!(rereference(out["S"], 4), y[0]);
            assert_eq!(rereference(out["Cout"], 4), y[1]);
        }
    }

    #[test]
    fn silence_in_silence_out() {
        let form = table_to_minterms(&FunctionTable::half_adder());
        let v: Volley = [("A".to_string(), Inf), ("B".to_string(), Inf)].into();
        let out = eval_form(&form, &v).unwrap();
        assert!(out.values().all(|v| v.is_inf()));
    }

    #[test]
    fn unbound_input_is_an_error() {
        let form = table_to_minterms(&FunctionTable::half_adder());
        let v: Volley = [("A".to_string(), Finite(0))].into();
        assert_eq!(eval_form(&form, &v), Err(Error::Unbound("B".into())));
    }

    #[test]
    fn never_firing_output() {
        let t = FunctionTable::new(2, &["A"], &["Y"])
            .row(&[0], &[Inf])
            .row(&[1], &[Inf]);
        let form = table_to_minterms(&t);
        for a in 0..2 {
            let v: Volley = [("A".to_string(), Finite(a))].into();
            assert_eq!(eval_form(&form, &v).unwrap()["Y"], Inf);
        }
        let net = form.to_netlist().unwrap();
        assert!(net.check_st_axioms().unwrap().passed());
    }

    #[test]
    fn interval_rendering() {
        let c = Constraint::Interval(0, 2);
        assert_eq!(c.terms("B", 4, true), [parse("B <= 2").unwrap()]);
        let c = Constraint::Interval(1, 3);
        assert_eq!(c.terms("B", 4, true), [parse("1 <= B").unwrap()]);
        assert_eq!(
            c.terms("B", 4, false),
            [parse("1 <= B").unwrap(), parse("B <= 3").unwrap()]
        );
        assert_eq!(
            Constraint::Interval(2, 2).terms("B", 4, true),
            [parse("B == 2").unwrap()]
        );
        assert!(Constraint::Free.terms("B", 4, true).is_empty());
    }

    #[test]
    fn coverage() {
        use Constraint::*;
        assert!(Free.covers(Eq(2)));
        assert!(Interval(0, 2).covers(Eq(2)));
        assert!(!Interval(0, 1).covers(Eq(2)));
        assert!(!Eq(1).covers(Free));
    }
}
