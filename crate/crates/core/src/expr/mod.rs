//! Space-time equations: a small expression language over the primitive
//! operators.
//!
//! Integer literals stand for taps of the reference signal: `4` means "the
//! reference spike delayed by 4". Since the reference is at time 0 by
//! convention, a literal evaluates to its own value.

mod cost;
mod parse;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use cost::{gate_cost, CostReport};
pub use parse::parse;

use crate::error::{Error, Result};
use crate::value::{apply_binary, delay_finite, BinOp, Finite, TValue};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Var(String),
    /// Reference tap `R + n`.
    Const(u32),
    Delay(Box<Expr>, u32),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

/// Variable lookup for evaluation.
pub trait Env {
    fn lookup(&self, name: &str) -> Option<TValue>;
}

impl Env for BTreeMap<String, TValue> {
    fn lookup(&self, name: &str) -> Option<TValue> {
        self.get(name).copied()
    }
}

impl Env for HashMap<String, TValue> {
    fn lookup(&self, name: &str) -> Option<TValue> {
        self.get(name).copied()
    }
}

impl Env for [(&str, TValue)] {
    fn lookup(&self, name: &str) -> Option<TValue> {
        self.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }
}

impl<const N: usize> Env for [(&str, TValue); N] {
    fn lookup(&self, name: &str) -> Option<TValue> {
        self.as_slice().lookup(name)
    }
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn constant(n: u32) -> Expr {
        Expr::Const(n)
    }

    pub fn delay(self, c: u32) -> Expr {
        Expr::Delay(Box::new(self), c)
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn min(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::Min, a, b)
    }

    pub fn max(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::Max, a, b)
    }

    pub fn eq(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::Eq, a, b)
    }

    pub fn le(a: Expr, b: Expr) -> Expr {
        Expr::bin(BinOp::Le, a, b)
    }

    /// Left-associated max over the terms. `None` when empty.
    pub fn max_all(terms: impl IntoIterator<Item = Expr>) -> Option<Expr> {
        terms.into_iter().reduce(Expr::max)
    }

    /// Left-associated min over the terms. `None` when empty.
    pub fn min_all(terms: impl IntoIterator<Item = Expr>) -> Option<Expr> {
        terms.into_iter().reduce(Expr::min)
    }

    /// Min over the terms as a balanced tree, which keeps the emitted
    /// network shallow.
    pub fn min_balanced(mut terms: Vec<Expr>) -> Option<Expr> {
        match terms.len() {
            0 => None,
            1 => terms.pop(),
            n => {
                let right = terms.split_off(n / 2);
                Some(Expr::min(
                    Expr::min_balanced(terms)?,
                    Expr::min_balanced(right)?,
                ))
            }
        }
    }

    /// The operands of a top-level max chain, in left-to-right order.
    pub fn max_terms(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        fn walk<'a>(e: &'a Expr, out: &mut Vec<&'a Expr>) {
            match e {
                Expr::Bin(BinOp::Max, a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Variable names in order of first appearance.
    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Var(v) = e {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Var(_) | Expr::Const(_) => {}
            Expr::Delay(c, _) => c.visit(f),
            Expr::Bin(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn max_const(&self) -> Option<u32> {
        let mut m = None;
        self.visit(&mut |e| {
            if let Expr::Const(n) = e {
                m = Some(m.map_or(*n, |x: u32| x.max(*n)));
            }
        });
        m
    }

    /// Every reference tap moved by `c`.
    pub fn shift_consts(&self, c: u32) -> Expr {
        match self {
            Expr::Var(_) => self.clone(),
            Expr::Const(n) => Expr::Const(n + c),
            Expr::Delay(e, d) => Expr::Delay(Box::new(e.shift_consts(c)), *d),
            Expr::Bin(op, a, b) => Expr::bin(*op, a.shift_consts(c), b.shift_consts(c)),
        }
    }

    /// Zero-delay evaluation; only `+c` nodes take time, under the finite
    /// delay rule for `S_k`.
    pub fn eval<E: Env + ?Sized>(&self, env: &E, k: u32) -> Result<TValue> {
        Ok(match self {
            Expr::Var(v) => env.lookup(v).ok_or_else(|| Error::Unbound(v.clone()))?,
            Expr::Const(n) => Finite(*n),
            Expr::Delay(e, c) => delay_finite(e.eval(env, k)?, *c, k),
            Expr::Bin(op, a, b) => apply_binary(*op, a.eval(env, k)?, b.eval(env, k)?),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Max, ..) => 1,
            Expr::Bin(BinOp::Min, ..) => 2,
            Expr::Bin(op, ..) if op.is_relational() => 3,
            Expr::Delay(..) => 4,
            _ => 5,
        }
    }
}

/// Replaces every `Var == n` term of an implicant's max chain by the
/// two-sided bound `(Var <= n) | (n <= Var)`. Other terms pass through.
pub fn rewrite_eq_to_interval(e: &Expr) -> Result<Expr> {
    let mut rewrote = false;
    let mut terms = Vec::new();
    for term in e.max_terms() {
        match term {
            Expr::Bin(BinOp::Eq, a, b) => match (a.as_ref(), b.as_ref()) {
                (Expr::Var(_), Expr::Const(_)) => {
                    terms.push(Expr::le((**a).clone(), (**b).clone()));
                    terms.push(Expr::le((**b).clone(), (**a).clone()));
                    rewrote = true;
                }
                _ => terms.push(term.clone()),
            },
            _ => terms.push(term.clone()),
        }
    }
    if !rewrote {
        return Err(Error::ShapeMismatch(format!(
            "no `variable == constant` term in `{e}`"
        )));
    }
    Ok(Expr::max_all(terms).expect("at least the rewritten pair"))
}

fn rel_token(op: BinOp) -> &'static str {
    match op {
        BinOp::Lt => "<",
        BinOp::Le => "<=",
        BinOp::Gt => ">",
        BinOp::Ge => ">=",
        BinOp::Eq => "==",
        BinOp::Ne => "!=",
        BinOp::Min => "&",
        BinOp::Max => "|",
        BinOp::XMin => "xmin",
        BinOp::XMax => "xmax",
    }
}

struct Child<'a>(&'a Expr, u8);

impl fmt::Display for Child<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Const(n) => write!(f, "{n}"),
            Expr::Delay(e, c) => write!(f, "{}+{c}", Child(e, 4)),
            Expr::Bin(op @ (BinOp::XMin | BinOp::XMax), a, b) => {
                write!(f, "{}({a}, {b})", rel_token(*op))
            }
            Expr::Bin(BinOp::Max, a, b) => write!(f, "{} | {}", Child(a, 1), Child(b, 2)),
            Expr::Bin(BinOp::Min, a, b) => write!(f, "{} & {}", Child(a, 2), Child(b, 3)),
            Expr::Bin(op, a, b) => write!(f, "{} {} {}", Child(a, 4), rel_token(*op), Child(b, 4)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Inf;

    fn env(pairs: &[(&str, u32)]) -> BTreeMap<String, TValue> {
        pairs
            .iter()
            .map(|&(n, v)| (n.to_string(), Finite(v)))
            .collect()
    }

    #[test]
    fn minterm_evaluation() {
        let e = parse("(A == 0) | (B == 0) | 4").unwrap();
        assert_eq!(e.eval(&env(&[("A", 0), ("B", 0)]), 4).unwrap(), Finite(4));
        assert_eq!(e.eval(&env(&[("A", 0), ("B", 1)]), 4).unwrap(), Inf);
    }

    #[test]
    fn cout_equation_rows() {
        let cout = parse(
            "(A == 0 | 4) & (B == 0 | 4) & (A == 1 | B <= 2 | 4) & (B == 1 | A <= 2 | 4) & 5",
        )
        .unwrap();
        assert_eq!(
            cout.eval(&env(&[("A", 1), ("B", 2)]), 4).unwrap(),
            Finite(4)
        );
        assert_eq!(
            cout.eval(&env(&[("A", 2), ("B", 2)]), 4).unwrap(),
            Finite(5)
        );
    }

    #[test]
    fn unbound_variable() {
        let e = parse("a & b").unwrap();
        assert_eq!(
            e.eval(&env(&[("a", 1)]), 4),
            Err(Error::Unbound("b".into()))
        );
    }

    #[test]
    fn delay_saturates_in_finite_algebra() {
        let e = parse("a+1").unwrap();
        assert_eq!(e.eval(&env(&[("a", 3)]), 4).unwrap(), Inf);
        assert_eq!(e.eval(&env(&[("a", 2)]), 4).unwrap(), Finite(3));
    }

    #[test]
    fn eq_rewrite_examples() {
        let e = parse("A == 0 | 4").unwrap();
        let r = rewrite_eq_to_interval(&e).unwrap();
        assert_eq!(r, parse("(A <= 0) | (0 <= A) | 4").unwrap());

        let e = parse("A == 3 | (B == 1) | 6").unwrap();
        let r = rewrite_eq_to_interval(&e).unwrap();
        assert_eq!(
            r,
            parse("(A <= 3) | (3 <= A) | (B <= 1) | (1 <= B) | 6").unwrap()
        );

        assert!(matches!(
            rewrite_eq_to_interval(&parse("A < B | 4").unwrap()),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn eq_rewrite_preserves_semantics() {
        for k in 2..7 {
            for i in 0..k {
                let e = parse(&format!("A == {i} | {}", k + i)).unwrap();
                let r = rewrite_eq_to_interval(&e).unwrap();
                for a in crate::value::AlgebraConfig::new(k).unwrap().values() {
                    let env = [("A", a)];
                    assert_eq!(e.eval(&env, k).unwrap(), r.eval(&env, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(Expr::Const(4).to_string(), "4");
        assert_eq!(Expr::var("a").delay(2).to_string(), "a+2");
        let e = parse("(a | b) & c").unwrap();
        assert_eq!(e.to_string(), "(a | b) & c");
        let e = parse("a | (b | c)").unwrap();
        assert_eq!(e.to_string(), "a | (b | c)");
        let e = parse("(a < b) == c").unwrap();
        assert_eq!(e.to_string(), "(a < b) == c");
        let e = parse("(a & b)+1").unwrap();
        assert_eq!(e.to_string(), "(a & b)+1");
        assert_eq!(parse("xmin(a, b+1)").unwrap().to_string(), "xmin(a, b+1)");
    }

    #[test]
    fn max_terms_flatten() {
        let e = parse("A == 0 | B == 1 | 5").unwrap();
        assert_eq!(e.max_terms().len(), 3);
        assert_eq!(e.vars(), vec!["A".to_string(), "B".to_string()]);
        assert_eq!(e.max_const(), Some(5));
    }

    #[test]
    fn balanced_min_matches_chain() {
        let terms: Vec<Expr> = (0..5).map(|i| Expr::var(format!("x{i}"))).collect();
        let chain = Expr::min_all(terms.clone()).unwrap();
        let tree = Expr::min_balanced(terms).unwrap();
        let vals = [3, 1, 4, 1, 5];
        let env: BTreeMap<String, TValue> = vals
            .iter()
            .enumerate()
            .map(|(i, &v)| (format!("x{i}"), Finite(v)))
            .collect();
        assert_eq!(chain.eval(&env, 8).unwrap(), tree.eval(&env, 8).unwrap());
    }
}
