use std::collections::BTreeMap;

use super::{Constraint, Implicant, StandardForm};
use crate::expr::{gate_cost, CostReport, Expr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityCombined {
    pub exprs: Vec<(String, Expr)>,
    pub before: CostReport,
    pub after: CostReport,
    /// Implicants rewritten through a shared comparator.
    pub rewritten: usize,
}

/// `(X, Y, c)` when the implicant is `[X == c | Y == c | m]`.
fn diagonal(p: &Implicant) -> Option<(usize, usize, u32)> {
    if !p.shared.is_empty() {
        return None;
    }
    let mut hits = Vec::new();
    for (v, c) in p.constraints.iter().enumerate() {
        match c.tidied() {
            Constraint::Free => {}
            Constraint::Eq(i) => hits.push((v, i)),
            Constraint::Interval(..) => return None,
        }
    }
    match hits.as_slice() {
        [(x, c), (y, d)] if c == d => Some((*x, *y, *c)),
        _ => None,
    }
}

/// Rewrites each diagonal implicant `[X == c | Y == c | m]` as
/// `[(X == Y) == c | m]`, sharing one `X == Y` gate. Rewritten terms with
/// the same cap share that cap under an inner min. Other implicants are
/// left as they are.
pub fn equality_combine(form: &StandardForm) -> EqualityCombined {
    let before = form.cost();
    let mut rewritten = 0;
    let mut exprs = Vec::new();
    for out in &form.outputs {
        let mut metas = Vec::new();
        for (&cap, meta) in &out.metas {
            let mut pairs: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
            let mut rest = Vec::new();
            for p in meta {
                match diagonal(p) {
                    Some((x, y, c)) => {
                        pairs.entry((x, y)).or_default().push(c);
                        rewritten += 1;
                    }
                    None => rest.push(p.to_expr(&form.inputs, form.k, form.finite_inputs)),
                }
            }
            let mut terms = Vec::new();
            for ((x, y), cs) in pairs {
                let cmp = Expr::eq(Expr::var(&form.inputs[x]), Expr::var(&form.inputs[y]));
                let inner = Expr::min_all(
                    cs.into_iter()
                        .map(|c| Expr::eq(cmp.clone(), Expr::Const(c))),
                )
                .expect("group is non-empty");
                terms.push(Expr::max(inner, Expr::Const(cap)));
            }
            terms.extend(rest);
            metas.extend(Expr::min_all(terms));
        }
        let e = Expr::min_all(metas).unwrap_or_else(|| form.output_expr(out));
        exprs.push((out.name.clone(), e));
    }
    let after = gate_cost(exprs.iter().map(|(_, e)| e));
    EqualityCombined {
        exprs,
        before,
        after,
        rewritten,
    }
}
