use std::collections::BTreeMap;
use std::fmt;

use super::{Constraint, Implicant, StandardForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotCombinable {
    CapMismatch,
    SharedMismatch,
    Identical,
    /// More than one variable differs.
    DiffersInMany,
    /// The differing variable is unconstrained in one of them.
    FreeVariable,
    /// One interval lies strictly inside the other; absorption applies instead.
    Nested,
    /// The intervals neither overlap nor adjoin.
    Disjoint,
}

impl fmt::Display for NotCombinable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NotCombinable::CapMismatch => "caps differ",
            NotCombinable::SharedMismatch => "shared terms differ",
            NotCombinable::Identical => "implicants are identical",
            NotCombinable::DiffersInMany => "more than one variable differs",
            NotCombinable::FreeVariable => "differing variable is unconstrained",
            NotCombinable::Nested => "one interval contains the other",
            NotCombinable::Disjoint => "intervals are disjoint and not adjacent",
        };
        f.write_str(s)
    }
}

/// Merges `[(i <= X) | (X <= j) | T | m]` and `[(n <= X) | (X <= p) | T | m]`
/// into `[(i <= X) | (X <= p) | T | m]` when `i <= n <= j+1` and `j <= p`.
/// Equalities count as one-point intervals. Other constraints are kept as
/// written in `p1`.
pub fn combine_implicants(p1: &Implicant, p2: &Implicant) -> Result<Implicant, NotCombinable> {
    if p1.cap != p2.cap {
        return Err(NotCombinable::CapMismatch);
    }
    if p1.shared != p2.shared {
        return Err(NotCombinable::SharedMismatch);
    }
    let diffs: Vec<usize> = (0..p1.constraints.len())
        .filter(|&v| p1.constraints[v].normalized() != p2.constraints[v].normalized())
        .collect();
    let v = match diffs.as_slice() {
        [] => return Err(NotCombinable::Identical),
        [v] => *v,
        _ => return Err(NotCombinable::DiffersInMany),
    };
    let (a, b) = (p1.constraints[v], p2.constraints[v]);
    if a == Constraint::Free || b == Constraint::Free {
        return Err(NotCombinable::FreeVariable);
    }
    let fits = |(i, j): (u32, u32), (n, p): (u32, u32)| i <= n && n <= j + 1 && j <= p;
    let (ab, bb) = (a.bounds(u32::MAX), b.bounds(u32::MAX));
    let merged = if fits(ab, bb) {
        (ab.0, bb.1)
    } else if fits(bb, ab) {
        (bb.0, ab.1)
    } else if a.covers(b) || b.covers(a) {
        return Err(NotCombinable::Nested);
    } else {
        return Err(NotCombinable::Disjoint);
    };
    let mut out = p1.clone();
    out.constraints[v] = Constraint::Interval(merged.0, merged.1);
    Ok(out)
}

/// Drops every interval spanning `0..=k-1`. Sound only for finite inputs.
pub fn eliminate_full_range(meta: &[Implicant], k: u32) -> Vec<Implicant> {
    meta.iter()
        .map(|p| {
            let mut p = p.clone();
            for c in &mut p.constraints {
                if *c != Constraint::Free && c.bounds(k) == (0, k - 1) {
                    *c = Constraint::Free;
                }
            }
            p
        })
        .collect()
}

fn merge_on(meta: Vec<Implicant>, v: usize) -> Vec<Implicant> {
    let mut out = Vec::new();
    let mut groups: BTreeMap<(Vec<Constraint>, Vec<crate::expr::Expr>), Vec<Implicant>> =
        BTreeMap::new();
    for p in meta {
        if p.constraints[v] == Constraint::Free {
            out.push(p);
            continue;
        }
        let mut key = p.constraints.clone();
        key[v] = Constraint::Free;
        groups.entry((key, p.shared.clone())).or_default().push(p);
    }
    for (_, mut group) in groups {
        group.sort_by_key(|p| p.constraints[v].bounds(u32::MAX));
        let mut iter = group.into_iter();
        let mut acc = iter.next().expect("groups are non-empty");
        for p in iter {
            match combine_implicants(&acc, &p) {
                Ok(m) => acc = m,
                Err(NotCombinable::Nested) | Err(NotCombinable::Identical) => {}
                Err(_) => out.push(std::mem::replace(&mut acc, p)),
            }
        }
        out.push(acc);
    }
    out
}

fn absorb(meta: Vec<Implicant>) -> Vec<Implicant> {
    let covers = |p: &Implicant, q: &Implicant| {
        p.cap == q.cap
            && p.shared == q.shared
            && p.constraints
                .iter()
                .zip(&q.constraints)
                .all(|(a, b)| a.covers(*b))
    };
    let mut keep: Vec<Implicant> = Vec::new();
    for (i, q) in meta.iter().enumerate() {
        let absorbed = meta
            .iter()
            .enumerate()
            .any(|(j, p)| j != i && covers(p, q) && (!covers(q, p) || j < i));
        if !absorbed {
            keep.push(q.clone());
        }
    }
    keep
}

fn minimize_meta(meta: &[Implicant], q: usize, k: u32, finite: bool) -> Vec<Implicant> {
    let mut cur: Vec<Implicant> = meta
        .iter()
        .map(|p| Implicant {
            constraints: p.constraints.iter().map(|c| c.normalized()).collect(),
            ..p.clone()
        })
        .collect();
    cur.sort();
    cur.dedup();
    loop {
        let before = cur.clone();
        for v in 0..q {
            cur = merge_on(cur, v);
        }
        if finite {
            cur = eliminate_full_range(&cur, k);
        }
        cur = absorb(cur);
        cur.sort();
        if cur == before {
            break;
        }
    }
    cur
}

/// Combines implicants to a fixpoint, scanning variables in order and
/// intervals by low end, then eliminates full-range variables when inputs
/// are finite. Equivalent to the input on every finite volley; not claimed
/// minimal.
///
/// When an output is total, its largest meta implicant becomes the bare cap:
/// wherever a smaller meta fires the min ignores it, and everywhere else it
/// is the only one that fires.
pub fn minimize(form: &StandardForm) -> StandardForm {
    let q = form.inputs.len();
    let mut out = form.clone();
    for o in &mut out.outputs {
        let top = o.metas.keys().next_back().copied();
        for (&cap, meta) in o.metas.iter_mut() {
            let mut m = minimize_meta(meta, q, form.k, form.finite_inputs);
            if (o.total && Some(cap) == top) || m.iter().any(Implicant::is_constant) {
                m = vec![Implicant::constant(q, cap)];
            }
            for p in &mut m {
                for c in &mut p.constraints {
                    *c = c.tidied();
                }
            }
            *meta = m;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::network::Volley;
    use crate::synth::{eval_form, table_to_minterms, FunctionTable};
    use crate::value::{Finite, Inf, TValue};
    use Constraint::*;

    fn imp(cs: &[Constraint], cap: u32) -> Implicant {
        Implicant {
            constraints: cs.to_vec(),
            shared: vec![],
            cap,
        }
    }

    fn names() -> Vec<String> {
        vec!["A".into(), "B".into()]
    }

    #[test]
    fn worked_combination() {
        let m = combine_implicants(&imp(&[Eq(0), Eq(1)], 5), &imp(&[Eq(0), Eq(2)], 5)).unwrap();
        assert_eq!(m, imp(&[Eq(0), Interval(1, 2)], 5));
        assert_eq!(
            m.to_expr(&names(), 4, true),
            parse("A == 0 | 1 <= B | B <= 2 | 5").unwrap()
        );
    }

    #[test]
    fn combining_preconditions() {
        let a = imp(&[Eq(0), Interval(0, 1)], 5);
        assert_eq!(
            combine_implicants(&a, &imp(&[Eq(0), Eq(3)], 5)),
            Err(NotCombinable::Disjoint)
        );
        assert_eq!(
            combine_implicants(&a, &imp(&[Eq(0), Eq(2)], 4)),
            Err(NotCombinable::CapMismatch)
        );
        assert_eq!(
            combine_implicants(&a, &imp(&[Eq(1), Eq(2)], 5)),
            Err(NotCombinable::DiffersInMany)
        );
        assert_eq!(
            combine_implicants(&imp(&[Eq(0), Interval(0, 2)], 5), &imp(&[Eq(0), Eq(1)], 5)),
            Err(NotCombinable::Nested)
        );
        assert_eq!(
            combine_implicants(&a, &imp(&[Eq(0), Free], 5)),
            Err(NotCombinable::FreeVariable)
        );
        assert_eq!(
            combine_implicants(&imp(&[Eq(0), Eq(2)], 5), &a).unwrap(),
            imp(&[Eq(0), Interval(0, 2)], 5)
        );
    }

    #[test]
    fn worked_elimination() {
        let p = imp(&[Eq(0), Interval(0, 3)], 4);
        let e = eliminate_full_range(std::slice::from_ref(&p), 4);
        assert_eq!(
            e[0].to_expr(&names(), 4, true),
            parse("A == 0 | 4").unwrap()
        );
        let q = imp(&[Eq(0), Interval(0, 2)], 4);
        assert_eq!(eliminate_full_range(std::slice::from_ref(&q), 4), [q]);
    }

    #[test]
    fn elimination_is_sound_on_finite_inputs() {
        let p = imp(&[Interval(1, 2), Interval(0, 3)], 5);
        let e = &eliminate_full_range(std::slice::from_ref(&p), 4)[0];
        for a in 0..4 {
            for b in 0..4 {
                let env = [("A", Finite(a)), ("B", Finite(b))];
                assert_eq!(
                    p.to_expr(&names(), 4, false).eval(&env, 4).unwrap(),
                    e.to_expr(&names(), 4, true).eval(&env, 4).unwrap()
                );
            }
        }
    }

    #[test]
    fn cout_minimizes_to_four_and_a_constant() {
        let form = table_to_minterms(&FunctionTable::half_adder());
        let min = minimize(&form);
        let c = min.output("Cout").unwrap();
        assert_eq!(c.metas[&4].len(), 4);
        assert_eq!(c.metas[&5], [Implicant::constant(2, 5)]);
        let published = parse(
            "(A == 0 | 4) & (B == 0 | 4) & (A == 1 | B <= 2 | 4) & (B == 1 | A <= 2 | 4) & 5",
        )
        .unwrap();
        let ours = min.output_expr(c);
        for a in 0..4 {
            for b in 0..4 {
                let env = [("A", Finite(a)), ("B", Finite(b))];
                assert_eq!(
                    ours.eval(&env, 4).unwrap(),
                    published.eval(&env, 4).unwrap()
                );
            }
        }
    }

    #[test]
    fn minimal_input_is_unchanged() {
        let t = FunctionTable::new(4, &["A", "B"], &["Y"]).row(&[0, 1], &[Finite(1)]);
        let form = table_to_minterms(&t);
        assert_eq!(minimize(&form), form);
    }

    #[test]
    fn minimize_is_deterministic() {
        let form = table_to_minterms(&FunctionTable::half_adder());
        assert_eq!(minimize(&form), minimize(&form));
        assert_eq!(minimize(&minimize(&form)), minimize(&form));
    }

    #[test]
    fn partial_table_keeps_its_cares() {
        let t = FunctionTable::new(3, &["A", "B"], &["Y"])
            .row(&[0, 0], &[Finite(2)])
            .row(&[1, 0], &[Finite(2)])
            .row(&[2, 0], &[Finite(2)])
            .row(&[1, 1], &[Finite(0)])
            .row(&[2, 2], &[Inf]);
        let form = table_to_minterms(&t);
        let min = minimize(&form);
        assert!(!min.finite_inputs);
        for (x, y) in &t.rows {
            let v: Volley = [
                ("A".to_string(), Finite(x[0])),
                ("B".to_string(), Finite(x[1])),
            ]
            .into();
            let want: TValue = y[0].shifted(3);
            assert_eq!(eval_form(&min, &v).unwrap()["Y"], want, "{x:?}");
        }
    }
}
