use std::collections::{BTreeSet, HashMap};

use super::{Gate, GateOp, Netlist};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::value::AlgebraConfig;

/// Name of the reference input in emitted netlists.
pub const REFERENCE: &str = "R";

struct Emitter {
    net: Netlist,
    taken: BTreeSet<String>,
    memo: HashMap<Expr, String>,
    counter: usize,
}

impl Emitter {
    fn fresh(&mut self) -> String {
        loop {
            let name = format!("g{}", self.counter);
            self.counter += 1;
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }

    fn tap(n: u32) -> String {
        if n == 0 {
            REFERENCE.to_string()
        } else {
            format!("{REFERENCE}_{n}")
        }
    }

    fn wire(&mut self, e: &Expr) -> String {
        if let Some(w) = self.memo.get(e) {
            return w.clone();
        }
        let w = match e {
            Expr::Var(v) => v.clone(),
            Expr::Const(n) => Self::tap(*n),
            Expr::Delay(inner, c) => {
                let a = self.wire(inner);
                let out = self.fresh();
                self.net
                    .gates
                    .push(Gate::new(&out, GateOp::Delay(*c), &[&a]));
                out
            }
            Expr::Bin(op, l, r) => {
                let a = self.wire(l);
                let b = self.wire(r);
                let out = self.fresh();
                self.net
                    .gates
                    .push(Gate::new(&out, GateOp::Binary(*op), &[&a, &b]));
                out
            }
        };
        self.memo.insert(e.clone(), w.clone());
        w
    }
}

/// Lowers named equations to one netlist.
///
/// Inputs are the reference `R` followed by the variables in sorted order.
/// When any constant appears, a single gamma chain of `k-1` unit delays
/// provides taps `R_1..R_{k-1}`; a constant `n >= k` reads tap `n-k` through
/// a `next` gate named `R_n`. Structurally equal subterms share one gate, so
/// the logic gate count equals [`crate::expr::gate_cost`].
pub fn expr_to_netlist(exprs: &[(String, Expr)], k: u32) -> Result<Netlist> {
    AlgebraConfig::new(k)?;
    let max = 2 * k - 1;
    let mut vars = BTreeSet::new();
    let mut top = None;
    for (_, e) in exprs {
        if let Some(n) = e.max_const() {
            if n > max {
                return Err(Error::RefConstRange { value: n, max });
            }
            top = Some(top.map_or(n, |t: u32| t.max(n)));
        }
        vars.extend(e.vars());
    }
    vars.remove(REFERENCE);

    let mut net = Netlist::new(k);
    net.inputs.push(REFERENCE.to_string());
    net.inputs.extend(vars.iter().cloned());
    net.reference = Some(REFERENCE.to_string());

    let mut taken: BTreeSet<String> = net.inputs.iter().cloned().collect();
    taken.extend(exprs.iter().map(|(n, _)| n.clone()));
    if let Some(top) = top {
        for n in 1..k {
            let name = Emitter::tap(n);
            net.gates
                .push(Gate::new(&name, GateOp::Delay(1), &[&Emitter::tap(n - 1)]));
            taken.insert(name);
        }
        for n in k..=top {
            let name = Emitter::tap(n);
            net.gates
                .push(Gate::new(&name, GateOp::Next, &[&Emitter::tap(n - k)]));
            taken.insert(name);
        }
    }

    let mut em = Emitter {
        net,
        taken,
        memo: HashMap::new(),
        counter: 0,
    };
    for (name, e) in exprs {
        if em.net.outputs.iter().any(|(n, _)| n == name) {
            return Err(Error::Netlist(format!("output `{name}` declared twice")));
        }
        let w = em.wire(e);
        let fresh_gate = em.net.gates.last().is_some_and(|g| g.output == w)
            && w.starts_with('g')
            && !em.net.outputs.iter().any(|(_, ow)| *ow == w)
            && !em.net.inputs.contains(name);
        if fresh_gate {
            // name the root gate after its output line
            em.net.gates.last_mut().unwrap().output = name.clone();
            em.memo.insert(e.clone(), name.clone());
            em.net.outputs.push((name.clone(), name.clone()));
        } else {
            em.net.outputs.push((name.clone(), w));
        }
    }
    Ok(em.net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::enumerate;
    use crate::expr::{gate_cost, parse};
    use crate::network::Volley;
    use crate::value::{Finite, Inf, TValue};

    fn cout() -> Expr {
        parse("(A == 0 | 4) & (B == 0 | 4) & (A == 1 | B <= 2 | 4) & (B == 1 | A <= 2 | 4) & 5")
            .unwrap()
    }

    #[test]
    fn cout_uses_only_the_gamma_chain() {
        let net = expr_to_netlist(&[("Cout".into(), cout())], 4).unwrap();
        let delays: Vec<_> = net
            .gates
            .iter()
            .filter(|g| matches!(g.op, GateOp::Delay(_)))
            .collect();
        assert_eq!(delays.len(), 3);
        assert!(delays.iter().all(|g| g.op == GateOp::Delay(1)));
        assert!(net.gates.iter().any(|g| g.op == GateOp::Next));
        assert_eq!(net.logic_gate_count(), gate_cost([&cout()]).total());
        assert!(net.validate().is_ok());
    }

    #[test]
    fn single_variable_is_a_pass_through() {
        let net = expr_to_netlist(&[("Y".into(), Expr::var("A"))], 4).unwrap();
        assert!(net.gates.is_empty());
        assert_eq!(net.outputs, [("Y".to_string(), "A".to_string())]);
        let out = net
            .evaluate(&Volley::from([("A".to_string(), Finite(2))]))
            .unwrap();
        assert_eq!(out["Y"], Finite(2));
    }

    #[test]
    fn constant_out_of_range() {
        let e = parse("A | 8").unwrap();
        assert_eq!(
            expr_to_netlist(&[("Y".into(), e)], 4),
            Err(Error::RefConstRange { value: 8, max: 7 })
        );
    }

    #[test]
    fn shared_terms_become_shared_gates() {
        let a = parse("(A == B) | 4").unwrap();
        let b = parse("(A == B) | 5").unwrap();
        let net = expr_to_netlist(&[("X".into(), a.clone()), ("Y".into(), b.clone())], 4).unwrap();
        assert_eq!(net.logic_gate_count(), 3);
        assert_eq!(net.logic_gate_count(), gate_cost([&a, &b]).total());
    }

    #[test]
    fn emitted_netlist_agrees_with_expression() {
        let exprs = [
            "A == 0 | B == 0 | 4",
            "xmin(A, B+1) & 2",
            "(A < B) | (B >= 1) & A+3",
            "(A != B) == 1 | 6",
        ];
        for src in exprs {
            let e = parse(src).unwrap();
            let net = expr_to_netlist(&[("Y".into(), e.clone())], 4).unwrap();
            let checked = net.validate().unwrap();
            for x in enumerate(2, 4).unwrap() {
                let env = [("A", x[0]), ("B", x[1])];
                let want = e.eval(&env, 4).unwrap();
                let vol: Volley = [("A".to_string(), x[0]), ("B".to_string(), x[1])].into();
                assert_eq!(checked.evaluate(&vol).unwrap()["Y"], want, "{src} at {x:?}");
            }
        }
    }

    #[test]
    fn minterm_netlist_examples() {
        let e = parse("A == 0 | B == 0 | 4").unwrap();
        let net = expr_to_netlist(&[("Y".into(), e)], 4).unwrap();
        let v = |a: u32, b: u32| -> TValue {
            let vol: Volley = [("A".to_string(), Finite(a)), ("B".to_string(), Finite(b))].into();
            net.evaluate(&vol).unwrap()["Y"]
        };
        assert_eq!(v(0, 1), Inf);
        assert_eq!(v(0, 0), Finite(4));
    }
}
