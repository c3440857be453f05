//! Browser demo bindings.
//!
//! The exported functions take and return plain strings and numbers. The
//! logic lives in ordinary functions so it can be tested natively.

use wasm_bindgen::prelude::*;

use spacetime::expr::{gate_cost, parse};
use spacetime::fsm::{run_fsm, EventTrace, FsmKind, FsmSpec};
use spacetime::network::{Volley, REFERENCE};
use spacetime::synth::{equality_combine, minimize, table_to_minterms, FunctionTable};
use spacetime::TValue;

/// Value of `expr` at every `(A, B)` in `S_k × S_k`, row-major with `A` as
/// the row; `inf` is the last row and column. Never-firing cells are `-1`.
pub fn heatmap_values(expr: &str, k: u32) -> Result<Vec<i32>, String> {
    let e = parse(expr).map_err(|e| e.to_string())?;
    let axis: Vec<TValue> = (0..k).map(TValue::Finite).chain([TValue::Inf]).collect();
    let mut out = Vec::with_capacity(axis.len() * axis.len());
    for &a in &axis {
        for &b in &axis {
            let env: Volley = [
                ("A".to_string(), a),
                ("B".to_string(), b),
                (REFERENCE.to_string(), TValue::Finite(0)),
            ]
            .into();
            let v = e.eval(&env, k).map_err(|e| e.to_string())?;
            out.push(v.finite().map_or(-1, |t| t as i32));
        }
    }
    Ok(out)
}

/// Equations for a function table, followed by a cost line.
pub fn synthesize_text(table: &str, minimized: bool, combine: bool) -> Result<String, String> {
    let t: FunctionTable = table.parse().map_err(|e: spacetime::Error| e.to_string())?;
    let minterms = table_to_minterms(&t);
    let form = if minimized {
        minimize(&minterms)
    } else {
        minterms.clone()
    };
    let exprs = if combine {
        equality_combine(&form).exprs
    } else {
        form.to_exprs()
    };
    let mut out = String::new();
    for (name, e) in &exprs {
        out += &format!("{name} = {e}\n");
    }
    let before = minterms.cost();
    let after = gate_cost(exprs.iter().map(|(_, e)| e));
    out += &format!(
        "\ncost before: {} ({before})\ncost after: {} ({after})\n",
        before.total(),
        after.total()
    );
    Ok(out)
}

/// Runs a delay, min or max machine on a trace and draws each cycle as a
/// row of time slots, `|` marking a spike.
pub fn fsm_trace_text(op: &str, trace: &str, k: u32, resets: bool) -> Result<String, String> {
    let kind = match op {
        "delay" => FsmKind::Delay,
        "min" => FsmKind::Min,
        "max" => FsmKind::Max,
        _ => return Err(format!("no machine for `{op}`")),
    };
    let input: EventTrace = trace.parse().map_err(|e: spacetime::Error| e.to_string())?;
    let cycles = input.cycles().max(1);
    let run =
        run_fsm(&FsmSpec::builtin(kind), &input, k, cycles, resets).map_err(|e| e.to_string())?;
    let lines: &[&str] = if kind == FsmKind::Delay {
        &["a"]
    } else {
        &["a", "b"]
    };
    let row = |t: &EventTrace, c: u32, line: &str| -> String {
        let hits = t.times(c, line);
        (0..k)
            .map(|s| if hits.contains(&s) { '|' } else { '.' })
            .collect()
    };
    let mut out = String::new();
    for c in 0..=cycles {
        let tail = c == cycles;
        if tail && run.output.times(c, "y").is_empty() {
            break;
        }
        out += &format!("cycle {c}\n");
        if !tail {
            for l in lines {
                out += &format!("  {l}  {}\n", row(&input, c, l));
            }
        }
        out += &format!("  y  {}", row(&run.output, c, "y"));
        if let Some(s) = run.end_states.get(c as usize) {
            out += &format!("   end state {s:?}");
        }
        out.push('\n');
    }
    for v in &run.violations {
        out += &format!("{v}\n");
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn heatmap(expr: &str, k: u32) -> Result<Vec<i32>, JsError> {
    heatmap_values(expr, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn synthesize(table: &str, minimize: bool, equality_combine: bool) -> Result<String, JsError> {
    synthesize_text(table, minimize, equality_combine).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn fsm_trace(op: &str, trace: &str, k: u32, resets: bool) -> Result<String, JsError> {
    fsm_trace_text(op, trace, k, resets).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_heatmap() {
        let v = heatmap_values("A & B", 2).unwrap();
        assert_eq!(v, [0, 0, 0, 0, 1, 1, 0, 1, -1]);
    }

    #[test]
    fn unknown_variable_is_an_error() {
        assert!(heatmap_values("A & C", 2).is_err());
        assert!(heatmap_values("A &", 2).is_err());
    }

    #[test]
    fn diagonal_costs() {
        let t = "k=4\ninputs: A, B\noutputs: S\n0 0 : 0\n1 1 : 2\n2 2 : 0\n3 3 : 2\n";
        let s = synthesize_text(t, false, true).unwrap();
        assert!(
            s.contains("cost before: 19 ") && s.contains("cost after: 10 "),
            "{s}"
        );
    }

    #[test]
    fn min_trace_drawing() {
        let s = fsm_trace_text("min", "cycle 0: a@1, b@2\ncycle 1: b@0\n", 4, true).unwrap();
        assert!(
            s.starts_with("cycle 0\n  a  .|..\n  b  ..|.\n  y  .|.."),
            "{s}"
        );
        assert!(
            s.contains("cycle 1\n  a  ....\n  b  |...\n  y  |..."),
            "{s}"
        );
        assert!(fsm_trace_text("lt", "", 4, true).is_err());
    }
}
