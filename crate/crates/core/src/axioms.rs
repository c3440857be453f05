//! Exhaustive checks of the space-time function properties: causality and
//! (finite) invariance.
//!
//! Every check enumerates the full input domain. Domains above
//! [`ENUMERATION_CAP`] tuples are refused, so a pass always means "checked
//! everywhere". [`sample_st_function`] is the separately labelled random mode.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::value::{delay_finite, AlgebraConfig, Finite, Inf, TValue};

pub const ENUMERATION_CAP: u128 = 10_000_000;

/// Which invariance rule a function is held to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AlgebraMode {
    /// `S_k`: shifting an input at `k-1` sends it to `inf`, and a result that
    /// would reach `k` must become `inf`.
    #[default]
    Finite,
    /// Unbounded times: every shift is exact. Used for networks whose values
    /// are referenced past the end of the cycle.
    Unbounded,
}

impl AlgebraMode {
    fn shift_input(self, x: TValue, k: u32) -> TValue {
        match self {
            AlgebraMode::Finite => delay_finite(x, 1, k),
            AlgebraMode::Unbounded => x.shifted(1),
        }
    }

    fn expected_after_shift(self, z: TValue, k: u32) -> TValue {
        match (self, z) {
            (AlgebraMode::Finite, Finite(t)) if t + 1 < k => Finite(t + 1),
            (AlgebraMode::Finite, _) => Inf,
            (AlgebraMode::Unbounded, z) => z.shifted(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    /// An input later than the output influenced it.
    CausalityLate {
        position: usize,
    },
    /// A finite output earlier than every input.
    CausalityEarly,
    Invariance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub property: Property,
    pub inputs: Vec<TValue>,
    pub output: TValue,
    /// Value observed on the perturbed (or shifted) inputs.
    pub observed: TValue,
    pub expected: TValue,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple = self
            .inputs
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        match &self.property {
            Property::CausalityLate { position } => write!(
                f,
                "causality (late input #{position}) at ({tuple}) -> {}: with inf there got {}, expected {}",
                self.output, self.observed, self.expected
            ),
            Property::CausalityEarly => write!(
                f,
                "causality (output before every input) at ({tuple}) -> {}",
                self.output
            ),
            Property::Invariance => write!(
                f,
                "invariance at ({tuple}) -> {}: shifted inputs gave {}, expected {}",
                self.output, self.observed, self.expected
            ),
        }
    }
}

pub type Verdict = std::result::Result<(), Counterexample>;

/// All of `S_k^q` in lexicographic order (values `0..k-1` then `inf`, first
/// position most significant).
pub fn enumerate(q: usize, k: u32) -> Result<TupleIter> {
    let tuples = (k as u128 + 1).checked_pow(q as u32).unwrap_or(u128::MAX);
    if tuples > ENUMERATION_CAP {
        return Err(Error::DomainTooLarge {
            tuples,
            cap: ENUMERATION_CAP,
        });
    }
    AlgebraConfig::new(k)?;
    Ok(TupleIter {
        k,
        digits: vec![0; q],
        done: false,
    })
}

pub struct TupleIter {
    k: u32,
    digits: Vec<u32>,
    done: bool,
}

impl Iterator for TupleIter {
    type Item = Vec<TValue>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let k = self.k;
        let item = self
            .digits
            .iter()
            .map(|&d| if d == k { Inf } else { Finite(d) })
            .collect();
        // advance, least significant position last
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.digits[i] < k {
                self.digits[i] += 1;
                break;
            }
            self.digits[i] = 0;
        }
        Some(item)
    }
}

fn invariance_at<F>(f: &F, x: &[TValue], z: TValue, k: u32, mode: AlgebraMode) -> Verdict
where
    F: Fn(&[TValue]) -> TValue,
{
    let shifted: Vec<TValue> = x.iter().map(|&v| mode.shift_input(v, k)).collect();
    let observed = f(&shifted);
    let expected = mode.expected_after_shift(z, k);
    if observed != expected {
        return Err(Counterexample {
            property: Property::Invariance,
            inputs: x.to_vec(),
            output: z,
            observed,
            expected,
        });
    }
    Ok(())
}

fn causality_at<F>(f: &F, x: &[TValue], z: TValue) -> Verdict
where
    F: Fn(&[TValue]) -> TValue,
{
    if let Finite(_) = z {
        let earliest = x.iter().copied().min().unwrap_or(Inf);
        if z < earliest {
            return Err(Counterexample {
                property: Property::CausalityEarly,
                inputs: x.to_vec(),
                output: z,
                observed: z,
                expected: Inf,
            });
        }
    }
    let mut probe = x.to_vec();
    for (j, &xj) in x.iter().enumerate() {
        if xj > z && !xj.is_inf() {
            probe[j] = Inf;
            let observed = f(&probe);
            probe[j] = xj;
            if observed != z {
                return Err(Counterexample {
                    property: Property::CausalityLate { position: j },
                    inputs: x.to_vec(),
                    output: z,
                    observed,
                    expected: z,
                });
            }
        }
    }
    Ok(())
}

/// Exhaustively checks the finite invariance rule over `S_k^q`.
pub fn check_finite_invariance<F>(f: F, q: usize, k: u32) -> Result<Verdict>
where
    F: Fn(&[TValue]) -> TValue,
{
    check_invariance(f, q, k, AlgebraMode::Finite)
}

pub fn check_invariance<F>(f: F, q: usize, k: u32, mode: AlgebraMode) -> Result<Verdict>
where
    F: Fn(&[TValue]) -> TValue,
{
    for x in enumerate(q, k)? {
        let z = f(&x);
        if let Err(cx) = invariance_at(&f, &x, z, k, mode) {
            return Ok(Err(cx));
        }
    }
    Ok(Ok(()))
}

/// Exhaustively checks both causality clauses over `S_k^q`.
pub fn check_causality<F>(f: F, q: usize, k: u32) -> Result<Verdict>
where
    F: Fn(&[TValue]) -> TValue,
{
    for x in enumerate(q, k)? {
        let z = f(&x);
        if let Err(cx) = causality_at(&f, &x, z) {
            return Ok(Err(cx));
        }
    }
    Ok(Ok(()))
}

/// Causality and invariance together, reporting the first violation in
/// enumeration order (causality is checked first at each tuple).
pub fn check_st_function<F>(f: F, q: usize, k: u32, mode: AlgebraMode) -> Result<Verdict>
where
    F: Fn(&[TValue]) -> TValue,
{
    for x in enumerate(q, k)? {
        let z = f(&x);
        if let Err(cx) = causality_at(&f, &x, z) {
            return Ok(Err(cx));
        }
        if let Err(cx) = invariance_at(&f, &x, z, k, mode) {
            return Ok(Err(cx));
        }
    }
    Ok(Ok(()))
}

/// Random-sampling variant for domains beyond the enumeration cap. A pass
/// here is evidence, not proof.
pub fn sample_st_function<F>(
    f: F,
    q: usize,
    k: u32,
    mode: AlgebraMode,
    samples: usize,
    seed: u64,
) -> Result<Verdict>
where
    F: Fn(&[TValue]) -> TValue,
{
    AlgebraConfig::new(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x: Vec<TValue> = (0..q)
            .map(|_| {
                let d = rng.gen_range(0..=k);
                if d == k {
                    Inf
                } else {
                    Finite(d)
                }
            })
            .collect();
        let z = f(&x);
        if let Err(cx) = causality_at(&f, &x, z) {
            return Ok(Err(cx));
        }
        if let Err(cx) = invariance_at(&f, &x, z, k, mode) {
            return Ok(Err(cx));
        }
    }
    Ok(Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{apply_binary, BinOp};

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<_> = enumerate(2, 2).unwrap().collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![Finite(0), Finite(0)]);
        assert_eq!(all[1], vec![Finite(0), Finite(1)]);
        assert_eq!(all[2], vec![Finite(0), Inf]);
        assert_eq!(all[8], vec![Inf, Inf]);
        assert_eq!(enumerate(0, 3).unwrap().count(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        // 11^7 = 19_487_171 > 10^7
        assert!(matches!(
            enumerate(7, 10),
            Err(Error::DomainTooLarge { .. })
        ));
        assert!(enumerate(6, 10).is_ok());
    }

    #[test]
    fn min_is_finitely_invariant() {
        let v = check_finite_invariance(|x| apply_binary(BinOp::Min, x[0], x[1]), 2, 4).unwrap();
        assert_eq!(v, Ok(()));
    }

    #[test]
    fn constant_fails_at_origin() {
        let cx = check_finite_invariance(|_| Finite(0), 2, 4)
            .unwrap()
            .unwrap_err();
        assert_eq!(cx.inputs, vec![Finite(0), Finite(0)]);
        assert_eq!(cx.observed, Finite(0));
        assert_eq!(cx.expected, Finite(1));
    }

    #[test]
    fn unit_delay_is_finitely_invariant() {
        let v = check_finite_invariance(|x| delay_finite(x[0], 1, 4), 1, 4).unwrap();
        assert_eq!(v, Ok(()));
    }

    #[test]
    fn every_operator_is_a_finite_st_function() {
        for k in [2, 3, 5] {
            for op in BinOp::ALL {
                let v =
                    check_st_function(|x| apply_binary(op, x[0], x[1]), 2, k, AlgebraMode::Finite)
                        .unwrap();
                assert_eq!(v, Ok(()), "{op} at k={k}");
            }
        }
    }

    #[test]
    fn subtraction_is_not_causal() {
        let back = |x: &[TValue]| match x[0] {
            Finite(t) => Finite(t.saturating_sub(1)),
            Inf => Inf,
        };
        let cx = check_st_function(back, 1, 4, AlgebraMode::Finite)
            .unwrap()
            .unwrap_err();
        assert_eq!(cx.inputs, vec![Finite(0)]);
        let cx = check_causality(back, 1, 4).unwrap().unwrap_err();
        assert_eq!(cx.property, Property::CausalityEarly);
        assert_eq!(cx.inputs, vec![Finite(1)]);
    }

    #[test]
    fn late_input_influence_is_caught() {
        // Returns a, but only if b ever arrives: b > a still matters.
        let f = |x: &[TValue]| if x[1].is_inf() { Inf } else { x[0] };
        let cx = check_causality(f, 2, 3).unwrap().unwrap_err();
        assert_eq!(cx.property, Property::CausalityLate { position: 1 });
        assert_eq!(cx.inputs, vec![Finite(0), Finite(1)]);
    }

    #[test]
    fn sampling_mode_agrees_on_sound_operators() {
        let v = sample_st_function(
            |x| apply_binary(BinOp::Le, x[0], x[1]),
            2,
            16,
            AlgebraMode::Finite,
            2000,
            1,
        )
        .unwrap();
        assert_eq!(v, Ok(()));
    }
}
