//! Transformations that turn one exact algorithm into another exact
//! algorithm with the same query count.

use num_complex::Complex64;

use crate::algorithm::{Measurement, Property, Qqa, QueryGate, Step};
use crate::boolfun::TruthTable;
use crate::error::{Error, Result};
use crate::linalg::{Permutation, SquareMatrix};

/// The function an exact algorithm computes, or `NotExact` with the
/// probability of its most likely answer on the worst input.
pub fn exact_function(a: &Qqa) -> Result<TruthTable> {
    let outcomes = a.outcome_table();
    let worst = outcomes.iter().map(|o| o.zero.max(o.one)).fold(1.0, f64::min);
    if worst < 1.0 - crate::algorithm::PROBABILITY_TOLERANCE {
        return Err(Error::NotExact(worst));
    }
    a.computed_function()
}

/// Flips every output value, so the result computes the complement.
pub fn invert_outputs(a: &Qqa) -> Result<Qqa> {
    exact_function(a)?;
    let flipped = a.measurement().values().iter().map(|v| !v).collect();
    a.with_measurement(Measurement::new(flipped))
}

/// Moves the value assigned to output `i` onto output `sigma(i)`.
pub fn permute_outputs(a: &Qqa, sigma: &Permutation) -> Result<Qqa> {
    if sigma.len() != a.amplitudes() {
        return Err(Error::DimensionMismatch {
            expected: a.amplitudes(),
            found: sigma.len(),
        });
    }
    if !a.check_property(Property::P1) {
        return Err(Error::PropertyViolated(Property::P1.name()));
    }
    let old = a.measurement().values();
    let mut values = vec![false; old.len()];
    for (i, &v) in old.iter().enumerate() {
        values[sigma.image(i)] = v;
    }
    a.with_measurement(Measurement::new(values))
}

/// Replaces every queried variable `k` by `sigma(k)`. If `a` computes `f`,
/// the result computes `g(X) = f(x_{σ(1)}, …, x_{σ(n)})`.
pub fn permute_variables(a: &Qqa, sigma: &Permutation) -> Result<Qqa> {
    if sigma.len() != a.arity() {
        return Err(Error::DimensionMismatch {
            expected: a.arity(),
            found: sigma.len(),
        });
    }
    let steps = a
        .steps()
        .iter()
        .map(|s| match s {
            Step::Query(q) => Step::Query(QueryGate::new(
                q.assignments().iter().map(|k| k.map(|k| sigma.image(k))).collect(),
            )),
            other => other.clone(),
        })
        .collect();
    Qqa::new(a.arity(), a.initial().clone(), steps, a.measurement().clone())
}

/// Turns an algorithm whose accepting amplitude is always 0 or −1 into one
/// where it is 0 or +1 by appending a diagonal gate with −1 on the accepting
/// output.
pub fn normalize_accepting_sign(a: &Qqa) -> Result<Qqa> {
    if !a.check_property(Property::P2Minus) {
        return Err(Error::PropertyViolated(Property::P2Minus.name()));
    }
    let acc = a.measurement().single_accepting().expect("checked by the property");
    let diag: Vec<Complex64> = (0..a.amplitudes())
        .map(|i| Complex64::new(if i == acc { -1.0 } else { 1.0 }, 0.0))
        .collect();
    let mut steps = a.steps().to_vec();
    steps.push(Step::Unitary(SquareMatrix::diagonal(&diag)));
    Qqa::new(a.arity(), a.initial().clone(), steps, a.measurement().clone())
}

/// Returns `a` unchanged if it has the positive accepting sign, normalizes it
/// if it has the negative one, and fails otherwise.
pub fn ensure_positive_accept(a: &Qqa) -> Result<Qqa> {
    if a.check_property(Property::P2Plus) {
        Ok(a.clone())
    } else if a.check_property(Property::P2Minus) {
        normalize_accepting_sign(a)
    } else {
        Err(Error::PropertyViolated("Property 2+ (or 2-)"))
    }
}
