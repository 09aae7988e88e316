//! The two exact base algorithms and the constant-one helper.
//!
//! Gate matrices act on row vectors (`state · U`). They were solved from the
//! per-input state tables the algorithms must reproduce: each unitary is fixed
//! by the states it has to map into one another, and the remaining freedom in
//! the first gate is completed to a real orthogonal matrix.

use std::f64::consts::FRAC_1_SQRT_2 as S;

use crate::algorithm::{Measurement, Qqa, QueryGate, Step};
use crate::error::{Error, Result};
use crate::linalg::{SquareMatrix, StateVector};

/// `1/2 · [[1,1,1,1],[1,−1,1,−1],[1,1,−1,−1],[1,−1,−1,1]]`; maps `e₁` to the
/// uniform superposition.
fn walsh4() -> SquareMatrix {
    SquareMatrix::from_real_rows(&[
        &[0.5, 0.5, 0.5, 0.5],
        &[0.5, -0.5, 0.5, -0.5],
        &[0.5, 0.5, -0.5, -0.5],
        &[0.5, -0.5, -0.5, 0.5],
    ])
    .expect("4×4")
}

fn unitary(rows: &[&[f64]]) -> Step {
    Step::Unitary(SquareMatrix::from_real_rows(rows).expect("square gate"))
}

/// Exact 2-query algorithm for `EQUALITY₃(x₁,x₂,x₃) = [x₁ = x₂ = x₃]` on four
/// amplitudes. Output 1 accepts.
///
/// Query 0 is `(x₁, x₂, x₁, x₂)`, query 1 is `(x₃, x₁, x₁, x₃)`. The second
/// amplitude of query 1 is zero on every input where `x₁ ≠ x₂` would matter,
/// so `x₂` there would work equally well.
pub fn equality3() -> Qqa {
    let steps = vec![
        Step::Unitary(walsh4()),
        Step::Query(QueryGate::from_one_based(&[1, 2, 1, 2])),
        // Rotates (α₂, α₃) to ((α₂+α₃)/√2, (α₃−α₂)/√2).
        unitary(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, S, -S, 0.0],
            &[0.0, S, S, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]),
        Step::Query(QueryGate::from_one_based(&[3, 1, 1, 3])),
        unitary(&[
            &[0.5, 0.5, 0.5, 0.5],
            &[S, 0.0, 0.0, -S],
            &[0.0, -S, S, 0.0],
            &[0.5, -0.5, -0.5, 0.5],
        ]),
    ];
    Qqa::new(3, StateVector::basis(4, 0), steps, Measurement::accepting(4, &[0])).expect("valid base algorithm")
}

/// Exact 2-query algorithm for `PAIR_EQUALITY₄ = [x₁ = x₂] ∧ [x₃ = x₄]` on
/// four amplitudes. Output 1 accepts; its amplitude is −1 on `0011` and `1100`.
pub fn pair_equality4() -> Qqa {
    let steps = vec![
        unitary(&[
            &[S, S, 0.0, 0.0],
            &[S, -S, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]),
        Step::Query(QueryGate::from_one_based(&[1, 2, 0, 0])),
        unitary(&[
            &[S, S, 0.0, 0.0],
            &[0.0, 0.0, S, S],
            &[S, -S, 0.0, 0.0],
            &[0.0, 0.0, S, -S],
        ]),
        Step::Query(QueryGate::from_one_based(&[3, 4, 3, 4])),
        Step::Unitary(walsh4()),
    ];
    Qqa::new(4, StateVector::basis(4, 0), steps, Measurement::accepting(4, &[0])).expect("valid base algorithm")
}

/// An algorithm over `amplitudes` basis states and `arity` variables that
/// stays in `e₁` and accepts only there. It carries `queries` empty query
/// steps so that it lines up with algorithms of that query count.
pub fn constant_one(amplitudes: usize, arity: usize, queries: usize) -> Result<Qqa> {
    if amplitudes == 0 {
        return Err(Error::InvalidParameter {
            name: "constant_one".into(),
            reason: "at least one amplitude is required".into(),
        });
    }
    let id = SquareMatrix::identity(amplitudes);
    let mut steps = vec![Step::Unitary(id.clone())];
    for _ in 0..queries {
        steps.push(Step::Query(QueryGate::none(amplitudes)));
        steps.push(Step::Unitary(id.clone()));
    }
    Qqa::new(
        arity,
        StateVector::basis(amplitudes, 0),
        steps,
        Measurement::accepting(amplitudes, &[0]),
    )
}

pub const BUILTIN_NAMES: [&str; 3] = ["equality3", "pair_equality4", "constant1"];

/// Looks up a built-in algorithm by name. `constant1` is the zero-query
/// one-amplitude algorithm on a single variable.
pub fn builtin(name: &str) -> Result<Qqa> {
    match name {
        "equality3" => Ok(equality3()),
        "pair_equality4" => Ok(pair_equality4()),
        "constant1" => constant_one(1, 1, 0),
        _ => Err(Error::UnknownFunction(format!("builtin:{name}"))),
    }
}
