//! Per-input state tables for the two base algorithms: the state after the
//! first query, after the second query, the final state and the result.
#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;

use qqa::{Bits, Qqa, StateVector};

pub type Row = (&'static str, &'static str, &'static str, &'static str, bool);

/// `h` is 1/2, `r` is 1/√2; either may carry a leading `-`.
pub fn state(spec: &str) -> StateVector {
    let values: Vec<f64> = spec
        .split(',')
        .map(|t| {
            let t = t.trim();
            let (sign, mag) = match t.strip_prefix('-') {
                Some(rest) => (-1.0, rest),
                None => (1.0, t),
            };
            sign * match mag {
                "0" => 0.0,
                "1" => 1.0,
                "h" => 0.5,
                "r" => FRAC_1_SQRT_2,
                other => panic!("bad token {other}"),
            }
        })
        .collect();
    StateVector::from_real(&values).unwrap()
}

pub const EQUALITY3_ROWS: [Row; 8] = [
    ("000", "h,h,h,h", "h,r,0,h", "1,0,0,0", true),
    ("001", "h,h,h,h", "-h,r,0,-h", "0,0,0,-1", false),
    ("010", "h,-h,h,-h", "h,0,r,-h", "0,0,1,0", false),
    ("011", "h,-h,h,-h", "-h,0,r,h", "0,-1,0,0", false),
    ("100", "-h,h,-h,h", "-h,0,r,h", "0,-1,0,0", false),
    ("101", "-h,h,-h,h", "h,0,r,-h", "0,0,1,0", false),
    ("110", "-h,-h,-h,-h", "-h,r,0,-h", "0,0,0,-1", false),
    ("111", "-h,-h,-h,-h", "h,r,0,h", "1,0,0,0", true),
];

pub const PAIR_EQUALITY4_ROWS: [Row; 16] = [
    ("0000", "r,r,0,0", "h,h,h,h", "1,0,0,0", true),
    ("0001", "r,r,0,0", "h,-h,h,-h", "0,1,0,0", false),
    ("0010", "r,r,0,0", "-h,h,-h,h", "0,-1,0,0", false),
    ("0011", "r,r,0,0", "-h,-h,-h,-h", "-1,0,0,0", true),
    ("0100", "r,-r,0,0", "h,h,-h,-h", "0,0,1,0", false),
    ("0101", "r,-r,0,0", "h,-h,-h,h", "0,0,0,1", false),
    ("0110", "r,-r,0,0", "-h,h,h,-h", "0,0,0,-1", false),
    ("0111", "r,-r,0,0", "-h,-h,h,h", "0,0,-1,0", false),
    ("1000", "-r,r,0,0", "-h,-h,h,h", "0,0,-1,0", false),
    ("1001", "-r,r,0,0", "-h,h,h,-h", "0,0,0,-1", false),
    ("1010", "-r,r,0,0", "h,-h,-h,h", "0,0,0,1", false),
    ("1011", "-r,r,0,0", "h,h,-h,-h", "0,0,1,0", false),
    ("1100", "-r,-r,0,0", "-h,-h,-h,-h", "-1,0,0,0", true),
    ("1101", "-r,-r,0,0", "-h,h,-h,h", "0,-1,0,0", false),
    ("1110", "-r,-r,0,0", "h,-h,h,-h", "0,1,0,0", false),
    ("1111", "-r,-r,0,0", "h,h,h,h", "1,0,0,0", true),
];

/// Checks every row; the error names the first mismatching input and column.
pub fn check_rows(a: &Qqa, rows: &[Row]) -> Result<(), String> {
    // Steps are U0 Q0 U1 Q1 U2, so states 2 and 4 follow the queries.
    if a.steps().len() != 5 {
        return Err(format!("expected 5 steps, found {}", a.steps().len()));
    }
    for &(input, after_q0, after_q1, last, result) in rows {
        let x: Bits = input.parse().map_err(|e| format!("{e}"))?;
        let trace = a.trace(&x).map_err(|e| e.to_string())?;
        let columns = [
            (2, after_q0, "after first query"),
            (4, after_q1, "after second query"),
            (5, last, "final state"),
        ];
        for (k, expected, column) in columns {
            if !trace.states[k].approx_eq(&state(expected), 1e-9) {
                return Err(format!("{input} {column}: got {}", trace.states[k]));
            }
        }
        let run = a.run(&x).map_err(|e| e.to_string())?;
        if (run.probabilities.of(result) - 1.0).abs() >= 1e-9 {
            return Err(format!(
                "{input}: result {} has probability {}",
                result as u8,
                run.probabilities.of(result)
            ));
        }
    }
    Ok(())
}

pub mod strategies {
    use std::f64::consts::PI;

    use proptest::prelude::*;
    use qqa::{baselib, Measurement, Permutation, Qqa, QueryGate, SquareMatrix, StateVector, Step};

    /// A product of Givens rotations on `m` amplitudes.
    fn rotation(m: usize) -> impl Strategy<Value = SquareMatrix> {
        prop::collection::vec((0..m, 0..m, -PI..PI), 1..4).prop_map(move |rs| {
            rs.into_iter()
                .filter(|(p, q, _)| p != q)
                .fold(SquareMatrix::identity(m), |acc, (p, q, t)| {
                    let (s, c) = t.sin_cos();
                    acc.mul(&SquareMatrix::two_level(m, p, q, [[c, s], [-s, c]])).unwrap()
                })
        })
    }

    fn query(m: usize, n: usize) -> impl Strategy<Value = QueryGate> {
        prop::collection::vec(prop::option::of(0..n), m).prop_map(QueryGate::new)
    }

    /// Random real algorithms on 2–4 amplitudes and 1–4 variables with up to
    /// three queries.
    pub fn algorithm() -> impl Strategy<Value = Qqa> {
        (2usize..=4, 1usize..=4).prop_flat_map(|(m, n)| {
            (
                rotation(m),
                prop::collection::vec((query(m, n), rotation(m)), 0..=3),
                prop::collection::vec(any::<bool>(), m),
            )
                .prop_map(move |(first, rounds, outputs)| {
                    let mut steps = vec![Step::Unitary(first)];
                    for (q, u) in rounds {
                        steps.push(Step::Query(q));
                        steps.push(Step::Unitary(u));
                    }
                    Qqa::new(n, StateVector::basis(m, 0), steps, Measurement::new(outputs)).unwrap()
                })
        })
    }

    pub fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|p| Permutation::new(p).unwrap())
    }

    pub fn algorithm_with_permutation() -> impl Strategy<Value = (Qqa, Permutation)> {
        algorithm().prop_flat_map(|a| {
            let n = a.arity();
            (Just(a), permutation(n))
        })
    }

    /// One of the base algorithms with random output and variable permutations.
    pub fn exact_sample() -> impl Strategy<Value = (Qqa, Permutation, Permutation)> {
        prop::bool::ANY.prop_flat_map(|four| {
            let a = if four {
                baselib::pair_equality4()
            } else {
                baselib::equality3()
            };
            let (m, n) = (a.amplitudes(), a.arity());
            (Just(a), permutation(m), permutation(n))
        })
    }
}
