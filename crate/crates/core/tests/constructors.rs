use std::f64::consts::FRAC_1_SQRT_2 as S;

use qqa::constructors::{
    and_construct, construct, majority3_construct, majority_even4_construct, or_construct, or_swap_gate, Method,
};
use qqa::linalg::UNITARY_TOLERANCE;
use qqa::{baselib, BinaryOp, Bits, Qqa, StateVector, Step, TruthTable};

fn bits(s: &str) -> Bits {
    s.parse().unwrap()
}

fn real(state: &StateVector) -> Vec<f64> {
    state.entries().iter().map(|z| z.re).collect()
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-9)
}

fn before_last(a: &Qqa, input: &Bits) -> StateVector {
    let t = a.trace(input).unwrap();
    t.states[t.states.len() - 2].clone()
}

fn eq3_block(v: bool) -> &'static str {
    if v {
        "000"
    } else {
        "001"
    }
}

#[test]
fn and_of_equalities_table() {
    let a = baselib::equality3();
    let built = and_construct(&a, &a).unwrap();
    let alg = &built.algorithm;
    assert_eq!(alg.amplitudes(), 8);
    assert_eq!(alg.query_count(), 2);
    let h = 0.5;
    // (f1, f2, before the last gate on the accepting pair, after it, P(1))
    let rows = [
        (false, false, [0.0, 0.0], [0.0, 0.0], 0.0),
        (false, true, [0.0, S], [h, -h], 0.25),
        (true, false, [S, 0.0], [h, h], 0.25),
        (true, true, [S, S], [1.0, 0.0], 1.0),
    ];
    for (f1, f2, before, after, p) in rows {
        let x = bits(&format!("{}{}", eq3_block(f1), eq3_block(f2)));
        let b = real(&before_last(alg, &x));
        assert!(close(&[b[0], b[4]], &before), "{x}: {b:?}");
        let r = alg.run(&x).unwrap();
        let fin = real(&r.final_state);
        assert!(close(&[fin[0], fin[4]], &after), "{x}: {fin:?}");
        assert!((r.probabilities.one - p).abs() < 1e-9);
    }
    let report = alg.verify(&built.target).unwrap();
    assert!((report.worst_case_p - 0.75).abs() < 1e-9);
    let expected =
        TruthTable::combine_disjoint(&TruthTable::equality3(), &TruthTable::equality3(), BinaryOp::And).unwrap();
    assert_eq!(built.target, expected);
}

#[test]
fn and_probability_over_all_inputs() {
    let a = baselib::equality3();
    let built = and_construct(&a, &a).unwrap();
    let eq = TruthTable::equality3();
    for x in Bits::all(6) {
        let b1 = eq.eval(&x[..3]).unwrap() as u8 as f64;
        let b2 = eq.eval(&x[3..]).unwrap() as u8 as f64;
        let p = built.algorithm.run(&x).unwrap().probabilities.one;
        assert!((p - (b1 + b2).powi(2) / 4.0).abs() < 1e-9, "{x}");
    }
}

#[test]
fn printed_swap_gate() {
    // Nonzero entry of each of the first ten rows (1-based column); the rest
    // is the identity.
    let printed = [1, 5, 3, 4, 2, 9, 7, 8, 6, 10];
    let u = or_swap_gate(0, 0);
    for row in 0..16 {
        let col = printed.get(row).map_or(row, |c| c - 1);
        for c in 0..16 {
            let expected = if c == col { 1.0 } else { 0.0 };
            assert_eq!(u.get(row, c).re, expected, "({row}, {c})");
            assert_eq!(u.get(row, c).im, 0.0);
        }
    }
}

#[test]
fn or_of_pair_equalities_cases() {
    let a = baselib::pair_equality4();
    let built = or_construct(&a, &a).unwrap();
    let alg = &built.algorithm;
    assert_eq!(alg.amplitudes(), 16);
    assert_eq!(alg.measurement().accepting_outputs(), vec![0, 1, 2, 6]);
    let pe = TruthTable::pair_equality4();
    let q = 1.0 / (2.0 * 2f64.sqrt());
    for x in Bits::all(8) {
        let f1 = pe.eval(&x[..4]).unwrap();
        let f2 = pe.eval(&x[4..]).unwrap();
        let before = real(&before_last(alg, &x));
        let fin: Vec<f64> = real(&alg.run(&x).unwrap().final_state)
            .iter()
            .map(|v| v.abs())
            .collect();
        let p = alg.run(&x).unwrap().probabilities.one;
        assert!(before[10..].iter().all(|v| v.abs() < 1e-9));
        match (f1, f2) {
            (true, true) => {
                assert!(close(&[before[0].abs(), before[1].abs()], &[S, S]));
                assert!(close(&fin[..2], &[1.0, 0.0]) || close(&fin[..2], &[0.0, 1.0]));
                assert!((p - 1.0).abs() < 1e-9);
            }
            (true, false) => {
                assert!(close(&[before[0].abs(), before[1]], &[S, 0.0]));
                assert!(close(&fin[..2], &[0.5, 0.5]));
                assert!(close(&fin[6..10], &[q; 4]));
                assert!((p - 0.625).abs() < 1e-9);
            }
            (false, true) => {
                assert!(close(&[before[0], before[1].abs()], &[0.0, S]));
                assert!(close(&fin[..2], &[0.5, 0.5]));
                assert!(close(&fin[2..6], &[q; 4]));
                assert!((p - 0.625).abs() < 1e-9);
            }
            (false, false) => {
                assert!(close(&before[..2], &[0.0, 0.0]));
                assert!(close(&fin[2..10], &[q; 8]));
                assert!((p - 0.25).abs() < 1e-9);
            }
        }
        // Rejected amplitudes sit in the first three slots of each block.
        assert!(before[5].abs() < 1e-9 && before[9].abs() < 1e-9);
    }
    let report = alg.verify(&built.target).unwrap();
    assert!((report.worst_case_p - 0.625).abs() < 1e-9);
}

#[test]
fn majority_even4_closed_form() {
    let a = baselib::equality3();
    let built = majority_even4_construct([&a, &a, &a, &a]).unwrap();
    let eq = TruthTable::equality3();
    assert_eq!(built.algorithm.arity(), 12);
    assert_eq!(built.algorithm.amplitudes(), 16);
    for x in Bits::all(12) {
        let b = x.chunks(3).filter(|c| eq.eval(c).unwrap()).count() as f64;
        let p = built.algorithm.run(&x).unwrap().probabilities.one;
        assert!((p - b * b / 16.0).abs() < 1e-9, "{x}");
        assert_eq!(built.target.eval(&x).unwrap(), b >= 3.0);
    }
    let report = built.algorithm.verify(&built.target).unwrap();
    assert!((report.worst_case_p - 9.0 / 16.0).abs() < 1e-9);
}

#[test]
fn majority3_matches_majority_of_three() {
    let a = baselib::equality3();
    let built = majority3_construct([&a, &a, &a]).unwrap();
    let eq = TruthTable::equality3();
    let maj = TruthTable::majority(3).unwrap();
    assert_eq!(built.algorithm.arity(), 9);
    for x in Bits::all(9) {
        let votes: Vec<bool> = x.chunks(3).map(|c| eq.eval(c).unwrap()).collect();
        assert_eq!(built.target.eval(&x).unwrap(), maj.eval(&votes).unwrap());
    }
    let report = built.algorithm.verify(&built.target).unwrap();
    assert!((report.worst_case_p - 9.0 / 16.0).abs() < 1e-9);
    assert_eq!(report.queries, 2);
}

#[test]
fn constructions_keep_gates_unitary_and_states_normalized() {
    let e = baselib::equality3();
    let p = baselib::pair_equality4();
    let builds = [
        construct(Method::And, &[e.clone(), e.clone()]).unwrap(),
        construct(Method::Or, &[e.clone(), p.clone()]).unwrap(),
        construct(Method::Majority3, &[e.clone(), e.clone(), e.clone()]).unwrap(),
    ];
    for built in builds {
        for step in built.algorithm.steps() {
            if let Step::Unitary(u) = step {
                assert!(u.is_unitary(UNITARY_TOLERANCE));
            }
        }
        for x in Bits::all(built.algorithm.arity()).step_by(7) {
            for s in built.algorithm.trace(&x).unwrap().states {
                assert!(s.is_normalized(1e-9));
            }
        }
        assert!(built.algorithm.verify(&built.target).unwrap().worst_case_p >= built.guaranteed_p - 1e-9);
    }
}
