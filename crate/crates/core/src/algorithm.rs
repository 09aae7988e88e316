//! Quantum query algorithms and their exhaustive simulation.
//!
//! An algorithm starts from a fixed state, applies an ordered list of
//! steps (input-independent unitaries and input-dependent query gates) and
//! finishes with a computational-basis measurement that maps each basis state
//! to an output bit. Its complexity is the number of query steps.

use std::fmt;

use num_complex::Complex64;

use crate::boolfun::{Bits, TruthTable, MAX_ARITY};
use crate::error::{Error, Result};
use crate::linalg::{SparseRows, SquareMatrix, StateVector, NORM_TOLERANCE, UNITARY_TOLERANCE};

/// Tolerance for probability comparisons. An algorithm is exact when its
/// worst-case success probability is at least `1 − PROBABILITY_TOLERANCE`.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// Tolerance on amplitude values in the property checks.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-9;

/// A query: amplitude `j` changes sign iff its assigned variable is 1.
/// `None` leaves the amplitude unchanged. Variable indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryGate(Vec<Option<usize>>);

impl QueryGate {
    pub fn new(assignments: Vec<Option<usize>>) -> Self {
        QueryGate(assignments)
    }

    /// Builds a gate from 1-based variable numbers, `0` meaning no variable.
    pub fn from_one_based(vars: &[usize]) -> Self {
        QueryGate(vars.iter().map(|&k| k.checked_sub(1)).collect())
    }

    /// A gate that queries nothing.
    pub fn none(amplitudes: usize) -> Self {
        QueryGate(vec![None; amplitudes])
    }

    pub fn assignments(&self) -> &[Option<usize>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn sign_flips<'a>(&'a self, input: &'a [bool]) -> impl Iterator<Item = bool> + 'a {
        self.0.iter().map(move |k| k.is_some_and(|k| input[k]))
    }

    pub(crate) fn apply_in_place(&self, state: &mut [Complex64], input: &[bool]) {
        for (a, flip) in state.iter_mut().zip(self.sign_flips(input)) {
            if flip {
                *a = -*a;
            }
        }
    }
}

/// The diagonal `±1` matrix of `gate` on `input`.
pub fn query_transform(gate: &QueryGate, input: &[bool]) -> Result<SquareMatrix> {
    if let Some(k) = gate.0.iter().flatten().find(|&&k| k >= input.len()) {
        return Err(Error::Malformed(format!(
            "query assigns variable x{} but the input has {} bits",
            k + 1,
            input.len()
        )));
    }
    let diag: Vec<Complex64> = gate
        .sign_flips(input)
        .map(|flip| Complex64::new(if flip { -1.0 } else { 1.0 }, 0.0))
        .collect();
    if diag.is_empty() {
        return Err(Error::Malformed("query gate has no amplitudes".into()));
    }
    Ok(SquareMatrix::diagonal(&diag))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Unitary(SquareMatrix),
    Query(QueryGate),
}

impl Step {
    pub fn is_query(&self) -> bool {
        matches!(self, Step::Query(_))
    }
}

/// Output bit assigned to each basis state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Measurement(Vec<bool>);

impl Measurement {
    pub fn new(values: Vec<bool>) -> Self {
        Measurement(values)
    }

    /// Value 1 on the (0-based) `accepting` outputs, 0 elsewhere.
    pub fn accepting(amplitudes: usize, accepting: &[usize]) -> Self {
        let mut values = vec![false; amplitudes];
        for &k in accepting {
            values[k] = true;
        }
        Measurement(values)
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn accepting_outputs(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &v)| v).map(|(i, _)| i).collect()
    }

    /// The accepting output when there is exactly one.
    pub fn single_accepting(&self) -> Option<usize> {
        match self.accepting_outputs().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }
}

/// Probabilities of observing output 0 and output 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeProbabilities {
    pub zero: f64,
    pub one: f64,
}

impl OutcomeProbabilities {
    pub fn of(&self, value: bool) -> f64 {
        if value {
            self.one
        } else {
            self.zero
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_state: StateVector,
    pub probabilities: OutcomeProbabilities,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub input: Bits,
    /// Initial state followed by the state after each step.
    pub states: Vec<StateVector>,
}

impl SimulationTrace {
    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trace holds at least the initial state")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    arity: usize,
    per_input: Vec<f64>,
    pub exact: bool,
    pub worst_case_p: f64,
    pub queries: usize,
}

impl VerificationReport {
    /// Success probability on every input, in table order.
    pub fn per_input(&self) -> impl Iterator<Item = (Bits, f64)> + '_ {
        self.per_input
            .iter()
            .enumerate()
            .map(|(i, &p)| (Bits::from_index(i, self.arity), p))
    }

    pub fn probability(&self, input: &[bool]) -> Option<f64> {
        (input.len() == self.arity).then(|| self.per_input[crate::boolfun::index_of(input)])
    }

    /// First input (in table order) attaining the worst-case probability.
    pub fn worst_input(&self) -> Bits {
        let idx = self
            .per_input
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        Bits::from_index(idx, self.arity)
    }

    /// Bounded-error success: every input is answered correctly with
    /// probability above 1/2.
    pub fn bounded_error(&self) -> bool {
        self.worst_case_p > 0.5 + PROBABILITY_TOLERANCE
    }
}

/// Output-amplitude conditions checked over all inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    /// Before measurement exactly one amplitude has squared magnitude 1.
    P1,
    /// One accepting output whose amplitude is always 0 or +1.
    P2Plus,
    /// One accepting output whose amplitude is always 0 or −1.
    P2Minus,
    /// `P1` plus one accepting output whose amplitude is always −1, 0 or +1.
    P3,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::P1 => "Property 1",
            Property::P2Plus => "Property 2+",
            Property::P2Minus => "Property 2-",
            Property::P3 => "Property 3",
        }
    }
}

/// A quantum query algorithm.
#[derive(Debug, Clone)]
pub struct Qqa {
    arity: usize,
    initial: StateVector,
    steps: Vec<Step>,
    measurement: Measurement,
    kernels: Vec<Option<SparseRows>>,
}

impl PartialEq for Qqa {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.initial == other.initial
            && self.steps == other.steps
            && self.measurement == other.measurement
    }
}

impl Qqa {
    /// Validates and builds an algorithm. Every unitary step must pass the
    /// unitarity check at [`UNITARY_TOLERANCE`] and the initial state must be
    /// normalized.
    pub fn new(arity: usize, initial: StateVector, steps: Vec<Step>, measurement: Measurement) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let m = initial.len();
        if !initial.is_normalized(NORM_TOLERANCE) {
            return Err(Error::Malformed(format!(
                "initial state has squared norm {:.12}",
                initial.norm_sqr()
            )));
        }
        if measurement.len() != m {
            return Err(Error::Malformed(format!(
                "measurement assigns {} outputs but the system has {m} amplitudes",
                measurement.len()
            )));
        }
        for (i, step) in steps.iter().enumerate() {
            match step {
                Step::Unitary(u) => {
                    if u.dim() != m {
                        return Err(Error::Malformed(format!(
                            "step {i}: {0}×{0} matrix on {m} amplitudes",
                            u.dim()
                        )));
                    }
                    let deviation = u.unitarity_deviation();
                    if deviation > UNITARY_TOLERANCE {
                        return Err(Error::NotUnitary { step: i, deviation });
                    }
                }
                Step::Query(q) => {
                    if q.len() != m {
                        return Err(Error::Malformed(format!(
                            "step {i}: query over {} amplitudes, expected {m}",
                            q.len()
                        )));
                    }
                    if let Some(k) = q.assignments().iter().flatten().find(|&&k| k >= arity) {
                        return Err(Error::Malformed(format!(
                            "step {i}: query assigns x{} but the algorithm has {arity} variables",
                            k + 1
                        )));
                    }
                }
            }
        }
        let kernels = steps
            .iter()
            .map(|s| match s {
                Step::Unitary(u) => Some(SparseRows::new(u)),
                Step::Query(_) => None,
            })
            .collect();
        Ok(Qqa {
            arity,
            initial,
            steps,
            measurement,
            kernels,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn amplitudes(&self) -> usize {
        self.initial.len()
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn measurement(&self) -> &Measurement {
        &self.measurement
    }

    /// Number of query steps.
    pub fn query_count(&self) -> usize {
        self.steps.iter().filter(|s| s.is_query()).count()
    }

    pub fn with_measurement(&self, measurement: Measurement) -> Result<Qqa> {
        Qqa::new(self.arity, self.initial.clone(), self.steps.clone(), measurement)
    }

    fn check_input(&self, input: &[bool]) -> Result<()> {
        if input.len() != self.arity {
            return Err(Error::InputLength {
                expected: self.arity,
                found: input.len(),
            });
        }
        Ok(())
    }

    /// Runs all steps, calling `observe` with the state after each one.
    fn simulate(&self, input: &[bool], mut observe: impl FnMut(&[Complex64])) -> Vec<Complex64> {
        let mut state = self.initial.entries().to_vec();
        let mut scratch = Vec::with_capacity(state.len());
        for (step, kernel) in self.steps.iter().zip(&self.kernels) {
            match (step, kernel) {
                (Step::Query(q), _) => q.apply_in_place(&mut state, input),
                (Step::Unitary(_), Some(k)) => {
                    k.apply(&state, &mut scratch);
                    std::mem::swap(&mut state, &mut scratch);
                }
                (Step::Unitary(_), None) => unreachable!("kernels are built for every unitary"),
            }
            observe(&state);
        }
        state
    }

    fn outcome(&self, state: &[Complex64]) -> OutcomeProbabilities {
        let (mut zero, mut one) = (0.0, 0.0);
        for (a, &v) in state.iter().zip(self.measurement.values()) {
            if v {
                one += a.norm_sqr();
            } else {
                zero += a.norm_sqr();
            }
        }
        OutcomeProbabilities { zero, one }
    }

    pub fn run(&self, input: &[bool]) -> Result<RunResult> {
        self.check_input(input)?;
        let state = self.simulate(input, |_| {});
        let probabilities = self.outcome(&state);
        Ok(RunResult {
            final_state: StateVector::new(state)?,
            probabilities,
        })
    }

    pub fn trace(&self, input: &[bool]) -> Result<SimulationTrace> {
        self.check_input(input)?;
        let mut states = vec![self.initial.clone()];
        self.simulate(input, |s| {
            states.push(StateVector::new(s.to_vec()).expect("finite state"))
        });
        Ok(SimulationTrace {
            input: Bits::new(input.to_vec()),
            states,
        })
    }

    /// Final states for every input, in table order.
    pub fn final_states(&self) -> Vec<StateVector> {
        Bits::all(self.arity)
            .map(|x| StateVector::new(self.simulate(&x, |_| {})).expect("finite state"))
            .collect()
    }

    /// Outcome probabilities for every input, in table order.
    pub fn outcome_table(&self) -> Vec<OutcomeProbabilities> {
        Bits::all(self.arity)
            .map(|x| self.outcome(&self.simulate(&x, |_| {})))
            .collect()
    }

    /// Success probability against `f` on every input.
    pub fn verify(&self, f: &TruthTable) -> Result<VerificationReport> {
        if f.arity() != self.arity {
            return Err(Error::ArityMismatch {
                algorithm: self.arity,
                function: f.arity(),
            });
        }
        let per_input: Vec<f64> = self
            .outcome_table()
            .iter()
            .enumerate()
            .map(|(i, o)| o.of(f.eval_index(i)))
            .collect();
        let worst_case_p = per_input.iter().copied().fold(1.0, f64::min).clamp(0.0, 1.0);
        Ok(VerificationReport {
            arity: self.arity,
            per_input,
            exact: worst_case_p >= 1.0 - PROBABILITY_TOLERANCE,
            worst_case_p,
            queries: self.query_count(),
        })
    }

    /// The function this algorithm computes with bounded error: on each input
    /// the output observed with probability above 1/2.
    pub fn computed_function(&self) -> Result<TruthTable> {
        let bits = Bits::all(self.arity)
            .zip(self.outcome_table())
            .map(|(x, o)| {
                if o.one > 0.5 + PROBABILITY_TOLERANCE {
                    Ok(true)
                } else if o.zero > 0.5 + PROBABILITY_TOLERANCE {
                    Ok(false)
                } else {
                    Err(Error::NoMajority(x.to_string()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        TruthTable::new(self.arity, bits)
    }

    pub fn check_property(&self, which: Property) -> bool {
        let near = |a: Complex64, target: f64| (a - Complex64::new(target, 0.0)).norm() <= AMPLITUDE_TOLERANCE;
        let single_basis = |s: &StateVector| {
            let big = s
                .entries()
                .iter()
                .filter(|a| a.norm_sqr() >= 1.0 - AMPLITUDE_TOLERANCE)
                .count();
            let zero = s
                .entries()
                .iter()
                .filter(|a| a.norm_sqr() <= AMPLITUDE_TOLERANCE)
                .count();
            big == 1 && zero == s.len() - 1
        };
        let accepting = self.measurement.single_accepting();
        let finals = self.final_states();
        match which {
            Property::P1 => finals.iter().all(single_basis),
            Property::P2Plus | Property::P2Minus => {
                let Some(acc) = accepting else { return false };
                let sign = if which == Property::P2Plus { 1.0 } else { -1.0 };
                finals.iter().all(|s| near(s[acc], 0.0) || near(s[acc], sign))
            }
            Property::P3 => {
                let Some(acc) = accepting else { return false };
                finals
                    .iter()
                    .all(|s| single_basis(s) && (near(s[acc], 0.0) || near(s[acc], 1.0) || near(s[acc], -1.0)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bits(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn query_transform_signs() {
        let gate = QueryGate::from_one_based(&[1, 2, 1, 2]);
        let q = query_transform(&gate, &bits("010")).unwrap();
        let expected: Vec<f64> = vec![1.0, -1.0, 1.0, -1.0];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(q.get(i, i), Complex64::new(*e, 0.0));
        }
        assert!(q.is_unitary(UNITARY_TOLERANCE));
        assert_eq!(
            query_transform(&QueryGate::none(3), &bits("111")).unwrap(),
            SquareMatrix::identity(3)
        );
        assert_eq!(query_transform(&gate, &bits("000")).unwrap(), SquareMatrix::identity(4));
        assert!(query_transform(&QueryGate::from_one_based(&[4]), &bits("111")).is_err());
    }

    fn hadamard_probe() -> Qqa {
        // Queries x1 on the second amplitude between two Hadamards: exact for x1.
        let h =
            SquareMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]).unwrap();
        Qqa::new(
            1,
            StateVector::basis(2, 0),
            vec![
                Step::Unitary(h.clone()),
                Step::Query(QueryGate::new(vec![None, Some(0)])),
                Step::Unitary(h),
            ],
            Measurement::accepting(2, &[1]),
        )
        .unwrap()
    }

    #[test]
    fn run_and_verify_small_algorithm() {
        let a = hadamard_probe();
        let r = a.run(&bits("1")).unwrap();
        assert!(r.final_state.approx_eq(&StateVector::basis(2, 1), 1e-12));
        assert!((r.probabilities.one - 1.0).abs() < 1e-12);
        let id = TruthTable::from_fn(1, |x| x[0]).unwrap();
        let report = a.verify(&id).unwrap();
        assert!(report.exact);
        assert_eq!(report.queries, 1);
        assert_eq!(a.computed_function().unwrap(), id);
        assert!(a.check_property(Property::P1));
        assert!(a.check_property(Property::P2Plus));
        assert!(!a.check_property(Property::P2Minus));
        assert!(a.verify(&id.complement()).unwrap().worst_case_p < 1e-12);
    }

    #[test]
    fn zero_step_algorithm_keeps_initial_state() {
        let init = StateVector::from_real(&[0.6, 0.8]).unwrap();
        let a = Qqa::new(2, init.clone(), vec![], Measurement::accepting(2, &[0])).unwrap();
        let r = a.run(&bits("10")).unwrap();
        assert_eq!(r.final_state, init);
        assert_eq!(a.trace(&bits("10")).unwrap().states.len(), 1);
    }

    #[test]
    fn no_majority_is_an_error() {
        let init = StateVector::from_real(&[0.5, 0.5, 0.5, 0.5]).unwrap();
        let a = Qqa::new(1, init, vec![], Measurement::accepting(4, &[0, 1])).unwrap();
        assert!(matches!(a.computed_function(), Err(Error::NoMajority(_))));
    }

    #[test]
    fn construction_validates_invariants() {
        let bad = SquareMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let err = Qqa::new(
            1,
            StateVector::basis(2, 0),
            vec![Step::Query(QueryGate::none(2)), Step::Unitary(bad)],
            Measurement::accepting(2, &[0]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotUnitary { step: 1, .. }));

        let unnormalized = StateVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(Qqa::new(1, unnormalized, vec![], Measurement::accepting(2, &[0])).is_err());
        assert!(Qqa::new(1, StateVector::basis(2, 0), vec![], Measurement::accepting(3, &[0])).is_err());
        assert!(Qqa::new(
            1,
            StateVector::basis(2, 0),
            vec![Step::Query(QueryGate::from_one_based(&[2, 0]))],
            Measurement::accepting(2, &[0])
        )
        .is_err());
    }

    #[test]
    fn input_length_is_checked() {
        let a = hadamard_probe();
        assert!(matches!(
            a.run(&bits("10")),
            Err(Error::InputLength { expected: 1, found: 2 })
        ));
        assert!(matches!(
            a.verify(&TruthTable::equality3()),
            Err(Error::ArityMismatch {
                algorithm: 1,
                function: 3
            })
        ));
    }

    #[test]
    fn inserting_unitaries_keeps_query_count() {
        let a = hadamard_probe();
        let mut steps = a.steps().to_vec();
        steps.insert(1, Step::Unitary(SquareMatrix::identity(2)));
        steps.push(Step::Unitary(SquareMatrix::identity(2)));
        let b = Qqa::new(1, a.initial().clone(), steps, a.measurement().clone()).unwrap();
        assert_eq!(b.query_count(), a.query_count());
    }
}
