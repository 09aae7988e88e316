//! Composition of exact algorithms into bounded-error algorithms for AND,
//! OR and MAJORITY of their functions on disjoint variable blocks.
//!
//! All constructions run the input algorithms side by side in one larger
//! system (block-diagonal gates, variables of later blocks shifted past the
//! earlier ones), start in an equal superposition of the blocks' initial
//! states and finish with a few mixing gates on the accepting amplitudes.
//! The query count of the result is the largest input query count.

use std::f64::consts::FRAC_1_SQRT_2 as S;
use std::fmt;
use std::str::FromStr;

use crate::algorithm::{Measurement, Property, Qqa, QueryGate, Step};
use crate::boolfun::{BinaryOp, TruthTable, MAX_ARITY};
use crate::error::{Error, Result};
use crate::linalg::{block_diag, permutation_matrix, Permutation, SquareMatrix, StateVector};
use crate::transforms::{ensure_positive_accept, exact_function};
use crate::{baselib, linalg::Amplitude};

const HADAMARD2: [[f64; 2]; 2] = [[S, S], [S, -S]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    And,
    Or,
    MajorityEven4,
    Majority3,
}

impl Method {
    /// Worst-case success probability the construction guarantees.
    pub fn guaranteed_p(&self) -> f64 {
        match self {
            Method::And => 3.0 / 4.0,
            Method::Or => 5.0 / 8.0,
            Method::MajorityEven4 | Method::Majority3 => 9.0 / 16.0,
        }
    }

    pub fn input_count(&self) -> usize {
        match self {
            Method::And | Method::Or => 2,
            Method::MajorityEven4 => 4,
            Method::Majority3 => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::And => "and",
            Method::Or => "or",
            Method::MajorityEven4 => "maj-even4",
            Method::Majority3 => "maj3",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "and" => Ok(Method::And),
            "or" => Ok(Method::Or),
            "maj-even4" => Ok(Method::MajorityEven4),
            "maj3" => Ok(Method::Majority3),
            _ => Err(Error::InvalidParameter {
                name: "method".into(),
                reason: format!("unknown construction {s:?} (expected and, or, maj-even4 or maj3)"),
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub method: Method,
    pub algorithm: Qqa,
    /// The composite function the algorithm is built to compute.
    pub target: TruthTable,
    pub guaranteed_p: f64,
    pub queries: usize,
}

/// Unitaries between queries: `segments[i]` runs before query `i`, the last
/// segment after the final query.
struct Schedule {
    segments: Vec<Vec<SquareMatrix>>,
    queries: Vec<QueryGate>,
}

impl Schedule {
    fn of(a: &Qqa) -> Self {
        let mut segments = vec![Vec::new()];
        let mut queries = Vec::new();
        for step in a.steps() {
            match step {
                Step::Unitary(u) => segments.last_mut().expect("non-empty").push(u.clone()),
                Step::Query(q) => {
                    queries.push(q.clone());
                    segments.push(Vec::new());
                }
            }
        }
        Schedule { segments, queries }
    }

    /// Adds empty queries before the final segment up to `queries` queries.
    fn pad_queries(&mut self, queries: usize, amplitudes: usize) {
        while self.queries.len() < queries {
            self.queries.push(QueryGate::none(amplitudes));
            let last = self.segments.len() - 1;
            self.segments.insert(last, Vec::new());
        }
    }
}

/// Steps running every algorithm in its own diagonal block, followed by
/// `extra` idle amplitudes.
fn parallel_steps(algs: &[Qqa], extra: usize) -> Vec<Step> {
    let queries = algs.iter().map(Qqa::query_count).max().unwrap_or(0);
    let schedules: Vec<Schedule> = algs
        .iter()
        .map(|a| {
            let mut s = Schedule::of(a);
            s.pad_queries(queries, a.amplitudes());
            s
        })
        .collect();
    let idle = (extra > 0).then(|| SquareMatrix::identity(extra));
    let mut steps = Vec::new();
    for seg in 0..=queries {
        let len = schedules.iter().map(|s| s.segments[seg].len()).max().unwrap_or(0);
        for j in 0..len {
            let ids: Vec<SquareMatrix> = algs.iter().map(|a| SquareMatrix::identity(a.amplitudes())).collect();
            let mut blocks: Vec<&SquareMatrix> = schedules
                .iter()
                .zip(&ids)
                .map(|(s, id)| s.segments[seg].get(j).unwrap_or(id))
                .collect();
            if let Some(idle) = &idle {
                blocks.push(idle);
            }
            steps.push(Step::Unitary(block_diag(&blocks).expect("non-empty")));
        }
        if seg < queries {
            let mut offset = 0;
            let mut assignments = Vec::new();
            for (s, a) in schedules.iter().zip(algs) {
                assignments.extend(s.queries[seg].assignments().iter().map(|k| k.map(|k| k + offset)));
                offset += a.arity();
            }
            assignments.extend(std::iter::repeat_n(None, extra));
            steps.push(Step::Query(QueryGate::new(assignments)));
        }
    }
    steps
}

/// Equal superposition of the algorithms' initial states, one per block.
fn parallel_initial(algs: &[Qqa], extra: usize) -> StateVector {
    let scale = 1.0 / (algs.len() as f64).sqrt();
    let mut entries: Vec<Amplitude> = algs
        .iter()
        .flat_map(|a| a.initial().entries().iter().map(move |z| z * scale))
        .collect();
    entries.extend(std::iter::repeat_n(Amplitude::new(0.0, 0.0), extra));
    StateVector::new(entries).expect("non-empty")
}

fn block_offsets(algs: &[Qqa]) -> Vec<usize> {
    algs.iter()
        .scan(0, |acc, a| {
            let start = *acc;
            *acc += a.amplitudes();
            Some(start)
        })
        .collect()
}

fn total_arity(algs: &[Qqa]) -> Result<usize> {
    let n: usize = algs.iter().map(Qqa::arity).sum();
    if n > MAX_ARITY {
        return Err(Error::ArityTooLarge(n));
    }
    Ok(n)
}

/// Extends `a` with idle amplitudes up to `amplitudes`.
pub fn extend_amplitudes(a: &Qqa, amplitudes: usize) -> Result<Qqa> {
    let m = a.amplitudes();
    if amplitudes < m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: amplitudes,
        });
    }
    if amplitudes == m {
        return Ok(a.clone());
    }
    let steps = a
        .steps()
        .iter()
        .map(|s| match s {
            Step::Unitary(u) => Step::Unitary(u.extend_identity(amplitudes)),
            Step::Query(q) => {
                let mut assignments = q.assignments().to_vec();
                assignments.resize(amplitudes, None);
                Step::Query(QueryGate::new(assignments))
            }
        })
        .collect();
    let mut initial = a.initial().entries().to_vec();
    initial.resize(amplitudes, Amplitude::new(0.0, 0.0));
    let mut values = a.measurement().values().to_vec();
    values.resize(amplitudes, false);
    Qqa::new(a.arity(), StateVector::new(initial)?, steps, Measurement::new(values))
}

fn accepting(a: &Qqa) -> usize {
    a.measurement().single_accepting().expect("checked by the property")
}

/// Bounded-error algorithm for `f₁(X₁) ∧ f₂(X₂)` with success probability at
/// least 3/4. Inputs need a single accepting output with amplitude 0 or ±1;
/// a negative sign is normalized first.
pub fn and_construct(a1: &Qqa, a2: &Qqa) -> Result<ConstructionResult> {
    let a1 = ensure_positive_accept(a1)?;
    let a2 = ensure_positive_accept(a2)?;
    let f1 = exact_function(&a1)?;
    let f2 = exact_function(&a2)?;
    let target = TruthTable::combine_disjoint(&f1, &f2, BinaryOp::And)?;

    let m = a1.amplitudes().max(a2.amplitudes());
    let algs = [extend_amplitudes(&a1, m)?, extend_amplitudes(&a2, m)?];
    let arity = total_arity(&algs)?;
    let (acc1, acc2) = (accepting(&algs[0]), accepting(&algs[1]));

    let mut steps = parallel_steps(&algs, 0);
    steps.push(Step::Unitary(SquareMatrix::two_level(2 * m, acc1, m + acc2, HADAMARD2)));
    let algorithm = Qqa::new(
        arity,
        parallel_initial(&algs, 0),
        steps,
        Measurement::accepting(2 * m, &[acc1]),
    )?;
    Ok(finish(Method::And, algorithm, target))
}

/// Permutation sending each group's sources onto its targets. Sources that
/// already sit on one of their targets stay put; the others fill the free
/// targets in ascending order. Positions not named by any group are routed
/// the same way among themselves.
fn stable_routing(dim: usize, groups: &[(Vec<usize>, Vec<usize>)]) -> Permutation {
    fn route(sources: &[usize], targets: &[usize], image: &mut [usize], target_used: &mut [bool]) {
        let movers = sources.iter().filter(|s| !targets.contains(s));
        let free = targets.iter().filter(|t| !sources.contains(t));
        for &s in sources.iter().filter(|s| targets.contains(s)) {
            image[s] = s;
        }
        for (&s, &t) in movers.zip(free) {
            image[s] = t;
        }
        for &t in targets {
            target_used[t] = true;
        }
    }

    let mut image = vec![usize::MAX; dim];
    let mut target_used = vec![false; dim];
    for (sources, targets) in groups {
        debug_assert_eq!(sources.len(), targets.len());
        route(sources, targets, &mut image, &mut target_used);
    }
    let rest_sources: Vec<usize> = (0..dim).filter(|&s| image[s] == usize::MAX).collect();
    let rest_targets: Vec<usize> = (0..dim).filter(|&t| !target_used[t]).collect();
    route(&rest_sources, &rest_targets, &mut image, &mut target_used);
    Permutation::new(image).expect("groups partition the positions")
}

/// The amplitude-routing gate of the OR construction for accepting outputs
/// `acc1`, `acc2` (0-based, within each 4-amplitude block). Accepting
/// amplitudes go to positions 1 and 2, the first block's rejecting
/// amplitudes to 3–5 and the second block's to 7–9 (1-based).
pub fn or_swap_gate(acc1: usize, acc2: usize) -> SquareMatrix {
    let rejects =
        |acc: usize, offset: usize| -> Vec<usize> { (0..4).filter(|&k| k != acc).map(|k| k + offset).collect() };
    let sigma = stable_routing(
        16,
        &[
            (vec![acc1], vec![0]),
            (vec![4 + acc2], vec![1]),
            (rejects(acc1, 0), vec![2, 3, 4]),
            (rejects(acc2, 4), vec![6, 7, 8]),
        ],
    );
    permutation_matrix(&sigma)
}

/// Final mixing gate of the OR construction: a 2×2 Hadamard on positions
/// 1–2, a 4×4 Walsh block on 3–6 and another on 7–10, identity elsewhere.
pub fn or_mixing_gate() -> SquareMatrix {
    let h2 = SquareMatrix::from_real_rows(&[&HADAMARD2[0], &HADAMARD2[1]]).expect("2×2");
    let w4 = SquareMatrix::from_real_rows(&[
        &[0.5, 0.5, 0.5, 0.5],
        &[0.5, -0.5, 0.5, -0.5],
        &[0.5, 0.5, -0.5, -0.5],
        &[0.5, -0.5, -0.5, 0.5],
    ])
    .expect("4×4");
    block_diag(&[&h2, &w4, &w4, &SquareMatrix::identity(6)]).expect("non-empty")
}

/// 1-based outputs carrying value 1 in the OR construction.
pub const OR_ACCEPTING_OUTPUTS: [usize; 4] = [1, 2, 3, 7];

/// Bounded-error algorithm for `f₁(X₁) ∨ f₂(X₂)` with success probability at
/// least 5/8. Both inputs must be 4-amplitude algorithms whose final state
/// is always a signed basis state, with a single accepting output.
pub fn or_construct(a1: &Qqa, a2: &Qqa) -> Result<ConstructionResult> {
    for a in [a1, a2] {
        if a.amplitudes() != 4 {
            return Err(Error::Unsupported(format!(
                "the OR construction takes 4-amplitude algorithms, got {}",
                a.amplitudes()
            )));
        }
        if !a.check_property(Property::P3) {
            return Err(Error::PropertyViolated(Property::P3.name()));
        }
    }
    let f1 = exact_function(a1)?;
    let f2 = exact_function(a2)?;
    let target = TruthTable::combine_disjoint(&f1, &f2, BinaryOp::Or)?;

    let algs = [a1.clone(), a2.clone()];
    let arity = total_arity(&algs)?;
    let mut steps = parallel_steps(&algs, 8);
    steps.push(Step::Unitary(or_swap_gate(accepting(a1), accepting(a2))));
    steps.push(Step::Unitary(or_mixing_gate()));
    let accept: Vec<usize> = OR_ACCEPTING_OUTPUTS.iter().map(|k| k - 1).collect();
    let algorithm = Qqa::new(
        arity,
        parallel_initial(&algs, 8),
        steps,
        Measurement::accepting(16, &accept),
    )?;
    Ok(finish(Method::Or, algorithm, target))
}

/// Bounded-error algorithm for `MAJORITY_EVEN₄[f₁, f₂, f₃, f₄]` (value 1 iff
/// at least three sub-functions are 1) with success probability at least
/// 9/16. Input requirements as for [`and_construct`].
///
/// With `b` true sub-functions the accepting probability is `b²/16`.
pub fn majority_even4_construct(algs: [&Qqa; 4]) -> Result<ConstructionResult> {
    let normalized = algs
        .iter()
        .map(|a| ensure_positive_accept(a))
        .collect::<Result<Vec<_>>>()?;
    let fs = normalized.iter().map(exact_function).collect::<Result<Vec<_>>>()?;
    let target = TruthTable::majority_compose(&fs.iter().collect::<Vec<_>>(), true)?;
    build_majority(Method::MajorityEven4, &normalized, target)
}

/// Bounded-error algorithm for `MAJORITY₃[f₁, f₂, f₃]`: the four-way
/// construction with a constant-one algorithm as the fourth input.
pub fn majority3_construct(algs: [&Qqa; 3]) -> Result<ConstructionResult> {
    let mut normalized = algs
        .iter()
        .map(|a| ensure_positive_accept(a))
        .collect::<Result<Vec<_>>>()?;
    let fs = normalized.iter().map(exact_function).collect::<Result<Vec<_>>>()?;
    let target = TruthTable::majority_compose(&fs.iter().collect::<Vec<_>>(), false)?;
    let queries = normalized.iter().map(Qqa::query_count).max().unwrap_or(0);
    normalized.push(baselib::constant_one(normalized[0].amplitudes(), 0, queries)?);
    build_majority(Method::Majority3, &normalized, target)
}

fn build_majority(method: Method, algs: &[Qqa], target: TruthTable) -> Result<ConstructionResult> {
    let arity = total_arity(algs)?;
    let offsets = block_offsets(algs);
    let dim: usize = algs.iter().map(Qqa::amplitudes).sum();
    let acc: Vec<usize> = algs.iter().zip(&offsets).map(|(a, o)| o + accepting(a)).collect();

    let mut pair_mix = SquareMatrix::two_level(dim, acc[0], acc[1], HADAMARD2);
    pair_mix.set(acc[2], acc[2], Amplitude::new(S, 0.0));
    pair_mix.set(acc[2], acc[3], Amplitude::new(S, 0.0));
    pair_mix.set(acc[3], acc[2], Amplitude::new(S, 0.0));
    pair_mix.set(acc[3], acc[3], Amplitude::new(-S, 0.0));
    let final_mix = SquareMatrix::two_level(dim, acc[0], acc[2], HADAMARD2);

    let mut steps = parallel_steps(algs, 0);
    steps.push(Step::Unitary(pair_mix));
    steps.push(Step::Unitary(final_mix));
    let algorithm = Qqa::new(
        arity,
        parallel_initial(algs, 0),
        steps,
        Measurement::accepting(dim, &[acc[0]]),
    )?;
    Ok(finish(method, algorithm, target))
}

fn finish(method: Method, algorithm: Qqa, target: TruthTable) -> ConstructionResult {
    let queries = algorithm.query_count();
    ConstructionResult {
        method,
        algorithm,
        target,
        guaranteed_p: method.guaranteed_p(),
        queries,
    }
}

/// Dispatches on `method`; `inputs` must hold the method's input count.
pub fn construct(method: Method, inputs: &[Qqa]) -> Result<ConstructionResult> {
    if inputs.len() != method.input_count() {
        return Err(Error::InvalidParameter {
            name: method.name().into(),
            reason: format!(
                "expects {} input algorithms, got {}",
                method.input_count(),
                inputs.len()
            ),
        });
    }
    match method {
        Method::And => and_construct(&inputs[0], &inputs[1]),
        Method::Or => or_construct(&inputs[0], &inputs[1]),
        Method::MajorityEven4 => majority_even4_construct([&inputs[0], &inputs[1], &inputs[2], &inputs[3]]),
        Method::Majority3 => majority3_construct([&inputs[0], &inputs[1], &inputs[2]]),
    }
}
