//! Simulation, verification, transformation and composition of quantum
//! query algorithms for Boolean functions.
//!
//! An algorithm ([`Qqa`]) is a fixed sequence of unitary gates and query
//! gates on a small state vector, followed by a measurement that assigns an
//! output bit to each basis state. [`Qqa::verify`] runs it on every input of
//! a [`TruthTable`] and reports the worst-case success probability.
//!
//! Two exact 2-query algorithms live in [`baselib`]; [`transforms`] derives
//! further exact algorithms from them, [`constructors`] composes exact
//! algorithms into bounded-error ones for AND, OR and MAJORITY of
//! sub-functions, and [`catalog`] enumerates everything reachable this way.

pub mod algorithm;
pub mod baselib;
pub mod boolfun;
pub mod catalog;
pub mod constructors;
mod error;
pub mod linalg;
pub mod transforms;

pub use algorithm::{
    query_transform, Measurement, OutcomeProbabilities, Property, Qqa, QueryGate, RunResult, SimulationTrace, Step,
    VerificationReport, PROBABILITY_TOLERANCE,
};
pub use boolfun::{BinaryOp, Bits, SensitivityResult, TruthTable};
pub use catalog::{AlgorithmDocument, Catalog, FunctionSet, Metadata, SetKind, Table6Report};
pub use constructors::{ConstructionResult, Method};
pub use error::{Error, Result};
pub use linalg::{Amplitude, Permutation, SquareMatrix, StateVector};
