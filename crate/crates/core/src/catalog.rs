//! Function catalogs built from the base algorithms, and the JSON document
//! format for storing algorithms.
//!
//! The exact sets close each base algorithm under output-value permutation,
//! output inversion and variable permutation. The constructed sets apply the
//! AND, OR and MAJORITY constructions to every ordered tuple of eligible
//! exact algorithms; eligibility is read off each algorithm's output
//! properties. All sets are deduplicated by truth table.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algorithm::{Measurement, Property, Qqa, QueryGate, Step, PROBABILITY_TOLERANCE};
use crate::baselib;
use crate::boolfun::TruthTable;
use crate::constructors::{
    and_construct, majority3_construct, majority_even4_construct, or_construct, ConstructionResult, Method,
};
use crate::error::{Error, Result};
use crate::linalg::{Permutation, SquareMatrix, StateVector, UNITARY_TOLERANCE};
use crate::transforms::{invert_outputs, permute_outputs, permute_variables};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetKind {
    QFunc3,
    QFunc4,
    And,
    Or,
    MajEven4,
    Majority3,
}

impl SetKind {
    pub const ALL: [SetKind; 6] = [
        SetKind::QFunc3,
        SetKind::QFunc4,
        SetKind::And,
        SetKind::Or,
        SetKind::MajEven4,
        SetKind::Majority3,
    ];

    /// Display name used in reports and exports.
    pub fn name(&self) -> &'static str {
        match self {
            SetKind::QFunc3 => "QFunc3",
            SetKind::QFunc4 => "QFunc4",
            SetKind::And => "QFunc_AND",
            SetKind::Or => "QFunc_OR",
            SetKind::MajEven4 => "QFunc_MAJ_EVEN4",
            SetKind::Majority3 => "QFunc_MAJORITY3",
        }
    }

    /// Short key accepted on the command line.
    pub fn key(&self) -> &'static str {
        match self {
            SetKind::QFunc3 => "qfunc3",
            SetKind::QFunc4 => "qfunc4",
            SetKind::And => "and",
            SetKind::Or => "or",
            SetKind::MajEven4 => "maj_even4",
            SetKind::Majority3 => "majority3",
        }
    }

    pub fn guaranteed_p(&self) -> f64 {
        match self {
            SetKind::QFunc3 | SetKind::QFunc4 => 1.0,
            SetKind::And => Method::And.guaranteed_p(),
            SetKind::Or => Method::Or.guaranteed_p(),
            SetKind::MajEven4 => Method::MajorityEven4.guaranteed_p(),
            SetKind::Majority3 => Method::Majority3.guaranteed_p(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SetKind::QFunc3 | SetKind::QFunc4)
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SetKind::ALL
            .into_iter()
            .find(|k| k.key() == s || k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter {
                name: "set".into(),
                reason: format!("unknown set {s:?}"),
            })
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub table: TruthTable,
    pub algorithm: Qqa,
    pub worst_case_p: f64,
    pub provenance: String,
}

#[derive(Debug, Clone)]
pub struct FunctionSet {
    pub kind: SetKind,
    pub entries: Vec<CatalogEntry>,
    pub arities: BTreeSet<usize>,
    pub queries: usize,
    pub guaranteed_p: f64,
}

impl FunctionSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Members carrying a single accepting output whose amplitude is always
    /// 0 or ±1 with a fixed sign: inputs for AND and MAJORITY.
    pub fn positive_accept_pool(&self) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| e.algorithm.check_property(Property::P2Plus) || e.algorithm.check_property(Property::P2Minus))
            .collect()
    }

    /// Members whose final state is a signed basis state with a single
    /// accepting output: inputs for OR.
    pub fn signed_accept_pool(&self) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| e.algorithm.check_property(Property::P3))
            .collect()
    }
}

/// Collects candidates, keeping the first algorithm for each truth table and
/// checking it against the set's probability floor.
struct Dedup {
    kind: SetKind,
    seen: HashSet<TruthTable>,
    entries: Vec<CatalogEntry>,
}

impl Dedup {
    fn new(kind: SetKind) -> Self {
        Dedup {
            kind,
            seen: HashSet::new(),
            entries: Vec::new(),
        }
    }

    fn offer(&mut self, table: TruthTable, algorithm: Qqa, provenance: impl FnOnce() -> String) -> Result<()> {
        if self.seen.contains(&table) {
            return Ok(());
        }
        let report = algorithm.verify(&table)?;
        if report.worst_case_p < self.kind.guaranteed_p() - PROBABILITY_TOLERANCE {
            return Err(Error::Malformed(format!(
                "{} candidate {} misses its probability floor: {:.6}",
                self.kind,
                provenance(),
                report.worst_case_p
            )));
        }
        self.seen.insert(table.clone());
        self.entries.push(CatalogEntry {
            table,
            algorithm,
            worst_case_p: report.worst_case_p,
            provenance: provenance(),
        });
        Ok(())
    }

    fn finish(self) -> FunctionSet {
        let arities = self.entries.iter().map(|e| e.table.arity()).collect();
        let queries = self
            .entries
            .iter()
            .map(|e| e.algorithm.query_count())
            .max()
            .unwrap_or(0);
        FunctionSet {
            kind: self.kind,
            entries: self.entries,
            arities,
            queries,
            guaranteed_p: self.kind.guaranteed_p(),
        }
    }
}

fn permutations(n: usize) -> impl Iterator<Item = Permutation> {
    (0..n)
        .permutations(n)
        .map(|p| Permutation::new(p).expect("itertools yields permutations"))
}

/// Every distinct function reachable from `base` by permuting output values,
/// optionally inverting them and permuting variables.
fn transform_closure(kind: SetKind, base: &Qqa, base_name: &str) -> Result<FunctionSet> {
    let mut set = Dedup::new(kind);
    let mut measurements = HashSet::new();
    for out in permutations(base.amplitudes()) {
        let placed = permute_outputs(base, &out)?;
        if !measurements.insert(placed.measurement().clone()) {
            continue;
        }
        for invert in [false, true] {
            let valued = if invert {
                invert_outputs(&placed)?
            } else {
                placed.clone()
            };
            for vars in permutations(base.arity()) {
                let a = permute_variables(&valued, &vars)?;
                let table = a.computed_function()?;
                set.offer(table, a, || {
                    format!(
                        "{base_name}|out:{out}{}|vars:{vars}",
                        if invert { "|invert" } else { "" }
                    )
                })?;
            }
        }
    }
    Ok(set.finish())
}

fn constructed_set(
    kind: SetKind,
    pool: &[&CatalogEntry],
    arity: usize,
    build: impl Fn(&[&Qqa]) -> Result<ConstructionResult>,
) -> Result<FunctionSet> {
    let mut set = Dedup::new(kind);
    for tuple in (0..arity).map(|_| pool.iter()).multi_cartesian_product() {
        let algs: Vec<&Qqa> = tuple.iter().map(|e| &e.algorithm).collect();
        let built = build(&algs)?;
        set.offer(built.target, built.algorithm, || {
            let parts: Vec<&str> = tuple.iter().map(|e| e.provenance.as_str()).collect();
            format!("{}({})", built.method, parts.join("; "))
        })?;
    }
    Ok(set.finish())
}

/// All six sets, built once and shared.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub sets: Vec<FunctionSet>,
}

impl Catalog {
    pub fn generate() -> Result<Catalog> {
        Self::generate_only(&SetKind::ALL)
    }

    /// Builds `kinds` (and whatever base sets they depend on, which are not
    /// returned unless requested).
    pub fn generate_only(kinds: &[SetKind]) -> Result<Catalog> {
        let wants = |k: SetKind| kinds.contains(&k);
        let needs3 = kinds.iter().any(|k| *k != SetKind::QFunc4);
        let needs4 = wants(SetKind::QFunc4) || wants(SetKind::Or);
        let q3 = needs3
            .then(|| transform_closure(SetKind::QFunc3, &baselib::equality3(), "equality3"))
            .transpose()?;
        let q4 = needs4
            .then(|| transform_closure(SetKind::QFunc4, &baselib::pair_equality4(), "pair_equality4"))
            .transpose()?;

        let mut sets = Vec::new();
        for kind in SetKind::ALL.into_iter().filter(|k| wants(*k)) {
            let set = match kind {
                SetKind::QFunc3 => q3.clone().expect("built"),
                SetKind::QFunc4 => q4.clone().expect("built"),
                SetKind::And => {
                    let pool = q3.as_ref().expect("built").positive_accept_pool();
                    constructed_set(kind, &pool, 2, |a| and_construct(a[0], a[1]))?
                }
                SetKind::Or => {
                    let mut pool = q3.as_ref().expect("built").signed_accept_pool();
                    pool.extend(q4.as_ref().expect("built").signed_accept_pool());
                    constructed_set(kind, &pool, 2, |a| or_construct(a[0], a[1]))?
                }
                SetKind::MajEven4 => {
                    let pool = q3.as_ref().expect("built").positive_accept_pool();
                    constructed_set(kind, &pool, 4, |a| majority_even4_construct([a[0], a[1], a[2], a[3]]))?
                }
                SetKind::Majority3 => {
                    let pool = q3.as_ref().expect("built").positive_accept_pool();
                    constructed_set(kind, &pool, 3, |a| majority3_construct([a[0], a[1], a[2]]))?
                }
            };
            sets.push(set);
        }
        Ok(Catalog { sets })
    }

    pub fn get(&self, kind: SetKind) -> Option<&FunctionSet> {
        self.sets.iter().find(|s| s.kind == kind)
    }

    pub fn report(&self) -> Table6Report {
        let rows: Vec<ReportRow> = self
            .sets
            .iter()
            .map(|s| ReportRow {
                set: s.kind.name().to_string(),
                size: s.len(),
                arities: s.arities.iter().copied().collect(),
                queries: s.queries,
                probability: s.guaranteed_p,
                worst_case_p: s.entries.iter().map(|e| e.worst_case_p).fold(1.0, f64::min),
            })
            .collect();
        let total = rows.iter().map(|r| r.size).sum();
        Table6Report { rows, total }
    }

    /// Writes every entry as `set,arity,queries,probability,truth_table_hex,provenance`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Csv(e.to_string());
        w.write_record([
            "set",
            "arity",
            "queries",
            "probability",
            "truth_table_hex",
            "provenance",
        ])
        .map_err(csv_err)?;
        for set in &self.sets {
            for e in &set.entries {
                w.write_record([
                    set.kind.name().to_string(),
                    e.table.arity().to_string(),
                    e.algorithm.query_count().to_string(),
                    format!("{:.6}", e.worst_case_p),
                    e.table.to_hex(),
                    e.provenance.clone(),
                ])
                .map_err(csv_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Builds one set on its own.
pub fn generate_set(kind: SetKind) -> Result<FunctionSet> {
    Ok(Catalog::generate_only(&[kind])?.sets.remove(0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub set: String,
    pub size: usize,
    pub arities: Vec<usize>,
    pub queries: usize,
    /// Probability guaranteed by the set's construction.
    pub probability: f64,
    /// Smallest worst-case success probability over the set's members.
    pub worst_case_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table6Report {
    pub rows: Vec<ReportRow>,
    pub total: usize,
}

/// Sizes, arities, query counts and probabilities of all six sets.
pub fn table6_report() -> Result<Table6Report> {
    Ok(Catalog::generate()?.report())
}

pub(crate) fn fraction(p: f64) -> String {
    for den in [1u32, 2, 4, 8, 16, 32, 64] {
        let num = p * den as f64;
        if (num - num.round()).abs() < 1e-9 {
            let num = num.round() as u32;
            return if den == 1 {
                num.to_string()
            } else {
                format!("{num}/{den}")
            };
        }
    }
    format!("{p:.6}")
}

impl fmt::Display for Table6Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<18}{:>6}  {:<10}{:>10}  {:>11}",
            "Set", "Size", "Arguments", "Questions", "Probability"
        )?;
        for r in &self.rows {
            let arities = r.arities.iter().map(|a| a.to_string()).join(",");
            writeln!(
                f,
                "{:<18}{:>6}  {:<10}{:>10}  {:>11}",
                r.set,
                r.size,
                arities,
                r.queries,
                fraction(r.probability)
            )?;
        }
        write!(f, "Total {}", self.total)
    }
}

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub provenance: String,
}

/// Serialized algorithm. Complex numbers are `[re, im]` pairs, matrices are
/// lists of rows, query variables are 1-based with `null` for no variable,
/// and measurement values are 0 or 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmDocument {
    pub format_version: u32,
    pub metadata: Metadata,
    pub arity: usize,
    pub amplitudes: usize,
    pub initial: Vec<[f64; 2]>,
    pub steps: Vec<StepDocument>,
    pub measurement: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StepDocument {
    Unitary { matrix: Vec<Vec<[f64; 2]>> },
    Query { variables: Vec<Option<usize>> },
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl AlgorithmDocument {
    pub fn from_qqa(a: &Qqa, metadata: Metadata) -> Self {
        let steps = a
            .steps()
            .iter()
            .map(|s| match s {
                Step::Unitary(u) => StepDocument::Unitary {
                    matrix: u.rows().map(|r| r.iter().map(pair).collect()).collect(),
                },
                Step::Query(q) => StepDocument::Query {
                    variables: q.assignments().iter().map(|k| k.map(|k| k + 1)).collect(),
                },
            })
            .collect();
        AlgorithmDocument {
            format_version: FORMAT_VERSION,
            metadata,
            arity: a.arity(),
            amplitudes: a.amplitudes(),
            initial: a.initial().entries().iter().map(pair).collect(),
            steps,
            measurement: a.measurement().values().iter().map(|&v| v as u8).collect(),
        }
    }

    /// Validates the document and builds the algorithm. Errors name the
    /// offending field, e.g. `steps[2].matrix`.
    pub fn to_qqa(&self) -> Result<Qqa> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::document(
                "format_version",
                format!(
                    "unsupported version {} (expected {FORMAT_VERSION})",
                    self.format_version
                ),
            ));
        }
        let m = self.amplitudes;
        if m == 0 {
            return Err(Error::document("amplitudes", "must be positive"));
        }
        let complex = |p: &[f64; 2]| Complex64::new(p[0], p[1]);
        if self.initial.len() != m {
            return Err(Error::document(
                "initial",
                format!("expected {m} amplitudes, found {}", self.initial.len()),
            ));
        }
        let initial = StateVector::new(self.initial.iter().map(complex).collect())
            .map_err(|e| Error::document("initial", e.to_string()))?;
        if !initial.is_normalized(crate::linalg::NORM_TOLERANCE) {
            return Err(Error::document(
                "initial",
                format!("squared norm is {:.12}, expected 1", initial.norm_sqr()),
            ));
        }
        let mut steps = Vec::with_capacity(self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            match step {
                StepDocument::Unitary { matrix } => {
                    let field = format!("steps[{i}].matrix");
                    if matrix.len() != m || matrix.iter().any(|r| r.len() != m) {
                        return Err(Error::document(field, format!("expected a {m}×{m} matrix")));
                    }
                    let u = SquareMatrix::from_rows(matrix.iter().map(|r| r.iter().map(complex).collect()).collect())
                        .map_err(|e| Error::document(&field, e.to_string()))?;
                    let deviation = u.unitarity_deviation();
                    if deviation > UNITARY_TOLERANCE {
                        return Err(Error::document(
                            field,
                            format!("not unitary (max deviation {deviation:.3e})"),
                        ));
                    }
                    steps.push(Step::Unitary(u));
                }
                StepDocument::Query { variables } => {
                    let field = format!("steps[{i}].variables");
                    if variables.len() != m {
                        return Err(Error::document(
                            field,
                            format!("expected {m} entries, found {}", variables.len()),
                        ));
                    }
                    let mut assignments = Vec::with_capacity(m);
                    for (j, v) in variables.iter().enumerate() {
                        match v {
                            None => assignments.push(None),
                            Some(k) if (1..=self.arity).contains(k) => assignments.push(Some(k - 1)),
                            Some(k) => {
                                return Err(Error::document(
                                    format!("{field}[{j}]"),
                                    format!("variable {k} outside 1..={}", self.arity),
                                ))
                            }
                        }
                    }
                    steps.push(Step::Query(QueryGate::new(assignments)));
                }
            }
        }
        if self.measurement.len() != m {
            return Err(Error::document(
                "measurement",
                format!("expected {m} values, found {}", self.measurement.len()),
            ));
        }
        let mut values = Vec::with_capacity(m);
        for (j, &v) in self.measurement.iter().enumerate() {
            match v {
                0 => values.push(false),
                1 => values.push(true),
                _ => return Err(Error::document(format!("measurement[{j}]"), "must be 0 or 1")),
            }
        }
        Qqa::new(self.arity, initial, steps, Measurement::new(values))
            .map_err(|e| Error::document("algorithm", e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::document("document", e.to_string()))
    }
}

/// Writes `a` as JSON to `path`, atomically: the document goes to a temporary
/// file in the same directory which is then renamed over `path`.
pub fn save(a: &Qqa, metadata: Metadata, path: &Path) -> Result<AlgorithmDocument> {
    let doc = AlgorithmDocument::from_qqa(a, metadata);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(doc.to_json()?.as_bytes())?;
    tmp.write_all(b"\n")?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(doc)
}

pub fn load_document(path: &Path) -> Result<AlgorithmDocument> {
    let text = std::fs::read_to_string(path)?;
    AlgorithmDocument::from_json(&text)
}

pub fn load(path: &Path) -> Result<Qqa> {
    load_document(path)?.to_qqa()
}
