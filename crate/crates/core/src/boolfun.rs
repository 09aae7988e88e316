//! Boolean functions as truth tables.
//!
//! Inputs are bit strings `x₁x₂…xₙ`. The table index of an input is the
//! string read as a binary number with `x₁` as the most significant bit, so
//! tables list inputs in lexicographic order (`000, 001, …, 111`).

use std::fmt;
use std::io::{Read, Write};
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Permutation;

pub const MAX_ARITY: usize = 16;

/// A bit string; position 0 holds `x₁`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    /// The `len`-bit string whose binary value is `index`.
    pub fn from_index(index: usize, len: usize) -> Self {
        Bits((0..len).map(|k| (index >> (len - 1 - k)) & 1 == 1).collect())
    }

    pub fn index(&self) -> usize {
        index_of(&self.0)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<bool> {
        self.0
    }

    /// All strings of length `len` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = Bits> {
        (0..1usize << len).map(move |i| Bits::from_index(i, len))
    }
}

impl Deref for Bits {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.0
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidBits(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Bits)
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub(crate) fn index_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

/// Binary connective used by [`TruthTable::combine_disjoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    And,
    Or,
}

/// A Boolean function `{0,1}ⁿ → {0,1}` with `n ≤ 16`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    bits: Vec<bool>,
}

/// Maximum sensitivity of a function together with the input that achieves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitivityResult {
    pub value: usize,
    /// Lexicographically smallest input with `value` sensitive variables.
    pub witness: Bits,
    /// 0-based indices of the variables whose flip changes the value at `witness`.
    pub sensitive_variables: Vec<usize>,
}

impl TruthTable {
    pub fn new(arity: usize, bits: Vec<bool>) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        if bits.len() != 1 << arity {
            return Err(Error::DimensionMismatch {
                expected: 1 << arity,
                found: bits.len(),
            });
        }
        Ok(TruthTable { arity, bits })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let bits = Bits::all(arity).map(|x| f(&x)).collect();
        Ok(TruthTable { arity, bits })
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        Self::new(arity, vec![value; 1 << arity])
    }

    /// `¬(x₁⊕x₂) ∧ ¬(x₂⊕x₃)`.
    pub fn equality3() -> Self {
        Self::from_fn(3, |x| x[0] == x[1] && x[1] == x[2]).expect("arity 3")
    }

    /// `¬(x₁⊕x₂) ∧ ¬(x₃⊕x₄)`.
    pub fn pair_equality4() -> Self {
        Self::from_fn(4, |x| x[0] == x[1] && x[2] == x[3]).expect("arity 4")
    }

    /// 1 iff strictly more than half of the `n` inputs are 1. For even `n`
    /// ties evaluate to 0.
    pub fn majority(n: usize) -> Result<Self> {
        Self::from_fn(n, |x| 2 * x.iter().filter(|&&b| b).count() > n)
    }

    /// Looks up a named function. `param` is the arity for `constant0`,
    /// `constant1` (default 1), `majority` (odd) and `majority_even` (even).
    pub fn named(name: &str, param: Option<usize>) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.to_string(),
        };
        match name {
            "equality3" | "pair_equality4" => {
                let (f, arity) = if name == "equality3" {
                    (Self::equality3(), 3)
                } else {
                    (Self::pair_equality4(), 4)
                };
                match param {
                    None => Ok(f),
                    Some(p) if p == arity => Ok(f),
                    Some(_) => Err(invalid("arity is fixed")),
                }
            }
            "constant0" | "constant1" => Self::constant(param.unwrap_or(1), name == "constant1"),
            "majority" => match param {
                Some(n) if n % 2 == 1 => Self::majority(n),
                Some(_) => Err(invalid("arity must be odd")),
                None => Err(invalid("arity required, e.g. majority:3")),
            },
            "majority_even" => match param {
                Some(n) if n >= 2 && n % 2 == 0 => Self::majority(n),
                Some(_) => Err(invalid("arity must be even and at least 2")),
                None => Err(invalid("arity required, e.g. majority_even:4")),
            },
            _ => Err(Error::UnknownFunction(name.to_string())),
        }
    }

    /// Parses `name` or `name:param`, e.g. `majority_even:4`.
    pub fn parse_named(spec: &str) -> Result<Self> {
        match spec.split_once(':') {
            None => Self::named(spec, None),
            Some((name, p)) => {
                let p = p.parse().map_err(|_| Error::InvalidParameter {
                    name: name.to_string(),
                    reason: format!("{p:?} is not a non-negative integer"),
                })?;
                Self::named(name, Some(p))
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn eval(&self, input: &[bool]) -> Result<bool> {
        if input.len() != self.arity {
            return Err(Error::InputLength {
                expected: self.arity,
                found: input.len(),
            });
        }
        Ok(self.bits[index_of(input)])
    }

    pub fn eval_index(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn accepting_inputs(&self) -> Vec<Bits> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| Bits::from_index(i, self.arity))
            .collect()
    }

    pub fn complement(&self) -> TruthTable {
        TruthTable {
            arity: self.arity,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// `g(X) = f(x_{σ(1)}, …, x_{σ(n)})`.
    pub fn permute_variables(&self, sigma: &Permutation) -> Result<TruthTable> {
        if sigma.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                found: sigma.len(),
            });
        }
        Self::from_fn(self.arity, |x| {
            let y: Vec<bool> = (0..self.arity).map(|k| x[sigma.image(k)]).collect();
            self.bits[index_of(&y)]
        })
    }

    pub fn sensitivity(&self) -> SensitivityResult {
        let n = self.arity;
        let sensitive_at = |idx: usize| -> Vec<usize> {
            (0..n)
                .filter(|&k| self.bits[idx ^ (1 << (n - 1 - k))] != self.bits[idx])
                .collect()
        };
        let mut best = (0, 0);
        for idx in 0..self.bits.len() {
            let count = sensitive_at(idx).len();
            if count > best.0 {
                best = (count, idx);
            }
        }
        SensitivityResult {
            value: best.0,
            witness: Bits::from_index(best.1, n),
            sensitive_variables: sensitive_at(best.1),
        }
    }

    /// `f1(X₁) op f2(X₂)` where `X₁` holds the first `f1.arity()` variables
    /// and `X₂` the remaining ones.
    pub fn combine_disjoint(f1: &TruthTable, f2: &TruthTable, op: BinaryOp) -> Result<TruthTable> {
        let arity = f1.arity + f2.arity;
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let low = f2.arity;
        let bits = (0..1usize << arity)
            .map(|idx| {
                let a = f1.bits[idx >> low];
                let b = f2.bits[idx & ((1 << low) - 1)];
                match op {
                    BinaryOp::And => a && b,
                    BinaryOp::Or => a || b,
                }
            })
            .collect();
        Ok(TruthTable { arity, bits })
    }

    /// Majority over sub-functions on consecutive variable blocks: 1 iff more
    /// than half of them are 1. With `even` an even number of sub-functions is
    /// required and ties give 0; otherwise the count must be odd.
    pub fn majority_compose(fs: &[&TruthTable], even: bool) -> Result<TruthTable> {
        let count = fs.len();
        let parity_ok = if even {
            count >= 2 && count.is_multiple_of(2)
        } else {
            count % 2 == 1
        };
        if !parity_ok {
            return Err(Error::InvalidParameter {
                name: "majority_compose".into(),
                reason: format!(
                    "{count} sub-functions given, expected an {} count",
                    if even { "even" } else { "odd" }
                ),
            });
        }
        let arity: usize = fs.iter().map(|f| f.arity).sum();
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let bits = (0..1usize << arity)
            .map(|idx| {
                let mut shift = arity;
                let ones = fs
                    .iter()
                    .filter(|f| {
                        shift -= f.arity;
                        f.bits[(idx >> shift) & ((1 << f.arity) - 1)]
                    })
                    .count();
                2 * ones > count
            })
            .collect();
        Ok(TruthTable { arity, bits })
    }

    /// Hex encoding of the table: bit `i` of the number is the value on the
    /// input with index `i`, written most significant nibble first.
    pub fn to_hex(&self) -> String {
        let digits = self.bits.len().div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4)
                    .filter(|b| self.bits.get(4 * d + b).copied().unwrap_or(false))
                    .fold(0u32, |acc, b| acc | 1 << b);
                char::from_digit(nibble, 16).expect("nibble")
            })
            .collect()
    }

    /// Writes `input,value` rows in table order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Csv(e.to_string());
        w.write_record(["input", "value"]).map_err(csv_err)?;
        for (i, &b) in self.bits.iter().enumerate() {
            w.write_record([Bits::from_index(i, self.arity).to_string(), (b as u8).to_string()])
                .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a table written by [`write_csv`](Self::write_csv). Rows may come
    /// in any order but every input must appear exactly once.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers().map_err(|e| Error::Csv(e.to_string()))?.clone();
        if headers.len() != 2 || &headers[0] != "input" || &headers[1] != "value" {
            return Err(Error::Csv("expected header `input,value`".into()));
        }
        let mut rows: Vec<(Bits, bool)> = Vec::new();
        for (line, record) in r.records().enumerate() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            let row = line + 2;
            let input: Bits = record[0]
                .trim()
                .parse()
                .map_err(|_| Error::Csv(format!("row {row}: bad input {:?}", &record[0])))?;
            let value = match record[1].trim() {
                "0" => false,
                "1" => true,
                other => return Err(Error::Csv(format!("row {row}: bad value {other:?}"))),
            };
            rows.push((input, value));
        }
        let arity = rows
            .first()
            .map(|(x, _)| x.len())
            .ok_or_else(|| Error::Csv("no rows".into()))?;
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let mut bits: Vec<Option<bool>> = vec![None; 1 << arity];
        for (x, v) in rows {
            if x.len() != arity {
                return Err(Error::Csv(format!(
                    "input {x} has a different length than the first row"
                )));
            }
            if bits[x.index()].replace(v).is_some() {
                return Err(Error::Csv(format!("input {x} listed twice")));
            }
        }
        let bits = bits
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| Error::Csv(format!("input {} missing", Bits::from_index(i, arity)))))
            .collect::<Result<Vec<_>>>()?;
        TruthTable::new(arity, bits)
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-ary table 0x{}", self.arity, self.to_hex())
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn table(max_arity: usize) -> impl Strategy<Value = TruthTable> {
        (1..=max_arity).prop_flat_map(|n| {
            prop::collection::vec(any::<bool>(), 1 << n).prop_map(move |b| TruthTable::new(n, b).unwrap())
        })
    }

    fn brute_sensitivity(f: &TruthTable) -> usize {
        Bits::all(f.arity())
            .map(|x| {
                (0..f.arity())
                    .filter(|&k| {
                        let mut y = x.clone().into_inner();
                        y[k] = !y[k];
                        f.eval(&y).unwrap() != f.eval(&x).unwrap()
                    })
                    .count()
            })
            .max()
            .unwrap()
    }

    proptest! {
        #[test]
        fn sensitivity_matches_brute_force(f in table(6)) {
            let s = f.sensitivity();
            prop_assert_eq!(s.value, brute_sensitivity(&f));
            for &k in &s.sensitive_variables {
                let mut y = s.witness.clone().into_inner();
                y[k] = !y[k];
                prop_assert_ne!(f.eval(&y).unwrap(), f.eval(&s.witness).unwrap());
            }
        }

        #[test]
        fn sensitivity_invariant_under_permutation(
            f in table(5),
            seed in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle(),
        ) {
            let order: Vec<usize> = seed.into_iter().filter(|&k| k < f.arity()).collect();
            let sigma = Permutation::new(order).unwrap();
            let g = f.permute_variables(&sigma).unwrap();
            prop_assert_eq!(g.sensitivity().value, f.sensitivity().value);
        }

        #[test]
        fn complement_keeps_sensitivity(f in table(6)) {
            prop_assert_eq!(f.complement().sensitivity().value, f.sensitivity().value);
        }

        #[test]
        fn combine_and_matches_pointwise(f1 in table(3), f2 in table(3)) {
            let g = TruthTable::combine_disjoint(&f1, &f2, BinaryOp::And).unwrap();
            for a in Bits::all(f1.arity()) {
                for b in Bits::all(f2.arity()) {
                    let joined: Vec<bool> = a.iter().chain(b.iter()).copied().collect();
                    prop_assert_eq!(g.eval(&joined).unwrap(), f1.eval(&a).unwrap() && f2.eval(&b).unwrap());
                }
            }
        }

        #[test]
        fn even_majority_rejects_ties(fs in prop::collection::vec(table(2), 4)) {
            let refs: Vec<&TruthTable> = fs.iter().collect();
            let g = TruthTable::majority_compose(&refs, true).unwrap();
            for x in Bits::all(g.arity()) {
                let mut offset = 0;
                let ones = fs.iter().filter(|f| {
                    let v = f.eval(&x[offset..offset + f.arity()]).unwrap();
                    offset += f.arity();
                    v
                }).count();
                if ones == 2 {
                    prop_assert!(!g.eval(&x).unwrap());
                }
                prop_assert_eq!(g.eval(&x).unwrap(), ones > 2);
            }
        }
    }
}
