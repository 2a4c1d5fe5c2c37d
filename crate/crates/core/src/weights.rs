//! Canonical p-characters, the weight set they admit, and evaluation of a
//! weight on the divided powers `binom(h, k)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Field, FieldElem, FieldError};
use crate::modp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("semisimple character needs a nonzero parameter")]
    ZeroSemisimple,
    #[error("index {index} outside [0, {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("invalid weight: {0}")]
    Invalid(String),
    #[error("Verma dimension {p}^{levels} is too large")]
    TooLarge { p: u32, levels: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ChiKind {
    Zero,
    Nilpotent,
    Semisimple,
}

impl fmt::Display for ChiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChiKind::Zero => "zero",
            ChiKind::Nilpotent => "nilpotent",
            ChiKind::Semisimple => "semisimple",
        })
    }
}

/// A p-character in canonical form. Its values live in the prime subfield,
/// so they are valid packed elements of every field of characteristic `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChiForm {
    pub kind: ChiKind,
    pub p: u32,
    c: u32,
}

#[derive(Serialize, Deserialize)]
struct ChiJson {
    kind: ChiKind,
    c: u32,
}

impl ChiForm {
    pub fn standard(kind: ChiKind, p: u32, c: Option<i64>) -> Result<ChiForm, WeightError> {
        let p = modp::check_odd_prime(p as u64).map_err(FieldError::from)?;
        let c = match kind {
            ChiKind::Zero => 0,
            ChiKind::Nilpotent => 1,
            ChiKind::Semisimple => {
                let c = modp::reduce(c.unwrap_or(1), p);
                if c == 0 {
                    return Err(WeightError::ZeroSemisimple);
                }
                c
            }
        };
        Ok(ChiForm { kind, p, c })
    }

    /// Value on `binom(h, p^r)`.
    pub fn c_h(&self) -> FieldElem {
        self.value_if(ChiKind::Semisimple)
    }

    /// Value on `f^(p^r)`.
    pub fn c_f(&self) -> FieldElem {
        self.value_if(ChiKind::Nilpotent)
    }

    /// Value on `e^(p^r)`; always zero in canonical form.
    pub fn c_e(&self) -> FieldElem {
        FieldElem::ZERO
    }

    fn value_if(&self, kind: ChiKind) -> FieldElem {
        if self.kind == kind {
            Field::prime(self.p).expect("validated prime").from_int(self.c as i64)
        } else {
            FieldElem::ZERO
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kind == ChiKind::Zero
    }

    /// The smallest field holding every weight for this character.
    pub fn ambient_field(&self) -> Result<Field, WeightError> {
        Ok(match self.kind {
            ChiKind::Semisimple => Field::artin_schreier(self.p, self.c as i64)?,
            _ => Field::prime(self.p)?,
        })
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(ChiJson { kind: self.kind, c: self.c }).expect("plain struct")
    }

    pub fn from_json(p: u32, v: &Value) -> Result<ChiForm, WeightError> {
        let raw: ChiJson =
            serde_json::from_value(v.clone()).map_err(|e| WeightError::Invalid(e.to_string()))?;
        let chi = ChiForm::standard(raw.kind, p, Some(raw.c as i64))?;
        if chi.c != raw.c {
            return Err(WeightError::Invalid(format!("non-canonical character parameter {}", raw.c)));
        }
        Ok(chi)
    }
}

/// `(p, r, χ)` together with the ambient field: the data every
/// construction at a fixed level shares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Setting {
    pub p: u32,
    pub r: usize,
    pub chi: ChiForm,
    pub field: Field,
    n: usize,
}

impl Setting {
    pub fn new(p: u32, r: usize, chi: ChiForm) -> Result<Setting, WeightError> {
        let field = chi.ambient_field()?;
        Self::with_field(p, r, chi, field)
    }

    pub fn with_field(p: u32, r: usize, chi: ChiForm, field: Field) -> Result<Setting, WeightError> {
        if chi.p != p || field.p() != p {
            return Err(WeightError::Invalid("characteristic mismatch".into()));
        }
        let n = modp::checked_pow(p, r + 1)
            .filter(|&n| n <= u32::MAX as u64)
            .ok_or(WeightError::TooLarge { p, levels: r + 1 })? as usize;
        Ok(Setting { p, r, chi, field, n })
    }

    /// `p^{r+1}`, the Verma dimension and the PBW index bound.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `p^j`.
    pub fn pp(&self, j: usize) -> usize {
        (self.p as usize).pow(j as u32)
    }

    pub fn digits(&self, k: usize) -> Vec<u32> {
        modp::digits(k as u64, self.p, self.r + 1)
    }

    pub fn roots(&self) -> Result<Vec<FieldElem>, WeightError> {
        Ok(self.field.artin_schreier_roots(self.chi.c_h())?)
    }

    /// All `p^{r+1}` weights, lexicographic in `(λ_0, …, λ_{r-1}, λ_r)`.
    pub fn weights(&self) -> Result<Vec<Weight>, WeightError> {
        let roots = self.roots()?;
        let lows = (self.p as usize).pow(self.r as u32);
        let mut out = Vec::with_capacity(lows * roots.len());
        for idx in 0..lows {
            let mut lower = modp::digits(idx as u64, self.p, self.r.max(1));
            lower.truncate(self.r);
            lower.reverse();
            for &top in &roots {
                out.push(Weight::new(self, lower.clone(), top)?);
            }
        }
        Ok(out)
    }
}

/// A weight `(λ_0, …, λ_r)`, with `λ_i = λ(binom(h, p^i))`.
#[derive(Clone)]
pub struct Weight {
    field: Field,
    p: u32,
    lower: Vec<u32>,
    top: FieldElem,
    table: Arc<[FieldElem]>,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight{}", self.label())
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.lower == other.lower && self.top == other.top
    }
}

impl Eq for Weight {}

impl Weight {
    pub fn new(setting: &Setting, lower: Vec<u32>, top: FieldElem) -> Result<Weight, WeightError> {
        let (f, p) = (&setting.field, setting.p);
        if lower.len() != setting.r {
            return Err(WeightError::Invalid(format!(
                "expected {} lower coordinates, got {}",
                setting.r,
                lower.len()
            )));
        }
        if let Some(bad) = lower.iter().find(|&&x| x >= p) {
            return Err(WeightError::Invalid(format!("coordinate {bad} is not below {p}")));
        }
        if !f.contains(top) || f.sub(f.frobenius(top), top) != f.frobenius(setting.chi.c_h()) {
            return Err(WeightError::Invalid(format!(
                "top coordinate {} is not a root of X^p - X - c^p",
                format_elem(f, top)
            )));
        }
        let coords: Vec<FieldElem> =
            lower.iter().map(|&x| f.from_int(x as i64)).chain(std::iter::once(top)).collect();
        let table = (0..setting.n())
            .map(|k| {
                setting.digits(k).iter().zip(&coords).fold(f.one(), |acc, (&a, &l)| {
                    f.mul(acc, f.binom(l, a as u64).expect("digit below p"))
                })
            })
            .collect();
        Ok(Weight { field: f.clone(), p, lower, top, table })
    }

    pub fn r(&self) -> usize {
        self.lower.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn lower(&self) -> &[u32] {
        &self.lower
    }

    pub fn top(&self) -> FieldElem {
        self.top
    }

    /// `λ_r` as an integer when it lies in the prime subfield.
    pub fn top_int(&self) -> Option<u32> {
        self.field.as_prime(self.top)
    }

    /// `(λ_0, …, λ_r)` as field elements.
    pub fn coords(&self) -> Vec<FieldElem> {
        let f = &self.field;
        self.lower.iter().map(|&x| f.from_int(x as i64)).chain(std::iter::once(self.top)).collect()
    }

    /// `λ(binom(h, k))`.
    pub fn lambda_binom(&self, k: usize) -> Result<FieldElem, WeightError> {
        self.table
            .get(k)
            .copied()
            .ok_or(WeightError::IndexOutOfRange { index: k, bound: self.table.len() })
    }

    pub fn table(&self) -> &[FieldElem] {
        &self.table
    }

    /// `λ(binom(h + m, k)) = Σ_t binom(m, k - t)·λ(binom(h, t))`.
    pub fn lambda_binom_shifted(&self, m: i64, k: usize) -> Result<FieldElem, WeightError> {
        if k >= self.table.len() {
            return Err(WeightError::IndexOutOfRange { index: k, bound: self.table.len() });
        }
        let f = &self.field;
        Ok((0..=k).fold(f.zero(), |acc, t| {
            let c = modp::binom_mod_p(m, (k - t) as u64, self.p);
            if c == 0 {
                acc
            } else {
                f.add(acc, f.mul(f.from_int(c as i64), self.table[t]))
            }
        }))
    }

    /// The same weight with its top coordinate removed, as a weight for the
    /// zero character one level down. `None` at `r = 0`.
    pub fn restricted(&self) -> Option<(Vec<u32>, u32)> {
        let (last, rest) = self.lower.split_last()?;
        Some((rest.to_vec(), *last))
    }

    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self.lower.iter().map(|x| x.to_string()).collect();
        parts.push(format_elem(&self.field, self.top));
        format!("({})", parts.join(","))
    }

    /// `[λ_0, …, λ_{r-1}, [coefficients of λ_r]]`.
    pub fn lambda_json(&self) -> Value {
        let mut v: Vec<Value> = self.lower.iter().map(|&x| json!(x)).collect();
        v.push(json!(self.field.coeffs(self.top)));
        Value::Array(v)
    }

    pub fn to_json(&self) -> Value {
        json!({ "lambda": self.lambda_json() })
    }

    pub fn from_lambda_json(setting: &Setting, v: &Value) -> Result<Weight, WeightError> {
        let bad = || WeightError::Invalid(format!("malformed weight {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        let (top, lower) = arr.split_last().ok_or_else(bad)?;
        let lower = lower
            .iter()
            .map(|x| x.as_u64().map(|x| x as u32).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        let coeffs: Vec<u32> = serde_json::from_value(top.clone()).map_err(|_| bad())?;
        let top = setting.field.from_coeffs(&coeffs)?;
        Weight::new(setting, lower, top)
    }

    /// Parses `λ_0,…,λ_{r-1},j`. The last entry is `λ_r` itself for
    /// characters with `F_p`-valued weights, and selects the root `θ + j`
    /// for a semisimple character.
    pub fn parse(setting: &Setting, s: &str) -> Result<Weight, WeightError> {
        let vals = s
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| WeightError::Invalid(format!("{s}: {e}")))?;
        let (&j, lower) =
            vals.split_last().ok_or_else(|| WeightError::Invalid("empty weight".into()))?;
        let lower = lower
            .iter()
            .map(|&x| {
                u32::try_from(x).map_err(|_| WeightError::Invalid(format!("negative coordinate {x}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let f = &setting.field;
        let top = match setting.chi.kind {
            ChiKind::Semisimple => f.add(f.theta(), f.from_int(j)),
            _ => f.from_int(j),
        };
        Weight::new(setting, lower, top)
    }
}

/// Human-readable element: an integer in the prime subfield, else a
/// polynomial in `t`.
pub fn format_elem(f: &Field, x: FieldElem) -> String {
    if let Some(c) = f.as_prime(x) {
        return c.to_string();
    }
    let terms: Vec<String> = f
        .coeffs(x)
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{c}t"),
            (i, 1) => format!("t^{i}"),
            (i, c) => format!("{c}t^{i}"),
        })
        .collect();
    terms.join("+")
}
