//! Modules given by generator matrices: the actions of `e^(p^j)`,
//! `binom(h, p^j)` and `f^(p^j)` for each level `j`.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Field, FieldElem, FieldError};
use crate::linalg::{Matrix, Sparse};
use crate::modp;
use crate::weights::{ChiForm, ChiKind, WeightError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("malformed module: {0}")]
    Shape(String),
    #[error("modules or elements live over different contexts")]
    ContextMismatch,
    #[error("lifted module violates relations: {0:?}")]
    Lift(Vec<String>),
    #[error("invalid extension data: {0}")]
    InvalidExtension(String),
    #[error("cannot parse module: {0}")]
    Json(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GenKind {
    E,
    H,
    F,
}

impl GenKind {
    pub const ALL: [GenKind; 3] = [GenKind::E, GenKind::H, GenKind::F];
}

impl std::fmt::Display for GenKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GenKind::E => "E",
            GenKind::H => "H",
            GenKind::F => "F",
        })
    }
}

/// A module over `U_χ^[r]` (with `levels = r + 1`), or over `Di(G_(r))`
/// (with `levels = r` and zero character).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRep {
    pub field: Field,
    pub chi: ChiForm,
    levels: usize,
    dim: usize,
    e: Vec<Matrix>,
    h: Vec<Matrix>,
    f: Vec<Matrix>,
    /// Index of each basis vector in an ambient Verma basis, when known.
    pub labels: Option<Vec<usize>>,
}

impl ModuleRep {
    pub fn new(
        field: Field,
        chi: ChiForm,
        dim: usize,
        e: Vec<Matrix>,
        h: Vec<Matrix>,
        f: Vec<Matrix>,
    ) -> Result<ModuleRep, RepError> {
        if chi.p != field.p() {
            return Err(RepError::Shape("character and field disagree on p".into()));
        }
        let levels = e.len();
        if h.len() != levels || f.len() != levels {
            return Err(RepError::Shape("generator families of unequal length".into()));
        }
        if e.iter().chain(&h).chain(&f).any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(RepError::Shape(format!("generator is not {dim}x{dim}")));
        }
        Ok(ModuleRep { field, chi, levels, dim, e, h, f, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> ModuleRep {
        assert_eq!(labels.len(), self.dim, "one label per basis vector");
        self.labels = Some(labels);
        self
    }

    pub fn p(&self) -> u32 {
        self.chi.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// `p^levels`: the bound on divided-power indices.
    pub fn index_bound(&self) -> usize {
        (self.p() as usize).pow(self.levels as u32)
    }

    pub fn gen(&self, kind: GenKind, j: usize) -> &Matrix {
        match kind {
            GenKind::E => &self.e[j],
            GenKind::H => &self.h[j],
            GenKind::F => &self.f[j],
        }
    }

    pub fn gen_mut(&mut self, kind: GenKind, j: usize) -> &mut Matrix {
        match kind {
            GenKind::E => &mut self.e[j],
            GenKind::H => &mut self.h[j],
            GenKind::F => &mut self.f[j],
        }
    }

    /// All generators, level by level.
    pub fn generators(&self) -> Vec<(GenKind, usize, &Matrix)> {
        (0..self.levels)
            .flat_map(|j| GenKind::ALL.into_iter().map(move |k| (k, j)))
            .map(|(k, j)| (k, j, self.gen(k, j)))
            .collect()
    }

    pub fn sparse_generators(&self) -> Vec<Sparse> {
        self.generators().into_iter().map(|(_, _, m)| m.to_sparse()).collect()
    }

    pub fn h_is_diagonal(&self) -> bool {
        self.h.iter().all(Matrix::is_diagonal)
    }

    /// Joint eigenvalues of the `H_j` on each basis vector, when diagonal.
    pub fn h_tuples(&self) -> Option<Vec<Vec<FieldElem>>> {
        self.h_is_diagonal()
            .then(|| (0..self.dim).map(|i| self.h.iter().map(|m| m.get(i, i)).collect()).collect())
    }

    /// The first `levels` generator levels, as a module over `Di(G_(levels))`.
    pub fn restrict_levels(&self, levels: usize) -> ModuleRep {
        assert!(levels <= self.levels);
        let zero = ChiForm::standard(ChiKind::Zero, self.p(), None).expect("valid p");
        ModuleRep {
            field: self.field.clone(),
            chi: zero,
            levels,
            dim: self.dim,
            e: self.e[..levels].to_vec(),
            h: self.h[..levels].to_vec(),
            f: self.f[..levels].to_vec(),
            labels: self.labels.clone(),
        }
    }

    /// The submodule or quotient on a coordinate subset, assuming it is
    /// invariant (or complementary to an invariant coordinate subspace).
    pub fn select(&self, idx: &[usize]) -> ModuleRep {
        let pick = |v: &Vec<Matrix>| v.iter().map(|m| m.select(idx, idx)).collect();
        ModuleRep {
            field: self.field.clone(),
            chi: self.chi,
            levels: self.levels,
            dim: idx.len(),
            e: pick(&self.e),
            h: pick(&self.h),
            f: pick(&self.f),
            labels: self.labels.as_ref().map(|l| idx.iter().map(|&i| l[i]).collect()),
        }
    }

    pub fn divided_powers(&self) -> DividedPowers {
        DividedPowers::new(self)
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let enc = |ms: &[Matrix]| -> Value {
            ms.iter()
                .map(|m| {
                    (0..m.rows())
                        .map(|i| m.row(i).iter().map(|&x| json!(f.coeffs(x))).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                })
                .collect()
        };
        let mut v = json!({
            "dim": self.dim,
            "p": self.p(),
            "r": self.levels as i64 - 1,
            "chi": self.chi.to_json(),
            "modulus": f.modulus(),
            "matrices": { "E": enc(&self.e), "H": enc(&self.h), "F": enc(&self.f) },
        });
        if let Some(l) = &self.labels {
            v["labels"] = json!(l);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<ModuleRep, RepError> {
        let bad = |what: &str| RepError::Json(what.to_string());
        let p = v["p"].as_u64().ok_or_else(|| bad("p"))? as u32;
        let dim = v["dim"].as_u64().ok_or_else(|| bad("dim"))? as usize;
        let chi = ChiForm::from_json(p, &v["chi"])?;
        let modulus: Vec<u32> =
            serde_json::from_value(v["modulus"].clone()).map_err(|_| bad("modulus"))?;
        let field = Field::from_modulus(p, &modulus)?;
        let dec = |key: &str| -> Result<Vec<Matrix>, RepError> {
            let raw: Vec<Vec<Vec<Vec<u32>>>> = serde_json::from_value(v["matrices"][key].clone())
                .map_err(|_| bad(&format!("matrices.{key}")))?;
            raw.into_iter()
                .map(|m| {
                    let rows = m
                        .into_iter()
                        .map(|row| row.iter().map(|c| field.from_coeffs(c)).collect::<Result<Vec<_>, _>>())
                        .collect::<Result<Vec<_>, _>>()?;
                    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                        return Err(bad(&format!("matrices.{key} shape")));
                    }
                    Ok(Matrix::from_rows(rows, dim))
                })
                .collect()
        };
        let rep = ModuleRep::new(field.clone(), chi, dim, dec("E")?, dec("H")?, dec("F")?)?;
        if v["r"].as_i64() != Some(rep.levels as i64 - 1) {
            return Err(bad("r does not match the number of levels"));
        }
        match v.get("labels") {
            Some(l) => {
                let labels: Vec<usize> = serde_json::from_value(l.clone()).map_err(|_| bad("labels"))?;
                if labels.len() != dim {
                    return Err(bad("labels"));
                }
                Ok(rep.with_labels(labels))
            }
            None => Ok(rep),
        }
    }
}

/// Matrices of every divided power `e^(n)`, `binom(h, n)`, `f^(n)` with
/// `n < p^levels`, assembled from the generators digit by digit.
pub struct DividedPowers {
    field: Field,
    p: u32,
    levels: usize,
    pub e: Vec<Matrix>,
    pub h: Vec<Matrix>,
    pub f: Vec<Matrix>,
}

impl DividedPowers {
    fn new(rep: &ModuleRep) -> DividedPowers {
        let fl = &rep.field;
        let p = rep.p();
        let n = rep.index_bound();
        let dim = rep.dim;
        // per level, the p matrices X^a / a! (or binom(H, a))
        let digit_table = |gens: &[Matrix], toral: bool| -> Vec<Vec<Matrix>> {
            gens.iter()
                .map(|g| {
                    let mut out = vec![Matrix::identity(dim)];
                    for a in 1..p as usize {
                        let prev = &out[a - 1];
                        let factor = if toral {
                            g.sub(fl, &Matrix::scalar(dim, fl.from_int(a as i64 - 1)))
                        } else {
                            g.clone()
                        };
                        let inv_a = fl.inv(fl.from_int(a as i64)).expect("a < p");
                        out.push(prev.mul(fl, &factor).scale(fl, inv_a));
                    }
                    out
                })
                .collect()
        };
        let assemble = |table: Vec<Vec<Matrix>>| -> Vec<Matrix> {
            (0..n)
                .map(|k| {
                    modp::digits(k as u64, p, rep.levels.max(1))
                        .iter()
                        .take(rep.levels)
                        .enumerate()
                        .fold(Matrix::identity(dim), |acc, (u, &a)| {
                            if a == 0 {
                                acc
                            } else {
                                acc.mul(fl, &table[u][a as usize])
                            }
                        })
                })
                .collect()
        };
        DividedPowers {
            field: fl.clone(),
            p,
            levels: rep.levels,
            e: assemble(digit_table(&rep.e, false)),
            h: assemble(digit_table(&rep.h, true)),
            f: assemble(digit_table(&rep.f, false)),
        }
    }

    /// `binom(h + m, n) = Σ_q binom(m, n - q)·binom(h, q)`.
    pub fn h_shifted(&self, m: i64, n: usize) -> Matrix {
        let fl = &self.field;
        let mut acc = Matrix::zeros(self.h[0].rows(), self.h[0].cols());
        for q in 0..=n {
            let c = modp::binom_mod_p(m, (n - q) as u64, self.p);
            acc.add_scaled(fl, fl.from_int(c as i64), &self.h[q]);
        }
        acc
    }

    pub fn levels(&self) -> usize {
        self.levels
    }
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl RelationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, name: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(name());
        }
    }
}

/// Checks the power relations, the commutation of like generators, and the
/// straightening identities for `h` past `e`/`f` and `e` past `f`.
pub fn verify_relations(rep: &ModuleRep) -> RelationReport {
    let mut report = RelationReport::default();
    if rep.levels == 0 {
        return report;
    }
    let fl = &rep.field;
    let p = rep.p() as u64;
    let dim = rep.dim;
    let top = rep.levels - 1;
    let zero = Matrix::zeros(dim, dim);
    let chi_p = |x: FieldElem| fl.frobenius(x);

    for j in 0..rep.levels {
        let (ce, cf, ch) = if j == top {
            (chi_p(rep.chi.c_e()), chi_p(rep.chi.c_f()), chi_p(rep.chi.c_h()))
        } else {
            (FieldElem::ZERO, FieldElem::ZERO, FieldElem::ZERO)
        };
        report.check(rep.e[j].pow(fl, p) == Matrix::scalar(dim, ce), || format!("E_{j}^p = {ce:?}"));
        report.check(rep.f[j].pow(fl, p) == Matrix::scalar(dim, cf), || format!("F_{j}^p = {cf:?}"));
        report.check(
            rep.h[j].pow(fl, p).sub(fl, &rep.h[j]) == Matrix::scalar(dim, ch),
            || format!("H_{j}^p - H_{j} = {ch:?}"),
        );
    }
    for j in 0..rep.levels {
        for u in j + 1..rep.levels {
            for kind in GenKind::ALL {
                let (a, b) = (rep.gen(kind, j), rep.gen(kind, u));
                report.check(a.commutator(fl, b) == zero, || format!("[{kind}_{j}, {kind}_{u}] = 0"));
            }
        }
    }
    let dp = rep.divided_powers();
    let pp = |j: usize| (p as usize).pow(j as u32);
    for s in 0..rep.levels {
        for u in 0..rep.levels {
            // binom(h, p^u) x^(p^s) = x^(p^s) binom(h ± 2p^s, p^u)
            let he = rep.h[u].mul(fl, &rep.e[s]);
            let rhs = rep.e[s].mul(fl, &dp.h_shifted(2 * pp(s) as i64, pp(u)));
            report.check(he == rhs, || format!("H_{u} E_{s} straightening"));
            let hf = rep.h[u].mul(fl, &rep.f[s]);
            let rhs = rep.f[s].mul(fl, &dp.h_shifted(-2 * pp(s) as i64, pp(u)));
            report.check(hf == rhs, || format!("H_{u} F_{s} straightening"));

            // e^(a) f^(b) = Σ_t f^(b-t) binom(h - a - b + 2t, t) e^(a-t)
            let (a, b) = (pp(s), pp(u));
            let lhs = rep.e[s].mul(fl, &rep.f[u]);
            let mut rhs = Matrix::zeros(dim, dim);
            for t in 0..=a.min(b) {
                let mid = dp.h_shifted(2 * t as i64 - a as i64 - b as i64, t);
                let term = dp.f[b - t].mul(fl, &mid).mul(fl, &dp.e[a - t]);
                rhs = rhs.add(fl, &term);
            }
            report.check(lhs == rhs, || format!("E_{s} F_{u} straightening"));
        }
    }
    report
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CentralityReport {
    pub e_scalar: Option<Vec<u32>>,
    pub h_scalar: Option<Vec<u32>>,
    pub f_scalar: Option<Vec<u32>>,
    pub violations: Vec<String>,
}

impl CentralityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `E_r^p`, `H_r^p - H_r` and `F_r^p` act by the scalars
/// `χ_e^p`, `χ_h^p`, `χ_f^p` and commute with every generator.
pub fn verify_centrality(rep: &ModuleRep) -> CentralityReport {
    let fl = &rep.field;
    let p = rep.p() as u64;
    let mut violations = Vec::new();
    if rep.levels == 0 {
        return CentralityReport { e_scalar: None, h_scalar: None, f_scalar: None, violations };
    }
    let top = rep.levels - 1;
    let central = [
        ("E", rep.e[top].pow(fl, p), rep.chi.c_e()),
        ("H", rep.h[top].pow(fl, p).sub(fl, &rep.h[top]), rep.chi.c_h()),
        ("F", rep.f[top].pow(fl, p), rep.chi.c_f()),
    ];
    let mut scalars = Vec::new();
    for (name, z, chi) in &central {
        let expected = fl.frobenius(*chi);
        let s = z.as_scalar();
        if s != Some(expected) {
            violations.push(format!("{name} central element is not {expected:?} times identity"));
        }
        for (kind, j, g) in rep.generators() {
            if !z.commutator(fl, g).is_zero() {
                violations.push(format!("{name} central element fails to commute with {kind}_{j}"));
            }
        }
        scalars.push(s.map(|x| fl.coeffs(x)));
    }
    let mut it = scalars.into_iter();
    CentralityReport {
        e_scalar: it.next().flatten(),
        h_scalar: it.next().flatten(),
        f_scalar: it.next().flatten(),
        violations,
    }
}

/// Pulls a module back along the map killing the lowest `target_levels -
/// levels` generator levels and shifting the rest down.
pub fn lift_module(rep: &ModuleRep, target_levels: usize) -> Result<ModuleRep, RepError> {
    if target_levels < rep.levels {
        return Err(RepError::Shape(format!(
            "cannot lift {} levels down to {target_levels}",
            rep.levels
        )));
    }
    let shift = target_levels - rep.levels;
    let zero = Matrix::zeros(rep.dim, rep.dim);
    let lift = |v: &Vec<Matrix>| -> Vec<Matrix> {
        (0..target_levels).map(|j| if j < shift { zero.clone() } else { v[j - shift].clone() }).collect()
    };
    let mut out = ModuleRep::new(rep.field.clone(), rep.chi, rep.dim, lift(&rep.e), lift(&rep.h), lift(&rep.f))?;
    out.labels = rep.labels.clone();
    let report = verify_relations(&out);
    if !report.is_ok() {
        return Err(RepError::Lift(report.violations));
    }
    Ok(out)
}

/// The one-dimensional module on which every generator acts as zero.
pub fn trivial_module(field: &Field, chi: ChiForm, levels: usize) -> ModuleRep {
    let z = vec![Matrix::zeros(1, 1); levels];
    ModuleRep::new(field.clone(), chi, 1, z.clone(), z.clone(), z).expect("consistent shapes")
}
