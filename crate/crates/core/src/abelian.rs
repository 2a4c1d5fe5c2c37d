//! Higher reduced enveloping algebras of the additive and multiplicative
//! groups. Both are commutative of dimension `p^{r+1}`; they are built from
//! the distribution-algebra structure constants and, independently, from
//! the polynomial presentation in `t_0, …, t_r`.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Field, FieldElem, FieldError};
use crate::linalg::Matrix;
use crate::modp;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("dimension p^(r+1) exceeds {0}")]
    TooLarge(usize),
    #[error("{0}")]
    Field(#[from] FieldError),
}

fn violation<T>(msg: impl Into<String>) -> Result<T, AbelianError> {
    Err(AbelianError::TheoremViolation(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Group {
    #[serde(rename = "Ga")]
    Additive,
    #[serde(rename = "Gm")]
    Multiplicative,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::Additive => "Ga",
            Group::Multiplicative => "Gm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Basis `γ_k` or `δ_k`, `k < p^{r+1}`, multiplied by the distribution
    /// rule with the top level deformed by `χ`.
    StructureConstants,
    /// Basis of monomials `Π t_i^{a_i}`, `a_i < p`, indexed by `Σ a_i p^i`.
    Presentation,
}

type Table = Vec<Vec<(usize, FieldElem)>>;

#[derive(Debug)]
pub struct CommAlgebra {
    pub group: Group,
    pub route: Route,
    pub field: Field,
    pub p: u32,
    pub r: usize,
    pub chi: FieldElem,
    dim: usize,
    table: OnceLock<Table>,
}

/// Polynomials over a field, constant term first.
type Poly = Vec<FieldElem>;

fn poly_mul(fl: &Field, a: &[FieldElem], b: &[FieldElem]) -> Poly {
    let mut out = vec![FieldElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fl.add(out[i + j], fl.mul(x, y));
        }
    }
    out
}

/// Remainder modulo a monic polynomial.
fn poly_rem(fl: &Field, mut a: Poly, monic: &[FieldElem]) -> Poly {
    let d = monic.len() - 1;
    while a.len() > d {
        let lead = a.pop().expect("nonempty");
        let shift = a.len() - d;
        for (i, &m) in monic[..d].iter().enumerate() {
            a[shift + i] = fl.sub(a[shift + i], fl.mul(lead, m));
        }
    }
    a.resize(d, FieldElem::ZERO);
    a
}

fn poly_eval(fl: &Field, a: &[FieldElem], x: FieldElem) -> FieldElem {
    a.iter().rev().fold(FieldElem::ZERO, |acc, &c| fl.add(fl.mul(acc, x), c))
}

/// Divides by `X − ρ`; `None` if `ρ` is not a root.
fn divide_linear(fl: &Field, a: &[FieldElem], rho: FieldElem) -> Option<Poly> {
    let mut q = vec![FieldElem::ZERO; a.len() - 1];
    let mut carry = FieldElem::ZERO;
    for i in (0..a.len()).rev() {
        let v = fl.add(a[i], fl.mul(carry, rho));
        if i == 0 {
            return v.is_zero().then_some(q);
        }
        q[i - 1] = v;
        carry = v;
    }
    unreachable!()
}

/// The relation satisfied by `t_i`: `X^p − c` for the additive group and
/// `X^p − X − c` for the multiplicative one, with `c = χ^p` at the top
/// level and `0` below.
pub fn expected_relation(group: Group, fl: &Field, p: u32, top: bool, chi: FieldElem) -> Poly {
    let c = if top { fl.frobenius(chi) } else { FieldElem::ZERO };
    let mut m = vec![FieldElem::ZERO; p as usize + 1];
    m[p as usize] = FieldElem::ONE;
    m[0] = fl.neg(c);
    if group == Group::Multiplicative {
        m[1] = fl.neg(FieldElem::ONE);
    }
    m
}

/// The top-level basis polynomial: `X^a/a!` or `binom(X, a)`.
fn level_basis(group: Group, fl: &Field, a: u32) -> Poly {
    let p = fl.p();
    let inv_fact = fl.from_int(modp::inv_mod(modp::small_factorial(a, p), p) as i64);
    let mut poly = vec![FieldElem::ONE];
    for s in 0..a {
        let shift = match group {
            Group::Additive => FieldElem::ZERO,
            Group::Multiplicative => fl.from_int(s as i64),
        };
        poly = poly_mul(fl, &poly, &[fl.neg(shift), FieldElem::ONE]);
    }
    poly.iter().map(|&c| fl.mul(c, inv_fact)).collect()
}

/// Products of top-level basis polynomials reduced by the top relation,
/// re-expanded in the same basis: entry `a·p + b` lists `(c, coeff)`.
fn top_products(group: Group, fl: &Field, chi: FieldElem) -> Vec<Vec<(u32, FieldElem)>> {
    let p = fl.p();
    let basis: Vec<Poly> = (0..p).map(|a| level_basis(group, fl, a)).collect();
    let relation = expected_relation(group, fl, p, true, chi);
    let mut out = Vec::with_capacity((p * p) as usize);
    for a in 0..p as usize {
        for b in 0..p as usize {
            let mut rest = poly_rem(fl, poly_mul(fl, &basis[a], &basis[b]), &relation);
            let mut terms = Vec::new();
            for c in (0..p as usize).rev() {
                let coeff = fl.div(rest[c], basis[c][c]).expect("basis polynomials are monic up to a unit");
                if !coeff.is_zero() {
                    for (i, &x) in basis[c].iter().enumerate() {
                        rest[i] = fl.sub(rest[i], fl.mul(coeff, x));
                    }
                    terms.push((c as u32, coeff));
                }
            }
            terms.reverse();
            out.push(terms);
        }
    }
    out
}

/// The distribution-algebra product of basis vectors `k·l`, as integer
/// coefficients mod `p` on indices (which may exceed the algebra range).
fn di_product(group: Group, p: u32, k: u64, l: u64) -> Vec<(u64, u32)> {
    match group {
        Group::Additive => {
            let c = modp::binom_mod_p((k + l) as i64, k, p);
            if c == 0 {
                vec![]
            } else {
                vec![(k + l, c)]
            }
        }
        Group::Multiplicative => (0..=k.min(l))
            .filter_map(|i| {
                let c = modp::multinomial_mod_p(&[k - i, l - i, i], p);
                (c != 0).then_some((k + l - i, c))
            })
            .collect(),
    }
}

impl CommAlgebra {
    fn new(group: Group, route: Route, field: &Field, r: usize, chi: FieldElem) -> Result<CommAlgebra, AbelianError> {
        let p = field.p();
        let dim = modp::checked_pow(p, r + 1)
            .filter(|&d| d <= 1 << 16)
            .ok_or(AbelianError::TooLarge(1 << 16))? as usize;
        if !field.contains(chi) {
            return Err(FieldError::SpecMismatch.into());
        }
        Ok(CommAlgebra { group, route, field: field.clone(), p, r, chi, dim, table: OnceLock::new() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn pr(&self) -> usize {
        self.dim / self.p as usize
    }

    fn table(&self) -> &Table {
        self.table.get_or_init(|| match self.route {
            Route::StructureConstants => self.structure_table(),
            Route::Presentation => self.presentation_table(),
        })
    }

    fn structure_table(&self) -> Table {
        let (fl, p, pr) = (&self.field, self.p, self.pr());
        let top = top_products(self.group, fl, self.chi);
        // Below the top level the distribution rule never leaves the span of
        // indices < p^r; at the top, sums of digits < p agree with it.
        for a in 0..p as u64 {
            for b in 0..p as u64 - a {
                let mut di: Vec<(u64, FieldElem)> = di_product(self.group, p, a * pr as u64, b * pr as u64)
                    .into_iter()
                    .map(|(m, c)| (m, fl.from_int(c as i64)))
                    .collect();
                di.sort_by_key(|t| t.0);
                let poly: Vec<(u64, FieldElem)> =
                    top[(a * p as u64 + b) as usize].iter().map(|&(c, x)| (c as u64 * pr as u64, x)).collect();
                assert_eq!(di, poly, "top-level rule disagrees with the distribution rule");
            }
        }
        let mut table = Vec::with_capacity(self.dim * self.dim);
        for k in 0..self.dim {
            for l in 0..self.dim {
                let (k0, l0) = ((k % pr) as u64, (l % pr) as u64);
                let low = di_product(self.group, p, k0, l0);
                assert!(low.iter().all(|&(m, _)| m < pr as u64), "lower levels leaked into the top level");
                let mut terms = Vec::new();
                for &(m, x) in &low {
                    for &(n, y) in &top[(k / pr) * p as usize + l / pr] {
                        terms.push((m as usize + n as usize * pr, fl.mul(fl.from_int(x as i64), y)));
                    }
                }
                terms.sort_by_key(|t| t.0);
                table.push(terms);
            }
        }
        table
    }

    fn presentation_table(&self) -> Table {
        let (fl, p) = (&self.field, self.p as usize);
        let c_top = fl.frobenius(self.chi);
        let reduce = |level: usize, e: usize| -> Vec<(usize, FieldElem)> {
            if e < p {
                return vec![(e, FieldElem::ONE)];
            }
            let c = if level == self.r { c_top } else { FieldElem::ZERO };
            let mut out = vec![(e - p, c)];
            if self.group == Group::Multiplicative {
                out.push((e - p + 1, FieldElem::ONE));
            }
            out.retain(|t| !t.1.is_zero());
            out
        };
        let mut table = Vec::with_capacity(self.dim * self.dim);
        for k in 0..self.dim {
            for l in 0..self.dim {
                let (dk, dl) = (modp::digits(k as u64, self.p, self.r + 1), modp::digits(l as u64, self.p, self.r + 1));
                let mut terms = vec![(0usize, FieldElem::ONE)];
                let mut place = 1;
                for i in 0..=self.r {
                    let level = reduce(i, (dk[i] + dl[i]) as usize);
                    terms = terms
                        .iter()
                        .flat_map(|&(idx, x)| level.iter().map(move |&(e, y)| (idx + e * place, fl.mul(x, y))))
                        .collect();
                    place *= p;
                }
                terms.sort_by_key(|t| t.0);
                table.push(terms);
            }
        }
        table
    }

    pub fn zero(&self) -> Vec<FieldElem> {
        vec![FieldElem::ZERO; self.dim]
    }

    pub fn one(&self) -> Vec<FieldElem> {
        self.basis(0)
    }

    pub fn basis(&self, k: usize) -> Vec<FieldElem> {
        let mut v = self.zero();
        v[k] = FieldElem::ONE;
        v
    }

    /// The generator `t_i`: `γ_{p^i}`, `δ_{p^i}` or the monomial itself.
    pub fn t(&self, i: usize) -> Vec<FieldElem> {
        self.basis(self.p.pow(i as u32) as usize)
    }

    pub fn basis_product(&self, k: usize, l: usize) -> &[(usize, FieldElem)] {
        &self.table()[k * self.dim + l]
    }

    pub fn mul(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        let fl = &self.field;
        let mut out = self.zero();
        for (k, &x) in a.iter().enumerate().filter(|t| !t.1.is_zero()) {
            for (l, &y) in b.iter().enumerate().filter(|t| !t.1.is_zero()) {
                let xy = fl.mul(x, y);
                for &(m, c) in self.basis_product(k, l) {
                    out[m] = fl.add(out[m], fl.mul(xy, c));
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[FieldElem], mut e: u64) -> Vec<FieldElem> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn sub(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        a.iter().zip(b).map(|(&x, &y)| self.field.sub(x, y)).collect()
    }

    pub fn scale(&self, c: FieldElem, a: &[FieldElem]) -> Vec<FieldElem> {
        a.iter().map(|&x| self.field.mul(c, x)).collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|k| (k..self.dim).all(|l| self.basis_product(k, l) == self.basis_product(l, k)))
    }

    /// Associativity on `samples` seeded triples of basis vectors.
    pub fn is_associative_sampled(&self, samples: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).all(|_| {
            let [a, b, c] = [(); 3].map(|_| self.basis(rng.gen_range(0..self.dim)));
            self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
        })
    }

    /// Monic minimal polynomial of `x`, constant term first.
    pub fn minimal_polynomial(&self, x: &[FieldElem]) -> Poly {
        let fl = &self.field;
        let mut powers = vec![self.one()];
        loop {
            let next = self.mul(powers.last().expect("nonempty"), x);
            powers.push(next);
            let cols = powers.len();
            let m = Matrix::from_rows(
                (0..self.dim).map(|row| powers.iter().map(|v| v[row]).collect()).collect(),
                cols,
            );
            if let Some(v) = m.nullspace(fl).into_iter().next() {
                let lead = fl.inv(v[cols - 1]).expect("dependency involves the newest power");
                return v.iter().map(|&c| fl.mul(c, lead)).collect();
            }
        }
    }

    /// Checks the minimal polynomial of every `t_i` against the presentation.
    pub fn check_presentation(&self) -> Result<(), AbelianError> {
        for i in 0..=self.r {
            let got = self.minimal_polynomial(&self.t(i));
            let want = expected_relation(self.group, &self.field, self.p, i == self.r, self.chi);
            if got != want {
                return violation(format!("{} minimal polynomial of t_{i} does not match the presentation", self.group.name()));
            }
        }
        Ok(())
    }

    pub fn chi_json(&self) -> Value {
        match self.field.as_prime(self.chi) {
            Some(c) => json!(c),
            None => json!(self.field.coeffs(self.chi)),
        }
    }

    /// The full multiplication table as `[k, l, [[m, coeffs], …]]` rows.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.dim)
            .flat_map(|k| (0..self.dim).map(move |l| (k, l)))
            .map(|(k, l)| {
                let terms: Vec<Value> =
                    self.basis_product(k, l).iter().map(|&(m, c)| json!([m, self.field.coeffs(c)])).collect();
                json!([k, l, terms])
            })
            .collect();
        json!({
            "group": self.group,
            "p": self.p,
            "r": self.r,
            "chi": self.chi_json(),
            "dim": self.dim,
            "modulus": self.field.modulus(),
            "table": rows,
        })
    }
}

/// `U_χ^[r](G_a)` from the `γ` structure constants; checks the presentation.
pub fn build_additive(field: &Field, r: usize, chi: FieldElem) -> Result<CommAlgebra, AbelianError> {
    let a = CommAlgebra::new(Group::Additive, Route::StructureConstants, field, r, chi)?;
    a.check_presentation()?;
    Ok(a)
}

/// `U_χ^[r](G_m)` from the `δ` structure constants; checks the presentation
/// and semisimplicity.
pub fn build_multiplicative(field: &Field, r: usize, chi: FieldElem) -> Result<CommAlgebra, AbelianError> {
    let a = CommAlgebra::new(Group::Multiplicative, Route::StructureConstants, field, r, chi)?;
    a.check_presentation()?;
    if radical_dim(&a) != 0 {
        return violation("Gm algebra has a nonzero radical");
    }
    Ok(a)
}

/// The algebra defined by the polynomial presentation alone.
pub fn build_presentation(group: Group, field: &Field, r: usize, chi: FieldElem) -> Result<CommAlgebra, AbelianError> {
    CommAlgebra::new(group, Route::Presentation, field, r, chi)
}

/// Smallest field over which the relations of `group` split: `F_p`, or the
/// Artin–Schreier extension for `G_m` with `χ ≠ 0`.
pub fn splitting_field(group: Group, p: u32, chi: i64) -> Result<Field, FieldError> {
    if group == Group::Multiplicative && modp::reduce(chi, p) != 0 {
        Field::artin_schreier(p, chi)
    } else {
        Field::prime(p)
    }
}

/// Verifies `t_i ↦ t_i` extends to an isomorphism from the presentation to
/// the structure-constant algebra: the images of the monomials form a basis
/// and the map respects multiplication by every generator.
pub fn check_isomorphism(pres: &CommAlgebra, sc: &CommAlgebra) -> Result<(), AbelianError> {
    let (fl, p) = (&sc.field, sc.p);
    if pres.dim != sc.dim || pres.group != sc.group || pres.chi != sc.chi {
        return violation("algebras have different parameters");
    }
    let images: Vec<Vec<FieldElem>> = (0..pres.dim)
        .map(|k| {
            modp::digits(k as u64, p, sc.r + 1)
                .iter()
                .enumerate()
                .fold(sc.one(), |acc, (i, &a)| sc.mul(&acc, &sc.pow(&sc.t(i), a as u64)))
        })
        .collect();
    if !Matrix::from_rows(images.clone(), sc.dim).is_invertible(fl) {
        return violation("monomials in the t_i do not span the structure-constant algebra");
    }
    let apply = |v: &[FieldElem]| -> Vec<FieldElem> {
        let mut out = sc.zero();
        for (k, &c) in v.iter().enumerate().filter(|t| !t.1.is_zero()) {
            for (o, &x) in out.iter_mut().zip(&images[k]) {
                *o = fl.add(*o, fl.mul(c, x));
            }
        }
        out
    };
    for i in 0..=sc.r {
        let ti = pres.t(i);
        for k in 0..pres.dim {
            let lhs = apply(&pres.mul(&ti, &pres.basis(k)));
            let rhs = sc.mul(&sc.t(i), &images[k]);
            if lhs != rhs {
                return violation(format!("t_{i} times monomial {k} is not preserved"));
            }
        }
    }
    Ok(())
}

/// Dimension of the nilradical: the kernel of `x ↦ x^{p^M}` with
/// `p^M ≥ dim`. The map is Frobenius-semilinear, so its kernel has the
/// dimension of the null space of the matrix of basis images.
pub fn radical_dim(a: &CommAlgebra) -> usize {
    let q = frobenius_exponent(a);
    let cols: Vec<Vec<FieldElem>> = (0..a.dim).map(|k| a.pow(&a.basis(k), q)).collect();
    a.dim - Matrix::from_rows(cols, a.dim).rank(&a.field)
}

fn frobenius_exponent(a: &CommAlgebra) -> u64 {
    let mut q = 1u64;
    while (q as usize) < a.dim {
        q *= a.p as u64;
    }
    q
}

/// Distinct roots of `m` in the field, or an error if `m` does not split.
fn split_roots(fl: &Field, m: &[FieldElem]) -> Result<Vec<FieldElem>, AbelianError> {
    let roots: Vec<FieldElem> = fl.elements().filter(|&x| poly_eval(fl, m, x).is_zero()).collect();
    let mut rest = m.to_vec();
    for &rho in &roots {
        while rest.len() > 1 {
            match divide_linear(fl, &rest, rho) {
                Some(q) => rest = q,
                None => break,
            }
        }
    }
    if rest.len() != 1 {
        return Err(FieldError::InsufficientField { expected: m.len() - 1, found: m.len() - rest.len() }.into());
    }
    Ok(roots)
}

/// Primitive idempotents of `a`, one per character `t_i ↦ β_i`: the
/// `p^M`-th power of the Lagrange product `Π_i Π_{ρ ≠ β_i} (t_i − ρ)/(β_i − ρ)`
/// is the idempotent of that character's local factor, and zero when the
/// character does not occur.
pub fn primitive_idempotents(a: &CommAlgebra) -> Result<Vec<Vec<FieldElem>>, AbelianError> {
    let fl = &a.field;
    let q = frobenius_exponent(a);
    let roots = (0..=a.r)
        .map(|i| split_roots(fl, &a.minimal_polynomial(&a.t(i))))
        .collect::<Result<Vec<_>, _>>()?;
    // Per level, the Lagrange factor of each root.
    let factors: Vec<Vec<Vec<FieldElem>>> = roots
        .iter()
        .enumerate()
        .map(|(i, rs)| {
            rs.iter()
                .map(|&beta| {
                    rs.iter().filter(|&&rho| rho != beta).fold(a.one(), |acc, &rho| {
                        let lin = a.sub(&a.t(i), &a.scale(rho, &a.one()));
                        let inv = fl.inv(fl.sub(beta, rho)).expect("distinct roots");
                        a.scale(inv, &a.mul(&acc, &lin))
                    })
                })
                .collect()
        })
        .collect();
    let mut tuples: Vec<Vec<FieldElem>> = vec![a.one()];
    for level in &factors {
        tuples = tuples.iter().flat_map(|y| level.iter().map(move |f| a.mul(y, f))).collect();
    }
    let mut idempotents = Vec::new();
    for y in tuples {
        let e = a.pow(&y, q);
        if e.iter().any(|x| !x.is_zero()) {
            if a.mul(&e, &e) != e {
                return violation("Lagrange idempotent is not idempotent");
            }
            idempotents.push(e);
        }
    }
    let total = idempotents
        .iter()
        .fold(a.zero(), |acc, e| acc.iter().zip(e).map(|(&x, &y)| fl.add(x, y)).collect());
    if total != a.one() {
        return violation("primitive idempotents do not sum to 1");
    }
    Ok(idempotents)
}

#[derive(Debug, Clone, Serialize)]
pub struct RingReport {
    pub group: Group,
    pub p: u32,
    pub r: usize,
    pub chi: Value,
    pub dim: usize,
    pub radical_dim: usize,
    pub idempotents: usize,
    pub local: bool,
    /// The count `r·p` of one-dimensional factors stated in the literature
    /// for the multiplicative group, and whether the computation agrees.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rp_figure: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rp_figure_matches: Option<bool>,
}

pub fn analyze_ring(a: &CommAlgebra) -> Result<RingReport, AbelianError> {
    let idempotents = primitive_idempotents(a)?.len();
    let rp = (a.group == Group::Multiplicative).then_some(a.r * a.p as usize);
    Ok(RingReport {
        group: a.group,
        p: a.p,
        r: a.r,
        chi: a.chi_json(),
        dim: a.dim,
        radical_dim: radical_dim(a),
        idempotents,
        local: idempotents == 1,
        rp_figure: rp,
        rp_figure_matches: rp.map(|x| x == idempotents),
    })
}
