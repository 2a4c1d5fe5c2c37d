//! Normal-form multiplication in `U_χ^[r](SL₂)`.
//!
//! Elements are combinations of monomials `f^(i)·binom(h, k)·e^(j)` with
//! `i, k, j < p^{r+1}`; divided powers of `f` and `e` factor digit-wise
//! through the generators `f^(p^u)`, `e^(p^u)`, and `binom(h, k)` factors as
//! `Π_u binom(binom(h, p^u), k_u)`. Products are straightened by:
//!
//! * `e^(a) f^(b) = Σ_t f^(b-t) binom(h - a - b + 2t, t) e^(a-t)`
//! * `binom(h, l) f^(m) = f^(m) binom(h - 2m, l)`,
//!   `e^(m) binom(h, l) = binom(h - 2m, l) e^(m)`
//! * like divided powers merge digit-wise; a carry out of a level below the
//!   top kills the term, a carry out of the top level contributes `χ(·)^p`
//! * toral products are computed level by level in
//!   `F_p[x]/(x^p - x - c)`, with `c = χ(binom(h, p^r))^p` on the top level
//!   and `c = 0` below it.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::field::{Field, FieldElem};
use crate::linalg::Matrix;
use crate::modp;
use crate::rep::{GenKind, ModuleRep, RepError};
use crate::weights::Setting;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial {
    pub i: u32,
    pub k: u32,
    pub j: u32,
}

struct Inner {
    setting: Setting,
    // toral[a * n + b]: binom(h, a)·binom(h, b) expanded in the binom(h, m)
    toral: Vec<Vec<(u32, FieldElem)>>,
}

/// The algebra `U_χ^[r](SL₂)` for a fixed [`Setting`].
#[derive(Clone)]
pub struct Uea(Arc<Inner>);

impl std::fmt::Debug for Uea {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = &self.0.setting;
        write!(f, "Uea(p={}, r={}, chi={})", s.p, s.r, s.chi.kind)
    }
}

impl PartialEq for Uea {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.setting == other.0.setting
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraElement {
    alg: Uea,
    terms: BTreeMap<PbwMonomial, FieldElem>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.terms == other.terms
    }
}

impl Uea {
    pub fn new(setting: &Setting) -> Uea {
        let toral = toral_table(setting);
        Uea(Arc::new(Inner { setting: setting.clone(), toral }))
    }

    pub fn setting(&self) -> &Setting {
        &self.0.setting
    }

    fn field(&self) -> &Field {
        &self.0.setting.field
    }

    fn n(&self) -> usize {
        self.0.setting.n()
    }

    /// Dimension of the algebra: one monomial per code triple.
    pub fn dim(&self) -> usize {
        self.n().pow(3)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { alg: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> AlgebraElement {
        self.monomial(0, 0, 0).expect("in range")
    }

    pub fn monomial(&self, i: usize, k: usize, j: usize) -> Result<AlgebraElement, RepError> {
        let n = self.n();
        if i >= n || k >= n || j >= n {
            return Err(RepError::Shape(format!("monomial code ({i},{k},{j}) not below {n}")));
        }
        let mut x = self.zero();
        x.terms.insert(PbwMonomial { i: i as u32, k: k as u32, j: j as u32 }, FieldElem::ONE);
        Ok(x)
    }

    /// `e^(p^j)`, `binom(h, p^j)` or `f^(p^j)`.
    pub fn generator(&self, kind: GenKind, level: usize) -> Result<AlgebraElement, RepError> {
        let s = self.setting();
        if level > s.r {
            return Err(RepError::Shape(format!("level {level} exceeds r = {}", s.r)));
        }
        let q = s.pp(level);
        match kind {
            GenKind::F => self.monomial(q, 0, 0),
            GenKind::H => self.monomial(0, q, 0),
            GenKind::E => self.monomial(0, 0, q),
        }
    }

    /// Merges `x^(a)·x^(b)` for `x ∈ {e, f}` whose top-level `p`-th power
    /// is the scalar `top`.
    fn merge(&self, a: usize, b: usize, top: FieldElem) -> Option<(usize, FieldElem)> {
        let s = self.setting();
        let fl = self.field();
        let p = s.p;
        let (da, db) = (s.digits(a), s.digits(b));
        let mut coeff = 1 % p;
        for u in 0..s.r {
            let sum = da[u] + db[u];
            if sum >= p {
                return None;
            }
            coeff = modp::mul_mod(coeff, modp::binom_mod_p(sum as i64, da[u] as u64, p), p);
        }
        let (ar, br) = (da[s.r], db[s.r]);
        let sum = ar + br;
        if sum < p {
            let c = modp::mul_mod(coeff, modp::binom_mod_p(sum as i64, ar as u64, p), p);
            return (c != 0).then(|| (a + b, fl.from_int(c as i64)));
        }
        let top_p = fl.frobenius(top);
        if top_p.is_zero() {
            return None;
        }
        let rest = sum - p;
        let ratio = modp::mul_mod(
            modp::small_factorial(rest, p),
            modp::inv_mod(modp::mul_mod(modp::small_factorial(ar, p), modp::small_factorial(br, p), p), p),
            p,
        );
        let c = fl.mul(top_p, fl.from_int(modp::mul_mod(coeff, ratio, p) as i64));
        Some((a + b - s.n(), c))
    }

    /// Coefficients of `binom(h + m, l)` in the `binom(h, q)` basis.
    fn shifted(&self, m: i64, l: usize) -> Vec<FieldElem> {
        let fl = self.field();
        let p = self.setting().p;
        (0..=l).map(|q| fl.from_int(modp::binom_mod_p(m, (l - q) as u64, p) as i64)).collect()
    }

    fn toral_mul(&self, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        let fl = self.field();
        let n = self.n();
        let mut out = vec![FieldElem::ZERO; n];
        for (a, &xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = fl.mul(xa, yb);
                for &(m, t) in &self.0.toral[a * n + b] {
                    out[m as usize] = fl.add(out[m as usize], fl.mul(c, t));
                }
            }
        }
        out
    }

    fn mul_monomials(
        &self,
        x: PbwMonomial,
        y: PbwMonomial,
        scale: FieldElem,
        acc: &mut BTreeMap<PbwMonomial, FieldElem>,
    ) {
        let fl = self.field();
        let chi = self.setting().chi;
        let (i1, k1, j1) = (x.i as usize, x.k as usize, x.j as usize);
        let (i2, k2, j2) = (y.i as usize, y.k as usize, y.j as usize);
        for t in 0..=j1.min(i2) {
            let (fi, ej) = (i2 - t, j1 - t);
            let Some((i_new, cf)) = self.merge(i1, fi, chi.c_f()) else { continue };
            let Some((j_new, ce)) = self.merge(ej, j2, chi.c_e()) else { continue };
            let mid = self.shifted(2 * t as i64 - j1 as i64 - i2 as i64, t);
            let left = self.shifted(-2 * fi as i64, k1);
            let right = self.shifted(-2 * ej as i64, k2);
            let torus = self.toral_mul(&self.toral_mul(&left, &mid), &right);
            let c = fl.mul(scale, fl.mul(cf, ce));
            for (m, &v) in torus.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let key = PbwMonomial { i: i_new as u32, k: m as u32, j: j_new as u32 };
                let e = acc.entry(key).or_insert(FieldElem::ZERO);
                *e = fl.add(*e, fl.mul(c, v));
            }
        }
    }
}

impl AlgebraElement {
    pub fn algebra(&self) -> &Uea {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (PbwMonomial, FieldElem)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coeff(&self, i: usize, k: usize, j: usize) -> FieldElem {
        let key = PbwMonomial { i: i as u32, k: k as u32, j: j as u32 };
        self.terms.get(&key).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &AlgebraElement) -> Result<(), RepError> {
        if self.alg == other.alg {
            Ok(())
        } else {
            Err(RepError::ContextMismatch)
        }
    }

    fn normalized(mut self) -> AlgebraElement {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn scale(&self, c: FieldElem) -> AlgebraElement {
        let fl = self.alg.field();
        let terms = self.terms.iter().map(|(&m, &x)| (m, fl.mul(c, x))).collect();
        AlgebraElement { alg: self.alg.clone(), terms }.normalized()
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, RepError> {
        self.check(other)?;
        let fl = self.alg.field();
        let mut terms = self.terms.clone();
        for (&m, &c) in &other.terms {
            let e = terms.entry(m).or_insert(FieldElem::ZERO);
            *e = fl.add(*e, c);
        }
        Ok(AlgebraElement { alg: self.alg.clone(), terms }.normalized())
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement, RepError> {
        self.add(&other.scale(self.alg.field().neg(FieldElem::ONE)))
    }

    /// The product in normal form.
    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement, RepError> {
        self.check(other)?;
        let fl = self.alg.field();
        let mut acc = BTreeMap::new();
        for (&x, &cx) in &self.terms {
            for (&y, &cy) in &other.terms {
                self.alg.mul_monomials(x, y, fl.mul(cx, cy), &mut acc);
            }
        }
        Ok(AlgebraElement { alg: self.alg.clone(), terms: acc }.normalized())
    }

    pub fn pow(&self, e: u32) -> Result<AlgebraElement, RepError> {
        (0..e).try_fold(self.alg.one(), |acc, _| acc.mul(self))
    }

    /// The matrix by which this element acts on `rep`.
    pub fn act_on_module(&self, rep: &ModuleRep) -> Result<Matrix, RepError> {
        let s = self.alg.setting();
        if rep.p() != s.p || rep.levels() != s.r + 1 || rep.chi != s.chi {
            return Err(RepError::ContextMismatch);
        }
        rep.field.ensure_same(&s.field)?;
        let fl = &rep.field;
        let dp = rep.divided_powers();
        let mut out = Matrix::zeros(rep.dim(), rep.dim());
        for (&m, &c) in &self.terms {
            let term = dp.f[m.i as usize].mul(fl, &dp.h[m.k as usize]).mul(fl, &dp.e[m.j as usize]);
            out.add_scaled(fl, c, &term);
        }
        Ok(out)
    }

    /// `[{i, k, j, coeff}]` in monomial order.
    pub fn to_json(&self) -> Value {
        let fl = self.alg.field();
        Value::Array(
            self.terms
                .iter()
                .map(|(m, &c)| json!({ "i": m.i, "k": m.k, "j": m.j, "coeff": fl.coeffs(c) }))
                .collect(),
        )
    }
}

/// Level structure constants: `binom(x, a)·binom(x, b)` in
/// `F_p[x]/(x^p - x - c)`, written in the basis `binom(x, m)`, `m < p`.
pub fn level_products(p: u32, c: u32) -> Vec<Vec<Vec<u32>>> {
    let pu = p as usize;
    // binom(x, a) in the monomial basis
    let binom_poly: Vec<Vec<u32>> = (0..pu)
        .map(|a| {
            let mut poly = vec![1u32];
            for i in 0..a {
                // multiply by (x - i)
                let mut next = vec![0u32; poly.len() + 1];
                for (d, &co) in poly.iter().enumerate() {
                    next[d + 1] = (next[d + 1] + co) % p;
                    next[d] = (next[d] + p - modp::mul_mod(co, i as u32 % p, p)) % p;
                }
                poly = next;
            }
            let inv = modp::inv_mod(modp::small_factorial(a as u32, p), p);
            poly.iter().map(|&x| modp::mul_mod(x, inv, p)).collect()
        })
        .collect();
    let mut out = vec![vec![vec![0u32; pu]; pu]; pu];
    for a in 0..pu {
        for b in 0..pu {
            let mut prod = vec![0u32; 2 * pu];
            for (i, &x) in binom_poly[a].iter().enumerate() {
                for (j, &y) in binom_poly[b].iter().enumerate() {
                    prod[i + j] = (prod[i + j] + modp::mul_mod(x, y, p)) % p;
                }
            }
            // x^d = x^{d-p}·(x + c) for d ≥ p
            for d in (pu..prod.len()).rev() {
                let co = prod[d];
                if co == 0 {
                    continue;
                }
                prod[d] = 0;
                prod[d - pu + 1] = (prod[d - pu + 1] + co) % p;
                prod[d - pu] = (prod[d - pu] + modp::mul_mod(co, c, p)) % p;
            }
            // back to the binomial basis, top degree first
            for m in (0..pu).rev() {
                let lead = prod[m];
                if lead == 0 {
                    continue;
                }
                let beta = modp::mul_mod(lead, modp::small_factorial(m as u32, p), p);
                out[a][b][m] = beta;
                for (d, &x) in binom_poly[m].iter().enumerate() {
                    prod[d] = (prod[d] + p - modp::mul_mod(beta, x, p)) % p;
                }
            }
        }
    }
    out
}

fn toral_table(s: &Setting) -> Vec<Vec<(u32, FieldElem)>> {
    let p = s.p;
    let n = s.n();
    let fl = &s.field;
    let top_c = fl.as_prime(fl.frobenius(s.chi.c_h())).expect("character values lie in F_p");
    let plain = level_products(p, 0);
    let shifted = level_products(p, top_c);
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        let da = s.digits(a);
        for b in 0..n {
            let db = s.digits(b);
            // tensor the per-level expansions
            let mut terms: Vec<(usize, u32)> = vec![(0, 1 % p)];
            for u in 0..=s.r {
                let consts = if u == s.r { &shifted } else { &plain };
                let row = &consts[da[u] as usize][db[u] as usize];
                let pu = s.pp(u);
                let mut next = Vec::new();
                for &(idx, c) in &terms {
                    for (m, &v) in row.iter().enumerate() {
                        if v != 0 {
                            next.push((idx + m * pu, modp::mul_mod(c, v, p)));
                        }
                    }
                }
                terms = next;
            }
            if a + b < n {
                check_against_distribution_rule(s, a, b, &terms);
            }
            table.push(terms.into_iter().map(|(m, c)| (m as u32, fl.from_int(c as i64))).collect());
        }
    }
    table
}

/// Below the filtration bound the toral product is the distribution-algebra
/// product `δ_a δ_b = Σ_i (a+b-i)!/((a-i)!(b-i)!i!) δ_{a+b-i}`.
fn check_against_distribution_rule(s: &Setting, a: usize, b: usize, terms: &[(usize, u32)]) {
    let p = s.p;
    let mut expected = BTreeMap::new();
    for i in 0..=a.min(b) {
        let c = modp::multinomial_mod_p(&[(a - i) as u64, (b - i) as u64, i as u64], p);
        if c != 0 {
            expected.insert(a + b - i, c);
        }
    }
    let got: BTreeMap<usize, u32> = terms.iter().copied().filter(|&(_, c)| c != 0).collect();
    assert_eq!(got, expected, "toral product binom(h,{a})·binom(h,{b}) disagrees with the distribution rule");
}

/// Integer coefficients of `δ_a δ_b` at indices `≥ p^{r+1}`; all vanish mod p.
pub fn out_of_range_distribution_terms(s: &Setting, a: usize, b: usize) -> Vec<(usize, u32)> {
    (0..=a.min(b))
        .filter(|&i| a + b - i >= s.n())
        .map(|i| (a + b - i, modp::multinomial_mod_p(&[(a - i) as u64, (b - i) as u64, i as u64], s.p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{ChiForm, ChiKind};
    use proptest::prelude::*;

    fn uea(kind: ChiKind, p: u32, r: usize) -> Uea {
        Uea::new(&Setting::new(p, r, ChiForm::standard(kind, p, Some(1)).unwrap()).unwrap())
    }

    #[test]
    fn generator_embeddings() {
        let u = uea(ChiKind::Zero, 3, 1);
        assert_eq!(u.generator(GenKind::F, 0).unwrap(), u.monomial(1, 0, 0).unwrap());
        assert_eq!(u.generator(GenKind::H, 1).unwrap(), u.monomial(0, 3, 0).unwrap());
        assert_eq!(u.generator(GenKind::E, 1).unwrap(), u.monomial(0, 0, 3).unwrap());
        assert!(u.generator(GenKind::E, 2).is_err());
        assert_eq!(u.dim(), 729);
    }

    #[test]
    fn divided_powers_merge() {
        let u = uea(ChiKind::Zero, 3, 1);
        let fl = u.field().clone();
        let one = u.one();
        let x = u.monomial(2, 4, 1).unwrap();
        assert_eq!(one.mul(&x).unwrap(), x);
        assert_eq!(x.mul(&one).unwrap(), x);
        // f^(1) f^(3) = binom(4, 1) f^(4)
        let prod = u.monomial(1, 0, 0).unwrap().mul(&u.monomial(3, 0, 0).unwrap()).unwrap();
        assert_eq!(prod, u.monomial(4, 0, 0).unwrap().scale(fl.from_int(4)));
        // carry at level 0 kills the term
        assert!(u.monomial(2, 0, 0).unwrap().mul(&u.monomial(1, 0, 0).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn central_elements_reduce_to_scalars() {
        for p in [3u32, 5] {
            for r in 0..2 {
                for kind in [ChiKind::Zero, ChiKind::Nilpotent, ChiKind::Semisimple] {
                    let u = uea(kind, p, r);
                    let fl = u.field().clone();
                    let chi = u.setting().chi;
                    let f_top = u.generator(GenKind::F, r).unwrap().pow(p).unwrap();
                    assert_eq!(f_top, u.one().scale(fl.frobenius(chi.c_f())));
                    let e_top = u.generator(GenKind::E, r).unwrap().pow(p).unwrap();
                    assert!(e_top.is_zero());
                    let h = u.generator(GenKind::H, r).unwrap();
                    let z = h.pow(p).unwrap().sub(&h).unwrap();
                    assert_eq!(z, u.one().scale(fl.frobenius(chi.c_h())));
                    for lower in 0..r {
                        for kind in [GenKind::E, GenKind::F] {
                            assert!(u.generator(kind, lower).unwrap().pow(p).unwrap().is_zero());
                        }
                        let h = u.generator(GenKind::H, lower).unwrap();
                        assert_eq!(h.pow(p).unwrap(), h);
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_of_e_and_f_is_h() {
        let u = uea(ChiKind::Nilpotent, 3, 1);
        let e = u.generator(GenKind::E, 0).unwrap();
        let f = u.generator(GenKind::F, 0).unwrap();
        let h = u.generator(GenKind::H, 0).unwrap();
        assert_eq!(e.mul(&f).unwrap().sub(&f.mul(&e).unwrap()).unwrap(), h);
    }

    #[test]
    fn out_of_range_distribution_coefficients_vanish() {
        for r in 0..3 {
            let s = Setting::new(3, r, ChiForm::standard(ChiKind::Zero, 3, None).unwrap()).unwrap();
            for a in 0..s.n() {
                for b in 0..s.n() {
                    assert!(out_of_range_distribution_terms(&s, a, b).iter().all(|&(_, c)| c == 0));
                }
            }
        }
    }

    #[test]
    fn level_products_examples() {
        // x·x = 2 binom(x,2) + x
        let t = level_products(3, 0);
        assert_eq!(t[1][1], vec![0, 1, 2]);
        // binom(x,2)·x with x^3 = x + 1: (x^3 - x^2)/2 = (x + 1 - x^2)/2
        let t = level_products(3, 1);
        let (p, half) = (3, modp::inv_mod(2, 3));
        // -x^2/2 + x/2 + 1/2 = -binom(x,2) + 0·x + 1/2
        assert_eq!(t[2][1], vec![half, 0, p - 1]);
    }

    fn arb_monomial(n: u32) -> impl Strategy<Value = (u32, u32, u32)> {
        (0..n, 0..n, 0..n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn associativity(x in arb_monomial(9), y in arb_monomial(9), z in arb_monomial(9),
                         kind in prop::sample::select(vec![ChiKind::Zero, ChiKind::Nilpotent, ChiKind::Semisimple])) {
            let u = uea(kind, 3, 1);
            let m = |(i, k, j): (u32, u32, u32)| u.monomial(i as usize, k as usize, j as usize).unwrap();
            let (x, y, z) = (m(x), m(y), m(z));
            let left = x.mul(&y).unwrap().mul(&z).unwrap();
            let right = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
