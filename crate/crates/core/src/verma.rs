//! Baby Verma modules from closed-form action formulas, the same modules
//! induced through the straightening engine, and teenage Verma modules.

use crate::field::FieldElem;
use crate::linalg::{Matrix, Subspace};
use crate::pbw::Uea;
use crate::rep::{GenKind, ModuleRep, RepError};
use crate::weights::{ChiForm, ChiKind, Setting, Weight};

fn check_weight(setting: &Setting, weight: &Weight) -> Result<(), RepError> {
    setting.field.ensure_same(weight.field())?;
    if weight.r() != setting.r {
        return Err(RepError::Shape(format!("weight has {} levels, expected {}", weight.r() + 1, setting.r + 1)));
    }
    // re-validates the top coordinate against this character
    Weight::new(setting, weight.lower().to_vec(), weight.top())?;
    Ok(())
}

/// Coefficient `c` in `e^(l) v_k = c·v_{k-l}`, zero when `l > k`.
pub fn e_action_coeff(weight: &Weight, l: usize, k: usize) -> FieldElem {
    if l > k {
        return FieldElem::ZERO;
    }
    weight.lambda_binom_shifted(l as i64 - k as i64, l).expect("index in range")
}

/// The baby Verma module `Z_χ^r(λ)` in the basis `v_k = f^(k)⊗m_0`.
pub fn baby_verma(setting: &Setting, weight: &Weight) -> Result<ModuleRep, RepError> {
    check_weight(setting, weight)?;
    let fl = &setting.field;
    let n = setting.n();
    let p = setting.p;
    // 1/(p-1)! = -1 by Wilson
    let wrap = fl.mul(fl.neg(fl.one()), fl.frobenius(setting.chi.c_f()));
    let (mut es, mut hs, mut fs) = (Vec::new(), Vec::new(), Vec::new());
    for j in 0..=setting.r {
        let q = setting.pp(j);
        let mut e = Matrix::zeros(n, n);
        let mut h = Matrix::zeros(n, n);
        let mut f = Matrix::zeros(n, n);
        for k in 0..n {
            if k >= q {
                e.set(k - q, k, e_action_coeff(weight, q, k));
            }
            h.set(k, k, weight.lambda_binom_shifted(-2 * k as i64, q)?);
            if k + q < n {
                let c = crate::modp::binom_mod_p((k + q) as i64, q as u64, p);
                f.set(k + q, k, fl.from_int(c as i64));
            } else if j == setting.r {
                f.set(k + q - n, k, wrap);
            }
        }
        es.push(e);
        hs.push(h);
        fs.push(f);
    }
    Ok(ModuleRep::new(fl.clone(), setting.chi, n, es, hs, fs)?.with_labels((0..n).collect()))
}

/// `Z_χ^r(λ)` induced from `K_λ` by straightening `g·f^(k)` in the algebra.
pub fn induced_verma(uea: &Uea, weight: &Weight) -> Result<ModuleRep, RepError> {
    let setting = uea.setting();
    check_weight(setting, weight)?;
    let fl = &setting.field;
    let n = setting.n();
    let mut mats = [Vec::new(), Vec::new(), Vec::new()];
    for j in 0..=setting.r {
        for (slot, kind) in GenKind::ALL.into_iter().enumerate() {
            let g = uea.generator(kind, j)?;
            let mut m = Matrix::zeros(n, n);
            for k in 0..n {
                let prod = g.mul(&uea.monomial(k, 0, 0)?)?;
                for (mono, c) in prod.terms() {
                    // e kills m_0; binom(h, q) scales it by λ(binom(h, q))
                    if mono.j != 0 {
                        continue;
                    }
                    let i = mono.i as usize;
                    let v = fl.mul(c, weight.lambda_binom(mono.k as usize)?);
                    m.set(i, k, fl.add(m.get(i, k), v));
                }
            }
            mats[slot].push(m);
        }
    }
    let [e, h, f] = mats;
    Ok(ModuleRep::new(fl.clone(), setting.chi, n, e, h, f)?.with_labels((0..n).collect()))
}

/// `U_χ^[r] ⊗_Û N` for an irreducible `Di(G_(r))`-module `N` (given with
/// diagonal `H_j`) and a top weight coordinate `λ_r`.
///
/// `Û` is spanned by `f^(i) binom(h, k) e^(j)` with `i < p^r`; it acts on
/// `N` through its generators, with `e^(p^r)` acting as zero and
/// `binom(h, p^r)` acting on each weight vector by the scalar it takes on
/// the matching vector of the baby Verma module. The basis is
/// `f^(a·p^r) ⊗ n_i`, ordered by `a` and then by `i`.
pub fn teenage_verma(setting: &Setting, n_rep: &ModuleRep, top: FieldElem) -> Result<ModuleRep, RepError> {
    let fl = &setting.field;
    let (p, r) = (setting.p, setting.r);
    let bad = |m: String| RepError::InvalidExtension(m);
    if n_rep.p() != p || n_rep.levels() != r || !n_rep.chi.is_zero() {
        return Err(bad(format!("expected a zero-character module with {r} levels over p = {p}")));
    }
    if n_rep.field != *fl && n_rep.field.degree() != 1 {
        return Err(RepError::ContextMismatch);
    }
    let tuples = n_rep.h_tuples().ok_or_else(|| bad("H is not diagonal".into()))?;
    let dn = n_rep.dim();

    // highest weight vector: joint kernel of the E_j
    let mut stacked = Subspace::new(dn);
    for j in 0..r {
        let e = n_rep.gen(GenKind::E, j);
        for i in 0..dn {
            stacked.insert(fl, e.row(i).to_vec());
        }
    }
    let kernel = stacked.complement_kernel(fl);
    let hw = match kernel.as_slice() {
        [v] if v.iter().filter(|x| !x.is_zero()).count() == 1 => v.iter().position(|x| !x.is_zero()).unwrap(),
        _ => return Err(bad("no unique highest weight vector".into())),
    };
    let lower = tuples[hw]
        .iter()
        .map(|&x| fl.as_prime(x).ok_or_else(|| bad("highest weight outside F_p".into())))
        .collect::<Result<Vec<u32>, _>>()?;
    let weight = Weight::new(setting, lower, top).map_err(|e| bad(e.to_string()))?;

    // match each basis vector with the Verma index carrying its H-weight
    let pr = setting.pp(r);
    let index_of: Vec<usize> = tuples
        .iter()
        .map(|tuple| {
            let hits: Vec<usize> = (0..pr)
                .filter(|&i| {
                    (0..r).all(|u| weight.lambda_binom_shifted(-2 * i as i64, setting.pp(u)).unwrap() == tuple[u])
                })
                .collect();
            match hits.as_slice() {
                [i] => Ok(*i),
                _ => Err(bad("H-weights of N do not determine Verma indices".into())),
            }
        })
        .collect::<Result<_, _>>()?;
    let top_scalar: Vec<FieldElem> = index_of
        .iter()
        .map(|&i| weight.lambda_binom_shifted(-2 * i as i64, pr).unwrap())
        .collect();

    let dp = n_rep.divided_powers();
    // binom(binom(h, p^r), a) on N, a < p
    let top_binoms: Vec<Matrix> = (0..p as u64)
        .map(|a| Matrix::diagonal(&top_scalar.iter().map(|&s| fl.binom(s, a).unwrap()).collect::<Vec<_>>()))
        .collect();
    let uea = Uea::new(setting);
    let dim = p as usize * dn;
    let mut mats = [Vec::new(), Vec::new(), Vec::new()];
    for j in 0..=r {
        for (slot, kind) in GenKind::ALL.into_iter().enumerate() {
            let g = uea.generator(kind, j)?;
            let mut m = Matrix::zeros(dim, dim);
            for a in 0..p as usize {
                let prod = g.mul(&uea.monomial(a * pr, 0, 0)?)?;
                for (mono, c) in prod.terms() {
                    let (i, k, jj) = (mono.i as usize, mono.k as usize, mono.j as usize);
                    if jj >= pr {
                        continue;
                    }
                    let block = dp.f[i % pr]
                        .mul(fl, &dp.h[k % pr])
                        .mul(fl, &top_binoms[k / pr])
                        .mul(fl, &dp.e[jj]);
                    let row0 = (i / pr) * dn;
                    for x in 0..dn {
                        for y in 0..dn {
                            let v = block.get(x, y);
                            if !v.is_zero() {
                                let (rr, cc) = (row0 + x, a * dn + y);
                                m.set(rr, cc, fl.add(m.get(rr, cc), fl.mul(c, v)));
                            }
                        }
                    }
                }
            }
            mats[slot].push(m);
        }
    }
    let [e, h, f] = mats;
    let labels = (0..p as usize).flat_map(|a| index_of.iter().map(move |&i| a * pr + i)).collect();
    Ok(ModuleRep::new(fl.clone(), setting.chi, dim, e, h, f)?.with_labels(labels))
}

/// The zero character at characteristic `p`.
pub fn zero_chi(p: u32) -> ChiForm {
    ChiForm::standard(ChiKind::Zero, p, None).expect("odd prime")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp;
    use crate::rep::verify_relations;

    fn setting(kind: ChiKind, p: u32, r: usize) -> Setting {
        Setting::new(p, r, ChiForm::standard(kind, p, Some(1)).unwrap()).unwrap()
    }

    #[test]
    fn classical_restricted_verma() {
        // p = 3, r = 0, λ = 2: e v_1 = λ v_0, h v_0 = λ v_0, h v_k = (λ - 2k) v_k
        let s = setting(ChiKind::Zero, 3, 0);
        let w = Weight::parse(&s, "2").unwrap();
        let z = baby_verma(&s, &w).unwrap();
        let fl = &s.field;
        let e = z.gen(GenKind::E, 0);
        let h = z.gen(GenKind::H, 0);
        let f = z.gen(GenKind::F, 0);
        assert_eq!(e.get(0, 1), fl.from_int(2));
        assert_eq!(h.get(0, 0), fl.from_int(2));
        for k in 0..3 {
            assert_eq!(h.get(k, k), fl.from_int(2 - 2 * k as i64));
        }
        // classical sl2 oracle: e f^k m = k(λ - k + 1) f^{k-1} m in the f^k basis;
        // in the divided basis v_k = f^k/k! this is e v_k = (λ - k + 1) v_{k-1}
        for k in 1..3 {
            assert_eq!(e.get(k - 1, k), fl.from_int(2 - k as i64 + 1));
            assert_eq!(f.get(k, k - 1), fl.from_int(k as i64));
        }
        assert!(f.column(2).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn wrap_coefficient_for_nilpotent_character() {
        let s = setting(ChiKind::Nilpotent, 3, 1);
        for w in s.weights().unwrap() {
            let z = baby_verma(&s, &w).unwrap();
            // f^(3) v_6 = 2 v_0
            assert_eq!(z.gen(GenKind::F, 1).get(0, 6), s.field.from_int(2));
        }
    }

    #[test]
    fn e_divided_power_on_v_t() {
        for kind in [ChiKind::Zero, ChiKind::Nilpotent, ChiKind::Semisimple] {
            let s = setting(kind, 3, 1);
            for w in s.weights().unwrap() {
                let z = baby_verma(&s, &w).unwrap();
                let dp = z.divided_powers();
                for t in 0..9 {
                    assert_eq!(dp.e[t].get(0, t), w.lambda_binom(t).unwrap());
                    for k in 0..9 {
                        let expected = e_action_coeff(&w, t, k);
                        if t <= k {
                            assert_eq!(dp.e[t].get(k - t, k), expected);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn f_action_matches_digit_merge() {
        for kind in [ChiKind::Zero, ChiKind::Nilpotent] {
            let s = setting(kind, 3, 1);
            let w = &s.weights().unwrap()[0];
            let z = baby_verma(&s, w).unwrap();
            let dp = z.divided_powers();
            let fl = &s.field;
            let chi_f = fl.frobenius(s.chi.c_f());
            for l in 0..9usize {
                for k in 0..9usize {
                    let (dl, dk) = (s.digits(l), s.digits(k));
                    let col = dp.f[l].column(k);
                    if dl[0] + dk[0] >= 3 {
                        assert!(col.iter().all(|x| x.is_zero()));
                    } else if dl[1] + dk[1] < 3 {
                        let c = modp::binom_mod_p((k + l) as i64, l as u64, 3);
                        assert_eq!(col[k + l], fl.from_int(c as i64));
                    } else {
                        let sft = dl[1] + dk[1] - 3;
                        let ratio = modp::mul_mod(
                            modp::small_factorial(sft, 3),
                            modp::inv_mod(modp::small_factorial(dl[1], 3) * modp::small_factorial(dk[1], 3) % 3, 3),
                            3,
                        );
                        let low = modp::binom_mod_p((dl[0] + dk[0]) as i64, dl[0] as u64, 3);
                        let expected = fl.mul(chi_f, fl.from_int(modp::mul_mod(ratio, low, 3) as i64));
                        assert_eq!(col[k + l - 9], expected);
                    }
                }
            }
        }
    }

    #[test]
    fn corrupted_entry_is_detected() {
        let s = setting(ChiKind::Nilpotent, 3, 1);
        let w = &s.weights().unwrap()[4];
        let mut z = baby_verma(&s, w).unwrap();
        assert!(verify_relations(&z).is_ok());
        let m = z.gen_mut(GenKind::E, 0);
        let v = m.get(0, 1);
        m.set(0, 1, s.field.add(v, s.field.one()));
        assert!(!verify_relations(&z).is_ok());
    }
}
