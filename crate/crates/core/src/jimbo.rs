//! Jimbo images of the Gauss generators of `SL_q(n)` and two variants.
//!
//! The ambient algebra has `2(n-1)` slots. Slots `0..n-1` carry the lowering
//! generators `X_l^-` (the `T^-` half), slots `n-1..2(n-1)` carry the raising
//! generators `X_l^+` (the `T^+` half). Every slot holds the full torus
//! `K_1..K_{n-1}`; `K_n` is the inverse product of the others.
//!
//! Matrix indices are zero-based in code and one-based in displayed names
//! (`f1`, `X1+`, `K1`).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Rational64;
use serde::Serialize;

use crate::cartan::ChevalleyData;
use crate::error::{Error, Result};
use crate::opmatrix::OpMatrix;
use crate::ring::{LaurentPoly, VarSet};
use crate::slotalg::{AlgebraElement, Signature, Slot, SlotGen};

/// Values substituted for formal ring variables. `lambda` is always applied
/// last so that bindings such as `f1 = q^-1*lambda` resolve fully.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bindings {
    values: BTreeMap<String, LaurentPoly>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, value: LaurentPoly) -> Result<()> {
        value.vars().require(name)?;
        self.values.insert(name.to_string(), value);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&LaurentPoly> {
        self.values.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &LaurentPoly)> {
        self.values.iter()
    }

    /// Printable form, one entry per bound variable.
    pub fn to_strings(&self) -> BTreeMap<String, String> {
        self.values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
    }

    pub fn apply(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = p.clone();
        for (name, value) in self.values.iter().filter(|(k, _)| k.as_str() != LAMBDA) {
            out = out.bind(name, value)?;
        }
        if let Some(l) = self.values.get(LAMBDA) {
            out = out.bind(LAMBDA, l)?;
        }
        Ok(out)
    }

    pub fn apply_element(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if self.is_empty() {
            return Ok(x.clone());
        }
        x.map_coeffs(|c| self.apply(c))
    }

    pub fn apply_matrix(&self, t: &OpMatrix) -> Result<OpMatrix> {
        t.try_map(|x| self.apply_element(x))
    }
}

impl Serialize for Bindings {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

pub const LAMBDA: &str = "lambda";

/// `T^+` (upper triangular, raising slots) and `T^-` (lower triangular,
/// lowering slots) together with the bindings applied to their coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaussTriple {
    pub n: usize,
    pub t_plus: OpMatrix,
    pub t_minus: OpMatrix,
    pub bindings: Bindings,
}

impl GaussTriple {
    pub fn signature(&self) -> &Arc<Signature> {
        self.t_plus.get(0, 0).signature()
    }

    /// Substitutes `bindings` into every coefficient.
    pub fn bind(&self, bindings: &Bindings) -> Result<Self> {
        let mut merged = self.bindings.clone();
        for (k, v) in bindings.iter() {
            merged.insert(k, v.clone())?;
        }
        Ok(GaussTriple {
            n: self.n,
            t_plus: bindings.apply_matrix(&self.t_plus)?,
            t_minus: bindings.apply_matrix(&self.t_minus)?,
            bindings: merged,
        })
    }
}

/// `T = T^- T^+` with the two factors on disjoint slots.
pub fn assemble_t(triple: &GaussTriple) -> Result<OpMatrix> {
    OpMatrix::gauss_product(&triple.t_minus, &triple.t_plus)
}

/// Which half of the ambient algebra a slot or matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    Minus,
    Plus,
}

/// The ambient algebra for `SL_q(n)` together with its Chevalley data.
#[derive(Debug, Clone)]
pub struct SlAlgebra {
    data: ChevalleyData,
    sig: Arc<Signature>,
}

impl SlAlgebra {
    pub fn new(n: usize) -> Result<Self> {
        let data = ChevalleyData::new(n)?;
        let r = n - 1;
        let mut names = vec!["q".to_string(), "v".to_string(), LAMBDA.to_string()];
        names.extend((1..=r).map(|i| format!("f{i}")));
        names.extend((1..=r).map(|i| format!("g{i}")));
        let vars = VarSet::new(names)?;
        let qi = vars.require("q")?;
        let gen = |j: usize, positive: bool| {
            let weights = (0..r)
                .map(|m| {
                    let mut e = vec![0; vars.len()];
                    e[qi] = data.ad_exponent(m, j, positive);
                    e
                })
                .collect();
            let sign = if positive { 1 } else { -1 };
            SlotGen {
                name: format!("X{}{}", j + 1, if positive { '+' } else { '-' }),
                weights,
                cartan_shift: (0..r).map(|k| sign * data.cartan[k][j]).collect(),
            }
        };
        let mut slots: Vec<Slot> = (0..r)
            .map(|j| Slot {
                name: format!("U{}-", j + 1),
                gens: vec![gen(j, false)],
            })
            .collect();
        slots.extend((0..r).map(|j| Slot {
            name: format!("U{}+", j + 1),
            gens: vec![gen(j, true)],
        }));
        let torus = (1..=r).map(|m| format!("K{m}")).collect();
        let log: Vec<Vec<Rational64>> = data.htilde[..r].to_vec();
        let sig = Signature::new(format!("sl_q({n})"), vars, torus, slots, Some(log))?;
        Ok(SlAlgebra { data, sig })
    }

    pub fn n(&self) -> usize {
        self.data.n
    }

    pub fn data(&self) -> &ChevalleyData {
        &self.data
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.sig.vars()
    }

    pub fn slot(&self, half: Half, l: usize) -> usize {
        match half {
            Half::Minus => l,
            Half::Plus => self.n() - 1 + l,
        }
    }

    /// Half and simple-root index of the generator held by `slot`.
    pub fn slot_generator(&self, slot: usize) -> (Half, usize) {
        let r = self.n() - 1;
        if slot < r {
            (Half::Minus, slot)
        } else {
            (Half::Plus, slot - r)
        }
    }

    /// Exponents of `K_m^{sign}` over the torus basis `K_1..K_{n-1}`.
    pub fn torus_exponents(&self, m: usize, sign: i32) -> Vec<i32> {
        let r = self.n() - 1;
        if m < r {
            (0..r).map(|k| if k == m { sign } else { 0 }).collect()
        } else {
            vec![-sign; r]
        }
    }

    pub fn q(&self) -> LaurentPoly {
        LaurentPoly::var(self.vars(), "q").expect("q is a ring variable")
    }

    /// The default value of `lambda`: `q - q^-1`.
    pub fn lambda_default(&self) -> LaurentPoly {
        let qi = LaurentPoly::var_pow(self.vars(), "q", -1).expect("q is a ring variable");
        &self.q() - &qi
    }

    pub fn f(&self, i: usize) -> LaurentPoly {
        LaurentPoly::var(self.vars(), &format!("f{}", i + 1)).expect("f_i is a ring variable")
    }

    pub fn g(&self, i: usize) -> LaurentPoly {
        LaurentPoly::var(self.vars(), &format!("g{}", i + 1)).expect("g_i is a ring variable")
    }

    /// Element with generators `X_l` in slots `i..=k` of `half`, `K_i^{±1}`
    /// in the slots before and `K_{k+1}^{±1}` in the slots after. With
    /// `k + 1 == i` this is the torus element `K_i^{±1}` in every slot.
    fn string_element(&self, half: Half, i: usize, k_plus_one: usize, coeff: LaurentPoly) -> AlgebraElement {
        let sign = if half == Half::Plus { 1 } else { -1 };
        let mut w = self.sig.empty_word();
        for l in 0..self.n() - 1 {
            let s = self.slot(half, l);
            if l < i {
                self.sig.set_torus(&mut w, s, &self.torus_exponents(i, sign));
            } else if l < k_plus_one {
                self.sig.set_gen(&mut w, s, 0, 1);
            } else {
                self.sig.set_torus(&mut w, s, &self.torus_exponents(k_plus_one, sign));
            }
        }
        AlgebraElement::term(&self.sig, coeff, w).expect("well-formed word")
    }

    pub fn diagonal(&self, half: Half, i: usize) -> AlgebraElement {
        self.string_element(half, i, i, LaurentPoly::one(self.vars()))
    }

    /// Closed form of `t^+_{i,j}` (`i < j`) or `t^-_{j,i}`.
    pub fn closed_entry(&self, half: Half, i: usize, j: usize) -> AlgebraElement {
        let coeff = (i..j).fold(LaurentPoly::one(self.vars()), |acc, l| {
            let c = match half {
                Half::Plus => self.f(l),
                Half::Minus => self.g(l),
            };
            &acc * &c
        });
        self.string_element(half, i, j, coeff)
    }

    fn triple_from<F>(&self, mut entry: F) -> Result<GaussTriple>
    where
        F: FnMut(Half, usize, usize) -> Option<AlgebraElement>,
    {
        let n = self.n();
        let zero = AlgebraElement::zero(&self.sig);
        let t_plus = OpMatrix::from_fn(n, n, |i, j| {
            if i > j {
                return zero.clone();
            }
            entry(Half::Plus, i, j).unwrap_or_else(|| zero.clone())
        })?;
        let t_minus = OpMatrix::from_fn(n, n, |i, j| {
            if i < j {
                return zero.clone();
            }
            entry(Half::Minus, j, i).unwrap_or_else(|| zero.clone())
        })?;
        Ok(GaussTriple {
            n,
            t_plus,
            t_minus,
            bindings: Bindings::new(),
        })
    }

    /// Diagonals and first off-diagonals only:
    /// `t_ii^± = K_i^{±1}` in every slot of the half,
    /// `t^+_{i,i+1} = f_i K_i ⊗..⊗ X_i^+ ⊗ K_{i+1} ⊗..`,
    /// `t^-_{i+1,i} = g_i K_i^-1 ⊗..⊗ X_i^- ⊗ K_{i+1}^-1 ⊗..`.
    pub fn delta_generators(&self) -> GaussTriple {
        self.triple_from(|half, i, j| match j - i {
            0 => Some(self.diagonal(half, i)),
            1 => Some(self.closed_entry(half, i, j)),
            _ => None,
        })
        .expect("consistent signature")
    }

    /// Every entry from the product formula.
    pub fn closed_form(&self) -> GaussTriple {
        self.triple_from(|half, i, j| {
            Some(if i == j {
                self.diagonal(half, i)
            } else {
                self.closed_entry(half, i, j)
            })
        })
        .expect("consistent signature")
    }

    /// Fills the upper triangle from the first off-diagonal by
    /// `t_{i,i+k} = lambda^{1-k} (prod_{l=1}^{k-1} t_{i+l,i+l})^{-1}
    ///   [t_{i,i+1}, [t_{i+1,i+2}, ..., t_{i+k-1,i+k}]]`
    /// and the lower triangle by the Cartan involution of the result.
    pub fn ladder_reconstruct(&self, partial: &GaussTriple, lambda: &LaurentPoly) -> Result<GaussTriple> {
        let n = self.n();
        let tp = &partial.t_plus;
        let mut upper: BTreeMap<(usize, usize), AlgebraElement> = BTreeMap::new();
        for i in 0..n {
            upper.insert((i, i), tp.get(i, i).clone());
            if i + 1 < n {
                upper.insert((i, i + 1), tp.get(i, i + 1).clone());
            }
        }
        for k in 2..n {
            if lambda.is_zero() {
                return Err(Error::ZeroLambda(k));
            }
            let divisor = lambda.pow(k as i64 - 1)?;
            for i in 0..n - k {
                let mut nested = tp.get(i + k - 1, i + k).clone();
                for m in (i..i + k - 1).rev() {
                    nested = tp.get(m, m + 1).commutator(&nested)?;
                }
                let mut prefactor = AlgebraElement::one(&self.sig);
                for l in 1..k {
                    prefactor = prefactor.checked_mul(&tp.get(i + l, i + l).invert()?)?;
                }
                let entry = prefactor.checked_mul(&nested)?.div_coeffs_exact(&divisor)?;
                upper.insert((i, i + k), entry);
            }
        }
        let mut lower = BTreeMap::new();
        for (&(i, j), x) in &upper {
            lower.insert((i, j), self.cartan_involution(x)?);
        }
        let triple = self.triple_from(|half, i, j| match half {
            Half::Plus => upper.get(&(i, j)).cloned(),
            Half::Minus => lower.get(&(i, j)).cloned(),
        })?;
        Ok(GaussTriple {
            bindings: partial.bindings.clone(),
            ..triple
        })
    }

    /// Moves raising slot `l` to lowering slot `l`, inverts torus factors and
    /// swaps `f_i` with `g_i`: maps `t^+_{ij}` to `t^-_{ji}`. It preserves the
    /// order of products because `K X^+ = q^c X^+ K` becomes
    /// `K^-1 X^- = q^c X^- K^-1`.
    pub fn cartan_involution(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        let r = self.n() - 1;
        let map: Vec<(usize, usize)> = (0..r)
            .map(|l| (self.slot(Half::Plus, l), self.slot(Half::Minus, l)))
            .collect();
        let moved = x.transport(&self.sig, &map, true)?;
        let fs: Vec<(String, LaurentPoly)> = (0..r)
            .flat_map(|i| [(format!("f{}", i + 1), self.g(i)), (format!("g{}", i + 1), self.f(i))])
            .collect();
        let subs: Vec<(&str, &LaurentPoly)> = fs.iter().map(|(k, v)| (k.as_str(), v)).collect();
        moved.map_coeffs(|c| c.substitute_many(&subs))
    }
}

/// A realization `T` together with its named factors.
#[derive(Debug, Clone, Serialize)]
pub struct Realization {
    pub group: String,
    pub signature: Arc<Signature>,
    pub factors: Vec<(String, OpMatrix)>,
    pub t: OpMatrix,
}

fn unit_weight(vars: &Arc<VarSet>, pairs: &[(&str, i32)]) -> Result<Vec<i32>> {
    let mut e = vec![0; vars.len()];
    for &(name, k) in pairs {
        e[vars.require(name)?] = k;
    }
    Ok(e)
}

fn negated(e: &[i32]) -> Vec<i32> {
    e.iter().map(|x| -x).collect()
}

fn single(
    sig: &Arc<Signature>,
    coeff: LaurentPoly,
    slot: usize,
    torus: &[i32],
    gens: &[(usize, u32)],
) -> AlgebraElement {
    let mut w = sig.empty_word();
    sig.set_torus(&mut w, slot, torus);
    for &(g, p) in gens {
        sig.set_gen(&mut w, slot, g, p);
    }
    AlgebraElement::term(sig, coeff, w).expect("well-formed word")
}

/// Two-parameter `GL_{p,q}(2)`: torus `P = (k/p)^{H/2}`, `Q = (k/q)^{H/2}`,
/// `T = [[P^-1, 0], [c_- X^-, Q]] (⊗) [[Q, c_+ X^+], [0, P^-1]]`.
pub fn build_glpq2() -> Result<Realization> {
    let vars = VarSet::new(["k", "p", "q", "v", "c_plus", "c_minus"])?;
    let wp = unit_weight(&vars, &[("k", 1), ("p", -1)])?;
    let wq = unit_weight(&vars, &[("k", 1), ("q", -1)])?;
    let slot = |name: &str, gen: &str, w: Vec<Vec<i32>>| Slot {
        name: name.into(),
        gens: vec![SlotGen {
            name: gen.into(),
            weights: w,
            cartan_shift: vec![],
        }],
    };
    let sig = Signature::new(
        "gl_pq(2)",
        vars.clone(),
        vec!["P".into(), "Q".into()],
        vec![
            slot("U-", "X-", vec![negated(&wp), negated(&wq)]),
            slot("U+", "X+", vec![wp, wq]),
        ],
        None,
    )?;
    let one = LaurentPoly::one(&vars);
    let zero = AlgebraElement::zero(&sig);
    let c_plus = LaurentPoly::var(&vars, "c_plus")?;
    let c_minus = LaurentPoly::var(&vars, "c_minus")?;
    let t_minus = OpMatrix::new(
        2,
        2,
        vec![
            single(&sig, one.clone(), 0, &[-1, 0], &[]),
            zero.clone(),
            single(&sig, c_minus, 0, &[0, 0], &[(0, 1)]),
            single(&sig, one.clone(), 0, &[0, 1], &[]),
        ],
    )?;
    let t_plus = OpMatrix::new(
        2,
        2,
        vec![
            single(&sig, one.clone(), 1, &[0, 1], &[]),
            single(&sig, c_plus, 1, &[0, 0], &[(0, 1)]),
            zero,
            single(&sig, one, 1, &[-1, 0], &[]),
        ],
    )?;
    let t = OpMatrix::gauss_product(&t_minus, &t_plus)?;
    Ok(Realization {
        group: "gl_pq_2".into(),
        signature: sig,
        factors: vec![("t_minus".into(), t_minus), ("t_plus".into(), t_plus)],
        t,
    })
}

/// Dual `sl*(2)`: one slot with commuting `X~+`, `X~-` and torus
/// `Kd = q^{H~}` acting by `q` on both;
/// `T = [[1, 0], [c_- X~-, 1]] diag(Kd, Kd^-1) [[1, c_+ X~+], [0, 1]]`.
pub fn build_dual_sl2() -> Result<Realization> {
    let vars = VarSet::new(["q", "v", "c_plus", "c_minus"])?;
    let w = unit_weight(&vars, &[("q", 1)])?;
    let gen = |name: &str| SlotGen {
        name: name.into(),
        weights: vec![w.clone()],
        cartan_shift: vec![1],
    };
    let sig = Signature::new(
        "dual_sl(2)",
        vars.clone(),
        vec!["Kd".into()],
        vec![Slot {
            name: "U*".into(),
            gens: vec![gen("Xd+"), gen("Xd-")],
        }],
        Some(vec![vec![Rational64::from_integer(1)]]),
    )?;
    let one = LaurentPoly::one(&vars);
    let zero = AlgebraElement::zero(&sig);
    let unit = AlgebraElement::one(&sig);
    let c_plus = LaurentPoly::var(&vars, "c_plus")?;
    let c_minus = LaurentPoly::var(&vars, "c_minus")?;
    let t_l = OpMatrix::new(
        2,
        2,
        vec![
            unit.clone(),
            zero.clone(),
            single(&sig, c_minus, 0, &[0], &[(1, 1)]),
            unit.clone(),
        ],
    )?;
    let t_d = OpMatrix::new(
        2,
        2,
        vec![
            single(&sig, one.clone(), 0, &[1], &[]),
            zero.clone(),
            zero.clone(),
            single(&sig, one, 0, &[-1], &[]),
        ],
    )?;
    let t_u = OpMatrix::new(
        2,
        2,
        vec![unit.clone(), single(&sig, c_plus, 0, &[0], &[(0, 1)]), zero, unit],
    )?;
    let t = t_l.matmul(&t_d)?.matmul(&t_u)?;
    Ok(Realization {
        group: "dual_sl2".into(),
        signature: sig,
        factors: vec![("t_l".into(), t_l), ("t_d".into(), t_d), ("t_u".into(), t_u)],
        t,
    })
}

/// `prod_i t_ii` of a triangular factor.
pub fn diagonal_product(t: &OpMatrix) -> Result<AlgebraElement> {
    let mut acc = AlgebraElement::one(t.get(0, 0).signature());
    for i in 0..t.rows() {
        acc = acc.checked_mul(t.get(i, i))?;
    }
    Ok(acc)
}

/// Integer constant in the ring of `vars`.
pub fn int(vars: &Arc<VarSet>, c: i64) -> LaurentPoly {
    LaurentPoly::constant(vars, BigInt::from(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opmatrix::rtt_residual;
    use crate::rmatrix::RMatrix;

    fn parse(sl: &SlAlgebra, s: &str) -> LaurentPoly {
        LaurentPoly::parse(sl.vars(), s).unwrap()
    }

    #[test]
    fn rank_two_generators() {
        let sl = SlAlgebra::new(2).unwrap();
        let d = sl.delta_generators();
        assert_eq!(d.t_plus.get(0, 0).to_string(), "[1 ⊗ K1]");
        assert_eq!(d.t_plus.get(0, 1).to_string(), "(f1)*[1 ⊗ X1+]");
        assert_eq!(d.t_plus.get(1, 1).to_string(), "[1 ⊗ K1^-1]");
        assert_eq!(d.t_minus.get(1, 0).to_string(), "(g1)*[X1- ⊗ 1]");
        assert_eq!(d.t_minus.get(0, 0).to_string(), "[K1^-1 ⊗ 1]");
        assert!(d.t_plus.get(1, 0).is_zero());
    }

    #[test]
    fn rank_three_second_generator() {
        let sl = SlAlgebra::new(3).unwrap();
        let d = sl.delta_generators();
        assert_eq!(d.t_plus.get(1, 2).to_string(), "(f2)*[1 ⊗ 1 ⊗ K2 ⊗ X2+]");
        assert_eq!(d.t_plus.get(0, 1).to_string(), "(f1)*[1 ⊗ 1 ⊗ X1+ ⊗ K2]");
        assert_eq!(d.t_plus.get(2, 2).to_string(), "[1 ⊗ 1 ⊗ K1^-1 K2^-1 ⊗ K1^-1 K2^-1]");
        assert!(d.t_plus.get(0, 2).is_zero());
    }

    #[test]
    fn assembled_rank_two_entries() {
        let sl = SlAlgebra::new(2).unwrap();
        let t = assemble_t(&sl.closed_form()).unwrap();
        assert_eq!(t.get(0, 0).to_string(), "[K1^-1 ⊗ K1]");
        assert_eq!(t.get(0, 1).to_string(), "(f1)*[K1^-1 ⊗ X1+]");
        assert_eq!(t.get(1, 0).to_string(), "(g1)*[X1- ⊗ K1]");
        assert_eq!(t.get(1, 1).to_string(), "(f1*g1)*[X1- ⊗ X1+] + [K1 ⊗ K1^-1]");
    }

    #[test]
    fn ladder_matches_closed_form() {
        for n in 2..=4 {
            let sl = SlAlgebra::new(n).unwrap();
            let ladder = sl
                .ladder_reconstruct(&sl.delta_generators(), &sl.lambda_default())
                .unwrap();
            assert_eq!(ladder, sl.closed_form(), "n = {n}");
        }
    }

    #[test]
    fn rank_three_corner_entries() {
        let sl = SlAlgebra::new(3).unwrap();
        let c = sl.closed_form();
        assert_eq!(c.t_plus.get(0, 2).to_string(), "(f1*f2)*[1 ⊗ 1 ⊗ X1+ ⊗ X2+]");
        assert_eq!(c.t_minus.get(2, 0).to_string(), "(g1*g2)*[X1- ⊗ X2- ⊗ 1 ⊗ 1]");
    }

    #[test]
    fn ladder_needs_nonzero_lambda() {
        let sl = SlAlgebra::new(3).unwrap();
        let zero = LaurentPoly::zero(sl.vars());
        assert!(matches!(
            sl.ladder_reconstruct(&sl.delta_generators(), &zero),
            Err(Error::ZeroLambda(2))
        ));
        let sl2 = SlAlgebra::new(2).unwrap();
        assert!(sl2.ladder_reconstruct(&sl2.delta_generators(), &zero).is_ok());
    }

    #[test]
    fn formal_lambda_leaves_a_quotient() {
        // Dividing by a formal lambda is exact in the Laurent ring but leaves
        // the factor (q - q^-1)/lambda on every depth-two entry.
        let sl = SlAlgebra::new(3).unwrap();
        let lam = parse(&sl, "lambda");
        let formal = sl.ladder_reconstruct(&sl.delta_generators(), &lam).unwrap();
        let closed = sl.closed_form();
        assert_ne!(formal, closed);
        let factor = parse(&sl, "q*lambda^-1 - q^-1*lambda^-1");
        assert_eq!(formal.t_plus.get(0, 2), &closed.t_plus.get(0, 2).scale(&factor));
        assert_eq!(formal.t_minus.get(2, 0), &closed.t_minus.get(2, 0).scale(&factor));
        assert_eq!(formal.t_plus.get(0, 1), closed.t_plus.get(0, 1));
    }

    #[test]
    fn cartan_involution_maps_upper_to_lower() {
        for n in 2..=4 {
            let sl = SlAlgebra::new(n).unwrap();
            let c = sl.closed_form();
            for i in 0..n {
                for j in i..n {
                    let image = sl.cartan_involution(c.t_plus.get(i, j)).unwrap();
                    assert_eq!(&image, c.t_minus.get(j, i), "n = {n}, ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn cartan_involution_preserves_products() {
        let sl = SlAlgebra::new(3).unwrap();
        let c = sl.closed_form();
        let a = c.t_plus.get(0, 1);
        let b = c.t_plus.get(1, 2);
        let ab = a.checked_mul(b).unwrap();
        let lhs = sl.cartan_involution(&ab).unwrap();
        let rhs = sl
            .cartan_involution(a)
            .unwrap()
            .checked_mul(&sl.cartan_involution(b).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn diagonal_products_are_one() {
        for n in 2..=4 {
            let sl = SlAlgebra::new(n).unwrap();
            let c = sl.closed_form();
            let one = AlgebraElement::one(sl.signature());
            assert_eq!(diagonal_product(&c.t_plus).unwrap(), one);
            assert_eq!(diagonal_product(&c.t_minus).unwrap(), one);
        }
    }

    #[test]
    fn rank_two_and_three_rtt() {
        for n in 2..=3 {
            let sl = SlAlgebra::new(n).unwrap();
            let t = assemble_t(&sl.closed_form()).unwrap();
            let r = RMatrix::standard(n, sl.vars()).unwrap();
            assert!(rtt_residual(&r, &t).unwrap().is_zero(), "n = {n}");
        }
    }

    #[test]
    fn lambda_free_block_breaks_rtt() {
        let sl = SlAlgebra::new(2).unwrap();
        let t = assemble_t(&sl.closed_form()).unwrap();
        let r = RMatrix::standard(2, sl.vars()).unwrap();
        let mut m = r.matrix.clone();
        m.set(2, 1, LaurentPoly::zero(sl.vars()));
        let broken = r.with_matrix("no-lambda", m);
        assert!(!rtt_residual(&broken, &t).unwrap().is_zero());
    }

    #[test]
    fn rank_two_borel_relations() {
        // A = t11, u = A^-1 t12, l = t21 A^-1: Au = q uA, Al = q lA, [u,l] = 0.
        let sl = SlAlgebra::new(2).unwrap();
        let t = assemble_t(&sl.closed_form()).unwrap();
        let a = t.get(0, 0);
        let ai = a.invert().unwrap();
        let u = ai.checked_mul(t.get(0, 1)).unwrap();
        let l = t.get(1, 0).checked_mul(&ai).unwrap();
        let q = sl.q();
        assert_eq!(a.checked_mul(&u).unwrap(), u.checked_mul(a).unwrap().scale(&q));
        assert_eq!(a.checked_mul(&l).unwrap(), l.checked_mul(a).unwrap().scale(&q));
        assert!(u.commutator(&l).unwrap().is_zero());
    }

    #[test]
    fn bindings_resolve_lambda_last() {
        let sl = SlAlgebra::new(2).unwrap();
        let mut b = Bindings::new();
        b.insert("f1", parse(&sl, "q^-1*lambda")).unwrap();
        b.insert(LAMBDA, sl.lambda_default()).unwrap();
        assert_eq!(b.apply(&parse(&sl, "f1")).unwrap(), parse(&sl, "1 - q^-2"));
        assert!(b.insert("nope", parse(&sl, "q")).is_err());
        let bound = sl.closed_form().bind(&b).unwrap();
        assert_eq!(bound.t_plus.get(0, 1).to_string(), "(1 - q^-2)*[1 ⊗ X1+]");
        assert_eq!(bound.bindings.to_strings()["f1"], "q^-1*lambda");
    }

    #[test]
    fn glpq_entries_and_rtt() {
        let g = build_glpq2().unwrap();
        assert_eq!(g.t.get(0, 0).to_string(), "[P^-1 ⊗ Q]");
        assert_eq!(g.t.get(0, 1).to_string(), "(c_plus)*[P^-1 ⊗ X+]");
        let r = RMatrix::two_parameter(g.signature.vars()).unwrap();
        assert!(rtt_residual(&r, &g.t).unwrap().is_zero());
    }

    #[test]
    fn dual_generators_commute_and_rtt() {
        let d = build_dual_sl2().unwrap();
        let sig = &d.signature;
        let one = LaurentPoly::one(sig.vars());
        let xp = single(sig, one.clone(), 0, &[0], &[(0, 1)]);
        let xm = single(sig, one.clone(), 0, &[0], &[(1, 1)]);
        let k = single(sig, one, 0, &[1], &[]);
        assert!(xp.commutator(&xm).unwrap().is_zero());
        let q = LaurentPoly::var(sig.vars(), "q").unwrap();
        for x in [&xp, &xm] {
            assert_eq!(k.checked_mul(x).unwrap(), x.checked_mul(&k).unwrap().scale(&q));
        }
        let r = RMatrix::standard(2, sig.vars()).unwrap();
        assert!(rtt_residual(&r, &d.t).unwrap().is_zero());
    }
}
