//! Normal-form engine for tensor products of torus-extended one-generator
//! algebras.
//!
//! An algebra is described by a [`Signature`]: a list of slots (tensor
//! factors), a torus `K_0..K_{r-1}` shared by every slot, and per slot a few
//! mutually commuting generators `X`. Inside a slot `K_m X = w_m X K_m` for a
//! Laurent monomial `w_m` of the coefficient ring; different slots commute.
//! The words `K^a X^b` (torus first, then generator powers) form a basis, so
//! every element has a unique normal form and equality is decidable.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{same_vars, Exponents, LaurentPoly, VarSet};

/// One generator living in a slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlotGen {
    pub name: String,
    /// `weights[m]` is the exponent vector of `w_m` in `K_m X = w_m X K_m`.
    pub weights: Vec<Exponents>,
    /// `[H_k, X] = cartan_shift[k] X` in the undeformed algebra; empty when
    /// the generator has no classical counterpart.
    pub cartan_shift: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slot {
    pub name: String,
    pub gens: Vec<SlotGen>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Signature {
    name: String,
    #[serde(serialize_with = "ser_vars")]
    vars: Arc<VarSet>,
    torus: Vec<String>,
    slots: Vec<Slot>,
    /// `torus_log[m][k]`: `d/dh K_m` at `h = 0` equals `sum_k torus_log[m][k] H_k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    torus_log: Option<Vec<Vec<Rational64>>>,
    #[serde(skip)]
    offsets: Vec<usize>,
    #[serde(skip)]
    width: usize,
}

fn ser_vars<S: serde::Serializer>(v: &Arc<VarSet>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.names().serialize(s)
}

impl Signature {
    pub fn new(
        name: impl Into<String>,
        vars: Arc<VarSet>,
        torus: Vec<String>,
        slots: Vec<Slot>,
        torus_log: Option<Vec<Vec<Rational64>>>,
    ) -> Result<Arc<Self>> {
        let r = torus.len();
        let mut offsets = Vec::with_capacity(slots.len());
        let mut width = 0;
        for slot in &slots {
            for g in &slot.gens {
                if g.weights.len() != r || g.weights.iter().any(|w| w.len() != vars.len()) {
                    return Err(Error::Malformed(format!(
                        "weights of generator `{}` do not match torus rank {r} and {} variables",
                        g.name,
                        vars.len()
                    )));
                }
            }
            offsets.push(width);
            width += r + slot.gens.len();
        }
        if let Some(log) = &torus_log {
            if log.len() != r {
                return Err(Error::Malformed("torus_log length".into()));
            }
        }
        Ok(Arc::new(Signature {
            name: name.into(),
            vars,
            torus,
            slots,
            torus_log,
            offsets,
            width,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn torus(&self) -> &[String] {
        &self.torus
    }

    pub fn torus_rank(&self) -> usize {
        self.torus.len()
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn torus_log(&self) -> Option<&Vec<Vec<Rational64>>> {
        self.torus_log.as_ref()
    }

    /// The empty word (all exponents zero).
    pub fn empty_word(&self) -> Vec<i32> {
        vec![0; self.width]
    }

    pub fn torus_range(&self, slot: usize) -> std::ops::Range<usize> {
        let o = self.offsets[slot];
        o..o + self.torus.len()
    }

    pub fn gen_index(&self, slot: usize, gen: usize) -> usize {
        self.offsets[slot] + self.torus.len() + gen
    }

    pub fn slot_range(&self, slot: usize) -> std::ops::Range<usize> {
        let o = self.offsets[slot];
        o..o + self.torus.len() + self.slots[slot].gens.len()
    }

    /// Writes the torus monomial `K^exps` into `slot` of `word`.
    pub fn set_torus(&self, word: &mut [i32], slot: usize, exps: &[i32]) {
        let range = self.torus_range(slot);
        word[range].copy_from_slice(exps);
    }

    pub fn set_gen(&self, word: &mut [i32], slot: usize, gen: usize, power: u32) {
        word[self.gen_index(slot, gen)] = power as i32;
    }

    fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    /// Coefficient monomial exponent picked up by `a * b` when the generator
    /// powers of `a` are moved right past the torus part of `b`.
    fn reorder_shift(&self, a: &[i32], b: &[i32], acc: &mut [i32]) {
        let r = self.torus.len();
        for (s, slot) in self.slots.iter().enumerate() {
            let off = self.offsets[s];
            for (gi, g) in slot.gens.iter().enumerate() {
                let m = a[off + r + gi];
                if m == 0 {
                    continue;
                }
                for (t, w) in g.weights.iter().enumerate() {
                    let bt = b[off + t];
                    if bt == 0 {
                        continue;
                    }
                    for (x, wv) in acc.iter_mut().zip(w) {
                        *x -= m * bt * wv;
                    }
                }
            }
        }
    }
}

/// Exact element of the algebra described by a [`Signature`], in normal form.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    sig: Arc<Signature>,
    terms: BTreeMap<Vec<i32>, LaurentPoly>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.sig.same(&other.sig) && self.terms == other.terms
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        AlgebraElement {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sig: &Arc<Signature>) -> Self {
        Self::scalar(sig, LaurentPoly::one(sig.vars()))
    }

    pub fn scalar(sig: &Arc<Signature>, c: LaurentPoly) -> Self {
        Self::term(sig, c, sig.empty_word()).expect("empty word is valid")
    }

    /// `c * word`, validating word shape and coefficient ring.
    pub fn term(sig: &Arc<Signature>, c: LaurentPoly, word: Vec<i32>) -> Result<Self> {
        if word.len() != sig.width {
            return Err(Error::Malformed(format!(
                "word of length {} for signature `{}` of width {}",
                word.len(),
                sig.name,
                sig.width
            )));
        }
        for s in 0..sig.slots.len() {
            for g in 0..sig.slots[s].gens.len() {
                if word[sig.gen_index(s, g)] < 0 {
                    return Err(Error::Malformed("negative generator power".into()));
                }
            }
        }
        if !same_vars(c.vars(), sig.vars()) {
            return Err(Error::VarSetMismatch(
                c.vars().names().to_vec(),
                sig.vars().names().to_vec(),
            ));
        }
        let mut out = Self::zero(sig);
        out.add_term(word, c);
        Ok(out)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &LaurentPoly)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[i32]) -> Option<&LaurentPoly> {
        self.terms.get(word)
    }

    fn add_term(&mut self, word: Vec<i32>, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.sig.same(&other.sig) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(self.sig.name.clone(), other.sig.name.clone()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    /// Normal-ordered product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let nv = self.sig.vars().len();
        let mut out = Self::zero(&self.sig);
        let mut shift = vec![0i32; nv];
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                shift.iter_mut().for_each(|x| *x = 0);
                self.sig.reorder_shift(wa, wb, &mut shift);
                let w: Vec<i32> = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
                let c = (ca * cb).mul_monomial(&shift);
                out.add_term(w, c);
            }
        }
        out
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self
            .mul_unchecked(other)
            .add_unchecked(&other.mul_unchecked(self).neg()))
    }

    /// Inverse of a torus monomial with a unit-monomial coefficient.
    pub fn invert(&self) -> Result<Self> {
        let (w, c) = match (self.terms.len(), self.terms.iter().next()) {
            (1, Some(t)) => t,
            _ => return Err(Error::NotInvertible(format!("{self}"))),
        };
        for s in 0..self.sig.slots.len() {
            for g in 0..self.sig.slots[s].gens.len() {
                if w[self.sig.gen_index(s, g)] != 0 {
                    return Err(Error::NotInvertible(format!("{self}")));
                }
            }
        }
        let ci = c.inverse().map_err(|_| Error::NotInvertible(format!("{self}")))?;
        let wi = w.iter().map(|x| -x).collect();
        Ok(AlgebraElement {
            sig: self.sig.clone(),
            terms: BTreeMap::from([(wi, ci)]),
        })
    }

    pub fn is_torus_monomial(&self) -> bool {
        self.invert().is_ok()
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero(&self.sig);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    /// Applies `f` to every coefficient (e.g. a substitution) and renormalizes.
    pub fn map_coeffs<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&LaurentPoly) -> Result<LaurentPoly>,
    {
        let mut out = Self::zero(&self.sig);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Slots carrying a nontrivial torus or generator exponent in some term.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for w in self.terms.keys() {
            for s in 0..self.sig.slots.len() {
                if w[self.sig.slot_range(s)].iter().any(|&x| x != 0) {
                    out.insert(s);
                }
            }
        }
        out
    }

    /// Moves slot contents according to `slot_map` (source, target) into the
    /// algebra `target`, optionally negating torus exponents. Generators are
    /// matched by position inside the slot. Unmapped slots must be trivial.
    pub fn transport(&self, target: &Arc<Signature>, slot_map: &[(usize, usize)], negate_torus: bool) -> Result<Self> {
        if !same_vars(self.sig.vars(), target.vars()) || self.sig.torus_rank() != target.torus_rank() {
            return Err(Error::SignatureMismatch(self.sig.name.clone(), target.name.clone()));
        }
        let mapped: BTreeSet<usize> = slot_map.iter().map(|p| p.0).collect();
        if let Some(s) = self.support().difference(&mapped).next() {
            return Err(Error::Malformed(format!("slot {s} is not mapped")));
        }
        let r = self.sig.torus_rank();
        let mut out = Self::zero(target);
        for (w, c) in &self.terms {
            let mut nw = target.empty_word();
            for &(from, to) in slot_map {
                let ng = self.sig.slots[from].gens.len();
                if target.slots[to].gens.len() != ng {
                    return Err(Error::Malformed(format!("slot {from} -> {to}: generator count")));
                }
                let src = &w[self.sig.slot_range(from)];
                let dst = target.slot_range(to);
                for (i, x) in src.iter().enumerate() {
                    let v = if negate_torus && i < r { -x } else { *x };
                    nw[dst.start + i] += v;
                }
            }
            out.add_term(nw, c.clone());
        }
        Ok(out)
    }

    /// Divides every coefficient exactly by `d`.
    pub fn div_coeffs_exact(&self, d: &LaurentPoly) -> Result<Self> {
        self.map_coeffs(|c| c.div_exact(d))
    }

    fn fmt_word(&self, w: &[i32]) -> String {
        let sig = &self.sig;
        let r = sig.torus_rank();
        let parts: Vec<String> = (0..sig.slots.len())
            .map(|s| {
                let range = sig.slot_range(s);
                let seg = &w[range];
                let mut f: Vec<String> = Vec::new();
                for (t, &e) in seg[..r].iter().enumerate() {
                    match e {
                        0 => {}
                        1 => f.push(sig.torus[t].clone()),
                        _ => f.push(format!("{}^{}", sig.torus[t], e)),
                    }
                }
                for (g, &e) in seg[r..].iter().enumerate() {
                    let name = &sig.slots[s].gens[g].name;
                    match e {
                        0 => {}
                        1 => f.push(name.clone()),
                        _ => f.push(format!("{name}^{e}")),
                    }
                }
                if f.is_empty() {
                    "1".to_string()
                } else {
                    f.join(" ")
                }
            })
            .collect();
        parts.join(" ⊗ ")
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let shown: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word = self.fmt_word(w);
                match c.as_monomial() {
                    Some((e, k)) if e.iter().all(|&x| x == 0) && k.abs().is_one() => {
                        if k.is_negative() {
                            format!("-[{word}]")
                        } else {
                            format!("[{word}]")
                        }
                    }
                    _ => format!("({c})*[{word}]"),
                }
            })
            .collect();
        write!(f, "{}", shown.join(" + "))
    }
}

/// JSON mirror of an element: one entry per term, one word per slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementRepr {
    pub signature: String,
    pub terms: Vec<TermRepr>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRepr {
    pub coeff: LaurentPoly,
    pub slots: Vec<SlotWordRepr>,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotWordRepr {
    pub torus: Vec<i32>,
    pub x: Vec<i32>,
}

impl AlgebraElement {
    pub fn to_repr(&self) -> ElementRepr {
        let r = self.sig.torus_rank();
        ElementRepr {
            signature: self.sig.name.clone(),
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermRepr {
                    coeff: c.clone(),
                    slots: (0..self.sig.slots.len())
                        .map(|s| {
                            let seg = &w[self.sig.slot_range(s)];
                            SlotWordRepr {
                                torus: seg[..r].to_vec(),
                                x: seg[r..].to_vec(),
                            }
                        })
                        .collect(),
                    display: self.fmt_word(w),
                })
                .collect(),
        }
    }

    pub fn from_repr(sig: &Arc<Signature>, repr: &ElementRepr) -> Result<Self> {
        if repr.signature != sig.name {
            return Err(Error::SignatureMismatch(repr.signature.clone(), sig.name.clone()));
        }
        let mut out = Self::zero(sig);
        for t in &repr.terms {
            if t.slots.len() != sig.slots.len() {
                return Err(Error::Malformed("slot count".into()));
            }
            let mut w = Vec::with_capacity(sig.width);
            for (s, sw) in t.slots.iter().enumerate() {
                if sw.torus.len() != sig.torus_rank() || sw.x.len() != sig.slots[s].gens.len() {
                    return Err(Error::Malformed(format!("slot {s} word shape")));
                }
                w.extend_from_slice(&sw.torus);
                w.extend_from_slice(&sw.x);
            }
            let coeff = LaurentPoly::from_terms(sig.vars(), t.coeff.terms().map(|(e, c)| (e.clone(), c.clone())))?;
            if t.coeff.vars().names() != sig.vars().names() {
                return Err(Error::VarSetMismatch(
                    t.coeff.vars().names().to_vec(),
                    sig.vars().names().to_vec(),
                ));
            }
            out = out.add_unchecked(&Self::term(sig, coeff, w)?);
        }
        Ok(out)
    }
}

impl Serialize for AlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Two slots, torus rank 1, `K X = q X K` in slot 0 and `K X = q^-2 X K`
    /// in slot 1.
    fn toy() -> Arc<Signature> {
        let vars = VarSet::new(["q", "f"]).unwrap();
        let slot = |name: &str, e: i32| Slot {
            name: name.into(),
            gens: vec![SlotGen {
                name: format!("X{name}"),
                weights: vec![vec![e, 0]],
                cartan_shift: vec![],
            }],
        };
        Signature::new("toy", vars, vec!["K".into()], vec![slot("a", 1), slot("b", -2)], None).unwrap()
    }

    fn word(sig: &Signature, parts: &[(usize, i32, u32)]) -> Vec<i32> {
        let mut w = sig.empty_word();
        for &(s, k, x) in parts {
            sig.set_torus(&mut w, s, &[k]);
            sig.set_gen(&mut w, s, 0, x);
        }
        w
    }

    fn el(sig: &Arc<Signature>, c: &str, parts: &[(usize, i32, u32)]) -> AlgebraElement {
        AlgebraElement::term(sig, LaurentPoly::parse(sig.vars(), c).unwrap(), word(sig, parts)).unwrap()
    }

    #[test]
    fn single_rewrite() {
        let sig = toy();
        let kx = el(&sig, "1", &[(0, 1, 1)]);
        let prod = kx.checked_mul(&kx).unwrap();
        assert_eq!(prod, el(&sig, "q^-1", &[(0, 2, 2)]));
    }

    #[test]
    fn commutator_of_self_vanishes() {
        let sig = toy();
        let x = el(&sig, "f + q", &[(0, 1, 1), (1, -1, 2)]);
        assert!(x.commutator(&x).unwrap().is_zero());
    }

    #[test]
    fn disjoint_slots_commute() {
        let sig = toy();
        let a = el(&sig, "1", &[(0, 0, 1)]);
        let b = el(&sig, "1", &[(1, 0, 1)]);
        assert!(a.commutator(&b).unwrap().is_zero());
    }

    #[test]
    fn invert_examples() {
        let sig = toy();
        let one = AlgebraElement::one(&sig);
        assert_eq!(one.invert().unwrap(), one);
        let t = el(&sig, "q", &[(0, 2, 0)]);
        assert_eq!(t.invert().unwrap(), el(&sig, "q^-1", &[(0, -2, 0)]));
        assert_eq!(t.checked_mul(&t.invert().unwrap()).unwrap(), one);
        assert!(el(&sig, "1", &[(0, 0, 1)]).invert().is_err());
        assert!(el(&sig, "2", &[(0, 1, 0)]).invert().is_err());
        let sum = el(&sig, "1", &[(0, 1, 0)]).checked_add(&one).unwrap();
        assert!(sum.invert().is_err());
    }

    #[test]
    fn signature_mismatch() {
        let a = AlgebraElement::one(&toy());
        let vars = VarSet::new(["q", "f"]).unwrap();
        let other = Signature::new("other", vars, vec!["K".into()], vec![], None).unwrap();
        let b = AlgebraElement::one(&other);
        assert!(matches!(a.checked_mul(&b), Err(Error::SignatureMismatch(..))));
        assert!(matches!(a.commutator(&b), Err(Error::SignatureMismatch(..))));
    }

    #[test]
    fn malformed_words_are_rejected() {
        let sig = toy();
        let q = LaurentPoly::one(sig.vars());
        assert!(AlgebraElement::term(&sig, q.clone(), vec![0; 3]).is_err());
        let mut w = sig.empty_word();
        sig.set_torus(&mut w, 0, &[1]);
        w[sig.gen_index(0, 0)] = -1;
        assert!(AlgebraElement::term(&sig, q, w).is_err());
    }

    #[test]
    fn repr_round_trip_and_display() {
        let sig = toy();
        let x = el(&sig, "f*q^-1", &[(0, -1, 1), (1, 2, 0)])
            .checked_add(&el(&sig, "3", &[]))
            .unwrap();
        let js = serde_json::to_string(&x).unwrap();
        let repr: ElementRepr = serde_json::from_str(&js).unwrap();
        assert_eq!(AlgebraElement::from_repr(&sig, &repr).unwrap(), x);
        assert_eq!(x.to_string(), "(q^-1*f)*[K^-1 Xa ⊗ K^2] + (3)*[1 ⊗ 1]");
    }

    #[test]
    fn transport_moves_and_negates() {
        let sig = toy();
        let x = el(&sig, "f", &[(0, 1, 2)]);
        let y = x.transport(&sig, &[(0, 1)], true).unwrap();
        assert_eq!(y, el(&sig, "f", &[(1, -1, 2)]));
        assert!(x.transport(&sig, &[(1, 0)], false).is_err());
    }

    fn arb_element(sig: Arc<Signature>) -> impl Strategy<Value = AlgebraElement> {
        let term = (-2i32..=2, 0u32..=2, -2i32..=2, 0u32..=2, -3i64..=3, -1i32..=1, 0i32..=1);
        prop::collection::vec(term, 0..4).prop_map(move |ts| {
            let mut out = AlgebraElement::zero(&sig);
            for (k0, x0, k1, x1, c, qe, fe) in ts {
                let w = word(&sig, &[(0, k0, x0), (1, k1, x1)]);
                let coeff = LaurentPoly::monomial(sig.vars(), vec![qe, fe], c.into());
                out = out.add_unchecked(&AlgebraElement::term(&sig, coeff, w).unwrap());
            }
            out
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(a in arb_element(toy()), b in arb_element(toy()), c in arb_element(toy())) {
            let left = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
            let right = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn unit_is_two_sided(a in arb_element(toy())) {
            let one = AlgebraElement::one(a.signature());
            prop_assert_eq!(a.checked_mul(&one).unwrap(), a.clone());
            prop_assert_eq!(one.checked_mul(&a).unwrap(), a);
        }

        #[test]
        fn distributes(a in arb_element(toy()), b in arb_element(toy()), c in arb_element(toy())) {
            let left = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
            let right = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn generator_degree_is_additive(a in arb_element(toy()), b in arb_element(toy())) {
            let sig = toy();
            let prod = a.checked_mul(&b).unwrap();
            let degs = |e: &AlgebraElement| -> BTreeSet<(i32, i32)> {
                e.terms().map(|(w, _)| (w[sig.gen_index(0, 0)], w[sig.gen_index(1, 0)])).collect()
            };
            let expected: BTreeSet<(i32, i32)> = degs(&a)
                .iter()
                .flat_map(|x| degs(&b).into_iter().map(move |y| (x.0 + y.0, x.1 + y.1)))
                .collect();
            prop_assert!(degs(&prod).is_subset(&expected));
        }
    }
}
