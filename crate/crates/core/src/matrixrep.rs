//! Matrix images of slot-algebra elements and the classical limit.
//!
//! In the fundamental representation each slot word `K^a X^b` becomes an
//! `n x n` matrix over `Z[v, v^-1]` (with `q = v^n`) and the slots are
//! combined by Kronecker products. The classical limit differentiates the
//! entries of `T` at `h = 0` (`q = e^h`) and lands in the undeformed
//! enveloping algebra, one copy per slot.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cartan::FundamentalRep;
use crate::error::{Error, Result};
use crate::jimbo::{assemble_t, Bindings, Half, SlAlgebra, LAMBDA};
use crate::opmatrix::{NcEntry, OpMatrix};
use crate::ring::{LaurentPoly, ScaledPoly, VarSet};
use crate::rmatrix::ScalarMatrix;
use crate::slotalg::{AlgebraElement, Signature};

/// Which slot varies slowest in the Kronecker product of slot matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KronOrder {
    /// First slot slowest.
    Natural,
    /// Last slot slowest.
    Reversed,
}

/// Images of the torus and of every slot generator in one representation.
#[derive(Debug, Clone)]
pub struct RepImages {
    pub dim: usize,
    /// `q = v^root`.
    pub root: i32,
    /// Torus generator `m` acts as `diag(v^{torus_diag[m][i]})`.
    pub torus_diag: Vec<Vec<i32>>,
    /// `gens[slot][gen]` as an integer matrix.
    pub gens: Vec<Vec<Vec<Vec<BigInt>>>>,
}

fn integral(m: &[Vec<num_rational::Rational64>]) -> Result<Vec<Vec<BigInt>>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(BigInt::from(x.to_integer()))
                    } else {
                        Err(Error::Unsupported(format!("non-integral generator entry {x}")))
                    }
                })
                .collect()
        })
        .collect()
}

impl RepImages {
    /// Defining representation for the `SL_q(n)` ambient algebra.
    pub fn fundamental(sl: &SlAlgebra, rep: &FundamentalRep) -> Result<Self> {
        if rep.n != sl.n() {
            return Err(Error::DimensionMismatch(format!(
                "representation of sl({}) for sl_q({})",
                rep.n,
                sl.n()
            )));
        }
        let r = sl.n() - 1;
        let gens = (0..2 * r)
            .map(|s| {
                let (half, j) = sl.slot_generator(s);
                let m = match half {
                    Half::Minus => &rep.x_minus[j],
                    Half::Plus => &rep.x_plus[j],
                };
                Ok(vec![integral(m)?])
            })
            .collect::<Result<_>>()?;
        Ok(RepImages {
            dim: rep.n,
            root: rep.root(),
            torus_diag: rep.k_exps[..r].to_vec(),
            gens,
        })
    }
}

/// An evaluated element: a square matrix over the coefficient ring.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepMatrix {
    pub order: KronOrder,
    pub matrix: ScalarMatrix,
}

impl fmt::Display for RepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        let cells: Vec<Vec<String>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
        for row in cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", padded.join("  "))?;
        }
        Ok(())
    }
}

impl NcEntry for RepMatrix {
    fn zero_like(&self) -> Self {
        RepMatrix {
            order: self.order,
            matrix: ScalarMatrix::zeros(self.matrix.vars(), self.matrix.rows(), self.matrix.cols()),
        }
    }

    fn one_like(&self) -> Self {
        RepMatrix {
            order: self.order,
            matrix: ScalarMatrix::identity(self.matrix.vars(), self.matrix.rows()),
        }
    }

    fn compatible(&self, other: &Self) -> bool {
        self.matrix.rows() == other.matrix.rows()
            && self.matrix.cols() == other.matrix.cols()
            && self.matrix.vars().names() == other.matrix.vars().names()
    }

    fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.matrix, &other.matrix);
        RepMatrix {
            order: self.order,
            matrix: ScalarMatrix::from_fn(a.vars(), a.rows(), a.cols(), |i, j| a.get(i, j) + b.get(i, j)),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        RepMatrix {
            order: self.order,
            matrix: self
                .matrix
                .matmul(&other.matrix)
                .expect("compatible representation matrices"),
        }
    }

    fn neg(&self) -> Self {
        RepMatrix {
            order: self.order,
            matrix: self.matrix.scale(&-LaurentPoly::one(self.matrix.vars())),
        }
    }

    fn scale(&self, c: &LaurentPoly) -> Self {
        RepMatrix {
            order: self.order,
            matrix: self.matrix.scale(c),
        }
    }

    fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    fn try_invert(&self) -> Option<Self> {
        let m = &self.matrix;
        let mut inv = ScalarMatrix::zeros(m.vars(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j && !m.get(i, j).is_zero() {
                    return None;
                }
            }
            inv.set(i, i, m.get(i, i).inverse().ok()?);
        }
        Some(RepMatrix {
            order: self.order,
            matrix: inv,
        })
    }
}

fn int_matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn int_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Image of `x` under the slotwise representation, with `q = v^root`.
pub fn evaluate_in_rep(x: &AlgebraElement, images: &RepImages, order: KronOrder) -> Result<RepMatrix> {
    let sig = x.signature();
    let vars = sig.vars();
    let nslots = sig.slots().len();
    if images.gens.len() != nslots || images.torus_diag.len() != sig.torus_rank() {
        return Err(Error::DimensionMismatch(format!(
            "representation images for {} slots against signature `{}`",
            images.gens.len(),
            sig.name()
        )));
    }
    let vq = LaurentPoly::var_pow(vars, "v", images.root)?;
    let d = images.dim;
    let total = d.pow(nslots as u32);
    let slot_order: Vec<usize> = match order {
        KronOrder::Natural => (0..nslots).collect(),
        KronOrder::Reversed => (0..nslots).rev().collect(),
    };
    let vi = vars.require("v")?;
    let mut acc = ScalarMatrix::zeros(vars, total, total);
    for (word, coeff) in x.terms() {
        let c = coeff.substitute("q", &vq)?;
        let mut m: Option<ScalarMatrix> = None;
        for &s in &slot_order {
            let seg = &word[sig.slot_range(s)];
            let r = sig.torus_rank();
            let diag: Vec<i32> = (0..d)
                .map(|i| (0..r).map(|t| seg[t] * images.torus_diag[t][i]).sum())
                .collect();
            let mut xm = int_identity(d);
            for (g, &p) in seg[r..].iter().enumerate() {
                for _ in 0..p {
                    xm = int_matmul(&xm, &images.gens[s][g]);
                }
            }
            let slot_m = ScalarMatrix::from_fn(vars, d, d, |i, j| {
                if xm[i][j].is_zero() {
                    return LaurentPoly::zero(vars);
                }
                let mut e = vec![0; vars.len()];
                e[vi] = diag[i];
                LaurentPoly::monomial(vars, e, xm[i][j].clone())
            });
            m = Some(match m {
                None => slot_m,
                Some(prev) => prev.kron(&slot_m),
            });
        }
        let m = m.unwrap_or_else(|| ScalarMatrix::identity(vars, 1)).scale(&c);
        acc = ScalarMatrix::from_fn(vars, total, total, |i, j| acc.get(i, j) + m.get(i, j));
    }
    Ok(RepMatrix { order, matrix: acc })
}

/// Entrywise evaluation of a matrix of elements.
pub fn evaluate_matrix(t: &OpMatrix, images: &RepImages, order: KronOrder) -> Result<OpMatrix<RepMatrix>> {
    let entries = t
        .entries()
        .iter()
        .map(|x| evaluate_in_rep(x, images, order))
        .collect::<Result<Vec<_>>>()?;
    OpMatrix::new(t.rows(), t.cols(), entries)
}

/// The published 4x4 matrices of `t11, t12, t21, t22` for `SL_q(2)` in
/// the two-dimensional representation, with `q = v^2`.
pub fn reference_table(vars: &Arc<VarSet>) -> Result<[ScalarMatrix; 4]> {
    const TABLE: [[[&str; 4]; 4]; 4] = [
        [
            ["1", "0", "0", "0"],
            ["0", "q", "0", "0"],
            ["0", "0", "q^-1", "0"],
            ["0", "0", "0", "1"],
        ],
        [
            ["0", "0", "1", "0"],
            ["0", "0", "0", "q"],
            ["0", "0", "0", "0"],
            ["0", "0", "0", "0"],
        ],
        [
            ["0", "0", "0", "0"],
            ["1", "0", "0", "0"],
            ["0", "0", "0", "0"],
            ["0", "0", "q^-1", "0"],
        ],
        [
            ["1", "0", "0", "0"],
            ["0", "q^-1", "1", "0"],
            ["0", "0", "q", "0"],
            ["0", "0", "0", "1"],
        ],
    ];
    let v2 = LaurentPoly::var_pow(vars, "v", 2)?;
    let build = |t: &[[&str; 4]; 4]| -> Result<ScalarMatrix> {
        let mut m = ScalarMatrix::zeros(vars, 4, 4);
        for (i, row) in t.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                m.set(i, j, LaurentPoly::parse(vars, s)?.substitute("q", &v2)?);
            }
        }
        Ok(m)
    };
    Ok([
        build(&TABLE[0])?,
        build(&TABLE[1])?,
        build(&TABLE[2])?,
        build(&TABLE[3])?,
    ])
}

/// Outcome of fitting the Kronecker order and `(f, g)` to the reference
/// table: the order is fixed by `t11`, `f` by `t12`, `g` by `t21`, and
/// `t22` is an independent confirmation.
#[derive(Debug, Clone, Serialize)]
pub struct TableCalibration {
    pub order: KronOrder,
    pub f: LaurentPoly,
    pub g: LaurentPoly,
    pub q_root: String,
    /// `t11, t12, t21, t22` under the calibrated choices.
    pub matrices: Vec<RepMatrix>,
    pub matches: Vec<bool>,
    pub confirmed: bool,
}

fn unique<T>(found: Vec<T>, what: &str) -> Result<T> {
    match found.len() {
        1 => Ok(found.into_iter().next().expect("one candidate")),
        k => Err(Error::Malformed(format!("{k} candidates fit {what}"))),
    }
}

/// Candidate values `v^e`, `e = -2..=2`, for the free constants.
fn candidates(vars: &Arc<VarSet>) -> Vec<LaurentPoly> {
    (-2..=2)
        .map(|e| LaurentPoly::var_pow(vars, "v", e).expect("v is a ring variable"))
        .collect()
}

pub fn calibrate_reference_table() -> Result<TableCalibration> {
    let sl = SlAlgebra::new(2)?;
    let rep = FundamentalRep::new(2)?;
    let images = RepImages::fundamental(&sl, &rep)?;
    let vars = sl.vars().clone();
    let table = reference_table(&vars)?;
    let formal = assemble_t(&sl.closed_form())?;
    let eval = |x: &AlgebraElement, order, b: &Bindings| -> Result<ScalarMatrix> {
        Ok(evaluate_in_rep(&b.apply_element(x)?, &images, order)?.matrix)
    };
    let none = Bindings::new();
    let mut orders = Vec::new();
    for order in [KronOrder::Natural, KronOrder::Reversed] {
        if eval(formal.get(0, 0), order, &none)? == table[0] {
            orders.push(order);
        }
    }
    let order = unique(orders, "t11")?;
    let fit = |name: &str, entry: &AlgebraElement, target: &ScalarMatrix| -> Result<LaurentPoly> {
        let mut found = Vec::new();
        for c in candidates(&vars) {
            let mut b = Bindings::new();
            b.insert(name, c.clone())?;
            if eval(entry, order, &b)? == *target {
                found.push(c);
            }
        }
        unique(found, name)
    };
    let f = fit("f1", formal.get(0, 1), &table[1])?;
    let g = fit("g1", formal.get(1, 0), &table[2])?;
    let mut b = Bindings::new();
    b.insert("f1", f.clone())?;
    b.insert("g1", g.clone())?;
    let mut matrices = Vec::new();
    let mut matches = Vec::new();
    for (k, (i, j)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
        let m = eval(formal.get(i, j), order, &b)?;
        matches.push(m == table[k]);
        matrices.push(RepMatrix { order, matrix: m });
    }
    Ok(TableCalibration {
        order,
        f,
        g,
        q_root: "q = v^2".into(),
        confirmed: matches[3],
        matrices,
        matches,
    })
}

/// One slot of the undeformed algebra: Cartan elements `H_k` and
/// generators with `[H_k, X] = shift[k] X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalSlot {
    pub name: String,
    pub gens: Vec<String>,
    pub shifts: Vec<Vec<i32>>,
}

/// Tensor product of enveloping algebras in which the classical limit lives.
/// Words are `H^e X^b` per slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalAlgebra {
    pub name: String,
    #[serde(skip)]
    vars: Arc<VarSet>,
    pub h_names: Vec<String>,
    pub slots: Vec<ClassicalSlot>,
    #[serde(skip)]
    offsets: Vec<usize>,
    #[serde(skip)]
    width: usize,
}

impl ClassicalAlgebra {
    /// The `h = 0` fiber of a slot algebra whose torus has a logarithm.
    pub fn from_signature(sig: &Signature) -> Result<Arc<Self>> {
        let log = sig
            .torus_log()
            .ok_or_else(|| Error::Unsupported(format!("`{}` has no classical limit", sig.name())))?;
        let nh = log.first().map_or(0, Vec::len);
        let mut slots = Vec::new();
        let mut offsets = Vec::new();
        let mut width = 0;
        for s in sig.slots() {
            let shifts: Vec<Vec<i32>> = s.gens.iter().map(|g| g.cartan_shift.clone()).collect();
            if shifts.iter().any(|sh| sh.len() != nh) {
                return Err(Error::Malformed(format!("slot `{}`: shift length", s.name)));
            }
            offsets.push(width);
            width += nh + s.gens.len();
            slots.push(ClassicalSlot {
                name: s.name.clone(),
                gens: s.gens.iter().map(|g| g.name.clone()).collect(),
                shifts,
            });
        }
        Ok(Arc::new(ClassicalAlgebra {
            name: format!("{} at h = 0", sig.name()),
            vars: sig.vars().clone(),
            h_names: (1..=nh).map(|k| format!("H{k}")).collect(),
            slots,
            offsets,
            width,
        }))
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn empty_word(&self) -> Vec<i32> {
        vec![0; self.width]
    }

    pub fn h_index(&self, slot: usize, k: usize) -> usize {
        self.offsets[slot] + k
    }

    pub fn gen_index(&self, slot: usize, g: usize) -> usize {
        self.offsets[slot] + self.h_names.len() + g
    }

    /// `a * b` as a sum of normal-form words with integer coefficients,
    /// using `X_g H_k = (H_k - shift_g[k]) X_g`.
    fn mul_words(&self, a: &[i32], b: &[i32]) -> Vec<(Vec<i32>, BigInt)> {
        let nh = self.h_names.len();
        let mut partial: Vec<(Vec<i32>, BigInt)> = vec![(self.empty_word(), BigInt::one())];
        for (s, slot) in self.slots.iter().enumerate() {
            let o = self.offsets[s];
            let mut shift = vec![0i64; nh];
            for (g, sh) in slot.shifts.iter().enumerate() {
                let m = a[o + nh + g] as i64;
                for k in 0..nh {
                    shift[k] += m * sh[k] as i64;
                }
            }
            // H^{ea} (H - shift)^{eb} X^{ba + bb}, expanded one H_k at a time.
            let mut local: Vec<(Vec<i32>, BigInt)> = vec![(a[o..o + nh].to_vec(), BigInt::one())];
            for k in 0..nh {
                let e = b[o + k];
                let mut next = Vec::new();
                for (hs, c) in &local {
                    for j in 0..=e {
                        let coeff = binomial(BigInt::from(e), BigInt::from(j))
                            * num_traits::pow(BigInt::from(-shift[k]), (e - j) as usize);
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut h = hs.clone();
                        h[k] += j;
                        next.push((h, c * coeff));
                    }
                }
                local = next;
            }
            let gens: Vec<i32> = (0..slot.gens.len()).map(|g| a[o + nh + g] + b[o + nh + g]).collect();
            let mut combined = Vec::new();
            for (w, c) in &partial {
                for (hs, lc) in &local {
                    let mut nw = w.clone();
                    nw[o..o + nh].copy_from_slice(hs);
                    nw[o + nh..o + nh + gens.len()].copy_from_slice(&gens);
                    combined.push((nw, c * lc));
                }
            }
            partial = combined;
        }
        partial
    }
}

/// Element of a [`ClassicalAlgebra`] with rational polynomial coefficients.
#[derive(Debug, Clone)]
pub struct ClassicalElement {
    alg: Arc<ClassicalAlgebra>,
    terms: BTreeMap<Vec<i32>, ScaledPoly>,
}

impl PartialEq for ClassicalElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg) && self.terms == other.terms
    }
}

impl ClassicalElement {
    pub fn zero(alg: &Arc<ClassicalAlgebra>) -> Self {
        ClassicalElement {
            alg: alg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn term(alg: &Arc<ClassicalAlgebra>, c: ScaledPoly, word: Vec<i32>) -> Result<Self> {
        if word.len() != alg.width || word.iter().any(|&x| x < 0) {
            return Err(Error::Malformed(format!("classical word {word:?}")));
        }
        let mut out = Self::zero(alg);
        out.add_term(word, c);
        Ok(out)
    }

    /// `c * H_k` in `slot`.
    pub fn cartan(alg: &Arc<ClassicalAlgebra>, slot: usize, k: usize, c: BigRational) -> Self {
        let mut w = alg.empty_word();
        w[alg.h_index(slot, k)] = 1;
        let mut out = Self::zero(alg);
        out.add_term(w, ScaledPoly::from_ratio(&alg.vars, &c));
        out
    }

    /// `c * X_g` in `slot`.
    pub fn generator(alg: &Arc<ClassicalAlgebra>, slot: usize, g: usize, c: BigRational) -> Self {
        let mut w = alg.empty_word();
        w[alg.gen_index(slot, g)] = 1;
        let mut out = Self::zero(alg);
        out.add_term(w, ScaledPoly::from_ratio(&alg.vars, &c));
        out
    }

    pub fn algebra(&self) -> &Arc<ClassicalAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &ScaledPoly)> + '_ {
        self.terms.iter()
    }

    fn add_term(&mut self, w: Vec<i32>, c: ScaledPoly) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&w) {
            Some(old) => old.checked_add(&c).expect("shared ring"),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        NcEntry::sub(&NcEntry::mul(self, other), &NcEntry::mul(other, self))
    }

    fn fmt_word(&self, w: &[i32]) -> String {
        let a = &self.alg;
        let nh = a.h_names.len();
        let parts: Vec<String> = a
            .slots
            .iter()
            .enumerate()
            .map(|(s, slot)| {
                let o = a.offsets[s];
                let mut f = Vec::new();
                for (k, name) in a.h_names.iter().enumerate() {
                    match w[o + k] {
                        0 => {}
                        1 => f.push(name.clone()),
                        e => f.push(format!("{name}^{e}")),
                    }
                }
                for (g, name) in slot.gens.iter().enumerate() {
                    match w[o + nh + g] {
                        0 => {}
                        1 => f.push(name.clone()),
                        e => f.push(format!("{name}^{e}")),
                    }
                }
                if f.is_empty() {
                    "1".into()
                } else {
                    f.join(" ")
                }
            })
            .collect();
        parts.join(" ⊗ ")
    }
}

impl fmt::Display for ClassicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let shown: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c})*[{}]", self.fmt_word(w)))
            .collect();
        write!(f, "{}", shown.join(" + "))
    }
}

impl Serialize for ClassicalElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            coeff: &'a ScaledPoly,
            word: String,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            display: String,
            terms: Vec<Term<'a>>,
        }
        Repr {
            display: self.to_string(),
            terms: self
                .terms
                .iter()
                .map(|(w, c)| Term {
                    coeff: c,
                    word: self.fmt_word(w),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl NcEntry for ClassicalElement {
    fn zero_like(&self) -> Self {
        Self::zero(&self.alg)
    }

    fn one_like(&self) -> Self {
        let mut out = Self::zero(&self.alg);
        out.add_term(
            self.alg.empty_word(),
            ScaledPoly::from_poly(LaurentPoly::one(&self.alg.vars)),
        );
        out
    }

    fn compatible(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.alg);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let c = ca.checked_mul(cb).expect("shared ring");
                for (w, k) in self.alg.mul_words(wa, wb) {
                    out.add_term(w, ScaledPoly::new(c.numer().scale(&k), c.denom().clone()));
                }
            }
        }
        out
    }

    fn neg(&self) -> Self {
        ClassicalElement {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    fn scale(&self, c: &LaurentPoly) -> Self {
        let s = ScaledPoly::from_poly(c.clone());
        let mut out = Self::zero(&self.alg);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.checked_mul(&s).expect("shared ring"));
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn try_invert(&self) -> Option<Self> {
        let (w, c) = match (self.terms.len(), self.terms.iter().next()) {
            (1, Some(t)) => t,
            _ => return None,
        };
        if w.iter().any(|&x| x != 0) {
            return None;
        }
        let r = c.as_rational()?;
        if r.is_zero() {
            return None;
        }
        let mut out = Self::zero(&self.alg);
        out.add_term(w.clone(), ScaledPoly::from_ratio(&self.alg.vars, &r.recip()));
        Some(out)
    }
}

/// `dT/dh` at `h = 0` with `q = e^h = v^root`: every coefficient is bound,
/// rewritten in `v`, and differentiated; torus factors contribute their
/// logarithms `sum_k c_mk H_k` in the slot they live in.
pub fn classical_limit(t: &OpMatrix, bindings: &Bindings, root: i32) -> Result<OpMatrix<ClassicalElement>> {
    let sig = t.get(0, 0).signature().clone();
    let alg = ClassicalAlgebra::from_signature(&sig)?;
    let log = sig.torus_log().expect("checked by from_signature").clone();
    let vars = sig.vars().clone();
    let vq = LaurentPoly::var_pow(&vars, "v", root)?;
    let slope = BigRational::new(BigInt::one(), BigInt::from(root));
    let r = sig.torus_rank();
    let nh = alg.h_names.len();
    let limit_entry = |x: &AlgebraElement| -> Result<ClassicalElement> {
        let mut out = ClassicalElement::zero(&alg);
        for (word, coeff) in x.terms() {
            let c = bindings.apply(coeff)?;
            if c.mentions(LAMBDA) {
                return Err(Error::UnboundVariable(LAMBDA.into()));
            }
            let c = c.substitute("q", &vq)?;
            let mut xw = alg.empty_word();
            for s in 0..sig.slots().len() {
                for g in 0..sig.slots()[s].gens.len() {
                    xw[alg.gen_index(s, g)] = word[sig.gen_index(s, g)];
                }
            }
            out.add_term(xw.clone(), c.derive_at_one("v", &slope)?);
            let c1 = c.eval_at_one("v")?;
            if c1.is_zero() {
                continue;
            }
            for s in 0..sig.slots().len() {
                let tor = &word[sig.torus_range(s)];
                for k in 0..nh {
                    let h: num_rational::Rational64 = (0..r).map(|m| log[m][k] * tor[m] as i64).sum();
                    if h.is_zero() {
                        continue;
                    }
                    let mut w = xw.clone();
                    w[alg.h_index(s, k)] += 1;
                    let hr = BigRational::new(BigInt::from(*h.numer()), BigInt::from(*h.denom()));
                    let c = ScaledPoly::new(c1.scale(hr.numer()), hr.denom().clone());
                    out.add_term(w, c);
                }
            }
        }
        Ok(out)
    };
    let entries = t.entries().iter().map(limit_entry).collect::<Result<Vec<_>>>()?;
    OpMatrix::new(t.rows(), t.cols(), entries)
}

/// Relations `[M11, M12] = M12`, `[M11, M21] = M21`, `[M12, M21] = 0` of a
/// 2x2 limit matrix, by name.
pub fn limit_commutators(m: &OpMatrix<ClassicalElement>) -> Result<Vec<(String, bool)>> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch("commutator table needs a 2x2 matrix".into()));
    }
    let (m11, m12, m21) = (m.get(0, 0), m.get(0, 1), m.get(1, 0));
    Ok(vec![
        ("[M11, M12] = M12".into(), m11.commutator(m12) == *m12),
        ("[M11, M21] = M21".into(), m11.commutator(m21) == *m21),
        ("[M12, M21] = 0".into(), m12.commutator(m21).is_zero()),
    ])
}
