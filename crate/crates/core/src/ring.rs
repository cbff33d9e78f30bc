//! Exact multivariate Laurent polynomials over the integers.
//!
//! Every polynomial carries a shared [`VarSet`]. Exponent vectors have one
//! entry per variable and may be negative; terms are kept in a `BTreeMap`, so
//! the lexicographic order of exponent vectors is the canonical term order for
//! equality, hashing and serialization. Zero coefficients are never stored.
//!
//! Fractional powers of a variable are never represented directly. Callers
//! adjoin a root variable instead (for instance `q = v^n`) and substitute.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Exponents = Vec<i32>;

/// Ordered, duplicate-free list of variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Arc<VarSet>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(Arc::new(VarSet { names }))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

pub(crate) fn same_vars(a: &Arc<VarSet>, b: &Arc<VarSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn check_vars(a: &Arc<VarSet>, b: &Arc<VarSet>) -> Result<()> {
    if same_vars(a, b) {
        Ok(())
    } else {
        Err(Error::VarSetMismatch(a.names.clone(), b.names.clone()))
    }
}

#[derive(Clone, Debug)]
pub struct LaurentPoly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl Hash for LaurentPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl LaurentPoly {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        LaurentPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, 1)
    }

    pub fn constant(vars: &Arc<VarSet>, c: impl Into<BigInt>) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c.into())
    }

    /// The polynomial consisting of a single variable.
    pub fn var(vars: &Arc<VarSet>, name: &str) -> Result<Self> {
        Self::var_pow(vars, name, 1)
    }

    pub fn var_pow(vars: &Arc<VarSet>, name: &str, power: i32) -> Result<Self> {
        let idx = vars.require(name)?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = power;
        Ok(Self::monomial(vars, exps, BigInt::one()))
    }

    /// # Panics
    /// If `exps` does not have one entry per variable.
    pub fn monomial(vars: &Arc<VarSet>, exps: Exponents, coeff: BigInt) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I>(vars: &Arc<VarSet>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, BigInt)>,
    {
        let mut out = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::Malformed(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    vars.len()
                )));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigInt)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Exponents, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Whether `name` occurs in some term with a nonzero exponent.
    pub fn mentions(&self, name: &str) -> bool {
        match self.vars.index_of(name) {
            Some(i) => self.terms.keys().any(|e| e[i] != 0),
            None => false,
        }
    }

    pub(crate) fn add_term(&mut self, exps: Exponents, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_vars(&self.vars, &other.vars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_vars(&self.vars, &other.vars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_vars(&self.vars, &other.vars)?;
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Multiplies by the unit-coefficient monomial with exponent vector `shift`.
    pub fn mul_monomial(&self, shift: &[i32]) -> Self {
        debug_assert_eq!(shift.len(), self.vars.len());
        if shift.iter().all(|&s| s == 0) {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Integer power. Negative exponents are allowed only for monomials with
    /// a unit coefficient.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        if exp >= 0 {
            let mut result = Self::one(&self.vars);
            let mut base = self.clone();
            let mut e = exp as u64;
            while e > 0 {
                if e & 1 == 1 {
                    result = &result * &base;
                }
                e >>= 1;
                if e > 0 {
                    base = &base * &base;
                }
            }
            return Ok(result);
        }
        self.inverse()?.pow(-exp)
    }

    /// Inverse of a unit-coefficient monomial.
    pub fn inverse(&self) -> Result<Self> {
        match self.as_monomial() {
            Some((e, c)) if c.abs().is_one() => {
                Ok(Self::monomial(&self.vars, e.iter().map(|x| -x).collect(), c.clone()))
            }
            Some(_) => Err(Error::NotInvertible(self.to_string())),
            None if self.is_zero() => Err(Error::NotInvertible("0".into())),
            None => Err(Error::NegativePowerOfSum(self.num_terms())),
        }
    }

    /// Replaces `var` by a monomial of the same ring.
    pub fn substitute(&self, var: &str, replacement: &LaurentPoly) -> Result<Self> {
        self.substitute_many(&[(var, replacement)])
    }

    /// Simultaneous monomial substitution.
    pub fn substitute_many(&self, subs: &[(&str, &LaurentPoly)]) -> Result<Self> {
        let mut idx = Vec::with_capacity(subs.len());
        for (name, rep) in subs {
            check_vars(&self.vars, rep.vars())?;
            let i = self.vars.require(name)?;
            let (re, rc) = rep.as_monomial().ok_or_else(|| Error::NotMonomial(name.to_string()))?;
            idx.push((i, re.clone(), rc.clone()));
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            for (i, _, _) in &idx {
                ne[*i] = 0;
            }
            let mut nc = c.clone();
            for (i, re, rc) in &idx {
                let k = e[*i];
                if k == 0 {
                    continue;
                }
                for (slot, r) in ne.iter_mut().zip(re) {
                    *slot += k * r;
                }
                if k < 0 {
                    if !rc.abs().is_one() {
                        return Err(Error::NotInvertible(format!(
                            "replacement for `{}` has coefficient {rc}",
                            self.vars.names[*i]
                        )));
                    }
                    if k % 2 != 0 && rc.is_negative() {
                        nc = -nc;
                    }
                } else {
                    nc *= num_traits::pow(rc.clone(), k as usize);
                }
            }
            out.add_term(ne, nc);
        }
        Ok(out)
    }

    /// Replaces `var` by an arbitrary polynomial. Negative powers of `var`
    /// require an invertible replacement.
    pub fn bind(&self, var: &str, replacement: &LaurentPoly) -> Result<Self> {
        check_vars(&self.vars, replacement.vars())?;
        let i = self.vars.require(var)?;
        if let Some((_, c)) = replacement.as_monomial() {
            if c.abs().is_one() {
                return self.substitute(var, replacement);
            }
        }
        let mut by_power: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[i] = 0;
            by_power
                .entry(e[i])
                .or_insert_with(|| Self::zero(&self.vars))
                .add_term(ne, c.clone());
        }
        let mut out = Self::zero(&self.vars);
        for (k, part) in by_power {
            out = &out + &(&replacement.pow(k as i64)? * &part);
        }
        Ok(out)
    }

    /// Sets `var` to one.
    pub fn eval_at_one(&self, var: &str) -> Result<Self> {
        self.substitute(var, &Self::one(&self.vars))
    }

    /// Exact `d/dh` at `h = 0` of the polynomial, where `var = exp(slope * h)`
    /// near `h = 0`: returns `sum(exponent * coeff * slope)` with `var = 1`.
    pub fn derive_at_one(&self, var: &str, slope: &BigRational) -> Result<ScaledPoly> {
        let i = self.vars.require(var)?;
        let mut numer = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] = 0;
            numer.add_term(ne, c * BigInt::from(e[i]));
        }
        Ok(ScaledPoly::new(numer.scale(slope.numer()), slope.denom().clone()))
    }

    /// Exact quotient `self / divisor`; fails unless the division is exact
    /// in the Laurent ring over the integers.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        check_vars(&self.vars, &divisor.vars)?;
        if divisor.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let dmin = divisor.min_exponents();
        let amin = self.min_exponents();
        let neg = |v: &[i32]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let d = divisor.mul_monomial(&neg(&dmin));
        let mut rem = self.mul_monomial(&neg(&amin));
        let (dle, dlc) = d.terms.iter().next_back().expect("nonzero divisor");
        let mut quot = Self::zero(&self.vars);
        while let Some((re, rc)) = rem.terms.iter().next_back() {
            let shift: Exponents = re.iter().zip(dle).map(|(a, b)| a - b).collect();
            let (qc, r) = rc.div_rem(dlc);
            if shift.iter().any(|&s| s < 0) || !r.is_zero() {
                return Err(Error::NotDivisible(format!("{self} by {divisor}")));
            }
            let mut t = d.mul_monomial(&shift).scale(&qc);
            t = -t;
            rem = &rem + &t;
            quot.add_term(shift, qc);
        }
        let back: Exponents = amin.iter().zip(&dmin).map(|(a, b)| a - b).collect();
        Ok(quot.mul_monomial(&back))
    }

    fn min_exponents(&self) -> Exponents {
        let mut m = vec![i32::MAX; self.vars.len()];
        for e in self.terms.keys() {
            for (slot, x) in m.iter_mut().zip(e) {
                *slot = (*slot).min(*x);
            }
        }
        m.iter().map(|&x| if x == i32::MAX { 0 } else { x }).collect()
    }

    /// gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Parses expressions such as `q^-1*lambda`, `-q*lambda`, `q - q^-1`,
    /// `2*f1*g1 + 1`. Exponents may be written `^-1`, `^(-1)` or `^{-1}`.
    pub fn parse(vars: &Arc<VarSet>, text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let chars: Vec<char> = s.chars().collect();
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let after_caret = cur.ends_with('^') || cur.ends_with("^(") || cur.ends_with("^{");
            if (c == '+' || c == '-') && !after_caret {
                if !cur.is_empty() {
                    terms.push((negative, std::mem::take(&mut cur)));
                } else if c == '-' && i > 0 {
                    return Err(Error::Parse(format!("dangling sign in `{text}`")));
                }
                negative = c == '-';
            } else {
                cur.push(c);
            }
            i += 1;
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in `{text}`")));
        }
        terms.push((negative, cur));

        let mut out = Self::zero(vars);
        for (neg, body) in terms {
            let mut exps = vec![0; vars.len()];
            let mut coeff = BigInt::one();
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in `{text}`")));
                }
                if let Ok(k) = factor.parse::<BigInt>() {
                    coeff *= k;
                    continue;
                }
                let (name, power) = match factor.split_once('^') {
                    Some((n, p)) => {
                        let p = p.trim_start_matches(['(', '{']).trim_end_matches([')', '}']);
                        let p: i32 = p
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                        (n, p)
                    }
                    None => (factor, 1),
                };
                exps[vars.require(name)?] += power;
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(exps, coeff);
        }
        Ok(out)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("LaurentPoly add")
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("LaurentPoly sub")
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("LaurentPoly mul")
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() {
                factors.push(mag.to_string());
            }
            for (name, &x) in self.vars.names.iter().zip(e) {
                match x {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{x}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<TermJson>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.vars.names.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolyJson::deserialize(d)?;
        let vars = VarSet::new(raw.vars).map_err(D::Error::custom)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient `{}`", t.coeff)))?;
            terms.push((t.exp, c));
        }
        LaurentPoly::from_terms(&vars, terms).map_err(D::Error::custom)
    }
}

/// A Laurent polynomial divided by a positive integer, kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScaledPoly {
    numer: LaurentPoly,
    denom: BigInt,
}

impl ScaledPoly {
    pub fn new(numer: LaurentPoly, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        let (numer, denom) = if denom.is_negative() {
            (-numer, -denom)
        } else {
            (numer, denom)
        };
        if numer.is_zero() {
            return ScaledPoly {
                numer,
                denom: BigInt::one(),
            };
        }
        let g = numer.content().gcd(&denom);
        if g.is_one() {
            ScaledPoly { numer, denom }
        } else {
            let terms = numer.terms.iter().map(|(e, c)| (e.clone(), c / &g)).collect();
            ScaledPoly {
                numer: LaurentPoly {
                    vars: numer.vars.clone(),
                    terms,
                },
                denom: denom / g,
            }
        }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        ScaledPoly {
            numer: p,
            denom: BigInt::one(),
        }
    }

    pub fn from_ratio(vars: &Arc<VarSet>, r: &BigRational) -> Self {
        Self::new(LaurentPoly::constant(vars, r.numer().clone()), r.denom().clone())
    }

    pub fn zero(vars: &Arc<VarSet>) -> Self {
        Self::from_poly(LaurentPoly::zero(vars))
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.numer
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.numer.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.numer
            .as_constant()
            .map(|c| BigRational::new(c, self.denom.clone()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let a = self.numer.scale(&other.denom);
        let b = other.numer.scale(&self.denom);
        Ok(Self::new(a.checked_add(&b)?, &self.denom * &other.denom))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(
            self.numer.checked_mul(&other.numer)?,
            &self.denom * &other.denom,
        ))
    }

    pub fn neg(&self) -> Self {
        ScaledPoly {
            numer: -&self.numer,
            denom: self.denom.clone(),
        }
    }
}

impl fmt::Display for ScaledPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            write!(f, "{}", self.numer)
        } else if self.numer.num_terms() == 1 {
            write!(f, "{}/{}", self.numer, self.denom)
        } else {
            write!(f, "({})/{}", self.numer, self.denom)
        }
    }
}

impl Serialize for ScaledPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            numer: &'a LaurentPoly,
            denom: String,
        }
        Repr {
            numer: &self.numer,
            denom: self.denom.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScaledPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Repr {
            numer: LaurentPoly,
            denom: String,
        }
        let r = Repr::deserialize(d)?;
        let denom: BigInt = r.denom.parse().map_err(|_| D::Error::custom("bad denominator"))?;
        if denom.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(ScaledPoly::new(r.numer, denom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<VarSet> {
        VarSet::new(["q", "v", "lambda", "k", "p"]).unwrap()
    }

    fn p(vars: &Arc<VarSet>, s: &str) -> LaurentPoly {
        LaurentPoly::parse(vars, s).unwrap()
    }

    #[test]
    fn distributes_over_sum() {
        let r = ring();
        assert_eq!(&p(&r, "q + q^-1") * &p(&r, "q"), p(&r, "q^2 + 1"));
    }

    #[test]
    fn difference_of_squares() {
        let r = ring();
        let lambda = p(&r, "q - q^-1");
        assert_eq!(&lambda * &p(&r, "q + q^-1"), p(&r, "q^2 - q^-2"));
    }

    #[test]
    fn monomial_inverse() {
        let r = ring();
        assert_eq!(p(&r, "q").pow(-1).unwrap(), p(&r, "q^-1"));
        assert_eq!(p(&r, "-q^2*v").pow(-3).unwrap(), p(&r, "-q^-6*v^-3"));
    }

    #[test]
    fn negative_power_of_sum_is_rejected() {
        let r = ring();
        assert_eq!(p(&r, "q + 1").pow(-1), Err(Error::NegativePowerOfSum(2)));
        assert!(matches!(p(&r, "2*q").pow(-1), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn mismatched_varsets_are_rejected() {
        let a = LaurentPoly::var(&ring(), "q").unwrap();
        let other = VarSet::new(["q"]).unwrap();
        let b = LaurentPoly::var(&other, "q").unwrap();
        assert!(matches!(a.checked_add(&b), Err(Error::VarSetMismatch(..))));
        assert!(matches!(a.checked_mul(&b), Err(Error::VarSetMismatch(..))));
    }

    #[test]
    fn substitution_examples() {
        let r = ring();
        assert_eq!(
            p(&r, "q^2 - 1").substitute("q", &p(&r, "v^2")).unwrap(),
            p(&r, "v^4 - 1")
        );
        let rpq_entry = p(&r, "k - p*q*k^-1");
        let v = p(&r, "v");
        let vinv = p(&r, "v^-1");
        let got = rpq_entry
            .substitute_many(&[("k", &v), ("p", &vinv), ("q", &vinv)])
            .unwrap();
        assert_eq!(got, p(&r, "v - v^-3"));
        assert!(p(&r, "q").substitute("q", &p(&r, "v^0")).unwrap().is_one());
    }

    #[test]
    fn substitution_errors() {
        let r = ring();
        assert_eq!(
            p(&r, "q").substitute("zeta", &p(&r, "v")),
            Err(Error::UnknownVariable("zeta".into()))
        );
        assert_eq!(
            p(&r, "q").substitute("q", &p(&r, "v + 1")),
            Err(Error::NotMonomial("q".into()))
        );
    }

    #[test]
    fn bind_accepts_polynomials() {
        let r = ring();
        let got = p(&r, "q^-1*lambda").bind("lambda", &p(&r, "q - q^-1")).unwrap();
        assert_eq!(got, p(&r, "1 - q^-2"));
        assert!(p(&r, "lambda^-1").bind("lambda", &p(&r, "q - q^-1")).is_err());
    }

    #[test]
    fn derivative_examples() {
        let r = ring();
        let half = BigRational::new(1.into(), 2.into());
        let one = ScaledPoly::from_poly(LaurentPoly::one(&r));
        assert_eq!(p(&r, "v^2").derive_at_one("v", &half).unwrap(), one);
        assert_eq!(p(&r, "v - v^-1").derive_at_one("v", &half).unwrap(), one);
        assert!(p(&r, "7*k")
            .derive_at_one("v", &BigRational::new(3.into(), 5.into()))
            .unwrap()
            .is_zero());
        assert!(p(&r, "v").derive_at_one("w", &half).is_err());
    }

    #[test]
    fn derivative_keeps_fractions_exact() {
        let r = ring();
        let third = BigRational::new(1.into(), 3.into());
        let d = p(&r, "v + k*v^2").derive_at_one("v", &third).unwrap();
        assert_eq!(d.numer(), &p(&r, "1 + 2*k"));
        assert_eq!(d.denom(), &BigInt::from(3));
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let lambda = p(&r, "q - q^-1");
        let a = &(&lambda * &lambda) * &p(&r, "k*v^-2 + 3*p");
        assert_eq!(a.div_exact(&(&lambda * &lambda)).unwrap(), p(&r, "k*v^-2 + 3*p"));
        assert!(p(&r, "q + 2").div_exact(&lambda).is_err());
        assert!(p(&r, "q").div_exact(&p(&r, "2")).is_err());
        assert!(p(&r, "q").div_exact(&LaurentPoly::zero(&r)).is_err());
    }

    #[test]
    fn parse_and_display() {
        let r = ring();
        let x = p(&r, "-q*lambda + 2*k^(-2)*p - 3");
        let shown = x.to_string();
        assert_eq!(p(&r, &shown), x);
        assert_eq!(p(&r, "q^{-1}"), p(&r, "q^-1"));
        assert!(LaurentPoly::parse(&r, "q +").is_err());
        assert!(LaurentPoly::parse(&r, "zz").is_err());
    }

    #[test]
    fn json_shape() {
        let r = VarSet::new(["q"]).unwrap();
        let x = p(&r, "q^-1 + 12345678901234567890123");
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(
            js,
            r#"{"vars":["q"],"terms":[{"exp":[-1],"coeff":"1"},{"exp":[0],"coeff":"12345678901234567890123"}]}"#
        );
        let back: LaurentPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn json_rejects_bad_exponent_length() {
        let js = r#"{"vars":["q","v"],"terms":[{"exp":[1],"coeff":"1"}]}"#;
        assert!(serde_json::from_str::<LaurentPoly>(js).is_err());
    }

    #[test]
    fn duplicate_variable_names() {
        assert_eq!(VarSet::new(["q", "q"]), Err(Error::DuplicateVariable("q".into())));
    }
}
