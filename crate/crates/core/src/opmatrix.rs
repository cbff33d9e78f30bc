//! Matrices whose entries are noncommutative algebra elements.
//!
//! The entry type is abstracted by [`NcEntry`] so the same code computes RTT
//! residuals for abstract normal-form elements, for their images in a matrix
//! representation, and for classical-limit elements. Products always keep
//! the order of factors.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::LaurentPoly;
use crate::rmatrix::{RMatrix, ScalarMatrix};
use crate::slotalg::AlgebraElement;

/// A (possibly noncommutative) ring element usable as a matrix entry.
///
/// Zero and one are produced from an existing element so that the entry can
/// carry its own context (signature, representation size).
pub trait NcEntry: Clone + PartialEq + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Whether the two elements live in the same algebra.
    fn compatible(&self, other: &Self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &LaurentPoly) -> Self;
    fn is_zero(&self) -> bool;
    fn try_invert(&self) -> Option<Self>;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl NcEntry for AlgebraElement {
    fn zero_like(&self) -> Self {
        AlgebraElement::zero(self.signature())
    }

    fn one_like(&self) -> Self {
        AlgebraElement::one(self.signature())
    }

    fn compatible(&self, other: &Self) -> bool {
        self.checked_add(&other.zero_like()).is_ok() && other.checked_add(&self.zero_like()).is_ok()
    }

    fn add(&self, other: &Self) -> Self {
        self.add_unchecked(other)
    }

    fn mul(&self, other: &Self) -> Self {
        self.mul_unchecked(other)
    }

    fn neg(&self) -> Self {
        AlgebraElement::neg(self)
    }

    fn scale(&self, c: &LaurentPoly) -> Self {
        AlgebraElement::scale(self, c)
    }

    fn is_zero(&self) -> bool {
        AlgebraElement::is_zero(self)
    }

    fn try_invert(&self) -> Option<Self> {
        self.invert().ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpMatrix<E = AlgebraElement> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

/// Lower or upper triangular shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Upper,
    Lower,
}

impl<E: NcEntry> OpMatrix<E> {
    /// Row-major construction; all entries must share one algebra.
    pub fn new(rows: usize, cols: usize, entries: Vec<E>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.compatible(&entries[0])) {
            return Err(Error::Malformed("matrix entries from different algebras".into()));
        }
        Ok(OpMatrix { rows, cols, entries })
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> E,
    {
        let entries = (0..rows * cols).map(|p| f(p / cols, p % cols)).collect();
        Self::new(rows, cols, entries)
    }

    pub fn identity(proto: &E, n: usize) -> Self {
        let (zero, one) = (proto.zero_like(), proto.one_like());
        let entries = (0..n * n)
            .map(|p| if p / n == p % n { one.clone() } else { zero.clone() })
            .collect();
        OpMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: E) -> Result<()> {
        if !e.compatible(&self.entries[0]) {
            return Err(Error::Malformed("entry from a different algebra".into()));
        }
        self.entries[i * self.cols + j] = e;
        Ok(())
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    fn proto(&self) -> &E {
        &self.entries[0]
    }

    fn check_same_algebra(&self, other: &Self) -> Result<()> {
        if self.proto().compatible(other.proto()) {
            Ok(())
        } else {
            Err(Error::Malformed("matrices over different algebras".into()))
        }
    }

    pub fn map<F>(&self, f: F) -> Result<Self>
    where
        F: FnMut(&E) -> E,
    {
        Self::new(self.rows, self.cols, self.entries.iter().map(f).collect())
    }

    pub fn try_map<F>(&self, f: F) -> Result<Self>
    where
        F: FnMut(&E) -> Result<E>,
    {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    /// Ordinary row-by-column product; entries of `self` stay on the left.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_same_algebra(other)?;
        let zero = self.proto().zero_like();
        let entries: Vec<E> = (0..self.rows * other.cols)
            .into_par_iter()
            .map(|p| {
                let (i, j) = (p / other.cols, p % other.cols);
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                acc
            })
            .collect();
        Ok(OpMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        self.check_same_algebra(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        Ok(OpMatrix { entries, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        OpMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(NcEntry::neg).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.rows * self.cols)
            .map(|p| self.get(p % self.rows, p / self.rows).clone())
            .collect();
        OpMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// `S * self` for a scalar matrix `S`.
    pub fn scalar_left(&self, s: &ScalarMatrix) -> Result<Self> {
        if s.cols() != self.rows {
            return Err(Error::DimensionMismatch("scalar * matrix".into()));
        }
        let zero = self.proto().zero_like();
        let entries = (0..s.rows() * self.cols)
            .map(|p| {
                let (i, j) = (p / self.cols, p % self.cols);
                (0..self.rows).fold(zero.clone(), |acc, k| {
                    let c = s.get(i, k);
                    if c.is_zero() {
                        acc
                    } else {
                        acc.add(&self.get(k, j).scale(c))
                    }
                })
            })
            .collect();
        Ok(OpMatrix {
            rows: s.rows(),
            cols: self.cols,
            entries,
        })
    }

    /// `self * S` for a scalar matrix `S`.
    pub fn scalar_right(&self, s: &ScalarMatrix) -> Result<Self> {
        if self.cols != s.rows() {
            return Err(Error::DimensionMismatch("matrix * scalar".into()));
        }
        let zero = self.proto().zero_like();
        let entries = (0..self.rows * s.cols())
            .map(|p| {
                let (i, j) = (p / s.cols(), p % s.cols());
                (0..self.cols).fold(zero.clone(), |acc, k| {
                    let c = s.get(k, j);
                    if c.is_zero() {
                        acc
                    } else {
                        acc.add(&self.get(i, k).scale(c))
                    }
                })
            })
            .collect();
        Ok(OpMatrix {
            rows: self.rows,
            cols: s.cols(),
            entries,
        })
    }

    /// `self ⊗ 1_m`: entry `((i,k),(j,l))` is `t_ij δ_kl`.
    pub fn kron_identity_right(&self, m: usize) -> Self {
        let zero = self.proto().zero_like();
        let (rows, cols) = (self.rows * m, self.cols * m);
        let entries = (0..rows * cols)
            .map(|p| {
                let (r, c) = (p / cols, p % cols);
                if r % m == c % m {
                    self.get(r / m, c / m).clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        OpMatrix { rows, cols, entries }
    }

    /// `1_m ⊗ self`: entry `((i,k),(j,l))` is `δ_ij t_kl`.
    pub fn kron_identity_left(&self, m: usize) -> Self {
        let zero = self.proto().zero_like();
        let (rows, cols) = (self.rows * m, self.cols * m);
        let entries = (0..rows * cols)
            .map(|p| {
                let (r, c) = (p / cols, p % cols);
                let (i, k) = (r / self.rows, r % self.rows);
                let (j, l) = (c / self.cols, c % self.cols);
                if i == j {
                    self.get(k, l).clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        OpMatrix { rows, cols, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(NcEntry::is_zero)
    }

    /// Row-major position of the first nonzero entry.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.entries
            .iter()
            .position(|e| !e.is_zero())
            .map(|p| (p / self.cols, p % self.cols))
    }

    pub fn diagonal(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("diagonal of a non-square matrix".into()));
        }
        let zero = self.proto().zero_like();
        let n = self.rows;
        let entries = (0..n * n)
            .map(|p| {
                if p / n == p % n {
                    self.get(p / n, p / n).clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        Ok(OpMatrix {
            rows: n,
            cols: n,
            entries,
        })
    }

    pub fn has_shape(&self, shape: Shape) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let outside = match shape {
                    Shape::Upper => i > j,
                    Shape::Lower => i < j,
                };
                !outside || self.get(i, j).is_zero()
            })
        })
    }

    /// Exact inverse of a triangular matrix with invertible diagonal:
    /// `T = D (1 + N)` with `N` nilpotent, so `T^-1 = (sum (-N)^k) D^-1`.
    pub fn triangular_inverse(&self, shape: Shape) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        if !self.has_shape(shape) {
            return Err(Error::Malformed(format!("matrix is not {shape:?} triangular")));
        }
        let n = self.rows;
        let dinv_entries: Vec<E> = (0..n)
            .map(|i| {
                self.get(i, i)
                    .try_invert()
                    .ok_or_else(|| Error::NotInvertible(format!("diagonal entry {i}: {}", self.get(i, i))))
            })
            .collect::<Result<_>>()?;
        let zero = self.proto().zero_like();
        let dinv = Self::from_fn(n, n, |i, j| if i == j { dinv_entries[i].clone() } else { zero.clone() })?;
        let id = Self::identity(self.proto(), n);
        let minus_n = id.sub(&dinv.matmul(self)?)?;
        let mut sum = id.clone();
        let mut power = id;
        for _ in 1..n {
            power = power.matmul(&minus_n)?;
            sum = sum.add(&power)?;
        }
        sum.matmul(&dinv)
    }

    /// `det_q T = sum_σ (-q)^{inv(σ)} t_{0σ(0)} ... t_{n-1,σ(n-1)}`, rows ascending.
    pub fn qdet(&self, q: &LaurentPoly) -> Result<E> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "quantum determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let minus_q = -q;
        let mut acc = self.proto().zero_like();
        for perm in (0..n).permutations(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            let mut prod = self.proto().one_like();
            for (row, &col) in perm.iter().enumerate() {
                prod = prod.mul(self.get(row, col));
                if prod.is_zero() {
                    break;
                }
            }
            if prod.is_zero() {
                continue;
            }
            acc = acc.add(&prod.scale(&minus_q.pow(inversions as i64)?));
        }
        Ok(acc)
    }
}

/// `R_left · A_1 · B_2 - B_2 · A_1 · R_right`, an `n^2 x n^2` matrix.
pub fn cross_residual<E: NcEntry>(
    r_left: &ScalarMatrix,
    a: &OpMatrix<E>,
    b: &OpMatrix<E>,
    r_right: &ScalarMatrix,
) -> Result<OpMatrix<E>> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n || b.cols() != n {
        return Err(Error::DimensionMismatch(
            "cross relation needs equal square matrices".into(),
        ));
    }
    for r in [r_left, r_right] {
        if r.rows() != n * n || r.cols() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} scalar matrix against n = {n}",
                r.rows(),
                r.cols()
            )));
        }
    }
    let a1 = a.kron_identity_right(n);
    let b2 = b.kron_identity_left(n);
    let lhs = a1.matmul(&b2)?.scalar_left(r_left)?;
    let rhs = b2.matmul(&a1)?.scalar_right(r_right)?;
    lhs.sub(&rhs)
}

/// `R T_1 T_2 - T_2 T_1 R`; zero iff `T` satisfies the RTT relations.
pub fn rtt_residual<E: NcEntry>(r: &RMatrix, t: &OpMatrix<E>) -> Result<OpMatrix<E>> {
    if r.n != t.rows() {
        return Err(Error::DimensionMismatch(format!(
            "R for n = {} against a {}x{} matrix",
            r.n,
            t.rows(),
            t.cols()
        )));
    }
    cross_residual(&r.matrix, t, t, &r.matrix)
}

impl OpMatrix<AlgebraElement> {
    /// Union of slot supports of all entries.
    pub fn support(&self) -> std::collections::BTreeSet<usize> {
        self.entries.iter().flat_map(|e| e.support()).collect()
    }

    /// `T^- (⊗) T^+`: matrix product whose factors live on disjoint slots,
    /// so that entries of the two factors commute.
    pub fn gauss_product(tminus: &Self, tplus: &Self) -> Result<Self> {
        let overlap: Vec<usize> = tminus.support().intersection(&tplus.support()).copied().collect();
        if !overlap.is_empty() {
            return Err(Error::SlotOverlap(overlap));
        }
        tminus.matmul(tplus)
    }
}

impl<E: Serialize> Serialize for OpMatrix<E> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a, E> {
            rows: usize,
            cols: usize,
            entries: Vec<&'a [E]>,
        }
        Repr {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.chunks(self.cols).collect(),
        }
        .serialize(s)
    }
}
