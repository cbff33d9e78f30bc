//! Scalar matrices over Laurent polynomials and the catalog of R-matrices.
//!
//! Tensor-index convention: the composite index `(i, k)` of `V ⊗ V` is
//! `i * n + k`, so the first tensor factor varies slowest. `A_1 = A ⊗ 1` and
//! `A_2 = 1 ⊗ A` follow the same convention everywhere in the crate.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{same_vars, LaurentPoly, VarSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    vars: Arc<VarSet>,
    entries: Vec<LaurentPoly>,
}

impl ScalarMatrix {
    pub fn zeros(vars: &Arc<VarSet>, rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            rows,
            cols,
            vars: vars.clone(),
            entries: vec![LaurentPoly::zero(vars); rows * cols],
        }
    }

    pub fn identity(vars: &Arc<VarSet>, n: usize) -> Self {
        let mut m = Self::zeros(vars, n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(vars));
        }
        m
    }

    pub fn from_fn<F>(vars: &Arc<VarSet>, rows: usize, cols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> LaurentPoly,
    {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(same_vars(e.vars(), vars), "entry ring");
                entries.push(e);
            }
        }
        ScalarMatrix {
            rows,
            cols,
            vars: vars.clone(),
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !same_vars(&self.vars, &other.vars) {
            return Err(Error::VarSetMismatch(
                self.vars.names().to_vec(),
                other.vars.names().to_vec(),
            ));
        }
        let mut out = Self::zeros(&self.vars, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScalarMatrix {
            entries,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        ScalarMatrix {
            entries: self.entries.iter().map(|e| e * c).collect(),
            ..self.clone()
        }
    }

    /// Kronecker product, first factor slowest.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(&self.vars, rows, cols, |r, c| {
            let (i, k) = (r / other.rows, r % other.rows);
            let (j, l) = (c / other.cols, c % other.cols);
            self.get(i, j) * other.get(k, l)
        })
    }

    pub fn map<F>(&self, f: F) -> Result<Self>
    where
        F: FnMut(&LaurentPoly) -> Result<LaurentPoly>,
    {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(ScalarMatrix {
            entries,
            ..self.clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.entries
            .iter()
            .position(|e| !e.is_zero())
            .map(|p| (p / self.cols, p % self.cols))
    }

    pub fn diagonal_part(&self) -> Self {
        Self::from_fn(&self.vars, self.rows, self.cols, |i, j| {
            if i == j {
                self.get(i, j).clone()
            } else {
                LaurentPoly::zero(&self.vars)
            }
        })
    }

    /// Whether `self == c * other` for some monomial `c`,
    /// returning `c`.
    pub fn monomial_ratio(&self, other: &Self) -> Option<LaurentPoly> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return None;
        }
        let (i, j) = other.first_nonzero()?;
        let c = self.get(i, j).div_exact(other.get(i, j)).ok()?;
        c.as_monomial()?;
        (self == &other.scale(&c)).then_some(c)
    }
}

impl Serialize for ScalarMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let grid: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        #[derive(Serialize)]
        struct Repr<'a> {
            vars: &'a [String],
            rows: usize,
            cols: usize,
            entries: Vec<Vec<String>>,
        }
        Repr {
            vars: self.vars.names(),
            rows: self.rows,
            cols: self.cols,
            entries: grid,
        }
        .serialize(s)
    }
}

/// Where the `lambda` block of the standard R-matrix sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaBlock {
    /// `lambda * sum_{i>j} e_ij ⊗ e_ji`
    Lower,
    /// `lambda * sum_{i<j} e_ij ⊗ e_ji`
    Upper,
}

/// An `n^2 x n^2` solution of the Yang-Baxter equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RMatrix {
    pub name: String,
    pub n: usize,
    pub matrix: ScalarMatrix,
}

impl RMatrix {
    pub fn vars(&self) -> &Arc<VarSet> {
        self.matrix.vars()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        self.matrix.get(i, j)
    }

    /// Standard one-parameter R-matrix with `lambda = q - q^-1` and the
    /// `lambda` block below the diagonal (the calibrated convention).
    pub fn standard(n: usize, vars: &Arc<VarSet>) -> Result<Self> {
        Self::standard_with(n, vars, LambdaBlock::Lower)
    }

    /// `q sum e_ii⊗e_ii + sum_{i!=j} e_ii⊗e_jj + lambda sum_{block} e_ij⊗e_ji`.
    pub fn standard_with(n: usize, vars: &Arc<VarSet>, block: LambdaBlock) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        let q = LaurentPoly::var(vars, "q")?;
        let lambda = &q - &q.inverse()?;
        let m = ScalarMatrix::from_fn(vars, n * n, n * n, |r, c| {
            let (i, k) = (r / n, r % n);
            let (j, l) = (c / n, c % n);
            if i == j && k == l {
                if i == k {
                    q.clone()
                } else {
                    LaurentPoly::one(vars)
                }
            } else if j == k && l == i && i != k {
                let lower = i > k;
                if lower == (block == LambdaBlock::Lower) {
                    lambda.clone()
                } else {
                    LaurentPoly::zero(vars)
                }
            } else {
                LaurentPoly::zero(vars)
            }
        });
        Ok(RMatrix {
            name: "sl_q".into(),
            n,
            matrix: m,
        })
    }

    /// Two-parameter `GL_{p,q}(2)` R-matrix over variables `k`, `p`, `q`.
    pub fn two_parameter(vars: &Arc<VarSet>) -> Result<Self> {
        let k = LaurentPoly::var(vars, "k")?;
        let p = LaurentPoly::var(vars, "p")?;
        let q = LaurentPoly::var(vars, "q")?;
        let z = LaurentPoly::zero(vars);
        let off = &k - &(&(&p * &q) * &k.inverse()?);
        let rows = [
            [k.clone(), z.clone(), z.clone(), z.clone()],
            [z.clone(), p.clone(), z.clone(), z.clone()],
            [z.clone(), off, q.clone(), z.clone()],
            [z.clone(), z.clone(), z.clone(), k.clone()],
        ];
        Ok(RMatrix {
            name: "gl_pq_2".into(),
            n: 2,
            matrix: ScalarMatrix::from_fn(vars, 4, 4, |i, j| rows[i][j].clone()),
        })
    }

    /// Tensor flip `P(x ⊗ y) = y ⊗ x` on `V ⊗ V`.
    pub fn permutation(n: usize, vars: &Arc<VarSet>) -> ScalarMatrix {
        ScalarMatrix::from_fn(vars, n * n, n * n, |r, c| {
            let (i, k) = (r / n, r % n);
            if c == k * n + i {
                LaurentPoly::one(vars)
            } else {
                LaurentPoly::zero(vars)
            }
        })
    }

    /// `(R_d, P, R_plus = P R P)`.
    pub fn derived_parts(&self) -> Result<(RMatrix, ScalarMatrix, RMatrix)> {
        let p = Self::permutation(self.n, self.vars());
        let r_plus = p.matmul(&self.matrix)?.matmul(&p)?;
        Ok((
            RMatrix {
                name: format!("{}_diag", self.name),
                n: self.n,
                matrix: self.matrix.diagonal_part(),
            },
            p,
            RMatrix {
                name: format!("{}_plus", self.name),
                n: self.n,
                matrix: r_plus,
            },
        ))
    }

    /// `R12 R13 R23 - R23 R13 R12` on `V^{⊗3}`.
    pub fn yang_baxter_residual(&self) -> Result<ScalarMatrix> {
        let n = self.n;
        let vars = self.vars();
        let id = ScalarMatrix::identity(vars, n);
        let r12 = self.matrix.kron(&id);
        let r23 = id.kron(&self.matrix);
        let p23 = id.kron(&Self::permutation(n, vars));
        let r13 = p23.matmul(&r12)?.matmul(&p23)?;
        let lhs = r12.matmul(&r13)?.matmul(&r23)?;
        let rhs = r23.matmul(&r13)?.matmul(&r12)?;
        lhs.sub(&rhs)
    }

    pub fn with_matrix(&self, name: &str, matrix: ScalarMatrix) -> RMatrix {
        RMatrix {
            name: name.into(),
            n: self.n,
            matrix,
        }
    }
}
