//! Chevalley data for `sl(n)`: Cartan matrix, the balanced Cartan elements
//! `H~_i`, the adjoint-action exponents of the torus elements `K_i = q^{H~_i}`,
//! and the fundamental (defining) representation.
//!
//! Indices are zero-based throughout: simple roots `j in 0..n-1`, torus
//! elements `m in 0..n` (the last one, `K_{n}`, is the inverse product of the
//! others).

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChevalleyData {
    pub n: usize,
    /// `(n-1) x (n-1)`, `A_ij = 2(a_i,a_j)/(a_j,a_j)`.
    pub cartan: Vec<Vec<i32>>,
    /// Row `m` expresses `H~_m = sum_k c_mk H_k`; `n` rows of length `n-1`.
    pub htilde: Vec<Vec<Rational64>>,
    /// `ad_plus[m][j]` is the exponent `e` in `Ad K_m (X_j+) = q^e X_j+`.
    pub ad_plus: Vec<Vec<i32>>,
}

impl ChevalleyData {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        let r = n - 1;
        let cartan: Vec<Vec<i32>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let htilde = htilde_coefficients(n);
        let mut ad_plus = vec![vec![0; r]; n];
        for (m, row) in htilde.iter().enumerate() {
            for j in 0..r {
                let e: Rational64 = (0..r)
                    .map(|k| row[k] * Rational64::from_integer(cartan[k][j] as i64))
                    .sum();
                if !e.is_integer() {
                    return Err(Error::Malformed(format!(
                        "adjoint exponent ({m},{j}) = {e} is not integral"
                    )));
                }
                ad_plus[m][j] = e.to_integer() as i32;
            }
        }
        Ok(ChevalleyData {
            n,
            cartan,
            htilde,
            ad_plus,
        })
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// Exponent of `q` in `Ad K_m (X_j^{sign})`.
    pub fn ad_exponent(&self, m: usize, j: usize, positive: bool) -> i32 {
        let e = self.ad_plus[m][j];
        if positive {
            e
        } else {
            -e
        }
    }
}

/// `H~_i = (1/n) (sum_{k>=i} (n-k) H_k - sum_{k<i} k H_k)` with one-based `k`.
fn htilde_coefficients(n: usize) -> Vec<Vec<Rational64>> {
    let nn = n as i64;
    (1..=n)
        .map(|i| {
            (1..n)
                .map(|k| {
                    let k64 = k as i64;
                    let num = if k >= i { nn - k64 } else { -k64 };
                    Rational64::new(num, nn)
                })
                .collect()
        })
        .collect()
}

pub type RatMatrix = Vec<Vec<Rational64>>;

pub fn rat_zero(n: usize) -> RatMatrix {
    vec![vec![Rational64::zero(); n]; n]
}

pub fn rat_identity(n: usize) -> RatMatrix {
    let mut m = rat_zero(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational64::one();
    }
    m
}

pub fn rat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.len();
    let mut out = rat_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn rat_lin(a: &RatMatrix, x: Rational64, b: &RatMatrix, y: Rational64) -> RatMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(u, w)| *u * x + *w * y).collect())
        .collect()
}

pub fn rat_commutator(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    rat_lin(&rat_mul(a, b), Rational64::one(), &rat_mul(b, a), -Rational64::one())
}

pub fn rat_is_zero(a: &RatMatrix) -> bool {
    a.iter().flatten().all(Zero::is_zero)
}

/// The `n`-dimensional representation of `sl(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct FundamentalRep {
    pub n: usize,
    pub x_plus: Vec<RatMatrix>,
    pub x_minus: Vec<RatMatrix>,
    pub h: Vec<RatMatrix>,
    pub htilde: Vec<RatMatrix>,
    /// `K_m = diag(v^{k_exps[m][i]})` with `q = v^n`.
    pub k_exps: Vec<Vec<i32>>,
}

impl FundamentalRep {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        let unit = |i: usize, j: usize| {
            let mut m = rat_zero(n);
            m[i][j] = Rational64::one();
            m
        };
        let x_plus = (0..n - 1).map(|i| unit(i, i + 1)).collect();
        let x_minus = (0..n - 1).map(|i| unit(i + 1, i)).collect();
        let h = (0..n - 1)
            .map(|i| rat_lin(&unit(i, i), Rational64::one(), &unit(i + 1, i + 1), -Rational64::one()))
            .collect();
        let htilde = (0..n)
            .map(|m| {
                rat_lin(
                    &unit(m, m),
                    Rational64::one(),
                    &rat_identity(n),
                    -Rational64::new(1, n as i64),
                )
            })
            .collect();
        let k_exps = (0..n)
            .map(|m| (0..n).map(|i| if i == m { n as i32 - 1 } else { -1 }).collect())
            .collect();
        Ok(FundamentalRep {
            n,
            x_plus,
            x_minus,
            h,
            htilde,
            k_exps,
        })
    }

    /// Root-of-`q` adjunction used by this representation: `q = v^root()`.
    pub fn root(&self) -> i32 {
        self.n as i32
    }
}
