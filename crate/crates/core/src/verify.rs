//! Relation checks with exact residuals and machine-readable reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::FundamentalRep;
use crate::error::{Error, Result};
use crate::jimbo::{
    assemble_t, build_dual_sl2, build_glpq2, diagonal_product, Bindings, GaussTriple, SlAlgebra, LAMBDA,
};
use crate::matrixrep::{evaluate_matrix, KronOrder, RepImages};
use crate::opmatrix::{cross_residual, rtt_residual, NcEntry, OpMatrix, Shape};
use crate::ring::LaurentPoly;
use crate::rmatrix::{RMatrix, ScalarMatrix};
use crate::slotalg::AlgebraElement;

/// First nonzero entry of a residual, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualLocation {
    pub row: usize,
    pub col: usize,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationResult {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_nonzero: Option<ResidualLocation>,
    /// Reported for context only; does not affect the verdict.
    #[serde(default)]
    pub informational: bool,
}

impl RelationResult {
    pub fn from_residual<E: NcEntry>(name: impl Into<String>, residual: &OpMatrix<E>) -> Self {
        let first_nonzero = residual.first_nonzero().map(|(row, col)| ResidualLocation {
            row,
            col,
            residual: residual.get(row, col).to_string(),
        });
        RelationResult {
            name: name.into(),
            holds: first_nonzero.is_none(),
            first_nonzero,
            informational: false,
        }
    }

    pub fn from_difference<E: NcEntry>(name: impl Into<String>, lhs: &E, rhs: &E) -> Self {
        let d = lhs.sub(rhs);
        let zero = d.is_zero();
        RelationResult {
            name: name.into(),
            holds: zero,
            first_nonzero: (!zero).then(|| ResidualLocation {
                row: 0,
                col: 0,
                residual: d.to_string(),
            }),
            informational: false,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub group: String,
    pub n: usize,
    pub bindings: BTreeMap<String, String>,
    pub relations: Vec<RelationResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_us: Option<u64>,
    pub pass: bool,
}

impl VerificationReport {
    fn new(check: CheckKind, subject: &Subject, relations: Vec<RelationResult>, notes: Vec<String>) -> Self {
        let pass = relations.iter().all(|r| r.holds || r.informational);
        VerificationReport {
            check: check.to_string(),
            group: subject.group.to_string(),
            n: subject.n,
            bindings: subject.bindings.to_strings(),
            relations,
            notes,
            wall_time_us: None,
            pass,
        }
    }

    /// First failing relation that counts toward the verdict.
    pub fn first_failure(&self) -> Option<&RelationResult> {
        self.relations.iter().find(|r| !r.holds && !r.informational)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationResult> {
        self.relations.iter().find(|r| r.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Rtt,
    Gauss,
    Serre,
    Qdet,
    Inverse,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::Rtt,
        CheckKind::Gauss,
        CheckKind::Serre,
        CheckKind::Qdet,
        CheckKind::Inverse,
    ];

    /// Parses a comma-separated list; `all` expands to every check.
    pub fn parse_list(text: &str) -> Result<Vec<CheckKind>> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if part == "all" {
                out.extend(Self::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::Parse("empty check list".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rtt" => Ok(CheckKind::Rtt),
            "gauss" => Ok(CheckKind::Gauss),
            "serre" => Ok(CheckKind::Serre),
            "qdet" => Ok(CheckKind::Qdet),
            "inverse" => Ok(CheckKind::Inverse),
            other => Err(Error::Parse(format!("unknown check `{other}`"))),
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckKind::Rtt => "rtt",
            CheckKind::Gauss => "gauss",
            CheckKind::Serre => "serre",
            CheckKind::Qdet => "qdet",
            CheckKind::Inverse => "inverse",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    #[serde(rename = "sl_q")]
    SlQ,
    #[serde(rename = "gl_pq_2")]
    GlPq2,
    #[serde(rename = "dual_sl2")]
    DualSl2,
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sl_q" => Ok(Group::SlQ),
            "gl_pq_2" => Ok(Group::GlPq2),
            "dual_sl2" => Ok(Group::DualSl2),
            other => Err(Error::Parse(format!("unknown group `{other}`"))),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::SlQ => "sl_q",
            Group::GlPq2 => "gl_pq_2",
            Group::DualSl2 => "dual_sl2",
        })
    }
}

/// Which matrix a perturbation edits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbTarget {
    /// The assembled `T`.
    Assembled,
    /// The upper factor `T^+`.
    Plus,
    /// The lower factor `T^-`.
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbKind {
    /// Multiply the entry by `q`.
    Scale,
    /// Add the unit element to the entry.
    Shift,
    /// Replace every free constant `c` by `c + 1` inside the entry.
    Bump,
}

/// Single-entry edit used as a negative control. Written `t12`, `t12+`,
/// `t21-`, optionally followed by `:scale`, `:shift` or `:bump`; indices are
/// one-based single digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    pub target: PerturbTarget,
    pub row: usize,
    pub col: usize,
    pub kind: PerturbKind,
}

impl FromStr for Perturbation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad perturbation `{s}` (expected e.g. t12, t21-:shift)"));
        let (head, kind) = match s.split_once(':') {
            None => (s, PerturbKind::Scale),
            Some((h, "scale")) => (h, PerturbKind::Scale),
            Some((h, "shift")) => (h, PerturbKind::Shift),
            Some((h, "bump")) => (h, PerturbKind::Bump),
            Some(_) => return Err(bad()),
        };
        let rest = head.strip_prefix('t').ok_or_else(bad)?;
        let (digits, target) = match rest.strip_suffix('+') {
            Some(d) => (d, PerturbTarget::Plus),
            None => match rest.strip_suffix('-') {
                Some(d) => (d, PerturbTarget::Minus),
                None => (rest, PerturbTarget::Assembled),
            },
        };
        let ds: Vec<usize> = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        match ds[..] {
            [i, j] if i >= 1 && j >= 1 => Ok(Perturbation {
                target,
                row: i - 1,
                col: j - 1,
                kind,
            }),
            _ => Err(bad()),
        }
    }
}

impl Perturbation {
    pub fn apply(&self, t: &OpMatrix) -> Result<OpMatrix> {
        if self.row >= t.rows() || self.col >= t.cols() {
            return Err(Error::DimensionMismatch(format!(
                "perturbation at ({}, {}) outside a {}x{} matrix",
                self.row + 1,
                self.col + 1,
                t.rows(),
                t.cols()
            )));
        }
        let x = t.get(self.row, self.col);
        let vars = x.signature().vars().clone();
        let edited = match self.kind {
            PerturbKind::Scale => x.scale(&LaurentPoly::var(&vars, "q")?),
            PerturbKind::Shift => x.checked_add(&AlgebraElement::one(x.signature()))?,
            PerturbKind::Bump => {
                let mut b = Bindings::new();
                for name in vars.names() {
                    if name.starts_with('f') || name.starts_with('g') || name.starts_with("c_") {
                        let p = LaurentPoly::var(&vars, name)?;
                        b.insert(name, &p + &LaurentPoly::one(&vars))?;
                    }
                }
                b.apply_element(x)?
            }
        };
        let mut out = t.clone();
        out.set(self.row, self.col, edited)?;
        Ok(out)
    }
}

/// Everything a check needs: the realization, its R-matrix and, for
/// `SL_q(n)`, the Gauss factors.
#[derive(Debug, Clone)]
pub struct Subject {
    pub group: Group,
    pub n: usize,
    pub bindings: Bindings,
    pub r: RMatrix,
    pub t: OpMatrix,
    pub sl: Option<SlAlgebra>,
    pub triple: Option<GaussTriple>,
}

impl Subject {
    /// `SL_q(n)` built from the first off-diagonal generators through the
    /// commutator ladder with the given `lambda` (default `q - q^-1`).
    /// `raw` maps variable names to expressions; `f`/`g` bind every `f_i`/`g_i`.
    pub fn sl_q(n: usize, raw: &BTreeMap<String, String>) -> Result<Self> {
        let sl = SlAlgebra::new(n)?;
        let vars = sl.vars().clone();
        let mut bindings = Bindings::new();
        let mut lambda = sl.lambda_default();
        for (name, text) in raw {
            let value = LaurentPoly::parse(&vars, text)?;
            match name.as_str() {
                "f" | "g" => {
                    for i in 1..n {
                        bindings.insert(&format!("{name}{i}"), value.clone())?;
                    }
                }
                LAMBDA => lambda = value,
                _ => bindings.insert(name, value)?,
            }
        }
        if lambda != LaurentPoly::var(&vars, LAMBDA)? {
            bindings.insert(LAMBDA, lambda.clone())?;
        }
        let triple = sl
            .ladder_reconstruct(&sl.delta_generators(), &lambda)?
            .bind(&bindings)?;
        let t = assemble_t(&triple)?;
        let r = RMatrix::standard(n, &vars)?;
        Ok(Subject {
            group: Group::SlQ,
            n,
            bindings,
            r,
            t,
            sl: Some(sl),
            triple: Some(triple),
        })
    }

    pub fn glpq2(raw: &BTreeMap<String, String>) -> Result<Self> {
        let g = build_glpq2()?;
        let vars = g.signature.vars().clone();
        let bindings = parse_bindings(&vars, raw)?;
        Ok(Subject {
            group: Group::GlPq2,
            n: 2,
            t: bindings.apply_matrix(&g.t)?,
            r: RMatrix::two_parameter(&vars)?,
            bindings,
            sl: None,
            triple: None,
        })
    }

    pub fn dual_sl2(raw: &BTreeMap<String, String>) -> Result<Self> {
        let d = build_dual_sl2()?;
        let vars = d.signature.vars().clone();
        let bindings = parse_bindings(&vars, raw)?;
        Ok(Subject {
            group: Group::DualSl2,
            n: 2,
            t: bindings.apply_matrix(&d.t)?,
            r: RMatrix::standard(2, &vars)?,
            bindings,
            sl: None,
            triple: None,
        })
    }

    pub fn build(group: Group, n: usize, raw: &BTreeMap<String, String>) -> Result<Self> {
        match group {
            Group::SlQ => Self::sl_q(n, raw),
            Group::GlPq2 | Group::DualSl2 if n != 2 => Err(Error::InvalidRank(n)),
            Group::GlPq2 => Self::glpq2(raw),
            Group::DualSl2 => Self::dual_sl2(raw),
        }
    }

    /// Applies a single-entry edit. Edits of `T^±` re-assemble `T`.
    pub fn perturbed(&self, p: &Perturbation) -> Result<Self> {
        let mut out = self.clone();
        match p.target {
            PerturbTarget::Assembled => out.t = p.apply(&self.t)?,
            PerturbTarget::Plus | PerturbTarget::Minus => {
                let triple = out
                    .triple
                    .as_mut()
                    .ok_or_else(|| Error::Unsupported(format!("{} has no Gauss factors", self.group)))?;
                if p.target == PerturbTarget::Plus {
                    triple.t_plus = p.apply(&triple.t_plus)?;
                } else {
                    triple.t_minus = p.apply(&triple.t_minus)?;
                }
                out.t = assemble_t(triple)?;
            }
        }
        Ok(out)
    }

    fn triple(&self, check: CheckKind) -> Result<(&SlAlgebra, &GaussTriple)> {
        match (&self.sl, &self.triple) {
            (Some(sl), Some(t)) => Ok((sl, t)),
            _ => Err(Error::Unsupported(format!("check `{check}` for {}", self.group))),
        }
    }
}

fn parse_bindings(vars: &std::sync::Arc<crate::ring::VarSet>, raw: &BTreeMap<String, String>) -> Result<Bindings> {
    let mut b = Bindings::new();
    for (name, text) in raw {
        b.insert(name, LaurentPoly::parse(vars, text)?)?;
    }
    Ok(b)
}

/// `R T_1 T_2 = T_2 T_1 R`, abstractly and, for `SL_q(n)` with `n <= 3`,
/// again in the fundamental representation.
pub fn check_rtt(subject: &Subject) -> Result<VerificationReport> {
    let mut relations = vec![RelationResult::from_residual(
        "rtt",
        &rtt_residual(&subject.r, &subject.t)?,
    )];
    let mut notes = vec![format!("R = {}", subject.r.name)];
    if let Some(sl) = subject.sl.as_ref().filter(|sl| sl.n() <= 3) {
        let rep = FundamentalRep::new(sl.n())?;
        let images = RepImages::fundamental(sl, &rep)?;
        let evaluated = evaluate_matrix(&subject.t, &images, KronOrder::Natural)?;
        let vars = sl.vars();
        let vq = LaurentPoly::var_pow(vars, "v", rep.root())?;
        let r = subject.r.with_matrix(
            &format!("{} at q = v^{}", subject.r.name, rep.root()),
            subject.r.matrix.map(|x| x.substitute("q", &vq))?,
        );
        relations.push(RelationResult::from_residual(
            "rtt_fundamental_representation",
            &rtt_residual(&r, &evaluated)?,
        ));
        notes.push(format!("representation check uses q = v^{}", rep.root()));
    }
    Ok(VerificationReport::new(CheckKind::Rtt, subject, relations, notes))
}

/// Entries of `T` (zero-based) entering the RTT residual at `(row, col)`
/// for an R-matrix that only mixes `e_i ⊗ e_k` with `e_k ⊗ e_i`.
pub fn rtt_involved_entries(n: usize, row: usize, col: usize) -> Vec<(usize, usize)> {
    let (i, k, j, l) = (row / n, row % n, col / n, col % n);
    let mut v = vec![(i, j), (k, l), (k, j), (i, l)];
    v.sort();
    v.dedup();
    v
}

/// Gauss factors of the assembled `T = T^- T^+`:
/// `T_L = T^- D_-^-1`, `T_D = D_- D_+`, `T_U = D_+^-1 T^+`.
#[derive(Debug, Clone)]
pub struct GaussFactors {
    pub t_l: OpMatrix,
    pub t_d: OpMatrix,
    pub t_u: OpMatrix,
    /// `T_L T_D`.
    pub lower: OpMatrix,
    /// `T_D T_U`.
    pub upper: OpMatrix,
}

pub fn gauss_factors(triple: &GaussTriple) -> Result<GaussFactors> {
    let d_plus = triple.t_plus.diagonal()?;
    let d_minus = triple.t_minus.diagonal()?;
    let t_l = triple.t_minus.matmul(&d_minus.triangular_inverse(Shape::Lower)?)?;
    let t_u = d_plus.triangular_inverse(Shape::Upper)?.matmul(&triple.t_plus)?;
    let t_d = d_minus.matmul(&d_plus)?;
    Ok(GaussFactors {
        lower: t_l.matmul(&t_d)?,
        upper: t_d.matmul(&t_u)?,
        t_l,
        t_d,
        t_u,
    })
}

/// Quadratic relations of the Gauss generators: RTT for both Borel halves,
/// the diagonal-part cross relations and the commutation of the strictly
/// triangular factors.
pub fn check_gauss(subject: &Subject) -> Result<VerificationReport> {
    let (_, triple) = subject.triple(CheckKind::Gauss)?;
    let r = &subject.r;
    let (r_d, _, _) = r.derived_parts()?;
    let rd = &r_d.matrix;
    let g = gauss_factors(triple)?;
    let ident = ScalarMatrix::identity(r.vars(), r.n * r.n);
    let relations = vec![
        RelationResult::from_residual("rtt_t_plus", &rtt_residual(r, &triple.t_plus)?),
        RelationResult::from_residual("rtt_t_minus", &rtt_residual(r, &triple.t_minus)?),
        RelationResult::from_residual(
            "gauss_factorization",
            &g.t_l.matmul(&g.t_d)?.matmul(&g.t_u)?.sub(&subject.t)?,
        ),
        RelationResult::from_residual("rtt_upper", &rtt_residual(r, &g.upper)?),
        RelationResult::from_residual("rtt_lower", &rtt_residual(r, &g.lower)?),
        RelationResult::from_residual("diag_cross_upper_lower", &cross_residual(rd, &g.upper, &g.lower, rd)?),
        RelationResult::from_residual("diag_cross_diagonal_lower", &cross_residual(rd, &g.t_d, &g.lower, rd)?),
        RelationResult::from_residual("diag_cross_upper_diagonal", &cross_residual(rd, &g.upper, &g.t_d, rd)?),
        RelationResult::from_residual("lower_upper_commute", &cross_residual(&ident, &g.t_l, &g.t_u, &ident)?),
    ];
    let notes = vec![
        "upper = T_D T_U and lower = T_L T_D are the Gauss factors of the assembled T".into(),
        format!("R_d = diagonal part of {}", r.name),
    ];
    Ok(VerificationReport::new(CheckKind::Gauss, subject, relations, notes))
}

/// `X_i^2 X_j - q^s (q + q^-1) X_i X_j X_i + q^{2s} X_j X_i^2`.
pub fn serre_cubic(xi: &AlgebraElement, xj: &AlgebraElement, s: i32) -> Result<AlgebraElement> {
    let vars = xi.signature().vars().clone();
    let q = |e: i32| LaurentPoly::var_pow(&vars, "q", e);
    let qsum = &q(1)? + &q(-1)?;
    let xi2 = xi.checked_mul(xi)?;
    let a = xi2.checked_mul(xj)?;
    let b = xi.checked_mul(xj)?.checked_mul(xi)?.scale(&(&q(s)? * &qsum));
    let c = xj.checked_mul(&xi2)?.scale(&q(2 * s)?);
    a.checked_sub(&b)?.checked_add(&c)
}

/// q-commutation and deformed Serre cubics of the first off-diagonal
/// generators of both Borel halves. For `j = i + 1` the `+` branch
/// (`q^{+1}`, `q^{+2}`) vanishes, for `j = i - 1` the `-` branch; the other
/// branch is reported for context.
pub fn check_serre_and_qcomm(subject: &Subject) -> Result<VerificationReport> {
    let (sl, triple) = subject.triple(CheckKind::Serre)?;
    let n = sl.n();
    let q = sl.q();
    let q2 = q.pow(2)?;
    let qm2 = q.pow(-2)?;
    let mut relations = Vec::new();
    for (half, gens) in [
        (
            "+",
            (0..n - 1)
                .map(|i| triple.t_plus.get(i, i + 1).clone())
                .collect::<Vec<_>>(),
        ),
        (
            "-",
            (0..n - 1)
                .map(|i| triple.t_minus.get(i + 1, i).clone())
                .collect::<Vec<_>>(),
        ),
    ] {
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                if i == j {
                    continue;
                }
                let (xi, xj) = (&gens[i], &gens[j]);
                let tag = format!("{half}({},{})", i + 1, j + 1);
                let xixj = xi.checked_mul(xj)?;
                let xjxi = xj.checked_mul(xi)?;
                if j == i + 1 || i == j + 1 {
                    let (factor, shown, s) = if j == i + 1 {
                        (&q2, "q^2", 1)
                    } else {
                        (&qm2, "q^-2", -1)
                    };
                    relations.push(RelationResult::from_difference(
                        format!("qcomm{tag}: X_i X_j = {shown} X_j X_i"),
                        &xixj,
                        &xjxi.scale(factor),
                    ));
                    let zero = AlgebraElement::zero(xi.signature());
                    relations.push(RelationResult::from_difference(
                        format!("serre{tag}: branch {}", if s > 0 { "+" } else { "-" }),
                        &serre_cubic(xi, xj, s)?,
                        &zero,
                    ));
                    relations.push(
                        RelationResult::from_difference(
                            format!("serre{tag}: branch {}", if s > 0 { "-" } else { "+" }),
                            &serre_cubic(xi, xj, -s)?,
                            &zero,
                        )
                        .informational(),
                    );
                } else {
                    relations.push(RelationResult::from_difference(
                        format!("qcomm{tag}: X_i X_j = X_j X_i"),
                        &xixj,
                        &xjxi,
                    ));
                }
            }
        }
    }
    let notes = vec![
        "sign pairing: j = i+1 uses q^{+1}, q^{+2}; j = i-1 uses q^{-1}, q^{-2}".into(),
        "opposite branches are informational and expected to be nonzero".into(),
    ];
    Ok(VerificationReport::new(CheckKind::Serre, subject, relations, notes))
}

/// `det_q T = 1` and `prod_i t_ii^± = 1`.
pub fn check_qdet_and_diagonal(subject: &Subject) -> Result<VerificationReport> {
    let one = AlgebraElement::one(subject.t.get(0, 0).signature());
    let q = LaurentPoly::var(one.signature().vars(), "q")?;
    let mut relations = vec![RelationResult::from_difference("qdet", &subject.t.qdet(&q)?, &one)];
    if let Some(triple) = &subject.triple {
        relations.push(RelationResult::from_difference(
            "diagonal_product_t_plus",
            &diagonal_product(&triple.t_plus)?,
            &one,
        ));
        relations.push(RelationResult::from_difference(
            "diagonal_product_t_minus",
            &diagonal_product(&triple.t_minus)?,
            &one,
        ));
    }
    Ok(VerificationReport::new(CheckKind::Qdet, subject, relations, vec![]))
}

/// Inverses of the Borel factors. They satisfy the RTT relations with
/// `R^+ = P R P`; the same-`R` residuals are reported for context.
pub fn check_inverse_relations(subject: &Subject) -> Result<VerificationReport> {
    let (_, triple) = subject.triple(CheckKind::Inverse)?;
    let r = &subject.r;
    let (_, _, r_plus) = r.derived_parts()?;
    let mut relations = Vec::new();
    for (name, t, shape) in [
        ("t_plus", &triple.t_plus, Shape::Upper),
        ("t_minus", &triple.t_minus, Shape::Lower),
    ] {
        let inv = t.triangular_inverse(shape)?;
        let id = OpMatrix::identity(t.get(0, 0), t.rows());
        relations.push(RelationResult::from_residual(
            format!("{name}_inverse_two_sided"),
            &t.matmul(&inv)?.sub(&id)?.add(&inv.matmul(t)?.sub(&id)?)?,
        ));
        relations.push(RelationResult::from_residual(
            format!("{name}_inverse_rtt_transposed_r"),
            &rtt_residual(&r_plus, &inv)?,
        ));
        relations.push(
            RelationResult::from_residual(format!("{name}_inverse_rtt_same_r"), &rtt_residual(r, &inv)?)
                .informational(),
        );
    }
    let notes = vec![
        "inverses are verified against R^+ = P R P; with the same R the relations \
         hold only with q replaced by q^-1"
            .into(),
    ];
    Ok(VerificationReport::new(CheckKind::Inverse, subject, relations, notes))
}

pub fn run_check(subject: &Subject, check: CheckKind) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = match check {
        CheckKind::Rtt => check_rtt(subject),
        CheckKind::Gauss => check_gauss(subject),
        CheckKind::Serre => check_serre_and_qcomm(subject),
        CheckKind::Qdet => check_qdet_and_diagonal(subject),
        CheckKind::Inverse => check_inverse_relations(subject),
    }?;
    report.wall_time_us = Some(start.elapsed().as_micros() as u64);
    Ok(report)
}

/// Runs `checks` concurrently; reports come back in the order requested.
/// `QGAUSS_THREADS` caps the worker count.
pub fn run_suite(subject: &Subject, checks: &[CheckKind]) -> Result<Vec<VerificationReport>> {
    let run = || {
        checks
            .par_iter()
            .map(|&c| run_check(subject, c))
            .collect::<Result<Vec<_>>>()
    };
    match std::env::var("QGAUSS_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(k) if k > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?
            .install(run),
        _ => run(),
    }
}

/// Checks that make sense for `group`.
pub fn applicable_checks(group: Group) -> &'static [CheckKind] {
    match group {
        Group::SlQ => &CheckKind::ALL,
        Group::GlPq2 | Group::DualSl2 => &[CheckKind::Rtt],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(n: usize) -> Subject {
        Subject::sl_q(n, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn rtt_passes_for_small_ranks() {
        for n in 2..=3 {
            let rep = check_rtt(&sl(n)).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert_eq!(rep.relations.len(), 2);
        }
    }

    #[test]
    fn rtt_identity_passes() {
        let mut s = sl(2);
        s.t = OpMatrix::identity(s.t.get(0, 0), 2);
        assert!(check_rtt(&s).unwrap().pass);
    }

    #[test]
    fn rtt_bump_fails_with_location() {
        let s = sl(2).perturbed(&"t12:bump".parse().unwrap()).unwrap();
        let rep = check_rtt(&s).unwrap();
        assert!(!rep.pass);
        let loc = rep.first_failure().unwrap().first_nonzero.clone().unwrap();
        assert!(rtt_involved_entries(2, loc.row, loc.col).contains(&(0, 1)), "{loc:?}");
    }

    #[test]
    fn gauss_relations_hold() {
        for n in 2..=3 {
            let rep = check_gauss(&sl(n)).unwrap();
            assert!(rep.pass, "{:?}", rep.first_failure());
        }
    }

    #[test]
    fn serre_and_qcomm_hold() {
        for n in 3..=4 {
            let rep = check_serre_and_qcomm(&sl(n)).unwrap();
            assert!(rep.pass, "{:?}", rep.first_failure());
            assert!(rep.relations.iter().filter(|r| r.informational).all(|r| !r.holds));
        }
    }

    #[test]
    fn qdet_and_scaled_corner() {
        for n in 2..=3 {
            assert!(check_qdet_and_diagonal(&sl(n)).unwrap().pass);
        }
        let s = sl(2).perturbed(&"t11+".parse().unwrap()).unwrap();
        let rep = check_qdet_and_diagonal(&s).unwrap();
        assert!(!rep.relation("qdet").unwrap().holds);
        assert!(!rep.relation("diagonal_product_t_plus").unwrap().holds);
    }

    #[test]
    fn inverses_follow_transposed_r() {
        for n in 2..=3 {
            let rep = check_inverse_relations(&sl(n)).unwrap();
            assert!(rep.pass, "{:?}", rep.first_failure());
            assert!(!rep.relation("t_plus_inverse_rtt_same_r").unwrap().holds);
        }
    }

    #[test]
    fn perturbation_parsing() {
        let p: Perturbation = "t21-:shift".parse().unwrap();
        assert_eq!(
            (p.target, p.row, p.col, p.kind),
            (PerturbTarget::Minus, 1, 0, PerturbKind::Shift)
        );
        let p: Perturbation = "t11".parse().unwrap();
        assert_eq!((p.target, p.kind), (PerturbTarget::Assembled, PerturbKind::Scale));
        for bad in ["x11", "t1", "t0a", "t11:oops", "t01"] {
            assert!(bad.parse::<Perturbation>().is_err(), "{bad}");
        }
    }

    #[test]
    fn check_lists() {
        assert_eq!(CheckKind::parse_list("all").unwrap().len(), 5);
        assert_eq!(
            CheckKind::parse_list("qdet,rtt,rtt").unwrap(),
            vec![CheckKind::Rtt, CheckKind::Qdet]
        );
        assert!(CheckKind::parse_list("nonsense").is_err());
        assert!(CheckKind::parse_list("").is_err());
    }

    #[test]
    fn variants_pass_rtt() {
        let none = BTreeMap::new();
        assert!(check_rtt(&Subject::glpq2(&none).unwrap()).unwrap().pass);
        assert!(check_rtt(&Subject::dual_sl2(&none).unwrap()).unwrap().pass);
        assert!(check_gauss(&Subject::glpq2(&none).unwrap()).is_err());
    }

    #[test]
    fn report_round_trip() {
        let reps = run_suite(&sl(2), &CheckKind::ALL).unwrap();
        assert_eq!(reps.len(), 5);
        assert!(reps.iter().all(|r| r.pass));
        let js = serde_json::to_string(&reps).unwrap();
        let back: Vec<VerificationReport> = serde_json::from_str(&js).unwrap();
        assert_eq!(back, reps);
    }

    #[test]
    fn formal_lambda_breaks_rtt_at_rank_three() {
        let mut raw = BTreeMap::new();
        raw.insert(LAMBDA.to_string(), "lambda".to_string());
        let s = Subject::sl_q(3, &raw).unwrap();
        assert!(!check_rtt(&s).unwrap().pass);
        assert!(check_rtt(&Subject::sl_q(2, &raw).unwrap()).unwrap().pass);
    }
}
