//! Exact rounding, residual absorption and independent verification.
//!
//! Rounding pipeline for a float Gram matrix `X` at `ε`:
//!
//! 1. `R` = entries of `X` rounded to the dyadic grid `2^-k`.
//! 2. `P = QRQ` exactly, so `P1 = 0` and the residual lies in the
//!    augmentation ideal.
//! 3. A float conjugate-gradient solve for row multipliers `y` with
//!    `A(Q Aᵀy Q) ≈ b - A(P)`; `y` is rounded and `P += Q Aᵀy Q` exactly.
//! 4. `G = P + δQ` with `δ` twice the float PSD deficit on `1^⊥`, doubled
//!    until an exact `LDLᵀ` succeeds. Boosting by `δQ` rather than `δI`
//!    keeps `G1 = 0`.
//! 5. `r = Δ² - εΔ - A(G)` exactly and `ε' = ε - Σ_g |r_g| w(g)`.
//!
//! The weight `w(g) = ℓ(g) · max(1, κ(g))` comes from
//! `2 - g - g* ≼ 2ℓκ Δ`: for a word `s_1 … s_ℓ`,
//! `‖(1-g)v‖² ≤ ℓ Σ_k ‖(1-s_k)v‖²`, and a generator pair `{s, s^{-1}}`
//! contributes `cap · ‖(1-s)v‖²` to `2⟨Δv, v⟩`, where `cap` is 2 for a
//! non-involution and 1 for an involution. `κ` is the largest ratio of the
//! number of letters from one pair to its `cap`. For words without
//! repeated pairs `κ ≤ 1` and `w = ℓ`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::solver::{center, min_eigenvalue};
use super::{build_sos_problem, SosError, SosProblem};
use crate::algebra::Rational;
use crate::ball::{Ball, DEFAULT_CAP};
use crate::exact::{is_psd, RatMatrix};
use crate::groups::{parse_model, CanonicalKey, GroupModel, ModelVisitor};

pub const FORMAT: &str = "kazhdan-sos-certificate";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Entries are rounded to the grid `2^-denominator_bits`.
    pub denominator_bits: u32,
    /// Conjugate-gradient steps of the residual correction (0 disables it).
    pub correction_steps: usize,
    /// Doublings of `δ` tried before giving up.
    pub max_boosts: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { denominator_bits: 32, correction_steps: 200, max_boosts: 24 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverMetadata {
    pub method: String,
    pub tol: f64,
    pub iterations: usize,
    pub symmetrized: bool,
    pub float_epsilon: f64,
    pub denominator_bits: u32,
    /// Exact `δ` of the `δQ` boost, as a fraction string.
    pub boost: String,
}

/// An exactly checkable SOS certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct GramCertificate {
    pub model: String,
    pub radius: usize,
    pub epsilon: Rational,
    pub certified_epsilon: Rational,
    pub dimension: usize,
    /// Row-major `dimension x dimension`.
    pub gram: Vec<Rational>,
    /// `Δ² - εΔ - A(gram)`, sorted by canonical key.
    pub residual: Vec<(CanonicalKey, Rational)>,
    pub metadata: SolverMetadata,
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    format: String,
    version: u32,
    model: String,
    radius: usize,
    epsilon: String,
    certified_epsilon: String,
    dimension: usize,
    gram: Vec<String>,
    residual: String,
    solver: SolverMetadata,
}

fn parse_rational(s: &str) -> Result<Rational, SosError> {
    s.trim().parse().map_err(|_| SosError::Malformed(format!("bad fraction {s:?}")))
}

impl GramCertificate {
    pub fn residual_text(&self) -> String {
        self.residual.iter().map(|(k, c)| format!("{c}\t{k}\n")).collect()
    }

    pub fn residual_l1(&self) -> Rational {
        self.residual.iter().fold(Rational::zero(), |acc, (_, c)| acc + c.abs())
    }

    pub fn to_json(&self) -> String {
        let file = CertificateFile {
            format: FORMAT.to_string(),
            version: VERSION,
            model: self.model.clone(),
            radius: self.radius,
            epsilon: self.epsilon.to_string(),
            certified_epsilon: self.certified_epsilon.to_string(),
            dimension: self.dimension,
            gram: self.gram.iter().map(|v| v.to_string()).collect(),
            residual: self.residual_text(),
            solver: self.metadata.clone(),
        };
        serde_json::to_string_pretty(&file).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SosError> {
        let file: CertificateFile =
            serde_json::from_str(text).map_err(|e| SosError::Malformed(e.to_string()))?;
        if file.format != FORMAT || file.version != VERSION {
            return Err(SosError::Malformed(format!("unsupported format {} v{}", file.format, file.version)));
        }
        let gram = file.gram.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>, _>>()?;
        if gram.len() != file.dimension * file.dimension {
            return Err(SosError::Malformed("gram entry count".into()));
        }
        let mut residual = Vec::new();
        for line in file.residual.lines().filter(|l| !l.trim().is_empty()) {
            let (c, k) = line
                .split_once('\t')
                .ok_or_else(|| SosError::Malformed(format!("residual line {line:?}")))?;
            let key: CanonicalKey =
                k.parse().map_err(|_| SosError::Malformed(format!("residual key {k:?}")))?;
            residual.push((key, parse_rational(c)?));
        }
        Ok(GramCertificate {
            model: file.model,
            radius: file.radius,
            epsilon: parse_rational(&file.epsilon)?,
            certified_epsilon: parse_rational(&file.certified_epsilon)?,
            dimension: file.dimension,
            gram,
            residual,
            metadata: file.solver,
        })
    }

    fn gram_matrix(&self) -> RatMatrix {
        self.gram.chunks(self.dimension.max(1)).map(|r| r.to_vec()).collect()
    }
}

/// Absorption weight `ℓ(g) · max(1, κ(g))` per element of `ball`, with `κ`
/// computed from the ball's geodesic words.
pub fn absorption_weights<M: GroupModel>(model: &M, ball: &Ball<M::Element>) -> Vec<Rational> {
    let gens = model.generators();
    let pair_of: Vec<(usize, i64)> = gens
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let inv = model.invert(g);
            let j = gens.iter().position(|h| *h == inv).expect("symmetric generators");
            (k.min(j), if j == k { 1 } else { 2 })
        })
        .collect();
    (0..ball.len())
        .map(|t| {
            let word = ball.geodesic(t);
            let mut mult: BTreeMap<usize, i64> = BTreeMap::new();
            for &k in &word {
                *mult.entry(pair_of[k].0).or_default() += 1;
            }
            let kappa = mult
                .iter()
                .map(|(&p, &m)| {
                    let cap = pair_of.iter().find(|(q, _)| *q == p).unwrap().1;
                    Rational::new(m.into(), cap.into())
                })
                .fold(Rational::one(), |a, b| if b > a { b } else { a });
            kappa * Rational::from_integer(BigInt::from(word.len()))
        })
        .collect()
}

fn dyadic(v: f64, bits: u32) -> Rational {
    let scaled = (v * 2f64.powi(bits as i32)).round();
    let num = BigInt::from(scaled as i128);
    Rational::new(num, BigInt::one() << bits)
}

/// Smallest dyadic `2^-m >= v` for `v > 0`.
fn dyadic_ceil(v: f64) -> Rational {
    let mut m: i32 = 0;
    while 2f64.powi(-m) >= v && m < 1000 {
        m += 1;
    }
    m -= 1;
    if m >= 0 {
        Rational::new(BigInt::one(), BigInt::one() << m as u32)
    } else {
        Rational::from_integer(BigInt::one() << (-m) as u32)
    }
}

/// `Q R Q` exactly (row-major, symmetric input).
fn center_exact(r: &[Rational], n: usize) -> Vec<Rational> {
    let nq = Rational::from_integer(BigInt::from(n));
    let rows: Vec<Rational> =
        (0..n).map(|i| r[i * n..(i + 1) * n].iter().fold(Rational::zero(), |a, b| a + b) / &nq).collect();
    let all = rows.iter().fold(Rational::zero(), |a, b| a + b) / &nq;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(&r[i * n + j] - &rows[i] - &rows[j] + &all);
        }
    }
    out
}

fn to_dmatrix(p: &[Rational], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| p[i * n + j].to_f64().unwrap_or(f64::NAN))
}

/// Row multipliers `y` with `A(Q Aᵀy Q) ≈ rho`, by conjugate gradients.
fn correction<E: Clone + Eq + std::hash::Hash>(
    problem: &SosProblem<E>,
    rho: &[f64],
    steps: usize,
) -> Vec<f64> {
    let n = problem.dim();
    let apply = |y: &[f64]| -> Vec<f64> {
        let ymat = DMatrix::from_fn(n, n, |i, j| y[problem.row_of(i, j)]);
        problem.pairing_f64(&center(&ymat))
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut y = vec![0.0; rho.len()];
    let mut r = rho.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let start = rr.sqrt();
    for _ in 0..steps {
        if rr.sqrt() <= 1e-15 * start.max(1e-300) {
            break;
        }
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let alpha = rr / pap;
        for k in 0..y.len() {
            y[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        let rr_next = dot(&r, &r);
        let beta = rr_next / rr;
        rr = rr_next;
        for k in 0..p.len() {
            p[k] = r[k] + beta * p[k];
        }
    }
    y
}

fn residual_vector<E: Clone + Eq + std::hash::Hash>(
    problem: &SosProblem<E>,
    epsilon: &Rational,
    gram: &[Rational],
) -> Vec<Rational> {
    let b = problem.target(epsilon);
    let a = problem.pairing_exact(gram);
    b.iter().zip(&a).map(|(x, y)| x - y).collect()
}

fn absorbed(residual: &[Rational], weights: &[Rational]) -> Rational {
    residual
        .iter()
        .zip(weights)
        .skip(1)
        .filter(|(r, _)| !r.is_zero())
        .fold(Rational::zero(), |acc, (r, w)| acc + r.abs() * w)
}

/// Rounds a float Gram matrix found at `epsilon` to an exact certificate.
pub fn round_and_certify<M: GroupModel>(
    model: &M,
    problem: &SosProblem<M::Element>,
    gram: &DMatrix<f64>,
    epsilon: f64,
    options: &CertifyOptions,
    mut metadata: SolverMetadata,
) -> Result<GramCertificate, SosError> {
    let n = problem.dim();
    if gram.nrows() != n || gram.ncols() != n {
        return Err(SosError::Dimension { expected: n, found: gram.nrows() });
    }
    let bits = options.denominator_bits;
    let eps = dyadic(epsilon, bits);
    let mut r = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            r.push(dyadic(0.5 * (gram[(i, j)] + gram[(j, i)]), bits));
        }
    }
    let mut p = center_exact(&r, n);

    if options.correction_steps > 0 {
        let rho: Vec<f64> = residual_vector(problem, &eps, &p)
            .iter()
            .map(|v| v.to_f64().unwrap_or(0.0))
            .collect();
        let y = correction(problem, &rho, options.correction_steps);
        let ext = problem.extended();
        let fine = bits + 24;
        let yq: Vec<Rational> = (0..y.len())
            .map(|t| {
                // use one value per {t, t^{-1}} so the correction stays symmetric
                let inv = ext.index_of(&model.invert(&ext.elements()[t])).expect("balls are symmetric");
                let v = if inv < t { y[inv] } else { y[t] };
                dyadic(v, fine)
            })
            .collect();
        let ymat: Vec<Rational> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| yq[problem.row_of(i, j)].clone()).collect();
        let c = center_exact(&ymat, n);
        for (a, b) in p.iter_mut().zip(c) {
            *a += b;
        }
    }

    let pf = to_dmatrix(&p, n);
    let shift = 1.0 + pf.trace().abs();
    let lmin = min_eigenvalue(&(pf.clone() + DMatrix::from_element(n, n, shift / n as f64)));
    // eigenvalue noise below this scale is not a deficit
    let noise = 1e-13 * shift;
    let deficit = if lmin < -noise { -lmin } else { 0.0 };
    let mut delta = if deficit > 0.0 { dyadic_ceil(2.0 * deficit) } else { Rational::zero() };
    let nq = Rational::from_integer(BigInt::from(n));
    let mut attempts = 0;
    let final_gram = loop {
        let off = &delta / &nq;
        let g: Vec<Rational> = p
            .iter()
            .enumerate()
            .map(|(k, v)| if k / n == k % n { v + &delta - &off } else { v - &off })
            .collect();
        let mat: RatMatrix = g.chunks(n).map(|row| row.to_vec()).collect();
        if is_psd(&mat) {
            break g;
        }
        attempts += 1;
        if attempts > options.max_boosts {
            return Err(SosError::CertificationFailed {
                certified: f64::NEG_INFINITY,
                residual_l1: f64::NAN,
            });
        }
        delta = if delta.is_zero() {
            Rational::new(BigInt::one(), BigInt::one() << 40u32)
        } else {
            delta * Rational::from_integer(BigInt::from(2))
        };
    };

    let residual = residual_vector(problem, &eps, &final_gram);
    let weights = absorption_weights(model, problem.extended());
    let certified = &eps - absorbed(&residual, &weights);
    let residual_l1 = residual.iter().fold(Rational::zero(), |a, b| a + b.abs());
    if !certified.is_positive() {
        return Err(SosError::CertificationFailed {
            certified: certified.to_f64().unwrap_or(f64::NEG_INFINITY),
            residual_l1: residual_l1.to_f64().unwrap_or(f64::NAN),
        });
    }
    let keys = problem.extended().keys();
    let mut terms: Vec<(CanonicalKey, Rational)> = residual
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(t, v)| (keys[t].clone(), v))
        .collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    metadata.denominator_bits = bits;
    metadata.float_epsilon = epsilon;
    metadata.boost = delta.to_string();
    Ok(GramCertificate {
        model: model.descriptor(),
        radius: problem.radius(),
        epsilon: eps,
        certified_epsilon: certified,
        dimension: n,
        gram: final_gram,
        residual: terms,
        metadata,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    UnknownModel,
    DimensionMismatch,
    NotSymmetric,
    ConstraintMismatch,
    AugmentationNonzero,
    EpsilonMismatch,
    NonPositiveEpsilon,
    NotPsd,
}

impl VerifyFailure {
    pub fn reason(self) -> &'static str {
        match self {
            VerifyFailure::UnknownModel => "unknown model",
            VerifyFailure::DimensionMismatch => "dimension mismatch",
            VerifyFailure::NotSymmetric => "not symmetric",
            VerifyFailure::ConstraintMismatch => "constraint mismatch",
            VerifyFailure::AugmentationNonzero => "augmentation nonzero",
            VerifyFailure::EpsilonMismatch => "epsilon mismatch",
            VerifyFailure::NonPositiveEpsilon => "nonpositive epsilon",
            VerifyFailure::NotPsd => "not PSD",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub valid: bool,
    pub failure: Option<VerifyFailure>,
    /// `ε - Σ|r_g| w(g)` recomputed from the certificate's own residual.
    pub recomputed_epsilon: Option<Rational>,
}

impl VerifyReport {
    fn fail(f: VerifyFailure, eps: Option<Rational>) -> Self {
        VerifyReport { valid: false, failure: Some(f), recomputed_epsilon: eps }
    }
}

/// Exact re-check against the model named in the certificate.
pub fn verify_certificate(cert: &GramCertificate) -> VerifyReport {
    struct Run<'a>(&'a GramCertificate);
    impl ModelVisitor for Run<'_> {
        type Output = VerifyReport;
        fn visit<M: GroupModel>(self, model: &M) -> VerifyReport {
            verify_with_model(model, self.0)
        }
    }
    match parse_model(&cert.model) {
        Ok(spec) => spec.visit(Run(cert)),
        Err(_) => VerifyReport::fail(VerifyFailure::UnknownModel, None),
    }
}

/// Re-enumerates the balls and checks, in rational arithmetic: the
/// constraint identity `Δ² - εΔ - r = A(G)`, `aug(r) = 0`, the absorbed
/// `ε'` and its sign, and `G ≽ 0` by `LDLᵀ`.
pub fn verify_with_model<M: GroupModel>(model: &M, cert: &GramCertificate) -> VerifyReport {
    use VerifyFailure::*;
    if model.descriptor() != cert.model || cert.radius == 0 {
        return VerifyReport::fail(UnknownModel, None);
    }
    let Ok(problem) = build_sos_problem(model, cert.radius, DEFAULT_CAP) else {
        return VerifyReport::fail(UnknownModel, None);
    };
    let n = problem.dim();
    if cert.dimension != n || cert.gram.len() != n * n {
        return VerifyReport::fail(DimensionMismatch, None);
    }
    let mat = cert.gram_matrix();
    for i in 0..n {
        for j in 0..i {
            if mat[i][j] != mat[j][i] {
                return VerifyReport::fail(NotSymmetric, None);
            }
        }
    }
    let computed = residual_vector(&problem, &cert.epsilon, &cert.gram);
    let mut stored = vec![Rational::zero(); problem.row_count()];
    let index: std::collections::HashMap<&CanonicalKey, usize> =
        problem.extended().keys().iter().enumerate().map(|(i, k)| (k, i)).collect();
    for (k, c) in &cert.residual {
        match index.get(k) {
            Some(&t) => stored[t] += c,
            None => return VerifyReport::fail(ConstraintMismatch, None),
        }
    }
    if stored != computed {
        return VerifyReport::fail(ConstraintMismatch, None);
    }
    if !computed.iter().fold(Rational::zero(), |a, b| a + b).is_zero() {
        return VerifyReport::fail(AugmentationNonzero, None);
    }
    let weights = absorption_weights(model, problem.extended());
    let eps = &cert.epsilon - absorbed(&computed, &weights);
    if eps != cert.certified_epsilon {
        return VerifyReport::fail(EpsilonMismatch, Some(eps));
    }
    if !eps.is_positive() {
        return VerifyReport::fail(NonPositiveEpsilon, Some(eps));
    }
    if !is_psd(&mat) {
        return VerifyReport::fail(NotPsd, Some(eps));
    }
    VerifyReport { valid: true, failure: None, recomputed_epsilon: Some(eps) }
}
