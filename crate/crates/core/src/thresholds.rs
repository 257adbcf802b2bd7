//! Noise thresholds of a depolarised magic state `ρ_M(p) = (1-p)ρ + p𝟙/d`.
//!
//! * `wigner`: the smallest p at which the Gross representation is non-negative.
//! * `polytope`: the smallest p at which ρ_M(p) is a convex mixture of pure
//!   stabiliser states.
//! * `kd`: the smallest p at which the frame search finds a KD frame with Ω = 0.
//! * `crit`: the minimum over frame families.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{
    frame_from_unitaries, gross_wigner_frame, kd_frame, Basis, ExactFrame, FrameDescriptor,
};
use crate::linalg::{self, c, CMatrix};
use crate::optimizer::{
    self, bisect_with_witness, minimize_omega, FrameSearchPoint, OptimizerConfig, SearchContext,
};
use crate::qudit::{depolarize, stabilizer_states, Dimension, Operator, Role};
use crate::representation::{
    omega, represent_state, stabilizer_penalties, OperationalSet, QuasiDistribution, Scope,
    StabilizerKdEntry, Witness,
};
use crate::simplex;
use crate::tolerance::Tolerances;

/// Default bisection width.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Slack allowed between the KD estimate and p_W before a gap is reported.
pub const ORDERING_MARGIN: f64 = 1e-4;
/// Grid step of the internal scan that cross-checks the closed-form p_W.
pub const WIGNER_GRID_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdKind {
    Wigner,
    Polytope,
    Kd,
    Crit,
}

impl ThresholdKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdKind::Wigner => "wigner",
            ThresholdKind::Polytope => "polytope",
            ThresholdKind::Kd => "kd",
            ThresholdKind::Crit => "crit",
        }
    }
}

impl std::str::FromStr for ThresholdKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wigner" => Ok(ThresholdKind::Wigner),
            "polytope" => Ok(ThresholdKind::Polytope),
            "kd" => Ok(ThresholdKind::Kd),
            "crit" => Ok(ThresholdKind::Crit),
            other => Err(Error::InvalidInput(format!(
                "unknown method `{other}` (expected wigner|polytope|kd|crit)"
            ))),
        }
    }
}

/// Frame families searched by [`crit_threshold`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gross,
    Kd,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Gross => "gross",
            Family::Kd => "kd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Confirmed,
    Refuted,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Confirmed
        } else {
            Verdict::Refuted
        }
    }
}

/// A note attached to a result. Codes: `POTENTIAL_GAP`, `ORDERING_CONSISTENT`,
/// `WIGNER_POLYTOPE_COINCIDENCE`, `MUB_STABILIZER_CLAIM`, `LP_INDETERMINATE`,
/// `WIGNER_GRID_MISMATCH`, `FAMILY_THRESHOLD`, `FAMILY_NO_THRESHOLD`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub message: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
}

impl Diagnostic {
    fn new(code: &str, message: String) -> Self {
        Diagnostic {
            code: code.into(),
            verdict: None,
            message,
            values: BTreeMap::new(),
        }
    }

    fn with_verdict(mut self, v: Verdict) -> Self {
        self.verdict = Some(v);
        self
    }

    fn with_value(mut self, key: &str, value: f64) -> Self {
        self.values.insert(key.into(), value);
        self
    }
}

/// Convex decomposition of a state over the pure stabiliser states, indexed
/// as in [`stabilizer_states`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeCertificate {
    pub coefficients: Vec<f64>,
    /// max |Σ c_k |s_k><s_k| - ρ| entrywise.
    pub residual: f64,
}

impl PolytopeCertificate {
    /// Σ c_k |s_k><s_k|.
    pub fn reconstruct(&self, dim: Dimension) -> CMatrix {
        let d = dim.get();
        stabilizer_states(dim)
            .states()
            .iter()
            .zip(&self.coefficients)
            .fold(CMatrix::zeros(d, d), |acc, (s, &ck)| {
                acc + s.matrix() * c(ck, 0.0)
            })
    }

    /// Whether the decomposition meets the certificate invariants for `rho`.
    pub fn certifies(&self, rho: &Operator) -> bool {
        let tol = Tolerances::DEFAULT;
        self.coefficients.len() == rho.dim().get() * (rho.dim().get() + 1)
            && self.coefficients.iter().all(|&x| x >= -1e-10)
            && (self.coefficients.iter().sum::<f64>() - 1.0).abs() < tol.lp_feasibility
            && linalg::max_abs_diff(&self.reconstruct(rho.dim()), rho.matrix()) < tol.lp_feasibility
    }
}

/// Evidence for a threshold value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Certificate {
    /// A frame whose Ω at the reported p is at most the classification tolerance.
    Frame {
        family: Family,
        scope: Scope,
        descriptor: FrameDescriptor,
        /// Representation of the noisy magic state in that frame.
        representation: QuasiDistribution,
        witness: Witness,
    },
    Polytope(PolytopeCertificate),
}

/// KD distributions of every stabiliser state in the computational/Fourier frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubClaimReport {
    pub entries: Vec<StabilizerKdEntry>,
    /// All states of the two defining bases have zero penalty.
    pub defining_bases_pass: bool,
    /// Whether the remaining states are also real and non-negative.
    pub others: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub kind: ThresholdKind,
    pub p: f64,
    /// The value is an upper bound on the true threshold, not the exact infimum.
    pub upper_bound: bool,
    pub certificate: Certificate,
    /// Evaluated (p, witness) pairs in evaluation order.
    pub scan: Vec<[f64; 2]>,
    pub tol: f64,
    pub seed: Option<u64>,
    pub diagnostics: Vec<Diagnostic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mub_claim: Option<MubClaimReport>,
}

impl ThresholdResult {
    /// Scan as CSV with header `p,witness`.
    pub fn scan_csv(&self) -> String {
        let mut out = String::from("p,witness\n");
        for [p, w] in &self.scan {
            out.push_str(&format!("{},{}\n", csv_number(*p), csv_number(*w)));
        }
        out
    }

    pub fn diagnostic(&self, code: &str) -> Option<&Diagnostic> {
        self.diagnostics.iter().find(|d| d.code == code)
    }
}

/// Shortest round-trip decimal form of a number, as used in every CSV output.
pub fn csv_number(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite numbers serialise")
    } else {
        x.to_string()
    }
}

/// Settings for the frame-search thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchSettings {
    pub optimizer: OptimizerConfig,
    pub scope: Scope,
    /// Bisection width.
    pub tol: f64,
    /// Ω at or below this counts as classical.
    pub classify_tol: f64,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings {
            optimizer: OptimizerConfig::default(),
            scope: Scope::State,
            tol: DEFAULT_TOL,
            classify_tol: Tolerances::DEFAULT.classification,
        }
    }
}

fn check_state(rho: &Operator, dim: Dimension) -> Result<()> {
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim.get(),
            found: rho.dim().get(),
        });
    }
    if rho.role() != Role::State {
        return Err(Error::RoleViolation {
            role: "state",
            detail: format!("threshold input has role {}", rho.role().as_str()),
        });
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must lie in (0, 1)",
        })
    }
}

/// Bisection followed, when no rejected point was seen, by one check at p = 0
/// so that thresholds that vanish are reported as exactly zero.
fn bisect_from_zero<T, F>(mut predicate: F, tol: f64) -> Result<optimizer::Bisection<T>>
where
    T: Clone,
    F: FnMut(f64) -> Result<(bool, T)>,
{
    let mut b = bisect_with_witness(&mut predicate, tol)?;
    if b.trace.iter().all(|(p, _)| *p >= b.p) {
        let (ok, w) = predicate(0.0)?;
        b.trace.push((0.0, w.clone()));
        if ok {
            b.p = 0.0;
            b.witness = w;
        }
    }
    Ok(b)
}

fn frame_certificate(
    frame: &ExactFrame,
    family: Family,
    rho_m: &Operator,
    p: f64,
    scope: Scope,
) -> Result<Certificate> {
    let set = OperationalSet::new(rho_m, p)?;
    Ok(Certificate::Frame {
        family,
        scope,
        descriptor: frame.descriptor().clone(),
        representation: represent_state(frame, &depolarize(rho_m, p)?)?,
        witness: omega(frame, &set, scope)?,
    })
}

/// Most negative Gross-Wigner value of a state.
pub fn wigner_min(rho: &Operator) -> Result<f64> {
    Ok(represent_state(&gross_wigner_frame(rho.dim()), rho)?.min_real())
}

/// Closed form: each Wigner value moves affinely as (1-p)w + p/d², so the
/// most negative one, w_min, fixes p_W = d²|w_min| / (1 + d²|w_min|).
/// Values above `-1e-12` count as non-negative.
pub fn wigner_threshold(rho_m: &Operator, dim: Dimension) -> Result<ThresholdResult> {
    check_state(rho_m, dim)?;
    let frame = gross_wigner_frame(dim);
    let values: Vec<f64> = represent_state(&frame, rho_m)?
        .values()
        .iter()
        .map(|z| z.re)
        .collect();
    let w_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let d2 = (dim.get() * dim.get()) as f64;
    let p = if w_min >= -Tolerances::DEFAULT.real_nonnegative {
        0.0
    } else {
        d2 * w_min.abs() / (1.0 + d2 * w_min.abs())
    };

    let mut diagnostics = Vec::new();
    let grid = wigner_grid_threshold(&values, d2);
    if (grid - p).abs() > WIGNER_GRID_STEP + 1e-12 {
        diagnostics.push(
            Diagnostic::new(
                "WIGNER_GRID_MISMATCH",
                format!("closed form {p} but grid scan {grid}"),
            )
            .with_value("closed_form", p)
            .with_value("grid", grid),
        );
    }

    let scan = (0..=100)
        .map(|k| {
            let q = k as f64 / 100.0;
            let dist = represent_state(&frame, &depolarize(rho_m, q)?)?;
            Ok([q, crate::representation::penalty(&dist)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ThresholdResult {
        kind: ThresholdKind::Wigner,
        p,
        upper_bound: false,
        certificate: frame_certificate(&frame, Family::Gross, rho_m, p, Scope::State)?,
        scan,
        tol: WIGNER_GRID_STEP,
        seed: None,
        diagnostics,
        mub_claim: None,
    })
}

/// First point of the 1e-6 grid at which every affine Wigner value is non-negative.
fn wigner_grid_threshold(values: &[f64], d2: f64) -> f64 {
    let steps = (1.0 / WIGNER_GRID_STEP).round() as usize;
    let cut = -Tolerances::DEFAULT.real_nonnegative;
    (0..=steps)
        .map(|k| k as f64 * WIGNER_GRID_STEP)
        .find(|&p| values.iter().all(|&w| (1.0 - p) * w + p / d2 >= cut))
        .unwrap_or(1.0)
}

/// Outcome of the stabiliser-polytope feasibility problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Membership {
    Feasible(PolytopeCertificate),
    Infeasible {
        phase_one: f64,
    },
    /// Phase one ended below the infeasibility cut but the recovered point
    /// misses the certificate tolerances.
    Indeterminate {
        phase_one: f64,
        residual: f64,
    },
}

impl Membership {
    pub fn certificate(&self) -> Option<&PolytopeCertificate> {
        match self {
            Membership::Feasible(cert) => Some(cert),
            _ => None,
        }
    }

    pub fn phase_one(&self) -> f64 {
        match self {
            Membership::Feasible(_) => 0.0,
            Membership::Infeasible { phase_one } | Membership::Indeterminate { phase_one, .. } => {
                *phase_one
            }
        }
    }
}

/// Solve {c ≥ 0, Σc = 1, Σ c_k |s_k><s_k| = ρ} by phase-one simplex.
pub fn polytope_membership(rho: &Operator) -> Result<Membership> {
    let dim = rho.dim();
    check_state(rho, dim)?;
    let d = dim.get();
    let stab = stabilizer_states(dim);
    let n = stab.len();
    let mut rows = Vec::with_capacity(2 * d * d + 1);
    let mut rhs = Vec::with_capacity(2 * d * d + 1);
    for r in 0..d {
        for col in 0..d {
            rows.push(
                stab.states()
                    .iter()
                    .map(|s| s.matrix()[(r, col)].re)
                    .collect(),
            );
            rhs.push(rho.matrix()[(r, col)].re);
            rows.push(
                stab.states()
                    .iter()
                    .map(|s| s.matrix()[(r, col)].im)
                    .collect(),
            );
            rhs.push(rho.matrix()[(r, col)].im);
        }
    }
    rows.push(vec![1.0; n]);
    rhs.push(1.0);

    let tol = Tolerances::DEFAULT;
    let sol = simplex::phase_one(&rows, &rhs);
    if sol.objective > tol.lp_infeasibility {
        return Ok(Membership::Infeasible {
            phase_one: sol.objective,
        });
    }
    let mut cert = PolytopeCertificate {
        coefficients: sol.x,
        residual: 0.0,
    };
    cert.residual = linalg::max_abs_diff(&cert.reconstruct(dim), rho.matrix());
    if cert.certifies(rho) && !sol.truncated {
        Ok(Membership::Feasible(cert))
    } else {
        Ok(Membership::Indeterminate {
            phase_one: sol.objective,
            residual: cert.residual,
        })
    }
}

pub fn stabilizer_polytope_membership(
    rho: &Operator,
    dim: Dimension,
) -> Result<Option<PolytopeCertificate>> {
    check_state(rho, dim)?;
    Ok(polytope_membership(rho)?.certificate().cloned())
}

/// Bisection on polytope membership of ρ_M(p), reported next to p_W with a
/// verdict on whether the two coincide within 2·tol.
pub fn polytope_threshold(rho_m: &Operator, dim: Dimension, tol: f64) -> Result<ThresholdResult> {
    check_state(rho_m, dim)?;
    check_tol(tol)?;
    let mut indeterminate = Vec::new();
    let b = bisect_from_zero(
        |p| {
            let m = polytope_membership(&depolarize(rho_m, p)?)?;
            if let Membership::Indeterminate {
                phase_one,
                residual,
            } = &m
            {
                indeterminate.push((p, *phase_one, *residual));
            }
            Ok((m.certificate().is_some(), m))
        },
        tol,
    )?;
    let cert = b.witness.certificate().cloned().ok_or(Error::NoThreshold)?;

    let mut diagnostics: Vec<Diagnostic> = indeterminate
        .iter()
        .map(|&(p, phase_one, residual)| {
            Diagnostic::new(
                "LP_INDETERMINATE",
                format!("membership at p = {p} is indeterminate (phase one {phase_one:e}, residual {residual:e}); treated as outside"),
            )
            .with_value("p", p)
        })
        .collect();
    let p_w = wigner_threshold(rho_m, dim)?.p;
    let verdict = Verdict::from_bool((b.p - p_w).abs() <= 2.0 * tol);
    diagnostics.push(
        Diagnostic::new(
            "WIGNER_POLYTOPE_COINCIDENCE",
            format!(
                "p_stab = {} and p_W = {p_w}: boundaries {}",
                b.p,
                match verdict {
                    Verdict::Confirmed => "coincide within 2·tol",
                    Verdict::Refuted => "differ by more than 2·tol",
                }
            ),
        )
        .with_verdict(verdict)
        .with_value("p_stab", b.p)
        .with_value("p_w", p_w),
    );

    Ok(ThresholdResult {
        kind: ThresholdKind::Polytope,
        p: b.p,
        upper_bound: false,
        certificate: Certificate::Polytope(cert),
        scan: b.trace.iter().map(|(p, m)| [*p, m.phase_one()]).collect(),
        tol,
        seed: None,
        diagnostics,
        mub_claim: None,
    })
}

/// Penalties of all stabiliser states in the computational/Fourier KD frame.
pub fn mub_claim_report(dim: Dimension) -> Result<MubClaimReport> {
    let a = Basis::computational(dim);
    let b = Basis::fourier(dim);
    let frame = kd_frame(&a, &b)?;
    let entries = stabilizer_penalties(&frame, &a, &b)?;
    let zero = Tolerances::DEFAULT.real_nonnegative;
    let defining_bases_pass = entries
        .iter()
        .filter(|e| e.in_defining_basis)
        .all(|e| e.penalty < zero);
    let others = Verdict::from_bool(
        entries
            .iter()
            .filter(|e| !e.in_defining_basis)
            .all(|e| e.penalty < zero),
    );
    Ok(MubClaimReport {
        entries,
        defining_bases_pass,
        others,
    })
}

fn kd_search(
    rho_m: &Operator,
    settings: &SearchSettings,
) -> Result<optimizer::Bisection<(f64, FrameSearchPoint)>> {
    let config = OptimizerConfig {
        stop_below: Some(settings.classify_tol),
        ..settings.optimizer.clone()
    };
    bisect_from_zero(
        |p| {
            let ctx = SearchContext::new(rho_m, p, settings.scope)?;
            let best = minimize_omega(&ctx, &config)?.best;
            Ok((
                best.objective <= settings.classify_tol,
                (best.objective, best),
            ))
        },
        settings.tol,
    )
}

/// Smallest p at which the frame search finds a KD frame with Ω ≤
/// `classify_tol`. Always an upper bound on the true KD threshold.
pub fn kd_threshold(
    rho_m: &Operator,
    dim: Dimension,
    settings: &SearchSettings,
) -> Result<ThresholdResult> {
    check_state(rho_m, dim)?;
    check_tol(settings.tol)?;
    settings.optimizer.validate()?;
    let b = kd_search(rho_m, settings)?;
    let frame = optimizer::decode(&b.witness.1.params, dim)?;
    let certificate = frame_certificate(&frame, Family::Kd, rho_m, b.p, settings.scope)?;

    let p_w = wigner_threshold(rho_m, dim)?.p;
    let ordering = if b.p > p_w + ORDERING_MARGIN {
        Diagnostic::new(
            "POTENTIAL_GAP",
            format!("KD estimate {} exceeds p_W = {p_w}", b.p),
        )
    } else {
        Diagnostic::new(
            "ORDERING_CONSISTENT",
            format!("KD estimate {} is at most p_W = {p_w}", b.p),
        )
    };
    let mub = mub_claim_report(dim)?;
    let mub_note = Diagnostic::new(
        "MUB_STABILIZER_CLAIM",
        format!(
            "defining-basis states {}; other stabiliser states {}",
            if mub.defining_bases_pass {
                "real non-negative"
            } else {
                "NOT real non-negative"
            },
            match mub.others {
                Verdict::Confirmed => "real non-negative",
                Verdict::Refuted => "not all real non-negative",
            }
        ),
    )
    .with_verdict(mub.others);

    Ok(ThresholdResult {
        kind: ThresholdKind::Kd,
        p: b.p,
        upper_bound: true,
        certificate,
        scan: b.trace.iter().map(|(p, (w, _))| [*p, *w]).collect(),
        tol: settings.tol,
        seed: Some(settings.optimizer.seed),
        diagnostics: vec![
            ordering.with_value("p_kd", b.p).with_value("p_w", p_w),
            mub_note,
        ],
        mub_claim: Some(mub),
    })
}

/// Gross-frame threshold at the given scope: closed form for the state
/// alone, bisection on Ω otherwise.
fn gross_threshold(
    rho_m: &Operator,
    dim: Dimension,
    settings: &SearchSettings,
) -> Result<ThresholdResult> {
    if settings.scope == Scope::State {
        return wigner_threshold(rho_m, dim);
    }
    let frame = gross_wigner_frame(dim);
    let b = bisect_from_zero(
        |p| {
            let w = omega(&frame, &OperationalSet::new(rho_m, p)?, settings.scope)?.value;
            Ok((w <= settings.classify_tol, w))
        },
        settings.tol,
    )?;
    Ok(ThresholdResult {
        kind: ThresholdKind::Wigner,
        p: b.p,
        upper_bound: false,
        certificate: frame_certificate(&frame, Family::Gross, rho_m, b.p, settings.scope)?,
        scan: b.trace.iter().map(|(p, w)| [*p, *w]).collect(),
        tol: settings.tol,
        seed: None,
        diagnostics: Vec::new(),
        mub_claim: None,
    })
}

/// Minimum of the family thresholds; an upper bound on the infimum over all frames.
pub fn crit_threshold(
    rho_m: &Operator,
    dim: Dimension,
    families: &[Family],
    settings: &SearchSettings,
) -> Result<ThresholdResult> {
    check_state(rho_m, dim)?;
    if families.is_empty() {
        return Err(Error::InvalidInput(
            "crit threshold needs at least one frame family".into(),
        ));
    }
    let mut diagnostics = Vec::new();
    let mut best: Option<ThresholdResult> = None;
    for &family in families {
        let run = match family {
            Family::Gross => gross_threshold(rho_m, dim, settings),
            Family::Kd => kd_threshold(rho_m, dim, settings),
        };
        match run {
            Ok(r) => {
                diagnostics.push(
                    Diagnostic::new(
                        "FAMILY_THRESHOLD",
                        format!("{}: p = {}", family.as_str(), r.p),
                    )
                    .with_value(family.as_str(), r.p),
                );
                if best.as_ref().is_none_or(|b| r.p < b.p) {
                    best = Some(r);
                }
            }
            Err(Error::NoThreshold) => {
                diagnostics.push(Diagnostic::new(
                    "FAMILY_NO_THRESHOLD",
                    format!(
                        "{}: no frame found classical even at p = 1",
                        family.as_str()
                    ),
                ));
            }
            Err(e) => return Err(e),
        }
    }
    let winner = best.ok_or(Error::NoThreshold)?;
    diagnostics.extend(winner.diagnostics.iter().cloned());
    Ok(ThresholdResult {
        kind: ThresholdKind::Crit,
        p: winner.p,
        upper_bound: true,
        certificate: winner.certificate,
        scan: winner.scan,
        tol: settings.tol,
        seed: families
            .contains(&Family::Kd)
            .then_some(settings.optimizer.seed),
        diagnostics,
        mub_claim: if families.contains(&Family::Kd) {
            Some(mub_claim_report(dim)?)
        } else {
            None
        },
    })
}

/// Rebuild the frame named by a descriptor.
pub fn rebuild_frame(descriptor: &FrameDescriptor, dim: Dimension) -> Result<ExactFrame> {
    let builtin = |name: &str| match name {
        "computational" => Ok(Basis::computational(dim)),
        "fourier" => Ok(Basis::fourier(dim)),
        other => Err(Error::InvalidInput(format!(
            "cannot rebuild basis `{other}`"
        ))),
    };
    match descriptor {
        FrameDescriptor::Gross => Ok(gross_wigner_frame(dim)),
        FrameDescriptor::Kd { a, b } => kd_frame(&builtin(a)?, &builtin(b)?),
        FrameDescriptor::Unitaries { u, v } => frame_from_unitaries(u, v),
        FrameDescriptor::Parametrized { params } => optimizer::decode(params, dim),
        FrameDescriptor::External { note } => Err(Error::InvalidInput(format!(
            "cannot rebuild external frame ({note})"
        ))),
    }
}

/// Claimed and recomputed witness of a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub claimed: f64,
    pub recomputed: f64,
    pub pass: bool,
}

/// Re-evaluate a result's certificate from scratch for the magic state it was computed for.
pub fn verify_certificate(
    result: &ThresholdResult,
    rho_m: &Operator,
    classify_tol: f64,
) -> Result<CertificateCheck> {
    let dim = rho_m.dim();
    let noisy = depolarize(rho_m, result.p)?;
    match &result.certificate {
        Certificate::Frame {
            scope,
            descriptor,
            witness,
            ..
        } => {
            let frame = rebuild_frame(descriptor, dim)?;
            let recomputed = omega(&frame, &OperationalSet::new(rho_m, result.p)?, *scope)?.value;
            Ok(CertificateCheck {
                claimed: witness.value,
                recomputed,
                pass: (recomputed - witness.value).abs() <= 1e-9 && recomputed <= classify_tol,
            })
        }
        Certificate::Polytope(cert) => {
            let recomputed = linalg::max_abs_diff(&cert.reconstruct(dim), noisy.matrix());
            Ok(CertificateCheck {
                claimed: cert.residual,
                recomputed,
                pass: (recomputed - cert.residual).abs() <= 1e-9 && cert.certifies(&noisy),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{magic_state, random_state, MagicKind};
    use crate::representation::penalty;

    fn d3() -> Dimension {
        Dimension::new(3).unwrap()
    }

    fn strange() -> Operator {
        magic_state(&MagicKind::Strange, d3()).unwrap()
    }

    fn quick() -> SearchSettings {
        SearchSettings {
            optimizer: OptimizerConfig {
                restarts: 4,
                max_iterations: 60,
                seed: 1,
                ..Default::default()
            },
            tol: 1e-4,
            ..Default::default()
        }
    }

    /// Wigner values from the explicit phase-point sum, independent of the frame code.
    fn oracle_wigner(rho: &CMatrix) -> Vec<f64> {
        let d = 3usize;
        let w = |k: i64| {
            C64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * (k.rem_euclid(3) as f64) / 3.0,
            )
        };
        let mut out = Vec::new();
        for q in 0..d {
            for pp in 0..d {
                // A(q,p) |x> = ω^{2p(x-q)} |2q - x>
                let mut s = C64::new(0.0, 0.0);
                for x in 0..d {
                    let y = (2 * q + 3 - x) % 3;
                    s += w(2 * (pp as i64) * (x as i64 - q as i64)) * rho[(x, y)];
                }
                out.push(s.re / 3.0);
            }
        }
        out
    }
    use crate::linalg::C64;

    #[test]
    fn wigner_closed_form_matches_oracle() {
        let rho = strange();
        let vals = oracle_wigner(rho.matrix());
        let w_min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((w_min + 1.0 / 3.0).abs() < 1e-12);
        let expected = 9.0 * w_min.abs() / (1.0 + 9.0 * w_min.abs());
        let r = wigner_threshold(&rho, d3()).unwrap();
        assert!((r.p - expected).abs() < 1e-12);
        assert!((r.p - 0.75).abs() < 1e-12);
        assert!(r.diagnostics.is_empty());
        assert!(!r.upper_bound);
        assert!(verify_certificate(&r, &rho, 1e-9).unwrap().pass);
    }

    #[test]
    fn wigner_zero_for_stabilizer_and_mixed() {
        for s in stabilizer_states(d3()).states() {
            assert_eq!(wigner_threshold(s, d3()).unwrap().p, 0.0);
        }
        let mixed = Operator::maximally_mixed(d3());
        assert_eq!(wigner_threshold(&mixed, d3()).unwrap().p, 0.0);
        let d5 = Dimension::new(5).unwrap();
        assert!(matches!(
            wigner_threshold(&mixed, d5),
            Err(Error::DimensionMismatch {
                expected: 5,
                found: 3
            })
        ));
    }

    #[test]
    fn membership_examples() {
        let mixed = Operator::maximally_mixed(d3());
        let cert = stabilizer_polytope_membership(&mixed, d3())
            .unwrap()
            .unwrap();
        assert!(cert.residual < 1e-8 && cert.certifies(&mixed));
        assert!(stabilizer_polytope_membership(&strange(), d3())
            .unwrap()
            .is_none());
        let noisy = depolarize(&strange(), 0.99).unwrap();
        assert!(stabilizer_polytope_membership(&noisy, d3())
            .unwrap()
            .is_some());
        for s in stabilizer_states(d3()).states() {
            assert!(stabilizer_polytope_membership(s, d3()).unwrap().is_some());
        }
    }

    #[test]
    fn polytope_threshold_contains_wigner() {
        let rho = strange();
        let r = polytope_threshold(&rho, d3(), 1e-6).unwrap();
        let p_w = wigner_threshold(&rho, d3()).unwrap().p;
        assert!(p_w <= r.p + 2e-6);
        assert!(r
            .diagnostic("WIGNER_POLYTOPE_COINCIDENCE")
            .unwrap()
            .verdict
            .is_some());
        assert!(verify_certificate(&r, &rho, 1e-9).unwrap().pass);
        let stab = stabilizer_states(d3()).states()[4].clone();
        assert_eq!(polytope_threshold(&stab, d3(), 1e-6).unwrap().p, 0.0);
    }

    #[test]
    fn kd_threshold_state_scope() {
        let rho = strange();
        let r = kd_threshold(&rho, d3(), &quick()).unwrap();
        assert!(r.upper_bound);
        assert!(r.p <= 0.75 + ORDERING_MARGIN);
        assert!(
            r.diagnostic("ORDERING_CONSISTENT").is_some() ^ r.diagnostic("POTENTIAL_GAP").is_some()
        );
        assert!(verify_certificate(&r, &rho, 1e-9).unwrap().pass);
        let mub = r.mub_claim.as_ref().unwrap();
        assert!(mub.defining_bases_pass);
        assert_eq!(mub.entries.len(), 12);
    }

    #[test]
    fn kd_threshold_of_mixed_state_uses_the_mub_frame() {
        let mixed = Operator::maximally_mixed(d3());
        let r = kd_threshold(&mixed, d3(), &quick()).unwrap();
        assert_eq!(r.p, 0.0);
        match &r.certificate {
            Certificate::Frame { descriptor, .. } => {
                assert_eq!(
                    descriptor,
                    &FrameDescriptor::Parametrized {
                        params: vec![0.0; 18]
                    }
                )
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn kd_threshold_for_basis_states_is_zero() {
        let stab = stabilizer_states(d3());
        for k in [0, 2, 4] {
            let r = kd_threshold(&stab.states()[k], d3(), &quick()).unwrap();
            assert_eq!(r.p, 0.0);
        }
    }

    #[test]
    fn crit_with_gross_only_equals_wigner() {
        let rho = magic_state(&MagicKind::Norrell, d3()).unwrap();
        let crit = crit_threshold(&rho, d3(), &[Family::Gross], &quick()).unwrap();
        assert_eq!(crit.p, wigner_threshold(&rho, d3()).unwrap().p);
        assert!(crit.upper_bound);
        let both = crit_threshold(&rho, d3(), &[Family::Gross, Family::Kd], &quick()).unwrap();
        let kd = kd_threshold(&rho, d3(), &quick()).unwrap();
        assert_eq!(both.p, crit.p.min(kd.p));
    }

    #[test]
    fn gross_subtheory_scope_matches_state_scope() {
        let rho = strange();
        let settings = SearchSettings {
            scope: Scope::Subtheory,
            ..quick()
        };
        let r = crit_threshold(&rho, d3(), &[Family::Gross], &settings).unwrap();
        assert!((r.p - 0.75).abs() <= settings.tol);
    }

    #[test]
    fn monotone_wigner_scan() {
        let r = wigner_threshold(&random_state(d3(), 8), d3()).unwrap();
        for pair in r.scan.windows(2) {
            assert!(pair[1][1] <= pair[0][1] + 1e-12);
        }
        assert!(r.scan_csv().starts_with("p,witness\n0.0,"));
    }

    #[test]
    fn certificate_tampering_is_detected() {
        let rho = strange();
        let mut r = wigner_threshold(&rho, d3()).unwrap();
        r.p = 0.5;
        assert!(!verify_certificate(&r, &rho, 1e-9).unwrap().pass);
        let frame = gross_wigner_frame(d3());
        assert!(penalty(&represent_state(&frame, &depolarize(&rho, 0.5).unwrap()).unwrap()) > 0.0);
    }

    #[test]
    fn result_json_round_trip() {
        let r = polytope_threshold(&strange(), d3(), 1e-3).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        for key in [
            "\"kind\"",
            "\"p\"",
            "\"upper_bound\"",
            "\"certificate\"",
            "\"scan\"",
            "\"tol\"",
            "\"seed\"",
        ] {
            assert!(json.contains(key), "{key}");
        }
        let back: ThresholdResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
