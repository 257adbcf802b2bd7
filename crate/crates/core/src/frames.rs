//! Exact frames on the d²-dimensional operator space.
//!
//! A frame pairs analysis operators `F_λ` (states are represented by
//! `Tr(F_λ ρ)`) with synthesis operators `D_λ` (effects are represented by
//! `Tr(E D_λ)`). We require `Σ_λ F_λ = 𝟙` and `Tr D_λ = 1`, which makes state
//! representations sum to one and the unit effect map to the all-ones vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::qudit::{self, Dimension, Operator, Role, WeylIndex};
use crate::tolerance::Tolerances;

/// An orthonormal basis, stored as the columns of a unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    name: String,
    dim: Dimension,
    vectors: CMatrix,
}

impl Basis {
    pub fn new(name: impl Into<String>, dim: Dimension, vectors: CMatrix) -> Result<Self> {
        let name = name.into();
        let d = dim.get();
        if vectors.nrows() != d || vectors.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: vectors.nrows().max(vectors.ncols()),
            });
        }
        let residual = linalg::gram_residual(&vectors);
        if residual >= Tolerances::DEFAULT.validation {
            return Err(Error::NonOrthonormalBasis { name, residual });
        }
        Ok(Basis { name, dim, vectors })
    }

    pub fn computational(dim: Dimension) -> Self {
        let d = dim.get();
        Basis {
            name: "computational".into(),
            dim,
            vectors: CMatrix::identity(d, d),
        }
    }

    /// Columns Σ_x ω^{xk}|x>/√d.
    pub fn fourier(dim: Dimension) -> Self {
        Basis {
            name: "fourier".into(),
            dim,
            vectors: qudit::fourier_gate(dim),
        }
    }

    /// The basis U|0>, ..., U|d-1>.
    pub fn from_unitary(name: impl Into<String>, u: &Operator) -> Result<Self> {
        Basis::new(name, u.dim(), u.matrix().clone())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }

    pub fn projector(&self, i: usize) -> CMatrix {
        let v = self.vector(i);
        linalg::outer(&v, &v)
    }
}

/// How a frame was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FrameDescriptor {
    Gross,
    Kd {
        a: String,
        b: String,
    },
    Unitaries {
        u: Operator,
        v: Operator,
    },
    Parametrized {
        params: Vec<f64>,
    },
    /// Loaded from a file with an unrecognised or missing provenance.
    External {
        note: String,
    },
}

/// A d²-element frame with its biorthogonal dual. Labels are pairs: (p, q)
/// phase-space points for the Gross frame, (i, j) basis indices for KD frames.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactFrame {
    dim: Dimension,
    labels: Vec<[usize; 2]>,
    analysis: Vec<CMatrix>,
    synthesis: Vec<CMatrix>,
    descriptor: FrameDescriptor,
}

impl ExactFrame {
    /// Assemble a frame from raw parts; only shapes are checked here, the
    /// frame axioms are left to [`validate_frame`].
    pub fn from_parts(
        dim: Dimension,
        analysis: Vec<CMatrix>,
        synthesis: Vec<CMatrix>,
        descriptor: FrameDescriptor,
    ) -> Result<Self> {
        let d = dim.get();
        if analysis.len() != synthesis.len() {
            return Err(Error::InvalidInput(format!(
                "{} analysis operators but {} synthesis operators",
                analysis.len(),
                synthesis.len()
            )));
        }
        for m in analysis.iter().chain(synthesis.iter()) {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: m.nrows().max(m.ncols()),
                });
            }
        }
        let labels = (0..analysis.len()).map(|k| [k / d, k % d]).collect();
        Ok(ExactFrame {
            dim,
            labels,
            analysis,
            synthesis,
            descriptor,
        })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.analysis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.analysis.is_empty()
    }

    pub fn labels(&self) -> &[[usize; 2]] {
        &self.labels
    }

    pub fn analysis(&self) -> &[CMatrix] {
        &self.analysis
    }

    pub fn synthesis(&self) -> &[CMatrix] {
        &self.synthesis
    }

    pub fn descriptor(&self) -> &FrameDescriptor {
        &self.descriptor
    }

    pub fn with_descriptor(mut self, descriptor: FrameDescriptor) -> Self {
        self.descriptor = descriptor;
        self
    }

    /// Mutable access for building deliberately broken frames in tests and
    /// tooling.
    pub fn analysis_mut(&mut self) -> &mut [CMatrix] {
        &mut self.analysis
    }
}

/// Kirkwood-Dirac frame of two bases:
/// `F_(i,j) = |b_j><b_j|a_i><a_i|`, `D_(i,j) = |a_i><b_j| / <b_j|a_i>`.
pub fn kd_frame(basis_a: &Basis, basis_b: &Basis) -> Result<ExactFrame> {
    kd_frame_with_floor(basis_a, basis_b, Tolerances::DEFAULT.overlap_floor)
}

pub fn kd_frame_with_floor(basis_a: &Basis, basis_b: &Basis, floor: f64) -> Result<ExactFrame> {
    let dim = basis_a.dim();
    if basis_b.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim.get(),
            found: basis_b.dim().get(),
        });
    }
    let d = dim.get();
    let a = basis_a.matrix();
    let b = basis_b.matrix();
    // overlaps[(j, i)] = <b_j|a_i>
    let overlaps = b.adjoint() * a;
    let mut analysis = Vec::with_capacity(d * d);
    let mut synthesis = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let ov = overlaps[(j, i)];
            if ov.norm() <= floor {
                return Err(Error::DegenerateFrame {
                    i,
                    j,
                    modulus: ov.norm(),
                    floor,
                });
            }
            let inv = c(1.0, 0.0) / ov;
            // |b_j><a_i| and |a_i><b_j|
            let bj_ai = CMatrix::from_fn(d, d, |r, k| b[(r, j)] * a[(k, i)].conj());
            let ai_bj = CMatrix::from_fn(d, d, |r, k| a[(r, i)] * b[(k, j)].conj());
            analysis.push(bj_ai * ov);
            synthesis.push(ai_bj * inv);
        }
    }
    ExactFrame::from_parts(
        dim,
        analysis,
        synthesis,
        FrameDescriptor::Kd {
            a: basis_a.name().to_string(),
            b: basis_b.name().to_string(),
        },
    )
}

/// Phase-point operators A_λ = W_λ A₀ W_λ† with A₀ the parity operator
/// (1/d) Σ_w ω^{-pq/2} Z^p X^q. Analysis F_λ = A_λ/d, synthesis D_λ = A_λ.
pub fn gross_wigner_frame(dim: Dimension) -> ExactFrame {
    let d = dim.get();
    let a0 = WeylIndex::all(dim).fold(CMatrix::zeros(d, d), |acc, w| {
        acc + qudit::symmetric_weyl(dim, w)
    }) / c(d as f64, 0.0);
    let mut analysis = Vec::with_capacity(d * d);
    let mut synthesis = Vec::with_capacity(d * d);
    for w in WeylIndex::all(dim) {
        let wm = qudit::weyl_matrix(dim, w);
        let a = &wm * &a0 * wm.adjoint();
        // exact Hermitian symmetrisation removes rounding asymmetry
        let a = (&a + a.adjoint()).scale(0.5);
        analysis.push(&a / c(d as f64, 0.0));
        synthesis.push(a);
    }
    ExactFrame::from_parts(dim, analysis, synthesis, FrameDescriptor::Gross)
        .expect("shapes are consistent")
}

/// KD frame of the rotated bases U|k> and V|k>.
pub fn frame_from_unitaries(u: &Operator, v: &Operator) -> Result<ExactFrame> {
    for op in [u, v] {
        if op.role() != Role::Unitary {
            Operator::unitary(op.dim(), op.matrix().clone())?;
        }
    }
    let a = Basis::from_unitary("U", u)?;
    let b = Basis::from_unitary("V", v)?;
    Ok(
        kd_frame(&a, &b)?.with_descriptor(FrameDescriptor::Unitaries {
            u: u.clone(),
            v: v.clone(),
        }),
    )
}

/// Residual of one frame axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameValidationReport {
    pub checks: Vec<InvariantCheck>,
    pub pass: bool,
}

impl FrameValidationReport {
    pub fn residual(&self, name: &str) -> Option<f64> {
        self.checks
            .iter()
            .find(|ch| ch.name == name)
            .map(|ch| ch.residual)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |acc, ch| acc.max(ch.residual))
    }
}

pub const CHECK_CARDINALITY: &str = "cardinality";
pub const CHECK_BIORTHOGONALITY: &str = "biorthogonality";
pub const CHECK_ANALYSIS_SUM: &str = "analysis_sum_identity";
pub const CHECK_SYNTHESIS_TRACE: &str = "synthesis_unit_trace";
pub const CHECK_RECONSTRUCTION: &str = "reconstruction";

pub fn validate_frame(frame: &ExactFrame) -> FrameValidationReport {
    validate_frame_with(frame, Tolerances::DEFAULT.validation)
}

/// Evaluate the five frame axioms. Failures are reported, never raised.
pub fn validate_frame_with(frame: &ExactFrame, tolerance: f64) -> FrameValidationReport {
    let d = frame.dim().get();
    let n = frame.len();
    let f = frame.analysis();
    let g = frame.synthesis();
    let mut checks = Vec::with_capacity(5);
    let mut push = |name: &str, residual: f64| {
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        checks.push(InvariantCheck {
            name: name.to_string(),
            residual,
            tolerance,
            pass: residual < tolerance,
        });
    };

    push(CHECK_CARDINALITY, (n as f64 - (d * d) as f64).abs());

    let mut bio: f64 = 0.0;
    for (l, dl) in g.iter().enumerate() {
        for (m, fm) in f.iter().enumerate() {
            let target = if l == m { c(1.0, 0.0) } else { c(0.0, 0.0) };
            bio = bio.max((linalg::trace_product(dl, fm) - target).norm());
        }
    }
    push(CHECK_BIORTHOGONALITY, bio);

    let sum = f.iter().fold(CMatrix::zeros(d, d), |acc, m| acc + m);
    push(
        CHECK_ANALYSIS_SUM,
        linalg::max_abs_diff(&sum, &CMatrix::identity(d, d)),
    );

    let tr = g.iter().fold(0.0_f64, |acc, m| {
        acc.max((linalg::trace(m) - c(1.0, 0.0)).norm())
    });
    push(CHECK_SYNTHESIS_TRACE, tr);

    // Σ_λ Tr(F_λ E_rs) D_λ = E_rs on every matrix unit; Tr(F E_rs) = F[s, r].
    let mut rec: f64 = 0.0;
    for r in 0..d {
        for s in 0..d {
            let mut acc = CMatrix::zeros(d, d);
            for (fl, dl) in f.iter().zip(g) {
                acc += dl * fl[(s, r)];
            }
            acc[(r, s)] -= c(1.0, 0.0);
            rec = rec.max(linalg::max_abs(&acc));
        }
    }
    push(CHECK_RECONSTRUCTION, rec);

    let pass = checks.iter().all(|ch| ch.pass);
    FrameValidationReport { checks, pass }
}

/// Wire form `{"d", "descriptor", "F": [operator...], "D": [operator...]}`.
#[derive(Serialize, Deserialize)]
struct FrameRecord {
    d: usize,
    descriptor: FrameDescriptor,
    #[serde(rename = "F")]
    analysis: Vec<Operator>,
    #[serde(rename = "D")]
    synthesis: Vec<Operator>,
}

impl Serialize for ExactFrame {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let wrap = |ms: &[CMatrix]| -> Vec<Operator> {
            ms.iter()
                .map(|m| Operator::trusted(self.dim, m.clone(), Role::Generic))
                .collect()
        };
        FrameRecord {
            d: self.dim.get(),
            descriptor: self.descriptor.clone(),
            analysis: wrap(&self.analysis),
            synthesis: wrap(&self.synthesis),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactFrame {
    fn deserialize<De: serde::Deserializer<'de>>(
        deserializer: De,
    ) -> std::result::Result<Self, De::Error> {
        let rec = FrameRecord::deserialize(deserializer)?;
        let dim = Dimension::new(rec.d).map_err(serde::de::Error::custom)?;
        let unwrap = |ops: Vec<Operator>| -> std::result::Result<Vec<CMatrix>, De::Error> {
            ops.into_iter()
                .map(|op| {
                    if op.dim() == dim {
                        Ok(op.into_matrix())
                    } else {
                        Err(serde::de::Error::custom(format!(
                            "frame element has d = {}, frame has d = {}",
                            op.dim(),
                            dim
                        )))
                    }
                })
                .collect()
        };
        ExactFrame::from_parts(
            dim,
            unwrap(rec.analysis)?,
            unwrap(rec.synthesis)?,
            rec.descriptor,
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::qudit::{random_unitary, stabilizer_states};

    fn d3() -> Dimension {
        Dimension::new(3).unwrap()
    }

    #[test]
    fn mub_kd_frame_has_uniform_analysis_traces() {
        let frame = kd_frame(&Basis::computational(d3()), &Basis::fourier(d3())).unwrap();
        for f in frame.analysis() {
            assert!((linalg::trace(f) - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
        }
        let report = validate_frame(&frame);
        assert!(report.pass, "{report:?}");
        assert!(report.residual(CHECK_BIORTHOGONALITY).unwrap() < 1e-12);
    }

    #[test]
    fn identical_bases_are_degenerate() {
        let comp = Basis::computational(d3());
        match kd_frame(&comp, &comp) {
            Err(Error::DegenerateFrame { i, j, modulus, .. }) => {
                assert_ne!(i, j);
                assert_eq!(modulus, 0.0);
            }
            other => panic!("expected degenerate frame, got {other:?}"),
        }
    }

    #[test]
    fn non_orthonormal_basis_is_rejected() {
        let mut m = CMatrix::identity(3, 3);
        m[(0, 1)] = c(0.5, 0.0);
        assert!(matches!(
            Basis::new("bad", d3(), m),
            Err(Error::NonOrthonormalBasis { .. })
        ));
    }

    #[test]
    fn gross_frame_passes_validation_and_is_hermitian() {
        for d in [3, 5, 7] {
            let frame = gross_wigner_frame(Dimension::new(d).unwrap());
            let report = validate_frame(&frame);
            assert!(report.pass, "d={d}: {report:?}");
            for (f, g) in frame.analysis().iter().zip(frame.synthesis()) {
                assert!(linalg::hermiticity_residual(f) < 1e-15);
                assert!(linalg::hermiticity_residual(g) < 1e-15);
                assert!((linalg::trace(g) - c(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gross_representation_of_zero_state() {
        let frame = gross_wigner_frame(d3());
        let zero = stabilizer_states(d3()).states()[0].clone();
        let values: Vec<f64> = frame
            .analysis()
            .iter()
            .map(|f| linalg::trace_product(f, zero.matrix()).re)
            .collect();
        let thirds = values
            .iter()
            .filter(|v| (**v - 1.0 / 3.0).abs() < 1e-12)
            .count();
        let zeros = values.iter().filter(|v| v.abs() < 1e-12).count();
        assert_eq!((thirds, zeros), (3, 6), "{values:?}");
    }

    #[test]
    fn frame_from_unitaries_matches_kd_frame() {
        let id = Operator::identity(d3());
        let f = Operator::unitary(d3(), qudit::fourier_gate(d3())).unwrap();
        let a = frame_from_unitaries(&id, &f).unwrap();
        let b = kd_frame(&Basis::computational(d3()), &Basis::fourier(d3())).unwrap();
        assert_eq!(a.analysis(), b.analysis());
        assert_eq!(a.synthesis(), b.synthesis());
        assert!(matches!(a.descriptor(), FrameDescriptor::Unitaries { .. }));
        assert!(matches!(
            frame_from_unitaries(&id, &id),
            Err(Error::DegenerateFrame { .. })
        ));
    }

    #[test]
    fn seeded_random_unitary_frame_validates() {
        let frame =
            frame_from_unitaries(&random_unitary(d3(), 7), &random_unitary(d3(), 8)).unwrap();
        assert!(validate_frame(&frame).pass);
    }

    #[test]
    fn scaling_one_analysis_operator_breaks_biorthogonality() {
        let mut frame = gross_wigner_frame(d3());
        frame.analysis_mut()[4] *= c(1.01, 0.0);
        let report = validate_frame(&frame);
        assert!(!report.pass);
        let bio = report.residual(CHECK_BIORTHOGONALITY).unwrap();
        assert!((bio - 0.01).abs() < 1e-12, "{bio}");
    }

    #[test]
    fn construction_is_deterministic() {
        let a = gross_wigner_frame(Dimension::new(5).unwrap());
        let b = gross_wigner_frame(Dimension::new(5).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn gross_frame_is_weyl_covariant() {
        let dim = d3();
        let frame = gross_wigner_frame(dim);
        let rho = crate::qudit::random_state(dim, 5);
        let base: Vec<C64> = frame
            .analysis()
            .iter()
            .map(|f| linalg::trace_product(f, rho.matrix()))
            .collect();
        for w in WeylIndex::all(dim) {
            let wm = qudit::weyl_matrix(dim, w);
            let moved = &wm * rho.matrix() * wm.adjoint();
            let shifted: Vec<C64> = frame
                .analysis()
                .iter()
                .map(|f| linalg::trace_product(f, &moved))
                .collect();
            // every shifted value must be matched by a distinct original value
            let mut used = vec![false; base.len()];
            for v in &shifted {
                let k = (0..base.len()).find(|&k| !used[k] && (base[k] - v).norm() < 1e-10);
                let k = k.unwrap_or_else(|| panic!("no permutation for {w:?}"));
                used[k] = true;
            }
        }
    }

    #[test]
    fn json_round_trip_preserves_frame() {
        let frame = kd_frame(&Basis::computational(d3()), &Basis::fourier(d3())).unwrap();
        let text = serde_json::to_string(&frame).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["d"], 3);
        assert_eq!(v["descriptor"]["kind"], "kd");
        assert_eq!(v["F"].as_array().unwrap().len(), 9);
        let back: ExactFrame = serde_json::from_str(&text).unwrap();
        assert_eq!(back, frame);
    }
}
