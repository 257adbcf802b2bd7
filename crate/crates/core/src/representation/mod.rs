//! Quasiprobability representations in a given exact frame.
//!
//! States: `μ(λ) = Tr(F_λ ρ)`. Effects: `ξ(λ) = Tr(E D_λ)`. Channels:
//! `Γ(λ'|λ) = Tr(F_λ' 𝓔(D_λ))`. On top of these sit the KD distributions,
//! the non-classicality penalty and the witness Ω.

mod channel;
mod kd;

pub use channel::Channel;
pub use kd::{kd_matrix, kd_povm, kd_sequential, Povm};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{Basis, ExactFrame};
use crate::linalg::{self, c, CMatrix, C64};
use crate::qudit::{self, clifford_generators, depolarize, stabilizer_states, Dimension, Operator};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subject {
    State,
    Effect,
    Channel,
}

/// Complex values over a label set. Channel distributions are stored
/// row-major as (output λ', input λ), with labels `[out.., in..]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiDistribution {
    labels: Vec<Vec<usize>>,
    values: Vec<C64>,
    subject: Subject,
}

impl QuasiDistribution {
    pub fn new(labels: Vec<Vec<usize>>, values: Vec<C64>, subject: Subject) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} values",
                labels.len(),
                values.len()
            )));
        }
        Ok(QuasiDistribution {
            labels,
            values,
            subject,
        })
    }

    /// Unlabelled values, e.g. for quick penalty checks; labels are 0..n.
    pub fn from_values(values: Vec<C64>, subject: Subject) -> Self {
        let labels = (0..values.len()).map(|k| vec![k]).collect();
        QuasiDistribution {
            labels,
            values,
            subject,
        }
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn subject(&self) -> Subject {
        self.subject
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> C64 {
        self.values.iter().sum()
    }

    pub fn min_real(&self) -> f64 {
        self.values
            .iter()
            .fold(f64::INFINITY, |acc, z| acc.min(z.re))
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }

    /// Channel distributions as an n×n matrix (row = output label).
    pub fn as_matrix(&self) -> Option<CMatrix> {
        if self.subject != Subject::Channel {
            return None;
        }
        let n = (self.values.len() as f64).sqrt().round() as usize;
        Some(CMatrix::from_row_slice(n, n, &self.values))
    }
}

#[derive(Serialize, Deserialize)]
struct DistributionRecord {
    labels: Vec<Vec<usize>>,
    re: Vec<f64>,
    im: Vec<f64>,
    subject: Subject,
}

impl Serialize for QuasiDistribution {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        DistributionRecord {
            labels: self.labels.clone(),
            re: self.values.iter().map(|z| z.re).collect(),
            im: self.values.iter().map(|z| z.im).collect(),
            subject: self.subject,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuasiDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let rec = DistributionRecord::deserialize(deserializer)?;
        if rec.re.len() != rec.im.len() {
            return Err(serde::de::Error::custom("re and im lengths differ"));
        }
        let values = rec.re.iter().zip(&rec.im).map(|(&r, &i)| c(r, i)).collect();
        QuasiDistribution::new(rec.labels, values, rec.subject).map_err(serde::de::Error::custom)
    }
}

fn check_dim(frame: &ExactFrame, dim: Dimension) -> Result<()> {
    if frame.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: frame.dim().get(),
            found: dim.get(),
        });
    }
    Ok(())
}

fn frame_labels(frame: &ExactFrame) -> Vec<Vec<usize>> {
    frame.labels().iter().map(|l| l.to_vec()).collect()
}

/// μ(λ) = Tr(F_λ ρ)
pub fn represent_state(frame: &ExactFrame, rho: &Operator) -> Result<QuasiDistribution> {
    check_dim(frame, rho.dim())?;
    Ok(represent_state_matrix(frame, rho.matrix()))
}

pub(crate) fn represent_state_matrix(frame: &ExactFrame, rho: &CMatrix) -> QuasiDistribution {
    let values = frame
        .analysis()
        .iter()
        .map(|f| linalg::trace_product(f, rho))
        .collect();
    QuasiDistribution {
        labels: frame_labels(frame),
        values,
        subject: Subject::State,
    }
}

/// ξ(λ) = Tr(E D_λ)
pub fn represent_effect(frame: &ExactFrame, effect: &Operator) -> Result<QuasiDistribution> {
    check_dim(frame, effect.dim())?;
    let values = frame
        .synthesis()
        .iter()
        .map(|g| linalg::trace_product(effect.matrix(), g))
        .collect();
    Ok(QuasiDistribution {
        labels: frame_labels(frame),
        values,
        subject: Subject::Effect,
    })
}

/// Γ(λ'|λ) = Tr(F^out_λ' 𝓔(D^in_λ))
pub fn represent_channel(
    frame_in: &ExactFrame,
    frame_out: &ExactFrame,
    channel: &Channel,
) -> Result<QuasiDistribution> {
    check_dim(frame_in, channel.dim())?;
    check_dim(frame_out, channel.dim())?;
    let n_in = frame_in.len();
    let n_out = frame_out.len();
    let images: Vec<CMatrix> = frame_in
        .synthesis()
        .iter()
        .map(|g| channel.apply(g))
        .collect();
    let mut values = Vec::with_capacity(n_in * n_out);
    let mut labels = Vec::with_capacity(n_in * n_out);
    for (fo, lo) in frame_out.analysis().iter().zip(frame_out.labels()) {
        for (img, li) in images.iter().zip(frame_in.labels()) {
            values.push(linalg::trace_product(fo, img));
            labels.push(vec![lo[0], lo[1], li[0], li[1]]);
        }
    }
    Ok(QuasiDistribution {
        labels,
        values,
        subject: Subject::Channel,
    })
}

/// 𝒩 = 1 - Σ|ϱ|; zero for a classical distribution, negative otherwise.
pub fn kd_negativity(dist: &QuasiDistribution) -> f64 {
    1.0 - dist.values.iter().map(|z| z.norm()).sum::<f64>()
}

/// Σ|ϱ| - 1 ≥ 0, the unsigned counterpart of [`kd_negativity`].
pub fn negativity_magnitude(dist: &QuasiDistribution) -> f64 {
    -kd_negativity(dist)
}

/// 𝒲 = Σ|Im| + Σ|min(0, Re)|
pub fn penalty_values(values: &[C64]) -> f64 {
    values.iter().map(|z| z.im.abs() + (-z.re).max(0.0)).sum()
}

pub fn penalty(dist: &QuasiDistribution) -> f64 {
    penalty_values(&dist.values)
}

/// Every entry real and non-negative up to `tol`.
pub fn is_classical(dist: &QuasiDistribution, tol: f64) -> bool {
    dist.values.iter().all(|z| z.im.abs() < tol && z.re > -tol)
}

/// Which members of the operational set enter Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// Only the noisy magic state.
    #[default]
    State,
    /// Every state, channel and effect of the operational set.
    Subtheory,
}

impl std::str::FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "state" => Ok(Scope::State),
            "subtheory" => Ok(Scope::Subtheory),
            other => Err(Error::InvalidInput(format!(
                "unknown scope `{other}` (expected state|subtheory)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Member<T> {
    pub name: String,
    pub item: T,
}

/// The states, channels and effects over which Ω is maximised at a given noise level.
///
/// States: every pure stabiliser state plus the depolarised magic state.
/// Channels: identity, the depolarising channel at `p`, and the Clifford
/// generators. Effects: every rank-1 MUB projector and the unit effect.
#[derive(Debug, Clone)]
pub struct OperationalSet {
    dim: Dimension,
    p: f64,
    magic: Option<Operator>,
    states: Vec<Member<Operator>>,
    channels: Vec<Member<Channel>>,
    effects: Vec<Member<Operator>>,
}

impl OperationalSet {
    pub fn new(magic: &Operator, p: f64) -> Result<Self> {
        let mut set = Self::stabilizer_only(magic.dim(), p)?;
        let noisy = depolarize(magic, p)?;
        set.states.push(Member {
            name: "magic".into(),
            item: noisy.clone(),
        });
        set.magic = Some(noisy);
        Ok(set)
    }

    /// The subtheory members alone, without any magic state.
    pub fn stabilizer_only(dim: Dimension, p: f64) -> Result<Self> {
        let stab = stabilizer_states(dim);
        let states: Vec<Member<Operator>> = stab
            .states()
            .iter()
            .enumerate()
            .map(|(k, s)| Member {
                name: format!("stab[{k}]"),
                item: s.clone(),
            })
            .collect();
        let mut channels = vec![
            Member {
                name: "identity".into(),
                item: Channel::identity(dim),
            },
            Member {
                name: "depolarizing".into(),
                item: Channel::depolarizing(dim, p)?,
            },
        ];
        for (name, u) in clifford_generators(dim) {
            channels.push(Member {
                name: format!("clifford:{name}"),
                item: Channel::unitary(&u)?,
            });
        }
        let mut effects: Vec<Member<Operator>> = stab
            .states()
            .iter()
            .enumerate()
            .map(|(k, s)| Member {
                name: format!("proj[{k}]"),
                item: Operator::trusted(dim, s.matrix().clone(), qudit::Role::Effect),
            })
            .collect();
        effects.push(Member {
            name: "unit".into(),
            item: Operator::unit_effect(dim),
        });
        Ok(OperationalSet {
            dim,
            p,
            magic: None,
            states,
            channels,
            effects,
        })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn noise(&self) -> f64 {
        self.p
    }

    pub fn noisy_magic(&self) -> Option<&Operator> {
        self.magic.as_ref()
    }

    pub fn states(&self) -> &[Member<Operator>] {
        &self.states
    }

    pub fn channels(&self) -> &[Member<Channel>] {
        &self.channels
    }

    pub fn effects(&self) -> &[Member<Operator>] {
        &self.effects
    }
}

/// Value of Ω and the member attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub value: f64,
    pub argmax: String,
}

/// Ω(p, f): the largest penalty over the members selected by `scope`.
pub fn omega(frame: &ExactFrame, set: &OperationalSet, scope: Scope) -> Result<Witness> {
    check_dim(frame, set.dim())?;
    let mut best = Witness {
        value: 0.0,
        argmax: String::new(),
    };
    let mut consider = |name: &str, value: f64| {
        if value > best.value || best.argmax.is_empty() {
            best = Witness {
                value,
                argmax: name.to_string(),
            };
        }
    };
    if let Some(noisy) = &set.magic {
        consider("magic", penalty(&represent_state(frame, noisy)?));
    }
    if scope == Scope::Subtheory {
        for m in set.states.iter().filter(|m| m.name != "magic") {
            consider(&m.name, penalty(&represent_state(frame, &m.item)?));
        }
        for m in &set.channels {
            consider(&m.name, penalty(&represent_channel(frame, frame, &m.item)?));
        }
        for m in &set.effects {
            consider(&m.name, penalty(&represent_effect(frame, &m.item)?));
        }
    }
    Ok(best)
}

/// Penalty of every pure stabiliser state in the KD frame of two bases, with
/// a flag for states that belong to one of the two defining bases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerKdEntry {
    pub index: usize,
    pub group: usize,
    pub in_defining_basis: bool,
    pub penalty: f64,
}

pub fn stabilizer_penalties(
    frame: &ExactFrame,
    a: &Basis,
    b: &Basis,
) -> Result<Vec<StabilizerKdEntry>> {
    let dim = frame.dim();
    let stab = stabilizer_states(dim);
    let tol = Tolerances::DEFAULT.validation;
    let in_basis = |s: &CMatrix, basis: &Basis| {
        (0..dim.get()).any(|i| linalg::max_abs_diff(s, &basis.projector(i)) < tol)
    };
    stab.states()
        .iter()
        .enumerate()
        .map(|(k, s)| {
            Ok(StabilizerKdEntry {
                index: k,
                group: stab.group_of(k),
                in_defining_basis: in_basis(s.matrix(), a) || in_basis(s.matrix(), b),
                penalty: penalty(&represent_state(frame, s)?),
            })
        })
        .collect()
}
