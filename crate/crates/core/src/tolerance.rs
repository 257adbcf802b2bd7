/// Numerical tolerances shared by every module.
///
/// `construction` bounds the residuals of objects we build ourselves,
/// `validation` is used when checking frames and inputs, and
/// `classification` decides when a witness counts as zero inside the
/// threshold searches.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    pub construction: f64,
    pub validation: f64,
    pub classification: f64,
    /// Entrywise cut used by [`crate::representation::is_classical`].
    pub real_nonnegative: f64,
    /// Minimum modulus of a KD overlap <b_j|a_i> before the frame is rejected.
    pub overlap_floor: f64,
    pub lp_feasibility: f64,
    pub lp_infeasibility: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        construction: 1e-12,
        validation: 1e-10,
        classification: 1e-9,
        real_nonnegative: 1e-12,
        overlap_floor: 1e-8,
        lp_feasibility: 1e-8,
        lp_infeasibility: 1e-7,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
