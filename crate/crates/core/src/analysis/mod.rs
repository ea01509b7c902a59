//! Symmetry and non-dependence checks, reconstruction from the poly upper
//! half-plane, growth limits at infinity and Stieltjes inversion.
//!
//! Every universal statement ("for all z") is tested on finite sample sets;
//! reports say so in their configuration echo.

mod checks;
mod extrapolate;
mod limits;
mod stieltjes;

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

pub use checks::{
    check_positivity, check_symmetry, nondependence_test, reconstruct_from_upper,
    symmetry_residual, symmetry_sum, SampleConfig,
};
pub use extrapolate::{extrapolate, neville, Extrapolation};
pub use limits::{
    characterize, stoltz_limit, AxisLimits, CharacterizeConfig, CharacterizeReport, Direction,
    StoltzReport,
};
pub use stieltjes::{
    stieltjes_cauchy_type, stieltjes_classic, Factor, InversionReport, InversionRow,
    StieltjesConfig, TestFunction,
};

use crate::cutplane::CutPlanePoint;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Conjunction in which any inconclusive member wins over fail.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut out = Verdict::Pass;
        for v in verdicts {
            match v {
                Verdict::Inconclusive => return Verdict::Inconclusive,
                Verdict::Fail => out = Verdict::Fail,
                Verdict::Pass => {}
            }
        }
        out
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: CutPlanePoint,
    pub residual: f64,
}

/// Result of a sampled check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub max_residual: f64,
    pub tolerance: f64,
    /// Sample points whose residual exceeds the tolerance, worst first.
    pub witnesses: Vec<Witness>,
    pub config: serde_json::Value,
}

/// At most this many witnesses are kept in a report.
pub const MAX_WITNESSES: usize = 10;

impl CheckReport {
    pub(crate) fn from_residuals(
        residuals: Vec<(CutPlanePoint, f64)>,
        tolerance: f64,
        config: serde_json::Value,
    ) -> CheckReport {
        let max_residual = residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max);
        let mut witnesses: Vec<Witness> = residuals
            .into_iter()
            .filter(|(_, r)| !(*r <= tolerance))
            .map(|(point, residual)| Witness { point, residual })
            .collect();
        witnesses.sort_by(|a, b| b.residual.total_cmp(&a.residual));
        witnesses.truncate(MAX_WITNESSES);
        let verdict = if witnesses.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckReport {
            verdict,
            max_residual,
            tolerance,
            witnesses,
            config,
        }
    }
}

/// Sampling and extrapolation parameters for limits at infinity and at the
/// real boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LimitConfig {
    /// Opening angle of the Stoltz ray, measured from the real axis.
    pub stoltz_angle: f64,
    /// Radii `r` along the Stoltz ray, increasing.
    pub radius_sequence: Vec<f64>,
    /// Heights `y` for boundary limits, decreasing.
    pub y_sequence: Vec<f64>,
    /// Polynomial degree of the extrapolation (uses `order + 1` points).
    pub extrapolation_order: usize,
    /// Agreement required between the last two extrapolants, and between
    /// limits taken from different bases or directions.
    pub tol: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            stoltz_angle: FRAC_PI_4,
            radius_sequence: (3..=12).map(|k| 2f64.powi(k)).collect(),
            y_sequence: (1..=10).map(|k| 2f64.powi(-k)).collect(),
            extrapolation_order: 2,
            tol: 1e-6,
        }
    }
}

impl LimitConfig {
    pub fn validate(&self) -> Result<()> {
        let angle = self.stoltz_angle;
        if !(angle > 0.0 && angle <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid(format!(
                "stoltz_angle {angle} outside (0, pi/2]"
            )));
        }
        let need = self.extrapolation_order + 2;
        if self.radius_sequence.len() < need || self.y_sequence.len() < need {
            return Err(Error::invalid(format!(
                "extrapolation of order {} needs at least {need} samples",
                self.extrapolation_order
            )));
        }
        if self
            .radius_sequence
            .iter()
            .any(|r| !(*r > 0.0 && r.is_finite()))
            || self.radius_sequence.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::invalid(
                "radius_sequence must be positive and increasing",
            ));
        }
        if self.y_sequence.iter().any(|y| !(*y > 0.0 && y.is_finite()))
            || self.y_sequence.windows(2).any(|w| w[0] <= w[1])
        {
            return Err(Error::invalid("y_sequence must be positive and decreasing"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid("tol must be positive"));
        }
        Ok(())
    }
}
