use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::checks::{check_positivity, check_symmetry, nondependence_test, SampleConfig};
use super::extrapolate::extrapolate;
use super::{CheckReport, LimitConfig, Verdict};
use crate::cutplane::CutPlanePoint;
use crate::error::{Error, Result};
use crate::functions::{Evaluable, WithLinear};

/// Half-plane in which `z_j` runs to infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
}

/// Estimate of `lim f(z) / z_j` as `z_j -> infinity` along a Stoltz ray.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StoltzReport {
    pub axis: usize,
    pub direction: Direction,
    pub limit: Complex64,
    /// Distance between the last two extrapolants.
    pub delta: f64,
    pub order: Option<f64>,
    /// Limits from the alternate bases.
    pub alternates: Vec<Complex64>,
    /// Largest distance from `limit` to an alternate-base limit.
    pub base_spread: f64,
    /// `(r, f(z) / z_j)` along the ray from the main base.
    pub samples: Vec<(f64, Complex64)>,
    pub verdict: Verdict,
}

fn ray_point(
    base: &CutPlanePoint,
    j: usize,
    r: f64,
    theta: f64,
    dir: Direction,
) -> Result<CutPlanePoint> {
    let angle = match dir {
        Direction::Upper => theta,
        Direction::Lower => -theta,
    };
    base.with_coord(j, Complex64::from_polar(r, angle))
}

fn ray_limit(
    f: &dyn Evaluable,
    j: usize,
    base: &CutPlanePoint,
    cfg: &LimitConfig,
    dir: Direction,
) -> Result<(super::Extrapolation, Vec<(f64, Complex64)>)> {
    let mut samples = Vec::with_capacity(cfg.radius_sequence.len());
    for &r in &cfg.radius_sequence {
        let z = ray_point(base, j, r, cfg.stoltz_angle, dir)?;
        samples.push((r, f.value(&z)? / z.coords()[j]));
    }
    let h: Vec<f64> = samples.iter().map(|(r, _)| 1.0 / r).collect();
    let v: Vec<Complex64> = samples.iter().map(|(_, q)| *q).collect();
    Ok((extrapolate(&h, &v, cfg.extrapolation_order)?, samples))
}

/// Alternate bases: every coordinate other than `j` moved, half-plane kept.
fn alternate_bases(base: &CutPlanePoint, j: usize) -> Result<Vec<CutPlanePoint>> {
    (1..=3)
        .map(|m| {
            let m = m as f64;
            let coords = base
                .coords()
                .iter()
                .enumerate()
                .map(|(k, z)| {
                    if k == j {
                        *z
                    } else {
                        Complex64::new(z.re + 0.75 * m - 1.5, z.im * (1.0 + 0.5 * m))
                    }
                })
                .collect();
            CutPlanePoint::new(coords)
        })
        .collect()
}

/// `lim f(z) / z_j` as `z_j = r e^(+-i theta)` with `r` along
/// `cfg.radius_sequence`, extrapolated in `1 / r`. The same limit is taken
/// from three alternate bases; the verdict is inconclusive unless the
/// extrapolants settle and the bases agree to within `cfg.tol`.
pub fn stoltz_limit(
    f: &dyn Evaluable,
    j: usize,
    base: &CutPlanePoint,
    cfg: &LimitConfig,
    direction: Direction,
) -> Result<StoltzReport> {
    cfg.validate()?;
    if base.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            actual: base.dim(),
        });
    }
    if j >= base.dim() {
        return Err(Error::invalid(format!("axis {j} out of range")));
    }
    let (main, samples) = ray_limit(f, j, base, cfg, direction)?;
    let mut alternates = Vec::new();
    if base.dim() > 1 {
        for alt in alternate_bases(base, j)? {
            alternates.push(ray_limit(f, j, &alt, cfg, direction)?.0.estimate);
        }
    }
    let base_spread = alternates
        .iter()
        .map(|a| (a - main.estimate).norm())
        .fold(0.0, f64::max);
    let scale = main.estimate.norm().max(1.0);
    let settled = main.delta <= cfg.tol * scale && main.estimate.is_finite();
    let verdict = if settled && base_spread <= cfg.tol * scale {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Ok(StoltzReport {
        axis: j,
        direction,
        limit: main.estimate,
        delta: main.delta,
        order: main.order,
        alternates,
        base_spread,
        samples,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CharacterizeConfig {
    pub limits: LimitConfig,
    pub samples: SampleConfig,
}

/// Limits for one axis in both directions and the coefficient read off them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisLimits {
    pub upper: StoltzReport,
    pub lower: StoltzReport,
    pub d: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterizeReport {
    pub verdict: Verdict,
    /// Linear coefficients `d_j` recovered from the limits at infinity.
    pub d: Vec<f64>,
    pub limits: Vec<AxisLimits>,
    /// Condition (i): `Im f >= 0` on the poly upper half-plane.
    pub positivity: CheckReport,
    /// Condition (ii): the symmetry formula for `f - sum d_j z_j`.
    pub symmetry: CheckReport,
    /// Condition (iii): variable non-dependence of `f - sum d_j z_j`.
    pub nondependence: CheckReport,
}

impl CharacterizeReport {
    /// Verdicts of conditions (i), (ii), (iii).
    pub fn conditions(&self) -> [Verdict; 3] {
        [
            self.positivity.verdict,
            self.symmetry.verdict,
            self.nondependence.verdict,
        ]
    }
}

fn axis_limits(f: &dyn Evaluable, j: usize, cfg: &LimitConfig) -> Result<AxisLimits> {
    let base = CutPlanePoint::imaginary_unit(f.dim())?;
    let upper = stoltz_limit(f, j, &base, cfg, Direction::Upper)?;
    let lower = stoltz_limit(f, j, &base, cfg, Direction::Lower)?;
    let limit = upper.limit;
    let scale = limit.norm().max(1.0);
    let agree = (upper.limit - lower.limit).norm() <= cfg.tol * scale;
    let mut d = limit.re;
    if d.abs() <= cfg.tol {
        d = 0.0;
    }
    let verdict = if upper.verdict != Verdict::Pass || lower.verdict != Verdict::Pass || !agree {
        Verdict::Inconclusive
    } else if limit.im.abs() > cfg.tol * scale || d < 0.0 {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Ok(AxisLimits {
        upper,
        lower,
        d,
        verdict,
    })
}

/// Decides whether `f` is the symmetric extension of a Herglotz-Nevanlinna
/// function with linear part `sum d_j z_j`.
///
/// The coefficients `d_j` come from the limits of `f / z_j` at infinity in
/// both half-planes. Then condition (i) is checked on `f`, and conditions
/// (ii) and (iii) on `f - sum d_j z_j`. Any inconclusive step makes the
/// verdict inconclusive.
pub fn characterize(f: &dyn Evaluable, cfg: &CharacterizeConfig) -> Result<CharacterizeReport> {
    let limits = (0..f.dim())
        .map(|j| axis_limits(f, j, &cfg.limits))
        .collect::<Result<Vec<_>>>()?;
    let d: Vec<f64> = limits.iter().map(|l| l.d.max(0.0)).collect();
    let reduced = WithLinear::new(f, d.iter().map(|x| -x).collect())?;
    let positivity = check_positivity(f, &cfg.samples)?;
    let symmetry = check_symmetry(&reduced, &cfg.samples)?;
    let nondependence = nondependence_test(&reduced, &cfg.samples)?;
    let verdict = Verdict::all(limits.iter().map(|l| l.verdict).chain([
        positivity.verdict,
        symmetry.verdict,
        nondependence.verdict,
    ]));
    Ok(CharacterizeReport {
        verdict,
        d,
        limits,
        positivity,
        symmetry,
        nondependence,
    })
}
