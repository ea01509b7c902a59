use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{CheckReport, Verdict};
use crate::cutplane::{enumerate_subsets, ComponentSignature, CutPlanePoint, Sign, SubsetFilter};
use crate::error::{Error, Result};
use crate::functions::Evaluable;
use crate::measures::Estimate;
use crate::sampling::{self, DEFAULT_SEED};

/// Sample sizes and tolerances for the sampled checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    /// Random points per component for the symmetry check, and random upper
    /// points added to the grid for the positivity check.
    pub per_component: usize,
    /// Values of the upper coordinates tried per base in the non-dependence
    /// test.
    pub probes: usize,
    /// Bases (fixed lower coordinates) per component in the non-dependence
    /// test.
    pub bases: usize,
    pub seed: u64,
    pub symmetry_tol: f64,
    pub nondependence_tol: f64,
    /// `Im f >= -positivity_tol` is accepted as nonnegative.
    pub positivity_tol: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            per_component: 50,
            probes: 12,
            bases: 4,
            seed: DEFAULT_SEED,
            symmetry_tol: 1e-9,
            nondependence_tol: 1e-9,
            positivity_tol: 1e-12,
        }
    }
}

/// `sum over nonempty B of (-1)^(|B|+1) conj f(Psi_B(i 1, z))`.
pub fn symmetry_sum(f: &dyn Evaluable, z: &CutPlanePoint) -> Result<Estimate> {
    reflection_sum(f, z, SubsetFilter::NonEmpty)
}

fn reflection_sum(f: &dyn Evaluable, z: &CutPlanePoint, filter: SubsetFilter) -> Result<Estimate> {
    let unit = CutPlanePoint::imaginary_unit(z.dim())?;
    let mut total = Estimate::zero();
    for set in enumerate_subsets(z.dim(), filter)? {
        if set.is_empty() {
            continue;
        }
        let e = f.evaluate(&unit.psi(&set, z)?)?;
        total = total
            + Estimate {
                value: e.value.conj() * -set.parity_sign(),
                error: e.error,
            };
    }
    Ok(total)
}

/// `|f(z) - symmetry_sum(f, z)|`.
pub fn symmetry_residual(f: &dyn Evaluable, z: &CutPlanePoint) -> Result<f64> {
    let direct = f.value(z)?;
    Ok((direct - symmetry_sum(f, z)?.value).norm())
}

/// Value at a point with some lower-half coordinates, computed from values on
/// the poly upper half-plane only (sum over nonempty `B` inside the lower
/// index set of `z`). Assumes `f` has the symmetry and non-dependence
/// properties; it does not check them.
pub fn reconstruct_from_upper(f_upper: &dyn Evaluable, z: &CutPlanePoint) -> Result<Estimate> {
    let lower = z.signature().lower_index_set();
    if lower.is_empty() {
        return Err(Error::invalid(format!(
            "{z} lies in the poly upper half-plane; evaluate the function directly"
        )));
    }
    reflection_sum(f_upper, z, SubsetFilter::SubsetsOf(lower))
}

/// Symmetry formula on `per_component` random points of every component.
pub fn check_symmetry(f: &dyn Evaluable, cfg: &SampleConfig) -> Result<CheckReport> {
    let mut residuals = Vec::new();
    for sig in ComponentSignature::all(f.dim())? {
        for z in sampling::random_points(&sig, cfg.per_component, cfg.seed) {
            let r = symmetry_residual(f, &z)?;
            residuals.push((z, r));
        }
    }
    let config = json!({
        "check": "symmetry",
        "evidence": "sampled",
        "per_component": cfg.per_component,
        "seed": cfg.seed,
    });
    Ok(CheckReport::from_residuals(
        residuals,
        cfg.symmetry_tol,
        config,
    ))
}

/// For each component with a lower-half coordinate, fixes the lower
/// coordinates at `bases` sampled values, varies the upper coordinates over
/// `probes` sampled values and records the largest pairwise difference of
/// the function values.
pub fn nondependence_test(f: &dyn Evaluable, cfg: &SampleConfig) -> Result<CheckReport> {
    let n = f.dim();
    let config = json!({
        "check": "nondependence",
        "evidence": "sampled",
        "bases": cfg.bases,
        "probes": cfg.probes,
        "seed": cfg.seed,
    });
    let mut residuals = Vec::new();
    for sig in ComponentSignature::all(n)? {
        let lower = sig.lower_index_set();
        if lower.is_empty() || lower.len() == n {
            continue;
        }
        let mut rng = sampling::rng(cfg.seed ^ 0x6e6f_6e64, lower.mask());
        for _ in 0..cfg.bases {
            let base = sampling::random_point(&mut rng, &sig);
            let mut probes = Vec::with_capacity(cfg.probes);
            for _ in 0..cfg.probes {
                let coords: Vec<Complex64> = base
                    .coords()
                    .iter()
                    .zip(sig.signs())
                    .map(|(z, s)| match s {
                        Sign::Minus => *z,
                        Sign::Plus => sampling::random_coordinate(&mut rng, Sign::Plus),
                    })
                    .collect();
                let p = CutPlanePoint::new(coords)?;
                let v = f.value(&p)?;
                probes.push((p, v));
            }
            let mut worst = (0.0f64, 0usize);
            for a in 0..probes.len() {
                for b in a + 1..probes.len() {
                    let d = (probes[a].1 - probes[b].1).norm();
                    if !(d <= worst.0) {
                        worst = (d, a);
                    }
                }
            }
            residuals.push((probes[worst.1].0.clone(), worst.0));
        }
    }
    Ok(CheckReport::from_residuals(
        residuals,
        cfg.nondependence_tol,
        config,
    ))
}

/// `Im f >= -tol` on the grid `sampling::upper_grid(n)` plus
/// `per_component` random upper points. Residuals are `max(0, -Im f)`.
pub fn check_positivity(f: &dyn Evaluable, cfg: &SampleConfig) -> Result<CheckReport> {
    let n = f.dim();
    let mut points = sampling::upper_grid(n)?;
    points.extend(sampling::random_upper(n, cfg.per_component, cfg.seed));
    let mut residuals = Vec::with_capacity(points.len());
    for z in points {
        let im = f.value(&z)?.im;
        residuals.push((z, (-im).max(0.0)));
    }
    let config = json!({
        "check": "positivity",
        "evidence": "sampled",
        "grid_re": sampling::GRID_RE,
        "grid_im": sampling::GRID_IM,
        "random_points": cfg.per_component,
        "seed": cfg.seed,
    });
    Ok(CheckReport::from_residuals(
        residuals,
        cfg.positivity_tol,
        config,
    ))
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}
