//! Representable positive Borel measures on `R^n` and integration against
//! them.
//!
//! The family is closed: atoms, scaled Lebesgue measure, products of
//! one-dimensional densities, pushforwards of a density along an affine line,
//! and finite sums of these. Integrals over `R` use adaptive Gauss-Kronrod
//! quadrature on the compactified axis `t = tan(theta)`; integrals over `R^n`
//! are iterated axis by axis.

mod density;
pub mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use density::{Density, RationalForm};
pub use quadrature::{Estimate, Interval, QuadratureConfig};

use crate::cutplane::{CutPlanePoint, I};
use crate::error::{Error, Result};
use crate::kernels::{
    a_factor_unchecked, a_product_unchecked, mixed_rho_vectors, n_factor_unchecked, Rho,
};
use quadrature::{integrate_line, integrate_real_line, product};

/// The affine line `s -> alpha * s + beta` in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineCurve {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl AffineCurve {
    pub fn point(&self, s: f64) -> Vec<f64> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| a * s + b)
            .collect()
    }

    fn write_point(&self, s: f64, out: &mut [f64]) {
        for ((slot, a), b) in out.iter_mut().zip(&self.alpha).zip(&self.beta) {
            *slot = a * s + b;
        }
    }

    /// Parameter values where coordinate `axis` hits `t`.
    fn preimage(&self, axis: usize, t: f64) -> Option<f64> {
        let a = self.alpha[axis];
        (a != 0.0).then(|| (t - self.beta[axis]) / a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Measure {
    Atomic {
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
    /// `c` times Lebesgue measure on `R^dim`.
    LebesgueScaled {
        dim: usize,
        c: f64,
    },
    ProductDensity {
        factors: Vec<Density>,
    },
    CurvePushforward {
        curve: AffineCurve,
        weight: Density,
        scale: f64,
    },
    Sum {
        terms: Vec<Measure>,
    },
}

/// Result of the growth check `int prod (1 + t_l^2)^-1 dmu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Growth {
    pub finite: bool,
    pub value: f64,
}

impl Measure {
    pub fn lebesgue(dim: usize) -> Measure {
        Measure::LebesgueScaled { dim, c: 1.0 }
    }

    pub fn zero(dim: usize) -> Measure {
        Measure::LebesgueScaled { dim, c: 0.0 }
    }

    pub fn dirac(point: Vec<f64>, weight: f64) -> Measure {
        Measure::Atomic {
            points: vec![point],
            weights: vec![weight],
        }
    }

    /// `mu_2(U) = pi * int chi_U(t, t) dt`, the diagonal measure on `R^2`.
    pub fn diagonal() -> Measure {
        Measure::CurvePushforward {
            curve: AffineCurve {
                alpha: vec![1.0, 1.0],
                beta: vec![0.0, 0.0],
            },
            weight: Density::Constant { c: 1.0 },
            scale: PI,
        }
    }

    /// `(9/2) lambda^2 + w (x) lambda + lambda (x) w` with `w = (1 + t^2)^-1`.
    /// Represents the same function on the upper poly half-plane as
    /// `diagonal() + 5 lambda^2`.
    pub fn f4_alternative() -> Measure {
        Measure::Sum {
            terms: vec![
                Measure::LebesgueScaled { dim: 2, c: 4.5 },
                Measure::ProductDensity {
                    factors: vec![Density::CauchyWeight, Density::Constant { c: 1.0 }],
                },
                Measure::ProductDensity {
                    factors: vec![Density::Constant { c: 1.0 }, Density::CauchyWeight],
                },
            ],
        }
    }

    /// `diagonal() + 5 lambda^2`.
    pub fn f4_defining() -> Measure {
        Measure::Sum {
            terms: vec![
                Measure::diagonal(),
                Measure::LebesgueScaled { dim: 2, c: 5.0 },
            ],
        }
    }

    /// Built-in measures by name, as accepted on the command line.
    pub fn builtin(name: &str) -> Result<Measure> {
        let m = match name {
            "zero" | "zero1" => Measure::zero(1),
            "zero2" => Measure::zero(2),
            "lebesgue1" => Measure::lebesgue(1),
            "lebesgue2" => Measure::lebesgue(2),
            "lebesgue3" => Measure::lebesgue(3),
            "mu2" | "diagonal" => Measure::diagonal(),
            "f4" => Measure::f4_defining(),
            "f4-alt" | "f4_alt" => Measure::f4_alternative(),
            "pi-delta0" => Measure::dirac(vec![0.0], PI),
            other => {
                return Err(Error::Parse(format!("unknown built-in measure `{other}`")));
            }
        };
        Ok(m)
    }

    pub fn from_json(text: &str) -> Result<Measure> {
        let m: Measure = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        match self {
            Measure::Atomic { points, .. } => points.first().map_or(0, Vec::len),
            Measure::LebesgueScaled { dim, .. } => *dim,
            Measure::ProductDensity { factors } => factors.len(),
            Measure::CurvePushforward { curve, .. } => curve.alpha.len(),
            Measure::Sum { terms } => terms.first().map_or(0, Measure::dim),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMeasure(msg));
        match self {
            Measure::Atomic { points, weights } => {
                if points.is_empty() {
                    return bad("atomic measure needs at least one point".into());
                }
                if points.len() != weights.len() {
                    return bad(format!(
                        "{} points but {} weights",
                        points.len(),
                        weights.len()
                    ));
                }
                let n = points[0].len();
                if n == 0 || points.iter().any(|p| p.len() != n) {
                    return bad("atom coordinates must share a positive dimension".into());
                }
                if points.iter().flatten().any(|x| !x.is_finite()) {
                    return bad("atom coordinates must be finite".into());
                }
                if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
                    return bad("atom weights must be finite and nonnegative".into());
                }
            }
            Measure::LebesgueScaled { dim, c } => {
                if *dim == 0 {
                    return bad("Lebesgue measure needs a positive dimension".into());
                }
                if !(*c >= 0.0 && c.is_finite()) {
                    return bad(format!("Lebesgue scale must be nonnegative, got {c}"));
                }
            }
            Measure::ProductDensity { factors } => {
                if factors.is_empty() {
                    return bad("product density needs at least one factor".into());
                }
                factors.iter().try_for_each(Density::validate)?;
            }
            Measure::CurvePushforward {
                curve,
                weight,
                scale,
            } => {
                if curve.alpha.is_empty() || curve.alpha.len() != curve.beta.len() {
                    return bad("curve alpha and beta must have equal positive length".into());
                }
                if curve.alpha.iter().all(|a| *a == 0.0) {
                    return bad("curve is degenerate: every alpha is zero".into());
                }
                if curve
                    .alpha
                    .iter()
                    .chain(&curve.beta)
                    .any(|x| !x.is_finite())
                {
                    return bad("curve coefficients must be finite".into());
                }
                if !(*scale > 0.0 && scale.is_finite()) {
                    return bad(format!("curve scale must be positive, got {scale}"));
                }
                weight.validate()?;
            }
            Measure::Sum { terms } => {
                if terms.is_empty() {
                    return bad("sum needs at least one term".into());
                }
                let n = terms[0].dim();
                for term in terms {
                    term.validate()?;
                    if term.dim() != n {
                        return bad(format!("sum mixes dimensions {n} and {}", term.dim()));
                    }
                }
            }
        }
        Ok(())
    }

    /// `c * mu`. Product densities can be scaled only through a constant
    /// factor.
    pub fn scaled(&self, c: f64) -> Result<Measure> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidMeasure(format!(
                "scale must be nonnegative, got {c}"
            )));
        }
        Ok(match self {
            Measure::Atomic { points, weights } => Measure::Atomic {
                points: points.clone(),
                weights: weights.iter().map(|w| w * c).collect(),
            },
            Measure::LebesgueScaled { dim, c: c0 } => Measure::LebesgueScaled {
                dim: *dim,
                c: c0 * c,
            },
            Measure::ProductDensity { factors } => {
                let mut factors = factors.clone();
                let slot = factors
                    .iter_mut()
                    .find(|d| matches!(d, Density::Constant { .. }))
                    .ok_or_else(|| {
                        Error::InvalidMeasure(
                            "cannot scale a product density without a constant factor".into(),
                        )
                    })?;
                if let Density::Constant { c: c0 } = slot {
                    *c0 *= c;
                }
                Measure::ProductDensity { factors }
            }
            Measure::CurvePushforward {
                curve,
                weight,
                scale,
            } => {
                if c == 0.0 {
                    return Ok(Measure::zero(curve.alpha.len()));
                }
                Measure::CurvePushforward {
                    curve: curve.clone(),
                    weight: weight.clone(),
                    scale: scale * c,
                }
            }
            Measure::Sum { terms } => Measure::Sum {
                terms: terms.iter().map(|m| m.scaled(c)).collect::<Result<_>>()?,
            },
        })
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: n,
            });
        }
        Ok(())
    }
}

/// Integrates `f` against `mu`.
pub fn integrate<F>(mu: &Measure, f: F, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(&[f64]) -> Complex64,
{
    let hints = vec![Vec::new(); mu.dim()];
    try_integrate(mu, &|t: &[f64]| Ok(f(t)), cfg, &hints)
}

/// Integrates a fallible `f` against `mu`. `hints[k]` lists coordinates along
/// axis `k` near which `f` varies rapidly.
pub fn try_integrate(
    mu: &Measure,
    f: &dyn Fn(&[f64]) -> Result<Complex64>,
    cfg: &QuadratureConfig,
    hints: &[Vec<f64>],
) -> Result<Estimate> {
    cfg.validate()?;
    if hints.len() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            actual: hints.len(),
        });
    }
    match mu {
        Measure::Atomic { points, weights } => {
            let mut total = Complex64::new(0.0, 0.0);
            for (p, w) in points.iter().zip(weights) {
                if *w != 0.0 {
                    total += f(p)? * *w;
                }
            }
            Ok(Estimate::exact(total))
        }
        Measure::LebesgueScaled { dim, c } => {
            if *c == 0.0 {
                return Ok(Estimate::zero());
            }
            let factors = vec![Density::Constant { c: 1.0 }; *dim];
            Ok(iterated(&factors, f, cfg, hints)?.scale(*c))
        }
        Measure::ProductDensity { factors } => {
            if factors.iter().any(Density::is_zero) {
                return Ok(Estimate::zero());
            }
            iterated(factors, f, cfg, hints)
        }
        Measure::CurvePushforward {
            curve,
            weight,
            scale,
        } => {
            let mut breaks = weight.breakpoints();
            for (axis, axis_hints) in hints.iter().enumerate() {
                breaks.extend(axis_hints.iter().filter_map(|&h| curve.preimage(axis, h)));
            }
            let mut point = vec![0.0; curve.alpha.len()];
            let line = integrate_real_line(
                |s| {
                    let w = weight.eval(s);
                    if w == 0.0 {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    curve.write_point(s, &mut point);
                    Ok(f(&point)? * w)
                },
                &breaks,
                cfg,
            )?;
            Ok(line.scale(*scale))
        }
        Measure::Sum { terms } => {
            let mut total = Estimate::zero();
            for term in terms {
                total = total + try_integrate(term, f, cfg, hints)?;
            }
            Ok(total)
        }
    }
}

/// Axis-by-axis integration against `prod factors[k](t_k) dt_k`.
fn iterated(
    factors: &[Density],
    f: &dyn Fn(&[f64]) -> Result<Complex64>,
    cfg: &QuadratureConfig,
    hints: &[Vec<f64>],
) -> Result<Estimate> {
    let mut prefix = Vec::with_capacity(factors.len());
    iterate_axis(0, factors, f, cfg, hints, &mut prefix)
}

fn iterate_axis(
    axis: usize,
    factors: &[Density],
    f: &dyn Fn(&[f64]) -> Result<Complex64>,
    cfg: &QuadratureConfig,
    hints: &[Vec<f64>],
    prefix: &mut Vec<f64>,
) -> Result<Estimate> {
    let density = &factors[axis];
    let mut breaks = density.breakpoints();
    breaks.extend_from_slice(&hints[axis]);
    let last = axis + 1 == factors.len();
    let mut error_acc = 0.0f64;
    let mut weight_acc = 0.0f64;
    let est = integrate_real_line(
        |t| {
            let w = density.eval(t);
            if w == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            prefix.push(t);
            let inner = if last {
                f(prefix).map(Estimate::exact)
            } else {
                iterate_axis(axis + 1, factors, f, cfg, hints, prefix)
            };
            prefix.pop();
            let inner = inner?;
            error_acc = error_acc.max(inner.error);
            weight_acc = w.max(weight_acc);
            Ok(inner.value * w)
        },
        &breaks,
        cfg,
    )?;
    // The inner errors enter through a weighted average of the inner errors;
    // bound them by the largest one times the mass seen by the rule.
    let inner_error = if last {
        0.0
    } else {
        error_acc * mass_bound(density)
    };
    Ok(Estimate {
        value: est.value,
        error: est.error + inner_error,
    })
}

fn mass_bound(density: &Density) -> f64 {
    match density {
        // Lebesgue mass is infinite; inner errors are absolute tolerances that
        // shrink with the integrand, so report them at unit mass.
        Density::Constant { c } => *c,
        Density::CauchyWeight => PI,
        Density::Gaussian { .. } => 1.0,
        Density::Rational { name } => match name {
            RationalForm::CauchySquared | RationalForm::SquareOverCauchySquared => PI / 2.0,
        },
    }
}

/// `int prod_l (1 + t_l^2)^-1 dmu`.
pub fn check_growth(mu: &Measure, cfg: &QuadratureConfig) -> Result<Growth> {
    mu.validate()?;
    let weight = |t: &[f64]| {
        let v: f64 = t.iter().map(|x| 1.0 / (1.0 + x * x)).product();
        Complex64::new(v, 0.0)
    };
    match integrate(mu, weight, cfg) {
        Ok(e) => Ok(Growth {
            finite: e.value.re.is_finite(),
            value: e.value.re,
        }),
        Err(Error::Divergence(_)) => Ok(Growth {
            finite: false,
            value: f64::INFINITY,
        }),
        Err(e) => Err(e),
    }
}

/// One-dimensional line integral `int g(t) w(t) dt` with breakpoints.
fn density_line(
    density: &Density,
    g: impl Fn(f64) -> Complex64,
    extra_breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if density.is_zero() {
        return Ok(Estimate::zero());
    }
    let mut breaks = density.breakpoints();
    breaks.extend_from_slice(extra_breaks);
    integrate_real_line(|t| Ok(g(t) * density.eval(t)), &breaks, cfg)
}

fn breakpoints_of(z: &[Complex64]) -> Vec<Vec<f64>> {
    z.iter().map(|zj| vec![zj.re]).collect()
}

/// `int K_n(z, t) dmu(t)`, computed as `i (2 a(z) - a(i 1))` with `a` from
/// [`a_product_integral`].
pub fn kernel_integral(
    mu: &Measure,
    z: &CutPlanePoint,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    mu.check_dim(z.dim())?;
    let fixed = a_product_integral(mu, &vec![I; z.dim()], cfg)?;
    kernel_integral_with(mu, z, fixed, cfg)
}

/// [`kernel_integral`] with `a(i 1)` supplied by the caller.
pub fn kernel_integral_with(
    mu: &Measure,
    z: &CutPlanePoint,
    fixed: Estimate,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    mu.check_dim(z.dim())?;
    let moving = a_product_integral(mu, z.coords(), cfg)?;
    Ok(Estimate {
        value: I * (moving.value * 2.0 - fixed.value),
        error: 2.0 * moving.error + fixed.error,
    })
}

/// `a(z) = int prod_l A(z_l, t_l) dmu(t)`. Product measures need only
/// one-dimensional integrals.
pub fn a_product_integral(
    mu: &Measure,
    z: &[Complex64],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    match mu {
        Measure::LebesgueScaled { dim, c } => {
            if *c == 0.0 {
                return Ok(Estimate::zero());
            }
            let factors = vec![Density::Constant { c: 1.0 }; *dim];
            Ok(separable_a(&factors, z, cfg)?.scale(*c))
        }
        Measure::ProductDensity { factors } => separable_a(factors, z, cfg),
        Measure::Sum { terms } => {
            let mut total = Estimate::zero();
            for term in terms {
                total = total + a_product_integral(term, z, cfg)?;
            }
            Ok(total)
        }
        Measure::Atomic { .. } | Measure::CurvePushforward { .. } => try_integrate(
            mu,
            &|t: &[f64]| Ok(a_product_unchecked(z, t)),
            cfg,
            &breakpoints_of(z),
        ),
    }
}

fn separable_a(factors: &[Density], z: &[Complex64], cfg: &QuadratureConfig) -> Result<Estimate> {
    if factors.iter().any(Density::is_zero) {
        return Ok(Estimate::zero());
    }
    let lines = factors
        .iter()
        .zip(z)
        .map(|(density, &zl)| density_line(density, |t| a_factor_unchecked(zl, t), &[zl.re], cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(product(&lines))
}

/// `sum over rho in {-1,0,1}^n containing both -1 and 1 of
/// int prod_j N_{rho_j}(z_j, t_j) dmu(t)`.
///
/// For `n = 1` the sum is empty and the result is exactly zero.
pub fn nevanlinna_residual(
    mu: &Measure,
    z: &CutPlanePoint,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    mu.check_dim(z.dim())?;
    if !z.is_upper() {
        return Err(Error::invalid(format!(
            "the Nevanlinna condition is sampled on the upper poly half-plane, got {z}"
        )));
    }
    let rhos = mixed_rho_vectors(z.dim());
    if rhos.is_empty() {
        return Ok(Estimate::zero());
    }
    nevanlinna_terms(mu, z.coords(), &rhos, cfg)
}

fn nevanlinna_terms(
    mu: &Measure,
    z: &[Complex64],
    rhos: &[Vec<Rho>],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    match mu {
        Measure::LebesgueScaled { dim, c } => {
            if *c == 0.0 {
                return Ok(Estimate::zero());
            }
            let factors = vec![Density::Constant { c: 1.0 }; *dim];
            Ok(separable_nevanlinna(&factors, z, rhos, cfg)?.scale(*c))
        }
        Measure::ProductDensity { factors } => separable_nevanlinna(factors, z, rhos, cfg),
        Measure::Sum { terms } => {
            let mut total = Estimate::zero();
            for term in terms {
                total = total + nevanlinna_terms(term, z, rhos, cfg)?;
            }
            Ok(total)
        }
        Measure::Atomic { .. } | Measure::CurvePushforward { .. } => {
            let integrand = |t: &[f64]| {
                let mut sum = Complex64::new(0.0, 0.0);
                for rho in rhos {
                    let mut p = Complex64::new(1.0, 0.0);
                    for ((r, zj), tj) in rho.iter().zip(z).zip(t) {
                        p *= n_factor_unchecked(*r, *zj, *tj);
                    }
                    sum += p;
                }
                Ok(sum)
            };
            try_integrate(mu, &integrand, cfg, &breakpoints_of(z))
        }
    }
}

fn separable_nevanlinna(
    factors: &[Density],
    z: &[Complex64],
    rhos: &[Vec<Rho>],
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if factors.iter().any(Density::is_zero) {
        return Ok(Estimate::zero());
    }
    // table[j][r] = int N_r(z_j, t) w_j(t) dt
    let mut table = Vec::with_capacity(z.len());
    for (density, &zj) in factors.iter().zip(z) {
        let mut row = Vec::with_capacity(3);
        for r in Rho::ALL {
            row.push(density_line(
                density,
                |t| n_factor_unchecked(r, zj, t),
                &[zj.re],
                cfg,
            )?);
        }
        table.push(row);
    }
    let index = |r: Rho| match r {
        Rho::Minus => 0,
        Rho::Zero => 1,
        Rho::Plus => 2,
    };
    let mut total = Estimate::zero();
    for rho in rhos {
        let picked: Vec<Estimate> = rho
            .iter()
            .enumerate()
            .map(|(j, r)| table[j][index(*r)])
            .collect();
        total = total + product(&picked);
    }
    Ok(total)
}

/// Integral of a function of one variable over `interval` (used for test
/// functions and boundary integrals).
pub fn integrate_interval<F>(f: F, interval: Interval, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    integrate_line(f, interval, &[], cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::kernel_raw;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn pt(coords: &[Complex64]) -> CutPlanePoint {
        CutPlanePoint::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn json_round_trip_of_the_diagonal_measure() {
        let text = r#"{"type":"curve_pushforward","curve":{"alpha":[1,1],"beta":[0,0]},"weight":{"form":"constant","c":1},"scale":3.141592653589793}"#;
        let m = Measure::from_json(text).unwrap();
        assert_eq!(m, Measure::diagonal());
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(Measure::from_json(&back).unwrap(), m);
    }

    #[test]
    fn json_rejects_unknown_fields_and_bad_values() {
        let cases = [
            r#"{"type":"lebesgue_scaled","dim":1,"c":1,"extra":0}"#,
            r#"{"type":"curve_pushforward","curve":{"alpha":[1],"beta":[0],"gamma":[1]},"weight":{"form":"constant","c":1},"scale":1}"#,
            r#"{"type":"lebesgue_scaled","dim":1,"c":-1}"#,
            r#"{"type":"curve_pushforward","curve":{"alpha":[0,0],"beta":[0,0]},"weight":{"form":"constant","c":1},"scale":1}"#,
            r#"{"type":"sum","terms":[{"type":"lebesgue_scaled","dim":1,"c":1},{"type":"lebesgue_scaled","dim":2,"c":1}]}"#,
            r#"{"type":"atomic","points":[[0,0]],"weights":[1,2]}"#,
            r#"{"type":"blob"}"#,
        ];
        for text in cases {
            assert!(Measure::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn atomic_integration_is_a_finite_sum() {
        let z = pt(&[Complex64::new(0.3, 1.0), Complex64::new(-1.0, -2.0)]);
        let mu = Measure::dirac(vec![0.0, 0.0], PI * PI);
        let got = kernel_integral(&mu, &z, &cfg()).unwrap();
        let want = kernel_raw(z.coords(), &[0.0, 0.0]) * (PI * PI);
        assert!((got.value - want).norm() <= 4.0 * f64::EPSILON * want.norm());
        assert_eq!(got.error, 0.0);
    }

    #[test]
    fn growth_examples() {
        let g = check_growth(&Measure::lebesgue(1), &cfg()).unwrap();
        assert!(g.finite && (g.value - PI).abs() < 1e-10);
        let g = check_growth(&Measure::diagonal(), &cfg()).unwrap();
        assert!(g.finite && (g.value - PI * PI / 2.0).abs() < 1e-9);
        let g = check_growth(&Measure::dirac(vec![1e6], 1.0), &cfg()).unwrap();
        assert_eq!(g.value, 1.0 / (1.0 + 1e12));
    }

    #[test]
    fn non_decaying_integrand_reports_divergence() {
        let err =
            integrate(&Measure::lebesgue(1), |_| Complex64::new(1.0, 0.0), &cfg()).unwrap_err();
        assert!(matches!(err, Error::Divergence(_)), "{err:?}");
    }

    #[test]
    fn separable_kernel_matches_iterated_integration() {
        let mu = Measure::ProductDensity {
            factors: vec![
                Density::CauchyWeight,
                Density::Gaussian {
                    mean: 0.5,
                    sigma: 0.7,
                },
            ],
        };
        let z = pt(&[Complex64::new(0.4, 0.8), Complex64::new(-0.2, -1.1)]);
        let fast = kernel_integral(&mu, &z, &cfg()).unwrap();
        let coords = z.coords().to_vec();
        let slow = integrate(&mu, |t| kernel_raw(&coords, t), &cfg()).unwrap();
        assert!((fast.value - slow.value).norm() < 1e-8, "{fast:?} {slow:?}");
    }

    #[test]
    fn nevanlinna_in_one_variable_is_structurally_zero() {
        let z = pt(&[Complex64::new(0.1, 0.5)]);
        for mu in [Measure::lebesgue(1), Measure::dirac(vec![2.0], 3.0)] {
            let r = nevanlinna_residual(&mu, &z, &cfg()).unwrap();
            assert_eq!(r.value, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn scaling() {
        let m = Measure::f4_defining().scaled(2.0).unwrap();
        let f = |t: &[f64]| Complex64::new(t.iter().map(|x| 1.0 / (1.0 + x * x)).product(), 0.0);
        let a = integrate(&m, f, &cfg()).unwrap();
        let b = integrate(&Measure::f4_defining(), f, &cfg()).unwrap();
        assert!((a.value - b.value * 2.0).norm() < 1e-8);
        let bare = Measure::ProductDensity {
            factors: vec![Density::CauchyWeight],
        };
        assert!(bare.scaled(2.0).is_err());
    }
}
