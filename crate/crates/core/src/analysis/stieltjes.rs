use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::extrapolate::extrapolate;
use super::{LimitConfig, Verdict};
use crate::cutplane::{enumerate_subsets, CutPlanePoint, SubsetFilter};
use crate::error::{Error, Result};
use crate::functions::Evaluable;
use crate::measures::quadrature::integrate_line_estimates;
use crate::measures::{Estimate, Interval, QuadratureConfig};

/// One factor of a product test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum Factor {
    /// `(1 + x^2)^-1`
    Cauchy,
    /// `exp(-(x - mean)^2 / (2 sigma^2))`, peak value 1.
    Gaussian { mean: f64, sigma: f64 },
}

impl Factor {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            Factor::Cauchy => 1.0 / (1.0 + x * x),
            Factor::Gaussian { mean, sigma } => {
                let u = (x - mean) / sigma;
                (-0.5 * u * u).exp()
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Factor::Cauchy => vec![0.0],
            Factor::Gaussian { mean, sigma } if sigma < 0.25 => {
                vec![mean - 3.0 * sigma, mean, mean + 3.0 * sigma]
            }
            Factor::Gaussian { mean, .. } => vec![mean],
        }
    }
}

/// `phi(x) = prod_j factors[j](x_j)` with the caller's bound
/// `|phi(x)| <= d * prod (1 + x_j^2)^-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunction {
    pub factors: Vec<Factor>,
    pub d: f64,
}

impl TestFunction {
    /// `prod (1 + x_j^2)^-1`, `D = 1`.
    pub fn cauchy(n: usize) -> TestFunction {
        TestFunction {
            factors: vec![Factor::Cauchy; n],
            d: 1.0,
        }
    }

    /// `prod exp(-x_j^2)`, `D = 1` since `exp(x^2) >= 1 + x^2`.
    pub fn gauss(n: usize) -> TestFunction {
        TestFunction {
            factors: vec![
                Factor::Gaussian {
                    mean: 0.0,
                    sigma: std::f64::consts::FRAC_1_SQRT_2,
                };
                n
            ],
            d: 1.0,
        }
    }

    /// `cauchy<n>d` or `gauss<n>d`, e.g. `cauchy2d`.
    pub fn from_name(name: &str) -> Result<TestFunction> {
        let parse = |rest: &str| {
            rest.strip_suffix('d')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|n| (1..=crate::cutplane::DEFAULT_MAX_DIM).contains(n))
        };
        if let Some(n) = name.strip_prefix("cauchy").and_then(parse) {
            return Ok(TestFunction::cauchy(n));
        }
        if let Some(n) = name.strip_prefix("gauss").and_then(parse) {
            return Ok(TestFunction::gauss(n));
        }
        Err(Error::Parse(format!(
            "unknown test function `{name}` (expected cauchy<n>d or gauss<n>d)"
        )))
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.factors
            .iter()
            .zip(x)
            .map(|(f, xj)| f.eval(*xj))
            .product()
    }

    /// Spot-checks the bound on a grid. Since both sides are products, it is
    /// enough to bound each factor by `(1 + x^2)^-1` times a constant.
    pub fn check_bound(&self) -> Result<()> {
        if self.factors.is_empty() {
            return Err(Error::InvalidTestFunction("no factors".into()));
        }
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(Error::InvalidTestFunction(format!(
                "D must be positive, got {}",
                self.d
            )));
        }
        for f in &self.factors {
            if let Factor::Gaussian { mean, sigma } = *f {
                if !(sigma > 0.0 && sigma.is_finite() && mean.is_finite()) {
                    return Err(Error::InvalidTestFunction(format!(
                        "gaussian needs finite mean and positive sigma, got ({mean}, {sigma})"
                    )));
                }
            }
        }
        let grid: Vec<f64> = (-4000..=4000)
            .map(|k| {
                let s = k as f64 / 100.0;
                s * s.abs()
            })
            .collect();
        let mut needed = 1.0;
        for f in &self.factors {
            let sup = grid
                .iter()
                .map(|x| f.eval(*x) * (1.0 + x * x))
                .fold(0.0, f64::max);
            needed *= sup;
        }
        if needed > self.d * (1.0 + 1e-12) {
            return Err(Error::InvalidTestFunction(format!(
                "|phi| (1 + x^2)^n reaches {needed} on the grid, above D = {}",
                self.d
            )));
        }
        Ok(())
    }

    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        self.factors[axis].breakpoints()
    }
}

/// Parameters for the Stieltjes inversions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StieltjesConfig {
    pub limits: LimitConfig,
    /// Tolerances of the outer `x` integral.
    pub quad: QuadratureConfig,
    /// Bound on the neglected mass `D int_{outside box} prod (1 + x^2)^-1`.
    pub tail_tol: f64,
}

impl Default for StieltjesConfig {
    fn default() -> Self {
        StieltjesConfig {
            limits: LimitConfig {
                tol: 1e-5,
                ..LimitConfig::default()
            },
            quad: QuadratureConfig {
                abs_tol: 1e-9,
                rel_tol: 1e-8,
                max_subdivisions: 2000,
            },
            tail_tol: 1e-7,
        }
    }
}

/// One row of the convergence table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionRow {
    pub y: f64,
    pub raw_integral: f64,
    pub extrapolant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InversionReport {
    pub estimate: f64,
    pub verdict: Verdict,
    /// Distance between the last two extrapolants.
    pub delta: f64,
    pub order: Option<f64>,
    /// Half-width of the integration box `[-R, R]^n`.
    pub radius: f64,
    /// Largest `|Im|` of the raw integrals; zero in exact arithmetic.
    pub max_imag: f64,
    /// Largest quadrature error estimate among the raw integrals.
    pub max_quadrature_error: f64,
    pub rows: Vec<InversionRow>,
}

/// `R` with `D (pi^n - (2 atan R)^n) <= tail_tol`.
fn box_radius(n: usize, d: f64, tail_tol: f64) -> f64 {
    let target = tail_tol / d;
    let tail = |r: f64| PI.powi(n as i32) - (2.0 * r.atan()).powi(n as i32);
    let mut r = 1.0;
    while tail(r) > target && r < 1e300 {
        r *= 2.0;
    }
    r
}

/// An accuracy shortfall becomes an estimate carrying its error, so one
/// hard point does not abort an integral it barely contributes to.
fn settle(r: Result<Estimate>) -> Result<Estimate> {
    match r {
        Err(Error::Accuracy {
            estimate, error, ..
        }) => Ok(Estimate {
            value: estimate,
            error,
        }),
        other => other,
    }
}

/// Iterated integral over `[-R, R]^n`. Each inner axis gets breakpoints at
/// the outer coordinates already fixed, where integrands concentrated near
/// diagonals have their ridges.
fn integrate_box(
    n: usize,
    radius: f64,
    phi: &TestFunction,
    f: &dyn Fn(&[f64]) -> Result<Estimate>,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let mut prefix = Vec::with_capacity(n);
    box_axis(0, n, radius, phi, f, cfg, &mut prefix)
}

fn box_axis(
    axis: usize,
    n: usize,
    radius: f64,
    phi: &TestFunction,
    f: &dyn Fn(&[f64]) -> Result<Estimate>,
    cfg: &QuadratureConfig,
    prefix: &mut Vec<f64>,
) -> Result<Estimate> {
    let mut breaks = phi.breakpoints(axis);
    breaks.extend_from_slice(prefix);
    let last = axis + 1 == n;
    settle(integrate_line_estimates(
        |x| {
            prefix.push(x);
            let inner = if last {
                f(prefix)
            } else {
                box_axis(axis + 1, n, radius, phi, f, cfg, prefix)
            };
            prefix.pop();
            inner
        },
        Interval::symmetric(radius),
        &breaks,
        cfg,
    ))
}

fn invert(
    n: usize,
    phi: &TestFunction,
    cfg: &StieltjesConfig,
    integrand: &dyn Fn(&[f64], f64) -> Result<Estimate>,
) -> Result<InversionReport> {
    cfg.limits.validate()?;
    cfg.quad.validate()?;
    phi.check_bound()?;
    if phi.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: phi.dim(),
        });
    }
    if !(cfg.tail_tol > 0.0) {
        return Err(Error::invalid("tail_tol must be positive"));
    }
    let radius = box_radius(n, phi.d, cfg.tail_tol);
    let mut raw = Vec::with_capacity(cfg.limits.y_sequence.len());
    let mut max_imag = 0.0f64;
    let mut max_err = 0.0f64;
    for &y in &cfg.limits.y_sequence {
        let e = integrate_box(n, radius, phi, &|x| integrand(x, y), &cfg.quad)?;
        max_imag = max_imag.max(e.value.im.abs());
        max_err = max_err.max(e.error);
        raw.push(Complex64::new(e.value.re, 0.0));
    }
    let ex = extrapolate(&cfg.limits.y_sequence, &raw, cfg.limits.extrapolation_order)?;
    let rows = cfg
        .limits
        .y_sequence
        .iter()
        .zip(&raw)
        .zip(&ex.extrapolants)
        .map(|((y, r), e)| InversionRow {
            y: *y,
            raw_integral: r.re,
            extrapolant: e.map(|v| v.re),
        })
        .collect();
    let scale = ex.estimate.norm().max(1.0);
    let verdict = if ex.delta <= cfg.limits.tol * scale {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Ok(InversionReport {
        estimate: ex.estimate.re,
        verdict,
        delta: ex.delta,
        order: ex.order,
        radius,
        max_imag,
        max_quadrature_error: max_err,
        rows,
    })
}

/// Accuracy asked of each of `count` function values at `x`, chosen so their
/// errors weighted by `phi` integrate to at most `abs_tol * pi^n`.
fn point_tolerance(x: &[f64], phi: f64, count: usize, quad: &QuadratureConfig) -> f64 {
    let decay: f64 = x.iter().map(|xj| 1.0 + xj * xj).product();
    quad.abs_tol / (phi.abs() * decay * count as f64)
}

fn lift(x: &[f64], y: f64) -> Result<CutPlanePoint> {
    CutPlanePoint::new(x.iter().map(|xj| Complex64::new(*xj, y)).collect())
}

/// `lim_{y -> 0+} int phi(x) Im h(x + i y) dx` for `h` evaluable on the poly
/// upper half-plane. For a Herglotz-Nevanlinna function this is
/// `int phi dmu` for its representing measure.
pub fn stieltjes_classic(
    h_upper: &dyn Evaluable,
    phi: &TestFunction,
    cfg: &StieltjesConfig,
) -> Result<InversionReport> {
    let n = h_upper.dim();
    invert(n, phi, cfg, &|x, y| {
        let w = phi.eval(x);
        if w == 0.0 {
            return Ok(Estimate::zero());
        }
        let tol = point_tolerance(x, w, 1, &cfg.quad);
        let v = settle(h_upper.evaluate_within(&lift(x, y)?, tol))?;
        Ok(Estimate {
            value: Complex64::new(w * v.value.im, 0.0),
            error: w.abs() * v.error,
        })
    })
}

/// `lim_{y -> 0+} (1/2i) int phi(x) sum_B (-1)^|B| g(Psi_B(z, z)) dx` with
/// `z = x + i y`, for `g` evaluable on the whole cut-plane. For a Cauchy-type
/// function this is `int phi dmu` for its defining measure.
pub fn stieltjes_cauchy_type(
    g: &dyn Evaluable,
    phi: &TestFunction,
    cfg: &StieltjesConfig,
) -> Result<InversionReport> {
    let n = g.dim();
    let subsets = enumerate_subsets(n, SubsetFilter::All)?;
    let two_i = Complex64::new(0.0, 2.0);
    invert(n, phi, cfg, &|x, y| {
        let w = phi.eval(x);
        if w == 0.0 {
            return Ok(Estimate::zero());
        }
        let tol = point_tolerance(x, w, subsets.len(), &cfg.quad);
        let z = lift(x, y)?;
        let mut sum = Estimate::zero();
        for set in &subsets {
            let v = settle(g.evaluate_within(&z.psi(set, &z)?, tol))?;
            sum = sum + v.scale(set.parity_sign());
        }
        Ok(sum.scale_complex(w / two_i))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutplane::I;
    use crate::functions::{catalogue, from_fn, CatalogueId};

    #[test]
    fn names() {
        assert_eq!(
            TestFunction::from_name("cauchy2d").unwrap(),
            TestFunction::cauchy(2)
        );
        assert_eq!(
            TestFunction::from_name("gauss1d").unwrap(),
            TestFunction::gauss(1)
        );
        assert!(TestFunction::from_name("cauchy0d").is_err());
        assert!(TestFunction::from_name("box2d").is_err());
    }

    #[test]
    fn bound_check() {
        assert!(TestFunction::cauchy(2).check_bound().is_ok());
        assert!(TestFunction::gauss(3).check_bound().is_ok());
        let wide = TestFunction {
            factors: vec![Factor::Gaussian {
                mean: 0.0,
                sigma: 3.0,
            }],
            d: 1.0,
        };
        assert!(matches!(
            wide.check_bound(),
            Err(Error::InvalidTestFunction(_))
        ));
        let json =
            r#"{"factors":[{"form":"cauchy"},{"form":"gaussian","mean":1,"sigma":0.5}],"d":3}"#;
        let phi: TestFunction = serde_json::from_str(json).unwrap();
        assert!(phi.check_bound().is_ok());
    }

    #[test]
    fn radius_meets_tail_bound() {
        let r = box_radius(2, 1.0, 1e-7);
        let tail = PI * PI - (2.0 * r.atan()).powi(2);
        assert!(tail <= 1e-7 && r > 1e6);
    }

    #[test]
    fn classic_one_dimensional_examples() {
        let cfg = StieltjesConfig::default();
        let phi = TestFunction::cauchy(1);
        let h = from_fn(1, |_| I);
        let r = stieltjes_classic(&h, &phi, &cfg).unwrap();
        assert!((r.estimate - PI).abs() < 1e-6, "{r:?}");
        let h = from_fn(1, |z| -z[0].inv());
        let r = stieltjes_classic(&h, &phi, &cfg).unwrap();
        assert!((r.estimate - PI).abs() < 1e-3, "{r:?}");
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn classic_two_dimensional_constant() {
        let h = from_fn(2, |_| I);
        let r =
            stieltjes_classic(&h, &TestFunction::cauchy(2), &StieltjesConfig::default()).unwrap();
        assert!((r.estimate - PI * PI).abs() < 1e-5, "{r:?}");
    }

    #[test]
    fn alternating_closed_form_f2() {
        let f2 = catalogue(CatalogueId::F2);
        let r = stieltjes_cauchy_type(&f2, &TestFunction::cauchy(2), &StieltjesConfig::default())
            .unwrap();
        assert!((r.estimate - PI * PI / 2.0).abs() < 1e-3, "{r:?}");
        assert!(r.max_imag < 1e-6);
    }
}
