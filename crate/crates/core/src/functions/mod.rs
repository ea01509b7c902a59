//! Evaluable functions on the poly cut-plane.

mod catalogue;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use catalogue::{catalogue, table_columns, Branch, CatalogueId, ClosedForm};

use crate::cutplane::CutPlanePoint;
use crate::cutplane::I;
use crate::error::{Error, Result};
use crate::measures::{
    a_product_integral, check_growth, kernel_integral_with, nevanlinna_residual, Estimate, Measure,
    QuadratureConfig,
};
use crate::sampling;

/// A function on `(C \ R)^n`, or on part of it.
///
/// `evaluate` returns the value together with an error estimate, which is
/// zero for closed forms.
pub trait Evaluable: Send + Sync {
    fn dim(&self) -> usize;

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate>;

    /// `evaluate` with the absolute accuracy relaxed to `abs_tol` where that
    /// is cheaper. Closed forms ignore it.
    fn evaluate_within(&self, z: &CutPlanePoint, abs_tol: f64) -> Result<Estimate> {
        let _ = abs_tol;
        self.evaluate(z)
    }

    fn value(&self, z: &CutPlanePoint) -> Result<Complex64> {
        self.evaluate(z).map(|e| e.value)
    }
}

impl<T: Evaluable + ?Sized> Evaluable for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate> {
        (**self).evaluate(z)
    }
    fn evaluate_within(&self, z: &CutPlanePoint, abs_tol: f64) -> Result<Estimate> {
        (**self).evaluate_within(z, abs_tol)
    }
}

impl<T: Evaluable + ?Sized> Evaluable for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate> {
        (**self).evaluate(z)
    }
    fn evaluate_within(&self, z: &CutPlanePoint, abs_tol: f64) -> Result<Estimate> {
        (**self).evaluate_within(z, abs_tol)
    }
}

impl<T: Evaluable + ?Sized> Evaluable for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate> {
        (**self).evaluate(z)
    }
    fn evaluate_within(&self, z: &CutPlanePoint, abs_tol: f64) -> Result<Estimate> {
        (**self).evaluate_within(z, abs_tol)
    }
}

pub(crate) fn check_dim(dim: usize, z: &CutPlanePoint) -> Result<()> {
    if z.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: z.dim(),
        });
    }
    Ok(())
}

/// `g(z) = pi^-n int K_n(z, t) dmu(t)`.
#[derive(Debug, Clone)]
pub struct CauchyFunction {
    measure: Measure,
    quad: QuadratureConfig,
    growth: f64,
    /// `int prod A(i, t_l) dmu(t)`.
    fixed: Estimate,
}

impl CauchyFunction {
    /// Fails with `InvalidMeasure` unless the growth integral is finite.
    pub fn new(measure: Measure, quad: QuadratureConfig) -> Result<Self> {
        quad.validate()?;
        let growth = check_growth(&measure, &quad)?;
        if !growth.finite {
            return Err(Error::InvalidMeasure(
                "growth integral int prod (1 + t^2)^-1 dmu diverges".into(),
            ));
        }
        let fixed = a_product_integral(&measure, &vec![I; measure.dim()], &quad)?;
        Ok(CauchyFunction {
            measure,
            quad,
            growth: growth.value,
            fixed,
        })
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn growth(&self) -> f64 {
        self.growth
    }
}

impl Evaluable for CauchyFunction {
    fn dim(&self) -> usize {
        self.measure.dim()
    }

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate> {
        self.evaluate_within(z, 0.0)
    }

    fn evaluate_within(&self, z: &CutPlanePoint, abs_tol: f64) -> Result<Estimate> {
        check_dim(self.dim(), z)?;
        let scale = PI.powi(z.dim() as i32);
        let quad = QuadratureConfig {
            abs_tol: self.quad.abs_tol.max(abs_tol * scale),
            ..self.quad
        };
        Ok(kernel_integral_with(&self.measure, z, self.fixed, &quad)?.scale(1.0 / scale))
    }
}

pub fn evaluate_cauchy(
    mu: &Measure,
    z: &CutPlanePoint,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    CauchyFunction::new(mu.clone(), *cfg)?.evaluate(z)
}

/// Representing parameters `(a, b, mu)` of a Herglotz-Nevanlinna function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HerglotzTriple {
    pub a: f64,
    pub b: Vec<f64>,
    pub measure: Measure,
}

impl HerglotzTriple {
    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_finite() {
            return Err(Error::invalid("a must be finite"));
        }
        if self.b.is_empty() {
            return Err(Error::invalid("b must have at least one entry"));
        }
        if let Some(bj) = self.b.iter().find(|bj| !(**bj >= 0.0 && bj.is_finite())) {
            return Err(Error::invalid(format!(
                "b entries must be nonnegative, got {bj}"
            )));
        }
        self.measure.validate()?;
        if self.measure.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: self.measure.dim(),
            });
        }
        Ok(())
    }
}

/// `h_sym(z) = a + sum_j b_j z_j + pi^-n int K_n(z, t) dmu(t)` on the whole
/// cut-plane. On the poly upper half-plane this is the Herglotz function
/// itself.
#[derive(Debug, Clone)]
pub struct HerglotzFunction {
    triple: HerglotzTriple,
    cauchy: CauchyFunction,
}

impl HerglotzFunction {
    pub fn new(triple: HerglotzTriple, quad: QuadratureConfig) -> Result<Self> {
        triple.validate()?;
        let cauchy = CauchyFunction::new(triple.measure.clone(), quad)?;
        Ok(HerglotzFunction { triple, cauchy })
    }

    pub fn triple(&self) -> &HerglotzTriple {
        &self.triple
    }

    /// Nevanlinna residuals of the measure at each point (all in the poly
    /// upper half-plane).
    pub fn nevanlinna_residuals(&self, points: &[CutPlanePoint]) -> Result<Vec<f64>> {
        points
            .iter()
            .map(|z| {
                Ok(
                    nevanlinna_residual(&self.triple.measure, z, &self.cauchy.quad)?
                        .value
                        .norm(),
                )
            })
            .collect()
    }
}

impl Evaluable for HerglotzFunction {
    fn dim(&self) -> usize {
        self.triple.dim()
    }

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate> {
        self.evaluate_within(z, 0.0)
    }

    fn evaluate_within(&self, z: &CutPlanePoint, abs_tol: f64) -> Result<Estimate> {
        check_dim(self.dim(), z)?;
        let linear: Complex64 = self
            .triple
            .b
            .iter()
            .zip(z.coords())
            .map(|(b, zj)| zj * *b)
            .sum();
        let g = self.cauchy.evaluate_within(z, abs_tol)?;
        Ok(Estimate {
            value: g.value + self.triple.a + linear,
            error: g.error,
        })
    }
}

pub fn evaluate_herglotz_sym(
    triple: &HerglotzTriple,
    z: &CutPlanePoint,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    HerglotzFunction::new(triple.clone(), *cfg)?.evaluate(z)
}

/// `f(z) + sum_j c_j z_j`.
#[derive(Debug, Clone)]
pub struct WithLinear<F> {
    inner: F,
    coeffs: Vec<f64>,
}

impl<F: Evaluable> WithLinear<F> {
    pub fn new(inner: F, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != inner.dim() {
            return Err(Error::DimensionMismatch {
                expected: inner.dim(),
                actual: coeffs.len(),
            });
        }
        Ok(WithLinear { inner, coeffs })
    }
}

impl<F: Evaluable> Evaluable for WithLinear<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate> {
        self.evaluate_within(z, 0.0)
    }

    fn evaluate_within(&self, z: &CutPlanePoint, abs_tol: f64) -> Result<Estimate> {
        let e = self.inner.evaluate_within(z, abs_tol)?;
        let linear: Complex64 = self
            .coeffs
            .iter()
            .zip(z.coords())
            .map(|(c, zj)| zj * *c)
            .sum();
        Ok(Estimate {
            value: e.value + linear,
            error: e.error,
        })
    }
}

/// `f` restricted to the poly upper half-plane; other points are rejected
/// with `OutsideDomain`.
#[derive(Debug, Clone)]
pub struct UpperRestriction<F>(pub F);

impl<F: Evaluable> Evaluable for UpperRestriction<F> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate> {
        self.evaluate_within(z, 0.0)
    }

    fn evaluate_within(&self, z: &CutPlanePoint, abs_tol: f64) -> Result<Estimate> {
        if !z.is_upper() {
            return Err(Error::OutsideDomain);
        }
        self.0.evaluate_within(z, abs_tol)
    }
}

/// A function given by a closure.
pub struct FromFn<G> {
    dim: usize,
    f: G,
}

pub fn from_fn<G>(dim: usize, f: G) -> FromFn<G>
where
    G: Fn(&[Complex64]) -> Complex64 + Send + Sync,
{
    FromFn { dim, f }
}

impl<G> Evaluable for FromFn<G>
where
    G: Fn(&[Complex64]) -> Complex64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate> {
        check_dim(self.dim, z)?;
        Ok(Estimate::exact((self.f)(z.coords())))
    }
}

/// A measure given inline or by built-in name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    Named(String),
    Inline(Measure),
}

impl MeasureSpec {
    /// `zero` and `lebesgue` take their dimension from `dim` when given.
    pub fn resolve(&self, dim: Option<usize>) -> Result<Measure> {
        let m = match (self, dim) {
            (MeasureSpec::Named(name), Some(n)) if name == "zero" => Measure::zero(n),
            (MeasureSpec::Named(name), Some(n)) if name == "lebesgue" => Measure::lebesgue(n),
            (MeasureSpec::Named(name), _) => Measure::builtin(name)?,
            (MeasureSpec::Inline(m), _) => m.clone(),
        };
        m.validate()?;
        if let Some(n) = dim {
            if m.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: m.dim(),
                });
            }
        }
        Ok(m)
    }
}

/// JSON description of an evaluable function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDescriptor {
    /// `id` is `f0` .. `f7`, optionally suffixed `-upper` for the restriction
    /// to the poly upper half-plane.
    Catalogue { id: String },
    Cauchy {
        #[serde(alias = "mu")]
        measure: MeasureSpec,
    },
    Herglotz {
        a: f64,
        b: Vec<f64>,
        #[serde(alias = "mu")]
        measure: MeasureSpec,
    },
}

impl FunctionDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self, quad: &QuadratureConfig) -> Result<Box<dyn Evaluable>> {
        match self {
            FunctionDescriptor::Catalogue { id } => {
                let (name, upper) = match id.strip_suffix("-upper") {
                    Some(name) => (name, true),
                    None => (id.as_str(), false),
                };
                let f = catalogue(name.parse()?);
                if upper {
                    Ok(Box::new(UpperRestriction(f)))
                } else {
                    Ok(Box::new(f))
                }
            }
            FunctionDescriptor::Cauchy { measure } => Ok(Box::new(CauchyFunction::new(
                measure.resolve(None)?,
                *quad,
            )?)),
            FunctionDescriptor::Herglotz { a, b, measure } => {
                let triple = HerglotzTriple {
                    a: *a,
                    b: b.clone(),
                    measure: measure.resolve(Some(b.len()))?,
                };
                Ok(Box::new(HerglotzFunction::new(triple, *quad)?))
            }
        }
    }
}

/// Minimum of `Im f` observed on the poly upper half-plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    pub min: f64,
    pub witness: CutPlanePoint,
    pub points: usize,
}

/// Samples `Im f` over the grid `sampling::upper_grid(n)` plus `samples`
/// seeded random points and returns the smallest value seen.
pub fn herglotz_imag_lower_bound_probe(
    f: &dyn Evaluable,
    samples: usize,
    seed: u64,
) -> Result<LowerBound> {
    let n = f.dim();
    let mut points = sampling::upper_grid(n)?;
    points.extend(sampling::random_upper(n, samples, seed));
    let mut best: Option<(f64, &CutPlanePoint)> = None;
    for z in &points {
        let im = f.value(z)?.im;
        if best.is_none_or(|(m, _)| im < m) {
            best = Some((im, z));
        }
    }
    let (min, witness) = best.expect("the grid is never empty");
    Ok(LowerBound {
        min,
        witness: witness.clone(),
        points: points.len(),
    })
}
