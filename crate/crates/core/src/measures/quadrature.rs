//! Adaptive Gauss-Kronrod (7/15) quadrature on the real line.
//!
//! The line is cut at the breakpoints and the origin, and every piece is
//! compactified with `t = b +- tan(theta)` from its nearest cut `b`, which
//! turns integrands decaying like `(1 + t^2)^-1` into bounded ones. All
//! pieces share one adaptive bisection, worst panel first.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Kronrod abscissae on `[0, 1]`, descending. Odd entries are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Equal panels each mapped piece starts with.
const PANELS_PER_PIECE: usize = 1;

/// Shell radii `R_0 * 2^k` used by the decay test.
const SHELL_BASE: f64 = 16.0;
const SHELL_DOUBLINGS: usize = 6;
/// Shell masses shrinking by less than this factor per doubling are not
/// converging.
const SHELL_RATIO: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    /// Relative to the integral of `|f|`, so cancelling integrands are not
    /// pushed below roundoff.
    pub rel_tol: f64,
    /// Bisections allowed per one-dimensional integral.
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadratureConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }
}

/// An integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Estimate { value, error: 0.0 }
    }

    pub fn zero() -> Self {
        Estimate::exact(Complex64::new(0.0, 0.0))
    }

    pub fn scale(self, c: f64) -> Self {
        Estimate {
            value: self.value * c,
            error: self.error * c.abs(),
        }
    }

    pub fn scale_complex(self, c: Complex64) -> Self {
        Estimate {
            value: self.value * c,
            error: self.error * c.norm(),
        }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            error: self.error + other.error,
        }
    }
}

impl std::iter::Sum for Estimate {
    fn sum<It: Iterator<Item = Estimate>>(iter: It) -> Estimate {
        iter.fold(Estimate::zero(), |acc, e| acc + e)
    }
}

/// Product of estimates with first-order error propagation.
pub fn product(factors: &[Estimate]) -> Estimate {
    let value: Complex64 = factors.iter().map(|e| e.value).product();
    let mut error = 0.0;
    for (k, e) in factors.iter().enumerate() {
        let others: f64 = factors
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, f)| f.value.norm() + f.error)
            .product();
        error += e.error * others;
    }
    Estimate { value, error }
}

/// A (possibly unbounded) interval of the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn symmetric(radius: f64) -> Interval {
        Interval {
            lo: -radius,
            hi: radius,
        }
    }
}

/// Tan map anchored at a cut: `t = b + tan(theta)` (`Right`) or
/// `t = b - tan(theta)` (`Left`), with `theta >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Map {
    Right(f64),
    Left(f64),
}

impl Map {
    fn eval<F>(self, f: &mut F, theta: f64) -> Result<Estimate>
    where
        F: FnMut(f64) -> Result<Estimate>,
    {
        let c = theta.cos();
        if c <= 0.0 {
            return Ok(Estimate::zero());
        }
        let t = match self {
            Map::Right(b) => b + theta.tan(),
            Map::Left(b) => b - theta.tan(),
        };
        Ok(f(t)?.scale(1.0 / (c * c)))
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    segment: usize,
    lo: f64,
    hi: f64,
    rule: Rule,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule
            .error
            .total_cmp(&other.rule.error)
            .then_with(|| other.segment.cmp(&self.segment))
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// One application of the Kronrod rule.
#[derive(Debug, Clone, Copy)]
struct Rule {
    value: Complex64,
    error: f64,
    /// Integral of `|f|`.
    mass: f64,
    /// Integral of the errors the integrand reports for its own values.
    inner: f64,
}

/// 15-point Kronrod rule with the embedded 7-point Gauss rule on `[a, b]`,
/// using the QUADPACK error heuristic.
fn gauss_kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Rule>
where
    F: FnMut(f64) -> Result<Estimate>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];

    let ec = f(center)?;
    let fc = ec.value;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.norm() * WGK[7];
    let mut inner = ec.error * WGK[7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let e1 = f(center - dx)?;
        let e2 = f(center + dx)?;
        let (f1, f2) = (e1.value, e2.value);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += (f1 + f2) * WGK[j];
        res_abs += (f1.norm() + f2.norm()) * WGK[j];
        inner += (e1.error + e2.error) * WGK[j];
        if j % 2 == 1 {
            res_g += (f1 + f2) * WG[j / 2];
        }
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Divergence(format!(
            "non-finite integrand on [{a}, {b}] of the compactified axis"
        )));
    }
    Ok(Rule {
        value,
        error: err,
        mass: res_abs,
        inner: inner * half.abs(),
    })
}

/// `f(tan theta) sec^2 theta`, with the endpoints mapped to zero weight.
fn mapped<F>(f: &mut F, theta: f64) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = theta.cos();
    if c <= 0.0 {
        return Ok(Estimate::zero());
    }
    let t = theta.tan();
    Ok(Estimate::exact(f(t)? / (c * c)))
}

/// Pieces `(map, theta_max)` covering `interval`, each integrated over
/// `[0, theta_max]`. Breakpoints inside the interval and the origin (or the
/// midpoint, when the origin lies outside) are the cuts. A gap between cuts
/// is halved and each half is mapped from its own end; the outermost pieces
/// are mapped from the outermost cuts. Features near a cut are resolved
/// however far out it lies.
fn segments(interval: Interval, breakpoints: &[f64]) -> Vec<(Map, f64)> {
    let (lo, hi) = (interval.lo, interval.hi);
    let inside = |t: &f64| t.is_finite() && *t > lo && *t < hi;
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(inside).collect();
    if inside(&0.0) {
        cuts.push(0.0);
    }
    if cuts.is_empty() {
        cuts.push(0.5 * (lo + hi));
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let first = cuts[0];
    let last = cuts[cuts.len() - 1];
    let mut out = Vec::with_capacity(2 * cuts.len());
    let reach = |d: f64| if d.is_finite() { d.atan() } else { FRAC_PI_2 };
    if first > lo {
        out.push((Map::Left(first), reach(first - lo)));
    }
    for w in cuts.windows(2) {
        let half = (0.5 * (w[1] - w[0])).atan();
        if half > 0.0 {
            out.push((Map::Right(w[0]), half));
            out.push((Map::Left(w[1]), half));
        }
    }
    if hi > last {
        out.push((Map::Right(last), reach(hi - last)));
    }
    out
}

/// Adaptive integral of `f` over `interval`. `breakpoints` are places (in
/// `t`) where the integrand is known to vary rapidly.
pub fn integrate_line<F>(
    mut f: F,
    interval: Interval,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    integrate_line_estimates(|t| f(t).map(Estimate::exact), interval, breakpoints, cfg)
}

/// [`integrate_line`] for an integrand whose values carry their own errors.
/// Those errors are integrated alongside and added to the result's error;
/// they do not drive the subdivision.
pub fn integrate_line_estimates<F>(
    mut f: F,
    interval: Interval,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Estimate>,
{
    if !(interval.lo < interval.hi) {
        return Ok(Estimate::zero());
    }
    let pieces = segments(interval, breakpoints);
    let mut heap = BinaryHeap::new();
    for (segment, &(map, top)) in pieces.iter().enumerate() {
        for k in 0..PANELS_PER_PIECE {
            let a = top * k as f64 / PANELS_PER_PIECE as f64;
            let b = top * (k + 1) as f64 / PANELS_PER_PIECE as f64;
            let rule = gauss_kronrod(&mut |x| map.eval(&mut f, x), a, b)?;
            heap.push(Panel {
                segment,
                lo: a,
                hi: b,
                rule,
            });
        }
    }
    if heap.is_empty() {
        return Ok(Estimate::zero());
    }

    let mut subdivisions = 0;
    loop {
        let t = totals(&heap);
        let target = cfg.abs_tol.max(cfg.rel_tol * t.mass);
        if t.error <= target {
            return Ok(Estimate {
                value: t.value,
                error: t.error + t.inner,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let resolvable = mid > worst.lo && mid < worst.hi && (worst.hi - worst.lo) > 1e-15;
        if subdivisions >= cfg.max_subdivisions || !resolvable {
            heap.push(worst);
            let t = totals(&heap);
            return Err(Error::Accuracy {
                estimate: t.value,
                error: t.error + t.inner,
                subdivisions,
            });
        }
        let map = pieces[worst.segment].0;
        for (lo, hi) in [(worst.lo, mid), (mid, worst.hi)] {
            let rule = gauss_kronrod(&mut |x| map.eval(&mut f, x), lo, hi)?;
            heap.push(Panel {
                segment: worst.segment,
                lo,
                hi,
                rule,
            });
        }
        subdivisions += 1;
    }
}

/// Sum in left-to-right panel order so results do not depend on heap layout.
fn totals(heap: &BinaryHeap<Panel>) -> Rule {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|a, b| a.segment.cmp(&b.segment).then(a.lo.total_cmp(&b.lo)));
    let mut t = Rule {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        mass: 0.0,
        inner: 0.0,
    };
    for p in panels {
        t.value += p.rule.value;
        t.error += p.rule.error;
        t.mass += p.rule.mass;
        t.inner += p.rule.inner;
    }
    t
}

/// First shell radius: `SHELL_BASE`, or four times the farthest breakpoint.
fn shell_start(breakpoints: &[f64]) -> f64 {
    breakpoints
        .iter()
        .filter(|t| t.is_finite())
        .fold(SHELL_BASE, |r, t| r.max(4.0 * t.abs()))
}

/// Masses of the shells `R_k <= |t| <= R_{k+1}`, `R_k = R_0 * 2^k`.
pub fn shell_masses<F>(mut f: F, r_start: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut g = |theta: f64| mapped(&mut f, theta);
    let mut masses = Vec::with_capacity(SHELL_DOUBLINGS + 1);
    for k in 0..=SHELL_DOUBLINGS {
        let r0 = r_start * 2f64.powi(k as i32);
        let (a, b) = (r0.atan(), (2.0 * r0).atan());
        let right = gauss_kronrod(&mut g, a, b)?.value;
        let left = gauss_kronrod(&mut g, -b, -a)?.value;
        masses.push(right.norm() + left.norm());
    }
    Ok(masses)
}

/// Whether shell masses fail to shrink over the last three doublings.
pub fn shells_diverge(masses: &[f64], abs_tol: f64) -> bool {
    let n = masses.len();
    if n < 3 {
        return false;
    }
    let last = &masses[n - 3..];
    last[2] > abs_tol && last[1] >= SHELL_RATIO * last[0] && last[2] >= SHELL_RATIO * last[1]
}

/// [`integrate_line`] over the whole real line, classifying a failure as
/// divergence when the tail does not decay.
pub fn integrate_real_line<F>(
    mut f: F,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    match integrate_line(&mut f, Interval::REAL_LINE, breakpoints, cfg) {
        Err(Error::Accuracy {
            estimate,
            error,
            subdivisions,
        }) => {
            let r0 = shell_start(breakpoints);
            let masses = shell_masses(&mut f, r0)?;
            if shells_diverge(&masses, cfg.abs_tol) {
                Err(Error::Divergence(format!(
                    "shell masses {:?} for |t| from {r0} to {}",
                    masses,
                    r0 * 2f64.powi(SHELL_DOUBLINGS as i32 + 1)
                )))
            } else {
                Err(Error::Accuracy {
                    estimate,
                    error,
                    subdivisions,
                })
            }
        }
        Err(Error::Divergence(msg)) => Err(Error::Divergence(msg)),
        other => other,
    }
}

/// Decay verdict for an integrand over the real line, by shell masses.
pub fn check_decay<F>(f: F, cfg: &QuadratureConfig) -> Result<()>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let masses = shell_masses(f, SHELL_BASE)?;
    if shells_diverge(&masses, cfg.abs_tol) {
        return Err(Error::Divergence(format!("shell masses {masses:?}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn real(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Result<Complex64> {
        move |t| Ok(Complex64::new(f(t), 0.0))
    }

    #[test]
    fn cauchy_weight_integrates_to_pi() {
        let cfg = QuadratureConfig::default();
        let e = integrate_real_line(real(|t| 1.0 / (1.0 + t * t)), &[], &cfg).unwrap();
        assert!((e.value.re - PI).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn squared_weight_matches_antiderivative() {
        // s/(2(1+s^2)) + atan(s)/2 over R gives pi/2.
        let cfg = QuadratureConfig::default();
        let e = integrate_real_line(real(|t| (1.0 + t * t).powi(-2)), &[], &cfg).unwrap();
        assert!((e.value.re - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn finite_interval() {
        let cfg = QuadratureConfig::default();
        let e = integrate_line(real(|t| t * t), Interval { lo: 0.0, hi: 3.0 }, &[], &cfg).unwrap();
        assert!((e.value.re - 9.0).abs() < 1e-10);
    }

    #[test]
    fn narrow_lorentzian_is_resolved() {
        let cfg = QuadratureConfig::default();
        for &(x0, w) in &[(0.3, 1e-3), (-7.25, 1e-4), (120.0, 1e-2)] {
            let f = real(move |t: f64| w / ((t - x0) * (t - x0) + w * w));
            let e = integrate_real_line(f, &[], &cfg).unwrap();
            assert!((e.value.re - PI).abs() < 1e-8, "{x0} {w}: {e:?}");
        }
    }

    #[test]
    fn constant_integrand_diverges() {
        let cfg = QuadratureConfig::default();
        let err = integrate_real_line(real(|_| 1.0), &[], &cfg).unwrap_err();
        assert!(matches!(err, Error::Divergence(_)), "{err:?}");
        let err = integrate_real_line(real(|t: f64| 1.0 / (1.0 + t.abs())), &[], &cfg).unwrap_err();
        assert!(matches!(err, Error::Divergence(_)), "{err:?}");
        assert!(check_decay(real(|t| 1.0 / (1.0 + t * t)), &cfg).is_ok());
    }

    #[test]
    fn product_propagates_error() {
        let a = Estimate {
            value: Complex64::new(2.0, 0.0),
            error: 0.1,
        };
        let b = Estimate {
            value: Complex64::new(0.0, 3.0),
            error: 0.2,
        };
        let p = product(&[a, b]);
        assert_eq!(p.value, Complex64::new(0.0, 6.0));
        assert!((p.error - (0.1 * 3.2 + 0.2 * 2.1)).abs() < 1e-15);
    }
}
