use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Value at `x0` of the polynomial through `(xs[k], ys[k])`.
pub fn neville(xs: &[f64], ys: &[Complex64], x0: f64) -> Complex64 {
    let mut p = ys.to_vec();
    let n = p.len();
    for level in 1..n {
        for k in 0..n - level {
            let (a, b) = (xs[k], xs[k + level]);
            p[k] = (p[k] * (x0 - b) - p[k + 1] * (x0 - a)) / (a - b);
        }
    }
    p[0]
}

/// Polynomial extrapolation of a sequence to `h = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrapolation {
    pub estimate: Complex64,
    /// `|estimate - previous extrapolant|`.
    pub delta: f64,
    /// Empirical order `p` of `raw(h) - limit ~ h^p`, when measurable.
    pub order: Option<f64>,
    /// Extrapolant from the window ending at each sample (`None` until
    /// enough samples are available).
    pub extrapolants: Vec<Option<Complex64>>,
}

/// Extrapolates `values[k] ~ f(h[k])` to `h = 0` with polynomials of degree
/// `order` through consecutive windows.
pub fn extrapolate(h: &[f64], values: &[Complex64], order: usize) -> Result<Extrapolation> {
    if h.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: h.len(),
            actual: values.len(),
        });
    }
    if h.len() < order + 2 {
        return Err(Error::invalid(format!(
            "order {order} extrapolation needs {} samples, got {}",
            order + 2,
            h.len()
        )));
    }
    let extrapolants: Vec<Option<Complex64>> = (0..h.len())
        .map(|k| (k >= order).then(|| neville(&h[k - order..=k], &values[k - order..=k], 0.0)))
        .collect();
    let estimate = extrapolants[h.len() - 1].expect("window is complete");
    let previous = extrapolants[h.len() - 2].expect("window is complete");
    let m = h.len();
    let order = if m >= 3 {
        let d1 = (values[m - 3] - values[m - 2]).norm();
        let d2 = (values[m - 2] - values[m - 1]).norm();
        let ratio = h[m - 2] / h[m - 1];
        (d1 > 0.0 && d2 > 0.0 && ratio > 1.0)
            .then(|| (d1 / d2).ln() / ratio.ln())
            .filter(|p| p.is_finite())
    } else {
        None
    };
    Ok(Extrapolation {
        estimate,
        delta: (estimate - previous).norm(),
        order,
        extrapolants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn two_samples_at_order_zero() {
        let e = extrapolate(&[0.5, 0.25], &[re(1.0), re(2.0)], 0).unwrap();
        assert_eq!(e.estimate, re(2.0));
        assert_eq!(e.delta, 1.0);
        assert!(e.order.is_none());
    }

    #[test]
    fn quadratic_is_reproduced() {
        let h = [0.5, 0.25, 0.125, 0.0625];
        let v: Vec<Complex64> = h.iter().map(|x| re(3.0 + 2.0 * x - x * x)).collect();
        let e = extrapolate(&h, &v, 2).unwrap();
        assert!((e.estimate - re(3.0)).norm() < 1e-13);
        assert!(e.delta < 1e-13);
        assert!(e.extrapolants[0].is_none() && e.extrapolants[2].is_some());
    }

    #[test]
    fn first_order_rate_is_measured() {
        let h: Vec<f64> = (1..=8).map(|k| 2f64.powi(-k)).collect();
        let v: Vec<Complex64> = h.iter().map(|x| re(1.0 + x)).collect();
        let e = extrapolate(&h, &v, 0).unwrap();
        assert!((e.order.unwrap() - 1.0).abs() < 1e-9);
        let flat = vec![re(2.0); 8];
        assert_eq!(extrapolate(&h, &flat, 2).unwrap().order, None);
    }

    #[test]
    fn too_few_samples() {
        assert!(extrapolate(&[1.0, 0.5], &[re(1.0), re(1.0)], 2).is_err());
    }

    proptest! {
        #[test]
        fn polynomials_of_the_order_are_exact(c in prop::array::uniform3(-5.0..5.0f64)) {
            let h: Vec<f64> = (1..=6).map(|k| 2f64.powi(-k)).collect();
            let v: Vec<Complex64> = h.iter().map(|x| re(c[0] + c[1] * x + c[2] * x * x)).collect();
            let e = extrapolate(&h, &v, 2).unwrap();
            prop_assert!((e.estimate.re - c[0]).abs() < 1e-11);
        }
    }
}
