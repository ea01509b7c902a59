use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative density on `R`, integrable against `(1 + t^2)^-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum Density {
    /// `c` times Lebesgue measure.
    Constant {
        c: f64,
    },
    /// `(1 + t^2)^-1`.
    CauchyWeight,
    /// Normal density with the given mean and standard deviation (unit mass).
    Gaussian {
        mean: f64,
        sigma: f64,
    },
    Rational {
        name: RationalForm,
    },
}

/// Named rational densities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RationalForm {
    /// `(1 + t^2)^-2`
    CauchySquared,
    /// `t^2 (1 + t^2)^-2`
    SquareOverCauchySquared,
}

impl Density {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Density::Constant { c } => c,
            Density::CauchyWeight => 1.0 / (1.0 + t * t),
            Density::Gaussian { mean, sigma } => {
                let u = (t - mean) / sigma;
                (-0.5 * u * u).exp() / (sigma * (2.0 * PI).sqrt())
            }
            Density::Rational { name } => {
                let q = 1.0 + t * t;
                match name {
                    RationalForm::CauchySquared => 1.0 / (q * q),
                    RationalForm::SquareOverCauchySquared => t * t / (q * q),
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Density::Constant { c } if !(c >= 0.0 && c.is_finite()) => Err(Error::InvalidMeasure(
                format!("constant density must be finite and nonnegative, got {c}"),
            )),
            Density::Gaussian { mean, sigma }
                if !(sigma > 0.0 && sigma.is_finite() && mean.is_finite()) =>
            {
                Err(Error::InvalidMeasure(format!(
                    "gaussian needs finite mean and positive sigma, got ({mean}, {sigma})"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Places where the density varies on a short scale.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Density::Gaussian { mean, sigma } => [-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0]
                .iter()
                .map(|k| mean + k * sigma)
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(*self, Density::Constant { c } if c == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_forms() {
        let d: Density = serde_json::from_str(r#"{"form":"constant","c":1}"#).unwrap();
        assert_eq!(d, Density::Constant { c: 1.0 });
        let d: Density = serde_json::from_str(r#"{"form":"cauchy_weight"}"#).unwrap();
        assert_eq!(d, Density::CauchyWeight);
        let d: Density =
            serde_json::from_str(r#"{"form":"rational","name":"cauchy_squared"}"#).unwrap();
        assert_eq!(d.eval(1.0), 0.25);
        assert!(serde_json::from_str::<Density>(r#"{"form":"constant","c":1,"x":2}"#).is_err());
        assert!(serde_json::from_str::<Density>(r#"{"form":"cubic"}"#).is_err());
    }

    #[test]
    fn validation() {
        assert!(Density::Constant { c: -1.0 }.validate().is_err());
        assert!(Density::Gaussian {
            mean: 0.0,
            sigma: 0.0
        }
        .validate()
        .is_err());
        assert!(Density::Gaussian {
            mean: 0.0,
            sigma: 0.1
        }
        .validate()
        .is_ok());
    }
}
