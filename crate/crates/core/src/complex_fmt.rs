//! The `a+bi` literal format used for complex numbers in reports and on the
//! command line.
//!
//! Formatting uses the shortest round-trip representation of each `f64`, so
//! `parse_complex(&format_complex(z)) == z` for every finite `z`.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn format_complex(z: Complex64) -> String {
    let (re, im) = (z.re, z.im);
    if im == 0.0 && !im.is_sign_negative() {
        return format!("{re}");
    }
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    if re == 0.0 && !re.is_sign_negative() {
        if sign == '-' {
            return format!("-{}i", im.abs());
        }
        return format!("{}i", im.abs());
    }
    format!("{re}{sign}{}i", im.abs())
}

/// Parses `3`, `-2.5i`, `i`, `-i`, `1+2i`, `1e-3-4.5e2i` and similar.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let bad = || Error::Parse(format!("malformed complex literal `{text}`"));

    let Some(body) = s.strip_suffix('i') else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        return Ok(Complex64::new(re, 0.0));
    };

    // Split at the last sign that is not the leading sign and not part of an
    // exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part.parse().map_err(|_| bad())?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

/// Comma-separated list of complex literals, e.g. `"4i,-1+2i"`.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(',').map(parse_complex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        let cases = [
            ("i", Complex64::new(0.0, 1.0)),
            ("-i", Complex64::new(0.0, -1.0)),
            ("4i", Complex64::new(0.0, 4.0)),
            ("3", Complex64::new(3.0, 0.0)),
            ("1+2i", Complex64::new(1.0, 2.0)),
            ("1-i", Complex64::new(1.0, -1.0)),
            ("-2.5-0.5i", Complex64::new(-2.5, -0.5)),
            ("1e-3+2e+1i", Complex64::new(1e-3, 20.0)),
            (" 2 + 3i ", Complex64::new(2.0, 3.0)),
        ];
        for (text, want) in cases {
            assert_eq!(parse_complex(text).unwrap(), want, "{text}");
        }
    }

    #[test]
    fn rejects_garbage() {
        for text in ["", "abc", "1+2j", "1++2i", "i1"] {
            assert!(parse_complex(text).is_err(), "{text}");
        }
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_complex(Complex64::new(0.0, -0.1)), "-0.1i");
        assert_eq!(format_complex(Complex64::new(1.0, 2.0)), "1+2i");
        assert_eq!(format_complex(Complex64::new(-1.5, -2.0)), "-1.5-2i");
        assert_eq!(format_complex(Complex64::new(3.0, 0.0)), "3");
    }

    proptest::proptest! {
        #[test]
        fn round_trips(re in -1e12f64..1e12, im in -1e12f64..1e12) {
            let z = Complex64::new(re, im);
            proptest::prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
