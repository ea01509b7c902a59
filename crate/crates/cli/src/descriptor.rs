//! Function and measure descriptors as given on the command line.
//!
//! Accepted forms for `--fn`:
//!
//! - `catalogue:f2`, `catalogue:f4-upper`
//! - `cauchy:lebesgue2` (built-in measure name) or `cauchy:{...}` (inline measure)
//! - `herglotz:{a:1,b:[2],mu:zero}`
//! - a JSON descriptor, inline (`{"type":"catalogue","id":"f7"}`) or as a file path
//!
//! Inline objects may leave keys and bare-word values unquoted.

use std::path::Path;
use std::sync::OnceLock;

use anyhow::{bail, Context, Result};
use herglotz::functions::{FunctionDescriptor, MeasureSpec};
use herglotz::Measure;
use regex::Regex;
use serde::Serialize;

/// Adds the quotes relaxed JSON leaves out: `{a:1,mu:zero}` becomes
/// `{"a":1,"mu":"zero"}`.
pub fn relaxed_json(text: &str) -> String {
    static KEY: OnceLock<Regex> = OnceLock::new();
    static WORD: OnceLock<Regex> = OnceLock::new();
    let key = KEY.get_or_init(|| Regex::new(r#"([{,]\s*)([A-Za-z_][A-Za-z0-9_]*)\s*:"#).unwrap());
    let word = WORD
        .get_or_init(|| Regex::new(r#"([:\[,]\s*)([A-Za-z_][A-Za-z0-9_\-]*)(\s*[,}\]])"#).unwrap());
    let quoted = key.replace_all(text, r#"$1"$2":"#);
    // Two passes: adjacent matches share a delimiter.
    let mut out = quoted.into_owned();
    for _ in 0..2 {
        out = word
            .replace_all(&out, |c: &regex::Captures| match &c[2] {
                "true" | "false" | "null" => c[0].to_string(),
                w => format!("{}\"{w}\"{}", &c[1], &c[3]),
            })
            .into_owned();
    }
    out
}

/// Tagged enums are buffered before deserialization, so serde reports field
/// errors without a position. This recovers one from the field name.
fn locate(text: &str, e: &serde_json::Error) -> String {
    let msg = e.to_string();
    if e.line() > 0 {
        return msg;
    }
    static FIELD: OnceLock<Regex> = OnceLock::new();
    let field =
        FIELD.get_or_init(|| Regex::new(r"(?:unknown|missing|duplicate) field `([^`]*)`").unwrap());
    let Some(name) = field.captures(&msg).map(|c| c[1].to_string()) else {
        return msg;
    };
    let Some(at) = text.find(&format!("\"{name}\"")) else {
        return msg;
    };
    let line = text[..at].matches('\n').count() + 1;
    let column = at - text[..at].rfind('\n').map_or(0, |k| k + 1) + 1;
    format!("{msg} at line {line} column {column}")
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let text = relaxed_json(text);
    serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("cannot parse {what}: {}", locate(&text, &e)))
}

fn read_file(path: &str, what: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {what} file `{path}`"))
}

pub fn parse_measure(text: &str) -> Result<MeasureSpec> {
    let text = text.trim();
    if text.starts_with('{') {
        let m: Measure = parse_json(text, "measure")?;
        return Ok(MeasureSpec::Inline(m));
    }
    if Measure::builtin(text).is_ok() || text == "zero" || text == "lebesgue" {
        return Ok(MeasureSpec::Named(text.to_string()));
    }
    if Path::new(text).is_file() {
        let m: Measure = parse_json(
            &read_file(text, "measure")?,
            &format!("measure file `{text}`"),
        )?;
        return Ok(MeasureSpec::Inline(m));
    }
    bail!("unknown measure `{text}` (expected a built-in name, inline JSON or a file)")
}

pub fn parse_function(text: &str) -> Result<FunctionDescriptor> {
    let text = text.trim();
    if text.starts_with('{') {
        return parse_json(text, "function descriptor");
    }
    if let Some((kind, rest)) = text.split_once(':') {
        match kind {
            "catalogue" => {
                return Ok(FunctionDescriptor::Catalogue {
                    id: rest.to_string(),
                })
            }
            "cauchy" => {
                return Ok(FunctionDescriptor::Cauchy {
                    measure: parse_measure(rest)?,
                })
            }
            "herglotz" => {
                #[derive(serde::Deserialize)]
                #[serde(deny_unknown_fields)]
                struct Fields {
                    a: f64,
                    b: Vec<f64>,
                    #[serde(alias = "measure")]
                    mu: serde_json::Value,
                }
                let f: Fields = parse_json(rest, "herglotz descriptor")?;
                let measure = match f.mu {
                    serde_json::Value::String(s) => parse_measure(&s)?,
                    other => MeasureSpec::Inline(
                        serde_json::from_value(other).context("cannot parse inline measure")?,
                    ),
                };
                return Ok(FunctionDescriptor::Herglotz {
                    a: f.a,
                    b: f.b,
                    measure,
                });
            }
            _ => {}
        }
    }
    if Path::new(text).is_file() {
        return parse_json(
            &read_file(text, "descriptor")?,
            &format!("descriptor file `{text}`"),
        );
    }
    bail!("unrecognised function descriptor `{text}`")
}

/// Replaces the measure of a `cauchy` or `herglotz` descriptor.
pub fn with_measure(f: FunctionDescriptor, measure: MeasureSpec) -> Result<FunctionDescriptor> {
    Ok(match f {
        FunctionDescriptor::Cauchy { .. } => FunctionDescriptor::Cauchy { measure },
        FunctionDescriptor::Herglotz { a, b, .. } => FunctionDescriptor::Herglotz { a, b, measure },
        FunctionDescriptor::Catalogue { .. } => {
            bail!("--measure does not apply to catalogue functions")
        }
    })
}

/// Echo of the inputs that determine a report.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: serde_json::Map<String, serde_json::Value>,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub output: Option<String>,
    pub version: &'static str,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relaxed_keys_and_words() {
        assert_eq!(
            relaxed_json("{a:1,b:[2],mu:zero}"),
            r#"{"a":1,"b":[2],"mu":"zero"}"#
        );
        assert_eq!(relaxed_json(r#"{"a":true}"#), r#"{"a":true}"#);
        assert_eq!(relaxed_json("{x:[p,q,r]}"), r#"{"x":["p","q","r"]}"#);
        assert_eq!(relaxed_json("{w:1e-3}"), r#"{"w":1e-3}"#);
    }

    #[test]
    fn shorthand_forms() {
        assert_eq!(
            parse_function("catalogue:f4-upper").unwrap(),
            FunctionDescriptor::Catalogue {
                id: "f4-upper".into()
            }
        );
        assert_eq!(
            parse_function("cauchy:lebesgue2").unwrap(),
            FunctionDescriptor::Cauchy {
                measure: MeasureSpec::Named("lebesgue2".into())
            }
        );
        let h = parse_function("herglotz:{a:1,b:[2],mu:zero}").unwrap();
        assert_eq!(
            h,
            FunctionDescriptor::Herglotz {
                a: 1.0,
                b: vec![2.0],
                measure: MeasureSpec::Named("zero".into())
            }
        );
        let m = parse_function(r#"cauchy:{type:atomic,points:[[0]],weights:[2]}"#);
        assert!(m.is_ok(), "{m:?}");
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_function("herglotz:{a:1,c:[2],mu:zero}").unwrap_err();
        assert!(format!("{e:#}").contains("unknown field `c`"), "{e:#}");
        assert!(parse_function("nonsense").is_err());
        assert!(parse_measure("lebesgue7").is_err());
    }
}
