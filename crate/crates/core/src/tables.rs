//! Regenerates the catalogue tables: per-component formulas with sampled
//! values, and the matrix of which characterization conditions each
//! catalogue function satisfies.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{characterize, CharacterizeConfig, Verdict};
use crate::cutplane::CutPlanePoint;
use crate::error::Result;
use crate::functions::{catalogue, table_columns, CatalogueId, CauchyFunction, Evaluable};
use crate::measures::{Measure, QuadratureConfig};
use crate::sampling;

/// Reference matrix: conditions (i) positivity, (ii) symmetry, (iii)
/// non-dependence for `f0 .. f7`.
pub const EXPECTED_CONDITIONS: [[bool; 3]; 8] = [
    [false, false, false],
    [true, false, false],
    [false, true, false],
    [false, false, true],
    [true, true, false],
    [true, false, true],
    [false, true, true],
    [true, true, true],
];

/// Sample points per component in the formula table.
pub const TABLE1_SAMPLES: usize = 3;

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub point: CutPlanePoint,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Cell {
    pub component: String,
    pub formula: &'static str,
    pub samples: Vec<Sample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub function: CatalogueId,
    pub cells: Vec<Table1Cell>,
    /// Name of a measure whose Cauchy-type function is this catalogue entry.
    pub measure: Option<&'static str>,
    /// Largest `|closed form - quadrature|` over the samples, when `measure`
    /// is set.
    pub quadrature_deviation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Report {
    pub seed: u64,
    pub rows: Vec<Table1Row>,
}

fn representing_measure(id: CatalogueId) -> Option<(&'static str, Measure)> {
    match id {
        CatalogueId::F2 => Some(("mu2", Measure::diagonal())),
        CatalogueId::F4 => Some(("f4", Measure::f4_defining())),
        CatalogueId::F7 => Some(("lebesgue2", Measure::lebesgue(2))),
        _ => None,
    }
}

fn format_value(v: Complex64) -> String {
    crate::complex_fmt::format_complex(v)
}

pub fn table1(seed: u64, quad: &QuadratureConfig) -> Result<Table1Report> {
    let mut rows = Vec::new();
    for id in CatalogueId::ALL {
        let f = catalogue(id);
        let cauchy = representing_measure(id)
            .map(|(name, mu)| Ok::<_, crate::Error>((name, CauchyFunction::new(mu, *quad)?)))
            .transpose()?;
        let mut deviation = 0.0f64;
        let mut cells = Vec::new();
        for sig in table_columns() {
            let branch = f.branch(&sig).expect("catalogue covers every component");
            let mut samples = Vec::new();
            for z in sampling::random_points(&sig, TABLE1_SAMPLES, seed) {
                let v = f.value(&z)?;
                if let Some((_, g)) = &cauchy {
                    deviation = deviation.max((g.value(&z)? - v).norm());
                }
                samples.push(Sample {
                    point: z,
                    value: format_value(v),
                });
            }
            cells.push(Table1Cell {
                component: sig.to_string(),
                formula: branch.formula,
                samples,
            });
        }
        rows.push(Table1Row {
            function: id,
            cells,
            measure: cauchy.as_ref().map(|(name, _)| *name),
            quadrature_deviation: cauchy.map(|_| deviation),
        });
    }
    Ok(Table1Report { seed, rows })
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Row {
    pub function: CatalogueId,
    /// `Some(true)` = holds, `Some(false)` = fails, `None` = inconclusive.
    pub computed: [Option<bool>; 3],
    pub expected: [bool; 3],
    pub matches: bool,
    pub verdict: Verdict,
    pub d: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Report {
    pub rows: Vec<Table2Row>,
    pub all_match: bool,
    pub config: CharacterizeConfig,
}

impl Table2Report {
    /// Cells that differ from `EXPECTED_CONDITIONS`, as `(function, condition
    /// index, computed, expected)`.
    pub fn mismatches(&self) -> Vec<(CatalogueId, usize, Option<bool>, bool)> {
        self.rows
            .iter()
            .flat_map(|r| {
                (0..3)
                    .filter(|&k| r.computed[k] != Some(r.expected[k]))
                    .map(move |k| (r.function, k, r.computed[k], r.expected[k]))
            })
            .collect()
    }
}

fn as_bool(v: Verdict) -> Option<bool> {
    match v {
        Verdict::Pass => Some(true),
        Verdict::Fail => Some(false),
        Verdict::Inconclusive => None,
    }
}

pub fn table2(cfg: &CharacterizeConfig) -> Result<Table2Report> {
    let mut rows = Vec::new();
    for id in CatalogueId::ALL {
        let report = characterize(&catalogue(id), cfg)?;
        let computed = report.conditions().map(as_bool);
        let expected = EXPECTED_CONDITIONS[id.index()];
        let matches = computed.iter().zip(expected).all(|(c, e)| *c == Some(e));
        rows.push(Table2Row {
            function: id,
            computed,
            expected,
            matches,
            verdict: report.verdict,
            d: report.d,
        });
    }
    let all_match = rows.iter().all(|r| r.matches);
    Ok(Table2Report {
        rows,
        all_match,
        config: cfg.clone(),
    })
}

fn mark(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "✓",
        Some(false) => "×",
        None => "?",
    }
}

impl Table1Report {
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let cols = table_columns();
        let _ = write!(out, "| |");
        for c in &cols {
            let _ = write!(out, " {c} |");
        }
        out.push_str("\n|---|---|---|---|---|\n");
        for row in &self.rows {
            let _ = write!(out, "| {} |", row.function);
            for cell in &row.cells {
                let _ = write!(out, " {} |", cell.formula);
            }
            out.push('\n');
        }
        out
    }
}

impl Table2Report {
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| | (i) | (ii) | (iii) | matches |\n|---|---|---|---|---|\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                row.function,
                mark(row.computed[0]),
                mark(row.computed[1]),
                mark(row.computed[2]),
                if row.matches { "yes" } else { "NO" }
            );
        }
        out
    }
}
