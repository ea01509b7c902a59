//! Closed-form functions on `(C \ R)^2` with one formula per component.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cutplane::{ComponentSignature, CutPlanePoint, IndexSet, I};
use crate::error::{Error, Result};
use crate::functions::Evaluable;
use crate::measures::Estimate;

/// One branch of a closed form: the component it covers, a readable formula
/// and its evaluator.
#[derive(Clone)]
pub struct Branch {
    pub signature: ComponentSignature,
    pub formula: &'static str,
    eval: fn(&[Complex64]) -> Complex64,
}

impl Branch {
    pub fn new(
        signature: ComponentSignature,
        formula: &'static str,
        eval: fn(&[Complex64]) -> Complex64,
    ) -> Self {
        Branch {
            signature,
            formula,
            eval,
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        (self.eval)(z)
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.signature, self.formula)
    }
}

/// A function given by explicit formulas on components of the cut-plane.
/// Points in components without a branch are rejected.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    name: String,
    dim: usize,
    branches: Vec<Branch>,
}

impl ClosedForm {
    pub fn new(name: impl Into<String>, dim: usize, branches: Vec<Branch>) -> Result<Self> {
        if branches.iter().any(|b| b.signature.dim() != dim) {
            return Err(Error::invalid("branch signature has the wrong dimension"));
        }
        Ok(ClosedForm {
            name: name.into(),
            dim,
            branches,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, signature: &ComponentSignature) -> Option<&Branch> {
        self.branches.iter().find(|b| &b.signature == signature)
    }
}

impl Evaluable for ClosedForm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, z: &CutPlanePoint) -> Result<Estimate> {
        super::check_dim(self.dim, z)?;
        let signature = z.signature();
        let branch = self.branch(&signature).ok_or(Error::NoBranch(signature))?;
        Ok(Estimate::exact(branch.eval(z.coords())))
    }
}

/// The eight example functions `f0, ..., f7` on `(C \ R)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogueId {
    F0,
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
}

impl CatalogueId {
    pub const ALL: [CatalogueId; 8] = [
        CatalogueId::F0,
        CatalogueId::F1,
        CatalogueId::F2,
        CatalogueId::F3,
        CatalogueId::F4,
        CatalogueId::F5,
        CatalogueId::F6,
        CatalogueId::F7,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7"][self.index()]
    }
}

impl fmt::Display for CatalogueId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogueId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CatalogueId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown catalogue function `{s}` (expected f0..f7)"
                ))
            })
    }
}

/// Column order of the catalogue: `C+xC+`, `C-xC+`, `C+xC-`, `C-xC-`.
pub fn table_columns() -> [ComponentSignature; 4] {
    let sig = |lower: &[usize]| {
        ComponentSignature::from_lower_set(&IndexSet::from_indices(2, lower).expect("n = 2"))
    };
    [sig(&[]), sig(&[0]), sig(&[1]), sig(&[0, 1])]
}

type Formula = (&'static str, fn(&[Complex64]) -> Complex64);

fn rows(id: CatalogueId) -> [Formula; 4] {
    let neg_i: Formula = ("-i", |_| -I);
    let pos_i: Formula = ("i", |_| I);
    let zero: Formula = ("0", |_| Complex64::new(0.0, 0.0));
    let inv_z2: Formula = ("1/z2", |z| z[1].inv());
    match id {
        CatalogueId::F0 => [neg_i, inv_z2, zero, zero],
        CatalogueId::F1 => [pos_i, inv_z2, zero, zero],
        CatalogueId::F2 => [
            ("-i/2 - 1/(i+z1) - 1/(i+z2)", |z| {
                -I / 2.0 - (I + z[0]).inv() - (I + z[1]).inv()
            }),
            ("-i/2 + 1/(z2-z1) - 1/(i+z2)", |z| {
                -I / 2.0 + (z[1] - z[0]).inv() - (I + z[1]).inv()
            }),
            ("-i/2 - 1/(i+z1) + 1/(z1-z2)", |z| {
                -I / 2.0 - (I + z[0]).inv() + (z[0] - z[1]).inv()
            }),
            ("-i/2", |_| -I / 2.0),
        ],
        CatalogueId::F3 => [neg_i, zero, zero, zero],
        CatalogueId::F4 => [
            ("9i/2 - 1/(i+z1) - 1/(i+z2)", |z| {
                I * 4.5 - (I + z[0]).inv() - (I + z[1]).inv()
            }),
            ("-11i/2 + 1/(z2-z1) - 1/(i+z2)", |z| {
                -I * 5.5 + (z[1] - z[0]).inv() - (I + z[1]).inv()
            }),
            ("-11i/2 - 1/(i+z1) + 1/(z1-z2)", |z| {
                -I * 5.5 - (I + z[0]).inv() + (z[0] - z[1]).inv()
            }),
            ("-11i/2", |_| -I * 5.5),
        ],
        CatalogueId::F5 => [pos_i, zero, zero, zero],
        CatalogueId::F6 => [neg_i, pos_i, pos_i, pos_i],
        CatalogueId::F7 => [pos_i, neg_i, neg_i, neg_i],
    }
}

pub fn catalogue(id: CatalogueId) -> ClosedForm {
    let branches = table_columns()
        .into_iter()
        .zip(rows(id))
        .map(|(signature, (formula, eval))| Branch::new(signature, formula, eval))
        .collect();
    ClosedForm::new(id.name(), 2, branches).expect("catalogue branches are two-dimensional")
}
