//! Points of the poly cut-plane `(C \ R)^n`, their component signatures,
//! index subsets of `{1, ..., n}` and the selective-conjugation map.
//!
//! Indices are zero-based in the API. `Display` impls print them one-based to
//! match the usual mathematical notation.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex_fmt::{format_complex, parse_complex};
use crate::error::{Error, Result};

/// Default upper bound on the dimension. Subset sums cost `2^n` evaluations.
pub const DEFAULT_MAX_DIM: usize = 8;

/// Coordinates with `|Im z| <` this are treated as lying on the cut.
pub const CUT_THRESHOLD: f64 = 1e-300;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// A point of `(C \ R)^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutPlanePoint {
    coords: Vec<Complex64>,
}

impl CutPlanePoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        Self::with_max_dim(coords, DEFAULT_MAX_DIM)
    }

    pub fn with_max_dim(coords: Vec<Complex64>, max_dim: usize) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("a point needs at least one coordinate"));
        }
        if coords.len() > max_dim {
            return Err(Error::invalid(format!(
                "dimension {} exceeds the maximum {max_dim}",
                coords.len()
            )));
        }
        for (index, z) in coords.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() || z.im.abs() < CUT_THRESHOLD {
                return Err(Error::InvalidPoint { index, imag: z.im });
            }
        }
        Ok(CutPlanePoint { coords })
    }

    /// `i * (1, ..., 1)`.
    pub fn imaginary_unit(n: usize) -> Result<Self> {
        Self::new(vec![I; n])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn signature(&self) -> ComponentSignature {
        ComponentSignature {
            signs: self
                .coords
                .iter()
                .map(|z| if z.im > 0.0 { Sign::Plus } else { Sign::Minus })
                .collect(),
        }
    }

    pub fn is_upper(&self) -> bool {
        self.coords.iter().all(|z| z.im > 0.0)
    }

    /// Same point with coordinate `j` replaced.
    pub fn with_coord(&self, j: usize, value: Complex64) -> Result<Self> {
        let mut coords = self.coords.clone();
        *coords
            .get_mut(j)
            .ok_or_else(|| Error::invalid(format!("axis {j} out of range")))? = value;
        CutPlanePoint::new(coords)
    }

    /// `Psi_B(self, w)`.
    pub fn psi(&self, set: &IndexSet, w: &CutPlanePoint) -> Result<CutPlanePoint> {
        let coords = psi_map(set, &self.coords, &w.coords)?;
        Ok(CutPlanePoint { coords })
    }
}

impl fmt::Display for CutPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|z| format_complex(*z)).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for CutPlanePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coords.iter().map(|z| format_complex(*z)).collect();
        parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CutPlanePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(deserializer)?;
        let coords = parts
            .iter()
            .map(|s| parse_complex(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CutPlanePoint::new(coords).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Which connected component of `(C \ R)^n` a point lies in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentSignature {
    signs: Vec<Sign>,
}

impl ComponentSignature {
    pub fn from_signs(signs: Vec<Sign>) -> Self {
        ComponentSignature { signs }
    }

    /// Signature whose `Minus` positions are exactly `lower`.
    pub fn from_lower_set(lower: &IndexSet) -> Self {
        ComponentSignature {
            signs: (0..lower.dim())
                .map(|j| {
                    if lower.contains(j) {
                        Sign::Minus
                    } else {
                        Sign::Plus
                    }
                })
                .collect(),
        }
    }

    /// All `2^n` components, ordered by the bitmask of their lower-half set.
    pub fn all(n: usize) -> Result<Vec<ComponentSignature>> {
        Ok(enumerate_subsets(n, SubsetFilter::All)?
            .iter()
            .map(ComponentSignature::from_lower_set)
            .collect())
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    /// `B'`: positions lying in the lower half-plane.
    pub fn lower_index_set(&self) -> IndexSet {
        let mut mask = 0u64;
        for (j, s) in self.signs.iter().enumerate() {
            if *s == Sign::Minus {
                mask |= 1 << j;
            }
        }
        IndexSet {
            mask,
            n: self.signs.len(),
        }
    }

    pub fn is_upper(&self) -> bool {
        self.signs.iter().all(|s| *s == Sign::Plus)
    }
}

impl fmt::Display for ComponentSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .signs
            .iter()
            .map(|s| match s {
                Sign::Plus => "C+",
                Sign::Minus => "C-",
            })
            .collect();
        f.write_str(&parts.join("x"))
    }
}

impl Serialize for ComponentSignature {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn signature_of(p: &CutPlanePoint) -> ComponentSignature {
    p.signature()
}

/// A subset `B` of `{0, ..., n-1}` stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSet {
    mask: u64,
    n: usize,
}

impl IndexSet {
    pub fn empty(n: usize) -> Self {
        IndexSet { mask: 0, n }
    }

    pub fn full(n: usize) -> Self {
        IndexSet {
            mask: full_mask(n),
            n,
        }
    }

    pub fn from_indices(n: usize, members: &[usize]) -> Result<Self> {
        if n > 63 {
            return Err(Error::invalid("index sets support at most 63 indices"));
        }
        let mut mask = 0u64;
        for &j in members {
            if j >= n {
                return Err(Error::invalid(format!("index {j} outside 0..{n}")));
            }
            mask |= 1 << j;
        }
        Ok(IndexSet { mask, n })
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        if n > 63 || mask & !full_mask(n) != 0 {
            return Err(Error::invalid(format!("mask {mask:#b} outside 0..{n}")));
        }
        Ok(IndexSet { mask, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, j: usize) -> bool {
        j < self.n && self.mask & (1 << j) != 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.contains(j))
    }

    /// `(-1)^|B|`.
    pub fn parity_sign(&self) -> f64 {
        if self.len().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().map(|j| (j + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `Psi_B(z, w)`: `z_j` for `j` outside `B`, `conj(w_j)` for `j` in `B`.
pub fn psi_map(set: &IndexSet, z: &[Complex64], w: &[Complex64]) -> Result<Vec<Complex64>> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch {
            expected: z.len(),
            actual: w.len(),
        });
    }
    if set.dim() > z.len() && set.mask() >> z.len() != 0 {
        return Err(Error::invalid(format!(
            "index set {set} references an index beyond {}",
            z.len()
        )));
    }
    Ok(z.iter()
        .zip(w)
        .enumerate()
        .map(|(j, (zj, wj))| if set.contains(j) { wj.conj() } else { *zj })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetFilter {
    All,
    NonEmpty,
    SubsetsOf(IndexSet),
    NotSubsetsOf(IndexSet),
}

/// Subsets of `{0, ..., n-1}` in increasing bitmask order.
pub fn enumerate_subsets(n: usize, filter: SubsetFilter) -> Result<Vec<IndexSet>> {
    if n == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if n > 63 {
        return Err(Error::invalid("dimension too large for subset enumeration"));
    }
    if let SubsetFilter::SubsetsOf(b) | SubsetFilter::NotSubsetsOf(b) = filter {
        if b.mask() & !full_mask(n) != 0 {
            return Err(Error::invalid(format!("{b} is not a subset of 1..{n}")));
        }
    }
    let sets = (0..=full_mask(n))
        .map(|mask| IndexSet { mask, n })
        .filter(|b| match filter {
            SubsetFilter::All => true,
            SubsetFilter::NonEmpty => !b.is_empty(),
            SubsetFilter::SubsetsOf(bp) => b.is_subset_of(&bp),
            SubsetFilter::NotSubsetsOf(bp) => !b.is_subset_of(&bp),
        })
        .collect();
    Ok(sets)
}
