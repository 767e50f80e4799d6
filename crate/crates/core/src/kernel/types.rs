use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, frac, frac_sided, parse_rational, Rational, Side, SidedValue};

/// A residue class of `R^d / Z^d`, stored with coordinates in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<Rational>,
}

impl TorusPoint {
    pub fn new(coords: impl IntoIterator<Item = Rational>) -> Self {
        TorusPoint { coords: coords.into_iter().map(|x| frac(&x)).collect() }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn to_sided(&self) -> Vec<SidedValue> {
        self.coords.iter().cloned().map(SidedValue::at).collect()
    }
}

/// A finite multiset of torus points with a common dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<TorusPoint>,
    label: String,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<TorusPoint>, label: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        Ok(PointSet { dim, points, label: label.into() })
    }

    /// Builds a set from raw coordinate rows, reducing every coordinate mod 1.
    pub fn from_rows(
        dim: usize,
        rows: impl IntoIterator<Item = Vec<Rational>>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let points = rows.into_iter().map(TorusPoint::new).collect();
        PointSet::new(dim, points, label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Coordinates of the limit configuration `D + Z` when `Z` carries side
    /// flags. A coordinate that reaches an integer from below becomes exactly
    /// 1, so the result lives in `[0, 1]` rather than `[0, 1)`.
    pub fn limit_coords(&self, shift: &ShiftVector) -> Result<Vec<Vec<Rational>>> {
        self.check_dim(shift.dim())?;
        Ok(self
            .points
            .iter()
            .map(|p| {
                p.coords()
                    .iter()
                    .zip(shift.coords())
                    .map(|(x, z)| frac_sided(&z.add(x)))
                    .collect()
            })
            .collect())
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&PointSetFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: PointSetFile = serde_json::from_str(s)?;
        file.try_into()
    }
}

/// On-disk form: `{"dim": d, "points": [["p/q", ...], ...], "label": "..."}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSetFile {
    pub dim: usize,
    pub points: Vec<Vec<String>>,
    #[serde(default)]
    pub label: String,
}

impl From<&PointSet> for PointSetFile {
    fn from(d: &PointSet) -> Self {
        PointSetFile {
            dim: d.dim,
            points: d
                .points
                .iter()
                .map(|p| p.coords.iter().map(format_rational).collect())
                .collect(),
            label: d.label.clone(),
        }
    }
}

impl TryFrom<PointSetFile> for PointSet {
    type Error = Error;

    fn try_from(f: PointSetFile) -> Result<Self> {
        let rows = f
            .points
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        PointSet::from_rows(f.dim, rows, f.label)
    }
}

/// Upper corner `Y` of an anchored box, each coordinate in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Anchor {
    coords: Vec<SidedValue>,
}

impl Anchor {
    pub fn new(coords: Vec<SidedValue>) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        for y in &coords {
            if y.value < zero || y.value > one {
                return Err(Error::InvalidParameter(format!("anchor coordinate {y} outside [0, 1]")));
            }
        }
        Ok(Anchor { coords })
    }

    pub fn exact(coords: impl IntoIterator<Item = Rational>) -> Result<Self> {
        Anchor::new(coords.into_iter().map(SidedValue::at).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Anchor { coords: vec![SidedValue::at(Rational::zero()); dim] }
    }

    pub fn coords(&self) -> &[SidedValue] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_exact(&self) -> bool {
        self.coords.iter().all(|y| y.side == Side::At)
    }

    /// Comma-separated `p/q[+|-]` list.
    pub fn parse(s: &str) -> Result<Self> {
        let coords = s.split(',').map(str::parse).collect::<Result<Vec<SidedValue>>>()?;
        Anchor::new(coords)
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for Anchor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// A torus shift `Z`, canonicalized to `[0, 1)` per coordinate. Side flags
/// describe shifts approached from one side (suprema over shift cells).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftVector {
    coords: Vec<SidedValue>,
}

impl ShiftVector {
    pub fn new(coords: Vec<SidedValue>) -> Self {
        ShiftVector {
            coords: coords.into_iter().map(|z| SidedValue::new(frac(&z.value), z.side)).collect(),
        }
    }

    pub fn exact(coords: impl IntoIterator<Item = Rational>) -> Self {
        ShiftVector::new(coords.into_iter().map(SidedValue::at).collect())
    }

    pub fn zero(dim: usize) -> Self {
        ShiftVector::exact(vec![Rational::zero(); dim])
    }

    pub fn coords(&self) -> &[SidedValue] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_exact(&self) -> bool {
        self.coords.iter().all(|z| z.side == Side::At)
    }

    pub fn values(&self) -> Vec<Rational> {
        self.coords.iter().map(|z| z.value.clone()).collect()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let coords = s.split(',').map(str::parse).collect::<Result<Vec<SidedValue>>>()?;
        Ok(ShiftVector::new(coords))
    }
}

impl fmt::Display for ShiftVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for ShiftVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// A subset `J` of the coordinate indices `0..d` (displayed 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSubset {
    dim: usize,
    mask: u32,
}

impl IndexSubset {
    pub const MAX_DIM: usize = 16;

    pub fn new(dim: usize, members: &[usize]) -> Result<Self> {
        if dim > Self::MAX_DIM {
            return Err(Error::InvalidParameter(format!("dimension {dim} too large")));
        }
        let mut mask = 0;
        for &j in members {
            if j >= dim {
                return Err(Error::InvalidParameter(format!("index {} outside [1, {dim}]", j + 1)));
            }
            mask |= 1 << j;
        }
        Ok(IndexSubset { dim, mask })
    }

    pub fn from_mask(dim: usize, mask: u32) -> Self {
        debug_assert!(dim <= Self::MAX_DIM && mask >> dim == 0);
        IndexSubset { dim, mask }
    }

    pub fn full(dim: usize) -> Self {
        IndexSubset::from_mask(dim, ((1u64 << dim) - 1) as u32)
    }

    pub fn empty(dim: usize) -> Self {
        IndexSubset::from_mask(dim, 0)
    }

    /// All `2^d` subsets, ordered by bitmask.
    pub fn all(dim: usize) -> impl Iterator<Item = IndexSubset> {
        (0..(1u32 << dim)).map(move |mask| IndexSubset::from_mask(dim, mask))
    }

    /// All subsets of `self`, ordered by bitmask.
    pub fn subsets(&self) -> impl Iterator<Item = IndexSubset> + '_ {
        (0..=self.mask)
            .filter(move |m| m & !self.mask == 0)
            .map(move |m| IndexSubset::from_mask(self.dim, m))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn contains(&self, j: usize) -> bool {
        self.mask >> j & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.dim).filter(|&j| self.contains(j)).collect()
    }

    pub fn complement(&self) -> IndexSubset {
        IndexSubset::from_mask(self.dim, !self.mask & IndexSubset::full(self.dim).mask)
    }

    pub fn difference(&self, other: &IndexSubset) -> IndexSubset {
        IndexSubset::from_mask(self.dim, self.mask & !other.mask)
    }

    /// Parses `1+3` (1-based members) or an empty string for the empty set.
    pub fn parse(dim: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(IndexSubset::empty(dim));
        }
        let members = s
            .split('+')
            .map(|t| match t.trim().parse::<usize>() {
                Ok(j) if j >= 1 => Ok(j - 1),
                _ => Err(Error::InvalidParameter(format!("bad index subset {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        IndexSubset::new(dim, &members)
    }

    /// `1+3` form used in inequality ids.
    pub fn id(&self) -> String {
        self.members().iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join("+")
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().iter().map(|j| (j + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
