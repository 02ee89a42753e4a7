use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, primitive};
use crate::scalar::{format_scalar, Scalar};

/// Whether a face derives from a real (geometric or contact) constraint or
/// from an artificial cap bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    NonCap,
    Cap,
}

impl Tag {
    pub fn is_cap(self) -> bool {
        self == Tag::Cap
    }

    /// Cap wins over NonCap when combining the tags of contributing faces.
    pub fn join(self, other: Tag) -> Tag {
        if self.is_cap() || other.is_cap() {
            Tag::Cap
        } else {
            Tag::NonCap
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::NonCap => "noncap",
            Tag::Cap => "cap",
        })
    }
}

/// A closed half-space `normal · x <= offset` in canonical form.
///
/// The normal is stored as a primitive integer vector obtained by a positive
/// rescaling of the input, so two descriptions of the same half-space compare
/// equal field by field. Only positive factors are allowed: flipping the sign
/// would describe the opposite half-space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    normal: Vec<Scalar>,
    offset: Scalar,
    pub tag: Tag,
    pub provenance: String,
}

impl HalfSpace {
    pub fn new(
        normal: Vec<Scalar>,
        offset: Scalar,
        tag: Tag,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let (normal, offset) = canonicalize(&normal, &offset)?;
        Ok(HalfSpace {
            normal,
            offset,
            tag,
            provenance: provenance.into(),
        })
    }

    pub fn noncap(normal: Vec<Scalar>, offset: Scalar, provenance: impl Into<String>) -> Result<Self> {
        Self::new(normal, offset, Tag::NonCap, provenance)
    }

    pub fn cap(normal: Vec<Scalar>, offset: Scalar, provenance: impl Into<String>) -> Result<Self> {
        Self::new(normal, offset, Tag::Cap, provenance)
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[Scalar] {
        &self.normal
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    pub fn normal_int(&self) -> Vec<BigInt> {
        self.normal.iter().map(|q| q.numer().clone()).collect()
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.eval(x) <= self.offset
    }

    pub fn is_tight(&self, x: &[Scalar]) -> bool {
        self.eval(x) == self.offset
    }

    /// Same bounding hyperplane and side, ignoring tag and provenance.
    pub fn same_halfspace(&self, other: &HalfSpace) -> bool {
        self.normal == other.normal && self.offset == other.offset
    }

    /// True when `other` is the opposite side of the same hyperplane.
    pub fn is_opposite(&self, other: &HalfSpace) -> bool {
        self.offset == -other.offset.clone()
            && self.normal.iter().zip(&other.normal).all(|(a, b)| *a == -b.clone())
    }

    pub fn with_tag(mut self, tag: Tag) -> Self {
        self.tag = tag;
        self
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Point reflection `x -> -x` of the half-space.
    pub fn negated(&self) -> HalfSpace {
        HalfSpace {
            normal: self.normal.iter().map(|q| -q.clone()).collect(),
            offset: self.offset.clone(),
            tag: self.tag,
            provenance: self.provenance.clone(),
        }
    }

    /// Hyperplane identity key: canonical normal and offset.
    pub fn key(&self) -> (Vec<Scalar>, Scalar) {
        (self.normal.clone(), self.offset.clone())
    }

    pub fn cmp_geometry(&self, other: &HalfSpace) -> Ordering {
        self.normal
            .cmp(&other.normal)
            .then_with(|| self.offset.cmp(&other.offset))
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.normal.iter().map(format_scalar).collect();
        write!(
            f,
            "[{}]·x <= {} ({}, {})",
            terms.join(", "),
            format_scalar(&self.offset),
            self.tag,
            self.provenance
        )
    }
}

/// Rescales `normal · x <= offset` by the unique positive factor that makes the
/// normal a primitive integer vector.
pub fn canonicalize(normal: &[Scalar], offset: &Scalar) -> Result<(Vec<Scalar>, Scalar)> {
    let lead = normal
        .iter()
        .position(|q| !q.is_zero())
        .ok_or(Error::ZeroNormal)?;
    let ints = primitive(normal);
    let factor = Scalar::from_integer(ints[lead].clone()) / &normal[lead];
    debug_assert!(factor > Scalar::zero());
    let offset = offset * factor;
    Ok((ints.into_iter().map(Scalar::from_integer).collect(), offset))
}

/// Sorts half-spaces canonically and merges duplicates. A merged entry is
/// NonCap when any duplicate is NonCap.
pub fn dedup_halfspaces(mut list: Vec<HalfSpace>) -> Vec<HalfSpace> {
    list.sort_by(|a, b| {
        a.cmp_geometry(b)
            .then_with(|| a.tag.cmp(&b.tag))
            .then_with(|| a.provenance.cmp(&b.provenance))
    });
    // Tag ordering puts NonCap first, so the first of each run wins.
    list.dedup_by(|later, first| first.same_halfspace(later));
    list
}
