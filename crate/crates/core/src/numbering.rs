//! Numberings: bijections from query positions to ensemble labels.
//!
//! Internally positions and labels are zero-based; the external (JSON,
//! display) representation is one-based, `n = (n(1), ..., n(M))`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A bijection `{0..M} -> {0..M}`; `apply(t)` is the label guessed at
/// query position `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Numbering(Vec<usize>);

impl Numbering {
    /// From a zero-based mapping vector.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let m = mapping.len();
        let mut seen = vec![false; m];
        for &x in &mapping {
            if x >= m || std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotBijection(m));
            }
        }
        Ok(Self(mapping))
    }

    /// From a one-based mapping vector such as `(2, 3, 1)`.
    pub fn from_one_based(mapping: &[usize]) -> Result<Self> {
        let m = mapping.len();
        let zero: Option<Vec<usize>> = mapping.iter().map(|&x| x.checked_sub(1)).collect();
        zero.ok_or(Error::NotBijection(m)).and_then(Self::new)
    }

    pub(crate) fn from_vec_unchecked(mapping: Vec<usize>) -> Self {
        debug_assert!(Self::new(mapping.clone()).is_ok());
        Self(mapping)
    }

    pub fn identity(m: usize) -> Self {
        Self((0..m).collect())
    }

    /// `(M, M-1, ..., 1)`.
    pub fn reversal(m: usize) -> Self {
        Self((0..m).rev().collect())
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut v: Vec<usize> = (0..m).collect();
        v.shuffle(rng);
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, t: usize) -> usize {
        self.0[t]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. `t -> self(other(t))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Size { expected: self.len(), got: other.len() });
        }
        Ok(Self(other.0.iter().map(|&t| self.0[t]).collect()))
    }

    pub fn invert(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (t, &x) in self.0.iter().enumerate() {
            inv[x] = t;
        }
        Self(inv)
    }

    /// Reorders `values` so that `result[t] = values[self(t)]`.
    pub fn pull_back<T: Clone>(&self, values: &[T]) -> Result<Vec<T>> {
        if values.len() != self.len() {
            return Err(Error::Size { expected: self.len(), got: values.len() });
        }
        Ok(self.0.iter().map(|&x| values[x].clone()).collect())
    }
}

impl fmt::Display for Numbering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_one_based().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for Numbering {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Numbering {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Numbering::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

pub fn compose(a: &Numbering, b: &Numbering) -> Result<Numbering> {
    a.compose(b)
}

pub fn invert(a: &Numbering) -> Numbering {
    a.invert()
}

pub fn apply(a: &Numbering, t: usize) -> usize {
    a.apply(t)
}
