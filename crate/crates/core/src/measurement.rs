//! Numbering-valued measurements: POVMs whose outcomes are numberings.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numbering::Numbering;
use crate::operators::{HermitianOperator, EIGEN_TOL};

/// Sparse POVM over numberings; absent numberings carry the zero element.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberingMeasurement {
    dim: usize,
    elements: BTreeMap<Numbering, HermitianOperator>,
}

impl NumberingMeasurement {
    /// Validates PSD-ness of every element and completeness within
    /// [`EIGEN_TOL`].
    pub fn new(dim: usize, elements: impl IntoIterator<Item = (Numbering, HermitianOperator)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut labels = None;
        for (n, op) in elements {
            if op.dim() != dim {
                return Err(Error::Dimension { expected: dim, got: op.dim() });
            }
            if *labels.get_or_insert(n.len()) != n.len() {
                return Err(Error::InvalidMeasurement("numberings of different sizes".into()));
            }
            let slot = map.entry(n).or_insert_with(|| HermitianOperator::zeros(dim));
            *slot = &*slot + &op;
        }
        let m = Self { dim, elements: map };
        if m.elements.is_empty() {
            return Err(Error::InvalidMeasurement("no elements".into()));
        }
        let min = m.min_eigenvalue();
        if min < -EIGEN_TOL {
            return Err(Error::InvalidMeasurement(format!("element with eigenvalue {min:.3e}")));
        }
        let err = m.completeness_error();
        if err > EIGEN_TOL {
            return Err(Error::InvalidMeasurement(format!("elements sum to identity only within {err:.3e}")));
        }
        Ok(m)
    }

    /// The trivial measurement `{n -> I}`.
    pub fn single_outcome(dim: usize, n: Numbering) -> Self {
        Self { dim, elements: BTreeMap::from([(n, HermitianOperator::identity(dim))]) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of labels `M` the outcomes number.
    pub fn labels(&self) -> usize {
        self.elements.keys().next().map_or(0, Numbering::len)
    }

    pub fn elements(&self) -> impl Iterator<Item = (&Numbering, &HermitianOperator)> {
        self.elements.iter()
    }

    pub fn element(&self, n: &Numbering) -> Option<&HermitianOperator> {
        self.elements.get(n)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Smallest eigenvalue over all stored elements.
    pub fn min_eigenvalue(&self) -> f64 {
        self.elements.values().map(HermitianOperator::min_eigenvalue).fold(f64::INFINITY, f64::min)
    }

    /// `max |(sum_n pi(n) - I)_ij|`.
    pub fn completeness_error(&self) -> f64 {
        let sum = self.elements.values().fold(HermitianOperator::zeros(self.dim), |acc, e| &acc + e);
        sum.distance(&HermitianOperator::identity(self.dim))
    }
}
