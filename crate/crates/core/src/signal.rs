use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{norm1, norm2, ZERO};

/// A complex vector indexed by group elements (filters and inputs alike).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSignal {
    values: Vec<Complex64>,
}

impl GroupSignal {
    pub fn new(values: Vec<Complex64>) -> Self {
        GroupSignal { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        GroupSignal {
            values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn zeros(len: usize) -> Self {
        GroupSignal {
            values: vec![ZERO; len],
        }
    }

    /// Indicator of a single element, scaled by `value`.
    pub fn delta(len: usize, index: usize, value: Complex64) -> Self {
        let mut s = Self::zeros(len);
        s.values[index] = value;
        s
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    pub fn norm2(&self) -> f64 {
        norm2(&self.values)
    }

    pub fn norm1(&self) -> f64 {
        norm1(&self.values)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        GroupSignal {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == ZERO)
    }

    /// Unit-norm copy together with the original norm.
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let n = self.norm2();
        if n == 0.0 {
            return Err(Error::DegenerateFilter);
        }
        Ok((self.scaled(Complex64::new(1.0 / n, 0.0)), n))
    }

    /// `u ↦ self(u⁻¹)`.
    pub fn inverted(&self, group: &FiniteGroup) -> Self {
        GroupSignal {
            values: (0..self.len()).map(|u| self.values[group.inv(u)]).collect(),
        }
    }

    pub fn ensure_on(&self, group: &FiniteGroup) -> Result<()> {
        if self.len() == group.order() {
            Ok(())
        } else {
            Err(Error::IncompatibleSignal {
                order: group.order(),
                found: self.len(),
            })
        }
    }
}

impl From<Vec<Complex64>> for GroupSignal {
    fn from(values: Vec<Complex64>) -> Self {
        GroupSignal::new(values)
    }
}
