//! Ambient space `R^d`, `d ∈ {1, 2, 3}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Spatial dimension. Point interactions only exist for `d ≤ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub enum Dimension {
    One,
    Two,
    Three,
}

impl Dimension {
    pub fn new(d: usize) -> Result<Self> {
        match d {
            1 => Ok(Dimension::One),
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(Error::Dimension(other)),
        }
    }

    #[inline]
    pub fn get(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }

    /// Surface measure of the unit sphere `S^{d-1}`: 2, 2π, 4π.
    pub fn sphere_area<T: Real>(self) -> T {
        match self {
            Dimension::One => lit(2.0),
            Dimension::Two => T::TAU(),
            Dimension::Three => lit::<T>(4.0) * T::PI(),
        }
    }

    pub(crate) fn check_point<T>(self, x: &[T]) -> Result<()> {
        if x.len() == self.get() {
            Ok(())
        } else {
            Err(Error::PointLength {
                expected: self.get(),
                got: x.len(),
            })
        }
    }
}

impl TryFrom<usize> for Dimension {
    type Error = Error;

    fn try_from(d: usize) -> Result<Self> {
        Dimension::new(d)
    }
}

impl From<Dimension> for usize {
    fn from(d: Dimension) -> usize {
        d.get()
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

pub(crate) fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub(crate) fn scale<T: Real>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

pub(crate) fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    crate::real::norm(&sub(a, b))
}
