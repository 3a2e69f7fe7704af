use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar the models are evaluated in: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self;

    /// Converts a count into this scalar type.
    fn from_count(n: usize) -> Self;
}

impl Scalar for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        n as f32
    }
}

impl Scalar for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        n as f64
    }
}

/// Compensated (Neumaier) running sum.
///
/// Terms must be fed in a fixed order for results to be reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator<T> {
    sum: T,
    compensation: T,
}

impl<T: Scalar> Accumulator<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Scalar> FromIterator<T> for Accumulator<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Accumulator::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of `iter`, in iteration order.
pub fn sum<T: Scalar, I: IntoIterator<Item = T>>(iter: I) -> T {
    iter.into_iter().collect::<Accumulator<T>>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let terms = [1.0f64, 1e-16, 1e-16, 1e-16, 1e-16];
        assert_eq!(sum(terms), 1.0 + 4e-16);
        let naive: f64 = terms.iter().sum();
        assert_eq!(naive, 1.0);
    }

    #[test]
    fn lit_round_trips_for_f32() {
        assert_eq!(<f32 as Scalar>::lit(0.5), 0.5f32);
        assert_eq!(<f32 as Scalar>::from_count(250), 250.0f32);
    }
}
