//! Genuine characters of the center `Z(T) = Y_{Q,n}`, stored by their values on a basis.

use num_complex::Complex64;
use rand::Rng;

use crate::exact::Cyclo;

use super::scalar::Scalar;

/// A genuine character of the center, fixed by its values on the chosen basis of
/// `Y_{Q,n}`; values on other lattice points pick up the sign cocycle `epsilon^D`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiPoint<S> {
    pub values: Vec<S>,
}

impl<S: Scalar> ChiPoint<S> {
    pub fn new(values: Vec<S>) -> Self {
        ChiPoint { values }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }
}

impl ChiPoint<Complex64> {
    /// Independent uniform phases on the basis.
    pub fn random_unitary<R: Rng>(rank: usize, rng: &mut R) -> Self {
        let values = (0..rank)
            .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        ChiPoint { values }
    }
}

impl ChiPoint<Cyclo> {
    /// `zeta_order^{exponents[i]}` on the `i`-th basis vector.
    pub fn roots_of_unity(order: u64, exponents: &[i64]) -> Self {
        ChiPoint {
            values: exponents
                .iter()
                .map(|&k| Cyclo::root_of_unity(order, k))
                .collect(),
        }
    }
}
