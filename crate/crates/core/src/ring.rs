use std::fmt::Debug;

use num_traits::Zero;

use crate::rational::Q;

/// Minimal coefficient interface for sparse state vectors.
pub trait Coeff: Clone + PartialEq + Debug {
    fn is_zero_coeff(&self) -> bool;
    fn add_into(&mut self, other: &Self);
}

impl Coeff for Q {
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }

    fn add_into(&mut self, other: &Self) {
        *self += other;
    }
}
