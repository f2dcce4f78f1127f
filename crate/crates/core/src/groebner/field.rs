//! Coefficient fields the engine runs over.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{ParamFraction, ParamPoly};

/// Field operations for the engine. `inv` is only called on nonzero elements.
pub trait CoeffField: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// The polynomial whose vanishing invalidates division by `lc`, if any.
    fn normalization_event(&self, _lc: &Self::Elem) -> Option<ParamPoly> {
        None
    }
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl CoeffField for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// `Q(p_1, ..., p_t)`.
#[derive(Clone, Copy, Debug)]
pub struct RationalFunctions {
    pub nparams: usize,
}

impl CoeffField for RationalFunctions {
    type Elem = ParamFraction;

    fn zero(&self) -> ParamFraction {
        ParamFraction::zero(self.nparams)
    }
    fn one(&self) -> ParamFraction {
        ParamFraction::one(self.nparams)
    }
    fn is_zero(&self, a: &ParamFraction) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &ParamFraction) -> bool {
        a.is_one()
    }
    fn add(&self, a: &ParamFraction, b: &ParamFraction) -> ParamFraction {
        a + b
    }
    fn sub(&self, a: &ParamFraction, b: &ParamFraction) -> ParamFraction {
        a - b
    }
    fn mul(&self, a: &ParamFraction, b: &ParamFraction) -> ParamFraction {
        a * b
    }
    fn neg(&self, a: &ParamFraction) -> ParamFraction {
        -a
    }
    fn inv(&self, a: &ParamFraction) -> ParamFraction {
        a.inv().expect("engine inverts only nonzero coefficients")
    }
    fn normalization_event(&self, lc: &ParamFraction) -> Option<ParamPoly> {
        if lc.numer().is_constant() {
            None
        } else {
            Some(lc.numer().clone())
        }
    }
}
