//! Exact arithmetic in `Q[p_1, ..., p_t]` and its fraction field.

pub mod factor;
pub mod fraction;
pub mod gcd;
pub mod monomial;
pub mod param_poly;

pub use factor::{factor_set, factorize, Factorization};
pub use fraction::ParamFraction;
pub use gcd::{gcd, gcd_many, lcm};
pub use monomial::Monomial;
pub use param_poly::ParamPoly;
