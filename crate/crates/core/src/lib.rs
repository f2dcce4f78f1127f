//! Gröbner-basis module theory over `Q(p_1, ..., p_t)[d_1, ..., d_n]` with tracking of
//! the parameter values for which a computation stays valid.

pub mod arith;
pub mod error;
pub mod genericity;
pub mod groebner;
pub mod homological;
pub mod ideal;
pub mod module_ops;
pub mod ordering;
pub mod ring;
pub mod stratify;

pub use error::{Error, Result};
pub use ring::Ring;
