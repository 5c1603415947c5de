//! Finite abelian groups, explicit class field theory over the rationals and
//! the counting machinery for norm principles of abelian extensions.

pub mod abelian_group;
pub mod arith;
pub mod counting;
pub mod dirichlet_cft;
pub mod error;
pub mod local_fourier;
pub mod norm_principle;

pub use error::{Error, Result};
