//! Finite-field arithmetic, character sums and sieve criteria for pairs of
//! r-primitive, k-normal elements.

pub mod boundscan;
pub mod chars;
pub mod criteria;
pub mod elems;
pub mod error;
pub mod ffield;
pub mod fqpoly;
pub mod intnt;
pub mod ratfun;
pub mod search;

pub use error::{Error, Result};
pub use intnt::{Factorization, LogMagnitude};
