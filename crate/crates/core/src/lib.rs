//! Exact descendent Gromov-Witten invariants of the projective line.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is exact: the value
//! type is [`Rational`] and every generating function is a truncated
//! [`MultiSeries`] in the genus variable `eps` and one variable per
//! insertion.
//!
//! * [`series`]: the truncated multivariate power series ring.
//! * [`special`]: Bernoulli numbers, the sinh/tanh kernels and the
//!   auxiliary series `L_{a,i}`.
//! * [`degree_zero`]: degree zero multipoint series and Hodge integrals
//!   against `lambda_g` and `lambda_{g-1}`.
//! * [`combinatorics`]: subsets, set partitions, compositions, labeled
//!   trees and the Hurwitz tree identities.
//! * [`toda`]: positive degree multipoint series from the Toda equation,
//!   memoized, and extraction of single invariants.
//! * [`checks`]: structural property checks shared by tests and the CLI.

#![no_std]

extern crate alloc;

pub mod checks;
pub mod combinatorics;
pub mod degree_zero;
pub mod error;
pub mod rational;
pub mod series;
pub mod special;
pub mod toda;

pub use error::{Error, Result};
pub use rational::Rational;
pub use series::{LinearForm, MultiSeries, TruncationSpec, EPS};
