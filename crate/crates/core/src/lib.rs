//! Numerical core for semi-Markov scattering transport.
//!
//! The crate is `no_std` (with `alloc`): every sampler is a pure function of an
//! explicit random stream, so batches can be sharded across workers by the
//! caller without shared state. Heavy-tailed flight times follow the
//! Mittag-Leffler law, obtained by time-changing an exponential clock with the
//! inverse of an α-stable subordinator.
//!
//! Module map:
//!
//! * [`special_fn`]: Mittag-Leffler function, regularized incomplete beta,
//!   numerical Laplace inversion on a Talbot contour.
//! * [`levy`]: stable variates, first passage of the subordinator, and the
//!   coupled displacement/time process of the superdiffusive limit.
//! * [`semi_markov`]: the time-changed velocity chain and its occupation data.
//! * [`evolution`]: random-evolution products for translations and planar
//!   rotations, with Monte Carlo expectations.
//! * [`transport`]: the flight process, its rescaling and its scaling limit.
//! * [`fracops`]: fractional Caputo and material derivatives on grids.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod evolution;
pub mod fracops;
pub mod levy;
pub mod quad;
pub mod rng;
pub mod semi_markov;
pub mod special_fn;
pub mod stats;
pub mod transport;

pub use error::{Error, Result};
pub use rng::{stream, StreamRng};
