//! Truncated Fock-space numerics for nonlinear coherent states.
//!
//! The crate builds coherent, excited coherent, negative binomial, binomial,
//! k-photon Perelomov and user-defined nonlinear coherent states on a finite
//! photon-number basis, and checks numerically the operator identities that
//! tie them together: eigen-relations of `f(N̂)a`, exponential and
//! displacement-operator forms, closure under photon excitation, and the
//! Holstein–Primakoff su(1,1)/su(2) displacement factorizations.
//!
//! [`verify`] assembles those checks into the reports emitted by the `nlcs` CLI.

pub mod error;
pub mod fock;
pub mod lie;
pub mod nlcs;
pub mod specfun;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{DiagonalFunction, ExpOptions, FockVector, Truncation, TruncationPolicy};
pub use nlcs::{NlcsSpec, NonlinearFunction};
pub use states::{PhotonStats, StateSpec};
