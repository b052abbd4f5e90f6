//! Exact core of the `sdsproof` toolkit: preference modelling, canonical
//! profiles, stochastic dominance, exact linear programming, manipulation
//! domains, constraint generation, and solver-independent verification.
//!
//! The crate is `no_std` and needs only an allocator.
#![no_std]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

pub mod canon;
pub mod domain;
pub mod efficiency;
pub mod encode;
pub mod lottery;
pub mod prefs;
pub mod verify;
