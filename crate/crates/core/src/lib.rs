//! Exact computations for generalized Kac–Moody algebras presented through
//! doubled Borcherds–Cartan matrices, and for Ringel–Hall algebras of quivers
//! over small finite fields.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cartan;
pub mod elimination;
pub mod field;
pub mod freelie;
pub mod hall;
pub mod kronecker;
pub mod presentation;
pub mod report;
