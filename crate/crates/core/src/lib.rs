//! Exact spectra and isotropy of compact flat orbifolds.
//!
//! Everything lives in lattice coordinates: a lattice is a rational Gram
//! matrix, a group element is an integer matrix with a rational translation.
#![no_std]

extern crate alloc;

pub mod catalog;
pub mod crystal;
pub mod exact;
pub mod group;
pub mod homog;
pub mod isotropy;
pub mod lattice;
pub mod spectrum;
