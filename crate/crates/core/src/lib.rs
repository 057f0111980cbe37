//! Exact combinatorics for open books on planar pages.
//!
//! The crate models arcs and curves on planar surfaces by crossing words,
//! acts on them by Dehn twist words, compares arcs at a common start point,
//! and builds and checks movie presentations of surfaces whose open book
//! foliations can be inspected for transverse overtwisted discs.

pub mod constructions;
pub mod error;
pub mod foliation;
pub mod mcg;
pub mod movie;
pub mod surface;
pub mod veering;

pub use error::{EngineError, Result};
