//! Exact-arithmetic analysis of birational selfmaps of rational surfaces
//! defined over Q: pullback actions on Picard lattices of blowup models,
//! dynamical degrees and invariant classes as certified algebraic data,
//! base-curve classification, naive and canonical heights, and
//! place-by-place energy partial sums.

pub mod algnum;
pub mod birmap;
pub mod catalog;
pub mod charts;
pub mod exact;
pub mod factor;
pub mod interval;
pub mod lattice;
pub mod matrix;
pub mod modelpoint;
pub mod mpoly;
pub mod picdyn;
pub mod zpoly;

pub use algnum::{AlgNum, NumberField};
pub use exact::{Place, Rat};
pub use interval::RatInterval;
pub use mpoly::MPoly;
pub use zpoly::{QPoly, ZPoly};
