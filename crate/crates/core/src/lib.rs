//! Number-field arithmetic and experiments around S-unit power residues:
//! prime splitting, τ-surjectivity verdicts, ray class groups over ℚ,
//! section cohomology of cyclic Mackey functors and random-rank statistics.

pub mod arith;
pub mod error;
pub mod fp_poly;
pub mod matrix;
pub mod nf;
pub mod zpoly;

pub use error::{Error, Result};
pub use nf::{NFElement, NumberField};
pub mod abgroup;
pub mod config;
pub mod fp_linalg;
pub mod lattice;
pub mod mackey;
pub mod order;
pub mod prime_split;
pub mod ranstat;
pub mod rayclass_q;
pub mod scan;
pub mod sunits;
pub mod tau;
