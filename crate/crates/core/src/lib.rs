//! Exact formal-duality machinery for finite abelian groups.
//!
//! A pair of subsets `S`, `T` of a finite abelian group `G` (with `T` read in
//! the dual group through a pairing) is *formally dual* when every squared
//! character sum of `S` is proportional to the weight enumerator of `T`.
//! This crate decides such identities exactly, by reducing sums of roots of
//! unity modulo cyclotomic polynomials, and carries an orderly search engine
//! that enumerates one representative per affine orbit of candidate sets.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, checkpointing,
//! threading and the command line live in the `fdual` crate.
//!
//! Groups are written additively. Elements are addressed by a mixed-radix
//! index with the last coordinate varying fastest, so `Z_2 x Z_4` numbers
//! `(1, 2)` as `1 * 4 + 2 = 6`.

#![no_std]

extern crate alloc;

pub mod abelian;
pub mod cyclotomic;
pub mod duality;
mod error;
pub mod primitivity;
pub mod search;

pub use abelian::{AbelianGroup, Automorphism, Automorphisms, ElementSet, GroupElement, GroupSpec, PairingMatrix};
pub use cyclotomic::{cyclotomic_poly, ClassVector, CyclotomicPoly};
pub use duality::{Certificate, CertificateKind, DualityChecker, DualityReport, Failure, WeightEnumerator};
pub use error::Error;
pub use primitivity::{is_primitive, PrimitivityReport};
pub use search::{Mode, SearchConfig, SearchContext, SearchOutcome, SearchStats, Symmetry};

/// Version tag stamped into certificates.
pub const VERSION: &str = concat!("fdual ", env!("CARGO_PKG_VERSION"));
