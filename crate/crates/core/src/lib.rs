//! Sign-variation posets `P_{n,m}`, their order complexes `Δ_{n,m}`, and
//! the partition of the face poset into Boolean intervals indexed by even
//! signed permutations.
//!
//! Everything here is exhaustive enumeration at desk scale; the modules are
//! layered bottom-up:
//!
//! - [`signvec`]: projective sign vectors, sign variation, cyclic sign flips
//! - [`sperm`]: signed permutations, type-D descents, `D(n,k)`, `C^π`, `C_π`
//! - [`poset`] and [`complex`]: `P_{n,m}` and its chains, f/h/flag vectors
//! - [`homology`]: reduced rational Betti numbers
//! - [`partition`]: the labelling of faces and the partition certificate
//! - [`identities`]: Dehn–Sommerville and h-vector cross checks
//! - [`cache`]: versioned binary storage of built complexes

pub mod cache;
pub mod chain;
pub mod complex;
pub mod error;
pub mod homology;
pub mod identities;
pub mod partition;
pub mod poset;
pub mod signvec;
pub mod sperm;

pub use chain::Chain;
pub use complex::OrderComplex;
pub use error::{Error, Result};
pub use partition::{phi, PartitionCertificate, PhiResult};
pub use poset::RankedPoset;
pub use signvec::{FlipSet, Sign, SignVector};
pub use sperm::{DescentData, SignedPerm};
