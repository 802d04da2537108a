//! Monochromatic-rectangle covers of Boolean matrices and their Kronecker
//! products.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation over immutable values; file formats and the command line
//! front end live in the `kronrank-cli` crate.
//!
//! Modules, bottom up:
//!
//! * [`boolmat`]: word-packed 0/1 matrices, Boolean sum/product, Kronecker
//!   product and rank-1 factor projection.
//! * [`cover`]: rectangles, cover certificates, eager and lazy verification,
//!   composition of covers of `A ⊗ B` from two matrix families.
//! * [`crown`]: crown matrices `C_n`, subset-family covers, the bijections
//!   used to build coverable triples, and gap covers of `C_n ⊗ C_m`.
//! * [`algebraic`]: the `Z_p` function family and the "every `q` of them
//!   cover" matrix family, plus the asymptotic parameter pipeline.
//! * [`bounds`]: exact Boolean rank for small matrices, isolation sets,
//!   `μ(A)` and Kronecker lower bounds.
//! * [`spanoid`]: spanoids, span closure, rank, matrix and product spanoids.
#![no_std]

extern crate alloc;
#[cfg(feature = "parallel")]
extern crate std;

pub mod algebraic;
pub mod boolmat;
pub mod bounds;
pub mod combin;
pub mod cover;
pub mod crown;
mod error;
pub mod spanoid;

pub use boolmat::{BoolMatrix, EntryIndex4, DEFAULT_MATERIALIZATION_LIMIT};
pub use cover::{Cover, KronCover, MatrixFamily, Rectangle, Verdict};
pub use error::{Error, Result};
