//! Exact homological algebra over the universal Novikov ring with `Z/2` coefficients.
//!
//! The crate is organised bottom-up:
//!
//! * [`novikov`]: scalars of `Λ₀` and `Λ`, the energy valuation and the reduction `Λ₀ → Z/2`.
//! * [`z2`]: sparse and dense linear algebra over `Z/2`, `Z/2` chain complexes and chain maps.
//! * [`complexes`]: based filtered complexes over `Λ₀`, gapped maps, bar reduction, cones.
//! * [`homology`]: `Z/2` Betti numbers, Novikov barcodes, the brute-force persistence oracle and
//!   the gapped isomorphism check.
//! * [`telescope`]: mapping telescopes, the universal map and finite colimits of homology.
//! * [`gcw`]: finite `Z/2` cell complexes with free actions of finite groups, sphere models of `EG`.
//! * [`borel`]: Borel approximations, equivariant homology and the Cartan check.
//! * [`cascade`]: synthetic Floer-type complexes and the end-to-end rehearsal of the
//!   isomorphism argument.
//! * [`trees`]: strata of the compactified moduli of metric path trees.
//! * [`doc`] and [`cli`]: the structured document format and the command line front end.
//!
//! Only finite formal sums are represented. Every complex has finite rank and every matrix has
//! finite support, so the completion with respect to the energy filtration changes nothing here.

pub mod borel;
pub mod cascade;
pub mod cli;
pub mod complexes;
pub mod doc;
pub mod gcw;
pub mod homology;
pub mod novikov;
pub mod telescope;
pub mod trees;
pub mod z2;

mod error;

pub use error::{Error, Result};
pub use novikov::{Energy, NovikovScalar, Variant};
