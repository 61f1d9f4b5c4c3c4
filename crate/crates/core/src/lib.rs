//! Exact combinatorics engine for Ekedahl-Oort strata closures.
//!
//! The crate computes, for a cocharacter datum (root system, compact type
//! `I`, Frobenius action), the frame element, the twisted order on minimal
//! coset representatives, canonical parabolic types, and the cover/bounded/
//! separating verdicts that decide smoothness, normality and the
//! Cohen-Macaulay property of stratum closures. Closed-form criteria for the
//! classical signatures, the full odd-orthogonal suite (explicit elements,
//! admissible pairs, Hasse-invariant weights, Chevalley multiplicities,
//! cycle classes) and the interval-word algorithm on Dieudonne indices are
//! provided as independent oracles.

pub mod canonical;
pub mod closedform;
pub mod dieudonne;
pub mod error;
pub mod oddorth;
pub mod rootdata;
pub mod strata;
pub mod weyl;
pub mod zipdatum;

pub use canonical::{CanonicalType, FlagZipDatum, Projection};
pub use error::Error;
pub use rootdata::{DatumSpec, DynkinType, FrobeniusAction, FrobeniusKind, RootDatum};
pub use strata::{Conclusion, Separating, Verdict, WOpen};
pub use weyl::{CosetTable, WeylElement};
pub use zipdatum::{CocharacterDatum, Frame, StrataPoset};

pub type Result<T> = std::result::Result<T, Error>;
