//! Exact computer algebra for desk-scale verification of graded Lie algebra
//! cohomology, Laplacian operator identities and affine constant-term
//! identities.
//!
//! Everything here is exact: rationals never round, series are truncated but
//! carry their cutoffs, and every rank is certified over the rationals. The
//! crate is `no_std` (with `alloc`); IO, parallel drivers and report formats
//! live in the companion `maclab` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod char_ring;
pub mod identity;
pub mod koszul;
pub mod laplacian;
pub mod linalg;
pub mod qt;
pub mod rat;
pub mod rng;
pub mod root_data;

pub use rat::QRat;
pub use root_data::{CartanFamily, CorootPoint, RootSystem, Weight};

/// Errors shared across modules. Construction and verification routines
/// return these instead of panicking so the CLI can map them onto its
/// exit-code contract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    UnsupportedCartanType(alloc::string::String),
    DimensionError,
    DominanceError,
    SymmetryError,
    NotAUnit,
    DomainError,
    FlipPairingError,
    SupportError,
    CapacityError {
        slice: alloc::string::String,
        dim: usize,
        cap: usize,
    },
    NotAComplex,
    OperatorDomainError,
    DegreeError,
    LacingError,
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::UnsupportedCartanType(s) => write!(f, "unsupported Cartan type: {s}"),
            Error::DimensionError => write!(f, "rank mismatch"),
            Error::DominanceError => write!(f, "weight is not dominant"),
            Error::SymmetryError => write!(f, "character is not Weyl-invariant"),
            Error::NotAUnit => write!(f, "series constant term is not 1"),
            Error::DomainError => write!(f, "coefficient domain mismatch"),
            Error::FlipPairingError => {
                write!(
                    f,
                    "unpaired factor with non-positive exponent in a polynomial domain"
                )
            }
            Error::SupportError => write!(f, "exponent outside the series support"),
            Error::CapacityError { slice, dim, cap } => {
                write!(f, "slice {slice} has dimension {dim} above the cap {cap}")
            }
            Error::NotAComplex => write!(f, "differentials do not compose to zero"),
            Error::OperatorDomainError => write!(f, "operator undefined on this slice kind"),
            Error::DegreeError => write!(f, "invariant polynomial degree mismatch"),
            Error::LacingError => write!(f, "root system is not simply laced"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
