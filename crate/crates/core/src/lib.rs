//! Progressive (k,n)-threshold visual secret sharing built from the
//! generalized Pascal's triangle.
//!
//! The crate is organised bottom-up:
//!
//! - [`pascal`] evaluates binomial coefficients for arbitrary (including
//!   negative) upper index with exact, overflow-checked integers.
//! - [`codebook`] reads a coefficient sequence off one column of the
//!   triangle, splits it into the white (C0) and black (C1) basis matrices
//!   and evaluates the closed-form column count and contrast.
//! - [`validator`] checks the security and contrast conditions by
//!   enumerating every subset of shares, and compares against published
//!   reference values.
//! - [`imaging`] encodes binary images into expansion-free shares, stacks
//!   them and measures the contrast that actually shows up.
//!
//! ```
//! use pvss_core::{Scheme, SchemeParams};
//!
//! let scheme = Scheme::new(SchemeParams::new(3, 4).unwrap()).unwrap();
//! assert_eq!(scheme.sequence.coeffs(), &[2, 1, 0, -1, -2]);
//! assert_eq!(scheme.spec.m(), 6);
//! ```

pub mod codebook;
mod error;
pub mod imaging;
pub mod pascal;
pub mod validator;

pub use codebook::{
    assign_sides, build_sequence, column_count, expand, theoretical_contrast, BasisMatrixPair,
    BinaryMatrix, CodebookSpec, CoefficientSequence, Contrast, Scheme, SchemeParams,
};
pub use error::{Error, Result};
pub use imaging::{empirical_contrast, encode, stack, BinaryImage, EmpiricalContrast, ShareSet};
pub use pascal::{gbinom, triangle_slice, TriangleSlice};
pub use validator::{
    lemma_identity_check, reference_compare, subset_diff, verify_scheme, verify_scheme_with,
    LemmaCheck, ReferenceComparison, SubsetDiff, ValidationReport, VerifyOptions,
};
