//! Shared fixtures for the criterion benchmarks.

use pvss_core::{BasisMatrixPair, BinaryImage, Scheme, SchemeParams};

pub fn scheme(k: usize, n: usize) -> Scheme {
    Scheme::new(SchemeParams::new(k, n).expect("valid parameters")).expect("buildable scheme")
}

pub fn expanded(k: usize, n: usize) -> BasisMatrixPair {
    scheme(k, n).expand().expect("expandable scheme")
}

/// Square test card, left half white and right half black.
pub fn card(side: usize) -> BinaryImage {
    BinaryImage::split_card(side, side)
}
