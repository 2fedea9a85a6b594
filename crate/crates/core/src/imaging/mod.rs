//! Expansion-free share generation.
//!
//! Each secret pixel picks one column of C0 (white) or C1 (black) at random
//! and share `i` takes that column's row-`i` bit. Stacking shares is a
//! pixel-wise OR, and contrast shows up as the gap in white-pixel frequency
//! between the secret's white and black regions.

pub mod pbm;
pub mod rng;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::{CodebookSpec, Scheme, SchemeParams};
use crate::pascal::gbinom;
use crate::{Error, Result};
use pbm::PbmFormat;
use rng::PixelRng;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5EED_0F5E_C2E7;

/// Row-major bitmap; `true` is black.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryImage {
    /// All-white image.
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::Domain(format!(
                "{} bits do not fill a {width}x{height} image",
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let bits = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self {
            width,
            height,
            bits,
        }
    }

    /// Left half white, right half black.
    pub fn split_card(width: usize, height: usize) -> Self {
        Self::from_fn(width, height, |x, _| x >= width / 2)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, black: bool) {
        self.bits[y * self.width + x] = black;
    }

    pub fn count_black(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    fn same_size(&self, other: &BinaryImage) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// Weighted choice of a column class, then a uniform column within it.
struct ColumnSampler {
    n: usize,
    /// `(weight j, cumulative column count through this class)`.
    classes: Vec<(usize, u128)>,
    total: u128,
}

impl ColumnSampler {
    fn new(n: usize, counts: &BTreeMap<usize, i128>) -> Result<Self> {
        let mut total: u128 = 0;
        let mut classes = Vec::with_capacity(counts.len());
        for (&j, &count) in counts {
            let cols = (count as u128)
                .checked_mul(gbinom(n as i64, j as u32)? as u128)
                .ok_or(Error::Overflow("column sampler"))?;
            total = total
                .checked_add(cols)
                .ok_or(Error::Overflow("column sampler"))?;
            classes.push((j, total));
        }
        Ok(Self { n, classes, total })
    }

    fn sample(&self, rng: &mut PixelRng) -> u64 {
        let r = rng.below_u128(self.total);
        let idx = self.classes.partition_point(|&(_, end)| end <= r);
        rng.subset(self.n, self.classes[idx].0)
    }
}

/// Share bit masks for every pixel: bit `i` belongs to share `i + 1`.
fn encode_columns(secret: &BinaryImage, spec: &CodebookSpec, seed: u64) -> Result<Vec<u64>> {
    if secret.width == 0 || secret.height == 0 {
        return Err(Error::Domain(format!(
            "cannot encode a {}x{} image",
            secret.width, secret.height
        )));
    }
    let white = ColumnSampler::new(spec.n(), spec.c0_counts())?;
    let black = ColumnSampler::new(spec.n(), spec.c1_counts())?;
    Ok(secret
        .bits
        .par_iter()
        .enumerate()
        .map(|(idx, &is_black)| {
            let mut rng = PixelRng::new(seed, idx as u64);
            if is_black {
                black.sample(&mut rng)
            } else {
                white.sample(&mut rng)
            }
        })
        .collect())
}

/// Splits `secret` into `spec.n()` shares of the same size.
pub fn encode_with_spec(
    secret: &BinaryImage,
    spec: &CodebookSpec,
    seed: u64,
) -> Result<Vec<BinaryImage>> {
    let columns = encode_columns(secret, spec, seed)?;
    Ok((0..spec.n())
        .map(|i| BinaryImage {
            width: secret.width,
            height: secret.height,
            bits: columns.iter().map(|c| c >> i & 1 == 1).collect(),
        })
        .collect())
}

pub fn encode(secret: &BinaryImage, scheme: &Scheme, seed: u64) -> Result<ShareSet> {
    Ok(ShareSet {
        params: scheme.params,
        m: scheme.spec.m(),
        seed,
        shares: encode_with_spec(secret, &scheme.spec, seed)?,
    })
}

/// Pixel-wise OR of the given shares.
pub fn stack(shares: &[&BinaryImage]) -> Result<BinaryImage> {
    let (first, rest) = shares
        .split_first()
        .ok_or_else(|| Error::Domain("nothing to stack".into()))?;
    let mut out = (*first).clone();
    for share in rest {
        if !share.same_size(&out) {
            return Err(Error::Domain(format!(
                "cannot stack {}x{} onto {}x{}",
                share.width, share.height, out.width, out.height
            )));
        }
        for (o, &b) in out.bits.iter_mut().zip(&share.bits) {
            *o |= b;
        }
    }
    Ok(out)
}

/// White-pixel counts of a stacked image over the secret's two regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmpiricalContrast {
    pub white_region_white: usize,
    pub white_region_total: usize,
    pub black_region_white: usize,
    pub black_region_total: usize,
}

impl EmpiricalContrast {
    /// Estimate of `p_w`.
    pub fn white_fraction(&self) -> f64 {
        self.white_region_white as f64 / self.white_region_total as f64
    }

    /// Estimate of `p_b`.
    pub fn black_fraction(&self) -> f64 {
        self.black_region_white as f64 / self.black_region_total as f64
    }

    pub fn difference(&self) -> f64 {
        self.white_fraction() - self.black_fraction()
    }

    /// Standard error of [`difference`](Self::difference) when the true
    /// white-pixel probabilities are `p_w` and `p_b`.
    pub fn std_error(&self, p_w: f64, p_b: f64) -> f64 {
        (p_w * (1.0 - p_w) / self.white_region_total as f64
            + p_b * (1.0 - p_b) / self.black_region_total as f64)
            .sqrt()
    }
}

pub fn empirical_contrast(
    stacked: &BinaryImage,
    secret: &BinaryImage,
) -> Result<EmpiricalContrast> {
    if !stacked.same_size(secret) {
        return Err(Error::Domain(format!(
            "stacked image is {}x{} but secret is {}x{}",
            stacked.width, stacked.height, secret.width, secret.height
        )));
    }
    let mut c = EmpiricalContrast {
        white_region_white: 0,
        white_region_total: 0,
        black_region_white: 0,
        black_region_total: 0,
    };
    for (&s, &p) in secret.bits.iter().zip(&stacked.bits) {
        if s {
            c.black_region_total += 1;
            c.black_region_white += usize::from(!p);
        } else {
            c.white_region_total += 1;
            c.white_region_white += usize::from(!p);
        }
    }
    if c.white_region_total == 0 {
        return Err(Error::Domain("secret has no white region".into()));
    }
    if c.black_region_total == 0 {
        return Err(Error::Domain("secret has no black region".into()));
    }
    Ok(c)
}

/// Sidecar metadata written next to share files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareMetadata {
    pub k: usize,
    pub n: usize,
    pub start_row: i64,
    pub m: i128,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareSet {
    pub params: SchemeParams,
    pub m: i128,
    pub seed: u64,
    pub shares: Vec<BinaryImage>,
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = OsString::from(stem.as_os_str());
    s.push(suffix);
    PathBuf::from(s)
}

/// `<stem>.share<i>.pbm`, `i` 1-based.
pub fn share_path(stem: &Path, i: usize) -> PathBuf {
    with_suffix(stem, &format!(".share{i}.pbm"))
}

/// `<stem>.vss.json`.
pub fn metadata_path(stem: &Path) -> PathBuf {
    with_suffix(stem, ".vss.json")
}

impl ShareSet {
    /// OR of the shares with the given 1-based indices.
    pub fn stack_subset(&self, indices: &[usize]) -> Result<BinaryImage> {
        let picked = indices
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .and_then(|i| self.shares.get(i))
                    .ok_or_else(|| {
                        Error::Domain(format!("share index {i} outside 1..={}", self.shares.len()))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        stack(&picked)
    }

    pub fn metadata(&self) -> ShareMetadata {
        ShareMetadata {
            k: self.params.k,
            n: self.params.n,
            start_row: self.params.start_row,
            m: self.m,
            seed: self.seed,
        }
    }

    /// Writes every share plus the sidecar; returns the share paths.
    pub fn write_files(&self, stem: &Path, format: PbmFormat) -> Result<Vec<PathBuf>> {
        let mut paths = Vec::with_capacity(self.shares.len());
        for (i, share) in self.shares.iter().enumerate() {
            let path = share_path(stem, i + 1);
            pbm::write_pbm_file(&path, share, format)?;
            paths.push(path);
        }
        let json = serde_json::to_string_pretty(&self.metadata())?;
        std::fs::write(metadata_path(stem), json + "\n")?;
        Ok(paths)
    }
}

pub fn read_metadata(path: impl AsRef<Path>) -> Result<ShareMetadata> {
    Ok(serde_json::from_slice(&std::fs::read(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{assign_sides, CoefficientSequence};

    fn two_two() -> CodebookSpec {
        // C0 = [M_0, M_2], C1 = [M_1]
        assign_sides(&CoefficientSequence::new(vec![1, 1, 1]).unwrap()).unwrap()
    }

    fn scheme(k: usize, n: usize) -> Scheme {
        Scheme::new(SchemeParams::new(k, n).unwrap()).unwrap()
    }

    #[test]
    fn two_two_single_pixel() {
        let spec = two_two();
        let white = BinaryImage::new(1, 1);
        let black = BinaryImage::from_fn(1, 1, |_, _| true);
        for seed in 0..200 {
            let s = encode_with_spec(&white, &spec, seed).unwrap();
            assert_eq!(s[0].get(0, 0), s[1].get(0, 0));
            let stacked = stack(&[&s[0], &s[1]]).unwrap();
            assert_eq!(stacked.get(0, 0), s[0].get(0, 0));

            let s = encode_with_spec(&black, &spec, seed).unwrap();
            assert_ne!(s[0].get(0, 0), s[1].get(0, 0));
            assert!(stack(&[&s[0], &s[1]]).unwrap().get(0, 0));
        }
    }

    #[test]
    fn zero_dimension_is_rejected() {
        let s = scheme(2, 3);
        assert!(matches!(
            encode(&BinaryImage::new(0, 5), &s, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn encoding_is_deterministic() {
        let s = scheme(3, 5);
        let secret = BinaryImage::split_card(37, 11);
        let a = encode(&secret, &s, 77).unwrap();
        let b = encode(&secret, &s, 77).unwrap();
        assert_eq!(a, b);
        let c = encode(&secret, &s, 78).unwrap();
        assert_ne!(a.shares, c.shares);
    }

    #[test]
    fn stack_rules() {
        let a = BinaryImage::from_fn(4, 3, |x, y| (x + y) % 2 == 0);
        assert_eq!(stack(&[&a]).unwrap(), a);
        let black = BinaryImage::from_fn(4, 3, |_, _| true);
        assert_eq!(stack(&[&a, &black]).unwrap(), black);
        assert!(stack(&[]).is_err());
        assert!(stack(&[&a, &BinaryImage::new(3, 4)]).is_err());
    }

    #[test]
    fn contrast_measurement() {
        let secret = BinaryImage::split_card(10, 4);
        let c = empirical_contrast(&secret, &secret).unwrap();
        assert_eq!(c.difference(), 1.0);
        let black = BinaryImage::from_fn(10, 4, |_, _| true);
        assert_eq!(
            empirical_contrast(&black, &secret).unwrap().difference(),
            0.0
        );

        let err = empirical_contrast(&secret, &black).unwrap_err();
        assert!(err.to_string().contains("white region"));
        let err = empirical_contrast(&secret, &BinaryImage::new(10, 4)).unwrap_err();
        assert!(err.to_string().contains("black region"));
        assert!(empirical_contrast(&secret, &BinaryImage::new(3, 3)).is_err());
    }

    #[test]
    fn stack_subset_indices() {
        let set = encode(&BinaryImage::split_card(8, 8), &scheme(2, 3), 5).unwrap();
        assert_eq!(set.stack_subset(&[2]).unwrap(), set.shares[1]);
        assert!(set.stack_subset(&[0]).is_err());
        assert!(set.stack_subset(&[4]).is_err());
    }

    #[test]
    fn files_and_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let stem = dir.path().join("card");
        let set = encode(&BinaryImage::split_card(16, 4), &scheme(3, 4), 11).unwrap();
        let paths = set.write_files(&stem, PbmFormat::Raw).unwrap();
        assert_eq!(paths.len(), 4);
        assert!(paths[2].ends_with("card.share3.pbm"));
        for (p, share) in paths.iter().zip(&set.shares) {
            assert_eq!(&pbm::read_pbm_file(p).unwrap(), share);
        }
        let meta = read_metadata(metadata_path(&stem)).unwrap();
        assert_eq!(
            meta,
            ShareMetadata {
                k: 3,
                n: 4,
                start_row: 2,
                m: 6,
                seed: 11
            }
        );
    }
}
