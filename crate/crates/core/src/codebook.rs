//! Basis matrices read off the generalized Pascal's triangle.
//!
//! A `(k, n)` scheme uses column `n - k` of the triangle. Starting at row
//! `start_row` and walking upward `n + 1` rows gives the coefficient
//! sequence `a_0..a_n`. Each signed value `v_j = (-1)^j a_j` says how many
//! copies of the totally symmetric block `M^n_j` (all distinct weight-`j`
//! columns) go into C0 (`v_j > 0`) or C1 (`v_j < 0`).
//!
//! The default start row `n - ceil(k/2)` puts the sequence in the most
//! symmetric position, which gives the smallest column count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::pascal::gbinom;
use crate::{Error, Result};

/// Largest supported share count; column patterns are `u64` bit masks.
pub const MAX_SHARES: usize = 64;

/// Default cell cap for [`expand`].
pub const DEFAULT_EXPAND_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeParams {
    pub k: usize,
    pub n: usize,
    pub start_row: i64,
}

impl SchemeParams {
    /// Parameters with the default (symmetric) start row.
    pub fn new(k: usize, n: usize) -> Result<Self> {
        Self::check(k, n)?;
        Ok(Self {
            k,
            n,
            start_row: Self::default_start_row(k, n),
        })
    }

    pub fn with_start_row(k: usize, n: usize, start_row: i64) -> Result<Self> {
        Self::check(k, n)?;
        Ok(Self { k, n, start_row })
    }

    fn check(k: usize, n: usize) -> Result<()> {
        if k < 2 || k > n {
            return Err(Error::InvalidParams(format!(
                "need 2 <= k <= n, got k = {k}, n = {n}"
            )));
        }
        if n > MAX_SHARES {
            return Err(Error::InvalidParams(format!(
                "n = {n} exceeds the supported maximum of {MAX_SHARES}"
            )));
        }
        Ok(())
    }

    pub fn default_start_row(k: usize, n: usize) -> i64 {
        n as i64 - k.div_ceil(2) as i64
    }

    pub fn half_k(&self) -> usize {
        self.k.div_ceil(2)
    }

    /// Triangle column the sequence is read from.
    pub fn column(&self) -> u32 {
        (self.n - self.k) as u32
    }

    pub fn is_default_start(&self) -> bool {
        self.start_row == Self::default_start_row(self.k, self.n)
    }
}

/// `a_0..a_n`, the signed coefficients of `M^n_0..M^n_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSequence {
    coeffs: Vec<i128>,
}

impl CoefficientSequence {
    pub fn new(coeffs: Vec<i128>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Domain(
                "a coefficient sequence needs at least two entries".into(),
            ));
        }
        if coeffs.len() - 1 > MAX_SHARES {
            return Err(Error::InvalidParams(format!(
                "sequence implies n = {}, above {MAX_SHARES}",
                coeffs.len() - 1
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `(-1)^j a_j`: positive goes to C0, negative to C1.
    pub fn signed(&self, j: usize) -> i128 {
        if j.is_multiple_of(2) {
            self.coeffs[j]
        } else {
            -self.coeffs[j]
        }
    }
}

impl fmt::Display for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Multiset form of a codebook: copies of each `M^n_j` on either side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodebookSpec {
    n: usize,
    c0: BTreeMap<usize, i128>,
    c1: BTreeMap<usize, i128>,
    m: i128,
}

impl CodebookSpec {
    /// Builds a spec from explicit block counts. Counts must be positive, a
    /// weight may appear on one side only, and both sides must have the same
    /// number of columns.
    pub fn from_counts(
        n: usize,
        c0: BTreeMap<usize, i128>,
        c1: BTreeMap<usize, i128>,
    ) -> Result<Self> {
        if n == 0 || n > MAX_SHARES {
            return Err(Error::InvalidParams(format!(
                "share count must be in 1..={MAX_SHARES}, got {n}"
            )));
        }
        for (side, counts) in [("C0", &c0), ("C1", &c1)] {
            for (&j, &count) in counts {
                if j > n {
                    return Err(Error::Codebook(format!(
                        "{side} weight {j} exceeds n = {n}"
                    )));
                }
                if count <= 0 {
                    return Err(Error::Codebook(format!(
                        "{side} weight {j} has non-positive count {count}"
                    )));
                }
            }
        }
        if let Some(j) = c0.keys().find(|j| c1.contains_key(j)) {
            return Err(Error::Codebook(format!(
                "weight {j} appears in both C0 and C1"
            )));
        }
        let cols0 = side_columns(n, &c0)?;
        let cols1 = side_columns(n, &c1)?;
        if cols0 != cols1 {
            return Err(Error::SideImbalance {
                c0: cols0,
                c1: cols1,
            });
        }
        if cols0 == 0 {
            return Err(Error::Codebook("codebook has no columns".into()));
        }
        Ok(Self {
            n,
            c0,
            c1,
            m: cols0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> i128 {
        self.m
    }

    pub fn c0_counts(&self) -> &BTreeMap<usize, i128> {
        &self.c0
    }

    pub fn c1_counts(&self) -> &BTreeMap<usize, i128> {
        &self.c1
    }

    /// `(weight, side, count)` ordered by weight.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, u8, i128)> + '_ {
        let mut all: Vec<_> = self
            .c0
            .iter()
            .map(|(&j, &c)| (j, 0u8, c))
            .chain(self.c1.iter().map(|(&j, &c)| (j, 1u8, c)))
            .collect();
        all.sort_unstable();
        all.into_iter()
    }

    /// Bracket notation, e.g. `[2M^4_0, M^4_3]`.
    pub fn side_notation(&self, side: u8) -> String {
        let counts = if side == 0 { &self.c0 } else { &self.c1 };
        let parts: Vec<String> = counts
            .iter()
            .map(|(j, c)| {
                if *c == 1 {
                    format!("M^{}_{j}", self.n)
                } else {
                    format!("{c}M^{}_{j}", self.n)
                }
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }

    /// Codebook text format: `k n start_row m`, then `side j count` per
    /// block, ordered by weight.
    pub fn to_text(&self, params: &SchemeParams) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            params.k, params.n, params.start_row, self.m
        );
        for (j, side, count) in self.blocks() {
            out.push_str(&format!("{side} {j} {count}\n"));
        }
        out
    }

    /// Parses the codebook text format. Blank lines and lines starting with
    /// `#` are skipped.
    pub fn parse_text(text: &str) -> Result<(SchemeParams, CodebookSpec)> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Codebook("missing header line".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Codebook(format!(
                "header needs `k n start_row m`, got {header:?}"
            )));
        }
        let k: usize = parse_field(fields[0], "k")?;
        let n: usize = parse_field(fields[1], "n")?;
        let start_row: i64 = parse_field(fields[2], "start_row")?;
        let m: i128 = parse_field(fields[3], "m")?;
        let params = SchemeParams::with_start_row(k, n, start_row)?;

        let mut c0 = BTreeMap::new();
        let mut c1 = BTreeMap::new();
        let mut last_j = None;
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Codebook(format!(
                    "block line needs `side j count`, got {line:?}"
                )));
            }
            let side: u8 = parse_field(f[0], "side")?;
            let j: usize = parse_field(f[1], "j")?;
            let count: i128 = parse_field(f[2], "count")?;
            if last_j.is_some_and(|prev| j <= prev) {
                return Err(Error::Codebook(format!(
                    "block lines must be strictly ordered by weight (at j = {j})"
                )));
            }
            last_j = Some(j);
            match side {
                0 => c0.insert(j, count),
                1 => c1.insert(j, count),
                _ => return Err(Error::Codebook(format!("side must be 0 or 1, got {side}"))),
            };
        }
        let spec = CodebookSpec::from_counts(n, c0, c1)?;
        if spec.m != m {
            return Err(Error::Codebook(format!(
                "header says m = {m} but blocks give {}",
                spec.m
            )));
        }
        Ok((params, spec))
    }
}

fn parse_field<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Codebook(format!("cannot parse {what} from {s:?}")))
}

fn side_columns(n: usize, counts: &BTreeMap<usize, i128>) -> Result<i128> {
    counts.iter().try_fold(0i128, |acc, (&j, &count)| {
        let block = gbinom(n as i64, j as u32)?;
        count
            .checked_mul(block)
            .and_then(|c| acc.checked_add(c))
            .ok_or(Error::Overflow("codebook column count"))
    })
}

/// An `rows x m` binary matrix stored column-wise; bit `i` of a column is
/// row `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    columns: Vec<u64>,
}

impl BinaryMatrix {
    pub fn from_columns(rows: usize, columns: Vec<u64>) -> Result<Self> {
        if rows == 0 || rows > MAX_SHARES {
            return Err(Error::InvalidParams(format!(
                "row count must be in 1..={MAX_SHARES}, got {rows}"
            )));
        }
        if rows < 64 {
            if let Some(c) = columns.iter().find(|&&c| c >> rows != 0) {
                return Err(Error::Domain(format!(
                    "column {c:#b} has bits beyond row {rows}"
                )));
            }
        }
        Ok(Self { rows, columns })
    }

    /// Builds from row-major 0/1 rows.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Domain("ragged matrix rows".into()));
        }
        let columns = (0..width)
            .map(|c| {
                rows.iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, r)| acc | (u64::from(r[c] != 0) << i))
            })
            .collect();
        Self::from_columns(rows.len(), columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    /// Entry at 1-based `row`, 0-based `col`.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        ((self.columns[col] >> (row - 1)) & 1) as u8
    }

    pub fn row_bits(&self, row: usize) -> Vec<u8> {
        (0..self.cols()).map(|c| self.get(row, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (1..=self.rows).map(|r| self.row_bits(r)).collect()
    }

    /// Columns whose restriction to the rows in `mask` ORs to zero.
    pub fn zero_or_count(&self, mask: u64) -> usize {
        self.columns.iter().filter(|&&c| c & mask == 0).count()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 1..=self.rows {
            let row: Vec<String> = self.row_bits(r).iter().map(u8::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisMatrixPair {
    pub c0: BinaryMatrix,
    pub c1: BinaryMatrix,
}

impl BasisMatrixPair {
    pub fn new(c0: BinaryMatrix, c1: BinaryMatrix) -> Result<Self> {
        if c0.rows() != c1.rows() {
            return Err(Error::Domain(format!(
                "C0 has {} rows but C1 has {}",
                c0.rows(),
                c1.rows()
            )));
        }
        if c0.cols() != c1.cols() {
            return Err(Error::SideImbalance {
                c0: c0.cols() as i128,
                c1: c1.cols() as i128,
            });
        }
        Ok(Self { c0, c1 })
    }

    pub fn n(&self) -> usize {
        self.c0.rows()
    }

    pub fn m(&self) -> usize {
        self.c0.cols()
    }
}

/// Exact contrast `numerator / denominator`, kept unreduced so it prints
/// the way tables usually show it (`6/14`, not `3/7`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Contrast {
    pub numerator: i128,
    pub denominator: i128,
}

impl Contrast {
    pub fn new(numerator: i128, denominator: i128) -> Self {
        assert!(denominator > 0, "contrast denominator must be positive");
        Self {
            numerator,
            denominator,
        }
    }

    pub fn ratio(&self) -> Ratio<i128> {
        Ratio::new(self.numerator, self.denominator)
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl fmt::Display for Contrast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// `a_j = binom(start_row - j, n - k)` for `j = 0..=n`.
pub fn build_sequence(params: &SchemeParams) -> Result<CoefficientSequence> {
    let col = params.column();
    let coeffs = (0..=params.n as i64)
        .map(|j| gbinom(params.start_row - j, col))
        .collect::<Result<Vec<_>>>()?;
    CoefficientSequence::new(coeffs)
}

/// Applies the sign rule to a coefficient sequence.
pub fn assign_sides(seq: &CoefficientSequence) -> Result<CodebookSpec> {
    let mut c0 = BTreeMap::new();
    let mut c1 = BTreeMap::new();
    for j in 0..=seq.n() {
        let v = seq.signed(j);
        if v > 0 {
            c0.insert(j, v);
        } else if v < 0 {
            c1.insert(j, v.checked_neg().ok_or(Error::Overflow("sign rule"))?);
        }
    }
    CodebookSpec::from_counts(seq.n(), c0, c1)
}

/// All weight-`j` columns over `n` rows, in lexicographic order of their
/// row-index sets (`{1,2} < {1,3} < .. < {2,3} < ..`).
pub fn weight_columns(n: usize, j: usize) -> Vec<u64> {
    assert!(j <= n && n <= MAX_SHARES);
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        out.push(idx.iter().fold(0u64, |acc, &i| acc | (1 << i)));
        // Rightmost index that can still move.
        let Some(pos) = (0..j).rev().find(|&p| idx[p] < n - j + p) else {
            break;
        };
        idx[pos] += 1;
        for p in pos + 1..j {
            idx[p] = idx[p - 1] + 1;
        }
    }
    out
}

/// Expands a spec with the default cell cap.
pub fn expand(spec: &CodebookSpec) -> Result<BasisMatrixPair> {
    expand_with_cap(spec, DEFAULT_EXPAND_CAP)
}

/// Materializes both basis matrices. Blocks appear by ascending weight; a
/// block with count `c` is the full `M^n_j` repeated `c` times.
pub fn expand_with_cap(spec: &CodebookSpec, cap: u128) -> Result<BasisMatrixPair> {
    let n = spec.n();
    let cells = (spec.m() as u128).saturating_mul(n as u128);
    if cells > cap {
        return Err(Error::TooLarge { cells, cap });
    }
    let build = |counts: &BTreeMap<usize, i128>| {
        let mut cols = Vec::with_capacity(spec.m() as usize);
        for (&j, &count) in counts {
            let block = weight_columns(n, j);
            for _ in 0..count {
                cols.extend_from_slice(&block);
            }
        }
        BinaryMatrix::from_columns(n, cols)
    };
    BasisMatrixPair::new(build(spec.c0_counts())?, build(spec.c1_counts())?)
}

/// Closed-form column count: half the total of `C(n, j) |a_j|`.
pub fn column_count(params: &SchemeParams) -> Result<i128> {
    let n = params.n as i64;
    let col = params.column();
    let mut total: i128 = 0;
    for i in 0..=n {
        let weight = gbinom(n, (n - i) as u32)?;
        let coeff = gbinom(params.start_row - n + i, col)?;
        total = weight
            .checked_mul(coeff.abs())
            .and_then(|t| total.checked_add(t))
            .ok_or(Error::Overflow("closed-form column count"))?;
    }
    debug_assert_eq!(total % 2, 0);
    Ok(total / 2)
}

/// Contrast from stacking `q` shares: `binom(q - n + start_row, q - k) / m`.
/// With the default start row this is `binom(q - ceil(k/2), q - k) / m`.
pub fn theoretical_contrast(params: &SchemeParams, q: usize) -> Result<Contrast> {
    if q < params.k || q > params.n {
        return Err(Error::Domain(format!(
            "q = {q} outside {}..={}",
            params.k, params.n
        )));
    }
    let numerator = predicted_diff(params, q)?;
    Ok(Contrast::new(numerator, column_count(params)?))
}

/// Predicted white-minus-black zero-column count for any `q`-subset with
/// `q >= k`.
pub(crate) fn predicted_diff(params: &SchemeParams, q: usize) -> Result<i128> {
    gbinom(
        q as i64 - params.n as i64 + params.start_row,
        (q - params.k) as u32,
    )
}

/// A constructed scheme: parameters, their sequence and the split codebook.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    pub params: SchemeParams,
    pub sequence: CoefficientSequence,
    pub spec: CodebookSpec,
}

impl Scheme {
    pub fn new(params: SchemeParams) -> Result<Self> {
        let sequence = build_sequence(&params)?;
        let spec = assign_sides(&sequence)?;
        Ok(Self {
            params,
            sequence,
            spec,
        })
    }

    pub fn expand(&self) -> Result<BasisMatrixPair> {
        expand(&self.spec)
    }

    pub fn to_text(&self) -> String {
        self.spec.to_text(&self.params)
    }
}
