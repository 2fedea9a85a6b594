//! Generalized Pascal's triangle.
//!
//! Entry `(row, col)` is the coefficient of `x^col` in `(1 + x)^row`, for any
//! integer `row`. Column `col` is a degree-`col` polynomial in `row`:
//!
//! ```text
//! binom(row, col) = (row)(row - 1)...(row - col + 1) / col!
//! ```
//!
//! Everything here is exact `i128` arithmetic; overflow is reported, never
//! wrapped.

use std::fmt::Write as _;

use crate::{Error, Result};

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Generalized binomial coefficient `binom(row, col)` for any integer `row`.
///
/// The falling product is accumulated one factor at a time. After step `i`
/// the accumulator equals `binom(row, i)`, so each division is exact; the
/// common factor with the divisor is cancelled first to keep intermediates
/// small.
pub fn gbinom(row: i64, col: u32) -> Result<i128> {
    if col == 0 {
        return Ok(1);
    }
    if row >= 0 && (row as u64) < col as u64 {
        return Ok(0);
    }
    let overflow = || Error::BinomialOverflow { row, col };
    // Symmetry keeps the loop short for ordinary rows.
    let steps = if row >= 0 {
        (col as i64).min(row - col as i64) as i128
    } else {
        col as i128
    };
    let top = row as i128;
    let mut acc: i128 = 1;
    for i in 1..=steps {
        let factor = top + 1 - i;
        let g = gcd(acc, i);
        let (acc_red, div) = (acc / g, i / g);
        debug_assert_eq!(factor % div, 0);
        acc = acc_red.checked_mul(factor / div).ok_or_else(overflow)?;
    }
    Ok(acc)
}

/// A rectangular window of the triangle: rows `row_lo..=row_hi`, columns
/// `0..=col_hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleSlice {
    pub row_lo: i64,
    pub col_hi: u32,
    pub rows: Vec<Vec<i128>>,
}

pub fn triangle_slice(row_lo: i64, row_hi: i64, col_hi: u32) -> Result<TriangleSlice> {
    if row_lo > row_hi {
        return Err(Error::Domain(format!("empty row range {row_lo}..{row_hi}")));
    }
    let rows = (row_lo..=row_hi)
        .map(|row| (0..=col_hi).map(|col| gbinom(row, col)).collect())
        .collect::<Result<_>>()?;
    Ok(TriangleSlice {
        row_lo,
        col_hi,
        rows,
    })
}

impl TriangleSlice {
    pub fn row(&self, row: i64) -> Option<&[i128]> {
        let idx = usize::try_from(row.checked_sub(self.row_lo)?).ok()?;
        self.rows.get(idx).map(Vec::as_slice)
    }

    pub fn row_indices(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.rows.len() as i64).map(move |i| self.row_lo + i)
    }

    /// Right-aligned text grid with an `N\M` header row.
    pub fn render_text(&self) -> String {
        let header = "N\\M".to_string();
        let labels: Vec<String> = self.row_indices().map(|r| r.to_string()).collect();
        let label_width = labels
            .iter()
            .map(String::len)
            .chain([header.len()])
            .max()
            .unwrap_or(0);
        let widths: Vec<usize> = (0..=self.col_hi as usize)
            .map(|c| {
                self.rows
                    .iter()
                    .map(|row| row[c].to_string().len())
                    .chain([c.to_string().len()])
                    .max()
                    .unwrap_or(1)
            })
            .collect();

        let mut out = String::new();
        let _ = write!(out, "{header:>label_width$}");
        for (c, w) in widths.iter().enumerate() {
            let _ = write!(out, " {c:>w$}");
        }
        out.push('\n');
        for (label, row) in labels.iter().zip(&self.rows) {
            let _ = write!(out, "{label:>label_width$}");
            for (v, w) in row.iter().zip(&widths) {
                let _ = write!(out, " {v:>w$}");
            }
            out.push('\n');
        }
        out
    }

    /// CSV with a `row,0,1,..` header.
    pub fn render_csv(&self) -> String {
        let mut out = String::from("row");
        for c in 0..=self.col_hi {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
        for (label, row) in self.row_indices().zip(&self.rows) {
            let _ = write!(out, "{label}");
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Product formula evaluated with rationals, one factor per step.
    fn product_oracle(row: i64, col: u32) -> i128 {
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        for i in 1..=col as i128 {
            num *= row as i128 + 1 - i;
            den *= i;
            let g = gcd(num, den).max(1);
            num /= g;
            den /= g;
        }
        assert_eq!(den, 1);
        num
    }

    fn factorial_binomial(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let fact = |x: u64| (1..=x as u128).product::<u128>();
        fact(n) / (fact(k) * fact(n - k))
    }

    #[test]
    fn spot_values() {
        assert_eq!(gbinom(-2, 3).unwrap(), -4);
        assert_eq!(gbinom(5, 2).unwrap(), 10);
        assert_eq!(gbinom(7, 0).unwrap(), 1);
        assert_eq!(gbinom(3, 5).unwrap(), 0);
        assert_eq!(gbinom(-8, 10).unwrap(), 19448);
        assert_eq!(gbinom(0, 0).unwrap(), 1);
        assert_eq!(gbinom(-1, 7).unwrap(), -1);
    }

    #[test]
    fn slices() {
        let s = triangle_slice(-1, -1, 4).unwrap();
        assert_eq!(s.rows, vec![vec![1, -1, 1, -1, 1]]);
        let s = triangle_slice(0, 0, 3).unwrap();
        assert_eq!(s.rows, vec![vec![1, 0, 0, 0]]);
        let s = triangle_slice(-3, -3, 5).unwrap();
        assert_eq!(s.rows, vec![vec![1, -3, 6, -10, 15, -21]]);
        assert_eq!(s.row(-3), Some(&[1, -3, 6, -10, 15, -21][..]));
        assert_eq!(s.row(-2), None);
        assert!(triangle_slice(2, 1, 3).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        let err = gbinom(-200, 120).unwrap_err();
        assert!(matches!(
            err,
            Error::BinomialOverflow {
                row: -200,
                col: 120
            }
        ));
        // Largest central binomial that fits.
        assert!(gbinom(130, 65).unwrap() > 0);
    }

    #[test]
    fn recurrence_on_grid() {
        for row in -20..=20 {
            for col in 1..=20 {
                assert_eq!(
                    gbinom(row, col).unwrap(),
                    gbinom(row - 1, col - 1).unwrap() + gbinom(row - 1, col).unwrap(),
                    "row {row} col {col}"
                );
            }
        }
    }

    #[test]
    fn text_rendering_is_right_aligned() {
        let text = triangle_slice(-2, 1, 3).unwrap().render_text();
        let expected = "\
N\\M 0  1 2  3
 -2 1 -2 3 -4
 -1 1 -1 1 -1
  0 1  0 0  0
  1 1  1 0  0
";
        assert_eq!(text, expected);
        let csv = triangle_slice(-1, 0, 2).unwrap().render_csv();
        assert_eq!(csv, "row,0,1,2\n-1,1,-1,1\n0,1,0,0\n");
    }

    proptest! {
        #[test]
        fn matches_product_formula(row in -40i64..40, col in 0u32..16) {
            prop_assert_eq!(gbinom(row, col).unwrap(), product_oracle(row, col));
        }

        #[test]
        fn nonnegative_rows_match_factorials(n in 0u64..30, k in 0u64..30) {
            prop_assert_eq!(gbinom(n as i64, k as u32).unwrap(), factorial_binomial(n, k) as i128);
        }

        #[test]
        fn negative_rows_reflect(row in -30i64..0, col in 0u32..20) {
            let sign = if col % 2 == 0 { 1 } else { -1 };
            let reflected = gbinom(-row + col as i64 - 1, col).unwrap();
            prop_assert_eq!(gbinom(row, col).unwrap(), sign * reflected);
        }
    }
}
