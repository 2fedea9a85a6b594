//! Exhaustive checks of the threshold conditions.
//!
//! For a `q`-subset `Q` of shares, a column of C0 or C1 stays white after
//! stacking exactly when it has no one-entry in the rows of `Q`. The
//! quantity of interest is the white-minus-black count of such columns;
//! dividing by `m` gives `p_w(Q) - p_b(Q)`.

pub mod reference;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::codebook::{
    predicted_diff, theoretical_contrast, BasisMatrixPair, Contrast, SchemeParams,
};
use crate::pascal::gbinom;
use crate::{Error, Result};

/// Default cap on `n` for subset enumeration (`2^n - 1` subsets).
pub const DEFAULT_MAX_N: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetDiff {
    pub q: usize,
    /// 1-based row indices, ascending.
    pub subset: Vec<usize>,
    pub zero_cols_c0: usize,
    pub zero_cols_c1: usize,
    pub diff: i128,
}

fn subset_mask(n: usize, subset: &[usize]) -> Result<u64> {
    if subset.is_empty() {
        return Err(Error::Domain("subset of shares must be nonempty".into()));
    }
    subset.iter().try_fold(0u64, |mask, &i| {
        if i == 0 || i > n {
            return Err(Error::Domain(format!("share index {i} outside 1..={n}")));
        }
        Ok(mask | 1 << (i - 1))
    })
}

/// Stacks the rows in `subset` (1-based) and counts all-white columns in
/// each matrix.
pub fn subset_diff(pair: &BasisMatrixPair, subset: &[usize]) -> Result<SubsetDiff> {
    let mask = subset_mask(pair.n(), subset)?;
    let zero_cols_c0 = pair.c0.zero_or_count(mask);
    let zero_cols_c1 = pair.c1.zero_or_count(mask);
    let mut rows: Vec<usize> = subset.to_vec();
    rows.sort_unstable();
    rows.dedup();
    Ok(SubsetDiff {
        q: rows.len(),
        subset: rows,
        zero_cols_c0,
        zero_cols_c1,
        diff: zero_cols_c0 as i128 - zero_cols_c1 as i128,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub max_n: usize,
    /// Start row used for the predicted contrast; `None` means the default
    /// symmetric start.
    pub start_row: Option<i64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_MAX_N,
            start_row: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub params: SchemeParams,
    pub m: usize,
    /// Every `q < k` yields diff 0.
    pub security_ok: bool,
    /// Every `q >= k` yields a positive diff for all subsets.
    pub contrast_ok: bool,
    /// The diff is the same for all `q`-subsets and strictly increases in
    /// `q` over `k..=n`.
    pub progressive_ok: bool,
    /// Every `q >= k` yields exactly the predicted diff.
    pub predicted_match_ok: bool,
    pub per_q_diff: BTreeMap<usize, BTreeSet<i128>>,
    pub predicted: BTreeMap<usize, i128>,
    /// Worst-case (smallest) contrast over `q`-subsets, for `q >= k`.
    pub contrast_per_q: BTreeMap<usize, Contrast>,
}

impl ValidationReport {
    /// Security, progressive contrast and the predicted diff all hold.
    pub fn passed(&self) -> bool {
        self.security_ok && self.progressive_ok && self.predicted_match_ok
    }

    /// The threshold conditions alone: secure below `k`, positive contrast
    /// from `k` on, at the predicted level. Monotonicity is not required.
    pub fn is_valid(&self) -> bool {
        self.security_ok && self.contrast_ok && self.predicted_match_ok
    }

    /// The observed diff if all `q`-subsets agree.
    pub fn uniform_diff(&self, q: usize) -> Option<i128> {
        let set = self.per_q_diff.get(&q)?;
        (set.len() == 1).then(|| *set.first().unwrap())
    }

    pub fn to_json(&self) -> Value {
        let per_q: Vec<Value> =
            self.per_q_diff
                .iter()
                .map(|(&q, diffs)| {
                    let alpha =
                        self.contrast_per_q.get(&q).copied().unwrap_or_else(|| {
                            Contrast::new(*diffs.first().unwrap(), self.m as i128)
                        });
                    json!({
                        "q": q,
                        "diff": self.uniform_diff(q),
                        "diffs": diffs.iter().collect::<Vec<_>>(),
                        "alpha_num": alpha.numerator,
                        "alpha_den": alpha.denominator,
                    })
                })
                .collect();
        json!({
            "params": {
                "k": self.params.k,
                "n": self.params.n,
                "start_row": self.params.start_row,
                "m": self.m,
            },
            "security_ok": self.security_ok,
            "contrast_ok": self.contrast_ok,
            "progressive_ok": self.progressive_ok,
            "predicted_match_ok": self.predicted_match_ok,
            "per_q": per_q,
        })
    }
}

pub fn verify_scheme(pair: &BasisMatrixPair, k: usize) -> Result<ValidationReport> {
    verify_scheme_with(pair, k, &VerifyOptions::default())
}

/// Enumerates all `2^n - 1` nonempty share subsets. The report does not
/// depend on how the enumeration is scheduled.
pub fn verify_scheme_with(
    pair: &BasisMatrixPair,
    k: usize,
    opts: &VerifyOptions,
) -> Result<ValidationReport> {
    let n = pair.n();
    if n > opts.max_n {
        return Err(Error::EnumerationCap { n, cap: opts.max_n });
    }
    let params = match opts.start_row {
        Some(row) => SchemeParams::with_start_row(k, n, row)?,
        None => SchemeParams::new(k, n)?,
    };
    let m = pair.m();

    // Net white-minus-black multiplicity of each distinct column pattern.
    let mut net: HashMap<u64, i128> = HashMap::new();
    for &c in pair.c0.columns() {
        *net.entry(c).or_default() += 1;
    }
    for &c in pair.c1.columns() {
        *net.entry(c).or_default() -= 1;
    }
    let mut weights: Vec<(u64, i128)> = net.into_iter().filter(|&(_, w)| w != 0).collect();
    weights.sort_unstable();

    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let per_q: Vec<BTreeSet<i128>> = (1..=full)
        .into_par_iter()
        .fold(
            || vec![BTreeSet::new(); n + 1],
            |mut acc, mask| {
                let diff: i128 = weights
                    .iter()
                    .filter(|&&(pattern, _)| pattern & mask == 0)
                    .map(|&(_, w)| w)
                    .sum();
                acc[mask.count_ones() as usize].insert(diff);
                acc
            },
        )
        .reduce(
            || vec![BTreeSet::new(); n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.extend(y);
                }
                a
            },
        );
    let per_q_diff: BTreeMap<usize, BTreeSet<i128>> =
        per_q.into_iter().enumerate().skip(1).collect();

    let security_ok = (1..k).all(|q| per_q_diff[&q].iter().all(|&d| d == 0));
    let contrast_ok = (k..=n).all(|q| per_q_diff[&q].iter().all(|&d| d > 0));

    let mut predicted = BTreeMap::new();
    for q in k..=n {
        predicted.insert(q, predicted_diff(&params, q)?);
    }
    let predicted_match_ok = (k..=n).all(|q| {
        let set = &per_q_diff[&q];
        set.len() == 1 && set.contains(&predicted[&q])
    });

    let uniform: Option<Vec<i128>> = (k..=n)
        .map(|q| {
            let set = &per_q_diff[&q];
            (set.len() == 1).then(|| *set.first().unwrap())
        })
        .collect();
    let progressive_ok = uniform
        .is_some_and(|d| d.first().is_some_and(|&d0| d0 > 0) && d.windows(2).all(|w| w[0] < w[1]));

    let contrast_per_q = if m == 0 {
        BTreeMap::new()
    } else {
        (k..=n)
            .map(|q| {
                let worst = *per_q_diff[&q].first().unwrap();
                (q, Contrast::new(worst, m as i128))
            })
            .collect()
    };

    Ok(ValidationReport {
        params,
        m,
        security_ok,
        contrast_ok,
        progressive_ok,
        predicted_match_ok,
        per_q_diff,
        predicted,
        contrast_per_q,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub s: u32,
    pub t: u32,
    pub r: i64,
    pub lhs: i128,
    pub rhs: i128,
    pub ok: bool,
}

/// Compares the alternating sum
/// `sum_{i=0..t} (-1)^(t-i) C(t, t-i) C(s+r+i, s)` with its closed form:
/// zero when `t > s`, otherwise `C(s+r, s-t)`.
pub fn lemma_identity_check(s: u32, t: u32, r: i64) -> Result<LemmaCheck> {
    let mut lhs: i128 = 0;
    for i in 0..=t {
        let sign: i128 = if (t - i).is_multiple_of(2) { 1 } else { -1 };
        let term = gbinom(t as i64, t - i)?
            .checked_mul(gbinom(s as i64 + r + i as i64, s)?)
            .ok_or(Error::Overflow("identity summation"))?;
        lhs = lhs
            .checked_add(sign * term)
            .ok_or(Error::Overflow("identity summation"))?;
    }
    let rhs = if t > s {
        0
    } else {
        gbinom(s as i64 + r, s - t)?
    };
    Ok(LemmaCheck {
        s,
        t,
        r,
        lhs,
        rhs,
        ok: lhs == rhs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub q: usize,
    pub ours: Contrast,
    pub reference: Contrast,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceComparison {
    pub k: usize,
    pub n: usize,
    /// Computed contrast at `q = k`.
    pub ours: Contrast,
    /// Published contrast at `q = k` for this construction.
    pub published: Option<Contrast>,
    /// Linear-programming optimum at `q = k`.
    pub optimal: Option<Contrast>,
    /// Full `q` profile against the optimal scheme, where published.
    pub profile: Option<Vec<ProfileRow>>,
}

impl ReferenceComparison {
    pub fn meets_optimum(&self) -> Option<bool> {
        self.optimal.map(|opt| opt.ratio() == self.ours.ratio())
    }
}

/// Our contrast next to the embedded reference constants, or `None` when
/// there is no reference data for `(k, n)`.
pub fn reference_compare(params: &SchemeParams) -> Result<Option<ReferenceComparison>> {
    let (k, n) = (params.k, params.n);
    let published = reference::published_contrast_at_k(k, n).map(|(a, b)| Contrast::new(a, b));
    let optimal = reference::optimal_contrast_at_k(k, n).map(|(a, b)| Contrast::new(a, b));
    let has_profile = (k, n) == (3, 8);
    if published.is_none() && optimal.is_none() && !has_profile {
        return Ok(None);
    }
    let profile = if has_profile {
        let rows = reference::OPTIMAL_PROFILE_3_8
            .iter()
            .map(|&(q, num, den)| {
                Ok(ProfileRow {
                    q,
                    ours: theoretical_contrast(params, q)?,
                    reference: Contrast::new(num, den),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Some(rows)
    } else {
        None
    };
    Ok(Some(ReferenceComparison {
        k,
        n,
        ours: theoretical_contrast(params, k)?,
        published,
        optimal,
        profile,
    }))
}
