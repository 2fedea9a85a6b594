//! Reproduction of the published contrast, column-count and (3,8)
//! comparison tables. Every cell is computed; published constants are only
//! used for the side-by-side rows and for `--check`.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};

use pvss_core::codebook::column_count;
use pvss_core::validator::reference;
use pvss_core::{theoretical_contrast, Contrast, Result, SchemeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// Contrast at q = k next to the linear-programming optimum.
    Contrast,
    /// Column count m for every 2 <= k <= n.
    M,
    /// (3,8) contrast profile against the contrast-optimal scheme.
    Hks38,
}

#[derive(Debug, Clone)]
pub struct TableReport {
    pub text: String,
    pub json: Value,
    /// Computed values that differ from a published constant.
    pub mismatches: Vec<String>,
}

fn grid(title: &str, header: &str, cols: &[String], rows: &[(String, Vec<String>)]) -> String {
    let mut widths: Vec<usize> = cols.iter().map(String::len).collect();
    for (_, cells) in rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.len());
        }
    }
    let label_w = rows
        .iter()
        .map(|(l, _)| l.len())
        .chain([header.len()])
        .max()
        .unwrap_or(0);
    let mut out = format!("{title}\n{header:<label_w$}");
    for (c, w) in cols.iter().zip(&widths) {
        let _ = write!(out, "  {c:>w$}");
    }
    out.push('\n');
    for (label, cells) in rows {
        let _ = write!(out, "{label:<label_w$}");
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
    }
    out
}

fn contrast_json(c: Option<Contrast>) -> Value {
    match c {
        Some(c) => json!({"num": c.numerator, "den": c.denominator}),
        None => Value::Null,
    }
}

fn contrast_table(n_max: usize, mismatches: &mut Vec<String>) -> Result<(String, Value)> {
    let ns: Vec<usize> = (2..=n_max).collect();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for k in 2..=4usize.min(n_max) {
        let mut ours_row = Vec::new();
        let mut opt_row = Vec::new();
        for &n in &ns {
            if n < k {
                ours_row.push(String::new());
                opt_row.push(String::new());
                continue;
            }
            let params = SchemeParams::new(k, n)?;
            let ours = theoretical_contrast(&params, k)?;
            let published =
                reference::published_contrast_at_k(k, n).map(|(a, b)| Contrast::new(a, b));
            let optimal = reference::optimal_contrast_at_k(k, n).map(|(a, b)| Contrast::new(a, b));
            if let Some(p) = published {
                if p != ours {
                    mismatches.push(format!(
                        "contrast ({k},{n}): computed {ours}, published {p}"
                    ));
                }
            }
            ours_row.push(ours.to_string());
            opt_row.push(optimal.map(|c| c.to_string()).unwrap_or_default());
            entries.push(json!({
                "k": k, "n": n,
                "ours": contrast_json(Some(ours)),
                "published": contrast_json(published),
                "optimal": contrast_json(optimal),
            }));
        }
        rows.push((k.to_string(), ours_row));
        rows.push(("OPT".to_string(), opt_row));
    }
    let cols: Vec<String> = ns.iter().map(usize::to_string).collect();
    let text = grid("contrast at q = k", "k\\n", &cols, &rows);
    Ok((text, Value::Array(entries)))
}

fn m_table(n_max: usize, mismatches: &mut Vec<String>) -> Result<(String, Value)> {
    let ns: Vec<usize> = (2..=n_max).collect();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for k in 2..=n_max {
        let mut row = Vec::new();
        for &n in &ns {
            if n < k {
                row.push(String::new());
                continue;
            }
            let m = column_count(&SchemeParams::new(k, n)?)?;
            let published = reference::published_column_count(k, n);
            if let Some(p) = published {
                if p != m {
                    mismatches.push(format!("m ({k},{n}): computed {m}, published {p}"));
                }
            }
            row.push(m.to_string());
            entries.push(json!({"k": k, "n": n, "m": m, "published": published}));
        }
        rows.push((k.to_string(), row));
    }
    let cols: Vec<String> = ns.iter().map(usize::to_string).collect();
    let text = grid("column count m", "k\\n", &cols, &rows);
    Ok((text, Value::Array(entries)))
}

fn hks38_table(mismatches: &mut Vec<String>) -> Result<(String, Value)> {
    let params = SchemeParams::new(3, 8)?;
    let mut qs = Vec::new();
    let mut ours_row = Vec::new();
    let mut mark_row = Vec::new();
    let mut ref_row = Vec::new();
    let mut entries = Vec::new();
    for (&(q, rn, rd), &(pq, pn, pd)) in reference::OPTIMAL_PROFILE_3_8
        .iter()
        .zip(reference::PUBLISHED_PROFILE_3_8)
    {
        debug_assert_eq!(q, pq);
        let ours = theoretical_contrast(&params, q)?;
        let theirs = Contrast::new(rn, rd);
        let published = Contrast::new(pn, pd);
        if ours != published {
            mismatches.push(format!(
                "(3,8) q={q}: computed {ours}, published {published}"
            ));
        }
        qs.push(q.to_string());
        ours_row.push(ours.to_string());
        mark_row.push(if ours.ratio() > theirs.ratio() {
            "v".to_string()
        } else {
            String::new()
        });
        ref_row.push(theirs.to_string());
        entries.push(json!({
            "q": q,
            "ours": contrast_json(Some(ours)),
            "reference": contrast_json(Some(theirs)),
            "ours_better": ours.ratio() > theirs.ratio(),
        }));
    }
    let rows = vec![
        ("ours".to_string(), ours_row),
        (String::new(), mark_row),
        ("HKS".to_string(), ref_row),
    ];
    let text = grid("(3,8) contrast by stacked shares", "q", &qs, &rows);
    Ok((text, Value::Array(entries)))
}

/// Builds the requested tables for `n` up to `n_max` (the (3,8) table is
/// fixed). Published constants only exist up to `n = 10`.
pub fn reproduce_tables(kinds: &[TableKind], n_max: usize) -> Result<TableReport> {
    if !(2..=64).contains(&n_max) {
        return Err(pvss_core::Error::InvalidParams(format!(
            "n-max must be in 2..=64, got {n_max}"
        )));
    }
    let mut mismatches = Vec::new();
    let mut text = String::new();
    let mut json = serde_json::Map::new();
    for (i, kind) in kinds.iter().enumerate() {
        let (t, v) = match kind {
            TableKind::Contrast => contrast_table(n_max, &mut mismatches)?,
            TableKind::M => m_table(n_max, &mut mismatches)?,
            TableKind::Hks38 => hks38_table(&mut mismatches)?,
        };
        if i > 0 {
            text.push('\n');
        }
        text.push_str(&t);
        let key = match kind {
            TableKind::Contrast => "contrast",
            TableKind::M => "m",
            TableKind::Hks38 => "hks38",
        };
        json.insert(key.to_string(), v);
    }
    json.insert("mismatches".to_string(), json!(mismatches));
    Ok(TableReport {
        text,
        json: Value::Object(json),
        mismatches,
    })
}
