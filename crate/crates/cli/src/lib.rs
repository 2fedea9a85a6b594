//! `pvss` command-line front end.
//!
//! [`run`] takes the argument list and two output streams and returns the
//! process exit code: 0 on success, 1 when a check fails, 2 for usage or
//! input errors.

pub mod tables;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pvss_core::imaging::pbm::{read_pbm_file, write_pbm_file, PbmFormat};
use pvss_core::imaging::DEFAULT_SEED;
use pvss_core::validator::{verify_scheme_with, VerifyOptions, DEFAULT_MAX_N};
use pvss_core::{
    empirical_contrast, encode, lemma_identity_check, reference_compare, stack,
    theoretical_contrast, triangle_slice, BinaryImage, Scheme, SchemeParams,
};

pub use tables::{reproduce_tables, TableKind, TableReport};

/// Overrides the subset-enumeration cap of `validate`.
pub const MAX_N_ENV: &str = "PVSS_MAX_N";

#[derive(Debug, Parser)]
#[command(
    name = "pvss",
    version,
    about = "Progressive visual secret sharing from the generalized Pascal's triangle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Inclusive integer range written `LO..HI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusiveRange {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for InclusiveRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once("..")
            .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad range bound {v:?}"))
        };
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(Self { lo, hi })
    }
}

#[derive(Debug, Args)]
struct SchemeArgs {
    /// Threshold: shares needed to reveal the secret.
    #[arg(long)]
    k: usize,
    /// Number of shares.
    #[arg(long)]
    n: usize,
    /// Triangle row the coefficient sequence starts from (default n - ceil(k/2)).
    #[arg(long, allow_negative_numbers = true)]
    start_row: Option<i64>,
}

impl SchemeArgs {
    fn params(&self) -> pvss_core::Result<SchemeParams> {
        match self.start_row {
            Some(row) => SchemeParams::with_start_row(self.k, self.n, row),
            None => SchemeParams::new(self.k, self.n),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a slice of the generalized Pascal's triangle.
    Triangle {
        /// Rows, e.g. -8..9.
        #[arg(long, allow_hyphen_values = true)]
        rows: InclusiveRange,
        /// Columns, e.g. 0..10.
        #[arg(long, default_value = "0..10")]
        cols: InclusiveRange,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Build the coefficient sequence and basis matrices of a scheme.
    Codebook {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Also print the explicit C0 and C1 matrices.
        #[arg(long)]
        expand: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the threshold conditions by enumerating every share subset.
    Validate {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the alternating binomial sum identity over a parameter box.
    Lemma {
        #[arg(long, default_value_t = 12)]
        s_max: u32,
        #[arg(long, default_value_t = 12)]
        t_max: u32,
        #[arg(long, allow_hyphen_values = true, default_value = "-12..12")]
        r_range: InclusiveRange,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Closed-form contrast for each number of stacked shares.
    Contrast {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Only this number of stacked shares.
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Reproduce the contrast, column-count and (3,8) comparison tables.
    Tables {
        #[arg(long, value_enum)]
        which: Option<TableKind>,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Exit 1 if any computed value differs from the published one.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Split a PBM secret image into shares.
    Encode {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Output stem; shares go to <stem>.share<i>.pbm. Defaults to the
        /// input path without its extension.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write plain (P1) instead of raw (P4) bitmaps.
        #[arg(long)]
        plain: bool,
    },
    /// OR a set of share images together.
    Stack {
        #[arg(long, num_args = 1.., required = true)]
        shares: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plain: bool,
    },
    /// Measure the contrast of stacked shares against the secret.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        shares: Vec<PathBuf>,
        /// With --n, also print the expected contrast.
        #[arg(long, requires = "n")]
        k: Option<usize>,
        #[arg(long, requires = "k")]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true, requires = "k")]
        start_row: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(pvss_core::Error),
}

impl From<pvss_core::Error> for CliError {
    fn from(e: pvss_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type CmdResult = Result<bool, CliError>;

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn unsupported(cmd: &str, format: Format) -> CliError {
    CliError::Usage(format!("`{cmd}` does not support --format {format:?}").to_lowercase())
}

fn dispatch(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Triangle { rows, cols, format } => cmd_triangle(rows, cols, format, out),
        Command::Codebook {
            scheme,
            expand,
            format,
        } => cmd_codebook(&scheme, expand, format, out),
        Command::Validate {
            scheme,
            json,
            format,
        } => cmd_validate(&scheme, json || format == Format::Json, format, out),
        Command::Lemma {
            s_max,
            t_max,
            r_range,
            format,
        } => cmd_lemma(s_max, t_max, r_range, format, out),
        Command::Contrast { scheme, q, format } => cmd_contrast(&scheme, q, format, out),
        Command::Tables {
            which,
            n_max,
            check,
            format,
        } => cmd_tables(which, n_max, check, format, out),
        Command::Encode {
            input,
            scheme,
            seed,
            out: stem,
            plain,
        } => cmd_encode(&input, &scheme, seed, stem, plain, out),
        Command::Stack {
            shares,
            out: path,
            plain,
        } => cmd_stack(&shares, &path, plain, out),
        Command::Analyze {
            input,
            shares,
            k,
            n,
            start_row,
            format,
        } => cmd_analyze(&input, &shares, k.zip(n), start_row, format, out),
    }
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Result<(), CliError> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("json")
    )?;
    Ok(())
}

fn cmd_triangle(
    rows: InclusiveRange,
    cols: InclusiveRange,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    if cols.lo != 0 {
        return Err(CliError::Usage(format!(
            "--cols must start at 0, got {}..{}",
            cols.lo, cols.hi
        )));
    }
    let col_hi = u32::try_from(cols.hi).map_err(|_| CliError::Usage("--cols too large".into()))?;
    let slice = triangle_slice(rows.lo, rows.hi, col_hi)?;
    match format {
        Format::Text => write!(out, "{}", slice.render_text())?,
        Format::Csv => write!(out, "{}", slice.render_csv())?,
        Format::Json => emit_json(
            out,
            &json!({
                "row_lo": slice.row_lo,
                "col_hi": slice.col_hi,
                "rows": slice.rows.iter().map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
        )?,
    }
    Ok(true)
}

fn counts_json(counts: &std::collections::BTreeMap<usize, i128>) -> Value {
    counts
        .iter()
        .map(|(j, c)| json!({"weight": j, "count": c}))
        .collect()
}

fn cmd_codebook(args: &SchemeArgs, expand: bool, format: Format, out: &mut dyn Write) -> CmdResult {
    let scheme = Scheme::new(args.params()?)?;
    let pair = if expand { Some(scheme.expand()?) } else { None };
    match format {
        Format::Text => {
            let spec = &scheme.spec;
            writeln!(out, "# sequence: {}", scheme.sequence)?;
            writeln!(out, "# C0 = {}", spec.side_notation(0))?;
            writeln!(out, "# C1 = {}", spec.side_notation(1))?;
            write!(out, "{}", scheme.to_text())?;
            if let Some(pair) = &pair {
                for (name, matrix) in [("C0", &pair.c0), ("C1", &pair.c1)] {
                    writeln!(out, "# {name}:")?;
                    for line in matrix.to_string().lines() {
                        writeln!(out, "# {line}")?;
                    }
                }
            }
        }
        Format::Json => {
            let p = &scheme.params;
            let mut v = json!({
                "params": {"k": p.k, "n": p.n, "start_row": p.start_row},
                "sequence": scheme.sequence.coeffs(),
                "m": scheme.spec.m(),
                "c0": counts_json(scheme.spec.c0_counts()),
                "c1": counts_json(scheme.spec.c1_counts()),
            });
            if let Some(pair) = &pair {
                v["c0_matrix"] = json!(pair.c0.to_rows());
                v["c1_matrix"] = json!(pair.c1.to_rows());
            }
            emit_json(out, &v)?;
        }
        Format::Csv => return Err(unsupported("codebook", format)),
    }
    Ok(true)
}

fn enumeration_cap() -> Result<usize, CliError> {
    match std::env::var(MAX_N_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_N_ENV} must be an integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn set_text(set: &std::collections::BTreeSet<i128>) -> String {
    if set.len() == 1 {
        set.first().unwrap().to_string()
    } else {
        let items: Vec<String> = set.iter().map(i128::to_string).collect();
        format!("{{{}}}", items.join(","))
    }
}

fn cmd_validate(args: &SchemeArgs, json: bool, format: Format, out: &mut dyn Write) -> CmdResult {
    if format == Format::Csv {
        return Err(unsupported("validate", format));
    }
    let params = args.params()?;
    let scheme = Scheme::new(params)?;
    let opts = VerifyOptions {
        max_n: enumeration_cap()?,
        start_row: Some(params.start_row),
    };
    let report = verify_scheme_with(&scheme.expand()?, params.k, &opts)?;
    if json {
        emit_json(out, &report.to_json())?;
    } else {
        writeln!(
            out,
            "scheme k={} n={} start_row={} m={}",
            params.k, params.n, params.start_row, report.m
        )?;
        for (q, diffs) in &report.per_q_diff {
            let mut line = format!("q={q} diff={}", set_text(diffs));
            if let Some(c) = report.contrast_per_q.get(q) {
                let _ = write!(line, " alpha={c} ({})", c.ratio());
            }
            if let Some(p) = report.predicted.get(q) {
                let _ = write!(line, " predicted={p}");
            }
            writeln!(out, "{line}")?;
        }
        writeln!(out, "security_ok={}", report.security_ok)?;
        writeln!(out, "contrast_ok={}", report.contrast_ok)?;
        writeln!(out, "progressive_ok={}", report.progressive_ok)?;
        writeln!(out, "predicted_match_ok={}", report.predicted_match_ok)?;
    }
    Ok(report.passed())
}

fn cmd_lemma(
    s_max: u32,
    t_max: u32,
    r_range: InclusiveRange,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    if format == Format::Csv {
        return Err(unsupported("lemma", format));
    }
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for s in 0..=s_max {
        for t in 0..=t_max {
            for r in r_range.lo..=r_range.hi {
                let c = lemma_identity_check(s, t, r)?;
                checked += 1;
                if !c.ok {
                    failures.push(c);
                }
            }
        }
    }
    if format == Format::Json {
        emit_json(
            out,
            &json!({
                "checked": checked,
                "failures": failures.iter().map(|c| json!({
                    "s": c.s, "t": c.t, "r": c.r,
                    "lhs": c.lhs.to_string(), "rhs": c.rhs.to_string(),
                })).collect::<Vec<_>>(),
            }),
        )?;
    } else {
        writeln!(
            out,
            "checked {checked} cases (s <= {s_max}, t <= {t_max}, r in {}..{}): {} failures",
            r_range.lo,
            r_range.hi,
            failures.len()
        )?;
        for c in failures.iter().take(20) {
            writeln!(
                out,
                "  s={} t={} r={}: lhs={} rhs={}",
                c.s, c.t, c.r, c.lhs, c.rhs
            )?;
        }
    }
    Ok(failures.is_empty())
}

fn cmd_contrast(
    args: &SchemeArgs,
    q: Option<usize>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let params = args.params()?;
    let qs: Vec<usize> = match q {
        Some(q) => vec![q],
        None => (params.k..=params.n).collect(),
    };
    let values = qs
        .iter()
        .map(|&q| Ok((q, theoretical_contrast(&params, q)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let reference = if params.is_default_start() {
        reference_compare(&params)?
    } else {
        None
    };
    match format {
        Format::Text => {
            for (q, c) in &values {
                writeln!(out, "q={q} alpha={c} ({})", c.ratio())?;
            }
            if let Some(r) = &reference {
                if let Some(opt) = r.optimal {
                    let verdict = if r.meets_optimum() == Some(true) {
                        "meets optimum"
                    } else {
                        "below optimum"
                    };
                    writeln!(out, "optimal at q={}: {opt} ({verdict})", r.k)?;
                }
                if let Some(profile) = &r.profile {
                    for row in profile {
                        writeln!(out, "q={} reference={}", row.q, row.reference)?;
                    }
                }
            }
        }
        Format::Csv => {
            writeln!(out, "q,alpha_num,alpha_den")?;
            for (q, c) in &values {
                writeln!(out, "{q},{},{}", c.numerator, c.denominator)?;
            }
        }
        Format::Json => emit_json(
            out,
            &json!({
                "params": {"k": params.k, "n": params.n, "start_row": params.start_row},
                "per_q": values.iter().map(|(q, c)| json!({
                    "q": q, "alpha_num": c.numerator, "alpha_den": c.denominator,
                })).collect::<Vec<_>>(),
                "reference": reference,
            }),
        )?,
    }
    Ok(true)
}

fn cmd_tables(
    which: Option<TableKind>,
    n_max: usize,
    check: bool,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let kinds = match which {
        Some(k) => vec![k],
        None => vec![TableKind::Contrast, TableKind::M, TableKind::Hks38],
    };
    let report = reproduce_tables(&kinds, n_max)?;
    match format {
        Format::Text => {
            write!(out, "{}", report.text)?;
            for m in &report.mismatches {
                writeln!(out, "MISMATCH {m}")?;
            }
        }
        Format::Json => emit_json(out, &report.json)?,
        Format::Csv => return Err(unsupported("tables", format)),
    }
    Ok(!check || report.mismatches.is_empty())
}

fn default_stem(input: &Path) -> PathBuf {
    input.with_extension("")
}

fn pbm_format(plain: bool) -> PbmFormat {
    if plain {
        PbmFormat::Plain
    } else {
        PbmFormat::Raw
    }
}

fn cmd_encode(
    input: &Path,
    args: &SchemeArgs,
    seed: u64,
    stem: Option<PathBuf>,
    plain: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let scheme = Scheme::new(args.params()?)?;
    let secret = read_pbm_file(input)?;
    let set = encode(&secret, &scheme, seed)?;
    let stem = stem.unwrap_or_else(|| default_stem(input));
    let paths = set.write_files(&stem, pbm_format(plain))?;
    writeln!(
        out,
        "encoded {}x{} secret with k={} n={} start_row={} m={} seed={}",
        secret.width(),
        secret.height(),
        set.params.k,
        set.params.n,
        set.params.start_row,
        set.m,
        seed
    )?;
    for p in paths {
        writeln!(out, "{}", p.display())?;
    }
    writeln!(
        out,
        "{}",
        pvss_core::imaging::metadata_path(&stem).display()
    )?;
    Ok(true)
}

fn read_all(paths: &[PathBuf]) -> Result<Vec<BinaryImage>, CliError> {
    paths
        .iter()
        .map(|p| read_pbm_file(p).map_err(CliError::from))
        .collect()
}

fn cmd_stack(shares: &[PathBuf], path: &Path, plain: bool, out: &mut dyn Write) -> CmdResult {
    let images = read_all(shares)?;
    let refs: Vec<&BinaryImage> = images.iter().collect();
    let stacked = stack(&refs)?;
    write_pbm_file(path, &stacked, pbm_format(plain))?;
    writeln!(
        out,
        "stacked {} shares into {}",
        images.len(),
        path.display()
    )?;
    Ok(true)
}

fn cmd_analyze(
    input: &Path,
    shares: &[PathBuf],
    kn: Option<(usize, usize)>,
    start_row: Option<i64>,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let secret = read_pbm_file(input)?;
    let images = read_all(shares)?;
    let refs: Vec<&BinaryImage> = images.iter().collect();
    let stacked = stack(&refs)?;
    let measured = empirical_contrast(&stacked, &secret)?;
    let q = images.len();

    let expected = match kn {
        Some((k, n)) => {
            let params = match start_row {
                Some(row) => SchemeParams::with_start_row(k, n, row)?,
                None => SchemeParams::new(k, n)?,
            };
            if q > n {
                return Err(CliError::Usage(format!("{q} shares given but n = {n}")));
            }
            Some(if q < k {
                0.0
            } else {
                theoretical_contrast(&params, q)?.to_f64()
            })
        }
        None => None,
    };
    let p_w = measured.white_fraction();
    let sigma = measured.std_error(p_w, measured.black_fraction());
    match format {
        Format::Text => {
            writeln!(out, "stacked shares: {q}")?;
            writeln!(out, "white fraction over white region: {:.6}", p_w)?;
            writeln!(
                out,
                "white fraction over black region: {:.6}",
                measured.black_fraction()
            )?;
            writeln!(
                out,
                "difference: {:.6} (3 sigma {:.6})",
                measured.difference(),
                3.0 * sigma
            )?;
            if let Some(e) = expected {
                writeln!(out, "expected: {e:.6}")?;
            }
        }
        Format::Json => emit_json(
            out,
            &json!({
                "q": q,
                "counts": measured,
                "white_fraction": p_w,
                "black_fraction": measured.black_fraction(),
                "difference": measured.difference(),
                "sigma": sigma,
                "expected": expected,
            }),
        )?,
        Format::Csv => return Err(unsupported("analyze", format)),
    }
    Ok(true)
}
