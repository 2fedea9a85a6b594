//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or exceeds its time budget.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pvss_core::codebook::column_count;
use pvss_core::imaging::pbm::{read_pbm, write_pbm, PbmFormat};
use pvss_core::validator::reference;
use pvss_core::{
    build_sequence, empirical_contrast, encode, gbinom, lemma_identity_check, reference_compare,
    theoretical_contrast, verify_scheme, verify_scheme_with, BinaryImage, Contrast, Scheme,
    SchemeParams, VerifyOptions,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn params(k: usize, n: usize) -> SchemeParams {
    SchemeParams::new(k, n).expect("valid parameters")
}

fn seq(k: usize, n: usize) -> Vec<i128> {
    build_sequence(&params(k, n)).unwrap().coeffs().to_vec()
}

/// Known closed-form sequences: head entries, then tail entries written
/// over the last positions.
fn closed_form(n: usize, head: &[i128], tail: &[i128]) -> Vec<i128> {
    let mut v = vec![0i128; n + 1];
    v[..head.len()].copy_from_slice(head);
    let start = n + 1 - tail.len();
    v[start..].copy_from_slice(tail);
    v
}

fn sign(e: usize) -> i128 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn coefficient_sequences() -> Check {
    ensure!(seq(2, 4) == [3, 1, 0, 0, 1], "(2,4): {:?}", seq(2, 4));
    ensure!(seq(3, 4) == [2, 1, 0, -1, -2], "(3,4): {:?}", seq(3, 4));
    ensure!(seq(4, 5) == [3, 2, 1, 0, -1, -2], "(4,5): {:?}", seq(4, 5));
    let mut checked = 3;
    for n in 2..=12usize {
        let ni = n as i128;
        let mut cases = vec![
            (2, closed_form(n, &[ni - 1, 1], &[sign(n)])),
            (n, vec![1; n + 1]),
        ];
        if n >= 3 {
            cases.push((
                3,
                closed_form(n, &[ni - 2, 1], &[sign(n - 1), sign(n - 1) * (ni - 2)]),
            ));
        }
        if n >= 4 {
            let head = [(ni * ni - 5 * ni + 6) / 2, ni - 3, 1];
            cases.push((4, closed_form(n, &head, &[sign(n), sign(n) * (ni - 3)])));
        }
        for (k, want) in cases {
            let got = seq(k, n);
            ensure!(got == want, "({k},{n}): got {got:?}, closed form {want:?}");
            checked += 1;
        }
    }
    Ok(format!("{checked} sequences equal"))
}

const TRIANGLE: [[i128; 11]; 18] = [
    [1, -8, 36, -120, 330, -792, 1716, -3432, 6435, -11440, 19448],
    [1, -7, 28, -84, 210, -462, 924, -1716, 3003, -5005, 8008],
    [1, -6, 21, -56, 126, -252, 462, -792, 1287, -2002, 3003],
    [1, -5, 15, -35, 70, -126, 210, -330, 495, -715, 1001],
    [1, -4, 10, -20, 35, -56, 84, -120, 165, -220, 286],
    [1, -3, 6, -10, 15, -21, 28, -36, 45, -55, 66],
    [1, -2, 3, -4, 5, -6, 7, -8, 9, -10, 11],
    [1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1],
    [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 3, 3, 1, 0, 0, 0, 0, 0, 0, 0],
    [1, 4, 6, 4, 1, 0, 0, 0, 0, 0, 0],
    [1, 5, 10, 10, 5, 1, 0, 0, 0, 0, 0],
    [1, 6, 15, 20, 15, 6, 1, 0, 0, 0, 0],
    [1, 7, 21, 35, 35, 21, 7, 1, 0, 0, 0],
    [1, 8, 28, 56, 70, 56, 28, 8, 1, 0, 0],
    [1, 9, 36, 84, 126, 126, 84, 36, 9, 1, 0],
];

fn triangle_fidelity() -> Check {
    let mut cells = 0;
    for (i, row) in TRIANGLE.iter().enumerate() {
        let r = i as i64 - 8;
        for (c, &want) in row.iter().enumerate() {
            let got = gbinom(r, c as u32).map_err(|e| e.to_string())?;
            ensure!(got == want, "gbinom({r},{c}) = {got}, expected {want}");
            cells += 1;
        }
    }
    Ok(format!("{cells} cells equal"))
}

fn column_sizes() -> Check {
    for &(k, n, want) in reference::PUBLISHED_COLUMN_COUNT {
        let got = column_count(&params(k, n)).map_err(|e| e.to_string())?;
        ensure!(got == want, "m({k},{n}) = {got}, published {want}");
    }
    let mut expanded = 0;
    for n in 2..=12 {
        for k in 2..=n {
            let p = params(k, n);
            let closed = column_count(&p).map_err(|e| e.to_string())?;
            let pair = Scheme::new(p)
                .and_then(|s| s.expand())
                .map_err(|e| e.to_string())?;
            ensure!(
                pair.m() as i128 == closed && pair.c1.cols() == pair.m(),
                "({k},{n}): closed form {closed}, expanded {}",
                pair.m()
            );
            expanded += 1;
        }
    }
    Ok(format!(
        "{} published entries equal, {expanded} expansions agree",
        reference::PUBLISHED_COLUMN_COUNT.len()
    ))
}

fn contrast_at_k() -> Check {
    const EQUAL: [(usize, usize); 8] = [
        (2, 2),
        (2, 3),
        (3, 3),
        (3, 4),
        (3, 5),
        (3, 6),
        (4, 4),
        (4, 5),
    ];
    let mut equal = Vec::new();
    for &(k, n, num, den) in reference::PUBLISHED_CONTRAST_AT_K {
        let p = params(k, n);
        let got = theoretical_contrast(&p, k).map_err(|e| e.to_string())?;
        ensure!(
            (got.numerator, got.denominator) == (num, den),
            "({k},{n}): {got}, published {num}/{den}"
        );
        let cmp = reference_compare(&p)
            .map_err(|e| e.to_string())?
            .ok_or(format!("({k},{n}): no reference data"))?;
        let (on, od) =
            reference::optimal_contrast_at_k(k, n).ok_or(format!("({k},{n}): no OPT"))?;
        ensure!(
            cmp.optimal == Some(Contrast::new(on, od)),
            "({k},{n}): reference_compare optimal {:?}",
            cmp.optimal
        );
        ensure!(
            cmp.ours.ratio() <= cmp.optimal.unwrap().ratio(),
            "({k},{n}): {} exceeds the optimum",
            cmp.ours
        );
        if cmp.meets_optimum() == Some(true) {
            equal.push((k, n));
        }
    }
    ensure!(equal == EQUAL, "cases meeting OPT: {equal:?}");
    Ok(format!(
        "{} entries equal, OPT met exactly at {equal:?}",
        reference::PUBLISHED_CONTRAST_AT_K.len()
    ))
}

fn profile_3_8() -> Check {
    let p = params(3, 8);
    let ours: Vec<String> = (3..=8)
        .map(|q| theoretical_contrast(&p, q).map(|c| c.to_string()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let want = ["1/14", "2/14", "3/14", "4/14", "5/14", "6/14"];
    ensure!(ours == want, "profile {ours:?}");
    let profile = reference_compare(&p)
        .map_err(|e| e.to_string())?
        .and_then(|r| r.profile)
        .ok_or("no reference profile")?;
    let better: Vec<usize> = profile
        .iter()
        .filter(|row| row.ours.ratio() > row.reference.ratio())
        .map(|row| row.q)
        .collect();
    ensure!(
        better == [7, 8],
        "ours exceeds the reference at q = {better:?}"
    );
    Ok(format!("profile {} ; better at q = 7, 8", ours.join(" ")))
}

fn exhaustive_validation() -> Check {
    let mut schemes = 0;
    for n in 2..=10 {
        for k in 2..=n {
            let p = params(k, n);
            let pair = Scheme::new(p)
                .and_then(|s| s.expand())
                .map_err(|e| e.to_string())?;
            let report = verify_scheme(&pair, k).map_err(|e| e.to_string())?;
            ensure!(
                report.security_ok && report.predicted_match_ok && report.progressive_ok,
                "({k},{n}): security {} predicted {} progressive {}",
                report.security_ok,
                report.predicted_match_ok,
                report.progressive_ok
            );
            for q in 1..=n {
                let want = if q < k {
                    0
                } else {
                    gbinom(q as i64 - p.half_k() as i64, (q - k) as u32)
                        .map_err(|e| e.to_string())?
                };
                let got = report.uniform_diff(q);
                ensure!(
                    got == Some(want),
                    "({k},{n}) q={q}: diffs {:?}, expected {want}",
                    report.per_q_diff[&q]
                );
            }
            schemes += 1;
        }
    }
    Ok(format!("{schemes} schemes, every subset checked"))
}

fn shift_remark() -> Check {
    let (k, n) = (3usize, 6usize);
    let default_row = SchemeParams::default_start_row(k, n);
    let mut ms = Vec::new();
    for row in (n - k) as i64..=(n - 1) as i64 {
        let p = SchemeParams::with_start_row(k, n, row).map_err(|e| e.to_string())?;
        let pair = Scheme::new(p)
            .and_then(|s| s.expand())
            .map_err(|e| e.to_string())?;
        let opts = VerifyOptions {
            start_row: Some(row),
            ..VerifyOptions::default()
        };
        let report = verify_scheme_with(&pair, k, &opts).map_err(|e| e.to_string())?;
        ensure!(
            report.is_valid(),
            "start_row {row}: security {} contrast {} predicted {}",
            report.security_ok,
            report.contrast_ok,
            report.predicted_match_ok
        );
        ms.push((row, pair.m(), report.progressive_ok));
    }
    let min = ms.iter().map(|&(_, m, _)| m).min().unwrap();
    let default_m = ms.iter().find(|&&(r, _, _)| r == default_row).unwrap().1;
    ensure!(
        default_m == min,
        "default start row m = {default_m}, minimum {min}: {ms:?}"
    );
    let detail: Vec<String> = ms
        .iter()
        .map(|(r, m, prog)| format!("row {r}: m={m}{}", if *prog { "" } else { " (flat)" }))
        .collect();
    Ok(format!("all valid; {}", detail.join(", ")))
}

fn lemma_box() -> Check {
    let mut cases = 0;
    for s in 0..=12 {
        for t in 0..=12 {
            for r in -12..=12 {
                let c = lemma_identity_check(s, t, r).map_err(|e| e.to_string())?;
                ensure!(c.ok, "s={s} t={t} r={r}: {} != {}", c.lhs, c.rhs);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases"))
}

fn statistical_encoding() -> Check {
    let (k, n) = (3, 5);
    let p = params(k, n);
    let scheme = Scheme::new(p).map_err(|e| e.to_string())?;
    let secret = BinaryImage::split_card(512, 512);
    let shares = encode(&secret, &scheme, 0x00A1_1CE5).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for q in 1..=n {
        let indices: Vec<usize> = (1..=q).collect();
        let stacked = shares.stack_subset(&indices).map_err(|e| e.to_string())?;
        let measured = empirical_contrast(&stacked, &secret).map_err(|e| e.to_string())?;
        let expected = if q < k {
            0.0
        } else {
            theoretical_contrast(&p, q)
                .map_err(|e| e.to_string())?
                .to_f64()
        };
        let err = (measured.difference() - expected).abs();
        let sigma = measured.std_error(measured.white_fraction(), measured.black_fraction());
        ensure!(
            err <= 0.01 && err <= 3.0 * sigma.max(f64::EPSILON),
            "q={q}: measured {:.5}, expected {expected:.5}, 3 sigma {:.5}",
            measured.difference(),
            3.0 * sigma
        );
        parts.push(format!("q={q} {:.4}/{expected:.4}", measured.difference()));
    }
    Ok(parts.join(", "))
}

fn determinism_and_roundtrip() -> Check {
    let scheme = Scheme::new(params(3, 5)).map_err(|e| e.to_string())?;
    let secret = BinaryImage::from_fn(97, 41, |x, y| (x * 7 + y * 3) % 5 < 2);
    let a = encode(&secret, &scheme, 42).map_err(|e| e.to_string())?;
    let b = encode(&secret, &scheme, 42).map_err(|e| e.to_string())?;
    ensure!(a.shares == b.shares, "encode is not deterministic");

    for format in [PbmFormat::Plain, PbmFormat::Raw] {
        for image in std::iter::once(&secret).chain(&a.shares) {
            let bytes = write_pbm(image, format);
            let back = read_pbm(&bytes).map_err(|e| e.to_string())?;
            ensure!(&back == image, "{format:?} round trip differs");
        }
    }

    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = pvss_cli::run(["pvss", "tables", "--check"], &mut out, &mut err);
    ensure!(
        code == 0,
        "`tables --check` exited {code}: {}",
        String::from_utf8_lossy(&out)
    );
    Ok("encode repeatable; P1 and P4 round trip; `tables --check` exits 0".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "coefficient sequences",
            budget: Duration::from_secs(1),
            run: coefficient_sequences,
        },
        Criterion {
            id: 2,
            name: "triangle fidelity",
            budget: Duration::from_secs(1),
            run: triangle_fidelity,
        },
        Criterion {
            id: 3,
            name: "column sizes",
            budget: Duration::from_secs(5),
            run: column_sizes,
        },
        Criterion {
            id: 4,
            name: "contrast at q = k",
            budget: Duration::from_secs(1),
            run: contrast_at_k,
        },
        Criterion {
            id: 5,
            name: "(3,8) profile",
            budget: Duration::from_secs(1),
            run: profile_3_8,
        },
        Criterion {
            id: 6,
            name: "exhaustive threshold check",
            budget: Duration::from_secs(120),
            run: exhaustive_validation,
        },
        Criterion {
            id: 7,
            name: "start-row shift",
            budget: Duration::from_secs(10),
            run: shift_remark,
        },
        Criterion {
            id: 8,
            name: "alternating sum identity",
            budget: Duration::from_secs(5),
            run: lemma_box,
        },
        Criterion {
            id: 9,
            name: "statistical encoding",
            budget: Duration::from_secs(10),
            run: statistical_encoding,
        },
        Criterion {
            id: 10,
            name: "determinism and round trip",
            budget: Duration::from_secs(5),
            run: determinism_and_roundtrip,
        },
    ];

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} ({}): {} [{:.2?}, budget {:?}]",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            elapsed,
            c.budget
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
