//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are evaluated like the others but do
//! not fail the run; any other failure exits nonzero.

use std::f64::consts::{PI, SQRT_2};
use std::process::{Command, ExitCode};
use std::time::Instant;

use circlelab::rows::{read_csv, write_csv, PerrorRow, Theorem5Row};
use circlelab_core::accel::Averaging;
use circlelab_core::arith::{d, r2, sum_star, SummatoryKind};
use circlelab_core::eulermac::*;
use circlelab_core::quad::{kelvin_integral, KELVIN_Y_MAX};
use circlelab_core::series::*;
use circlelab_core::specfun::{zeta_minus_pole, EULER_GAMMA};
use circlelab_core::Decimal;

type Outcome = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Outcome);

const KNOWN_FAILURES: &[(u8, &str)] = &[
    (
        9,
        "the first zeta bracket fails at s = 1, where the middle term is 1 - gamma < 1/2",
    ),
    (
        12,
        "verify --suite all includes the s = 1 bracket check and exits 1",
    ),
];

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = circlelab::run(
        std::iter::once("circlelab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8_lossy(&out).into_owned())
}

fn r2_brute(n: u64) -> u64 {
    let r = (n as f64).sqrt() as i64 + 1;
    let mut c = 0;
    for a in -r..=r {
        for b in -r..=r {
            if (a * a + b * b) as u64 == n {
                c += 1;
            }
        }
    }
    c
}

fn d_brute(n: u64) -> u64 {
    (1..=n).filter(|k| n % k == 0).count() as u64
}

/// Twice the star count, from `value(point) * 10^scale` against the mantissa.
fn twice_count(x: &Decimal, kind: SummatoryKind) -> u128 {
    let m = x.mantissa();
    let p = 10i128.pow(x.scale());
    let lim = x.floor() as i64 + 1;
    let mut twice = 0u128;
    let mut add = |v: i128| {
        let lhs = v * p;
        if lhs < m {
            twice += 2;
        } else if lhs == m {
            twice += 1;
        }
    };
    match kind {
        SummatoryKind::Circle => {
            let r = (lim as f64).sqrt() as i64 + 1;
            for a in -r..=r {
                for b in -r..=r {
                    add((a * a + b * b) as i128);
                }
            }
        }
        SummatoryKind::Divisor => {
            for a in 1..=lim {
                for b in 1..=lim / a + 1 {
                    add((a * b) as i128);
                }
            }
        }
    }
    twice
}

fn c1() -> Outcome {
    for n in 1..=10_000u64 {
        ensure(r2(n).map_err(e)? == r2_brute(n), format!("r2({n})"))?;
        ensure(d(n).map_err(e)? == d_brute(n), format!("d({n})"))?;
    }
    for k in 1..=200i128 {
        // x = 0.37 k with integers at every 100th point.
        let x = Decimal::new(37 * k, 2);
        for kind in [SummatoryKind::Circle, SummatoryKind::Divisor] {
            let s = sum_star(&x, kind).map_err(e)?;
            ensure(
                s.twice() == twice_count(&x, kind),
                format!("sum_star {} at {x}", kind.name()),
            )?;
        }
    }
    Ok("n <= 10000 and 200 grid points, both kinds".into())
}

fn c2() -> Outcome {
    let mut worst: f64 = 0.0;
    for x in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let l = f_sin2(x, FMethod::Lattice).map_err(e)?.value;
        let b = f_sin2(x, FMethod::Bernoulli).map_err(e)?.value;
        worst = worst.max((l - b).abs());
        ensure((l - b).abs() <= 1e-8, format!("x={x}: {l} vs {b}"))?;
    }
    Ok(format!("max difference {worst:.2e}"))
}

fn c3() -> Outcome {
    for y in [0.5, 1.0, 2.0, 2.5, 4.0] {
        let c = c_sin2_closed(y).map_err(e)?;
        let l = limit_diff(&FunctionModel::Sin2 { a: y }, 100_000, IntegralFrom::One).map_err(e)?;
        ensure(
            (c.value - l.value).abs() <= c.est_error + l.est_error,
            format!(
                "Y={y}: {} vs {} (bound {:e})",
                c.value,
                l.value,
                c.est_error + l.est_error
            ),
        )?;
    }
    let c = c_sin2_closed(0.5).map_err(e)?.value;
    let z = c_sin2_zeta(0.5).map_err(e)?.value;
    ensure(
        (c - z).abs() <= 1e-9,
        format!("zeta route at 0.5: {c} vs {z}"),
    )?;
    Ok(format!("zeta route differs by {:.2e}", (c - z).abs()))
}

fn c4() -> Outcome {
    let mut worst: f64 = 0.0;
    for y in [0.5, 1.0, 2.0, 5.0] {
        let f = f_sin2(y, FMethod::Lattice).map_err(e)?.value;
        let k = kelvin_integral(y).map_err(e)?.value;
        let r = (f + SQRT_2 * k).abs();
        worst = worst.max(r);
        ensure(r <= 1e-4, format!("Y={y}: residual {r:e}"))?;
    }
    Ok(format!("max residual {worst:.2e}"))
}

fn c5() -> Outcome {
    let mut pairs = 0;
    for theta in [0.25, 1.0 / 3.0] {
        for n in 0..=5u64 {
            for x in [0.5, 1.0, 2.0, 3.0, 4.0] {
                let p = ThetaParams::new(n, theta, x).map_err(e)?;
                let c = inner_j1(&p, InnerMethod::ClosedF).map_err(e)?;
                let d = inner_j1(&p, InnerMethod::Direct { m: 100_000 }).map_err(e)?;
                let mut routes = vec![("closed", c), ("direct", d)];
                if p.y() <= KELVIN_Y_MAX {
                    routes.push(("kelvin", inner_j1(&p, InnerMethod::Kelvin).map_err(e)?));
                }
                for i in 0..routes.len() {
                    for j in i + 1..routes.len() {
                        let (a, b) = (routes[i].1, routes[j].1);
                        pairs += 1;
                        ensure(
                            a.agrees_with(&b),
                            format!(
                                "{} vs {} at n={n} theta={theta:.3} x={x}: {} vs {}",
                                routes[i].0, routes[j].0, a.value, b.value
                            ),
                        )?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{pairs} route pairs agree (kelvin only where Y <= {KELVIN_Y_MAX})"
    ))
}

fn c6() -> Outcome {
    let spec = TruncationSpec::new(4000, Averaging::Cesaro);
    let mut notes = Vec::new();
    for (x, lhs) in [("2.5", 2.0), ("1.5", 1.0)] {
        let c = conjecture1_check(&x.parse().map_err(e)?, 0.25, &spec).map_err(e)?;
        ensure(c.lhs == lhs, format!("x={x}: lhs {}", c.lhs))?;
        ensure(
            c.contains_lhs(),
            format!(
                "x={x}: {} outside {} +- {:e}",
                c.lhs, c.rhs.value, c.rhs.est_error
            ),
        )?;
        ensure(
            c.rhs.est_error <= 0.02,
            format!("x={x}: half-width {:e}", c.rhs.est_error),
        )?;
        notes.push(format!("x={x} half-width {:.1e}", c.rhs.est_error));
    }
    Ok(notes.join(", "))
}

fn c7() -> Outcome {
    let ns = [400, 1000, 2000, 4000];
    let mut notes = Vec::new();
    for (x, kind) in [
        ("5.5", SummatoryKind::Circle),
        ("2.5", SummatoryKind::Divisor),
    ] {
        let xd: Decimal = x.parse().map_err(e)?;
        let exact = sum_star(&xd, kind).map_err(e)?.to_f64();
        let mut widths = Vec::new();
        for n in ns {
            let v = match kind {
                SummatoryKind::Circle => voronoi_circle(xd.to_f64(), n, Averaging::Cesaro),
                SummatoryKind::Divisor => voronoi_divisor(xd.to_f64(), n, Averaging::Cesaro),
            }
            .map_err(e)?;
            ensure(
                (v.value - exact).abs() <= v.est_error,
                format!(
                    "{} x={x} N={n}: {} vs exact {exact} (+- {:e})",
                    kind.name(),
                    v.value,
                    v.est_error
                ),
            )?;
            widths.push(v.est_error);
        }
        ensure(
            widths.windows(2).all(|w| w[1] <= w[0]),
            format!("{} widths not monotone: {widths:?}", kind.name()),
        )?;
        ensure(
            widths[3] < widths[0],
            format!("{} width did not shrink", kind.name()),
        )?;
        notes.push(format!(
            "{} widths {:.1e} -> {:.1e}",
            kind.name(),
            widths[0],
            widths[3]
        ));
    }
    Ok(notes.join(", "))
}

fn c8() -> Outcome {
    let exact_tail = PI * PI / 6.0 - (1..=10).map(|k| 1.0 / (k * k) as f64).sum::<f64>();
    let t = zeta_tail(2.0, 10).map_err(e)?.value;
    ensure(
        (t - exact_tail).abs() <= 1e-6,
        format!("zeta tail {t} vs {exact_tail}"),
    )?;
    let h10: f64 = (1..=10).map(|k| 1.0 / k as f64).sum();
    let h = harmonic_asymptotic(10).map_err(e)?.value;
    ensure((h - h10).abs() <= 1e-6, format!("H10 {h} vs {h10}"))?;
    let m = FunctionModel::Sin2 { a: 0.25 };
    let r4 = generalized_expansion_check(&m, 4).map_err(e)?;
    let r8 = generalized_expansion_check(&m, 8).map_err(e)?;
    ensure(r8 / r4 <= 0.5, format!("residual ratio {}", r8 / r4))?;
    Ok(format!(
        "tail err {:.1e}, H10 err {:.1e}, ratio {:.4}",
        (t - exact_tail).abs(),
        (h - h10).abs(),
        r8 / r4
    ))
}

fn c9() -> Outcome {
    let mut bad = Vec::new();
    for s in 1..=100u32 {
        let sf = s as f64;
        let z = if s == 1 {
            EULER_GAMMA
        } else {
            zeta_minus_pole(sf).map_err(e)?
        };
        let q = 1.0 - z;
        let first = 1.0 / (sf + 1.0) <= q && q <= 2.0 / (sf + 1.0);
        let r = z - 1.0;
        let lo = -1.0 / (sf + 1.0) - 3.0 / ((sf + 1.0) * (sf + 2.0));
        let hi = -1.0 / (sf + 1.0) - 0.25 / ((sf + 1.0) * (sf + 2.0));
        if !(first && lo <= r && r <= hi) {
            bad.push(s);
        }
    }
    let mut demo = Vec::new();
    for x in [10u64, 20, 40] {
        let direct = zeta_tail_direct(2.0, x).map_err(e)?.value;
        let good = zeta_tail(2.0, x).map_err(e)?;
        let variant = zeta_tail_eq43(1, x).map_err(e)?.value;
        ensure(
            (good.value - direct).abs() <= 2.0 * good.est_error,
            format!("standard tail misses at x={x}"),
        )?;
        let gap = (variant - direct).abs();
        ensure(
            (gap - 1.0 / x as f64).abs() <= 0.1 / x as f64,
            format!("variant gap {gap} at x={x}"),
        )?;
        demo.push(format!("{gap:.4}"));
    }
    ensure(
        bad.is_empty(),
        format!(
            "bracket fails at s = {bad:?}; variant tail gaps {} at x = 10, 20, 40 as expected",
            demo.join(", ")
        ),
    )?;
    Ok(format!("variant tail gaps {}", demo.join(", ")))
}

fn c10() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let path = dir.path().join("perror.csv");
    let (code, out) = run_cli(&[
        "perror",
        "--x-min",
        "1",
        "--x-max",
        "10000",
        "--step",
        "0.5",
        "--series-n",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    ensure(code == 0, format!("perror exited {code}"))?;
    let rows: Vec<PerrorRow> = read_csv(std::fs::File::open(&path).map_err(e)?).map_err(e)?;
    ensure(rows.len() == 19_999, format!("{} rows", rows.len()))?;
    ensure(
        rows.iter().all(|r| r.phi_p.is_finite()),
        "phi_p column has non-finite entries",
    )?;
    let line = out
        .lines()
        .find(|l| l.starts_with("running max |p_exact|"))
        .ok_or("no running max line")?;
    let max: f64 = line
        .split_whitespace()
        .nth(4)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| format!("cannot parse {line:?}"))?;
    let recomputed = rows.iter().map(|r| r.p_exact.abs()).fold(0.0, f64::max);
    ensure(
        max == recomputed,
        format!("printed {max} vs column {recomputed}"),
    )?;
    ensure(max > 5.0, format!("running max {max}"))?;
    let phi_range = rows
        .iter()
        .map(|r| r.phi_p)
        .fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    Ok(format!(
        "{} (phi_p spans {:.0}..{:.0})",
        line.trim(),
        phi_range.0,
        phi_range.1
    ))
}

fn theorem5_bytes(x: &str, dir: &std::path::Path, tag: &str) -> Result<(Vec<u8>, String), String> {
    let path = dir.join(format!("t5_{x}_{tag}.csv"));
    let (code, out) = run_cli(&[
        "theorem5",
        "--x",
        x,
        "--n-max",
        "200",
        "--out",
        path.to_str().unwrap(),
    ]);
    ensure(code == 0, format!("theorem5 exited {code}"))?;
    Ok((std::fs::read(&path).map_err(e)?, out))
}

fn c11() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let mut notes = Vec::new();
    for x in ["2", "3"] {
        let (a, summary) = theorem5_bytes(x, dir.path(), "a")?;
        let (b, _) = theorem5_bytes(x, dir.path(), "b")?;
        ensure(a == b, format!("x={x}: runs differ"))?;
        let rows: Vec<Theorem5Row> = read_csv(a.as_slice()).map_err(e)?;
        ensure(rows.len() == 201, format!("x={x}: {} rows", rows.len()))?;
        let ok: Vec<_> = rows.iter().filter(|r| r.status == "ok").collect();
        for r in &ok {
            ensure(
                r.xi_residual.abs() < 1e-10 && r.lambda_residual.abs() < 1e-10,
                format!(
                    "x={x} n={}: residuals {:e}, {:e}",
                    r.n, r.xi_residual, r.lambda_residual
                ),
            )?;
        }
        ensure(
            summary.contains("running max metric"),
            "no running max line",
        )?;
        notes.push(format!("x={x}: {}/201 ok, {}", ok.len(), summary.trim()));
    }
    Ok(notes.join("; "))
}

fn c12() -> Outcome {
    let mut problems = Vec::new();

    // Round trips of both table formats.
    let (_, p) = run_cli(&[
        "perror",
        "--x-min",
        "1",
        "--x-max",
        "30",
        "--step",
        "0.25",
        "--series-n",
        "200",
    ]);
    let rows: Vec<PerrorRow> = read_csv(p.as_bytes()).map_err(e)?;
    let mut again = Vec::new();
    write_csv(&rows, &mut again).map_err(e)?;
    if again != p.as_bytes() {
        problems.push("perror CSV does not round-trip".to_string());
    }
    let (_, t) = run_cli(&["theorem5", "--x", "2", "--n-max", "40"]);
    let rows: Vec<Theorem5Row> = read_csv(t.as_bytes()).map_err(e)?;
    let mut again = Vec::new();
    write_csv(&rows, &mut again).map_err(e)?;
    if again != t.as_bytes() {
        problems.push("theorem5 CSV does not round-trip".to_string());
    }

    // Repeat runs.
    for args in [
        &[
            "perror",
            "--x-min",
            "1",
            "--x-max",
            "30",
            "--step",
            "0.25",
            "--series-n",
            "200",
        ][..],
        &["theorem5", "--x", "2", "--n-max", "40"][..],
        &["report", "--x", "10.5", "--format", "csv"][..],
        &["verify", "--suite", "all", "--format", "csv"][..],
    ] {
        if run_cli(args) != run_cli(args) {
            problems.push(format!("{} is not reproducible", args[0]));
        }
    }

    let status = Command::new(env!("CARGO_BIN_EXE_circlelab"))
        .args(["verify", "--suite", "all"])
        .output()
        .map_err(e)?;
    let code = status.status.code().unwrap_or(-1);
    if code != 0 {
        let text = String::from_utf8_lossy(&status.stdout);
        let fails: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with("FAIL"))
            .map(|l| l.split(':').next().unwrap_or(l))
            .collect();
        problems.push(format!(
            "verify --suite all exited {code} ({})",
            fails.join(", ")
        ));
    }
    if problems.is_empty() {
        Ok("round trips, repeat runs and verify all clean".into())
    } else {
        Err(problems.join("; "))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "oracle equivalence", c1),
        (2, "lattice vs Bernoulli f", c2),
        (3, "summation constant chain", c3),
        (4, "Kelvin integral identity", c4),
        (5, "three-route inner sum", c5),
        (6, "divisor-sum identity", c6),
        (7, "Voronoi envelopes", c7),
        (8, "asymptotic expansions", c8),
        (9, "zeta brackets and tail forms", c9),
        (10, "remainder scan", c10),
        (11, "mean-value scan", c11),
        (12, "determinism and round trips", c12),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        let known = KNOWN_FAILURES.iter().find(|k| k.0 == id);
        match (&r, known) {
            (Ok(note), None) => println!("PASS {id:>2} {name} ({secs:.1}s): {note}"),
            (Ok(note), Some(_)) => {
                println!("PASS {id:>2} {name} ({secs:.1}s): {note} [listed as expected failure]")
            }
            (Err(why), Some((_, reason))) => {
                println!("FAIL {id:>2} {name} ({secs:.1}s): {why} [expected: {reason}]")
            }
            (Err(why), None) => {
                println!("FAIL {id:>2} {name} ({secs:.1}s): {why}");
                unexpected.push(id);
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: no unexpected failures");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        ExitCode::FAILURE
    }
}
