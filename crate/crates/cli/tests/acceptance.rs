//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use binforms::area::{
    closed_form_area, compute_cf, quadrature_area_line, quadrature_area_line_scaled, quadrature_area_polar,
    rotation_identity_residual, DEFAULT_TOL,
};
use binforms::autgroup::{default_t_samples, elimination_probe, verify_claimed_aut, GroupType};
use binforms::count::{adaptive_count, convergence_sweep, count_represented, CountOptions};
use binforms::exact::Integer;
use binforms::forms::{build, build_in, build_rn, scaled_factorization_residual, sine_products, FormKind};
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

const KINDS: [FormKind; 2] = [FormKind::Rn, FormKind::In];

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(failures: Vec<String>, ok: String) -> Verdict {
    Verdict {
        passed: failures.is_empty(),
        detail: if failures.is_empty() { ok } else { failures.join("; ") },
    }
}

fn within(start: Instant, limit: Duration, failures: &mut Vec<String>) -> Duration {
    let took = start.elapsed();
    if took > limit {
        failures.push(format!("took {took:?}, limit {limit:?}"));
    }
    took
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

const TABLE: [(&str, &str); 8] = [
    ("x", "y"),
    ("x^2 - y^2", "2xy"),
    ("x^3 - 3xy^2", "3x^2y - y^3"),
    ("x^4 - 6x^2y^2 + y^4", "4x^3y - 4xy^3"),
    ("x^5 - 10x^3y^2 + 5xy^4", "5x^4y - 10x^2y^3 + y^5"),
    ("x^6 - 15x^4y^2 + 15x^2y^4 - y^6", "6x^5y - 20x^3y^3 + 6xy^5"),
    ("x^7 - 21x^5y^2 + 35x^3y^4 - 7xy^6", "7x^6y - 35x^4y^3 + 21x^2y^5 - y^7"),
    ("x^8 - 28x^6y^2 + 70x^4y^4 - 28x^2y^6 + y^8", "8x^7y - 56x^5y^3 + 56x^3y^5 - 8xy^7"),
];

fn golden_coefficients() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (n, (r, i)) in (1..=8).zip(TABLE) {
        for (kind, want) in [("rn", r), ("in", i)] {
            let n_arg = n.to_string();
            let out = binforms_cli::run(["binforms", "form", "--kind", kind, "--n", n_arg.as_str()]);
            let v: Value = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
            if out.code != 0 || v["display"] != want {
                failures.push(format!("{kind}_{n}: {}", v["display"]));
            }
        }
    }
    let took = within(start, Duration::from_secs(1), &mut failures);
    verdict(failures, format!("16 forms match, {took:?}"))
}

fn complex_oracle() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(1);
    for n in 1..=20u32 {
        let (r, i) = (build_rn(n).unwrap(), build_in(n).unwrap());
        for _ in 0..200 {
            let x = Integer::from(rng.gen_range(-1_000_000i64..=1_000_000));
            let y = Integer::from(rng.gen_range(-1_000_000i64..=1_000_000));
            let (mut re, mut im) = (Integer::one(), Integer::zero());
            for _ in 0..n {
                (re, im) = (&re * &x - &im * &y, &re * &y + &im * &x);
            }
            if r.eval(&x, &y) != re || i.eval(&x, &y) != im {
                failures.push(format!("n={n} at ({x}, {y})"));
            }
        }
    }
    let took = within(start, Duration::from_secs(5), &mut failures);
    verdict(failures, format!("4000 points per family, {took:?}"))
}

fn factorization_and_sines() -> Verdict {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for kind in KINDS {
        for n in 1..=12 {
            let r = scaled_factorization_residual(kind, n).unwrap();
            worst = worst.max(r);
            if r > 1e-8 {
                failures.push(format!("{kind}_{n} residual {r:e}"));
            }
        }
    }
    for n in 1..=20 {
        let (odd, all) = sine_products(n);
        let base = 2f64.powi(1 - n as i32);
        if rel(odd, base) > 1e-12 || rel(all, base * f64::from(n)) > 1e-12 {
            failures.push(format!("sine products n={n}"));
        }
    }
    verdict(failures, format!("worst scaled residual {worst:.2e}"))
}

fn automorphism_groups() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    for kind in KINDS {
        for n in 3..=16u32 {
            // Expected: odd n; I_even; R_n with 4 ∤ n; R_n with 4 | n.
            let (aut, abs) = match (n % 2 == 1, kind, n % 4 == 0) {
                (true, _, _) => ((2, GroupType::D1), (4, GroupType::D2)),
                (false, FormKind::In, _) | (false, FormKind::Rn, false) => ((4, GroupType::D2), (8, GroupType::D4)),
                (false, FormKind::Rn, true) => ((8, GroupType::D4), (8, GroupType::D4)),
            };
            let cap = if kind == FormKind::Rn { 3 } else { 2 };
            let weight = 1.0 / 2f64.powi((2 * n).trailing_zeros().min(cap) as i32);
            match verify_claimed_aut(kind, n) {
                Ok(r) => {
                    if (r.aut_order, r.aut_type) != aut || (r.aut_abs_order, r.aut_abs_type) != abs {
                        failures.push(format!(
                            "{kind}_{n}: {} {} / {} {}",
                            r.aut_order, r.aut_type, r.aut_abs_order, r.aut_abs_type
                        ));
                    }
                    let w = r.weight.numer().to_f64().unwrap() / r.weight.denom().to_f64().unwrap();
                    if w != weight {
                        failures.push(format!("{kind}_{n}: weight {}", r.weight));
                    }
                }
                Err(e) => failures.push(format!("{kind}_{n}: {e}")),
            }
        }
    }
    let took = within(start, Duration::from_secs(1), &mut failures);
    verdict(failures, format!("28 forms, {took:?}"))
}

fn elimination_probes() -> Verdict {
    let ts = default_t_samples();
    let mut failures = Vec::new();
    for kind in KINDS {
        for n in (3..=15).step_by(2) {
            if !elimination_probe(kind, n, &ts).unwrap_or(false) {
                failures.push(format!("{kind}_{n}"));
            }
        }
    }
    verdict(failures, "both families rejected for all t, odd n <= 15".into())
}

fn rotation_identity() -> Verdict {
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 2..=12 {
        let r = rotation_identity_residual(n, 100).unwrap();
        worst = worst.max(r);
        if r > 1e-8 {
            failures.push(format!("n={n} residual {r:e}"));
        }
    }
    verdict(failures, format!("worst residual {worst:.2e}"))
}

fn area_agreement() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for kind in KINDS {
        for n in 3..=12 {
            let f = build(kind, n).unwrap();
            let l = quadrature_area_line(&f, DEFAULT_TOL).unwrap().value;
            let p = quadrature_area_polar(&f, DEFAULT_TOL).unwrap().value;
            let c = closed_form_area(n).unwrap();
            let w = rel(l, c).max(rel(p, c)).max(rel(l, p));
            worst = worst.max(w);
            if w > 1e-6 {
                failures.push(format!("{kind}_{n}: {l} {p} {c}"));
            }
        }
    }
    for n in 3..=10 {
        let got = quadrature_area_line_scaled(&build_in(n).unwrap(), 2f64.powi(1 - n as i32), DEFAULT_TOL)
            .unwrap()
            .value;
        let want = 4f64.powf(1.0 - 1.0 / f64::from(n)) * closed_form_area(n).unwrap();
        if rel(got, want) > 1e-6 {
            failures.push(format!("F*_{n}: {got} vs {want}"));
        }
    }
    for f in [build_rn(3).unwrap(), build_in(4).unwrap()] {
        let base = quadrature_area_line(&f, DEFAULT_TOL).unwrap().value;
        for c in [2i64, 3, 10] {
            let got = quadrature_area_line(&f.scaled(&Integer::from(c)), DEFAULT_TOL).unwrap().value;
            let want = (c as f64).powf(-2.0 / f.degree() as f64) * base;
            if rel(got, want) > 1e-6 {
                failures.push(format!("{c}·({f}): {got} vs {want}"));
            }
        }
    }
    let took = within(start, Duration::from_secs(10), &mut failures);
    verdict(failures, format!("worst method disagreement {worst:.2e}, {took:?}"))
}

fn cf_consistency() -> Verdict {
    let mut failures = Vec::new();
    for kind in KINDS {
        for n in 3..=12 {
            match compute_cf(kind, n, DEFAULT_TOL) {
                Ok(r) if rel(r.cf_computed, r.cf_closed) <= 1e-6 => {}
                Ok(r) => failures.push(format!("{kind}_{n}: {} vs {}", r.cf_computed, r.cf_closed)),
                Err(e) => failures.push(format!("{kind}_{n}: {e}")),
            }
        }
    }
    verdict(failures, "20 forms".into())
}

fn exact_small_count() -> Verdict {
    let f = build_in(3).unwrap();
    let mut failures = Vec::new();
    let r = adaptive_count(&f, 10, 4, 8);
    if r.count != 12 || !r.stable || r.box_size > 16 {
        failures.push(format!("adaptive: count {} at M = {}, stable {}", r.count, r.box_size, r.stable));
    }
    if count_represented(&f, 10, 16).count != 12 {
        failures.push("box 16".into());
    }
    // |I_3(x, y)| ≥ |y| off the zero set, so |y| ≤ 10 and then |x| ≤ 7.
    let mut seen = std::collections::BTreeSet::new();
    for x in -7i64..=7 {
        for y in -10i64..=10 {
            let v = 3 * x * x * y - y * y * y;
            if v != 0 && v.abs() <= 10 {
                seen.insert(v);
            }
        }
    }
    if seen.len() != 12 {
        failures.push(format!("oracle found {}", seen.len()));
    }
    verdict(failures, "R(10) = 12, stable by M = 16".into())
}

fn asymptotic_validation() -> Verdict {
    let start = Instant::now();
    let mut failures = Vec::new();
    let opts = CountOptions::default();
    let i3 = build_in(3).unwrap();
    let c_i3 = compute_cf(FormKind::In, 3, DEFAULT_TOL).unwrap().cf_closed;
    let sweep = convergence_sweep(&i3, &[10_000, 100_000, 1_000_000], 64, 16, &opts).unwrap();
    let devs: Vec<f64> = sweep.iter().map(|r| rel(r.ratio, c_i3)).collect();
    if sweep.iter().any(|r| !r.stable) {
        failures.push("I_3 counts not stable".into());
    }
    if devs.windows(2).any(|w| w[1] > w[0]) {
        failures.push(format!("I_3 deviations increase: {devs:.4?}"));
    }
    let last = sweep.last().unwrap();
    if devs[2] > 0.10 {
        failures.push(format!(
            "I_3 at Z = 10^6: count {} ratio {:.4}, {:.1}% from {c_i3:.5} (limit 10%)",
            last.count,
            last.ratio,
            100.0 * devs[2]
        ));
    }
    let r4 = build_rn(4).unwrap();
    let c_r4 = compute_cf(FormKind::Rn, 4, DEFAULT_TOL).unwrap().cf_closed;
    let r = adaptive_count(&r4, 10_000, 32, 10);
    let dev_r4 = rel(r.ratio, c_r4);
    if !r.stable || dev_r4 > 0.15 {
        failures.push(format!("R_4 at Z = 10^4: ratio {:.4}, {:.1}% (limit 15%)", r.ratio, 100.0 * dev_r4));
    }
    let took = within(start, Duration::from_secs(60), &mut failures);
    verdict(
        failures,
        format!(
            "I_3 deviations {:.1}%, {:.1}%, {:.1}%; R_4 {:.1}%; {took:?}",
            100.0 * devs[0],
            100.0 * devs[1],
            100.0 * devs[2],
            100.0 * dev_r4
        ),
    )
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    let mut outputs = Vec::new();
    for mode in ["--serial", ""] {
        let path = dir.path().join(format!("run{}.csv", outputs.len()));
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_binforms"));
        cmd.args(["count", "--kind", "in", "--n", "3", "--zmax", "1000000", "--sweep", "--max-doublings", "16"]);
        cmd.arg("--csv").arg(&path);
        if !mode.is_empty() {
            cmd.arg(mode);
        }
        let status = cmd.output().unwrap().status;
        if !status.success() {
            failures.push(format!("count {mode} exited with {status}"));
        }
        outputs.push(std::fs::read(&path).unwrap_or_default());
    }
    if outputs[0] != outputs[1] || outputs[0].is_empty() {
        failures.push("serial and parallel CSV differ".into());
    }
    verdict(failures, format!("{} identical CSV bytes", outputs[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("golden coefficients", golden_coefficients),
        ("complex-oracle equivalence", complex_oracle),
        ("factorization and sine products", factorization_and_sines),
        ("automorphism groups", automorphism_groups),
        ("elimination probes", elimination_probes),
        ("rotation identity", rotation_identity),
        ("area agreement", area_agreement),
        ("C_F consistency", cf_consistency),
        ("exact small count", exact_small_count),
        ("asymptotic validation", asymptotic_validation),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        failed += usize::from(!v.passed);
        println!("{} criterion {:>2} ({name}): {}", if v.passed { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
