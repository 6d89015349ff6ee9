//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! `cargo test --test acceptance` runs everything; numeric arguments select
//! criteria, e.g. `cargo test --test acceptance -- 1 7 9`. CSV artifacts and
//! `summary.json` land in `$CARGO_TARGET_TMPDIR/acceptance`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64;
use quartic_hecke::charfn::{
    band_primes, decay_check, fit_decay_exponent, local_factor, mtilde_series, CharFnParams,
    EulerProduct, SeriesCutoffs,
};
use quartic_hecke::density::{find_y_max, inverse_transform, ks_distance, GridSpec, DECAY_TARGET};
use quartic_hecke::exec::with_threads;
use quartic_hecke::gaussint::{
    enumerate_c, factor, first_quadrant_by_norm, gcd, primary_normalize, primes_up_to,
};
use quartic_hecke::lfunc::{density_constant, s_count, weighted_extent, Ensemble};
use quartic_hecke::quartic::{chi_c, symbol, symbol_prime_oracle};
use quartic_hecke::report::{g17, Csv};
use quartic_hecke::{Exec, GaussInt, QuarticValue};
use serde_json::{json, Value};

struct Outcome {
    pass: bool,
    detail: String,
    metrics: Value,
}

fn outcome(pass: bool, detail: String, metrics: Value) -> Outcome {
    Outcome {
        pass,
        detail,
        metrics,
    }
}

/// Primary generators of the odd ideals of norm `<= bound`.
fn primary_up_to(bound: u64) -> Vec<GaussInt> {
    first_quadrant_by_norm(bound)
        .filter(|z| z.is_odd())
        .map(|z| primary_normalize(z).unwrap().1)
        .collect()
}

fn oracle(m: GaussInt, n: GaussInt) -> QuarticValue {
    let f = factor(n).unwrap();
    f.factors.iter().fold(QuarticValue::ONE, |acc, &(p, e)| {
        acc * symbol_prime_oracle(m, p.gen).unwrap().pow(e)
    })
}

fn c1() -> Outcome {
    let ms = primary_up_to(1_000);
    let ns = primary_up_to(10_000);
    let (mut cases, mut bad) = (0u64, 0u64);
    for &n in &ns {
        let f = factor(n).unwrap();
        for &m in &ms {
            if !gcd(m, n).unwrap().is_unit() {
                continue;
            }
            cases += 1;
            let expect = f.factors.iter().fold(QuarticValue::ONE, |acc, &(p, e)| {
                acc * symbol_prime_oracle(m, p.gen).unwrap().pow(e)
            });
            if symbol(m, n).unwrap() != expect {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!("{cases} coprime primary pairs, {bad} mismatches"),
        json!({"cases": cases, "mismatches": bad}),
    )
}

fn c2() -> Outcome {
    let primes: Vec<GaussInt> = primes_up_to(10_000)
        .into_iter()
        .filter(|p| p.is_odd())
        .map(|p| primary_normalize(p.gen).unwrap().1)
        .collect();
    let (mut cases, mut bad) = (0u64, 0u64);
    for (i, &m) in primes.iter().enumerate() {
        let qm = (m.norm().unwrap() - 1) / 4;
        for &n in &primes[i + 1..] {
            let qn = (n.norm().unwrap() - 1) / 4;
            let sign = if qm * qn % 2 == 0 {
                QuarticValue::ONE
            } else {
                QuarticValue::root(2)
            };
            cases += 1;
            let fast_ok = symbol(m, n).unwrap() == symbol(n, m).unwrap() * sign;
            let oracle_ok = oracle(m, n) == oracle(n, m) * sign;
            if !(fast_ok && oracle_ok) {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!("{cases} primary prime pairs, {bad} violations"),
        json!({"cases": cases, "violations": bad}),
    )
}

fn c3() -> Outcome {
    let family = enumerate_c(100_000);
    let bad = family
        .iter()
        .filter(|c| {
            chi_c(c, GaussInt::I).unwrap() != QuarticValue::ONE
                || chi_c(c, GaussInt::ONE_PLUS_I).unwrap() != QuarticValue::ONE
        })
        .count();
    outcome(
        bad == 0 && !family.is_empty(),
        format!("{} family members, {bad} violations", family.len()),
        json!({"members": family.len(), "violations": bad}),
    )
}

const C4_YS: [f64; 3] = [0.5, 1.0, 2.0];

fn c4_rows(exec: Exec) -> Vec<(f64, f64, Complex64, Complex64)> {
    let cut = SeriesCutoffs {
        r_max: 60,
        ideal_norm_cap: 1_000_000,
    };
    let mut rows = Vec::new();
    for sigma in [1.0, 0.75] {
        let prod = EulerProduct::new(CharFnParams::new(sigma, 1_000_000).unwrap()).unwrap();
        for y in C4_YS {
            let p = prod.eval_with(y, exec).value;
            let m = mtilde_series(sigma, y, &cut).unwrap().value;
            rows.push((sigma, y, p, m));
        }
    }
    rows
}

fn c4_csv(exec: Exec) -> String {
    let mut csv = Csv::new(&[
        "sigma",
        "y",
        "re_phi",
        "im_phi",
        "re_mtilde",
        "im_mtilde",
        "abs_diff",
    ]);
    for (s, y, p, m) in c4_rows(exec) {
        csv.push(vec![
            g17(s),
            g17(y),
            g17(p.re),
            g17(p.im),
            g17(m.re),
            g17(m.im),
            g17((p - m).norm()),
        ]);
    }
    csv.render()
}

fn c4() -> Outcome {
    let rows = c4_rows(Exec::default());
    let mut pass = true;
    let mut parts = Vec::new();
    let mut metrics = Vec::new();
    for (s, y, p, m) in &rows {
        let tol = if *s == 1.0 { 1e-4 } else { 1e-3 };
        let d = (p - m).norm();
        pass &= d < tol;
        parts.push(format!(
            "s={s} y={y}: {d:.2e}{}",
            if d < tol { "" } else { "!" }
        ));
        metrics.push(json!({"sigma": s, "y": y, "abs_diff": d, "tol": tol}));
    }
    outcome(pass, parts.join(", "), Value::Array(metrics))
}

fn density_table(sigma: f64, grid: &GridSpec) -> quartic_hecke::density::DistributionTable {
    let prod = EulerProduct::new(CharFnParams::new(sigma, 100_000).unwrap()).unwrap();
    let phi = |y: f64| prod.eval(y).value;
    let y_max = find_y_max(phi, DECAY_TARGET, 1.0, 10_000.0).unwrap();
    inverse_transform(phi, grid, y_max, Exec::default()).unwrap()
}

fn c5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut metrics = Vec::new();
    for sigma in [0.75, 1.0] {
        let e = EulerProduct::new(CharFnParams::new(sigma, 1_000_000).unwrap())
            .unwrap()
            .eval(0.0);
        let at_zero = (e.value - 1.0).norm();
        let t = density_table(sigma, &GridSpec::default());
        let ok = at_zero < 1e-12 && t.norm_defect < 1e-3 && t.min_density > -1e-3;
        pass &= ok;
        parts.push(format!(
            "s={sigma}: |phi(0)-1|={at_zero:.1e} defect={:.2e} min={:.2e}",
            t.norm_defect, t.min_density
        ));
        metrics.push(
            json!({"sigma": sigma, "phi0_error": at_zero, "norm_defect": t.norm_defect,
            "min_density": t.min_density, "y_max": t.y_max}),
        );
    }
    outcome(pass, parts.join(", "), Value::Array(metrics))
}

fn c6() -> Outcome {
    let phi = |y: f64| Complex64::new((-0.5 * y * y).exp(), 0.0);
    let y_max = find_y_max(phi, DECAY_TARGET, 0.5, 100.0).unwrap();
    let t = inverse_transform(phi, &GridSpec::default(), y_max, Exec::default()).unwrap();
    let err =
        t.t.iter()
            .zip(&t.density)
            .filter(|(x, _)| x.abs() <= 5.0)
            .map(|(x, d)| (d - (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()).abs())
            .fold(0.0, f64::max);
    outcome(
        err < 1e-6,
        format!("sup error {err:.2e}"),
        json!({"sup_error": err}),
    )
}

fn c7() -> Outcome {
    let band = band_primes(0.75, 1000.0).unwrap();
    let worst = band
        .iter()
        .map(|p| local_factor(0.75, 1000.0, p.norm).unwrap().norm())
        .fold(0.0, f64::max);
    outcome(
        !band.is_empty() && worst <= 0.8,
        format!(
            "{} band primes, max |local factor| = {worst:.4}",
            band.len()
        ),
        json!({"band_size": band.len(), "max_local_factor": worst}),
    )
}

fn c8() -> Outcome {
    let p = CharFnParams::new(1.0, 1_000_000).unwrap();
    let head = decay_check(1.0, &[10.0, 50.0, 100.0, 200.0], &p, Exec::default()).unwrap();
    let decreasing = head.windows(2).all(|w| w[1].abs_phi < w[0].abs_phi);
    let at_200 = head[3].abs_phi;
    let ys: Vec<f64> = (0..=10)
        .map(|k| 50.0 * 10f64.powf(k as f64 / 10.0))
        .collect();
    let slope = fit_decay_exponent(&decay_check(1.0, &ys, &p, Exec::default()).unwrap()).unwrap();
    let pass = decreasing && at_200 < 1e-3 && slope > 0.5 && slope < 1.2;
    outcome(
        pass,
        format!("decreasing={decreasing}, |phi(200)|={at_200:.2e}, fitted exponent {slope:.3}"),
        json!({"abs_phi": head.iter().map(|r| [r.y, r.abs_phi]).collect::<Vec<_>>(),
            "fitted_exponent": slope}),
    )
}

fn c9_values() -> (u64, f64, f64) {
    let count = s_count(1_000_000);
    let k = density_constant();
    (count, k, count as f64 / (k * 1e6))
}

fn c9_csv() -> String {
    let (count, k, ratio) = c9_values();
    let mut csv = Csv::new(&["Y", "s_count", "density_constant", "ratio"]);
    csv.push(vec![
        "1000000".into(),
        count.to_string(),
        g17(k),
        g17(ratio),
    ]);
    csv.render()
}

fn c9() -> Outcome {
    let (count, k, ratio) = c9_values();
    outcome(
        (0.93..=1.07).contains(&ratio),
        format!("s_count = {count}, constant = {k:.6}, ratio = {ratio:.4}"),
        json!({"s_count": count, "density_constant": k, "ratio": ratio}),
    )
}

const C10_BIG_YS: [f64; 2] = [1e3, 1e5];

fn build_ensemble(threads: usize) -> Ensemble {
    with_threads(threads, || {
        Ensemble::build(1.0, weighted_extent(1e5), Exec::Parallel).unwrap()
    })
}

fn ensemble() -> &'static Ensemble {
    static E: OnceLock<Ensemble> = OnceLock::new();
    E.get_or_init(|| build_ensemble(1))
}

fn c10_csv(ens: &Ensemble) -> String {
    let prod = EulerProduct::new(CharFnParams::new(1.0, 1_000_000).unwrap()).unwrap();
    let mut csv = Csv::new(&[
        "Y",
        "y",
        "re_empirical",
        "im_empirical",
        "re_phi",
        "im_phi",
        "abs_dev",
    ]);
    for big_y in C10_BIG_YS {
        for y in C4_YS {
            let e = ens.char_fn(y, big_y).unwrap();
            let p = prod.eval(y).value;
            csv.push(vec![
                g17(big_y),
                g17(y),
                g17(e.re),
                g17(e.im),
                g17(p.re),
                g17(p.im),
                g17((e - p).norm()),
            ]);
        }
    }
    csv.render()
}

fn c10() -> Outcome {
    let ens = ensemble();
    let prod = EulerProduct::new(CharFnParams::new(1.0, 1_000_000).unwrap()).unwrap();
    let mut improved = 0;
    let mut rows = Vec::new();
    for y in C4_YS {
        let p = prod.eval(y).value;
        let d: Vec<f64> = C10_BIG_YS
            .iter()
            .map(|&b| (ens.char_fn(y, b).unwrap() - p).norm())
            .collect();
        if d[1] < d[0] {
            improved += 1;
        }
        rows.push(json!({"y": y, "dev_Y1e3": d[0], "dev_Y1e5": d[1]}));
    }
    let detail = rows
        .iter()
        .map(|r| {
            format!(
                "y={}: {:.2e} -> {:.2e}",
                r["y"],
                r["dev_Y1e3"].as_f64().unwrap(),
                r["dev_Y1e5"].as_f64().unwrap()
            )
        })
        .collect::<Vec<_>>()
        .join(", ");
    outcome(
        improved >= 2,
        format!(
            "{improved}/3 improved; {detail}; excluded = {}",
            ens.excluded_count(ens.max_norm)
        ),
        json!({"deviations": rows, "improved": improved, "members": ens.samples.len(),
            "excluded": ens.excluded_count(ens.max_norm)}),
    )
}

fn c11() -> Outcome {
    let ens = ensemble();
    let small = ens.values(1_000);
    let large = ens.values(100_000);
    let grid = GridSpec::default().covering(&large);
    let table = density_table(1.0, &grid);
    let ks_small = ks_distance(&small, &table).unwrap();
    let ks_large = ks_distance(&large, &table).unwrap();
    outcome(
        ks_large < ks_small,
        format!(
            "KS(Y=1e3, n={}) = {ks_small:.4}, KS(Y=1e5, n={}) = {ks_large:.4}",
            small.len(),
            large.len()
        ),
        json!({"ks_Y1e3": ks_small, "n_Y1e3": small.len(), "ks_Y1e5": ks_large, "n_Y1e5": large.len()}),
    )
}

fn c12() -> Outcome {
    let mut digests: BTreeMap<usize, (String, String, String)> = BTreeMap::new();
    for threads in [1usize, 4, 8] {
        let c4 = with_threads(threads, || c4_csv(Exec::Parallel));
        let c9 = with_threads(threads, c9_csv);
        let c10 = if threads == 1 {
            c10_csv(ensemble())
        } else {
            c10_csv(&build_ensemble(threads))
        };
        digests.insert(threads, (c4, c9, c10));
    }
    let base = &digests[&1];
    let same = digests.values().all(|d| d == base);
    write_artifact("c4.csv", &base.0);
    write_artifact("c9.csv", &base.1);
    write_artifact("c10.csv", &base.2);
    outcome(
        same,
        format!("criteria 4, 9, 10 CSV byte-identical across 1/4/8 threads: {same}"),
        json!({"identical": same}),
    )
}

fn out_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).expect("artifact directory");
    dir
}

fn write_artifact(name: &str, body: &str) {
    std::fs::write(out_dir().join(name), body).expect("write artifact");
}

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 12] = [
    (1, "symbol oracle equivalence", c1),
    (2, "reciprocity law", c2),
    (3, "unit triviality", c3),
    (4, "characteristic-function identity", c4),
    (5, "normalization", c5),
    (6, "synthetic quadrature", c6),
    (7, "band bound", c7),
    (8, "decay", c8),
    (9, "counting constant", c9),
    (10, "averaged characteristic function trend", c10),
    (11, "distribution convergence trend", c11),
    (12, "determinism", c12),
];

fn main() {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut summary = serde_json::Map::new();
    let mut failed = Vec::new();
    for (id, name, run) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} ({name}): {verdict}  {}  [{secs:.1}s]",
            o.detail
        );
        if !o.pass {
            failed.push(id);
        }
        summary.insert(
            id.to_string(),
            json!({"name": name, "pass": o.pass, "detail": o.detail, "seconds": secs, "metrics": o.metrics}),
        );
    }
    let path = out_dir().join("summary.json");
    std::fs::write(
        &path,
        serde_json::to_string_pretty(&Value::Object(summary)).unwrap(),
    )
    .unwrap();
    println!("summary written to {}", path.display());
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
