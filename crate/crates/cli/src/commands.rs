use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use quartic_hecke::charfn::{
    band_primes, fourth_root_sum, local_factor, mtilde_series, CharFnParams, EulerProduct, PhiEval,
    SeriesCutoffs,
};
use quartic_hecke::density::{
    find_y_max, inverse_transform, ks_distance, DistributionTable, GridSpec, DECAY_TARGET,
};
use quartic_hecke::exec::with_threads;
use quartic_hecke::gaussint::{enumerate_c, primes_up_to};
use quartic_hecke::lfunc::{
    density_constant, l_value, s_count, weighted_extent, EmpiricalSample, Ensemble, LValueParams,
    DEFAULT_ZERO_THRESHOLD, MIN_CUTOFF,
};
use quartic_hecke::quartic::{chi_c, symbol};
use quartic_hecke::report::{g17, mtilde_csv, phi_csv, samples_csv, table_csv, Csv};
use quartic_hecke::{Exec, FamilyElement, GaussInt, QuarticValue};
use serde::Serialize;

use crate::config::{Config, Section};
use crate::{Cli, Command, TableArgs, YGrid};

const DEFAULT_P: u64 = 100_000;
/// Give up on `|φ| < 10^-8` beyond this `y`.
const Y_SEARCH_CAP: f64 = 100_000.0;

/// `Ok(false)` means the command ran but a check failed.
pub fn run(cli: Cli) -> Result<bool> {
    let cfg = Config::load(cli.config.as_deref())?;
    let threads = match cli.threads {
        Some(n) => Some(n),
        None => cfg.top::<usize>("threads")?,
    };
    match threads {
        Some(0) => bail!("--threads must be at least 1"),
        Some(n) => with_threads(n, || dispatch(cli.command, &cfg)),
        None => dispatch(cli.command, &cfg),
    }
}

fn dispatch(cmd: Command, cfg: &Config) -> Result<bool> {
    match cmd {
        Command::Symbol(a) => {
            let v = symbol(a.m, a.n).with_context(|| format!("symbol ({}/{})_4", a.m, a.n))?;
            println!("{v}");
        }
        Command::Primes(a) => {
            let sec = cfg.section("primes")?;
            let limit: u64 = sec.require(a.limit, "limit")?;
            let mut csv = Csv::new(&["gen", "norm", "degree"]);
            for p in primes_up_to(limit) {
                csv.push(vec![
                    p.gen.to_string(),
                    p.norm.to_string(),
                    p.degree.to_string(),
                ]);
            }
            emit(sec.pick_opt(a.out, "out")?.as_deref(), &csv.render())?;
        }
        Command::Family(a) => {
            let sec = cfg.section("family")?;
            let y: u64 = sec.require(a.y, "y")?;
            let mut csv = Csv::new(&["c", "norm"]);
            for c in enumerate_c(y) {
                csv.push(vec![c.c.to_string(), c.norm.to_string()]);
            }
            emit(sec.pick_opt(a.out, "out")?.as_deref(), &csv.render())?;
        }
        Command::Lvalue(a) => {
            let sec = cfg.section("lvalue")?;
            let c =
                FamilyElement::new(sec.require(a.c, "c")?).context("c is not a family member")?;
            let sigma = sec.require(a.sigma, "sigma")?;
            let p = LValueParams {
                sigma,
                cutoff_x: sec.pick(a.cutoff_x, "cutoff_x", (c.norm as f64).max(MIN_CUTOFF))?,
                zero_threshold: sec.pick(
                    a.zero_threshold,
                    "zero_threshold",
                    DEFAULT_ZERO_THRESHOLD,
                )?,
            };
            let l = l_value(&c, &p)?;
            let s = EmpiricalSample::from_l_value(c, l, p.zero_threshold);
            let mut csv = Csv::new(&[
                "c", "norm", "sigma", "cutoff_x", "re_l", "im_l", "script_l", "excluded",
            ]);
            csv.push(vec![
                c.c.to_string(),
                c.norm.to_string(),
                g17(sigma),
                g17(p.cutoff_x),
                g17(l.re),
                g17(l.im),
                s.script_l.map(g17).unwrap_or_default(),
                (s.excluded as u8).to_string(),
            ]);
            print!("{}", csv.render());
        }
        Command::Phi(a) => {
            let sec = cfg.section("phi")?;
            let sigma = sec.require(a.sigma, "sigma")?;
            let ys = y_grid(&sec, a.grid)?;
            let p = CharFnParams::new(
                sigma,
                sec.pick(a.prime_cutoff_p, "prime_cutoff_p", DEFAULT_P)?,
            )?;
            let prod = EulerProduct::new(p)?;
            let rows: Vec<PhiEval> = ys
                .iter()
                .map(|&y| prod.eval_with(y, Exec::default()))
                .collect();
            emit(
                sec.pick_opt(a.out, "out")?.as_deref(),
                &phi_csv(&rows).render(),
            )?;
        }
        Command::Mtilde(a) => {
            let sec = cfg.section("mtilde")?;
            let sigma = sec.require(a.sigma, "sigma")?;
            let ys = y_grid(&sec, a.grid)?;
            let cut = SeriesCutoffs {
                r_max: sec.pick(a.r_max, "r_max", 60)?,
                ideal_norm_cap: sec.pick(a.ideal_norm_cap, "ideal_norm_cap", 1_000_000)?,
            };
            let rows = Exec::default()
                .map(&ys, |&y| mtilde_series(sigma, y, &cut))
                .into_iter()
                .collect::<quartic_hecke::Result<Vec<_>>>()?;
            emit(
                sec.pick_opt(a.out, "out")?.as_deref(),
                &mtilde_csv(&rows).render(),
            )?;
        }
        Command::Density(a) => {
            let sec = cfg.section("density")?;
            let tp = table_params(&sec, &a.table)?;
            let out_dir: PathBuf = sec.pick(a.out_dir, "out_dir", PathBuf::from("."))?;
            let table = build_table(&tp, &tp.grid)?;
            write_table(&out_dir, &tp, &table)?;
        }
        Command::Experiment(a) => experiment(cfg, a)?,
        Command::Verify(_) => return Ok(verify()),
    }
    Ok(true)
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn y_grid(sec: &Section, g: YGrid) -> Result<Vec<f64>> {
    if let Some(ys) = sec.pick_opt(g.ys, "ys")? {
        return Ok(ys);
    }
    let range: String = sec
        .pick_opt(g.y_range, "y_range")?
        .ok_or_else(|| anyhow!("give --ys or --y-range start:stop:step"))?;
    parse_range(&range)
}

/// `start:stop:step`, points `start + k step` up to `stop` inclusive.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad range `{s}`"))?;
    let [start, stop, step] = parts[..] else {
        bail!("range `{s}` must be start:stop:step");
    };
    if !(step > 0.0) || stop < start {
        bail!("range `{s}` needs step > 0 and stop >= start");
    }
    let n = ((stop - start) / step + 1e-9).floor() as u64;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

#[derive(Clone, Debug, Serialize)]
struct TableParams {
    sigma: f64,
    prime_cutoff_p: u64,
    grid: GridSpec,
}

fn table_params(sec: &Section, a: &TableArgs) -> Result<TableParams> {
    let d = GridSpec::default();
    let grid = GridSpec {
        t_min: sec.pick(a.t_min, "t_min", d.t_min)?,
        t_max: sec.pick(a.t_max, "t_max", d.t_max)?,
        h_t: sec.pick(a.h_t, "h_t", d.h_t)?,
        h_y: sec.pick(a.h_y, "h_y", d.h_y)?,
    };
    grid.validate()?;
    let tp = TableParams {
        sigma: sec.require(a.sigma, "sigma")?,
        prime_cutoff_p: sec.pick(a.prime_cutoff_p, "prime_cutoff_p", DEFAULT_P)?,
        grid,
    };
    CharFnParams::new(tp.sigma, tp.prime_cutoff_p)?;
    Ok(tp)
}

fn build_table(tp: &TableParams, grid: &GridSpec) -> Result<DistributionTable> {
    let prod = EulerProduct::new(CharFnParams::new(tp.sigma, tp.prime_cutoff_p)?)?;
    let phi = |y: f64| prod.eval(y).value;
    let y_max = find_y_max(phi, DECAY_TARGET, 1.0, Y_SEARCH_CAP)?;
    Ok(inverse_transform(phi, grid, y_max, Exec::default())?)
}

#[derive(Serialize)]
struct TableSidecar<'a> {
    sigma: f64,
    prime_cutoff_p: u64,
    grid: &'a GridSpec,
    y_max: f64,
    norm_defect: f64,
    max_imag: f64,
    min_density: f64,
    max_cdf_drop: f64,
}

fn write_table(dir: &Path, tp: &TableParams, t: &DistributionTable) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    emit(Some(&dir.join("table.csv")), &table_csv(t).render())?;
    let side = TableSidecar {
        sigma: tp.sigma,
        prime_cutoff_p: tp.prime_cutoff_p,
        grid: &t.grid,
        y_max: t.y_max,
        norm_defect: t.norm_defect,
        max_imag: t.max_imag,
        min_density: t.min_density,
        max_cdf_drop: t.max_cdf_drop,
    };
    emit(
        Some(&dir.join("table.json")),
        &(serde_json::to_string_pretty(&side)? + "\n"),
    )
}

#[derive(Serialize)]
struct CharFnRow {
    y: f64,
    re_empirical: f64,
    im_empirical: f64,
    re_phi: f64,
    im_phi: f64,
    abs_dev: f64,
}

#[derive(Serialize)]
struct Summary {
    sigma: f64,
    big_y: u64,
    members: usize,
    excluded: usize,
    ks_distance: f64,
    sample_min: f64,
    sample_max: f64,
    table: TableParams,
    y_max: f64,
    norm_defect: f64,
    min_density: f64,
    max_imag: f64,
    char_fn: Option<Vec<CharFnRow>>,
    seconds_ensemble: f64,
    seconds_table: f64,
}

fn experiment(cfg: &Config, a: crate::ExperimentArgs) -> Result<()> {
    let sec = cfg.section("experiment")?;
    let mut tp = table_params(&sec, &a.table)?;
    let big_y: u64 = sec.require(a.big_y, "big_y")?;
    let ys: Option<Vec<f64>> = sec.pick_opt(a.char_fn_ys, "char_fn_ys")?;
    let out_dir: PathBuf = sec.pick(a.out_dir, "out_dir", PathBuf::from("."))?;

    let start = Instant::now();
    let max_norm = match ys {
        Some(_) => weighted_extent(big_y as f64).max(big_y),
        None => big_y,
    };
    let ens =
        Ensemble::build(tp.sigma, max_norm, Exec::default()).context("building the ensemble")?;
    let seconds_ensemble = start.elapsed().as_secs_f64();
    let members = ens.up_to(big_y);
    let values = ens.values(big_y);
    if values.is_empty() {
        bail!("no usable family members with N(c) <= {big_y}");
    }

    let start = Instant::now();
    tp.grid = tp.grid.covering(&values);
    let table = build_table(&tp, &tp.grid)?;
    let ks = ks_distance(&values, &table)?;
    let seconds_table = start.elapsed().as_secs_f64();

    let char_fn = match ys {
        None => None,
        Some(ys) => {
            let prod = EulerProduct::new(CharFnParams::new(tp.sigma, tp.prime_cutoff_p)?)?;
            let mut rows = Vec::new();
            for y in ys {
                let e: Complex64 = ens.char_fn(y, big_y as f64)?;
                let p = prod.eval(y).value;
                rows.push(CharFnRow {
                    y,
                    re_empirical: e.re,
                    im_empirical: e.im,
                    re_phi: p.re,
                    im_phi: p.im,
                    abs_dev: (e - p).norm(),
                });
            }
            Some(rows)
        }
    };

    std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    emit(
        Some(&out_dir.join("samples.csv")),
        &samples_csv(members).render(),
    )?;
    emit(
        Some(&out_dir.join("table.csv")),
        &table_csv(&table).render(),
    )?;
    let summary = Summary {
        sigma: tp.sigma,
        big_y,
        members: members.len(),
        excluded: ens.excluded_count(big_y),
        ks_distance: ks,
        sample_min: values.iter().copied().fold(f64::INFINITY, f64::min),
        sample_max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        y_max: table.y_max,
        norm_defect: table.norm_defect,
        min_density: table.min_density,
        max_imag: table.max_imag,
        table: tp,
        char_fn,
        seconds_ensemble,
        seconds_table,
    };
    emit(
        Some(&out_dir.join("summary.json")),
        &(serde_json::to_string_pretty(&summary)? + "\n"),
    )
}

type Check = (&'static str, fn() -> Result<String>);

/// A fast pass over the library's invariants at small sizes.
fn verify() -> bool {
    let checks: Vec<Check> = vec![
        ("symbol examples", || {
            let g = |s: &str| s.parse::<GaussInt>().unwrap();
            let got = [
                symbol(g("i"), g("-1-2i"))?,
                symbol(g("1"), g("1"))?,
                symbol(g("5"), g("-1-2i"))?,
            ];
            ensure(
                got == [QuarticValue::root(1), QuarticValue::ONE, QuarticValue::Zero],
                format!("{got:?}"),
            )
        }),
        ("unit triviality on the family", || {
            let fam = enumerate_c(20_000);
            let bad = fam
                .iter()
                .filter(|c| {
                    chi_c(c, GaussInt::I).ok() != Some(QuarticValue::ONE)
                        || chi_c(c, GaussInt::ONE_PLUS_I).ok() != Some(QuarticValue::ONE)
                })
                .count();
            ensure(bad == 0, format!("{} members, {bad} violations", fam.len()))
        }),
        ("family counts", || {
            ensure(
                s_count(200) == 0 && s_count(225) == 1,
                format!("s_count(225) = {}", s_count(225)),
            )
        }),
        ("density constant", || {
            let k = density_constant();
            ensure((k - 0.010862).abs() < 1e-5, format!("{k}"))
        }),
        ("orthogonality of fourth roots", || {
            let ok = (-8..=8)
                .all(|k| fourth_root_sum(k) == GaussInt::new(if k % 4 == 0 { 4 } else { 0 }, 0));
            ensure(ok, "k in [-8, 8]".into())
        }),
        ("local factors and phi", || {
            let prod = EulerProduct::new(CharFnParams::new(1.0, 100_000)?)?;
            let at_zero = prod.eval(0.0).value;
            let mut worst = 0.0f64;
            for k in -200..=200 {
                let y = k as f64 * 0.5;
                let (a, b) = (prod.eval(y).value, prod.eval(-y).value);
                worst = worst.max((a - b.conj()).norm());
                if a.norm() > 1.0 || local_factor(1.0, y, 5)?.norm() > 1.0 {
                    return Ok(format!("FAIL: modulus above 1 at y = {y}"));
                }
            }
            ensure(
                at_zero == Complex64::new(1.0, 0.0) && worst == 0.0,
                format!("phi(0) = {at_zero}, hermitian defect {worst:e}"),
            )
        }),
        ("Euler product vs Dirichlet series", || {
            let cut = SeriesCutoffs {
                r_max: 60,
                ideal_norm_cap: 100_000,
            };
            let prod = EulerProduct::new(CharFnParams::new(1.0, 1_000_000)?)?;
            let mut worst = 0.0f64;
            for y in [0.5, 1.0, 2.0] {
                let (p, m) = (prod.eval(y), mtilde_series(1.0, y, &cut)?);
                let d = (p.value - m.value).norm();
                if d >= p.tail_bound + m.tail_bound {
                    return Ok(format!("FAIL: y = {y}: {d:e} exceeds reported tails"));
                }
                worst = worst.max(d);
            }
            ensure(true, format!("max difference {worst:.2e}"))
        }),
        ("band bound", || {
            let band = band_primes(0.75, 1000.0)?;
            let worst = band
                .iter()
                .map(|p| local_factor(0.75, 1000.0, p.norm).map(|m| m.norm()))
                .try_fold(0.0f64, |a, m| m.map(|m| a.max(m)))?;
            ensure(
                !band.is_empty() && worst <= 0.8,
                format!("{} primes, max {worst:.3}", band.len()),
            )
        }),
        ("gaussian quadrature", || {
            let phi = |y: f64| Complex64::new((-0.5 * y * y).exp(), 0.0);
            let y_max = find_y_max(phi, DECAY_TARGET, 0.5, 100.0)?;
            let t = inverse_transform(phi, &GridSpec::default(), y_max, Exec::default())?;
            let err =
                t.t.iter()
                    .zip(&t.density)
                    .map(|(x, d)| {
                        (d - (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()).abs()
                    })
                    .fold(0.0, f64::max);
            ensure(err < 1e-6, format!("sup error {err:.1e}"))
        }),
    ];
    let mut all = true;
    for (name, check) in checks {
        let (ok, detail) = match check() {
            Ok(d) if d.starts_with("FAIL") => (false, d),
            Ok(d) => (true, d),
            Err(e) => (false, format!("error: {e:#}")),
        };
        all &= ok;
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
    all
}

fn ensure(ok: bool, detail: String) -> Result<String> {
    Ok(if ok {
        detail
    } else {
        format!("FAIL: {detail}")
    })
}
