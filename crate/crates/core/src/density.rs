//! Inverse Fourier transform of a characteristic function to a density and
//! distribution table, and the Kolmogorov-Smirnov comparison against samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeric::NeumaierSum;

/// `|φ(y_max)|` must fall below this before the transform is trusted.
pub const DECAY_TARGET: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub h_t: f64,
    pub h_y: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            t_min: -6.0,
            t_max: 6.0,
            h_t: 0.01,
            h_y: 0.01f64.min(PI / 8.0),
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.t_min < self.t_max) || !(self.h_t > 0.0) || !(self.h_y > 0.0) {
            return bad(format!("degenerate grid {self:?}"));
        }
        let t_abs = self.t_min.abs().max(self.t_max.abs());
        if self.h_y > PI / (t_abs + 1.0) {
            return bad(format!(
                "h_y = {} exceeds pi/(|t|_max + 1) = {}",
                self.h_y,
                PI / (t_abs + 1.0)
            ));
        }
        Ok(())
    }

    /// Number of t points; `t_max` is rounded to the nearest grid point.
    pub fn t_len(&self) -> usize {
        ((self.t_max - self.t_min) / self.h_t).round() as usize + 1
    }

    pub fn t_at(&self, k: usize) -> f64 {
        self.t_min + k as f64 * self.h_t
    }

    /// Widens the t range in unit steps until every sample lies at least one
    /// unit inside it, shrinking `h_y` if the wider range demands it.
    pub fn covering(&self, samples: &[f64]) -> Self {
        let mut g = *self;
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        while lo.is_finite() && lo < g.t_min + 1.0 {
            g.t_min -= 1.0;
        }
        while hi.is_finite() && hi > g.t_max - 1.0 {
            g.t_max += 1.0;
        }
        let t_abs = g.t_min.abs().max(g.t_max.abs());
        g.h_y = g.h_y.min(PI / (t_abs + 1.0));
        g
    }
}

/// The first `y = k * step` with `|φ(y)| < target`, up to `y_cap`.
pub fn find_y_max<F>(phi: F, target: f64, step: f64, y_cap: f64) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    let mut k = 1u64;
    loop {
        let y = k as f64 * step;
        let m = phi(y).norm();
        if m < target {
            return Ok(y);
        }
        if y >= y_cap {
            return Err(Error::DecayNotReached {
                y_max: y,
                modulus: m,
                target,
            });
        }
        k += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub grid: GridSpec,
    pub t: Vec<f64>,
    pub density: Vec<f64>,
    pub cdf: Vec<f64>,
    pub y_max: f64,
    /// `|∫ density - 1|`.
    pub norm_defect: f64,
    /// Largest imaginary part of the two-sided transform.
    pub max_imag: f64,
    pub min_density: f64,
    /// Largest drop between consecutive cdf values (0 when monotone).
    pub max_cdf_drop: f64,
}

/// `density(t) = (1/2π) ∫_{-y_max}^{y_max} φ(y) e^{-iyt} dy` by the
/// trapezoid rule, folded onto `y >= 0`. `φ(-y)` is evaluated rather than
/// assumed, so the imaginary part doubles as a Hermitian-symmetry check.
pub fn inverse_transform<F>(
    phi: F,
    grid: &GridSpec,
    y_max: f64,
    exec: Exec,
) -> Result<DistributionTable>
where
    F: Fn(f64) -> Complex64 + Sync + Send,
{
    grid.validate()?;
    let end = phi(y_max).norm().max(phi(-y_max).norm());
    if !(end < DECAY_TARGET) {
        return Err(Error::DecayNotReached {
            y_max,
            modulus: end,
            target: DECAY_TARGET,
        });
    }
    let ny = (y_max / grid.h_y).round() as usize;
    let ys: Vec<f64> = (0..=ny).map(|k| k as f64 * grid.h_y).collect();
    // (φ(y) + φ(-y), φ(y) - φ(-y)) with trapezoid weights; y = 0 counted once
    let folded: Vec<(Complex64, Complex64)> = exec.map(&ys, |&y| {
        let (a, b) = (phi(y), phi(-y));
        let w = if y == ys[ny] { 0.5 } else { 1.0 };
        let s = if y == 0.0 { 0.5 } else { 1.0 };
        ((a + b) * w * s, (a - b) * w * s)
    });
    let scale = grid.h_y / (2.0 * PI);
    let n_t = grid.t_len();
    let values: Vec<(f64, f64)> = exec.map_range(0..n_t, |k| {
        let t = grid.t_at(k);
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        for (y, (s, d)) in ys.iter().zip(&folded) {
            let (sn, cs) = (y * t).sin_cos();
            // φ(y)e^{-iyt} + φ(-y)e^{iyt} = s cos(yt) - i d sin(yt)
            re.add(s.re * cs + d.im * sn);
            im.add(s.im * cs - d.re * sn);
        }
        (re.value() * scale, im.value() * scale)
    });
    let density: Vec<f64> = values.iter().map(|v| v.0).collect();
    let max_imag = values.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
    let max_density = density.iter().copied().fold(f64::MIN, f64::max);
    if max_imag >= 1e-8 * max_density {
        return Err(Error::Invariant(format!(
            "imaginary part {max_imag} of the density is not below 1e-8 * {max_density}"
        )));
    }

    let mut cdf = Vec::with_capacity(n_t);
    let mut acc = NeumaierSum::new();
    cdf.push(0.0);
    for w in density.windows(2) {
        acc.add(0.5 * grid.h_t * (w[0] + w[1]));
        cdf.push(acc.value());
    }
    let last = *cdf.last().unwrap();
    let max_cdf_drop = cdf.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
    Ok(DistributionTable {
        grid: *grid,
        t: (0..n_t).map(|k| grid.t_at(k)).collect(),
        min_density: density.iter().copied().fold(f64::MAX, f64::min),
        density,
        cdf,
        y_max,
        norm_defect: (last - 1.0).abs(),
        max_imag,
        max_cdf_drop,
    })
}

/// Linear interpolation of the cdf, clamped to `[0, 1]`.
pub fn cdf_eval(table: &DistributionTable, z: f64) -> f64 {
    let t = &table.t;
    if z <= t[0] {
        return 0.0;
    }
    if z >= t[t.len() - 1] {
        return 1.0;
    }
    let k = (t.partition_point(|&s| s <= z) - 1).min(t.len() - 2);
    let f = (z - t[k]) / (t[k + 1] - t[k]);
    (table.cdf[k] + f * (table.cdf[k + 1] - table.cdf[k])).clamp(0.0, 1.0)
}

/// Smallest grid-interpolated `z` with `cdf_eval(z) >= p`.
pub fn quantile(table: &DistributionTable, p: f64) -> f64 {
    let c = &table.cdf;
    let k = c.partition_point(|&v| v < p);
    if k == 0 {
        return table.t[0];
    }
    if k == c.len() {
        return table.t[c.len() - 1];
    }
    let (lo, hi) = (c[k - 1], c[k]);
    let f = if hi > lo { (p - lo) / (hi - lo) } else { 0.0 };
    table.t[k - 1] + f * (table.t[k] - table.t[k - 1])
}

/// Two-sided Kolmogorov-Smirnov distance between the samples' ECDF and the
/// table.
pub fn ks_distance(samples: &[f64], table: &DistributionTable) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf_eval(table, x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max))
}
