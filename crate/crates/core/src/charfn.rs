//! The limiting characteristic function `φ_σ(y)`: as an Euler product over
//! odd prime ideals, and as the Dirichlet series `M̃_σ(y)` over triples of
//! odd ideals. Plus the band-prime and decay diagnostics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gaussint::{primes_up_to, GaussFactorization, GaussInt, PrimeIdealRec};
use crate::numeric::{ComplexSum, NeumaierSum};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharFnParams {
    pub sigma: f64,
    /// Every prime ideal of norm `<= prime_cutoff_p` enters the product.
    pub prime_cutoff_p: u64,
}

impl CharFnParams {
    pub fn new(sigma: f64, prime_cutoff_p: u64) -> Result<Self> {
        let p = Self {
            sigma,
            prime_cutoff_p,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        validate_sigma(self.sigma)?;
        if self.prime_cutoff_p < 3 {
            return Err(Error::InvalidParameter(format!(
                "prime_cutoff_p = {} must be at least 3",
                self.prime_cutoff_p
            )));
        }
        Ok(())
    }
}

fn validate_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.5 && sigma <= 4.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "sigma = {sigma} outside (1/2, 4]"
        )))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesCutoffs {
    /// Largest power of `⟨1+i⟩` kept.
    pub r_max: u32,
    /// Terms with `N(𝔞^4 𝔟^4 𝔪^2) > ideal_norm_cap` are dropped.
    pub ideal_norm_cap: u64,
}

impl SeriesCutoffs {
    pub fn validate(&self) -> Result<()> {
        if self.r_max < 1 || self.ideal_norm_cap < 1 {
            return Err(Error::InvalidParameter(
                "r_max and ideal_norm_cap must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// `H_r(u) = u (u+1) ... (u+r-1) / r!`.
pub fn h_coeff(r: u32, u: Complex64) -> Complex64 {
    (1..=r).fold(Complex64::new(1.0, 0.0), |h, k| {
        h * (u + (k - 1) as f64) / k as f64
    })
}

/// `H_0(u), ..., H_n(u)`.
pub fn h_table(n: u32, u: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut h = Complex64::new(1.0, 0.0);
    out.push(h);
    for k in 1..=n {
        h = h * (u + (k - 1) as f64) / k as f64;
        out.push(h);
    }
    out
}

/// `λ_y(𝔞) = Π H_{α}(iy)` over the prime powers `𝔭^α ∥ 𝔞`.
pub fn lambda_y(y: f64, f: &GaussFactorization) -> Complex64 {
    let u = Complex64::new(0.0, y);
    f.factors
        .iter()
        .map(|&(_, e)| h_coeff(e, u))
        .fold(Complex64::new(1.0, 0.0), |a, b| a * b)
}

/// `Σ_{l=0}^{3} i^{lk}`.
pub fn fourth_root_sum(k: i64) -> GaussInt {
    (0..4).fold(GaussInt::ZERO, |acc, l| {
        acc + GaussInt::ONE.mul_i_pow((l * k).rem_euclid(4) as u8)
    })
}

/// `ln|1 - i^j x|` for `j = 0, 1, 2` (`j = 3` equals `j = 1`).
fn log_moduli(x: f64) -> [f64; 3] {
    [(-x).ln_1p(), 0.5 * (x * x).ln_1p(), x.ln_1p()]
}

/// Local data of one prime norm `q`, independent of `y`.
#[derive(Clone, Copy, Debug)]
struct LocalData {
    /// `q / (q+1)`.
    w: f64,
    logs: [f64; 3],
}

impl LocalData {
    fn new(sigma: f64, q: f64) -> Self {
        Self {
            w: q / (q + 1.0),
            logs: log_moduli(q.powf(-sigma)),
        }
    }

    /// `1/(q+1) + (w/4) Σ_j exp(-2iy ln|1 - i^j q^{-σ}|)`, written as
    /// `1 + (w/4) Σ_j (e^{iθ_j} - 1)` so that small angles lose nothing.
    #[inline]
    fn eval(&self, y: f64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (j, &l) in self.logs.iter().enumerate() {
            let theta = -2.0 * y * l;
            let (sh, ch) = (0.5 * theta).sin_cos();
            let d = Complex64::new(-2.0 * sh * sh, 2.0 * sh * ch);
            s += if j == 1 { d * 2.0 } else { d };
        }
        1.0 + s * (0.25 * self.w)
    }
}

/// The local Euler factor `M̃_{σ,𝔭}(y)` at an odd prime ideal of norm `q`.
pub fn local_factor(sigma: f64, y: f64, q: u64) -> Result<Complex64> {
    if q.is_multiple_of(2) || q < 3 {
        return Err(Error::InvalidParameter(format!(
            "local factor needs an odd prime-ideal norm, got {q}"
        )));
    }
    validate_sigma(sigma)?;
    Ok(LocalData::new(sigma, q as f64).eval(y))
}

/// `exp(-2iy ln(1 - 2^{-σ}))`.
pub fn two_adic_prefactor(sigma: f64, y: f64) -> Complex64 {
    Complex64::cis(-2.0 * y * (-(2f64.powf(-sigma))).ln_1p())
}

/// `Σ_{N(𝔭) > P} 3(1+y^2) N(𝔭)^{-2σ}`, by comparison with
/// `∫_P^∞ t^{-2σ} dt / ln t`.
pub fn euler_tail_exponent(sigma: f64, y: f64, p: f64) -> f64 {
    3.0 * (1.0 + y * y) * p.powf(1.0 - 2.0 * sigma) / ((2.0 * sigma - 1.0) * p.ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiEval {
    pub y: f64,
    pub value: Complex64,
    /// `ln|φ|`, exact even where `value` underflows.
    pub ln_abs: f64,
    /// Estimated `|φ_∞ - φ_P|`.
    pub tail_bound: f64,
}

/// Precomputed truncated Euler product for one `(σ, P)`.
#[derive(Clone, Debug)]
pub struct EulerProduct {
    params: CharFnParams,
    /// One entry per distinct odd prime-ideal norm, ascending.
    locals: Vec<LocalData>,
    /// 2 for split norms (two conjugate ideals), 1 for inert ones.
    multiplicity: Vec<u8>,
}

/// Factors per block; block results are combined in index order.
const BLOCK: usize = 4096;

impl EulerProduct {
    pub fn new(params: CharFnParams) -> Result<Self> {
        params.validate()?;
        let mut norms: Vec<(u64, u8)> = Vec::new();
        for p in arith::primes_up_to(params.prime_cutoff_p) {
            match p % 4 {
                1 => norms.push((p, 2)),
                3 if p * p <= params.prime_cutoff_p => norms.push((p * p, 1)),
                _ => {}
            }
        }
        norms.sort_unstable();
        Ok(Self {
            params,
            locals: norms
                .iter()
                .map(|&(q, _)| LocalData::new(params.sigma, q as f64))
                .collect(),
            multiplicity: norms.iter().map(|&(_, m)| m).collect(),
        })
    }

    pub fn params(&self) -> &CharFnParams {
        &self.params
    }

    /// (unit phase product, Σ ln|M|) over one block.
    fn block(&self, k: usize, y: f64) -> (Complex64, f64) {
        let lo = k * BLOCK;
        let hi = (lo + BLOCK).min(self.locals.len());
        let mut phase = Complex64::new(1.0, 0.0);
        let mut log = NeumaierSum::new();
        for i in lo..hi {
            let m = self.locals[i].eval(y);
            let r = m.norm();
            let mult = self.multiplicity[i];
            let u = m / r;
            phase *= if mult == 2 { u * u } else { u };
            log.add(mult as f64 * r.ln());
        }
        (phase, log.value())
    }

    pub fn eval(&self, y: f64) -> PhiEval {
        self.eval_with(y, Exec::Sequential)
    }

    pub fn eval_with(&self, y: f64, exec: Exec) -> PhiEval {
        let blocks = self.locals.len().div_ceil(BLOCK);
        let parts = exec.map_range(0..blocks, |k| self.block(k, y));
        let mut phase = two_adic_prefactor(self.params.sigma, y);
        let mut log = NeumaierSum::new();
        for (ph, l) in parts {
            // renormalize so rounding in the phase cannot drift the modulus
            phase *= ph;
            phase /= phase.norm();
            log.add(l);
        }
        let ln_abs = log.value();
        let value = phase * ln_abs.exp();
        let t = euler_tail_exponent(self.params.sigma, y, self.params.prime_cutoff_p as f64);
        PhiEval {
            y,
            value,
            ln_abs,
            tail_bound: ln_abs.exp() * t.exp_m1(),
        }
    }
}

/// `φ_σ(y)` truncated at `P`.
pub fn phi_sigma(sigma: f64, y: f64, p: &CharFnParams) -> Result<PhiEval> {
    if p.sigma != sigma {
        return Err(Error::InvalidParameter(format!(
            "sigma = {sigma} disagrees with params.sigma = {}",
            p.sigma
        )));
    }
    Ok(EulerProduct::new(*p)?.eval(y))
}

/// An odd ideal as exponents over a fixed list of odd prime ideals.
#[derive(Clone, Debug)]
struct OddIdeal {
    norm: u64,
    /// `(prime index, exponent)`, ascending index.
    exps: Vec<(usize, u32)>,
}

/// All odd ideals with norm `<= bound`, built as products of `primes`.
fn odd_ideals(primes: &[PrimeIdealRec], bound: u64) -> Vec<OddIdeal> {
    fn rec(
        primes: &[PrimeIdealRec],
        start: usize,
        cur: &mut OddIdeal,
        bound: u64,
        out: &mut Vec<OddIdeal>,
    ) {
        out.push(cur.clone());
        for j in start..primes.len() {
            let q = primes[j].norm;
            if cur.norm > bound / q {
                break;
            }
            let saved = cur.norm;
            let mut e = 0;
            while cur.norm <= bound / q {
                cur.norm *= q;
                e += 1;
                cur.exps.push((j, e));
                rec(primes, j + 1, cur, bound, out);
                cur.exps.pop();
            }
            cur.norm = saved;
        }
    }
    let mut out = Vec::new();
    let mut cur = OddIdeal {
        norm: 1,
        exps: Vec::new(),
    };
    rec(primes, 0, &mut cur, bound, &mut out);
    out.sort_by_key(|a| a.norm);
    out
}

fn coprime(a: &OddIdeal, b: &OddIdeal) -> bool {
    a.exps
        .iter()
        .all(|(i, _)| b.exps.iter().all(|(j, _)| i != j))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MtildeEval {
    pub y: f64,
    pub value: Complex64,
    /// Estimated truncation error (ideal cap plus `r_max`).
    pub tail_bound: f64,
    pub terms: u64,
}

/// `Σ_{r ≤ R} H_r(iy) 2^{-rσ}` and an estimate of the omitted tail.
fn two_adic_partial(sigma: f64, y: f64, r_max: u32) -> (Complex64, f64) {
    let h = h_table(r_max + 1, Complex64::new(0.0, y));
    let t = 2f64.powf(-sigma);
    let s: ComplexSum = (0..=r_max as usize)
        .map(|r| h[r] * t.powi(r as i32))
        .collect();
    // |H_{r+1}/H_r| = |iy + r| / (r+1) bounds the ratio of later terms
    let r1 = (r_max + 1) as f64;
    let ratio = Complex64::new(r1, y).norm() / (r1 + 1.0) * t;
    let first = h[r_max as usize + 1].norm() * t.powi(r_max as i32 + 1);
    let tail = if ratio < 1.0 {
        first / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    (s.value(), tail)
}

/// The Dirichlet series `M̃_σ(y)`, truncated at `cut`.
pub fn mtilde_series(sigma: f64, y: f64, cut: &SeriesCutoffs) -> Result<MtildeEval> {
    validate_sigma(sigma)?;
    cut.validate()?;
    let cap = cut.ideal_norm_cap;
    // N(𝔪)^2 <= cap and N(𝔞)^4 <= cap
    let m_bound = arith::isqrt(cap);
    let a_bound = arith::isqrt(arith::isqrt(cap));
    let primes: Vec<PrimeIdealRec> = primes_up_to(m_bound)
        .into_iter()
        .filter(|p| p.is_odd())
        .collect();
    let ms = odd_ideals(&primes, m_bound);
    let abs: Vec<&OddIdeal> = ms.iter().take_while(|a| a.norm <= a_bound).collect();

    let max_exp = ms
        .iter()
        .flat_map(|m| m.exps.iter().map(|&(_, e)| e))
        .max()
        .unwrap_or(0);
    let h = h_table(4 * max_exp + max_exp + 4, Complex64::new(0.0, y));
    let pow_sigma: Vec<f64> = primes
        .iter()
        .map(|p| (p.norm as f64).powf(-sigma))
        .collect();
    let euler_corr: Vec<f64> = primes
        .iter()
        .map(|p| 1.0 / (1.0 + 1.0 / p.norm as f64))
        .collect();

    let mut acc = ComplexSum::new();
    let mut terms = 0u64;
    let mut exps: Vec<(u32, u32, u32)> = vec![(0, 0, 0); primes.len()];
    let mut touched: Vec<usize> = Vec::new();
    for a in &abs {
        let a4 = a.norm.pow(4);
        for b in &abs {
            let ab4 = match a4.checked_mul(b.norm.pow(4)) {
                Some(v) if v <= cap => v,
                _ => continue,
            };
            if !coprime(a, b) {
                continue;
            }
            for m in &ms {
                let m2 = m.norm * m.norm;
                if m2 > cap / ab4 {
                    break;
                }
                for &(i, e) in &a.exps {
                    exps[i].0 = e;
                    touched.push(i);
                }
                for &(i, e) in &b.exps {
                    exps[i].1 = e;
                    touched.push(i);
                }
                for &(i, e) in &m.exps {
                    exps[i].2 = e;
                    touched.push(i);
                }
                touched.sort_unstable();
                touched.dedup();
                // λ(𝔞^4 𝔪) λ(𝔟^4 𝔪) / N(𝔞^4 𝔟^4 𝔪^2)^σ / Π (1 + 1/N𝔭)
                let mut term = Complex64::new(1.0, 0.0);
                for &i in &touched {
                    let (ea, eb, em) = exps[i];
                    let weight = pow_sigma[i].powi((4 * ea + 4 * eb + 2 * em) as i32);
                    term *= h[(4 * ea + em) as usize] * h[(4 * eb + em) as usize] * weight;
                    term *= euler_corr[i];
                    exps[i] = (0, 0, 0);
                }
                touched.clear();
                acc.add(term);
                terms += 1;
            }
        }
    }
    let (s2, r_tail) = two_adic_partial(sigma, y, cut.r_max);
    let value = s2 * s2 * acc.value();
    let t = euler_tail_exponent(sigma, y, (m_bound.max(3)) as f64);
    let odd_abs = acc.value().norm();
    let tail_bound = value.norm() * t.exp_m1() + r_tail * (2.0 * s2.norm() + r_tail) * odd_abs;
    Ok(MtildeEval {
        y,
        value,
        tail_bound,
        terms,
    })
}

/// `y ln( sqrt(N^{2σ}+1) / (N^σ - 1) )`.
pub fn band_value(sigma: f64, y: f64, norm: u64) -> f64 {
    let x = (norm as f64).powf(sigma);
    y * (0.5 * (x * x + 1.0).ln() - (x - 1.0).ln())
}

pub const BAND_LO: f64 = 1.35;
pub const BAND_HI: f64 = 1.77;

/// Odd prime ideals with `1.35 <= band_value <= 1.77`.
pub fn band_primes(sigma: f64, y: f64) -> Result<Vec<PrimeIdealRec>> {
    validate_sigma(sigma)?;
    if !(y > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "band needs y > 0, got {y}"
        )));
    }
    // ln(sqrt(x^2+1)/(x-1)) > 1/x, so every band member has
    // y/1.77 < N^σ, and N^σ <= y/1.35 + 2 comfortably covers the top
    let hi = ((y / BAND_LO + 2.0).powf(1.0 / sigma)).ceil() as u64;
    let lo = (y / BAND_HI).powf(1.0 / sigma).floor() as u64;
    Ok(primes_up_to(hi)
        .into_iter()
        .filter(|p| p.is_odd() && p.norm >= lo)
        .filter(|p| {
            let v = band_value(sigma, y, p.norm);
            (BAND_LO..=BAND_HI).contains(&v)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub y: f64,
    pub abs_phi: f64,
    pub ln_abs_phi: f64,
    /// `ln ln(1/|φ|) / ln y`.
    pub exponent: f64,
}

pub fn decay_check(sigma: f64, ys: &[f64], p: &CharFnParams, exec: Exec) -> Result<Vec<DecayRow>> {
    validate_sigma(sigma)?;
    if ys.iter().any(|&y| !(y > 0.0)) || ys.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "decay grid must be positive and increasing".into(),
        ));
    }
    let prod = EulerProduct::new(CharFnParams { sigma, ..*p })?;
    Ok(exec.map(ys, |&y| {
        let e = prod.eval(y);
        DecayRow {
            y,
            abs_phi: e.ln_abs.exp(),
            ln_abs_phi: e.ln_abs,
            exponent: (-e.ln_abs).ln() / y.ln(),
        }
    }))
}

/// Least-squares slope of `ln ln(1/|φ|)` against `ln y`.
pub fn fit_decay_exponent(rows: &[DecayRow]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(Error::InvalidParameter("need at least two rows".into()));
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.y.ln(), (-r.ln_abs_phi).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// The smallest `y` on the grid `step, 2 step, ...` with `|φ(y)| < target`,
/// searched up to `y_cap`.
pub fn find_decay_point(prod: &EulerProduct, target: f64, step: f64, y_cap: f64) -> Result<f64> {
    let ln_target = target.ln();
    let mut k = 1u64;
    loop {
        let y = k as f64 * step;
        let e = prod.eval(y);
        if e.ln_abs < ln_target {
            return Ok(y);
        }
        if y >= y_cap {
            return Err(Error::DecayNotReached {
                y_max: y,
                modulus: e.ln_abs.exp(),
                target,
            });
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussint::{factor, first_quadrant_by_norm};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn h_examples() {
        let u = c(0.3, -1.7);
        assert_eq!(h_coeff(0, u), c(1.0, 0.0));
        assert_eq!(h_coeff(1, u), u);
        assert_eq!(h_table(6, u)[6], h_coeff(6, u));
        // Σ H_r(u) t^r = (1 - t)^{-u}
        let u = c(0.0, 0.3);
        let t: f64 = 0.5;
        let s: Complex64 = h_table(40, u)
            .iter()
            .enumerate()
            .map(|(r, h)| h * t.powi(r as i32))
            .sum();
        let direct = (-u * (1.0f64 - t).ln()).exp();
        assert!((s - direct).norm() < 1e-8);
    }

    #[test]
    fn lambda_examples() {
        let one = factor(GaussInt::ONE).unwrap();
        assert_eq!(lambda_y(2.5, &one), c(1.0, 0.0));
        let p = factor(GaussInt::new(-1, -2)).unwrap();
        assert_eq!(lambda_y(2.5, &p), c(0.0, 2.5));
        for y in [-1.0, -0.7, 0.4, 1.0] {
            for z in first_quadrant_by_norm(10_000) {
                let n = z.norm().unwrap() as f64;
                let l = lambda_y(y, &factor(z).unwrap());
                assert!(l.norm() <= n.powf(0.25) + 1e-12, "{z} at y = {y}");
            }
        }
        // the bound only holds up to a constant once |y| > 2^{1/4}
        let p = factor(GaussInt::new(2, 1)).unwrap();
        assert!(lambda_y(2.0, &p).norm() > 5f64.powf(0.25));
    }

    #[test]
    fn orthogonality() {
        for k in -8..=8 {
            let expect = if k % 4 == 0 { 4 } else { 0 };
            assert_eq!(fourth_root_sum(k), GaussInt::new(expect, 0), "k = {k}");
        }
    }

    #[test]
    fn local_factor_matches_literal_formula() {
        for &sigma in &[0.6, 0.75, 1.0, 2.0] {
            for &q in &[5u64, 9, 13, 49, 1009] {
                for &y in &[-7.3, -0.1, 0.0, 0.25, 3.0, 40.0] {
                    let qf = q as f64;
                    let x = qf.powf(-sigma);
                    let s: Complex64 = (0..4)
                        .map(|j| {
                            let root = GaussInt::ONE.mul_i_pow(j);
                            let modulus =
                                (c(1.0, 0.0) - c(root.re as f64, root.im as f64) * x).norm();
                            Complex64::cis(-2.0 * y * modulus.ln())
                        })
                        .sum();
                    let literal = 1.0 / (qf + 1.0) + 0.25 * qf / (qf + 1.0) * s;
                    let ours = local_factor(sigma, y, q).unwrap();
                    assert!((ours - literal).norm() < 1e-14);
                }
            }
        }
        assert!(local_factor(1.0, 1.0, 4).is_err());
    }

    #[test]
    fn local_factor_grid() {
        for sigma in [0.6, 1.0] {
            for q in [5, 9, 13] {
                assert_eq!(local_factor(sigma, 0.0, q).unwrap(), c(1.0, 0.0));
                for k in -1000..=1000 {
                    let y = k as f64 * 0.1;
                    let m = local_factor(sigma, y, q).unwrap();
                    assert!(m.norm() <= 1.0 + 1e-15);
                    assert_eq!(local_factor(sigma, -y, q).unwrap(), m.conj());
                }
            }
        }
    }

    #[test]
    fn phi_basics() {
        let p = CharFnParams::new(1.0, 10_000).unwrap();
        let prod = EulerProduct::new(p).unwrap();
        let zero = prod.eval(0.0);
        assert_eq!(zero.value, c(1.0, 0.0));
        for y in [0.3, 1.0, 4.0, 17.0] {
            let a = prod.eval(y);
            let b = prod.eval(-y);
            assert!((a.value - b.value.conj()).norm() < 1e-15);
            assert!(a.value.norm() <= 1.0);
        }
        assert!(CharFnParams::new(1.0, 2).is_err());
        assert!(CharFnParams::new(0.5, 100).is_err());
    }

    #[test]
    fn phi_truncation_within_reported_tail() {
        let hi = phi_sigma(1.0, 1.0, &CharFnParams::new(1.0, 1_000_000).unwrap()).unwrap();
        let lo = phi_sigma(1.0, 1.0, &CharFnParams::new(1.0, 100_000).unwrap()).unwrap();
        assert!((hi.value - lo.value).norm() < lo.tail_bound);
    }

    #[test]
    fn block_reduction_is_thread_independent() {
        let prod = EulerProduct::new(CharFnParams::new(0.75, 200_000).unwrap()).unwrap();
        let seq = prod.eval_with(3.7, Exec::Sequential);
        let par = crate::exec::with_threads(4, || prod.eval_with(3.7, Exec::Parallel));
        assert_eq!(seq, par);
    }

    #[test]
    fn prefactor_is_limit_of_squared_two_adic_sum() {
        for y in [-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0] {
            let (s, tail) = two_adic_partial(0.75, y, 60);
            assert!((s * s - two_adic_prefactor(0.75, y)).norm() < 1e-8);
            assert!(tail < 1e-8);
        }
    }

    #[test]
    fn mtilde_at_zero_and_symmetry() {
        let cut = SeriesCutoffs {
            r_max: 20,
            ideal_norm_cap: 10_000,
        };
        assert_eq!(mtilde_series(1.0, 0.0, &cut).unwrap().value, c(1.0, 0.0));
        let a = mtilde_series(1.0, 0.7, &cut).unwrap().value;
        let b = mtilde_series(1.0, -0.7, &cut).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn mtilde_stabilizes() {
        let diffs: Vec<f64> = [1_000u64, 4_000, 16_000, 64_000, 256_000]
            .windows(2)
            .map(|w| {
                let v = |cap| {
                    mtilde_series(
                        1.0,
                        1.0,
                        &SeriesCutoffs {
                            r_max: 60,
                            ideal_norm_cap: cap,
                        },
                    )
                    .unwrap()
                    .value
                };
                (v(w[1]) - v(w[0])).norm()
            })
            .collect();
        assert!(diffs.windows(2).all(|d| d[1] < d[0]), "{diffs:?}");
    }

    #[test]
    fn odd_ideal_enumeration_matches_stream() {
        let primes: Vec<PrimeIdealRec> = primes_up_to(2000)
            .into_iter()
            .filter(|p| p.is_odd())
            .collect();
        let ours: Vec<u64> = odd_ideals(&primes, 2000).iter().map(|a| a.norm).collect();
        let mut brute: Vec<u64> = first_quadrant_by_norm(2000)
            .filter(|z| z.is_odd())
            .map(|z| z.norm().unwrap())
            .collect();
        brute.sort_unstable();
        assert_eq!(ours, brute);
    }

    #[test]
    fn band_examples() {
        let band = band_primes(0.75, 1000.0).unwrap();
        assert!(!band.is_empty());
        for p in &band {
            let v = band_value(0.75, 1000.0, p.norm);
            assert!((BAND_LO..=BAND_HI).contains(&v));
            assert!(local_factor(0.75, 1000.0, p.norm).unwrap().norm() <= 0.8);
        }
        // the search window misses nothing: scan every prime ideal directly
        let brute = primes_up_to(100_000)
            .into_iter()
            .filter(|p| p.is_odd())
            .filter(|p| (BAND_LO..=BAND_HI).contains(&band_value(0.75, 1000.0, p.norm)))
            .count();
        assert_eq!(band.len(), brute);
    }

    #[test]
    fn band_cosine_claim() {
        // on the closed band |cos| <= cos(1.35) < 0.22
        assert!(BAND_LO.cos() < 0.22);
        assert!(BAND_HI.cos().abs() < BAND_LO.cos());
    }

    #[test]
    fn band_growth() {
        let count = |y: f64| band_primes(0.75, y).unwrap().len() as f64;
        for y in [1000.0, 2000.0, 4000.0] {
            let r = count(2.0 * y) / count(y);
            assert!((1.5..=3.5).contains(&r), "ratio {r} at y = {y}");
        }
    }

    #[test]
    fn decay_examples() {
        let p = CharFnParams::new(0.75, 100_000).unwrap();
        let rows = decay_check(0.75, &[10.0, 100.0], &p, Exec::default()).unwrap();
        assert!(rows[1].abs_phi < rows[0].abs_phi);
        assert!(rows.iter().all(|r| r.abs_phi <= 1.0));
        assert!(decay_check(0.75, &[2.0, 1.0], &p, Exec::default()).is_err());
    }

    proptest! {
        #[test]
        fn local_factor_bounded_and_hermitian(sigma in 0.55f64..4.0, y in -500f64..500.0, k in 0usize..200) {
            let ps = primes_up_to(5000);
            let odd: Vec<_> = ps.iter().filter(|p| p.is_odd()).collect();
            let q = odd[k % odd.len()].norm;
            let m = local_factor(sigma, y, q).unwrap();
            prop_assert!(m.norm() <= 1.0 + 1e-15);
            prop_assert_eq!(local_factor(sigma, -y, q).unwrap(), m.conj());
        }
    }
}
