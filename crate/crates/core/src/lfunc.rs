//! Smoothed L-values `L(σ, χ_c)`, the statistic `ℒ_c(σ)`, and family counts.
//!
//! `L(σ, χ_c)` is evaluated as `Σ a(n) n^{-σ} e^{-n/X}` where
//! `a(n) = Σ_{N(𝔞)=n} χ_c(𝔞)` is multiplicative in `n`. The sum walks the
//! integers `n` that are ideal norms by depth-first products of a sorted
//! basis (`2`, split `p`, inert `p^2`), so each term costs one `exp`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gaussint::{enumerate_c, factor, split_generators, FamilyElement, GaussInt};
use crate::numeric::{ComplexSum, NeumaierSum};
use crate::quartic::QuarticValue;

/// Absolute tail left out of every smoothed sum.
pub const EPS_TAIL: f64 = 1e-10;
pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-12;
/// Smallest smoothing scale used by [`LValueParams::standard`].
pub const MIN_CUTOFF: f64 = 1e4;
/// Relative weight `exp(-N/Y)` below which a family member is dropped from
/// weighted averages.
pub const EPS_WEIGHT: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LValueParams {
    pub sigma: f64,
    pub cutoff_x: f64,
    pub zero_threshold: f64,
}

impl LValueParams {
    /// `cutoff_x = max(N(c), 10^4)`.
    pub fn standard(sigma: f64, c: &FamilyElement) -> Self {
        Self {
            sigma,
            cutoff_x: (c.norm as f64).max(MIN_CUTOFF),
            zero_threshold: DEFAULT_ZERO_THRESHOLD,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.5 && self.sigma <= 4.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma = {} outside (1/2, 4]",
                self.sigma
            )));
        }
        if !(self.cutoff_x > 0.0 && self.cutoff_x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cutoff_x = {} must be positive",
                self.cutoff_x
            )));
        }
        if !(self.zero_threshold > 0.0) {
            return Err(Error::InvalidParameter(
                "zero_threshold must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Largest norm that contributes more than [`EPS_TAIL`].
    pub fn effective_limit(&self) -> u64 {
        effective_limit(self.cutoff_x)
    }
}

pub fn effective_limit(cutoff_x: f64) -> u64 {
    (cutoff_x * (1.0 / EPS_TAIL).ln()).floor() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Ramified,
    /// Primary generator `re + im i`; the conjugate ideal is `re - im i`.
    Split {
        re: i64,
        im: i64,
    },
    Inert {
        p: u64,
    },
}

#[derive(Clone, Copy, Debug)]
struct BasisPrime {
    /// Norm of the basis element: 2, `p`, or `p^2`.
    q: u64,
    ln_q: f64,
    kind: Kind,
}

/// Rational primes (as ideal norms) up to a limit, ascending.
#[derive(Clone, Debug)]
pub struct NormBasis {
    limit: u64,
    primes: Vec<BasisPrime>,
}

impl NormBasis {
    pub fn new(limit: u64) -> Self {
        let mut primes = Vec::new();
        for p in arith::primes_up_to(limit) {
            let (q, kind) = match p % 4 {
                2 => (2, Kind::Ramified),
                1 => {
                    let (pi, _) = split_generators(p);
                    (
                        p,
                        Kind::Split {
                            re: pi.re,
                            im: pi.im,
                        },
                    )
                }
                _ => match p.checked_mul(p) {
                    Some(q) if q <= limit => (q, Kind::Inert { p }),
                    _ => continue,
                },
            };
            primes.push(BasisPrime {
                q,
                ln_q: (q as f64).ln(),
                kind,
            });
        }
        primes.sort_by_key(|b| b.q);
        Self { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

const ZERO_CODE: u8 = 4;

/// Quartic character modulo one prime factor `ρ` of `c`, as a table of
/// discrete logarithms mod 4 over `Z[i]/ρ`.
#[derive(Clone, Debug)]
struct ResidueTable {
    p: u64,
    inv_p: f64,
    /// Image of `i` in `F_p` for split `ρ`; `None` for inert `ρ`, where the
    /// residue field is `F_p[i]` and the index is `x*p + y`.
    image_of_i: Option<u64>,
    /// Discrete logs mod 4 packed four to a byte; residue 0 is the zero.
    codes: Vec<u8>,
}

fn packed(len: usize) -> Vec<u8> {
    vec![0; len.div_ceil(4)]
}

#[inline]
fn put(codes: &mut [u8], r: usize, k: u8) {
    codes[r >> 2] |= k << (2 * (r & 3));
}

fn distinct_prime_factors(n: u64) -> Vec<u64> {
    arith::factor_u64(n).into_iter().map(|(p, _)| p).collect()
}

impl ResidueTable {
    fn split(rho: GaussInt, p: u64) -> Self {
        let a = rho.re.rem_euclid(p as i64) as u64;
        let b = rho.im.rem_euclid(p as i64) as u64;
        // a + b s ≡ 0  =>  s ≡ -a / b
        let b_inv = arith::pow_mod(b, p - 2, p);
        let s = arith::mul_mod(p - a % p, b_inv, p) % p;
        let order_factors = distinct_prime_factors(p - 1);
        let g = (2..p)
            .find(|&g| {
                order_factors
                    .iter()
                    .all(|&l| arith::pow_mod(g, (p - 1) / l, p) != 1)
            })
            .expect("F_p^* is cyclic");
        let t = if arith::pow_mod(g, (p - 1) / 4, p) == s {
            1
        } else {
            3
        };
        let mut codes = packed(p as usize);
        let mut x = 1u64;
        for j in 0..p - 1 {
            put(&mut codes, x as usize, ((t * j) % 4) as u8);
            x = arith::mul_mod(x, g, p);
        }
        Self {
            p,
            inv_p: 1.0 / p as f64,
            image_of_i: Some(s),
            codes,
        }
    }

    fn inert(p: u64) -> Self {
        let mul = |(a, b): (u64, u64), (c, d): (u64, u64)| {
            let re = (arith::mul_mod(a, c, p) + p - arith::mul_mod(b, d, p)) % p;
            let im = (arith::mul_mod(a, d, p) + arith::mul_mod(b, c, p)) % p;
            (re, im)
        };
        let pow = |mut z: (u64, u64), mut e: u64| {
            let mut acc = (1, 0);
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul(acc, z);
                }
                z = mul(z, z);
                e >>= 1;
            }
            acc
        };
        let order = p * p - 1;
        let order_factors = distinct_prime_factors(order);
        let g = (0..p)
            .flat_map(|b| (0..p).map(move |a| (a, b)))
            .filter(|&z| z != (0, 0))
            .find(|&z| order_factors.iter().all(|&l| pow(z, order / l) != (1, 0)))
            .expect("F_{p^2}^* is cyclic");
        let t = if pow(g, order / 4) == (0, 1) { 1 } else { 3 };
        let mut codes = packed((p * p) as usize);
        let mut z = (1, 0);
        for j in 0..order {
            put(&mut codes, (z.0 * p + z.1) as usize, ((t * j) % 4) as u8);
            z = mul(z, g);
        }
        Self {
            p,
            inv_p: 1.0 / p as f64,
            image_of_i: None,
            codes,
        }
    }

    /// `v mod p` through a floating reciprocal; exact for `|v| < 2^50`.
    #[inline]
    fn reduce(&self, v: i64) -> i64 {
        let p = self.p as i64;
        // truncation lands within one step of the true quotient
        let mut r = v - (v as f64 * self.inv_p) as i64 * p;
        if r < 0 {
            r += p;
        } else if r >= p {
            r -= p;
        }
        r
    }

    #[inline]
    fn code(&self, re: i64, im: i64) -> u8 {
        let r = match self.image_of_i {
            // |im| * s stays far below 2^50 for the norms handled here
            Some(s) => self.reduce(re + im * s as i64) as usize,
            None => (self.reduce(re) * self.p as i64 + self.reduce(im)) as usize,
        };
        if r == 0 {
            ZERO_CODE
        } else {
            (self.codes[r >> 2] >> (2 * (r & 3))) & 3
        }
    }
}

/// `χ_c` evaluated through per-prime discrete-log tables.
#[derive(Clone, Debug)]
pub struct FamilyCharacter {
    c: FamilyElement,
    tables: Vec<ResidueTable>,
}

impl FamilyCharacter {
    pub fn new(c: &FamilyElement) -> Result<Self> {
        let f = factor(c.c)?;
        let tables = f
            .factors
            .iter()
            .map(|(rho, _)| match rho.degree {
                1 => ResidueTable::split(rho.gen, rho.norm),
                _ => ResidueTable::inert(arith::isqrt(rho.norm)),
            })
            .collect();
        Ok(Self { c: *c, tables })
    }

    pub fn element(&self) -> &FamilyElement {
        &self.c
    }

    #[inline]
    fn code(&self, re: i64, im: i64) -> u8 {
        let mut k = 0u8;
        for t in &self.tables {
            let c = t.code(re, im);
            if c == ZERO_CODE {
                return ZERO_CODE;
            }
            k += c;
        }
        k % 4
    }

    /// `χ_c(z)`.
    pub fn eval(&self, z: GaussInt) -> QuarticValue {
        match self.code(z.re, z.im) {
            ZERO_CODE => QuarticValue::Zero,
            k => QuarticValue::Root(k),
        }
    }
}

/// Small Gaussian integer for the exact coefficients `a(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Coef(i64, i64);

impl Coef {
    const ZERO: Self = Coef(0, 0);
    const ONE: Self = Coef(1, 0);

    #[inline]
    fn mul(self, o: Self) -> Self {
        Coef(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }

    #[inline]
    fn add(self, o: Self) -> Self {
        Coef(self.0 + o.0, self.1 + o.1)
    }

    fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

/// Character codes at one basis prime: `(χ(𝔭), χ(𝔭̄))` as powers of `i`
/// (4 for zero), equal for ramified and inert primes.
#[derive(Clone, Copy)]
struct Local {
    alpha: u8,
    beta: u8,
    split: bool,
}

const ROOTS: [Coef; 5] = [Coef(1, 0), Coef(0, 1), Coef(-1, 0), Coef(0, -1), Coef(0, 0)];

impl Local {
    /// `a(q)`.
    #[inline]
    fn first(&self) -> Coef {
        let alpha = ROOTS[self.alpha as usize];
        if self.split {
            alpha.add(ROOTS[self.beta as usize])
        } else {
            alpha
        }
    }

    /// Sequence `a(q^k)`, `k = 0, 1, 2, ...`, advanced in place.
    #[inline]
    fn next(&self, prev: Coef, beta_pow: &mut Coef) -> Coef {
        let alpha = ROOTS[self.alpha as usize];
        if self.split {
            *beta_pow = beta_pow.mul(ROOTS[self.beta as usize]);
            alpha.mul(prev).add(*beta_pow)
        } else {
            prev.mul(alpha)
        }
    }
}

const LOW_BITS: u32 = 12;

/// `exp(-n/X)` as a product of two table entries split at bit 12 of `n`.
struct Smoothing {
    high: Vec<f64>,
    low: Vec<f64>,
}

impl Smoothing {
    fn new(limit: u64, cutoff_x: f64) -> Self {
        let inv_x = 1.0 / cutoff_x;
        let low = (0..1u64 << LOW_BITS)
            .map(|r| (-(r as f64) * inv_x).exp())
            .collect();
        let high = (0..=limit >> LOW_BITS)
            .map(|h| (-((h << LOW_BITS) as f64) * inv_x).exp())
            .collect();
        Self { high, low }
    }

    #[inline]
    fn at(&self, n: u64) -> f64 {
        self.high[(n >> LOW_BITS) as usize] * self.low[(n & ((1 << LOW_BITS) - 1)) as usize]
    }
}

/// Shared state for evaluating many L-values: the norm basis and the
/// powers `q^{-σ}` for the most recent `σ`.
pub struct LFunctionContext {
    basis: NormBasis,
    powers: Mutex<Option<(u64, Arc<Vec<f64>>)>>,
}

impl LFunctionContext {
    /// Context able to evaluate any `cutoff_x` up to `max_cutoff`.
    pub fn for_cutoff(max_cutoff: f64) -> Self {
        Self {
            basis: NormBasis::new(effective_limit(max_cutoff)),
            powers: Mutex::new(None),
        }
    }

    fn powers(&self, sigma: f64) -> Arc<Vec<f64>> {
        let mut slot = self.powers.lock().unwrap_or_else(|e| e.into_inner());
        match &*slot {
            Some((bits, v)) if *bits == sigma.to_bits() => v.clone(),
            _ => {
                let v: Arc<Vec<f64>> = Arc::new(
                    self.basis
                        .primes
                        .iter()
                        .map(|b| (-sigma * b.ln_q).exp())
                        .collect(),
                );
                *slot = Some((sigma.to_bits(), v.clone()));
                v
            }
        }
    }

    pub fn basis(&self) -> &NormBasis {
        &self.basis
    }

    fn locals(&self, chi: &FamilyCharacter, limit: u64) -> Vec<Local> {
        self.basis
            .primes
            .iter()
            .take_while(|b| b.q <= limit)
            .map(|b| match b.kind {
                Kind::Ramified => {
                    let v = chi.code(1, 1);
                    Local {
                        alpha: v,
                        beta: v,
                        split: false,
                    }
                }
                Kind::Inert { p } => {
                    let v = chi.code(p as i64, 0);
                    Local {
                        alpha: v,
                        beta: v,
                        split: false,
                    }
                }
                Kind::Split { re, im } => Local {
                    alpha: chi.code(re, im),
                    beta: chi.code(re, -im),
                    split: true,
                },
            })
            .collect()
    }

    pub fn l_value(&self, c: &FamilyElement, p: &LValueParams) -> Result<Complex64> {
        self.l_value_with(&FamilyCharacter::new(c)?, p)
    }

    pub fn l_value_with(&self, chi: &FamilyCharacter, p: &LValueParams) -> Result<Complex64> {
        p.validate()?;
        if p.cutoff_x < chi.c.norm as f64 {
            return Err(Error::InvalidParameter(format!(
                "cutoff_x = {} is below N(c) = {}",
                p.cutoff_x, chi.c.norm
            )));
        }
        let limit = p.effective_limit();
        if limit > self.basis.limit {
            return Err(Error::InvalidParameter(format!(
                "context covers norms up to {}, evaluation needs {limit}",
                self.basis.limit
            )));
        }
        let locals = self.locals(chi, limit);
        let powers = self.powers(p.sigma);
        let mut walk = Walk {
            q: &self.basis.primes[..locals.len()],
            powers: &powers[..locals.len()],
            locals: &locals,
            limit,
            smoothing: Smoothing::new(limit, p.cutoff_x),
            re: NeumaierSum::new(),
            im: NeumaierSum::new(),
        };
        walk.visit(0, 1, 1.0, Coef::ONE);
        Ok(Complex64::new(walk.re.value(), walk.im.value()))
    }

    pub fn script_l(&self, c: &FamilyElement, p: &LValueParams) -> Result<EmpiricalSample> {
        let l = self.l_value(c, p)?;
        Ok(EmpiricalSample::from_l_value(*c, l, p.zero_threshold))
    }
}

struct Walk<'a> {
    q: &'a [BasisPrime],
    /// `q^{-σ}` per basis prime.
    powers: &'a [f64],
    locals: &'a [Local],
    limit: u64,
    smoothing: Smoothing,
    re: NeumaierSum,
    im: NeumaierSum,
}

impl Walk<'_> {
    /// Adds the term for `n` (with `pw = n^{-σ}`, `a = a(n)`) and recurses
    /// into multiples by basis primes from `start` on.
    fn visit(&mut self, start: usize, n: u64, pw: f64, a: Coef) {
        let w = pw * self.smoothing.at(n);
        self.re.add(a.0 as f64 * w);
        self.im.add(a.1 as f64 * w);
        let len = self.q.len();
        let mut j = start;
        // limit < 2^40, so these products cannot overflow
        while j < len {
            let q = self.q[j].q;
            if n * q > self.limit {
                return;
            }
            if n * q * q > self.limit {
                break;
            }
            self.branch(j, n, pw, a);
            j += 1;
        }
        // from here on n*q*q > limit, so every n*q is a leaf (a second factor
        // would be at least q)
        while j < len {
            let q = self.q[j].q;
            let m = n * q;
            if m > self.limit {
                break;
            }
            let coef = self.locals[j].first();
            if !coef.is_zero() {
                let c = a.mul(coef);
                let w = pw * self.powers[j] * self.smoothing.at(m);
                self.re.add(c.0 as f64 * w);
                self.im.add(c.1 as f64 * w);
            }
            j += 1;
        }
    }

    /// Visits `n q^k` for every `k >= 1` that fits.
    fn branch(&mut self, j: usize, n: u64, pw: f64, a: Coef) {
        let q = self.q[j].q;
        let (local, pow) = (self.locals[j], self.powers[j]);
        let (mut m, mut pw_m) = (n * q, pw * pow);
        let (mut coef, mut beta_pow) = (Coef::ONE, Coef::ONE);
        loop {
            coef = local.next(coef, &mut beta_pow);
            if !coef.is_zero() {
                self.visit(j + 1, m, pw_m, a.mul(coef));
            }
            if m * q > self.limit {
                break;
            }
            m *= q;
            pw_m *= pow;
        }
    }
}

/// One-off evaluation; builds its own context.
pub fn l_value(c: &FamilyElement, p: &LValueParams) -> Result<Complex64> {
    p.validate()?;
    LFunctionContext::for_cutoff(p.cutoff_x).l_value(c, p)
}

/// Direct sum over ideals `Σ χ_c(𝔞) N(𝔞)^{-σ} w(N(𝔞))` up to `norm_limit`,
/// with `w = exp(-N/X)` when `smoothing = Some(X)` and `w = 1` otherwise.
/// Characters come from the reciprocity algorithm, one symbol per ideal.
pub fn l_value_direct(
    c: &FamilyElement,
    sigma: f64,
    norm_limit: u64,
    smoothing: Option<f64>,
) -> Result<Complex64> {
    let mut acc = ComplexSum::new();
    for z in crate::gaussint::first_quadrant_by_norm(norm_limit) {
        let v = crate::quartic::chi_c(c, z)?;
        if v == QuarticValue::Zero {
            continue;
        }
        let n = z.norm()? as f64;
        let w = match smoothing {
            Some(x) => (-sigma * n.ln() - n / x).exp(),
            None => n.powf(-sigma),
        };
        acc.add(v.to_complex() * w);
    }
    Ok(acc.value())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    pub c: FamilyElement,
    pub l_value: Complex64,
    /// `2 ln|L(σ, χ_c)|`; `None` when excluded.
    pub script_l: Option<f64>,
    pub excluded: bool,
}

impl EmpiricalSample {
    pub fn from_l_value(c: FamilyElement, l: Complex64, zero_threshold: f64) -> Self {
        let abs2 = l.norm_sqr();
        let excluded = abs2 < zero_threshold;
        Self {
            c,
            l_value: l,
            script_l: (!excluded).then(|| abs2.ln()),
            excluded,
        }
    }

    /// `exp(-N(c)/Y)`.
    pub fn weight(&self, big_y: f64) -> f64 {
        (-(self.c.norm as f64) / big_y).exp()
    }
}

/// `Y ln(1/ε)`: members beyond this norm carry weight below `ε`.
pub fn weighted_extent(big_y: f64) -> u64 {
    (big_y * (1.0 / EPS_WEIGHT).ln()).floor() as u64
}

/// `ℒ_c(σ)` for every family member up to a norm bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Ensemble {
    pub sigma: f64,
    pub max_norm: u64,
    /// Ordered by (norm, re, im).
    pub samples: Vec<EmpiricalSample>,
}

impl Ensemble {
    /// Uses `cutoff_x = max(N(c), 10^4)` for each member. Only members with
    /// `im >= 0` are evaluated; `L(σ, χ_c̄)` is the conjugate of `L(σ, χ_c)`
    /// term by term, so the rest are mirrored exactly.
    pub fn build(sigma: f64, max_norm: u64, exec: Exec) -> Result<Self> {
        let family = enumerate_c(max_norm);
        let ctx = LFunctionContext::for_cutoff((max_norm as f64).max(MIN_CUTOFF));
        let reps: Vec<FamilyElement> = family.iter().filter(|c| c.c.im >= 0).copied().collect();
        let computed = exec
            .map(&reps, |c| {
                ctx.script_l(c, &LValueParams::standard(sigma, c))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let by_gen: HashMap<GaussInt, &EmpiricalSample> =
            computed.iter().map(|s| (s.c.c, s)).collect();
        let samples = family
            .iter()
            .map(|c| {
                if c.c.im >= 0 {
                    *by_gen[&c.c]
                } else {
                    let s = by_gen[&c.c.conj()];
                    EmpiricalSample {
                        c: *c,
                        l_value: s.l_value.conj(),
                        ..*s
                    }
                }
            })
            .collect();
        Ok(Self {
            sigma,
            max_norm,
            samples,
        })
    }

    pub fn up_to(&self, norm: u64) -> &[EmpiricalSample] {
        let end = self.samples.partition_point(|s| s.c.norm <= norm);
        &self.samples[..end]
    }

    pub fn excluded_count(&self, norm: u64) -> usize {
        self.up_to(norm).iter().filter(|s| s.excluded).count()
    }

    /// Averaged `exp(i y ℒ_c)` with weights `exp(-N(c)/Y)`.
    pub fn char_fn(&self, y: f64, big_y: f64) -> Result<Complex64> {
        let ext = weighted_extent(big_y);
        if ext > self.max_norm {
            return Err(Error::InvalidParameter(format!(
                "ensemble reaches norm {}, Y = {big_y} needs {ext}",
                self.max_norm
            )));
        }
        let members = self.up_to(ext);
        let denom = s_star_of(members.iter().map(|s| s.c.norm), big_y);
        if denom == 0.0 {
            return Err(Error::EmptyFamily(big_y));
        }
        let num: ComplexSum = members
            .iter()
            .filter_map(|s| s.script_l.map(|l| Complex64::cis(y * l) * s.weight(big_y)))
            .collect();
        Ok(num.value() / denom)
    }

    /// Non-excluded `ℒ_c` values with `N(c) <= norm`, in ensemble order.
    pub fn values(&self, norm: u64) -> Vec<f64> {
        self.up_to(norm).iter().filter_map(|s| s.script_l).collect()
    }
}

pub fn empirical_char_fn(sigma: f64, y: f64, big_y: f64, exec: Exec) -> Result<Complex64> {
    Ensemble::build(sigma, weighted_extent(big_y), exec)?.char_fn(y, big_y)
}

fn s_star_of(norms: impl Iterator<Item = u64>, big_y: f64) -> f64 {
    norms
        .map(|n| (-(n as f64) / big_y).exp())
        .collect::<NeumaierSum>()
        .value()
}

/// `Σ_{c} exp(-N(c)/Y)` over members up to [`weighted_extent`].
pub fn s_star(big_y: f64) -> f64 {
    s_star_of(
        enumerate_c(weighted_extent(big_y)).iter().map(|c| c.norm),
        big_y,
    )
}

pub fn s_count(big_y: u64) -> u64 {
    enumerate_c(big_y).len() as u64
}

/// `ζ(2)` by Euler-Maclaurin after 50 terms.
pub fn zeta_two() -> f64 {
    let n = 50.0f64;
    let head: f64 = (1..50).rev().map(|k| 1.0 / (k * k) as f64).sum();
    head + 1.0 / n + 1.0 / (2.0 * n * n) + 1.0 / (6.0 * n.powi(3)) - 1.0 / (30.0 * n.powi(5))
        + 1.0 / (42.0 * n.powi(7))
}

/// Catalan's constant `L(2, χ_{-4})` via Cohen-Rodriguez Villegas-Zagier
/// acceleration of the alternating series.
pub fn catalan() -> f64 {
    let n = 40;
    let mut d = (3.0 + 8f64.sqrt()).powi(n);
    d = (d + 1.0 / d) / 2.0;
    let (mut b, mut c, mut s) = (-1.0f64, -d, 0.0f64);
    for k in 0..n {
        c = b - c;
        s += c / ((2 * k + 1) as f64).powi(2);
        let (kf, nf) = (k as f64, n as f64);
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

pub fn zeta_k_two() -> f64 {
    zeta_two() * catalan()
}

/// `res_{s=1} ζ_K = 2π h R / (w sqrt|d|)` with `h = R = 1`, `w = 4`, `d = -4`.
pub fn zeta_k_residue() -> f64 {
    let (h, reg, w, disc) = (1.0, 1.0, 4.0, 4.0f64);
    2.0 * std::f64::consts::PI * h * reg / (w * disc.sqrt())
}

/// `|H_⟨16⟩|`: units of `Z[i]/16` modulo the image of `{±1, ±i}`.
pub fn ray_class_order_16() -> u64 {
    let (units, orbit) = ray_class_counts_16();
    units / orbit
}

/// `(#(Z[i]/16)^×, orbit size of the unit action)`.
pub fn ray_class_counts_16() -> (u64, u64) {
    let units: Vec<(i64, i64)> = (0..16)
        .flat_map(|a| (0..16).map(move |b| (a, b)))
        .filter(|&(a, b)| (a + b) % 2 == 1)
        .collect();
    let orbit = |(a, b): (i64, i64)| {
        let mut seen = vec![(a, b)];
        let mut z = (a, b);
        loop {
            z = ((-z.1).rem_euclid(16), z.0);
            if z == (a, b) {
                break;
            }
            seen.push(z);
        }
        seen.len() as u64
    };
    let sizes: Vec<u64> = units.iter().map(|&u| orbit(u)).collect();
    assert!(
        sizes.windows(2).all(|w| w[0] == w[1]),
        "unit action is free"
    );
    (units.len() as u64, sizes[0])
}

/// `(2/3) res ζ_K / (|H_⟨16⟩| ζ_K(2))`: `s_star(Y) ~ density_constant() Y`.
pub fn density_constant() -> f64 {
    2.0 / 3.0 * zeta_k_residue() / (ray_class_order_16() as f64 * zeta_k_two())
}
