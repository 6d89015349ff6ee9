//! Exact arithmetic in `Z[i]`.
//!
//! Every value carries the invariant `norm <= 2^62`; operations that would
//! leave that range return [`Error::NormOverflow`] (or panic, for the
//! operator traits) instead of wrapping.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Largest admissible norm.
pub const NORM_BOUND: u64 = 1 << 62;
/// Largest norm accepted by [`factor`].
pub const FACTOR_BUDGET: u64 = 1 << 52;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: Self = Self::new(0, 0);
    pub const ONE: Self = Self::new(1, 0);
    pub const I: Self = Self::new(0, 1);
    pub const ONE_PLUS_I: Self = Self::new(1, 1);

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub(crate) fn norm_wide(self) -> u128 {
        let (a, b) = (self.re as i128, self.im as i128);
        (a * a + b * b) as u128
    }

    pub fn norm(self) -> Result<u64> {
        let n = self.norm_wide();
        if n > NORM_BOUND as u128 {
            return Err(Error::NormOverflow(self));
        }
        Ok(n as u64)
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_unit(self) -> bool {
        self.norm_wide() == 1
    }

    /// Not divisible by `1+i`.
    pub fn is_odd(self) -> bool {
        (self.re ^ self.im) & 1 == 1
    }

    /// `k` with `self = i^k`, for units.
    pub fn unit_exponent(self) -> Option<u8> {
        match (self.re, self.im) {
            (1, 0) => Some(0),
            (0, 1) => Some(1),
            (-1, 0) => Some(2),
            (0, -1) => Some(3),
            _ => None,
        }
    }

    /// `self * i^k`.
    pub fn mul_i_pow(self, k: u8) -> Self {
        match k % 4 {
            0 => self,
            1 => Self::new(-self.im, self.re),
            2 => Self::new(-self.re, -self.im),
            _ => Self::new(self.im, -self.re),
        }
    }

    /// Exact quotient by `1+i`; the caller guarantees `!self.is_odd()`.
    pub(crate) fn div_one_plus_i(self) -> Self {
        debug_assert!(!self.is_odd());
        Self::new((self.re + self.im) / 2, (self.im - self.re) / 2)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        let (a, b) = (self.re as i128, self.im as i128);
        let (c, d) = (rhs.re as i128, rhs.im as i128);
        from_wide(a * c - b * d, a * d + b * c)
    }

    pub fn checked_pow(self, mut exp: u32) -> Result<Self> {
        let mut acc = Self::ONE;
        let mut base = self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.checked_mul(base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.checked_mul(base)?;
            }
        }
        Ok(acc)
    }

    /// The associate with `re >= 1, im >= 0` (zero maps to zero).
    pub fn first_quadrant(self) -> Self {
        if self.is_zero() {
            return self;
        }
        (0..4)
            .map(|k| self.mul_i_pow(k))
            .find(|z| z.re > 0 && z.im >= 0)
            .expect("every nonzero element has a first-quadrant associate")
    }

    /// `self ≡ 1 (mod (1+i)^3)`.
    pub fn is_primary(self) -> bool {
        let (x, y) = (self.re as i128 - 1, self.im as i128);
        (x + y).rem_euclid(4) == 0 && (y - x).rem_euclid(4) == 0
    }

    pub fn divides(self, a: Self) -> Result<bool> {
        Ok(divrem(a, self)?.1.is_zero())
    }

    pub(crate) fn exact_div(self, d: Self) -> Option<Self> {
        match divrem(self, d) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }
}

fn from_wide(re: i128, im: i128) -> Result<GaussInt> {
    let n = re * re + im * im;
    if n > NORM_BOUND as i128 {
        // report a saturated witness; the exact value does not fit
        let clamp = |v: i128| v.clamp(i64::MIN as i128, i64::MAX as i128) as i64;
        return Err(Error::NormOverflow(GaussInt::new(clamp(re), clamp(im))));
    }
    Ok(GaussInt::new(re as i64, im as i64))
}

impl Add for GaussInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        from_wide(
            self.re as i128 + rhs.re as i128,
            self.im as i128 + rhs.im as i128,
        )
        .expect("Gaussian integer sum exceeds the norm bound")
    }
}

impl Sub for GaussInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        from_wide(
            self.re as i128 - rhs.re as i128,
            self.im as i128 - rhs.im as i128,
        )
        .expect("Gaussian integer difference exceeds the norm bound")
    }
}

impl Mul for GaussInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs)
            .expect("Gaussian integer product exceeds the norm bound")
    }
}

impl Neg for GaussInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, im: i64, signed: bool| match im {
            1 if signed => write!(f, "+i"),
            1 => write!(f, "i"),
            -1 => write!(f, "-i"),
            v if signed && v > 0 => write!(f, "+{v}i"),
            v => write!(f, "{v}i"),
        };
        match (self.re, self.im) {
            (re, 0) => write!(f, "{re}"),
            (0, im) => imag(f, im, false),
            (re, im) => {
                write!(f, "{re}")?;
                imag(f, im, true)
            }
        }
    }
}

impl FromStr for GaussInt {
    type Err = Error;

    /// Accepts `a+bi`, `a-bi`, `a`, `bi` (and `i`, `-i`, `a+i`, ...), with an
    /// optional leading sign.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse Gaussian integer {s:?}"));
        let s = s.trim();
        let int = |t: &str| t.parse::<i64>().map_err(|_| bad());
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::new(int(s)?, 0));
        };
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re, im) = match split {
            Some(k) => (int(&body[..k])?, &body[k..]),
            None => (0, body),
        };
        let im = match im {
            "" | "+" => 1,
            "-" => -1,
            t if t.ends_with(|c: char| c.is_ascii_digit()) => int(t)?,
            _ => return Err(bad()),
        };
        let z = Self::new(re, im);
        z.norm()?;
        Ok(z)
    }
}

pub fn norm(z: GaussInt) -> Result<u64> {
    z.norm()
}

/// Euclidean division: `a = q*b + r` with `norm(r) <= norm(b)/2`.
///
/// Each coordinate of `a/b` is rounded to the nearest integer, ties toward
/// negative infinity.
pub fn divrem(a: GaussInt, b: GaussInt) -> Result<(GaussInt, GaussInt)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    a.norm()?;
    let n = b.norm()? as i128;
    let (ar, ai) = (a.re as i128, a.im as i128);
    let (br, bi) = (b.re as i128, b.im as i128);
    let num_re = ar * br + ai * bi;
    let num_im = ai * br - ar * bi;
    // round(x / n) with ties down: ceil((2x - n) / 2n)
    let round = |x: i128| -((n - 2 * x).div_euclid(2 * n));
    let q = GaussInt::new(round(num_re) as i64, round(num_im) as i64);
    let qb = (
        q.re as i128 * br - q.im as i128 * bi,
        q.re as i128 * bi + q.im as i128 * br,
    );
    let r = GaussInt::new((ar - qb.0) as i64, (ai - qb.1) as i64);
    Ok((q, r))
}

/// Greatest common divisor, normalized to the first-quadrant associate.
pub fn gcd(a: GaussInt, b: GaussInt) -> Result<GaussInt> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::UndefinedGcd);
    }
    let (mut a, mut b) = (a, b);
    while !b.is_zero() {
        let r = divrem(a, b)?.1;
        a = b;
        b = r;
    }
    a.norm()?;
    Ok(a.first_quadrant())
}

/// Splits an odd `z` as `i^k * z'` with `z'` primary.
pub fn primary_normalize(z: GaussInt) -> Result<(u8, GaussInt)> {
    if z.is_zero() || !z.is_odd() {
        return Err(Error::NotNormalizable(z));
    }
    z.norm()?;
    (0..4u8)
        .map(|k| (k, z.mul_i_pow((4 - k) % 4)))
        .find(|(_, w)| w.is_primary())
        .ok_or(Error::NotNormalizable(z))
}

/// A prime ideal of `Z[i]` through its canonical generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeIdealRec {
    /// Primary for odd primes, `1+i` for the ramified prime.
    pub gen: GaussInt,
    pub norm: u64,
    /// 1 for split and ramified primes, 2 for inert ones.
    pub degree: u8,
}

impl PrimeIdealRec {
    fn sort_key(&self) -> (u64, i64, i64) {
        (self.norm, self.gen.re, self.gen.im)
    }

    pub fn is_odd(&self) -> bool {
        self.norm != 2
    }
}

/// The two primary generators above a rational prime `p ≡ 1 (mod 4)`.
pub fn split_generators(p: u64) -> (GaussInt, GaussInt) {
    let (a, b) = arith::two_squares(p);
    let (_, pi) = primary_normalize(GaussInt::new(a as i64, b as i64))
        .expect("a^2 + b^2 = p with p odd is odd");
    let (x, y) = (pi, pi.conj());
    if (x.re, x.im) <= (y.re, y.im) {
        (x, y)
    } else {
        (y, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussFactorization {
    /// Power of `i` in front of the product.
    pub unit_exp: u8,
    /// Sorted by `(norm, re, im)` of the generator, no repeats.
    pub factors: Vec<(PrimeIdealRec, u32)>,
}

impl GaussFactorization {
    pub fn reconstruct(&self) -> Result<GaussInt> {
        let mut z = GaussInt::ONE.mul_i_pow(self.unit_exp);
        for (p, e) in &self.factors {
            z = z.checked_mul(p.gen.checked_pow(*e)?)?;
        }
        Ok(z)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Factorization by rational trial division of the norm.
pub fn factor(z: GaussInt) -> Result<GaussFactorization> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = z.norm()?;
    if n > FACTOR_BUDGET {
        return Err(Error::FactorBudget(n));
    }
    let mut rest = z;
    let mut factors = Vec::new();
    let strip = |rest: &mut GaussInt, gen: GaussInt, max: u32| -> u32 {
        let mut e = 0;
        while e < max {
            match rest.exact_div(gen) {
                Some(q) => {
                    *rest = q;
                    e += 1;
                }
                None => break,
            }
        }
        e
    };
    for (p, e) in arith::factor_u64(n) {
        if p == 2 {
            let got = strip(&mut rest, GaussInt::ONE_PLUS_I, e);
            debug_assert_eq!(got, e);
            factors.push((ideal(GaussInt::ONE_PLUS_I, 2, 1), e));
        } else if p % 4 == 3 {
            let gen = GaussInt::new(-(p as i64), 0);
            let got = strip(&mut rest, gen, e / 2);
            debug_assert_eq!(2 * got, e);
            factors.push((ideal(gen, p * p, 2), got));
        } else {
            let (x, y) = split_generators(p);
            let ex = strip(&mut rest, x, e);
            let ey = strip(&mut rest, y, e - ex);
            debug_assert_eq!(ex + ey, e);
            for (g, k) in [(x, ex), (y, ey)] {
                if k > 0 {
                    factors.push((ideal(g, p, 1), k));
                }
            }
        }
    }
    let unit_exp = rest
        .unit_exponent()
        .expect("cofactor after stripping all primes is a unit");
    factors.sort_by_key(|(p, _)| p.sort_key());
    Ok(GaussFactorization { unit_exp, factors })
}

fn ideal(gen: GaussInt, norm: u64, degree: u8) -> PrimeIdealRec {
    PrimeIdealRec { gen, norm, degree }
}

pub fn is_squarefree(z: GaussInt) -> Result<bool> {
    Ok(factor(z)?.is_squarefree())
}

/// Every prime ideal of norm `<= x`, sorted by norm then generator.
pub fn primes_up_to(x: u64) -> Vec<PrimeIdealRec> {
    let mut out = Vec::new();
    for p in arith::primes_up_to(x) {
        if p == 2 {
            out.push(ideal(GaussInt::ONE_PLUS_I, 2, 1));
        } else if p % 4 == 1 {
            let (a, b) = split_generators(p);
            out.push(ideal(a, p, 1));
            out.push(ideal(b, p, 1));
        } else if p.checked_mul(p).is_some_and(|q| q <= x) {
            out.push(ideal(GaussInt::new(-(p as i64), 0), p * p, 2));
        }
    }
    out.sort_by_key(PrimeIdealRec::sort_key);
    out
}

/// A member of the family: square-free, `≡ 1 (mod 16)`, not 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyElement {
    pub c: GaussInt,
    pub norm: u64,
}

impl FamilyElement {
    pub fn new(c: GaussInt) -> Result<Self> {
        let norm = c.norm()?;
        let congruent = (c.re - 1).rem_euclid(16) == 0 && c.im.rem_euclid(16) == 0;
        if c == GaussInt::ONE || !congruent || !is_squarefree(c)? {
            return Err(Error::InvalidParameter(format!(
                "{c} is not a square-free element congruent to 1 mod 16"
            )));
        }
        Ok(Self { c, norm })
    }
}

/// Family members of norm `<= y`, ordered by (norm, re, im).
pub fn enumerate_c(y: u64) -> Vec<FamilyElement> {
    let r = arith::isqrt(y) as i64;
    let mut out = Vec::new();
    // c = (1 + 16u) + 16v i
    for u in (-r - 1) / 16..=(r - 1) / 16 {
        let re = 1 + 16 * u;
        if re.abs() > r {
            continue;
        }
        for v in -r / 16..=r / 16 {
            let c = GaussInt::new(re, 16 * v);
            if c == GaussInt::ONE {
                continue;
            }
            let n = c.norm_wide() as u64;
            if n <= y && is_squarefree(c).expect("family candidates are nonzero and small") {
                out.push(FamilyElement { c, norm: n });
            }
        }
    }
    out.sort_by_key(|f| (f.norm, f.c.re, f.c.im));
    out
}

/// One first-quadrant generator per nonzero ideal of norm `<= limit`, in
/// nondecreasing norm order (ties by `re`).
pub fn first_quadrant_by_norm(limit: u64) -> IdealsByNorm {
    IdealsByNorm {
        limit,
        next_lo: 1,
        buf: Vec::new(),
        pos: 0,
    }
}

pub struct IdealsByNorm {
    limit: u64,
    next_lo: u64,
    buf: Vec<(u64, GaussInt)>,
    pos: usize,
}

impl IdealsByNorm {
    const CHUNK: u64 = 1 << 16;

    fn refill(&mut self) {
        let lo = self.next_lo;
        let hi = (lo + Self::CHUNK - 1).min(self.limit);
        self.buf.clear();
        self.pos = 0;
        self.next_lo = hi + 1;
        let mut re = 1u64;
        while re * re <= hi {
            let re2 = re * re;
            let im_lo = if re2 >= lo {
                0
            } else {
                let need = lo - re2;
                let s = arith::isqrt(need);
                if s * s == need {
                    s
                } else {
                    s + 1
                }
            };
            let im_hi = arith::isqrt(hi - re2);
            for im in im_lo..=im_hi {
                self.buf
                    .push((re2 + im * im, GaussInt::new(re as i64, im as i64)));
            }
            re += 1;
        }
        self.buf.sort_unstable_by_key(|&(n, z)| (n, z.re));
    }
}

impl Iterator for IdealsByNorm {
    type Item = GaussInt;

    fn next(&mut self) -> Option<GaussInt> {
        while self.pos == self.buf.len() {
            if self.next_lo > self.limit {
                return None;
            }
            self.refill();
        }
        self.pos += 1;
        Some(self.buf[self.pos - 1].1)
    }
}
