//! The quartic residue symbol `(m/n)_4` and the family characters `χ_c`.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::gaussint::{divrem, primary_normalize, FamilyElement, GaussInt};

/// `0` or a power of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuarticValue {
    Zero,
    /// `i^k`, `k < 4`.
    Root(u8),
}

impl QuarticValue {
    pub const ONE: Self = Self::Root(0);

    pub fn root(k: u32) -> Self {
        Self::Root((k % 4) as u8)
    }

    pub fn conj(self) -> Self {
        match self {
            Self::Root(k) => Self::root(4 - k as u32),
            z => z,
        }
    }

    pub fn pow(self, e: u32) -> Self {
        match self {
            Self::Root(k) => Self::root(k as u32 * (e % 4)),
            _ if e == 0 => Self::ONE,
            z => z,
        }
    }

    /// Exact Gaussian-integer value.
    pub fn to_gauss(self) -> GaussInt {
        match self {
            Self::Zero => GaussInt::ZERO,
            Self::Root(k) => GaussInt::ONE.mul_i_pow(k),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        let z = self.to_gauss();
        Complex64::new(z.re as f64, z.im as f64)
    }
}

// roots multiply by adding exponents
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for QuarticValue {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Self::Root(a), Self::Root(b)) => Self::root(a as u32 + b as u32),
            _ => Self::Zero,
        }
    }
}

impl fmt::Display for QuarticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Zero => "0",
            Self::Root(0) => "1",
            Self::Root(1) => "i",
            Self::Root(2) => "-1",
            _ => "-i",
        };
        f.write_str(s)
    }
}

fn modulus_error(modulus: GaussInt, reason: &'static str) -> Error {
    Error::InvalidModulus { modulus, reason }
}

/// `(a/π)_4` straight from the definition `a^{(N(π)-1)/4} mod π`.
pub fn symbol_prime_oracle(a: GaussInt, pi: GaussInt) -> Result<QuarticValue> {
    let n = pi.norm()?;
    if n == 2 {
        return Err(modulus_error(pi, "the ramified prime 1+i is not allowed"));
    }
    let q = arith::isqrt(n);
    let prime = arith::is_prime(n) || (q * q == n && q % 4 == 3 && arith::is_prime(q));
    if !prime {
        return Err(modulus_error(pi, "modulus is not a Gaussian prime"));
    }
    let reduce = |z: GaussInt| divrem(z, pi).map(|(_, r)| r);
    let base = reduce(a)?;
    if base.is_zero() {
        return Ok(QuarticValue::Zero);
    }
    let mut e = (n - 1) / 4;
    let mut acc = GaussInt::ONE;
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = reduce(acc.checked_mul(sq)?)?;
        }
        e >>= 1;
        if e > 0 {
            sq = reduce(sq.checked_mul(sq)?)?;
        }
    }
    for k in 0..4u8 {
        if reduce(acc - GaussInt::ONE.mul_i_pow(k))?.is_zero() {
            return Ok(QuarticValue::Root(k));
        }
    }
    Err(Error::Invariant(format!(
        "{a}^((N-1)/4) is not a fourth root of unity modulo {pi}"
    )))
}

/// Exponent `k` with `(i/n)_4 = i^k`, for primary `n`.
pub fn unit_supplement(n: GaussInt) -> Result<u8> {
    if !n.is_primary() {
        return Err(Error::NotPrimary(n));
    }
    Ok(((1 - n.re as i128) / 2).rem_euclid(4) as u8)
}

/// Exponent `k` with `((1+i)/n)_4 = i^k`, for primary `n`.
pub fn ramified_supplement(n: GaussInt) -> Result<u8> {
    if !n.is_primary() {
        return Err(Error::NotPrimary(n));
    }
    let (a, b) = (n.re as i128, n.im as i128);
    let num = a - b - 1 - b * b;
    if num % 4 != 0 {
        return Err(Error::SupplementData(n));
    }
    Ok((num / 4).rem_euclid(4) as u8)
}

fn quarter_norm_is_odd(z: GaussInt) -> Result<bool> {
    Ok(((z.norm()? - 1) / 4) & 1 == 1)
}

/// `(m/n)_4` for odd `n`, by reciprocity: no factorization of `n`.
pub fn symbol(m: GaussInt, n: GaussInt) -> Result<QuarticValue> {
    if n.is_zero() || !n.is_odd() {
        return Err(modulus_error(n, "modulus must be odd and nonzero"));
    }
    m.norm()?;
    // the symbol depends on the ideal (n) only
    let (_, mut n) = primary_normalize(n)?;
    let mut m = m;
    let mut acc = 0u32;
    loop {
        if n == GaussInt::ONE {
            return Ok(QuarticValue::root(acc));
        }
        m = divrem(m, n)?.1;
        if m.is_zero() {
            return Ok(QuarticValue::Zero);
        }
        let mut e = 0u32;
        while !m.is_odd() {
            m = m.div_one_plus_i();
            e += 1;
        }
        if !e.is_multiple_of(4) {
            acc += e * ramified_supplement(n)? as u32;
        }
        let (k, odd) = primary_normalize(m)?;
        acc += k as u32 * unit_supplement(n)? as u32;
        if odd == GaussInt::ONE {
            return Ok(QuarticValue::root(acc));
        }
        if quarter_norm_is_odd(odd)? && quarter_norm_is_odd(n)? {
            acc += 2;
        }
        m = n;
        n = odd;
        acc %= 4;
    }
}

/// `χ_c(z) = (z/c)_4`.
pub fn chi_c(c: &FamilyElement, z: GaussInt) -> Result<QuarticValue> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    symbol(z, c.c)
}
