//! Rational-integer helpers: sieving, primality, modular powers and
//! sums of two squares.

/// All primes `p <= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    // odd-only sieve: index k stands for 2k + 1
    let half = limit / 2 + 1;
    let mut composite = vec![false; half];
    let mut k = 1;
    while (2 * k + 1) * (2 * k + 1) <= limit {
        if !composite[k] {
            let p = 2 * k + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        k += 1;
    }
    let mut out = vec![2u64];
    out.extend(
        (1..half)
            .filter(|&k| !composite[k] && 2 * k < limit)
            .map(|k| (2 * k + 1) as u64),
    );
    out
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization, ascending primes.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while n.is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// A square root of -1 modulo a prime `p ≡ 1 (mod 4)`.
pub fn sqrt_minus_one(p: u64) -> u64 {
    debug_assert!(p % 4 == 1);
    let e = (p - 1) / 4;
    for g in 2..p {
        let r = pow_mod(g, e, p);
        if mul_mod(r, r, p) == p - 1 {
            return r;
        }
    }
    unreachable!("{p} is not a prime congruent to 1 mod 4")
}

/// `(a, b)` with `a^2 + b^2 = p`, `a` odd, for a prime `p ≡ 1 (mod 4)`.
///
/// Cornacchia's algorithm: run Euclid on `(p, r)` with `r^2 ≡ -1` until the
/// remainder drops below `sqrt(p)`.
pub fn two_squares(p: u64) -> (u64, u64) {
    let r = sqrt_minus_one(p);
    let bound = isqrt(p);
    let (mut a, mut b) = (p, r.min(p - r));
    while b > bound {
        let t = a % b;
        a = b;
        b = t;
    }
    let rest = p - b * b;
    let c = isqrt(rest);
    debug_assert_eq!(b * b + c * c, p);
    if b % 2 == 1 {
        (b, c)
    } else {
        (c, b)
    }
}

/// Kronecker symbol `(-4 / n)`: the non-principal character mod 4.
pub fn chi_minus_four(n: u64) -> i64 {
    match n % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}
