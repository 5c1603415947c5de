//! Elementary integer arithmetic: gcd, modular powers, factorisation,
//! primitive roots and small discrete logarithms.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Extended Euclid on signed integers: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Multiplicative inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Prime factorisation by trial division, as `(p, k)` pairs with `p` ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn smallest_prime_factor(n: u64) -> Option<u64> {
    factorize(n).first().map(|&(p, _)| p)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Sieve of Eratosthenes: all primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Multiplicative order of `a` modulo `m` (`a` a unit), given the factorisation of
/// a multiple `n` of the order.
pub fn mult_order(a: u64, m: u64, n: u64) -> u64 {
    let mut ord = n;
    for (p, _) in factorize(n) {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    ord
}

/// Least primitive root modulo the odd prime `p`.
pub fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = factorize(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Canonical primitive root modulo `p^k` for odd `p`: the least primitive root
/// `r` modulo `p`, replaced by `r + p` when `k >= 2` and `r^(p-1) = 1 mod p^2`.
/// The value is congruent to `r` modulo `p`, so characters at different levels
/// are compatible under reduction.
pub fn canonical_primitive_root(p: u64, k: u32) -> u64 {
    let r = least_primitive_root(p);
    if k >= 2 && pow_mod(r, p - 1, p * p) == 1 {
        r + p
    } else {
        r
    }
}

/// Discrete logarithm of `a` to base `g` modulo `m`, reduced modulo `n`, where
/// `g` has order `ord` and `n | ord`. Solved in the order-`n` quotient by a
/// linear scan, so `n` should be small.
pub fn dlog_mod(a: u64, g: u64, m: u64, ord: u64, n: u64) -> Option<u64> {
    debug_assert!(ord % n == 0);
    let e = ord / n;
    let target = pow_mod(a, e, m);
    let zeta = pow_mod(g, e, m);
    let mut cur = 1 % m;
    for r in 0..n {
        if cur == target {
            return Some(r);
        }
        cur = mul_mod(cur, zeta, m);
    }
    None
}

/// Exact integer r-th root: the largest `x` with `x^r <= n`.
pub fn iroot(n: u128, r: u32) -> u128 {
    if r == 0 {
        return u128::MAX;
    }
    if r == 1 || n < 2 {
        return n;
    }
    let mut x = (n as f64).powf(1.0 / r as f64) as u128;
    while x > 0 && checked_pow(x, r).map_or(true, |v| v > n) {
        x -= 1;
    }
    while checked_pow(x + 1, r).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

pub fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

/// Integer power saturating at `u128::MAX`.
pub fn sat_pow(base: u64, exp: u64) -> u128 {
    if exp > u32::MAX as u64 {
        return if base <= 1 { base as u128 } else { u128::MAX };
    }
    (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

/// Parses a positive integer written in decimal or scientific notation
/// (`"10000"`, `"1e8"`, `"2.5e3"`); the value must be an exact integer.
pub fn parse_exact_integer(s: &str) -> Option<u128> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<u32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let frac_trim = frac_part.trim_end_matches('0');
    if frac_trim.len() as u32 > exp {
        return None;
    }
    let digits = format!("{int_part}{frac_trim}");
    let mut value: u128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    for _ in 0..(exp - frac_trim.len() as u32) {
        value = value.checked_mul(10)?;
    }
    Some(value)
}
