//! Parsers for command-line values.

use hasse_core::arith::{is_prime, parse_exact_integer};
use num_complex::Complex64;

/// `"1e8"`, `"100000000"`; must be at least 1.
pub fn bound(s: &str) -> Result<u128, String> {
    match parse_exact_integer(s) {
        Some(0) => Err(format!("bound {s:?} must be at least 1")),
        Some(b) => Ok(b),
        None => Err(format!("{s:?} is not an exact integer")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeList(pub Vec<u64>);

/// Comma-separated primes and inclusive ranges, e.g. `"2,7"` or `"3..97"`.
/// Ranges keep only their primes; listed values must be prime.
pub fn prime_list(s: &str) -> Result<PrimeList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let lo: u64 = a.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
            let hi: u64 = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| format!("bad range end in {part:?}"))?;
            if lo > hi {
                return Err(format!("empty range {part:?}"));
            }
            out.extend((lo..=hi).filter(|&p| is_prime(p)));
        } else {
            let p: u64 = part.parse().map_err(|_| format!("{part:?} is not an integer"))?;
            if !is_prime(p) {
                return Err(format!("{p} is not prime"));
            }
            out.push(p);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(PrimeList(out))
}

/// A complex number `"0.7"`, `"0.5+0.5i"`, `"1-2i"` or `"2i"`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim().replace(' ', "");
    let err = || format!("{s:?} is not a complex number");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| err());
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(k, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| err())?,
    };
    let re = re.parse::<f64>().map_err(|_| err())?;
    Ok(Complex64::new(re, im))
}

pub fn real(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !x.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(x)
}
