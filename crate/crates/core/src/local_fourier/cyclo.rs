//! Exact elements of `Q(ζ_N)` written as rational combinations of powers of
//! a fixed primitive `N`-th root of unity.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Rational = Ratio<i64>;

/// `Σ_k c_k ζ_N^k` with `ζ_N = exp(2πi/N)`. Terms are kept with distinct
/// exponents in `[0, N)` and nonzero coefficients; no reduction modulo the
/// cyclotomic polynomial is performed, so equality of two values is only
/// decided by [`CyclotomicSum::is_zero`] after subtraction in the cases where
/// the terms are linearly independent (for example all on the exponent 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicSum {
    n: u64,
    terms: BTreeMap<u64, Rational>,
}

impl CyclotomicSum {
    pub fn zero(n: u64) -> Self {
        assert!(n >= 1);
        CyclotomicSum {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn rational(n: u64, c: Rational) -> Self {
        let mut z = Self::zero(n);
        z.add_term(0, c);
        z
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn add_term(&mut self, k: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let k = k % self.n;
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_assign(&mut self, other: &CyclotomicSum) {
        assert_eq!(self.n, other.n);
        for (&k, &c) in &other.terms {
            self.add_term(k, c);
        }
    }

    pub fn scale(&self, c: Rational) -> CyclotomicSum {
        let mut out = Self::zero(self.n);
        for (&k, &v) in &self.terms {
            out.add_term(k, v * c);
        }
        out
    }

    /// Multiplication by `ζ_N^k`.
    pub fn rotate(&self, k: u64) -> CyclotomicSum {
        let mut out = Self::zero(self.n);
        for (&j, &v) in &self.terms {
            out.add_term(j + k, v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when it is a rational number carried on `ζ^0` alone.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).copied(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Rational)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    /// Sum of the absolute values of the coefficients, an upper bound for the
    /// modulus of the value.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| ratio_f64(c.abs())).sum()
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(&k, c)| Complex64::from_polar(ratio_f64(*c), TAU * k as f64 / self.n as f64))
            .sum()
    }
}

pub fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `exp(2πi k / n)`.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % n) as f64 / n as f64)
}
