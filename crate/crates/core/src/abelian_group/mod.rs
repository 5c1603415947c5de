//! Finite abelian groups in a canonical cyclic presentation.
//!
//! A group is stored as a product of cyclic factors of prime-power order.
//! The factors are ordered as `G = M x C_{Q^a_1} x ... x C_{Q^a_t}` where `Q`
//! is the smallest prime dividing `|G|`, the `M`-part collects the factors
//! of order coprime to `Q` (sorted by prime, then exponent) and the `Q`-part
//! exponents are ascending, `a_1 <= ... <= a_t`. The generator of the `i`-th
//! `Q`-part factor is written `e_i` (1-based).

mod lemmas;
mod smith;
mod subgroup;
mod suite;
mod wedge;

pub use lemmas::{
    fiber, maximal_subgroups, pairing_phi, relaxed_subgroup, relaxed_subgroup_canonical, standard_l, upsilon_reduction,
    verify_upsilon_reduction, w_partition, UpsilonReduction, WPartition,
};
pub use smith::{mat_mul, smith_normal_form, IntMatrix, SmithForm};
pub use subgroup::{subgroups, subgroups_with_cap, Subgroup, DEFAULT_SUBGROUP_CAP};
pub use suite::{
    check_group, groups_of_order, groups_up_to, index_q_subgroups, lattice_lemma_suite, LatticeSuiteReport,
};
pub use wedge::{exterior_square, induced_wedge_image, WedgeSquare};

use std::fmt;

use crate::arith::{factorize, gcd};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    exps: Vec<u64>,
}

impl Element {
    pub fn new(exps: Vec<u64>) -> Self {
        Element { exps }
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn into_exps(self) -> Vec<u64> {
        self.exps
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    orders: Vec<u64>,
    q: Option<u64>,
    m_len: usize,
}

impl FinAbGroup {
    /// Builds the canonical presentation of `Z/n_1 x ... x Z/n_k`. Factors of
    /// order 1 are dropped; order 0 is rejected.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        let mut primary: Vec<(u64, u32)> = Vec::new();
        for &n in orders {
            if n == 0 {
                return Err(Error::Argument("cyclic factor of order 0".into()));
            }
            primary.extend(factorize(n));
        }
        let powers: Vec<u64> = primary.iter().map(|&(p, k)| p.pow(k)).collect();
        Ok(Self::from_prime_powers(&powers).0)
    }

    /// Canonical group on prime-power factors. Returns the group and, for each
    /// canonical factor, the index of the input factor it came from. Inputs of
    /// order 1 are dropped.
    pub(crate) fn from_prime_powers(powers: &[u64]) -> (Self, Vec<usize>) {
        let mut keyed: Vec<(u64, u32, usize)> = powers
            .iter()
            .enumerate()
            .filter(|&(_, &n)| n > 1)
            .map(|(idx, &n)| {
                let f = factorize(n);
                debug_assert_eq!(f.len(), 1, "{n} is not a prime power");
                (f[0].0, f[0].1, idx)
            })
            .collect();
        let q = keyed.iter().map(|&(p, _, _)| p).min();
        keyed.sort_by_key(|&(p, k, idx)| (Some(p) == q, p, k, idx));
        let m_len = keyed.iter().filter(|&&(p, _, _)| Some(p) != q).count();
        let group = FinAbGroup {
            orders: keyed.iter().map(|&(p, k, _)| p.pow(k)).collect(),
            q,
            m_len,
        };
        (group, keyed.into_iter().map(|(_, _, idx)| idx).collect())
    }

    pub fn trivial() -> Self {
        FinAbGroup {
            orders: Vec::new(),
            q: None,
            m_len: 0,
        }
    }

    /// Parses `"C2xC4"`, `"C3xC3xC5"`, `"C1"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let trimmed = spec.trim();
        if trimmed.is_empty() {
            return Err(Error::parse("group", spec, "empty group spec"));
        }
        let mut orders = Vec::new();
        for part in trimmed.split(['x', 'X', '*']) {
            let part = part.trim();
            let digits = part
                .strip_prefix('C')
                .or_else(|| part.strip_prefix('c'))
                .ok_or_else(|| Error::parse("group", spec, format!("factor {part:?} must look like C<n>")))?;
            let n: u64 = digits
                .parse()
                .map_err(|_| Error::parse("group", spec, format!("bad order in {part:?}")))?;
            if n == 0 {
                return Err(Error::parse("group", spec, "cyclic order must be at least 1"));
            }
            orders.push(n);
        }
        Self::from_cyclic_orders(&orders)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |a, &b| crate::arith::lcm(a, b))
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// Smallest prime dividing the order.
    pub fn q_small(&self) -> Option<u64> {
        self.q
    }

    /// Number of `M`-part factors; `Q`-part factor `i` (0-based) sits at index `m_len + i`.
    pub fn m_len(&self) -> usize {
        self.m_len
    }

    /// `t`, the number of cyclic factors in the `Q`-Sylow subgroup.
    pub fn t(&self) -> usize {
        self.orders.len() - self.m_len
    }

    /// Exponents `a_1 <= ... <= a_t` of the `Q`-part.
    pub fn q_exponents(&self) -> Vec<u32> {
        let q = match self.q {
            Some(q) => q,
            None => return Vec::new(),
        };
        self.orders[self.m_len..]
            .iter()
            .map(|&n| crate::arith::valuation(n, q))
            .collect()
    }

    /// Factor index of `e_i` (1-based `i`).
    pub fn e_index(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.t(), "e_{i} out of range");
        self.m_len + i - 1
    }

    /// `e_i` as an element (1-based `i`).
    pub fn e(&self, i: usize) -> Element {
        self.basis_element(self.e_index(i))
    }

    pub fn basis_element(&self, idx: usize) -> Element {
        let mut v = vec![0; self.rank()];
        if self.orders[idx] > 1 {
            v[idx] = 1;
        }
        Element::new(v)
    }

    /// Requires a non-cyclic `Q`-Sylow subgroup (`t >= 2`).
    pub fn require_noncyclic_sylow(&self) -> Result<()> {
        if self.t() < 2 {
            return Err(Error::Argument(format!(
                "group {self} has cyclic Q-Sylow subgroup (t = {})",
                self.t()
            )));
        }
        Ok(())
    }

    pub fn identity(&self) -> Element {
        Element::new(vec![0; self.rank()])
    }

    pub fn element(&self, exps: &[i64]) -> Element {
        assert_eq!(exps.len(), self.rank());
        Element::new(
            exps.iter()
                .zip(&self.orders)
                .map(|(&x, &n)| x.rem_euclid(n as i64) as u64)
                .collect(),
        )
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        Element::new(
            a.exps
                .iter()
                .zip(&b.exps)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element::new(a.exps.iter().zip(&self.orders).map(|(&x, &n)| (n - x) % n).collect())
    }

    pub fn scale(&self, a: &Element, k: u64) -> Element {
        Element::new(
            a.exps
                .iter()
                .zip(&self.orders)
                .map(|(&x, &n)| ((x as u128 * k as u128) % n as u128) as u64)
                .collect(),
        )
    }

    pub fn is_identity(&self, a: &Element) -> bool {
        a.exps.iter().all(|&x| x == 0)
    }

    pub fn element_order(&self, a: &Element) -> u64 {
        a.exps
            .iter()
            .zip(&self.orders)
            .fold(1, |acc, (&x, &n)| crate::arith::lcm(acc, n / gcd(x, n)))
    }

    /// All elements in mixed-radix order (first factor varies slowest).
    pub fn elements(&self) -> Vec<Element> {
        let mut out = vec![Vec::new()];
        for &n in &self.orders {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..n).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(Element::new).collect()
    }

    /// Mixed-radix index of an element in [`FinAbGroup::elements`].
    pub fn encode(&self, a: &Element) -> u64 {
        a.exps.iter().zip(&self.orders).fold(0, |acc, (&x, &n)| acc * n + x)
    }

    /// Elements killed by `n`.
    pub fn torsion_elements(&self, n: u64) -> Vec<Element> {
        let mut out = vec![Vec::new()];
        for &d in &self.orders {
            let step = d / gcd(d, n);
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).step_by(step as usize).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(Element::new).collect()
    }

    /// Invariant factors `d_1 | d_2 | ...` (all > 1).
    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors_of(&self.orders)
    }

    pub fn is_isomorphic(&self, other: &FinAbGroup) -> bool {
        self.orders == other.orders
    }

    /// Dimension of `G / QG` over `F_Q`.
    pub fn q_rank(&self, q: u64) -> usize {
        self.orders.iter().filter(|&&n| n % q == 0).count()
    }

    /// `|G[n]|`.
    pub fn torsion_size(&self, n: u64) -> u64 {
        self.orders.iter().map(|&d| gcd(d, n)).product()
    }

    /// `|Hom(self, other)|`.
    pub fn hom_count(&self, other: &FinAbGroup) -> u64 {
        self.orders
            .iter()
            .flat_map(|&a| other.orders.iter().map(move |&b| gcd(a, b)))
            .product()
    }

    /// `alpha(G) = |G| (1 - 1/Q)`, as a rational `(num, den)`.
    pub fn alpha(&self) -> (u64, u64) {
        match self.q {
            Some(q) => (self.order() * (q - 1), q),
            None => (0, 1),
        }
    }

    pub fn spec_string(&self) -> String {
        if self.orders.is_empty() {
            return "C1".into();
        }
        self.orders
            .iter()
            .map(|n| format!("C{n}"))
            .collect::<Vec<_>>()
            .join("x")
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

fn invariant_factors_of(orders: &[u64]) -> Vec<u64> {
    // group prime powers by prime, largest exponents combine into the last factor
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
    for &n in orders {
        for (p, k) in factorize(n) {
            by_prime.entry(p).or_default().push(p.pow(k));
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for mut powers in by_prime.into_values() {
        powers.sort_unstable();
        let offset = len - powers.len();
        for (i, pk) in powers.into_iter().enumerate() {
            out[offset + i] *= pk;
        }
    }
    out
}

/// Möbius function on isomorphism classes of finite abelian groups:
/// zero if some invariant factor is divisible by `p^2`, multiplicative over
/// coprime parts, and `(-1)^n p^{n(n-1)/2}` on `(Z/p)^n`.
pub fn moebius(group: &FinAbGroup) -> i64 {
    let mut by_prime: std::collections::BTreeMap<u64, u32> = Default::default();
    for &n in group.orders() {
        let f = factorize(n);
        if f.len() != 1 || f[0].1 != 1 {
            return 0;
        }
        *by_prime.entry(f[0].0).or_default() += 1;
    }
    by_prime.into_iter().fold(1i64, |acc, (p, n)| {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        acc * sign * (p as i64).pow(n * (n - 1) / 2)
    })
}

/// `F_Q`-rank of a group: number of invariant factors divisible by `q`.
pub fn q_rank(group: &FinAbGroup, q: u64) -> usize {
    group.q_rank(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FinAbGroup {
        FinAbGroup::parse(s).unwrap()
    }

    #[test]
    fn canonical_presentation() {
        let a = g("C4xC2");
        assert_eq!(a.orders(), &[2, 4]);
        assert_eq!(a.q_small(), Some(2));
        assert_eq!(a.t(), 2);
        assert_eq!(a.q_exponents(), vec![1, 2]);
        let b = g("C6xC2");
        assert_eq!(b.orders(), &[3, 2, 2]);
        assert_eq!(b.m_len(), 1);
        assert_eq!(g("C1").order(), 1);
        assert!(g("C1").is_trivial());
        assert_eq!(g("C12xC2").invariant_factors(), vec![2, 12]);
        assert_eq!(g("C3xC3xC5").spec_string(), "C5xC3xC3");
    }

    #[test]
    fn parse_errors() {
        assert!(FinAbGroup::parse("C0").is_err());
        assert!(FinAbGroup::parse("").is_err());
        assert!(FinAbGroup::parse("Z2").is_err());
        assert!(FinAbGroup::parse("C2xCx").is_err());
    }

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(&FinAbGroup::trivial()), 1);
        assert_eq!(moebius(&g("C2")), -1);
        assert_eq!(moebius(&g("C3xC3")), 3);
        assert_eq!(moebius(&g("C4")), 0);
        assert_eq!(moebius(&g("C2xC2xC2")), -8);
        assert_eq!(moebius(&g("C6")), 1);
    }

    #[test]
    fn q_ranks() {
        assert_eq!(q_rank(&FinAbGroup::trivial(), 2), 0);
        assert_eq!(q_rank(&g("C12xC2"), 2), 2);
        assert_eq!(q_rank(&g("C3xC3xC9"), 3), 3);
    }

    #[test]
    fn element_arithmetic() {
        let a = g("C2xC4");
        let x = a.element(&[1, 3]);
        assert_eq!(a.element_order(&x), 4);
        assert_eq!(a.add(&x, &x), a.element(&[0, 2]));
        assert_eq!(a.neg(&x), a.element(&[1, 1]));
        assert_eq!(a.elements().len(), 8);
        assert_eq!(a.torsion_elements(2).len(), 4);
        assert_eq!(a.encode(&x), 7);
    }
}
