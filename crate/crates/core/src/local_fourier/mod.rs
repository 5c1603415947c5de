//! Local characters at tame places, their duals and the Fourier transforms of
//! the local counting weights.
//!
//! At a prime `q` not dividing `|H|` we split `Q_q* = Z_q* x <q>` and write a
//! character `χ: Q_q* -> H` as the pair `(χ(g), χ(q))` for the chosen
//! primitive root `g`; only the tame quotient `(Z/q)*` of `Z_q*` can map
//! nontrivially to `H`. The dual `Q_q* ⊗ Ȟ` is identified with exponent
//! vectors through a fixed basis of `H`, so `x = Σ_i (g^{u_i} q^{w_i}) ⊗ ě_i`.

mod check;
mod cyclo;
mod global;

pub use check::{local_ft_check, LocalCheckReport};
pub use cyclo::{ratio_f64, root_of_unity, CyclotomicSum, Rational};
pub use global::{nu_eta_x, quadratic_kernel, splitting_indicator, GlobalDualElement, KummerDegrees, SplitField};

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::abelian_group::{standard_l, Element, FinAbGroup, Subgroup};
use crate::arith::{dlog_mod, factorize, gcd, is_prime, least_primitive_root};
use crate::error::{Error, Result};

/// A prime `q` with its primitive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalPlace {
    pub q: u64,
    pub primitive_root: u64,
}

impl LocalPlace {
    pub fn new(q: u64) -> Result<LocalPlace> {
        if !is_prime(q) {
            return Err(Error::Argument(format!("{q} is not prime")));
        }
        Ok(LocalPlace {
            q,
            primitive_root: least_primitive_root(q),
        })
    }

    /// Discrete logarithm of the unit `u` reduced modulo `gcd(n, q - 1)`.
    pub fn dlog(&self, u: i64, n: u64) -> u64 {
        let m = gcd(n, self.q - 1);
        if m == 1 {
            return 0;
        }
        let r = u.rem_euclid(self.q as i64) as u64;
        dlog_mod(r, self.primitive_root, self.q, self.q - 1, m).expect("unit modulo q")
    }
}

/// A subgroup `J` of `G` with a fixed basis, used both as the target of local
/// characters and, through the basis, as its own dual.
#[derive(Clone, Debug)]
pub struct CharacterGroup {
    ambient: FinAbGroup,
    sub: Subgroup,
    basis: Vec<Element>,
    orders: Vec<u64>,
    exponent: u64,
    elements: Vec<Element>,
    coords: HashMap<Element, Vec<u64>>,
}

impl CharacterGroup {
    pub fn new(sub: &Subgroup) -> CharacterGroup {
        let ambient = sub.ambient().clone();
        let (abs, basis) = sub.abstract_basis();
        let orders = abs.orders().to_vec();
        let exponent = abs.exponent();
        let mut elements = vec![ambient.identity()];
        let mut coords_list = vec![vec![0u64; orders.len()]];
        for (i, (b, &n)) in basis.iter().zip(&orders).enumerate() {
            let mut next = Vec::with_capacity(elements.len() * n as usize);
            let mut next_coords = Vec::with_capacity(elements.len() * n as usize);
            for (x, c) in elements.iter().zip(&coords_list) {
                let mut y = x.clone();
                for k in 0..n {
                    let mut cc = c.clone();
                    cc[i] = k;
                    next.push(y.clone());
                    next_coords.push(cc);
                    y = ambient.add(&y, b);
                }
            }
            elements = next;
            coords_list = next_coords;
        }
        let coords = elements.iter().cloned().zip(coords_list).collect();
        CharacterGroup {
            ambient,
            sub: sub.clone(),
            basis,
            orders,
            exponent,
            elements,
            coords,
        }
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn coords(&self, x: &Element) -> Option<&[u64]> {
        self.coords.get(x).map(Vec::as_slice)
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.coords.contains_key(x)
    }

    /// Elements killed by `n`.
    pub fn torsion(&self, n: u64) -> Vec<Element> {
        self.elements
            .iter()
            .filter(|x| n % self.ambient.element_order(x) == 0)
            .cloned()
            .collect()
    }

    /// The element with the given coordinates.
    pub fn from_coords(&self, c: &[u64]) -> Element {
        let mut acc = self.ambient.identity();
        for (b, &k) in self.basis.iter().zip(c) {
            acc = self.ambient.add(&acc, &self.ambient.scale(b, k));
        }
        acc
    }

    /// `k` with `ě(a) = k / exp(J)` summed against the dual coordinates `y`,
    /// i.e. the pairing of `a ∈ J` with `Σ y_i ě_i` is `ζ^k`.
    pub fn pair_exponent(&self, a: &Element, y: &[u64]) -> u64 {
        let c = self.coords(a).expect("element of the character group");
        let n = self.exponent;
        let mut k: u128 = 0;
        for ((&ci, &yi), &ni) in c.iter().zip(y).zip(&self.orders) {
            k += ci as u128 * yi as u128 * (n / ni) as u128;
        }
        (k % n as u128) as u64
    }
}

/// `χ_v` as `(χ_v(g), χ_v(q))` in the ambient group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalCharacter {
    pub ramified: Element,
    pub unramified: Element,
}

impl LocalCharacter {
    pub fn trivial(group: &FinAbGroup) -> LocalCharacter {
        LocalCharacter {
            ramified: group.identity(),
            unramified: group.identity(),
        }
    }

    pub fn add(&self, group: &FinAbGroup, other: &LocalCharacter) -> LocalCharacter {
        LocalCharacter {
            ramified: group.add(&self.ramified, &other.ramified),
            unramified: group.add(&self.unramified, &other.unramified),
        }
    }

    pub fn neg(&self, group: &FinAbGroup) -> LocalCharacter {
        LocalCharacter {
            ramified: group.neg(&self.ramified),
            unramified: group.neg(&self.unramified),
        }
    }
}

/// All characters `Q_q* -> J`.
pub fn local_characters(place: &LocalPlace, chars: &CharacterGroup) -> Vec<LocalCharacter> {
    let ram = chars.torsion(place.q - 1);
    let mut out = Vec::with_capacity(ram.len() * chars.elements().len());
    for a in &ram {
        for b in chars.elements() {
            out.push(LocalCharacter {
                ramified: a.clone(),
                unramified: b.clone(),
            });
        }
    }
    out
}

/// `x ∈ Q_q* ⊗ J̌`: unit exponents `u_i` modulo `gcd(n_i, q - 1)` and
/// valuation exponents `w_i` modulo `n_i` over the basis of `J`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualLocalElement {
    pub unit: Vec<u64>,
    pub valuation: Vec<u64>,
}

impl DualLocalElement {
    pub fn zero(chars: &CharacterGroup) -> DualLocalElement {
        let r = chars.orders().len();
        DualLocalElement {
            unit: vec![0; r],
            valuation: vec![0; r],
        }
    }

    pub fn new(
        place: &LocalPlace,
        chars: &CharacterGroup,
        unit: &[u64],
        valuation: &[u64],
    ) -> Result<DualLocalElement> {
        let r = chars.orders().len();
        if unit.len() != r || valuation.len() != r {
            return Err(Error::Argument(format!("dual element needs {r} coordinates")));
        }
        Ok(DualLocalElement {
            unit: unit
                .iter()
                .zip(chars.orders())
                .map(|(&u, &n)| u % gcd(n, place.q - 1))
                .collect(),
            valuation: valuation.iter().zip(chars.orders()).map(|(&w, &n)| w % n).collect(),
        })
    }

    /// `u ⊗ y` for a unit `u` and dual coordinates `y`.
    pub fn from_unit(place: &LocalPlace, chars: &CharacterGroup, u: i64, y: &[u64]) -> DualLocalElement {
        let unit: Vec<u64> = chars
            .orders()
            .iter()
            .zip(y)
            .map(|(&n, &yi)| {
                let m = gcd(n, place.q - 1);
                (place.dlog(u, n) * (yi % m)) % m
            })
            .collect();
        DualLocalElement {
            unit,
            valuation: vec![0; chars.orders().len()],
        }
    }

    /// Every element of `Q_q* ⊗ J̌`.
    pub fn all(place: &LocalPlace, chars: &CharacterGroup) -> Vec<DualLocalElement> {
        let mut radices: Vec<u64> = chars.orders().iter().map(|&n| gcd(n, place.q - 1)).collect();
        radices.extend_from_slice(chars.orders());
        let r = chars.orders().len();
        mixed_radix(&radices)
            .into_iter()
            .map(|v| DualLocalElement {
                unit: v[..r].to_vec(),
                valuation: v[r..].to_vec(),
            })
            .collect()
    }

    pub fn has_valuation(&self) -> bool {
        self.valuation.iter().any(|&w| w != 0)
    }
}

pub(crate) fn mixed_radix(radices: &[u64]) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![Vec::with_capacity(radices.len())];
    for &n in radices {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out
}

fn check_character(place: &LocalPlace, chars: &CharacterGroup, chi: &LocalCharacter) -> Result<()> {
    let g = chars.ambient();
    if !chars.contains(&chi.ramified) || !chars.contains(&chi.unramified) {
        return Err(Error::Argument("character does not take values in the target".into()));
    }
    if (place.q - 1) % g.element_order(&chi.ramified) != 0 {
        return Err(Error::Argument(format!(
            "ramified part has order not dividing {}",
            place.q - 1
        )));
    }
    Ok(())
}

/// `k` with `<χ, x> = ζ_{exp J}^k`.
pub fn pairing_exponent(
    place: &LocalPlace,
    chars: &CharacterGroup,
    chi: &LocalCharacter,
    x: &DualLocalElement,
) -> Result<u64> {
    check_character(place, chars, chi)?;
    if x.unit.len() != chars.orders().len() || x.valuation.len() != chars.orders().len() {
        return Err(Error::Argument("dual element has the wrong length".into()));
    }
    let n = chars.exponent();
    Ok((chars.pair_exponent(&chi.ramified, &x.unit) + chars.pair_exponent(&chi.unramified, &x.valuation)) % n)
}

/// `<χ_v, x_v>` as a complex root of unity.
pub fn pairing(
    place: &LocalPlace,
    chars: &CharacterGroup,
    chi: &LocalCharacter,
    x: &DualLocalElement,
) -> Result<Complex64> {
    Ok(root_of_unity(pairing_exponent(place, chars, chi, x)?, chars.exponent()))
}

/// The local condition attached to `L` and `V = <e_1^{Q^{a_1 - 1}}>`.
#[derive(Clone, Debug)]
pub struct Condition {
    pub l: Subgroup,
    pub v: Element,
    pub q: u64,
}

impl Condition {
    /// `L = <M, e_1, ..., e_{t-1}, e_t^Q>` and `V` generated by
    /// `e_1^{Q^{a_1 - 1}}`.
    pub fn standard(group: &FinAbGroup) -> Result<Condition> {
        Self::with_l(group, standard_l(group)?)
    }

    pub fn with_l(group: &FinAbGroup, l: Subgroup) -> Result<Condition> {
        group.require_noncyclic_sylow()?;
        let q = group.q_small().expect("nontrivial group");
        let a1 = group.q_exponents()[0];
        let v = group.scale(&group.e(1), q.pow(a1 - 1));
        Ok(Condition { l, v, q })
    }

    pub fn v_subgroup(&self) -> Subgroup {
        Subgroup::generated(self.l.ambient(), std::slice::from_ref(&self.v))
    }
}

/// `f_v(χ)` at a place outside `S`: zero exactly when `V` lies in the inertia
/// image and `χ(q) ∉ L`.
pub fn f_v(group: &FinAbGroup, chi: &LocalCharacter, cond: &Condition) -> bool {
    let inertia = Subgroup::generated(group, std::slice::from_ref(&chi.ramified));
    !(inertia.contains(&cond.v) && !cond.l.contains(&chi.unramified))
}

/// Exponent of `q` in `Φ_H(χ)` for a character whose ramified part has order `d`.
pub fn phi_exponent(d: u64, h_order: u64) -> u64 {
    debug_assert!(h_order % d == 0);
    h_order - h_order / d
}

/// `Φ_H(χ_v) = q^{|H|(1 - 1/d)}`.
pub fn phi_local(place: &LocalPlace, group: &FinAbGroup, chi: &LocalCharacter, h_order: u64) -> u128 {
    let d = group.element_order(&chi.ramified);
    crate::arith::sat_pow(place.q, phi_exponent(d, h_order))
}

/// Which image of a subgroup of `Q_q*` to test against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitFlavor {
    /// `O*`
    Units,
    /// `O*^Q`
    QthPowers,
}

/// Whether `x ∈ A ⊗ Ř` in the sense that the image of `x` in `Q_q* ⊗ Ř`
/// comes from `A ⊗ Ř`, for `A = O*` or `O*^Q` and `R ≤ J`.
///
/// Decided by orthogonality: the image lies in `O* ⊗ Ř` iff it pairs
/// trivially with `Hom(Q_q*/O*, R)`, and in `O*^Q ⊗ Ř` iff in addition it
/// pairs trivially with `Hom(O*/O*^Q, R)`.
pub fn membership(
    place: &LocalPlace,
    chars: &CharacterGroup,
    x: &DualLocalElement,
    flavor: UnitFlavor,
    r: &Subgroup,
    q_small: u64,
) -> bool {
    let g = chars.ambient();
    let gens = r.generators();
    if gens.iter().any(|b| chars.pair_exponent(b, &x.valuation) != 0) {
        return false;
    }
    if flavor == UnitFlavor::Units {
        return true;
    }
    let m = gcd(q_small, place.q - 1);
    if m == 1 {
        return true;
    }
    let tors = r.meet(&Subgroup::torsion(g, m));
    tors.generators().iter().all(|a| chars.pair_exponent(a, &x.unit) == 0)
}

/// Weight whose Fourier transform is taken: characters `χ` range over
/// `Hom(Q_q*, J)`, the summand is `f(χ + η) <χ, x> q^{-w(1 - 1/d) s}` with `d`
/// the order of the ramified part of `χ + η`, and the sum is normalised by
/// `1/|J|`. Without a condition `f ≡ 1`.
#[derive(Clone, Debug)]
pub struct LocalWeight {
    pub chars: Arc<CharacterGroup>,
    pub eta: LocalCharacter,
    pub scale: u64,
    pub condition: Option<Condition>,
}

impl LocalWeight {
    /// `f_v / Φ_H^{s|G|/|H|}` on `Hom(Q_q*, H)`.
    pub fn conditioned(group: &FinAbGroup, h: &Subgroup, cond: Condition) -> LocalWeight {
        LocalWeight {
            chars: Arc::new(CharacterGroup::new(h)),
            eta: LocalCharacter::trivial(group),
            scale: group.order(),
            condition: Some(cond),
        }
    }

    /// `χ -> f_v(χη) / Φ_H(χη)^s` on `Hom(Q_q*, J)` for `J ≤ H`.
    pub fn twisted(h: &Subgroup, j: &Subgroup, eta: LocalCharacter, cond: Condition) -> LocalWeight {
        LocalWeight {
            chars: Arc::new(CharacterGroup::new(j)),
            eta,
            scale: h.order(),
            condition: Some(cond),
        }
    }

    /// `1 / Φ^{s}` with `Φ = q^{w(1 - 1/d)}` on `Hom(Q_q*, J)`.
    pub fn plain(j: &Subgroup, scale: u64) -> LocalWeight {
        LocalWeight {
            chars: Arc::new(CharacterGroup::new(j)),
            eta: LocalCharacter::trivial(j.ambient()),
            scale,
            condition: None,
        }
    }

    fn f(&self, chi: &LocalCharacter) -> bool {
        match &self.condition {
            None => true,
            Some(c) => f_v(self.chars.ambient(), chi, c),
        }
    }
}

fn q_power(q: u64, exponent: f64, s: Complex64) -> Complex64 {
    (-(exponent * (q as f64).ln()) * s).exp()
}

/// The transform by direct summation over all local characters, grouped by
/// the order `d` of the ramified part of `χ + η`.
pub fn graded_bruteforce(place: &LocalPlace, weight: &LocalWeight, x: &DualLocalElement) -> Vec<(u64, Complex64)> {
    let j = &weight.chars;
    let g = j.ambient();
    let mut acc: Vec<(u64, Complex64)> = Vec::new();
    let norm = 1.0 / j.order() as f64;
    for chi in local_characters(place, j) {
        let total = chi.add(g, &weight.eta);
        if !weight.f(&total) {
            continue;
        }
        let d = g.element_order(&total.ramified);
        let k = pairing_exponent(place, j, &chi, x).expect("characters are valid");
        let val = root_of_unity(k, j.exponent()) * norm;
        match acc.iter_mut().find(|(e, _)| *e == d) {
            Some((_, v)) => *v += val,
            None => acc.push((d, val)),
        }
    }
    acc.sort_by_key(|&(d, _)| d);
    acc
}

/// Direct evaluation of the local Fourier transform at `s`.
pub fn ft_bruteforce(place: &LocalPlace, weight: &LocalWeight, x: &DualLocalElement, s: Complex64) -> Complex64 {
    graded_bruteforce(place, weight, x)
        .into_iter()
        .map(|(d, c)| c * q_power(place.q, phi_exponent_f(d, weight.scale), s))
        .sum()
}

fn phi_exponent_f(d: u64, scale: u64) -> f64 {
    scale as f64 * (1.0 - 1.0 / d as f64)
}

/// The transform as `Σ_d c_d q^{-w(1 - 1/d)s}` with exact coefficients.
#[derive(Clone, Debug)]
pub struct GradedTransform {
    pub q: u64,
    pub scale: u64,
    pub terms: Vec<(u64, CyclotomicSum)>,
}

impl GradedTransform {
    pub fn coefficient(&self, d: u64) -> Option<&CyclotomicSum> {
        self.terms.iter().find(|(e, _)| *e == d).map(|(_, c)| c)
    }

    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(d, c)| c.to_complex() * q_power(self.q, phi_exponent_f(*d, self.scale), s))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_zero())
    }

    /// `Σ_{d > 1} |c_d|_1 q^{-w(1 - 1/d) σ}`, bounding `|value - c_1|` on
    /// `Re s >= σ`.
    pub fn deviation_bound(&self, sigma: f64) -> f64 {
        self.terms
            .iter()
            .filter(|(d, _)| *d > 1)
            .map(|(d, c)| c.l1_norm() * (self.q as f64).powf(-phi_exponent_f(*d, self.scale) * sigma))
            .sum()
    }
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, k) in factorize(n) {
        let mut next = Vec::new();
        for &d in &out {
            let mut pp = 1;
            for _ in 0..=k {
                next.push(d * pp);
                pp *= p;
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

pub(crate) fn moebius_int(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_{a ∈ J[q-1], a + η_r ∈ S} <a, x>` for a subgroup `S` of `G`: the set is
/// a coset of `K = J[q-1] ∩ S`, so the sum is `|K| <a_0, x>` when `x` is
/// orthogonal to `K` and zero otherwise.
fn coset_sum(
    j: &CharacterGroup,
    ram: &[Element],
    eta_r: &Element,
    s: &Subgroup,
    x: &DualLocalElement,
) -> CyclotomicSum {
    let g = j.ambient();
    let n = j.exponent();
    let a0 = match ram.iter().find(|a| s.contains(&g.add(a, eta_r))) {
        Some(a) => a,
        None => return CyclotomicSum::zero(n),
    };
    let kernel: Vec<&Element> = ram.iter().filter(|a| s.contains(a)).collect();
    if kernel.iter().any(|a| j.pair_exponent(a, &x.unit) != 0) {
        return CyclotomicSum::zero(n);
    }
    CyclotomicSum::rational(n, Rational::from_integer(kernel.len() as i64)).rotate(j.pair_exponent(a0, &x.unit))
}

/// The transform by the `d`-grading, with every coefficient obtained exactly
/// from character orthogonality on cosets.
///
/// Writing `c = a + η_r` for the ramified part, the sum over unramified parts
/// `b` only depends on whether `V ⊆ <c>`: if not, `f = 1` and it gives
/// `1[x_w ⊥ J]`; if so, `f = 1[b + η_ur ∈ L]` and it gives a coset sum over
/// `J ∩ L`. The sum over `a` of exact order `d` is inverted from the sums
/// over `c ∈ G[e]`, `e | d`, and for `V ⊆ <c>` over `c ∈ B_d ∩ G[e]` with
/// `B_d = {c ∈ G[d] : (d/Q) c ∈ V}`.
pub fn ft_structured(place: &LocalPlace, weight: &LocalWeight, x: &DualLocalElement) -> GradedTransform {
    let j = &weight.chars;
    let g = j.ambient();
    let n = j.exponent();
    let order_j = j.order() as i64;
    let ram = j.torsion(place.q - 1);
    let eta_r = &weight.eta.ramified;
    let eta_ur = &weight.eta.unramified;

    let free_ok = j.basis().iter().all(|b| j.pair_exponent(b, &x.valuation) == 0);
    let tau_free = if free_ok {
        CyclotomicSum::rational(n, Rational::from_integer(1))
    } else {
        CyclotomicSum::zero(n)
    };
    let tau_cond = weight.condition.as_ref().map(|c| {
        let jl: Vec<&Element> = j.elements().iter().filter(|b| c.l.contains(b)).collect();
        match j.elements().iter().find(|b| c.l.contains(&g.add(b, eta_ur))) {
            Some(b0) if jl.iter().all(|b| j.pair_exponent(b, &x.valuation) == 0) => {
                CyclotomicSum::rational(n, Rational::new(jl.len() as i64, order_j))
                    .rotate(j.pair_exponent(b0, &x.valuation))
            }
            _ => CyclotomicSum::zero(n),
        }
    });

    let top = gcd(g.exponent(), place.q - 1);
    let mut terms = Vec::new();
    for d in divisors(top) {
        let mut all = CyclotomicSum::zero(n);
        for e in divisors(d) {
            let mu = moebius_int(d / e);
            if mu != 0 {
                let cs = coset_sum(j, &ram, eta_r, &Subgroup::torsion(g, e), x);
                all.add_assign(&cs.scale(Rational::from_integer(mu)));
            }
        }
        let mut coeff = mul(&all, &tau_free);
        if let (Some(c), Some(tc)) = (&weight.condition, &tau_cond) {
            if d % c.q == 0 {
                let v = c.v_subgroup();
                let gd = Subgroup::torsion(g, d);
                let members: Vec<Element> = gd
                    .elements()
                    .into_iter()
                    .filter(|y| v.contains(&g.scale(y, d / c.q)))
                    .collect();
                let bd = Subgroup::generated(g, &members);
                let mut with_v = CyclotomicSum::zero(n);
                for e in divisors(d) {
                    let mu = moebius_int(d / e);
                    if mu != 0 {
                        let s = bd.meet(&Subgroup::torsion(g, e));
                        with_v.add_assign(&coset_sum(j, &ram, eta_r, &s, x).scale(Rational::from_integer(mu)));
                    }
                }
                let mut diff = tc.clone();
                diff.add_assign(&tau_free.scale(Rational::from_integer(-1)));
                coeff.add_assign(&mul(&with_v, &diff));
            }
        }
        terms.push((d, coeff));
    }
    GradedTransform {
        q: place.q,
        scale: weight.scale,
        terms,
    }
}

fn mul(a: &CyclotomicSum, b: &CyclotomicSum) -> CyclotomicSum {
    let mut out = CyclotomicSum::zero(a.modulus());
    for (ka, ca) in a.terms() {
        for (kb, cb) in b.terms() {
            out.add_term(ka + kb, ca * cb);
        }
    }
    out
}
