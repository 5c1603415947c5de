//! Counting functions for abelian extensions subject to the local condition
//! `f`, Möbius inversion over the subgroup lattice, the truncated Poisson
//! identity, and growth-trend experiments.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian_group::{moebius, subgroups, Element, FinAbGroup, Subgroup};
use crate::arith::{primes_up_to, valuation};
use crate::dirichlet_cft::{GExtension, HomEnumerator, LocalPiece, UnitComponent};
use crate::error::{Error, Result};
use crate::local_fourier::{
    ft_structured, root_of_unity, CharacterGroup, Condition, GlobalDualElement, LocalCharacter, LocalPlace, LocalWeight,
};
use crate::norm_principle::non_increasing_with_tolerance;

/// Relative size of the single inversion tolerated by the trend checks.
pub const TREND_TOLERANCE: f64 = 0.10;

fn smallest_prime(g: &FinAbGroup) -> Result<u64> {
    g.q_small().ok_or_else(|| Error::Argument("trivial group".into()))
}

/// `α(G) = |G|(1 - 1/Q)`.
pub fn alpha(g: &FinAbGroup) -> Result<f64> {
    let q = smallest_prime(g)? as f64;
    Ok(g.order() as f64 * (1.0 - 1.0 / q))
}

/// `ν(Q, G) = (|G[Q]| - 1)/(Q - 1)`.
pub fn nu(g: &FinAbGroup) -> Result<f64> {
    let q = smallest_prime(g)?;
    let tors = g.torsion_elements(q).len() as f64;
    Ok((tors - 1.0) / (q as f64 - 1.0))
}

/// Primes dividing `|G|`.
pub fn default_s(g: &FinAbGroup) -> Vec<u64> {
    crate::norm_principle::default_s(g)
}

/// `f(χ) = ∏_{p ∉ S} f_p(χ_p)`: zero exactly when some ramified `p ∉ S` has
/// inertia containing `V` and Frobenius outside `L`.
pub fn f_global(ext: &GExtension, cond: &Condition, s_primes: &[u64]) -> bool {
    ext.ramified_primes()
        .into_iter()
        .filter(|p| !s_primes.contains(p))
        .all(|p| {
            let sym = ext.local_symbol(p);
            !(sym.inertia.contains(&cond.v) && !cond.l.contains(&sym.frobenius))
        })
}

fn condition_for(l: &Subgroup) -> Result<Option<Condition>> {
    if l.is_whole() {
        return Ok(None);
    }
    Ok(Some(Condition::with_l(l.ambient(), l.clone())?))
}

fn f_opt(ext: &GExtension, cond: &Option<Condition>, s: &[u64]) -> bool {
    cond.as_ref().map_or(true, |c| f_global(ext, c, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CountMode {
    /// Surjective homs onto `H` with `Δ <= B` and `f = 1`.
    NStar,
    /// All homs into `H` with `Φ_H <= B` and `f = 1`.
    NH,
    /// All homs into `H` with `Φ_H <= B`.
    NPlain,
}

#[derive(Clone, Debug)]
pub struct CountSpec {
    pub l: Subgroup,
    pub h: Subgroup,
    pub bound: u128,
    pub mode: CountMode,
    pub s_primes: Vec<u64>,
    pub budget: Option<u64>,
}

impl CountSpec {
    pub fn new(l: Subgroup, h: Subgroup, bound: u128, mode: CountMode) -> Result<CountSpec> {
        if l.ambient() != h.ambient() {
            return Err(Error::Argument("L and H live in different groups".into()));
        }
        if bound == 0 {
            return Err(Error::Argument("bound must be at least 1".into()));
        }
        let s_primes = default_s(l.ambient());
        Ok(CountSpec {
            l,
            h,
            bound,
            mode,
            s_primes,
            budget: None,
        })
    }

    pub fn ambient(&self) -> &FinAbGroup {
        self.l.ambient()
    }
}

pub fn count(spec: &CountSpec) -> Result<u64> {
    let cond = match spec.mode {
        CountMode::NPlain => None,
        _ => condition_for(&spec.l)?,
    };
    let en = HomEnumerator::new(&spec.h, spec.bound)?
        .surjective_only(spec.mode == CountMode::NStar)
        .budget(spec.budget);
    let s = &spec.s_primes;
    en.fold(
        || 0u64,
        |acc, e, _| {
            if f_opt(e, &cond, s) {
                *acc += 1
            }
        },
        |a, b| a + b,
    )
}

/// Counts of homs into `target` with `f = 1`, ordered by `Φ_W` for
/// `|W| = weight`, at each of the given bounds.
fn counts_at_bounds(
    target: &Subgroup,
    weight: u64,
    bounds: &[u128],
    cond: &Option<Condition>,
    s: &[u64],
    budget: Option<u64>,
) -> Result<Vec<u64>> {
    let top = bounds.iter().copied().max().unwrap_or(1);
    let mut phis = HomEnumerator::weighted(target, weight, top)?.budget(budget).fold(
        Vec::new,
        |acc, e, phi| {
            if f_opt(e, cond, s) {
                acc.push(phi)
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    phis.sort_unstable();
    Ok(bounds.iter().map(|b| phis.partition_point(|p| p <= b) as u64).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct MoebiusTerm {
    pub subgroup: String,
    pub order: u64,
    pub mu: i64,
    /// `B^{|H|/|G|}`.
    pub bound: f64,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MoebiusReport {
    pub group: String,
    pub bound: u128,
    pub lhs: u64,
    pub rhs: i64,
    pub terms: Vec<MoebiusTerm>,
}

impl MoebiusReport {
    pub fn exact(&self) -> bool {
        self.rhs >= 0 && self.lhs == self.rhs as u64
    }
}

/// Computes `N*(G, L; B)` directly and as `Σ_H μ(G/H) N(H, L; B^{|H|/|G|})`.
///
/// `Φ_H(χ) <= B^{|H|/|G|}` is tested as `Φ_H(χ)^{|G|/|H|} <= B`, i.e. by
/// enumerating homs into `H` with the exponents of weight `|G|`, so no
/// rounding of fractional bounds is involved.
pub fn moebius_inversion_check(l: &Subgroup, bound: u128, budget: Option<u64>) -> Result<MoebiusReport> {
    let g = l.ambient();
    let whole = Subgroup::whole(g);
    let s = default_s(g);
    let cond = condition_for(l)?;
    let lhs = count(&CountSpec {
        budget,
        ..CountSpec::new(l.clone(), whole, bound, CountMode::NStar)?
    })?;
    let mut terms = Vec::new();
    let mut rhs = 0i64;
    for h in subgroups(g)? {
        let mu = moebius(&h.quotient_type());
        if mu == 0 {
            continue;
        }
        let c = counts_at_bounds(&h, g.order(), &[bound], &cond, &s, budget)?[0];
        rhs += mu * c as i64;
        terms.push(MoebiusTerm {
            subgroup: h.to_string(),
            order: h.order(),
            mu,
            bound: (bound as f64).powf(h.order() as f64 / g.order() as f64),
            count: c,
        });
    }
    Ok(MoebiusReport {
        group: g.spec_string(),
        bound,
        lhs,
        rhs,
        terms,
    })
}

/// The inverse hom `-η`.
pub fn negate(ext: &GExtension) -> GExtension {
    let g = ext.group();
    let pieces = ext
        .pieces
        .iter()
        .map(|pc| LocalPiece::new(g, pc.component.clone(), pc.images.iter().map(|x| g.neg(x)).collect()))
        .collect();
    GExtension::from_pieces(ext.target.clone(), pieces)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EulerValue {
    pub re: f64,
    pub im: f64,
    /// Bound for `|h(x; s) - truncated value|`.
    pub tail: f64,
}

impl EulerValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LhsValue {
    pub re: f64,
    pub im: f64,
    pub terms: u64,
    pub terms_half: u64,
    pub growth_exponent: f64,
    pub log_exponent: f64,
    pub tail: f64,
}

/// The data of one twisted sum `Σ_{χ into J} f(χη) / Φ_H(χη)^s` with
/// `J = H ∩ L` of index `Q` in `H`.
#[derive(Clone, Debug)]
pub struct TwistedSum {
    pub h: Subgroup,
    pub j: Subgroup,
    pub eta: GExtension,
    pub cond: Condition,
    pub s_primes: Vec<u64>,
    chars: Arc<CharacterGroup>,
}

impl TwistedSum {
    /// `eta = None` means the trivial hom.
    pub fn new(h: &Subgroup, l: &Subgroup, eta: Option<GExtension>) -> Result<TwistedSum> {
        let g = l.ambient();
        let q = smallest_prime(g)?;
        let j = h.meet(l);
        if h.order() != j.order() * q {
            return Err(Error::Argument(format!(
                "[H : H∩L] = {} is not {q}",
                h.order() / j.order()
            )));
        }
        let eta = eta.unwrap_or_else(|| GExtension::from_pieces(Arc::new(g.clone()), Vec::new()));
        if !eta.image().is_subgroup_of(h) {
            return Err(Error::NotContained("η does not take values in H".into()));
        }
        let mut s_primes = default_s(&h.isomorphism_type());
        s_primes.extend(eta.ramified_primes());
        s_primes.sort_unstable();
        s_primes.dedup();
        Ok(TwistedSum {
            cond: Condition::with_l(g, l.clone())?,
            chars: Arc::new(CharacterGroup::new(&j)),
            h: h.clone(),
            j,
            eta,
            s_primes,
        })
    }

    pub fn chars(&self) -> &Arc<CharacterGroup> {
        &self.chars
    }

    /// `1/α(H)`.
    pub fn abscissa(&self) -> Result<f64> {
        let q = smallest_prime(self.h.ambient())? as f64;
        Ok(1.0 / (self.h.order() as f64 * (1.0 - 1.0 / q)))
    }

    fn check_domain(&self, s: Complex64) -> Result<()> {
        let a = self.abscissa()?;
        if s.re <= a || !s.re.is_finite() {
            return Err(Error::Domain(format!("Re s = {} must exceed 1/α(H) = {a}", s.re)));
        }
        Ok(())
    }

    /// Dual elements `x ∈ O_S* ⊗ J̌`, the support of the dual sum.
    pub fn support(&self) -> Vec<GlobalDualElement> {
        GlobalDualElement::all(&self.chars, &self.s_primes)
    }

    /// `Σ_{χ_∞ ∈ Hom(R*, J)} <χ_∞, x>`.
    pub fn real_factor(&self, x: &GlobalDualElement) -> f64 {
        let g = self.h.ambient();
        let n = self.chars.exponent();
        let mut values = vec![g.identity(); x.units().len()];
        let mut total = Complex64::new(0.0, 0.0);
        for c in self.chars.torsion(2) {
            values[0] = c.clone();
            total += root_of_unity(x.pair_values(&values), n);
        }
        total.re
    }

    /// Local factor at a finite prime by direct summation over
    /// `Hom(Q_p*, J)`, with `f_p = 1`.
    pub fn direct_local_factor(&self, p: u64, x: &GlobalDualElement, s: Complex64) -> Complex64 {
        let g = self.h.ambient();
        let n = self.chars.exponent();
        let exp_j = self.chars.exponent();
        let eta_piece = self.eta.pieces.iter().find(|pc| pc.p() == p);
        let base = if p == 2 { 2 } else { 1 };
        let k = (base + valuation(exp_j, p)).max(eta_piece.map_or(0, |pc| pc.component.k));
        let comp = UnitComponent::new(p, k);
        let eta_imgs: Vec<Element> = comp
            .gens
            .iter()
            .map(|&u| eta_piece.map_or_else(|| g.identity(), |pc| pc.eval(g, u)))
            .collect();
        let choices: Vec<Vec<Element>> = comp
            .orders
            .iter()
            .map(|&o| {
                self.chars
                    .elements()
                    .iter()
                    .filter(|y| o % g.element_order(y) == 0)
                    .cloned()
                    .collect()
            })
            .collect();
        // S-units as p^v * w with w a p-adic unit
        let units: Vec<(u64, u64)> = x
            .units()
            .into_iter()
            .map(|u| {
                if u == p as i64 {
                    (1, 1)
                } else {
                    (0, u.rem_euclid(comp.pk as i64) as u64)
                }
            })
            .collect();
        let h_order = self.h.order();
        let ln_p = (p as f64).ln();
        let mut total = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; choices.len()];
        loop {
            let imgs: Vec<Element> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
            let piece = LocalPiece::new(g, comp.clone(), imgs.clone());
            let twisted: Vec<Element> = imgs.iter().zip(&eta_imgs).map(|(a, b)| g.add(a, &g.neg(b))).collect();
            let e = LocalPiece::new(g, comp.clone(), twisted).weighted_exponent(h_order);
            let weight = (-(e as f64) * ln_p * s).exp();
            let unit_vals: Vec<Element> = units.iter().map(|&(_, w)| piece.eval(g, w)).collect();
            for y in self.chars.elements() {
                let vals: Vec<Element> = unit_vals
                    .iter()
                    .zip(&units)
                    .map(|(a, &(v, _))| if v == 1 { g.add(a, y) } else { a.clone() })
                    .collect();
                total += weight * root_of_unity(x.pair_values(&vals), n);
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return total / self.chars.order() as f64;
                }
                idx[pos] += 1;
                if idx[pos] < choices[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Local factor at a prime `q ∉ S` from the structured transform.
    pub fn tame_local_factor(&self, q: u64, x: &GlobalDualElement, s: Complex64) -> Result<Complex64> {
        let place = LocalPlace::new(q)?;
        let g = self.h.ambient();
        let w = LocalWeight {
            chars: self.chars.clone(),
            eta: LocalCharacter {
                ramified: g.identity(),
                unramified: self.eta.eval(q),
            },
            scale: self.h.order(),
            condition: Some(self.cond.clone()),
        };
        Ok(ft_structured(&place, &w, &x.localize(&place)?).evaluate(s))
    }

    /// `∏_v h_v(x; s)` over the real place, the places of `S` and the primes
    /// `q <= P` outside `S`, with a bound for the omitted factors.
    pub fn euler_h(&self, x: &GlobalDualElement, s: Complex64, p_cut: u64) -> Result<EulerValue> {
        self.check_domain(s)?;
        if let Some(&top) = self.s_primes.last() {
            if p_cut < top {
                return Err(Error::Argument(format!(
                    "P = {p_cut} is below the largest prime {top} of S"
                )));
            }
        }
        let mut value = Complex64::new(self.real_factor(x), 0.0);
        for &p in &self.s_primes {
            value *= self.direct_local_factor(p, x, s);
        }
        let primes: Vec<u64> = primes_up_to(p_cut)
            .into_iter()
            .filter(|q| !self.s_primes.contains(q))
            .collect();
        let factors = primes
            .par_iter()
            .map(|&q| self.tame_local_factor(q, x, s))
            .collect::<Result<Vec<_>>>()?;
        for f in factors {
            value *= f;
        }
        // |h_q - 1| <= |J| q^{-σ} for q outside S, σ = |H|(1 - 1/Q) Re s
        let sigma = s.re / self.abscissa()?;
        let t = self.chars.order() as f64 * (p_cut as f64).powf(1.0 - sigma) / (sigma - 1.0);
        Ok(EulerValue {
            re: value.re,
            im: value.im,
            tail: value.norm() * t.exp_m1(),
        })
    }

    /// `Σ f(χη) / Φ_H(χη)^s` over homs `χ` into `J` with `Φ_H(χη) <= X`, with
    /// a tail estimate from the observed growth between `X/2` and `X`.
    pub fn lhs(&self, s: f64, x_cut: u128, budget: Option<u64>) -> Result<LhsValue> {
        self.check_domain(Complex64::new(s, 0.0))?;
        let half = x_cut / 2;
        let trivial_eta = self.eta.pieces.iter().all(|pc| pc.is_trivial(self.eta.group()));
        let neg_eta = negate(&self.eta);
        let en = if trivial_eta {
            HomEnumerator::weighted(&self.j, self.h.order(), x_cut)?
        } else {
            HomEnumerator::new(&self.h, x_cut)?
        }
        .budget(budget);
        type Acc = (Complex64, u64, u64);
        let (sum, terms, terms_half): Acc = en.fold(
            || (Complex64::new(0.0, 0.0), 0, 0),
            |acc, psi, phi| {
                if !trivial_eta && !psi.product(&neg_eta).image().is_subgroup_of(&self.j) {
                    return;
                }
                if !f_global(psi, &self.cond, &self.s_primes) {
                    return;
                }
                acc.0 += Complex64::new((phi as f64).powf(-s), 0.0);
                acc.1 += 1;
                if phi <= half {
                    acc.2 += 1;
                }
            },
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
        )?;
        let a_min = self.abscissa()?;
        let a = if terms_half > 0 && terms > terms_half {
            ((terms as f64) / (terms_half as f64)).log2().max(a_min)
        } else {
            a_min
        };
        let b = nu(&self.j.isomorphism_type()).map_or(0.0, |v| (v - 1.0).max(0.0));
        Ok(LhsValue {
            re: sum.re,
            im: sum.im,
            terms,
            terms_half,
            growth_exponent: a,
            log_exponent: b,
            tail: growth_tail((terms.max(1)) as f64, x_cut as f64, a, b, s),
        })
    }
}

/// `∫_X^∞ Y^{-s} dN(Y)` for `N(Y) = N (Y/X)^a (log Y / log X)^b`.
pub fn growth_tail(n: f64, x: f64, a: f64, b: f64, s: f64) -> f64 {
    if s <= a {
        return f64::INFINITY;
    }
    let t0 = x.ln();
    let width = 60.0 / (s - a);
    let steps = 4000usize;
    let h = width / steps as f64;
    let f = |t: f64| n * ((a - s) * (t - t0) - s * t0 + b * (t / t0).ln()).exp() * (a + b / t);
    let mut acc = f(t0) + f(t0 + width);
    for i in 1..steps {
        let t = t0 + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(t);
    }
    acc * h / 3.0
}

#[derive(Clone, Debug, Serialize)]
pub struct PoissonReport {
    pub s: f64,
    pub x_cut: u128,
    pub p_cut: u64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub lhs_terms: u64,
    pub support: usize,
    pub lhs_tail: f64,
    pub rhs_tail: f64,
    pub discrepancy: f64,
    pub relative: f64,
}

impl PoissonReport {
    pub fn within_tails(&self) -> bool {
        self.discrepancy <= self.lhs_tail + self.rhs_tail
    }
}

/// Both sides of the Poisson identity for `J = H ∩ L` and a twist `η`:
/// the truncated character sum and `(1/|O* ⊗ J̌|) Σ_{x ∈ O_S* ⊗ J̌} h(x; s)`.
pub fn poisson_check(
    h: &Subgroup,
    l: &Subgroup,
    eta: Option<GExtension>,
    s: f64,
    x_cut: u128,
    p_cut: u64,
    budget: Option<u64>,
) -> Result<PoissonReport> {
    let sum = TwistedSum::new(h, l, eta)?;
    let lhs = sum.lhs(s, x_cut, budget)?;
    let sc = Complex64::new(s, 0.0);
    let values = sum
        .support()
        .iter()
        .map(|x| sum.euler_h(x, sc, p_cut))
        .collect::<Result<Vec<_>>>()?;
    let norm = GlobalDualElement::torsion_part_size(&sum.chars) as f64;
    let rhs: Complex64 = values.iter().map(|v| v.value()).sum::<Complex64>() / norm;
    let rhs_tail = values.iter().map(|v| v.tail).sum::<f64>() / norm;
    let lhs_v = Complex64::new(lhs.re, lhs.im);
    let discrepancy = (lhs_v - rhs).norm();
    Ok(PoissonReport {
        s,
        x_cut,
        p_cut,
        lhs_re: lhs.re,
        lhs_im: lhs.im,
        rhs_re: rhs.re,
        rhs_im: rhs.im,
        lhs_terms: lhs.terms,
        support: values.len(),
        lhs_tail: lhs.tail,
        rhs_tail,
        discrepancy,
        relative: discrepancy / rhs.norm(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CancellationRow {
    pub bound: u128,
    pub n_h: u64,
    pub n_j: u64,
    pub difference: i64,
    pub normalized: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CancellationReport {
    pub group: String,
    pub rows: Vec<CancellationRow>,
    /// `None` when fewer than two bounds exceed 100.
    pub non_increasing: Option<bool>,
}

/// `N(H, L; B^{|H|/|G|}) - N(J; B^{|J|/|G|})` normalised by
/// `B^{1/α(G)} (log B)^{ν(G) - 1}` along a grid of bounds.
pub fn cancellation_check(
    l: &Subgroup,
    j: &Subgroup,
    h: &Subgroup,
    bounds: &[u128],
    budget: Option<u64>,
) -> Result<CancellationReport> {
    let g = l.ambient();
    if !j.is_subgroup_of(h) || !j.is_subgroup_of(l) {
        return Err(Error::Argument("J must lie in H ∩ L".into()));
    }
    let cond = condition_for(l)?;
    let s = default_s(g);
    let n_h = counts_at_bounds(h, g.order(), bounds, &cond, &s, budget)?;
    let n_j = counts_at_bounds(j, g.order(), bounds, &None, &s, budget)?;
    let a = 1.0 / alpha(g)?;
    let w = nu(g)? - 1.0;
    let rows: Vec<CancellationRow> = bounds
        .iter()
        .zip(n_h.iter().zip(&n_j))
        .map(|(&b, (&x, &y))| {
            let bf = b as f64;
            let diff = x as i64 - y as i64;
            CancellationRow {
                bound: b,
                n_h: x,
                n_j: y,
                difference: diff,
                normalized: diff as f64 / (bf.powf(a) * bf.ln().powf(w)),
            }
        })
        .collect();
    let trend: Vec<f64> = rows.iter().filter(|r| r.bound > 100).map(|r| r.normalized).collect();
    Ok(CancellationReport {
        group: g.spec_string(),
        non_increasing: (trend.len() >= 2).then(|| non_increasing_with_tolerance(&trend, TREND_TOLERANCE)),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TauberRow {
    pub bound: f64,
    pub count: f64,
    pub normalized: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauberFit {
    pub a: f64,
    pub omega: f64,
    pub rows: Vec<TauberRow>,
    /// Largest relative change of the normalised value over the last three points.
    pub stability: f64,
}

/// Normalises a counting function by `B^a (log B)^{ω - 1}`.
pub fn tauber_fit(points: &[(f64, f64)], a: f64, omega: f64) -> Result<TauberFit> {
    if !(a > 0.0) || !(omega >= 1.0) {
        return Err(Error::Argument(format!(
            "need a > 0 and ω >= 1, got a = {a}, ω = {omega}"
        )));
    }
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} points, need at least 3",
            points.len()
        )));
    }
    let rows: Vec<TauberRow> = points
        .iter()
        .map(|&(b, c)| TauberRow {
            bound: b,
            count: c,
            normalized: c / (b.powf(a) * b.ln().powf(omega - 1.0)),
        })
        .collect();
    if rows.iter().any(|r| !r.normalized.is_finite()) {
        return Err(Error::Argument("bounds must exceed 1".into()));
    }
    let last = &rows[rows.len() - 3..];
    let stability = last
        .windows(2)
        .map(|w| ((w[1].normalized - w[0].normalized) / w[0].normalized).abs())
        .fold(0.0, f64::max);
    Ok(TauberFit {
        a,
        omega,
        rows,
        stability,
    })
}

/// Number of homs into `h` with `Φ_h <= B` at each bound.
pub fn hom_counts(h: &Subgroup, bounds: &[u128], budget: Option<u64>) -> Result<Vec<u64>> {
    counts_at_bounds(h, h.order(), bounds, &None, &[], budget)
}
