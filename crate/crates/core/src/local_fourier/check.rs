//! Exhaustive comparison of the structured transforms against direct
//! summation, together with the closed forms of their low coefficients.

use num_complex::Complex64;
use serde::Serialize;

use super::{
    ft_structured, graded_bruteforce, membership, pairing_exponent, CharacterGroup, Condition, CyclotomicSum,
    DualLocalElement, GradedTransform, LocalCharacter, LocalPlace, LocalWeight, Rational, UnitFlavor,
};
use crate::abelian_group::{fiber, subgroups, w_partition, FinAbGroup, Subgroup};
use crate::error::Result;

const MAX_RECORDED_FAILURES: usize = 20;

#[derive(Clone, Debug, Default, Serialize)]
pub struct LocalCheckReport {
    pub group: String,
    pub primes: Vec<u64>,
    pub comparisons: u64,
    pub max_abs_error: f64,
    pub coefficient_checks: u64,
    pub vanishing_checks: u64,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

impl LocalCheckReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn fail(&mut self, msg: String) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(msg);
        }
    }
}

fn indicator(b: bool) -> i64 {
    i64::from(b)
}

fn graded_value(graded: &[(u64, Complex64)], place: &LocalPlace, scale: u64, s: Complex64) -> Complex64 {
    graded
        .iter()
        .map(|&(d, c)| {
            let e = scale as f64 * (1.0 - 1.0 / d as f64);
            c * (-(e * (place.q as f64).ln()) * s).exp()
        })
        .sum()
}

struct Ctx<'a> {
    place: &'a LocalPlace,
    s_values: &'a [Complex64],
    tol: f64,
}

impl Ctx<'_> {
    /// Compares the two evaluations at every `s` and returns the exact form.
    fn compare(
        &self,
        rep: &mut LocalCheckReport,
        w: &LocalWeight,
        x: &DualLocalElement,
        label: &str,
    ) -> GradedTransform {
        let graded = graded_bruteforce(self.place, w, x);
        let exact = ft_structured(self.place, w, x);
        for &s in self.s_values {
            let a = graded_value(&graded, self.place, w.scale, s);
            let b = exact.evaluate(s);
            let err = (a - b).norm();
            rep.comparisons += 1;
            if err > rep.max_abs_error {
                rep.max_abs_error = err;
            }
            if err > self.tol || !err.is_finite() {
                rep.fail(format!(
                    "{label} q={} x={:?} s={s}: brute {a} structured {b}",
                    self.place.q, x
                ));
            }
        }
        exact
    }
}

fn expect_coeff(rep: &mut LocalCheckReport, t: &GradedTransform, d: u64, want: &CyclotomicSum, label: &str) {
    rep.coefficient_checks += 1;
    let got = t
        .coefficient(d)
        .cloned()
        .unwrap_or_else(|| CyclotomicSum::zero(want.modulus()));
    let mut diff = got.clone();
    diff.add_assign(&want.scale(Rational::from_integer(-1)));
    if !diff.is_zero() {
        rep.fail(format!(
            "{label} q={} d={d}: coefficient {:?}, expected {:?}",
            t.q, got, want
        ));
    }
}

/// Runs the comparison for `group` at the given primes (those dividing
/// `|G|` are skipped).
///
/// With `L = <M, e_1, ..., e_{t-1}, e_t^Q>`: if `a_t = 1` every `H` of full
/// `F_Q`-rank is tested with the weight `f_v / Φ_H^{s|G|/|H|}`; otherwise
/// every pair `J ∈ W_2`, `H` in the fibre over `J` is tested with all local
/// twists `η_v` into `H`, and `J` with the plain weight.
pub fn local_ft_check(
    group: &FinAbGroup,
    primes: &[u64],
    s_values: &[Complex64],
    tol: f64,
) -> Result<LocalCheckReport> {
    let cond = Condition::standard(group)?;
    let q_small = cond.q;
    let a_t = *group.q_exponents().last().expect("non-cyclic Sylow");
    let beta_g = group.q_rank(q_small);
    let mut rep = LocalCheckReport {
        group: group.spec_string(),
        ..Default::default()
    };
    let v_sub = cond.v_subgroup();

    for &q in primes {
        if group.order() % q == 0 {
            continue;
        }
        let place = LocalPlace::new(q)?;
        rep.primes.push(q);
        let ctx = Ctx {
            place: &place,
            s_values,
            tol,
        };
        let split = (q - 1) % q_small == 0;
        if a_t == 1 {
            for h in subgroups(group)?.into_iter().filter(|h| h.q_rank(q_small) == beta_g) {
                let w = LocalWeight::conditioned(group, &h, cond.clone());
                let lh = h.meet(&cond.l);
                let n = w.chars.exponent();
                for x in DualLocalElement::all(&place, &w.chars) {
                    let t = ctx.compare(&mut rep, &w, &x, &format!("H={h}"));
                    let in_h = membership(&place, &w.chars, &x, UnitFlavor::Units, &h, q_small);
                    let in_lh = membership(&place, &w.chars, &x, UnitFlavor::Units, &lh, q_small);
                    expect_coeff(
                        &mut rep,
                        &t,
                        1,
                        &CyclotomicSum::rational(n, indicator(in_h).into()),
                        "l=1",
                    );
                    if split {
                        let qh = membership(&place, &w.chars, &x, UnitFlavor::QthPowers, &h, q_small);
                        let qv = membership(&place, &w.chars, &x, UnitFlavor::QthPowers, &v_sub, q_small);
                        let qi = q_small as i64;
                        let want = Rational::from_integer(
                            indicator(in_h) * (qi.pow(beta_g as u32) * indicator(qh) - qi * indicator(qv)),
                        ) + Rational::from_integer(indicator(in_lh))
                            * (Rational::from_integer(indicator(qv)) - Rational::new(1, qi));
                        expect_coeff(&mut rep, &t, q_small, &CyclotomicSum::rational(n, want), "l=Q");
                    }
                    if !in_lh {
                        rep.vanishing_checks += 1;
                        if !t.is_zero() {
                            rep.fail(format!("H={h} q={q} x={x:?}: transform does not vanish off O*⊗Ľ_H"));
                        }
                    }
                }
            }
            continue;
        }

        let parts = w_partition(group, &cond.l)?;
        for j in &parts.w2 {
            let jchars = std::sync::Arc::new(CharacterGroup::new(j));
            let n = jchars.exponent();
            for h in fiber(group, &cond.l, j)? {
                let beta_h = h.q_rank(q_small) as u32;
                let plain = LocalWeight::plain(j, h.order());
                for x in DualLocalElement::all(&place, &jchars) {
                    let t = ctx.compare(&mut rep, &plain, &x, &format!("plain J={j}"));
                    if x.has_valuation() {
                        rep.vanishing_checks += 1;
                        if !t.is_zero() {
                            rep.fail(format!("plain J={j} q={q} x={x:?}: transform does not vanish"));
                        }
                        continue;
                    }
                    expect_coeff(&mut rep, &t, 1, &CyclotomicSum::rational(n, 1.into()), "plain l=1");
                    if split {
                        let qj = membership(&place, &jchars, &x, UnitFlavor::QthPowers, j, q_small);
                        let want = (q_small as i64).pow(beta_h) * indicator(qj) - 1;
                        expect_coeff(
                            &mut rep,
                            &t,
                            q_small,
                            &CyclotomicSum::rational(n, want.into()),
                            "plain l=Q",
                        );
                    }
                }
                check_twists(&ctx, &mut rep, group, &h, j, &cond, &v_sub, q_small, beta_h, a_t)?;
            }
        }
    }
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn check_twists(
    ctx: &Ctx,
    rep: &mut LocalCheckReport,
    group: &FinAbGroup,
    h: &Subgroup,
    j: &Subgroup,
    cond: &Condition,
    v_sub: &Subgroup,
    q_small: u64,
    beta_h: u32,
    a_t: u32,
) -> Result<()> {
    let place = ctx.place;
    let q = place.q;
    let split = (q - 1) % q_small == 0;
    let hchars = CharacterGroup::new(h);
    let plain = LocalWeight::plain(j, h.order());
    let label = format!("H={h} J={j}");
    for eta_r in hchars.torsion(q - 1) {
        for eta_ur in hchars.elements() {
            let eta = LocalCharacter {
                ramified: eta_r.clone(),
                unramified: eta_ur.clone(),
            };
            let w = LocalWeight::twisted(h, j, eta.clone(), cond.clone());
            let jc = &w.chars;
            let n = jc.exponent();
            let r_in_j = j.contains(&eta_r);
            let ur_in_j = j.contains(eta_ur);
            for x in DualLocalElement::all(place, jc) {
                let t = ctx.compare(rep, &w, &x, &label);
                if x.has_valuation() {
                    rep.vanishing_checks += 1;
                    if !t.is_zero() {
                        rep.fail(format!("{label} q={q} η={eta:?} x={x:?}: transform does not vanish"));
                    }
                    continue;
                }
                if !r_in_j {
                    let qa = q_small.pow(a_t);
                    for (d, c) in &t.terms {
                        if d % qa != 0 {
                            rep.coefficient_checks += 1;
                            if !c.is_zero() {
                                rep.fail(format!("{label} q={q} η={eta:?} x={x:?}: nonzero coefficient at d={d}"));
                            }
                        }
                    }
                    continue;
                }
                let minus = LocalCharacter {
                    ramified: group.neg(&eta_r),
                    unramified: group.identity(),
                };
                let rot_r = pairing_exponent(place, jc, &minus, &x)?;
                if ur_in_j {
                    let full = eta.neg(group);
                    let rot = pairing_exponent(place, jc, &full, &x)?;
                    let base = ft_structured(place, &plain, &x);
                    for (d, c) in &base.terms {
                        expect_coeff(rep, &t, *d, &c.rotate(rot), "twist into J");
                    }
                    continue;
                }
                expect_coeff(
                    rep,
                    &t,
                    1,
                    &CyclotomicSum::rational(n, 1.into()).rotate(rot_r),
                    "twist l=1",
                );
                if split {
                    let qj = membership(place, jc, &x, UnitFlavor::QthPowers, j, q_small);
                    let qv = membership(place, jc, &x, UnitFlavor::QthPowers, v_sub, q_small);
                    let qi = q_small as i64;
                    let want = qi.pow(beta_h) * indicator(qj) - qi * indicator(qv);
                    expect_coeff(
                        rep,
                        &t,
                        q_small,
                        &CyclotomicSum::rational(n, want.into()).rotate(rot_r),
                        "twist l=Q",
                    );
                }
            }
        }
    }
    Ok(())
}
