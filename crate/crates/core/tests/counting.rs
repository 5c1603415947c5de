use std::sync::Arc;

use hasse_core::abelian_group::{FinAbGroup, Subgroup};
use hasse_core::arith::primes_up_to;
use hasse_core::counting::*;
use hasse_core::dirichlet_cft::{enumerate_homs, homs, GExtension};
use hasse_core::local_fourier::{
    ft_structured, CharacterGroup, Condition, DualLocalElement, GlobalDualElement, LocalPlace, LocalWeight,
};
use hasse_core::norm_principle::non_increasing_with_tolerance;
use hasse_core::Error;
use num_complex::Complex64;

fn g(s: &str) -> FinAbGroup {
    FinAbGroup::parse(s).unwrap()
}

fn sub(group: &FinAbGroup, spec: &str) -> Subgroup {
    Subgroup::parse(group, spec).unwrap()
}

fn c2c4_setup() -> (FinAbGroup, Subgroup, Subgroup) {
    let grp = g("C2xC4");
    let l = sub(&grp, "e1,e2^2");
    let h = Subgroup::whole(&grp);
    (grp, l, h)
}

#[test]
fn count_small_examples() {
    let v4 = g("C2xC2");
    let l = sub(&v4, "e1");
    let whole = Subgroup::whole(&v4);
    assert_eq!(
        count(&CountSpec::new(l.clone(), whole.clone(), 1, CountMode::NH).unwrap()).unwrap(),
        1
    );

    let z2 = g("C2");
    let all = Subgroup::whole(&z2);
    let n = count(&CountSpec::new(all.clone(), all, 10, CountMode::NStar).unwrap()).unwrap();
    // discriminants 3, 4, 5, 7, 8, 8
    assert_eq!(n, 6);

    for b in [10u128, 1000, 100_000] {
        let star = count(&CountSpec::new(l.clone(), whole.clone(), b, CountMode::NStar).unwrap()).unwrap();
        let nh = count(&CountSpec::new(l.clone(), whole.clone(), b, CountMode::NH).unwrap()).unwrap();
        let plain = count(&CountSpec::new(l.clone(), whole.clone(), b, CountMode::NPlain).unwrap()).unwrap();
        assert!(nh >= star, "B = {b}: {nh} < {star}");
        assert!(plain >= nh);
    }
    assert!(CountSpec::new(l, whole, 0, CountMode::NH).is_err());
}

#[test]
fn count_budget_is_reported() {
    let v4 = g("C2xC2");
    let l = sub(&v4, "e1");
    let spec = CountSpec {
        budget: Some(10),
        ..CountSpec::new(l, Subgroup::whole(&v4), 100_000_000, CountMode::NStar).unwrap()
    };
    assert!(matches!(count(&spec), Err(Error::Budget(_))));
}

#[test]
fn whole_condition_is_unconditioned() {
    for spec in ["C2xC2", "C2xC4", "C3xC3"] {
        let grp = g(spec);
        let whole = Subgroup::whole(&grp);
        for b in [1000u128, 1_000_000] {
            let nh = count(&CountSpec::new(whole.clone(), whole.clone(), b, CountMode::NH).unwrap()).unwrap();
            let plain = count(&CountSpec::new(whole.clone(), whole.clone(), b, CountMode::NPlain).unwrap()).unwrap();
            assert_eq!(nh, plain, "{spec} at {b}");
        }
    }
}

#[test]
fn moebius_inversion_examples() {
    let v4 = g("C2xC2");
    let (_, l, _) = c2c4_setup();
    for (l, b) in [
        (sub(&v4, "e1"), 10_000u128),
        (l.clone(), 10_000),
        (sub(&v4, "e1"), 1),
        (l.clone(), 1),
    ] {
        let rep = moebius_inversion_check(&l, b, None).unwrap();
        assert!(rep.exact(), "{} at {b}: {} vs {}", rep.group, rep.lhs, rep.rhs);
    }
    let rep = moebius_inversion_check(&sub(&v4, "e1"), 1, None).unwrap();
    assert_eq!(rep.lhs, 0);
    // the first Z/2 x Z/4 fields appear at Δ = 4·10^6
    let rep = moebius_inversion_check(&l, 10_000_000, None).unwrap();
    assert!(rep.lhs > 0);
    assert!(rep.exact(), "{} vs {}", rep.lhs, rep.rhs);
    let c3 = g("C3xC3");
    let rep = moebius_inversion_check(&sub(&c3, "e1"), 1_000_000, None).unwrap();
    assert!(rep.exact(), "{} vs {}", rep.lhs, rep.rhs);
}

#[test]
fn moebius_terms_cover_nonzero_mu() {
    let v4 = g("C2xC2");
    let rep = moebius_inversion_check(&sub(&v4, "e1"), 1000, None).unwrap();
    // μ(G/H) ≠ 0 for all five subgroups of (Z/2)^2
    assert_eq!(rep.terms.len(), 5);
    let mus: i64 = rep.terms.iter().map(|t| t.mu).sum();
    assert_eq!(mus, 1 - 3 + 2);
}

#[test]
fn lower_rank_terms_are_lower_order() {
    let v4 = g("C2xC2");
    let l = sub(&v4, "e1");
    let a = 1.0 / alpha(&v4).unwrap();
    let w = nu(&v4).unwrap() - 1.0;
    let bounds = [10_000u128, 1_000_000, 100_000_000];
    let reps: Vec<_> = bounds
        .iter()
        .map(|&b| moebius_inversion_check(&l, b, None).unwrap())
        .collect();
    for rep in &reps {
        assert!(rep.exact());
    }
    for idx in 0..reps[0].terms.len() {
        let term = &reps[0].terms[idx];
        if term.order == 4 {
            continue;
        }
        let series: Vec<f64> = reps
            .iter()
            .map(|r| {
                let t = &r.terms[idx];
                let bf = r.bound as f64;
                t.count as f64 / (bf.powf(a) * bf.ln().powf(w))
            })
            .collect();
        assert!(
            non_increasing_with_tolerance(&series, TREND_TOLERANCE),
            "{}: {series:?}",
            term.subgroup
        );
    }
}

#[test]
fn f_condition_examples() {
    let v4 = Arc::new(g("C2xC2"));
    let (e1, e2) = (v4.e(1), v4.e(2));
    let s = default_s(&v4);
    // Q(√-3, √5): 3 has inertia <e1> and Frobenius e2 because 3 is not a square mod 5
    let ext = GExtension::from_images(v4.clone(), 15, &[e1.clone(), e2.clone()]).unwrap();
    let cond_e1 = Condition::with_l(&v4, sub(&v4, "e1")).unwrap();
    assert!(!f_global(&ext, &cond_e1, &s));
    let cond_e2 = Condition::with_l(&v4, sub(&v4, "e2")).unwrap();
    assert!(f_global(&ext, &cond_e2, &s));
    assert!(f_global(&ext, &cond_e1, &[2, 3]));

    // ramified only at 2, which lies in S
    for e in homs(8, &v4, true, true) {
        assert!(f_global(&e, &cond_e1, &s));
    }
    // homs into L always satisfy the condition
    for e in enumerate_homs(&sub(&v4, "e1"), 10_000, false).unwrap() {
        assert!(f_global(&e, &cond_e1, &s));
    }
}

#[test]
fn alpha_nu_values() {
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
    assert!(close(alpha(&g("C2xC2")).unwrap(), 2.0));
    assert!(close(alpha(&g("C2xC4")).unwrap(), 4.0));
    assert!(close(alpha(&g("C3xC3")).unwrap(), 6.0));
    assert!(close(nu(&g("C2xC2")).unwrap(), 3.0));
    assert!(close(nu(&g("C3xC3")).unwrap(), 4.0));
    assert!(close(nu(&g("C2xC2xC2")).unwrap(), 7.0));
}

#[test]
fn euler_factors_at_zero_are_at_least_one() {
    let (_, l, h) = c2c4_setup();
    let sum = TwistedSum::new(&h, &l, None).unwrap();
    let s = Complex64::new(0.8, 0.0);
    let x = GlobalDualElement::zero(sum.chars().clone(), &sum.s_primes);
    for q in primes_up_to(300).into_iter().filter(|q| !sum.s_primes.contains(q)) {
        let f = sum.tame_local_factor(q, &x, s).unwrap();
        assert!(f.im.abs() < 1e-12 && f.re >= 1.0 - 1e-12, "q = {q}: {f}");
    }
    let v = sum.euler_h(&x, s, 1000).unwrap();
    assert!(v.re >= 1.0 && v.im.abs() < 1e-9);
}

#[test]
fn euler_product_converges_within_tail() {
    let (_, l, h) = c2c4_setup();
    let sum = TwistedSum::new(&h, &l, None).unwrap();
    let s = Complex64::new(0.8, 0.0);
    for x in sum.support().iter().take(6) {
        let short = sum.euler_h(x, s, 500).unwrap();
        let long = sum.euler_h(x, s, 4000).unwrap();
        let change = (short.value() - long.value()).norm();
        assert!(change <= short.tail, "change {change} exceeds tail {}", short.tail);
        assert!(long.tail <= short.tail);
    }
}

#[test]
fn euler_product_vanishes_with_valuation_outside_s() {
    let (_, l, h) = c2c4_setup();
    let sum = TwistedSum::new(&h, &l, None).unwrap();
    let r = sum.chars().orders().len();
    let mut matrix = vec![vec![0u64; r]; 3];
    matrix[2][0] = 1;
    let x = GlobalDualElement::new(sum.chars().clone(), &[2, 3], matrix).unwrap();
    let s = Complex64::new(0.8, 0.0);
    assert_eq!(sum.tame_local_factor(3, &x, s).unwrap(), Complex64::new(0.0, 0.0));
    let v = sum.euler_h(&x, s, 100).unwrap();
    assert_eq!(v.value().norm(), 0.0);
}

#[test]
fn euler_domain_and_cut_errors() {
    let (_, l, h) = c2c4_setup();
    let sum = TwistedSum::new(&h, &l, None).unwrap();
    let x = GlobalDualElement::zero(sum.chars().clone(), &sum.s_primes);
    assert!(matches!(
        sum.euler_h(&x, Complex64::new(0.25, 0.0), 100),
        Err(Error::Domain(_))
    ));
    assert!(sum.euler_h(&x, Complex64::new(0.8, 0.0), 1).is_err());
    let v4 = g("C2xC2");
    assert!(TwistedSum::new(&Subgroup::whole(&v4), &Subgroup::whole(&v4), None).is_err());
}

#[test]
fn direct_and_structured_factors_agree() {
    let (_, l, h) = c2c4_setup();
    let sum = TwistedSum::new(&h, &l, None).unwrap();
    let support = sum.support();
    for s in [Complex64::new(0.8, 0.0), Complex64::new(1.3, 0.4)] {
        for q in [3u64, 5, 7, 13, 17] {
            for x in &support {
                let a = sum.direct_local_factor(q, x, s);
                let b = sum.tame_local_factor(q, x, s).unwrap();
                assert!((a - b).norm() < 1e-12, "q = {q}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn poisson_identity_with_twist() {
    let (grp, l, h) = c2c4_setup();
    let target = Arc::new(grp.clone());
    let eta = GExtension::from_images(target, 5, &[grp.e(2)]).unwrap();
    let rep = poisson_check(&h, &l, Some(eta), 3.0, 1_000_000_000, 1000, None).unwrap();
    assert!(rep.relative <= 1e-6, "{rep:?}");
    assert!(rep.within_tails() || rep.discrepancy < 1e-12);
}

#[test]
fn poisson_identity_untwisted_large_s() {
    let (_, l, h) = c2c4_setup();
    let rep = poisson_check(&h, &l, None, 3.0, 1_000_000, 1000, None).unwrap();
    assert!(rep.relative <= 1e-6, "{rep:?}");
    assert!(rep.lhs_terms > 0);
}

#[test]
fn tauber_constant_stream() {
    let points: Vec<(f64, f64)> = (2..=7).map(|k| (10f64.powi(k), 10f64.powi(k))).collect();
    let fit = tauber_fit(&points, 1.0, 1.0).unwrap();
    assert!(fit.rows.iter().all(|r| (r.normalized - 1.0).abs() < 1e-12));
    assert!(fit.stability < 1e-12);

    let points: Vec<(f64, f64)> = (2..=6).map(|k| (10f64.powi(k), 5.0 * 10f64.powi(k).sqrt())).collect();
    let fit = tauber_fit(&points, 0.5, 1.0).unwrap();
    assert!(fit.rows.iter().all(|r| (r.normalized - 5.0).abs() < 1e-9));
}

#[test]
fn tauber_errors() {
    let pts = [(100.0, 1.0), (1000.0, 2.0)];
    assert!(matches!(tauber_fit(&pts, 0.5, 3.0), Err(Error::InsufficientData(_))));
    let pts = [(100.0, 1.0), (1000.0, 2.0), (10000.0, 3.0)];
    assert!(matches!(tauber_fit(&pts, 0.0, 3.0), Err(Error::Argument(_))));
    assert!(matches!(tauber_fit(&pts, 0.5, 0.5), Err(Error::Argument(_))));
}

#[test]
fn hom_counts_match_enumeration() {
    let v4 = g("C2xC2");
    let whole = Subgroup::whole(&v4);
    let counts = hom_counts(&whole, &[100, 1000, 10_000], None).unwrap();
    for (b, c) in [100u128, 1000, 10_000].iter().zip(&counts) {
        assert_eq!(*c as usize, enumerate_homs(&whole, *b, false).unwrap().len());
    }
    assert_eq!(counts, vec![19, 109, 466]);
}

#[test]
fn cancellation_small_bounds() {
    let (_, l, h) = c2c4_setup();
    let rep = cancellation_check(&l, &l, &h, &[10, 100], None).unwrap();
    assert!(rep.non_increasing.is_none());
    assert_eq!(rep.rows.len(), 2);
    // Φ_J^{|G|/|J|} <= B means Φ_J <= B^{1/2}
    let rep = cancellation_check(&l, &l, &h, &[10_000, 1_000_000], None).unwrap();
    let plain = hom_counts(&l, &[100, 1000], None).unwrap();
    assert_eq!(rep.rows.iter().map(|r| r.n_j).collect::<Vec<_>>(), plain);
    for r in &rep.rows {
        assert!(r.n_h >= r.n_j);
        assert_eq!(r.difference, r.n_h as i64 - r.n_j as i64);
    }
    assert!(cancellation_check(&l, &Subgroup::whole(l.ambient()), &h, &[100], None).is_err());
}

#[test]
fn growth_tail_closed_form() {
    // N(Y) = N (Y/X)^a: tail = N a X^{-s} / (s - a)
    let (n, x, a, s): (f64, f64, f64, f64) = (100.0, 1e6, 0.5, 0.8);
    let want = n * a * x.powf(-s) / (s - a);
    let got = growth_tail(n, x, a, 0.0, s);
    assert!((got - want).abs() / want < 1e-6, "{got} vs {want}");
    assert!(growth_tail(n, x, 1.0, 0.0, 0.9).is_infinite());
}

/// Case 1: for `x` trivial at `q`, the conditioned local factor over the
/// unconditioned one at `s = 1/α(G)` is `1 - (Q - 2 + 1/Q)/q` up to
/// `O(q^{-1-1/α(G)})`.
#[test]
fn case_one_ratio_contraction() {
    for spec in ["C2xC2", "C3xC3", "C2xC2xC2", "C3xC2xC2"] {
        let grp = g(spec);
        let qs = grp.q_small().unwrap();
        let h = Subgroup::whole(&grp);
        let cond = Condition::standard(&grp).unwrap();
        let conditioned = LocalWeight::conditioned(&grp, &h, cond);
        let plain = LocalWeight::plain(&h, grp.order());
        let chars = CharacterGroup::new(&h);
        let a = alpha(&grp).unwrap();
        let s = Complex64::new(1.0 / a, 0.0);
        let c = (qs - 2) as f64 + 1.0 / qs as f64;
        let mut scaled = Vec::new();
        for q in primes_up_to(500) {
            if grp.order() % q == 0 || (q - 1) % qs != 0 {
                continue;
            }
            let place = LocalPlace::new(q).unwrap();
            let x = DualLocalElement::zero(&chars);
            let num = ft_structured(&place, &conditioned, &x).evaluate(s);
            let den = ft_structured(&place, &plain, &x).evaluate(s);
            let ratio = (num / den).re;
            let err = (ratio - 1.0 + c / q as f64).abs();
            scaled.push((q, err * (q as f64).powf(1.0 + 1.0 / a)));
        }
        let half = scaled.len() / 2;
        let early = scaled[..half].iter().map(|p| p.1).fold(0.0, f64::max);
        let late = scaled[half..].iter().map(|p| p.1).fold(0.0, f64::max);
        assert!(late <= early, "{spec}: constant grows from {early} to {late}");
        assert!(early < 100.0, "{spec}: {scaled:?}");
    }
}
