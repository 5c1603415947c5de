use std::collections::BTreeMap;

use hasse_core::abelian_group::{exterior_square, induced_wedge_image, FinAbGroup, Subgroup};
use hasse_core::arith::{factorize, primes_up_to};
use hasse_core::dirichlet_cft::*;
use hasse_core::norm_principle::*;

fn g(s: &str) -> FinAbGroup {
    FinAbGroup::parse(s).unwrap()
}

fn squarefree(n: i64) -> bool {
    factorize(n.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

fn is_fundamental(d: i64) -> bool {
    if d == 1 || d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// Discriminant of `Q(√n)` for `n` not a square.
fn field_disc(n: i64) -> i64 {
    let mut core = n.signum();
    for (p, e) in factorize(n.unsigned_abs()) {
        if e % 2 == 1 {
            core *= p as i64;
        }
    }
    if core.rem_euclid(4) == 1 {
        core
    } else {
        4 * core
    }
}

fn kronecker(d: i64, p: u64) -> i32 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let a = d.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let r = hasse_core::arith::pow_mod(a, (p - 1) / 2, p);
    if r == 1 {
        1
    } else {
        -1
    }
}

fn fundamentals(limit: i64) -> Vec<i64> {
    (-limit..=limit).filter(|&d| is_fundamental(d)).collect()
}

/// `(Δ, HNP)` for every biquadratic field with `Δ <= bound`: HNP holds
/// exactly when some prime is split in none of the three quadratic subfields.
fn biquadratic_oracle(bound: i64) -> BTreeMap<(i64, bool), u64> {
    let ds = fundamentals(bound / 3);
    let mut fields = std::collections::BTreeSet::new();
    for (i, &d1) in ds.iter().enumerate() {
        for &d2 in &ds[i + 1..] {
            if (d1 * d2).abs() > bound / 3 {
                continue;
            }
            let d3 = field_disc(d1 * d2);
            let disc = (d1 * d2 * d3).abs();
            if disc > bound {
                continue;
            }
            let mut t = [d1, d2, d3];
            t.sort();
            fields.insert((disc, t));
        }
    }
    let mut out = BTreeMap::new();
    for (disc, t) in fields {
        let hnp = factorize(disc as u64)
            .iter()
            .any(|&(p, _)| t.iter().all(|&d| kronecker(d, p) != 1));
        *out.entry((disc, hnp)).or_insert(0) += 1;
    }
    out
}

#[test]
fn quadratic_discriminants_match_fundamental_oracle() {
    let z2 = g("C2");
    let mut got: Vec<u128> = enumerate(&z2, 2000).unwrap().iter().map(|e| e.discriminant()).collect();
    let mut want: Vec<u128> = fundamentals(2000)
        .into_iter()
        .map(|d| d.unsigned_abs() as u128)
        .collect();
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn biquadratic_hnp_matches_residue_oracle() {
    let v4 = g("C2xC2");
    let oracle = biquadratic_oracle(100_000);
    let mut got: BTreeMap<(i64, bool), u64> = BTreeMap::new();
    for e in enumerate(&v4, 100_000).unwrap() {
        *got.entry((e.discriminant() as i64, hnp_holds(&e))).or_insert(0) += 1;
    }
    let scaled: BTreeMap<(i64, bool), u64> = oracle.into_iter().map(|(k, v)| (k, 6 * v)).collect();
    assert_eq!(got, scaled);
}

#[test]
fn classical_examples_against_residues() {
    // 13 and 17 are squares modulo each other, so no decomposition group is all of V4
    assert_eq!(kronecker(13, 17), 1);
    assert_eq!(kronecker(17, 13), 1);
    let v4 = g("C2xC2");
    let exts = homs(221, &v4, true, true);
    assert_eq!(exts.len(), 6);
    for e in &exts {
        assert_eq!(e.discriminant(), 13 * 13 * 17 * 17);
        assert!(!hnp_holds(e));
        assert!(wa_holds(e));
        for p in [13, 17] {
            let sym = e.local_symbol(p);
            assert_eq!(sym.inertia.order(), 2);
            assert_eq!(sym.decomposition().order(), 2);
        }
    }
    // Q(i, √2): 2 is split in none of Q(i), Q(√2), Q(√-2)
    assert!([-4i64, 8, -8].iter().all(|&d| kronecker(d, 2) != 1));
    let exts = homs(8, &v4, true, true);
    assert_eq!(exts.len(), 6);
    for e in &exts {
        assert_eq!(e.discriminant(), 256);
        assert!(hnp_holds(e));
        assert!(!wa_holds(e));
    }
}

#[test]
fn structural_invariants_of_enumerated_extensions() {
    for spec in ["C2xC2", "C2xC4", "C3xC3", "C2xC2xC2"] {
        let grp = g(spec);
        let exts = enumerate(&grp, 10_000_000).unwrap();
        let wedge = exterior_square(&grp);
        for e in exts.iter().take(400) {
            assert!(e.is_surjective() && e.is_primitive());
            assert_eq!(e.conductor(), e.modulus);
            assert!(grp.element_order(&e.conjugation()) <= 2);
            assert!(induced_wedge_image(&wedge, &e.real_symbol().decomposition()).is_trivial());
            for p in e.ramified_primes() {
                let sym = e.local_symbol(p);
                assert!(!sym.inertia.is_trivial());
                assert!(sym.inertia.is_subgroup_of(&sym.decomposition()));
            }
            assert!(knot_image_audit(e, 200).is_ok(), "{spec}");
            for p in primes_up_to(200) {
                if e.conductor() % p != 0 {
                    assert!(e.local_symbol(p).inertia.is_trivial());
                }
            }
        }
    }
}

/// `ψ(x)` as an integer modulo the exponent `n` of the group.
fn pair(grp: &FinAbGroup, psi: &[u64], x: &[u64]) -> u64 {
    let n = grp.exponent();
    x.iter()
        .zip(psi)
        .zip(grp.orders())
        .map(|((&a, &b), &o)| a * b % o * (n / o))
        .sum::<u64>()
        % n
}

#[test]
fn discriminant_is_product_of_character_conductors() {
    for spec in ["C2xC2", "C2xC4", "C2xC2xC2", "C3", "C5"] {
        let grp = g(spec);
        let exts = enumerate(&grp, 100_000_000).unwrap();
        assert!(!exts.is_empty(), "{spec}");
        for e in exts.iter().take(60) {
            let mut prod: u128 = 1;
            for psi in grp.elements() {
                for piece in &e.pieces {
                    let (p, big) = (piece.p(), piece.component.pk);
                    let units: Vec<u64> = (1..big).filter(|u| u % p != 0).collect();
                    let trivial_above = |k: u32| {
                        let m = p.pow(k);
                        units
                            .iter()
                            .filter(|&&u| u % m == 1 % m)
                            .all(|&u| pair(&grp, psi.exps(), piece.eval(&grp, u).exps()) == 0)
                    };
                    let f = (0..=piece.component.k).find(|&k| trivial_above(k)).unwrap();
                    prod *= (p as u128).pow(f);
                }
            }
            assert_eq!(prod, e.discriminant(), "{spec} modulus {}", e.modulus);
        }
    }
}

#[test]
fn find_counterexample_field() {
    let grp = g("C4xC2");
    let hits = find_by_discriminant(&grp, 10_070_523_904, &[2, 7]).unwrap();
    assert!(!hits.is_empty());
    let v4 = g("C2xC2");
    let wedge = exterior_square(&grp);
    let mut good = 0;
    for e in &hits {
        assert_eq!(e.discriminant(), 10_070_523_904);
        let noncyclic: Vec<u64> = e
            .ramified_primes()
            .into_iter()
            .filter(|&p| {
                !induced_wedge_image(&wedge, &e.local_symbol(p).decomposition()).is_trivial()
                    || !is_cyclic(&e.local_symbol(p).decomposition())
            })
            .collect();
        if noncyclic == vec![7] && e.local_symbol(7).decomposition().isomorphism_type().is_isomorphic(&v4) {
            assert!(wa_holds(e));
            assert!(!hnp_holds(e));
            good += 1;
        }
    }
    assert!(good > 0);
}

fn is_cyclic(h: &Subgroup) -> bool {
    h.isomorphism_type().invariant_factors().len() <= 1
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let grp = g("C2xC2");
    let (fresh, used) = load_or_enumerate(&grp, 20_000, dir.path()).unwrap();
    assert!(!used);
    let (cached, used) = load_or_enumerate(&grp, 20_000, dir.path()).unwrap();
    assert!(used);
    assert_eq!(fresh, cached);
    std::fs::write(cache_path(dir.path(), &grp, 20_000), "not json\n").unwrap();
    let (again, used) = load_or_enumerate(&grp, 20_000, dir.path()).unwrap();
    assert!(!used);
    assert_eq!(again, fresh);
}

#[test]
fn density_rows_are_consistent() {
    let grp = g("C2xC2");
    let s = default_s(&grp);
    let rows = density_scan(&grp, &[10_000, 100_000], 1, 2, &s, None).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        // with ∧²G = Z/2 the knot image is trivial or full
        assert_eq!(r.hnp_fail, r.wa_hold);
        for x in [r.hnp_fail_ratio(), r.wa_hold_ratio(), r.lambda_ratio()] {
            let v = ratio_f64(x);
            assert!((0.0..=1.0).contains(&v));
        }
    }
    assert!(rows[0].total <= rows[1].total);
    assert!(density_scan(&g("C4"), &[100], 1, 2, &[2], None).is_err());
}
