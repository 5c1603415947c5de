//! Catalogue of small abelian groups and an exhaustive check of the
//! subgroup-lattice identities used by the counting arguments.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{
    exterior_square, fiber, induced_wedge_image, moebius, pairing_phi, standard_l, subgroups, upsilon_reduction,
    verify_upsilon_reduction, w_partition, Element, FinAbGroup, Subgroup, WedgeSquare,
};
use crate::arith::factorize;
use crate::error::{Error, Result};

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every isomorphism type of abelian group of order `n`.
pub fn groups_of_order(n: u64) -> Vec<FinAbGroup> {
    let mut acc: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for part in partitions(e, e) {
            for base in &acc {
                let mut v = base.clone();
                v.extend(part.iter().map(|&k| p.pow(k)));
                next.push(v);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|orders| FinAbGroup::from_cyclic_orders(&orders).expect("prime powers"))
        .collect()
}

/// Every abelian group of order at most `n`, by order.
pub fn groups_up_to(n: u64) -> Vec<FinAbGroup> {
    (1..=n).flat_map(groups_of_order).collect()
}

/// `|(L/J)[Q]|`.
fn quotient_q_torsion(l: &Subgroup, j: &Subgroup, q: u64) -> u64 {
    let g = l.ambient();
    let lifts = l.elements().into_iter().filter(|x| j.contains(&g.scale(x, q))).count() as u64;
    lifts / j.order()
}

/// Isomorphism type of `L/J` for `J ≤ L`.
fn relative_quotient(l: &Subgroup, j: &Subgroup) -> FinAbGroup {
    let g = l.ambient();
    let (abs, basis) = l.abstract_basis();
    let mut coords: HashMap<Element, Element> = HashMap::new();
    for a in abs.elements() {
        let mut x = g.identity();
        for (b, &c) in basis.iter().zip(a.exps()) {
            x = g.add(&x, &g.scale(b, c));
        }
        coords.insert(x, a);
    }
    let gens: Vec<Element> = j.generators().iter().map(|x| coords[x].clone()).collect();
    Subgroup::generated(&abs, &gens).quotient_type()
}

/// Kernels of the nonzero homs `∧²G -> Z/Q`, one per line of functionals.
pub fn index_q_subgroups(wedge: &WedgeSquare, q: u64) -> Vec<Subgroup> {
    let w = &wedge.group;
    let slots: Vec<usize> = (0..w.rank()).filter(|&k| w.orders()[k] % q == 0).collect();
    let r = slots.len() as u32;
    let mut out = Vec::new();
    for code in 1..q.pow(r) {
        let c: Vec<u64> = (0..r).map(|i| code / q.pow(i) % q).collect();
        let pivot = c.iter().position(|&x| x != 0).expect("nonzero code");
        if c[pivot] != 1 {
            continue;
        }
        let pivot_elt = w.basis_element(slots[pivot]);
        let mut gens: Vec<Element> = (0..w.rank())
            .filter(|k| !slots.contains(k))
            .map(|k| w.basis_element(k))
            .collect();
        gens.push(w.scale(&pivot_elt, q));
        for (i, &k) in slots.iter().enumerate() {
            if i == pivot {
                continue;
            }
            let shift = w.scale(&pivot_elt, (q - c[i]) % q);
            gens.push(w.add(&w.basis_element(k), &shift));
        }
        out.push(Subgroup::generated(w, &gens));
    }
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LatticeSuiteReport {
    pub groups: usize,
    pub pair_checks: u64,
    pub mu_checks: u64,
    pub closure_checks: u64,
    pub relax_checks: u64,
    pub upsilon_checks: u64,
    pub failures: Vec<String>,
}

impl LatticeSuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every lattice check on `group` with the standard `L`. Groups whose
/// `Q`-Sylow subgroup is cyclic are skipped and leave the report unchanged;
/// the pairing and Möbius checks run only when `a_t >= 2`.
pub fn check_group(group: &FinAbGroup, rep: &mut LatticeSuiteReport) -> Result<()> {
    if group.require_noncyclic_sylow().is_err() {
        return Ok(());
    }
    rep.groups += 1;
    let name = group.spec_string();
    let q = group.q_small().expect("nontrivial");
    let l = standard_l(group)?;
    let part = w_partition(group, &l)?;
    let w1: HashSet<&Subgroup> = part.w1.iter().collect();
    let w2: HashSet<&Subgroup> = part.w2.iter().collect();
    let mut failures: Vec<String> = Vec::new();
    let mut fail = |msg: String| failures.push(msg);

    // the pairing between W1 and W2 needs e_t of order at least Q^2
    let case_two = *group.q_exponents().last().expect("t >= 2") >= 2;
    let mut hit: HashSet<Subgroup> = HashSet::new();
    for h in part.w1.iter().filter(|_| case_two) {
        rep.pair_checks += 1;
        let j = pairing_phi(group, &l, h)?;
        if !w2.contains(&j) {
            fail(format!("φ({h}) = {j} is not in W2"));
        }
        if h.order() != j.order() * q {
            fail(format!("[{h} : {j}] != {q}"));
        }
        hit.insert(j);
    }
    for j in part.w2.iter().filter(|_| case_two) {
        rep.pair_checks += 1;
        if !hit.contains(j) {
            fail(format!("{j} is not in the image of φ"));
        }
        let size = quotient_q_torsion(&l, j, q);
        let fib = fiber(group, &l, j)?;
        if fib.len() as u64 != size {
            fail(format!("fibre over {j} has {} elements, expected {size}", fib.len()));
        }
        let want: HashSet<&Subgroup> = part.w1.iter().filter(|h| h.meet(&l) == *j).collect();
        let got: HashSet<&Subgroup> = fib.iter().collect();
        if want != got {
            fail(format!("fibre over {j} differs from the preimage under φ"));
        }
        for h in &fib {
            if !w1.contains(h) || h.meet(&l) != *j || h.order() != j.order() * q {
                fail(format!("{h} in the fibre over {j} is malformed"));
            }
        }
        rep.mu_checks += 1;
        let lhs = moebius(&j.quotient_type());
        let rhs = -(size as i64) * moebius(&relative_quotient(&l, j));
        if lhs != rhs {
            fail(format!("μ(G/{j}) = {lhs}, expected {rhs}"));
        }
    }

    let all: Vec<&Subgroup> = part.all().collect();
    let w_all: HashSet<&Subgroup> = all.iter().copied().collect();
    for (x, a) in all.iter().enumerate() {
        for b in &all[x..] {
            rep.closure_checks += 1;
            if !w_all.contains(&a.meet(b)) {
                fail(format!("{a} ∩ {b} is not in W"));
            }
        }
    }

    let wedge = exterior_square(group);
    let exps = group.q_exponents();
    let t = group.t();
    for d in subgroups(group)? {
        if !induced_wedge_image(&wedge, &d).is_trivial() {
            continue;
        }
        let elems = d.elements();
        for i in 1..=t {
            let v = group.scale(&group.e(i), q.pow(exps[i - 1] - 1));
            if !d.contains(&v) {
                continue;
            }
            for j in (1..=t).filter(|&j| j != i && exps[i - 1] <= exps[j - 1]) {
                for x in &elems {
                    rep.relax_checks += 1;
                    let b_j = x.exps()[group.e_index(j)];
                    if !wedge.group.is_identity(&wedge.wedge(&v, x)) || b_j % q != 0 {
                        fail(format!("relaxation fails for D = {d}, i = {i}, j = {j}, x = {x:?}"));
                    }
                }
            }
        }
    }

    if exps[..t - 1].iter().all(|&a| a == 1) {
        for ups in index_q_subgroups(&wedge, q) {
            rep.upsilon_checks += 1;
            let red = upsilon_reduction(group, &wedge, &ups)?;
            if !verify_upsilon_reduction(group, &wedge, &ups, &red)? {
                fail(format!("reduction post-condition fails for Υ = {ups}"));
            }
        }
    }
    for msg in failures {
        rep_fail(&mut rep.failures, &name, msg);
    }
    Ok(())
}

fn rep_fail(failures: &mut Vec<String>, name: &str, msg: String) {
    if failures.len() < 50 {
        failures.push(format!("{name}: {msg}"));
    }
}

/// [`check_group`] over every abelian group of order at most `max_order`.
pub fn lattice_lemma_suite(max_order: u64) -> Result<LatticeSuiteReport> {
    if max_order == 0 {
        return Err(Error::Argument("max order must be positive".into()));
    }
    let mut rep = LatticeSuiteReport::default();
    for g in groups_up_to(max_order) {
        check_group(&g, &mut rep)?;
    }
    Ok(rep)
}
