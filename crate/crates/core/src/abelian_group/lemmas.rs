//! Subgroup-lattice constructions used by the counting argument: the
//! distinguished index-`Q` subgroups, the reduction of a maximal proper
//! subgroup of `∧²G` to a choice of generators, and the pairing between the
//! two halves of the maximal-rank, squarefree-quotient subgroups.

use std::collections::HashSet;

use super::{moebius, subgroups, Element, FinAbGroup, Subgroup, WedgeSquare};
use crate::arith::is_prime;
use crate::error::{Error, Result};

fn m_generators(group: &FinAbGroup) -> Vec<Element> {
    (0..group.m_len()).map(|i| group.basis_element(i)).collect()
}

fn small_prime(group: &FinAbGroup) -> Result<u64> {
    group
        .q_small()
        .ok_or_else(|| Error::Argument("trivial group has no smallest prime".into()))
}

/// `⟨M, e_1, ..., e_{j-1}, e_j^Q, e_{j+1}, ..., e_t⟩` for the generators
/// `gens = (e_1, ..., e_t)` of the `Q`-part (`j` is 1-based).
pub fn relaxed_subgroup(group: &FinAbGroup, gens: &[Element], j: usize) -> Result<Subgroup> {
    let q = small_prime(group)?;
    if j == 0 || j > gens.len() {
        return Err(Error::Argument(format!(
            "index j = {j} out of range 1..={}",
            gens.len()
        )));
    }
    let mut all = m_generators(group);
    for (k, e) in gens.iter().enumerate() {
        if k + 1 == j {
            all.push(group.scale(e, q));
        } else {
            all.push(e.clone());
        }
    }
    Ok(Subgroup::generated(group, &all))
}

/// `⟨M, e_1, ..., e_j^Q, ..., e_t⟩` for the canonical generators.
pub fn relaxed_subgroup_canonical(group: &FinAbGroup, j: usize) -> Result<Subgroup> {
    let gens: Vec<Element> = (1..=group.t()).map(|k| group.e(k)).collect();
    relaxed_subgroup(group, &gens, j)
}

/// `L = ⟨M, e_1, ..., e_{t-1}, e_t^Q⟩`.
pub fn standard_l(group: &FinAbGroup) -> Result<Subgroup> {
    group.require_noncyclic_sylow()?;
    relaxed_subgroup_canonical(group, group.t())
}

#[derive(Clone, Debug)]
pub struct UpsilonReduction {
    /// New generators `e_1, ..., e_t` of the `Q`-part.
    pub generators: Vec<Element>,
    /// 1-based indices.
    pub i: usize,
    pub j: usize,
    /// Whether `∧²` of the order-`Q` factors already lies in the subgroup.
    pub small_wedge_contained: bool,
}

fn check_reduction_shape(group: &FinAbGroup) -> Result<u64> {
    group.require_noncyclic_sylow()?;
    let exps = group.q_exponents();
    if exps[..exps.len() - 1].iter().any(|&a| a != 1) {
        return Err(Error::Argument(format!(
            "{group} is not of the shape M x (Z/Q)^(t-1) x Z/Q^a"
        )));
    }
    small_prime(group)
}

/// Given a maximal proper `Υ ⊂ ∧²G`, returns generators `e_1, ..., e_t` of
/// `G/M` (orders `Q, ..., Q, Q^a`) and `i <= t-1`, `j` such that
/// `{g : e_i ∧ g ∈ Υ} ⊆ ⟨M, e_1, ..., e_j^Q, ..., e_t⟩`.
pub fn upsilon_reduction(group: &FinAbGroup, wedge: &WedgeSquare, upsilon: &Subgroup) -> Result<UpsilonReduction> {
    let q = check_reduction_shape(group)?;
    if &wedge.source != group || upsilon.ambient() != &wedge.group {
        return Err(Error::NotContained(
            "upsilon is not a subgroup of the exterior square".into(),
        ));
    }
    let idx = upsilon.index();
    if !is_prime(idx) {
        return Err(Error::Argument(format!(
            "subgroup of index {idx} in the exterior square is not maximal proper"
        )));
    }
    if idx != q {
        return Err(Error::Unsupported(format!(
            "maximal subgroup of index {idx} != Q = {q}"
        )));
    }
    let t = group.t();
    let canonical: Vec<Element> = (1..=t).map(|k| group.e(k)).collect();
    let mut outside = None;
    'outer: for m in 0..t - 1 {
        for n in m + 1..t - 1 {
            if !upsilon.contains(&wedge.wedge(&canonical[m], &canonical[n])) {
                outside = Some((m, n));
                break 'outer;
            }
        }
    }
    let Some((m, n)) = outside else {
        let i = (0..t - 1)
            .find(|&k| !upsilon.contains(&wedge.wedge(&canonical[k], &canonical[t - 1])))
            .expect("the pair generators span the exterior square");
        return Ok(UpsilonReduction {
            generators: canonical,
            i: i + 1,
            j: t,
            small_wedge_contained: true,
        });
    };
    let eps_i = canonical[m].clone();
    let eps_j = canonical[n].clone();
    let l_i: Vec<Element> = group
        .elements()
        .into_iter()
        .filter(|g| upsilon.contains(&wedge.wedge(&eps_i, g)))
        .collect();
    let m_len = group.m_len();
    let p_part: Vec<Element> = l_i
        .into_iter()
        .filter(|x| x.exps()[..m_len].iter().all(|&c| c == 0))
        .collect();
    let p_sub = Subgroup::generated(group, &p_part);
    let top = group.orders()[group.rank() - 1];
    let eps_line = Subgroup::generated(group, &[eps_i.clone()]);
    let f_t = p_part
        .iter()
        .find(|x| group.element_order(x) == top && !eps_line.contains(&group.scale(x, top / q)))
        .cloned()
        .ok_or_else(|| Error::Argument("no element of maximal order in the kernel".into()))?;
    let mut middle = Vec::new();
    let mut span = Subgroup::generated(group, &[eps_i.clone(), f_t.clone()]);
    for x in &p_part {
        if span.order() == p_sub.order() {
            break;
        }
        if group.element_order(x) == q && !span.contains(x) {
            span = span.join_element(x);
            middle.push(x.clone());
        }
    }
    let mut generators = vec![eps_j, eps_i];
    generators.extend(middle);
    generators.push(f_t);
    debug_assert_eq!(generators.len(), t);
    Ok(UpsilonReduction {
        generators,
        i: 2,
        j: 1,
        small_wedge_contained: false,
    })
}

/// Brute-force check of the post-condition of [`upsilon_reduction`].
pub fn verify_upsilon_reduction(
    group: &FinAbGroup,
    wedge: &WedgeSquare,
    upsilon: &Subgroup,
    red: &UpsilonReduction,
) -> Result<bool> {
    let q = small_prime(group)?;
    let t = group.t();
    let gens = &red.generators;
    if gens.len() != t || red.i == 0 || red.i >= t || red.j == 0 || red.j > t || red.i == red.j {
        return Ok(false);
    }
    let top = group.orders()[group.rank() - 1];
    for (k, e) in gens.iter().enumerate() {
        let want = if k + 1 == t { top } else { q };
        if group.element_order(e) != want || e.exps()[..group.m_len()].iter().any(|&c| c != 0) {
            return Ok(false);
        }
    }
    let mut all = m_generators(group);
    all.extend(gens.iter().cloned());
    if !Subgroup::generated(group, &all).is_whole() {
        return Ok(false);
    }
    let target = relaxed_subgroup(group, gens, red.j)?;
    let e_i = &gens[red.i - 1];
    Ok(group
        .elements()
        .iter()
        .filter(|g| upsilon.contains(&wedge.wedge(e_i, g)))
        .all(|g| target.contains(g)))
}

/// Maximal proper subgroups of a finite abelian group.
pub fn maximal_subgroups(group: &FinAbGroup) -> Result<Vec<Subgroup>> {
    Ok(subgroups(group)?.into_iter().filter(|h| is_prime(h.index())).collect())
}

#[derive(Clone, Debug)]
pub struct WPartition {
    pub w1: Vec<Subgroup>,
    pub w2: Vec<Subgroup>,
}

impl WPartition {
    pub fn all(&self) -> impl Iterator<Item = &Subgroup> {
        self.w1.iter().chain(self.w2.iter())
    }
}

fn in_w(h: &Subgroup, q: u64, beta_g: usize) -> bool {
    h.q_rank(q) == beta_g && moebius(&h.quotient_type()) != 0
}

/// `W = {H : β_H = β_G, μ(G/H) ≠ 0}` split by containment in `L`.
pub fn w_partition(group: &FinAbGroup, l: &Subgroup) -> Result<WPartition> {
    let q = small_prime(group)?;
    if l.ambient() != group {
        return Err(Error::NotContained(format!("{l}")));
    }
    let beta = group.q_rank(q);
    let mut w1 = Vec::new();
    let mut w2 = Vec::new();
    for h in subgroups(group)? {
        if !in_w(&h, q, beta) {
            continue;
        }
        if h.is_subgroup_of(l) {
            w2.push(h);
        } else {
            w1.push(h);
        }
    }
    Ok(WPartition { w1, w2 })
}

/// `φ(H) = H ∩ L` for `H ∈ W₁`.
pub fn pairing_phi(group: &FinAbGroup, l: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
    let q = small_prime(group)?;
    if !in_w(h, q, group.q_rank(q)) || h.is_subgroup_of(l) {
        return Err(Error::Argument(format!("{h} is not in W1")));
    }
    Ok(h.meet(l))
}

/// `{⟨J, e_t·ℓ⟩ : ℓ ∈ L, ℓ^Q ∈ J}` for `J ∈ W₂`, deduplicated and sorted.
pub fn fiber(group: &FinAbGroup, l: &Subgroup, j: &Subgroup) -> Result<Vec<Subgroup>> {
    let q = small_prime(group)?;
    group.require_noncyclic_sylow()?;
    if !in_w(j, q, group.q_rank(q)) || !j.is_subgroup_of(l) {
        return Err(Error::Argument(format!("{j} is not in W2")));
    }
    let e_t = group.e(group.t());
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for ell in l.elements() {
        if !j.contains(&group.scale(&ell, q)) {
            continue;
        }
        let h = j.join_element(&group.add(&e_t, &ell));
        if seen.insert(h.clone()) {
            out.push(h);
        }
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::exterior_square;
    use super::*;

    fn g(s: &str) -> FinAbGroup {
        FinAbGroup::parse(s).unwrap()
    }

    #[test]
    fn reduction_examples() {
        for spec in ["C2xC2", "C2xC4", "C3xC3", "C2xC2xC2", "C2xC2xC4", "C5xC2xC2"] {
            let a = g(spec);
            let w = exterior_square(&a);
            for ups in maximal_subgroups(&w.group).unwrap() {
                let red = upsilon_reduction(&a, &w, &ups).unwrap();
                assert!(verify_upsilon_reduction(&a, &w, &ups, &red).unwrap(), "{spec}");
            }
        }
        let a = g("C2xC4");
        let w = exterior_square(&a);
        let red = upsilon_reduction(&a, &w, &w.trivial_subgroup()).unwrap();
        assert_eq!((red.i, red.j), (1, 2));
    }

    #[test]
    fn reduction_rejects_non_maximal() {
        let a = g("C2xC2xC2");
        let w = exterior_square(&a);
        assert!(upsilon_reduction(&a, &w, &w.trivial_subgroup()).is_err());
        assert!(upsilon_reduction(&a, &w, &w.whole()).is_err());
    }

    #[test]
    fn w_partition_examples() {
        let a = g("C2xC4");
        let l = standard_l(&a).unwrap();
        assert_eq!(l, Subgroup::generated(&a, &[a.e(1), a.scale(&a.e(2), 2)]));
        let w = w_partition(&a, &l).unwrap();
        assert!(w.w2.contains(&l));
        let fib = fiber(&a, &l, &l).unwrap();
        assert_eq!(fib, vec![Subgroup::whole(&a)]);
        let v = g("C2xC2");
        let lv = standard_l(&v).unwrap();
        assert!(w_partition(&v, &lv).unwrap().w2.is_empty());
    }
}
