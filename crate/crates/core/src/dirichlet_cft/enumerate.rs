//! Depth-first enumeration of primitive homs by conductor-product bound.
//!
//! A primitive hom is a product of primitive local pieces at distinct primes
//! and `Φ_H` is multiplicative over them, so homs with `Φ_H <= B` are the
//! leaves of a search tree over increasing primes in which every partial
//! product already satisfies the bound.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use super::{GExtension, LocalPiece, UnitComponent};
use crate::abelian_group::{Element, FinAbGroup, Subgroup};
use crate::arith::{gcd, iroot, primes_up_to, sat_pow, valuation};
use crate::error::{Error, Result};

/// Largest prime the enumerator will sieve up to.
pub const MAX_PRIME_LIMIT: u64 = 200_000_000;

/// One primitive local piece at a prime together with its `Φ_H` exponent.
#[derive(Clone, Debug)]
pub struct LocalOption {
    pub piece: LocalPiece,
    pub exponent: u64,
    pub factor: u128,
}

/// Enumerates primitive homs `(Z/mZ)* -> H ≤ G` with `Φ_H <= B`.
pub struct HomEnumerator {
    ambient: Arc<FinAbGroup>,
    target_order: u64,
    weight: u64,
    bound: u128,
    primes: Vec<u64>,
    options: Vec<Vec<LocalOption>>,
    min_exponent: u64,
    surjective_only: bool,
    exact: Option<u128>,
    budget: Option<u64>,
}

fn local_options(ambient: &FinAbGroup, elems: &[(Element, u64)], weight: u64, p: u64) -> Vec<LocalOption> {
    let mut comps: HashMap<u32, UnitComponent> = HashMap::new();
    let mut comp = |k: u32| comps.entry(k).or_insert_with(|| UnitComponent::new(p, k)).clone();
    let mut out = Vec::new();
    let mut push = |piece: LocalPiece| {
        let exponent = piece.weighted_exponent(weight);
        out.push(LocalOption {
            factor: sat_pow(p, exponent),
            piece,
            exponent,
        });
    };
    if p == 2 {
        let two_torsion: Vec<&Element> = elems.iter().filter(|(_, o)| *o <= 2).map(|(x, _)| x).collect();
        for a in &two_torsion {
            for (b, ob) in elems {
                if !ob.is_power_of_two() {
                    continue;
                }
                if *ob == 1 {
                    if ambient.is_identity(a) {
                        continue;
                    }
                    push(LocalPiece::new(ambient, comp(2), vec![(*a).clone()]));
                } else {
                    let k = ob.trailing_zeros() + 2;
                    push(LocalPiece::new(ambient, comp(k), vec![(*a).clone(), b.clone()]));
                }
            }
        }
    } else {
        for (x, o) in elems {
            if *o == 1 {
                continue;
            }
            let v = valuation(*o, p);
            let d = o / p.pow(v);
            if (p - 1) % d != 0 {
                continue;
            }
            push(LocalPiece::new(ambient, comp(v + 1), vec![x.clone()]));
        }
    }
    out.sort_by_key(|o| o.exponent);
    out
}

impl HomEnumerator {
    /// Primitive homs into `target` with `Φ_target <= bound`.
    pub fn new(target: &Subgroup, bound: u128) -> Result<HomEnumerator> {
        Self::build(target, target.order(), bound, None)
    }

    /// Homs into `target` ordered by `Φ_W` for a larger `W ⊇ target`: the
    /// local exponents use `weight = |W|` in place of `|target|`.
    pub fn weighted(target: &Subgroup, weight: u64, bound: u128) -> Result<HomEnumerator> {
        if weight % target.order() != 0 {
            return Err(Error::Argument(format!(
                "weight {weight} is not a multiple of the target order {}",
                target.order()
            )));
        }
        Self::build(target, weight, bound, None)
    }

    /// Restricts the search to the given primes.
    pub fn with_primes(target: &Subgroup, bound: u128, primes: &[u64]) -> Result<HomEnumerator> {
        Self::build(target, target.order(), bound, Some(primes))
    }

    fn build(target: &Subgroup, weight: u64, bound: u128, only: Option<&[u64]>) -> Result<HomEnumerator> {
        let ambient = Arc::new(target.ambient().clone());
        let target_order = target.order();
        let elems: Vec<(Element, u64)> = target
            .elements()
            .into_iter()
            .map(|x| {
                let o = ambient.element_order(&x);
                (x, o)
            })
            .collect();
        let q = weight_smallest_prime(target_order);
        // every nontrivial local piece has exponent at least w(1 - 1/Q)
        let min_exponent = q.map_or(u64::MAX, |q| weight - weight / q);
        let candidates: Vec<u64> = match only {
            Some(ps) => {
                let mut v = ps.to_vec();
                v.sort_unstable();
                v.dedup();
                v
            }
            None if q.is_none() => Vec::new(),
            None => {
                let limit = iroot(bound, min_exponent.min(u32::MAX as u64) as u32);
                if limit > MAX_PRIME_LIMIT as u128 {
                    return Err(Error::Budget(limit as u64));
                }
                primes_up_to(limit as u64)
            }
        };
        let expo = target.isomorphism_type().exponent();
        let mut primes = Vec::new();
        let mut options = Vec::new();
        let mut by_class: HashMap<u64, Vec<LocalOption>> = HashMap::new();
        for p in candidates {
            let opts = if target_order % p == 0 {
                local_options(&ambient, &elems, weight, p)
            } else {
                let class = gcd(p - 1, expo);
                if class == 1 {
                    continue;
                }
                // tame options depend on p only through the generator residue
                let cached = by_class
                    .entry(class)
                    .or_insert_with(|| local_options(&ambient, &elems, weight, p));
                cached
                    .iter()
                    .map(|o| {
                        let piece = LocalPiece::new(&ambient, UnitComponent::new(p, 1), o.piece.images.clone());
                        LocalOption {
                            factor: sat_pow(p, o.exponent),
                            exponent: o.exponent,
                            piece,
                        }
                    })
                    .collect()
            };
            if !opts.is_empty() {
                primes.push(p);
                options.push(opts);
            }
        }
        Ok(HomEnumerator {
            ambient,
            target_order,
            weight,
            bound,
            primes,
            options,
            min_exponent,
            surjective_only: false,
            exact: None,
            budget: None,
        })
    }

    pub fn surjective_only(mut self, yes: bool) -> Self {
        self.surjective_only = yes;
        self
    }

    /// Only report homs with `Φ_H` exactly `value`.
    pub fn exact(mut self, value: u128) -> Self {
        self.exact = Some(value);
        self
    }

    /// Maximum number of search nodes before giving up.
    pub fn budget(mut self, nodes: Option<u64>) -> Self {
        self.budget = nodes;
        self
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    fn reportable(&self, phi: u128, image: &Subgroup) -> bool {
        (!self.surjective_only || image.order() == self.target_order) && self.exact.map_or(true, |e| e == phi)
    }

    fn make(&self, pieces: &[LocalPiece]) -> GExtension {
        GExtension::from_pieces(self.ambient.clone(), pieces.to_vec())
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        start: usize,
        phi: u128,
        pieces: &mut Vec<LocalPiece>,
        image: &Subgroup,
        visit: &mut dyn FnMut(&GExtension, u128),
        nodes: &AtomicU64,
        stop: &AtomicBool,
    ) {
        if stop.load(Ordering::Relaxed) {
            return;
        }
        let n = nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.is_some_and(|b| n > b) {
            stop.store(true, Ordering::Relaxed);
            return;
        }
        if self.reportable(phi, image) {
            visit(&self.make(pieces), phi);
        }
        let room = self.bound / phi;
        for idx in start..self.primes.len() {
            let p = self.primes[idx];
            if sat_pow(p, self.min_exponent) > room {
                break;
            }
            for opt in &self.options[idx] {
                if opt.factor > room {
                    break;
                }
                let next_image = image.join(&opt.piece.inertia(&self.ambient));
                pieces.push(opt.piece.clone());
                self.dfs(idx + 1, phi * opt.factor, pieces, &next_image, visit, nodes, stop);
                pieces.pop();
            }
        }
    }

    /// Folds every reported hom (with its `Φ_H`) into per-thread accumulators
    /// and merges them.
    pub fn fold<T, ID, F, R>(&self, identity: ID, fold: F, reduce: R) -> Result<T>
    where
        T: Send,
        ID: Fn() -> T + Sync + Send,
        F: Fn(&mut T, &GExtension, u128) + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        let nodes = AtomicU64::new(0);
        let stop = AtomicBool::new(false);
        let trivial = Subgroup::trivial(&self.ambient);
        let mut root = identity();
        nodes.fetch_add(1, Ordering::Relaxed);
        if self.reportable(1, &trivial) {
            fold(&mut root, &self.make(&[]), 1);
        }
        let branches: Vec<(usize, usize)> = (0..self.primes.len())
            .take_while(|&i| sat_pow(self.primes[i], self.min_exponent) <= self.bound)
            .flat_map(|i| {
                self.options[i]
                    .iter()
                    .enumerate()
                    .filter(|(_, o)| o.factor <= self.bound)
                    .map(move |(j, _)| (i, j))
            })
            .collect();
        let merged = branches
            .par_iter()
            .fold(&identity, |mut acc, &(i, j)| {
                let opt = &self.options[i][j];
                let mut pieces = vec![opt.piece.clone()];
                let image = opt.piece.inertia(&self.ambient);
                let mut visit = |e: &GExtension, phi: u128| fold(&mut acc, e, phi);
                self.dfs(i + 1, opt.factor, &mut pieces, &image, &mut visit, &nodes, &stop);
                acc
            })
            .reduce(&identity, &reduce);
        if stop.load(Ordering::Relaxed) {
            return Err(Error::Budget(nodes.load(Ordering::Relaxed)));
        }
        Ok(reduce(root, merged))
    }

    /// All reported homs, sorted by `(Φ_H, m, image encoding)`.
    pub fn collect(&self) -> Result<Vec<GExtension>> {
        let mut all: Vec<(u128, GExtension)> = self.fold(
            Vec::new,
            |acc, e, phi| acc.push((phi, e.clone())),
            |mut a, b| {
                a.extend(b);
                a
            },
        )?;
        let g = &*self.ambient;
        all.sort_by_cached_key(|(phi, e)| {
            (
                *phi,
                e.modulus,
                e.images().iter().map(|x| g.encode(x)).collect::<Vec<_>>(),
            )
        });
        Ok(all.into_iter().map(|(_, e)| e).collect())
    }

    pub fn count(&self) -> Result<u64> {
        self.fold(|| 0u64, |acc, _, _| *acc += 1, |a, b| a + b)
    }
}

fn weight_smallest_prime(w: u64) -> Option<u64> {
    crate::arith::smallest_prime_factor(w)
}

/// Every `G`-extension (primitive surjective hom) with `Δ <= bound`, sorted
/// by `(Δ, m, image encoding)`.
pub fn enumerate(group: &FinAbGroup, bound: u128) -> Result<Vec<GExtension>> {
    HomEnumerator::new(&Subgroup::whole(group), bound)?
        .surjective_only(true)
        .collect()
}

/// Primitive homs into `h` with `Φ_h <= bound`.
pub fn enumerate_homs(h: &Subgroup, bound: u128, surjective: bool) -> Result<Vec<GExtension>> {
    HomEnumerator::new(h, bound)?.surjective_only(surjective).collect()
}

/// Visits every `G`-extension with `Δ <= bound` in parallel, merging per-thread
/// accumulators.
pub fn for_each_hom<T, ID, F, R>(group: &FinAbGroup, bound: u128, identity: ID, fold: F, reduce: R) -> Result<T>
where
    T: Send,
    ID: Fn() -> T + Sync + Send,
    F: Fn(&mut T, &GExtension, u128) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    HomEnumerator::new(&Subgroup::whole(group), bound)?
        .surjective_only(true)
        .fold(identity, fold, reduce)
}

/// `G`-extensions with discriminant exactly `disc` and conductor supported
/// on `primes`.
pub fn find_by_discriminant(group: &FinAbGroup, disc: u128, primes: &[u64]) -> Result<Vec<GExtension>> {
    if primes.is_empty() {
        return Ok(if disc == 1 && group.is_trivial() {
            enumerate(group, 1)?
        } else {
            Vec::new()
        });
    }
    HomEnumerator::with_primes(&Subgroup::whole(group), disc, primes)?
        .surjective_only(true)
        .exact(disc)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FinAbGroup {
        FinAbGroup::parse(s).unwrap()
    }

    #[test]
    fn quadratic_small_bounds() {
        let z2 = g("C2");
        let d: Vec<u128> = enumerate(&z2, 10).unwrap().iter().map(|e| e.discriminant()).collect();
        assert_eq!(d, vec![3, 4, 5, 7, 8, 8]);
        let d3: Vec<u128> = enumerate(&z2, 3).unwrap().iter().map(|e| e.discriminant()).collect();
        assert_eq!(d3, vec![3]);
        assert!(enumerate(&g("C2xC2"), 1).unwrap().is_empty());
    }

    #[test]
    fn find_examples() {
        let z2 = g("C2");
        let hits = find_by_discriminant(&z2, 5, &[5]).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].modulus, 5);
        assert!(find_by_discriminant(&z2, 6, &[2, 3]).unwrap().is_empty());
        assert!(find_by_discriminant(&z2, 5, &[]).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let z2 = g("C2xC2");
        let r = HomEnumerator::new(&Subgroup::whole(&z2), 1_000_000)
            .unwrap()
            .budget(Some(10))
            .count();
        assert!(matches!(r, Err(Error::Budget(_))));
    }
}
