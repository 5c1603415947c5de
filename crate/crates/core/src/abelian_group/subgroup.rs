use std::collections::HashSet;
use std::fmt;

use super::smith::{smith_normal_form, IntMatrix};
use super::{Element, FinAbGroup};
use crate::arith::{ext_gcd, factorize};
use crate::error::{Error, Result};

pub const DEFAULT_SUBGROUP_CAP: usize = 1_000_000;

/// A subgroup stored as the Hermite normal form of its preimage lattice in
/// `Z^r` (which contains the relation lattice `diag(n_1, ..., n_r)`).
///
/// Row `i` has pivot `h_i | n_i` in column `i`, zeros to the left, and every
/// entry above a pivot is reduced into `[0, h_i)`. This form is unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ambient: FinAbGroup,
    rows: Vec<Vec<u64>>,
}

fn hermite(orders: &[u64], gens: impl IntoIterator<Item = Vec<i128>>) -> Vec<Vec<u64>> {
    let r = orders.len();
    let n: Vec<i128> = orders.iter().map(|&x| x as i128).collect();
    let mut pool: Vec<Vec<i128>> = gens.into_iter().collect();
    for i in 0..r {
        let mut rel = vec![0i128; r];
        rel[i] = n[i];
        pool.push(rel);
    }
    let reduce_tail = |row: &mut Vec<i128>, from: usize| {
        for j in from..r {
            row[j] = row[j].rem_euclid(n[j]);
        }
    };
    let mut out: Vec<Vec<i128>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut pivot: Option<Vec<i128>> = None;
        let mut rest = Vec::with_capacity(pool.len());
        for row in pool.drain(..) {
            if row[i] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (g, x, y) = ext_gcd(p[i], row[i]);
                    let (pa, ra) = (p[i] / g, row[i] / g);
                    let mut new_p: Vec<i128> = (0..r).map(|k| x * p[k] + y * row[k]).collect();
                    let mut other: Vec<i128> = (0..r).map(|k| ra * p[k] - pa * row[k]).collect();
                    reduce_tail(&mut new_p, i + 1);
                    reduce_tail(&mut other, i + 1);
                    pivot = Some(new_p);
                    rest.push(other);
                }
            }
        }
        let mut p = pivot.expect("relation row guarantees a pivot");
        if p[i] < 0 {
            p.iter_mut().for_each(|x| *x = -*x);
        }
        reduce_tail(&mut p, i + 1);
        out.push(p);
        pool = rest;
    }
    for i in 0..r {
        let h = out[i][i];
        for k in 0..i {
            let q = out[k][i].div_euclid(h);
            if q != 0 {
                let src = out[i].clone();
                for (x, y) in out[k].iter_mut().zip(src) {
                    *x -= q * y;
                }
            }
            for j in i + 1..r {
                out[k][j] = out[k][j].rem_euclid(n[j]);
            }
        }
    }
    out.into_iter()
        .map(|row| row.into_iter().map(|x| x as u64).collect())
        .collect()
}

impl Subgroup {
    pub fn generated(ambient: &FinAbGroup, gens: &[Element]) -> Subgroup {
        let rows = hermite(
            ambient.orders(),
            gens.iter().map(|g| {
                assert_eq!(g.exps().len(), ambient.rank(), "element rank mismatch");
                g.exps().iter().map(|&x| x as i128).collect()
            }),
        );
        Subgroup {
            ambient: ambient.clone(),
            rows,
        }
    }

    pub fn trivial(ambient: &FinAbGroup) -> Subgroup {
        Self::generated(ambient, &[])
    }

    pub fn whole(ambient: &FinAbGroup) -> Subgroup {
        let gens: Vec<Element> = (0..ambient.rank()).map(|i| ambient.basis_element(i)).collect();
        Self::generated(ambient, &gens)
    }

    /// `G[n]`, the `n`-torsion subgroup.
    pub fn torsion(ambient: &FinAbGroup, n: u64) -> Subgroup {
        let gens: Vec<Element> = ambient
            .orders()
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let step = d / crate::arith::gcd(d, n);
                ambient.scale(&ambient.basis_element(i), step)
            })
            .collect();
        Self::generated(ambient, &gens)
    }

    /// Parses a generator list such as `"e1,e2^2"` or `"M,e1*e2^3"`.
    ///
    /// `e<i>` is the `i`-th `Q`-part generator, `M` stands for all of the
    /// `M`-part, `^k` takes a multiple and `*` adds. `"1"` or an empty spec
    /// gives the trivial subgroup.
    pub fn parse(ambient: &FinAbGroup, spec: &str) -> Result<Subgroup> {
        let mut gens = Vec::new();
        for term in spec.split(',').map(str::trim).filter(|t| !t.is_empty() && *t != "1") {
            if term == "M" {
                gens.extend((0..ambient.m_len()).map(|k| ambient.basis_element(k)));
                continue;
            }
            let mut x = ambient.identity();
            for factor in term.split('*').map(str::trim) {
                let (base, power) = match factor.split_once('^') {
                    Some((b, p)) => {
                        let k: u64 = p
                            .trim()
                            .parse()
                            .map_err(|_| Error::parse("subgroup", spec, format!("bad power in {factor:?}")))?;
                        (b.trim(), k)
                    }
                    None => (factor, 1),
                };
                let i: usize = base
                    .strip_prefix('e')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::parse("subgroup", spec, format!("factor {factor:?} must look like e<i>")))?;
                if i == 0 || i > ambient.t() {
                    return Err(Error::parse(
                        "subgroup",
                        spec,
                        format!("e{i} out of range, the group has t = {}", ambient.t()),
                    ));
                }
                x = ambient.add(&x, &ambient.scale(&ambient.e(i), power));
            }
            gens.push(x);
        }
        Ok(Self::generated(ambient, &gens))
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    /// Canonical Hermite basis rows.
    pub fn basis(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn index(&self) -> u64 {
        (0..self.rows.len()).map(|i| self.rows[i][i]).product()
    }

    pub fn order(&self) -> u64 {
        self.ambient.order() / self.index()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.index() == 1
    }

    /// Non-redundant generators: the basis rows whose pivot is a proper divisor.
    pub fn generators(&self) -> Vec<Element> {
        let orders = self.ambient.orders();
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, row)| row[*i] < orders[*i])
            .map(|(_, row)| Element::new(row.iter().zip(orders).map(|(&x, &n)| x % n).collect()))
            .collect()
    }

    pub fn contains(&self, x: &Element) -> bool {
        let orders = self.ambient.orders();
        let mut v: Vec<i128> = x.exps().iter().map(|&e| e as i128).collect();
        for i in 0..v.len() {
            let h = self.rows[i][i] as i128;
            if v[i].rem_euclid(h) != 0 {
                return false;
            }
            let q = v[i].div_euclid(h);
            for (k, vk) in v.iter_mut().enumerate().skip(i) {
                *vk = (*vk - q * self.rows[i][k] as i128).rem_euclid(orders[k] as i128);
            }
        }
        true
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.generators().iter().all(|g| other.contains(g))
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.generators();
        gens.extend(other.generators());
        Self::generated(&self.ambient, &gens)
    }

    pub fn join_element(&self, x: &Element) -> Subgroup {
        let mut gens = self.generators();
        gens.push(x.clone());
        Self::generated(&self.ambient, &gens)
    }

    pub fn meet(&self, other: &Subgroup) -> Subgroup {
        let (small, big) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let common: Vec<Element> = small.elements().into_iter().filter(|x| big.contains(x)).collect();
        Self::generated(&self.ambient, &common)
    }

    /// All elements, enumerated through the Hermite coordinates.
    pub fn elements(&self) -> Vec<Element> {
        let orders = self.ambient.orders();
        let r = orders.len();
        let mut out: Vec<Vec<u64>> = vec![vec![0; r]];
        for i in 0..r {
            let h = self.rows[i][i];
            let reps = orders[i] / h;
            if reps == 1 {
                continue;
            }
            let row = &self.rows[i];
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..reps).map(move |c| {
                        v.iter()
                            .zip(row)
                            .zip(orders)
                            .map(|((&a, &b), &n)| ((a as u128 + c as u128 * b as u128) % n as u128) as u64)
                            .collect()
                    })
                })
                .collect();
        }
        out.into_iter().map(Element::new).collect()
    }

    /// Isomorphism type of the quotient `G / self`.
    pub fn quotient_type(&self) -> FinAbGroup {
        let m: IntMatrix = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        let snf = smith_normal_form(&m);
        let orders: Vec<u64> = snf.diagonal.iter().map(|&d| d as u64).filter(|&d| d > 1).collect();
        FinAbGroup::from_cyclic_orders(&orders).expect("positive diagonal")
    }

    /// Isomorphism type of the subgroup together with elements of the ambient
    /// group that realise its canonical generators: canonical factor `k` of the
    /// returned group is generated by the `k`-th returned element.
    pub fn abstract_basis(&self) -> (FinAbGroup, Vec<Element>) {
        let orders = self.ambient.orders();
        let r = orders.len();
        let b: Vec<Vec<i128>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        // relation lattice in the Hermite basis: c * B = n_j e_j
        let mut c: IntMatrix = Vec::with_capacity(r);
        for j in 0..r {
            let mut coeffs = vec![0i128; r];
            for k in 0..r {
                let target = if k == j { orders[j] as i128 } else { 0 };
                let acc: i128 = (0..k).map(|l| coeffs[l] * b[l][k]).sum();
                let rem = target - acc;
                debug_assert_eq!(rem % b[k][k], 0);
                coeffs[k] = rem / b[k][k];
            }
            c.push(coeffs);
        }
        let snf = smith_normal_form(&c);
        let f: Vec<Vec<i128>> = snf
            .v_inv
            .iter()
            .map(|vr| (0..r).map(|col| (0..r).map(|l| vr[l] * b[l][col]).sum()).collect())
            .collect();
        let mut powers = Vec::new();
        let mut elems = Vec::new();
        for (k, &d) in snf.diagonal.iter().enumerate() {
            let d = d as u64;
            if d <= 1 {
                continue;
            }
            let base = self.ambient.element(
                &f[k]
                    .iter()
                    .zip(orders)
                    .map(|(&x, &n)| x.rem_euclid(n as i128) as i64)
                    .collect::<Vec<_>>(),
            );
            for (p, e) in factorize(d) {
                let pe = p.pow(e);
                powers.push(pe);
                elems.push(self.ambient.scale(&base, d / pe));
            }
        }
        let (group, perm) = FinAbGroup::from_prime_powers(&powers);
        let basis = perm.into_iter().map(|i| elems[i].clone()).collect();
        (group, basis)
    }

    pub fn isomorphism_type(&self) -> FinAbGroup {
        self.abstract_basis().0
    }

    /// `F_Q`-rank of the subgroup.
    pub fn q_rank(&self, q: u64) -> usize {
        self.isomorphism_type().q_rank(q)
    }

    /// Image of `x` in `G / self`, as a canonical coset representative key.
    pub fn coset_key(&self, x: &Element) -> Vec<u64> {
        let orders = self.ambient.orders();
        let mut v: Vec<i128> = x.exps().iter().map(|&e| e as i128).collect();
        for i in 0..v.len() {
            let h = self.rows[i][i] as i128;
            let q = v[i].div_euclid(h);
            for (k, vk) in v.iter_mut().enumerate().skip(i) {
                *vk -= q * self.rows[i][k] as i128;
                *vk = vk.rem_euclid(orders[k] as i128);
            }
        }
        v.into_iter().map(|x| x as u64).collect()
    }

    pub fn sort_key(&self) -> (u64, &[Vec<u64>]) {
        (self.order(), &self.rows)
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators().iter().map(|g| format!("{:?}", g.exps())).collect();
        write!(f, "<{}> in {}", gens.join(", "), self.ambient)
    }
}

/// Every subgroup of `G`, sorted by order then Hermite basis.
pub fn subgroups(group: &FinAbGroup) -> Result<Vec<Subgroup>> {
    subgroups_with_cap(group, DEFAULT_SUBGROUP_CAP)
}

/// As [`subgroups`], refusing when the number of join candidates would exceed `cap`.
pub fn subgroups_with_cap(group: &FinAbGroup, cap: usize) -> Result<Vec<Subgroup>> {
    if group.order() as u128 > cap as u128 {
        return Err(Error::SizeCap(format!(
            "group {group} of order {} exceeds the subgroup candidate cap {cap}",
            group.order()
        )));
    }
    let mut cyclic: Vec<Subgroup> = Vec::new();
    let mut seen_cyclic = HashSet::new();
    for x in group.elements() {
        let c = Subgroup::generated(group, &[x]);
        if seen_cyclic.insert(c.clone()) {
            cyclic.push(c);
        }
    }
    let mut all: HashSet<Subgroup> = HashSet::new();
    let trivial = Subgroup::trivial(group);
    all.insert(trivial.clone());
    let mut frontier = vec![trivial];
    let mut work = 0usize;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for k in &frontier {
            for c in &cyclic {
                work += 1;
                if work > cap {
                    return Err(Error::SizeCap(format!(
                        "subgroup enumeration of {group} exceeded {cap} candidates"
                    )));
                }
                if c.is_subgroup_of(k) {
                    continue;
                }
                let j = k.join(c);
                if all.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Subgroup> = all.into_iter().collect();
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(out)
}
