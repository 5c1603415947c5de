//! Abelian extensions of `Q` as homomorphisms `(Z/mZ)* -> G`.
//!
//! Every hom is stored prime by prime: the restriction to the `p`-primary CRT
//! factor `(Z/p^k)*` is a [`LocalPiece`], given by the images of that factor's
//! canonical generators. Odd prime powers use the canonical primitive root;
//! `(Z/4)*` uses `-1`; `(Z/2^k)*` for `k >= 3` uses `-1` and `5`.

mod enumerate;
mod record;

pub use enumerate::{enumerate, enumerate_homs, find_by_discriminant, for_each_hom, HomEnumerator, LocalOption};
pub use record::{
    cache_path, load_or_enumerate, read_jsonl, write_jsonl_atomic, CacheHeader, ExtensionRecord, LocalSymbolRecord,
    CACHE_FORMAT_VERSION,
};

use std::fmt;
use std::sync::Arc;

use crate::abelian_group::{relaxed_subgroup_canonical, Element, FinAbGroup, Subgroup};
use crate::arith::{canonical_primitive_root, dlog_mod, euler_phi, factorize, gcd, mul_mod, sat_pow};
use crate::error::{Error, Result};

/// The CRT factor `(Z/p^k)*` with its canonical generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitComponent {
    pub p: u64,
    pub k: u32,
    pub pk: u64,
    /// Generators as residues modulo `p^k`.
    pub gens: Vec<u64>,
    pub orders: Vec<u64>,
}

impl UnitComponent {
    pub fn new(p: u64, k: u32) -> UnitComponent {
        let pk = p.pow(k);
        let (gens, orders) = match (p, k) {
            (2, 1) | (_, 0) => (vec![], vec![]),
            (2, 2) => (vec![3], vec![2]),
            (2, _) => (vec![pk - 1, 5], vec![2, pk / 4]),
            _ => (vec![canonical_primitive_root(p, k)], vec![euler_phi(pk)]),
        };
        UnitComponent { p, k, pk, gens, orders }
    }

    /// Exponents of `u` on the generators, exponent `i` reduced modulo `moduli[i]`
    /// (each `moduli[i]` must divide `orders[i]`).
    pub fn log(&self, u: u64, moduli: &[u64]) -> Vec<u64> {
        let u = u % self.pk;
        match (self.p, self.gens.len()) {
            (_, 0) => vec![],
            (2, 1) => vec![u64::from(u % 4 == 3) % moduli[0]],
            (2, _) => {
                let neg = u % 4 == 3;
                let v = if neg { self.pk - u } else { u };
                let e = dlog_mod(v, 5, self.pk, self.orders[1], moduli[1]).expect("5 generates the 1 mod 4 units");
                vec![u64::from(neg) % moduli[0], e]
            }
            _ => {
                let e = dlog_mod(u, self.gens[0], self.pk, self.orders[0], moduli[0])
                    .expect("primitive root generates the units");
                vec![e]
            }
        }
    }

    /// Generator of `U^(j) = {u = 1 mod p^j}` inside this component, as
    /// exponents over the canonical generators (`None` when trivial).
    fn filtration_generator(&self, j: u32) -> Option<Vec<u64>> {
        if j >= self.k {
            return None;
        }
        match (self.p, self.gens.len()) {
            (_, 0) => None,
            (2, _) if j <= 1 => Some(vec![1; self.gens.len()]),
            (2, _) => Some(vec![0, 1 << (j - 2)]),
            _ if j == 0 => Some(vec![1]),
            (p, _) => Some(vec![(p - 1) * p.pow(j - 1)]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroupStructure {
    pub modulus: u64,
    pub components: Vec<UnitComponent>,
    /// Global generators as residues modulo `m`, component by component.
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
}

fn crt_lift(local: u64, pk: u64, m: u64) -> u64 {
    if pk == m {
        return local % m;
    }
    let rest = m / pk;
    // u = local mod pk, 1 mod rest
    let inv = crate::arith::inv_mod(rest % pk, pk).expect("coprime");
    let t = mul_mod((local + pk - 1) % pk, inv, pk);
    (1 + (t as u128 * rest as u128 % m as u128) as u64) % m
}

pub fn unit_group(m: u64) -> UnitGroupStructure {
    assert!(m >= 1, "modulus must be positive");
    let components: Vec<UnitComponent> = factorize(m)
        .into_iter()
        .map(|(p, k)| UnitComponent::new(p, k))
        .collect();
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for c in &components {
        for (&g, &o) in c.gens.iter().zip(&c.orders) {
            generators.push(crt_lift(g, c.pk, m));
            orders.push(o);
        }
    }
    UnitGroupStructure {
        modulus: m,
        components,
        generators,
        orders,
    }
}

/// Restriction of a hom to one CRT factor `(Z/p^k)*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPiece {
    pub component: UnitComponent,
    pub images: Vec<Element>,
    /// `s_j = |φ(U^(j))|` for `j = 0, ..., k-1`.
    pub filtration: Vec<u64>,
}

impl LocalPiece {
    pub fn new(group: &FinAbGroup, component: UnitComponent, images: Vec<Element>) -> LocalPiece {
        assert_eq!(images.len(), component.gens.len());
        let mut filtration = Vec::with_capacity(component.k as usize);
        for j in 0..component.k {
            let size = match component.filtration_generator(j) {
                None => 1,
                Some(exps) if exps.len() == 1 => group.element_order(&group.scale(&images[0], exps[0])),
                Some(exps) if j <= 1 && component.p == 2 => {
                    debug_assert!(exps.iter().all(|&e| e == 1));
                    Subgroup::generated(group, &images).order()
                }
                Some(exps) => group.element_order(&group.scale(&images[1], exps[1])),
            };
            filtration.push(size);
        }
        LocalPiece {
            component,
            images,
            filtration,
        }
    }

    pub fn p(&self) -> u64 {
        self.component.p
    }

    /// `φ_p(u)` for `u` coprime to `p`.
    pub fn eval(&self, group: &FinAbGroup, u: u64) -> Element {
        let moduli: Vec<u64> = self
            .images
            .iter()
            .zip(&self.component.orders)
            .map(|(x, &o)| gcd(group.element_order(x), o))
            .collect();
        let exps = self.component.log(u, &moduli);
        let mut acc = group.identity();
        for (x, e) in self.images.iter().zip(exps) {
            acc = group.add(&acc, &group.scale(x, e));
        }
        acc
    }

    pub fn is_trivial(&self, group: &FinAbGroup) -> bool {
        self.images.iter().all(|x| group.is_identity(x))
    }

    /// Inertia image `φ((Z/p^k)*)`.
    pub fn inertia(&self, group: &FinAbGroup) -> Subgroup {
        Subgroup::generated(group, &self.images)
    }

    /// Conductor exponent: the least `c` with `φ` trivial on `U^(c)`.
    pub fn conductor_exponent(&self) -> u32 {
        self.filtration.iter().filter(|&&s| s > 1).count() as u32
    }

    /// `Σ_j (w - w / s_j)`: the exponent of `p` in `∏_ψ cond(ψ∘φ)` over the
    /// dual of a group of order `w` containing the image.
    pub fn weighted_exponent(&self, w: u64) -> u64 {
        self.filtration.iter().map(|&s| w - w / s).sum()
    }
}

/// A homomorphism `(Z/mZ)* -> G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GExtension {
    pub target: Arc<FinAbGroup>,
    pub modulus: u64,
    /// Pieces for the primes dividing `modulus`, ascending.
    pub pieces: Vec<LocalPiece>,
}

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Finite(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSymbol {
    pub place: Place,
    pub inertia: Subgroup,
    pub frobenius: Element,
}

impl LocalSymbol {
    /// `⟨inertia, frobenius⟩`.
    pub fn decomposition(&self) -> Subgroup {
        self.inertia.join_element(&self.frobenius)
    }
}

impl GExtension {
    pub fn from_pieces(target: Arc<FinAbGroup>, pieces: Vec<LocalPiece>) -> GExtension {
        let modulus = pieces.iter().map(|pc| pc.component.pk).product();
        GExtension {
            target,
            modulus,
            pieces,
        }
    }

    /// The hom sending the `i`-th canonical generator of `(Z/mZ)*` to `images[i]`.
    pub fn from_images(target: Arc<FinAbGroup>, m: u64, images: &[Element]) -> Result<GExtension> {
        let ug = unit_group(m);
        if images.len() != ug.orders.len() {
            return Err(Error::Argument(format!(
                "modulus {m} has {} generators, got {} images",
                ug.orders.len(),
                images.len()
            )));
        }
        for (x, &o) in images.iter().zip(&ug.orders) {
            if x.exps().len() != target.rank() {
                return Err(Error::Argument("image has the wrong rank".into()));
            }
            if o % target.element_order(x) != 0 {
                return Err(Error::Argument(format!(
                    "image order {} does not divide generator order {o}",
                    target.element_order(x)
                )));
            }
        }
        let mut pieces = Vec::new();
        let mut offset = 0;
        for c in ug.components {
            let n = c.gens.len();
            let imgs = images[offset..offset + n].to_vec();
            offset += n;
            pieces.push(LocalPiece::new(&target, c, imgs));
        }
        Ok(GExtension {
            target,
            modulus: m,
            pieces,
        })
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn images(&self) -> Vec<Element> {
        self.pieces.iter().flat_map(|pc| pc.images.iter().cloned()).collect()
    }

    pub fn generator_orders(&self) -> Vec<u64> {
        self.pieces
            .iter()
            .flat_map(|pc| pc.component.orders.iter().copied())
            .collect()
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::generated(&self.target, &self.images())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_whole()
    }

    pub fn conductor(&self) -> u64 {
        self.pieces
            .iter()
            .map(|pc| pc.p().pow(pc.conductor_exponent()))
            .product()
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// Primes dividing the conductor.
    pub fn ramified_primes(&self) -> Vec<u64> {
        self.pieces
            .iter()
            .filter(|pc| pc.conductor_exponent() > 0)
            .map(|pc| pc.p())
            .collect()
    }

    /// `∏_{ψ ∈ Ȟ} cond(ψ∘φ)` for a group `H` of order `w` containing the image.
    pub fn weighted_conductor_product(&self, w: u64) -> u128 {
        self.pieces.iter().fold(1u128, |acc, pc| {
            acc.saturating_mul(sat_pow(pc.p(), pc.weighted_exponent(w)))
        })
    }

    /// Absolute discriminant `∏_{ψ ∈ (im φ)ˇ} cond(ψ∘φ)`.
    pub fn discriminant(&self) -> u128 {
        self.weighted_conductor_product(self.image().order())
    }

    /// `Φ_H(φ)` for `H ≤ G` containing the image.
    pub fn phi_h(&self, h: &Subgroup) -> Result<u128> {
        if !self.image().is_subgroup_of(h) {
            return Err(Error::NotContained(format!("image of the hom is not inside {h}")));
        }
        Ok(self.weighted_conductor_product(h.order()))
    }

    /// `φ(u)` for `u` coprime to the modulus.
    pub fn eval(&self, u: u64) -> Element {
        self.eval_except(u, None)
    }

    fn eval_except(&self, u: u64, skip: Option<u64>) -> Element {
        let g = &*self.target;
        let mut acc = g.identity();
        for pc in &self.pieces {
            if Some(pc.p()) == skip || pc.is_trivial(g) {
                continue;
            }
            acc = g.add(&acc, &pc.eval(g, u % pc.component.pk));
        }
        acc
    }

    /// Image of `-1`, the complex conjugation.
    pub fn conjugation(&self) -> Element {
        self.eval(self.modulus.max(2) - 1)
    }

    /// Inertia image and a Frobenius representative at `p`.
    pub fn local_symbol(&self, p: u64) -> LocalSymbol {
        let g = &*self.target;
        match self.pieces.iter().find(|pc| pc.p() == p) {
            Some(pc) => LocalSymbol {
                place: Place::Finite(p),
                inertia: pc.inertia(g),
                frobenius: self.eval_except(p, Some(p)),
            },
            None => LocalSymbol {
                place: Place::Finite(p),
                inertia: Subgroup::trivial(g),
                frobenius: self.eval(p),
            },
        }
    }

    pub fn real_symbol(&self) -> LocalSymbol {
        LocalSymbol {
            place: Place::Real,
            inertia: Subgroup::trivial(&self.target),
            frobenius: self.conjugation(),
        }
    }

    /// Local symbols at every ramified prime.
    pub fn ramified_symbols(&self) -> Vec<LocalSymbol> {
        self.ramified_primes()
            .into_iter()
            .map(|p| self.local_symbol(p))
            .collect()
    }

    /// Deterministic ordering key `(Δ, m, image encoding)`.
    pub fn sort_key(&self) -> (u128, u64, Vec<u64>) {
        let g = &*self.target;
        (
            self.discriminant(),
            self.modulus,
            self.images().iter().map(|x| g.encode(x)).collect(),
        )
    }

    /// Pointwise product with another hom into the same group.
    pub fn product(&self, other: &GExtension) -> GExtension {
        assert_eq!(self.target, other.target);
        let g = &*self.target;
        let mut primes: Vec<u64> = self.pieces.iter().chain(&other.pieces).map(|pc| pc.p()).collect();
        primes.sort_unstable();
        primes.dedup();
        let mut pieces = Vec::new();
        for p in primes {
            let a = self.pieces.iter().find(|pc| pc.p() == p);
            let b = other.pieces.iter().find(|pc| pc.p() == p);
            let k = a.map_or(0, |pc| pc.component.k).max(b.map_or(0, |pc| pc.component.k));
            let comp = UnitComponent::new(p, k);
            let lift = |pc: Option<&LocalPiece>| -> Vec<Element> {
                let mut out = vec![g.identity(); comp.gens.len()];
                if let Some(pc) = pc {
                    // generators are compatible across levels; (Z/4)* lifts onto the -1 slot
                    for (slot, x) in out.iter_mut().zip(&pc.images) {
                        *slot = x.clone();
                    }
                }
                out
            };
            let (ia, ib) = (lift(a), lift(b));
            let images = ia.iter().zip(&ib).map(|(x, y)| g.add(x, y)).collect();
            pieces.push(LocalPiece::new(g, comp, images));
        }
        GExtension::from_pieces(self.target.clone(), pieces).primitive_reduction()
    }

    /// The primitive hom inducing this one (drops the non-conductor levels).
    pub fn primitive_reduction(&self) -> GExtension {
        let g = &*self.target;
        let mut pieces = Vec::new();
        for pc in &self.pieces {
            let c = pc.conductor_exponent();
            if c == 0 {
                continue;
            }
            if c == pc.component.k {
                pieces.push(pc.clone());
                continue;
            }
            let comp = UnitComponent::new(pc.p(), c);
            let images = pc.images[..comp.gens.len()].to_vec();
            pieces.push(LocalPiece::new(g, comp, images));
        }
        GExtension::from_pieces(self.target.clone(), pieces)
    }
}

/// All homs `(Z/mZ)* -> G`, optionally only surjective and/or primitive ones,
/// in lexicographic order of the encoded generator images.
pub fn homs(m: u64, group: &FinAbGroup, only_surjective: bool, only_primitive: bool) -> Vec<GExtension> {
    let target = Arc::new(group.clone());
    let ug = unit_group(m);
    let choices: Vec<Vec<Element>> = ug
        .orders
        .iter()
        .map(|&o| {
            group
                .elements()
                .into_iter()
                .filter(|x| o % group.element_order(x) == 0)
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let images: Vec<Element> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        let ext = GExtension::from_images(target.clone(), m, &images).expect("orders checked");
        if (!only_surjective || ext.is_surjective()) && (!only_primitive || ext.is_primitive()) {
            out.push(ext);
        }
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Checks the implication
/// `e_i^{Q^{a_i-1}} ∈ φ(I_p) ⟹ φ(Frob_p I_p) ⊆ ⟨M, e_1, ..., e_j^Q, ..., e_t⟩`.
pub fn lambda_v_test(ext: &GExtension, p: u64, i: usize, j: usize, s: &[u64]) -> Result<bool> {
    if s.contains(&p) {
        return Err(Error::Argument(format!("place {p} lies in S")));
    }
    let g = ext.group();
    let q = g.q_small().ok_or_else(|| Error::Argument("trivial group".into()))?;
    if i == j || i == 0 || j == 0 || i > g.t() || j > g.t() {
        return Err(Error::Argument(format!(
            "need distinct indices in 1..={}, got ({i}, {j})",
            g.t()
        )));
    }
    let a_i = g.q_exponents()[i - 1];
    let marker = g.scale(&g.e(i), q.pow(a_i - 1));
    let sym = ext.local_symbol(p);
    if !sym.inertia.contains(&marker) {
        return Ok(true);
    }
    let target = relaxed_subgroup_canonical(g, j)?;
    Ok(target.contains(&sym.frobenius) && sym.inertia.is_subgroup_of(&target))
}
