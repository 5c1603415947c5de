//! Global elements of `O_S* ⊗ J̌` over the rationals, their Kummer fields and
//! the splitting conditions they impose at primes outside `S`.

use std::sync::Arc;

use super::{membership, CharacterGroup, DualLocalElement, LocalPlace, Rational, UnitFlavor};
use crate::abelian_group::{Element, Subgroup};
use crate::arith::{gcd, inv_mod};
use crate::dirichlet_cft::GExtension;
use crate::error::{Error, Result};

/// `x = Σ_u Σ_i E[u][i] (u ⊗ ě_i)` over the `S`-unit basis `u ∈ {-1} ∪ S`.
#[derive(Clone, Debug)]
pub struct GlobalDualElement {
    chars: Arc<CharacterGroup>,
    s_primes: Vec<u64>,
    matrix: Vec<Vec<u64>>,
}

/// Degrees over `Q` of `k_0 = Q(μ_Q)`, `k_x` and `k_{x,1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KummerDegrees {
    pub k0: u64,
    pub kx: u64,
    pub kx1: u64,
}

fn unit_modulus(row: usize, n: u64) -> u64 {
    if row == 0 {
        gcd(2, n)
    } else {
        n
    }
}

impl GlobalDualElement {
    pub fn new(chars: Arc<CharacterGroup>, s_primes: &[u64], matrix: Vec<Vec<u64>>) -> Result<GlobalDualElement> {
        let r = chars.orders().len();
        if matrix.len() != s_primes.len() + 1 || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Argument(format!(
                "exponent matrix must be {} x {r}",
                s_primes.len() + 1
            )));
        }
        let matrix = matrix
            .into_iter()
            .enumerate()
            .map(|(u, row)| {
                row.into_iter()
                    .zip(chars.orders())
                    .map(|(e, &n)| e % unit_modulus(u, n))
                    .collect()
            })
            .collect();
        Ok(GlobalDualElement {
            chars,
            s_primes: s_primes.to_vec(),
            matrix,
        })
    }

    pub fn zero(chars: Arc<CharacterGroup>, s_primes: &[u64]) -> GlobalDualElement {
        let r = chars.orders().len();
        GlobalDualElement {
            chars,
            s_primes: s_primes.to_vec(),
            matrix: vec![vec![0; r]; s_primes.len() + 1],
        }
    }

    /// Every element of `O_S* ⊗ J̌`.
    pub fn all(chars: &Arc<CharacterGroup>, s_primes: &[u64]) -> Vec<GlobalDualElement> {
        let r = chars.orders().len();
        let mut radices = Vec::new();
        for u in 0..=s_primes.len() {
            radices.extend(chars.orders().iter().map(|&n| unit_modulus(u, n)));
        }
        super::mixed_radix(&radices)
            .into_iter()
            .map(|flat| GlobalDualElement {
                chars: chars.clone(),
                s_primes: s_primes.to_vec(),
                matrix: (0..=s_primes.len())
                    .map(|u| flat[u * r..(u + 1) * r].to_vec())
                    .collect(),
            })
            .collect()
    }

    /// Size of the image of `{±1} ⊗ J̌`.
    pub fn torsion_part_size(chars: &CharacterGroup) -> u64 {
        chars.orders().iter().map(|&n| gcd(2, n)).product()
    }

    pub fn chars(&self) -> &Arc<CharacterGroup> {
        &self.chars
    }

    pub fn s_primes(&self) -> &[u64] {
        &self.s_primes
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn units(&self) -> Vec<i64> {
        std::iter::once(-1)
            .chain(self.s_primes.iter().map(|&p| p as i64))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(|&e| e == 0)
    }

    /// Image in `Q_q* ⊗ J̌` at a tame prime `q`; when `q ∈ S` the row of `q`
    /// becomes the valuation part.
    pub fn localize(&self, place: &LocalPlace) -> Result<DualLocalElement> {
        let orders = self.chars.orders();
        if orders.iter().any(|&n| n % place.q == 0) {
            return Err(Error::Argument(format!("{} divides the exponent of J", place.q)));
        }
        let mut unit = vec![0u64; orders.len()];
        let mut valuation = vec![0u64; orders.len()];
        for (u, row) in self.units().into_iter().zip(&self.matrix) {
            for (i, &e) in row.iter().enumerate() {
                if u == place.q as i64 {
                    valuation[i] = e % orders[i];
                    continue;
                }
                let m = gcd(orders[i], place.q - 1);
                unit[i] = (unit[i] + place.dlog(u, orders[i]) * (e % m)) % m;
            }
        }
        Ok(DualLocalElement { unit, valuation })
    }

    /// `k` with `<χ_v, x> = ζ_{exp J}^k`, given `values[u] = χ_v(u)` for the
    /// units in [`GlobalDualElement::units`] order.
    pub fn pair_values(&self, values: &[Element]) -> u64 {
        let n = self.chars.exponent();
        self.matrix
            .iter()
            .zip(values)
            .map(|(row, val)| self.chars.pair_exponent(val, row))
            .fold(0, |a, b| (a + b) % n)
    }

    fn q(&self) -> u64 {
        self.chars.ambient().q_small().expect("nontrivial group")
    }

    /// `F_Q`-rank of the `Q`-primary coordinates modulo `Q`: `[k_x : k_0] = Q^rank`.
    pub fn kummer_rank(&self) -> usize {
        let q = self.q();
        let cols: Vec<usize> = (0..self.chars.orders().len())
            .filter(|&i| self.chars.orders()[i] % q == 0)
            .collect();
        let mut rows: Vec<Vec<u64>> = cols
            .iter()
            .map(|&i| self.matrix.iter().map(|row| row[i] % q).collect())
            .collect();
        rank_mod_prime(&mut rows, q)
    }

    /// Exponents modulo `Q` of `Ψ(x) ∈ Q*/Q*^Q` on the units, for `Ψ` induced
    /// by `μ_Q -> V = <v>`.
    pub fn psi(&self, v: &Element) -> Vec<u64> {
        let q = self.q();
        let c = self.chars.coords(v).expect("V lies in J");
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(c)
                    .zip(self.chars.orders())
                    .map(|((&e, &ci), &n)| (q * ci / n) % q * (e % q) % q)
                    .sum::<u64>()
                    % q
            })
            .collect()
    }

    pub fn degrees(&self, v: &Element) -> KummerDegrees {
        let q = self.q();
        let k0 = q - 1;
        let kx = k0 * q.pow(self.kummer_rank() as u32);
        let kx1 = if self.psi(v).iter().any(|&e| e != 0) {
            k0 * q
        } else {
            k0
        };
        KummerDegrees { k0, kx, kx1 }
    }

    /// Squarefree integer `d` with `k_{x,1} = Q(√d)` for `Q = 2` (1 if trivial).
    pub fn psi_kernel(&self, v: &Element) -> i64 {
        self.units()
            .into_iter()
            .zip(self.psi(v))
            .filter(|&(_, e)| e % 2 == 1)
            .map(|(u, _)| u)
            .product()
    }
}

fn rank_mod_prime(rows: &mut [Vec<u64>], p: u64) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] % p != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][col], p).expect("prime modulus");
        for c in 0..width {
            rows[rank][c] = rows[rank][c] * inv % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..width {
                    rows[r][c] = (rows[r][c] + p * p - f * rows[rank][c] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn image_within(eta: &GExtension, j: &Subgroup) -> bool {
    eta.images().iter().all(|x| j.contains(x))
}

/// For `η` into `H ⊇ J` with `[H : J] = 2`, the squarefree `d` with
/// `k_η = Q(√d)`, or `None` when `im η ⊆ J`.
pub fn quadratic_kernel(eta: &GExtension, j: &Subgroup) -> Result<Option<i64>> {
    let g = eta.group();
    if g != j.ambient() {
        return Err(Error::Argument("η and J live in different groups".into()));
    }
    if eta.images().iter().any(|x| !j.contains(&g.scale(x, 2))) {
        return Err(Error::Argument("η does not have order 2 modulo J".into()));
    }
    if image_within(eta, j) {
        return Ok(None);
    }
    let mut d: i64 = 1;
    for piece in &eta.pieces {
        let outside: Vec<bool> = piece.images.iter().map(|x| !j.contains(x)).collect();
        if piece.p() == 2 {
            if outside.len() == 2 && outside[1] {
                d *= 2;
            }
        } else if outside.iter().any(|&b| b) {
            d *= piece.p() as i64;
        }
    }
    if !j.contains(&eta.conjugation()) {
        d = -d;
    }
    Ok(Some(d))
}

/// Fields whose complete splitting at `p` is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitField {
    K0,
    Kx1,
    Kx,
    Eta,
    EtaK0,
    EtaKx1,
}

/// Whether `p ∉ S` splits completely in the given field, from the local
/// arithmetic conditions: `p = 1 mod Q` for `k_0`, additionally
/// `x_p ∈ O*^Q ⊗ V̌` for `k_{x,1}` and `x_p ∈ O*^Q ⊗ J̌` for `k_x`, and
/// `η_p(Q_p*) ⊆ J` for `k_η`.
pub fn splitting_indicator(
    x: &GlobalDualElement,
    v: &Element,
    p: u64,
    field: SplitField,
    eta: Option<&GExtension>,
) -> Result<bool> {
    if x.s_primes().contains(&p) {
        return Err(Error::Argument(format!("{p} lies in S")));
    }
    let place = LocalPlace::new(p)?;
    let xl = x.localize(&place)?;
    let chars = x.chars();
    let g = chars.ambient();
    let q = x.q();
    let k0 = (p - 1) % q == 0;
    let kx1 = || {
        let vs = Subgroup::generated(g, std::slice::from_ref(v));
        k0 && membership(&place, chars, &xl, UnitFlavor::QthPowers, &vs, q)
    };
    let eta_split = || -> Result<bool> {
        let e = eta.ok_or_else(|| Error::Argument("field needs η".into()))?;
        if e.group() != g {
            return Err(Error::Argument("η and J live in different groups".into()));
        }
        Ok(e.local_symbol(p).decomposition().is_subgroup_of(chars.subgroup()))
    };
    Ok(match field {
        SplitField::K0 => k0,
        SplitField::Kx1 => kx1(),
        SplitField::Kx => k0 && membership(&place, chars, &xl, UnitFlavor::QthPowers, chars.subgroup(), q),
        SplitField::Eta => eta_split()?,
        SplitField::EtaK0 => k0 && eta_split()?,
        SplitField::EtaKx1 => kx1() && eta_split()?,
    })
}

/// `ν(η, x) = (Q^β/[k_x:k_{x,1}] - Q)/[k_{x,1}:k] + (Q/[k_η k_{x,1}:k_η k_0] - 1)/[k_η k_0:k]`
/// with `β` the `F_Q`-rank of `H`. A nontrivial `η` modulo `J` is only
/// supported for `Q = 2`.
pub fn nu_eta_x(x: &GlobalDualElement, h: &Subgroup, v: &Element, eta: Option<&GExtension>) -> Result<Rational> {
    let q = x.q();
    let beta = h.q_rank(q) as u32;
    let deg = x.degrees(v);
    let qi = q as i64;
    let first = (Rational::from_integer(qi.pow(beta)) / Rational::from_integer((deg.kx / deg.kx1) as i64)
        - Rational::from_integer(qi))
        / Rational::from_integer(deg.kx1 as i64);
    let eta_kernel = match eta {
        None => None,
        Some(e) if q == 2 => quadratic_kernel(e, x.chars().subgroup())?,
        Some(e) => {
            if !image_within(e, x.chars().subgroup()) {
                return Err(Error::Unsupported(format!(
                    "ν(η, x) for η outside J needs arithmetic in Q(μ_{q})"
                )));
            }
            None
        }
    };
    let (eta_k0, rel) = match eta_kernel {
        None => (deg.k0, deg.kx1 / deg.k0),
        Some(d) => {
            let kd = x.psi_kernel(v);
            (2, if kd == 1 || kd == d { 1 } else { 2 })
        }
    };
    let second = (Rational::from_integer(qi) / Rational::from_integer(rel as i64) - Rational::from_integer(1))
        / Rational::from_integer(eta_k0 as i64);
    Ok(first + second)
}
