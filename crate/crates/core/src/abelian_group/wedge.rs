use super::{Element, FinAbGroup, Subgroup};
use crate::arith::gcd;

/// `∧²G = ⊕_{i<j} Z/gcd(n_i, n_j)` over the canonical factors of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeSquare {
    pub source: FinAbGroup,
    pub group: FinAbGroup,
    /// `pair_labels[k] = (i, j)`: factor `k` of `group` is generated by `x_i ∧ x_j`.
    pub pair_labels: Vec<(usize, usize)>,
}

pub fn exterior_square(group: &FinAbGroup) -> WedgeSquare {
    let n = group.orders();
    let mut pairs = Vec::new();
    let mut powers = Vec::new();
    for i in 0..n.len() {
        for j in i + 1..n.len() {
            let d = gcd(n[i], n[j]);
            if d > 1 {
                pairs.push((i, j));
                powers.push(d);
            }
        }
    }
    let (wedge, perm) = FinAbGroup::from_prime_powers(&powers);
    WedgeSquare {
        source: group.clone(),
        group: wedge,
        pair_labels: perm.into_iter().map(|k| pairs[k]).collect(),
    }
}

impl WedgeSquare {
    /// `x ∧ y`, expanded bilinearly over the pair basis.
    pub fn wedge(&self, x: &Element, y: &Element) -> Element {
        let (a, b) = (x.exps(), y.exps());
        let exps = self
            .pair_labels
            .iter()
            .zip(self.group.orders())
            .map(|(&(i, j), &d)| {
                let d = d as i128;
                let v = a[i] as i128 * b[j] as i128 - a[j] as i128 * b[i] as i128;
                v.rem_euclid(d) as u64
            })
            .collect();
        Element::new(exps)
    }

    /// Generator `x_i ∧ x_j` as an element, `i < j` factor indices of the source.
    pub fn pair_generator(&self, i: usize, j: usize) -> Element {
        let x = self.source.basis_element(i);
        let y = self.source.basis_element(j);
        self.wedge(&x, &y)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::trivial(&self.group)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::whole(&self.group)
    }
}

/// Image of `∧²H → ∧²G` for `H ≤ G`.
pub fn induced_wedge_image(wedge: &WedgeSquare, h: &Subgroup) -> Subgroup {
    assert_eq!(h.ambient(), &wedge.source, "subgroup of a different group");
    let gens = h.generators();
    let mut images = Vec::new();
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            images.push(wedge.wedge(&gens[a], &gens[b]));
        }
    }
    Subgroup::generated(&wedge.group, &images)
}
