//! Hasse norm principle and weak approximation for abelian extensions via
//! the image of the decomposition groups in `∧²G`.

use num_rational::Ratio;
use serde::Serialize;

use crate::abelian_group::{exterior_square, induced_wedge_image, FinAbGroup, Subgroup, WedgeSquare};
use crate::arith::primes_up_to;
use crate::dirichlet_cft::{lambda_v_test, GExtension, HomEnumerator};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct KnotImageReport {
    pub wedge: WedgeSquare,
    /// Subgroup of `∧²G` generated by the images of `∧²D_p`.
    pub image: Subgroup,
    /// Ramified primes whose decomposition group has a nontrivial wedge image.
    pub contributing_places: Vec<u64>,
}

impl KnotImageReport {
    pub fn is_full(&self) -> bool {
        self.image.is_whole()
    }

    pub fn is_trivial(&self) -> bool {
        self.image.is_trivial()
    }
}

/// Knot image from the ramified primes.
pub fn knot_image(ext: &GExtension) -> KnotImageReport {
    knot_image_with(ext, &exterior_square(ext.group()))
}

/// As [`knot_image`] with a precomputed exterior square.
pub fn knot_image_with(ext: &GExtension, wedge: &WedgeSquare) -> KnotImageReport {
    let mut image = wedge.trivial_subgroup();
    let mut contributing = Vec::new();
    if !wedge.group.is_trivial() {
        for p in ext.ramified_primes() {
            let d = ext.local_symbol(p).decomposition();
            let w = induced_wedge_image(wedge, &d);
            if !w.is_trivial() {
                contributing.push(p);
                image = image.join(&w);
            }
        }
    }
    KnotImageReport {
        wedge: wedge.clone(),
        image,
        contributing_places: contributing,
    }
}

/// Knot image that also folds in the real place and every unramified prime up
/// to `floor`, failing if any of those decomposition groups has a nontrivial
/// wedge image.
pub fn knot_image_audit(ext: &GExtension, floor: u64) -> Result<KnotImageReport> {
    let report = knot_image(ext);
    let ramified = ext.ramified_primes();
    let real = ext.real_symbol().decomposition();
    if !induced_wedge_image(&report.wedge, &real).is_trivial() {
        return Err(Error::Domain(
            "real decomposition group has nontrivial wedge image".into(),
        ));
    }
    for p in primes_up_to(floor) {
        if ramified.contains(&p) {
            continue;
        }
        let d = ext.local_symbol(p).decomposition();
        if !induced_wedge_image(&report.wedge, &d).is_trivial() {
            return Err(Error::Domain(format!(
                "unramified decomposition group at {p} is not cyclic"
            )));
        }
    }
    Ok(report)
}

/// Full knot image: the norm principle holds.
pub fn hnp_holds(ext: &GExtension) -> bool {
    knot_image(ext).is_full()
}

/// Trivial knot image: the norm-one torus satisfies weak approximation.
pub fn wa_holds(ext: &GExtension) -> bool {
    knot_image(ext).is_trivial()
}

/// Whether every ramified prime outside `s` passes the local `Λ` test.
pub fn lambda_holds(ext: &GExtension, i: usize, j: usize, s: &[u64]) -> Result<bool> {
    for p in ext.ramified_primes() {
        if s.contains(&p) {
            continue;
        }
        if !lambda_v_test(ext, p, i, j, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Default finite part of `S`: the primes dividing `|G|`.
pub fn default_s(group: &FinAbGroup) -> Vec<u64> {
    crate::arith::factorize(group.order())
        .into_iter()
        .map(|(p, _)| p)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityRow {
    pub bound: u128,
    pub total: u64,
    pub hnp_fail: u64,
    pub wa_hold: u64,
    pub lambda_hold: u64,
}

impl DensityRow {
    fn ratio(&self, n: u64) -> Ratio<u64> {
        if self.total == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(n, self.total)
        }
    }

    pub fn hnp_fail_ratio(&self) -> Ratio<u64> {
        self.ratio(self.hnp_fail)
    }

    pub fn wa_hold_ratio(&self) -> Ratio<u64> {
        self.ratio(self.wa_hold)
    }

    pub fn lambda_ratio(&self) -> Ratio<u64> {
        self.ratio(self.lambda_hold)
    }
}

pub fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Per-extension flags gathered by a density scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtensionFlags {
    pub discriminant: u128,
    pub hnp: bool,
    pub wa: bool,
    pub lambda: bool,
}

pub fn extension_flags(ext: &GExtension, wedge: &WedgeSquare, i: usize, j: usize, s: &[u64]) -> Result<ExtensionFlags> {
    let k = knot_image_with(ext, wedge);
    Ok(ExtensionFlags {
        discriminant: ext.discriminant(),
        hnp: k.is_full(),
        wa: k.is_trivial(),
        lambda: lambda_holds(ext, i, j, s)?,
    })
}

/// Flags of every `G`-extension with `Δ <= bound`, sorted by discriminant.
pub fn scan_flags(
    group: &FinAbGroup,
    bound: u128,
    i: usize,
    j: usize,
    s: &[u64],
    budget: Option<u64>,
) -> Result<Vec<ExtensionFlags>> {
    group.require_noncyclic_sylow()?;
    let wedge = exterior_square(group);
    let en = HomEnumerator::new(&Subgroup::whole(group), bound)?
        .surjective_only(true)
        .budget(budget);
    let mut flags = en.fold(
        || Ok(Vec::new()),
        |acc: &mut Result<Vec<ExtensionFlags>>, e, _| {
            if let Ok(v) = acc {
                match extension_flags(e, &wedge, i, j, s) {
                    Ok(f) => v.push(f),
                    Err(err) => *acc = Err(err),
                }
            }
        },
        |a, b| match (a, b) {
            (Ok(mut x), Ok(y)) => {
                x.extend(y);
                Ok(x)
            }
            (Err(e), _) | (_, Err(e)) => Err(e),
        },
    )??;
    flags.sort_by_key(|f| (f.discriminant, f.hnp, f.wa, f.lambda));
    Ok(flags)
}

/// One row per bound, all from a single enumeration at the largest bound.
pub fn density_scan(
    group: &FinAbGroup,
    bounds: &[u128],
    i: usize,
    j: usize,
    s: &[u64],
    budget: Option<u64>,
) -> Result<Vec<DensityRow>> {
    let top = bounds
        .iter()
        .copied()
        .max()
        .ok_or_else(|| Error::Argument("no bounds".into()))?;
    let flags = scan_flags(group, top, i, j, s, budget)?;
    Ok(rows_from_flags(&flags, bounds))
}

pub fn rows_from_flags(flags: &[ExtensionFlags], bounds: &[u128]) -> Vec<DensityRow> {
    bounds
        .iter()
        .map(|&b| {
            let mut row = DensityRow {
                bound: b,
                total: 0,
                hnp_fail: 0,
                wa_hold: 0,
                lambda_hold: 0,
            };
            for f in flags.iter().take_while(|f| f.discriminant <= b) {
                row.total += 1;
                row.hnp_fail += u64::from(!f.hnp);
                row.wa_hold += u64::from(f.wa);
                row.lambda_hold += u64::from(f.lambda);
            }
            row
        })
        .collect()
}

/// Non-increasing up to at most one step that rises by no more than
/// `tolerance` relative to the preceding value.
pub fn non_increasing_with_tolerance(values: &[f64], tolerance: f64) -> bool {
    let mut inversions = 0;
    for w in values.windows(2) {
        if w[1] > w[0] {
            inversions += 1;
            let rel = if w[0] == 0.0 {
                f64::INFINITY
            } else {
                (w[1] - w[0]) / w[0].abs()
            };
            if inversions > 1 || rel > tolerance {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet_cft::homs;
    use std::sync::Arc;

    #[test]
    fn classical_biquadratics() {
        let v4 = FinAbGroup::parse("C2xC2").unwrap();
        for e in homs(221, &v4, true, true) {
            assert!(!hnp_holds(&e));
            assert!(wa_holds(&e));
        }
        for e in homs(8, &v4, true, true) {
            assert!(hnp_holds(&e));
            assert!(!wa_holds(&e));
            assert_eq!(knot_image(&e).contributing_places, vec![2]);
        }
    }

    #[test]
    fn cyclic_groups_trivially_pass() {
        let z4 = Arc::new(FinAbGroup::parse("C4").unwrap());
        for e in homs(5, &z4, true, true) {
            assert!(hnp_holds(&e) && wa_holds(&e));
        }
    }

    #[test]
    fn tolerance_rule() {
        assert!(non_increasing_with_tolerance(&[0.5, 0.4, 0.3], 0.1));
        assert!(non_increasing_with_tolerance(&[0.5, 0.52, 0.3], 0.1));
        assert!(!non_increasing_with_tolerance(&[0.5, 0.6, 0.3], 0.1));
        assert!(!non_increasing_with_tolerance(&[0.5, 0.52, 0.53], 0.1));
    }
}
