use std::sync::Arc;

use hasse_core::abelian_group::{
    exterior_square, moebius, standard_l, subgroups, w_partition, Element, FinAbGroup, Subgroup,
};
use hasse_core::counting::{alpha, hom_counts, moebius_inversion_check, nu, poisson_check, tauber_fit, PoissonReport};
use hasse_core::dirichlet_cft::{find_by_discriminant, load_or_enumerate, ExtensionRecord, GExtension, HomEnumerator};
use hasse_core::local_fourier::local_ft_check;
use hasse_core::norm_principle::{default_s, density_scan, hnp_holds, ratio_f64, wa_holds};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{emit, f17, render_csv, render_jsonl, Format, Table};
use crate::{CliError, Command, Global};

pub fn dispatch(global: &Global, command: Command) -> Result<(), CliError> {
    match command {
        Command::Enumerate { g, bound } => enumerate(global, &g.group, bound),
        Command::Density {
            g,
            bounds,
            i,
            j,
            s_primes,
        } => density(global, &g.group, &bounds, i, j, s_primes.map(|p| p.0)),
        Command::Find { g, disc, ramified } => find(global, &g.group, disc, &ramified.0),
        Command::LocalFtCheck {
            g,
            primes,
            s_values,
            tol,
            sample,
        } => local_check(global, &g.group, primes.0, &s_values, tol, sample),
        Command::Poisson {
            g,
            l,
            h,
            eta,
            s,
            x,
            p,
            rel_tol,
        } => poisson(
            global,
            &g.group,
            l.as_deref(),
            h.as_deref(),
            eta.as_deref(),
            s,
            x,
            p,
            rel_tol,
        ),
        Command::Tauber {
            g,
            bounds,
            a,
            omega,
            max_stability,
        } => tauber(global, &g.group, &bounds, a, omega, max_stability),
        Command::MoebiusCheck { g, l, bound } => moebius_check(global, &g.group, l.as_deref(), bound),
        Command::GroupInfo { g, l } => group_info(global, &g.group, l.as_deref()),
    }
}

fn parse_group(spec: &str) -> Result<FinAbGroup, CliError> {
    Ok(FinAbGroup::parse(spec)?)
}

fn parse_l(group: &FinAbGroup, spec: Option<&str>) -> Result<Subgroup, CliError> {
    Ok(match spec {
        Some(s) => Subgroup::parse(group, s)?,
        None => standard_l(group)?,
    })
}

/// `e1*e2^3`, or `1` for the identity.
fn parse_element(group: &FinAbGroup, spec: &str) -> Result<Element, CliError> {
    let spec = spec.trim();
    let mut x = group.identity();
    if spec == "1" || spec == "0" {
        return Ok(x);
    }
    for factor in spec.split('*').map(str::trim) {
        let (base, k) = match factor.split_once('^') {
            Some((b, k)) => (
                b.trim(),
                k.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Config(format!("bad power in {factor:?}")))?,
            ),
            None => (factor, 1),
        };
        let i = base
            .strip_prefix('e')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i >= 1 && i <= group.t())
            .ok_or_else(|| CliError::Config(format!("{factor:?} is not e<i> with 1 <= i <= {}", group.t())))?;
        x = group.add(&x, &group.scale(&group.e(i), k));
    }
    Ok(x)
}

/// `modulus:image;image;...`, one image per generator of `(Z/m)*`.
fn parse_eta(group: &FinAbGroup, spec: &str) -> Result<GExtension, CliError> {
    let (m, images) = spec
        .split_once(':')
        .ok_or_else(|| CliError::Config(format!("twist {spec:?} must look like <modulus>:<images>")))?;
    let m: u64 = m
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("bad twist modulus {m:?}")))?;
    let images = images
        .split(';')
        .map(|t| parse_element(group, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GExtension::from_images(Arc::new(group.clone()), m, &images)?)
}

fn write<T: Serialize>(
    global: &Global,
    default: Format,
    table: impl FnOnce() -> Table,
    values: &[T],
) -> Result<(), CliError> {
    let bytes = match global.format.unwrap_or(default) {
        Format::Csv => render_csv(&table())?,
        Format::Jsonl => render_jsonl(values)?,
    };
    emit(global.out.as_deref(), &bytes)
}

fn json_cell<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

fn enumerate(global: &Global, spec: &str, bound: u128) -> Result<(), CliError> {
    let group = parse_group(spec)?;
    let exts = match &global.cache_dir {
        Some(dir) => {
            let (exts, hit) = load_or_enumerate(&group, bound, dir)?;
            eprintln!("hnp: {} cache {}", if hit { "using" } else { "wrote" }, dir.display());
            exts
        }
        None => HomEnumerator::new(&Subgroup::whole(&group), bound)?
            .surjective_only(true)
            .budget(global.budget)
            .collect()?,
    };
    let records: Vec<ExtensionRecord> = exts.iter().map(ExtensionRecord::from_extension).collect();
    let table = || {
        let mut t = Table::new(&[
            "discriminant",
            "modulus",
            "conductor",
            "generator_orders",
            "images",
            "conjugation",
        ]);
        for r in &records {
            t.push(vec![
                r.discriminant.clone(),
                r.modulus.to_string(),
                r.conductor.to_string(),
                json_cell(&r.generator_orders),
                json_cell(&r.images),
                json_cell(&r.conjugation),
            ]);
        }
        t
    };
    write(global, Format::Jsonl, table, &records)
}

#[derive(Serialize)]
struct DensityOut {
    bound: String,
    total: u64,
    hnp_fail: u64,
    wa_hold: u64,
    lambda_hold: u64,
    hnp_fail_ratio: f64,
    wa_hold_ratio: f64,
    lambda_ratio: f64,
}

fn density(
    global: &Global,
    spec: &str,
    bounds: &[u128],
    i: usize,
    j: usize,
    s: Option<Vec<u64>>,
) -> Result<(), CliError> {
    let group = parse_group(spec)?;
    if i == j {
        return Err(CliError::Config("--i and --j must differ".into()));
    }
    let s = s.unwrap_or_else(|| default_s(&group));
    let rows: Vec<DensityOut> = density_scan(&group, bounds, i, j, &s, global.budget)?
        .into_iter()
        .map(|r| DensityOut {
            bound: r.bound.to_string(),
            total: r.total,
            hnp_fail: r.hnp_fail,
            wa_hold: r.wa_hold,
            lambda_hold: r.lambda_hold,
            hnp_fail_ratio: ratio_f64(r.hnp_fail_ratio()),
            wa_hold_ratio: ratio_f64(r.wa_hold_ratio()),
            lambda_ratio: ratio_f64(r.lambda_ratio()),
        })
        .collect();
    let table = || {
        let mut t = Table::new(&[
            "B",
            "total",
            "hnp_fail",
            "wa_hold",
            "lambda_hold",
            "hnp_fail_ratio",
            "wa_hold_ratio",
            "lambda_ratio",
        ]);
        for r in &rows {
            t.push(vec![
                r.bound.clone(),
                r.total.to_string(),
                r.hnp_fail.to_string(),
                r.wa_hold.to_string(),
                r.lambda_hold.to_string(),
                f17(r.hnp_fail_ratio),
                f17(r.wa_hold_ratio),
                f17(r.lambda_ratio),
            ]);
        }
        t
    };
    write(global, Format::Csv, table, &rows)
}

#[derive(Serialize)]
struct FindHit {
    #[serde(flatten)]
    record: ExtensionRecord,
    hnp: bool,
    wa: bool,
    noncyclic_places: Vec<u64>,
}

fn find(global: &Global, spec: &str, disc: u128, ramified: &[u64]) -> Result<(), CliError> {
    let group = parse_group(spec)?;
    let hits: Vec<FindHit> = find_by_discriminant(&group, disc, ramified)?
        .iter()
        .map(|e| FindHit {
            record: ExtensionRecord::from_extension(e),
            hnp: hnp_holds(e),
            wa: wa_holds(e),
            noncyclic_places: e
                .ramified_primes()
                .into_iter()
                .filter(|&p| {
                    e.local_symbol(p)
                        .decomposition()
                        .isomorphism_type()
                        .invariant_factors()
                        .len()
                        > 1
                })
                .collect(),
        })
        .collect();
    eprintln!("hnp: {} extensions with discriminant {disc}", hits.len());
    let table = || {
        let mut t = Table::new(&["discriminant", "modulus", "images", "hnp", "wa", "noncyclic_places"]);
        for h in &hits {
            t.push(vec![
                h.record.discriminant.clone(),
                h.record.modulus.to_string(),
                json_cell(&h.record.images),
                h.hnp.to_string(),
                h.wa.to_string(),
                json_cell(&h.noncyclic_places),
            ]);
        }
        t
    };
    write(global, Format::Jsonl, table, &hits)
}

#[derive(Serialize)]
struct Checked<T: Serialize> {
    passed: bool,
    #[serde(flatten)]
    report: T,
}

fn local_check(
    global: &Global,
    spec: &str,
    mut primes: Vec<u64>,
    s_values: &[Complex64],
    tol: f64,
    sample: Option<usize>,
) -> Result<(), CliError> {
    let group = parse_group(spec)?;
    if let Some(k) = sample {
        let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
        primes = primes.choose_multiple(&mut rng, k).copied().collect();
        primes.sort_unstable();
    }
    let report = local_ft_check(&group, &primes, s_values, tol)?;
    let out = Checked {
        passed: report.passed(),
        report,
    };
    let table = || {
        let r = &out.report;
        let mut t = Table::new(&[
            "group",
            "primes",
            "comparisons",
            "max_abs_error",
            "coefficient_checks",
            "vanishing_checks",
            "failure_count",
            "passed",
        ]);
        t.push(vec![
            r.group.clone(),
            json_cell(&r.primes),
            r.comparisons.to_string(),
            f17(r.max_abs_error),
            r.coefficient_checks.to_string(),
            r.vanishing_checks.to_string(),
            r.failure_count.to_string(),
            out.passed.to_string(),
        ]);
        t
    };
    write(global, Format::Jsonl, table, std::slice::from_ref(&out))?;
    if !out.passed {
        return Err(CliError::Assertion(
            out.report.failures.first().cloned().unwrap_or_default(),
        ));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn poisson(
    global: &Global,
    spec: &str,
    l: Option<&str>,
    h: Option<&str>,
    eta: Option<&str>,
    s: f64,
    x: u128,
    p: u128,
    rel_tol: f64,
) -> Result<(), CliError> {
    let group = parse_group(spec)?;
    let l = parse_l(&group, l)?;
    let h = match h {
        Some(h) => Subgroup::parse(&group, h)?,
        None => Subgroup::whole(&group),
    };
    let eta = eta.map(|e| parse_eta(&group, e)).transpose()?;
    let p = u64::try_from(p).map_err(|_| CliError::Config("--P is too large".into()))?;
    let report = poisson_check(&h, &l, eta, s, x, p, global.budget)?;
    let out = Checked {
        passed: report.within_tails() || report.relative <= rel_tol,
        report,
    };
    let table = || {
        let r: &PoissonReport = &out.report;
        let mut t = Table::new(&[
            "s",
            "X",
            "P",
            "lhs_re",
            "lhs_im",
            "rhs_re",
            "rhs_im",
            "lhs_terms",
            "support",
            "lhs_tail",
            "rhs_tail",
            "discrepancy",
            "relative",
            "passed",
        ]);
        t.push(vec![
            f17(r.s),
            r.x_cut.to_string(),
            r.p_cut.to_string(),
            f17(r.lhs_re),
            f17(r.lhs_im),
            f17(r.rhs_re),
            f17(r.rhs_im),
            r.lhs_terms.to_string(),
            r.support.to_string(),
            f17(r.lhs_tail),
            f17(r.rhs_tail),
            f17(r.discrepancy),
            f17(r.relative),
            out.passed.to_string(),
        ]);
        t
    };
    write(global, Format::Jsonl, table, std::slice::from_ref(&out))?;
    if !out.passed {
        let r = &out.report;
        return Err(CliError::Assertion(format!(
            "discrepancy {:e} exceeds tails {:e} and relative {:e} exceeds {rel_tol:e}",
            r.discrepancy,
            r.lhs_tail + r.rhs_tail,
            r.relative
        )));
    }
    Ok(())
}

fn tauber(
    global: &Global,
    spec: &str,
    bounds: &[u128],
    a: Option<f64>,
    omega: Option<f64>,
    max_stability: f64,
) -> Result<(), CliError> {
    let group = parse_group(spec)?;
    let a = match a {
        Some(a) => a,
        None => 1.0 / alpha(&group)?,
    };
    let omega = match omega {
        Some(w) => w,
        None => nu(&group)?,
    };
    let counts = hom_counts(&Subgroup::whole(&group), bounds, global.budget)?;
    let points: Vec<(f64, f64)> = bounds
        .iter()
        .zip(&counts)
        .map(|(&b, &c)| (b as f64, c as f64))
        .collect();
    let fit = tauber_fit(&points, a, omega)?;
    let out = Checked {
        passed: fit.stability <= max_stability,
        report: fit,
    };
    let table = || {
        let f = &out.report;
        let mut t = Table::new(&["B", "count", "normalized", "a", "omega", "stability", "passed"]);
        for (r, b) in f.rows.iter().zip(bounds) {
            t.push(vec![
                b.to_string(),
                format!("{}", r.count),
                f17(r.normalized),
                f17(f.a),
                f17(f.omega),
                f17(f.stability),
                out.passed.to_string(),
            ]);
        }
        t
    };
    write(global, Format::Csv, table, std::slice::from_ref(&out))?;
    if !out.passed {
        return Err(CliError::Assertion(format!(
            "normalised counts vary by {:e} over the last three bounds, above {max_stability:e}",
            out.report.stability
        )));
    }
    Ok(())
}

fn moebius_check(global: &Global, spec: &str, l: Option<&str>, bound: u128) -> Result<(), CliError> {
    let group = parse_group(spec)?;
    let l = parse_l(&group, l)?;
    let report = moebius_inversion_check(&l, bound, global.budget)?;
    let out = Checked {
        passed: report.exact(),
        report,
    };
    let table = || {
        let r = &out.report;
        let mut t = Table::new(&[
            "group",
            "B",
            "lhs",
            "rhs",
            "passed",
            "subgroup",
            "order",
            "mu",
            "term_bound",
            "count",
        ]);
        for term in &r.terms {
            t.push(vec![
                r.group.clone(),
                r.bound.to_string(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                out.passed.to_string(),
                term.subgroup.clone(),
                term.order.to_string(),
                term.mu.to_string(),
                f17(term.bound),
                term.count.to_string(),
            ]);
        }
        t
    };
    write(global, Format::Jsonl, table, std::slice::from_ref(&out))?;
    if !out.passed {
        return Err(CliError::Assertion(format!(
            "direct count {} differs from the inversion sum {}",
            out.report.lhs, out.report.rhs
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct GroupInfo {
    group: String,
    orders: Vec<u64>,
    order: u64,
    exponent: u64,
    invariant_factors: Vec<u64>,
    q: Option<u64>,
    m_part: Vec<u64>,
    q_exponents: Vec<u32>,
    wedge_square: String,
    subgroups: usize,
    mu: i64,
    alpha: Option<f64>,
    nu: Option<f64>,
    noncyclic_sylow: bool,
    l: Option<String>,
    w1: Option<Vec<String>>,
    w2: Option<Vec<String>>,
}

fn group_info(global: &Global, spec: &str, l: Option<&str>) -> Result<(), CliError> {
    let group = parse_group(spec)?;
    let noncyclic = group.require_noncyclic_sylow().is_ok();
    let (l, w) = if noncyclic {
        let l = parse_l(&group, l)?;
        let w = w_partition(&group, &l)?;
        (Some(l), Some(w))
    } else {
        (None, None)
    };
    let names = |v: &[Subgroup]| v.iter().map(|h| h.to_string()).collect::<Vec<_>>();
    let info = GroupInfo {
        group: group.spec_string(),
        orders: group.orders().to_vec(),
        order: group.order(),
        exponent: group.exponent(),
        invariant_factors: group.invariant_factors(),
        q: group.q_small(),
        m_part: group.orders()[..group.m_len()].to_vec(),
        q_exponents: group.q_exponents(),
        wedge_square: exterior_square(&group).group.spec_string(),
        subgroups: subgroups(&group)?.len(),
        mu: moebius(&group),
        alpha: alpha(&group).ok(),
        nu: nu(&group).ok(),
        noncyclic_sylow: noncyclic,
        l: l.as_ref().map(|l| l.to_string()),
        w1: w.as_ref().map(|w| names(&w.w1)),
        w2: w.as_ref().map(|w| names(&w.w2)),
    };
    let table = || {
        let mut t = Table::new(&["key", "value"]);
        let v = serde_json::to_value(&info).unwrap_or_default();
        if let serde_json::Value::Object(map) = v {
            for (k, x) in map {
                let cell = match x {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                t.push(vec![k, cell]);
            }
        }
        t
    };
    write(global, Format::Jsonl, table, std::slice::from_ref(&info))
}
