//! Machine checks of the bounds on `τ_g` and aggregation into reports.
//!
//! Every inequality is evaluated as `b·lhs <= a·rhs` in integers. Values are
//! solved once per instance and shared by all checks.

use std::collections::BTreeMap;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::constructions::{k_corona, ConstructionError};
use crate::game::PlayerRole;
use crate::hypergraph::{EdgeSet, Hypergraph};
use crate::solver::{adversarial_length, transversal_number, SolveError, SolveLimits, Solver};
use crate::strategies::StallerCorona;
use crate::weights::{bound_rhs_3a, initial_weight, Scheme, WeightError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("hypothesis violated: base order {n_base} exceeds 2^(k-1)-1 = {max} for k={k}")]
    HypothesisViolated { n_base: usize, k: usize, max: u64 },
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Names of the checks produced by [`check_bounds`], in output order.
pub const CHECK_NAMES: &[&str] = &[
    "obs1_tau_le_tau_g",
    "obs1_tau_g_le_2tau_minus_1",
    "obs1_tau_le_tau_g_prime",
    "obs1_tau_g_prime_le_2tau",
    "diff_tau_g_tau_g_prime",
    "thm1_4_11",
    "thm2_2uniform",
    "graph_tau_1_3",
    "thm3uniform_5_16",
    "thm3uniformA",
    "thm3unif_weight",
    "cor3_delta2_3_10",
    "cor3_delta2_half_n",
    "cor3_2regular_3_4_m",
    "cor3_staller_start",
    "thm4uniform_71_252",
    "thm4unif_weight",
    "cor4_delta2_7_18_n",
    "cor4_2regular_7_9_m",
    "cor4_staller_start",
];

/// One inequality `lhs <= rhs` on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub applicable: bool,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    pub slack: i64,
    pub instance: String,
}

impl BoundCheck {
    pub fn new(name: &str, instance: &str, lhs: i64, rhs: i64) -> Self {
        BoundCheck {
            name: name.into(),
            applicable: true,
            lhs,
            rhs,
            holds: lhs <= rhs,
            slack: rhs - lhs,
            instance: instance.into(),
        }
    }

    /// A check whose hypothesis fails; it never counts as a violation.
    pub fn inapplicable(name: &str, instance: &str) -> Self {
        BoundCheck {
            applicable: false,
            ..Self::new(name, instance, 0, 0)
        }
    }

    pub fn is_violation(&self) -> bool {
        self.applicable && !self.holds
    }
}

/// `τ`, `τ_g` and `τ_g′` of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InstanceValues {
    pub tau: u32,
    pub tau_g: u32,
    pub tau_g_prime: u32,
}

impl InstanceValues {
    pub fn solve(hg: &Hypergraph, limits: &SolveLimits) -> Result<Self, SolveError> {
        let solver = Solver::new(hg, limits.clone())?;
        Ok(InstanceValues {
            tau: transversal_number(hg, limits)? as u32,
            tau_g: solver.tau_g()?,
            tau_g_prime: solver.tau_g_prime()?,
        })
    }
}

/// Solves `hg` and evaluates every check.
pub fn check_bounds(
    hg: &Hypergraph,
    instance: &str,
    limits: &SolveLimits,
) -> Result<(InstanceValues, Vec<BoundCheck>), VerifyError> {
    let values = InstanceValues::solve(hg, limits)?;
    let checks = evaluate_bounds(hg, instance, &values)?;
    Ok((values, checks))
}

/// Evaluates every check against precomputed values.
pub fn evaluate_bounds(
    hg: &Hypergraph,
    instance: &str,
    values: &InstanceValues,
) -> Result<Vec<BoundCheck>, VerifyError> {
    let n = hg.n() as i64;
    let m = hg.m() as i64;
    let tau = values.tau as i64;
    let tg = values.tau_g as i64;
    let tgp = values.tau_g_prime as i64;
    let k = hg.uniformity();
    let delta = hg.max_degree();
    let two_regular = hg.m() > 0 && (0..hg.n()).all(|v| hg.degree(v) == 2);

    let mut out = Vec::with_capacity(CHECK_NAMES.len());
    let mut push = |name: &str, applicable: bool, lhs: i64, rhs: i64| {
        debug_assert!(CHECK_NAMES.contains(&name));
        out.push(if applicable {
            BoundCheck::new(name, instance, lhs, rhs)
        } else {
            BoundCheck::inapplicable(name, instance)
        });
    };

    let has_edges = m >= 1;
    push("obs1_tau_le_tau_g", has_edges, tau, tg);
    push("obs1_tau_g_le_2tau_minus_1", has_edges, tg, 2 * tau - 1);
    push("obs1_tau_le_tau_g_prime", has_edges, tau, tgp);
    push("obs1_tau_g_prime_le_2tau", has_edges, tgp, 2 * tau);
    push("diff_tau_g_tau_g_prime", true, (tg - tgp).abs(), 1);

    let sizes_ok = hg.min_edge_size().is_none_or(|s| s >= 2);
    push("thm1_4_11", sizes_ok && !hg.is_c4(), 11 * tg, 4 * (n + m));
    let graph = k == Some(2);
    push("thm2_2uniform", graph, 3 * tg, n + m + 1);
    push("graph_tau_1_3", graph, 3 * tau, n + m);

    let three = k == Some(3);
    let (rhs_3a, w3) = if three {
        (bound_rhs_3a(hg)? as i64, initial_weight(hg, Scheme::Three)? as i64)
    } else {
        (0, 0)
    };
    push("thm3uniform_5_16", three, 16 * tg, 5 * (n + m));
    push("thm3uniformA", three, 48 * tg, rhs_3a);
    push("thm3unif_weight", three, 48 * tg, w3);
    let low = delta <= 2;
    push("cor3_delta2_3_10", three && low, 10 * tg, 3 * (n + m));
    push("cor3_delta2_half_n", three && low, 2 * tg, n);
    push("cor3_2regular_3_4_m", three && two_regular, 4 * tg, 3 * m);
    push("cor3_staller_start", three, 16 * tgp, 5 * n + 5 * m + 6);

    let four = k == Some(4);
    let w4 = if four {
        initial_weight(hg, Scheme::Four)? as i64
    } else {
        0
    };
    push("thm4uniform_71_252", four, 252 * tg, 71 * (n + m));
    push("thm4unif_weight", four, 3024 * tg, w4);
    push("cor4_delta2_7_18_n", four && low, 18 * tg, 7 * n);
    push("cor4_2regular_7_9_m", four && two_regular, 9 * tg, 7 * m);
    push("cor4_staller_start", four, 252 * tgp, 71 * n + 71 * m + 110);
    Ok(out)
}

/// Pass and failure counts for one check name.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub applicable: u64,
    pub passed: u64,
}

/// Aggregated outcome over a corpus. [`Report::merge`] is associative, so
/// per-instance reports can be combined in any grouping.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub corpus: String,
    pub instances: u64,
    pub tallies: BTreeMap<String, Tally>,
    pub violations: Vec<BoundCheck>,
    /// Applicable check with the least slack, per check name.
    pub extremal: BTreeMap<String, BoundCheck>,
}

impl Report {
    pub fn new(corpus: impl Into<String>) -> Self {
        Report {
            corpus: corpus.into(),
            ..Default::default()
        }
    }

    /// Adds one instance's checks.
    pub fn add_instance(&mut self, checks: &[BoundCheck]) {
        self.instances += 1;
        for c in checks {
            self.add_check(c);
        }
    }

    fn add_check(&mut self, c: &BoundCheck) {
        if !c.applicable {
            return;
        }
        let t = self.tallies.entry(c.name.clone()).or_default();
        t.applicable += 1;
        if c.holds {
            t.passed += 1;
        } else {
            self.violations.push(c.clone());
        }
        let tighter = |old: &BoundCheck| (c.slack, &c.instance) < (old.slack, &old.instance);
        match self.extremal.get(&c.name) {
            Some(old) if !tighter(old) => {}
            _ => {
                self.extremal.insert(c.name.clone(), c.clone());
            }
        }
    }

    pub fn merge(mut self, other: Report) -> Report {
        if self.corpus.is_empty() {
            self.corpus = other.corpus;
        }
        self.instances += other.instances;
        for (name, t) in other.tallies {
            let e = self.tallies.entry(name).or_default();
            e.applicable += t.applicable;
            e.passed += t.passed;
        }
        self.violations.extend(other.violations);
        for (name, c) in other.extremal {
            match self.extremal.get(&name) {
                Some(old) if (old.slack, &old.instance) <= (c.slack, &c.instance) => {}
                _ => {
                    self.extremal.insert(name, c);
                }
            }
        }
        self
    }

    pub fn is_success(&self) -> bool {
        self.violations.is_empty()
    }

    /// Smallest slack seen for `check`, if it ever applied.
    pub fn min_slack(&self, check: &str) -> Option<i64> {
        self.extremal.get(check).map(|c| c.slack)
    }
}

fn random_subset(rng: &mut Pcg64, within: EdgeSet) -> EdgeSet {
    within.iter().filter(|_| rng.gen_bool(0.5)).collect()
}

/// Samples nested covered sets `B ⊆ A` and checks that covering more never
/// lengthens the game, for both starters. Also compares the solver with and
/// without dominated-move pruning on the full game and every sampled
/// position.
pub fn check_continuation(
    hg: &Hypergraph,
    instance: &str,
    trials: usize,
    seed: u64,
    limits: &SolveLimits,
) -> Result<Report, VerifyError> {
    let plain = Solver::new(hg, limits.clone())?;
    let pruned = Solver::new(hg, limits.clone())?.with_pruning(true);
    let all = hg.all_edges();
    let mut rng = Pcg64::seed_from_u64(seed);
    let mut report = Report::new(format!("continuation({instance})"));
    let roles = [PlayerRole::EdgeHitter, PlayerRole::Staller];

    let mut checks = Vec::new();
    let compare_pruned = |unc: EdgeSet, checks: &mut Vec<BoundCheck>| -> Result<(), VerifyError> {
        for role in roles {
            let a = plain.value(unc, role)? as i64;
            let b = pruned.value(unc, role)? as i64;
            checks.push(BoundCheck::new("pruned_equals_unpruned", instance, (a - b).abs(), 0));
        }
        Ok(())
    };
    compare_pruned(all, &mut checks)?;
    for _ in 0..trials {
        let b = random_subset(&mut rng, all);
        let a = b | random_subset(&mut rng, all - b);
        for role in roles {
            let name = match role {
                PlayerRole::EdgeHitter => "continuation_eh_start",
                PlayerRole::Staller => "continuation_staller_start",
            };
            let va = plain.value(all - a, role)? as i64;
            let vb = plain.value(all - b, role)? as i64;
            checks.push(BoundCheck::new(name, instance, va, vb));
        }
        compare_pruned(all - a, &mut checks)?;
    }
    report.add_instance(&checks);
    Ok(report)
}

/// Builds the `k`-corona of `base` and checks `τ_g = 2τ − 1` and
/// `τ_g′ = 2τ`, plus the lengths the weighted-pendant Staller strategy
/// forces against a best-responding Edge-hitter.
pub fn check_corona(
    base: &Hypergraph,
    k: usize,
    pendant_size: usize,
    limits: &SolveLimits,
) -> Result<Report, VerifyError> {
    let max = if (1..=64).contains(&k) { (1u64 << (k - 1)) - 1 } else { 0 };
    if k == 0 || base.n() as u64 > max {
        return Err(VerifyError::HypothesisViolated {
            n_base: base.n(),
            k,
            max,
        });
    }
    let corona = k_corona(base, k, pendant_size)?;
    let hg = &corona.hypergraph;
    let id = format!("corona(n_base={},k={k},pendant={pendant_size})", base.n());
    let values = InstanceValues::solve(hg, limits)?;
    let tau = values.tau as i64;
    let tg = values.tau_g as i64;
    let tgp = values.tau_g_prime as i64;

    let staller = StallerCorona::new(corona.labels.clone().expect("coronas carry labels"));
    let forced = |first| -> Result<i64, VerifyError> {
        let out = adversarial_length(hg, &staller, PlayerRole::Staller, first, limits)?;
        Ok(out.length as i64)
    };
    let checks = vec![
        BoundCheck::new("corona_tau_g_le_2tau_minus_1", &id, tg, 2 * tau - 1),
        BoundCheck::new("corona_tau_g_ge_2tau_minus_1", &id, 2 * tau - 1, tg),
        BoundCheck::new("corona_tau_g_prime_le_2tau", &id, tgp, 2 * tau),
        BoundCheck::new("corona_tau_g_prime_ge_2tau", &id, 2 * tau, tgp),
        BoundCheck::new("corona_strategy_eh_start", &id, 2 * tau - 1, forced(PlayerRole::EdgeHitter)?),
        BoundCheck::new("corona_strategy_staller_start", &id, 2 * tau, forced(PlayerRole::Staller)?),
    ];
    let mut report = Report::new(id);
    report.add_instance(&checks);
    Ok(report)
}

/// One instance of a sweep corpus.
#[derive(Debug, Clone)]
pub struct Instance {
    pub family: String,
    pub seed: Option<u64>,
    pub hypergraph: Hypergraph,
}

impl Instance {
    pub fn new(family: impl Into<String>, seed: Option<u64>, hypergraph: Hypergraph) -> Self {
        Instance {
            family: family.into(),
            seed,
            hypergraph,
        }
    }

    pub fn id(&self) -> String {
        match self.seed {
            Some(s) => format!("{}#{s}", self.family),
            None => self.family.clone(),
        }
    }
}

/// One row of the sweep CSV. Field order is the column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub tau: u32,
    pub tau_g: u32,
    pub tau_g_prime: u32,
    pub check: String,
    pub lhs: i64,
    pub rhs: i64,
    pub slack: i64,
    pub holds: bool,
}

pub const CSV_HEADER: [&str; 13] = [
    "family", "n", "m", "k", "seed", "tau", "tau_g", "tau_g_prime", "check", "lhs", "rhs",
    "slack", "holds",
];

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub report: Report,
}

impl SweepOutput {
    /// Writes the header and one line per row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), VerifyError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(CSV_HEADER)?;
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Which checks a sweep keeps.
fn resolve_checks(checks: Option<&[String]>) -> Result<Vec<&'static str>, VerifyError> {
    match checks {
        None => Ok(CHECK_NAMES.to_vec()),
        Some(names) if names.iter().any(|n| n == "all") => Ok(CHECK_NAMES.to_vec()),
        Some(names) => names
            .iter()
            .map(|n| {
                CHECK_NAMES
                    .iter()
                    .copied()
                    .find(|c| c == n)
                    .ok_or_else(|| VerifyError::UnknownCheck(n.clone()))
            })
            .collect(),
    }
}

/// Runs [`check_bounds`] over a corpus in parallel. Rows come out in corpus
/// order, one per applicable selected check.
pub fn experiment_sweep(
    corpus: &[Instance],
    checks: Option<&[String]>,
    limits: &SolveLimits,
    corpus_name: &str,
) -> Result<SweepOutput, VerifyError> {
    let selected = resolve_checks(checks)?;
    let per_instance = corpus
        .par_iter()
        .map(|inst| {
            let hg = &inst.hypergraph;
            let (values, all) = check_bounds(hg, &inst.id(), limits)?;
            let kept: Vec<BoundCheck> = all
                .into_iter()
                .filter(|c| selected.contains(&c.name.as_str()))
                .collect();
            let rows = kept
                .iter()
                .filter(|c| c.applicable)
                .map(|c| SweepRow {
                    family: inst.family.clone(),
                    n: hg.n(),
                    m: hg.m(),
                    k: hg.uniformity(),
                    seed: inst.seed,
                    tau: values.tau,
                    tau_g: values.tau_g,
                    tau_g_prime: values.tau_g_prime,
                    check: c.name.clone(),
                    lhs: c.lhs,
                    rhs: c.rhs,
                    slack: c.slack,
                    holds: c.holds,
                })
                .collect::<Vec<_>>();
            let mut report = Report::new("");
            report.add_instance(&kept);
            Ok((rows, report))
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let mut out = SweepOutput {
        rows: Vec::new(),
        report: Report::new(corpus_name),
    };
    for (rows, report) in per_instance {
        out.rows.extend(rows);
        out.report = std::mem::take(&mut out.report).merge(report);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{c4, complete, family_hk, figure2};

    fn find<'a>(checks: &'a [BoundCheck], name: &str) -> &'a BoundCheck {
        checks.iter().find(|c| c.name == name).unwrap()
    }

    #[test]
    fn h1_is_tight_for_4_11() {
        let h = family_hk(1).unwrap().hypergraph;
        let (v, checks) = check_bounds(&h, "H1", &SolveLimits::default()).unwrap();
        assert_eq!(v.tau_g, 4);
        let t = find(&checks, "thm1_4_11");
        assert!(t.applicable && t.holds);
        assert_eq!((t.lhs, t.rhs, t.slack), (44, 44, 0));
        assert!(!find(&checks, "thm3uniform_5_16").applicable);
    }

    #[test]
    fn c4_guards() {
        let (v, checks) = check_bounds(&c4(), "C4", &SolveLimits::default()).unwrap();
        assert_eq!(v.tau_g, 3);
        let t1 = find(&checks, "thm1_4_11");
        assert!(!t1.applicable && t1.holds);
        let t2 = find(&checks, "thm2_2uniform");
        assert_eq!((t2.lhs, t2.rhs, t2.slack), (9, 9, 0));
    }

    #[test]
    fn figure2_equality() {
        let (v, checks) = check_bounds(&figure2().unwrap(), "figure2", &SolveLimits::default()).unwrap();
        assert_eq!((v.tau, v.tau_g), (2, 3));
        let a = find(&checks, "thm3uniformA");
        assert_eq!((a.lhs, a.rhs), (144, 144));
        for name in ["cor3_delta2_3_10", "cor3_delta2_half_n", "cor3_2regular_3_4_m"] {
            let c = find(&checks, name);
            assert!(c.applicable && c.slack == 0, "{name}: {c:?}");
        }
    }

    #[test]
    fn empty_hypergraph_checks_are_quiet() {
        let (_, checks) = check_bounds(&Hypergraph::empty(3), "empty", &SolveLimits::default()).unwrap();
        assert!(checks.iter().all(|c| !c.is_violation()));
        assert!(!find(&checks, "obs1_tau_g_le_2tau_minus_1").applicable);
    }

    #[test]
    fn report_merge_is_associative() {
        let lim = SolveLimits::default();
        let parts: Vec<Report> = [family_hk(1).unwrap().hypergraph, c4(), figure2().unwrap()]
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let mut r = Report::new("");
                r.add_instance(&check_bounds(h, &format!("i{i}"), &lim).unwrap().1);
                r
            })
            .collect();
        let left = parts[0].clone().merge(parts[1].clone()).merge(parts[2].clone());
        let right = parts[0].clone().merge(parts[1].clone().merge(parts[2].clone()));
        assert_eq!(left.tallies, right.tallies);
        assert_eq!(left.extremal, right.extremal);
        assert_eq!(left.instances, 3);
        assert_eq!(left.min_slack("thm1_4_11"), Some(0));
    }

    #[test]
    fn continuation_on_c4() {
        let lim = SolveLimits::default();
        let r = check_continuation(&c4(), "C4", 50, 3, &lim).unwrap();
        assert!(r.is_success());
        assert_eq!(r.tallies["continuation_eh_start"].applicable, 50);
        // covering one edge of C4 leaves a path of three edges
        let s = Solver::new(&c4(), lim).unwrap();
        let one = c4().all_edges() - EdgeSet::single(0);
        assert_eq!(s.value(one, PlayerRole::EdgeHitter).unwrap(), 2);
    }

    #[test]
    fn corona_checks() {
        let lim = SolveLimits::default();
        let r = check_corona(&Hypergraph::empty(1), 2, 2, &lim).unwrap();
        assert!(r.is_success(), "{:?}", r.violations);
        let err = check_corona(&complete(4, 3).unwrap(), 3, 2, &lim).unwrap_err();
        assert!(matches!(err, VerifyError::HypothesisViolated { n_base: 4, k: 3, max: 3 }));
    }

    #[test]
    fn sweep_csv() {
        let corpus = vec![Instance::new("H1", None, family_hk(1).unwrap().hypergraph)];
        let out = experiment_sweep(&corpus, None, &SolveLimits::default(), "h1").unwrap();
        assert!(out.rows.iter().any(|r| r.check == "thm1_4_11" && r.slack == 0));
        let mut buf = Vec::new();
        out.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("family,n,m,k,seed,tau,tau_g,tau_g_prime,check,lhs,rhs,slack,holds\n"));
        assert!(text.lines().any(|l| l.starts_with("H1,6,5,,,3,4,") && l.ends_with(",thm1_4_11,44,44,0,true")));

        let empty = experiment_sweep(&[], None, &SolveLimits::default(), "none").unwrap();
        let mut buf = Vec::new();
        empty.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
        assert!(empty.report.is_success());

        let only = vec!["thm1_4_11".to_string()];
        let out = experiment_sweep(&corpus, Some(&only), &SolveLimits::default(), "h1").unwrap();
        assert_eq!(out.rows.len(), 1);
        let bad = vec!["thm9".to_string()];
        assert!(matches!(
            experiment_sweep(&corpus, Some(&bad), &SolveLimits::default(), "h1"),
            Err(VerifyError::UnknownCheck(_))
        ));
    }
}
