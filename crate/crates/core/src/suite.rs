//! Verification suites per type, merged into one report in a fixed order.

use serde_json::{json, Value};

use crate::cascade::{verify_section1, Cascade};
use crate::chevalley::{jacobi_violations, ChevalleyTable};
use crate::coadjoint::{self, random_cross_section, sample_rng};
use crate::invariants::{self, InvariantsJson};
use crate::par;
use crate::report::{CheckResult, Status, VerificationReport};
use crate::rootsys::Family;

pub const DEFAULT_SEED: u64 = 0xC05CADE;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// τ points, random v per τ, and half the group elements per τ
    pub samples: usize,
    pub r_cap: u32,
    pub cross_section_points: usize,
    pub non_dominant: usize,
    pub invariance_groups: usize,
    pub invariance_points: usize,
    pub scan_bound: i64,
    /// run polynomial checks on E and F components too
    pub exceptional_polynomials: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            samples: 25,
            r_cap: 6,
            cross_section_points: 5,
            non_dominant: 20,
            invariance_groups: 10,
            invariance_points: 10,
            scan_bound: 6,
            exceptional_polynomials: false,
        }
    }
}

/// Collapse per-sample results of one check into a single entry.
fn merge(check: &str, ty: &str, seed: u64, parts: Vec<CheckResult>) -> CheckResult {
    let samples = parts.len();
    let evidence = parts.first().map(|p| p.evidence);
    let witness = parts
        .iter()
        .enumerate()
        .find(|(_, p)| p.status == Status::Fail)
        .map(|(i, p)| json!({"tau_sample": i, "witness": p.witness}));
    let mut out = CheckResult::sampled(check, ty, seed, samples, witness);
    if let Some(e) = evidence {
        out.evidence = e;
    }
    out
}

pub fn jacobi_check(tbl: &ChevalleyTable) -> CheckResult {
    let rs = tbl.root_system();
    let (checked, bad) = jacobi_violations(tbl);
    let witness = bad.map(|(i, j, k)| json!({"triple": [i, j, k]}));
    CheckResult::exact("jacobi", &rs.spec.to_string(), witness).with_detail(json!({"triples": checked}))
}

pub fn section1_suite(tbl: &ChevalleyTable, cascade: &Cascade) -> VerificationReport {
    verify_section1(tbl.root_system(), cascade)
}

pub fn coadjoint_suite(tbl: &ChevalleyTable, cascade: &Cascade, cfg: &SuiteConfig) -> VerificationReport {
    let rs = tbl.root_system();
    let ty = rs.spec.to_string();
    let np = rs.num_positive();
    let mut report = VerificationReport::new();
    report.push(jacobi_check(tbl));
    report.push(coadjoint::check_commutator_consistency(tbl));

    let per_tau: Vec<Vec<CheckResult>> = par::map_indices(cfg.samples, |i| {
        let tau = random_cross_section(cascade, &mut sample_rng(cfg.seed, 0, i));
        let z = tau.to_nminus();
        let sub_seed = cfg.seed.wrapping_add(i as u64);
        let mut out = Vec::new();
        let iso = coadjoint::isotropy_is_cascade_span(tbl, cascade, &z);
        out.push(CheckResult::exact("isotropy", &ty, (!iso).then(|| json!({"tau": tau.coords().iter().map(crate::linalg::q_to_string).collect::<Vec<_>>()}))));
        let dim = coadjoint::orbit_dimension(tbl, &z);
        out.push(CheckResult::exact("orbit-dimension", &ty, (dim + cascade.m() != np).then(|| json!({"dimension": dim}))));
        let open = coadjoint::check_open_orbit(tbl, cascade, &z);
        out.push(CheckResult::exact("open-orbit", &ty, (!open).then(|| json!({"tangent_rank": coadjoint::tangent_rank(tbl, &z)}))));
        out.extend(coadjoint::check_s_injectivity(tbl, cascade, &tau, cfg.samples, sub_seed).checks);
        out.extend(coadjoint::check_cross_section(tbl, cascade, &tau, cfg.samples, sub_seed).checks);
        out
    });
    let names: Vec<String> = per_tau.first().map(|v| v.iter().map(|c| c.check.clone()).collect()).unwrap_or_default();
    for (k, name) in names.iter().enumerate() {
        let parts: Vec<CheckResult> = per_tau.iter().map(|v| v[k].clone()).collect();
        let inner = parts.first().and_then(|p| p.samples);
        let mut merged = merge(name, &ty, cfg.seed, parts);
        merged.detail = Some(json!({"tau_points": cfg.samples, "samples_per_tau": inner}));
        if per_tau[0][k].evidence == crate::report::Evidence::Exact {
            merged.evidence = crate::report::Evidence::Exact;
        }
        report.push(merged);
    }

    report.push(coadjoint::check_group_law(tbl, cfg.samples, cfg.seed));
    report.push(coadjoint::check_h_equivariance(tbl, cfg.samples, cfg.seed));
    report.push(coadjoint::check_degenerate_points(tbl, cascade, cfg.samples, cfg.seed));
    report
}

pub fn invariants_suite(tbl: &ChevalleyTable, cascade: &Cascade, cfg: &SuiteConfig) -> (VerificationReport, Option<InvariantsJson>) {
    let rs = tbl.root_system();
    let ty = rs.spec.to_string();
    let mut report = VerificationReport::new();
    report.push(invariants::check_generators(rs, cascade, cfg.r_cap));
    report.push(invariants::check_span_criterion(rs, cascade, cfg.samples, cfg.seed));
    report.push(invariants::check_half_integer_ratios(rs, cascade, cfg.samples, cfg.seed));
    let exceptional = rs.spec.components.iter().any(|c| matches!(c.family, Family::E | Family::F));
    if exceptional && !cfg.exceptional_polynomials {
        let js = invariants::semigroup_generators(rs, cascade, cfg.r_cap)
            .ok()
            .map(|g| invariants::generators_json(rs, cascade, &g));
        return (report, js);
    }
    let data = match invariants::compute_data(tbl, cascade, cfg.r_cap) {
        Ok(d) => d,
        Err(e) => {
            report.push(CheckResult::exact("invariant-data", &ty, Some(json!({"error": e.to_string()}))));
            return (report, None);
        }
    };
    report.extend(VerificationReport {
        checks: invariants::check_multiplicity_and_degree(tbl, cascade, &data),
    });
    report.push(invariants::check_factorization(tbl, &data));
    report.push(invariants::check_cross_section_values(tbl, cascade, &data, cfg.cross_section_points, cfg.seed));
    report.push(invariants::check_n_invariance(tbl, &data, cfg.invariance_groups, cfg.invariance_points, cfg.seed));
    report.push(invariants::check_non_dominant(tbl, cascade, cfg.non_dominant, cfg.seed));
    report.push(invariants::check_dominance_scan(tbl, cascade, cfg.scan_bound));
    let js = invariants::generators_json(rs, cascade, &data.gens);
    (report, Some(js))
}

/// Which suites to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckSet {
    pub section1: bool,
    pub coadjoint: bool,
    pub invariants: bool,
}

impl CheckSet {
    pub fn all() -> Self {
        Self {
            section1: true,
            coadjoint: true,
            invariants: true,
        }
    }
}

/// All requested suites for one type, in the order section1, coadjoint,
/// invariants.
pub fn run_type(tbl: &ChevalleyTable, cascade: &Cascade, checks: CheckSet, cfg: &SuiteConfig) -> (VerificationReport, Option<Value>) {
    let mut report = VerificationReport::new();
    let mut gens = None;
    if checks.section1 {
        report.extend(section1_suite(tbl, cascade));
    }
    if checks.coadjoint {
        report.extend(coadjoint_suite(tbl, cascade, cfg));
    }
    if checks.invariants {
        let (r, js) = invariants_suite(tbl, cascade, cfg);
        report.extend(r);
        gens = js.map(|j| serde_json::to_value(j).expect("serializable"));
    }
    (report, gens)
}
