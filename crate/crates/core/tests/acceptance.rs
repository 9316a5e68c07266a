mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use cascade_kit::cascade::compute_cascade;
use cascade_kit::chevalley::{jacobi_violations, ChevalleyTable};
use cascade_kit::coadjoint;
use cascade_kit::invariants::{self, cascade_monomial, CascadeLatticePoint};
use cascade_kit::report::VerificationReport;
use cascade_kit::rootsys::RootSystem;
use cascade_kit::suite::{coadjoint_suite, invariants_suite, section1_suite, SuiteConfig};
use common::{emit, Oracle};
use num_traits::{Signed, Zero};

fn setup(ty: &str) -> (ChevalleyTable, cascade_kit::cascade::Cascade) {
    let rs = RootSystem::from_spec_str(ty).unwrap();
    let c = compute_cascade(&rs);
    (ChevalleyTable::new(rs), c)
}

fn report_line(n: u32, what: &str, ok: bool, elapsed: Duration, notes: &[String]) {
    emit(&format!(
        "acceptance {n}: {} {what} ({:.2}s){}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if notes.is_empty() { String::new() } else { format!(" [{}]", notes.join("; ")) }
    ));
}

fn failures(r: &VerificationReport) -> Vec<String> {
    r.failures().map(|c| format!("{} {}", c.type_name, c.check)).collect()
}

#[test]
fn acceptance_1_cascade_structure() {
    let start = Instant::now();
    let mut notes = Vec::new();
    let required = [
        "layer-partition",
        "layer-size",
        "layer-ratio",
        "strong-orthogonality",
        "maximality",
        "longest-element-product",
        "longest-element-restriction",
    ];
    for ty in ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4", "B2xG2"] {
        let (t, c) = setup(ty);
        let r = section1_suite(&t, &c);
        notes.extend(failures(&r));
        for name in required {
            if r.get(name).is_none() {
                notes.push(format!("{ty} missing {name}"));
            }
        }
        let orders = r
            .get("longest-element-product")
            .and_then(|x| x.detail.as_ref())
            .and_then(|d| d["orders_checked"].as_u64())
            .unwrap_or(0);
        if c.m() > 1 && orders < 2 {
            notes.push(format!("{ty} only {orders} product orders"));
        }
    }
    let elapsed = start.elapsed();
    let ok = notes.is_empty() && elapsed < Duration::from_secs(10);
    report_line(1, "cascade structure suite on 14 types", ok, elapsed, &notes);
    assert!(ok, "{notes:?}");
}

#[test]
fn acceptance_2_cascade_sizes_by_oracle() {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (ty, want) in [("A2", 1), ("A3", 2), ("B2", 2), ("B3", 3), ("G2", 2), ("D4", 4), ("F4", 4)] {
        let (t, c) = setup(ty);
        let rs = t.root_system();
        let oracle = Oracle::new(rs);
        let rec = oracle.recursive_cascade();
        let lib: std::collections::BTreeSet<Vec<i64>> = c.beta_roots(rs).into_iter().map(|r| r.0).collect();
        let sizes = oracle.maximal_so_sizes();
        let ok = rec.len() == want
            && lib == rec
            && oracle.is_maximal_so(&rec)
            && sizes.iter().max() == Some(&want);
        if !ok {
            notes.push(format!("{ty}: oracle {} lib {} max {:?}", rec.len(), lib.len(), sizes.iter().max()));
        }
    }
    let elapsed = start.elapsed();
    let ok = notes.is_empty();
    report_line(2, "cascade sizes match brute-force oracle", ok, elapsed, &notes);
    assert!(ok, "{notes:?}");
}

#[test]
fn acceptance_3_coadjoint_orbits() {
    let start = Instant::now();
    let mut notes = Vec::new();
    let cfg = SuiteConfig::default();
    for ty in ["A2", "A3", "B2", "B3", "C3", "G2"] {
        let (t, c) = setup(ty);
        let r = coadjoint_suite(&t, &c, &cfg);
        notes.extend(failures(&r));
        for name in [
            "isotropy",
            "orbit-dimension",
            "s-injectivity-basis",
            "s-injectivity-sampled",
            "cross-section-moves-off",
            "cross-section-fixed-by-r",
            "open-orbit",
        ] {
            match r.get(name) {
                Some(x) if x.samples == Some(25) => {}
                _ => notes.push(format!("{ty} {name} missing or wrong sample count")),
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = notes.is_empty() && elapsed < Duration::from_secs(30);
    report_line(3, "coadjoint suite, 25 cross-section points per type", ok, elapsed, &notes);
    assert!(ok, "{notes:?}");
}

#[test]
fn acceptance_4_invariant_ring() {
    let start = Instant::now();
    let mut notes = Vec::new();
    let cfg = SuiteConfig::default();
    for ty in ["A2", "A3", "A4", "B2", "B3", "G2"] {
        let (t, c) = setup(ty);
        let (r, js) = invariants_suite(&t, &c, &cfg);
        notes.extend(failures(&r));
        for name in [
            "semigroup-generators",
            "multiplicity-one",
            "degree-formula",
            "cascade-coefficient",
            "factorization",
            "cross-section-evaluation",
            "non-dominant-multiplicity-zero",
        ] {
            if r.get(name).is_none() {
                notes.push(format!("{ty} missing {name}"));
            }
        }
        match js {
            Some(j) if j.generators.len() == c.m() && j.det.abs() == 1 => {}
            _ => notes.push(format!("{ty} generator data")),
        }
        if r.get("cross-section-evaluation").and_then(|x| x.samples) != Some(5) {
            notes.push(format!("{ty} cross-section sample count"));
        }
        if r.get("non-dominant-multiplicity-zero").and_then(|x| x.samples) != Some(20) {
            notes.push(format!("{ty} non-dominant sample count"));
        }
    }
    let elapsed = start.elapsed();
    let ok = notes.is_empty() && elapsed < Duration::from_secs(120);
    report_line(4, "invariant suite with r_cap 6", ok, elapsed, &notes);
    assert!(ok, "{notes:?}");
}

#[test]
fn acceptance_5_known_generators() {
    let start = Instant::now();
    let mut notes = Vec::new();
    let expect = [
        ("A2", vec![vec![1, 1]], vec![1]),
        ("A3", vec![vec![1, 1, 1], vec![1, 2, 1]], vec![1, 2]),
        ("B2", vec![vec![1, 2], vec![2, 2]], vec![1, 2]),
    ];
    for (ty, mus, degrees) in expect {
        let (t, c) = setup(ty);
        let rs = t.root_system();
        let g = invariants::semigroup_generators(rs, &c, 6).unwrap();
        let got: Vec<Vec<i64>> = g.mus.iter().map(|m| m.simple_coords(rs, &c)).collect();
        if got != mus || g.degrees() != degrees {
            notes.push(format!("{ty}: {got:?} {:?}", g.degrees()));
        }
    }
    // quadratic invariants: the cascade monomial plus one other term
    for (ty, other) in [("A3", vec![vec![1, 1, 0], vec![0, 1, 1]]), ("B2", vec![vec![1, 1], vec![1, 1]])] {
        let (t, c) = setup(ty);
        let rs = t.root_system();
        let nu = CascadeLatticePoint::new(vec![1, 1]);
        let xi = invariants::compute_invariant(&t, &c, &nu).unwrap();
        let lead = cascade_monomial(&c, rs.num_positive(), &nu);
        let mut second = invariants::ExponentVector::zero(rs.num_positive());
        for r in &other {
            second.0[rs.index_of(r).unwrap()] += 1;
        }
        let ok = xi.terms.len() == 2
            && xi.terms.get(&lead).map(|v| v.to_string()) == Some("1".into())
            && xi.terms.get(&second).is_some_and(|v| !v.is_zero() && (ty == "B2" || v.abs() == cascade_kit::linalg::q(1)));
        if !ok {
            notes.push(format!("{ty} quadratic invariant {:?}", xi.to_json(rs)));
        }
    }
    let elapsed = start.elapsed();
    let ok = notes.is_empty();
    report_line(5, "known generator data for A2, A3, B2", ok, elapsed, &notes);
    assert!(ok, "{notes:?}");
}

#[test]
fn acceptance_6_consistency_oracles() {
    let start = Instant::now();
    let mut notes = Vec::new();
    for ty in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4", "A1xA1", "A2xB2", "G2xA2"] {
        let (t, _) = setup(ty);
        let (_, bad) = jacobi_violations(&t);
        if bad.is_some() {
            notes.push(format!("{ty} jacobi {bad:?}"));
        }
    }
    for ty in ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "A1xA1", "A1xA2", "A1xB2", "A1xA1xA1"] {
        let (t, _) = setup(ty);
        if !coadjoint::check_commutator_consistency(&t).passed() {
            notes.push(format!("{ty} coad-commutator"));
        }
        if !coadjoint::check_h_equivariance(&t, 10, 17).passed() {
            notes.push(format!("{ty} h-equivariance"));
        }
    }
    for ty in ["A2", "A3", "A4", "B2", "B3", "G2"] {
        let (t, c) = setup(ty);
        let data = invariants::compute_data(&t, &c, 6).unwrap();
        let r = invariants::check_n_invariance(&t, &data, 10, 10, 17);
        if !r.passed() || r.samples != Some(100) {
            notes.push(format!("{ty} n-invariance {:?}", r.witness));
        }
    }
    let elapsed = start.elapsed();
    let ok = notes.is_empty();
    report_line(6, "Jacobi, coad-commutator, H-equivariance, N-invariance", ok, elapsed, &notes);
    assert!(ok, "{notes:?}");
}

#[test]
fn acceptance_7_cli_determinism_and_exit_codes() {
    let start = Instant::now();
    let mut notes = Vec::new();
    let bin = env!("CARGO_BIN_EXE_cascade-kit");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    let a = run(&["verify", "A3", "--checks", "all", "--seed", "7"]);
    let b = run(&["verify", "A3", "--checks", "all", "--seed", "7"]);
    if a.stdout != b.stdout || a.stdout.is_empty() {
        notes.push("verify output differs between runs".into());
    }
    if a.status.code() != Some(0) {
        notes.push(format!("pass case exit {:?}", a.status.code()));
    }
    let fault = run(&["verify", "A3", "--checks", "all", "--seed", "7", "--inject-fault", "drop-cascade-root"]);
    if fault.status.code() != Some(1) {
        notes.push(format!("fault case exit {:?}", fault.status.code()));
    }
    let bad = run(&["verify", "A3x", "--checks", "all"]);
    if bad.status.code() != Some(2) || !bad.stdout.is_empty() {
        notes.push(format!("malformed spec exit {:?}", bad.status.code()));
    }
    let elapsed = start.elapsed();
    let ok = notes.is_empty();
    report_line(7, "CLI determinism and exit codes 0/1/2", ok, elapsed, &notes);
    assert!(ok, "{notes:?}");
}
