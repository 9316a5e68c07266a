//! Coadjoint action of n and N on n₋ ≅ n*.
//!
//! `coad v(z) = Φ[v, z]` and `Coad u(z) = Φ Ad u (z)`, where Φ projects g
//! onto n₋ along b. Group elements are unipotent, `u = exp(X)` with `X ∈ n`,
//! and `Ad u = Σ (ad X)^k / k!` is a finite sum, so everything is exact.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cascade::Cascade;
use crate::chevalley::{ChevalleyTable, LieElement, SignedRoot};
use crate::error::{Error, Result};
use crate::linalg::{self, q, q_to_string, Q};
use crate::par;
use crate::report::{CheckResult, VerificationReport, Witness};
use crate::rootsys::RootSystem;

/// `Σ c_φ e_{-φ}`, keyed by positive-root index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NMinusElement {
    coeffs: BTreeMap<usize, Q>,
}

impl NMinusElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut z = Self::zero();
        for (k, c) in pairs {
            z.add_term(k, c);
        }
        z
    }

    pub fn add_term(&mut self, k: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn get(&self, k: usize) -> Q {
        self.coeffs.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &Q)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_pairs(self.coeffs.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &o.coeffs {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn to_lie(&self, rank: usize) -> LieElement {
        let mut x = LieElement::zero(rank);
        for (k, v) in &self.coeffs {
            x.add_root(SignedRoot::neg(*k), v.clone());
        }
        x
    }

    /// Dense coordinates over all positive roots.
    pub fn dense(&self, np: usize) -> Vec<Q> {
        (0..np).map(|k| self.get(k)).collect()
    }

    pub fn to_json(&self, rs: &RootSystem) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|(k, v)| json!({"root": rs.root(*k).0, "coeff": q_to_string(v)}))
                .collect(),
        )
    }
}

/// `t = Σ_{β∈B} t_β e_{-β}` with every `t_β ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossSectionPoint {
    /// `(β index, t_β)` in cascade order
    t: Vec<(usize, Q)>,
}

impl CrossSectionPoint {
    pub fn new(cascade: &Cascade, t: Vec<Q>) -> Result<Self> {
        if t.len() != cascade.m() {
            return Err(Error::Shape {
                expected: cascade.m(),
                got: t.len(),
            });
        }
        if t.iter().any(Zero::is_zero) {
            return Err(Error::NotInNilradical(
                "cross-section coordinates must all be nonzero".into(),
            ));
        }
        Ok(Self {
            t: cascade.betas().into_iter().zip(t).collect(),
        })
    }

    pub fn coords(&self) -> Vec<Q> {
        self.t.iter().map(|(_, v)| v.clone()).collect()
    }

    pub fn t(&self, beta: usize) -> Option<&Q> {
        self.t.iter().find(|(b, _)| *b == beta).map(|(_, v)| v)
    }

    pub fn to_nminus(&self) -> NMinusElement {
        NMinusElement::from_pairs(self.t.iter().cloned())
    }
}

/// `u = exp(log)` with `log ∈ n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    log: LieElement,
}

impl GroupElement {
    pub fn new(log: LieElement) -> Result<Self> {
        if !log.in_nilradical() {
            return Err(Error::NotInNilradical(log.to_string()));
        }
        Ok(Self { log })
    }

    pub fn identity(rank: usize) -> Self {
        Self {
            log: LieElement::zero(rank),
        }
    }

    /// `exp(Σ c_φ e_φ)`.
    pub fn from_coeffs(rank: usize, coeffs: impl IntoIterator<Item = (usize, Q)>) -> Self {
        let mut log = LieElement::zero(rank);
        for (k, c) in coeffs {
            log.add_root(SignedRoot::pos(k), c);
        }
        Self { log }
    }

    pub fn log(&self) -> &LieElement {
        &self.log
    }
}

/// Diagonal torus element: `a · e_φ = λ^φ e_φ` with `λ^φ = Π λ_i^{n_i(φ)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement {
    pub scalars: Vec<Q>,
}

impl TorusElement {
    pub fn character(&self, coeffs: &[i64]) -> Q {
        let mut acc = Q::one();
        for (l, &n) in self.scalars.iter().zip(coeffs) {
            let p = num_traits::pow(l.clone(), n.unsigned_abs() as usize);
            acc *= if n >= 0 { p } else { p.recip() };
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        Self {
            scalars: self.scalars.iter().map(|l| l.recip()).collect(),
        }
    }

    pub fn act_nminus(&self, rs: &RootSystem, z: &NMinusElement) -> NMinusElement {
        NMinusElement::from_pairs(z.iter().map(|(k, v)| (*k, v / self.character(&rs.root(*k).0))))
    }

    /// `a u a⁻¹`, i.e. `exp(Ad a (log))`.
    pub fn conjugate(&self, rs: &RootSystem, u: &GroupElement) -> GroupElement {
        let mut log = LieElement::zero(rs.rank());
        for (r, v) in &u.log.roots {
            log.add_root(*r, v * self.character(&rs.root(r.index).0));
        }
        GroupElement { log }
    }
}

/// Φ: drop the Cartan part and the positive root vectors.
pub fn project_nminus(x: &LieElement) -> NMinusElement {
    NMinusElement::from_pairs(
        x.roots
            .iter()
            .filter(|(r, _)| r.negative)
            .map(|(r, v)| (r.index, v.clone())),
    )
}

pub fn coad(tbl: &ChevalleyTable, v: &LieElement, z: &NMinusElement) -> Result<NMinusElement> {
    if !v.in_nilradical() {
        return Err(Error::NotInNilradical(v.to_string()));
    }
    let zl = z.to_lie(tbl.root_system().rank());
    Ok(project_nminus(&tbl.bracket(v, &zl)))
}

/// `Ad exp(log) (x) = Σ_k (ad log)^k x / k!`.
pub fn ad_exp(tbl: &ChevalleyTable, log: &LieElement, x: &LieElement) -> LieElement {
    let mut total = x.clone();
    let mut term = x.clone();
    let mut k = 1i64;
    loop {
        term = tbl.bracket(log, &term);
        if term.is_zero() {
            return total;
        }
        term = term.scale(&Q::new(1.into(), k.into()));
        total.add_assign_scaled(&term, &Q::one());
        k += 1;
    }
}

pub fn coad_group(tbl: &ChevalleyTable, u: &GroupElement, z: &NMinusElement) -> NMinusElement {
    coad_group_word(tbl, std::slice::from_ref(u), z)
}

/// `Φ Ad(u₁) ⋯ Ad(u_k) z`: the product acts through its Ad-series, with one
/// projection at the end.
pub fn coad_group_word(tbl: &ChevalleyTable, word: &[GroupElement], z: &NMinusElement) -> NMinusElement {
    let mut x = z.to_lie(tbl.root_system().rank());
    for u in word.iter().rev() {
        x = ad_exp(tbl, &u.log, &x);
    }
    project_nminus(&x)
}

/// Rows indexed by n₋ coordinates ψ, columns by φ ∈ Δ₊:
/// the coefficient of `e_{-ψ}` in `coad e_φ (z)`.
fn coad_matrix(tbl: &ChevalleyTable, z: &NMinusElement) -> Vec<linalg::SparseRow<Q>> {
    let rs = tbl.root_system();
    let np = rs.num_positive();
    let l = rs.rank();
    let mut rows: Vec<linalg::SparseRow<Q>> = vec![Vec::new(); np];
    for phi in 0..np {
        let v = LieElement::root_vector(l, SignedRoot::pos(phi));
        let img = coad(tbl, &v, z).expect("root vector lies in n");
        for (psi, c) in img.iter() {
            rows[*psi].push((phi, c.clone()));
        }
    }
    rows
}

/// Basis of `{v ∈ n : coad v (τ) = 0}` as coordinate vectors over Δ₊.
pub fn isotropy_algebra(tbl: &ChevalleyTable, tau: &NMinusElement) -> Vec<Vec<Q>> {
    let np = tbl.root_system().num_positive();
    linalg::kernel(coad_matrix(tbl, tau), np)
}

pub fn orbit_dimension(tbl: &ChevalleyTable, tau: &NMinusElement) -> usize {
    linalg::rank(coad_matrix(tbl, tau))
}

/// Rank of `coad n (z) + Φ[h, z]`: the tangent space of the B-orbit at z.
pub fn tangent_rank(tbl: &ChevalleyTable, z: &NMinusElement) -> usize {
    let rs = tbl.root_system();
    let np = rs.num_positive();
    let l = rs.rank();
    let zl = z.to_lie(l);
    let mut vectors: Vec<linalg::SparseRow<Q>> = Vec::new();
    for phi in 0..np {
        let v = LieElement::root_vector(l, SignedRoot::pos(phi));
        let img = coad(tbl, &v, z).expect("root vector lies in n");
        vectors.push(img.iter().map(|(k, c)| (*k, c.clone())).collect());
    }
    for i in 0..l {
        let h = LieElement::cartan_element(tbl.coroot(SignedRoot::pos(i)));
        let img = project_nminus(&tbl.bracket(&h, &zl));
        vectors.push(img.iter().map(|(k, c)| (*k, c.clone())).collect());
    }
    linalg::rank(vectors)
}

/// True iff the isotropy algebra at τ is exactly span{e_β : β ∈ B}.
pub fn isotropy_is_cascade_span(tbl: &ChevalleyTable, cascade: &Cascade, tau: &NMinusElement) -> bool {
    let kernel = isotropy_algebra(tbl, tau);
    if kernel.len() != cascade.m() {
        return false;
    }
    // every kernel vector is supported on B; with matching dimension the spans agree
    let betas = cascade.betas();
    kernel
        .iter()
        .all(|v| v.iter().enumerate().all(|(k, c)| c.is_zero() || betas.contains(&k)))
}

/// True iff the B-orbit tangent space at τ is all of n₋ and
/// `dim(N/R) + m = dim n₋`.
pub fn check_open_orbit(tbl: &ChevalleyTable, cascade: &Cascade, tau: &NMinusElement) -> bool {
    let np = tbl.root_system().num_positive();
    tangent_rank(tbl, tau) == np && orbit_dimension(tbl, tau) + cascade.m() == np
}

/// Per-sample generator; sample `i` depends only on `(seed, i)`.
pub fn sample_rng(seed: u64, stream: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(i as u128 * 1024);
    rng
}

/// Uniform on {-3, …, -1, 1, …, 3}.
pub fn nonzero_small(rng: &mut impl Rng) -> i64 {
    let v = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        v
    } else {
        -v
    }
}

pub fn random_cross_section(cascade: &Cascade, rng: &mut impl Rng) -> CrossSectionPoint {
    let t = (0..cascade.m()).map(|_| q(nonzero_small(rng))).collect();
    CrossSectionPoint::new(cascade, t).expect("nonzero coordinates")
}

/// Random nonzero element supported on the given positive roots, with
/// coefficients in {-3, …, 3}; the identity when the support is empty.
pub fn random_supported(rank: usize, support: &[usize], rng: &mut impl Rng) -> GroupElement {
    if support.is_empty() {
        return GroupElement::identity(rank);
    }
    loop {
        let coeffs: Vec<(usize, Q)> = support
            .iter()
            .map(|&k| (k, q(rng.gen_range(-3..=3))))
            .collect();
        if coeffs.iter().any(|(_, c)| !c.is_zero()) {
            return GroupElement::from_coeffs(rank, coeffs);
        }
    }
}

fn s_roots(tbl: &ChevalleyTable, cascade: &Cascade) -> Vec<usize> {
    (0..tbl.root_system().num_positive())
        .filter(|k| !cascade.contains(*k))
        .collect()
}

/// For `0 ≠ v ∈ s`, `coad v (τ)` is nonzero and lies in s₋: exactly on
/// each basis vector of s, then on random combinations.
pub fn check_s_injectivity(
    tbl: &ChevalleyTable,
    cascade: &Cascade,
    tau: &CrossSectionPoint,
    samples: usize,
    seed: u64,
) -> VerificationReport {
    let rs = tbl.root_system();
    let ty = rs.spec.to_string();
    let z = tau.to_nminus();
    let s = s_roots(tbl, cascade);
    let betas = cascade.betas();
    let bad = |img: &NMinusElement| img.is_zero() || img.support().iter().any(|k| betas.contains(k));

    let mut w = Witness::new();
    for &phi in &s {
        let v = LieElement::root_vector(rs.rank(), SignedRoot::pos(phi));
        let img = coad(tbl, &v, &z).expect("in n");
        w.ensure(!bad(&img), || json!({"v": rs.root(phi).0, "image": img.to_json(rs)}));
    }
    let mut report = VerificationReport::new();
    report.push(CheckResult::exact("s-injectivity-basis", &ty, w.into_inner()));

    // with s = 0 there is nothing to sample
    let drawn = if s.is_empty() { 0 } else { samples };
    let failures: Vec<Option<Value>> = par::map_indices(drawn, |i| {
        let mut rng = sample_rng(seed, 1, i);
        let u = random_supported(rs.rank(), &s, &mut rng);
        let img = coad(tbl, u.log(), &z).expect("in n");
        bad(&img).then(|| json!({"sample": i, "v": u.log().to_string(), "image": img.to_json(rs)}))
    });
    report.push(CheckResult::sampled(
        "s-injectivity-sampled",
        &ty,
        seed,
        drawn,
        failures.into_iter().flatten().next(),
    ));
    report
}

/// `O_τ ∩ r₋^× = {τ}` on samples: group elements with log in s move τ off
/// r₋, those with log in r fix τ.
pub fn check_cross_section(
    tbl: &ChevalleyTable,
    cascade: &Cascade,
    tau: &CrossSectionPoint,
    samples: usize,
    seed: u64,
) -> VerificationReport {
    let rs = tbl.root_system();
    let ty = rs.spec.to_string();
    let z = tau.to_nminus();
    let s = s_roots(tbl, cascade);
    let betas = cascade.betas();
    let mut report = VerificationReport::new();

    let drawn = if s.is_empty() { 0 } else { samples };
    let failures: Vec<Option<Value>> = par::map_indices(drawn, |i| {
        let mut rng = sample_rng(seed, 2, i);
        let u = random_supported(rs.rank(), &s, &mut rng);
        let img = coad_group(tbl, &u, &z);
        let off_r = img.support().iter().any(|k| !betas.contains(k));
        (!off_r).then(|| json!({"sample": i, "log": u.log().to_string(), "image": img.to_json(rs)}))
    });
    report.push(CheckResult::sampled(
        "cross-section-moves-off",
        &ty,
        seed,
        drawn,
        failures.into_iter().flatten().next(),
    ));

    let failures: Vec<Option<Value>> = par::map_indices(samples, |i| {
        let mut rng = sample_rng(seed, 3, i);
        let u = random_supported(rs.rank(), &betas, &mut rng);
        let img = coad_group(tbl, &u, &z);
        (img != z).then(|| json!({"sample": i, "log": u.log().to_string(), "image": img.to_json(rs)}))
    });
    report.push(CheckResult::sampled(
        "cross-section-fixed-by-r",
        &ty,
        seed,
        samples,
        failures.into_iter().flatten().next(),
    ));
    report
}

/// `Φ[[v,w],z] = Φ[v,Φ[w,z]] − Φ[w,Φ[v,z]]` on all basis triples.
pub fn check_commutator_consistency(tbl: &ChevalleyTable) -> CheckResult {
    let rs = tbl.root_system();
    let np = rs.num_positive();
    let l = rs.rank();
    let e = |k: usize| LieElement::root_vector(l, SignedRoot::pos(k));
    let rows: Vec<Option<Value>> = par::map_indices(np, |a| {
        for b in 0..np {
            let vw = tbl.bracket(&e(a), &e(b));
            for c in 0..np {
                let z = NMinusElement::from_pairs([(c, Q::one())]);
                let lhs = coad(tbl, &vw, &z).expect("in n");
                let wz = coad(tbl, &e(b), &z).expect("in n");
                let vz = coad(tbl, &e(a), &z).expect("in n");
                let rhs = coad(tbl, &e(a), &wz)
                    .expect("in n")
                    .add(&coad(tbl, &e(b), &vz).expect("in n").scale(&q(-1)));
                if lhs != rhs {
                    return Some(json!({"v": rs.root(a).0, "w": rs.root(b).0, "z": rs.root(c).0}));
                }
            }
        }
        None
    });
    CheckResult::exact("coad-commutator", &rs.spec.to_string(), rows.into_iter().flatten().next())
        .with_detail(json!({"triples": np * np * np}))
}

fn random_nminus(np: usize, rng: &mut impl Rng) -> NMinusElement {
    NMinusElement::from_pairs((0..np).map(|k| (k, q(rng.gen_range(-3..=3)))))
}

/// `Coad(u u′) z = Coad u (Coad u′ z)`, the left side through the product
/// of Ad-series with a single projection.
pub fn check_group_law(tbl: &ChevalleyTable, samples: usize, seed: u64) -> CheckResult {
    let rs = tbl.root_system();
    let all: Vec<usize> = (0..rs.num_positive()).collect();
    let failures: Vec<Option<Value>> = par::map_indices(samples, |i| {
        let mut rng = sample_rng(seed, 4, i);
        let u = random_supported(rs.rank(), &all, &mut rng);
        let v = random_supported(rs.rank(), &all, &mut rng);
        let z = random_nminus(rs.num_positive(), &mut rng);
        let lhs = coad_group_word(tbl, &[u.clone(), v.clone()], &z);
        let rhs = coad_group(tbl, &u, &coad_group(tbl, &v, &z));
        (lhs != rhs).then(|| json!({"sample": i, "u": u.log().to_string(), "v": v.log().to_string()}))
    });
    CheckResult::sampled("group-law", &rs.spec.to_string(), seed, samples, failures.into_iter().flatten().next())
}

/// `Coad u (a·z) = a·Coad(a⁻¹ u a)(z)` for diagonal torus elements `a`.
pub fn check_h_equivariance(tbl: &ChevalleyTable, samples: usize, seed: u64) -> CheckResult {
    let rs = tbl.root_system();
    let all: Vec<usize> = (0..rs.num_positive()).collect();
    let failures: Vec<Option<Value>> = par::map_indices(samples, |i| {
        let mut rng = sample_rng(seed, 5, i);
        let a = TorusElement {
            scalars: (0..rs.rank()).map(|_| q(nonzero_small(&mut rng))).collect(),
        };
        let u = random_supported(rs.rank(), &all, &mut rng);
        let z = random_nminus(rs.num_positive(), &mut rng);
        let lhs = coad_group(tbl, &u, &a.act_nminus(rs, &z));
        let inner = a.inverse().conjugate(rs, &u);
        let rhs = a.act_nminus(rs, &coad_group(tbl, &inner, &z));
        (lhs != rhs).then(|| json!({"sample": i, "u": u.log().to_string()}))
    });
    CheckResult::sampled("h-equivariance", &rs.spec.to_string(), seed, samples, failures.into_iter().flatten().next())
}

/// Points of r₋ with one coordinate zeroed: the B-orbit tangent space is
/// proper, the N-orbit is no larger than at r₋^×, and strictly smaller
/// when the zeroed root has a layer of size > 1.
pub fn check_degenerate_points(tbl: &ChevalleyTable, cascade: &Cascade, samples: usize, seed: u64) -> CheckResult {
    let rs = tbl.root_system();
    let np = rs.num_positive();
    if cascade.m() == 0 {
        return CheckResult::sampled("degenerate-points", &rs.spec.to_string(), seed, 0, None);
    }
    let generic = np - cascade.m();
    let failures: Vec<Option<Value>> = par::map_indices(samples, |i| {
        let mut rng = sample_rng(seed, 6, i);
        let drop = rng.gen_range(0..cascade.m());
        let z = NMinusElement::from_pairs(
            cascade
                .nodes
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != drop)
                .map(|(_, n)| (n.beta, q(nonzero_small(&mut rng)))),
        );
        let rank = tangent_rank(tbl, &z);
        let dim = orbit_dimension(tbl, &z);
        let wide = cascade.nodes[drop].layer.len() > 1;
        let ok = rank < np && dim <= generic && (!wide || dim < generic);
        (!ok).then(|| {
            json!({"sample": i, "zeroed": rs.root(cascade.nodes[drop].beta).0,
                   "tangent_rank": rank, "orbit_dimension": dim})
        })
    });
    CheckResult::sampled("degenerate-points", &rs.spec.to_string(), seed, samples, failures.into_iter().flatten().next())
}
