//! Weight theory of S(n)^N: the cascade lattice Λ(B), the ratios r_β, the
//! dominant semigroup and its free generators, and the invariant
//! polynomials themselves as joint kernels of the simple-root derivations.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cascade::Cascade;
use crate::chevalley::{ChevalleyTable, SignedRoot};
use crate::coadjoint::{coad_group, nonzero_small, random_supported, sample_rng, CrossSectionPoint, NMinusElement};
use crate::error::{Error, Result};
use crate::linalg::{self, q, q_to_i64, q_to_string, Fp, SparseRow, Q};
use crate::par;
use crate::report::{CheckResult, Evidence, Witness};
use crate::rootsys::{weight_strings, Root, RootSystem, Weight};

/// A point `Σ c_i β_i` of Λ(B).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CascadeLatticePoint {
    pub coords: Vec<i64>,
}

impl CascadeLatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn unit(m: usize, i: usize) -> Self {
        let mut coords = vec![0; m];
        coords[i] = 1;
        Self { coords }
    }

    /// Coordinates over the simple roots.
    pub fn simple_coords(&self, rs: &RootSystem, cascade: &Cascade) -> Vec<i64> {
        let mut v = vec![0; rs.rank()];
        for (c, b) in self.coords.iter().zip(cascade.betas()) {
            for (x, y) in v.iter_mut().zip(&rs.root(b).0) {
                *x += c * y;
            }
        }
        v
    }

    pub fn weight(&self, rs: &RootSystem, cascade: &Cascade) -> Weight {
        Weight::from_ints(&self.simple_coords(rs, cascade))
    }

    /// `r(ν)`: with B orthogonal, `r_{β_i}(ν) = c_i`.
    pub fn degree(&self) -> i64 {
        self.coords.iter().sum()
    }

    pub fn is_dominant(&self, rs: &RootSystem, cascade: &Cascade) -> bool {
        rs.is_dominant(&self.weight(rs, cascade))
    }
}

/// γ: Δ₊ → Z₊, dense over the positive roots.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zero(np: usize) -> Self {
        Self(vec![0; np])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `γ^root = Σ γ(φ) φ`.
    pub fn root_weight(&self, rs: &RootSystem) -> Vec<i64> {
        let mut v = vec![0; rs.rank()];
        for (k, &e) in self.0.iter().enumerate() {
            if e > 0 {
                for (x, y) in v.iter_mut().zip(&rs.root(k).0) {
                    *x += e as i64 * y;
                }
            }
        }
        v
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn to_json(&self, rs: &RootSystem) -> Value {
        Value::Array(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| json!({"root": rs.root(k).0, "power": e}))
                .collect(),
        )
    }
}

pub type Poly = BTreeMap<ExponentVector, Q>;

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ga, ca) in a {
        for (gb, cb) in b {
            let e = out.entry(ga.add(gb)).or_insert_with(Q::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `Some(c)` with `a = c·b`, if the two are proportional and nonzero.
pub fn proportionality(a: &Poly, b: &Poly) -> Option<Q> {
    let (g, cb) = b.iter().next()?;
    let c = a.get(g)? / cb;
    (a.len() == b.len() && b.iter().all(|(g, v)| a.get(g) == Some(&(v * &c)))).then_some(c)
}

/// `ξ_ν = Σ s_γ z_γ`, normalized so the cascade monomial has coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyInvariant {
    pub weight: CascadeLatticePoint,
    pub degree: u32,
    pub terms: Poly,
}

impl PolyInvariant {
    /// Value at `z ∈ n₋` under `⟨e_φ, e_{−φ}⟩ = scale(φ)`.
    pub fn evaluate_with(&self, z: &NMinusElement, scale: impl Fn(usize) -> Q) -> Q {
        let np = self.terms.keys().next().map_or(0, |g| g.0.len());
        let vals: Vec<Q> = (0..np).map(|k| scale(k) * z.get(k)).collect();
        let mut total = Q::zero();
        for (g, s) in &self.terms {
            let mut term = s.clone();
            for (k, &e) in g.0.iter().enumerate() {
                if e > 0 {
                    term *= num_traits::pow(vals[k].clone(), e as usize);
                }
            }
            total += term;
        }
        total
    }

    /// Value at `z` under the Killing-compatible pairing `⟨e_φ, e_{−φ}⟩ = 2/(φ,φ)`.
    pub fn evaluate(&self, rs: &RootSystem, z: &NMinusElement) -> Q {
        self.evaluate_with(z, |k| rs.pairing_scale(k))
    }

    pub fn to_json(&self, rs: &RootSystem) -> Value {
        json!({
            "weight": self.weight.coords,
            "degree": self.degree,
            "terms": self.terms.iter().map(|(g, c)| json!({
                "exponents": g.to_json(rs),
                "coefficient": q_to_string(c),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The free generators μ₁, …, μ_m of the dominant part of Λ(B).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    pub mus: Vec<CascadeLatticePoint>,
    /// `transition[i][j]` is the β_i-coordinate of μ_j
    pub transition: Vec<Vec<i64>>,
    pub det: i64,
}

impl GeneratorSet {
    pub fn degrees(&self) -> Vec<i64> {
        self.mus.iter().map(CascadeLatticePoint::degree).collect()
    }
}

pub fn r_coeff(rs: &RootSystem, nu: &Weight, beta: &Root) -> Result<Q> {
    let b = beta.to_weight();
    Ok(rs.inner(nu, &b)? / rs.inner(&b, &b)?)
}

pub fn r_total(rs: &RootSystem, cascade: &Cascade, nu: &Weight) -> Result<Q> {
    let mut total = Q::zero();
    for b in cascade.beta_roots(rs) {
        total += r_coeff(rs, nu, &b)?;
    }
    Ok(total)
}

/// Coordinates of ν over B when ν ∈ Λ(B). Membership in the rational span
/// is decided twice, by expansion and by `w₀(ν) = −ν`.
pub fn in_cascade_span(rs: &RootSystem, cascade: &Cascade, nu: &Weight) -> Result<Option<CascadeLatticePoint>> {
    let betas = cascade.beta_roots(rs);
    let coeffs = betas
        .iter()
        .map(|b| r_coeff(rs, nu, b))
        .collect::<Result<Vec<Q>>>()?;
    let mut recon = Weight::zero(rs.rank());
    for (c, b) in coeffs.iter().zip(&betas) {
        recon = recon.add(&b.to_weight().scale(c));
    }
    let by_expansion = recon == *nu;
    let by_w0 = rs.longest_element().apply_weight(nu) == nu.neg();
    if by_expansion != by_w0 {
        return Err(Error::SpanMismatch(weight_strings(nu)));
    }
    if !by_expansion {
        return Ok(None);
    }
    Ok(coeffs
        .iter()
        .map(q_to_i64)
        .collect::<Option<Vec<i64>>>()
        .map(CascadeLatticePoint::new))
}

/// Dominant points of Λ(B) with `r(ν) ≤ cap`, by degree then descending
/// coordinates. Dominant points have nonnegative coordinates.
pub fn dominant_points(rs: &RootSystem, cascade: &Cascade, cap: u32) -> Vec<CascadeLatticePoint> {
    let m = cascade.m();
    let mut out = Vec::new();
    let mut cur = vec![0i64; m];
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur[i] = c;
            rec(i + 1, left - c, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, cap as i64, &mut cur, &mut out);
    let mut pts: Vec<CascadeLatticePoint> = out
        .into_iter()
        .map(CascadeLatticePoint::new)
        .filter(|p| p.is_dominant(rs, cascade))
        .collect();
    pts.sort_by(|a, b| a.degree().cmp(&b.degree()).then(b.coords.cmp(&a.coords)));
    pts
}

/// Indecomposable dominant points up to `r_cap`, which must number exactly m.
pub fn semigroup_generators(rs: &RootSystem, cascade: &Cascade, r_cap: u32) -> Result<GeneratorSet> {
    let m = cascade.m();
    let pts = dominant_points(rs, cascade, r_cap);
    let dominant: std::collections::HashSet<&Vec<i64>> = pts.iter().map(|p| &p.coords).collect();
    let mus: Vec<CascadeLatticePoint> = pts
        .iter()
        .filter(|p| p.degree() > 0)
        .filter(|p| {
            !pts.iter().any(|s| {
                s.degree() > 0
                    && s.degree() < p.degree()
                    && s.coords.iter().zip(&p.coords).all(|(a, b)| a <= b)
                    && dominant.contains(&p.coords.iter().zip(&s.coords).map(|(a, b)| a - b).collect::<Vec<_>>())
            })
        })
        .cloned()
        .collect();
    if mus.len() != m {
        return Err(Error::CapExceeded {
            cap: r_cap,
            found: mus.len(),
            expected: m,
        });
    }
    let transition: Vec<Vec<i64>> = (0..m).map(|i| mus.iter().map(|mu| mu.coords[i]).collect()).collect();
    let det = linalg::det_i64(&transition);
    let gens = GeneratorSet { mus, transition, det };
    if det.abs() == 1 {
        for p in &pts {
            let d = laurent_coordinates(&gens, p)?;
            if d.iter().any(|&x| x < 0) {
                return Err(Error::NotFree(p.coords.clone()));
            }
        }
    }
    Ok(gens)
}

/// The unique integer `d` with `transition · d = coords(ν)`.
pub fn laurent_coordinates(gens: &GeneratorSet, nu: &CascadeLatticePoint) -> Result<Vec<i64>> {
    let a: Vec<Vec<Q>> = gens.transition.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
    let b: Vec<Q> = nu.coords.iter().map(|&v| q(v)).collect();
    let d = linalg::solve(&a, &b).ok_or(Error::Singular)?;
    d.iter().map(q_to_i64).collect::<Option<Vec<_>>>().ok_or(Error::Singular)
}

/// All γ with `γ^root = target` and, if given, `d(γ) = degree`.
pub fn monomials(rs: &RootSystem, target: &[i64], degree: Option<u32>) -> Vec<ExponentVector> {
    let np = rs.num_positive();
    let l = rs.rank();
    if target.iter().any(|&x| x < 0) {
        return Vec::new();
    }
    let roots: Vec<&[i64]> = (0..np).map(|k| rs.root(k).0.as_slice()).collect();
    let heights: Vec<i64> = roots.iter().map(|r| r.iter().sum()).collect();

    struct Walk<'a> {
        roots: Vec<&'a [i64]>,
        heights: Vec<i64>,
        l: usize,
        want: Option<u32>,
        out: Vec<ExponentVector>,
    }

    fn rec(w: &mut Walk, k: usize, rem: &mut Vec<i64>, cur: &mut Vec<u32>, deg: u32) {
        let h: i64 = rem.iter().sum();
        if k == w.l {
            // simple roots take up whatever is left
            let total = deg as i64 + h;
            if w.want.is_none_or(|d| d as i64 == total) {
                let mut g = cur.clone();
                for i in 0..w.l {
                    g[i] = rem[i] as u32;
                }
                w.out.push(ExponentVector(g));
            }
            return;
        }
        if let Some(d) = w.want {
            let hmax = w.heights[k - 1];
            let lower = (h + hmax - 1) / hmax;
            if deg as i64 + lower > d as i64 || ((deg as i64) + h) < d as i64 {
                return;
            }
        }
        let phi = w.roots[k - 1];
        let max = phi
            .iter()
            .zip(rem.iter())
            .filter(|(a, _)| **a > 0)
            .map(|(a, r)| r / a)
            .min()
            .unwrap_or(0);
        for e in 0..=max {
            if e > 0 {
                for (r, a) in rem.iter_mut().zip(phi) {
                    *r -= a;
                }
            }
            cur[k - 1] = e as u32;
            rec(w, k - 1, rem, cur, deg + e as u32);
        }
        for (r, a) in rem.iter_mut().zip(phi) {
            *r += a * max;
        }
        cur[k - 1] = 0;
    }

    let mut w = Walk {
        roots,
        heights,
        l,
        want: degree,
        out: Vec::new(),
    };
    let mut rem = target.to_vec();
    let mut cur = vec![0u32; np];
    rec(&mut w, np, &mut rem, &mut cur, 0);
    w.out.sort();
    w.out
}

/// Γ(ν): monomials of weight ν and degree r(ν).
pub fn monomial_support(rs: &RootSystem, cascade: &Cascade, nu: &CascadeLatticePoint) -> Result<Vec<ExponentVector>> {
    if !nu.is_dominant(rs, cascade) || nu.coords.iter().any(|&c| c < 0) {
        return Err(Error::NotDominantLatticePoint(weight_strings(&nu.weight(rs, cascade))));
    }
    Ok(monomials(rs, &nu.simple_coords(rs, cascade), Some(nu.degree() as u32)))
}

pub fn cascade_monomial(cascade: &Cascade, np: usize, nu: &CascadeLatticePoint) -> ExponentVector {
    let mut g = ExponentVector::zero(np);
    for (b, &c) in cascade.betas().into_iter().zip(&nu.coords) {
        g.0[b] = c as u32;
    }
    g
}

/// Matrix of `γ ↦ (e_α · z_γ)_α` over the given monomials, one row per
/// (α, target monomial). `e_α` acts as the derivation extending `ad e_α`.
fn derivation_rows<F: linalg::Field>(tbl: &ChevalleyTable, cols: &[ExponentVector], conv: impl Fn(i64) -> F) -> Vec<SparseRow<F>> {
    let rs = tbl.root_system();
    let np = rs.num_positive();
    let mut index: HashMap<(usize, ExponentVector), usize> = HashMap::new();
    let mut rows: Vec<SparseRow<F>> = Vec::new();
    for (j, g) in cols.iter().enumerate() {
        for a in 0..rs.rank() {
            for phi in 0..np {
                if g.0[phi] == 0 {
                    continue;
                }
                let Some(s) = tbl.sum(SignedRoot::pos(a), SignedRoot::pos(phi)) else {
                    continue;
                };
                let c = g.0[phi] as i64 * tbl.n(SignedRoot::pos(a), SignedRoot::pos(phi));
                let mut t = g.clone();
                t.0[phi] -= 1;
                t.0[s.index] += 1;
                let next = rows.len();
                let r = *index.entry((a, t)).or_insert(next);
                if r == next {
                    rows.push(Vec::new());
                }
                rows[r].push((j, conv(c)));
            }
        }
    }
    rows
}

fn kernel_q(tbl: &ChevalleyTable, cols: &[ExponentVector]) -> Vec<Vec<Q>> {
    linalg::kernel(derivation_rows(tbl, cols, q), cols.len())
}

/// Kernel dimension, via rank mod p when that already shows it is zero.
fn kernel_dim(tbl: &ChevalleyTable, cols: &[ExponentVector]) -> usize {
    let rank_p = linalg::rank(derivation_rows(tbl, cols, Fp::from_i64));
    if rank_p == cols.len() {
        0
    } else {
        kernel_q(tbl, cols).len()
    }
}

/// The unique (up to scalar) invariant of weight ν, in degree r(ν).
pub fn compute_invariant(tbl: &ChevalleyTable, cascade: &Cascade, nu: &CascadeLatticePoint) -> Result<PolyInvariant> {
    let rs = tbl.root_system();
    let cols = monomial_support(rs, cascade, nu)?;
    let kernel = kernel_q(tbl, &cols);
    if kernel.len() != 1 {
        return Err(Error::TheoremViolation {
            weight: weight_strings(&nu.weight(rs, cascade)),
            dim: kernel.len(),
        });
    }
    let lead = cascade_monomial(cascade, rs.num_positive(), nu);
    let pos = cols.iter().position(|g| *g == lead);
    let s = pos.map(|p| kernel[0][p].clone()).filter(|s| !s.is_zero());
    let Some(s) = s else {
        return Err(Error::LeadingCoefficientZero(weight_strings(&nu.weight(rs, cascade))));
    };
    let terms: Poly = cols
        .into_iter()
        .zip(&kernel[0])
        .filter(|(_, c)| !c.is_zero())
        .map(|(g, c)| (g, c / &s))
        .collect();
    Ok(PolyInvariant {
        weight: nu.clone(),
        degree: nu.degree() as u32,
        terms,
    })
}

/// Invariant multiplicity of weight ν in each degree that has monomials.
pub fn multiplicity_by_degree(tbl: &ChevalleyTable, weight: &[i64]) -> BTreeMap<u32, usize> {
    let mut by_degree: BTreeMap<u32, Vec<ExponentVector>> = BTreeMap::new();
    for g in monomials(tbl.root_system(), weight, None) {
        by_degree.entry(g.degree()).or_default().push(g);
    }
    by_degree
        .into_iter()
        .map(|(d, cols)| (d, kernel_dim(tbl, &cols)))
        .collect()
}

/// Total invariant multiplicity of ν across all of S(n).
pub fn all_weight_multiplicity(tbl: &ChevalleyTable, weight: &[i64]) -> usize {
    multiplicity_by_degree(tbl, weight).values().sum()
}

/// Product `Π ξ_{μ_i}^{d_i}`.
pub fn generator_product(gen_invs: &[PolyInvariant], d: &[i64]) -> Poly {
    let np = gen_invs[0].terms.keys().next().map_or(0, |g| g.0.len());
    let mut acc: Poly = [(ExponentVector::zero(np), Q::one())].into_iter().collect();
    for (inv, &k) in gen_invs.iter().zip(d) {
        for _ in 0..k {
            acc = poly_mul(&acc, &inv.terms);
        }
    }
    acc
}

/// `ξ_ν ∝ Π ξ_{μ_i}^{d_i}` with `d` from the transition matrix.
pub fn factorization_check(gens: &GeneratorSet, gen_invs: &[PolyInvariant], xi: &PolyInvariant) -> Result<bool> {
    let d = laurent_coordinates(gens, &xi.weight)?;
    if d.iter().any(|&x| x < 0) {
        return Ok(false);
    }
    Ok(proportionality(&xi.terms, &generator_product(gen_invs, &d)).is_some())
}

/// ξ_ν at a cross-section point by direct substitution.
pub fn evaluate_at_cross_section(rs: &RootSystem, inv: &PolyInvariant, t: &CrossSectionPoint) -> Q {
    inv.evaluate(rs, &t.to_nminus())
}

/// `s_{γ_r} Π (κ_β t_β)^{r_β(ν)}`, with κ_β the pairing scale of β.
pub fn cross_section_formula(rs: &RootSystem, cascade: &Cascade, inv: &PolyInvariant, t: &CrossSectionPoint) -> Q {
    let lead = cascade_monomial(cascade, rs.num_positive(), &inv.weight);
    let mut v = inv.terms.get(&lead).cloned().unwrap_or_else(Q::zero);
    for (b, &c) in cascade.betas().into_iter().zip(&inv.weight.coords) {
        let x = rs.pairing_scale(b) * t.t(b).cloned().unwrap_or_else(Q::zero);
        v *= num_traits::pow(x, c as usize);
    }
    v
}


// checks

/// Everything computed for the dominant points of one type.
pub struct InvariantData {
    pub gens: GeneratorSet,
    pub points: Vec<CascadeLatticePoint>,
    pub invariants: Vec<Result<PolyInvariant>>,
    pub gen_invs: Vec<PolyInvariant>,
}

pub fn compute_data(tbl: &ChevalleyTable, cascade: &Cascade, r_cap: u32) -> Result<InvariantData> {
    let rs = tbl.root_system();
    let gens = semigroup_generators(rs, cascade, r_cap)?;
    let points: Vec<CascadeLatticePoint> = dominant_points(rs, cascade, r_cap)
        .into_iter()
        .filter(|p| p.degree() > 0)
        .collect();
    let invariants = par::map(&points, |p| compute_invariant(tbl, cascade, p));
    let gen_invs = gens
        .mus
        .iter()
        .map(|mu| {
            let k = points.iter().position(|p| p == mu).expect("generators are enumerated points");
            match &invariants[k] {
                Ok(inv) => Ok(inv.clone()),
                Err(_) => compute_invariant(tbl, cascade, mu),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantData {
        gens,
        points,
        invariants,
        gen_invs,
    })
}

pub fn check_generators(rs: &RootSystem, cascade: &Cascade, r_cap: u32) -> CheckResult {
    let ty = rs.spec.to_string();
    match semigroup_generators(rs, cascade, r_cap) {
        Ok(g) => {
            let witness = (g.det.abs() != 1).then(|| json!({"det": g.det}));
            CheckResult::exact("semigroup-generators", &ty, witness).with_detail(json!({
                "generators": g.mus.iter().map(|m| &m.coords).collect::<Vec<_>>(),
                "degrees": g.degrees(),
                "det": g.det,
                "r_cap": r_cap,
            }))
        }
        Err(e) => CheckResult::exact("semigroup-generators", &ty, Some(json!({"error": e.to_string()}))),
    }
}

/// Multiplicity one in degree r(ν), s_{γ_r} ≠ 0, and no invariant of weight
/// ν in any other degree, for every enumerated dominant point.
pub fn check_multiplicity_and_degree(tbl: &ChevalleyTable, cascade: &Cascade, data: &InvariantData) -> Vec<CheckResult> {
    let rs = tbl.root_system();
    let ty = rs.spec.to_string();
    let mut mult = Witness::new();
    let mut lead = Witness::new();
    for (p, inv) in data.points.iter().zip(&data.invariants) {
        match inv {
            Ok(_) => {}
            Err(Error::LeadingCoefficientZero(_)) => lead.fail(json!({"weight": p.coords})),
            Err(e) => mult.fail(json!({"weight": p.coords, "error": e.to_string()})),
        }
    }
    let by_degree = par::map(&data.points, |p| multiplicity_by_degree(tbl, &p.simple_coords(rs, cascade)));
    let mut degree = Witness::new();
    for (p, dims) in data.points.iter().zip(&by_degree) {
        let r = p.degree() as u32;
        let ok = dims.iter().all(|(&d, &k)| if d == r { k == 1 } else { k == 0 });
        degree.ensure(ok && dims.contains_key(&r), || {
            json!({"weight": p.coords, "multiplicities": dims.iter().map(|(d, k)| json!([d, k])).collect::<Vec<_>>()})
        });
    }
    let n = json!({"weights": data.points.len()});
    vec![
        CheckResult::exact("multiplicity-one", &ty, mult.into_inner()).with_detail(n.clone()),
        CheckResult::exact("degree-formula", &ty, degree.into_inner()).with_detail(n.clone()),
        CheckResult::exact("cascade-coefficient", &ty, lead.into_inner()).with_detail(n),
    ]
}

pub fn check_factorization(tbl: &ChevalleyTable, data: &InvariantData) -> CheckResult {
    let ty = tbl.root_system().spec.to_string();
    let mut w = Witness::new();
    let mut composite = 0;
    for inv in data.invariants.iter().flatten() {
        if data.gens.mus.contains(&inv.weight) {
            continue;
        }
        composite += 1;
        match factorization_check(&data.gens, &data.gen_invs, inv) {
            Ok(true) => {}
            Ok(false) => w.fail(json!({"weight": inv.weight.coords})),
            Err(e) => w.fail(json!({"weight": inv.weight.coords, "error": e.to_string()})),
        }
    }
    CheckResult::exact("factorization", &ty, w.into_inner()).with_detail(json!({"composite_weights": composite}))
}

/// Direct substitution at seeded cross-section points agrees with the
/// cascade-monomial formula and is nonzero.
pub fn check_cross_section_values(tbl: &ChevalleyTable, cascade: &Cascade, data: &InvariantData, samples: usize, seed: u64) -> CheckResult {
    let rs = tbl.root_system();
    let failures: Vec<Option<Value>> = par::map_indices(samples, |i| {
        let mut rng = sample_rng(seed, 7, i);
        let t = crate::coadjoint::random_cross_section(cascade, &mut rng);
        for inv in data.invariants.iter().flatten() {
            let direct = evaluate_at_cross_section(rs, inv, &t);
            let formula = cross_section_formula(rs, cascade, inv, &t);
            if direct != formula || direct.is_zero() {
                return Some(json!({
                    "sample": i, "weight": inv.weight.coords,
                    "t": t.coords().iter().map(q_to_string).collect::<Vec<_>>(),
                    "direct": q_to_string(&direct), "formula": q_to_string(&formula),
                }));
            }
        }
        None
    });
    CheckResult::sampled("cross-section-evaluation", &rs.spec.to_string(), seed, samples, failures.into_iter().flatten().next())
}

/// `ξ_ν(Coad u (z)) = ξ_ν(z)` for seeded `u ∈ N` and `z ∈ n₋`.
pub fn check_n_invariance(tbl: &ChevalleyTable, data: &InvariantData, group_samples: usize, point_samples: usize, seed: u64) -> CheckResult {
    let rs = tbl.root_system();
    let np = rs.num_positive();
    let all: Vec<usize> = (0..np).collect();
    let invs: Vec<&PolyInvariant> = data.invariants.iter().flatten().collect();
    let total = group_samples * point_samples;
    let failures: Vec<Option<Value>> = par::map_indices(total, |k| {
        let (i, j) = (k / point_samples, k % point_samples);
        let u = random_supported(rs.rank(), &all, &mut sample_rng(seed, 8, i));
        let mut rng = sample_rng(seed, 9, j);
        let z = NMinusElement::from_pairs((0..np).map(|k| (k, q(rng.gen_range(-3..=3)))));
        let moved = coad_group(tbl, &u, &z);
        invs.iter()
            .find(|inv| inv.evaluate(rs, &z) != inv.evaluate(rs, &moved))
            .map(|inv| json!({"group_sample": i, "point_sample": j, "weight": inv.weight.coords}))
    });
    CheckResult::sampled("n-invariance", &rs.spec.to_string(), seed, total, failures.into_iter().flatten().next())
        .with_detail(json!({"group_elements": group_samples, "points": point_samples, "invariants": invs.len()}))
}

/// Seeded weights that are non-dominant points of Λ(B) or lie off Λ(B)
/// carry no invariants in any degree.
pub fn check_non_dominant(tbl: &ChevalleyTable, cascade: &Cascade, samples: usize, seed: u64) -> CheckResult {
    let rs = tbl.root_system();
    let m = cascade.m();
    // Some types have no weights of one kind (every root-lattice weight of
    // A1 lies in Λ(B)); such draws give up after a bounded number of tries.
    let outcomes: Vec<(bool, Option<Value>)> = par::map_indices(samples, |i| {
        let mut rng = sample_rng(seed, 10, i);
        let weight = (0..256).find_map(|_| {
            if i % 2 == 0 {
                let p = CascadeLatticePoint::new((0..m).map(|_| rng.gen_range(-1..=3)).collect());
                (!p.is_dominant(rs, cascade)).then(|| p.simple_coords(rs, cascade))
            } else {
                let w: Vec<i64> = (0..rs.rank()).map(|_| rng.gen_range(0..=3)).collect();
                matches!(in_cascade_span(rs, cascade, &Weight::from_ints(&w)), Ok(None)).then_some(w)
            }
        });
        let Some(weight) = weight else {
            return (false, None);
        };
        let mult = all_weight_multiplicity(tbl, &weight);
        (true, (mult != 0).then(|| json!({"sample": i, "weight": weight, "multiplicity": mult})))
    });
    let drawn = outcomes.iter().filter(|(d, _)| *d).count();
    let failures = outcomes.into_iter().map(|(_, f)| f);
    CheckResult::sampled("non-dominant-multiplicity-zero", &rs.spec.to_string(), seed, samples, failures.flatten().next())
        .with_detail(json!({"weights_drawn": drawn}))
}

/// Every point of Λ(B) with `|c_i| ≤ bound` and a nonzero invariant is dominant.
pub fn check_dominance_scan(tbl: &ChevalleyTable, cascade: &Cascade, bound: i64) -> CheckResult {
    let rs = tbl.root_system();
    let m = cascade.m();
    let side = (2 * bound + 1) as usize;
    let count = side.pow(m as u32);
    let failures: Vec<Option<Value>> = par::map_indices(count, |mut k| {
        let coords: Vec<i64> = (0..m)
            .map(|_| {
                let c = (k % side) as i64 - bound;
                k /= side;
                c
            })
            .collect();
        let p = CascadeLatticePoint::new(coords);
        if p.is_dominant(rs, cascade) {
            return None;
        }
        let mult = all_weight_multiplicity(tbl, &p.simple_coords(rs, cascade));
        (mult != 0).then(|| json!({"weight": p.coords, "multiplicity": mult}))
    });
    CheckResult::exact("dominance-scan", &rs.spec.to_string(), failures.into_iter().flatten().next())
        .with_detail(json!({"bound": bound, "points": count}))
}

/// `2 r_β(ν) ∈ Z₊` for seeded dominant weights `Σ a_i ω_i`, `0 ≤ a_i ≤ 3`.
/// No theorem is checked here, only an observation.
pub fn check_half_integer_ratios(rs: &RootSystem, cascade: &Cascade, samples: usize, seed: u64) -> CheckResult {
    let omegas = rs.fundamental_weights();
    let betas = cascade.beta_roots(rs);
    let mut w = Witness::new();
    let mut outside = 0;
    for i in 0..samples {
        let mut rng = sample_rng(seed, 11, i);
        let mut nu = Weight::zero(rs.rank());
        for om in &omegas {
            nu = nu.add(&om.scale(&q(rng.gen_range(0..=3))));
        }
        if !matches!(in_cascade_span(rs, cascade, &nu), Ok(Some(_))) {
            outside += 1;
        }
        for b in &betas {
            let r = r_coeff(rs, &nu, b).expect("shape") * q(2);
            w.ensure(r.is_integer() && !r.is_negative(), || {
                json!({"sample": i, "weight": weight_strings(&nu), "beta": b.0, "r": q_to_string(&(r.clone() / q(2)))})
            });
        }
    }
    CheckResult::sampled("half-integer-ratios", &rs.spec.to_string(), seed, samples, w.into_inner())
        .with_evidence(Evidence::Observed)
        .with_detail(json!({"outside_lattice": outside}))
}

/// `in_cascade_span` agrees with `w₀(ν) = −ν` on seeded weights.
pub fn check_span_criterion(rs: &RootSystem, cascade: &Cascade, samples: usize, seed: u64) -> CheckResult {
    let m = cascade.m();
    let betas = cascade.beta_roots(rs);
    let mut w = Witness::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed, 12, i);
        let nu = if i % 2 == 0 {
            let mut v = Weight::zero(rs.rank());
            for b in &betas {
                v = v.add(&b.to_weight().scale(&q(nonzero_small(&mut rng))));
            }
            v
        } else {
            Weight::from_ints(&(0..rs.rank()).map(|_| rng.gen_range(-3..=3)).collect::<Vec<_>>())
        };
        match in_cascade_span(rs, cascade, &nu) {
            Err(e) => w.fail(json!({"sample": i, "weight": weight_strings(&nu), "error": e.to_string()})),
            Ok(p) => w.ensure(i % 2 == 1 || p.as_ref().is_some_and(|p| p.coords.len() == m), || {
                json!({"sample": i, "weight": weight_strings(&nu)})
            }),
        }
    }
    CheckResult::sampled("span-criterion", &rs.spec.to_string(), seed, samples, w.into_inner())
}

#[derive(Serialize)]
pub struct GeneratorJson {
    pub mu_coords_over_b: Vec<i64>,
    pub mu_coords_over_simples: Vec<i64>,
    pub degree: i64,
}

#[derive(Serialize)]
pub struct InvariantsJson {
    #[serde(rename = "type")]
    pub type_name: String,
    pub m: usize,
    pub cascade: Vec<Vec<i64>>,
    pub generators: Vec<GeneratorJson>,
    pub transition_matrix: Vec<Vec<i64>>,
    pub det: i64,
}

pub fn generators_json(rs: &RootSystem, cascade: &Cascade, gens: &GeneratorSet) -> InvariantsJson {
    InvariantsJson {
        type_name: rs.spec.to_string(),
        m: cascade.m(),
        cascade: cascade.beta_roots(rs).into_iter().map(|r| r.0).collect(),
        generators: gens
            .mus
            .iter()
            .map(|mu| GeneratorJson {
                mu_coords_over_b: mu.coords.clone(),
                mu_coords_over_simples: mu.simple_coords(rs, cascade),
                degree: mu.degree(),
            })
            .collect(),
        transition_matrix: gens.transition.clone(),
        det: gens.det,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::compute_cascade;
    use crate::linalg::q_frac;

    fn setup(s: &str) -> (ChevalleyTable, Cascade) {
        let rs = RootSystem::from_spec_str(s).unwrap();
        let c = compute_cascade(&rs);
        (ChevalleyTable::new(rs), c)
    }

    fn pt(v: &[i64]) -> CascadeLatticePoint {
        CascadeLatticePoint::new(v.to_vec())
    }

    #[test]
    fn ratios() {
        let (t, c) = setup("B2");
        let rs = t.root_system();
        let b = c.beta_roots(rs);
        let theta = b[0].to_weight();
        assert_eq!(r_coeff(rs, &theta, &b[0]).unwrap(), q(1));
        assert_eq!(r_coeff(rs, &theta, &b[1]).unwrap(), q(0));
        assert_eq!(r_total(rs, &c, &b[0].to_weight().add(&b[1].to_weight())).unwrap(), q(2));

        let (t, c) = setup("A3");
        let rs = t.root_system();
        let nu = Weight::from_ints(&[1, 2, 1]);
        assert_eq!(r_coeff(rs, &nu, &Root(vec![0, 1, 0])).unwrap(), q(1));
        assert_eq!(r_total(rs, &c, &nu).unwrap(), q(2));
        assert_eq!(in_cascade_span(rs, &c, &nu).unwrap(), Some(pt(&[1, 1])));

        let (t, c) = setup("A2");
        let rs = t.root_system();
        assert_eq!(r_total(rs, &c, &Weight::from_ints(&[1, 1])).unwrap(), q(1));
        assert_eq!(in_cascade_span(rs, &c, &Weight::from_ints(&[1, 1])).unwrap(), Some(pt(&[1])));
        assert_eq!(in_cascade_span(rs, &c, &Weight::from_ints(&[1, 0])).unwrap(), None);
    }

    #[test]
    fn generators() {
        for (ty, mus, tr) in [
            ("A2", vec![vec![1]], vec![vec![1]]),
            ("B2", vec![vec![1, 0], vec![1, 1]], vec![vec![1, 1], vec![0, 1]]),
            ("A3", vec![vec![1, 0], vec![1, 1]], vec![vec![1, 1], vec![0, 1]]),
        ] {
            let (t, c) = setup(ty);
            let g = semigroup_generators(t.root_system(), &c, 6).unwrap();
            assert_eq!(g.mus.iter().map(|m| m.coords.clone()).collect::<Vec<_>>(), mus, "{ty}");
            assert_eq!(g.transition, tr);
            assert_eq!(g.det, 1);
        }
        let (t, c) = setup("B3");
        assert!(matches!(semigroup_generators(t.root_system(), &c, 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn laurent() {
        let (t, c) = setup("A3");
        let g = semigroup_generators(t.root_system(), &c, 6).unwrap();
        assert_eq!(laurent_coordinates(&g, &pt(&[0, 1])).unwrap(), vec![-1, 1]);
        assert_eq!(laurent_coordinates(&g, &pt(&[1, 1])).unwrap(), vec![0, 1]);
        let (t, c) = setup("A2");
        let g = semigroup_generators(t.root_system(), &c, 6).unwrap();
        assert_eq!(laurent_coordinates(&g, &pt(&[-1])).unwrap(), vec![-1]);
    }

    #[test]
    fn monomial_supports() {
        let (t, c) = setup("A2");
        assert_eq!(monomial_support(t.root_system(), &c, &pt(&[1])).unwrap().len(), 1);
        let (t, c) = setup("A3");
        let rs = t.root_system();
        let ms = monomial_support(rs, &c, &pt(&[1, 1])).unwrap();
        assert_eq!(ms.len(), 2);
        assert!(ms.contains(&cascade_monomial(&c, rs.num_positive(), &pt(&[1, 1]))));
        let (t, c) = setup("B2");
        assert_eq!(monomial_support(t.root_system(), &c, &pt(&[1, 1])).unwrap().len(), 2);
        assert!(monomial_support(t.root_system(), &c, &pt(&[0, 1])).is_err());
    }

    #[test]
    fn invariants_and_evaluation() {
        let (t, c) = setup("A3");
        let rs = t.root_system();
        let xi = compute_invariant(&t, &c, &pt(&[1, 1])).unwrap();
        assert_eq!(xi.terms.len(), 2);
        assert!(xi.terms.values().all(|v| v.abs() == q(1)));
        let tp = CrossSectionPoint::new(&c, vec![q(2), q(-3)]).unwrap();
        assert_eq!(evaluate_at_cross_section(rs, &xi, &tp), q(-6));

        let (t, c) = setup("B2");
        let rs = t.root_system();
        let xi = compute_invariant(&t, &c, &pt(&[1, 1])).unwrap();
        assert_eq!(xi.terms.len(), 2);
        let tp = CrossSectionPoint::new(&c, vec![q(2), q(3)]).unwrap();
        assert_eq!(evaluate_at_cross_section(rs, &xi, &tp), q_frac(6, 4));
        assert_eq!(cross_section_formula(rs, &c, &xi, &tp), q_frac(6, 4));
    }

    #[test]
    fn multiplicities() {
        let (t, _) = setup("A2");
        assert_eq!(all_weight_multiplicity(&t, &[1, 1]), 1);
        assert_eq!(all_weight_multiplicity(&t, &[1, 0]), 0);
        let (t, c) = setup("B2");
        let w = pt(&[1, 1]).simple_coords(t.root_system(), &c);
        let dims = multiplicity_by_degree(&t, &w);
        assert_eq!(dims.iter().filter(|(_, &k)| k > 0).collect::<Vec<_>>(), vec![(&2, &1)]);
    }

    #[test]
    fn factorization() {
        for ty in ["A2", "A3", "B2", "G2"] {
            let (t, c) = setup(ty);
            let data = compute_data(&t, &c, 4).unwrap();
            assert!(check_factorization(&t, &data).passed(), "{ty}");
        }
    }

    #[test]
    fn invariance_needs_the_killing_pairing() {
        let (t, c) = setup("B2");
        let rs = t.root_system();
        let xi = compute_invariant(&t, &c, &pt(&[1, 1])).unwrap();
        let all: Vec<usize> = (0..rs.num_positive()).collect();
        let mut broke = false;
        for i in 0..10 {
            let u = random_supported(rs.rank(), &all, &mut sample_rng(3, 0, i));
            let z = NMinusElement::from_pairs((0..rs.num_positive()).map(|k| (k, q(k as i64 + 1))));
            let moved = coad_group(&t, &u, &z);
            assert_eq!(xi.evaluate(rs, &z), xi.evaluate(rs, &moved));
            broke |= xi.evaluate_with(&z, |_| q(1)) != xi.evaluate_with(&moved, |_| q(1));
        }
        assert!(broke);
    }

    #[test]
    fn suite_checks_small() {
        for ty in ["A2", "A3", "B2", "G2"] {
            let (t, c) = setup(ty);
            let data = compute_data(&t, &c, 4).unwrap();
            for r in check_multiplicity_and_degree(&t, &c, &data) {
                assert!(r.passed(), "{ty} {:?}", r);
            }
            assert!(check_cross_section_values(&t, &c, &data, 3, 1).passed());
            assert!(check_n_invariance(&t, &data, 3, 3, 1).passed());
            assert!(check_non_dominant(&t, &c, 6, 1).passed());
            assert!(check_dominance_scan(&t, &c, 2).passed());
            assert!(check_half_integer_ratios(t.root_system(), &c, 10, 1).passed());
            assert!(check_span_criterion(t.root_system(), &c, 10, 1).passed());
        }
    }
}
