//! The cascade of strongly orthogonal roots.
//!
//! Each node holds a locally high root β: the highest root of the simple
//! subsystem on its support. Its children are the highest roots of the
//! simple pieces of the subsystem orthogonal to β. Because β is dominant
//! for its subsystem, that orthogonal subsystem is generated by the simple
//! roots of the support orthogonal to β.

use itertools::Itertools;
use serde::Serialize;
use serde_json::json;

use crate::chevalley::{ChevalleyTable, LieElement, SignedRoot};
use crate::error::{Error, Result};
use crate::report::{CheckResult, VerificationReport, Witness};
use crate::rootsys::{mat_mul, support_of, Root, RootSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeNode {
    /// positive-root index of β
    pub beta: usize,
    /// simple indices Π(β)
    pub support: Vec<usize>,
    /// Δ(β)₊ as positive-root indices
    pub delta_plus: Vec<usize>,
    /// E(β) = {φ ∈ Δ(β) : (φ, β) > 0}
    pub layer: Vec<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub h_dual: i64,
}

#[derive(Clone, Debug)]
pub struct Cascade {
    /// nodes in depth-first order; this is the order β₁, …, β_m
    pub nodes: Vec<CascadeNode>,
    /// top-level nodes, one per simple component
    pub tops: Vec<usize>,
    twin: Vec<Option<usize>>,
    layer_of: Vec<Option<usize>>,
}

pub fn compute_cascade(rs: &RootSystem) -> Cascade {
    let mut nodes = Vec::new();
    let mut tops = Vec::new();
    for comp in rs.components() {
        tops.push(build_node(rs, &comp, None, &mut nodes));
    }
    let np = rs.num_positive();
    let mut twin = vec![None; np];
    let mut layer_of = vec![None; np];
    for (ni, node) in nodes.iter().enumerate() {
        let b = &rs.root(node.beta).0;
        for &phi in &node.layer {
            layer_of[phi] = Some(ni);
            if phi != node.beta {
                let d: Vec<i64> = b.iter().zip(&rs.root(phi).0).map(|(x, y)| x - y).collect();
                twin[phi] = rs.index_of(&d);
            }
        }
    }
    Cascade {
        nodes,
        tops,
        twin,
        layer_of,
    }
}

fn build_node(rs: &RootSystem, support: &[usize], parent: Option<usize>, nodes: &mut Vec<CascadeNode>) -> usize {
    let sub = rs.subsystem(support);
    let beta = sub.highest[0];
    let layer: Vec<usize> = sub
        .positive
        .iter()
        .copied()
        .filter(|&phi| rs.inner_pos(phi, beta) > 0)
        .collect();
    let h_dual = rs.dual_coxeter_number(support).expect("support is connected");
    let idx = nodes.len();
    nodes.push(CascadeNode {
        beta,
        support: sub.simple.clone(),
        delta_plus: sub.positive.clone(),
        layer,
        parent,
        children: Vec::new(),
        h_dual,
    });
    let orth: Vec<usize> = sub
        .simple
        .iter()
        .copied()
        .filter(|&i| rs.inner_pos(i, beta) == 0)
        .collect();
    for piece in rs.connected_pieces(&orth) {
        let child = build_node(rs, &piece, Some(idx), nodes);
        nodes[idx].children.push(child);
    }
    idx
}

impl Cascade {
    pub fn m(&self) -> usize {
        self.nodes.len()
    }

    /// Positive-root indices of β₁, …, β_m.
    pub fn betas(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.beta).collect()
    }

    pub fn beta_roots(&self, rs: &RootSystem) -> Vec<Root> {
        self.nodes.iter().map(|n| rs.root(n.beta).clone()).collect()
    }

    pub fn contains(&self, phi: usize) -> bool {
        self.nodes.iter().any(|n| n.beta == phi)
    }

    /// Node whose β is the given root.
    pub fn node_of(&self, rs: &RootSystem, beta: &Root) -> Result<usize> {
        let k = rs.index_of(&beta.0);
        self.nodes
            .iter()
            .position(|n| Some(n.beta) == k)
            .ok_or_else(|| Error::NotCascadeRoot(beta.0.clone()))
    }

    /// Node whose layer contains φ.
    pub fn layer_node(&self, phi: usize) -> Option<usize> {
        self.layer_of[phi]
    }

    /// Heisenberg twin β - φ of φ ∈ E(β) \ {β}.
    pub fn twin(&self, phi: usize) -> Option<usize> {
        self.twin[phi]
    }

    pub fn layer(&self, rs: &RootSystem, beta: &Root) -> Result<Vec<Root>> {
        let n = self.node_of(rs, beta)?;
        Ok(self.nodes[n].layer.iter().map(|&k| rs.root(k).clone()).collect())
    }

    /// Node indices of the chain cascade C(φ).
    pub fn chain_nodes(&self, rs: &RootSystem, phi: usize) -> Vec<usize> {
        let supp = support_of(&rs.root(phi).0);
        let covers = |n: &CascadeNode| supp.iter().all(|i| n.support.contains(i));
        let mut chain = Vec::new();
        let mut level: &[usize] = &self.tops;
        loop {
            // only reachable for a damaged cascade
            let Some(&n) = level.iter().find(|&&n| covers(&self.nodes[n])) else {
                return chain;
            };
            chain.push(n);
            if rs.inner_pos(phi, self.nodes[n].beta) > 0 {
                return chain;
            }
            level = &self.nodes[n].children;
        }
    }

    pub fn chain_of(&self, rs: &RootSystem, phi: &Root) -> Result<Vec<Root>> {
        let k = rs.positive_index(phi)?;
        Ok(self
            .chain_nodes(rs, k)
            .into_iter()
            .map(|n| rs.root(self.nodes[n].beta).clone())
            .collect())
    }

    /// The cascade minus its last node; used to inject faults in tests.
    pub fn without_last(&self) -> Cascade {
        let mut c = self.clone();
        if let Some(last) = c.nodes.pop() {
            let gone = c.nodes.len();
            if let Some(p) = last.parent {
                c.nodes[p].children.retain(|&ch| ch != gone);
            }
            c.tops.retain(|&t| t != gone);
            for phi in last.layer {
                c.layer_of[phi] = None;
                c.twin[phi] = None;
            }
        }
        c
    }

    pub fn to_json(&self, rs: &RootSystem) -> CascadeJson {
        CascadeJson {
            r#type: rs.spec.to_string(),
            m: self.m(),
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeJson {
                    beta: rs.root(n.beta).0.clone(),
                    support: n.support.iter().map(|i| i + 1).collect(),
                    layer: n.layer.iter().map(|&k| rs.root(k).0.clone()).collect(),
                    layer_size: n.layer.len(),
                    h_dual: n.h_dual,
                    parent: n.parent,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeJson {
    pub beta: Vec<i64>,
    /// 1-based simple indices
    pub support: Vec<usize>,
    pub layer: Vec<Vec<i64>>,
    pub layer_size: usize,
    pub h_dual: i64,
    pub parent: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CascadeJson {
    pub r#type: String,
    pub m: usize,
    pub nodes: Vec<NodeJson>,
}

fn strongly_orthogonal(rs: &RootSystem, a: usize, b: usize) -> bool {
    let (x, y) = (&rs.root(a).0, &rs.root(b).0);
    let plus: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
    let minus: Vec<i64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
    rs.inner_pos(a, b) == 0 && !rs.is_root(&plus) && !rs.is_root(&minus)
}

/// Every element of `s` in the ±Δ(β)₊ sense: is `v` a root supported on `support`?
fn in_subsystem(rs: &RootSystem, support: &[usize], v: &[i64]) -> bool {
    rs.is_root(v)
        && v.iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || support.contains(&i))
}

/// Checks the structural statements about the cascade, each as its own
/// report entry. Longest elements and dual Coxeter numbers are computed
/// independently of the cascade construction.
pub fn verify_section1(rs: &RootSystem, cascade: &Cascade) -> VerificationReport {
    let ty = rs.spec.to_string();
    let mut report = VerificationReport::new();
    let betas = cascade.betas();
    let root = |k: usize| json!(rs.root(k).0);

    // (a) locally high: no simple root of the support can be added
    let mut w = Witness::new();
    for n in &cascade.nodes {
        let b = &rs.root(n.beta).0;
        w.ensure(support_of(b) == n.support, || json!({"beta": b, "reason": "support"}));
        for &i in &n.support {
            let mut up = b.clone();
            up[i] += 1;
            w.ensure(!rs.is_root(&up), || json!({"beta": b, "raise_by": i + 1}));
        }
        w.ensure(n.layer.contains(&n.beta), || json!({"beta": b, "reason": "beta not in layer"}));
    }
    report.push(CheckResult::exact("locally-high", &ty, w.into_inner()));

    // (b) |E(β)| = 2 h^∨(β) - 3, h^∨ from the ρ formula
    let mut w = Witness::new();
    let mut sizes = Vec::new();
    for n in &cascade.nodes {
        let hd = rs.dual_coxeter_number(&n.support);
        let expected = hd.as_ref().map(|h| 2 * h - 3).unwrap_or(-1);
        sizes.push(n.layer.len());
        w.ensure(n.layer.len() as i64 == expected, || {
            json!({"beta": rs.root(n.beta).0, "layer_size": n.layer.len(), "expected": expected})
        });
    }
    report.push(CheckResult::exact("layer-size", &ty, w.into_inner()).with_detail(json!({ "layer_sizes": sizes })));

    // (c) 2(β,φ)/(β,β) = 1 on E(β) \ {β}
    let mut w = Witness::new();
    for n in &cascade.nodes {
        let bb = rs.inner_pos(n.beta, n.beta);
        for &phi in n.layer.iter().filter(|&&p| p != n.beta) {
            w.ensure(2 * rs.inner_pos(phi, n.beta) == bb, || json!({"beta": root(n.beta), "phi": root(phi)}));
        }
    }
    report.push(CheckResult::exact("layer-ratio", &ty, w.into_inner()));

    // (d) Δ₊ is the disjoint union of the layers
    let mut w = Witness::new();
    let mut count = vec![0usize; rs.num_positive()];
    for n in &cascade.nodes {
        for &phi in &n.layer {
            count[phi] += 1;
        }
    }
    let total: usize = cascade.nodes.iter().map(|n| n.layer.len()).sum();
    w.ensure(total == rs.num_positive(), || json!({"sum_of_layers": total, "positive_roots": rs.num_positive()}));
    if let Some(phi) = count.iter().position(|&c| c != 1) {
        w.fail(json!({"phi": root(phi), "occurrences": count[phi]}));
    }
    report.push(CheckResult::exact("layer-partition", &ty, w.into_inner()));

    // twins: β = φ + φ' with φ, φ' positive forces both into E(β) \ {β} as twins
    let mut w = Witness::new();
    for n in &cascade.nodes {
        for phi in 0..rs.num_positive() {
            let d: Vec<i64> = rs.root(n.beta).0.iter().zip(&rs.root(phi).0).map(|(x, y)| x - y).collect();
            if let Some(psi) = rs.index_of(&d) {
                let ok = n.layer.contains(&phi)
                    && n.layer.contains(&psi)
                    && cascade.twin(phi) == Some(psi)
                    && cascade.twin(psi) == Some(phi);
                w.ensure(ok, || json!({"beta": root(n.beta), "phi": root(phi)}));
            }
        }
        for &phi in n.layer.iter().filter(|&&p| p != n.beta) {
            w.ensure(cascade.twin(phi).is_some(), || json!({"beta": root(n.beta), "untwinned": root(phi)}));
        }
    }
    report.push(CheckResult::exact("heisenberg-twins", &ty, w.into_inner()));

    // (e) pairwise strong orthogonality and maximality
    let mut w = Witness::new();
    for (a, b) in betas.iter().tuple_combinations() {
        w.ensure(strongly_orthogonal(rs, *a, *b), || json!({"beta": root(*a), "beta_prime": root(*b)}));
    }
    report.push(CheckResult::exact("strong-orthogonality", &ty, w.into_inner()));
    let mut w = Witness::new();
    for phi in 0..rs.num_positive() {
        let blocked = betas.iter().any(|&b| !strongly_orthogonal(rs, phi, b));
        w.ensure(blocked, || json!({"extendable_by": root(phi)}));
    }
    report.push(CheckResult::exact("maximality", &ty, w.into_inner()));

    // chains: C(φ) ends at the β with φ ∈ E(β), and is strictly decreasing
    let mut w = Witness::new();
    for phi in 0..rs.num_positive() {
        let chain = cascade.chain_nodes(rs, phi);
        let Some(&last) = chain.last() else {
            w.fail(json!({"phi": root(phi), "reason": "no chain"}));
            continue;
        };
        w.ensure(cascade.layer_node(phi) == Some(last), || json!({"phi": root(phi), "reason": "end of chain"}));
        for (i, &ni) in chain.iter().enumerate() {
            let n = &cascade.nodes[ni];
            w.ensure(n.delta_plus.contains(&phi), || json!({"phi": root(phi), "reason": "not in Δ(β_i)"}));
            if i + 1 < chain.len() {
                w.ensure(rs.inner_pos(phi, n.beta) == 0, || json!({"phi": root(phi), "reason": "not orthogonal"}));
                let next = &rs.root(cascade.nodes[chain[i + 1]].beta).0;
                let diff: Vec<i64> = rs.root(n.beta).0.iter().zip(next).map(|(x, y)| x - y).collect();
                w.ensure(diff.iter().all(|&c| c >= 0) && diff.iter().any(|&c| c > 0), || {
                    json!({"phi": root(phi), "reason": "chain not decreasing"})
                });
            }
        }
    }
    report.push(CheckResult::exact("chain-cascade", &ty, w.into_inner()));

    // totally disjoint Δ(β), Δ(β') when neither chain is a subchain of the other
    let mut w = Witness::new();
    for (i, j) in (0..cascade.m()).tuple_combinations() {
        let ci = cascade.chain_nodes(rs, cascade.nodes[i].beta);
        let cj = cascade.chain_nodes(rs, cascade.nodes[j].beta);
        let nested = ci.starts_with(&cj) || cj.starts_with(&ci);
        if nested {
            continue;
        }
        'outer: for &a in &cascade.nodes[i].delta_plus {
            for &b in &cascade.nodes[j].delta_plus {
                if !strongly_orthogonal(rs, a, b) {
                    w.fail(json!({"beta": root(cascade.nodes[i].beta), "beta_prime": root(cascade.nodes[j].beta), "pair": [root(a), root(b)]}));
                    break 'outer;
                }
            }
        }
    }
    report.push(CheckResult::exact("totally-disjoint", &ty, w.into_inner()));

    // (g) s_β' stabilises Δ(β), and lies in W(β) when it acts nontrivially
    let mut w = Witness::new();
    for nb in &cascade.nodes {
        for nbp in &cascade.nodes {
            let s = rs.reflection_matrix(&rs.root(nbp.beta).0);
            let mut trivial = true;
            for &phi in &nb.delta_plus {
                let img = crate::rootsys::mat_vec(&s, &rs.root(phi).0);
                trivial &= img == rs.root(phi).0;
                w.ensure(in_subsystem(rs, &nb.support, &img), || {
                    json!({"beta": root(nb.beta), "beta_prime": root(nbp.beta), "phi": root(phi)})
                });
            }
            if !trivial {
                w.ensure(nb.delta_plus.contains(&nbp.beta), || {
                    json!({"beta": root(nb.beta), "beta_prime": root(nbp.beta), "reason": "not in W(β)"})
                });
            }
        }
    }
    report.push(CheckResult::exact("reflection-stability", &ty, w.into_inner()));

    // (f) w₀ = Π s_β in several orders, against greedy descent
    let w0 = rs.longest_element();
    let mut w = Witness::new();
    w.ensure(w0.word.len() == rs.num_positive(), || json!({"reason": "length of w0", "length": w0.word.len()}));
    let refl: Vec<Vec<Vec<i64>>> = betas.iter().map(|&b| rs.reflection_matrix(&rs.root(b).0)).collect();
    for (a, b) in (0..refl.len()).tuple_combinations() {
        w.ensure(mat_mul(&refl[a], &refl[b]) == mat_mul(&refl[b], &refl[a]), || {
            json!({"reason": "reflections do not commute", "pair": [root(betas[a]), root(betas[b])]})
        });
    }
    let orders = product_orders(refl.len());
    for order in &orders {
        let mut m = crate::rootsys::identity(rs.rank());
        for &k in order {
            m = mat_mul(&m, &refl[k]);
        }
        w.ensure(m == w0.matrix, || json!({"order": order, "product": m, "w0": w0.matrix}));
    }
    report.push(
        CheckResult::exact("longest-element-product", &ty, w.into_inner())
            .with_detail(json!({"orders_checked": orders.len()})),
    );

    // (1.8): w₀ agrees with w₀(β) on Δ(β)
    let mut w = Witness::new();
    for n in &cascade.nodes {
        let local = rs.longest_element_of(&n.support);
        for &i in &n.support {
            let mut e = vec![0i64; rs.rank()];
            e[i] = 1;
            w.ensure(w0.apply(&e) == local.apply(&e), || json!({"beta": root(n.beta), "simple": i + 1}));
        }
    }
    report.push(CheckResult::exact("longest-element-restriction", &ty, w.into_inner()));

    report
}

/// All orders when there are at most 5 factors, otherwise a handful of
/// rotations plus the reverse.
fn product_orders(m: usize) -> Vec<Vec<usize>> {
    if m <= 5 {
        return (0..m).permutations(m).collect();
    }
    let base: Vec<usize> = (0..m).collect();
    let mut out = vec![base.clone(), base.iter().rev().copied().collect()];
    for r in 1..m.min(6) {
        let mut v = base.clone();
        v.rotate_left(r);
        out.push(v);
    }
    out
}

/// Bracket structure of e(β): twins bracket to a nonzero multiple of e_β,
/// other pairs commute, e_β is central.
pub fn heisenberg_bracket_check(tbl: &ChevalleyTable, cascade: &Cascade, beta: &Root) -> Result<bool> {
    let rs = tbl.root_system();
    let n = &cascade.nodes[cascade.node_of(rs, beta)?];
    let l = rs.rank();
    let e = |k| LieElement::root_vector(l, SignedRoot::pos(k));
    let b = n.beta;
    for &phi in &n.layer {
        if !tbl.bracket(&e(b), &e(phi)).is_zero() {
            return Ok(false);
        }
    }
    let rest: Vec<usize> = n.layer.iter().copied().filter(|&p| p != b).collect();
    for &phi in &rest {
        for &psi in &rest {
            if phi == psi {
                continue;
            }
            let br = tbl.bracket(&e(phi), &e(psi));
            if cascade.twin(phi) == Some(psi) {
                let ok = br.cartan.iter().all(num_traits::Zero::is_zero)
                    && br.roots.len() == 1
                    && br.roots.contains_key(&SignedRoot::pos(b));
                if !ok {
                    return Ok(false);
                }
            } else if !br.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(s: &str) -> (RootSystem, Cascade) {
        let rs = RootSystem::from_spec_str(s).unwrap();
        let c = compute_cascade(&rs);
        (rs, c)
    }

    fn beta_coords(rs: &RootSystem, c: &Cascade) -> Vec<Vec<i64>> {
        c.beta_roots(rs).into_iter().map(|r| r.0).collect()
    }

    #[test]
    fn small_cascades() {
        let (rs, c) = setup("A2");
        assert_eq!(beta_coords(&rs, &c), vec![vec![1, 1]]);
        let (rs, c) = setup("B2");
        assert_eq!(beta_coords(&rs, &c), vec![vec![1, 2], vec![1, 0]]);
        let (rs, c) = setup("A3");
        assert_eq!(beta_coords(&rs, &c), vec![vec![1, 1, 1], vec![0, 1, 0]]);
        let (rs, c) = setup("B2xA1");
        assert_eq!(c.m(), 3);
        assert_eq!(c.tops.len(), 2);
        assert_eq!(rs.root(c.nodes[2].beta).0, vec![0, 0, 1]);
    }

    #[test]
    fn layers() {
        let (rs, c) = setup("A2");
        let l = c.layer(&rs, &Root(vec![1, 1])).unwrap();
        assert_eq!(l, vec![Root(vec![1, 0]), Root(vec![0, 1]), Root(vec![1, 1])]);
        let (rs, c) = setup("B2");
        let l = c.layer(&rs, &Root(vec![1, 2])).unwrap();
        assert_eq!(l, vec![Root(vec![0, 1]), Root(vec![1, 1]), Root(vec![1, 2])]);
        assert_eq!(c.layer(&rs, &Root(vec![1, 0])).unwrap(), vec![Root(vec![1, 0])]);
        assert!(c.layer(&rs, &Root(vec![0, 1])).is_err());
    }

    #[test]
    fn chains() {
        let (rs, c) = setup("B2");
        assert_eq!(c.chain_of(&rs, &Root(vec![0, 1])).unwrap(), vec![Root(vec![1, 2])]);
        assert_eq!(
            c.chain_of(&rs, &Root(vec![1, 0])).unwrap(),
            vec![Root(vec![1, 2]), Root(vec![1, 0])]
        );
        let (rs, c) = setup("A2");
        assert_eq!(c.chain_of(&rs, &Root(vec![1, 0])).unwrap(), vec![Root(vec![1, 1])]);
        assert!(c.chain_of(&rs, &Root(vec![-1, 0])).is_err());
    }

    #[test]
    fn section1_small_types() {
        for s in ["A1", "A2", "B2", "G2", "A3", "C3", "D4", "B2xA1"] {
            let (rs, c) = setup(s);
            let rep = verify_section1(&rs, &c);
            let bad: Vec<_> = rep.failures().collect();
            assert!(bad.is_empty(), "{s}: {bad:?}");
        }
        let (rs, c) = setup("G2");
        let sizes: Vec<usize> = c.nodes.iter().map(|n| n.layer.len()).collect();
        assert_eq!(sizes, vec![5, 1]);
        assert_eq!(c.nodes[0].h_dual, 4);
        let b2 = setup("B2");
        let w0 = b2.0.longest_element();
        assert_eq!(w0.matrix, vec![vec![-1, 0], vec![0, -1]]);
        assert!(verify_section1(&rs, &c).passed());
    }

    #[test]
    fn dropping_a_root_is_detected() {
        let (rs, c) = setup("A3");
        let rep = verify_section1(&rs, &c.without_last());
        assert!(!rep.passed());
        assert!(!rep.get("layer-partition").unwrap().passed());
        assert!(!rep.get("maximality").unwrap().passed());
    }

    #[test]
    fn heisenberg_layers() {
        for s in ["A2", "B2", "G2", "A3", "B3"] {
            let rs = RootSystem::from_spec_str(s).unwrap();
            let c = compute_cascade(&rs);
            let tbl = ChevalleyTable::new(rs.clone());
            for b in c.beta_roots(&rs) {
                assert!(heisenberg_bracket_check(&tbl, &c, &b).unwrap(), "{s} {b:?}");
            }
            assert!(heisenberg_bracket_check(&tbl, &c, &rs.root(0).clone()).is_err() || c.contains(0));
        }
    }

    #[test]
    fn b2_twin_bracket_magnitude() {
        let rs = RootSystem::from_spec_str("B2").unwrap();
        let tbl = ChevalleyTable::new(rs);
        let n = tbl.constant(&Root(vec![0, 1]), &Root(vec![1, 1])).unwrap();
        assert!(n.abs() == 2);
    }
}
