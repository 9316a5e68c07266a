//! Root systems of semisimple types: roots generated by string closure from
//! the Cartan matrix, the invariant form, subsystems, reflections and the
//! longest Weyl group element.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn from_char(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    fn rank_ok(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    pub family: Family,
    pub rank: usize,
}

/// A semisimple type such as `A3` or `B2xG2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeSpec {
    pub components: Vec<Component>,
}

impl FromStr for TypeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidSpec {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(bad("empty"));
        }
        let mut components = Vec::new();
        for part in trimmed.split(['x', 'X']) {
            let part = part.trim();
            let mut chars = part.chars();
            let family = chars
                .next()
                .and_then(Family::from_char)
                .ok_or_else(|| bad("unknown family"))?;
            let digits = chars.as_str();
            if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad("missing or malformed rank"));
            }
            let rank: usize = digits.parse().map_err(|_| bad("rank out of range"))?;
            if !family.rank_ok(rank) {
                return Err(bad("rank not allowed for this family"));
            }
            components.push(Component { family, rank });
        }
        Ok(TypeSpec { components })
    }
}

impl fmt::Display for TypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{:?}{}", c.family, c.rank)?;
        }
        Ok(())
    }
}

impl TypeSpec {
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank).sum()
    }
}

/// A root in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    pub fn to_weight(&self) -> Weight {
        Weight(self.0.iter().map(|&c| q(c)).collect())
    }
}

/// A rational weight in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<Q>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![Q::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Weight(v.iter().map(|&c| q(c)).collect())
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &Q) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    /// Integer coordinates, if all entries are integers.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0.iter().map(crate::linalg::q_to_i64).collect()
    }
}

/// A Weyl group element with a word in simple reflections and its matrix
/// on simple-root coordinates (columns are images of simple roots).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            word: Vec::new(),
            matrix: identity(rank),
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        mat_vec(&self.matrix, v)
    }

    pub fn apply_weight(&self, v: &Weight) -> Weight {
        Weight(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&v.0)
                        .fold(Q::zero(), |acc, (&a, b)| acc + q(a) * b)
                })
                .collect(),
        )
    }
}

pub fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Positive roots lying in a set of simple indices, with the highest root of
/// each connected piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystem {
    pub simple: Vec<usize>,
    pub positive: Vec<usize>,
    pub pieces: Vec<Vec<usize>>,
    pub highest: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub spec: TypeSpec,
    /// `cartan[i][j] = 2(α_i, α_j) / (α_i, α_i)`
    pub cartan: Vec<Vec<i64>>,
    /// `(α_i, α_i) / 2`
    pub symmetrizer: Vec<i64>,
    /// Gram matrix `(α_i, α_j)`; short roots have squared length 2.
    pub gram: Vec<Vec<i64>>,
    positive: Vec<Root>,
    index: HashMap<Vec<i64>, usize>,
    /// inner products of positive roots, row-major
    pos_inner: Vec<i64>,
    /// component index of each simple root
    component_of: Vec<usize>,
}

/// Gram matrix of one simple component in Bourbaki numbering.
fn component_gram(c: Component) -> Vec<Vec<i64>> {
    let n = c.rank;
    let mut g = vec![vec![0i64; n]; n];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match c.family {
        Family::A => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 0..n.saturating_sub(1) {
                link(&mut g, i, i + 1, -1);
            }
        }
        Family::B => {
            for i in 0..n - 1 {
                g[i][i] = 4;
            }
            g[n - 1][n - 1] = 2;
            for i in 0..n - 1 {
                link(&mut g, i, i + 1, -2);
            }
        }
        Family::C => {
            for i in 0..n - 1 {
                g[i][i] = 2;
            }
            g[n - 1][n - 1] = 4;
            for i in 0..n - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, n - 2, n - 1, -2);
        }
        Family::D => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 0..n - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, n - 3, n - 1, -1);
        }
        Family::E => {
            for i in 0..n {
                g[i][i] = 2;
            }
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 2..n - 1 {
                link(&mut g, i, i + 1, -1);
            }
        }
        Family::F => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        Family::G => {
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    g
}

impl RootSystem {
    pub fn new(spec: TypeSpec) -> Self {
        let l = spec.rank();
        let mut gram = vec![vec![0i64; l]; l];
        let mut component_of = Vec::with_capacity(l);
        let mut off = 0;
        for (ci, c) in spec.components.iter().enumerate() {
            let g = component_gram(*c);
            for i in 0..c.rank {
                for j in 0..c.rank {
                    gram[off + i][off + j] = g[i][j];
                }
                component_of.push(ci);
            }
            off += c.rank;
        }
        let symmetrizer: Vec<i64> = (0..l).map(|i| gram[i][i] / 2).collect();
        let cartan: Vec<Vec<i64>> = (0..l)
            .map(|i| (0..l).map(|j| 2 * gram[i][j] / gram[i][i]).collect())
            .collect();

        // closure: φ + α_i is a root iff q > 0 where p - q = <φ, α_i^∨>
        let mut positive: Vec<Root> = (0..l)
            .map(|i| Root((0..l).map(|j| i64::from(i == j)).collect()))
            .collect();
        let mut index: HashMap<Vec<i64>, usize> = positive
            .iter()
            .enumerate()
            .map(|(k, r)| (r.0.clone(), k))
            .collect();
        let mut frontier: Vec<usize> = (0..l).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &k in &frontier {
                for i in 0..l {
                    let phi = positive[k].0.clone();
                    let mut p = 0;
                    let mut down = phi.clone();
                    loop {
                        down[i] -= 1;
                        if index.contains_key(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..l).map(|j| phi[j] * gram[j][i]).sum::<i64>() * 2 / gram[i][i];
                    if p - pairing > 0 {
                        let mut up = phi;
                        up[i] += 1;
                        if !index.contains_key(&up) {
                            index.insert(up.clone(), positive.len());
                            next.push(positive.len());
                            positive.push(Root(up));
                        }
                    }
                }
            }
            frontier = next;
        }
        positive.sort_by(|a, b| {
            a.height()
                .cmp(&b.height())
                .then_with(|| b.0.cmp(&a.0))
        });
        let index: HashMap<Vec<i64>, usize> = positive
            .iter()
            .enumerate()
            .map(|(k, r)| (r.0.clone(), k))
            .collect();
        let np = positive.len();
        let mut pos_inner = vec![0i64; np * np];
        for a in 0..np {
            for b in 0..np {
                pos_inner[a * np + b] = gram_inner(&gram, &positive[a].0, &positive[b].0);
            }
        }
        RootSystem {
            spec,
            cartan,
            symmetrizer,
            gram,
            positive,
            index,
            pos_inner,
            component_of,
        }
    }

    pub fn from_spec_str(s: &str) -> Result<Self> {
        Ok(Self::new(s.parse()?))
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn root(&self, k: usize) -> &Root {
        &self.positive[k]
    }

    pub fn simple_roots(&self) -> &[Root] {
        &self.positive[..self.rank()]
    }

    /// Index of a positive root.
    pub fn index_of(&self, coeffs: &[i64]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    pub fn positive_index(&self, r: &Root) -> Result<usize> {
        self.index_of(&r.0)
            .ok_or_else(|| Error::NotPositiveRoot(r.0.clone()))
    }

    /// True if `coeffs` is a root (positive or negative).
    pub fn is_root(&self, coeffs: &[i64]) -> bool {
        if self.index.contains_key(coeffs) {
            return true;
        }
        let neg: Vec<i64> = coeffs.iter().map(|c| -c).collect();
        self.index.contains_key(&neg)
    }

    /// `(φ_a, φ_b)` for positive root indices.
    pub fn inner_pos(&self, a: usize, b: usize) -> i64 {
        self.pos_inner[a * self.positive.len() + b]
    }

    pub fn inner_int(&self, v: &[i64], w: &[i64]) -> i64 {
        gram_inner(&self.gram, v, w)
    }

    /// The invariant form on weights.
    pub fn inner(&self, v: &Weight, w: &Weight) -> Result<Q> {
        let l = self.rank();
        for x in [v, w] {
            if x.0.len() != l {
                return Err(Error::Shape {
                    expected: l,
                    got: x.0.len(),
                });
            }
        }
        let mut acc = Q::zero();
        for i in 0..l {
            if v.0[i].is_zero() {
                continue;
            }
            for j in 0..l {
                if self.gram[i][j] != 0 {
                    acc += &v.0[i] * &w.0[j] * q(self.gram[i][j]);
                }
            }
        }
        Ok(acc)
    }

    pub fn component_of_simple(&self, i: usize) -> usize {
        self.component_of[i]
    }

    /// Simple indices of each simple component, in input order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.spec.components.len()];
        for (i, &c) in self.component_of.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// `Π(φ)`: simple indices with a positive coordinate.
    pub fn support(&self, phi: &Root) -> Result<Vec<usize>> {
        self.positive_index(phi)?;
        Ok(support_of(&phi.0))
    }

    /// Connected pieces of a set of simple indices, each sorted, ordered by
    /// smallest element.
    pub fn connected_pieces(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut sorted: Vec<usize> = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut seen = vec![false; sorted.len()];
        let mut pieces = Vec::new();
        for s in 0..sorted.len() {
            if seen[s] {
                continue;
            }
            let mut piece = vec![sorted[s]];
            seen[s] = true;
            let mut stack = vec![sorted[s]];
            while let Some(i) = stack.pop() {
                for (t, &j) in sorted.iter().enumerate() {
                    if !seen[t] && self.gram[i][j] != 0 {
                        seen[t] = true;
                        piece.push(j);
                        stack.push(j);
                    }
                }
            }
            piece.sort_unstable();
            pieces.push(piece);
        }
        pieces
    }

    /// `Δ(S)₊` for a set `S` of simple indices, with highest roots per piece.
    pub fn subsystem(&self, subset: &[usize]) -> Subsystem {
        let mut simple = subset.to_vec();
        simple.sort_unstable();
        simple.dedup();
        let mut inside = vec![false; self.rank()];
        for &i in &simple {
            inside[i] = true;
        }
        let positive: Vec<usize> = (0..self.num_positive())
            .filter(|&k| {
                self.positive[k]
                    .0
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| c == 0 || inside[i])
            })
            .collect();
        let pieces = self.connected_pieces(&simple);
        let highest = pieces
            .iter()
            .map(|piece| {
                // roots are sorted by height, so the last one supported on the piece is highest
                *positive
                    .iter()
                    .rev()
                    .find(|&&k| {
                        self.positive[k]
                            .0
                            .iter()
                            .enumerate()
                            .all(|(i, &c)| c == 0 || piece.contains(&i))
                    })
                    .expect("piece contains a simple root")
            })
            .collect();
        Subsystem {
            simple,
            positive,
            pieces,
            highest,
        }
    }

    /// `s_β(ν) = ν - 2(ν,β)/(β,β) β`.
    pub fn reflect(&self, beta: &Root, nu: &Weight) -> Result<Weight> {
        if !self.is_root(&beta.0) {
            return Err(Error::NotARoot(beta.0.clone()));
        }
        let b = beta.to_weight();
        let c = self.inner(nu, &b)? * q(2) / q(self.inner_int(&beta.0, &beta.0));
        Ok(nu.add(&b.scale(&-c)))
    }

    /// Matrix of the reflection `s_β` on simple-root coordinates.
    pub fn reflection_matrix(&self, beta: &[i64]) -> Vec<Vec<i64>> {
        let l = self.rank();
        let bb = self.inner_int(beta, beta);
        let mut m = vec![vec![0i64; l]; l];
        for j in 0..l {
            let mut col = vec![0i64; l];
            col[j] = 1;
            let c = 2 * self.inner_int(&col, beta) / bb;
            for i in 0..l {
                m[i][j] = col[i] - c * beta[i];
            }
        }
        m
    }

    pub fn simple_reflection(&self, i: usize) -> Vec<Vec<i64>> {
        let mut e = vec![0i64; self.rank()];
        e[i] = 1;
        self.reflection_matrix(&e)
    }

    /// Longest element of `W` by greedy descent: extend `w` by `s_i` while
    /// `w(α_i)` is positive.
    pub fn longest_element(&self) -> WeylElement {
        let all: Vec<usize> = (0..self.rank()).collect();
        self.longest_element_of(&all)
    }

    /// Longest element of the parabolic subgroup generated by `subset`.
    pub fn longest_element_of(&self, subset: &[usize]) -> WeylElement {
        let l = self.rank();
        let mut w = WeylElement::identity(l);
        let reflections: Vec<(usize, Vec<Vec<i64>>)> = subset
            .iter()
            .map(|&i| (i, self.simple_reflection(i)))
            .collect();
        loop {
            let next = reflections.iter().find(|(i, _)| {
                let col: Vec<i64> = (0..l).map(|r| w.matrix[r][*i]).collect();
                col.iter().all(|&c| c >= 0)
            });
            match next {
                Some((i, s)) => {
                    w.matrix = mat_mul(&w.matrix, s);
                    w.word.push(*i);
                }
                None => return w,
            }
        }
    }

    /// `(ν, α_i) ≥ 0` for every simple root.
    pub fn is_dominant(&self, nu: &Weight) -> bool {
        (0..self.rank()).all(|i| {
            let a = self.positive[i].to_weight();
            !self.inner(nu, &a).expect("shape").is_negative()
        })
    }

    /// `1 + (ρ, θ^∨)` for the simple subsystem on a connected subset.
    pub fn dual_coxeter_number(&self, subset: &[usize]) -> Result<i64> {
        let pieces = self.connected_pieces(subset);
        if pieces.len() != 1 {
            return Err(Error::DisconnectedSubset(subset.to_vec()));
        }
        let sub = self.subsystem(subset);
        let l = self.rank();
        let mut two_rho = vec![0i64; l];
        for &k in &sub.positive {
            for i in 0..l {
                two_rho[i] += self.positive[k].0[i];
            }
        }
        let theta = &self.positive[sub.highest[0]].0;
        // (ρ, θ^∨) = (2ρ, θ) / (θ, θ)
        let num = self.inner_int(&two_rho, theta);
        let den = self.inner_int(theta, theta);
        debug_assert_eq!(num % den, 0);
        Ok(1 + num / den)
    }

    /// Fundamental weights in simple-root coordinates: `(ω_i, α_j^∨) = δ_ij`.
    pub fn fundamental_weights(&self) -> Vec<Weight> {
        let l = self.rank();
        let g: Vec<Vec<Q>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect();
        (0..l)
            .map(|i| {
                let rhs: Vec<Q> = (0..l)
                    .map(|j| if i == j { q(self.symmetrizer[j]) } else { Q::zero() })
                    .collect();
                Weight(crate::linalg::solve(&g, &rhs).expect("gram is nonsingular"))
            })
            .collect()
    }

    /// Coroot `2φ/(φ,φ)` as a weight.
    pub fn coroot(&self, phi: &[i64]) -> Weight {
        let c = Q::new(2.into(), self.inner_int(phi, phi).into());
        Weight(phi.iter().map(|&x| q(x) * &c).collect())
    }

    /// `2/(φ,φ)`: the invariant-form value on `(e_φ, e_{-φ})`.
    pub fn pairing_scale(&self, k: usize) -> Q {
        Q::new(2.into(), self.inner_pos(k, k).into())
    }

    /// The classical positive-root count.
    pub fn classical_count(spec: &TypeSpec) -> usize {
        spec.components
            .iter()
            .map(|c| {
                let n = c.rank;
                match c.family {
                    Family::A => n * (n + 1) / 2,
                    Family::B | Family::C => n * n,
                    Family::D => n * (n - 1),
                    Family::E => match n {
                        6 => 36,
                        7 => 63,
                        _ => 120,
                    },
                    Family::F => 24,
                    Family::G => 6,
                }
            })
            .sum()
    }
}

fn gram_inner(gram: &[Vec<i64>], v: &[i64], w: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, &vi) in v.iter().enumerate() {
        if vi == 0 {
            continue;
        }
        for (j, &wj) in w.iter().enumerate() {
            acc += vi * wj * gram[i][j];
        }
    }
    acc
}

pub fn support_of(coeffs: &[i64]) -> Vec<usize> {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, _)| i)
        .collect()
}

/// `Weight` from rationals, used in reports.
pub fn weight_strings(w: &Weight) -> Vec<String> {
    w.0.iter().map(crate::linalg::q_to_string).collect()
}
