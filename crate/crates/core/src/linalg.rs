//! Exact linear algebra over Q and over a large prime field.
//!
//! Matrices are handled as lists of sparse rows (`(column, value)` pairs
//! sorted by column). Rank over F_p never exceeds rank over Q, so a zero
//! kernel mod p proves a zero kernel over Q; callers use that to skip the
//! rational computation where the answer is expected to be trivial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer value of `x`, if it is one and fits.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Field operations needed by the eliminator.
pub trait Field: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn negate(&self) -> Self;
}

impl Field for Q {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn negate(&self) -> Self {
        -self
    }
}

/// The Mersenne prime 2^61 - 1.
pub const MODULUS: u64 = (1 << 61) - 1;

/// Residue modulo [`MODULUS`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp(pub u64);

impl Fp {
    pub fn from_i64(v: i64) -> Self {
        let r = v.rem_euclid(MODULUS as i64);
        Fp(r as u64)
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = Field::times(&acc, &base);
            }
            base = Field::times(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl Field for Fp {
    fn nil() -> Self {
        Fp(0)
    }
    fn unit() -> Self {
        Fp(1)
    }
    fn is_nil(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
    fn minus(&self, o: &Self) -> Self {
        Fp(if self.0 >= o.0 {
            self.0 - o.0
        } else {
            self.0 + MODULUS - o.0
        })
    }
    fn times(&self, o: &Self) -> Self {
        Fp(((self.0 as u128 * o.0 as u128) % MODULUS as u128) as u64)
    }
    fn inverse(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero");
        self.pow(MODULUS - 2)
    }
    fn negate(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { MODULUS - self.0 })
    }
}

pub type SparseRow<F> = Vec<(usize, F)>;

/// `a - c * b` on sorted sparse rows.
fn axpy<F: Field>(a: &SparseRow<F>, c: &F, b: &SparseRow<F>) -> SparseRow<F> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c.times(&b[j].1).negate()));
            j += 1;
        } else {
            let v = a[i].1.minus(&c.times(&b[j].1));
            if !v.is_nil() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon form; pivots are normalised to 1.
pub struct Echelon<F: Field> {
    /// pivot column -> row with that leading column
    rows: std::collections::BTreeMap<usize, SparseRow<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self {
            rows: Default::default(),
        }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `row` against the current pivots. Returns true if it was
    /// independent (and has been added).
    pub fn insert(&mut self, mut row: SparseRow<F>) -> bool {
        row.retain(|(_, v)| !v.is_nil());
        row.sort_by_key(|(c, _)| *c);
        loop {
            let Some((lead, lv)) = row.first().cloned() else {
                return false;
            };
            match self.rows.get(&lead) {
                Some(p) => row = axpy(&row, &lv, p),
                None => {
                    let inv = lv.inverse();
                    for (_, v) in row.iter_mut() {
                        *v = v.times(&inv);
                    }
                    self.rows.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Fully reduced rows keyed by pivot column.
    pub fn reduced(mut self) -> Vec<(usize, SparseRow<F>)> {
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        // back substitution from the last pivot upward
        for (k, &p) in pivots.iter().enumerate() {
            let prow = self.rows[&p].clone();
            for &q in &pivots[k + 1..] {
                let r = &self.rows[&q];
                if let Ok(pos) = r.binary_search_by_key(&p, |(c, _)| *c) {
                    let c = r[pos].1.clone();
                    let nr = axpy(r, &c, &prow);
                    self.rows.insert(q, nr);
                }
            }
        }
        self.rows.into_iter().collect()
    }
}

pub fn rank<F: Field>(rows: impl IntoIterator<Item = SparseRow<F>>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of the right kernel {x : A x = 0} of the matrix whose rows are given.
/// Each basis vector has a 1 in its free column.
pub fn kernel<F: Field>(rows: impl IntoIterator<Item = SparseRow<F>>, ncols: usize) -> Vec<Vec<F>> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let reduced = e.reduced();
    let mut is_pivot = vec![false; ncols];
    for (p, _) in &reduced {
        is_pivot[*p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![F::nil(); ncols];
        x[free] = F::unit();
        for (p, row) in &reduced {
            if let Ok(pos) = row.binary_search_by_key(&free, |(c, _)| *c) {
                x[*p] = row[pos].1.negate();
            }
        }
        basis.push(x);
    }
    basis
}

/// Dense rows to sparse rows.
pub fn sparse_rows<F: Field>(dense: &[Vec<F>]) -> Vec<SparseRow<F>> {
    dense
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_nil())
                .map(|(c, v)| (c, v.clone()))
                .collect()
        })
        .collect()
}

/// Solve the square system `a x = b` exactly.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return None;
    }
    // augmented rows; a unique solution means columns 0..n are all pivots
    let rows: Vec<SparseRow<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row: SparseRow<Q> = r
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_nil())
                .map(|(c, v)| (c, v.clone()))
                .collect();
            if !bi.is_nil() {
                row.push((n, bi.clone()));
            }
            row
        })
        .collect();
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let reduced = e.reduced();
    if reduced.len() != n || reduced.iter().any(|(p, _)| *p >= n) {
        return None;
    }
    let mut x = vec![<Q as Zero>::zero(); n];
    for (p, row) in reduced {
        if let Some((c, v)) = row.last() {
            if *c == n {
                x[p] = v.clone();
            }
        }
    }
    Some(x)
}

/// Determinant of an integer matrix (exact, via fraction-free elimination).
pub fn det_i64(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return 0;
        };
        if piv != k {
            a.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = &a[n - 1][n - 1] * sign;
    d.to_i64().expect("determinant overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one() {
        // [1 2 3] -> kernel of dimension 2
        let rows = vec![vec![(0, q(1)), (1, q(2)), (2, q(3))]];
        let k = kernel(rows.clone(), 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s = &v[0] + &v[1] * q(2) + &v[2] * q(3);
            assert!(Zero::is_zero(&s));
        }
    }

    #[test]
    fn modular_rank_bounds_rational_rank() {
        let dense = vec![vec![2, 4, 1], vec![1, 2, 0], vec![3, 6, 1]];
        let rq = rank(sparse_rows(
            &dense
                .iter()
                .map(|r| r.iter().map(|&v| q(v)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        ));
        let rp = rank(sparse_rows(
            &dense
                .iter()
                .map(|r| r.iter().map(|&v| Fp::from_i64(v)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        ));
        assert_eq!(rq, 2);
        assert_eq!(rp, 2);
    }

    #[test]
    fn fp_inverse() {
        let a = Fp::from_i64(-7);
        assert_eq!(Field::times(&a, &a.inverse()), Fp(1));
    }

    #[test]
    fn solve_and_det() {
        let a = vec![vec![q(1), q(1)], vec![q(0), q(1)]];
        let x = solve(&a, &[q(0), q(1)]).unwrap();
        assert_eq!(x, vec![q(-1), q(1)]);
        assert_eq!(det_i64(&[vec![1, 1], vec![0, 1]]), 1);
        assert_eq!(det_i64(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det_i64(&[vec![2, 4], vec![1, 2]]), 0);
        assert_eq!(det_i64(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]), 4);
        assert!(solve(&[vec![q(1), q(2)], vec![q(2), q(4)]], &[q(1), q(1)]).is_none());
    }
}
