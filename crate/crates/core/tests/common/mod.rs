#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use cascade_kit::rootsys::RootSystem;

/// Root data rebuilt from the positive roots and the form, without the
/// library's cascade or subsystem machinery.
pub struct Oracle {
    pub roots: Vec<Vec<i64>>,
    all: HashSet<Vec<i64>>,
    gram: Vec<Vec<i64>>,
}

impl Oracle {
    pub fn new(rs: &RootSystem) -> Self {
        let roots: Vec<Vec<i64>> = rs.positive_roots().iter().map(|r| r.0.clone()).collect();
        let mut all: HashSet<Vec<i64>> = roots.iter().cloned().collect();
        all.extend(roots.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        Self {
            roots,
            all,
            gram: rs.gram.clone(),
        }
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += x * self.gram[i][j] * y;
            }
        }
        s
    }

    pub fn strongly_orthogonal(&self, a: usize, b: usize) -> bool {
        let (x, y) = (&self.roots[a], &self.roots[b]);
        let plus: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
        let minus: Vec<i64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
        self.inner(x, y) == 0 && !self.all.contains(&plus) && !self.all.contains(&minus)
    }

    /// Highest roots of the irreducible pieces of `set`, then recurse on
    /// what is orthogonal to each. Pieces are connected components of the
    /// non-orthogonality graph.
    pub fn recursive_cascade(&self) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::new();
        self.recurse((0..self.roots.len()).collect(), &mut out);
        out
    }

    fn recurse(&self, set: Vec<usize>, out: &mut BTreeSet<Vec<i64>>) {
        let mut seen = vec![false; set.len()];
        for start in 0..set.len() {
            if seen[start] {
                continue;
            }
            let mut piece = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < piece.len() {
                let a = set[piece[k]];
                for (j, &b) in set.iter().enumerate() {
                    if !seen[j] && self.inner(&self.roots[a], &self.roots[b]) != 0 {
                        seen[j] = true;
                        piece.push(j);
                    }
                }
                k += 1;
            }
            let members: Vec<usize> = piece.iter().map(|&j| set[j]).collect();
            let top = *members
                .iter()
                .max_by_key(|&&r| self.roots[r].iter().sum::<i64>())
                .unwrap();
            out.insert(self.roots[top].clone());
            let rest: Vec<usize> = members
                .into_iter()
                .filter(|&r| self.inner(&self.roots[r], &self.roots[top]) == 0)
                .collect();
            self.recurse(rest, out);
        }
    }

    /// Sizes of all inclusion-maximal strongly orthogonal sets.
    pub fn maximal_so_sizes(&self) -> BTreeSet<usize> {
        let n = self.roots.len();
        let so: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a != b && self.strongly_orthogonal(a, b)).collect()).collect();
        let mut sizes = BTreeSet::new();
        let mut cur = Vec::new();
        self.grow(&so, 0, &mut cur, &mut sizes);
        sizes
    }

    fn grow(&self, so: &[Vec<bool>], from: usize, cur: &mut Vec<usize>, sizes: &mut BTreeSet<usize>) {
        let n = so.len();
        let compatible = |c: &[usize], x: usize| c.iter().all(|&y| so[x][y]);
        if (0..n).all(|x| cur.contains(&x) || !compatible(cur, x)) {
            sizes.insert(cur.len());
        }
        for x in from..n {
            if compatible(cur, x) {
                cur.push(x);
                self.grow(so, x + 1, cur, sizes);
                cur.pop();
            }
        }
    }

    /// True when `set` is strongly orthogonal and no root can be added.
    pub fn is_maximal_so(&self, set: &BTreeSet<Vec<i64>>) -> bool {
        let idx: Vec<usize> = set
            .iter()
            .map(|r| self.roots.iter().position(|x| x == r).unwrap())
            .collect();
        let pairwise = idx.iter().all(|&a| idx.iter().all(|&b| a == b || self.strongly_orthogonal(a, b)));
        let extendable = (0..self.roots.len()).any(|x| !idx.contains(&x) && idx.iter().all(|&y| self.strongly_orthogonal(x, y)));
        pairwise && !extendable
    }
}

pub fn emit(line: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{line}");
}
