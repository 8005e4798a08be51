//! Exact sparse linear algebra over ℚ.
//!
//! [`Rref`] keeps a reduced row echelon basis and accepts rows one at a time, so large
//! overdetermined systems never materialize as dense matrices. Pivots are taken at the
//! smallest available column; callers order columns so that variables they want left free
//! come last.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::poly::Q;

pub type SparseRow = BTreeMap<usize, Q>;

#[derive(Clone, Debug, Default)]
pub struct Rref {
    ncols: usize,
    rows: Vec<SparseRow>,
    /// pivot column → index into `rows`
    pivots: BTreeMap<usize, usize>,
}

impl Rref {
    pub fn new(ncols: usize) -> Self {
        Rref { ncols, rows: Vec::new(), pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn free_cols(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// Row with pivot in `col`, if any.
    pub fn pivot_row(&self, col: usize) -> Option<&SparseRow> {
        self.pivots.get(&col).map(|&i| &self.rows[i])
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseRow)> {
        self.pivots.iter().map(|(c, i)| (*c, &self.rows[*i]))
    }

    /// Reduces `row` against the current basis.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let hits: Vec<usize> = row.keys().copied().filter(|c| self.pivots.contains_key(c)).collect();
        for c in hits {
            let f = match row.get(&c) {
                Some(f) => f.clone(),
                None => continue,
            };
            let prow = &self.rows[self.pivots[&c]];
            axpy(&mut row, &-f, prow);
        }
        row
    }

    /// Adds a row; returns true if the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        assert!(row.keys().all(|c| *c < self.ncols), "column out of range");
        let mut row = self.reduce(row);
        let Some((&p, lead)) = row.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        for r in self.rows.iter_mut() {
            if let Some(f) = r.get(&p).cloned() {
                axpy(r, &-f, &row);
            }
        }
        self.pivots.insert(p, self.rows.len());
        self.rows.push(row);
        true
    }

    pub fn insert_dense(&mut self, row: &[Q]) -> bool {
        self.insert(sparse(row))
    }

    /// Whether `row` lies in the row space.
    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone()).is_empty()
    }

    /// Basis of `{x : row·x = 0 for every row}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        self.free_cols()
            .into_iter()
            .map(|f| {
                let mut v = vec![Q::zero(); self.ncols];
                v[f] = Q::one();
                for (p, row) in self.rows() {
                    if let Some(c) = row.get(&f) {
                        v[p] = -c;
                    }
                }
                v
            })
            .collect()
    }
}

/// `row += f * other`, dropping zeros.
pub fn axpy(row: &mut SparseRow, f: &Q, other: &SparseRow) {
    if f.is_zero() {
        return;
    }
    for (c, v) in other {
        let add = f * v;
        match row.entry(*c) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(add);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += add;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

pub fn sparse(row: &[Q]) -> SparseRow {
    row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
}

pub fn dot(row: &SparseRow, x: &[Q]) -> Q {
    row.iter().fold(Q::zero(), |acc, (c, v)| acc + v * &x[*c])
}

/// An affine system `Σ a_j x_j + c = 0` over `n` unknowns; the constant lives in column `n`.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    n: usize,
    rref: Rref,
    inconsistent: bool,
}

/// General solution `x = particular + Σ t_k basis_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Q>,
    pub basis: Vec<Vec<Q>>,
}

impl AffineSystem {
    pub fn new(n: usize) -> Self {
        AffineSystem { n, rref: Rref::new(n + 1), inconsistent: false }
    }

    pub fn unknowns(&self) -> usize {
        self.n
    }

    /// Adds `Σ coeffs[j] x_j + constant = 0`.
    pub fn push(&mut self, coeffs: SparseRow, constant: Q) {
        let mut row = coeffs;
        if !constant.is_zero() {
            row.insert(self.n, constant);
        }
        self.rref.insert(row);
        if self.rref.pivots.contains_key(&self.n) {
            self.inconsistent = true;
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.rref.rank() - usize::from(self.inconsistent)
    }

    pub fn solve(&self) -> Option<AffineSolution> {
        if self.inconsistent {
            return None;
        }
        let mut particular = vec![Q::zero(); self.n];
        for (p, row) in self.rref.rows() {
            if let Some(c) = row.get(&self.n) {
                particular[p] = -c;
            }
        }
        let basis = self
            .rref
            .nullspace()
            .into_iter()
            .filter(|v| v[self.n].is_zero())
            .map(|mut v| {
                v.truncate(self.n);
                v
            })
            .collect();
        Some(AffineSolution { particular, basis })
    }
}

/// Rank of a list of dense vectors.
pub fn rank_of(vectors: &[Vec<Q>], ncols: usize) -> usize {
    let mut r = Rref::new(ncols);
    for v in vectors {
        r.insert_dense(v);
    }
    r.rank()
}

/// True if every vector of `a` lies in the span of `b`.
pub fn span_contains(b: &[Vec<Q>], a: &[Vec<Q>], ncols: usize) -> bool {
    let mut r = Rref::new(ncols);
    for v in b {
        r.insert_dense(v);
    }
    a.iter().all(|v| r.contains(&sparse(v)))
}

/// For an inconsistent system `rows · x = rhs`, finds `y` with `yᵀ·rows = 0` and
/// `yᵀ·rhs = 1`. Returns `None` when the system is consistent.
pub fn infeasibility_certificate(rows: &[SparseRow], rhs: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let m = rows.len();
    // unknowns y_0..y_{m-1}; one equation per column of `rows`, plus yᵀ·rhs − 1 = 0
    let mut cols: Vec<SparseRow> = vec![SparseRow::new(); ncols];
    for (i, row) in rows.iter().enumerate() {
        for (c, v) in row {
            cols[*c].insert(i, v.clone());
        }
    }
    let mut sys = AffineSystem::new(m);
    for col in cols {
        if !col.is_empty() {
            sys.push(col, Q::zero());
        }
    }
    sys.push(sparse(rhs), -Q::one());
    let sol = sys.solve()?;
    Some(sol.particular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;
    use proptest::prelude::*;

    fn qv(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|x| q(*x)).collect()
    }

    #[test]
    fn nullspace_of_small_matrix() {
        let mut r = Rref::new(3);
        r.insert_dense(&qv(&[1, 2, 3]));
        r.insert_dense(&qv(&[2, 4, 6]));
        assert_eq!(r.rank(), 1);
        let ns = r.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(&sparse(&qv(&[1, 2, 3])), v).is_zero());
        }
    }

    #[test]
    fn affine_solution_and_inconsistency() {
        let mut s = AffineSystem::new(2);
        s.push(sparse(&qv(&[1, 1])), q(-3)); // x + y = 3
        s.push(sparse(&qv(&[1, -1])), q(-1)); // x - y = 1
        let sol = s.solve().unwrap();
        assert_eq!(sol.particular, qv(&[2, 1]));
        assert!(sol.basis.is_empty());
        s.push(sparse(&qv(&[1, 0])), q(0)); // x = 0
        assert!(!s.is_consistent());
        assert!(s.solve().is_none());
    }

    #[test]
    fn certificate_for_inconsistent_system() {
        let rows = vec![sparse(&qv(&[1, 1])), sparse(&qv(&[2, 2]))];
        let rhs = qv(&[1, 3]);
        let y = infeasibility_certificate(&rows, &rhs, 2).unwrap();
        for c in 0..2 {
            let s: Q = rows.iter().zip(&y).map(|(r, yi)| r.get(&c).cloned().unwrap_or_default() * yi).sum();
            assert!(s.is_zero());
        }
        let s: Q = rhs.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert_eq!(s, q(1));
        assert!(infeasibility_certificate(&rows, &qv(&[1, 2]), 2).is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..=3, 20)) {
            let mut r = Rref::new(5);
            for row in entries.chunks(5) {
                r.insert_dense(&qv(row));
            }
            let ns = r.nullspace();
            prop_assert_eq!(r.rank() + ns.len(), 5);
            for row in entries.chunks(5) {
                for v in &ns {
                    prop_assert!(dot(&sparse(&qv(row)), v).is_zero());
                }
            }
        }
    }
}
