//! Sparse row echelon forms over any [`Field`].

use rayon::prelude::*;

use crate::scalars::Field;

/// Sorted by column, no explicit zeros.
pub type SparseVec<F> = Vec<(usize, F)>;

#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pub ctx: F::Ctx,
    pub ncols: usize,
    rows: Vec<SparseVec<F>>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(ctx: F::Ctx, ncols: usize) -> Self {
        Echelon { ctx, ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<F>] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn pivot_row_of(&self, col: usize) -> Option<&SparseVec<F>> {
        self.pivot_row[col].map(|r| &self.rows[r])
    }

    fn densify(&self, v: &[(usize, F)]) -> Vec<F> {
        let mut acc = vec![F::zero_in(&self.ctx); self.ncols];
        for (c, x) in v {
            acc[*c] = acc[*c].clone() + x.clone();
        }
        acc
    }

    /// Eliminates every pivot column of `acc` at or after `from`, skipping `skip`.
    fn eliminate(&self, acc: &mut [F], from: usize, skip: Option<usize>) {
        for col in from..self.ncols {
            if acc[col].is_zero() || Some(col) == skip {
                continue;
            }
            if let Some(r) = self.pivot_row[col] {
                let f = acc[col].clone();
                for (c, x) in &self.rows[r] {
                    acc[*c] = acc[*c].clone() - f.clone() * x.clone();
                }
            }
        }
    }

    fn sparsify(acc: Vec<F>) -> SparseVec<F> {
        acc.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
    }

    /// Residual of `v` modulo the row space (zero at every pivot column).
    pub fn reduce(&self, v: &[(usize, F)]) -> SparseVec<F> {
        let mut acc = self.densify(v);
        let from = v.iter().map(|e| e.0).min().unwrap_or(self.ncols);
        self.eliminate(&mut acc, from, None);
        Self::sparsify(acc)
    }

    pub fn contains(&self, v: &[(usize, F)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the row space; returns false if it was dependent.
    pub fn insert(&mut self, v: &[(usize, F)]) -> bool {
        let r = self.reduce(v);
        self.push_reduced(r)
    }

    fn push_reduced(&mut self, mut r: SparseVec<F>) -> bool {
        if r.is_empty() {
            return false;
        }
        let inv = r[0].1.inv();
        for e in r.iter_mut() {
            e.1 = e.1.clone() * inv.clone();
        }
        self.pivot_row[r[0].0] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    /// Inserts many vectors; reduction of each batch runs in parallel against
    /// the current basis, then survivors are inserted sequentially.
    pub fn insert_all(&mut self, vs: &[SparseVec<F>]) {
        const BATCH: usize = 256;
        for chunk in vs.chunks(BATCH) {
            let reduced: Vec<SparseVec<F>> = chunk.par_iter().map(|v| self.reduce(v)).collect();
            for r in reduced {
                if !r.is_empty() {
                    self.insert(&r);
                }
            }
        }
    }

    /// Brings the basis to reduced row echelon form.
    pub fn rref(&mut self) {
        let new_rows: Vec<SparseVec<F>> = self
            .rows
            .par_iter()
            .map(|row| {
                let p = row[0].0;
                let mut acc = self.densify(row);
                self.eliminate(&mut acc, p + 1, None);
                Self::sparsify(acc)
            })
            .collect();
        self.rows = new_rows;
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| self.pivot_row[*c].is_some()).collect()
    }

    /// Normal form of the unit vector at `col` after [`Self::rref`]: itself if
    /// free, else minus the non-pivot tail of its pivot row.
    pub fn normal_form_of_col(&self, col: usize) -> SparseVec<F> {
        match self.pivot_row[col] {
            None => vec![(col, F::one_in(&self.ctx))],
            Some(r) => self.rows[r][1..].iter().map(|(c, x)| (*c, -x.clone())).collect(),
        }
    }
}

/// Rank of a list of sparse vectors.
pub fn rank<F: Field>(ctx: F::Ctx, ncols: usize, vs: &[SparseVec<F>]) -> usize {
    let mut e = Echelon::new(ctx, ncols);
    e.insert_all(vs);
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{qi, Fp, Q};

    fn v(xs: &[(usize, i64)]) -> SparseVec<Q> {
        xs.iter().map(|(c, x)| (*c, qi(*x))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut e: Echelon<Q> = Echelon::new((), 3);
        assert!(e.insert(&v(&[(0, 1), (1, 1)])));
        assert!(e.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(&[(0, 1), (2, -1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(0, 2), (1, 3), (2, 1)])));
        assert!(!e.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn rref_normal_forms() {
        let mut e: Echelon<Q> = Echelon::new((), 3);
        e.insert(&v(&[(0, 1), (1, 1)]));
        e.insert(&v(&[(1, 1), (2, 1)]));
        e.rref();
        // e0 = -e1 = e2 modulo the rows
        assert_eq!(e.normal_form_of_col(0), v(&[(2, 1)]));
        assert_eq!(e.normal_form_of_col(1), v(&[(2, -1)]));
    }

    #[test]
    fn modular_rank() {
        let p = 7u64;
        let vs: Vec<SparseVec<Fp>> = vec![
            vec![(0, Fp::new(1, p)), (1, Fp::new(2, p))],
            vec![(0, Fp::new(4, p)), (1, Fp::new(1, p))],
        ];
        // det = 1 - 8 = -7 = 0 mod 7
        assert_eq!(rank(p, 2, &vs), 1);
    }
}
