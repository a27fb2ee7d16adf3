//! Small dense exact linear algebra over the ground field.

use crate::field::{GroundField, Scalar};

/// Dense matrix, row major.
#[derive(Clone, Debug)]
pub struct Mat {
    pub field: GroundField,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: GroundField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn from_columns(field: GroundField, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }
}

/// Incremental row-echelon eliminator over the ground field.
///
/// Vectors are inserted one at a time; each insertion either grows the rank
/// or returns the coordinates of the vector in terms of previously inserted
/// pivot vectors (a kernel/membership certificate).
pub struct Eliminator {
    field: GroundField,
    dim: usize,
    /// Reduced rows together with their pivot column.
    rows: Vec<(usize, Vec<Scalar>)>,
    /// For membership certificates: row i of `history` expresses reduced
    /// row i as a combination of the inserted vectors.
    history: Vec<Vec<Scalar>>,
    inserted: usize,
    track_history: bool,
}

impl Eliminator {
    pub fn new(field: GroundField, dim: usize) -> Self {
        Self {
            field,
            dim,
            rows: Vec::new(),
            history: Vec::new(),
            inserted: 0,
            track_history: false,
        }
    }

    pub fn with_history(field: GroundField, dim: usize) -> Self {
        let mut e = Self::new(field, dim);
        e.track_history = true;
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a vector.  Returns `None` if the rank grew, or
    /// `Some(combination)` expressing the vector over previously inserted
    /// ones when it was already in the span (history tracking only;
    /// otherwise `Some(vec![])`).
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.dim);
        let f = self.field;
        let mut combo = if self.track_history {
            let mut c = vec![f.zero(); self.inserted + 1];
            c[self.inserted] = f.one();
            c
        } else {
            Vec::new()
        };
        self.inserted += 1;
        for (pivot_col, row) in &self.rows {
            let c = v[*pivot_col].clone();
            if c.is_zero() {
                continue;
            }
            for k in 0..self.dim {
                let t = f.mul(&c, &row[k]);
                v[k] = f.sub(&v[k], &t);
            }
            if self.track_history {
                let idx = self
                    .rows
                    .iter()
                    .position(|(pc, _)| pc == pivot_col)
                    .unwrap();
                let h = self.history[idx].clone();
                if combo.len() < self.inserted {
                    combo.resize(self.inserted, f.zero());
                }
                for (k, hv) in h.iter().enumerate() {
                    let t = f.mul(&c, hv);
                    combo[k] = f.sub(&combo[k], &t);
                }
            }
        }
        let pivot = v.iter().position(|x| !x.is_zero());
        match pivot {
            None => {
                if self.track_history {
                    combo.resize(self.inserted, f.zero());
                    // combo expresses 0 = Σ combo_i · inserted_i with the last
                    // coefficient 1; negate the earlier ones to express the
                    // last vector over the previous.
                    Some(combo)
                } else {
                    Some(Vec::new())
                }
            }
            Some(p) => {
                let inv = f.inv(&v[p]).expect("pivot nonzero");
                for k in 0..self.dim {
                    v[k] = f.mul(&v[k], &inv);
                }
                if self.track_history {
                    combo.resize(self.inserted, f.zero());
                    for c in combo.iter_mut() {
                        *c = f.mul(c, &inv);
                    }
                    self.history.push(combo);
                }
                self.rows.push((p, v));
                None
            }
        }
    }

    /// True iff `v` lies in the current span (does not insert).
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot_col, row) in &self.rows {
            let c = v[*pivot_col].clone();
            if c.is_zero() {
                continue;
            }
            for k in 0..self.dim {
                let t = f.mul(&c, &row[k]);
                v[k] = f.sub(&v[k], &t);
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// Residue of `v` after reduction by the span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut v = v.to_vec();
        for (pivot_col, row) in &self.rows {
            let c = v[*pivot_col].clone();
            if c.is_zero() {
                continue;
            }
            for k in 0..self.dim {
                let t = f.mul(&c, &row[k]);
                v[k] = f.sub(&v[k], &t);
            }
        }
        v
    }
}

/// Rank of a matrix (columns as vectors).
pub fn rank(m: &Mat) -> usize {
    let mut e = Eliminator::new(m.field, m.rows);
    for c in 0..m.cols {
        e.insert(m.column(c));
    }
    e.rank()
}

/// Basis of the column kernel: vectors `k` with `M·k = 0`.
pub fn kernel_basis(m: &Mat) -> Vec<Vec<Scalar>> {
    let f = m.field;
    let mut e = Eliminator::with_history(f, m.rows);
    let mut out = Vec::new();
    for c in 0..m.cols {
        if let Some(combo) = e.insert(m.column(c)) {
            // combo has length = number inserted so far, last entry 1 for
            // the current column; combo encodes 0 = Σ combo_i v_i after
            // sign bookkeeping: reconstruct kernel vector directly.
            let mut k = vec![f.zero(); m.cols];
            for (i, coeff) in combo.iter().enumerate() {
                k[i] = coeff.clone();
            }
            // The eliminator reduced v_c to zero: v_c = Σ_{i<c} a_i v_i with
            // a_i = -combo_i; kernel vector: v_c - Σ a_i v_i = 0.
            k[c] = f.one();
            for item in k.iter_mut().take(c) {
                *item = item.clone();
            }
            out.push(k);
        }
    }
    out
}

/// Solves `M·x = b` (columns as generators).  Returns one solution.
pub fn solve(m: &Mat, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let f = m.field;
    let mut e = Eliminator::with_history(f, m.rows);
    for c in 0..m.cols {
        e.insert(m.column(c));
    }
    let before = e.rank();
    let mut probe = Eliminator::with_history(f, m.rows);
    for c in 0..m.cols {
        probe.insert(m.column(c));
    }
    let res = probe.insert(b.to_vec());
    match res {
        Some(combo) if probe.rank() == before => {
            // b = Σ (-combo_i) v_i over the inserted columns.
            let mut x = vec![f.zero(); m.cols];
            for (i, c) in combo.iter().enumerate().take(m.cols) {
                x[i] = f.neg(c);
            }
            Some(x)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq() -> GroundField {
        GroundField::Rationals
    }

    #[test]
    fn rank_and_kernel() {
        let f = fq();
        // columns (1,0), (0,1), (1,1): rank 2, kernel (1,1,-1)
        let m = Mat::from_columns(
            f,
            2,
            &[
                vec![f.one(), f.zero()],
                vec![f.zero(), f.one()],
                vec![f.one(), f.one()],
            ],
        );
        assert_eq!(rank(&m), 2);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        // verify M·k = 0
        for r in 0..2 {
            let mut acc = f.zero();
            for c in 0..3 {
                acc = f.add(&acc, &f.mul(m.at(r, c), &k[0][c]));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn solve_simple() {
        let f = fq();
        let m = Mat::from_columns(
            f,
            2,
            &[vec![f.one(), f.one()], vec![f.zero(), f.one()]],
        );
        let b = vec![f.from_i64(3), f.from_i64(5)];
        let x = solve(&m, &b).unwrap();
        // verify
        for r in 0..2 {
            let mut acc = f.zero();
            for c in 0..2 {
                acc = f.add(&acc, &f.mul(m.at(r, c), &x[c]));
            }
            assert_eq!(acc, b[r]);
        }
        let unsolvable = Mat::from_columns(f, 2, &[vec![f.one(), f.zero()]]);
        assert!(solve(&unsolvable, &vec![f.zero(), f.one()]).is_none());
    }
}
