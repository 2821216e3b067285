//! Dense matrices over a finite field: the elimination engine shared by the
//! public modules. Row-reduced echelon form is the canonical representative
//! used for subspace equality throughout the crate.

use crate::gf::{FieldElement, FiniteField};

#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub f: FiniteField,
    pub a: Vec<FieldElement>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(fm, "Mat {}x{} over GF({})", self.rows, self.cols, self.f.order())?;
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(fm, "  [{}]", line.join(" "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize, f: FiniteField) -> Mat {
        Mat {
            rows,
            cols,
            f,
            a: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize, f: FiniteField) -> Mat {
        let mut m = Mat::zero(n, n, f);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>, cols: usize, f: FiniteField) -> Mat {
        let mut m = Mat::zero(rows.len(), cols, f);
        for (r, row) in rows.iter().enumerate() {
            debug_assert_eq!(row.len(), cols);
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.a[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.a[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|v| v.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows, self.f.clone());
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let f = &self.f;
        let mut m = Mat::zero(self.rows, other.cols, f.clone());
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(m.get(r, c), f.mul(a, other.get(k, c)));
                    m.set(r, c, v);
                }
            }
        }
        m
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.f;
        let mut m = self.clone();
        for i in 0..m.a.len() {
            m.a[i] = f.sub(m.a[i], other.a[i]);
        }
        m
    }

    pub fn neg(&self) -> Mat {
        let f = &self.f;
        let mut m = self.clone();
        for v in m.a.iter_mut() {
            *v = f.neg(*v);
        }
        m
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut m = Mat::zero(rows.len(), cols.len(), self.f.clone());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                m.set(ri, ci, self.get(r, c));
            }
        }
        m
    }

    fn scale_row(&mut self, r: usize, s: FieldElement) {
        let f = self.f.clone();
        for c in 0..self.cols {
            let v = f.mul(self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    /// row r -= s * row r2
    fn axpy_row(&mut self, r: usize, r2: usize, s: FieldElement) {
        if s.is_zero() {
            return;
        }
        let f = self.f.clone();
        for c in 0..self.cols {
            let v = f.sub(self.get(r, c), f.mul(s, self.get(r2, c)));
            self.set(r, c, v);
        }
    }

    /// In-place RREF. Returns the pivot columns; the rank is their count.
    /// Zero rows are removed, so afterwards `self.rows` equals the rank.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for cc in 0..self.cols {
                    let tmp = self.get(r, cc);
                    self.set(r, cc, self.get(pr, cc));
                    self.set(pr, cc, tmp);
                }
            }
            let inv = self.f.inv(self.get(r, c)).unwrap();
            self.scale_row(r, inv);
            for i in 0..self.rows {
                if i != r {
                    let s = self.get(i, c);
                    self.axpy_row(i, r, s);
                }
            }
            pivots.push(c);
            r += 1;
        }
        // drop zero rows
        self.a.truncate(r * self.cols);
        self.rows = r;
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref();
        m.rows
    }

    pub fn det(&self) -> FieldElement {
        debug_assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return FieldElement::ONE; // forced by the Tucker identity at X = Y
        }
        let f = self.f.clone();
        let mut m = self.clone();
        let mut det = FieldElement::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return FieldElement::ZERO;
            };
            if pr != c {
                for cc in 0..n {
                    let tmp = m.get(c, cc);
                    m.set(c, cc, m.get(pr, cc));
                    m.set(pr, cc, tmp);
                }
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).unwrap();
            for i in (c + 1)..n {
                let s = f.mul(m.get(i, c), inv);
                m.axpy_row(i, c, s);
            }
        }
        det
    }

    /// Inverse of a nonsingular square matrix; None when singular.
    pub fn inverse(&self) -> Option<Mat> {
        debug_assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n, self.f.clone());
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, FieldElement::ONE);
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(aug.select(&rows, &cols))
    }

    /// Basis of the right nullspace `{x : self * x = 0}`, rows = basis vectors.
    pub fn nullspace(&self) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref();
        let rank = m.rows;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = self.f.clone();
        let mut basis = Mat::zero(free.len(), self.cols, f.clone());
        for (bi, &fc) in free.iter().enumerate() {
            basis.set(bi, fc, FieldElement::ONE);
            for (pi, &pc) in pivots.iter().enumerate().take(rank) {
                basis.set(bi, pc, f.neg(m.get(pi, fc)));
            }
        }
        basis
    }

    /// Reduce `row` modulo the rowspace of `self`, which must be in RREF
    /// with the given pivot columns. The result is the canonical coset
    /// representative.
    pub fn reduce_row(&self, row: &[FieldElement], pivots: &[usize]) -> Vec<FieldElement> {
        let f = &self.f;
        let mut v = row.to_vec();
        for (pi, &pc) in pivots.iter().enumerate() {
            let s = v[pc];
            if !s.is_zero() {
                for (c, slot) in v.iter_mut().enumerate() {
                    *slot = f.sub(*slot, f.mul(s, self.get(pi, c)));
                }
            }
        }
        v
    }

    /// One solution of `x * self = target` (row-vector convention), if any.
    pub fn solve_left(&self, target: &[FieldElement]) -> Option<Vec<FieldElement>> {
        debug_assert_eq!(target.len(), self.cols);
        // Solve self^T y^T = target^T via augmented elimination.
        let t = self.transpose();
        let mut aug = Mat::zero(t.rows, t.cols + 1, self.f.clone());
        for (r, &tv) in target.iter().enumerate() {
            for c in 0..t.cols {
                aug.set(r, c, t.get(r, c));
            }
            aug.set(r, t.cols, tv);
        }
        let pivots = aug.rref();
        if pivots.contains(&t.cols) {
            return None; // inconsistent
        }
        let mut x = vec![FieldElement::ZERO; self.rows];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(pi, t.cols);
        }
        Some(x)
    }
}
