//! Labeled square matrices over GF(q): principal submatrices, pivots,
//! Schur complements, negations, the Tucker determinant identity, and
//! isomorphism search.

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FiniteField};
use crate::linalg::Mat;
use crate::subset::{self, Subset};
use std::fmt;

/// Ordered set of distinct element names indexing matrix rows/columns and
/// chain coordinates. The order is the canonical iteration order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<GroundSet> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel { label: l.clone() });
            }
        }
        Ok(GroundSet { labels })
    }

    /// Ground set labeled 1..=n.
    pub fn numbered(n: usize) -> GroundSet {
        GroundSet {
            labels: (1..=n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel {
                label: label.to_string(),
            })
    }

    pub fn full_mask(&self) -> Subset {
        subset::full(self.len())
    }

    pub fn subset_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        let mut m = 0u32;
        for l in labels {
            m |= 1 << self.position(l.as_ref())?;
        }
        Ok(m)
    }

    pub fn labels_from_subset(&self, s: Subset) -> Vec<&str> {
        subset::members(s)
            .filter(|&i| i < self.len())
            .map(|i| self.labels[i].as_str())
            .collect()
    }

    /// The ground set on the elements of `keep`, in the same order.
    pub fn restricted(&self, keep: Subset) -> GroundSet {
        GroundSet {
            labels: subset::members(keep)
                .filter(|&i| i < self.len())
                .map(|i| self.labels[i].clone())
                .collect(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixKind {
    Symmetric,
    SkewSymmetric,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Symmetric => "symmetric",
            MatrixKind::SkewSymmetric => "skew",
        }
    }
}

/// A rectangular, unkinded matrix with row and column labels. Produced by
/// non-principal submatrix selection, raw pivots, and negations.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixGrid {
    pub(crate) row_labels: Vec<String>,
    pub(crate) col_labels: Vec<String>,
    pub(crate) mat: Mat,
}

impl fmt::Debug for MatrixGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MatrixGrid rows={:?} cols={:?}\n{:?}",
            self.row_labels, self.col_labels, self.mat
        )
    }
}

impl MatrixGrid {
    pub fn field(&self) -> &FiniteField {
        &self.mat.f
    }

    pub fn nrows(&self) -> usize {
        self.mat.rows
    }

    pub fn ncols(&self) -> usize {
        self.mat.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.mat.get(r, c)
    }

    pub fn rank(&self) -> u32 {
        self.mat.rank() as u32
    }

    /// Determinant of a square grid; the empty grid has determinant 1.
    pub fn det(&self) -> FieldElement {
        debug_assert_eq!(self.mat.rows, self.mat.cols);
        self.mat.det()
    }

    pub fn is_square_labeled(&self) -> bool {
        self.row_labels == self.col_labels
    }

    /// Principal subgrid; requires identically labeled rows and columns.
    pub fn principal(&self, x: Subset) -> MatrixGrid {
        debug_assert!(self.is_square_labeled());
        let idx: Vec<usize> = subset::members(x).filter(|&i| i < self.nrows()).collect();
        let labels: Vec<String> = idx.iter().map(|&i| self.row_labels[i].clone()).collect();
        MatrixGrid {
            row_labels: labels.clone(),
            col_labels: labels,
            mat: self.mat.select(&idx, &idx),
        }
    }

    /// The pivot `M*Y` of a square labeled grid on a nonsingular principal
    /// block Y: `[[A^-1, A^-1 B], [-C A^-1, D - C A^-1 B]]` in the original
    /// label order.
    pub fn pivot_raw(&self, y: Subset) -> Result<MatrixGrid> {
        debug_assert!(self.is_square_labeled());
        let n = self.nrows();
        let f = self.field().clone();
        let yv: Vec<usize> = subset::members(y).filter(|&i| i < n).collect();
        let rest: Vec<usize> = (0..n).filter(|i| !subset::contains(y, *i)).collect();
        let a = self.mat.select(&yv, &yv);
        let Some(ainv) = a.inverse() else {
            return Err(Error::SingularPivotBlock);
        };
        let b = self.mat.select(&yv, &rest);
        let c = self.mat.select(&rest, &yv);
        let d = self.mat.select(&rest, &rest);
        let ainv_b = ainv.mul(&b);
        let c_ainv = c.mul(&ainv);
        let schur = d.sub(&c_ainv.mul(&b));
        let mut out = Mat::zero(n, n, f);
        let place = |out: &mut Mat, rows: &[usize], cols: &[usize], m: &Mat| {
            for (ri, &r) in rows.iter().enumerate() {
                for (ci, &c) in cols.iter().enumerate() {
                    out.set(r, c, m.get(ri, ci));
                }
            }
        };
        place(&mut out, &yv, &yv, &ainv);
        place(&mut out, &yv, &rest, &ainv_b);
        place(&mut out, &rest, &yv, &c_ainv.neg());
        place(&mut out, &rest, &rest, &schur);
        Ok(MatrixGrid {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            mat: out,
        })
    }
}

/// A square matrix indexed by a ground set, tagged symmetric or
/// skew-symmetric. Skew-symmetric matrices have zero diagonal even in
/// characteristic 2.
#[derive(Clone, PartialEq, Eq)]
pub struct LabeledMatrix {
    ground: GroundSet,
    field: FiniteField,
    kind: MatrixKind,
    mat: Mat,
}

impl fmt::Debug for LabeledMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LabeledMatrix {:?} {:?} on {:?}\n{:?}",
            self.kind,
            self.field,
            self.ground.labels(),
            self.mat
        )
    }
}

impl LabeledMatrix {
    pub fn new(
        ground: GroundSet,
        field: FiniteField,
        kind: MatrixKind,
        entries: Vec<FieldElement>,
    ) -> Result<LabeledMatrix> {
        let n = ground.len();
        assert_eq!(entries.len(), n * n, "entry grid must be {n}x{n}");
        let mat = Mat {
            rows: n,
            cols: n,
            f: field.clone(),
            a: entries,
        };
        let m = LabeledMatrix {
            ground,
            field,
            kind,
            mat,
        };
        m.check_kind()?;
        Ok(m)
    }

    pub fn from_fn(
        ground: GroundSet,
        field: FiniteField,
        kind: MatrixKind,
        f: impl Fn(usize, usize) -> FieldElement,
    ) -> Result<LabeledMatrix> {
        let n = ground.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        LabeledMatrix::new(ground, field, kind, entries)
    }

    pub fn zero(ground: GroundSet, field: FiniteField, kind: MatrixKind) -> LabeledMatrix {
        let n = ground.len();
        LabeledMatrix {
            mat: Mat::zero(n, n, field.clone()),
            ground,
            field,
            kind,
        }
    }

    fn check_kind(&self) -> Result<()> {
        let n = self.ground.len();
        let f = &self.field;
        for i in 0..n {
            for j in 0..n {
                let ok = match self.kind {
                    MatrixKind::Symmetric => self.mat.get(i, j) == self.mat.get(j, i),
                    MatrixKind::SkewSymmetric => {
                        self.mat.get(i, j) == f.neg(self.mat.get(j, i))
                            && (i != j || self.mat.get(i, i).is_zero())
                    }
                };
                if !ok {
                    return Err(Error::KindViolation {
                        kind: self.kind.as_str(),
                        row: self.ground.label(i).to_string(),
                        col: self.ground.label(j).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.mat.get(i, j)
    }

    pub fn as_grid(&self) -> MatrixGrid {
        MatrixGrid {
            row_labels: self.ground.labels().to_vec(),
            col_labels: self.ground.labels().to_vec(),
            mat: self.mat.clone(),
        }
    }

    /// X x Y submatrix, unkinded.
    pub fn submatrix(&self, x: Subset, y: Subset) -> MatrixGrid {
        let xi: Vec<usize> = subset::members(x).filter(|&i| i < self.n()).collect();
        let yi: Vec<usize> = subset::members(y).filter(|&i| i < self.n()).collect();
        MatrixGrid {
            row_labels: xi.iter().map(|&i| self.ground.label(i).to_string()).collect(),
            col_labels: yi.iter().map(|&i| self.ground.label(i).to_string()).collect(),
            mat: self.mat.select(&xi, &yi),
        }
    }

    /// Principal submatrix M[X], preserving the kind.
    pub fn principal(&self, x: Subset) -> LabeledMatrix {
        let xi: Vec<usize> = subset::members(x).filter(|&i| i < self.n()).collect();
        LabeledMatrix {
            ground: self.ground.restricted(x),
            field: self.field.clone(),
            kind: self.kind,
            mat: self.mat.select(&xi, &xi),
        }
    }

    pub fn det(&self) -> FieldElement {
        self.mat.det()
    }

    /// rk M[X, V \ X].
    pub fn cut_rank(&self, x: Subset) -> u32 {
        let full = self.ground.full_mask();
        self.submatrix(x, full & !x).rank()
    }

    /// The raw pivot M*Y as an unkinded grid.
    pub fn pivot_raw(&self, y: Subset) -> Result<MatrixGrid> {
        self.as_grid().pivot_raw(y)
    }

    /// The kinded pivot: `M*Y` for skew-symmetric M (again skew-symmetric),
    /// `I_Y (M*Y)` for symmetric M (again symmetric).
    pub fn pivot(&self, y: Subset) -> Result<LabeledMatrix> {
        let raw = self.pivot_raw(y)?;
        let mat = match self.kind {
            MatrixKind::SkewSymmetric => raw.mat,
            MatrixKind::Symmetric => {
                let mut m = raw.mat;
                let f = self.field.clone();
                for i in subset::members(y).filter(|&i| i < self.n()) {
                    for c in 0..m.cols {
                        let v = f.neg(m.get(i, c));
                        m.set(i, c, v);
                    }
                }
                m
            }
        };
        let out = LabeledMatrix {
            ground: self.ground.clone(),
            field: self.field.clone(),
            kind: self.kind,
            mat,
        };
        debug_assert!(out.check_kind().is_ok());
        Ok(out)
    }

    /// Schur complement (M/A) with A = M[Y], on the ground set V \ Y.
    /// Preserves the kind.
    pub fn schur(&self, y: Subset) -> Result<LabeledMatrix> {
        let n = self.n();
        let yv: Vec<usize> = subset::members(y).filter(|&i| i < n).collect();
        let rest_mask = self.ground.full_mask() & !y;
        let rest: Vec<usize> = subset::members(rest_mask).filter(|&i| i < n).collect();
        let a = self.mat.select(&yv, &yv);
        let Some(ainv) = a.inverse() else {
            return Err(Error::SingularPivotBlock);
        };
        let b = self.mat.select(&yv, &rest);
        let c = self.mat.select(&rest, &yv);
        let d = self.mat.select(&rest, &rest);
        let schur = d.sub(&c.mul(&ainv).mul(&b));
        let out = LabeledMatrix {
            ground: self.ground.restricted(rest_mask),
            field: self.field.clone(),
            kind: self.kind,
            mat: schur,
        };
        debug_assert!(out.check_kind().is_ok());
        Ok(out)
    }

    /// I_X M I_Y: negate rows in X and columns in Y. Unkinded in general.
    pub fn negate(&self, x: Subset, y: Subset) -> MatrixGrid {
        let f = self.field.clone();
        let mut mat = self.mat.clone();
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                let mut v = mat.get(i, j);
                if subset::contains(x, i) {
                    v = f.neg(v);
                }
                if subset::contains(y, j) {
                    v = f.neg(v);
                }
                mat.set(i, j, v);
            }
        }
        MatrixGrid {
            row_labels: self.ground.labels().to_vec(),
            col_labels: self.ground.labels().to_vec(),
            mat,
        }
    }

    /// D M D with D = I_Z. Preserves the kind.
    pub fn negate_principal(&self, z: Subset) -> LabeledMatrix {
        let grid = self.negate(z, z);
        LabeledMatrix {
            ground: self.ground.clone(),
            field: self.field.clone(),
            kind: self.kind,
            mat: grid.mat,
        }
    }

    /// Tucker's identity `det (M*Y)[X] * det M[Y] = det M[X delta Y]`,
    /// exposed as a test oracle. Always true when M[Y] is nonsingular.
    pub fn tucker_identity_holds(&self, y: Subset, x: Subset) -> Result<bool> {
        let f = &self.field;
        let det_y = self.principal(y).det();
        if det_y.is_zero() {
            return Err(Error::SingularPivotBlock);
        }
        let piv = self.pivot_raw(y)?;
        let lhs = f.mul(piv.principal(x).det(), det_y);
        let rhs = self.principal(subset::sym_diff(x, y)).det();
        Ok(lhs == rhs)
    }

    /// All X with det M[X] != 0, in canonical subset order. The empty set is
    /// always present.
    pub fn nonsingular_principal_sets(&self) -> Result<Vec<Subset>> {
        self.nonsingular_principal_sets_with_cap(20)
    }

    pub fn nonsingular_principal_sets_with_cap(&self, cap: usize) -> Result<Vec<Subset>> {
        if self.n() > cap {
            return Err(Error::GroundSetTooLarge { n: self.n(), cap });
        }
        Ok(subset::subsets_of(self.ground.full_mask())
            .into_iter()
            .filter(|&x| !self.principal(x).det().is_zero())
            .collect())
    }

    /// Entry-wise isomorphism search: a permutation `perm` with
    /// `self[i, j] = other[perm[i], perm[j]]`, lexicographically least in
    /// `perm` as an index sequence, found by exhaustive search with
    /// row-multiset pruning.
    pub fn isomorphic(&self, other: &LabeledMatrix) -> Option<Vec<usize>> {
        if self.field != other.field || self.kind != other.kind || self.n() != other.n() {
            return None;
        }
        let n = self.n();
        // Row invariant: diagonal entry plus the sorted multiset of the row
        // and column entries.
        let invariant = |m: &LabeledMatrix, i: usize| -> (u16, Vec<u16>, Vec<u16>) {
            let mut row: Vec<u16> = (0..n).filter(|&j| j != i).map(|j| m.get(i, j).index()).collect();
            let mut col: Vec<u16> = (0..n).filter(|&j| j != i).map(|j| m.get(j, i).index()).collect();
            row.sort_unstable();
            col.sort_unstable();
            (m.get(i, i).index(), row, col)
        };
        let inv1: Vec<_> = (0..n).map(|i| invariant(self, i)).collect();
        let inv2: Vec<_> = (0..n).map(|i| invariant(other, i)).collect();

        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn search(
            k: usize,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            m1: &LabeledMatrix,
            m2: &LabeledMatrix,
            inv1: &[(u16, Vec<u16>, Vec<u16>)],
            inv2: &[(u16, Vec<u16>, Vec<u16>)],
        ) -> bool {
            let n = perm.len();
            if k == n {
                return true;
            }
            for cand in 0..n {
                if used[cand] || inv1[k] != inv2[cand] {
                    continue;
                }
                let consistent = (0..k).all(|j| {
                    m1.get(k, j) == m2.get(cand, perm[j]) && m1.get(j, k) == m2.get(perm[j], cand)
                }) && m1.get(k, k) == m2.get(cand, cand);
                if !consistent {
                    continue;
                }
                perm[k] = cand;
                used[cand] = true;
                if search(k + 1, perm, used, m1, m2, inv1, inv2) {
                    return true;
                }
                used[cand] = false;
                perm[k] = usize::MAX;
            }
            false
        }
        if search(0, &mut perm, &mut used, self, other, &inv1, &inv2) {
            Some(perm)
        } else {
            None
        }
    }

    /// Lexicographically least entry string over all simultaneous row/column
    /// permutations; deduplication key for isomorphism classes.
    pub fn canonical_form(&self) -> Vec<u16> {
        let n = self.n();
        let mut best: Option<Vec<u16>> = None;
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        // DFS over permutations with prefix pruning against the best string.
        fn render_prefix(m: &LabeledMatrix, perm: &[usize]) -> Vec<u16> {
            let k = perm.len();
            let mut out = Vec::with_capacity(k * k);
            for &i in perm {
                for &j in perm {
                    out.push(m.get(i, j).index());
                }
            }
            out
        }
        fn go(
            m: &LabeledMatrix,
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            best: &mut Option<Vec<u16>>,
        ) {
            let n = m.n();
            if perm.len() == n {
                let s = render_prefix(m, perm);
                if best.as_ref().is_none_or(|b| s < *b) {
                    *best = Some(s);
                }
                return;
            }
            for cand in 0..n {
                if used[cand] {
                    continue;
                }
                perm.push(cand);
                // prune: compare the k x k prefix against the best full string's
                // corresponding positions
                let prune = if let Some(b) = best.as_ref() {
                    let k = perm.len();
                    let pref = render_prefix(m, perm);
                    let mut bpref = Vec::with_capacity(k * k);
                    for i in 0..k {
                        for j in 0..k {
                            bpref.push(b[i * n + j]);
                        }
                    }
                    pref > bpref
                } else {
                    false
                };
                if !prune {
                    used[cand] = true;
                    go(m, perm, used, best);
                    used[cand] = false;
                }
                perm.pop();
            }
        }
        go(self, &mut perm, &mut used, &mut best);
        best.unwrap_or_default()
    }
}

/// Matrix text format:
///
/// ```text
/// field 2
/// kind skew
/// elements 1 2 3
/// row 1: 0 1 0
/// row 2: 1 0 1
/// row 3: 0 1 0
/// ```
///
/// Lines beginning with `#` are comments; `kind` is `symmetric` or `skew`;
/// entries use the gf element syntax. The parser rejects kind violations.
pub fn parse_matrix(text: &str) -> Result<LabeledMatrix> {
    let mut field: Option<FiniteField> = None;
    let mut kind: Option<MatrixKind> = None;
    let mut ground: Option<GroundSet> = None;
    let mut rows: Vec<(usize, String, Vec<String>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = ln + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "field" => {
                let q: u64 = rest.parse().map_err(|_| Error::ParseError {
                    line: lineno,
                    reason: format!("bad field order `{rest}`"),
                })?;
                field = Some(FiniteField::new(q)?);
            }
            "kind" => {
                kind = Some(match rest {
                    "skew" => MatrixKind::SkewSymmetric,
                    "symmetric" => MatrixKind::Symmetric,
                    other => {
                        return Err(Error::ParseError {
                            line: lineno,
                            reason: format!("unknown kind `{other}`"),
                        })
                    }
                });
            }
            "elements" => {
                ground = Some(GroundSet::new(rest.split_whitespace())?);
            }
            "row" => {
                let (label, entries) = rest.split_once(':').ok_or(Error::ParseError {
                    line: lineno,
                    reason: "row line needs `label: entries`".to_string(),
                })?;
                rows.push((
                    lineno,
                    label.trim().to_string(),
                    entries.split_whitespace().map(str::to_string).collect(),
                ));
            }
            other => {
                return Err(Error::ParseError {
                    line: lineno,
                    reason: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    let field = field.ok_or(Error::ParseError {
        line: 0,
        reason: "missing `field` line".to_string(),
    })?;
    let kind = kind.ok_or(Error::ParseError {
        line: 0,
        reason: "missing `kind` line".to_string(),
    })?;
    let ground = ground.ok_or(Error::ParseError {
        line: 0,
        reason: "missing `elements` line".to_string(),
    })?;
    let n = ground.len();
    let mut entries = vec![FieldElement::ZERO; n * n];
    let mut seen = vec![false; n];
    for (lineno, label, vals) in rows {
        let r = ground.position(&label)?;
        if seen[r] {
            return Err(Error::ParseError {
                line: lineno,
                reason: format!("duplicate row `{label}`"),
            });
        }
        seen[r] = true;
        if vals.len() != n {
            return Err(Error::ParseError {
                line: lineno,
                reason: format!("row `{label}` has {} entries, expected {n}", vals.len()),
            });
        }
        for (c, v) in vals.iter().enumerate() {
            entries[r * n + c] = field.parse_element(v).map_err(|_| Error::ParseError {
                line: lineno,
                reason: format!("bad entry `{v}`"),
            })?;
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::ParseError {
            line: 0,
            reason: format!("missing row for `{}`", ground.label(missing)),
        });
    }
    LabeledMatrix::new(ground, field, kind, entries)
}

/// Canonical serialization; `parse_matrix(format_matrix(m)) == m`.
pub fn format_matrix(m: &LabeledMatrix) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", m.field().order()));
    out.push_str(&format!("kind {}\n", m.kind().as_str()));
    out.push_str(&format!("elements {}\n", m.ground().labels().join(" ")));
    for i in 0..m.n() {
        let entries: Vec<String> = (0..m.n()).map(|j| m.get(i, j).to_string()).collect();
        out.push_str(&format!("row {}: {}\n", m.ground().label(i), entries.join(" ")));
    }
    out
}
