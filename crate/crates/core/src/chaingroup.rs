//! Chains on V to K = F^2, isotropic and Lagrangian chain-groups, minors,
//! duality, connectivity, and matrix representations.
//!
//! A chain-group is kept as the reduced row echelon basis of a subspace of
//! K^V, with columns interleaved (v1-top, v1-bottom, v2-top, ...) under the
//! ground order. That RREF is the unique canonical representative, so
//! chain-group equality is plain basis equality.

use crate::error::{Error, Result};
use crate::fmatrix::{GroundSet, LabeledMatrix, MatrixKind};
use crate::gf::{FieldElement, FiniteField};
use crate::half::Half;
use crate::linalg::Mat;
use crate::subset::{self, Subset};
use std::fmt;

/// The bilinear form carried by K = F^2.
///
/// `BPlus` is `<(a,b),(c,d)> = ad + bc` (symmetric); `BMinus` is `ad - bc`
/// (skew-symmetric).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FormKind {
    BPlus,
    BMinus,
}

impl FormKind {
    pub fn eval(
        self,
        f: &FiniteField,
        x: (FieldElement, FieldElement),
        y: (FieldElement, FieldElement),
    ) -> FieldElement {
        let ad = f.mul(x.0, y.1);
        let bc = f.mul(x.1, y.0);
        match self {
            FormKind::BPlus => f.add(ad, bc),
            FormKind::BMinus => f.sub(ad, bc),
        }
    }

    /// The matrix kind this form represents: BPlus (symmetric form) pairs
    /// with skew-symmetric matrices and BMinus with symmetric ones.
    pub fn matrix_kind(self) -> MatrixKind {
        match self {
            FormKind::BPlus => MatrixKind::SkewSymmetric,
            FormKind::BMinus => MatrixKind::Symmetric,
        }
    }

    pub fn for_matrix_kind(kind: MatrixKind) -> FormKind {
        match kind {
            MatrixKind::SkewSymmetric => FormKind::BPlus,
            MatrixKind::Symmetric => FormKind::BMinus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FormKind::BPlus => "b+",
            FormKind::BMinus => "b-",
        }
    }
}

/// A chain on V to K: one (top, bottom) pair of coefficients per element.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain {
    ground: GroundSet,
    coeffs: Vec<(FieldElement, FieldElement)>,
}

impl Chain {
    pub fn new(ground: GroundSet, coeffs: Vec<(FieldElement, FieldElement)>) -> Chain {
        assert_eq!(ground.len(), coeffs.len());
        Chain { ground, coeffs }
    }

    pub fn zero(ground: GroundSet) -> Chain {
        let n = ground.len();
        Chain {
            ground,
            coeffs: vec![(FieldElement::ZERO, FieldElement::ZERO); n],
        }
    }

    /// The chain with (1,0) at `v` and zero elsewhere.
    pub fn unit_top(ground: GroundSet, v: usize) -> Chain {
        let mut c = Chain::zero(ground);
        c.coeffs[v] = (FieldElement::ONE, FieldElement::ZERO);
        c
    }

    /// The chain with (0,1) at `v` and zero elsewhere.
    pub fn unit_bottom(ground: GroundSet, v: usize) -> Chain {
        let mut c = Chain::zero(ground);
        c.coeffs[v] = (FieldElement::ZERO, FieldElement::ONE);
        c
    }

    /// The constant chain with the same value everywhere.
    pub fn constant(ground: GroundSet, value: (FieldElement, FieldElement)) -> Chain {
        let n = ground.len();
        Chain {
            ground,
            coeffs: vec![value; n],
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn get(&self, v: usize) -> (FieldElement, FieldElement) {
        self.coeffs[v]
    }

    pub fn set(&mut self, v: usize, value: (FieldElement, FieldElement)) {
        self.coeffs[v] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&(t, b)| t.is_zero() && b.is_zero())
    }

    /// Restriction f . T to the elements of `t`, a chain on the restricted
    /// ground set.
    pub fn restrict(&self, t: Subset) -> Chain {
        let coeffs = subset::members(t)
            .filter(|&i| i < self.ground.len())
            .map(|i| self.coeffs[i])
            .collect();
        Chain {
            ground: self.ground.restricted(t),
            coeffs,
        }
    }

    pub(crate) fn to_row(&self) -> Vec<FieldElement> {
        let mut row = Vec::with_capacity(2 * self.coeffs.len());
        for &(t, b) in &self.coeffs {
            row.push(t);
            row.push(b);
        }
        row
    }

    pub(crate) fn from_row(ground: GroundSet, row: &[FieldElement]) -> Chain {
        let coeffs = row.chunks(2).map(|p| (p[0], p[1])).collect();
        Chain { ground, coeffs }
    }
}

/// `<f, g> = sum over x of <f(x), g(x)>_K`; zero means orthogonal.
pub fn form_eval(form: FormKind, field: &FiniteField, f: &Chain, g: &Chain) -> Result<FieldElement> {
    if f.ground != g.ground {
        return Err(Error::GroundMismatch);
    }
    let mut acc = FieldElement::ZERO;
    for i in 0..f.coeffs.len() {
        acc = field.add(acc, form.eval(field, f.coeffs[i], g.coeffs[i]));
    }
    Ok(acc)
}

/// A subspace of K^V in canonical echelon form, tagged with its bilinear
/// form.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainGroup {
    ground: GroundSet,
    field: FiniteField,
    form: FormKind,
    basis: Mat,
    pivots: Vec<usize>,
}

impl fmt::Debug for ChainGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ChainGroup {} on {:?} over {:?}, dim {}\n{:?}",
            self.form.as_str(),
            self.ground.labels(),
            self.field,
            self.dim(),
            self.basis
        )
    }
}

impl ChainGroup {
    pub(crate) fn from_rows(
        ground: GroundSet,
        field: FiniteField,
        form: FormKind,
        rows: Vec<Vec<FieldElement>>,
    ) -> ChainGroup {
        let mut basis = Mat::from_rows(rows, 2 * ground.len(), field.clone());
        let pivots = basis.rref();
        ChainGroup {
            ground,
            field,
            form,
            basis,
            pivots,
        }
    }

    /// Canonical echelon basis of the span of the given chains.
    pub fn span(
        ground: GroundSet,
        field: FiniteField,
        form: FormKind,
        chains: &[Chain],
    ) -> Result<ChainGroup> {
        for c in chains {
            if c.ground != ground {
                return Err(Error::GroundMismatch);
            }
        }
        let rows = chains.iter().map(|c| c.to_row()).collect();
        Ok(ChainGroup::from_rows(ground, field, form, rows))
    }

    pub fn zero(ground: GroundSet, field: FiniteField, form: FormKind) -> ChainGroup {
        ChainGroup::from_rows(ground, field, form, Vec::new())
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn form(&self) -> FormKind {
        self.form
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub(crate) fn basis_mat(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_chains(&self) -> Vec<Chain> {
        (0..self.basis.rows)
            .map(|r| Chain::from_row(self.ground.clone(), self.basis.row(r)))
            .collect()
    }

    /// Canonical coset representative of `chain + N`.
    pub fn reduce(&self, chain: &Chain) -> Chain {
        let row = self.basis.reduce_row(&chain.to_row(), &self.pivots);
        Chain::from_row(self.ground.clone(), &row)
    }

    pub fn contains(&self, chain: &Chain) -> bool {
        chain.ground == self.ground && self.reduce(chain).is_zero()
    }

    /// Row of the linear functional `g -> <f, g>` in flat coordinates.
    fn functional_row(&self, f_row: &[FieldElement]) -> Vec<FieldElement> {
        let fld = &self.field;
        let mut out = vec![FieldElement::ZERO; f_row.len()];
        for i in 0..f_row.len() / 2 {
            let top = f_row[2 * i];
            let bot = f_row[2 * i + 1];
            // <(a,b),(c,d)> = ad +- bc: coefficient of c is +-b, of d is a
            out[2 * i] = match self.form {
                FormKind::BPlus => bot,
                FormKind::BMinus => fld.neg(bot),
            };
            out[2 * i + 1] = top;
        }
        out
    }

    pub fn is_isotropic(&self) -> bool {
        let rows: Vec<Vec<FieldElement>> = (0..self.basis.rows)
            .map(|r| self.functional_row(self.basis.row(r)))
            .collect();
        let c = Mat::from_rows(rows, self.basis.cols, self.field.clone());
        self.basis.mul(&c.transpose()).is_zero()
    }

    pub fn is_lagrangian(&self) -> bool {
        self.dim() == self.ground.len() && self.is_isotropic()
    }

    /// The orthogonal chain-group N^perp with respect to the form.
    pub fn orthogonal(&self) -> ChainGroup {
        let rows: Vec<Vec<FieldElement>> = (0..self.basis.rows)
            .map(|r| self.functional_row(self.basis.row(r)))
            .collect();
        let c = Mat::from_rows(rows, self.basis.cols, self.field.clone());
        let ns = c.nullspace();
        let rows = (0..ns.rows).map(|r| ns.row(r).to_vec()).collect();
        ChainGroup::from_rows(
            self.ground.clone(),
            self.field.clone(),
            self.form,
            rows,
        )
    }

    fn cols_of(&self, t: Subset) -> Vec<usize> {
        let mut cols = Vec::new();
        for i in subset::members(t).filter(|&i| i < self.ground.len()) {
            cols.push(2 * i);
            cols.push(2 * i + 1);
        }
        cols
    }

    /// N . T = { f . T : f in N }.
    pub fn restrict(&self, t: Subset) -> ChainGroup {
        let cols = self.cols_of(t);
        let all_rows: Vec<usize> = (0..self.basis.rows).collect();
        let sel = self.basis.select(&all_rows, &cols);
        let rows = (0..sel.rows).map(|r| sel.row(r).to_vec()).collect();
        ChainGroup::from_rows(
            self.ground.restricted(t),
            self.field.clone(),
            self.form,
            rows,
        )
    }

    /// Combination coefficients c with (c * basis) vanishing on the given
    /// flat columns.
    fn combos_vanishing_on(&self, cols: &[usize]) -> Mat {
        if cols.is_empty() {
            return Mat::identity(self.basis.rows, self.field.clone());
        }
        let all_rows: Vec<usize> = (0..self.basis.rows).collect();
        let sub = self.basis.select(&all_rows, cols);
        sub.transpose().nullspace()
    }

    /// N x T = { f . T : f in N, f zero outside T }.
    pub fn times(&self, t: Subset) -> ChainGroup {
        let outside = self.ground.full_mask() & !t;
        let combos = self.combos_vanishing_on(&self.cols_of(outside));
        let chains = combos.mul(&self.basis);
        let keep = self.cols_of(t);
        let all_rows: Vec<usize> = (0..chains.rows).collect();
        let sel = chains.select(&all_rows, &keep);
        let rows = (0..sel.rows).map(|r| sel.row(r).to_vec()).collect();
        ChainGroup::from_rows(
            self.ground.restricted(t),
            self.field.clone(),
            self.form,
            rows,
        )
    }

    /// dim(N x X) for every X, indexed by subset mask.
    pub fn times_dims(&self) -> Vec<u16> {
        let n = self.ground.len();
        let full = self.ground.full_mask();
        let mut out = vec![0u16; 1 << n];
        for mask in 0..(1u32 << n) {
            let outside = full & !mask;
            let cols = self.cols_of(outside);
            let all_rows: Vec<usize> = (0..self.basis.rows).collect();
            let rank = self.basis.select(&all_rows, &cols).rank();
            out[mask as usize] = (self.basis.rows - rank) as u16;
        }
        out
    }

    /// Deletion N \ T.
    pub fn delete(&self, t: Subset) -> ChainGroup {
        self.minor(0, t)
    }

    /// Contraction N / T.
    pub fn contract(&self, t: Subset) -> ChainGroup {
        self.minor(t, 0)
    }

    /// N / con \ del for disjoint subsets of this ground set, done in one
    /// pass. Deletion keeps chains whose bottom coefficient vanishes on the
    /// set (orthogonality to (1,0)); contraction uses the top coefficient.
    pub fn minor(&self, con: Subset, del: Subset) -> ChainGroup {
        debug_assert_eq!(con & del, 0);
        let n = self.ground.len();
        let mut cols: Vec<usize> = Vec::new();
        for i in subset::members(del).filter(|&i| i < n) {
            cols.push(2 * i + 1);
        }
        for i in subset::members(con).filter(|&i| i < n) {
            cols.push(2 * i);
        }
        let combos = self.combos_vanishing_on(&cols);
        let chains = combos.mul(&self.basis);
        let keep_mask = self.ground.full_mask() & !(con | del);
        let keep = self.cols_of(keep_mask);
        let all_rows: Vec<usize> = (0..chains.rows).collect();
        let sel = chains.select(&all_rows, &keep);
        let rows = (0..sel.rows).map(|r| sel.row(r).to_vec()).collect();
        ChainGroup::from_rows(
            self.ground.restricted(keep_mask),
            self.field.clone(),
            self.form,
            rows,
        )
    }

    /// The connectivity function
    /// `lambda(U) = (dim N - dim(N x (V\U)) - dim(N x U)) / 2`.
    pub fn connectivity(&self, u: Subset) -> Half {
        let comp = self.ground.full_mask() & !u;
        let twice =
            self.dim() as i64 - self.times(comp).dim() as i64 - self.times(u).dim() as i64;
        Half::from_twice(twice)
    }

    /// Same ground set in a different order; the canonical basis is
    /// recomputed for the new column order.
    pub fn reorder(&self, ground: &GroundSet) -> Result<ChainGroup> {
        if ground.len() != self.ground.len() {
            return Err(Error::GroundMismatch);
        }
        let mut cols = Vec::with_capacity(2 * ground.len());
        for l in ground.labels() {
            let i = self.ground.position(l)?;
            cols.push(2 * i);
            cols.push(2 * i + 1);
        }
        let all_rows: Vec<usize> = (0..self.basis.rows).collect();
        let sel = self.basis.select(&all_rows, &cols);
        let rows = (0..sel.rows).map(|r| sel.row(r).to_vec()).collect();
        Ok(ChainGroup::from_rows(
            ground.clone(),
            self.field.clone(),
            self.form,
            rows,
        ))
    }

    /// Whether `a` is a (general) eulerian chain of this isotropic
    /// chain-group: a is nowhere zero, pointwise isotropic, and no nonzero
    /// chain of N is pointwise orthogonal to it.
    pub fn is_eulerian(&self, a: &Chain) -> Result<bool> {
        self.check_direction(a)?;
        let phi = self.eulerian_matrix(a);
        Ok(phi.rank() == self.dim())
    }

    fn check_direction(&self, a: &Chain) -> Result<()> {
        if a.ground != self.ground {
            return Err(Error::GroundMismatch);
        }
        for (i, &val) in a.coeffs.iter().enumerate() {
            if val.0.is_zero() && val.1.is_zero() {
                return Err(Error::NotIsotropicDirection {
                    reason: format!("zero value at `{}`", self.ground.label(i)),
                });
            }
            if !self.form.eval(&self.field, val, val).is_zero() {
                return Err(Error::NotIsotropicDirection {
                    reason: format!("non-isotropic value at `{}`", self.ground.label(i)),
                });
            }
        }
        Ok(())
    }

    /// Matrix of the per-element pairings `<f_basis_i(w), a(w)>`, one column
    /// per element w.
    fn eulerian_matrix(&self, a: &Chain) -> Mat {
        let n = self.ground.len();
        let mut phi = Mat::zero(self.dim(), n, self.field.clone());
        for r in 0..self.dim() {
            let row = self.basis.row(r);
            for w in 0..n {
                let fv = (row[2 * w], row[2 * w + 1]);
                phi.set(r, w, self.form.eval(&self.field, fv, a.get(w)));
            }
        }
        phi
    }

    /// A special eulerian chain (values all (1,0) or (0,1)), constructed by
    /// induction on the ground set: extend by (1,0) against the deletion of
    /// the last element first, else by (0,1) against its contraction.
    pub fn special_eulerian(&self) -> Result<Chain> {
        if !self.is_isotropic() {
            return Err(Error::NotIsotropic);
        }
        Ok(self.special_eulerian_inner())
    }

    fn special_eulerian_inner(&self) -> Chain {
        let n = self.ground.len();
        if n == 0 {
            return Chain::zero(self.ground.clone());
        }
        if self.dim() == 0 {
            return Chain::constant(self.ground.clone(), (FieldElement::ONE, FieldElement::ZERO));
        }
        let v = n - 1;
        let vmask = 1u32 << v;
        let sub = self.delete(vmask).special_eulerian_inner();
        let mut cand = Chain::zero(self.ground.clone());
        for (i, &val) in sub.coeffs.iter().enumerate() {
            cand.coeffs[i] = val;
        }
        cand.coeffs[v] = (FieldElement::ONE, FieldElement::ZERO);
        if self.is_eulerian(&cand).unwrap() {
            return cand;
        }
        let sub = self.contract(vmask).special_eulerian_inner();
        let mut cand = Chain::zero(self.ground.clone());
        for (i, &val) in sub.coeffs.iter().enumerate() {
            cand.coeffs[i] = val;
        }
        cand.coeffs[v] = (FieldElement::ZERO, FieldElement::ONE);
        debug_assert!(self.is_eulerian(&cand).unwrap());
        cand
    }

    /// The fundamental basis with respect to an eulerian chain `a`: the
    /// unique chains f_v in N with `<a(v), f_v(v)> = 1` and
    /// `<a(w), f_v(w)> = 0` for w != v. Requires a Lagrangian chain-group.
    pub fn fundamental_basis(&self, a: &Chain) -> Result<Vec<Chain>> {
        if !self.is_lagrangian() {
            return Err(Error::NotLagrangian);
        }
        self.check_direction(a)?;
        // <a(w), f(w)> as a matrix over the basis; its invertibility is
        // exactly the eulerian condition here.
        let n = self.ground.len();
        let mut phi = Mat::zero(self.dim(), n, self.field.clone());
        for r in 0..self.dim() {
            let row = self.basis.row(r);
            for w in 0..n {
                let fv = (row[2 * w], row[2 * w + 1]);
                phi.set(r, w, self.form.eval(&self.field, a.get(w), fv));
            }
        }
        let Some(phi_inv) = phi.inverse() else {
            return Err(Error::NotEulerian);
        };
        let chains = phi_inv.mul(&self.basis);
        Ok((0..n)
            .map(|v| Chain::from_row(self.ground.clone(), chains.row(v)))
            .collect())
    }

    /// Build the matrix representation determined by an eulerian chain `a`
    /// and a supplementary chain `b`. In the symmetric-form (BPlus),
    /// characteristic-2 case the returned representation carries the
    /// adjusted chain `b(v) := f_v(v)` required to zero the diagonal.
    pub fn to_representation(&self, a: &Chain, b: &Chain) -> Result<MatrixRepresentation> {
        check_supplementary(self.form, &self.field, a, b)?;
        let fund = self.fundamental_basis(a)?;
        let n = self.ground.len();
        let mut b_use = b.clone();
        if self.form == FormKind::BPlus && self.field.characteristic() == 2 {
            for (v, fv) in fund.iter().enumerate() {
                b_use.coeffs[v] = fv.get(v);
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for fi in &fund {
            for j in 0..n {
                entries.push(self.form.eval(&self.field, fi.get(j), b_use.get(j)));
            }
        }
        let matrix = LabeledMatrix::new(
            self.ground.clone(),
            self.field.clone(),
            self.form.matrix_kind(),
            entries,
        )?;
        MatrixRepresentation::new(matrix, a.clone(), b_use)
    }
}

fn check_supplementary(
    form: FormKind,
    field: &FiniteField,
    a: &Chain,
    b: &Chain,
) -> Result<()> {
    if a.ground != b.ground {
        return Err(Error::GroundMismatch);
    }
    for v in 0..a.ground.len() {
        let av = a.get(v);
        let bv = b.get(v);
        if !form.eval(field, av, av).is_zero()
            || !form.eval(field, bv, bv).is_zero()
            || form.eval(field, av, bv) != FieldElement::ONE
        {
            return Err(Error::NotSupplementary);
        }
    }
    Ok(())
}

fn is_special_value(val: (FieldElement, FieldElement), field: &FiniteField) -> bool {
    let one = FieldElement::ONE;
    let minus = field.minus_one();
    (val.1.is_zero() && (val.0 == one || val.0 == minus))
        || (val.0.is_zero() && (val.1 == one || val.1 == minus))
}

/// A (general) matrix representation (M, a, b) of a Lagrangian chain-group:
/// a skew-symmetric or symmetric matrix together with supplementary chains.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixRepresentation {
    matrix: LabeledMatrix,
    a: Chain,
    b: Chain,
}

impl MatrixRepresentation {
    pub fn new(matrix: LabeledMatrix, a: Chain, b: Chain) -> Result<MatrixRepresentation> {
        if a.ground() != matrix.ground() || b.ground() != matrix.ground() {
            return Err(Error::InvalidRepresentation {
                reason: "chain grounds do not match the matrix".to_string(),
            });
        }
        let form = FormKind::for_matrix_kind(matrix.kind());
        check_supplementary(form, matrix.field(), &a, &b).map_err(|_| {
            Error::InvalidRepresentation {
                reason: "a and b are not supplementary".to_string(),
            }
        })?;
        Ok(MatrixRepresentation { matrix, a, b })
    }

    /// The standard special representation with a = (1,0) and b = (0,1)
    /// everywhere.
    pub fn standard(matrix: LabeledMatrix) -> MatrixRepresentation {
        let ground = matrix.ground().clone();
        let a = Chain::constant(ground.clone(), (FieldElement::ONE, FieldElement::ZERO));
        let b = Chain::constant(ground, (FieldElement::ZERO, FieldElement::ONE));
        MatrixRepresentation::new(matrix, a, b).expect("standard chains are supplementary")
    }

    pub fn matrix(&self) -> &LabeledMatrix {
        &self.matrix
    }

    pub fn a(&self) -> &Chain {
        &self.a
    }

    pub fn b(&self) -> &Chain {
        &self.b
    }

    pub fn form(&self) -> FormKind {
        FormKind::for_matrix_kind(self.matrix.kind())
    }

    /// Whether both chains take values in {+-(1,0), +-(0,1)} everywhere.
    pub fn is_special(&self) -> bool {
        let f = self.matrix.field();
        (0..self.matrix.n()).all(|v| {
            is_special_value(self.a.get(v), f) && is_special_value(self.b.get(v), f)
        })
    }

    /// The Lagrangian chain-group spanned by the fundamental chains
    /// `f_i(j) = m_ij a(j) + [i = j] b(j)`.
    pub fn chain_group(&self) -> ChainGroup {
        let n = self.matrix.n();
        let field = self.matrix.field().clone();
        let ground = self.matrix.ground().clone();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = vec![FieldElement::ZERO; 2 * n];
            for j in 0..n {
                let m = self.matrix.get(i, j);
                let aj = self.a.get(j);
                row[2 * j] = field.mul(m, aj.0);
                row[2 * j + 1] = field.mul(m, aj.1);
                if i == j {
                    let bj = self.b.get(j);
                    row[2 * j] = field.add(row[2 * j], bj.0);
                    row[2 * j + 1] = field.add(row[2 * j + 1], bj.1);
                }
            }
            rows.push(row);
        }
        let n_group = ChainGroup::from_rows(ground, field, self.form(), rows);
        debug_assert!(n_group.is_lagrangian());
        n_group
    }

    /// The representation pivot of a special representation on a nonsingular
    /// block Y: `(M*Y, a', b')` for the symmetric form, `(I_Y (M*Y), a', b')`
    /// for the skew-symmetric form. Represents the same chain-group.
    pub fn pivot(&self, y: Subset) -> Result<MatrixRepresentation> {
        if !self.is_special() {
            return Err(Error::InvalidRepresentation {
                reason: "representation pivot needs a special representation".to_string(),
            });
        }
        if self.matrix.principal(y).det().is_zero() {
            return Err(Error::SingularPivotBlock);
        }
        let new_matrix = self.matrix.pivot(y)?;
        let field = self.matrix.field().clone();
        let mut a2 = self.a.clone();
        let mut b2 = self.b.clone();
        for v in subset::members(y).filter(|&v| v < self.matrix.n()) {
            a2.coeffs[v] = self.b.get(v);
            b2.coeffs[v] = match self.form() {
                FormKind::BPlus => self.a.get(v),
                FormKind::BMinus => {
                    let av = self.a.get(v);
                    (field.neg(av.0), field.neg(av.1))
                }
            };
        }
        MatrixRepresentation::new(new_matrix, a2, b2)
    }
}

/// Search for `(Y, Z)` with `M2 = D (M1*Y) D` (symmetric form) or
/// `M2 = D I_Y (M1*Y) D` (skew-symmetric form), D = I_Z: the witness that M1
/// and M2 are fundamental matrices of one Lagrangian chain-group. Exhaustive
/// over nonsingular Y and sign patterns; first witness in canonical order.
pub fn equivalent_fundamental_matrices(
    m1: &LabeledMatrix,
    m2: &LabeledMatrix,
) -> Result<Option<(Subset, Subset)>> {
    equivalent_fundamental_matrices_with_cap(m1, m2, 10)
}

pub fn equivalent_fundamental_matrices_with_cap(
    m1: &LabeledMatrix,
    m2: &LabeledMatrix,
    cap: usize,
) -> Result<Option<(Subset, Subset)>> {
    if m1.ground() != m2.ground() || m1.field() != m2.field() || m1.kind() != m2.kind() {
        return Err(Error::KindMismatch);
    }
    let n = m1.n();
    if n > cap {
        return Err(Error::GroundSetTooLarge { n, cap });
    }
    let sign_patterns: Vec<Subset> = if m1.field().characteristic() == 2 {
        vec![0]
    } else {
        subset::subsets_of(m1.ground().full_mask())
    };
    for y in subset::subsets_of(m1.ground().full_mask()) {
        if m1.principal(y).det().is_zero() {
            continue;
        }
        let pivoted = m1.pivot(y)?;
        for &z in &sign_patterns {
            if pivoted.negate_principal(z) == *m2 {
                return Ok(Some((y, z)));
            }
        }
    }
    Ok(None)
}

/// Simple isomorphism search: a bijection (as the permutation `perm`,
/// element i of n1's ground to element perm[i] of n2's) realizing
/// `n1 = { f o mu : f in n2 }`. Lexicographically least witness.
pub fn simple_isomorphic(n1: &ChainGroup, n2: &ChainGroup) -> Result<Option<Vec<usize>>> {
    simple_isomorphic_with_cap(n1, n2, 8)
}

pub fn simple_isomorphic_with_cap(
    n1: &ChainGroup,
    n2: &ChainGroup,
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    if n1.field != n2.field || n1.form != n2.form {
        return Err(Error::KindMismatch);
    }
    let n = n1.ground.len();
    if n > cap {
        return Err(Error::GroundSetTooLarge { n, cap });
    }
    if n != n2.ground.len() || n1.dim() != n2.dim() {
        return Ok(None);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut found: Option<Vec<usize>> = None;
    permute_lex(&mut perm, 0, &mut |p| {
        // pull n2's basis back through the bijection and compare spans
        let rows: Vec<Vec<FieldElement>> = (0..n2.basis.rows)
            .map(|r| {
                let row = n2.basis.row(r);
                let mut out = vec![FieldElement::ZERO; 2 * n];
                for (i, &pi) in p.iter().enumerate() {
                    out[2 * i] = row[2 * pi];
                    out[2 * i + 1] = row[2 * pi + 1];
                }
                out
            })
            .collect();
        let pulled = ChainGroup::from_rows(
            n1.ground.clone(),
            n1.field.clone(),
            n1.form,
            rows,
        );
        if pulled == *n1 {
            found = Some(p.to_vec());
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Visit permutations of `perm[k..]` in lexicographic order; the callback
/// returns true to stop.
fn permute_lex(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
    let n = perm.len();
    if k == n {
        return visit(perm);
    }
    // choose the next entry in increasing order to get lexicographic output
    let mut rest: Vec<usize> = perm[k..].to_vec();
    rest.sort_unstable();
    for &cand in &rest {
        let pos = perm[k..].iter().position(|&x| x == cand).unwrap() + k;
        perm.swap(k, pos);
        // keep the tail sorted for the recursive call
        perm[k + 1..].sort_unstable();
        if permute_lex(perm, k + 1, visit) {
            return true;
        }
        let pos = perm[k..].iter().position(|&x| x == cand).unwrap() + k;
        perm.swap(k, pos);
        perm[k..].sort_unstable();
    }
    false
}

/// Search for disjoint (X, Y) and a bijection with
/// `n1 ~ n2 / X \ Y` (contract X, delete Y). First witness in canonical
/// subset order, bijection lexicographically least.
pub fn minor_embedding(
    n1: &ChainGroup,
    n2: &ChainGroup,
) -> Result<Option<(Subset, Subset, Vec<usize>)>> {
    minor_embedding_with_cap(n1, n2, 8)
}

pub fn minor_embedding_with_cap(
    n1: &ChainGroup,
    n2: &ChainGroup,
    cap: usize,
) -> Result<Option<(Subset, Subset, Vec<usize>)>> {
    if n1.field != n2.field || n1.form != n2.form {
        return Err(Error::KindMismatch);
    }
    let n = n2.ground.len();
    if n > cap {
        return Err(Error::GroundSetTooLarge { n, cap });
    }
    let k = n1.ground.len();
    if k > n {
        return Ok(None);
    }
    let full = n2.ground.full_mask();
    for x in subset::subsets_of(full) {
        if subset::size(x) > (n - k) as u32 {
            continue;
        }
        let drop = (n - k) as u32 - subset::size(x);
        for y in subset::subsets_of_size(full & !x, drop) {
            let minor = n2.minor(x, y);
            if let Some(perm) = simple_isomorphic_with_cap(n1, &minor, cap)? {
                return Ok(Some((x, y, perm)));
            }
        }
    }
    Ok(None)
}

/// Chain-group text format:
///
/// ```text
/// form b+
/// field 2
/// elements 1 2 3
/// chain: 0 1  1 0  0 0
/// ```
///
/// One `chain:` line per generator, listing the top and bottom coefficient
/// of each element. The span is canonicalized on load.
pub fn parse_chain_group(text: &str) -> Result<ChainGroup> {
    let mut field: Option<FiniteField> = None;
    let mut form: Option<FormKind> = None;
    let mut ground: Option<GroundSet> = None;
    let mut chain_lines: Vec<(usize, Vec<String>)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = ln + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "form" => {
                form = Some(match rest {
                    "b+" => FormKind::BPlus,
                    "b-" => FormKind::BMinus,
                    other => {
                        return Err(Error::ParseError {
                            line: lineno,
                            reason: format!("unknown form `{other}`"),
                        })
                    }
                });
            }
            "field" => {
                let q: u64 = rest.parse().map_err(|_| Error::ParseError {
                    line: lineno,
                    reason: format!("bad field order `{rest}`"),
                })?;
                field = Some(FiniteField::new(q)?);
            }
            "elements" => {
                ground = Some(GroundSet::new(rest.split_whitespace())?);
            }
            "chain:" => {
                chain_lines.push((lineno, rest.split_whitespace().map(str::to_string).collect()));
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
    let form = form.ok_or(Error::ParseError {
        line: 0,
        reason: "missing `form` line".to_string(),
    })?;
    let ground = ground.ok_or(Error::ParseError {
        line: 0,
        reason: "missing `elements` line".to_string(),
    })?;
    let n = ground.len();
    let mut chains = Vec::new();
    for (lineno, vals) in chain_lines {
        if vals.len() != 2 * n {
            return Err(Error::ParseError {
                line: lineno,
                reason: format!("chain has {} coefficients, expected {}", vals.len(), 2 * n),
            });
        }
        let mut coeffs = Vec::with_capacity(n);
        for pair in vals.chunks(2) {
            let t = field.parse_element(&pair[0]).map_err(|_| Error::ParseError {
                line: lineno,
                reason: format!("bad coefficient `{}`", pair[0]),
            })?;
            let b = field.parse_element(&pair[1]).map_err(|_| Error::ParseError {
                line: lineno,
                reason: format!("bad coefficient `{}`", pair[1]),
            })?;
            coeffs.push((t, b));
        }
        chains.push(Chain::new(ground.clone(), coeffs));
    }
    ChainGroup::span(ground, field, form, &chains)
}

pub fn format_chain_group(n: &ChainGroup) -> String {
    let mut out = String::new();
    out.push_str(&format!("form {}\n", n.form().as_str()));
    out.push_str(&format!("field {}\n", n.field().order()));
    out.push_str(&format!("elements {}\n", n.ground().labels().join(" ")));
    for c in n.basis_chains() {
        let parts: Vec<String> = c
            .coeffs
            .iter()
            .map(|&(t, b)| format!("{t} {b}"))
            .collect();
        out.push_str(&format!("chain: {}\n", parts.join("  ")));
    }
    out
}
