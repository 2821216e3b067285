//! Boundaried chain-groups: an isotropic chain-group together with an
//! ordered basis of N-perp modulo N, their minors, sums along a ground-set
//! partition, and the connection types describing how parts recombine.

use crate::chaingroup::{Chain, ChainGroup};
use crate::error::{Error, Result};
use crate::fmatrix::GroundSet;
use crate::gf::FieldElement;
use crate::linalg::Mat;
use crate::subset::{self, Subset};
use std::fmt;

/// An isotropic chain-group with a boundary: an ordered list of coset
/// representatives forming a basis of N-perp / N.
#[derive(Clone)]
pub struct BoundariedChainGroup {
    n: ChainGroup,
    reps: Vec<Chain>,
}

impl fmt::Debug for BoundariedChainGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Boundaried({:?}, |B| = {})", self.n, self.reps.len())
    }
}

impl PartialEq for BoundariedChainGroup {
    /// Equality of boundaried chain-groups: same chain-group and the same
    /// boundary cosets (representatives may differ).
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.reps.len() == other.reps.len()
            && self
                .reps
                .iter()
                .zip(&other.reps)
                .all(|(a, b)| self.n.reduce(a) == self.n.reduce(b))
    }
}
impl Eq for BoundariedChainGroup {}

fn boundary_size(n: &ChainGroup) -> usize {
    2 * (n.ground().len() - n.dim())
}

impl BoundariedChainGroup {
    /// Attach a boundary to an isotropic chain-group. Without explicit
    /// representatives the canonical boundary is used: the echelon basis of
    /// N-perp reduced modulo N.
    pub fn new(n: ChainGroup, reps: Option<Vec<Chain>>) -> Result<BoundariedChainGroup> {
        if !n.is_isotropic() {
            return Err(Error::NotIsotropic);
        }
        let reps = match reps {
            Some(reps) => {
                validate_boundary(&n, &reps)?;
                reps
            }
            None => canonical_boundary(&n),
        };
        Ok(BoundariedChainGroup { n, reps })
    }

    pub fn chain_group(&self) -> &ChainGroup {
        &self.n
    }

    pub fn ground(&self) -> &GroundSet {
        self.n.ground()
    }

    pub fn boundary(&self) -> &[Chain] {
        &self.reps
    }

    /// Delete X, carrying the boundary along: each representative is first
    /// replaced by an equivalent one whose bottom coefficients vanish on X.
    /// Requires the corank to be preserved.
    pub fn delete(&self, x: Subset) -> Result<BoundariedChainGroup> {
        self.minor_step(x, true)
    }

    /// Contract X; representatives are normalized to have vanishing top
    /// coefficients on X.
    pub fn contract(&self, x: Subset) -> Result<BoundariedChainGroup> {
        self.minor_step(x, false)
    }

    fn minor_step(&self, x: Subset, deletion: bool) -> Result<BoundariedChainGroup> {
        let n = &self.n;
        let new_n = if deletion { n.delete(x) } else { n.contract(x) };
        let v = n.ground().len();
        let corank_ok =
            (v - subset::size(x) as usize) as i64 - new_n.dim() as i64 == v as i64 - n.dim() as i64;
        if !corank_ok {
            return Err(Error::CorankDrop);
        }
        let keep = n.ground().full_mask() & !x;
        let reps = self
            .reps
            .iter()
            .map(|b| normalize_rep(n, b, x, deletion).restrict(keep))
            .collect::<Vec<_>>();
        debug_assert!(validate_boundary(&new_n, &reps).is_ok());
        Ok(BoundariedChainGroup { n: new_n, reps })
    }

    /// N \ X / Y with the boundary carried along; X and Y are disjoint
    /// subsets of this ground set.
    pub fn boundaried_minor(&self, x: Subset, y: Subset) -> Result<BoundariedChainGroup> {
        debug_assert_eq!(x & y, 0);
        let deleted = self.delete(x)?;
        let keep = self.n.ground().full_mask() & !x;
        deleted.contract(subset::compress(y, keep))
    }

    /// Same data over a reordered ground set (a permutation of the labels).
    pub fn with_ground_order(&self, ground: &GroundSet) -> Result<BoundariedChainGroup> {
        let n = self.n.reorder(ground)?;
        let perm: Vec<usize> = ground
            .labels()
            .iter()
            .map(|l| self.n.ground().position(l))
            .collect::<Result<_>>()?;
        let reps = self
            .reps
            .iter()
            .map(|c| {
                let coeffs = perm.iter().map(|&i| c.get(i)).collect();
                Chain::new(ground.clone(), coeffs)
            })
            .collect();
        Ok(BoundariedChainGroup { n, reps })
    }

    /// Split along (V1, V \ V1) into boundaried parts with canonical
    /// boundaries, plus the connection type that reassembles this sum.
    pub fn sum_decompose(
        &self,
        v1: Subset,
    ) -> Result<(BoundariedChainGroup, BoundariedChainGroup, ConnectionType)> {
        let full = self.n.ground().full_mask();
        let v2 = full & !v1;
        let n1 = self.n.times(v1);
        let n2 = self.n.times(v2);
        let p1 = BoundariedChainGroup {
            reps: canonical_boundary(&n1),
            n: n1,
        };
        let p2 = BoundariedChainGroup {
            reps: canonical_boundary(&n2),
            n: n2,
        };
        let ct = connection_type(self, &p1, &p2, v1, v2);
        Ok((p1, p2, ct))
    }
}

/// Canonical boundary: echelon basis of N-perp, reduced modulo N, then
/// re-echelonized; the nonzero rows represent a basis of N-perp / N.
fn canonical_boundary(n: &ChainGroup) -> Vec<Chain> {
    let perp = n.orthogonal();
    let rows: Vec<Vec<FieldElement>> = perp
        .basis_chains()
        .iter()
        .map(|c| n.reduce(c).to_row())
        .collect();
    let mut m = Mat::from_rows(rows, 2 * n.ground().len(), n.field().clone());
    m.rref();
    debug_assert_eq!(m.rows, boundary_size(n));
    (0..m.rows)
        .map(|r| Chain::from_row(n.ground().clone(), m.row(r)))
        .collect()
}

fn validate_boundary(n: &ChainGroup, reps: &[Chain]) -> Result<()> {
    if reps.len() != boundary_size(n) {
        return Err(Error::BadBoundary {
            reason: format!(
                "boundary has {} representatives, expected {}",
                reps.len(),
                boundary_size(n)
            ),
        });
    }
    let perp = n.orthogonal();
    for (i, b) in reps.iter().enumerate() {
        if b.ground() != n.ground() {
            return Err(Error::BadBoundary {
                reason: "representative on the wrong ground set".to_string(),
            });
        }
        if !perp.contains(b) {
            return Err(Error::BadBoundary {
                reason: format!("representative {i} is not orthogonal to the chain-group"),
            });
        }
    }
    let reduced: Vec<Vec<FieldElement>> = reps.iter().map(|b| n.reduce(b).to_row()).collect();
    let rank = Mat::from_rows(reduced, 2 * n.ground().len(), n.field().clone()).rank();
    if rank != reps.len() {
        return Err(Error::BadBoundary {
            reason: "cosets are linearly dependent".to_string(),
        });
    }
    Ok(())
}

/// Replace `b` by an equivalent representative (mod N) whose bottom
/// (deletion) or top (contraction) coefficients vanish on X. Solvable by
/// Gaussian elimination whenever the corank condition holds.
fn normalize_rep(n: &ChainGroup, b: &Chain, x: Subset, deletion: bool) -> Chain {
    let cols: Vec<usize> = subset::members(x)
        .filter(|&i| i < n.ground().len())
        .map(|i| 2 * i + if deletion { 1 } else { 0 })
        .collect();
    if cols.is_empty() {
        return b.clone();
    }
    // a zero chain-group with constraints would violate the corank
    // precondition checked by the caller
    debug_assert!(n.dim() > 0);
    let basis = n.basis_mat();
    let all_rows: Vec<usize> = (0..basis.rows).collect();
    let sub = basis.select(&all_rows, &cols);
    let row = b.to_row();
    let target: Vec<FieldElement> = cols.iter().map(|&c| row[c]).collect();
    let coeffs = sub
        .solve_left(&target)
        .expect("normalization is solvable under the corank condition");
    let correction = Mat::from_rows(vec![coeffs], basis.rows, n.field().clone()).mul(basis);
    let f = n.field();
    let fixed: Vec<FieldElement> = row
        .iter()
        .zip(correction.row(0))
        .map(|(&a, &c)| f.sub(a, c))
        .collect();
    Chain::from_row(n.ground().clone(), &fixed)
}

/// The connection type of a sum: the subspace C0 of coefficient pairs whose
/// combination lies in N, and for each boundary element of the sum the coset
/// C_s of pairs reaching it. Cosets are stored as a canonical offset over
/// C0; an unreachable boundary element is recorded as an empty coset.
#[derive(Clone)]
pub struct ConnectionType {
    b1_len: usize,
    b2_len: usize,
    c0: Mat,
    c0_pivots: Vec<usize>,
    cosets: Vec<Option<Vec<FieldElement>>>,
}

impl fmt::Debug for ConnectionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ConnectionType(|B1| = {}, |B2| = {}, dim C0 = {}, cosets = {})",
            self.b1_len,
            self.b2_len,
            self.c0.rows,
            self.cosets.len()
        )
    }
}

impl PartialEq for ConnectionType {
    fn eq(&self, other: &Self) -> bool {
        self.b1_len == other.b1_len
            && self.b2_len == other.b2_len
            && self.c0 == other.c0
            && self.cosets == other.cosets
    }
}
impl Eq for ConnectionType {}

impl ConnectionType {
    pub fn c0_dim(&self) -> usize {
        self.c0.rows
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.len()
    }

    pub fn coset_is_empty(&self, s: usize) -> bool {
        self.cosets[s].is_none()
    }

    /// Every nonempty coset must be a coset of C0; with canonical offsets
    /// that reduces to the offset being reduced against C0.
    pub fn cosets_are_cosets_of_c0(&self) -> bool {
        self.cosets.iter().flatten().all(|offset| {
            self.c0.reduce_row(offset, &self.c0_pivots) == *offset
        })
    }
}

fn embed(chain: &Chain, ground: &GroundSet, positions: &[usize]) -> Vec<FieldElement> {
    let mut row = vec![FieldElement::ZERO; 2 * ground.len()];
    for (i, &p) in positions.iter().enumerate() {
        let (t, b) = chain.get(i);
        row[2 * p] = t;
        row[2 * p + 1] = b;
    }
    row
}

fn connection_type(
    p: &BoundariedChainGroup,
    p1: &BoundariedChainGroup,
    p2: &BoundariedChainGroup,
    v1: Subset,
    v2: Subset,
) -> ConnectionType {
    let n = &p.n;
    let field = n.field().clone();
    let pos1: Vec<usize> = subset::members(v1).filter(|&i| i < n.ground().len()).collect();
    let pos2: Vec<usize> = subset::members(v2).filter(|&i| i < n.ground().len()).collect();
    // reduced embeddings of the part boundaries
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for b in &p1.reps {
        let row = embed(b, n.ground(), &pos1);
        rows.push(
            n.reduce(&Chain::from_row(n.ground().clone(), &row))
                .to_row(),
        );
    }
    for b in &p2.reps {
        let row = embed(b, n.ground(), &pos2);
        rows.push(
            n.reduce(&Chain::from_row(n.ground().clone(), &row))
                .to_row(),
        );
    }
    let r = Mat::from_rows(rows, 2 * n.ground().len(), field.clone());
    let mut c0 = r.transpose().nullspace();
    let c0_pivots = c0.rref();
    let mut cosets = Vec::with_capacity(p.reps.len());
    for b in &p.reps {
        let target = n.reduce(b).to_row();
        let offset = r
            .solve_left(&target)
            .map(|sol| c0.reduce_row(&sol, &c0_pivots));
        cosets.push(offset);
    }
    ConnectionType {
        b1_len: p1.reps.len(),
        b2_len: p2.reps.len(),
        c0,
        c0_pivots,
        cosets,
    }
}

/// Rebuild the sum of two disjoint boundaried chain-groups from a connection
/// type. The ground set is part 1's labels followed by part 2's.
pub fn sum_reconstruct(
    p1: &BoundariedChainGroup,
    p2: &BoundariedChainGroup,
    ct: &ConnectionType,
) -> Result<BoundariedChainGroup> {
    if ct.b1_len != p1.reps.len() || ct.b2_len != p2.reps.len() {
        return Err(Error::InconsistentConnectionType {
            reason: "boundary sizes do not match the parts".to_string(),
        });
    }
    if p1.n.field() != p2.n.field() || p1.n.form() != p2.n.form() {
        return Err(Error::InconsistentConnectionType {
            reason: "parts disagree on field or form".to_string(),
        });
    }
    let labels: Vec<String> = p1
        .ground()
        .labels()
        .iter()
        .chain(p2.ground().labels())
        .cloned()
        .collect();
    let ground = GroundSet::new(labels).map_err(|_| Error::InconsistentConnectionType {
        reason: "parts share labels".to_string(),
    })?;
    let n1 = p1.ground().len();
    let pos1: Vec<usize> = (0..n1).collect();
    let pos2: Vec<usize> = (n1..ground.len()).collect();
    let field = p1.n.field().clone();
    let form = p1.n.form();

    let combo_row = |x: &[FieldElement]| -> Vec<FieldElement> {
        let mut row = vec![FieldElement::ZERO; 2 * ground.len()];
        for (i, b) in p1.reps.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let emb = embed(b, &ground, &pos1);
            for (slot, v) in row.iter_mut().zip(emb) {
                *slot = field.add(*slot, field.mul(x[i], v));
            }
        }
        for (j, b) in p2.reps.iter().enumerate() {
            if x[ct.b1_len + j].is_zero() {
                continue;
            }
            let emb = embed(b, &ground, &pos2);
            for (slot, v) in row.iter_mut().zip(emb) {
                *slot = field.add(*slot, field.mul(x[ct.b1_len + j], v));
            }
        }
        row
    };

    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for c in p1.n.basis_chains() {
        rows.push(embed(&c, &ground, &pos1));
    }
    for c in p2.n.basis_chains() {
        rows.push(embed(&c, &ground, &pos2));
    }
    for r in 0..ct.c0.rows {
        rows.push(combo_row(ct.c0.row(r)));
    }
    let n = ChainGroup::from_rows(ground.clone(), field.clone(), form, rows);
    if !n.is_isotropic() {
        return Err(Error::InconsistentConnectionType {
            reason: "reconstructed chain-group is not isotropic".to_string(),
        });
    }
    let v1_mask = subset::full(n1);
    let v2_mask = ground.full_mask() & !v1_mask;
    if n.times(v1_mask) != p1.n || n.times(v2_mask) != p2.n {
        return Err(Error::InconsistentConnectionType {
            reason: "reconstruction does not restrict to the parts".to_string(),
        });
    }
    let mut reps = Vec::with_capacity(ct.cosets.len());
    for (s, offset) in ct.cosets.iter().enumerate() {
        let Some(offset) = offset else {
            return Err(Error::InconsistentConnectionType {
                reason: format!("coset {s} is empty"),
            });
        };
        reps.push(Chain::from_row(ground.clone(), &combo_row(offset)));
    }
    validate_boundary(&n, &reps).map_err(|e| Error::InconsistentConnectionType {
        reason: format!("reconstructed boundary invalid: {e}"),
    })?;
    Ok(BoundariedChainGroup { n, reps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaingroup::{FormKind, MatrixRepresentation};
    use crate::fmatrix::{GroundSet, LabeledMatrix, MatrixKind};
    use crate::gf::FiniteField;

    fn gf2() -> FiniteField {
        FiniteField::new(2).unwrap()
    }

    fn p3_group() -> ChainGroup {
        let f = gf2();
        let g = GroundSet::numbered(3);
        let one = f.one();
        let zero = f.zero();
        let m = LabeledMatrix::new(
            g,
            f,
            MatrixKind::SkewSymmetric,
            vec![zero, one, zero, one, zero, one, zero, one, zero],
        )
        .unwrap();
        MatrixRepresentation::standard(m).chain_group()
    }

    #[test]
    fn boundary_sizes() {
        // Lagrangian: empty boundary
        let p = BoundariedChainGroup::new(p3_group(), None).unwrap();
        assert!(p.boundary().is_empty());
        // zero chain-group on one element: |B| = 2
        let z = ChainGroup::zero(GroundSet::numbered(1), gf2(), FormKind::BPlus);
        let pz = BoundariedChainGroup::new(z, None).unwrap();
        assert_eq!(pz.boundary().len(), 2);
        // span of a top unit inside two elements: |B| = 2
        let g = GroundSet::numbered(2);
        let s = ChainGroup::span(
            g.clone(),
            gf2(),
            FormKind::BPlus,
            &[Chain::unit_top(g.clone(), 1)],
        )
        .unwrap();
        let ps = BoundariedChainGroup::new(s, None).unwrap();
        assert_eq!(ps.boundary().len(), 2);
        // non-isotropic rejected
        let bad = ChainGroup::span(
            g.clone(),
            gf2(),
            FormKind::BPlus,
            &[Chain::unit_top(g.clone(), 0), Chain::unit_bottom(g, 0)],
        )
        .unwrap();
        assert!(matches!(
            BoundariedChainGroup::new(bad, None),
            Err(Error::NotIsotropic)
        ));
    }

    #[test]
    fn explicit_boundary_validation() {
        let g = GroundSet::numbered(1);
        let z = ChainGroup::zero(g.clone(), gf2(), FormKind::BPlus);
        let ok = BoundariedChainGroup::new(
            z.clone(),
            Some(vec![Chain::unit_top(g.clone(), 0), Chain::unit_bottom(g.clone(), 0)]),
        );
        assert!(ok.is_ok());
        // dependent cosets rejected
        let bad = BoundariedChainGroup::new(
            z.clone(),
            Some(vec![Chain::unit_top(g.clone(), 0), Chain::unit_top(g.clone(), 0)]),
        );
        assert!(matches!(bad, Err(Error::BadBoundary { .. })));
        // wrong count rejected
        let bad = BoundariedChainGroup::new(z, Some(vec![Chain::unit_top(g, 0)]));
        assert!(matches!(bad, Err(Error::BadBoundary { .. })));
    }

    #[test]
    fn boundary_minor_steps() {
        let g = GroundSet::numbered(2);
        let s = ChainGroup::span(
            g.clone(),
            gf2(),
            FormKind::BPlus,
            &[Chain::unit_top(g.clone(), 0)],
        )
        .unwrap();
        let p = BoundariedChainGroup::new(s, None).unwrap();
        assert_eq!(p.delete(0).unwrap(), p);
        // deleting the supported element drops the dimension by one and
        // keeps the corank
        let d = p.delete(0b01).unwrap();
        assert_eq!(d.ground().len(), 1);
        assert_eq!(d.chain_group().dim(), 0);
        assert_eq!(d.boundary().len(), 2);
        // deleting the free element keeps the dimension, so the corank
        // drops and the boundary minor is undefined
        assert!(matches!(p.delete(0b10), Err(Error::CorankDrop)));
        let z = BoundariedChainGroup::new(
            ChainGroup::zero(GroundSet::numbered(2), gf2(), FormKind::BPlus),
            None,
        )
        .unwrap();
        assert!(matches!(z.delete(0b10), Err(Error::CorankDrop)));
    }

    #[test]
    fn minor_composition() {
        let g = GroundSet::numbered(3);
        let s = ChainGroup::span(
            g.clone(),
            gf2(),
            FormKind::BPlus,
            &[Chain::unit_top(g.clone(), 0)],
        )
        .unwrap();
        let p = BoundariedChainGroup::new(s, None).unwrap();
        // identity minor
        assert_eq!(p.boundaried_minor(0, 0).unwrap(), p);
        // two steps equal one combined step when both are defined
        if let (Ok(two), Ok(one)) = (
            p.delete(0b010).and_then(|q| q.contract(0b10)),
            p.boundaried_minor(0b010, 0b100),
        ) {
            assert_eq!(two, one);
        }
    }

    #[test]
    fn decompose_block_diagonal_lagrangian() {
        let p = BoundariedChainGroup::new(p3_group(), None).unwrap();
        let (p1, p2, ct) = p.sum_decompose(0b011).unwrap();
        assert_eq!(p1.boundary().len(), 2);
        assert_eq!(p2.boundary().len(), 2);
        assert_eq!(ct.c0_dim(), 2);
        assert_eq!(ct.coset_count(), 0);
        assert!(ct.cosets_are_cosets_of_c0());
    }

    #[test]
    fn reconstruct_round_trip() {
        for mask in [0b001u32, 0b011, 0b010] {
            let p = BoundariedChainGroup::new(p3_group(), None).unwrap();
            let (p1, p2, ct) = p.sum_decompose(mask).unwrap();
            let rec = sum_reconstruct(&p1, &p2, &ct).unwrap();
            let back = rec.with_ground_order(p.ground()).unwrap();
            assert_eq!(back, p);
        }
        // an isotropic, non-Lagrangian instance exercises nonempty cosets
        let g = GroundSet::numbered(2);
        let s = ChainGroup::span(
            g.clone(),
            gf2(),
            FormKind::BPlus,
            &[Chain::unit_top(g.clone(), 0)],
        )
        .unwrap();
        let p = BoundariedChainGroup::new(s, None).unwrap();
        let (p1, p2, ct) = p.sum_decompose(0b01).unwrap();
        assert_eq!(ct.coset_count(), 2);
        assert!(ct.cosets_are_cosets_of_c0());
        let rec = sum_reconstruct(&p1, &p2, &ct).unwrap();
        assert_eq!(rec.with_ground_order(p.ground()).unwrap(), p);
    }

    #[test]
    fn corrupted_connection_type_rejected() {
        let g = GroundSet::numbered(2);
        let s = ChainGroup::span(
            g.clone(),
            gf2(),
            FormKind::BPlus,
            &[Chain::unit_top(g.clone(), 0)],
        )
        .unwrap();
        let p = BoundariedChainGroup::new(s, None).unwrap();
        let (p1, p2, mut ct) = p.sum_decompose(0b01).unwrap();
        ct.cosets[0] = None;
        assert!(matches!(
            sum_reconstruct(&p1, &p2, &ct),
            Err(Error::InconsistentConnectionType { .. })
        ));
        // swapping the parts breaks the size contract when |B1| != |B2|
        let (q1, q2, qt) = p.sum_decompose(0).unwrap();
        assert_ne!(q1.boundary().len(), q2.boundary().len());
        assert!(matches!(
            sum_reconstruct(&q2, &q1, &qt),
            Err(Error::InconsistentConnectionType { .. })
        ));
    }
}
