//! Tutte chain-groups (subspaces of F^V), the matroids of their minimal
//! nonempty supports, and the lift to Lagrangian chain-groups over K = F^2
//! that translates matroid minors and connectivity into chain-group terms.

use crate::chaingroup::{ChainGroup, FormKind};
use crate::error::{Error, Result};
use crate::fmatrix::GroundSet;
use crate::gf::{FieldElement, FiniteField};
use crate::half::Half;
use crate::linalg::Mat;
use crate::subset::{self, Subset};
use crate::widths::{optimal_decomposition, CutTable, DecompositionTree, WidthReport};
use std::fmt;

/// A subspace of F^V in canonical echelon form.
#[derive(Clone, PartialEq, Eq)]
pub struct TutteChainGroup {
    ground: GroundSet,
    field: FiniteField,
    basis: Mat,
    pivots: Vec<usize>,
}

impl fmt::Debug for TutteChainGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TutteChainGroup on {:?} over {:?}, dim {}\n{:?}",
            self.ground.labels(),
            self.field,
            self.dim(),
            self.basis
        )
    }
}

impl TutteChainGroup {
    pub fn new(
        ground: GroundSet,
        field: FiniteField,
        rows: Vec<Vec<FieldElement>>,
    ) -> TutteChainGroup {
        let mut basis = Mat::from_rows(rows, ground.len(), field.clone());
        let pivots = basis.rref();
        TutteChainGroup {
            ground,
            field,
            basis,
            pivots,
        }
    }

    pub fn zero(ground: GroundSet, field: FiniteField) -> TutteChainGroup {
        TutteChainGroup::new(ground, field, Vec::new())
    }

    pub fn full(ground: GroundSet, field: FiniteField) -> TutteChainGroup {
        let n = ground.len();
        let id = Mat::identity(n, field.clone());
        let rows = (0..n).map(|r| id.row(r).to_vec()).collect();
        TutteChainGroup::new(ground, field, rows)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.basis.rows).map(|r| self.basis.row(r).to_vec()).collect()
    }

    pub fn contains(&self, row: &[FieldElement]) -> bool {
        row.len() == self.ground.len() && {
            let red = self.basis.reduce_row(row, &self.pivots);
            red.iter().all(|v| v.is_zero())
        }
    }

    /// Orthogonal complement under the standard dot product.
    pub fn orthogonal(&self) -> TutteChainGroup {
        let ns = self.basis.nullspace();
        let rows = (0..ns.rows).map(|r| ns.row(r).to_vec()).collect();
        TutteChainGroup::new(self.ground.clone(), self.field.clone(), rows)
    }

    fn positions(&self, s: Subset) -> Vec<usize> {
        subset::members(s).filter(|&i| i < self.ground.len()).collect()
    }

    /// N . S: restrictions of all chains.
    pub fn restrict(&self, s: Subset) -> TutteChainGroup {
        let cols = self.positions(s);
        let all: Vec<usize> = (0..self.basis.rows).collect();
        let sel = self.basis.select(&all, &cols);
        let rows = (0..sel.rows).map(|r| sel.row(r).to_vec()).collect();
        TutteChainGroup::new(self.ground.restricted(s), self.field.clone(), rows)
    }

    /// N x S: restrictions of chains vanishing outside S.
    pub fn times(&self, s: Subset) -> TutteChainGroup {
        let outside = self.positions(self.ground.full_mask() & !s);
        let all: Vec<usize> = (0..self.basis.rows).collect();
        let sub = self.basis.select(&all, &outside);
        let combos = sub.transpose().nullspace();
        let chains = combos.mul(&self.basis);
        let keep = self.positions(s);
        let allc: Vec<usize> = (0..chains.rows).collect();
        let sel = chains.select(&allc, &keep);
        let rows = (0..sel.rows).map(|r| sel.row(r).to_vec()).collect();
        TutteChainGroup::new(self.ground.restricted(s), self.field.clone(), rows)
    }

    /// The minor (N x S) . T for T <= S, on the ground set T.
    pub fn minor(&self, s: Subset, t: Subset) -> Result<TutteChainGroup> {
        if t & !s != 0 {
            return Err(Error::PreconditionFailed {
                reason: "minor needs T to be a subset of S".to_string(),
            });
        }
        let inner = self.times(s);
        Ok(inner.restrict(subset::compress(t, s)))
    }

    /// dim(N x X) for every subset, indexed by mask.
    fn times_dims(&self) -> Vec<u16> {
        let n = self.ground.len();
        let full = self.ground.full_mask();
        let mut out = vec![0u16; 1 << n];
        let all: Vec<usize> = (0..self.basis.rows).collect();
        for mask in 0..(1u32 << n) {
            let cols = self.positions(full & !mask);
            let rank = self.basis.select(&all, &cols).rank();
            out[mask as usize] = (self.basis.rows - rank) as u16;
        }
        out
    }

    /// Minimal nonempty supports among all chains of N; by Tutte's theorem
    /// these are the circuits of the associated matroid. Enumerates the
    /// q^dim chains.
    pub fn minimal_supports(&self) -> Result<Vec<Subset>> {
        let q = self.field.order() as u128;
        let dim = self.dim() as u32;
        let combos = q.checked_pow(dim).unwrap_or(u128::MAX);
        if combos > 1 << 21 {
            return Err(Error::GroundSetTooLarge {
                n: self.dim(),
                cap: 21,
            });
        }
        let q = q as u64;
        let count = combos as u64;
        let mut supports: Vec<Subset> = Vec::new();
        let mut coeffs = vec![FieldElement::ZERO; self.dim()];
        for idx in 1..count {
            let mut rem = idx;
            for c in coeffs.iter_mut() {
                *c = self.field.element(rem % q).unwrap();
                rem /= q;
            }
            let combo = Mat::from_rows(vec![coeffs.clone()], self.dim(), self.field.clone())
                .mul(&self.basis);
            let mut support = 0u32;
            for (i, v) in combo.row(0).iter().enumerate() {
                if !v.is_zero() {
                    support |= 1 << i;
                }
            }
            if support != 0 {
                supports.push(support);
            }
        }
        supports.sort_by(|&a, &b| subset::canonical_cmp(a, b));
        supports.dedup();
        let minimal: Vec<Subset> = supports
            .iter()
            .copied()
            .filter(|&s| !supports.iter().any(|&t| t != s && t & !s == 0))
            .collect();
        Ok(minimal)
    }

    /// The Lagrangian lift: tops from N, bottoms from N-perp, under the
    /// symmetric form.
    pub fn lift(&self) -> ChainGroup {
        let n = self.ground.len();
        let mut rows: Vec<Vec<FieldElement>> = Vec::new();
        for r in 0..self.basis.rows {
            let mut row = vec![FieldElement::ZERO; 2 * n];
            for (i, &v) in self.basis.row(r).iter().enumerate() {
                row[2 * i] = v;
            }
            rows.push(row);
        }
        let perp = self.orthogonal();
        for r in 0..perp.basis.rows {
            let mut row = vec![FieldElement::ZERO; 2 * n];
            for (i, &v) in perp.basis.row(r).iter().enumerate() {
                row[2 * i + 1] = v;
            }
            rows.push(row);
        }
        let lifted = crate::chaingroup::ChainGroup::from_rows(
            self.ground.clone(),
            self.field.clone(),
            FormKind::BPlus,
            rows,
        );
        debug_assert!(lifted.is_lagrangian());
        lifted
    }
}

/// A matroid as an explicit rank table over all subsets. The rank axioms
/// are verified on construction: bounds, unit increments, and the local
/// exchange form of submodularity (equivalent to the pairwise inequality).
#[derive(Clone, PartialEq, Eq)]
pub struct Matroid {
    ground: GroundSet,
    rank: Vec<u16>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Matroid on {:?}, rank {}",
            self.ground.labels(),
            self.full_rank()
        )
    }
}

impl Matroid {
    pub fn new(ground: GroundSet, rank: Vec<u16>) -> Result<Matroid> {
        let n = ground.len();
        assert_eq!(rank.len(), 1 << n, "rank table must cover every subset");
        let fail = |reason: String| Error::PreconditionFailed { reason };
        if rank[0] != 0 {
            return Err(fail("rank of the empty set must be 0".to_string()));
        }
        for mask in 0..(1u32 << n) {
            let r = rank[mask as usize];
            if r as u32 > subset::size(mask) {
                return Err(fail(format!("rank exceeds cardinality at {mask:#b}")));
            }
            for e in 0..n {
                if subset::contains(mask, e) {
                    continue;
                }
                let re = rank[(mask | 1 << e) as usize];
                if re < r || re > r + 1 {
                    return Err(fail(format!("non-unit increment at {mask:#b} + {e}")));
                }
                for f2 in (e + 1)..n {
                    if subset::contains(mask, f2) {
                        continue;
                    }
                    let rf = rank[(mask | 1 << f2) as usize];
                    let ref2 = rank[(mask | 1 << e | 1 << f2) as usize];
                    if re + rf < ref2 + r {
                        return Err(fail(format!("submodularity fails at {mask:#b}")));
                    }
                }
            }
        }
        Ok(Matroid { ground, rank })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn rank(&self, x: Subset) -> u16 {
        self.rank[x as usize]
    }

    pub fn full_rank(&self) -> u16 {
        self.rank[self.ground.full_mask() as usize]
    }

    /// Circuits: minimal dependent sets of the rank function.
    pub fn circuits(&self) -> Vec<Subset> {
        let full = self.ground.full_mask();
        let mut out = Vec::new();
        'outer: for x in subset::subsets_of(full) {
            if x == 0 || self.rank(x) as u32 >= subset::size(x) {
                continue;
            }
            for e in subset::members(x) {
                let sub = x & !(1 << e);
                if (self.rank(sub) as u32) < subset::size(sub) {
                    continue 'outer;
                }
            }
            out.push(x);
        }
        out
    }

    pub fn delete(&self, y: Subset) -> Matroid {
        let keep = self.ground.full_mask() & !y;
        let n = subset::size(keep) as usize;
        let mut rank = vec![0u16; 1 << n];
        for (mask, slot) in rank.iter_mut().enumerate() {
            let lifted = subset::expand(mask as u32, keep);
            *slot = self.rank(lifted);
        }
        Matroid {
            ground: self.ground.restricted(keep),
            rank,
        }
    }

    pub fn contract(&self, y: Subset) -> Matroid {
        let keep = self.ground.full_mask() & !y;
        let n = subset::size(keep) as usize;
        let ry = self.rank(y);
        let mut rank = vec![0u16; 1 << n];
        for (mask, slot) in rank.iter_mut().enumerate() {
            let lifted = subset::expand(mask as u32, keep);
            *slot = self.rank(lifted | y) - ry;
        }
        Matroid {
            ground: self.ground.restricted(keep),
            rank,
        }
    }

    /// Matroid connectivity `lambda(X) = r(X) + r(E \ X) - r(E) + 1`.
    pub fn connectivity(&self, x: Subset) -> u16 {
        let full = self.ground.full_mask();
        self.rank(x) + self.rank(full & !x) - self.full_rank() + 1
    }

    /// Exact branch-width with a witness tree; a matroid on at most one
    /// element has branch-width 1 by convention.
    pub fn branch_width(&self) -> Result<WidthReport> {
        self.branch_width_with_cap(12)
    }

    pub fn branch_width_with_cap(&self, cap: usize) -> Result<WidthReport> {
        let n = self.ground.len();
        if n > cap {
            return Err(Error::GroundSetTooLarge { n, cap });
        }
        if n <= 1 {
            return Ok(WidthReport {
                width: Half::from_int(1),
                per_edge: Vec::new(),
                tree: DecompositionTree::trivial(self.ground.clone()),
            });
        }
        let table = CutTable::from_fn(self.ground.clone(), |x| {
            Half::from_int(self.connectivity(x) as i64)
        });
        optimal_decomposition(&table)
    }
}

/// The matroid of a Tutte chain-group: rank r(X) = |X| - dim(N x X).
pub fn matroid_from(n: &TutteChainGroup) -> Result<Matroid> {
    matroid_from_with_cap(n, 16)
}

pub fn matroid_from_with_cap(n: &TutteChainGroup, cap: usize) -> Result<Matroid> {
    let count = n.ground().len();
    if count > cap {
        return Err(Error::GroundSetTooLarge { n: count, cap });
    }
    let dims = n.times_dims();
    let rank: Vec<u16> = (0..(1u32 << count))
        .map(|mask| subset::size(mask) as u16 - dims[mask as usize])
        .collect();
    Matroid::new(n.ground().clone(), rank)
}

/// Tutte chain-group text format: the matrix format with `kind tutte`,
/// rows being generators of the subspace (any number of them).
pub fn parse_tutte(text: &str) -> Result<TutteChainGroup> {
    let mut field: Option<FiniteField> = None;
    let mut ground: Option<GroundSet> = None;
    let mut saw_kind = false;
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
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
                if rest != "tutte" {
                    return Err(Error::ParseError {
                        line: lineno,
                        reason: format!("expected `kind tutte`, found `{rest}`"),
                    });
                }
                saw_kind = true;
            }
            "elements" => {
                ground = Some(GroundSet::new(rest.split_whitespace())?);
            }
            "row" => {
                let (_, entries) = rest.split_once(':').ok_or(Error::ParseError {
                    line: lineno,
                    reason: "row line needs `label: entries`".to_string(),
                })?;
                rows.push((
                    lineno,
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
    if !saw_kind {
        return Err(Error::ParseError {
            line: 0,
            reason: "missing `kind tutte` line".to_string(),
        });
    }
    let field = field.ok_or(Error::ParseError {
        line: 0,
        reason: "missing `field` line".to_string(),
    })?;
    let ground = ground.ok_or(Error::ParseError {
        line: 0,
        reason: "missing `elements` line".to_string(),
    })?;
    let n = ground.len();
    let mut parsed = Vec::new();
    for (lineno, vals) in rows {
        if vals.len() != n {
            return Err(Error::ParseError {
                line: lineno,
                reason: format!("row has {} entries, expected {n}", vals.len()),
            });
        }
        let row: Vec<FieldElement> = vals
            .iter()
            .map(|v| {
                field.parse_element(v).map_err(|_| Error::ParseError {
                    line: lineno,
                    reason: format!("bad entry `{v}`"),
                })
            })
            .collect::<Result<_>>()?;
        parsed.push(row);
    }
    Ok(TutteChainGroup::new(ground, field, parsed))
}

pub fn format_tutte(n: &TutteChainGroup) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {}\n", n.field().order()));
    out.push_str("kind tutte\n");
    out.push_str(&format!("elements {}\n", n.ground().labels().join(" ")));
    for (i, row) in n.basis_rows().iter().enumerate() {
        let entries: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("row {}: {}\n", i + 1, entries.join(" ")));
    }
    out
}
