//! The pivot-minor relation on skew-symmetric or symmetric matrices:
//! principal submatrices of Schur complements on nonsingular principal
//! blocks, with fully deterministic witnesses, plus a desk-scale
//! quasi-order scanner over matrix collections.

use crate::error::{Error, Result};
use crate::fmatrix::{GroundSet, LabeledMatrix, MatrixKind};
use crate::gf::FiniteField;
use crate::subset::{self, Subset};
use serde::Serialize;

/// Witness that one matrix is a pivot-minor of another: a nonsingular
/// principal block to take the Schur complement on, the retained elements,
/// and the isomorphism realizing entry-wise equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentWitness {
    /// Elements of the nonsingular principal block A (labels of the host).
    pub a_set: Vec<String>,
    /// Retained elements X of the host: the minor is (M/A)[X].
    pub x_set: Vec<String>,
    /// bijection[i] = host label the i-th guest element maps to.
    pub bijection: Vec<(String, String)>,
}

fn witness(
    host: &LabeledMatrix,
    guest_ground: &GroundSet,
    a: Subset,
    x: Subset,
    perm: &[usize],
    retained: &GroundSet,
) -> ContainmentWitness {
    ContainmentWitness {
        a_set: host
            .ground()
            .labels_from_subset(a)
            .into_iter()
            .map(str::to_string)
            .collect(),
        x_set: host
            .ground()
            .labels_from_subset(x)
            .into_iter()
            .map(str::to_string)
            .collect(),
        bijection: perm
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                (
                    guest_ground.label(i).to_string(),
                    retained.label(p).to_string(),
                )
            })
            .collect(),
    }
}

/// Every principal submatrix of every Schur complement of `m`, deduplicated
/// up to isomorphism, each with the first witness in canonical order
/// (A by (size, lex), then X by (size, lex)).
pub fn all_schur_minors(
    m: &LabeledMatrix,
) -> Result<Vec<(LabeledMatrix, ContainmentWitness)>> {
    all_schur_minors_with_cap(m, 8)
}

pub fn all_schur_minors_with_cap(
    m: &LabeledMatrix,
    cap: usize,
) -> Result<Vec<(LabeledMatrix, ContainmentWitness)>> {
    if m.n() > cap {
        return Err(Error::GroundSetTooLarge { n: m.n(), cap });
    }
    let mut seen: std::collections::HashSet<Vec<u16>> = std::collections::HashSet::new();
    let mut out = Vec::new();
    let full = m.ground().full_mask();
    for a in m.nonsingular_principal_sets_with_cap(cap)? {
        let schur = m.schur(a)?;
        for x_local in subset::subsets_of(schur.ground().full_mask()) {
            let minor = schur.principal(x_local);
            let key = minor.canonical_form();
            if seen.insert(key) {
                let x_host = subset::expand(x_local, full & !a);
                let perm: Vec<usize> = (0..minor.n()).collect();
                let w = witness(m, minor.ground(), a, x_host, &perm, minor.ground());
                out.push((minor, w));
            }
        }
    }
    Ok(out)
}

/// Whether `m1` is isomorphic to a principal submatrix of a Schur complement
/// of `m2` on some nonsingular principal block. Returns the first witness in
/// deterministic order, or None.
pub fn pivot_minor_contained(
    m1: &LabeledMatrix,
    m2: &LabeledMatrix,
) -> Result<Option<ContainmentWitness>> {
    pivot_minor_contained_with_cap(m1, m2, 8)
}

pub fn pivot_minor_contained_with_cap(
    m1: &LabeledMatrix,
    m2: &LabeledMatrix,
    cap: usize,
) -> Result<Option<ContainmentWitness>> {
    if m1.field() != m2.field() || m1.kind() != m2.kind() {
        return Err(Error::KindMismatch);
    }
    if m2.n() > cap {
        return Err(Error::GroundSetTooLarge { n: m2.n(), cap });
    }
    if m1.n() > m2.n() {
        return Ok(None);
    }
    let full = m2.ground().full_mask();
    for a in m2.nonsingular_principal_sets_with_cap(cap)? {
        if subset::size(a) as usize + m1.n() > m2.n() {
            continue;
        }
        let schur = m2.schur(a)?;
        for x_local in subset::subsets_of_size(schur.ground().full_mask(), m1.n() as u32) {
            let minor = schur.principal(x_local);
            if let Some(perm) = m1.isomorphic(&minor) {
                let x_host = subset::expand(x_local, full & !a);
                return Ok(Some(witness(m2, m1.ground(), a, x_host, &perm, minor.ground())));
            }
        }
    }
    Ok(None)
}

/// The adjacency matrix of a simple graph as a skew-symmetric GF(2) matrix.
pub fn graph_adjacency(
    ground: GroundSet,
    edges: &[(usize, usize)],
) -> Result<LabeledMatrix> {
    let f = FiniteField::new(2)?;
    let one = f.one();
    let zero = f.zero();
    LabeledMatrix::from_fn(ground, f, MatrixKind::SkewSymmetric, |i, j| {
        if edges.iter().any(|&(u, v)| (u, v) == (i, j) || (u, v) == (j, i)) {
            one
        } else {
            zero
        }
    })
}

/// Pivot-minor containment of simple graphs via their skew-symmetric GF(2)
/// adjacency matrices.
pub fn graph_pivot_minor(
    g1: &LabeledMatrix,
    g2: &LabeledMatrix,
) -> Result<Option<ContainmentWitness>> {
    if g1.kind() != MatrixKind::SkewSymmetric
        || g2.kind() != MatrixKind::SkewSymmetric
        || g1.field().order() != 2
        || g2.field().order() != 2
    {
        return Err(Error::KindMismatch);
    }
    pivot_minor_contained(g1, g2)
}

/// A node of the quasi-order report: the canonical entry string of one
/// isomorphism class.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiOrderNode {
    pub index: usize,
    pub n: usize,
    pub entries: Vec<u16>,
}

/// Pairwise containment over a list of matrices: nodes, the directed
/// comparability edges i <= j (i != j), and the maximal antichains.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiOrderReport {
    pub nodes: Vec<QuasiOrderNode>,
    /// (i, j) present when node i is a pivot-minor of node j.
    pub edges: Vec<(usize, usize)>,
    /// All maximal antichains of the comparability relation, each sorted,
    /// listed in lexicographic order (exact enumeration for <= 20 nodes,
    /// a single greedy antichain beyond that).
    pub antichains: Vec<Vec<usize>>,
}

pub fn quasi_order_report(matrices: &[LabeledMatrix]) -> Result<QuasiOrderReport> {
    quasi_order_report_with_caps(matrices, 8, 200)
}

pub fn quasi_order_report_with_caps(
    matrices: &[LabeledMatrix],
    size_cap: usize,
    list_cap: usize,
) -> Result<QuasiOrderReport> {
    if matrices.len() > list_cap {
        return Err(Error::GroundSetTooLarge {
            n: matrices.len(),
            cap: list_cap,
        });
    }
    for m in matrices {
        if m.n() > size_cap {
            return Err(Error::GroundSetTooLarge {
                n: m.n(),
                cap: size_cap,
            });
        }
    }
    let nodes: Vec<QuasiOrderNode> = matrices
        .iter()
        .enumerate()
        .map(|(index, m)| QuasiOrderNode {
            index,
            n: m.n(),
            entries: m.canonical_form(),
        })
        .collect();
    let k = matrices.len();
    let mut le = vec![vec![false; k]; k];
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..k {
            let related = if i == j {
                true
            } else {
                pivot_minor_contained_with_cap(&matrices[i], &matrices[j], size_cap)?.is_some()
            };
            le[i][j] = related;
            if related && i != j {
                edges.push((i, j));
            }
        }
    }
    // comparability graph: i ~ j when related either way
    let comparable =
        |i: usize, j: usize| -> bool { le[i][j] || le[j][i] };
    let antichains = if k <= 20 {
        maximal_independent_sets(k, &comparable)
    } else {
        vec![greedy_antichain(k, &comparable)]
    };
    Ok(QuasiOrderReport {
        nodes,
        edges,
        antichains,
    })
}

fn greedy_antichain(k: usize, comparable: &dyn Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..k {
        if chosen.iter().all(|&j| !comparable(i, j)) {
            chosen.push(i);
        }
    }
    chosen
}

/// All maximal independent sets of the comparability graph, sorted.
fn maximal_independent_sets(k: usize, comparable: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut adj = vec![0u32; k];
    for (i, slot) in adj.iter_mut().enumerate() {
        for j in 0..k {
            if i != j && comparable(i, j) {
                *slot |= 1 << j;
            }
        }
    }
    // Bron-Kerbosch on the complement graph (cliques there = antichains here)
    let mut comp = vec![0u32; k];
    let full = subset::full(k);
    for i in 0..k {
        comp[i] = full & !adj[i] & !(1 << i);
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    fn bk(r: u32, p: u32, x: u32, comp: &[u32], out: &mut Vec<Vec<usize>>) {
        if p == 0 && x == 0 {
            out.push(subset::members(r).collect());
            return;
        }
        let mut p_iter = p;
        let mut p_cur = p;
        let mut x_cur = x;
        while p_iter != 0 {
            let v = p_iter.trailing_zeros() as usize;
            p_iter &= p_iter - 1;
            bk(r | 1 << v, p_cur & comp[v], x_cur & comp[v], comp, out);
            p_cur &= !(1 << v);
            x_cur |= 1 << v;
        }
    }
    bk(0, full, 0, &comp, &mut out);
    out.sort();
    out
}
