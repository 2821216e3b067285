//! Shared generators and independent oracles for the integration suites.

#![allow(dead_code)]

use pivotlab::chaingroup::{Chain, ChainGroup, FormKind, MatrixRepresentation};
use pivotlab::fmatrix::{GroundSet, LabeledMatrix, MatrixKind};
use pivotlab::gf::{FieldElement, FiniteField};
use pivotlab::subset::{self, Subset};
use pivotlab::tuttebridge::TutteChainGroup;
use pivotlab::widths::DecompositionTree;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn gf(q: u64) -> FiniteField {
    FiniteField::new(q).unwrap()
}

/// Free strictly-upper-triangular entry positions of an n x n matrix.
fn upper_positions(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

fn build_matrix(
    field: &FiniteField,
    n: usize,
    kind: MatrixKind,
    upper: &[FieldElement],
    diag: &[FieldElement],
) -> LabeledMatrix {
    let positions = upper_positions(n);
    LabeledMatrix::from_fn(GroundSet::numbered(n), field.clone(), kind, |i, j| {
        if i == j {
            match kind {
                MatrixKind::SkewSymmetric => field.zero(),
                MatrixKind::Symmetric => diag[i],
            }
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            let idx = positions.iter().position(|&p| p == (a, b)).unwrap();
            if i < j {
                upper[idx]
            } else {
                match kind {
                    MatrixKind::Symmetric => upper[idx],
                    MatrixKind::SkewSymmetric => field.neg(upper[idx]),
                }
            }
        }
    })
    .unwrap()
}

/// Every skew-symmetric or symmetric matrix over GF(2) on `n` numbered
/// elements, in entry-bit order.
pub fn all_gf2_matrices(n: usize, kind: MatrixKind) -> Vec<LabeledMatrix> {
    let field = gf(2);
    let positions = upper_positions(n).len();
    let diag_bits = if kind == MatrixKind::Symmetric { n } else { 0 };
    let total_bits = positions + diag_bits;
    let mut out = Vec::with_capacity(1 << total_bits);
    for bits in 0u64..(1 << total_bits) {
        let upper: Vec<FieldElement> = (0..positions)
            .map(|i| field.element(bits >> i & 1).unwrap())
            .collect();
        let diag: Vec<FieldElement> = (0..diag_bits)
            .map(|i| field.element(bits >> (positions + i) & 1).unwrap())
            .collect();
        out.push(build_matrix(&field, n, kind, &upper, &diag));
    }
    out
}

/// Deduplicate up to isomorphism, keeping the first representative.
pub fn dedupe_matrices(list: Vec<LabeledMatrix>) -> Vec<LabeledMatrix> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for m in list {
        if seen.insert(m.canonical_form()) {
            out.push(m);
        }
    }
    out
}

pub fn random_matrix(
    rng: &mut StdRng,
    field: &FiniteField,
    n: usize,
    kind: MatrixKind,
) -> LabeledMatrix {
    let q = field.order() as u64;
    let upper: Vec<FieldElement> = (0..upper_positions(n).len())
        .map(|_| field.element(rng.gen_range(0..q)).unwrap())
        .collect();
    let diag: Vec<FieldElement> = (0..n)
        .map(|_| field.element(rng.gen_range(0..q)).unwrap())
        .collect();
    build_matrix(field, n, kind, &upper, &diag)
}

/// The unique special chain supplementary to a special chain `a` under the
/// given form.
pub fn special_supplement(field: &FiniteField, form: FormKind, a: &Chain) -> Chain {
    let mut b = Chain::zero(a.ground().clone());
    for v in 0..a.ground().len() {
        let av = a.get(v);
        let unit = if av.1.is_zero() {
            (field.zero(), field.one())
        } else {
            (field.one(), field.zero())
        };
        let pairing = form.eval(field, av, unit);
        let scale = field.inv(pairing).expect("supplement pairing is nonzero");
        b.set(v, (field.mul(scale, unit.0), field.mul(scale, unit.1)));
    }
    b
}

/// A uniformly random special representation of a random matrix of the
/// given kind.
pub fn random_special_rep(
    rng: &mut StdRng,
    field: &FiniteField,
    n: usize,
    kind: MatrixKind,
) -> MatrixRepresentation {
    let m = random_matrix(rng, field, n, kind);
    let form = FormKind::for_matrix_kind(kind);
    let ground = m.ground().clone();
    let minus = field.neg(field.one());
    let mut a = Chain::zero(ground.clone());
    for v in 0..n {
        let sign = if rng.gen_bool(0.5) { field.one() } else { minus };
        let unit = if rng.gen_bool(0.5) {
            (sign, field.zero())
        } else {
            (field.zero(), sign)
        };
        a.set(v, unit);
    }
    let mut b = special_supplement(field, form, &a);
    // randomize b's sign where the form allows it: flipping both a and b
    // keeps them supplementary
    for v in 0..n {
        if rng.gen_bool(0.5) {
            let (at, ab) = a.get(v);
            let (bt, bb) = b.get(v);
            a.set(v, (field.neg(at), field.neg(ab)));
            b.set(v, (field.neg(bt), field.neg(bb)));
        }
    }
    MatrixRepresentation::new(m, a, b).expect("constructed chains are supplementary")
}

pub fn random_lagrangian(
    rng: &mut StdRng,
    field: &FiniteField,
    n: usize,
    kind: MatrixKind,
) -> ChainGroup {
    random_special_rep(rng, field, n, kind).chain_group()
}

/// A random isotropic chain-group: a random subspace of a random Lagrangian
/// one.
pub fn random_isotropic(
    rng: &mut StdRng,
    field: &FiniteField,
    n: usize,
    kind: MatrixKind,
) -> ChainGroup {
    let lag = random_lagrangian(rng, field, n, kind);
    let basis = lag.basis_chains();
    let q = field.order() as u64;
    let k = rng.gen_range(0..=basis.len());
    let mut chains = Vec::new();
    for _ in 0..k {
        let mut row = Chain::zero(lag.ground().clone());
        for c in &basis {
            let coef = field.element(rng.gen_range(0..q)).unwrap();
            if coef.is_zero() {
                continue;
            }
            for v in 0..lag.ground().len() {
                let (t, b) = row.get(v);
                let (ct, cb) = c.get(v);
                row.set(
                    v,
                    (
                        field.add(t, field.mul(coef, ct)),
                        field.add(b, field.mul(coef, cb)),
                    ),
                );
            }
        }
        chains.push(row);
    }
    ChainGroup::span(lag.ground().clone(), field.clone(), lag.form(), &chains).unwrap()
}

/// All subspace bases of F^ambient in reduced row echelon form.
pub fn all_subspaces(field: &FiniteField, ambient: usize) -> Vec<Vec<Vec<FieldElement>>> {
    let q = field.order() as u64;
    let mut out = Vec::new();
    for rank in 0..=ambient {
        for pivots in combinations(ambient, rank) {
            // free positions: row i, non-pivot columns right of pivots[i]
            let mut free: Vec<(usize, usize)> = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                for c in (p + 1)..ambient {
                    if !pivots.contains(&c) {
                        free.push((i, c));
                    }
                }
            }
            let nfill = free.len() as u32;
            let count = q.pow(nfill);
            for fill in 0..count {
                let mut rows = vec![vec![field.zero(); ambient]; rank];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = field.one();
                }
                let mut rem = fill;
                for &(i, c) in &free {
                    rows[i][c] = field.element(rem % q).unwrap();
                    rem /= q;
                }
                out.push(rows);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Every isotropic chain-group on `n` numbered elements under the given
/// form, by filtering all subspaces of K^n.
pub fn all_isotropic(field: &FiniteField, form: FormKind, n: usize) -> Vec<ChainGroup> {
    let ground = GroundSet::numbered(n);
    all_subspaces(field, 2 * n)
        .into_iter()
        .map(|rows| {
            let chains: Vec<Chain> = rows
                .iter()
                .map(|row| {
                    let coeffs = row.chunks(2).map(|p| (p[0], p[1])).collect();
                    Chain::new(ground.clone(), coeffs)
                })
                .collect();
            ChainGroup::span(ground.clone(), field.clone(), form, &chains).unwrap()
        })
        .filter(|cg| cg.is_isotropic())
        .collect()
}

/// Every Tutte chain-group on `n` numbered elements.
pub fn all_tutte(field: &FiniteField, n: usize) -> Vec<TutteChainGroup> {
    let ground = GroundSet::numbered(n);
    all_subspaces(field, n)
        .into_iter()
        .map(|rows| TutteChainGroup::new(ground.clone(), field.clone(), rows))
        .collect()
}

/// All cubic trees on the ground set's elements, built by iterated edge
/// subdivision; (2n-5)!! trees for n >= 3.
pub fn all_cubic_trees(ground: &GroundSet) -> Vec<DecompositionTree> {
    #[derive(Clone)]
    struct RawTree {
        nodes: usize,
        edges: Vec<(usize, usize)>,
        leaf_nodes: Vec<usize>,
    }
    let n = ground.len();
    if n <= 1 {
        return vec![DecompositionTree::trivial(ground.clone())];
    }
    let mut trees = vec![RawTree {
        nodes: 2,
        edges: vec![(0, 1)],
        leaf_nodes: vec![0, 1],
    }];
    for _elem in 2..n {
        let mut next = Vec::new();
        for t in &trees {
            for (ei, &(u, v)) in t.edges.iter().enumerate() {
                let mut t2 = t.clone();
                let mid = t2.nodes;
                let leaf = t2.nodes + 1;
                t2.nodes += 2;
                t2.edges[ei] = (u, mid);
                t2.edges.push((mid, v));
                t2.edges.push((mid, leaf));
                t2.leaf_nodes.push(leaf);
                next.push(t2);
            }
        }
        trees = next;
    }
    trees
        .into_iter()
        .map(|t| DecompositionTree::new(ground.clone(), t.nodes, t.edges, t.leaf_nodes).unwrap())
        .collect()
}

/// Random disjoint pair of subsets of the full mask, sizes bounded by
/// `max_side`, leaving at most `max_gap` free elements.
pub fn random_disjoint_pair(
    rng: &mut StdRng,
    n: usize,
    max_side: usize,
    max_gap: usize,
) -> (Subset, Subset) {
    loop {
        let mut x = 0u32;
        let mut y = 0u32;
        for i in 0..n {
            match rng.gen_range(0..4) {
                0 => x |= 1 << i,
                1 => y |= 1 << i,
                _ => {}
            }
        }
        let gap = n - subset::size(x | y) as usize;
        if subset::size(x) as usize <= max_side
            && subset::size(y) as usize <= max_side
            && gap <= max_gap
        {
            return (x, y);
        }
    }
}
