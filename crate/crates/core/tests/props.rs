//! Property tests: serialization round trips and the structural identities
//! that hold for every instance, driven by proptest plus small exhaustive
//! sweeps where the search space is tiny anyway.

mod common;

use common::*;
use pivotlab::chaingroup::{Chain, ChainGroup, FormKind, MatrixRepresentation};
use pivotlab::fmatrix::{format_matrix, parse_matrix, GroundSet, LabeledMatrix, MatrixKind};
use pivotlab::gf::FieldElement;
use pivotlab::linking;
use pivotlab::subset::{self, Subset};
use pivotlab::widths::{parse_tree, rank_width};
use proptest::prelude::*;
use rand::Rng;

fn arb_kind() -> impl Strategy<Value = MatrixKind> {
    prop_oneof![
        Just(MatrixKind::SkewSymmetric),
        Just(MatrixKind::Symmetric)
    ]
}

fn arb_matrix() -> impl Strategy<Value = LabeledMatrix> {
    (prop_oneof![Just(2u64), Just(3), Just(4), Just(5)], 1usize..=5, arb_kind(), any::<u64>())
        .prop_map(|(q, n, kind, seed)| {
            let mut r = rng(seed);
            random_matrix(&mut r, &gf(q), n, kind)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_text_round_trip(m in arb_matrix()) {
        let text = format_matrix(&m);
        prop_assert_eq!(parse_matrix(&text).unwrap(), m);
    }

    #[test]
    fn chain_group_text_round_trip(m in arb_matrix(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let group = random_isotropic(&mut r, m.field(), m.n(), m.kind());
        let text = pivotlab::chaingroup::format_chain_group(&group);
        prop_assert_eq!(pivotlab::chaingroup::parse_chain_group(&text).unwrap(), group);
    }

    #[test]
    fn raw_pivot_involution_and_schur(m in arb_matrix()) {
        let full = m.ground().full_mask();
        for y in subset::subsets_of(full) {
            if m.principal(y).det().is_zero() {
                prop_assert!(m.pivot_raw(y).is_err());
                continue;
            }
            let piv = m.pivot_raw(y).unwrap();
            prop_assert_eq!(piv.pivot_raw(y).unwrap(), m.as_grid());
            // the Schur complement is the pivot restricted off the block
            let schur = m.schur(y).unwrap();
            let rest = full & !y;
            let sub = piv.principal(rest);
            for i in 0..schur.n() {
                for j in 0..schur.n() {
                    prop_assert_eq!(schur.get(i, j), sub.get(i, j));
                }
            }
        }
    }

    #[test]
    fn decomposition_tree_string_round_trip(m in arb_matrix()) {
        let report = rank_width(&m).unwrap();
        let rendered = report.tree.to_paren_string();
        let parsed = parse_tree(m.ground(), &rendered).unwrap();
        prop_assert_eq!(parsed.to_paren_string(), rendered);
    }

    #[test]
    fn rank_width_is_isomorphism_and_pivot_invariant(m in arb_matrix(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = rank_width(&m).unwrap().width;
        // relabeling
        let relabeled = {
            let labels: Vec<String> =
                (0..m.n()).map(|i| format!("e{}", (i + 1) * 7)).collect();
            let g = GroundSet::new(labels).unwrap();
            LabeledMatrix::from_fn(g, m.field().clone(), m.kind(), |i, j| m.get(i, j)).unwrap()
        };
        prop_assert_eq!(rank_width(&relabeled).unwrap().width, w);
        // pivot and principal negation
        let nonsingular = m.nonsingular_principal_sets().unwrap();
        let y = nonsingular[seed as usize % nonsingular.len()];
        let piv = m.pivot(y).unwrap();
        prop_assert_eq!(rank_width(&piv).unwrap().width, w);
        let z: Subset = r.gen_range(0..=m.ground().full_mask());
        prop_assert_eq!(rank_width(&piv.negate_principal(z)).unwrap().width, w);
    }
}

/// Pivots commute with row/column negations up to further negations: for
/// every negation pattern of M there is a pattern turning M*Y into M'*Y.
/// Exhaustive over patterns at n = 3 on sampled GF(3) matrices.
#[test]
fn pivot_negation_commutation() {
    let field = gf(3);
    let mut r = rng(0x77);
    let n = 3usize;
    for _ in 0..12 {
        let kind = [MatrixKind::SkewSymmetric, MatrixKind::Symmetric][r.gen_range(0..2)];
        let m = random_matrix(&mut r, &field, n, kind);
        let full = m.ground().full_mask();
        for y in subset::subsets_of(full) {
            if m.principal(y).det().is_zero() {
                continue;
            }
            let base = m.pivot_raw(y).unwrap();
            for x in subset::subsets_of(full) {
                for z in subset::subsets_of(full) {
                    let negated = m.negate(x, z);
                    if negated.principal(y).det().is_zero() {
                        continue;
                    }
                    let pivoted = negated.pivot_raw(y).unwrap();
                    // search for a negation pattern matching the claim
                    let mut found = false;
                    'search: for x2 in subset::subsets_of(full) {
                        for z2 in subset::subsets_of(full) {
                            if negated_equals(&base, &pivoted, x2, z2) {
                                found = true;
                                break 'search;
                            }
                        }
                    }
                    assert!(found, "no negation pattern reproduces the pivot of the negated matrix");
                }
            }
        }
    }
}

/// Does negating the given rows and columns of `base` produce `target`?
fn negated_equals(
    base: &pivotlab::fmatrix::MatrixGrid,
    target: &pivotlab::fmatrix::MatrixGrid,
    rows: Subset,
    cols: Subset,
) -> bool {
    let f = base.field().clone();
    for i in 0..base.nrows() {
        for j in 0..base.ncols() {
            let mut v = base.get(i, j);
            if subset::contains(rows, i) {
                v = f.neg(v);
            }
            if subset::contains(cols, j) {
                v = f.neg(v);
            }
            if v != target.get(i, j) {
                return false;
            }
        }
    }
    true
}

/// The three dimension cases of single-element deletion and contraction.
#[test]
fn deletion_contraction_dimension_cases() {
    let mut r = rng(0x33);
    for i in 0..120 {
        let field = gf(if i % 2 == 0 { 2 } else { 3 });
        let kind = [MatrixKind::SkewSymmetric, MatrixKind::Symmetric][i % 2];
        let n = 1 + i % 4;
        let group = random_isotropic(&mut r, &field, n, kind);
        let perp = group.orthogonal();
        for v in 0..n {
            let vmask = 1u32 << v;
            let up = Chain::unit_top(group.ground().clone(), v);
            let down = Chain::unit_bottom(group.ground().clone(), v);
            for (unit, minor) in [(&up, group.delete(vmask)), (&down, group.contract(vmask))] {
                let in_n = group.contains(unit);
                let in_perp = perp.contains(unit);
                let expected = if !in_n && in_perp {
                    group.dim()
                } else if in_n && !in_perp {
                    group.dim() - 2
                } else {
                    group.dim() - 1
                };
                assert_eq!(minor.dim(), expected, "dimension case failed");
            }
        }
    }
}

/// The easy direction of the linking theorem holds for every chain-group:
/// no minor on X u Y beats the separation minimum, Lagrangian or not.
#[test]
fn linking_max_at_most_min_for_isotropic() {
    let mut r = rng(0x55);
    for i in 0..80 {
        let field = gf(if i % 2 == 0 { 2 } else { 3 });
        let kind = [MatrixKind::SkewSymmetric, MatrixKind::Symmetric][i % 2];
        let n = 2 + i % 4;
        let group = random_isotropic(&mut r, &field, n, kind);
        let (x, y) = random_disjoint_pair(&mut r, n, 2, 7);
        let (min_v, _) = linking::min_side(&group, x, y).unwrap();
        let (max_v, _, _) = linking::max_side(&group, x, y).unwrap();
        assert!(max_v <= min_v, "minor side exceeded the separation minimum");
    }
}

/// to_matrix rejects non-eulerian chains and non-supplementary pairs.
#[test]
fn representation_error_paths() {
    let field = gf(2);
    let g = GroundSet::numbered(2);
    let m = LabeledMatrix::zero(g.clone(), field.clone(), MatrixKind::SkewSymmetric);
    let rep = MatrixRepresentation::standard(m);
    let group = rep.chain_group();
    // all-bottom direction pairs to zero against the spanning bottom units
    let bad_dir = Chain::constant(g.clone(), (FieldElement::ZERO, FieldElement::ONE));
    assert!(matches!(
        group.to_representation(&bad_dir, rep.a()),
        Err(pivotlab::Error::NotEulerian)
    ));
    // a is not supplementary to itself
    assert!(matches!(
        group.to_representation(rep.a(), rep.a()),
        Err(pivotlab::Error::NotSupplementary)
    ));
    // non-Lagrangian chain-groups have no matrix representation
    let small = ChainGroup::zero(g, field, FormKind::BPlus);
    assert!(matches!(
        small.to_representation(rep.a(), rep.b()),
        Err(pivotlab::Error::NotLagrangian)
    ));
}

/// Frozen adversarial instances: width-optimal decompositions that are NOT
/// linked, found by randomized search and kept as regression fixtures.
#[test]
fn non_linked_optimal_decomposition_fixtures() {
    use pivotlab::chaingroup::MatrixRepresentation;
    use pivotlab::widths::{branch_width, decomposition_width, is_linked, parse_tree, CutTable};

    let fixtures = [
        (
            "field 2\nkind skew\nelements 1 2 3 4 5 6 7\n\
             row 1: 0 0 0 1 1 0 0\n\
             row 2: 0 0 0 0 1 0 1\n\
             row 3: 0 0 0 0 1 1 1\n\
             row 4: 1 0 0 0 1 0 0\n\
             row 5: 1 1 1 1 0 1 0\n\
             row 6: 0 0 1 0 1 0 0\n\
             row 7: 0 1 1 0 0 0 0\n",
            "(1 ((((2 6) 3) (4 7)) 5))",
        ),
        (
            "field 3\nkind symmetric\nelements 1 2 3 4 5 6\n\
             row 1: 2 2 1 0 2 1\n\
             row 2: 2 0 0 0 0 0\n\
             row 3: 1 0 1 2 1 2\n\
             row 4: 0 0 2 1 0 1\n\
             row 5: 2 0 1 0 0 1\n\
             row 6: 1 0 2 1 1 1\n",
            "(1 (((2 3) (4 6)) 5))",
        ),
    ];
    for (matrix_text, tree_text) in fixtures {
        let m = parse_matrix(matrix_text).unwrap();
        let group = MatrixRepresentation::standard(m).chain_group();
        let tree = parse_tree(group.ground(), tree_text).unwrap();
        let table = CutTable::chain_connectivity(&group);
        let optimal = branch_width(&group).unwrap().width;
        // the frozen tree attains the optimal width yet is not linked
        assert_eq!(decomposition_width(&table, &tree).unwrap().width, optimal);
        assert!(!is_linked(&group, &tree).unwrap());
        // the guaranteed linked optimal decomposition still exists
        let linked = pivotlab::widths::find_linked_decomposition(&group).unwrap();
        assert!(is_linked(&group, &linked).unwrap());
        assert_eq!(
            decomposition_width(&table, &linked).unwrap().width,
            optimal
        );
    }
}

/// Any two fundamental matrices of one Lagrangian chain-group are related
/// by a pivot and a principal sign flip, and the found witness rebuilds the
/// second matrix. Enumerates every special eulerian direction (signs
/// collapse into the witness) on small instances.
#[test]
fn fundamental_matrices_all_related() {
    use pivotlab::chaingroup::equivalent_fundamental_matrices;

    let mut instances: Vec<LabeledMatrix> = Vec::new();
    for kind in [MatrixKind::SkewSymmetric, MatrixKind::Symmetric] {
        for n in 1..=3 {
            instances.extend(all_gf2_matrices(n, kind));
        }
    }
    let mut r = rng(0x43);
    for i in 0..40 {
        let kind = [MatrixKind::SkewSymmetric, MatrixKind::Symmetric][i % 2];
        instances.push(random_matrix(&mut r, &gf(3), 3, kind));
    }
    let mut related = 0u64;
    for m in &instances {
        let rep = MatrixRepresentation::standard(m.clone());
        let group = rep.chain_group();
        let ground = m.ground().clone();
        let field = m.field().clone();
        for pattern in subset::subsets_of(ground.full_mask()) {
            let mut a = Chain::constant(ground.clone(), (field.one(), field.zero()));
            for v in subset::members(pattern).filter(|&v| v < m.n()) {
                a.set(v, (field.zero(), field.one()));
            }
            if !group.is_eulerian(&a).unwrap() {
                continue;
            }
            let b = special_supplement(&field, group.form(), &a);
            let other = group.to_representation(&a, &b).unwrap();
            assert!(other.is_special());
            let (y, z) = equivalent_fundamental_matrices(m, other.matrix())
                .unwrap()
                .expect("fundamental matrices of one chain-group must relate");
            let rebuilt = m.pivot(y).unwrap().negate_principal(z);
            assert_eq!(&rebuilt, other.matrix());
            related += 1;
        }
    }
    assert!(related > 200);
}

/// With at most three leaves every branch-decomposition is linked: the
/// single internal structure forces the path minimum to meet the
/// separation minimum.
#[test]
fn small_decompositions_are_always_linked() {
    use pivotlab::chaingroup::MatrixRepresentation;
    use pivotlab::widths::is_linked;

    let mut r = rng(0x31);
    for i in 0..60 {
        let field = gf(if i % 2 == 0 { 2 } else { 3 });
        let kind = [MatrixKind::SkewSymmetric, MatrixKind::Symmetric][i % 2];
        let n = 2 + i % 2; // 2 or 3 elements
        let m = random_matrix(&mut r, &field, n, kind);
        let group = MatrixRepresentation::standard(m).chain_group();
        for tree in all_cubic_trees(group.ground()) {
            assert!(is_linked(&group, &tree).unwrap());
        }
    }
}
