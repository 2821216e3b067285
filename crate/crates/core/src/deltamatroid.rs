//! Delta-matroids: set systems satisfying the symmetric exchange axiom,
//! their matrix and chain-group representations, twisting, and minors.

use crate::chaingroup::{Chain, ChainGroup};
use crate::error::{Error, Result};
use crate::fmatrix::{GroundSet, LabeledMatrix};
use crate::gf::FieldElement;
use crate::linalg::Mat;
use crate::subset::{self, Subset};
use std::fmt;

/// A ground set with an explicit feasible-set family, stored in canonical
/// subset order. Construction verifies the symmetric exchange axiom.
#[derive(Clone, PartialEq, Eq)]
pub struct DeltaMatroid {
    ground: GroundSet,
    feasible: Vec<Subset>,
}

impl fmt::Debug for DeltaMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sets: Vec<String> = self
            .feasible
            .iter()
            .map(|&s| {
                let labels = self.ground.labels_from_subset(s);
                if labels.is_empty() {
                    "-".to_string()
                } else {
                    labels.join(" ")
                }
            })
            .collect();
        write!(f, "DeltaMatroid on {:?}: {{{}}}", self.ground.labels(), sets.join(", "))
    }
}

fn canonicalize(mut family: Vec<Subset>) -> Vec<Subset> {
    family.sort_by(|&a, &b| subset::canonical_cmp(a, b));
    family.dedup();
    family
}

/// Exhaustive check of the symmetric exchange axiom: for feasible F, F' and
/// x in F delta F' there is y in F delta F' with F delta {x, y} feasible
/// (y = x allowed).
pub fn check_sea(family: &[Subset]) -> Result<bool> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let set: std::collections::HashSet<Subset> = family.iter().copied().collect();
    for &f in family {
        for &f2 in family {
            let sym = f ^ f2;
            for x in subset::members(sym) {
                let ok = subset::members(sym).any(|y| {
                    let move_set = (1u32 << x) | (1u32 << y);
                    set.contains(&(f ^ move_set))
                });
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

impl DeltaMatroid {
    pub fn new(ground: GroundSet, family: Vec<Subset>) -> Result<DeltaMatroid> {
        let feasible = canonicalize(family);
        if !check_sea(&feasible)? {
            return Err(Error::ExchangeAxiomFailed);
        }
        Ok(DeltaMatroid { ground, feasible })
    }

    /// Skip the exchange-axiom sweep; for families already known to satisfy
    /// it (for instance large sweeps over matrix families).
    pub fn new_unchecked(ground: GroundSet, family: Vec<Subset>) -> Result<DeltaMatroid> {
        let feasible = canonicalize(family);
        if feasible.is_empty() {
            return Err(Error::EmptyFamily);
        }
        Ok(DeltaMatroid { ground, feasible })
    }

    /// The delta-matroid of a matrix: X is feasible iff M[X] is nonsingular.
    /// The empty set is always feasible.
    pub fn from_matrix(m: &LabeledMatrix) -> Result<DeltaMatroid> {
        Self::from_matrix_with_cap(m, 20)
    }

    pub fn from_matrix_with_cap(m: &LabeledMatrix, cap: usize) -> Result<DeltaMatroid> {
        let feasible = m.nonsingular_principal_sets_with_cap(cap)?;
        DeltaMatroid::new_unchecked(m.ground().clone(), feasible)
    }

    /// The delta-matroid of an isotropic chain-group with supplementary
    /// chains a, b: X is feasible iff no nonzero chain of N is orthogonal to
    /// a off X and to b on X.
    pub fn from_chain_group(n: &ChainGroup, a: &Chain, b: &Chain) -> Result<DeltaMatroid> {
        Self::from_chain_group_with_cap(n, a, b, 16)
    }

    pub fn from_chain_group_with_cap(
        n: &ChainGroup,
        a: &Chain,
        b: &Chain,
        cap: usize,
    ) -> Result<DeltaMatroid> {
        if !n.is_isotropic() {
            return Err(Error::NotIsotropic);
        }
        let count = n.ground().len();
        if count > cap {
            return Err(Error::GroundSetTooLarge { n: count, cap });
        }
        if a.ground() != n.ground() || b.ground() != n.ground() {
            return Err(Error::GroundMismatch);
        }
        let field = n.field();
        let form = n.form();
        for v in 0..count {
            let av = a.get(v);
            let bv = b.get(v);
            if !form.eval(field, av, av).is_zero()
                || !form.eval(field, bv, bv).is_zero()
                || form.eval(field, av, bv) != FieldElement::ONE
            {
                return Err(Error::NotSupplementary);
            }
        }
        let basis = n.basis_chains();
        let mut feasible = Vec::new();
        for x in subset::subsets_of(n.ground().full_mask()) {
            // constraint matrix: rows = basis chains, columns = elements,
            // entry = <f(w), a(w)> off X and <f(w), b(w)> on X
            let rows: Vec<Vec<FieldElement>> = basis
                .iter()
                .map(|f| {
                    (0..count)
                        .map(|w| {
                            let dir = if subset::contains(x, w) { b } else { a };
                            form.eval(field, f.get(w), dir.get(w))
                        })
                        .collect()
                })
                .collect();
            let m = Mat::from_rows(rows, count, field.clone());
            if m.rank() == n.dim() {
                feasible.push(x);
            }
        }
        DeltaMatroid::new_unchecked(n.ground().clone(), feasible)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn feasible(&self) -> &[Subset] {
        &self.feasible
    }

    pub fn is_feasible(&self, x: Subset) -> bool {
        self.feasible.binary_search_by(|&s| subset::canonical_cmp(s, x)).is_ok()
    }

    /// Twisting: the family F delta X on the same ground set.
    pub fn twist(&self, x: Subset) -> DeltaMatroid {
        DeltaMatroid {
            ground: self.ground.clone(),
            feasible: canonicalize(self.feasible.iter().map(|&f| f ^ x).collect()),
        }
    }

    /// Deletion: feasible sets avoiding X, on the ground set V \ X. Errors
    /// when no feasible set survives.
    pub fn delete(&self, x: Subset) -> Result<DeltaMatroid> {
        let keep = self.ground.full_mask() & !x;
        let family: Vec<Subset> = self
            .feasible
            .iter()
            .filter(|&&f| f & x == 0)
            .map(|&f| subset::compress(f, keep))
            .collect();
        if family.is_empty() {
            return Err(Error::EmptyAfterDeletion);
        }
        Ok(DeltaMatroid {
            ground: self.ground.restricted(keep),
            feasible: canonicalize(family),
        })
    }

    /// Whether all feasible sets share one parity.
    pub fn is_even(&self) -> bool {
        self.feasible
            .iter()
            .all(|&f| subset::size(f) % 2 == subset::size(self.feasible[0]) % 2)
    }
}

/// Search for a witness that `d1` is isomorphic to a minor of `d2`: a twist
/// set, a deletion set, and a bijection (as a permutation of d1's positions
/// into the retained positions of d2). First witness in canonical order.
pub fn dm_minor_contained(
    d1: &DeltaMatroid,
    d2: &DeltaMatroid,
) -> Result<Option<(Subset, Subset, Vec<usize>)>> {
    dm_minor_contained_with_cap(d1, d2, 8)
}

pub fn dm_minor_contained_with_cap(
    d1: &DeltaMatroid,
    d2: &DeltaMatroid,
    cap: usize,
) -> Result<Option<(Subset, Subset, Vec<usize>)>> {
    let n2 = d2.ground.len();
    if n2 > cap {
        return Err(Error::GroundSetTooLarge { n: n2, cap });
    }
    let n1 = d1.ground.len();
    if n1 > n2 {
        return Ok(None);
    }
    let full = d2.ground.full_mask();
    let drop = (n2 - n1) as u32;
    for twist in subset::subsets_of(full) {
        let twisted = d2.twist(twist);
        for del in subset::subsets_of_size(full, drop) {
            let Ok(minor) = twisted.delete(del) else {
                continue;
            };
            if minor.feasible.len() != d1.feasible.len() {
                continue;
            }
            if let Some(perm) = family_isomorphism(d1, &minor) {
                return Ok(Some((twist, del, perm)));
            }
        }
    }
    Ok(None)
}

/// Lexicographically least bijection mapping d1's family onto d2's, if any.
fn family_isomorphism(d1: &DeltaMatroid, d2: &DeltaMatroid) -> Option<Vec<usize>> {
    let n = d1.ground.len();
    debug_assert_eq!(n, d2.ground.len());
    let set2: std::collections::HashSet<Subset> = d2.feasible.iter().copied().collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut result = None;
    visit_permutations(&mut perm, 0, &mut |p| {
        let mapped: Vec<Subset> = d1
            .feasible
            .iter()
            .map(|&f| {
                let mut out = 0u32;
                for i in subset::members(f) {
                    out |= 1 << p[i];
                }
                out
            })
            .collect();
        if mapped.len() == set2.len() && mapped.iter().all(|m| set2.contains(m)) {
            result = Some(p.to_vec());
            true
        } else {
            false
        }
    });
    result
}

fn visit_permutations(
    perm: &mut Vec<usize>,
    k: usize,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    let n = perm.len();
    if k == n {
        return visit(perm);
    }
    let mut rest: Vec<usize> = perm[k..].to_vec();
    rest.sort_unstable();
    for &cand in &rest {
        let pos = perm[k..].iter().position(|&x| x == cand).unwrap() + k;
        perm.swap(k, pos);
        perm[k + 1..].sort_unstable();
        if visit_permutations(perm, k + 1, visit) {
            return true;
        }
        let pos = perm[k..].iter().position(|&x| x == cand).unwrap() + k;
        perm.swap(k, pos);
        perm[k..].sort_unstable();
    }
    false
}

/// Family text format: one feasible set per line, labels space-separated,
/// `-` for the empty set.
pub fn parse_family(ground: &GroundSet, text: &str) -> Result<Vec<Subset>> {
    let mut family = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == "-" {
            family.push(0);
            continue;
        }
        let labels: Vec<&str> = line.split_whitespace().collect();
        family.push(ground.subset_from_labels(&labels).map_err(|e| match e {
            Error::UnknownLabel { label } => Error::ParseError {
                line: ln + 1,
                reason: format!("unknown label `{label}`"),
            },
            other => other,
        })?);
    }
    Ok(family)
}

pub fn format_family(d: &DeltaMatroid) -> String {
    let mut out = String::new();
    for &f in &d.feasible {
        if f == 0 {
            out.push_str("-\n");
        } else {
            out.push_str(&d.ground.labels_from_subset(f).join(" "));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaingroup::MatrixRepresentation;
    use crate::fmatrix::MatrixKind;
    use crate::gf::FiniteField;

    fn p3() -> LabeledMatrix {
        let f = FiniteField::new(2).unwrap();
        let g = GroundSet::numbered(3);
        let one = f.one();
        let zero = f.zero();
        LabeledMatrix::new(
            g,
            f,
            MatrixKind::SkewSymmetric,
            vec![zero, one, zero, one, zero, one, zero, one, zero],
        )
        .unwrap()
    }

    #[test]
    fn sea_examples() {
        // the P3 family passes
        assert!(check_sea(&[0b000, 0b011, 0b110]).unwrap());
        // {emptyset, {1,2,3}} fails: x = 1 has no exchange partner
        assert!(!check_sea(&[0b000, 0b111]).unwrap());
        // single-set families are vacuously fine
        assert!(check_sea(&[0b101]).unwrap());
        assert!(matches!(check_sea(&[]), Err(Error::EmptyFamily)));
        assert!(matches!(
            DeltaMatroid::new(GroundSet::numbered(3), vec![0, 0b111]),
            Err(Error::ExchangeAxiomFailed)
        ));
    }

    #[test]
    fn from_matrix_examples() {
        let f = FiniteField::new(2).unwrap();
        let z = LabeledMatrix::zero(GroundSet::numbered(2), f.clone(), MatrixKind::Symmetric);
        assert_eq!(DeltaMatroid::from_matrix(&z).unwrap().feasible(), &[0]);
        let id = LabeledMatrix::from_fn(
            GroundSet::numbered(2),
            f.clone(),
            MatrixKind::Symmetric,
            |i, j| if i == j { f.one() } else { f.zero() },
        )
        .unwrap();
        assert_eq!(DeltaMatroid::from_matrix(&id).unwrap().feasible().len(), 4);
        let d = DeltaMatroid::from_matrix(&p3()).unwrap();
        assert_eq!(d.feasible(), &[0b000, 0b011, 0b110]);
        assert!(check_sea(d.feasible()).unwrap());
    }

    #[test]
    fn twist_and_delete_match_pivot_and_submatrix() {
        let d = DeltaMatroid::from_matrix(&p3()).unwrap();
        assert_eq!(d.twist(0), d);
        let piv = p3().pivot(0b011).unwrap();
        assert_eq!(d.twist(0b011), DeltaMatroid::from_matrix(&piv).unwrap());
        let sub = p3().principal(0b011);
        assert_eq!(
            d.delete(0b100).unwrap(),
            DeltaMatroid::from_matrix(&sub).unwrap()
        );
        // deleting everything with only nonempty feasible sets left errs
        let one_set = DeltaMatroid::new(GroundSet::numbered(1), vec![0b1]).unwrap();
        assert!(matches!(
            one_set.delete(0b1),
            Err(Error::EmptyAfterDeletion)
        ));
    }

    #[test]
    fn parity() {
        let d = DeltaMatroid::from_matrix(&p3()).unwrap();
        assert!(d.is_even());
        let odd = DeltaMatroid::new(GroundSet::numbered(1), vec![0, 0b1]).unwrap();
        assert!(!odd.is_even());
        let single = DeltaMatroid::new(GroundSet::numbered(1), vec![0]).unwrap();
        assert!(single.is_even());
    }

    #[test]
    fn chain_group_representation_matches_matrix() {
        let rep = MatrixRepresentation::standard(p3());
        let n = rep.chain_group();
        let d = DeltaMatroid::from_chain_group(&n, rep.a(), rep.b()).unwrap();
        assert_eq!(d, DeltaMatroid::from_matrix(&p3()).unwrap());
    }

    #[test]
    fn chain_group_top_units() {
        use crate::chaingroup::FormKind;
        let f = FiniteField::new(2).unwrap();
        let g = GroundSet::numbered(2);
        let ups: Vec<Chain> = (0..2).map(|v| Chain::unit_top(g.clone(), v)).collect();
        let n = ChainGroup::span(g.clone(), f.clone(), FormKind::BPlus, &ups).unwrap();
        let a = Chain::constant(g.clone(), (FieldElement::ONE, FieldElement::ZERO));
        let b = Chain::constant(g.clone(), (FieldElement::ZERO, FieldElement::ONE));
        // tops are orthogonal to a = (1,0) everywhere, so only X = V forbids
        // a nonzero solution
        let d = DeltaMatroid::from_chain_group(&n, &a, &b).unwrap();
        assert_eq!(d.feasible(), &[0b11]);
        // swapping a and b twists by V
        let d2 = DeltaMatroid::from_chain_group(&n, &b, &a).unwrap();
        assert_eq!(d2.feasible(), &[0]);
        assert_eq!(d.twist(0b11), d2);
    }

    #[test]
    fn minor_containment_examples() {
        let d = DeltaMatroid::from_matrix(&p3()).unwrap();
        assert_eq!(
            dm_minor_contained(&d, &d).unwrap(),
            Some((0, 0, vec![0, 1, 2]))
        );
        let f = FiniteField::new(2).unwrap();
        let z = LabeledMatrix::zero(
            GroundSet::new(["z"]).unwrap(),
            f,
            MatrixKind::SkewSymmetric,
        );
        let dz = DeltaMatroid::from_matrix(&z).unwrap();
        assert!(dm_minor_contained(&dz, &d).unwrap().is_some());
        assert_eq!(dm_minor_contained(&d, &dz).unwrap(), None);
    }

    #[test]
    fn family_text_round_trip() {
        let d = DeltaMatroid::from_matrix(&p3()).unwrap();
        let text = format_family(&d);
        assert_eq!(text, "-\n1 2\n2 3\n");
        let family = parse_family(d.ground(), &text).unwrap();
        assert_eq!(
            DeltaMatroid::new(d.ground().clone(), family).unwrap(),
            d
        );
        assert!(parse_family(d.ground(), "1 4\n").is_err());
    }
}
