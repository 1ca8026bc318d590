use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::PreToroidalSitus;
use crate::error::{Error, Result};
use crate::fan::{hilbert_basis, MonomialIdeal, RationalCone, MAX_HILBERT_CANDIDATES};
use crate::lattice::{
    add, monomial_character, sub, unit_vector, zero_vector, Character, FiniteDiagonalGroup,
    IntegerMatrix, LatticeVector, Residue,
};

/// The ideal generated by `x` and by the monomials of the base chart on
/// which the group acts through `psi_x`.
///
/// Every generator has character exactly `psi_x`. When `psi_x` is induced by
/// a unit of the base chart the result is the unit ideal.
pub fn torific_ideal(s: &PreToroidalSitus) -> Result<MonomialIdeal> {
    let d0 = s.base_rank();
    let span = s.base_cone().span();
    let k = span.dim();

    // Characters of base monomials are well defined modulo units only on the
    // stabilizer of the base chart; solve there in span coordinates.
    let stab = super::base_stabilizer(s.group(), s.base_cone())?;
    let reduced_gens: Vec<Vec<Residue>> = stab
        .generators()
        .iter()
        .map(|g| {
            let mut c: Vec<Residue> = (0..k)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for i in 0..d0 {
                        acc += g[i].value() * BigRational::from_integer(span.section[(i, j)].clone());
                    }
                    Residue::new(acc)
                })
                .collect();
            c.push(g[d0].clone());
            c
        })
        .collect();
    let reduced = FiniteDiagonalGroup::new(k + 1, reduced_gens)?;
    let reduced_psi = monomial_character(&unit_vector(k + 1, k), &reduced)?;
    let span_cone = RationalCone::new(
        k,
        &s.base_cone()
            .rays()
            .iter()
            .map(|r| span.coords(r))
            .collect::<Vec<_>>(),
    )?;
    let minimal = coset_minimal(&span_cone, &reduced, &reduced_psi)?;

    let units: Vec<LatticeVector> = span
        .complement
        .iter()
        .map(|u| extend(u))
        .collect();
    let psi = s.psi_x();
    let mut gens = vec![s.x_exponent()];
    for m in minimal {
        let lifted = extend(&span.lift_functional(&m));
        let adjusted = adjust_by_units(&lifted, &psi, &units, s.group())?.ok_or_else(|| {
            Error::InconsistentCharacter(format!(
                "no unit moves the character of {lifted:?} onto psi_x"
            ))
        })?;
        gens.push(adjusted);
    }
    Ok(MonomialIdeal::new(s.rank(), gens)?.minimalized(&s.total_cone().dual()))
}

fn extend(v: &[BigInt]) -> LatticeVector {
    let mut out = v.to_vec();
    out.push(BigInt::zero());
    out
}

fn character_in(m: &[BigInt], group: &FiniteDiagonalGroup) -> Character {
    monomial_character(m, group).expect("ranks agree")
}

/// Minimal lattice points `m` of the dual of the full-dimensional `cone` with
/// `χ(m, 0) = psi` on `group` (which acts on `Z^{k+1}`).
///
/// A minimal element is a sum of at most `|group| - 1` Hilbert basis elements:
/// among the partial sums of a longer sum two share a character, and removing
/// the block between them leaves a smaller element with the same character.
fn coset_minimal(
    cone: &RationalCone,
    group: &FiniteDiagonalGroup,
    psi: &Character,
) -> Result<Vec<LatticeVector>> {
    let k = cone.ambient_rank();
    if psi.is_trivial() {
        return Ok(vec![zero_vector(k)]);
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let dual = cone.dual();
    let hb = hilbert_basis(&dual)?;
    let chars: Vec<Character> = hb.iter().map(|h| character_in(&extend(h), group)).collect();
    let order = group.order().to_usize().filter(|&n| n <= MAX_HILBERT_CANDIDATES).ok_or_else(|| {
        Error::Capacity(format!("group of order {} is too large", group.order()))
    })?;

    let mut found: BTreeSet<LatticeVector> = BTreeSet::new();
    let mut level: HashMap<LatticeVector, Character> = HashMap::new();
    level.insert(zero_vector(k), Character::trivial(psi.values.len()));
    let mut budget = MAX_HILBERT_CANDIDATES;
    for _ in 1..order {
        let mut next: HashMap<LatticeVector, Character> = HashMap::new();
        for (v, c) in &level {
            for (h, ch) in hb.iter().zip(&chars) {
                let w = add(v, h);
                let c2 = c.add(ch);
                if &c2 == psi {
                    found.insert(w);
                } else if !c2.is_trivial() {
                    // Elements extending a nonzero invariant are never minimal.
                    next.insert(w, c2);
                }
            }
        }
        budget = budget.checked_sub(next.len()).ok_or_else(|| {
            Error::Capacity(format!(
                "torific generator search exceeded {MAX_HILBERT_CANDIDATES} candidates"
            ))
        })?;
        if next.is_empty() {
            break;
        }
        level = next;
    }
    let h = dual.hrep();
    let found: Vec<LatticeVector> = found.into_iter().collect();
    Ok(found
        .iter()
        .filter(|m| !found.iter().any(|n| n != *m && h.contains(&sub(m, n))))
        .cloned()
        .collect())
}

/// Adds an integer combination of `units` to `m` so that its character
/// becomes `target`, preferring the fewest unit steps.
pub(crate) fn adjust_by_units(
    m: &[BigInt],
    target: &Character,
    units: &[LatticeVector],
    group: &FiniteDiagonalGroup,
) -> Result<Option<LatticeVector>> {
    let start = character_in(m, group);
    let steps: Vec<Character> = units.iter().map(|u| character_in(u, group)).collect();
    let mut seen: HashSet<Character> = HashSet::new();
    let mut queue: VecDeque<(Character, LatticeVector)> = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, m.to_vec()));
    while let Some((c, v)) = queue.pop_front() {
        if &c == target {
            return Ok(Some(v));
        }
        for (u, cu) in units.iter().zip(&steps) {
            let c2 = c.add(cu);
            if seen.insert(c2.clone()) {
                if seen.len() > crate::lattice::MAX_GROUP_ELEMENTS {
                    return Err(Error::Capacity("character search exceeded bound".into()));
                }
                queue.push_back((c2, add(&v, u)));
            }
        }
    }
    Ok(None)
}

/// Compares the torific ideal of the stabilizer of `τ` on the chart of `τ`
/// with the restriction of the torific ideal to that chart.
pub fn localization_check(s: &PreToroidalSitus, tau: &RationalCone) -> Result<bool> {
    let local = s.localized(tau)?;
    let global = torific_ideal(s)?;
    let localized = torific_ideal(&local)?;
    let chart = local.total_cone().dual();
    Ok(global.is_contained_in(&localized, &chart) && localized.is_contained_in(&global, &chart))
}

/// Checks that the lattice isomorphism `F` (acting on `N` by `v -> F v`)
/// carries `s` onto `s2`, then compares the pullback of the torific ideal of
/// `s2` with the torific ideal of `s`.
pub fn variance_check(s: &PreToroidalSitus, s2: &PreToroidalSitus, f: &IntegerMatrix) -> Result<bool> {
    check_isomorphism(s, s2, f)?;
    let i = torific_ideal(s)?;
    let i2 = torific_ideal(s2)?;
    let ft = f.transpose();
    let pulled = MonomialIdeal::new(
        s.rank(),
        i2.generators().iter().map(|m| ft.apply(m)).collect(),
    )?;
    let chart = s.total_cone().dual();
    Ok(pulled.is_contained_in(&i, &chart) && i.is_contained_in(&pulled, &chart))
}

pub(crate) fn check_isomorphism(s: &PreToroidalSitus, s2: &PreToroidalSitus, f: &IntegerMatrix) -> Result<()> {
    let d = s.rank();
    if s2.rank() != d || f.rows() != d || f.cols() != d {
        return Err(Error::NotAnIsomorphism(format!(
            "map of shape {}x{} between lattices of rank {d} and {}",
            f.rows(),
            f.cols(),
            s2.rank()
        )));
    }
    if !f.is_unimodular() {
        return Err(Error::NotAnIsomorphism("map is not unimodular".into()));
    }
    if f.apply(&s.x_exponent()) != s2.x_exponent() {
        return Err(Error::NotAnIsomorphism("map does not fix the x direction".into()));
    }
    if s.total_cone().image(f)? != s2.total_cone() {
        return Err(Error::NotAnIsomorphism("map does not carry chart onto chart".into()));
    }
    if !s.group().image(f)?.same_subgroup(s2.group()) {
        return Err(Error::NotAnIsomorphism("map does not carry group onto group".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::vector;

    fn situs(base: RationalCone, gens: &[Vec<(i64, i64)>]) -> PreToroidalSitus {
        let d = base.ambient_rank() + 1;
        PreToroidalSitus::new(base, FiniteDiagonalGroup::from_ratios(d, gens).unwrap()).unwrap()
    }

    #[test]
    fn trivial_group_gives_unit_ideal() {
        let s = situs(RationalCone::orthant(2), &[]);
        let i = torific_ideal(&s).unwrap();
        assert!(i.is_unit(&s.total_cone().dual()));
    }

    #[test]
    fn sign_action_on_line() {
        let s = situs(RationalCone::orthant(1), &[vec![(1, 2), (1, 2)]]);
        let i = torific_ideal(&s).unwrap();
        assert_eq!(i.generators(), &[vector(&[0, 1]), vector(&[1, 0])]);
    }

    #[test]
    fn order_three_action_on_line() {
        let s = situs(RationalCone::orthant(1), &[vec![(1, 3), (2, 3)]]);
        let i = torific_ideal(&s).unwrap();
        assert_eq!(i.generators(), &[vector(&[0, 1]), vector(&[2, 0])]);
    }

    #[test]
    fn generators_carry_psi_x() {
        let base = RationalCone::from_i64(2, &[[1, 0], [1, 3]]).unwrap();
        let s = situs(base, &[vec![(1, 5), (2, 5), (3, 5)]]);
        let i = torific_ideal(&s).unwrap();
        for m in i.generators() {
            assert_eq!(monomial_character(m, s.group()).unwrap(), s.psi_x());
        }
        assert!(i.generators().len() >= 2);
    }

    #[test]
    fn lower_dimensional_base_adjusts_by_units() {
        // base chart A^1 × G_m; G acts on the unit coordinate, which can absorb psi_x
        let base = RationalCone::from_i64(2, &[[1, 0]]).unwrap();
        let s = situs(base, &[vec![(0, 1), (1, 2), (1, 2)]]);
        let i = torific_ideal(&s).unwrap();
        assert!(i.is_unit(&s.total_cone().dual()));
        for m in i.generators() {
            assert_eq!(monomial_character(m, s.group()).unwrap(), s.psi_x());
        }
    }

    #[test]
    fn localization_on_faces() {
        let s = situs(RationalCone::orthant(1), &[vec![(1, 2), (1, 2)]]);
        for tau in s.base_cone().faces() {
            assert!(localization_check(&s, &tau).unwrap());
        }
        let s = situs(RationalCone::orthant(2), &[vec![(1, 3), (0, 1), (1, 3)]]);
        for tau in s.base_cone().faces() {
            assert!(localization_check(&s, &tau).unwrap());
        }
    }

    #[test]
    fn swap_symmetry_preserves_ideal() {
        let s = situs(RationalCone::orthant(2), &[vec![(1, 4), (1, 4), (1, 2)]]);
        let swap = IntegerMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert!(variance_check(&s, &s, &swap).unwrap());
        assert!(variance_check(&s, &s, &IntegerMatrix::identity(3)).unwrap());
        let shear = IntegerMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(matches!(
            variance_check(&s, &s, &shear),
            Err(Error::NotAnIsomorphism(_))
        ));
    }
}
