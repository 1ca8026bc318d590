use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::cone::{format_vector, RationalCone};
use super::Fan;
use crate::error::{Error, Result};
use crate::lattice::{content, dot, is_zero, neg, sub, LatticeVector};

/// A monomial ideal given by exponent vectors in `M`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialIdeal {
    ambient_rank: usize,
    generators: Vec<LatticeVector>,
}

impl MonomialIdeal {
    pub fn new(ambient_rank: usize, generators: Vec<LatticeVector>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument("monomial ideal needs a generator".into()));
        }
        for g in &generators {
            if g.len() != ambient_rank {
                return Err(Error::DimensionMismatch {
                    expected: ambient_rank,
                    found: g.len(),
                });
            }
        }
        let generators: Vec<LatticeVector> =
            generators.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        Ok(MonomialIdeal {
            ambient_rank,
            generators,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn generators(&self) -> &[LatticeVector] {
        &self.generators
    }

    /// Drops generators divisible by another generator in the semigroup of
    /// `dual_cone` (the chart's `σ∨`). Of generators differing by a unit the
    /// lexicographically smallest is kept.
    pub fn minimalized(&self, dual_cone: &RationalCone) -> MonomialIdeal {
        let h = dual_cone.hrep();
        let gens = &self.generators;
        let mut keep = Vec::new();
        for (i, m) in gens.iter().enumerate() {
            let dominated = gens.iter().enumerate().any(|(j, n)| {
                if i == j {
                    return false;
                }
                let diff = sub(m, n);
                if !h.contains(&diff) {
                    return false;
                }
                // m = n * (unit) with the unit's inverse also regular: tie.
                if h.contains(&neg(&diff)) {
                    j < i
                } else {
                    true
                }
            });
            if !dominated {
                keep.push(m.clone());
            }
        }
        MonomialIdeal {
            ambient_rank: self.ambient_rank,
            generators: keep,
        }
    }

    /// Whether some generator is invertible on the chart with dual cone `dual_cone`.
    pub fn is_unit(&self, dual_cone: &RationalCone) -> bool {
        let h = dual_cone.hrep();
        self.generators
            .iter()
            .any(|m| h.contains(m) && h.contains(&neg(m)))
    }

    /// Whether `m` lies in the ideal on the chart with dual cone `dual_cone`.
    pub fn contains(&self, m: &[BigInt], dual_cone: &RationalCone) -> bool {
        let h = dual_cone.hrep();
        self.generators.iter().any(|g| h.contains(&sub(m, g)))
    }

    /// Ideal containment on a common chart.
    pub fn is_contained_in(&self, other: &MonomialIdeal, dual_cone: &RationalCone) -> bool {
        self.generators.iter().all(|g| other.contains(g, dual_cone))
    }
}

/// Order of vanishing of the monomial `m` along the divisor of the ray `ρ`.
pub fn valuation(m: &[BigInt], ray: &[BigInt]) -> Result<BigInt> {
    if m.len() != ray.len() {
        return Err(Error::DimensionMismatch {
            expected: ray.len(),
            found: m.len(),
        });
    }
    Ok(dot(m, ray))
}

/// Star subdivision of `fan` at the primitive vector `v`.
pub fn star_subdivision(fan: &Fan, v: &[BigInt]) -> Result<Fan> {
    if v.len() != fan.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: fan.ambient_rank(),
            found: v.len(),
        });
    }
    if is_zero(v) {
        return Err(Error::InvalidArgument("cannot subdivide at the zero vector".into()));
    }
    if content(v) != BigInt::from(1) {
        return Err(Error::InvalidArgument(format!(
            "subdivision point {} is not primitive",
            format_vector(v)
        )));
    }
    if !fan.support_contains(v) {
        return Err(Error::OutsideSupport(format_vector(v)));
    }
    let mut out = Vec::new();
    for c in fan.cones() {
        if c.has_ray(v) || !c.contains(v) {
            out.push(c.clone());
            continue;
        }
        let facet_sets = c.facet_ray_sets();
        let h = c.hrep();
        for (f, rays) in h.facets.iter().zip(&facet_sets) {
            if dot(f, v) == BigInt::from(0) {
                continue;
            }
            let mut gens: Vec<LatticeVector> = rays.iter().map(|&i| c.rays()[i].clone()).collect();
            gens.push(v.to_vec());
            for l in c.lineality() {
                gens.push(l.clone());
                gens.push(neg(l));
            }
            out.push(RationalCone::generated_by(c.ambient_rank(), &gens)?);
        }
    }
    Fan::new(fan.ambient_rank(), out)
}

/// Maximal cones of the normalized blowup of the chart of `σ` along `ideal`,
/// each paired with the generator that is minimal on it.
pub fn blowup_charts(
    sigma: &RationalCone,
    ideal: &MonomialIdeal,
) -> Result<Vec<(RationalCone, LatticeVector)>> {
    if ideal.ambient_rank() != sigma.ambient_rank() {
        return Err(Error::DimensionMismatch {
            expected: sigma.ambient_rank(),
            found: ideal.ambient_rank(),
        });
    }
    let dual = sigma.dual();
    let dh = dual.hrep();
    for m in ideal.generators() {
        if !dh.contains(m) {
            return Err(Error::NotRegular(format_vector(m)));
        }
    }
    let dim = sigma.dim();
    let dual_gens = dual.generators();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mi in ideal.generators() {
        let mut gens = dual_gens.clone();
        for mj in ideal.generators() {
            if mj != mi {
                gens.push(sub(mj, mi));
            }
        }
        let chart = RationalCone::generated_by(sigma.ambient_rank(), &gens)?.dual();
        if chart.dim() == dim && seen.insert(chart.clone()) {
            out.push((chart, mi.clone()));
        }
    }
    out.sort();
    Ok(out)
}

/// The normalized blowup of the chart of `σ` along a monomial ideal, as a fan
/// refining `σ`: the domains of linearity of `v -> min_m <v, m>`.
pub fn blowup_monomial_ideal(sigma: &RationalCone, ideal: &MonomialIdeal) -> Result<Fan> {
    let charts = blowup_charts(sigma, ideal)?;
    Fan::new(
        sigma.ambient_rank(),
        charts.into_iter().map(|(c, _)| c).collect(),
    )
}
