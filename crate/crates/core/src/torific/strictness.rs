use num_bigint::BigInt;
use num_traits::Signed;

use super::ideal::check_isomorphism;
use super::PreToroidalSitus;
use crate::error::{Error, Result};
use crate::fan::{valuation, Fan};
use crate::lattice::{unit_vector, IntegerMatrix, LatticeVector, Residue};

/// A group element together with the lattice symmetry by which it acts on
/// the fan (`v -> F v`). Torus elements pair with the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedSymmetry {
    pub element: Vec<Residue>,
    pub lattice_map: IntegerMatrix,
}

/// Orders of vanishing along one exceptional ray `v` (divisor `E`).
///
/// `f_j` are the base coordinates. Primed values are orders of the pulled
/// back functions along `E`; double-primed values are their orders along the
/// pulled back divisor `g^{-1}(E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayValuations {
    pub ray: LatticeVector,
    pub image: LatticeVector,
    pub n_j: Vec<BigInt>,
    pub n: BigInt,
    pub n_prime_j: Vec<BigInt>,
    pub n_prime: BigInt,
    pub n_double_prime_j: Vec<BigInt>,
    pub n_double_prime: BigInt,
    /// `E` meets `g(E)`.
    pub meets_image: bool,
    /// The center of `E` lies in `V(x)`.
    pub maps_into_vx: bool,
}

impl RayValuations {
    pub fn fixed(&self) -> bool {
        self.ray == self.image
    }

    pub fn pullback_identity(&self) -> bool {
        self.n_j == self.n_double_prime_j && self.n == self.n_double_prime
    }

    pub fn invariance(&self) -> bool {
        self.n_j == self.n_prime_j && self.n == self.n_prime
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValuationReport {
    pub rays: Vec<RayValuations>,
}

impl ValuationReport {
    /// `n_j = n''_j` and `n = n''` on every exceptional ray.
    pub fn pullback_identities_hold(&self) -> bool {
        self.rays.iter().all(RayValuations::pullback_identity)
    }

    /// `n > 0` whenever the center lies in `V(x)`.
    pub fn x_orders_positive(&self) -> bool {
        self.rays
            .iter()
            .all(|r| !r.maps_into_vx || r.n.is_positive())
    }

    /// Whenever `E` meets `g(E)`, the valuations agree and `g(E) = E`.
    pub fn strict(&self) -> bool {
        self.rays
            .iter()
            .all(|r| !r.meets_image || (r.invariance() && r.fixed()))
    }

    pub fn passes(&self) -> bool {
        self.pullback_identities_hold() && self.x_orders_positive() && self.strict()
    }
}

/// Valuation table of the base coordinates and `x` along the exceptional rays
/// of `fan` (a refinement of the total chart of `s`) under a paired symmetry.
pub fn strictness_report(
    s: &PreToroidalSitus,
    fan: &Fan,
    g: &PairedSymmetry,
) -> Result<ValuationReport> {
    let d = s.rank();
    let f = &g.lattice_map;
    check_isomorphism(s, s, f)?;
    if g.element.len() != d || !s.group().contains(&g.element) {
        return Err(Error::InvalidArgument("element is not in the group".into()));
    }
    if fan.ambient_rank() != d || fan.image(f)? != *fan {
        return Err(Error::NotAnIsomorphism("map does not preserve the fan".into()));
    }
    let f_inv = f.unimodular_inverse().expect("checked unimodular");
    let ft = f.transpose();
    let total = s.total_cone();
    let ex = s.x_exponent();
    let functions: Vec<LatticeVector> = (0..s.base_rank()).map(|j| unit_vector(d, j)).collect();
    let cones = fan.cones();

    let mut rays = Vec::new();
    for v in fan.rays() {
        if total.has_ray(&v) {
            continue;
        }
        let image = f.apply(&v);
        let pre = f_inv.apply(&v);
        let order = |ray: &LatticeVector, m: &LatticeVector| valuation(m, ray);
        let n_j = functions.iter().map(|m| order(&v, m)).collect::<Result<Vec<_>>>()?;
        let n = order(&v, &ex)?;
        // The element itself scales monomials by constants; only F moves orders.
        let n_prime_j = functions
            .iter()
            .map(|m| order(&v, &ft.apply(m)))
            .collect::<Result<Vec<_>>>()?;
        let n_prime = order(&v, &ft.apply(&ex))?;
        let n_double_prime_j = functions
            .iter()
            .map(|m| order(&pre, &ft.apply(m)))
            .collect::<Result<Vec<_>>>()?;
        let n_double_prime = order(&pre, &ft.apply(&ex))?;
        let meets_image = image == v || cones.iter().any(|c| c.has_ray(&v) && c.has_ray(&image));
        let maps_into_vx = total.face_containing(&v).is_some_and(|face| face.has_ray(&ex));
        rays.push(RayValuations {
            ray: v,
            image,
            n_j,
            n,
            n_prime_j,
            n_prime,
            n_double_prime_j,
            n_double_prime,
            meets_image,
            maps_into_vx,
        });
    }
    Ok(ValuationReport { rays })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::RationalCone;
    use crate::lattice::FiniteDiagonalGroup;
    use crate::torific::torify;

    #[test]
    fn sign_action_is_strict() {
        let s = PreToroidalSitus::new(
            RationalCone::orthant(1),
            FiniteDiagonalGroup::from_ratios(2, &[vec![(1, 2), (1, 2)]]).unwrap(),
        )
        .unwrap();
        let fan = torify(&s).unwrap().fan;
        let g = PairedSymmetry {
            element: s.group().generators()[0].clone(),
            lattice_map: IntegerMatrix::identity(2),
        };
        let rep = strictness_report(&s, &fan, &g).unwrap();
        assert_eq!(rep.rays.len(), 1);
        assert!(rep.rays[0].n.is_positive());
        assert!(rep.passes());
    }

    #[test]
    fn swap_on_plane_is_strict() {
        let s = PreToroidalSitus::new(
            RationalCone::orthant(2),
            FiniteDiagonalGroup::from_ratios(3, &[vec![(1, 2), (1, 2), (1, 2)]]).unwrap(),
        )
        .unwrap();
        let fan = torify(&s).unwrap().fan;
        let swap = IntegerMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let g = PairedSymmetry {
            element: s.group().generators()[0].clone(),
            lattice_map: swap,
        };
        let rep = strictness_report(&s, &fan, &g).unwrap();
        assert!(!rep.rays.is_empty());
        assert!(rep.passes());
    }

    #[test]
    fn symmetry_must_preserve_fan() {
        let s = PreToroidalSitus::new(
            RationalCone::orthant(2),
            FiniteDiagonalGroup::from_ratios(3, &[vec![(1, 2), (0, 1), (1, 2)]]).unwrap(),
        )
        .unwrap();
        let fan = torify(&s).unwrap().fan;
        let swap = IntegerMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let g = PairedSymmetry {
            element: vec![Residue::zero(); 3],
            lattice_map: swap,
        };
        assert!(strictness_report(&s, &fan, &g).is_err());
    }
}
