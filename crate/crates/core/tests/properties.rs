mod common;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use common::{big, box_points, brute_force_order, minor_multiplicity, supports_equal};
use toroidal::fan::{
    blowup_charts, hilbert_basis, star_subdivision, valuation, Fan, MonomialIdeal, RationalCone,
};
use toroidal::lattice::{
    add, dot, hermite_normal_form, is_hermite_form, monomial_character, primitive, smith_normal_form, sub,
    FiniteDiagonalGroup, IntegerMatrix, LatticeVector,
};
use toroidal::quotient::{stabilizer, DiagonalAction};
use toroidal::resolver::resolve;
use toroidal::torific::{localization_check, torific_ideal, torify, PreToroidalSitus};

fn matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-20i64..=20, c), r)
            .prop_map(move |rows| IntegerMatrix::from_i64(&rows))
    })
}

fn group_gens(d: usize) -> impl Strategy<Value = Vec<Vec<(i64, i64)>>> {
    prop::collection::vec(
        (1i64..=6).prop_flat_map(move |den| prop::collection::vec((0..den).prop_map(move |p| (p, den)), d)),
        1..=2,
    )
}

/// A full-dimensional simplicial cone in `Z^d` with entries in `[lo, hi]`.
fn simplicial_cone(d: usize, lo: i64, hi: i64) -> impl Strategy<Value = RationalCone> {
    prop::collection::vec(prop::collection::vec(lo..=hi, d), d)
        .prop_filter_map("rays must be independent", move |rows| {
            let rays: Vec<LatticeVector> = rows.iter().map(|r| primitive(&big(r))).collect();
            if minor_multiplicity(&rays).is_zero() {
                return None;
            }
            RationalCone::new(d, &rays).ok()
        })
}

fn in_cone(c: &RationalCone, x: &[BigInt]) -> bool {
    c.contains(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_reconstructs(a in matrix()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(&s.u * &s.u_inv, IntegerMatrix::identity(a.rows()));
        prop_assert_eq!(&s.v * &s.v_inv, IntegerMatrix::identity(a.cols()));
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        if a.rows() == a.cols() {
            let det = a.determinant();
            if !det.is_zero() {
                let prod: BigInt = f.iter().product();
                prop_assert_eq!(prod, num_traits::Signed::abs(&det));
            }
        }
    }

    #[test]
    fn hermite_form_is_row_equivalent(a in matrix()) {
        let (h, u) = hermite_normal_form(&a);
        prop_assert_eq!(&u * &a, h.clone());
        prop_assert!(u.is_unimodular());
        prop_assert!(is_hermite_form(&h));
    }

    #[test]
    fn group_order_matches_enumeration(d in 1usize..=3, seed in any::<u64>()) {
        let gens: Vec<Vec<(i64, i64)>> = {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            (0..rng.gen_range(1..=3))
                .map(|_| {
                    let den = rng.gen_range(1..=8);
                    (0..d).map(|_| (rng.gen_range(0..den), den)).collect()
                })
                .collect()
        };
        let g = FiniteDiagonalGroup::from_ratios(d, &gens).unwrap();
        prop_assert_eq!(g.order(), BigInt::from(brute_force_order(&gens)));
        prop_assert_eq!(g.elements().unwrap().len(), brute_force_order(&gens));
    }

    #[test]
    fn characters_are_additive(
        gens in group_gens(3),
        m1 in prop::collection::vec(-30i64..=30, 3),
        m2 in prop::collection::vec(-30i64..=30, 3),
    ) {
        let g = FiniteDiagonalGroup::from_ratios(3, &gens).unwrap();
        let (a, b) = (big(&m1), big(&m2));
        let sum = monomial_character(&add(&a, &b), &g).unwrap();
        let parts = monomial_character(&a, &g).unwrap().add(&monomial_character(&b, &g).unwrap());
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn double_dual_is_identity(gens in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3..=6)) {
        let gens: Vec<LatticeVector> = gens.iter().map(|g| big(g)).collect();
        let c = RationalCone::generated_by(3, &gens).unwrap();
        prop_assume!(c.is_strongly_convex() && c.is_full_dimensional());
        prop_assert_eq!(c.dual().dual(), c);
    }

    #[test]
    fn valuation_is_linear(
        ray in prop::collection::vec(-9i64..=9, 3),
        m1 in prop::collection::vec(-9i64..=9, 3),
        m2 in prop::collection::vec(-9i64..=9, 3),
    ) {
        let (r, a, b) = (big(&ray), big(&m1), big(&m2));
        prop_assert_eq!(
            valuation(&add(&a, &b), &r).unwrap(),
            valuation(&a, &r).unwrap() + valuation(&b, &r).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hilbert_basis_generates_and_is_minimal(c in prop_oneof![simplicial_cone(2, -5, 5), simplicial_cone(3, -3, 3)]) {
        let hb = hilbert_basis(&c).unwrap();
        let d = c.ambient_rank();
        let bound = if d == 2 { 10 } else { 6 };
        let mut memo: HashMap<LatticeVector, bool> = HashMap::new();
        fn representable(
            x: &LatticeVector,
            c: &RationalCone,
            hb: &[LatticeVector],
            memo: &mut HashMap<LatticeVector, bool>,
        ) -> bool {
            if x.iter().all(Zero::is_zero) {
                return true;
            }
            if let Some(&v) = memo.get(x) {
                return v;
            }
            let v = hb.iter().any(|h| {
                let y = sub(x, h);
                c.contains(&y) && representable(&y, c, hb, memo)
            });
            memo.insert(x.clone(), v);
            v
        }
        for x in box_points(d, bound) {
            if in_cone(&c, &x) {
                prop_assert!(representable(&x, &c, &hb, &mut memo), "{:?} not generated", x);
            }
        }
        for h in &hb {
            for y in &hb {
                prop_assert!(h == y || !c.contains(&sub(h, y)), "{:?} is reducible by {:?}", h, y);
            }
        }
    }

    #[test]
    fn star_subdivision_preserves_support(c in simplicial_cone(3, 0, 4), w in prop::collection::vec(0i64..=3, 3)) {
        prop_assume!(w.iter().any(|&x| x > 0));
        let v = primitive(
            &c.rays()
                .iter()
                .zip(&w)
                .fold(vec![BigInt::zero(); 3], |acc, (r, &k)| add(&acc, &toroidal::lattice::scale(r, &BigInt::from(k)))),
        );
        let fan = Fan::from_cone(c);
        let sub_fan = star_subdivision(&fan, &v).unwrap();
        prop_assert!(supports_equal(&fan, &sub_fan));
        for x in box_points(3, 3) {
            prop_assert_eq!(fan.support_contains(&x), sub_fan.support_contains(&x));
        }
    }

    #[test]
    fn parallelepiped_points_reduce_multiplicity(c in simplicial_cone(3, 0, 4)) {
        let m = minor_multiplicity(c.rays());
        prop_assume!(m > BigInt::one() && m <= BigInt::from(40));
        // Points of the half-open parallelepiped: in the cone, and no ray can be subtracted.
        let reach: i64 = 12;
        let fan = Fan::from_cone(c.clone());
        let mut seen = 0;
        for x in box_points(3, reach) {
            if x.iter().all(Zero::is_zero) || !c.contains(&x) {
                continue;
            }
            if c.rays().iter().any(|r| c.contains(&sub(&x, r))) {
                continue;
            }
            let x = primitive(&x);
            if c.has_ray(&x) {
                continue;
            }
            seen += 1;
            let refined = star_subdivision(&fan, &x).unwrap();
            for cone in refined.cones() {
                prop_assert!(minor_multiplicity(cone.rays()) < m);
            }
            if seen > 8 {
                break;
            }
        }
    }

    #[test]
    fn blowup_charts_pick_minimizing_generator(
        gens in prop::collection::vec(prop::collection::vec(0i64..=4, 3), 1..=4),
    ) {
        let sigma = RationalCone::orthant(3);
        let ideal = MonomialIdeal::new(3, gens.iter().map(|g| big(g)).collect()).unwrap()
            .minimalized(&sigma.dual());
        let charts = blowup_charts(&sigma, &ideal).unwrap();
        let fan = Fan::new(3, charts.iter().map(|(c, _)| c.clone()).collect()).unwrap();
        prop_assert!(supports_equal(&Fan::from_cone(sigma.clone()), &fan));
        let min_at = |p: &LatticeVector| ideal.generators().iter().map(|m| dot(p, m)).min().unwrap();
        for (c, m) in &charts {
            for r in c.rays() {
                prop_assert_eq!(dot(r, m), min_at(r));
            }
            let p = c.interior_point();
            let winners: Vec<&LatticeVector> = ideal.generators().iter().filter(|g| dot(&p, g) == min_at(&p)).collect();
            prop_assert_eq!(winners, vec![m]);
        }
        for (i, (a, ma)) in charts.iter().enumerate() {
            for (b, mb) in charts.iter().skip(i + 1) {
                let meet = a.intersection(b).unwrap();
                if meet.dim() == 2 {
                    let p = meet.interior_point();
                    prop_assert_eq!(dot(&p, ma), dot(&p, mb));
                    prop_assert_eq!(dot(&p, ma), min_at(&p));
                }
            }
        }
    }

    #[test]
    fn stabilizers_divide_and_grow(gens in group_gens(3), c in simplicial_cone(3, 0, 3)) {
        let g = FiniteDiagonalGroup::from_ratios(3, &gens).unwrap();
        prop_assume!(g.is_presentation_faithful());
        let action = DiagonalAction::new(c.clone(), g.clone()).unwrap();
        let faces = c.faces();
        let stabs: Vec<FiniteDiagonalGroup> = faces.iter().map(|t| stabilizer(&action, t).unwrap()).collect();
        for (t, s) in faces.iter().zip(&stabs) {
            prop_assert!((g.order() % s.order()).is_zero());
            for (t2, s2) in faces.iter().zip(&stabs) {
                if t.is_face_of(t2) {
                    prop_assert!(s.generators().iter().all(|e| s2.contains(e)));
                }
            }
        }
    }

    #[test]
    fn resolution_is_smooth_with_same_support(c in simplicial_cone(2, -7, 7)) {
        let fan = Fan::from_cone(c);
        let (out, trace) = resolve(&fan).unwrap();
        for cone in out.cones() {
            prop_assert_eq!(minor_multiplicity(cone.rays()), BigInt::one());
        }
        prop_assert!(supports_equal(&fan, &out));
        prop_assert!(supports_equal(&out, &fan) || fan.cones().len() < out.cones().len());
        let mut worst = trace.steps.first().map(|s| s.multiplicity_before.clone());
        for step in &trace.steps {
            let w = worst.take().unwrap();
            prop_assert!(step.multiplicity_before <= w);
            for a in &step.affected {
                prop_assert!(a.after.iter().all(|m| m < &a.before));
            }
            worst = Some(step.multiplicity_before.clone());
        }
    }

    #[test]
    fn torification_of_random_situses(
        c in prop_oneof![simplicial_cone(1, 1, 1), simplicial_cone(2, 0, 3), simplicial_cone(3, 0, 2)],
        n in 2i64..=12,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = c.ambient_rank() + 1;
        let gen: Vec<(i64, i64)> = (0..d).map(|_| (rng.gen_range(0..n), n)).collect();
        let g = FiniteDiagonalGroup::from_ratios(d, &[gen]).unwrap();
        let s = PreToroidalSitus::new(c.clone(), g).unwrap();
        prop_assume!(s.acts_through_base_torus());
        let ideal = torific_ideal(&s).unwrap();
        for m in ideal.generators() {
            prop_assert_eq!(monomial_character(m, s.group()).unwrap(), s.psi_x());
        }
        let report = torify(&s).unwrap();
        prop_assert!(report.all_toroidal());
        prop_assert!(supports_equal(&Fan::from_cone(s.total_cone()), &report.fan));
        for tau in c.faces() {
            prop_assert!(localization_check(&s, &tau).unwrap());
        }
    }
}
