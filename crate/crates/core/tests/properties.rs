use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use nobody::birational::{blow_up, nodal_tower, tower_min_k, tower_reference_values, PointSpec};
use nobody::exactnum::{qf, quad_normalize, QuadNumber, Rational};
use nobody::invariants::rho_d;
use nobody::model::{intersect, p2_nodal_cubic, DivisorClass, FlagSpec, IntersectionLattice};
use nobody::okounkov::{polygon, trace_path};
use nobody::suite::{random_big_class, random_model, rng, ModelShape};
use nobody::zariski::{decompose_big, null_of};
use nobody::Error;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| qf(n, d))
}

fn quad(d: Rational) -> impl Strategy<Value = QuadNumber> {
    (rational(), rational()).prop_map(move |(a, b)| quad_normalize(a, b, d.clone()).unwrap())
}

fn class(rank: usize) -> impl Strategy<Value = DivisorClass> {
    proptest::collection::vec(rational(), rank).prop_map(DivisorClass)
}

proptest! {
    #[test]
    fn rational_field_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * a.recip()).is_one());
        }
    }

    #[test]
    fn quad_ring_axioms(x in quad(qf(13, 9)), y in quad(qf(13, 9)), z in quad(qf(13, 9))) {
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert!(x.sub(&x).unwrap().signum().is_eq());
        prop_assert_eq!(x.add(&y).unwrap().sub(&y).unwrap(), x);
    }

    #[test]
    fn intersection_is_symmetric_and_bilinear(
        x in class(4), y in class(4), z in class(4), s in rational()
    ) {
        let l = IntersectionLattice::odd_unimodular(4);
        let xy = intersect(&x, &y, &l).unwrap();
        prop_assert_eq!(&xy, &intersect(&y, &x, &l).unwrap());
        let lin = intersect(&x.add_scaled(&s, &z), &y, &l).unwrap();
        prop_assert_eq!(lin, xy + &s * intersect(&z, &y, &l).unwrap());
    }

    #[test]
    fn rho_d_bounds(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let m = random_model(&mut r, ModelShape::default());
        let d = random_big_class(&mut r, &m);
        let rho = rho_d(&d, &m).unwrap();
        let z = decompose_big(&d, &m).unwrap();
        let null = null_of(&z, &m);
        prop_assert!(rho >= 1 && rho <= m.rank());
        prop_assert_eq!(rho == m.rank(), null.is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn general_blowup_keeps_polygons(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let m = random_model(&mut r, ModelShape::default());
        let d = random_big_class(&mut r, &m);
        let up = blow_up(&m, &PointSpec::general("Pt")).unwrap();
        let d_up = d.extended(1);
        for c in m.curves() {
            let flag = FlagSpec::generic(c.name.clone());
            let below = polygon(&d, &flag, &m).unwrap();
            let above = polygon(&d_up, &flag, &up).unwrap();
            prop_assert_eq!(below.vertex_points(), above.vertex_points());
            prop_assert_eq!(rho_d(&d, &m).unwrap(), rho_d(&d_up, &up).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tower_identities_hold(k in 1usize..=12) {
        let t = nodal_tower(&p2_nodal_cubic(), "C", k).unwrap();
        prop_assert!(t.identities().is_empty(), "{:?}", t.identities());
    }

    #[test]
    fn tower_entry_and_end_match_closed_forms(k in 7usize..=14, scale in 1i64..4) {
        let p2 = p2_nodal_cubic();
        let d = DivisorClass::from_ints(&[scale]);
        prop_assume!(k >= tower_min_k(&d, "C", &p2).unwrap());
        // C^2 = 9 makes the printed denominator vanish at k = 8.
        let r = match tower_reference_values(&d, "C", k, &p2) {
            Err(Error::DegenerateTower(_)) => {
                prop_assert_eq!(k, 8);
                return Ok(());
            }
            other => other.unwrap(),
        };
        let t = nodal_tower(&p2, "C", k).unwrap();
        let tr = trace_path(&t.pullback(&d), &t.flag.curve, &t.tower_model).unwrap();
        prop_assert!(tr.segments.len() >= 2);
        prop_assert_eq!(&tr.segments[1].t_lo, &r.t_entry_bound);
        prop_assert_eq!(tr.mu, QuadNumber::rational(r.mu_if_orthogonal_exact.clone()));
        for (i, slope) in r.rel_law_slopes.iter().enumerate() {
            let name = format!("E_{}_{}", i + 1, k);
            let idx = t.tower_model.require_curve(&name).unwrap();
            let a = tr.segments[0].coeff_of(idx);
            prop_assert!(a.is_some(), "{} missing from the first chamber", name);
            prop_assert!(a.unwrap().c0.is_zero());
            prop_assert_eq!(&a.unwrap().c1, slope);
        }
        let pmu = r.pmu_closed_form_exact(&r.mu_if_orthogonal_exact, &t, &d).unwrap();
        prop_assert!(!t.tower_model.square(&pmu).is_positive());
    }

    #[test]
    fn cubic_towers_have_two_interior_vertices(k in 7usize..=10) {
        let t = nodal_tower(&p2_nodal_cubic(), "C", k).unwrap();
        let p = polygon(&DivisorClass::basis(k + 1, 0), &t.flag, &t.tower_model).unwrap();
        prop_assert!(p.census.interior >= 2, "k = {}: {:?}", k, p.census);
    }
}
