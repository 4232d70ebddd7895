//! Reference models shipped with the crate.

use super::{CurveRecord, DivisorClass, IntersectionLattice, SurfaceModel};
use crate::exactnum::q;

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn build(
    gram: Vec<Vec<i64>>,
    curves: Vec<(&str, Vec<i64>)>,
    ample: DivisorClass,
    basis: &[&str],
) -> SurfaceModel {
    let curves = curves
        .into_iter()
        .map(|(n, c)| CurveRecord::new(n, DivisorClass::from_ints(&c)))
        .collect();
    SurfaceModel::validated(IntersectionLattice::new(gram).unwrap(), curves, ample)
        .and_then(|m| m.with_basis_names(names(basis)))
        .expect("shipped fixture is valid")
}

/// The projective plane with a line `L`.
pub fn fix_p2() -> SurfaceModel {
    build(
        vec![vec![1]],
        vec![("L", vec![1])],
        DivisorClass::from_ints(&[1]),
        &["h"],
    )
}

/// `P^1 x P^1` blown up at a point, basis `(f1, f2, e)`: the exceptional curve
/// `E_p` and the strict transforms `F1`, `F2` of the two rulings through `p`.
pub fn fix_dp7() -> SurfaceModel {
    build(
        vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, -1]],
        vec![
            ("E_p", vec![0, 0, 1]),
            ("F1", vec![1, 0, -1]),
            ("F2", vec![0, 1, -1]),
        ],
        DivisorClass::from_ints(&[2, 2, -1]),
        &["f1", "f2", "e"],
    )
}

/// Seven-step tower over a nodal plane cubic, basis `(h, e1, ..., e7)` of
/// total transforms.
pub fn fix_tower7() -> SurfaceModel {
    let mut curves: Vec<(String, Vec<i64>)> = (1..=6)
        .map(|i| {
            let mut v = vec![0; 8];
            v[i] = 1;
            v[i + 1] = -1;
            (format!("E_{i}_7"), v)
        })
        .collect();
    let mut e7 = vec![0; 8];
    e7[7] = 1;
    curves.push(("E_7".into(), e7));
    curves.push(("C_7".into(), vec![3, -2, -1, -1, -1, -1, -1, -1]));
    let gram = IntersectionLattice::odd_unimodular(8).gram().to_vec();
    let basis = ["h", "e1", "e2", "e3", "e4", "e5", "e6", "e7"];
    build(
        gram,
        curves
            .iter()
            .map(|(n, c)| (n.as_str(), c.clone()))
            .collect(),
        DivisorClass::from_ints(&[15, -8, -7, -6, -5, -4, -3, -2]),
        &basis,
    )
}

/// The plane with a single declared nodal cubic `C = 3h`; the base of the
/// seven-step tower.
pub fn p2_nodal_cubic() -> SurfaceModel {
    build(
        vec![vec![1]],
        vec![("C", vec![3])],
        DivisorClass::from_ints(&[1]),
        &["h"],
    )
}

/// `P^1 x P^1` with a declared nodal curve `C` of class `(1, 3)`.
pub fn quadric_nodal() -> SurfaceModel {
    build(
        vec![vec![0, 1], vec![1, 0]],
        vec![("C", vec![1, 3])],
        DivisorClass(vec![q(1), q(1)]),
        &["f1", "f2"],
    )
}
