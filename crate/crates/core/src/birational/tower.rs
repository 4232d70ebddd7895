//! The tower of blowups following one branch of a node.
//!
//! Starting from a curve `C` with a node at `p`, blow up `p` (multiplicity
//! two), then repeatedly the point where the strict transform of `C` meets
//! the newest exceptional curve. After `k` steps, with `e_i` the total
//! transform of the `i`-th exceptional curve, the strict transforms are
//! `E_{i,k} = e_i - e_{i+1}` for `i < k`, `E_k = e_k` and
//! `C_k = C - 2 e_1 - e_2 - ... - e_k`, and `E = sum i E_{i,k} = e_1 + ... + e_k`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{blow_up, PointSpec};
use crate::error::{Error, Result};
use crate::exactnum::{q, serde_q, Rational};
use crate::model::{CurveRecord, DivisorClass, FlagSpec, SurfaceModel};
use crate::zariski::decompose_big;

#[derive(Clone, Debug)]
pub struct TowerData {
    pub k: usize,
    pub base_model: SurfaceModel,
    pub tower_model: SurfaceModel,
    /// Name of the curve in the base model.
    pub base_curve: String,
    /// Name of `C_k` in the tower.
    pub c_name: String,
    /// `E_{1,k}, ..., E_{k-1,k}, E_k`.
    pub e_names: Vec<String>,
    /// `E = sum i E_{i,k}`.
    pub e_class: DivisorClass,
    /// `(E_k, p_k)` with `p_k = C_k . E_k`; for `k = 1` this is one of the
    /// two branch points.
    pub flag: FlagSpec,
    /// `(E_k, p_k')` with `p_k' = E_k . E_{k-1,k}`, for `k >= 2`.
    pub variant_flag: Option<FlagSpec>,
}

impl TowerData {
    /// Pullback of a base class.
    pub fn pullback(&self, d: &DivisorClass) -> DivisorClass {
        d.extended(self.k)
    }

    fn class_of(&self, name: &str) -> &DivisorClass {
        let m = &self.tower_model;
        &m.curve(m.curve_index(name).expect("tower curve")).class
    }

    /// Violated lattice identities of the tower; empty when all hold.
    pub fn identities(&self) -> Vec<String> {
        let m = &self.tower_model;
        let k = self.k;
        let mut bad = Vec::new();
        let mut check = |ok: bool, what: String| {
            if !ok {
                bad.push(what);
            }
        };
        check(
            m.square(&self.e_class) == q(-(k as i64)),
            format!("E^2 = {}", m.square(&self.e_class)),
        );
        let ck = self.class_of(&self.c_name);
        let ek = self.class_of(&self.e_names[k - 1]);
        let expected = if k == 1 { q(2) } else { q(1) };
        check(
            m.dot(ck, ek) == expected,
            format!("C_k.E_k = {}", m.dot(ck, ek)),
        );
        if k >= 2 {
            let e1 = self.class_of(&self.e_names[0]);
            check(
                m.dot(ck, e1) == q(1),
                format!("C_k.E_(1,k) = {}", m.dot(ck, e1)),
            );
        }
        for i in 2..k {
            let ei = self.class_of(&self.e_names[i - 1]);
            check(
                m.dot(ck, ei).is_zero(),
                format!("C_k.E_({i},k) = {}", m.dot(ck, ei)),
            );
        }
        let base = &self.base_model;
        let c_pull = self.pullback(
            &base
                .curve(base.curve_index(&self.base_curve).expect("base curve"))
                .class,
        );
        let decomposed = self
            .e_names
            .iter()
            .enumerate()
            .fold(ck.clone(), |acc, (i, n)| {
                acc.add_scaled(&q(i as i64 + 2), self.class_of(n))
            });
        check(
            decomposed == c_pull,
            "pullback of C differs from C_k + sum (i+1) E_(i,k)".into(),
        );
        let first_total = DivisorClass::basis(m.rank(), base.rank());
        check(
            *ck == &(&c_pull - &self.e_class) - &first_total,
            "C_k differs from C - E - E_1".into(),
        );
        bad
    }
}

/// Builds the `k`-step tower over the node of `curve`.
///
/// ```
/// use nobody::birational::nodal_tower;
/// use nobody::model::{fix_tower7, p2_nodal_cubic};
///
/// let t = nodal_tower(&p2_nodal_cubic(), "C", 7).unwrap();
/// assert_eq!(t.tower_model.curves(), fix_tower7().curves());
/// assert!(t.identities().is_empty());
/// ```
pub fn nodal_tower(m: &SurfaceModel, curve: &str, k: usize) -> Result<TowerData> {
    let c = m.require_curve(curve)?;
    if k == 0 {
        return Err(Error::Domain("tower height must be at least 1".into()));
    }
    let tmp = |i: usize| format!("#E{i}");
    let mut cur = blow_up(
        m,
        &PointSpec {
            basis_name: Some("e1".into()),
            ..PointSpec::on(tmp(1), &[(curve, 2)])
        },
    )?;
    for i in 2..=k {
        let prev = tmp(i - 1);
        cur = blow_up(
            &cur,
            &PointSpec {
                basis_name: Some(format!("e{i}")),
                ..PointSpec::on(tmp(i), &[(curve, 1), (prev.as_str(), 1)])
            },
        )?;
    }

    let c_name = format!("{curve}_{k}");
    let e_names: Vec<String> = (1..=k)
        .map(|i| {
            if i < k {
                format!("E_{i}_{k}")
            } else {
                format!("E_{k}")
            }
        })
        .collect();
    for n in e_names.iter().chain([&c_name]) {
        if m.curve_index(n).is_some() {
            return Err(Error::Validation(format!(
                "tower curve name {n} is already declared"
            )));
        }
    }
    let mut curves: Vec<CurveRecord> = (0..m.curves().len())
        .filter(|&i| i != c)
        .map(|i| cur.curve(i).clone())
        .collect();
    for (i, n) in e_names.iter().enumerate() {
        let class = cur
            .curve(cur.curve_index(&tmp(i + 1)).expect("built above"))
            .class
            .clone();
        curves.push(CurveRecord::new(n.clone(), class));
    }
    curves.push(CurveRecord::new(c_name.clone(), cur.curve(c).class.clone()));
    let mut tower = SurfaceModel::new(cur.lattice().clone(), curves, cur.ample().clone())?;
    if let Some(b) = cur.basis_names() {
        tower = tower.with_basis_names(b.to_vec())?;
    }

    let n = tower.rank();
    let e_class = (0..k).fold(DivisorClass::zero(n), |acc, i| {
        acc.add_scaled(&q(1), &DivisorClass::basis(n, m.rank() + i))
    });
    let ek = e_names[k - 1].clone();
    let flag = FlagSpec::at(ek.clone(), &[(c_name.as_str(), 1)]);
    let variant_flag = (k >= 2).then(|| FlagSpec::at(ek, &[(e_names[k - 2].as_str(), 1)]));
    Ok(TowerData {
        k,
        base_model: m.clone(),
        tower_model: tower,
        base_curve: curve.to_string(),
        c_name,
        e_names,
        e_class,
        flag,
        variant_flag,
    })
}

/// Smallest `k >= 1` with `k (D.C)^2 < (k+1)^2 D^2`, the condition under
/// which some `t > k D.C / (k+1)` has `D^2 - t^2/k > 0`.
pub fn tower_min_k(d: &DivisorClass, curve: &str, m: &SurfaceModel) -> Result<usize> {
    let c = m.require_curve(curve)?;
    let z = decompose_big(d, m)?;
    if !z.is_nef() {
        return Err(Error::Domain("tower_min_k needs a nef class".into()));
    }
    let dc = m.dot_curve(d, c);
    if !dc.is_positive() {
        return Err(Error::Domain(format!("D.{curve} = {dc} is not positive")));
    }
    let d2 = m.square(d);
    let dc2 = &dc * &dc;
    let mut k = 1usize;
    while q(k as i64) * &dc2 >= q(((k + 1) * (k + 1)) as i64) * &d2 {
        k += 1;
    }
    Ok(k)
}

/// Closed forms attached to the tower of height `k` over `(D, C)`.
///
/// `t_entry_bound`, the relative law `a_i(t) = i t / k`, the printed class
/// `P_mu = D - x C - y E` with
/// `x = ((k+1) mu - k D.C) / (k^2 - k(C^2 - 1))`,
/// `y = (mu C^2 - k D.C) / (k^2 - k(C^2 - 1))`, the printed
/// `mu_if_orthogonal = k D.C / C^2` and `pmu_sq_det = (D^2 C^2 - (D.C)^2) / C^2`.
///
/// The printed `x, y` do not make `P_mu` orthogonal to `C_k`: with
/// `C_k.E = k + 1` the support system gives the denominator
/// `(k+1)^2 - k C^2` and `mu_if_orthogonal = (k+1) D.C / C^2`. Both variants
/// are exposed; the `_exact` ones agree with traced paths. At their
/// respective `mu` both yield `P_mu = D - (D.C / C^2) C`, so `pmu_sq_det` is
/// common to both.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerReference {
    pub k: usize,
    #[serde(with = "serde_q")]
    pub d_square: Rational,
    #[serde(with = "serde_q")]
    pub d_dot_c: Rational,
    #[serde(with = "serde_q")]
    pub c_square: Rational,
    #[serde(with = "serde_q")]
    pub t_entry_bound: Rational,
    /// `i / k` for `i = 1..k-1`: slopes of `a_i(t)` on `E_{i,k}`.
    #[serde(with = "serde_q::vec")]
    pub rel_law_slopes: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub mu_if_orthogonal: Rational,
    #[serde(with = "serde_q")]
    pub mu_if_orthogonal_exact: Rational,
    #[serde(with = "serde_q")]
    pub pmu_sq_det: Rational,
}

impl TowerReference {
    fn printed_denominator(&self) -> Rational {
        let k = q(self.k as i64);
        &k * &k - &k * (&self.c_square - q(1))
    }

    fn exact_denominator(&self) -> Rational {
        let k = q(self.k as i64);
        (&k + q(1)) * (&k + q(1)) - &k * &self.c_square
    }

    /// Printed `(x, y)` at `mu`.
    pub fn pmu_coefficients(&self, mu: &Rational) -> (Rational, Rational) {
        let k = q(self.k as i64);
        let den = self.printed_denominator();
        let x = ((&k + q(1)) * mu - &k * &self.d_dot_c) / &den;
        let y = (mu * &self.c_square - &k * &self.d_dot_c) / &den;
        (x, y)
    }

    /// `(x, y)` solving `P.C_k = 0` and `D - tE_k - (D - xC - yE)` supported
    /// on `E_{i,k}` (`i < k`) and `C_k` at `t = mu`.
    pub fn pmu_coefficients_exact(&self, mu: &Rational) -> Result<(Rational, Rational)> {
        let den = self.exact_denominator();
        if den.is_zero() {
            return Err(Error::DegenerateTower(format!(
                "(k+1)^2 - k C^2 vanishes for k = {}",
                self.k
            )));
        }
        let k1 = q(self.k as i64 + 1);
        let x = (&k1 * mu - q(self.k as i64) * &self.d_dot_c) / &den;
        let y = (&k1 * &self.d_dot_c - &self.c_square * mu) / &den;
        Ok((x, y))
    }

    fn assemble(tower: &TowerData, d: &DivisorClass, (x, y): (Rational, Rational)) -> DivisorClass {
        let base = &tower.base_model;
        let c = tower.pullback(
            &base
                .curve(base.curve_index(&tower.base_curve).expect("base curve"))
                .class,
        );
        tower
            .pullback(d)
            .add_scaled(&-x, &c)
            .add_scaled(&-y, &tower.e_class)
    }

    /// Printed `P_mu` in tower coordinates.
    pub fn pmu_closed_form(
        &self,
        mu: &Rational,
        tower: &TowerData,
        d: &DivisorClass,
    ) -> DivisorClass {
        Self::assemble(tower, d, self.pmu_coefficients(mu))
    }

    pub fn pmu_closed_form_exact(
        &self,
        mu: &Rational,
        tower: &TowerData,
        d: &DivisorClass,
    ) -> Result<DivisorClass> {
        Ok(Self::assemble(tower, d, self.pmu_coefficients_exact(mu)?))
    }
}

pub fn tower_reference_values(
    d: &DivisorClass,
    curve: &str,
    k: usize,
    m: &SurfaceModel,
) -> Result<TowerReference> {
    let c = m.require_curve(curve)?;
    if k == 0 {
        return Err(Error::Domain("tower height must be at least 1".into()));
    }
    let d_square = m.square(d);
    let d_dot_c = m.dot_curve(d, c);
    let c_square = m.self_intersection(c).clone();
    if c_square.is_zero() {
        return Err(Error::DegenerateTower(format!("{curve}^2 = 0")));
    }
    let kq = q(k as i64);
    let printed = &kq * &kq - &kq * (&c_square - q(1));
    if printed.is_zero() {
        return Err(Error::DegenerateTower(format!(
            "k^2 - k(C^2 - 1) vanishes for k = {k}"
        )));
    }
    Ok(TowerReference {
        k,
        t_entry_bound: &kq * &d_dot_c / (&kq + q(1)),
        rel_law_slopes: (1..k).map(|i| q(i as i64) / &kq).collect(),
        mu_if_orthogonal: &kq * &d_dot_c / &c_square,
        mu_if_orthogonal_exact: (&kq + q(1)) * &d_dot_c / &c_square,
        pmu_sq_det: (&d_square * &c_square - &d_dot_c * &d_dot_c) / &c_square,
        d_square,
        d_dot_c,
        c_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{qf, QuadNumber};
    use crate::model::{fix_tower7, p2_nodal_cubic, quadric_nodal, validate_model};
    use crate::okounkov::{polygon, trace_path};

    #[test]
    fn seven_steps_give_the_fixture() {
        let t = nodal_tower(&p2_nodal_cubic(), "C", 7).unwrap();
        let f = fix_tower7();
        assert_eq!(t.tower_model.lattice(), f.lattice());
        assert_eq!(t.tower_model.curves(), f.curves());
        assert_eq!(t.tower_model.basis_names(), f.basis_names());
        assert!(validate_model(&t.tower_model).is_valid());
        assert_eq!(t.flag, FlagSpec::at("E_7", &[("C_7", 1)]));
        assert_eq!(t.variant_flag, Some(FlagSpec::at("E_7", &[("E_6_7", 1)])));
    }

    #[test]
    fn one_step() {
        let t = nodal_tower(&p2_nodal_cubic(), "C", 1).unwrap();
        let m = &t.tower_model;
        assert_eq!(
            m.curve(m.curve_index("C_1").unwrap()).class,
            DivisorClass::from_ints(&[3, -2])
        );
        assert_eq!(
            m.curve(m.curve_index("E_1").unwrap()).class,
            DivisorClass::from_ints(&[0, 1])
        );
        assert_eq!(t.e_class, DivisorClass::from_ints(&[0, 1]));
        assert!(t.variant_flag.is_none());
        assert!(t.identities().is_empty());
    }

    #[test]
    fn identities_up_to_ten() {
        for k in 1..=10 {
            let t = nodal_tower(&p2_nodal_cubic(), "C", k).unwrap();
            assert!(t.identities().is_empty(), "k = {k}: {:?}", t.identities());
            let t = nodal_tower(&quadric_nodal(), "C", k).unwrap();
            assert!(t.identities().is_empty(), "k = {k}: {:?}", t.identities());
        }
    }

    #[test]
    fn pullback_of_cubic_for_k3() {
        let t = nodal_tower(&p2_nodal_cubic(), "C", 3).unwrap();
        let m = &t.tower_model;
        let cls = |n: &str| m.curve(m.curve_index(n).unwrap()).class.clone();
        let sum = cls("C_3")
            .add_scaled(&q(2), &cls("E_1_3"))
            .add_scaled(&q(3), &cls("E_2_3"))
            .add_scaled(&q(4), &cls("E_3"));
        assert_eq!(sum, DivisorClass::from_ints(&[3, 0, 0, 0]));
    }

    #[test]
    fn min_k() {
        let p2 = p2_nodal_cubic();
        assert_eq!(
            tower_min_k(&DivisorClass::from_ints(&[1]), "C", &p2).unwrap(),
            7
        );
        let l = crate::model::IntersectionLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let c22 = crate::model::CurveRecord::new("C", DivisorClass::from_ints(&[2, 2]));
        let quad = SurfaceModel::new(l, vec![c22], DivisorClass::from_ints(&[1, 1])).unwrap();
        assert_eq!(
            tower_min_k(&DivisorClass::from_ints(&[1, 1]), "C", &quad).unwrap(),
            6
        );
        assert_eq!(
            tower_min_k(&DivisorClass::from_ints(&[1, 1]), "C", &quadric_nodal()).unwrap(),
            6
        );
        let small = crate::model::CurveRecord::new("C", DivisorClass::from_ints(&[1]));
        let lat = crate::model::IntersectionLattice::new(vec![vec![1]]).unwrap();
        let line = SurfaceModel::new(lat, vec![small], DivisorClass::from_ints(&[1])).unwrap();
        assert_eq!(
            tower_min_k(&DivisorClass::from_ints(&[1]), "C", &line).unwrap(),
            1
        );
    }

    #[test]
    fn reference_values_on_the_cubic() {
        let p2 = p2_nodal_cubic();
        let h = DivisorClass::from_ints(&[1]);
        let r = tower_reference_values(&h, "C", 7, &p2).unwrap();
        assert_eq!(r.t_entry_bound, qf(21, 8));
        assert_eq!(r.pmu_sq_det, q(0));
        assert_eq!(r.rel_law_slopes[5], qf(6, 7));
        assert_eq!(r.mu_if_orthogonal, qf(7, 3));
        assert_eq!(r.mu_if_orthogonal_exact, qf(8, 3));

        let t = nodal_tower(&p2, "C", 7).unwrap();
        let tr = trace_path(&t.pullback(&h), "E_7", &t.tower_model).unwrap();
        assert_eq!(tr.segments[1].t_lo, r.t_entry_bound);
        assert_eq!(
            tr.mu,
            QuadNumber::rational(r.mu_if_orthogonal_exact.clone())
        );
        let exact = r.pmu_closed_form_exact(&qf(8, 3), &t, &h).unwrap();
        assert!(exact.is_zero());
        // The printed coefficients miss orthogonality to C_7.
        let printed = r.pmu_closed_form(&qf(8, 3), &t, &h);
        let c7 = t.tower_model.curve_index("C_7").unwrap();
        assert_ne!(t.tower_model.dot_curve(&printed, c7), q(0));
    }

    #[test]
    fn quadric_determinant_is_negative() {
        let m = quadric_nodal();
        let r = tower_reference_values(&DivisorClass::from_ints(&[1, 1]), "C", 6, &m).unwrap();
        assert_eq!(r.pmu_sq_det, qf(-2, 3));
        assert_eq!((r.c_square.clone(), r.d_dot_c.clone()), (q(6), q(4)));
    }

    #[test]
    fn degenerate_denominator() {
        // k^2 - k(C^2 - 1) = 0 for C^2 = k + 1: C = 3h has C^2 = 9, k = 8.
        let r = tower_reference_values(&DivisorClass::from_ints(&[1]), "C", 8, &p2_nodal_cubic());
        assert!(matches!(r, Err(Error::DegenerateTower(_))));
    }

    #[test]
    fn tower_polygon_has_two_interior_vertices() {
        let p2 = p2_nodal_cubic();
        let t = nodal_tower(&p2, "C", 7).unwrap();
        let p = polygon(&DivisorClass::basis(8, 0), &t.flag, &t.tower_model).unwrap();
        assert_eq!(p.census.interior, 2);
    }
}
