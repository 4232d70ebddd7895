use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{quad_compare, quad_solve, serde_q, solve, Branch, QuadNumber, Rational};
use crate::model::{DivisorClass, SurfaceModel};
use crate::zariski::{decompose_big, zariski_decompose, ZariskiDecomposition};

const MAX_PROBE_HALVINGS: u32 = 64;
const MAX_SEGMENTS: usize = 4096;

/// `a(t) = c0 + c1 t` for one support curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCoeff {
    #[serde(skip)]
    pub curve: usize,
    #[serde(rename = "curve")]
    pub name: String,
    #[serde(with = "serde_q")]
    pub c0: Rational,
    #[serde(with = "serde_q")]
    pub c1: Rational,
}

impl AffineCoeff {
    pub fn at(&self, t: &Rational) -> Rational {
        &self.c0 + &self.c1 * t
    }
}

/// One Zariski chamber crossed by `D - tC`, with the affine laws valid on it.
///
/// `t_hi` is irrational only on the last segment, where it equals `mu`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberSegment {
    #[serde(with = "serde_q")]
    pub t_lo: Rational,
    pub t_hi: QuadNumber,
    pub support: Vec<String>,
    pub coeffs: Vec<AffineCoeff>,
    #[serde(rename = "P0")]
    pub p0: DivisorClass,
    #[serde(rename = "P1")]
    pub p1: DivisorClass,
}

impl ChamberSegment {
    pub fn support_indices(&self) -> Vec<usize> {
        self.coeffs.iter().map(|c| c.curve).collect()
    }

    pub fn coeff_of(&self, curve: usize) -> Option<&AffineCoeff> {
        self.coeffs.iter().find(|c| c.curve == curve)
    }

    /// `P(t) = P0 + t P1`.
    pub fn p_at(&self, t: &Rational) -> DivisorClass {
        self.p0.add_scaled(t, &self.p1)
    }
}

/// Result of [`trace_path`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTrace {
    pub flag_curve: usize,
    pub nu: Rational,
    pub mu: QuadNumber,
    pub segments: Vec<ChamberSegment>,
    /// Decomposition of `D` itself.
    pub start: ZariskiDecomposition,
}

/// Affine laws of the chamber with support `support` along `D - tC`.
fn chamber_laws(
    m: &SurfaceModel,
    d: &DivisorClass,
    c: usize,
    support: &[usize],
) -> Result<(Vec<AffineCoeff>, DivisorClass, DivisorClass)> {
    let g = m.sub_gram(support);
    let dd: Vec<Rational> = support.iter().map(|&i| m.dot_curve(d, i)).collect();
    let cc: Vec<Rational> = support
        .iter()
        .map(|&i| m.curve_gram()[c][i].clone())
        .collect();
    let singular = || Error::ModelInconsistency("support Gram matrix is singular".into());
    let c0 = solve(&g, &dd).ok_or_else(singular)?;
    let c1: Vec<Rational> = solve(&g, &cc)
        .ok_or_else(singular)?
        .into_iter()
        .map(|x| -x)
        .collect();
    let mut p0 = d.clone();
    let mut p1 = -&m.curve(c).class;
    let mut coeffs = Vec::with_capacity(support.len());
    for (k, &i) in support.iter().enumerate() {
        let class = &m.curve(i).class;
        p0 = p0.add_scaled(&-&c0[k], class);
        p1 = p1.add_scaled(&-&c1[k], class);
        coeffs.push(AffineCoeff {
            curve: i,
            name: m.curve(i).name.clone(),
            c0: c0[k].clone(),
            c1: c1[k].clone(),
        });
    }
    Ok((coeffs, p0, p1))
}

/// Interval `[lo, hi]` on which every `g0 + g1 t >= 0` holds. `None` for
/// an empty interval, `hi = None` for unbounded above.
fn feasible_interval(
    constraints: &[(Rational, Rational)],
) -> Option<(Option<Rational>, Option<Rational>)> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for (g0, g1) in constraints {
        match g1.cmp(&Rational::zero()) {
            Ordering::Equal => {
                if g0.is_negative() {
                    return None;
                }
            }
            Ordering::Greater => {
                let r = -g0 / g1;
                if lo.as_ref().is_none_or(|l| r > *l) {
                    lo = Some(r);
                }
            }
            Ordering::Less => {
                let r = -g0 / g1;
                if hi.as_ref().is_none_or(|h| r < *h) {
                    hi = Some(r);
                }
            }
        }
    }
    Some((lo, hi))
}

/// Smallest root of `P(t)^2` strictly after `t0`.
fn first_square_root_after(
    m: &SurfaceModel,
    p0: &DivisorClass,
    p1: &DivisorClass,
    t0: &Rational,
) -> Result<Option<QuadNumber>> {
    let a = m.square(p1);
    let b = m.dot(p0, p1) * Rational::from_integer(2.into());
    let c = m.square(p0);
    if a.is_zero() && b.is_zero() {
        return Ok(None);
    }
    let start = QuadNumber::rational(t0.clone());
    let mut best: Option<QuadNumber> = None;
    for branch in [Branch::Smaller, Branch::Larger] {
        let r = match quad_solve(&a, &b, &c, branch) {
            Ok(r) => r,
            Err(Error::NoRealRoot(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if quad_compare(&r, &start)? == Ordering::Greater
            && best.as_ref().map_or(Ok(true), |b| {
                quad_compare(&r, b).map(|o| o == Ordering::Less)
            })?
        {
            best = Some(r);
        }
    }
    Ok(best)
}

/// Candidate chamber starting at `t0`, or `None` if the probe support does
/// not extend back to `t0`.
struct Chamber {
    support: Vec<usize>,
    coeffs: Vec<AffineCoeff>,
    p0: DivisorClass,
    p1: DivisorClass,
    hi: Option<Rational>,
}

fn try_chamber(
    m: &SurfaceModel,
    d: &DivisorClass,
    c: usize,
    t0: &Rational,
    probe: &Rational,
) -> Result<Option<Chamber>> {
    let dt = d.add_scaled(&-probe, &m.curve(c).class);
    let z = match zariski_decompose(&dt, m) {
        Ok(z) => z,
        Err(Error::NotPseudoeffective(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !m.square(&z.positive).is_positive() {
        return Ok(None);
    }
    let support = z.support();
    if support.contains(&c) {
        return Err(Error::ModelInconsistency(format!(
            "flag curve {} re-enters the negative part at t = {probe}",
            m.curve(c).name
        )));
    }
    let (coeffs, p0, p1) = chamber_laws(m, d, c, &support)?;
    let mut constraints: Vec<(Rational, Rational)> = coeffs
        .iter()
        .map(|a| (a.c0.clone(), a.c1.clone()))
        .collect();
    let dp0 = m.dots_curves(&p0);
    let dp1 = m.dots_curves(&p1);
    for j in (0..m.curves().len()).filter(|j| !support.contains(j)) {
        constraints.push((dp0[j].clone(), dp1[j].clone()));
    }
    constraints.push((m.dot_ample(&p0), m.dot_ample(&p1)));
    let Some((lo, hi)) = feasible_interval(&constraints) else {
        return Ok(None);
    };
    if lo.is_some_and(|l| l > *t0) || hi.as_ref().is_some_and(|h| h <= t0) {
        return Ok(None);
    }
    Ok(Some(Chamber {
        support,
        coeffs,
        p0,
        p1,
        hi,
    }))
}

/// Traces `D_t = D - tC` from `t = nu` to `t = mu` through Zariski chambers.
///
/// After each wall the chamber on its right is found by probing at
/// `t + 2^-k`, `k = 0, 1, ...`, and accepting the probe's support once its
/// affine laws are certified (nonnegative coefficients, `P` nef against
/// every declared curve) on an interval reaching back to the wall. Such a
/// certificate proves the laws are the Zariski decomposition there, so
/// supports may grow or shrink freely.
///
/// ```
/// use nobody::model::{fix_dp7, DivisorClass};
/// use nobody::okounkov::trace_path;
///
/// let m = fix_dp7();
/// let tr = trace_path(&DivisorClass::from_ints(&[1, 1, 0]), "E_p", &m).unwrap();
/// assert_eq!(tr.segments.len(), 2);
/// assert_eq!(tr.mu.to_string(), "2");
/// ```
pub fn trace_path(d: &DivisorClass, flag_curve: &str, m: &SurfaceModel) -> Result<PathTrace> {
    let c = m.require_curve(flag_curve)?;
    trace_path_idx(d, c, m)
}

pub fn trace_path_idx(d: &DivisorClass, c: usize, m: &SurfaceModel) -> Result<PathTrace> {
    let start = decompose_big(d, m)?;
    let nu = start.coeff_of(c);
    let mut segments: Vec<ChamberSegment> = Vec::new();
    let mut t0 = nu.clone();
    loop {
        if segments.len() > MAX_SEGMENTS {
            return Err(Error::ModelInconsistency(
                "path crosses too many chambers".into(),
            ));
        }
        let mut step = Rational::one();
        let mut chamber = None;
        for _ in 0..MAX_PROBE_HALVINGS {
            let probe = &t0 + &step;
            if let Some(ch) = try_chamber(m, d, c, &t0, &probe)? {
                chamber = Some(ch);
                break;
            }
            step /= Rational::from_integer(2.into());
        }
        let Some(ch) = chamber else {
            return Err(Error::ModelInconsistency(format!(
                "probes after t = {t0} never settle on a chamber"
            )));
        };
        let root = first_square_root_after(m, &ch.p0, &ch.p1, &t0)?;
        let (t_hi, done) = match (root, &ch.hi) {
            (Some(r), Some(h)) => {
                if quad_compare(&r, &QuadNumber::rational(h.clone()))? != Ordering::Greater {
                    (r, true)
                } else {
                    (QuadNumber::rational(h.clone()), false)
                }
            }
            (Some(r), None) => (r, true),
            (None, Some(h)) => (QuadNumber::rational(h.clone()), false),
            (None, None) => {
                return Err(Error::ModelInconsistency(
                    "path stays big forever; the ample witness cannot be ample".into(),
                ))
            }
        };
        let same_as_last = segments
            .last()
            .is_some_and(|s: &ChamberSegment| s.support_indices() == ch.support);
        if same_as_last {
            segments.last_mut().expect("nonempty").t_hi = t_hi.clone();
        } else {
            segments.push(ChamberSegment {
                t_lo: t0.clone(),
                t_hi: t_hi.clone(),
                support: ch
                    .support
                    .iter()
                    .map(|&i| m.curve(i).name.clone())
                    .collect(),
                coeffs: ch.coeffs,
                p0: ch.p0,
                p1: ch.p1,
            });
        }
        if done {
            return Ok(PathTrace {
                flag_curve: c,
                nu,
                mu: t_hi,
                segments,
                start,
            });
        }
        t0 = t_hi
            .as_rational()
            .expect("interior walls are rational")
            .clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, qf};
    use crate::model::{fix_dp7, fix_p2, fix_tower7};

    #[test]
    fn dp7_two_chambers() {
        let m = fix_dp7();
        let tr = trace_path(&DivisorClass::from_ints(&[1, 1, 0]), "E_p", &m).unwrap();
        assert_eq!(tr.nu, q(0));
        assert_eq!(tr.mu, QuadNumber::rational(q(2)));
        assert_eq!(tr.segments.len(), 2);
        assert!(tr.segments[0].support.is_empty());
        assert_eq!(tr.segments[0].t_hi, QuadNumber::rational(q(1)));
        let s = &tr.segments[1];
        assert_eq!(s.support, vec!["F1", "F2"]);
        for a in &s.coeffs {
            assert_eq!((a.c0.clone(), a.c1.clone()), (q(-1), q(1)));
        }
        // P_t = (2 - t)(f1 + f2 - e)
        assert_eq!(
            s.p_at(&qf(3, 2)),
            DivisorClass(vec![qf(1, 2), qf(1, 2), qf(-1, 2)])
        );
    }

    #[test]
    fn tower_entry_and_mu() {
        let m = fix_tower7();
        let tr = trace_path(&DivisorClass::basis(8, 0), "E_7", &m).unwrap();
        assert_eq!(tr.segments.len(), 2);
        assert_eq!(tr.segments[0].t_lo, q(0));
        assert_eq!(tr.segments[0].t_hi, QuadNumber::rational(qf(21, 8)));
        for (i, a) in tr.segments[0].coeffs.iter().enumerate() {
            assert_eq!(a.name, format!("E_{}_7", i + 1));
            assert_eq!((a.c0.clone(), a.c1.clone()), (q(0), qf(i as i64 + 1, 7)));
        }
        assert!(tr.segments[1].support.contains(&"C_7".to_string()));
        assert_eq!(tr.mu, QuadNumber::rational(qf(8, 3)));
        assert!(tr.segments[1].p_at(&qf(8, 3)).is_zero());
    }

    #[test]
    fn plane_single_segment() {
        let m = fix_p2();
        let tr = trace_path(&DivisorClass::from_ints(&[1]), "L", &m).unwrap();
        assert_eq!(tr.segments.len(), 1);
        assert_eq!(tr.mu, QuadNumber::rational(q(1)));
    }

    #[test]
    fn nu_for_non_nef_classes() {
        let m = fix_dp7();
        // D = f1 + f2 + E_p has D.E_p = -1, so N_0 = E_p.
        let d = DivisorClass::from_ints(&[1, 1, 1]);
        let tr = trace_path(&d, "E_p", &m).unwrap();
        assert_eq!(tr.nu, q(1));
        assert_eq!(tr.segments[0].t_lo, q(1));
        assert_eq!(tr.mu, QuadNumber::rational(q(3)));
    }

    #[test]
    fn rejects_non_big() {
        let m = fix_dp7();
        assert!(matches!(
            trace_path(&DivisorClass::from_ints(&[1, 0, 0]), "E_p", &m),
            Err(Error::Domain(_))
        ));
        assert!(trace_path(&DivisorClass::from_ints(&[1, 1, 0]), "G", &m).is_err());
    }

    #[test]
    fn irrational_mu() {
        // P_t^2 = 2(1 - t)^2 - t^2 vanishes first at 2 - sqrt 2.
        let l = crate::model::IntersectionLattice::new(vec![vec![2, 0], vec![0, -1]]).unwrap();
        let c = crate::model::CurveRecord::new("C", DivisorClass::from_ints(&[1, -1]));
        let m = SurfaceModel::validated(l, vec![c], DivisorClass::from_ints(&[1, 0])).unwrap();
        let tr = trace_path(&DivisorClass::from_ints(&[1, 0]), "C", &m).unwrap();
        assert!(!tr.mu.is_rational());
        assert!((tr.mu.to_f64() - (2.0 - 2f64.sqrt())).abs() < 1e-12);
    }
}
