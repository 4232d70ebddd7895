//! Vertex-count invariants of a big class and the bound checks built on them.
//!
//! `rho_D = rho - #Null(P_D)` is the Picard number relative to `D`. For a
//! negative definite configuration `N` of declared curves, `k` counts its
//! members outside `Null(P_D)` and `mc_D` is the largest number of such
//! members inside one connected component of its dual graph. `mv(D)` and
//! `mv^Null(D)` maximize `mv_D(N)` over configurations containing all of
//! `Null(P_D)`, respectively all of it but one curve.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{qf, QuadNumber, Rational};
use crate::model::{DivisorClass, FlagSpec, SurfaceModel};
use crate::okounkov::OkounkovPolygon;
use crate::zariski::{decompose_big, null_of, ZariskiDecomposition};

/// Which `Null` containment a configuration satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Contains all of `Null(P_D)`.
    Full,
    /// Contains all of `Null(P_D)` but exactly one curve.
    AllButOne,
}

/// A negative definite set of declared curves with its dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeConfiguration {
    pub curves: Vec<usize>,
    /// Pairs `(i, j)`, `i < j`, with `C_i . C_j > 0`.
    pub dual_graph: Vec<(usize, usize)>,
    pub null_members: Vec<usize>,
}

impl NegativeConfiguration {
    /// `null` is `Null(P_D)`; members of `curves` found there are recorded.
    pub fn new(curves: &[usize], null: &[usize], m: &SurfaceModel) -> Result<Self> {
        let curves: Vec<usize> = curves
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if !m.is_negative_definite_set(&curves) {
            let names: Vec<&str> = curves.iter().map(|&i| m.curve(i).name.as_str()).collect();
            return Err(Error::Domain(format!(
                "configuration {{{}}} is not negative definite",
                names.join(", ")
            )));
        }
        let mut dual_graph = Vec::new();
        for (a, &i) in curves.iter().enumerate() {
            for &j in &curves[a + 1..] {
                if m.curve_gram()[i][j].is_positive() {
                    dual_graph.push((i, j));
                }
            }
        }
        let null_members = curves
            .iter()
            .copied()
            .filter(|i| null.contains(i))
            .collect();
        Ok(NegativeConfiguration {
            curves,
            dual_graph,
            null_members,
        })
    }

    pub fn names(&self, m: &SurfaceModel) -> Vec<String> {
        self.curves
            .iter()
            .map(|&i| m.curve(i).name.clone())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigStats {
    pub k: usize,
    pub mc: usize,
    pub mv: usize,
}

/// Data of a big class shared by every invariant: its decomposition,
/// `Null(P_D)` and `rho_D`.
#[derive(Clone, Debug)]
pub struct BigClassData {
    pub decomposition: ZariskiDecomposition,
    pub null: Vec<usize>,
    pub rho: usize,
    pub rho_d: usize,
}

impl BigClassData {
    pub fn new(d: &DivisorClass, m: &SurfaceModel) -> Result<Self> {
        let decomposition = decompose_big(d, m)?;
        let null = null_of(&decomposition, m);
        if null.len() >= m.rank() {
            return Err(Error::ModelInconsistency(format!(
                "{} curves orthogonal to a big class in rank {}",
                null.len(),
                m.rank()
            )));
        }
        Ok(BigClassData {
            rho: m.rank(),
            rho_d: m.rank() - null.len(),
            decomposition,
            null,
        })
    }
}

pub fn rho_d(d: &DivisorClass, m: &SurfaceModel) -> Result<usize> {
    Ok(BigClassData::new(d, m)?.rho_d)
}

fn stats_unchecked(
    curves: &[usize],
    null: &[usize],
    rho_d: usize,
    mode: Mode,
    m: &SurfaceModel,
) -> ConfigStats {
    let k = curves.iter().filter(|i| !null.contains(i)).count();
    let mc = m
        .components(curves)
        .iter()
        .map(|comp| comp.iter().filter(|i| !null.contains(i)).count())
        .max()
        .unwrap_or(0);
    let extra = match mode {
        Mode::Full if k + 1 < rho_d => 4,
        Mode::Full => 3,
        Mode::AllButOne if k < rho_d => 3,
        Mode::AllButOne => 2,
    };
    ConfigStats {
        k,
        mc,
        mv: k + mc + extra,
    }
}

/// `(k, mc_D, mv_D)` of a configuration.
///
/// ```
/// use nobody::model::{fix_dp7, DivisorClass};
/// use nobody::invariants::{config_stats, BigClassData, Mode, NegativeConfiguration};
///
/// let m = fix_dp7();
/// let d = DivisorClass::from_ints(&[1, 1, 0]);
/// let data = BigClassData::new(&d, &m).unwrap();
/// let cfg = NegativeConfiguration::new(&[0], &data.null, &m).unwrap();
/// let s = config_stats(&cfg, &d, &m, Mode::Full).unwrap();
/// assert_eq!((s.k, s.mc, s.mv), (0, 0, 4));
/// ```
pub fn config_stats(
    cfg: &NegativeConfiguration,
    d: &DivisorClass,
    m: &SurfaceModel,
    mode: Mode,
) -> Result<ConfigStats> {
    let data = BigClassData::new(d, m)?;
    let inside = data.null.iter().filter(|i| cfg.curves.contains(i)).count();
    let ok = match mode {
        Mode::Full => inside == data.null.len(),
        Mode::AllButOne => !data.null.is_empty() && inside + 1 == data.null.len(),
    };
    if !ok {
        return Err(Error::Domain(format!(
            "configuration holds {inside} of the {} curves of Null(P_D), which mode {mode:?} does not allow",
            data.null.len()
        )));
    }
    Ok(stats_unchecked(
        &cfg.curves,
        &data.null,
        data.rho_d,
        mode,
        m,
    ))
}

/// Best `mv_D` over negative definite extensions of `base` by curves from
/// `pool`, never exceeding `rho - 1` curves. Supersets of a non negative
/// definite set are never negative definite, which prunes the search.
fn best_extension(
    base: &[usize],
    pool: &[usize],
    null: &[usize],
    rho_d: usize,
    mode: Mode,
    m: &SurfaceModel,
) -> Option<usize> {
    fn go(
        cur: &mut Vec<usize>,
        from: usize,
        pool: &[usize],
        ctx: (&[usize], usize, Mode, &SurfaceModel),
        best: &mut Option<usize>,
    ) {
        let (null, rho_d, mode, m) = ctx;
        let v = stats_unchecked(cur, null, rho_d, mode, m).mv;
        *best = Some(best.map_or(v, |b| b.max(v)));
        if cur.len() + 1 > m.rank() - 1 {
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i]);
            if m.is_negative_definite_set(cur) {
                go(cur, i + 1, pool, ctx, best);
            }
            cur.pop();
        }
    }
    if !m.is_negative_definite_set(base) || base.len() > m.rank() - 1 {
        return None;
    }
    let mut best = None;
    let mut cur = base.to_vec();
    go(&mut cur, 0, pool, (null, rho_d, mode, m), &mut best);
    best
}

fn extension_pool(m: &SurfaceModel, null: &[usize]) -> Vec<usize> {
    m.negative_candidates()
        .into_iter()
        .filter(|i| !null.contains(i))
        .collect()
}

/// `mv(D)`, computed from `P_D` for classes that are not nef.
pub fn mv(d: &DivisorClass, m: &SurfaceModel) -> Result<usize> {
    mv_of(&BigClassData::new(d, m)?, m)
}

pub fn mv_of(data: &BigClassData, m: &SurfaceModel) -> Result<usize> {
    best_extension(
        &data.null,
        &extension_pool(m, &data.null),
        &data.null,
        data.rho_d,
        Mode::Full,
        m,
    )
    .ok_or_else(|| Error::ModelInconsistency("Null(P_D) is not negative definite".into()))
}

/// `mv^Null(D)`, or `None` when `Null(P_D)` is empty.
pub fn mv_null(d: &DivisorClass, m: &SurfaceModel) -> Result<Option<usize>> {
    Ok(mv_null_of(&BigClassData::new(d, m)?, m))
}

pub fn mv_null_of(data: &BigClassData, m: &SurfaceModel) -> Option<usize> {
    let pool = extension_pool(m, &data.null);
    (0..data.null.len())
        .filter_map(|skip| {
            let base: Vec<usize> = data
                .null
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &c)| c)
                .collect();
            best_extension(&base, &pool, &data.null, data.rho_d, Mode::AllButOne, m)
        })
        .max()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Verdict {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Vertex-count bounds checked on one polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub rho: usize,
    pub rho_d: usize,
    pub vertex_total: usize,
    pub bound_a: usize,
    pub mv_value: Option<usize>,
    pub mv_null_value: Option<usize>,
    pub verdicts: Vec<Verdict>,
}

impl BoundReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> Vec<&Verdict> {
        self.verdicts.iter().filter(|v| !v.passed).collect()
    }
}

/// Verdicts: (i) total at most `2 rho_D + 2`; (ii) at most `mv(D)` when
/// `P_D.C > 0`; (iii) at most `mv^Null(D)` when `C` lies in `Null(P_D)`;
/// (iv) area `P_D^2 / 2`; (v) `alpha` nondecreasing.
pub fn bound_report(
    d: &DivisorClass,
    flag: &FlagSpec,
    p: &OkounkovPolygon,
    m: &SurfaceModel,
) -> Result<BoundReport> {
    let data = BigClassData::new(d, m)?;
    let c = m.require_curve(&flag.curve)?;
    let total = p.census.total;
    let bound_a = 2 * data.rho_d + 2;
    let mv_value = mv_of(&data, m)?;
    let mv_null_value = mv_null_of(&data, m);
    let mut verdicts = vec![Verdict::new(
        "i: total <= 2 rho_D + 2",
        total <= bound_a,
        format!("{total} <= {bound_a}"),
    )];
    let pc = m.dot_curve(&data.decomposition.positive, c);
    if pc.is_positive() {
        verdicts.push(Verdict::new(
            "ii: total <= mv(D)",
            total <= mv_value,
            format!("{total} <= {mv_value}"),
        ));
    }
    if pc.is_zero() {
        let bound = mv_null_value.ok_or_else(|| {
            Error::ModelInconsistency("flag curve orthogonal to P_D but Null(P_D) is empty".into())
        })?;
        verdicts.push(Verdict::new(
            "iii: total <= mv_null(D)",
            total <= bound,
            format!("{total} <= {bound}"),
        ));
    }
    let half: Rational = m.square(&data.decomposition.positive) * qf(1, 2);
    verdicts.push(Verdict::new(
        "iv: area = P_D^2 / 2",
        p.area == QuadNumber::rational(half.clone()),
        format!("{} = {half}", p.area),
    ));
    let decreasing: Vec<String> = p
        .alpha
        .iter()
        .filter(|x| x.slope.is_negative())
        .map(|x| x.start.to_string())
        .collect();
    verdicts.push(Verdict::new(
        "v: alpha nondecreasing",
        decreasing.is_empty(),
        if decreasing.is_empty() {
            "all slopes >= 0".into()
        } else {
            format!("negative slope after t = {}", decreasing.join(", "))
        },
    ));
    Ok(BoundReport {
        rho: data.rho,
        rho_d: data.rho_d,
        vertex_total: total,
        bound_a,
        mv_value: Some(mv_value),
        mv_null_value,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fix_dp7, fix_p2, fix_tower7};
    use crate::okounkov::polygon;

    #[test]
    fn relative_picard_numbers() {
        assert_eq!(
            rho_d(&DivisorClass::from_ints(&[1, 1, 0]), &fix_dp7()).unwrap(),
            2
        );
        assert_eq!(rho_d(&DivisorClass::basis(8, 0), &fix_tower7()).unwrap(), 1);
        assert_eq!(rho_d(&DivisorClass::from_ints(&[1]), &fix_p2()).unwrap(), 1);
    }

    #[test]
    fn stats_examples() {
        let m = fix_dp7();
        let d2 = DivisorClass::from_ints(&[2, 1, 0]);
        let data = BigClassData::new(&d2, &m).unwrap();
        let cfg = NegativeConfiguration::new(&[1, 2], &data.null, &m).unwrap();
        assert!(cfg.dual_graph.is_empty());
        let s = config_stats(&cfg, &d2, &m, Mode::AllButOne).unwrap();
        assert_eq!((s.k, s.mc, s.mv), (2, 1, 5));
        assert!(matches!(
            config_stats(&cfg, &d2, &m, Mode::Full),
            Err(Error::Domain(_))
        ));

        let p2 = fix_p2();
        let h = DivisorClass::from_ints(&[1]);
        let cfg = NegativeConfiguration::new(&[], &[], &p2).unwrap();
        let s = config_stats(&cfg, &h, &p2, Mode::Full).unwrap();
        assert_eq!((s.k, s.mc, s.mv), (0, 0, 3));

        assert!(NegativeConfiguration::new(&[0, 1], &[], &m).is_err());
    }

    #[test]
    fn mv_examples() {
        let m = fix_dp7();
        let d = DivisorClass::from_ints(&[1, 1, 0]);
        let d2 = DivisorClass::from_ints(&[2, 1, 0]);
        assert_eq!(mv(&d, &m).unwrap(), 4);
        assert_eq!(mv_null(&d, &m).unwrap(), Some(5));
        assert_eq!(mv_null(&d2, &m).unwrap(), Some(5));
        let h = DivisorClass::from_ints(&[1]);
        assert_eq!(mv(&h, &fix_p2()).unwrap(), 3);
        assert_eq!(mv_null(&h, &fix_p2()).unwrap(), None);
        assert_eq!(mv(&DivisorClass::basis(8, 0), &fix_tower7()).unwrap(), 3);
    }

    #[test]
    fn mv_of_non_nef_uses_positive_part() {
        let m = fix_dp7();
        let d = DivisorClass::from_ints(&[1, 1, 1]);
        assert_eq!(
            mv(&d, &m).unwrap(),
            mv(&DivisorClass::from_ints(&[1, 1, 0]), &m).unwrap()
        );
    }

    #[test]
    fn reports() {
        let t = fix_tower7();
        let h = DivisorClass::basis(8, 0);
        let flag = FlagSpec::at("E_7", &[("C_7", 1)]);
        let p = polygon(&h, &flag, &t).unwrap();
        let r = bound_report(&h, &flag, &p, &t).unwrap();
        assert_eq!((r.vertex_total, r.bound_a), (4, 4));
        assert!(r.all_passed(), "{:?}", r.failures());

        let m = fix_dp7();
        let d = DivisorClass::from_ints(&[1, 1, 0]);
        let flag = FlagSpec::generic("E_p");
        let p = polygon(&d, &flag, &m).unwrap();
        let r = bound_report(&d, &flag, &p, &m).unwrap();
        assert_eq!(
            (r.vertex_total, r.bound_a, r.mv_null_value),
            (3, 6, Some(5))
        );
        assert!(r.verdicts.iter().any(|v| v.name.starts_with("iii")));
        assert!(r.all_passed());

        let p2 = fix_p2();
        let h = DivisorClass::from_ints(&[1]);
        let flag = FlagSpec::generic("L");
        let p = polygon(&h, &flag, &p2).unwrap();
        let r = bound_report(&h, &flag, &p, &p2).unwrap();
        assert_eq!((r.vertex_total, r.bound_a, r.mv_value), (3, 4, Some(3)));
        assert!(r.verdicts.iter().any(|v| v.name.starts_with("ii:")));
        assert!(r.all_passed());
    }
}
