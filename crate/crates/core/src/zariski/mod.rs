//! Zariski decomposition against the declared curves of a model.
//!
//! The solver is Fujita's support-growing iteration: start from the curves
//! that `D` meets negatively, make `P` orthogonal to the current support by
//! solving the support Gram system, add every curve still met negatively and
//! repeat. Supports only ever grow.
//!
//! Correctness is relative to the model: `P` is certified nef against the
//! declared curves only.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{serde_q, solve, Rational};
use crate::model::{DivisorClass, SurfaceModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegativeTerm {
    #[serde(skip)]
    pub curve: usize,
    #[serde(rename = "curve")]
    pub name: String,
    #[serde(with = "serde_q")]
    pub coeff: Rational,
}

/// `D = P + N` with `N = sum coeff_i C_i`, coefficients strictly positive and
/// listed in curve order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZariskiDecomposition {
    #[serde(rename = "P")]
    pub positive: DivisorClass,
    #[serde(rename = "N")]
    pub negative: Vec<NegativeTerm>,
}

impl ZariskiDecomposition {
    pub fn coeff_of(&self, curve: usize) -> Rational {
        self.negative
            .iter()
            .find(|t| t.curve == curve)
            .map_or_else(Rational::zero, |t| t.coeff.clone())
    }

    /// Curve indices of `supp N`.
    pub fn support(&self) -> Vec<usize> {
        self.negative.iter().map(|t| t.curve).collect()
    }

    pub fn negative_class(&self, m: &SurfaceModel) -> DivisorClass {
        let terms: Vec<(usize, Rational)> = self
            .negative
            .iter()
            .map(|t| (t.curve, t.coeff.clone()))
            .collect();
        m.combination(&terms)
    }

    pub fn is_nef(&self) -> bool {
        self.negative.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decompositions always serialize")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PositivityStatus {
    pub pseudoeffective: bool,
    pub big: bool,
    pub nef_in_model: bool,
}

/// `Null(P_D)` and `Neg(D)` as sorted curve indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportSets {
    pub null: Vec<usize>,
    pub neg: Vec<usize>,
}

impl SupportSets {
    pub fn null_names(&self, m: &SurfaceModel) -> Vec<String> {
        self.null.iter().map(|&i| m.curve(i).name.clone()).collect()
    }

    pub fn neg_names(&self, m: &SurfaceModel) -> Vec<String> {
        self.neg.iter().map(|&i| m.curve(i).name.clone()).collect()
    }
}

enum Stuck {
    NotNegativeDefinite(Vec<usize>),
    NegativeCoefficient(usize, Rational),
}

/// Solves `G_S a = (D.C_j)_{j in S}` for the support `S`.
pub(crate) fn solve_on_support(
    m: &SurfaceModel,
    dd: &[Rational],
    support: &[usize],
) -> Option<Vec<Rational>> {
    let rhs: Vec<Rational> = support.iter().map(|&i| dd[i].clone()).collect();
    solve(&m.sub_gram(support), &rhs)
}

/// Fujita iteration restricted to `allowed`. Returns the support and its
/// coefficients.
fn fujita(
    m: &SurfaceModel,
    dd: &[Rational],
    allowed: &[usize],
) -> std::result::Result<(Vec<usize>, Vec<Rational>), Stuck> {
    let g = m.curve_gram();
    let mut support: Vec<usize> = allowed
        .iter()
        .copied()
        .filter(|&i| dd[i].is_negative())
        .collect();
    loop {
        if support.is_empty() {
            return Ok((support, Vec::new()));
        }
        if !m.is_negative_definite_set(&support) {
            return Err(Stuck::NotNegativeDefinite(support));
        }
        let a = solve_on_support(m, dd, &support).expect("negative definite systems are regular");
        if let Some(k) = a.iter().position(|x| x.is_negative()) {
            return Err(Stuck::NegativeCoefficient(support[k], a[k].clone()));
        }
        let added: Vec<usize> = allowed
            .iter()
            .copied()
            .filter(|j| !support.contains(j))
            .filter(|&j| {
                let pc = support
                    .iter()
                    .zip(&a)
                    .fold(dd[j].clone(), |acc, (&i, ai)| acc - ai * &g[i][j]);
                pc.is_negative()
            })
            .collect();
        if added.is_empty() {
            return Ok((support, a));
        }
        support.extend(added);
        support.sort_unstable();
    }
}

fn assemble(
    m: &SurfaceModel,
    d: &DivisorClass,
    support: &[usize],
    a: &[Rational],
) -> ZariskiDecomposition {
    let negative: Vec<NegativeTerm> = support
        .iter()
        .zip(a)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&i, c)| NegativeTerm {
            curve: i,
            name: m.curve(i).name.clone(),
            coeff: c.clone(),
        })
        .collect();
    let positive = negative.iter().fold(d.clone(), |acc, t| {
        acc.add_scaled(&-&t.coeff, &m.curve(t.curve).class)
    });
    ZariskiDecomposition { positive, negative }
}

fn names(m: &SurfaceModel, idx: &[usize]) -> String {
    idx.iter()
        .map(|&i| m.curve(i).name.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Zariski decomposition of `D` relative to the declared curves.
///
/// Fails with [`Error::NotPseudoeffective`] when the support stops being
/// negative definite, a coefficient turns negative, or the final positive
/// part has `P^2 < 0` or `P.A < 0`.
///
/// ```
/// use nobody::model::{fix_dp7, DivisorClass};
/// use nobody::exactnum::qf;
/// use nobody::zariski::zariski_decompose;
///
/// let m = fix_dp7();
/// let d = DivisorClass(vec![qf(1, 1), qf(1, 1), qf(-3, 2)]);
/// let z = zariski_decompose(&d, &m).unwrap();
/// assert_eq!(z.negative.len(), 2);
/// assert_eq!(z.negative[0].coeff, qf(1, 2));
/// ```
pub fn zariski_decompose(d: &DivisorClass, m: &SurfaceModel) -> Result<ZariskiDecomposition> {
    if d.rank() != m.rank() {
        return Err(Error::Domain(format!(
            "class of rank {} on a model of rank {}",
            d.rank(),
            m.rank()
        )));
    }
    let dd = m.dots_curves(d);
    let all: Vec<usize> = (0..m.curves().len()).collect();
    let (support, a) = fujita(m, &dd, &all).map_err(|s| match s {
        Stuck::NotNegativeDefinite(s) => Error::NotPseudoeffective(format!(
            "support {{{}}} is not negative definite",
            names(m, &s)
        )),
        Stuck::NegativeCoefficient(i, c) => {
            Error::NotPseudoeffective(format!("coefficient of {} would be {c}", m.curve(i).name))
        }
    })?;
    let z = assemble(m, d, &support, &a);
    let p2 = m.square(&z.positive);
    if p2.is_negative() {
        return Err(Error::NotPseudoeffective(format!("P^2 = {p2}")));
    }
    let pa = m.dot_ample(&z.positive);
    if pa.is_negative() {
        return Err(Error::NotPseudoeffective(format!("P.A = {pa}")));
    }
    Ok(z)
}

/// Never fails; an impossible decomposition reads as "not pseudoeffective".
pub fn positivity(d: &DivisorClass, m: &SurfaceModel) -> PositivityStatus {
    match zariski_decompose(d, m) {
        Ok(z) => PositivityStatus {
            pseudoeffective: true,
            big: m.square(&z.positive).is_positive() && m.dot_ample(&z.positive).is_positive(),
            nef_in_model: z.is_nef(),
        },
        Err(_) => PositivityStatus::default(),
    }
}

/// Decomposes `D` and insists that it is big.
pub fn decompose_big(d: &DivisorClass, m: &SurfaceModel) -> Result<ZariskiDecomposition> {
    let z = zariski_decompose(d, m).map_err(|e| match e {
        Error::NotPseudoeffective(s) => Error::Domain(format!("divisor is not big: {s}")),
        other => other,
    })?;
    let p2 = m.square(&z.positive);
    let pa = m.dot_ample(&z.positive);
    if !p2.is_positive() || !pa.is_positive() {
        return Err(Error::Domain(format!(
            "divisor is not big: P^2 = {p2}, P.A = {pa}"
        )));
    }
    Ok(z)
}

/// `Null(P)` from an existing decomposition.
pub fn null_of(z: &ZariskiDecomposition, m: &SurfaceModel) -> Vec<usize> {
    m.dots_curves(&z.positive)
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(i, _)| i)
        .collect()
}

pub fn support_sets(d: &DivisorClass, m: &SurfaceModel) -> Result<SupportSets> {
    let z = zariski_decompose(d, m)?;
    Ok(SupportSets {
        null: null_of(&z, m),
        neg: z.support(),
    })
}

/// Decomposition relative to a negative definite configuration: the unique
/// effective `N` supported on `config` with `(D - N).E >= 0` on `config` and
/// `(D - N).E = 0` where `N` has positive coefficient.
pub fn relative_zariski(
    d: &DivisorClass,
    config: &[usize],
    m: &SurfaceModel,
) -> Result<ZariskiDecomposition> {
    let mut config = config.to_vec();
    config.sort_unstable();
    config.dedup();
    if let Some(&bad) = config.iter().find(|&&i| i >= m.curves().len()) {
        return Err(Error::Domain(format!(
            "configuration names unknown curve index {bad}"
        )));
    }
    if !m.is_negative_definite_set(&config) {
        return Err(Error::Domain(format!(
            "configuration {{{}}} is not negative definite",
            names(m, &config)
        )));
    }
    let dd = m.dots_curves(d);
    let (support, a) = fujita(m, &dd, &config).map_err(|_| {
        Error::ModelInconsistency(
            "relative decomposition on a negative definite configuration did not converge".into(),
        )
    })?;
    Ok(assemble(m, d, &support, &a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, qf};
    use crate::model::{fix_dp7, fix_p2, fix_tower7};

    fn cls(xs: &[Rational]) -> DivisorClass {
        DivisorClass(xs.to_vec())
    }

    #[test]
    fn dp7_half_rulings() {
        let m = fix_dp7();
        let z = zariski_decompose(&cls(&[q(1), q(1), qf(-3, 2)]), &m).unwrap();
        let got: Vec<(&str, Rational)> = z
            .negative
            .iter()
            .map(|t| (t.name.as_str(), t.coeff.clone()))
            .collect();
        assert_eq!(got, vec![("F1", qf(1, 2)), ("F2", qf(1, 2))]);
        assert_eq!(z.positive, cls(&[qf(1, 2), qf(1, 2), qf(-1, 2)]));
        assert_eq!(
            z.to_json().replace(char::is_whitespace, ""),
            r#"{"P":["1/2","1/2","-1/2"],"N":[{"curve":"F1","coeff":"1/2"},{"curve":"F2","coeff":"1/2"}]}"#
        );
    }

    #[test]
    fn nef_classes_decompose_trivially() {
        let m = fix_dp7();
        let d = DivisorClass::from_ints(&[1, 1, 0]);
        let z = zariski_decompose(&d, &m).unwrap();
        assert!(z.is_nef());
        assert_eq!(z.positive, d);
    }

    #[test]
    fn positivity_flags() {
        let m = fix_dp7();
        let st = positivity(&DivisorClass::from_ints(&[1, 1, -2]), &m);
        assert_eq!(
            st,
            PositivityStatus {
                pseudoeffective: true,
                big: false,
                nef_in_model: false
            }
        );
        let p2 = fix_p2();
        let h = DivisorClass::from_ints(&[1]);
        assert_eq!(
            positivity(&h, &p2),
            PositivityStatus {
                pseudoeffective: true,
                big: true,
                nef_in_model: true
            }
        );
        assert_eq!(positivity(&-&h, &p2), PositivityStatus::default());
        assert!(matches!(
            zariski_decompose(&-&h, &p2),
            Err(Error::NotPseudoeffective(_))
        ));
        assert!(decompose_big(&DivisorClass::from_ints(&[1, 1, -2]), &m).is_err());
    }

    #[test]
    fn supports() {
        let m = fix_dp7();
        let s = support_sets(&DivisorClass::from_ints(&[1, 1, 0]), &m).unwrap();
        assert_eq!(s.null_names(&m), vec!["E_p"]);
        assert!(s.neg.is_empty());

        let t = fix_tower7();
        let s = support_sets(&DivisorClass::basis(8, 0), &t).unwrap();
        assert_eq!(
            s.null_names(&t),
            vec!["E_1_7", "E_2_7", "E_3_7", "E_4_7", "E_5_7", "E_6_7", "E_7"]
        );
        assert!(s.neg.is_empty());

        let s = support_sets(&DivisorClass::from_ints(&[1]), &fix_p2()).unwrap();
        assert_eq!(s, SupportSets::default());
    }

    #[test]
    fn tower_relative_law() {
        let m = fix_tower7();
        let config: Vec<usize> = (0..6).collect();
        let e7 = m.curve_index("E_7").unwrap();
        for t in [qf(1, 3), q(1), qf(5, 2)] {
            let d = DivisorClass::basis(8, 0).add_scaled(&-&t, &m.curve(e7).class);
            let z = relative_zariski(&d, &config, &m).unwrap();
            for i in 0..6 {
                assert_eq!(z.coeff_of(i), &t * qf(i as i64 + 1, 7));
            }
            assert_eq!(m.square(&z.positive), q(1) - &t * &t / q(7));
        }
        let h = DivisorClass::basis(8, 0);
        assert!(relative_zariski(&h, &config, &m).unwrap().is_nef());
    }

    #[test]
    fn relative_rejects_non_definite_config() {
        let m = fix_dp7();
        let d = DivisorClass::from_ints(&[1, 1, 0]);
        assert!(matches!(
            relative_zariski(&d, &[0, 1], &m),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn positive_part_is_idempotent() {
        let m = fix_dp7();
        let z = zariski_decompose(&DivisorClass::from_ints(&[3, 2, -4]), &m).unwrap();
        assert!(zariski_decompose(&z.positive, &m).unwrap().is_nef());
    }
}
