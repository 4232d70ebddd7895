use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::SurfaceModel;
use crate::error::{Error, Result};
use crate::exactnum::{charpoly, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    GramNotSymmetric {
        row: usize,
        col: usize,
    },
    GramSingular,
    Signature {
        positive: usize,
        negative: usize,
    },
    AmpleSquareNotPositive(Rational),
    AmpleNotPositiveOnCurve {
        curve: String,
        value: Rational,
    },
    DuplicateCurveName(String),
    NonIntegerSelfIntersection {
        curve: String,
        value: Rational,
    },
    NegativeIntersection {
        first: String,
        second: String,
        value: Rational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::GramNotSymmetric { row, col } => {
                write!(f, "gram symmetry: entry ({row},{col}) differs from ({col},{row})")
            }
            Violation::GramSingular => write!(f, "gram nonsingularity: determinant is zero"),
            Violation::Signature { positive, negative } => write!(
                f,
                "signature (1, rho-1): found {positive} positive and {negative} negative eigenvalues"
            ),
            Violation::AmpleSquareNotPositive(v) => {
                write!(f, "ample positivity: ample^2 = {v} is not positive")
            }
            Violation::AmpleNotPositiveOnCurve { curve, value } => {
                write!(f, "ample positivity: ample.{curve} = {value} is not positive")
            }
            Violation::DuplicateCurveName(n) => write!(f, "unique names: curve {n:?} declared twice"),
            Violation::NonIntegerSelfIntersection { curve, value } => {
                write!(f, "integral self-intersection: {curve}^2 = {value}")
            }
            Violation::NegativeIntersection { first, second, value } => write!(
                f,
                "distinct irreducible curves meet non-negatively: {first}.{second} = {value}"
            ),
        }
    }
}

/// Outcome of [`validate_model`]; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            return Ok(());
        }
        let msgs: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        Err(Error::Validation(msgs.join("; ")))
    }
}

/// Checks every model invariant and lists all violations found.
///
/// The signature is read off the exact characteristic polynomial: a real
/// symmetric matrix has only real eigenvalues, so Descartes' rule of signs
/// counts positive and negative eigenvalues exactly.
pub fn validate_model(m: &SurfaceModel) -> ValidationReport {
    let mut violations = Vec::new();
    let gram = m.lattice().gram();
    let n = gram.len();

    let mut symmetric = true;
    for i in 0..n {
        for j in i + 1..n {
            if gram[i][j] != gram[j][i] {
                violations.push(Violation::GramNotSymmetric { row: i, col: j });
                symmetric = false;
            }
        }
    }
    if symmetric {
        let cp = charpoly(m.lattice().gram_q());
        if cp[0].is_zero() {
            violations.push(Violation::GramSingular);
        } else {
            let positive = sign_changes(cp.iter().cloned());
            let negative =
                sign_changes(
                    cp.iter()
                        .enumerate()
                        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }),
                );
            if positive != 1 || negative != n - 1 {
                violations.push(Violation::Signature { positive, negative });
            }
        }
    }

    let a2 = m.square(m.ample());
    if !a2.is_positive() {
        violations.push(Violation::AmpleSquareNotPositive(a2));
    }
    let mut names = BTreeSet::new();
    for (i, c) in m.curves().iter().enumerate() {
        if !names.insert(c.name.as_str()) {
            violations.push(Violation::DuplicateCurveName(c.name.clone()));
        }
        let v = m.dot_ample(&c.class);
        if !v.is_positive() {
            violations.push(Violation::AmpleNotPositiveOnCurve {
                curve: c.name.clone(),
                value: v,
            });
        }
        let s = m.self_intersection(i);
        if !s.denom().is_one() {
            violations.push(Violation::NonIntegerSelfIntersection {
                curve: c.name.clone(),
                value: s.clone(),
            });
        }
        for j in i + 1..m.curves().len() {
            let v = &m.curve_gram()[i][j];
            if v.is_negative() {
                violations.push(Violation::NegativeIntersection {
                    first: c.name.clone(),
                    second: m.curve(j).name.clone(),
                    value: v.clone(),
                });
            }
        }
    }
    ValidationReport { violations }
}

fn sign_changes(coeffs: impl Iterator<Item = Rational>) -> usize {
    let signs: Vec<bool> = coeffs
        .filter(|c| !c.is_zero())
        .map(|c| c.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fix_dp7, fix_p2, fix_tower7, DivisorClass, IntersectionLattice};

    #[test]
    fn fixtures_are_valid() {
        assert!(validate_model(&fix_dp7()).is_valid());
        assert!(validate_model(&fix_p2()).is_valid());
        assert!(validate_model(&fix_tower7()).is_valid());
    }

    #[test]
    fn degenerate_ample_witness() {
        let m = fix_dp7();
        let bad = SurfaceModel::new(
            m.lattice().clone(),
            m.curves().to_vec(),
            DivisorClass::from_ints(&[1, 0, 0]),
        )
        .unwrap();
        let report = validate_model(&bad);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::AmpleSquareNotPositive(x) if x.is_zero())));
    }

    #[test]
    fn wrong_signature_and_symmetry() {
        let l = IntersectionLattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let m = SurfaceModel::new(l, vec![], DivisorClass::from_ints(&[1, 0])).unwrap();
        assert_eq!(
            validate_model(&m).violations,
            vec![Violation::Signature {
                positive: 2,
                negative: 0
            }]
        );
        let l = IntersectionLattice::new(vec![vec![1, 2], vec![0, -1]]).unwrap();
        let m = SurfaceModel::new(l, vec![], DivisorClass::from_ints(&[1, 0])).unwrap();
        assert!(matches!(
            validate_model(&m).violations[0],
            Violation::GramNotSymmetric { row: 0, col: 1 }
        ));
        let l = IntersectionLattice::new(vec![vec![1, 1], vec![1, 1]]).unwrap();
        let m = SurfaceModel::new(l, vec![], DivisorClass::from_ints(&[1, 0])).unwrap();
        assert!(validate_model(&m)
            .violations
            .contains(&Violation::GramSingular));
    }

    #[test]
    fn duplicate_names_and_negative_intersections() {
        let m = fix_dp7();
        let mut curves = m.curves().to_vec();
        curves.push(curves[0].clone());
        let ep = curves[0].class.clone();
        curves.push(crate::model::CurveRecord::new(
            "X",
            &DivisorClass::zero(3) - &ep,
        ));
        let bad = SurfaceModel::new(m.lattice().clone(), curves, m.ample().clone()).unwrap();
        let report = validate_model(&bad);
        assert!(report
            .violations
            .contains(&Violation::DuplicateCurveName("E_p".into())));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NegativeIntersection { .. })));
        assert!(report.into_result().is_err());
    }
}
