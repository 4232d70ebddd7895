//! Brute-force Zariski decomposition by subset enumeration.
//!
//! For every negative definite subset `S` of the negative candidates, solve
//! `P.C = 0` on `S` and keep `S` when all coefficients are positive and `P`
//! is nonnegative on every declared curve. At most one subset qualifies.

use num_traits::Signed;

use crate::exactnum::{leading_principal_minors, solve, QMatrix, Rational};
use crate::model::{DivisorClass, SurfaceModel};

/// Outcome of the enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    /// `(P, [(curve, coefficient)])`, curves in increasing order.
    Decomposition(DivisorClass, Vec<(usize, Rational)>),
    NotPseudoeffective,
    /// Two subsets qualified with different answers.
    Ambiguous,
}

fn negative_definite(g: &QMatrix) -> bool {
    leading_principal_minors(g)
        .iter()
        .enumerate()
        .all(|(i, d)| {
            if i % 2 == 0 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        })
}

pub fn brute_force_zariski(d: &DivisorClass, m: &SurfaceModel) -> OracleOutcome {
    let cand = m.negative_candidates();
    let dd: Vec<Rational> = m.curves().iter().map(|c| m.dot(d, &c.class)).collect();
    let mut found: Option<(DivisorClass, Vec<(usize, Rational)>)> = None;
    for mask in 0u32..(1 << cand.len()) {
        let s: Vec<usize> = (0..cand.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| cand[b])
            .collect();
        let g: QMatrix = s
            .iter()
            .map(|&i| {
                s.iter()
                    .map(|&j| m.dot(&m.curve(i).class, &m.curve(j).class))
                    .collect()
            })
            .collect();
        if !s.is_empty() && !negative_definite(&g) {
            continue;
        }
        let rhs: Vec<Rational> = s.iter().map(|&i| dd[i].clone()).collect();
        let a = if s.is_empty() {
            Vec::new()
        } else {
            solve(&g, &rhs).expect("definite")
        };
        if a.iter().any(|x| !x.is_positive()) {
            continue;
        }
        let p = s.iter().zip(&a).fold(d.clone(), |acc, (&i, x)| {
            acc.add_scaled(&-x, &m.curve(i).class)
        });
        if m.curves().iter().any(|c| m.dot(&p, &c.class).is_negative()) {
            continue;
        }
        let terms: Vec<(usize, Rational)> = s.into_iter().zip(a).collect();
        match &found {
            Some((q, t)) if *q != p || *t != terms => return OracleOutcome::Ambiguous,
            _ => found = Some((p, terms)),
        }
    }
    match found {
        Some((p, t)) if !m.square(&p).is_negative() && !m.dot_ample(&p).is_negative() => {
            OracleOutcome::Decomposition(p, t)
        }
        _ => OracleOutcome::NotPseudoeffective,
    }
}
