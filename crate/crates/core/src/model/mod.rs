//! Surface data model: an intersection lattice of signature `(1, rho - 1)`,
//! a list of declared irreducible curves, a reference ample class and flag
//! incidence data.
//!
//! The declared curve list is the whole universe of irreducible curves the
//! engine knows about. Every answer (nefness, Zariski decompositions,
//! polygons) is correct for the underlying surface exactly when that list
//! contains every curve that can occur in a negative part along the studied
//! paths. This completeness is an axiom of the model and cannot be checked
//! from lattice data.

mod fixtures;
mod io;
mod lang;
mod validate;

pub use fixtures::{fix_dp7, fix_p2, fix_tower7, p2_nodal_cubic, quadric_nodal};
pub use io::{ModelFile, ReferencePolygon};
pub use lang::{parse_divisor, parse_flag};
pub use validate::{validate_model, ValidationReport, Violation};

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{leading_principal_minors, q, serde_q, QMatrix, Rational};

/// Integer symmetric bilinear form on `Z^rho`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice {
    gram: Vec<Vec<i64>>,
    gram_q: QMatrix,
}

impl IntersectionLattice {
    /// Checks only that the matrix is square and nonempty; the remaining
    /// invariants are reported by [`validate_model`].
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::Validation(
                "gram matrix is empty (rank must be positive)".into(),
            ));
        }
        if let Some(i) = gram.iter().position(|r| r.len() != n) {
            return Err(Error::Validation(format!(
                "gram matrix is not square: row {i} has {} entries, expected {n}",
                gram[i].len()
            )));
        }
        let gram_q = gram
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        Ok(IntersectionLattice { gram, gram_q })
    }

    /// `diag(1, -1, ..., -1)`: the plane blown up at `rank - 1` points.
    pub fn odd_unimodular(rank: usize) -> Self {
        let gram = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match (i == j, i) {
                        (false, _) => 0,
                        (true, 0) => 1,
                        (true, _) => -1,
                    })
                    .collect()
            })
            .collect();
        Self::new(gram).expect("square by construction")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn gram_q(&self) -> &QMatrix {
        &self.gram_q
    }

    /// Lattice of one more rank with a new `-1` basis vector orthogonal to
    /// everything else.
    pub fn extended_by_exceptional(&self) -> Self {
        let n = self.rank();
        let mut gram: Vec<Vec<i64>> = self
            .gram
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(0);
                r
            })
            .collect();
        let mut last = vec![0; n + 1];
        last[n] = -1;
        gram.push(last);
        Self::new(gram).expect("square by construction")
    }

    /// `G x`, the linear form `y -> x . y` in coordinates.
    pub fn dual(&self, x: &DivisorClass) -> Vec<Rational> {
        self.gram_q
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&x.0)
                    .filter(|(g, _)| !g.is_zero())
                    .map(|(g, xi)| g * xi)
                    .sum()
            })
            .collect()
    }
}

/// A class in `N^1(S)_Q`, as coordinates in the lattice basis.
///
/// Serializes as an array of `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(#[serde(with = "serde_q::vec")] pub Vec<Rational>);

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![Rational::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = q(1);
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        DivisorClass(xs.iter().map(|&x| q(x)).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        DivisorClass(self.0.iter().map(|x| x * s).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: &Rational, other: &Self) -> Self {
        DivisorClass(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| x + s * y)
                .collect(),
        )
    }

    /// Zero-extension into a lattice with `extra` more basis vectors.
    pub fn extended(&self, extra: usize) -> Self {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat_with(Rational::zero).take(extra));
        DivisorClass(v)
    }

    /// Pairing against a precomputed dual vector (see [`IntersectionLattice::dual`]).
    pub fn pair(&self, dual: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(dual)
            .filter(|(x, _)| !x.is_zero())
            .map(|(x, g)| x * g)
            .sum()
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(x, y)| x + y).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(x, y)| x - y).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|x| -x).collect())
    }
}

/// `x^T G y`.
pub fn intersect(
    x: &DivisorClass,
    y: &DivisorClass,
    lattice: &IntersectionLattice,
) -> Result<Rational> {
    let n = lattice.rank();
    if x.rank() != n || y.rank() != n {
        return Err(Error::Domain(format!(
            "dimension mismatch: classes of length {} and {} in a rank {n} lattice",
            x.rank(),
            y.rank()
        )));
    }
    Ok(y.pair(&lattice.dual(x)))
}

/// A declared irreducible curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub name: String,
    pub class: DivisorClass,
}

impl CurveRecord {
    pub fn new(name: impl Into<String>, class: DivisorClass) -> Self {
        CurveRecord {
            name: name.into(),
            class,
        }
    }
}

/// True iff the Gram matrix of `curves` satisfies `(-1)^i * minor_i > 0` for
/// every leading principal minor. The empty configuration is negative definite.
pub fn is_negative_definite(curves: &[&CurveRecord], lattice: &IntersectionLattice) -> bool {
    let gram: QMatrix = curves
        .iter()
        .map(|x| {
            let dx = lattice.dual(&x.class);
            curves.iter().map(|y| y.class.pair(&dx)).collect()
        })
        .collect();
    gram_is_negative_definite(&gram)
}

pub(crate) fn gram_is_negative_definite(gram: &QMatrix) -> bool {
    leading_principal_minors(gram)
        .iter()
        .enumerate()
        .all(|(i, m)| {
            if i % 2 == 0 {
                m.is_negative()
            } else {
                m.is_positive()
            }
        })
}

/// The computational universe: lattice, declared curves and ample witness.
///
/// Immutable once built; intersection numbers between declared curves and
/// the dual vectors `G c` of every curve are cached at construction.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    lattice: IntersectionLattice,
    curves: Vec<CurveRecord>,
    ample: DivisorClass,
    basis_names: Option<Vec<String>>,
    curve_duals: Vec<Vec<Rational>>,
    curve_gram: QMatrix,
    ample_dual: Vec<Rational>,
}

impl PartialEq for SurfaceModel {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
            && self.curves == other.curves
            && self.ample == other.ample
            && self.basis_names == other.basis_names
    }
}

impl SurfaceModel {
    /// Builds a model, checking only dimensions. Use [`validate_model`] or
    /// [`SurfaceModel::validated`] for the geometric invariants.
    pub fn new(
        lattice: IntersectionLattice,
        curves: Vec<CurveRecord>,
        ample: DivisorClass,
    ) -> Result<Self> {
        let n = lattice.rank();
        for c in &curves {
            if c.class.rank() != n {
                return Err(Error::Validation(format!(
                    "class of curve {} has length {}, lattice rank is {n}",
                    c.name,
                    c.class.rank()
                )));
            }
        }
        if ample.rank() != n {
            return Err(Error::Validation(format!(
                "ample class has length {}, lattice rank is {n}",
                ample.rank()
            )));
        }
        let curve_duals: Vec<Vec<Rational>> =
            curves.iter().map(|c| lattice.dual(&c.class)).collect();
        let curve_gram = curves
            .iter()
            .map(|x| curve_duals.iter().map(|d| x.class.pair(d)).collect())
            .collect();
        let ample_dual = lattice.dual(&ample);
        Ok(SurfaceModel {
            lattice,
            curves,
            ample,
            basis_names: None,
            curve_duals,
            curve_gram,
            ample_dual,
        })
    }

    /// [`SurfaceModel::new`] followed by [`validate_model`]; any violation is an error.
    pub fn validated(
        lattice: IntersectionLattice,
        curves: Vec<CurveRecord>,
        ample: DivisorClass,
    ) -> Result<Self> {
        let m = Self::new(lattice, curves, ample)?;
        validate_model(&m).into_result()?;
        Ok(m)
    }

    pub fn with_basis_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.rank() {
            return Err(Error::Validation(format!(
                "{} basis names for a rank {} lattice",
                names.len(),
                self.rank()
            )));
        }
        self.basis_names = Some(names);
        Ok(self)
    }

    pub fn lattice(&self) -> &IntersectionLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn curves(&self) -> &[CurveRecord] {
        &self.curves
    }

    pub fn curve(&self, i: usize) -> &CurveRecord {
        &self.curves[i]
    }

    pub fn ample(&self) -> &DivisorClass {
        &self.ample
    }

    pub fn basis_names(&self) -> Option<&[String]> {
        self.basis_names.as_deref()
    }

    pub fn curve_index(&self, name: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.name == name)
    }

    pub fn require_curve(&self, name: &str) -> Result<usize> {
        self.curve_index(name)
            .ok_or_else(|| Error::Validation(format!("unknown curve {name:?}")))
    }

    /// `C_i . C_j` for declared curves.
    pub fn curve_gram(&self) -> &QMatrix {
        &self.curve_gram
    }

    pub fn self_intersection(&self, i: usize) -> &Rational {
        &self.curve_gram[i][i]
    }

    /// `x . C_i`.
    pub fn dot_curve(&self, x: &DivisorClass, i: usize) -> Rational {
        x.pair(&self.curve_duals[i])
    }

    /// `x . C_i` for every declared curve.
    pub fn dots_curves(&self, x: &DivisorClass) -> Vec<Rational> {
        self.curve_duals.iter().map(|d| x.pair(d)).collect()
    }

    pub fn dot_ample(&self, x: &DivisorClass) -> Rational {
        x.pair(&self.ample_dual)
    }

    pub fn dot(&self, x: &DivisorClass, y: &DivisorClass) -> Rational {
        y.pair(&self.lattice.dual(x))
    }

    pub fn square(&self, x: &DivisorClass) -> Rational {
        self.dot(x, x)
    }

    /// Indices of declared curves with negative self-intersection.
    pub fn negative_candidates(&self) -> Vec<usize> {
        (0..self.curves.len())
            .filter(|&i| self.curve_gram[i][i].is_negative())
            .collect()
    }

    /// Gram matrix of the declared curves at `idx`.
    pub fn sub_gram(&self, idx: &[usize]) -> QMatrix {
        idx.iter()
            .map(|&i| idx.iter().map(|&j| self.curve_gram[i][j].clone()).collect())
            .collect()
    }

    pub fn is_negative_definite_set(&self, idx: &[usize]) -> bool {
        gram_is_negative_definite(&self.sub_gram(idx))
    }

    /// `sum coeff_i C_i`.
    pub fn combination(&self, terms: &[(usize, Rational)]) -> DivisorClass {
        terms
            .iter()
            .fold(DivisorClass::zero(self.rank()), |acc, (i, a)| {
                acc.add_scaled(a, &self.curves[*i].class)
            })
    }

    /// Connected components of the dual graph (`C_i . C_j > 0`) restricted to `idx`.
    pub fn components(&self, idx: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; idx.len()];
        let mut out = Vec::new();
        for start in 0..idx.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![idx[start]];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for v in 0..idx.len() {
                    if !seen[v] && self.curve_gram[idx[u]][idx[v]].is_positive() {
                        seen[v] = true;
                        comp.push(idx[v]);
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Admissible flag `S > C > {p}` on the model.
///
/// The point is symbolic: it is described by the local intersection
/// multiplicity at `p` of every declared curve with the flag curve. Curves
/// not listed do not pass through `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagSpec {
    pub curve: String,
    pub local_mults: BTreeMap<String, u32>,
}

impl FlagSpec {
    pub fn generic(curve: impl Into<String>) -> Self {
        FlagSpec {
            curve: curve.into(),
            local_mults: BTreeMap::new(),
        }
    }

    pub fn at(curve: impl Into<String>, mults: &[(&str, u32)]) -> Self {
        FlagSpec {
            curve: curve.into(),
            local_mults: mults.iter().map(|(n, m)| (n.to_string(), *m)).collect(),
        }
    }

    /// Checks the flag against `model` and returns curve indices.
    pub fn resolve(&self, model: &SurfaceModel) -> Result<ResolvedFlag> {
        let curve = model.require_curve(&self.curve)?;
        let mut mults = vec![0u32; model.curves().len()];
        for (name, &m) in &self.local_mults {
            let i = model.require_curve(name)?;
            if i == curve {
                return Err(Error::Validation(format!(
                    "flag curve {name} appears in its own local multiplicities"
                )));
            }
            let global = &model.curve_gram()[i][curve];
            if q(m as i64) > *global {
                return Err(Error::Validation(format!(
                    "local multiplicity {m} of {name} at the flag point exceeds {name}.{} = {global}",
                    self.curve
                )));
            }
            mults[i] = m;
        }
        Ok(ResolvedFlag { curve, mults })
    }

    /// `CURVE@generic` or `CURVE@{A:1,B:2}`.
    pub fn describe(&self) -> String {
        if self.local_mults.is_empty() {
            return format!("{}@generic", self.curve);
        }
        let inner: Vec<String> = self
            .local_mults
            .iter()
            .map(|(n, m)| format!("{n}:{m}"))
            .collect();
        format!("{}@{{{}}}", self.curve, inner.join(","))
    }
}

/// A flag with names resolved to curve indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedFlag {
    pub curve: usize,
    /// Local multiplicity at the flag point, indexed by curve.
    pub mults: Vec<u32>,
}
