//! Point blowups in lattice terms and the nodal tower built from them.
//!
//! Blowing up a point adds a basis vector `e` with `e^2 = -1` orthogonal to
//! everything pulled back. A curve of multiplicity `m` at the point becomes
//! its strict transform `class - m e`; the exceptional curve is `e` itself.
//! Only points where the listed curves meet transversally are supported.

mod tower;

pub use tower::{nodal_tower, tower_min_k, tower_reference_values, TowerData, TowerReference};

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactnum::{q, Rational};
use crate::model::{validate_model, CurveRecord, DivisorClass, SurfaceModel};

/// Where to blow up: the declared curves through the point with their
/// multiplicities there. Curves not listed miss the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSpec {
    pub on_curves: Vec<(String, u32)>,
    /// Name of the new exceptional curve.
    pub exceptional: String,
    /// Basis name for the new lattice vector; defaults to `e<old rank>`.
    pub basis_name: Option<String>,
    /// Pairs of listed curves that are tangent at the point. Not supported;
    /// any entry makes [`blow_up`] fail with [`Error::Unsupported`].
    pub tangent_pairs: Vec<(String, String)>,
}

impl PointSpec {
    /// A point on none of the declared curves.
    pub fn general(exceptional: impl Into<String>) -> Self {
        PointSpec {
            on_curves: Vec::new(),
            exceptional: exceptional.into(),
            basis_name: None,
            tangent_pairs: Vec::new(),
        }
    }

    pub fn on(exceptional: impl Into<String>, curves: &[(&str, u32)]) -> Self {
        PointSpec {
            on_curves: curves.iter().map(|(n, m)| (n.to_string(), *m)).collect(),
            ..PointSpec::general(exceptional)
        }
    }

    fn resolve(&self, m: &SurfaceModel) -> Result<Vec<(usize, u32)>> {
        if let Some((a, b)) = self.tangent_pairs.first() {
            return Err(Error::Unsupported(format!(
                "blowing up a tangency point of {a} and {b} needs infinitely near point bookkeeping"
            )));
        }
        let mut out: Vec<(usize, u32)> = Vec::new();
        for (name, mult) in &self.on_curves {
            let i = m.require_curve(name)?;
            if *mult == 0 {
                return Err(Error::Validation(format!(
                    "multiplicity of {name} at the point must be positive"
                )));
            }
            if out.iter().any(|(j, _)| *j == i) {
                return Err(Error::Validation(format!("curve {name} listed twice")));
            }
            out.push((i, *mult));
        }
        for (a, &(i, mi)) in out.iter().enumerate() {
            for &(j, mj) in &out[a + 1..] {
                let global = &m.curve_gram()[i][j];
                if q(mi as i64 * mj as i64) > *global {
                    return Err(Error::Validation(format!(
                        "{} and {} meet with multiplicity at least {} at the point but {}.{} = {global}",
                        m.curve(i).name,
                        m.curve(j).name,
                        mi * mj,
                        m.curve(i).name,
                        m.curve(j).name
                    )));
                }
            }
        }
        if m.curve_index(&self.exceptional).is_some() {
            return Err(Error::Validation(format!(
                "curve name {} already taken",
                self.exceptional
            )));
        }
        Ok(out)
    }
}

/// Largest `eps` in `1/2, 1/4, ..., 2^-64` making `A - eps e` a valid witness.
fn ample_witness(
    base: &DivisorClass,
    curves: &[CurveRecord],
    probe: &SurfaceModel,
) -> Option<DivisorClass> {
    let n = base.rank();
    let e = DivisorClass::basis(n, n - 1);
    let mut eps = Rational::one() / q(2);
    for _ in 0..64 {
        let a = base.add_scaled(&-&eps, &e);
        let positive_square = probe.square(&a).is_positive();
        let positive_on_curves = curves.iter().all(|c| probe.dot(&a, &c.class).is_positive());
        if positive_square && positive_on_curves {
            return Some(a);
        }
        eps /= q(2);
    }
    None
}

/// Blows up `m` at `p`.
///
/// ```
/// use nobody::birational::{blow_up, PointSpec};
/// use nobody::model::p2_nodal_cubic;
///
/// let m = blow_up(&p2_nodal_cubic(), &PointSpec::on("E_1", &[("C", 2)])).unwrap();
/// let c = m.curve_index("C").unwrap();
/// assert_eq!(m.self_intersection(c).to_string(), "5");
/// ```
pub fn blow_up(m: &SurfaceModel, p: &PointSpec) -> Result<SurfaceModel> {
    let through = p.resolve(m)?;
    let n = m.rank();
    let lattice = m.lattice().extended_by_exceptional();
    let e = DivisorClass::basis(n + 1, n);
    let mut curves: Vec<CurveRecord> = m
        .curves()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut class = c.class.extended(1);
            if let Some(&(_, mult)) = through.iter().find(|(j, _)| *j == i) {
                class = class.add_scaled(&-q(mult as i64), &e);
            }
            CurveRecord::new(c.name.clone(), class)
        })
        .collect();
    curves.push(CurveRecord::new(p.exceptional.clone(), e));
    let pulled = m.ample().extended(1);
    let probe = SurfaceModel::new(lattice.clone(), curves.clone(), pulled.clone())?;
    let ample = ample_witness(&pulled, &curves, &probe).ok_or_else(|| {
        Error::Validation(format!(
            "no ample witness A - eps {} with eps >= 2^-64 after the blowup",
            p.exceptional
        ))
    })?;
    let out = SurfaceModel::new(lattice, curves, ample)?;
    validate_model(&out).into_result()?;
    match m.basis_names() {
        Some(names) => {
            let mut names = names.to_vec();
            let mut fresh = p.basis_name.clone().unwrap_or_else(|| format!("e{n}"));
            while names.contains(&fresh) {
                fresh.push('\'');
            }
            names.push(fresh);
            out.with_basis_names(names)
        }
        None => Ok(out),
    }
}
