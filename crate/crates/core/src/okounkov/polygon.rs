use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::trace::{trace_path_idx, ChamberSegment, PathTrace};
use crate::error::{Error, Result};
use crate::exactnum::{q, quad_compare, serde_q, QuadNumber, Rational};
use crate::model::{DivisorClass, FlagSpec, ResolvedFlag, SurfaceModel};

/// Affine piece `value + slope (t - start)` of a boundary function, valid
/// from `start` to the next piece's start (or `mu`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Piece {
    #[serde(with = "serde_q")]
    pub start: Rational,
    #[serde(with = "serde_q")]
    pub slope: Rational,
    #[serde(with = "serde_q")]
    pub value: Rational,
}

/// Which boundary bends at a breakpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    None,
    Lower,
    Upper,
    Both,
}

impl Side {
    fn from_flags(lower: bool, upper: bool) -> Self {
        match (lower, upper) {
            (false, false) => Side::None,
            (true, false) => Side::Lower,
            (false, true) => Side::Upper,
            (true, true) => Side::Both,
        }
    }
}

/// Support change at an interior breakpoint `t`.
///
/// `predicted` is read off the dual graph of the new support: the lower
/// boundary bends when an entering curve shares a connected component with a
/// curve through the flag point, the upper one when an entering curve's
/// component meets the flag curve away from the point. `observed` comes from
/// the slopes of the boundary functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KinkCause {
    #[serde(with = "serde_q")]
    pub t: Rational,
    pub entering: Vec<String>,
    pub leaving: Vec<String>,
    pub predicted: Side,
    pub observed: Side,
    #[serde(skip)]
    pub entering_idx: Vec<usize>,
}

/// `alpha`, `beta` and the chamber data they come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryFunctions {
    pub trace: PathTrace,
    pub flag: ResolvedFlag,
    pub alpha: Vec<Piece>,
    pub beta: Vec<Piece>,
    pub causes: Vec<KinkCause>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    Leftmost,
    Interior,
    Rightmost,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub x: QuadNumber,
    pub y: QuadNumber,
    pub class: VertexClass,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Census {
    pub total: usize,
    pub leftmost: usize,
    pub interior: usize,
    pub rightmost: usize,
}

/// The Newton–Okounkov polygon of a big class for a flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OkounkovPolygon {
    pub flag: String,
    #[serde(with = "serde_q")]
    pub nu: Rational,
    pub mu: QuadNumber,
    pub alpha: Vec<Piece>,
    pub beta: Vec<Piece>,
    /// Counterclockwise, starting at the lowest of the leftmost points.
    pub vertices: Vec<Vertex>,
    pub census: Census,
    pub causes: Vec<KinkCause>,
    pub area: QuadNumber,
    /// `P_D^2`, which must be twice the area.
    #[serde(with = "serde_q")]
    pub volume: Rational,
}

fn cmp(a: &QuadNumber, b: &QuadNumber) -> Ordering {
    quad_compare(a, b).expect("polygon coordinates share one quadratic field")
}

fn qsub(a: &QuadNumber, b: &QuadNumber) -> QuadNumber {
    a.sub(b)
        .expect("polygon coordinates share one quadratic field")
}

fn qmul(a: &QuadNumber, b: &QuadNumber) -> QuadNumber {
    a.mul(b)
        .expect("polygon coordinates share one quadratic field")
}

type Point = (QuadNumber, QuadNumber);

fn cross(o: &Point, a: &Point, b: &Point) -> QuadNumber {
    qsub(
        &qmul(&qsub(&a.0, &o.0), &qsub(&b.1, &o.1)),
        &qmul(&qsub(&a.1, &o.1), &qsub(&b.0, &o.0)),
    )
}

/// Monotone-chain hull, counterclockwise from the lowest leftmost point,
/// collinear points dropped.
pub(crate) fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| cmp(&a.0, &b.0).then_with(|| cmp(&a.1, &b.1)));
    pts.dedup_by(|a, b| cmp(&a.0, &b.0) == Ordering::Equal && cmp(&a.1, &b.1) == Ordering::Equal);
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).signum()
                != Ordering::Greater
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).signum()
                != Ordering::Greater
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub(crate) fn shoelace(pts: &[Point]) -> QuadNumber {
    let n = pts.len();
    let mut twice = QuadNumber::zero();
    for i in 0..n {
        let (a, b) = (&pts[i], &pts[(i + 1) % n]);
        twice = twice
            .add(&qsub(&qmul(&a.0, &b.1), &qmul(&b.0, &a.1)))
            .expect("polygon coordinates share one quadratic field");
    }
    twice.scale(&crate::exactnum::qf(1, 2))
}

fn pieces_for(seg: &ChamberSegment, mults: &[u32], c: usize, m: &SurfaceModel) -> (Piece, Piece) {
    let mut a0 = Rational::zero();
    let mut a1 = Rational::zero();
    for a in &seg.coeffs {
        let w = q(mults[a.curve] as i64);
        a0 += &a.c0 * &w;
        a1 += &a.c1 * &w;
    }
    let b0 = &a0 + m.dot_curve(&seg.p0, c);
    let b1 = &a1 + m.dot_curve(&seg.p1, c);
    let at = |v0: &Rational, v1: &Rational| v0 + v1 * &seg.t_lo;
    (
        Piece {
            start: seg.t_lo.clone(),
            slope: a1.clone(),
            value: at(&a0, &a1),
        },
        Piece {
            start: seg.t_lo.clone(),
            slope: b1.clone(),
            value: at(&b0, &b1),
        },
    )
}

fn predicted_side(
    m: &SurfaceModel,
    flag: &ResolvedFlag,
    support: &[usize],
    entering: &[usize],
) -> Side {
    let c = flag.curve;
    let mut lower = false;
    let mut upper = false;
    for comp in m.components(support) {
        if !comp.iter().any(|i| entering.contains(i)) {
            continue;
        }
        lower |= comp.iter().any(|&i| flag.mults[i] > 0);
        upper |= comp
            .iter()
            .any(|&i| (&m.curve_gram()[c][i] - q(flag.mults[i] as i64)).is_positive());
    }
    Side::from_flags(lower, upper)
}

/// Piecewise `alpha`, `beta` along the path, with a cause for every interior
/// breakpoint.
///
/// `alpha(t) = sum a_i(t) m_i` with `m_i` the local multiplicity of `C_i` at
/// the flag point and `beta = alpha + C.P(t)`.
pub fn boundary_functions(
    d: &DivisorClass,
    flag: &FlagSpec,
    m: &SurfaceModel,
) -> Result<BoundaryFunctions> {
    let rf = flag.resolve(m)?;
    let trace = trace_path_idx(d, rf.curve, m)?;
    let c = rf.curve;
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for seg in &trace.segments {
        let (a, b) = pieces_for(seg, &rf.mults, c, m);
        alpha.push(a);
        beta.push(b);
    }
    let mut causes = Vec::new();
    for w in 0..trace.segments.len().saturating_sub(1) {
        let (s, r) = (&trace.segments[w], &trace.segments[w + 1]);
        let before = s.support_indices();
        let after = r.support_indices();
        let entering: Vec<usize> = after
            .iter()
            .copied()
            .filter(|i| !before.contains(i))
            .collect();
        let leaving: Vec<usize> = before
            .iter()
            .copied()
            .filter(|i| !after.contains(i))
            .collect();
        let observed = Side::from_flags(
            alpha[w].slope != alpha[w + 1].slope,
            beta[w].slope != beta[w + 1].slope,
        );
        causes.push(KinkCause {
            t: r.t_lo.clone(),
            entering: entering.iter().map(|&i| m.curve(i).name.clone()).collect(),
            leaving: leaving.iter().map(|&i| m.curve(i).name.clone()).collect(),
            predicted: predicted_side(m, &rf, &after, &entering),
            observed,
            entering_idx: entering,
        });
    }
    Ok(BoundaryFunctions {
        trace,
        flag: rf,
        alpha,
        beta,
        causes,
    })
}

impl BoundaryFunctions {
    /// `(alpha(t), beta(t))` at `t = mu`.
    fn at_mu(&self) -> (QuadNumber, QuadNumber) {
        let mu = &self.trace.mu;
        let eval = |p: &Piece| mu.add_rational(&-&p.start).affine(&p.value, &p.slope);
        (
            eval(self.alpha.last().expect("at least one piece")),
            eval(self.beta.last().expect("at least one piece")),
        )
    }
}

/// The polygon of `D` for `flag`: the region between `alpha` and `beta`
/// over `[nu, mu]`.
///
/// ```
/// use nobody::model::{fix_dp7, DivisorClass, FlagSpec};
/// use nobody::okounkov::polygon;
///
/// let m = fix_dp7();
/// let p = polygon(&DivisorClass::from_ints(&[1, 1, 0]), &FlagSpec::generic("E_p"), &m).unwrap();
/// let xy: Vec<String> = p.vertices.iter().map(|v| format!("({},{})", v.x, v.y)).collect();
/// assert_eq!(xy, ["(0,0)", "(2,0)", "(1,1)"]);
/// ```
pub fn polygon(d: &DivisorClass, flag: &FlagSpec, m: &SurfaceModel) -> Result<OkounkovPolygon> {
    let bf = boundary_functions(d, flag, m)?;
    let mut pts: Vec<Point> = Vec::new();
    for (a, b) in bf.alpha.iter().zip(&bf.beta) {
        let x = QuadNumber::rational(a.start.clone());
        pts.push((x.clone(), QuadNumber::rational(a.value.clone())));
        pts.push((x, QuadNumber::rational(b.value.clone())));
    }
    let (am, bm) = bf.at_mu();
    pts.push((bf.trace.mu.clone(), am));
    pts.push((bf.trace.mu.clone(), bm));
    let hull = convex_hull(pts);
    let area = shoelace(&hull);
    let nu = QuadNumber::rational(bf.trace.nu.clone());
    let vertices: Vec<Vertex> = hull
        .into_iter()
        .map(|(x, y)| {
            let class = if cmp(&x, &nu) == Ordering::Equal {
                VertexClass::Leftmost
            } else if cmp(&x, &bf.trace.mu) == Ordering::Equal {
                VertexClass::Rightmost
            } else {
                VertexClass::Interior
            };
            Vertex { x, y, class }
        })
        .collect();
    let volume = m.square(&bf.trace.start.positive);
    let mut poly = OkounkovPolygon {
        flag: flag.describe(),
        nu: bf.trace.nu,
        mu: bf.trace.mu,
        alpha: bf.alpha,
        beta: bf.beta,
        census: Census::default(),
        vertices,
        causes: bf.causes,
        area,
        volume,
    };
    poly.census = vertex_census(&poly);
    Ok(poly)
}

/// Vertex counts by abscissa: `nu`, strictly between, `mu`.
pub fn vertex_census(p: &OkounkovPolygon) -> Census {
    let mut c = Census {
        total: p.vertices.len(),
        ..Census::default()
    };
    for v in &p.vertices {
        match v.class {
            VertexClass::Leftmost => c.leftmost += 1,
            VertexClass::Interior => c.interior += 1,
            VertexClass::Rightmost => c.rightmost += 1,
        }
    }
    c
}

impl OkounkovPolygon {
    pub fn vertex_points(&self) -> Vec<Point> {
        self.vertices
            .iter()
            .map(|v| (v.x.clone(), v.y.clone()))
            .collect()
    }

    /// Whether the polygon, as a vertex list, equals `other` shifted by `(dx, dy)`.
    pub fn is_translate_of(&self, other: &OkounkovPolygon, dx: &Rational, dy: &Rational) -> bool {
        self.vertices.len() == other.vertices.len()
            && self.vertices.iter().zip(&other.vertices).all(|(a, b)| {
                cmp(&a.x, &b.x.add_rational(dx)) == Ordering::Equal
                    && cmp(&a.y, &b.y.add_rational(dy)) == Ordering::Equal
            })
    }

    /// Violated polygon invariants, empty when all hold: strict convexity and
    /// counterclockwise order, `alpha` nondecreasing, `beta >= alpha` at every
    /// breakpoint and at `mu`, continuity of both functions, twice the area
    /// equal to `P_D^2`.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let pts = self.vertex_points();
        let n = pts.len();
        if n >= 3 {
            for i in 0..n {
                if cross(&pts[i], &pts[(i + 1) % n], &pts[(i + 2) % n]).signum()
                    != Ordering::Greater
                {
                    bad.push(format!(
                        "vertex {} is not a strict counterclockwise turn",
                        (i + 1) % n
                    ));
                }
            }
        }
        for p in &self.alpha {
            if p.slope.is_negative() {
                bad.push(format!("alpha decreases after t = {}", p.start));
            }
        }
        for (a, b) in self.alpha.iter().zip(&self.beta) {
            if b.value < a.value {
                bad.push(format!("beta < alpha at t = {}", a.start));
            }
        }
        for f in [&self.alpha, &self.beta] {
            for w in f.windows(2) {
                let end = &w[0].value + &w[0].slope * (&w[1].start - &w[0].start);
                if end != w[1].value {
                    bad.push(format!("boundary function jumps at t = {}", w[1].start));
                }
            }
        }
        let (am, bm) = self.end_values();
        if cmp(&bm, &am) == Ordering::Less {
            bad.push("beta < alpha at mu".into());
        }
        let half = self.volume.clone() * crate::exactnum::qf(1, 2);
        if cmp(&self.area, &QuadNumber::rational(half.clone())) != Ordering::Equal {
            bad.push(format!("area {} differs from P_D^2/2 = {half}", self.area));
        }
        bad
    }

    /// `(alpha(mu), beta(mu))`.
    pub fn end_values(&self) -> (QuadNumber, QuadNumber) {
        let eval = |p: &Piece| self.mu.add_rational(&-&p.start).affine(&p.value, &p.slope);
        (
            eval(self.alpha.last().expect("pieces")),
            eval(self.beta.last().expect("pieces")),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("polygons always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("polygon file: {e}")))
    }
}
