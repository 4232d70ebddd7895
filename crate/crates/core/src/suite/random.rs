//! Seeded random models: blowups of the plane at up to five points with a
//! random choice of exceptional curves, lines, a conic and `-2` curves.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactnum::q;
use crate::model::{validate_model, CurveRecord, DivisorClass, IntersectionLattice, SurfaceModel};
use crate::zariski::{decompose_big, zariski_decompose};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelShape {
    pub max_rank: usize,
    pub max_negative: usize,
    pub max_curves: usize,
}

impl Default for ModelShape {
    fn default() -> Self {
        ModelShape {
            max_rank: 6,
            max_negative: 6,
            max_curves: 8,
        }
    }
}

fn pool(r: usize) -> Vec<(String, Vec<i64>)> {
    let n = r + 1;
    let unit = |i: usize| {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    };
    let line = |pts: &[usize]| {
        let mut v = unit(0);
        for &p in pts {
            v[p] = -1;
        }
        v
    };
    let mut out = vec![("H".to_string(), unit(0))];
    for i in 1..=r {
        out.push((format!("E{i}"), unit(i)));
        out.push((format!("H{i}"), line(&[i])));
    }
    for i in 1..=r {
        for j in i + 1..=r {
            out.push((format!("L{i}{j}"), line(&[i, j])));
            let mut v = unit(i);
            v[j] = -1;
            out.push((format!("R{i}{j}"), v));
            for k in j + 1..=r {
                out.push((format!("L{i}{j}{k}"), line(&[i, j, k])));
            }
        }
    }
    if r == 5 {
        out.push(("Q".into(), vec![2, -1, -1, -1, -1, -1]));
    }
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

fn ample_for(rng: &mut ChaCha8Rng, curves: &[(String, Vec<i64>)], n: usize) -> Option<Vec<i64>> {
    for _ in 0..64 {
        let mut w: Vec<i64> = (1..n).map(|_| rng.gen_range(1..=6)).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        let mut a = vec![0];
        a.extend(w.iter().map(|x| -x));
        let mut need = 1 + w.iter().sum::<i64>();
        for (_, c) in curves {
            let slope = c[0];
            let rest = dot(&a, c);
            if slope == 0 {
                if rest <= 0 {
                    need = i64::MAX;
                    break;
                }
            } else {
                need = need.max((-rest).div_euclid(slope) + 1);
            }
        }
        if need == i64::MAX {
            continue;
        }
        a[0] = need + rng.gen_range(0..=2);
        if dot(&a, &a) > 0 {
            return Some(a);
        }
    }
    None
}

/// A valid random model within `shape`.
pub fn random_model(rng: &mut ChaCha8Rng, shape: ModelShape) -> SurfaceModel {
    loop {
        let r = rng.gen_range(1..shape.max_rank);
        let n = r + 1;
        let mut candidates = pool(r);
        candidates.shuffle(rng);
        let target = rng.gen_range(1..=shape.max_curves);
        let mut chosen: Vec<(String, Vec<i64>)> = Vec::new();
        let mut negative = 0;
        for (name, class) in candidates {
            if chosen.len() == target {
                break;
            }
            let neg = dot(&class, &class) < 0;
            if neg && negative == shape.max_negative {
                continue;
            }
            if chosen.iter().all(|(_, c)| dot(c, &class) >= 0) {
                negative += usize::from(neg);
                chosen.push((name, class));
            }
        }
        chosen.sort_by(|a, b| a.0.cmp(&b.0));
        let Some(ample) = ample_for(rng, &chosen, n) else {
            continue;
        };
        let curves = chosen
            .iter()
            .map(|(nm, c)| CurveRecord::new(nm.clone(), DivisorClass::from_ints(c)))
            .collect();
        let basis = std::iter::once("h".to_string())
            .chain((1..n).map(|i| format!("e{i}")))
            .collect();
        let m = SurfaceModel::new(
            IntersectionLattice::odd_unimodular(n),
            curves,
            DivisorClass::from_ints(&ample),
        )
        .and_then(|m| m.with_basis_names(basis))
        .expect("shapes agree");
        if validate_model(&m).is_valid() {
            return m;
        }
    }
}

/// A random big class: a combination of the ample witness and declared
/// curves, replaced by its positive part a third of the time.
pub fn random_big_class(rng: &mut ChaCha8Rng, m: &SurfaceModel) -> DivisorClass {
    for _ in 0..200 {
        let mut d = m.ample().scale(&q(rng.gen_range(0..=2)));
        for c in m.curves() {
            if rng.gen_bool(0.5) {
                d = d.add_scaled(&q(rng.gen_range(1..=3)), &c.class);
            }
        }
        let Ok(z) = decompose_big(&d, m) else {
            continue;
        };
        if rng.gen_bool(1.0 / 3.0) {
            return z.positive;
        }
        return d;
    }
    m.ample().clone()
}

/// A random big class that is not nef, when one turns up.
pub fn random_non_nef_big_class(rng: &mut ChaCha8Rng, m: &SurfaceModel) -> Option<DivisorClass> {
    let negatives = m.negative_candidates();
    if negatives.is_empty() {
        return None;
    }
    for _ in 0..200 {
        let mut d = m.ample().scale(&q(rng.gen_range(1..=2)));
        for &i in &negatives {
            if rng.gen_bool(0.6) {
                d = d.add_scaled(&q(rng.gen_range(1..=4)), &m.curve(i).class);
            }
        }
        match decompose_big(&d, m) {
            Ok(z) if !z.is_nef() => return Some(d),
            _ => {}
        }
    }
    None
}

/// A random integral class with small coordinates; neither bigness nor
/// pseudoeffectivity is enforced.
pub fn random_class(rng: &mut ChaCha8Rng, m: &SurfaceModel) -> DivisorClass {
    let v: Vec<i64> = (0..m.rank()).map(|_| rng.gen_range(-4..=4)).collect();
    let d = DivisorClass::from_ints(&v);
    if rng.gen_bool(0.5) {
        if let Ok(z) = zariski_decompose(&d, m) {
            return z.positive;
        }
    }
    d
}
