//! Small textual languages for divisors and flags.
//!
//! Divisors: a coordinate vector `[1, 1, -3/2]` or a combination such as
//! `2*E_p + F1 - 1/2*F2`, where names resolve against declared curves first
//! and basis names second. Flags: `CURVE@generic` or `CURVE@{A:1,B:2}`.

use std::collections::BTreeMap;

use super::{DivisorClass, FlagSpec, SurfaceModel};
use crate::error::{Error, Result};
use crate::exactnum::{parse_rational, q, Rational};

pub fn parse_divisor(spec: &str, model: &SurfaceModel) -> Result<DivisorClass> {
    let s = spec.trim();
    if let Some(inner) = s.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("unterminated vector in {spec:?}")))?;
        let coords = inner
            .split(',')
            .map(|x| parse_rational(x.trim().trim_matches('"')))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != model.rank() {
            return Err(Error::Parse(format!(
                "vector {spec:?} has {} entries, lattice rank is {}",
                coords.len(),
                model.rank()
            )));
        }
        return Ok(DivisorClass(coords));
    }

    let mut total = DivisorClass::zero(model.rank());
    for (sign, body) in split_terms(s)? {
        let (coeff, name) = match body.split_once('*') {
            Some((c, n)) => (parse_rational(c)?, n.trim()),
            None => (q(1), body.trim()),
        };
        let class = resolve_name(name, model)
            .ok_or_else(|| Error::Parse(format!("unknown curve or basis name {name:?}")))?;
        total = total.add_scaled(&(coeff * sign), &class);
    }
    Ok(total)
}

fn split_terms(s: &str) -> Result<Vec<(Rational, String)>> {
    let mut terms = Vec::new();
    let mut sign = q(1);
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '+' | '-' => {
                if !cur.trim().is_empty() {
                    terms.push((sign, std::mem::take(&mut cur)));
                    sign = q(1);
                }
                if ch == '-' {
                    sign = -sign;
                }
            }
            c => cur.push(c),
        }
    }
    if cur.trim().is_empty() {
        return Err(Error::Parse(format!("empty term in divisor {s:?}")));
    }
    terms.push((sign, cur));
    Ok(terms)
}

fn resolve_name(name: &str, model: &SurfaceModel) -> Option<DivisorClass> {
    if let Some(i) = model.curve_index(name) {
        return Some(model.curve(i).class.clone());
    }
    let basis = model.basis_names()?;
    let i = basis.iter().position(|b| b == name)?;
    Some(DivisorClass::basis(model.rank(), i))
}

pub fn parse_flag(spec: &str) -> Result<FlagSpec> {
    let s = spec.trim();
    let (curve, point) = match s.split_once('@') {
        Some((c, p)) => (c.trim(), p.trim()),
        None => (s, "generic"),
    };
    if curve.is_empty() {
        return Err(Error::Parse(format!("missing flag curve in {spec:?}")));
    }
    if point == "generic" {
        return Ok(FlagSpec::generic(curve));
    }
    let inner = point
        .strip_prefix('{')
        .and_then(|p| p.strip_suffix('}'))
        .ok_or_else(|| {
            Error::Parse(format!(
                "flag point must be 'generic' or '{{NAME:mult,...}}' in {spec:?}"
            ))
        })?;
    let mut local_mults = BTreeMap::new();
    for entry in inner.split(',').filter(|e| !e.trim().is_empty()) {
        let (name, mult) = entry
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected NAME:mult, got {entry:?}")))?;
        let mult: u32 = mult
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad multiplicity in {entry:?}")))?;
        if local_mults.insert(name.trim().to_string(), mult).is_some() {
            return Err(Error::Parse(format!("curve {} listed twice", name.trim())));
        }
    }
    Ok(FlagSpec {
        curve: curve.to_string(),
        local_mults,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::qf;
    use crate::model::{fix_dp7, fix_tower7};

    #[test]
    fn combinations_and_vectors() {
        let m = fix_dp7();
        assert_eq!(
            parse_divisor("2*E_p+F1+F2", &m).unwrap(),
            DivisorClass::from_ints(&[1, 1, 0])
        );
        assert_eq!(
            parse_divisor("3*E_p + 2*F1 + F2", &m).unwrap(),
            DivisorClass::from_ints(&[2, 1, 0])
        );
        assert_eq!(
            parse_divisor("f1+f2-3/2*e", &m).unwrap(),
            DivisorClass(vec![q(1), q(1), qf(-3, 2)])
        );
        assert_eq!(
            parse_divisor("[1, 1, \"-3/2\"]", &m).unwrap(),
            DivisorClass(vec![q(1), q(1), qf(-3, 2)])
        );
        assert_eq!(
            parse_divisor("-F1", &m).unwrap(),
            DivisorClass::from_ints(&[-1, 0, 1])
        );
        assert_eq!(
            parse_divisor("h", &fix_tower7()).unwrap(),
            DivisorClass::basis(8, 0)
        );
    }

    #[test]
    fn divisor_errors() {
        let m = fix_dp7();
        assert!(parse_divisor("G", &m).is_err());
        assert!(parse_divisor("[1,2]", &m).is_err());
        assert!(parse_divisor("F1+", &m).is_err());
        assert!(parse_divisor("x*F1", &m).is_err());
    }

    #[test]
    fn flags() {
        assert_eq!(parse_flag("E_p@generic").unwrap(), FlagSpec::generic("E_p"));
        assert_eq!(
            parse_flag("E_7@{C_7:1}").unwrap(),
            FlagSpec::at("E_7", &[("C_7", 1)])
        );
        assert_eq!(parse_flag("E_p@{F1:1, F2:1}").unwrap().local_mults.len(), 2);
        assert!(parse_flag("@generic").is_err());
        assert!(parse_flag("E_p@F1").is_err());
        assert!(parse_flag("E_p@{F1:x}").is_err());
    }
}
