//! CSV and SVG views of a polygon. Exact values live in the JSON form; these
//! emitters round to 12 significant digits for display.

use std::fmt::Write;

use super::polygon::{OkounkovPolygon, VertexClass};

/// Decimal rendering with 12 significant digits, trailing zeros trimmed.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).clamp(0, 40) as usize;
    let s = format!("{v:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn class_name(c: VertexClass) -> &'static str {
    match c {
        VertexClass::Leftmost => "leftmost",
        VertexClass::Interior => "interior",
        VertexClass::Rightmost => "rightmost",
    }
}

/// One row per vertex: `x,y,x_exact,y_exact,class`.
pub fn to_csv(p: &OkounkovPolygon) -> String {
    let mut out = String::from("x,y,x_exact,y_exact,class\n");
    for v in &p.vertices {
        writeln!(
            out,
            "{},{},{},{},{}",
            sig12(v.x.to_f64()),
            sig12(v.y.to_f64()),
            v.x,
            v.y,
            class_name(v.class)
        )
        .expect("writing to a String");
    }
    out
}

/// A static drawing: the polygon in the `(t, y)` plane, `y` pointing up.
pub fn to_svg(p: &OkounkovPolygon) -> String {
    const SIZE: f64 = 400.0;
    const PAD: f64 = 20.0;
    let pts: Vec<(f64, f64)> = p
        .vertices
        .iter()
        .map(|v| (v.x.to_f64(), v.y.to_f64()))
        .collect();
    let (min_x, max_x) = pts
        .iter()
        .fold((0.0f64, 0.0f64), |(a, b), &(x, _)| (a.min(x), b.max(x)));
    let (min_y, max_y) = pts
        .iter()
        .fold((0.0f64, 0.0f64), |(a, b), &(_, y)| (a.min(y), b.max(y)));
    let span = (max_x - min_x).max(max_y - min_y).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * PAD) / span;
    let map = |(x, y): (f64, f64)| (PAD + (x - min_x) * scale, SIZE - PAD - (y - min_y) * scale);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, "  <title>{}</title>", p.flag.replace('<', "&lt;")).unwrap();
    let (ox, oy) = map((min_x, min_y));
    writeln!(
        out,
        r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray"/>"#,
        sig12(PAD),
        sig12(oy),
        sig12(SIZE - PAD),
        sig12(oy)
    )
    .unwrap();
    writeln!(
        out,
        r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray"/>"#,
        sig12(ox),
        sig12(PAD),
        sig12(ox),
        sig12(SIZE - PAD)
    )
    .unwrap();
    let poly: Vec<String> = pts
        .iter()
        .map(|&pt| {
            let (x, y) = map(pt);
            format!("{},{}", sig12(x), sig12(y))
        })
        .collect();
    writeln!(
        out,
        r#"  <polygon points="{}" fill="lightsteelblue" stroke="navy"/>"#,
        poly.join(" ")
    )
    .unwrap();
    for (v, &pt) in p.vertices.iter().zip(&pts) {
        let (x, y) = map(pt);
        writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="3" fill="navy"><title>({}, {}) {}</title></circle>"#,
            sig12(x),
            sig12(y),
            v.x,
            v.y,
            class_name(v.class)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fix_dp7, DivisorClass, FlagSpec};
    use crate::okounkov::polygon;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(8.0 / 3.0), "2.66666666667");
        assert_eq!(sig12(0.375), "0.375");
        assert_eq!(sig12(-21.0 / 8.0), "-2.625");
        assert_eq!(sig12(1234567.0), "1234567");
        assert_eq!(sig12(2f64.sqrt() * 1e-3), "0.00141421356237");
        assert_eq!(sig12(0.0), "0");
    }

    #[test]
    fn csv_and_svg() {
        let m = fix_dp7();
        let p = polygon(
            &DivisorClass::from_ints(&[1, 1, 0]),
            &FlagSpec::generic("E_p"),
            &m,
        )
        .unwrap();
        assert_eq!(
            to_csv(&p),
            "x,y,x_exact,y_exact,class\n0,0,0,0,leftmost\n2,0,2,0,rightmost\n1,1,1,1,interior\n"
        );
        let svg = to_svg(&p);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 3);
    }
}
