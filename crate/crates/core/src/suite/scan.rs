//! Flag scans: every polygon of one class over a universe of flags.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::birational::nodal_tower;
use crate::error::Result;
use crate::invariants::{bound_report, Verdict};
use crate::model::{DivisorClass, FlagSpec, SurfaceModel};
use crate::okounkov::{polygon, Census, OkounkovPolygon};

/// Every declared curve at a generic point, and at one point per declared
/// partner it meets, with the whole intersection number as local
/// multiplicity. Partners with non-integral intersection are skipped.
pub fn flag_universe(m: &SurfaceModel) -> Vec<FlagSpec> {
    (0..m.curves().len())
        .flat_map(|c| flags_on_idx(m, c))
        .collect()
}

pub fn flags_on(m: &SurfaceModel, curve: &str) -> Result<Vec<FlagSpec>> {
    Ok(flags_on_idx(m, m.require_curve(curve)?))
}

fn flags_on_idx(m: &SurfaceModel, c: usize) -> Vec<FlagSpec> {
    let name = &m.curve(c).name;
    let mut out = vec![FlagSpec::generic(name.clone())];
    for (j, x) in m.curves().iter().enumerate() {
        let v = &m.curve_gram()[c][j];
        if j == c || !v.is_positive() || !v.is_integer() {
            continue;
        }
        if let Some(mult) = v.to_integer().to_u32() {
            out.push(FlagSpec::at(name.clone(), &[(x.name.as_str(), mult)]));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub flag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tower_k: Option<usize>,
    pub total: Option<usize>,
    pub census: Option<Census>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub polygon: Option<OkounkovPolygon>,
}

impl ScanEntry {
    fn run(d: &DivisorClass, flag: &FlagSpec, m: &SurfaceModel, tower_k: Option<usize>) -> Self {
        let mut entry = ScanEntry {
            flag: flag.describe(),
            tower_k,
            total: None,
            census: None,
            verdicts: Vec::new(),
            error: None,
            polygon: None,
        };
        match polygon(d, flag, m).and_then(|p| bound_report(d, flag, &p, m).map(|r| (p, r))) {
            Ok((p, r)) => {
                entry.total = Some(p.census.total);
                entry.census = Some(p.census);
                entry.verdicts = r.verdicts;
                entry.polygon = Some(p);
            }
            Err(e) => entry.error = Some(e.to_string()),
        }
        entry
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.verdicts.iter().all(|v| v.passed)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanResult {
    pub entries: Vec<ScanEntry>,
    /// Vertex total to number of flags producing it.
    pub histogram: BTreeMap<usize, usize>,
}

impl ScanResult {
    fn from_entries(entries: Vec<ScanEntry>) -> Self {
        let mut histogram = BTreeMap::new();
        for t in entries.iter().filter_map(|e| e.total) {
            *histogram.entry(t).or_insert(0) += 1;
        }
        ScanResult { entries, histogram }
    }

    pub fn errors(&self) -> impl Iterator<Item = &ScanEntry> {
        self.entries.iter().filter(|e| e.error.is_some())
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(ScanEntry::passed)
    }

    pub fn max_total(&self) -> Option<usize> {
        self.histogram.keys().next_back().copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scan results always serialize")
    }
}

/// Polygons of `d` for every flag in `flags`, in the given order.
///
/// ```
/// use nobody::model::{fix_dp7, DivisorClass};
/// use nobody::suite::{flags_on, scan};
///
/// let m = fix_dp7();
/// let r = scan(&DivisorClass::from_ints(&[1, 1, 0]), &m, &flags_on(&m, "E_p").unwrap());
/// assert_eq!(r.histogram.into_iter().collect::<Vec<_>>(), [(3, 1), (4, 2)]);
/// ```
pub fn scan(d: &DivisorClass, m: &SurfaceModel, flags: &[FlagSpec]) -> ScanResult {
    let entries = flags
        .par_iter()
        .map(|f| ScanEntry::run(d, f, m, None))
        .collect();
    ScanResult::from_entries(entries)
}

/// Polygons of the pullback of `d` on nodal towers over `curve`, for the
/// flag at `C_k . E_k` and, when `k >= 2`, at `E_k . E_{k-1,k}`.
pub fn scan_towers(
    d: &DivisorClass,
    m: &SurfaceModel,
    curve: &str,
    ks: RangeInclusive<usize>,
) -> ScanResult {
    let ks: Vec<usize> = ks.collect();
    let entries: Vec<Vec<ScanEntry>> = ks
        .par_iter()
        .map(|&k| match nodal_tower(m, curve, k) {
            Ok(t) => {
                let dk = t.pullback(d);
                std::iter::once(&t.flag)
                    .chain(t.variant_flag.as_ref())
                    .map(|f| ScanEntry::run(&dk, f, &t.tower_model, Some(k)))
                    .collect()
            }
            Err(e) => vec![ScanEntry {
                flag: format!("{curve} tower"),
                tower_k: Some(k),
                total: None,
                census: None,
                verdicts: Vec::new(),
                error: Some(e.to_string()),
                polygon: None,
            }],
        })
        .collect();
    ScanResult::from_entries(entries.into_iter().flatten().collect())
}

/// Concatenation keeping both orders.
pub fn merge(a: ScanResult, b: ScanResult) -> ScanResult {
    ScanResult::from_entries(a.entries.into_iter().chain(b.entries).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fix_dp7, fix_p2};

    fn hist(r: &ScanResult) -> Vec<(usize, usize)> {
        r.histogram.iter().map(|(a, b)| (*a, *b)).collect()
    }

    #[test]
    fn dp7_examples() {
        let m = fix_dp7();
        let flags = flags_on(&m, "E_p").unwrap();
        assert_eq!(flags.len(), 3);
        assert_eq!(
            hist(&scan(&DivisorClass::from_ints(&[1, 1, 0]), &m, &flags)),
            [(3, 1), (4, 2)]
        );
        let r = scan(&DivisorClass::from_ints(&[2, 1, 0]), &m, &flags);
        assert_eq!(hist(&r), [(4, 3)]);
        assert!(r.all_passed());
    }

    #[test]
    fn p2_single_flag() {
        let m = fix_p2();
        let r = scan(&DivisorClass::from_ints(&[1]), &m, &flag_universe(&m));
        assert_eq!(hist(&r), [(3, 1)]);
    }

    #[test]
    fn universe_counts_partners() {
        let m = fix_dp7();
        let names: Vec<String> = flag_universe(&m).iter().map(FlagSpec::describe).collect();
        assert_eq!(
            names,
            [
                "E_p@generic",
                "E_p@{F1:1}",
                "E_p@{F2:1}",
                "F1@generic",
                "F1@{E_p:1}",
                "F2@generic",
                "F2@{E_p:1}"
            ]
        );
    }

    #[test]
    fn tower_window_on_the_cubic() {
        let m = crate::model::p2_nodal_cubic();
        let r = scan_towers(&DivisorClass::from_ints(&[1]), &m, "C", 7..=8);
        assert_eq!(r.entries.len(), 4);
        assert!(r.entries.iter().all(|e| e.census.unwrap().interior >= 2));
    }
}
