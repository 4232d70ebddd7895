//! Verification suites: seeded random models, a brute-force Zariski oracle,
//! flag scans and the acceptance criteria built from them.

mod criteria;
mod oracle;
mod random;
mod scan;

pub use criteria::{
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
    criterion_8, criterion_9, removed_curve_case, run_suite, CriterionReport, Run, SuiteConfig,
};
pub use oracle::{brute_force_zariski, OracleOutcome};
pub use random::{
    random_big_class, random_class, random_model, random_non_nef_big_class, rng, ModelShape,
};
pub use scan::{flag_universe, flags_on, merge, scan, scan_towers, ScanEntry, ScanResult};

use crate::error::{Error, Result};
use crate::model::{DivisorClass, FlagSpec, SurfaceModel};
use crate::okounkov::{polygon, OkounkovPolygon};

/// Recomputes a polygon and compares its vertices with `expected`.
///
/// A mismatch means the declared curves do not account for the true
/// chamber structure and is reported as [`Error::ModelInconsistency`].
pub fn reference_check(
    d: &DivisorClass,
    flag: &FlagSpec,
    m: &SurfaceModel,
    expected: &[[String; 2]],
) -> Result<OkounkovPolygon> {
    let p = polygon(d, flag, m)?;
    let got: Vec<[String; 2]> = p
        .vertices
        .iter()
        .map(|v| [v.x.to_string(), v.y.to_string()])
        .collect();
    if got != expected {
        let show = |xs: &[[String; 2]]| {
            xs.iter()
                .map(|[x, y]| format!("({x},{y})"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        return Err(Error::ModelInconsistency(format!(
            "polygon for {} has vertices {} but the reference lists {}",
            flag.describe(),
            show(&got),
            show(expected)
        )));
    }
    Ok(p)
}
