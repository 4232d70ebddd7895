use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde_json::{json, Value};

use nobody::birational::{blow_up, nodal_tower, tower_min_k, tower_reference_values, PointSpec};
use nobody::invariants::{bound_report, mv_null_of, mv_of, BigClassData};
use nobody::model::{
    parse_divisor, parse_flag, validate_model, DivisorClass, ModelFile, SurfaceModel,
};
use nobody::okounkov::{polygon, render};
use nobody::suite::{
    flag_universe, flags_on, merge, random_big_class, reference_check, rng, run_suite, scan,
    scan_towers, ScanResult, SuiteConfig,
};
use nobody::zariski::{null_of, positivity, zariski_decompose};
use nobody::Error;

use crate::load;
use crate::{Cli, Command, Format};

const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;
const EXIT_VERIFY: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn io(message: String) -> Self {
        Failure {
            code: EXIT_PARSE,
            message,
        }
    }

    pub fn usage(message: &str) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::ModelInconsistency(_) => EXIT_INCONSISTENT,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Prints a line; a closed pipe (`| head`) is not an error.
fn say(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn names(m: &SurfaceModel, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| m.curve(i).name.clone()).collect()
}

fn coords(d: &DivisorClass) -> Vec<String> {
    d.coords().iter().map(ToString::to_string).collect()
}

/// Writes `files` into `--out`, or prints the one matching `--format`.
fn emit(cli: &Cli, files: &[(&str, Format, String)]) -> Result<(), Failure> {
    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?;
            for (name, fmt, body) in files {
                if *fmt == Format::Json || *fmt == cli.format {
                    let path = dir.join(name);
                    fs::write(&path, body)
                        .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
                    eprintln!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        None => {
            let (_, _, body) =
                files
                    .iter()
                    .find(|(_, f, _)| *f == cli.format)
                    .ok_or_else(|| {
                        Failure::usage(&format!("--format {:?} is not available here", cli.format))
                    })?;
            say(body.trim_end_matches('\n'));
            Ok(())
        }
    }
}

pub fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    if let Command::Verify { dir } = &cli.command {
        return verify(cli, dir.as_deref());
    }
    if let Command::Validate = &cli.command {
        return validate(cli);
    }
    let (m, file) = load::model(cli.model.as_deref())?;
    match &cli.command {
        Command::Decompose { divisor } => {
            let d = parse_divisor(divisor, &m)?;
            let z = zariski_decompose(&d, &m)?;
            let status = positivity(&d, &m);
            let v = json!({
                "divisor": coords(&d),
                "P": coords(&z.positive),
                "N": serde_json::to_value(&z.negative).expect("serializes"),
                "null": names(&m, &null_of(&z, &m)),
                "neg": names(&m, &z.support()),
                "P_squared": m.square(&z.positive).to_string(),
                "big": status.big,
                "nef": status.nef_in_model,
            });
            emit(cli, &[("decomposition.json", Format::Json, pretty(&v))])?;
        }
        Command::Body { divisor, flag } => {
            let d = parse_divisor(divisor, &m)?;
            let p = polygon(&d, &parse_flag(flag)?, &m)?;
            emit(
                cli,
                &[
                    ("polygon.json", Format::Json, p.to_json()),
                    ("polygon.csv", Format::Csv, render::to_csv(&p)),
                    ("polygon.svg", Format::Svg, render::to_svg(&p)),
                ],
            )?;
        }
        Command::Invariants { divisor, flag } => {
            let d = parse_divisor(divisor, &m)?;
            let data = BigClassData::new(&d, &m)?;
            let mut v = json!({
                "rho": data.rho,
                "rho_D": data.rho_d,
                "null": names(&m, &data.null),
                "mv": mv_of(&data, &m)?,
                "mv_null": mv_null_of(&data, &m),
            });
            let mut passed = true;
            if let Some(flag) = flag {
                let flag = parse_flag(flag)?;
                let p = polygon(&d, &flag, &m)?;
                let report = bound_report(&d, &flag, &p, &m)?;
                passed = report.all_passed();
                v["bounds"] = serde_json::to_value(&report).expect("serializes");
            }
            emit(cli, &[("invariants.json", Format::Json, pretty(&v))])?;
            if !passed {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
        Command::Mv { divisor } => {
            let d = parse_divisor(divisor, &m)?;
            let data = BigClassData::new(&d, &m)?;
            let v = json!({ "mv": mv_of(&data, &m)?, "mv_null": mv_null_of(&data, &m) });
            emit(cli, &[("mv.json", Format::Json, pretty(&v))])?;
        }
        Command::Blowup { name, on } => {
            let mut through = Vec::new();
            for spec in on {
                let (curve, mult) = spec.rsplit_once(':').ok_or_else(|| {
                    Failure::usage(&format!("--on expects CURVE:mult, got {spec:?}"))
                })?;
                let mult: u32 = mult
                    .trim()
                    .parse()
                    .map_err(|_| Failure::usage(&format!("bad multiplicity in {spec:?}")))?;
                through.push((curve.trim().to_string(), mult));
            }
            let point = PointSpec {
                on_curves: through,
                ..PointSpec::general(name.clone())
            };
            let blown = blow_up(&m, &point)?;
            emit(
                cli,
                &[(
                    "model.json",
                    Format::Json,
                    ModelFile::from_model(&blown).to_json(),
                )],
            )?;
        }
        Command::Tower { curve, k, divisor } => {
            let t = nodal_tower(&m, curve, *k)?;
            let d = match divisor {
                Some(s) => parse_divisor(s, &m)?,
                None => m.ample().clone(),
            };
            let reference = tower_reference_values(&d, curve, *k, &m)?;
            let provenance = json!({
                "base_model": serde_json::to_value(&file).expect("serializes"),
                "curve": curve,
                "k": k,
                "divisor": coords(&d),
                "flag": t.flag.describe(),
                "variant_flag": t.variant_flag.as_ref().map(|f| f.describe()),
                "min_k": tower_min_k(&d, curve, &m).ok(),
                "reference": serde_json::to_value(&reference).expect("serializes"),
            });
            let model = ModelFile::from_model(&t.tower_model);
            match &cli.out {
                Some(_) => emit(
                    cli,
                    &[
                        ("tower_model.json", Format::Json, model.to_json()),
                        ("provenance.json", Format::Json, pretty(&provenance)),
                    ],
                )?,
                None => {
                    let v = json!({ "model": serde_json::to_value(&model).expect("serializes"), "provenance": provenance });
                    emit(cli, &[("tower.json", Format::Json, pretty(&v))])?;
                }
            }
        }
        Command::Scan {
            divisor,
            on,
            tower_curve,
            k_range,
        } => {
            let d = parse_divisor(divisor, &m)?;
            let flags = match on {
                Some(c) => flags_on(&m, c)?,
                None => flag_universe(&m),
            };
            let mut res = scan(&d, &m, &flags);
            if let Some(c) = tower_curve {
                let ks = match k_range {
                    Some(r) => parse_range(r)?,
                    None => {
                        let k0 = tower_min_k(&d, c, &m)?;
                        (k0, k0 + 10)
                    }
                };
                res = merge(res, scan_towers(&d, &m, c, ks.0..=ks.1));
            }
            emit(
                cli,
                &[
                    ("scan.json", Format::Json, res.to_json()),
                    ("scan.csv", Format::Csv, scan_csv(&res)),
                ],
            )?;
            if !res.all_passed() && res.errors().next().is_none() {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
        Command::Validate | Command::Verify { .. } => unreachable!("handled above"),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::usage(&format!("--k-range expects LO..HI, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn scan_csv(r: &ScanResult) -> String {
    let mut out = String::from("flag,tower_k,total,leftmost,interior,rightmost,passed,error\n");
    for e in &r.entries {
        let c = e.census.unwrap_or_default();
        let total = e.total.map(|t| t.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "\"{}\",{},{},{},{},{},{},\"{}\"\n",
            e.flag,
            e.tower_k.map(|k| k.to_string()).unwrap_or_default(),
            total,
            c.leftmost,
            c.interior,
            c.rightmost,
            e.passed(),
            e.error.clone().unwrap_or_default().replace('"', "'")
        ));
    }
    out
}

fn validate(cli: &Cli) -> Result<ExitCode, Failure> {
    let arg = cli
        .model
        .as_deref()
        .ok_or_else(|| Failure::usage("validate needs --model"))?;
    let file = match arg.strip_prefix("fixture:") {
        Some(name) => ModelFile::from_model(
            &load::fixture(name)
                .ok_or_else(|| Failure::usage(&format!("unknown fixture {name:?}")))?,
        ),
        None => load::read_model_file(Path::new(arg))?,
    };
    let m = file.into_model()?;
    let report = validate_model(&m);
    if !report.is_valid() {
        for v in &report.violations {
            eprintln!("violation: {v}");
        }
        return Err(report.into_result().expect_err("invalid").into());
    }
    let v = json!({
        "valid": true,
        "rank": m.rank(),
        "curves": m.curves().iter().map(|c| c.name.clone()).collect::<Vec<_>>(),
        "negative_candidates": names(&m, &m.negative_candidates()),
    });
    emit(cli, &[("validation.json", Format::Json, pretty(&v))])?;
    Ok(ExitCode::SUCCESS)
}

fn row(file: &str, check: &str, ok: bool, detail: &str) -> String {
    format!(
        "{file:<28} {check:<44} {} {detail}",
        if ok { "PASS" } else { "FAIL" }
    )
}

/// Checks one model file: validity, its reference polygons, and the vertex
/// bounds over the scan universe for the ample witness and three seeded
/// random big classes.
fn verify_file(path: &Path, seed: u64) -> (Vec<String>, bool) {
    let label = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut lines = Vec::new();
    let mut ok = true;
    let file = match load::read_model_file(path) {
        Ok(f) => f,
        Err(e) => return (vec![row(&label, "parse", false, &e.message)], false),
    };
    let references = file.references.clone();
    let m = match file
        .into_model()
        .and_then(|m| validate_model(&m).into_result().map(|_| m))
    {
        Ok(m) => m,
        Err(e) => return (vec![row(&label, "validate", false, &e.to_string())], false),
    };
    lines.push(row(&label, "validate", true, ""));
    for r in &references {
        let check = format!("reference {} {}", r.divisor, r.flag);
        let out = parse_divisor(&r.divisor, &m)
            .and_then(|d| parse_flag(&r.flag).map(|f| (d, f)))
            .and_then(|(d, f)| reference_check(&d, &f, &m, &r.vertices));
        match out {
            Ok(p) => lines.push(row(
                &label,
                &check,
                true,
                &format!("{} vertices", p.census.total),
            )),
            Err(e) => {
                ok = false;
                lines.push(row(&label, &check, false, &e.to_string()));
            }
        }
    }
    let mut r = rng(seed);
    let mut classes = vec![m.ample().clone()];
    classes.extend((0..3).map(|_| random_big_class(&mut r, &m)));
    for d in classes {
        let res = scan(&d, &m, &flag_universe(&m));
        let passed = res.all_passed();
        ok &= passed;
        let detail = match res.entries.iter().find(|e| !e.passed()) {
            None => format!("{} flags, totals {:?}", res.entries.len(), res.histogram),
            Some(e) => match &e.error {
                Some(err) => format!("{}: {err}", e.flag),
                None => format!(
                    "{}: {:?}",
                    e.flag,
                    e.verdicts.iter().filter(|v| !v.passed).collect::<Vec<_>>()
                ),
            },
        };
        lines.push(row(
            &label,
            &format!("bounds D = [{}]", coords(&d).join(",")),
            passed,
            &detail,
        ));
    }
    (lines, ok)
}

fn verify(cli: &Cli, dir: Option<&Path>) -> Result<ExitCode, Failure> {
    let mut ok = true;
    if let Some(dir) = dir {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| Failure::io(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        if paths.is_empty() {
            say("nothing to verify");
            return Ok(ExitCode::SUCCESS);
        }
        for p in paths {
            let (lines, passed) = verify_file(&p, cli.seed);
            lines.iter().for_each(|l| say(l));
            ok &= passed;
        }
    } else if let Some(model) = cli.model.as_deref().filter(|m| !m.starts_with("fixture:")) {
        let (lines, passed) = verify_file(Path::new(model), cli.seed);
        lines.iter().for_each(|l| say(l));
        ok = passed;
    } else {
        let cfg = SuiteConfig {
            seed: cli.seed,
            ..SuiteConfig::default()
        };
        for r in run_suite(&cfg) {
            say(&r.line());
            for f in r.failures.iter().take(5) {
                say(&format!("    {f}"));
            }
            ok &= r.passed;
        }
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    })
}
