use std::fs;
use std::path::Path;

use nobody::model::{
    fix_dp7, fix_p2, fix_tower7, p2_nodal_cubic, quadric_nodal, validate_model, ModelFile,
    SurfaceModel,
};

use crate::commands::Failure;

pub fn fixture(name: &str) -> Option<SurfaceModel> {
    Some(match name {
        "p2" => fix_p2(),
        "dp7" => fix_dp7(),
        "tower7" => fix_tower7(),
        "p2-nodal-cubic" => p2_nodal_cubic(),
        "quadric-nodal" => quadric_nodal(),
        _ => return None,
    })
}

pub fn read_model_file(path: &Path) -> Result<ModelFile, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    ModelFile::from_json(&text).map_err(|e| Failure::from(e).context(&path.display().to_string()))
}

/// Loads and validates the model named by `--model`.
pub fn model(arg: Option<&str>) -> Result<(SurfaceModel, ModelFile), Failure> {
    let arg = arg.ok_or_else(|| Failure::usage("this command needs --model"))?;
    let file = match arg.strip_prefix("fixture:") {
        Some(name) => {
            let m = fixture(name)
                .ok_or_else(|| Failure::usage(&format!("unknown fixture {name:?}")))?;
            ModelFile::from_model(&m)
        }
        None => read_model_file(Path::new(arg))?,
    };
    let m = file.clone().into_model()?;
    validate_model(&m).into_result()?;
    Ok((m, file))
}
