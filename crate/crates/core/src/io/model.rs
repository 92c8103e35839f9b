use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lscn::LscnModel;

pub const MODEL_FORMAT: &str = "cslam-lscn";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format: String,
    version: u32,
    model: LscnModel,
}

pub fn model_to_json(model: &LscnModel) -> Result<String> {
    let file = ModelFile {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        model: model.clone(),
    };
    serde_json::to_string_pretty(&file).map_err(|e| Error::InvalidConfig(e.to_string()))
}

pub fn model_from_json(text: &str) -> Result<LscnModel> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::format(e.line(), e.to_string()))?;
    if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
        return Err(Error::format(
            1,
            format!("unsupported model file {} v{}", file.format, file.version),
        ));
    }
    file.model.validate()?;
    Ok(file.model)
}

pub fn write_model(path: impl AsRef<Path>, model: &LscnModel) -> Result<()> {
    std::fs::write(path, model_to_json(model)?)?;
    Ok(())
}

pub fn read_model(path: impl AsRef<Path>) -> Result<LscnModel> {
    model_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::FeatureScaler;
    use crate::lscn::Architecture;
    use crate::rng::rng_for;

    #[test]
    fn round_trip_is_exact() {
        let rows = vec![vec![0.1, 2.0, -3.0, 4.0, 5.5, 6.0], vec![1.0, 0.0, 3.0, 1e-7, 2.0, -1.0]];
        let scaler = FeatureScaler::fit(&rows).unwrap();
        let m = LscnModel::new(2, Architecture::default(), scaler, &mut rng_for(3, 5, 0)).unwrap();
        let back = model_from_json(&model_to_json(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_other_versions() {
        let m = LscnModel::zeros(1, Architecture::default()).unwrap();
        let text = model_to_json(&m).unwrap().replace("\"version\": 1", "\"version\": 9");
        assert!(matches!(model_from_json(&text), Err(Error::Format { .. })));
        assert!(matches!(model_from_json("{"), Err(Error::Format { .. })));
    }
}
