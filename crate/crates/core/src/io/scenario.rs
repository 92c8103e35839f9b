use std::path::Path;

use crate::error::{Error, Result};
use crate::slam::Scenario;

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| line_of(text, s.start));
        Error::format(line, e.message().trim().to_owned())
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Canonical text form; parsing it back yields the same scenario.
pub fn scenario_to_string(scenario: &Scenario) -> Result<String> {
    toml::to_string(scenario).map_err(|e| Error::InvalidScenario(e.to_string()))
}

pub fn read_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

pub fn write_scenario(path: impl AsRef<Path>, scenario: &Scenario) -> Result<()> {
    std::fs::write(path, scenario_to_string(scenario)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenes::{builtin_scenario, BUILTIN_SCENES};

    #[test]
    fn canonical_round_trip() {
        for name in BUILTIN_SCENES {
            let s = builtin_scenario(name).unwrap();
            let text = scenario_to_string(&s).unwrap();
            let back = parse_scenario(&text).unwrap();
            assert_eq!(back, s, "{name}");
            assert_eq!(scenario_to_string(&back).unwrap(), text);
        }
    }

    #[test]
    fn facet_list_scene() {
        let mut s = builtin_scenario("parallel-walls").unwrap();
        let mesh = s.validate().unwrap();
        s.scene = crate::slam::SceneSpec {
            builtin: None,
            facets: mesh.facets().iter().map(crate::slam::FacetSpec::from_facet).collect(),
        };
        let text = scenario_to_string(&s).unwrap();
        assert!(text.contains("[[scene.facets]]"));
        let back = parse_scenario(&text).unwrap();
        assert_eq!(back.validate().unwrap(), mesh);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = scenario_to_string(&builtin_scenario("open-field").unwrap()).unwrap();
        let broken = text.replacen("tx_power_dbm", "tx_power", 1);
        let expected = text.lines().position(|l| l.starts_with("tx_power_dbm")).unwrap() + 1;
        match parse_scenario(&broken) {
            Err(Error::Format { line, .. }) => assert_eq!(line, expected),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_scenario("scene = 3"), Err(Error::Format { line: 1, .. })));
    }

    #[test]
    fn inconsistent_scenario_rejected() {
        let mut s = builtin_scenario("box-room").unwrap();
        s.run.t += 1;
        let text = toml::to_string(&s).unwrap();
        assert!(matches!(parse_scenario(&text), Err(Error::InvalidScenario(_))));
    }
}
