//! Declarative run configuration: a TOML file with one section per
//! subcommand plus top-level defaults. Command-line flags always win.

use serde::Deserialize;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub strict: Option<bool>,
    #[serde(default)]
    pub analyze: AnalyzeSection,
    #[serde(default)]
    pub green: GreenSection,
    #[serde(default)]
    pub orlicz: OrliczSection,
    #[serde(default)]
    pub simulate: SimulateSection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeSection {
    pub alpha: Option<f64>,
    pub weight: Option<String>,
    pub gamma_grid: Option<Vec<f64>>,
    pub epsilons: Option<Vec<f64>>,
    pub xis: Option<Vec<f64>>,
    pub csv: Option<bool>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenSection {
    pub alpha: Option<f64>,
    pub weight: Option<String>,
    pub ns: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrliczSection {
    pub alpha: Option<f64>,
    pub weight: Option<String>,
    pub nfunction: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub alpha: Option<f64>,
    pub weight: Option<String>,
    pub paths: Option<usize>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub probes: Option<Vec<f64>>,
    pub burn_in: Option<f64>,
    pub y0: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config '{path}': {e}"))?;
        toml::from_str(&text).map_err(|e| format!("config '{path}': {e}"))
    }
}
