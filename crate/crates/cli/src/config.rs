// SPDX-License-Identifier: Apache-2.0

//! TOML run configuration. Every key can be overridden by a flag.
//!
//! ```toml
//! [paths]
//! gazetteer = "fixtures/gazetteer.tsv"
//! store = "fixtures/concepts.nt"
//! rules = "fixtures/rules_r1_r5.tsv"
//!
//! [params]
//! minsup = "1/5"
//! t = 4
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub paths: Paths,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub context: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub store: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub learning_base: Option<PathBuf>,
    pub social: Option<PathBuf>,
    pub diary: Option<PathBuf>,
    pub judgments: Option<PathBuf>,
    pub baseline_judgments: Option<PathBuf>,
    pub cases: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub minsup: Option<String>,
    pub minconf: Option<String>,
    pub t: Option<usize>,
    pub depth: Option<usize>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub category_prefix: Option<String>,
    pub cbr_weights: Option<[f64; 3]>,
    pub cbr_threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub lenient_foaf: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let p = &mut cfg.paths;
        for slot in [
            &mut p.context,
            &mut p.gazetteer,
            &mut p.store,
            &mut p.rules,
            &mut p.learning_base,
            &mut p.social,
            &mut p.diary,
            &mut p.judgments,
            &mut p.baseline_judgments,
            &mut p.cases,
        ] {
            if let Some(rel) = slot.as_mut() {
                if rel.is_relative() {
                    *rel = base.join(&*rel);
                }
            }
        }
        Ok(cfg)
    }
}
