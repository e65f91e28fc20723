//! Provenance stamped into emitted reports.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::homfly::ConventionConfig;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMeta {
    pub engine_version: String,
    /// SHA-256 of the convention config in canonical TOML form.
    pub conventions_hash: String,
}

pub fn conventions_hash(cfg: &ConventionConfig) -> String {
    let digest = Sha256::digest(cfg.to_toml_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl RunMeta {
    pub fn new(cfg: &ConventionConfig) -> Self {
        RunMeta {
            engine_version: ENGINE_VERSION.to_string(),
            conventions_hash: conventions_hash(cfg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_tracks_config() {
        let a = ConventionConfig::default();
        let b = ConventionConfig {
            invert_a: true,
            ..Default::default()
        };
        assert_eq!(conventions_hash(&a), conventions_hash(&a.clone()));
        assert_ne!(conventions_hash(&a), conventions_hash(&b));
        assert_eq!(conventions_hash(&a).len(), 64);
    }
}
