//! Named diagram collections in TOML, with optional expected Seifert data.
//!
//! ```toml
//! [[diagram]]
//! name = "3_1"
//! braid = "2:[1,1,1]"        # or pd = "X[...]", or pd_file = "knot.pd"
//! [diagram.expect]
//! theta = 0
//! gamma3 = 2
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{verify_with_polynomial, Check, TheoremReport};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::statesum::StateSum;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(default)]
    pub braid: Option<String>,
    #[serde(default)]
    pub pd: Option<String>,
    #[serde(default)]
    pub pd_file: Option<PathBuf>,
    /// Expected values keyed by `v`, `e`, `e_prime`, `mu`, `theta`, `gamma1`,
    /// `gamma2`, `gamma3` or `n`.
    #[serde(default)]
    pub expect: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    #[serde(default, rename = "diagram")]
    pub entries: Vec<CorpusEntry>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl CorpusEntry {
    pub fn diagram(&self, base_dir: &Path) -> Result<LinkDiagram> {
        match (&self.braid, &self.pd, &self.pd_file) {
            (Some(b), None, None) => LinkDiagram::from_braid_str(b),
            (None, Some(p), None) => LinkDiagram::from_pd_str(p),
            (None, None, Some(f)) => LinkDiagram::from_pd_str(&std::fs::read_to_string(base_dir.join(f))?),
            _ => Err(Error::Parse(format!(
                "corpus entry {} needs exactly one of braid, pd, pd_file",
                self.name
            ))),
        }
    }
}

impl Corpus {
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut c: Corpus = toml::from_str(text).map_err(|e| Error::Parse(format!("corpus: {e}")))?;
        c.base_dir = base_dir.to_path_buf();
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn diagrams(&self) -> Result<Vec<(String, LinkDiagram)>> {
        self.entries
            .iter()
            .map(|e| Ok((e.name.clone(), e.diagram(&self.base_dir)?)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusResult {
    pub name: String,
    pub theorems: TheoremReport,
    /// Comparisons against the entry's `expect` table.
    pub expected: Vec<Check>,
}

impl CorpusResult {
    pub fn passed(&self) -> bool {
        self.theorems.passed() && self.expected.iter().all(Check::passed)
    }
}

fn observed(r: &TheoremReport, key: &str) -> Result<i64> {
    let s = &r.stats;
    Ok(match key {
        "v" => s.v as i64,
        "e" => s.e as i64,
        "e_prime" => s.e_prime as i64,
        "mu" => s.mu as i64,
        "theta" => s.theta as i64,
        "n" => r.gammas.n as i64,
        "gamma1" => r.gammas.gamma1,
        "gamma2" => r.gammas.gamma2,
        "gamma3" => r.gammas.gamma3,
        _ => return Err(Error::Parse(format!("unknown expectation key {key:?}"))),
    })
}

/// Coefficient-theorem checks on every entry, plus the entry's own
/// expectations. Entries are processed in parallel.
pub fn verify_corpus(corpus: &Corpus, ss: &StateSum) -> Result<Vec<CorpusResult>> {
    corpus
        .entries
        .par_iter()
        .map(|entry| {
            let d = entry.diagram(&corpus.base_dir)?;
            let p = ss.invariant(&d)?;
            let theorems = verify_with_polynomial(&d, &p)?;
            let expected = entry
                .expect
                .iter()
                .map(|(k, &want)| Ok(Check::new(format!("expected {k}"), want, observed(&theorems, k)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(CorpusResult {
                name: entry.name.clone(),
                theorems,
                expected,
            })
        })
        .collect()
}
