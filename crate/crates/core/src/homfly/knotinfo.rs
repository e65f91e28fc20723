//! KnotInfo HOMFLY ingestion: variable dictionary, calibration, CSV rows.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{specialize_sl3, HomflyPoly};
use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::statesum::StateSum;

/// Environment variable naming the default convention file.
pub const CONVENTION_ENV: &str = "SL3KNOT_CONVENTIONS";

/// How KnotInfo's polynomial variables map onto `(a, z)` of the skein
/// convention used here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConventionConfig {
    pub a_var: String,
    pub z_var: String,
    /// Substitute `a -> a^-1` after parsing.
    pub invert_a: bool,
    /// Substitute `z -> -z` after parsing.
    pub negate_z: bool,
}

impl Default for ConventionConfig {
    fn default() -> Self {
        ConventionConfig {
            a_var: "v".into(),
            z_var: "z".into(),
            invert_a: false,
            negate_z: false,
        }
    }
}

impl ConventionConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("convention config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Parses a KnotInfo polynomial and maps it into the `(a, z)` convention.
pub fn parse_knotinfo_homfly(text: &str, cfg: &ConventionConfig) -> Result<HomflyPoly> {
    let mut p = HomflyPoly::parse_with(text.trim(), &cfg.a_var, &cfg.z_var)?;
    if cfg.invert_a {
        p = p.invert_a();
    }
    if cfg.negate_z {
        p = p.negate_z();
    }
    Ok(p)
}

/// Picks the chirality in which a knot's sl3 polynomial can come from a
/// positive diagram: all exponents of a positive link lie at or below 2, so
/// anything reaching higher is mirrored (`q -> q^-1`). Returns whether a
/// mirror was applied.
pub fn orient_positive(p: &LaurentPoly) -> (LaurentPoly, bool) {
    match p.degree() {
        Some(d) if d > 2 => (p.substitute_q_inverse(), true),
        _ => (p.clone(), false),
    }
}

/// Outcome of checking a convention against known diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Calibration {
    pub config: ConventionConfig,
    /// `(sample name, whether the table entry had to be mirrored)`.
    pub samples: Vec<(String, bool)>,
}

/// Verifies the convention: the constant `1` must specialize to `[3]`, and
/// every sample entry, after [`orient_positive`], must equal the state sum of
/// the given positive diagram.
pub fn calibrate(cfg: &ConventionConfig, samples: &[(&str, &str, LinkDiagram)]) -> Result<Calibration> {
    let unknot = specialize_sl3(&parse_knotinfo_homfly("1", cfg)?)?;
    if unknot != LaurentPoly::qint3() {
        return Err(Error::Calibration(format!("unknot specializes to {unknot}")));
    }
    if samples.is_empty() {
        return Err(Error::Calibration("no calibration samples".into()));
    }
    let ss = StateSum::new();
    let mut out = Vec::new();
    for (name, text, d) in samples {
        if !d.is_positive() {
            return Err(Error::Calibration(format!("sample {name} is not a positive diagram")));
        }
        let spec = specialize_sl3(&parse_knotinfo_homfly(text, cfg)?)?;
        let (oriented, mirrored) = orient_positive(&spec);
        let direct = ss.invariant(d)?;
        if oriented != direct {
            return Err(Error::Calibration(format!(
                "{name}: table gives {oriented}, state sum gives {direct}"
            )));
        }
        out.push((name.to_string(), mirrored));
    }
    Ok(Calibration {
        config: cfg.clone(),
        samples: out,
    })
}

/// One knot row of a KnotInfo export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotInfoRow {
    pub name: String,
    pub homfly: String,
    pub positive_braid: Option<bool>,
    pub positive_pd: Option<String>,
    pub braid: Option<String>,
}

fn flag(s: &str) -> Option<bool> {
    match s.trim() {
        "Y" | "y" | "Yes" | "yes" | "true" | "1" => Some(true),
        "N" | "n" | "No" | "no" | "false" | "0" => Some(false),
        _ => None,
    }
}

fn present(s: &str) -> Option<String> {
    let t = s.trim();
    (!t.is_empty() && !t.contains("not exist")).then(|| t.to_string())
}

/// Reads KnotInfo rows with at least `name` and `homfly_polynomial` columns.
/// The delimiter is `|` when the header contains one, otherwise `,`.
pub fn load_knotinfo_csv<R: Read>(mut reader: R) -> Result<Vec<KnotInfoRow>> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let header = text.lines().next().unwrap_or("");
    let delim = if header.contains('|') { b'|' } else { b',' };
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delim)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let name_col = col("name").ok_or_else(|| Error::Parse("CSV has no name column".into()))?;
    let homfly_col =
        col("homfly_polynomial").ok_or_else(|| Error::Parse("CSV has no homfly_polynomial column".into()))?;
    let (pb, pd, br) = (col("positive_braid"), col("positive_pd_notation"), col("braid_notation"));
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let get = |c: Option<usize>| c.and_then(|i| rec.get(i)).unwrap_or("");
        rows.push(KnotInfoRow {
            name: get(Some(name_col)).trim().to_string(),
            homfly: get(Some(homfly_col)).trim().to_string(),
            positive_braid: flag(get(pb)),
            positive_pd: present(get(pd)),
            braid: present(get(br)),
        });
    }
    Ok(rows)
}
