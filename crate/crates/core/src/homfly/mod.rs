//! HOMFLY polynomial by skein recursion toward descending diagrams, and its
//! specialization to the sl3 invariant.
//!
//! Convention: `a^-1 P(L+) - a P(L-) = z P(L0)` with `P(unknot) = 1`.

mod knotinfo;
mod poly;

use dashmap::DashMap;

use crate::diagram::{LinkDiagram, Sign};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

pub use knotinfo::{
    calibrate, load_knotinfo_csv, orient_positive, parse_knotinfo_homfly, Calibration, ConventionConfig,
    KnotInfoRow, CONVENTION_ENV,
};
pub use poly::HomflyPoly;

/// Default crossing cap for the skein engine.
pub const DEFAULT_HOMFLY_CAP: usize = 24;

/// Skein engine with a memo keyed by diagram encoding.
#[derive(Debug)]
pub struct HomflyEngine {
    pub cap: usize,
    memo: DashMap<Vec<u32>, HomflyPoly>,
}

impl Default for HomflyEngine {
    fn default() -> Self {
        Self::new()
    }
}

/// The value of a `k`-component unlink, `((a^-1 - a)/z)^(k-1)`.
pub fn unlink_value(k: usize) -> Result<HomflyPoly> {
    if k == 0 {
        return Err(Error::Precondition("empty diagram has no HOMFLY polynomial".into()));
    }
    let numer = HomflyPoly::monomial(1, -1, 0) - HomflyPoly::monomial(1, 1, 0);
    let delta = numer
        .div_monomial(1, 0, 1)
        .ok_or_else(|| Error::InexactDivision("(a^-1 - a) by z".into()))?;
    Ok(delta.pow(k as u32 - 1))
}

impl HomflyEngine {
    pub fn new() -> Self {
        Self::with_cap(DEFAULT_HOMFLY_CAP)
    }

    pub fn with_cap(cap: usize) -> Self {
        HomflyEngine {
            cap,
            memo: DashMap::new(),
        }
    }

    pub fn cache_len(&self) -> usize {
        self.memo.len()
    }

    pub fn homfly(&self, d: &LinkDiagram) -> Result<HomflyPoly> {
        if d.num_crossings() > self.cap {
            return Err(Error::CapExceeded {
                count: d.num_crossings(),
                cap: self.cap,
            });
        }
        self.recurse(d)
    }

    fn recurse(&self, d: &LinkDiagram) -> Result<HomflyPoly> {
        let key = d.encoding_key();
        if let Some(p) = self.memo.get(&key) {
            return Ok(p.clone());
        }
        let value = match first_descent_violation(d) {
            None => unlink_value(d.num_link_components())?,
            Some(i) => {
                let switched = self.recurse(&d.switch_crossing(i))?;
                let smoothed = self.recurse(&d.smooth_crossing(i))?;
                match d.crossing(i).sign() {
                    // P+ = a^2 P- + a z P0
                    Sign::Positive => switched.mul_monomial(1, 2, 0) + smoothed.mul_monomial(1, 1, 1),
                    // P- = a^-2 P+ - a^-1 z P0
                    Sign::Negative => switched.mul_monomial(1, -2, 0) + smoothed.mul_monomial(-1, -1, 1),
                }
            }
        };
        self.memo.insert(key, value.clone());
        Ok(value)
    }
}

/// First crossing met from below, walking the components in order from their
/// base arcs. `None` means the diagram is descending, hence an unlink.
pub fn first_descent_violation(d: &LinkDiagram) -> Option<usize> {
    let mut seen = vec![false; d.num_crossings()];
    for comp in d.components() {
        for &arc in &comp {
            let (c, slot) = d.arc_ends(arc).head;
            if !seen[c] {
                if slot == 0 {
                    return Some(c);
                }
                seen[c] = true;
            }
        }
    }
    None
}

/// HOMFLY polynomial with a fresh engine.
pub fn homfly(d: &LinkDiagram) -> Result<HomflyPoly> {
    HomflyEngine::new().homfly(d)
}

/// `[3] * P(q^-3, q - q^-1)`, with negative powers of `z` cleared by an
/// exact division at the end.
pub fn specialize_sl3(p: &HomflyPoly) -> Result<LaurentPoly> {
    let shift = p.terms().map(|((_, z), _)| -z).max().unwrap_or(0).max(0);
    let zq = LaurentPoly::q() - LaurentPoly::monomial(1, -1);
    let mut acc = LaurentPoly::zero();
    for ((a, z), c) in p.terms() {
        acc += zq.pow((z + shift) as u32).shift(-3 * a).scale(c);
    }
    let acc = acc * LaurentPoly::qint3();
    acc.div_exact(&zq.pow(shift as u32))
        .ok_or_else(|| Error::InexactDivision(format!("specialization of {p} by (q - q^-1)^{shift}")))
}

/// Both engines on one diagram.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct OracleComparison {
    pub state_sum: LaurentPoly,
    pub homfly: HomflyPoly,
    pub specialized: LaurentPoly,
    pub equal: bool,
}

pub fn oracle_compare(d: &LinkDiagram, ss: &crate::statesum::StateSum, hf: &HomflyEngine) -> Result<OracleComparison> {
    let state_sum = ss.invariant(d)?;
    let homfly = hf.homfly(d)?;
    let specialized = specialize_sl3(&homfly)?;
    Ok(OracleComparison {
        equal: state_sum == specialized,
        state_sum,
        homfly,
        specialized,
    })
}
