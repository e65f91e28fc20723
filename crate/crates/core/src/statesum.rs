//! The state sum: every crossing is resolved as O or W, each state
//! contributes its phase times the evaluation of its web.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{LinkDiagram, Sign};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::seifert::SeifertGraph;
use crate::web::Evaluator;

pub use crate::diagram::{Resolution, State};

pub const DEFAULT_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateWeight {
    pub alpha_plus: usize,
    pub beta_plus: usize,
    pub alpha_minus: usize,
    pub beta_minus: usize,
    pub phase: LaurentPoly,
    pub web_value: LaurentPoly,
    pub weight: LaurentPoly,
}

/// State-sum engine with a shared web-evaluation cache.
#[derive(Debug)]
pub struct StateSum {
    pub cap: usize,
    evaluator: Evaluator,
}

impl Default for StateSum {
    fn default() -> Self {
        Self::new()
    }
}

/// `(-1)^(b+ + b-) q^(-2(a+ - a-) - 3(b+ - b-))`.
pub fn phase(d: &LinkDiagram, s: &State) -> (usize, usize, usize, usize, LaurentPoly) {
    let (mut ap, mut bp, mut am, mut bm) = (0, 0, 0, 0);
    for (i, c) in d.crossings().iter().enumerate() {
        match (c.sign(), s.is_w(i)) {
            (Sign::Positive, false) => ap += 1,
            (Sign::Positive, true) => bp += 1,
            (Sign::Negative, false) => am += 1,
            (Sign::Negative, true) => bm += 1,
        }
    }
    let exp = -2 * (ap as i32 - am as i32) - 3 * (bp as i32 - bm as i32);
    let sign = if (bp + bm) % 2 == 0 { 1 } else { -1 };
    (ap, bp, am, bm, LaurentPoly::monomial(sign, exp))
}

/// Spanning subgraph of the Seifert graph with the W-resolved crossings' edges.
pub fn state_graph(d: &LinkDiagram, s: &State) -> SeifertGraph {
    SeifertGraph::of_diagram(d).spanning_subgraph(|c| s.is_w(c))
}

impl StateSum {
    pub fn new() -> Self {
        StateSum {
            cap: DEFAULT_CAP,
            evaluator: Evaluator::new(),
        }
    }

    pub fn with_cap(cap: usize) -> Self {
        StateSum {
            cap,
            evaluator: Evaluator::new(),
        }
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn state_weight(&self, d: &LinkDiagram, s: &State) -> Result<StateWeight> {
        let (alpha_plus, beta_plus, alpha_minus, beta_minus, phase) = phase(d, s);
        let web_value = self.evaluator.evaluate(&d.state_web(s))?;
        let weight = &phase * &web_value;
        Ok(StateWeight {
            alpha_plus,
            beta_plus,
            alpha_minus,
            beta_minus,
            phase,
            web_value,
            weight,
        })
    }

    /// `Σ_s φ(s)⟨⟨W(s)⟩⟩` over all `2^e` states, in parallel.
    pub fn invariant(&self, d: &LinkDiagram) -> Result<LaurentPoly> {
        let e = d.num_crossings();
        if e > self.cap || e > 62 {
            return Err(Error::CapExceeded { count: e, cap: self.cap.min(62) });
        }
        (0..1u64 << e)
            .into_par_iter()
            .map(|m| self.state_weight(d, &State::from_mask(e, m)).map(|w| w.weight))
            .try_reduce(LaurentPoly::zero, |a, b| Ok(a + b))
    }

    /// Max exponent of the state's weight.
    pub fn degree(&self, d: &LinkDiagram, s: &State) -> Result<i32> {
        let w = self.state_weight(d, s)?;
        w.weight
            .degree()
            .ok_or_else(|| Error::InvalidWeb("state web evaluates to zero".into()))
    }

    /// Random single O-to-W flips on a positive diagram. Records how the
    /// state degree and the web degree change.
    pub fn ow_move_experiment(&self, d: &LinkDiagram, trials: usize, seed: u64) -> Result<OwExperimentReport> {
        if !d.is_positive() {
            return Err(Error::Precondition("OW-move experiment needs a positive diagram".into()));
        }
        let e = d.num_crossings();
        if e == 0 {
            return Err(Error::Precondition("diagram has no crossings".into()));
        }
        if e > 62 {
            return Err(Error::CapExceeded { count: e, cap: 62 });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut report = OwExperimentReport::default();
        while report.trials < trials {
            let mask: u64 = rng.gen::<u64>() & ((1u64 << e) - 1);
            if mask.count_ones() as usize == e {
                continue;
            }
            let zeros: Vec<usize> = (0..e).filter(|&i| mask >> i & 1 == 0).collect();
            let flip = zeros[rng.gen_range(0..zeros.len())];
            let s = State::from_mask(e, mask);
            let t = State::from_mask(e, mask | 1 << flip);
            let ws = self.state_weight(d, &s)?;
            let wt = self.state_weight(d, &t)?;
            let delta = wt.weight.degree().unwrap() - ws.weight.degree().unwrap();
            let web_delta = wt.web_value.degree().unwrap() - ws.web_value.degree().unwrap();
            *report.degree_changes.entry(delta).or_default() += 1;
            *report.web_degree_changes.entry(web_delta).or_default() += 1;
            if delta != 0 && delta != -2 {
                report.violations += 1;
            }
            if web_delta.abs() != 1 {
                report.web_violations += 1;
            }
            report.trials += 1;
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OwExperimentReport {
    pub trials: usize,
    /// `d(s') - d(s)` histogram.
    pub degree_changes: BTreeMap<i32, usize>,
    /// `deg⟨⟨W(s')⟩⟩ - deg⟨⟨W(s)⟩⟩` histogram.
    pub web_degree_changes: BTreeMap<i32, usize>,
    pub violations: usize,
    pub web_violations: usize,
}

/// State sum with a fresh engine and the default cap.
pub fn invariant(d: &LinkDiagram) -> Result<LaurentPoly> {
    StateSum::new().invariant(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3() -> LaurentPoly {
        LaurentPoly::qint3()
    }

    fn trefoil() -> LinkDiagram {
        LinkDiagram::from_braid_word(&[1, 1, 1], 2).unwrap()
    }

    #[test]
    fn unknots() {
        assert_eq!(invariant(&LinkDiagram::unknot()).unwrap(), q3());
        assert_eq!(invariant(&LinkDiagram::from_braid_word(&[1], 2).unwrap()).unwrap(), q3());
        assert_eq!(invariant(&LinkDiagram::from_braid_word(&[-1], 2).unwrap()).unwrap(), q3());
        assert_eq!(invariant(&LinkDiagram::from_braid_word(&[1, -1], 2).unwrap()).unwrap(), q3() * q3());
    }

    #[test]
    fn trefoil_value() {
        // [3] * (q^-4 + q^-8 - q^-12), expanded by hand
        let want: LaurentPoly = "q^-2 + q^-4 + 2*q^-6 + q^-8 - q^-12 - q^-14".parse().unwrap();
        assert_eq!(invariant(&trefoil()).unwrap(), want);
    }

    #[test]
    fn trefoil_state_weights() {
        let ss = StateSum::new();
        let d = trefoil();
        let o = ss.state_weight(&d, &State::all(3, Resolution::O)).unwrap();
        assert_eq!(o.weight, (q3() * q3()).shift(-6));
        let w = ss.state_weight(&d, &State::all(3, Resolution::W)).unwrap();
        assert_eq!((w.alpha_plus, w.beta_plus), (0, 3));
        assert_eq!(w.phase, LaurentPoly::monomial(-1, -9));
        let m = ss.state_weight(&d.mirror(), &State::all(3, Resolution::O)).unwrap();
        assert_eq!(m.phase, LaurentPoly::monomial(1, 6));
    }

    #[test]
    fn state_graphs() {
        let d = trefoil();
        let g = state_graph(&d, &State::all(3, Resolution::O));
        assert_eq!((g.num_vertices, g.num_edges()), (2, 0));
        let g = state_graph(&d, &State::all(3, Resolution::W));
        assert_eq!(g.num_edges(), 3);
        let g = state_graph(&d, &State::from_mask(3, 0b010));
        assert_eq!((g.num_vertices, g.num_edges()), (2, 1));
    }

    #[test]
    fn degrees_on_positive_diagram() {
        let ss = StateSum::new();
        let d = trefoil();
        let (v, e) = (2, 3);
        assert_eq!(ss.degree(&d, &State::all(3, Resolution::O)).unwrap(), 2 * (v - e));
        for i in 0..3 {
            assert_eq!(ss.degree(&d, &State::from_mask(3, 1 << i)).unwrap(), 2 * (v - e - 1));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let d = LinkDiagram::from_braid_word(&[1; 5], 2).unwrap();
        assert!(matches!(StateSum::with_cap(4).invariant(&d), Err(Error::CapExceeded { count: 5, cap: 4 })));
    }

    #[test]
    fn ow_experiment_on_trefoil() {
        let ss = StateSum::new();
        let r = ss.ow_move_experiment(&trefoil(), 200, 1).unwrap();
        assert_eq!(r.trials, 200);
        assert_eq!(r.violations, 0);
        assert_eq!(r.web_violations, 0);
        assert!(ss.ow_move_experiment(&trefoil().mirror(), 1, 1).is_err());
    }
}
