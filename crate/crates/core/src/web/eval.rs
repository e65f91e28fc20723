use dashmap::DashMap;

use super::{Dart, VertexKind, Web};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

/// A formal sum of webs with Laurent coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WebExpression {
    pub terms: Vec<(LaurentPoly, Web)>,
}

impl WebExpression {
    pub fn single(coef: LaurentPoly, web: Web) -> Self {
        WebExpression {
            terms: vec![(coef, web)],
        }
    }
}

/// One applicable local relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Circle,
    Bubble(Vec<Dart>),
    Square(Vec<Dart>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionOrder {
    /// Circles, then bubbles, then squares; first found of each kind.
    Priority,
    /// Uniform choice among all applicable relations, driven by a seed.
    Random(u64),
}

/// All relations applicable to `w`, in priority order.
pub fn candidates(w: &Web) -> Vec<Reduction> {
    let mut out = Vec::new();
    if w.num_circles() > 0 {
        out.push(Reduction::Circle);
    }
    let faces = w.walk_faces();
    for f in &faces {
        if f.len() == 2 {
            out.push(Reduction::Bubble(f.clone()));
        }
    }
    for f in faces {
        if f.len() == 4 && is_simple_square(w, &f) {
            out.push(Reduction::Square(f));
        }
    }
    out
}

fn is_simple_square(w: &Web, f: &[Dart]) -> bool {
    let mut vs: Vec<usize> = f.iter().map(|&d| w.dart_start(d)).collect();
    let mut es: Vec<usize> = f.iter().map(|d| d.edge).collect();
    vs.sort_unstable();
    vs.dedup();
    es.sort_unstable();
    es.dedup();
    vs.len() == 4 && es.len() == 4
}

/// The edge at `v` that is not in `used`.
fn third_edge(w: &Web, v: usize, used: &[usize]) -> usize {
    w.rotation(v)
        .into_iter()
        .find(|e| !used.contains(e))
        .expect("vertex has no edge outside the face")
}

pub fn apply(w: &Web, r: &Reduction) -> WebExpression {
    match r {
        Reduction::Circle => {
            let mut out = w.clone();
            out.circles -= 1;
            WebExpression::single(LaurentPoly::qint3(), out)
        }
        Reduction::Bubble(face) => {
            let (e1, e2) = (face[0].edge, face[1].edge);
            let (s, t) = w.edge(e1);
            let out_of = third_edge(w, s, &[e1, e2]);
            let into = third_edge(w, t, &[e1, e2]);
            let web = w.splice(&[s, t], &[e1, e2], &[(into, out_of)]);
            WebExpression::single(LaurentPoly::qint2(), web)
        }
        Reduction::Square(face) => {
            let vs: Vec<usize> = face.iter().map(|&d| w.dart_start(d)).collect();
            let es: Vec<usize> = face.iter().map(|d| d.edge).collect();
            let ext: Vec<usize> = vs.iter().map(|&v| third_edge(w, v, &es)).collect();
            // Join the externals of two adjacent corners: sink's incoming
            // external continues along source's outgoing external.
            let join = |a: usize, b: usize| {
                if w.kind(vs[a]) == VertexKind::Sink {
                    (ext[a], ext[b])
                } else {
                    (ext[b], ext[a])
                }
            };
            let first = w.splice(&vs, &es, &[join(0, 1), join(2, 3)]);
            let second = w.splice(&vs, &es, &[join(1, 2), join(3, 0)]);
            WebExpression {
                terms: vec![(LaurentPoly::one(), first), (LaurentPoly::one(), second)],
            }
        }
    }
}

/// Applies the highest-priority relation.
pub fn reduce_step(w: &Web) -> Result<WebExpression> {
    reduce_step_with(w, &mut |_| 0)
}

/// Applies the relation chosen by `pick`, which receives the number of
/// candidates and returns an index.
pub fn reduce_step_with(w: &Web, pick: &mut dyn FnMut(usize) -> usize) -> Result<WebExpression> {
    if w.is_empty() {
        return Err(Error::InvalidWeb("empty web has nothing to reduce".into()));
    }
    let cands = candidates(w);
    if cands.is_empty() {
        return Err(Error::Irreducible);
    }
    let i = pick(cands.len());
    Ok(apply(w, &cands[i]))
}

/// Evaluates closed webs, optionally memoizing connected components by their
/// canonical encoding. The memo is safe to share across threads.
#[derive(Debug)]
pub struct Evaluator {
    memo: Option<DashMap<Vec<u16>, LaurentPoly>>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new()
    }
}

impl Evaluator {
    pub fn new() -> Self {
        Evaluator {
            memo: Some(DashMap::new()),
        }
    }

    pub fn without_memo() -> Self {
        Evaluator { memo: None }
    }

    pub fn cache_len(&self) -> usize {
        self.memo.as_ref().map_or(0, |m| m.len())
    }

    pub fn evaluate(&self, w: &Web) -> Result<LaurentPoly> {
        self.evaluate_with(w, &mut |_| 0)
    }

    pub fn evaluate_ordered(&self, w: &Web, order: ReductionOrder) -> Result<LaurentPoly> {
        match order {
            ReductionOrder::Priority => self.evaluate(w),
            ReductionOrder::Random(seed) => {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                self.evaluate_with(w, &mut |n| rng.gen_range(0..n))
            }
        }
    }

    /// Product over components of their values, times `[3]` per circle.
    fn evaluate_with(&self, w: &Web, pick: &mut dyn FnMut(usize) -> usize) -> Result<LaurentPoly> {
        let (comps, circles) = w.split_components();
        let mut value = LaurentPoly::qint3().pow(circles as u32);
        for c in comps {
            if value.is_zero() {
                break;
            }
            value = value * self.evaluate_connected(&c, pick)?;
        }
        Ok(value)
    }

    fn evaluate_connected(&self, w: &Web, pick: &mut dyn FnMut(usize) -> usize) -> Result<LaurentPoly> {
        debug_assert_eq!(w.num_circles(), 0);
        let key = self.memo.as_ref().map(|m| (m, w.canonical_key()));
        if let Some((m, k)) = &key {
            if let Some(v) = m.get(k) {
                return Ok(v.clone());
            }
        }
        // Work queue of connected, circle-free webs with their coefficients.
        let mut total = LaurentPoly::zero();
        let mut queue = vec![(LaurentPoly::one(), w.clone())];
        while let Some((coef, web)) = queue.pop() {
            for (c, child) in reduce_step_with(&web, pick)?.terms {
                let coef = &coef * &c;
                let (comps, circles) = child.split_components();
                let coef = coef * LaurentPoly::qint3().pow(circles as u32);
                match comps.len() {
                    0 => total += coef,
                    1 if self.memo.is_none() => queue.push((coef, comps.into_iter().next().unwrap())),
                    _ => {
                        let mut v = coef;
                        for comp in &comps {
                            v = v * self.evaluate_connected(comp, pick)?;
                        }
                        total += v;
                    }
                }
            }
        }
        if let Some((m, k)) = key {
            m.insert(k, total.clone());
        }
        Ok(total)
    }
}
