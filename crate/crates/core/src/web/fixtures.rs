//! Closed webs built from chains of squares, with their closed-form values.
//!
//! A chain of `k` squares has a bottom row `B_0..B_k` and a top row
//! `T_0..T_k`, with verticals `B_i T_i`. `B_0` is a sink and `T_0` a source;
//! types alternate along each row. The free ends on the left and right are
//! closed up according to the requested capping.

use super::{VertexKind, Web, WebBuilder};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Left ends joined to each other, right ends joined to each other.
    Vertical,
    /// Top ends joined over the chain, bottom ends joined under it (odd `k`).
    Horizontal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capping {
    /// Right end capped by a second vertical edge, left ends joined.
    HalfCapped,
    Uncapped(Closure),
    /// Left ends feed a source with two arms, right ends a sink, and three
    /// parallel strands run over the chain (even `k`).
    TraceClosed,
}

#[derive(Clone, Debug)]
pub struct SquareChainFixture {
    pub k: usize,
    pub capping: Capping,
    pub web: Web,
    pub expected: LaurentPoly,
}

struct Chain {
    b: WebBuilder,
    bot: Vec<usize>,
    top: Vec<usize>,
    vert: Vec<usize>,
    /// `bh[i]` joins `B_i` and `B_{i+1}`; likewise `th`.
    bh: Vec<usize>,
    th: Vec<usize>,
}

fn bottom_is_sink(i: usize) -> bool {
    i.is_multiple_of(2)
}

impl Chain {
    fn new(k: usize) -> Self {
        let mut b = WebBuilder::new();
        let kind = |sink: bool| if sink { VertexKind::Sink } else { VertexKind::Source };
        let bot: Vec<_> = (0..=k).map(|i| b.vertex(kind(bottom_is_sink(i)))).collect();
        let top: Vec<_> = (0..=k).map(|i| b.vertex(kind(!bottom_is_sink(i)))).collect();
        let link = |b: &mut WebBuilder, sink: usize, source: usize| b.edge(source, sink);
        let mut vert = Vec::new();
        for i in 0..=k {
            vert.push(if bottom_is_sink(i) {
                link(&mut b, bot[i], top[i])
            } else {
                link(&mut b, top[i], bot[i])
            });
        }
        let mut bh = Vec::new();
        let mut th = Vec::new();
        for i in 0..k {
            if bottom_is_sink(i) {
                bh.push(b.edge(bot[i + 1], bot[i]));
                th.push(b.edge(top[i], top[i + 1]));
            } else {
                bh.push(b.edge(bot[i], bot[i + 1]));
                th.push(b.edge(top[i + 1], top[i]));
            }
        }
        Chain { b, bot, top, vert, bh, th }
    }

    fn k(&self) -> usize {
        self.vert.len() - 1
    }

    /// Sets rotations given the edge in the left and right position at each
    /// end vertex. Bottom vertices read `[right, up, left]`, top vertices
    /// `[right, left, down]`.
    fn finish(mut self, bl: usize, tl: usize, br: usize, tr: usize) -> Result<Web> {
        let k = self.k();
        for i in 0..=k {
            let left_b = if i == 0 { bl } else { self.bh[i - 1] };
            let right_b = if i == k { br } else { self.bh[i] };
            let left_t = if i == 0 { tl } else { self.th[i - 1] };
            let right_t = if i == k { tr } else { self.th[i] };
            self.b.rotate(self.bot[i], [right_b, self.vert[i], left_b]);
            self.b.rotate(self.top[i], [right_t, left_t, self.vert[i]]);
        }
        self.b.build()
    }
}

fn q2() -> LaurentPoly {
    LaurentPoly::qint2()
}

fn q3() -> LaurentPoly {
    LaurentPoly::qint3()
}

/// Expected value of a closure, from the expansions of the capped, uncapped
/// and trace-closed square chains.
pub fn expected_value(k: usize, capping: Capping) -> Result<LaurentPoly> {
    let k32 = k as u32;
    Ok(match capping {
        Capping::HalfCapped => q2().pow(k32 + 1) * q3(),
        Capping::Uncapped(Closure::Vertical) if k.is_multiple_of(2) => {
            (1..=k32 / 2).map(|i| q2().pow(2 * i - 1) * q3().pow(2)).sum::<LaurentPoly>() + q2() * q3()
        }
        Capping::Uncapped(Closure::Vertical) => {
            (1..=k32.div_ceil(2)).map(|i| q2().pow(2 * i - 2) * q3().pow(2)).sum::<LaurentPoly>() + q3()
        }
        Capping::Uncapped(Closure::Horizontal) if k % 2 == 1 => {
            (1..=k32.div_ceil(2)).map(|i| q2().pow(2 * i - 2) * q3()).sum::<LaurentPoly>() + q3().pow(2)
        }
        Capping::TraceClosed if k.is_multiple_of(2) => {
            (1..=k32 / 2).map(|i| q2().pow(2 * i) * q3()).sum::<LaurentPoly>() + q2().pow(2) * q3()
        }
        _ => return Err(invalid(k, capping)),
    })
}

fn invalid(k: usize, capping: Capping) -> Error {
    Error::Precondition(format!("closure {capping:?} is not defined for k = {k}"))
}

pub fn build_capped_square_chain(k: usize, capping: Capping) -> Result<SquareChainFixture> {
    let expected = expected_value(k, capping)?;
    let mut c = Chain::new(k);
    let (b0, t0, bk, tk) = (c.bot[0], c.top[0], c.bot[k], c.top[k]);
    let web = match capping {
        Capping::HalfCapped => {
            let left = c.b.edge(t0, b0);
            let cap = if bottom_is_sink(k) { c.b.edge(tk, bk) } else { c.b.edge(bk, tk) };
            c.finish(left, left, cap, cap)?
        }
        Capping::Uncapped(Closure::Vertical) => {
            let left = c.b.edge(t0, b0);
            let right = if bottom_is_sink(k) { c.b.edge(tk, bk) } else { c.b.edge(bk, tk) };
            c.finish(left, left, right, right)?
        }
        Capping::Uncapped(Closure::Horizontal) => {
            let over = c.b.edge(t0, tk);
            let under = c.b.edge(bk, b0);
            c.finish(under, over, under, over)?
        }
        Capping::TraceClosed => {
            let x = c.b.vertex(VertexKind::Source);
            let y = c.b.vertex(VertexKind::Sink);
            let x_b0 = c.b.edge(x, b0);
            let tk_y = c.b.edge(tk, y);
            let t0_y = c.b.edge(t0, y);
            let x_y = c.b.edge(x, y);
            let x_bk = c.b.edge(x, bk);
            // x sits left of B_0 with two arms heading left; y sits right of
            // T_k with two arms heading right. Strands nest over the chain.
            c.b.rotate(x, [x_b0, x_y, x_bk]);
            c.b.rotate(y, [t0_y, tk_y, x_y]);
            c.finish(x_b0, t0_y, x_bk, tk_y)?
        }
    };
    Ok(SquareChainFixture {
        k,
        capping,
        web,
        expected,
    })
}

/// All valid fixtures with `k <= max_k`.
pub fn all_square_chains(max_k: usize) -> Vec<SquareChainFixture> {
    let mut out = Vec::new();
    for k in 0..=max_k {
        for capping in [
            Capping::HalfCapped,
            Capping::Uncapped(Closure::Vertical),
            Capping::Uncapped(Closure::Horizontal),
            Capping::TraceClosed,
        ] {
            if let Ok(f) = build_capped_square_chain(k, capping) {
                out.push(f);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::web::{Evaluator, Face};

    #[test]
    fn trace_closed_k0_has_a_square_face() {
        let f = build_capped_square_chain(0, Capping::TraceClosed).unwrap();
        assert!(f.web.faces().iter().any(|face| matches!(face, Face::Walk(d) if d.len() == 4)));
        assert_eq!(f.expected, q2() * q2() * q3());
    }

    #[test]
    fn trace_closed_k4_expected() {
        let f = build_capped_square_chain(4, Capping::TraceClosed).unwrap();
        let want = q2().pow(2) * q3() + q2().pow(2) * q3() + q2().pow(4) * q3();
        assert_eq!(f.expected, want);
    }

    #[test]
    fn invalid_combinations() {
        assert!(build_capped_square_chain(1, Capping::TraceClosed).is_err());
        assert!(build_capped_square_chain(2, Capping::Uncapped(Closure::Horizontal)).is_err());
    }

    #[test]
    fn fixtures_evaluate_to_closed_forms() {
        let ev = Evaluator::new();
        for f in all_square_chains(6) {
            assert_eq!(ev.evaluate(&f.web).unwrap(), f.expected, "k={} {:?}", f.k, f.capping);
        }
    }
}
