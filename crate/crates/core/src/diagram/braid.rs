//! Braid closures. Strands run upward; generator `i` (1-based) crosses
//! positions `i-1` and `i`, positive when the left strand passes over.

use rand::Rng;

use super::{Crossing, LinkDiagram, Sign};
use crate::error::{Error, Result};

/// Uniform random braid word of the given length on `strands` strands,
/// with only positive generators when `positive` is set.
pub fn random_braid_word<R: Rng + ?Sized>(rng: &mut R, strands: usize, len: usize, positive: bool) -> Vec<i32> {
    (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands as i32);
            if positive || rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

impl LinkDiagram {
    pub fn from_braid_word(word: &[i32], strands: usize) -> Result<LinkDiagram> {
        if strands < 2 {
            return Err(Error::Precondition(format!("braid needs at least 2 strands, got {strands}")));
        }
        let mut cur: Vec<usize> = (0..strands).collect();
        let mut next_arc = strands;
        let mut crossings = Vec::with_capacity(word.len());
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= strands {
                return Err(Error::BraidIndex { index: g, strands });
            }
            let (l, r) = (i - 1, i);
            let (sw, se) = (cur[l], cur[r]);
            let (nw, ne) = (next_arc, next_arc + 1);
            next_arc += 2;
            let x = if g > 0 {
                Crossing::new([se, ne, nw, sw], Sign::Positive)
            } else {
                Crossing::new([sw, se, ne, nw], Sign::Negative)
            };
            crossings.push(x);
            cur[l] = nw;
            cur[r] = ne;
        }
        // Close: the final arc at each position is the initial arc there.
        let mut alias: Vec<usize> = (0..next_arc).collect();
        let mut loops = 0;
        for p in 0..strands {
            if cur[p] == p {
                loops += 1;
            } else {
                alias[cur[p]] = p;
            }
        }
        for x in &mut crossings {
            for a in &mut x.pd {
                *a = alias[*a];
            }
        }
        LinkDiagram::new(crossings, loops)
    }

    /// Parses `"<strands>:[g1,g2,...]"`.
    pub fn from_braid_str(text: &str) -> Result<LinkDiagram> {
        let (n, word) = parse_braid(text)?;
        Self::from_braid_word(&word, n)
    }
}

pub(crate) fn parse_braid(text: &str) -> Result<(usize, Vec<i32>)> {
    let text = text.trim();
    let (n, rest) = text
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("braid word {text:?} lacks '<strands>:'")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad strand count {n:?}")))?;
    let rest = rest.trim();
    let inner = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("braid generators {rest:?} must be in brackets")))?;
    let word = inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i32>().map_err(|_| Error::Parse(format!("bad generator {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((n, word))
}
