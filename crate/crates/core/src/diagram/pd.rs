//! PD-code ingestion.
//!
//! Accepted text: `X[1,5,2,4] X[3,1,4,6] ...` or `[[1,5,2,4],[3,1,4,6],...]`,
//! optionally followed by `reverse=<label>,...` and `loops=<n>`. Lines
//! starting with `#` are comments.
//!
//! Only the under-strand direction is explicit in a PD tuple. The over-strand
//! direction at each crossing is propagated along arcs from under-passages.
//! Components that never pass under are oriented so labels increase along
//! them; `reverse=` flips such a component.

use std::collections::BTreeMap;
use std::str::FromStr;

use itertools::Itertools;

use super::{Crossing, LinkDiagram, Sign};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PdInput {
    pub crossings: Vec<[i64; 4]>,
    /// Labels on over-only components whose default orientation is flipped.
    pub reverse: Vec<i64>,
    pub loops: usize,
}

impl FromStr for PdInput {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut input = PdInput::default();
        let body: String = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .join(" ");
        let mut rest = body.as_str();
        let mut numbers: Vec<i64> = Vec::new();
        let mut depth = 0usize;
        while let Some(ch) = rest.chars().next() {
            if let Some(tail) = rest.strip_prefix("reverse=") {
                let (list, r) = take_list(tail);
                input.reverse = parse_ints(list)?;
                rest = r;
                continue;
            }
            if let Some(tail) = rest.strip_prefix("loops=") {
                let (n, r) = take_list(tail);
                input.loops = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad loop count {n:?}")))?;
                rest = r;
                continue;
            }
            match ch {
                'X' | 'x' | ',' | ' ' | '\t' | '\r' | '\n' | ';' => {}
                '[' | '(' => {
                    depth += 1;
                    numbers.clear();
                }
                ']' | ')' => {
                    if depth == 0 {
                        return Err(Error::Parse("unbalanced bracket".into()));
                    }
                    depth -= 1;
                    if !numbers.is_empty() {
                        if numbers.len() != 4 {
                            return Err(Error::Parse(format!(
                                "crossing has {} labels, expected 4",
                                numbers.len()
                            )));
                        }
                        input.crossings.push([numbers[0], numbers[1], numbers[2], numbers[3]]);
                        numbers.clear();
                    }
                }
                c if c.is_ascii_digit() || c == '-' => {
                    let end = rest[1..]
                        .find(|c: char| !c.is_ascii_digit())
                        .map_or(rest.len(), |i| i + 1);
                    let n: i64 = rest[..end]
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad label {:?}", &rest[..end])))?;
                    if depth == 0 {
                        return Err(Error::Parse("label outside brackets".into()));
                    }
                    numbers.push(n);
                    rest = &rest[end..];
                    continue;
                }
                c => return Err(Error::Parse(format!("unexpected character {c:?} in PD code"))),
            }
            rest = &rest[ch.len_utf8()..];
        }
        if depth != 0 {
            return Err(Error::Parse("unbalanced bracket".into()));
        }
        if input.crossings.is_empty() && input.loops == 0 {
            return Err(Error::Parse("empty PD code".into()));
        }
        Ok(input)
    }
}

fn take_list(s: &str) -> (&str, &str) {
    let end = s.find(char::is_whitespace).unwrap_or(s.len());
    (&s[..end], &s[end..])
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad label {t:?}"))))
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Role {
    Head,
    Tail,
}

impl PdInput {
    /// Infers orientation and builds the diagram.
    pub fn to_diagram(&self) -> Result<LinkDiagram> {
        let e = self.crossings.len();
        let mut occ: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, x) in self.crossings.iter().enumerate() {
            for (s, &l) in x.iter().enumerate() {
                occ.entry(l).or_default().push((c, s));
            }
        }
        if let Some((l, v)) = occ.iter().find(|(_, v)| v.len() != 2) {
            return Err(Error::InvalidDiagram(format!("arc label {l} is used {} times (expected 2)", v.len())));
        }
        let mut over_in: Vec<Option<usize>> = vec![None; e];
        let role = |over_in: &[Option<usize>], (c, s): (usize, usize)| -> Option<Role> {
            match s {
                0 => Some(Role::Head),
                2 => Some(Role::Tail),
                _ => over_in[c].map(|o| if o == s { Role::Head } else { Role::Tail }),
            }
        };
        let propagate = |over_in: &mut Vec<Option<usize>>| -> Result<()> {
            loop {
                let mut changed = false;
                for (l, ends) in &occ {
                    let (p, q) = (ends[0], ends[1]);
                    match (role(over_in, p), role(over_in, q)) {
                        (Some(a), Some(b)) if a == b => {
                            return Err(Error::Orientation(format!(
                                "arc {l} would be {} at both ends",
                                if a == Role::Head { "incoming" } else { "outgoing" }
                            )))
                        }
                        (Some(a), None) | (None, Some(a)) => {
                            let (c, s) = if role(over_in, p).is_none() { p } else { q };
                            // the unknown end has the opposite role
                            over_in[c] = Some(if a == Role::Head { 4 - s } else { s });
                            changed = true;
                        }
                        _ => {}
                    }
                }
                if !changed {
                    return Ok(());
                }
            }
        };
        propagate(&mut over_in)?;
        while let Some(c) = over_in.iter().position(Option::is_none) {
            let [_, b, _, d] = self.crossings[c];
            let enters_at_3 = if b == d + 1 {
                true
            } else if d == b + 1 {
                false
            } else {
                b < d
            };
            over_in[c] = Some(if enters_at_3 { 3 } else { 1 });
            propagate(&mut over_in)?;
        }
        let mut crossings: Vec<Crossing> = self
            .crossings
            .iter()
            .zip(&over_in)
            .map(|(x, o)| {
                let pd = x.map(|l| l as usize);
                Crossing::new(pd, if o.unwrap() == 3 { Sign::Positive } else { Sign::Negative })
            })
            .collect();
        if self.crossings.iter().flatten().any(|&l| l < 0) {
            return Err(Error::Parse("negative arc label".into()));
        }
        if !self.reverse.is_empty() {
            let d = LinkDiagram::new(crossings.clone(), self.loops)?;
            // map raw labels to internal ids
            let labels: Vec<i64> = occ.keys().copied().collect();
            for &l in &self.reverse {
                let Ok(a) = labels.binary_search(&l) else {
                    return Err(Error::Orientation(format!("reverse label {l} not in the code")));
                };
                let comp = d.components().into_iter().find(|c| c.contains(&a)).unwrap();
                let mut over_only = Vec::new();
                for &arc in &comp {
                    let (hc, hs) = d.arc_ends(arc).head;
                    if hs == 0 {
                        return Err(Error::Orientation(format!(
                            "component through label {l} passes under; its orientation is determined"
                        )));
                    }
                    over_only.push(hc);
                }
                for c in over_only {
                    let sign = crossings[c].sign().flip();
                    crossings[c] = Crossing::new(crossings[c].pd, sign);
                }
            }
        }
        LinkDiagram::new(crossings, self.loops)
    }
}

impl LinkDiagram {
    pub fn from_pd_code(code: &[[i64; 4]]) -> Result<LinkDiagram> {
        PdInput {
            crossings: code.to_vec(),
            ..Default::default()
        }
        .to_diagram()
    }

    pub fn from_pd_str(text: &str) -> Result<LinkDiagram> {
        text.parse::<PdInput>()?.to_diagram()
    }
}
