//! Oriented link diagrams in PD form.
//!
//! A crossing lists its four arcs counterclockwise starting from the incoming
//! under-strand, so slot 0 is under-in and slot 2 is under-out. The
//! over-strand enters at slot 3 and leaves at slot 1 for a positive crossing,
//! and the reverse for a negative one. Signs are derived from this data.

mod braid;
mod pd;

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::web::{VertexKind, Web};

pub use braid::random_braid_word;
pub use pd::PdInput;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    /// Arc ids counterclockwise from the incoming under-strand.
    pub pd: [usize; 4],
    /// Slot where the over-strand enters: 3 (positive) or 1 (negative).
    over_in: usize,
}

impl Crossing {
    pub fn new(pd: [usize; 4], sign: Sign) -> Self {
        Crossing {
            pd,
            over_in: match sign {
                Sign::Positive => 3,
                Sign::Negative => 1,
            },
        }
    }

    pub fn sign(&self) -> Sign {
        if self.over_in == 3 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn over_in(&self) -> usize {
        self.over_in
    }

    pub fn over_out(&self) -> usize {
        4 - self.over_in
    }

    pub fn is_incoming(&self, slot: usize) -> bool {
        slot == 0 || slot == self.over_in
    }

    /// Outgoing slot joined to `in_slot` by the orientation-preserving
    /// smoothing (the one that is not straight through).
    pub fn o_partner(&self, in_slot: usize) -> usize {
        if in_slot == 0 {
            self.over_out()
        } else {
            2
        }
    }

    /// Incoming slots `(i1, i2)` with `i2` counterclockwise after `i1`.
    pub fn incoming_ccw(&self) -> (usize, usize) {
        if self.over_in == 3 {
            (3, 0)
        } else {
            (0, 1)
        }
    }

    /// The same crossing with over and under exchanged.
    pub fn switched(&self) -> Crossing {
        let [a, b, c, d] = self.pd;
        match self.sign() {
            Sign::Positive => Crossing::new([d, a, b, c], Sign::Negative),
            Sign::Negative => Crossing::new([b, c, d, a], Sign::Positive),
        }
    }
}

/// The two ends of an arc: `(crossing, slot)` of its tail and head.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcEnds {
    pub tail: (usize, usize),
    pub head: (usize, usize),
}

/// Which pair of opposite slots a smoothing joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Smoothing {
    /// Pairs slots {0,3} and {1,2}.
    A,
    /// Pairs slots {0,1} and {2,3}.
    B,
}

impl Smoothing {
    pub fn partner(self, slot: usize) -> usize {
        match self {
            Smoothing::A => 3 - slot,
            Smoothing::B => slot ^ 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Resolution {
    O,
    W,
}

/// A resolution choice at every crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State(pub Vec<Resolution>);

impl State {
    pub fn all(e: usize, r: Resolution) -> Self {
        State(vec![r; e])
    }

    /// Bit `i` set means crossing `i` is W-resolved.
    pub fn from_mask(e: usize, mask: u64) -> Self {
        State(
            (0..e)
                .map(|i| if mask >> i & 1 == 1 { Resolution::W } else { Resolution::O })
                .collect(),
        )
    }

    pub fn mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, r)| **r == Resolution::W)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn is_w(&self, i: usize) -> bool {
        self.0[i] == Resolution::W
    }

    pub fn num_w(&self) -> usize {
        self.0.iter().filter(|r| **r == Resolution::W).count()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    ends: Vec<ArcEnds>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CrossingRepr {
    pd: [usize; 4],
    over_in: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DiagramRepr {
    crossings: Vec<CrossingRepr>,
    #[serde(default)]
    free_loops: usize,
}

impl TryFrom<DiagramRepr> for LinkDiagram {
    type Error = Error;

    fn try_from(r: DiagramRepr) -> Result<Self> {
        let crossings = r
            .crossings
            .into_iter()
            .map(|c| match c.over_in {
                3 => Ok(Crossing::new(c.pd, Sign::Positive)),
                1 => Ok(Crossing::new(c.pd, Sign::Negative)),
                s => Err(Error::Orientation(format!("over-strand cannot enter at slot {s}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        LinkDiagram::new(crossings, r.free_loops)
    }
}

impl From<LinkDiagram> for DiagramRepr {
    fn from(d: LinkDiagram) -> Self {
        DiagramRepr {
            crossings: d
                .crossings
                .iter()
                .map(|c| CrossingRepr {
                    pd: c.pd,
                    over_in: c.over_in,
                })
                .collect(),
            free_loops: d.free_loops,
        }
    }
}

/// Minimal union-find over arc ids.
pub(crate) struct Dsu(Vec<usize>);

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[rb] = ra;
        }
    }
}

impl LinkDiagram {
    /// The crossingless unknot diagram.
    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    /// `n` disjoint crossingless circles.
    pub fn unlink(n: usize) -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            free_loops: n,
            ends: Vec::new(),
        }
    }

    /// Validates and normalizes: arc labels are renumbered `0..2e` in
    /// increasing order, each arc must leave one slot and enter another, and
    /// each connected piece of the 4-valent map must be spherical.
    pub fn new(mut crossings: Vec<Crossing>, free_loops: usize) -> Result<Self> {
        let mut labels: BTreeMap<usize, usize> = BTreeMap::new();
        for c in &crossings {
            for &a in &c.pd {
                *labels.entry(a).or_default() += 1;
            }
        }
        if let Some((&a, &n)) = labels.iter().find(|(_, &n)| n != 2) {
            return Err(Error::InvalidDiagram(format!("arc label {a} is used {n} times (expected 2)")));
        }
        let index: BTreeMap<usize, usize> = labels.keys().enumerate().map(|(i, &a)| (a, i)).collect();
        for c in &mut crossings {
            for a in &mut c.pd {
                *a = index[a];
            }
        }
        let n = labels.len();
        let mut tails = vec![None; n];
        let mut heads = vec![None; n];
        for (ci, c) in crossings.iter().enumerate() {
            for (s, &a) in c.pd.iter().enumerate() {
                let slot = if c.is_incoming(s) { &mut heads[a] } else { &mut tails[a] };
                if slot.is_some() {
                    return Err(Error::Orientation(format!(
                        "arc {} is {} at both ends",
                        a + 1,
                        if c.is_incoming(s) { "incoming" } else { "outgoing" }
                    )));
                }
                *slot = Some((ci, s));
            }
        }
        let ends = (0..n)
            .map(|a| ArcEnds {
                tail: tails[a].unwrap(),
                head: heads[a].unwrap(),
            })
            .collect();
        let d = LinkDiagram {
            crossings,
            free_loops,
            ends,
        };
        d.check_planar()?;
        Ok(d)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, i: usize) -> &Crossing {
        &self.crossings[i]
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.ends.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn arc_ends(&self, a: usize) -> ArcEnds {
        self.ends[a]
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.crossings.iter().map(|c| c.sign()).collect()
    }

    pub fn num_positive(&self) -> usize {
        self.crossings.iter().filter(|c| c.sign() == Sign::Positive).count()
    }

    pub fn num_negative(&self) -> usize {
        self.num_crossings() - self.num_positive()
    }

    pub fn writhe(&self) -> i64 {
        self.num_positive() as i64 - self.num_negative() as i64
    }

    pub fn is_positive(&self) -> bool {
        self.num_negative() == 0
    }

    /// Arc leaving crossing `c` straight through from incoming slot `s`.
    fn straight_next(&self, a: usize) -> usize {
        let (c, s) = self.ends[a].head;
        self.crossings[c].pd[(s + 2) % 4]
    }

    /// Link components as cyclic arc sequences, plus one empty sequence per
    /// free loop.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_arcs()];
        let mut out = Vec::new();
        for start in 0..self.num_arcs() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                comp.push(a);
                a = self.straight_next(a);
            }
            out.push(comp);
        }
        out.extend(std::iter::repeat_n(Vec::new(), self.free_loops));
        out
    }

    pub fn num_link_components(&self) -> usize {
        self.components().len()
    }

    /// Groups of crossings joined by arcs (connected pieces of the 4-valent map).
    pub fn crossing_blocks(&self) -> Vec<Vec<usize>> {
        let e = self.num_crossings();
        let mut dsu = Dsu::new(e);
        for ends in &self.ends {
            dsu.union(ends.tail.0, ends.head.0);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..e {
            groups.entry(dsu.find(c)).or_default().push(c);
        }
        groups.into_values().collect()
    }

    /// Connected as a diagram: one block of crossings and no free loops, or a
    /// single free loop.
    pub fn is_connected(&self) -> bool {
        let blocks = self.crossing_blocks().len();
        blocks + self.free_loops == 1
    }

    /// Along every arc, an under-passage is followed by an over-passage and
    /// vice versa.
    pub fn is_alternating(&self) -> bool {
        self.ends.iter().all(|e| {
            let tail_under = e.tail.1 == 2;
            let head_under = e.head.1 == 0;
            tail_under != head_under
        })
    }

    /// Face boundary walks of the 4-valent map; darts are `(arc, forward)`.
    pub fn faces(&self) -> Vec<Vec<(usize, bool)>> {
        let n = self.num_arcs();
        let mut used = vec![[false; 2]; n];
        let mut out = Vec::new();
        for a in 0..n {
            for (side, fwd) in [(0usize, true), (1, false)] {
                if used[a][side] {
                    continue;
                }
                let start = (a, fwd);
                let mut walk = Vec::new();
                let mut d = start;
                loop {
                    used[d.0][usize::from(!d.1)] = true;
                    walk.push(d);
                    let (c, s) = if d.1 { self.ends[d.0].head } else { self.ends[d.0].tail };
                    let ns = (s + 1) % 4;
                    let z = self.crossings[c].pd[ns];
                    d = (z, !self.crossings[c].is_incoming(ns));
                    if d == start {
                        break;
                    }
                }
                out.push(walk);
            }
        }
        out
    }

    fn check_planar(&self) -> Result<()> {
        let faces = self.faces();
        let mut dsu = Dsu::new(self.num_crossings());
        for ends in &self.ends {
            dsu.union(ends.tail.0, ends.head.0);
        }
        let mut v: BTreeMap<usize, i64> = BTreeMap::new();
        for c in 0..self.num_crossings() {
            *v.entry(dsu.find(c)).or_default() += 1;
        }
        let mut f: BTreeMap<usize, i64> = BTreeMap::new();
        for walk in &faces {
            let c = self.ends[walk[0].0].tail.0;
            *f.entry(dsu.find(c)).or_default() += 1;
        }
        for (root, vc) in v {
            let chi = vc - 2 * vc + f.get(&root).copied().unwrap_or(0);
            if chi != 2 {
                return Err(Error::NonPlanar { chi });
            }
        }
        Ok(())
    }

    /// Canonical PD text: `X[a,b,c,d] ...` with 1-based labels.
    pub fn to_pd_string(&self) -> String {
        let loops = (self.free_loops > 0).then(|| format!("loops={}", self.free_loops));
        self.crossings
            .iter()
            .map(|c| format!("X[{}]", c.pd.iter().map(|a| a + 1).join(",")))
            .chain(loops)
            .join(" ")
    }

    /// Circles of an unoriented smoothing `partner` applied at every crossing:
    /// returns the circle id of every arc and the number of circles,
    /// including free loops (which get the highest ids).
    fn smoothing_circles(&self, partner: impl Fn(usize, usize) -> usize) -> (Vec<usize>, usize) {
        let n = self.num_arcs();
        let mut dsu = Dsu::new(n);
        for (ci, c) in self.crossings.iter().enumerate() {
            for s in 0..4 {
                dsu.union(c.pd[s], c.pd[partner(ci, s)]);
            }
        }
        let mut ids = BTreeMap::new();
        let mut circle = vec![0; n];
        for (a, slot) in circle.iter_mut().enumerate() {
            let r = dsu.find(a);
            let next = ids.len();
            *slot = *ids.entry(r).or_insert(next);
        }
        (circle, ids.len() + self.free_loops)
    }

    /// Seifert circles: the O-smoothing at every crossing, with the order in
    /// which crossings are met along each circle.
    pub fn seifert_circles(&self) -> SeifertCircleSet {
        let n = self.num_arcs();
        let mut circle_of_arc = vec![usize::MAX; n];
        let mut circles = Vec::new();
        for start in 0..n {
            if circle_of_arc[start] != usize::MAX {
                continue;
            }
            let id = circles.len();
            let mut arcs = Vec::new();
            let mut attachments = Vec::new();
            let mut a = start;
            while circle_of_arc[a] == usize::MAX {
                circle_of_arc[a] = id;
                arcs.push(a);
                let (c, s) = self.ends[a].head;
                attachments.push(c);
                a = self.crossings[c].pd[self.crossings[c].o_partner(s)];
            }
            circles.push(SeifertCircle { arcs, attachments });
        }
        for _ in 0..self.free_loops {
            circles.push(SeifertCircle::default());
        }
        let crossing_circles = self
            .crossings
            .iter()
            .map(|c| {
                let pair = [circle_of_arc[c.pd[0]], circle_of_arc[c.pd[c.over_in]]];
                assert_ne!(pair[0], pair[1], "a crossing touches one Seifert circle twice");
                pair
            })
            .collect();
        SeifertCircleSet {
            circles,
            crossing_circles,
        }
    }

    /// All-A or all-B state graph of the diagram with orientations ignored.
    pub fn ab_resolution_graph(&self, kind: Smoothing) -> StateGraphAB {
        let (circle_of_arc, num_circles) = self.smoothing_circles(|_, s| kind.partner(s));
        let edges = self
            .crossings
            .iter()
            .map(|c| (circle_of_arc[c.pd[0]], circle_of_arc[c.pd[2]]))
            .collect();
        StateGraphAB {
            kind,
            num_circles,
            edges,
        }
    }

    pub fn is_a_adequate(&self) -> bool {
        self.ab_resolution_graph(Smoothing::A).is_adequate()
    }

    pub fn is_b_adequate(&self) -> bool {
        self.ab_resolution_graph(Smoothing::B).is_adequate()
    }

    pub fn mirror(&self) -> LinkDiagram {
        let crossings = self.crossings.iter().map(|c| c.switched()).collect();
        LinkDiagram::new(crossings, self.free_loops).expect("mirror preserves validity")
    }

    /// Switches over and under at crossing `i` only.
    pub fn switch_crossing(&self, i: usize) -> LinkDiagram {
        let mut crossings = self.crossings.clone();
        crossings[i] = crossings[i].switched();
        LinkDiagram::new(crossings, self.free_loops).expect("switching preserves validity")
    }

    /// Removes crossing `i` by its orientation-preserving smoothing.
    pub fn smooth_crossing(&self, i: usize) -> LinkDiagram {
        let c = self.crossings[i];
        let mut dsu = Dsu::new(self.num_arcs());
        for s in [0, c.over_in] {
            dsu.union(c.pd[s], c.pd[c.o_partner(s)]);
        }
        let mut crossings: Vec<Crossing> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, x)| *x)
            .collect();
        let mut present = vec![false; self.num_arcs()];
        for x in &mut crossings {
            for a in &mut x.pd {
                *a = dsu.find(*a);
                present[*a] = true;
            }
        }
        let mut loops = std::collections::BTreeSet::new();
        for a in 0..self.num_arcs() {
            let r = dsu.find(a);
            if !present[r] {
                loops.insert(r);
            }
        }
        LinkDiagram::new(crossings, self.free_loops + loops.len()).expect("smoothing preserves validity")
    }

    /// Side-by-side placement.
    pub fn disjoint_union(&self, other: &LinkDiagram) -> LinkDiagram {
        let off = self.num_arcs();
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| Crossing {
            pd: c.pd.map(|a| a + off),
            over_in: c.over_in,
        }));
        LinkDiagram::new(crossings, self.free_loops + other.free_loops).expect("union preserves validity")
    }

    /// Connected sum along arc `arc1` of `self` and arc `arc2` of `other`:
    /// both arcs are cut and reconnected so orientations agree. On the sphere
    /// every arc borders the merged region, so any pair of arcs is allowed.
    /// A crossingless operand contributes one of its free loops.
    pub fn connected_sum(&self, other: &LinkDiagram, arc1: usize, arc2: usize) -> Result<LinkDiagram> {
        if self.num_crossings() == 0 || other.num_crossings() == 0 {
            let (with, without) = if self.num_crossings() == 0 { (other, self) } else { (self, other) };
            if without.free_loops == 0 || with.num_crossings() + with.free_loops == 0 {
                return Err(Error::Precondition("connected sum with an empty diagram".into()));
            }
            let mut d = with.clone();
            d.free_loops += without.free_loops - 1;
            return Ok(d);
        }
        if arc1 >= self.num_arcs() || arc2 >= other.num_arcs() {
            return Err(Error::Precondition(format!("arc ({arc1}, {arc2}) out of range")));
        }
        let off = self.num_arcs();
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|c| Crossing {
            pd: c.pd.map(|a| a + off),
            over_in: c.over_in,
        }));
        // Swap heads: x now ends where y ended and vice versa.
        let (xh, xhs) = self.ends[arc1].head;
        let (yh, yhs) = other.ends[arc2].head;
        crossings[xh].pd[xhs] = arc2 + off;
        crossings[yh + self.num_crossings()].pd[yhs] = arc1;
        LinkDiagram::new(crossings, self.free_loops + other.free_loops)
    }

    /// The web of a state: O-resolved crossings are smoothed, W-resolved
    /// crossings become a sink receiving both incoming strands, a source
    /// emitting both outgoing strands, and an edge from the source to the sink.
    pub fn state_web(&self, state: &State) -> Web {
        assert_eq!(state.len(), self.num_crossings(), "state length mismatch");
        let e = self.num_crossings();
        let mut sink = vec![usize::MAX; e];
        let mut source = vec![usize::MAX; e];
        let mut kinds = Vec::new();
        let mut edges = Vec::new();
        let mut rotation = Vec::new();
        for i in 0..e {
            if state.is_w(i) {
                sink[i] = kinds.len();
                kinds.push(VertexKind::Sink);
                source[i] = kinds.len();
                kinds.push(VertexKind::Source);
                rotation.push([usize::MAX; 3]);
                rotation.push([usize::MAX; 3]);
                let mid = edges.len();
                edges.push((source[i], sink[i]));
                rotation[sink[i]][2] = mid;
                rotation[source[i]][2] = mid;
            }
        }
        // position of a slot in the vertex rotation
        let sink_pos = |c: &Crossing, s: usize| if s == c.incoming_ccw().0 { 0 } else { 1 };
        let source_pos = |c: &Crossing, s: usize| if s == (c.incoming_ccw().1 + 1) % 4 { 0 } else { 1 };
        let n = self.num_arcs();
        let mut visited = vec![false; n];
        for a in 0..n {
            let (tc, ts) = self.ends[a].tail;
            if !state.is_w(tc) {
                continue;
            }
            let mut cur = a;
            visited[cur] = true;
            loop {
                let (hc, hs) = self.ends[cur].head;
                if state.is_w(hc) {
                    let id = edges.len();
                    edges.push((source[tc], sink[hc]));
                    rotation[source[tc]][source_pos(&self.crossings[tc], ts)] = id;
                    rotation[sink[hc]][sink_pos(&self.crossings[hc], hs)] = id;
                    break;
                }
                let c = &self.crossings[hc];
                cur = c.pd[c.o_partner(hs)];
                visited[cur] = true;
            }
        }
        let mut circles = self.free_loops;
        for a in 0..n {
            if visited[a] {
                continue;
            }
            let mut cur = a;
            while !visited[cur] {
                visited[cur] = true;
                let (hc, hs) = self.ends[cur].head;
                let c = &self.crossings[hc];
                cur = c.pd[c.o_partner(hs)];
            }
            circles += 1;
        }
        Web::new_unchecked(kinds, rotation, edges, circles)
    }

    /// Crossing-preserving relabeling by a permutation of arc ids, used to
    /// test label independence.
    pub fn relabeled(&self, perm: &[usize]) -> Result<LinkDiagram> {
        let crossings = self
            .crossings
            .iter()
            .map(|c| Crossing {
                pd: c.pd.map(|a| perm[a]),
                over_in: c.over_in,
            })
            .collect();
        LinkDiagram::new(crossings, self.free_loops)
    }

    /// Reorders crossings.
    pub fn with_crossing_order(&self, order: &[usize]) -> LinkDiagram {
        let crossings = order.iter().map(|&i| self.crossings[i]).collect();
        LinkDiagram::new(crossings, self.free_loops).expect("reordering preserves validity")
    }

    /// Canonical text for memo keys: PD with labels renumbered in order of
    /// first appearance along the crossing list.
    pub(crate) fn encoding_key(&self) -> Vec<u32> {
        let mut map = vec![u32::MAX; self.num_arcs()];
        let mut next = 0u32;
        let mut key = Vec::with_capacity(5 * self.num_crossings() + 1);
        key.push(self.free_loops as u32);
        for c in &self.crossings {
            key.push(c.over_in as u32);
            for &a in &c.pd {
                if map[a] == u32::MAX {
                    map[a] = next;
                    next += 1;
                }
                key.push(map[a]);
            }
        }
        key
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() {
            write!(f, "loops={}", self.free_loops)
        } else {
            f.write_str(&self.to_pd_string())
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertCircle {
    /// Arcs in the order of the circle's orientation.
    pub arcs: Vec<usize>,
    /// Crossings met along the circle, in the same order.
    pub attachments: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertCircleSet {
    pub circles: Vec<SeifertCircle>,
    /// For each crossing, the circles through its under-in and over-in slots.
    pub crossing_circles: Vec<[usize; 2]>,
}

impl SeifertCircleSet {
    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }
}

/// Unoriented all-A or all-B state graph: one vertex per state circle, one
/// edge per crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateGraphAB {
    pub kind: Smoothing,
    pub num_circles: usize,
    pub edges: Vec<(usize, usize)>,
}

impl StateGraphAB {
    /// No edge joins a state circle to itself.
    pub fn is_adequate(&self) -> bool {
        self.edges.iter().all(|(a, b)| a != b)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn trefoil() -> LinkDiagram {
        LinkDiagram::from_braid_word(&[1, 1, 1], 2).unwrap()
    }

    #[test]
    fn braid_trefoil_is_positive() {
        let d = trefoil();
        assert_eq!(d.num_crossings(), 3);
        assert!(d.is_positive());
        assert_eq!(d.num_link_components(), 1);
        assert!(d.is_alternating());
        assert!(d.is_connected());
    }

    #[test]
    fn seifert_circles_of_trefoil() {
        let s = trefoil().seifert_circles();
        assert_eq!(s.len(), 2);
        for c in &s.circles {
            assert_eq!(c.attachments.len(), 3);
        }
        // both circles meet the crossings in the same cyclic order
        let a = &s.circles[0].attachments;
        let b = &s.circles[1].attachments;
        let rot = (0..3).any(|r| (0..3).all(|i| a[i] == b[(i + r) % 3]));
        assert!(rot);
    }

    #[test]
    fn unknot_has_one_circle() {
        let s = LinkDiagram::unknot().seifert_circles();
        assert_eq!(s.len(), 1);
        assert!(s.circles[0].attachments.is_empty());
    }

    #[test]
    fn reused_label_is_rejected() {
        let bad = vec![
            Crossing::new([1, 5, 2, 4], Sign::Positive),
            Crossing::new([3, 1, 4, 6], Sign::Positive),
            Crossing::new([5, 3, 6, 6], Sign::Positive),
        ];
        assert!(matches!(LinkDiagram::new(bad, 0), Err(Error::InvalidDiagram(_))));
    }

    #[test]
    fn non_planar_gluing_is_rejected() {
        // Trefoil with the rotation at one crossing reflected: a genus-one map.
        let bad = vec![
            Crossing::new([1, 5, 2, 4], Sign::Positive),
            Crossing::new([3, 1, 4, 6], Sign::Positive),
            Crossing::new([5, 2, 6, 3], Sign::Negative),
        ];
        assert!(matches!(LinkDiagram::new(bad, 0), Err(Error::NonPlanar { .. })));
    }

    #[test]
    fn state_webs_of_trefoil() {
        let d = trefoil();
        let o = d.state_web(&State::all(3, Resolution::O));
        assert_eq!(o.num_vertices(), 0);
        assert_eq!(o.num_circles(), 2);
        let w = d.state_web(&State::all(3, Resolution::W));
        assert_eq!(w.num_vertices(), 6);
        w.validate().unwrap();
    }

    #[test]
    fn ab_graphs_of_trefoil() {
        let d = trefoil();
        let b = d.ab_resolution_graph(Smoothing::B);
        assert_eq!(b.num_circles, 2);
        assert!(b.is_adequate());
        let a = d.ab_resolution_graph(Smoothing::A);
        assert_eq!(a.num_circles, 3);
        assert_eq!(a.edges.len(), 3);
        let u = LinkDiagram::unknot().ab_resolution_graph(Smoothing::A);
        assert_eq!((u.num_circles, u.edges.len()), (1, 0));
        assert!(LinkDiagram::unknot().is_b_adequate());
    }

    #[test]
    fn kink_is_inadequate_on_one_side() {
        let d = LinkDiagram::from_braid_word(&[1], 2).unwrap();
        assert!(!(d.is_a_adequate() && d.is_b_adequate()));
        assert_eq!(d.seifert_circles().len(), 2);
    }

    #[test]
    fn mirror_is_involution() {
        let d = trefoil();
        let m = d.mirror();
        assert!(m.signs().iter().all(|&s| s == Sign::Negative));
        assert_eq!(m.mirror(), d);
        assert_eq!(LinkDiagram::unknot().mirror(), LinkDiagram::unknot());
    }

    #[test]
    fn connected_sum_counts() {
        let d = trefoil();
        let g = d.connected_sum(&d, 0, 0).unwrap();
        assert_eq!(g.num_crossings(), 6);
        assert!(g.is_positive());
        assert_eq!(g.num_link_components(), 1);
        assert_eq!(g.seifert_circles().len(), 2 + 2 - 1);
        assert_eq!(d.connected_sum(&LinkDiagram::unknot(), 2, 0).unwrap(), d);
    }

    #[test]
    fn disjoint_union_counts() {
        let u = LinkDiagram::unknot().disjoint_union(&LinkDiagram::unknot());
        assert_eq!((u.seifert_circles().len(), u.num_crossings()), (2, 0));
        let t = trefoil().disjoint_union(&LinkDiagram::unknot());
        assert_eq!((t.seifert_circles().len(), t.num_crossings()), (3, 3));
        assert!(!t.is_connected());
    }

    #[test]
    fn json_roundtrip() {
        let d = trefoil();
        let s = serde_json::to_string(&d).unwrap();
        let back: LinkDiagram = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn smoothing_a_kink_leaves_a_loop() {
        let d = LinkDiagram::from_braid_word(&[1], 2).unwrap();
        let s = d.smooth_crossing(0);
        assert_eq!(s.num_crossings(), 0);
        assert_eq!(s.free_loops(), 2);
    }
}
