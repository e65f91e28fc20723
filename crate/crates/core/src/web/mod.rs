//! Closed A2 webs as combinatorial maps on the sphere.
//!
//! Every vertex is trivalent and is either a source (three outgoing edges) or
//! a sink (three incoming edges), so every edge runs from a source to a sink.
//! The embedding is a rotation system: the counterclockwise cyclic order of
//! edges at each vertex. Vertex-free oriented circles are carried as a count.

mod eval;
pub mod fixtures;
mod ow;

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eval::{reduce_step, reduce_step_with, Evaluator, ReductionOrder, Reduction, WebExpression};
pub use ow::ArcRef;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexKind {
    Source,
    Sink,
}

/// A directed edge side: `forward` walks tail (source) to head (sink).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

/// One face of a single connected component, as a boundary walk that keeps
/// the face on its right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Face {
    Walk(Vec<Dart>),
    /// One of the two discs bounded by a vertex-free circle.
    CircleSide { circle: usize, inner: bool },
}

impl Face {
    pub fn len(&self) -> usize {
        match self {
            Face::Walk(d) => d.len(),
            Face::CircleSide { .. } => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Web {
    kinds: Vec<VertexKind>,
    /// Counterclockwise edge order at each vertex.
    rotation: Vec<[usize; 3]>,
    /// `(tail, head)` = `(source, sink)`.
    edges: Vec<(usize, usize)>,
    circles: usize,
}

impl Web {
    pub fn empty() -> Self {
        Self::circles(0)
    }

    /// `n` disjoint vertex-free circles.
    pub fn circles(n: usize) -> Self {
        Web {
            kinds: Vec::new(),
            rotation: Vec::new(),
            edges: Vec::new(),
            circles: n,
        }
    }

    /// Builds and validates a web: orientation, trivalence, and a genus-0
    /// embedding for every connected component.
    pub fn new(
        kinds: Vec<VertexKind>,
        rotation: Vec<[usize; 3]>,
        edges: Vec<(usize, usize)>,
        circles: usize,
    ) -> Result<Self> {
        let w = Web {
            kinds,
            rotation,
            edges,
            circles,
        };
        w.validate()?;
        Ok(w)
    }

    pub(crate) fn new_unchecked(
        kinds: Vec<VertexKind>,
        rotation: Vec<[usize; 3]>,
        edges: Vec<(usize, usize)>,
        circles: usize,
    ) -> Self {
        let w = Web {
            kinds,
            rotation,
            edges,
            circles,
        };
        debug_assert!(w.validate().is_ok(), "invalid web: {:?}", w.validate());
        w
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.kinds.len();
        if self.rotation.len() != n {
            return Err(Error::InvalidWeb("rotation/vertex count mismatch".into()));
        }
        let mut seen = vec![0u8; self.edges.len()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for &e in rot {
                let Some(&(t, h)) = self.edges.get(e) else {
                    return Err(Error::InvalidWeb(format!("vertex {v} lists unknown edge {e}")));
                };
                if t != v && h != v {
                    return Err(Error::InvalidWeb(format!("edge {e} listed at non-incident vertex {v}")));
                }
                seen[e] += 1;
            }
        }
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            if t >= n || h >= n {
                return Err(Error::InvalidWeb(format!("edge {e} has an out-of-range endpoint")));
            }
            if self.kinds[t] != VertexKind::Source || self.kinds[h] != VertexKind::Sink {
                return Err(Error::InvalidWeb(format!("edge {e} does not run source to sink")));
            }
            if seen[e] != 2 {
                return Err(Error::InvalidWeb(format!("edge {e} appears {} times in rotations", seen[e])));
            }
        }
        for comp in self.vertex_components() {
            let vs: HashSet<usize> = comp.iter().copied().collect();
            let e = self.edges.iter().filter(|(t, _)| vs.contains(t)).count() as i64;
            let f = self
                .walk_faces()
                .iter()
                .filter(|walk| vs.contains(&self.dart_start(walk[0])))
                .count() as i64;
            let chi = comp.len() as i64 - e + f;
            if chi != 2 {
                return Err(Error::InvalidWeb(format!("component is not planar (chi = {chi})")));
            }
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_circles(&self) -> usize {
        self.circles
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty() && self.circles == 0
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn rotation(&self, v: usize) -> [usize; 3] {
        self.rotation[v]
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub(crate) fn dart_start(&self, d: Dart) -> usize {
        let (t, h) = self.edges[d.edge];
        if d.forward {
            t
        } else {
            h
        }
    }

    pub(crate) fn dart_end(&self, d: Dart) -> usize {
        let (t, h) = self.edges[d.edge];
        if d.forward {
            h
        } else {
            t
        }
    }

    fn slot_of(&self, v: usize, e: usize) -> usize {
        self.rotation[v]
            .iter()
            .position(|&x| x == e)
            .expect("edge not incident to vertex")
    }

    /// The dart that continues the face walk after `d`.
    pub(crate) fn next_dart(&self, d: Dart) -> Dart {
        let w = self.dart_end(d);
        let pos = self.slot_of(w, d.edge);
        let f = self.rotation[w][(pos + 1) % 3];
        Dart {
            edge: f,
            forward: self.edges[f].0 == w,
        }
    }

    /// Boundary walks of all faces of the vertex components.
    pub(crate) fn walk_faces(&self) -> Vec<Vec<Dart>> {
        let mut used = vec![[false; 2]; self.edges.len()];
        let mut faces = Vec::new();
        for e in 0..self.edges.len() {
            for (side, forward) in [(0usize, true), (1, false)] {
                if used[e][side] {
                    continue;
                }
                let start = Dart { edge: e, forward };
                let mut walk = Vec::new();
                let mut d = start;
                loop {
                    used[d.edge][usize::from(!d.forward)] = true;
                    walk.push(d);
                    d = self.next_dart(d);
                    if d == start {
                        break;
                    }
                }
                faces.push(walk);
            }
        }
        faces
    }

    /// All faces: boundary walks for each vertex component, and two discs
    /// per vertex-free circle.
    pub fn faces(&self) -> Vec<Face> {
        let mut out: Vec<Face> = self.walk_faces().into_iter().map(Face::Walk).collect();
        for c in 0..self.circles {
            out.push(Face::CircleSide { circle: c, inner: true });
            out.push(Face::CircleSide { circle: c, inner: false });
        }
        out
    }

    /// Vertex sets of the connected vertex components, in order of smallest vertex.
    pub fn vertex_components(&self) -> Vec<Vec<usize>> {
        let n = self.kinds.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![root];
            comp[root] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &e in &self.rotation[v] {
                    let (t, h) = self.edges[e];
                    let w = if t == v { h } else { t };
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Number of connected components, counting each circle.
    pub fn num_components(&self) -> usize {
        self.vertex_components().len() + self.circles
    }

    /// Restriction to a set of vertices closed under adjacency.
    pub fn induced(&self, vertices: &[usize]) -> Web {
        let mut new_id = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            new_id.insert(v, i);
        }
        let mut edge_id = HashMap::new();
        let mut edges = Vec::new();
        for &v in vertices {
            for &e in &self.rotation[v] {
                edge_id.entry(e).or_insert_with(|| {
                    let (t, h) = self.edges[e];
                    edges.push((new_id[&t], new_id[&h]));
                    edges.len() - 1
                });
            }
        }
        let rotation = vertices
            .iter()
            .map(|&v| self.rotation[v].map(|e| edge_id[&e]))
            .collect();
        let kinds = vertices.iter().map(|&v| self.kinds[v]).collect();
        Web {
            kinds,
            rotation,
            edges,
            circles: 0,
        }
    }

    /// Splits into connected vertex components (without circles) and the
    /// number of vertex-free circles.
    pub fn split_components(&self) -> (Vec<Web>, usize) {
        let comps = self.vertex_components();
        if comps.len() == 1 && self.circles == 0 {
            return (vec![self.clone()], 0);
        }
        (comps.iter().map(|c| self.induced(c)).collect(), self.circles)
    }

    /// Disjoint union.
    pub fn disjoint_union(&self, other: &Web) -> Web {
        let voff = self.kinds.len();
        let eoff = self.edges.len();
        let mut kinds = self.kinds.clone();
        kinds.extend_from_slice(&other.kinds);
        let mut rotation = self.rotation.clone();
        rotation.extend(other.rotation.iter().map(|r| r.map(|e| e + eoff)));
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(t, h)| (t + voff, h + voff)));
        Web {
            kinds,
            rotation,
            edges,
            circles: self.circles + other.circles,
        }
    }

    pub fn with_extra_circles(mut self, n: usize) -> Web {
        self.circles += n;
        self
    }

    /// Canonical encoding of a connected vertex component, invariant under
    /// relabeling of vertices and edges (orientation-preserving map
    /// isomorphism). Minimizes a breadth-first serialization over all roots.
    pub fn canonical_key(&self) -> Vec<u16> {
        let n = self.kinds.len();
        let mut best: Option<Vec<u16>> = None;
        let mut label = vec![u16::MAX; n];
        let mut entry = vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        let mut code = Vec::with_capacity(1 + 7 * n);
        for root in 0..n {
            for root_slot in 0..3 {
                label.iter_mut().for_each(|l| *l = u16::MAX);
                order.clear();
                code.clear();
                code.push(self.circles as u16);
                label[root] = 0;
                entry[root] = root_slot;
                order.push(root);
                let mut i = 0;
                let mut worse = false;
                while i < order.len() {
                    let v = order[i];
                    i += 1;
                    code.push(match self.kinds[v] {
                        VertexKind::Source => 0,
                        VertexKind::Sink => 1,
                    });
                    for k in 0..3 {
                        let e = self.rotation[v][(entry[v] + k) % 3];
                        let (t, h) = self.edges[e];
                        let w = if t == v { h } else { t };
                        let ws = self.slot_of(w, e);
                        if label[w] == u16::MAX {
                            label[w] = order.len() as u16;
                            entry[w] = ws;
                            order.push(w);
                        }
                        code.push(label[w]);
                        code.push(((ws + 3 - entry[w]) % 3) as u16);
                    }
                    if let Some(b) = &best {
                        let len = code.len();
                        if code[..len].cmp(&b[..len.min(b.len())]) == std::cmp::Ordering::Greater {
                            worse = true;
                            break;
                        }
                    }
                }
                if worse {
                    continue;
                }
                if order.len() != n {
                    // Disconnected input: fall back to a non-canonical but
                    // faithful serialization.
                    return self.raw_key();
                }
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code.clone());
                }
            }
        }
        best.unwrap_or_else(|| vec![self.circles as u16])
    }

    fn raw_key(&self) -> Vec<u16> {
        let mut code = vec![u16::MAX, self.circles as u16];
        for v in 0..self.kinds.len() {
            code.push(self.kinds[v] as u16);
            code.extend(self.rotation[v].iter().map(|&e| e as u16));
        }
        for &(t, h) in &self.edges {
            code.push(t as u16);
            code.push(h as u16);
        }
        code
    }

    /// Removes `dead_vertices` and `dead_edges`, then reconnects dangling edge
    /// ends: each `(into, out_of)` continues edge `into` (whose head is dead)
    /// along edge `out_of` (whose tail is dead). Chains that close up without
    /// touching a live vertex become circles.
    pub(crate) fn splice(
        &self,
        dead_vertices: &[usize],
        dead_edges: &[usize],
        joins: &[(usize, usize)],
    ) -> Web {
        let n = self.kinds.len();
        let mut dead_v = vec![false; n];
        for &v in dead_vertices {
            dead_v[v] = true;
        }
        let mut dead_e = vec![false; self.edges.len()];
        for &e in dead_edges {
            dead_e[e] = true;
        }
        let mut cont = vec![usize::MAX; self.edges.len()];
        for &(a, b) in joins {
            cont[a] = b;
        }
        let mut vid = vec![usize::MAX; n];
        let mut kinds = Vec::new();
        for v in 0..n {
            if !dead_v[v] {
                vid[v] = kinds.len();
                kinds.push(self.kinds[v]);
            }
        }
        let mut rotation = vec![[usize::MAX; 3]; kinds.len()];
        let mut edges = Vec::new();
        let mut visited = vec![false; self.edges.len()];
        for e in 0..self.edges.len() {
            let (t, _) = self.edges[e];
            if dead_e[e] || dead_v[t] {
                continue;
            }
            let mut cur = e;
            visited[cur] = true;
            let mut guard = 0;
            while dead_v[self.edges[cur].1] {
                cur = cont[cur];
                assert!(cur != usize::MAX, "dangling edge end without a join");
                visited[cur] = true;
                guard += 1;
                assert!(guard <= self.edges.len(), "splice chain does not terminate");
            }
            let h = self.edges[cur].1;
            let id = edges.len();
            edges.push((vid[t], vid[h]));
            rotation[vid[t]][self.slot_of(t, e)] = id;
            rotation[vid[h]][self.slot_of(h, cur)] = id;
        }
        let mut circles = self.circles;
        for e in 0..self.edges.len() {
            if dead_e[e] || visited[e] {
                continue;
            }
            let mut cur = e;
            loop {
                visited[cur] = true;
                cur = cont[cur];
                assert!(cur != usize::MAX, "open dangling chain");
                if cur == e {
                    break;
                }
                assert!(!visited[cur], "splice chain merges into a visited path");
            }
            circles += 1;
        }
        Web::new_unchecked(kinds, rotation, edges, circles)
    }
}

/// Incremental construction helper for hand-built webs.
#[derive(Default, Debug)]
pub struct WebBuilder {
    kinds: Vec<VertexKind>,
    edges: Vec<(usize, usize)>,
    rotation: Vec<Option<[usize; 3]>>,
    circles: usize,
}

impl WebBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, kind: VertexKind) -> usize {
        self.kinds.push(kind);
        self.rotation.push(None);
        self.kinds.len() - 1
    }

    pub fn edge(&mut self, tail: usize, head: usize) -> usize {
        self.edges.push((tail, head));
        self.edges.len() - 1
    }

    pub fn rotate(&mut self, v: usize, ccw: [usize; 3]) {
        self.rotation[v] = Some(ccw);
    }

    pub fn circle(&mut self) {
        self.circles += 1;
    }

    pub fn build(self) -> Result<Web> {
        let rotation = self
            .rotation
            .into_iter()
            .enumerate()
            .map(|(v, r)| r.ok_or_else(|| Error::InvalidWeb(format!("vertex {v} has no rotation"))))
            .collect::<Result<Vec<_>>>()?;
        Web::new(self.kinds, rotation, self.edges, self.circles)
    }
}

/// Breadth-first distances, used by tests and fixtures to sanity-check
/// connectivity.
pub fn bfs_reachable(web: &Web, root: usize) -> usize {
    let mut seen = vec![false; web.num_vertices()];
    let mut q = VecDeque::from([root]);
    seen[root] = true;
    let mut count = 1;
    while let Some(v) = q.pop_front() {
        for e in web.rotation(v) {
            let (t, h) = web.edge(e);
            let w = if t == v { h } else { t };
            if !seen[w] {
                seen[w] = true;
                count += 1;
                q.push_back(w);
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two vertices joined by three parallel edges.
    pub(crate) fn theta() -> Web {
        let mut b = WebBuilder::new();
        let s = b.vertex(VertexKind::Source);
        let t = b.vertex(VertexKind::Sink);
        let e: Vec<_> = (0..3).map(|_| b.edge(s, t)).collect();
        b.rotate(s, [e[0], e[1], e[2]]);
        b.rotate(t, [e[2], e[1], e[0]]);
        b.build().unwrap()
    }

    #[test]
    fn circle_has_two_faces() {
        assert_eq!(Web::circles(1).faces().len(), 2);
    }

    #[test]
    fn theta_faces_satisfy_euler() {
        let w = theta();
        let faces = w.walk_faces();
        assert_eq!(faces.len(), 3);
        assert!(faces.iter().all(|f| f.len() == 2));
        assert_eq!(2 - 3 + faces.len() as i64, 2);
    }

    #[test]
    fn non_planar_rotation_is_rejected() {
        let mut b = WebBuilder::new();
        let s = b.vertex(VertexKind::Source);
        let t = b.vertex(VertexKind::Sink);
        let e: Vec<_> = (0..3).map(|_| b.edge(s, t)).collect();
        b.rotate(s, [e[0], e[1], e[2]]);
        b.rotate(t, [e[0], e[1], e[2]]);
        assert!(matches!(b.build(), Err(Error::InvalidWeb(_))));
    }

    #[test]
    fn misoriented_edge_is_rejected() {
        let mut b = WebBuilder::new();
        let s = b.vertex(VertexKind::Source);
        let t = b.vertex(VertexKind::Sink);
        let e0 = b.edge(t, s);
        let e1 = b.edge(s, t);
        let e2 = b.edge(s, t);
        b.rotate(s, [e0, e1, e2]);
        b.rotate(t, [e2, e1, e0]);
        assert!(b.build().is_err());
    }

    #[test]
    fn canonical_key_ignores_labels() {
        let w = theta();
        let mut b = WebBuilder::new();
        let t = b.vertex(VertexKind::Sink);
        let s = b.vertex(VertexKind::Source);
        let e: Vec<_> = (0..3).map(|_| b.edge(s, t)).collect();
        b.rotate(s, [e[1], e[2], e[0]]);
        b.rotate(t, [e[1], e[0], e[2]]);
        let w2 = b.build().unwrap();
        assert_eq!(w.canonical_key(), w2.canonical_key());
    }

    #[test]
    fn splice_collapses_theta_bubble_to_circle() {
        let w = theta();
        // remove both vertices and two of the edges; the third edge closes up
        let out = w.splice(&[0, 1], &[0, 1], &[(2, 2)]);
        assert_eq!(out.num_vertices(), 0);
        assert_eq!(out.num_circles(), 1);
    }
}
