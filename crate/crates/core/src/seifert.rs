//! Seifert graphs: one vertex per Seifert circle, one edge per crossing, and
//! at each vertex the order in which crossings are met along the circle.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::diagram::{LinkDiagram, SeifertCircleSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertGraph {
    pub num_vertices: usize,
    /// Endpoints of each crossing's edge, indexed by crossing id.
    pub edges: Vec<(usize, usize)>,
    /// Crossing ids met along each circle, in its orientation.
    pub rotation: Vec<Vec<usize>>,
}

/// Parallel classes of Seifert-graph edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedSeifertGraph {
    pub num_vertices: usize,
    /// Endpoint pair `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
    /// Crossing ids lifting each reduced edge.
    pub lifts: Vec<Vec<usize>>,
}

/// How two reduced edges interleave around a shared vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedPair {
    pub edges: (usize, usize),
    pub vertex: usize,
    /// Run lengths `a_1, b_1, ..., a_m, b_m`, starting at a run of the first edge.
    pub profile: Vec<usize>,
    pub mixing_index: usize,
}

impl MixedPair {
    pub fn is_mixed(&self) -> bool {
        self.mixing_index >= 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertReport {
    pub v: usize,
    pub e: usize,
    pub e_prime: usize,
    pub multiplicities: Vec<usize>,
    pub mu: usize,
    pub theta: usize,
    pub is_tree: bool,
    pub components: usize,
}

impl SeifertGraph {
    pub fn from_circles(circles: &SeifertCircleSet) -> Self {
        SeifertGraph {
            num_vertices: circles.len(),
            edges: circles.crossing_circles.iter().map(|&[a, b]| (a, b)).collect(),
            rotation: circles.circles.iter().map(|c| c.attachments.clone()).collect(),
        }
    }

    pub fn of_diagram(d: &LinkDiagram) -> Self {
        Self::from_circles(&d.seifert_circles())
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Same vertices, only the edges of crossings where `keep` holds.
    pub fn spanning_subgraph(&self, keep: impl Fn(usize) -> bool) -> SeifertGraph {
        let kept: Vec<bool> = (0..self.edges.len()).map(&keep).collect();
        SeifertGraph {
            num_vertices: self.num_vertices,
            edges: self.edges.clone(),
            rotation: self
                .rotation
                .iter()
                .map(|r| r.iter().copied().filter(|&c| kept[c]).collect())
                .collect(),
        }
        .restrict(&kept)
    }

    fn restrict(mut self, kept: &[bool]) -> SeifertGraph {
        // Kept crossings are renumbered consecutively.
        let map: Vec<Option<usize>> = {
            let mut next = 0;
            kept.iter()
                .map(|&k| {
                    k.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        self.edges = self
            .edges
            .iter()
            .zip(kept)
            .filter(|(_, &k)| k)
            .map(|(e, _)| *e)
            .collect();
        for r in &mut self.rotation {
            for c in r.iter_mut() {
                *c = map[*c].unwrap();
            }
        }
        self
    }

    /// Connected components, counting isolated vertices.
    pub fn num_components(&self) -> usize {
        let mut dsu = crate::diagram::Dsu::new(self.num_vertices);
        for &(a, b) in &self.edges {
            dsu.union(a, b);
        }
        (0..self.num_vertices)
            .filter(|&v| dsu.find(v) == v)
            .count()
    }

    /// Two-colorable.
    pub fn is_bipartite(&self) -> bool {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut color = vec![u8::MAX; self.num_vertices];
        for s in 0..self.num_vertices {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in &adj[v] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        q.push_back(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn reduce(&self) -> ReducedSeifertGraph {
        let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (c, &(a, b)) in self.edges.iter().enumerate() {
            classes.entry((a.min(b), a.max(b))).or_default().push(c);
        }
        let (edges, lifts) = classes.into_iter().unzip();
        ReducedSeifertGraph {
            num_vertices: self.num_vertices,
            edges,
            lifts,
        }
    }

    /// Interleaving of reduced edges `r1`, `r2` around their shared vertex.
    pub fn classify_pair(&self, red: &ReducedSeifertGraph, r1: usize, r2: usize) -> Result<MixedPair> {
        if r1 == r2 {
            return Err(Error::Precondition("a reduced edge cannot be paired with itself".into()));
        }
        let (a, b) = (red.edges[r1], red.edges[r2]);
        let shared: Vec<usize> = [a.0, a.1].into_iter().filter(|&x| x == b.0 || x == b.1).collect();
        let vertex = match shared.as_slice() {
            [v] => *v,
            [] => return Err(Error::Precondition(format!("reduced edges {r1} and {r2} are disjoint"))),
            _ => unreachable!("distinct reduced edges share at most one vertex"),
        };
        let mut owner = vec![0u8; self.edges.len()];
        for &c in &red.lifts[r1] {
            owner[c] = 1;
        }
        for &c in &red.lifts[r2] {
            owner[c] = 2;
        }
        let seq: Vec<u8> = self.rotation[vertex]
            .iter()
            .map(|&c| owner[c])
            .filter(|&o| o != 0)
            .collect();
        let (profile, mixing_index) = run_profile(&seq);
        Ok(MixedPair {
            edges: (r1, r2),
            vertex,
            profile,
            mixing_index,
        })
    }

    /// Every pair of reduced edges sharing a vertex.
    pub fn adjacent_pairs(&self, red: &ReducedSeifertGraph) -> Vec<MixedPair> {
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); self.num_vertices];
        for (i, &(a, b)) in red.edges.iter().enumerate() {
            at[a].push(i);
            at[b].push(i);
        }
        let mut out = Vec::new();
        for list in &at {
            for (i, &r1) in list.iter().enumerate() {
                for &r2 in &list[i + 1..] {
                    out.push(self.classify_pair(red, r1, r2).expect("edges share a vertex"));
                }
            }
        }
        out
    }

    /// Number of mixed pairs.
    pub fn theta(&self) -> usize {
        let red = self.reduce();
        self.adjacent_pairs(&red).iter().filter(|p| p.is_mixed()).count()
    }

    pub fn report(&self) -> SeifertReport {
        let red = self.reduce();
        let pairs = self.adjacent_pairs(&red);
        SeifertReport {
            v: self.num_vertices,
            e: self.num_edges(),
            e_prime: red.edges.len(),
            multiplicities: red.multiplicities(),
            mu: red.mu(),
            theta: pairs.iter().filter(|p| p.is_mixed()).count(),
            is_tree: red.is_tree(),
            components: self.num_components(),
        }
    }
}

/// Run lengths of a cyclic two-letter word (letters 1 and 2), starting at a
/// run of letter 1, and the number of letter-1 runs.
pub fn run_profile(seq: &[u8]) -> (Vec<usize>, usize) {
    let n = seq.len();
    if n == 0 {
        return (Vec::new(), 0);
    }
    // start where a 1 follows a different letter
    let start = (0..n).find(|&i| seq[i] == 1 && seq[(i + n - 1) % n] != 1);
    let Some(start) = start else {
        // a single letter throughout
        return (vec![n], usize::from(seq[0] == 1));
    };
    let mut runs = Vec::new();
    let mut len = 0;
    let mut cur = seq[start];
    for k in 0..n {
        let x = seq[(start + k) % n];
        if x == cur {
            len += 1;
        } else {
            runs.push(len);
            cur = x;
            len = 1;
        }
    }
    runs.push(len);
    let m = runs.len() / 2;
    (runs, m)
}

impl ReducedSeifertGraph {
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.lifts.iter().map(Vec::len).collect()
    }

    pub fn mu(&self) -> usize {
        self.lifts.iter().filter(|l| l.len() > 1).count()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.num_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.num_vertices
    }

    /// A cycle as a vertex sequence, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let adj = self.adjacency();
        let n = self.num_vertices;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &(w, e) in &adj[v] {
                    if parent[v].map(|(_, pe)| pe) == Some(e) {
                        continue;
                    }
                    if seen[w] {
                        // close the cycle through the lowest common ancestor
                        let path = |mut x: usize| {
                            let mut p = vec![x];
                            while let Some((y, _)) = parent[x] {
                                p.push(y);
                                x = y;
                            }
                            p
                        };
                        let pv = path(v);
                        let pw = path(w);
                        let lca = *pv.iter().find(|x| pw.contains(x))?;
                        let mut cycle: Vec<usize> = pv.iter().copied().take_while(|&x| x != lca).collect();
                        cycle.push(lca);
                        let back: Vec<usize> = pw.iter().copied().take_while(|&x| x != lca).collect();
                        cycle.extend(back.into_iter().rev());
                        return Some(cycle);
                    }
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    stack.push(w);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil_graph() -> SeifertGraph {
        SeifertGraph::of_diagram(&LinkDiagram::from_braid_word(&[1, 1, 1], 2).unwrap())
    }

    #[test]
    fn trefoil_graph_shape() {
        let g = trefoil_graph();
        assert_eq!((g.num_vertices, g.num_edges()), (2, 3));
        let r = g.reduce();
        assert_eq!(r.multiplicities(), vec![3]);
        assert_eq!(r.mu(), 1);
        assert_eq!(g.theta(), 0);
        assert!(r.is_tree());
        assert!(g.is_bipartite());
    }

    #[test]
    fn unknot_graph() {
        let g = SeifertGraph::of_diagram(&LinkDiagram::unknot());
        assert_eq!((g.num_vertices, g.num_edges()), (1, 0));
        let r = g.reduce();
        assert_eq!(r.num_edges(), 0);
        assert!(r.is_tree());
    }

    #[test]
    fn run_profiles() {
        assert_eq!(run_profile(&[1, 1, 1, 2, 2]), (vec![3, 2], 1));
        assert_eq!(run_profile(&[1, 2, 1, 2]), (vec![1, 1, 1, 1], 2));
        assert_eq!(run_profile(&[1, 2, 2, 1, 2, 1]), (vec![1, 1, 2, 2], 2));
    }

    #[test]
    fn profile_is_rotation_invariant() {
        let w = [1u8, 2, 2, 1, 2, 1, 1, 2];
        let m = run_profile(&w).1;
        for r in 0..w.len() {
            let rot: Vec<u8> = (0..w.len()).map(|i| w[(i + r) % w.len()]).collect();
            assert_eq!(run_profile(&rot).1, m);
            let swapped: Vec<u8> = rot.iter().map(|&x| 3 - x).collect();
            assert_eq!(run_profile(&swapped).1, m);
        }
    }

    #[test]
    fn alternating_three_braid_has_one_mixed_pair() {
        let d = LinkDiagram::from_braid_word(&[1, 2, 1, 2], 3).unwrap();
        let rep = SeifertGraph::of_diagram(&d).report();
        assert_eq!((rep.v, rep.e, rep.e_prime, rep.mu, rep.theta), (3, 4, 2, 2, 1));
    }

    #[test]
    fn cycle_certificate() {
        let r = ReducedSeifertGraph {
            num_vertices: 4,
            edges: vec![(0, 1), (1, 2), (2, 3), (0, 3)],
            lifts: vec![vec![0], vec![1], vec![2], vec![3]],
        };
        assert!(!r.is_tree());
        let c = r.find_cycle().unwrap();
        assert_eq!(c.len(), 4);
        let tree = ReducedSeifertGraph {
            num_vertices: 3,
            edges: vec![(0, 1), (1, 2)],
            lifts: vec![vec![0], vec![1]],
        };
        assert!(tree.find_cycle().is_none());
    }

    #[test]
    fn disjoint_pair_is_rejected() {
        let d = LinkDiagram::from_braid_word(&[1, 1, 3, 3], 4).unwrap();
        let g = SeifertGraph::of_diagram(&d);
        let r = g.reduce();
        assert!(g.classify_pair(&r, 0, 1).is_err());
        assert!(g.classify_pair(&r, 0, 0).is_err());
    }
}
