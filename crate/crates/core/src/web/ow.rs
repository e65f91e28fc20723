use super::{Dart, VertexKind, Web};
use crate::error::{Error, Result};

/// One arc of an OW-move site: an edge, or one of the vertex-free circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcRef {
    Edge(usize),
    Circle,
}

impl Web {
    /// Replaces two parallel, coherently oriented arcs by the W-piece: a new
    /// sink receiving both arcs, a new source emitting both, and a middle edge
    /// from the source to the sink.
    ///
    /// `left` and `right` are seen in the direction of travel: when both are
    /// edges, one face must lie to the right of `left` and to the left of
    /// `right`.
    pub fn apply_ow_move(&self, left: ArcRef, right: ArcRef) -> Result<Web> {
        let need_circles = usize::from(left == ArcRef::Circle) + usize::from(right == ArcRef::Circle);
        if need_circles > self.circles {
            return Err(Error::OwSite(format!("site needs {need_circles} circles, web has {}", self.circles)));
        }
        if let (ArcRef::Edge(a), ArcRef::Edge(b)) = (left, right) {
            if a == b {
                return Err(Error::OwSite("both arcs are the same edge".into()));
            }
            let fa = Dart { edge: a, forward: true };
            let fb = Dart { edge: b, forward: false };
            let shared = self
                .walk_faces()
                .iter()
                .any(|f| f.contains(&fa) && f.contains(&fb));
            if !shared {
                return Err(Error::OwSite(format!(
                    "edges {a} and {b} do not bound a common face with parallel orientation"
                )));
            }
        }
        for r in [left, right] {
            if let ArcRef::Edge(e) = r {
                if e >= self.edges.len() {
                    return Err(Error::OwSite(format!("no edge {e}")));
                }
            }
        }

        let mut w = self.clone();
        w.circles -= need_circles;
        let sink = w.kinds.len();
        w.kinds.push(VertexKind::Sink);
        let source = w.kinds.len();
        w.kinds.push(VertexKind::Source);
        w.rotation.push([usize::MAX; 3]);
        w.rotation.push([usize::MAX; 3]);

        // Returns (edge entering the new sink, edge leaving the new source).
        let cut = |w: &mut Web, arc: ArcRef| -> (usize, usize) {
            match arc {
                ArcRef::Circle => {
                    let id = w.edges.len();
                    w.edges.push((source, sink));
                    (id, id)
                }
                ArcRef::Edge(e) => {
                    let (t, h) = w.edges[e];
                    w.edges[e] = (t, sink);
                    let id = w.edges.len();
                    w.edges.push((source, h));
                    let slot = w.rotation[h].iter().position(|&x| x == e).unwrap();
                    w.rotation[h][slot] = id;
                    (e, id)
                }
            }
        };
        let (a_in, a_out) = cut(&mut w, left);
        let (b_in, b_out) = cut(&mut w, right);
        let mid = w.edges.len();
        w.edges.push((source, sink));
        w.rotation[sink] = [a_in, b_in, mid];
        w.rotation[source] = [b_out, a_out, mid];
        w.validate()?;
        Ok(w)
    }

    /// All OW sites between distinct edges: pairs `(left, right)` sharing a
    /// face with parallel orientation.
    pub fn ow_sites(&self) -> Vec<(ArcRef, ArcRef)> {
        let mut out = Vec::new();
        for f in self.walk_faces() {
            for a in f.iter().filter(|d| d.forward) {
                for b in f.iter().filter(|d| !d.forward) {
                    if a.edge != b.edge {
                        out.push((ArcRef::Edge(a.edge), ArcRef::Edge(b.edge)));
                    }
                }
            }
        }
        out.sort_by_key(|&(a, b)| match (a, b) {
            (ArcRef::Edge(x), ArcRef::Edge(y)) => (x, y),
            _ => (usize::MAX, usize::MAX),
        });
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use crate::web::Evaluator;

    #[test]
    fn two_circles_become_theta() {
        let w = Web::circles(2);
        let t = w.apply_ow_move(ArcRef::Circle, ArcRef::Circle).unwrap();
        assert_eq!(t.num_vertices(), 2);
        assert_eq!(t.num_edges(), 3);
        let ev = Evaluator::new();
        let q2 = LaurentPoly::qint2();
        let q3 = LaurentPoly::qint3();
        assert_eq!(ev.evaluate(&w).unwrap(), &q3 * &q3);
        assert_eq!(ev.evaluate(&t).unwrap(), q2 * q3);
    }

    #[test]
    fn site_inside_theta_changes_degree_by_one() {
        let t = Web::circles(2).apply_ow_move(ArcRef::Circle, ArcRef::Circle).unwrap();
        let ev = Evaluator::new();
        let d0 = ev.evaluate(&t).unwrap().degree().unwrap();
        let sites = t.ow_sites();
        assert!(!sites.is_empty());
        for (a, b) in sites {
            let u = t.apply_ow_move(a, b).unwrap();
            let d1 = ev.evaluate(&u).unwrap().degree().unwrap();
            assert_eq!((d1 - d0).abs(), 1);
        }
    }

    #[test]
    fn antiparallel_or_missing_arcs_are_rejected() {
        let t = Web::circles(2).apply_ow_move(ArcRef::Circle, ArcRef::Circle).unwrap();
        assert!(matches!(t.apply_ow_move(ArcRef::Edge(0), ArcRef::Edge(0)), Err(Error::OwSite(_))));
        assert!(matches!(Web::circles(1).apply_ow_move(ArcRef::Circle, ArcRef::Circle), Err(Error::OwSite(_))));
    }
}
