//! TQFT spaces through trivalent spines: admissible labelings, the
//! handlebody vector, and expansions in the solid-torus basis.

use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::recoupling::{admissible, hopf_value, Label};
use crate::scalars::{Ring, Scalar};
use crate::skein::{evaluate, BraidDiagram, End, LabeledLink, LinkLabel, NodeKind};

/// A trivalent spine. Edges join two vertices (possibly the same one);
/// legs are boundary edges ending at a vertex. A spine with no vertices is a
/// single circle (`circle: true`), the spine of the solid torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spine {
    #[serde(default)]
    pub vertices: usize,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub legs: Vec<usize>,
    #[serde(default)]
    pub circle: bool,
}

impl Spine {
    pub fn torus() -> Spine {
        Spine { vertices: 0, edges: Vec::new(), legs: Vec::new(), circle: true }
    }

    /// Loop with one leg: the once-punctured torus.
    pub fn punctured_torus() -> Spine {
        Spine { vertices: 1, edges: vec![[0, 0]], legs: vec![0], circle: false }
    }

    /// H-shaped spine: legs 0, 1 at vertex 0, legs 2, 3 at vertex 1.
    pub fn four_punctured_sphere() -> Spine {
        Spine { vertices: 2, edges: vec![[0, 1]], legs: vec![0, 0, 1, 1], circle: false }
    }

    /// Theta graph: genus 2.
    pub fn theta() -> Spine {
        Spine { vertices: 2, edges: vec![[0, 1], [0, 1], [0, 1]], legs: Vec::new(), circle: false }
    }

    /// Two loops joined by a bridge: edges are `[loop, bridge, loop]`.
    pub fn handcuff() -> Spine {
        Spine { vertices: 2, edges: vec![[0, 0], [0, 1], [1, 1]], legs: Vec::new(), circle: false }
    }

    /// Number of labeled 1-cells: the edges, or 1 for the circle.
    pub fn edge_count(&self) -> usize {
        if self.circle {
            1
        } else {
            self.edges.len()
        }
    }

    pub fn genus(&self) -> usize {
        if self.circle {
            1
        } else {
            self.edges.len() + 1 - self.vertices
        }
    }

    pub fn is_closed(&self) -> bool {
        self.legs.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::MalformedDiagram(format!("spine: {m}")));
        if self.circle {
            if self.vertices != 0 || !self.edges.is_empty() || !self.legs.is_empty() {
                return bad("a circle spine has no vertices, edges or legs");
            }
            return Ok(());
        }
        if self.vertices == 0 {
            return bad("no vertices");
        }
        let mut degree = vec![0usize; self.vertices];
        for e in &self.edges {
            for &v in e {
                if v >= self.vertices {
                    return bad("edge endpoint out of range");
                }
                degree[v] += 1;
            }
        }
        for &v in &self.legs {
            if v >= self.vertices {
                return bad("leg endpoint out of range");
            }
            degree[v] += 1;
        }
        if degree.iter().any(|&d| d != 3) {
            return bad("every vertex must be trivalent");
        }
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            parent[a] = b;
        }
        let root = find(&mut parent, 0);
        if (0..self.vertices).any(|v| find(&mut parent, v) != root) {
            return bad("not connected");
        }
        Ok(())
    }

    /// Labels meeting vertex `v` under a labeling of edges and legs.
    fn vertex_labels(&self, v: usize, edges: &[Label], legs: &[Label]) -> Vec<Label> {
        let mut out = Vec::with_capacity(3);
        for (e, ends) in self.edges.iter().enumerate() {
            for &x in ends {
                if x == v {
                    out.push(edges[e]);
                }
            }
        }
        for (i, &x) in self.legs.iter().enumerate() {
            if x == v {
                out.push(legs[i]);
            }
        }
        out
    }
}

/// All admissible labelings of the spine's edges, lexicographic in edge
/// order, with legs labeled by `boundary`.
pub fn basis(r: u32, spine: &Spine, boundary: &[Label]) -> Result<Vec<Vec<Label>>> {
    if r < 3 {
        return Err(Error::InvalidParams(format!("r = {r} < 3")));
    }
    spine.validate()?;
    if boundary.len() != spine.legs.len() {
        return Err(Error::MalformedDiagram(format!(
            "spine has {} legs but {} boundary labels were given",
            spine.legs.len(),
            boundary.len()
        )));
    }
    let max = r - 2;
    if let Some(&l) = boundary.iter().find(|&&l| l > max) {
        return Err(Error::LabelOutOfRange { label: l, r });
    }
    let n = spine.edge_count();
    let mut out = Vec::new();
    let mut cur = vec![0 as Label; n];
    loop {
        let ok = (0..spine.vertices).all(|v| {
            let l = spine.vertex_labels(v, &cur, boundary);
            admissible(r, l[0], l[1], l[2])
        });
        if ok {
            out.push(cur.clone());
        }
        // odometer, last edge fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < max {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

pub fn dimension(r: u32, spine: &Spine, boundary: &[Label]) -> Result<usize> {
    Ok(basis(r, spine, boundary)?.len())
}

/// The empty handlebody: the basis vector of the zero labeling.
pub fn handlebody_vector(ring: &Arc<Ring>, spine: &Spine) -> Result<Vec<Scalar>> {
    if !spine.is_closed() {
        return Err(Error::Unsupported("handlebody vector needs a closed surface".into()));
    }
    let b = basis(ring.r(), spine, &[])?;
    Ok(b.iter().map(|l| if l.iter().all(|&x| x == 0) { Scalar::one(ring) } else { Scalar::zero(ring) }).collect())
}

/// `S_{jk}`: the Hopf link labeled `j, k`, for `j, k = 0..=r-2`.
pub fn hopf_matrix(ring: &Arc<Ring>) -> Matrix {
    let max = ring.r() - 2;
    Matrix::from_rows(ring, (0..=max).map(|j| (0..=max).map(|k| hopf_value(ring, j, k)).collect()).collect())
}

/// Labels `a` with `(a, a, e)` admissible: the basis of the once-punctured
/// torus with boundary label `e`.
pub fn punctured_torus_labels(r: u32, e: Label) -> Vec<Label> {
    (0..=r - 2).filter(|&a| admissible(r, a, a, e)).collect()
}

/// Two Hopf-clasped loops labeled `a` and `b`, each with a vertex, the two
/// vertices joined by an `e`-labeled edge.
pub fn linked_handcuff(a: Label, b: Label, e: Label) -> Result<LabeledLink> {
    let built = BraidDiagram::new(2, &[1, 1]).closure()?;
    let mut d = built.diagram;
    let bridge = d.add_comp();
    // closing arcs pass to the right; the inner one (last position) carries u,
    // the outer one v, both running downward
    let u = d.add_node(NodeKind::Vertex, 3);
    let v = d.add_node(NodeKind::Vertex, 3);
    let (inner, outer) = (built.closing_edges[1].unwrap(), built.closing_edges[0].unwrap());
    for (edge, x, in_leg, out_leg) in [(inner, u, 0, 1), (outer, v, 0, 2)] {
        let head = d.edges[edge].head;
        let comp = d.edges[edge].comp;
        d.edges[edge].head = End::Node(x, in_leg);
        d.edges.push(crate::skein::Edge { tail: End::Node(x, out_leg), head, comp });
    }
    d.edges.push(crate::skein::Edge { tail: End::Node(u, 2), head: End::Node(v, 1), comp: bridge });
    d.relink();
    let mut labels = vec![LinkLabel::Label(e); 3];
    labels[built.strand_comp[0]] = LinkLabel::Label(a);
    labels[built.strand_comp[1]] = LinkLabel::Label(b);
    let link = LabeledLink::blackboard(d, labels);
    Ok(link)
}

/// Pairing of the once-punctured torus bases on the two sides of the
/// standard splitting: `G_{ab}` is the linked handcuff `(a, b, e)`.
pub fn punctured_torus_pairing(ring: &Arc<Ring>, e: Label) -> Result<Matrix> {
    let labels = punctured_torus_labels(ring.r(), e);
    let mut rows = Vec::with_capacity(labels.len());
    for &a in &labels {
        let mut row = Vec::with_capacity(labels.len());
        for &b in &labels {
            row.push(evaluate(ring, &linked_handcuff(a, b, e)?)?);
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(ring, rows))
}

/// Coordinates of the `(p, q)` curve on the boundary of the solid torus,
/// pushed inside, in the basis `b_k` (core labeled `k`). The meridian is
/// `(1, 0)`; the curve carries its surface framing `pq`.
pub fn expand_solid_torus(ring: &Arc<Ring>, p: i64, q: i64) -> Result<Vec<Scalar>> {
    if p.gcd(&q) != 1 {
        return Err(Error::Inadmissible(format!("({p}, {q}) is not a primitive curve")));
    }
    let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
    let max = ring.r() - 2;
    let mut pairings = Vec::with_capacity(max as usize + 1);
    for j in 0..=max {
        let v = if q == 0 {
            // bounds a disk: a trivial loop beside the dual core
            let curve = LabeledLink::unknot(LinkLabel::Label(1), 0);
            evaluate(ring, &curve.split_union(&LabeledLink::unknot(LinkLabel::Label(j), 0)))?
        } else {
            let q = q as usize;
            let gens: Vec<i32> = (1..q as i32).collect();
            let mut word = Vec::new();
            for _ in 0..p.unsigned_abs() {
                for &g in &gens {
                    word.push(if p > 0 { g } else { -g });
                }
            }
            let built = BraidDiagram::new(q, &word).encircle(0, q - 1).closure()?;
            let comps = built.diagram.comps;
            let mut labels = vec![LinkLabel::Label(1); comps];
            let circle = built.circle_comps[0];
            labels[circle] = LinkLabel::Label(j);
            let mut framings = vec![0i64; comps];
            framings[circle] = built.diagram.self_writhe(circle);
            for c in 0..comps {
                if c != circle {
                    framings[c] = p * q as i64;
                }
            }
            evaluate(ring, &LabeledLink::new(built.diagram, labels, framings))?
        };
        pairings.push(v);
    }
    let s = hopf_matrix(ring);
    Ok(s.transpose().inverse()?.apply(&pairings))
}
