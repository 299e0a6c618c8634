//! Planar diagrams of framed links and ribbon graphs.
//!
//! Nodes carry their incident edges in counterclockwise order. A crossing
//! lists legs `[a, b, c, d]` with the under strand running `a -> c`; a
//! vertex is a trivalent ribbon-graph vertex. Every edge belongs to one
//! component, which later receives a width (its label). Open diagrams
//! end on numbered bottom and top slots and evaluate to TL elements.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{Ring, Scalar};
use crate::skein::network::{NetBox, Network, NetworkBuilder};
use crate::tl::{jones_wenzl, TLDiagram, TLElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    Node(usize, usize),
    Bottom(usize),
    Top(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: End,
    pub head: End,
    pub comp: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Crossing,
    Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub legs: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Components realized as crossingless circles.
    pub loops: Vec<usize>,
    pub comps: usize,
}

/// Connections inside a `k x l` crossing grid. Cell `(i, j)` sits on under
/// strand `i` (numbered west to east) and over strand `j` (south to north);
/// its sides are `0..4 = S, E, N, W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridEnd {
    Cell(usize, usize, usize),
    /// Leg of the enclosing crossing and ccw position on it.
    Leg(usize, usize),
}

pub fn grid_links(k: usize, l: usize) -> Vec<(GridEnd, GridEnd)> {
    use GridEnd::*;
    let mut out = Vec::new();
    if k == 0 || l == 0 {
        for i in 0..k {
            out.push((Leg(0, i), Leg(2, k - 1 - i)));
        }
        for j in 0..l {
            out.push((Leg(1, j), Leg(3, l - 1 - j)));
        }
        return out;
    }
    for i in 0..k {
        out.push((Leg(0, i), Cell(i, 0, 0)));
        out.push((Cell(i, l - 1, 2), Leg(2, k - 1 - i)));
        for j in 0..l - 1 {
            out.push((Cell(i, j, 2), Cell(i, j + 1, 0)));
        }
    }
    for j in 0..l {
        out.push((Leg(1, j), Cell(k - 1, j, 1)));
        out.push((Cell(0, j, 3), Leg(3, l - 1 - j)));
        for i in 0..k - 1 {
            out.push((Cell(i, j, 1), Cell(i + 1, j, 3)));
        }
    }
    out
}

impl Diagram {
    pub fn new() -> Diagram {
        Diagram::default()
    }

    pub fn add_comp(&mut self) -> usize {
        self.comps += 1;
        self.comps - 1
    }

    pub fn add_node(&mut self, kind: NodeKind, arity: usize) -> usize {
        self.nodes.push(Node { kind, legs: vec![usize::MAX; arity] });
        self.nodes.len() - 1
    }

    pub fn add_edge(&mut self, tail: End, head: End, comp: usize) -> usize {
        let e = self.edges.len();
        self.edges.push(Edge { tail, head, comp });
        for end in [tail, head] {
            if let End::Node(n, l) = end {
                self.nodes[n].legs[l] = e;
            }
        }
        e
    }

    pub fn add_loop(&mut self) -> usize {
        let c = self.add_comp();
        self.loops.push(c);
        c
    }

    pub fn crossing_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Crossing).count()
    }

    pub fn has_vertices(&self) -> bool {
        self.nodes.iter().any(|n| n.kind == NodeKind::Vertex)
    }

    pub fn is_closed(&self) -> bool {
        self.edges
            .iter()
            .all(|e| matches!(e.tail, End::Node(..)) && matches!(e.head, End::Node(..)))
    }

    pub fn bottom_count(&self) -> usize {
        self.edges
            .iter()
            .flat_map(|e| [e.tail, e.head])
            .filter(|e| matches!(e, End::Bottom(_)))
            .count()
    }

    pub fn top_count(&self) -> usize {
        self.edges
            .iter()
            .flat_map(|e| [e.tail, e.head])
            .filter(|e| matches!(e, End::Top(_)))
            .count()
    }

    fn edge_at(&self, node: usize, leg: usize) -> &Edge {
        &self.edges[self.nodes[node].legs[leg]]
    }

    /// Whether the edge at this leg ends (has its head) here.
    pub fn is_incoming(&self, node: usize, leg: usize) -> bool {
        self.edge_at(node, leg).head == End::Node(node, leg)
    }

    pub fn comp_at(&self, node: usize, leg: usize) -> usize {
        self.edge_at(node, leg).comp
    }

    /// `+1` when the over strand runs from leg `d` to leg `b`.
    pub fn crossing_sign(&self, x: usize) -> i64 {
        if self.is_incoming(x, 3) {
            1
        } else {
            -1
        }
    }

    pub fn comp_edges(&self, comp: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].comp == comp).collect()
    }

    /// Sum of signs of crossings of `comp` with itself.
    pub fn self_writhe(&self, comp: usize) -> i64 {
        (0..self.nodes.len())
            .filter(|&x| self.nodes[x].kind == NodeKind::Crossing)
            .filter(|&x| self.comp_at(x, 0) == comp && self.comp_at(x, 1) == comp)
            .map(|x| self.crossing_sign(x))
            .sum()
    }

    /// Linking number of two distinct components.
    pub fn linking(&self, i: usize, j: usize) -> i64 {
        let twice: i64 = (0..self.nodes.len())
            .filter(|&x| self.nodes[x].kind == NodeKind::Crossing)
            .filter(|&x| {
                let (u, o) = (self.comp_at(x, 0), self.comp_at(x, 1));
                (u == i && o == j) || (u == j && o == i)
            })
            .map(|x| self.crossing_sign(x))
            .sum();
        twice / 2
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::MalformedDiagram(m.to_string()));
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.comp >= self.comps {
                return bad("edge refers to an unknown component");
            }
            for end in [edge.tail, edge.head] {
                if let End::Node(n, l) = end {
                    if n >= self.nodes.len() || l >= self.nodes[n].legs.len() || self.nodes[n].legs[l] != e {
                        return bad("edge end does not match node leg");
                    }
                }
            }
        }
        for (x, node) in self.nodes.iter().enumerate() {
            let want = match node.kind {
                NodeKind::Crossing => 4,
                NodeKind::Vertex => 3,
            };
            if node.legs.len() != want {
                return bad("node has the wrong number of legs");
            }
            for (l, &e) in node.legs.iter().enumerate() {
                if e >= self.edges.len() {
                    return bad("node leg is not attached");
                }
                let edge = &self.edges[e];
                if edge.tail != End::Node(x, l) && edge.head != End::Node(x, l) {
                    return bad("node leg does not match edge");
                }
            }
            if node.kind == NodeKind::Crossing {
                if !self.is_incoming(x, 0) || self.is_incoming(x, 2) {
                    return bad("crossing under strand must enter at leg a and leave at leg c");
                }
                if self.is_incoming(x, 1) == self.is_incoming(x, 3) {
                    return bad("crossing over strand must pass through");
                }
                if self.comp_at(x, 0) != self.comp_at(x, 2) || self.comp_at(x, 1) != self.comp_at(x, 3) {
                    return bad("strands change component at a crossing");
                }
            }
        }
        let mut bottoms: Vec<usize> = Vec::new();
        let mut tops: Vec<usize> = Vec::new();
        for edge in &self.edges {
            for end in [edge.tail, edge.head] {
                match end {
                    End::Bottom(i) => bottoms.push(i),
                    End::Top(i) => tops.push(i),
                    End::Node(..) => {}
                }
            }
        }
        for v in [&mut bottoms, &mut tops] {
            v.sort_unstable();
            if v.iter().enumerate().any(|(i, &s)| i != s) {
                return bad("boundary slots must be numbered 0..n without repeats");
            }
        }
        if !self.is_planar() {
            return bad("rotation system is not planar");
        }
        Ok(())
    }

    /// Euler characteristic test on the rotation system, with the boundary of
    /// an open diagram collapsed to one extra vertex.
    pub fn is_planar(&self) -> bool {
        let nb = self.bottom_count();
        let nt = self.top_count();
        let boundary = self.nodes.len();
        let has_boundary = nb + nt > 0;
        // boundary legs: counterclockwise around the outer vertex is the
        // boundary circle read clockwise: tops left to right, bottoms right to left
        let boundary_leg = |end: End| match end {
            End::Top(i) => i,
            End::Bottom(i) => nt + (nb - 1 - i),
            End::Node(..) => unreachable!(),
        };
        let locate = |end: End| -> (usize, usize) {
            match end {
                End::Node(n, l) => (n, l),
                other => (boundary, boundary_leg(other)),
            }
        };
        let vcount = self.nodes.len() + usize::from(has_boundary);
        let mut degree: Vec<usize> = self.nodes.iter().map(|n| n.legs.len()).collect();
        if has_boundary {
            degree.push(nb + nt);
        }
        // leg -> (edge, is_tail)
        let mut at: Vec<Vec<(usize, bool)>> = degree.iter().map(|&d| vec![(usize::MAX, false); d]).collect();
        for (e, edge) in self.edges.iter().enumerate() {
            let (tn, tl) = locate(edge.tail);
            let (hn, hl) = locate(edge.head);
            at[tn][tl] = (e, true);
            at[hn][hl] = (e, false);
        }
        // darts: 2e = along, 2e+1 = against
        let ne = self.edges.len();
        let mut seen = vec![false; 2 * ne];
        let mut faces = 0usize;
        for start in 0..2 * ne {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut dart = start;
            while !seen[dart] {
                seen[dart] = true;
                let edge = &self.edges[dart / 2];
                let arrive = if dart % 2 == 0 { edge.head } else { edge.tail };
                let (n, l) = locate(arrive);
                let nl = (l + degree[n] - 1) % degree[n];
                let (e2, is_tail) = at[n][nl];
                dart = 2 * e2 + usize::from(!is_tail);
            }
        }
        // connected components over nodes
        let mut parent: Vec<usize> = (0..vcount).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for edge in &self.edges {
            let a = find(&mut parent, locate(edge.tail).0);
            let b = find(&mut parent, locate(edge.head).0);
            parent[a] = b;
        }
        let comps = (0..vcount).filter(|&x| find(&mut parent, x) == x).count();
        vcount as i64 - ne as i64 + faces as i64 == 2 * comps as i64
    }

    /// Inserts a kink on edge `e`, returning the new crossing. A positive
    /// kink changes the blackboard framing by `+1`.
    pub fn add_curl(&mut self, e: usize, positive: bool) -> usize {
        let Edge { head, comp, .. } = self.edges[e].clone();
        let x = self.add_node(NodeKind::Crossing, 4);
        // reuse `e` for the part entering the kink
        self.edges[e].head = End::Node(x, 0);
        self.nodes[x].legs[0] = e;
        if positive {
            // leave under at c, loop round to d, pass over to b
            self.add_edge(End::Node(x, 2), End::Node(x, 3), comp);
            self.add_edge(End::Node(x, 1), head, comp);
        } else {
            self.add_edge(End::Node(x, 2), End::Node(x, 1), comp);
            self.add_edge(End::Node(x, 3), head, comp);
        }
        x
    }

    /// Adds kinks so the blackboard framing of `comp` equals `framing`.
    /// Free loops are first turned into a single edge around one kink pair.
    pub fn materialize_framing(&mut self, comp: usize, framing: i64) {
        let mut w = self.self_writhe(comp);
        if w == framing {
            return;
        }
        let e = match self.comp_edges(comp).first() {
            Some(&e) => e,
            None => {
                self.unloop(comp);
                self.comp_edges(comp)[0]
            }
        };
        while w < framing {
            self.add_curl(e, true);
            w += 1;
        }
        while w > framing {
            self.add_curl(e, false);
            w -= 1;
        }
    }

    /// Replaces a crossingless circle by a circle through a `+1` and a `-1`
    /// kink, so that it has edges to work with.
    fn unloop(&mut self, comp: usize) {
        self.loops.retain(|&c| c != comp);
        let x = self.add_node(NodeKind::Crossing, 4);
        // positive kink closed on itself: b back to a
        self.add_edge(End::Node(x, 2), End::Node(x, 3), comp);
        let e = self.add_edge(End::Node(x, 1), End::Node(x, 0), comp);
        self.add_curl(e, false);
    }

    /// Reverses the orientation of every edge of `comp`, keeping crossing
    /// legs in the `a -> c` under convention.
    pub fn reverse_comp(&mut self, comp: usize) {
        let rotated: Vec<bool> = (0..self.nodes.len())
            .map(|x| self.nodes[x].kind == NodeKind::Crossing && self.comp_at(x, 0) == comp)
            .collect();
        for edge in self.edges.iter_mut() {
            if edge.comp == comp {
                std::mem::swap(&mut edge.tail, &mut edge.head);
            }
        }
        self.rotate_crossings(&rotated);
    }

    /// Turns the marked crossings by half a revolution (legs `[c, d, a, b]`).
    pub(crate) fn rotate_crossings(&mut self, which: &[bool]) {
        for edge in self.edges.iter_mut() {
            for end in [&mut edge.tail, &mut edge.head] {
                if let End::Node(n, l) = *end {
                    if which[n] {
                        *end = End::Node(n, (l + 2) % 4);
                    }
                }
            }
        }
        self.relink();
    }

    /// Rebuilds node legs from edge ends.
    pub(crate) fn relink(&mut self) {
        for e in 0..self.edges.len() {
            for end in [self.edges[e].tail, self.edges[e].head] {
                if let End::Node(n, l) = end {
                    self.nodes[n].legs[l] = e;
                }
            }
        }
    }

    /// Puts a small meridian circle around edge `e` as a new component and
    /// returns it. The circle links the edge's component once.
    pub fn insert_meridian(&mut self, e: usize) -> usize {
        let m = self.add_comp();
        let Edge { head, comp, .. } = self.edges[e].clone();
        // x1: meridian under, edge over; x2: edge under, meridian over
        let x1 = self.add_node(NodeKind::Crossing, 4);
        let x2 = self.add_node(NodeKind::Crossing, 4);
        self.edges[e].head = End::Node(x1, 1);
        self.nodes[x1].legs[1] = e;
        self.add_edge(End::Node(x1, 3), End::Node(x2, 0), comp);
        self.add_edge(End::Node(x2, 2), head, comp);
        self.add_edge(End::Node(x1, 2), End::Node(x2, 1), m);
        self.add_edge(End::Node(x2, 3), End::Node(x1, 0), m);
        m
    }

    /// Compiles to a box network with the given component widths. One
    /// projector sits on the first edge of every component of width `>= 2`.
    /// Returns `None` when some vertex is inadmissible (the value is zero).
    pub fn to_network(&self, ring: &Arc<Ring>, widths: &[usize]) -> Result<Option<Network>> {
        if widths.len() != self.comps {
            return Err(Error::Internal("one width per component expected".into()));
        }
        let ew = |e: usize| widths[self.edges[e].comp];
        let mut nb = NetworkBuilder::new();
        // points[node][leg][ccw position]
        let points: Vec<Vec<Vec<usize>>> = self
            .nodes
            .iter()
            .map(|n| n.legs.iter().map(|&e| (0..ew(e)).map(|_| nb.point()).collect()).collect())
            .collect();

        for (x, node) in self.nodes.iter().enumerate() {
            match node.kind {
                NodeKind::Crossing => {
                    let k = ew(node.legs[0]);
                    let l = ew(node.legs[1]);
                    if ew(node.legs[2]) != k || ew(node.legs[3]) != l {
                        return Err(Error::MalformedDiagram("crossing width mismatch".into()));
                    }
                    let mut cells = vec![Vec::new(); k * l];
                    for i in 0..k {
                        for j in 0..l {
                            cells[i * l + j] = nb.add_box(NetBox::crossing(ring));
                        }
                    }
                    let resolve = |g: GridEnd| match g {
                        GridEnd::Cell(i, j, s) => cells[i * l + j][s],
                        GridEnd::Leg(leg, pos) => points[x][leg][pos],
                    };
                    for (p, q) in grid_links(k, l) {
                        let (p, q) = (resolve(p), resolve(q));
                        nb.link(p, q);
                    }
                }
                NodeKind::Vertex => {
                    let w: Vec<usize> = node.legs.iter().map(|&e| ew(e)).collect();
                    if !crate::recoupling::admissible(ring.r(), w[0] as u32, w[1] as u32, w[2] as u32) {
                        return Ok(None);
                    }
                    for s in 0..3 {
                        let arcs = (w[s] + w[(s + 1) % 3] - w[(s + 2) % 3]) / 2;
                        for t in 0..arcs {
                            let p = points[x][s][w[s] - 1 - t];
                            let q = points[x][(s + 1) % 3][t];
                            nb.link(p, q);
                        }
                    }
                }
            }
        }

        let nbottom_slots: Vec<usize> = {
            let mut v = vec![0usize; self.bottom_count()];
            for (e, edge) in self.edges.iter().enumerate() {
                for end in [edge.tail, edge.head] {
                    if let End::Bottom(i) = end {
                        v[i] = ew(e);
                    }
                }
            }
            v
        };
        let ntop_slots: Vec<usize> = {
            let mut v = vec![0usize; self.top_count()];
            for (e, edge) in self.edges.iter().enumerate() {
                for end in [edge.tail, edge.head] {
                    if let End::Top(i) = end {
                        v[i] = ew(e);
                    }
                }
            }
            v
        };
        let prefix = |v: &[usize]| {
            let mut acc = 0;
            v.iter()
                .map(|&w| {
                    let s = acc;
                    acc += w;
                    s
                })
                .collect::<Vec<usize>>()
        };
        let bottom_off = prefix(&nbottom_slots);
        let top_off = prefix(&ntop_slots);
        let total_bottom: usize = nbottom_slots.iter().sum();

        let mut projected = vec![false; self.comps];
        for (e, edge) in self.edges.iter().enumerate() {
            let w = ew(e);
            let end_point = |end: End, is_head: bool, t: usize, nb: &mut NetworkBuilder| -> usize {
                // left index t -> ccw position or slot
                let along = if is_head { t } else { w - 1 - t };
                match end {
                    End::Node(n, l) => points[n][l][along],
                    End::Bottom(i) => {
                        let off = if is_head { w - 1 - t } else { t };
                        nb.external(bottom_off[i] + off)
                    }
                    End::Top(i) => {
                        let off = if is_head { t } else { w - 1 - t };
                        nb.external(total_bottom + top_off[i] + off)
                    }
                }
            };
            let tails: Vec<usize> = (0..w).map(|t| end_point(edge.tail, false, t, &mut nb)).collect();
            let heads: Vec<usize> = (0..w).map(|t| end_point(edge.head, true, t, &mut nb)).collect();
            if w >= 2 && !projected[edge.comp] {
                projected[edge.comp] = true;
                let ports = nb.add_box(projector_box(ring, w)?);
                for t in 0..w {
                    nb.link(tails[t], ports[t]);
                    nb.link(ports[w + t], heads[t]);
                }
            } else {
                for t in 0..w {
                    nb.link(tails[t], heads[t]);
                }
            }
        }
        for &c in &self.loops {
            let w = widths[c];
            if w >= 2 {
                let ports = nb.add_box(projector_box(ring, w)?);
                for t in 0..w {
                    nb.link(ports[t], ports[w + t]);
                }
            } else if w == 1 {
                let p = nb.point();
                let q = nb.point();
                nb.link(p, q);
                nb.link(q, p);
            }
        }
        Ok(Some(nb.finish()?))
    }

    /// Value of a closed diagram with the given widths.
    pub fn evaluate_widths(&self, ring: &Arc<Ring>, widths: &[usize]) -> Result<Scalar> {
        if !self.is_closed() {
            return Err(Error::Internal("closed evaluation of an open diagram".into()));
        }
        match self.to_network(ring, widths)? {
            Some(net) => net.evaluate_closed(ring),
            None => Ok(Scalar::zero(ring)),
        }
    }

    /// TL element of an open diagram: bottom slots feed the bottom points.
    pub fn evaluate_tangle(&self, ring: &Arc<Ring>, widths: &[usize]) -> Result<TLElement> {
        let strands = |top: bool| -> usize {
            self.edges
                .iter()
                .flat_map(|e| [(e.tail, e.comp), (e.head, e.comp)])
                .filter(|(end, _)| if top { matches!(end, End::Top(_)) } else { matches!(end, End::Bottom(_)) })
                .map(|(_, c)| widths[c])
                .sum()
        };
        let (nbot, ntop) = (strands(false), strands(true));
        let Some(net) = self.to_network(ring, widths)? else {
            return Ok(TLElement::zero(ring, nbot, ntop));
        };
        let mut terms = Vec::new();
        for (key, c) in net.contract(ring) {
            terms.push((TLDiagram::from_partner(nbot, ntop, key)?, c));
        }
        Ok(TLElement::from_terms(ring, nbot, ntop, terms))
    }
}

fn projector_box(ring: &Arc<Ring>, w: usize) -> Result<NetBox> {
    let p = jones_wenzl(ring, w)?;
    let terms = p
        .terms()
        .map(|(d, c)| ((0..2 * w).map(|i| d.partner(i) as u8).collect(), c.clone()))
        .collect();
    Ok(NetBox::new(2 * w, terms))
}
