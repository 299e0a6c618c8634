//! Moves on surgery-type links that must leave the ω evaluation unchanged:
//! handle slides over ω components, balanced stabilization, and
//! circumcision pairs.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::Ring;
use crate::skein::closure::BraidDiagram;
use crate::skein::diagram::{grid_links, Diagram, End, GridEnd, NodeKind};
use crate::skein::{evaluate, LabeledLink, LinkLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    Identity,
    /// Slide component `comp` over the ω component crossing it at
    /// `crossing`, banding through the corner between legs `leg` (on
    /// `comp`) and `leg + 1` (on the ω component).
    HandleSlide { crossing: usize, leg: usize },
    /// Add split ω unknots with framings `+1` and `-1`.
    BalancedStabilization,
    /// Add a 0-framed ω circle around `edge` together with an ω meridian of
    /// that circle.
    CircumcisionPair { edge: usize },
}

pub fn apply_move(link: &LabeledLink, mv: &Move) -> Result<LabeledLink> {
    match mv {
        Move::Identity => Ok(link.clone()),
        Move::BalancedStabilization => Ok(link
            .split_union(&LabeledLink::unknot(LinkLabel::Omega, 1))
            .split_union(&LabeledLink::unknot(LinkLabel::Omega, -1))),
        Move::CircumcisionPair { edge } => {
            if *edge >= link.diagram.edges.len() {
                return Err(Error::MoveNotApplicable(format!("no edge {edge}")));
            }
            let mut d = link.diagram.clone();
            let k = d.insert_meridian(*edge);
            let k_edge = d.comp_edges(k)[0];
            d.insert_meridian(k_edge);
            let mut labels = link.labels.clone();
            labels.extend([LinkLabel::Omega, LinkLabel::Omega]);
            let mut framings = link.framings.clone();
            framings.extend([0, 0]);
            Ok(LabeledLink { diagram: d, labels, framings })
        }
        Move::HandleSlide { crossing, leg } => handle_slide(link, *crossing, *leg),
    }
}

/// Evaluates before and after the move; `true` when the values agree.
pub fn verify_moves(ring: &Arc<Ring>, link: &LabeledLink, mv: &Move) -> Result<bool> {
    let after = apply_move(link, mv)?;
    Ok(evaluate(ring, link)? == evaluate(ring, &after)?)
}

fn handle_slide(link: &LabeledLink, x: usize, p: usize) -> Result<LabeledLink> {
    let na = |m: &str| Error::MoveNotApplicable(m.to_string());
    let src = &link.diagram;
    if src.has_vertices() || !src.is_closed() {
        return Err(na("handle slides need a closed link diagram"));
    }
    if x >= src.nodes.len() || src.nodes[x].kind != NodeKind::Crossing || p >= 4 {
        return Err(na("no such crossing leg"));
    }
    let k_comp = src.comp_at(x, p);
    let j_comp = src.comp_at(x, (p + 1) % 4);
    if k_comp == j_comp {
        return Err(na("the crossing is not between two components"));
    }
    if link.labels[j_comp] != LinkLabel::Omega {
        return Err(na("the slid-over component must be ω-labeled"));
    }
    let e_k0 = src.nodes[x].legs[p];
    let e_j0 = src.nodes[x].legs[(p + 1) % 4];
    for e in [e_k0, e_j0] {
        let edge = &src.edges[e];
        if matches!((edge.tail, edge.head), (End::Node(a, _), End::Node(b, _)) if a == x && b == x) {
            return Err(na("edge returns to the sliding crossing"));
        }
    }

    // materialize framings so the blackboard parallel is the framed pushoff
    let mut d = src.clone();
    for c in 0..d.comps {
        d.materialize_framing(c, link.framings[c]);
    }
    // leg numbering at x is unchanged by adding kinks elsewhere, but the
    // edges at x may have been replaced; re-read them
    let e_k = d.nodes[x].legs[p];
    let e_j = d.nodes[x].legs[(p + 1) % 4];
    let j_out = d.edges[e_j].tail == End::Node(x, (p + 1) % 4);
    let kp = k_comp;
    // bundle of each edge, left to right along the edge
    let bundles: Vec<Vec<usize>> = d
        .edges
        .iter()
        .map(|e| {
            if e.comp == j_comp {
                if j_out {
                    vec![j_comp, kp]
                } else {
                    vec![kp, j_comp]
                }
            } else {
                vec![e.comp]
            }
        })
        .collect();

    let mut out = Diagram::new();
    out.comps = d.comps;
    out.loops = d.loops.clone();
    let mut g = PointGraph::default();
    // leg points: pts[node][leg][ccw pos]
    let pts: Vec<Vec<Vec<usize>>> = d
        .nodes
        .iter()
        .map(|n| n.legs.iter().map(|&e| (0..bundles[e].len()).map(|_| g.wire()).collect()).collect())
        .collect();
    let ccw_group = |d: &Diagram, node: usize, leg: usize, pos: usize| -> usize {
        let e = d.nodes[node].legs[leg];
        let w = bundles[e].len();
        let t = if d.edges[e].head == End::Node(node, leg) { pos } else { w - 1 - pos };
        bundles[e][t]
    };
    for xn in 0..d.nodes.len() {
        let kk = bundles[d.nodes[xn].legs[0]].len();
        let ll = bundles[d.nodes[xn].legs[1]].len();
        let mut cells = Vec::with_capacity(kk * ll);
        for _ in 0..kk * ll {
            let c = out.add_node(NodeKind::Crossing, 4);
            cells.push((0..4).map(|s| g.terminal(c, s)).collect::<Vec<_>>());
        }
        for (a, b) in grid_links(kk, ll) {
            let comp = match (a, b) {
                (GridEnd::Cell(i, _, s), _) | (_, GridEnd::Cell(i, _, s)) if s % 2 == 0 => ccw_group(&d, xn, 0, i),
                (GridEnd::Cell(_, j, _), _) | (_, GridEnd::Cell(_, j, _)) => ccw_group(&d, xn, 1, j),
                (GridEnd::Leg(..), GridEnd::Leg(..)) => unreachable!("bundles are nonempty"),
            };
            let res = |ge: GridEnd| match ge {
                GridEnd::Cell(i, j, s) => cells[i * ll + j][s],
                GridEnd::Leg(l, pos) => pts[xn][l][pos],
            };
            g.link(res(a), res(b), comp);
        }
    }
    // junction on e_j near x, splitting e_j and e_k
    let jx: Vec<usize> = (0..2).map(|_| g.wire()).collect();
    let jf: Vec<usize> = (0..2).map(|_| g.wire()).collect();
    let k1 = g.wire();
    let k2 = g.wire();
    // junction wiring in ccw order [Jx, K1, K2, Jf]: Jx = [J, K'], Jf = [K', J]
    g.link(jx[1], k1, kp);
    g.link(k2, jf[0], kp);
    g.link(jx[0], jf[1], j_comp);
    for (e, edge) in d.edges.iter().enumerate() {
        let w = bundles[e].len();
        let point_at = |end: End, is_head: bool, t: usize| -> usize {
            match end {
                End::Node(n, l) => pts[n][l][if is_head { t } else { w - 1 - t }],
                _ => unreachable!("closed diagram"),
            }
        };
        if e == e_j {
            // split: the x side and the far side meet the junction
            let x_is_tail = j_out;
            for t in 0..w {
                let (x_pt, far_pt) = if x_is_tail {
                    (point_at(edge.tail, false, t), point_at(edge.head, true, t))
                } else {
                    (point_at(edge.head, true, t), point_at(edge.tail, false, t))
                };
                // ccw position at the junction of left index t
                let (jx_pos, jf_pos) = if x_is_tail { (t, w - 1 - t) } else { (w - 1 - t, t) };
                g.link(x_pt, jx[jx_pos], bundles[e][t]);
                g.link(jf[jf_pos], far_pt, bundles[e][t]);
            }
        } else if e == e_k {
            let x_is_tail = edge.tail == End::Node(x, p);
            let (x_pt, far_pt) = if x_is_tail {
                (point_at(edge.tail, false, 0), point_at(edge.head, true, 0))
            } else {
                (point_at(edge.head, true, 0), point_at(edge.tail, false, 0))
            };
            g.link(x_pt, k1, kp);
            g.link(k2, far_pt, kp);
        } else {
            for t in 0..w {
                g.link(point_at(edge.tail, false, t), point_at(edge.head, true, t), bundles[e][t]);
            }
        }
    }
    g.build_edges(&mut out)?;
    out.orient_links()?;
    out.validate()?;
    let labels = link.labels.clone();
    Ok(LabeledLink::blackboard(out, labels))
}

/// Points joined by strands, used to assemble exploded diagrams.
#[derive(Default)]
struct PointGraph {
    links: Vec<Vec<(usize, usize)>>,
    terminal: Vec<Option<(usize, usize)>>,
}

impl PointGraph {
    fn wire(&mut self) -> usize {
        self.links.push(Vec::new());
        self.terminal.push(None);
        self.links.len() - 1
    }

    fn terminal(&mut self, node: usize, leg: usize) -> usize {
        let p = self.wire();
        self.terminal[p] = Some((node, leg));
        p
    }

    fn link(&mut self, a: usize, b: usize, comp: usize) {
        self.links[a].push((b, comp));
        self.links[b].push((a, comp));
    }

    fn build_edges(&self, out: &mut Diagram) -> Result<()> {
        let mut seen = vec![false; self.links.len()];
        for start in 0..self.links.len() {
            let Some((n0, l0)) = self.terminal[start] else { continue };
            if seen[start] {
                continue;
            }
            if self.links[start].len() != 1 {
                return Err(Error::Internal("terminal with wrong link count".into()));
            }
            seen[start] = true;
            let (mut cur, comp) = self.links[start][0];
            let mut prev = start;
            while self.terminal[cur].is_none() {
                seen[cur] = true;
                let l = &self.links[cur];
                if l.len() != 2 {
                    return Err(Error::Internal("wire point with wrong link count".into()));
                }
                let next = if l[0].0 == prev { l[1].0 } else { l[0].0 };
                prev = cur;
                cur = next;
            }
            seen[cur] = true;
            let (n1, l1) = self.terminal[cur].unwrap();
            out.add_edge(End::Node(n0, l0), End::Node(n1, l1), comp);
        }
        Ok(())
    }
}

impl Diagram {
    /// Orients every link component coherently (keeping the direction of
    /// its first edge) and restores the `a -> c` under convention.
    pub fn orient_links(&mut self) -> Result<()> {
        if self.has_vertices() {
            return Err(Error::Unsupported("orienting ribbon graphs".into()));
        }
        for c in 0..self.comps {
            let edges = self.comp_edges(c);
            let Some(&e0) = edges.first() else { continue };
            let mut e = e0;
            for _ in 0..=edges.len() {
                let End::Node(x, l) = self.edges[e].head else { break };
                let nl = (l + 2) % 4;
                let next = self.nodes[x].legs[nl];
                if self.edges[next].tail != End::Node(x, nl) {
                    let edge = &mut self.edges[next];
                    std::mem::swap(&mut edge.tail, &mut edge.head);
                }
                e = next;
                if e == e0 {
                    break;
                }
            }
        }
        let flip: Vec<bool> = (0..self.nodes.len()).map(|x| !self.is_incoming(x, 0)).collect();
        self.rotate_crossings(&flip);
        Ok(())
    }
}

/// A random small link (braid closure) with at least one ω component,
/// together with a random applicable move.
pub fn random_move_case<R: Rng>(rng: &mut R, r: u32) -> (LabeledLink, Move) {
    let max = r - 2;
    loop {
        let strands = rng.gen_range(2..=3usize);
        let len = rng.gen_range(2..=4usize);
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        let Ok(built) = BraidDiagram::new(strands, &word).closure() else { continue };
        let d = built.diagram;
        let n = d.comps;
        let mut labels: Vec<LinkLabel> = (0..n)
            .map(|_| if rng.gen_bool(0.5) { LinkLabel::Omega } else { LinkLabel::Label(rng.gen_range(0..=max)) })
            .collect();
        if !labels.contains(&LinkLabel::Omega) {
            labels[rng.gen_range(0..n)] = LinkLabel::Omega;
        }
        let framings: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=1)).collect();
        let link = LabeledLink { diagram: d, labels, framings };
        let kind = rng.gen_range(0..3);
        let mv = match kind {
            0 => {
                let mut sites = Vec::new();
                for x in 0..link.diagram.nodes.len() {
                    for p in 0..4 {
                        let (kc, jc) = (link.diagram.comp_at(x, p), link.diagram.comp_at(x, (p + 1) % 4));
                        if kc != jc && link.labels[jc] == LinkLabel::Omega {
                            sites.push((x, p));
                        }
                    }
                }
                match sites.choose(rng) {
                    Some(&(crossing, leg)) => Move::HandleSlide { crossing, leg },
                    None => continue,
                }
            }
            1 => Move::BalancedStabilization,
            _ => Move::CircumcisionPair { edge: rng.gen_range(0..link.diagram.edges.len().max(1)) },
        };
        if apply_move(&link, &mv).is_ok() {
            return (link, mv);
        }
    }
}
