//! Diagrams built from braid words: closures, open tangles, and axis
//! circles around groups of strands.

use crate::error::{Error, Result};
use crate::skein::diagram::{Diagram, End, NodeKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BraidEvent {
    /// `sigma_i^{±1}`, `1 <= |i| < n`; `sigma_i` puts strand `i` over `i+1`
    /// and resolves to `A id + A^{-1} e_i`.
    Gen(i32),
    /// A circle around strands `from..=to` (0-based positions), passing
    /// over them below and under them above.
    Encircle { from: usize, to: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidDiagram {
    pub strands: usize,
    pub events: Vec<BraidEvent>,
}

/// A built diagram with its component bookkeeping.
#[derive(Clone, Debug)]
pub struct BuiltBraid {
    pub diagram: Diagram,
    /// Component of the strand that starts at each bottom position.
    pub strand_comp: Vec<usize>,
    /// Components of the encircling circles, in event order.
    pub circle_comps: Vec<usize>,
    /// For closures, the edge running from the top of position `p` around
    /// to the bottom.
    pub closing_edges: Vec<Option<usize>>,
}

#[derive(Clone, Copy)]
enum Open {
    Start(usize),
    Leg(usize, usize),
}

impl BraidDiagram {
    pub fn new(strands: usize, word: &[i32]) -> BraidDiagram {
        BraidDiagram { strands, events: word.iter().map(|&g| BraidEvent::Gen(g)).collect() }
    }

    pub fn gen(mut self, g: i32) -> BraidDiagram {
        self.events.push(BraidEvent::Gen(g));
        self
    }

    pub fn word(mut self, w: &[i32]) -> BraidDiagram {
        self.events.extend(w.iter().map(|&g| BraidEvent::Gen(g)));
        self
    }

    pub fn encircle(mut self, from: usize, to: usize) -> BraidDiagram {
        self.events.push(BraidEvent::Encircle { from, to });
        self
    }

    /// Permutation: `perm[p]` is the bottom position of the strand that ends
    /// at top position `p`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for ev in &self.events {
            if let BraidEvent::Gen(g) = ev {
                let i = g.unsigned_abs() as usize;
                at.swap(i - 1, i);
            }
        }
        at
    }

    fn check(&self) -> Result<()> {
        for ev in &self.events {
            match *ev {
                BraidEvent::Gen(g) => {
                    let i = g.unsigned_abs() as usize;
                    if g == 0 || i >= self.strands {
                        return Err(Error::GeneratorOutOfRange { index: g, strands: self.strands });
                    }
                }
                BraidEvent::Encircle { from, to } => {
                    if from > to || to >= self.strands {
                        return Err(Error::MalformedDiagram("encircled range out of bounds".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn closure(&self) -> Result<BuiltBraid> {
        self.build(true)
    }

    pub fn tangle(&self) -> Result<BuiltBraid> {
        self.build(false)
    }

    fn build(&self, closed: bool) -> Result<BuiltBraid> {
        self.check()?;
        let n = self.strands;
        // strand identity (bottom position) held at each position
        let perm = self.permutation();
        let mut strand_comp = vec![usize::MAX; n];
        let mut diagram = Diagram::new();
        if closed {
            for p in 0..n {
                if strand_comp[p] != usize::MAX {
                    continue;
                }
                let c = diagram.add_comp();
                // follow top position q back to bottom position q
                let mut q = p;
                loop {
                    strand_comp[q] = c;
                    // the strand starting at q ends at top position t with perm[t] == q
                    let t = perm.iter().position(|&s| s == q).unwrap();
                    if t == p {
                        break;
                    }
                    q = t;
                }
            }
        } else {
            for c in strand_comp.iter_mut() {
                *c = diagram.add_comp();
            }
        }
        let mut holder: Vec<usize> = (0..n).collect();
        let mut open: Vec<Open> = (0..n).map(Open::Start).collect();
        let mut first_head: Vec<Option<End>> = vec![None; n];
        let mut circle_comps = Vec::new();

        fn connect(
            d: &mut Diagram,
            from: Open,
            head: End,
            comp: usize,
            first_head: &mut [Option<End>],
            closed: bool,
        ) {
            match from {
                Open::Leg(x, l) => {
                    d.add_edge(End::Node(x, l), head, comp);
                }
                Open::Start(p) => {
                    if closed {
                        first_head[p] = Some(head);
                    } else {
                        d.add_edge(End::Bottom(p), head, comp);
                    }
                }
            }
        }

        for ev in &self.events {
            match *ev {
                BraidEvent::Gen(g) => {
                    let i = g.unsigned_abs() as usize;
                    let (l, r) = (i - 1, i);
                    let x = diagram.add_node(NodeKind::Crossing, 4);
                    let (cl, cr) = (strand_comp[holder[l]], strand_comp[holder[r]]);
                    // legs ccw: positive [BR, TR, TL, BL]; negative [BL, BR, TR, TL]
                    let (leg_l_in, leg_r_in, leg_l_out, leg_r_out) = if g > 0 { (3, 0, 1, 2) } else { (0, 1, 2, 3) };
                    connect(&mut diagram, open[l], End::Node(x, leg_l_in), cl, &mut first_head, closed);
                    connect(&mut diagram, open[r], End::Node(x, leg_r_in), cr, &mut first_head, closed);
                    // the left strand leaves at top right, the right one at top left
                    open[r] = Open::Leg(x, leg_l_out);
                    open[l] = Open::Leg(x, leg_r_out);
                    holder.swap(l, r);
                }
                BraidEvent::Encircle { from, to } => {
                    let c = diagram.add_comp();
                    circle_comps.push(c);
                    let lower: Vec<usize> = (from..=to).map(|_| diagram.add_node(NodeKind::Crossing, 4)).collect();
                    let upper: Vec<usize> = (from..=to).map(|_| diagram.add_node(NodeKind::Crossing, 4)).collect();
                    for (k, p) in (from..=to).enumerate() {
                        let sc = strand_comp[holder[p]];
                        // lower: [strand in, circle out E, strand out, circle in W]
                        connect(&mut diagram, open[p], End::Node(lower[k], 0), sc, &mut first_head, closed);
                        // upper: [circle in E, strand out, circle out W, strand in]
                        diagram.add_edge(End::Node(lower[k], 2), End::Node(upper[k], 3), sc);
                        open[p] = Open::Leg(upper[k], 1);
                    }
                    let m = lower.len();
                    for k in 0..m - 1 {
                        diagram.add_edge(End::Node(lower[k], 1), End::Node(lower[k + 1], 3), c);
                        diagram.add_edge(End::Node(upper[k + 1], 2), End::Node(upper[k], 0), c);
                    }
                    diagram.add_edge(End::Node(lower[m - 1], 1), End::Node(upper[m - 1], 0), c);
                    diagram.add_edge(End::Node(upper[0], 2), End::Node(lower[0], 3), c);
                }
            }
        }
        let mut closing_edges = vec![None; n];
        for p in 0..n {
            let comp = strand_comp[holder[p]];
            match (closed, open[p]) {
                (false, Open::Start(q)) => {
                    diagram.add_edge(End::Bottom(q), End::Top(p), comp);
                }
                (false, Open::Leg(x, l)) => {
                    diagram.add_edge(End::Node(x, l), End::Top(p), comp);
                }
                (true, Open::Start(_)) => diagram.loops.push(comp),
                (true, Open::Leg(x, l)) => {
                    let head = first_head[p].expect("touched position has a first crossing");
                    closing_edges[p] = Some(diagram.add_edge(End::Node(x, l), head, comp));
                }
            }
        }
        diagram.validate()?;
        Ok(BuiltBraid { diagram, strand_comp, circle_comps, closing_edges })
    }
}
