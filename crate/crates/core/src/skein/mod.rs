//! Evaluation of labeled framed links and ribbon graphs in S³, the ω
//! element, and the surgery invariant.

pub mod closure;
pub mod diagram;
pub mod moves;
pub mod network;
pub mod pd;

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{Ring, Scalar};
use crate::tl::chebyshev_loop_values;

pub use closure::{BraidDiagram, BraidEvent, BuiltBraid};
pub use diagram::{Diagram, Edge, End, Node, NodeKind};
pub use moves::{random_move_case, verify_moves, Move};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkLabel {
    Label(u32),
    Omega,
}

/// A framed link or ribbon graph diagram with one label and one framing per
/// component (for graphs, per edge between vertices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledLink {
    pub diagram: Diagram,
    pub labels: Vec<LinkLabel>,
    pub framings: Vec<i64>,
}

impl LabeledLink {
    /// Labels every component of `diagram` and gives it its blackboard framing.
    pub fn blackboard(diagram: Diagram, labels: Vec<LinkLabel>) -> LabeledLink {
        let framings = (0..diagram.comps).map(|c| diagram.self_writhe(c)).collect();
        LabeledLink { diagram, labels, framings }
    }

    pub fn new(diagram: Diagram, labels: Vec<LinkLabel>, framings: Vec<i64>) -> LabeledLink {
        LabeledLink { diagram, labels, framings }
    }

    pub fn empty() -> LabeledLink {
        LabeledLink { diagram: Diagram::new(), labels: Vec::new(), framings: Vec::new() }
    }

    /// A crossingless unknot with the given label and framing.
    pub fn unknot(label: LinkLabel, framing: i64) -> LabeledLink {
        let mut d = Diagram::new();
        d.add_loop();
        LabeledLink { diagram: d, labels: vec![label], framings: vec![framing] }
    }

    pub fn components(&self) -> usize {
        self.diagram.comps
    }

    pub fn validate(&self, ring: &Ring) -> Result<()> {
        if self.labels.len() != self.diagram.comps || self.framings.len() != self.diagram.comps {
            return Err(Error::MalformedDiagram("one label and framing per component expected".into()));
        }
        if !self.diagram.is_closed() {
            return Err(Error::MalformedDiagram("link diagrams are closed".into()));
        }
        self.diagram.validate()?;
        let max = ring.r() - 2;
        for l in &self.labels {
            if let LinkLabel::Label(k) = *l {
                if k > max {
                    return Err(Error::LabelOutOfRange { label: k, r: ring.r() });
                }
            }
        }
        Ok(())
    }

    /// The diagram with kinks added so blackboard framing equals the
    /// declared framing on every component.
    pub fn framed_diagram(&self) -> Diagram {
        let mut d = self.diagram.clone();
        for c in 0..d.comps {
            d.materialize_framing(c, self.framings[c]);
        }
        d
    }

    /// Disjoint union (the second diagram is drawn beside the first).
    pub fn split_union(&self, other: &LabeledLink) -> LabeledLink {
        let mut d = self.diagram.clone();
        let nodes0 = d.nodes.len();
        let edges0 = d.edges.len();
        let comps0 = d.comps;
        let shift = |end: End| match end {
            End::Node(n, l) => End::Node(n + nodes0, l),
            other => other,
        };
        for node in &other.diagram.nodes {
            d.nodes.push(diagram::Node { kind: node.kind, legs: node.legs.iter().map(|&e| e + edges0).collect() });
        }
        for e in &other.diagram.edges {
            d.edges.push(Edge { tail: shift(e.tail), head: shift(e.head), comp: e.comp + comps0 });
        }
        d.loops.extend(other.diagram.loops.iter().map(|&c| c + comps0));
        d.comps += other.diagram.comps;
        let mut labels = self.labels.clone();
        labels.extend(&other.labels);
        let mut framings = self.framings.clone();
        framings.extend(&other.framings);
        LabeledLink { diagram: d, labels, framings }
    }

    /// Symmetric linking matrix: framings on the diagonal.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.components();
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = self.framings[i];
            for j in i + 1..n {
                let l = self.diagram.linking(i, j);
                m[i][j] = l;
                m[j][i] = l;
            }
        }
        m
    }
}

/// Weights `s_k = c d_k` of the ω element, `k = 0..=r-2`.
pub fn omega_weights(ring: &Arc<Ring>) -> Vec<Scalar> {
    let c = Scalar::c(ring);
    chebyshev_loop_values(ring, ring.r() as usize - 2).iter().map(|d| &c * d).collect()
}

/// Value of a labeled link: ω components are summed against their weights,
/// each `k`-labeled component carries one `P_k`.
pub fn evaluate(ring: &Arc<Ring>, link: &LabeledLink) -> Result<Scalar> {
    link.validate(ring)?;
    let diagram = link.framed_diagram();
    let omegas: Vec<usize> = (0..link.components()).filter(|&c| link.labels[c] == LinkLabel::Omega).collect();
    let max = ring.r() as usize - 2;
    let weights = omega_weights(ring);
    let base: Vec<usize> = link
        .labels
        .iter()
        .map(|l| match l {
            LinkLabel::Label(k) => *k as usize,
            LinkLabel::Omega => 0,
        })
        .collect();
    if omegas.is_empty() {
        return diagram.evaluate_widths(ring, &base);
    }
    let count = (max + 1).pow(omegas.len() as u32);
    let assignments: Vec<Vec<usize>> = (0..count)
        .map(|mut idx| {
            omegas
                .iter()
                .map(|_| {
                    let k = idx % (max + 1);
                    idx /= max + 1;
                    k
                })
                .collect()
        })
        .collect();
    let terms: Result<Vec<Scalar>> = assignments
        .par_iter()
        .map(|ks| {
            let mut widths = base.clone();
            let mut w = Scalar::one(ring);
            for (&c, &k) in omegas.iter().zip(ks) {
                widths[c] = k;
                w = &w * &weights[k];
            }
            let v = diagram.evaluate_widths(ring, &widths)?;
            Ok(&w * &v)
        })
        .collect();
    let mut acc = Scalar::zero(ring);
    for t in terms? {
        if !t.is_zero() {
            acc += &t;
        }
    }
    Ok(acc)
}

/// A surgery presentation: an all-ω link and the signature of its linking
/// matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryPresentation {
    pub link: LabeledLink,
    pub signature: i64,
}

impl SurgeryPresentation {
    /// Builds a presentation with the signature read off the linking matrix.
    pub fn from_link(link: LabeledLink) -> SurgeryPresentation {
        let signature = signature(&link.linking_matrix());
        SurgeryPresentation { link, signature }
    }
}

/// Signature of a symmetric integer matrix by exact symmetric elimination.
pub fn signature(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mut sig = 0i64;
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        // diagonal pivot if any
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let p = active.remove(pos);
            let piv = a[p][p].clone();
            sig += if piv.is_positive() { 1 } else { -1 };
            for &i in &active {
                let f = &a[i][p] / &piv;
                if f.is_zero() {
                    continue;
                }
                for &j in &active {
                    let v = &f * &a[p][j];
                    a[i][j] -= v;
                }
            }
            continue;
        }
        // all diagonals zero: find an off-diagonal entry
        let mut found = None;
        'outer: for (x, &i) in active.iter().enumerate() {
            for &j in &active[x + 1..] {
                if !a[i][j].is_zero() {
                    found = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = found else { break };
        // replace row/column i by i + j: diagonal becomes 2 a_ij
        for &k in &active {
            let v = a[j][k].clone();
            a[i][k] += v;
        }
        for &k in &active {
            let v = a[k][j].clone();
            a[k][i] += v;
        }
    }
    sig
}

/// `Z(M, n)`: the ω evaluation of the presentation, checked against the
/// declared signature.
pub fn z_invariant(ring: &Arc<Ring>, p: &SurgeryPresentation) -> Result<Scalar> {
    if p.link.labels.iter().any(|l| *l != LinkLabel::Omega) {
        return Err(Error::MalformedDiagram("surgery components must be ω-labeled".into()));
    }
    let sig = signature(&p.link.linking_matrix());
    if sig != p.signature {
        return Err(Error::Inadmissible(format!(
            "declared signature {} differs from linking-matrix signature {sig}",
            p.signature
        )));
    }
    evaluate(ring, &p.link)
}

/// `C`: the ω-labeled unknot with framing `+1`.
pub fn framing_anomaly(ring: &Arc<Ring>) -> Result<Scalar> {
    evaluate(ring, &LabeledLink::unknot(LinkLabel::Omega, 1))
}

/// `Z(M, n) / C^n`, comparable across presentations of one manifold.
pub fn normalized_z(ring: &Arc<Ring>, p: &SurgeryPresentation) -> Result<Scalar> {
    let z = z_invariant(ring, p)?;
    let c = framing_anomaly(ring)?;
    let cn = if p.signature >= 0 { c.pow(p.signature as u32) } else { c.inv()?.pow((-p.signature) as u32) };
    z.checked_div(&cn)
}
