//! Closed-form recoupling data: loop values, admissibility, theta and
//! tetrahedral coefficients, 6j symbols, twists and encirclement
//! eigenvalues. Conventions are in `docs/conventions.md`; each closed form
//! has a skein evaluation counterpart in [`oracle`].

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{Ring, Scalar};

pub type Label = u32;

fn check_label(ring: &Ring, k: Label) -> Result<()> {
    if k > ring.r() - 2 {
        return Err(Error::LabelOutOfRange { label: k, r: ring.r() });
    }
    Ok(())
}

fn qfact(ring: &Arc<Ring>, n: i64) -> Scalar {
    Scalar::quantum_factorial(ring, n)
}

fn sign(ring: &Arc<Ring>, n: i64) -> Scalar {
    if n.rem_euclid(2) == 0 {
        Scalar::one(ring)
    } else {
        -Scalar::one(ring)
    }
}

/// Triangle inequalities, even sum and `a + b + c <= 2r - 4`.
pub fn admissible(r: u32, a: Label, b: Label, c: Label) -> bool {
    let max = r.saturating_sub(2);
    a <= max
        && b <= max
        && c <= max
        && a <= b + c
        && b <= a + c
        && c <= a + b
        && (a + b + c).is_multiple_of(2)
        && a + b + c <= 2 * r - 4
}

/// `d_k = (-1)^k [k+1]`.
pub fn loop_value(ring: &Arc<Ring>, k: Label) -> Scalar {
    &sign(ring, k as i64) * &Scalar::quantum_int(ring, k as i64 + 1)
}

/// Theta graph with edge labels `a, b, c`; zero when inadmissible.
pub fn theta(ring: &Arc<Ring>, a: Label, b: Label, c: Label) -> Scalar {
    if !admissible(ring.r(), a, b, c) {
        return Scalar::zero(ring);
    }
    let (a, b, c) = (a as i64, b as i64, c as i64);
    let m = (a + b - c) / 2;
    let n = (b + c - a) / 2;
    let p = (a + c - b) / 2;
    let num = &(&(&qfact(ring, m + n + p + 1) * &qfact(ring, m)) * &qfact(ring, n)) * &qfact(ring, p);
    let den = &(&qfact(ring, m + n) * &qfact(ring, n + p)) * &qfact(ring, m + p);
    &sign(ring, m + n + p) * &num.checked_div(&den).expect("factorials below r are nonzero")
}

/// Tetrahedral network with vertex triples `(a,d,e)`, `(b,c,e)`, `(a,b,f)`,
/// `(c,d,f)`; opposite edge pairs are `a-c`, `b-d`, `e-f`. Zero when a vertex is
/// inadmissible.
pub fn tet(ring: &Arc<Ring>, a: Label, b: Label, c: Label, d: Label, e: Label, f: Label) -> Scalar {
    let r = ring.r();
    if !(admissible(r, a, d, e) && admissible(r, b, c, e) && admissible(r, a, b, f) && admissible(r, c, d, f)) {
        return Scalar::zero(ring);
    }
    let [a, b, c, d, e, f] = [a, b, c, d, e, f].map(|x| x as i64);
    let faces = [(a + d + e) / 2, (b + c + e) / 2, (a + b + f) / 2, (c + d + f) / 2];
    let squares = [(b + d + e + f) / 2, (a + c + e + f) / 2, (a + b + c + d) / 2];
    let mut inner = Scalar::one(ring);
    for &bj in &squares {
        for &ai in &faces {
            inner *= &qfact(ring, bj - ai);
        }
    }
    let mut edges = Scalar::one(ring);
    for x in [a, b, c, d, e, f] {
        edges *= &qfact(ring, x);
    }
    let lo = *faces.iter().max().unwrap();
    let hi = *squares.iter().min().unwrap();
    let mut sum = Scalar::zero(ring);
    for s in lo..=hi {
        let mut den = Scalar::one(ring);
        for &ai in &faces {
            den *= &qfact(ring, s - ai);
        }
        for &bj in &squares {
            den *= &qfact(ring, bj - s);
        }
        let term = qfact(ring, s + 1).checked_div(&den).expect("small factorials are nonzero");
        sum += &(&sign(ring, s) * &term);
    }
    &inner.checked_div(&edges).expect("edge factorials are nonzero") * &sum
}

/// Recoupling coefficient: in the four-point space with boundary labels
/// `a, b, c, d` (counterclockwise), the tree where `a, b` fuse to `j` equals
/// `sum_i six_j(a,b,c,d,i,j)` times the tree where `a, d` fuse to `i`.
pub fn six_j(ring: &Arc<Ring>, a: Label, b: Label, c: Label, d: Label, i: Label, j: Label) -> Scalar {
    let t = tet(ring, a, b, c, d, i, j);
    if t.is_zero() {
        return t;
    }
    let den = &theta(ring, a, d, i) * &theta(ring, b, c, i);
    (&t * &loop_value(ring, i)).checked_div(&den).expect("admissible thetas are nonzero")
}

/// Labels `x` with `(p, q, x)` and `(s, t, x)` both admissible.
pub fn channel_labels(r: u32, p: Label, q: Label, s: Label, t: Label) -> Vec<Label> {
    (0..=r - 2).filter(|&x| admissible(r, p, q, x) && admissible(r, s, t, x)).collect()
}

/// The F-move on the four-point space with boundary labels `a, b, c, d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrix {
    /// Labels of the `(a,d)`-channel trees (rows).
    pub rows: Vec<Label>,
    /// Labels of the `(a,b)`-channel trees (columns).
    pub cols: Vec<Label>,
    pub entries: Vec<Vec<Scalar>>,
}

/// `entries[i][j] = six_j(a,b,c,d,rows[i],cols[j])`.
pub fn f_matrix(ring: &Arc<Ring>, a: Label, b: Label, c: Label, d: Label) -> Result<FMatrix> {
    for k in [a, b, c, d] {
        check_label(ring, k)?;
    }
    let r = ring.r();
    let rows = channel_labels(r, a, d, b, c);
    let cols = channel_labels(r, a, b, c, d);
    let entries = rows.iter().map(|&i| cols.iter().map(|&j| six_j(ring, a, b, c, d, i, j)).collect()).collect();
    Ok(FMatrix { rows, cols, entries })
}

/// The reverse move: `(a,d)`-channel trees in terms of `(a,b)`-channel trees.
/// Rows are `(a,b)` labels, columns `(a,d)` labels.
pub fn f_matrix_inverse(ring: &Arc<Ring>, a: Label, b: Label, c: Label, d: Label) -> Result<FMatrix> {
    // reflecting the picture swaps b and d
    let f = f_matrix(ring, a, d, c, b)?;
    Ok(f)
}

/// Norm of the `(p,q)`-channel tree with internal label `x`:
/// `theta(p,q,x) theta(s,t,x) / d_x`.
pub fn tree_norm(ring: &Arc<Ring>, p: Label, q: Label, s: Label, t: Label, x: Label) -> Scalar {
    let n = &theta(ring, p, q, x) * &theta(ring, s, t, x);
    n.checked_div(&loop_value(ring, x)).expect("d_x != 0 below r-1")
}

/// The F-move between bases rescaled by `sqrt|norm|`, numerically.
pub fn unitary_f(ring: &Arc<Ring>, a: Label, b: Label, c: Label, d: Label) -> Result<Vec<Vec<Complex64>>> {
    let f = f_matrix(ring, a, b, c, d)?;
    let nrow: Vec<f64> = f.rows.iter().map(|&i| tree_norm(ring, a, d, b, c, i).embed().norm()).collect();
    let ncol: Vec<f64> = f.cols.iter().map(|&j| tree_norm(ring, a, b, c, d, j).embed().norm()).collect();
    Ok(f.entries
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, x)| x.embed() * (nrow[i] / ncol[j]).sqrt()).collect())
        .collect())
}

/// Scalar by which one positive kink acts on a `k`-labeled strand:
/// `(-1)^k A^{k(k+2)}`.
pub fn twist_coefficient(ring: &Arc<Ring>, k: Label) -> Scalar {
    let k = k as i64;
    &sign(ring, k) * &Scalar::a_pow(ring, k * (k + 2))
}

/// A `j`-labeled loop around a `k`-labeled strand acts as this scalar.
pub fn encircle_value(ring: &Arc<Ring>, j: Label, k: Label) -> Scalar {
    let s = &sign(ring, (j + k) as i64) * &Scalar::quantum_int(ring, ((j + 1) * (k + 1)) as i64);
    s.checked_div(&loop_value(ring, k)).expect("d_k != 0 below r-1")
}

/// An unlabeled (label 1) loop around a `k` strand: `-(A^{2k+2} + A^{-2k-2})`.
pub fn encircle_eigenvalue(ring: &Arc<Ring>, k: Label) -> Scalar {
    let k = k as i64;
    -(&Scalar::a_pow(ring, 2 * k + 2) + &Scalar::a_pow(ring, -2 * k - 2))
}

/// Labeled Hopf link value `(-1)^{j+k} [(j+1)(k+1)]`.
pub fn hopf_value(ring: &Arc<Ring>, j: Label, k: Label) -> Scalar {
    &sign(ring, (j + k) as i64) * &Scalar::quantum_int(ring, ((j + 1) * (k + 1)) as i64)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThetaEntry {
    pub labels: [Label; 3],
    pub value: crate::scalars::ScalarJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SixJEntry {
    /// `[a, b, c, d, i, j]`
    pub labels: [Label; 6],
    pub value: crate::scalars::ScalarJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecouplingTables {
    pub r: u32,
    pub s: u32,
    pub loop_values: Vec<crate::scalars::ScalarJson>,
    pub twists: Vec<crate::scalars::ScalarJson>,
    pub thetas: Vec<ThetaEntry>,
    pub six_j: Vec<SixJEntry>,
}

/// Every `d_k`, twist, admissible theta and nonzero 6j symbol at this level.
pub fn tables(ring: &Arc<Ring>) -> RecouplingTables {
    let r = ring.r();
    let max = r - 2;
    let labels: Vec<Label> = (0..=max).collect();
    let mut thetas = Vec::new();
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                if a <= b && b <= c && admissible(r, a, b, c) {
                    thetas.push(ThetaEntry { labels: [a, b, c], value: theta(ring, a, b, c).to_json() });
                }
            }
        }
    }
    let mut six = Vec::new();
    for &a in &labels {
        for &b in &labels {
            for &c in &labels {
                for &d in &labels {
                    for &i in &channel_labels(r, a, d, b, c) {
                        for &j in &channel_labels(r, a, b, c, d) {
                            six.push(SixJEntry { labels: [a, b, c, d, i, j], value: six_j(ring, a, b, c, d, i, j).to_json() });
                        }
                    }
                }
            }
        }
    }
    RecouplingTables {
        r,
        s: ring.params().s,
        loop_values: labels.iter().map(|&k| loop_value(ring, k).to_json()).collect(),
        twists: labels.iter().map(|&k| twist_coefficient(ring, k).to_json()).collect(),
        thetas,
        six_j: six,
    }
}

/// The same quantities by evaluating the diagrams in the skein engine.
pub mod oracle {
    use super::*;
    use crate::skein::{evaluate, BraidDiagram, Diagram, End, LabeledLink, LinkLabel, NodeKind};

    fn graph(vertices: usize, edges: &[((usize, usize), (usize, usize))], labels: &[Label]) -> LabeledLink {
        let mut d = Diagram::new();
        for _ in 0..vertices {
            d.add_node(NodeKind::Vertex, 3);
        }
        for &((u, lu), (v, lv)) in edges {
            let c = d.add_comp();
            d.add_edge(End::Node(u, lu), End::Node(v, lv), c);
        }
        let n = labels.len();
        LabeledLink::new(d, labels.iter().map(|&k| LinkLabel::Label(k)).collect(), vec![0; n])
    }

    /// The planar theta graph with edges labeled `a, b, c`.
    pub fn theta_graph(a: Label, b: Label, c: Label) -> LabeledLink {
        // u has legs [a, b, c] counterclockwise, v sees them reversed
        graph(2, &[((0, 0), (1, 2)), ((0, 1), (1, 1)), ((0, 2), (1, 0))], &[a, b, c])
    }

    /// A planar tetrahedron: vertex 0 in the middle, 1, 2, 3 counterclockwise
    /// around it. Edge `0-1` is `e`, `2-3` is `f`, `0-2` is `a`, `1-2` is `b`,
    /// `1-3` is `c`, `0-3` is `d`.
    pub fn tet_graph(a: Label, b: Label, c: Label, d: Label, e: Label, f: Label) -> LabeledLink {
        // ccw legs: v0 [1,2,3], v1 [2,0,3], v2 [3,0,1], v3 [1,0,2]
        let edges = [
            ((0, 0), (1, 1)), // e
            ((2, 0), (3, 2)), // f
            ((0, 1), (2, 1)), // a
            ((1, 0), (2, 2)), // b
            ((1, 2), (3, 0)), // c
            ((0, 2), (3, 1)), // d
        ];
        graph(4, &edges, &[e, f, a, b, c, d])
    }

    pub fn loop_value(ring: &Arc<Ring>, k: Label) -> Result<Scalar> {
        evaluate(ring, &LabeledLink::unknot(LinkLabel::Label(k), 0))
    }

    pub fn theta(ring: &Arc<Ring>, a: Label, b: Label, c: Label) -> Result<Scalar> {
        evaluate(ring, &theta_graph(a, b, c))
    }

    pub fn tet(ring: &Arc<Ring>, a: Label, b: Label, c: Label, d: Label, e: Label, f: Label) -> Result<Scalar> {
        evaluate(ring, &tet_graph(a, b, c, d, e, f))
    }

    pub fn twist_coefficient(ring: &Arc<Ring>, k: Label) -> Result<Scalar> {
        let kinked = evaluate(ring, &LabeledLink::unknot(LinkLabel::Label(k), 1))?;
        kinked.checked_div(&loop_value(ring, k)?)
    }

    /// `j`-loop around a closed `k` strand, divided by `d_k`.
    pub fn encircle_value(ring: &Arc<Ring>, j: Label, k: Label) -> Result<Scalar> {
        let built = BraidDiagram::new(1, &[]).encircle(0, 0).closure()?;
        let mut labels = vec![LinkLabel::Label(0); 2];
        labels[built.strand_comp[0]] = LinkLabel::Label(k);
        labels[built.circle_comps[0]] = LinkLabel::Label(j);
        let v = evaluate(ring, &LabeledLink::blackboard(built.diagram, labels))?;
        v.checked_div(&loop_value(ring, k)?)
    }
}
