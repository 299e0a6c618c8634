//! Mapping class actions on spine bases: Dehn twist matrices, curve
//! operators, projective triviality, detection over levels, and traces.
//!
//! A word `w_1 w_2 ... w_k` is represented by the product
//! `M(w_1) M(w_2) ... M(w_k)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{assemble, Matrix, MatrixJson};
use crate::recoupling::{channel_labels, encircle_eigenvalue, f_matrix, twist_coefficient, Label};
use crate::scalars::{QuantumParams, Ring, Scalar, ScalarJson};
use crate::tqft::{basis, hopf_matrix, punctured_torus_labels, punctured_torus_pairing, Spine};

/// Supported surfaces. Boundary labels left out mean "every admissible
/// choice" where a scan makes sense.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Surface {
    Torus,
    PuncturedTorus { label: Option<Label> },
    FourPuncturedSphere { labels: Option<[Label; 4]> },
    Genus2,
}

impl Surface {
    pub fn is_closed(&self) -> bool {
        matches!(self, Surface::Torus | Surface::Genus2)
    }

    pub fn curve_names(&self) -> Vec<&'static str> {
        match self {
            Surface::Torus | Surface::PuncturedTorus { .. } => vec!["a", "b"],
            Surface::FourPuncturedSphere { .. } => vec!["s", "t"],
            Surface::Genus2 => vec!["b0", "b1", "b2", "b3", "b4"],
        }
    }

    /// Concrete boundary labelings at level `r` (a single empty one for
    /// closed surfaces).
    pub fn boundary_choices(&self, r: u32) -> Vec<Vec<Label>> {
        let max = r - 2;
        match self {
            Surface::Torus | Surface::Genus2 => vec![Vec::new()],
            Surface::PuncturedTorus { label: Some(e) } => vec![vec![*e]],
            Surface::PuncturedTorus { label: None } => (0..=max).step_by(2).map(|e| vec![e]).collect(),
            Surface::FourPuncturedSphere { labels: Some(l) } => vec![l.to_vec()],
            Surface::FourPuncturedSphere { labels: None } => {
                let mut out = Vec::new();
                for x in 0..(max + 1).pow(4) {
                    let l: Vec<Label> = (0..4).map(|i| (x / (max + 1).pow(3 - i)) % (max + 1)).collect();
                    if !channel_labels(r, l[0], l[1], l[2], l[3]).is_empty() {
                        out.push(l);
                    }
                }
                out
            }
        }
    }

    fn with_boundary(&self, b: &[Label]) -> Surface {
        match self {
            Surface::PuncturedTorus { .. } => Surface::PuncturedTorus { label: Some(b[0]) },
            Surface::FourPuncturedSphere { .. } => {
                Surface::FourPuncturedSphere { labels: Some([b[0], b[1], b[2], b[3]]) }
            }
            other => other.clone(),
        }
    }
}

impl FromStr for Surface {
    type Err = Error;

    /// `torus`, `genus2`, `punctured-torus[:e]`, `sphere4[:a,b,c,d]`.
    fn from_str(s: &str) -> Result<Surface> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let nums = |a: &str| -> Result<Vec<Label>> {
            a.split(',').map(|x| x.trim().parse::<Label>().map_err(|_| Error::Parse(format!("bad label `{x}`")))).collect()
        };
        match (name, arg) {
            ("torus", None) => Ok(Surface::Torus),
            ("genus2", None) => Ok(Surface::Genus2),
            ("punctured-torus", None) => Ok(Surface::PuncturedTorus { label: None }),
            ("punctured-torus", Some(a)) => match nums(a)?.as_slice() {
                [e] => Ok(Surface::PuncturedTorus { label: Some(*e) }),
                _ => Err(Error::Parse("punctured-torus takes one label".into())),
            },
            ("sphere4", None) => Ok(Surface::FourPuncturedSphere { labels: None }),
            ("sphere4", Some(a)) => match nums(a)?.as_slice() {
                [p, q, r, t] => Ok(Surface::FourPuncturedSphere { labels: Some([*p, *q, *r, *t]) }),
                _ => Err(Error::Parse("sphere4 takes four labels".into())),
            },
            _ => Err(Error::Parse(format!("unknown surface `{s}`"))),
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::Torus => write!(f, "torus"),
            Surface::Genus2 => write!(f, "genus2"),
            Surface::PuncturedTorus { label: None } => write!(f, "punctured-torus"),
            Surface::PuncturedTorus { label: Some(e) } => write!(f, "punctured-torus:{e}"),
            Surface::FourPuncturedSphere { labels: None } => write!(f, "sphere4"),
            Surface::FourPuncturedSphere { labels: Some(l) } => write!(f, "sphere4:{},{},{},{}", l[0], l[1], l[2], l[3]),
        }
    }
}

/// One letter of a mapping class word: a twist about a named curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Twist {
    pub curve: String,
    pub power: i32,
}

/// Parses `"b0 b1 -b2 a^3 a^-1"`.
pub fn parse_word(s: &str) -> Result<Vec<Twist>> {
    let mut out = Vec::new();
    for tok in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        let (neg, body) = match tok.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, tok),
        };
        let (name, power) = match body.split_once('^') {
            Some((n, p)) => (n, p.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?),
            None => (body, 1),
        };
        if name.is_empty() {
            return Err(Error::Parse(format!("empty curve name in `{tok}`")));
        }
        out.push(Twist { curve: name.to_string(), power: if neg { -power } else { power } });
    }
    Ok(out)
}

pub fn word_to_string(w: &[Twist]) -> String {
    w.iter()
        .map(|t| match t.power {
            1 => t.curve.clone(),
            -1 => format!("-{}", t.curve),
            p => format!("{}^{}", t.curve, p),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn inverse_word(w: &[Twist]) -> Vec<Twist> {
    w.iter().rev().map(|t| Twist { curve: t.curve.clone(), power: -t.power }).collect()
}

/// How a curve is made diagonal: `M = B^{-1} D B`, where `D` is diagonal on
/// the label `crossing[i]` that the curve's meridian disk meets in the
/// target basis.
#[derive(Clone, Debug)]
struct CurveDef {
    name: String,
    moves: Vec<String>,
    change: Option<(Matrix, Matrix)>,
    crossing: Vec<Label>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveInfo {
    pub name: String,
    /// Empty for spine-diagonal curves.
    pub moves: Vec<String>,
}

/// A surface at a level with its spine basis and curve dictionary.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    pub surface: Surface,
    pub ring: Arc<Ring>,
    pub spine: Spine,
    pub boundary: Vec<Label>,
    pub basis: Vec<Vec<Label>>,
    curves: Vec<CurveDef>,
}

fn block_change(
    ring: &Arc<Ring>,
    basis: &[Vec<Label>],
    slot: usize,
    bridge: usize,
    pairing: &HashMap<Label, (Matrix, Matrix)>,
) -> (Matrix, Matrix) {
    // group basis indices by everything except `slot`
    let mut groups: Vec<(Vec<Label>, Vec<usize>)> = Vec::new();
    for (i, l) in basis.iter().enumerate() {
        let mut key = l.clone();
        key[slot] = u32::MAX;
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, v)) => v.push(i),
            None => groups.push((key, vec![i])),
        }
    }
    let mut fwd = Vec::new();
    let mut bwd = Vec::new();
    for (key, idx) in groups {
        let (g, ginv) = &pairing[&key[bridge]];
        // rows of G are ordered by ascending label, as are basis indices here
        fwd.push((idx.clone(), g.transpose()));
        bwd.push((idx, ginv.transpose()));
    }
    (assemble(ring, basis.len(), &fwd), assemble(ring, basis.len(), &bwd))
}

fn pairing_cache(ring: &Arc<Ring>, e: Label) -> Result<(Matrix, Matrix)> {
    static CACHE: OnceLock<DashMap<(QuantumParams, Label), (Matrix, Matrix)>> = OnceLock::new();
    let cache = CACHE.get_or_init(DashMap::new);
    let key = (ring.params(), e);
    if let Some(v) = cache.get(&key) {
        return Ok(v.clone());
    }
    let g = punctured_torus_pairing(ring, e)?;
    let ginv = g.inverse()?;
    cache.insert(key, (g.clone(), ginv.clone()));
    Ok((g, ginv))
}

impl SurfaceModel {
    /// Builds the model; boundary labels must be concrete.
    pub fn new(ring: &Arc<Ring>, surface: &Surface) -> Result<SurfaceModel> {
        let r = ring.r();
        let max = r - 2;
        let check = |l: Label| if l > max { Err(Error::LabelOutOfRange { label: l, r }) } else { Ok(()) };
        let diag = |name: &str, crossing: Vec<Label>| CurveDef {
            name: name.into(),
            moves: Vec::new(),
            change: None,
            crossing,
        };
        match surface {
            Surface::Torus => {
                let spine = Spine::torus();
                let b = basis(r, &spine, &[])?;
                let ks: Vec<Label> = b.iter().map(|l| l[0]).collect();
                let s = hopf_matrix(ring);
                let sinv = s.inverse()?;
                let curves = vec![
                    diag("a", ks.clone()),
                    CurveDef {
                        name: "b".into(),
                        moves: vec!["S: pair with the complementary solid torus (Hopf link values)".into()],
                        change: Some((s.transpose(), sinv.transpose())),
                        crossing: ks,
                    },
                ];
                Ok(SurfaceModel { surface: surface.clone(), ring: ring.clone(), spine, boundary: Vec::new(), basis: b, curves })
            }
            Surface::PuncturedTorus { label } => {
                let e = label.ok_or_else(|| Error::Unsupported("punctured torus needs a boundary label".into()))?;
                check(e)?;
                let spine = Spine::punctured_torus();
                let b = basis(r, &spine, &[e])?;
                let ks: Vec<Label> = b.iter().map(|l| l[0]).collect();
                debug_assert_eq!(ks, punctured_torus_labels(r, e));
                let (g, ginv) = pairing_cache(ring, e)?;
                let curves = vec![
                    diag("a", ks.clone()),
                    CurveDef {
                        name: "b".into(),
                        moves: vec![format!("S({e}): pair with the complementary handlebody (linked handcuff values)")],
                        change: Some((g.transpose(), ginv.transpose())),
                        crossing: ks,
                    },
                ];
                Ok(SurfaceModel { surface: surface.clone(), ring: ring.clone(), spine, boundary: vec![e], basis: b, curves })
            }
            Surface::FourPuncturedSphere { labels } => {
                let l = labels.ok_or_else(|| Error::Unsupported("4-punctured sphere needs boundary labels".into()))?;
                for &x in &l {
                    check(x)?;
                }
                let spine = Spine::four_punctured_sphere();
                let b = basis(r, &spine, &l)?;
                let js: Vec<Label> = b.iter().map(|x| x[0]).collect();
                let f = f_matrix(ring, l[0], l[1], l[2], l[3])?;
                let fm = Matrix::from_rows(ring, f.entries.clone());
                let finv = fm.inverse()?;
                let curves = vec![
                    diag("s", js),
                    CurveDef {
                        name: "t".into(),
                        moves: vec!["F: recouple punctures (0,3) | (1,2)".into()],
                        change: Some((fm, finv)),
                        crossing: f.rows.clone(),
                    },
                ];
                Ok(SurfaceModel { surface: surface.clone(), ring: ring.clone(), spine, boundary: l.to_vec(), basis: b, curves })
            }
            Surface::Genus2 => {
                let spine = Spine::handcuff();
                let b = basis(r, &spine, &[])?;
                let mut pairing = HashMap::new();
                for e in (0..=max).step_by(2) {
                    pairing.insert(e, pairing_cache(ring, e)?);
                }
                let (b1, b1inv) = block_change(ring, &b, 0, 1, &pairing);
                let (b3, b3inv) = block_change(ring, &b, 2, 1, &pairing);
                // handcuff (a, e, c) -> theta (a, y, c) by an F-move on the bridge
                let theta = basis(r, &Spine::theta(), &[])?;
                let mut cm = Matrix::zeros(ring, theta.len(), b.len());
                let mut fcache: HashMap<(Label, Label), crate::recoupling::FMatrix> = HashMap::new();
                for (i, t) in theta.iter().enumerate() {
                    let (a, y, c) = (t[0], t[1], t[2]);
                    let f = match fcache.get(&(a, c)) {
                        Some(f) => f.clone(),
                        None => {
                            let f = f_matrix(ring, a, a, c, c)?;
                            fcache.insert((a, c), f.clone());
                            f
                        }
                    };
                    let row = f.rows.iter().position(|&x| x == y).expect("theta label is a channel label");
                    for (j, h) in b.iter().enumerate() {
                        if h[0] == a && h[2] == c {
                            let col = f.cols.iter().position(|&x| x == h[1]).expect("bridge label is a channel label");
                            cm.set(i, j, f.entries[row][col].clone());
                        }
                    }
                }
                let cinv = cm.inverse()?;
                let curves = vec![
                    diag("b0", b.iter().map(|l| l[0]).collect()),
                    CurveDef {
                        name: "b1".into(),
                        moves: vec!["S(e) on the first loop".into()],
                        change: Some((b1, b1inv)),
                        crossing: b.iter().map(|l| l[0]).collect(),
                    },
                    CurveDef {
                        name: "b2".into(),
                        moves: vec!["F on the bridge: handcuff to theta".into()],
                        change: Some((cm, cinv)),
                        crossing: theta.iter().map(|l| l[1]).collect(),
                    },
                    CurveDef {
                        name: "b3".into(),
                        moves: vec!["S(e) on the second loop".into()],
                        change: Some((b3, b3inv)),
                        crossing: b.iter().map(|l| l[2]).collect(),
                    },
                    diag("b4", b.iter().map(|l| l[2]).collect()),
                ];
                Ok(SurfaceModel { surface: Surface::Genus2, ring: ring.clone(), spine, boundary: Vec::new(), basis: b, curves })
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn curves(&self) -> Vec<CurveInfo> {
        self.curves.iter().map(|c| CurveInfo { name: c.name.clone(), moves: c.moves.clone() }).collect()
    }

    fn curve(&self, name: &str) -> Result<&CurveDef> {
        self.curves.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    fn conjugate(&self, c: &CurveDef, d: Vec<Scalar>) -> Result<Matrix> {
        let dm = Matrix::diagonal(&self.ring, d);
        match &c.change {
            None => Ok(dm),
            Some((b, binv)) => binv.mul(&dm)?.mul(b),
        }
    }

    /// Matrix of the Dehn twist about `curve` raised to `power`.
    pub fn twist_matrix(&self, curve: &str, power: i32) -> Result<Matrix> {
        let c = self.curve(curve)?;
        let p = power as i64;
        let d: Vec<Scalar> = c
            .crossing
            .iter()
            .map(|&k| {
                let t = twist_coefficient(&self.ring, k);
                if p >= 0 {
                    t.pow(p as u32)
                } else {
                    t.inv().expect("twists are units").pow((-p) as u32)
                }
            })
            .collect();
        self.conjugate(c, d)
    }

    /// The curve inserted at mid-level, labeled 1.
    pub fn curve_operator(&self, curve: &str) -> Result<Matrix> {
        let c = self.curve(curve)?;
        let d = c.crossing.iter().map(|&k| encircle_eigenvalue(&self.ring, k)).collect();
        self.conjugate(c, d)
    }

    /// `M(w_1) ... M(w_k)`.
    pub fn represent(&self, word: &[Twist]) -> Result<Matrix> {
        let mut acc = Matrix::identity(&self.ring, self.dim());
        for t in word {
            acc = acc.mul(&self.twist_matrix(&t.curve, t.power)?)?;
        }
        Ok(acc)
    }

    pub fn handlebody_vector(&self) -> Result<Vec<Scalar>> {
        crate::tqft::handlebody_vector(&self.ring, &self.spine)
    }
}

pub fn is_projectively_identity(m: &Matrix) -> bool {
    m.scalar_multiple().is_some()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelVerdict {
    pub r: u32,
    pub s: u32,
    /// Per boundary labeling: `(labels, dim, nontrivial)`.
    pub blocks: Vec<BlockVerdict>,
    pub nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockVerdict {
    pub boundary: Vec<Label>,
    pub dim: usize,
    pub nontrivial: bool,
    /// Present when the block is a scalar matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<ScalarJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub surface: String,
    pub word: String,
    pub r0: Option<u32>,
    pub levels: Vec<LevelVerdict>,
}

fn verdict_at(surface: &Surface, word: &[Twist], r: u32, s: u32) -> Result<LevelVerdict> {
    let ring = QuantumParams::new(r, s)?.ring();
    let mut blocks = Vec::new();
    for b in surface.boundary_choices(r) {
        let model = SurfaceModel::new(&ring, &surface.with_boundary(&b))?;
        if model.dim() == 0 {
            continue;
        }
        let m = model.represent(word)?;
        let scalar = m.scalar_multiple();
        blocks.push(BlockVerdict {
            boundary: b,
            dim: model.dim(),
            nontrivial: scalar.is_none(),
            scalar: scalar.map(|x| x.to_json()),
        });
    }
    let nontrivial = blocks.iter().any(|b| b.nontrivial);
    Ok(LevelVerdict { r, s, blocks, nontrivial })
}

/// Scans `r_range` and reports the least level where some block of the
/// word's action is not a scalar matrix.
pub fn detect(surface: &Surface, word: &[Twist], r_range: std::ops::RangeInclusive<u32>, s: u32) -> Result<DetectionResult> {
    if *r_range.start() < 3 {
        return Err(Error::InvalidParams("levels start at r = 3".into()));
    }
    let rs: Vec<u32> = r_range.collect();
    let levels: Result<Vec<LevelVerdict>> = rs.par_iter().map(|&r| verdict_at(surface, word, r, s)).collect();
    let levels = levels?;
    let r0 = levels.iter().find(|l| l.nontrivial).map(|l| l.r);
    Ok(DetectionResult { surface: surface.to_string(), word: word_to_string(word), r0, levels })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceReport {
    pub trace: ScalarJson,
    pub dim: usize,
    pub abs: f64,
}

/// Trace of the word's action: the value of the mapping torus, up to the
/// root-of-unity factor left open by the generator normalization.
pub fn mapping_torus_trace(model: &SurfaceModel, word: &[Twist]) -> Result<Scalar> {
    if !model.surface.is_closed() {
        return Err(Error::Unsupported("mapping torus traces need a closed surface".into()));
    }
    Ok(model.represent(word)?.trace())
}

pub fn trace_report(model: &SurfaceModel, word: &[Twist]) -> Result<TraceReport> {
    let t = mapping_torus_trace(model, word)?;
    let z: Complex64 = t.embed();
    Ok(TraceReport { trace: t.to_json(), dim: model.dim(), abs: z.norm() })
}

pub fn matrix_json(m: &Matrix) -> MatrixJson {
    m.to_json()
}
