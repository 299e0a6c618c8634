//! The Jones representation of the braid groups through Temperley-Lieb
//! sectors, cabling, and the search for a cabling and sector on which a
//! braid acts nontrivially.
//!
//! Sectors of `TL_n` are indexed by the label `m` at infinity, with path
//! bases `0 = m_0, m_1, ..., m_n = m`. Words multiply left to right:
//! `rep(b1 b2) = rep(b1) rep(b2)`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, MatrixJson};
use crate::scalars::{QuantumParams, Ring, Scalar, ScalarJson};
use crate::tl::{chebyshev_loop_values, markov_trace, resolve_braid, BraidLetter, SectorBasis};

/// Parses `"1 2 -1"` (commas also separate letters).
pub fn parse_braid_word(s: &str) -> Result<Vec<BraidLetter>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let g: i32 = t.parse().map_err(|_| Error::Parse(format!("bad braid letter `{t}`")))?;
            if g == 0 {
                return Err(Error::Parse("braid letters are nonzero".into()));
            }
            Ok(g)
        })
        .collect()
}

pub fn check_word(n: usize, word: &[BraidLetter]) -> Result<()> {
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= n {
            return Err(Error::GeneratorOutOfRange { index: g, strands: n });
        }
    }
    Ok(())
}

/// Sector labels `m` of `TL_n` with a nonzero path basis at this level.
pub fn sector_labels(r: u32, n: usize) -> Vec<usize> {
    let max = r as usize - 2;
    (0..=n.min(max)).filter(|&m| (n - m).is_multiple_of(2)).filter(|&m| !crate::tl::admissible_paths(n, m, max).is_empty()).collect()
}

fn sector_basis(ring: &Arc<Ring>, n: usize, m: usize) -> Result<SectorBasis> {
    let b = SectorBasis::new(ring, n, m)?;
    if b.dim() == 0 {
        return Err(Error::Inadmissible(format!("sector {m} of {n} strands is empty at r = {}", ring.r())));
    }
    Ok(b)
}

/// Matrix of the braid on the sector `m`, in the path basis.
pub fn jones_sector_rep(ring: &Arc<Ring>, n: usize, word: &[BraidLetter], m: usize) -> Result<Matrix> {
    check_word(n, word)?;
    let basis = sector_basis(ring, n, m)?;
    let x = resolve_braid(ring, word, n)?;
    Ok(Matrix::from_rows(ring, basis.action(&x)?))
}

/// All nonempty sectors at once, sharing one resolution of the word.
pub fn sector_reps(ring: &Arc<Ring>, n: usize, word: &[BraidLetter]) -> Result<Vec<(usize, Matrix)>> {
    check_word(n, word)?;
    let x = resolve_braid(ring, word, n)?;
    sector_labels(ring.r(), n)
        .into_iter()
        .map(|m| {
            let basis = sector_basis(ring, n, m)?;
            Ok((m, Matrix::from_rows(ring, basis.action(&x)?)))
        })
        .collect()
}

/// Block crossing of a `left`-wide cable over a `right`-wide one, starting
/// after `offset` strands.
fn block_crossing(offset: usize, left: usize, right: usize) -> Vec<BraidLetter> {
    let mut out = Vec::with_capacity(left * right);
    for k in (0..left).rev() {
        for j in 1..=right {
            out.push((offset + k + j) as BraidLetter);
        }
    }
    out
}

/// Replaces strand `i` (by starting position) with `cabling[i]` parallel
/// strands, in the blackboard framing. Returns the new strand count and word.
pub fn cable(n: usize, word: &[BraidLetter], cabling: &[usize]) -> Result<(usize, Vec<BraidLetter>)> {
    check_word(n, word)?;
    if cabling.len() != n || cabling.contains(&0) {
        return Err(Error::InvalidParams(format!("cabling needs {n} positive multiplicities")));
    }
    let mut widths = cabling.to_vec();
    let mut out = Vec::new();
    for &g in word {
        let i = g.unsigned_abs() as usize;
        let offset: usize = widths[..i - 1].iter().sum();
        let (l, r) = (widths[i - 1], widths[i]);
        if g > 0 {
            out.extend(block_crossing(offset, l, r));
        } else {
            out.extend(block_crossing(offset, r, l).iter().rev().map(|x| -x));
        }
        widths.swap(i - 1, i);
    }
    Ok((cabling.iter().sum(), out))
}

/// `Δ² = (σ_1 ... σ_{n-1})^n`.
pub fn full_twist_word(n: usize) -> Vec<BraidLetter> {
    let mut w = Vec::new();
    for _ in 0..n {
        w.extend(1..n as BraidLetter);
    }
    w
}

/// Permutation of strands: `perm[p]` is the starting position of the strand
/// ending at position `p`.
pub fn braid_permutation(n: usize, word: &[BraidLetter]) -> Vec<usize> {
    let mut at: Vec<usize> = (0..n).collect();
    for &g in word {
        let i = g.unsigned_abs() as usize;
        at.swap(i - 1, i);
    }
    at
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullTwistScalar {
    /// The scalar by which `Δ²` acts on the sector, as the braid resolves.
    pub framed: Scalar,
    /// `framed * (-A^3)^n`: each strand's blackboard kink removed.
    pub normalized: Scalar,
}

/// The full twist acts on sector `m` of `n` strands by a scalar.
pub fn full_twist_scalar(ring: &Arc<Ring>, n: usize, m: usize) -> Result<FullTwistScalar> {
    let rep = jones_sector_rep(ring, n, &full_twist_word(n), m)?;
    let framed = rep
        .scalar_multiple()
        .ok_or_else(|| Error::Internal(format!("full twist is not scalar on sector {m} of {n} strands")))?;
    let kink = -&Scalar::a_pow(ring, 3);
    let normalized = &framed * &kink.pow(n as u32);
    Ok(FullTwistScalar { framed, normalized })
}

/// Closure value two ways: `sum_m Δ_m tr rep_m(b)` and the Markov trace of
/// the resolved braid. They agree because negligible elements have trace 0.
pub fn markov_check(ring: &Arc<Ring>, n: usize, word: &[BraidLetter]) -> Result<(Scalar, Scalar)> {
    let loops = chebyshev_loop_values(ring, n.max(1));
    let mut sum = Scalar::zero(ring);
    for (m, rep) in sector_reps(ring, n, word)? {
        sum += &(&loops[m] * &rep.trace());
    }
    let direct = markov_trace(&resolve_braid(ring, word, n)?);
    Ok((sum, direct))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectMode {
    /// Some sector matrix differs from the identity.
    Exact,
    /// Some sector matrix is not scalar, or two sectors carry different
    /// scalars: the braid is not central modulo scalars.
    Projective,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidWitness {
    pub r: u32,
    pub s: u32,
    pub cabling: Vec<usize>,
    pub strands: usize,
    pub cabled_word: Vec<BraidLetter>,
    pub sector: usize,
    pub dim: usize,
    /// `non_identity`, `non_scalar`, or `sector_scalars_differ`.
    pub reason: String,
    /// For `sector_scalars_differ`, the sector compared against.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other_sector: Option<usize>,
    pub matrix: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<ScalarJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidDetection {
    pub strands: usize,
    pub word: Vec<BraidLetter>,
    pub mode: DetectMode,
    pub witness: Option<BraidWitness>,
}

/// Cablings with entries in `1..=bound`, by ascending sum, then
/// lexicographically.
pub fn cablings(n: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let total = bound.pow(n as u32);
    for x in 0..total {
        let c: Vec<usize> = (0..n).map(|i| (x / bound.pow((n - 1 - i) as u32)) % bound + 1).collect();
        all.push(c);
    }
    all.sort_by(|a, b| (a.iter().sum::<usize>(), a).cmp(&(b.iter().sum::<usize>(), b)));
    all
}

fn witness_at(
    ring: &Arc<Ring>,
    n: usize,
    word: &[BraidLetter],
    cabling: &[usize],
    mode: DetectMode,
) -> Result<Option<BraidWitness>> {
    let (big, cabled) = cable(n, word, cabling)?;
    let reps = sector_reps(ring, big, &cabled)?;
    let params = ring.params();
    let make = |m: usize, rep: &Matrix, reason: &str, other: Option<usize>, scalar: Option<&Scalar>| BraidWitness {
        r: params.r,
        s: params.s,
        cabling: cabling.to_vec(),
        strands: big,
        cabled_word: cabled.clone(),
        sector: m,
        dim: rep.nrows(),
        reason: reason.into(),
        other_sector: other,
        matrix: rep.to_json(),
        scalar: scalar.map(|x| x.to_json()),
    };
    let mut first_scalar: Option<(usize, Scalar)> = None;
    for (m, rep) in &reps {
        match mode {
            DetectMode::Exact => {
                if !rep.is_identity() {
                    let s = rep.scalar_multiple();
                    return Ok(Some(make(*m, rep, "non_identity", None, s.as_ref())));
                }
            }
            DetectMode::Projective => match rep.scalar_multiple() {
                None => return Ok(Some(make(*m, rep, "non_scalar", None, None))),
                Some(s) => match &first_scalar {
                    None => first_scalar = Some((*m, s)),
                    Some((m0, s0)) if *s0 != s => {
                        return Ok(Some(make(*m, rep, "sector_scalars_differ", Some(*m0), Some(&s))));
                    }
                    Some(_) => {}
                },
            },
        }
    }
    Ok(None)
}

/// Searches levels `r`, cablings with entries at most `cable_max`, and
/// sectors `m`, in that order, for the first witness of nontriviality.
/// Levels are searched in parallel; the earliest level wins.
pub fn braid_detect(
    n: usize,
    word: &[BraidLetter],
    r_range: std::ops::RangeInclusive<u32>,
    s: u32,
    cable_max: usize,
    mode: DetectMode,
) -> Result<BraidDetection> {
    check_word(n, word)?;
    if *r_range.start() < 3 || cable_max == 0 || r_range.is_empty() {
        return Err(Error::InvalidParams("need r >= 3 and a cabling bound >= 1".into()));
    }
    let rs: Vec<u32> = r_range.collect();
    let cabs = cablings(n, cable_max);
    let per_level: Result<Vec<Option<BraidWitness>>> = rs
        .par_iter()
        .map(|&r| {
            let ring = QuantumParams::new(r, s)?.ring();
            for c in &cabs {
                if let Some(w) = witness_at(&ring, n, word, c, mode)? {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        })
        .collect();
    let witness = per_level?.into_iter().flatten().next();
    Ok(BraidDetection { strands: n, word: word.to_vec(), mode, witness })
}
