//! Temperley–Lieb diagrams and elements over [`Scalar`].
//!
//! A diagram is a crossingless matching between `bottom` points and `top`
//! points (both numbered left to right). Square diagrams form TL_n; the
//! rectangular ones are needed for path (fusion-tree) bases. Composition
//! `compose(x, y)` stacks `y` on top of `x`, so a braid word read left to
//! right is a product read bottom to top.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{Ring, Scalar, ScalarJson};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TLDiagram {
    bottom: usize,
    top: usize,
    /// partner of each point; bottom points are `0..bottom`, top points
    /// follow as `bottom..bottom+top`.
    partner: Vec<u8>,
}

impl TLDiagram {
    pub fn from_partner(bottom: usize, top: usize, partner: Vec<u8>) -> Result<TLDiagram> {
        let n = bottom + top;
        if partner.len() != n {
            return Err(Error::MalformedDiagram("partner array has wrong length".into()));
        }
        for (i, &p) in partner.iter().enumerate() {
            let p = p as usize;
            if p >= n || p == i || partner[p] as usize != i {
                return Err(Error::MalformedDiagram("partner array is not an involution".into()));
            }
        }
        let d = TLDiagram { bottom, top, partner };
        if !d.is_planar() {
            return Err(Error::MalformedDiagram("matching has crossings".into()));
        }
        Ok(d)
    }

    pub fn identity(n: usize) -> TLDiagram {
        let mut partner = vec![0u8; 2 * n];
        for i in 0..n {
            partner[i] = (n + i) as u8;
            partner[n + i] = i as u8;
        }
        TLDiagram { bottom: n, top: n, partner }
    }

    /// Turn-back generator `e_i`, `1 <= i < n`.
    pub fn generator(n: usize, i: usize) -> TLDiagram {
        let mut d = TLDiagram::identity(n);
        let (a, b) = (i - 1, i);
        d.partner[a] = b as u8;
        d.partner[b] = a as u8;
        d.partner[n + a] = (n + b) as u8;
        d.partner[n + b] = (n + a) as u8;
        d
    }

    /// Identity on `n` strands with the last two strands capped off: `n -> n-2`.
    pub fn cap(n: usize) -> TLDiagram {
        let m = n - 2;
        let mut partner = vec![0u8; n + m];
        for i in 0..m {
            partner[i] = (n + i) as u8;
            partner[n + i] = i as u8;
        }
        partner[n - 2] = (n - 1) as u8;
        partner[n - 1] = (n - 2) as u8;
        TLDiagram { bottom: n, top: m, partner }
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.bottom == self.top && (0..self.bottom).all(|i| self.partner(i) == self.bottom + i)
    }

    /// Position in the boundary circle: bottom left to right, then top right to left.
    fn circle_pos(&self, i: usize) -> usize {
        if i < self.bottom {
            i
        } else {
            self.bottom + (self.top - 1 - (i - self.bottom))
        }
    }

    fn circle_point(&self, pos: usize) -> usize {
        if pos < self.bottom {
            pos
        } else {
            self.bottom + (self.top - 1 - (pos - self.bottom))
        }
    }

    /// Balanced parenthesis code read around the boundary circle.
    pub fn code(&self) -> String {
        let n = self.bottom + self.top;
        (0..n)
            .map(|pos| {
                let p = self.circle_pos(self.partner(self.circle_point(pos)));
                if p > pos {
                    '('
                } else {
                    ')'
                }
            })
            .collect()
    }

    pub fn from_code(bottom: usize, top: usize, code: &str) -> Result<TLDiagram> {
        let n = bottom + top;
        if code.len() != n {
            return Err(Error::Parse(format!("code `{code}` has wrong length for {bottom}->{top}")));
        }
        let mut partner = vec![0u8; n];
        let mut stack = Vec::new();
        let probe = TLDiagram { bottom, top, partner: vec![0; n] };
        for (pos, ch) in code.chars().enumerate() {
            match ch {
                '(' => stack.push(pos),
                ')' => {
                    let open = stack.pop().ok_or_else(|| Error::Parse(format!("unbalanced code `{code}`")))?;
                    let a = probe.circle_point(open);
                    let b = probe.circle_point(pos);
                    partner[a] = b as u8;
                    partner[b] = a as u8;
                }
                _ => return Err(Error::Parse(format!("bad character in code `{code}`"))),
            }
        }
        if !stack.is_empty() {
            return Err(Error::Parse(format!("unbalanced code `{code}`")));
        }
        Ok(TLDiagram { bottom, top, partner })
    }

    /// Nesting criterion on the boundary circle.
    pub fn is_planar(&self) -> bool {
        let n = self.bottom + self.top;
        let mut stack = Vec::new();
        for pos in 0..n {
            let p = self.circle_pos(self.partner(self.circle_point(pos)));
            if p > pos {
                stack.push(p);
            } else if stack.pop() != Some(pos) {
                return false;
            }
        }
        stack.is_empty()
    }

    /// Mirror top and bottom.
    pub fn reflect(&self) -> TLDiagram {
        let (b, t) = (self.bottom, self.top);
        let map = |i: usize| if i < b { t + i } else { i - b };
        let mut partner = vec![0u8; b + t];
        for i in 0..b + t {
            partner[map(i)] = map(self.partner(i)) as u8;
        }
        TLDiagram { bottom: t, top: b, partner }
    }

    /// Rotation by 180 degrees in the plane.
    pub fn rotate(&self) -> TLDiagram {
        let (b, t) = (self.bottom, self.top);
        let map = |i: usize| if i < b { t + (b - 1 - i) } else { t - 1 - (i - b) };
        let mut partner = vec![0u8; b + t];
        for i in 0..b + t {
            partner[map(i)] = map(self.partner(i)) as u8;
        }
        TLDiagram { bottom: t, top: b, partner }
    }

    pub fn tensor(&self, other: &TLDiagram) -> TLDiagram {
        let (b1, t1, b2, t2) = (self.bottom, self.top, other.bottom, other.top);
        let map1 = |i: usize| if i < b1 { i } else { b1 + b2 + (i - b1) };
        let map2 = |i: usize| if i < b2 { b1 + i } else { b1 + b2 + t1 + (i - b2) };
        let mut partner = vec![0u8; b1 + b2 + t1 + t2];
        for i in 0..b1 + t1 {
            partner[map1(i)] = map1(self.partner(i)) as u8;
        }
        for i in 0..b2 + t2 {
            partner[map2(i)] = map2(other.partner(i)) as u8;
        }
        TLDiagram { bottom: b1 + b2, top: t1 + t2, partner }
    }

    fn compose_uncached(&self, other: &TLDiagram) -> (TLDiagram, u32) {
        let (a, b, c) = (self.bottom, self.top, other.top);
        assert_eq!(b, other.bottom);
        let mut partner = vec![u8::MAX; a + c];
        let mut seen_mid = vec![false; b];
        // walk from every outer point
        for start in 0..a + c {
            if partner[start] != u8::MAX {
                continue;
            }
            // (in_lower, index in that diagram)
            let (mut lower, mut idx) = if start < a { (true, start) } else { (false, b + (start - a)) };
            let end = loop {
                let p = if lower { self.partner(idx) } else { other.partner(idx) };
                if lower {
                    if p < a {
                        break p;
                    }
                    let k = p - a;
                    seen_mid[k] = true;
                    lower = false;
                    idx = k;
                } else {
                    if p >= b {
                        break a + (p - b);
                    }
                    seen_mid[p] = true;
                    lower = true;
                    idx = a + p;
                }
            };
            partner[start] = end as u8;
            partner[end] = start as u8;
        }
        // remaining middle points form closed loops
        let mut loops = 0;
        for k0 in 0..b {
            if seen_mid[k0] {
                continue;
            }
            loops += 1;
            let mut k = k0;
            loop {
                seen_mid[k] = true;
                let up = other.partner(k);
                seen_mid[up] = true;
                let down = self.partner(a + up) - a;
                if down == k0 {
                    break;
                }
                k = down;
            }
        }
        (TLDiagram { bottom: a, top: c, partner }, loops)
    }

    /// `other` stacked on top of `self`; returns the diagram and the number
    /// of closed loops created. Memoized.
    pub fn compose(&self, other: &TLDiagram) -> (TLDiagram, u32) {
        static CACHE: OnceLock<DashMap<(TLDiagram, TLDiagram), (TLDiagram, u32)>> = OnceLock::new();
        let cache = CACHE.get_or_init(DashMap::new);
        let key = (self.clone(), other.clone());
        if let Some(v) = cache.get(&key) {
            return v.clone();
        }
        let v = self.compose_uncached(other);
        cache.insert(key, v.clone());
        v
    }

    /// Loops in the closure (top point `i` joined to bottom point `i`).
    pub fn closure_loops(&self) -> u32 {
        assert_eq!(self.bottom, self.top);
        let n = self.bottom;
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for s in 0..2 * n {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut i = s;
            loop {
                seen[i] = true;
                let p = self.partner(i);
                seen[p] = true;
                let next = if p < n { p + n } else { p - n };
                if next == s {
                    break;
                }
                i = next;
            }
        }
        loops
    }
}

fn all_matchings(points: usize) -> Vec<String> {
    // balanced parenthesis strings in lexicographic order ('(' < ')')
    fn rec(open: usize, close: usize, cur: &mut String, out: &mut Vec<String>) {
        if open == 0 && close == 0 {
            out.push(cur.clone());
            return;
        }
        if open > 0 {
            cur.push('(');
            rec(open - 1, close + 1, cur, out);
            cur.pop();
        }
        if close > 0 {
            cur.push(')');
            rec(open, close - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if points.is_multiple_of(2) {
        rec(points / 2, 0, &mut String::new(), &mut out);
    }
    out
}

/// All planar matchings `bottom -> top`, sorted by parenthesis code.
pub fn rect_basis(bottom: usize, top: usize) -> Vec<TLDiagram> {
    all_matchings(bottom + top)
        .iter()
        .map(|c| TLDiagram::from_code(bottom, top, c).expect("generated codes are valid"))
        .collect()
}

/// Basis of TL_n: Catalan(n) diagrams in canonical order.
pub fn tl_basis(n: usize) -> Vec<TLDiagram> {
    rect_basis(n, n)
}

#[derive(Clone)]
pub struct TLElement {
    ring: Arc<Ring>,
    bottom: usize,
    top: usize,
    terms: HashMap<TLDiagram, Scalar>,
}

impl std::fmt::Debug for TLElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms: Vec<_> = self.terms.iter().map(|(d, c)| (d.code(), c)).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        f.debug_map().entries(terms).finish()
    }
}

impl PartialEq for TLElement {
    fn eq(&self, other: &TLElement) -> bool {
        self.bottom == other.bottom && self.top == other.top && self.terms == other.terms
    }
}

impl TLElement {
    pub fn zero(ring: &Arc<Ring>, bottom: usize, top: usize) -> TLElement {
        TLElement { ring: ring.clone(), bottom, top, terms: HashMap::new() }
    }

    pub fn from_diagram(ring: &Arc<Ring>, d: TLDiagram) -> TLElement {
        TLElement::from_terms(ring, d.bottom, d.top, [(d, Scalar::one(ring))])
    }

    pub fn from_terms(
        ring: &Arc<Ring>,
        bottom: usize,
        top: usize,
        terms: impl IntoIterator<Item = (TLDiagram, Scalar)>,
    ) -> TLElement {
        let mut e = TLElement::zero(ring, bottom, top);
        for (d, c) in terms {
            e.add_term(d, &c);
        }
        e
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> TLElement {
        TLElement::from_diagram(ring, TLDiagram::identity(n))
    }

    pub fn generator(ring: &Arc<Ring>, n: usize, i: usize) -> TLElement {
        TLElement::from_diagram(ring, TLDiagram::generator(n, i))
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Strand count of a square element.
    pub fn n(&self) -> usize {
        self.bottom
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLDiagram, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in canonical (code) order.
    pub fn sorted_terms(&self) -> Vec<(TLDiagram, Scalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(d, c)| (d.clone(), c.clone())).collect();
        v.sort_by_cached_key(|(d, _)| d.code());
        v
    }

    pub fn coefficient(&self, d: &TLDiagram) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_else(|| Scalar::zero(&self.ring))
    }

    pub fn identity_coefficient(&self) -> Scalar {
        if self.bottom != self.top {
            return Scalar::zero(&self.ring);
        }
        self.coefficient(&TLDiagram::identity(self.bottom))
    }

    fn add_term(&mut self, d: TLDiagram, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&d);
                }
            }
            None => {
                self.terms.insert(d, c.clone());
            }
        }
    }

    pub fn add(&self, other: &TLElement) -> TLElement {
        assert_eq!((self.bottom, self.top), (other.bottom, other.top));
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &TLElement) -> TLElement {
        self.add(&other.scale(&-Scalar::one(&self.ring)))
    }

    pub fn scale(&self, s: &Scalar) -> TLElement {
        let mut out = TLElement::zero(&self.ring, self.bottom, self.top);
        if s.is_zero() {
            return out;
        }
        for (d, c) in &self.terms {
            out.terms.insert(d.clone(), c * s);
        }
        out
    }

    /// `other` stacked on top of `self`.
    pub fn compose(&self, other: &TLElement) -> Result<TLElement> {
        if self.top != other.bottom {
            return Err(Error::StrandMismatch(self.top, other.bottom));
        }
        let d = Scalar::d(&self.ring);
        let mut dpow = vec![Scalar::one(&self.ring)];
        let mut acc: HashMap<TLDiagram, Scalar> = HashMap::new();
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let (z, loops) = x.compose(y);
                while dpow.len() <= loops as usize {
                    let next = dpow.last().unwrap() * &d;
                    dpow.push(next);
                }
                let c = &(cx * cy) * &dpow[loops as usize];
                match acc.get_mut(&z) {
                    Some(v) => *v += &c,
                    None => {
                        acc.insert(z, c);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(TLElement { ring: self.ring.clone(), bottom: self.bottom, top: other.top, terms: acc })
    }

    pub fn tensor(&self, other: &TLElement) -> TLElement {
        let mut out = TLElement::zero(&self.ring, self.bottom + other.bottom, self.top + other.top);
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                out.add_term(x.tensor(y), &(cx * cy));
            }
        }
        out
    }

    pub fn reflect(&self) -> TLElement {
        TLElement::from_terms(&self.ring, self.top, self.bottom, self.terms.iter().map(|(d, c)| (d.reflect(), c.clone())))
    }

    pub fn rotate(&self) -> TLElement {
        TLElement::from_terms(&self.ring, self.top, self.bottom, self.terms.iter().map(|(d, c)| (d.rotate(), c.clone())))
    }

    /// `Some(lambda)` when `self = lambda * other`.
    pub fn proportional_to(&self, other: &TLElement) -> Option<Scalar> {
        let (d0, c0) = other.terms.iter().next()?;
        let lambda = self.coefficient(d0).checked_div(c0).ok()?;
        if *self == other.scale(&lambda) {
            Some(lambda)
        } else {
            None
        }
    }

    pub fn to_json(&self) -> TLElementJson {
        TLElementJson {
            n: self.bottom,
            top: if self.top != self.bottom { Some(self.top) } else { None },
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(d, c)| TLTermJson { matching: d.code(), coeff: c.to_json() })
                .collect(),
        }
    }

    pub fn from_json(ring: &Arc<Ring>, j: &TLElementJson) -> Result<TLElement> {
        let top = j.top.unwrap_or(j.n);
        let mut terms = Vec::new();
        for t in &j.terms {
            terms.push((TLDiagram::from_code(j.n, top, &t.matching)?, Scalar::from_json(ring, &t.coeff)?));
        }
        Ok(TLElement::from_terms(ring, j.n, top, terms))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TLTermJson {
    pub matching: String,
    pub coeff: ScalarJson,
}

/// Wire form `{"n": int, "terms": [{"matching": code, "coeff": Scalar}]}`;
/// `top` only appears for rectangular elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TLElementJson {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<usize>,
    pub terms: Vec<TLTermJson>,
}

pub fn tl_mul(x: &TLElement, y: &TLElement) -> Result<TLElement> {
    if x.bottom != y.bottom || x.top != y.top || x.bottom != x.top {
        return Err(Error::StrandMismatch(x.bottom, y.bottom));
    }
    x.compose(y)
}

/// Closure value: each diagram contributes `d^loops`.
pub fn markov_trace(x: &TLElement) -> Scalar {
    assert_eq!(x.bottom, x.top, "trace needs a square element");
    let d = Scalar::d(&x.ring);
    let mut acc = Scalar::zero(&x.ring);
    for (diag, c) in &x.terms {
        acc += &(c * &d.pow(diag.closure_loops()));
    }
    acc
}

/// Loop values `d_0..=d_max` from the Chebyshev recursion.
pub fn chebyshev_loop_values(ring: &Arc<Ring>, max: usize) -> Vec<Scalar> {
    let d = Scalar::d(ring);
    let mut v = vec![Scalar::one(ring), d.clone()];
    while v.len() <= max {
        let n = v.len();
        let next = &(&d * &v[n - 1]) - &v[n - 2];
        v.push(next);
    }
    v.truncate(max + 1);
    v
}

/// Jones–Wenzl projector on `k` strands (`k <= r - 2`), by Wenzl's recursion
/// `P_n = P' - (d_{n-2}/d_{n-1}) P' e_{n-1} P'` with `P' = P_{n-1} ⊗ 1`.
pub fn jones_wenzl(ring: &Arc<Ring>, k: usize) -> Result<TLElement> {
    let r = ring.r() as usize;
    if k > r - 2 {
        return Err(Error::LabelOutOfRange { label: k as u32, r: r as u32 });
    }
    Ok(jones_wenzl_cached(ring, k))
}

fn jones_wenzl_cached(ring: &Arc<Ring>, k: usize) -> TLElement {
    static CACHE: OnceLock<DashMap<(u32, u32, usize), TLElement>> = OnceLock::new();
    let cache = CACHE.get_or_init(DashMap::new);
    let key = (ring.r(), ring.params().s, k);
    if let Some(v) = cache.get(&key) {
        return v.clone();
    }
    let p = if k <= 1 {
        TLElement::identity(ring, k)
    } else {
        let prev = jones_wenzl_cached(ring, k - 1).tensor(&TLElement::identity(ring, 1));
        let dk = chebyshev_loop_values(ring, k - 1);
        let coeff = dk[k - 2].checked_div(&dk[k - 1]).expect("d_{k-1} != 0 for k <= r-1");
        let e = TLElement::generator(ring, k, k - 1);
        let sandwich = prev.compose(&e).unwrap().compose(&prev).unwrap();
        prev.sub(&sandwich.scale(&coeff))
    };
    cache.insert(key, p.clone());
    p
}

/// A signed braid generator: `+i` is `sigma_i`, `-i` its inverse.
pub type BraidLetter = i32;

/// Image of a braid word in TL_n: `sigma_i -> A id + A^{-1} e_i`,
/// `sigma_i^{-1} -> A^{-1} id + A e_i`.
pub fn resolve_braid(ring: &Arc<Ring>, word: &[BraidLetter], n: usize) -> Result<TLElement> {
    let mut acc = TLElement::identity(ring, n);
    for &g in word {
        acc = acc.compose(&braid_generator(ring, g, n)?)?;
    }
    Ok(acc)
}

pub fn braid_generator(ring: &Arc<Ring>, g: BraidLetter, n: usize) -> Result<TLElement> {
    let i = g.unsigned_abs() as usize;
    if g == 0 || i >= n {
        return Err(Error::GeneratorOutOfRange { index: g, strands: n });
    }
    let sign = g.signum() as i64;
    let id = TLElement::identity(ring, n).scale(&Scalar::a_pow(ring, sign));
    let e = TLElement::generator(ring, n, i).scale(&Scalar::a_pow(ring, -sign));
    Ok(id.add(&e))
}

/// Returns `lambda` with `b P_k = lambda P_k`, checking `lambda = A^{c(b)}`.
pub fn braid_absorption_check(ring: &Arc<Ring>, word: &[BraidLetter], k: usize) -> Result<Scalar> {
    let p = jones_wenzl(ring, k)?;
    let b = resolve_braid(ring, word, k)?;
    let prod = b.compose(&p)?;
    let lambda = prod
        .proportional_to(&p)
        .ok_or_else(|| Error::Internal("braid times projector is not proportional to the projector".into()))?;
    let writhe: i64 = word.iter().map(|g| g.signum() as i64).sum();
    if lambda != Scalar::a_pow(ring, writhe) {
        return Err(Error::Internal(format!("absorbed scalar {lambda} differs from A^{writhe}")));
    }
    Ok(lambda)
}

/// Sequences `0 = m_0, m_1, ..., m_n = m` with steps of `±1` and
/// `0 <= m_i <= max_label`.
pub fn admissible_paths(n: usize, m: usize, max_label: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, n: usize, m: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        let left = n + 1 - cur.len();
        if left == 0 {
            if last == m {
                out.push(cur.clone());
            }
            return;
        }
        // can still reach m?
        for next in [last.wrapping_sub(1), last + 1] {
            if next == usize::MAX || next > max {
                continue;
            }
            let dist = next.abs_diff(m);
            if dist > left - 1 {
                continue;
            }
            cur.push(next);
            rec(cur, n, m, max, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= max_label && m <= n && (n - m).is_multiple_of(2) {
        rec(&mut vec![0], n, m, max_label, &mut out);
    }
    out
}

/// Path basis of the sector of TL_n that factors through `P_m`.
///
/// `down[p]: n -> m` is the fusion tree along path `p`, `up[p]` its mirror
/// image, and `up[p]` stacked on `down[q]` equals `delta_pq * norms[p] * P_m`.
#[derive(Clone)]
pub struct SectorBasis {
    pub n: usize,
    pub m: usize,
    pub paths: Vec<Vec<usize>>,
    pub down: Vec<TLElement>,
    pub up: Vec<TLElement>,
    pub norms: Vec<Scalar>,
}

impl SectorBasis {
    pub fn new(ring: &Arc<Ring>, n: usize, m: usize) -> Result<SectorBasis> {
        let max = ring.r() as usize - 2;
        if m > max {
            return Err(Error::LabelOutOfRange { label: m as u32, r: ring.r() });
        }
        let paths = admissible_paths(n, m, max);
        let mut down = Vec::with_capacity(paths.len());
        for path in &paths {
            down.push(fusion_tree(ring, path)?);
        }
        let up: Vec<TLElement> = down.iter().map(|v| v.reflect()).collect();
        let mut norms = Vec::with_capacity(paths.len());
        for (u, v) in up.iter().zip(&down) {
            let nv = u.compose(v)?.identity_coefficient();
            if nv.is_zero() {
                return Err(Error::Internal(format!("degenerate path vector in sector {m} of TL_{n}")));
            }
            norms.push(nv);
        }
        Ok(SectorBasis { n, m, paths, down, up, norms })
    }

    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    /// Matrix of `x` acting by precomposition on the path basis; column `p`
    /// holds the coordinates of `x` then `down[p]`. Multiplicative:
    /// `action(x then y) = action(x) * action(y)`.
    pub fn action(&self, x: &TLElement) -> Result<Vec<Vec<Scalar>>> {
        let ring = x.ring().clone();
        let dim = self.dim();
        let mut mat = vec![vec![Scalar::zero(&ring); dim]; dim];
        for p in 0..dim {
            let w = x.compose(&self.down[p])?;
            for q in 0..dim {
                let c = self.up[q].compose(&w)?.identity_coefficient();
                if !c.is_zero() {
                    mat[q][p] = c.checked_div(&self.norms[q])?;
                }
            }
        }
        Ok(mat)
    }

    /// Central idempotent of TL_n supported on this sector.
    pub fn idempotent(&self, ring: &Arc<Ring>) -> Result<TLElement> {
        let mut z = TLElement::zero(ring, self.n, self.n);
        for ((v, u), nv) in self.down.iter().zip(&self.up).zip(&self.norms) {
            z = z.add(&v.compose(u)?.scale(&nv.inv()?));
        }
        Ok(z)
    }
}

/// Fusion tree `n -> m` along a path, built strand by strand: an up-step
/// applies the next projector, a down-step caps the new strand against the
/// last strand of the current projector.
pub fn fusion_tree(ring: &Arc<Ring>, path: &[usize]) -> Result<TLElement> {
    let n = path.len() - 1;
    let mut v = TLElement::identity(ring, 0);
    for i in 0..n {
        let (cur, next) = (path[i], path[i + 1]);
        let widened = v.tensor(&TLElement::identity(ring, 1));
        v = if next == cur + 1 {
            widened.compose(&jones_wenzl(ring, next)?)?
        } else if next + 1 == cur {
            widened.compose(&TLElement::from_diagram(ring, TLDiagram::cap(cur + 1)))?
        } else {
            return Err(Error::Internal("path step is not ±1".into()));
        };
    }
    Ok(v)
}

/// The sector idempotents `z_m` of TL_n for `m = n mod 2, ..., min(n, r-2)`.
pub fn sector_projectors(ring: &Arc<Ring>, n: usize) -> Result<Vec<(usize, TLElement)>> {
    let max = ring.r() as usize - 2;
    let mut out = Vec::new();
    let mut m = n % 2;
    while m <= n.min(max) {
        let basis = SectorBasis::new(ring, n, m)?;
        if basis.dim() > 0 {
            out.push((m, basis.idempotent(ring)?));
        }
        m += 2;
    }
    Ok(out)
}

/// `x - y` lies in the radical of the trace form (the negligible ideal).
pub fn equal_mod_negligible(x: &TLElement, y: &TLElement) -> Result<bool> {
    let diff = x.sub(y);
    if diff.is_zero() {
        return Ok(true);
    }
    for w in tl_basis(x.n()) {
        let prod = diff.compose(&TLElement::from_diagram(x.ring(), w))?;
        if !markov_trace(&prod).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
