//! Contraction of planar networks of boxes.
//!
//! A box is a disk with `k` ports carrying a linear combination of perfect
//! matchings of those ports (a crossing, a projector, ...). Ports are joined
//! by wires. Contraction absorbs boxes one at a time; the state is a map
//! from a pairing of the current frontier ports to a coefficient, so
//! resolutions that agree on the frontier are merged as soon as they meet.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalars::{Ring, Scalar};

#[derive(Clone, Debug)]
pub struct NetBox {
    pub ports: usize,
    pub terms: Vec<(Vec<u8>, Scalar)>,
    /// `Some(k)` when every coefficient of this box is `A^k` for term `i`.
    a_powers: Option<Vec<i64>>,
}

impl NetBox {
    pub fn new(ports: usize, terms: Vec<(Vec<u8>, Scalar)>) -> NetBox {
        NetBox { ports, terms, a_powers: None }
    }

    /// Kauffman crossing with ports `[S, E, N, W]`, the S–N strand under.
    pub fn crossing(ring: &Arc<Ring>) -> NetBox {
        NetBox {
            ports: 4,
            terms: vec![
                (vec![1, 0, 3, 2], Scalar::a_pow(ring, 1)),
                (vec![3, 2, 1, 0], Scalar::a_pow(ring, -1)),
            ],
            a_powers: Some(vec![1, -1]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Port(usize),
    External(usize),
}

/// Wiring under construction: points with at most two links each.
#[derive(Default)]
pub struct NetworkBuilder {
    links: Vec<Vec<usize>>,
    kind: Vec<PointKind>,
    boxes: Vec<NetBox>,
    box_points: Vec<Vec<usize>>,
    externals: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum PointKind {
    Wire,
    Port(usize, usize),
    External(usize),
}

impl NetworkBuilder {
    pub fn new() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    pub fn point(&mut self) -> usize {
        self.links.push(Vec::new());
        self.kind.push(PointKind::Wire);
        self.links.len() - 1
    }

    pub fn link(&mut self, p: usize, q: usize) {
        self.links[p].push(q);
        self.links[q].push(p);
    }

    /// Adds a box; returns the points standing for its ports.
    pub fn add_box(&mut self, b: NetBox) -> Vec<usize> {
        assert!(b.ports > 0, "boxes need at least one port");
        let idx = self.boxes.len();
        let pts: Vec<usize> = (0..b.ports)
            .map(|leg| {
                let p = self.point();
                self.kind[p] = PointKind::Port(idx, leg);
                p
            })
            .collect();
        self.boxes.push(b);
        self.box_points.push(pts.clone());
        pts
    }

    /// External end number `slot`; slots must be `0..n` without gaps.
    pub fn external(&mut self, slot: usize) -> usize {
        let p = self.point();
        self.kind[p] = PointKind::External(slot);
        self.externals = self.externals.max(slot + 1);
        p
    }

    pub fn finish(self) -> Result<Network> {
        let n = self.links.len();
        for (p, l) in self.links.iter().enumerate() {
            let want = if self.kind[p] == PointKind::Wire { 2 } else { 1 };
            if l.len() != want {
                return Err(Error::MalformedDiagram(format!(
                    "wiring point has {} links, expected {want}",
                    l.len()
                )));
            }
        }
        let mut port_base = Vec::with_capacity(self.boxes.len());
        let mut total = 0;
        for b in &self.boxes {
            port_base.push(total);
            total += b.ports;
        }
        let target_of = |p: usize| match self.kind[p] {
            PointKind::Port(b, leg) => Some(Target::Port(port_base[b] + leg)),
            PointKind::External(s) => Some(Target::External(s)),
            PointKind::Wire => None,
        };
        let mut visited = vec![false; n];
        let mut wire = vec![Target::External(usize::MAX); total];
        let mut direct = Vec::new();
        for start in 0..n {
            let Some(t0) = target_of(start) else { continue };
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut prev = start;
            let mut cur = self.links[start][0];
            while target_of(cur).is_none() {
                visited[cur] = true;
                let next = if self.links[cur][0] == prev { self.links[cur][1] } else { self.links[cur][0] };
                prev = cur;
                cur = next;
            }
            visited[cur] = true;
            let t1 = target_of(cur).unwrap();
            match (t0, t1) {
                (Target::Port(a), _) => {
                    wire[a] = t1;
                    if let Target::Port(b) = t1 {
                        wire[b] = t0;
                    }
                }
                (Target::External(_), Target::Port(b)) => wire[b] = t0,
                (Target::External(a), Target::External(b)) => direct.push((a, b)),
            }
        }
        let mut free_loops = 0u32;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            free_loops += 1;
            let mut prev = start;
            let mut cur = self.links[start][0];
            visited[start] = true;
            while cur != start {
                visited[cur] = true;
                let next = if self.links[cur][0] == prev { self.links[cur][1] } else { self.links[cur][0] };
                prev = cur;
                cur = next;
            }
        }
        Ok(Network { boxes: self.boxes, port_base, wire, free_loops, direct, externals: self.externals })
    }
}

/// A closed or open network ready for contraction.
pub struct Network {
    boxes: Vec<NetBox>,
    port_base: Vec<usize>,
    wire: Vec<Target>,
    free_loops: u32,
    direct: Vec<(usize, usize)>,
    externals: usize,
}

impl Network {
    pub fn box_count(&self) -> usize {
        self.boxes.len()
    }

    fn box_of(&self, port: usize) -> usize {
        self.port_base.partition_point(|&b| b <= port) - 1
    }

    /// Greedy absorption order keeping the frontier small.
    fn order(&self) -> Vec<usize> {
        let nb = self.boxes.len();
        let mut absorbed = vec![false; nb];
        let mut order = Vec::with_capacity(nb);
        let mut frontier = 0i64;
        for _ in 0..nb {
            let mut best: Option<(i64, i64, usize)> = None;
            for b in 0..nb {
                if absorbed[b] {
                    continue;
                }
                let (mut to_front, mut grow) = (0i64, 0i64);
                for leg in 0..self.boxes[b].ports {
                    match self.wire[self.port_base[b] + leg] {
                        Target::Port(q) => {
                            let ob = self.box_of(q);
                            if absorbed[ob] {
                                to_front += 1;
                            } else if ob != b {
                                grow += 1;
                            }
                        }
                        Target::External(_) => grow += 1,
                    }
                }
                let size = frontier - to_front + grow;
                let key = (size, -to_front, b);
                if best.is_none_or(|bk| (key.0, key.1) < (bk.0, bk.1)) {
                    best = Some(key);
                }
            }
            let (size, _, b) = best.unwrap();
            absorbed[b] = true;
            frontier = size;
            order.push(b);
        }
        order
    }

    /// Full contraction. Keys of the result pair up external slots
    /// (`key[i]` is the partner of slot `i`); a closed network yields the
    /// single empty key.
    pub fn contract(&self, ring: &Arc<Ring>) -> HashMap<Vec<u8>, Scalar> {
        let d = Scalar::d(ring);
        let mut dpow = vec![Scalar::one(ring)];
        let mut frontier: Vec<usize> = Vec::new();
        let mut states: HashMap<Vec<u8>, Scalar> = HashMap::new();
        states.insert(Vec::new(), Scalar::one(ring));
        let mut in_frontier: HashMap<usize, usize> = HashMap::new();

        for b in self.order() {
            let nb = &self.boxes[b];
            let base = self.port_base[b];
            let f = frontier.len();
            // local indices: 0..f frontier, f..f+ports box ports
            let total = f + nb.ports;
            let mut wire_local: Vec<Option<usize>> = vec![None; total];
            let mut new_frontier_local = Vec::new();
            let mut new_frontier_global = Vec::new();
            for leg in 0..nb.ports {
                let here = f + leg;
                match self.wire[base + leg] {
                    Target::Port(q) if q >= base && q < base + nb.ports => {
                        wire_local[here] = Some(f + (q - base));
                    }
                    Target::Port(q) => {
                        if let Some(&fi) = in_frontier.get(&q) {
                            wire_local[here] = Some(fi);
                            wire_local[fi] = Some(here);
                        }
                    }
                    Target::External(_) => {}
                }
            }
            for (fi, &gp) in frontier.iter().enumerate() {
                if wire_local[fi].is_none() {
                    new_frontier_local.push(fi);
                    new_frontier_global.push(gp);
                }
            }
            for leg in 0..nb.ports {
                if wire_local[f + leg].is_none() {
                    new_frontier_local.push(f + leg);
                    new_frontier_global.push(base + leg);
                }
            }
            let mut pos_in_new = vec![usize::MAX; total];
            for (i, &l) in new_frontier_local.iter().enumerate() {
                pos_in_new[l] = i;
            }

            let mut next: HashMap<Vec<u8>, Scalar> = HashMap::with_capacity(states.len() * nb.terms.len());
            let mut link = vec![0usize; total];
            let mut seen = vec![false; total];
            for (key, coef) in &states {
                for fi in 0..f {
                    link[fi] = key[fi] as usize;
                }
                for (ti, (pairing, tc)) in nb.terms.iter().enumerate() {
                    for leg in 0..nb.ports {
                        link[f + leg] = f + pairing[leg] as usize;
                    }
                    seen.iter_mut().for_each(|s| *s = false);
                    let mut out = vec![0u8; new_frontier_local.len()];
                    for (i, &u) in new_frontier_local.iter().enumerate() {
                        if seen[u] {
                            continue;
                        }
                        seen[u] = true;
                        let mut v = link[u];
                        seen[v] = true;
                        while let Some(w) = wire_local[v] {
                            seen[w] = true;
                            v = link[w];
                            seen[v] = true;
                        }
                        let j = pos_in_new[v];
                        out[i] = j as u8;
                        out[j] = i as u8;
                    }
                    let mut loops = 0usize;
                    for u in 0..total {
                        if seen[u] {
                            continue;
                        }
                        loops += 1;
                        let mut v = u;
                        loop {
                            seen[v] = true;
                            let w = link[v];
                            seen[w] = true;
                            v = wire_local[w].expect("interior point is wired");
                            if v == u {
                                break;
                            }
                        }
                    }
                    while dpow.len() <= loops {
                        let nx = dpow.last().unwrap() * &d;
                        dpow.push(nx);
                    }
                    let mut c = match &nb.a_powers {
                        Some(p) => coef.mul_a_pow(p[ti]),
                        None => coef * tc,
                    };
                    if loops > 0 {
                        c = &c * &dpow[loops];
                    }
                    match next.get_mut(&out) {
                        Some(v) => *v += &c,
                        None => {
                            next.insert(out, c);
                        }
                    }
                }
            }
            next.retain(|_, v| !v.is_zero());
            states = next;
            frontier = new_frontier_global;
            in_frontier.clear();
            for (i, &g) in frontier.iter().enumerate() {
                in_frontier.insert(g, i);
            }
            if states.is_empty() {
                return HashMap::new();
            }
        }

        // translate frontier ports (all wired to externals) into slots
        let ext = self.externals;
        let slot_of: Vec<usize> = frontier
            .iter()
            .map(|&p| match self.wire[p] {
                Target::External(s) => s,
                Target::Port(_) => unreachable!("frontier port left unwired"),
            })
            .collect();
        let loop_factor = d.pow(self.free_loops);
        let mut result = HashMap::new();
        for (key, coef) in states {
            let mut out = vec![0u8; ext];
            for (i, &j) in key.iter().enumerate() {
                out[slot_of[i]] = slot_of[j as usize] as u8;
            }
            for &(a, b) in &self.direct {
                out[a] = b as u8;
                out[b] = a as u8;
            }
            let c = &coef * &loop_factor;
            if !c.is_zero() {
                result.insert(out, c);
            }
        }
        result
    }

    /// Value of a closed network.
    pub fn evaluate_closed(&self, ring: &Arc<Ring>) -> Result<Scalar> {
        if self.externals != 0 {
            return Err(Error::Internal("closed evaluation of an open network".into()));
        }
        Ok(self.contract(ring).remove(&Vec::new()).unwrap_or_else(|| Scalar::zero(ring)))
    }
}
