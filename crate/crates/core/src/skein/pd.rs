//! Extended PD code: JSON wire format, parser and printers.
//!
//! ```json
//! {
//!   "version": 1,
//!   "crossings": [{"pd": [1, 2, 3, 4], "sign": 1}],
//!   "vertices": [[5, 6, 7]],
//!   "components": [{"edges": [1, 2], "label": 1, "framing": 0}]
//! }
//! ```
//!
//! Crossing legs are edge ids in counterclockwise order starting at the
//! incoming under edge. `sign` is optional when the over strand's
//! direction can be inferred. Vertex legs are counterclockwise. A
//! component lists its edges in traversal order; an empty list is a
//! crossingless circle. `label` is an integer or `"omega"`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::skein::diagram::{Diagram, End, NodeKind};
use crate::skein::{LabeledLink, LinkLabel};

pub const PD_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CrossingJson {
    Plain([i64; 4]),
    Signed { pd: [i64; 4], #[serde(default, skip_serializing_if = "Option::is_none")] sign: Option<i64> },
}

impl CrossingJson {
    fn legs(&self) -> [i64; 4] {
        match self {
            CrossingJson::Plain(p) => *p,
            CrossingJson::Signed { pd, .. } => *pd,
        }
    }

    fn sign(&self) -> Option<i64> {
        match self {
            CrossingJson::Plain(_) => None,
            CrossingJson::Signed { sign, .. } => *sign,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelJson {
    Int(u32),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub edges: Vec<i64>,
    pub label: LabelJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub framing: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkJson {
    #[serde(default = "default_version")]
    pub version: u32,
    #[serde(default)]
    pub crossings: Vec<CrossingJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vertices: Vec<Vec<i64>>,
    pub components: Vec<ComponentJson>,
}

fn default_version() -> u32 {
    PD_VERSION
}

fn parse_label(l: &LabelJson) -> Result<LinkLabel> {
    match l {
        LabelJson::Int(k) => Ok(LinkLabel::Label(*k)),
        LabelJson::Name(s) if s.eq_ignore_ascii_case("omega") || s == "ω" => Ok(LinkLabel::Omega),
        LabelJson::Name(s) => s
            .parse::<u32>()
            .map(LinkLabel::Label)
            .map_err(|_| Error::Parse(format!("bad label `{s}`"))),
    }
}

pub fn parse_link_str(s: &str) -> Result<LabeledLink> {
    let j: LinkJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    link_from_json(&j)
}

pub fn link_from_json(j: &LinkJson) -> Result<LabeledLink> {
    if j.version != PD_VERSION {
        return Err(Error::Parse(format!("unsupported diagram version {}", j.version)));
    }
    let perr = |m: String| Error::Parse(m);
    // edge id -> index, component
    let mut index: HashMap<i64, usize> = HashMap::new();
    let mut comp_of: Vec<usize> = Vec::new();
    let mut ids: Vec<i64> = Vec::new();
    let mut d = Diagram::new();
    for (c, comp) in j.components.iter().enumerate() {
        d.add_comp();
        if comp.edges.is_empty() {
            d.loops.push(c);
        }
        for &e in &comp.edges {
            if index.insert(e, ids.len()).is_some() {
                return Err(perr(format!("edge {e} listed in two components")));
            }
            ids.push(e);
            comp_of.push(c);
        }
    }
    let ne = ids.len();
    // occurrences: (node, leg)
    let mut occ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ne];
    let mut kinds = Vec::new();
    for x in &j.crossings {
        let n = kinds.len();
        kinds.push(NodeKind::Crossing);
        for (l, e) in x.legs().iter().enumerate() {
            let &ei = index.get(e).ok_or_else(|| perr(format!("crossing uses unknown edge {e}")))?;
            occ[ei].push((n, l));
        }
    }
    for v in &j.vertices {
        if v.len() != 3 {
            return Err(perr("vertices are trivalent".into()));
        }
        let n = kinds.len();
        kinds.push(NodeKind::Vertex);
        for (l, e) in v.iter().enumerate() {
            let &ei = index.get(e).ok_or_else(|| perr(format!("vertex uses unknown edge {e}")))?;
            occ[ei].push((n, l));
        }
    }
    for (e, o) in occ.iter().enumerate() {
        if o.len() != 2 {
            return Err(perr(format!("edge {} must appear at exactly two legs, found {}", ids[e], o.len())));
        }
    }
    // orientation: Some(true) when occ[e][1] is the head
    let mut head_second: Vec<Option<bool>> = vec![None; ne];
    let set = |hs: &mut Vec<Option<bool>>, e: usize, node: usize, leg: usize, is_head: bool| -> Result<bool> {
        let second = occ[e][1] == (node, leg) && !(occ[e][0] == (node, leg));
        let want = if second { is_head } else { !is_head };
        match hs[e] {
            Some(v) if v != want => Err(Error::Parse(format!("edge {} has inconsistent orientation", ids[e]))),
            Some(_) => Ok(false),
            None => {
                hs[e] = Some(want);
                Ok(true)
            }
        }
    };
    let crossing_legs: Vec<[usize; 4]> = j
        .crossings
        .iter()
        .map(|x| {
            let l = x.legs();
            [index[&l[0]], index[&l[1]], index[&l[2]], index[&l[3]]]
        })
        .collect();
    // self-loops at one crossing need care: an edge at legs (n,l1),(n,l2)
    for (n, legs) in crossing_legs.iter().enumerate() {
        set(&mut head_second, legs[0], n, 0, true)?;
        set(&mut head_second, legs[2], n, 2, false)?;
        if let Some(s) = j.crossings[n].sign() {
            if s != 1 && s != -1 {
                return Err(perr("crossing sign must be ±1".into()));
            }
            set(&mut head_second, legs[3], n, 3, s == 1)?;
            set(&mut head_second, legs[1], n, 1, s != 1)?;
        }
    }
    // propagate over strands through crossings
    loop {
        let mut progress = false;
        for (n, legs) in crossing_legs.iter().enumerate() {
            let known = |hs: &Vec<Option<bool>>, e: usize, leg: usize| -> Option<bool> {
                hs[e].map(|second| {
                    let at_second = occ[e][1] == (n, leg) && occ[e][0] != (n, leg);
                    if at_second {
                        second
                    } else {
                        !second
                    }
                })
            };
            let b_in = known(&head_second, legs[1], 1);
            let d_in = known(&head_second, legs[3], 3);
            match (b_in, d_in) {
                (Some(b), None) => progress |= set(&mut head_second, legs[3], n, 3, !b)?,
                (None, Some(dd)) => progress |= set(&mut head_second, legs[1], n, 1, !dd)?,
                _ => {}
            }
        }
        if !progress {
            break;
        }
    }
    // remaining: component traversal order
    for (n, legs) in crossing_legs.iter().enumerate() {
        if head_second[legs[1]].is_some() {
            continue;
        }
        let c = comp_of[legs[1]];
        let list: Vec<usize> = j.components[c].edges.iter().map(|e| index[e]).collect();
        let pos = |e: usize| list.iter().position(|&x| x == e).unwrap();
        let (pb, pd) = (pos(legs[1]), pos(legs[3]));
        if list.len() < 2 {
            return Err(perr("cannot orient a crossing; give its sign".into()));
        }
        let d_to_b = (pd + 1) % list.len() == pb;
        set(&mut head_second, legs[3], n, 3, d_to_b)?;
        set(&mut head_second, legs[1], n, 1, !d_to_b)?;
    }
    for hs in head_second.iter_mut() {
        if hs.is_none() {
            *hs = Some(true);
        }
    }
    for k in kinds {
        d.add_node(k, if k == NodeKind::Crossing { 4 } else { 3 });
    }
    for e in 0..ne {
        let (a, b) = (occ[e][0], occ[e][1]);
        let (t, h) = if head_second[e] == Some(true) { (a, b) } else { (b, a) };
        d.add_edge(End::Node(t.0, t.1), End::Node(h.0, h.1), comp_of[e]);
    }
    d.validate()?;
    let labels: Vec<LinkLabel> = j.components.iter().map(|c| parse_label(&c.label)).collect::<Result<_>>()?;
    let framings: Vec<i64> = j
        .components
        .iter()
        .enumerate()
        .map(|(c, comp)| comp.framing.unwrap_or_else(|| d.self_writhe(c)))
        .collect();
    // components through vertices keep blackboard framing
    let framings = framings
        .into_iter()
        .enumerate()
        .map(|(c, f)| if touches_vertex(&d, c) { d.self_writhe(c) } else { f })
        .collect();
    Ok(LabeledLink { diagram: d, labels, framings })
}

fn touches_vertex(d: &Diagram, comp: usize) -> bool {
    d.edges.iter().filter(|e| e.comp == comp).any(|e| {
        [e.tail, e.head].iter().any(|end| matches!(end, End::Node(n, _) if d.nodes[*n].kind == NodeKind::Vertex))
    })
}

/// Edges of a component in traversal order (as far as the walk through
/// crossings reaches, then the rest by index).
pub fn traversal_order(d: &Diagram, comp: usize) -> Vec<usize> {
    let edges = d.comp_edges(comp);
    let mut out = Vec::new();
    let Some(&first) = edges.first() else { return out };
    let mut seen = vec![false; d.edges.len()];
    let mut e = first;
    loop {
        if seen[e] {
            break;
        }
        seen[e] = true;
        out.push(e);
        match d.edges[e].head {
            End::Node(x, l) if d.nodes[x].kind == NodeKind::Crossing => {
                e = d.nodes[x].legs[(l + 2) % 4];
            }
            _ => break,
        }
    }
    for &e in &edges {
        if !seen[e] {
            out.push(e);
        }
    }
    out
}

pub fn link_to_json(link: &LabeledLink) -> Result<LinkJson> {
    let d = &link.diagram;
    if !d.is_closed() {
        return Err(Error::Unsupported("open diagrams have no PD form".into()));
    }
    let id = |e: usize| e as i64 + 1;
    let mut crossings = Vec::new();
    let mut vertices = Vec::new();
    for (x, node) in d.nodes.iter().enumerate() {
        match node.kind {
            NodeKind::Crossing => crossings.push(CrossingJson::Signed {
                pd: [id(node.legs[0]), id(node.legs[1]), id(node.legs[2]), id(node.legs[3])],
                sign: Some(d.crossing_sign(x)),
            }),
            NodeKind::Vertex => vertices.push(node.legs.iter().map(|&e| id(e)).collect()),
        }
    }
    let components = (0..d.comps)
        .map(|c| ComponentJson {
            edges: traversal_order(d, c).into_iter().map(id).collect(),
            label: match link.labels[c] {
                LinkLabel::Label(k) => LabelJson::Int(k),
                LinkLabel::Omega => LabelJson::Name("omega".into()),
            },
            framing: Some(link.framings[c]),
        })
        .collect();
    Ok(LinkJson { version: PD_VERSION, crossings, vertices, components })
}

/// One-line human form: `PD[X[1,2,3,4], ...] labels [..] framings [..]`.
pub fn pretty(link: &LabeledLink) -> String {
    let d = &link.diagram;
    let mut parts = Vec::new();
    for node in &d.nodes {
        let legs: Vec<String> = node.legs.iter().map(|e| (e + 1).to_string()).collect();
        let tag = if node.kind == NodeKind::Crossing { "X" } else { "V" };
        parts.push(format!("{tag}[{}]", legs.join(",")));
    }
    let labels: Vec<String> = link
        .labels
        .iter()
        .map(|l| match l {
            LinkLabel::Label(k) => k.to_string(),
            LinkLabel::Omega => "ω".to_string(),
        })
        .collect();
    let framings: Vec<String> = link.framings.iter().map(|f| f.to_string()).collect();
    format!("PD[{}] labels [{}] framings [{}]", parts.join(", "), labels.join(","), framings.join(","))
}
