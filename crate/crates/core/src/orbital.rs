//! The orbital graph: curve edges as nodes, translations between interacting
//! edges of complementary curves as arcs.
//!
//! Level 0 holds the root edge of `p_n` that crosses the line `y = T`.
//! Level `l >= 1` holds every edge of `q_k` (odd `l`) or `p_k` (even `l`) for
//! `k = 1..=n-l+1`. An arc runs from edge `i` of a curve of order `k` to edge
//! `j` of the complementary curve of order `u < k` placed in the subspace
//! that `tau_u` opens: `q_u` shares the origin of `p_k`, while `p_u` sits at
//! `(2^k - 2^u, A_k - A_u)` relative to `q_k`. Every node is stored in the
//! local frame of its own curve; an arc weight `w = z_j - z_i` is the
//! difference of the two lower vertices after the frame shift.
//!
//! A path carries the local height `y` of the line above the lower end of
//! the current node; crossing an arc maps `y` to `y - Im w`, and the index
//! accumulates `Re w`.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::ndp::{chain_of, tri, CurveKind};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

/// Which nodes feed the destination collector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub enum DestinationPolicy {
    /// Only TRUE nodes whose lower vertex is the origin of a subspace opened
    /// by some `tau_u` (each solution is counted once).
    #[default]
    Canonical,
    /// Every TRUE node except the root.
    AllTrue,
}

/// Vertex table of one curve in its local frame.
#[derive(Clone, Debug)]
pub struct CurveTable<S> {
    pub kind: CurveKind,
    pub k: u32,
    /// Vertex indices, `N_k + 1` entries.
    pub x: Vec<S>,
    /// Vertex sums, non-decreasing.
    pub y: Vec<S>,
    /// Link number of each edge.
    pub link: Vec<u16>,
    /// Occurrence number (1-based) of the edge's link along the chain.
    pub occurrence: Vec<u16>,
}

impl<S: Scalar> CurveTable<S> {
    pub fn edges(&self) -> usize {
        self.y.len() - 1
    }
    pub fn len(&self, i: usize) -> S {
        self.y[i + 1].clone() - self.y[i].clone()
    }
    /// Largest value of the integer set owned by edge `i`.
    fn top(&self, i: usize) -> S {
        if self.y[i + 1] > self.y[i] {
            self.y[i + 1].clone() - S::one()
        } else {
            self.y[i].clone()
        }
    }
    /// Edges whose integer sets meet `[lo, hi]`.
    pub fn edges_meeting(&self, lo: &S, hi: &S) -> std::ops::Range<usize> {
        let e = self.edges();
        let start = partition(e, |j| &self.top(j) < lo);
        let end = partition(e, |j| &self.y[j] <= hi);
        start..end.max(start)
    }
}

fn partition(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0usize, len);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Curve tables of an instance plus the virtual curve used as a multi-edge root.
#[derive(Clone, Debug)]
pub struct Tables<S> {
    pub n: usize,
    /// `A_0..=A_n`.
    pub prefix: Vec<S>,
    /// `2^0..=2^n`.
    pub pow2: Vec<S>,
    pub target: S,
    curves: Vec<CurveTable<S>>,
}

/// Identifier of a curve inside [`Tables`].
pub type CurveId = u16;

impl<S: Scalar> Tables<S> {
    pub fn new(inst: &Instance) -> Result<Self> {
        let conv = |v: &num_bigint::BigUint| {
            S::from_bigint(&BigInt::from(v.clone()))
                .ok_or_else(|| Error::Guard("value exceeds the scalar backend".into()))
        };
        let n = inst.n();
        let prefix = inst.prefix().a.iter().map(conv).collect::<Result<Vec<S>>>()?;
        let pow2 = (0..=n as u32).map(S::pow2).collect();
        let target = conv(inst.target())?;
        let d: Vec<(S, S)> = inst
            .links()
            .d
            .iter()
            .map(|(dx, dy)| Ok((conv(dx)?, conv(dy)?)))
            .collect::<Result<_>>()?;
        let mut curves = Vec::with_capacity(2 * n + 1);
        for k in 1..=n as u32 {
            for kind in [CurveKind::P, CurveKind::Q] {
                let links = chain_of(kind, k).expand();
                let mut x = vec![S::zero()];
                let mut y = vec![S::zero()];
                let mut seen = vec![0u16; k as usize + 1];
                let mut occurrence = Vec::with_capacity(links.len());
                for &j in &links {
                    let (dx, dy) = &d[j as usize - 1];
                    x.push(x.last().unwrap().clone() + dx.clone());
                    y.push(y.last().unwrap().clone() + dy.clone());
                    seen[j as usize] += 1;
                    occurrence.push(seen[j as usize]);
                }
                let link = links.iter().map(|&j| j as u16).collect();
                curves.push(CurveTable { kind, k, x, y, link, occurrence });
            }
        }
        curves.push(CurveTable {
            kind: CurveKind::P,
            k: 0,
            x: vec![S::zero(), S::zero()],
            y: vec![target.clone(), target.clone()],
            link: vec![0],
            occurrence: vec![0],
        });
        Ok(Tables { n, prefix, pow2, target, curves })
    }

    pub fn id(&self, kind: CurveKind, k: u32) -> CurveId {
        (2 * (k - 1) + if kind == CurveKind::Q { 1 } else { 0 }) as CurveId
    }
    /// The virtual single-point curve at `(0, T)` that roots case-2 graphs.
    pub fn virtual_id(&self) -> CurveId {
        (2 * self.n) as CurveId
    }
    pub fn is_virtual(&self, c: CurveId) -> bool {
        c as usize == 2 * self.n
    }
    pub fn curve(&self, c: CurveId) -> &CurveTable<S> {
        &self.curves[c as usize]
    }

    /// Frame shift of a child curve relative to its parent.
    pub fn shift(&self, parent: CurveId, child: CurveId) -> (S, S) {
        let p = self.curve(parent);
        if p.kind == CurveKind::Q && !self.is_virtual(parent) {
            let (k, u) = (p.k as usize, self.curve(child).k as usize);
            (
                self.pow2[k].clone() - self.pow2[u].clone(),
                self.prefix[k].clone() - self.prefix[u].clone(),
            )
        } else {
            (S::zero(), S::zero())
        }
    }

    /// Orders `u` of child curves reachable from edge `i` of `c`, given the
    /// congruence rule (edge `i` must lie on the sub-curve of order `u`) and
    /// the canonical rule (a zero-length edge only continues from the last
    /// edge of that sub-curve).
    pub fn child_orders(&self, c: CurveId, i: usize) -> Option<RangeInclusive<u32>> {
        if self.is_virtual(c) {
            return None;
        }
        let cv = self.curve(c);
        let k = cv.k;
        let umax = if cv.kind == CurveKind::P && k as usize == self.n { k } else { k - 1 };
        if umax == 0 {
            return None;
        }
        let flat = cv.y[i] == cv.y[i + 1];
        let i = i as u64;
        let nk = tri(k as u64);
        let r = match (cv.kind, flat) {
            (CurveKind::P, false) => {
                let lo = (1..=umax).find(|&u| tri(u as u64) > i)?;
                lo..=umax
            }
            (CurveKind::P, true) => {
                let u = (1..=umax).find(|&u| tri(u as u64) == i + 1)?;
                u..=u
            }
            (CurveKind::Q, false) => {
                let lo = (1..=umax).find(|&u| nk - tri(u as u64) <= i)?;
                lo..=umax
            }
            (CurveKind::Q, true) => {
                if i + 1 != nk {
                    return None;
                }
                1..=umax
            }
        };
        Some(r)
    }

    /// True when edge `i` of `c` starts at the origin of a subspace opened by
    /// `tau_u` for some `u < k`, i.e. its lower vertex is where a zero path may end.
    pub fn is_terminal(&self, c: CurveId, i: usize) -> bool {
        if self.is_virtual(c) {
            return false;
        }
        let cv = self.curve(c);
        let (k, i) = (cv.k as u64, i as u64);
        (1..k).any(|u| match cv.kind {
            CurveKind::P => i == tri(u),
            CurveKind::Q => i == tri(k) - tri(u),
        })
    }

    /// Number of edges over all curves of orders `1..=k`, per type.
    pub fn curve_of(&self, c: CurveId) -> (CurveKind, u32) {
        let cv = self.curve(c);
        (cv.kind, cv.k)
    }
}

/// Whether the integer sets `{0..len_a-1}` (or `{0}`) and
/// `{d..d+len_b-1}` (or `{d}`) meet.
pub fn sets_meet<S: Scalar>(len_a: &S, d: &S, len_b: &S) -> bool {
    let a_hi = if len_a.is_positive() { len_a.clone() - S::one() } else { S::zero() };
    let b_hi = if len_b.is_positive() { d.clone() + len_b.clone() - S::one() } else { d.clone() };
    d <= &a_hi && !b_hi.is_negative()
}

/// Interaction of two half-open y-ranges `[lo1, hi1)` and `[lo2, hi2)`.
/// Each range owns the integers `lo..hi-1`, or just `lo` when it is empty.
/// Returns whether these sets meet, and the signed interaction length
/// `min(hi1, hi2) - max(lo1, lo2)`.
pub fn interacts<S: Scalar>(lo1: &S, hi1: &S, lo2: &S, hi2: &S) -> (bool, S) {
    let len1 = hi1.clone() - lo1.clone();
    let len2 = hi2.clone() - lo2.clone();
    let d = lo2.clone() - lo1.clone();
    let meet = sets_meet(&len1, &d, &len2);
    let overlap = hi1.clone().min(hi2.clone()) - lo1.clone().max(lo2.clone());
    (meet, overlap)
}

/// An arc between edge `i` of `p_k` and edge `j` of `q_k`, both at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairArc {
    pub i: usize,
    pub j: usize,
    pub dx: BigInt,
    pub dy: BigInt,
}

/// All interacting edge pairs between `p_k` and `q_k`.
pub fn pair_interactions(inst: &Instance, k: u32) -> Result<Vec<PairArc>> {
    if k == 0 || k as usize > inst.n() {
        return Err(Error::OutOfRange(format!("curve order {k}")));
    }
    let t: Tables<BigInt> = Tables::new(inst)?;
    let (p, q) = (t.curve(t.id(CurveKind::P, k)), t.curve(t.id(CurveKind::Q, k)));
    let mut out = Vec::new();
    for i in 0..p.edges() {
        let hi = p.top(i);
        for j in q.edges_meeting(&p.y[i], &hi) {
            out.push(PairArc {
                i,
                j,
                dx: &q.x[j] - &p.x[i],
                dy: &q.y[j] - &p.y[i],
            });
        }
    }
    Ok(out)
}

/// Collated adjacency of every edge of `kind_k`: the union, over the orders
/// `u <= k` on whose sub-curve the edge lies, of the edges of the
/// complementary curve of order `u` it interacts with. Entries are `(u, j)`.
pub fn collate(inst: &Instance, kind: CurveKind, k: u32) -> Result<Vec<Vec<(u32, usize)>>> {
    if k == 0 || k as usize > inst.n() {
        return Err(Error::OutOfRange(format!("curve order {k}")));
    }
    let t: Tables<BigInt> = Tables::new(inst)?;
    let c = t.id(kind, k);
    let cv = t.curve(c);
    let nk = tri(k as u64) as usize;
    let mut out = vec![Vec::new(); cv.edges()];
    for u in 1..=k {
        let nu = tri(u as u64) as usize;
        let child = t.id(kind.flip(), u);
        let (_, sy) = match kind {
            CurveKind::P => (BigInt::zero(), BigInt::zero()),
            CurveKind::Q => (BigInt::zero(), &t.prefix[k as usize] - &t.prefix[u as usize]),
        };
        for (i, list) in out.iter_mut().enumerate() {
            let congruent = match kind {
                CurveKind::P => i < nu,
                CurveKind::Q => i >= nk - nu,
            };
            if !congruent {
                continue;
            }
            let lo = &cv.y[i] - &sy;
            let hi = cv.top(i) - &sy;
            for j in t.curve(child).edges_meeting(&lo, &hi) {
                list.push((u, j));
            }
        }
    }
    Ok(out)
}

/// A node of the layered graph: a whole edge, or after refinement a
/// sub-interval `[off, off + len)` of one.
#[derive(Clone, Debug)]
pub struct Node<S> {
    pub level: u16,
    pub curve: CurveId,
    pub edge: u32,
    /// Offset of the lower end within the edge.
    pub off: S,
    pub len: S,
    /// Lower end `y` in the curve frame.
    pub ylo: S,
    /// The lower end is a power-set point.
    pub truth: bool,
    /// The lower end is a subspace origin (see [`Tables::is_terminal`]).
    pub terminal: bool,
}

/// The root of an orbital graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RootSpec<S> {
    /// A single `p_n` edge with `y_lo <= T < y_hi`; `y0 = T - y_lo`.
    Single { edge: usize, y0: S },
    /// Several `p_n` edges meet `y = T` (flat edges on the line and the edge
    /// after them), all with `y0 = 0`, collected under a virtual root.
    Multi { edges: Vec<usize> },
    /// `T = A_n`: the line touches only the top vertex.
    Top { edge: usize },
}

/// Locates the `p_n` edge(s) meeting `y = T` by binary search.
pub fn find_root<S: Scalar>(t: &Tables<S>) -> Result<RootSpec<S>> {
    let pn = t.curve(t.id(CurveKind::P, t.n as u32));
    let total = &t.prefix[t.n];
    if !t.target.is_positive() || &t.target > total {
        return Err(Error::OutOfRange("target".into()));
    }
    if &t.target == total {
        return Ok(RootSpec::Top { edge: pn.edges() - 1 });
    }
    let r = pn.edges_meeting(&t.target, &t.target);
    let edges: Vec<usize> = r.collect();
    match edges.len() {
        0 => Err(Error::Internal("no p_n edge meets the target line".into())),
        1 => Ok(RootSpec::Single { edge: edges[0], y0: t.target.clone() - pn.y[edges[0]].clone() }),
        _ => Ok(RootSpec::Multi { edges }),
    }
}

/// 5-tuple identity of an edge node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EdgeId {
    pub level: u16,
    pub kind: CurveKind,
    /// Link number of the edge.
    pub link: u16,
    /// Curve order.
    pub k: u32,
    /// Occurrence of the link along the chain, 1-based.
    pub instance: u16,
}

/// A layered DAG over edge nodes.
#[derive(Clone, Debug)]
pub struct LayeredDag<S> {
    pub tables: Arc<Tables<S>>,
    /// Level-major order, which is a topological order.
    pub nodes: Vec<Node<S>>,
    /// `(src, dst)` pairs sorted by `src`, with `src < dst`.
    pub arcs: Vec<(u32, u32)>,
    pub root: u32,
    pub y0: S,
    /// The target equals `A_n`.
    pub top: bool,
    pub policy: DestinationPolicy,
    /// Node id of an attached destination collector.
    pub destination: Option<u32>,
}

impl<S: Scalar> LayeredDag<S> {
    /// Arc weight `(dx, dy)` from the lower end of `src` to the lower end of `dst`.
    pub fn weight(&self, src: u32, dst: u32) -> (S, S) {
        let (a, b) = (&self.nodes[src as usize], &self.nodes[dst as usize]);
        let t = &self.tables;
        let (sx, sy) = t.shift(a.curve, b.curve);
        let dy = b.ylo.clone() + sy - a.ylo.clone();
        let dx = t.curve(b.curve).x[b.edge as usize].clone() + sx
            - t.curve(a.curve).x[a.edge as usize].clone();
        (dx, dy)
    }

    /// `Im w` only.
    pub fn dy(&self, src: u32, dst: u32) -> S {
        let (a, b) = (&self.nodes[src as usize], &self.nodes[dst as usize]);
        let (_, sy) = self.tables.shift(a.curve, b.curve);
        b.ylo.clone() + sy - a.ylo.clone()
    }

    /// Whether node `v` feeds the destination under the graph's policy.
    pub fn is_destination(&self, v: u32) -> bool {
        let nd = &self.nodes[v as usize];
        if Some(v) == self.destination || !nd.truth {
            return false;
        }
        match self.policy {
            DestinationPolicy::Canonical => nd.terminal,
            DestinationPolicy::AllTrue => v != self.root,
        }
    }

    /// Global index of the root's lower vertex.
    pub fn x0(&self) -> S {
        let r = &self.nodes[self.root as usize];
        self.tables.curve(r.curve).x[r.edge as usize].clone()
    }

    pub fn edge_id(&self, v: u32) -> EdgeId {
        let nd = &self.nodes[v as usize];
        let c = self.tables.curve(nd.curve);
        EdgeId {
            level: nd.level,
            kind: c.kind,
            link: c.link[nd.edge as usize],
            k: c.k,
            instance: c.occurrence[nd.edge as usize],
        }
    }

    /// Levels present, `max level + 1`.
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|v| v.level as usize + 1).max().unwrap_or(0)
    }

    /// Out-adjacency offsets into `arcs`.
    pub fn csr(&self) -> Vec<u32> {
        let mut off = vec![0u32; self.nodes.len() + 1];
        for &(s, _) in &self.arcs {
            off[s as usize + 1] += 1;
        }
        for i in 0..self.nodes.len() {
            off[i + 1] += off[i];
        }
        off
    }

    /// JSON lines for external inspection: nodes (5-tuple, local lower and
    /// upper point, truth) then arcs with weights.
    pub fn dump_lines(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.nodes.len() + self.arcs.len());
        for (v, nd) in self.nodes.iter().enumerate() {
            if Some(v as u32) == self.destination {
                out.push(serde_json::json!({"node": v, "destination": true}).to_string());
                continue;
            }
            let c = self.tables.curve(nd.curve);
            let x = c.x[nd.edge as usize].to_string();
            let id = self.edge_id(v as u32);
            out.push(
                serde_json::json!({
                    "node": v,
                    "id": [id.level, id.kind.to_string(), id.link, id.k, id.instance],
                    "lo": [x, nd.ylo.to_string()],
                    "hi": [x, (nd.ylo.clone() + nd.len.clone()).to_string()],
                    "truth": nd.truth,
                    "terminal": nd.terminal,
                })
                .to_string(),
            );
        }
        for &(s, d) in &self.arcs {
            let (dx, dy) = if Some(d) == self.destination {
                (S::zero(), S::zero())
            } else {
                self.weight(s, d)
            };
            out.push(
                serde_json::json!({"src": s, "dst": d, "dx": dx.to_string(), "dy": dy.to_string()})
                    .to_string(),
            );
        }
        out
    }
}

fn whole_edge<S: Scalar>(t: &Tables<S>, level: u16, c: CurveId, i: usize) -> Node<S> {
    let cv = t.curve(c);
    Node {
        level,
        curve: c,
        edge: i as u32,
        off: S::zero(),
        len: cv.len(i),
        ylo: cv.y[i].clone(),
        truth: true,
        terminal: t.is_terminal(c, i),
    }
}

/// Root nodes for a root spec: the node list (virtual root first when several edges meet the line)
/// and the root's starting height.
fn root_nodes<S: Scalar>(t: &Tables<S>, spec: &RootSpec<S>) -> (Vec<Node<S>>, S) {
    let pn = t.id(CurveKind::P, t.n as u32);
    match spec {
        RootSpec::Single { edge, y0 } => (vec![whole_edge(t, 0, pn, *edge)], y0.clone()),
        RootSpec::Top { edge } => {
            let nd = whole_edge(t, 0, pn, *edge);
            let y0 = nd.len.clone();
            (vec![nd], y0)
        }
        RootSpec::Multi { edges } => {
            let mut v = vec![whole_edge(t, 0, t.virtual_id(), 0)];
            v.extend(edges.iter().map(|&e| whole_edge(t, 1, pn, e)));
            (v, S::zero())
        }
    }
}

/// Builds the full orbital graph `G0` of an instance: every edge of every
/// curve at every level, and every arc allowed by the congruence, canonical
/// and interaction rules.
pub fn build_g0<S: Scalar>(inst: &Instance) -> Result<LayeredDag<S>> {
    build_g0_with(Arc::new(Tables::new(inst)?), DestinationPolicy::Canonical)
}

pub fn build_g0_with<S: Scalar>(t: Arc<Tables<S>>, policy: DestinationPolicy) -> Result<LayeredDag<S>> {
    let n = t.n;
    let spec = find_root(&t)?;
    let (mut nodes, y0) = root_nodes(&t, &spec);
    let base = if matches!(spec, RootSpec::Multi { .. }) { 1u16 } else { 0 };
    let mut arcs = Vec::new();
    if let RootSpec::Multi { edges } = &spec {
        for i in 0..edges.len() {
            arcs.push((0u32, i as u32 + 1));
        }
    }
    // index[(level, curve)] = first node id of that curve's edges
    let mut index: HashMap<(u16, CurveId), u32> = HashMap::new();
    for l in 1..=n as u16 {
        let kind = if l % 2 == 1 { CurveKind::Q } else { CurveKind::P };
        for k in 1..=(n as u32 + 1 - l as u32) {
            let c = t.id(kind, k);
            index.insert((l + base, c), nodes.len() as u32);
            for i in 0..t.curve(c).edges() {
                nodes.push(whole_edge(&t, l + base, c, i));
            }
        }
    }
    for v in 0..nodes.len() {
        let (level, c, i) = (nodes[v].level, nodes[v].curve, nodes[v].edge as usize);
        let Some(us) = t.child_orders(c, i) else { continue };
        let cv = t.curve(c);
        let hi = cv.top(i);
        for u in us {
            let child = t.id(cv.kind.flip(), u);
            let Some(&start) = index.get(&(level + 1, child)) else { continue };
            let (_, sy) = t.shift(c, child);
            let lo = cv.y[i].clone() - sy.clone();
            let hi = hi.clone() - sy;
            for j in t.curve(child).edges_meeting(&lo, &hi) {
                arcs.push((v as u32, start + j as u32));
            }
        }
    }
    arcs.sort_unstable();
    Ok(LayeredDag {
        tables: t,
        nodes,
        arcs,
        root: 0,
        y0,
        top: matches!(spec, RootSpec::Top { .. }),
        policy,
        destination: None,
    })
}

/// `1 + n(n+1)(n+2)(n+3)/24`, the node count of `G0` with a single root edge.
pub fn g0_node_formula(n: u64) -> u64 {
    1 + n * (n + 1) * (n + 2) * (n + 3) / 24
}

/// Adds the destination collector `e_inf` and zero-weight arcs into it from
/// every node the policy selects. Returns the number of arcs added.
pub fn attach_destination<S: Scalar>(g: &mut LayeredDag<S>) -> usize {
    if g.nodes.is_empty() || g.destination.is_some() {
        return 0;
    }
    let srcs: Vec<u32> = (0..g.nodes.len() as u32).filter(|&v| g.is_destination(v)).collect();
    let id = g.nodes.len() as u32;
    let level = g.depth() as u16;
    g.nodes.push(Node {
        level,
        curve: g.tables.virtual_id(),
        edge: 0,
        off: S::zero(),
        len: S::zero(),
        ylo: S::zero(),
        truth: false,
        terminal: false,
    });
    g.destination = Some(id);
    g.arcs.extend(srcs.iter().map(|&s| (s, id)));
    g.arcs.sort_unstable();
    srcs.len()
}

/// Builds the part of `G0` that can carry a valid path from the root.
///
/// Levels are expanded in order. Each node keeps the hull of the local
/// heights that reach it, clipped to its own extent, and an arc is created
/// only if that hull, carried across the arc, meets the child's extent.
/// Children that can neither end a zero path nor continue are dropped.
pub fn build_reachable<S: Scalar>(t: Arc<Tables<S>>, policy: DestinationPolicy) -> Result<LayeredDag<S>> {
    let spec = find_root(&t)?;
    let (roots, y0) = root_nodes(&t, &spec);
    let top = matches!(spec, RootSpec::Top { .. });
    let mut nodes: Vec<Node<S>> = Vec::new();
    let mut arcs: Vec<(u32, u32)> = Vec::new();
    // current level: (node id, flo, fhi)
    let mut frontier: Vec<(u32, S, S)> = Vec::new();
    if top {
        nodes.extend(roots);
        return Ok(LayeredDag { tables: t, nodes, arcs, root: 0, y0, top, policy, destination: None });
    }
    match &spec {
        RootSpec::Multi { .. } => {
            nodes.extend(roots);
            for v in 1..nodes.len() as u32 {
                arcs.push((0, v));
                frontier.push((v, S::zero(), S::zero()));
            }
        }
        _ => {
            nodes.extend(roots);
            frontier.push((0, y0.clone(), y0.clone()));
        }
    }
    let window_hi = |len: &S| if len.is_positive() { len.clone() - S::one() } else { S::zero() };
    while !frontier.is_empty() {
        let mut next: Vec<(Node<S>, S, S)> = Vec::new();
        let mut slot: HashMap<(CurveId, u32), u32> = HashMap::new();
        let mut level_arcs: Vec<(u32, u32)> = Vec::new();
        for (v, flo, fhi) in &frontier {
            let nd = &nodes[*v as usize];
            let Some(us) = t.child_orders(nd.curve, nd.edge as usize) else { continue };
            let kind = t.curve(nd.curve).kind;
            for u in us {
                let child = t.id(kind.flip(), u);
                let (_, sy) = t.shift(nd.curve, child);
                let lo = nd.ylo.clone() + flo.clone() - sy.clone();
                let hi = nd.ylo.clone() + fhi.clone() - sy;
                let cc = t.curve(child);
                for j in cc.edges_meeting(&lo, &hi) {
                    let yj = cc.y[j].clone();
                    let top_j = window_hi(&cc.len(j));
                    let nlo = (lo.clone() - yj.clone()).max(S::zero());
                    let nhi = (hi.clone() - yj).min(top_j);
                    let s = *slot.entry((child, j as u32)).or_insert_with(|| {
                        next.push((whole_edge(&t, nd.level + 1, child, j), nlo.clone(), nhi.clone()));
                        next.len() as u32 - 1
                    });
                    let e = &mut next[s as usize];
                    if nlo < e.1 {
                        e.1 = nlo;
                    }
                    if nhi > e.2 {
                        e.2 = nhi;
                    }
                    level_arcs.push((*v, s));
                }
            }
        }
        let base = nodes.len() as u32;
        let mut remap = vec![u32::MAX; next.len()];
        let mut new_frontier = Vec::new();
        for (s, (nd, flo, fhi)) in next.into_iter().enumerate() {
            let ends = match policy {
                DestinationPolicy::Canonical => nd.terminal,
                DestinationPolicy::AllTrue => true,
            } && !flo.is_positive();
            let continues = t.child_orders(nd.curve, nd.edge as usize).is_some();
            if ends || continues {
                remap[s] = nodes.len() as u32;
                if continues {
                    new_frontier.push((nodes.len() as u32, flo, fhi));
                }
                nodes.push(nd);
            }
        }
        debug_assert!(nodes.len() as u32 >= base);
        arcs.extend(
            level_arcs
                .into_iter()
                .filter(|&(_, s)| remap[s as usize] != u32::MAX)
                .map(|(v, s)| (v, remap[s as usize])),
        );
        frontier = new_frontier;
    }
    arcs.sort_unstable();
    arcs.dedup();
    Ok(LayeredDag { tables: t, nodes, arcs, root: 0, y0, top, policy, destination: None })
}
