//! Iterative refine/filter on the orbital graph.
//!
//! Starting from the reachable part of `G0`, the graph is filtered once and
//! then refined and filtered `m` times. Refinement halves every node longer
//! than 1; filtering deletes nodes and arcs that cannot lie on a zero path,
//! using shortest and longest path sums from the root and to the
//! destinations. Once every node has length at most 1, every surviving
//! root-to-destination path is a zero path and the path count is the number
//! of solutions.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::orbital::{build_reachable, g0_node_formula, sets_meet, DestinationPolicy, LayeredDag, Node, Tables};
use crate::scalar::Scalar;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::sync::Arc;
use std::time::Instant;

/// Closed integer interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Interval<S> {
    pub fn point(v: S) -> Self {
        Interval { lo: v.clone(), hi: v }
    }
    fn widen(slot: &mut Option<Self>, lo: S, hi: S) {
        match slot {
            None => *slot = Some(Interval { lo, hi }),
            Some(iv) => {
                if lo < iv.lo {
                    iv.lo = lo;
                }
                if hi > iv.hi {
                    iv.hi = hi;
                }
            }
        }
    }
    fn meet(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }
    fn shift(&self, d: &S) -> Self {
        Interval { lo: self.lo.clone() + d.clone(), hi: self.hi.clone() + d.clone() }
    }
}

/// Shortest and longest path sums per node. `None` marks a node the search
/// never reached: shortest `+inf`, longest `-inf`.
#[derive(Clone, Debug)]
pub struct PathBounds<S> {
    pub bounds: Vec<Option<Interval<S>>>,
}

/// Extreme path values over a DAG whose arcs `(src, dst, w)` satisfy
/// `src < dst`. Forward: start at `start` with `y0`, each arc maps `y` to
/// `y - w`. Reverse: start with `0` at every node in `sinks`, each arc maps
/// the child's value `y` to `y + w` at the parent.
pub fn sssp_extremes<S: Scalar>(
    nodes: usize,
    arcs: &[(u32, u32, S)],
    forward: bool,
    start: &[(u32, S)],
) -> PathBounds<S> {
    let mut b: Vec<Option<Interval<S>>> = vec![None; nodes];
    for (v, y) in start {
        Interval::widen(&mut b[*v as usize], y.clone(), y.clone());
    }
    if forward {
        let mut order: Vec<usize> = (0..arcs.len()).collect();
        order.sort_by_key(|&i| arcs[i].0);
        for i in order {
            let (s, d, w) = &arcs[i];
            if let Some(iv) = b[*s as usize].clone() {
                Interval::widen(&mut b[*d as usize], iv.lo - w.clone(), iv.hi - w.clone());
            }
        }
    } else {
        let mut order: Vec<usize> = (0..arcs.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(arcs[i].1));
        for i in order {
            let (s, d, w) = &arcs[i];
            if let Some(iv) = b[*d as usize].clone() {
                Interval::widen(&mut b[*s as usize], iv.lo + w.clone(), iv.hi + w.clone());
            }
        }
    }
    PathBounds { bounds: b }
}

/// Kahn order of a DAG given as `(src, dst)` arcs; fails on a cycle.
pub fn topo_order(nodes: usize, arcs: &[(u32, u32)]) -> Result<Vec<u32>> {
    let mut indeg = vec![0u32; nodes];
    let mut adj = vec![Vec::new(); nodes];
    for &(s, d) in arcs {
        indeg[d as usize] += 1;
        adj[s as usize].push(d);
    }
    let mut queue: std::collections::VecDeque<u32> =
        (0..nodes as u32).filter(|&v| indeg[v as usize] == 0).collect();
    let mut out = Vec::with_capacity(nodes);
    while let Some(v) = queue.pop_front() {
        out.push(v);
        for &d in &adj[v as usize] {
            indeg[d as usize] -= 1;
            if indeg[d as usize] == 0 {
                queue.push_back(d);
            }
        }
    }
    if out.len() != nodes {
        return Err(Error::Internal("cycle in layered graph".into()));
    }
    Ok(out)
}

fn window<S: Scalar>(len: &S) -> Interval<S> {
    let hi = if len.is_positive() { len.clone() - S::one() } else { S::zero() };
    Interval { lo: S::zero(), hi }
}

/// Splits every node longer than 1 at its floored midpoint. The lower half
/// keeps the truth flag, the upper half is FALSE. Only child arcs whose
/// integer sets still meet are kept; the root keeps the half holding `y0`;
/// nodes no longer reachable from the root are dropped.
pub fn refine<S: Scalar>(g: &mut LayeredDag<S>) {
    if g.nodes.is_empty() {
        return;
    }
    let one = S::one();
    let mut nodes: Vec<Node<S>> = Vec::with_capacity(g.nodes.len() * 2);
    let mut first = vec![0u32; g.nodes.len()];
    let mut count = vec![0u8; g.nodes.len()];
    let mut y0 = g.y0.clone();
    for (v, nd) in g.nodes.iter().enumerate() {
        first[v] = nodes.len() as u32;
        if nd.len > one {
            let h = nd.len.half();
            let lower = Node { len: h.clone(), ..nd.clone() };
            let upper = Node {
                off: nd.off.clone() + h.clone(),
                ylo: nd.ylo.clone() + h.clone(),
                len: nd.len.clone() - h.clone(),
                truth: false,
                terminal: false,
                ..nd.clone()
            };
            if v as u32 == g.root {
                if y0 < h {
                    nodes.push(lower);
                } else {
                    y0 = y0 - h;
                    nodes.push(upper);
                }
                count[v] = 1;
            } else {
                nodes.push(lower);
                nodes.push(upper);
                count[v] = 2;
            }
        } else {
            nodes.push(nd.clone());
            count[v] = 1;
        }
    }
    let csr = g.csr();
    let mut arcs = Vec::with_capacity(g.arcs.len() * 2);
    for s in 0..g.nodes.len() {
        for cs in first[s]..first[s] + count[s] as u32 {
            for &(_, d) in &g.arcs[csr[s] as usize..csr[s + 1] as usize] {
                let d = d as usize;
                for cd in first[d]..first[d] + count[d] as u32 {
                    let (a, b) = (&nodes[cs as usize], &nodes[cd as usize]);
                    let (_, sy) = g.tables.shift(a.curve, b.curve);
                    let dy = b.ylo.clone() + sy - a.ylo.clone();
                    if sets_meet(&a.len, &dy, &b.len) {
                        arcs.push((cs, cd));
                    }
                }
            }
        }
    }
    g.root = first[g.root as usize];
    g.y0 = y0;
    g.nodes = nodes;
    g.arcs = arcs;
    let mut reach = vec![false; g.nodes.len()];
    reach[g.root as usize] = true;
    for &(s, d) in &g.arcs {
        if reach[s as usize] {
            reach[d as usize] = true;
        }
    }
    compact(g, &reach, None);
}

/// Keeps nodes with `keep[v]` and arcs with both ends kept (and `arc_keep`
/// when given), renumbering in order.
fn compact<S: Scalar>(g: &mut LayeredDag<S>, keep: &[bool], arc_keep: Option<&[bool]>) {
    let mut remap = vec![u32::MAX; g.nodes.len()];
    let mut next = 0u32;
    for (v, &k) in keep.iter().enumerate() {
        if k {
            remap[v] = next;
            next += 1;
        }
    }
    let old = std::mem::take(&mut g.nodes);
    g.nodes = old.into_iter().zip(keep).filter(|(_, &k)| k).map(|(n, _)| n).collect();
    let arcs = std::mem::take(&mut g.arcs);
    g.arcs = arcs
        .into_iter()
        .enumerate()
        .filter(|(i, (s, d))| {
            remap[*s as usize] != u32::MAX
                && remap[*d as usize] != u32::MAX
                && arc_keep.map_or(true, |a| a[*i])
        })
        .map(|(_, (s, d))| (remap[s as usize], remap[d as usize]))
        .collect();
    g.root = remap.get(g.root as usize).copied().unwrap_or(u32::MAX);
    if g.root == u32::MAX {
        g.nodes.clear();
        g.arcs.clear();
        g.root = 0;
    }
}

/// Outcome of one filter call.
#[derive(Clone, Debug, Default, Serialize)]
pub struct FilterStats {
    pub sweeps: usize,
    pub nodes_removed: usize,
    pub arcs_removed: usize,
    pub relabeled: usize,
    /// The sweep cap was reached while deletions were still happening.
    pub cap_hit: bool,
    /// Every surviving node is reached at a single height, so only zero
    /// paths remain.
    pub settled: bool,
}

/// Deletes nodes and arcs that cannot carry a zero path, sweeping until a
/// sweep changes nothing or `max_sweeps` is reached. Each sweep restricts to
/// nodes reachable from the root and reaching a destination, computes
/// forward and reverse path bounds, deletes nodes whose window
/// `[0, len)` misses either bound, turns TRUE nodes with a positive shortest
/// bound FALSE, and deletes arcs along which the bound intervals cannot match.
pub fn filter<S: Scalar>(g: &mut LayeredDag<S>, max_sweeps: usize) -> FilterStats {
    let mut st = FilterStats::default();
    while !g.nodes.is_empty() {
        if st.sweeps == max_sweeps {
            st.cap_hit = true;
            break;
        }
        st.sweeps += 1;
        let n = g.nodes.len();
        let dys: Vec<S> = g.arcs.iter().map(|&(s, d)| g.dy(s, d)).collect();
        let mut fwd: Vec<Option<Interval<S>>> = vec![None; n];
        fwd[g.root as usize] = Some(Interval::point(g.y0.clone()));
        for (i, &(s, d)) in g.arcs.iter().enumerate() {
            if let Some(iv) = &fwd[s as usize] {
                let (lo, hi) = (iv.lo.clone() - dys[i].clone(), iv.hi.clone() - dys[i].clone());
                Interval::widen(&mut fwd[d as usize], lo, hi);
            }
        }
        let mut rev: Vec<Option<Interval<S>>> =
            (0..n as u32).map(|v| g.is_destination(v).then(|| Interval::point(S::zero()))).collect();
        for (i, &(s, d)) in g.arcs.iter().enumerate().rev() {
            if let Some(iv) = rev[d as usize].clone() {
                Interval::widen(&mut rev[s as usize], iv.lo + dys[i].clone(), iv.hi + dys[i].clone());
            }
        }
        let mut keep = vec![false; n];
        let mut fw: Vec<Option<Interval<S>>> = vec![None; n];
        let mut rw: Vec<Option<Interval<S>>> = vec![None; n];
        let mut changed = false;
        for v in 0..n {
            let (Some(f), Some(r)) = (&fwd[v], &rev[v]) else { continue };
            let w = window(&g.nodes[v].len);
            let (Some(wf), Some(wr)) = (w.meet(f), w.meet(r)) else { continue };
            if wf.meet(&wr).is_none() {
                continue;
            }
            keep[v] = true;
            fw[v] = Some(wf);
            rw[v] = Some(wr);
            if g.nodes[v].truth && f.lo.is_positive() {
                g.nodes[v].truth = false;
                st.relabeled += 1;
                changed = true;
            }
        }
        if !keep[g.root as usize] {
            st.nodes_removed += n;
            st.arcs_removed += g.arcs.len();
            g.nodes.clear();
            g.arcs.clear();
            break;
        }
        let mut arc_keep = vec![true; g.arcs.len()];
        let mut arcs_gone = 0usize;
        for (i, &(s, d)) in g.arcs.iter().enumerate() {
            let (s, d) = (s as usize, d as usize);
            let ok = match (&fw[s], &fw[d], &rw[s], &rw[d]) {
                (Some(fs), Some(fd), Some(rs), Some(rd)) => {
                    fs.shift(&-dys[i].clone()).meet(fd).is_some() && rd.shift(&dys[i]).meet(rs).is_some()
                }
                _ => false,
            };
            if !ok {
                arc_keep[i] = false;
                arcs_gone += 1;
            }
        }
        let nodes_gone = keep.iter().filter(|&&k| !k).count();
        if nodes_gone > 0 || arcs_gone > 0 {
            changed = true;
            st.nodes_removed += nodes_gone;
            st.arcs_removed += arcs_gone;
            compact(g, &keep, Some(&arc_keep));
        }
        if !changed {
            st.settled = fw.iter().flatten().all(|iv| iv.lo == iv.hi);
            break;
        }
    }
    st
}

/// One row of iteration metrics. Iteration `k >= 1` is measured right after
/// the `k`-th refinement, before filtering; iteration 0 is the initial build.
#[derive(Clone, Debug, Serialize)]
pub struct MetricRow {
    pub iter: usize,
    pub nodes: usize,
    pub arcs: usize,
    pub eta_nodes: f64,
    pub eta_arcs: f64,
    /// Sizes after the filter that follows.
    pub filtered_nodes: usize,
    pub filtered_arcs: usize,
    pub sweeps: usize,
    pub cap_hit: bool,
    /// Only zero paths remain after the filter.
    pub settled: bool,
}

/// Per-iteration sizes and growth factors. Node growth is relative to the
/// `G0` node formula, arc growth to the arcs of the reachable build.
#[derive(Clone, Debug, Serialize)]
pub struct IterationMetrics {
    pub v0: u64,
    pub e0: u64,
    pub rows: Vec<MetricRow>,
    /// First iteration with the largest node count.
    pub k_peak: usize,
    pub eta_peak: f64,
    /// Number of refine/filter rounds scheduled.
    pub m: u64,
}

impl IterationMetrics {
    fn finish(&mut self) {
        let mut best = (0usize, f64::MIN);
        for r in &self.rows {
            if r.eta_nodes > best.1 {
                best = (r.iter, r.eta_nodes);
            }
        }
        self.k_peak = best.0;
        self.eta_peak = best.1.max(0.0);
    }

    /// CSV with header `iter,nodes,arcs,eta_nodes,eta_arcs`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("iter,nodes,arcs,eta_nodes,eta_arcs\n");
        for r in &self.rows {
            s += &format!("{},{},{},{:.6},{:.6}\n", r.iter, r.nodes, r.arcs, r.eta_nodes, r.eta_arcs);
        }
        s
    }

    /// First iteration after which only zero paths remain.
    pub fn settled_at(&self) -> Option<usize> {
        self.rows.iter().find(|r| r.settled).map(|r| r.iter)
    }

    /// Node counts never increase from `k_peak` until only zero paths remain.
    pub fn monotone_after_peak(&self) -> bool {
        let end = self.settled_at().unwrap_or(usize::MAX);
        let tail: Vec<usize> =
            self.rows.iter().filter(|r| r.iter >= self.k_peak && r.iter <= end).map(|r| r.nodes).collect();
        tail.windows(2).all(|w| w[1] <= w[0])
    }
}

/// The final graph and its path counters.
#[derive(Clone, Debug)]
pub struct SolutionGraph<S> {
    /// Final graph, `None` when filtering emptied it.
    pub graph: Option<LayeredDag<S>>,
    /// Root-path counts per node.
    pub xi: Vec<BigUint>,
    pub count: BigUint,
}

#[derive(Clone, Debug)]
pub struct RunResult<S> {
    pub solution: SolutionGraph<S>,
    pub metrics: IterationMetrics,
}

/// Options for [`ihm_run`] and [`solve`].
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub policy: DestinationPolicy,
    /// Maximum number of indices to extract.
    pub indices_cap: usize,
    pub count_only: bool,
    /// Sweep cap per filter call; `None` means `n`.
    pub max_sweeps: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { policy: DestinationPolicy::Canonical, indices_cap: 1_000_000, count_only: false, max_sweeps: None }
    }
}

fn row<S: Scalar>(g: &LayeredDag<S>, iter: usize, v0: u64, e0: u64, before: (usize, usize), st: &FilterStats) -> MetricRow {
    MetricRow {
        iter,
        nodes: before.0,
        arcs: before.1,
        eta_nodes: before.0 as f64 / v0 as f64,
        eta_arcs: if e0 == 0 { 0.0 } else { before.1 as f64 / e0 as f64 },
        filtered_nodes: g.nodes.len(),
        filtered_arcs: g.arcs.len(),
        sweeps: st.sweeps,
        cap_hit: st.cap_hit,
        settled: st.settled,
    }
}

/// Filter once, then `m` rounds of refine and filter, with `m` the bit
/// length of the longest node. Stops early once the graph is empty.
pub fn ihm_run<S: Scalar>(mut g: LayeredDag<S>, opts: &SolveOptions) -> RunResult<S> {
    let n = g.tables.n;
    let v0 = g0_node_formula(n as u64);
    let e0 = g.arcs.len() as u64;
    let cap = opts.max_sweeps.unwrap_or(n.max(1));
    let m = g.nodes.iter().map(|v| v.len.bits()).max().unwrap_or(0);
    let mut metrics = IterationMetrics { v0, e0, rows: Vec::new(), k_peak: 0, eta_peak: 0.0, m };
    if g.top {
        let xi = vec![BigUint::one(); g.nodes.len()];
        metrics.rows.push(row(&g, 0, v0, e0, (g.nodes.len(), g.arcs.len()), &FilterStats::default()));
        metrics.finish();
        return RunResult {
            solution: SolutionGraph { graph: Some(g), xi, count: BigUint::one() },
            metrics,
        };
    }
    let before = (g.nodes.len(), g.arcs.len());
    let st = filter(&mut g, cap);
    metrics.rows.push(row(&g, 0, v0, e0, before, &st));
    for it in 1..=m as usize {
        if g.nodes.is_empty() {
            break;
        }
        refine(&mut g);
        let refined = (g.nodes.len(), g.arcs.len());
        let st = filter(&mut g, cap);
        metrics.rows.push(row(&g, it, v0, e0, refined, &st));
    }
    metrics.finish();
    let solution = count_paths(g);
    RunResult { solution, metrics }
}

fn count_paths<S: Scalar>(g: LayeredDag<S>) -> SolutionGraph<S> {
    if g.nodes.is_empty() {
        return SolutionGraph { graph: None, xi: Vec::new(), count: BigUint::zero() };
    }
    let mut xi = vec![BigUint::zero(); g.nodes.len()];
    xi[g.root as usize] = BigUint::one();
    for &(s, d) in &g.arcs {
        if !xi[s as usize].is_zero() {
            let add = xi[s as usize].clone();
            xi[d as usize] += add;
        }
    }
    let mut count = BigUint::zero();
    for v in 0..g.nodes.len() as u32 {
        if g.is_destination(v) {
            count += &xi[v as usize];
        }
    }
    SolutionGraph { graph: Some(g), xi, count }
}

/// `xi` at the destination: the number of root-to-destination paths.
pub fn count_solutions<S: Scalar>(sg: &SolutionGraph<S>) -> BigUint {
    sg.count.clone()
}

/// Extracted solution indices in sorted-element bit order.
#[derive(Clone, Debug, Serialize)]
pub struct Extracted {
    pub indices: Vec<BigUint>,
    pub truncated: bool,
}

/// Enumerates root-to-destination paths depth first, up to `cap`. The index
/// of a path is the root's lower index plus the `Re w` of its arcs, which is
/// the index of the destination node's lower vertex.
pub fn extract_indices<S: Scalar>(sg: &SolutionGraph<S>, cap: usize) -> Extracted {
    let Some(g) = &sg.graph else {
        return Extracted { indices: Vec::new(), truncated: false };
    };
    if g.top {
        let all = (BigUint::one() << g.tables.n) - 1u32;
        return Extracted { indices: vec![all], truncated: cap == 0 };
    }
    let n = g.nodes.len();
    let csr = g.csr();
    let mut suffix = vec![false; n];
    for v in (0..n).rev() {
        suffix[v] = g.is_destination(v as u32)
            || g.arcs[csr[v] as usize..csr[v + 1] as usize].iter().any(|&(_, d)| suffix[d as usize]);
    }
    let mut out = Vec::new();
    let mut truncated = false;
    if !suffix[g.root as usize] {
        return Extracted { indices: out, truncated };
    }
    let mut stack: Vec<(u32, usize, S)> = vec![(g.root, csr[g.root as usize] as usize, g.x0())];
    if g.is_destination(g.root) {
        out.push(g.x0().to_bigint().to_biguint().unwrap());
    }
    while let Some(top) = stack.last_mut() {
        let (v, pos, x) = (top.0, top.1, top.2.clone());
        if pos == csr[v as usize + 1] as usize {
            stack.pop();
            continue;
        }
        top.1 += 1;
        let d = g.arcs[pos].1;
        if !suffix[d as usize] {
            continue;
        }
        let (dx, _) = g.weight(v, d);
        let xd = x + dx;
        if g.is_destination(d) {
            if out.len() == cap {
                truncated = true;
                break;
            }
            out.push(xd.to_bigint().to_biguint().unwrap_or_default());
        }
        stack.push((d, csr[d as usize] as usize, xd));
    }
    Extracted { indices: out, truncated }
}

/// Result of a full solve, independent of the scalar backend.
#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub count: BigUint,
    /// Indices with bits in user order.
    pub indices: Vec<BigUint>,
    pub truncated: bool,
    pub metrics: IterationMetrics,
    pub final_nodes: usize,
    pub final_arcs: usize,
    pub backend: &'static str,
    pub millis: u128,
    /// JSON lines of the final graph, when requested.
    #[serde(skip)]
    pub dump: Option<Vec<String>>,
}

/// Builds the reachable orbital graph for `S`.
pub fn reachable_graph<S: Scalar>(inst: &Instance, policy: DestinationPolicy) -> Result<LayeredDag<S>> {
    build_reachable(Arc::new(Tables::new(inst)?), policy)
}

fn solve_with<S: Scalar>(inst: &Instance, opts: &SolveOptions, dump: bool, backend: &'static str) -> Result<Solution> {
    let t0 = Instant::now();
    let g = reachable_graph::<S>(inst, opts.policy)?;
    let run = ihm_run(g, opts);
    let ex = if opts.count_only {
        Extracted { indices: Vec::new(), truncated: !run.solution.count.is_zero() }
    } else {
        extract_indices(&run.solution, opts.indices_cap)
    };
    for r in &ex.indices {
        if &inst.sigma(r)? != inst.target() && opts.policy == DestinationPolicy::Canonical {
            return Err(Error::Internal(format!("extracted index {r} does not sum to the target")));
        }
    }
    let (final_nodes, final_arcs) =
        run.solution.graph.as_ref().map_or((0, 0), |g| (g.nodes.len(), g.arcs.len()));
    Ok(Solution {
        count: run.solution.count.clone(),
        indices: ex.indices.iter().map(|r| inst.to_user_index(r)).collect(),
        truncated: ex.truncated,
        metrics: run.metrics,
        final_nodes,
        final_arcs,
        backend,
        millis: t0.elapsed().as_millis(),
        dump: if dump { run.solution.graph.as_ref().map(|g| g.dump_lines()) } else { None },
    })
}

/// Runs the full pipeline, choosing `i128` when every sum fits.
pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    solve_dump(inst, opts, false)
}

/// [`solve`] that also returns the final graph as JSON lines.
pub fn solve_dump(inst: &Instance, opts: &SolveOptions, dump: bool) -> Result<Solution> {
    if inst.fits_i128() {
        solve_with::<i128>(inst, opts, dump, "i128")
    } else {
        solve_with::<BigInt>(inst, opts, dump, "bigint")
    }
}

/// Structural properties of a nonempty final graph: node lengths at most 1,
/// every arc `dy = 0`, every leaf a destination, and every root path to a
/// destination a zero path. Returns a description of the first violation.
pub fn check_final_graph<S: Scalar>(g: &LayeredDag<S>) -> std::result::Result<(), String> {
    if g.top {
        return Ok(());
    }
    let one = S::one();
    if let Some(v) = g.nodes.iter().position(|v| v.len > one) {
        return Err(format!("node {v} has length {}", g.nodes[v].len));
    }
    for &(s, d) in &g.arcs {
        let dy = g.dy(s, d);
        if !dy.is_zero() {
            return Err(format!("arc {s}->{d} has dy {dy}"));
        }
    }
    let csr = g.csr();
    for v in 0..g.nodes.len() {
        if csr[v] == csr[v + 1] && !g.is_destination(v as u32) {
            return Err(format!("leaf {v} is not a destination"));
        }
    }
    if !g.y0.is_zero() {
        return Err(format!("root starts at {}", g.y0));
    }
    // every path's height is y0 - sum(dy) = 0 at each node; confirm by DFS
    let mut stack = vec![(g.root, g.y0.clone())];
    let mut seen = vec![false; g.nodes.len()];
    while let Some((v, y)) = stack.pop() {
        if !y.is_zero() {
            return Err(format!("path reaches node {v} at height {y}"));
        }
        if seen[v as usize] {
            continue;
        }
        seen[v as usize] = true;
        for &(_, d) in &g.arcs[csr[v as usize] as usize..csr[v as usize + 1] as usize] {
            stack.push((d, y.clone() - g.dy(v, d)));
        }
    }
    Ok(())
}

/// `m` as used by the loop: bit length of the longest node of the reachable build.
pub fn rounds_needed<S: Scalar>(g: &LayeredDag<S>) -> u64 {
    g.nodes.iter().map(|v| v.len.bits()).max().unwrap_or(0)
}

/// Converts a count to `u128` for display when it fits.
pub fn count_u128(c: &BigUint) -> Option<u128> {
    c.to_u128()
}
