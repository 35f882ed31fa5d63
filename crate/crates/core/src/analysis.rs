//! Configuration graphs of valid paths and the size diagnostics built on them.
//!
//! Valid paths are walked on `G0` itself as `(node, local height)` states.
//! Level `r` of the configuration graph is the set `F_r` of distinct local
//! heights reached at graph level `r`; an arc `(y, y')` of `C(r, r+1)` is any
//! transition between them.

use crate::error::{Error, Result};
use crate::ihm::{IterationMetrics, Solution};
use crate::instance::Instance;
use crate::oracle::unique_sum_stats;
use crate::orbital::build_g0;
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Per-level point sets and arc counts of the valid paths from the root.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigGraph {
    pub n: usize,
    /// `F_r`, sorted.
    pub levels: Vec<Vec<i128>>,
    /// `gamma_r = |F_r|`.
    pub gamma: Vec<u64>,
    /// `|C(r, r+1)|`.
    pub arcs: Vec<u64>,
    /// `mu_r`, the largest number of distinct successors of a point of `F_r`.
    pub mu: Vec<u64>,
    /// Points of `F_r` with no successor.
    pub dead: Vec<u64>,
    /// `gamma(k, r)` over zero paths of length `k`, for each `k` that has one.
    pub zero: BTreeMap<usize, Vec<u64>>,
    /// Number of `(node, height)` states visited.
    pub states: usize,
    /// The state cap was reached; gammas are lower bounds.
    pub truncated: bool,
}

/// `mu_0 = (n^3 + 3n^2 - 13n + 6) / 3`.
pub fn mu0(n: u64) -> BigInt {
    let n = BigInt::from(n);
    (&n * &n * &n + 3 * &n * &n - 13 * &n + 6) / 3
}

/// Maximum distinct out-degrees per level with the closed-form `mu_0`.
#[derive(Clone, Debug, Serialize)]
pub struct MuProfile {
    pub mu: Vec<u64>,
    pub mu0: BigInt,
}

impl ConfigGraph {
    pub fn mu_profile(&self) -> MuProfile {
        MuProfile { mu: self.mu.clone(), mu0: mu0(self.n as u64) }
    }
}

/// Walks every valid path of `G0` from the root, recording distinct local
/// heights per level. Stops expanding once `cap` states have been visited.
pub fn build_config_graph(inst: &Instance, cap: usize) -> Result<ConfigGraph> {
    if !inst.fits_i128() {
        return Err(Error::Guard("configuration graphs need sums below 2^100".into()));
    }
    let g = build_g0::<i128>(inst)?;
    let csr = g.csr();
    let window = |v: u32| {
        let l = g.nodes[v as usize].len;
        if l > 0 { l - 1 } else { 0 }
    };
    // states[r] = (node, y); trans[r] = (state at r, state at r+1)
    let mut states: Vec<Vec<(u32, i128)>> = vec![vec![(g.root, g.y0)]];
    let mut trans: Vec<Vec<(u32, u32)>> = Vec::new();
    let mut total = 1usize;
    let mut truncated = false;
    if !g.top {
        loop {
            let cur = states.last().unwrap();
            let mut next: Vec<(u32, i128)> = Vec::new();
            let mut slot: HashMap<(u32, i128), u32> = HashMap::new();
            let mut tr = Vec::new();
            'outer: for (si, &(v, y)) in cur.iter().enumerate() {
                for &(_, d) in &g.arcs[csr[v as usize] as usize..csr[v as usize + 1] as usize] {
                    let y2 = y - g.dy(v, d);
                    if y2 < 0 || y2 > window(d) {
                        continue;
                    }
                    let id = *slot.entry((d, y2)).or_insert_with(|| {
                        next.push((d, y2));
                        next.len() as u32 - 1
                    });
                    tr.push((si as u32, id));
                    if total + next.len() >= cap {
                        truncated = true;
                        break 'outer;
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            total += next.len();
            trans.push(tr);
            states.push(next);
            if truncated {
                break;
            }
        }
    }
    let depth = states.len();
    let mut levels = Vec::with_capacity(depth);
    let mut gamma = Vec::with_capacity(depth);
    for lv in &states {
        let f: BTreeSet<i128> = lv.iter().map(|s| s.1).collect();
        gamma.push(f.len() as u64);
        levels.push(f.into_iter().collect::<Vec<_>>());
    }
    let mut arcs = Vec::with_capacity(depth);
    let mut mu = vec![0u64; depth];
    let mut dead = gamma.clone();
    for (r, tr) in trans.iter().enumerate() {
        let pairs: BTreeSet<(i128, i128)> =
            tr.iter().map(|&(a, b)| (states[r][a as usize].1, states[r + 1][b as usize].1)).collect();
        arcs.push(pairs.len() as u64);
        let mut deg: HashMap<i128, u64> = HashMap::new();
        for (y, _) in &pairs {
            *deg.entry(*y).or_default() += 1;
        }
        mu[r] = deg.values().copied().max().unwrap_or(0);
        dead[r] -= deg.len() as u64;
    }
    // zero paths of length k: backward closure from destination states at y = 0
    let mut zero = BTreeMap::new();
    for k in 1..depth {
        let mut live: Vec<bool> = states[k]
            .iter()
            .map(|&(v, y)| y == 0 && g.is_destination(v))
            .collect();
        if !live.iter().any(|&b| b) {
            continue;
        }
        let mut prof = vec![0u64; k + 1];
        prof[k] = 1;
        for r in (0..k).rev() {
            let mut back = vec![false; states[r].len()];
            for &(a, b) in &trans[r] {
                if live[b as usize] {
                    back[a as usize] = true;
                }
            }
            let f: BTreeSet<i128> =
                states[r].iter().zip(&back).filter(|(_, &b)| b).map(|(s, _)| s.1).collect();
            prof[r] = f.len() as u64;
            live = back;
        }
        zero.insert(k, prof);
    }
    Ok(ConfigGraph { n: inst.n(), levels, gamma, arcs, mu, dead, zero, states: total, truncated })
}

/// One level of the product-inequality audit.
#[derive(Clone, Debug, Serialize)]
pub struct AuditRow {
    pub r: usize,
    pub gamma: u64,
    pub mu_r: u64,
    /// `Gamma_r = gamma_0 ... gamma_r`.
    pub big_gamma: BigUint,
    /// `mu_0^{2r}`.
    pub bound: BigInt,
    pub holds: bool,
}

/// Zero-path product check for one length `k`.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroAuditRow {
    pub k: usize,
    pub product: BigUint,
    /// `mu_0^k`.
    pub bound: BigInt,
    pub holds: bool,
    /// `max gamma(k, .) < mu_0^2`.
    pub max_holds: bool,
}

/// Every inequality checked on a configuration graph.
#[derive(Clone, Debug, Serialize)]
pub struct Audit {
    pub mu0: BigInt,
    pub rows: Vec<AuditRow>,
    pub zero: Vec<ZeroAuditRow>,
    /// `gamma_0 = 1`.
    pub gamma0_ok: bool,
    /// Levels where `gamma_{r+1} > gamma_r mu_r`.
    pub growth_violations: Vec<usize>,
    /// Levels where `max(gamma_r, gamma_{r+1}) <= |C| <= gamma_r gamma_{r+1}` fails.
    pub sandwich_violations: Vec<usize>,
    /// The same check with `gamma_r` counting only points that have a successor.
    pub continuing_sandwich_violations: Vec<usize>,
    /// Levels holding points with no successor.
    pub dead_ends: Vec<usize>,
    /// `max(gamma) < mu_0^4`.
    pub max_gamma_ok: bool,
}

impl Audit {
    /// Every checked inequality holds.
    pub fn all_hold(&self) -> bool {
        self.gamma0_ok
            && self.growth_violations.is_empty()
            && self.sandwich_violations.is_empty()
            && self.rows.iter().all(|r| r.holds)
            && self.zero.iter().all(|z| z.holds && z.max_holds)
            && self.max_gamma_ok
    }

    /// CSV with header `r,gamma,mu_r,Gamma_r,bound`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,gamma,mu_r,Gamma_r,bound\n");
        for r in &self.rows {
            s += &format!("{},{},{},{},{}\n", r.r, r.gamma, r.mu_r, r.big_gamma, r.bound);
        }
        s
    }
}

/// Checks `Gamma_r < mu_0^{2r}` for `r >= 1`, the zero-path product
/// `Gamma0_k < mu_0^k`, the growth law, and the arc-count sandwich.
pub fn product_inequality_audit(cg: &ConfigGraph) -> Audit {
    let m0 = mu0(cg.n as u64);
    let mut rows = Vec::new();
    let mut prod = BigUint::one();
    for (r, &g) in cg.gamma.iter().enumerate() {
        prod *= g;
        if r == 0 {
            continue;
        }
        let bound = m0.pow(2 * r as u32);
        rows.push(AuditRow {
            r,
            gamma: g,
            mu_r: cg.mu[r],
            big_gamma: prod.clone(),
            holds: BigInt::from(prod.clone()) < bound,
            bound,
        });
    }
    let sq = &m0 * &m0;
    let zero = cg
        .zero
        .iter()
        .map(|(&k, prof)| {
            let product: BigUint = prof.iter().map(|&g| BigUint::from(g)).product();
            let bound = m0.pow(k as u32);
            let max = prof.iter().copied().max().unwrap_or(0);
            ZeroAuditRow {
                k,
                holds: BigInt::from(product.clone()) < bound,
                product,
                bound,
                max_holds: BigInt::from(max) < sq,
            }
        })
        .collect();
    let mut growth_violations = Vec::new();
    let mut sandwich_violations = Vec::new();
    let mut continuing_sandwich_violations = Vec::new();
    let mut dead_ends = Vec::new();
    for r in 0..cg.gamma.len().saturating_sub(1) {
        let (g0, g1) = (cg.gamma[r], cg.gamma[r + 1]);
        if g1 > g0 * cg.mu[r] {
            growth_violations.push(r);
        }
        if cg.dead[r] > 0 {
            dead_ends.push(r);
        }
        let c = cg.arcs[r];
        if c < g0.max(g1) || c > g0 * g1 {
            sandwich_violations.push(r);
        }
        let live = g0 - cg.dead[r];
        if c < live.max(g1) || c > live * g1 {
            continuing_sandwich_violations.push(r);
        }
    }
    let max = cg.gamma.iter().copied().max().unwrap_or(0);
    Audit {
        gamma0_ok: cg.gamma.first() == Some(&1),
        max_gamma_ok: BigInt::from(max) < m0.pow(4),
        mu0: m0,
        rows,
        zero,
        growth_violations,
        sandwich_violations,
        continuing_sandwich_violations,
        dead_ends,
    }
}

/// Per-`n` maxima over a set of runs, with the `3 log2 n` and `7 log2 n` curves.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub kpeak_max: usize,
    pub eta_peak_max: f64,
    pub trials: usize,
    pub ref3: u64,
    pub ref7: u64,
}

/// `ceil(c log2 n)`.
pub fn log_curve(c: f64, n: usize) -> u64 {
    (c * (n as f64).log2()).ceil().max(0.0) as u64
}

/// The growth figures of one run.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthSample {
    pub n: usize,
    pub k_peak: usize,
    pub eta_peak: f64,
}

impl GrowthSample {
    pub fn from_metrics(n: usize, m: &IterationMetrics) -> Self {
        GrowthSample { n, k_peak: m.k_peak, eta_peak: m.eta_peak }
    }
}

pub fn growth_summary(runs: &[GrowthSample]) -> Result<Vec<GrowthRow>> {
    if runs.is_empty() {
        return Err(Error::InvalidParam("no runs to summarise".into()));
    }
    let mut by_n: BTreeMap<usize, GrowthRow> = BTreeMap::new();
    for s in runs {
        let e = by_n.entry(s.n).or_insert(GrowthRow {
            n: s.n,
            kpeak_max: 0,
            eta_peak_max: 0.0,
            trials: 0,
            ref3: log_curve(3.0, s.n),
            ref7: log_curve(7.0, s.n),
        });
        e.trials += 1;
        e.kpeak_max = e.kpeak_max.max(s.k_peak);
        e.eta_peak_max = e.eta_peak_max.max(s.eta_peak);
    }
    Ok(by_n.into_values().collect())
}

/// CSV with header `n,kpeak_max,eta_peak_max`.
pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut s = String::from("n,kpeak_max,eta_peak_max\n");
    for r in rows {
        s += &format!("{},{},{:.6}\n", r.n, r.kpeak_max, r.eta_peak_max);
    }
    s
}

/// `|V_m| <= min(2U / (n(n+1)), 2^m) |V_0|`, evaluated.
#[derive(Clone, Debug, Serialize)]
pub struct VmBound {
    pub unique_sums: u64,
    pub v0: u64,
    pub vm: usize,
    pub factor: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn vm_bound_check(inst: &Instance, sol: &Solution) -> Result<VmBound> {
    let u = unique_sum_stats(inst)?.u;
    let n = inst.n() as f64;
    let uf = u as f64;
    let m = inst.m() as i32;
    let factor = (2.0 * uf / (n * (n + 1.0))).min(2f64.powi(m));
    let v0 = sol.metrics.v0;
    let bound = factor * v0 as f64;
    Ok(VmBound { unique_sums: u, v0, vm: sol.final_nodes, factor, bound, holds: sol.final_nodes as f64 <= bound })
}

/// `gamma(k, r)` profiles are positive exactly on levels `0..=k`.
pub fn zero_profile_ok(cg: &ConfigGraph) -> bool {
    cg.zero.values().all(|p| p.first() == Some(&1) && p.last() == Some(&1) && p.iter().all(|&g| g > 0))
}

/// Bound on `mu_r`: the closed form at `n - r`.
pub fn mu_bound(n: u64, r: u64) -> BigInt {
    mu0(n.saturating_sub(r))
}

/// `sum_{k=3}^{n} (k^2 + k - 5)`, the sum the closed form comes from.
pub fn mu0_by_sum(n: u64) -> BigInt {
    (3..=n).map(|k| BigInt::from(k * k + k) - 5).sum()
}
