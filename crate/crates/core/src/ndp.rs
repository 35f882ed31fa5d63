//! Non-decreasing paths: the index sequences `phi`/`varphi`, the curves
//! `p_j`/`q_j`, chains of elemental blocks and the `lambda`/`rho`/`tau`
//! transforms that generate the family of all non-decreasing paths.

use crate::error::{Error, Result};
use crate::instance::{Instance, Point};
use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

/// `N_k = k (k + 1) / 2`, the number of links of a curve of order `k`.
pub fn tri(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// Largest `t` with `t (t + 1) / 2 <= k`, in exact integer arithmetic.
pub fn theta(k: u64) -> u64 {
    let r = (1u128 + 8 * k as u128).sqrt();
    ((r - 1) / 2) as u64
}

fn phi_raw(k: u64) -> BigUint {
    let t = theta(k);
    let low = t - (k - tri(t));
    (BigUint::one() << (t + 1)) - (BigUint::one() << low) - 1u32
}

/// `phi_n(k) = 2^{1+t} - 2^{t - k + t(t+1)/2} - 1` with `t = theta(k)`.
pub fn phi(n: u32, k: u64) -> Result<BigUint> {
    if k > tri(n as u64) {
        return Err(Error::OutOfRange(format!("phi index {k} for n = {n}")));
    }
    Ok(phi_raw(k))
}

/// `psi_n(k) = 2^n - 1 - phi_n(N_n - k)`, the complement read backwards.
pub fn varphi(n: u32, k: u64) -> Result<BigUint> {
    let nn = tri(n as u64);
    if k > nn {
        return Err(Error::OutOfRange(format!("varphi index {k} for n = {n}")));
    }
    Ok((BigUint::one() << n) - 1u32 - phi_raw(nn - k))
}

/// The two curve types. `P` follows `phi`, `Q` follows `varphi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum CurveKind {
    P,
    Q,
}

impl CurveKind {
    pub fn flip(self) -> Self {
        match self {
            CurveKind::P => CurveKind::Q,
            CurveKind::Q => CurveKind::P,
        }
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::P => "p",
            CurveKind::Q => "q",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSequence {
    pub kind: CurveKind,
    pub j: u32,
    pub values: Vec<BigUint>,
}

/// The full sequence `phi_j(0..=N_j)` or `varphi_j(0..=N_j)`.
pub fn index_sequence(kind: CurveKind, j: u32) -> IndexSequence {
    let values = (0..=tri(j as u64))
        .map(|k| match kind {
            CurveKind::P => phi_raw(k),
            CurveKind::Q => varphi(j, k).unwrap(),
        })
        .collect();
    IndexSequence { kind, j, values }
}

/// Box-filling rules: move the lowest or the highest movable ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillRule {
    Lb,
    Hb,
}

/// Simulates filling `n` boxes from a bag. Position 0 is the bag, which never
/// runs out. Each step moves one ball from position `p` to an empty `p + 1`,
/// choosing the lowest (`Lb`) or highest (`Hb`) such `p`. The states are read
/// as binary numbers with box `i` as bit `i - 1`.
pub fn lb_hb_simulate(n: u32, rule: FillRule) -> IndexSequence {
    let n = n as usize;
    let mut boxes = vec![false; n + 1];
    let state = |b: &[bool]| {
        let mut v = BigUint::zero();
        for i in 1..=n {
            if b[i] {
                v.set_bit(i as u64 - 1, true);
            }
        }
        v
    };
    let mut values = vec![state(&boxes)];
    loop {
        let movable = |p: usize, b: &[bool]| (p == 0 || b[p]) && p < n && !b[p + 1];
        let pick = match rule {
            FillRule::Lb => (0..=n).find(|&p| movable(p, &boxes)),
            FillRule::Hb => (0..=n).rev().find(|&p| movable(p, &boxes)),
        };
        let Some(p) = pick else { break };
        if p > 0 {
            boxes[p] = false;
        }
        boxes[p + 1] = true;
        values.push(state(&boxes));
    }
    let kind = match rule {
        FillRule::Lb => CurveKind::P,
        FillRule::Hb => CurveKind::Q,
    };
    IndexSequence { kind, j: n as u32, values }
}

/// One elemental block: `c_i` forward or `ĉ_i` reversed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Block {
    pub order: u32,
    pub reversed: bool,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.reversed { "ĉ" } else { "c" }, self.order)
    }
}

/// A curve in derivative form: a run of blocks and an active region.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Chain {
    blocks: Vec<Block>,
    /// Active block positions `lo..=hi`.
    lo: usize,
    hi: usize,
    /// Largest admissible character.
    limit: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TransformOp {
    Lambda,
    Rho,
    Tau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TransformStep {
    pub op: TransformOp,
    pub k: u32,
}

impl TransformStep {
    pub fn tau(k: u32) -> Self {
        TransformStep { op: TransformOp::Tau, k }
    }
}

/// `∂p_n = ĉ1 ... ĉn` or `∂q_n = cn ... c1`.
pub fn chain_of(kind: CurveKind, n: u32) -> Chain {
    let blocks = match kind {
        CurveKind::P => (1..=n).map(|i| Block { order: i, reversed: true }).collect(),
        CurveKind::Q => (1..=n).rev().map(|i| Block { order: i, reversed: false }).collect(),
    };
    Chain { blocks, lo: 0, hi: n as usize - 1, limit: n }
}

impl Chain {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }
    /// Active block positions, inclusive, 0-based.
    pub fn active(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }
    pub fn active_len(&self) -> u32 {
        (self.hi + 1 - self.lo) as u32
    }
    /// Admissible characters `1..=limit`.
    pub fn character_limit(&self) -> u32 {
        self.limit
    }
    /// Order of the curve (number of blocks).
    pub fn order(&self) -> u32 {
        self.blocks.len() as u32
    }

    /// Type of the active region, read off the block orientations.
    pub fn active_kind(&self) -> Result<CurveKind> {
        let act = &self.blocks[self.lo..=self.hi];
        let k = act.len() as u32;
        if act.iter().enumerate().all(|(i, b)| b.reversed && b.order == i as u32 + 1) {
            Ok(CurveKind::P)
        } else if act.iter().enumerate().all(|(i, b)| !b.reversed && b.order == k - i as u32) {
            Ok(CurveKind::Q)
        } else {
            Err(Error::Internal(format!("active region of {self} is neither p nor q")))
        }
    }

    /// Link numbers (1-based) in chain order.
    pub fn expand(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(tri(self.order() as u64) as usize);
        for b in &self.blocks {
            if b.reversed {
                out.extend((1..=b.order).rev());
            } else {
                out.extend(1..=b.order);
            }
        }
        out
    }

    /// Vertex points obtained by prefix-summing the links.
    pub fn vertices(&self, inst: &Instance) -> Vec<Point> {
        let d = inst.links().d;
        let mut x = BigUint::zero();
        let mut y = BigUint::zero();
        let mut out = vec![Point { x: x.clone(), y: y.clone() }];
        for j in self.expand() {
            let (dx, dy) = &d[j as usize - 1];
            x += dx;
            y += dy;
            out.push(Point { x: x.clone(), y: y.clone() });
        }
        out
    }

    /// Vertex indices only, for `n < 64`.
    pub fn vertex_indices(&self) -> Vec<u64> {
        let mut x = 0u64;
        let mut out = vec![0u64];
        for j in self.expand() {
            x += if j == 1 { 1 } else { 1u64 << (j - 2) };
            out.push(x);
        }
        out
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if i == self.lo {
                f.write_str("[")?;
            }
            write!(f, "{b}")?;
            if i == self.hi {
                f.write_str("]")?;
            }
        }
        Ok(())
    }
}

/// Applies one transform. `lambda_k` keeps the leftmost `k` active blocks of a
/// p-type region or the rightmost `k` of a q-type region; `rho_k` reverses the
/// active region of size `k` and flips every block; `tau_k` is both.
pub fn apply_transform(ch: &Chain, step: TransformStep) -> Result<Chain> {
    let kind = ch.active_kind()?;
    let k = step.k;
    let mut out = ch.clone();
    if matches!(step.op, TransformOp::Lambda | TransformOp::Tau) {
        if k == 0 || k > ch.limit || k > ch.active_len() {
            return Err(Error::OutOfRange(format!(
                "character {k} (admissible 1..={})",
                ch.limit.min(ch.active_len())
            )));
        }
        match kind {
            CurveKind::P => out.hi = out.lo + k as usize - 1,
            CurveKind::Q => out.lo = out.hi + 1 - k as usize,
        }
        out.limit = k;
    }
    if matches!(step.op, TransformOp::Rho | TransformOp::Tau) {
        if out.active_len() != k {
            return Err(Error::OutOfRange(format!(
                "reversal order {k} on active region of size {}",
                out.active_len()
            )));
        }
        out.blocks[out.lo..=out.hi].reverse();
        for b in &mut out.blocks[out.lo..=out.hi] {
            b.reversed = !b.reversed;
        }
        out.limit = k - 1;
    }
    Ok(out)
}

/// Applies `tau_{k_1}, tau_{k_2}, ...` to the fresh chain of `start`.
pub fn apply_path(start: CurveKind, n: u32, ks: &[u32]) -> Result<Chain> {
    let mut ch = chain_of(start, n);
    for &k in ks {
        ch = apply_transform(&ch, TransformStep::tau(k))?;
    }
    Ok(ch)
}

/// Vertex points of `p_j` or `q_j`.
pub fn curve_points(inst: &Instance, kind: CurveKind, j: u32) -> Result<Vec<Point>> {
    if j == 0 || j as usize > inst.n() {
        return Err(Error::OutOfRange(format!("curve order {j}")));
    }
    Ok(chain_of(kind, j).vertices(inst))
}

/// The transformation vector of a point. `x[i]` is bit `i` (element `i + 1`).
/// With `x_{n+1} = 1` for a q start and `0` for a p start, `K` holds every `i`
/// with `x_{i+1} != x_i`, listed in decreasing order. Returns `index(K)` and `K`.
pub fn transformation_vector(x: &[bool], start: CurveKind) -> (BigUint, Vec<u32>) {
    let n = x.len();
    let mut ks = Vec::new();
    let mut idx = BigUint::zero();
    let mut above = start == CurveKind::Q;
    for i in (1..=n).rev() {
        if x[i - 1] != above {
            ks.push(i as u32);
            idx.set_bit(i as u64 - 1, true);
        }
        above = x[i - 1];
    }
    (idx, ks)
}

/// The family of all non-decreasing paths descending from `p_n` by `tau_k`
/// with strictly decreasing `k >= 4`; the first step may also use `k = n`.
/// Deduplicated by expanded link sequence.
pub fn enumerate_ndps(n: u32) -> Result<Vec<Chain>> {
    if !(3..=14).contains(&n) {
        return Err(Error::Guard(format!("enumerate_ndps needs 3 <= n <= 14, got {n}")));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut stack = vec![chain_of(CurveKind::P, n)];
    while let Some(ch) = stack.pop() {
        let fresh = ch.limit == n;
        let top = ch.limit.min(ch.active_len());
        for k in (4..=top).chain((fresh && n < 4).then_some(n)) {
            stack.push(apply_transform(&ch, TransformStep::tau(k))?);
        }
        if seen.insert(ch.expand()) {
            out.push(ch);
        }
    }
    out.sort_by_key(|c| c.expand());
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Coverage {
    pub complete: bool,
    pub missing: Vec<u64>,
}

/// Whether the vertices of `family` hit every index of `S_n`, with a
/// consistency check that each vertex sum equals the subset sum of its index.
pub fn coverage_check(inst: &Instance, family: &[Chain]) -> Result<Coverage> {
    let n = inst.n();
    if n > 14 {
        return Err(Error::Guard("coverage_check needs n <= 14".into()));
    }
    let mut hit = vec![false; 1 << n];
    for ch in family {
        if ch.order() as usize != n {
            return Err(Error::InvalidParam("chain order differs from n".into()));
        }
        for p in ch.vertices(inst) {
            let x = p.x.to_usize().unwrap();
            if inst.sigma(&p.x)? != p.y {
                return Err(Error::Internal(format!("vertex {x} has a wrong sum")));
            }
            hit[x] = true;
        }
    }
    let missing: Vec<u64> = (0..hit.len()).filter(|&i| !hit[i]).map(|i| i as u64).collect();
    Ok(Coverage { complete: missing.is_empty(), missing })
}

/// A segment between two consecutive vertices of some path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Segment {
    pub lo: (u64, BigUint),
    pub hi: (u64, BigUint),
}

#[derive(Clone, Debug, Serialize)]
pub struct SegmentStats {
    /// Distinct segments over the whole family.
    pub unique: usize,
    /// Distinct segments with `y_lo <= T < y_hi`, left to right, with the number
    /// of family members through each.
    pub crossing: Vec<(Segment, usize)>,
}

impl SegmentStats {
    pub fn multiplicities(&self) -> Vec<usize> {
        self.crossing.iter().map(|(_, m)| *m).collect()
    }
}

/// Unique segment count and, given `t`, the multiplicities of segments that cross `y = t`.
pub fn segment_stats(inst: &Instance, family: &[Chain], t: Option<&BigUint>) -> Result<SegmentStats> {
    if inst.n() > 14 {
        return Err(Error::Guard("segment_stats needs n <= 14".into()));
    }
    let mut all = HashSet::new();
    let mut crossing: BTreeMap<Segment, usize> = BTreeMap::new();
    for ch in family {
        let v = ch.vertices(inst);
        for w in v.windows(2) {
            let seg = Segment {
                lo: (w[0].x.to_u64().unwrap(), w[0].y.clone()),
                hi: (w[1].x.to_u64().unwrap(), w[1].y.clone()),
            };
            if let Some(t) = t {
                if &w[0].y <= t && t < &w[1].y {
                    *crossing.entry(seg.clone()).or_default() += 1;
                }
            }
            all.insert(seg);
        }
    }
    Ok(SegmentStats { unique: all.len(), crossing: crossing.into_iter().collect() })
}

/// SVG drawing of a family with the line `y = t` overlaid.
pub fn family_svg(inst: &Instance, family: &[Chain], t: &BigUint) -> String {
    let (w, h) = (800.0, 600.0);
    let xmax = ((1u128 << inst.n()) - 1) as f64;
    let ymax = inst.total().to_f64().unwrap_or(1.0).max(1.0);
    let sx = |x: &BigUint| 20.0 + (w - 40.0) * x.to_f64().unwrap_or(0.0) / xmax.max(1.0);
    let sy = |y: &BigUint| h - 20.0 - (h - 40.0) * y.to_f64().unwrap_or(0.0) / ymax;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    for ch in family {
        let v = ch.vertices(inst);
        let pts: Vec<String> = v.iter().map(|p| format!("{:.2},{:.2}", sx(&p.x), sy(&p.y))).collect();
        s += &format!(
            "<polyline fill=\"none\" stroke=\"steelblue\" stroke-opacity=\"0.4\" points=\"{}\"/>\n",
            pts.join(" ")
        );
    }
    let ty = sy(t);
    s += &format!(
        "<line x1=\"20\" y1=\"{ty:.2}\" x2=\"{:.2}\" y2=\"{ty:.2}\" stroke=\"crimson\"/>\n</svg>\n",
        w - 20.0
    );
    s
}
