//! The transformation graph over curves: path counts and wormholes.
//!
//! A transformation path `k_1 > k_2 > ... > k_r` starts at `p_n` and applies
//! `tau_{k_1}, tau_{k_2}, ...`. Each step lands on a complete curve of order
//! `k_i` whose y-range is the wormhole interval `[l_i, h_i]`.

use crate::error::{Error, Result};
use crate::instance::Instance;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::HashSet;
use std::sync::{Mutex, OnceLock};

/// Exact binomial coefficient from a cached Pascal triangle.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    static ROWS: OnceLock<Mutex<Vec<Vec<BigUint>>>> = OnceLock::new();
    let rows = ROWS.get_or_init(|| Mutex::new(vec![vec![BigUint::one()]]));
    let mut rows = rows.lock().unwrap();
    while rows.len() <= n as usize {
        let prev = rows.last().unwrap();
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(BigUint::one());
        for w in prev.windows(2) {
            row.push(&w[0] + &w[1]);
        }
        row.push(BigUint::one());
        rows.push(row);
    }
    rows[n as usize][k as usize].clone()
}

/// Paths of length `i` ending at element `j`: `C(j - 1, i - 1)`.
pub fn wp(i: u64, j: u64, n: u64) -> Result<BigUint> {
    if i == 0 || i > j || j > n {
        return Err(Error::OutOfRange(format!("wp({i}, {j}) with n = {n}")));
    }
    Ok(binomial(j - 1, i - 1))
}

/// Paths of length `r`: `C(n, r)`.
pub fn beta(r: u64, n: u64) -> Result<BigUint> {
    if r > n {
        return Err(Error::OutOfRange(format!("beta({r}, {n})")));
    }
    Ok(binomial(n, r))
}

/// A strictly decreasing sequence of characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformPath {
    pub ks: Vec<u32>,
}

impl TransformPath {
    pub fn new(ks: Vec<u32>, n: u32) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::InvalidParam("empty transformation path".into()));
        }
        if ks[0] > n || ks.windows(2).any(|w| w[0] <= w[1]) || *ks.last().unwrap() == 0 {
            return Err(Error::InvalidParam(format!("{ks:?} is not strictly decreasing in 1..={n}")));
        }
        Ok(TransformPath { ks })
    }
}

/// Nested y-intervals swept by a transformation path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wormhole {
    pub lower: Vec<BigUint>,
    pub upper: Vec<BigUint>,
}

/// `l_i = sum_{j <= i'} (-1)^{j+1} A_{k_j}` with `i' = i` for even `i` and
/// `i - 1` for odd `i`; `h_i = l_i + A_{k_i}`.
pub fn wormhole(inst: &Instance, path: &TransformPath) -> Result<Wormhole> {
    let a = &inst.prefix().a;
    if path.ks[0] as usize > inst.n() {
        return Err(Error::OutOfRange("path character".into()));
    }
    let mut lower = Vec::with_capacity(path.ks.len());
    let mut upper = Vec::with_capacity(path.ks.len());
    let mut alt = BigInt::zero();
    for (idx, &k) in path.ks.iter().enumerate() {
        let i = idx + 1;
        let ak = BigInt::from(a[k as usize].clone());
        let l = if i % 2 == 0 {
            alt -= &ak;
            alt.clone()
        } else {
            let l = alt.clone();
            alt += &ak;
            l
        };
        let l = l.to_biguint().ok_or_else(|| Error::Internal("negative wormhole bound".into()))?;
        upper.push(&l + &a[k as usize]);
        lower.push(l);
    }
    Ok(Wormhole { lower, upper })
}

/// True iff `l_i <= t <= h_i` at every level.
pub fn wormhole_valid(wh: &Wormhole, t: &BigUint) -> bool {
    wh.lower.iter().zip(&wh.upper).all(|(l, h)| l <= t && t <= h)
}

/// Valid and distinct-valid wormhole counts at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WormholeCounts {
    pub r: u32,
    /// Paths of length `r` whose wormhole contains `T`.
    pub valid: u64,
    /// Distinct final curves `(k_r, l_r)` among them.
    pub distinct: u64,
    /// `C(n, r)`.
    pub total: BigUint,
}

fn for_each_path(n: u32, r: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(cur: &mut Vec<u32>, top: u32, left: u32, f: &mut impl FnMut(&[u32])) {
        if left == 0 {
            f(cur);
            return;
        }
        for k in (left..=top).rev() {
            cur.push(k);
            rec(cur, k - 1, left - 1, f);
            cur.pop();
        }
    }
    rec(&mut Vec::new(), n, r, f);
}

/// Enumerates every path of length `r` and counts those whose wormhole holds `t`.
pub fn count_valid_wormholes(inst: &Instance, t: &BigUint, r: u32) -> Result<WormholeCounts> {
    let n = inst.n() as u32;
    if n > 14 {
        return Err(Error::Guard("count_valid_wormholes needs n <= 14".into()));
    }
    if r == 0 || r > n {
        return Err(Error::OutOfRange(format!("level {r}")));
    }
    let mut valid = 0u64;
    let mut distinct = HashSet::new();
    let mut err = None;
    for_each_path(n, r, &mut |ks| {
        match wormhole(inst, &TransformPath { ks: ks.to_vec() }) {
            Ok(wh) => {
                if wormhole_valid(&wh, t) {
                    valid += 1;
                    distinct.insert((*ks.last().unwrap(), wh.lower.last().unwrap().clone()));
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(WormholeCounts { r, valid, distinct: distinct.len() as u64, total: binomial(n as u64, r as u64) })
}
