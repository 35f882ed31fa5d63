//! Instances, subset sums, prefix quantities, links and generators.

use crate::error::{Error, Result};
use crate::scalar::{fits_i128, Scalar};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// A point of the power set: an index and its subset sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: BigUint,
    pub y: BigUint,
}

/// Prefix sums `A_k = a_1 + ... + a_k` and `B_k = 2^k - 1`, both indexed `0..=n`.
#[derive(Clone, Debug)]
pub struct PrefixSums {
    pub a: Vec<BigUint>,
    pub b: Vec<BigUint>,
}

/// The difference links `d_j = (b_j - b_{j-1}, a_j - a_{j-1})` with `a_0 = b_0 = 0`,
/// where `b_j = 2^{j-1}` is the index of the singleton `{j}`.
#[derive(Clone, Debug)]
pub struct LinkSet {
    pub d: Vec<(BigUint, BigUint)>,
}

/// A validated subset-sum instance with `a` sorted non-decreasing.
#[derive(Clone, Debug)]
pub struct Instance {
    a: Vec<BigUint>,
    target: BigUint,
    m: u32,
    /// `order[j]` is the user position of sorted element `j`.
    order: Vec<usize>,
    prefix: PrefixSums,
}

impl Instance {
    /// Validates and sorts. `m` is raised to the bit length of the largest element.
    pub fn new(a: Vec<BigUint>, target: BigUint, m: Option<u32>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Parse("empty sequence".into()));
        }
        if a.iter().any(|v| v.is_zero()) {
            return Err(Error::Parse("elements must be positive".into()));
        }
        let mut order: Vec<usize> = (0..a.len()).collect();
        order.sort_by(|&i, &j| a[i].cmp(&a[j]).then(i.cmp(&j)));
        let a: Vec<BigUint> = order.iter().map(|&i| a[i].clone()).collect();
        let mut pa = vec![BigUint::zero()];
        for v in &a {
            let next = pa.last().unwrap() + v;
            pa.push(next);
        }
        if target.is_zero() || &target > pa.last().unwrap() {
            return Err(Error::OutOfRange("target".into()));
        }
        let pb = (0..=a.len())
            .map(|k| (BigUint::one() << k) - 1u32)
            .collect();
        let bits = a.last().unwrap().bits() as u32;
        let m = m.unwrap_or(0).max(bits);
        Ok(Instance { a, target, m, order, prefix: PrefixSums { a: pa, b: pb } })
    }

    /// Convenience constructor for small values.
    pub fn from_u64(a: &[u64], target: u64) -> Result<Self> {
        Self::new(a.iter().map(|&v| BigUint::from(v)).collect(), BigUint::from(target), None)
    }

    /// Same sequence, different target.
    pub fn with_target(&self, target: BigUint) -> Result<Self> {
        if target.is_zero() || &target > self.total() {
            return Err(Error::OutOfRange("target".into()));
        }
        let mut out = self.clone();
        out.target = target;
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }
    /// Sorted elements.
    pub fn a(&self) -> &[BigUint] {
        &self.a
    }
    pub fn target(&self) -> &BigUint {
        &self.target
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// `A_n`.
    pub fn total(&self) -> &BigUint {
        self.prefix.a.last().unwrap()
    }
    pub fn prefix(&self) -> &PrefixSums {
        &self.prefix
    }
    /// User position of each sorted element.
    pub fn order(&self) -> &[usize] {
        &self.order
    }
    /// Elements in the order they were supplied.
    pub fn user_a(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); self.n()];
        for (j, &p) in self.order.iter().enumerate() {
            out[p] = self.a[j].clone();
        }
        out
    }

    pub fn links(&self) -> LinkSet {
        let mut d = Vec::with_capacity(self.n());
        for j in 0..self.n() {
            let dx = if j == 0 { BigUint::one() } else { BigUint::one() << (j - 1) };
            let dy = if j == 0 { self.a[0].clone() } else { &self.a[j] - &self.a[j - 1] };
            d.push((dx, dy));
        }
        LinkSet { d }
    }

    /// Subset sum of a sorted-order index: bit `j - 1` selects `a_j`.
    pub fn sigma(&self, r: &BigUint) -> Result<BigUint> {
        if r.bits() > self.n() as u64 {
            return Err(Error::OutOfRange("index".into()));
        }
        let mut s = BigUint::zero();
        for j in 0..self.n() {
            if r.bit(j as u64) {
                s += &self.a[j];
            }
        }
        Ok(s)
    }

    /// Subset sum of an index whose bits refer to user order.
    pub fn sigma_user(&self, r: &BigUint) -> Result<BigUint> {
        self.sigma(&self.from_user_index(r)?)
    }

    /// Maps a sorted-order index to user order.
    pub fn to_user_index(&self, r: &BigUint) -> BigUint {
        let mut out = BigUint::zero();
        for (j, &p) in self.order.iter().enumerate() {
            if r.bit(j as u64) {
                out.set_bit(p as u64, true);
            }
        }
        out
    }

    /// Maps a user-order index to sorted order.
    pub fn from_user_index(&self, r: &BigUint) -> Result<BigUint> {
        if r.bits() > self.n() as u64 {
            return Err(Error::OutOfRange("index".into()));
        }
        let mut out = BigUint::zero();
        for (j, &p) in self.order.iter().enumerate() {
            if r.bit(p as u64) {
                out.set_bit(j as u64, true);
            }
        }
        Ok(out)
    }

    /// True when every sum and index of the engine fits the `i128` backend.
    pub fn fits_i128(&self) -> bool {
        fits_i128(self.n(), self.total().bits())
    }

    /// Elements converted to a scalar backend.
    pub fn a_as<S: Scalar>(&self) -> Option<Vec<S>> {
        self.a.iter().map(|v| S::from_bigint(&BigInt::from(v.clone()))).collect()
    }

    /// Elements as `u64`, when they all fit.
    pub fn a_u64(&self) -> Option<Vec<u64>> {
        self.a.iter().map(|v| v.to_u64()).collect()
    }

    /// JSON instance form, values as decimal strings, in user order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n(),
            "m": self.m,
            "a": self.user_a().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "T": self.target.to_string(),
        })
    }

    /// Plain-text instance form, in user order.
    pub fn to_text(&self) -> String {
        let a: Vec<String> = self.user_a().iter().map(|v| v.to_string()).collect();
        format!("{} {}\n{}\n{}\n", self.n(), self.m, a.join(" "), self.target)
    }
}

fn parse_big(s: &str) -> Result<BigUint> {
    let s = s.trim();
    if s.starts_with('-') {
        return Err(Error::Parse(format!("negative value {s}")));
    }
    BigUint::from_str(s).map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

fn json_big(v: &serde_json::Value) -> Result<BigUint> {
    match v {
        serde_json::Value::String(s) => parse_big(s),
        serde_json::Value::Number(n) => parse_big(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a number, got {v}"))),
    }
}

/// Parses either instance file form: a JSON object `{"n","m"?,"a","T"}` or
/// three text lines `n [m]`, the elements, and `T`.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        let a = v
            .get("a")
            .and_then(|a| a.as_array())
            .ok_or_else(|| Error::Parse("missing array a".into()))?
            .iter()
            .map(json_big)
            .collect::<Result<Vec<_>>>()?;
        let t = json_big(v.get("T").ok_or_else(|| Error::Parse("missing T".into()))?)?;
        if let Some(n) = v.get("n") {
            let n = n.as_u64().ok_or_else(|| Error::Parse("bad n".into()))?;
            if n as usize != a.len() {
                return Err(Error::Parse(format!("n = {n} but {} elements", a.len())));
            }
        }
        let m = match v.get("m") {
            Some(m) => Some(m.as_u64().ok_or_else(|| Error::Parse("bad m".into()))? as u32),
            None => None,
        };
        return Instance::new(a, t, m);
    }
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if lines.len() != 3 {
        return Err(Error::Parse(format!("expected 3 lines, found {}", lines.len())));
    }
    let head: Vec<&str> = lines[0].split_whitespace().collect();
    if head.is_empty() || head.len() > 2 {
        return Err(Error::Parse("first line must be `n [m]`".into()));
    }
    let n: usize = head[0].parse().map_err(|_| Error::Parse(format!("bad n {:?}", head[0])))?;
    let m = match head.get(1) {
        Some(s) => Some(s.parse::<u32>().map_err(|_| Error::Parse(format!("bad m {s:?}")))?),
        None => None,
    };
    let a = lines[1].split_whitespace().map(parse_big).collect::<Result<Vec<_>>>()?;
    if a.len() != n {
        return Err(Error::Parse(format!("n = {n} but {} elements", a.len())));
    }
    Instance::new(a, parse_big(lines[2])?, m)
}

/// Instance families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `a_i = k1`.
    Cp { n: usize, k1: BigUint },
    /// `a_i = k1 + (i - 1) k2`.
    Ap { n: usize, k1: BigUint, k2: BigUint },
    /// `a_i = k1 r^{i-1}`.
    Gp { n: usize, k1: BigUint, r: BigUint },
    /// `a_i` uniform in `[1, 2^m - 1]`.
    Random { n: usize, m: u32, seed: u64 },
    /// `a_i = 2^{i-1}`.
    Dissociated { n: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Cp { .. } => "cp",
            Family::Ap { .. } => "ap",
            Family::Gp { .. } => "gp",
            Family::Random { .. } => "random",
            Family::Dissociated { .. } => "dissociated",
        }
    }

    /// The element sequence of the family.
    pub fn sequence(&self) -> Result<Vec<BigUint>> {
        let n = match self {
            Family::Cp { n, .. }
            | Family::Ap { n, .. }
            | Family::Gp { n, .. }
            | Family::Random { n, .. }
            | Family::Dissociated { n } => *n,
        };
        if n == 0 {
            return Err(Error::InvalidParam("n must be at least 1".into()));
        }
        Ok(match self {
            Family::Cp { k1, .. } => {
                if k1.is_zero() {
                    return Err(Error::InvalidParam("k1 must be positive".into()));
                }
                vec![k1.clone(); n]
            }
            Family::Ap { k1, k2, .. } => {
                if k1.is_zero() {
                    return Err(Error::InvalidParam("k1 must be positive".into()));
                }
                (0..n).map(|i| k1 + k2 * BigUint::from(i)).collect()
            }
            Family::Gp { k1, r, .. } => {
                if k1.is_zero() {
                    return Err(Error::InvalidParam("k1 must be positive".into()));
                }
                if r <= &BigUint::one() {
                    return Err(Error::InvalidParam("ratio must exceed 1".into()));
                }
                let mut v = k1.clone();
                let mut out = Vec::with_capacity(n);
                for _ in 0..n {
                    out.push(v.clone());
                    v *= r;
                }
                out
            }
            Family::Random { m, seed, .. } => {
                if *m == 0 {
                    return Err(Error::InvalidParam("m must be positive".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..n).map(|_| random_below_pow2(&mut rng, *m)).collect()
            }
            Family::Dissociated { .. } => (0..n).map(|i| BigUint::one() << i).collect(),
        })
    }

    /// Builds an instance; the default target is `max(1, floor(A_n / 2))`.
    pub fn generate(&self, target: Option<BigUint>) -> Result<Instance> {
        let a = self.sequence()?;
        let t = match target {
            Some(t) => t,
            None => {
                let total: BigUint = a.iter().sum();
                (total >> 1u32).max(BigUint::one())
            }
        };
        let m = match self {
            Family::Random { m, .. } => Some(*m),
            _ => None,
        };
        Instance::new(a, t, m)
    }
}

/// Uniform value in `[1, 2^m - 1]`.
pub(crate) fn random_below_pow2<R: Rng>(rng: &mut R, m: u32) -> BigUint {
    if m == 1 {
        return BigUint::one();
    }
    loop {
        let words = m.div_ceil(32) as usize;
        let mut digits: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
        let spare = words as u32 * 32 - m;
        if spare > 0 {
            *digits.last_mut().unwrap() >>= spare;
        }
        let v = BigUint::from_slice(&digits);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Uniform value in `[1, hi]`.
pub(crate) fn random_in_1_to<R: Rng>(rng: &mut R, hi: &BigUint) -> BigUint {
    if let Some(h) = hi.to_u128() {
        return BigUint::from(rng.gen_range(1..=h));
    }
    let bits = hi.bits() as u32;
    loop {
        let v = random_below_pow2(rng, bits);
        if &v <= hi {
            return v;
        }
    }
}

/// Builds an instance from a family. See [`Family::generate`].
pub fn generate(kind: &Family, target: Option<BigUint>) -> Result<Instance> {
    kind.generate(target)
}

/// True iff all `2^n` subset sums are distinct.
///
/// Two distinct subsets have equal sums exactly when some nonzero vector
/// `e` in `{-1, 0, 1}^n` has `sum e_i a_i = 0`. Both halves of the vector
/// are enumerated and matched, `3^{n/2}` values per side.
pub fn is_dissociated(inst: &Instance) -> Result<bool> {
    if inst.n() > 30 {
        return Err(Error::Guard("is_dissociated needs n <= 30".into()));
    }
    if inst.a().windows(2).any(|w| w[0] == w[1]) {
        return Ok(false);
    }
    if inst.fits_i128() {
        Ok(signed_zero_pairs::<i128>(&inst.a_as().unwrap()) == 1)
    } else {
        Ok(signed_zero_pairs::<BigInt>(&inst.a_as().unwrap()) == 1)
    }
}

fn signed_sums<S: Scalar>(vals: &[S]) -> Vec<S> {
    let mut out = vec![S::zero()];
    for v in vals {
        let mut next = Vec::with_capacity(out.len() * 3);
        for s in &out {
            next.push(s.clone() - v.clone());
            next.push(s.clone());
            next.push(s.clone() + v.clone());
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// Number of signed vectors (including the zero vector) with zero sum, capped at 2.
fn signed_zero_pairs<S: Scalar>(a: &[S]) -> u64 {
    let h = a.len() / 2;
    let left = signed_sums(&a[..h]);
    let mut right = signed_sums(&a[h..]);
    for v in right.iter_mut() {
        *v = -v.clone();
    }
    right.sort_unstable();
    let (mut i, mut j, mut found) = (0usize, 0usize, 0u64);
    while i < left.len() && j < right.len() {
        match left[i].cmp(&right[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let v = left[i].clone();
                let i0 = i;
                while i < left.len() && left[i] == v {
                    i += 1;
                }
                let j0 = j;
                while j < right.len() && right[j] == v {
                    j += 1;
                }
                found += ((i - i0) * (j - j0)) as u64;
                if found > 1 {
                    return found;
                }
            }
        }
    }
    found
}
