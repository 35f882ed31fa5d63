//! Reference counters: exhaustive enumeration, meet in the middle and a
//! target-indexed dynamic program, plus unique-sum statistics and the
//! differential harness that compares them with the pipeline.

use crate::error::{Error, Result};
use crate::ihm::{self, SolveOptions};
use crate::instance::{random_in_1_to, Family, Instance};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::ops::Add;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Enum,
    Mitm,
    Dp,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Enum => "enum",
            Method::Mitm => "mitm",
            Method::Dp => "dp",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub method: Method,
    pub count: BigUint,
    /// Some solution indices, bits in user order.
    pub sample: Vec<BigUint>,
    pub millis: u128,
}

/// Number of indices kept in a report sample.
pub const SAMPLE_CAP: usize = 1000;

/// Counts by walking all `2^n` subsets in Gray-code order.
pub fn count_enum(inst: &Instance) -> Result<OracleReport> {
    let n = inst.n();
    if n > 28 {
        return Err(Error::Guard("count_enum needs n <= 28".into()));
    }
    let t0 = Instant::now();
    let (count, sample) = if let (Some(a), Some(t)) = (inst.a_u64(), inst.target().to_u64()) {
        if inst.total().bits() < 64 {
            gray_count(&a, t, n)
        } else {
            let a: Vec<BigUint> = inst.a().to_vec();
            gray_count(&a, inst.target().clone(), n)
        }
    } else {
        let a: Vec<BigUint> = inst.a().to_vec();
        gray_count(&a, inst.target().clone(), n)
    };
    let sample = sample.iter().map(|&r| inst.to_user_index(&BigUint::from(r))).collect();
    Ok(OracleReport { method: Method::Enum, count: BigUint::from(count), sample, millis: t0.elapsed().as_millis() })
}

trait Sum: Clone + Ord + Zero + Add<Output = Self> + std::ops::Sub<Output = Self> {}
impl<T: Clone + Ord + Zero + Add<Output = T> + std::ops::Sub<Output = T>> Sum for T {}

fn gray_count<T: Sum>(a: &[T], t: T, n: usize) -> (u64, Vec<u64>) {
    let mut s = T::zero();
    let mut mask = 0u64;
    let mut count = 0u64;
    let mut sample = Vec::new();
    for i in 1u64..(1u64 << n) {
        let b = i.trailing_zeros() as usize;
        mask ^= 1 << b;
        if mask >> b & 1 == 1 {
            s = s + a[b].clone();
        } else {
            s = s - a[b].clone();
        }
        if s == t {
            count += 1;
            if sample.len() < SAMPLE_CAP {
                sample.push(mask);
            }
        }
    }
    (count, sample)
}

/// All subset sums of `a` with their masks, sorted by sum, built by merging.
fn sorted_sums<T: Sum>(a: &[T]) -> Vec<(T, u64)> {
    let mut cur: Vec<(T, u64)> = vec![(T::zero(), 0)];
    for (i, v) in a.iter().enumerate() {
        let mut out = Vec::with_capacity(cur.len() * 2);
        let (mut p, mut q) = (0usize, 0usize);
        while p < cur.len() || q < cur.len() {
            let take_left = q == cur.len() || (p < cur.len() && cur[p].0 <= cur[q].0.clone() + v.clone());
            if take_left {
                out.push(cur[p].clone());
                p += 1;
            } else {
                out.push((cur[q].0.clone() + v.clone(), cur[q].1 | 1 << i));
                q += 1;
            }
        }
        cur = out;
    }
    cur
}

fn mitm_count<T: Sum>(a: &[T], t: &T) -> (BigUint, Vec<u64>) {
    let h = a.len() / 2;
    let left = sorted_sums(&a[..h]);
    let right = sorted_sums(&a[h..]);
    let mut count = BigUint::zero();
    let mut sample = Vec::new();
    let (mut i, mut j) = (0usize, right.len());
    while i < left.len() && j > 0 {
        let s = left[i].0.clone() + right[j - 1].0.clone();
        if &s < t {
            i += 1;
        } else if &s > t {
            j -= 1;
        } else {
            let (lv, rv) = (left[i].0.clone(), right[j - 1].0.clone());
            let i0 = i;
            while i < left.len() && left[i].0 == lv {
                i += 1;
            }
            let j0 = j;
            while j > 0 && right[j - 1].0 == rv {
                j -= 1;
            }
            count += BigUint::from((i - i0) as u64) * BigUint::from((j0 - j) as u64);
            'outer: for l in &left[i0..i] {
                for r in &right[j..j0] {
                    if sample.len() >= SAMPLE_CAP {
                        break 'outer;
                    }
                    sample.push(l.1 | r.1 << h);
                }
            }
        }
    }
    (count, sample)
}

/// Counts by splitting the elements in two halves, sorting each half's
/// subset sums and sweeping the two lists against each other; runs of equal
/// sums are multiplied rather than paired.
pub fn count_mitm(inst: &Instance) -> Result<OracleReport> {
    if inst.n() > 44 {
        return Err(Error::Guard("count_mitm needs n <= 44".into()));
    }
    let t0 = Instant::now();
    let (count, sample) = if inst.total().bits() < 127 {
        let a: Vec<u128> = inst.a().iter().map(|v| v.to_u128().unwrap()).collect();
        mitm_count(&a, &inst.target().to_u128().unwrap())
    } else {
        mitm_count(inst.a(), inst.target())
    };
    let sample = sample.iter().map(|&r| inst.to_user_index(&BigUint::from(r))).collect();
    Ok(OracleReport { method: Method::Mitm, count, sample, millis: t0.elapsed().as_millis() })
}

/// Largest target accepted by [`count_dp`].
pub const DP_TARGET_MAX: u64 = 100_000_000;

/// Counts with the recurrence `c[s] += c[s - a_i]`, one rolling row indexed
/// `0..=T`. Cells start as `u64` and are widened on overflow.
pub fn count_dp(inst: &Instance) -> Result<OracleReport> {
    let t = inst
        .target()
        .to_u64()
        .filter(|&t| t <= DP_TARGET_MAX)
        .ok_or_else(|| Error::Guard(format!("count_dp needs T <= {DP_TARGET_MAX}")))? as usize;
    let t0 = Instant::now();
    let a: Vec<usize> = inst.a().iter().map(|v| v.to_usize().unwrap_or(usize::MAX)).collect();
    let count = if let Some(c) = dp_counts::<u64>(&a, t, |x, y| x.checked_add(*y)) {
        BigUint::from(c)
    } else if let Some(c) = dp_counts::<u128>(&a, t, |x, y| x.checked_add(*y)) {
        BigUint::from(c)
    } else {
        dp_counts::<BigUint>(&a, t, |x, y| Some(x + y)).unwrap()
    };
    Ok(OracleReport { method: Method::Dp, count, sample: Vec::new(), millis: t0.elapsed().as_millis() })
}

fn dp_counts<C: Clone + Zero + One>(a: &[usize], t: usize, add: impl Fn(&C, &C) -> Option<C>) -> Option<C> {
    let mut row = vec![C::zero(); t + 1];
    row[0] = C::one();
    for &v in a {
        if v > t {
            continue;
        }
        for s in (v..=t).rev() {
            if !row[s - v].is_zero() {
                row[s] = add(&row[s], &row[s - v])?;
            }
        }
    }
    Some(row[t].clone())
}

/// Counts subsets of an arithmetic progression `a_i = c + (i - 1) d` with sum `t`.
/// A subset of size `s` sums to `s c + d q` where `q` is a sum of `s`
/// distinct parts from `0..n`, so the count is a size-indexed partition DP.
pub fn count_affine(n: usize, c: &BigUint, d: &BigUint, t: &BigUint) -> BigUint {
    let qmax = n * n.saturating_sub(1) / 2;
    // table[s][q]: subsets of {0..i} of size s with part sum q
    let mut table = vec![vec![BigUint::zero(); qmax + 1]; n + 1];
    table[0][0] = BigUint::one();
    for part in 0..n {
        for s in (1..=part + 1).rev() {
            for q in (part..=qmax).rev() {
                if !table[s - 1][q - part].is_zero() {
                    let add = table[s - 1][q - part].clone();
                    table[s][q] += add;
                }
            }
        }
    }
    let mut total = BigUint::zero();
    for s in 0..=n {
        let sc = c * BigUint::from(s);
        if &sc > t {
            continue;
        }
        let rest = t - &sc;
        let q = if d.is_zero() {
            if rest.is_zero() {
                // every subset of size s qualifies
                total += table[s].iter().sum::<BigUint>();
            }
            continue;
        } else {
            if !(&rest % d).is_zero() {
                continue;
            }
            &rest / d
        };
        if let Some(q) = q.to_usize().filter(|&q| q <= qmax) {
            total += &table[s][q];
        }
    }
    total
}

/// Unique subset sums `U`, the largest bin `N_LO`, and the bins `(sum, size)`.
#[derive(Clone, Debug, Serialize)]
pub struct UniqueSums {
    pub u: u64,
    pub n_lo: BigUint,
    pub bins: Vec<(BigUint, BigUint)>,
}

/// Largest `A_n` tabulated by [`unique_sum_stats`].
pub const STATS_TABLE_MAX: u64 = 5_000_000;

pub fn unique_sum_stats(inst: &Instance) -> Result<UniqueSums> {
    let total = inst.total().to_u64().filter(|&v| v <= STATS_TABLE_MAX);
    let bins: Vec<(BigUint, BigUint)> = if let Some(total) = total {
        let mut row = vec![BigUint::zero(); total as usize + 1];
        row[0] = BigUint::one();
        let mut reach = 0usize;
        for v in inst.a() {
            let v = v.to_usize().unwrap();
            for s in (0..=reach).rev() {
                if !row[s].is_zero() {
                    let add = row[s].clone();
                    row[s + v] += add;
                }
            }
            reach += v;
        }
        row.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(s, c)| (BigUint::from(s), c)).collect()
    } else if inst.n() <= 28 {
        let sums: Vec<(BigUint, u64)> = if inst.total().bits() < 127 {
            let a: Vec<u128> = inst.a().iter().map(|v| v.to_u128().unwrap()).collect();
            sorted_sums(&a).into_iter().map(|(s, m)| (BigUint::from(s), m)).collect()
        } else {
            sorted_sums(inst.a())
        };
        let mut bins: Vec<(BigUint, BigUint)> = Vec::new();
        for (s, _) in sums {
            match bins.last_mut() {
                Some((v, c)) if *v == s => *c += 1u32,
                _ => bins.push((s, BigUint::one())),
            }
        }
        bins
    } else {
        return Err(Error::Guard(format!("unique_sum_stats needs n <= 28 or A_n <= {STATS_TABLE_MAX}")));
    };
    let n_lo = bins.iter().map(|(_, c)| c.clone()).max().unwrap_or_default();
    Ok(UniqueSums { u: bins.len() as u64, n_lo, bins })
}

/// Picks the cheapest applicable oracle: enumeration up to `enum_max`
/// elements, then the DP when `T` is small, then meet in the middle.
pub fn auto_oracle(inst: &Instance, enum_max: usize) -> Result<OracleReport> {
    if inst.n() <= enum_max {
        count_enum(inst)
    } else if inst.target().to_u64().is_some_and(|t| t <= 10_000_000) {
        count_dp(inst)
    } else {
        count_mitm(inst)
    }
}

/// One differential trial.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub family: String,
    pub n: usize,
    pub m: u32,
    pub ihm_count: BigUint,
    pub oracle_count: BigUint,
    pub agree: bool,
    pub eta_peak: f64,
    pub k_peak: usize,
    pub ihm_ms: u128,
    pub oracle_ms: u128,
    /// Indices emitted by the pipeline that do not sum to `T`.
    pub unsound: usize,
    /// The final graph failed a structural check (description).
    pub structure: Option<String>,
    pub instance: serde_json::Value,
}

/// Bench CSV header.
pub const BENCH_HEADER: &str = "trial,family,n,m,ihm_count,oracle_count,agree,eta_peak,k_peak,ihm_ms,oracle_ms";

impl TrialRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6},{},{},{}",
            self.trial,
            self.family,
            self.n,
            self.m,
            self.ihm_count,
            self.oracle_count,
            self.agree,
            self.eta_peak,
            self.k_peak,
            self.ihm_ms,
            self.oracle_ms
        )
    }
}

/// Parameters of a differential run.
#[derive(Clone, Debug)]
pub struct DiffConfig {
    pub families: Vec<String>,
    pub trials: usize,
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub m_max: u32,
    /// Largest `n` sent to exhaustive enumeration.
    pub enum_max: usize,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            families: vec!["random".into()],
            trials: 100,
            seed: 1,
            n_min: 1,
            n_max: 20,
            m_max: 16,
            enum_max: 24,
        }
    }
}

/// Draws a trial instance: family parameters from the trial's own stream, `T` uniform in `[1, A_n]`.
pub fn trial_instance(family: &str, rng: &mut ChaCha8Rng, cfg: &DiffConfig) -> Result<Instance> {
    let n = rng.gen_range(cfg.n_min..=cfg.n_max);
    let small = |rng: &mut ChaCha8Rng, bits: u32| BigUint::from(rng.gen_range(1u64..(1u64 << bits.min(20))));
    let fam = match family {
        "random" => Family::Random { n, m: rng.gen_range(1..=cfg.m_max), seed: rng.gen() },
        "cp" => Family::Cp { n, k1: small(rng, cfg.m_max) },
        "ap" => Family::Ap { n, k1: small(rng, cfg.m_max / 2), k2: small(rng, cfg.m_max / 2) },
        "gp" => {
            let n = n.min(12);
            Family::Gp { n, k1: small(rng, 4), r: BigUint::from(rng.gen_range(2u32..4)) }
        }
        "dissociated" => Family::Dissociated { n },
        other => return Err(Error::InvalidParam(format!("unknown family {other}"))),
    };
    let a = fam.sequence()?;
    let total: BigUint = a.iter().sum();
    let t = random_in_1_to(rng, &total);
    Instance::new(a, t, None)
}

/// Runs the pipeline and an oracle on each trial, in parallel.
pub fn differential_report(cfg: &DiffConfig) -> Result<Vec<TrialRecord>> {
    if cfg.families.is_empty() || cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(Error::InvalidParam("bad differential configuration".into()));
    }
    let recs: Vec<Result<TrialRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let family = &cfg.families[trial % cfg.families.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(trial as u64));
            let inst = trial_instance(family, &mut rng, cfg)?;
            run_trial(trial, family, &inst, cfg.enum_max)
        })
        .collect();
    recs.into_iter().collect()
}

/// One pipeline-versus-oracle comparison.
pub fn run_trial(trial: usize, family: &str, inst: &Instance, enum_max: usize) -> Result<TrialRecord> {
    let opts = SolveOptions { indices_cap: 10_000, ..SolveOptions::default() };
    let t0 = Instant::now();
    let (sol, structure) = if inst.fits_i128() {
        let g = ihm::reachable_graph::<i128>(inst, opts.policy)?;
        let run = ihm::ihm_run(g, &opts);
        let structure = run.solution.graph.as_ref().and_then(|g| ihm::check_final_graph(g).err());
        let ex = ihm::extract_indices(&run.solution, opts.indices_cap);
        ((run.solution.count, ex.indices, run.metrics), structure)
    } else {
        let s = ihm::solve(inst, &opts)?;
        let idx = s.indices.iter().map(|r| inst.from_user_index(r).unwrap()).collect();
        ((s.count, idx, s.metrics), None)
    };
    let ihm_ms = t0.elapsed().as_millis();
    let unsound = sol.1.iter().filter(|r| inst.sigma(r).ok().as_ref() != Some(inst.target())).count();
    let oracle = auto_oracle(inst, enum_max)?;
    Ok(TrialRecord {
        trial,
        family: family.to_string(),
        n: inst.n(),
        m: inst.m(),
        agree: sol.0 == oracle.count,
        ihm_count: sol.0,
        oracle_count: oracle.count,
        eta_peak: sol.2.eta_peak,
        k_peak: sol.2.k_peak,
        ihm_ms,
        oracle_ms: oracle.millis,
        unsound,
        structure,
        instance: inst.to_json(),
    })
}
