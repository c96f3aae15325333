//! Weight enumeration and minimum-distance bounds.
//!
//! The information-set strategy first samples random information sets
//! (Lee-Brickell style) for a cheap upper bound, then enumerates low-weight
//! messages over a chain of column-disjoint information sets. After all
//! messages of weight at most `w` have been tried on every set, any codeword
//! not yet seen has weight at least `sum_j max(0, w + 1 - (k - r_j))`, where
//! `r_j` is the rank of set `j` on columns not covered by earlier sets.

use std::sync::atomic::{AtomicU32, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::space::{ByteSpace, Gf4Space, Space};
use super::{echelon, LinearCode, WeightDistribution};
use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::galois::FieldElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Exhaustive,
    InformationSet,
}

#[derive(Debug, Clone)]
pub struct DistanceOptions {
    pub strategy: Strategy,
    /// Maximum number of codewords to enumerate.
    pub budget: u128,
    pub seed: u64,
    /// Random information sets drawn before the deterministic phase.
    pub random_iterations: u64,
    /// Message weight enumerated on each random information set.
    pub random_weight: usize,
    /// Stop once the lower bound reaches this value.
    pub lb_goal: Option<u32>,
    /// Stop once the upper bound drops to this value.
    pub ub_goal: Option<u32>,
    /// Wall-clock deadline. A pass is skipped when the measured throughput
    /// says it would finish late, so results depend on machine speed.
    pub deadline: Option<Instant>,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions {
            strategy: Strategy::InformationSet,
            budget: 1 << 32,
            seed: 0,
            random_iterations: 64,
            random_weight: 2,
            lb_goal: None,
            ub_goal: None,
            deadline: None,
        }
    }
}

impl DistanceOptions {
    pub fn exhaustive() -> Self {
        DistanceOptions {
            strategy: Strategy::Exhaustive,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub lb: u32,
    pub ub: u32,
    pub strategy: Strategy,
    pub seed: u64,
    /// Wall-clock seconds.
    pub elapsed: f64,
    /// Stopped because the enumeration budget ran out.
    pub exhausted: bool,
    pub enumerated: u128,
    /// A codeword of weight `ub`, when one was found.
    pub witness: Option<Vec<FieldElement>>,
}

impl DistanceResult {
    pub fn exact(&self) -> Option<u32> {
        (self.lb == self.ub).then_some(self.lb)
    }
}

pub(crate) trait SpaceFn {
    type Out;
    fn run<S: Space>(self, sp: &S) -> Self::Out;
}

pub(crate) fn dispatch<F: SpaceFn>(code: &LinearCode, f: F) -> F::Out {
    let n = code.n();
    if code.q() == 2 || code.q() == 4 {
        match n.div_ceil(64) {
            0 | 1 => return f.run(&Gf4Space::<1> { n }),
            2 => return f.run(&Gf4Space::<2> { n }),
            3 | 4 => return f.run(&Gf4Space::<4> { n }),
            _ => {}
        }
    }
    f.run(&ByteSpace { n, t: code.tables() })
}

pub(crate) fn weight_distribution(code: &LinearCode, budget: u128) -> Result<WeightDistribution> {
    let size = (code.q() as u128).checked_pow(code.k() as u32);
    match size {
        Some(s) if s <= budget => {}
        _ => {
            return Err(Error::TooLarge {
                size: size.unwrap_or(u128::MAX),
                budget,
            })
        }
    }
    let counts = dispatch(code, Odometer { code, filter: None }).counts;
    Ok(WeightDistribution { counts })
}

struct Odometer<'a> {
    code: &'a LinearCode,
    filter: Option<&'a LinearCode>,
}

struct OdometerOut {
    counts: Vec<u128>,
    best: u32,
    witness: Option<Vec<u8>>,
}

impl SpaceFn for Odometer<'_> {
    type Out = OdometerOut;

    fn run<S: Space>(self, sp: &S) -> OdometerOut {
        let code = self.code;
        let t = code.tables();
        let q = code.q() as usize;
        let k = code.k();
        let n = code.n();
        let rows: Vec<S::V> = code.raw_rows().iter().map(|r| sp.pack(r)).collect();
        let parity: Vec<S::V> = self
            .filter
            .map(|s| s.parity_rows().iter().map(|r| sp.pack(r)).collect())
            .unwrap_or_default();
        // stepping digit value a -> a + 1 (mod q, as integer codes) adds delta_a * row
        let deltas: Vec<u8> = (0..q)
            .map(|a| {
                let next = (a + 1) % q;
                t.add[next * q + t.neg[a] as usize]
            })
            .collect();
        let stepped: Vec<Vec<S::V>> = rows
            .iter()
            .map(|r| deltas.iter().map(|&d| sp.scale(r, d)).collect())
            .collect();
        let mut top = 0;
        while top < k && q.pow(top as u32) < 1024 {
            top += 1;
        }
        let bottom = k - top;
        let results: Vec<OdometerOut> = (0..q.pow(top as u32))
            .into_par_iter()
            .map(|task| {
                let mut v = sp.zero();
                let mut x = task;
                for j in 0..top {
                    let d = (x % q) as u8;
                    x /= q;
                    if d != 0 {
                        sp.add_assign(&mut v, &sp.scale(&rows[bottom + j], d));
                    }
                }
                let mut counts = vec![0u128; n + 1];
                let mut best = u32::MAX;
                let mut witness = None;
                let mut digits = vec![0usize; bottom];
                loop {
                    let wt = sp.weight(&v);
                    counts[wt as usize] += 1;
                    if self.filter.is_some()
                        && wt > 0
                        && wt < best
                        && parity.iter().any(|h| !sp.orthogonal(h, &v))
                    {
                        best = wt;
                        witness = Some(sp.unpack(&v));
                    }
                    let mut i = 0;
                    loop {
                        if i == bottom {
                            return OdometerOut { counts, best, witness };
                        }
                        let a = digits[i];
                        sp.add_assign(&mut v, &stepped[i][a]);
                        digits[i] = (a + 1) % q;
                        if digits[i] != 0 {
                            break;
                        }
                        i += 1;
                    }
                }
            })
            .collect();
        let mut out = OdometerOut {
            counts: vec![0; n + 1],
            best: u32::MAX,
            witness: None,
        };
        for r in results {
            for (acc, c) in out.counts.iter_mut().zip(&r.counts) {
                *acc += c;
            }
            if r.best < out.best {
                out.best = r.best;
                out.witness = r.witness;
            }
        }
        out
    }
}

pub(crate) fn min_weight(code: &LinearCode, sub: Option<&LinearCode>, opts: &DistanceOptions) -> DistanceResult {
    let start = Instant::now();
    let n = code.n() as u32;
    let sub = sub.filter(|s| s.k() > 0);
    let sentinel = code.k() == 0 || sub.is_some_and(|s| s.k() == code.k());
    if sentinel {
        return DistanceResult {
            lb: n + 1,
            ub: n + 1,
            strategy: opts.strategy,
            seed: opts.seed,
            elapsed: start.elapsed().as_secs_f64(),
            exhausted: false,
            enumerated: 0,
            witness: None,
        };
    }
    let mut res = match opts.strategy {
        Strategy::Exhaustive => exhaustive(code, sub, opts),
        Strategy::InformationSet => dispatch(code, InfoSetSearch { code, sub, opts }),
    };
    res.elapsed = start.elapsed().as_secs_f64();
    res
}

fn exhaustive(code: &LinearCode, sub: Option<&LinearCode>, opts: &DistanceOptions) -> DistanceResult {
    let size = (code.q() as u128).checked_pow(code.k() as u32);
    let mut res = DistanceResult {
        lb: 1,
        ub: code.n() as u32 + 1,
        strategy: Strategy::Exhaustive,
        seed: opts.seed,
        elapsed: 0.0,
        exhausted: false,
        enumerated: 0,
        witness: None,
    };
    match size {
        Some(s) if s <= opts.budget => {
            let out = dispatch(
                code,
                Odometer {
                    code,
                    filter: Some(sub.unwrap_or(&LinearCode::zero(code.field().clone(), code.n()).expect("field ok"))),
                },
            );
            res.lb = out.best;
            res.ub = out.best;
            res.enumerated = s;
            res.witness = out.witness.map(to_elements);
        }
        _ => {
            // over budget: report the lightest generator row outside the subcode
            res.exhausted = true;
            for r in code.raw_rows() {
                let wt = r.iter().filter(|&&x| x != 0).count() as u32;
                if wt < res.ub && sub.is_none_or(|s| !s.contains_raw(r)) {
                    res.ub = wt;
                    res.witness = Some(to_elements(r.clone()));
                }
            }
        }
    }
    res
}

fn to_elements(v: Vec<u8>) -> Vec<FieldElement> {
    v.into_iter().map(|x| FieldElement(x as u64)).collect()
}

struct InfoSetSearch<'a> {
    code: &'a LinearCode,
    sub: Option<&'a LinearCode>,
    opts: &'a DistanceOptions,
}

struct Ctx<'a, S: Space> {
    sp: &'a S,
    scaled: &'a [Vec<S::V>],
    parity: &'a [S::V],
    shared: &'a AtomicU32,
    k: usize,
}

struct Found<V> {
    best: u32,
    witness: Option<V>,
}

impl<S: Space> Ctx<'_, S> {
    #[inline]
    fn leaf(&self, v: &S::V, local: &mut Found<S::V>) {
        let wt = self.sp.weight(v);
        if wt < local.best && wt <= self.shared.load(Ordering::Relaxed) && self.outside(v) {
            local.best = wt;
            local.witness = Some(v.clone());
            self.shared.fetch_min(wt, Ordering::Relaxed);
        }
    }

    fn outside(&self, v: &S::V) -> bool {
        self.parity.is_empty() || self.parity.iter().any(|h| !self.sp.orthogonal(h, v))
    }

    fn rec(&self, acc: &S::V, start: usize, left: usize, bufs: &mut [S::V], local: &mut Found<S::V>) {
        if left == 0 {
            self.leaf(acc, local);
            return;
        }
        let (cur, rest) = bufs.split_first_mut().expect("buffer per level");
        for i in start..=self.k - left {
            for s in &self.scaled[i] {
                self.sp.add_into(cur, acc, s);
                self.rec(cur, i + 1, left - 1, rest, local);
            }
        }
    }

    /// Every projective message of weight exactly `w`, the first nonzero
    /// coefficient fixed to one. Deterministic: ties resolve to the first
    /// word in enumeration order.
    fn enumerate(&self, w: usize) -> Found<S::V> {
        let k = self.k;
        let tasks: Vec<(usize, Option<(usize, usize)>)> = if w >= 3 {
            (0..k)
                .flat_map(|i| {
                    (i + 1..k).flat_map(move |j| (0..self.scaled[j].len()).map(move |s| (i, Some((j, s)))))
                })
                .collect()
        } else {
            (0..k).map(|i| (i, None)).collect()
        };
        let results: Vec<Found<S::V>> = tasks
            .into_par_iter()
            .map(|(i, second)| {
                let mut local = Found {
                    best: u32::MAX,
                    witness: None,
                };
                let mut bufs = vec![self.sp.zero(); w];
                let first = &self.scaled[i][0];
                match second {
                    None => self.rec(first, i + 1, w - 1, &mut bufs, &mut local),
                    Some((j, s)) => {
                        let (head, rest) = bufs.split_first_mut().expect("w >= 3");
                        self.sp.add_into(head, first, &self.scaled[j][s]);
                        self.rec(head, j + 1, w - 2, rest, &mut local);
                    }
                }
                local
            })
            .collect();
        let mut out = Found {
            best: u32::MAX,
            witness: None,
        };
        for r in results {
            if r.best < out.best {
                out = r;
            }
        }
        out
    }
}

fn count_messages(k: usize, w: usize, q: u64) -> u128 {
    if w == 0 {
        return 0;
    }
    binomial(k as u64, w as u64).saturating_mul((q as u128 - 1).saturating_pow(w as u32 - 1))
}

impl SpaceFn for InfoSetSearch<'_> {
    type Out = DistanceResult;

    fn run<S: Space>(self, sp: &S) -> DistanceResult {
        let code = self.code;
        let opts = self.opts;
        let t = code.tables();
        let n = code.n();
        let k = code.k();
        let q = code.q();
        let parity: Vec<S::V> = self
            .sub
            .map(|s| s.parity_rows().iter().map(|r| sp.pack(r)).collect())
            .unwrap_or_default();
        let scale_rows = |rows: &[Vec<u8>]| -> Vec<Vec<S::V>> {
            rows.iter()
                .map(|r| {
                    let v = sp.pack(r);
                    (1..q as u8).map(|s| sp.scale(&v, s)).collect()
                })
                .collect()
        };
        let shared = AtomicU32::new(u32::MAX);
        let mut best = u32::MAX;
        let mut witness: Option<S::V> = None;
        let mut enumerated: u128 = 0;
        let mut exhausted = false;
        let absorb = |found: Found<S::V>, best: &mut u32, witness: &mut Option<S::V>| {
            if found.best < *best {
                *best = found.best;
                *witness = found.witness;
            }
        };

        let start = Instant::now();
        let late = |enumerated: u128, cost: u128| -> bool {
            let Some(deadline) = opts.deadline else {
                return false;
            };
            let now = Instant::now();
            if now >= deadline {
                return true;
            }
            let spent = start.elapsed().as_secs_f64();
            if enumerated == 0 || spent < 1e-3 {
                return false;
            }
            cost as f64 * spent / enumerated as f64 > (deadline - now).as_secs_f64()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut order: Vec<usize> = (0..n).collect();
        'random: for _ in 0..opts.random_iterations {
            if opts.ub_goal.is_some_and(|g| best <= g) {
                break;
            }
            order.shuffle(&mut rng);
            let (rows, _) = echelon(t, code.raw_rows().to_vec(), &order);
            let scaled = scale_rows(&rows);
            let ctx = Ctx {
                sp,
                scaled: &scaled,
                parity: &parity,
                shared: &shared,
                k,
            };
            for w in 1..=opts.random_weight.min(k) {
                let cost = count_messages(k, w, q);
                if enumerated + cost > opts.budget || late(enumerated, cost) {
                    exhausted = true;
                    break 'random;
                }
                enumerated += cost;
                absorb(ctx.enumerate(w), &mut best, &mut witness);
            }
        }

        // chain of information sets, each preferring columns not yet covered
        let mut covered = vec![false; n];
        let mut chain: Vec<(Vec<Vec<S::V>>, usize)> = Vec::new();
        loop {
            let order: Vec<usize> = (0..n).filter(|&c| !covered[c]).chain((0..n).filter(|&c| covered[c])).collect();
            let (rows, pivots) = echelon(t, code.raw_rows().to_vec(), &order);
            let fresh = pivots.iter().filter(|&&c| !covered[c]).count();
            if fresh == 0 {
                break;
            }
            for &c in &pivots {
                covered[c] = true;
            }
            chain.push((scale_rows(&rows), fresh));
        }
        let contribution = |w: usize, r: usize| (w + 1).saturating_sub(k - r) as u32;
        let mut lb = chain.iter().map(|&(_, r)| contribution(0, r)).sum::<u32>().max(1);
        let done = |lb: u32, best: u32| best <= lb || opts.lb_goal.is_some_and(|g| lb >= g);
        if !exhausted && !done(lb, best) {
            'outer: for w in 1..=k {
                for j in 0..chain.len() {
                    let (ref scaled, r) = chain[j];
                    if contribution(w, r) == 0 {
                        continue;
                    }
                    let cost = count_messages(k, w, q);
                    if enumerated + cost > opts.budget || late(enumerated, cost) {
                        exhausted = true;
                        break 'outer;
                    }
                    enumerated += cost;
                    let ctx = Ctx {
                        sp,
                        scaled,
                        parity: &parity,
                        shared: &shared,
                        k,
                    };
                    absorb(ctx.enumerate(w), &mut best, &mut witness);
                    lb = chain
                        .iter()
                        .enumerate()
                        .map(|(i, &(_, ri))| if i <= j { contribution(w, ri) } else { contribution(w - 1, ri) })
                        .sum::<u32>()
                        .max(lb);
                    if done(lb, best) {
                        break 'outer;
                    }
                }
            }
        }
        let ub = best.min(n as u32 + 1);
        DistanceResult {
            lb: lb.min(ub),
            ub,
            strategy: Strategy::InformationSet,
            seed: opts.seed,
            elapsed: 0.0,
            exhausted,
            enumerated,
            witness: witness.map(|v| to_elements(sp.unpack(&v))),
        }
    }
}
