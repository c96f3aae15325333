//! Enumeration of defining sets with equivalence-based pruning.
//!
//! Defining sets are grouped into orbits under verified equivalence moves.
//! Only orbit representatives get a distance evaluation; every other member
//! points back to its representative through a chain of certificates.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::certificate::{weight_distributions_agree, CertificateKind};
use crate::constacyclic::ConstaContext;
use crate::cosets::{mul_mod, shift_divisibility_constacyclic, shift_divisibility_cyclic, DefiningSet};
use crate::cyclic::{CyclicContext, UnionFind};
use crate::error::{Error, Result};
use crate::linear::{DistanceOptions, LinearCode, MonomialTransform};
use crate::quantum::{nearly_self_orthogonal, QuantumParameters};

pub const RECORD_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cyclic,
    Constacyclic,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(Family::Cyclic),
            "constacyclic" | "consta" => Ok(Family::Constacyclic),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Which moves may merge defining sets into one orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prune {
    pub multiplier: bool,
    pub affine: bool,
    pub structural: bool,
}

impl Prune {
    pub const ALL: Prune = Prune {
        multiplier: true,
        affine: true,
        structural: true,
    };
    pub const NONE: Prune = Prune {
        multiplier: false,
        affine: false,
        structural: false,
    };
}

/// Best known minimum distances keyed by (n, k, q).
#[derive(Debug, Clone, Default)]
pub struct Targets(BTreeMap<(u64, usize, u64), u32>);

impl Targets {
    /// Rows `n,k,q,d`; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Targets> {
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("line {}: expected n,k,q,d, got {line:?}", lineno + 1));
            if fields.len() != 4 {
                return Err(bad());
            }
            let n = fields[0].parse().map_err(|_| bad())?;
            let k = fields[1].parse().map_err(|_| bad())?;
            let q = fields[2].parse().map_err(|_| bad())?;
            let d = fields[3].parse().map_err(|_| bad())?;
            map.insert((n, k, q), d);
        }
        Ok(Targets(map))
    }

    pub fn get(&self, n: u64, k: usize, q: u64) -> Option<u32> {
        self.0.get(&(n, k, q)).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SearchJob {
    pub family: Family,
    pub n: u64,
    pub q: u64,
    pub k_min: usize,
    pub k_max: usize,
    pub distance: DistanceOptions,
    /// Wall-clock allowance per evaluated code, on top of the codeword budget.
    pub time_per_code: Option<std::time::Duration>,
    pub prune: Prune,
    pub targets: Targets,
    /// Run the nearly self-orthogonal construction on each representative (GF(4) only).
    pub quantum: bool,
    /// Skip distance evaluation; records carry orbit data only.
    pub orbits_only: bool,
    /// Check every member's certificate chain by code equality.
    pub verify_members: bool,
    /// Add wall-clock seconds to evaluated records; output is then no longer
    /// reproducible byte for byte.
    pub timing: bool,
}

impl SearchJob {
    pub fn new(family: Family, n: u64, q: u64) -> SearchJob {
        SearchJob {
            family,
            n,
            q,
            k_min: 0,
            k_max: n as usize,
            distance: DistanceOptions {
                budget: 1 << 24,
                ..Default::default()
            },
            time_per_code: None,
            prune: Prune::ALL,
            targets: Targets::default(),
            quantum: false,
            orbits_only: false,
            verify_members: true,
            timing: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || gcd(self.n, self.q) != 1 {
            return Err(Error::NotCoprime { n: self.n, q: self.q });
        }
        if self.family == Family::Constacyclic && (self.q != 4 || self.n.is_multiple_of(2)) {
            return Err(Error::InvalidArgument("constacyclic search needs q = 4 and odd n".into()));
        }
        if self.k_min > self.k_max {
            return Err(Error::InvalidArgument(format!("empty dimension window [{}, {}]", self.k_min, self.k_max)));
        }
        Ok(())
    }
}

/// One step from a set to a neighbour in its orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    #[serde(flatten)]
    pub kind: CertificateKind,
    #[serde(skip)]
    transform: Option<MonomialTransform>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitMember {
    pub set: usize,
    /// Steps from the representative to this member.
    pub chain: Vec<Step>,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub id: usize,
    /// Index of the representative; members[0] is the representative.
    pub representative: usize,
    pub members: Vec<OrbitMember>,
    /// Orbits related by parameter-preserving maps that are not known
    /// equivalences share a group and one distance evaluation.
    pub parameter_group: usize,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

enum Ctx {
    Cyclic(Arc<CyclicContext>),
    Consta(Arc<ConstaContext>),
}

impl Ctx {
    fn new(job: &SearchJob) -> Result<Ctx> {
        Ok(match job.family {
            Family::Cyclic => Ctx::Cyclic(CyclicContext::new(job.n, job.q)?),
            Family::Constacyclic => Ctx::Consta(ConstaContext::new(job.n)?),
        })
    }

    fn modulus(&self) -> u64 {
        match self {
            Ctx::Cyclic(c) => c.n(),
            Ctx::Consta(c) => 3 * c.n(),
        }
    }

    fn all_sets(&self) -> Vec<DefiningSet> {
        match self {
            Ctx::Cyclic(c) => c.all_defining_sets(),
            Ctx::Consta(c) => c.all_defining_sets(),
        }
    }

    fn build(&self, a: &DefiningSet) -> Result<LinearCode> {
        Ok(match self {
            Ctx::Cyclic(c) => c.build(a)?.code().clone(),
            Ctx::Consta(c) => c.build(a)?.code().clone(),
        })
    }

    fn field(&self) -> Arc<crate::GaloisField> {
        match self {
            Ctx::Cyclic(c) => c.field().clone(),
            Ctx::Consta(c) => c.field().clone(),
        }
    }

    fn multipliers(&self) -> Vec<u64> {
        let m = self.modulus();
        match self {
            Ctx::Cyclic(_) if m == 1 => vec![0],
            Ctx::Cyclic(_) => (1..m).filter(|&e| gcd(e, m) == 1).collect(),
            Ctx::Consta(_) => (1..m).filter(|&e| e % 3 == 1 && gcd(e, m) == 1).collect(),
        }
    }

    /// Shifts with the theorem's side condition for sets of this size.
    fn shifts(&self, size: usize) -> Vec<u64> {
        let m = self.modulus();
        match self {
            Ctx::Cyclic(c) => (0..m)
                .filter(|&b| shift_divisibility_cyclic(m, c.q(), size as u64, b))
                .collect(),
            Ctx::Consta(c) => (0..m)
                .filter(|&b| shift_divisibility_constacyclic(c.n(), size as u64, b))
                .collect(),
        }
    }

    fn affine_transform(&self, e: u64, b: u64) -> Result<Option<MonomialTransform>> {
        match self {
            Ctx::Cyclic(c) => c.affine_transform(e, b),
            Ctx::Consta(c) => c.affine_transform(e, b),
        }
    }

    fn affine_kind(&self, e: u64, b: u64) -> CertificateKind {
        match self {
            Ctx::Consta(_) if b == 0 => CertificateKind::Psi { e },
            Ctx::Consta(_) => CertificateKind::Affine { e, b },
            Ctx::Cyclic(_) if b == 0 => CertificateKind::Multiplier { a: e },
            Ctx::Cyclic(_) if e == 1 => CertificateKind::Shift { b },
            Ctx::Cyclic(_) => CertificateKind::Affine { e, b },
        }
    }
}

/// Orbits of all admissible defining sets in the job's dimension window.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    pub family: Family,
    pub n: u64,
    pub q: u64,
    /// Admissible sets, ordered by their leader lists.
    pub sets: Vec<DefiningSet>,
    pub orbits: Vec<Orbit>,
}

impl OrbitTable {
    pub fn orbit_of(&self, set: &DefiningSet) -> Option<&Orbit> {
        let idx = self.sets.iter().position(|s| s == set)?;
        self.orbits.iter().find(|o| o.members.iter().any(|m| m.set == idx))
    }

    pub fn total_members(&self) -> usize {
        self.orbits.iter().map(Orbit::size).sum()
    }
}

fn image(a: &DefiningSet, m: u64, e: u64, b: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a.elements().iter().map(|&x| (mul_mod(e, x, m) + b) % m).collect();
    v.sort_unstable();
    v
}

pub fn enumerate_orbits(job: &SearchJob) -> Result<OrbitTable> {
    job.validate()?;
    let ctx = Ctx::new(job)?;
    enumerate_with(&ctx, job)
}

fn enumerate_with(ctx: &Ctx, job: &SearchJob) -> Result<OrbitTable> {
    let n = job.n as usize;
    let m = ctx.modulus();
    let mut sets: Vec<DefiningSet> = ctx
        .all_sets()
        .into_iter()
        .filter(|s| (job.k_min..=job.k_max).contains(&(n - s.len())))
        .collect();
    sets.sort_by_cached_key(|s| s.leaders());
    let index: BTreeMap<Vec<u64>, usize> = sets.iter().enumerate().map(|(i, s)| (s.elements().to_vec(), i)).collect();

    let structural: Vec<(CertificateKind, MonomialTransform)> = match ctx {
        Ctx::Cyclic(c) if job.prune.structural => c.structural_maps(),
        _ => Vec::new(),
    };
    let field = ctx.field();

    // neighbours as (target, step, is_equivalence)
    let neighbours = |i: usize| -> Result<Vec<(usize, Step, bool)>> {
        let a = &sets[i];
        let mut out = Vec::new();
        if job.prune.multiplier || job.prune.affine {
            let shifts = if job.prune.affine { ctx.shifts(a.len()) } else { vec![0] };
            for e in ctx.multipliers() {
                for &b in &shifts {
                    let Some(&j) = index.get(&image(a, m, e, b)) else {
                        continue;
                    };
                    if j == i {
                        continue;
                    }
                    let transform = ctx.affine_transform(e, b)?;
                    // constacyclic shifts without a matrix only certify equal parameters
                    let equivalence = transform.is_some() || matches!(ctx, Ctx::Cyclic(_));
                    let kind = if equivalence {
                        ctx.affine_kind(e, b)
                    } else {
                        CertificateKind::SameParameters { e, b }
                    };
                    out.push((j, Step { kind, transform }, equivalence));
                }
            }
        }
        if !structural.is_empty() {
            if let Ctx::Cyclic(c) = ctx {
                let code = c.build(a)?;
                for (kind, t) in &structural {
                    for backward in [false, true] {
                        let t = if backward { t.inverse(&field) } else { t.clone() };
                        let img = code.code().apply_monomial(&t)?;
                        if let Some(set) = c.identify(&img)? {
                            if let Some(&j) = index.get(set.elements()) {
                                if j != i {
                                    out.push((
                                        j,
                                        Step {
                                            kind: kind.clone(),
                                            transform: Some(t),
                                        },
                                        true,
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    };

    let all_neighbours: Vec<Vec<(usize, Step, bool)>> = (0..sets.len())
        .into_par_iter()
        .map(neighbours)
        .collect::<Result<_>>()?;

    let mut orbit_of = vec![usize::MAX; sets.len()];
    let mut orbits: Vec<Orbit> = Vec::new();
    for start in 0..sets.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![OrbitMember {
            set: start,
            chain: Vec::new(),
            verified: true,
        }];
        orbit_of[start] = id;
        let mut queue = VecDeque::from([0usize]);
        while let Some(mi) = queue.pop_front() {
            let cur = members[mi].set;
            for (j, step, equivalence) in &all_neighbours[cur] {
                if !equivalence || orbit_of[*j] != usize::MAX {
                    continue;
                }
                orbit_of[*j] = id;
                let mut chain = members[mi].chain.clone();
                chain.push(step.clone());
                members.push(OrbitMember {
                    set: *j,
                    chain,
                    verified: false,
                });
                queue.push_back(members.len() - 1);
            }
        }
        members[1..].sort_by_key(|mm| mm.set);
        orbits.push(Orbit {
            id,
            representative: start,
            members,
            parameter_group: id,
        });
    }

    let mut groups = UnionFind::new(orbits.len());
    for (i, nb) in all_neighbours.iter().enumerate() {
        for (j, _, _) in nb {
            groups.union(orbit_of[i], orbit_of[*j]);
        }
    }
    for o in orbits.iter_mut() {
        o.parameter_group = groups.find(o.id);
    }

    let total: usize = orbits.iter().map(Orbit::size).sum();
    if total != sets.len() {
        return Err(Error::Internal(format!("orbit sizes sum to {total}, expected {}", sets.len())));
    }

    let mut table = OrbitTable {
        family: job.family,
        n: job.n,
        q: job.q,
        sets,
        orbits,
    };
    if job.verify_members {
        verify_chains(ctx, &mut table, job)?;
    }
    Ok(table)
}

/// Checks each member against its representative: composed matrix and code
/// equality when every step carries one, weight distributions otherwise.
fn verify_chains(ctx: &Ctx, table: &mut OrbitTable, job: &SearchJob) -> Result<()> {
    let field = ctx.field();
    let sets = &table.sets;
    let budget = job.distance.budget.min(1 << 22);
    table.orbits.par_iter_mut().try_for_each(|orbit| -> Result<()> {
        if orbit.size() == 1 {
            return Ok(());
        }
        let rep = ctx.build(&sets[orbit.representative])?;
        for member in orbit.members.iter_mut().skip(1) {
            let target = ctx.build(&sets[member.set])?;
            let composed = member.chain.iter().try_fold(None::<MonomialTransform>, |acc, s| {
                let t = s.transform.as_ref()?;
                Some(Some(match acc {
                    None => t.clone(),
                    Some(a) => a.then(&field, t),
                }))
            });
            member.verified = match composed {
                Some(Some(t)) => rep.apply_monomial(&t)? == target,
                _ => weight_distributions_agree(&rep, &target, budget) == Some(true),
            };
        }
        Ok(())
    })
}

/// Orbits sharing an evaluation must agree in weight distribution with the
/// evaluated one; checked wherever the enumeration fits the budget.
fn check_parameter_groups(ctx: &Ctx, table: &OrbitTable, group_head: &BTreeMap<usize, usize>) -> Result<()> {
    let followers: Vec<(usize, usize)> = table
        .orbits
        .iter()
        .filter_map(|o| {
            let head = group_head[&o.parameter_group];
            (head != o.id).then_some((head, o.id))
        })
        .collect();
    followers.par_iter().try_for_each(|&(head, id)| {
        let a = ctx.build(&table.sets[table.orbits[head].representative])?;
        let b = ctx.build(&table.sets[table.orbits[id].representative])?;
        if weight_distributions_agree(&a, &b, 1 << 20) == Some(false) {
            return Err(Error::Internal(format!(
                "orbits {head} and {id} share an evaluation but differ in weight distribution"
            )));
        }
        Ok(())
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchRecord {
    pub v: u32,
    pub family: Family,
    pub n: u64,
    pub q: u64,
    pub k: usize,
    pub leaders: Vec<u64>,
    pub orbit: usize,
    pub orbit_size: usize,
    pub representative: Vec<u64>,
    /// Steps from the representative; empty for the representative itself.
    pub chain: Vec<Step>,
    pub chain_verified: bool,
    pub d_lb: Option<u32>,
    pub d_ub: Option<u32>,
    /// Leaders of the set whose evaluation supplied the bounds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds_from: Option<Vec<u64>>,
    pub exhausted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumParameters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_s: Option<f64>,
}

struct Evaluation {
    d_lb: u32,
    d_ub: u32,
    exhausted: bool,
    quantum: Option<QuantumParameters>,
    elapsed_s: f64,
}

fn evaluate_set(ctx: &Ctx, job: &SearchJob, set: &DefiningSet) -> Result<Evaluation> {
    let start = std::time::Instant::now();
    let mut opts = job.distance.clone();
    if let Some(t) = job.time_per_code {
        opts.deadline = Some(start + t);
    }
    let code = ctx.build(set)?;
    let dist = code.min_distance(&opts);
    let quantum = if job.quantum && job.q == 4 {
        Some(nearly_self_orthogonal(&code, &opts)?.quantum.params)
    } else {
        None
    };
    let exhausted = dist.exhausted || quantum.as_ref().is_some_and(|qp| qp.exhausted);
    Ok(Evaluation {
        d_lb: dist.lb,
        d_ub: dist.ub,
        exhausted,
        quantum,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Evaluates one representative in isolation.
pub fn evaluate(job: &SearchJob, representative: &DefiningSet) -> Result<SearchRecord> {
    job.validate()?;
    let ctx = Ctx::new(job)?;
    let ev = evaluate_set(&ctx, job, representative)?;
    let k = job.n as usize - representative.len();
    let leaders = representative.leaders();
    Ok(SearchRecord {
        v: RECORD_VERSION,
        family: job.family,
        n: job.n,
        q: job.q,
        k,
        leaders: leaders.clone(),
        orbit: 0,
        orbit_size: 1,
        representative: leaders,
        chain: Vec::new(),
        chain_verified: true,
        d_lb: Some(ev.d_lb),
        d_ub: Some(ev.d_ub),
        bounds_from: None,
        exhausted: ev.exhausted,
        quantum: ev.quantum,
        target: job.targets.get(job.n, k, job.q),
        elapsed_s: job.timing.then_some(ev.elapsed_s),
    })
}

#[derive(Debug, Clone)]
pub struct SearchOutput {
    pub table: OrbitTable,
    pub records: Vec<SearchRecord>,
}

/// Orbits, then one evaluation per parameter group, then one record per
/// admissible set in (orbit, member) order.
pub fn run(job: &SearchJob) -> Result<SearchOutput> {
    job.validate()?;
    let ctx = Ctx::new(job)?;
    let table = enumerate_with(&ctx, job)?;

    // the first orbit of each parameter group is evaluated
    let mut group_head: BTreeMap<usize, usize> = BTreeMap::new();
    for o in &table.orbits {
        group_head.entry(o.parameter_group).or_insert(o.id);
    }
    check_parameter_groups(&ctx, &table, &group_head)?;
    let heads: Vec<usize> = group_head.values().copied().collect();
    let evaluations: BTreeMap<usize, Evaluation> = if job.orbits_only {
        BTreeMap::new()
    } else {
        heads
            .par_iter()
            .map(|&id| {
                let set = &table.sets[table.orbits[id].representative];
                Ok((id, evaluate_set(&ctx, job, set)?))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .collect()
    };

    let n = job.n as usize;
    let mut records = Vec::with_capacity(table.sets.len());
    for o in &table.orbits {
        let head = group_head[&o.parameter_group];
        let ev = evaluations.get(&head);
        let rep_leaders = table.sets[o.representative].leaders();
        let bounds_from = (head != o.id).then(|| table.sets[table.orbits[head].representative].leaders());
        for mem in &o.members {
            let set = &table.sets[mem.set];
            let k = n - set.len();
            records.push(SearchRecord {
                v: RECORD_VERSION,
                family: job.family,
                n: job.n,
                q: job.q,
                k,
                leaders: set.leaders(),
                orbit: o.id,
                orbit_size: o.size(),
                representative: rep_leaders.clone(),
                chain: mem.chain.clone(),
                chain_verified: mem.verified,
                d_lb: ev.map(|e| e.d_lb),
                d_ub: ev.map(|e| e.d_ub),
                bounds_from: bounds_from.clone(),
                exhausted: ev.is_some_and(|e| e.exhausted),
                quantum: if mem.set == o.representative && head == o.id {
                    ev.and_then(|e| e.quantum.clone())
                } else {
                    None
                },
                target: job.targets.get(job.n, k, job.q),
                elapsed_s: (job.timing && mem.set == o.representative && head == o.id)
                    .then(|| ev.map(|e| e.elapsed_s))
                    .flatten(),
            });
        }
    }
    Ok(SearchOutput { table, records })
}

pub fn write_jsonl(records: &[SearchRecord], out: &mut impl Write) -> Result<()> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| Error::Internal(e.to_string()))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn write_jsonl_file(records: &[SearchRecord], path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_jsonl(records, &mut f)?;
    f.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub n: u64,
    pub k: usize,
    pub q: u64,
    pub leaders: Vec<u64>,
    pub d_lb: u32,
    pub target: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub sets: usize,
    pub orbits: usize,
    pub evaluated: usize,
    pub largest_orbit: usize,
    pub exhausted: usize,
    /// Representatives whose certified lower bound beats the target.
    pub candidates: Vec<Candidate>,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} defining sets in {} orbits ({} evaluated, largest orbit {})",
            self.sets, self.orbits, self.evaluated, self.largest_orbit
        )?;
        if self.exhausted > 0 {
            writeln!(f, "{} evaluations stopped on budget", self.exhausted)?;
        }
        for c in &self.candidates {
            writeln!(
                f,
                "[{}, {}] over GF({}) leaders {:?}: d >= {} beats {}",
                c.n, c.k, c.q, c.leaders, c.d_lb, c.target
            )?;
        }
        Ok(())
    }
}

/// Counts and record candidates; an upper bound alone never makes a candidate.
pub fn report(records: &[SearchRecord], targets: &Targets) -> Summary {
    let reps: Vec<&SearchRecord> = records.iter().filter(|r| r.chain.is_empty()).collect();
    let candidates = reps
        .iter()
        .filter(|r| r.bounds_from.is_none())
        .filter_map(|r| {
            let target = targets.get(r.n, r.k, r.q)?;
            let d_lb = r.d_lb?;
            (d_lb > target).then(|| Candidate {
                n: r.n,
                k: r.k,
                q: r.q,
                leaders: r.leaders.clone(),
                d_lb,
                target,
            })
        })
        .collect();
    Summary {
        sets: records.len(),
        orbits: reps.len(),
        evaluated: reps.iter().filter(|r| r.bounds_from.is_none() && r.d_lb.is_some()).count(),
        largest_orbit: records.iter().map(|r| r.orbit_size).max().unwrap_or(0),
        exhausted: reps.iter().filter(|r| r.bounds_from.is_none() && r.exhausted).count(),
        candidates,
    }
}
