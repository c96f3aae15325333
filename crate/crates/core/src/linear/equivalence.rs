//! Exhaustive search for a monomial (or permutation) map between two codes.
//!
//! With `G1` in RREF, `C1 M = C2` holds iff some invertible `T` satisfies
//! `T col2_{π(i)} = d_{π(i)} col1_i` for every coordinate `i`. The pivot
//! columns of `G1` are unit vectors, so choosing their images and scalars
//! fixes `T`; the remaining columns must then match up to scalars. Images are
//! restricted to coordinates with the same support profile.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{echelon, LinearCode, MonomialTransform};
use crate::galois::{Dense, FieldElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceMode {
    Permutation,
    Monomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquivalenceOutcome {
    /// `C2 = C1 M`.
    Equivalent(MonomialTransform),
    NotEquivalent,
    /// Candidate budget ran out.
    Unknown,
}

impl EquivalenceOutcome {
    pub fn witness(&self) -> Option<&MonomialTransform> {
        match self {
            EquivalenceOutcome::Equivalent(m) => Some(m),
            _ => None,
        }
    }
}

const PROFILE_LIMIT: u128 = 1 << 16;
const PRECHECK_LIMIT: u128 = 1 << 22;

pub(crate) fn search(c1: &LinearCode, c2: &LinearCode, mode: EquivalenceMode, budget: u64) -> EquivalenceOutcome {
    let n = c1.n();
    if c1.k() != c2.k() {
        return EquivalenceOutcome::NotEquivalent;
    }
    if c1 == c2 {
        return EquivalenceOutcome::Equivalent(MonomialTransform::identity(n));
    }
    let (a, b) = if 2 * c1.k() > n {
        (c1.euclidean_dual(), c2.euclidean_dual())
    } else {
        (c1.clone(), c2.clone())
    };
    let q = a.q() as u128;
    if q.checked_pow(a.k() as u32).is_some_and(|s| s <= PRECHECK_LIMIT)
        && a.weight_distribution(PRECHECK_LIMIT).ok() != b.weight_distribution(PRECHECK_LIMIT).ok()
    {
        return EquivalenceOutcome::NotEquivalent;
    }
    let outcome = core_search(&a, &b, mode, budget);
    let outcome = match outcome {
        // a map between the duals lifts with the same permutation and inverted scalars
        EquivalenceOutcome::Equivalent(m) if 2 * c1.k() > n => {
            let f = c1.field();
            let diag = m.diag.iter().map(|&d| f.inv(d)).collect();
            EquivalenceOutcome::Equivalent(MonomialTransform { perm: m.perm, diag })
        }
        other => other,
    };
    if let EquivalenceOutcome::Equivalent(m) = &outcome {
        let ok = c1.apply_monomial(m).map(|c| &c == c2).unwrap_or(false);
        assert!(ok, "equivalence witness failed re-verification");
    }
    outcome
}

/// Per-coordinate invariant: how many codewords of each weight are nonzero there.
fn profiles(c: &LinearCode) -> Option<Vec<Vec<u32>>> {
    let q = c.q();
    let k = c.k();
    if (q as u128).checked_pow(k as u32).is_none_or(|s| s > PROFILE_LIMIT) {
        return None;
    }
    let n = c.n();
    let mut prof = vec![vec![0u32; n + 1]; n];
    let mut msg = vec![FieldElement::ZERO; k];
    for idx in 0..q.pow(k as u32) {
        let mut x = idx;
        for m in msg.iter_mut() {
            *m = FieldElement(x % q);
            x /= q;
        }
        let w = c.encode(&msg).expect("dimension matches");
        let wt = w.iter().filter(|x| !x.is_zero()).count();
        for (i, x) in w.iter().enumerate() {
            if !x.is_zero() {
                prof[i][wt] += 1;
            }
        }
    }
    Some(prof)
}

fn columns(c: &LinearCode) -> Vec<Vec<u8>> {
    (0..c.n()).map(|j| c.raw_rows().iter().map(|r| r[j]).collect()).collect()
}

/// Scales a column so its first nonzero entry is one; returns the scale used.
fn normalize(t: &Dense, col: &[u8]) -> (Vec<u8>, u8) {
    match col.iter().find(|&&x| x != 0) {
        None => (col.to_vec(), 1),
        Some(&lead) => {
            let inv = t.inv[lead as usize];
            (col.iter().map(|&x| t.mul[inv as usize * t.q + x as usize]).collect(), lead)
        }
    }
}

fn invert(t: &Dense, m: &[Vec<u8>]) -> Option<Vec<Vec<u8>>> {
    let k = m.len();
    let aug: Vec<Vec<u8>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| (i == j) as u8));
            row
        })
        .collect();
    let order: Vec<usize> = (0..k).collect();
    let (rows, pivots) = echelon(t, aug, &order);
    if pivots.len() < k || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(rows.into_iter().map(|r| r[k..].to_vec()).collect())
}

struct Search<'a> {
    t: &'a Dense,
    mode: EquivalenceMode,
    k: usize,
    n: usize,
    cols1: Vec<Vec<u8>>,
    cols2: Vec<Vec<u8>>,
    target: Vec<Vec<u8>>,
    candidates: Vec<Vec<usize>>,
    budget: u64,
    spent: u64,
}

impl Search<'_> {
    fn run(&mut self) -> EquivalenceOutcome {
        let mut chosen = Vec::with_capacity(self.k);
        let mut used = vec![false; self.n];
        match self.positions(&mut chosen, &mut used) {
            Some(Some(m)) => EquivalenceOutcome::Equivalent(m),
            Some(None) => EquivalenceOutcome::NotEquivalent,
            None => EquivalenceOutcome::Unknown,
        }
    }

    /// `None` when the budget runs out, `Some(None)` when exhausted.
    fn positions(&mut self, chosen: &mut Vec<usize>, used: &mut [bool]) -> Option<Option<MonomialTransform>> {
        if chosen.len() == self.k {
            return self.scalars(chosen);
        }
        let t = chosen.len();
        for ci in 0..self.candidates[t].len() {
            let j = self.candidates[t][ci];
            if used[j] {
                continue;
            }
            used[j] = true;
            chosen.push(j);
            let r = self.positions(chosen, used);
            chosen.pop();
            used[j] = false;
            match r {
                Some(None) => {}
                other => return other,
            }
        }
        Some(None)
    }

    fn scalars(&mut self, chosen: &[usize]) -> Option<Option<MonomialTransform>> {
        let k = self.k;
        let q = self.t.q;
        // rows of B: B[r][t] = cols2[chosen[t]][r]
        let b: Vec<Vec<u8>> = (0..k).map(|r| chosen.iter().map(|&j| self.cols2[j][r]).collect()).collect();
        let Some(binv) = invert(self.t, &b) else {
            return Some(None);
        };
        let free = match self.mode {
            EquivalenceMode::Permutation => 0,
            EquivalenceMode::Monomial => k - 1,
        };
        let combos = ((q - 1) as u64).saturating_pow(free as u32);
        let mut lambda = vec![1u8; k];
        for idx in 0..combos {
            self.spent += 1;
            if self.spent > self.budget {
                return None;
            }
            let mut x = idx;
            for l in lambda.iter_mut().skip(1).take(free) {
                *l = (x % (q as u64 - 1)) as u8 + 1;
                x /= q as u64 - 1;
            }
            if let Some(m) = self.try_transform(&binv, &lambda) {
                return Some(Some(m));
            }
        }
        Some(None)
    }

    fn try_transform(&self, binv: &[Vec<u8>], lambda: &[u8]) -> Option<MonomialTransform> {
        let t = self.t;
        let q = t.q;
        let k = self.k;
        // T = diag(lambda) B^{-1}
        let tm: Vec<Vec<u8>> = (0..k)
            .map(|r| binv[r].iter().map(|&x| t.mul[lambda[r] as usize * q + x as usize]).collect())
            .collect();
        let images: Vec<Vec<u8>> = self
            .cols2
            .iter()
            .map(|c| {
                (0..k)
                    .map(|r| {
                        tm[r].iter().zip(c).fold(0u8, |acc, (&a, &b)| {
                            t.add[acc as usize * q + t.mul[a as usize * q + b as usize] as usize]
                        })
                    })
                    .collect()
            })
            .collect();
        let keyed: Vec<(Vec<u8>, u8)> = match self.mode {
            EquivalenceMode::Permutation => images.iter().map(|c| (c.clone(), 1)).collect(),
            EquivalenceMode::Monomial => images.iter().map(|c| normalize(t, c)).collect(),
        };
        let mut sorted: Vec<&Vec<u8>> = keyed.iter().map(|(c, _)| c).collect();
        sorted.sort();
        if sorted.iter().map(|c| c.as_slice()).ne(self.target.iter().map(|c| c.as_slice())) {
            return None;
        }
        // pair coordinates inside each class
        let mut pool: HashMap<&[u8], Vec<usize>> = HashMap::new();
        for (j, (c, _)) in keyed.iter().enumerate().rev() {
            pool.entry(c.as_slice()).or_default().push(j);
        }
        let mut perm = vec![0usize; self.n];
        let mut diag = vec![FieldElement::ONE; self.n];
        for i in 0..self.n {
            let (key, lead1) = match self.mode {
                EquivalenceMode::Permutation => (self.cols1[i].clone(), 1),
                EquivalenceMode::Monomial => normalize(t, &self.cols1[i]),
            };
            let j = pool.get_mut(key.as_slice()).and_then(|v| v.pop())?;
            perm[i] = j;
            // images[j] = d_j col1_i with leads lead2 = d_j lead1
            let lead2 = keyed[j].1;
            diag[j] = FieldElement(t.mul[lead2 as usize * q + t.inv[lead1 as usize] as usize] as u64);
        }
        Some(MonomialTransform { perm, diag })
    }
}

fn core_search(a: &LinearCode, b: &LinearCode, mode: EquivalenceMode, budget: u64) -> EquivalenceOutcome {
    let t = a.tables();
    let n = a.n();
    let k = a.k();
    let cols1 = columns(a);
    let cols2 = columns(b);
    let key = |c: &Vec<u8>| match mode {
        EquivalenceMode::Permutation => c.clone(),
        EquivalenceMode::Monomial => normalize(t, c).0,
    };
    let mut target: Vec<Vec<u8>> = cols1.iter().map(key).collect();
    target.sort();
    // coordinate invariants: zero column, size of parallel class, support profile
    let class_size = |cols: &[Vec<u8>]| -> Vec<usize> {
        let norm: Vec<Vec<u8>> = cols.iter().map(|c| normalize(t, c).0).collect();
        norm.iter().map(|c| norm.iter().filter(|d| *d == c).count()).collect()
    };
    let (s1, s2) = (class_size(&cols1), class_size(&cols2));
    let (p1, p2) = (profiles(a), profiles(b));
    let invariant = |cols: &[Vec<u8>], sizes: &[usize], prof: &Option<Vec<Vec<u32>>>, j: usize| {
        (
            cols[j].iter().all(|&x| x == 0),
            sizes[j],
            prof.as_ref().map(|p| p[j].clone()),
        )
    };
    let inv2: Vec<_> = (0..n).map(|j| invariant(&cols2, &s2, &p2, j)).collect();
    let inv1: Vec<_> = (0..n).map(|j| invariant(&cols1, &s1, &p1, j)).collect();
    let mut sorted1 = inv1.clone();
    let mut sorted2 = inv2.clone();
    sorted1.sort();
    sorted2.sort();
    if sorted1 != sorted2 {
        return EquivalenceOutcome::NotEquivalent;
    }
    let candidates: Vec<Vec<usize>> = a
        .pivots()
        .iter()
        .map(|&p| (0..n).filter(|&j| inv2[j] == inv1[p]).collect())
        .collect();
    let mut s = Search {
        t,
        mode,
        k,
        n,
        cols1,
        cols2,
        target,
        candidates,
        budget,
        spent: 0,
    };
    s.run()
}
