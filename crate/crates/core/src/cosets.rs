//! Cyclotomic cosets, defining sets and the index maps acting on them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, prime_power};
use crate::error::{Error, Result};

/// Partition of Z/nZ into q-cyclotomic cosets, ordered by leader.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTable {
    n: u64,
    q: u64,
    cosets: Vec<Vec<u64>>,
    index: Vec<usize>,
}

impl CosetTable {
    pub fn new(n: u64, q: u64) -> Result<Self> {
        if n == 0 || q < 2 || gcd(n, q) != 1 {
            return Err(Error::NotCoprime { n, q });
        }
        let mut index = vec![usize::MAX; n as usize];
        let mut cosets = Vec::new();
        for a in 0..n {
            if index[a as usize] != usize::MAX {
                continue;
            }
            let mut coset = Vec::new();
            let mut x = a;
            loop {
                index[x as usize] = cosets.len();
                coset.push(x);
                x = mul_mod(x, q, n);
                if x == a {
                    break;
                }
            }
            coset.sort_unstable();
            cosets.push(coset);
        }
        Ok(CosetTable { n, q, cosets, index })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn cosets(&self) -> &[Vec<u64>] {
        &self.cosets
    }

    pub fn leaders(&self) -> Vec<u64> {
        self.cosets.iter().map(|c| c[0]).collect()
    }

    pub fn coset_index(&self, x: u64) -> usize {
        self.index[(x % self.n) as usize]
    }

    /// Z(x): the coset containing `x`.
    pub fn coset_of(&self, x: u64) -> &[u64] {
        &self.cosets[self.coset_index(x)]
    }

    pub fn defining_set(&self, elements: impl IntoIterator<Item = u64>) -> Result<DefiningSet> {
        DefiningSet::new(self.n, self.q, elements)
    }

    pub fn from_leaders(&self, leaders: &[u64]) -> Result<DefiningSet> {
        let mut elems = Vec::new();
        for &l in leaders {
            if l >= self.n {
                return Err(Error::InvalidArgument(format!("leader {l} outside Z/{}Z", self.n)));
            }
            elems.extend_from_slice(self.coset_of(l));
        }
        DefiningSet::new(self.n, self.q, elems)
    }

    /// Union of the cosets whose indices are the set bits of `mask` (within `subset`).
    pub fn union_of(&self, subset: &[usize], mask: u64) -> DefiningSet {
        let mut elems: Vec<u64> = subset
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .flat_map(|(_, &ci)| self.cosets[ci].iter().copied())
            .collect();
        elems.sort_unstable();
        DefiningSet {
            n: self.n,
            q: self.q,
            elements: elems,
        }
    }

    /// Every union of the cosets listed in `subset` (2^|subset| sets).
    pub fn all_unions<'a>(&'a self, subset: &'a [usize]) -> impl Iterator<Item = DefiningSet> + 'a {
        assert!(subset.len() < 40, "too many cosets to enumerate");
        (0..1u64 << subset.len()).map(move |mask| self.union_of(subset, mask))
    }

    /// Indices of cosets whose elements are congruent to `residue` modulo `m`.
    pub fn cosets_in_class(&self, m: u64, residue: u64) -> Vec<usize> {
        (0..self.cosets.len())
            .filter(|&i| self.cosets[i][0] % m == residue % m)
            .collect()
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.cosets.len()).collect()
    }
}

pub fn coset_table(n: u64, q: u64) -> Result<CosetTable> {
    CosetTable::new(n, q)
}

/// A union of q-cyclotomic cosets modulo `n`, stored as its sorted elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DefiningSet {
    n: u64,
    q: u64,
    elements: Vec<u64>,
}

impl DefiningSet {
    /// Rejects sets that are not closed under multiplication by `q`.
    pub fn new(n: u64, q: u64, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n == 0 || gcd(n, q) != 1 {
            return Err(Error::NotCoprime { n, q });
        }
        let set: BTreeSet<u64> = elements.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidArgument(format!("{bad} is outside Z/{n}Z")));
        }
        if let Some(&x) = set.iter().find(|&&x| !set.contains(&mul_mod(x, q, n))) {
            return Err(Error::NotCosetClosed {
                n,
                q,
                detail: format!("{x} in set but {}*{x} mod {n} = {} is not", q, mul_mod(x, q, n)),
            });
        }
        Ok(DefiningSet {
            n,
            q,
            elements: set.into_iter().collect(),
        })
    }

    pub fn empty(n: u64, q: u64) -> Self {
        DefiningSet { n, q, elements: Vec::new() }
    }

    pub fn full(n: u64, q: u64) -> Self {
        DefiningSet {
            n,
            q,
            elements: (0..n).collect(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.n)).is_ok()
    }

    /// Smallest element of each coset contained in the set.
    pub fn leaders(&self) -> Vec<u64> {
        self.elements
            .iter()
            .copied()
            .filter(|&x| {
                let mut y = mul_mod(x, self.q, self.n);
                while y != x {
                    if y < x {
                        return false;
                    }
                    y = mul_mod(y, self.q, self.n);
                }
                true
            })
            .collect()
    }

    pub fn union(&self, other: &DefiningSet) -> Result<DefiningSet> {
        self.check_context(other)?;
        let mut elems = self.elements.clone();
        elems.extend_from_slice(&other.elements);
        elems.sort_unstable();
        elems.dedup();
        Ok(DefiningSet {
            n: self.n,
            q: self.q,
            elements: elems,
        })
    }

    pub fn with(&self, extra: &[u64]) -> Result<DefiningSet> {
        DefiningSet::new(self.n, self.q, self.elements.iter().copied().chain(extra.iter().copied()))
    }

    /// (Z/nZ) \ set.
    pub fn complement(&self) -> DefiningSet {
        DefiningSet {
            n: self.n,
            q: self.q,
            elements: (0..self.n).filter(|x| !self.contains(*x)).collect(),
        }
    }

    /// The image `{c x mod n}`; closed again whenever the input is.
    pub fn scaled(&self, c: i64) -> DefiningSet {
        let n = self.n as i64;
        let mut elems: Vec<u64> = self
            .elements
            .iter()
            .map(|&x| ((x as i64 * c.rem_euclid(n)) % n) as u64)
            .collect();
        elems.sort_unstable();
        elems.dedup();
        DefiningSet {
            n: self.n,
            q: self.q,
            elements: elems,
        }
    }

    fn check_context(&self, other: &DefiningSet) -> Result<()> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::ModulusMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    /// Parses either comma-separated coset leaders (`0,2,7`) or the full
    /// element list with a `full:` prefix. The empty string is the empty set.
    pub fn parse(n: u64, q: u64, s: &str) -> Result<DefiningSet> {
        let (full, body) = match s.trim().strip_prefix("full:") {
            Some(rest) => (true, rest),
            None => (false, s.trim()),
        };
        let values = parse_list(body)?;
        if full {
            return DefiningSet::new(n, q, values);
        }
        CosetTable::new(n, q)?.from_leaders(&values)
    }

    pub fn to_leader_string(&self) -> String {
        join(&self.leaders())
    }
}

impl fmt::Display for DefiningSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", join(&self.elements))
    }
}

pub(crate) fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| u64::from_str(t).map_err(|_| Error::Parse(format!("not an integer: {t:?}"))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum IndexMapKind {
    /// x -> a x
    Multiplier { a: u64 },
    /// i + j p^k -> (d i mod p^k) + j p^k on Z/p^mZ
    GeneralizedMultiplier { d: u64, k: u32, p: u64, m: u32 },
    /// x -> x + b
    Shift { b: u64 },
    /// x -> e x + b
    Affine { e: u64, b: u64 },
}

/// A bijection of Z/nZ drawn from one of the families above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexMap {
    pub kind: IndexMapKind,
    pub modulus: u64,
}

impl IndexMap {
    pub fn new(kind: IndexMapKind, modulus: u64) -> Result<Self> {
        let n = modulus;
        if n == 0 {
            return Err(Error::InvalidMap("modulus must be positive".into()));
        }
        match kind {
            IndexMapKind::Multiplier { a } | IndexMapKind::Affine { e: a, .. } => {
                if gcd(a % n, n) != 1 {
                    return Err(Error::InvalidMap(format!("gcd({a}, {n}) != 1")));
                }
            }
            IndexMapKind::GeneralizedMultiplier { d, k, p, m } => {
                if p % 2 == 0 || prime_power(p) != Some((p, 1)) {
                    return Err(Error::InvalidMap(format!("{p} is not an odd prime")));
                }
                if p.checked_pow(m) != Some(n) {
                    return Err(Error::InvalidMap(format!("{n} != {p}^{m}")));
                }
                if k == 0 || k > m {
                    return Err(Error::InvalidMap(format!("need 1 <= k <= m, got k={k}, m={m}")));
                }
                let pk = p.pow(k);
                if d == 0 || d >= pk || gcd(d, pk) != 1 {
                    return Err(Error::InvalidMap(format!("need 1 <= d < {pk} coprime to {pk}")));
                }
            }
            IndexMapKind::Shift { .. } => {}
        }
        Ok(IndexMap { kind, modulus })
    }

    pub fn multiplier(a: u64, n: u64) -> Result<Self> {
        Self::new(IndexMapKind::Multiplier { a: a % n }, n)
    }

    pub fn shift(b: u64, n: u64) -> Self {
        IndexMap {
            kind: IndexMapKind::Shift { b: b % n },
            modulus: n,
        }
    }

    pub fn affine(e: u64, b: u64, n: u64) -> Result<Self> {
        Self::new(IndexMapKind::Affine { e: e % n, b: b % n }, n)
    }

    pub fn apply(&self, x: u64) -> u64 {
        let n = self.modulus;
        let x = x % n;
        match self.kind {
            IndexMapKind::Multiplier { a } => mul_mod(a, x, n),
            IndexMapKind::Shift { b } => (x + b) % n,
            IndexMapKind::Affine { e, b } => (mul_mod(e, x, n) + b) % n,
            IndexMapKind::GeneralizedMultiplier { d, k, p, .. } => {
                let pk = p.pow(k);
                let (i, j) = (x % pk, x / pk);
                (d * i) % pk + j * pk
            }
        }
    }

    /// Image of a set as a sorted list; not necessarily coset-closed.
    pub fn apply_to(&self, set: &DefiningSet) -> Result<Vec<u64>> {
        if set.n != self.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus,
                got: set.n,
            });
        }
        let mut out: Vec<u64> = set.elements.iter().map(|&x| self.apply(x)).collect();
        out.sort_unstable();
        Ok(out)
    }
}

pub fn apply_map(map: &IndexMap, set: &DefiningSet) -> Result<Vec<u64>> {
    map.apply_to(set)
}

/// n | |A| (q-1) b: the shift condition for cyclic codes.
pub fn shift_divisibility_cyclic(n: u64, q: u64, setsize: u64, b: u64) -> bool {
    (setsize as u128 * (q as u128 - 1) * b as u128).is_multiple_of(n as u128)
}

/// 3 | b and n | b |A|: the shift condition for omega-constacyclic codes on Z/3nZ.
pub fn shift_divisibility_constacyclic(n: u64, setsize: u64, b: u64) -> bool {
    b.is_multiple_of(3) && (b as u128 * setsize as u128).is_multiple_of(n as u128)
}

/// A_e = {(e k + i n / 3^(t-1)) mod n : 0 <= i < 3^(t-1)} for n = 3^t k,
/// a union of 4-cyclotomic cosets.
pub fn build_ae(n: u64, e: u64) -> Result<DefiningSet> {
    let (t, k) = split_three_power(n);
    if n.is_multiple_of(2) || t < 3 || k % 3 == 0 {
        return Err(Error::InvalidArgument(format!(
            "A_e needs odd n = 3^t k with t >= 3 and 3 !| k, got n = {n}"
        )));
    }
    if e == 0 || e >= n {
        return Err(Error::InvalidArgument(format!("need 1 <= e <= n-1, got e = {e}")));
    }
    let count = 3u64.pow(t - 1);
    let step = n / count;
    let elems = (0..count).map(|i| (e * k + i * step) % n);
    DefiningSet::new(n, 4, elems).map_err(|err| Error::Internal(format!("A_{e} is not coset-closed: {err}")))
}

/// Writes n = 3^t k with 3 not dividing k.
pub fn split_three_power(mut n: u64) -> (u32, u64) {
    let mut t = 0;
    while n > 0 && n.is_multiple_of(3) {
        n /= 3;
        t += 1;
    }
    (t, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AffineMode {
    Cyclic,
    /// Sets live in Z/3nZ; `n` is the code length.
    Constacyclic { n: u64 },
}

/// All affine maps θ with θ(A) = B satisfying the side conditions of the mode.
///
/// Cyclic: θ(x) = e x + b on Z/nZ, gcd(e, n) = 1, n | b |A| (q-1).
/// Constacyclic: θ(x) = e x + 3j on Z/3nZ, e ≡ 1 (mod 3), gcd(e, 3n) = 1, n | 3j |A|.
pub fn enumerate_affine_witnesses(a: &DefiningSet, b: &DefiningSet, mode: AffineMode) -> Result<Vec<IndexMap>> {
    a.check_context(b)?;
    if a.len() != b.len() {
        return Ok(Vec::new());
    }
    let modulus = a.n;
    let size = a.len() as u64;
    let shifts: Vec<u64> = match mode {
        AffineMode::Cyclic => (0..modulus)
            .filter(|&s| shift_divisibility_cyclic(modulus, a.q, size, s))
            .collect(),
        AffineMode::Constacyclic { n } => {
            if modulus != 3 * n {
                return Err(Error::ModulusMismatch {
                    expected: 3 * n,
                    got: modulus,
                });
            }
            (0..modulus)
                .filter(|&s| shift_divisibility_constacyclic(n, size, s))
                .collect()
        }
    };
    let mut out = Vec::new();
    for e in 1..modulus.max(2) {
        if gcd(e, modulus) != 1 {
            continue;
        }
        if matches!(mode, AffineMode::Constacyclic { .. }) && e % 3 != 1 {
            continue;
        }
        for &s in &shifts {
            let map = IndexMap {
                kind: IndexMapKind::Affine { e, b: s },
                modulus,
            };
            if a.elements.iter().all(|&x| b.contains(map.apply(x))) {
                out.push(map);
            }
        }
    }
    if modulus == 1 && a == b {
        out.push(IndexMap {
            kind: IndexMapKind::Affine { e: 0, b: 0 },
            modulus: 1,
        });
    }
    Ok(out)
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosets_mod_8_base_3() {
        let t = coset_table(8, 3).unwrap();
        assert_eq!(
            t.cosets(),
            &[vec![0], vec![1, 3], vec![2, 6], vec![4], vec![5, 7]]
        );
        assert_eq!(t.leaders(), vec![0, 1, 2, 4, 5]);
    }

    #[test]
    fn coset_of_one_mod_27_base_4() {
        let t = coset_table(27, 4).unwrap();
        assert_eq!(t.coset_of(1), &[1, 4, 7, 10, 13, 16, 19, 22, 25]);
        assert_eq!(t.coset_of(2), &[2, 5, 8, 11, 14, 17, 20, 23, 26]);
    }

    #[test]
    fn trivial_action_gives_singletons() {
        let t = coset_table(4, 5).unwrap();
        assert!(t.cosets().iter().all(|c| c.len() == 1));
        assert!(coset_table(6, 4).is_err());
    }

    #[test]
    fn rejects_unclosed_sets() {
        assert!(matches!(DefiningSet::new(8, 3, [1]), Err(Error::NotCosetClosed { .. })));
        assert!(DefiningSet::new(8, 3, [1, 3]).is_ok());
    }

    #[test]
    fn shift_by_four_mod_8() {
        let a = DefiningSet::new(8, 3, [1, 2, 3, 6]).unwrap();
        assert_eq!(IndexMap::shift(4, 8).apply_to(&a).unwrap(), vec![2, 5, 6, 7]);
        let id = IndexMap::multiplier(1, 8).unwrap();
        assert_eq!(id.apply_to(&a).unwrap(), a.elements());
    }

    #[test]
    fn generalized_multiplier_on_nine() {
        let m = IndexMap::new(IndexMapKind::GeneralizedMultiplier { d: 2, k: 1, p: 3, m: 2 }, 9).unwrap();
        let img: BTreeSet<u64> = [1u64, 3, 4].iter().map(|&x| m.apply(x)).collect();
        assert_eq!(img.into_iter().collect::<Vec<_>>(), vec![2, 3, 5]);
        assert!(IndexMap::new(IndexMapKind::GeneralizedMultiplier { d: 3, k: 1, p: 3, m: 2 }, 9).is_err());
        assert!(IndexMap::new(IndexMapKind::GeneralizedMultiplier { d: 1, k: 1, p: 2, m: 3 }, 8).is_err());
    }

    #[test]
    fn divisibility_predicates() {
        assert!(shift_divisibility_cyclic(8, 3, 4, 4));
        assert!(shift_divisibility_cyclic(8, 3, 3, 0));
        assert!(!shift_divisibility_cyclic(8, 3, 3, 1));
        assert!(shift_divisibility_constacyclic(111, 21, 333));
        assert!(!shift_divisibility_constacyclic(111, 21, 37));
        assert!(shift_divisibility_constacyclic(5, 7, 15));
    }

    #[test]
    fn a_e_sets() {
        let t = coset_table(27, 4).unwrap();
        assert_eq!(build_ae(27, 1).unwrap().elements(), t.coset_of(1));
        assert_eq!(build_ae(27, 2).unwrap().elements(), t.coset_of(2));
        assert!(build_ae(54, 1).is_err());
        assert!(build_ae(9, 1).is_err());
        for e in 1..81 {
            assert!(build_ae(81, e).is_ok());
        }
        for e in 1..135 {
            assert!(build_ae(135, e).is_ok());
        }
    }

    #[test]
    fn affine_witnesses() {
        let a = DefiningSet::new(8, 3, [0, 1, 3, 4]).unwrap();
        let b = DefiningSet::new(8, 3, [2, 5, 6, 7]).unwrap();
        assert!(enumerate_affine_witnesses(&a, &b, AffineMode::Cyclic).unwrap().is_empty());
        let w = enumerate_affine_witnesses(&a, &a, AffineMode::Cyclic).unwrap();
        assert!(w.contains(&IndexMap::affine(1, 0, 8).unwrap()));
        let a = DefiningSet::new(8, 3, [1, 3]).unwrap();
        let b = DefiningSet::new(8, 3, [5, 7]).unwrap();
        let w = enumerate_affine_witnesses(&a, &b, AffineMode::Cyclic).unwrap();
        // brute force over every (e, b) with the divisibility filter
        let mut oracle = Vec::new();
        for e in [1u64, 3, 5, 7] {
            for s in 0..8u64 {
                let img: BTreeSet<u64> = [1u64, 3].iter().map(|&x| (e * x + s) % 8).collect();
                if img == BTreeSet::from([5, 7]) && (2 * 2 * s) % 8 == 0 {
                    oracle.push((e, s));
                }
            }
        }
        let got: Vec<(u64, u64)> = w
            .iter()
            .map(|m| match m.kind {
                IndexMapKind::Affine { e, b } => (e, b),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(got, oracle);
        assert!(got.contains(&(1, 4)));
    }

    #[test]
    fn parse_leaders_and_full() {
        let a = DefiningSet::parse(8, 3, "0,1").unwrap();
        assert_eq!(a.elements(), &[0, 1, 3]);
        let b = DefiningSet::parse(8, 3, "full:2,5,6,7").unwrap();
        assert_eq!(b.to_leader_string(), "2,5");
        assert!(DefiningSet::parse(8, 3, "full:2,5").is_err());
        assert!(DefiningSet::parse(8, 3, "").unwrap().is_empty());
    }
}
