//! Linear codes over small fields (at most 256 elements).
//!
//! A code is stored by its reduced row-echelon generator, so two codes are
//! equal exactly when their generators are.

mod distance;
mod equivalence;
mod space;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{Dense, Embedding, FieldElement, FieldSpec, GaloisField, RootOfUnity};

pub use distance::{DistanceOptions, DistanceResult, Strategy};
pub use equivalence::{EquivalenceMode, EquivalenceOutcome};

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 28;

#[derive(Clone)]
pub struct LinearCode {
    field: Arc<GaloisField>,
    n: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec() && self.n == other.n && self.rows == other.rows
    }
}

impl Eq for LinearCode {}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}, {}] code over GF({})", self.n, self.k(), self.field.order())?;
        for r in &self.rows {
            writeln!(f, "  {:?}", r)?;
        }
        Ok(())
    }
}

pub(crate) fn tables(field: &GaloisField) -> Result<&Dense> {
    field.dense().ok_or_else(|| Error::WrongField {
        expected: "a field with at most 256 elements".into(),
        got: format!("GF({})", field.order()),
    })
}

impl LinearCode {
    /// Row space of `rows`, canonicalized to RREF.
    pub fn from_rows(field: Arc<GaloisField>, n: usize, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let raw = rows
            .iter()
            .map(|r| {
                if r.len() != n {
                    return Err(Error::InvalidArgument(format!("row of length {} in a length-{n} code", r.len())));
                }
                r.iter()
                    .map(|x| {
                        if x.0 < field.order() {
                            Ok(x.0 as u8)
                        } else {
                            Err(Error::InvalidArgument(format!("{} is not an element of GF({})", x.0, field.order())))
                        }
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<u8>>>>()?;
        Self::from_raw(field, n, raw)
    }

    pub(crate) fn from_raw(field: Arc<GaloisField>, n: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        let t = tables(&field)?;
        let order: Vec<usize> = (0..n).collect();
        let (rows, pivots) = echelon(t, rows, &order);
        let mut idx: Vec<usize> = (0..rows.len()).collect();
        idx.sort_by_key(|&i| pivots[i]);
        let rows = idx.iter().map(|&i| rows[i].clone()).collect();
        let pivots = idx.iter().map(|&i| pivots[i]).collect();
        Ok(LinearCode { field, n, rows, pivots })
    }

    pub fn zero(field: Arc<GaloisField>, n: usize) -> Result<Self> {
        tables(&field)?;
        Ok(LinearCode {
            field,
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        })
    }

    pub fn full(field: Arc<GaloisField>, n: usize) -> Result<Self> {
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0u8; n];
                r[i] = 1;
                r
            })
            .collect();
        Self::from_raw(field, n, rows)
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn field_spec(&self) -> &FieldSpec {
        self.field.spec()
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub(crate) fn raw_rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub(crate) fn tables(&self) -> &Dense {
        self.field.dense().expect("checked at construction")
    }

    /// RREF generator, row-major.
    pub fn generator(&self) -> Vec<Vec<FieldElement>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| FieldElement(x as u64)).collect())
            .collect()
    }

    /// Codeword `m G` for a message of length k.
    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if message.len() != self.k() {
            return Err(Error::InvalidArgument(format!(
                "message of length {} for a code of dimension {}",
                message.len(),
                self.k()
            )));
        }
        let t = self.tables();
        let mut out = vec![0u8; self.n];
        for (m, row) in message.iter().zip(&self.rows) {
            axpy(t, &mut out, row, m.0 as u8);
        }
        Ok(out.into_iter().map(|x| FieldElement(x as u64)).collect())
    }

    pub fn contains(&self, word: &[FieldElement]) -> bool {
        if word.len() != self.n {
            return false;
        }
        let w: Vec<u8> = word.iter().map(|x| x.0 as u8).collect();
        self.contains_raw(&w)
    }

    pub(crate) fn contains_raw(&self, word: &[u8]) -> bool {
        let t = self.tables();
        let mut w = word.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c != 0 {
                axpy(t, &mut w, row, t.neg[c as usize]);
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// Parity-check matrix `H` with `G H^T = 0`, rows indexed by non-pivot columns.
    pub(crate) fn parity_rows(&self) -> Vec<Vec<u8>> {
        let t = self.tables();
        let mut is_pivot = vec![false; self.n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.n)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut h = vec![0u8; self.n];
                h[c] = 1;
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    h[p] = t.neg[row[c] as usize];
                }
                h
            })
            .collect()
    }

    pub fn euclidean_dual(&self) -> LinearCode {
        Self::from_raw(self.field.clone(), self.n, self.parity_rows()).expect("field checked")
    }

    fn require_gf4(&self) -> Result<()> {
        if self.field.order() != 4 {
            return Err(Error::WrongField {
                expected: "GF(4)".into(),
                got: format!("GF({})", self.field.order()),
            });
        }
        Ok(())
    }

    /// Entrywise conjugation `a -> a^2` over GF(4).
    pub fn conjugate(&self) -> Result<LinearCode> {
        self.require_gf4()?;
        let rows = self.rows.iter().map(|r| r.iter().map(|&x| conj4(x)).collect()).collect();
        Self::from_raw(self.field.clone(), self.n, rows)
    }

    /// Hermitian dual over GF(4): the Euclidean dual of the conjugate code.
    pub fn hermitian_dual(&self) -> Result<LinearCode> {
        Ok(self.conjugate()?.euclidean_dual())
    }

    fn check_compatible(&self, other: &LinearCode) -> Result<()> {
        if self.field.spec() != other.field.spec() {
            return Err(Error::WrongField {
                expected: format!("GF({})", self.field.order()),
                got: format!("GF({})", other.field.order()),
            });
        }
        if self.n != other.n {
            return Err(Error::InvalidArgument(format!("lengths {} and {} differ", self.n, other.n)));
        }
        Ok(())
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Self::from_raw(self.field.clone(), self.n, rows)
    }

    pub fn intersection(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        Ok(self.euclidean_dual().sum(&other.euclidean_dual())?.euclidean_dual())
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.check_compatible(other).is_ok() && self.rows.iter().all(|r| other.contains_raw(r))
    }

    /// dim(C ∩ C^⊥h).
    pub fn hull_dim_hermitian(&self) -> Result<usize> {
        Ok(self.intersection(&self.hermitian_dual()?)?.k())
    }

    pub fn apply_monomial(&self, m: &MonomialTransform) -> Result<LinearCode> {
        if m.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "transform of length {} on a length-{} code",
                m.len(),
                self.n
            )));
        }
        m.validate(&self.field)?;
        let rows = self.rows.iter().map(|r| m.apply_raw(&self.field, r)).collect();
        Self::from_raw(self.field.clone(), self.n, rows)
    }

    pub fn weight_distribution(&self, budget: u128) -> Result<WeightDistribution> {
        distance::weight_distribution(self, budget)
    }

    pub fn min_distance(&self, opts: &DistanceOptions) -> DistanceResult {
        distance::min_weight(self, None, opts)
    }

    /// Bounds on the minimum weight of `C \ S` for a subcode `S`.
    pub fn min_weight_outside(&self, sub: &LinearCode, opts: &DistanceOptions) -> Result<DistanceResult> {
        self.check_compatible(sub)?;
        if !sub.is_subcode_of(self) {
            return Err(Error::InvalidArgument("S is not a subcode of C".into()));
        }
        Ok(distance::min_weight(self, Some(sub), opts))
    }

    pub fn brute_force_equivalence(
        &self,
        other: &LinearCode,
        mode: EquivalenceMode,
        budget: u64,
    ) -> Result<EquivalenceOutcome> {
        self.check_compatible(other)?;
        Ok(equivalence::search(self, other, mode, budget))
    }

    /// Matrix dump with integer-encoded entries, row-major.
    pub fn to_matrix(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect()
    }
}

#[inline]
pub(crate) fn conj4(x: u8) -> u8 {
    match x {
        2 => 3,
        3 => 2,
        v => v,
    }
}

/// `dst += s * src`.
#[inline]
pub(crate) fn axpy(t: &Dense, dst: &mut [u8], src: &[u8], s: u8) {
    if s == 0 {
        return;
    }
    let q = t.q;
    let mrow = &t.mul[s as usize * q..(s as usize + 1) * q];
    for (d, &x) in dst.iter_mut().zip(src) {
        if x != 0 {
            *d = t.add[*d as usize * q + mrow[x as usize] as usize];
        }
    }
}

/// Gauss-Jordan elimination taking pivot columns in the given preference
/// order. Returns the nonzero reduced rows and their pivot columns.
pub(crate) fn echelon(t: &Dense, mut rows: Vec<Vec<u8>>, col_order: &[usize]) -> (Vec<Vec<u8>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in col_order {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = t.inv[rows[r][c] as usize];
        if inv != 1 {
            let q = t.q;
            for x in rows[r].iter_mut() {
                *x = t.mul[inv as usize * q + *x as usize];
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = t.neg[row[c] as usize];
                axpy(t, row, &pivot_row, f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Monomial map `v -> v M` with `(v M)_j = diag_j * v_{perm^{-1}(j)}`; the
/// unit vector `s_i` goes to `diag_{perm(i)} s_{perm(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialTransform {
    pub perm: Vec<usize>,
    pub diag: Vec<FieldElement>,
}

impl MonomialTransform {
    pub fn new(perm: Vec<usize>, diag: Vec<FieldElement>) -> Result<Self> {
        let m = MonomialTransform { perm, diag };
        m.check_shape()?;
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        MonomialTransform {
            perm: (0..n).collect(),
            diag: vec![FieldElement::ONE; n],
        }
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        Self::new(perm, vec![FieldElement::ONE; n])
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_permutation(&self) -> bool {
        self.diag.iter().all(|&d| d == FieldElement::ONE)
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.perm.len();
        if self.diag.len() != n {
            return Err(Error::InvalidArgument("permutation and diagonal lengths differ".into()));
        }
        let mut seen = vec![false; n];
        for &p in &self.perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        if self.diag.iter().any(|d| d.is_zero()) {
            return Err(Error::InvalidArgument("diagonal entries must be nonzero".into()));
        }
        Ok(())
    }

    fn validate(&self, field: &GaloisField) -> Result<()> {
        self.check_shape()?;
        if self.diag.iter().any(|d| d.0 >= field.order()) {
            return Err(Error::InvalidArgument("diagonal entry outside the field".into()));
        }
        Ok(())
    }

    pub fn apply(&self, field: &GaloisField, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; v.len()];
        for (i, &x) in v.iter().enumerate() {
            let j = self.perm[i];
            out[j] = field.mul(self.diag[j], x);
        }
        out
    }

    fn apply_raw(&self, field: &GaloisField, v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; v.len()];
        for (i, &x) in v.iter().enumerate() {
            let j = self.perm[i];
            out[j] = field.mul(self.diag[j], FieldElement(x as u64)).0 as u8;
        }
        out
    }

    /// `self` followed by `next`: v -> (v self) next.
    pub fn then(&self, field: &GaloisField, next: &MonomialTransform) -> MonomialTransform {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut diag = vec![FieldElement::ONE; n];
        for i in 0..n {
            let j = self.perm[i];
            let k = next.perm[j];
            perm[i] = k;
            diag[k] = field.mul(next.diag[k], self.diag[j]);
        }
        MonomialTransform { perm, diag }
    }

    pub fn inverse(&self, field: &GaloisField) -> MonomialTransform {
        let n = self.len();
        let mut perm = vec![0; n];
        let mut diag = vec![FieldElement::ONE; n];
        for i in 0..n {
            let j = self.perm[i];
            perm[j] = i;
            diag[i] = field.inv(self.diag[j]);
        }
        MonomialTransform { perm, diag }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub counts: Vec<u128>,
}

impl WeightDistribution {
    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    /// Smallest nonzero weight, or `n + 1` for the zero code.
    pub fn min_weight(&self) -> usize {
        (1..self.counts.len())
            .find(|&w| self.counts[w] > 0)
            .unwrap_or(self.counts.len())
    }
}

/// Rows `v^s = (1, α^s, ..., α^{(n-1)s})` over the extension field, one per
/// element `s` of a defining set; `H c^T = 0` for a word `c` over the base
/// field exactly when `c` lies in the cyclic code with that defining set.
#[derive(Debug, Clone)]
pub struct GeneralizedParityCheck {
    pub embedding: Embedding,
    pub root: RootOfUnity,
    pub exponents: Vec<u64>,
    pub rows: Vec<Vec<FieldElement>>,
}

impl GeneralizedParityCheck {
    /// Works for constacyclic codes as well: pass a root of order 3n and
    /// exponents from the defining set in Z/3nZ.
    pub fn new(embedding: Embedding, root: RootOfUnity, n: usize, exponents: &[u64]) -> Self {
        let ext = embedding.ext().clone();
        let rows = exponents
            .iter()
            .map(|&s| {
                let base = ext.pow(root.element, s);
                let mut acc = FieldElement::ONE;
                (0..n)
                    .map(|_| {
                        let v = acc;
                        acc = ext.mul(acc, base);
                        v
                    })
                    .collect()
            })
            .collect();
        GeneralizedParityCheck {
            embedding,
            root,
            exponents: exponents.to_vec(),
            rows,
        }
    }

    pub fn syndrome(&self, word: &[FieldElement]) -> Vec<FieldElement> {
        let ext = self.embedding.ext();
        self.rows
            .iter()
            .map(|row| {
                ext.sum(
                    row.iter()
                        .zip(word)
                        .map(|(&h, &c)| ext.mul(h, self.embedding.embed(c))),
                )
            })
            .collect()
    }

    pub fn annihilates(&self, word: &[FieldElement]) -> bool {
        self.syndrome(word).iter().all(|x| x.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(q: u64) -> Arc<GaloisField> {
        let (p, m) = crate::arith::prime_power(q).unwrap();
        GaloisField::shared(p, m).unwrap()
    }

    fn fe(v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| FieldElement(x)).collect()
    }

    fn random_code(f: &Arc<GaloisField>, n: usize, k: usize, rng: &mut ChaCha8Rng) -> LinearCode {
        let rows: Vec<Vec<FieldElement>> = (0..k)
            .map(|_| (0..n).map(|_| FieldElement(rng.gen_range(0..f.order()))).collect())
            .collect();
        LinearCode::from_rows(f.clone(), n, &rows).unwrap()
    }

    /// All codewords of a small code by explicit span enumeration.
    fn span(c: &LinearCode) -> Vec<Vec<FieldElement>> {
        let q = c.q();
        let k = c.k();
        let mut out = Vec::new();
        for idx in 0..q.pow(k as u32) {
            let mut m = Vec::new();
            let mut x = idx;
            for _ in 0..k {
                m.push(FieldElement(x % q));
                x /= q;
            }
            out.push(c.encode(&m).unwrap());
        }
        out
    }

    #[test]
    fn identity_and_zero_rows() {
        let f = field(3);
        let full = LinearCode::full(f.clone(), 5).unwrap();
        assert_eq!(full.k(), 5);
        let zero = LinearCode::from_rows(f.clone(), 5, &[fe(&[0, 0, 0, 0, 0])]).unwrap();
        assert_eq!(zero.k(), 0);
        assert_eq!(full.euclidean_dual(), LinearCode::zero(f, 5).unwrap());
    }

    #[test]
    fn generator_polynomial_code_matches_span() {
        // g(x) = 1 + x + 2x^2 over GF(3), n = 8: rows are shifts of g
        let f = field(3);
        let g = [1u64, 1, 2];
        let rows: Vec<Vec<FieldElement>> = (0..6)
            .map(|s| {
                let mut r = vec![0u64; 8];
                for (i, &c) in g.iter().enumerate() {
                    r[s + i] = c;
                }
                fe(&r)
            })
            .collect();
        let c = LinearCode::from_rows(f.clone(), 8, &rows).unwrap();
        assert_eq!(c.k(), 6);
        // every polynomial multiple a(x) g(x) with deg a < 6 is a codeword
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a: Vec<u64> = (0..6).map(|_| rng.gen_range(0..3)).collect();
            let mut w = vec![0u64; 8];
            for (i, &ai) in a.iter().enumerate() {
                for (j, &gj) in g.iter().enumerate() {
                    w[i + j] = (w[i + j] + ai * gj) % 3;
                }
            }
            assert!(c.contains(&fe(&w)));
        }
        assert_eq!(span(&c).len(), 729);
    }

    #[test]
    fn rref_is_idempotent() {
        let f = field(4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let c = random_code(&f, 10, 4, &mut rng);
            let again = LinearCode::from_rows(f.clone(), 10, &c.generator()).unwrap();
            assert_eq!(c, again);
        }
    }

    #[test]
    fn double_duals() {
        let f = field(4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let c = random_code(&f, 10, 4, &mut rng);
            let e = c.euclidean_dual();
            assert_eq!(e.k() + c.k(), 10);
            assert_eq!(e.euclidean_dual(), c);
            let h = c.hermitian_dual().unwrap();
            assert_eq!(h.k() + c.k(), 10);
            assert_eq!(h.hermitian_dual().unwrap(), c);
            // every pair of codewords is Hermitian-orthogonal
            for x in c.generator() {
                for y in h.generator() {
                    let ip = f.sum(x.iter().zip(&y).map(|(&a, &b)| f.mul(a, f.pow(b, 2))));
                    assert!(ip.is_zero());
                }
            }
        }
        assert!(LinearCode::full(field(3), 4).unwrap().hermitian_dual().is_err());
    }

    #[test]
    fn hull_of_self_orthogonal_code() {
        // the [6,3] hexacode-like code spanned by (1,1,1,1,0,0)-style rows over GF(4)
        let f = field(4);
        let c = LinearCode::from_rows(f, 4, &[fe(&[1, 1, 0, 0]), fe(&[0, 0, 1, 1])]).unwrap();
        assert_eq!(c.hull_dim_hermitian().unwrap(), 2);
    }

    #[test]
    fn sum_and_intersection() {
        let f = field(2);
        let a = LinearCode::from_rows(f.clone(), 4, &[fe(&[1, 1, 0, 0]), fe(&[0, 0, 1, 1])]).unwrap();
        let b = LinearCode::from_rows(f.clone(), 4, &[fe(&[1, 1, 1, 1]), fe(&[1, 0, 1, 0])]).unwrap();
        assert_eq!(a.intersection(&b).unwrap().k(), 1);
        assert_eq!(a.sum(&b).unwrap().k(), 3);
        assert!(a.intersection(&b).unwrap().is_subcode_of(&a));
    }

    #[test]
    fn monomial_compose_and_inverse() {
        let f = field(5);
        let m1 = MonomialTransform::new(vec![1, 2, 0], fe(&[2, 3, 4])).unwrap();
        let m2 = MonomialTransform::new(vec![2, 0, 1], fe(&[1, 4, 2])).unwrap();
        let v = fe(&[1, 2, 3]);
        let lhs = m1.then(&f, &m2).apply(&f, &v);
        let rhs = m2.apply(&f, &m1.apply(&f, &v));
        assert_eq!(lhs, rhs);
        let inv = m1.inverse(&f);
        assert_eq!(inv.apply(&f, &m1.apply(&f, &v)), v);
        assert_eq!(m1.then(&f, &inv), MonomialTransform::identity(3));
        // s_0 -> diag_{perm(0)} s_{perm(0)}
        assert_eq!(m1.apply(&f, &fe(&[1, 0, 0])), fe(&[0, 3, 0]));
    }

    #[test]
    fn monomial_preserves_weights() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let c = random_code(&f, 8, 3, &mut rng);
            let mut perm: Vec<usize> = (0..8).collect();
            for i in (1..8).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let diag: Vec<FieldElement> = (0..8).map(|_| FieldElement(rng.gen_range(1..3))).collect();
            let m = MonomialTransform::new(perm, diag).unwrap();
            let d = c.apply_monomial(&m).unwrap();
            assert_eq!(
                c.weight_distribution(1 << 20).unwrap(),
                d.weight_distribution(1 << 20).unwrap()
            );
        }
    }
}
