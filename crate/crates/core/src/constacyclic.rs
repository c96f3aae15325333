//! ω-constacyclic codes over GF(4) of odd length n, described by defining
//! sets in Z/3nZ whose elements are all ≡ 1 (mod 3).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{euler_phi, gcd, mod_inverse};
use crate::certificate::{Certificate, CertificateKind, Direction};
use crate::cosets::{enumerate_affine_witnesses, mul_mod, shift_divisibility_constacyclic, AffineMode, CosetTable, DefiningSet, IndexMapKind};
use crate::cyclic::{CyclicCode, CyclicContext, RootTable};
use crate::error::{Error, Result};
use crate::galois::{FieldElement, GaloisField, RootOfUnity};
use crate::linear::{GeneralizedParityCheck, LinearCode, MonomialTransform};

const OMEGA: FieldElement = FieldElement(2);

/// The constant η in x^n - η.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftConstant {
    Omega,
    OmegaSquared,
}

impl ShiftConstant {
    pub fn value(self) -> FieldElement {
        match self {
            ShiftConstant::Omega => OMEGA,
            ShiftConstant::OmegaSquared => FieldElement(3),
        }
    }

    fn residue(self) -> u64 {
        match self {
            ShiftConstant::Omega => 1,
            ShiftConstant::OmegaSquared => 2,
        }
    }
}

/// Root δ of order 3n with δ^n = ω, and the 4-cosets modulo 3n.
#[derive(Debug)]
pub struct ConstaContext {
    n: u64,
    roots: RootTable,
    cosets: CosetTable,
}

impl ConstaContext {
    pub fn new(n: u64) -> Result<Arc<Self>> {
        if n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("length must be odd, got {n}")));
        }
        let base = GaloisField::shared(2, 2)?;
        let roots = RootTable::new(base, 3 * n, Some((n, OMEGA)))?;
        let cosets = CosetTable::new(3 * n, 4)?;
        Ok(Arc::new(ConstaContext { n, roots, cosets }))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.roots.base()
    }

    pub fn root(&self) -> RootOfUnity {
        self.roots.root
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.cosets
    }

    /// Cosets modulo 3n inside {1 + 3j}.
    pub fn admissible_cosets(&self) -> Vec<usize> {
        self.cosets.cosets_in_class(3, 1)
    }

    /// Every admissible defining set, in mask order over the admissible cosets.
    pub fn all_defining_sets(&self) -> Vec<DefiningSet> {
        let idx = self.admissible_cosets();
        self.cosets.all_unions(&idx).collect()
    }

    pub fn set_from_leaders(&self, leaders: &[u64]) -> Result<DefiningSet> {
        let set = self.cosets.from_leaders(leaders)?;
        self.check_set(&set, ShiftConstant::Omega)?;
        Ok(set)
    }

    fn check_set(&self, a: &DefiningSet, eta: ShiftConstant) -> Result<()> {
        if a.n() != 3 * self.n || a.q() != 4 {
            return Err(Error::ModulusMismatch {
                expected: 3 * self.n,
                got: a.n(),
            });
        }
        if let Some(&x) = a.elements().iter().find(|&&x| x % 3 != eta.residue()) {
            return Err(Error::InvalidArgument(format!(
                "{x} is not ≡ {} (mod 3)",
                eta.residue()
            )));
        }
        Ok(())
    }

    pub fn build(self: &Arc<Self>, a: &DefiningSet) -> Result<ConstacyclicCode> {
        self.check_set(a, ShiftConstant::Omega)?;
        let g = self.roots.generator(a.elements())?;
        let n = self.n as usize;
        let k = n - a.len();
        let rows: Vec<Vec<FieldElement>> = (0..k)
            .map(|s| {
                let mut row = vec![FieldElement::ZERO; n];
                row[s..s + g.len()].copy_from_slice(&g);
                row
            })
            .collect();
        let code = LinearCode::from_rows(self.field().clone(), n, &rows)?;
        if code.k() != k {
            return Err(Error::Internal(format!("expected dimension {k}, got {}", code.k())));
        }
        Ok(ConstacyclicCode {
            ctx: self.clone(),
            eta: ShiftConstant::Omega,
            defining_set: a.clone(),
            generator_poly: g,
            code,
        })
    }

    pub fn build_leaders(self: &Arc<Self>, leaders: &[u64]) -> Result<ConstacyclicCode> {
        self.build(&self.set_from_leaders(leaders)?)
    }

    /// Defining set of an ω-constacyclic code, or `None` if `code` is not one.
    pub fn identify(&self, code: &LinearCode) -> Result<Option<DefiningSet>> {
        if code.q() != 4 || code.n() as u64 != self.n {
            return Err(Error::InvalidArgument("code does not match the context".into()));
        }
        let f = self.field();
        let gens = code.generator();
        for row in &gens {
            let mut shifted = row.clone();
            shifted.rotate_right(1);
            shifted[0] = f.mul(OMEGA, shifted[0]);
            if !code.contains(&shifted) {
                return Ok(None);
            }
        }
        let mut elems = Vec::new();
        for ci in self.admissible_cosets() {
            let coset = &self.cosets.cosets()[ci];
            if gens.iter().all(|r| self.roots.evaluate(r, coset[0]).is_zero()) {
                elems.extend_from_slice(coset);
            }
        }
        let set = DefiningSet::new(3 * self.n, 4, elems)?;
        if set.len() + code.k() != self.n as usize {
            return Err(Error::Internal("defining set size disagrees with dimension".into()));
        }
        Ok(Some(set))
    }

    pub fn parity_check(&self, a: &DefiningSet) -> Result<GeneralizedParityCheck> {
        self.check_set(a, ShiftConstant::Omega)?;
        Ok(GeneralizedParityCheck::new(
            self.roots.embedding.clone(),
            self.roots.root,
            self.n as usize,
            a.elements(),
        ))
    }

    /// Monomial map of f(x) -> f(x^e) mod (x^n - ω): x^i -> ω^s x^r with e i = r + s n.
    pub fn psi_transform(&self, e: u64) -> Result<MonomialTransform> {
        let n = self.n;
        if e % 3 != 1 || gcd(e, 3 * n) != 1 {
            return Err(Error::InvalidMap(format!("need e ≡ 1 (mod 3) and gcd(e, {}) = 1, got e = {e}", 3 * n)));
        }
        let f = self.field();
        let mut perm = vec![0; n as usize];
        let mut diag = vec![FieldElement::ONE; n as usize];
        for i in 0..n {
            let ei = e as u128 * i as u128;
            let r = (ei % n as u128) as usize;
            let s = ((ei / n as u128) % 3) as u64;
            perm[i as usize] = r;
            diag[r] = f.pow(OMEGA, s);
        }
        MonomialTransform::new(perm, diag)
    }

    /// Coordinate scaling c_i -> δ^(-b i) c_i, taking C_A to C_(A+b); only
    /// available when δ^(-b) ∈ GF(4) and the result is still ω-constacyclic.
    pub fn shift_transform(&self, b: u64) -> Option<MonomialTransform> {
        let m = 3 * self.n;
        let lambda = self.roots.base_power((m - b % m) % m)?;
        let f = self.field();
        if f.pow(lambda, self.n) != FieldElement::ONE {
            return None;
        }
        let mut diag = Vec::with_capacity(self.n as usize);
        let mut acc = FieldElement::ONE;
        for _ in 0..self.n {
            diag.push(acc);
            acc = f.mul(acc, lambda);
        }
        MonomialTransform::new((0..self.n as usize).collect(), diag).ok()
    }

    /// Transform for θ(x) = e x + b on defining sets, when one exists.
    pub fn affine_transform(&self, e: u64, b: u64) -> Result<Option<MonomialTransform>> {
        let m = 3 * self.n;
        let e_inv = if m == 3 { 1 } else { mod_inverse(e % m, m).ok_or_else(|| Error::InvalidMap(format!("gcd({e}, {m}) != 1")))? };
        let psi = self.psi_transform(e_inv)?;
        Ok(self.shift_transform(b).map(|s| psi.then(self.field(), &s)))
    }

    fn units(&self) -> Vec<u64> {
        let m = 3 * self.n;
        (1..m).filter(|&e| e % 3 == 1 && gcd(e, m) == 1).collect()
    }
}

#[derive(Clone)]
pub struct ConstacyclicCode {
    ctx: Arc<ConstaContext>,
    eta: ShiftConstant,
    defining_set: DefiningSet,
    generator_poly: Vec<FieldElement>,
    code: LinearCode,
}

impl fmt::Debug for ConstacyclicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}-constacyclic [{}, {}] with defining set {}",
            self.eta,
            self.ctx.n,
            self.code.k(),
            self.defining_set
        )
    }
}

impl ConstacyclicCode {
    pub fn context(&self) -> &Arc<ConstaContext> {
        &self.ctx
    }

    pub fn n(&self) -> u64 {
        self.ctx.n
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn shift_constant(&self) -> ShiftConstant {
        self.eta
    }

    pub fn defining_set(&self) -> &DefiningSet {
        &self.defining_set
    }

    pub fn generator_poly(&self) -> &[FieldElement] {
        &self.generator_poly
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Codeword test through the η-twisted shift and the code itself.
    pub fn is_constacyclic(&self) -> bool {
        let f = self.ctx.field();
        self.code.generator().iter().all(|row| {
            let mut s = row.clone();
            s.rotate_right(1);
            s[0] = f.mul(self.eta.value(), s[0]);
            self.code.contains(&s)
        })
    }
}

pub fn build_constacyclic(n: u64, a: &DefiningSet) -> Result<ConstacyclicCode> {
    ConstaContext::new(n)?.build(a)
}

/// Coordinatewise conjugation; ω- and ω²-constacyclic codes trade places.
pub fn conjugate_code(c: &ConstacyclicCode) -> Result<ConstacyclicCode> {
    let m = 3 * c.ctx.n;
    let eta = match c.eta {
        ShiftConstant::Omega => ShiftConstant::OmegaSquared,
        ShiftConstant::OmegaSquared => ShiftConstant::Omega,
    };
    let f = c.ctx.field();
    let conj = |x: FieldElement| f.pow(x, 2);
    Ok(ConstacyclicCode {
        ctx: c.ctx.clone(),
        eta,
        defining_set: DefiningSet::new(m, 4, c.defining_set.elements().iter().map(|&x| 2 * x % m))?,
        generator_poly: c.generator_poly.iter().map(|&x| conj(x)).collect(),
        code: c.code.conjugate()?,
    })
}

/// ψ_e(C): defining set e^(-1) A, verified by code equality under the
/// induced monomial map.
pub fn psi_substitution(c: &ConstacyclicCode, e: u64) -> Result<(ConstacyclicCode, Certificate)> {
    if c.eta != ShiftConstant::Omega {
        return Err(Error::InvalidArgument("ψ is defined here on ω-constacyclic codes".into()));
    }
    let ctx = &c.ctx;
    let m = 3 * ctx.n;
    let t = ctx.psi_transform(e)?;
    let e_inv = if m == 3 { 1 } else { mod_inverse(e % m, m).expect("checked by psi_transform") };
    let image = DefiningSet::new(m, 4, c.defining_set.elements().iter().map(|&x| mul_mod(e_inv, x, m)))?;
    let target = ctx.build(&image)?;
    let cert = Certificate::by_transform(CertificateKind::Psi { e }, Direction::Forward, &c.code, &target.code, t);
    if !cert.verified {
        return Err(Error::Internal(format!("ψ_{e} image does not match defining set {image}")));
    }
    Ok((target, cert))
}

fn same_parameters_certificate(c1: &ConstacyclicCode, c2: &ConstacyclicCode, e: u64, b: u64, weight_budget: u128) -> Result<Certificate> {
    let ctx = &c1.ctx;
    let kind = CertificateKind::SameParameters { e, b };
    Ok(match ctx.affine_transform(e, b)? {
        Some(t) => Certificate::by_transform(kind, Direction::Forward, &c1.code, &c2.code, t),
        None => {
            let side = shift_divisibility_constacyclic(ctx.n, c1.defining_set.len() as u64, b);
            Certificate::by_isometry(kind, side, &c1.code, &c2.code, weight_budget)
        }
    })
}

/// Certificate when φ_{3j}(A1) = A2 and n | 3j |A1|; `None` otherwise.
pub fn shift_same_parameters(
    c1: &ConstacyclicCode,
    c2: &ConstacyclicCode,
    j: u64,
    weight_budget: u128,
) -> Result<Option<Certificate>> {
    let n = c1.ctx.n;
    if j == 0 || j > n {
        return Err(Error::InvalidArgument(format!("need 1 <= j <= {n}, got {j}")));
    }
    let m = 3 * n;
    let b = 3 * j % m;
    let image: Vec<u64> = {
        let mut v: Vec<u64> = c1.defining_set.elements().iter().map(|&x| (x + b) % m).collect();
        v.sort_unstable();
        v
    };
    if image != c2.defining_set.elements() || !shift_divisibility_constacyclic(n, c1.defining_set.len() as u64, b) {
        return Ok(None);
    }
    same_parameters_certificate(c1, c2, 1, b, weight_budget).map(Some)
}

/// All θ(x) = e x + 3j with θ(A1) = A2, e ≡ 1 (mod 3), gcd(e, 3n) = 1 and
/// n | 3j |A1|, each with its certificate.
pub fn affine_same_parameters(c1: &ConstacyclicCode, c2: &ConstacyclicCode, weight_budget: u128) -> Result<Vec<Certificate>> {
    let n = c1.ctx.n;
    let maps = enumerate_affine_witnesses(&c1.defining_set, &c2.defining_set, AffineMode::Constacyclic { n })?;
    maps.into_iter()
        .filter_map(|w| match w.kind {
            IndexMapKind::Affine { e, b } => Some((e, b)),
            _ => None,
        })
        .map(|(e, b)| same_parameters_certificate(c1, c2, e, b, weight_budget))
        .collect()
}

/// Distinct images of A under every admissible affine map, A itself included.
pub fn affine_orbit(ctx: &ConstaContext, a: &DefiningSet) -> Vec<(DefiningSet, u64, u64)> {
    let m = 3 * ctx.n;
    let size = a.len() as u64;
    let shifts: Vec<u64> = (0..m)
        .filter(|&b| shift_divisibility_constacyclic(ctx.n, size, b))
        .collect();
    let mut seen: BTreeMap<DefiningSet, (u64, u64)> = BTreeMap::new();
    for e in ctx.units() {
        for &b in &shifts {
            let image = a.elements().iter().map(|&x| (mul_mod(e, x, m) + b) % m);
            if let Ok(set) = DefiningSet::new(m, 4, image) {
                seen.entry(set).or_insert((e, b));
            }
        }
    }
    seen.entry(a.clone()).or_insert((1, 0));
    seen.into_iter().map(|(s, (e, b))| (s, e, b)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierOrbit {
    pub representative: DefiningSet,
    /// (member, e) with μ_e(representative) = member.
    pub members: Vec<(DefiningSet, u64)>,
}

/// Multiplier orbits of all ω-constacyclic defining sets at length n. When
/// gcd(3n, φ(3n)) = 1 these are the permutation-equivalence classes.
pub fn palfy_classify(n: u64) -> Result<Vec<MultiplierOrbit>> {
    let m = 3 * n;
    if gcd(m, euler_phi(m)) != 1 {
        return Err(Error::InvalidArgument(format!("gcd({m}, φ({m})) != 1")));
    }
    let ctx = ConstaContext::new(n)?;
    multiplier_orbits(&ctx)
}

pub fn multiplier_orbits(ctx: &ConstaContext) -> Result<Vec<MultiplierOrbit>> {
    let m = 3 * ctx.n;
    let mut assigned: BTreeMap<DefiningSet, usize> = BTreeMap::new();
    let mut out: Vec<MultiplierOrbit> = Vec::new();
    let mut sets = ctx.all_defining_sets();
    sets.sort();
    for a in sets {
        if assigned.contains_key(&a) {
            continue;
        }
        let mut members: BTreeMap<DefiningSet, u64> = BTreeMap::new();
        for e in ctx.units().into_iter().chain(std::iter::once(1)) {
            let image = DefiningSet::new(m, 4, a.elements().iter().map(|&x| mul_mod(e, x, m)))?;
            members.entry(image).or_insert(e);
        }
        for s in members.keys() {
            assigned.insert(s.clone(), out.len());
        }
        out.push(MultiplierOrbit {
            representative: a,
            members: members.into_iter().collect(),
        });
    }
    Ok(out)
}

/// The same defining set read as a cyclic code of length 3n, with the
/// cyclic root chosen equal to δ.
pub fn embed_as_cyclic(c: &ConstacyclicCode) -> Result<CyclicCode> {
    let n = c.ctx.n;
    let cyc = CyclicContext::anchored(3 * n, 4, n, OMEGA)?;
    if cyc.root() != c.ctx.root() {
        return Err(Error::Internal("cyclic and constacyclic roots differ".into()));
    }
    cyc.build(&c.defining_set)
}

/// Checks that the length-3n parity rows are [H ωH ω²H] with H the
/// length-n rows of the constacyclic code.
pub fn parity_blocks_match(c: &ConstacyclicCode) -> Result<bool> {
    let n = c.ctx.n as usize;
    let h = c.ctx.parity_check(&c.defining_set)?;
    let long = GeneralizedParityCheck::new(h.embedding.clone(), h.root, 3 * n, &h.exponents);
    let ext = h.embedding.ext();
    let w = h.embedding.embed(OMEGA);
    Ok(h.rows.iter().zip(&long.rows).all(|(short, row)| {
        (0..3).all(|blk| {
            let scale = ext.pow(w, blk as u64);
            (0..n).all(|i| row[blk * n + i] == ext.mul(scale, short[i]))
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::DEFAULT_ENUMERATION_BUDGET;

    #[test]
    fn trivial_codes() {
        let ctx = ConstaContext::new(5).unwrap();
        let full = ctx.build(&DefiningSet::empty(15, 4)).unwrap();
        assert_eq!(full.k(), 5);
        let all = DefiningSet::new(15, 4, [1, 4, 7, 10, 13]).unwrap();
        let zero = ctx.build(&all).unwrap();
        assert_eq!(zero.k(), 0);
        // x^5 - ω = x^5 + ω
        let g = zero.generator_poly();
        assert_eq!(g[0], OMEGA);
        assert_eq!(g[5], FieldElement::ONE);
        assert!(g[1..5].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn rejects_wrong_residue() {
        let ctx = ConstaContext::new(5).unwrap();
        assert!(ctx.build(&DefiningSet::new(15, 4, [2, 8]).unwrap()).is_err());
        assert!(ConstaContext::new(6).is_err());
    }

    #[test]
    fn codes_are_constacyclic_and_identified() {
        for n in [5, 7, 9, 15] {
            let ctx = ConstaContext::new(n).unwrap();
            for a in ctx.all_defining_sets() {
                let c = ctx.build(&a).unwrap();
                assert!(c.is_constacyclic());
                assert_eq!(ctx.identify(c.code()).unwrap(), Some(a));
            }
        }
    }

    #[test]
    fn conjugation() {
        let ctx = ConstaContext::new(5).unwrap();
        for a in ctx.all_defining_sets() {
            let c = ctx.build(&a).unwrap();
            let t = conjugate_code(&c).unwrap();
            assert_eq!(t.shift_constant(), ShiftConstant::OmegaSquared);
            assert!(t.is_constacyclic());
            assert_eq!(
                c.code().weight_distribution(DEFAULT_ENUMERATION_BUDGET).unwrap(),
                t.code().weight_distribution(DEFAULT_ENUMERATION_BUDGET).unwrap()
            );
            let back = conjugate_code(&t).unwrap();
            assert_eq!(back.code(), c.code());
            assert_eq!(back.defining_set(), c.defining_set());
        }
    }

    #[test]
    fn psi_matches_codewords() {
        let ctx = ConstaContext::new(5).unwrap();
        let f = ctx.field().clone();
        for a in ctx.all_defining_sets() {
            let c = ctx.build(&a).unwrap();
            let (img, cert) = psi_substitution(&c, 7).unwrap();
            assert!(cert.verified);
            // substitute x -> x^7 in each generator row and reduce mod x^5 - ω
            for row in c.code().generator() {
                let mut out = vec![FieldElement::ZERO; 5];
                for (i, &x) in row.iter().enumerate() {
                    let ei = 7 * i as u64;
                    let r = (ei % 5) as usize;
                    out[r] = f.add(out[r], f.mul(x, f.pow(OMEGA, ei / 5)));
                }
                assert!(img.code().contains(&out));
            }
            let (same, _) = psi_substitution(&c, 1).unwrap();
            assert_eq!(same.code(), c.code());
        }
        assert!(ctx.psi_transform(2).is_err());
        assert!(ctx.psi_transform(10).is_err());
    }

    #[test]
    fn frobenius_multiplier_is_automorphism() {
        let ctx = ConstaContext::new(111).unwrap();
        let c = ctx.build_leaders(&[19, 37]).unwrap();
        assert_eq!(c.k(), 90);
        let (img, _) = psi_substitution(&c, 4).unwrap();
        assert_eq!(img.defining_set(), c.defining_set());
    }

    #[test]
    fn shift_certificates_verify() {
        for n in [9, 15] {
            let ctx = ConstaContext::new(n).unwrap();
            let sets = ctx.all_defining_sets();
            let codes: Vec<_> = sets.iter().map(|s| ctx.build(s).unwrap()).collect();
            for c1 in &codes {
                for c2 in &codes {
                    for j in 1..=n {
                        if let Some(cert) = shift_same_parameters(c1, c2, j, 1 << 20).unwrap() {
                            assert!(cert.verified, "{c1:?} {c2:?} j={j}");
                            assert_eq!(c1.k(), c2.k());
                        }
                    }
                }
            }
            let c = codes.last().unwrap();
            assert!(shift_same_parameters(c, c, n, 1 << 20).unwrap().is_some());
        }
    }

    #[test]
    fn embedding_blocks() {
        let ctx = ConstaContext::new(5).unwrap();
        let c = ctx.build_leaders(&[1]).unwrap();
        let cyc = embed_as_cyclic(&c).unwrap();
        assert_eq!(cyc.n(), 15);
        assert_eq!(cyc.k(), 13);
        assert!(parity_blocks_match(&c).unwrap());
        let one = ConstaContext::new(1).unwrap();
        let c = one.build(&DefiningSet::empty(3, 4)).unwrap();
        assert_eq!(embed_as_cyclic(&c).unwrap().n(), 3);
    }

    #[test]
    fn orbit_at_111() {
        let ctx = ConstaContext::new(111).unwrap();
        let a = ctx.set_from_leaders(&[19, 37]).unwrap();
        assert!(affine_orbit(&ctx, &a).len() >= 6);
    }
}
