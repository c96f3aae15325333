//! Cyclic codes from defining sets, the structural monomial maps P_σD, P_γ
//! and P_χ, and certificate search between cyclic codes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::arith::{gcd, mod_inverse, prime_power};
use crate::certificate::{Certificate, CertificateKind, Direction};
use crate::cosets::{
    build_ae, enumerate_affine_witnesses, mul_mod, shift_divisibility_cyclic, split_three_power, AffineMode,
    CosetTable, DefiningSet,
};
use crate::error::{Error, Result};
use crate::galois::{anchored_root, primitive_nth_root, splitting_field, Embedding, FieldElement, GaloisField, RootOfUnity};
use crate::linear::{EquivalenceMode, EquivalenceOutcome, GeneralizedParityCheck, LinearCode, MonomialTransform};

/// A root of unity of the requested order in the splitting field, with its
/// power table.
#[derive(Debug)]
pub(crate) struct RootTable {
    pub(crate) embedding: Embedding,
    pub(crate) root: RootOfUnity,
    pub(crate) powers: Vec<FieldElement>,
}

impl RootTable {
    pub(crate) fn new(base: Arc<GaloisField>, order: u64, anchor: Option<(u64, FieldElement)>) -> Result<Self> {
        let spec = splitting_field(base.order(), order)?;
        let ext = GaloisField::shared(spec.characteristic, spec.degree)?;
        let embedding = Embedding::new(base, ext.clone())?;
        let root = match anchor {
            None => primitive_nth_root(&ext, order)?,
            Some((power, value)) => anchored_root(&ext, order, power, embedding.embed(value))?,
        };
        let mut powers = Vec::with_capacity(order as usize);
        let mut acc = FieldElement::ONE;
        for _ in 0..order {
            powers.push(acc);
            acc = ext.mul(acc, root.element);
        }
        Ok(RootTable {
            embedding,
            root,
            powers,
        })
    }

    pub(crate) fn ext(&self) -> &GaloisField {
        self.embedding.ext()
    }

    pub(crate) fn base(&self) -> &Arc<GaloisField> {
        self.embedding.base()
    }

    /// ∏ (x - root^s), ascending coefficients, pulled back to the base field.
    pub(crate) fn generator(&self, exps: &[u64]) -> Result<Vec<FieldElement>> {
        let ext = self.ext();
        let mut g = vec![FieldElement::ONE];
        for &s in exps {
            let r = self.powers[s as usize];
            let mut next = vec![FieldElement::ZERO; g.len() + 1];
            for (i, &c) in g.iter().enumerate() {
                next[i + 1] = ext.add(next[i + 1], c);
                next[i] = ext.sub(next[i], ext.mul(c, r));
            }
            g = next;
        }
        g.iter()
            .map(|&c| {
                self.embedding.restrict(c).ok_or_else(|| {
                    Error::Internal("generator coefficient outside the base field".into())
                })
            })
            .collect()
    }

    /// Σ c_i root^(s i)
    pub(crate) fn evaluate(&self, word: &[FieldElement], s: u64) -> FieldElement {
        let ext = self.ext();
        let order = self.powers.len();
        let s = s as usize % order;
        let mut acc = FieldElement::ZERO;
        for (i, &c) in word.iter().enumerate() {
            if !c.is_zero() {
                acc = ext.add(acc, ext.mul(self.embedding.embed(c), self.powers[s * i % order]));
            }
        }
        acc
    }

    /// root^t as a base-field element, if it lies there.
    pub(crate) fn base_power(&self, t: u64) -> Option<FieldElement> {
        self.embedding.restrict(self.powers[(t % self.powers.len() as u64) as usize])
    }
}

/// Cosets, the fixed root α and the fields for cyclic codes of one length.
#[derive(Debug)]
pub struct CyclicContext {
    n: u64,
    q: u64,
    roots: RootTable,
    cosets: CosetTable,
}

impl CyclicContext {
    /// Context with α the canonical primitive n-th root.
    pub fn new(n: u64, q: u64) -> Result<Arc<Self>> {
        Self::build_context(n, q, None)
    }

    /// Context with α^power = value; `value` is an element of GF(q).
    pub fn anchored(n: u64, q: u64, power: u64, value: FieldElement) -> Result<Arc<Self>> {
        Self::build_context(n, q, Some((power, value)))
    }

    /// GF(4) context with α^(n/3) = ω, where ω is the field generator.
    pub fn omega_anchored(n: u64) -> Result<Arc<Self>> {
        if !n.is_multiple_of(3) {
            return Err(Error::InvalidArgument(format!("3 does not divide n = {n}")));
        }
        Self::anchored(n, 4, n / 3, FieldElement(2))
    }

    fn build_context(n: u64, q: u64, anchor: Option<(u64, FieldElement)>) -> Result<Arc<Self>> {
        let base = GaloisField::of_order(q)?;
        if !base.is_small() {
            return Err(Error::WrongField {
                expected: "a field with at most 256 elements".into(),
                got: format!("GF({q})"),
            });
        }
        let cosets = CosetTable::new(n, q)?;
        let roots = RootTable::new(base, n, anchor)?;
        Ok(Arc::new(CyclicContext { n, q, roots, cosets }))
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.roots.base()
    }

    pub fn root(&self) -> RootOfUnity {
        self.roots.root
    }

    pub fn embedding(&self) -> &Embedding {
        &self.roots.embedding
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.cosets
    }

    /// α^(n/3) as an element of GF(q), when 3 | n and it lies there.
    pub fn cube_root_of_unity(&self) -> Option<FieldElement> {
        self.n.is_multiple_of(3).then(|| self.roots.base_power(self.n / 3)).flatten()
    }

    fn check_set(&self, a: &DefiningSet) -> Result<()> {
        if a.n() != self.n || a.q() != self.q {
            return Err(Error::ModulusMismatch {
                expected: self.n,
                got: a.n(),
            });
        }
        Ok(())
    }

    pub fn build(self: &Arc<Self>, a: &DefiningSet) -> Result<CyclicCode> {
        self.check_set(a)?;
        let g = self.roots.generator(a.elements()).map_err(|_| Error::NotCosetClosed {
            n: self.n,
            q: self.q,
            detail: "generator coefficients leave the base field".into(),
        })?;
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
        Ok(CyclicCode {
            ctx: self.clone(),
            defining_set: a.clone(),
            generator_poly: g,
            code,
        })
    }

    pub fn build_leaders(self: &Arc<Self>, leaders: &[u64]) -> Result<CyclicCode> {
        self.build(&self.cosets.from_leaders(leaders)?)
    }

    /// Defining set of `code` relative to α, or `None` if it is not cyclic.
    pub fn identify(&self, code: &LinearCode) -> Result<Option<DefiningSet>> {
        if code.field_spec() != self.field().spec() || code.n() as u64 != self.n {
            return Err(Error::InvalidArgument("code does not match the context".into()));
        }
        let gens = code.generator();
        for row in &gens {
            let mut shifted = row.clone();
            shifted.rotate_right(1);
            if !code.contains(&shifted) {
                return Ok(None);
            }
        }
        let mut elems = Vec::new();
        for coset in self.cosets.cosets() {
            if gens.iter().all(|r| self.roots.evaluate(r, coset[0]).is_zero()) {
                elems.extend_from_slice(coset);
            }
        }
        let set = DefiningSet::new(self.n, self.q, elems)?;
        if set.len() + code.k() != self.n as usize {
            return Err(Error::Internal("defining set size disagrees with dimension".into()));
        }
        Ok(Some(set))
    }

    /// Wraps a linear code that is cyclic.
    pub fn recognize(self: &Arc<Self>, code: &LinearCode) -> Result<Option<CyclicCode>> {
        match self.identify(code)? {
            Some(set) => self.build(&set).map(Some),
            None => Ok(None),
        }
    }

    pub fn parity_check(&self, a: &DefiningSet) -> Result<GeneralizedParityCheck> {
        self.check_set(a)?;
        Ok(GeneralizedParityCheck::new(
            self.roots.embedding.clone(),
            self.roots.root,
            self.n as usize,
            a.elements(),
        ))
    }

    fn same_root(&self, other: &CyclicContext) -> bool {
        self.n == other.n && self.q == other.q && self.roots.root == other.roots.root
    }

    fn units(&self) -> Vec<u64> {
        if self.n == 1 {
            return vec![0];
        }
        (1..self.n).filter(|&a| gcd(a, self.n) == 1).collect()
    }

    /// Monomial map taking C_A to C_{eA+b}; `None` when α^(-b) is not in GF(q).
    pub fn affine_transform(&self, e: u64, b: u64) -> Result<Option<MonomialTransform>> {
        let n = self.n;
        let field = self.field();
        let lambda = match self.roots.base_power((n - b % n) % n) {
            Some(l) => l,
            None => return Ok(None),
        };
        let e_inv = if n == 1 {
            0
        } else {
            mod_inverse(e % n, n).ok_or_else(|| Error::InvalidMap(format!("gcd({e}, {n}) != 1")))?
        };
        let perm = (0..n).map(|i| mul_mod(e_inv, i, n) as usize).collect();
        let mult = MonomialTransform::permutation(perm)?;
        let mut diag = Vec::with_capacity(n as usize);
        let mut acc = FieldElement::ONE;
        for _ in 0..n {
            diag.push(acc);
            acc = field.mul(acc, lambda);
        }
        let scale = MonomialTransform::new((0..n as usize).collect(), diag)?;
        Ok(Some(mult.then(field, &scale)))
    }

    /// Certificate for A2 = e A1 + b between two built codes.
    pub fn affine_certificate(&self, c1: &CyclicCode, c2: &CyclicCode, e: u64, b: u64, weight_budget: u128) -> Result<Certificate> {
        let kind = if b == 0 {
            CertificateKind::Multiplier { a: e }
        } else if e == 1 {
            CertificateKind::Shift { b }
        } else {
            CertificateKind::Affine { e, b }
        };
        Ok(match self.affine_transform(e, b)? {
            Some(m) => Certificate::by_transform(kind, Direction::Forward, &c1.code, &c2.code, m),
            None => {
                let side = shift_divisibility_cyclic(self.n, self.q, c1.defining_set.len() as u64, b);
                Certificate::by_isometry(kind, side, &c1.code, &c2.code, weight_budget)
            }
        })
    }

    /// The structural maps that apply at this length and field.
    pub fn structural_maps(&self) -> Vec<(CertificateKind, MonomialTransform)> {
        let n = self.n as usize;
        let field = self.field();
        let mut out = Vec::new();
        if let Ok(m) = sigma_transform(n, field) {
            out.push((CertificateKind::PSigmaD, m));
        }
        if n > 8 {
            if let Ok(m) = sigma_block_transform(n, field) {
                out.push((CertificateKind::PSigmaDBlocks, m));
            }
        }
        if let Ok(m) = gamma_transform(n) {
            out.push((CertificateKind::PGamma, m));
        }
        if self.q == 4 {
            if let Ok(m) = chi_transform(n) {
                out.push((CertificateKind::PChi, m));
            }
        }
        out
    }

    /// Coordinate permutations x -> a M_d(x) at odd prime-power lengths p^m, m >= 2.
    pub fn generalized_multipliers(&self) -> Vec<(CertificateKind, MonomialTransform)> {
        let n = self.n;
        let (p, m) = match prime_power(n) {
            Some((p, m)) if p % 2 == 1 && m >= 2 => (p, m),
            _ => return Vec::new(),
        };
        let mut out = Vec::new();
        for k in 1..=m {
            let pk = p.pow(k);
            for d in 2..pk {
                if gcd(d, pk) != 1 {
                    continue;
                }
                for a in self.units() {
                    let perm = (0..n)
                        .map(|x| {
                            let (i, j) = (x % pk, x / pk);
                            mul_mod(a, d * i % pk + j * pk, n) as usize
                        })
                        .collect();
                    let t = MonomialTransform::permutation(perm).expect("generalized multiplier is a bijection");
                    out.push((CertificateKind::GeneralizedMultiplier { d, k, a }, t));
                }
            }
        }
        out
    }

    /// Every union of cosets, in mask order.
    pub fn all_defining_sets(&self) -> Vec<DefiningSet> {
        let idx = self.cosets.all_indices();
        self.cosets.all_unions(&idx).collect()
    }
}

#[derive(Clone)]
pub struct CyclicCode {
    ctx: Arc<CyclicContext>,
    defining_set: DefiningSet,
    generator_poly: Vec<FieldElement>,
    code: LinearCode,
}

impl fmt::Debug for CyclicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cyclic [{}, {}] over GF({}) with defining set {}",
            self.ctx.n,
            self.code.k(),
            self.ctx.q,
            self.defining_set
        )
    }
}

impl CyclicCode {
    pub fn context(&self) -> &Arc<CyclicContext> {
        &self.ctx
    }

    pub fn n(&self) -> u64 {
        self.ctx.n
    }

    pub fn q(&self) -> u64 {
        self.ctx.q
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn defining_set(&self) -> &DefiningSet {
        &self.defining_set
    }

    /// Ascending coefficients, monic.
    pub fn generator_poly(&self) -> &[FieldElement] {
        &self.generator_poly
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn root(&self) -> RootOfUnity {
        self.ctx.root()
    }

    /// (Z/nZ) \ (-A)
    pub fn dual_defining_set(&self) -> DefiningSet {
        self.defining_set.scaled(-1).complement()
    }

    pub fn euclidean_dual(&self) -> Result<CyclicCode> {
        self.ctx.build(&self.dual_defining_set())
    }
}

pub fn build_cyclic(n: u64, q: u64, a: &DefiningSet) -> Result<CyclicCode> {
    CyclicContext::new(n, q)?.build(a)
}

fn minus_one(field: &GaloisField) -> FieldElement {
    field.neg(FieldElement::ONE)
}

fn check_sigma(n: usize, field: &GaloisField) -> Result<()> {
    if n == 0 || !n.is_multiple_of(8) {
        return Err(Error::InvalidArgument(format!("P_σD needs 8 | n, got n = {n}")));
    }
    if field.characteristic() == 2 {
        return Err(Error::WrongField {
            expected: "odd characteristic".into(),
            got: format!("GF({})", field.order()),
        });
    }
    Ok(())
}

/// P_σD: s_i -> s_i, -s_i, -s_{i+n/2}, s_{i+n/2} for i ≡ 0, 1, 2, 3 (mod 4).
pub fn sigma_transform(n: usize, field: &GaloisField) -> Result<MonomialTransform> {
    check_sigma(n, field)?;
    let perm = (0..n).map(|i| if i % 4 < 2 { i } else { (i + n / 2) % n }).collect();
    let diag = (0..n)
        .map(|j| if matches!(j % 4, 1 | 2) { minus_one(field) } else { FieldElement::ONE })
        .collect();
    MonomialTransform::new(perm, diag)
}

/// The length-8 P_σD repeated along the diagonal, one block per 8 coordinates.
pub fn sigma_block_transform(n: usize, field: &GaloisField) -> Result<MonomialTransform> {
    check_sigma(n, field)?;
    let block = sigma_transform(8, field)?;
    let perm = (0..n).map(|i| i / 8 * 8 + block.perm[i % 8]).collect();
    let diag = (0..n).map(|j| block.diag[j % 8]).collect();
    MonomialTransform::new(perm, diag)
}

/// P_γ with γ(i) = i for even i and i - 2 for odd i.
pub fn gamma_transform(n: usize) -> Result<MonomialTransform> {
    if n == 0 || !n.is_multiple_of(8) {
        return Err(Error::InvalidArgument(format!("P_γ needs 8 | n, got n = {n}")));
    }
    MonomialTransform::permutation((0..n).map(|i| if i % 2 == 0 { i } else { (i + n - 2) % n }).collect())
}

/// P_χ with χ(i) = i + 3 for i ≡ 0, 4, 5 and i - 3 for i ≡ 3, 7, 8 (mod 9).
pub fn chi_transform(n: usize) -> Result<MonomialTransform> {
    if n == 0 || !n.is_multiple_of(27) || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("P_χ needs odd n with 27 | n, got n = {n}")));
    }
    MonomialTransform::permutation(
        (0..n)
            .map(|i| match i % 9 {
                0 | 4 | 5 => i + 3,
                3 | 7 | 8 => i - 3,
                _ => i,
            })
            .collect(),
    )
}

/// The two defining sets of a structural theorem and the certificate
/// relating their codes.
#[derive(Debug, Clone)]
pub struct TheoremInstance {
    pub a1: DefiningSet,
    pub a2: DefiningSet,
    pub certificate: Certificate,
}

fn set_from(ctx: &CyclicContext, elems: impl IntoIterator<Item = u64>) -> Result<DefiningSet> {
    DefiningSet::new(ctx.n, ctx.q, elems)
}

/// A1 = A ∪ {n/4, 3n/4} and A2 = (A + n/2) ∪ {0, n/2}, related by P_σD.
/// Needs odd characteristic, 8 | n and every element of A odd.
pub fn theorem_monomial_action(ctx: &Arc<CyclicContext>, a: &DefiningSet) -> Result<TheoremInstance> {
    ctx.check_set(a)?;
    let n = ctx.n;
    let sigma = sigma_transform(n as usize, ctx.field())?;
    if let Some(&x) = a.elements().iter().find(|&&x| x % 2 == 0) {
        return Err(Error::InvalidArgument(format!("{x} in A is even")));
    }
    let a1 = a.with(&[n / 4, 3 * n / 4])?;
    let a2 = set_from(ctx, a.elements().iter().map(|&x| (x + n / 2) % n).chain([0, n / 2]))?;
    let (c1, c2) = (ctx.build(&a1)?, ctx.build(&a2)?);
    let certificate = Certificate::by_transform(CertificateKind::PSigmaD, Direction::Forward, &c1.code, &c2.code, sigma);
    Ok(TheoremInstance { a1, a2, certificate })
}

/// Unions of cosets with odd leaders: the admissible A for the P_σD theorem.
pub fn monomial_action_bases(ctx: &CyclicContext) -> Vec<DefiningSet> {
    let odd = ctx.cosets.cosets_in_class(2, 1);
    ctx.cosets.all_unions(&odd).collect()
}

fn new_permutation_admissible(n: u64, a: &DefiningSet) -> bool {
    a.elements()
        .iter()
        .all(|&x| x == 0 || x == n / 2 || a.contains((x + n / 2) % n))
}

/// A ∪ {n/4} and A ∪ {3n/4}, related by P_γ. Needs 8 | n, q ≡ 1 (mod 4) and
/// a + n/2 ∈ A for every a ∈ A other than 0 and n/2.
pub fn theorem_new_permutation(ctx: &Arc<CyclicContext>, a: &DefiningSet) -> Result<TheoremInstance> {
    ctx.check_set(a)?;
    let n = ctx.n;
    let gamma = gamma_transform(n as usize)?;
    if ctx.q % 4 != 1 {
        return Err(Error::InvalidArgument(format!("need q ≡ 1 (mod 4), got q = {}", ctx.q)));
    }
    if !new_permutation_admissible(n, a) {
        return Err(Error::InvalidArgument(format!("{a} is not closed under x -> x + n/2")));
    }
    let a1 = a.with(&[n / 4])?;
    let a2 = a.with(&[3 * n / 4])?;
    let (c1, c2) = (ctx.build(&a1)?, ctx.build(&a2)?);
    let certificate = Certificate::by_transform(CertificateKind::PGamma, Direction::Forward, &c1.code, &c2.code, gamma);
    Ok(TheoremInstance { a1, a2, certificate })
}

pub fn new_permutation_bases(ctx: &CyclicContext) -> Vec<DefiningSet> {
    ctx.all_defining_sets()
        .into_iter()
        .filter(|a| new_permutation_admissible(ctx.n, a))
        .collect()
}

/// T1 = Z(n/9) ∪ B ∪ ⋃ A_e and T2 = Z(2n/9) ∪ B ∪ ⋃ A_e, related by P_χ.
/// The context must be over GF(4) with α^(n/3) = ω.
pub fn theorem_f4_permutation(ctx: &Arc<CyclicContext>, b: &[u64], e_list: &[u64]) -> Result<TheoremInstance> {
    let n = ctx.n;
    let chi = chi_transform(n as usize)?;
    let (t, k) = split_three_power(n);
    if ctx.q != 4 || t < 3 || k % 3 == 0 {
        return Err(Error::InvalidArgument(format!(
            "need GF(4) and n = 3^t k with t >= 3, got n = {n}, q = {}",
            ctx.q
        )));
    }
    if ctx.cube_root_of_unity() != Some(FieldElement(2)) {
        return Err(Error::InvalidArgument("the root must satisfy α^(n/3) = ω".into()));
    }
    if let Some(&x) = b.iter().find(|&&x| x != 0 && x != n / 3 && x != 2 * n / 3) {
        return Err(Error::InvalidArgument(format!("{x} is not in {{0, n/3, 2n/3}}")));
    }
    let mut common = set_from(ctx, b.iter().copied())?;
    for &e in e_list {
        common = common.union(&build_ae(n, e)?)?;
    }
    let a1 = common.union(&ctx.cosets.from_leaders(&[n / 9])?)?;
    let a2 = common.union(&ctx.cosets.from_leaders(&[2 * n / 9])?)?;
    let (c1, c2) = (ctx.build(&a1)?, ctx.build(&a2)?);
    let certificate = Certificate::by_transform(CertificateKind::PChi, Direction::Forward, &c1.code, &c2.code, chi);
    Ok(TheoremInstance { a1, a2, certificate })
}

/// The code generated by the same polynomial at length n m.
pub fn extend_length(code: &CyclicCode, m: u64) -> Result<CyclicCode> {
    if m == 0 || gcd(m, code.q()) != 1 {
        return Err(Error::NotCoprime { n: m, q: code.q() });
    }
    if m == 1 {
        return Ok(code.clone());
    }
    let ctx = CyclicContext::new(code.n() * m, code.q())?;
    let n = ctx.n as usize;
    let g = &code.generator_poly;
    let k = n + 1 - g.len();
    let rows: Vec<Vec<FieldElement>> = (0..k)
        .map(|s| {
            let mut row = vec![FieldElement::ZERO; n];
            row[s..s + g.len()].copy_from_slice(g);
            row
        })
        .collect();
    let linear = LinearCode::from_rows(ctx.field().clone(), n, &rows)?;
    let set = ctx
        .identify(&linear)?
        .ok_or_else(|| Error::Internal("extended code is not cyclic".into()))?;
    Ok(CyclicCode {
        ctx,
        defining_set: set,
        generator_poly: g.clone(),
        code: linear,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    /// Largest codeword count enumerated when comparing weight distributions.
    pub weight_budget: u128,
    /// Search-node budget for the final brute-force stage; 0 disables it.
    pub brute_force_budget: u64,
    pub compositions: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            weight_budget: 1 << 20,
            brute_force_budget: 1 << 22,
            compositions: true,
        }
    }
}

/// Which one-step moves the orbit closure may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveSet {
    pub multiplier: bool,
    pub affine: bool,
    pub generalized_multiplier: bool,
    pub structural: bool,
}

impl MoveSet {
    pub const ALL: MoveSet = MoveSet {
        multiplier: true,
        affine: true,
        generalized_multiplier: true,
        structural: true,
    };
    pub const PERMUTATION: MoveSet = MoveSet {
        multiplier: true,
        affine: false,
        generalized_multiplier: true,
        structural: false,
    };
    pub const MONOMIAL: MoveSet = MoveSet {
        multiplier: true,
        affine: true,
        generalized_multiplier: false,
        structural: true,
    };
}

#[derive(Debug, Clone)]
enum Move {
    Affine { e: u64, b: u64 },
    Matrix { kind: CertificateKind, m: MonomialTransform, backward: bool },
}

/// One-step neighbours of C_A, keyed by target defining set.
fn neighbours(code: &CyclicCode, moves: MoveSet) -> Result<BTreeMap<DefiningSet, Move>> {
    let ctx = &code.ctx;
    let a = &code.defining_set;
    let mut out = BTreeMap::new();
    if moves.multiplier || moves.affine {
        let size = a.len() as u64;
        let shifts: Vec<u64> = if moves.affine {
            (0..ctx.n)
                .filter(|&b| shift_divisibility_cyclic(ctx.n, ctx.q, size, b))
                .collect()
        } else {
            vec![0]
        };
        for e in ctx.units() {
            for &b in &shifts {
                let image = a.elements().iter().map(|&x| (mul_mod(e, x, ctx.n) + b) % ctx.n);
                if let Ok(img) = DefiningSet::new(ctx.n, ctx.q, image) {
                    if &img != a {
                        out.entry(img).or_insert(Move::Affine { e, b });
                    }
                }
            }
        }
    }
    let mut matrices = Vec::new();
    if moves.generalized_multiplier {
        matrices.extend(ctx.generalized_multipliers());
    }
    if moves.structural {
        matrices.extend(ctx.structural_maps());
    }
    let field = ctx.field();
    for (kind, m) in matrices {
        for backward in [false, true] {
            let t = if backward { m.inverse(field) } else { m.clone() };
            let image = code.code.apply_monomial(&t)?;
            if let Some(set) = ctx.identify(&image)? {
                if &set != a {
                    out.entry(set).or_insert(Move::Matrix {
                        kind: kind.clone(),
                        m: m.clone(),
                        backward,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn certificate_for(mv: &Move, from: &CyclicCode, to: &CyclicCode, opts: &CertifyOptions) -> Result<Certificate> {
    Ok(match mv {
        Move::Affine { e, b } => from.ctx.affine_certificate(from, to, *e, *b, opts.weight_budget)?,
        Move::Matrix { kind, m, backward: false } => {
            Certificate::by_transform(kind.clone(), Direction::Forward, &from.code, &to.code, m.clone())
        }
        Move::Matrix { kind, m, backward: true } => {
            Certificate::by_transform(kind.clone(), Direction::Backward, &to.code, &from.code, m.clone())
        }
    })
}

/// Certificates that C2 is equivalent to C1, cheapest first; every returned
/// certificate has been checked. Later stages run only when earlier ones
/// found nothing.
pub fn certify_equivalence(c1: &CyclicCode, c2: &CyclicCode, opts: &CertifyOptions) -> Result<Vec<Certificate>> {
    let ctx = &c1.ctx;
    if !ctx.same_root(&c2.ctx) {
        return Err(Error::InvalidArgument("codes use different roots of unity".into()));
    }
    let (a1, a2) = (&c1.defining_set, &c2.defining_set);
    if a1.len() != a2.len() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();

    if let Some(a) = ctx.units().into_iter().find(|&a| {
        a1.elements()
            .iter()
            .all(|&x| a2.contains(mul_mod(a, x, ctx.n.max(1))))
    }) {
        out.push(ctx.affine_certificate(c1, c2, a, 0, opts.weight_budget)?);
    }

    let affine = enumerate_affine_witnesses(a1, a2, AffineMode::Cyclic)?;
    if let Some(w) = affine.iter().find(|w| matches!(w.kind, crate::cosets::IndexMapKind::Affine { b, .. } if b != 0)) {
        if let crate::cosets::IndexMapKind::Affine { e, b } = w.kind {
            let cert = ctx.affine_certificate(c1, c2, e, b, opts.weight_budget)?;
            if cert.verified {
                out.push(cert);
            }
        }
    }

    if out.is_empty() {
        for (kind, m) in ctx.generalized_multipliers() {
            if c1.code.apply_monomial(&m)? == c2.code {
                out.push(Certificate::by_transform(kind, Direction::Forward, &c1.code, &c2.code, m));
                break;
            }
        }
    }

    for (kind, m) in ctx.structural_maps() {
        if c1.code.apply_monomial(&m)? == c2.code {
            out.push(Certificate::by_transform(kind, Direction::Forward, &c1.code, &c2.code, m));
        } else if c2.code.apply_monomial(&m)? == c1.code {
            out.push(Certificate::by_transform(kind, Direction::Backward, &c2.code, &c1.code, m));
        }
    }

    if out.is_empty() && opts.compositions {
        if let Some(cert) = two_step(c1, c2, opts)? {
            out.push(cert);
        }
    }

    if out.is_empty() && opts.brute_force_budget > 0 {
        if let EquivalenceOutcome::Equivalent(m) =
            c1.code
                .brute_force_equivalence(&c2.code, EquivalenceMode::Monomial, opts.brute_force_budget)?
        {
            out.push(Certificate::by_transform(
                CertificateKind::Explicit,
                Direction::Forward,
                &c1.code,
                &c2.code,
                m,
            ));
        }
    }
    out.retain(|c| c.verified);
    Ok(out)
}

/// Searches C1 -> X -> C2 with both steps drawn from all one-step moves.
fn two_step(c1: &CyclicCode, c2: &CyclicCode, opts: &CertifyOptions) -> Result<Option<Certificate>> {
    let ctx = &c1.ctx;
    for (x, first) in neighbours(c1, MoveSet::ALL)? {
        let mid = ctx.build(&x)?;
        let second_moves = neighbours(&mid, MoveSet::ALL)?;
        if let Some(second) = second_moves.get(&c2.defining_set) {
            let s1 = certificate_for(&first, c1, &mid, opts)?;
            let s2 = certificate_for(second, &mid, c2, opts)?;
            if s1.verified && s2.verified {
                let mut cert = Certificate::composite(vec![s1, s2], vec![x.to_string()]);
                cert.transform = compose_steps(ctx.field(), &cert);
                return Ok(Some(cert));
            }
        }
    }
    Ok(None)
}

/// Product of the forward transforms of a composite, if every step has one.
fn compose_steps(field: &GaloisField, cert: &Certificate) -> Option<MonomialTransform> {
    let CertificateKind::Composite { steps, .. } = &cert.kind else {
        return cert.forward_transform(field);
    };
    let mut acc: Option<MonomialTransform> = None;
    for s in steps {
        let m = compose_steps(field, s)?;
        acc = Some(match acc {
            None => m,
            Some(a) => a.then(field, &m),
        });
    }
    acc
}

/// A verified chain from C^⊥ to C.
#[derive(Debug, Clone)]
pub struct IsodualChain {
    pub dual_set: DefiningSet,
    pub certificate: Certificate,
    /// C^⊥ M = C, when every step carries a matrix.
    pub transform: Option<MonomialTransform>,
}

/// Looks for an equivalence between the Euclidean dual of `code` and `code`.
pub fn isodual_chain(code: &CyclicCode, opts: &CertifyOptions) -> Result<Option<IsodualChain>> {
    let ctx = &code.ctx;
    let linear_dual = code.code.euclidean_dual();
    let dual_set = ctx
        .identify(&linear_dual)?
        .ok_or_else(|| Error::Internal("dual of a cyclic code is not cyclic".into()))?;
    if dual_set != code.dual_defining_set() {
        return Err(Error::Internal("dual defining set disagrees with (Z/nZ) \\ (-A)".into()));
    }
    let dual = ctx.build(&dual_set)?;
    let Some(certificate) = certify_equivalence(&dual, code, opts)?.into_iter().next() else {
        return Ok(None);
    };
    let transform = compose_steps(ctx.field(), &certificate);
    if let Some(m) = &transform {
        if dual.code.apply_monomial(m)? != code.code {
            return Err(Error::Internal("composed isodual transform does not verify".into()));
        }
    }
    Ok(Some(IsodualChain {
        dual_set,
        certificate,
        transform,
    }))
}

/// Partitions of all cyclic codes at one (n, q): by the orbit closure of
/// verified one-step moves, and by brute-force equivalence.
#[derive(Debug, Clone)]
pub struct Classification {
    pub sets: Vec<DefiningSet>,
    pub certified: Vec<Vec<usize>>,
    pub brute_force: Vec<Vec<usize>>,
    /// Pairs the brute-force search could not decide within budget.
    pub unresolved: Vec<(usize, usize)>,
}

impl Classification {
    pub fn agree(&self) -> bool {
        self.unresolved.is_empty() && self.certified == self.brute_force
    }
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// The smaller index becomes the root.
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }

    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.0.len() {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        by_root.into_values().collect()
    }
}

pub fn classify(
    ctx: &Arc<CyclicContext>,
    moves: MoveSet,
    mode: EquivalenceMode,
    opts: &CertifyOptions,
) -> Result<Classification> {
    let sets = ctx.all_defining_sets();
    let index: HashMap<DefiningSet, usize> = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let codes: Vec<CyclicCode> = sets.iter().map(|s| ctx.build(s)).collect::<Result<_>>()?;

    let mut certified = UnionFind::new(sets.len());
    for (i, c) in codes.iter().enumerate() {
        for (target, mv) in neighbours(c, moves)? {
            let j = index[&target];
            if certified.find(i) == certified.find(j) {
                continue;
            }
            if certificate_for(&mv, c, &codes[j], opts)?.verified {
                certified.union(i, j);
            }
        }
    }

    let mut brute = UnionFind::new(sets.len());
    let mut unresolved = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..codes.len() {
        let mut joined = false;
        for &r in &reps {
            if codes[r].k() != codes[i].k() {
                continue;
            }
            match codes[r]
                .code
                .brute_force_equivalence(&codes[i].code, mode, opts.brute_force_budget)?
            {
                EquivalenceOutcome::Equivalent(_) => {
                    brute.union(r, i);
                    joined = true;
                    break;
                }
                EquivalenceOutcome::NotEquivalent => {}
                EquivalenceOutcome::Unknown => unresolved.push((r, i)),
            }
        }
        if !joined {
            reps.push(i);
        }
    }

    Ok(Classification {
        sets,
        certified: certified.classes(),
        brute_force: brute.classes(),
        unresolved,
    })
}
