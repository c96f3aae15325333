//! Arithmetic in GF(p^m).
//!
//! Elements use the polynomial basis `1, t, ..., t^(m-1)` over GF(p), where `t`
//! is a root of the field's defining polynomial. An element
//! `c_0 + c_1 t + ... + c_(m-1) t^(m-1)` is encoded as the integer
//! `c_0 + c_1 p + ... + c_(m-1) p^(m-1)`. That encoding is also the canonical
//! element ordering (used to pick "the smallest primitive element") and the
//! serialized form everywhere.
//!
//! Fields with at most 2^16 elements run on exp/log/Zech tables; larger
//! binary fields use carry-less multiplication, larger odd-characteristic
//! fields plain polynomial arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, is_prime, mult_order, prime_power};
use crate::error::{Error, Result};

const TABLE_LIMIT: u64 = 1 << 16;
const DENSE_LIMIT: u64 = 256;
const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Characteristic, degree and defining polynomial of a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub characteristic: u64,
    pub degree: u32,
    /// Monic irreducible polynomial over GF(p), ascending coefficients, length `degree + 1`.
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        self.characteristic.pow(self.degree)
    }
}

/// Field with `p^m` elements whose modulus is the lowest monic irreducible
/// polynomial, scanning lower coefficients as a base-`p` integer (constant
/// term least significant).
pub fn build_field(p: u64, m: u32) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m < 1 {
        return Err(Error::InvalidDegree);
    }
    let order = p.checked_pow(m).ok_or(Error::FieldTooLarge { p, m })?;
    if order > (1u64 << 62) {
        return Err(Error::FieldTooLarge { p, m });
    }
    for code in 0..order {
        let mut f = digits_of(code, p, m as usize);
        f.push(1);
        if fp::is_irreducible(&f, p) {
            return Ok(FieldSpec {
                characteristic: p,
                degree: m,
                modulus: f,
            });
        }
    }
    Err(Error::Internal(format!("no irreducible polynomial of degree {m} over GF({p})")))
}

/// The extension GF(q^m) containing primitive `n`-th roots of unity, with
/// `m` the multiplicative order of `q` modulo `n`.
pub fn splitting_field(q: u64, n: u64) -> Result<FieldSpec> {
    let (p, s) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if n == 0 || gcd(n, q) != 1 {
        return Err(Error::NotCoprime { n, q });
    }
    let m = mult_order(q, n).ok_or(Error::NotCoprime { n, q })?;
    build_field(p, s * m as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub element: FieldElement,
    pub order: u64,
}

enum Backend {
    Tables {
        exp: Vec<u64>,
        log: Vec<u32>,
        zech: Vec<u32>,
    },
    Binary {
        modulus: u128,
    },
    Generic,
}

/// Full operation tables for fields with at most 256 elements.
pub(crate) struct Dense {
    pub(crate) q: usize,
    pub(crate) add: Vec<u8>,
    pub(crate) mul: Vec<u8>,
    pub(crate) neg: Vec<u8>,
    pub(crate) inv: Vec<u8>,
}

pub struct GaloisField {
    spec: FieldSpec,
    order: u64,
    primitive: FieldElement,
    backend: Backend,
    dense: Option<Dense>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField")
            .field("p", &self.spec.characteristic)
            .field("m", &self.spec.degree)
            .field("modulus", &self.spec.modulus)
            .field("primitive", &self.primitive)
            .finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Self::from_spec(build_field(p, m)?)
    }

    /// Process-wide shared instance of GF(p^m); built once per (p, m).
    pub fn shared(p: u64, m: u32) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<GaloisField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(f) = cache.lock().expect("field cache poisoned").get(&(p, m)) {
            return Ok(f.clone());
        }
        let f = Arc::new(Self::new(p, m)?);
        Ok(cache
            .lock()
            .expect("field cache poisoned")
            .entry((p, m))
            .or_insert(f)
            .clone())
    }

    /// GF(q) for a prime power q.
    pub fn of_order(q: u64) -> Result<Arc<Self>> {
        let (p, s) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::shared(p, s)
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Self> {
        let p = spec.characteristic;
        let m = spec.degree;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if spec.modulus.len() != m as usize + 1 || spec.modulus[m as usize] != 1 {
            return Err(Error::InvalidArgument("modulus must be monic of the stated degree".into()));
        }
        if !fp::is_irreducible(&spec.modulus, p) {
            return Err(Error::InvalidArgument("modulus is reducible".into()));
        }
        let order = spec.order();
        if p == 2 && m > 63 {
            return Err(Error::FieldTooLarge { p, m });
        }
        let slow = SlowArith::new(&spec);
        let primitive = find_primitive(&slow, order);
        let backend = if order <= TABLE_LIMIT {
            build_tables(&slow, order, primitive)
        } else if p == 2 {
            Backend::Binary {
                modulus: slow.modulus_bits,
            }
        } else {
            Backend::Generic
        };
        let mut field = GaloisField {
            spec,
            order,
            primitive,
            backend,
            dense: None,
        };
        if order <= DENSE_LIMIT {
            field.dense = Some(field.build_dense());
        }
        Ok(field)
    }

    fn build_dense(&self) -> Dense {
        let q = self.order as usize;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            let fa = FieldElement(a as u64);
            neg[a] = self.neg_slow(fa).0 as u8;
            if a != 0 {
                inv[a] = self.inv_slow(fa).0 as u8;
            }
            for b in 0..q {
                let fb = FieldElement(b as u64);
                add[a * q + b] = self.add_slow(fa, fb).0 as u8;
                mul[a * q + b] = self.mul_slow(fa, fb).0 as u8;
            }
        }
        Dense { q, add, mul, neg, inv }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn characteristic(&self) -> u64 {
        self.spec.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.spec.degree
    }

    /// The smallest primitive element in the canonical ordering.
    pub fn primitive(&self) -> FieldElement {
        self.primitive
    }

    /// Embeds an integer of the prime subfield.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.spec.characteristic as i64) as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    pub fn is_small(&self) -> bool {
        self.dense.is_some()
    }

    pub(crate) fn dense(&self) -> Option<&Dense> {
        self.dense.as_ref()
    }

    /// Coefficients over GF(p), lowest degree first.
    pub fn digits(&self, x: FieldElement) -> Vec<u64> {
        digits_of(x.0, self.spec.characteristic, self.spec.degree as usize)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(d) = &self.dense {
            return FieldElement(d.add[a.0 as usize * d.q + b.0 as usize] as u64);
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.spec.characteristic == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        match &self.backend {
            Backend::Tables { exp, log, zech } => {
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let n = self.order - 1;
                let la = log[a.0 as usize] as u64;
                let lb = log[b.0 as usize] as u64;
                let k = (lb + n - la) % n;
                match zech[k as usize] {
                    NO_LOG => FieldElement::ZERO,
                    z => FieldElement(exp[((la + z as u64) % n) as usize]),
                }
            }
            _ => FieldElement(digitwise_add(a.0, b.0, self.spec.characteristic, self.spec.degree)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if let Some(d) = &self.dense {
            return FieldElement(d.neg[a.0 as usize] as u64);
        }
        self.neg_slow(a)
    }

    fn neg_slow(&self, a: FieldElement) -> FieldElement {
        let p = self.spec.characteristic;
        if p == 2 {
            return a;
        }
        let digits = digits_of(a.0, p, self.spec.degree as usize);
        FieldElement(encode(digits.iter().map(|&c| (p - c) % p), p))
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(d) = &self.dense {
            return FieldElement(d.mul[a.0 as usize * d.q + b.0 as usize] as u64);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        match &self.backend {
            Backend::Tables { exp, log, .. } => {
                let n = self.order - 1;
                let s = (log[a.0 as usize] as u64 + log[b.0 as usize] as u64) % n;
                FieldElement(exp[s as usize])
            }
            Backend::Binary { modulus } => FieldElement(clmul_reduce(a.0, b.0, *modulus, self.spec.degree)),
            Backend::Generic => FieldElement(SlowArith::new(&self.spec).mul(a.0, b.0)),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(!a.is_zero(), "inverse of zero in GF({})", self.order);
        if let Some(d) = &self.dense {
            return FieldElement(d.inv[a.0 as usize] as u64);
        }
        self.inv_slow(a)
    }

    fn inv_slow(&self, a: FieldElement) -> FieldElement {
        match &self.backend {
            Backend::Tables { exp, log, .. } => {
                let n = self.order - 1;
                FieldElement(exp[((n - log[a.0 as usize] as u64) % n) as usize])
            }
            _ => self.pow(a, self.order - 2),
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        if let Backend::Tables { exp, log, .. } = &self.backend {
            let n = (self.order - 1) as u128;
            let s = (log[a.0 as usize] as u128 * e as u128) % n;
            return FieldElement(exp[s as usize]);
        }
        let mut acc = FieldElement::ONE;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Power with a signed exponent, interpreted in the multiplicative group.
    pub fn pow_signed(&self, a: FieldElement, e: i64) -> FieldElement {
        let n = (self.order - 1) as i64;
        self.pow(a, e.rem_euclid(n) as u64)
    }

    /// Discrete log base the canonical primitive element, when tables exist.
    pub fn log(&self, a: FieldElement) -> Option<u64> {
        match &self.backend {
            Backend::Tables { log, .. } if !a.is_zero() => Some(log[a.0 as usize] as u64),
            _ => None,
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: FieldElement) -> u64 {
        assert!(!a.is_zero());
        let mut ord = self.order - 1;
        for (r, _) in factorize(self.order - 1) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == FieldElement::ONE {
                ord /= r;
            }
        }
        ord
    }

    /// Frobenius `x -> x^(p^k)`.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> FieldElement {
        let mut x = a;
        for _ in 0..k {
            x = self.pow(x, self.spec.characteristic);
        }
        x
    }

    pub fn sum<I: IntoIterator<Item = FieldElement>>(&self, it: I) -> FieldElement {
        it.into_iter().fold(FieldElement::ZERO, |acc, x| self.add(acc, x))
    }

    /// Evaluates a polynomial (ascending coefficients) at `x` by Horner's rule.
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
        coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// Primitive `n`-th root of unity: `g^((|F|-1)/n)` for the canonical primitive `g`.
pub fn primitive_nth_root(field: &GaloisField, n: u64) -> Result<RootOfUnity> {
    let size = field.order();
    if n == 0 || !(size - 1).is_multiple_of(n) {
        return Err(Error::NoRootOfOrder { order: n, size });
    }
    Ok(RootOfUnity {
        element: field.pow(field.primitive(), (size - 1) / n),
        order: n,
    })
}

/// Primitive `n`-th root `r` with `r^anchor_power = anchor_value`, taking the
/// smallest exponent `j` (coprime to `n`) such that `r = g^((|F|-1)/n * j)`.
pub fn anchored_root(
    field: &GaloisField,
    n: u64,
    anchor_power: u64,
    anchor_value: FieldElement,
) -> Result<RootOfUnity> {
    let base = primitive_nth_root(field, n)?;
    for j in 1..=n {
        if gcd(j, n) != 1 {
            continue;
        }
        let r = field.pow(base.element, j);
        if field.pow(r, anchor_power) == anchor_value {
            return Ok(RootOfUnity { element: r, order: n });
        }
    }
    Err(Error::AnchorUnsatisfiable {
        order: n,
        power: anchor_power,
        value: anchor_value.0,
    })
}

/// Identification of a small field GF(q) with the subfield of order q of a
/// larger field of the same characteristic.
#[derive(Debug, Clone)]
pub struct Embedding {
    base: Arc<GaloisField>,
    ext: Arc<GaloisField>,
    to_ext: Vec<FieldElement>,
    from_ext: HashMap<u64, FieldElement>,
}

impl Embedding {
    pub fn new(base: Arc<GaloisField>, ext: Arc<GaloisField>) -> Result<Self> {
        let p = base.characteristic();
        if p != ext.characteristic() || !ext.degree().is_multiple_of(base.degree()) {
            return Err(Error::WrongField {
                expected: format!("an extension of GF({})", base.order()),
                got: format!("GF({})", ext.order()),
            });
        }
        if base.order() > 1 << 20 {
            return Err(Error::FieldTooLarge {
                p,
                m: base.degree(),
            });
        }
        let generator = if base.degree() == 1 || base.spec() == ext.spec() {
            None
        } else {
            // roots of the base modulus lie in the order-q subfield of ext
            let q = base.order();
            let step = (ext.order() - 1) / (q - 1);
            let modulus: Vec<FieldElement> = base
                .spec()
                .modulus
                .iter()
                .map(|&c| ext.from_int(c as i64))
                .collect();
            let mut roots: Vec<FieldElement> = (0..q - 1)
                .map(|t| ext.pow(ext.primitive(), step * t))
                .filter(|&x| ext.eval_poly(&modulus, x).is_zero())
                .collect();
            roots.sort();
            Some(*roots.first().ok_or_else(|| Error::Internal("base modulus has no root in extension".into()))?)
        };
        let mut to_ext = Vec::with_capacity(base.order() as usize);
        let mut from_ext = HashMap::new();
        for c in base.elements() {
            let image = match generator {
                None => FieldElement(c.0),
                Some(beta) => {
                    let digits = base.digits(c);
                    let coeffs: Vec<FieldElement> = digits.iter().map(|&d| ext.from_int(d as i64)).collect();
                    ext.eval_poly(&coeffs, beta)
                }
            };
            to_ext.push(image);
            from_ext.insert(image.0, c);
        }
        Ok(Embedding {
            base,
            ext,
            to_ext,
            from_ext,
        })
    }

    pub fn base(&self) -> &Arc<GaloisField> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<GaloisField> {
        &self.ext
    }

    #[inline]
    pub fn embed(&self, x: FieldElement) -> FieldElement {
        self.to_ext[x.0 as usize]
    }

    /// Preimage of an extension element, if it lies in the subfield.
    pub fn restrict(&self, y: FieldElement) -> Option<FieldElement> {
        self.from_ext.get(&y.0).copied()
    }
}

fn digits_of(mut x: u64, p: u64, m: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(x % p);
        x /= p;
    }
    out
}

fn encode<I: DoubleEndedIterator<Item = u64>>(digits: I, p: u64) -> u64 {
    digits.rev().fold(0u64, |acc, d| acc * p + d)
}

fn digitwise_add(a: u64, b: u64, p: u64, m: u32) -> u64 {
    let (mut a, mut b) = (a, b);
    let mut out = 0u64;
    let mut scale = 1u64;
    for _ in 0..m {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale = scale.wrapping_mul(p);
    }
    out
}

fn clmul_reduce(a: u64, b: u64, modulus: u128, m: u32) -> u64 {
    let mut prod: u128 = 0;
    let mut bb = b;
    let mut shift = 0;
    while bb != 0 {
        if bb & 1 == 1 {
            prod ^= (a as u128) << shift;
        }
        bb >>= 1;
        shift += 1;
    }
    let m = m as usize;
    for bit in (m..128).rev() {
        if (prod >> bit) & 1 == 1 {
            prod ^= modulus << (bit - m);
        }
    }
    prod as u64
}

/// Table-free arithmetic used during construction and for large odd fields.
struct SlowArith<'a> {
    spec: &'a FieldSpec,
    modulus_bits: u128,
}

impl<'a> SlowArith<'a> {
    fn new(spec: &'a FieldSpec) -> Self {
        let modulus_bits = if spec.characteristic == 2 {
            spec.modulus
                .iter()
                .enumerate()
                .fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i))
        } else {
            0
        };
        SlowArith { spec, modulus_bits }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        let p = self.spec.characteristic;
        let m = self.spec.degree;
        if p == 2 {
            return clmul_reduce(a, b, self.modulus_bits, m);
        }
        let da = digits_of(a, p, m as usize);
        let db = digits_of(b, p, m as usize);
        let prod = fp::mul(&da, &db, p);
        let r = fp::rem(&prod, &self.spec.modulus, p);
        let mut digits = r;
        digits.resize(m as usize, 0);
        encode(digits.into_iter(), p)
    }

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn find_primitive(slow: &SlowArith<'_>, order: u64) -> FieldElement {
    let n = order - 1;
    if n == 1 {
        return FieldElement::ONE;
    }
    let primes: Vec<u64> = factorize(n).into_iter().map(|(r, _)| r).collect();
    (1..order)
        .find(|&c| primes.iter().all(|&r| slow.pow(c, n / r) != 1))
        .map(FieldElement)
        .expect("multiplicative group of a finite field is cyclic")
}

fn build_tables(slow: &SlowArith<'_>, order: u64, g: FieldElement) -> Backend {
    let n = (order - 1) as usize;
    let p = slow.spec.characteristic;
    let mut exp = Vec::with_capacity(n);
    let mut log = vec![NO_LOG; order as usize];
    let mut x = 1u64;
    for i in 0..n {
        exp.push(x);
        log[x as usize] = i as u32;
        x = slow.mul(x, g.0);
    }
    let zech = (0..n)
        .map(|k| {
            let y = exp[k];
            // 1 + y only touches the constant coefficient
            let c0 = y % p;
            let z = y - c0 + (c0 + 1) % p;
            if z == 0 {
                NO_LOG
            } else {
                log[z as usize]
            }
        })
        .collect();
    Backend::Tables { exp, log, zech }
}

/// Dense polynomials over GF(p), ascending coefficients, no trailing zeros.
mod fp {
    use crate::arith::{factorize, pow_mod};

    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let f = trim(f.to_vec());
        let df = f.len() - 1;
        let lead_inv = pow_mod(f[df], p - 2, p);
        let mut r = trim(a.to_vec());
        while r.len() > df {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            let shift = top - df;
            for (i, &fi) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - c * fi % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let len = a.len().max(b.len());
        let out = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod_poly(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = rem(a, f, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &base, p), f, p);
            }
            base = rem(&mul(&base, &base, p), f, p);
            e >>= 1;
        }
        acc
    }

    /// Rabin's irreducibility test for a monic `f`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        if m == 0 {
            return false;
        }
        if m == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        // frob[k] = x^(p^k) mod f
        let mut frob = Vec::with_capacity(m + 1);
        frob.push(rem(&x, f, p));
        for k in 1..=m {
            let next = pow_mod_poly(&frob[k - 1], p, f, p);
            frob.push(next);
        }
        if frob[m] != rem(&x, f, p) {
            return false;
        }
        for (r, _) in factorize(m as u64) {
            let h = sub(&frob[m / r as usize], &x, p);
            let g = gcd(&h, f, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, m: u32) -> GaloisField {
        GaloisField::new(p, m).unwrap()
    }

    #[test]
    fn gf4_omega_squared_is_omega_plus_one() {
        let f = gf(2, 2);
        assert_eq!(f.spec().modulus, vec![1, 1, 1]);
        let w = FieldElement(2);
        assert_eq!(f.mul(w, w), f.add(w, FieldElement::ONE));
        assert_eq!(f.element_order(w), 3);
    }

    #[test]
    fn gf3_is_prime_field() {
        let f = gf(3, 1);
        assert_eq!(f.order(), 3);
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![FieldElement(0), FieldElement(1), FieldElement(2)]);
        assert_eq!(f.add(FieldElement(2), FieldElement(2)), FieldElement(1));
        assert_eq!(f.primitive(), FieldElement(2));
    }

    #[test]
    fn gf9_multiplicative_group_has_order_8() {
        let f = gf(3, 2);
        let orders: Vec<u64> = f.elements().skip(1).map(|x| f.element_order(x)).collect();
        assert!(orders.iter().all(|o| 8 % o == 0));
        assert!(orders.contains(&8));
        for x in f.elements().skip(1) {
            assert_eq!(f.pow(x, 8), FieldElement::ONE);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(build_field(4, 1), Err(Error::NotPrime(4)));
        assert_eq!(build_field(3, 0), Err(Error::InvalidDegree));
        assert!(matches!(splitting_field(4, 6), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn splitting_field_degrees() {
        let s = splitting_field(3, 8).unwrap();
        assert_eq!((s.characteristic, s.degree), (3, 2));
        let s = splitting_field(4, 3).unwrap();
        assert_eq!((s.characteristic, s.degree), (2, 2));
        let s = splitting_field(4, 51).unwrap();
        assert_eq!((s.characteristic, s.degree), (2, 8));
    }

    #[test]
    fn roots_of_unity() {
        let f4 = gf(2, 2);
        let r = primitive_nth_root(&f4, 3).unwrap();
        assert_eq!(f4.element_order(r.element), 3);
        let f9 = gf(3, 2);
        let r = primitive_nth_root(&f9, 8).unwrap();
        assert_eq!(f9.element_order(r.element), 8);
        let f256 = gf(2, 8);
        assert_eq!(primitive_nth_root(&f256, 255).unwrap().element, f256.primitive());
        assert!(primitive_nth_root(&f9, 5).is_err());
    }

    #[test]
    fn anchored_roots_match_scan() {
        // delta in GF(16) of order 15 with delta^5 = omega (omega = embedded GF(4) generator)
        let base = Arc::new(gf(2, 2));
        let l = Arc::new(gf(2, 4));
        let emb = Embedding::new(base, l.clone()).unwrap();
        let omega = emb.embed(FieldElement(2));
        let delta = anchored_root(&l, 15, 5, omega).unwrap();
        assert_eq!(l.element_order(delta.element), 15);
        assert_eq!(l.pow(delta.element, 5), omega);
        // independent scan over all elements of order 15
        let scan: Vec<FieldElement> = l
            .elements()
            .skip(1)
            .filter(|&x| l.element_order(x) == 15 && l.pow(x, 5) == omega)
            .collect();
        assert!(scan.contains(&delta.element));
        assert_eq!(scan.len(), 4);
        let any = anchored_root(&l, 15, 15, FieldElement::ONE).unwrap();
        assert_eq!(any.element, primitive_nth_root(&l, 15).unwrap().element);
    }

    #[test]
    fn binary_backend_matches_tables() {
        // GF(2^18) without tables; compare against a second evaluation path.
        let f = gf(2, 18);
        let g = f.primitive();
        assert_eq!(f.pow(g, f.order() - 1), FieldElement::ONE);
        let x = f.pow(g, 12345);
        let y = f.pow(g, 54321);
        assert_eq!(f.mul(x, y), f.pow(g, 12345 + 54321));
        assert_eq!(f.mul(x, f.inv(x)), FieldElement::ONE);
    }

    #[test]
    fn generic_backend_odd_characteristic() {
        let f = gf(3, 11);
        let g = f.primitive();
        let x = f.pow(g, 1000);
        assert_eq!(f.mul(x, f.inv(x)), FieldElement::ONE);
        assert_eq!(f.add(x, f.neg(x)), FieldElement::ZERO);
        assert_eq!(f.frobenius(x, 11), x);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let base = Arc::new(gf(2, 2));
        let ext = Arc::new(gf(2, 8));
        let emb = Embedding::new(base.clone(), ext.clone()).unwrap();
        for a in base.elements() {
            for b in base.elements() {
                assert_eq!(emb.embed(base.add(a, b)), ext.add(emb.embed(a), emb.embed(b)));
                assert_eq!(emb.embed(base.mul(a, b)), ext.mul(emb.embed(a), emb.embed(b)));
            }
            assert_eq!(emb.restrict(emb.embed(a)), Some(a));
        }
    }
}
