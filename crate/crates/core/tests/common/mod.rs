//! Invariant checks shared by the property suite and the acceptance run.

#![allow(dead_code)]

use std::sync::Arc;

use codeq::arith::{gcd, prime_power};
use codeq::cosets::CosetTable;
use codeq::linear::{LinearCode, MonomialTransform};
use codeq::{FieldElement, GaloisField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Prime powers up to 256.
pub fn field_orders() -> Vec<u64> {
    (2..=256).filter(|&q| prime_power(q).is_some()).collect()
}

pub fn field(q: u64) -> Arc<GaloisField> {
    GaloisField::of_order(q).unwrap()
}

pub fn field_axioms(f: &GaloisField, a: FieldElement, b: FieldElement, c: FieldElement) -> Check {
    let q = f.order();
    ensure!(f.add(a, b) == f.add(b, a), "GF({q}): {a:?} + {b:?} not commutative");
    ensure!(f.mul(a, b) == f.mul(b, a), "GF({q}): {a:?} * {b:?} not commutative");
    ensure!(
        f.add(f.add(a, b), c) == f.add(a, f.add(b, c)),
        "GF({q}): addition not associative at {a:?}, {b:?}, {c:?}"
    );
    ensure!(
        f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)),
        "GF({q}): multiplication not associative at {a:?}, {b:?}, {c:?}"
    );
    ensure!(
        f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)),
        "GF({q}): distributivity fails at {a:?}, {b:?}, {c:?}"
    );
    ensure!(f.add(a, f.neg(a)).is_zero(), "GF({q}): {a:?} has no additive inverse");
    ensure!(f.add(f.sub(a, b), b) == a, "GF({q}): (a - b) + b != a");
    ensure!(f.mul(a, FieldElement::ONE) == a, "GF({q}): 1 is not neutral");
    if !a.is_zero() {
        ensure!(f.mul(a, f.inv(a)) == FieldElement::ONE, "GF({q}): {a:?} * inv != 1");
        ensure!(f.pow(a, q - 1) == FieldElement::ONE, "GF({q}): a^(q-1) != 1");
    }
    Ok(())
}

pub fn coset_partition(n: u64, q: u64) -> Check {
    if gcd(n, q) != 1 {
        return Ok(());
    }
    let t = CosetTable::new(n, q).map_err(|e| e.to_string())?;
    let mut seen = vec![false; n as usize];
    for c in t.cosets() {
        ensure!(!c.is_empty(), "({n},{q}): empty coset");
        ensure!(c.iter().min() == c.first(), "({n},{q}): leader of {c:?} is not first");
        for &x in c {
            ensure!(!seen[x as usize], "({n},{q}): {x} in two cosets");
            seen[x as usize] = true;
            ensure!(c.contains(&((x * q) % n)), "({n},{q}): coset {c:?} not closed");
        }
    }
    ensure!(seen.iter().all(|&s| s), "({n},{q}): cosets do not cover Z/nZ");
    Ok(())
}

pub fn random_rows(f: &GaloisField, n: usize, rows: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<FieldElement>> {
    let q = f.order();
    (0..rows)
        .map(|_| (0..n).map(|_| FieldElement(rng.gen_range(0..q))).collect())
        .collect()
}

pub fn random_code(q: u64, n: usize, rows: usize, seed: u64) -> LinearCode {
    let f = field(q);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LinearCode::from_rows(f.clone(), n, &random_rows(&f, n, rows, &mut rng)).unwrap()
}

pub fn random_monomial(q: u64, n: usize, seed: u64) -> MonomialTransform {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let diag = (0..n).map(|_| FieldElement(rng.gen_range(1..q))).collect();
    MonomialTransform::new(perm, diag).unwrap()
}

pub fn rref_idempotent(c: &LinearCode) -> Check {
    let again = LinearCode::from_rows(c.field().clone(), c.n(), &c.generator()).map_err(|e| e.to_string())?;
    ensure!(again == *c, "re-reducing the generator changed the code");
    ensure!(again.generator() == c.generator(), "RREF is not a fixed point");
    for row in c.generator() {
        ensure!(c.contains(&row), "generator row outside the code");
    }
    Ok(())
}

pub fn dual_involution(c: &LinearCode) -> Check {
    let d = c.euclidean_dual();
    ensure!(d.k() + c.k() == c.n(), "dim C + dim C^perp != n");
    ensure!(d.euclidean_dual() == *c, "Euclidean dual is not an involution");
    if c.q() == 4 {
        let h = c.hermitian_dual().map_err(|e| e.to_string())?;
        ensure!(h.hermitian_dual().map_err(|e| e.to_string())? == *c, "Hermitian dual is not an involution");
    }
    Ok(())
}

pub fn monomial_weight_invariance(c: &LinearCode, m: &MonomialTransform) -> Check {
    let image = c.apply_monomial(m).map_err(|e| e.to_string())?;
    ensure!(image.k() == c.k(), "monomial image changed the dimension");
    let budget = 1 << 16;
    match (c.weight_distribution(budget), image.weight_distribution(budget)) {
        (Ok(a), Ok(b)) => ensure!(a == b, "weight distributions differ"),
        _ => return Err("code too large for the weight budget".into()),
    }
    Ok(())
}
