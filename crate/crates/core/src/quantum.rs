//! Binary quantum codes from Hermitian dual-containing quaternary codes,
//! directly or after extending a nearly self-orthogonal code.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::FieldElement;
use crate::linear::{DistanceOptions, DistanceResult, LinearCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Crss,
    NearlySelfOrthogonal,
}

/// [[n_q, k_q]] with distance bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumParameters {
    pub n_q: usize,
    pub k_q: i64,
    pub d_lb: u32,
    pub d_ub: u32,
    pub e: usize,
    pub construction: Construction,
    pub seed: u64,
    /// The distance search stopped on its budget.
    pub exhausted: bool,
}

#[derive(Debug, Clone)]
pub struct QuantumCode {
    pub params: QuantumParameters,
    /// The dual-containing quaternary code the parameters come from.
    pub code: LinearCode,
    pub distance: DistanceResult,
}

/// Hermitian inner product Σ u_i v_i^2 over GF(4) encoded as 0, 1, ω = 2, ω² = 3.
pub fn hermitian_product(u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
    let f = gf4();
    f.sum(u.iter().zip(v).map(|(&a, &b)| f.mul(a, f.mul(b, b))))
}

fn gf4() -> std::sync::Arc<crate::GaloisField> {
    crate::GaloisField::shared(2, 2).expect("GF(4) exists")
}

fn require_gf4(c: &LinearCode) -> Result<()> {
    if c.q() != 4 {
        return Err(Error::WrongField {
            expected: "GF(4)".into(),
            got: format!("GF({})", c.q()),
        });
    }
    Ok(())
}

pub fn is_dual_containing(c: &LinearCode) -> Result<bool> {
    Ok(c.hermitian_dual()?.is_subcode_of(c))
}

/// [[n, 2k - n]] from a code with C^⊥h ⊆ C; the distance is the minimum
/// weight of C \ C^⊥h, or d(C) when C = C^⊥h.
pub fn crss(c: &LinearCode, opts: &DistanceOptions) -> Result<QuantumCode> {
    require_gf4(c)?;
    let dual = c.hermitian_dual()?;
    if !dual.is_subcode_of(c) {
        return Err(Error::NotDualContaining);
    }
    let distance = if dual == *c {
        c.min_distance(opts)
    } else {
        c.min_weight_outside(&dual, opts)?
    };
    Ok(QuantumCode {
        params: QuantumParameters {
            n_q: c.n(),
            k_q: 2 * c.k() as i64 - c.n() as i64,
            d_lb: distance.lb,
            d_ub: distance.ub,
            e: 0,
            construction: Construction::Crss,
            seed: opts.seed,
            exhausted: distance.exhausted,
        },
        code: c.clone(),
        distance,
    })
}

/// e = n - k - dim(C ∩ C^⊥h), and the same number as dim(C + C^⊥h) - k.
pub fn extension_amount(c: &LinearCode) -> Result<(usize, usize)> {
    require_gf4(c)?;
    let hull = c.hull_dim_hermitian()?;
    let via_hull = c.n() - c.k() - hull;
    let via_sum = c.sum(&c.hermitian_dual()?)?.k() - c.k();
    Ok((via_hull, via_sum))
}

/// Basis of `space` modulo `sub`: rows of `space` that extend a basis of `sub`.
fn complement(sub: &LinearCode, space: &LinearCode) -> Result<Vec<Vec<FieldElement>>> {
    let f = space.field().clone();
    let n = space.n();
    let mut acc = sub.clone();
    let mut out = Vec::new();
    for row in space.generator() {
        if acc.contains(&row) {
            continue;
        }
        let mut rows = acc.generator();
        rows.push(row.clone());
        acc = LinearCode::from_rows(f.clone(), n, &rows)?;
        out.push(row);
    }
    Ok(out)
}

fn axpy(dst: &mut [FieldElement], src: &[FieldElement], s: FieldElement) {
    let f = gf4();
    for (d, &x) in dst.iter_mut().zip(src) {
        *d = f.add(*d, f.mul(s, x));
    }
}

/// Hermitian-orthonormal basis of the span of `w`, which must carry a
/// nondegenerate form.
pub(crate) fn orthonormalize(mut w: Vec<Vec<FieldElement>>) -> Result<Vec<Vec<FieldElement>>> {
    let f = gf4();
    let mut out = Vec::with_capacity(w.len());
    while !w.is_empty() {
        let pivot = match w.iter().position(|v| !hermitian_product(v, v).is_zero()) {
            Some(i) => i,
            None => {
                // all norms vanish: w0 + λ wj has norm Tr(λ̄ c) for c = <w0, wj>
                let j = (1..w.len())
                    .find(|&j| !hermitian_product(&w[0], &w[j]).is_zero())
                    .ok_or_else(|| Error::Internal("degenerate Hermitian form".into()))?;
                let wj = w[j].clone();
                let lambda = (1..4)
                    .map(FieldElement)
                    .find(|&l| {
                        let mut t = w[0].clone();
                        axpy(&mut t, &wj, l);
                        !hermitian_product(&t, &t).is_zero()
                    })
                    .ok_or_else(|| Error::Internal("no scalar gives a nonzero norm".into()))?;
                axpy(&mut w[0], &wj, lambda);
                0
            }
        };
        let p = w.swap_remove(pivot);
        // norms lie in GF(2), so <p, p> = 1
        for v in w.iter_mut() {
            let c = hermitian_product(v, &p);
            if !c.is_zero() {
                axpy(v, &p, f.neg(c));
            }
        }
        out.push(p);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct NearlySelfOrthogonal {
    pub e: usize,
    /// Dual-containing code of length n + e and dimension k + e.
    pub extended: LinearCode,
    /// Distance bounds of C and of C + C^⊥h.
    pub source_distance: DistanceResult,
    pub sum_distance: DistanceResult,
    pub quantum: QuantumCode,
}

impl NearlySelfOrthogonal {
    /// min{d(C), d(C + C^⊥h) + 1} as (lower, upper) bounds.
    pub fn bound(&self) -> (u32, u32) {
        (
            self.source_distance.lb.min(self.sum_distance.lb + 1),
            self.source_distance.ub.min(self.sum_distance.ub + 1),
        )
    }
}

/// Extends C by e coordinates to a Hermitian dual-containing code E and
/// returns the [[n + e, 2k - n + e]] quantum code it defines.
///
/// A basis of C^⊥h is split into its hull part and a complement W. W is made
/// Hermitian-orthonormal and each of its vectors gets a distinct unit vector
/// in the new coordinates, so the extended C^⊥h is self-orthogonal; E is its
/// Hermitian dual.
pub fn nearly_self_orthogonal(c: &LinearCode, opts: &DistanceOptions) -> Result<NearlySelfOrthogonal> {
    require_gf4(c)?;
    let (e, e_sum) = extension_amount(c)?;
    if e != e_sum {
        return Err(Error::Internal(format!("extension amount disagrees: {e} vs {e_sum}")));
    }
    let n = c.n();
    let f = c.field().clone();
    let dual = c.hermitian_dual()?;
    let hull = c.intersection(&dual)?;
    let w = orthonormalize(complement(&hull, &dual)?)?;
    if w.len() != e {
        return Err(Error::Internal(format!("complement has {} vectors, expected {e}", w.len())));
    }
    let pad = |v: &[FieldElement], unit: Option<usize>| {
        let mut out = v.to_vec();
        out.extend((0..e).map(|i| if Some(i) == unit { FieldElement::ONE } else { FieldElement::ZERO }));
        out
    };
    let mut rows: Vec<Vec<FieldElement>> = hull.generator().iter().map(|v| pad(v, None)).collect();
    rows.extend(w.iter().enumerate().map(|(i, v)| pad(v, Some(i))));
    let self_orth = LinearCode::from_rows(f, n + e, &rows)?;
    let extended = self_orth.hermitian_dual()?;
    if !is_dual_containing(&extended)? || extended.k() != c.k() + e {
        return Err(Error::Internal("extended code is not dual-containing".into()));
    }

    let source_distance = c.min_distance(opts);
    let sum_distance = c.sum(&dual)?.min_distance(opts);
    let mut quantum = crss(&extended, opts)?;
    quantum.params.e = e;
    quantum.params.construction = Construction::NearlySelfOrthogonal;
    Ok(NearlySelfOrthogonal {
        e,
        extended,
        source_distance,
        sum_distance,
        quantum,
    })
}
