//! Equivalence certificates shared by the cyclic and constacyclic modules.

use serde::{Deserialize, Serialize};

use crate::linear::{LinearCode, MonomialTransform};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum CertificateKind {
    /// Defining sets related by x -> a x.
    Multiplier { a: u64 },
    /// Coordinate permutation x -> a M_d(x) at prime-power length.
    GeneralizedMultiplier { d: u64, k: u32, a: u64 },
    /// Defining sets related by x -> x + b.
    Shift { b: u64 },
    /// Defining sets related by x -> e x + b.
    Affine { e: u64, b: u64 },
    #[serde(rename = "P_sigma_D")]
    PSigmaD,
    /// n/8 copies of the length-8 P_σD pattern along the diagonal.
    #[serde(rename = "P_sigma_D_blocks")]
    PSigmaDBlocks,
    #[serde(rename = "P_gamma")]
    PGamma,
    #[serde(rename = "P_chi")]
    PChi,
    /// Polynomial substitution f(x) -> f(x^e) modulo x^n - ω.
    Psi { e: u64 },
    /// Constacyclic affine relation; certifies equal parameters only.
    SameParameters { e: u64, b: u64 },
    Explicit,
    /// Steps applied left to right; `via` lists the intermediate defining sets.
    Composite { steps: Vec<Certificate>, via: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// C2 = C1 M
    #[serde(rename = "C1->C2")]
    Forward,
    /// C1 = C2 M
    #[serde(rename = "C2->C1")]
    Backward,
}

/// What was checked before `verified` was set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// RREF equality of the transformed code with the target.
    CodeEquality,
    /// Divisibility side condition plus equal weight distributions.
    WeightDistribution,
    /// Only the side condition was checked; enumeration was over budget.
    SideCondition,
    /// Every step of a composite is verified.
    Steps,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(flatten)]
    pub kind: CertificateKind,
    pub direction: Direction,
    pub verified: bool,
    pub evidence: Evidence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<MonomialTransform>,
}

impl Certificate {
    /// Checks `to == from M` (for `Forward`) and records the outcome.
    pub fn by_transform(
        kind: CertificateKind,
        direction: Direction,
        from: &LinearCode,
        to: &LinearCode,
        m: MonomialTransform,
    ) -> Certificate {
        let verified = from.apply_monomial(&m).is_ok_and(|c| &c == to);
        Certificate {
            kind,
            direction,
            verified,
            evidence: Evidence::CodeEquality,
            transform: Some(m),
        }
    }

    /// An isometry licensed by a divisibility condition; confirmed by weight
    /// distributions when they fit the budget.
    pub fn by_isometry(
        kind: CertificateKind,
        side_condition: bool,
        c1: &LinearCode,
        c2: &LinearCode,
        budget: u128,
    ) -> Certificate {
        let (verified, evidence) = match weight_distributions_agree(c1, c2, budget) {
            Some(eq) => (side_condition && eq, Evidence::WeightDistribution),
            None => (false, Evidence::SideCondition),
        };
        Certificate {
            kind,
            direction: Direction::Forward,
            verified,
            evidence,
            transform: None,
        }
    }

    pub fn composite(steps: Vec<Certificate>, via: Vec<String>) -> Certificate {
        let verified = steps.iter().all(|s| s.verified);
        Certificate {
            kind: CertificateKind::Composite { steps, via },
            direction: Direction::Forward,
            verified,
            evidence: Evidence::Steps,
            transform: None,
        }
    }

    /// Transform taking C1 to C2, when the certificate carries one.
    pub fn forward_transform(&self, field: &crate::GaloisField) -> Option<MonomialTransform> {
        let m = self.transform.as_ref()?;
        Some(match self.direction {
            Direction::Forward => m.clone(),
            Direction::Backward => m.inverse(field),
        })
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            CertificateKind::Multiplier { .. } => "multiplier",
            CertificateKind::GeneralizedMultiplier { .. } => "generalized_multiplier",
            CertificateKind::Shift { .. } => "shift",
            CertificateKind::Affine { .. } => "affine",
            CertificateKind::PSigmaD => "P_sigma_D",
            CertificateKind::PSigmaDBlocks => "P_sigma_D_blocks",
            CertificateKind::PGamma => "P_gamma",
            CertificateKind::PChi => "P_chi",
            CertificateKind::Psi { .. } => "psi",
            CertificateKind::SameParameters { .. } => "same_parameters",
            CertificateKind::Explicit => "explicit",
            CertificateKind::Composite { .. } => "composite",
        }
    }
}

/// Compares weight distributions of the codes, or of their duals when those
/// are smaller. `None` when neither fits the budget.
pub fn weight_distributions_agree(c1: &LinearCode, c2: &LinearCode, budget: u128) -> Option<bool> {
    if c1.n() != c2.n() || c1.k() != c2.k() {
        return Some(false);
    }
    let q = c1.q() as u128;
    let k = c1.k().min(c1.n() - c1.k());
    if q.checked_pow(k as u32).is_none_or(|s| s > budget) {
        return None;
    }
    let (a, b) = if c1.k() <= c1.n() - c1.k() {
        (c1.clone(), c2.clone())
    } else {
        (c1.euclidean_dual(), c2.euclidean_dual())
    };
    Some(a.weight_distribution(budget).ok()? == b.weight_distribution(budget).ok()?)
}
