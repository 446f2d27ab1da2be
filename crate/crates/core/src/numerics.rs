//! The integer theory of Ulrich bundles on `(X_e, O(a,b))`: Chern-class
//! conditions, twisted Euler characteristics, the exponents of the two
//! resolutions and of the monad, admissible-pair tests and enumeration,
//! Ulrich line bundles, rank thresholds, and moduli dimensions.
//!
//! Every half-integer expression is evaluated in doubled integers or exact
//! rationals; there is no floating point anywhere in this module.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::picard::{canonical, intersect, Divisor, Polarization, SurfaceParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("monad presentation requires a > 1, got a = {0}")]
    MonadNeedsWidePolarization(i64),
    #[error("c1² - c1·K is odd: no integral c2 exists for this class")]
    NonIntegralChern,
    #[error("odd-rank obstruction needs gcd(a,b) = 1, e > 0, a > 1, and a odd or e even")]
    ObstructionHypothesis,
    #[error("chi of the Hom bundle requires even ranks, got {0} and {1}")]
    OddRank(i64, i64),
}

/// Rank, first Chern class, and the second Chern class forced by the Ulrich
/// conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleNumerics {
    pub r: i64,
    pub c1: Divisor,
    pub c2: i64,
}

/// Result of the Chern-class conditions: whether the degree identity
/// `c1·h = (r/2)(3h² + h·K)` holds, and the forced `c2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChernCheck {
    pub degree_ok: bool,
    pub c2: i64,
}

/// Exponents of the cokernel-side resolution
/// `0 → O^γ(a-1, b-e-1) → O^δ(a-1, b-e) ⊕ O^τ(a, b-1) → E → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentsCoker {
    pub gamma: i64,
    pub delta: i64,
    pub tau: i64,
}

/// Exponents of the kernel-side resolution
/// `0 → E → O^λ(2a-1, 2b-2) ⊕ O^μ(2a-2, 2b-1-e) → O^ν(2a-1, 2b-1) → 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentsKer {
    pub lambda: i64,
    pub mu: i64,
    pub nu: i64,
}

/// Exponents of the monad presentation (only defined for `a > 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadExponents {
    pub eps: i64,
    pub zeta: i64,
    pub eta: i64,
    pub theta: i64,
}

/// A rank and first Chern class that pass [`is_admissible_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub r: i64,
    pub c1: Divisor,
}

impl AdmissiblePair {
    pub fn try_new(
        e: SurfaceParams,
        h: Polarization,
        r: i64,
        c1: Divisor,
    ) -> Option<AdmissiblePair> {
        is_admissible_pair(e, h, r, c1).then_some(AdmissiblePair { r, c1 })
    }
}

/// Doubled degree target `r·(3h² + h·K)`; the degree condition reads
/// `2·(c1·h) = r·(3h² + h·K)`.
fn doubled_degree_target(e: SurfaceParams, h: Polarization, r: i64) -> i64 {
    let hd = h.divisor();
    let h2 = intersect(e, hd, hd);
    let hk = intersect(e, hd, canonical(e));
    r * (3 * h2 + hk)
}

/// Degree identity and forced `c2` of an Ulrich candidate:
/// `c1·h = (r/2)(3h² + h·K)` and `c2 = (c1² - c1·K)/2 - r(h² - 1)`.
pub fn ulrich_chern_conditions(
    e: SurfaceParams,
    h: Polarization,
    r: i64,
    c1: Divisor,
) -> Result<ChernCheck, NumericsError> {
    let degree_ok = 2 * intersect(e, c1, h.divisor()) == doubled_degree_target(e, h, r);
    let c1_sq = intersect(e, c1, c1);
    let c1_k = intersect(e, c1, canonical(e));
    if (c1_sq - c1_k) % 2 != 0 {
        return Err(NumericsError::NonIntegralChern);
    }
    let h2 = h.square(e);
    Ok(ChernCheck {
        degree_ok,
        c2: (c1_sq - c1_k) / 2 - r * (h2 - 1),
    })
}

/// The full Chern record `(r, c1, c2)` of a candidate.
pub fn bundle_numerics(
    e: SurfaceParams,
    h: Polarization,
    r: i64,
    c1: Divisor,
) -> Result<BundleNumerics, NumericsError> {
    let check = ulrich_chern_conditions(e, h, r, c1)?;
    Ok(BundleNumerics {
        r,
        c1,
        c2: check.c2,
    })
}

/// `χ(E(D)) = r·h² + c1·D + (r/2)·D·(D - K)` for a candidate satisfying the
/// degree condition.
pub fn chi_twist(e: SurfaceParams, h: Polarization, r: i64, c1: Divisor, d: Divisor) -> i64 {
    let h2 = h.square(e);
    let dd = intersect(e, d, d);
    let dk = intersect(e, d, canonical(e));
    // D·(D - K) is always even (adjunction), so the halving is exact.
    r * h2 + intersect(e, c1, d) + r * ((dd - dk) / 2)
}

/// `γ, δ, τ` of the cokernel resolution for `(r, c1 = α·C0 + β·f)`.
pub fn coker_exponents(e: SurfaceParams, h: Polarization, r: i64, c1: Divisor) -> ExponentsCoker {
    let (a, b, ee) = (h.a, h.b, e.e());
    let (alpha, beta) = (c1.alpha, c1.beta);
    ExponentsCoker {
        gamma: alpha + beta - r * (a + b - 1) - ee * (alpha - a * r),
        delta: beta - r * (b - 1) - ee * (alpha - a * r),
        tau: alpha - r * (a - 1),
    }
}

/// `λ, μ, ν` of the kernel resolution.
pub fn ker_exponents(e: SurfaceParams, h: Polarization, r: i64, c1: Divisor) -> ExponentsKer {
    let (a, b, ee) = (h.a, h.b, e.e());
    let (alpha, beta) = (c1.alpha, c1.beta);
    ExponentsKer {
        lambda: r * (2 * b - 1 - ee) - beta - ee * (r * (2 * a - 2) - alpha),
        mu: r * (2 * a - 1) - alpha,
        nu: r * (2 * a + 2 * b - 3 - ee) - alpha - beta - ee * (r * (2 * a - 2) - alpha),
    }
}

/// `ε, ζ, η, ϑ` of the monad presentation; requires `a > 1`.
pub fn monad_exponents(
    e: SurfaceParams,
    h: Polarization,
    r: i64,
    c1: Divisor,
) -> Result<MonadExponents, NumericsError> {
    if h.a <= 1 {
        return Err(NumericsError::MonadNeedsWidePolarization(h.a));
    }
    let (a, b, ee) = (h.a, h.b, e.e());
    let (alpha, beta) = (c1.alpha, c1.beta);
    Ok(MonadExponents {
        eps: 2 * alpha + beta - r * (2 * a + b - 1) - ee * (alpha - a * r),
        zeta: 2 * alpha - 2 * r * (a - 1),
        eta: alpha + beta - r * (a + b - 1) - ee * (alpha - a * r),
        theta: alpha - r * (a - 1),
    })
}

/// Admissibility of `(r, c1)` with respect to `h`: the degree identity plus
/// the exponent bounds `r(a-1) ≤ α ≤ r(2a-1)` and
/// `r(b-1) - e(α - r(2a-2)) ≤ β ≤ r(2b-1) - e(r(2a-1) - α)`,
/// the α-bounds strict when `e > 0` and `a > 1`.
pub fn is_admissible_pair(e: SurfaceParams, h: Polarization, r: i64, c1: Divisor) -> bool {
    if r < 1 {
        return false;
    }
    let (a, b, ee) = (h.a, h.b, e.e());
    let (alpha, beta) = (c1.alpha, c1.beta);
    if 2 * intersect(e, c1, h.divisor()) != doubled_degree_target(e, h, r) {
        return false;
    }
    let (alpha_lo, alpha_hi) = (r * (a - 1), r * (2 * a - 1));
    let alpha_ok = if ee > 0 && a > 1 {
        alpha_lo < alpha && alpha < alpha_hi
    } else {
        alpha_lo <= alpha && alpha <= alpha_hi
    };
    if !alpha_ok {
        return false;
    }
    let beta_lo = r * (b - 1) - ee * (alpha - r * (2 * a - 2));
    let beta_hi = r * (2 * b - 1) - ee * (r * (2 * a - 1) - alpha);
    beta_lo <= beta && beta <= beta_hi
}

fn div_floor(n: i64, d: i64) -> i64 {
    debug_assert!(d > 0);
    n.div_euclid(d)
}

fn div_ceil(n: i64, d: i64) -> i64 {
    debug_assert!(d > 0);
    -(-n).div_euclid(d)
}

/// All admissible first Chern classes for rank `r`, sorted by `α`.
///
/// `α` runs over the closed range
/// `r(a-1) + era(a-1)/(2b) ≤ α ≤ r(2a-1) - era(a-1)/(2b)`; `β` is solved
/// exactly from the degree identity and the pair is kept only if it passes
/// [`is_admissible_pair`]. Classes whose `β` is non-integral (the
/// T-integrality failures) drop out of the divisibility test.
pub fn enumerate_admissible_c1(e: SurfaceParams, h: Polarization, r: i64) -> Vec<Divisor> {
    let (a, b, ee) = (h.a, h.b, e.e());
    let mut out = Vec::new();
    if r < 1 {
        return out;
    }
    let margin = ee * r * a * (a - 1);
    let alpha_min = div_ceil(2 * b * r * (a - 1) + margin, 2 * b);
    let alpha_max = div_floor(2 * b * r * (2 * a - 1) - margin, 2 * b);
    let target = doubled_degree_target(e, h, r);
    for alpha in alpha_min..=alpha_max {
        let num = target - 2 * alpha * (b - a * ee);
        if num.rem_euclid(2 * a) != 0 {
            continue;
        }
        let c1 = Divisor::new(alpha, num / (2 * a));
        if is_admissible_pair(e, h, r, c1) {
            out.push(c1);
        }
    }
    out
}

/// The Ulrich line bundles for `h = a·C0 + b·f`: for `e > 0` they exist only
/// when `a = 1` and are `O(0, 2b-1-e)` and `O(1, b-1)`; for `e = 0` they are
/// `O(2a-1, b-1)` and `O(a-1, 2b-1)`.
pub fn ulrich_line_bundles(e: SurfaceParams, h: Polarization) -> Vec<Divisor> {
    let (a, b, ee) = (h.a, h.b, e.e());
    if ee > 0 {
        if a == 1 {
            vec![Divisor::new(0, 2 * b - 1 - ee), Divisor::new(1, b - 1)]
        } else {
            Vec::new()
        }
    } else {
        vec![
            Divisor::new(2 * a - 1, b - 1),
            Divisor::new(a - 1, 2 * b - 1),
        ]
    }
}

/// The threshold `Δ_t = t·b / (b - ae + e)` as an exact rational.
pub fn delta_threshold(e: SurfaceParams, h: Polarization, t: i64) -> Ratio<i64> {
    let denom = h.b - h.a * e.e() + e.e();
    assert!(denom > 0, "delta threshold needs b - ae + e > 0");
    Ratio::new(t * h.b, denom)
}

/// Whether the odd-rank obstruction applies: under the hypotheses
/// `gcd(a,b) = 1`, `e > 0`, `a > 1`, `a` odd or `e` even, no odd rank
/// `r < Δ₁` admits any admissible pair.
pub fn odd_rank_obstruction(
    e: SurfaceParams,
    h: Polarization,
    r: i64,
) -> Result<bool, NumericsError> {
    let (a, b, ee) = (h.a, h.b, e.e());
    if gcd(a, b) != 1 || ee == 0 || a <= 1 || (a % 2 == 0 && ee % 2 != 0) {
        return Err(NumericsError::ObstructionHypothesis);
    }
    // r < Δ₁ = b/(b - ae + e), compared exactly over the positive denominator.
    Ok(r % 2 != 0 && r * (b - a * ee + ee) < b)
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Bogomolov discriminant `Δ = 4c₂ - c₁²` of a rank-two class.
pub fn bogomolov_discriminant(e: SurfaceParams, r: i64, c1: Divisor, c2: i64) -> i64 {
    debug_assert_eq!(r, 2, "the discriminant criterion is stated for rank two");
    4 * c2 - intersect(e, c1, c1)
}

/// Dimension of the moduli space of stable Ulrich bundles with the given
/// invariants: `c1² - r·c1·K - r²(2h² - 1) + 1`.
pub fn moduli_dimension(e: SurfaceParams, h: Polarization, r: i64, c1: Divisor) -> i64 {
    let k = canonical(e);
    let h2 = h.square(e);
    intersect(e, c1, c1) - r * intersect(e, c1, k) - r * r * (2 * h2 - 1) + 1
}

/// `χ(E_i ⊗ E_j^∨)` for even-rank Ulrich bundles with
/// `c1(E_i) = (r_i/2)(3h + K) + k_i·D`, `D = a·C0 + (ae - b)·f`:
/// `-(r_i·r_j/4)(h² - 4) + (K·D)(r_i·k_j - r_j·k_i)/2 + k_i·k_j·h²`.
pub fn chi_hom(
    e: SurfaceParams,
    h: Polarization,
    bundle_i: (i64, i64),
    bundle_j: (i64, i64),
) -> Result<i64, NumericsError> {
    let (ri, ki) = bundle_i;
    let (rj, kj) = bundle_j;
    if ri % 2 != 0 || rj % 2 != 0 {
        return Err(NumericsError::OddRank(ri, rj));
    }
    let h2 = h.square(e);
    let kd = 2 * h.b - 2 * h.a - h.a * e.e();
    Ok(-(ri * rj / 4) * (h2 - 4) + kd * ((ri / 2) * kj - (rj / 2) * ki) + ki * kj * h2)
}

/// The dual class `r(3h + K) - c1` of the `E ↔ E^∨(3h + K)` symmetry.
pub fn dual_c1(e: SurfaceParams, h: Polarization, r: i64, c1: Divisor) -> Divisor {
    r * (3 * h.divisor() + canonical(e)) - c1
}

/// The special first Chern class `(r/2)(3h + K)`, if integral.
pub fn special_c1(e: SurfaceParams, h: Polarization, r: i64) -> Option<Divisor> {
    let doubled = r * (3 * h.divisor() + canonical(e));
    (doubled.alpha % 2 == 0 && doubled.beta % 2 == 0)
        .then(|| Divisor::new(doubled.alpha / 2, doubled.beta / 2))
}
