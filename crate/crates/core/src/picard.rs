//! Divisor arithmetic and intersection theory on the Picard lattice of a
//! Hirzebruch surface.
//!
//! `Pic(X_e) = Z·C0 ⊕ Z·f` with the intersection relations `C0² = -e`,
//! `C0·f = 1`, `f² = 0`. Divisors are plain integer pairs with no attached
//! surface; every operation takes the invariant `e` explicitly, so one set of
//! functions serves all surfaces at once.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// The Hirzebruch invariant `e ≥ 0` selecting the surface `X_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceParams {
    e: i64,
}

impl SurfaceParams {
    pub fn new(e: u32) -> Self {
        Self { e: i64::from(e) }
    }

    pub fn e(self) -> i64 {
        self.e
    }
}

/// A divisor class `alpha·C0 + beta·f`. Arbitrary integer coefficients are
/// allowed; no effectivity is implied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct Divisor {
    pub alpha: i64,
    pub beta: i64,
}

impl Divisor {
    pub const ZERO: Divisor = Divisor { alpha: 0, beta: 0 };

    pub fn new(alpha: i64, beta: i64) -> Self {
        Self { alpha, beta }
    }
}

impl From<(i64, i64)> for Divisor {
    fn from((alpha, beta): (i64, i64)) -> Self {
        Self { alpha, beta }
    }
}

impl From<Divisor> for (i64, i64) {
    fn from(d: Divisor) -> Self {
        (d.alpha, d.beta)
    }
}

impl Add for Divisor {
    type Output = Divisor;
    fn add(self, rhs: Divisor) -> Divisor {
        Divisor::new(self.alpha + rhs.alpha, self.beta + rhs.beta)
    }
}

impl Sub for Divisor {
    type Output = Divisor;
    fn sub(self, rhs: Divisor) -> Divisor {
        Divisor::new(self.alpha - rhs.alpha, self.beta - rhs.beta)
    }
}

impl Neg for Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor::new(-self.alpha, -self.beta)
    }
}

impl Mul<i64> for Divisor {
    type Output = Divisor;
    fn mul(self, rhs: i64) -> Divisor {
        Divisor::new(self.alpha * rhs, self.beta * rhs)
    }
}

impl Mul<Divisor> for i64 {
    type Output = Divisor;
    fn mul(self, rhs: Divisor) -> Divisor {
        rhs * self
    }
}

/// A polarization `h = a·C0 + b·f`. Very-ampleness (`a > 0`, `b > a·e`)
/// depends on the surface and is checked by [`Polarization::is_very_ample`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct Polarization {
    pub a: i64,
    pub b: i64,
}

impl Polarization {
    pub fn new(a: i64, b: i64) -> Self {
        assert!(a >= 1, "polarization requires a > 0");
        Self { a, b }
    }

    pub fn divisor(self) -> Divisor {
        Divisor::new(self.a, self.b)
    }

    pub fn is_very_ample(self, e: SurfaceParams) -> bool {
        is_very_ample(e, self.divisor())
    }

    /// `h² = 2ab - e·a²`.
    pub fn square(self, e: SurfaceParams) -> i64 {
        intersect(e, self.divisor(), self.divisor())
    }
}

impl TryFrom<(i64, i64)> for Polarization {
    type Error = String;
    fn try_from((a, b): (i64, i64)) -> Result<Self, Self::Error> {
        if a < 1 {
            return Err(format!("polarization requires a > 0, got a = {a}"));
        }
        Ok(Self { a, b })
    }
}

impl From<Polarization> for (i64, i64) {
    fn from(h: Polarization) -> Self {
        (h.a, h.b)
    }
}

/// Intersection pairing: `D1·D2 = -e·α1·α2 + α1·β2 + α2·β1`.
pub fn intersect(e: SurfaceParams, d1: Divisor, d2: Divisor) -> i64 {
    -e.e() * d1.alpha * d2.alpha + d1.alpha * d2.beta + d2.alpha * d1.beta
}

/// The canonical class `K = -2·C0 - (2+e)·f`.
pub fn canonical(e: SurfaceParams) -> Divisor {
    Divisor::new(-2, -(2 + e.e()))
}

/// Very-ampleness criterion: `α > 0` and `β > α·e`, both strict.
pub fn is_very_ample(e: SurfaceParams, d: Divisor) -> bool {
    d.alpha > 0 && d.beta > d.alpha * e.e()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_relations() {
        let c0 = Divisor::new(1, 0);
        let f = Divisor::new(0, 1);
        assert_eq!(intersect(SurfaceParams::new(2), c0, c0), -2);
        for e in 0..6 {
            let e = SurfaceParams::new(e);
            assert_eq!(intersect(e, c0, f), 1);
            assert_eq!(intersect(e, f, f), 0);
        }
        let h = Divisor::new(3, 6);
        assert_eq!(intersect(SurfaceParams::new(1), h, h), 27);
    }

    #[test]
    fn canonical_class() {
        assert_eq!(canonical(SurfaceParams::new(0)), Divisor::new(-2, -2));
        assert_eq!(canonical(SurfaceParams::new(1)), Divisor::new(-2, -3));
        assert_eq!(canonical(SurfaceParams::new(3)), Divisor::new(-2, -5));
    }

    #[test]
    fn very_ampleness() {
        assert!(is_very_ample(SurfaceParams::new(1), Divisor::new(1, 2)));
        // boundary b = a*e fails: the inequality is strict
        assert!(!is_very_ample(SurfaceParams::new(1), Divisor::new(1, 1)));
        assert!(is_very_ample(SurfaceParams::new(0), Divisor::new(2, 3)));
        assert!(!is_very_ample(SurfaceParams::new(0), Divisor::new(0, 3)));
    }

    #[test]
    fn adjunction_on_generators() {
        // (K + C0)·C0 = (K + f)·f = -2: both generators are rational curves.
        for e in 0..6 {
            let e = SurfaceParams::new(e);
            let k = canonical(e);
            let c0 = Divisor::new(1, 0);
            let f = Divisor::new(0, 1);
            assert_eq!(intersect(e, k + c0, c0), -2);
            assert_eq!(intersect(e, k + f, f), -2);
        }
    }

    #[test]
    fn canonical_square_is_eight() {
        for e in 0..6 {
            let e = SurfaceParams::new(e);
            let k = canonical(e);
            assert_eq!(intersect(e, k, k), 8);
        }
    }
}
