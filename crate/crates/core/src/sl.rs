//! Classic subjective-logic opinions, where the uncertain evidence is pinned
//! at 2. These back the SL* baseline, which runs the AssessTrust recursion
//! with the operators below.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TrustError};
use crate::opinion::{Opinion, DEFAULT_BASE_RATE};

/// Fixed uncertain-evidence mass of every SL opinion.
pub const UNCERTAINTY_MASS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlOpinion {
    alpha: f64,
    beta: f64,
    base_rate: f64,
}

impl SlOpinion {
    pub fn new(alpha: f64, beta: f64, base_rate: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(TrustError::InvalidOpinion(format!(
                    "{name} must be a finite nonnegative number, got {v}"
                )));
            }
        }
        if !(0.0..=1.0).contains(&base_rate) {
            return Err(TrustError::InvalidOpinion(format!(
                "base rate must lie in [0, 1], got {base_rate}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            base_rate,
        })
    }

    /// No certain evidence at all.
    pub const fn vacuous() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
            base_rate: DEFAULT_BASE_RATE,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn base_rate(&self) -> f64 {
        self.base_rate
    }

    pub fn certain(&self) -> f64 {
        self.alpha + self.beta
    }

    /// Belief, disbelief and uncertainty masses.
    pub fn bdu(&self) -> (f64, f64, f64) {
        let s = self.alpha + self.beta + UNCERTAINTY_MASS;
        (self.alpha / s, self.beta / s, UNCERTAINTY_MASS / s)
    }
}

impl From<&Opinion> for SlOpinion {
    /// Keeps ⟨α, β⟩ and the base rate; γ is absorbed by the fixed mass.
    fn from(op: &Opinion) -> Self {
        Self {
            alpha: op.alpha(),
            beta: op.beta(),
            base_rate: op.base_rate(),
        }
    }
}

pub fn sl_combine(a: &SlOpinion, b: &SlOpinion) -> SlOpinion {
    SlOpinion {
        alpha: a.alpha + b.alpha,
        beta: a.beta + b.beta,
        base_rate: 0.5 * (a.base_rate + b.base_rate),
    }
}

/// SL discounting of `b` (the recommendation) by `a` (trust in the recommender).
pub fn sl_discount(a: &SlOpinion, b: &SlOpinion) -> Result<SlOpinion> {
    let denom = (b.beta + b.alpha + UNCERTAINTY_MASS) * (a.beta + a.alpha + UNCERTAINTY_MASS);
    let kappa = 1.0 - (a.alpha * b.alpha + a.alpha * b.beta) / denom;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(TrustError::DegenerateDiscount(kappa));
    }
    let scale = UNCERTAINTY_MASS / (kappa * denom);
    Ok(SlOpinion {
        alpha: a.alpha * b.alpha * scale,
        beta: a.alpha * b.beta * scale,
        base_rate: b.base_rate,
    })
}

/// E = b + a·u.
pub fn sl_expected_belief(op: &SlOpinion) -> f64 {
    let (b, _, u) = op.bdu();
    (b + op.base_rate * u).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sl(a: f64, b: f64, r: f64) -> SlOpinion {
        SlOpinion::new(a, b, r).unwrap()
    }

    #[test]
    fn combine_examples() {
        assert_eq!(sl_combine(&sl(1.0, 2.0, 0.5), &sl(3.0, 4.0, 0.5)), sl(4.0, 6.0, 0.5));
        let w = sl(2.5, 1.0, 0.3);
        let r = sl_combine(&sl(0.0, 0.0, 0.7), &w);
        assert_eq!((r.alpha(), r.beta()), (2.5, 1.0));
        assert_abs_diff_eq!(r.base_rate(), 0.5, epsilon = 1e-15);
        assert_eq!(sl_combine(&sl(5.0, 3.0, 0.2), &sl(5.0, 3.0, 0.8)), sl(10.0, 6.0, 0.5));
    }

    #[test]
    fn discount_worked_example() {
        let r = sl_discount(&sl(5.0, 3.0, 0.5), &sl(4.0, 4.0, 0.5)).unwrap();
        assert_abs_diff_eq!(r.alpha(), 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.beta(), 2.0 / 3.0, epsilon = 1e-12);
        // 3VSL keeps 4 units of certain evidence here; SL keeps 4/3.
        assert!(r.certain() < 4.0);
        assert_abs_diff_eq!(r.certain(), 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn discount_zero_cases() {
        let r = sl_discount(&sl(0.0, 0.0, 0.5), &sl(4.0, 1.0, 0.3)).unwrap();
        assert_eq!((r.alpha(), r.beta(), r.base_rate()), (0.0, 0.0, 0.3));
        let r = sl_discount(&sl(5.0, 3.0, 0.5), &sl(0.0, 0.0, 0.5)).unwrap();
        assert_eq!((r.alpha(), r.beta()), (0.0, 0.0));
    }

    #[test]
    fn expected_belief_examples() {
        assert_eq!(sl_expected_belief(&sl(0.0, 0.0, 0.5)), 0.5);
        assert_abs_diff_eq!(sl_expected_belief(&sl(8.0, 0.0, 0.5)), 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(
            sl_expected_belief(&sl(2.0 / 3.0, 2.0 / 3.0, 0.5)),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn conversion_drops_uncertain_evidence() {
        let op = Opinion::with_base_rate(9.0, 0.0, 21.0, 0.4).unwrap();
        assert_eq!(SlOpinion::from(&op), sl(9.0, 0.0, 0.4));
    }
}
