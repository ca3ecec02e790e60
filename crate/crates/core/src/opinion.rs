//! Three-valued opinions and their algebra.
//!
//! An [`Opinion`] counts positive, negative and uncertain evidence about a
//! trustee. Trust along a series path is propagated with [`discount`], which
//! moves certain evidence into the uncertain bucket while conserving the total,
//! and parallel opinions are fused with [`combine`], which adds evidence.

use serde::{Deserialize, Serialize};
use statrs::function::beta::ln_beta;

use crate::error::{Result, TrustError};
use crate::quadrature;

pub const DEFAULT_BASE_RATE: f64 = 0.5;

/// Absolute tolerance of the certainty-factor integral.
pub const CERTAINTY_TOLERANCE: f64 = 1e-8;

const CERTAINTY_MAX_INTERVALS: usize = 2000;

/// Evidence triple ⟨α, β, γ⟩ with a base rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Opinion {
    alpha: f64,
    beta: f64,
    gamma: f64,
    base_rate: f64,
}

/// An opinion with its uncertain evidence dropped: a Beta posterior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapsedOpinion {
    alpha: f64,
    beta: f64,
    base_rate: f64,
}

fn check_evidence(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(TrustError::InvalidOpinion(format!(
            "{name} must be a finite nonnegative number, got {v}"
        )))
    }
}

fn check_base_rate(a: f64) -> Result<()> {
    if (0.0..=1.0).contains(&a) {
        Ok(())
    } else {
        Err(TrustError::InvalidOpinion(format!(
            "base rate must lie in [0, 1], got {a}"
        )))
    }
}

impl Opinion {
    /// Opinion with the default base rate of 0.5.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::with_base_rate(alpha, beta, gamma, DEFAULT_BASE_RATE)
    }

    pub fn with_base_rate(alpha: f64, beta: f64, gamma: f64, base_rate: f64) -> Result<Self> {
        check_evidence("alpha", alpha)?;
        check_evidence("beta", beta)?;
        check_evidence("gamma", gamma)?;
        check_base_rate(base_rate)?;
        Ok(Self {
            alpha,
            beta,
            gamma,
            base_rate,
        })
    }

    /// ⟨0, 0, 0⟩, the result of an exhausted search.
    pub const fn vacuous() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
            base_rate: DEFAULT_BASE_RATE,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn base_rate(&self) -> f64 {
        self.base_rate
    }

    pub fn total(&self) -> f64 {
        self.alpha + self.beta + self.gamma
    }

    pub fn certain(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn is_vacuous(&self) -> bool {
        self.total() == 0.0
    }

    pub fn components(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    /// Positive-evidence fraction α / (α + β + γ); 0 for a vacuous opinion.
    pub fn positive_fraction(&self) -> f64 {
        let t = self.total();
        if t > 0.0 {
            self.alpha / t
        } else {
            0.0
        }
    }

    pub fn discount(&self, original: &Opinion) -> Opinion {
        discount(self, original)
    }

    pub fn combine(&self, other: &Opinion) -> Opinion {
        combine(self, other)
    }

    pub fn collapse(&self) -> CollapsedOpinion {
        collapse(self)
    }

    pub fn expected_belief(&self) -> f64 {
        expected_belief(self)
    }
}

impl CollapsedOpinion {
    pub fn new(alpha: f64, beta: f64, base_rate: f64) -> Result<Self> {
        check_evidence("alpha", alpha)?;
        check_evidence("beta", beta)?;
        check_base_rate(base_rate)?;
        Ok(Self {
            alpha,
            beta,
            base_rate,
        })
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

    pub fn certainty(&self) -> f64 {
        certainty(self)
    }
}

/// Expected probabilities of positive, negative and uncertain behaviour.
pub fn expected_probabilities(op: &Opinion) -> Result<(f64, f64, f64)> {
    let t = op.total();
    if t <= 0.0 {
        return Err(TrustError::UndefinedDistribution);
    }
    Ok((op.alpha / t, op.beta / t, op.gamma / t))
}

/// Δ(distorting, original): the trustor's view of the original opinion's
/// subject when it is relayed through the distorting opinion.
///
/// The result keeps the original's total evidence and base rate. A vacuous
/// distorting opinion turns all of the original's evidence uncertain.
pub fn discount(distorting: &Opinion, original: &Opinion) -> Opinion {
    let td = distorting.total();
    let to = original.total();
    if td <= 0.0 {
        return Opinion {
            alpha: 0.0,
            beta: 0.0,
            gamma: to,
            base_rate: original.base_rate,
        };
    }
    let ad = distorting.alpha;
    Opinion {
        alpha: ad * original.alpha / td,
        beta: ad * original.beta / td,
        gamma: ((distorting.beta + distorting.gamma) * to + ad * original.gamma) / td,
        base_rate: original.base_rate,
    }
}

/// Θ(a, b): sums evidence; base rates are averaged.
pub fn combine(a: &Opinion, b: &Opinion) -> Opinion {
    Opinion {
        alpha: a.alpha + b.alpha,
        beta: a.beta + b.beta,
        gamma: a.gamma + b.gamma,
        base_rate: 0.5 * (a.base_rate + b.base_rate),
    }
}

/// Left fold of [`combine`] over a nonempty sequence.
pub fn combine_many<'a, I>(ops: I) -> Result<Opinion>
where
    I: IntoIterator<Item = &'a Opinion>,
{
    let mut iter = ops.into_iter();
    let first = *iter.next().ok_or(TrustError::EmptyCollection)?;
    Ok(iter.fold(first, |acc, op| combine(&acc, op)))
}

pub fn collapse(op: &Opinion) -> CollapsedOpinion {
    CollapsedOpinion {
        alpha: op.alpha,
        beta: op.beta,
        base_rate: op.base_rate,
    }
}

// k·ln(x) with the convention 0·ln(0) = 0.
fn xlogy(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * x.ln()
    }
}

/// Log-density of Beta(α + 1, β + 1) evaluated at `x`.
struct ShiftedBeta {
    alpha: f64,
    beta: f64,
    ln_norm: f64,
}

impl ShiftedBeta {
    fn new(c: &CollapsedOpinion) -> Self {
        Self {
            alpha: c.alpha,
            beta: c.beta,
            ln_norm: ln_beta(c.alpha + 1.0, c.beta + 1.0),
        }
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        xlogy(self.alpha, x) + xlogy(self.beta, 1.0 - x) - self.ln_norm
    }

    fn mode(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    // Root of ln_pdf on [lo, hi] given opposite signs at the ends.
    fn crossing(&self, mut lo: f64, mut hi: f64) -> f64 {
        let rising = self.ln_pdf(lo) < 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if (self.ln_pdf(mid) < 0.0) == rising {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Points where the density crosses 1, plus the mode.
    fn breakpoints(&self) -> Vec<f64> {
        let m = self.mode();
        let mut points = vec![m];
        if m > 0.0 && self.ln_pdf(0.0) < 0.0 {
            points.push(self.crossing(0.0, m));
        }
        if m < 1.0 && self.ln_pdf(1.0) < 0.0 {
            points.push(self.crossing(m, 1.0));
        }
        points
    }
}

/// Certainty factor ½∫₀¹ |Beta(x; α+1, β+1) − 1| dx, clamped to [0, 1].
///
/// Zero evidence gives the uniform density and therefore certainty 0.
pub fn certainty(c: &CollapsedOpinion) -> f64 {
    if c.alpha + c.beta <= 0.0 {
        return 0.0;
    }
    let density = ShiftedBeta::new(c);
    let breakpoints = density.breakpoints();
    let integral = quadrature::integrate(
        |x| (density.ln_pdf(x).exp() - 1.0).abs(),
        0.0,
        1.0,
        &breakpoints,
        2.0 * CERTAINTY_TOLERANCE,
        CERTAINTY_MAX_INTERVALS,
    );
    (0.5 * integral.value).clamp(0.0, 1.0)
}

/// E = r·c + a·(1 − c) over the collapsed opinion, with r = α / (α + β).
pub fn expected_belief(op: &Opinion) -> f64 {
    let collapsed = collapse(op);
    let a = op.base_rate;
    let certain = op.alpha + op.beta;
    if certain <= 0.0 {
        return a;
    }
    let r = op.alpha / certain;
    let c = certainty(&collapsed);
    (r * c + a * (1.0 - c)).clamp(0.0, 1.0)
}
