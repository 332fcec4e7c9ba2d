use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative width below which a pair counts as near-diagonal: double
/// precision cannot resolve strict inequalities between means there.
pub const NEAR_DIAGONAL_REL: f64 = 1e-6;

/// An unordered pair of positive finite reals, the common domain of every
/// mean in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositivePair {
    a: f64,
    b: f64,
}

impl PositivePair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(Error::InvalidPair { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn min(&self) -> f64 {
        self.a.min(self.b)
    }

    pub fn max(&self) -> f64 {
        self.a.max(self.b)
    }

    /// The pair with entries swapped; means must not distinguish the two.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// |a−b| < 1e−6·A(a,b): strict comparisons are excluded here in doubles.
    pub fn is_near_diagonal(&self) -> bool {
        (self.a - self.b).abs() < NEAR_DIAGONAL_REL * (0.5 * self.a + 0.5 * self.b)
    }

    pub fn arithmetic(&self) -> f64 {
        0.5 * self.a + 0.5 * self.b
    }
}

/// Absolute/relative tolerance pair; a result with error `e` at scale `s`
/// is admitted when `e <= max(abs, rel*|s|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        let ok = abs.is_finite() && rel.is_finite() && abs >= 0.0 && rel >= 0.0;
        if !ok || (abs == 0.0 && rel == 0.0) {
            return Err(Error::InvalidTolerance { abs, rel });
        }
        Ok(Self { abs, rel })
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale.abs())
    }

    pub fn admits(&self, err: f64, scale: f64) -> bool {
        err <= self.bound(scale)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-10,
        }
    }
}

/// Deterministic sampler of positive pairs, log-uniform over a range so that
/// widely separated magnitudes are exercised as often as nearby ones.
pub struct PairSampler {
    rng: ChaCha8Rng,
    log_lo: f64,
    log_hi: f64,
}

impl PairSampler {
    pub fn new(seed: u64, lo: f64, hi: f64) -> Self {
        assert!(lo > 0.0 && hi > lo, "sampler range must satisfy 0 < lo < hi");
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            log_lo: lo.ln(),
            log_hi: hi.ln(),
        }
    }

    pub fn sample_value(&mut self) -> f64 {
        let t: f64 = self.rng.gen_range(self.log_lo..self.log_hi);
        t.exp()
    }

    pub fn sample_pair(&mut self) -> PositivePair {
        PositivePair {
            a: self.sample_value(),
            b: self.sample_value(),
        }
    }

    /// Rejects degenerate and near-diagonal pairs so strict comparisons in
    /// doubles stay meaningful.
    pub fn sample_off_diagonal(&mut self) -> PositivePair {
        loop {
            let p = self.sample_pair();
            if !p.is_near_diagonal() {
                return p;
            }
        }
    }

    pub fn sample_unit(&mut self) -> f64 {
        self.rng.gen_range(0.0f64..1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_and_nonfinite() {
        assert!(PositivePair::new(0.0, 1.0).is_err());
        assert!(PositivePair::new(1.0, -2.0).is_err());
        assert!(PositivePair::new(f64::NAN, 1.0).is_err());
        assert!(PositivePair::new(1.0, f64::INFINITY).is_err());
        assert!(PositivePair::new(2.0, 3.0).is_ok());
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(-1.0, 1e-9).is_err());
        assert!(Tolerance::new(1e-12, 0.0).is_ok());
        assert!(Tolerance::new(0.0, 1e-12).is_ok());
    }

    #[test]
    fn near_diagonal_threshold() {
        let p = PositivePair::new(1.0, 1.0 + 5e-7).unwrap();
        assert!(p.is_near_diagonal());
        let q = PositivePair::new(1.0, 1.0 + 2e-6).unwrap();
        assert!(!q.is_near_diagonal());
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut s1 = PairSampler::new(42, 1e-3, 1e3);
        let mut s2 = PairSampler::new(42, 1e-3, 1e3);
        for _ in 0..100 {
            let p1 = s1.sample_pair();
            let p2 = s2.sample_pair();
            assert_eq!(p1.a(), p2.a());
            assert_eq!(p1.b(), p2.b());
        }
    }
}
