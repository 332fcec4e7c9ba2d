//! Arbitrary-precision evaluation context. Wraps the astro-float `BigFloat`
//! type with a fixed working precision derived from a requested decimal
//! digit count, and provides the handful of primitives the certificate
//! machinery needs: field ops, sqrt/ln/sin, π, AGM, and Γ(3/4) through the
//! arithmetic–geometric mean identity Γ²(3/4) = √π · AGM(1,√2)/√2.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use std::cmp::Ordering;

use crate::error::{Error, Result};

pub const MIN_DECIMAL_DIGITS: u32 = 15;
pub const MAX_DECIMAL_DIGITS: u32 = 10_000;

/// Requested precision for certificate evaluation, in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PrecisionConfig {
    pub decimal_digits: u32,
}

impl PrecisionConfig {
    pub fn new(decimal_digits: u32) -> Result<Self> {
        if !(MIN_DECIMAL_DIGITS..=MAX_DECIMAL_DIGITS).contains(&decimal_digits) {
            return Err(Error::Precision {
                requested: decimal_digits,
                min: MIN_DECIMAL_DIGITS,
                max: MAX_DECIMAL_DIGITS,
            });
        }
        Ok(PrecisionConfig { decimal_digits })
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { decimal_digits: 50 }
    }
}

pub struct HpCtx {
    bits: usize,
    digits: u32,
    rm: RoundingMode,
    cc: Consts,
}

impl HpCtx {
    pub fn new(cfg: PrecisionConfig) -> Result<Self> {
        let digits = cfg.decimal_digits;
        let bits = (digits as f64 * std::f64::consts::LN_10 / std::f64::consts::LN_2).ceil()
            as usize
            + 32;
        let cc = Consts::new()
            .map_err(|e| Error::Domain(format!("precision backend unavailable: {e:?}")))?;
        Ok(HpCtx {
            bits,
            digits,
            rm: RoundingMode::ToEven,
            cc,
        })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    /// Parses a decimal literal at full working precision; the route for
    /// witness coordinates that are not exactly representable in f64.
    pub fn parse_decimal(&mut self, s: &str) -> Result<BigFloat> {
        let v = BigFloat::parse(s, Radix::Dec, self.bits, self.rm, &mut self.cc);
        if v.is_nan() {
            return Err(Error::Domain(format!("cannot parse '{s}' as a number")));
        }
        Ok(v)
    }

    pub fn to_f64(&self, v: &BigFloat) -> f64 {
        if v.is_nan() {
            return f64::NAN;
        }
        if v.is_inf_pos() {
            return f64::INFINITY;
        }
        if v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        format!("{v}").parse::<f64>().unwrap_or(f64::NAN)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, self.rm)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, self.rm)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, self.rm)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, self.rm)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, self.rm)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, self.rm, &mut self.cc)
    }

    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.bits, self.rm, &mut self.cc)
    }

    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.bits, self.rm, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, self.rm)
    }

    pub fn cmp(&self, a: &BigFloat, b: &BigFloat) -> Option<Ordering> {
        a.partial_cmp(b)
    }

    pub fn min(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        match a.partial_cmp(b) {
            Some(Ordering::Greater) => b.clone(),
            _ => a.clone(),
        }
    }

    pub fn max(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        match a.partial_cmp(b) {
            Some(Ordering::Less) => b.clone(),
            _ => a.clone(),
        }
    }

    /// Arithmetic–geometric mean. Quadratic convergence: the iteration
    /// count grows like log2 of the digit count, so a fixed generous cap
    /// converges for every supported precision.
    pub fn agm(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        let half = self.from_f64(0.5);
        let mut a = x.clone();
        let mut g = y.clone();
        let iterations = 24 + (self.digits.max(2) as f64).log2().ceil() as usize * 4;
        for _ in 0..iterations {
            let next_a = self.mul(&self.add(&a, &g), &half);
            let next_g = self.sqrt(&self.mul(&a, &g));
            a = next_a;
            g = next_g;
        }
        a
    }

    /// Γ(3/4) = √(√π · AGM(1,√2)/√2).
    pub fn gamma_three_quarters(&mut self) -> BigFloat {
        let one = self.from_f64(1.0);
        let two = self.from_f64(2.0);
        let sqrt2 = self.sqrt(&two);
        let agm = self.agm(&one, &sqrt2);
        let pi = self.pi();
        let sqrt_pi = self.sqrt(&pi);
        let g2 = self.div(&self.mul(&sqrt_pi, &agm), &sqrt2);
        self.sqrt(&g2)
    }

    /// Full-precision decimal rendering.
    pub fn to_decimal_string(&self, v: &BigFloat) -> String {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(digits: u32) -> HpCtx {
        HpCtx::new(PrecisionConfig::new(digits).unwrap()).unwrap()
    }

    #[test]
    fn precision_validation() {
        assert!(PrecisionConfig::new(14).is_err());
        assert!(PrecisionConfig::new(15).is_ok());
        assert!(PrecisionConfig::new(10_001).is_err());
        assert!(matches!(
            PrecisionConfig::new(5),
            Err(Error::Precision { requested: 5, .. })
        ));
    }

    #[test]
    fn parse_and_round_trip() {
        let mut c = ctx(50);
        let v = c.parse_decimal("4.1754412").unwrap();
        assert_eq!(c.to_f64(&v), 4.1754412);
        assert!(c.parse_decimal("not-a-number").is_err());
        let tiny = c.parse_decimal("4.100000001").unwrap();
        let base = c.parse_decimal("4.1").unwrap();
        let diff = c.sub(&tiny, &base);
        // The decimal gap 1e-9 is exact at 50 digits, unlike in f64.
        assert!((c.to_f64(&diff) - 1e-9).abs() < 1e-24);
    }

    #[test]
    fn field_ops_and_transcendentals() {
        let mut c = ctx(50);
        let one = c.from_f64(1.0);
        let two = c.from_f64(2.0);
        let s = c.sin(&one);
        assert!((c.to_f64(&s) - 0.841470984807896506652502321630).abs() < 1e-15);
        let l = c.ln(&two);
        assert!((c.to_f64(&l) - std::f64::consts::LN_2).abs() < 1e-16);
        let r = c.sqrt(&two);
        assert!((c.to_f64(&r) - std::f64::consts::SQRT_2).abs() < 1e-16);
        let p = c.pi();
        assert!((c.to_f64(&p) - std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(c.cmp(&one, &two), Some(Ordering::Less));
        let half = c.div(&one, &two);
        assert_eq!(c.to_f64(&half), 0.5);
    }

    #[test]
    fn agm_and_gamma_anchor() {
        let mut c = ctx(60);
        let one = c.from_f64(1.0);
        let two = c.from_f64(2.0);
        let sqrt2 = c.sqrt(&two);
        let agm = c.agm(&one, &sqrt2);
        assert!((c.to_f64(&agm) - 1.19814023473559220743992249228).abs() < 1e-15);
        let g34 = c.gamma_three_quarters();
        assert!((c.to_f64(&g34) - 1.22541670246517764512909830336).abs() < 1e-15);
    }

    #[test]
    fn high_precision_separates_what_f64_cannot() {
        // (4.1 + 1e-9) - 4.1 in f64 is off by ~4e-17; at 50 digits the
        // subtraction is exact to ~1e-58.
        let mut c = ctx(50);
        let a = c.parse_decimal("4.1").unwrap();
        let b = c.parse_decimal("4.100000001").unwrap();
        let gap = c.sub(&b, &a);
        let expected = c.parse_decimal("1e-9").unwrap();
        let err = c.sub(&gap, &expected);
        let tol = c.parse_decimal("1e-40").unwrap();
        assert_eq!(c.cmp(&err.abs(), &tol), Some(Ordering::Less));
    }
}
