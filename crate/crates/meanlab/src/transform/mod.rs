//! Mean transforms built from a weight φ on [0,1] and a 1-Lipschitz shift
//! ψ on the positive axis:
//!
//! * `s_transform`: S = −φ̄ + A − A(ψa,ψb) + ∫₀¹ M(φ(t)+ψa, φ(t)+ψb) dt
//! * `p_transform`: P = A − A(ψa,ψb) + (1/φ̄) ∫₀¹ M(φ(t)ψa, φ(t)ψb) dt
//!
//! plus the named closed-form instances (N_c, L_c, J_ψ, I_φ) these produce
//! for particular catalogues. The trigonometric route (Ŝ and the selector
//! construction) lives in `trig`; the one-sided composition T in
//! `composite`.

mod composite;
mod trig;

pub use composite::{t_chain_report, t_mean};
pub use trig::{elliptic_arc_sandwich, s_hat, s_mean, s_selector_mean, EllipticSandwich, SelectorPair};

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mean::{MeanFunction, MeanKind};
use crate::pair::{PositivePair, Tolerance};
use crate::quad::{integrate_1d, EndpointMode, IntegrationRegion, DEFAULT_BUDGET};

/// Exact mean of (t − sin t)/2 over [0,1]: 1/4 − (1 − cos 1)/2.
pub const HALF_T_MINUS_SIN_MEAN: f64 = 0.0201511529340698587004683037215;
/// Exact mean of ln(t²+1) over [0,1]: ln 2 − 2 + π/2.
pub const LN_SQUARES_MEAN: f64 = 0.263943507354841928648553813098;

/// Weight/shift function catalogue. `TSquared` is a valid weight φ but is
/// not 1-Lipschitz, so it is rejected as a shift ψ.
#[derive(Clone)]
pub enum WeightFn {
    Id,
    Const(f64),
    TSquared,
    /// (t − sin t)/2; derivative (1 − cos t)/2 ∈ [0, 1).
    HalfTMinusSin,
    /// ln(t² + 1); derivative 2t/(1+t²) ∈ [−1, 1].
    LnSquaresPlusOne,
    Custom {
        name: String,
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl WeightFn {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            WeightFn::Id => t,
            WeightFn::Const(c) => *c,
            WeightFn::TSquared => t * t,
            WeightFn::HalfTMinusSin => 0.5 * (t - t.sin()),
            WeightFn::LnSquaresPlusOne => (t * t).ln_1p(),
            WeightFn::Custom { f, .. } => f(t),
        }
    }

    pub fn name(&self) -> String {
        match self {
            WeightFn::Id => "Id".to_string(),
            WeightFn::Const(c) => format!("const({c})"),
            WeightFn::TSquared => "t^2".to_string(),
            WeightFn::HalfTMinusSin => "(t-sin t)/2".to_string(),
            WeightFn::LnSquaresPlusOne => "ln(t^2+1)".to_string(),
            WeightFn::Custom { name, .. } => name.clone(),
        }
    }

    /// ∫₀¹ φ(t) dt when known in closed form.
    pub fn exact_mean(&self) -> Option<f64> {
        match self {
            WeightFn::Id => Some(0.5),
            WeightFn::Const(c) => Some(*c),
            WeightFn::TSquared => Some(1.0 / 3.0),
            WeightFn::HalfTMinusSin => Some(HALF_T_MINUS_SIN_MEAN),
            WeightFn::LnSquaresPlusOne => Some(LN_SQUARES_MEAN),
            WeightFn::Custom { .. } => None,
        }
    }

    /// Whether the 1-Lipschitz property is known analytically; `None` means
    /// it must be sampled.
    fn known_lipschitz1(&self) -> Option<bool> {
        match self {
            WeightFn::Id | WeightFn::Const(_) => Some(true),
            WeightFn::HalfTMinusSin | WeightFn::LnSquaresPlusOne => Some(true),
            WeightFn::TSquared => Some(false),
            WeightFn::Custom { .. } => None,
        }
    }
}

impl fmt::Debug for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightFn({})", self.name())
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LipschitzCheck {
    pub passed: bool,
    pub max_ratio: f64,
    pub pairs_checked: u64,
    pub witness: Option<(f64, f64)>,
}

/// Samples all ordered grid pairs in `region` and compares the difference
/// quotient of `f` against 1 (with 1e-12 slack for roundoff).
pub fn check_lipschitz1(f: &WeightFn, region: (f64, f64), n: usize) -> LipschitzCheck {
    let (lo, hi) = region;
    let n = n.max(2);
    let mut max_ratio = 0.0f64;
    let mut witness = None;
    let mut pairs = 0u64;
    let vals: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let t = lo + (hi - lo) * (i as f64) / ((n - 1) as f64);
            (t, f.eval(t))
        })
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let (ti, fi) = vals[i];
            let (tj, fj) = vals[j];
            let ratio = (fj - fi).abs() / (tj - ti);
            pairs += 1;
            if ratio > max_ratio {
                max_ratio = ratio;
                witness = Some((ti, tj));
            }
        }
    }
    let passed = max_ratio <= 1.0 + 1e-12;
    LipschitzCheck {
        passed,
        max_ratio,
        pairs_checked: pairs,
        witness: if passed { None } else { witness },
    }
}

/// A validated (φ, ψ) pair with the weight mean cached. φ must be
/// nonnegative on [0,1]; ψ must be 1-Lipschitz on the positive axis.
#[derive(Clone, Debug)]
pub struct WeightPair {
    phi: WeightFn,
    psi: WeightFn,
    phi_mean: f64,
}

impl WeightPair {
    pub fn new(phi: WeightFn, psi: WeightFn) -> Result<Self> {
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            let v = phi.eval(t);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!(
                    "weight {} is negative or non-finite at t={t}",
                    phi.name()
                )));
            }
        }
        let lipschitz = match psi.known_lipschitz1() {
            Some(known) => known,
            None => check_lipschitz1(&psi, (1e-3, 1e3), 160).passed
                && check_lipschitz1(&psi, (1e-3, 1.0), 160).passed,
        };
        if !lipschitz {
            return Err(Error::Domain(format!(
                "shift {} is not 1-Lipschitz",
                psi.name()
            )));
        }
        let phi_mean = match phi.exact_mean() {
            Some(v) => v,
            None => {
                let region = IntegrationRegion::interval(0.0, 1.0, EndpointMode::Closed)?;
                integrate_1d(|t| phi.eval(t), &region, Tolerance::default(), DEFAULT_BUDGET)
                    .require_converged()?
                    .value
            }
        };
        Ok(WeightPair {
            phi,
            psi,
            phi_mean,
        })
    }

    pub fn phi(&self) -> &WeightFn {
        &self.phi
    }

    pub fn psi(&self) -> &WeightFn {
        &self.psi
    }

    pub fn phi_mean(&self) -> f64 {
        self.phi_mean
    }

    fn psi_values(&self, p: &PositivePair) -> Result<(f64, f64)> {
        let pa = self.psi.eval(p.a());
        let pb = self.psi.eval(p.b());
        if !(pa.is_finite() && pb.is_finite() && pa > 0.0 && pb > 0.0) {
            return Err(Error::Domain(format!(
                "shift {} must be positive at the pair; got ({pa}, {pb})",
                self.psi.name()
            )));
        }
        Ok((pa, pb))
    }
}

/// The shifted transform S. Exact shortcuts: M = A gives S = A for every
/// weight pair, and a constant weight φ ≡ c collapses the integral to
/// −c + M(c+ψa, c+ψb) − A(ψa,ψb) + A.
pub fn s_transform(
    m: &MeanFunction,
    w: &WeightPair,
    p: &PositivePair,
    tol: Tolerance,
) -> Result<f64> {
    let (psi_a, psi_b) = w.psi_values(p)?;
    let am = p.arithmetic();
    if matches!(m.kind(), Some(MeanKind::A)) {
        return Ok(am);
    }
    let psi_am = 0.5 * (psi_a + psi_b);
    if let WeightFn::Const(c) = w.phi {
        let core = m.eval_checked(c + psi_a, c + psi_b)?;
        return Ok(-c + core - psi_am + am);
    }
    let region = IntegrationRegion::interval(0.0, 1.0, EndpointMode::Open)?;
    let est = integrate_1d(
        |t| {
            let ft = w.phi.eval(t);
            m.eval(ft + psi_a, ft + psi_b)
        },
        &region,
        tol,
        DEFAULT_BUDGET,
    )
    .require_converged()?;
    Ok(-w.phi_mean + am - psi_am + est.value)
}

/// The product transform P. For a mean known to be 1-homogeneous the
/// integral collapses: P = A − A(ψa,ψb) + M(ψa,ψb).
pub fn p_transform(
    m: &MeanFunction,
    w: &WeightPair,
    p: &PositivePair,
    tol: Tolerance,
) -> Result<f64> {
    let (psi_a, psi_b) = w.psi_values(p)?;
    if w.phi_mean <= 0.0 {
        return Err(Error::ZeroWeightMean);
    }
    if m.homogeneous1() == Some(true) {
        let am = p.arithmetic();
        let psi_am = 0.5 * (psi_a + psi_b);
        return Ok(am - psi_am + m.eval_checked(psi_a, psi_b)?);
    }
    p_transform_quadrature(m, w, p, tol)
}

/// The product transform evaluated through the defining integral with no
/// homogeneity shortcut; the independent route for cross-checks.
pub fn p_transform_quadrature(
    m: &MeanFunction,
    w: &WeightPair,
    p: &PositivePair,
    tol: Tolerance,
) -> Result<f64> {
    let (psi_a, psi_b) = w.psi_values(p)?;
    if w.phi_mean <= 0.0 {
        return Err(Error::ZeroWeightMean);
    }
    let am = p.arithmetic();
    let psi_am = 0.5 * (psi_a + psi_b);
    let region = IntegrationRegion::interval(0.0, 1.0, EndpointMode::Open)?;
    let est = integrate_1d(
        |t| {
            let ft = w.phi.eval(t);
            m.eval(ft * psi_a, ft * psi_b)
        },
        &region,
        tol,
        DEFAULT_BUDGET,
    )
    .require_converged()?;
    Ok(am - psi_am + est.value / w.phi_mean)
}

/// N_c = A − ¼(√(2c+a−sin a) − √(2c+b−sin b))²; the S-image of G under a
/// constant weight and the (t−sin t)/2 shift.
pub fn n_mean(c: f64, p: &PositivePair) -> Result<f64> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::NegativeShift(c));
    }
    let ta = 2.0 * c + p.a() - p.a().sin();
    let tb = 2.0 * c + p.b() - p.b().sin();
    let diff = ta.sqrt() - tb.sqrt();
    Ok(p.arithmetic() - 0.25 * diff * diff)
}

/// L_c = −c + A − ½(ln(a²+1)+ln(b²+1)) + √((c+ln(a²+1))(c+ln(b²+1))); the
/// S-image of G under a constant weight and the ln(t²+1) shift.
pub fn l_mean(c: f64, p: &PositivePair) -> Result<f64> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::NegativeShift(c));
    }
    let la = (p.a() * p.a()).ln_1p();
    let lb = (p.b() * p.b()).ln_1p();
    Ok(-c + p.arithmetic() - 0.5 * (la + lb) + ((c + la) * (c + lb)).sqrt())
}

/// J_ψ = A − ((ψa−ψb)/2)² ln(1 + 1/A(ψa,ψb)).
pub fn j_psi_mean(psi: &WeightFn, p: &PositivePair) -> Result<f64> {
    let pa = psi.eval(p.a());
    let pb = psi.eval(p.b());
    if !(pa.is_finite() && pb.is_finite() && pa > 0.0 && pb > 0.0) {
        return Err(Error::Domain(format!(
            "shift {} must be positive at the pair",
            psi.name()
        )));
    }
    let half_diff = 0.5 * (pa - pb);
    let psi_am = 0.5 * (pa + pb);
    Ok(p.arithmetic() - half_diff * half_diff * (1.0 / psi_am).ln_1p())
}

/// F1(x,y) = (x+y)√(xy)/4, the algebraic part of the √ antiderivative.
pub fn f1_helper(x: f64, y: f64) -> f64 {
    (x + y) * (x * y).sqrt() / 4.0
}

/// F2(x,y) = ((x−y)²/4) ln((√x+√y)/√2), the logarithmic part.
pub fn f2_helper(x: f64, y: f64) -> f64 {
    let d = x - y;
    d * d / 4.0 * ((x.sqrt() + y.sqrt()) / std::f64::consts::SQRT_2).ln()
}

/// I_φ = −φ̄ + ∫₀¹ √((φ(t)+a)(φ(t)+b)) dt. The identity weight has the
/// closed form −½ + F1(a+1,b+1) − F1(a,b) − F2(a+1,b+1) + F2(a,b).
pub fn i_phi_mean(phi: &WeightFn, p: &PositivePair, tol: Tolerance) -> Result<f64> {
    let a = p.a();
    let b = p.b();
    if let WeightFn::Id = phi {
        return Ok(-0.5 + f1_helper(a + 1.0, b + 1.0) - f1_helper(a, b)
            - f2_helper(a + 1.0, b + 1.0)
            + f2_helper(a, b));
    }
    let phi_mean = match phi.exact_mean() {
        Some(v) => v,
        None => {
            let region = IntegrationRegion::interval(0.0, 1.0, EndpointMode::Closed)?;
            integrate_1d(|t| phi.eval(t), &region, tol, DEFAULT_BUDGET)
                .require_converged()?
                .value
        }
    };
    let region = IntegrationRegion::interval(0.0, 1.0, EndpointMode::Open)?;
    let est = integrate_1d(
        |t| {
            let ft = phi.eval(t);
            ((ft + a) * (ft + b)).sqrt()
        },
        &region,
        tol,
        DEFAULT_BUDGET,
    )
    .require_converged()?;
    Ok(-phi_mean + est.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(a: f64, b: f64) -> PositivePair {
        PositivePair::new(a, b).unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn weight_means_are_exact() {
        // Quadrature agrees with every cached closed-form weight mean.
        for phi in [
            WeightFn::Id,
            WeightFn::Const(0.7),
            WeightFn::TSquared,
            WeightFn::HalfTMinusSin,
            WeightFn::LnSquaresPlusOne,
        ] {
            let region = IntegrationRegion::interval(0.0, 1.0, EndpointMode::Closed).unwrap();
            let est = integrate_1d(|t| phi.eval(t), &region, tol(), DEFAULT_BUDGET);
            assert!(
                (est.value - phi.exact_mean().unwrap()).abs() < 1e-13,
                "{}",
                phi.name()
            );
        }
    }

    #[test]
    fn lipschitz_screening() {
        assert!(check_lipschitz1(&WeightFn::Id, (0.0, 1.0), 100).passed);
        assert!(check_lipschitz1(&WeightFn::HalfTMinusSin, (1e-3, 1e3), 150).passed);
        assert!(check_lipschitz1(&WeightFn::LnSquaresPlusOne, (1e-3, 1e3), 150).passed);
        let double = WeightFn::Custom {
            name: "2t".to_string(),
            f: Arc::new(|t| 2.0 * t),
        };
        let check = check_lipschitz1(&double, (0.0, 1.0), 100);
        assert!(!check.passed);
        assert!((check.max_ratio - 2.0).abs() < 1e-9);
        assert!(check.witness.is_some());
        assert!(!check_lipschitz1(&WeightFn::TSquared, (0.0, 1.0), 100).passed);
    }

    #[test]
    fn weight_pair_validation() {
        assert!(WeightPair::new(WeightFn::Id, WeightFn::Id).is_ok());
        assert!(WeightPair::new(WeightFn::Id, WeightFn::TSquared).is_err());
        assert!(WeightPair::new(WeightFn::Const(-1.0), WeightFn::Id).is_err());
        let w = WeightPair::new(WeightFn::TSquared, WeightFn::HalfTMinusSin).unwrap();
        assert!((w.phi_mean() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn s_of_arithmetic_is_identity() {
        let w = WeightPair::new(WeightFn::Id, WeightFn::LnSquaresPlusOne).unwrap();
        let m = MeanFunction::from_kind(MeanKind::A);
        for (a, b) in [(1.0, 4.0), (0.3, 0.7), (2.0, 2.0)] {
            let p = pp(a, b);
            assert_eq!(s_transform(&m, &w, &p, tol()).unwrap(), p.arithmetic());
        }
    }

    #[test]
    fn constant_weight_shortcut_matches_quadrature_route() {
        // Constant φ has an exact collapse; compare against a custom weight
        // that is numerically constant but not recognized as such.
        let g = MeanFunction::from_kind(MeanKind::G);
        let p = pp(1.0, 4.0);
        let w_const = WeightPair::new(WeightFn::Const(0.8), WeightFn::HalfTMinusSin).unwrap();
        let w_opaque = WeightPair::new(
            WeightFn::Custom {
                name: "const-ish".to_string(),
                f: Arc::new(|_| 0.8),
            },
            WeightFn::HalfTMinusSin,
        )
        .unwrap();
        let direct = s_transform(&g, &w_const, &p, tol()).unwrap();
        let integral = s_transform(&g, &w_opaque, &p, tol()).unwrap();
        assert!((direct - integral).abs() < 1e-10);
    }

    #[test]
    fn s_with_zero_weight_reduces_to_shift_conjugation() {
        // φ ≡ 0: S = M(ψa,ψb) − A(ψa,ψb) + A. With ψ = Id this is M itself
        // shifted back to A, so S_{G,0,Id}(1,4) = G(1,4) − 2.5 + 2.5 = 2.
        let g = MeanFunction::from_kind(MeanKind::G);
        let w = WeightPair::new(WeightFn::Const(0.0), WeightFn::Id).unwrap();
        let v = s_transform(&g, &w, &pp(1.0, 4.0), tol()).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn p_homogeneous_skip_matches_integral() {
        let p = pp(1.0, 4.0);
        for kind in [MeanKind::G, MeanKind::H, MeanKind::R] {
            let m = MeanFunction::from_kind(kind);
            for psi in [WeightFn::Id, WeightFn::LnSquaresPlusOne] {
                let w = WeightPair::new(WeightFn::Id, psi).unwrap();
                let fast = p_transform(&m, &w, &p, tol()).unwrap();
                let slow = p_transform_quadrature(&m, &w, &p, tol()).unwrap();
                assert!(
                    (fast - slow).abs() < 1e-10,
                    "{:?}: {fast} vs {slow}",
                    m.name()
                );
            }
        }
    }

    #[test]
    fn p_of_harmonic_identity_weight_is_harmonic() {
        let h = MeanFunction::from_kind(MeanKind::H);
        let w = WeightPair::new(WeightFn::Id, WeightFn::Id).unwrap();
        let p = pp(2.0, 5.0);
        let v = p_transform(&h, &w, &p, tol()).unwrap();
        let expect = 2.0 * 2.0 * 5.0 / 7.0;
        assert!((v - expect).abs() < 1e-13);
    }

    #[test]
    fn p_zero_weight_mean_is_rejected() {
        let g = MeanFunction::from_kind(MeanKind::G);
        let w = WeightPair::new(WeightFn::Const(0.0), WeightFn::Id).unwrap();
        assert!(matches!(
            p_transform(&g, &w, &pp(1.0, 2.0), tol()),
            Err(Error::ZeroWeightMean)
        ));
    }

    #[test]
    fn p_geometric_reproduces_named_means() {
        // P_{G,φ,ψ} with ψ = (t−sin t)/2 is N_0 and with ψ = ln(t²+1) is
        // L_0, identically in the pair and independent of φ.
        let g = MeanFunction::from_kind(MeanKind::G);
        for (a, b) in [(0.5, 0.2), (1.0, 4.0), (0.1, 0.2), (3.0, 3.1)] {
            let p = pp(a, b);
            for phi in [WeightFn::Id, WeightFn::TSquared] {
                let w = WeightPair::new(phi.clone(), WeightFn::HalfTMinusSin).unwrap();
                let lhs = p_transform(&g, &w, &p, tol()).unwrap();
                let rhs = n_mean(0.0, &p).unwrap();
                assert!((lhs - rhs).abs() < 1e-13, "N_0 at ({a},{b}) via {}", phi.name());

                let w = WeightPair::new(phi.clone(), WeightFn::LnSquaresPlusOne).unwrap();
                let lhs = p_transform(&g, &w, &p, tol()).unwrap();
                let rhs = l_mean(0.0, &p).unwrap();
                assert!((lhs - rhs).abs() < 1e-13, "L_0 at ({a},{b}) via {}", phi.name());
            }
        }
    }

    #[test]
    fn named_mean_reference_values() {
        assert!((l_mean(0.0, &pp(0.1, 0.2)).unwrap() - 0.145169453880646951595027235713).abs() < 1e-15);
        assert!((n_mean(0.0, &pp(0.5, 0.2)).unwrap() - 0.347139907432148992373539137316).abs() < 1e-15);
        assert!((j_psi_mean(&WeightFn::Id, &pp(0.5, 1.0)).unwrap() - 0.697043883725799774143118280842).abs() < 1e-15);
        assert!((j_psi_mean(&WeightFn::Id, &pp(0.5, 0.2)).unwrap() - 0.319626648868647145195691383235).abs() < 1e-15);
        assert!(n_mean(-0.1, &pp(1.0, 2.0)).is_err());
        assert!(l_mean(f64::NAN, &pp(1.0, 2.0)).is_err());
    }

    #[test]
    fn i_phi_closed_form_matches_quadrature() {
        let p = pp(1.0, 4.0);
        let closed = i_phi_mean(&WeightFn::Id, &p, tol()).unwrap();
        assert!((closed - 2.09255388242712780613640542778).abs() < 1e-14);

        let opaque = WeightFn::Custom {
            name: "id-opaque".to_string(),
            f: Arc::new(|t| t),
        };
        let integral = i_phi_mean(&opaque, &p, tol()).unwrap();
        assert!((closed - integral).abs() < 1e-10);

        let p = pp(0.5, 2.0);
        let closed = i_phi_mean(&WeightFn::Id, &p, tol()).unwrap();
        assert!((closed - 1.07469744999401079386441969969).abs() < 1e-14);
    }

    #[test]
    fn shifted_means_sit_below_arithmetic() {
        for (a, b) in [(0.3, 0.9), (1.0, 4.0), (2.0, 2.5), (0.1, 0.11)] {
            let p = pp(a, b);
            let am = p.arithmetic();
            assert!(n_mean(0.0, &p).unwrap() < am);
            assert!(l_mean(0.3, &p).unwrap() < am);
            assert!(j_psi_mean(&WeightFn::Id, &p).unwrap() < am);
            assert!(i_phi_mean(&WeightFn::Id, &p, tol()).unwrap() < am);
        }
    }

    #[test]
    fn i_phi_dominates_geometric() {
        for phi in [WeightFn::Id, WeightFn::TSquared, WeightFn::Const(1.0)] {
            for (a, b) in [(0.5, 0.7), (1.0, 4.0), (0.05, 3.0)] {
                let p = pp(a, b);
                let v = i_phi_mean(&phi, &p, tol()).unwrap();
                let g = (a * b).sqrt();
                assert!(v > g, "{} at ({a},{b}): {v} <= {g}", phi.name());
            }
        }
    }

    #[test]
    fn psi_must_stay_positive() {
        let g = MeanFunction::from_kind(MeanKind::G);
        let w = WeightPair::new(WeightFn::Id, WeightFn::Const(0.0)).unwrap();
        assert!(s_transform(&g, &w, &pp(1.0, 2.0), tol()).is_err());
        assert!(p_transform(&g, &w, &pp(1.0, 2.0), tol()).is_err());
    }
}
