//! The trigonometric transform Ŝ_M = ∫₀^{π/2} M(a·sinθ, b·cosθ) dθ, the
//! selector construction that turns it back into a mean, and the elliptic
//! arc-length sandwich the contraharmonic/gravity closed forms produce.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::s_hat_g_ratio;
use crate::mean::{MeanFunction, MeanKind};
use crate::pair::{PositivePair, Tolerance};
use crate::quad::{integrate_1d, EndpointMode, IntegrationRegion, DEFAULT_BUDGET};

/// Ŝ_M by open-endpoint quadrature, with exact shortcuts for the
/// arithmetic and geometric integrands. Symmetric in the pair because
/// θ ↦ π/2−θ swaps the two slots of a symmetric M.
pub fn s_hat(m: &MeanFunction, p: &PositivePair, tol: Tolerance) -> Result<f64> {
    match m.kind() {
        Some(MeanKind::A) => return Ok(p.arithmetic()),
        Some(MeanKind::G) => return Ok((p.a() * p.b()).sqrt() * s_hat_g_ratio()),
        _ => {}
    }
    let a = p.a();
    let b = p.b();
    let region =
        IntegrationRegion::interval(0.0, std::f64::consts::FRAC_PI_2, EndpointMode::Open)?;
    let est = integrate_1d(
        |theta| m.eval(a * theta.sin(), b * theta.cos()),
        &region,
        tol,
        DEFAULT_BUDGET,
    )
    .require_converged()?;
    Ok(est.value)
}

/// A selector (ξ, ζ) rescaling Ŝ into the mean S = (ξ/R)·Ŝ + ζ, where
/// R = √(a²+b²). Validity at a pair:
///
/// * 0 < ξ ≤ |a−b|·R/(2R−(a+b))
/// * min + (1−(a+b)/R)·ξ ≤ ζ ≤ max − ξ
///
/// On the diagonal the ξ window is empty, so no selector exists there.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SelectorPair {
    pub xi: f64,
    pub zeta: f64,
}

impl SelectorPair {
    /// The default selector ξ = |a−b|, ζ = A − |a²−b²|/(2R); valid at every
    /// off-diagonal pair.
    pub fn default_for(p: &PositivePair) -> Result<Self> {
        if p.is_degenerate() {
            return Err(Error::Selector(
                "no selector exists on the diagonal: the xi window (0, |a-b|R/(2R-(a+b))] is empty"
                    .to_string(),
            ));
        }
        let r = p.a().hypot(p.b());
        let xi = (p.a() - p.b()).abs();
        let zeta = p.arithmetic() - (p.a() * p.a() - p.b() * p.b()).abs() / (2.0 * r);
        let sel = SelectorPair { xi, zeta };
        sel.validate(p)?;
        Ok(sel)
    }

    pub fn validate(&self, p: &PositivePair) -> Result<()> {
        let a = p.a();
        let b = p.b();
        let r = a.hypot(b);
        let xi_max = (a - b).abs() * r / (2.0 * r - (a + b));
        if !(self.xi > 0.0 && self.xi <= xi_max) {
            return Err(Error::Selector(format!(
                "xi = {} violates 0 < xi <= |a-b|R/(2R-(a+b)) = {xi_max}",
                self.xi
            )));
        }
        let zeta_lo = p.min() + (1.0 - (a + b) / r) * self.xi;
        let zeta_hi = p.max() - self.xi;
        if !(self.zeta >= zeta_lo && self.zeta <= zeta_hi) {
            return Err(Error::Selector(format!(
                "zeta = {} violates min+(1-(a+b)/R)xi = {zeta_lo} <= zeta <= max-xi = {zeta_hi}",
                self.zeta
            )));
        }
        Ok(())
    }
}

/// S through an explicit selector: validates, then (ξ/R)·Ŝ_M + ζ.
pub fn s_selector_mean(
    m: &MeanFunction,
    sel: &SelectorPair,
    p: &PositivePair,
    tol: Tolerance,
) -> Result<f64> {
    sel.validate(p)?;
    let r = p.a().hypot(p.b());
    Ok(sel.xi / r * s_hat(m, p, tol)? + sel.zeta)
}

/// Closed S_G under the default selector, normalized against overflow.
fn s_g_closed(p: &PositivePair) -> f64 {
    let scale = p.max();
    let a = p.min() / scale;
    let b = 1.0;
    let r = a.hypot(b);
    let g = (a * b).sqrt();
    let am = 0.5 * (a + b);
    scale * (am + g * (b - a) / r * s_hat_g_ratio() - (b * b - a * a) / (2.0 * r))
}

/// Closed S_H under the default selector.
fn s_h_closed(p: &PositivePair) -> f64 {
    let scale = p.max();
    let a = p.min() / scale;
    let b = 1.0;
    let r = a.hypot(b);
    let am = 0.5 * (a + b);
    let term1 = (b * b - a * a) * (a * a + b * b - 4.0 * a * b) / (2.0 * r * r * r);
    let l = ((a + b + r) / (2.0 * a * b).sqrt()).ln();
    let term2 = 4.0 * a * a * b * b * (b - a) / (r * r * r * r) * l;
    scale * (am - term1 - term2)
}

/// The trigonometric mean S_M under the default selector ξ = |a−b|,
/// ζ = A − |a²−b²|/(2R). On the diagonal no selector exists and S_M(a,a)
/// is defined directly as a. Closed forms cover A, G, H and everything
/// affine in them (C, g, Hn, AGhalf, complements, convex combinations);
/// r, Min, Max and opaque means go through Ŝ quadrature.
pub fn s_mean(m: &MeanFunction, p: &PositivePair, tol: Tolerance) -> Result<f64> {
    if p.is_degenerate() {
        return Ok(p.a());
    }
    match m.kind() {
        Some(kind) => s_mean_kind(kind, p, tol),
        None => {
            let sel = SelectorPair::default_for(p)?;
            s_selector_mean(m, &sel, p, tol)
        }
    }
}

fn s_mean_kind(kind: &MeanKind, p: &PositivePair, tol: Tolerance) -> Result<f64> {
    let am = p.arithmetic();
    Ok(match kind {
        MeanKind::A => am,
        MeanKind::G => s_g_closed(p),
        MeanKind::H => s_h_closed(p),
        MeanKind::C => 2.0 * am - s_h_closed(p),
        MeanKind::Grav => 4.0 / 3.0 * am - s_h_closed(p) / 3.0,
        MeanKind::Hn => (2.0 * am + s_g_closed(p)) / 3.0,
        MeanKind::AGHalf => (am + s_g_closed(p)) / 2.0,
        MeanKind::ComplementA(inner) => 2.0 * am - s_mean_kind(inner, p, tol)?,
        MeanKind::Convex { lambda, m1, m2 } => {
            lambda * s_mean_kind(m1, p, tol)? + (1.0 - lambda) * s_mean_kind(m2, p, tol)?
        }
        MeanKind::R | MeanKind::Min | MeanKind::Max => {
            let sel = SelectorPair::default_for(p)?;
            let mf = MeanFunction::from_kind(kind.clone());
            s_selector_mean(&mf, &sel, p, tol)?
        }
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EllipticSandwich {
    pub lower: f64,
    pub integral: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Two-sided bracket for the elliptic arc integral
/// E = ∫₀^{π/2} √(a²sin²θ + b²cos²θ) dθ from the gravity and contraharmonic
/// closed forms: √2(R/|a−b|)(S_M − A + (a+b)|a−b|/(2R)) with M = g below
/// and M = C above.
pub fn elliptic_arc_sandwich(p: &PositivePair, tol: Tolerance) -> Result<EllipticSandwich> {
    if p.is_degenerate() {
        return Err(Error::Domain(
            "elliptic sandwich needs a != b: both bracket factors divide by |a-b|".to_string(),
        ));
    }
    let a = p.a();
    let b = p.b();
    let d = (a - b).abs();
    let r = a.hypot(b);
    let am = p.arithmetic();
    let shift = (a + b) * d / (2.0 * r);
    let factor = std::f64::consts::SQRT_2 * r / d;
    let s_c = 2.0 * am - s_h_closed(p);
    let s_g_rav = 4.0 / 3.0 * am - s_h_closed(p) / 3.0;
    let lower = factor * (s_g_rav - am + shift);
    let upper = factor * (s_c - am + shift);

    let region =
        IntegrationRegion::interval(0.0, std::f64::consts::FRAC_PI_2, EndpointMode::Closed)?;
    let integral = integrate_1d(
        |theta| {
            let s = a * theta.sin();
            let c = b * theta.cos();
            s.hypot(c)
        },
        &region,
        tol,
        DEFAULT_BUDGET,
    )
    .require_converged()?
    .value;

    Ok(EllipticSandwich {
        lower,
        integral,
        upper,
        holds: lower < integral && integral < upper,
    })
}
