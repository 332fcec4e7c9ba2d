//! Integral means `I_M = (1/(b−a)²) ∬_{[a,b]²} M dx dy` and their affine
//! companions `J_M = 3·I_M − 2·A`, with closed forms for the classical
//! family, the sharp two-sided ratio windows, and tightness sweeps.
//!
//! The closed forms for `I_H` and `I_r` cancel near the diagonal (like u⁻¹
//! and u⁻² respectively, where u = (b−a)/(a+b)), so below `SERIES_SWITCH_U`
//! both switch to rapidly convergent even series in u. All evaluation is
//! scale-normalized: formulas run on (a/max, b/max) and the result is
//! multiplied back, so no intermediate cube can overflow.

use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::mean::{MeanFunction, MeanKind};
use crate::pair::{PositivePair, Tolerance};
use crate::quad::mean_of_integrand;
use crate::report::{ChainReport, ChainViolation, Comparison};

/// Below this value of u = (b−a)/(a+b) the series forms are used.
pub const SERIES_SWITCH_U: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IntegralMeanKind {
    IA,
    IG,
    IH,
    IC,
    IGrav,
    IHn,
    IR,
    IAGhalf,
}

impl IntegralMeanKind {
    pub const ALL: [IntegralMeanKind; 8] = [
        IntegralMeanKind::IA,
        IntegralMeanKind::IG,
        IntegralMeanKind::IH,
        IntegralMeanKind::IC,
        IntegralMeanKind::IGrav,
        IntegralMeanKind::IHn,
        IntegralMeanKind::IR,
        IntegralMeanKind::IAGhalf,
    ];

    pub fn from_mean_kind(kind: &MeanKind) -> Option<Self> {
        Some(match kind {
            MeanKind::A => IntegralMeanKind::IA,
            MeanKind::G => IntegralMeanKind::IG,
            MeanKind::H => IntegralMeanKind::IH,
            MeanKind::C => IntegralMeanKind::IC,
            MeanKind::Grav => IntegralMeanKind::IGrav,
            MeanKind::Hn => IntegralMeanKind::IHn,
            MeanKind::R => IntegralMeanKind::IR,
            MeanKind::AGHalf => IntegralMeanKind::IAGhalf,
            _ => return None,
        })
    }

    pub fn source_mean(&self) -> MeanKind {
        match self {
            IntegralMeanKind::IA => MeanKind::A,
            IntegralMeanKind::IG => MeanKind::G,
            IntegralMeanKind::IH => MeanKind::H,
            IntegralMeanKind::IC => MeanKind::C,
            IntegralMeanKind::IGrav => MeanKind::Grav,
            IntegralMeanKind::IHn => MeanKind::Hn,
            IntegralMeanKind::IR => MeanKind::R,
            IntegralMeanKind::IAGhalf => MeanKind::AGHalf,
        }
    }

    /// Source-mean name; this is what the CLI accepts after `--imean`.
    pub fn name(&self) -> &'static str {
        match self {
            IntegralMeanKind::IA => "A",
            IntegralMeanKind::IG => "G",
            IntegralMeanKind::IH => "H",
            IntegralMeanKind::IC => "C",
            IntegralMeanKind::IGrav => "g",
            IntegralMeanKind::IHn => "Hn",
            IntegralMeanKind::IR => "r",
            IntegralMeanKind::IAGhalf => "AGhalf",
        }
    }

    pub fn label(&self) -> String {
        format!("I_{}", self.name())
    }

    pub fn parse(s: &str) -> Option<Self> {
        let kind = MeanKind::parse(s)?;
        Self::from_mean_kind(&kind)
    }
}

/// A closed-form evaluation; `near_diagonal_series` records that the even
/// series in u was used instead of the direct expression.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClosedFormIntegralMean {
    pub value: f64,
    pub near_diagonal_series: bool,
}

fn u_of(lo: f64, hi: f64) -> f64 {
    (hi - lo) / (hi + lo)
}

/// I_H/A = 1 − Σ_{k≥1} u^{2k} / (k(k+1)(2k−1)(2k+1)).
fn i_h_series_ratio(u: f64) -> f64 {
    let u2 = u * u;
    let mut sum = 0.0;
    let mut pw = u2;
    let mut k = 1u64;
    loop {
        let denom = (k * (k + 1) * (2 * k - 1) * (2 * k + 1)) as f64;
        let term = pw / denom;
        sum += term;
        if term < 1e-20 || k > 40 {
            break;
        }
        pw *= u2;
        k += 1;
    }
    1.0 - sum
}

/// I_r/A as an even series in u; coefficients are exact rationals from the
/// Taylor expansion of the defining integral about the diagonal.
fn i_r_series_ratio(u: f64) -> f64 {
    const C: [f64; 9] = [
        1.0,
        1.0 / 12.0,
        -1.0 / 360.0,
        11.0 / 6720.0,
        -13.0 / 40320.0,
        211.0 / 760320.0,
        -271.0 / 3075072.0,
        1919.0 / 22364160.0,
        -2597.0 / 75202560.0,
    ];
    let u2 = u * u;
    let mut acc = C[8];
    for k in (0..8).rev() {
        acc = acc * u2 + C[k];
    }
    acc
}

/// Normalized closed forms: inputs satisfy 0 < lo <= hi = 1 after scaling.
/// Returns (value, used_series).
fn closed_form_normalized(kind: IntegralMeanKind, lo: f64, hi: f64) -> (f64, bool) {
    let am = 0.5 * (lo + hi);
    let g = (lo * hi).sqrt();
    let u = u_of(lo, hi);
    match kind {
        IntegralMeanKind::IA => (am, false),
        IntegralMeanKind::IG => {
            let t = 2.0 * am + g;
            (2.0 * t * t / (9.0 * (am + g)), false)
        }
        IntegralMeanKind::IH => {
            if u < SERIES_SWITCH_U {
                (am * i_h_series_ratio(u), true)
            } else {
                (i_h_direct(lo, hi, am), false)
            }
        }
        IntegralMeanKind::IC => {
            let (ih, series) = closed_form_normalized(IntegralMeanKind::IH, lo, hi);
            (2.0 * am - ih, series)
        }
        IntegralMeanKind::IGrav => {
            let (ih, series) = closed_form_normalized(IntegralMeanKind::IH, lo, hi);
            (4.0 / 3.0 * am - ih / 3.0, series)
        }
        IntegralMeanKind::IHn => {
            let num = 13.0 * am * am + 13.0 * am * g + g * g;
            (2.0 * num / (27.0 * (am + g)), false)
        }
        IntegralMeanKind::IR => {
            if u < SERIES_SWITCH_U {
                (am * i_r_series_ratio(u), true)
            } else {
                (i_r_direct(lo, hi), false)
            }
        }
        IntegralMeanKind::IAGhalf => {
            let num = 17.0 * am * am + 17.0 * am * g + 2.0 * g * g;
            (num / (18.0 * (am + g)), false)
        }
    }
}

/// Direct I_H: (4/3)(2A + S/(b−a)²), S = a³ln(A/a) + b³ln(A/b), with the
/// logs written through ln_1p of ±u so each is fully accurate.
fn i_h_direct(lo: f64, hi: f64, am: f64) -> f64 {
    let u = (hi - lo) / (hi + lo);
    let s = lo.powi(3) * (-(-u).ln_1p()) + hi.powi(3) * (-u.ln_1p());
    let w = hi - lo;
    4.0 / 3.0 * (2.0 * am + s / (w * w))
}

/// Direct I_r over the root-mean-square integrand.
fn i_r_direct(lo: f64, hi: f64) -> f64 {
    let sqrt2 = std::f64::consts::SQRT_2;
    let k = sqrt2 + sqrt2.ln_1p();
    let r2 = (lo * lo + hi * hi).sqrt();
    let cubes = lo.powi(3) + hi.powi(3);
    let num = k * cubes
        - lo.powi(3) * ((hi + r2) / lo).ln()
        - hi.powi(3) * ((lo + r2) / hi).ln()
        - 2.0 * lo * hi * r2;
    let w = hi - lo;
    num / (3.0 * sqrt2 * w * w)
}

/// The alternate contraharmonic expression −(2/3)(A + 2S/(b−a)²); used as a
/// cross-check of the primary complement route away from the diagonal.
pub fn i_c_alternate(p: &PositivePair) -> f64 {
    let scale = p.max();
    let lo = p.min() / scale;
    let hi = 1.0;
    let am = 0.5 * (lo + hi);
    let u = u_of(lo, hi);
    let s = lo.powi(3) * (-(-u).ln_1p()) + hi.powi(3) * (-u.ln_1p());
    let w = hi - lo;
    scale * (-(2.0 / 3.0) * (am + 2.0 * s / (w * w)))
}

/// Closed-form integral mean. On the diagonal every I_M equals a. The
/// contraharmonic value is cross-checked against its independent alternate
/// expression whenever the direct (non-series) branch is active.
pub fn closed_form_integral_mean(
    kind: IntegralMeanKind,
    p: &PositivePair,
) -> Result<ClosedFormIntegralMean> {
    if p.is_degenerate() {
        return Ok(ClosedFormIntegralMean {
            value: p.a(),
            near_diagonal_series: false,
        });
    }
    let scale = p.max();
    let lo = p.min() / scale;
    let (v, series) = closed_form_normalized(kind, lo, 1.0);
    let value = v * scale;
    if !value.is_finite() {
        return Err(Error::Domain(format!(
            "{} did not evaluate finitely at ({}, {})",
            kind.label(),
            p.a(),
            p.b()
        )));
    }
    if kind == IntegralMeanKind::IC && !series {
        let alt = i_c_alternate(p);
        let diff = (value - alt).abs();
        if diff > 1e-12 * value.abs().max(1.0) {
            return Err(Error::Domain(format!(
                "contraharmonic cross-check failed at ({}, {}): {} vs {}",
                p.a(),
                p.b(),
                value,
                alt
            )));
        }
    }
    Ok(ClosedFormIntegralMean {
        value,
        near_diagonal_series: series,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub enum IntegralMethod {
    Exact,
    ClosedForm { near_diagonal_series: bool },
    Quadrature { error_bound: f64, evaluations: u64 },
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IntegralMeanResult {
    pub value: f64,
    pub method: IntegralMethod,
}

/// Integral mean of an arbitrary registered mean: exact for Min/Max and the
/// diagonal, closed form for the classical family and affine combinations,
/// cubature otherwise. Cubature that fails to converge is an error, never a
/// silently degraded value.
pub fn integral_mean(
    m: &MeanFunction,
    p: &PositivePair,
    tol: Tolerance,
) -> Result<IntegralMeanResult> {
    if p.is_degenerate() {
        return Ok(IntegralMeanResult {
            value: p.a(),
            method: IntegralMethod::Exact,
        });
    }
    if let Some(kind) = m.kind() {
        return integral_mean_of_kind(kind, p, tol);
    }
    let est = mean_of_integrand(m, p, tol)?.require_converged()?;
    Ok(IntegralMeanResult {
        value: est.value,
        method: IntegralMethod::Quadrature {
            error_bound: est.error_bound,
            evaluations: est.evaluations,
        },
    })
}

fn integral_mean_of_kind(
    kind: &MeanKind,
    p: &PositivePair,
    tol: Tolerance,
) -> Result<IntegralMeanResult> {
    let lo = p.min();
    let hi = p.max();
    match kind {
        // ∬ min = ((2a+b)/3)(b−a)², ∬ max = ((a+2b)/3)(b−a)²: exact, and the
        // kink along the diagonal makes cubature needlessly slow here.
        MeanKind::Min => Ok(IntegralMeanResult {
            value: (2.0 * lo + hi) / 3.0,
            method: IntegralMethod::Exact,
        }),
        MeanKind::Max => Ok(IntegralMeanResult {
            value: (lo + 2.0 * hi) / 3.0,
            method: IntegralMethod::Exact,
        }),
        // I is linear in the integrand, so complements and convex
        // combinations distribute.
        MeanKind::ComplementA(inner) => {
            let inner_res = integral_mean_of_kind(inner, p, tol)?;
            Ok(IntegralMeanResult {
                value: 2.0 * p.arithmetic() - inner_res.value,
                method: inner_res.method,
            })
        }
        MeanKind::Convex { lambda, m1, m2 } => {
            let r1 = integral_mean_of_kind(m1, p, tol)?;
            let r2 = integral_mean_of_kind(m2, p, tol)?;
            let value = lambda * r1.value + (1.0 - lambda) * r2.value;
            let method = combine_methods(*lambda, r1.method, r2.method);
            Ok(IntegralMeanResult { value, method })
        }
        _ => {
            let ik = IntegralMeanKind::from_mean_kind(kind).ok_or_else(|| {
                Error::Domain(format!("no closed integral mean for {kind}"))
            })?;
            let cf = closed_form_integral_mean(ik, p)?;
            Ok(IntegralMeanResult {
                value: cf.value,
                method: IntegralMethod::ClosedForm {
                    near_diagonal_series: cf.near_diagonal_series,
                },
            })
        }
    }
}

fn combine_methods(lambda: f64, m1: IntegralMethod, m2: IntegralMethod) -> IntegralMethod {
    use IntegralMethod::*;
    match (m1, m2) {
        (Exact, Exact) => Exact,
        (
            Quadrature {
                error_bound: e1,
                evaluations: n1,
            },
            Quadrature {
                error_bound: e2,
                evaluations: n2,
            },
        ) => Quadrature {
            error_bound: lambda * e1 + (1.0 - lambda) * e2,
            evaluations: n1 + n2,
        },
        (Quadrature { error_bound, evaluations }, _) => Quadrature {
            error_bound: lambda * error_bound,
            evaluations,
        },
        (_, Quadrature { error_bound, evaluations }) => Quadrature {
            error_bound: (1.0 - lambda) * error_bound,
            evaluations,
        },
        (ClosedForm { near_diagonal_series: s1 }, ClosedForm { near_diagonal_series: s2 }) => {
            ClosedForm {
                near_diagonal_series: s1 || s2,
            }
        }
        (ClosedForm { near_diagonal_series }, Exact)
        | (Exact, ClosedForm { near_diagonal_series }) => ClosedForm {
            near_diagonal_series,
        },
    }
}

/// J_M = 3·I_M − 2·A from an already computed I value.
pub fn j_from_i(i_value: f64, p: &PositivePair) -> f64 {
    3.0 * i_value - 2.0 * p.arithmetic()
}

/// Closed-form J_M.
pub fn j_mean(kind: IntegralMeanKind, p: &PositivePair) -> Result<f64> {
    Ok(j_from_i(closed_form_integral_mean(kind, p)?.value, p))
}

/// The sharp per-pair window ((2a+b)/3, (a+2b)/3) every integral mean lives
/// in; Min and Max attain the endpoints exactly.
pub fn integral_window(p: &PositivePair) -> (f64, f64) {
    let lo = p.min();
    let hi = p.max();
    ((2.0 * lo + hi) / 3.0, (lo + 2.0 * hi) / 3.0)
}

/// Both ordering chains through the integral means at one pair, plus the
/// derived cross relations. Degenerate pairs collapse every comparison to
/// equality and are skipped.
pub fn verify_integral_chain(p: &PositivePair, _tol: Tolerance) -> Result<ChainReport> {
    let mut report = ChainReport {
        chain_name: "integral-means".to_string(),
        comparisons: Vec::new(),
        violations: Vec::new(),
        samples_checked: 0,
        seed: None,
    };
    if p.is_degenerate() {
        return Ok(report);
    }
    report.samples_checked = 1;
    let am = p.arithmetic();
    let i = |k: IntegralMeanKind| -> Result<f64> { Ok(closed_form_integral_mean(k, p)?.value) };
    let ic = i(IntegralMeanKind::IC)?;
    let ir = i(IntegralMeanKind::IR)?;
    let ig_rav = i(IntegralMeanKind::IGrav)?;
    let ihn = i(IntegralMeanKind::IHn)?;
    let ig = i(IntegralMeanKind::IG)?;
    let ih = i(IntegralMeanKind::IH)?;
    let jc = j_from_i(ic, p);
    let jr = j_from_i(ir, p);
    let jg_rav = j_from_i(ig_rav, p);
    let jhn = j_from_i(ihn, p);
    let jg = j_from_i(ig, p);
    let jh = j_from_i(ih, p);

    let ordered: Vec<(&str, f64, &str, f64)> = vec![
        ("I_C", ic, "I_r", ir),
        ("I_r", ir, "I_g", ig_rav),
        ("I_g", ig_rav, "A", am),
        ("A", am, "I_Hn", ihn),
        ("I_Hn", ihn, "I_G", ig),
        ("I_G", ig, "I_H", ih),
        ("J_C", jc, "J_r", jr),
        ("J_r", jr, "J_g", jg_rav),
        ("J_g", jg_rav, "A", am),
        ("A", am, "J_Hn", jhn),
        ("J_Hn", jhn, "J_G", jg),
        ("J_G", jg, "J_H", jh),
        // Derived cross relations.
        ("J_r", jr, "I_C", ic),
        ("I_C", ic, "A", am),
        ("A", am, "I_G", ig),
        ("I_G", ig, "J_G", jg),
        ("I_C+I_G", ic + ig, "2A", 2.0 * am),
        ("2A", 2.0 * am, "I_r+I_H", ir + ih),
        ("J_C+J_G", jc + jg, "2A", 2.0 * am),
        ("2A", 2.0 * am, "J_r+J_H", jr + jh),
    ];
    for (ln, lv, rn, rv) in ordered {
        report.comparisons.push(Comparison {
            lhs: ln.to_string(),
            rhs: rn.to_string(),
            min_margin: lv - rv,
        });
        if lv <= rv {
            report.violations.push(ChainViolation {
                pair: (p.a(), p.b()),
                lhs: ln.to_string(),
                rhs: rn.to_string(),
                lhs_value: lv,
                rhs_value: rv,
            });
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundTarget {
    I,
    J,
}

impl BoundTarget {
    pub fn name(&self) -> &'static str {
        match self {
            BoundTarget::I => "I",
            BoundTarget::J => "J",
        }
    }
}

/// One two-sided ratio window: lower < target/A < upper for all a ≠ b, with
/// both constants sharp (approached as b/a → 1 or ∞).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundSpec {
    pub target: BoundTarget,
    pub kind: IntegralMeanKind,
    pub lower: f64,
    pub upper: f64,
    pub lower_strict: bool,
    pub upper_strict: bool,
    /// The bound approached as b/a → ∞ (the other is approached on the
    /// diagonal side).
    pub far_limit: f64,
}

/// The twelve sharp windows for {G, H, C, Hn, g, r} × {I, J}.
pub fn bound_catalogue() -> Vec<BoundSpec> {
    let ln2 = std::f64::consts::LN_2;
    let sqrt2 = std::f64::consts::SQRT_2;
    let asinh1 = sqrt2.ln_1p();
    let c_ih = 8.0 * (1.0 - ln2) / 3.0;
    let c_ic = 2.0 * (4.0 * ln2 - 1.0) / 3.0;
    let c_ig_rav = 4.0 * (1.0 + 2.0 * ln2) / 9.0;
    let c_ir = (2.0 + sqrt2 * asinh1) / 3.0;
    let c_jh = 2.0 * (3.0 - 4.0 * ln2);
    let c_jc = 4.0 * (2.0 * ln2 - 1.0);
    let c_jg_rav = c_ic;
    let c_jr = sqrt2 * asinh1;
    let spec = |target, kind, lower: f64, upper: f64, far: f64| BoundSpec {
        target,
        kind,
        lower,
        upper,
        lower_strict: true,
        upper_strict: true,
        far_limit: far,
    };
    vec![
        spec(BoundTarget::I, IntegralMeanKind::IG, 8.0 / 9.0, 1.0, 8.0 / 9.0),
        spec(BoundTarget::I, IntegralMeanKind::IH, c_ih, 1.0, c_ih),
        spec(BoundTarget::I, IntegralMeanKind::IC, 1.0, c_ic, c_ic),
        spec(BoundTarget::I, IntegralMeanKind::IHn, 26.0 / 27.0, 1.0, 26.0 / 27.0),
        spec(BoundTarget::I, IntegralMeanKind::IGrav, 1.0, c_ig_rav, c_ig_rav),
        spec(BoundTarget::I, IntegralMeanKind::IR, 1.0, c_ir, c_ir),
        spec(BoundTarget::J, IntegralMeanKind::IG, 2.0 / 3.0, 1.0, 2.0 / 3.0),
        spec(BoundTarget::J, IntegralMeanKind::IH, c_jh, 1.0, c_jh),
        spec(BoundTarget::J, IntegralMeanKind::IC, 1.0, c_jc, c_jc),
        spec(BoundTarget::J, IntegralMeanKind::IHn, 8.0 / 9.0, 1.0, 8.0 / 9.0),
        spec(BoundTarget::J, IntegralMeanKind::IGrav, 1.0, c_jg_rav, c_jg_rav),
        spec(BoundTarget::J, IntegralMeanKind::IR, 1.0, c_jr, c_jr),
    ]
}

pub fn bound_spec(target: BoundTarget, kind: IntegralMeanKind) -> Result<BoundSpec> {
    bound_catalogue()
        .into_iter()
        .find(|s| s.target == target && s.kind == kind)
        .ok_or_else(|| {
            Error::Domain(format!(
                "no catalogued window for {}_{}; windows exist for G, H, C, Hn, g, r",
                target.name(),
                kind.name()
            ))
        })
}

/// Ratio target/A at a pair, plus whether it sits strictly inside its
/// catalogued window.
pub fn bound_ratio(
    target: BoundTarget,
    kind: IntegralMeanKind,
    p: &PositivePair,
) -> Result<(f64, bool)> {
    let spec = bound_spec(target, kind)?;
    let i_ratio = closed_form_integral_mean(kind, p)?.value / p.arithmetic();
    let ratio = match target {
        BoundTarget::I => i_ratio,
        BoundTarget::J => 3.0 * i_ratio - 2.0,
    };
    if !ratio.is_finite() {
        return Err(Error::Domain(format!(
            "{}_{} ratio not finite at ({}, {})",
            target.name(),
            kind.name(),
            p.a(),
            p.b()
        )));
    }
    let inside = ratio > spec.lower && ratio < spec.upper;
    Ok((ratio, inside))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TightnessPoint {
    pub b_over_a: f64,
    pub ratio: f64,
    pub distance_to_limit: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TightnessReport {
    pub target: BoundTarget,
    pub kind: IntegralMeanKind,
    pub far_limit: f64,
    pub points: Vec<TightnessPoint>,
    pub monotone_approach: bool,
    pub closest_distance: f64,
    pub all_inside: bool,
}

/// Sweeps the ratio toward its sharp constant along pairs (1/t, 1) for the
/// given scale factors t > 1 (ascending). Evaluating at (1/t, 1) keeps every
/// intermediate bounded no matter how large t gets, so the sweep can never
/// produce a silent infinity.
pub fn bound_tightness_scan(
    target: BoundTarget,
    kind: IntegralMeanKind,
    scale_factors: &[f64],
) -> Result<TightnessReport> {
    let spec = bound_spec(target, kind)?;
    if scale_factors.is_empty() {
        return Err(Error::Domain("tightness sweep needs at least one ratio".into()));
    }
    let mut points = Vec::with_capacity(scale_factors.len());
    let mut all_inside = true;
    for &t in scale_factors {
        if !(t.is_finite() && t > 1.0) {
            return Err(Error::Domain(format!(
                "sweep ratio {t} invalid; need finite b/a > 1"
            )));
        }
        let p = PositivePair::new(1.0 / t, 1.0)?;
        let (ratio, inside) = bound_ratio(target, kind, &p)?;
        all_inside &= inside;
        points.push(TightnessPoint {
            b_over_a: t,
            ratio,
            distance_to_limit: (ratio - spec.far_limit).abs(),
        });
    }
    let mut monotone = true;
    for w in points.windows(2) {
        if w[0].b_over_a >= w[1].b_over_a {
            return Err(Error::Domain(
                "sweep ratios must be strictly ascending".into(),
            ));
        }
        if w[1].distance_to_limit > w[0].distance_to_limit {
            monotone = false;
        }
    }
    let closest = points
        .iter()
        .map(|pt| pt.distance_to_limit)
        .fold(f64::INFINITY, f64::min);
    Ok(TightnessReport {
        target,
        kind,
        far_limit: spec.far_limit,
        points,
        monotone_approach: monotone,
        closest_distance: closest,
        all_inside,
    })
}

/// A documented closed-form/cubature disagreement. The shipped ledger is
/// empty; entries are keyed by formula label and exact pair so an
/// undocumented mismatch stays a hard failure.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KnownDiscrepancy {
    pub formula: String,
    pub pair: (f64, f64),
    pub note: String,
}

pub fn known_discrepancies() -> &'static [KnownDiscrepancy] {
    static CACHE: OnceLock<Vec<KnownDiscrepancy>> = OnceLock::new();
    CACHE.get_or_init(|| {
        serde_json::from_str(include_str!("../data/known_discrepancies.json"))
            .expect("known_discrepancies.json parses")
    })
}

pub fn is_known_discrepancy(formula: &str, pair: (f64, f64)) -> bool {
    known_discrepancies()
        .iter()
        .any(|d| d.formula == formula && d.pair.0 == pair.0 && d.pair.1 == pair.1)
}
