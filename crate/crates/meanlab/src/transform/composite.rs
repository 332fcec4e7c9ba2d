//! The composition transform T_{M1,M2} = (1/(b−a)) ∫ₐᵇ M1(m, x) dx with
//! m = M2(a,b): the inner mean pins one slot, the outer mean is averaged
//! along the interval. Closed forms exist for every classical outer mean;
//! anything else integrates the section directly.

use crate::error::Result;
use crate::integral::{closed_form_integral_mean, IntegralMeanKind};
use crate::mean::{MeanFunction, MeanKind};
use crate::pair::{PositivePair, Tolerance};
use crate::quad::{integrate_1d, EndpointMode, IntegrationRegion, DEFAULT_BUDGET};
use crate::report::{ChainReport, ChainViolation, Comparison};

/// T_{M1,M2} at a pair. On the diagonal every T equals a. The outer slot
/// dispatches to closed forms for registered kinds; opaque means integrate
/// x ↦ M1(m, x) adaptively.
pub fn t_mean(
    m1: &MeanFunction,
    m2: &MeanFunction,
    p: &PositivePair,
    tol: Tolerance,
) -> Result<f64> {
    if p.is_degenerate() {
        return Ok(p.a());
    }
    let m = m2.eval_pair(p);
    match m1.kind() {
        Some(kind) => t_mean_kind(kind, m, p),
        None => t_mean_quadrature(m1, m, p, tol),
    }
}

/// The defining integral, available separately as the cross-check route.
pub fn t_mean_quadrature(
    m1: &MeanFunction,
    m: f64,
    p: &PositivePair,
    tol: Tolerance,
) -> Result<f64> {
    let lo = p.min();
    let hi = p.max();
    let region = IntegrationRegion::interval(lo, hi, EndpointMode::Closed)?;
    let est = integrate_1d(|x| m1.eval(m, x), &region, tol, DEFAULT_BUDGET)
        .require_converged()?;
    Ok(est.value / (hi - lo))
}

fn t_mean_kind(kind: &MeanKind, m: f64, p: &PositivePair) -> Result<f64> {
    // All closed forms are 1-homogeneous jointly in (a, b, m); normalize by
    // the largest magnitude so squares and cubes cannot overflow.
    let scale = p.max().max(m);
    let lo = p.min() / scale;
    let hi = p.max() / scale;
    let mu = m / scale;
    Ok(scale * t_kind_normalized(kind, mu, lo, hi)?)
}

fn t_kind_normalized(kind: &MeanKind, m: f64, lo: f64, hi: f64) -> Result<f64> {
    let am = 0.5 * (lo + hi);
    let w = hi - lo;
    let t_a = 0.5 * (m + am);
    Ok(match kind {
        MeanKind::A => t_a,
        MeanKind::G => {
            let p = PositivePair::new(lo, hi)?;
            let ig = closed_form_integral_mean(IntegralMeanKind::IG, &p)?.value;
            (m * ig).sqrt()
        }
        MeanKind::H => t_h(m, lo, hi),
        MeanKind::R => {
            let alpha = lo.hypot(m);
            let beta = hi.hypot(m);
            // bβ − aα rewritten through the conjugate to avoid cancellation:
            // (b−a)(a+b)(a²+b²+m²)/(aα+bβ).
            let head = (lo + hi) * (lo * lo + hi * hi + m * m) / (lo * alpha + hi * beta);
            let tail = m * m / w * ((hi + beta) / (lo + alpha)).ln();
            (head + tail) / (2.0 * std::f64::consts::SQRT_2)
        }
        MeanKind::C => 2.0 * t_a - t_h(m, lo, hi),
        MeanKind::Grav => 4.0 / 3.0 * t_a - t_h(m, lo, hi) / 3.0,
        MeanKind::Hn => {
            let p = PositivePair::new(lo, hi)?;
            let ig = closed_form_integral_mean(IntegralMeanKind::IG, &p)?.value;
            2.0 / 3.0 * t_a + (m * ig).sqrt() / 3.0
        }
        MeanKind::AGHalf => {
            let p = PositivePair::new(lo, hi)?;
            let ig = closed_form_integral_mean(IntegralMeanKind::IG, &p)?.value;
            0.5 * (t_a + (m * ig).sqrt())
        }
        // With a ≤ m ≤ b the section min(m,x) integrates piecewise exactly.
        MeanKind::Min => (2.0 * hi * m - lo * lo - m * m) / (2.0 * w),
        MeanKind::Max => (hi * hi + m * m - 2.0 * lo * m) / (2.0 * w),
        MeanKind::ComplementA(inner) => 2.0 * t_a - t_kind_normalized(inner, m, lo, hi)?,
        MeanKind::Convex { lambda, m1, m2 } => {
            lambda * t_kind_normalized(m1, m, lo, hi)?
                + (1.0 - lambda) * t_kind_normalized(m2, m, lo, hi)?
        }
    })
}

fn t_h(m: f64, lo: f64, hi: f64) -> f64 {
    let w = hi - lo;
    2.0 * m * (1.0 - m / w * ((hi + m) / (lo + m)).ln())
}

/// Ordering report for the composition transform at one pair: the outer
/// chain T_r > T_A > T_G > T_H for each classical inner mean, and the inner
/// chain T_{·,A} > T_{·,G} > T_{·,H} for each strictly increasing outer.
pub fn t_chain_report(p: &PositivePair, tol: Tolerance) -> Result<ChainReport> {
    let mut report = ChainReport {
        chain_name: "composition-transform".to_string(),
        comparisons: Vec::new(),
        violations: Vec::new(),
        samples_checked: 0,
        seed: None,
    };
    if p.is_degenerate() {
        return Ok(report);
    }
    report.samples_checked = 1;

    let outer = [MeanKind::R, MeanKind::A, MeanKind::G, MeanKind::H];
    let inner = [MeanKind::A, MeanKind::G, MeanKind::H];
    let value = |o: &MeanKind, i: &MeanKind| -> Result<f64> {
        t_mean(
            &MeanFunction::from_kind(o.clone()),
            &MeanFunction::from_kind(i.clone()),
            p,
            tol,
        )
    };
    let push = |report: &mut ChainReport, ln: String, lv: f64, rn: String, rv: f64| {
        report.comparisons.push(Comparison {
            lhs: ln.clone(),
            rhs: rn.clone(),
            min_margin: lv - rv,
        });
        if lv <= rv {
            report.violations.push(ChainViolation {
                pair: (p.a(), p.b()),
                lhs: ln,
                rhs: rn,
                lhs_value: lv,
                rhs_value: rv,
            });
        }
    };

    for i in &inner {
        for pair in outer.windows(2) {
            let (o1, o2) = (&pair[0], &pair[1]);
            let lv = value(o1, i)?;
            let rv = value(o2, i)?;
            push(
                &mut report,
                format!("T({},{})", o1, i),
                lv,
                format!("T({},{})", o2, i),
                rv,
            );
        }
    }
    for o in &outer {
        for pair in inner.windows(2) {
            let (i1, i2) = (&pair[0], &pair[1]);
            let lv = value(o, i1)?;
            let rv = value(o, i2)?;
            push(
                &mut report,
                format!("T({},{})", o, i1),
                lv,
                format!("T({},{})", o, i2),
                rv,
            );
        }
    }
    Ok(report)
}
