//! Inequality laboratory: a registry of named closed-form expressions,
//! seeded chain verification, counterexample scanning with automatic
//! high-precision escalation near the diagonal, and the Γ(3/4) sandwich
//! checked through two independent routes.

use astro_float::BigFloat;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma;
use crate::hiprec::{HpCtx, PrecisionConfig, MAX_DECIMAL_DIGITS};
use crate::integral::verify_integral_chain;
use crate::mean::{classical_chain, eval_mean, MeanFunction, MeanKind};
use crate::pair::{PairSampler, PositivePair, Tolerance};
use crate::report::{ChainReport, ChainViolation, Comparison};
use crate::transform::{j_psi_mean, l_mean, n_mean, s_mean, t_chain_report, WeightFn};

/// Effective decimal precision of a plain f64 evaluation, for certificate
/// noise-floor accounting.
pub const F64_DIGITS: u32 = 15;

/// Smallest |difference| certifiable at a given precision: the gap must
/// clear the arithmetic noise floor by ten orders of magnitude.
pub fn noise_floor(decimal_digits: u32) -> f64 {
    10f64.powi(10 - decimal_digits.min(400) as i32)
}

/// ψ maps with both an f64 and a high-precision evaluation route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PsiId {
    Id,
    HalfTMinusSin,
    LnSquaresPlusOne,
}

impl PsiId {
    pub fn weight(&self) -> WeightFn {
        match self {
            PsiId::Id => WeightFn::Id,
            PsiId::HalfTMinusSin => WeightFn::HalfTMinusSin,
            PsiId::LnSquaresPlusOne => WeightFn::LnSquaresPlusOne,
        }
    }

    pub fn token(&self) -> &'static str {
        match self {
            PsiId::Id => "Id",
            PsiId::HalfTMinusSin => "Tsin",
            PsiId::LnSquaresPlusOne => "Lnsq",
        }
    }

    fn eval_hp(&self, ctx: &mut HpCtx, x: &BigFloat) -> BigFloat {
        match self {
            PsiId::Id => x.clone(),
            PsiId::HalfTMinusSin => {
                let s = ctx.sin(x);
                let half = ctx.from_f64(0.5);
                ctx.mul(&ctx.sub(x, &s), &half)
            }
            PsiId::LnSquaresPlusOne => {
                let one = ctx.from_f64(1.0);
                let sq = ctx.mul(x, x);
                ctx.ln(&ctx.add(&sq, &one))
            }
        }
    }
}

/// A named expression the scanner and the high-precision evaluator agree
/// on: every registered mean plus the shifted transforms N_c, L_c and the
/// J transform with a built-in ψ.
#[derive(Clone, Debug, PartialEq)]
pub enum ExprId {
    Mean(MeanKind),
    N(f64),
    L(f64),
    JPsi(PsiId),
}

impl ExprId {
    pub fn n(c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::NegativeShift(c));
        }
        Ok(ExprId::N(c))
    }

    pub fn l(c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::NegativeShift(c));
        }
        Ok(ExprId::L(c))
    }

    pub fn parse(s: &str) -> Result<Self> {
        if let Some(kind) = MeanKind::parse(s) {
            return Ok(ExprId::Mean(kind));
        }
        match s {
            "N0" | "n0" => return ExprId::n(0.0),
            "L0" | "l0" => return ExprId::l(0.0),
            "JId" | "Jid" | "jid" | "J:Id" | "J:id" => return Ok(ExprId::JPsi(PsiId::Id)),
            "JTsin" | "J:tsin" | "jtsin" => return Ok(ExprId::JPsi(PsiId::HalfTMinusSin)),
            "JLnsq" | "J:lnsq" | "jlnsq" => return Ok(ExprId::JPsi(PsiId::LnSquaresPlusOne)),
            _ => {}
        }
        for (prefix, ctor) in [
            ("N(", ExprId::n as fn(f64) -> Result<ExprId>),
            ("L(", ExprId::l as fn(f64) -> Result<ExprId>),
        ] {
            if let Some(rest) = s.strip_prefix(prefix) {
                if let Some(body) = rest.strip_suffix(')') {
                    if let Ok(c) = body.parse::<f64>() {
                        return ctor(c);
                    }
                }
            }
        }
        Err(Error::UnknownExpression(s.to_string()))
    }

    pub fn name(&self) -> String {
        match self {
            ExprId::Mean(kind) => kind.name(),
            ExprId::N(c) if *c == 0.0 => "N0".into(),
            ExprId::N(c) => format!("N({c})"),
            ExprId::L(c) if *c == 0.0 => "L0".into(),
            ExprId::L(c) => format!("L({c})"),
            ExprId::JPsi(psi) => format!("J{}", psi.token()),
        }
    }

    pub fn eval_f64(&self, p: &PositivePair) -> Result<f64> {
        match self {
            ExprId::Mean(kind) => Ok(eval_mean(kind, p)),
            ExprId::N(c) => n_mean(*c, p),
            ExprId::L(c) => l_mean(*c, p),
            ExprId::JPsi(psi) => j_psi_mean(&psi.weight(), p),
        }
    }

    pub fn eval_hp(&self, ctx: &mut HpCtx, a: &BigFloat, b: &BigFloat) -> Result<BigFloat> {
        match self {
            ExprId::Mean(kind) => Ok(hp_mean_value(ctx, kind, a, b)),
            ExprId::N(c) => {
                if !(c.is_finite() && *c >= 0.0) {
                    return Err(Error::NegativeShift(*c));
                }
                // A − ¼(√(2c + a − sin a) − √(2c + b − sin b))²
                let two_c = ctx.from_f64(2.0 * c);
                let half = ctx.from_f64(0.5);
                let quarter = ctx.from_f64(0.25);
                let mean = ctx.mul(&ctx.add(a, b), &half);
                let sa = ctx.sin(a);
                let sb = ctx.sin(b);
                let ra = ctx.sqrt(&ctx.add(&two_c, &ctx.sub(a, &sa)));
                let rb = ctx.sqrt(&ctx.add(&two_c, &ctx.sub(b, &sb)));
                let d = ctx.sub(&ra, &rb);
                let d2 = ctx.mul(&d, &d);
                Ok(ctx.sub(&mean, &ctx.mul(&quarter, &d2)))
            }
            ExprId::L(c) => {
                if !(c.is_finite() && *c >= 0.0) {
                    return Err(Error::NegativeShift(*c));
                }
                // −c + A − (ψa+ψb)/2 + √((c+ψa)(c+ψb)),  ψ(x) = ln(x²+1)
                let shift = ctx.from_f64(*c);
                let half = ctx.from_f64(0.5);
                let one = ctx.from_f64(1.0);
                let mean = ctx.mul(&ctx.add(a, b), &half);
                let pa = ctx.ln(&ctx.add(&ctx.mul(a, a), &one));
                let pb = ctx.ln(&ctx.add(&ctx.mul(b, b), &one));
                let avg_psi = ctx.mul(&ctx.add(&pa, &pb), &half);
                let root = ctx.sqrt(&ctx.mul(&ctx.add(&shift, &pa), &ctx.add(&shift, &pb)));
                let v = ctx.sub(&mean, &shift);
                let v = ctx.sub(&v, &avg_psi);
                Ok(ctx.add(&v, &root))
            }
            ExprId::JPsi(psi) => {
                // A − ((ψa−ψb)/2)² ln(1 + 1/A(ψa,ψb))
                let half = ctx.from_f64(0.5);
                let one = ctx.from_f64(1.0);
                let mean = ctx.mul(&ctx.add(a, b), &half);
                let pa = psi.eval_hp(ctx, a);
                let pb = psi.eval_hp(ctx, b);
                let avg_psi = ctx.mul(&ctx.add(&pa, &pb), &half);
                let gap = ctx.mul(&ctx.sub(&pa, &pb), &half);
                let gap2 = ctx.mul(&gap, &gap);
                let log_term = ctx.ln(&ctx.add(&one, &ctx.div(&one, &avg_psi)));
                Ok(ctx.sub(&mean, &ctx.mul(&gap2, &log_term)))
            }
        }
    }
}

fn hp_mean_value(ctx: &mut HpCtx, kind: &MeanKind, a: &BigFloat, b: &BigFloat) -> BigFloat {
    use MeanKind::*;
    let half = ctx.from_f64(0.5);
    match kind {
        Min => ctx.min(a, b),
        Max => ctx.max(a, b),
        A => ctx.mul(&ctx.add(a, b), &half),
        G => ctx.sqrt(&ctx.mul(a, b)),
        H => {
            let two = ctx.from_f64(2.0);
            let num = ctx.mul(&two, &ctx.mul(a, b));
            ctx.div(&num, &ctx.add(a, b))
        }
        C => {
            let num = ctx.add(&ctx.mul(a, a), &ctx.mul(b, b));
            ctx.div(&num, &ctx.add(a, b))
        }
        R => {
            let num = ctx.add(&ctx.mul(a, a), &ctx.mul(b, b));
            ctx.sqrt(&ctx.mul(&num, &half))
        }
        Grav => {
            let two = ctx.from_f64(2.0);
            let three = ctx.from_f64(3.0);
            let sum = ctx.add(&ctx.add(&ctx.mul(a, a), &ctx.mul(a, b)), &ctx.mul(b, b));
            ctx.div(&ctx.mul(&two, &sum), &ctx.mul(&three, &ctx.add(a, b)))
        }
        Hn => {
            let three = ctx.from_f64(3.0);
            let g = ctx.sqrt(&ctx.mul(a, b));
            ctx.div(&ctx.add(&ctx.add(a, &g), b), &three)
        }
        AGHalf => {
            let mean = ctx.mul(&ctx.add(a, b), &half);
            let g = ctx.sqrt(&ctx.mul(a, b));
            ctx.mul(&ctx.add(&mean, &g), &half)
        }
        ComplementA(inner) => {
            let sum = ctx.add(a, b);
            let m = hp_mean_value(ctx, inner, a, b);
            ctx.sub(&sum, &m)
        }
        Convex { lambda, m1, m2 } => {
            let l = ctx.from_f64(*lambda);
            let lc = ctx.from_f64(1.0 - *lambda);
            let v1 = hp_mean_value(ctx, m1, a, b);
            let v2 = hp_mean_value(ctx, m2, a, b);
            ctx.add(&ctx.mul(&l, &v1), &ctx.mul(&lc, &v2))
        }
    }
}

/// Named inequality chains with a per-pair report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainId {
    Classical,
    Integral,
    SMeans,
    TMeans,
}

impl ChainId {
    pub const ALL: [ChainId; 4] = [
        ChainId::Classical,
        ChainId::Integral,
        ChainId::SMeans,
        ChainId::TMeans,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ChainId::Classical => "classical",
            ChainId::Integral => "integral",
            ChainId::SMeans => "s-means",
            ChainId::TMeans => "t-means",
        }
    }

    pub fn parse(s: &str) -> Option<ChainId> {
        match s {
            "classical" => Some(ChainId::Classical),
            "integral" => Some(ChainId::Integral),
            "s" | "smeans" | "s-means" => Some(ChainId::SMeans),
            "t" | "tmeans" | "t-means" => Some(ChainId::TMeans),
            _ => None,
        }
    }
}

fn adjacent_chain_report(
    name: &str,
    values: &[(&str, f64)],
    p: &PositivePair,
) -> ChainReport {
    let mut comparisons = Vec::with_capacity(values.len().saturating_sub(1));
    let mut violations = Vec::new();
    for w in values.windows(2) {
        let (lhs_name, lhs_value) = w[0];
        let (rhs_name, rhs_value) = w[1];
        comparisons.push(Comparison {
            lhs: lhs_name.to_string(),
            rhs: rhs_name.to_string(),
            min_margin: lhs_value - rhs_value,
        });
        if !p.is_degenerate() && lhs_value <= rhs_value {
            violations.push(ChainViolation {
                pair: (p.a(), p.b()),
                lhs: lhs_name.to_string(),
                rhs: rhs_name.to_string(),
                lhs_value,
                rhs_value,
            });
        }
    }
    ChainReport {
        chain_name: name.to_string(),
        comparisons,
        violations,
        samples_checked: 1,
        seed: None,
    }
}

/// Evaluates one chain at one pair. Degenerate pairs yield an all-equal
/// report with strict checks skipped.
pub fn chain_report_at(chain: ChainId, p: &PositivePair, tol: Tolerance) -> Result<ChainReport> {
    match chain {
        ChainId::Classical => {
            let values = classical_chain(p);
            Ok(adjacent_chain_report("classical", &values, p))
        }
        ChainId::Integral => {
            if p.is_degenerate() {
                return Ok(ChainReport {
                    chain_name: "integral".into(),
                    comparisons: Vec::new(),
                    violations: Vec::new(),
                    samples_checked: 1,
                    seed: None,
                });
            }
            verify_integral_chain(p, tol)
        }
        ChainId::SMeans => {
            if p.is_degenerate() {
                return Ok(ChainReport {
                    chain_name: "s-means".into(),
                    comparisons: Vec::new(),
                    violations: Vec::new(),
                    samples_checked: 1,
                    seed: None,
                });
            }
            let s_of = |kind: MeanKind| s_mean(&MeanFunction::from_kind(kind), p, tol);
            let values = [
                ("S_C", s_of(MeanKind::C)?),
                ("S_g", s_of(MeanKind::Grav)?),
                ("A", p.arithmetic()),
                ("S_G", s_of(MeanKind::G)?),
                ("S_H", s_of(MeanKind::H)?),
            ];
            Ok(adjacent_chain_report("s-means", &values, p))
        }
        ChainId::TMeans => {
            if p.is_degenerate() {
                return Ok(ChainReport {
                    chain_name: "t-means".into(),
                    comparisons: Vec::new(),
                    violations: Vec::new(),
                    samples_checked: 1,
                    seed: None,
                });
            }
            t_chain_report(p, tol)
        }
    }
}

fn merge_chain_reports(acc: &mut ChainReport, next: ChainReport) {
    if acc.comparisons.is_empty() {
        acc.comparisons = next.comparisons;
    } else {
        debug_assert_eq!(acc.comparisons.len(), next.comparisons.len());
        for (c, n) in acc.comparisons.iter_mut().zip(next.comparisons) {
            if n.min_margin < c.min_margin {
                c.min_margin = n.min_margin;
            }
        }
    }
    acc.violations.extend(next.violations);
}

/// Checks every adjacent comparison of the chain at `n` seeded log-uniform
/// pairs over (1e−3, 1e3). Identical seeds give identical reports.
pub fn verify_chain(chain: ChainId, n: u64, seed: u64, tol: Tolerance) -> Result<ChainReport> {
    let mut sampler = PairSampler::new(seed, 1e-3, 1e3);
    let mut merged = ChainReport {
        chain_name: chain.name().to_string(),
        comparisons: Vec::new(),
        violations: Vec::new(),
        samples_checked: n,
        seed: Some(seed),
    };
    for _ in 0..n {
        let p = sampler.sample_off_diagonal();
        let r = chain_report_at(chain, &p, tol)?;
        merge_chain_reports(&mut merged, r);
    }
    Ok(merged)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    LhsGreater,
    RhsGreater,
}

/// A machine-checkable record of a strict inequality at one pair: the
/// signed difference lhs − rhs and the precision that resolved it.
#[derive(Clone, Debug, Serialize)]
pub struct ScanCertificate {
    pub lhs: String,
    pub rhs: String,
    pub witness: PositivePair,
    pub difference: f64,
    pub precision_digits: u32,
    pub direction: Direction,
}

impl ScanCertificate {
    pub fn noise_floor(&self) -> f64 {
        noise_floor(self.precision_digits)
    }
}

/// Re-evaluates a certificate's difference at ten extra digits and reports
/// whether the sign survives.
pub fn recheck_certificate(cert: &ScanCertificate) -> Result<bool> {
    let lhs = ExprId::parse(&cert.lhs)?;
    let rhs = ExprId::parse(&cert.rhs)?;
    let digits = (cert.precision_digits + 10).min(MAX_DECIMAL_DIGITS);
    let mut ctx = HpCtx::new(PrecisionConfig::new(digits)?)?;
    let a = ctx.from_f64(cert.witness.a());
    let b = ctx.from_f64(cert.witness.b());
    let lv = lhs.eval_hp(&mut ctx, &a, &b)?;
    let rv = rhs.eval_hp(&mut ctx, &a, &b)?;
    let diff = ctx.to_f64(&ctx.sub(&lv, &rv));
    Ok(match cert.direction {
        Direction::LhsGreater => diff > 0.0,
        Direction::RhsGreater => diff < 0.0,
    })
}

/// One printed claim from the incomparability proposition: an inequality
/// direction at a specific witness, optionally with printed decimal
/// anchors and a claimed gap size.
#[derive(Clone, Debug)]
pub struct Prop25Claim {
    pub label: &'static str,
    pub lhs: ExprId,
    pub rhs: ExprId,
    pub witness: (&'static str, &'static str),
    pub claimed: Direction,
    /// (lhs anchor, rhs anchor): for LhsGreater, lhs > a₁ ≥ a₂ > rhs; for
    /// RhsGreater, lhs < a₁ ≤ a₂ < rhs.
    pub anchors: Option<(f64, f64)>,
    /// Claimed |difference| lower bound for the high-precision witnesses.
    pub claimed_gap: Option<f64>,
    pub digits: u32,
}

pub fn prop25_claims() -> Vec<Prop25Claim> {
    vec![
        Prop25Claim {
            label: "JId < G at (0.5, 1)",
            lhs: ExprId::JPsi(PsiId::Id),
            rhs: ExprId::Mean(MeanKind::G),
            witness: ("0.5", "1"),
            claimed: Direction::RhsGreater,
            anchors: Some((0.6971, 0.7071)),
            claimed_gap: None,
            digits: 30,
        },
        Prop25Claim {
            label: "JId > G at (0.5, 0.2)",
            lhs: ExprId::JPsi(PsiId::Id),
            rhs: ExprId::Mean(MeanKind::G),
            witness: ("0.5", "0.2"),
            claimed: Direction::LhsGreater,
            anchors: Some((0.31962, 0.31623)),
            claimed_gap: None,
            digits: 30,
        },
        Prop25Claim {
            label: "L0 > G at (0.1, 0.2)",
            lhs: ExprId::L(0.0),
            rhs: ExprId::Mean(MeanKind::G),
            witness: ("0.1", "0.2"),
            claimed: Direction::LhsGreater,
            anchors: Some((0.14516, 0.14143)),
            claimed_gap: None,
            digits: 30,
        },
        Prop25Claim {
            label: "L0 < H at (4.1754412, 4.175399)",
            lhs: ExprId::L(0.0),
            rhs: ExprId::Mean(MeanKind::H),
            witness: ("4.1754412", "4.175399"),
            claimed: Direction::RhsGreater,
            anchors: None,
            claimed_gap: Some(1e-9),
            digits: 40,
        },
        Prop25Claim {
            label: "N0 > G at (0.5, 0.2)",
            lhs: ExprId::N(0.0),
            rhs: ExprId::Mean(MeanKind::G),
            witness: ("0.5", "0.2"),
            claimed: Direction::LhsGreater,
            anchors: Some((0.34713, 0.31623)),
            claimed_gap: None,
            digits: 30,
        },
        Prop25Claim {
            label: "N0 < H at (4.1, 4.100000001)",
            lhs: ExprId::N(0.0),
            rhs: ExprId::Mean(MeanKind::H),
            witness: ("4.1", "4.100000001"),
            claimed: Direction::RhsGreater,
            anchors: None,
            claimed_gap: Some(1e-19),
            digits: 50,
        },
    ]
}

/// Evaluates one claim's witness at its stated precision, parsing the
/// witness coordinates as exact decimals, and certifies the actual sign.
pub fn evaluate_claim(claim: &Prop25Claim) -> Result<ScanCertificate> {
    let cfg = PrecisionConfig::new(claim.digits)?;
    let mut ctx = HpCtx::new(cfg).map_err(|e| {
        Error::Domain(format!(
            "precision backend unavailable; the '{}' certificate needs {} digits: {e}",
            claim.label, claim.digits
        ))
    })?;
    let a = ctx.parse_decimal(claim.witness.0)?;
    let b = ctx.parse_decimal(claim.witness.1)?;
    let lv = claim.lhs.eval_hp(&mut ctx, &a, &b)?;
    let rv = claim.rhs.eval_hp(&mut ctx, &a, &b)?;
    let difference = ctx.to_f64(&ctx.sub(&lv, &rv));
    let direction = if difference > 0.0 {
        Direction::LhsGreater
    } else {
        Direction::RhsGreater
    };
    let witness = PositivePair::new(
        claim.witness.0.parse::<f64>().unwrap_or(f64::NAN),
        claim.witness.1.parse::<f64>().unwrap_or(f64::NAN),
    )?;
    Ok(ScanCertificate {
        lhs: claim.lhs.name(),
        rhs: claim.rhs.name(),
        witness,
        difference,
        precision_digits: claim.digits,
        direction,
    })
}

/// Evaluates the six printed witnesses and returns truthful certificates
/// recording the directions the arithmetic actually produces.
pub fn reproduce_incomparability() -> Result<Vec<ScanCertificate>> {
    prop25_claims().iter().map(evaluate_claim).collect()
}

/// A claim paired with its certificate and the reproduction verdict.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimOutcome {
    pub label: String,
    pub certificate: ScanCertificate,
    pub anchors_hold: bool,
    pub direction_matches: bool,
    pub gap_matches: bool,
    pub reproduced: bool,
}

pub fn prop25_outcomes() -> Result<Vec<ClaimOutcome>> {
    let mut out = Vec::new();
    for claim in prop25_claims() {
        let certificate = evaluate_claim(&claim)?;
        let anchors_hold = match claim.anchors {
            None => true,
            Some((a_lhs, a_rhs)) => {
                let p = &certificate.witness;
                let lv = claim.lhs.eval_f64(p)?;
                let rv = claim.rhs.eval_f64(p)?;
                match claim.claimed {
                    Direction::LhsGreater => lv > a_lhs && rv < a_rhs,
                    Direction::RhsGreater => lv < a_lhs && rv > a_rhs,
                }
            }
        };
        let direction_matches = certificate.direction == claim.claimed;
        let gap_matches = match claim.claimed_gap {
            None => true,
            Some(gap) => match claim.claimed {
                Direction::LhsGreater => certificate.difference > gap,
                Direction::RhsGreater => certificate.difference < -gap,
            },
        };
        out.push(ClaimOutcome {
            label: claim.label.to_string(),
            certificate,
            anchors_hold,
            direction_matches,
            gap_matches,
            reproduced: anchors_hold && direction_matches && gap_matches,
        });
    }
    Ok(out)
}

/// Search box for the scanner; both coordinate ranges must be positive.
#[derive(Clone, Copy, Debug)]
pub struct ScanRegion {
    pub a: (f64, f64),
    pub b: (f64, f64),
}

impl ScanRegion {
    pub fn new(a: (f64, f64), b: (f64, f64)) -> Result<Self> {
        for (lo, hi) in [a, b] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
                return Err(Error::Domain(format!(
                    "scan region sides must satisfy 0 < lo < hi, got ({lo}, {hi})"
                )));
            }
        }
        Ok(ScanRegion { a, b })
    }

    pub fn square(lo: f64, hi: f64) -> Result<Self> {
        ScanRegion::new((lo, hi), (lo, hi))
    }
}

struct ScanState<'a> {
    lhs: &'a ExprId,
    rhs: &'a ExprId,
    evals: u64,
    budget: u64,
}

impl ScanState<'_> {
    /// One probe of lhs−rhs; `None` once the budget is exhausted.
    fn probe(&mut self, a: f64, b: f64) -> Result<Option<(PositivePair, f64)>> {
        if self.evals.saturating_add(2) > self.budget {
            return Ok(None);
        }
        self.evals += 2;
        let p = PositivePair::new(a, b)?;
        let d = self.lhs.eval_f64(&p)? - self.rhs.eval_f64(&p)?;
        Ok(Some((p, d)))
    }
}

/// Certifies a negative f64 difference, escalating to high precision when
/// the gap sits under the f64 noise floor or the pair hugs the diagonal.
fn try_certify(
    lhs: &ExprId,
    rhs: &ExprId,
    p: &PositivePair,
    d: f64,
    prec: PrecisionConfig,
) -> Result<Option<ScanCertificate>> {
    if !(d < 0.0) {
        return Ok(None);
    }
    let lv = lhs.eval_f64(p)?;
    let rv = rhs.eval_f64(p)?;
    let scale = lv.abs().max(rv.abs()).max(1.0);
    let needs_hp = p.is_near_diagonal()
        || d.abs() < noise_floor(F64_DIGITS)
        || d.abs() < 1e3 * f64::EPSILON * scale;
    if !needs_hp {
        return Ok(Some(ScanCertificate {
            lhs: lhs.name(),
            rhs: rhs.name(),
            witness: *p,
            difference: d,
            precision_digits: F64_DIGITS,
            direction: Direction::RhsGreater,
        }));
    }
    let mut ctx = HpCtx::new(prec)?;
    let a = ctx.from_f64(p.a());
    let b = ctx.from_f64(p.b());
    let lv = lhs.eval_hp(&mut ctx, &a, &b)?;
    let rv = rhs.eval_hp(&mut ctx, &a, &b)?;
    let diff = ctx.to_f64(&ctx.sub(&lv, &rv));
    if diff < -noise_floor(prec.decimal_digits) {
        return Ok(Some(ScanCertificate {
            lhs: lhs.name(),
            rhs: rhs.name(),
            witness: *p,
            difference: diff,
            precision_digits: prec.decimal_digits,
            direction: Direction::RhsGreater,
        }));
    }
    Ok(None)
}

const LADDER_OFFSETS: [f64; 10] = [0.5, 0.2, 0.1, 0.03, 0.01, 3e-3, 1e-3, 1e-4, 1e-5, 1e-6];

/// Deterministic search for a pair where lhs < rhs: a log-spaced grid pass
/// over the region, then golden-section descent of lhs−rhs along lines
/// parallel to the diagonal at geometrically shrinking offsets. Candidates
/// under the f64 noise floor or near the diagonal are re-certified at
/// `prec` digits; returns the first certificate found, or `None` once the
/// evaluation budget runs out.
pub fn scan_counterexample(
    lhs: &ExprId,
    rhs: &ExprId,
    region: ScanRegion,
    budget: u64,
    prec: PrecisionConfig,
) -> Result<Option<ScanCertificate>> {
    if budget == 0 {
        return Err(Error::Domain("scan budget must be at least 1".into()));
    }
    let mut state = ScanState {
        lhs,
        rhs,
        evals: 0,
        budget,
    };

    // Grid pass, candidates sorted by how negative their difference is.
    let n = (((budget / 2) as f64).sqrt().floor() as usize).clamp(2, 33);
    let axis = |lo: f64, hi: f64, i: usize| lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
    let mut candidates: Vec<(PositivePair, f64)> = Vec::new();
    'grid: for i in 0..n {
        for j in 0..n {
            let x = axis(region.a.0, region.a.1, i);
            let y = axis(region.b.0, region.b.1, j);
            if x == y {
                continue;
            }
            match state.probe(x, y)? {
                Some((p, d)) if d < 0.0 => candidates.push((p, d)),
                Some(_) => {}
                None => break 'grid,
            }
        }
    }
    candidates.sort_by(|l, r| {
        l.1.partial_cmp(&r.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(l.0.a().partial_cmp(&r.0.a()).unwrap_or(std::cmp::Ordering::Equal))
    });
    for (p, d) in &candidates {
        if let Some(cert) = try_certify(lhs, rhs, p, *d, prec)? {
            return Ok(Some(cert));
        }
    }

    // Diagonal-parallel descent: b = t(1+u), u from ±LADDER_OFFSETS.
    for &u0 in &LADDER_OFFSETS {
        for sign in [1.0, -1.0] {
            let u = sign * u0;
            let factor = 1.0 + u;
            let t_lo = region.a.0.max(region.b.0 / factor);
            let t_hi = region.a.1.min(region.b.1 / factor);
            if !(t_lo < t_hi) {
                continue;
            }
            let (mut s_lo, mut s_hi) = (t_lo.ln(), t_hi.ln());
            let mut best: Option<(PositivePair, f64)> = None;
            let probe_s = |s: f64,
                               state: &mut ScanState,
                               best: &mut Option<(PositivePair, f64)>|
             -> Result<Option<f64>> {
                let t = s.exp();
                match state.probe(t, t * factor)? {
                    Some((p, d)) => {
                        if best.as_ref().map_or(true, |(_, bd)| d < *bd) {
                            *best = Some((p, d));
                        }
                        Ok(Some(d))
                    }
                    None => Ok(None),
                }
            };
            const INV_PHI: f64 = 0.618_033_988_749_894_9;
            let mut c = s_hi - INV_PHI * (s_hi - s_lo);
            let mut d_pt = s_lo + INV_PHI * (s_hi - s_lo);
            let (mut fc, mut fd) = match (
                probe_s(c, &mut state, &mut best)?,
                probe_s(d_pt, &mut state, &mut best)?,
            ) {
                (Some(fc), Some(fd)) => (fc, fd),
                _ => break,
            };
            for _ in 0..40 {
                if fc <= fd {
                    s_hi = d_pt;
                    d_pt = c;
                    fd = fc;
                    c = s_hi - INV_PHI * (s_hi - s_lo);
                    match probe_s(c, &mut state, &mut best)? {
                        Some(v) => fc = v,
                        None => break,
                    }
                } else {
                    s_lo = c;
                    c = d_pt;
                    fc = fd;
                    d_pt = s_lo + INV_PHI * (s_hi - s_lo);
                    match probe_s(d_pt, &mut state, &mut best)? {
                        Some(v) => fd = v,
                        None => break,
                    }
                }
            }
            if let Some((p, d)) = best {
                if let Some(cert) = try_certify(lhs, rhs, &p, d, prec)? {
                    return Ok(Some(cert));
                }
            }
            if state.evals.saturating_add(2) > state.budget {
                return Ok(None);
            }
        }
    }
    Ok(None)
}

/// Verdict of the Γ(3/4) sandwich 7/12 > Γ²(3/4)/√(3π) > (140−48 ln6)/125,
/// established once through high-precision constants and once through the
/// concrete ordering A(3,4) > S_G(3,4) > S_H(3,4).
#[derive(Clone, Debug, Serialize)]
pub struct GammaSandwichCheck {
    pub left: f64,
    pub middle: f64,
    pub right: f64,
    pub holds: bool,
    pub gamma_value: f64,
    pub lanczos_agreement: f64,
    pub mean_route: [f64; 3],
    pub mean_route_holds: bool,
    pub precision_digits: u32,
}

pub fn gamma_sandwich_check(prec: PrecisionConfig) -> Result<GammaSandwichCheck> {
    let mut ctx = HpCtx::new(prec)?;
    let g34 = ctx.gamma_three_quarters();
    let pi = ctx.pi();
    let three = ctx.from_f64(3.0);
    let six = ctx.from_f64(6.0);
    let middle_hp = ctx.div(&ctx.mul(&g34, &g34), &ctx.sqrt(&ctx.mul(&three, &pi)));
    let left_hp = ctx.div(&ctx.from_f64(7.0), &ctx.from_f64(12.0));
    let ln6 = ctx.ln(&six);
    let right_hp = ctx.div(
        &ctx.sub(&ctx.from_f64(140.0), &ctx.mul(&ctx.from_f64(48.0), &ln6)),
        &ctx.from_f64(125.0),
    );
    let holds = matches!(
        ctx.cmp(&left_hp, &middle_hp),
        Some(std::cmp::Ordering::Greater)
    ) && matches!(
        ctx.cmp(&middle_hp, &right_hp),
        Some(std::cmp::Ordering::Greater)
    );

    let gamma_value = ctx.to_f64(&g34);
    let lanczos_agreement = (gamma::gamma_three_quarters() - gamma_value).abs();

    let p34 = PositivePair::new(3.0, 4.0)?;
    let tol = Tolerance::default();
    let s_g = s_mean(&MeanFunction::from_kind(MeanKind::G), &p34, tol)?;
    let s_h = s_mean(&MeanFunction::from_kind(MeanKind::H), &p34, tol)?;
    let a34 = p34.arithmetic();
    let mean_route_holds = a34 > s_g && s_g > s_h;

    Ok(GammaSandwichCheck {
        left: ctx.to_f64(&left_hp),
        middle: ctx.to_f64(&middle_hp),
        right: ctx.to_f64(&right_hp),
        holds,
        gamma_value,
        lanczos_agreement,
        mean_route: [a34, s_g, s_h],
        mean_route_holds,
        precision_digits: prec.decimal_digits,
    })
}

/// Evaluates a registered expression at `prec` digits and renders the full
/// decimal expansion.
pub fn high_precision_eval(
    expr: &ExprId,
    p: &PositivePair,
    prec: PrecisionConfig,
) -> Result<String> {
    let mut ctx = HpCtx::new(prec)?;
    let a = ctx.from_f64(p.a());
    let b = ctx.from_f64(p.b());
    let v = expr.eval_hp(&mut ctx, &a, &b)?;
    Ok(ctx.to_decimal_string(&v))
}
