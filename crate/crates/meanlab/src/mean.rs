use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pair::{PairSampler, PositivePair, Tolerance};

/// Strictness margin used by every chain/ordering check in the crate:
/// `lhs > rhs` counts as strict only when `lhs - rhs > 1e-12·max(1, |lhs|)`.
pub const STRICT_MARGIN_REL: f64 = 1e-12;

pub fn strictly_greater(lhs: f64, rhs: f64) -> bool {
    lhs - rhs > STRICT_MARGIN_REL * lhs.abs().max(1.0)
}

/// Tags for the built-in bivariate means.
///
/// `Min`/`Max` are admitted as degenerate means (they satisfy all mean
/// axioms with equality at the envelope). `ComplementA` is the reflection
/// `2A − M` about the arithmetic mean, and `Convex` is the pointwise convex
/// combination `λM₁ + (1−λ)M₂`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum MeanKind {
    Min,
    Max,
    /// Arithmetic mean (a+b)/2.
    A,
    /// Geometric mean √(ab).
    G,
    /// Harmonic mean 2ab/(a+b).
    H,
    /// Contraharmonic mean (a²+b²)/(a+b).
    C,
    /// Root square (quadratic) mean √((a²+b²)/2).
    R,
    /// Centroidal (gravitational) mean 2(a²+ab+b²)/(3(a+b)).
    Grav,
    /// Heronian mean (a+√(ab)+b)/3.
    Hn,
    /// The midpoint (A+G)/2.
    AGHalf,
    ComplementA(Box<MeanKind>),
    Convex {
        lambda: f64,
        m1: Box<MeanKind>,
        m2: Box<MeanKind>,
    },
}

impl MeanKind {
    /// The eight classical kinds of the ordered chain, plus min/max.
    pub fn classical() -> [MeanKind; 8] {
        use MeanKind::*;
        [C, R, Grav, A, Hn, G, H, AGHalf]
    }

    pub fn all_basic() -> [MeanKind; 10] {
        use MeanKind::*;
        [Min, Max, A, G, H, C, R, Grav, Hn, AGHalf]
    }

    /// Builds a validated convex combination; `lambda` must lie in [0,1] and
    /// the result must pass the sampled mean-function check.
    pub fn convex(lambda: f64, m1: MeanKind, m2: MeanKind) -> Result<MeanKind> {
        if !(0.0..=1.0).contains(&lambda) || !lambda.is_finite() {
            return Err(Error::NotAMean(format!(
                "convex weight {lambda} outside [0,1]"
            )));
        }
        let kind = MeanKind::Convex {
            lambda,
            m1: Box::new(m1),
            m2: Box::new(m2),
        };
        let f = MeanFunction::from_kind(kind.clone());
        let check = is_mean_function(&f, (1e-3, 1e3), 10_000, 0xC0FFEE, Tolerance::default());
        match check.first_violation {
            None => Ok(kind),
            Some(v) => Err(Error::NotAMean(format!("{}: {v}", f.name()))),
        }
    }

    /// Every built-in kind is homogeneous of order one (convex combinations
    /// and complements of homogeneous means stay homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        true
    }

    pub fn name(&self) -> String {
        use MeanKind::*;
        match self {
            Min => "min".into(),
            Max => "max".into(),
            A => "A".into(),
            G => "G".into(),
            H => "H".into(),
            C => "C".into(),
            R => "r".into(),
            Grav => "g".into(),
            Hn => "Hn".into(),
            AGHalf => "AGhalf".into(),
            ComplementA(inner) => format!("compA({})", inner.name()),
            Convex { lambda, m1, m2 } => {
                format!("convex({},{},{})", lambda, m1.name(), m2.name())
            }
        }
    }

    /// Parses the plain kind names used by the CLI; composite kinds are not
    /// parsed from strings.
    pub fn parse(s: &str) -> Option<MeanKind> {
        use MeanKind::*;
        match s {
            "min" | "Min" => Some(Min),
            "max" | "Max" => Some(Max),
            "A" | "a" => Some(A),
            "G" => Some(G),
            "H" => Some(H),
            "C" => Some(C),
            "r" | "R" => Some(R),
            "g" | "Grav" | "grav" => Some(Grav),
            "Hn" | "hn" => Some(Hn),
            "AGhalf" | "aghalf" | "AGHalf" => Some(AGHalf),
            _ => None,
        }
    }

    /// Evaluates the mean at positive arguments. Inputs are normalized by
    /// max(x,y) first so no intermediate square or sum can overflow.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        use MeanKind::*;
        match self {
            Min => x.min(y),
            Max => x.max(y),
            ComplementA(inner) => x + y - inner.eval(x, y),
            Convex { lambda, m1, m2 } => lambda * m1.eval(x, y) + (1.0 - lambda) * m2.eval(x, y),
            _ => {
                let m = x.max(y);
                let u = x / m;
                let v = y / m;
                let core = match self {
                    A => 0.5 * (u + v),
                    G => (u * v).sqrt(),
                    H => 2.0 * u * v / (u + v),
                    C => (u * u + v * v) / (u + v),
                    R => ((u * u + v * v) * 0.5).sqrt(),
                    Grav => {
                        let s = u + v;
                        2.0 * (s * s - u * v) / (3.0 * s)
                    }
                    Hn => ((u + v) + (u * v).sqrt()) / 3.0,
                    AGHalf => 0.5 * (0.5 * (u + v) + (u * v).sqrt()),
                    _ => unreachable!(),
                };
                m * core
            }
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

type MeanClosure = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum MeanImpl {
    Kind(MeanKind),
    Callable(MeanClosure),
}

/// A mean as a first-class value: either a built-in kind or an opaque
/// callable, together with the metadata the rest of the crate keys on.
#[derive(Clone)]
pub struct MeanFunction {
    name: String,
    imp: MeanImpl,
    homogeneous1: Option<bool>,
    has_closed_integral_mean: bool,
}

impl MeanFunction {
    pub fn from_kind(kind: MeanKind) -> Self {
        let has_closed = crate::integral::IntegralMeanKind::from_mean_kind(&kind).is_some()
            || matches!(kind, MeanKind::Min | MeanKind::Max)
            || matches!(kind, MeanKind::ComplementA(_) | MeanKind::Convex { .. });
        Self {
            name: kind.name(),
            homogeneous1: Some(kind.is_homogeneous()),
            has_closed_integral_mean: has_closed,
            imp: MeanImpl::Kind(kind),
        }
    }

    /// Wraps an opaque callable; `homogeneous1: None` means "unknown, decide
    /// by sampling".
    pub fn from_fn<F>(name: &str, homogeneous1: Option<bool>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            imp: MeanImpl::Callable(Arc::new(f)),
            homogeneous1,
            has_closed_integral_mean: false,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> Option<&MeanKind> {
        match &self.imp {
            MeanImpl::Kind(k) => Some(k),
            MeanImpl::Callable(_) => None,
        }
    }

    pub fn homogeneous1(&self) -> Option<bool> {
        self.homogeneous1
    }

    pub fn has_closed_integral_mean(&self) -> bool {
        self.has_closed_integral_mean
    }

    /// Raw evaluation at positive arguments (used by the transforms, whose
    /// shifted/scaled arguments are not a `PositivePair`).
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match &self.imp {
            MeanImpl::Kind(k) => k.eval(x, y),
            MeanImpl::Callable(f) => f(x, y),
        }
    }

    pub fn eval_checked(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::Domain(format!(
                "{} evaluated at ({x}, {y})",
                self.name
            )));
        }
        Ok(self.eval(x, y))
    }

    pub fn eval_pair(&self, p: &PositivePair) -> f64 {
        self.eval(p.a(), p.b())
    }
}

// MeanImpl holds a closure, so derive(Debug) is unavailable.
impl fmt::Debug for MeanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeanFunction")
            .field("name", &self.name)
            .field("homogeneous1", &self.homogeneous1)
            .field("has_closed_integral_mean", &self.has_closed_integral_mean)
            .finish()
    }
}

pub fn eval_mean(kind: &MeanKind, p: &PositivePair) -> f64 {
    kind.eval(p.a(), p.b())
}

/// The arithmetic complement 2A − M evaluated at a pair.
pub fn complement_a_value(m: &MeanFunction, p: &PositivePair) -> f64 {
    p.a() + p.b() - m.eval_pair(p)
}

/// The classical ordered chain max > C > r > g > A > Hn > G > H > min,
/// returned as (name, value) in descending order.
pub fn classical_chain(p: &PositivePair) -> [(&'static str, f64); 9] {
    use MeanKind::*;
    [
        ("max", Max.eval(p.a(), p.b())),
        ("C", C.eval(p.a(), p.b())),
        ("r", R.eval(p.a(), p.b())),
        ("g", Grav.eval(p.a(), p.b())),
        ("A", A.eval(p.a(), p.b())),
        ("Hn", Hn.eval(p.a(), p.b())),
        ("G", G.eval(p.a(), p.b())),
        ("H", H.eval(p.a(), p.b())),
        ("min", Min.eval(p.a(), p.b())),
    ]
}

/// The first axiom violation found while sampling, with a witness.
#[derive(Clone, Debug, Serialize)]
pub enum MeanViolation {
    NonFinite {
        x: f64,
        y: f64,
        value: f64,
    },
    Symmetry {
        x: f64,
        y: f64,
        f_xy: f64,
        f_yx: f64,
    },
    Betweenness {
        x: f64,
        y: f64,
        value: f64,
    },
    Diagonal {
        x: f64,
        value: f64,
    },
}

impl fmt::Display for MeanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanViolation::NonFinite { x, y, value } => {
                write!(f, "non-finite or nonpositive value {value} at ({x}, {y})")
            }
            MeanViolation::Symmetry { x, y, f_xy, f_yx } => {
                write!(f, "asymmetric at ({x}, {y}): {f_xy} vs {f_yx}")
            }
            MeanViolation::Betweenness { x, y, value } => {
                write!(f, "value {value} outside [min, max] at ({x}, {y})")
            }
            MeanViolation::Diagonal { x, value } => {
                write!(f, "F({x}, {x}) = {value} differs from {x}")
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanCheck {
    pub is_mean: bool,
    pub samples_checked: u64,
    pub first_violation: Option<MeanViolation>,
}

/// Samples `n` seeded pairs in `region` and checks symmetry (within the
/// tolerance, relative to the value), betweenness, and the diagonal fixed
/// point. Reports the first violation found.
pub fn is_mean_function(
    f: &MeanFunction,
    region: (f64, f64),
    n: u64,
    seed: u64,
    tol: Tolerance,
) -> MeanCheck {
    let mut sampler = PairSampler::new(seed, region.0, region.1);
    let mut checked = 0u64;
    for _ in 0..n {
        let p = sampler.sample_pair();
        let (x, y) = (p.a(), p.b());
        checked += 1;

        let v = f.eval(x, y);
        if !v.is_finite() || v <= 0.0 {
            return MeanCheck {
                is_mean: false,
                samples_checked: checked,
                first_violation: Some(MeanViolation::NonFinite { x, y, value: v }),
            };
        }
        let w = f.eval(y, x);
        if (v - w).abs() > tol.bound(v) {
            return MeanCheck {
                is_mean: false,
                samples_checked: checked,
                first_violation: Some(MeanViolation::Symmetry {
                    x,
                    y,
                    f_xy: v,
                    f_yx: w,
                }),
            };
        }
        let lo = x.min(y);
        let hi = x.max(y);
        if v < lo - tol.bound(lo) || v > hi + tol.bound(hi) {
            return MeanCheck {
                is_mean: false,
                samples_checked: checked,
                first_violation: Some(MeanViolation::Betweenness { x, y, value: v }),
            };
        }
        let d = f.eval(x, x);
        if (d - x).abs() > tol.bound(x) {
            return MeanCheck {
                is_mean: false,
                samples_checked: checked,
                first_violation: Some(MeanViolation::Diagonal { x, value: d }),
            };
        }
    }
    MeanCheck {
        is_mean: true,
        samples_checked: checked,
        first_violation: None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomogeneityCheck {
    pub homogeneous: bool,
    pub sampled: bool,
    pub witness: Option<HomogeneityWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomogeneityWitness {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub scaled: f64,
    pub expected: f64,
}

/// Fixed probe triples tried before random sampling, so failures of common
/// non-homogeneous means are witnessed deterministically.
const HOMOGENEITY_PROBES: [(f64, f64, f64); 4] =
    [(1.0, 2.0, 10.0), (1.0, 2.0, 2.0), (0.5, 3.0, 7.0), (2.0, 9.0, 0.25)];

/// Order-one homogeneity: `F(zx, zy) = z·F(x, y)`. Built-in kinds are
/// homogeneous by construction and are reported without sampling; callables
/// are sampled on probe triples plus `n` seeded random triples.
pub fn is_homogeneous_order1(f: &MeanFunction, n: u64, seed: u64, tol: Tolerance) -> HomogeneityCheck {
    if f.kind().is_some() {
        return HomogeneityCheck {
            homogeneous: true,
            sampled: false,
            witness: None,
        };
    }
    if let Some(known) = f.homogeneous1() {
        if known {
            return HomogeneityCheck {
                homogeneous: true,
                sampled: false,
                witness: None,
            };
        }
    }
    let mut sampler = PairSampler::new(seed, 1e-2, 1e2);
    let mut triples: Vec<(f64, f64, f64)> = HOMOGENEITY_PROBES.to_vec();
    for _ in 0..n {
        triples.push((
            sampler.sample_value(),
            sampler.sample_value(),
            sampler.sample_value(),
        ));
    }
    for (x, y, z) in triples {
        let scaled = f.eval(z * x, z * y);
        let expected = z * f.eval(x, y);
        if (scaled - expected).abs() > tol.bound(expected) {
            return HomogeneityCheck {
                homogeneous: false,
                sampled: true,
                witness: Some(HomogeneityWitness {
                    x,
                    y,
                    z,
                    scaled,
                    expected,
                }),
            };
        }
    }
    HomogeneityCheck {
        homogeneous: true,
        sampled: true,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform;

    fn pair(a: f64, b: f64) -> PositivePair {
        PositivePair::new(a, b).unwrap()
    }

    #[test]
    fn classical_values() {
        assert_eq!(eval_mean(&MeanKind::A, &pair(3.0, 4.0)), 3.5);
        assert_eq!(eval_mean(&MeanKind::G, &pair(4.0, 9.0)), 6.0);
        assert_eq!(eval_mean(&MeanKind::C, &pair(1.0, 3.0)), 2.5);
        assert_eq!(eval_mean(&MeanKind::R, &pair(1.0, 7.0)), 5.0);
        let hn = eval_mean(&MeanKind::Hn, &pair(1.0, 4.0));
        assert!((hn - 7.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn complement_of_harmonic_is_contraharmonic() {
        let h = MeanFunction::from_kind(MeanKind::H);
        let p = pair(1.0, 3.0);
        let c = complement_a_value(&h, &p);
        assert_eq!(c, 2.5);
        assert_eq!(c, eval_mean(&MeanKind::C, &p));
    }

    #[test]
    fn complement_is_an_involution() {
        let p = pair(2.0, 8.0);
        let comp = MeanKind::ComplementA(Box::new(MeanKind::G));
        let twice = MeanKind::ComplementA(Box::new(comp));
        let direct = eval_mean(&MeanKind::G, &p);
        let round_trip = eval_mean(&twice, &p);
        assert!((round_trip - direct).abs() <= 4.0 * f64::EPSILON * direct);
        assert_eq!(round_trip, 4.0);
    }

    #[test]
    fn chain_is_strict_off_diagonal() {
        let chain = classical_chain(&pair(2.0, 5.0));
        for w in chain.windows(2) {
            assert!(
                strictly_greater(w[0].1, w[1].1),
                "{} = {} !> {} = {}",
                w[0].0,
                w[0].1,
                w[1].0,
                w[1].1
            );
        }
    }

    #[test]
    fn convex_construction_validates_lambda() {
        assert!(MeanKind::convex(0.5, MeanKind::A, MeanKind::G).is_ok());
        assert!(MeanKind::convex(1.5, MeanKind::A, MeanKind::G).is_err());
        assert!(MeanKind::convex(f64::NAN, MeanKind::A, MeanKind::G).is_err());
    }

    #[test]
    fn mean_check_accepts_classical_and_rejects_non_means() {
        let g = MeanFunction::from_kind(MeanKind::G);
        let check = is_mean_function(&g, (1e-3, 1e3), 1000, 7, Tolerance::default());
        assert!(check.is_mean);

        let not_sym = MeanFunction::from_fn("skew", None, |x, _y| x);
        let check = is_mean_function(&not_sym, (1e-3, 1e3), 1000, 7, Tolerance::default());
        assert!(!check.is_mean);
        assert!(matches!(
            check.first_violation,
            Some(MeanViolation::Symmetry { .. })
        ));

        let outside = MeanFunction::from_fn("big", None, |x, y| 2.0 * (x + y));
        let check = is_mean_function(&outside, (1e-3, 1e3), 1000, 7, Tolerance::default());
        assert!(matches!(
            check.first_violation,
            Some(MeanViolation::Betweenness { .. })
        ));

        let nan = MeanFunction::from_fn("nan", None, |_x, _y| f64::NAN);
        let check = is_mean_function(&nan, (1e-3, 1e3), 10, 7, Tolerance::default());
        assert!(matches!(
            check.first_violation,
            Some(MeanViolation::NonFinite { .. })
        ));
    }

    #[test]
    fn homogeneity_kind_based_and_sampled() {
        let r = MeanFunction::from_kind(MeanKind::R);
        let check = is_homogeneous_order1(&r, 100, 11, Tolerance::new(0.0, 1e-12).unwrap());
        assert!(check.homogeneous);
        assert!(!check.sampled);

        // N_0 is a mean but not homogeneous; the first probe triple (1,2,10)
        // witnesses it.
        let n0 = MeanFunction::from_fn("N0", Some(false), |x, y| {
            let pp = PositivePair::new(x, y).unwrap();
            transform::n_mean(0.0, &pp).unwrap()
        });
        let check = is_homogeneous_order1(&n0, 100, 11, Tolerance::new(0.0, 1e-12).unwrap());
        assert!(!check.homogeneous);
        let w = check.witness.unwrap();
        assert_eq!((w.x, w.y, w.z), (1.0, 2.0, 10.0));
    }

    #[test]
    fn symmetry_is_bitwise_for_kinds() {
        let mut sampler = PairSampler::new(3, 1e-3, 1e3);
        for _ in 0..10_000 {
            let p = sampler.sample_pair();
            for k in MeanKind::all_basic() {
                let v = k.eval(p.a(), p.b());
                let w = k.eval(p.b(), p.a());
                assert!(
                    v == w || (v - w).abs() <= f64::EPSILON * v,
                    "{}: {v} vs {w}",
                    k.name()
                );
            }
        }
    }
}
