//! Adaptive quadrature over a symmetric truncated domain.
//!
//! Two independent embedded rule pairs are available so that a result can be
//! cross-checked against a second scheme that shares no nodes with the first.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Embedded rule pair used by the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rule {
    /// 15-point Gauss–Kronrod with the embedded 7-point Gauss rule.
    #[default]
    GaussKronrod15,
    /// 20-point Gauss–Legendre checked against 10-point Gauss–Legendre.
    GaussLegendre10x20,
}

/// Settings for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    /// Integrals over the real line are truncated to `[-h, h]`.
    pub truncation_halfwidth: T,
    pub rel_tol: T,
    pub abs_tol: T,
    /// Maximum number of subintervals the adaptive scheme may create.
    pub max_subdivisions: usize,
    pub rule: Rule,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            truncation_halfwidth: T::lit(6.0),
            rel_tol: T::lit(1e-12),
            abs_tol: T::lit(1e-14),
            max_subdivisions: 60,
            rule: Rule::GaussKronrod15,
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(
        truncation_halfwidth: T,
        rel_tol: T,
        abs_tol: T,
        max_subdivisions: usize,
    ) -> Result<Self> {
        let spec = Self {
            truncation_halfwidth,
            rel_tol,
            abs_tol,
            max_subdivisions,
            rule: Rule::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: T| v.is_finite() && v > T::zero();
        if !positive(self.truncation_halfwidth) {
            return Err(Error::InvalidParams(
                "truncation_halfwidth must be positive".into(),
            ));
        }
        if !positive(self.rel_tol) || !positive(self.abs_tol) {
            return Err(Error::InvalidParams("tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParams("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }
}

const GK15_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const GK15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    let two = T::lit(2.0);
    let nt = T::count(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess for the i-th root.
        let mut x = (T::PI() * (T::count(i) + T::lit(0.75)) / (nt + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = two / ((T::one() - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kt = T::count(k);
        let p2 = ((T::lit(2.0) * kt - T::one()) * x * p1 - (kt - T::one()) * p0) / kt;
        p0 = p1;
        p1 = p2;
    }
    let nt = T::count(n);
    let d = nt * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

enum Nodes<T> {
    Kronrod {
        nodes: [T; 8],
        kronrod: [T; 8],
        gauss: [T; 4],
    },
    Legendre {
        coarse: Vec<(T, T)>,
        fine: Vec<(T, T)>,
    },
}

impl<T: Real> Nodes<T> {
    fn new(rule: Rule) -> Self {
        match rule {
            Rule::GaussKronrod15 => Nodes::Kronrod {
                nodes: GK15_NODES.map(T::lit),
                kronrod: GK15_WEIGHTS.map(T::lit),
                gauss: G7_WEIGHTS.map(T::lit),
            },
            Rule::GaussLegendre10x20 => Nodes::Legendre {
                coarse: gauss_legendre(10),
                fine: gauss_legendre(20),
            },
        }
    }

    /// Returns (estimate, error estimate) on `[a, b]`.
    fn apply<F: Fn(T) -> T>(&self, f: &F, a: T, b: T) -> (T, T) {
        let half = T::lit(0.5);
        let center = half * (a + b);
        let radius = half * (b - a);
        match self {
            Nodes::Kronrod {
                nodes,
                kronrod,
                gauss,
            } => {
                let fc = f(center);
                let mut k = kronrod[7] * fc;
                let mut g = gauss[3] * fc;
                for j in 0..7 {
                    let dx = radius * nodes[j];
                    let pair = f(center - dx) + f(center + dx);
                    k = k + kronrod[j] * pair;
                    if j % 2 == 1 {
                        g = g + gauss[j / 2] * pair;
                    }
                }
                (k * radius, ((k - g) * radius).abs())
            }
            Nodes::Legendre { coarse, fine } => {
                let sum = |rule: &[(T, T)]| {
                    rule.iter()
                        .map(|&(x, w)| w * f(center + radius * x))
                        .fold(T::zero(), |acc, v| acc + v)
                        * radius
                };
                let hi = sum(fine);
                let lo = sum(coarse);
                (hi, (hi - lo).abs())
            }
        }
    }
}

/// Integrates `f` over `[-h, h]` with `h = spec.truncation_halfwidth`.
///
/// Globally adaptive: the subinterval with the largest error estimate is
/// bisected until the summed estimate meets `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, spec: &QuadratureSpec<T>) -> Result<T> {
    let h = spec.truncation_halfwidth;
    integrate_interval(f, -h, h, spec)
}

/// Integrates `f` over `[a, b]` with the adaptive scheme of [`integrate`].
pub fn integrate_interval<T: Real, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    spec.validate()?;
    if a == b {
        return Ok(T::zero());
    }
    let rules = Nodes::new(spec.rule);
    let (v, e) = rules.apply(&f, a, b);
    // (a, b, value, error)
    let mut segments = vec![(a, b, v, e)];
    loop {
        let total: T = segments.iter().map(|s| s.2).sum();
        let err: T = segments.iter().map(|s| s.3).sum();
        if !total.is_finite() {
            return Err(Error::InvalidParams("integrand is not finite".into()));
        }
        if err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(total);
        }
        if segments.len() >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                max_subdivisions: spec.max_subdivisions,
                estimate: err.to_f64().unwrap_or(f64::NAN),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| {
                x.1 .3
                    .partial_cmp(&y.1 .3)
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = segments.swap_remove(worst);
        let mid = T::lit(0.5) * (lo + hi);
        let (v1, e1) = rules.apply(&f, lo, mid);
        let (v2, e2) = rules.apply(&f, mid, hi);
        segments.push((lo, mid, v1, e1));
        segments.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn gaussian_integral() {
        let spec = QuadratureSpec::<f64>::default();
        let v = integrate(|x: f64| (-x * x).exp(), &spec).unwrap();
        assert_abs_diff_eq!(v, std::f64::consts::PI.sqrt(), epsilon = 1e-12);
        let v2 = integrate(
            |x: f64| (-x * x).exp(),
            &spec.with_rule(Rule::GaussLegendre10x20),
        )
        .unwrap();
        assert_abs_diff_eq!(v2, std::f64::consts::PI.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let spec = QuadratureSpec::<f64>::default();
        let v = integrate(|x: f64| x * (-x * x).exp(), &spec).unwrap();
        assert!(v.abs() <= spec.abs_tol, "{v}");
    }

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let rule = gauss_legendre::<f64>(10);
        let total: f64 = rule.iter().map(|p| p.1).sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-14);
        // degree 18 is within the 2n-1 exactness range
        let m: f64 = rule.iter().map(|&(x, w)| w * x.powi(18)).sum();
        assert_abs_diff_eq!(m, 2.0 / 19.0, epsilon = 1e-14);
    }

    #[test]
    fn exhausting_subdivisions_is_reported() {
        let spec = QuadratureSpec::<f64>::new(6.0, 1e-14, 1e-300, 3).unwrap();
        let err = integrate(|x: f64| (50.0 * x).sin().abs(), &spec).unwrap_err();
        assert!(matches!(
            err,
            Error::NonConvergence {
                max_subdivisions: 3,
                ..
            }
        ));
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(QuadratureSpec::<f64>::new(0.0, 1e-12, 1e-14, 60).is_err());
        assert!(QuadratureSpec::<f64>::new(6.0, -1.0, 1e-14, 60).is_err());
        assert!(QuadratureSpec::<f64>::new(6.0, 1e-12, 1e-14, 0).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let spec = QuadratureSpec::<f32>::new(6.0, 1e-5, 1e-7, 60).unwrap();
        let v = integrate(|x: f32| (-x * x).exp(), &spec).unwrap();
        assert!((v - std::f32::consts::PI.sqrt()).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn linearity(a in -3.0..3.0f64, b in -3.0..3.0f64, s in 0.3..2.0f64, c in -1.0..1.0f64) {
            let spec = QuadratureSpec::<f64>::default();
            let f = move |x: f64| (-s * x * x).exp();
            let g = move |x: f64| (c * x).cos() / (1.0 + x * x);
            let lhs = integrate(|x| a * f(x) + b * g(x), &spec).unwrap();
            let rhs = a * integrate(f, &spec).unwrap() + b * integrate(g, &spec).unwrap();
            // Tolerance scales with the magnitude of the integrals.
            let scale = 1.0 + lhs.abs();
            prop_assert!((lhs - rhs).abs() <= 10.0 * spec.abs_tol + 1e-11 * scale);
        }

        #[test]
        fn odd_moment_of_even_function(s in 0.2..3.0f64, c in 0.0..2.0f64) {
            let spec = QuadratureSpec::<f64>::default();
            let v = integrate(|x: f64| x * (-s * x * x).exp() * (1.0 + c * x * x), &spec).unwrap();
            prop_assert!(v.abs() <= spec.abs_tol);
        }
    }
}
