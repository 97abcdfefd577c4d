//! Closed-form bounds on the distance to random and the inequalities behind them.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::group::{Group, SupportSet};
use crate::measure::Measure;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleBounds {
    /// e^{−π²k/2n²}, defined for k ≥ n²/40.
    pub upper: Option<f64>,
    /// ½ e^{−π²k/2n² − π⁴k/2n⁴}, defined for n ≥ 7.
    pub lower: Option<f64>,
}

/// Bounds for the simple walk on Z_n, n odd.
pub fn circle_bounds(n: usize, k: usize) -> Result<CircleBounds> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "circle bounds need odd n ≥ 3, got {n}"
        )));
    }
    let (nf, kf) = (n as f64, k as f64);
    let a = PI * PI * kf / (2.0 * nf * nf);
    let upper = (kf >= nf * nf / 40.0).then(|| (-a).exp());
    let lower = (n >= 7).then(|| 0.5 * (-a - PI.powi(4) * kf / (2.0 * nf.powi(4))).exp());
    Ok(CircleBounds { upper, lower })
}

/// First integer k at which the circle upper bound is valid, ⌈n²/40⌉.
pub fn circle_upper_start(n: usize) -> usize {
    (n * n).div_ceil(40)
}

/// Hypothesis time k = (n+1)(log n + c)/4 and the bound ½(e^{e^{−c}} − 1) on the squared distance.
pub fn cube_upper(n: usize, c: f64) -> Result<(f64, f64)> {
    if c <= 0.0 || c.is_nan() {
        return Err(Error::InvalidArgument(format!("c must be positive, got {c}")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let k = (n as f64 + 1.0) * ((n as f64).ln() + c) / 4.0;
    Ok((k, 0.5 * ((-c).exp().exp() - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeLower {
    /// k = (n+1)(log n − c)/4.
    pub k: f64,
    /// 1 − 20/e^c.
    pub bound: f64,
    /// Only proved for n large enough; never compare pointwise.
    pub asymptotic: bool,
}

pub fn cube_lower(n: usize, c: f64) -> Result<CubeLower> {
    if c <= 0.0 || c.is_nan() || n == 0 {
        return Err(Error::InvalidArgument(format!("need n ≥ 1 and c > 0, got ({n}, {c})")));
    }
    Ok(CubeLower {
        k: (n as f64 + 1.0) * ((n as f64).ln() - c) / 4.0,
        bound: 1.0 - 20.0 * (-c).exp(),
        asymptotic: true,
    })
}

/// Word-metric growth of a generating set.
///
/// `volumes[k]` is the number of elements reachable in at most k steps,
/// i.e. |(Σ ∪ {e})^k|, so `volumes[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    pub volumes: Vec<usize>,
    pub diameter: usize,
    /// L = min{ν(s) : s ∈ Σ}.
    pub min_weight: f64,
}

impl GrowthProfile {
    pub fn volume(&self, k: usize) -> usize {
        self.volumes[k.min(self.diameter)]
    }
}

pub fn growth_profile(g: &Group, sigma: &SupportSet, nu: &Measure) -> Result<GrowthProfile> {
    if sigma.is_empty() {
        return Err(Error::InvalidArgument("empty generating set".into()));
    }
    let depth = g.cayley_depths(sigma);
    if depth.iter().any(Option::is_none) {
        return Err(Error::InvalidArgument(format!(
            "support does not generate {}",
            g.descriptor()
        )));
    }
    let diameter = depth.iter().map(|d| d.unwrap()).max().unwrap();
    let mut counts = vec![0usize; diameter + 1];
    for d in depth.iter().flatten() {
        counts[*d] += 1;
    }
    let volumes = counts
        .iter()
        .scan(0, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    let min_weight = sigma
        .elements()
        .iter()
        .map(|&s| nu.weights()[s])
        .fold(f64::INFINITY, f64::min);
    Ok(GrowthProfile {
        volumes,
        diameter,
        min_weight,
    })
}

/// V(k)/V(Δ) ≥ (1/A)(k/Δ)^d for every 1 ≤ k ≤ Δ.
pub fn moderate_growth_certificate(profile: &GrowthProfile, a: f64, d: f64) -> bool {
    let delta = profile.diameter as f64;
    let full = profile.volumes[profile.diameter] as f64;
    (1..=profile.diameter).all(|k| {
        profile.volumes[k] as f64 / full >= (k as f64 / delta).powf(d) / a
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModerateGrowthBounds {
    pub upper_k: f64,
    pub upper: f64,
    pub lower_k: f64,
    pub lower: f64,
}

/// B = 2^{d(d+3)/4} √A.
pub fn moderate_growth_constant(a: f64, d: f64) -> f64 {
    2f64.powf(d * (d + 3.0) / 4.0) * a.sqrt()
}

pub fn moderate_growth_bounds(a: f64, d: f64, delta: usize, l: f64, c: f64) -> Result<ModerateGrowthBounds> {
    if a <= 0.0 || d <= 0.0 || delta == 0 || l <= 0.0 || c <= 0.0 {
        return Err(Error::InvalidArgument("all parameters must be positive".into()));
    }
    let dd = (delta * delta) as f64;
    Ok(ModerateGrowthBounds {
        upper_k: (1.0 + c) * dd / l,
        upper: moderate_growth_constant(a, d) * (-c).exp(),
        lower_k: c * dd / (2f64.powf(4.0 * d + 2.0) * a * a),
        lower: 0.5 * (-c).exp(),
    })
}

/// λ₂ ≤ 1 − L/Δ².
pub fn diameter_eigenvalue_bound(delta: usize, l: f64) -> Result<f64> {
    if delta == 0 || !(l > 0.0 && l <= 1.0) {
        return Err(Error::InvalidArgument(format!("need Δ ≥ 1 and L in (0,1], got ({delta}, {l})")));
    }
    Ok(1.0 - l / (delta * delta) as f64)
}

/// k = n log n + cn and the tail bound e^{−c} on the collection time.
pub fn coupon_collector_bound(n: usize, c: f64) -> Result<(f64, f64)> {
    if n == 0 || c < 0.0 || c.is_nan() {
        return Err(Error::InvalidArgument(format!("need n ≥ 1 and c ≥ 0, got ({n}, {c})")));
    }
    let nf = n as f64;
    Ok((nf * nf.ln() + c * nf, (-c).exp()))
}

/// Bound (1 − |G|L)^k on s(k·n₀), where L = min ν^{⋆n₀}.
pub fn separation_decay_bound(group_order: usize, n0: usize, l: f64, k: usize) -> Result<f64> {
    if l <= 0.0 || n0 == 0 {
        return Err(Error::InvalidArgument(format!(
            "need n₀ ≥ 1 and L > 0, got ({n0}, {l})"
        )));
    }
    let base = 1.0 - group_order as f64 * l;
    if base < -1e-12 {
        return Err(Error::InvalidArgument("L exceeds 1/|G|".into()));
    }
    Ok(base.max(0.0).powi(k as i32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub cases: usize,
    /// Smallest value of (right side − left side) in the direction of the claim.
    pub worst_slack: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as f64
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|x| x as f64).product()
}

const SLACK: f64 = -1e-12;
const GRID: usize = 10_000;

fn check(name: &'static str, tolerance: f64, slacks: impl Iterator<Item = f64>) -> InequalityCheck {
    let (cases, worst) = slacks.fold((0usize, f64::INFINITY), |(n, w), s| (n + 1, w.min(s)));
    InequalityCheck {
        name,
        cases,
        worst_slack: worst,
        tolerance,
        passed: worst >= tolerance,
    }
}

fn grid(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..=GRID).map(move |i| lo + (hi - lo) * i as f64 / GRID as f64)
}

/// The seven inequalities behind the circle and cube bounds, each checked on a
/// dense grid or an exhaustive integer range.
pub fn appendix_inequality_suite() -> Vec<InequalityCheck> {
    let odd_n = || (3..=25usize).step_by(2);
    let mut out = Vec::new();

    // Σ_{t=1}^{n−1} cos^{2k}(2πt/n) = 2 Σ_{t=1}^{(n−1)/2} cos^{2k}(πt/n), n odd
    out.push(check(
        "circle cosine folding identity",
        SLACK,
        odd_n().flat_map(|n| {
            (0..=50i32).map(move |k| {
                let nf = n as f64;
                let lhs: f64 = (1..n).map(|t| (2.0 * PI * t as f64 / nf).cos().powi(2 * k)).sum();
                let rhs: f64 = 2.0
                    * (1..=(n - 1) / 2)
                        .map(|t| (PI * t as f64 / nf).cos().powi(2 * k))
                        .sum::<f64>();
                -(lhs - rhs).abs()
            })
        }),
    ));

    out.push(check(
        "cos x <= exp(-x^2/2) on [0, pi/2]",
        SLACK,
        grid(0.0, PI / 2.0).map(|x| (-x * x / 2.0).exp() - x.cos()),
    ));

    // geometric domination, both series summed until terms fall below 1e-15
    out.push(check(
        "sum exp(-(j^2-1)x) <= sum exp(-3jx)",
        SLACK,
        grid(1e-3, 5.0).map(|x| {
            let mut lhs = 0.0;
            for j in 1.. {
                let term = (-((j * j - 1) as f64) * x).exp();
                lhs += term;
                if term < 1e-15 {
                    break;
                }
            }
            let rhs = 1.0 / (1.0 - (-3.0 * x).exp());
            rhs - lhs
        }),
    ));

    out.push(check(
        "cos x >= exp(-x^2/2 - x^4/2) on [0, pi/6]",
        SLACK,
        grid(0.0, PI / 6.0).map(|x| x.cos() - (-x * x / 2.0 - x.powi(4) / 2.0).exp()),
    ));

    // C(n,l)(1−2l/(n+1))^{2k} ≥ C(n,n+1−l)(1−2(n+1−l)/(n+1))^{2k}, 1 ≤ l ≤ n/2
    out.push(check(
        "cube binomial term domination",
        SLACK,
        (1..=25u64).flat_map(|n| {
            (1..=n / 2).flat_map(move |l| {
                (0..=50i32).map(move |k| {
                    let nf = n as f64 + 1.0;
                    let a = binomial(n, l) * (1.0 - 2.0 * l as f64 / nf).powi(2 * k);
                    let b = binomial(n, n + 1 - l)
                        * (1.0 - 2.0 * (n + 1 - l) as f64 / nf).powi(2 * k);
                    (a - b) / a.max(1.0)
                })
            })
        }),
    ));

    // C(a,b) ≤ a^b/b! whenever b ≤ a
    out.push(check(
        "binomial(a,b) <= a^b/b!",
        SLACK,
        (1..=25u64).flat_map(|a| {
            (0..=a).map(move |b| {
                let rhs = (a as f64).powi(b as i32) / factorial(b);
                (rhs - binomial(a, b)) / rhs
            })
        }),
    ));

    // (1−2j/(n+1))^{2k} ≤ e^{−j log n − jc} at k = (n+1)(log n + c)/4, 1 ≤ j ≤ n/2
    out.push(check(
        "(1-2j/(n+1))^(2k) <= exp(-j log n - jc)",
        SLACK,
        (2..=25usize).flat_map(|n| {
            (1..=16).flat_map(move |ci| {
                let c = ci as f64 / 4.0;
                (1..=n / 2).map(move |j| {
                    let nf = n as f64;
                    let k = (nf + 1.0) * (nf.ln() + c) / 4.0;
                    let lhs = (1.0 - 2.0 * j as f64 / (nf + 1.0)).powf(2.0 * k);
                    let rhs = (-(j as f64) * (nf.ln() + c)).exp();
                    rhs - lhs
                })
            })
        }),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::walks::WalkSpec;

    #[test]
    fn circle_formula_values() {
        let b = circle_bounds(11, 4).unwrap();
        assert!((b.upper.unwrap() - (-PI * PI * 4.0 / 242.0).exp()).abs() < 1e-15);
        assert!((b.upper.unwrap() - 0.8495).abs() < 1e-4);
        assert!(circle_bounds(11, 3).unwrap().upper.is_none());
        let b = circle_bounds(11, 10).unwrap();
        let want = 0.5 * (-PI * PI * 10.0 / 242.0 - PI.powi(4) * 10.0 / 29282.0).exp();
        assert!((b.lower.unwrap() - want).abs() < 1e-15);
        assert_eq!(circle_bounds(7, 0).unwrap().lower, Some(0.5));
        assert!(circle_bounds(5, 0).unwrap().lower.is_none());
        assert!(circle_bounds(8, 1).is_err());
        assert_eq!(circle_upper_start(11), 4);
    }

    #[test]
    fn cube_upper_values() {
        let (k, b) = cube_upper(6, 1.0).unwrap();
        assert!((k - 7.0 * (6f64.ln() + 1.0) / 4.0).abs() < 1e-15);
        assert!((b - 0.22234).abs() < 1e-5);
        assert!(cube_upper(6, 0.0).is_err());
        assert!(cube_upper(6, 60.0).unwrap().1 < 1e-25);
    }

    #[test]
    fn circle_growth() {
        let g = Group::parse("cyclic:9").unwrap();
        let nu = Measure::from_pairs(Arc::new(g.clone()), &[(1, 0.5), (8, 0.5)]).unwrap();
        let p = growth_profile(&g, &nu.support(), &nu).unwrap();
        assert_eq!(p.diameter, 4);
        assert_eq!(p.volumes, [1, 3, 5, 7, 9]);
        assert_eq!(p.min_weight, 0.5);
        assert!(moderate_growth_certificate(&p, 4.0, 1.0));
        assert!(moderate_growth_certificate(&p, f64::MAX, 7.0));
        let l = diameter_eigenvalue_bound(p.diameter, p.min_weight).unwrap();
        assert!((l - (1.0 - 1.0 / 32.0)).abs() < 1e-15);
    }

    #[test]
    fn heisenberg_growth() {
        let spec: WalkSpec = "heisenberg-gen:5".parse().unwrap();
        let (g, nu) = spec.build().unwrap();
        let p = growth_profile(&g, &nu.support(), &nu).unwrap();
        assert!((4..=6).contains(&p.diameter));
        for k in 1..=6 {
            assert!(p.volume(k) as f64 >= (k as f64).powi(3) / 6.0);
        }
        assert!(moderate_growth_certificate(&p, 48.0, 3.0));
    }

    #[test]
    fn moderate_growth_formulae() {
        assert!((moderate_growth_constant(48.0, 3.0) - 156.77).abs() < 0.01);
        let b = moderate_growth_bounds(48.0, 3.0, 4, 0.2, 1.0).unwrap();
        assert!((b.lower - 0.5 / std::f64::consts::E).abs() < 1e-15);
        assert!((b.upper_k - 160.0).abs() < 1e-12);
    }

    #[test]
    fn coupon_values() {
        assert_eq!(coupon_collector_bound(10, 0.0).unwrap().1, 1.0);
        let (k, b) = coupon_collector_bound(52, 2.0).unwrap();
        assert!((k - 309.46).abs() < 0.01);
        assert!((b - 0.1353).abs() < 1e-4);
    }

    #[test]
    fn separation_decay_values() {
        assert_eq!(separation_decay_bound(5, 4, 1.0 / 16.0, 0).unwrap(), 1.0);
        let b = separation_decay_bound(5, 4, 1.0 / 16.0, 2).unwrap();
        assert!((b - (11.0f64 / 16.0).powi(2)).abs() < 1e-15);
        assert!(separation_decay_bound(5, 4, 0.0, 2).is_err());
    }

    #[test]
    fn appendix_suite_passes() {
        let suite = appendix_inequality_suite();
        assert_eq!(suite.len(), 7);
        for c in &suite {
            assert!(c.passed, "{c:?}");
            assert!(c.cases > 0);
        }
    }

    #[test]
    fn cosine_identity_at_small_case() {
        let lhs: f64 = (1..5).map(|t| (2.0 * PI * t as f64 / 5.0).cos().powi(4)).sum();
        let rhs: f64 = 2.0 * (1..=2).map(|t| (PI * t as f64 / 5.0).cos().powi(4)).sum::<f64>();
        assert!((lhs - rhs).abs() < 1e-14);
        // binomial at a = b: 1 ≤ a^a/a!
        for a in 1..10u64 {
            assert!(1.0 <= (a as f64).powi(a as i32) / factorial(a));
        }
    }
}
