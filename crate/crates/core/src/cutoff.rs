//! Exact distance curves, mixing times and cut-off statistics over walk families.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::group::GroupKind;
use crate::measure::{variation_to_uniform, Measure};
use crate::spectral::StochasticOperator;
use crate::walks::{WalkName, WalkSpec};

/// Largest group swept by iterated convolution.
pub const EXACT_LIMIT: usize = 20_000;
/// Largest cyclic group handled by the Fourier path.
pub const CIRCULANT_LIMIT: usize = 1 << 20;
/// Groups up to this order are also stepped with the dense operator as an oracle.
pub const ORACLE_LIMIT: usize = 2048;
/// Cyclic groups up to this order are cross-checked against direct convolution.
pub const CIRCULANT_ORACLE_LIMIT: usize = 51;
pub const ORACLE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceCurve {
    pub n: usize,
    /// ‖ν^{⋆k} − π‖ for k = 0..=K.
    pub values: Vec<f64>,
    /// Largest ℓ∞ gap seen between the two independent computations, if run.
    pub oracle_deviation: Option<f64>,
}

impl DistanceCurve {
    pub fn kmax(&self) -> usize {
        self.values.len() - 1
    }

    pub fn at(&self, k: usize) -> Option<f64> {
        self.values.get(k).copied()
    }

    pub fn is_nonincreasing(&self, slack: f64) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0] + slack)
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// ν^{⋆k} on Z_n for k = 0..=kmax via the discrete Fourier transform, handing
/// each power to `visit`.
pub fn circulant_powers(nu: &Measure, kmax: usize, mut visit: impl FnMut(usize, &[f64])) -> Result<()> {
    let n = match nu.group().kind() {
        GroupKind::Cyclic(n) => n,
        _ => return Err(Error::InvalidArgument("circulant path needs a cyclic group".into())),
    };
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut hat: Vec<Complex64> = nu.weights().iter().map(|&w| Complex64::new(w, 0.0)).collect();
    forward.process(&mut hat);
    let mut power = vec![Complex64::new(1.0, 0.0); n];
    let mut buf = vec![Complex64::default(); n];
    let mut real = vec![0.0; n];
    for k in 0..=kmax {
        buf.copy_from_slice(&power);
        inverse.process(&mut buf);
        for (r, z) in real.iter_mut().zip(&buf) {
            *r = z.re / n as f64;
        }
        visit(k, &real);
        for (p, h) in power.iter_mut().zip(&hat) {
            *p *= h;
        }
    }
    Ok(())
}

/// Exact curve of ‖ν^{⋆k} − π‖ for k = 0..=kmax, cross-checked by an independent method.
pub fn measure_curve(nu: &Measure, n: usize, kmax: usize) -> Result<DistanceCurve> {
    let g = nu.group().clone();
    let order = g.order();
    let report = g.is_ergodic(&nu.support());
    if !report.ergodic {
        return Err(Error::NotErgodic(format!("{:?}", report.witness)));
    }
    let mut values = Vec::with_capacity(kmax + 1);
    let mut deviation: Option<f64> = None;
    if let GroupKind::Cyclic(_) = g.kind() {
        if order > CIRCULANT_LIMIT {
            return Err(Error::Budget(format!("cyclic group of order {order}")));
        }
        let mut direct = (order <= CIRCULANT_ORACLE_LIMIT).then(|| nu.powers());
        circulant_powers(nu, kmax, |_, w| {
            values.push(variation_to_uniform_slice(w));
            if let Some(it) = direct.as_mut() {
                let d = max_abs_diff(w, it.next().unwrap().weights());
                deviation = Some(deviation.unwrap_or(0.0).max(d));
            }
        })?;
    } else {
        if order > EXACT_LIMIT {
            return Err(Error::Budget(format!(
                "{} has {order} elements (limit {EXACT_LIMIT})",
                g.descriptor()
            )));
        }
        let op = (order <= ORACLE_LIMIT)
            .then(|| StochasticOperator::from_measure(nu))
            .transpose()?;
        let mut row = op.as_ref().map(|_| {
            let mut v = vec![0.0; order];
            v[0] = 1.0;
            v
        });
        for m in nu.powers().take(kmax + 1) {
            values.push(variation_to_uniform(&m));
            if let (Some(op), Some(v)) = (op.as_ref(), row.as_mut()) {
                let d = max_abs_diff(v, m.weights());
                deviation = Some(deviation.unwrap_or(0.0).max(d));
                *v = op.apply_left(v);
            }
        }
    }
    if let Some(d) = deviation {
        if d > ORACLE_TOLERANCE {
            return Err(Error::Numeric(format!(
                "convolution and operator powers disagree by {d:e}"
            )));
        }
    }
    Ok(DistanceCurve {
        n,
        values,
        oracle_deviation: deviation,
    })
}

fn variation_to_uniform_slice(w: &[f64]) -> f64 {
    let u = 1.0 / w.len() as f64;
    0.5 * crate::measure::compensated_sum(w.iter().map(|a| (a - u).abs()))
}

pub fn distance_curve(walk: &WalkSpec, kmax: usize) -> Result<DistanceCurve> {
    let order = estimated_order(walk);
    let limit = match walk.group_kind() {
        GroupKind::Cyclic(_) => CIRCULANT_LIMIT,
        _ => EXACT_LIMIT,
    };
    if order > limit {
        return Err(Error::Budget(format!("{walk} needs {order} elements (limit {limit})")));
    }
    let (_, nu) = walk.build()?;
    measure_curve(&nu, walk.n, kmax)
}

fn estimated_order(walk: &WalkSpec) -> usize {
    let n = walk.n;
    match walk.group_kind() {
        GroupKind::Cyclic(_) => n,
        GroupKind::Cube(_) => 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
        GroupKind::Symmetric(_) => (1..=n).try_fold(1usize, |a, b| a.checked_mul(b)).unwrap_or(usize::MAX),
        GroupKind::Heisenberg(_) => n.saturating_pow(3),
        GroupKind::Dihedral4 | GroupKind::Quaternion => 8,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    /// (ε, τ(ε)); `None` when the curve never drops below ε.
    pub tau: Vec<(f64, Option<usize>)>,
    /// τ(1/2e).
    pub tau_default: Option<usize>,
}

impl MixingReport {
    pub fn unresolved(&self) -> Vec<f64> {
        self.tau
            .iter()
            .filter(|(_, t)| t.is_none())
            .map(|(e, _)| *e)
            .collect()
    }
}

pub const DEFAULT_EPSILON: f64 = 1.0 / (2.0 * std::f64::consts::E);

/// τ(ε) = min{k : d(k) < ε}.
pub fn first_passage(curve: &DistanceCurve, eps: f64) -> Option<usize> {
    curve.values.iter().position(|&d| d < eps)
}

pub fn mixing_time(curve: &DistanceCurve, eps: &[f64]) -> MixingReport {
    MixingReport {
        tau: eps.iter().map(|&e| (e, first_passage(curve, e))).collect(),
        tau_default: first_passage(curve, DEFAULT_EPSILON),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinitaryCutoff {
    pub a: f64,
    pub b: f64,
    /// |{k : d(k) ≥ 1 − a}|.
    pub a_size: usize,
    /// |{k : b ≤ d(k) ≤ 1 − a}|.
    pub b_size: usize,
    /// a_size / b_size, infinite when b_size = 0.
    pub q: f64,
}

pub fn finitary_cutoff(curve: &DistanceCurve, a: f64, b: f64) -> Result<FinitaryCutoff> {
    if !(0.0 < a && a < 1.0 && 0.0 < b && b < 1.0) {
        return Err(Error::InvalidArgument(format!("a, b must lie in (0,1), got ({a}, {b})")));
    }
    match curve.values.last() {
        Some(&d) if d < b => {}
        _ => {
            return Err(Error::InvalidArgument(format!(
                "curve of length {} never drops below b = {b}",
                curve.values.len()
            )))
        }
    }
    let a_size = curve.values.iter().filter(|&&d| d >= 1.0 - a).count();
    let b_size = curve
        .values
        .iter()
        .filter(|&&d| b <= d && d <= 1.0 - a)
        .count();
    let q = if b_size == 0 {
        f64::INFINITY
    } else {
        a_size as f64 / b_size as f64
    };
    Ok(FinitaryCutoff {
        a,
        b,
        a_size,
        b_size,
        q,
    })
}

/// Runs k until the curve is below `b`, then computes the finitary statistics.
pub fn finitary_for_walk(walk: &WalkSpec, a: f64, b: f64, kcap: usize) -> Result<(DistanceCurve, FinitaryCutoff)> {
    let mut kmax = 64usize.min(kcap);
    loop {
        let curve = distance_curve(walk, kmax)?;
        if curve.values.last().is_some_and(|&d| d < b) {
            let f = finitary_cutoff(&curve, a, b)?;
            return Ok((curve, f));
        }
        if kmax >= kcap {
            return Err(Error::Budget(format!("{walk} stays above {b} up to k = {kmax}")));
        }
        kmax = (kmax * 2).min(kcap);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffRow {
    pub n: usize,
    pub t_n: f64,
    pub pre_k: usize,
    pub pre: f64,
    pub post_k: usize,
    pub post: f64,
    pub tau: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffVerdict {
    pub family: WalkName,
    pub epsilon: f64,
    pub rows: Vec<CutoffRow>,
}

impl CutoffVerdict {
    pub fn pre_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.pre).collect()
    }

    pub fn post_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.post).collect()
    }

    pub fn pre_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].pre > w[0].pre)
    }

    pub fn post_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].post < w[0].post)
    }

    /// max − min of the pre-values across the family.
    pub fn pre_spread(&self) -> f64 {
        spread(&self.pre_values())
    }

    pub fn post_spread(&self) -> f64 {
        spread(&self.post_values())
    }
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Distances at ⌊(1 − ε)t_n⌋ and ⌊(1 + ε)t_n⌋ across a family; reports finite-n
/// evidence only.
pub fn cutoff_scan(
    family: WalkName,
    n_list: &[usize],
    t: impl Fn(usize) -> f64 + Sync,
    epsilon: f64,
) -> Result<CutoffVerdict> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    let rows: Vec<Result<CutoffRow>> = n_list
        .par_iter()
        .map(|&n| {
            let walk = WalkSpec::new(family, n)?;
            let t_n = t(n);
            let pre_k = ((1.0 - epsilon) * t_n).floor().max(0.0) as usize;
            let post_k = ((1.0 + epsilon) * t_n).floor().max(0.0) as usize;
            let curve = distance_curve(&walk, post_k)?;
            Ok(CutoffRow {
                n,
                t_n,
                pre_k,
                pre: curve.values[pre_k],
                post_k,
                post: curve.values[post_k],
                tau: first_passage(&curve, DEFAULT_EPSILON),
            })
        })
        .collect();
    Ok(CutoffVerdict {
        family,
        epsilon,
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuousFinitary {
    /// inf{x : f(x) = 1 − a}.
    pub a_point: f64,
    /// inf{x : f(x) = b}.
    pub b_point: f64,
    /// A/(B − A).
    pub q: f64,
}

const BISECTION_TOLERANCE: f64 = 1e-9;

/// First x ≥ 0 with f(x) ≤ level, for nonincreasing continuous f.
fn first_crossing(f: &dyn Fn(f64) -> f64, level: f64) -> Result<f64> {
    if f(0.0) <= level {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while f(hi) > level {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::InvalidArgument(format!("level {level} is never attained")));
        }
    }
    let mut lo = 0.0;
    while hi - lo > BISECTION_TOLERANCE * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn continuous_finitary(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<ContinuousFinitary> {
    let a_point = first_crossing(f, 1.0 - a)?;
    let b_point = first_crossing(f, b)?;
    let q = if b_point > a_point {
        a_point / (b_point - a_point)
    } else {
        f64::INFINITY
    };
    Ok(ContinuousFinitary { a_point, b_point, q })
}

/// The smooth step (1 − tanh(d(x − ½)))/2.
pub fn tanh_step(d: f64) -> impl Fn(f64) -> f64 {
    move |x| (1.0 - (d * (x - 0.5)).tanh()) / 2.0
}

/// Smallest d on a bisection grid at which the tanh family reaches q ≥ 1.
pub fn tanh_threshold(a: f64, b: f64) -> Result<f64> {
    let q = |d: f64| -> Result<f64> { Ok(continuous_finitary(&tanh_step(d), a, b)?.q) };
    let (mut lo, mut hi) = (1.0, 100.0);
    if q(lo)? >= 1.0 || q(hi)? < 1.0 {
        return Err(Error::Numeric("q = 1 is not bracketed".into()));
    }
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if q(mid)? >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Summary CSV `n,tau,q,A_size,B_size`.
pub fn summary_csv(rows: &[(usize, Option<usize>, FinitaryCutoff)]) -> String {
    let mut s = String::from("n,tau,q,A_size,B_size\n");
    for (n, tau, f) in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            n,
            tau.map(|t| t.to_string()).unwrap_or_default(),
            crate::fmt::float(f.q),
            f.a_size,
            f.b_size
        ));
    }
    s
}

/// Long CSV `n,k,distance`.
pub fn long_csv(curves: &[DistanceCurve]) -> String {
    let mut s = String::from("n,k,distance\n");
    for c in curves {
        for (k, d) in c.values.iter().enumerate() {
            s.push_str(&format!("{},{},{}\n", c.n, k, crate::fmt::float(*d)));
        }
    }
    s
}
