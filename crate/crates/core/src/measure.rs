//! Probability measures and charges on a group, convolution, and distances to random.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fmt::float;
use crate::group::{Group, GroupElement, SupportSet};

/// Total mass must equal 1 within this tolerance at construction.
pub const MASS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Probability,
    /// Signed measure of total mass 1.
    Charge,
}

#[derive(Debug, Clone)]
pub struct Measure {
    group: Arc<Group>,
    weights: Vec<f64>,
    kind: MeasureKind,
}

/// Exponent of an ℓp norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lp {
    P(f64),
    Inf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub variation: f64,
    pub separation: f64,
    pub entropy_gap: f64,
    pub lp: Vec<(Lp, f64)>,
}

pub(crate) fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

impl Measure {
    pub fn new(group: Arc<Group>, weights: Vec<f64>, kind: MeasureKind) -> Result<Self> {
        if weights.len() != group.order() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for a group of order {}",
                weights.len(),
                group.order()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("non-finite weight".into()));
        }
        let mass = compensated_sum(weights.iter().copied());
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidArgument(format!("total mass {mass} is not 1")));
        }
        if kind == MeasureKind::Probability && weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidArgument(
                "probability measure with a negative weight".into(),
            ));
        }
        Ok(Measure {
            group,
            weights,
            kind,
        })
    }

    /// Builds from `(element, weight)` pairs, summing repeats.
    pub fn from_pairs(group: Arc<Group>, pairs: &[(usize, f64)]) -> Result<Self> {
        let mut w = vec![0.0; group.order()];
        for &(g, x) in pairs {
            group.element(g)?;
            w[g] += x;
        }
        Measure::new(group, w, MeasureKind::Probability)
    }

    pub(crate) fn unchecked(group: Arc<Group>, weights: Vec<f64>, kind: MeasureKind) -> Self {
        Measure {
            group,
            weights,
            kind,
        }
    }

    pub fn uniform(group: Arc<Group>) -> Self {
        let n = group.order();
        Measure::unchecked(group, vec![1.0 / n as f64; n], MeasureKind::Probability)
    }

    pub fn dirac(group: Arc<Group>, x: GroupElement) -> Result<Self> {
        let index = group.element(x.index())?.index();
        let mut w = vec![0.0; group.order()];
        w[index] = 1.0;
        Ok(Measure::unchecked(group, w, MeasureKind::Probability))
    }

    pub fn identity(group: Arc<Group>) -> Self {
        let mut w = vec![0.0; group.order()];
        w[group.identity()] = 1.0;
        Measure::unchecked(group, w, MeasureKind::Probability)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn is_probability(&self) -> bool {
        self.kind == MeasureKind::Probability
    }

    pub fn mass(&self) -> f64 {
        compensated_sum(self.weights.iter().copied())
    }

    pub fn support(&self) -> SupportSet {
        SupportSet::new(
            (0..self.weights.len())
                .filter(|&g| self.weights[g] != 0.0)
                .collect(),
        )
    }

    /// ν̌(s) = ν(s⁻¹).
    pub fn reversed(&self) -> Measure {
        let w = (0..self.weights.len())
            .map(|s| self.weights[self.group.inv(s)])
            .collect();
        Measure::unchecked(self.group.clone(), w, self.kind)
    }

    /// ν(s) = ν(s⁻¹) for all s, compared exactly.
    pub fn is_symmetric(&self) -> bool {
        (0..self.weights.len()).all(|s| self.weights[s] == self.weights[self.group.inv(s)])
    }

    /// Explicit rescaling to total mass 1.
    pub fn renormalized(&self) -> Measure {
        let m = self.mass();
        let w = self.weights.iter().map(|x| x / m).collect();
        Measure::unchecked(self.group.clone(), w, self.kind)
    }

    pub fn same_group(&self, other: &Measure) -> Result<()> {
        if *self.group == *other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch(
                self.group.descriptor(),
                other.group.descriptor(),
            ))
        }
    }

    /// ν ⋆ μ, with (ν⋆μ)(s) = Σ_t ν(st⁻¹) μ(t).
    pub fn convolve(&self, mu: &Measure) -> Result<Measure> {
        self.same_group(mu)?;
        let mut out = vec![0.0; self.weights.len()];
        convolve_into(&self.group, &self.sparse(), &mu.weights, &mut out);
        let kind = if self.is_probability() && mu.is_probability() {
            MeasureKind::Probability
        } else {
            MeasureKind::Charge
        };
        Ok(Measure::unchecked(self.group.clone(), out, kind))
    }

    /// Nonzero `(element, weight)` pairs.
    pub fn sparse(&self) -> Vec<(usize, f64)> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0.0)
            .map(|(g, &w)| (g, w))
            .collect()
    }

    /// ν^{⋆k} by k−1 successive convolutions.
    pub fn convolution_power(&self, k: usize) -> Measure {
        self.powers().nth(k).unwrap()
    }

    /// ν^{⋆k} by repeated squaring.
    pub fn convolution_power_by_squaring(&self, mut k: usize) -> Measure {
        let mut result = Measure::identity(self.group.clone());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = base.convolve(&result).unwrap();
            }
            k >>= 1;
            if k > 0 {
                base = base.convolve(&base).unwrap();
            }
        }
        result.kind = self.kind;
        result
    }

    /// δ^e, ν, ν^{⋆2}, … without end.
    pub fn powers(&self) -> Powers {
        Powers {
            step: self.sparse(),
            current: Measure::identity(self.group.clone()),
            kind: self.kind,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,label,weight\n");
        for (g, &w) in self.weights.iter().enumerate() {
            s.push_str(&format!("{},{},{}\n", g, self.group.label(g), float(w)));
        }
        s
    }

    fn require_probability(&self, what: &str) -> Result<()> {
        if self.is_probability() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "{what} is defined for probability measures only"
            )))
        }
    }

    pub fn distance_report(&self, ps: &[Lp]) -> Result<DistanceReport> {
        let pi = Measure::uniform(self.group.clone());
        Ok(DistanceReport {
            variation: variation_distance(self, &pi)?,
            separation: separation_distance(self)?,
            entropy_gap: entropy_gap(self)?,
            lp: ps
                .iter()
                .map(|&p| Ok((p, lp_distance(self, &pi, p)?)))
                .collect::<Result<_>>()?,
        })
    }
}

pub(crate) fn convolve_into(group: &Group, nu: &[(usize, f64)], mu: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    for &(a, wa) in nu {
        for (t, &wt) in mu.iter().enumerate() {
            if wt != 0.0 {
                out[group.mul(a, t)] += wa * wt;
            }
        }
    }
}

pub struct Powers {
    step: Vec<(usize, f64)>,
    current: Measure,
    kind: MeasureKind,
}

impl Iterator for Powers {
    type Item = Measure;

    fn next(&mut self) -> Option<Measure> {
        let mut next = vec![0.0; self.current.weights.len()];
        convolve_into(
            &self.current.group,
            &self.step,
            &self.current.weights,
            &mut next,
        );
        let next = Measure::unchecked(self.current.group.clone(), next, self.kind);
        Some(std::mem::replace(&mut self.current, next))
    }
}

/// max_A |μ(A) − ν(A)|, computed as half the ℓ¹ distance.
pub fn variation_distance(mu: &Measure, nu: &Measure) -> Result<f64> {
    mu.same_group(nu)?;
    Ok(0.5
        * compensated_sum(
            mu.weights
                .iter()
                .zip(&nu.weights)
                .map(|(a, b)| (a - b).abs()),
        ))
}

pub fn variation_to_uniform(mu: &Measure) -> f64 {
    let u = 1.0 / mu.weights.len() as f64;
    0.5 * compensated_sum(mu.weights.iter().map(|a| (a - u).abs()))
}

/// s = |G| max_t (1/|G| − ν(t)).
pub fn separation_distance(nu_k: &Measure) -> Result<f64> {
    nu_k.require_probability("separation distance")?;
    let n = nu_k.weights.len() as f64;
    let gap = nu_k
        .weights
        .iter()
        .map(|&w| 1.0 / n - w)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((n * gap).clamp(0.0, 1.0))
}

/// σ = log|G| − H(ν) with 0·log 0 = 0.
pub fn entropy_gap(nu_k: &Measure) -> Result<f64> {
    nu_k.require_probability("entropy gap")?;
    let h = compensated_sum(
        nu_k.weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| -w * w.ln()),
    );
    Ok(((nu_k.weights.len() as f64).ln() - h).max(0.0))
}

/// Raw ‖μ − ν‖_p.
pub fn lp_distance(mu: &Measure, nu: &Measure, p: Lp) -> Result<f64> {
    mu.same_group(nu)?;
    let diffs = mu.weights.iter().zip(&nu.weights).map(|(a, b)| (a - b).abs());
    match p {
        Lp::Inf => Ok(diffs.fold(0.0, f64::max)),
        Lp::P(p) if p >= 1.0 => Ok(compensated_sum(diffs.map(|d| d.powf(p))).powf(1.0 / p)),
        Lp::P(p) => Err(Error::InvalidArgument(format!("ℓp needs p ≥ 1, got {p}"))),
    }
}

/// d_p = |G|^{1−1/p} ‖μ − ν‖_p.
pub fn scaled_lp_distance(mu: &Measure, nu: &Measure, p: Lp) -> Result<f64> {
    let raw = lp_distance(mu, nu, p)?;
    let n = mu.weights.len() as f64;
    Ok(match p {
        Lp::Inf => n * raw,
        Lp::P(p) => n.powf(1.0 - 1.0 / p) * raw,
    })
}

/// Success probability of the optimal guess between μ and ν from one sample.
pub fn switzer_guess_probability(mu: &Measure, nu: &Measure) -> Result<f64> {
    mu.require_probability("the guessing game")?;
    nu.require_probability("the guessing game")?;
    Ok(0.5 * (1.0 + variation_distance(mu, nu)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Arc<Group> {
        Arc::new(Group::parse(&format!("cyclic:{n}")).unwrap())
    }

    #[test]
    fn dirac_convolution_multiplies() {
        let g = Arc::new(Group::parse("symmetric:3").unwrap());
        for a in 0..6 {
            for b in 0..6 {
                let da = Measure::dirac(g.clone(), g.element(a).unwrap()).unwrap();
                let db = Measure::dirac(g.clone(), g.element(b).unwrap()).unwrap();
                let c = da.convolve(&db).unwrap();
                assert_eq!(c.weights()[g.mul(a, b)], 1.0);
            }
        }
    }

    #[test]
    fn cyclic3_square() {
        let g = cyclic(3);
        let nu = Measure::from_pairs(g, &[(1, 0.5), (2, 0.5)]).unwrap();
        assert_eq!(nu.convolve(&nu).unwrap().weights(), &[0.5, 0.25, 0.25]);
        assert_eq!(nu.convolution_power(2).weights(), &[0.5, 0.25, 0.25]);
        assert_eq!(nu.convolution_power(0).weights(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn identity_is_neutral() {
        let g = Arc::new(Group::parse("quaternion").unwrap());
        let nu = Measure::from_pairs(g.clone(), &[(2, 0.25), (4, 0.75)]).unwrap();
        let e = Measure::identity(g);
        assert_eq!(nu.convolve(&e).unwrap().weights(), nu.weights());
    }

    #[test]
    fn rejects_bad_mass_and_signs() {
        let g = cyclic(3);
        assert!(Measure::new(g.clone(), vec![0.5, 0.5, 0.5], MeasureKind::Probability).is_err());
        assert!(Measure::new(g.clone(), vec![1.5, -0.5, 0.0], MeasureKind::Probability).is_err());
        assert!(Measure::new(g, vec![1.5, -0.5, 0.0], MeasureKind::Charge).is_ok());
    }

    #[test]
    fn distances_of_dirac() {
        let g = cyclic(8);
        let e = Measure::identity(g.clone());
        let pi = Measure::uniform(g);
        assert!((variation_distance(&e, &pi).unwrap() - 7.0 / 8.0).abs() < 1e-15);
        assert_eq!(separation_distance(&e).unwrap(), 1.0);
        assert_eq!(separation_distance(&pi).unwrap(), 0.0);
        assert!((entropy_gap(&e).unwrap() - 8f64.ln()).abs() < 1e-15);
        assert!(entropy_gap(&pi).unwrap() < 1e-15);
        let l1 = lp_distance(&e, &pi, Lp::P(1.0)).unwrap();
        assert!((l1 - 2.0 * 7.0 / 8.0).abs() < 1e-15);
        assert_eq!(lp_distance(&pi, &pi, Lp::Inf).unwrap(), 0.0);
        assert!(lp_distance(&e, &pi, Lp::P(0.5)).is_err());
    }

    #[test]
    fn l2_against_direct_sum() {
        let g = cyclic(5);
        let mu = Measure::from_pairs(g.clone(), &[(0, 0.1), (1, 0.2), (3, 0.7)]).unwrap();
        let pi = Measure::uniform(g);
        let direct: f64 = [0.1, 0.2, 0.0, 0.7, 0.0]
            .iter()
            .map(|w: &f64| (w - 0.2).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!((lp_distance(&mu, &pi, Lp::P(2.0)).unwrap() - direct).abs() < 1e-15);
        let d2 = scaled_lp_distance(&mu, &pi, Lp::P(2.0)).unwrap();
        assert!((d2 - 5f64.sqrt() * direct).abs() < 1e-14);
    }

    #[test]
    fn switzer_extremes() {
        let g = cyclic(6);
        let a = Measure::dirac(g.clone(), g.element(1).unwrap()).unwrap();
        let b = Measure::dirac(g.clone(), g.element(2).unwrap()).unwrap();
        assert_eq!(switzer_guess_probability(&a, &a).unwrap(), 0.5);
        assert_eq!(switzer_guess_probability(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn charges_are_rejected_where_undefined() {
        let g = cyclic(3);
        let u = Measure::new(g, vec![1.5, -0.5, 0.0], MeasureKind::Charge).unwrap();
        assert!(separation_distance(&u).is_err());
        assert!(entropy_gap(&u).is_err());
    }

    #[test]
    fn csv_layout() {
        let g = Arc::new(Group::parse("cube:2").unwrap());
        let csv = Measure::uniform(g).to_csv();
        assert_eq!(
            csv,
            "index,label,weight\n0,00,0.25\n1,01,0.25\n2,10,0.25\n3,11,0.25\n"
        );
    }

    #[test]
    fn squaring_matches_iteration() {
        let g = Arc::new(Group::parse("symmetric:4").unwrap());
        let nu = Measure::from_pairs(g, &[(0, 0.3), (1, 0.3), (7, 0.4)]).unwrap();
        let a = nu.convolution_power(13);
        let b = nu.convolution_power_by_squaring(13);
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert!((x - y).abs() < 1e-14);
        }
    }
}
