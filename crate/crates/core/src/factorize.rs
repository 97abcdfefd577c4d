//! Invertible operators, charge preimages and factorizations of the uniform distribution.

use std::sync::Arc;

use nalgebra::DVector;
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fmt::float;
use crate::group::{Group, GroupKind};
use crate::measure::{Measure, MeasureKind};
use crate::spectral::{is_invertible, Invertibility, StochasticOperator, SymmetricDecomposition, RANK_THRESHOLD};
use crate::walks::{WalkName, WalkSpec};

/// ℓ∞ deviation below which a product counts as exactly π.
pub const EXACT_TOLERANCE: f64 = 1e-12;

/// ‖uP − target‖∞ below which a linear solve counts as a solution.
pub const SOLVE_TOLERANCE: f64 = 1e-9;

/// Largest |G|·|supp ν|·k allowed for exact rational powers.
pub const RATIONAL_BUDGET: usize = 50_000_000;

/// Target ν_m ⋆ ··· ⋆ ν_1 = π; `factors[0]` is ν_1, the first step taken.
#[derive(Debug, Clone)]
pub struct FactorizationProblem {
    pub factors: Vec<Measure>,
    pub target: Measure,
}

impl FactorizationProblem {
    pub fn new(factors: Vec<Measure>) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::InvalidArgument("no factors".into()))?;
        for f in &factors[1..] {
            first.same_group(f)?;
        }
        let target = Measure::uniform(first.group().clone());
        Ok(FactorizationProblem { factors, target })
    }

    /// Urban's shuffle on n cards: ν_i is uniform on {e, (i,i+1), …, (i,n)} for i = 1..n−1.
    pub fn urban(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need n ≥ 2 cards, got {n}")));
        }
        let group = Arc::new(Group::new(GroupKind::Symmetric(n))?);
        let factors = (1..n)
            .map(|i| crate::walks::driving_measure(&WalkSpec::new(WalkName::UrbanStep(i), n)?, group.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }

    /// The same factors applied in the opposite order.
    pub fn reversed(&self) -> Self {
        FactorizationProblem {
            factors: self.factors.iter().rev().cloned().collect(),
            target: self.target.clone(),
        }
    }

    pub fn product(&self) -> Result<Measure> {
        let mut acc = self.factors[0].clone();
        for f in &self.factors[1..] {
            acc = f.convolve(&acc)?;
        }
        Ok(acc)
    }

    /// Invertibility of each factor's operator.
    pub fn factor_invertibility(&self) -> Result<Vec<Invertibility>> {
        self.factors
            .iter()
            .map(|f| Ok(is_invertible(&StochasticOperator::from_measure(f)?)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationCheck {
    pub is_exact: bool,
    /// ℓ∞ distance from the product to π.
    pub deviation: f64,
}

pub fn check_factorization(problem: &FactorizationProblem) -> Result<FactorizationCheck> {
    problem.factors[0].same_group(&problem.target)?;
    let product = problem.product()?;
    let deviation = product
        .weights()
        .iter()
        .zip(problem.target.weights())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(FactorizationCheck {
        is_exact: deviation <= EXACT_TOLERANCE,
        deviation,
    })
}

/// Operator of ν_p(1) = p, ν_p(−1) = 1 − p on Z_n, with its invertibility.
pub fn circle_pq_operator(n: usize, p: f64) -> Result<(StochasticOperator, Invertibility)> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need n ≥ 3, got {n}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 < p < 1, got {p}")));
    }
    let group = Arc::new(Group::new(GroupKind::Cyclic(n))?);
    let nu = Measure::from_pairs(group, &[(1, p), (n - 1, 1.0 - p)])?;
    let op = StochasticOperator::from_measure(&nu)?;
    let inv = is_invertible(&op);
    Ok((op, inv))
}

#[derive(Debug, Clone)]
pub struct ChargeSolveResult {
    pub exists: bool,
    /// Least-squares u, kept as a charge only when it solves uP = target.
    pub solution: Option<Measure>,
    pub residual: f64,
    pub negative_entries: usize,
}

impl ChargeSolveResult {
    pub fn to_csv(&self) -> Option<String> {
        self.solution.as_ref().map(|u| {
            let g = u.group();
            let mut out = String::from("index,label,charge\n");
            for (i, w) in u.weights().iter().enumerate() {
                out.push_str(&format!("{i},{},{}\n", g.label(i), float(*w)));
            }
            out
        })
    }
}

/// Solves uP = target by a rank-revealing least-squares solve.
pub fn charge_preimage(p: &StochasticOperator, target: &Measure) -> Result<ChargeSolveResult> {
    if p.group().kind() != target.group().kind() {
        return Err(Error::GroupMismatch(p.group().descriptor(), target.group().descriptor()));
    }
    let n = p.order();
    let rhs = DVector::from_column_slice(target.weights());
    let svd = p.matrix().transpose().svd(true, true);
    let u = svd
        .solve(&rhs, RANK_THRESHOLD * n as f64)
        .map_err(|e| Error::Numeric(e.to_string()))?;
    let u: Vec<f64> = u.iter().copied().collect();
    let image = p.apply_left(&u);
    let residual = image
        .iter()
        .zip(target.weights())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let exists = residual <= SOLVE_TOLERANCE;
    let negative_entries = u.iter().filter(|&&x| x < -SOLVE_TOLERANCE).count();
    let solution = if exists {
        Some(Measure::new(p.group().clone(), u, MeasureKind::Charge)?)
    } else {
        None
    };
    Ok(ChargeSolveResult {
        exists,
        solution,
        residual,
        negative_entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoPiPowerReport {
    /// ν^{⋆k} ≠ π in exact rational arithmetic for every 1 ≤ k ≤ this.
    pub exact_checked: usize,
    pub exact_never_equal: bool,
    /// Some eigenvalue λ ≠ 0 carries weight in the eigen-expansion of δ^e.
    pub certificate: bool,
}

impl NoPiPowerReport {
    pub fn holds(&self) -> bool {
        self.exact_never_equal && self.certificate
    }
}

/// The simplest rational that rounds to x, falling back to its exact binary value.
fn to_rational(x: f64) -> Result<BigRational> {
    if let Some(r) = Ratio::<i64>::approximate_float(x) {
        if r.to_f64() == Some(x) {
            return Ok(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())));
        }
    }
    BigRational::from_f64(x).ok_or_else(|| Error::Numeric(format!("{x} is not finite")))
}

/// Checks that no convolution power of a symmetric ν ≠ π equals π.
pub fn no_finite_power_reaches_pi(nu: &Measure, k_budget: usize) -> Result<NoPiPowerReport> {
    if !nu.is_probability() || !nu.is_symmetric() {
        return Err(Error::InvalidArgument("ν must be a symmetric probability".into()));
    }
    let g = nu.group();
    let order = g.order();
    let pi_weight = BigRational::new(BigInt::from(1), BigInt::from(order));
    let sparse: Vec<(usize, BigRational)> = nu
        .sparse()
        .into_iter()
        .map(|(s, w)| Ok((s, to_rational(w)?)))
        .collect::<Result<_>>()?;
    if sparse.iter().all(|(_, w)| *w == pi_weight) && sparse.len() == order {
        return Err(Error::InvalidArgument("ν is already π".into()));
    }
    if order.saturating_mul(sparse.len()).saturating_mul(k_budget) > RATIONAL_BUDGET {
        return Err(Error::Budget(format!(
            "exact powers up to {k_budget} on {} elements",
            order
        )));
    }
    let mut power: Vec<BigRational> = vec![BigRational::zero(); order];
    power[g.identity()] = BigRational::from_integer(BigInt::from(1));
    let mut exact_never_equal = true;
    for _ in 0..k_budget {
        let mut next = vec![BigRational::zero(); order];
        for (t, mt) in power.iter().enumerate() {
            if mt.is_zero() {
                continue;
            }
            for (s, w) in &sparse {
                next[g.mul(*s, t)] += w * mt;
            }
        }
        power = next;
        if power.iter().all(|x| *x == pi_weight) {
            exact_never_equal = false;
            break;
        }
    }
    let dec = SymmetricDecomposition::new(&StochasticOperator::from_measure(nu)?)?;
    let e = g.identity();
    let mut unit_seen = false;
    let mut live = 0.0;
    for (t, &l) in dec.eigenvalues.iter().enumerate() {
        let w = dec.vectors[(e, t)].powi(2);
        if !unit_seen && (l - 1.0).abs() < 1e-9 && (w - 1.0 / order as f64).abs() < 1e-9 {
            unit_seen = true;
            continue;
        }
        if l.abs() > 1e-8 {
            live += w;
        }
    }
    Ok(NoPiPowerReport {
        exact_checked: k_budget,
        exact_never_equal,
        certificate: live > 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn urban_s4_is_exact() {
        let pb = FactorizationProblem::urban(4).unwrap();
        let c = check_factorization(&pb).unwrap();
        assert!(c.is_exact, "{c:?}");
        assert!(pb.factor_invertibility().unwrap().iter().all(|i| !i.invertible));
    }

    #[test]
    fn single_uniform_factor() {
        let g = Arc::new(Group::parse("quaternion").unwrap());
        let pb = FactorizationProblem::new(vec![Measure::uniform(g)]).unwrap();
        assert!(check_factorization(&pb).unwrap().is_exact);
    }

    #[test]
    fn mismatched_factors_are_rejected() {
        let a = Measure::uniform(Arc::new(Group::parse("cyclic:4").unwrap()));
        let b = Measure::uniform(Arc::new(Group::parse("cube:2").unwrap()));
        assert!(FactorizationProblem::new(vec![a, b]).is_err());
    }

    #[test]
    fn circle_pq_pivots() {
        assert!(circle_pq_operator(5, 0.5).unwrap().1.invertible);
        assert!(!circle_pq_operator(4, 0.5).unwrap().1.invertible);
        assert!(circle_pq_operator(7, 0.9).unwrap().1.invertible);
    }

    #[test]
    fn lazy_square_is_singular() {
        let (_, nu) = "cube-loops:2".parse::<WalkSpec>().unwrap().build().unwrap();
        let p = StochasticOperator::from_measure(&nu).unwrap();
        assert!(!is_invertible(&p).invertible);
        assert!(!charge_preimage(&p, &Measure::identity(nu.group().clone())).unwrap().exists);
    }

    #[test]
    fn inverse_of_square_walk_has_negative_mass() {
        let (_, nu) = "cube-nn:2".parse::<WalkSpec>().unwrap().build().unwrap();
        let p = StochasticOperator::from_measure(&nu).unwrap();
        let delta = Measure::identity(nu.group().clone());
        let r = charge_preimage(&p, &delta).unwrap();
        assert!(r.exists);
        assert!(r.negative_entries >= 1);
        assert!((r.solution.unwrap().mass() - 1.0).abs() < 1e-12);
        let pi = Measure::uniform(nu.group().clone());
        let r = charge_preimage(&p, &pi).unwrap();
        let u = r.solution.unwrap();
        assert!(u.weights().iter().all(|w| (w - 0.25).abs() < 1e-12));
    }

    #[test]
    fn uniform_operator_has_no_dirac_preimage() {
        let g = Arc::new(Group::parse("cyclic:5").unwrap());
        let u = StochasticOperator::uniform(g.clone()).unwrap();
        let r = charge_preimage(&u, &Measure::identity(g)).unwrap();
        assert!(!r.exists);
        assert!(r.solution.is_none());
        assert!(r.to_csv().is_none());
    }

    #[test]
    fn circle_never_reaches_pi() {
        let (_, nu) = "simple-circle:5".parse::<WalkSpec>().unwrap().build().unwrap();
        let r = no_finite_power_reaches_pi(&nu, 500).unwrap();
        assert!(r.holds());
        let (_, nu) = "cube-nn:3".parse::<WalkSpec>().unwrap().build().unwrap();
        assert!(no_finite_power_reaches_pi(&nu, 100).unwrap().certificate);
    }

    #[test]
    fn pi_itself_is_excluded() {
        let g = Arc::new(Group::parse("cyclic:4").unwrap());
        assert!(no_finite_power_reaches_pi(&Measure::uniform(g), 10).is_err());
        let g = Arc::new(Group::parse("cyclic:3").unwrap());
        assert!(no_finite_power_reaches_pi(&Measure::uniform(g), 10).is_err());
    }
}
