//! Stochastic operators and their spectra.
//!
//! The operator of a measure ν is p(s,t) = ν(ts⁻¹), acting on row vectors, so
//! μP = ν ⋆ μ and δ^e P^k = ν^{⋆k}.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmt::float;
use crate::group::Group;
use crate::measure::{compensated_sum, Measure, MeasureKind};

/// Largest group for which a dense |G|×|G| operator is built.
pub const OPERATOR_LIMIT: usize = 4096;

/// Relative singular-value threshold for numerical rank, scaled by |G|.
pub const RANK_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct StochasticOperator {
    group: Arc<Group>,
    matrix: DMatrix<f64>,
    kind: MeasureKind,
}

impl StochasticOperator {
    /// Operator of a probability measure.
    pub fn from_measure(nu: &Measure) -> Result<Self> {
        if !nu.is_probability() {
            return Err(Error::InvalidArgument(
                "a charge induces a signed operator; use from_charge".into(),
            ));
        }
        Self::build(nu, MeasureKind::Probability)
    }

    /// Signed operator of a charge; rows and columns still sum to 1.
    pub fn from_charge(u: &Measure) -> Result<Self> {
        Self::build(u, MeasureKind::Charge)
    }

    fn build(nu: &Measure, kind: MeasureKind) -> Result<Self> {
        let g = nu.group().clone();
        let n = g.order();
        if n > OPERATOR_LIMIT {
            return Err(Error::Budget(format!(
                "dense operator on {} elements (limit {OPERATOR_LIMIT})",
                n
            )));
        }
        let w = nu.weights();
        let matrix = DMatrix::from_fn(n, n, |s, t| w[g.mul(t, g.inv(s))]);
        Ok(StochasticOperator {
            group: g,
            matrix,
            kind,
        })
    }

    /// The matrix with every entry 1/|G|.
    pub fn uniform(group: Arc<Group>) -> Result<Self> {
        Self::from_measure(&Measure::uniform(group))
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_signed(&self) -> bool {
        self.kind == MeasureKind::Charge
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    /// ν(e), the constant diagonal entry.
    pub fn diagonal(&self) -> f64 {
        self.matrix[(0, 0)]
    }

    /// The row vector μP.
    pub fn apply_left(&self, mu: &[f64]) -> Vec<f64> {
        let v = DVector::from_column_slice(mu);
        self.matrix.tr_mul(&v).as_slice().to_vec()
    }

    /// δ^e P^k for k = 0..=kmax by repeated vector-matrix products.
    pub fn dirac_powers(&self, kmax: usize) -> Vec<Vec<f64>> {
        let mut v = vec![0.0; self.order()];
        v[0] = 1.0;
        let mut out = Vec::with_capacity(kmax + 1);
        for _ in 0..kmax {
            let next = self.apply_left(&v);
            out.push(v);
            v = next;
        }
        out.push(v);
        out
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.matrix
            .row_iter()
            .map(|r| compensated_sum(r.iter().copied()))
            .collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        self.matrix
            .column_iter()
            .map(|c| compensated_sum(c.iter().copied()))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in self.matrix.row_iter() {
            let cells: Vec<String> = row.iter().map(|&x| float(x)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Sorted descending (by real part when symmetric, by modulus otherwise).
    pub eigenvalues: Vec<Complex64>,
    pub symmetric: bool,
    pub lambda_star: f64,
    pub lambda_2: Option<f64>,
    pub multiplicity_of_1: usize,
}

impl Spectrum {
    pub fn real_eigenvalues(&self) -> Option<Vec<f64>> {
        self.symmetric
            .then(|| self.eigenvalues.iter().map(|z| z.re).collect())
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.eigenvalues.iter().map(|z| z.re)) / self.eigenvalues.len() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,abs\n");
        for z in &self.eigenvalues {
            s.push_str(&format!("{},{},{}\n", float(z.re), float(z.im), float(z.norm())));
        }
        s
    }
}

const UNIT_TOLERANCE: f64 = 1e-8;

pub fn spectrum(p: &StochasticOperator) -> Result<Spectrum> {
    let symmetric = p.is_symmetric();
    let mut eigenvalues: Vec<Complex64> = if symmetric {
        let mut v: Vec<f64> = p.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
    } else {
        let schur = p
            .matrix
            .clone()
            .try_schur(1e-14, 100_000)
            .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
        let mut v: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
        v.sort_by(|a, b| {
            b.norm()
                .total_cmp(&a.norm())
                .then(b.re.total_cmp(&a.re))
                .then(b.im.total_cmp(&a.im))
        });
        v
    };
    if eigenvalues.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("non-finite eigenvalue".into()));
    }
    let multiplicity_of_1 = eigenvalues
        .iter()
        .filter(|z| (*z - 1.0).norm() < UNIT_TOLERANCE)
        .count();
    // drop one copy of the eigenvalue 1 (the one nearest to 1)
    let unit = eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| (*a.1 - 1.0).norm().total_cmp(&(*b.1 - 1.0).norm()))
        .map(|(i, _)| i)
        .unwrap();
    let lambda_star = eigenvalues
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != unit)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max);
    let lambda_2 = if symmetric {
        eigenvalues.get(1).map(|z| z.re)
    } else {
        None
    };
    if symmetric {
        // keep the unit eigenvalue first even under ties from rounding
        let one = eigenvalues.remove(unit);
        eigenvalues.insert(0, one);
    }
    Ok(Spectrum {
        eigenvalues,
        symmetric,
        lambda_star,
        lambda_2,
        multiplicity_of_1,
    })
}

/// Eigenvalues with the e-coordinates of an orthonormal eigenbasis, for symmetric P.
#[derive(Debug, Clone)]
pub struct SymmetricDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: DMatrix<f64>,
    unit: usize,
}

impl SymmetricDecomposition {
    pub fn new(p: &StochasticOperator) -> Result<Self> {
        if !p.is_symmetric() {
            return Err(Error::InvalidArgument("operator is not symmetric".into()));
        }
        let eig = SymmetricEigen::new(p.matrix.clone());
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let unit = (0..eigenvalues.len())
            .min_by(|&a, &b| (eigenvalues[a] - 1.0).abs().total_cmp(&(eigenvalues[b] - 1.0).abs()))
            .unwrap();
        Ok(SymmetricDecomposition {
            eigenvalues,
            vectors: eig.eigenvectors,
            unit,
        })
    }

    /// ‖ν^{⋆k} − π‖₂² = Σ_{t≠1} λ_t^{2k} q_t(e)².
    pub fn l2_squared(&self, k: usize) -> f64 {
        compensated_sum(
            self.eigenvalues
                .iter()
                .enumerate()
                .filter(|&(t, _)| t != self.unit)
                .map(|(t, &l)| l.powi(2 * k as i32) * self.vectors[(0, t)].powi(2)),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds {
    /// ‖ν^{⋆k} − π‖₂² from the eigen-expansion.
    pub exact_l2_sq: f64,
    /// |G|/4 times the above; bounds the squared variation distance.
    pub ubl: f64,
    /// (|G|−1)/4 · λ⋆^{2k}.
    pub crude: f64,
}

pub fn spectral_variation_bounds(nu: &Measure, k: usize) -> Result<SpectralBounds> {
    if !nu.is_symmetric() {
        return Err(Error::InvalidArgument("ν is not symmetric".into()));
    }
    let report = nu.group().is_ergodic(&nu.support());
    if !report.ergodic {
        return Err(Error::NotErgodic(format!("{:?}", report.witness)));
    }
    let p = StochasticOperator::from_measure(nu)?;
    let dec = SymmetricDecomposition::new(&p)?;
    let n = p.order() as f64;
    let exact_l2_sq = dec.l2_squared(k);
    let lambda_star = dec
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(t, _)| t != dec.unit)
        .map(|(_, l)| l.abs())
        .fold(0.0, f64::max);
    Ok(SpectralBounds {
        exact_l2_sq,
        ubl: n / 4.0 * exact_l2_sq,
        crude: (n - 1.0) / 4.0 * lambda_star.powi(2 * k as i32),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gershgorin {
    pub disc_center: f64,
    pub disc_radius: f64,
    /// −1 + 2ν(e), a lower bound on real eigenvalues.
    pub lower_eig: f64,
    /// ν(e) > ½, so the disc excludes 0.
    pub invertible_certificate: bool,
}

pub fn gershgorin(p: &StochasticOperator) -> Gershgorin {
    let c = p.diagonal();
    let r = compensated_sum(p.matrix.row(0).iter().skip(1).map(|x| x.abs()));
    Gershgorin {
        disc_center: c,
        disc_radius: r,
        lower_eig: c - r,
        invertible_certificate: c > r,
    }
}

/// Lower bound ½‖u‖₁|λ|^k from a real left eigenvector u scaled so that π + u ≥ 0.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvectorLowerBound {
    pub lambda: f64,
    /// The scaled eigenvector u.
    pub vector: Vec<f64>,
    pub l1_norm: f64,
}

impl EigenvectorLowerBound {
    pub fn at(&self, k: usize) -> f64 {
        0.5 * self.l1_norm * self.lambda.abs().powi(k as i32)
    }

    pub fn curve(&self, kmax: usize) -> Vec<f64> {
        (0..=kmax).map(|k| self.at(k)).collect()
    }
}

const EIGEN_TOLERANCE: f64 = 1e-8;

pub fn eigenvector_lower_bound(p: &StochasticOperator, lambda: f64) -> Result<EigenvectorLowerBound> {
    if (lambda - 1.0).abs() < EIGEN_TOLERANCE {
        return Err(Error::InvalidArgument("λ must differ from 1".into()));
    }
    let n = p.order();
    let u: Vec<f64> = if p.is_symmetric() {
        let eig = SymmetricEigen::new(p.matrix.clone());
        let t = (0..n)
            .min_by(|&a, &b| {
                (eig.eigenvalues[a] - lambda)
                    .abs()
                    .total_cmp(&(eig.eigenvalues[b] - lambda).abs())
            })
            .unwrap();
        if (eig.eigenvalues[t] - lambda).abs() > EIGEN_TOLERANCE {
            return Err(Error::InvalidArgument(format!("{lambda} is not an eigenvalue")));
        }
        eig.eigenvectors.column(t).iter().copied().collect()
    } else {
        let a = p.matrix.transpose() - DMatrix::identity(n, n) * lambda;
        let svd = a.svd(false, true);
        let v_t = svd.v_t.ok_or_else(|| Error::Numeric("SVD failed".into()))?;
        let (i, &smin) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        if smin > EIGEN_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "{lambda} is not a real eigenvalue (smallest singular value {smin:e})"
            )));
        }
        v_t.row(i).iter().copied().collect()
    };
    let pi = 1.0 / n as f64;
    let scale_for = |sign: f64| {
        let worst = u.iter().map(|&x| -sign * x).fold(0.0, f64::max);
        if worst > 0.0 {
            pi / worst
        } else {
            f64::INFINITY
        }
    };
    let (plus, minus) = (scale_for(1.0), scale_for(-1.0));
    let (sign, c) = if plus >= minus { (1.0, plus) } else { (-1.0, minus) };
    if !c.is_finite() {
        return Err(Error::Numeric("eigenvector has no sign change".into()));
    }
    let vector: Vec<f64> = u.iter().map(|&x| sign * c * x).collect();
    let l1_norm = compensated_sum(vector.iter().map(|x| x.abs()));
    Ok(EigenvectorLowerBound {
        lambda,
        vector,
        l1_norm,
    })
}

/// 1 − |Σ|^k/|G|, floored at 0.
pub fn support_lower_bound(sigma_size: usize, group_order: usize, k: usize) -> f64 {
    let ratio = (sigma_size as f64).powi(k.min(i32::MAX as usize) as i32) / group_order as f64;
    (1.0 - ratio).max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Invertibility {
    pub invertible: bool,
    /// Smallest singular value within a factor 10 of the threshold.
    pub borderline: bool,
    pub min_singular_value: f64,
    pub threshold: f64,
    pub determinant: f64,
    /// Dimension of {u : uP = 0}; uP = π has the unique solution π iff this is 0.
    pub nullity: usize,
}

pub fn is_invertible(p: &StochasticOperator) -> Invertibility {
    let n = p.order();
    let threshold = RANK_THRESHOLD * n as f64;
    let sv = p.matrix.clone().singular_values();
    let min_singular_value = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let nullity = sv.iter().filter(|&&s| s <= threshold).count();
    let determinant = p.matrix.clone().lu().determinant();
    Invertibility {
        invertible: nullity == 0,
        borderline: min_singular_value > threshold / 10.0 && min_singular_value < threshold * 10.0,
        min_singular_value,
        threshold,
        determinant,
        nullity,
    }
}
