//! Unitary representations, Fourier transforms and the Fourier upper bound.
//!
//! `f̂(ρ) = Σ_s f(s) ρ(s)`. With this convention the transform turns
//! convolution into a product, `(f⋆h)^(ρ) = f̂(ρ) ĥ(ρ)`, and
//! `f(s) = (1/|G|) Σ_i d_i tr(ρ_i(s⁻¹) f̂(ρ_i))`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmt::float;
use crate::group::{Group, GroupKind};
use crate::measure::Measure;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone)]
pub struct Representation {
    pub name: String,
    pub dim: usize,
    matrices: Vec<CMatrix>,
}

impl Representation {
    pub fn new(name: impl Into<String>, matrices: Vec<CMatrix>) -> Self {
        let dim = matrices.first().map_or(0, |m| m.nrows());
        Representation {
            name: name.into(),
            dim,
            matrices,
        }
    }

    fn one_dimensional(name: impl Into<String>, values: Vec<Complex64>) -> Self {
        Representation::new(
            name,
            values
                .into_iter()
                .map(|z| CMatrix::from_element(1, 1, z))
                .collect(),
        )
    }

    pub fn matrix(&self, s: usize) -> &CMatrix {
        &self.matrices[s]
    }

    pub fn character(&self) -> Vec<Complex64> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }

    /// max ‖ρ(st) − ρ(s)ρ(t)‖ over all pairs.
    pub fn homomorphism_defect(&self, g: &Group) -> f64 {
        let n = g.order();
        let mut worst = 0.0f64;
        for s in 0..n {
            for t in 0..n {
                let d = &self.matrices[g.mul(s, t)] - &self.matrices[s] * &self.matrices[t];
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// max ‖ρ(s)ρ(s)* − I‖.
    pub fn unitarity_defect(&self) -> f64 {
        let id = CMatrix::identity(self.dim, self.dim);
        self.matrices
            .iter()
            .map(|m| (m * m.adjoint() - &id).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct IrrepCatalog {
    group: Arc<Group>,
    /// The trivial representation comes first.
    pub reps: Vec<Representation>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn real_matrix(d: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(d, d, entries.iter().map(|&x| c(x, 0.0)))
}

pub fn irrep_catalog(group: Arc<Group>) -> Result<IrrepCatalog> {
    let n = group.order();
    let reps = match group.kind() {
        GroupKind::Cyclic(m) => (0..m)
            .map(|t| {
                let values = (0..n)
                    .map(|s| Complex64::from_polar(1.0, 2.0 * PI * ((t * s) % m) as f64 / m as f64))
                    .collect();
                Representation::one_dimensional(format!("rho{t}"), values)
            })
            .collect(),
        GroupKind::Cube(_) => (0..n)
            .map(|t| {
                let values = (0..n)
                    .map(|s| c(if (t & s).count_ones() % 2 == 0 { 1.0 } else { -1.0 }, 0.0))
                    .collect();
                Representation::one_dimensional(format!("rho{}", group.label(t)), values)
            })
            .collect(),
        GroupKind::Quaternion => {
            // elements: 1 −1 i −i j −j k −k
            let sign = |s: usize, u: usize| if s / 2 == 0 || s / 2 == u { 1.0 } else { -1.0 };
            let mut reps = vec![Representation::one_dimensional(
                "trivial",
                vec![c(1.0, 0.0); 8],
            )];
            for (u, name) in [(1, "rho_i"), (2, "rho_j"), (3, "rho_k")] {
                reps.push(Representation::one_dimensional(
                    name,
                    (0..8).map(|s| c(sign(s, u), 0.0)).collect(),
                ));
            }
            let one = CMatrix::identity(2, 2);
            let i = CMatrix::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]);
            let j = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]);
            let k = real_matrix(2, &[0.0, -1.0, 1.0, 0.0]);
            let mut mats = Vec::with_capacity(8);
            for m in [one, i, j, k] {
                mats.push(m.clone());
                mats.push(-m);
            }
            reps.push(Representation::new("rho", mats));
            reps
        }
        GroupKind::Dihedral4 => {
            // g = r^k s^e with r = r90 and s = (12)
            let (r, s) = (1usize, 4usize);
            let mut rot = [0usize; 4];
            for k in 1..4 {
                rot[k] = group.mul(r, rot[k - 1]);
            }
            let exponents: Vec<(usize, usize)> = (0..8)
                .map(|g| {
                    (0..4)
                        .flat_map(|k| [(k, 0), (k, 1)])
                        .find(|&(k, e)| {
                            let h = if e == 0 { rot[k] } else { group.mul(rot[k], s) };
                            h == g
                        })
                        .unwrap()
                })
                .collect();
            let mut reps = Vec::new();
            for (alpha, beta, name) in [
                (1.0, 1.0, "trivial"),
                (1.0, -1.0, "det"),
                (-1.0, 1.0, "chi_r"),
                (-1.0, -1.0, "chi_rs"),
            ] {
                let values = exponents
                    .iter()
                    .map(|&(k, e)| c(f64::powi(alpha, k as i32) * f64::powi(beta, e as i32), 0.0))
                    .collect();
                reps.push(Representation::one_dimensional(name, values));
            }
            let mats = (0..8)
                .map(|g| {
                    let m = group.dihedral_matrix(g).unwrap();
                    real_matrix(2, &m.map(f64::from))
                })
                .collect();
            reps.push(Representation::new("rho", mats));
            reps
        }
        GroupKind::Symmetric(_) | GroupKind::Heisenberg(_) => {
            return Err(Error::Unsupported(format!(
                "no irreducible representation catalogue for {}",
                group.descriptor()
            )))
        }
    };
    Ok(IrrepCatalog { group, reps })
}

impl IrrepCatalog {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn dims(&self) -> Vec<usize> {
        self.reps.iter().map(|r| r.dim).collect()
    }

    pub fn sum_of_squared_dims(&self) -> usize {
        self.reps.iter().map(|r| r.dim * r.dim).sum()
    }

    /// f̂(ρ_i) for every irrep.
    pub fn transform_all(&self, f: &[Complex64]) -> Vec<CMatrix> {
        self.reps.iter().map(|r| fourier_transform(f, r)).collect()
    }

    /// Character table as CSV: one row per irrep, one column per conjugacy class.
    pub fn character_table_csv(&self) -> String {
        let classes = self.group.conjugacy_classes();
        let mut s = String::from("irrep,dim");
        for class in &classes.classes {
            s.push(',');
            s.push_str(&self.group.label(class[0]));
        }
        s.push('\n');
        for rep in &self.reps {
            let chi = rep.character();
            s.push_str(&format!("{},{}", rep.name, rep.dim));
            for class in &classes.classes {
                s.push(',');
                s.push_str(&complex_cell(chi[class[0]]));
            }
            s.push('\n');
        }
        s
    }
}

fn snap(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// `re+imi`, rounded to 12 decimals so that roundoff does not leak into tables.
pub fn complex_cell(z: Complex64) -> String {
    let (re, im) = (snap(z.re), snap(z.im));
    if im < 0.0 {
        format!("{}-{}i", float(re), float(-im))
    } else {
        format!("{}+{}i", float(re), float(im))
    }
}

pub fn as_complex(w: &[f64]) -> Vec<Complex64> {
    w.iter().map(|&x| c(x, 0.0)).collect()
}

pub fn fourier_transform(f: &[Complex64], rho: &Representation) -> CMatrix {
    let mut out = CMatrix::zeros(rho.dim, rho.dim);
    for (s, &x) in f.iter().enumerate() {
        if x != Complex64::default() {
            out += rho.matrix(s) * x;
        }
    }
    out
}

pub fn fourier_transform_measure(nu: &Measure, rho: &Representation) -> CMatrix {
    fourier_transform(&as_complex(nu.weights()), rho)
}

/// (f⋆h)(s) = Σ_t f(st⁻¹) h(t) for complex functions.
pub fn convolve_functions(g: &Group, f: &[Complex64], h: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); g.order()];
    for (a, &fa) in f.iter().enumerate() {
        if fa == Complex64::default() {
            continue;
        }
        for (t, &ht) in h.iter().enumerate() {
            out[g.mul(a, t)] += fa * ht;
        }
    }
    out
}

/// max_i ‖(f⋆h)^(ρ_i) − f̂(ρ_i) ĥ(ρ_i)‖.
pub fn convolution_theorem_check(f: &[Complex64], h: &[Complex64], catalog: &IrrepCatalog) -> f64 {
    let fh = convolve_functions(&catalog.group, f, h);
    catalog
        .reps
        .iter()
        .map(|r| {
            let lhs = fourier_transform(&fh, r);
            let rhs = fourier_transform(f, r) * fourier_transform(h, r);
            (lhs - rhs).norm()
        })
        .fold(0.0, f64::max)
}

fn require_complete(catalog: &IrrepCatalog) -> Result<()> {
    if catalog.sum_of_squared_dims() == catalog.group.order() {
        Ok(())
    } else {
        Err(Error::InvalidArgument("incomplete irreducible catalogue".into()))
    }
}

/// f(s) = (1/|G|) Σ_i d_i tr(ρ_i(s⁻¹) f̂(ρ_i)).
pub fn fourier_inversion(coeffs: &[CMatrix], catalog: &IrrepCatalog) -> Result<Vec<Complex64>> {
    require_complete(catalog)?;
    if coeffs.len() != catalog.reps.len() {
        return Err(Error::InvalidArgument("one coefficient per irrep is required".into()));
    }
    let g = &catalog.group;
    let n = g.order() as f64;
    Ok((0..g.order())
        .map(|s| {
            let si = g.inv(s);
            catalog
                .reps
                .iter()
                .zip(coeffs)
                .map(|(r, fh)| (r.matrix(si) * fh).trace() * r.dim as f64)
                .sum::<Complex64>()
                / n
        })
        .collect())
}

/// |Σ_s f(s⁻¹)h(s) − (1/|G|) Σ_i d_i tr(f̂(ρ_i) ĥ(ρ_i))|.
pub fn plancherel_check(f: &[Complex64], h: &[Complex64], catalog: &IrrepCatalog) -> Result<f64> {
    require_complete(catalog)?;
    let g = &catalog.group;
    let lhs: Complex64 = (0..g.order()).map(|s| f[g.inv(s)] * h[s]).sum();
    let rhs: Complex64 = catalog
        .reps
        .iter()
        .map(|r| (fourier_transform(f, r) * fourier_transform(h, r)).trace() * r.dim as f64)
        .sum::<Complex64>()
        / g.order() as f64;
    Ok((lhs - rhs).norm())
}

/// ¼ Σ_{ρ≠τ} d_ρ tr(ν̂(ρ)^k (ν̂(ρ)^k)*) for k = 0..=kmax.
pub fn diaconis_curve(nu: &Measure, kmax: usize, catalog: &IrrepCatalog) -> Result<Vec<f64>> {
    require_complete(catalog)?;
    nu.same_group(&Measure::uniform(catalog.group.clone()))?;
    let mut out = vec![0.0; kmax + 1];
    for rep in catalog.reps.iter().skip(1) {
        let a = fourier_transform_measure(nu, rep);
        let mut power = CMatrix::identity(rep.dim, rep.dim);
        for slot in out.iter_mut() {
            *slot += 0.25 * rep.dim as f64 * (&power * power.adjoint()).trace().re;
            power = &power * &a;
        }
    }
    Ok(out)
}

pub fn diaconis_upper_bound(nu: &Measure, k: usize, catalog: &IrrepCatalog) -> Result<f64> {
    Ok(diaconis_curve(nu, k, catalog)?[k])
}

/// (χ₁|χ₂) = (1/|G|) Σ_s χ₁(s) conj(χ₂(s)).
pub fn character_inner_product(chi1: &[Complex64], chi2: &[Complex64]) -> Complex64 {
    let n = chi1.len() as f64;
    chi1.iter().zip(chi2).map(|(a, b)| a * b.conj()).sum::<Complex64>() / n
}

/// Character of the regular representation: |G| at e, 0 elsewhere.
pub fn regular_character(g: &Group) -> Vec<Complex64> {
    let mut chi = vec![Complex64::default(); g.order()];
    chi[0] = c(g.order() as f64, 0.0);
    chi
}

/// (1/|G|) Σ_t ρ₂(t)⁻¹ h₀ ρ₁(t), an intertwiner from ρ₁ to ρ₂.
pub fn schur_average(g: &Group, rho1: &Representation, rho2: &Representation, h0: &CMatrix) -> CMatrix {
    let mut acc = CMatrix::zeros(rho2.dim, rho1.dim);
    for t in 0..g.order() {
        acc += rho2.matrix(g.inv(t)) * h0 * rho1.matrix(t);
    }
    acc / c(g.order() as f64, 0.0)
}

/// Eigenvalues of ν̂(ρ) repeated d_ρ times, sorted by (re, im) descending.
pub fn transform_eigenvalue_multiset(nu: &Measure, catalog: &IrrepCatalog) -> Vec<Complex64> {
    let mut out = Vec::new();
    for rep in &catalog.reps {
        let a = fourier_transform_measure(nu, rep);
        let eig: Vec<Complex64> = match rep.dim {
            1 => vec![a[(0, 0)]],
            2 => complex_eigenvalues_2x2(&a),
            _ => unreachable!("catalogue irreps have degree at most 2"),
        };
        for z in eig {
            for _ in 0..rep.dim {
                out.push(z);
            }
        }
    }
    sort_complex(&mut out);
    out
}

fn complex_eigenvalues_2x2(a: &CMatrix) -> Vec<Complex64> {
    let tr = a[(0, 0)] + a[(1, 1)];
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    let disc = (tr * tr - det * 4.0).sqrt();
    vec![(tr + disc) / 2.0, (tr - disc) / 2.0]
}

pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
}
