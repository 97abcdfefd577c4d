use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use proptest::prelude::*;

use groupwalk_core::fourier::{
    convolve_functions, fourier_inversion, irrep_catalog, plancherel_check, schur_average, IrrepCatalog,
};
use groupwalk_core::measure::{entropy_gap, lp_distance, separation_distance, variation_to_uniform};
use groupwalk_core::{Group, Lp, Measure, MeasureKind, SupportSet};

const DESCRIPTORS: &[&str] = &[
    "cyclic:2",
    "cyclic:5",
    "cyclic:6",
    "cyclic:12",
    "cube:2",
    "cube:3",
    "cube:4",
    "symmetric:3",
    "symmetric:4",
    "dihedral:4",
    "quaternion",
    "heisenberg:2",
    "heisenberg:3",
];

const FOURIER_GROUPS: &[&str] = &["cyclic:5", "cyclic:12", "cube:3", "dihedral:4", "quaternion"];

fn groups() -> &'static Vec<Arc<Group>> {
    static GROUPS: OnceLock<Vec<Arc<Group>>> = OnceLock::new();
    GROUPS.get_or_init(|| DESCRIPTORS.iter().map(|d| Arc::new(Group::parse(d).unwrap())).collect())
}

fn catalogs() -> &'static Vec<IrrepCatalog> {
    static CATS: OnceLock<Vec<IrrepCatalog>> = OnceLock::new();
    CATS.get_or_init(|| {
        FOURIER_GROUPS
            .iter()
            .map(|d| irrep_catalog(Arc::new(Group::parse(d).unwrap())).unwrap())
            .collect()
    })
}

fn any_group() -> impl Strategy<Value = Arc<Group>> {
    (0..DESCRIPTORS.len()).prop_map(|i| groups()[i].clone())
}

/// Probability measure on a catalogue group, with some weights forced to zero.
fn measure_on(g: Arc<Group>) -> impl Strategy<Value = Measure> {
    let n = g.order();
    proptest::collection::vec((0.0f64..1.0, proptest::bool::weighted(0.3)), n).prop_map(move |raw| {
        let mut w: Vec<f64> = raw.iter().map(|&(x, zero)| if zero { 0.0 } else { x + 1e-3 }).collect();
        if w.iter().all(|&x| x == 0.0) {
            w[0] = 1.0;
        }
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        Measure::new(g.clone(), w, MeasureKind::Probability).unwrap()
    })
}

fn any_measure() -> impl Strategy<Value = Measure> {
    any_group().prop_flat_map(measure_on)
}

fn measure_pair() -> impl Strategy<Value = (Measure, Measure, Measure)> {
    any_group().prop_flat_map(|g| (measure_on(g.clone()), measure_on(g.clone()), measure_on(g)))
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_axioms(g in any_group(), seeds in proptest::collection::vec(any::<usize>(), 3)) {
        let n = g.order();
        let (a, b, c) = (seeds[0] % n, seeds[1] % n, seeds[2] % n);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.identity()), a);
        prop_assert_eq!(g.mul(g.identity(), a), a);
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.inv(g.inv(a)), a);
    }

    #[test]
    fn digraph_and_matrix_ergodicity_agree(g in any_group(), mask in any::<u64>()) {
        let n = g.order();
        let elems: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!elems.is_empty());
        let s = SupportSet::new(elems);
        let report = g.is_ergodic(&s);
        let by_matrix = g.positive_power_by_matrix(&s);
        prop_assert_eq!(report.ergodic, by_matrix.is_some());
        prop_assert_eq!(g.full_support_time(&s), by_matrix);
    }

    #[test]
    fn convolution_is_associative((a, b, c) in measure_pair()) {
        let left = a.convolve(&b).unwrap().convolve(&c).unwrap();
        let right = a.convolve(&b.convolve(&c).unwrap()).unwrap();
        prop_assert!(max_diff(left.weights(), right.weights()) < 1e-14);
    }

    #[test]
    fn abelian_groups_commute((a, b, _) in measure_pair()) {
        prop_assume!(a.group().is_abelian());
        let ab = a.convolve(&b).unwrap();
        let ba = b.convolve(&a).unwrap();
        prop_assert!(max_diff(ab.weights(), ba.weights()) < 1e-14);
    }

    #[test]
    fn mass_is_preserved_and_distances_ordered(nu in any_measure()) {
        let mut prev_tv = f64::INFINITY;
        let mut prev_gap = f64::INFINITY;
        for mu in nu.powers().take(25) {
            prop_assert!((mu.mass() - 1.0).abs() < 1e-12);
            prop_assert!(mu.weights().iter().all(|&w| w >= 0.0));
            let tv = variation_to_uniform(&mu);
            let sep = separation_distance(&mu).unwrap();
            let gap = entropy_gap(&mu).unwrap();
            prop_assert!(tv <= sep + 1e-12);
            prop_assert!(tv <= prev_tv + 1e-12);
            prop_assert!(gap <= prev_gap + 1e-12);
            prop_assert!(gap >= 0.0);
            prev_tv = tv;
            prev_gap = gap;
        }
    }

    #[test]
    fn l2_distance_to_uniform(nu in any_measure()) {
        let n = nu.group().order() as f64;
        let pi = Measure::uniform(nu.group().clone());
        let d = lp_distance(&nu, &pi, Lp::P(2.0)).unwrap();
        let sum_sq: f64 = nu.weights().iter().map(|w| w * w).sum();
        prop_assert!((d * d - (sum_sq - 1.0 / n)).abs() < 1e-12);
    }

    #[test]
    fn squaring_matches_iteration(nu in any_measure(), k in 0usize..40) {
        let a = nu.convolution_power_by_squaring(k);
        let b = nu.powers().nth(k).unwrap();
        prop_assert!(max_diff(a.weights(), b.weights()) < 1e-12);
    }

    #[test]
    fn inversion_and_plancherel(
        (i, f, h) in (0..FOURIER_GROUPS.len()).prop_flat_map(|i| {
            let n = catalogs()[i].group().order();
            (Just(i), complex_vec(n), complex_vec(n))
        })
    ) {
        let cat = &catalogs()[i];
        let back = fourier_inversion(&cat.transform_all(&f), cat).unwrap();
        let err = back.iter().zip(&f).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
        prop_assert!(plancherel_check(&f, &h, cat).unwrap() < 1e-12);
        let fh = convolve_functions(cat.group(), &f, &h);
        let lhs = cat.transform_all(&fh);
        let (tf, th) = (cat.transform_all(&f), cat.transform_all(&h));
        for ((l, a), b) in lhs.iter().zip(&tf).zip(&th) {
            prop_assert!((l - a * b).norm() < 1e-12);
        }
    }

    #[test]
    fn schur_intertwiners(
        (i, entries) in (0..FOURIER_GROUPS.len()).prop_flat_map(|i| (Just(i), complex_vec(4)))
    ) {
        let cat = &catalogs()[i];
        let g = cat.group();
        for (a, r1) in cat.reps.iter().enumerate() {
            for (b, r2) in cat.reps.iter().enumerate() {
                let h0 = nalgebra::DMatrix::from_fn(r2.dim, r1.dim, |x, y| entries[x * 2 + y]);
                let avg = schur_average(g, r1, r2, &h0);
                if a != b {
                    prop_assert!(avg.norm() < 1e-12);
                } else {
                    let scalar = h0.trace() / r1.dim as f64;
                    let expected = nalgebra::DMatrix::identity(r1.dim, r1.dim) * scalar;
                    prop_assert!((avg - expected).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn nonabelian_groups_have_noncommuting_diracs() {
    for g in groups().iter().filter(|g| !g.is_abelian()) {
        let witness = (0..g.order()).any(|a| (0..g.order()).any(|b| g.mul(a, b) != g.mul(b, a)));
        assert!(witness, "{}", g.descriptor());
        let (a, b) = (0..g.order())
            .flat_map(|a| (0..g.order()).map(move |b| (a, b)))
            .find(|&(a, b)| g.mul(a, b) != g.mul(b, a))
            .unwrap();
        let da = Measure::dirac(g.clone(), g.element(a).unwrap()).unwrap();
        let db = Measure::dirac(g.clone(), g.element(b).unwrap()).unwrap();
        assert_ne!(da.convolve(&db).unwrap().weights(), db.convolve(&da).unwrap().weights());
    }
}
