use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64;

use groupwalk_core::bounds::{diameter_eigenvalue_bound, growth_profile, moderate_growth_certificate, separation_decay_bound};
use groupwalk_core::fourier::{irrep_catalog, sort_complex, transform_eigenvalue_multiset};
use groupwalk_core::measure::{entropy_gap, separation_distance, variation_to_uniform};
use groupwalk_core::simulate::empirical_law;
use groupwalk_core::spectral::spectrum;
use groupwalk_core::walks::driving_rational;
use groupwalk_core::{ErgodicityWitness, Group, Measure, MeasureKind, StochasticOperator, SupportSet, WalkSpec};

fn group(d: &str) -> Arc<Group> {
    Arc::new(Group::parse(d).unwrap())
}

fn walk(s: &str) -> (Arc<Group>, Measure) {
    s.parse::<WalkSpec>().unwrap().build().unwrap()
}

/// Ergodic iff some power Σ^m is all of G, found by iterating reachable sets
/// until one repeats.
fn brute_force_ergodic(g: &Group, s: &[usize]) -> bool {
    let mut seen = BTreeSet::new();
    let mut cur: BTreeSet<usize> = s.iter().copied().collect();
    loop {
        if cur.len() == g.order() {
            return true;
        }
        if !seen.insert(cur.clone()) {
            return false;
        }
        cur = cur.iter().flat_map(|&a| s.iter().map(move |&b| (a, b))).map(|(a, b)| g.mul(b, a)).collect();
    }
}

fn is_subgroup(g: &Group, h: &[usize]) -> bool {
    h.contains(&g.identity()) && h.iter().all(|&a| h.iter().all(|&b| h.contains(&g.mul(a, g.inv(b)))))
}

#[test]
fn ergodicity_matches_subset_enumeration() {
    let mut descriptors: Vec<String> = (2..=12).map(|n| format!("cyclic:{n}")).collect();
    descriptors.extend(["cube:2", "cube:3", "symmetric:3", "dihedral:4", "quaternion", "heisenberg:2"].map(String::from));
    for d in descriptors {
        let g = group(&d);
        let n = g.order();
        assert!(n <= 12);
        for mask in 1u32..(1 << n) {
            let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let report = g.is_ergodic(&SupportSet::new(s.clone()));
            assert_eq!(report.ergodic, brute_force_ergodic(&g, &s), "{d} support {s:?}");
            match report.witness {
                ErgodicityWitness::Power(m) => assert!(report.ergodic && m >= 1),
                ErgodicityWitness::ProperSubgroup(h) => {
                    assert!(h.len() < n && is_subgroup(&g, &h));
                    assert!(s.iter().all(|x| h.contains(x)));
                }
                ErgodicityWitness::Coset {
                    subgroup,
                    representative,
                    coset,
                } => {
                    assert!(subgroup.len() < n && is_subgroup(&g, &subgroup));
                    assert!((0..n).all(|x| subgroup.iter().all(|&h| subgroup.contains(&g.mul(g.mul(x, h), g.inv(x))))));
                    let mut expected: Vec<usize> = subgroup.iter().map(|&h| g.mul(h, representative)).collect();
                    expected.sort_unstable();
                    let mut got = coset.clone();
                    got.sort_unstable();
                    assert_eq!(got, expected);
                    assert!(!subgroup.contains(&representative));
                    assert!(s.iter().all(|x| coset.contains(x)));
                }
            }
        }
    }
}

#[test]
fn separation_is_submultiplicative() {
    let (_, nu) = walk("simple-circle:9");
    let s: Vec<f64> = nu.powers().take(81).map(|m| separation_distance(&m).unwrap()).collect();
    for k in 0..40 {
        for l in 0..40 {
            assert!(s[k + l] <= s[k] * s[l] + 1e-12, "k={k} l={l}");
        }
    }
}

#[test]
fn separation_decays_geometrically() {
    let (g, nu) = walk("cube-nn:3");
    let n0 = 3;
    let l = nu.convolution_power(n0).weights().iter().copied().fold(f64::INFINITY, f64::min);
    assert!(l > 0.0);
    for k in 0..10 {
        let s = separation_distance(&nu.convolution_power(k * n0)).unwrap();
        assert!(s <= separation_decay_bound(g.order(), n0, l, k).unwrap() + 1e-12);
    }
}

#[test]
fn entropy_gap_decreases_on_cube() {
    let (_, nu) = walk("cube-nn:4");
    let gaps: Vec<f64> = nu.powers().take(60).map(|m| entropy_gap(&m).unwrap()).collect();
    assert!((gaps[0] - 16f64.ln()).abs() < 1e-12);
    assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(gaps[59] < 1e-6);
}

#[test]
fn heisenberg_growth_is_moderate() {
    let (g, nu) = walk("heisenberg-gen:3");
    let profile = growth_profile(&g, &nu.support(), &nu).unwrap();
    assert_eq!(profile.volumes[0], 1);
    assert_eq!(*profile.volumes.last().unwrap(), 27);
    assert!(moderate_growth_certificate(&profile, 48.0, 3.0));
    let s = spectrum(&StochasticOperator::from_measure(&nu).unwrap()).unwrap();
    let bound = diameter_eigenvalue_bound(profile.diameter, profile.min_weight).unwrap();
    assert!(s.lambda_2.unwrap() <= bound + 1e-12);
}

#[test]
fn spectrum_matches_fourier_transforms() {
    let mut cases = vec![walk("cube-nn:3").1, walk("cube-loops:4").1, walk("simple-circle:7").1];
    for d in ["dihedral:4", "quaternion"] {
        let g = group(d);
        let w: Vec<f64> = (1..=g.order()).map(|i| (i * i % 7 + 1) as f64).collect();
        let total: f64 = w.iter().sum();
        cases.push(Measure::new(g, w.into_iter().map(|x| x / total).collect(), MeasureKind::Probability).unwrap());
    }
    for nu in cases {
        let cat = irrep_catalog(nu.group().clone()).unwrap();
        let fourier = transform_eigenvalue_multiset(&nu, &cat);
        let mut dense: Vec<Complex64> = spectrum(&StochasticOperator::from_measure(&nu).unwrap())
            .unwrap()
            .eigenvalues;
        sort_complex(&mut dense);
        assert_eq!(fourier.len(), dense.len());
        for a in &fourier {
            let close = dense.iter().filter(|b| (*b - a).norm() < 1e-9).count();
            let same = fourier.iter().filter(|b| (*b - a).norm() < 1e-9).count();
            assert_eq!(close, same, "{} eigenvalue {a}", nu.group().descriptor());
        }
    }
}

#[test]
fn driving_measures_are_exact_probabilities() {
    for s in [
        "simple-circle:11",
        "cube-nn:5",
        "cube-loops:5",
        "random-transpositions:5",
        "top-to-random:5",
        "random-to-top:5",
        "heisenberg-gen:5",
        "urban-step:5:2",
    ] {
        let spec: WalkSpec = s.parse().unwrap();
        let g = spec.group().unwrap();
        let exact = driving_rational(&spec, &g).unwrap();
        let total = exact.iter().fold(num_rational::Ratio::from_integer(0i64), |acc, (_, w)| acc + w);
        assert_eq!(total, num_rational::Ratio::from_integer(1), "{s}");
        let (_, nu) = spec.build().unwrap();
        for (x, w) in exact {
            assert!((nu.weights()[x] - *w.numer() as f64 / *w.denom() as f64).abs() < 1e-15);
        }
    }
}

#[test]
fn random_to_top_is_inverse_of_top_to_random() {
    let (_, a) = walk("top-to-random:5");
    let (_, b) = walk("random-to-top:5");
    assert_eq!(a.reversed().weights(), b.weights());
    for k in [1, 3, 7] {
        let da = variation_to_uniform(&a.convolution_power(k));
        let db = variation_to_uniform(&b.convolution_power(k));
        assert!((da - db).abs() < 1e-12);
    }
}

#[test]
fn empirical_law_tracks_exact_law() {
    let trials = 200_000;
    for (s, k) in [("cube-nn:3", 4), ("random-transpositions:4", 3), ("simple-circle:7", 10)] {
        let (_, nu) = walk(s);
        let exact = nu.convolution_power(k);
        let emp = empirical_law(&nu, k, trials, 11).unwrap();
        let tol = 4.0 / (trials as f64).sqrt();
        for (e, x) in emp.iter().zip(exact.weights()) {
            assert!((e - x).abs() < tol, "{s} k={k}");
        }
        assert_eq!(emp, empirical_law(&nu, k, trials, 11).unwrap());
    }
}
