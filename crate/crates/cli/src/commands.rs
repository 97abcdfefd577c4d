use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use groupwalk_core::bounds::{
    circle_bounds, cube_lower, cube_upper, growth_profile, moderate_growth_bounds, moderate_growth_certificate,
};
use groupwalk_core::cutoff::{distance_curve, finitary_for_walk, first_passage, long_csv, summary_csv, DEFAULT_EPSILON};
use groupwalk_core::factorize::{
    charge_preimage, check_factorization, circle_pq_operator, no_finite_power_reaches_pi, FactorizationProblem,
};
use groupwalk_core::fmt::{float, opt};
use groupwalk_core::fourier::{diaconis_curve, irrep_catalog};
use groupwalk_core::measure::variation_to_uniform;
use groupwalk_core::simulate::{cube_coupling, random_to_top_sut, switzer_game, visits_before_return};
use groupwalk_core::spectral::{gershgorin, is_invertible, spectrum};
use groupwalk_core::{Error, Group, Measure, StochasticOperator, SupportSet, WalkName, WalkSpec};

use crate::config::{Command, FactorKind, RunConfig, SimKind, Target};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_ERGODIC: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotErgodic(_) => EXIT_NOT_ERGODIC,
            Error::Unsupported(_) => EXIT_UNSUPPORTED,
            Error::Budget(_) => EXIT_BUDGET,
            Error::Numeric(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

type Out = Result<String, CliError>;

pub fn run(cfg: &RunConfig) -> Out {
    match &cfg.command {
        Command::Walk { walk, kmax } => cmd_walk(walk, *kmax),
        Command::Bounds { walk, kmax, c } => cmd_bounds(walk, *kmax, c),
        Command::Cutoff {
            family,
            n,
            a,
            b,
            kcap,
            long,
        } => cmd_cutoff(family, n, *a, *b, *kcap, long.as_deref()),
        Command::Simulate {
            kind,
            n,
            trials,
            kmax,
            walk,
            k,
            target,
        } => cmd_simulate(*kind, *n, *trials, *kmax, walk.as_ref(), *k, target.as_deref(), cfg.seed),
        Command::Spectrum { walk, report } => cmd_spectrum(walk, *report),
        Command::Fourier { group, walk, kmax } => cmd_fourier(group.as_deref(), walk.as_ref(), *kmax),
        Command::Factorize {
            kind,
            n,
            reverse,
            walk,
            target,
            kmax,
            csv,
        } => cmd_factorize(*kind, *n, *reverse, walk.as_ref(), *target, *kmax, csv.as_deref()),
        Command::Ergodic {
            walk,
            group,
            support,
        } => cmd_ergodic(walk.as_ref(), group.as_deref(), support),
    }
}

fn require_ergodic(g: &Group, nu: &Measure) -> Result<(), CliError> {
    let report = g.is_ergodic(&nu.support());
    if report.ergodic {
        Ok(())
    } else {
        Err(CliError {
            code: EXIT_NOT_ERGODIC,
            message: format!("walk is not ergodic: {}", g.describe_witness(&report.witness)),
        })
    }
}

fn cmd_walk(walk: &WalkSpec, kmax: usize) -> Out {
    let (g, nu) = walk.build()?;
    require_ergodic(&g, &nu)?;
    let mut out = String::from("k,distance,separation,entropy_gap\n");
    for (k, mu) in nu.powers().take(kmax + 1).enumerate() {
        let r = mu.distance_report(&[])?;
        writeln!(
            out,
            "{k},{},{},{}",
            float(r.variation),
            float(r.separation),
            float(r.entropy_gap)
        )
        .unwrap();
    }
    Ok(out)
}

const DEFAULT_C: [f64; 4] = [0.5, 1.0, 2.0, 4.0];

fn cmd_bounds(walk: &WalkSpec, kmax: usize, c: &[f64]) -> Out {
    let grid: &[f64] = if c.is_empty() { &DEFAULT_C } else { c };
    let (g, nu) = walk.build()?;
    require_ergodic(&g, &nu)?;
    let mut out = String::from("k,exact,upper,lower\n");
    match walk.name {
        WalkName::SimpleCircle => {
            let curve = distance_curve(walk, kmax)?;
            for (k, d) in curve.values.iter().enumerate() {
                let b = circle_bounds(walk.n, k)?;
                writeln!(out, "{k},{},{},{}", float(*d), opt(b.upper), opt(b.lower)).unwrap();
            }
        }
        WalkName::CubeNn => {
            let mut rows: Vec<(usize, Option<f64>, Option<f64>)> = Vec::new();
            for &ci in grid {
                let (k, bound) = cube_upper(walk.n, ci)?;
                rows.push((k.ceil() as usize, Some(bound.sqrt()), None));
                let low = cube_lower(walk.n, ci)?;
                if low.k >= 0.0 {
                    rows.push((low.k.floor() as usize, None, Some(low.bound)));
                }
            }
            eprintln!("note: the cube lower bound is asymptotic in n");
            emit_rows(&mut out, walk, rows)?;
        }
        WalkName::HeisenbergGen => {
            let profile = growth_profile(&g, &nu.support(), &nu)?;
            let (a, d) = (48.0, 3.0);
            let a = if moderate_growth_certificate(&profile, a, d) {
                a
            } else {
                let fitted = smallest_growth_constant(&profile.volumes, d);
                eprintln!("note: (48,3) moderate growth fails on this profile; using A = {}", float(fitted));
                fitted
            };
            let mut rows = Vec::new();
            for &ci in grid {
                let b = moderate_growth_bounds(a, d, profile.diameter, profile.min_weight, ci)?;
                rows.push((b.upper_k.ceil() as usize, Some(b.upper), None));
                rows.push((b.lower_k.floor() as usize, None, Some(b.lower)));
            }
            emit_rows(&mut out, walk, rows)?;
        }
        _ => {
            return Err(CliError {
                code: EXIT_UNSUPPORTED,
                message: format!("no analytic bounds for {walk}"),
            })
        }
    }
    Ok(out)
}

/// Least A with V(k)/V(Δ) ≥ (1/A)(k/Δ)^d for 1 ≤ k ≤ Δ.
fn smallest_growth_constant(volumes: &[usize], d: f64) -> f64 {
    let delta = volumes.len() - 1;
    let full = volumes[delta] as f64;
    (1..=delta)
        .map(|k| (k as f64 / delta as f64).powf(d) / (volumes[k] as f64 / full))
        .fold(1.0, f64::max)
}

fn emit_rows(out: &mut String, walk: &WalkSpec, mut rows: Vec<(usize, Option<f64>, Option<f64>)>) -> Result<(), CliError> {
    rows.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.is_some().cmp(&a.1.is_some())));
    let kmax = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let curve = distance_curve(walk, kmax)?;
    for (k, up, low) in rows {
        writeln!(out, "{k},{},{},{}", float(curve.values[k]), opt(up), opt(low)).unwrap();
    }
    Ok(())
}

fn cmd_cutoff(family: &str, ns: &[usize], a: f64, b: f64, kcap: usize, long: Option<&Path>) -> Out {
    if ns.is_empty() {
        return Err(CliError::usage("--n needs at least one family member"));
    }
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for &n in ns {
        let walk: WalkSpec = format!("{family}:{n}").parse()?;
        let (g, nu) = walk.build()?;
        require_ergodic(&g, &nu)?;
        let (curve, fin) = finitary_for_walk(&walk, a, b, kcap)?;
        rows.push((n, first_passage(&curve, DEFAULT_EPSILON), fin));
        curves.push(curve);
    }
    if let Some(path) = long {
        fs::write(path, long_csv(&curves))?;
    }
    Ok(summary_csv(&rows))
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.expect("main fills in a seed for simulate")
}

/// A fresh seed for runs where none was given.
pub fn fresh_seed() -> u64 {
    use std::collections::hash_map::RandomState;
    use std::hash::{BuildHasher, Hasher};
    RandomState::new().build_hasher().finish()
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    kind: SimKind,
    n: Option<usize>,
    trials: usize,
    kmax: Option<u64>,
    walk: Option<&WalkSpec>,
    k: Option<usize>,
    target: Option<&str>,
    seed: Option<u64>,
) -> Out {
    let need_n = || n.ok_or_else(|| CliError::usage("--n is required"));
    let need_walk = || walk.ok_or_else(|| CliError::usage("--walk is required"));
    match kind {
        SimKind::Sut | SimKind::Coupling => {
            let n = need_n()?;
            let seed = resolve_seed(seed);
            let sample = if kind == SimKind::Sut {
                random_to_top_sut(n, trials, seed)?
            } else {
                cube_coupling(n, trials, seed)?
            };
            let nf = n as f64;
            let kmax = kmax.unwrap_or((nf * nf.ln() + 5.0 * nf).ceil() as u64);
            if sample.censored() > 0 {
                eprintln!("censored trials: {}", sample.censored());
            }
            Ok(sample.to_csv(kmax))
        }
        SimKind::Switzer => {
            let walk = need_walk()?;
            let (g, nu) = walk.build()?;
            let seed = resolve_seed(seed);
            let mu = nu.convolution_power_by_squaring(k.unwrap_or(1));
            let r = switzer_game(&mu, &Measure::uniform(g), trials, seed)?;
            Ok(format!(
                "trials,wins,rate,stderr,predicted\n{},{},{},{},{}\n",
                r.trials,
                r.wins,
                float(r.rate),
                float(r.stderr),
                float(r.predicted)
            ))
        }
        SimKind::Visits => {
            let walk = need_walk()?;
            let (g, nu) = walk.build()?;
            let label = target.ok_or_else(|| CliError::usage("--target is required"))?;
            let t = g
                .element_by_label(label)
                .ok_or_else(|| CliError::usage(format!("no element labelled {label}")))?;
            let seed = resolve_seed(seed);
            let r = visits_before_return(&nu, t.index(), trials, seed)?;
            Ok(format!(
                "target,completed,censored,mean_visits,mean_return,ratio,ratio_stderr,predicted\n{},{},{},{},{},{},{},{}\n",
                label,
                r.completed,
                r.censored,
                float(r.mean_visits),
                float(r.mean_return),
                float(r.ratio),
                float(r.ratio_stderr),
                float(r.predicted)
            ))
        }
    }
}

fn cmd_spectrum(walk: &WalkSpec, report: bool) -> Out {
    let (_, nu) = walk.build()?;
    let p = StochasticOperator::from_measure(&nu)?;
    let s = spectrum(&p)?;
    if !report {
        return Ok(s.to_csv());
    }
    let inv = is_invertible(&p);
    let gg = gershgorin(&p);
    let mut out = String::new();
    writeln!(out, "walk: {walk}").unwrap();
    writeln!(out, "order: {}", p.order()).unwrap();
    writeln!(out, "symmetric: {}", s.symmetric).unwrap();
    writeln!(out, "lambda_star: {}", float(s.lambda_star)).unwrap();
    writeln!(out, "lambda_2: {}", opt(s.lambda_2)).unwrap();
    writeln!(out, "multiplicity_of_1: {}", s.multiplicity_of_1).unwrap();
    writeln!(out, "eigenvalue_mean: {}", float(s.mean())).unwrap();
    writeln!(out, "nu_e: {}", float(p.diagonal())).unwrap();
    writeln!(out, "invertible: {}", inv.invertible).unwrap();
    writeln!(out, "min_singular_value: {}", float(inv.min_singular_value)).unwrap();
    writeln!(out, "borderline: {}", inv.borderline).unwrap();
    writeln!(out, "gershgorin_lower: {}", float(gg.lower_eig)).unwrap();
    writeln!(out, "gershgorin_certificate: {}", gg.invertible_certificate).unwrap();
    Ok(out)
}

fn cmd_fourier(group: Option<&str>, walk: Option<&WalkSpec>, kmax: usize) -> Out {
    match (group, walk) {
        (Some(d), None) => {
            let g = Arc::new(Group::parse(d)?);
            Ok(irrep_catalog(g)?.character_table_csv())
        }
        (None, Some(w)) => {
            let (g, nu) = w.build()?;
            let catalog = irrep_catalog(g)?;
            let bound = diaconis_curve(&nu, kmax, &catalog)?;
            let mut out = String::from("k,distance_sq,diaconis_bound\n");
            for (k, mu) in nu.powers().take(kmax + 1).enumerate() {
                let d = variation_to_uniform(&mu);
                writeln!(out, "{k},{},{}", float(d * d), float(bound[k])).unwrap();
            }
            Ok(out)
        }
        _ => Err(CliError::usage("give exactly one of --group and --walk")),
    }
}

fn cmd_factorize(
    kind: FactorKind,
    n: Option<usize>,
    reverse: bool,
    walk: Option<&WalkSpec>,
    target: Target,
    kmax: usize,
    csv: Option<&Path>,
) -> Out {
    let need_walk = || walk.ok_or_else(|| CliError::usage("--walk is required"));
    let mut out = String::new();
    match kind {
        FactorKind::Urban => {
            let n = n.ok_or_else(|| CliError::usage("--n is required"))?;
            let mut pb = FactorizationProblem::urban(n)?;
            if reverse {
                pb = pb.reversed();
            }
            let check = check_factorization(&pb)?;
            writeln!(out, "cards: {n}").unwrap();
            writeln!(out, "order: {}", if reverse { "reverse" } else { "forward" }).unwrap();
            writeln!(out, "factors: {}", pb.factors.len()).unwrap();
            writeln!(out, "deviation: {}", float(check.deviation)).unwrap();
            writeln!(out, "exact: {}", check.is_exact).unwrap();
            for (i, inv) in pb.factor_invertibility()?.iter().enumerate() {
                let step = if reverse { n - 1 - i } else { i + 1 };
                writeln!(
                    out,
                    "factor {step}: singular {} min_singular_value {}",
                    !inv.invertible,
                    float(inv.min_singular_value)
                )
                .unwrap();
            }
        }
        FactorKind::CirclePq => {
            let ns: Vec<usize> = match n {
                Some(n) => vec![n],
                None => (3..=15).step_by(2).collect(),
            };
            out.push_str("n,p,invertible,min_singular_value\n");
            for n in ns {
                for j in 1..=9 {
                    let p = j as f64 / 10.0;
                    let (_, inv) = circle_pq_operator(n, p)?;
                    writeln!(out, "{n},{},{},{}", float(p), inv.invertible, float(inv.min_singular_value)).unwrap();
                }
            }
        }
        FactorKind::Charge => {
            let w = need_walk()?;
            let (g, nu) = w.build()?;
            let p = StochasticOperator::from_measure(&nu)?;
            let goal = match target {
                Target::Identity => Measure::identity(g),
                Target::Uniform => Measure::uniform(g),
            };
            let inv = is_invertible(&p);
            let r = charge_preimage(&p, &goal)?;
            writeln!(out, "walk: {w}").unwrap();
            writeln!(out, "target: {}", if target == Target::Identity { "identity" } else { "uniform" }).unwrap();
            writeln!(out, "invertible: {}", inv.invertible).unwrap();
            writeln!(out, "exists: {}", r.exists).unwrap();
            writeln!(out, "residual: {}", float(r.residual)).unwrap();
            writeln!(out, "negative_entries: {}", r.negative_entries).unwrap();
            if let (Some(path), Some(body)) = (csv, r.to_csv()) {
                fs::write(path, body)?;
            }
        }
        FactorKind::NoPi => {
            let w = need_walk()?;
            let (_, nu) = w.build()?;
            let r = no_finite_power_reaches_pi(&nu, kmax)?;
            writeln!(out, "walk: {w}").unwrap();
            writeln!(out, "exact_checked: {}", r.exact_checked).unwrap();
            writeln!(out, "exact_never_equal: {}", r.exact_never_equal).unwrap();
            writeln!(out, "certificate: {}", r.certificate).unwrap();
            writeln!(out, "holds: {}", r.holds()).unwrap();
        }
    }
    Ok(out)
}

fn cmd_ergodic(walk: Option<&WalkSpec>, group: Option<&str>, support: &[String]) -> Out {
    let (g, sigma) = match (walk, group) {
        (Some(w), None) => {
            let (g, nu) = w.build()?;
            let s = nu.support();
            (g, s)
        }
        (None, Some(d)) => {
            let g = Arc::new(Group::parse(d)?);
            if support.is_empty() {
                return Err(CliError::usage("--support is required with --group"));
            }
            let idx = support
                .iter()
                .map(|l| {
                    g.element_by_label(l)
                        .map(|e| e.index())
                        .ok_or_else(|| CliError::usage(format!("no element labelled {l}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (g, SupportSet::new(idx))
        }
        _ => return Err(CliError::usage("give exactly one of --walk and --group")),
    };
    let r = g.is_ergodic(&sigma);
    let mut out = String::new();
    writeln!(out, "group: {}", g.descriptor()).unwrap();
    writeln!(out, "ergodic: {}", r.ergodic).unwrap();
    writeln!(out, "period: {}", r.period).unwrap();
    writeln!(out, "witness: {}", g.describe_witness(&r.witness)).unwrap();
    if let Some(m) = r.matrix_test {
        writeln!(out, "matrix_test: {m}").unwrap();
    }
    Ok(out)
}
