use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use groupwalk_core::cutoff::DEFAULT_EPSILON;
use groupwalk_core::WalkSpec;

/// Exact and Monte Carlo analysis of random walks on finite groups.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "groupwalk", version)]
pub struct RunConfig {
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Master seed for Monte Carlo commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; affects speed only.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Exact variation, separation and entropy curves.
    Walk {
        #[arg(long)]
        walk: WalkSpec,
        #[arg(long, default_value_t = 100)]
        kmax: usize,
    },
    /// Exact distance beside the analytic upper and lower bounds.
    Bounds {
        #[arg(long)]
        walk: WalkSpec,
        #[arg(long, default_value_t = 100)]
        kmax: usize,
        /// Values of c for the cube and Heisenberg bounds.
        #[arg(long, value_delimiter = ',')]
        c: Vec<f64>,
    },
    /// Mixing times and finitary cut-off statistics across a family.
    Cutoff {
        /// Walk family name, e.g. cube-nn.
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        a: f64,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        b: f64,
        #[arg(long, default_value_t = 200_000)]
        kcap: usize,
        /// Also write the per-k curves to this file.
        #[arg(long)]
        long: Option<PathBuf>,
    },
    /// Monte Carlo stopping times, couplings and games.
    Simulate {
        #[arg(value_enum)]
        kind: SimKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long)]
        kmax: Option<u64>,
        #[arg(long)]
        walk: Option<WalkSpec>,
        #[arg(long)]
        k: Option<usize>,
        /// Element label for `visits`.
        #[arg(long)]
        target: Option<String>,
    },
    /// Eigenvalues of the stochastic operator.
    Spectrum {
        #[arg(long)]
        walk: WalkSpec,
        /// Print a summary instead of the eigenvalue CSV.
        #[arg(long)]
        report: bool,
    },
    /// Character tables, or the Fourier upper bound along a walk.
    Fourier {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        walk: Option<WalkSpec>,
        #[arg(long, default_value_t = 100)]
        kmax: usize,
    },
    /// Invertibility, charge preimages and factorizations of π.
    Factorize {
        #[arg(value_enum)]
        kind: FactorKind,
        #[arg(long)]
        n: Option<usize>,
        /// Apply Urban's factors in the opposite order.
        #[arg(long)]
        reverse: bool,
        #[arg(long)]
        walk: Option<WalkSpec>,
        #[arg(long, value_enum, default_value_t = Target::Identity)]
        target: Target,
        #[arg(long, default_value_t = 500)]
        kmax: usize,
        /// Write the solved charge here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Ergodicity verdict with a witness.
    Ergodic {
        #[arg(long)]
        walk: Option<WalkSpec>,
        #[arg(long)]
        group: Option<String>,
        /// Element labels of the support.
        #[arg(long, value_delimiter = ',')]
        support: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimKind {
    Sut,
    Coupling,
    Switzer,
    Visits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorKind {
    Urban,
    CirclePq,
    Charge,
    NoPi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Identity,
    Uniform,
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn push<T: ToString>(args: &mut Vec<String>, flag: &str, v: T) {
    args.push(flag.to_string());
    args.push(v.to_string());
}

fn push_opt<T: ToString>(args: &mut Vec<String>, flag: &str, v: &Option<T>) {
    if let Some(v) = v {
        push(args, flag, v.to_string());
    }
}

fn push_list<T: ToString>(args: &mut Vec<String>, flag: &str, v: &[T]) {
    if !v.is_empty() {
        let joined: Vec<String> = v.iter().map(T::to_string).collect();
        push(args, flag, joined.join(","));
    }
}

impl RunConfig {
    /// The canonical command line for this configuration, program name excluded.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = Vec::new();
        match &self.command {
            Command::Walk { walk, kmax } => {
                a.push("walk".into());
                push(&mut a, "--walk", walk);
                push(&mut a, "--kmax", kmax);
            }
            Command::Bounds { walk, kmax, c } => {
                a.push("bounds".into());
                push(&mut a, "--walk", walk);
                push(&mut a, "--kmax", kmax);
                push_list(&mut a, "--c", c);
            }
            Command::Cutoff {
                family,
                n,
                a: aa,
                b,
                kcap,
                long,
            } => {
                a.push("cutoff".into());
                push(&mut a, "--family", family);
                push_list(&mut a, "--n", n);
                push(&mut a, "--a", aa);
                push(&mut a, "--b", b);
                push(&mut a, "--kcap", kcap);
                push_opt(&mut a, "--long", &long.as_ref().map(|p| p.display().to_string()));
            }
            Command::Simulate {
                kind,
                n,
                trials,
                kmax,
                walk,
                k,
                target,
            } => {
                a.push("simulate".into());
                a.push(value_name(kind));
                push_opt(&mut a, "--n", n);
                push(&mut a, "--trials", trials);
                push_opt(&mut a, "--kmax", kmax);
                push_opt(&mut a, "--walk", walk);
                push_opt(&mut a, "--k", k);
                push_opt(&mut a, "--target", target);
            }
            Command::Spectrum { walk, report } => {
                a.push("spectrum".into());
                push(&mut a, "--walk", walk);
                if *report {
                    a.push("--report".into());
                }
            }
            Command::Fourier { group, walk, kmax } => {
                a.push("fourier".into());
                push_opt(&mut a, "--group", group);
                push_opt(&mut a, "--walk", walk);
                push(&mut a, "--kmax", kmax);
            }
            Command::Factorize {
                kind,
                n,
                reverse,
                walk,
                target,
                kmax,
                csv,
            } => {
                a.push("factorize".into());
                a.push(value_name(kind));
                push_opt(&mut a, "--n", n);
                if *reverse {
                    a.push("--reverse".into());
                }
                push_opt(&mut a, "--walk", walk);
                push(&mut a, "--target", value_name(target));
                push(&mut a, "--kmax", kmax);
                push_opt(&mut a, "--csv", &csv.as_ref().map(|p| p.display().to_string()));
            }
            Command::Ergodic {
                walk,
                group,
                support,
            } => {
                a.push("ergodic".into());
                push_opt(&mut a, "--walk", walk);
                push_opt(&mut a, "--group", group);
                push_list(&mut a, "--support", support);
            }
        }
        push_opt(&mut a, "--out", &self.out.as_ref().map(|p| p.display().to_string()));
        push_opt(&mut a, "--seed", &self.seed);
        push_opt(&mut a, "--threads", &self.threads);
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &str) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("groupwalk").chain(line.split_whitespace())).unwrap()
    }

    #[test]
    fn canonical_lines_round_trip() {
        for line in [
            "walk --walk simple-circle:11 --kmax 200",
            "bounds --walk cube-nn:6 --kmax 40 --c 0.5,1,2,4",
            "cutoff --family cube-nn --n 4,6,8 --a 0.25 --b 0.125 --kcap 1000 --long curves.csv",
            "simulate sut --n 20 --trials 100000 --kmax 200 --seed 7",
            "simulate visits --trials 1000 --walk simple-circle:5 --target 2 --seed 1 --threads 2",
            "spectrum --walk random-to-top:4 --report",
            "fourier --group quaternion --kmax 100",
            "factorize urban --n 4 --reverse --target identity --kmax 500",
            "factorize charge --walk cube-nn:4 --target identity --kmax 500 --csv u.csv --out r.txt",
            "ergodic --group cyclic:6 --support 2,4",
        ] {
            let cfg = parse(line);
            assert_eq!(cfg.to_args().join(" "), line);
            assert_eq!(parse(&cfg.to_args().join(" ")), cfg);
        }
    }

    #[test]
    fn unknown_walks_are_rejected() {
        assert!(RunConfig::try_parse_from(["groupwalk", "spectrum", "--walk", "quaternion-free:2"]).is_err());
    }

    #[test]
    fn defaults_are_made_explicit() {
        let cfg = parse("walk --walk cube-nn:3");
        assert_eq!(cfg.to_args().join(" "), "walk --walk cube-nn:3 --kmax 100");
        let cfg = parse("cutoff --family simple-circle --n 9,11");
        assert_eq!(parse(&cfg.to_args().join(" ")), cfg);
    }
}
