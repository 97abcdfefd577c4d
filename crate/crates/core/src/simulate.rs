//! Monte Carlo trajectories, stopping times and couplings.
//!
//! Trials are split into fixed blocks of [`BLOCK`] and block b draws from the
//! ChaCha stream `(master_seed, b)`. Results are gathered in block order, so a
//! fixed seed gives identical output whatever the size of the rayon pool.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::fmt::float;
use crate::measure::{variation_distance, Measure};
use crate::walks::{WalkName, WalkSpec};

/// Trajectories longer than this are censored.
pub const STEP_CAP: u64 = 1_000_000;

/// Trials per random stream.
pub const BLOCK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        RngStream {
            master_seed,
            stream_id,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Runs `trials` independent calls of `f`, in trial order.
pub fn run_trials<T, F>(seed: u64, trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let blocks = trials.div_ceil(BLOCK);
    let chunks: Vec<Vec<T>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = RngStream::new(seed, b as u64).rng();
            let len = BLOCK.min(trials - b * BLOCK);
            (0..len).map(|_| f(&mut rng)).collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Draws steps ζ ~ ν.
#[derive(Debug, Clone)]
pub struct StepSampler {
    support: Vec<usize>,
    index: WeightedIndex<f64>,
}

impl StepSampler {
    pub fn new(nu: &Measure) -> Result<Self> {
        if !nu.is_probability() {
            return Err(Error::InvalidArgument("cannot sample from a charge".into()));
        }
        let (support, weights): (Vec<usize>, Vec<f64>) = nu.sparse().into_iter().unzip();
        let index = WeightedIndex::new(&weights).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(StepSampler { support, index })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.support[self.index.sample(rng)]
    }
}

/// ξ_0 = e, ξ_{j+1} = ζ_{j+1} ξ_j.
pub fn sample_trajectory<R: Rng + ?Sized>(nu: &Measure, k: usize, rng: &mut R) -> Result<Vec<usize>> {
    let sampler = StepSampler::new(nu)?;
    let g = nu.group();
    let mut path = Vec::with_capacity(k + 1);
    let mut x = g.identity();
    path.push(x);
    for _ in 0..k {
        x = g.mul(sampler.draw(rng), x);
        path.push(x);
    }
    Ok(path)
}

/// Empirical law of ξ_k over `trials` runs.
pub fn empirical_law(nu: &Measure, k: usize, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let sampler = StepSampler::new(nu)?;
    let g = nu.group();
    let ends = run_trials(seed, trials, |rng| {
        let mut x = g.identity();
        for _ in 0..k {
            x = g.mul(sampler.draw(rng), x);
        }
        x
    });
    let mut freq = vec![0.0; g.order()];
    for x in ends {
        freq[x] += 1.0;
    }
    freq.iter_mut().for_each(|f| *f /= trials.max(1) as f64);
    Ok(freq)
}

/// Sampled stopping times; `None` marks a censored trial.
#[derive(Debug, Clone, PartialEq)]
pub struct StoppingTimeSample {
    pub times: Vec<Option<u64>>,
}

impl StoppingTimeSample {
    pub fn trials(&self) -> usize {
        self.times.len()
    }

    pub fn censored(&self) -> usize {
        self.times.iter().filter(|t| t.is_none()).count()
    }

    /// Empirical P(T > k); censored trials count as exceeding every k.
    pub fn p_exceed(&self, k: u64) -> f64 {
        let over = self.times.iter().filter(|t| t.map_or(true, |t| t > k)).count();
        over as f64 / self.trials() as f64
    }

    pub fn stderr(&self, k: u64) -> f64 {
        binomial_stderr(self.p_exceed(k), self.trials())
    }

    /// (k, P(T > k), stderr) for k = 0..=kmax.
    pub fn curve(&self, kmax: u64) -> Vec<(u64, f64, f64)> {
        let n = self.trials();
        let mut at = vec![0usize; kmax as usize + 2];
        for t in &self.times {
            let slot = t.map_or(kmax + 1, |t| t.min(kmax + 1));
            at[slot as usize] += 1;
        }
        let mut over = n;
        (0..=kmax)
            .map(|k| {
                over -= at[k as usize];
                let p = over as f64 / n as f64;
                (k, p, binomial_stderr(p, n))
            })
            .collect()
    }

    /// Mean and its standard error; `None` when any trial was censored.
    pub fn mean(&self) -> Option<(f64, f64)> {
        let xs: Option<Vec<f64>> = self.times.iter().map(|t| t.map(|t| t as f64)).collect();
        mean_stderr(&xs?)
    }

    pub fn to_csv(&self, kmax: u64) -> String {
        let mut out = String::from("k,p_exceed,stderr\n");
        for (k, p, se) in self.curve(kmax) {
            out.push_str(&format!("{k},{},{}\n", float(p), float(se)));
        }
        out
    }
}

fn binomial_stderr(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

fn mean_stderr(xs: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n == 0 {
        return None;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return Some((mean, 0.0));
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Some((mean, (var / n as f64).sqrt()))
}

/// One random-to-top run until every card has been selected at least once.
/// Returns T and the deck at time T, as card labels 1..=n from the top.
fn random_to_top_run<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Option<u64>, Vec<u8>) {
    let mut deck: Vec<u8> = (1..=n as u8).collect();
    let mut touched = vec![false; n + 1];
    let mut remaining = n;
    let mut t = 0u64;
    while remaining > 0 {
        if t == STEP_CAP {
            return (None, deck);
        }
        let card = deck.remove(rng.gen_range(0..n));
        deck.insert(0, card);
        if !touched[card as usize] {
            touched[card as usize] = true;
            remaining -= 1;
        }
        t += 1;
    }
    (Some(t), deck)
}

/// The strong uniform time of the random-to-top shuffle on n cards.
pub fn random_to_top_sut(n: usize, trials: usize, seed: u64) -> Result<StoppingTimeSample> {
    if n < 2 || n > u8::MAX as usize {
        return Err(Error::InvalidArgument(format!("need 2 ≤ n ≤ 255, got {n}")));
    }
    check_trials(trials)?;
    let times = run_trials(seed, trials, |rng| random_to_top_run(n, rng).0);
    Ok(StoppingTimeSample { times })
}

/// Counts of the deck at the stopping time, indexed like `symmetric:n`.
pub fn random_to_top_stopped_law(n: usize, trials: usize, seed: u64) -> Result<Vec<u64>> {
    let group = WalkSpec::new(WalkName::RandomToTop, n)?.group()?;
    check_trials(trials)?;
    let decks = run_trials(seed, trials, |rng| random_to_top_run(n, rng).1);
    let mut counts = vec![0u64; group.order()];
    for d in decks {
        let zero_based: Vec<u8> = d.iter().map(|c| c - 1).collect();
        let i = group
            .permutation_index(&zero_based)
            .expect("deck is a permutation");
        counts[i] += 1;
    }
    Ok(counts)
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    Ok(())
}

fn check_cube_dim(n: usize) -> Result<()> {
    if n == 0 || n > 63 {
        return Err(Error::InvalidArgument(format!("need 1 ≤ n ≤ 63, got {n}")));
    }
    Ok(())
}

/// One coupled step of the lazy cube walk ξ and a stationary copy Π. Coordinate
/// j is chosen uniformly; heads flips ξ_j, and either way Π_j takes the new ξ_j.
fn coupled_step<R: Rng + ?Sized>(n: usize, xi: &mut u64, pi: &mut u64, rng: &mut R) -> usize {
    let j = rng.gen_range(0..n);
    let bit = 1u64 << j;
    if rng.gen::<bool>() {
        *xi ^= bit;
    }
    *pi = (*pi & !bit) | (*xi & bit);
    j
}

/// Coupling time of the lazy cube walk: the first time every coordinate has been chosen.
pub fn cube_coupling(n: usize, trials: usize, seed: u64) -> Result<StoppingTimeSample> {
    check_cube_dim(n)?;
    check_trials(trials)?;
    let full = (1u64 << n) - 1;
    let times = run_trials(seed, trials, |rng| {
        let mut xi = 0u64;
        let mut pi = rng.gen::<u64>() & full;
        let mut chosen = 0u64;
        let mut t = 0u64;
        while chosen != full {
            if t == STEP_CAP {
                return None;
            }
            chosen |= 1u64 << coupled_step(n, &mut xi, &mut pi, rng);
            t += 1;
        }
        debug_assert_eq!(xi, pi);
        Some(t)
    });
    Ok(StoppingTimeSample { times })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson test of observed counts against expected probabilities. Counts in a
/// cell of zero probability force p = 0.
pub fn chi_square(counts: &[u64], expected: &[f64]) -> Result<ChiSquareReport> {
    if counts.len() != expected.len() {
        return Err(Error::InvalidArgument("counts and probabilities differ in length".into()));
    }
    let total: u64 = counts.iter().sum();
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut impossible = false;
    for (&c, &p) in counts.iter().zip(expected) {
        if p <= 0.0 {
            impossible |= c > 0;
            continue;
        }
        let e = p * total as f64;
        statistic += (c as f64 - e).powi(2) / e;
        cells += 1;
    }
    if cells < 2 {
        return Err(Error::InvalidArgument("need at least two cells of positive probability".into()));
    }
    let dof = cells - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Numeric(e.to_string()))?;
    let p_value = if impossible { 0.0 } else { 1.0 - dist.cdf(statistic) };
    Ok(ChiSquareReport {
        statistic,
        dof,
        p_value,
    })
}

/// Chi-square test that the first coordinate of the coupling at time k is
/// distributed as the exact lazy cube walk.
pub fn coupling_marginal_check(n: usize, k: usize, trials: usize, seed: u64) -> Result<ChiSquareReport> {
    let (_, nu) = WalkSpec::new(WalkName::CubeLoops, n)?.build()?;
    check_trials(trials)?;
    let exact = nu.convolution_power_by_squaring(k);
    let full = (1u64 << n) - 1;
    let ends = run_trials(seed, trials, |rng| {
        let (mut xi, mut pi) = (0u64, rng.gen::<u64>() & full);
        for _ in 0..k {
            coupled_step(n, &mut xi, &mut pi, rng);
        }
        xi as usize
    });
    let mut counts = vec![0u64; exact.weights().len()];
    for x in ends {
        counts[x] += 1;
    }
    chi_square(&counts, exact.weights())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitzerReport {
    pub trials: usize,
    pub wins: usize,
    pub rate: f64,
    pub stderr: f64,
    /// ½(1 + ‖μ − ν‖).
    pub predicted: f64,
}

impl SwitzerReport {
    pub fn within(&self, sigmas: f64) -> bool {
        (self.rate - self.predicted).abs() <= sigmas * self.stderr.max(f64::EPSILON)
    }
}

/// A fair coin picks μ or ν, one outcome o is drawn from it, and the player
/// guesses μ iff μ(o) ≥ ν(o).
pub fn switzer_game(mu: &Measure, nu: &Measure, trials: usize, seed: u64) -> Result<SwitzerReport> {
    check_trials(trials)?;
    let predicted = 0.5 * (1.0 + variation_distance(mu, nu)?);
    let (sm, sn) = (StepSampler::new(mu)?, StepSampler::new(nu)?);
    let (wm, wn) = (mu.weights(), nu.weights());
    let outcomes = run_trials(seed, trials, |rng| {
        let from_mu = rng.gen::<bool>();
        let o = if from_mu { sm.draw(rng) } else { sn.draw(rng) };
        (wm[o] >= wn[o]) == from_mu
    });
    let wins = outcomes.iter().filter(|&&w| w).count();
    let rate = wins as f64 / trials as f64;
    Ok(SwitzerReport {
        trials,
        wins,
        rate,
        stderr: binomial_stderr(predicted, trials),
        predicted,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisitsReport {
    pub target: usize,
    pub completed: usize,
    /// Trials that had not returned to e after [`STEP_CAP`] steps.
    pub censored: usize,
    pub mean_visits: f64,
    pub mean_return: f64,
    /// mean_visits / mean_return, and its delta-method standard error.
    pub ratio: f64,
    pub ratio_stderr: f64,
    /// 1/|G|.
    pub predicted: f64,
}

impl VisitsReport {
    pub fn within(&self, sigmas: f64) -> bool {
        (self.ratio - self.predicted).abs() <= sigmas * self.ratio_stderr.max(f64::EPSILON)
    }
}

/// Visits to `target` at times 0 ≤ t < T, with T the first return to e.
pub fn visits_before_return(nu: &Measure, target: usize, trials: usize, seed: u64) -> Result<VisitsReport> {
    let g = nu.group();
    g.element(target)?;
    check_trials(trials)?;
    let report = g.is_ergodic(&nu.support());
    if !report.ergodic {
        return Err(Error::NotErgodic(format!("{:?}", report.witness)));
    }
    let sampler = StepSampler::new(nu)?;
    let e = g.identity();
    let runs = run_trials(seed, trials, |rng| {
        let mut x = e;
        let mut visits = 0u64;
        for t in 1..=STEP_CAP {
            visits += (x == target) as u64;
            x = g.mul(sampler.draw(rng), x);
            if x == e {
                return Some((visits, t));
            }
        }
        None
    });
    let done: Vec<(f64, f64)> = runs.iter().flatten().map(|&(v, t)| (v as f64, t as f64)).collect();
    let completed = done.len();
    if completed < 2 {
        return Err(Error::Budget(format!("only {completed} of {trials} trials returned to e")));
    }
    let n = completed as f64;
    let mean_visits = done.iter().map(|d| d.0).sum::<f64>() / n;
    let mean_return = done.iter().map(|d| d.1).sum::<f64>() / n;
    let ratio = mean_visits / mean_return;
    let resid: Vec<f64> = done.iter().map(|(v, t)| v - ratio * t).collect();
    let (_, se) = mean_stderr(&resid).unwrap();
    Ok(VisitsReport {
        target,
        completed,
        censored: trials - completed,
        mean_visits,
        mean_return,
        ratio,
        ratio_stderr: se / mean_return,
        predicted: 1.0 / g.order() as f64,
    })
}
