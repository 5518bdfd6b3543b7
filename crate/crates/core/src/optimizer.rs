//! Derivative-free maximization over the probability simplex.
//!
//! A generating-set (compass) search: each iteration polls the projected
//! moves `x ± step·e_k`, accepts the best strict improvement, and halves the
//! step when nothing improves. Iterates are kept feasible by Euclidean
//! projection onto the simplex. Results are deterministic for a given seed;
//! the seed only permutes the poll order, which decides ties.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    pub initial_step: f64,
    pub contraction: f64,
    /// Stop once the step falls below this.
    pub tolerance: f64,
    /// Maximum objective evaluations per search, including the start point.
    pub budget: usize,
    /// Evaluate poll batches and independent starts on the rayon pool.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            initial_step: 0.25,
            contraction: 0.5,
            tolerance: 1e-4,
            budget: 1000,
            parallel: false,
        }
    }
}

/// Maximize `objective` over the `dimension`-simplex starting at `initial`.
#[derive(Debug, Clone)]
pub struct OptProblem<F> {
    pub objective: F,
    pub dimension: usize,
    pub initial: Vec<f64>,
    pub options: SearchOptions,
}

impl<F> OptProblem<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    /// A problem starting from the barycenter.
    pub fn new(dimension: usize, objective: F, options: SearchOptions) -> Self {
        OptProblem {
            objective,
            dimension,
            initial: barycenter(dimension),
            options,
        }
    }

    fn validate(&self) -> Result<()> {
        let o = &self.options;
        if self.dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if o.budget == 0 {
            return Err(Error::InvalidArgument("evaluation budget must be at least 1".into()));
        }
        if !(o.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if !(o.initial_step > 0.0) || !(o.contraction > 0.0 && o.contraction < 1.0) {
            return Err(Error::InvalidArgument(
                "initial step must be positive and contraction in (0, 1)".into(),
            ));
        }
        check_on_simplex(&self.initial, self.dimension)
    }
}

fn check_on_simplex(x: &[f64], dimension: usize) -> Result<()> {
    if x.len() != dimension {
        return Err(Error::DimensionMismatch {
            expected: dimension,
            got: x.len(),
        });
    }
    let sum: f64 = x.iter().sum();
    if x.iter().any(|v| !(*v >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "start point {x:?} is not on the simplex"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    /// 1-based evaluation number across the whole run.
    pub eval: usize,
    /// Index of the start this evaluation belongs to.
    pub start: usize,
    pub alpha: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptResult {
    pub best_alpha: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    pub trace: Vec<TracePoint>,
    /// Whether the step size of the winning search fell below tolerance.
    pub converged: bool,
    pub final_step: f64,
    pub wall_time: Duration,
}

pub fn barycenter(k: usize) -> Vec<f64> {
    vec![1.0 / k as f64; k]
}

/// Euclidean projection onto `{x : x ≥ 0, Σx = 1}`.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if u - t > 0.0 {
            tau = t;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

/// Uniform sample from the simplex (Dirichlet with unit concentrations).
pub fn random_simplex_point(k: usize, rng: &mut impl rand::Rng) -> Vec<f64> {
    let draws: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const START_STREAM: u64 = 1 << 40;

struct Search<'a, F> {
    objective: &'a F,
    options: &'a SearchOptions,
    start: usize,
    trace: Vec<TracePoint>,
}

impl<F> Search<'_, F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn record(&mut self, alpha: Vec<f64>, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFinite { value, alpha });
        }
        self.trace.push(TracePoint {
            eval: self.trace.len() + 1,
            start: self.start,
            alpha,
            value,
        });
        Ok(())
    }

    fn evaluate_start(&mut self, x: &[f64]) -> Result<f64> {
        let f = (self.objective)(x);
        self.record(x.to_vec(), f)?;
        Ok(f)
    }

    /// Runs from an already evaluated start; `budget` includes that evaluation.
    fn run(&mut self, mut x: Vec<f64>, mut fx: f64, budget: usize, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let k = x.len();
        let mut step = self.options.initial_step;
        let mut directions: Vec<(usize, f64)> =
            (0..k).flat_map(|i| [(i, 1.0), (i, -1.0)]).collect();
        loop {
            if step < self.options.tolerance {
                return Ok(Outcome { x, fx, converged: true, step });
            }
            let remaining = budget.saturating_sub(self.trace.len());
            if remaining == 0 {
                return Ok(Outcome { x, fx, converged: false, step });
            }
            directions.shuffle(rng);
            let mut candidates: Vec<Vec<f64>> = Vec::with_capacity(2 * k);
            for &(i, sign) in &directions {
                let mut moved = x.clone();
                moved[i] += sign * step;
                let y = project_to_simplex(&moved);
                let displaced = y.iter().zip(&x).any(|(a, b)| (a - b).abs() > 1e-15);
                if displaced && !candidates.contains(&y) {
                    candidates.push(y);
                }
            }
            candidates.truncate(remaining);
            if candidates.is_empty() {
                step *= self.options.contraction;
                continue;
            }
            let values: Vec<f64> = if self.options.parallel {
                candidates.par_iter().map(|y| (self.objective)(y)).collect()
            } else {
                candidates.iter().map(|y| (self.objective)(y)).collect()
            };
            let mut best: Option<usize> = None;
            for (i, (y, &f)) in candidates.iter().zip(&values).enumerate() {
                self.record(y.clone(), f)?;
                if f > fx && best.is_none_or(|b| f > values[b]) {
                    best = Some(i);
                }
            }
            match best {
                Some(i) => {
                    fx = values[i];
                    x = candidates.swap_remove(i);
                }
                None => step *= self.options.contraction,
            }
        }
    }
}

struct Outcome {
    x: Vec<f64>,
    fx: f64,
    converged: bool,
    step: f64,
}

/// Generating-set search from `p.initial`.
pub fn pattern_search<F>(p: &OptProblem<F>, seed: u64) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    multistart_with(p, std::slice::from_ref(&p.initial), None, seed)
}

/// Runs from the barycenter plus `n_starts − 1` uniform random simplex points.
pub fn multistart<F>(p: &OptProblem<F>, n_starts: usize, seed: u64) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if n_starts == 0 {
        return Err(Error::InvalidArgument("n_starts must be at least 1".into()));
    }
    let starts = start_points(p.dimension, &[], n_starts - 1, seed);
    multistart_with(p, &starts, None, seed)
}

/// Barycenter, then `extra` in order, then `n_random` uniform simplex points.
pub fn start_points(k: usize, extra: &[Vec<f64>], n_random: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng_for(seed, START_STREAM);
    let mut starts = vec![barycenter(k)];
    starts.extend(extra.iter().cloned());
    starts.extend((0..n_random).map(|_| random_simplex_point(k, &mut rng)));
    starts
}

/// Searches from every start and keeps the best.
///
/// Each search gets `p.options.budget` evaluations. With `total_budget`, one
/// evaluation is reserved for every start point that fits and the searches
/// share the rest in start order.
pub fn multistart_with<F>(
    p: &OptProblem<F>,
    starts: &[Vec<f64>],
    total_budget: Option<usize>,
    seed: u64,
) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    p.validate()?;
    if starts.is_empty() {
        return Err(Error::InvalidArgument("at least one start point is required".into()));
    }
    for s in starts {
        check_on_simplex(s, p.dimension)?;
    }
    if total_budget == Some(0) {
        return Err(Error::InvalidArgument("evaluation budget must be at least 1".into()));
    }
    let clock = Instant::now();

    let run_one = |index: usize, start: &Vec<f64>, budget: usize| -> Result<(Vec<TracePoint>, Outcome)> {
        let mut search = Search {
            objective: &p.objective,
            options: &p.options,
            start: index,
            trace: Vec::new(),
        };
        let x = project_to_simplex(start);
        let fx = search.evaluate_start(&x)?;
        let mut rng = rng_for(seed, index as u64);
        let outcome = search.run(x, fx, budget, &mut rng)?;
        Ok((search.trace, outcome))
    };

    let runs: Vec<(Vec<TracePoint>, Outcome)> = match total_budget {
        None if p.options.parallel => starts
            .par_iter()
            .enumerate()
            .map(|(i, s)| run_one(i, s, p.options.budget))
            .collect::<Result<_>>()?,
        None => starts
            .iter()
            .enumerate()
            .map(|(i, s)| run_one(i, s, p.options.budget))
            .collect::<Result<_>>()?,
        Some(total) => {
            let used_by_starts = starts.len().min(total);
            let mut spare = total - used_by_starts;
            let mut runs = Vec::with_capacity(used_by_starts);
            for (i, s) in starts.iter().take(used_by_starts).enumerate() {
                let budget = (1 + spare).min(p.options.budget);
                let run = run_one(i, s, budget)?;
                spare -= run.0.len() - 1;
                runs.push(run);
            }
            runs
        }
    };

    let mut trace = Vec::with_capacity(runs.iter().map(|r| r.0.len()).sum());
    let mut best: Option<(usize, &Outcome)> = None;
    for (i, (points, outcome)) in runs.iter().enumerate() {
        if best.is_none_or(|(_, b)| outcome.fx > b.fx) {
            best = Some((i, outcome));
        }
        for tp in points {
            trace.push(TracePoint {
                eval: trace.len() + 1,
                ..tp.clone()
            });
        }
    }
    let (_, best) = best.expect("at least one run");
    Ok(OptResult {
        best_alpha: best.x.clone(),
        best_value: best.fx,
        evaluations: trace.len(),
        trace,
        converged: best.converged,
        final_step: best.step,
        wall_time: clock.elapsed(),
    })
}
