//! Seeded experiment drivers.
//!
//! Every driver is a pure function of its arguments. Trial `t` of grid row
//! `r` draws from ChaCha stream `(r << 32) | t` of the master seed, trials
//! are evaluated in parallel and folded in trial order, so results do not
//! depend on the size of the worker pool.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::colex_unrank;
use crate::distgraph::{check_n, DistGraph, VertexWord};
use crate::error::{Error, Result};
use crate::exactcount::{
    analytic_m, analytic_m_exact, blockprofile_rooted_count, blockprofile_unrooted_count,
    exact_copy_count, ext_sharp_p, poisson_p, threshold_p_star, PartitionVector,
};
use crate::patterns::{PatternGraph, RootedNetwork};
use crate::sampler::{check_ext, count_copies, sample_gp, ExtMode, RootFilter, SampleSeed};
use crate::stats::{poisson_pmf, quantile_sorted, tv_to_poisson, wilson_interval};
use crate::BigCount;

pub mod output;

pub const MIN_SWEEP_TRIALS: u64 = 50;
pub const MIN_POISSON_TRIALS: u64 = 1000;

/// Default multiplier grid: 9 log-spaced points from 0.1 to 10.
pub fn default_grid() -> Vec<f64> {
    (0..9).map(|i| 10f64.powf(-1.0 + i as f64 * 0.25)).collect()
}

fn stream(row: usize, trial: u64) -> u64 {
    ((row as u64) << 32) | trial
}

fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

fn ratio_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// One grid point of a probability sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u32,
    /// Multiplier applied to the reference probability.
    pub alpha: f64,
    pub p: f64,
    /// Whether `alpha * p_ref` exceeded 1 and was clamped.
    pub clamped: bool,
    pub trials: u64,
    pub hit_count: u64,
    pub estimate: f64,
    pub wilson_ci_low: f64,
    pub wilson_ci_high: f64,
    /// Mean copy count (copy sweeps only).
    pub mean_copies: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

fn check_grid(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::precondition(format!("{what} must be nonempty")));
    }
    if values.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::precondition(format!("{what} must be positive and finite")));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::precondition(format!("{what} must be strictly ascending")));
    }
    Ok(())
}

fn sweep_row(n: u32, alpha: f64, p_ref: f64, trials: u64, hits: u64, copies: Option<f64>) -> SweepRow {
    let raw = alpha * p_ref;
    let (lo, hi) = wilson_interval(hits, trials);
    SweepRow {
        n,
        alpha,
        p: raw.min(1.0),
        clamped: raw > 1.0,
        trials,
        hit_count: hits,
        estimate: hits as f64 / trials as f64,
        wilson_ci_low: lo,
        wilson_ci_high: hi,
        mean_copies: copies,
    }
}

/// Estimate `P(X_F > 0)` at `p = alpha * p*(F, n)` for each `alpha`.
pub fn threshold_sweep(
    f: &PatternGraph,
    n: u32,
    alphas: &[f64],
    trials: u64,
    seed: u64,
) -> Result<SweepResult> {
    check_grid(alphas, "alphas")?;
    if trials < MIN_SWEEP_TRIALS {
        return Err(Error::precondition(format!(
            "trials must be at least {MIN_SWEEP_TRIALS}, got {trials}"
        )));
    }
    let g = DistGraph::build(n)?;
    let p_star = threshold_p_star(f, n)?;
    let mut rows = Vec::with_capacity(alphas.len());
    for (r, &alpha) in alphas.iter().enumerate() {
        let p = (alpha * p_star).min(1.0);
        if alpha * p_star > 1.0 {
            log::warn!("alpha={alpha}: p clamped to 1");
        }
        let counts: Vec<BigUint> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let s = sample_gp(&g, p, SampleSeed::new(seed, stream(r, t)))?;
                count_copies(f, &s)
            })
            .collect::<Result<_>>()?;
        let hits = counts.iter().filter(|c| **c > BigUint::ZERO).count() as u64;
        let total: BigUint = counts.iter().sum();
        let mean = big_to_f64(&total) / trials as f64;
        rows.push(sweep_row(n, alpha, p_star, trials, hits, Some(mean)));
    }
    Ok(SweepResult { rows })
}

/// Empirical quantiles of `|X_F / E X_F - 1|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LlnResult {
    pub n: u32,
    pub p: f64,
    pub trials: u64,
    pub expected: f64,
    pub quantiles: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LlnRow {
    pub n: u32,
    pub p: f64,
    pub trials: u64,
    pub expected: f64,
    pub quantile: f64,
    pub deviation: f64,
}

impl LlnResult {
    pub fn quantile(&self, q: f64) -> Option<f64> {
        self.quantiles.iter().find(|(k, _)| *k == q).map(|&(_, v)| v)
    }

    pub fn rows(&self) -> Vec<LlnRow> {
        self.quantiles
            .iter()
            .map(|&(quantile, deviation)| LlnRow {
                n: self.n,
                p: self.p,
                trials: self.trials,
                expected: self.expected,
                quantile,
                deviation,
            })
            .collect()
    }
}

pub const LLN_QUANTILES: [f64; 5] = [0.5, 0.9, 0.95, 0.99, 1.0];

pub fn lln_check(f: &PatternGraph, n: u32, p: f64, trials: u64, seed: u64) -> Result<LlnResult> {
    if trials == 0 {
        return Err(Error::precondition("trials must be positive"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::precondition(format!("p must lie in [0, 1], got {p}")));
    }
    let copies = exact_copy_count(f, n)?;
    let expected = big_to_f64(&copies) * p.powi(f.edge_count() as i32);
    if expected == 0.0 {
        return Err(Error::precondition("E[X_F] is zero; relative deviation undefined"));
    }
    let g = DistGraph::build(n)?;
    let mut deviations: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = sample_gp(&g, p, SampleSeed::new(seed, stream(0, t)))?;
            let x = big_to_f64(&count_copies(f, &s)?);
            Ok((x / expected - 1.0).abs())
        })
        .collect::<Result<_>>()?;
    deviations.sort_by(f64::total_cmp);
    let quantiles = LLN_QUANTILES
        .iter()
        .map(|&q| (q, quantile_sorted(&deviations, q)))
        .collect();
    Ok(LlnResult {
        n,
        p,
        trials,
        expected,
        quantiles,
    })
}

/// Empirical law of `X_F` at the Poisson scaling.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonResult {
    pub n: u32,
    pub c: f64,
    pub p: f64,
    pub trials: u64,
    /// `c^l / a`.
    pub lambda_theory: f64,
    /// Exact finite-`n` mean: copies in `G` times `p^l`.
    pub lambda_exact: f64,
    /// `(count, empirical frequency)` for every observed count up to the max.
    pub empirical_pmf: Vec<(u64, f64)>,
    pub empirical_mean: f64,
    pub tv_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoissonRow {
    pub n: u32,
    pub c: f64,
    pub p: f64,
    pub trials: u64,
    pub lambda_theory: f64,
    pub lambda_exact: f64,
    pub empirical_mean: f64,
    pub tv_distance: f64,
    pub count: u64,
    pub empirical: f64,
    pub poisson: f64,
}

impl PoissonResult {
    /// Allowed gap between the empirical mean and `lambda_exact`.
    pub fn mean_tolerance(&self) -> f64 {
        4.0 * (self.lambda_exact / self.trials as f64).sqrt()
    }

    pub fn rows(&self) -> Vec<PoissonRow> {
        let pois = poisson_pmf(self.lambda_exact, self.empirical_pmf.len().saturating_sub(1));
        self.empirical_pmf
            .iter()
            .zip(pois)
            .map(|(&(count, empirical), poisson)| PoissonRow {
                n: self.n,
                c: self.c,
                p: self.p,
                trials: self.trials,
                lambda_theory: self.lambda_theory,
                lambda_exact: self.lambda_exact,
                empirical_mean: self.empirical_mean,
                tv_distance: self.tv_distance,
                count,
                empirical,
                poisson,
            })
            .collect()
    }
}

pub fn poisson_experiment(
    f: &PatternGraph,
    n: u32,
    c: f64,
    trials: u64,
    seed: u64,
) -> Result<PoissonResult> {
    if !f.is_strictly_balanced() {
        return Err(Error::precondition("the Poisson experiment needs a strictly balanced pattern"));
    }
    if trials < MIN_POISSON_TRIALS {
        return Err(Error::precondition(format!(
            "trials must be at least {MIN_POISSON_TRIALS}, got {trials}"
        )));
    }
    let p = poisson_p(f, n, c)?;
    let l = f.edge_count() as i32;
    let lambda_theory = c.powi(l) / f.automorphism_count() as f64;
    let lambda_exact = big_to_f64(&exact_copy_count(f, n)?) * p.powi(l);
    let g = DistGraph::build(n)?;
    let counts: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = sample_gp(&g, p, SampleSeed::new(seed, stream(0, t)))?;
            Ok(count_copies(f, &s)?.to_u64().unwrap_or(u64::MAX))
        })
        .collect::<Result<_>>()?;
    let max = counts.iter().copied().max().unwrap_or(0) as usize;
    let mut hist = vec![0u64; max + 1];
    for &x in &counts {
        hist[x as usize] += 1;
    }
    let pmf: Vec<f64> = hist.iter().map(|&h| h as f64 / trials as f64).collect();
    let empirical_mean = counts.iter().map(|&x| x as f64).sum::<f64>() / trials as f64;
    Ok(PoissonResult {
        n,
        c,
        p,
        trials,
        lambda_theory,
        lambda_exact,
        tv_distance: tv_to_poisson(&pmf, lambda_exact),
        empirical_pmf: pmf.into_iter().enumerate().map(|(k, v)| (k as u64, v)).collect(),
        empirical_mean,
    })
}

/// Estimate `P(Ext_f(R, H))` at `p = m * p_ext(R, H, n)` for each `m`.
pub fn ext_sweep(
    net: &RootedNetwork,
    n: u32,
    multipliers: &[f64],
    trials: u64,
    filter: &RootFilter,
    mode: ExtMode,
    seed: u64,
) -> Result<SweepResult> {
    check_grid(multipliers, "multipliers")?;
    if trials == 0 {
        return Err(Error::precondition("trials must be positive"));
    }
    if !net.is_nontrivial() || !net.is_strictly_balanced() {
        return Err(Error::precondition(
            "the extension sweep needs a nontrivial strictly balanced network",
        ));
    }
    filter.validate()?;
    let g = DistGraph::build(n)?;
    let p_ext = ext_sharp_p(net, n)?;
    let mut rows = Vec::with_capacity(multipliers.len());
    for (r, &m) in multipliers.iter().enumerate() {
        let p = (m * p_ext).min(1.0);
        if m * p_ext > 1.0 {
            log::warn!("multiplier={m}: p clamped to 1");
        }
        let holds: Vec<bool> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let id = stream(r, t);
                let s = sample_gp(&g, p, SampleSeed::new(seed, id))?;
                let trial_mode = match mode {
                    ExtMode::Exhaustive => ExtMode::Exhaustive,
                    ExtMode::Sampled { tuples, seed } => ExtMode::Sampled {
                        tuples,
                        seed: seed.wrapping_add(id),
                    },
                };
                Ok(check_ext(&s, net, filter, trial_mode)?.holds)
            })
            .collect::<Result<_>>()?;
        let hits = holds.iter().filter(|&&h| h).count() as u64;
        rows.push(sweep_row(n, m, p_ext, trials, hits, None));
    }
    Ok(SweepResult { rows })
}

/// Spread of exact extension counts across sampled partition vectors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformityResult {
    pub n: u32,
    pub network: String,
    pub f: u64,
    pub samples: u64,
    pub distinct_x: usize,
    /// Each distinct x-vector with its sample multiplicity and exact count.
    #[serde(skip)]
    pub per_x: Vec<(Vec<i64>, u64, BigCount)>,
    #[serde(serialize_with = "output::big_string")]
    pub min_count: BigCount,
    #[serde(serialize_with = "output::big_string")]
    pub max_count: BigCount,
    /// `max / min - 1`.
    pub spread: f64,
    pub reference_m: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

pub fn uniformity_check(
    net: &RootedNetwork,
    label: &str,
    n_list: &[u32],
    filter: &RootFilter,
    samples_per_n: u64,
    seed: u64,
) -> Result<Vec<UniformityResult>> {
    if net.d() > 2 || net.k() > 2 {
        return Err(Error::precondition("uniformity check supports d <= 2 and k <= 2"));
    }
    if samples_per_n == 0 {
        return Err(Error::precondition("samples per n must be positive"));
    }
    filter.validate()?;
    let mut out = Vec::with_capacity(n_list.len());
    for (r, &n) in n_list.iter().enumerate() {
        check_n(n)?;
        let bound = filter.bound(n);
        let n_vertices = crate::distgraph::vertex_count(n);
        let mut rng = SampleSeed::new(seed, stream(r, 0)).rng();
        let mut seen: BTreeMap<Vec<i64>, (PartitionVector, u64)> = BTreeMap::new();
        let mut accepted = 0u64;
        let mut attempts = 0u64;
        while accepted < samples_per_n && attempts < samples_per_n.saturating_mul(1000) {
            attempts += 1;
            let roots: Vec<VertexWord> = (0..net.d())
                .map(|_| VertexWord(colex_unrank(rng.random_range(0..n_vertices), n, n / 2)))
                .collect();
            let pv = PartitionVector::from_roots(n, &roots)?;
            if pv.max_abs_x() > bound {
                continue;
            }
            accepted += 1;
            seen.entry(pv.x().to_vec()).or_insert((pv, 0)).1 += 1;
        }
        if accepted == 0 {
            return Err(Error::precondition(format!(
                "no admissible root tuple at n={n}; the root filter is too strict"
            )));
        }
        let per_x: Vec<(Vec<i64>, u64, BigCount)> = seen
            .into_iter()
            .map(|(x, (pv, mult))| Ok((x, mult, blockprofile_rooted_count(net, &pv, n)?)))
            .collect::<Result<_>>()?;
        let min_count = per_x.iter().map(|t| &t.2).min().cloned().expect("nonempty");
        let max_count = per_x.iter().map(|t| &t.2).max().cloned().expect("nonempty");
        let spread = if min_count == BigUint::ZERO {
            f64::INFINITY
        } else {
            ratio_to_f64(&BigRational::new(max_count.clone().into(), min_count.clone().into())) - 1.0
        };
        let reference_m = analytic_m(net.k() as u32, net.l() as u32, n);
        let m_exact = analytic_m_exact(net.k() as u32, net.l() as u32, n);
        let ratio = |c: &BigCount| ratio_to_f64(&(BigRational::from_integer(c.clone().into()) / &m_exact));
        out.push(UniformityResult {
            n,
            network: label.to_string(),
            f: bound,
            samples: accepted,
            distinct_x: per_x.len(),
            min_ratio: ratio(&min_count),
            max_ratio: ratio(&max_count),
            per_x,
            min_count,
            max_count,
            spread,
            reference_m,
        });
    }
    Ok(out)
}

/// Exact monomorphism counts against `M(k, l)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    #[serde(serialize_with = "output::big_string")]
    pub exact_monomorphisms: BigCount,
    pub m_kl: f64,
    pub ratio: f64,
    /// The ratio as a reduced fraction.
    #[serde(serialize_with = "output::rational_string")]
    pub ratio_exact: BigRational,
}

pub const MAX_CONVERGENCE_VERTICES: usize = 5;

pub fn convergence_report(f: &PatternGraph, n_list: &[u32]) -> Result<Vec<ConvergenceRow>> {
    if f.vcount() > MAX_CONVERGENCE_VERTICES {
        return Err(Error::precondition(format!(
            "convergence report supports patterns with at most {MAX_CONVERGENCE_VERTICES} vertices"
        )));
    }
    let (k, l) = (f.vcount() as u32, f.edge_count() as u32);
    n_list
        .iter()
        .map(|&n| {
            let mono = blockprofile_unrooted_count(f, n, true)?;
            let m_exact = analytic_m_exact(k, l, n);
            let ratio_exact = BigRational::from_integer(mono.clone().into()) / m_exact;
            Ok(ConvergenceRow {
                n,
                exact_monomorphisms: mono,
                m_kl: analytic_m(k, l, n),
                ratio: ratio_to_f64(&ratio_exact),
                ratio_exact,
            })
        })
        .collect()
}
