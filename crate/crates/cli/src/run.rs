//! Dispatch of a resolved [`Job`] to the library and rendering of its rows.

use distgraph_core::distgraph::{check_n, edge_count, regular_degree, stirling_estimates, vertex_count};
use distgraph_core::exactcount::{
    analytic_m, analytic_m_exact, blockprofile_rooted_count, blockprofile_unrooted_count,
    bruteforce_monomorphisms, bruteforce_rooted_count, ext_sharp_p, poisson_p, threshold_p_star,
    threshold_p_star_alt, PartitionVector,
};
use distgraph_core::experiments::output::{to_csv, Report};
use distgraph_core::experiments::{
    convergence_report, ext_sweep, lln_check, poisson_experiment, threshold_sweep, uniformity_check,
};
use distgraph_core::patterns::{load_source, Parsed};
use distgraph_core::sampler::{tilde_fraction, ExtMode};
use distgraph_core::{DistGraph, Error, PatternGraph, Result, RootedNetwork, VertexWord};
use log::info;
use serde::Serialize;

use crate::args::{Format, Job, Method, TupleMode};

fn load_pattern(source: &str) -> Result<PatternGraph> {
    match load_source(source)? {
        Parsed::Pattern(g) => Ok(g),
        Parsed::Network(net) => Ok(net.graph().clone()),
    }
}

fn load_network(source: &str) -> Result<RootedNetwork> {
    match load_source(source)? {
        Parsed::Network(net) => Ok(net),
        Parsed::Pattern(_) => Err(Error::Precondition(format!("{source:?} has no roots"))),
    }
}

fn render<R: Serialize>(job: &Job, format: Format, rows: &[R]) -> Result<String> {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => Report::new(job, job.seed(), rows).to_json(),
    }
}

/// Validate what can be checked cheaply, before any work starts.
pub fn validate(job: &Job) -> Result<()> {
    for n in job.n_values() {
        check_n(n)?;
    }
    let positive = |v: u64, what: &str| {
        if v == 0 {
            Err(Error::Precondition(format!("{what} must be positive")))
        } else {
            Ok(())
        }
    };
    match job {
        Job::SampleSweep(a) => positive(a.trials, "trials"),
        Job::SampleLln(a) => positive(a.trials, "trials"),
        Job::SamplePoisson(a) => positive(a.trials, "trials"),
        Job::ExtSweep(a) => {
            positive(a.trials, "trials")?;
            a.filter.validate()?;
            if a.mode == TupleMode::Sampled {
                positive(a.tuples, "tuples")?;
            }
            Ok(())
        }
        Job::Uniformity(a) => {
            positive(a.samples, "samples")?;
            a.filter.validate()
        }
        Job::TildeFraction(a) => {
            positive(a.samples, "samples")?;
            a.filter.validate()
        }
        Job::CountRooted(a) => {
            if a.roots.is_empty() == a.blocks.is_empty() {
                return Err(Error::Precondition("give exactly one of --roots or --blocks".into()));
            }
            if a.injective && a.method != Method::Bruteforce {
                return Err(Error::Precondition("--injective needs --method bruteforce".into()));
            }
            if !a.blocks.is_empty() && a.method == Method::Bruteforce {
                return Err(Error::Precondition("brute force needs explicit --roots".into()));
            }
            Ok(())
        }
        Job::CountMono(a) => {
            if a.non_injective && a.method == Method::Bruteforce {
                return Err(Error::Precondition("--non-injective needs --method blockprofile".into()));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct InfoRow {
    n: u32,
    vertices: u64,
    n1: u64,
    edges: u128,
    stirling_vertices: f64,
    stirling_n1: f64,
}

#[derive(Serialize)]
struct PathologyRow {
    n: u32,
    budget: u64,
    found: bool,
    u: Option<String>,
    v: Option<String>,
    w: Option<String>,
    common_neighbors: Option<String>,
}

#[derive(Serialize)]
struct AnalyzeRow {
    vertices: usize,
    edges: usize,
    density: String,
    max_density: String,
    balanced: bool,
    strictly_balanced: bool,
    automorphisms: u64,
    roots: Option<String>,
    d: Option<usize>,
    k: Option<usize>,
    l: Option<usize>,
    network_density: Option<String>,
    network_strictly_balanced: Option<bool>,
    nontrivial: Option<bool>,
    c1: Option<u64>,
}

#[derive(Serialize)]
struct MonoRow {
    n: u32,
    method: Method,
    injective: bool,
    count: String,
    automorphisms: u64,
    copies: Option<String>,
}

#[derive(Serialize)]
struct RootedRow {
    n: u32,
    method: Method,
    injective: bool,
    block_sizes: String,
    x: String,
    count: String,
}

#[derive(Serialize)]
struct AnalyticRow {
    n: u32,
    k: usize,
    l: usize,
    m_kl: f64,
    m_kl_exact: String,
    p_star: Option<f64>,
    p_star_alt: Option<f64>,
    poisson_p: Option<f64>,
    ext_sharp_p: Option<f64>,
}

#[derive(Serialize)]
struct TildeRow {
    n: u32,
    d: usize,
    f: u64,
    estimate: f64,
    ci_low: f64,
    ci_high: f64,
    hits: u64,
    total: u64,
    exact: bool,
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(";")
}

/// Run the job and return the rendered output.
pub fn execute(job: &Job, format: Format) -> Result<String> {
    match job {
        Job::GraphInfo(a) => {
            let (stirling_vertices, stirling_n1) = stirling_estimates(a.n);
            let row = InfoRow {
                n: a.n,
                vertices: vertex_count(a.n),
                n1: regular_degree(a.n),
                edges: edge_count(a.n),
                stirling_vertices,
                stirling_n1,
            };
            render(job, format, &[row])
        }
        Job::GraphPathology(a) => {
            info!("searching for a triple without common neighbors at n={}", a.n);
            let g = DistGraph::build(a.n)?;
            let row = match g.find_no_common_neighbor_triple(a.budget, a.seed) {
                Some(t) => PathologyRow {
                    n: a.n,
                    budget: a.budget,
                    found: true,
                    u: Some(t[0].to_coords(a.n)),
                    v: Some(t[1].to_coords(a.n)),
                    w: Some(t[2].to_coords(a.n)),
                    common_neighbors: Some(g.common_neighbor_count(&t).to_string()),
                },
                None => PathologyRow {
                    n: a.n,
                    budget: a.budget,
                    found: false,
                    u: None,
                    v: None,
                    w: None,
                    common_neighbors: None,
                },
            };
            render(job, format, &[row])
        }
        Job::PatternAnalyze(a) => {
            let (g, net) = match load_source(&a.pattern)? {
                Parsed::Pattern(g) => (g, None),
                Parsed::Network(net) => (net.graph().clone(), Some(net)),
            };
            let row = AnalyzeRow {
                vertices: g.vcount(),
                edges: g.edge_count(),
                density: g.density().to_string(),
                max_density: g.max_density().to_string(),
                balanced: g.is_balanced(),
                strictly_balanced: g.is_strictly_balanced(),
                automorphisms: g.automorphism_count(),
                roots: net.as_ref().map(|r| join(r.roots())),
                d: net.as_ref().map(RootedNetwork::d),
                k: net.as_ref().map(RootedNetwork::k),
                l: net.as_ref().map(RootedNetwork::l),
                network_density: net.as_ref().map(|r| r.density().to_string()),
                network_strictly_balanced: net.as_ref().map(RootedNetwork::is_strictly_balanced),
                nontrivial: net.as_ref().map(RootedNetwork::is_nontrivial),
                c1: net.as_ref().map(RootedNetwork::root_fixing_automorphism_count),
            };
            render(job, format, &[row])
        }
        Job::CountMono(a) => {
            let f = load_pattern(&a.pattern)?;
            let injective = !a.non_injective;
            let count = match a.method {
                Method::Blockprofile => blockprofile_unrooted_count(&f, a.n, injective)?,
                Method::Bruteforce => bruteforce_monomorphisms(&f, &DistGraph::build(a.n)?),
            };
            let aut = f.automorphism_count();
            let row = MonoRow {
                n: a.n,
                method: a.method,
                injective,
                copies: injective.then(|| (&count / aut).to_string()),
                count: count.to_string(),
                automorphisms: aut,
            };
            render(job, format, &[row])
        }
        Job::CountRooted(a) => {
            let net = load_network(&a.network)?;
            let (pv, count) = if a.roots.is_empty() {
                let d = a.blocks.len().trailing_zeros() as usize;
                let pv = PartitionVector::from_block_sizes(a.n, d, a.blocks.clone())?;
                let count = blockprofile_rooted_count(&net, &pv, a.n)?;
                (pv, count)
            } else {
                let roots = a
                    .roots
                    .iter()
                    .map(|s| {
                        VertexWord::from_coords(s)
                            .filter(|_| s.len() == a.n as usize)
                            .ok_or_else(|| Error::Precondition(format!("root {s:?} is not a 0/1 string of length {}", a.n)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let pv = PartitionVector::from_roots(a.n, &roots)?;
                let count = match a.method {
                    Method::Blockprofile => blockprofile_rooted_count(&net, &pv, a.n)?,
                    Method::Bruteforce => {
                        if roots.len() != net.d() {
                            return Err(Error::Precondition(format!(
                                "network has {} roots, got {} images",
                                net.d(),
                                roots.len()
                            )));
                        }
                        bruteforce_rooted_count(&net, &roots, &DistGraph::build(a.n)?, a.injective)
                    }
                };
                (pv, count)
            };
            let row = RootedRow {
                n: a.n,
                method: a.method,
                injective: a.injective,
                block_sizes: join(pv.block_sizes()),
                x: join(pv.x()),
                count: count.to_string(),
            };
            render(job, format, &[row])
        }
        Job::CountAnalytic(a) => {
            let (f, net) = match load_source(&a.pattern)? {
                Parsed::Pattern(g) => (g, None),
                Parsed::Network(net) => (net.graph().clone(), Some(net)),
            };
            let row = match &net {
                None => {
                    let (k, l) = (f.vcount(), f.edge_count());
                    let has_edges = l > 0;
                    AnalyticRow {
                        n: a.n,
                        k,
                        l,
                        m_kl: analytic_m(k as u32, l as u32, a.n),
                        m_kl_exact: analytic_m_exact(k as u32, l as u32, a.n).to_string(),
                        p_star: has_edges.then(|| threshold_p_star(&f, a.n)).transpose()?,
                        p_star_alt: has_edges.then(|| threshold_p_star_alt(&f, a.n)).transpose()?,
                        poisson_p: has_edges.then(|| poisson_p(&f, a.n, a.c)).transpose()?,
                        ext_sharp_p: None,
                    }
                }
                Some(net) => AnalyticRow {
                    n: a.n,
                    k: net.k(),
                    l: net.l(),
                    m_kl: analytic_m(net.k() as u32, net.l() as u32, a.n),
                    m_kl_exact: analytic_m_exact(net.k() as u32, net.l() as u32, a.n).to_string(),
                    p_star: None,
                    p_star_alt: None,
                    poisson_p: None,
                    ext_sharp_p: Some(ext_sharp_p(net, a.n)?),
                },
            };
            render(job, format, &[row])
        }
        Job::SampleSweep(a) => {
            let f = load_pattern(&a.pattern)?;
            info!("threshold sweep: {} grid points x {} trials", a.alphas.len(), a.trials);
            let r = threshold_sweep(&f, a.n, &a.alphas, a.trials, a.seed)?;
            render(job, format, &r.rows)
        }
        Job::SampleLln(a) => {
            let f = load_pattern(&a.pattern)?;
            info!("law of large numbers check: {} trials", a.trials);
            let r = lln_check(&f, a.n, a.p, a.trials, a.seed)?;
            render(job, format, &r.rows())
        }
        Job::SamplePoisson(a) => {
            let f = load_pattern(&a.pattern)?;
            info!("Poisson experiment: {} trials", a.trials);
            let r = poisson_experiment(&f, a.n, a.c, a.trials, a.seed)?;
            render(job, format, &r.rows())
        }
        Job::ExtSweep(a) => {
            let net = load_network(&a.network)?;
            let mode = match a.mode {
                TupleMode::Exhaustive => ExtMode::Exhaustive,
                TupleMode::Sampled => ExtMode::Sampled {
                    tuples: a.tuples,
                    seed: a.seed,
                },
            };
            info!("extension sweep: {} grid points x {} trials", a.multipliers.len(), a.trials);
            let r = ext_sweep(&net, a.n, &a.multipliers, a.trials, &a.filter, mode, a.seed)?;
            render(job, format, &r.rows)
        }
        Job::Uniformity(a) => {
            let net = load_network(&a.network)?;
            info!("uniformity check over n = {:?}", a.n_list);
            let rows = uniformity_check(&net, &a.network, &a.n_list, &a.filter, a.samples, a.seed)?;
            render(job, format, &rows)
        }
        Job::Convergence(a) => {
            let f = load_pattern(&a.pattern)?;
            let rows = convergence_report(&f, &a.n_list)?;
            render(job, format, &rows)
        }
        Job::TildeFraction(a) => {
            let r = tilde_fraction(a.n, a.d, &a.filter, a.samples, a.seed)?;
            let row = TildeRow {
                n: a.n,
                d: a.d,
                f: a.filter.bound(a.n),
                estimate: r.estimate,
                ci_low: r.ci_low,
                ci_high: r.ci_high,
                hits: r.hits,
                total: r.total,
                exact: r.exact,
            };
            render(job, format, &[row])
        }
    }
}
