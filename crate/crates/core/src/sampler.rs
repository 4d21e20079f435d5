//! Random subgraphs `G_p` of the distance graph, copy counting, and the
//! restricted extension property over well-spread root tuples.
//!
//! Randomness comes from ChaCha8 streams: a trial is identified by
//! `(master, stream)` and consumes its stream in a fixed order, so samples
//! are reproducible regardless of which worker draws them.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{colex_rank, colex_unrank, falling_factorial};
use crate::distgraph::{vertex_count, DistGraph, VertexWord};
use crate::error::{Error, Result};
use crate::exactcount::PartitionVector;
use crate::patterns::{PatternGraph, RootedNetwork};
use crate::BigCount;

/// Above this `p` (or for `n <= 8`) every base edge gets its own draw.
pub const DENSE_P: f64 = 0.05;

/// Largest `N^d` accepted by exhaustive extension checks.
pub const EXHAUSTIVE_TUPLE_BUDGET: u128 = 10_000_000;

/// Largest `N^d` for which [`tilde_fraction`] enumerates instead of sampling.
pub const EXACT_FRACTION_BUDGET: u128 = 1_000_000;

pub const MAX_COPY_PATTERN_VERTICES: usize = 6;

/// Identity of one random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleSeed {
    pub master: u64,
    pub stream: u64,
}

impl SampleSeed {
    pub fn new(master: u64, stream: u64) -> SampleSeed {
        SampleSeed { master, stream }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

/// A spanning subgraph of a [`DistGraph`], stored as sorted edge pairs of
/// vertex indices plus compressed per-vertex neighbor lists.
#[derive(Clone, Debug)]
pub struct SampledGraph<'g> {
    base: &'g DistGraph,
    p: f64,
    seed: Option<SampleSeed>,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

/// Draw `G_p`: every base edge retained independently with probability `p`.
///
/// Sparse regime: the edge count is drawn from `Binomial(N N1 / 2, p)` and
/// that many distinct edges are drawn uniformly (a uniform vertex, then a
/// uniform neighbor by unranking, rejecting repeats). Dense regime: base
/// edges `(i, j)`, `i < j`, are visited in index order with one Bernoulli
/// draw each.
pub fn sample_gp(g: &DistGraph, p: f64, seed: SampleSeed) -> Result<SampledGraph<'_>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::precondition(format!("p must lie in [0, 1], got {p}")));
    }
    let mut rng = seed.rng();
    let edges = if p == 0.0 {
        Vec::new()
    } else if p > DENSE_P || g.n() <= 8 {
        dense_edges(g, p, &mut rng)
    } else {
        sparse_edges(g, p, &mut rng)
    };
    let mut s = SampledGraph::assemble(g, edges);
    s.p = p;
    s.seed = Some(seed);
    Ok(s)
}

fn dense_edges(g: &DistGraph, p: f64, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for i in 0..g.vertex_count() {
        let v = g.vertex(i);
        for w in g.neighbor_words(v) {
            let j = colex_rank(w.0) as usize;
            if j > i && (p >= 1.0 || rng.random_bool(p)) {
                edges.push((i as u32, j as u32));
            }
        }
    }
    edges
}

fn sparse_edges(g: &DistGraph, p: f64, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let total = g.edge_count() as u64;
    let target = Binomial::new(total, p).expect("valid binomial").sample(rng) as usize;
    let n_vertices = g.vertex_count();
    let mut seen: HashSet<(u32, u32)> = HashSet::with_capacity(target);
    let mut edges = Vec::with_capacity(target);
    while edges.len() < target {
        let i = rng.random_range(0..n_vertices);
        let which = rng.random_range(0..g.n1());
        let j = colex_rank(g.nth_neighbor(g.vertex(i), which).0) as usize;
        let key = (i.min(j) as u32, i.max(j) as u32);
        if seen.insert(key) {
            edges.push(key);
        }
    }
    edges
}

impl<'g> SampledGraph<'g> {
    /// Build from an explicit edge list of vertex-index pairs. Every pair
    /// must be an edge of `base`.
    pub fn from_edges(base: &'g DistGraph, edges: &[(u32, u32)]) -> Result<SampledGraph<'g>> {
        let n_vertices = base.vertex_count() as u32;
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::precondition(format!("edge ({a}, {b}) out of range")));
            }
            if !base.adjacent(base.vertex(a as usize), base.vertex(b as usize)) {
                return Err(Error::precondition(format!(
                    "({a}, {b}) is not an edge of the distance graph"
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(SampledGraph::assemble(base, normalized))
    }

    fn assemble(base: &'g DistGraph, mut edges: Vec<(u32, u32)>) -> SampledGraph<'g> {
        edges.sort_unstable();
        let n_vertices = base.vertex_count();
        let mut degree = vec![0usize; n_vertices];
        for &(a, b) in &edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = vec![0usize; n_vertices + 1];
        for i in 0..n_vertices {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n_vertices]];
        for &(a, b) in &edges {
            targets[fill[a as usize]] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        for i in 0..n_vertices {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        SampledGraph {
            base,
            p: f64::NAN,
            seed: None,
            edges,
            offsets,
            targets,
        }
    }

    pub fn base(&self) -> &'g DistGraph {
        self.base
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> Option<SampleSeed> {
        self.seed
    }

    /// Retained edges `(i, j)`, `i < j`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    /// The same sample with every edge at vertex `i` removed.
    pub fn without_vertex_edges(&self, i: usize) -> SampledGraph<'g> {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| a as usize != i && b as usize != i)
            .collect();
        SampledGraph::assemble(self.base, edges)
    }
}

struct CopySearch<'a, 'g> {
    s: &'a SampledGraph<'g>,
    order: Vec<usize>,
    steps: Vec<Vec<usize>>,
    limit: u128,
}

impl CopySearch<'_, '_> {
    fn run(&self) -> u128 {
        let mut images = Vec::with_capacity(self.order.len());
        let mut found = 0u128;
        self.descend(&mut images, &mut found);
        found
    }

    fn descend(&self, images: &mut Vec<usize>, found: &mut u128) {
        if *found >= self.limit {
            return;
        }
        let depth = images.len();
        if depth == self.order.len() {
            *found += 1;
            return;
        }
        let req = &self.steps[depth];
        let Some(&anchor) = req.iter().min_by_key(|&&t| self.s.degree(images[t])) else {
            for i in 0..self.s.base.vertex_count() {
                if self.s.degree(i) == 0 || images.contains(&i) {
                    continue;
                }
                images.push(i);
                self.descend(images, found);
                images.pop();
            }
            return;
        };
        for &j in self.s.neighbors(images[anchor]) {
            let j = j as usize;
            if images.contains(&j) || !req.iter().all(|&t| t == anchor || self.s.has_edge(images[t], j)) {
                continue;
            }
            images.push(j);
            self.descend(images, found);
            images.pop();
        }
    }
}

fn monomorphisms_in_sample(f: &PatternGraph, s: &SampledGraph, limit: u128) -> Result<BigUint> {
    if f.vcount() > MAX_COPY_PATTERN_VERTICES {
        return Err(Error::precondition(format!(
            "copy counting supports patterns with at most {MAX_COPY_PATTERN_VERTICES} vertices"
        )));
    }
    let isolated = f.isolated_mask();
    let mut order: Vec<usize> = Vec::new();
    let mut placed: u16 = 0;
    let core_mask = (0..f.vcount())
        .filter(|&v| isolated >> v & 1 == 0)
        .fold(0u16, |m, v| m | 1 << v);
    while placed != core_mask {
        let next = (0..f.vcount())
            .filter(|&v| core_mask >> v & 1 == 1 && placed >> v & 1 == 0)
            .max_by_key(|&v| ((f.neighbors(v) & placed).count_ones(), f.degree(v), std::cmp::Reverse(v)))
            .expect("unplaced");
        order.push(next);
        placed |= 1 << next;
    }
    let steps: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(s, &v)| (0..s).filter(|&t| f.has_edge(v, order[t])).collect())
        .collect();
    let core = if order.is_empty() {
        1
    } else {
        CopySearch {
            s,
            order: order.clone(),
            steps,
            limit,
        }
        .run()
    };
    let free = s.base.vertex_count() as u64 - order.len() as u64;
    Ok(BigUint::from(core) * falling_factorial(free, isolated.count_ones() as u64))
}

/// Unordered copies of `F` in the sample: injective maps preserving every
/// edge of `F` into retained edges, divided by `|Aut(F)|`.
pub fn count_copies(f: &PatternGraph, s: &SampledGraph) -> Result<BigCount> {
    let mono = monomorphisms_in_sample(f, s, u128::MAX)?;
    Ok(mono / f.automorphism_count())
}

/// Whether the sample holds at least one copy of `F`; stops at the first.
pub fn contains_copy(f: &PatternGraph, s: &SampledGraph) -> Result<bool> {
    let mono = monomorphisms_in_sample(f, s, 1)?;
    Ok(mono > BigUint::ZERO)
}

/// Bound `f(n)` on the partition-vector entries of admissible root tuples.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootFilter {
    /// `f(n) = floor(n^exponent)`.
    Exponent(f64),
    /// A constant bound.
    Fixed(u64),
}

impl Default for RootFilter {
    fn default() -> Self {
        RootFilter::Exponent(0.6)
    }
}

impl RootFilter {
    pub fn bound(&self, n: u32) -> u64 {
        match *self {
            RootFilter::Exponent(e) => (n as f64).powf(e).floor().max(0.0) as u64,
            RootFilter::Fixed(f) => f,
        }
    }

    /// The sharp-threshold statement needs `f << n^{2/3}`.
    pub fn within_growth_bound(&self) -> bool {
        match *self {
            RootFilter::Exponent(e) => e < 2.0 / 3.0,
            RootFilter::Fixed(_) => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let RootFilter::Exponent(e) = *self {
            if !(e.is_finite() && e >= 0.0) {
                return Err(Error::precondition(format!("f exponent must be finite and >= 0, got {e}")));
            }
        }
        if !self.within_growth_bound() {
            log::warn!("root filter exponent is at least 2/3; f << n^(2/3) does not hold");
        }
        Ok(())
    }
}

/// Whether the tuple lies in the admissible set: all `|x_j| <= f(n)`.
pub fn in_tilde_v(filter: &RootFilter, n: u32, roots: &[VertexWord]) -> Result<bool> {
    let pv = PartitionVector::from_roots(n, roots)?;
    Ok(pv.max_abs_x() <= filter.bound(n))
}

/// How root tuples are chosen by [`check_ext`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtMode {
    /// Every tuple of `V^d` in lexicographic index order.
    Exhaustive,
    /// `tuples` admissible tuples drawn uniformly by rejection.
    Sampled { tuples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtReport {
    pub holds: bool,
    /// Admissible tuples examined up to and including the first failure.
    pub tuples_checked: u64,
    pub first_failure: Option<Vec<VertexWord>>,
}

/// Whether non-root images realizing every required adjacency exist in the
/// sample for the given root images. Images need not be distinct.
pub fn has_extension(s: &SampledGraph, net: &RootedNetwork, root_indices: &[usize]) -> bool {
    let h = net.graph();
    let mut image = vec![usize::MAX; h.vcount()];
    for (&r, &i) in net.roots().iter().zip(root_indices) {
        image[r] = i;
    }
    witness(s, net, &mut image)
}

fn witness(s: &SampledGraph, net: &RootedNetwork, image: &mut [usize]) -> bool {
    let h = net.graph();
    // next non-root: one with a placed neighbor of smallest retained degree
    let mut best: Option<(usize, Option<(usize, usize)>)> = None;
    for &y in net.non_roots() {
        if image[y] != usize::MAX {
            continue;
        }
        let anchor = (0..h.vcount())
            .filter(|&t| h.has_edge(y, t) && image[t] != usize::MAX)
            .map(|t| (s.degree(image[t]), t))
            .min();
        let better = match (&best, anchor) {
            (None, _) => true,
            (Some((_, None)), Some(_)) => true,
            (Some((_, Some(a))), Some(b)) => b < *a,
            _ => false,
        };
        if better {
            best = Some((y, anchor));
        }
    }
    let Some((y, anchor)) = best else {
        return true;
    };
    let placed_nbrs: Vec<usize> = (0..h.vcount())
        .filter(|&t| h.has_edge(y, t) && image[t] != usize::MAX)
        .collect();
    let ok = |image: &[usize], j: usize| placed_nbrs.iter().all(|&t| s.has_edge(image[t], j));
    match anchor {
        Some((_, t)) => {
            let cands: Vec<u32> = s.neighbors(image[t]).to_vec();
            for j in cands {
                let j = j as usize;
                if ok(image, j) {
                    image[y] = j;
                    if witness(s, net, image) {
                        image[y] = usize::MAX;
                        return true;
                    }
                }
            }
        }
        None => {
            for j in 0..s.base.vertex_count() {
                image[y] = j;
                if witness(s, net, image) {
                    image[y] = usize::MAX;
                    return true;
                }
            }
        }
    }
    image[y] = usize::MAX;
    false
}

fn tuple_from_index(mut idx: u128, d: usize, n_vertices: u128) -> Vec<usize> {
    let mut t = vec![0usize; d];
    for slot in t.iter_mut().rev() {
        *slot = (idx % n_vertices) as usize;
        idx /= n_vertices;
    }
    t
}

/// Decide the restricted extension property on a sample.
pub fn check_ext(
    s: &SampledGraph,
    net: &RootedNetwork,
    filter: &RootFilter,
    mode: ExtMode,
) -> Result<ExtReport> {
    filter.validate()?;
    let g = s.base();
    let n = g.n();
    let d = net.d();
    let bound = filter.bound(n);
    let n_vertices = g.vertex_count() as u128;
    let admissible = |t: &[usize]| -> bool {
        let words: Vec<VertexWord> = t.iter().map(|&i| g.vertex(i)).collect();
        PartitionVector::from_roots(n, &words)
            .map(|pv| pv.max_abs_x() <= bound)
            .unwrap_or(false)
    };
    let to_words = |t: &[usize]| t.iter().map(|&i| g.vertex(i)).collect::<Vec<_>>();

    match mode {
        ExtMode::Exhaustive => {
            let total = n_vertices.checked_pow(d as u32).unwrap_or(u128::MAX);
            if total > EXHAUSTIVE_TUPLE_BUDGET {
                return Err(Error::budget(format!(
                    "exhaustive check needs N^d = {total} tuples; the budget is {EXHAUSTIVE_TUPLE_BUDGET}"
                )));
            }
            let per_first = total / n_vertices;
            const CHUNK: usize = 64;
            let mut checked = 0u64;
            let firsts: Vec<usize> = (0..g.vertex_count()).collect();
            for chunk in firsts.chunks(CHUNK) {
                let results: Vec<(u64, Option<Vec<usize>>)> = chunk
                    .par_iter()
                    .map(|&first| {
                        let mut count = 0u64;
                        for rest in 0..per_first {
                            let mut t = tuple_from_index(rest, d - 1, n_vertices);
                            t.insert(0, first);
                            if !admissible(&t) {
                                continue;
                            }
                            count += 1;
                            if !has_extension(s, net, &t) {
                                return (count, Some(t));
                            }
                        }
                        (count, None)
                    })
                    .collect();
                for (count, failure) in results {
                    checked += count;
                    if let Some(t) = failure {
                        return Ok(ExtReport {
                            holds: false,
                            tuples_checked: checked,
                            first_failure: Some(to_words(&t)),
                        });
                    }
                }
            }
            Ok(ExtReport {
                holds: true,
                tuples_checked: checked,
                first_failure: None,
            })
        }
        ExtMode::Sampled { tuples, seed } => {
            let mut rng = SampleSeed::new(seed, u64::MAX).rng();
            let max_attempts = tuples.saturating_mul(1000);
            let mut accepted = 0u64;
            let mut attempts = 0u64;
            while accepted < tuples && attempts < max_attempts {
                attempts += 1;
                let t: Vec<usize> = (0..d).map(|_| rng.random_range(0..g.vertex_count())).collect();
                if !admissible(&t) {
                    continue;
                }
                accepted += 1;
                if !has_extension(s, net, &t) {
                    return Ok(ExtReport {
                        holds: false,
                        tuples_checked: accepted,
                        first_failure: Some(to_words(&t)),
                    });
                }
            }
            if accepted == 0 {
                return Err(Error::precondition(
                    "no admissible root tuple accepted; the root filter is too strict",
                ));
            }
            Ok(ExtReport {
                holds: true,
                tuples_checked: accepted,
                first_failure: None,
            })
        }
    }
}

/// Estimate of a probability with a 95% interval; degenerate when exact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FractionEstimate {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub hits: u64,
    pub total: u64,
    pub exact: bool,
}

/// Fraction of `d`-tuples of vertices whose partition vector passes the
/// filter. Enumerates `V^d` when it has at most a million tuples, otherwise
/// samples `samples` uniform tuples.
pub fn tilde_fraction(
    n: u32,
    d: usize,
    filter: &RootFilter,
    samples: u64,
    seed: u64,
) -> Result<FractionEstimate> {
    crate::distgraph::check_n(n)?;
    filter.validate()?;
    if !(1..=3).contains(&d) {
        return Err(Error::precondition(format!("d must lie in 1..=3, got {d}")));
    }
    let bound = filter.bound(n);
    let n_vertices = vertex_count(n) as u128;
    let total = n_vertices.pow(d as u32);
    let word = |i: u64| VertexWord(colex_unrank(i, n, n / 2));
    let admissible = |idx: &[u64]| {
        let words: Vec<VertexWord> = idx.iter().map(|&i| word(i)).collect();
        PartitionVector::from_roots(n, &words).expect("valid roots").max_abs_x() <= bound
    };
    if total <= EXACT_FRACTION_BUDGET {
        let hits: u64 = (0..total as u64)
            .into_par_iter()
            .filter(|&flat| {
                let t: Vec<u64> = tuple_from_index(flat as u128, d, n_vertices)
                    .into_iter()
                    .map(|i| i as u64)
                    .collect();
                admissible(&t)
            })
            .count() as u64;
        let est = hits as f64 / total as f64;
        return Ok(FractionEstimate {
            estimate: est,
            ci_low: est,
            ci_high: est,
            hits,
            total: total as u64,
            exact: true,
        });
    }
    if samples == 0 {
        return Err(Error::precondition("samples must be positive"));
    }
    let mut rng = SampleSeed::new(seed, 0).rng();
    let mut hits = 0u64;
    for _ in 0..samples {
        let t: Vec<u64> = (0..d).map(|_| rng.random_range(0..n_vertices as u64)).collect();
        if admissible(&t) {
            hits += 1;
        }
    }
    let (lo, hi) = crate::stats::wilson_interval(hits, samples);
    Ok(FractionEstimate {
        estimate: hits as f64 / samples as f64,
        ci_low: lo,
        ci_high: hi,
        hits,
        total: samples,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(s: u64) -> SampleSeed {
        SampleSeed::new(s, 0)
    }

    #[test]
    fn extremes() {
        let g = DistGraph::build(8).unwrap();
        assert_eq!(sample_gp(&g, 0.0, seed(1)).unwrap().edge_count(), 0);
        assert_eq!(sample_gp(&g, 1.0, seed(1)).unwrap().edge_count(), 1260);
        assert!(sample_gp(&g, 1.5, seed(1)).is_err());
        assert!(sample_gp(&g, -0.1, seed(1)).is_err());
    }

    #[test]
    fn reproducible() {
        let g = DistGraph::build(12).unwrap();
        for p in [0.01, 0.3] {
            let a = sample_gp(&g, p, SampleSeed::new(9, 4)).unwrap();
            let b = sample_gp(&g, p, SampleSeed::new(9, 4)).unwrap();
            let c = sample_gp(&g, p, SampleSeed::new(9, 5)).unwrap();
            assert_eq!(a.edges(), b.edges());
            assert_ne!(a.edges(), c.edges());
        }
    }

    #[test]
    fn retained_edges_are_base_edges() {
        let g = DistGraph::build(12).unwrap();
        let s = sample_gp(&g, 0.01, seed(3)).unwrap();
        assert!(s.edge_count() > 0);
        for &(a, b) in s.edges() {
            assert!(a < b);
            assert!(g.adjacent(g.vertex(a as usize), g.vertex(b as usize)));
            assert!(s.has_edge(a as usize, b as usize) && s.has_edge(b as usize, a as usize));
        }
    }

    #[test]
    fn copies_in_full_and_empty() {
        let g = DistGraph::build(8).unwrap();
        let full = sample_gp(&g, 1.0, seed(0)).unwrap();
        let empty = sample_gp(&g, 0.0, seed(0)).unwrap();
        let k2 = PatternGraph::complete(2);
        let k3 = PatternGraph::complete(3);
        assert_eq!(count_copies(&k2, &full).unwrap(), BigUint::from(1260u32));
        assert_eq!(count_copies(&k3, &full).unwrap(), BigUint::from(7560u32));
        assert_eq!(count_copies(&k3, &empty).unwrap(), BigUint::ZERO);
        assert!(!contains_copy(&k3, &empty).unwrap());
        assert!(contains_copy(&k3, &full).unwrap());
        let one = SampledGraph::from_edges(&g, &full.edges()[..1]).unwrap();
        assert!(contains_copy(&k2, &one).unwrap());
        assert!(!contains_copy(&k3, &one).unwrap());
        assert!(count_copies(&PatternGraph::path(7), &full).is_err());
    }

    #[test]
    fn from_edges_rejects_non_edges() {
        let g = DistGraph::build(8).unwrap();
        // vertex 0 is 00001111; vertex 69 is 11110000 with inner product 0
        assert!(SampledGraph::from_edges(&g, &[(0, 69)]).is_err());
        assert!(SampledGraph::from_edges(&g, &[(0, 700)]).is_err());
    }

    #[test]
    fn tilde_membership() {
        let g = DistGraph::build(8).unwrap();
        let f0 = RootFilter::Fixed(0);
        assert!(in_tilde_v(&f0, 8, &[g.vertex(11)]).unwrap());
        let u = g.vertex(0);
        let w = g.neighbor_words(u).next().unwrap();
        assert!(in_tilde_v(&f0, 8, &[u, w]).unwrap());
        assert!(!in_tilde_v(&RootFilter::Fixed(1), 8, &[u, u]).unwrap());
        assert_eq!(RootFilter::default().bound(16), 5);
        assert_eq!(RootFilter::default().bound(12), 4);
    }

    #[test]
    fn ext_on_extremes() {
        let g = DistGraph::build(8).unwrap();
        let net = RootedNetwork::named("root-edge").unwrap();
        let full = sample_gp(&g, 1.0, seed(0)).unwrap();
        let empty = sample_gp(&g, 0.0, seed(0)).unwrap();
        let filter = RootFilter::default();
        let r = check_ext(&full, &net, &filter, ExtMode::Exhaustive).unwrap();
        assert!(r.holds);
        assert_eq!(r.tuples_checked, 70);
        let r = check_ext(&empty, &net, &filter, ExtMode::Exhaustive).unwrap();
        assert!(!r.holds);
        assert_eq!(r.tuples_checked, 1);
        assert_eq!(r.first_failure, Some(vec![g.vertex(0)]));
    }

    #[test]
    fn ext_single_isolated_vertex() {
        let g = DistGraph::build(12).unwrap();
        let net = RootedNetwork::named("root-edge").unwrap();
        let full = sample_gp(&g, 1.0, seed(0)).unwrap();
        let broken = full.without_vertex_edges(500);
        let r = check_ext(&broken, &net, &RootFilter::default(), ExtMode::Exhaustive).unwrap();
        assert!(!r.holds);
        assert_eq!(r.first_failure, Some(vec![g.vertex(500)]));
        assert_eq!(r.tuples_checked, 501);
    }

    #[test]
    fn ext_budget_and_strict_filter() {
        let g = DistGraph::build(16).unwrap();
        let net = RootedNetwork::named("cherry").unwrap();
        let empty = sample_gp(&g, 0.0, seed(0)).unwrap();
        let err = check_ext(&empty, &net, &RootFilter::default(), ExtMode::Exhaustive).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));

        // d = 3, n = 12, f = 0 forces seven blocks of size 1, leaving the
        // first root only four ones: no tuple is admissible
        let g12 = DistGraph::build(12).unwrap();
        let empty12 = sample_gp(&g12, 0.0, seed(0)).unwrap();
        let star = RootedNetwork::new(
            PatternGraph::new(4, &[(0, 3), (1, 3), (2, 3)]).unwrap(),
            vec![0, 1, 2],
        )
        .unwrap();
        let mode = ExtMode::Sampled { tuples: 3, seed: 5 };
        let err = check_ext(&empty12, &star, &RootFilter::Fixed(0), mode).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)), "{err}");
        let frac = tilde_fraction(12, 3, &RootFilter::Fixed(0), 500, 2).unwrap();
        assert_eq!(frac.hits, 0);
    }

    #[test]
    fn tilde_fraction_d1_is_one() {
        for n in [8, 12, 16, 32] {
            let r = tilde_fraction(n, 1, &RootFilter::Fixed(0), 100, 1).unwrap();
            assert_eq!(r.estimate, 1.0);
        }
    }
}
