//! Exact embedding and extension counts.
//!
//! The block-profile counter never touches the vertices of the distance
//! graph. Placed vertices split the coordinate positions into blocks by
//! their bit patterns; a new vertex is described by how many ones it puts
//! in each block (`u_j`), subject to one linear equation per required
//! adjacency (`n/4` ones on the neighbor's support), the weight equation
//! (`n/2` ones in total) and box constraints `0 <= u_j <= w_j`. Each
//! solution contributes `prod_j C(w_j, u_j)` times the count for the
//! refined blocks. Blocks are indexed by patterns in decreasing
//! lexicographic order, so block `j` splits into `2j` (new bit 1) and
//! `2j + 1` (new bit 0).

use std::collections::HashMap;

use log::warn;
use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::binomial;
use crate::distgraph::{check_n, regular_degree, vertex_count, DistGraph, VertexWord};
use crate::error::{Error, Result};
use crate::patterns::{PatternGraph, RootedNetwork};
use crate::BigCount;

/// Largest pattern accepted by the unrooted block-profile counter.
pub const MAX_UNROOTED_VERTICES: usize = 8;

/// Block sizes of the coordinate partition induced by `d` root vertices,
/// together with their deviations `x_j` from the balanced split.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionVector {
    n: u32,
    d: usize,
    block_sizes: Vec<u32>,
    x: Vec<i64>,
}

impl PartitionVector {
    /// Classify each coordinate by the roots' bit pattern at that position.
    pub fn from_roots(n: u32, roots: &[VertexWord]) -> Result<PartitionVector> {
        check_n(n)?;
        if roots.is_empty() {
            return Err(Error::precondition("partition vector needs at least one root"));
        }
        if roots.len() > 16 {
            return Err(Error::precondition("at most 16 roots are supported"));
        }
        let d = roots.len();
        let mut sizes = vec![0u32; 1 << d];
        for i in 0..n {
            let mut idx = 0usize;
            for r in roots {
                idx = idx << 1 | (1 - (r.0 >> i & 1) as usize);
            }
            sizes[idx] += 1;
        }
        PartitionVector::from_block_sizes(n, d, sizes)
    }

    pub fn from_block_sizes(n: u32, d: usize, block_sizes: Vec<u32>) -> Result<PartitionVector> {
        if block_sizes.len() != 1 << d {
            return Err(Error::precondition(format!(
                "expected {} block sizes for d={d}, got {}",
                1usize << d,
                block_sizes.len()
            )));
        }
        if block_sizes.iter().map(|&s| s as u64).sum::<u64>() != n as u64 {
            return Err(Error::precondition("block sizes must sum to n"));
        }
        let base = (n as i64) >> d.min(63);
        let last = block_sizes.len() - 1;
        let x = block_sizes
            .iter()
            .enumerate()
            .map(|(j, &s)| {
                if j < last {
                    s as i64 - base
                } else {
                    s as i64 - n as i64 + last as i64 * base
                }
            })
            .collect();
        Ok(PartitionVector {
            n,
            d,
            block_sizes,
            x,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `|B_1|, ..., |B_{2^d}|`.
    pub fn block_sizes(&self) -> &[u32] {
        &self.block_sizes
    }

    /// `x_1, ..., x_{2^d}`; always sums to zero.
    pub fn x(&self) -> &[i64] {
        &self.x
    }

    pub fn max_abs_x(&self) -> u64 {
        self.x.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }
}

/// Sum over all solution chains of the per-vertex systems, starting from
/// `blocks` with `placed` vertices already fixed. `steps[s]` lists the
/// placed positions the next vertex must be adjacent to.
fn chain_sum(n: u32, blocks: &[u32], placed: usize, steps: &[Vec<usize>]) -> BigUint {
    let Some((step, rest)) = steps.split_first() else {
        return BigUint::one();
    };
    debug_assert_eq!(blocks.len(), 1 << placed);
    debug_assert_eq!(blocks.iter().sum::<u32>(), n);

    // equation 0 is the weight equation, then one per required neighbor
    let mut members: Vec<Vec<bool>> = vec![vec![true; blocks.len()]];
    let mut targets = vec![n / 2];
    for &t in step {
        let shift = placed - 1 - t;
        members.push((0..blocks.len()).map(|j| j >> shift & 1 == 0).collect());
        targets.push(n / 4);
    }
    // capacity of each equation strictly after position j
    let suffix: Vec<Vec<u32>> = members
        .iter()
        .map(|m| {
            let mut cap = vec![0u32; blocks.len() + 1];
            for j in (0..blocks.len()).rev() {
                cap[j] = cap[j + 1] + if m[j] { blocks[j] } else { 0 };
            }
            cap
        })
        .collect();

    let mut search = SystemSearch {
        n,
        blocks,
        placed,
        rest,
        members: &members,
        suffix: &suffix,
        residual: targets,
        u: vec![0; blocks.len()],
        total: BigUint::zero(),
    };
    search.descend(0);
    search.total
}

struct SystemSearch<'a> {
    n: u32,
    blocks: &'a [u32],
    placed: usize,
    rest: &'a [Vec<usize>],
    members: &'a [Vec<bool>],
    suffix: &'a [Vec<u32>],
    residual: Vec<u32>,
    u: Vec<u32>,
    total: BigUint,
}

impl SystemSearch<'_> {
    fn descend(&mut self, j: usize) {
        if j == self.blocks.len() {
            debug_assert!(self.residual.iter().all(|&r| r == 0));
            self.emit();
            return;
        }
        let mut lo = 0u32;
        let mut hi = self.blocks[j];
        for (e, m) in self.members.iter().enumerate() {
            if m[j] {
                let res = self.residual[e];
                hi = hi.min(res);
                lo = lo.max(res.saturating_sub(self.suffix[e][j + 1]));
            }
        }
        for value in lo..=hi {
            if lo > hi {
                break;
            }
            self.u[j] = value;
            for (e, m) in self.members.iter().enumerate() {
                if m[j] {
                    self.residual[e] -= value;
                }
            }
            self.descend(j + 1);
            for (e, m) in self.members.iter().enumerate() {
                if m[j] {
                    self.residual[e] += value;
                }
            }
        }
    }

    fn emit(&mut self) {
        let mut acc = if self.rest.is_empty() {
            BigUint::one()
        } else {
            let refined: Vec<u32> = self
                .blocks
                .iter()
                .zip(&self.u)
                .flat_map(|(&w, &u)| [u, w - u])
                .collect();
            chain_sum(self.n, &refined, self.placed + 1, self.rest)
        };
        if acc.is_zero() {
            return;
        }
        for (&w, &u) in self.blocks.iter().zip(&self.u) {
            let c = binomial(w, u);
            if c != 1 {
                acc *= c;
            }
        }
        self.total += acc;
    }
}

/// Number of adjacency-respecting assignment chains `(w^1, ..., w^k)` for
/// the network's non-roots given the root partition. Non-roots may coincide
/// with each other or with roots wherever no adjacency forbids it.
pub fn blockprofile_rooted_count(
    net: &RootedNetwork,
    pv: &PartitionVector,
    n: u32,
) -> Result<BigCount> {
    check_n(n)?;
    if pv.d() != net.d() || pv.n() != n {
        return Err(Error::precondition(format!(
            "partition vector (n={}, d={}) does not match network (n={n}, d={})",
            pv.n(),
            pv.d(),
            net.d()
        )));
    }
    Ok(chain_sum(n, pv.block_sizes(), net.d(), &net.placement_steps()))
}

/// Placement order for an unrooted connected pattern: each new vertex has
/// as many already-placed neighbors as possible.
fn greedy_order(f: &PatternGraph, component: u16) -> Vec<usize> {
    let mut order = Vec::new();
    let mut placed: u16 = 0;
    while placed != component {
        let next = (0..f.vcount())
            .filter(|&v| component >> v & 1 == 1 && placed >> v & 1 == 0)
            .max_by_key(|&v| {
                (
                    (f.neighbors(v) & placed).count_ones(),
                    f.degree(v),
                    std::cmp::Reverse(v),
                )
            })
            .expect("unplaced vertex");
        order.push(next);
        placed |= 1 << next;
    }
    order
}

fn components(f: &PatternGraph) -> Vec<u16> {
    let mut out = Vec::new();
    let mut seen: u16 = 0;
    for start in 0..f.vcount() {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut comp: u16 = 1 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = f.neighbors(v) & !comp;
            comp |= new;
            frontier |= new;
        }
        seen |= comp;
        out.push(comp);
    }
    out
}

fn steps_for(f: &PatternGraph, order: &[usize]) -> Vec<Vec<usize>> {
    order
        .iter()
        .enumerate()
        .map(|(s, &v)| (0..s).filter(|&t| f.has_edge(v, order[t])).collect())
        .collect()
}

/// Adjacency-respecting vertex maps `V(F) -> V(G)` (not necessarily
/// injective). Factorizes over connected components.
fn unrooted_noninjective(f: &PatternGraph, n: u32) -> BigUint {
    components(f)
        .into_iter()
        .map(|comp| {
            let order = greedy_order(f, comp);
            chain_sum(n, &[n], 0, &steps_for(f, &order))
        })
        .product()
}

/// Visit every partition of `0..v` into classes that are independent sets
/// of `f`, as class-assignment vectors.
fn independent_partitions(f: &PatternGraph, mut visit: impl FnMut(&[usize], usize)) {
    fn rec(
        f: &PatternGraph,
        v: usize,
        assign: &mut Vec<usize>,
        class_masks: &mut Vec<u16>,
        visit: &mut dyn FnMut(&[usize], usize),
    ) {
        if v == f.vcount() {
            visit(assign, class_masks.len());
            return;
        }
        for c in 0..class_masks.len() {
            if f.neighbors(v) & class_masks[c] == 0 {
                class_masks[c] |= 1 << v;
                assign.push(c);
                rec(f, v + 1, assign, class_masks, visit);
                assign.pop();
                class_masks[c] &= !(1 << v);
            }
        }
        class_masks.push(1 << v);
        assign.push(class_masks.len() - 1);
        rec(f, v + 1, assign, class_masks, visit);
        assign.pop();
        class_masks.pop();
    }
    rec(f, 0, &mut Vec::new(), &mut Vec::new(), &mut visit);
}

fn quotient(f: &PatternGraph, assign: &[usize], classes: usize) -> PatternGraph {
    let mut edges: Vec<(usize, usize)> = f
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let (ca, cb) = (assign[a], assign[b]);
            assert_ne!(ca, cb, "independent classes cannot produce loops");
            (ca.min(cb), ca.max(cb))
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    PatternGraph::new(classes, &edges).expect("quotient of a valid pattern")
}

/// Exact count of adjacency-respecting maps `V(F) -> V(G(n))`, computed
/// from block profiles alone. With `injective`, non-injective maps are
/// removed by inverting
/// `count_noninj(F) = sum_theta count_inj(F / theta)` over partitions into
/// independent classes on the partition lattice.
pub fn blockprofile_unrooted_count(f: &PatternGraph, n: u32, injective: bool) -> Result<BigCount> {
    check_n(n)?;
    if f.vcount() > MAX_UNROOTED_VERTICES {
        return Err(Error::precondition(format!(
            "pattern has {} vertices; the block-profile counter accepts at most {MAX_UNROOTED_VERTICES}",
            f.vcount()
        )));
    }
    if !injective {
        return Ok(unrooted_noninjective(f, n));
    }
    let mut memo: HashMap<PatternGraph, BigUint> = HashMap::new();
    let mut total = BigInt::zero();
    independent_partitions(f, |assign, classes| {
        let mut sizes = vec![0u64; classes];
        for &c in assign {
            sizes[c] += 1;
        }
        // Möbius function of the partition lattice from the discrete partition
        let mut mu = BigInt::one();
        for &s in &sizes {
            for i in 1..s {
                mu *= -(i as i64);
            }
        }
        let q = quotient(f, assign, classes);
        let count = memo
            .entry(q)
            .or_insert_with_key(|q| unrooted_noninjective(q, n))
            .clone();
        total += mu * BigInt::from(count);
    });
    match total.sign() {
        Sign::Minus => unreachable!("injective count is nonnegative"),
        _ => Ok(total.to_biguint().expect("nonnegative")),
    }
}

/// Exact number of unordered copies of `F` in the complete distance graph.
pub fn exact_copy_count(f: &PatternGraph, n: u32) -> Result<BigCount> {
    let mono = blockprofile_unrooted_count(f, n, true)?;
    Ok(mono / f.automorphism_count())
}

fn neighbor_list(g: &DistGraph, v: VertexWord) -> Vec<VertexWord> {
    match (g.neighbor_cache(), g.index_of(v)) {
        (Some(cache), Some(i)) => cache[i].iter().map(|&j| g.vertex(j as usize)).collect(),
        _ => g.neighbor_words(v).collect(),
    }
}

/// Count extensions of fixed root images by backtracking over the images of
/// `y_1, ..., y_k`. With `injective`, all `d + k` images must be distinct.
pub fn bruteforce_rooted_count(
    net: &RootedNetwork,
    root_images: &[VertexWord],
    g: &DistGraph,
    injective: bool,
) -> BigCount {
    assert_eq!(root_images.len(), net.d(), "one image per root");
    let steps = net.placement_steps();
    let mut images = root_images.to_vec();
    BigUint::from(extend(g, &steps, &mut images, injective))
}

fn extend(g: &DistGraph, steps: &[Vec<usize>], images: &mut Vec<VertexWord>, injective: bool) -> u128 {
    let Some((req, rest)) = steps.split_first() else {
        return 1;
    };
    let candidates: Vec<VertexWord> = match req.split_first() {
        Some((&first, others)) => neighbor_list(g, images[first])
            .into_iter()
            .filter(|&w| others.iter().all(|&t| g.adjacent(images[t], w)))
            .collect(),
        None => g.vertices().to_vec(),
    };
    let mut total = 0u128;
    for w in candidates {
        if injective && images.contains(&w) {
            continue;
        }
        images.push(w);
        total += extend(g, rest, images, injective);
        images.pop();
    }
    total
}

fn mono_with_prefix(f: &PatternGraph, g: &DistGraph, fix_first: bool) -> BigCount {
    let isolated = f.isolated_mask();
    let core_mask = ((1u32 << f.vcount()) - 1) as u16 & !isolated;
    let n_vertices = g.vertex_count() as u64;
    if core_mask == 0 {
        // only isolated vertices: ordered selections of distinct vertices
        return crate::combinatorics::falling_factorial(n_vertices, f.vcount() as u64);
    }
    let mut order = Vec::new();
    for comp in components(f).into_iter().filter(|c| c & isolated == 0) {
        order.extend(greedy_order(f, comp));
    }
    let steps = steps_for(f, &order);
    let placed_core = order.len() as u64;
    let core = if fix_first {
        let mut images = vec![g.vertex(0)];
        BigUint::from(extend(g, &steps[1..], &mut images, true)) * n_vertices
    } else {
        let mut images = Vec::new();
        BigUint::from(extend(g, &steps, &mut images, true))
    };
    let extra = isolated.count_ones() as u64;
    core * crate::combinatorics::falling_factorial(n_vertices - placed_core, extra)
}

/// Injective adjacency-preserving maps `V(F) -> V(G)` by backtracking.
/// The first placed vertex is pinned to vertex 0 and the result scaled by
/// `N`, which is exact because `G` is vertex-transitive.
pub fn bruteforce_monomorphisms(f: &PatternGraph, g: &DistGraph) -> BigCount {
    mono_with_prefix(f, g, true)
}

/// [`bruteforce_monomorphisms`] without the vertex-transitivity shortcut.
pub fn bruteforce_monomorphisms_exhaustive(f: &PatternGraph, g: &DistGraph) -> BigCount {
    mono_with_prefix(f, g, false)
}

/// `M(k, l) = N^k (N1/N)^l`, evaluated in log space.
pub fn analytic_m(k: u32, l: u32, n: u32) -> f64 {
    let ln_n = (vertex_count(n) as f64).ln();
    let ln_n1 = (regular_degree(n) as f64).ln();
    (k as f64 * ln_n + l as f64 * (ln_n1 - ln_n)).exp()
}

/// `M(k, l)` as an exact rational.
pub fn analytic_m_exact(k: u32, l: u32, n: u32) -> BigRational {
    let big_n = BigInt::from(vertex_count(n));
    let big_n1 = BigInt::from(regular_degree(n));
    let numer = num_traits::pow(big_n.clone(), k as usize) * num_traits::pow(big_n1, l as usize);
    let denom = num_traits::pow(big_n, l as usize);
    BigRational::new(numer, denom)
}

/// `p* = N^(-1/rho_max(F)) sqrt(ln N)`.
pub fn threshold_p_star(f: &PatternGraph, n: u32) -> Result<f64> {
    check_n(n)?;
    let rho = positive_max_density(f)?;
    let ln_n = (vertex_count(n) as f64).ln();
    Ok((-ln_n / rho + 0.5 * ln_n.ln()).exp())
}

/// `N^(-1/rho_max(F)) N / N1`, the same threshold up to a bounded factor.
pub fn threshold_p_star_alt(f: &PatternGraph, n: u32) -> Result<f64> {
    check_n(n)?;
    let rho = positive_max_density(f)?;
    let ln_n = (vertex_count(n) as f64).ln();
    let ln_n1 = (regular_degree(n) as f64).ln();
    Ok((-ln_n / rho + ln_n - ln_n1).exp())
}

fn positive_max_density(f: &PatternGraph) -> Result<f64> {
    if f.edge_count() == 0 {
        return Err(Error::precondition("pattern must have at least one edge"));
    }
    let rho = f.max_density();
    Ok(*rho.numer() as f64 / *rho.denom() as f64)
}

/// `p = c N^(-k/l) N / N1` with `k = v(F)`, `l = e(F)`.
pub fn poisson_p(f: &PatternGraph, n: u32, c: f64) -> Result<f64> {
    check_n(n)?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::precondition(format!("c must be positive and finite, got {c}")));
    }
    let l = f.edge_count();
    if l == 0 {
        return Err(Error::precondition("pattern must have at least one edge"));
    }
    if !f.is_strictly_balanced() {
        warn!("pattern is not strictly balanced; the Poisson limit does not apply");
    }
    let k = f.vcount() as f64;
    let ln_n = (vertex_count(n) as f64).ln();
    let ln_n1 = (regular_degree(n) as f64).ln();
    Ok((c.ln() - k / l as f64 * ln_n + ln_n - ln_n1).exp())
}

/// The `p` solving `M(k, l) p^l / c1 = d ln N`.
pub fn ext_sharp_p(net: &RootedNetwork, n: u32) -> Result<f64> {
    check_n(n)?;
    let l = net.l();
    if l == 0 {
        return Err(Error::precondition("network has no edge outside the roots"));
    }
    if !net.is_nontrivial() || !net.is_strictly_balanced() {
        warn!("network is not nontrivial and strictly balanced; the sharp threshold does not apply");
    }
    let c1 = net.root_fixing_automorphism_count() as f64;
    let ln_n = (vertex_count(n) as f64).ln();
    let ln_m = analytic_m(net.k() as u32, l as u32, n).ln();
    let ln_rhs = c1.ln() + (net.d() as f64).ln() + ln_n.ln();
    Ok(((ln_rhs - ln_m) / l as f64).exp())
}
