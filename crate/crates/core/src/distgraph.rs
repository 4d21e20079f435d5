//! The complete distance graph `G(n, n/2, n/4)`.
//!
//! Vertices are the `n`-bit words with exactly `n/2` ones; two vertices are
//! adjacent when their supports meet in exactly `n/4` positions. Bit `i` of
//! a word is coordinate `i + 1` of the 0/1 vector.

use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    binomial, colex_rank, colex_unrank, deposit, low_mask, next_same_weight, weight_k_words,
};
use crate::error::{Error, Result};
use crate::BigCount;

/// Largest vertex count [`DistGraph::build`] will materialize (n = 28).
pub const MAX_ENUMERATED_VERTICES: u64 = 50_000_000;

/// Neighbor lists are only cached up to this `n`.
pub const MAX_CACHED_N: u32 = 16;

/// A vertex of the distance graph: an `n`-bit word of popcount `n/2`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexWord(pub u64);

impl VertexWord {
    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    /// Size of the support intersection, i.e. the inner product.
    #[inline]
    pub fn inner(self, other: VertexWord) -> u32 {
        (self.0 & other.0).count_ones()
    }

    /// Render as a 0/1 string, coordinate 1 first.
    pub fn to_coords(self, n: u32) -> String {
        (0..n)
            .map(|i| if self.0 >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Parse a 0/1 string written coordinate 1 first.
    pub fn from_coords(s: &str) -> Option<VertexWord> {
        let mut w = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' if i < 64 => w |= 1 << i,
                '0' if i < 64 => {}
                _ => return None,
            }
        }
        Some(VertexWord(w))
    }
}

impl fmt::Debug for VertexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexWord({:#b})", self.0)
    }
}

/// Validate the coordinate count against the model constraints.
pub fn check_n(n: u32) -> Result<()> {
    if !n.is_multiple_of(4) {
        return Err(Error::InvalidN {
            n,
            constraint: "n must be divisible by 4",
        });
    }
    if !(4..=64).contains(&n) {
        return Err(Error::InvalidN {
            n,
            constraint: "n must lie in 4..=64",
        });
    }
    Ok(())
}

/// `N = C(n, n/2)`.
pub fn vertex_count(n: u32) -> u64 {
    binomial(n, n / 2)
}

/// `N1 = C(n/2, n/4)^2`.
pub fn regular_degree(n: u32) -> u64 {
    let half = binomial(n / 2, n / 4);
    half * half
}

/// `N * N1 / 2`.
pub fn edge_count(n: u32) -> u128 {
    vertex_count(n) as u128 * regular_degree(n) as u128 / 2
}

/// Stirling-type approximations `(sqrt(2/pi) 2^n / sqrt(n), (4/pi) 2^n / n)`.
pub fn stirling_estimates(n: u32) -> (f64, f64) {
    let n_f = n as f64;
    let two_n = 2f64.powi(n as i32);
    let pi = std::f64::consts::PI;
    (
        (2.0 / pi).sqrt() * two_n / n_f.sqrt(),
        4.0 / pi * two_n / n_f,
    )
}

/// The complete distance graph with all vertices enumerated in increasing
/// numeric order. Adjacency is computed on demand from popcounts.
#[derive(Clone)]
pub struct DistGraph {
    n: u32,
    vertices: Vec<VertexWord>,
    n1: u64,
    neighbor_cache: Option<Vec<Vec<u32>>>,
}

impl fmt::Debug for DistGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistGraph")
            .field("n", &self.n)
            .field("vertex_count", &self.vertices.len())
            .field("n1", &self.n1)
            .field("cached", &self.neighbor_cache.is_some())
            .finish()
    }
}

impl DistGraph {
    pub fn build(n: u32) -> Result<DistGraph> {
        check_n(n)?;
        let count = vertex_count(n);
        if count > MAX_ENUMERATED_VERTICES {
            return Err(Error::budget(format!(
                "n={n} has {count} vertices; enumeration is capped at {MAX_ENUMERATED_VERTICES}"
            )));
        }
        let mut vertices = Vec::with_capacity(count as usize);
        let mut w = low_mask(n / 2);
        loop {
            vertices.push(VertexWord(w));
            match next_same_weight(w, n) {
                Some(next) => w = next,
                None => break,
            }
        }
        debug_assert_eq!(vertices.len() as u64, count);
        Ok(DistGraph {
            n,
            vertices,
            n1: regular_degree(n),
            neighbor_cache: None,
        })
    }

    /// Build and materialize per-vertex neighbor index lists (`n <= 16`).
    pub fn build_cached(n: u32) -> Result<DistGraph> {
        let mut g = DistGraph::build(n)?;
        if n > MAX_CACHED_N {
            return Err(Error::budget(format!(
                "neighbor cache requested for n={n}; allowed only for n <= {MAX_CACHED_N}"
            )));
        }
        let lists = (0..g.vertices.len())
            .map(|i| {
                g.neighbor_words(g.vertices[i])
                    .map(|w| colex_rank(w.0) as u32)
                    .collect()
            })
            .collect();
        g.neighbor_cache = Some(lists);
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// `N`.
    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// `N1`, the common degree.
    #[inline]
    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn edge_count(&self) -> u128 {
        edge_count(self.n)
    }

    #[inline]
    pub fn vertices(&self) -> &[VertexWord] {
        &self.vertices
    }

    #[inline]
    pub fn vertex(&self, index: usize) -> VertexWord {
        self.vertices[index]
    }

    /// Position of `v` in the canonical order, if `v` is a vertex.
    #[inline]
    pub fn index_of(&self, v: VertexWord) -> Option<usize> {
        if !self.contains(v) {
            return None;
        }
        Some(colex_rank(v.0) as usize)
    }

    #[inline]
    pub fn contains(&self, v: VertexWord) -> bool {
        v.0 & !low_mask(self.n) == 0 && v.0.count_ones() == self.n / 2
    }

    #[inline]
    pub fn adjacent(&self, u: VertexWord, v: VertexWord) -> bool {
        u.inner(v) == self.n / 4
    }

    /// Degree by scanning every vertex.
    pub fn degree(&self, v: VertexWord) -> u64 {
        self.vertices.iter().filter(|&&w| self.adjacent(v, w)).count() as u64
    }

    pub fn neighbor_cache(&self) -> Option<&[Vec<u32>]> {
        self.neighbor_cache.as_deref()
    }

    /// All neighbors of `v`, generated directly by choosing `n/4` of its ones
    /// and `n/4` of its zeros. Yields exactly `N1` words.
    pub fn neighbor_words(&self, v: VertexWord) -> impl Iterator<Item = VertexWord> + '_ {
        let ones = v.0;
        let zeros = !v.0 & low_mask(self.n);
        let half = self.n / 2;
        let quarter = self.n / 4;
        let picks = weight_k_words(half, quarter);
        let picks2 = picks.clone();
        picks.into_iter().flat_map(move |a| {
            let hi = deposit(a, ones);
            picks2
                .clone()
                .into_iter()
                .map(move |b| VertexWord(hi | deposit(b, zeros)))
        })
    }

    /// Neighbor indices of vertex `index`, from the cache when present.
    pub fn neighbor_indices(&self, index: usize) -> Vec<u32> {
        match &self.neighbor_cache {
            Some(lists) => lists[index].clone(),
            None => self
                .neighbor_words(self.vertices[index])
                .map(|w| colex_rank(w.0) as u32)
                .collect(),
        }
    }

    /// The `which`-th neighbor of `v` for `which < N1`; a bijection onto the
    /// neighborhood used to draw uniform random neighbors.
    pub fn nth_neighbor(&self, v: VertexWord, which: u64) -> VertexWord {
        let side = binomial(self.n / 2, self.n / 4);
        debug_assert!(which < side * side);
        let a = colex_unrank(which / side, self.n / 2, self.n / 4);
        let b = colex_unrank(which % side, self.n / 2, self.n / 4);
        let zeros = !v.0 & low_mask(self.n);
        VertexWord(deposit(a, v.0) | deposit(b, zeros))
    }

    /// Number of vertices adjacent to every root. Roots never count
    /// themselves: a root has inner product `n/2` with itself.
    pub fn common_neighbor_count(&self, roots: &[VertexWord]) -> BigCount {
        let count = match roots.split_first() {
            None => self.vertices.len() as u64,
            Some((first, rest)) => self
                .neighbor_words(*first)
                .filter(|&w| rest.iter().all(|&r| self.adjacent(r, w)))
                .count() as u64,
        };
        BigUint::from(count)
    }

    /// Search for three vertices without a common neighbor, examining at most
    /// `budget` candidate triples: mutually adjacent triples first (in
    /// canonical order), then uniformly random triples drawn from `seed`.
    /// A returned triple has been re-verified by a full vertex scan.
    pub fn find_no_common_neighbor_triple(
        &self,
        budget: u64,
        seed: u64,
    ) -> Option<[VertexWord; 3]> {
        let mut remaining = budget;
        let verify = |t: [VertexWord; 3]| {
            !self
                .vertices
                .iter()
                .any(|&w| t.iter().all(|&r| self.adjacent(r, w)))
        };
        let no_common = |a: VertexWord, b: VertexWord, c: VertexWord| {
            !self
                .neighbor_words(a)
                .any(|w| self.adjacent(b, w) && self.adjacent(c, w))
        };

        // triangles u < v < w
        'outer: for &u in &self.vertices {
            let mut nbrs: Vec<VertexWord> = self.neighbor_words(u).filter(|&v| v > u).collect();
            nbrs.sort_unstable();
            for (i, &v) in nbrs.iter().enumerate() {
                for &w in &nbrs[i + 1..] {
                    if !self.adjacent(v, w) {
                        continue;
                    }
                    if remaining == 0 {
                        break 'outer;
                    }
                    remaining -= 1;
                    if no_common(u, v, w) && verify([u, v, w]) {
                        return Some([u, v, w]);
                    }
                }
            }
        }

        let n_vertices = self.vertices.len();
        if n_vertices < 3 {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while remaining > 0 {
            remaining -= 1;
            let a = rng.random_range(0..n_vertices);
            let b = rng.random_range(0..n_vertices);
            let c = rng.random_range(0..n_vertices);
            if a == b || b == c || a == c {
                continue;
            }
            let t = [self.vertices[a], self.vertices[b], self.vertices[c]];
            if no_common(t[0], t[1], t[2]) && verify(t) {
                return Some(t);
            }
        }
        None
    }
}
