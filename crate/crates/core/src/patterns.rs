//! Small pattern graphs `F` and rooted networks `(R, H)`.
//!
//! Vertices are labeled `0..vcount` and stored as adjacency bitmasks, so
//! subgraph and subnet predicates enumerate vertex subsets directly.

use std::fmt;
use std::path::Path;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Exact density values.
pub type Rational = Ratio<i64>;

pub const MAX_PATTERN_VERTICES: usize = 10;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    vcount: usize,
    adj: Vec<u16>,
}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternGraph(v={}, edges={:?})", self.vcount, self.edges())
    }
}

impl PatternGraph {
    pub fn new(vcount: usize, edges: &[(usize, usize)]) -> Result<PatternGraph> {
        if vcount == 0 || vcount > MAX_PATTERN_VERTICES {
            return Err(Error::precondition(format!(
                "pattern vertex count {vcount} outside 1..={MAX_PATTERN_VERTICES}"
            )));
        }
        let mut g = PatternGraph {
            vcount,
            adj: vec![0; vcount],
        };
        for &(a, b) in edges {
            g.try_add_edge(a, b).map_err(Error::Precondition)?;
        }
        Ok(g)
    }

    fn try_add_edge(&mut self, a: usize, b: usize) -> std::result::Result<(), String> {
        if a >= self.vcount || b >= self.vcount {
            return Err(format!("edge {a}-{b} references a label >= {}", self.vcount));
        }
        if a == b {
            return Err(format!("loop at vertex {a}"));
        }
        if self.has_edge(a, b) {
            return Err(format!("duplicate edge {a}-{b}"));
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        Ok(())
    }

    pub fn complete(k: usize) -> PatternGraph {
        let edges: Vec<_> = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .collect();
        PatternGraph::new(k, &edges).expect("valid complete graph")
    }

    pub fn path(k: usize) -> PatternGraph {
        let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        PatternGraph::new(k, &edges).expect("valid path")
    }

    pub fn cycle(k: usize) -> PatternGraph {
        let mut edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        edges.push((k - 1, 0));
        PatternGraph::new(k, &edges).expect("valid cycle")
    }

    #[inline]
    pub fn vcount(&self) -> usize {
        self.vcount
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    /// Neighbor bitmask of vertex `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u16 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vcount)
            .flat_map(|a| (a + 1..self.vcount).filter(move |&b| self.has_edge(a, b)).map(move |b| (a, b)))
            .collect()
    }

    fn all_mask(&self) -> u16 {
        ((1u32 << self.vcount) - 1) as u16
    }

    /// Edges of the subgraph induced on the vertex set `mask`.
    pub fn induced_edge_count(&self, mask: u16) -> usize {
        let mut twice = 0;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            twice += (self.adj[v] & mask).count_ones() as usize;
            rest &= rest - 1;
        }
        twice / 2
    }

    /// Copy induced on `mask`, relabeled in increasing label order.
    pub fn induced(&self, mask: u16) -> PatternGraph {
        let labels: Vec<usize> = (0..self.vcount).filter(|&v| mask >> v & 1 == 1).collect();
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter(|&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .map(|(a, b)| {
                let pa = labels.iter().position(|&x| x == a).unwrap();
                let pb = labels.iter().position(|&x| x == b).unwrap();
                (pa, pb)
            })
            .collect();
        PatternGraph::new(labels.len(), &edges).expect("induced subgraph is valid")
    }

    /// Isolated vertices as a mask.
    pub fn isolated_mask(&self) -> u16 {
        (0..self.vcount)
            .filter(|&v| self.adj[v] == 0)
            .fold(0, |m, v| m | 1 << v)
    }

    pub fn is_connected(&self) -> bool {
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = self.adj[v] & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == self.all_mask()
    }

    /// `e(F) / v(F)`.
    pub fn density(&self) -> Rational {
        Rational::new(self.edge_count() as i64, self.vcount as i64)
    }

    /// Maximum density over all nonempty induced subgraphs.
    pub fn max_density(&self) -> Rational {
        (1..=self.all_mask())
            .map(|m| Rational::new(self.induced_edge_count(m) as i64, m.count_ones() as i64))
            .max()
            .expect("at least one subset")
    }

    fn proper_subsets_below(&self, strict: bool) -> bool {
        let full = self.all_mask();
        let rho = self.density();
        (1..full).all(|m| {
            let d = Rational::new(self.induced_edge_count(m) as i64, m.count_ones() as i64);
            if strict {
                d < rho
            } else {
                d <= rho
            }
        })
    }

    /// Every proper nonempty subgraph is strictly sparser than `F`.
    pub fn is_strictly_balanced(&self) -> bool {
        self.proper_subsets_below(true)
    }

    pub fn is_balanced(&self) -> bool {
        self.proper_subsets_below(false)
    }

    /// Number of edge-preserving vertex permutations.
    pub fn automorphism_count(&self) -> u64 {
        self.count_automorphisms(&[])
    }

    /// Automorphisms fixing each vertex in `fixed` pointwise. Backtracking
    /// over images with degree and placed-neighbor consistency pruning.
    pub(crate) fn count_automorphisms(&self, fixed: &[usize]) -> u64 {
        let v = self.vcount;
        let mut image = vec![usize::MAX; v];
        let mut used: u16 = 0;
        for &f in fixed {
            image[f] = f;
            used |= 1 << f;
        }
        let free: Vec<usize> = (0..v).filter(|x| !fixed.contains(x)).collect();
        self.auto_search(&free, 0, &mut image, &mut used)
    }

    fn auto_search(
        &self,
        free: &[usize],
        depth: usize,
        image: &mut [usize],
        used: &mut u16,
    ) -> u64 {
        let Some(&src) = free.get(depth) else {
            return 1;
        };
        let mut total = 0;
        for dst in 0..self.vcount {
            if *used >> dst & 1 == 1 || self.degree(dst) != self.degree(src) {
                continue;
            }
            let consistent = (0..self.vcount).all(|other| {
                let img = image[other];
                img == usize::MAX || self.has_edge(src, other) == self.has_edge(dst, img)
            });
            if !consistent {
                continue;
            }
            image[src] = dst;
            *used |= 1 << dst;
            total += self.auto_search(free, depth + 1, image, used);
            *used &= !(1 << dst);
            image[src] = usize::MAX;
        }
        total
    }

    /// Built-in pattern fixtures by name.
    pub fn named(name: &str) -> Option<PatternGraph> {
        Some(match name {
            "k1" => PatternGraph::complete(1),
            "k2" => PatternGraph::complete(2),
            "p3" => PatternGraph::path(3),
            "k3" => PatternGraph::complete(3),
            "p4" => PatternGraph::path(4),
            "c4" => PatternGraph::cycle(4),
            "k4" => PatternGraph::complete(4),
            _ => return None,
        })
    }
}

/// A rooted network `(R, H)`: the roots are an ordered label sequence and
/// the non-roots `y_1, ..., y_k` are the remaining labels in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedNetwork {
    h: PatternGraph,
    roots: Vec<usize>,
    non_roots: Vec<usize>,
}

impl RootedNetwork {
    pub fn new(h: PatternGraph, roots: Vec<usize>) -> Result<RootedNetwork> {
        let v = h.vcount();
        if roots.is_empty() {
            return Err(Error::precondition("a network needs at least one root"));
        }
        for (i, &r) in roots.iter().enumerate() {
            if r >= v {
                return Err(Error::precondition(format!("root label {r} out of range")));
            }
            if roots[..i].contains(&r) {
                return Err(Error::precondition(format!("root label {r} repeated")));
            }
        }
        let non_roots: Vec<usize> = (0..v).filter(|x| !roots.contains(x)).collect();
        if non_roots.is_empty() {
            return Err(Error::precondition("a network needs at least one non-root vertex"));
        }
        Ok(RootedNetwork { h, roots, non_roots })
    }

    pub fn graph(&self) -> &PatternGraph {
        &self.h
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn non_roots(&self) -> &[usize] {
        &self.non_roots
    }

    /// Number of roots.
    pub fn d(&self) -> usize {
        self.roots.len()
    }

    /// Number of non-roots.
    pub fn k(&self) -> usize {
        self.non_roots.len()
    }

    fn root_mask(&self) -> u16 {
        self.roots.iter().fold(0, |m, &r| m | 1 << r)
    }

    /// Edges with at least one non-root endpoint.
    pub fn l(&self) -> usize {
        self.h.edge_count() - self.h.induced_edge_count(self.root_mask())
    }

    /// `l / k`.
    pub fn density(&self) -> Rational {
        Rational::new(self.l() as i64, self.k() as i64)
    }

    /// For each non-root `y_s` (in order), the positions among the placed
    /// sequence `z_1..z_d, y_1..y_{s-1}` it must be adjacent to.
    pub fn placement_steps(&self) -> Vec<Vec<usize>> {
        let order: Vec<usize> = self.roots.iter().chain(&self.non_roots).copied().collect();
        (0..self.k())
            .map(|s| {
                let y = self.non_roots[s];
                let placed = self.d() + s;
                (0..placed).filter(|&t| self.h.has_edge(y, order[t])).collect()
            })
            .collect()
    }

    /// Every subnet `R ⊂ S ⊊ V(H)` has density strictly below `ρ(R, H)`.
    pub fn is_strictly_balanced(&self) -> bool {
        let roots = self.root_mask();
        let full = ((1u32 << self.h.vcount()) - 1) as u16;
        let rho = self.density();
        let inside_roots = self.h.induced_edge_count(roots) as i64;
        let free = full & !roots;
        // nonempty proper subsets of the non-root set
        let mut sub = (free.wrapping_sub(1)) & free;
        while sub != 0 {
            let s = roots | sub;
            let l = self.h.induced_edge_count(s) as i64 - inside_roots;
            if Rational::new(l, sub.count_ones() as i64) >= rho {
                return false;
            }
            sub = (sub - 1) & free;
        }
        true
    }

    /// Every root has at least one non-root neighbor.
    pub fn is_nontrivial(&self) -> bool {
        let roots = self.root_mask();
        self.roots.iter().all(|&r| self.h.neighbors(r) & !roots != 0)
    }

    /// `c1`: automorphisms of `H` fixing every root.
    pub fn root_fixing_automorphism_count(&self) -> u64 {
        self.h.count_automorphisms(&self.roots)
    }

    /// Built-in network fixtures by name. Roots come first in the labeling.
    pub fn named(name: &str) -> Option<RootedNetwork> {
        let (v, edges, roots): (usize, &[(usize, usize)], &[usize]) = match name {
            // z - y
            "root-edge" => (2, &[(0, 1)], &[0]),
            // z1 - y - z2
            "cherry" => (3, &[(0, 2), (1, 2)], &[0, 1]),
            // z - y1, z - y2
            "two-children" => (3, &[(0, 1), (0, 2)], &[0]),
            // z1 - y1 - y2 - z2
            "path-extension" => (4, &[(0, 2), (2, 3), (3, 1)], &[0, 1]),
            // z - y1, z - y2, y1 - y2
            "root-triangle" => (3, &[(0, 1), (0, 2), (1, 2)], &[0]),
            _ => return None,
        };
        let h = PatternGraph::new(v, edges).ok()?;
        RootedNetwork::new(h, roots.to_vec()).ok()
    }
}

pub const PATTERN_FIXTURES: &[&str] = &["k1", "k2", "p3", "k3", "p4", "c4", "k4"];
pub const NETWORK_FIXTURES: &[&str] = &[
    "root-edge",
    "cherry",
    "two-children",
    "path-extension",
    "root-triangle",
];

/// Result of parsing a pattern file: a network when a `roots` line exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Pattern(PatternGraph),
    Network(RootedNetwork),
}

/// Parse the line-oriented pattern format:
///
/// ```text
/// # comment
/// v 3
/// e 0 1
/// e 1 2
/// roots 0
/// ```
pub fn parse_pattern(text: &str) -> Result<Parsed> {
    let mut graph: Option<PatternGraph> = None;
    let mut roots: Option<(usize, Vec<usize>)> = None;
    let parse_err = |line: usize, message: String| Error::Parse { line, message };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let directive = parts.next().unwrap_or_default();
        let nums: Vec<usize> = parts
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("expected a nonnegative integer, got {t:?}")))
            })
            .collect::<Result<_>>()?;
        match directive {
            "v" => {
                if graph.is_some() {
                    return Err(parse_err(line_no, "repeated 'v' directive".into()));
                }
                let [count] = nums[..] else {
                    return Err(parse_err(line_no, "'v' takes exactly one count".into()));
                };
                let g = PatternGraph::new(count, &[]).map_err(|e| parse_err(line_no, e.to_string()))?;
                graph = Some(g);
            }
            "e" => {
                let Some(g) = graph.as_mut() else {
                    return Err(parse_err(line_no, "'e' before 'v'".into()));
                };
                let [a, b] = nums[..] else {
                    return Err(parse_err(line_no, "'e' takes exactly two labels".into()));
                };
                g.try_add_edge(a, b).map_err(|m| parse_err(line_no, m))?;
            }
            "roots" => {
                if roots.is_some() {
                    return Err(parse_err(line_no, "repeated 'roots' directive".into()));
                }
                if nums.is_empty() {
                    return Err(parse_err(line_no, "'roots' needs at least one label".into()));
                }
                roots = Some((line_no, nums));
            }
            other => {
                return Err(parse_err(line_no, format!("unknown directive {other:?}")));
            }
        }
    }

    let graph = graph.ok_or_else(|| parse_err(text.lines().count().max(1), "missing 'v' directive".into()))?;
    match roots {
        None => Ok(Parsed::Pattern(graph)),
        Some((line_no, r)) => {
            if let Some(&bad) = r.iter().find(|&&x| x >= graph.vcount()) {
                return Err(parse_err(line_no, format!("root label {bad} out of range")));
            }
            RootedNetwork::new(graph, r)
                .map(Parsed::Network)
                .map_err(|e| parse_err(line_no, e.to_string()))
        }
    }
}

/// Resolve a named fixture or read a pattern file.
pub fn load_source(source: &str) -> Result<Parsed> {
    if let Some(net) = RootedNetwork::named(source) {
        return Ok(Parsed::Network(net));
    }
    if let Some(g) = PatternGraph::named(source) {
        return Ok(Parsed::Pattern(g));
    }
    let path = Path::new(source);
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::precondition(format!("{source:?} is neither a named fixture nor a readable file: {e}"))
    })?;
    parse_pattern(&text)
}
