//! Cross-checks against independent reference computations.

use std::collections::HashMap;

use distgraph_core::distgraph::{edge_count, DistGraph, VertexWord};
use distgraph_core::exactcount::{
    blockprofile_unrooted_count, bruteforce_monomorphisms, bruteforce_monomorphisms_exhaustive,
    bruteforce_rooted_count, PartitionVector,
};
use distgraph_core::experiments::{poisson_experiment, threshold_sweep};
use distgraph_core::sampler::{check_ext, count_copies, sample_gp, tilde_fraction, ExtMode, RootFilter, SampleSeed};
use distgraph_core::{PatternGraph, RootedNetwork, SampledGraph};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_words(n: u32) -> Vec<u64> {
    (0u64..1 << n).filter(|w| w.count_ones() == n / 2).collect()
}

#[test]
fn graph_matches_raw_enumeration() {
    for n in [4u32, 8, 12] {
        let g = DistGraph::build(n).unwrap();
        let words = all_words(n);
        let got: Vec<u64> = g.vertices().iter().map(|v| v.0).collect();
        assert_eq!(got, words);
        let mut edges = 0u128;
        for &u in &words {
            for &v in &words {
                let adj = (u & v).count_ones() == n / 4;
                assert_eq!(g.adjacent(VertexWord(u), VertexWord(v)), adj);
                assert_eq!(adj, g.adjacent(VertexWord(v), VertexWord(u)));
                edges += adj as u128;
            }
        }
        assert_eq!(edges / 2, edge_count(n));
    }
}

#[test]
fn adjacent_pairs_share_common_neighbor_counts() {
    let g = DistGraph::build(16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut seen = None;
    for _ in 0..50 {
        let u = g.vertex(rng.random_range(0..g.vertex_count()));
        let v = g.nth_neighbor(u, rng.random_range(0..g.n1()));
        assert!(g.adjacent(u, v));
        let c = g.common_neighbor_count(&[u, v]);
        assert_eq!(*seen.get_or_insert(c.clone()), c);
    }
}

#[test]
fn no_triple_without_common_neighbor_at_8() {
    let g = DistGraph::build(8).unwrap();
    let vs = g.vertices();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            for c in b + 1..vs.len() {
                assert!(!g.common_neighbor_count(&[vs[a], vs[b], vs[c]]).is_zero());
            }
        }
    }
    assert!(g.find_no_common_neighbor_triple(100_000, 1).is_none());
}

#[test]
fn rooted_counts_depend_only_on_partition_vector() {
    let g = DistGraph::build(8).unwrap();
    for name in ["cherry", "two-children", "path-extension"] {
        let net = RootedNetwork::named(name).unwrap();
        let mut by_x: HashMap<Vec<i64>, BigUint> = HashMap::new();
        for &u in g.vertices() {
            for &v in g.vertices().iter().step_by(3) {
                let roots = &[u, v][..net.d()];
                let pv = PartitionVector::from_roots(8, roots).unwrap();
                let count = bruteforce_rooted_count(&net, roots, &g, false);
                let prev = by_x.entry(pv.x().to_vec()).or_insert_with(|| count.clone());
                assert_eq!(*prev, count, "{name} x={:?}", pv.x());
            }
        }
    }
}

#[test]
fn monomorphisms_divisible_by_automorphisms() {
    let g = DistGraph::build(8).unwrap();
    for f in [PatternGraph::path(3), PatternGraph::complete(3), PatternGraph::cycle(4), PatternGraph::path(4)] {
        let m = bruteforce_monomorphisms(&f, &g);
        assert!((m % f.automorphism_count()).is_zero());
    }
}

#[test]
fn pinned_brute_force_matches_exhaustive() {
    let g = DistGraph::build(8).unwrap();
    for f in [PatternGraph::complete(2), PatternGraph::path(3), PatternGraph::complete(3)] {
        assert_eq!(bruteforce_monomorphisms(&f, &g), bruteforce_monomorphisms_exhaustive(&f, &g));
    }
}

#[test]
fn unrooted_counts_cover_disconnected_patterns() {
    let g = DistGraph::build(8).unwrap();
    let two_edges = PatternGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
    let with_isolated = PatternGraph::new(4, &[(0, 1), (1, 2)]).unwrap();
    for f in [two_edges, with_isolated] {
        assert_eq!(blockprofile_unrooted_count(&f, 8, true).unwrap(), bruteforce_monomorphisms(&f, &g));
    }
}

/// Does any assignment of non-root images in V^k realize the required
/// sample edges? Plain nested loops over all candidates.
fn naive_extends(s: &SampledGraph, net: &RootedNetwork, roots: &[usize]) -> bool {
    let h = net.graph();
    let nv = s.base().vertex_count();
    let k = net.k();
    let mut image = vec![0usize; h.vcount()];
    for (slot, &r) in net.roots().iter().enumerate() {
        image[r] = roots[slot];
    }
    let required: Vec<(usize, usize)> = h
        .edges()
        .into_iter()
        .filter(|&(a, b)| !(net.roots().contains(&a) && net.roots().contains(&b)))
        .collect();
    let total = nv.pow(k as u32);
    (0..total).any(|mut flat| {
        for &y in net.non_roots() {
            image[y] = flat % nv;
            flat /= nv;
        }
        required.iter().all(|&(a, b)| s.has_edge(image[a], image[b]))
    })
}

#[test]
fn check_ext_matches_naive_reference() {
    let g = DistGraph::build(8).unwrap();
    let filter = RootFilter::Fixed(1);
    for name in ["root-edge", "cherry", "two-children", "path-extension"] {
        let net = RootedNetwork::named(name).unwrap();
        for (t, p) in [0.05, 0.2, 0.5, 0.9].into_iter().enumerate() {
            let s = sample_gp(&g, p, SampleSeed::new(31, t as u64)).unwrap();
            let report = check_ext(&s, &net, &filter, ExtMode::Exhaustive).unwrap();
            let nv = g.vertex_count();
            let mut expected = true;
            'outer: for flat in 0..nv.pow(net.d() as u32) {
                let roots: Vec<usize> = (0..net.d()).map(|i| flat / nv.pow(i as u32) % nv).collect();
                let roots: Vec<usize> = roots.into_iter().rev().collect();
                let words: Vec<VertexWord> = roots.iter().map(|&i| g.vertex(i)).collect();
                let pv = PartitionVector::from_roots(8, &words).unwrap();
                if pv.max_abs_x() > 1 {
                    continue;
                }
                if !naive_extends(&s, &net, &roots) {
                    expected = false;
                    break 'outer;
                }
            }
            assert_eq!(report.holds, expected, "{name} p={p}");
        }
    }
}

#[test]
fn tilde_fraction_matches_intersection_oracle() {
    // for pairs, |x| = |m - n/4| with m the support intersection
    for (n, f) in [(8u32, 0u64), (8, 1), (12, 1)] {
        let words = all_words(n);
        let hits = words
            .iter()
            .flat_map(|&u| words.iter().map(move |&v| (u & v).count_ones() as i64))
            .filter(|&m| (m - n as i64 / 4).unsigned_abs() <= f)
            .count();
        let exact = hits as f64 / (words.len() * words.len()) as f64;
        let r = tilde_fraction(n, 2, &RootFilter::Fixed(f), 1, 0).unwrap();
        assert!(r.exact);
        assert_eq!(r.hits as usize, hits);
        assert!((r.estimate - exact).abs() < 1e-15);
    }
    let r = tilde_fraction(16, 2, &RootFilter::Exponent(0.6), 2000, 3).unwrap();
    assert_eq!(r.estimate, 1.0);
}

#[test]
fn sample_mean_matches_exact_expectation() {
    let g = DistGraph::build(8).unwrap();
    let p3 = PatternGraph::path(3);
    let copies = bruteforce_monomorphisms(&p3, &g) / p3.automorphism_count();
    let p = 0.1;
    let expected = copies.to_f64().unwrap() * p * p;
    let xs: Vec<f64> = (0..1000)
        .map(|t| count_copies(&p3, &sample_gp(&g, p, SampleSeed::new(8, t)).unwrap()).unwrap().to_f64().unwrap())
        .collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    assert!((mean - expected).abs() <= 4.0 * (var / xs.len() as f64).sqrt(), "{mean} vs {expected}");
}

#[test]
fn sparse_edge_counts_are_binomial() {
    let g = DistGraph::build(16).unwrap();
    let p = 1e-3;
    let e = g.edge_count() as f64;
    let counts: Vec<f64> = (0..200).map(|t| sample_gp(&g, p, SampleSeed::new(2, t)).unwrap().edge_count() as f64).collect();
    let mean = counts.iter().sum::<f64>() / counts.len() as f64;
    let sd = (e * p * (1.0 - p) / counts.len() as f64).sqrt();
    assert!((mean - e * p).abs() <= 4.0 * sd);
}

#[test]
fn wilson_intervals_cover_exact_k2_probabilities() {
    let k2 = PatternGraph::complete(2);
    let alphas: Vec<f64> = (0..20).map(|i| 0.05 * 1.3f64.powi(i)).collect();
    let edges = edge_count(8) as f64;
    let mut covered = 0;
    let mut rows = 0;
    for seed in 0..10 {
        let r = threshold_sweep(&k2, 8, &alphas, 400, seed).unwrap();
        assert_eq!(r.rows.len(), alphas.len());
        for row in &r.rows {
            assert!(row.hit_count <= row.trials);
            let exact = 1.0 - (1.0 - row.p).powf(edges);
            covered += (row.wilson_ci_low <= exact && exact <= row.wilson_ci_high) as usize;
            rows += 1;
        }
    }
    assert!(covered * 10 >= rows * 9, "{covered}/{rows} rows covered");
}

#[test]
fn poisson_mean_identity_beyond_the_fixture() {
    let r = poisson_experiment(&PatternGraph::complete(2), 12, 2.0, 1000, 21).unwrap();
    assert!((r.empirical_mean - r.lambda_exact).abs() <= r.mean_tolerance());
}
