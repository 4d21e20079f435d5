use distgraph_core::distgraph::{DistGraph, VertexWord};
use distgraph_core::exactcount::{blockprofile_unrooted_count, PartitionVector};
use distgraph_core::patterns::{parse_pattern, Parsed};
use distgraph_core::sampler::{check_ext, contains_copy, count_copies, sample_gp, ExtMode, RootFilter, SampleSeed};
use distgraph_core::{PatternGraph, RootedNetwork, SampledGraph};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vertex_tuple() -> impl Strategy<Value = (u32, Vec<u64>)> {
    prop::sample::select(vec![4u32, 8, 12, 16, 20, 24]).prop_flat_map(|n| {
        let words = 1..=3usize;
        (Just(n), words.prop_flat_map(move |d| prop::collection::vec(any::<u64>(), d)))
    })
}

/// A random word of popcount n/2 from arbitrary bits.
fn to_vertex(n: u32, seed: u64) -> VertexWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords: Vec<u32> = (0..n).collect();
    for i in (1..coords.len()).rev() {
        coords.swap(i, rng.random_range(0..=i));
    }
    VertexWord(coords[..n as usize / 2].iter().fold(0, |w, &c| w | 1 << c))
}

fn pattern(max_v: usize) -> impl Strategy<Value = PatternGraph> {
    (1..=max_v).prop_flat_map(|v| {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        let m = pairs.len();
        prop::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> =
                pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
            PatternGraph::new(v, &edges).unwrap()
        })
    })
}

fn factorial(v: usize) -> u64 {
    (1..=v as u64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_vector_sums((n, seeds) in vertex_tuple()) {
        let roots: Vec<VertexWord> = seeds.iter().map(|&s| to_vertex(n, s)).collect();
        let pv = PartitionVector::from_roots(n, &roots).unwrap();
        prop_assert_eq!(pv.block_sizes().len(), 1 << roots.len());
        prop_assert_eq!(pv.block_sizes().iter().sum::<u32>(), n);
        prop_assert_eq!(pv.x().iter().sum::<i64>(), 0);
        let back = PartitionVector::from_block_sizes(n, roots.len(), pv.block_sizes().to_vec()).unwrap();
        prop_assert_eq!(back.x(), pv.x());
    }

    #[test]
    fn automorphisms_divide_factorial(f in pattern(7)) {
        let a = f.automorphism_count();
        prop_assert!(a >= 1);
        prop_assert_eq!(factorial(f.vcount()) % a, 0);
    }

    #[test]
    fn balance_chain(f in pattern(6)) {
        prop_assert!(f.max_density() >= f.density());
        if f.is_strictly_balanced() {
            prop_assert!(f.is_balanced());
        }
        if f.is_balanced() {
            prop_assert_eq!(f.max_density(), f.density());
        }
    }

    #[test]
    fn pattern_text_round_trips(f in pattern(8)) {
        let mut text = format!("# generated\nv {}\n", f.vcount());
        for (a, b) in f.edges() {
            text.push_str(&format!("e {a} {b}\n"));
        }
        prop_assert_eq!(parse_pattern(&text).unwrap(), Parsed::Pattern(f));
    }

    #[test]
    fn injective_never_exceeds_homomorphisms(f in pattern(5), n in prop::sample::select(vec![8u32, 12])) {
        let inj = blockprofile_unrooted_count(&f, n, true).unwrap();
        let all = blockprofile_unrooted_count(&f, n, false).unwrap();
        prop_assert!(inj <= all);
        if f.edge_count() == f.vcount() * (f.vcount() - 1) / 2 {
            // all pattern pairs adjacent: images are forced distinct
            prop_assert_eq!(inj, all);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn k2_copies_equal_edges(p in 0.0f64..=1.0, stream in any::<u64>()) {
        let g = DistGraph::build_cached(8).unwrap();
        let s = sample_gp(&g, p, SampleSeed::new(1, stream)).unwrap();
        prop_assert_eq!(count_copies(&PatternGraph::complete(2), &s).unwrap(), BigUint::from(s.edge_count()));
    }

    #[test]
    fn samples_are_reproducible(p in 1e-4f64..0.2, stream in any::<u64>()) {
        let g = DistGraph::build_cached(12).unwrap();
        let a = sample_gp(&g, p, SampleSeed::new(9, stream)).unwrap();
        let b = sample_gp(&g, p, SampleSeed::new(9, stream)).unwrap();
        prop_assert_eq!(a.edges(), b.edges());
        prop_assert!(a.edges().iter().all(|&(i, j)| i < j && g.adjacent(g.vertex(i as usize), g.vertex(j as usize))));
    }

    #[test]
    fn properties_are_monotone_under_nesting(p in 0.02f64..0.6, keep in 0.0f64..1.0, stream in any::<u64>()) {
        let g = DistGraph::build_cached(8).unwrap();
        let big = sample_gp(&g, p, SampleSeed::new(5, stream)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(stream);
        let kept: Vec<(u32, u32)> = big.edges().iter().copied().filter(|_| rng.random_bool(keep)).collect();
        let small = SampledGraph::from_edges(&g, &kept).unwrap();

        for f in [PatternGraph::complete(3), PatternGraph::path(3)] {
            if contains_copy(&f, &small).unwrap() {
                prop_assert!(contains_copy(&f, &big).unwrap());
            }
        }
        for name in ["root-edge", "cherry"] {
            let net = RootedNetwork::named(name).unwrap();
            let filter = RootFilter::Fixed(1);
            if check_ext(&small, &net, &filter, ExtMode::Exhaustive).unwrap().holds {
                prop_assert!(check_ext(&big, &net, &filter, ExtMode::Exhaustive).unwrap().holds);
            }
        }
    }
}
