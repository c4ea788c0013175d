//! Library kernels against the naive reference implementations.

#![allow(clippy::needless_range_loop)]

mod common;

use std::sync::Arc;

use common::*;
use graphkernels::base::{EdgeKernel, LengthKernel, VertexFeatureMap, VertexKernel};
use graphkernels::shortest_path::{sp_features_explicit, sp_kernel_implicit};
use graphkernels::subgraph::{graphlet_features, subgraph_matching_kernel, SubgraphMatchingOptions};
use graphkernels::walk::{walk_features_explicit, walk_kernel_implicit};
use graphkernels::weighted_vertex::{
    graph_invariant_weight_maps, graphhopper_vertex_maps, wv_features_explicit, wv_kernel_implicit,
};
use graphkernels::wl::{wl_refine_dataset, InitialColors};
use graphkernels::{all_pairs_shortest_paths, PortableRng};
use proptest::prelude::*;

fn half_weight_table() -> EdgeKernel {
    EdgeKernel::Table(Arc::new(vec![vec![1.0, 0.5], vec![0.5, 1.0]]))
}

#[test]
fn walk_kernel_matches_enumeration() {
    let graphs = random_graphs(101, 8, 7, 0.35, 2, 2);
    for length in 0..=3 {
        for g in &graphs {
            for h in &graphs {
                let dirac =
                    walk_kernel_implicit(g, h, &VertexKernel::DiracLabel, &EdgeKernel::DiracLabel, length).unwrap();
                let want = walk_kernel_bruteforce(g, h, length, &|a, b| f64::from(u8::from(a == b)));
                assert_eq!(dirac, want);

                let half = walk_kernel_implicit(g, h, &VertexKernel::DiracLabel, &half_weight_table(), length).unwrap();
                let want = walk_kernel_bruteforce(g, h, length, &|a, b| if a == b { 1.0 } else { 0.5 });
                assert!(relative_error(half, want) <= 1e-12, "{half} vs {want}");
            }
        }
    }
}

#[test]
fn explicit_walk_features_match_enumeration() {
    let graphs = random_graphs(102, 8, 7, 0.4, 3, 2);
    for length in 0..=3 {
        let phi: Vec<_> = graphs
            .iter()
            .map(|g| walk_features_explicit(g, length).unwrap())
            .collect();
        for (g, a) in graphs.iter().zip(&phi) {
            for (h, b) in graphs.iter().zip(&phi) {
                let want = walk_kernel_bruteforce(g, h, length, &|x, y| f64::from(u8::from(x == y)));
                assert_eq!(a.dot(b), want);
            }
        }
    }
}

#[test]
fn uniform_labels_factor_into_walk_counts() {
    let graphs = random_graphs(103, 10, 12, 0.3, 0, 0);
    for length in 0..=5 {
        for g in &graphs {
            for h in &graphs {
                let k = walk_kernel_implicit(g, h, &VertexKernel::DiracLabel, &EdgeKernel::DiracLabel, length).unwrap();
                assert_eq!(k, (walk_count(g, length) * walk_count(h, length)) as f64);
            }
        }
    }
}

#[test]
fn distances_match_floyd_warshall() {
    let mut rng = PortableRng::new(104);
    for _ in 0..40 {
        let g = random_graph(&mut rng, 12, 0.2, 0, 0);
        let d = all_pairs_shortest_paths(&g, true);
        let fw = floyd_warshall(&g);
        for u in 0..g.order() {
            for v in 0..g.order() {
                assert_eq!(d.is_finite(u, v), fw[u][v].is_some());
                if let Some(x) = fw[u][v] {
                    assert_eq!(d.get(u, v), x);
                    let paths = shortest_paths(&g, &fw, u, v).len() as u64;
                    assert_eq!(d.count(u, v), Some(paths));
                }
            }
        }
    }
}

#[test]
fn shortest_path_kernel_matches_quadruple_sum() {
    let graphs = random_graphs(105, 10, 9, 0.3, 3, 0);
    let phi: Vec<_> = graphs.iter().map(sp_features_explicit).collect();
    for (g, a) in graphs.iter().zip(&phi) {
        for (h, b) in graphs.iter().zip(&phi) {
            let want = sp_kernel_bruteforce(g, h);
            assert_eq!(
                sp_kernel_implicit(g, h, &VertexKernel::DiracLabel, LengthKernel::Dirac).unwrap(),
                want
            );
            assert_eq!(a.dot(b), want);
        }
    }
}

#[test]
fn subgraph_kernels_match_isomorphism_counts() {
    let graphs = random_graphs(106, 10, 8, 0.45, 2, 2);
    let opts = SubgraphMatchingOptions::exactly(3).connected();
    for g in &graphs {
        for h in &graphs {
            let (mappings, matches) = subgraph_oracle(g, h);
            let k = subgraph_matching_kernel(g, h, &VertexKernel::DiracLabel, &EdgeKernel::DiracLabel, &opts).unwrap();
            assert_eq!(k, mappings as f64);
            assert_eq!(graphlet_features(g).dot(&graphlet_features(h)), matches as f64);
        }
    }
}

#[test]
fn graphhopper_weights_match_path_enumeration() {
    let graphs = random_graphs(107, 12, 8, 0.35, 0, 0);
    let maps: Vec<_> = graphs.iter().map(|g| graphhopper_vertex_maps(g).unwrap()).collect();
    let oracle: Vec<_> = graphs.iter().map(graphhopper_bruteforce).collect();
    for (mg, og) in maps.iter().zip(&oracle) {
        for (mh, oh) in maps.iter().zip(&oracle) {
            for u in 0..mg.len() {
                for v in 0..mh.len() {
                    assert_eq!(mg[u].dot(&mh[v]), frobenius(&og[u], &oh[v]));
                }
            }
        }
    }
}

#[test]
fn refinement_matches_string_signatures() {
    let graphs = random_graphs(108, 12, 10, 0.25, 0, 0);
    let ds = dataset(graphs.clone());
    let h = 3;
    let ours = wl_refine_dataset(&ds, h, InitialColors::Uniform);
    let oracle = wl_colors(&graphs, h);
    // Colors are arbitrary names; compare the partitions they induce.
    let all: Vec<(usize, usize)> = graphs
        .iter()
        .enumerate()
        .flat_map(|(i, g)| (0..g.order()).map(move |v| (i, v)))
        .collect();
    for it in 0..=h {
        for &(a, u) in &all {
            for &(b, v) in &all {
                let same = ours.colors(a, it)[u] == ours.colors(b, it)[v];
                assert_eq!(same, oracle[a][it][u] == oracle[b][it][v], "iteration {it}");
            }
        }
    }
}

#[test]
fn refinement_is_permutation_invariant() {
    let mut rng = PortableRng::new(109);
    let g = random_graph(&mut rng, 12, 0.3, 3, 0);
    let mut perm: Vec<usize> = (0..g.order()).collect();
    for i in (1..perm.len()).rev() {
        perm.swap(i, rng.below(i + 1));
    }
    let p = g.permuted(&perm).unwrap();
    let ds = dataset(vec![g.clone(), p]);
    let c = wl_refine_dataset(&ds, 3, InitialColors::Labels);
    for it in 0..=3 {
        let mut a = c.colors(0, it).to_vec();
        let mut b = c.colors(1, it).to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}

#[test]
fn weighted_vertex_kernels_match_double_loop() {
    let mut rng = PortableRng::new(110);
    let graphs: Vec<_> = (0..8).map(|_| random_attributed(&mut rng, 9, 0.3, 2, 4)).collect();
    let ds = dataset(graphs.clone());
    let h = 2;
    let wmaps = graph_invariant_weight_maps(&ds, h);
    let colors = wl_colors(&graphs, h);
    let delta = 0.6;
    let hat = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(a, b)| (1.0 - (a - b).abs() / delta).max(0.0))
            .product()
    };
    for (i, g) in graphs.iter().enumerate() {
        for (j, hh) in graphs.iter().enumerate() {
            let weight = |u: usize, v: usize| (0..=h).filter(|&it| colors[i][it][u] == colors[j][it][v]).count() as f64;
            let want = wv_bruteforce(g, hh, &weight, &hat);
            let got = wv_kernel_implicit(g, wmaps.graph(i), hh, wmaps.graph(j), &VertexKernel::Hat { delta }).unwrap();
            assert!(relative_error(got, want) <= 1e-12, "{got} vs {want}");

            let want = wv_bruteforce(g, hh, &weight, &|x, y| f64::from(u8::from(x == y)));
            let a = wv_features_explicit(g, wmaps.graph(i), &VertexFeatureMap::AttributeOneHot).unwrap();
            let b = wv_features_explicit(hh, wmaps.graph(j), &VertexFeatureMap::AttributeOneHot).unwrap();
            assert_eq!(a.dot(&b), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Each iteration refines the previous partition: equal colors at
    // iteration i+1 imply equal colors at iteration i.
    #[test]
    fn refinement_is_monotone(seed in any::<u64>(), n in 1usize..14, p in 0.0f64..0.6) {
        let mut rng = PortableRng::new(seed);
        let graphs: Vec<_> = (0..3).map(|_| random_graph(&mut rng, n, p, 2, 0)).collect();
        let ds = dataset(graphs.clone());
        let c = wl_refine_dataset(&ds, 4, InitialColors::Labels);
        let all: Vec<(usize, usize)> = graphs
            .iter()
            .enumerate()
            .flat_map(|(i, g)| (0..g.order()).map(move |v| (i, v)))
            .collect();
        for it in 0..4 {
            prop_assert!(c.colors_per_iteration()[it + 1] >= c.colors_per_iteration()[it]);
            for &(a, u) in &all {
                for &(b, v) in &all {
                    if c.colors(a, it + 1)[u] == c.colors(b, it + 1)[v] {
                        prop_assert_eq!(c.colors(a, it)[u], c.colors(b, it)[v]);
                    }
                }
            }
        }
    }

    #[test]
    fn walk_kernel_is_symmetric(seed in any::<u64>(), length in 0usize..5) {
        let graphs = random_graphs(seed, 2, 9, 0.35, 2, 2);
        let (g, h) = (&graphs[0], &graphs[1]);
        let ke = half_weight_table();
        let a = walk_kernel_implicit(g, h, &VertexKernel::DiracLabel, &ke, length).unwrap();
        let b = walk_kernel_implicit(h, g, &VertexKernel::DiracLabel, &ke, length).unwrap();
        prop_assert!(relative_error(a, b) <= 1e-12);
    }
}
