use std::collections::HashMap;

use rcslab::matching::{
    count_semi_matchings, lovasz_matching_test, sample_semi_matchings, BipartiteGraph, MatchingVerdict, MultiSubset,
    DEFAULT_PRIME,
};

#[test]
fn complete_two_by_two_frequencies() {
    let g = BipartiteGraph::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
    let both = MultiSubset::new(vec![1, 1]);
    assert_eq!(count_semi_matchings(&g, &both).unwrap(), 2);
    assert_eq!(count_semi_matchings(&g, &MultiSubset::new(vec![2, 0])).unwrap(), 1);

    let k = 200_000;
    let mut tally: HashMap<MultiSubset, usize> = HashMap::new();
    for c in sample_semi_matchings(&g, k, 3).unwrap() {
        *tally.entry(c).or_insert(0) += 1;
    }
    // Binomial 4-sigma bands around 1/2 and 1/4.
    let freq = |c: Vec<u32>| tally.get(&MultiSubset::new(c)).copied().unwrap_or(0) as f64 / k as f64;
    assert!((freq(vec![1, 1]) - 0.5).abs() < 4.0 * (0.25 / k as f64).sqrt());
    assert!((freq(vec![2, 0]) - 0.25).abs() < 4.0 * (0.1875 / k as f64).sqrt());
    assert!((freq(vec![0, 2]) - 0.25).abs() < 4.0 * (0.1875 / k as f64).sqrt());
}

#[test]
fn single_neighbour_graphs_are_deterministic() {
    let g = BipartiteGraph::new(3, vec![vec![2], vec![0], vec![2]]).unwrap();
    let draws = sample_semi_matchings(&g, 50, 1).unwrap();
    assert!(draws.iter().all(|c| c.counts() == [1, 0, 2]));
}

#[test]
fn diagonal_and_collapsed_graphs() {
    let diagonal = BipartiteGraph::new(5, (0..5).map(|i| vec![i]).collect()).unwrap();
    for seed in 0..20 {
        let out = lovasz_matching_test(&diagonal, DEFAULT_PRIME, 1, seed).unwrap();
        assert_eq!(out.verdict, MatchingVerdict::PerfectMatching);
        assert_eq!(out.trials, 1);
    }
    let collapsed = BipartiteGraph::new(2, vec![vec![0], vec![0]]).unwrap();
    for seed in 0..20 {
        let out = lovasz_matching_test(&collapsed, DEFAULT_PRIME, 4, seed).unwrap();
        assert_eq!(out.verdict, MatchingVerdict::ProbablyNone);
        assert_eq!(out.trials, 4);
        assert!(out.error_bound <= (2.0 / DEFAULT_PRIME as f64).powi(4) * 1.0000001);
    }
}

#[test]
fn graph_file_format() {
    let g = BipartiteGraph::parse("na=2 nb=3\n0 2\n1\n").unwrap();
    assert_eq!(g.neighbors(0), &[0, 2]);
    assert!(BipartiteGraph::parse("na=1 nb=2\n5\n").is_err());
    assert_eq!(BipartiteGraph::parse(&g.to_string()).unwrap(), g);
}
