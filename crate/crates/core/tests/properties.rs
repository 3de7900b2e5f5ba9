use proptest::prelude::*;

use rcslab::circuit::{gate_counts, generate_random_circuit, GateConfig, RandomCircuit};
use rcslab::matching::{
    count_semi_matchings, lovasz_matching_test, maximum_matching, sample_semi_matchings, BipartiteGraph,
    MatchingVerdict, DEFAULT_PRIME,
};
use rcslab::noise::{
    bitflip_channel, general_channel, readout_channel, NoiseModel, Rates, ToyChannelSpec,
};
use rcslab::simulator::{simulate, OutputDistribution, StateVector};
use rcslab::walsh::{attenuate, degree, degree_truncate, inverse_walsh, noise_correlation, walsh_transform};
use rcslab::xeb::{alpha, formula77, total_variance};
use rcslab::stats;

fn distribution(max_n: usize) -> impl Strategy<Value = OutputDistribution> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0.0f64..1.0, 1 << n).prop_filter_map("zero mass", move |w| {
            let total: f64 = w.iter().sum();
            (total > 1e-3).then(|| OutputDistribution::new(n, w.iter().map(|v| v / total).collect()).unwrap())
        })
    })
}

fn valid(d: &OutputDistribution) -> bool {
    d.probs().iter().all(|&p| p >= 0.0) && (stats::sum(d.probs().iter().copied()) - 1.0).abs() < 1e-10
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn small_circuit() -> impl Strategy<Value = RandomCircuit> {
    (1usize..=6, 0usize..=6, any::<u64>())
        .prop_map(|(n, m, seed)| generate_random_circuit(n, m, seed, &GateConfig::default()).unwrap())
}

fn graph(max_a: usize, max_b: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_a, 1..=max_b).prop_flat_map(|(na, nb)| {
        prop::collection::vec(prop::collection::vec(0..nb, 1..=nb), na)
            .prop_map(move |neighbors| BipartiteGraph::new(nb, neighbors).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuits_have_the_advertised_shape(c in small_circuit()) {
        let (g1, g2) = gate_counts(&c);
        prop_assert_eq!(g1, c.n() * (c.m() + 1));
        prop_assert!(g2 <= c.n() * c.m() / 2);
        prop_assert!(c.layers().iter().all(|l| l.is_disjoint()));
        prop_assert!(c.gates().all(|g| g.unitarity_error() < 1e-12));
    }

    #[test]
    fn circuit_text_round_trips(c in small_circuit()) {
        let text = c.to_text();
        let back = RandomCircuit::from_text(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn norm_is_preserved_gate_by_gate(c in small_circuit()) {
        let mut psi = StateVector::zero(c.n()).unwrap();
        for g in c.gates() {
            psi.apply_gate(g);
            prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_circuit_returns_to_zero(c in small_circuit()) {
        let mut psi = StateVector::zero(c.n()).unwrap();
        psi.apply_circuit(&c).unwrap();
        psi.apply_layers(&c.inverse_layers());
        prop_assert!((psi.probabilities().prob(0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn alpha_is_above_minus_one(c in small_circuit()) {
        let d = simulate(&c).unwrap();
        let a = alpha(&d).alpha;
        prop_assert!(a > -1.0);
        let direct = d.dim_f64() * d.probs().iter().map(|p| p * p).sum::<f64>() - 1.0;
        prop_assert!((a - direct).abs() < 1e-12);
    }

    #[test]
    fn bitflip_semigroup(d in distribution(6), s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let twice = bitflip_channel(&bitflip_channel(&d, s).unwrap(), t).unwrap();
        let once = bitflip_channel(&d, s + t - 2.0 * s * t).unwrap();
        prop_assert!(max_abs(twice.probs(), once.probs()) < 1e-12);
    }

    #[test]
    fn channels_preserve_validity(
        d in distribution(6),
        t in 0.0f64..=1.0,
        eq in prop::collection::vec(0.0f64..=1.0, 6),
        w in 0.0f64..=1.0,
    ) {
        prop_assert!(valid(&bitflip_channel(&d, t).unwrap()));
        prop_assert!(valid(&readout_channel(&d, &eq[..d.n()]).unwrap()));
        let mix = ToyChannelSpec::Mixture(vec![(w, t), (1.0 - w, 0.5 * t)]);
        prop_assert!(valid(&general_channel(&d, &mix).unwrap()));
    }

    #[test]
    fn general_channel_is_linear(
        a in distribution(5),
        b_weights in prop::collection::vec(0.01f64..1.0, 32),
        lambda in 0.0f64..=1.0,
        s in 0.0f64..=1.0,
        t in 0.0f64..=1.0,
    ) {
        let n = a.n();
        let total: f64 = b_weights[..1 << n].iter().sum();
        let b = OutputDistribution::new(n, b_weights[..1 << n].iter().map(|v| v / total).collect()).unwrap();
        let spec_s = ToyChannelSpec::Flip(s);
        let spec_t = ToyChannelSpec::Flip(t);

        // Linear in the distribution.
        let ab = OutputDistribution::new(
            n,
            a.probs().iter().zip(b.probs()).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect(),
        ).unwrap();
        let lhs = general_channel(&ab, &spec_s).unwrap();
        let na = general_channel(&a, &spec_s).unwrap();
        let nb = general_channel(&b, &spec_s).unwrap();
        let rhs: Vec<f64> = na.probs().iter().zip(nb.probs()).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect();
        prop_assert!(max_abs(lhs.probs(), &rhs) < 1e-12);

        // Linear in the error law.
        let mixed = general_channel(&a, &ToyChannelSpec::Mixture(vec![(lambda, s), (1.0 - lambda, t)])).unwrap();
        let nt = general_channel(&a, &spec_t).unwrap();
        let rhs: Vec<f64> = na.probs().iter().zip(nt.probs()).map(|(x, y)| lambda * x + (1.0 - lambda) * y).collect();
        prop_assert!(max_abs(mixed.probs(), &rhs) < 1e-12);
    }

    #[test]
    fn walsh_round_trip_and_parseval(f in (1usize..=10).prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, 1 << n))) {
        let s = walsh_transform(&f).unwrap();
        prop_assert!(max_abs(&inverse_walsh(&s), &f) < 1e-12);
        let energy: f64 = f.iter().map(|v| v * v).sum();
        if energy > 1e-9 {
            prop_assert!(s.parseval_error(&f) < 1e-10);
        }
    }

    #[test]
    fn attenuation_semigroup(d in distribution(8), s in 0.0f64..=1.0, t in 0.0f64..=1.0) {
        let spec = walsh_transform(d.probs()).unwrap();
        let twice = attenuate(&attenuate(&spec, s).unwrap(), t).unwrap();
        let once = attenuate(&spec, s + t - 2.0 * s * t).unwrap();
        prop_assert!(max_abs(twice.coefficients(), once.coefficients()) < 1e-12);
    }

    #[test]
    fn truncation_leaves_no_high_degree_mass(d in distribution(8), frac in 0.0f64..=1.0) {
        let spec = walsh_transform(d.probs()).unwrap();
        let bound = (frac * spec.n() as f64) as usize;
        let trunc = degree_truncate(&spec, bound).unwrap();
        for (s, &c) in trunc.spectrum.coefficients().iter().enumerate() {
            if degree(s as u64) > bound {
                prop_assert_eq!(c, 0.0);
            }
        }
        let back = walsh_transform(&trunc.raw).unwrap();
        for (s, &c) in back.coefficients().iter().enumerate() {
            if degree(s as u64) > bound {
                prop_assert!(c.abs() < 1e-15);
            }
        }
        prop_assert!(valid(&trunc.repaired));
    }

    #[test]
    fn noise_correlation_nonincreasing(d in distribution(8)) {
        let mut previous = f64::INFINITY;
        for i in 0..=10 {
            let r = noise_correlation(&d, 0.05 * i as f64).unwrap();
            prop_assert!(r <= previous + 1e-15);
            prop_assert!((-1e-15..=1.0 + 1e-15).contains(&r));
            previous = r;
        }
    }

    #[test]
    fn formula77_monotone_in_every_rate(c in small_circuit(), base in 0.0f64..0.5, bump in 0.0f64..0.5, which in 0usize..3) {
        let rates = |r: f64| Rates::Uniform(r);
        let low = NoiseModel { one_qubit: rates(base), two_qubit: rates(base), readout: rates(base) };
        let mut high = low.clone();
        match which {
            0 => high.one_qubit = rates(base + bump),
            1 => high.two_qubit = rates(base + bump),
            _ => high.readout = rates(base + bump),
        }
        prop_assert!(formula77(&high, &c).unwrap().value <= formula77(&low, &c).unwrap().value);
    }

    #[test]
    fn total_variance_matches_pooled_population_variance(
        groups in prop::collection::vec(prop::collection::vec(-100.0f64..100.0, 2..20), 2..10),
    ) {
        let d = total_variance(&groups).unwrap();
        let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
        let direct = stats::population_variance(&pooled);
        prop_assert!((d.within + d.between - direct).abs() <= 1e-12 * direct.max(1.0));
        prop_assert!(d.within >= 0.0 && d.between >= 0.0);
    }

    #[test]
    fn semi_matching_support_is_correct(g in graph(5, 4), seed in any::<u64>()) {
        for c in sample_semi_matchings(&g, 20, seed).unwrap() {
            prop_assert_eq!(c.total(), g.left_size());
            prop_assert!(count_semi_matchings(&g, &c).unwrap() > 0);
        }
    }

    #[test]
    fn lovasz_yes_is_never_wrong(g in (1usize..=6).prop_flat_map(|n| graph(n, n).prop_filter("square", |g| g.left_size() == g.right_size())), seed in any::<u64>()) {
        let outcome = lovasz_matching_test(&g, DEFAULT_PRIME, 1, seed).unwrap();
        if outcome.verdict == MatchingVerdict::PerfectMatching {
            prop_assert_eq!(maximum_matching(&g), g.left_size());
        }
    }
}
