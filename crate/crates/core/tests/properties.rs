use motifscope::count::{count_induced, count_subgraph};
use motifscope::estimators::{Estimator, EstimatorConfig, Family};
use motifscope::experiment::{run_experiment, summarize, summarize_records, ExperimentConfig, GraphSource};
use motifscope::graph::{self, Graph};
use motifscope::motif::Motif;
use motifscope::sampling::{draw, parse_dump, rng_for, write_dump, SamplerKind};
use motifscope::theory::distribution::{class_counts, mc_tv_estimate, tv_exact};
use motifscope::theory::exact_moments;
use motifscope::theory::gadgets::paw_cycle_pair;
use proptest::prelude::*;

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..9).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for j in 1..n as u32 {
                for i in 0..j {
                    if it.next().unwrap() {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn estimators_unbiased_on_random_graphs(g in small_graph(), pi in 1usize..9) {
        let p = pi as f64 / 10.0;
        let d = g.max_degree().max(1);
        let cfgs = vec![
            EstimatorConfig::new(Family::HtSubgraph, Motif::triangle(), p),
            EstimatorConfig::new(Family::HtSubgraph, Motif::cycle(4).unwrap(), p),
            EstimatorConfig::new(Family::HtNeighborhood, Motif::wedge(), p),
            EstimatorConfig::new(Family::LinearEdge, Motif::edge(), p).with_d(d),
            EstimatorConfig::new(Family::LinearMotif, Motif::triangle(), p).with_d(d),
            EstimatorConfig::new(Family::AdaptiveEdge, Motif::edge(), p),
            EstimatorConfig::new(Family::NonInducedC4, Motif::cycle(4).unwrap(), p),
            EstimatorConfig::new(Family::PlanarTriangle, Motif::triangle(), p),
        ];
        let ests: Vec<Estimator> = cfgs.iter().map(|c| Estimator::build(c).unwrap()).collect();
        let ms = exact_moments(&g, p, &ests).unwrap();
        for (e, m) in ests.iter().zip(ms) {
            let t = e.target(&g).unwrap() as f64;
            prop_assert!((m.mean - t).abs() <= 1e-9 * t.max(1.0), "{:?}: {} vs {}", e.family(), m.mean, t);
        }
    }

    #[test]
    fn dumps_round_trip(g in small_graph(), seed in any::<u64>(), nb in any::<bool>()) {
        let kind = if nb { SamplerKind::Neighborhood } else { SamplerKind::Subgraph };
        let s = draw(&g, 0.5, kind, &mut rng_for(seed, 0)).unwrap();
        let text = write_dump(&s, 0.5, seed);
        let (p, sd, back) = parse_dump(&text).unwrap();
        prop_assert_eq!(p, 0.5);
        prop_assert_eq!(sd, seed);
        prop_assert_eq!(write_dump(&back, 0.5, seed), text);
    }
}

#[test]
fn wedges_in_forests_are_noninduced_wedges() {
    let g = graph::complete_tree(3, 2);
    assert_eq!(count_induced(&Motif::wedge(), &g).unwrap().count, count_subgraph(&Motif::wedge(), &g).unwrap());
}

fn er_config(family: Family, motif: Motif) -> ExperimentConfig {
    let src = GraphSource::Er { n: 200, delta: 0.05, seed: 11, keep: None };
    let mut cfg = ExperimentConfig::new(src, family, motif, vec![0.3, 0.6]);
    cfg.reps = 6;
    cfg.seed = 42;
    cfg
}

#[test]
fn experiments_are_deterministic_across_pools() {
    let cfg = er_config(Family::LinearMotif, Motif::triangle());
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| summarize(&run_experiment(&cfg).unwrap().records).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn summary_matches_records() {
    let x = run_experiment(&er_config(Family::AdaptiveEdge, Motif::edge())).unwrap();
    assert_eq!(summarize_records(&x.records), x.summary);
    let text = summarize(&x.records).unwrap();
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap(), vec!["p", "mean_rel_err", "std_rel_err", "n_reps"]);
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    for (row, s) in rows.iter().zip(&x.summary) {
        assert_eq!(row[1].parse::<f64>().unwrap(), s.mean_rel_err);
        assert_eq!(row[3].parse::<usize>().unwrap(), 6);
    }
    assert!(x.records.iter().all(|r| r.rel_err >= 0.0));
}

#[test]
fn monte_carlo_tv_agrees_with_exact() {
    let pair = paw_cycle_pair();
    let a = class_counts(&pair.h, SamplerKind::Subgraph).unwrap();
    let b = class_counts(&pair.h_prime, SamplerKind::Subgraph).unwrap();
    let p = 0.4;
    let exact = tv_exact(&a, &b, p).unwrap();
    let mc = mc_tv_estimate(&pair.h, &pair.h_prime, p, SamplerKind::Subgraph, 100_000, 5).unwrap();
    assert!((mc.tv - exact).abs() < 0.02, "{} vs {exact}", mc.tv);
    let tvs: Vec<f64> = [0.4, 0.2, 0.1].iter().map(|&p| tv_exact(&a, &b, p).unwrap()).collect();
    assert!(tvs[0] > tvs[1] && tvs[1] > tvs[2]);
}
