#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::type_complexity,
    clippy::manual_checked_ops
)]
use std::collections::{BTreeMap, HashMap};

use proptest::prelude::*;

use epv_core::geometry::CentreSet;
use epv_core::ingest::{
    dedupe_locations, filter_categories, partition, preprocess, read_actions, teams, write_actions,
    Category, RawEvent,
};
use epv_core::mixture::{
    fit_dirichlet_mle, gibbs_fit, sample_dirichlet, PreparedDataset, PriorSpec, SamplerConfig,
};
use epv_core::ratings::rate_with;
use epv_core::surfaces::{epv_at, prob_at};
use epv_core::synth::SyntheticSpec;
use epv_core::{Action, Outcome, OutcomeSimplex, SubsetLabel, NUM_OUTCOMES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CATEGORIES: [&str; 6] = [
    "Move Team",
    "Move Self",
    "Tackle",
    "Kick Position",
    "Catch Pass",
    "Penalty Conceded",
];

fn field_point() -> impl Strategy<Value = (f64, f64)> {
    (0.0..=70.0f64, -10.0..=100.0f64)
}

fn pitch_point() -> impl Strategy<Value = (f64, f64)> {
    (0.0..=70.0f64, -10.0..=110.0f64)
}

fn simplex() -> impl Strategy<Value = [f64; NUM_OUTCOMES]> {
    prop::array::uniform5(0.01..1.0f64).prop_map(|v| {
        let t: f64 = v.iter().sum();
        v.map(|a| a / t)
    })
}

fn raw_event() -> impl Strategy<Value = RawEvent> {
    (
        0..3usize,
        0..CATEGORIES.len(),
        0..4u8,
        0..70u8,
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(player, cat, x, y, completed, ended)| RawEvent {
            fixture_id: "1".into(),
            attacking_team: "A".into(),
            defending_team: "B".into(),
            player_id: format!("p{player}"),
            category: CATEGORIES[cat].into(),
            action: "Pass".into(),
            x: x as f64,
            y: y as f64,
            completed,
            ended_possession: ended,
            sequence_index: 0,
            line: 0,
        })
}

fn synthetic(n: usize, seed: u64, teams: usize) -> Vec<Action> {
    SyntheticSpec {
        n_observations: n,
        seed,
        teams,
        fixtures: 2 * teams,
        ..SyntheticSpec::default()
    }
    .generate(&CentreSet::standard())
    .unwrap()
    .actions
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn weights_partition_unity_and_bounds((x, y) in pitch_point()) {
        let c = CentreSet::standard();
        let w = c.weights_for(x, y).unwrap();
        prop_assert!((w.sum() - 1.0).abs() <= 1e-12);
        prop_assert!(w.weights.iter().all(|v| *v >= 0.0));
        let nonzero = w.nonzero().count();
        if y <= 100.0 {
            prop_assert!(nonzero <= 4);
        } else {
            prop_assert!(nonzero <= 2);
        }
    }

    #[test]
    fn weights_continuous_across_grid_lines(ix in 1..4usize, y in -10.0..=100.0f64, iy in 1..5usize, x in 0.0..=70.0f64) {
        let c = CentreSet::standard();
        let gx = c.field_xs()[ix];
        let gy = c.field_ys()[iy];
        let eps = 1e-9;
        for ((x0, y0), (x1, y1)) in [((gx - eps, y), (gx, y)), ((x, gy - eps), (x, gy))] {
            let a = c.weights_for(x0, y0).unwrap();
            let b = c.weights_for(x1, y1).unwrap();
            for k in 0..c.len() {
                prop_assert!((a.get(k) - b.get(k)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn sandwich_and_linearity(means in prop::collection::vec(simplex(), 33), (x, y) in pitch_point()) {
        let c = CentreSet::standard();
        let p = prob_at(&c, &means, x, y).unwrap();
        prop_assert!((p.0.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let support = c.support(x, y).unwrap();
        for s in 0..NUM_OUTCOMES {
            let vals: Vec<f64> = support.centres().iter().map(|&k| means[k][s]).collect();
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(lo - 1e-12 <= p.0[s] && p.0[s] <= hi + 1e-12);
        }
        let mixed: f64 = support.iter().map(|(k, w)| w * OutcomeSimplex(means[k]).epv()).sum();
        let e = epv_at(&c, &means, x, y).unwrap();
        prop_assert!((e - mixed).abs() < 1e-12);
        prop_assert!((0.0..=6.0).contains(&e));
    }

    #[test]
    fn dedupe_is_idempotent(events in prop::collection::vec(raw_event(), 0..40)) {
        let once = dedupe_locations(&events);
        prop_assert_eq!(dedupe_locations(&once), once);
    }

    #[test]
    fn filtering_keeps_input_order(events in prop::collection::vec(raw_event(), 0..40)) {
        let tagged: Vec<RawEvent> = events
            .into_iter()
            .enumerate()
            .map(|(i, mut e)| { e.sequence_index = i as u64; e })
            .collect();
        let kept = filter_categories(&tagged).unwrap();
        prop_assert!(kept.windows(2).all(|w| w[0].sequence_index < w[1].sequence_index));
        for e in &kept {
            prop_assert!(Category::parse(&e.category).unwrap().is_kept());
        }
    }

    #[test]
    fn draws_lie_on_the_simplex(alpha in prop::array::uniform5(0.05..50.0f64), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = sample_dirichlet(&mut rng, &alpha);
        prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(d.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn conjugate_mean_monotone_in_added_data(alpha in prop::array::uniform5(0.5..20.0f64), counts in prop::array::uniform5(0..50u32), s in 0..5usize, k in 1..20u32) {
        let mean = |c: &[u32; 5]| {
            let n: f64 = c.iter().map(|v| *v as f64).sum::<f64>() + alpha.iter().sum::<f64>();
            (alpha[s] + c[s] as f64) / n
        };
        let mut more = counts;
        more[s] += k;
        prop_assert!(mean(&more) >= mean(&counts));
    }

    #[test]
    fn ratings_translation_and_scaling(seed in 0..1000u64, shift in -2.0..2.0f64, factor in 1.5..4.0f64) {
        let actions = synthetic(200, seed, 2);
        let medians: BTreeMap<String, f64> = teams(&actions).into_iter().map(|t| (t, 10.0)).collect();
        let scaled: BTreeMap<String, f64> = medians.iter().map(|(t, m)| (t.clone(), m * factor)).collect();
        let epv = |x: f64, y: f64| Ok(x / 70.0 + y / 110.0);
        let key = |r: &epv_core::PlayerRating| (r.player_id.clone(), r.team.clone());
        let base: HashMap<_, _> = rate_with(&actions, epv, &medians).unwrap().into_iter().map(|r| (key(&r), r)).collect();
        let moved = rate_with(&actions, |x, y| Ok(x / 70.0 + y / 110.0 + shift), &medians).unwrap();
        for r in &moved {
            let b = &base[&key(r)];
            let diff = b.ae_rating * 10.0 - r.ae_rating * 10.0;
            prop_assert!((diff - shift * r.actions as f64).abs() < 1e-9);
        }
        for r in rate_with(&actions, epv, &scaled).unwrap() {
            prop_assert!((base[&key(&r)].ae_rating / factor - r.ae_rating).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subsets_partition_actions(seed in 0..10_000u64, n_teams in 2..6usize) {
        let actions = synthetic(300, seed, n_teams);
        let names = teams(&actions);
        let subsets = partition(&actions, &names).unwrap();
        for a in &actions {
            let mut attack = 0;
            let mut defence = 0;
            let mut league = 0;
            for s in &subsets {
                let n = s.actions.iter().filter(|b| *b == a).count().min(1);
                match s.label {
                    SubsetLabel::WholeLeague => league += n,
                    SubsetLabel::TeamAttack(_) => attack += n,
                    SubsetLabel::TeamDefence(_) => defence += n,
                }
            }
            prop_assert_eq!((league, attack, defence), (1, 1, 1));
        }
    }

    #[test]
    fn one_outcome_per_possession_and_csv_round_trip(seed in 0..10_000u64, app in 1..4usize) {
        let data = SyntheticSpec { n_observations: 400, seed, actions_per_possession: app, ..SyntheticSpec::default() }
            .generate(&CentreSet::standard())
            .unwrap();
        let (actions, _) = preprocess(&data.raw).unwrap();
        let mut labels: HashMap<(&str, u32), Outcome> = HashMap::new();
        for a in &actions {
            let o = labels.entry((a.fixture_id.as_str(), a.possession_num)).or_insert(a.outcome);
            prop_assert_eq!(*o, a.outcome);
        }
        let mut buf = Vec::new();
        write_actions(&mut buf, &actions).unwrap();
        prop_assert_eq!(read_actions(&buf[..]).unwrap(), actions);
    }

    #[test]
    fn posterior_rows_on_simplex_and_deterministic(points in prop::collection::vec((field_point(), 0..5u8), 0..30), seed in any::<u64>()) {
        let c = CentreSet::standard();
        let locs: Vec<(f64, f64, Outcome)> = points.iter().map(|((x, y), o)| (*x, *y, Outcome::from_code(*o).unwrap())).collect();
        let data = PreparedDataset::from_locations(&c, locs).unwrap();
        let config = SamplerConfig { chains: 2, iterations: 60, burn_in: 20, thinning: 1, ..SamplerConfig::with_seed(seed) };
        let post = gibbs_fit(&data, &PriorSpec::league_default(), &config).unwrap();
        for row in post.mean() {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        for d in 0..post.n_draws() {
            for k in [0, 14, 32] {
                prop_assert!((post.draw(d, k).0.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
        let again = gibbs_fit(&data, &PriorSpec::league_default(), &config).unwrap();
        prop_assert_eq!(post.mean(), again.mean());
        prop_assert_eq!(post.std(), again.std());
    }

    #[test]
    fn mle_mean_matches_sample_mean(alpha in prop::array::uniform5(0.5..30.0f64), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<OutcomeSimplex> = (0..2_000).map(|_| OutcomeSimplex(sample_dirichlet(&mut rng, &alpha))).collect();
        let fit = fit_dirichlet_mle(&draws).unwrap();
        let total: f64 = fit.iter().sum();
        for s in 0..NUM_OUTCOMES {
            let sample_mean = draws.iter().map(|d| d.0[s]).sum::<f64>() / draws.len() as f64;
            prop_assert!((fit[s] / total - sample_mean).abs() < 1e-3);
        }
    }
}
