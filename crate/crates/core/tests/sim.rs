//! Properties of the simulator.

use proptest::prelude::*;

use ptasep_core::bethe::RingGeometry;
use ptasep_core::finite::InitialCondition;
use ptasep_core::sim::{exact_distribution, simulate_path, ExactOptions, SimConfig};

fn cfg(l: usize, n: usize, horizon: f64, seed: u64) -> SimConfig {
    let geom = RingGeometry::new(l, n).unwrap();
    SimConfig { geom, initial: InitialCondition::step(geom), horizon, seed, samples: 1 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_event_keeps_order_and_gaps((l, n) in (2usize..16).prop_flat_map(|l| (Just(l), 1..l)), seed in any::<u64>(), index in 0u64..1000) {
        let c = cfg(l, n, 3.0, seed);
        let traj = simulate_path(&c, index).unwrap();
        let mut state = traj.state_at(0.0).unwrap();
        let mut last = 0.0;
        for e in &traj.events {
            prop_assert!(e.time >= last && e.time <= c.horizon);
            last = e.time;
            state = traj.state_at(e.time).unwrap();
            prop_assert_eq!(state.x.len(), n);
            prop_assert!(state.is_valid(c.geom), "{:?}", state.x);
        }
        let moved: i64 = state.x.iter().zip(&c.initial.y).map(|(a, b)| a - b).sum();
        prop_assert_eq!(moved as usize, traj.events.len());
    }
}

/// Mean and standard error of the bond-crossing count `J₀(t)`.
fn crossing_stats(seed: u64, samples: u64) -> (f64, f64) {
    let c = cfg(8, 4, 2.0, seed);
    let counts: Vec<f64> = (0..samples).map(|i| simulate_path(&c, i).unwrap().state_at(2.0).unwrap().j0 as f64).collect();
    let n = samples as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let var = counts.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn crossing_counts_do_not_depend_on_the_seed() {
    let (m1, s1) = crossing_stats(11, 20_000);
    let (m2, s2) = crossing_stats(12_345, 20_000);
    let z = (m1 - m2).abs() / (s1 * s1 + s2 * s2).sqrt();
    assert!(z < 3.5, "{m1} +- {s1} vs {m2} +- {s2}");
}

#[test]
fn exact_distribution_has_unit_mass() {
    let geom = RingGeometry::new(7, 3).unwrap();
    for t in [0.0, 0.4, 2.5] {
        let d = exact_distribution(geom, &InitialCondition::step(geom), t, &ExactOptions::default()).unwrap();
        let mass: f64 = d.iter().map(|(_, p)| p).sum();
        assert!((mass - 1.0).abs() < 1e-10, "t={t}: {mass}");
    }
}
