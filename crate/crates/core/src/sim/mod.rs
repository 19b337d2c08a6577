//! Continuous-time simulation of the periodic TASEP and an exact
//! small-system oracle by uniformization.
//!
//! Particles carry labels `1..N` and absolute positions
//! `x_1 < … < x_N < x_1 + L`; other labels follow from
//! `x_{k+nN} = x_k + nL`.

mod exact;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bethe::RingGeometry;
use crate::error::{invalid, Result};
use crate::finite::{translate_query, FiniteQuery, InitialCondition, Sign};
use crate::numerics::{map_indexed, Execution};

pub use exact::{exact_cdf_small, exact_distribution, ExactOptions};

/// Particle positions plus the number `J₀` of jumps across the bond `0 → 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingState {
    pub x: Vec<i64>,
    pub j0: u64,
}

impl RingState {
    pub fn new(y: &InitialCondition) -> Self {
        Self { x: y.y.clone(), j0: 0 }
    }

    /// Position of particle `k` for any integer label.
    pub fn position(&self, geom: RingGeometry, k: i64) -> i64 {
        let (k1, shift) = translate_query(geom, k, 0);
        self.x[(k1 - 1) as usize] - shift
    }

    /// Whether particle `i` (0-based) can jump.
    fn free(&self, geom: RingGeometry, i: usize) -> bool {
        let next = if i + 1 < self.x.len() { self.x[i + 1] } else { self.x[0] + geom.l as i64 };
        self.x[i] + 1 < next
    }

    fn jump(&mut self, geom: RingGeometry, i: usize) {
        if self.x[i].rem_euclid(geom.l as i64) == 0 {
            self.j0 += 1;
        }
        self.x[i] += 1;
    }

    /// Ordering and ring-gap constraints.
    pub fn is_valid(&self, geom: RingGeometry) -> bool {
        self.x.windows(2).all(|w| w[0] < w[1]) && self.x[self.x.len() - 1] < self.x[0] + geom.l as i64
    }

    /// `η_j`: 1 when some particle sits on `j` modulo `L`.
    pub fn occupied(&self, geom: RingGeometry, j: i64) -> bool {
        let l = geom.l as i64;
        self.x.iter().any(|&x| (x - j).rem_euclid(l) == 0)
    }

    /// Height `h(ℓ) = 2J₀ + Σ_{j=1}^{ℓ} (1 − 2η_j)` (with the mirrored sum for `ℓ < 0`).
    pub fn height(&self, geom: RingGeometry, ell: i64) -> i64 {
        let eta = |j: i64| if self.occupied(geom, j) { 1 } else { 0 };
        let base = 2 * self.j0 as i64;
        if ell >= 0 {
            base + (1..=ell).map(|j| 1 - 2 * eta(j)).sum::<i64>()
        } else {
            base - (ell + 1..=0).map(|j| 1 - 2 * eta(j)).sum::<i64>()
        }
    }
}

/// Simulation settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub geom: RingGeometry,
    pub initial: InitialCondition,
    pub horizon: f64,
    pub seed: u64,
    pub samples: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return invalid("horizon must be finite and non-negative");
        }
        InitialCondition::new(self.geom, self.initial.y.clone()).map(|_| ())
    }
}

/// One executed jump.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub time: f64,
    /// 1-based label of the particle that jumped.
    pub particle: usize,
}

/// A sample path as its initial state and the list of executed jumps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub geom: RingGeometry,
    pub initial: RingState,
    pub horizon: f64,
    pub events: Vec<JumpEvent>,
}

impl Trajectory {
    /// State at time `t` (right-continuous).
    pub fn state_at(&self, t: f64) -> Result<RingState> {
        if !(t >= 0.0 && t <= self.horizon) {
            return invalid(format!("time {t} outside [0, {}]", self.horizon));
        }
        let mut s = self.initial.clone();
        for e in self.events.iter().take_while(|e| e.time <= t) {
            s.jump(self.geom, e.particle - 1);
        }
        Ok(s)
    }
}

/// Per-sample generator: the seed fixes the key, the sample index the stream.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Advance `state` to time `until`. Each particle carries a rate-1 clock;
/// the superposition rings at rate `N` and a uniformly chosen particle
/// attempts its jump, which is suppressed when the target is occupied.
fn advance<R: Rng>(
    geom: RingGeometry,
    state: &mut RingState,
    now: &mut f64,
    until: f64,
    rng: &mut R,
    mut record: impl FnMut(JumpEvent),
) {
    let rate = geom.n as f64;
    loop {
        let u: f64 = rng.gen();
        let dt = -(1.0 - u).ln() / rate;
        if *now + dt > until {
            // memorylessness lets the next segment redraw its own waiting time
            *now = until;
            return;
        }
        *now += dt;
        let i = rng.gen_range(0..geom.n);
        if state.free(geom, i) {
            state.jump(geom, i);
            record(JumpEvent { time: *now, particle: i + 1 });
        }
    }
}

/// Exact continuous-time sample path for sample `index` of `cfg`.
pub fn simulate_path(cfg: &SimConfig, index: u64) -> Result<Trajectory> {
    cfg.validate()?;
    let mut rng = sample_rng(cfg.seed, index);
    let mut state = RingState::new(&cfg.initial);
    let mut now = 0.0;
    let mut events = Vec::new();
    advance(cfg.geom, &mut state, &mut now, cfg.horizon, &mut rng, |e| events.push(e));
    Ok(Trajectory { geom: cfg.geom, initial: RingState::new(&cfg.initial), horizon: cfg.horizon, events })
}

/// Height `h(ℓ, t)` along a trajectory.
pub fn height_at(traj: &Trajectory, ell: i64, t: f64) -> Result<i64> {
    Ok(traj.state_at(t)?.height(traj.geom, ell))
}

/// A Monte Carlo estimate with its binomial standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
    pub seed: u64,
}

/// Whether probe `j` holds in `state`: `x ≥ a` for `Minus`, `x < a` for `Plus`.
pub(crate) fn probe_holds(geom: RingGeometry, state: &RingState, k: i64, a: i64, sign: Sign) -> bool {
    let above = state.position(geom, k) >= a;
    match sign {
        Sign::Minus => above,
        Sign::Plus => !above,
    }
}

pub(crate) fn check_signs(q: &FiniteQuery, signs: Option<&[Sign]>) -> Result<Vec<Sign>> {
    match signs {
        None => Ok(vec![Sign::Minus; q.m()]),
        Some(s) if s.len() == q.m() => Ok(s.to_vec()),
        Some(s) => invalid(format!("{} signs for {} probes", s.len(), q.m())),
    }
}

/// Empirical probability of `∩ {x_{k_j}(t_j) ≥ a_j}` (or `<` where the sign
/// is `Plus`). Samples are drawn in parallel with independent streams and
/// the hit count is an order-independent integer reduction.
pub fn mc_joint_cdf(cfg: &SimConfig, q: &FiniteQuery, signs: Option<&[Sign]>, exec: Execution) -> Result<McEstimate> {
    cfg.validate()?;
    let signs = check_signs(q, signs)?;
    let (q, perm) = q.canonical();
    let signs: Vec<Sign> = perm.iter().map(|&i| signs[i]).collect();
    if q.points.iter().any(|p| p.t > cfg.horizon) {
        return invalid("query time beyond the simulation horizon");
    }
    if cfg.samples == 0 {
        return invalid("at least one sample is required");
    }
    const BATCH: u64 = 1024;
    let batches = cfg.samples.div_ceil(BATCH) as usize;
    let geom = cfg.geom;
    let counts = map_indexed(exec, batches, |b| {
        let start = b as u64 * BATCH;
        let end = (start + BATCH).min(cfg.samples);
        let mut hits = 0u64;
        for idx in start..end {
            let mut rng = sample_rng(cfg.seed, idx);
            let mut state = RingState::new(&cfg.initial);
            let mut now = 0.0;
            let ok = q.points.iter().zip(&signs).all(|(p, &s)| {
                advance(geom, &mut state, &mut now, p.t, &mut rng, |_| {});
                probe_holds(geom, &state, p.k, p.a, s)
            });
            hits += ok as u64;
        }
        hits
    });
    let hits: u64 = counts.iter().sum();
    let n = cfg.samples as f64;
    let p = hits as f64 / n;
    Ok(McEstimate { estimate: p, stderr: (p * (1.0 - p) / n).sqrt(), hits, samples: cfg.samples, seed: cfg.seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(l: usize, n: usize, horizon: f64) -> SimConfig {
        let geom = RingGeometry::new(l, n).unwrap();
        SimConfig { geom, initial: InitialCondition::step(geom), horizon, seed: 7, samples: 1 }
    }

    #[test]
    fn step_height_at_time_zero() {
        let c = cfg(8, 3, 1.0);
        let traj = simulate_path(&c, 0).unwrap();
        let h: Vec<i64> = (-4..=6).map(|l| height_at(&traj, l, 0.0).unwrap()).collect();
        assert_eq!(h, vec![2, 3, 2, 1, 0, 1, 2, 3, 4, 5, 4]);
    }

    #[test]
    fn paths_respect_exclusion() {
        let c = cfg(7, 4, 20.0);
        for idx in 0..20 {
            let traj = simulate_path(&c, idx).unwrap();
            let mut s = traj.initial.clone();
            for e in &traj.events {
                s.jump(c.geom, e.particle - 1);
                assert!(s.is_valid(c.geom));
            }
        }
    }

    #[test]
    fn single_hole_moves_one_particle() {
        let c = cfg(5, 4, 10.0);
        let traj = simulate_path(&c, 3).unwrap();
        let mut s = traj.initial.clone();
        for e in &traj.events {
            let movable: Vec<usize> = (0..4).filter(|&i| s.free(c.geom, i)).collect();
            assert_eq!(movable, vec![e.particle - 1]);
            s.jump(c.geom, e.particle - 1);
        }
    }

    #[test]
    fn height_periodicity() {
        let c = cfg(9, 4, 3.0);
        let traj = simulate_path(&c, 11).unwrap();
        for ell in -3..6 {
            let h = height_at(&traj, ell, 2.5).unwrap();
            assert_eq!(height_at(&traj, ell + 9, 2.5).unwrap(), h + 1);
            assert_eq!(height_at(&traj, ell - 9, 2.5).unwrap(), h - 1);
        }
    }
}
