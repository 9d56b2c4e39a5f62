//! Binary hybrid particle-swarm / gravitational-search optimizer.
//!
//! Agents are bit vectors. Each iteration evaluates every agent, updates the
//! global best, derives gravitational masses from fitness, accumulates
//! pairwise attraction into accelerations, and blends those with the social
//! pull toward the global best into real-valued velocities. A V-shaped
//! transfer function turns each velocity into a bit-flip probability.
//!
//! Random draws come from a single ChaCha stream in a fixed order per
//! iteration: pair weights for the accelerations (agent `i`, then partner
//! `j`), then two velocity draws per agent and dimension, then one position
//! draw per agent and dimension.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that assigns a cost (lower is better) to a bit vector.
pub trait Objective: Sync {
    fn dimension(&self) -> usize;
    fn cost(&self, bits: &[bool]) -> f64;
}

/// Adapts a closure into an [`Objective`].
pub struct FnObjective<F> {
    dimension: usize,
    f: F,
}

impl<F: Fn(&[bool]) -> f64 + Sync> FnObjective<F> {
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F: Fn(&[bool]) -> f64 + Sync> Objective for FnObjective<F> {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn cost(&self, bits: &[bool]) -> f64 {
        (self.f)(bits)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub n_agents: usize,
    pub max_iter: usize,
    /// Initial gravitational constant.
    pub g0: f64,
    /// Decay rate of the gravitational constant.
    pub alpha_decay: f64,
    /// Weight of the gravitational acceleration.
    pub c1: f64,
    /// Weight of the pull toward the global best.
    pub c2: f64,
    pub w_start: f64,
    pub w_end: f64,
    pub v_max: f64,
    pub epsilon: f64,
    #[serde(with = "crate::report::seed_string")]
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            n_agents: 10,
            max_iter: 30,
            g0: 100.0,
            alpha_decay: 23.0,
            c1: 0.5,
            c2: 1.5,
            w_start: 0.9,
            w_end: 0.4,
            v_max: 6.0,
            epsilon: 1e-16,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.n_agents < 2 {
            return bad("at least two agents are required");
        }
        if self.max_iter < 1 {
            return bad("at least one iteration is required");
        }
        if !(self.g0 > 0.0) {
            return bad("g0 must be positive");
        }
        if !(self.v_max > 0.0) {
            return bad("v_max must be positive");
        }
        if !(self.epsilon >= 0.0) || !self.alpha_decay.is_finite() {
            return bad("epsilon must be non-negative and alpha_decay finite");
        }
        Ok(())
    }

    /// Inertia weight at iteration `t`, linear from `w_start` to `w_end`.
    pub fn inertia(&self, t: usize) -> f64 {
        self.w_start - (self.w_start - self.w_end) * t as f64 / self.max_iter as f64
    }
}

/// `G(t) = G0 * exp(-alpha * t / T)`.
pub fn gravitational_constant(t: usize, cfg: &OptimizerConfig) -> f64 {
    cfg.g0 * (-cfg.alpha_decay * t as f64 / cfg.max_iter as f64).exp()
}

/// Normalized masses for minimization. Infinite cost means zero mass; if all
/// costs are infinite, or all finite costs coincide, finite agents share the
/// mass equally.
pub fn masses_from_fitness(fitness: &[f64]) -> Vec<f64> {
    let n = fitness.len();
    let finite = || fitness.iter().copied().filter(|f| f.is_finite());
    let best = finite().fold(f64::INFINITY, f64::min);
    let worst = finite().fold(f64::NEG_INFINITY, f64::max);
    if !best.is_finite() {
        return vec![1.0 / n as f64; n];
    }
    let raw: Vec<f64> = fitness
        .iter()
        .map(|&f| match f.is_finite() {
            false => 0.0,
            true if worst == best => 1.0,
            true => (f - worst) / (best - worst),
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|m| m / total).collect()
}

/// V-shaped transfer `|(2/pi) atan((pi/2) v)|`.
pub fn transfer(v: f64) -> f64 {
    (FRAC_2_PI * (FRAC_PI_2 * v).atan()).abs()
}

fn distance(a: &[bool], b: &[bool]) -> f64 {
    (a.iter().zip(b).filter(|(x, y)| x != y).count() as f64).sqrt()
}

/// Gravitational accelerations, one row per agent. The force of `j` on `i` is
/// `G M_i M_j / (R_ij + eps) (x_j - x_i)` per dimension, weighted by one uniform
/// draw per pair; dividing by `M_i` leaves `G M_j / (R_ij + eps) (x_j - x_i)`,
/// which also gives massless agents a defined acceleration.
pub fn accelerations<R: Rng + ?Sized>(positions: &[Vec<bool>], masses: &[f64], g: f64, epsilon: f64, rng: &mut R) -> Vec<Vec<f64>> {
    accelerations_with(positions, masses, g, epsilon, || rng.random::<f64>())
}

/// [`accelerations`] with caller-supplied pair weights, drawn in `(i, j)` order.
pub fn accelerations_with(
    positions: &[Vec<bool>],
    masses: &[f64],
    g: f64,
    epsilon: f64,
    mut weight: impl FnMut() -> f64,
) -> Vec<Vec<f64>> {
    let n = positions.len();
    let dim = positions.first().map_or(0, Vec::len);
    let mut acc = vec![vec![0.0; dim]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let r = weight();
            let scale = r * g * masses[j] / (distance(&positions[i], &positions[j]) + epsilon);
            for d in 0..dim {
                let diff = positions[j][d] as u8 as f64 - positions[i][d] as u8 as f64;
                acc[i][d] += scale * diff;
            }
        }
    }
    acc
}

/// `V <- w V + c1 r1 ac + c2 r2 (gbest - X)`, clamped to `[-v_max, v_max]`.
pub fn update_velocities<R: Rng + ?Sized>(
    velocities: &mut [Vec<f64>],
    accelerations: &[Vec<f64>],
    positions: &[Vec<bool>],
    gbest: &[bool],
    t: usize,
    cfg: &OptimizerConfig,
    rng: &mut R,
) {
    let w = cfg.inertia(t);
    for ((v, ac), x) in velocities.iter_mut().zip(accelerations).zip(positions) {
        for d in 0..v.len() {
            let r1: f64 = rng.random();
            let r2: f64 = rng.random();
            let social = gbest[d] as u8 as f64 - x[d] as u8 as f64;
            let next = w * v[d] + cfg.c1 * r1 * ac[d] + cfg.c2 * r2 * social;
            v[d] = next.clamp(-cfg.v_max, cfg.v_max);
        }
    }
}

/// Complements each bit with probability `transfer(v)`.
pub fn update_positions<R: Rng + ?Sized>(positions: &mut [Vec<bool>], velocities: &[Vec<f64>], rng: &mut R) {
    for (x, v) in positions.iter_mut().zip(velocities) {
        for (bit, &vel) in x.iter_mut().zip(v) {
            let draw: f64 = rng.random();
            if draw < transfer(vel) {
                *bit = !*bit;
            }
        }
    }
}

/// Complete optimizer state between iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentSwarm {
    pub positions: Vec<Vec<bool>>,
    pub velocities: Vec<Vec<f64>>,
    pub fitness: Vec<f64>,
    pub masses: Vec<f64>,
    pub gbest_bits: Vec<bool>,
    pub gbest_cost: f64,
    pub iteration: usize,
}

impl AgentSwarm {
    /// Fair-coin positions, zero velocities.
    pub fn random<R: Rng + ?Sized>(dimension: usize, n_agents: usize, rng: &mut R) -> Self {
        let positions = (0..n_agents).map(|_| (0..dimension).map(|_| rng.random_bool(0.5)).collect()).collect();
        Self::from_positions(positions)
    }

    pub fn from_positions(positions: Vec<Vec<bool>>) -> Self {
        let n = positions.len();
        let dim = positions.first().map_or(0, Vec::len);
        Self {
            velocities: vec![vec![0.0; dim]; n],
            fitness: vec![f64::INFINITY; n],
            masses: vec![1.0 / n as f64; n],
            gbest_bits: vec![false; dim],
            gbest_cost: f64::INFINITY,
            iteration: 0,
            positions,
        }
    }

    /// Evaluates all agents and updates the global best on strict improvement.
    pub fn evaluate<O: Objective + ?Sized>(&mut self, objective: &O) {
        self.fitness = self.positions.par_iter().map(|x| objective.cost(x)).collect();
        for (x, &f) in self.positions.iter().zip(&self.fitness) {
            if f < self.gbest_cost {
                self.gbest_cost = f;
                self.gbest_bits.clone_from(x);
            }
        }
    }

    /// Moves the swarm after an evaluation at iteration `t` (1-based).
    pub fn advance<R: Rng + ?Sized>(&mut self, t: usize, cfg: &OptimizerConfig, rng: &mut R) {
        let g = gravitational_constant(t, cfg);
        self.masses = masses_from_fitness(&self.fitness);
        let acc = accelerations(&self.positions, &self.masses, g, cfg.epsilon, rng);
        update_velocities(&mut self.velocities, &acc, &self.positions, &self.gbest_bits, t, cfg, rng);
        update_positions(&mut self.positions, &self.velocities, rng);
        self.iteration = t;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_bits: Vec<bool>,
    pub best_cost: f64,
    /// Global-best cost after each iteration.
    pub curve: Vec<f64>,
}

/// Runs the optimizer from a random fair-coin swarm.
pub fn optimize<O: Objective + ?Sized>(objective: &O, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let swarm = AgentSwarm::random(objective.dimension(), cfg.n_agents, &mut rng);
    optimize_from(objective, cfg, swarm, &mut rng)
}

/// Runs the optimizer from a given swarm.
pub fn optimize_from<O: Objective + ?Sized, R: Rng + ?Sized>(
    objective: &O,
    cfg: &OptimizerConfig,
    mut swarm: AgentSwarm,
    rng: &mut R,
) -> Result<OptimizationResult> {
    cfg.validate()?;
    if swarm.positions.iter().any(|x| x.len() != objective.dimension()) {
        return Err(Error::LengthMismatch {
            expected: objective.dimension(),
            actual: swarm.positions.iter().map(Vec::len).find(|&l| l != objective.dimension()).unwrap_or(0),
        });
    }
    let mut curve = Vec::with_capacity(cfg.max_iter);
    for t in 1..=cfg.max_iter {
        swarm.evaluate(objective);
        curve.push(swarm.gbest_cost);
        if t < cfg.max_iter {
            swarm.advance(t, cfg, rng);
        }
    }
    Ok(OptimizationResult { best_bits: swarm.gbest_bits, best_cost: swarm.gbest_cost, curve })
}
