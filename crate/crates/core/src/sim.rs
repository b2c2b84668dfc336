//! Random n-systems from the ball game, and Monte Carlo spectrum sampling.
//!
//! Positions are kept on the `delta`-grid. A rigid game moves one player at
//! unit speed; a generalized game moves a block of equal players together at
//! speed `1 / size`. Every step ends in a pass, so each step contributes
//! exactly one segment to the output path.

use crate::error::{Error, Result};
use crate::hull::{normalize, SimplexPoint};
use crate::path::PlPath;
use crate::rational::{sum, Rational};
use crate::spectrum::{mu_estimate, LinearMap, SpectrumPoint};
use crate::validate::Block;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use std::fmt;
use std::sync::Arc;

/// Resampling budget per step when a constraint rejects candidate moves.
pub const RETRY_CAP: usize = 64;

/// Predicate on normalized states.
pub type Constraint = Arc<dyn Fn(&SimplexPoint) -> bool + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockChoice {
    /// Uniform over admissible blocks other than the current one.
    #[default]
    Uniform,
    /// Always the widest admissible block, the current one included.
    Widest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartLayout {
    /// `delta * (1, 2, ..., n)`.
    #[default]
    Staggered,
    /// `delta * (1, 1, ..., 1)`; generalized games only.
    Coincident,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Rigid,
    Generalized,
}

#[derive(Clone)]
pub struct GenerationPolicy {
    pub n: usize,
    pub delta: Rational,
    pub steps: usize,
    pub seed: u64,
    /// Mean move length in units of `delta`; at least 1.
    pub mean_move: f64,
    pub block_choice: BlockChoice,
    pub start: StartLayout,
    pub constraint: Option<Constraint>,
}

impl fmt::Debug for GenerationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenerationPolicy")
            .field("n", &self.n)
            .field("delta", &self.delta)
            .field("steps", &self.steps)
            .field("seed", &self.seed)
            .field("mean_move", &self.mean_move)
            .field("block_choice", &self.block_choice)
            .field("start", &self.start)
            .field("constraint", &self.constraint.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl GenerationPolicy {
    pub fn new(n: usize, delta: Rational, steps: usize, seed: u64) -> Result<Self> {
        let policy = GenerationPolicy {
            n,
            delta,
            steps,
            seed,
            mean_move: 3.0,
            block_choice: BlockChoice::default(),
            start: StartLayout::default(),
            constraint: None,
        };
        policy.check()?;
        Ok(policy)
    }

    pub fn with_mean_move(mut self, mean: f64) -> Result<Self> {
        self.mean_move = mean;
        self.check()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_block_choice(mut self, choice: BlockChoice) -> Self {
        self.block_choice = choice;
        self
    }

    pub fn with_start(mut self, start: StartLayout) -> Self {
        self.start = start;
        self
    }

    pub fn with_constraint(mut self, constraint: Constraint) -> Self {
        self.constraint = Some(constraint);
        self
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidPolicy(format!("need n >= 2, got {}", self.n)));
        }
        if self.delta <= Rational::zero() {
            return Err(Error::InvalidPolicy(format!("delta must be positive, got {}", self.delta)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidPolicy("steps must be positive".into()));
        }
        if !self.mean_move.is_finite() || self.mean_move < 1.0 {
            return Err(Error::InvalidPolicy(format!(
                "mean move must be finite and at least 1, got {}",
                self.mean_move
            )));
        }
        Ok(())
    }

    fn accepts(&self, positions: &[Rational]) -> bool {
        match &self.constraint {
            None => true,
            Some(pred) => normalize(positions).is_ok_and(|x| pred(&x)),
        }
    }
}

/// Positions of the players, the block holding the ball, and the clock
/// `q = sum of positions`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub positions: Vec<Rational>,
    pub holder: Block,
    pub clock: Rational,
}

impl GameState {
    fn start(policy: &GenerationPolicy) -> Self {
        let positions: Vec<Rational> = (1..=policy.n)
            .map(|i| match policy.start {
                StartLayout::Staggered => &policy.delta * Rational::from_integer(i.into()),
                StartLayout::Coincident => policy.delta.clone(),
            })
            .collect();
        let holder = match policy.start {
            StartLayout::Staggered => Block::single(0),
            StartLayout::Coincident => Block { lo: 0, hi: policy.n - 1 },
        };
        let clock = sum(&positions);
        GameState { positions, holder, clock }
    }

    /// Gap above the holder in units of `delta`, `None` for the top block.
    fn gap_units(&self, delta: &Rational) -> Option<u64> {
        let hi = self.holder.hi;
        self.positions.get(hi + 1).map(|next| {
            let g = (next - &self.positions[hi]) / delta;
            debug_assert!(g.is_integer());
            u64::try_from(g.to_integer()).expect("gap fits in u64")
        })
    }

    /// Moves the holder block by `units * delta`.
    fn advance(&self, units: u64, delta: &Rational) -> GameState {
        let d = delta * Rational::from_integer(units.into());
        let mut positions = self.positions.clone();
        for p in &mut positions[self.holder.lo..=self.holder.hi] {
            *p += &d;
        }
        let size = Rational::from_integer(self.holder.size().into());
        GameState {
            positions,
            holder: self.holder,
            clock: &self.clock + d * size,
        }
    }

    /// Maximal runs of equal positions, as `(lo, hi)` index pairs.
    fn groups(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut lo = 0;
        for i in 1..=self.positions.len() {
            if i == self.positions.len() || self.positions[i] != self.positions[lo] {
                out.push((lo, i - 1));
                lo = i;
            }
        }
        out
    }

    /// Blocks that may carry the ball next without breaking convexity of the
    /// partial sums: top parts `[x, group_hi]` of equal groups such that no
    /// strict gap `j` with `holder.hi <= j < x` is crossed.
    fn admissible_blocks(&self) -> Vec<Block> {
        let hi = self.holder.hi;
        let mut out = Vec::new();
        for (glo, ghi) in self.groups() {
            for x in glo..=ghi {
                let crosses = (hi..x).any(|j| self.positions[j] < self.positions[j + 1]);
                if !crosses {
                    out.push(Block { lo: x, hi: ghi });
                }
            }
        }
        out
    }
}

fn move_length(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    let geo = Geometric::new(1.0 / mean).expect("mean >= 1 gives p in (0, 1]");
    1 + geo.sample(rng).min(1 << 20)
}

struct Recorder {
    qs: Vec<Rational>,
    values: Vec<Vec<Rational>>,
}

impl Recorder {
    fn new(state: &GameState) -> Self {
        Recorder {
            qs: vec![state.clock.clone()],
            values: vec![state.positions.clone()],
        }
    }

    fn push(&mut self, state: &GameState) {
        self.qs.push(state.clock.clone());
        self.values.push(state.positions.clone());
    }

    fn finish(self) -> Result<PlPath> {
        PlPath::new(self.qs, self.values)
    }
}

fn rigid_step(state: &GameState, policy: &GenerationPolicy, rng: &mut ChaCha8Rng) -> GameState {
    let h = state.holder.lo;
    let gap = state.gap_units(&policy.delta);
    if h == 0 {
        // Nobody behind: run up to player 2 and pass forward.
        let g = gap.expect("n >= 2");
        let mut next = state.advance(g, &policy.delta);
        next.holder = Block::single(1);
        return next;
    }
    let len = move_length(rng, policy.mean_move);
    match gap {
        Some(g) if len >= g => {
            let mut next = state.advance(g, &policy.delta);
            next.holder = Block::single(h + 1);
            next
        }
        _ => {
            let mut next = state.advance(len, &policy.delta);
            next.holder = Block::single(rng.random_range(0..h));
            next
        }
    }
}

fn generalized_step(state: &GameState, policy: &GenerationPolicy, rng: &mut ChaCha8Rng) -> GameState {
    let gap = state.gap_units(&policy.delta);
    let len = move_length(rng, policy.mean_move);
    let mut next = match gap {
        Some(g) if len >= g => state.advance(g, &policy.delta),
        _ => state.advance(len, &policy.delta),
    };
    loop {
        let mut candidates = next.admissible_blocks();
        if policy.block_choice == BlockChoice::Uniform {
            candidates.retain(|b| *b != state.holder);
        }
        if let Some(choice) = pick_block(&candidates, policy.block_choice, rng) {
            next.holder = choice;
            return next;
        }
        // Only the current block may continue: extend the move to the next
        // meeting point.
        let g = next
            .gap_units(&policy.delta)
            .expect("the top block always has an alternative");
        next = next.advance(g, &policy.delta);
    }
}

fn pick_block(candidates: &[Block], choice: BlockChoice, rng: &mut ChaCha8Rng) -> Option<Block> {
    if candidates.is_empty() {
        return None;
    }
    Some(match choice {
        BlockChoice::Uniform => candidates[rng.random_range(0..candidates.len())],
        BlockChoice::Widest => *candidates
            .iter()
            .max_by_key(|b| (b.size(), std::cmp::Reverse(b.lo)))
            .expect("nonempty"),
    })
}

fn run_game(policy: &GenerationPolicy, kind: SystemKind, rng: &mut ChaCha8Rng) -> Result<PlPath> {
    policy.check()?;
    if kind == SystemKind::Rigid && policy.start == StartLayout::Coincident {
        return Err(Error::InvalidPolicy(
            "rigid systems need distinct coordinates at q_0".into(),
        ));
    }
    let mut state = GameState::start(policy);
    let mut rec = Recorder::new(&state);
    for step in 0..policy.steps {
        let mut accepted = None;
        for _ in 0..RETRY_CAP {
            let next = match kind {
                SystemKind::Rigid => rigid_step(&state, policy, rng),
                SystemKind::Generalized => generalized_step(&state, policy, rng),
            };
            if policy.accepts(&next.positions) {
                accepted = Some(next);
                break;
            }
        }
        state = accepted.ok_or(Error::InfeasibleStep { step, attempts: RETRY_CAP })?;
        rec.push(&state);
    }
    rec.finish()
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_system(policy: &GenerationPolicy, kind: SystemKind) -> Result<PlPath> {
    run_game(policy, kind, &mut rng_for(policy.seed, 0))
}

pub fn random_rigid_system(policy: &GenerationPolicy) -> Result<PlPath> {
    random_system(policy, SystemKind::Rigid)
}

pub fn random_generalized_system(policy: &GenerationPolicy) -> Result<PlPath> {
    random_system(policy, SystemKind::Generalized)
}

/// System number `index` of a sampling run: stream `index` of the policy seed.
pub fn sampled_system(policy: &GenerationPolicy, kind: SystemKind, index: u64) -> Result<PlPath> {
    run_game(policy, kind, &mut rng_for(policy.seed, index))
}

/// Estimates `mu_T` for `count` independent systems, sorted canonically.
pub fn sample_spectrum(
    t: &LinearMap,
    policy: &GenerationPolicy,
    kind: SystemKind,
    count: usize,
    tail_fraction: &Rational,
) -> Result<Vec<SpectrumPoint>> {
    if t.n() != policy.n {
        return Err(Error::DimensionMismatch { expected: t.n(), found: policy.n });
    }
    policy.check()?;
    let mut points = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let path = sampled_system(policy, kind, i)?;
            mu_estimate(t, &path, tail_fraction)
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort();
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::validate::{division_numbers, validate_exact_nsystem, validate_generalized, validate_rigid};

    #[test]
    fn rigid_paths_validate() {
        for seed in 1..=20 {
            let policy = GenerationPolicy::new(4, int(1), 200, seed).unwrap();
            let path = random_rigid_system(&policy).unwrap();
            assert_eq!(path.num_segments(), 200);
            assert!(validate_exact_nsystem(&path).valid());
            let r = validate_rigid(&path, &int(1)).unwrap();
            assert!(r.valid(), "seed {seed}: {r}");
        }
        let policy = GenerationPolicy::new(3, frac(1, 3), 50, 9).unwrap();
        let path = random_rigid_system(&policy).unwrap();
        assert!(validate_rigid(&path, &frac(1, 3)).unwrap().valid());
        for q in division_numbers(&path).unwrap() {
            assert!((q * int(3)).is_integer());
        }
    }

    #[test]
    fn generalized_paths_validate() {
        for seed in 1..=20 {
            let policy = GenerationPolicy::new(4, int(1), 100, seed).unwrap();
            let path = random_generalized_system(&policy).unwrap();
            let r = validate_generalized(&path);
            assert!(r.valid(), "seed {seed}: {r}");
        }
    }

    #[test]
    fn determinism() {
        let policy = GenerationPolicy::new(4, int(1), 100, 7).unwrap();
        assert_eq!(random_rigid_system(&policy).unwrap(), random_rigid_system(&policy).unwrap());
        assert_eq!(
            random_generalized_system(&policy).unwrap(),
            random_generalized_system(&policy).unwrap()
        );
        let other = random_rigid_system(&policy.clone().with_seed(8)).unwrap();
        assert_ne!(random_rigid_system(&policy).unwrap(), other);
    }

    #[test]
    fn diagonal_from_single_block() {
        let policy = GenerationPolicy::new(4, int(1), 10, 3)
            .unwrap()
            .with_start(StartLayout::Coincident)
            .with_block_choice(BlockChoice::Widest);
        let path = random_generalized_system(&policy).unwrap();
        assert_eq!(path.num_segments(), 1);
        for v in path.values() {
            assert!(v.iter().all(|x| *x == v[0]));
        }
        assert!(matches!(random_rigid_system(&policy), Err(Error::InvalidPolicy(_))));
    }

    #[test]
    fn bad_policies() {
        assert!(GenerationPolicy::new(4, int(0), 10, 1).is_err());
        assert!(GenerationPolicy::new(1, int(1), 10, 1).is_err());
        assert!(GenerationPolicy::new(4, int(1), 10, 1).unwrap().with_mean_move(0.5).is_err());
        assert!(GenerationPolicy::new(4, int(1), 10, 1).unwrap().with_mean_move(f64::NAN).is_err());
    }

    #[test]
    fn rejecting_constraint_is_infeasible() {
        let policy = GenerationPolicy::new(4, int(1), 10, 1)
            .unwrap()
            .with_constraint(Arc::new(|_| false));
        assert_eq!(
            random_rigid_system(&policy),
            Err(Error::InfeasibleStep { step: 0, attempts: RETRY_CAP })
        );
    }

    #[test]
    fn coordinate_sum_spectrum_is_one() {
        let policy = GenerationPolicy::new(4, int(1), 60, 5).unwrap();
        let t = LinearMap::coordinate_sum(4);
        for kind in [SystemKind::Rigid, SystemKind::Generalized] {
            let pts = sample_spectrum(&t, &policy, kind, 16, &frac(1, 2)).unwrap();
            assert_eq!(pts.len(), 16);
            assert!(pts.iter().all(|p| p.values == vec![int(1)]));
        }
        let bad = LinearMap::coordinate_sum(3);
        assert!(sample_spectrum(&bad, &policy, SystemKind::Rigid, 1, &frac(1, 2)).is_err());
    }

    #[test]
    fn sampling_matches_single_runs() {
        let policy = GenerationPolicy::new(4, int(1), 40, 11).unwrap();
        let first = sampled_system(&policy, SystemKind::Rigid, 0).unwrap();
        assert_eq!(first, random_rigid_system(&policy).unwrap());
        let t = LinearMap::new(vec![vec![int(1), int(0), int(0), int(0)]]).unwrap();
        let a = sample_spectrum(&t, &policy, SystemKind::Rigid, 8, &frac(1, 2)).unwrap();
        let b = sample_spectrum(&t, &policy, SystemKind::Rigid, 8, &frac(1, 2)).unwrap();
        assert_eq!(a, b);
    }
}
