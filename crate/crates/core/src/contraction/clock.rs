//! The exponential clock process: every edge draws an arrival time and
//! all edges that have arrived by time `t` are contracted, in arrival
//! order. A weight-`w` edge stands for `w` unit edges, so its arrival is
//! the minimum of `w` unit clocks, i.e. exponential with rate `w / λ̄_k`.

use rand::Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;

use crate::contracted::{check_gamma, ContractedState};
use crate::error::{KcutError, Result};
use crate::graph::{KPartition, LamBar, Weight, WeightedGraph};
use crate::ratio::Ratio;
use crate::rng::{seeded, trial_rng};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClockConfig {
    pub lam_bar: LamBar,
    pub t: f64,
    pub seed: u64,
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(KcutError::InvalidParameter(format!(
            "clock time must be finite and nonnegative, got {t}"
        )));
    }
    Ok(())
}

/// Arrival times for a fixed list of edges, sorted ascending.
#[derive(Debug, Clone)]
pub struct EdgeClocks {
    arrivals: Vec<(f64, usize, usize)>,
}

impl EdgeClocks {
    pub fn draw<R: Rng + ?Sized>(
        edges: impl IntoIterator<Item = (usize, usize, Weight)>,
        lam_bar: LamBar,
        rng: &mut R,
    ) -> Self {
        let mut arrivals: Vec<(f64, usize, usize)> = edges
            .into_iter()
            .map(|(a, b, w)| {
                let rate = w as f64 * lam_bar.k as f64 / lam_bar.lambda_k as f64;
                let x = Exp::new(rate).expect("positive rate").sample(rng);
                (x, a, b)
            })
            .collect();
        arrivals.sort_by(|x, y| x.0.total_cmp(&y.0));
        EdgeClocks { arrivals }
    }

    pub fn arrivals(&self) -> &[(f64, usize, usize)] {
        &self.arrivals
    }
}

/// One realization of the clock process, advanced monotonically in time.
#[derive(Debug, Clone)]
pub struct ClockRun<'g> {
    state: ContractedState<'g>,
    clocks: EdgeClocks,
    next: usize,
    now: f64,
}

impl<'g> ClockRun<'g> {
    pub fn new<R: Rng + ?Sized>(g: &'g WeightedGraph, lam_bar: LamBar, rng: &mut R) -> Self {
        Self::from_state(ContractedState::new(g), lam_bar, rng)
    }

    /// Starts a fresh set of clocks on the super-edges of `state`.
    pub fn from_state<R: Rng + ?Sized>(
        state: ContractedState<'g>,
        lam_bar: LamBar,
        rng: &mut R,
    ) -> Self {
        let clocks = EdgeClocks::draw(state.super_edges(), lam_bar, rng);
        ClockRun {
            state,
            clocks,
            next: 0,
            now: 0.0,
        }
    }

    pub fn time(&self) -> f64 {
        self.now
    }

    pub fn state(&self) -> &ContractedState<'g> {
        &self.state
    }

    pub fn into_state(self) -> ContractedState<'g> {
        self.state
    }

    /// Contracts every edge whose arrival is at most `t`, skipping edges
    /// that already became self-loops.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        check_time(t)?;
        if t < self.now {
            return Err(KcutError::InvalidParameter(format!(
                "clock cannot run backwards from {} to {t}",
                self.now
            )));
        }
        let arrivals = &self.clocks.arrivals;
        while self.next < arrivals.len() && arrivals[self.next].0 <= t {
            let (_, a, b) = arrivals[self.next];
            if self.state.root_of(a) != self.state.root_of(b) {
                self.state.contract_edge(a, b)?;
            }
            self.next += 1;
        }
        self.now = t;
        Ok(())
    }
}

/// Runs the clock process on `g` up to time `cfg.t`.
pub fn exp_clock_run(g: &WeightedGraph, cfg: ClockConfig) -> Result<ContractedState<'_>> {
    check_time(cfg.t)?;
    let mut run = ClockRun::new(g, cfg.lam_bar, &mut seeded(cfg.seed));
    run.advance_to(cfg.t)?;
    Ok(run.into_state())
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryConfig {
    pub lam_bar: LamBar,
    pub gamma: Ratio,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub mean_r: f64,
    pub var_r: f64,
    pub mean_s: f64,
    pub var_s: f64,
    pub mean_tiny: f64,
    pub var_tiny: f64,
    pub max_tiny: usize,
}

impl TrajectoryPoint {
    pub fn sem_r(&self, trials: usize) -> f64 {
        (self.var_r / trials as f64).sqrt()
    }

    pub fn sem_s(&self, trials: usize) -> f64 {
        (self.var_s / trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryStats {
    pub trials: usize,
    pub points: Vec<TrajectoryPoint>,
}

/// Integer moment sums; merging is exact, so the result does not depend on
/// how trials were split across threads.
#[derive(Debug, Clone, Default)]
struct Moments {
    sum: u128,
    sum_sq: u128,
    max: usize,
}

impl Moments {
    fn push(&mut self, x: usize) {
        self.sum += x as u128;
        self.sum_sq += (x as u128) * (x as u128);
        self.max = self.max.max(x);
    }

    fn merge(mut self, other: &Moments) -> Self {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.max = self.max.max(other.max);
        self
    }

    fn mean_var(&self, trials: usize) -> (f64, f64) {
        let n = trials as f64;
        let mean = self.sum as f64 / n;
        if trials < 2 {
            return (mean, 0.0);
        }
        // Exact integer numerator: n * sum_sq - sum^2.
        let num = trials as u128 * self.sum_sq - self.sum * self.sum;
        (mean, num as f64 / (n * (n - 1.0)))
    }
}

#[derive(Debug, Clone, Default)]
struct PointSums {
    r: Moments,
    s: Moments,
    tiny: Moments,
}

fn merge_points(a: Vec<PointSums>, b: Vec<PointSums>) -> Vec<PointSums> {
    if a.is_empty() {
        return b;
    }
    a.into_iter()
        .zip(b.iter())
        .map(|(x, y)| PointSums {
            r: x.r.merge(&y.r),
            s: x.s.merge(&y.s),
            tiny: x.tiny.merge(&y.tiny),
        })
        .collect()
}

/// Runs `trials` coupled clock trajectories (one set of arrival times per
/// trial, reused across the whole grid) and records the degree profile at
/// every gridpoint.
pub fn clock_trajectory(g: &WeightedGraph, cfg: &TrajectoryConfig) -> Result<TrajectoryStats> {
    if cfg.grid.is_empty() {
        return Err(KcutError::InvalidParameter("time grid is empty".into()));
    }
    if cfg.trials < 1 {
        return Err(KcutError::InvalidParameter("need at least one trial".into()));
    }
    check_gamma(cfg.gamma)?;
    for t in &cfg.grid {
        check_time(*t)?;
    }
    if cfg.grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(KcutError::InvalidParameter("time grid must be ascending".into()));
    }
    let sums = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| -> Result<Vec<PointSums>> {
            let mut rng = trial_rng(cfg.seed, i);
            let mut run = ClockRun::new(g, cfg.lam_bar, &mut rng);
            let mut out = Vec::with_capacity(cfg.grid.len());
            for &t in &cfg.grid {
                run.advance_to(t)?;
                let p = run.state().degree_profile(cfg.lam_bar, cfg.gamma)?;
                let mut sums = PointSums::default();
                sums.r.push(p.r);
                sums.s.push(p.s);
                sums.tiny.push(p.tiny);
                out.push(sums);
            }
            Ok(out)
        })
        .try_reduce(Vec::new, |a, b| Ok(merge_points(a, b)))?;
    let points = cfg
        .grid
        .iter()
        .zip(sums)
        .map(|(&t, p)| {
            let (mean_r, var_r) = p.r.mean_var(cfg.trials);
            let (mean_s, var_s) = p.s.mean_var(cfg.trials);
            let (mean_tiny, var_tiny) = p.tiny.mean_var(cfg.trials);
            TrajectoryPoint {
                t,
                mean_r,
                var_r,
                mean_s,
                var_s,
                mean_tiny,
                var_tiny,
                max_tiny: p.tiny.max,
            }
        })
        .collect();
    Ok(TrajectoryStats {
        trials: cfg.trials,
        points,
    })
}

/// Counts, for each time in the ascending `times`, the trials in which no
/// edge crossing `cut` has arrived yet (the cut survives contraction).
pub fn cut_survival_counts(
    g: &WeightedGraph,
    lam_bar: LamBar,
    cut: &KPartition,
    times: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    let cut = KPartition::new(g, cut.blocks().to_vec())?;
    for t in times {
        check_time(*t)?;
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(KcutError::InvalidParameter("times must be ascending".into()));
    }
    let labels = cut.labels();
    let counts = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let clocks = EdgeClocks::draw(g.edges().iter().map(|e| (e.u, e.v, e.w)), lam_bar, &mut rng);
            let first_crossing = clocks
                .arrivals()
                .iter()
                .find(|&&(_, a, b)| labels[a] != labels[b])
                .map_or(f64::INFINITY, |&(t, _, _)| t);
            times.iter().map(|&t| (first_crossing > t) as u64).collect::<Vec<_>>()
        })
        .reduce(
            || vec![0; times.len()],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );
    Ok(counts)
}

#[derive(Debug, Clone, Serialize)]
pub struct StagedConfig {
    pub lam_bar: LamBar,
    pub stages: usize,
    pub trials: usize,
    /// Constant `M` in the per-stage vertex bound `n_i <= M sqrt(n_{i-1})`.
    pub m_const: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageStats {
    pub stage: usize,
    /// Trials in which the cut is still untouched after this stage.
    pub untouched: u64,
    /// Trials in which the vertex bound held at every stage so far.
    pub bound_held: u64,
    /// Both of the above.
    pub joint: u64,
    pub freq_untouched: f64,
    pub freq_joint: f64,
    pub mean_vertices: f64,
    pub mean_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StagedReport {
    pub n: usize,
    pub k: usize,
    pub cut_weight: Weight,
    pub trials: usize,
    pub m_const: f64,
    /// `t_1 = ln(n) / 2`.
    pub stage1_time: f64,
    /// `exp(-t_1 w(C) / λ̄_k)`, equal to `n^{-k/2}` for a minimum k-cut.
    pub stage1_predicted: f64,
    /// `n^{-k}`, for comparison with the cumulative frequencies.
    pub reference_n_pow_minus_k: f64,
    pub stages: Vec<StageStats>,
}

#[derive(Debug, Clone, Default)]
struct StageSums {
    untouched: u64,
    bound_held: u64,
    joint: u64,
    vertices: u64,
    time: f64,
}

/// Simulates the staged recursion: at stage `i` the clock runs for
/// `t_i = ln(n_{i-1}) / 2` on the graph left by stage `i - 1`, with fresh
/// arrival times.
pub fn staged_survival_experiment(
    g: &WeightedGraph,
    k: usize,
    cut: &KPartition,
    cfg: &StagedConfig,
) -> Result<StagedReport> {
    let cut = KPartition::new(g, cut.blocks().to_vec())?;
    if cut.k() != k {
        return Err(KcutError::InvalidPartition(format!(
            "expected a {k}-cut, got {} blocks",
            cut.k()
        )));
    }
    if cfg.stages < 1 || cfg.trials < 1 {
        return Err(KcutError::InvalidParameter("need at least one stage and one trial".into()));
    }
    if !(cfg.m_const > 0.0) {
        return Err(KcutError::InvalidParameter(format!(
            "M must be positive, got {}",
            cfg.m_const
        )));
    }
    let per_trial = |i: u64| -> Result<Vec<StageSums>> {
        let mut rng = trial_rng(cfg.seed, i);
        let mut state = ContractedState::new(g);
        let (mut untouched, mut bound_held) = (true, true);
        let mut out = Vec::with_capacity(cfg.stages);
        for _ in 0..cfg.stages {
            let n_prev = state.r();
            let t = 0.5 * (n_prev as f64).ln();
            let mut run = ClockRun::from_state(state, cfg.lam_bar, &mut rng);
            run.advance_to(t)?;
            state = run.into_state();
            let n_now = state.r();
            untouched = untouched && state.current_partition().refines(&cut);
            bound_held = bound_held && n_now as f64 <= cfg.m_const * (n_prev as f64).sqrt();
            out.push(StageSums {
                untouched: untouched as u64,
                bound_held: bound_held as u64,
                joint: (untouched && bound_held) as u64,
                vertices: n_now as u64,
                time: t,
            });
        }
        Ok(out)
    };
    let sums = (0..cfg.trials as u64)
        .into_par_iter()
        .map(per_trial)
        .try_reduce(Vec::new, |a, b| {
            if a.is_empty() {
                return Ok(b);
            }
            Ok(a.into_iter()
                .zip(b)
                .map(|(x, y)| StageSums {
                    untouched: x.untouched + y.untouched,
                    bound_held: x.bound_held + y.bound_held,
                    joint: x.joint + y.joint,
                    vertices: x.vertices + y.vertices,
                    time: x.time + y.time,
                })
                .collect())
        })?;
    let trials = cfg.trials as f64;
    let n = g.n() as f64;
    let stage1_time = 0.5 * n.ln();
    let stages = sums
        .into_iter()
        .enumerate()
        .map(|(i, s)| StageStats {
            stage: i + 1,
            untouched: s.untouched,
            bound_held: s.bound_held,
            joint: s.joint,
            freq_untouched: s.untouched as f64 / trials,
            freq_joint: s.joint as f64 / trials,
            mean_vertices: s.vertices as f64 / trials,
            // Floating sums of stage times may differ in the last bits
            // across thread counts; reported only.
            mean_time: s.time / trials,
        })
        .collect();
    Ok(StagedReport {
        n: g.n(),
        k,
        cut_weight: cut.weight(),
        trials: cfg.trials,
        m_const: cfg.m_const,
        stage1_time,
        stage1_predicted: (-stage1_time * cut.weight() as f64 / cfg.lam_bar.value()).exp(),
        reference_n_pow_minus_k: n.powf(-(k as f64)),
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> WeightedGraph {
        WeightedGraph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1))).unwrap()
    }

    #[test]
    fn time_zero_contracts_nothing() {
        let g = cycle(8);
        let lam = LamBar::new(2, 2).unwrap();
        let s = exp_clock_run(&g, ClockConfig { lam_bar: lam, t: 0.0, seed: 3 }).unwrap();
        assert_eq!(s.r(), 8);
        assert_eq!(s.contractions(), 0);
        assert!(exp_clock_run(&g, ClockConfig { lam_bar: lam, t: -1.0, seed: 3 }).is_err());
    }

    #[test]
    fn cut_survival_counts_basics() {
        let g = cycle(6);
        let lam = LamBar::new(2, 2).unwrap();
        let cut = KPartition::new(&g, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let counts = cut_survival_counts(&g, lam, &cut, &[0.0, 0.5, 1.0], 4000, 8).unwrap();
        assert_eq!(counts[0], 4000);
        assert!(counts[0] >= counts[1] && counts[1] >= counts[2]);
        // Survival e^{-2t}: about 1472 at t = 0.5; sigma is about 30.
        assert!((counts[1] as f64 - 4000.0 * (-1.0f64).exp()).abs() < 150.0);
        assert!(cut_survival_counts(&g, lam, &cut, &[1.0, 0.5], 10, 8).is_err());
    }

    #[test]
    fn coupled_trajectory_is_monotone() {
        let g = cycle(12);
        let lam = LamBar::new(2, 2).unwrap();
        for seed in 0..20 {
            let mut run = ClockRun::new(&g, lam, &mut seeded(seed));
            let mut last = g.n();
            for step in 0..40 {
                run.advance_to(step as f64 * 0.1).unwrap();
                assert!(run.state().r() <= last);
                last = run.state().r();
            }
            assert!(run.advance_to(1.0).is_err());
        }
    }

    #[test]
    fn contracted_set_is_exactly_the_arrived_edges() {
        let g = WeightedGraph::new(5, [(0, 1, 3), (1, 2, 1), (2, 3, 4), (3, 4, 1), (0, 4, 2)]).unwrap();
        let lam = LamBar::new(4, 2).unwrap();
        for seed in 0..50 {
            let mut rng = seeded(seed);
            let mut run = ClockRun::new(&g, lam, &mut rng);
            let arrivals = run.clocks.arrivals().to_vec();
            run.advance_to(0.7).unwrap();
            // Components of the arrived edges, computed independently.
            let mut uf = crate::dsu::UnionFind::new(5);
            for &(x, a, b) in &arrivals {
                if x <= 0.7 {
                    uf.union(a, b);
                }
            }
            for v in 0..5 {
                for u in 0..5 {
                    let same = run.state().root_of(u) == run.state().root_of(v);
                    assert_eq!(same, uf.find(u) == uf.find(v));
                }
            }
        }
    }

    #[test]
    fn trajectory_starts_at_n_and_is_thread_independent() {
        let g = cycle(10);
        let cfg = TrajectoryConfig {
            lam_bar: LamBar::new(2, 2).unwrap(),
            gamma: Ratio::new(3, 2),
            grid: vec![0.0, 0.5, 1.0],
            trials: 300,
            seed: 9,
        };
        let a = clock_trajectory(&g, &cfg).unwrap();
        assert_eq!(a.points[0].mean_r, 10.0);
        assert_eq!(a.points[0].var_r, 0.0);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| clock_trajectory(&g, &cfg).unwrap());
        for (x, y) in a.points.iter().zip(&b.points) {
            assert_eq!(x.mean_r.to_bits(), y.mean_r.to_bits());
            assert_eq!(x.var_r.to_bits(), y.var_r.to_bits());
            assert_eq!(x.mean_s.to_bits(), y.mean_s.to_bits());
        }
    }

    #[test]
    fn trajectory_rejects_bad_configs() {
        let g = cycle(5);
        let mut cfg = TrajectoryConfig {
            lam_bar: LamBar::new(2, 2).unwrap(),
            gamma: Ratio::new(3, 2),
            grid: vec![],
            trials: 10,
            seed: 0,
        };
        assert!(clock_trajectory(&g, &cfg).is_err());
        cfg.grid = vec![1.0, 0.5];
        assert!(clock_trajectory(&g, &cfg).is_err());
        cfg.grid = vec![0.5];
        cfg.trials = 0;
        assert!(clock_trajectory(&g, &cfg).is_err());
    }

    #[test]
    fn staged_rejects_wrong_cut() {
        let g = cycle(8);
        let cut = KPartition::new(&g, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]).unwrap();
        let cfg = StagedConfig {
            lam_bar: LamBar::new(2, 2).unwrap(),
            stages: 2,
            trials: 10,
            m_const: 4.0,
            seed: 1,
        };
        assert!(staged_survival_experiment(&g, 3, &cut, &cfg).is_err());
        let other = cycle(6);
        assert!(staged_survival_experiment(&other, 2, &cut, &cfg).is_err());
        let r = staged_survival_experiment(&g, 2, &cut, &cfg).unwrap();
        assert_eq!(r.stages.len(), 2);
        assert!(r.stages[1].untouched <= r.stages[0].untouched);
        assert!((r.stage1_predicted - 1.0 / 8.0).abs() < 1e-12);
    }
}
