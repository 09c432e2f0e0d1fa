use std::time::Duration;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::contraction::{clock_trajectory, lemma_expect_bound, solve_min_kcut, SolveOptions, TrajectoryConfig};
use crate::error::{KcutError, Result};
use crate::graph::{LamBar, Weight, WeightedGraph};
use crate::oracle::{brute_min_kcut, enumerate_cuts_below, KCUT_ORACLE_LIMIT};
use crate::ratio::Ratio;

pub const SCHEMA_VERSION: u32 = 1;

/// Failure probability used when `λ_k` has to come from the solver.
pub const SOLVER_LAMBDA_FAILURE_PROB: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum LambdaSource {
    Oracle,
    /// Best of this many recursive contraction runs; an upper bound on `λ_k`.
    Solver { repetitions: usize },
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResolvedLambda {
    pub lambda_k: Weight,
    pub k: usize,
    #[serde(flatten)]
    pub source: LambdaSource,
}

impl ResolvedLambda {
    pub fn lam_bar(&self) -> Result<LamBar> {
        LamBar::new(self.lambda_k, self.k)
    }
}

/// `λ_k` from the exact oracle when `n` is small enough, otherwise from
/// [`solve_min_kcut`].
pub fn resolve_lambda<R: Rng + ?Sized>(g: &WeightedGraph, k: usize, rng: &mut R) -> Result<ResolvedLambda> {
    if g.n() <= KCUT_ORACLE_LIMIT {
        let exact = brute_min_kcut(g, k)?;
        return Ok(ResolvedLambda {
            lambda_k: exact.lambda_k,
            k,
            source: LambdaSource::Oracle,
        });
    }
    let report = solve_min_kcut(g, k, SOLVER_LAMBDA_FAILURE_PROB, SolveOptions::default(), rng)?;
    Ok(ResolvedLambda {
        lambda_k: report.partition.weight(),
        k,
        source: LambdaSource::Solver {
            repetitions: report.repetitions,
        },
    })
}

/// The versioned JSON document every subcommand prints.
pub fn envelope(experiment: &str, seed: Option<u64>, params: Value, results: Value, elapsed: Duration) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "experiment": experiment,
        "seed": seed,
        "params": params,
        "results": results,
        "wallclock_ms": elapsed.as_secs_f64() * 1e3,
    })
}

/// Serializes flat records as CSV with a header row.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| KcutError::InvalidParameter(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| KcutError::InvalidParameter(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClockPoint {
    pub t: f64,
    pub mean_r: f64,
    pub sem_r: f64,
    /// Expected-vertex-count bound at `t` for the measured `β`.
    pub bound_r: f64,
    pub mean_s: f64,
    pub sem_s: f64,
    /// `e^{-t} β n`.
    pub bound_s: f64,
    pub mean_tiny: f64,
    pub max_tiny: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClockExperiment {
    pub n: usize,
    pub k: usize,
    pub gamma: Ratio,
    pub lambda: ResolvedLambda,
    /// Vertex sets `S` with `λ̄_k <= w(∂S) <= γ λ̄_k`.
    pub mid_sets: usize,
    /// `mid_sets / n`.
    pub beta: f64,
    pub trials: usize,
    pub points: Vec<ClockPoint>,
}

/// Runs the clock process on `g` and reports the mean vertex count and the
/// mean number of supervertices with degree in `[λ̄_k, γ λ̄_k)` next to
/// their analytic bounds, with `β` measured by exhaustive cut enumeration.
pub fn clock_experiment(
    g: &WeightedGraph,
    lambda: ResolvedLambda,
    gamma: Ratio,
    grid: Vec<f64>,
    trials: usize,
    seed: u64,
) -> Result<ClockExperiment> {
    let lam_bar = lambda.lam_bar()?;
    let low = lam_bar.ratio();
    let family = enumerate_cuts_below(g, lam_bar.scaled(gamma), true)?;
    let mid_sets = family
        .filter(|_, w| !low.exceeds(w.expect("cut weights")))
        .with_complements()
        .len();
    let n = g.n();
    let beta = mid_sets as f64 / n as f64;
    let stats = clock_trajectory(
        g,
        &TrajectoryConfig {
            lam_bar,
            gamma,
            grid,
            trials,
            seed,
        },
    )?;
    let points = stats
        .points
        .iter()
        .map(|p| -> Result<ClockPoint> {
            Ok(ClockPoint {
                t: p.t,
                mean_r: p.mean_r,
                sem_r: p.sem_r(trials),
                bound_r: lemma_expect_bound(n, lambda.k, beta, gamma.to_f64(), p.t)?,
                mean_s: p.mean_s,
                sem_s: p.sem_s(trials),
                bound_s: (-p.t).exp() * mid_sets as f64,
                mean_tiny: p.mean_tiny,
                max_tiny: p.max_tiny,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ClockExperiment {
        n,
        k: lambda.k,
        gamma,
        lambda,
        mid_sets,
        beta,
        trials,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate::{generate, Generator};
    use crate::rng::seeded;

    #[test]
    fn lambda_sources() {
        let mut rng = seeded(1);
        let small = generate(&Generator::cycle(10)).unwrap();
        let r = resolve_lambda(&small, 3, &mut rng).unwrap();
        assert_eq!((r.lambda_k, r.source), (3, LambdaSource::Oracle));
        let big = generate(&Generator::cycle(24)).unwrap();
        let r = resolve_lambda(&big, 2, &mut rng).unwrap();
        assert_eq!(r.lambda_k, 2);
        assert!(matches!(r.source, LambdaSource::Solver { .. }));
    }

    #[test]
    fn envelope_fields() {
        let doc = envelope("demo", Some(3), json!({"k": 2}), json!([1, 2]), Duration::from_millis(5));
        assert_eq!(doc["schema"], 1);
        assert_eq!(doc["seed"], 3);
        assert_eq!(doc["params"]["k"], 2);
        assert!(doc["wallclock_ms"].as_f64().unwrap() >= 5.0);
    }

    #[test]
    fn csv_has_header() {
        #[derive(Serialize)]
        struct Row {
            t: f64,
            r: usize,
        }
        let text = to_csv(&[Row { t: 0.5, r: 3 }, Row { t: 1.0, r: 2 }]).unwrap();
        assert_eq!(text, "t,r\n0.5,3\n1.0,2\n");
    }

    #[test]
    fn clock_experiment_on_bridge() {
        let g = generate(&Generator::TwoCliquesBridge { left: 4, right: 4, bridge: 2 }).unwrap();
        let lambda = resolve_lambda(&g, 3, &mut seeded(0)).unwrap();
        assert_eq!(lambda.lambda_k, 5);
        let exp = clock_experiment(&g, lambda, Ratio::new(19, 10), vec![0.0, 1.0], 200, 4).unwrap();
        assert_eq!(exp.points[0].mean_r, 8.0);
        assert!((exp.points[0].bound_r - 8.0).abs() < 1e-12);
        // Within [5/3, 19/6]: the bridge cut, the six degree-3 singletons
        // and the two triples away from the bridge, in both orientations.
        assert_eq!(exp.mid_sets, 18);
        assert!(exp.points[1].mean_r < 8.0);
    }
}
