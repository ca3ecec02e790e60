use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::metrics::{empirical_cdf, fit_error_distribution, kendall_tau_b, ConfusionMatrix};
use super::{Algorithm, EvalReport, ExperimentConfig, ExperimentKind};
use crate::assess::{assess_indexed, assess_sl_indexed};
use crate::baselines::{edge_value, power_iteration, tidal_indexed};
use crate::error::{Result, TrustError};
use crate::graph::TrustGraph;
use crate::io::RawEdgeList;
use crate::opinion::expected_belief;
use crate::scale::{EvidenceStyle, LevelScale, HIGHEST_FRACTION};
use crate::sl::sl_expected_belief;

/// One left-out edge and what the algorithm made of it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    pub trustor: String,
    pub trustee: String,
    pub truth_level: usize,
    pub predicted_level: usize,
    pub truth_value: f64,
    pub predicted_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certain_evidence: Option<f64>,
}

/// One ranking seed: its eligible neighbours in id order with both scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingRecord {
    pub seed: String,
    pub neighbors: Vec<String>,
    pub truth: Vec<f64>,
    pub computed: Vec<f64>,
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RuntimeStats {
    pub elapsed_secs: f64,
    /// Trust computations performed.
    pub evaluations: usize,
    /// Candidate edges or seeds inspected for eligibility.
    pub candidates_examined: usize,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub lambda: f64,
    pub base_level: f64,
    pub report: EvalReport,
}

struct Prediction {
    value: f64,
    certain: Option<f64>,
}

/// Trust of `u` in `v` on the graph without the edge `u → v`.
fn predict(g: &TrustGraph, cfg: &ExperimentConfig, u: usize, v: usize) -> Result<Prediction> {
    let skip = Some((u, v));
    Ok(match cfg.algorithm {
        Algorithm::AssessTrust => {
            let op = assess_indexed(g, u, v, cfg.depth, skip)?;
            Prediction {
                value: expected_belief(&op),
                certain: Some(op.certain()),
            }
        }
        Algorithm::SlStar => {
            let op = assess_sl_indexed(g, u, v, cfg.depth, skip)?;
            Prediction {
                value: sl_expected_belief(&op),
                certain: Some(op.certain()),
            }
        }
        Algorithm::TidalTrust => Prediction {
            value: tidal_indexed(g, u, v, cfg.depth, skip, edge_value)?,
            certain: None,
        },
        Algorithm::EigenTrust => {
            let p = vec![1.0 / g.node_count() as f64; g.node_count()];
            Prediction {
                value: power_iteration(g, &p, cfg.rank, skip)?.score_at(v),
                certain: None,
            }
        }
        Algorithm::TrustRank => {
            let mut p = vec![0.0; g.node_count()];
            p[u] = 1.0;
            Prediction {
                value: power_iteration(g, &p, cfg.rank, skip)?.score_at(v),
                certain: None,
            }
        }
    })
}

fn has_alternative(g: &TrustGraph, u: usize, v: usize, depth: usize) -> bool {
    g.reachable_within(u, v, depth, Some((u, v)))
}

fn indexed_edges(g: &TrustGraph) -> Vec<(usize, usize)> {
    g.edges()
        .into_iter()
        .filter_map(|(s, d, _)| Some((g.node_index(s)?, g.node_index(d)?)))
        .collect()
}

fn empty_report(kind: ExperimentKind, cfg: &ExperimentConfig, levels: Vec<String>) -> EvalReport {
    EvalReport {
        kind,
        config: cfg.clone(),
        levels,
        records: Vec::new(),
        confusion: None,
        f1_micro: None,
        f1_macro: None,
        errors: Vec::new(),
        error_fit: None,
        mean_certain_evidence: None,
        rankings: Vec::new(),
        tau: Vec::new(),
        tau_cdf: Vec::new(),
        runtime: RuntimeStats::default(),
    }
}

/// Leave-one-edge-out prediction scored against the trust-level scale.
///
/// Edges are shuffled with the configured seed and taken in that order while
/// they still have an alternative path within the search depth, so the
/// selection is uniform without replacement over eligible edges. The graph is
/// never modified; each prediction simply ignores its own edge.
pub fn run_f1_experiment(g: &TrustGraph, scale: &LevelScale, cfg: &ExperimentConfig) -> Result<EvalReport> {
    cfg.validate()?;
    if !cfg.algorithm.is_absolute() {
        return Err(TrustError::InvalidParameter(format!(
            "{} produces relative scores only; use the ranking experiment",
            cfg.algorithm
        )));
    }
    let start = Instant::now();
    let mut edges = indexed_edges(g);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    edges.shuffle(&mut rng);

    let mut pairs = Vec::with_capacity(cfg.num_pairs);
    let mut examined = 0;
    for &(u, v) in &edges {
        if pairs.len() == cfg.num_pairs {
            break;
        }
        examined += 1;
        if has_alternative(g, u, v, cfg.depth) {
            pairs.push((u, v));
        }
    }
    if pairs.len() < cfg.num_pairs {
        return Err(TrustError::InsufficientSamples {
            what: "eligible edges",
            needed: cfg.num_pairs,
            found: pairs.len(),
        });
    }

    let records: Vec<PairRecord> = pairs
        .par_iter()
        .map(|&(u, v)| {
            let truth_value = g.edge_at(u, v).map_or(0.0, |op| op.positive_fraction());
            let p = predict(g, cfg, u, v)?;
            Ok(PairRecord {
                trustor: g.node_id(u).to_string(),
                trustee: g.node_id(v).to_string(),
                truth_level: scale.nearest_level(truth_value),
                predicted_level: scale.nearest_level(p.value),
                truth_value,
                predicted_value: p.value,
                certain_evidence: p.certain,
            })
        })
        .collect::<Result<_>>()?;

    let mut confusion = ConfusionMatrix::new(scale.names().to_vec());
    for r in &records {
        confusion.record(r.truth_level, r.predicted_level);
    }
    let errors: Vec<f64> = records.iter().map(|r| r.predicted_value - r.truth_value).collect();
    let certain: Vec<f64> = records.iter().filter_map(|r| r.certain_evidence).collect();

    let mut report = empty_report(ExperimentKind::F1, cfg, scale.names().to_vec());
    report.f1_micro = Some(confusion.f1_micro());
    report.f1_macro = Some(confusion.f1_macro());
    report.confusion = Some(confusion);
    report.error_fit = fit_error_distribution(&errors).ok();
    report.errors = errors;
    report.mean_certain_evidence =
        (!certain.is_empty()).then(|| certain.iter().sum::<f64>() / certain.len() as f64);
    report.records = records;
    report.runtime = RuntimeStats {
        elapsed_secs: start.elapsed().as_secs_f64(),
        evaluations: report.records.len(),
        candidates_examined: examined,
        threads: rayon::current_num_threads(),
    };
    Ok(report)
}

/// Neighbours of `u` with an alternative path, if there are enough of them
/// and their direct trust is not all tied.
fn ranking_neighbours(g: &TrustGraph, u: usize, depth: usize) -> Option<Vec<(usize, f64)>> {
    let list: Vec<(usize, f64)> = g
        .outgoing_at(u)
        .iter()
        .copied()
        .filter(|&v| has_alternative(g, u, v, depth))
        .filter_map(|v| g.edge_at(u, v).map(|op| (v, expected_belief(op))))
        .collect();
    let distinct = list.iter().any(|&(_, t)| t != list[0].1);
    (list.len() >= 3 && distinct).then_some(list)
}

/// Ranks each seed's out-neighbours by recomputed trust and compares the
/// order with the direct opinions using Kendall's tau-b.
pub fn run_ranking_experiment(g: &TrustGraph, cfg: &ExperimentConfig) -> Result<EvalReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut nodes: Vec<usize> = (0..g.node_count()).collect();
    nodes.sort_by(|&a, &b| g.node_id(a).cmp(g.node_id(b)));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    nodes.shuffle(&mut rng);

    let mut seeds = Vec::with_capacity(cfg.num_ranking_seeds);
    let mut examined = 0;
    for &u in &nodes {
        if seeds.len() == cfg.num_ranking_seeds {
            break;
        }
        examined += 1;
        if let Some(neigh) = ranking_neighbours(g, u, cfg.depth) {
            seeds.push((u, neigh));
        }
    }
    if seeds.len() < cfg.num_ranking_seeds {
        return Err(TrustError::InsufficientSamples {
            what: "eligible ranking seeds",
            needed: cfg.num_ranking_seeds,
            found: seeds.len(),
        });
    }

    let jobs: Vec<(usize, usize, usize)> = seeds
        .iter()
        .enumerate()
        .flat_map(|(i, (u, neigh))| neigh.iter().map(move |&(v, _)| (i, *u, v)))
        .collect();
    let scores: Vec<f64> = jobs
        .par_iter()
        .map(|&(_, u, v)| predict(g, cfg, u, v).map(|p| p.value))
        .collect::<Result<_>>()?;

    let mut rankings = Vec::with_capacity(seeds.len());
    let mut offset = 0;
    for (u, neigh) in &seeds {
        let computed = scores[offset..offset + neigh.len()].to_vec();
        offset += neigh.len();
        let truth: Vec<f64> = neigh.iter().map(|&(_, t)| t).collect();
        // A constant computed ranking carries no order information.
        let tau = kendall_tau_b(&truth, &computed).unwrap_or(0.0);
        rankings.push(RankingRecord {
            seed: g.node_id(*u).to_string(),
            neighbors: neigh.iter().map(|&(v, _)| g.node_id(v).to_string()).collect(),
            truth,
            computed,
            tau,
        });
    }

    let mut report = empty_report(ExperimentKind::Ranking, cfg, Vec::new());
    report.tau = rankings.iter().map(|r| r.tau).collect();
    report.tau_cdf = empirical_cdf(&report.tau);
    report.rankings = rankings;
    report.runtime = RuntimeStats {
        elapsed_secs: start.elapsed().as_secs_f64(),
        evaluations: jobs.len(),
        candidates_examined: examined,
        threads: rayon::current_num_threads(),
    };
    Ok(report)
}

/// Runs the F1 experiment for every (λ, r₀) pair with the template's seed,
/// rebuilding the scale and edge opinions each time.
pub fn parameter_sweep(
    raw: &RawEdgeList,
    style: EvidenceStyle,
    lambdas: &[f64],
    base_levels: &[f64],
    template: &ExperimentConfig,
) -> Result<Vec<SweepEntry>> {
    if lambdas.is_empty() || base_levels.is_empty() {
        return Err(TrustError::EmptyCollection);
    }
    let mut out = Vec::with_capacity(lambdas.len() * base_levels.len());
    for &lambda in lambdas {
        for &base_level in base_levels {
            let cfg = ExperimentConfig {
                lambda,
                base_level,
                ..template.clone()
            };
            cfg.validate()?;
            let scale = raw.scale(base_level, HIGHEST_FRACTION)?;
            let g = raw.to_graph(&scale, style, lambda)?;
            log::info!("sweep: lambda={lambda} base_level={base_level}");
            let report = run_f1_experiment(&g, &scale, &cfg)?;
            out.push(SweepEntry {
                lambda,
                base_level,
                report,
            });
        }
    }
    Ok(out)
}
