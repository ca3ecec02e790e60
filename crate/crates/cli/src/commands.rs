use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::json;
use trustcalc::assess::{assess, assess_sl, assess_with_trace, AssessQuery};
use trustcalc::baselines::{eigen_trust, tidal_trust, trust_rank};
use trustcalc::eval::{
    parameter_sweep, run_f1_experiment, run_ranking_experiment, Algorithm, EvalReport, ExperimentConfig,
};
use trustcalc::synthetic::{generate, SyntheticSpec};
use trustcalc::{sl_expected_belief, write_opinion_list, EvidenceStyle, GraphStats};

use crate::error::CliError;
use crate::input::{detect, load_opinions, read_any_levels, Format};
use crate::{
    AssessArgs, Cli, Command, CompareArgs, ConvertArgs, F1Args, GenerateArgs, GraphArgs, RankArgs, StatsArgs,
    SweepArgs,
};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli) -> Result<()> {
    configure_threads(cli.jobs)?;
    let seed = cli.seed;
    match cli.command {
        Command::Assess(a) => cmd_assess(a),
        Command::Convert(a) => cmd_convert(a),
        Command::ExperimentF1(a) => cmd_f1(a, seed),
        Command::ExperimentRank(a) => cmd_rank(a, seed),
        Command::Sweep(a) => cmd_sweep(a, seed),
        Command::Stats(a) => cmd_stats(a),
        Command::Generate(a) => cmd_generate(a, seed),
        Command::Compare(a) => cmd_compare(a, seed),
    }
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let jobs = match std::env::var("TRUSTCALC_JOBS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("TRUSTCALC_JOBS must be a positive integer, got `{v}`")))?,
        ),
        Err(_) => flag,
    };
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.into()))?;
    }
    Ok(())
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| CliError::Data(anyhow::Error::new(e).context(format!("cannot write {}", path.display()))))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Data(anyhow::Error::new(e).context(format!("cannot write {}", path.display()))))
}

fn config(graph: &GraphArgs, style: Option<EvidenceStyle>, algorithm: Algorithm, depth: usize, seed: u64) -> ExperimentConfig {
    let style = style.unwrap_or(EvidenceStyle::PositiveNegative);
    ExperimentConfig {
        depth,
        seed,
        ..ExperimentConfig::new(algorithm, graph.lambda, graph.base_level_for(style))
    }
}

fn cmd_assess(a: AssessArgs) -> Result<()> {
    let g = a.graph.load_graph()?;
    let algorithm = Algorithm::from(a.algorithm);
    let q = AssessQuery::new(a.trustor.as_str(), a.trustee.as_str(), a.depth)?;
    let mut out = json!({
        "trustor": a.trustor,
        "trustee": a.trustee,
        "depth": a.depth,
        "algorithm": algorithm.code(),
    });
    match algorithm {
        Algorithm::AssessTrust => {
            let (op, trace) = if a.trace {
                let (op, trace) = assess_with_trace(&g, &q)?;
                (op, Some(trace))
            } else {
                (assess(&g, &q)?, None)
            };
            let certainty = op.collapse().certainty();
            out["opinion"] = json!(op.components());
            out["base_rate"] = json!(op.base_rate());
            out["certainty"] = json!(certainty);
            out["expected_belief"] = json!(op.expected_belief());
            if let Some(t) = trace {
                out["trace"] = json!({
                    "invocations": t.invocations,
                    "expression": t.expression.to_string(),
                });
            }
            eprintln!(
                "{} -> {}: ⟨{}, {}, {}⟩, expected belief {:.4}",
                a.trustor,
                a.trustee,
                op.alpha(),
                op.beta(),
                op.gamma(),
                op.expected_belief()
            );
        }
        Algorithm::SlStar => {
            let op = assess_sl(&g, &q)?;
            let e = sl_expected_belief(&op);
            out["opinion"] = json!([op.alpha(), op.beta()]);
            out["base_rate"] = json!(op.base_rate());
            out["expected_belief"] = json!(e);
            eprintln!("{} -> {}: SL ⟨{}, {}⟩, expected belief {e:.4}", a.trustor, a.trustee, op.alpha(), op.beta());
        }
        Algorithm::TidalTrust => {
            let v = tidal_trust(&g, &a.trustor, &a.trustee, a.depth)?;
            out["value"] = json!(v);
            eprintln!("{} -> {}: TidalTrust {v:.4}", a.trustor, a.trustee);
        }
        Algorithm::EigenTrust | Algorithm::TrustRank => {
            let params = Default::default();
            let scores = if algorithm == Algorithm::EigenTrust {
                eigen_trust(&g, None, params)?
            } else {
                trust_rank(&g, &[a.trustor.as_str()], params)?
            };
            let v = scores.score(&a.trustee).unwrap_or(0.0);
            out["score"] = json!(v);
            out["iterations"] = json!(scores.iterations);
            out["converged"] = json!(scores.converged);
            eprintln!("{}: {algorithm} score {v:.6}", a.trustee);
        }
    }
    emit(&out)
}

fn cmd_convert(a: ConvertArgs) -> Result<()> {
    let lg = a.graph.load_levels()?;
    let mut out = create(&a.output)?;
    write_opinion_list(&lg.graph, &mut out)?;
    out.flush()?;
    eprintln!(
        "wrote {} edges to {} (lambda {}, base level {})",
        lg.graph.edge_count(),
        a.output.display(),
        a.graph.lambda,
        lg.base_level
    );
    emit(&json!({
        "output": a.output.display().to_string(),
        "nodes": lg.graph.node_count(),
        "edges": lg.graph.edge_count(),
        "style": lg.style,
        "lambda": a.graph.lambda,
        "levels": lg.scale.names(),
        "fractions": lg.scale.fractions(),
    }))
}

fn summarize(report: &EvalReport) {
    let cfg = &report.config;
    let rt = &report.runtime;
    match (report.f1_micro, report.f1_macro) {
        (Some(micro), Some(macro_)) => {
            eprint!(
                "{} F1 (lambda {}, base {}): micro {micro:.4}, macro {macro_:.4}",
                cfg.algorithm, cfg.lambda, cfg.base_level
            );
            if let Some(fit) = report.error_fit {
                eprint!(", error N({:.4}, {:.4})", fit.mean, fit.std);
            }
            if let Some(c) = report.mean_certain_evidence {
                eprint!(", mean α+β {c:.3}");
            }
            eprintln!();
        }
        _ => {
            if let Some(t) = report.mean_tau() {
                eprintln!("{} ranking: mean tau {t:.4} over {} seeds", cfg.algorithm, report.tau.len());
            }
        }
    }
    eprintln!(
        "  {} evaluations, {} candidates examined, {} threads, {:.2}s",
        rt.evaluations, rt.candidates_examined, rt.threads, rt.elapsed_secs
    );
}

fn cmd_f1(a: F1Args, seed: u64) -> Result<()> {
    let lg = a.graph.load_levels()?;
    let cfg = ExperimentConfig {
        num_pairs: a.pairs,
        ..config(&a.graph, Some(lg.style), a.algorithm.into(), a.depth, seed)
    };
    let report = run_f1_experiment(&lg.graph, &lg.scale, &cfg)?;
    summarize(&report);
    if let Some(path) = &a.errors_csv {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["trustor", "trustee", "truth_value", "predicted_value", "error"])?;
        for r in &report.records {
            w.serialize((
                &r.trustor,
                &r.trustee,
                r.truth_value,
                r.predicted_value,
                r.predicted_value - r.truth_value,
            ))?;
        }
        w.flush()?;
    }
    if let Some(path) = &a.output {
        write_json(path, &report)?;
    }
    emit(&report)
}

fn cmd_rank(a: RankArgs, seed: u64) -> Result<()> {
    let style = a.graph.style.map(EvidenceStyle::from);
    let g = a.graph.load_graph()?;
    let cfg = ExperimentConfig {
        num_ranking_seeds: a.ranking_seeds,
        ..config(&a.graph, style, a.algorithm.into(), a.depth, seed)
    };
    let report = run_ranking_experiment(&g, &cfg)?;
    summarize(&report);
    if let Some(path) = &a.tau_csv {
        let mut w = csv::Writer::from_writer(create(path)?);
        w.write_record(["seed", "neighbors", "tau"])?;
        for r in &report.rankings {
            w.serialize((&r.seed, r.neighbors.len(), r.tau))?;
        }
        w.flush()?;
    }
    if let Some(path) = &a.output {
        write_json(path, &report)?;
    }
    emit(&report)
}

fn cmd_sweep(a: SweepArgs, seed: u64) -> Result<()> {
    let (raw, style) = a.graph.read_raw()?;
    let template = ExperimentConfig {
        num_pairs: a.pairs,
        ..config(&a.graph, Some(style), a.algorithm.into(), a.depth, seed)
    };
    fs::create_dir_all(&a.out_dir).map_err(|e| {
        CliError::Data(anyhow::Error::new(e).context(format!("cannot create {}", a.out_dir.display())))
    })?;
    let entries = parameter_sweep(&raw, style, &a.lambdas, &a.base_levels, &template)?;
    let mut summary = Vec::with_capacity(entries.len());
    for e in &entries {
        let file = a
            .out_dir
            .join(format!("f1_{}_lambda{}_base{}.json", template.algorithm, e.lambda, e.base_level));
        write_json(&file, &e.report)?;
        summarize(&e.report);
        summary.push(json!({
            "lambda": e.lambda,
            "base_level": e.base_level,
            "f1_micro": e.report.f1_micro,
            "f1_macro": e.report.f1_macro,
            "error_fit": e.report.error_fit,
            "file": file.display().to_string(),
        }));
    }
    emit(&summary)
}

#[derive(Serialize)]
struct StatsOut {
    #[serde(flatten)]
    stats: GraphStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    level_counts: Option<std::collections::BTreeMap<String, u64>>,
}

fn cmd_stats(a: StatsArgs) -> Result<()> {
    let out = match detect(&a.graph)? {
        Format::Empty => StatsOut {
            stats: GraphStats::from_counts(0, 0),
            level_counts: None,
        },
        Format::Opinions => StatsOut {
            stats: load_opinions(&a.graph)?.stats(),
            level_counts: None,
        },
        Format::Levels => {
            let raw = read_any_levels(&a.graph)?;
            let counts = raw
                .level_names()
                .iter()
                .cloned()
                .zip(raw.level_counts())
                .collect();
            StatsOut {
                stats: raw.stats(),
                level_counts: Some(counts),
            }
        }
    };
    eprintln!(
        "{}: {} nodes, {} edges, mean out-degree {:.2}, mean total degree {:.2}",
        a.graph.display(),
        out.stats.nodes,
        out.stats.edges,
        out.stats.mean_out_degree,
        out.stats.mean_total_degree
    );
    emit(&out)
}

fn cmd_generate(a: GenerateArgs, seed: u64) -> Result<()> {
    let style = EvidenceStyle::from(a.style);
    let spec = SyntheticSpec {
        nodes: a.nodes,
        mean_out_degree: a.degree,
        level_names: style.default_level_names(),
        ..SyntheticSpec::default()
    };
    let raw = generate(&spec, seed)?;
    let mut out = create(&a.output)?;
    writeln!(out, "# src\tdst\tlevel")?;
    for e in raw.edges() {
        writeln!(out, "{}\t{}\t{}", e.src, e.dst, raw.level_names()[e.level])?;
    }
    out.flush()?;
    let stats = raw.stats();
    eprintln!("wrote {} nodes, {} edges to {}", stats.nodes, stats.edges, a.output.display());
    emit(&json!({
        "output": a.output.display().to_string(),
        "nodes": stats.nodes,
        "edges": stats.edges,
        "level_counts": raw.level_names().iter().zip(raw.level_counts()).collect::<std::collections::BTreeMap<_, _>>(),
    }))
}

fn cmd_compare(a: CompareArgs, seed: u64) -> Result<()> {
    let lg = a.graph.load_levels()?;
    let mut f1 = Vec::new();
    let mut ranking = Vec::new();
    for algorithm in Algorithm::ALL {
        let base = config(&a.graph, Some(lg.style), algorithm, a.depth, seed);
        if algorithm.is_absolute() {
            let cfg = ExperimentConfig {
                num_pairs: a.pairs,
                ..base.clone()
            };
            let r = run_f1_experiment(&lg.graph, &lg.scale, &cfg)?;
            summarize(&r);
            f1.push(json!({
                "algorithm": algorithm.code(),
                "f1_micro": r.f1_micro,
                "f1_macro": r.f1_macro,
                "error_fit": r.error_fit,
                "mean_certain_evidence": r.mean_certain_evidence,
            }));
        }
        let cfg = ExperimentConfig {
            num_ranking_seeds: a.ranking_seeds,
            ..base
        };
        let r = run_ranking_experiment(&lg.graph, &cfg)?;
        summarize(&r);
        ranking.push(json!({
            "algorithm": algorithm.code(),
            "mean_tau": r.mean_tau(),
            "tau_cdf": r.tau_cdf,
        }));
    }
    emit(&json!({
        "lambda": a.graph.lambda,
        "base_level": lg.base_level,
        "depth": a.depth,
        "seed": seed,
        "f1": f1,
        "ranking": ranking,
    }))
}
