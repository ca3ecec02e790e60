use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use trustcalc::scale::HIGHEST_FRACTION;
use trustcalc::{read_opinion_list, EvidenceStyle, LevelScale, RawEdgeList, TrustGraph};

use crate::error::CliError;
use crate::GraphArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Levels,
    Opinions,
    /// No data lines at all.
    Empty,
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(anyhow::Error::new(e).context(format!("cannot read {}", path.display()))))
}

/// Classifies an edge list by the field count of its first data line.
pub fn detect(path: &Path) -> Result<Format, CliError> {
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        return match line.split('\t').count() {
            3 => Ok(Format::Levels),
            5 | 6 => Ok(Format::Opinions),
            n => Err(CliError::Data(anyhow::anyhow!(
                "{}: line {}: expected 3 (level) or 5-6 (opinion) tab-separated fields, found {n}",
                path.display(),
                i + 1
            ))),
        };
    }
    Ok(Format::Empty)
}

/// A level edge list together with the scale and graph built from it.
pub struct LevelGraph {
    pub raw: RawEdgeList,
    pub style: EvidenceStyle,
    pub scale: LevelScale,
    pub graph: TrustGraph,
    pub base_level: f64,
}

impl GraphArgs {
    fn style(&self) -> Result<EvidenceStyle, CliError> {
        self.style
            .map(EvidenceStyle::from)
            .ok_or_else(|| CliError::usage("--style is required for level edge lists (advogato or pgp)"))
    }

    pub fn base_level_for(&self, style: EvidenceStyle) -> f64 {
        self.base_level.unwrap_or_else(|| style.default_lowest_fraction())
    }

    fn level_names(&self, style: EvidenceStyle) -> Vec<String> {
        self.levels.clone().unwrap_or_else(|| style.default_level_names())
    }

    pub fn read_raw(&self) -> Result<(RawEdgeList, EvidenceStyle), CliError> {
        let style = self.style()?;
        if detect(&self.graph)? == Format::Opinions {
            return Err(CliError::Data(anyhow::anyhow!(
                "{} holds explicit opinions; this command needs a level edge list",
                self.graph.display()
            )));
        }
        let raw = RawEdgeList::read(open(&self.graph)?, &self.level_names(style))
            .map_err(|e| CliError::from(e).context(self.graph.display()))?;
        report_warnings(&self.graph, raw.warnings());
        Ok((raw, style))
    }

    pub fn load_levels(&self) -> Result<LevelGraph, CliError> {
        let (raw, style) = self.read_raw()?;
        let base_level = self.base_level_for(style);
        let scale = raw
            .scale(base_level, HIGHEST_FRACTION)
            .map_err(|e| CliError::Data(anyhow::Error::new(e).context(self.graph.display().to_string())))?;
        let graph = raw.to_graph(&scale, style, self.lambda)?;
        Ok(LevelGraph {
            raw,
            style,
            scale,
            graph,
            base_level,
        })
    }

    /// Any supported edge list as a graph of opinions.
    pub fn load_graph(&self) -> Result<TrustGraph, CliError> {
        match detect(&self.graph)? {
            Format::Opinions => {
                let (g, warnings) = read_opinion_list(open(&self.graph)?)
                    .map_err(|e| CliError::from(e).context(self.graph.display()))?;
                report_warnings(&self.graph, warnings);
                Ok(g)
            }
            Format::Empty => Ok(TrustGraph::new()),
            Format::Levels => Ok(self.load_levels()?.graph),
        }
    }
}

fn report_warnings(path: &Path, w: trustcalc::LoadWarnings) {
    if w.duplicates > 0 || w.self_loops > 0 {
        eprintln!(
            "{}: replaced {} duplicate edge(s), dropped {} self-loop(s)",
            path.display(),
            w.duplicates,
            w.self_loops
        );
    }
}

/// Level edge list read with its own distinct level tokens, for `stats`.
pub fn read_any_levels(path: &Path) -> Result<RawEdgeList, CliError> {
    let mut tokens: Vec<String> = Vec::new();
    for line in open(path)?.lines() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(t) = line.split('\t').nth(2) {
            if !tokens.iter().any(|x| x == t) {
                tokens.push(t.to_string());
            }
        }
    }
    tokens.sort();
    RawEdgeList::read(open(path)?, &tokens).map_err(|e| CliError::from(e).context(path.display()))
}

pub fn load_opinions(path: &Path) -> Result<TrustGraph, CliError> {
    let (g, _) = read_opinion_list(open(path)?).map_err(|e| CliError::from(e).context(path.display()))?;
    Ok(g)
}
