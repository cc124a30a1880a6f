//! Benchmark data model: per-example score records, the scenario taxonomy,
//! and the dense per-subscenario score tensor every analysis reads from.
//!
//! Two on-disk formats are accepted, both carrying the same six fields:
//!
//! * a comma-separated table with the header
//!   `model,scenario,subscenario,prompt_id,example_id,score`;
//! * record lines, one JSON object per line with the same six keys.
//!
//! Loading sorts every identifier level, so the resulting [`BenchmarkData`]
//! does not depend on the order of rows in the file.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Column names of the delimited format, in order.
pub const HEADER: [&str; 6] = [
    "model",
    "scenario",
    "subscenario",
    "prompt_id",
    "example_id",
    "score",
];

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("EmptyDataset: {0} contains no data rows")]
    EmptyDataset(String),
    #[error(
        "DuplicateRecord: line {line} repeats ({model}, {subscenario}, {prompt_id}, {example_id}) first seen on line {first_line}"
    )]
    DuplicateRecord {
        line: usize,
        first_line: usize,
        model: String,
        subscenario: String,
        prompt_id: String,
        example_id: String,
    },
    #[error("MalformedRow: line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("MalformedHeader: expected `{}`, found `{found}`", HEADER.join(","))]
    MalformedHeader { found: String },
    #[error("TaxonomyConflict: subscenario {subscenario} listed under scenario {first} and {second}")]
    TaxonomyConflict {
        subscenario: String,
        first: String,
        second: String,
    },
    #[error("Io: {0}")]
    Io(#[from] std::io::Error),
}

/// One scored model call: a model answering one example under one prompt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRecord {
    pub model: String,
    pub scenario: String,
    pub subscenario: String,
    pub prompt_id: String,
    pub example_id: String,
    pub score: f64,
}

impl ScoreRecord {
    pub fn new(
        model: impl Into<String>,
        scenario: impl Into<String>,
        subscenario: impl Into<String>,
        prompt_id: impl Into<String>,
        example_id: impl Into<String>,
        score: f64,
    ) -> Self {
        Self {
            model: model.into(),
            scenario: scenario.into(),
            subscenario: subscenario.into(),
            prompt_id: prompt_id.into(),
            example_id: example_id.into(),
            score,
        }
    }
}

/// Input file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    DelimitedTable,
    RecordLines,
}

impl Format {
    /// `.jsonl` / `.ndjson` are record lines, anything else is a delimited table.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") => Format::RecordLines,
            _ => Format::DelimitedTable,
        }
    }
}

/// Scenario → subscenario grouping. Both levels are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Taxonomy {
    pub scenarios: Vec<String>,
    pub subscenarios_of: BTreeMap<String, Vec<String>>,
}

impl Taxonomy {
    pub fn scenario_of(&self, subscenario: &str) -> Option<&str> {
        self.subscenarios_of
            .iter()
            .find(|(_, subs)| subs.iter().any(|s| s == subscenario))
            .map(|(scenario, _)| scenario.as_str())
    }
}

/// Dense scores of one subscenario, laid out as `[example][prompt][model]`.
///
/// Absent cells hold NaN; loaded scores are always finite so the sentinel is
/// unambiguous. Per-example sums over prompts are cached because the
/// examples axis always takes every prompt of a chosen example.
#[derive(Debug, Clone)]
pub struct SubscenarioIndex {
    pub name: String,
    pub scenario: usize,
    pub examples: Vec<String>,
    pub prompts: Vec<String>,
    n_models: usize,
    cells: Vec<f64>,
    example_sums: Vec<f64>,
    example_counts: Vec<u32>,
    present: Vec<bool>,
}

impl SubscenarioIndex {
    pub fn n_examples(&self) -> usize {
        self.examples.len()
    }

    pub fn n_prompts(&self) -> usize {
        self.prompts.len()
    }

    pub fn n_cells(&self) -> usize {
        self.examples.len() * self.prompts.len()
    }

    /// Whether the model has at least one record in this subscenario.
    pub fn has_model(&self, model: usize) -> bool {
        self.present[model]
    }

    pub fn score(&self, model: usize, example: usize, prompt: usize) -> Option<f64> {
        let v = self.cells[(example * self.prompts.len() + prompt) * self.n_models + model];
        (!v.is_nan()).then_some(v)
    }

    /// Scores of every model for one `(example, prompt)` cell; NaN marks absence.
    pub(crate) fn cell_row(&self, cell: usize) -> &[f64] {
        &self.cells[cell * self.n_models..(cell + 1) * self.n_models]
    }

    /// Prompt-summed scores of every model for one example.
    pub(crate) fn example_row(&self, example: usize) -> (&[f64], &[u32]) {
        let r = example * self.n_models..(example + 1) * self.n_models;
        (&self.example_sums[r.clone()], &self.example_counts[r])
    }
}

/// The full score tensor with its taxonomy and identifier indexes.
///
/// Immutable once built; safe to share between threads.
#[derive(Debug, Clone)]
pub struct BenchmarkData {
    taxonomy: Taxonomy,
    models: Vec<String>,
    subscenarios: Vec<SubscenarioIndex>,
    scenario_ranges: Vec<Range<usize>>,
    n_records: usize,
}

impl PartialEq for BenchmarkData {
    fn eq(&self, other: &Self) -> bool {
        self.taxonomy == other.taxonomy
            && self.models == other.models
            && self.subscenarios.len() == other.subscenarios.len()
            && self.subscenarios.iter().zip(&other.subscenarios).all(|(a, b)| {
                a.name == b.name
                    && a.examples == b.examples
                    && a.prompts == b.prompts
                    && a.cells.len() == b.cells.len()
                    && a.cells.iter().zip(&b.cells).all(|(x, y)| x.to_bits() == y.to_bits())
            })
    }
}

impl BenchmarkData {
    /// Builds the indexed dataset. Records are numbered from 1 in error messages.
    pub fn from_records(records: Vec<ScoreRecord>) -> Result<Self, DataError> {
        let numbered = records.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect();
        Self::build(numbered, "record list")
    }

    fn build(rows: Vec<(usize, ScoreRecord)>, source: &str) -> Result<Self, DataError> {
        if rows.is_empty() {
            return Err(DataError::EmptyDataset(source.to_string()));
        }

        let mut scenario_of: HashMap<&str, (&str, usize)> = HashMap::new();
        for (line, r) in &rows {
            for (field, value) in [
                ("model", &r.model),
                ("scenario", &r.scenario),
                ("subscenario", &r.subscenario),
                ("prompt_id", &r.prompt_id),
                ("example_id", &r.example_id),
            ] {
                if value.is_empty() {
                    return Err(DataError::MalformedRow {
                        line: *line,
                        reason: format!("empty {field}"),
                    });
                }
            }
            if !r.score.is_finite() {
                return Err(DataError::MalformedRow {
                    line: *line,
                    reason: format!("non-finite score {}", r.score),
                });
            }
            match scenario_of.get(r.subscenario.as_str()) {
                Some((scenario, _)) if *scenario != r.scenario => {
                    let (a, b) = if *scenario < r.scenario.as_str() {
                        (scenario.to_string(), r.scenario.clone())
                    } else {
                        (r.scenario.clone(), scenario.to_string())
                    };
                    return Err(DataError::TaxonomyConflict {
                        subscenario: r.subscenario.clone(),
                        first: a,
                        second: b,
                    });
                }
                Some(_) => {}
                None => {
                    scenario_of.insert(&r.subscenario, (&r.scenario, *line));
                }
            }
        }

        let models: Vec<String> = sorted_unique(rows.iter().map(|(_, r)| r.model.as_str()));
        let mut subscenarios_of: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (sub, (scenario, _)) in &scenario_of {
            subscenarios_of
                .entry(scenario.to_string())
                .or_default()
                .push(sub.to_string());
        }
        for subs in subscenarios_of.values_mut() {
            subs.sort();
        }
        let scenarios: Vec<String> = subscenarios_of.keys().cloned().collect();

        let model_idx: HashMap<&str, usize> =
            models.iter().enumerate().map(|(i, m)| (m.as_str(), i)).collect();

        // Flatten subscenarios in taxonomy order.
        let mut sub_order: Vec<(usize, &str)> = Vec::new();
        let mut scenario_ranges = Vec::with_capacity(scenarios.len());
        for (si, scenario) in scenarios.iter().enumerate() {
            let start = sub_order.len();
            for sub in &subscenarios_of[scenario] {
                sub_order.push((si, sub.as_str()));
            }
            scenario_ranges.push(start..sub_order.len());
        }
        let sub_idx: HashMap<&str, usize> =
            sub_order.iter().enumerate().map(|(i, (_, s))| (*s, i)).collect();

        let mut by_sub: Vec<Vec<usize>> = vec![Vec::new(); sub_order.len()];
        for (i, (_, r)) in rows.iter().enumerate() {
            by_sub[sub_idx[r.subscenario.as_str()]].push(i);
        }

        let n_models = models.len();
        let mut subscenarios = Vec::with_capacity(sub_order.len());
        for (j, (scenario, name)) in sub_order.iter().enumerate() {
            let members = &by_sub[j];
            let examples = sorted_unique(members.iter().map(|&i| rows[i].1.example_id.as_str()));
            let prompts = sorted_unique(members.iter().map(|&i| rows[i].1.prompt_id.as_str()));
            let ex_idx: HashMap<&str, usize> =
                examples.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
            let pr_idx: HashMap<&str, usize> =
                prompts.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();

            let n_cells = examples.len() * prompts.len();
            let mut cells = vec![f64::NAN; n_cells * n_models];
            let mut first_line = vec![0usize; n_cells * n_models];
            let mut present = vec![false; n_models];
            for &i in members {
                let (line, r) = &rows[i];
                let m = model_idx[r.model.as_str()];
                let cell = ex_idx[r.example_id.as_str()] * prompts.len() + pr_idx[r.prompt_id.as_str()];
                let slot = cell * n_models + m;
                if !cells[slot].is_nan() {
                    // Report the later of the two occurrences as the offending line.
                    let (first, dup) = if first_line[slot] < *line {
                        (first_line[slot], *line)
                    } else {
                        (*line, first_line[slot])
                    };
                    return Err(DataError::DuplicateRecord {
                        line: dup,
                        first_line: first,
                        model: r.model.clone(),
                        subscenario: r.subscenario.clone(),
                        prompt_id: r.prompt_id.clone(),
                        example_id: r.example_id.clone(),
                    });
                }
                cells[slot] = r.score;
                first_line[slot] = *line;
                present[m] = true;
            }

            let n_prompts = prompts.len();
            let mut example_sums = vec![0.0; examples.len() * n_models];
            let mut example_counts = vec![0u32; examples.len() * n_models];
            for e in 0..examples.len() {
                for p in 0..n_prompts {
                    let row = &cells[(e * n_prompts + p) * n_models..][..n_models];
                    for (m, &v) in row.iter().enumerate() {
                        if !v.is_nan() {
                            example_sums[e * n_models + m] += v;
                            example_counts[e * n_models + m] += 1;
                        }
                    }
                }
            }

            subscenarios.push(SubscenarioIndex {
                name: name.to_string(),
                scenario: *scenario,
                examples,
                prompts,
                n_models,
                cells,
                example_sums,
                example_counts,
                present,
            });
        }

        Ok(Self {
            taxonomy: Taxonomy {
                scenarios,
                subscenarios_of,
            },
            models,
            subscenarios,
            scenario_ranges,
            n_records: rows.len(),
        })
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub fn models(&self) -> &[String] {
        &self.models
    }

    pub fn n_models(&self) -> usize {
        self.models.len()
    }

    pub fn model_index(&self, model: &str) -> Option<usize> {
        self.models.binary_search_by(|m| m.as_str().cmp(model)).ok()
    }

    pub fn scenarios(&self) -> &[String] {
        &self.taxonomy.scenarios
    }

    pub fn n_scenarios(&self) -> usize {
        self.taxonomy.scenarios.len()
    }

    pub fn scenario_index(&self, scenario: &str) -> Option<usize> {
        self.taxonomy
            .scenarios
            .binary_search_by(|s| s.as_str().cmp(scenario))
            .ok()
    }

    /// Subscenarios flattened in taxonomy order (scenario, then name).
    pub fn subscenarios(&self) -> &[SubscenarioIndex] {
        &self.subscenarios
    }

    pub fn subscenario(&self, idx: usize) -> &SubscenarioIndex {
        &self.subscenarios[idx]
    }

    pub fn subscenario_index(&self, name: &str) -> Option<usize> {
        self.subscenarios.iter().position(|s| s.name == name)
    }

    /// Flat subscenario indices belonging to a scenario.
    pub fn scenario_subscenarios(&self, scenario: usize) -> Range<usize> {
        self.scenario_ranges[scenario].clone()
    }

    /// Number of distinct examples across a scenario's subscenarios.
    pub fn scenario_pool(&self, scenario: usize) -> usize {
        self.scenario_subscenarios(scenario)
            .map(|j| self.subscenarios[j].n_examples())
            .sum()
    }

    pub fn record_count(&self) -> usize {
        self.n_records
    }

    /// Every record, ordered by subscenario, example, prompt, then model.
    pub fn records(&self) -> impl Iterator<Item = ScoreRecord> + '_ {
        self.subscenarios.iter().flat_map(move |sub| {
            let scenario = &self.taxonomy.scenarios[sub.scenario];
            (0..sub.n_examples()).flat_map(move |e| {
                (0..sub.n_prompts()).flat_map(move |p| {
                    (0..self.models.len()).filter_map(move |m| {
                        sub.score(m, e, p).map(|score| ScoreRecord {
                            model: self.models[m].clone(),
                            scenario: scenario.clone(),
                            subscenario: sub.name.clone(),
                            prompt_id: sub.prompts[p].clone(),
                            example_id: sub.examples[e].clone(),
                            score,
                        })
                    })
                })
            })
        })
    }

    /// A new dataset holding only the records of models accepted by `keep`.
    pub fn filter_models(&self, keep: impl Fn(&str) -> bool) -> Result<Self, DataError> {
        let records = self.records().filter(|r| keep(&r.model)).collect();
        Self::from_records(records)
    }

    /// A new dataset with extra records appended.
    pub fn with_records(&self, extra: Vec<ScoreRecord>) -> Result<Self, DataError> {
        let mut records: Vec<ScoreRecord> = self.records().collect();
        records.extend(extra);
        Self::from_records(records)
    }
}

fn sorted_unique<'a>(items: impl Iterator<Item = &'a str>) -> Vec<String> {
    items
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(str::to_string)
        .collect()
}

/// Loads a results file in the given format.
pub fn load_results(path: &Path, format: Format) -> Result<BenchmarkData, DataError> {
    let file = File::open(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    read_results(file, format, &path.display().to_string())
}

/// Parses results from any reader; `source` names the input in errors.
pub fn read_results<R: Read>(
    reader: R,
    format: Format,
    source: &str,
) -> Result<BenchmarkData, DataError> {
    let rows = match format {
        Format::DelimitedTable => parse_delimited(reader)?,
        Format::RecordLines => parse_record_lines(reader)?,
    };
    BenchmarkData::build(rows, source)
}

fn parse_delimited<R: Read>(reader: R) -> Result<Vec<(usize, ScoreRecord)>, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(DataError::MalformedHeader {
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut rows = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => return Err(csv_error(e)),
        }
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != HEADER.len() {
            return Err(DataError::MalformedRow {
                line,
                reason: format!("expected {} fields, found {}", HEADER.len(), record.len()),
            });
        }
        let score = parse_score(&record[5], line)?;
        rows.push((
            line,
            ScoreRecord::new(&record[0], &record[1], &record[2], &record[3], &record[4], score),
        ));
    }
    Ok(rows)
}

fn parse_score(text: &str, line: usize) -> Result<f64, DataError> {
    let score: f64 = text.parse().map_err(|_| DataError::MalformedRow {
        line,
        reason: format!("unparseable score `{text}`"),
    })?;
    if !score.is_finite() {
        return Err(DataError::MalformedRow {
            line,
            reason: format!("non-finite score `{text}`"),
        });
    }
    Ok(score)
}

fn csv_error(e: csv::Error) -> DataError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => DataError::Io(io),
        kind => DataError::MalformedRow {
            line,
            reason: format!("{kind:?}"),
        },
    }
}

fn parse_record_lines<R: Read>(reader: R) -> Result<Vec<(usize, ScoreRecord)>, DataError> {
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let text = line.trim_end_matches('\r');
        if text.trim().is_empty() {
            continue;
        }
        let record: ScoreRecord =
            serde_json::from_str(text).map_err(|e| DataError::MalformedRow {
                line: i + 1,
                reason: e.to_string(),
            })?;
        if !record.score.is_finite() {
            return Err(DataError::MalformedRow {
                line: i + 1,
                reason: "non-finite score".into(),
            });
        }
        rows.push((i + 1, record));
    }
    Ok(rows)
}

/// Writes the dataset as a delimited table with the canonical header.
pub fn write_delimited<W: Write>(data: &BenchmarkData, writer: W) -> Result<(), DataError> {
    write_records(data.records(), writer)
}

pub fn write_records<W: Write>(
    records: impl IntoIterator<Item = ScoreRecord>,
    writer: W,
) -> Result<(), DataError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(HEADER).map_err(csv_error)?;
    for r in records {
        wtr.write_record([
            r.model.as_str(),
            &r.scenario,
            &r.subscenario,
            &r.prompt_id,
            &r.example_id,
            &r.score.to_string(),
        ])
        .map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes the dataset as record lines.
pub fn write_record_lines<W: Write>(data: &BenchmarkData, mut writer: W) -> Result<(), DataError> {
    for r in data.records() {
        let line = serde_json::to_string(&r).expect("records always serialize");
        writeln!(writer, "{line}")?;
    }
    Ok(())
}

/// A generic delimited table: header plus string rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Reads any comma-separated table with a header row, checking that every
/// row matches the header arity.
pub fn read_table<R: Read>(reader: R) -> Result<Table, DataError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let header: Vec<String> = rdr.headers().map_err(csv_error)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        if rec.len() != header.len() {
            let line = rec.position().map_or(0, |p| p.line() as usize);
            return Err(DataError::MalformedRow {
                line,
                reason: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        rows.push(rec.iter().map(String::from).collect());
    }
    Ok(Table { header, rows })
}

/// Problems found by [`validate`] that do not prevent analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// The model lacks some of the subscenario's examples.
    PartialExampleCoverage {
        model: String,
        subscenario: String,
        missing_examples: Vec<String>,
    },
    /// The model never uses some of the subscenario's prompts.
    PartialPromptCoverage {
        model: String,
        subscenario: String,
        missing_prompts: Vec<String>,
    },
    /// Some models score entirely inside [0, 1] while others exceed it;
    /// usually a fraction/percentage mix-up.
    MixedScale {
        subscenario: String,
        models_outside_unit: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingPair {
    pub model: String,
    pub subscenario: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub records: usize,
    pub models: usize,
    pub scenarios: usize,
    pub subscenarios: usize,
    pub examples: usize,
    pub prompts: usize,
    pub missing: Vec<MissingPair>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty() && self.warnings.is_empty()
    }
}

/// Summarizes the dataset and lists missing submissions and coverage gaps.
pub fn validate(data: &BenchmarkData) -> ValidationReport {
    let mut missing = Vec::new();
    let mut warnings = Vec::new();
    let mut prompt_ids = BTreeSet::new();

    for sub in data.subscenarios() {
        prompt_ids.extend(sub.prompts.iter().map(String::as_str));
        let mut inside_only = false;
        let mut outside = Vec::new();
        for (m, model) in data.models().iter().enumerate() {
            if !sub.has_model(m) {
                missing.push(MissingPair {
                    model: model.clone(),
                    subscenario: sub.name.clone(),
                });
                continue;
            }
            let mut has_example = vec![false; sub.n_examples()];
            let mut has_prompt = vec![false; sub.n_prompts()];
            let mut any_outside = false;
            for e in 0..sub.n_examples() {
                for p in 0..sub.n_prompts() {
                    if let Some(v) = sub.score(m, e, p) {
                        has_example[e] = true;
                        has_prompt[p] = true;
                        any_outside |= !(0.0..=1.0).contains(&v);
                    }
                }
            }
            if any_outside {
                outside.push(model.clone());
            } else {
                inside_only = true;
            }
            let missing_examples: Vec<String> = has_example
                .iter()
                .zip(&sub.examples)
                .filter(|(h, _)| !**h)
                .map(|(_, e)| e.clone())
                .collect();
            if !missing_examples.is_empty() {
                warnings.push(Warning::PartialExampleCoverage {
                    model: model.clone(),
                    subscenario: sub.name.clone(),
                    missing_examples,
                });
            }
            let missing_prompts: Vec<String> = has_prompt
                .iter()
                .zip(&sub.prompts)
                .filter(|(h, _)| !**h)
                .map(|(_, p)| p.clone())
                .collect();
            if !missing_prompts.is_empty() {
                warnings.push(Warning::PartialPromptCoverage {
                    model: model.clone(),
                    subscenario: sub.name.clone(),
                    missing_prompts,
                });
            }
        }
        if inside_only && !outside.is_empty() {
            warnings.push(Warning::MixedScale {
                subscenario: sub.name.clone(),
                models_outside_unit: outside,
            });
        }
    }

    ValidationReport {
        records: data.record_count(),
        models: data.n_models(),
        scenarios: data.n_scenarios(),
        subscenarios: data.subscenarios().len(),
        examples: data.subscenarios().iter().map(|s| s.n_examples()).sum(),
        prompts: prompt_ids.len(),
        missing,
        warnings,
    }
}
