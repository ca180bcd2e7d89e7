use serde::{Deserialize, Serialize};

use super::{run_scenario, Scenario, SimulationReport, TestSpec};
use crate::error::{Error, Result};

/// Keys that may label table rows.
pub const ROW_KEYS: [&str; 12] = [
    "scenario",
    "itrim",
    "idetrend",
    "idemean",
    "prewhiten",
    "dgp",
    "distribution",
    "rho",
    "pattern",
    "m",
    "c",
    "lambda",
];

const FRAME_KEY: &str = "L";

/// Ordered row keys of a sweep table. Columns are always test × T.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Grouping(Vec<String>);

impl Grouping {
    pub fn new<S: Into<String>>(keys: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::try_from(keys.into_iter().map(Into::into).collect::<Vec<_>>())
    }

    pub fn keys(&self) -> &[String] {
        &self.0
    }
}

impl Default for Grouping {
    fn default() -> Self {
        Grouping(vec!["scenario".into()])
    }
}

impl TryFrom<Vec<String>> for Grouping {
    type Error = Error;

    fn try_from(keys: Vec<String>) -> Result<Self> {
        if keys.is_empty() {
            return Err(Error::InvalidInput("grouping needs at least one key".into()));
        }
        for (i, k) in keys.iter().enumerate() {
            if !ROW_KEYS.contains(&k.as_str()) && k != FRAME_KEY {
                return Err(Error::InvalidInput(format!(
                    "unknown grouping key {k:?}; expected one of {ROW_KEYS:?} or \"L\""
                )));
            }
            if keys[..i].contains(k) {
                return Err(Error::InvalidInput(format!("grouping key {k:?} repeated")));
            }
        }
        Ok(Grouping(keys))
    }
}

impl From<Grouping> for Vec<String> {
    fn from(g: Grouping) -> Self {
        g.0
    }
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.into()
}

fn row_value(key: &str, scenario: &Scenario, test: &TestSpec, frame_length: Option<usize>) -> Result<String> {
    let dgp = &scenario.dgp;
    let pre = &scenario.preprocessing;
    let missing = || {
        Error::InvalidInput(format!(
            "grouping key {key:?} does not apply to scenario {:?} (kind {})",
            scenario.name,
            dgp.kind.name()
        ))
    };
    Ok(match key {
        "scenario" => scenario.name.clone(),
        "itrim" => pre.itrim.to_string(),
        "idetrend" => flag(pre.idetrend),
        "idemean" => flag(pre.idemean),
        "prewhiten" => pre.prewhiten.unwrap_or(0).to_string(),
        "dgp" => dgp.kind.name().into(),
        "distribution" => match dgp.innovations.distribution {
            crate::datagen::Distribution::Normal => "normal".into(),
            crate::datagen::Distribution::StudentT { df } => format!("t{df}"),
        },
        "rho" => dgp.innovations.rho.to_string(),
        "pattern" => serde_json::to_value(dgp.kind.variance().ok_or_else(missing)?.pattern)?
            .as_str()
            .unwrap_or_default()
            .to_string(),
        "m" => dgp.kind.variance().ok_or_else(missing)?.m.to_string(),
        "c" => dgp.kind.variance().ok_or_else(missing)?.c.to_string(),
        "lambda" => dgp.kind.lambda().ok_or_else(missing)?.to_string(),
        FRAME_KEY => match test {
            TestSpec::Phr { .. } => frame_length.map_or_else(|| "-".into(), |l| l.to_string()),
            TestSpec::Kpss { .. } => "-".into(),
        },
        _ => return Err(missing()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub scenario: String,
    pub base_seed: u64,
    pub rejection_rate: f64,
    pub standard_error: f64,
    pub successes: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub key: Vec<String>,
    pub cells: Vec<Option<Cell>>,
}

/// Rejection rates laid out as rows of grouping keys by test × T columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub grouping: Grouping,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub reports: Vec<SimulationReport>,
}

/// Runs every scenario and lays the rates out by `grouping`.
pub fn table_sweep(scenarios: &[Scenario], grouping: &Grouping, workers: usize) -> Result<SweepTable> {
    let reports = scenarios
        .iter()
        .map(|s| run_scenario(s, workers))
        .collect::<Result<Vec<_>>>()?;
    SweepTable::from_reports(reports, grouping)
}

impl SweepTable {
    pub fn from_reports(reports: Vec<SimulationReport>, grouping: &Grouping) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::InvalidInput("no scenarios to tabulate".into()));
        }
        // Columns: tests in order of first appearance, then T ascending.
        let mut labels: Vec<&str> = Vec::new();
        let mut columns: Vec<(usize, usize)> = Vec::new();
        let mut placed: Vec<(Vec<String>, (usize, usize), Cell)> = Vec::new();
        for report in &reports {
            let s = &report.scenario;
            for summary in &report.results {
                let label = summary.test.label();
                let li = labels.iter().position(|l| *l == label).unwrap_or_else(|| {
                    labels.push(label);
                    labels.len() - 1
                });
                let col = (li, s.dgp.length);
                if !columns.contains(&col) {
                    columns.push(col);
                }
                let key = grouping
                    .keys()
                    .iter()
                    .map(|k| row_value(k, s, &summary.test, summary.frame_length))
                    .collect::<Result<Vec<_>>>()?;
                if placed.iter().any(|(k, c, _)| *k == key && *c == col) {
                    return Err(Error::InvalidInput(format!(
                        "grouping {:?} maps two results to row {key:?}, column {}.{}",
                        grouping.keys(),
                        label,
                        col.1
                    )));
                }
                placed.push((
                    key,
                    col,
                    Cell {
                        scenario: s.name.clone(),
                        base_seed: s.base_seed,
                        rejection_rate: summary.rejection_rate,
                        standard_error: summary.standard_error,
                        successes: summary.successes,
                        failures: summary.failures,
                    },
                ));
            }
        }
        columns.sort();

        let mut rows: Vec<Row> = Vec::new();
        for (key, col, cell) in placed {
            let ci = columns.iter().position(|c| *c == col).expect("column registered");
            let row = match rows.iter().position(|r| r.key == key) {
                Some(i) => &mut rows[i],
                None => {
                    rows.push(Row {
                        key,
                        cells: vec![None; columns.len()],
                    });
                    rows.last_mut().expect("just pushed")
                }
            };
            row.cells[ci] = Some(cell);
        }
        Ok(SweepTable {
            grouping: grouping.clone(),
            columns: columns.iter().map(|(l, t)| format!("{}.{t}", labels[*l])).collect(),
            rows,
            reports,
        })
    }

    fn header(&self) -> Vec<String> {
        self.grouping.keys().iter().cloned().chain(self.columns.iter().cloned()).collect()
    }

    fn body(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                r.key
                    .iter()
                    .cloned()
                    .chain(
                        r.cells
                            .iter()
                            .map(|c| c.as_ref().map_or_else(String::new, |c| format!("{:.4}", c.rejection_rate))),
                    )
                    .collect()
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Csv {
            row: 0,
            message: e.to_string(),
        };
        w.write_record(self.header()).map_err(err)?;
        for r in self.body() {
            w.write_record(r).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Csv {
            row: 0,
            message: e.to_string(),
        })?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_text(&self) -> String {
        let header = self.header();
        let body = self.body();
        let keys = self.grouping.keys().len();
        let widths: Vec<usize> = (0..header.len())
            .map(|i| {
                body.iter()
                    .map(|r| r[i].chars().count())
                    .chain([header[i].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |cells: &[String]| {
            cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i < keys {
                        format!("{c:<w$}", w = widths[i])
                    } else {
                        format!("{c:>w$}", w = widths[i])
                    }
                })
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = line(&header);
        out.push('\n');
        for r in &body {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    /// JSON sidecar with seeds, failure counts and standard errors.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
