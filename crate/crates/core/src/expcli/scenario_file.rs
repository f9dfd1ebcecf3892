//! Scenario files: flat `key = value` text with optional `[sweep]` and
//! `[series]` blocks.
//!
//! ```text
//! # comment
//! p_s_db = 10
//! scheme = rate
//! q = 0.1
//!
//! [sweep]
//! variable = p_r_max_db
//! start = 0
//! stop = 30
//! points = 31
//! spacing = linear
//!
//! [series]
//! variable = sigma_d_sq_db
//! values = -10, 0, 10
//! ```
//!
//! Keys ending in `_db` are decibels, every other numeric key is linear.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::optimizer::FeasibleRegion;
use crate::scenario::{db_to_linear, SchemeConfig, SystemParams};
use crate::search::{linspace, logspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn parse_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Numeric scenario keys, usable as sweep or series variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    PSDb,
    PRMaxDb,
    SigmaRSqDb,
    SigmaDSqDb,
    SigmaSSqDb,
    RSd,
    Epsilon,
    HSrSq,
    HRsSq,
    Q,
    PDelta,
}

impl Variable {
    pub const ALL: [Variable; 11] = [
        Variable::PSDb,
        Variable::PRMaxDb,
        Variable::SigmaRSqDb,
        Variable::SigmaDSqDb,
        Variable::SigmaSSqDb,
        Variable::RSd,
        Variable::Epsilon,
        Variable::HSrSq,
        Variable::HRsSq,
        Variable::Q,
        Variable::PDelta,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Variable::PSDb => "p_s_db",
            Variable::PRMaxDb => "p_r_max_db",
            Variable::SigmaRSqDb => "sigma_r_sq_db",
            Variable::SigmaDSqDb => "sigma_d_sq_db",
            Variable::SigmaSSqDb => "sigma_s_sq_db",
            Variable::RSd => "r_sd",
            Variable::Epsilon => "epsilon",
            Variable::HSrSq => "h_sr_sq",
            Variable::HRsSq => "h_rs_sq",
            Variable::Q => "q",
            Variable::PDelta => "p_delta",
        }
    }
}

impl FromStr for Variable {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Variable::ALL
            .into_iter()
            .find(|v| v.key() == s)
            .ok_or_else(|| format!("unknown variable `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    Rate,
    Power,
    Both,
}

impl SchemeChoice {
    fn key(&self) -> &'static str {
        match self {
            SchemeChoice::Rate => "rate",
            SchemeChoice::Power => "power",
            SchemeChoice::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub variable: Variable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        match self.spacing {
            Spacing::Linear => linspace(self.start, self.stop, self.points),
            Spacing::Log => logspace(self.start, self.stop, self.points),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub variable: Variable,
    pub values: Vec<f64>,
}

/// Parsed scenario. Defaults are the baseline scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub p_s_db: f64,
    pub p_r_max_db: f64,
    pub sigma_r_sq_db: f64,
    pub sigma_d_sq_db: f64,
    pub sigma_s_sq_db: f64,
    pub r_sd: f64,
    pub epsilon: f64,
    /// `None` means 1 for evaluation and "draw it" for averaging.
    pub h_sr_sq: Option<f64>,
    /// `None` means reciprocal (`h_rs_sq = h_sr_sq`).
    pub h_rs_sq: Option<f64>,
    pub scheme: SchemeChoice,
    pub q: Option<f64>,
    pub p_delta: Option<f64>,
    pub feasible: FeasibleRegion,
    pub sweep: Option<Sweep>,
    pub series: Option<Series>,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        Self {
            p_s_db: 10.0,
            p_r_max_db: 10.0,
            sigma_r_sq_db: 0.0,
            sigma_d_sq_db: 0.0,
            sigma_s_sq_db: 0.0,
            r_sd: 1.0,
            epsilon: 0.1,
            h_sr_sq: None,
            h_rs_sq: None,
            scheme: SchemeChoice::Rate,
            q: None,
            p_delta: None,
            feasible: FeasibleRegion::Lower,
            sweep: None,
            series: None,
        }
    }
}

#[derive(PartialEq)]
enum Section {
    Top,
    Sweep,
    Series,
}

#[derive(Default)]
struct SweepDraft {
    variable: Option<Variable>,
    start: Option<f64>,
    stop: Option<f64>,
    points: Option<usize>,
    spacing: Option<Spacing>,
    header_line: usize,
}

#[derive(Default)]
struct SeriesDraft {
    variable: Option<Variable>,
    values: Option<Vec<f64>>,
    header_line: usize,
}

fn number(line: usize, key: &str, value: &str) -> Result<f64, ParseError> {
    let v: f64 = value
        .parse()
        .map_err(|_| parse_err(line, format!("`{key}` expects a number, got `{value}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(line, format!("`{key}` must be finite")))
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut sc = ScenarioFile::default();
        let mut section = Section::Top;
        let mut seen: Vec<(String, usize)> = Vec::new();
        let mut sweep: Option<SweepDraft> = None;
        let mut series: Option<SeriesDraft> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if content.starts_with('[') {
                let name = content
                    .strip_prefix('[')
                    .and_then(|c| c.strip_suffix(']'))
                    .ok_or_else(|| parse_err(line, "malformed section header"))?
                    .trim();
                section = match name {
                    "sweep" if sweep.is_none() => {
                        sweep = Some(SweepDraft {
                            header_line: line,
                            ..Default::default()
                        });
                        Section::Sweep
                    }
                    "series" if series.is_none() => {
                        series = Some(SeriesDraft {
                            header_line: line,
                            ..Default::default()
                        });
                        Section::Series
                    }
                    "sweep" | "series" => {
                        return Err(parse_err(line, format!("duplicate [{name}] block")))
                    }
                    other => return Err(parse_err(line, format!("unknown section [{other}]"))),
                };
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                parse_err(line, format!("expected `key = value`, got `{content}`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let scoped = match section {
                Section::Top => key.to_string(),
                Section::Sweep => format!("sweep.{key}"),
                Section::Series => format!("series.{key}"),
            };
            if seen.iter().any(|(k, _)| *k == scoped) {
                return Err(parse_err(line, format!("duplicate key `{key}`")));
            }
            seen.push((scoped, line));

            match section {
                Section::Top => sc.set_top(line, key, value)?,
                Section::Sweep => {
                    let d = sweep.as_mut().expect("inside sweep block");
                    match key {
                        "variable" => {
                            d.variable =
                                Some(value.parse().map_err(|e: String| parse_err(line, e))?)
                        }
                        "start" | "start_db" => d.start = Some(number(line, key, value)?),
                        "stop" | "stop_db" => d.stop = Some(number(line, key, value)?),
                        "points" => {
                            let n: usize = value.parse().map_err(|_| {
                                parse_err(line, format!("`points` expects a count, got `{value}`"))
                            })?;
                            if n == 0 {
                                return Err(parse_err(line, "`points` must be at least 1"));
                            }
                            d.points = Some(n);
                        }
                        "spacing" => {
                            d.spacing = Some(match value {
                                "linear" => Spacing::Linear,
                                "log" => Spacing::Log,
                                _ => {
                                    return Err(parse_err(
                                        line,
                                        "`spacing` must be `linear` or `log`",
                                    ))
                                }
                            })
                        }
                        _ => return Err(parse_err(line, format!("unknown sweep key `{key}`"))),
                    }
                }
                Section::Series => {
                    let d = series.as_mut().expect("inside series block");
                    match key {
                        "variable" => {
                            d.variable =
                                Some(value.parse().map_err(|e: String| parse_err(line, e))?)
                        }
                        "values" => {
                            let vals = value
                                .split(',')
                                .map(|v| number(line, key, v.trim()))
                                .collect::<Result<Vec<_>, _>>()?;
                            d.values = Some(vals);
                        }
                        _ => return Err(parse_err(line, format!("unknown series key `{key}`"))),
                    }
                }
            }
        }

        if let Some(d) = sweep {
            let missing =
                |what: &str| parse_err(d.header_line, format!("[sweep] block is missing `{what}`"));
            let s = Sweep {
                variable: d.variable.ok_or_else(|| missing("variable"))?,
                start: d.start.ok_or_else(|| missing("start"))?,
                stop: d.stop.ok_or_else(|| missing("stop"))?,
                points: d.points.ok_or_else(|| missing("points"))?,
                spacing: d.spacing.unwrap_or(Spacing::Linear),
            };
            if s.spacing == Spacing::Log && !(s.start > 0.0 && s.stop > 0.0) {
                return Err(parse_err(
                    d.header_line,
                    "log spacing needs positive start and stop",
                ));
            }
            sc.sweep = Some(s);
        }
        if let Some(d) = series {
            let missing = |what: &str| {
                parse_err(d.header_line, format!("[series] block is missing `{what}`"))
            };
            sc.series = Some(Series {
                variable: d.variable.ok_or_else(|| missing("variable"))?,
                values: d.values.ok_or_else(|| missing("values"))?,
            });
        }
        let line_of = |key: &str| seen.iter().find(|(k, _)| k == key).map_or(0, |(_, l)| *l);
        sc.check_scheme_keys(line_of)?;
        Ok(sc)
    }

    fn set_top(&mut self, line: usize, key: &str, value: &str) -> Result<(), ParseError> {
        match key {
            "scheme" => {
                self.scheme = match value {
                    "rate" => SchemeChoice::Rate,
                    "power" => SchemeChoice::Power,
                    "both" => SchemeChoice::Both,
                    _ => {
                        return Err(parse_err(
                            line,
                            "`scheme` must be `rate`, `power` or `both`",
                        ))
                    }
                }
            }
            "feasible" => {
                self.feasible = match value {
                    "lower" => FeasibleRegion::Lower,
                    "all" => FeasibleRegion::All,
                    _ => return Err(parse_err(line, "`feasible` must be `lower` or `all`")),
                }
            }
            _ => {
                let var: Variable = key
                    .parse()
                    .map_err(|_| parse_err(line, format!("unknown key `{key}`")))?;
                self.set(var, number(line, key, value)?);
            }
        }
        Ok(())
    }

    fn check_scheme_keys(&self, line_of: impl Fn(&str) -> usize) -> Result<(), ParseError> {
        let stray = match self.scheme {
            SchemeChoice::Rate => self.p_delta.map(|_| "p_delta"),
            SchemeChoice::Power => self.q.map(|_| "q"),
            SchemeChoice::Both => None,
        };
        match stray {
            Some(key) => Err(parse_err(
                line_of(key),
                format!("`{key}` does not apply to scheme `{}`", self.scheme.key()),
            )),
            None => Ok(()),
        }
    }

    pub fn get(&self, var: Variable) -> Option<f64> {
        match var {
            Variable::PSDb => Some(self.p_s_db),
            Variable::PRMaxDb => Some(self.p_r_max_db),
            Variable::SigmaRSqDb => Some(self.sigma_r_sq_db),
            Variable::SigmaDSqDb => Some(self.sigma_d_sq_db),
            Variable::SigmaSSqDb => Some(self.sigma_s_sq_db),
            Variable::RSd => Some(self.r_sd),
            Variable::Epsilon => Some(self.epsilon),
            Variable::HSrSq => self.h_sr_sq,
            Variable::HRsSq => self.h_rs_sq,
            Variable::Q => self.q,
            Variable::PDelta => self.p_delta,
        }
    }

    pub fn set(&mut self, var: Variable, v: f64) {
        match var {
            Variable::PSDb => self.p_s_db = v,
            Variable::PRMaxDb => self.p_r_max_db = v,
            Variable::SigmaRSqDb => self.sigma_r_sq_db = v,
            Variable::SigmaDSqDb => self.sigma_d_sq_db = v,
            Variable::SigmaSSqDb => self.sigma_s_sq_db = v,
            Variable::RSd => self.r_sd = v,
            Variable::Epsilon => self.epsilon = v,
            Variable::HSrSq => self.h_sr_sq = Some(v),
            Variable::HRsSq => self.h_rs_sq = Some(v),
            Variable::Q => self.q = Some(v),
            Variable::PDelta => self.p_delta = Some(v),
        }
    }

    /// Copy with one variable overridden.
    pub fn with(&self, var: Variable, v: f64) -> Self {
        let mut c = self.clone();
        c.set(var, v);
        c
    }

    /// Linear system parameters.
    pub fn params(&self) -> SystemParams {
        SystemParams {
            p_s: db_to_linear(self.p_s_db),
            p_r_max: db_to_linear(self.p_r_max_db),
            sigma_r_sq: db_to_linear(self.sigma_r_sq_db),
            sigma_d_sq: db_to_linear(self.sigma_d_sq_db),
            sigma_s_sq: db_to_linear(self.sigma_s_sq_db),
            r_sd: self.r_sd,
            epsilon: self.epsilon,
        }
    }

    /// Schemes to run, with `q`/`p_delta` taken from the file (zero when
    /// absent; optimizer runs ignore them).
    pub fn schemes(&self) -> Vec<SchemeConfig> {
        let rate = SchemeConfig::RateControl {
            q: self.q.unwrap_or(0.0),
        };
        let power = SchemeConfig::PowerControl {
            p_delta: self.p_delta.unwrap_or(0.0),
        };
        match self.scheme {
            SchemeChoice::Rate => vec![rate],
            SchemeChoice::Power => vec![power],
            SchemeChoice::Both => vec![rate, power],
        }
    }

    /// Name of the first covert-parameter key a point evaluation needs but
    /// the file lacks.
    pub fn missing_covert_parameter(&self) -> Option<&'static str> {
        match self.scheme {
            SchemeChoice::Rate | SchemeChoice::Both if self.q.is_none() => Some("q"),
            SchemeChoice::Power | SchemeChoice::Both if self.p_delta.is_none() => Some("p_delta"),
            _ => None,
        }
    }

    /// Canonical text form; parsing it yields an equal value.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ScenarioFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for var in Variable::ALL {
            if let Some(v) = self.get(var) {
                writeln!(out, "{} = {v:?}", var.key())?;
            }
        }
        writeln!(out, "scheme = {}", self.scheme.key())?;
        writeln!(out, "feasible = {}", self.feasible.name())?;
        if let Some(s) = &self.sweep {
            writeln!(out, "\n[sweep]")?;
            writeln!(out, "variable = {}", s.variable.key())?;
            writeln!(out, "start = {:?}", s.start)?;
            writeln!(out, "stop = {:?}", s.stop)?;
            writeln!(out, "points = {}", s.points)?;
            let spacing = match s.spacing {
                Spacing::Linear => "linear",
                Spacing::Log => "log",
            };
            writeln!(out, "spacing = {spacing}")?;
        }
        if let Some(s) = &self.series {
            writeln!(out, "\n[series]")?;
            writeln!(out, "variable = {}", s.variable.key())?;
            let vals: Vec<String> = s.values.iter().map(|v| format!("{v:?}")).collect();
            writeln!(out, "values = {}", vals.join(", "))?;
        }
        f.write_str(&out)
    }
}
