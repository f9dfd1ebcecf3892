//! Evaluation, sweep, optimization, verification and averaging runs over a
//! scenario file. Every run produces a [`Table`]; sweep points are computed
//! in parallel and kept in sweep order.

use std::path::Path;

use rayon::prelude::*;

use super::plot::PlotSpec;
use super::scenario_file::{ParseError, ScenarioFile, Variable};
use super::table::{Cell, Table};
use crate::covert_rate::effective_rate;
use crate::detection::{min_detection_error, DetectionReport};
use crate::error::CovertError;
use crate::montecarlo::rng::{TrialStream, SOURCE_CHANNEL_STREAM};
use crate::montecarlo::{simulate_detection, EmpiricalReport, SimConfig};
use crate::optimizer::maximize;
use crate::scenario::{Link, SchemeConfig};

/// Monte Carlo agreement threshold in standard errors.
pub const SIGMA_LIMIT: f64 = 3.0;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Model(#[from] CovertError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub trials: u64,
    pub seed: u64,
    pub verify: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 1,
            verify: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub table: Table,
    pub warnings: Vec<String>,
    /// Monte Carlo checks outside [`SIGMA_LIMIT`] standard errors.
    pub failures: usize,
    pub plot: PlotSpec,
}

pub fn load(path: &Path) -> Result<ScenarioFile, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    ScenarioFile::parse(&text).map_err(|source| CliError::Parse {
        path: shown,
        source,
    })
}

/// One evaluation point: the scenario after overrides plus the values of the
/// series and sweep variables that produced it.
struct Point {
    sc: ScenarioFile,
    labels: Vec<f64>,
}

impl Point {
    fn describe(&self, keys: &[String]) -> String {
        if keys.is_empty() {
            return "scenario".to_string();
        }
        keys.iter()
            .zip(&self.labels)
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn expand(sc: &ScenarioFile, use_sweep: bool) -> (Vec<String>, Vec<Point>) {
    let mut keys = Vec::new();
    let series: Vec<Option<(Variable, f64)>> = match &sc.series {
        Some(s) => {
            keys.push(s.variable.key().to_string());
            s.values.iter().map(|&v| Some((s.variable, v))).collect()
        }
        None => vec![None],
    };
    let sweep: Vec<Option<(Variable, f64)>> = match (&sc.sweep, use_sweep) {
        (Some(s), true) => {
            keys.push(s.variable.key().to_string());
            s.values()
                .into_iter()
                .map(|v| Some((s.variable, v)))
                .collect()
        }
        _ => vec![None],
    };
    let mut points = Vec::new();
    for outer in &series {
        for inner in &sweep {
            let mut p = sc.clone();
            let mut labels = Vec::new();
            for (var, v) in [outer, inner].into_iter().flatten() {
                p.set(*var, *v);
                labels.push(*v);
            }
            points.push(Point { sc: p, labels });
        }
    }
    (keys, points)
}

fn link_for(sc: &ScenarioFile, h_sr_sq: f64) -> Result<Link, CovertError> {
    Link::new(sc.params(), h_sr_sq, sc.h_rs_sq.unwrap_or(h_sr_sq))
}

/// Errors that describe an operating point with no forwarding or no covert
/// opportunity rather than bad input. They turn into zero rows.
fn is_soft(e: &CovertError) -> bool {
    matches!(
        e,
        CovertError::InfeasibleRate { .. }
            | CovertError::PowerBudgetExceeded { .. }
            | CovertError::NoFeasiblePoint
            | CovertError::DegenerateSample { .. }
    )
}

/// Rows, warnings and Monte Carlo failures from one or more points.
struct RowSet {
    rows: Vec<Vec<Cell>>,
    warnings: Vec<String>,
    failures: usize,
}

fn run_points(
    keys: &[String],
    points: &[Point],
    per_point: impl Fn(&Point) -> Result<RowSet, CovertError> + Sync,
) -> Result<RowSet, CliError> {
    let sets: Vec<RowSet> = points
        .par_iter()
        .map(&per_point)
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    let mut failures = 0;
    for (p, set) in points.iter().zip(sets) {
        for mut row in set.rows {
            let mut full: Vec<Cell> = p.labels.iter().map(|&v| Cell::Num(v)).collect();
            full.append(&mut row);
            rows.push(full);
        }
        warnings.extend(
            set.warnings
                .into_iter()
                .map(|w| format!("{}: {w}", p.describe(keys))),
        );
        failures += set.failures;
    }
    Ok(RowSet {
        rows,
        warnings,
        failures,
    })
}

fn header(keys: &[String], rest: &[&str]) -> Vec<String> {
    keys.iter()
        .cloned()
        .chain(rest.iter().map(|s| s.to_string()))
        .collect()
}

fn plot_spec(title: &str, keys: &[String], y: &[&str], log_y: bool) -> PlotSpec {
    let x = keys.last().cloned().unwrap_or_else(|| "scheme".to_string());
    let mut group_by: Vec<String> = keys.iter().rev().skip(1).rev().cloned().collect();
    group_by.push("scheme".to_string());
    PlotSpec {
        title: title.to_string(),
        x,
        y: y.iter().map(|s| s.to_string()).collect(),
        group_by,
        log_y,
    }
}

fn scheme_param_cells(scheme: &SchemeConfig, value: Option<f64>) -> [Cell; 2] {
    match scheme {
        SchemeConfig::RateControl { .. } => [value.into(), Cell::Empty],
        SchemeConfig::PowerControl { .. } => [Cell::Empty, value.into()],
    }
}

const DETECTION_COLUMNS: [&str; 12] = [
    "scheme", "q", "p_delta", "xi_star", "tau_star", "alpha", "beta", "omega", "p_b", "p_c", "r_c",
    "warning",
];
const MC_COLUMNS: [&str; 13] = [
    "mc_alpha",
    "mc_alpha_se",
    "mc_beta",
    "mc_beta_se",
    "mc_xi",
    "mc_xi_se",
    "mc_p_b",
    "mc_p_b_se",
    "mc_p_c",
    "mc_p_c_se",
    "mc_r_c",
    "mc_r_c_se",
    "mc_check",
];

struct ClosedForm {
    det: DetectionReport,
    p_b: f64,
    p_c: f64,
    r_c: f64,
}

fn closed_form(link: &Link, scheme: &SchemeConfig) -> Result<ClosedForm, CovertError> {
    let det = min_detection_error(link, scheme)?;
    let probs = link.probs(scheme)?;
    Ok(ClosedForm {
        det,
        p_b: probs.p_b,
        p_c: probs.p_c,
        r_c: effective_rate(link, scheme)?.r_c,
    })
}

/// Each `(estimate, std_err, closed_form)` within the sigma limit.
fn checks_pass(mc: &EmpiricalReport, cf: &ClosedForm) -> bool {
    let se = &mc.std_errs;
    [
        (mc.alpha_hat, se.alpha, cf.det.alpha),
        (mc.beta_hat, se.beta, cf.det.beta),
        (mc.xi_hat, se.xi, cf.det.xi_star),
        (mc.p_b_hat, se.p_b, cf.p_b),
        (mc.p_c_hat, se.p_c, cf.p_c),
        (mc.r_c_hat, se.r_c, cf.r_c),
    ]
    .iter()
    .all(|&(est, se, want)| (est - want).abs() <= SIGMA_LIMIT * se + 1e-12)
}

fn detection_rows(p: &Point, opts: &RunOptions) -> Result<RowSet, CovertError> {
    let mut set = RowSet {
        rows: Vec::new(),
        warnings: Vec::new(),
        failures: 0,
    };
    let h_sr = p.sc.h_sr_sq.unwrap_or(1.0);
    for scheme in p.sc.schemes() {
        let mut row = vec![Cell::from(scheme.name())];
        row.extend(scheme_param_cells(&scheme, Some(scheme.covert_parameter())));
        let cf =
            link_for(&p.sc, h_sr).and_then(|link| closed_form(&link, &scheme).map(|cf| (link, cf)));
        let (link, cf) = match cf {
            Ok(v) => v,
            Err(e) if is_soft(&e) => {
                set.warnings
                    .push(format!("{}: {e}; reporting zero", scheme.name()));
                row.extend([
                    Cell::Num(0.0),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                ]);
                row.extend([
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Num(0.0),
                    Cell::from(warning_tag(&e)),
                ]);
                if opts.verify {
                    row.extend(std::iter::repeat_n(Cell::Empty, MC_COLUMNS.len() - 1));
                    row.push("skip".into());
                }
                set.rows.push(row);
                continue;
            }
            Err(e) => return Err(e),
        };
        let d = &cf.det;
        row.extend(
            [
                d.xi_star, d.tau_star, d.alpha, d.beta, d.omega, cf.p_b, cf.p_c, cf.r_c,
            ]
            .map(Cell::Num),
        );
        row.push(Cell::Empty);
        if opts.verify {
            let sim = SimConfig::new(opts.trials, opts.seed, scheme).with_tau(d.tau_star);
            match simulate_detection(&link, &sim) {
                Ok(mc) => {
                    let se = mc.std_errs;
                    row.extend(
                        [
                            mc.alpha_hat,
                            se.alpha,
                            mc.beta_hat,
                            se.beta,
                            mc.xi_hat,
                            se.xi,
                            mc.p_b_hat,
                            se.p_b,
                            mc.p_c_hat,
                            se.p_c,
                            mc.r_c_hat,
                            se.r_c,
                        ]
                        .map(Cell::Num),
                    );
                    let ok = checks_pass(&mc, &cf);
                    if !ok {
                        set.failures += 1;
                        set.warnings.push(format!(
                            "{}: Monte Carlo disagrees beyond 3 sigma",
                            scheme.name()
                        ));
                    }
                    row.push(if ok { "pass" } else { "fail" }.into());
                }
                Err(e) if is_soft(&e) => {
                    set.warnings
                        .push(format!("{}: {e}; Monte Carlo skipped", scheme.name()));
                    row.extend(std::iter::repeat_n(Cell::Empty, MC_COLUMNS.len() - 1));
                    row.push("skip".into());
                }
                Err(e) => return Err(e),
            }
        }
        set.rows.push(row);
    }
    Ok(set)
}

fn warning_tag(e: &CovertError) -> &'static str {
    match e {
        CovertError::InfeasibleRate { .. } => "infeasible_rate",
        CovertError::PowerBudgetExceeded { .. } => "power_budget",
        CovertError::NoFeasiblePoint => "no_feasible_point",
        CovertError::DegenerateSample { .. } => "degenerate_sample",
        _ => "error",
    }
}

fn require_covert_parameters(points: &[Point]) -> Result<(), CliError> {
    match points.iter().find_map(|p| p.sc.missing_covert_parameter()) {
        Some(key) => Err(CliError::Usage(format!(
            "scenario needs `{key}` for this command (or sweep over it)"
        ))),
        None => Ok(()),
    }
}

fn detection_run(
    sc: &ScenarioFile,
    opts: &RunOptions,
    use_sweep: bool,
    title: &str,
) -> Result<RunOutput, CliError> {
    let (keys, points) = expand(sc, use_sweep);
    require_covert_parameters(&points)?;
    let mut columns: Vec<&str> = DETECTION_COLUMNS.to_vec();
    if opts.verify {
        columns.extend(MC_COLUMNS);
    }
    let RowSet {
        rows,
        warnings,
        failures,
    } = run_points(&keys, &points, |p| detection_rows(p, opts))?;
    let mut table = Table::new(header(&keys, &columns));
    table.rows = rows;
    Ok(RunOutput {
        table,
        warnings,
        failures,
        plot: plot_spec(title, &keys, &["xi_star", "r_c"], false),
    })
}

/// Single evaluation at the scenario's base values; sweep and series blocks
/// are ignored.
pub fn eval(sc: &ScenarioFile, opts: &RunOptions) -> Result<RunOutput, CliError> {
    let base = ScenarioFile {
        sweep: None,
        series: None,
        ..sc.clone()
    };
    detection_run(&base, opts, false, "evaluation")
}

/// Detection and rate columns at every sweep point.
pub fn sweep(sc: &ScenarioFile, opts: &RunOptions) -> Result<RunOutput, CliError> {
    if sc.sweep.is_none() {
        return Err(CliError::Usage("scenario has no [sweep] block".into()));
    }
    detection_run(sc, opts, true, "minimum detection error")
}

/// Sweep (or single evaluation when there is no sweep block) with Monte
/// Carlo columns.
pub fn verify(sc: &ScenarioFile, opts: &RunOptions) -> Result<RunOutput, CliError> {
    let opts = RunOptions {
        verify: true,
        ..*opts
    };
    if sc.sweep.is_some() {
        sweep(sc, &opts)
    } else {
        eval(sc, &opts)
    }
}

/// Sweep if the file has one, single evaluation otherwise.
pub fn run_scenario(path: &Path, opts: &RunOptions) -> Result<RunOutput, CliError> {
    let sc = load(path)?;
    if sc.sweep.is_some() {
        sweep(&sc, opts)
    } else {
        eval(&sc, opts)
    }
}

const OPTIMIZE_COLUMNS: [&str; 10] = [
    "scheme",
    "q_star",
    "p_delta_star",
    "r_c_star",
    "xi_star",
    "tau_star",
    "omega",
    "slack",
    "feasible_region",
    "warning",
];

fn optimize_rows(p: &Point) -> Result<RowSet, CovertError> {
    let mut set = RowSet {
        rows: Vec::new(),
        warnings: Vec::new(),
        failures: 0,
    };
    let h_sr = p.sc.h_sr_sq.unwrap_or(1.0);
    let region = p.sc.feasible.name();
    for scheme in p.sc.schemes() {
        let mut row = vec![Cell::from(scheme.name())];
        match link_for(&p.sc, h_sr).and_then(|link| maximize(&link, &scheme, p.sc.feasible)) {
            Ok(opt) => {
                row.extend(scheme_param_cells(&scheme, Some(opt.parameter())));
                let d = opt.detection;
                row.extend([opt.r_c, d.xi_star, d.tau_star, d.omega, opt.slack].map(Cell::Num));
                row.extend([Cell::from(region), Cell::Empty]);
            }
            Err(e) if is_soft(&e) => {
                set.warnings
                    .push(format!("{}: {e}; reporting zero", scheme.name()));
                let param = matches!(e, CovertError::NoFeasiblePoint).then_some(0.0);
                row.extend(scheme_param_cells(&scheme, param));
                let xi = matches!(e, CovertError::InfeasibleRate { .. }).then_some(0.0);
                row.extend([
                    Cell::Num(0.0),
                    xi.into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                ]);
                row.extend([Cell::from(region), Cell::from(warning_tag(&e))]);
            }
            Err(e) => return Err(e),
        }
        set.rows.push(row);
    }
    Ok(set)
}

/// Constrained optimum per sweep point (or once, without a sweep block).
pub fn optimize(sc: &ScenarioFile) -> Result<RunOutput, CliError> {
    let (keys, points) = expand(sc, true);
    let RowSet {
        rows,
        warnings,
        failures,
    } = run_points(&keys, &points, optimize_rows)?;
    let mut table = Table::new(header(&keys, &OPTIMIZE_COLUMNS));
    table.rows = rows;
    Ok(RunOutput {
        table,
        warnings,
        failures,
        plot: plot_spec(
            "maximum effective covert rate",
            &keys,
            &["r_c_star", "xi_star"],
            false,
        ),
    })
}

const AVERAGE_COLUMNS: [&str; 5] = [
    "scheme",
    "r_c_star_mean",
    "r_c_star_se",
    "draws",
    "forwarding_draws",
];

/// `n` unit-mean exponential source-relay gains, shared by every sweep point.
pub fn source_channel_draws(n: u64, seed: u64) -> Vec<f64> {
    let mut stream = TrialStream::new(seed, SOURCE_CHANNEL_STREAM, 0);
    (0..n).map(|_| stream.next_exponential()).collect()
}

fn average_rows(p: &Point, draws: &[f64]) -> Result<RowSet, CovertError> {
    let mut rows = Vec::new();
    for scheme in p.sc.schemes() {
        let rates: Vec<Option<f64>> = draws
            .par_iter()
            .map(|&h| {
                match link_for(&p.sc, h).and_then(|link| maximize(&link, &scheme, p.sc.feasible)) {
                    Ok(opt) => Ok(Some(opt.r_c)),
                    Err(CovertError::InfeasibleRate { .. }) => Ok(None),
                    Err(e) if is_soft(&e) => Ok(Some(0.0)),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_, _>>()?;
        let n = rates.len() as f64;
        let forwarding = rates.iter().filter(|r| r.is_some()).count() as u64;
        let values: Vec<f64> = rates.iter().map(|r| r.unwrap_or(0.0)).collect();
        let mean = values.iter().sum::<f64>() / n;
        let se = (rates.len() > 1).then(|| {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        });
        rows.push(vec![
            Cell::from(scheme.name()),
            Cell::Num(mean),
            se.into(),
            Cell::Count(rates.len() as u64),
            Cell::Count(forwarding),
        ]);
    }
    Ok(RowSet {
        rows,
        warnings: Vec::new(),
        failures: 0,
    })
}

/// Mean of the constrained optimum over `n_draws` Rayleigh source-relay
/// gains. Draws where forwarding at `r_sd` is impossible count as zero.
pub fn average(sc: &ScenarioFile, n_draws: u64, seed: u64) -> Result<RunOutput, CliError> {
    if sc.h_sr_sq.is_some() {
        return Err(CliError::Usage(
            "averaging draws h_sr_sq; remove it from the scenario".into(),
        ));
    }
    if [
        sc.sweep.map(|s| s.variable),
        sc.series.as_ref().map(|s| s.variable),
    ]
    .contains(&Some(Variable::HSrSq))
    {
        return Err(CliError::Usage("averaging cannot sweep h_sr_sq".into()));
    }
    if n_draws == 0 {
        return Err(CliError::Usage(
            "need at least one source-channel draw".into(),
        ));
    }
    let draws = source_channel_draws(n_draws, seed);
    let (keys, points) = expand(sc, true);
    let RowSet {
        rows,
        warnings,
        failures,
    } = run_points(&keys, &points, |p| average_rows(p, &draws))?;
    let mut table = Table::new(header(&keys, &AVERAGE_COLUMNS));
    table.rows = rows;
    Ok(RunOutput {
        table,
        warnings,
        failures,
        plot: plot_spec(
            "averaged maximum effective covert rate",
            &keys,
            &["r_c_star_mean"],
            false,
        ),
    })
}

pub fn average_over_source_channel(
    path: &Path,
    n_draws: u64,
    seed: u64,
) -> Result<RunOutput, CliError> {
    average(&load(path)?, n_draws, seed)
}
