//! Scenario files, the built-in experiments, and CSV output.
//!
//! A scenario is one contract on one technical and one market basis with a
//! list of named surrender models. Running it writes up to four tables into
//! `<out>/<name>/`:
//!
//! | file             | columns                                                   |
//! |------------------|-----------------------------------------------------------|
//! | `reserves.csv`   | `t, G, V_d, <one per model>, W, u_star`                   |
//! | `worst_case.csv` | `t, G, V_d, W, M, u_star`                                 |
//! | `sweep.csv`      | `theta, sup_error, error_at_0`                            |
//! | `mc.csv`         | `model, estimate, std_error, ode_value, z_score`          |
//!
//! Model columns follow the model list: fixed-intensity models as `V_<name>`
//! first, then reserve-dependent models as `V_<name>_model`. Models of the
//! zero family are not repeated, they coincide with `V_d`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behaviour::{solve_reserve_dependent, BehaviouralSolution};
use crate::contract::{
    g82_female, step_count, Basis, IntensityModel, MortalityCurve, PaymentPlan, PiecewiseConstant,
    RateCurve, ReserveGrid,
};
use crate::convergence::{theta_sweep, SweepFamily, SweepRow};
use crate::error::{Error, Result};
use crate::linear::{reserve_no_surrender, surrender_value};
use crate::monte_carlo::{simulate_reserve, Estimate, SimulationConfig, Strategy};
use crate::ode::DEFAULT_STEP;
use crate::worst_case::{worst_case_reserve, WorstCaseSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Grids,
    ThetaSweep,
    WorstCase,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MortalityPreset {
    G82Female,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MortalitySpec {
    Preset(MortalityPreset),
    Curve(MortalityCurve),
}

impl MortalitySpec {
    pub fn curve(&self) -> MortalityCurve {
        match self {
            MortalitySpec::Preset(MortalityPreset::G82Female) => g82_female(),
            MortalitySpec::Curve(c) => *c,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedModel {
    pub name: String,
    #[serde(flatten)]
    pub model: IntensityModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(flatten)]
    pub family: SweepFamily,
    pub thetas: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSpec {
    pub paths: u64,
    pub seed: u64,
    #[serde(default = "default_mc_step")]
    pub time_step: f64,
}

fn default_mc_step() -> f64 {
    1.0
}

fn default_step() -> f64 {
    DEFAULT_STEP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub plan: PaymentPlan,
    pub technical_rate: RateCurve,
    pub market_rate: RateCurve,
    pub mortality: MortalitySpec,
    pub models: Vec<NamedModel>,
    pub outputs: Vec<Output>,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarloSpec>,
}

fn on_grid(t: f64, step: f64) -> bool {
    let x = t / step;
    (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0)
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        ScenarioSpec::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn technical_basis(&self) -> Basis {
        Basis::new(self.technical_rate.clone(), self.mortality.curve())
    }

    pub fn market_basis(&self) -> Basis {
        Basis::new(self.market_rate.clone(), self.mortality.curve())
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }

    /// Checks every field and reports all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            problems.push(format!(
                "name: {:?} must be non-empty ASCII letters, digits, '_' or '-'",
                self.name
            ));
        }
        let step_ok = self.step > 0.0 && self.step.is_finite();
        if !step_ok {
            problems.push(format!("step: must be positive, got {}", self.step));
        }
        if let Err(e) = self.plan.validate() {
            problems.push(format!("plan: {e}"));
        } else if step_ok {
            if let Err(e) = step_count(0.0, self.plan.horizon, self.step) {
                problems.push(format!("plan.horizon: {e}"));
            }
        }
        if step_ok {
            let curves: [(&str, &[f64]); 4] = [
                ("technical_rate", self.technical_rate.breakpoints()),
                ("market_rate", self.market_rate.breakpoints()),
                (
                    "plan.premium_intensity",
                    self.plan.premium_intensity.breakpoints(),
                ),
                ("plan.death_benefit", self.plan.death_benefit.breakpoints()),
            ];
            for (field, points) in curves {
                for &b in points.iter().filter(|&&b| !on_grid(b, self.step)) {
                    problems.push(format!(
                        "{field}: breakpoint {b} is not a multiple of step {}",
                        self.step
                    ));
                }
            }
        }
        if self.plan.horizon > 0.0 {
            if let Err(e) = self.mortality.curve().validate_on(self.plan.horizon) {
                problems.push(format!("mortality: {e}"));
            }
        }
        let mut names = BTreeSet::new();
        for m in &self.models {
            if m.name.is_empty()
                || !m
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                problems.push(format!(
                    "models: name {:?} must be ASCII letters, digits or '_'",
                    m.name
                ));
            }
            if !names.insert(m.name.as_str()) {
                problems.push(format!("models: duplicate name {:?}", m.name));
            }
            if let Err(e) = m.model.validate() {
                problems.push(format!("models.{}: {e}", m.name));
            }
        }
        if self.outputs.is_empty() {
            problems.push("outputs: at least one output must be enabled".into());
        }
        if self.wants(Output::ThetaSweep) {
            match &self.sweep {
                None => problems.push("sweep: required when theta_sweep output is enabled".into()),
                Some(s) => {
                    if s.thetas.len() < 3 {
                        problems.push(format!(
                            "sweep.thetas: need at least 3 values, got {}",
                            s.thetas.len()
                        ));
                    }
                    if s.thetas.iter().any(|t| !(t.is_finite() && *t >= 0.0))
                        || s.thetas.windows(2).any(|w| !(w[1] > w[0]))
                    {
                        problems.push(
                            "sweep.thetas: must be finite, non-negative and strictly ascending"
                                .into(),
                        );
                    }
                }
            }
        }
        if self.wants(Output::MonteCarlo) {
            match &self.monte_carlo {
                None => {
                    problems.push("monte_carlo: required when monte_carlo output is enabled".into())
                }
                Some(mc) => {
                    if mc.paths == 0 {
                        problems.push("monte_carlo.paths: must be at least 1".into());
                    }
                    if !(mc.time_step > 0.0 && mc.time_step.is_finite()) {
                        problems.push(format!(
                            "monte_carlo.time_step: must be positive, got {}",
                            mc.time_step
                        ));
                    }
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(problems))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelResult {
    pub name: String,
    /// Column header in `reserves.csv`, `None` for zero-family models.
    pub column: Option<String>,
    pub solution: BehaviouralSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McRow {
    pub model: String,
    pub estimate: Estimate,
    pub ode_value: f64,
}

/// Everything a scenario computes, before it is written out.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub surrender_value: ReserveGrid,
    pub no_surrender: ReserveGrid,
    pub models: Vec<ModelResult>,
    pub worst_case: WorstCaseSolution,
    pub sweep: Option<Vec<SweepRow>>,
    pub monte_carlo: Option<Vec<McRow>>,
}

impl ScenarioResult {
    pub fn model(&self, name: &str) -> Option<&ModelResult> {
        self.models.iter().find(|m| m.name == name)
    }

    /// Columns of `reserves.csv` after `t`, in order.
    pub fn reserve_columns(&self) -> Vec<(String, &ReserveGrid)> {
        let mut cols = vec![
            ("G".to_string(), &self.surrender_value),
            ("V_d".to_string(), &self.no_surrender),
        ];
        let fixed = self
            .models
            .iter()
            .filter(|m| !m.solution.model.is_reserve_dependent());
        let dependent = self
            .models
            .iter()
            .filter(|m| m.solution.model.is_reserve_dependent());
        for m in fixed.chain(dependent) {
            if let Some(c) = &m.column {
                cols.push((c.clone(), &m.solution.reserve));
            }
        }
        cols.push(("W".to_string(), &self.worst_case.worst_reserve));
        cols.push(("u_star".to_string(), &self.worst_case.latest_optimal));
        cols
    }
}

fn column_name(m: &NamedModel) -> Option<String> {
    match m.model {
        IntensityModel::Zero => None,
        IntensityModel::Constant { .. } => Some(format!("V_{}", m.name)),
        _ => Some(format!("V_{}_model", m.name)),
    }
}

/// Solves every reserve the scenario asks for.
pub fn compute(spec: &ScenarioSpec) -> Result<ScenarioResult> {
    spec.validate()?;
    let step = spec.step;
    let plan = &spec.plan;
    let technical = spec.technical_basis();
    let market = spec.market_basis();

    let g = surrender_value(plan, &technical, step).map_err(|e| e.in_module("reserves_linear"))?;
    let v =
        reserve_no_surrender(plan, &market, step).map_err(|e| e.in_module("reserves_linear"))?;
    let worst = worst_case_reserve(&market, &g, &v).map_err(|e| e.in_module("worst_case"))?;

    let models = spec
        .models
        .par_iter()
        .map(|m| {
            let solution = solve_reserve_dependent(plan, &market, &g, m.model, step)
                .map_err(|e| e.in_module("surrender_behaviour"))?;
            Ok(ModelResult {
                name: m.name.clone(),
                column: column_name(m),
                solution,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let sweep = match (&spec.sweep, spec.wants(Output::ThetaSweep)) {
        (Some(s), true) => Some(
            theta_sweep(plan, &market, &g, &s.family, &s.thetas, step)
                .map_err(|e| e.in_module("convergence_lab"))?,
        ),
        _ => None,
    };

    let monte_carlo = match (&spec.monte_carlo, spec.wants(Output::MonteCarlo)) {
        (Some(mc), true) => {
            let config = SimulationConfig {
                paths: mc.paths,
                seed: mc.seed,
                time_step: mc.time_step,
            };
            let mut rows = models
                .iter()
                .map(|m| {
                    let estimate = simulate_reserve(
                        plan,
                        &market,
                        &g,
                        Strategy::Intensity(&m.solution.realized_intensity),
                        &config,
                    )?;
                    Ok(McRow {
                        model: m.name.clone(),
                        estimate,
                        ode_value: m.solution.reserve.first(),
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.in_module("validation_oracle"))?;
            let stop = worst.latest_optimal.first();
            let estimate = simulate_reserve(plan, &market, &g, Strategy::StopAt(stop), &config)
                .map_err(|e| e.in_module("validation_oracle"))?;
            rows.push(McRow {
                model: "worst_case".into(),
                estimate,
                ode_value: worst.worst_reserve.first(),
            });
            Some(rows)
        }
        _ => None,
    };

    Ok(ScenarioResult {
        surrender_value: g,
        no_surrender: v,
        models,
        worst_case: worst,
        sweep,
        monte_carlo,
    })
}

/// Formats with 10 significant digits in plain decimal notation.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.9e}").parse().unwrap_or(x);
    let magnitude = rounded.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    let s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn grid_table(headers: &[String], columns: &[&ReserveGrid]) -> String {
    let mut out = String::new();
    out.push_str("t,");
    out.push_str(&headers.join(","));
    out.push('\n');
    let grid = columns[0];
    for i in 0..grid.len() {
        out.push_str(&format_number(grid.time(i)));
        for c in columns {
            out.push(',');
            out.push_str(&format_number(c.values[i]));
        }
        out.push('\n');
    }
    out
}

pub fn reserves_csv(result: &ScenarioResult) -> String {
    let cols = result.reserve_columns();
    let headers: Vec<String> = cols.iter().map(|(h, _)| h.clone()).collect();
    let grids: Vec<&ReserveGrid> = cols.iter().map(|(_, g)| *g).collect();
    grid_table(&headers, &grids)
}

pub fn worst_case_csv(result: &ScenarioResult) -> String {
    let w = &result.worst_case;
    let headers = ["G", "V_d", "W", "M", "u_star"].map(String::from);
    grid_table(
        &headers,
        &[
            &result.surrender_value,
            &result.no_surrender,
            &w.worst_reserve,
            &w.gain_envelope,
            &w.latest_optimal,
        ],
    )
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("theta,sup_error,error_at_0\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_number(r.theta),
            format_number(r.sup_error),
            format_number(r.error_at_0)
        );
    }
    out
}

pub fn mc_csv(rows: &[McRow]) -> String {
    let mut out = String::from("model,estimate,std_error,ode_value,z_score\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.model,
            format_number(r.estimate.estimate),
            format_number(r.estimate.standard_error),
            format_number(r.ode_value),
            format_number(r.estimate.z_score(r.ode_value))
        );
    }
    out
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs a scenario and writes its tables into `out_dir/<name>/`.
pub fn run(spec: &ScenarioSpec, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let result = compute(spec)?;
    write_outputs(spec, &result, out_dir)
}

/// Runs several scenarios concurrently. Results come back in input order;
/// one failing scenario does not stop the others.
pub fn run_batch(specs: &[ScenarioSpec], out_dir: &Path) -> Result<Vec<Result<Vec<PathBuf>>>> {
    let mut names = BTreeSet::new();
    for s in specs {
        if !names.insert(s.name.as_str()) {
            return Err(Error::config(format!(
                "scenario name {:?} appears twice in the batch",
                s.name
            )));
        }
    }
    Ok(specs.par_iter().map(|s| run(s, out_dir)).collect())
}

pub fn write_outputs(
    spec: &ScenarioSpec,
    result: &ScenarioResult,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let dir = out_dir.join(&spec.name);
    fs::create_dir_all(&dir)?;
    let mut tables = Vec::new();
    if spec.wants(Output::Grids) {
        tables.push(("reserves.csv", reserves_csv(result)));
    }
    if spec.wants(Output::WorstCase) {
        tables.push(("worst_case.csv", worst_case_csv(result)));
    }
    if let Some(rows) = &result.sweep {
        tables.push(("sweep.csv", sweep_csv(rows)));
    }
    if let Some(rows) = &result.monte_carlo {
        tables.push(("mc.csv", mc_csv(rows)));
    }
    let mut written = Vec::new();
    for (file, contents) in tables {
        let path = dir.join(file);
        write_atomic(&path, &contents)?;
        written.push(path);
    }
    Ok(written)
}

/// The five surrender models compared in the built-in experiments.
pub fn builtin_models() -> Vec<(NamedModel, &'static str)> {
    let named = |name: &str, model| NamedModel {
        name: name.into(),
        model,
    };
    vec![
        (
            named(
                "a",
                IntensityModel::Exponential {
                    psi: 0.05,
                    theta: 0.000003,
                },
            ),
            "exponential: 0.05·exp(0.000003·(G − V))",
        ),
        (
            named("b", IntensityModel::Indicator { theta: 0.05 }),
            "indicator: 0.05·1(G − V > 0)",
        ),
        (
            named("c", IntensityModel::Constant { level: 0.05 }),
            "constant: 0.05",
        ),
        (named("d", IntensityModel::Zero), "zero: no surrender"),
        (
            named("e", IntensityModel::Indicator { theta: 5.0 }),
            "indicator: 5·1(G − V > 0)",
        ),
    ]
}

const BUILTINS: [(&str, &str); 4] = [
    ("example1", "market rate 0.12 above the technical 0.05; immediate surrender is always optimal"),
    ("example2", "market rate 0.02 below the technical 0.05; surrender is never optimal"),
    ("example3", "market rate 0.10 until t = 20, then 0.04; rate crosses the technical 0.05 downwards at t = 20"),
    ("example4", "market rate 0.01 until t = 20, then 0.065; plan to surrender at t = 20"),
];

/// Names and descriptions of the built-in scenarios and models.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub examples: Vec<(String, String)>,
    pub models: Vec<(String, IntensityModel, String)>,
}

pub fn list_builtins() -> Catalog {
    Catalog {
        examples: BUILTINS
            .iter()
            .map(|(n, d)| (n.to_string(), d.to_string()))
            .collect(),
        models: builtin_models()
            .into_iter()
            .map(|(m, d)| (m.name, m.model, d.to_string()))
            .collect(),
    }
}

pub fn builtin(name: &str) -> Option<ScenarioSpec> {
    let (_, description) = BUILTINS.iter().find(|(n, _)| *n == name)?;
    let market_rate = match name {
        "example1" => RateCurve::flat(0.12),
        "example2" => RateCurve::flat(0.02),
        "example3" => RateCurve::new(vec![0.0, 20.0], vec![0.10, 0.04]),
        _ => RateCurve::new(vec![0.0, 20.0], vec![0.01, 0.065]),
    }
    .expect("built-in rates are valid");
    let mut outputs = vec![Output::Grids, Output::WorstCase];
    if name == "example4" {
        outputs.push(Output::ThetaSweep);
    }
    Some(ScenarioSpec {
        name: name.to_string(),
        description: description.to_string(),
        plan: PaymentPlan {
            premium_intensity: PiecewiseConstant::constant(7_000.0).expect("valid"),
            death_benefit: PiecewiseConstant::constant(1_000_000.0).expect("valid"),
            terminal_benefit: 2_000_000.0,
            horizon: 30.0,
        },
        technical_rate: RateCurve::flat(0.05).expect("valid"),
        market_rate,
        mortality: MortalitySpec::Preset(MortalityPreset::G82Female),
        models: builtin_models().into_iter().map(|(m, _)| m).collect(),
        outputs,
        step: DEFAULT_STEP,
        sweep: Some(SweepSpec {
            family: SweepFamily::Indicator,
            thetas: vec![0.5, 1.0, 2.0, 5.0, 10.0],
        }),
        monte_carlo: None,
    })
}
