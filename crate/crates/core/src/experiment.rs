//! End-to-end discrimination runs, theta sweeps and resource sweeps.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::causal::{
    build_alternate_oracle, build_null_oracle, build_u_in, build_u_per, count_controlled_bell,
    ResourceCount,
};
use crate::error::{Error, Result};
use crate::error_model::{
    classify_theta, p_err_limiting, p_err_practical, ErrorModelParams, ThetaClass,
    DEFAULT_THETA_TOL,
};
use crate::layout::RegisterLayout;
use crate::metrics::{self, choi, ChoiMatrix, MAX_CHOI_CHANNEL_QUBITS};
use crate::scalar::Complex;
use crate::state::StateVector;
use crate::strategy::{PermutationStrategy, StrategyKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Measure {
    Trace,
    Bures,
    Hs,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Trace, Measure::Bures, Measure::Hs];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Trace => "trace",
            Measure::Bures => "bures",
            Measure::Hs => "hs",
        }
    }

    pub fn evaluate(self, a: &ChoiMatrix<f64>, b: &ChoiMatrix<f64>) -> Result<f64> {
        match self {
            Measure::Trace => metrics::trace_distance(a, b),
            Measure::Bures => metrics::bures_distance(a, b),
            Measure::Hs => metrics::hs_distance(a, b),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "trace" => Ok(Measure::Trace),
            "bures" => Ok(Measure::Bures),
            "hs" => Ok(Measure::Hs),
            other => Err(Error::InvalidParameter(format!("unknown distance measure `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub k: usize,
    pub d: usize,
    pub r: usize,
    pub theta_start: f64,
    pub theta_end: f64,
    pub theta_steps: usize,
    pub measures: Vec<Measure>,
    /// Only consulted by [`StrategyKind::Random`].
    pub seed: u64,
    pub strategy: StrategyKind,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k: 4,
            d: 1,
            r: 1,
            theta_start: 0.0,
            theta_end: 4.0 * PI,
            theta_steps: 81,
            measures: Measure::ALL.to_vec(),
            seed: 0,
            strategy: StrategyKind::Cyclic,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<RegisterLayout> {
        if self.theta_steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "theta_steps must be >= 2, got {}",
                self.theta_steps
            )));
        }
        let finite = self.theta_end.is_finite() && self.theta_start.is_finite();
        if !finite || self.theta_end <= self.theta_start {
            return Err(Error::InvalidParameter(format!(
                "need finite theta_end > theta_start, got [{}, {}]",
                self.theta_start, self.theta_end
            )));
        }
        let layout = RegisterLayout::new(self.k, self.d)?;
        if !self.measures.is_empty() && layout.oracle_qubits() > MAX_CHOI_CHANNEL_QUBITS {
            return Err(Error::Capacity(format!(
                "process distances need a Choi state on {} channel qubits, cap is {MAX_CHOI_CHANNEL_QUBITS}",
                layout.oracle_qubits()
            )));
        }
        Ok(layout)
    }

    /// `theta_steps` equally spaced angles, both ends included.
    pub fn theta_grid(&self) -> Vec<f64> {
        let n = self.theta_steps;
        let span = self.theta_end - self.theta_start;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.theta_end
                } else {
                    self.theta_start + span * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    /// Error-model binding used in reports: `d = 2`, `N = N_A`.
    pub fn error_params(&self, layout: &RegisterLayout) -> Result<ErrorModelParams> {
        ErrorModelParams::new(self.r as u64, 2, layout.n_a() as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminationReport {
    pub theta: f64,
    pub delta_by_measure: BTreeMap<Measure, f64>,
    pub p_err_eq5: f64,
    pub p_err_eq6_by_measure: BTreeMap<Measure, f64>,
    pub p_err_simulated: f64,
    pub theta_class: ThetaClass,
}

impl DiscriminationReport {
    /// Measures whose practical error estimate exceeds 1.
    pub fn practical_out_of_range(&self) -> Vec<Measure> {
        self.p_err_eq6_by_measure
            .iter()
            .filter(|(_, p)| **p > 1.0)
            .map(|(m, _)| *m)
            .collect()
    }
}

/// Everything about a configuration that does not depend on `theta`.
pub struct Experiment {
    config: ExperimentConfig,
    layout: RegisterLayout,
    prepared: StateVector<f64>,
    null_choi: Option<ChoiMatrix<f64>>,
    params: ErrorModelParams,
}

impl Experiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        let layout = config.validate()?;
        let strategy = PermutationStrategy::build(config.strategy, &layout, config.r, config.seed)?;
        let mut prepared = StateVector::new_zero_state(layout.total_qubits())?;
        build_u_in(&layout, config.r)?.apply(&mut prepared)?;
        build_u_per(&layout, &strategy)?.0.apply(&mut prepared)?;
        let null_choi = if config.measures.is_empty() {
            None
        } else {
            Some(choi(&build_null_oracle(&layout), layout.oracle_qubits())?)
        };
        let params = config.error_params(&layout)?;
        Ok(Experiment {
            config,
            layout,
            prepared,
            null_choi,
            params,
        })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.config
    }

    /// State after initialization and the permutation strategy, before any oracle.
    pub fn prepared_state(&self) -> &StateVector<f64> {
        &self.prepared
    }

    /// Final global states under the null and alternate hypotheses.
    pub fn final_states(&self, theta: f64) -> Result<(StateVector<f64>, StateVector<f64>)> {
        let mut null = self.prepared.clone();
        build_null_oracle(&self.layout).apply(&mut null)?;
        let mut alt = self.prepared.clone();
        build_alternate_oracle(&self.layout, theta)?.apply(&mut alt)?;
        Ok((null, alt))
    }

    /// Per-reference-value conditional vectors on A and B.
    pub fn oracle_register_blocks(&self, state: &StateVector<f64>) -> Vec<Vec<Complex<f64>>> {
        let mut keep = self.layout.a_qubits();
        keep.extend(self.layout.b_qubits());
        state.environment_blocks(&keep, &self.layout.reference_qubits())
    }

    pub fn deltas(&self, theta: f64) -> Result<BTreeMap<Measure, f64>> {
        let Some(null_choi) = &self.null_choi else {
            return Ok(BTreeMap::new());
        };
        let alt = choi(
            &build_alternate_oracle(&self.layout, theta)?,
            self.layout.oracle_qubits(),
        )?;
        self.config
            .measures
            .iter()
            .map(|m| Ok((*m, m.evaluate(null_choi, &alt)?)))
            .collect()
    }

    pub fn run(&self, theta: f64) -> Result<DiscriminationReport> {
        let (null, alt) = self.final_states(theta)?;
        let p_err_simulated = metrics::helstrom_error_ensembles(
            &self.oracle_register_blocks(&null),
            &self.oracle_register_blocks(&alt),
        )?;
        let delta_by_measure = self.deltas(theta)?;
        let p_err_eq5 = p_err_limiting::<f64>(&self.params);
        let p_err_eq6_by_measure = delta_by_measure
            .iter()
            .map(|(m, delta)| Ok((*m, p_err_practical(&self.params, *delta)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let report = DiscriminationReport {
            theta,
            delta_by_measure,
            p_err_eq5,
            p_err_eq6_by_measure,
            p_err_simulated,
            theta_class: classify_theta(theta, DEFAULT_THETA_TOL),
        };
        for m in report.practical_out_of_range() {
            log::warn!("theta={theta}: practical error under {m} exceeds 1");
        }
        Ok(report)
    }

    pub fn sweep(&self) -> Result<Vec<DiscriminationReport>> {
        self.config
            .theta_grid()
            .into_par_iter()
            .map(|theta| self.run(theta))
            .collect()
    }
}

pub fn run_discrimination(config: &ExperimentConfig, theta: f64) -> Result<DiscriminationReport> {
    Experiment::new(config.clone())?.run(theta)
}

pub fn sweep_theta(config: &ExperimentConfig) -> Result<Vec<DiscriminationReport>> {
    Experiment::new(config.clone())?.sweep()
}

/// Distances between the two oracles over the theta grid; no circuit simulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceRow {
    pub theta: f64,
    pub delta_by_measure: BTreeMap<Measure, f64>,
}

pub fn sweep_distances(config: &ExperimentConfig) -> Result<Vec<DistanceRow>> {
    let layout = config.validate()?;
    let n = layout.oracle_qubits();
    let null = choi(&build_null_oracle::<f64>(&layout), n)?;
    config
        .theta_grid()
        .into_par_iter()
        .map(|theta| {
            let alt = choi(&build_alternate_oracle(&layout, theta)?, n)?;
            let delta_by_measure = config
                .measures
                .iter()
                .map(|m| Ok((*m, m.evaluate(&null, &alt)?)))
                .collect::<Result<_>>()?;
            Ok(DistanceRow {
                theta,
                delta_by_measure,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ResourceRow {
    Count(ResourceCount),
    Skipped {
        k: usize,
        d: usize,
        r: usize,
        reason: String,
    },
}

/// Closed-form resource counts over the `(k, d, r)` grid in lexicographic order.
pub fn sweep_resources(
    k_range: impl IntoIterator<Item = usize> + Clone,
    d_range: impl IntoIterator<Item = usize> + Clone,
    r_range: impl IntoIterator<Item = usize> + Clone,
) -> Vec<ResourceRow> {
    let mut rows = Vec::new();
    for k in k_range {
        for d in d_range.clone() {
            for r in r_range.clone() {
                let counted = RegisterLayout::new(k, d).and_then(|l| count_controlled_bell(&l, r));
                rows.push(match counted {
                    Ok(c) => ResourceRow::Count(c),
                    Err(e) => {
                        log::warn!("skipping k={k}, d={d}, r={r}: {e}");
                        ResourceRow::Skipped {
                            k,
                            d,
                            r,
                            reason: e.to_string(),
                        }
                    }
                });
            }
        }
    }
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OffsetProbe {
    pub offset: f64,
    pub p_err_limiting: f64,
    pub min_simulated: f64,
    pub theta_at_min: f64,
}

/// `|p_limiting - min_theta p_simulated|` over the configured sweep.
pub fn probe_eq9_offset(config: &ExperimentConfig) -> Result<OffsetProbe> {
    let lo = (config.theta_start / PI).ceil() as i64;
    let hi = (config.theta_end / PI).floor() as i64;
    if !(lo..=hi).any(|m| m.rem_euclid(2) == 1) {
        return Err(Error::Precondition(format!(
            "sweep [{}, {}] contains no odd multiple of pi",
            config.theta_start, config.theta_end
        )));
    }
    let reports = sweep_theta(config)?;
    let best = reports
        .iter()
        .min_by(|a, b| a.p_err_simulated.total_cmp(&b.p_err_simulated))
        .expect("at least two grid points");
    Ok(OffsetProbe {
        offset: (best.p_err_eq5 - best.p_err_simulated).abs(),
        p_err_limiting: best.p_err_eq5,
        min_simulated: best.p_err_simulated,
        theta_at_min: best.theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(k: usize, r: usize) -> ExperimentConfig {
        ExperimentConfig {
            k,
            r,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn identical_hypotheses_at_zero() {
        let rep = run_discrimination(&config(2, 1), 0.0).unwrap();
        assert!(rep.delta_by_measure.values().all(|d| *d == 0.0));
        assert!((rep.p_err_simulated - 0.5).abs() < 1e-14);
        assert_eq!(rep.theta_class, ThetaClass::Max);
    }

    #[test]
    fn pi_beats_half_pi() {
        let exp = Experiment::new(config(4, 1)).unwrap();
        let at_pi = exp.run(PI).unwrap().p_err_simulated;
        let at_half = exp.run(PI / 2.0).unwrap().p_err_simulated;
        assert!(at_pi < at_half, "{at_pi} vs {at_half}");
    }

    #[test]
    fn report_invariants() {
        let exp = Experiment::new(config(2, 2)).unwrap();
        for theta in [0.3, 1.7, 4.0] {
            let rep = exp.run(theta).unwrap();
            assert!((0.0..=0.5).contains(&rep.p_err_simulated));
            assert!(rep.delta_by_measure.values().all(|d| *d >= 0.0));
            assert_eq!(rep.delta_by_measure.len(), 3);
        }
    }

    #[test]
    fn grid_is_linspace() {
        let cfg = ExperimentConfig {
            theta_steps: 9,
            ..ExperimentConfig::default()
        };
        let grid = cfg.theta_grid();
        for (i, t) in grid.iter().enumerate() {
            assert!((t - i as f64 * PI / 2.0).abs() < 1e-12);
        }
        assert_eq!(grid[8], 4.0 * PI);
    }

    #[test]
    fn config_validation() {
        let bad = ExperimentConfig {
            theta_steps: 1,
            ..ExperimentConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExperimentConfig {
            theta_end: 0.0,
            ..ExperimentConfig::default()
        };
        assert!(bad.validate().is_err());
        let too_big = config(5, 1);
        assert!(matches!(too_big.validate(), Err(Error::Capacity(_))));
        let no_measures = ExperimentConfig {
            measures: vec![],
            ..config(5, 1)
        };
        assert!(no_measures.validate().is_ok());
    }

    #[test]
    fn probe_requires_odd_multiple() {
        let cfg = ExperimentConfig {
            theta_start: 0.0,
            theta_end: 0.0,
            ..ExperimentConfig::default()
        };
        assert!(matches!(probe_eq9_offset(&cfg), Err(Error::Precondition(_))));
        let cfg = ExperimentConfig {
            theta_start: 0.1,
            theta_end: 3.0,
            ..ExperimentConfig::default()
        };
        assert!(matches!(probe_eq9_offset(&cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn resource_sweep_order_and_skips() {
        let rows = sweep_resources(1..=2, 1..=1, 1..=3);
        let keys: Vec<(usize, usize)> = rows
            .iter()
            .map(|row| match row {
                ResourceRow::Count(c) => (c.k, c.r),
                ResourceRow::Skipped { k, r, .. } => (*k, *r),
            })
            .collect();
        assert_eq!(keys, vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)]);
        assert!(matches!(rows[1], ResourceRow::Skipped { .. }));
        assert!(matches!(rows[5], ResourceRow::Skipped { .. }));
        assert!(sweep_resources(1..1, 1..=1, 1..=1).is_empty());
    }

    #[test]
    fn measure_parsing() {
        assert_eq!("Bures".parse::<Measure>().unwrap(), Measure::Bures);
        assert!("diamond".parse::<Measure>().is_err());
    }
}
