//! Canned simulations: build a model, evolve it from its canonical initial
//! state and tabulate the two-dot correlation measures along a time grid.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::correlations::{concurrence, quantum_discord};
use crate::dynamics::{evolve_closed, evolve_lindblad, OddParityAmplitudes, TimeGrid};
use crate::error::{Error, Result};
use crate::fock::{basis_ket, partial_trace, DensityMatrix, StateVector};
use crate::models::{
    self, build_fermion_pair_hamiltonian, build_qd_mf_hamiltonian, build_single_fermion_hamiltonian,
    DotCouplings, FermionModelParams, Hamiltonian, OpenSystemParams, QdMfParams, D1, D2,
};
use crate::tomography::{
    closed_form_probabilities, polar_decompose, simulate_protocol, TomographyRecord,
    PHASE_RECOVERY_THRESHOLD,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Dots coupled through a Majorana pair with overlap `ε_m` (default 0.5).
    MfCoupled,
    /// Dots coupled through a Majorana pair with `ε_m = 0`.
    MfUncoupled,
    /// Both dots coupled to one regular fermion of level `ε_c` (default 0).
    SingleFermion,
    /// Each dot coupled to its own regular fermion.
    FermionPair,
    /// Majorana-coupled dots leaking into leads at rate Γ (default 0.05).
    OpenSystem,
    /// Majorana-coupled dots observed through the auxiliary-dot readout.
    Tomography,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 6] = [
        Self::MfCoupled,
        Self::MfUncoupled,
        Self::SingleFermion,
        Self::FermionPair,
        Self::OpenSystem,
        Self::Tomography,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::MfCoupled => "mf_coupled",
            Self::MfUncoupled => "mf_uncoupled",
            Self::SingleFermion => "single_fermion",
            Self::FermionPair => "fermion_pair",
            Self::OpenSystem => "open_system",
            Self::Tomography => "tomography",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().replace('-', "_").to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|k| k.name() == wanted)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown scenario '{s}'")))
    }
}

/// Parameters that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    EpsilonM,
    EpsilonC,
    Gamma,
    Tunnel,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            Self::EpsilonM => "epsilon_m",
            Self::EpsilonC => "epsilon_c",
            Self::Gamma => "gamma",
            Self::Tunnel => "T",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "epsilon_m" => Ok(Self::EpsilonM),
            "epsilon_c" => Ok(Self::EpsilonC),
            "gamma" => Ok(Self::Gamma),
            "T" | "t" | "tunnel" => Ok(Self::Tunnel),
            _ => Err(Error::InvalidParameter(format!(
                "unknown sweep parameter '{s}' (expected epsilon_m, epsilon_c, gamma or T)"
            ))),
        }
    }
}

/// Everything needed to run one scenario. Energies in units of λ, times in 1/λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub epsilon_m: f64,
    /// Level of the regular fermion(s) in the single-fermion and pair models.
    pub epsilon_c: f64,
    /// Lead tunneling rate; any positive value switches to Lindblad evolution.
    pub gamma: f64,
    /// Auxiliary-dot tunnel coupling of the readout protocol.
    pub tunnel: f64,
    pub grid: TimeGrid,
}

impl ScenarioConfig {
    pub const DEFAULT_T_MAX: f64 = 20.0;
    pub const DEFAULT_POINTS: usize = 2001;

    pub fn new(kind: ScenarioKind) -> Self {
        let (epsilon_m, gamma) = match kind {
            ScenarioKind::MfCoupled | ScenarioKind::Tomography => (0.5, 0.0),
            ScenarioKind::OpenSystem => (0.5, 0.05),
            _ => (0.0, 0.0),
        };
        Self {
            kind,
            epsilon_m,
            epsilon_c: 0.0,
            gamma,
            tunnel: 1.0,
            grid: TimeGrid::new(0.0, Self::DEFAULT_T_MAX, Self::DEFAULT_POINTS).expect("default grid"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("epsilon_m", self.epsilon_m),
            ("epsilon_c", self.epsilon_c),
            ("gamma", self.gamma),
            ("T", self.tunnel),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        if self.gamma < 0.0 {
            return Err(Error::InvalidParameter(format!("gamma must be ≥ 0, got {}", self.gamma)));
        }
        if self.tunnel <= 0.0 {
            return Err(Error::InvalidParameter(format!("T must be > 0, got {}", self.tunnel)));
        }
        match self.kind {
            ScenarioKind::MfUncoupled if self.epsilon_m != 0.0 => Err(Error::InvalidParameter(format!(
                "mf_uncoupled has epsilon_m = 0, got {}",
                self.epsilon_m
            ))),
            ScenarioKind::Tomography if self.gamma > 0.0 => Err(Error::InvalidParameter(
                "the readout protocol needs a pure state; gamma must be 0".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn with_parameter(&self, parameter: SweepParameter, value: f64) -> Result<Self> {
        let mut c = *self;
        match parameter {
            SweepParameter::EpsilonM => c.epsilon_m = value,
            SweepParameter::EpsilonC => c.epsilon_c = value,
            SweepParameter::Gamma => c.gamma = value,
            SweepParameter::Tunnel => c.tunnel = value,
        }
        c.validate()?;
        Ok(c)
    }

    pub fn parameter(&self, parameter: SweepParameter) -> f64 {
        match parameter {
            SweepParameter::EpsilonM => self.epsilon_m,
            SweepParameter::EpsilonC => self.epsilon_c,
            SweepParameter::Gamma => self.gamma,
            SweepParameter::Tunnel => self.tunnel,
        }
    }

    fn hamiltonian(&self) -> Result<Hamiltonian> {
        let dots = DotCouplings::default();
        match self.kind {
            ScenarioKind::MfCoupled
            | ScenarioKind::MfUncoupled
            | ScenarioKind::OpenSystem
            | ScenarioKind::Tomography => Ok(build_qd_mf_hamiltonian(&QdMfParams::new(self.epsilon_m, dots)?)),
            ScenarioKind::SingleFermion => build_single_fermion_hamiltonian(&FermionModelParams::SingleFermion {
                epsilon_c: self.epsilon_c,
                dots,
            }),
            ScenarioKind::FermionPair => build_fermion_pair_hamiltonian(&FermionModelParams::FermionPair {
                epsilon_1f: self.epsilon_c,
                epsilon_2f: self.epsilon_c,
                dots,
            }),
        }
    }

    /// `|0,0,1⟩` for the three-mode models, `|0,0,1,1⟩` for the fermion pair.
    fn initial_state(&self, h: &Hamiltonian) -> Result<StateVector> {
        let n = h.register().mode_count();
        let occupations: Vec<u8> = (0..n).map(|k| u8::from(k >= 2)).collect();
        basis_ket(h.register(), &occupations)
    }
}

/// Measures at one time point. Populations refer to the two-dot state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationPoint {
    pub t: f64,
    pub concurrence: f64,
    pub discord: f64,
    pub mutual_information: f64,
    pub classical_correlations: f64,
    /// Both dots occupied.
    pub pop_both: f64,
    /// Exactly one dot occupied.
    pub pop_single: f64,
    pub pop_empty: f64,
    /// `|Tr ρ − 1|` of the evolved state (squared-norm deviation for pure states).
    pub trace_error: f64,
}

impl CorrelationPoint {
    pub const FIELDS: [&'static str; 9] = [
        "t",
        "concurrence",
        "discord",
        "mutual_information",
        "classical_correlations",
        "pop_both",
        "pop_single",
        "pop_empty",
        "trace_error",
    ];

    pub fn values(&self) -> [f64; 9] {
        [
            self.t,
            self.concurrence,
            self.discord,
            self.mutual_information,
            self.classical_correlations,
            self.pop_both,
            self.pop_single,
            self.pop_empty,
            self.trace_error,
        ]
    }

    pub fn field(&self, name: &str) -> Option<f64> {
        Self::FIELDS.iter().position(|f| *f == name).map(|k| self.values()[k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    pub config: ScenarioConfig,
    pub points: Vec<CorrelationPoint>,
}

impl CorrelationSeries {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        if !CorrelationPoint::FIELDS.contains(&name) {
            return None;
        }
        Some(self.points.iter().filter_map(|p| p.field(name)).collect())
    }
}

/// Concurrence, discord and populations of a two-dot state.
pub fn two_dot_point(t: f64, rho_d: &DensityMatrix, trace_error: f64) -> Result<CorrelationPoint> {
    let discord = quantum_discord(rho_d)?;
    let pop = |o: [u8; 2]| rho_d.population(&o);
    Ok(CorrelationPoint {
        t,
        concurrence: concurrence(rho_d)?,
        discord: discord.discord,
        mutual_information: discord.mutual_information,
        classical_correlations: discord.classical_correlations,
        pop_both: pop([1, 1])?,
        pop_single: pop([1, 0])? + pop([0, 1])?,
        pop_empty: pop([0, 0])?,
        trace_error,
    })
}

fn tabulate(items: Vec<(f64, DensityMatrix, f64)>) -> Result<Vec<CorrelationPoint>> {
    items
        .par_iter()
        .map(|(t, rho_d, err)| two_dot_point(*t, rho_d, *err))
        .collect()
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<CorrelationSeries> {
    config.validate()?;
    let h = config.hamiltonian()?;
    let psi0 = config.initial_state(&h)?;

    let items = if config.kind == ScenarioKind::Tomography {
        evolve_closed(&h, &psi0, &config.grid)?
            .iter()
            .map(|(t, psi)| {
                let rec = simulate_protocol(psi, config.tunnel)?;
                let err = (rec.reconstructed.trace() - 1.0).abs();
                Ok((t, rec.reconstructed, err))
            })
            .collect::<Result<Vec<_>>>()?
    } else if config.gamma > 0.0 {
        let jumps = models::lindblad_jump_operators(&OpenSystemParams::new(config.gamma)?, h.register())?;
        evolve_lindblad(&h, &jumps, &psi0.density_matrix(), &config.grid)?
            .iter()
            .map(|(t, rho)| Ok((t, partial_trace(rho, &[D1, D2])?, (rho.trace() - 1.0).abs())))
            .collect::<Result<Vec<_>>>()?
    } else {
        evolve_closed(&h, &psi0, &config.grid)?
            .iter()
            .map(|(t, psi)| {
                let err = (psi.norm().powi(2) - 1.0).abs();
                Ok((t, partial_trace(&psi.density_matrix(), &[D1, D2])?, err))
            })
            .collect::<Result<Vec<_>>>()?
    };

    Ok(CorrelationSeries {
        config: *config,
        points: tabulate(items)?,
    })
}

/// Runs `base` once per value of `parameter`. Results come back in the order
/// of `values`.
pub fn run_sweep(
    base: &ScenarioConfig,
    parameter: SweepParameter,
    values: &[f64],
) -> Result<Vec<CorrelationSeries>> {
    let configs = values
        .iter()
        .map(|&v| base.with_parameter(parameter, v))
        .collect::<Result<Vec<_>>>()?;
    configs.par_iter().map(run_scenario).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyCheckRow {
    pub t: f64,
    pub record: TomographyRecord,
    pub fidelity: f64,
    /// Largest deviation of the simulated readout from the closed form.
    pub residual: f64,
    /// `b₁b₃`, the magnitude of the two-dot coherence.
    pub coherence: f64,
}

impl TomographyCheckRow {
    pub fn phase_recovered(&self) -> bool {
        self.record.phase.is_recovered()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomographySummary {
    pub points: usize,
    /// Smallest fidelity over points with `b₁b₃ ≥ 1e-3`; 1 if there are none.
    pub min_fidelity: f64,
    pub max_residual: f64,
    pub unrecoverable: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyCheck {
    pub rows: Vec<TomographyCheckRow>,
    pub summary: TomographySummary,
}

/// Coherence magnitude above which the reconstruction must reach full fidelity.
pub const FIDELITY_COHERENCE_FLOOR: f64 = 1e-3;

pub fn run_tomography_check(config: &ScenarioConfig) -> Result<TomographyCheck> {
    if config.kind != ScenarioKind::Tomography {
        return Err(Error::InvalidParameter(format!(
            "tomography check needs the tomography scenario, got {}",
            config.kind
        )));
    }
    config.validate()?;
    let h = config.hamiltonian()?;
    let psi0 = config.initial_state(&h)?;
    let trajectory = evolve_closed(&h, &psi0, &config.grid)?;

    let rows = trajectory
        .states
        .par_iter()
        .zip(trajectory.times.par_iter())
        .map(|(psi, &t)| {
            let record = simulate_protocol(psi, config.tunnel)?;
            let pd = polar_decompose(&OddParityAmplitudes::from_state(psi)?)?;
            let residual = record.probabilities.max_abs_diff(&closed_form_probabilities(&pd));
            Ok(TomographyCheckRow {
                t,
                fidelity: record.fidelity(),
                residual,
                coherence: pd.b1 * pd.b3,
                record,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let summary = TomographySummary {
        points: rows.len(),
        min_fidelity: rows
            .iter()
            .filter(|r| r.coherence >= FIDELITY_COHERENCE_FLOOR)
            .fold(1.0f64, |m, r| m.min(r.fidelity)),
        max_residual: rows.iter().fold(0.0f64, |m, r| m.max(r.residual)),
        unrecoverable: rows.iter().filter(|r| !r.phase_recovered()).count(),
    };
    const { assert!(PHASE_RECOVERY_THRESHOLD < FIDELITY_COHERENCE_FLOOR) };
    Ok(TomographyCheck { rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(kind: ScenarioKind, n: usize) -> ScenarioConfig {
        let mut c = ScenarioConfig::new(kind);
        c.grid = TimeGrid::new(0.0, 20.0, n).unwrap();
        c
    }

    #[test]
    fn names_round_trip() {
        for k in ScenarioKind::ALL {
            assert_eq!(k.name().parse::<ScenarioKind>().unwrap(), k);
        }
        assert!("mf".parse::<ScenarioKind>().is_err());
        assert_eq!("T".parse::<SweepParameter>().unwrap(), SweepParameter::Tunnel);
        assert_eq!("epsilon-m".parse::<SweepParameter>().unwrap(), SweepParameter::EpsilonM);
        assert!("lambda".parse::<SweepParameter>().is_err());
    }

    #[test]
    fn defaults_per_scenario() {
        assert_eq!(ScenarioConfig::new(ScenarioKind::MfCoupled).epsilon_m, 0.5);
        assert_eq!(ScenarioConfig::new(ScenarioKind::MfUncoupled).epsilon_m, 0.0);
        assert_eq!(ScenarioConfig::new(ScenarioKind::OpenSystem).gamma, 0.05);
        let c = ScenarioConfig::new(ScenarioKind::SingleFermion);
        assert_eq!((c.epsilon_c, c.grid.n_points(), c.grid.t_end()), (0.0, 2001, 20.0));
    }

    #[test]
    fn invalid_configs() {
        let mut c = ScenarioConfig::new(ScenarioKind::MfCoupled);
        c.gamma = -0.1;
        assert!(run_scenario(&c).is_err());
        let mut c = ScenarioConfig::new(ScenarioKind::MfUncoupled);
        c.epsilon_m = 0.5;
        assert!(c.validate().is_err());
        let mut c = ScenarioConfig::new(ScenarioKind::Tomography);
        c.gamma = 0.05;
        assert!(c.validate().is_err());
        let c = ScenarioConfig::new(ScenarioKind::MfCoupled);
        assert!(run_tomography_check(&c).is_err());
        assert!(c.with_parameter(SweepParameter::Tunnel, 0.0).is_err());
    }

    #[test]
    fn uncoupled_majorana_has_discord_without_entanglement() {
        let s = run_scenario(&short(ScenarioKind::MfUncoupled, 201)).unwrap();
        assert_eq!(s.points.len(), 201);
        assert!(s.points.iter().all(|p| p.concurrence < 1e-10));
        assert!(s.points.iter().any(|p| p.discord > 1e-3));
    }

    #[test]
    fn coupled_majorana_reaches_full_entanglement() {
        let s = run_scenario(&short(ScenarioKind::MfCoupled, 2001)).unwrap();
        let max = s.column("concurrence").unwrap().into_iter().fold(0.0, f64::max);
        assert!(max >= 0.999, "max concurrence {max}");
    }

    #[test]
    fn fermion_pair_stays_uncorrelated() {
        let s = run_scenario(&short(ScenarioKind::FermionPair, 101)).unwrap();
        for p in &s.points {
            assert!(p.concurrence < 1e-10 && p.discord < 1e-10);
            assert!((p.pop_both + p.pop_single + p.pop_empty - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_is_ordered_and_empty_sweep_is_empty() {
        let base = short(ScenarioKind::MfCoupled, 41);
        assert!(run_sweep(&base, SweepParameter::EpsilonM, &[]).unwrap().is_empty());
        let out = run_sweep(&base, SweepParameter::EpsilonM, &[0.0, 0.5]).unwrap();
        assert_eq!(out[0].config.epsilon_m, 0.0);
        assert_eq!(out[1].config.epsilon_m, 0.5);
        assert_eq!(out[1], run_scenario(&base).unwrap());
    }

    #[test]
    fn open_system_reports_small_trace_error() {
        let mut c = short(ScenarioKind::OpenSystem, 101);
        c.grid = TimeGrid::new(0.0, 5.0, 101).unwrap();
        let s = run_scenario(&c).unwrap();
        assert!(s.points.iter().all(|p| p.trace_error < 1e-8));
        assert!(s.points.last().unwrap().pop_empty > s.points[0].pop_empty - 1.0);
    }

    #[test]
    fn tomography_check_defaults() {
        let c = short(ScenarioKind::Tomography, 101);
        let check = run_tomography_check(&c).unwrap();
        assert!(check.summary.max_residual < 1e-8);
        assert!(check.summary.min_fidelity >= 1.0 - 1e-6);
        // t = 0 is |0,0,1⟩: no coherence to recover
        assert!(!check.rows[0].phase_recovered());
        assert!(check.summary.unrecoverable >= 1);
    }
}
