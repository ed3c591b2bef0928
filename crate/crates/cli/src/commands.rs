//! One function per subcommand. Each returns the tables to write, a
//! command-specific summary and any regime warnings.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::PI;

use gyrospin_core::analytics::{
    adiabatic_validity, crossing_curvature, decoherence_report, potential_surfaces, stability_check, zeeman_ratio,
    Occupation, VALIDITY_THRESHOLD,
};
use gyrospin_core::model::{derive_scales, DerivedScales};
use gyrospin_core::protocol::{
    alignment_sweep, interferometer_sweep, model_crosscheck, recurrence_sweep, run_interferometer,
    simulate_stabilization, CrosscheckSettings, InterferometerSettings, StabilizationSettings, SweepTable,
};
use gyrospin_core::quantum::evolve::EDGE_LIMIT;

use crate::config::{OccupationName, Physical, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Csv};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Derive,
    Alignment,
    Surfaces,
    Stabilize,
    Interfere,
    Validity,
    Decoherence,
    Crosscheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Derive => "derive",
            Command::Alignment => "alignment",
            Command::Surfaces => "surfaces",
            Command::Stabilize => "stabilize",
            Command::Interfere => "interfere",
            Command::Validity => "validity",
            Command::Decoherence => "decoherence",
            Command::Crosscheck => "crosscheck",
        }
    }
}

/// Everything a command produces before serialization.
#[derive(Default)]
pub struct Outcome {
    pub tables: Vec<(String, Csv)>,
    pub summary: serde_json::Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn table(&mut self, name: impl Into<String>, csv: Csv) {
        self.tables.push((name.into(), csv));
    }

    fn put(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }
}

pub fn run(cmd: Command, cfg: &RunConfig, phys: &Physical) -> Result<Outcome, CliError> {
    match cmd {
        Command::Derive => derive(phys),
        Command::Alignment => alignment(cfg, phys),
        Command::Surfaces => surfaces(cfg, phys),
        Command::Stabilize => stabilize(cfg, phys),
        Command::Interfere => interfere(cfg, phys),
        Command::Validity => validity(cfg, phys),
        Command::Decoherence => decoherence(cfg, phys),
        Command::Crosscheck => crosscheck(cfg, phys),
    }
}

pub fn scales(phys: &Physical) -> Result<DerivedScales, CliError> {
    Ok(derive_scales(&phys.geometry, &phys.trap, &phys.fields, &phys.environment)?)
}

fn opt(x: Option<f64>) -> f64 {
    x.unwrap_or(f64::NAN)
}

fn derive(phys: &Physical) -> Result<Outcome, CliError> {
    let s = scales(phys)?;
    let mut out = Outcome::default();
    let cols: Vec<(&str, f64)> = vec![
        ("mass_kg", s.mass),
        ("inertia_kg_m2", s.inertia),
        ("inertia_sym_kg_m2", s.inertia_sym),
        ("inertia_eff_kg_m2", s.inertia_eff),
        ("quadrupole_C_m2", s.quadrupole),
        ("omega_rad_s", s.omega),
        ("zeeman_rad_s", s.zeeman),
        ("d_nv_rad_s", s.d_nv),
        ("g_rad_s", s.g),
        ("delta_rad_s", s.delta),
        ("detuning_rad_s", s.detuning),
        ("delta_tilde_rad_s", s.delta_tilde),
        ("omega_xi_rad_s", s.omega_xi),
        ("omega_beta_rad_s", s.omega_beta),
        ("omega_gamma_rad_s", opt(s.omega_gamma)),
        ("omega_eta_rad_s", opt(s.omega_eta)),
        ("sigma_gamma_rad", opt(s.sigma_gamma)),
        ("kappa", opt(s.kappa)),
    ];
    let mut csv = Csv::new(cols.iter().map(|(n, _)| n.to_string()).collect())
        .comment("derived scales in SI units; nan marks an undefined scale");
    csv.push(cols.iter().map(|&(_, v)| Cell::Num(v)).collect());
    out.table("scales.csv", csv);

    out.put("omega_beta_over_omega", if s.omega != 0.0 { s.omega_beta / s.omega } else { f64::NAN });
    out.put("compensation_field_mT", phys.fields.compensation_field() * 1e3);
    let zr = zeeman_ratio(&s);
    out.put("zeeman_ratio", zr);
    if zr >= VALIDITY_THRESHOLD {
        out.warnings.push(format!("Zeeman ratio ħγ0B/(Iω²) = {zr:.3e} is not small"));
    }
    if s.g != 0.0 {
        out.put("detuning_over_g", s.detuning / s.g);
    }
    match stability_check(&s) {
        Ok(r) => {
            out.put("stability", r);
            if !r.stable {
                out.warnings.push(format!("|gσ_γ/δ| = {:.3} exceeds the stability threshold", r.ratio));
            }
        }
        Err(e) => out.put("stability", e.to_string()),
    }
    if s.detuning <= 0.0 {
        out.warnings.push("Δ = D − g is not positive; the dispersive description does not apply".into());
    }
    Ok(out)
}

fn alignment(cfg: &RunConfig, phys: &Physical) -> Result<Outcome, CliError> {
    let grid = cfg.simulation.b_grid_mt.values("simulation.B_grid_mT")?;
    let bs: Vec<f64> = grid.iter().map(|b| b * 1e-3).collect();
    let ts = cfg.simulation.temperatures_k.clone().unwrap_or_else(|| vec![phys.environment.temperature]);
    let m = cfg.simulation.m;
    let parts: Vec<SweepTable> = bs
        .par_iter()
        .map(|&b| alignment_sweep(&phys.geometry, &phys.trap, &phys.fields, &[b], &ts, m))
        .collect::<Result<_, _>>()?;
    let mut table = merge(parts);
    restore_grid(&mut table, &grid, ts.len());
    let mut out = Outcome::default();
    let csv = Csv::from_table(&table)
        .comment(format!("Barnett alignment for rotor projection m = {m}"))
        .comment(format!("compensation field B = {:e} mT", phys.fields.compensation_field() * 1e3));
    out.put("compensation_field_mT", phys.fields.compensation_field() * 1e3);
    out.put("rows", table.rows.len());
    out.table("alignment.csv", csv);
    Ok(out)
}

/// Replaces the B column, which the sweeps rebuild from tesla, with the
/// configured millitesla values so the file shows the grid verbatim.
fn restore_grid(table: &mut SweepTable, grid_mt: &[f64], per_point: usize) {
    if let Some(k) = table.column_index("B") {
        for (i, row) in table.rows.iter_mut().enumerate() {
            row[k] = grid_mt[i / per_point];
        }
    }
}

fn merge(parts: Vec<SweepTable>) -> SweepTable {
    let mut it = parts.into_iter();
    let mut first = it.next().expect("at least one grid point");
    for p in it {
        first.rows.extend(p.rows);
    }
    first
}

fn surfaces(cfg: &RunConfig, phys: &Physical) -> Result<Outcome, CliError> {
    let s = scales(phys)?;
    let n = cfg.simulation.gamma_points;
    let mut csv = Csv::new(vec!["gamma_rad".into(), "omega_plus_rad_s".into(), "omega_minus_rad_s".into()])
        .comment("spin-branch potentials: eigenvalues of the magnetic spin block are hbar*omega/2");
    for k in 0..n {
        let gamma = 2.0 * PI * k as f64 / (n - 1) as f64;
        let p = potential_surfaces(s.delta, s.g, gamma);
        csv.push(vec![gamma.into(), p.omega_plus.into(), p.omega_minus.into()]);
    }
    let mut out = Outcome::default();
    out.put("delta_rad_s", s.delta);
    out.put("g_rad_s", s.g);
    match crossing_curvature(s.delta, s.g) {
        Ok(c) => out.put("crossing_curvature_rad_s", c),
        Err(e) => out.warnings.push(e.to_string()),
    }
    if let Ok(r) = stability_check(&s) {
        if !r.stable {
            out.warnings.push(format!("|gσ_γ/δ| = {:.3} exceeds the stability threshold", r.ratio));
        }
        out.put("stability", r);
    }
    out.table("surfaces.csv", csv);
    Ok(out)
}

fn stabilize(cfg: &RunConfig, phys: &Physical) -> Result<Outcome, CliError> {
    let s = scales(phys)?;
    let st = &cfg.simulation.stabilization;
    let omega_eta = s.require_omega_eta()?;
    let runs: Vec<_> = st
        .spins
        .par_iter()
        .map(|&spin| {
            let settings = StabilizationSettings {
                cutoff: cfg.simulation.rotor_L,
                packet_width: st.packet_width_rad,
                spin,
                t_max: Some(st.periods * 2.0 * PI / omega_eta),
                steps_per_period: st.steps_per_period,
                samples: st.samples,
                absorber: st.absorber,
            };
            simulate_stabilization(&s, &settings).map(|r| (spin, r))
        })
        .collect::<Result<_, _>>()?;
    let mut out = Outcome::default();
    let mut summary = Vec::new();
    for (spin, r) in runs {
        let tag = if spin > 0 { "plus" } else { "minus" };
        summary.push(json!({
            "sigma_x": spin,
            "final_transition": r.final_transition,
            "max_transition": r.max_transition,
            "escaped_weight": r.escaped_weight,
            "dt_s": r.dt,
            "steps": r.steps,
        }));
        if spin > 0 && r.max_transition >= 0.1 {
            out.warnings.push(format!("σx = +1 branch is not trapped: transition probability reaches {:.3}", r.max_transition));
        }
        let csv = Csv::from_trajectory(&r.trajectory).comment(format!("initial state sigma_x = {spin:+}"));
        out.table(format!("stabilization_{tag}.csv"), csv);
    }
    out.put("omega_eta_rad_s", omega_eta);
    out.put("omega_gamma_rad_s", s.omega_gamma);
    out.put("runs", summary);
    if let Ok(r) = stability_check(&s) {
        out.put("stability", r);
    }
    Ok(out)
}

fn interfere(cfg: &RunConfig, phys: &Physical) -> Result<Outcome, CliError> {
    let s = scales(phys)?;
    let it = &cfg.simulation.interferometer;
    let settings = InterferometerSettings {
        fock_dim: cfg.simulation.fock_dim,
        temperature: it.temperature_k,
        t2: phys.environment.t2,
        axis_phase: it.axis_phase_rad,
        samples_per_arm: 32,
    };
    let mut out = Outcome::default();
    let wg = s.require_omega_gamma()?;
    let tau_max = it.tau_max_fraction * PI / wg;
    let n = it.tau_points;
    let taus: Vec<f64> = (0..n).map(|k| if n == 1 { tau_max } else { tau_max * k as f64 / (n - 1) as f64 }).collect();
    let points: Vec<_> = taus
        .par_iter()
        .map(|&t| interferometer_sweep(&s, &[t], &settings).map(|v| v[0]))
        .collect::<Result<_, _>>()?;
    let mut csv = Csv::new(vec![
        "tau_s".into(),
        "zeta".into(),
        "p_up_numeric".into(),
        "p_up_analytic".into(),
        "edge_weight".into(),
    ])
    .comment(format!("omega_gamma = {wg:e} rad/s; fock_dim = {}", settings.fock_dim));
    let mut truncated = 0;
    let mut beyond = 0;
    let mut worst = 0.0f64;
    for p in &points {
        csv.push(vec![p.tau.into(), p.zeta.into(), p.p_up_numeric.into(), p.p_up_analytic.into(), p.edge_weight.into()]);
        if p.edge_weight > EDGE_LIMIT {
            truncated += 1;
        } else if p.zeta <= 1.0 {
            worst = worst.max((p.p_up_numeric - p.p_up_analytic).abs());
        }
        if p.zeta > 1.0 {
            beyond += 1;
        }
    }
    if truncated > 0 {
        out.warnings.push(format!("{truncated} delays exceed the Fock truncation limit; their numeric values are unreliable"));
    }
    if beyond > 0 {
        out.warnings.push(format!("{beyond} delays have zeta > 1, outside the closed-form accuracy range"));
    }
    out.put("omega_gamma_rad_s", wg);
    out.put("max_numeric_analytic_difference", worst);
    out.table("interference.csv", csv);

    // Trajectory at the longest delay still inside the accurate regime.
    let tau_traj = points
        .iter()
        .filter(|p| p.zeta <= 1.0 && p.edge_weight <= EDGE_LIMIT)
        .map(|p| p.tau)
        .fold(0.0, f64::max);
    if tau_traj > 0.0 {
        match run_interferometer(&s, tau_traj, &settings) {
            Ok(r) => {
                out.warnings.extend(r.warnings.iter().cloned());
                let csv = Csv::from_trajectory(&r.trajectory).comment(format!("tau = {:e} s", r.tau));
                out.table("interference_trajectory.csv", csv);
            }
            Err(e) => out.warnings.push(format!("trajectory at tau = {tau_traj:e} s skipped: {e}")),
        }
    }

    if let Some(grid) = &it.recurrence_b_mt {
        let grid = grid.values("simulation.interferometer.recurrence_B_mT")?;
        let bs: Vec<f64> = grid.iter().map(|b| b * 1e-3).collect();
        let parts: Vec<SweepTable> = bs
            .par_iter()
            .map(|&b| recurrence_sweep(&phys.geometry, &phys.trap, &phys.fields, &phys.environment, &[b]))
            .collect::<Result<_, _>>()?;
        let mut table = merge(parts);
        restore_grid(&mut table, &grid, 1);
        let csv = Csv::from_table(&table)
            .comment("recurrence probability at tau = pi/omega_gamma; duration is 2 tau")
            .comment("t2_exceeds_duration is 1 where T2 is longer than the protocol");
        out.table("recurrence.csv", csv);
    }
    Ok(out)
}

fn validity(cfg: &RunConfig, phys: &Physical) -> Result<Outcome, CliError> {
    let v = &cfg.simulation.validity;
    let hz = v.rotation_Hz.values("simulation.validity.rotation_Hz")?;
    let l3_nm = v.l3_nm.values("simulation.validity.l3_nm")?;
    let l3s: Vec<f64> = l3_nm.iter().map(|l| l * 1e-9).collect();
    let model = match v.occupation {
        OccupationName::Bose => Occupation::Bose,
        OccupationName::Classical => Occupation::Classical,
    };
    let rows: Vec<Vec<_>> = hz
        .par_iter()
        .map(|&f| {
            adiabatic_validity(&phys.geometry, &phys.trap, &phys.fields, &phys.environment, &[2.0 * PI * f], &l3s, model)
        })
        .collect::<Result<_, _>>()?;
    let mut csv = Csv::new(vec![
        "rotation_Hz".into(),
        "l3_nm".into(),
        "ratio_p".into(),
        "ratio_b".into(),
        "valid".into(),
    ])
    .comment(format!("valid where both ratios are below {VALIDITY_THRESHOLD:e}"));
    let mut admitted = 0usize;
    for (f, row) in hz.iter().zip(&rows) {
        for (p, l3) in row.iter().zip(&l3_nm) {
            admitted += p.valid as usize;
            csv.push(vec![(*f).into(), (*l3).into(), p.ratio_p.into(), p.ratio_b.into(), Cell::Text(if p.valid { "1" } else { "0" }.into())]);
        }
    }
    let mut out = Outcome::default();
    out.put("points", hz.len() * l3s.len());
    out.put("admitted", admitted);
    out.table("validity.csv", csv);
    Ok(out)
}

fn decoherence(cfg: &RunConfig, phys: &Physical) -> Result<Outcome, CliError> {
    let d = &cfg.simulation.decoherence;
    let r = decoherence_report(&phys.geometry, &phys.environment, phys.fields.gamma0, d.gamma_ref_rad, d.gamma_sep_rad)?;
    let mut csv = Csv::new(vec![
        "gamma_b_per_s".into(),
        "gamma_coll_per_s".into(),
        "gamma_ph_per_s".into(),
        "f_bb_rad_s".into(),
        "f_mag_rad_s".into(),
    ])
    .comment(format!("angular separation {:e} rad", d.gamma_sep_rad));
    csv.push(vec![r.gamma_b.into(), r.gamma_coll.into(), r.gamma_ph.into(), r.f_bb.into(), r.f_mag.into()]);
    let mut out = Outcome::default();
    out.put("rates", r);
    out.put("gamma_ph_over_2pi_Hz", r.gamma_ph / (2.0 * PI));
    out.put("f_bb_over_2pi_Hz", r.f_bb / (2.0 * PI));
    out.put("f_mag_over_2pi_Hz", r.f_mag / (2.0 * PI));
    out.table("decoherence.csv", csv);
    Ok(out)
}

fn crosscheck(cfg: &RunConfig, phys: &Physical) -> Result<Outcome, CliError> {
    let s = scales(phys)?;
    let c = &cfg.simulation.crosscheck;
    let settings = CrosscheckSettings {
        angle_dim: c.angle_dim,
        libration_dim: c.libration_dim,
        alpha: c.alpha,
        periods: c.periods,
        samples: c.samples,
        rescale: cfg.simulation.rescale,
        ..Default::default()
    };
    let runs: Vec<_> = c
        .pairs
        .par_iter()
        .map(|&p| model_crosscheck(&s, p.pair(c.epsilon_rad), &settings).map(|r| (p, r)))
        .collect::<Result<_, _>>()?;
    let mut out = Outcome::default();
    let mut summary = Csv::new(vec!["pair".into(), "deviation_up".into(), "deviation_down".into(), "max_deviation".into()])
        .comment("deviation: max |reference - candidate| of <gamma> over the peak-to-peak range of the reference");
    let mut values = serde_json::Map::new();
    for (name, r) in &runs {
        let label = name.label();
        let (a, b) = r.pair.labels();
        let mut header = vec!["t_s".to_string()];
        for (prefix, tr) in [(a, &r.reference), (b, &r.candidate)] {
            header.extend(tr.series.iter().map(|(col, _)| format!("{prefix}_{}", col.label())));
        }
        let mut csv = Csv::new(header).comment(format!("reference {a}, candidate {b}"));
        for (k, t) in r.reference.times.iter().enumerate() {
            let mut row = vec![Cell::Num(*t)];
            for tr in [&r.reference, &r.candidate] {
                row.extend(tr.series.iter().map(|(_, v)| Cell::Num(v[k])));
            }
            csv.push(row);
        }
        out.table(format!("crosscheck_{label}.csv"), csv);
        summary.push(vec![label.into(), r.deviation_up.into(), r.deviation_down.unwrap_or(f64::NAN).into(), r.max_deviation.into()]);
        values.insert(label.into(), json!(r.max_deviation));
        if r.max_deviation > 0.05 {
            out.warnings.push(format!("{label}: deviation {:.3} exceeds 5%", r.max_deviation));
        }
    }
    out.put("max_deviation", values);
    out.table("crosscheck_summary.csv", summary);
    Ok(out)
}
