//! One function per CLI command, each producing a result table.

use crate::cli::config::{Command, ExperimentConfig};
use crate::cli::output::{Cell, Table, CHSH_COLUMNS, CURVE_COLUMNS};
use crate::error::Result;
use crate::oracle::{chsh_quantum, singlet_correlation};
use crate::phase::Angle;
use crate::register::{apply_cnot_to_records, Bit, TrialRecord, VirtualRegister};
use crate::signal::conditional_same_color_probability;
use crate::stats::{chsh_classical, correlation_curve, ChshAngles};

pub const INIT_COLUMNS: &[&str] = &[
    "qubit",
    "alpha",
    "trials",
    "accepted",
    "acceptance_rate",
    "p_bit0",
    "p_bit0_analytic",
    "stderr",
];

pub const GATES_COLUMNS: &[&str] = &[
    "control",
    "target",
    "alpha_target",
    "records",
    "p_target0_before",
    "p_target0_after",
    "flipped",
];

pub const COMPARE_COLUMNS: &[&str] = &[
    "delta_alpha",
    "m_analytic",
    "m_estimated",
    "stderr",
    "n",
    "m_quantum",
];

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    match cfg.command {
        Command::Curve => curve(cfg),
        Command::Chsh => chsh(cfg),
        Command::Init => init(cfg),
        Command::Gates => gates(cfg),
        Command::Compare => compare(cfg),
    }
}

fn angles(cfg: &ExperimentConfig) -> Result<Vec<Angle>> {
    cfg.resolved_angles().into_iter().map(Angle::new).collect()
}

fn curve(cfg: &ExperimentConfig) -> Result<Table> {
    let points = correlation_curve(&cfg.phase_model, &angles(cfg)?, cfg.trials, cfg.workers)?;
    let mut table = Table::new(CURVE_COLUMNS);
    for p in points {
        table.push(vec![
            p.delta.radians().into(),
            p.analytic.into(),
            p.estimated.mean.into(),
            p.estimated.stderr.into(),
            p.estimated.n.into(),
        ]);
    }
    Ok(table)
}

fn compare(cfg: &ExperimentConfig) -> Result<Table> {
    let points = correlation_curve(&cfg.phase_model, &angles(cfg)?, cfg.trials, cfg.workers)?;
    let mut table = Table::new(COMPARE_COLUMNS);
    for p in points {
        // sign flipped so both columns read +1 at zero offset
        let m_quantum = -singlet_correlation(Angle::ZERO, p.delta);
        table.push(vec![
            p.delta.radians().into(),
            p.analytic.into(),
            p.estimated.mean.into(),
            p.estimated.stderr.into(),
            p.estimated.n.into(),
            m_quantum.into(),
        ]);
    }
    Ok(table)
}

fn chsh(cfg: &ExperimentConfig) -> Result<Table> {
    let a = angles(cfg)?;
    let settings = ChshAngles::new(a[0], a[1], a[2], a[3]);
    let r = chsh_classical(
        &cfg.phase_model,
        settings,
        cfg.trials,
        cfg.sampling,
        cfg.workers,
    )?;
    let s_quantum = chsh_quantum(settings.a1, settings.a2, settings.b1, settings.b2);
    let ratio = s_quantum.abs() / r.s_value.abs();
    let mut row: Vec<Cell> = a.iter().map(|x| x.radians().into()).collect();
    row.extend(r.terms.iter().map(|t| Cell::from(t.mean)));
    row.extend([r.s_value, r.s_stderr, s_quantum, ratio].map(Cell::from));
    let mut table = Table::new(CHSH_COLUMNS);
    table.push(row);
    Ok(table)
}

fn register_records(cfg: &ExperimentConfig) -> Result<(Vec<Angle>, Vec<TrialRecord>)> {
    let a = angles(cfg)?;
    let mut reg = VirtualRegister::balanced(&a, cfg.signal_index, cfg.phase_model.stream()?)?;
    let records = reg.initialize_par(cfg.trials, cfg.workers)?;
    Ok((a, records))
}

fn fraction_zero(records: &[TrialRecord], qubit: usize) -> f64 {
    let zeros = records
        .iter()
        .filter(|r| r.bits[qubit] == Bit::Zero)
        .count();
    zeros as f64 / records.len() as f64
}

fn init(cfg: &ExperimentConfig) -> Result<Table> {
    let (a, records) = register_records(cfg)?;
    let accepted = records.len();
    let rate = accepted as f64 / cfg.trials as f64;
    let signal_alpha = a[cfg.signal_index];
    let mut table = Table::new(INIT_COLUMNS);
    for (k, &alpha) in a.iter().enumerate() {
        let p = fraction_zero(&records, k);
        let analytic = conditional_same_color_probability((alpha - signal_alpha).radians())?;
        let stderr = (p * (1.0 - p) / accepted as f64).sqrt();
        table.push(vec![
            k.into(),
            alpha.radians().into(),
            cfg.trials.into(),
            accepted.into(),
            rate.into(),
            p.into(),
            analytic.into(),
            stderr.into(),
        ]);
    }
    Ok(table)
}

fn gates(cfg: &ExperimentConfig) -> Result<Table> {
    let (a, records) = register_records(cfg)?;
    let control = cfg.control.unwrap_or(cfg.signal_index);
    let mut table = Table::new(GATES_COLUMNS);
    for target in (0..a.len()).filter(|&t| t != control) {
        let after = apply_cnot_to_records(&records, control, target)?;
        let flipped = records
            .iter()
            .zip(&after)
            .filter(|(b, f)| b.bits[target] != f.bits[target])
            .count();
        table.push(vec![
            control.into(),
            target.into(),
            a[target].radians().into(),
            records.len().into(),
            fraction_zero(&records, target).into(),
            fraction_zero(&after, target).into(),
            flipped.into(),
        ]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::parse_config;

    fn run(text: &str) -> Table {
        run_experiment(&parse_config(text).unwrap()).unwrap()
    }

    #[test]
    fn curve_anchor_rows() {
        let t = run("command = curve\nangles = 0, pi/2, pi\ntrials = 1e4\nseed = 42");
        assert_eq!(t.rows.len(), 3);
        let analytic: Vec<_> = t.rows.iter().map(|r| r[1]).collect();
        assert_eq!(analytic[0], Cell::Float(1.0));
        assert_eq!(analytic[2], Cell::Float(-1.0));
        match analytic[1] {
            Cell::Float(x) => assert!(x.abs() < 1e-15),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn init_signal_row_is_all_green() {
        let t = run("command = init\nangles = 0, pi/4, pi\ntrials = 20000\nseed = 1");
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[0][5], Cell::Float(1.0));
        assert_eq!(t.rows[2][5], Cell::Float(0.0));
        assert_eq!(t.rows[1][6], Cell::Float(0.75));
    }

    #[test]
    fn gates_with_signal_control_never_flip() {
        let t = run("command = gates\nangles = 0, 1, 2\ntrials = 5000\nseed = 3");
        assert_eq!(t.rows.len(), 2);
        for row in &t.rows {
            assert_eq!(row[6], Cell::UInt(0));
            assert_eq!(row[4], row[5]);
        }
    }

    #[test]
    fn gates_with_balanced_control_flip_when_red() {
        let t = run("command = gates\nangles = 0, pi, 0\ncontrol = 1\ntrials = 5000\nseed = 3");
        // qubit 1 is always red on accepted trials, so every target flips
        for row in &t.rows {
            assert_eq!(row[3], row[6]);
        }
    }

    #[test]
    fn compare_quantum_column() {
        let t = run("command = compare\nangles = 0, pi/2, pi\ntrials = 1000");
        let q: Vec<f64> = t
            .rows
            .iter()
            .map(|r| match r[5] {
                Cell::Float(x) => x,
                _ => unreachable!(),
            })
            .collect();
        assert!((q[0] - 1.0).abs() < 1e-12);
        assert!(q[1].abs() < 1e-12);
        assert!((q[2] + 1.0).abs() < 1e-12);
    }
}
