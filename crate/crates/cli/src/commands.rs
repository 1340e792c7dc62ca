use std::fmt::Write as _;

use serde_json::json;
use vpl_core::constants::PUBLISHED_RESONANCE;
use vpl_core::fiber::{derive_drive, design_pulse, DriveParams};
use vpl_core::kernel::response_r;
use vpl_core::spectrum::{
    find_resonance, n_max, rate_full_with, rate_weak, sweep, symmetric_grid, total_photons,
};
use vpl_core::verify::run_suite;
use vpl_core::{KernelVariant, NormalizedFrequency, SweepParameter, SweepSpec};

use crate::config::{Format, RunConfig};
use crate::table::{emit, json_document, render, Cell, Table};
use crate::CliError;

/// Human-readable summary: stdout when the table goes to a file, stderr
/// when the table itself is on stdout.
fn note(config: &RunConfig, text: &str) {
    if config.output.is_some() {
        print!("{text}");
    } else {
        eprint!("{text}");
    }
}

fn drive(config: &RunConfig) -> Result<DriveParams, CliError> {
    let d = derive_drive(&config.fiber())?;
    Ok(match config.nu {
        Some(nu) => d.with_nu(nu)?,
        None => d,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), |v| format!("{v:.6}"))
}

pub fn spectrum(config: &RunConfig) -> Result<(), CliError> {
    let d = drive(config)?;
    let opts = config.spectrum_options();
    let factor = if opts.two_end { 2.0 } else { 1.0 };
    let mut table = Table::new(["x", "rate_weak", "rate_full", "enhancement"]);
    for x in symmetric_grid(opts.grid_points)? {
        let full = rate_full_with(x, d.nu, opts.variant, &opts.floor)?;
        table.push(vec![
            x.value().into(),
            (factor * rate_weak(x, d.nu)).into(),
            (factor * full.value).into(),
            full.enhancement().into(),
        ]);
    }
    let summary = total_photons(d.nu, d.gamma_over_omega0(), config.mode, &opts)?;

    let mut text = String::new();
    writeln!(text, "nu = {:.6e}", d.nu).unwrap();
    writeln!(text, "a = {:.6e} m", d.a).unwrap();
    writeln!(text, "Gamma = {:.6e} 1/s", d.gamma).unwrap();
    writeln!(text, "peak at x = {:.6}", summary.peak_frequency.value()).unwrap();
    writeln!(text, "FWHM = {} omega0", fmt_opt(summary.fwhm)).unwrap();
    writeln!(text, "photons per pulse = {:.6e}", summary.total_photons).unwrap();
    if summary.saturated {
        writeln!(text, "resonance saturation: denominator floor reached").unwrap();
    }
    note(config, &text);

    let summary = json!({ "drive": d, "emission": summary });
    emit(config, &render(config, summary, &table))
}

pub fn design(config: &RunConfig) -> Result<(), CliError> {
    let fiber = config.fiber();
    let p = design_pulse(&fiber)?;
    let d = drive(config)?;
    let rendered = match config.format {
        Format::Json => json_document(config, json!({ "design": p, "drive": d }), None),
        Format::Csv => {
            let mut t = String::new();
            writeln!(t, "I_opt = {:.6e} W/m^2", p.intensity_opt).unwrap();
            writeln!(t, "E_opt = {:.6e} J", p.energy_opt).unwrap();
            writeln!(t, "W_opt = {:.6e} W", p.power_opt).unwrap();
            writeln!(t, "duration = {:.6e} s", p.duration).unwrap();
            writeln!(t, "N0 = {:.6e}", p.n0_quanta).unwrap();
            writeln!(t, "nu at I_opt = {:.6}", p.nu_at_opt).unwrap();
            writeln!(t, "nu at configured drive = {:.6e}", d.nu).unwrap();
            t
        }
    };
    emit(config, &rendered)
}

pub fn resonance(config: &RunConfig) -> Result<(), CliError> {
    let fiber = config.fiber();
    let g = derive_drive(&fiber)?.gamma_over_omega0();
    let mut table = Table::new(["variant", "nu0", "r1", "intensity_at_nu0", "n_max"]);
    let mut variants: Vec<KernelVariant> = vec![config.kernel_variant];
    variants.extend(
        KernelVariant::ALL
            .iter()
            .filter(|&&v| v != config.kernel_variant),
    );
    let mut selected = 0.0;
    for v in variants {
        let nu0 = find_resonance(v)?;
        if v == config.kernel_variant {
            selected = nu0;
        }
        let r1 = response_r(NormalizedFrequency::BAND_CENTER, v)?.re;
        table.push(vec![
            Cell::Text(v.name().into()),
            nu0.into(),
            r1.into(),
            fiber.intensity_for_nu(nu0).into(),
            n_max(nu0, g).into(),
        ]);
    }
    note(
        config,
        &format!(
            "nu0 ({}) = {selected:.6}, published {PUBLISHED_RESONANCE} ({:+.3}%)\n",
            config.kernel_variant,
            100.0 * (selected / PUBLISHED_RESONANCE - 1.0)
        ),
    );
    let summary = json!({ "variant": config.kernel_variant, "nu0": selected });
    emit(config, &render(config, summary, &table))
}

pub fn run_sweep(config: &RunConfig) -> Result<(), CliError> {
    if config.sweep.is_empty() {
        return Err(CliError::Validation(
            "no sweep axes: pass --axis or set `sweep` in the config".into(),
        ));
    }
    let spec = SweepSpec {
        axes: config.sweep.clone(),
        base: config.fiber(),
        nu_override: config.nu,
        mode: config.mode,
        options: config.spectrum_options(),
    };
    let rows = sweep(&spec)?;
    // ν is reported once, as an axis column when it is swept.
    let nu_swept = spec.axes.iter().any(|a| a.param == SweepParameter::Nu);
    let mut columns: Vec<String> = spec.axes.iter().map(|a| a.param.name().into()).collect();
    if !nu_swept {
        columns.push("nu".into());
    }
    columns.extend(
        ["n_photons", "yield", "peak", "fwhm", "saturated"]
            .iter()
            .map(|s| s.to_string()),
    );
    let mut table = Table::new(columns);
    for r in &rows {
        let mut cells: Vec<Cell> = r.parameters.iter().map(|&(_, v)| v.into()).collect();
        if !nu_swept {
            cells.push(r.nu.into());
        }
        cells.extend([
            r.n_photons.into(),
            r.yield_.into(),
            r.peak.into(),
            r.fwhm.into(),
            r.saturated.into(),
        ]);
        table.push(cells);
    }
    let best = rows.iter().enumerate().fold(0, |b, (i, r)| {
        if r.n_photons > rows[b].n_photons {
            i
        } else {
            b
        }
    });
    let b = &rows[best];
    let at: Vec<String> = b
        .parameters
        .iter()
        .map(|(p, v)| format!("{} = {v:.6e}", p.name()))
        .collect();
    note(
        config,
        &format!(
            "{} rows; max photons per pulse {:.6e} at {} (nu = {:.6e})\n",
            rows.len(),
            b.n_photons,
            at.join(", "),
            b.nu
        ),
    );
    let summary = json!({ "rows": rows.len(), "argmax": best });
    emit(config, &render(config, summary, &table))
}

/// Returns whether every gated check passed.
pub fn verify(config: &RunConfig) -> Result<bool, CliError> {
    let report = run_suite(&config.suite());
    let passed = report.passed();
    let rendered = match config.format {
        Format::Json => json_document(config, json!({ "passed": passed, "report": report }), None),
        Format::Csv => {
            let mut t = String::new();
            for c in &report.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                writeln!(
                    t,
                    "[{tag}] {:>2} {} ({:.2} s): {}",
                    c.id, c.name, c.seconds, c.detail
                )
                .unwrap();
            }
            writeln!(t, "\npublished vs computed:").unwrap();
            for l in &report.ledger {
                writeln!(
                    t,
                    "  {}: published {} | computed {} | {}",
                    l.quantity, l.published, l.computed, l.note
                )
                .unwrap();
            }
            let n = report.checks.iter().filter(|c| c.passed).count();
            writeln!(t, "\n{n}/{} checks passed", report.checks.len()).unwrap();
            t
        }
    };
    emit(config, &rendered)?;
    Ok(passed)
}
