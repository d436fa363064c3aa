use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use conbandit::montecarlo::{replication_rng, sweep};
use conbandit::{algorithms, McSettings, RunOptions, SweepResult};

use crate::config::{ExperimentConfig, InstanceDesc};
use crate::output::{to_csv, to_json, trace_lines, write_atomic};
use crate::presets::PRESETS;
use crate::report;

/// Runs the sweep and writes CSV (plus JSON and traces when requested).
///
/// Nothing is written unless every cell completed. CSV goes to `stdout`
/// when no output path is configured.
pub fn cmd_run(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<SweepResult> {
    let settings = McSettings {
        runs: config.runs,
        threads: config.threads,
        sampling: config.sampling,
    };
    let result = sweep(
        &config.instance,
        &config.instance_id,
        &config.algorithms,
        &config.horizons,
        config.seed,
        &settings,
    )?;

    let traces = match &config.trace {
        Some(_) => Some(collect_traces(config, &result)?),
        None => None,
    };

    let csv = to_csv(&result.estimates);
    match &config.out {
        Some(path) => write_file(path, csv.as_bytes())?,
        None => stdout.write_all(csv.as_bytes())?,
    }
    if let Some(path) = &config.json {
        let doc = serde_json::to_string_pretty(&to_json(config, &result))?;
        write_file(path, doc.as_bytes())?;
    }
    if let (Some(path), Some(text)) = (&config.trace, traces) {
        write_file(path, text.as_bytes())?;
    }
    Ok(result)
}

// Replication 0 of every cell, re-run with tracing on.
fn collect_traces(config: &ExperimentConfig, result: &SweepResult) -> Result<String> {
    let options = RunOptions {
        sampling: config.sampling,
        trace: true,
    };
    let mut text = String::new();
    for est in &result.estimates {
        let mut rng = replication_rng(est.seed, 0);
        let out = algorithms::run(est.algorithm, &config.instance, est.horizon, &mut rng, options)?;
        text.push_str(&trace_lines(
            est.algorithm,
            est.horizon,
            out.trace.as_deref().unwrap_or_default(),
        ));
    }
    Ok(text)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    write_atomic(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Writes the analysis report for the configured instance.
pub fn cmd_analyze(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<()> {
    let r = report::analyze(&config.instance_id, &config.instance)
        .with_context(|| format!("analysing {}", config.instance_id))?;
    let text = report::to_toml(&r);
    match &config.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

/// Prints every preset as a loadable `[instance]` file, headed by comments.
pub fn cmd_presets(stdout: &mut dyn Write) -> Result<()> {
    #[derive(serde::Serialize)]
    struct Entry {
        instance: InstanceDesc,
    }
    for p in PRESETS {
        let entry = Entry {
            instance: InstanceDesc::from_instance(p.name, &p.instance()),
        };
        writeln!(stdout, "# {}: {}", p.name, p.summary)?;
        writeln!(stdout, "# default runs: {}", p.default_runs)?;
        writeln!(stdout, "{}", toml::to_string(&entry)?)?;
    }
    Ok(())
}
