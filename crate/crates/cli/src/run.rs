use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use cvqkd_core::eavesdropper::eve_score;
use cvqkd_core::protocol::{run_session, write_eve_transcript, write_session_transcript, SessionResult};
use cvqkd_core::seed::{derive_seed, tags};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::record::{AlarmCounts, ResultRecord, RunParameters};

/// Seed of repetition `rep`. A single-repetition run uses the root seed
/// itself; repetitions share seeds across sweep points so that points differ
/// only in the swept parameter.
pub fn session_seed(root: u64, repetitions: usize, rep: usize) -> u64 {
    if repetitions == 1 {
        root
    } else {
        derive_seed(root, tags::REPETITION, rep as u64)
    }
}

/// Where `--per-slot` output goes: `<dir>/<stem>.<id>.{slots.csv,eve.csv,keys.json}`.
#[derive(Debug, Clone)]
pub struct PerSlotSink {
    pub dir: PathBuf,
    pub stem: String,
}

impl PerSlotSink {
    pub fn beside(out: &Path) -> Self {
        PerSlotSink {
            dir: out.parent().map(Path::to_path_buf).unwrap_or_default(),
            stem: out
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "cvqkd".into()),
        }
    }

    fn path(&self, id: &str, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}.{}.{suffix}", self.stem, id.replace(['/', '='], "-")))
    }

    fn write(&self, id: &str, result: &SessionResult) -> Result<(), CliError> {
        let slots = self.path(id, "slots.csv");
        let f = fs::File::create(&slots).map_err(|e| CliError::io(&slots, e))?;
        write_session_transcript(std::io::BufWriter::new(f), result).map_err(|e| CliError::io(&slots, e))?;
        if !result.eve_records.is_empty() {
            let eve = self.path(id, "eve.csv");
            let f = fs::File::create(&eve).map_err(|e| CliError::io(&eve, e))?;
            write_eve_transcript(std::io::BufWriter::new(f), result).map_err(|e| CliError::io(&eve, e))?;
        }
        let keys = self.path(id, "keys.json");
        let body = serde_json::json!({
            "alice": result.alice_key.export(),
            "bob": result.bob_key.export(),
        });
        fs::write(&keys, format!("{body:#}\n")).map_err(|e| CliError::io(&keys, e))
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Runs every session of one parameter point and summarizes it.
pub fn run_point(
    config: &ExperimentConfig,
    experiment_id: &str,
    per_slot: Option<&PerSlotSink>,
) -> Result<ResultRecord, CliError> {
    let source = config.source.params()?;
    let attack = config.attack.as_ref();
    let reps = config.repetitions;
    let session_seeds: Vec<u64> = (0..reps).map(|r| session_seed(config.seed, reps, r)).collect();

    let mut kept = Vec::with_capacity(reps);
    let mut key_length = 0;
    let mut keys_agree = true;
    let mut alarmed = 0usize;
    let mut alarms = AlarmCounts::default();
    let mut etas = Vec::new();
    let mut gains = Vec::new();
    let mut thresholds = Vec::new();
    let mut rates = Vec::new();
    let mut eve = Vec::new();
    for (r, &seed) in session_seeds.iter().enumerate() {
        let session = config.session.to_session(seed);
        let result = run_session(&source, attack, &session)?;
        kept.push(result.kept_fraction());
        key_length += result.alice_key.len();
        keys_agree &= result.keys_agree();
        alarmed += usize::from(!result.monitor.alarms.is_empty());
        result.monitor.alarms.iter().for_each(|&a| alarms.add(a));
        etas.extend(result.monitor.inferred_eta);
        gains.extend(result.monitor.estimated_gain);
        thresholds.push(result.threshold);
        rates.push(result.effective_bit_rate);
        if attack.is_some() {
            eve.push(eve_score(&result, &result.eve_records));
        }
        if let Some(sink) = per_slot {
            let id = if reps == 1 { experiment_id.to_string() } else { format!("{experiment_id}/r{r}") };
            sink.write(&id, &result)?;
        }
    }

    Ok(ResultRecord {
        experiment_id: experiment_id.to_string(),
        seed: config.seed,
        session_seeds,
        repetitions: reps,
        parameters: RunParameters {
            source,
            num_slots: config.session.num_slots,
            samples_per_slot: config.session.samples_per_slot,
            threshold_policy: config.session.threshold_policy,
            rep_rate: config.session.rep_rate,
            eta: attack.map(|a| a.eta),
            g_e: attack.map(|a| a.g_e),
            tap_fraction: attack.map(|a| a.tap_fraction),
            delta_threshold: attack.and_then(|a| a.delta_threshold),
        },
        kept_fraction: mean(kept.into_iter()).unwrap_or(0.0),
        key_length,
        keys_agree,
        alarm_rate: alarmed as f64 / reps as f64,
        alarms,
        inferred_eta: mean(etas.into_iter()),
        estimated_gain: mean(gains.into_iter()),
        threshold: mean(thresholds.into_iter()).unwrap_or(f64::NAN),
        effective_bit_rate: mean(rates.into_iter()).unwrap_or(0.0),
        eve_accuracy: mean(eve.iter().map(|s| s.discrimination_accuracy)),
        eve_key_fraction: mean(eve.iter().map(|s| s.key_fraction_known)),
        per_slot: per_slot.is_some(),
    })
}

/// Runs the experiment (every sweep point in order) and returns its records.
pub fn run_experiment(config: &ExperimentConfig, per_slot: Option<&PerSlotSink>) -> Result<Vec<ResultRecord>, CliError> {
    match &config.sweep {
        None => Ok(vec![run_point(config, "simulate", per_slot)?]),
        Some(sweep) => config
            .points()
            .iter()
            .zip(&sweep.values)
            .enumerate()
            .map(|(i, (point, v))| run_point(point, &format!("sweep/{i}/{}={v}", sweep.parameter), per_slot))
            .collect(),
    }
}

/// Writes records as JSON lines.
pub fn write_records<W: Write>(mut w: W, records: &[ResultRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(w, "{}", r.to_json_line())?;
    }
    w.flush()
}
