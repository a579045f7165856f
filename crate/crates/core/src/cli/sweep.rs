//! Parameter sweeps, evaluated in parallel and written in grid order.

use std::io::Write;

use rayon::prelude::*;

use super::config::{ConfigError, Mode, RunConfig};
use super::output::RecordStream;
use super::record::{run_point, ResultRecord};

/// Runs every grid point of `config.sweep` and streams records to `out`.
///
/// Points are computed a chunk at a time; each finished chunk is written and
/// flushed before the next starts. A point whose inputs are rejected gets an
/// `invalid` record and the sweep continues.
pub fn run_sweep(config: &RunConfig, out: &mut dyn Write) -> Result<Vec<ResultRecord>, ConfigError> {
    let spec = config.sweep.as_ref().ok_or_else(|| ConfigError::Invalid("sweep mode needs a sweep range".into()))?;
    spec.validate()?;
    let mut base = config.clone();
    base.mode = Mode::from(spec.target);
    base.sweep = None;
    base.out = None;
    if base.mode == Mode::Driven && base.spectrum.is_none() {
        base.spectrum = Some(base.load_spectrum()?);
        base.force_spec = None;
    }
    match spec.param.as_str() {
        "a" => {
            base.a.get_or_insert(spec.from);
        }
        "eps" => {
            base.eps.get_or_insert(spec.from);
        }
        _ => {}
    }

    let values = spec.values();
    let chunk = (2 * rayon::current_num_threads()).max(1);
    let mut stream = RecordStream::new(out, config.format);
    let mut all = Vec::with_capacity(values.len());
    for block in values.chunks(chunk) {
        let records: Vec<ResultRecord> = block
            .par_iter()
            .map(|&v| {
                let point = match base.with_param(&spec.param, v) {
                    Ok(p) => p,
                    Err(e) => return ResultRecord::invalid(&base, e.to_string()),
                };
                run_point(&point).unwrap_or_else(|e| ResultRecord::invalid(&point, e.to_string()))
            })
            .collect();
        for r in &records {
            stream.push(r)?;
        }
        stream.flush()?;
        all.extend(records);
    }
    stream.finish()?;
    Ok(all)
}
