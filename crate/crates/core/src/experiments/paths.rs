//! Export of sample cumulative-quantity paths.

use super::batch::OrderSimulator;
use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::model::RatePath;
use crate::params::SimGrid;

/// Unconditional sample paths and the same draws conditioned on the target.
#[derive(Debug, Clone)]
pub struct PathSamples {
    pub unconditional: Vec<RatePath>,
    pub conditional: Vec<RatePath>,
}

pub fn sample_paths(cfg: &ExperimentConfig, n_samples: usize) -> Result<PathSamples> {
    cfg.validate()?;
    if n_samples == 0 {
        return Err(Error::InvalidConfig("samples must be >= 1".into()));
    }
    let sim = OrderSimulator::from_config(&ExperimentConfig {
        conditioned: false,
        ..cfg.clone()
    })?;
    let conditioner = crate::model::TerminalConditioner::new(&cfg.params, &cfg.grid);
    let mut unconditional = Vec::with_capacity(n_samples);
    let mut conditional = Vec::with_capacity(n_samples);
    for i in 0..n_samples as u64 {
        let path = sim.unconditional_rate_path(i);
        conditional.push(conditioner.apply(&path, &cfg.grid)?);
        unconditional.push(path);
    }
    Ok(PathSamples {
        unconditional,
        conditional,
    })
}

/// `time,path_0,...` with cumulative executed quantity per grid point.
pub fn write_paths_csv<W: std::io::Write>(
    writer: W,
    grid: &SimGrid,
    paths: &[RatePath],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["time".to_string()];
    header.extend((0..paths.len()).map(|k| format!("path_{k}")));
    w.write_record(&header)?;
    for (i, t) in grid.times().into_iter().enumerate() {
        let mut rec = vec![t.to_string()];
        rec.extend(paths.iter().map(|p| p.q_cum[i].to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
