// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde_json::json;

use crate::compiler::{compile, CostReport, LoweringRequest, Scheme};

use super::{fidelity, sample_counts, simulate_density, simulate_state, NoiseModel, SimError};

pub const CSV_HEADER: &str = "length,scheme,p,k_set,ideal_prob,noisy_prob,fidelity,sx,rz,cx,depth";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    /// Rows cover lengths `0..=max_length`.
    pub max_length: usize,
    pub noise: Option<NoiseModel>,
    pub shots: u64,
    /// Row `i` samples with seed `seed + i`.
    pub seed: u64,
    pub optimize: bool,
}

impl SweepOptions {
    pub fn new(max_length: usize) -> Self {
        Self {
            max_length,
            noise: None,
            shots: 8192,
            seed: 0,
            optimize: true,
        }
    }

    pub fn with_noise(mut self, noise: NoiseModel, shots: u64, seed: u64) -> Self {
        self.noise = Some(noise);
        self.shots = shots;
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub length: usize,
    pub scheme: Scheme,
    pub p: u32,
    pub k_set: Vec<u32>,
    /// Exact acceptance of the compiled circuit.
    pub ideal_prob: f64,
    /// Fraction of accepting shots under noise, readout included.
    pub noisy_prob: Option<f64>,
    /// Fidelity of the noisy pre-measurement state against the ideal one.
    pub fidelity: Option<f64>,
    pub cost: CostReport,
}

/// Formats `x` with 12 significant digits.
pub(crate) fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..12).contains(&e) {
        format!("{:.*}", (11 - e) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

impl SweepRow {
    fn k_joined(&self) -> String {
        self.k_set.iter().map(u32::to_string).collect::<Vec<_>>().join(";")
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(sig12).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.length,
            self.scheme,
            self.p,
            self.k_joined(),
            sig12(self.ideal_prob),
            opt(self.noisy_prob),
            opt(self.fidelity),
            self.cost.sx,
            self.cost.rz,
            self.cost.cx,
            self.cost.depth
        )
    }

    pub fn to_json(&self) -> String {
        json!({
            "length": self.length,
            "scheme": self.scheme.as_str(),
            "p": self.p,
            "k_set": self.k_set,
            "ideal_prob": self.ideal_prob,
            "noisy_prob": self.noisy_prob,
            "fidelity": self.fidelity,
            "sx": self.cost.sx,
            "rz": self.cost.rz,
            "cx": self.cost.cx,
            "depth": self.cost.depth,
        })
        .to_string()
    }
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv());
        s.push('\n');
    }
    s
}

pub fn to_json_lines(rows: &[SweepRow]) -> String {
    rows.iter().map(|r| r.to_json() + "\n").collect()
}

fn row(template: &LoweringRequest, opts: &SweepOptions, length: usize) -> Result<SweepRow, SimError> {
    let req = template.with_length(length);
    let compiled = compile(&req, opts.optimize)?;
    let exact = simulate_state(&compiled.circuit)?;
    let (noisy_prob, fid) = match &opts.noise {
        None => (None, None),
        Some(noise) => {
            let rho = simulate_density(&compiled.circuit, noise)?;
            let seed = opts.seed.wrapping_add(length as u64);
            let counts = sample_counts(&rho.outcome_probs(&compiled.circuit), noise, opts.shots, seed)?;
            (Some(counts.all_zero_frequency()), Some(fidelity(&exact.state, &rho)?))
        }
    };
    Ok(SweepRow {
        length,
        scheme: req.scheme(),
        p: req.p(),
        k_set: req.multipliers().to_vec(),
        ideal_prob: exact.acceptance(),
        noisy_prob,
        fidelity: fid,
        cost: compiled.report,
    })
}

/// One row per length in `0..=max_length`, computed in parallel and
/// returned in length order.
pub fn sweep(template: &LoweringRequest, opts: &SweepOptions) -> Result<Vec<SweepRow>, SimError> {
    if opts.noise.is_some() && opts.shots == 0 {
        return Err(SimError::NoShots);
    }
    (0..=opts.max_length)
        .into_par_iter()
        .map(|l| row(template, opts, l))
        .collect()
}
