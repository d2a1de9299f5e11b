//! Closed-form cost models for single-qubit rotation synthesis and the
//! measured round-count sweep that compares them against the recursive
//! delegation.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::protocol::{delegate_rz_arbitrary, ClientState, KeySource};
use crate::statevector::Statevector;

/// One row of the cost comparison at a fixed precision.
#[derive(Debug, Clone, PartialEq)]
pub struct CostPoint {
    pub epsilon: f64,
    /// (log2(π/ε))² — worst-case rounds of the recursive delegation.
    pub recursive_bound: f64,
    /// ln(1/ε)^3.97 — Solovay-Kitaev sequence length model.
    pub sk_cost: f64,
    /// 3·log2(1/ε) — Ross-Selinger leading term (lower-order term omitted).
    pub gridsynth_cost: f64,
    /// Max transcript rounds over the sampled angles, when measured.
    pub measured_rounds: Option<usize>,
}

fn check_unit_interval(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    Ok(())
}

/// Solovay-Kitaev cost model ln(1/ε)^c with c = 3.97.
pub fn sk_cost(epsilon: f64) -> Result<f64> {
    check_unit_interval(epsilon)?;
    Ok((1.0 / epsilon).ln().powf(3.97))
}

/// Ross-Selinger (gridsynth) T-count model, leading term only:
/// 3·log2(1/ε). The omitted +O(log2 log2(1/ε)) term leaves this a few
/// percent below published counts.
pub fn gridsynth_cost(epsilon: f64) -> Result<f64> {
    check_unit_interval(epsilon)?;
    Ok(3.0 * (1.0 / epsilon).log2())
}

/// Round bound of the recursive delegation: (log2(π/ε))².
pub fn recursive_bound(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < PI) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, pi), got {epsilon}"
        )));
    }
    Ok((PI / epsilon).log2().powi(2))
}

fn measure_rounds(epsilon: f64, samples: usize, mut rng: ChaCha8Rng) -> Result<usize> {
    let mut worst = 0usize;
    // one working qubit plus the ancilla; the round count is
    // state-independent, so |0⟩ input is fine
    for _ in 0..samples {
        let theta: f64 = rng.gen_range(-PI..PI);
        let mut client = ClientState::new(
            Statevector::zero(2),
            1,
            KeySource::from_rng(ChaCha8Rng::seed_from_u64(rng.gen())),
        )?;
        let (_, transcript) = delegate_rz_arbitrary(&mut client, theta, epsilon, 0)?;
        worst = worst.max(transcript.total_rounds());
    }
    Ok(worst)
}

/// Runs the sweep: for each ε (sorted descending), the three analytic
/// columns plus the worst measured round count over `theta_samples` random
/// angles delegated through the protocol. Rows are computed independently,
/// each with an RNG stream derived from (seed, row index), so the output is
/// deterministic and identical with and without the parallel feature.
pub fn sweep(eps_list: &[f64], theta_samples: usize, seed: u64) -> Result<Vec<CostPoint>> {
    if eps_list.is_empty() {
        return Err(Error::InvalidParameter("epsilon list is empty".into()));
    }
    let mut sorted: Vec<f64> = eps_list.to_vec();
    for &e in &sorted {
        // sweep rows must satisfy every model's domain; delegation also
        // needs ε ≤ π/2
        if !(e > 0.0 && e < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sweep epsilon must lie in (0, 1), got {e}"
            )));
        }
    }
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite"));

    let row = |(idx, &epsilon): (usize, &f64)| -> Result<CostPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64 + 1);
        let measured = if theta_samples > 0 {
            Some(measure_rounds(epsilon, theta_samples, rng)?)
        } else {
            None
        };
        Ok(CostPoint {
            epsilon,
            recursive_bound: recursive_bound(epsilon)?,
            sk_cost: sk_cost(epsilon)?,
            gridsynth_cost: gridsynth_cost(epsilon)?,
            measured_rounds: measured,
        })
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        sorted.par_iter().enumerate().map(row).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sorted.iter().enumerate().map(row).collect()
    }
}

/// CSV header comment explaining the documented gridsynth gap.
pub const CSV_PREAMBLE: &str = "# gridsynth_cost is the leading term 3*log2(1/eps); \
the omitted O(log2 log2(1/eps)) term leaves it ~4% below published counts at eps=1e-10";

/// Serializes sweep rows as CSV: preamble comment, header, then one row per
/// ε with 12-significant-digit round-trip precision.
pub fn to_csv(points: &[CostPoint]) -> String {
    let mut out = String::new();
    out.push_str(CSV_PREAMBLE);
    out.push('\n');
    out.push_str("epsilon,recursive_bound,sk_cost,gridsynth_cost,measured_rounds\n");
    for p in points {
        let measured = match p.measured_rounds {
            Some(r) => r.to_string(),
            None => String::new(),
        };
        out.push_str(&format!(
            "{:.11e},{:.11e},{:.11e},{:.11e},{}\n",
            p.epsilon, p.recursive_bound, p.sk_cost, p.gridsynth_cost, measured
        ));
    }
    out
}

/// Parses the CSV emitted by `to_csv` (comments and header skipped).
pub fn from_csv(text: &str) -> Result<Vec<CostPoint>> {
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("epsilon") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected 5 fields, got {}", fields.len()),
            });
        }
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad number `{s}`"),
            })
        };
        points.push(CostPoint {
            epsilon: num(fields[0])?,
            recursive_bound: num(fields[1])?,
            sk_cost: num(fields[2])?,
            gridsynth_cost: num(fields[3])?,
            measured_rounds: if fields[4].is_empty() {
                None
            } else {
                Some(fields[4].parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("bad round count `{}`", fields[4]),
                })?)
            },
        });
    }
    Ok(points)
}
