//! Check reports, run summaries and the tolerances they are judged by.

use serde::{Deserialize, Deserializer, Serialize};

/// Tolerances used by the identity suites.
pub mod tol {
    /// Exact algebraic identities; multiplied by `1 + scale` per trial.
    pub const IDENTITY: f64 = 1e-12;
    /// Absolute tolerance for closed-form spot values against FD.
    pub const FD_SPOT: f64 = 1e-9;
    /// Relative tolerance of FD against polynomial derivative rules.
    pub const FD_POLY_REL: f64 = 1e-6;
    /// Relative tolerance of FD against the inverse derivative rule.
    pub const FD_INVERSE_REL: f64 = 1e-5;
    /// FD cross-checks inside composite identities; multiplied by `1 + scale`.
    pub const FD_COMPOSITE: f64 = 1e-9;
    /// Orthogonality tolerance on rotation inputs.
    pub const ORTHOGONAL: f64 = 1e-10;
    /// Accepted window for the remainder ratio under halving of the increment.
    pub const LINEARIZATION_RATIO: (f64, f64) = (3.5, 4.5);
}

/// Outcome of one named identity over a number of trials.
///
/// `max_abs_err` is the worst per-trial error after dividing by that
/// trial's scale factor, so `pass` is always `max_abs_err <= tol`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: u64,
    /// Non-finite errors serialize as `null` and read back as infinity.
    #[serde(deserialize_with = "err_or_infinity")]
    pub max_abs_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub seed: u64,
}

impl CheckReport {
    /// One-line human summary.
    pub fn line(&self) -> String {
        format!(
            "[{}] {:<44} trials={:<5} err={:.3e} tol={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.trials,
            self.max_abs_err,
            self.tol
        )
    }
}

fn err_or_infinity<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

/// Accumulates per-trial errors into a [`CheckReport`].
#[derive(Clone, Debug)]
pub struct Check {
    name: String,
    seed: u64,
    tol: f64,
    trials: u64,
    worst: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, seed: u64, tol: f64) -> Self {
        Check {
            name: name.into(),
            seed,
            tol,
            trials: 0,
            worst: 0.0,
        }
    }

    /// Records `err` judged against `tol * scale`. A non-finite error
    /// poisons the check.
    pub fn record(&mut self, err: f64, scale: f64) {
        self.trials += 1;
        let scaled = err / scale;
        if !scaled.is_finite() {
            self.worst = f64::INFINITY;
        } else if scaled > self.worst {
            self.worst = scaled;
        }
    }

    /// Records an error relative to `1 + scale`.
    pub fn record_scaled(&mut self, err: f64, scale: f64) {
        self.record(err, 1.0 + scale);
    }

    pub fn record_abs(&mut self, err: f64) {
        self.record(err, 1.0);
    }

    pub fn finish(self) -> CheckReport {
        CheckReport {
            pass: self.worst <= self.tol,
            name: self.name,
            trials: self.trials,
            max_abs_err: self.worst,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

/// All reports of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub reports: Vec<CheckReport>,
    pub all_pass: bool,
    /// Wall time is kept out of the serialized form so identical runs
    /// produce identical bytes.
    #[serde(skip)]
    pub wall_time_ms: u64,
}

impl RunSummary {
    pub fn new(reports: Vec<CheckReport>, wall_time_ms: u64) -> Self {
        let all_pass = reports.iter().all(|r| r.pass);
        RunSummary {
            reports,
            all_pass,
            wall_time_ms,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.reports.iter().filter(|r| !r.pass)
    }
}
