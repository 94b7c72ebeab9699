//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::fs;
use std::process::{Command, ExitCode};
use std::time::Instant;

use tenderiv::report::{tol, CheckReport};
use tenderiv::suite;

const SEED: u64 = 42;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn judge(reports: Vec<CheckReport>, want_tol: impl Fn(&CheckReport) -> bool) -> Outcome {
    let mut bad: Vec<String> = reports.iter().filter(|r| !r.pass).map(CheckReport::line).collect();
    bad.extend(
        reports
            .iter()
            .filter(|r| !want_tol(r))
            .map(|r| format!("unexpected tolerance: {}", r.line())),
    );
    let worst = reports
        .iter()
        .map(|r| r.max_abs_err / r.tol.max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Outcome {
        pass: bad.is_empty() && !reports.is_empty(),
        detail: if bad.is_empty() {
            format!("{} reports, worst err/tol {worst:.2e}", reports.len())
        } else {
            bad.join("; ")
        },
    }
}

fn identity_tol(r: &CheckReport) -> bool {
    r.tol == tol::IDENTITY
}

fn iso_table() -> Outcome {
    let reports = suite::iso_roles(SEED, 200);
    let mut o = judge(reports.clone(), identity_tol);
    if reports.len() != 18 || reports.iter().any(|r| r.trials < 200) {
        o.pass = false;
        o.detail = format!("expected 18 reports of 200 trials, got {}", reports.len());
    }
    o
}

fn product_identities() -> Outcome {
    let mut reports = suite::ddot_identities(SEED, 500);
    reports.extend(suite::cross_via_seq(SEED, 500));
    reports.extend(suite::transpose_identities(SEED, 500));
    judge(reports, identity_tol)
}

fn derivative_oracle() -> Outcome {
    judge(suite::derivative_oracle(SEED, 300), |r| {
        r.tol == tol::FD_POLY_REL || r.tol == tol::FD_INVERSE_REL
    })
}

fn spot_values() -> Outcome {
    judge(vec![suite::spot_values(SEED, 1)], |r| r.tol == tol::FD_SPOT)
}

fn third_invariant_forms() -> Outcome {
    judge(vec![suite::i3_forms(SEED, 300)], identity_tol)
}

fn hamilton_cayley() -> Outcome {
    judge(vec![suite::hamilton_cayley(SEED, 1000)], identity_tol)
}

fn bridge() -> Outcome {
    judge(suite::bridge_suite(SEED, 200), |r| {
        r.tol == 0.0 || r.tol == tol::IDENTITY || r.tol == tol::FD_COMPOSITE
    })
}

fn basis_invariance() -> Outcome {
    judge(suite::basis_invariance(SEED, 100), identity_tol)
}

fn linearization() -> Outcome {
    let (lo, hi) = tol::LINEARIZATION_RATIO;
    judge(suite::linearization_order(SEED, 200), |r| r.tol == (hi - lo) / 2.0)
}

fn cli_determinism() -> Outcome {
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: e.to_string(),
            }
        }
    };
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("run{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_tenderiv"))
            .args(["identities", "--seed", "42", "--trials", "200", "--out"])
            .arg(&path)
            .env_remove("TENDERIV_SEED")
            .output();
        match status {
            Ok(o) if o.status.code() == Some(0) => {}
            Ok(o) => {
                return Outcome {
                    pass: false,
                    detail: format!("run {run} exited with {:?}", o.status.code()),
                }
            }
            Err(e) => {
                return Outcome {
                    pass: false,
                    detail: e.to_string(),
                }
            }
        }
        match fs::read(&path) {
            Ok(bytes) => outputs.push(bytes),
            Err(e) => {
                return Outcome {
                    pass: false,
                    detail: e.to_string(),
                }
            }
        }
    }
    let same = outputs[0] == outputs[1];
    Outcome {
        pass: same,
        detail: if same {
            format!("exit 0 twice, {} identical bytes", outputs[0].len())
        } else {
            "outputs differ".into()
        },
    }
}

fn main() -> ExitCode {
    let tolerances_ok = tol::IDENTITY == 1e-12
        && tol::FD_SPOT == 1e-9
        && tol::FD_POLY_REL == 1e-6
        && tol::FD_INVERSE_REL == 1e-5
        && tol::FD_COMPOSITE == 1e-9
        && tol::LINEARIZATION_RATIO == (3.5, 4.5);
    if !tolerances_ok {
        println!("FAIL tolerance constants differ from the acceptance thresholds");
        return ExitCode::FAILURE;
    }

    let criteria: [Criterion; 10] = [
        ("isotropic contraction roles, 18 cases", iso_table),
        ("double-product identities, 500 trials", product_identities),
        ("analytic vs finite-difference derivatives", derivative_oracle),
        ("exact spot values", spot_values),
        ("compact vs expanded third-invariant derivative", third_invariant_forms),
        ("Hamilton-Cayley residual, 1000 trials", hamilton_cayley),
        ("layout bridge", bridge),
        ("basis invariance, 100 bases", basis_invariance),
        ("linearization order", linearization),
        ("CLI determinism", cli_determinism),
    ];

    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2}. {name}: {} ({:.2} s)",
            if o.pass { "PASS" } else { "FAIL" },
            n + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
