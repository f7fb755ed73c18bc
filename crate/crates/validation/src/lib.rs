//! Reporting helpers for the acceptance suite in `tests/acceptance.rs`.

use std::io::Write;
use std::time::{Duration, Instant};

/// Result of one acceptance check.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u32,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl Verdict {
    /// The single report line, e.g. `criterion 3 PASS a_fit=1.2 [12.0 s, limit 1800 s]`.
    pub fn line(&self) -> String {
        let budget = match self.limit {
            Some(l) => format!("[{:.1} s, limit {} s]", self.elapsed.as_secs_f64(), l.as_secs()),
            None => format!("[{:.1} s]", self.elapsed.as_secs_f64()),
        };
        format!(
            "criterion {} {} {} {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail,
            budget
        )
    }
}

/// Times `check`, which returns `(property holds, detail)`, and folds the
/// runtime limit into the verdict.
pub fn run_criterion<F>(id: u32, limit: Option<Duration>, check: F) -> Verdict
where
    F: FnOnce() -> (bool, String),
{
    let start = Instant::now();
    let (ok, detail) = check();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let detail = if in_time { detail } else { format!("{detail} (over time)") };
    Verdict {
        id,
        pass: ok && in_time,
        detail,
        elapsed,
        limit,
    }
}

/// Writes the verdict line past the test harness's output capture and
/// panics on failure.
pub fn settle(v: Verdict) {
    let _ = writeln!(std::io::stdout().lock(), "{}", v.line());
    assert!(v.pass, "{}", v.line());
}
