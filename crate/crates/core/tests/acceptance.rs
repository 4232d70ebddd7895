//! Acceptance criteria: one line per criterion, with wall-clock limits.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nobody::suite::{
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
    criterion_8, criterion_9, removed_curve_case, CriterionReport, SuiteConfig,
};

struct Outcome {
    report: CriterionReport,
    elapsed: Duration,
    limit: Option<Duration>,
}

impl Outcome {
    fn ok(&self) -> bool {
        self.report.passed && self.limit.is_none_or(|l| self.elapsed <= l)
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut outcomes = Vec::new();

    let ((r1, mut runs), t) = timed(criterion_1);
    outcomes.push(Outcome {
        report: r1,
        elapsed: t,
        limit: secs(1),
    });
    let ((r2, runs2), t) = timed(criterion_2);
    outcomes.push(Outcome {
        report: r2,
        elapsed: t,
        limit: secs(1),
    });
    let ((r3, runs3, models), t) = timed(|| criterion_3(&cfg));
    outcomes.push(Outcome {
        report: r3,
        elapsed: t,
        limit: secs(60),
    });
    runs.extend(runs2);
    runs.extend(runs3);

    let (r, t) = timed(|| criterion_4(&runs));
    outcomes.push(Outcome {
        report: r,
        elapsed: t,
        limit: None,
    });
    let (r, t) = timed(|| criterion_5(&models, cfg.seed));
    outcomes.push(Outcome {
        report: r,
        elapsed: t,
        limit: secs(30),
    });
    let (r, t) = timed(|| criterion_6(&cfg));
    outcomes.push(Outcome {
        report: r,
        elapsed: t,
        limit: secs(30),
    });
    let (r, t) = timed(|| criterion_7(&cfg));
    outcomes.push(Outcome {
        report: r,
        elapsed: t,
        limit: secs(30),
    });
    let (r, t) = timed(|| criterion_8(&cfg));
    outcomes.push(Outcome {
        report: r,
        elapsed: t,
        limit: secs(120),
    });
    let (r, t) = timed(|| criterion_9(&runs));
    outcomes.push(Outcome {
        report: r,
        elapsed: t,
        limit: None,
    });
    let (r, t) = timed(removed_curve_case);
    outcomes.push(Outcome {
        report: r,
        elapsed: t,
        limit: secs(1),
    });

    let mut all = true;
    for o in &outcomes {
        let limit = o
            .limit
            .map_or("none".to_string(), |l| format!("{}s", l.as_secs()));
        println!(
            "criterion {:<2} {} {:<34} cases={:<6} time={:>8.3}s limit={:<5} {}",
            o.report.id,
            if o.ok() { "PASS" } else { "FAIL" },
            o.report.title,
            o.report.cases,
            o.elapsed.as_secs_f64(),
            limit,
            o.report.note
        );
        for f in o.report.failures.iter().take(10) {
            println!("    {f}");
        }
        all &= o.ok();
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
