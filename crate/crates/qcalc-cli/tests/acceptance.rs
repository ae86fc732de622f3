use std::process::ExitCode;

use qcalc_cli::acceptance::{criteria, run};

fn main() -> ExitCode {
    let mut all = true;
    for c in criteria() {
        let o = run(&c);
        let status = if o.pass() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {:>2}: {status}  {}  ({} checks, {:.1} s of {} s)",
            c.number,
            c.title,
            o.checks.len(),
            o.elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if !o.checks_pass() {
            line += &format!("  failed: {}", o.failed_ids().join(", "));
        }
        if !o.within_budget() {
            line += "  over time budget";
        }
        println!("{line}");
        all &= o.pass();
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
