//! Runs the identity suite and prints the table; `--json` prints JSON instead.

use phasecrt::suite::{run_suite, Tolerance};

fn main() {
    let json = std::env::args().any(|a| a == "--json");
    let tol = Tolerance::from_env().unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    let report = run_suite(&[6, 7, 15], tol).expect("valid dimensions");
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    eprintln!("{:.3} s", report.duration.as_secs_f64());
    std::process::exit(i32::from(report.has_failures()));
}
