use std::process::ExitCode;

use fanostab_core::acceptance::{run_all_with, SuiteConfig};

fn main() -> ExitCode {
    let results = run_all_with(&SuiteConfig::default(), |r| println!("{r}"));
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
