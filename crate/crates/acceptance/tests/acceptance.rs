use std::process::ExitCode;

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if hierpin_acceptance::run(&selected) == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
