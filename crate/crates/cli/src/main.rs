use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = toric_cy_cli::run(std::env::args());
    print!("{}", report.stdout());
    eprint!("{}", report.stderr());
    let _ = std::io::stdout().flush();
    ExitCode::from(report.exit_code as u8)
}
