use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = nec_realize::cli::run(std::env::args_os());
    if !outcome.output.is_empty() {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(outcome.output.as_bytes());
    }
    if !outcome.diagnostics.is_empty() {
        eprintln!("{}", outcome.diagnostics.trim_end());
    }
    ExitCode::from(outcome.code as u8)
}
