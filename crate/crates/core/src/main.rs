use std::process::ExitCode;

fn main() -> ExitCode {
    let code = loghankel::cli::run(std::env::args_os());
    ExitCode::from(code)
}
