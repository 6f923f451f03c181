use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(specoarse::cli::run(std::env::args_os()))
}
