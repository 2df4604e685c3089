use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cliffmech_cli::run(std::env::args_os()))
}
