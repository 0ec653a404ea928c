use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fvpg_cli::run(std::env::args_os()))
}
