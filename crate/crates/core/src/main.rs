use std::process::ExitCode;

fn main() -> ExitCode {
    let code = hspec_core::cli::dispatch(std::env::args_os());
    ExitCode::from(code as u8)
}
