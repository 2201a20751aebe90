use std::process::ExitCode;

fn main() -> ExitCode {
    pinchwarp::run_cli(std::env::args_os())
}
