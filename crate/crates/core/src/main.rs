use std::process::ExitCode;

fn main() -> ExitCode {
    instance_order::cli::main_with_args(std::env::args_os())
}
