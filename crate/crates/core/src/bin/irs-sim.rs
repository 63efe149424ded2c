use std::process::ExitCode;

use vanet_irs::cli::{self, Environment};

fn main() -> ExitCode {
    ExitCode::from(cli::main(std::env::args_os(), &Environment::from_process()))
}
