use std::process::ExitCode;

fn main() -> ExitCode {
    filippov_beb::cli::main()
}
