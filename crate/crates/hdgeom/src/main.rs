use std::process::ExitCode;

fn main() -> ExitCode {
    hdgeom::cli::main()
}
