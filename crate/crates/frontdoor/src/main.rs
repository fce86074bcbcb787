use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = affmb::cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr(), &mut io::stdin().lock());
    ExitCode::from(code as u8)
}
