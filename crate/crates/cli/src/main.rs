use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_seed = std::env::var(commutant_cli::SEED_ENV).ok();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = commutant_cli::run(std::env::args_os(), env_seed.as_deref(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
