//! Library side of the `relucalc` command-line tool.
//!
//! Every command produces a CSV table (header row, reals with 17
//! significant digits). Exit codes: 0 success, 2 usage, 3 data or codec
//! error, 4 postcondition violation.

pub mod args;
pub mod commands;
mod error;
pub mod registry;

pub use args::{Cli, Command, Params};
pub use error::CliError;

/// Runs one command. The table text is returned together with a
/// postcondition failure, if any, so that callers can still print it.
pub fn run(command: &Command) -> (String, Result<(), CliError>) {
    match run_inner(command) {
        Ok((text, check)) => (text, check),
        Err(e) => (String::new(), Err(e)),
    }
}

fn run_inner(command: &Command) -> Result<(String, Result<(), CliError>), CliError> {
    use commands::*;
    Ok(match command {
        Command::Build { constructor, params } => {
            let (t, _) = build(constructor, params)?;
            (t.to_csv()?, Ok(()))
        }
        Command::Sweep { constructor, params } => {
            let (t, breached) = sweep(constructor, params)?;
            let text = emit(&t, params.out.as_deref())?;
            let check = if breached.is_empty() {
                Ok(())
            } else {
                Err(CliError::Postcondition(format!("error above eps in rows {breached:?}")))
            };
            (text, check)
        }
        Command::Codec { file, params } => {
            let r = codec(file, params)?;
            let v = codec_violations(&r, params.eps.unwrap_or(f64::NAN));
            let check = if v.is_empty() { Ok(()) } else { Err(CliError::Postcondition(v.join("; "))) };
            (r.table().to_csv()?, check)
        }
        Command::Regions { file, params } => {
            let (t, within) = regions(file, params)?;
            let text = emit(&t, params.out.as_deref())?;
            let check = if within {
                Ok(())
            } else {
                Err(CliError::Postcondition("region count exceeds (2W)^L".into()))
            };
            (text, check)
        }
        Command::Minpieces { function, params } => {
            let t = minpieces(function, params)?;
            (emit(&t, params.out.as_deref())?, Ok(()))
        }
    })
}
