//! Worker pool sized by `LPLAB_THREADS` (all cores when unset).

use crate::error::CliError;

pub fn thread_count() -> Result<Option<usize>, CliError> {
    match std::env::var("LPLAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Validation(format!("LPLAB_THREADS must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `f` on a pool honouring `LPLAB_THREADS`.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count()? {
        b = b.num_threads(n);
    }
    let pool = b.build().map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}
