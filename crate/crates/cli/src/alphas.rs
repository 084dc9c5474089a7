use alphagan::AlphaParam;

use crate::error::{CliError, CliResult};

/// Parses a comma-separated order list such as `0.5,1,2,inf`.
pub fn parse_alphas(s: &str) -> CliResult<Vec<AlphaParam>> {
    let alphas = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<AlphaParam>().map_err(|e| CliError::Usage(format!("--alphas: {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    if alphas.is_empty() {
        return Err(CliError::Usage("--alphas needs at least one order".into()));
    }
    Ok(alphas)
}
