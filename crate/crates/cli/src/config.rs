//! `key = value` config files. Keys are long flag names of the subcommand
//! being run; flags given on the command line win over the file.

use std::collections::BTreeMap;

use clap::Command;

use crate::error::CliError;

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", i + 1))
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        out.insert(key, value.trim().to_owned());
    }
    Ok(out)
}

/// Flags for `subcommand` taken from the config, skipping any flag already
/// present in `user_args`.
pub fn injected_args(
    settings: &BTreeMap<String, String>,
    subcommand: &Command,
    user_args: &[String],
) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    for (key, value) in settings {
        let known = subcommand
            .get_arguments()
            .any(|a| a.get_long() == Some(key.as_str()));
        if !known {
            return Err(CliError::Usage(format!(
                "config key {key:?} is not an option of `{}`",
                subcommand.get_name()
            )));
        }
        let flag = format!("--{key}");
        let given = user_args
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !given {
            out.push(flag);
            out.push(value.clone());
        }
    }
    Ok(out)
}
