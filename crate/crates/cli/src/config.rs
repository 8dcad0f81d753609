//! Merging of `key=value` configuration files into the command line.
//!
//! A file entry `energy-kev = 3.8` becomes `--energy-kev 3.8`; flags given on
//! the command line win over file entries. Blank lines and `#` comments are
//! ignored.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Keys that select the same physical input; a command-line choice of any of
/// them suppresses all of them from the file.
const ENERGY_KEYS: [&str; 3] = ["energy-kev", "energy-mev", "eta"];

pub fn parse_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config file {}", path.display()))?;
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value", path.display(), n + 1);
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            bail!("{}:{}: empty key", path.display(), n + 1);
        }
        entries.push((key.to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

fn given_on_command_line(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    args.iter().any(|a| *a == flag || a.starts_with(&prefix))
}

/// Pulls `--config <path>` out of `args` and appends the file's entries that
/// the command line does not already set. The subcommand must come first.
pub fn expand(mut args: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        if args[i] == "--config" {
            if i + 1 >= args.len() {
                bail!("--config needs a file path");
            }
            path = Some(args.remove(i + 1));
            args.remove(i);
        } else if let Some(p) = args[i].strip_prefix("--config=") {
            path = Some(p.to_string());
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let energy_on_cli = ENERGY_KEYS.iter().any(|k| given_on_command_line(&args, k));
    for (key, value) in parse_file(Path::new(&path))? {
        if given_on_command_line(&args, &key) || (energy_on_cli && ENERGY_KEYS.contains(&key.as_str())) {
            continue;
        }
        args.push(format!("--{key}"));
        args.push(value);
    }
    Ok(args)
}
