//! Flat `key = value` configuration files.
//!
//! Each entry becomes the flag `--key value` (or a bare `--key` for boolean
//! keys set to `true`), placed before the command-line flags so that the
//! command line wins. The key `command` names the subcommand.

use std::path::Path;

use crate::error::{CliError, CliResult};

/// Keys that are switches rather than valued flags.
const SWITCHES: &[&str] = &["no-meta", "no-hom"];

/// Subcommand names accepted by the driver.
pub const COMMANDS: &[&str] = &[
    "equilibria",
    "classify",
    "sweep-sn",
    "hopf-curve",
    "bautin",
    "bt",
    "cycles",
    "homoclinic",
    "basin",
    "phase",
    "diagram",
];

/// Parses configuration text into ordered `(key, value)` pairs.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.starts_with('-') {
            return Err(CliError::Usage(format!("config line {}: bad key {k:?}", i + 1)));
        }
        if k == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> CliResult<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Removes `--config <path>` from `args` and returns the path, if present.
fn take_config(args: &mut Vec<String>) -> CliResult<Option<String>> {
    let Some(i) = args.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(None);
    };
    let flag = args.remove(i);
    if let Some(path) = flag.strip_prefix("--config=") {
        return Ok(Some(path.to_string()));
    }
    if i < args.len() {
        Ok(Some(args.remove(i)))
    } else {
        Err(CliError::Usage("--config needs a path".into()))
    }
}

/// Expands a config file referenced in `argv` into ordinary flags.
pub fn merge_argv(argv: Vec<String>) -> CliResult<Vec<String>> {
    let mut it = argv.into_iter();
    let prog = it.next().unwrap_or_else(|| "bazykin".into());
    let mut args: Vec<String> = it.collect();
    let Some(path) = take_config(&mut args)? else {
        let mut out = vec![prog];
        out.extend(args);
        return Ok(out);
    };
    let entries = read_config(Path::new(&path))?;

    let mut flags = Vec::new();
    let mut command = None;
    for (k, v) in entries {
        if k == "command" {
            command = Some(v);
        } else if SWITCHES.contains(&k.as_str()) {
            match v.as_str() {
                "true" => flags.push(format!("--{k}")),
                "false" => {}
                _ => return Err(CliError::Usage(format!("config key {k} expects true or false"))),
            }
        } else {
            flags.push(format!("--{k}"));
            flags.push(v);
        }
    }

    let cmd_pos = args.iter().position(|a| COMMANDS.contains(&a.as_str()));
    let (command, rest) = match cmd_pos {
        Some(i) => {
            let c = args.remove(i);
            (c, args)
        }
        None => (command.ok_or_else(|| CliError::Usage("no command given on the command line or in the config".into()))?, args),
    };
    let mut out = vec![prog, command];
    out.extend(flags);
    out.extend(rest);
    Ok(out)
}
