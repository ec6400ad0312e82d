//! Flat `key=value` configuration files.
//!
//! Keys are flag names without the leading dashes. Flags given on the command
//! line win over the file.

use std::fs;
use std::path::Path;

use crate::CliError;

pub const SUBCOMMANDS: [&str; 8] = [
    "eig-scan",
    "solve",
    "converge",
    "coercivity",
    "hetero",
    "mixture",
    "korn-check",
    "kernels-plot",
];

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "config line {}: expected key=value, got '{line}'",
                lineno + 1
            ))
        })?;
        let key = match key.trim() {
            "N_list" | "n_list" | "n" => "N".to_string(),
            k => k.replace('_', "-"),
        };
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

fn flag_present(args: &[String], key: &str) -> bool {
    let long = format!("--{key}");
    let prefixed = format!("{long}=");
    args.iter().any(|a| *a == long || a.starts_with(&prefixed))
}

/// Removes `--config <path>` from `args` and splices the file's entries in
/// after the subcommand.
pub fn merge_config(mut args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(pos) = args
        .iter()
        .position(|a| a == "--config" || a.starts_with("--config="))
    else {
        return Ok(args);
    };
    let path = if let Some(p) = args[pos].strip_prefix("--config=") {
        let p = p.to_string();
        args.remove(pos);
        p
    } else {
        if pos + 1 >= args.len() {
            return Err(CliError::Usage("--config needs a path".into()));
        }
        let p = args.remove(pos + 1);
        args.remove(pos);
        p
    };
    let text = fs::read_to_string(Path::new(&path)).map_err(|source| CliError::Io {
        path: path.clone().into(),
        source,
    })?;
    let entries = parse_config(&text)?;

    let mut sub = args
        .iter()
        .skip(1)
        .position(|a| SUBCOMMANDS.contains(&a.as_str()));
    if sub.is_none() {
        if let Some((_, name)) = entries.iter().find(|(k, _)| k == "subcommand") {
            args.insert(1, name.clone());
            sub = Some(0);
        }
    }
    let insert_at = sub.map_or(args.len(), |s| s + 2);
    let mut extra = Vec::new();
    for (key, value) in entries {
        if key == "subcommand" || flag_present(&args, &key) {
            continue;
        }
        extra.push(format!("--{key}={value}"));
    }
    args.splice(insert_at..insert_at, extra);
    Ok(args)
}
