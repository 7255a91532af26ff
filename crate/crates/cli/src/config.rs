//! Config files and the resolved-configuration header.
//!
//! A config file holds one `key = value` per line, where `key` is a long
//! flag name of the subcommand. Values with spaces expand to several
//! arguments (`range = -10 10`). The file's entries are inserted before the
//! command-line flags, and since every flag overrides itself the command
//! line wins.

use clap::{ArgMatches, Command};

/// Arguments that never appear in the echoed header.
const NOT_ECHOED: [&str; 2] = ["config", "out"];

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`", i + 1))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        pairs.push((key.to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

/// Replaces `--config PATH` by the file's entries, placed right after the
/// subcommand name.
pub fn merge_config_file(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = args
        .iter()
        .position(|a| a == "--config" || a.starts_with("--config="))
    else {
        return Ok(args);
    };
    let (path, consumed) = match args[pos].strip_prefix("--config=") {
        Some(p) => (p.to_string(), 1),
        None => (
            args.get(pos + 1).cloned().ok_or("--config needs a path")?,
            2,
        ),
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let mut injected = Vec::new();
    for (key, value) in parse_config(&text)? {
        injected.push(format!("--{key}"));
        injected.extend(value.split_whitespace().map(str::to_string));
    }
    let mut rest = args;
    rest.drain(pos..pos + consumed);
    let sub = rest
        .iter()
        .skip(1)
        .position(|a| !a.starts_with('-'))
        .map_or(rest.len(), |i| i + 2);
    rest.splice(sub..sub, injected);
    Ok(rest)
}

/// `# key = value` lines for every argument of the subcommand, including
/// defaults, in declaration order.
pub fn resolved_header(name: &str, command: &Command, matches: &ArgMatches) -> String {
    let mut out = format!(
        "# qlearn {}\n# subcommand = {name}\n",
        env!("CARGO_PKG_VERSION")
    );
    for arg in command.get_arguments() {
        let id = arg.get_id().as_str();
        if NOT_ECHOED.contains(&id) {
            continue;
        }
        let Ok(Some(values)) = matches.try_get_raw(id) else {
            continue;
        };
        let values: Vec<String> = values.map(|v| v.to_string_lossy().into_owned()).collect();
        out.push_str(&format!(
            "# {} = {}\n",
            id.replace('_', "-"),
            values.join(" ")
        ));
    }
    out
}
