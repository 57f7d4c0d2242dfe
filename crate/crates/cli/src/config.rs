//! `key=value` config files, injected as flags so that command-line flags
//! override them.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::CommandFactory;

use crate::args::Cli;

const GLOBAL_WITH_VALUE: [&str; 4] = ["--hbar", "--tol", "--out", "--config"];

pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value, got '{line}'", k + 1);
        };
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Position of the subcommand token and the `--config` value, if any.
fn scan(argv: &[OsString]) -> (Option<usize>, Option<OsString>) {
    let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
    let (mut sub, mut config) = (None, None);
    let mut i = 1;
    while i < argv.len() {
        let a = argv[i].to_string_lossy();
        if let Some(v) = a.strip_prefix("--config=") {
            config = Some(OsString::from(v));
        } else if a == "--config" {
            config = argv.get(i + 1).cloned();
            i += 1;
        } else if sub.is_none() && GLOBAL_WITH_VALUE.contains(&a.as_ref()) {
            i += 1;
        } else if sub.is_none() && names.iter().any(|n| *n == a) {
            sub = Some(i);
        }
        i += 1;
    }
    (sub, config)
}

/// `argv` with config entries placed right after the subcommand and every
/// user argument after them.
pub fn inject(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let (sub, config) = scan(&argv);
    let (Some(sub), Some(path)) = (sub, config) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path)).with_context(|| format!("reading config {path:?}"))?;
    let entries = parse(&text)?;
    let sub_name = argv[sub].to_string_lossy().to_string();
    let cmd = Cli::command();
    let subcmd = cmd.find_subcommand(&sub_name).expect("scanned subcommand exists");
    let accepted = |key: &str| {
        subcmd
            .get_arguments()
            .chain(cmd.get_arguments())
            .find(|a| a.get_long() == Some(key))
            .map(|a| !a.get_action().takes_values())
    };
    let mut injected = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            continue;
        }
        match accepted(&key) {
            None => log::warn!("config key '{key}' is not a flag of '{sub_name}'; ignored"),
            Some(true) => {
                if value.eq_ignore_ascii_case("true") {
                    injected.push(OsString::from(format!("--{key}")));
                }
            }
            Some(false) => injected.push(OsString::from(format!("--{key}={value}"))),
        }
    }
    let mut out = vec![argv[0].clone(), argv[sub].clone()];
    out.extend(injected);
    out.extend(argv[1..sub].iter().cloned());
    out.extend(argv[sub + 1..].iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_flat_files() {
        let e = parse("# comment\nhbar = 0.5\n\nstate=hermite:1\n").unwrap();
        assert_eq!(e, vec![("hbar".into(), "0.5".into()), ("state".into(), "hermite:1".into())]);
        assert!(parse("novalue\n").is_err());
    }

    #[test]
    fn flags_follow_config_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.conf");
        std::fs::write(&path, "hbar=0.5\nn=64\nallow-gaps=true\nbogus=1\n").unwrap();
        let p = path.to_str().unwrap();
        let argv = inject(os(&["prog", "--hbar", "2", "--config", p, "tomo", "--n", "32"])).unwrap();
        let s: Vec<String> = argv.iter().map(|a| a.to_string_lossy().into()).collect();
        assert_eq!(
            s,
            ["prog", "tomo", "--hbar=0.5", "--n=64", "--allow-gaps", "--hbar", "2", "--config", p, "--n", "32"]
        );
    }

    #[test]
    fn without_config_argv_is_unchanged() {
        let argv = os(&["prog", "spin", "--state", "1,0"]);
        assert_eq!(inject(argv.clone()).unwrap(), argv);
    }
}
