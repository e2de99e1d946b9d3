//! `key = value` config files. Entries become `--key=value` flags placed
//! before the command-line flags, which therefore win on conflict.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Flags from a config file, one `key = value` per line. Blank lines and
/// lines starting with `#` are skipped; keys may carry a leading `--`.
pub fn parse_config(text: &str, origin: &Path) -> CliResult<Vec<String>> {
    let mut flags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected key = value, got '{line}'",
                origin.display(),
                i + 1
            ))
        })?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim().trim_matches('"');
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!(
                "{}:{}: invalid key '{key}'",
                origin.display(),
                i + 1
            )));
        }
        flags.push(format!("--{key}={value}"));
    }
    Ok(flags)
}

fn config_path(args: &[OsString]) -> CliResult<Option<OsString>> {
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return args
                .get(i + 1)
                .cloned()
                .map(Some)
                .ok_or_else(|| CliError::Usage("--config needs a path".into()));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Ok(Some(p.into()));
        }
    }
    Ok(None)
}

/// Splices the flags of a `--config` file right after the subcommand.
pub fn expand_config(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let flags = parse_config(&text, path)?;
    let at = args
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map_or(args.len(), |p| p + 2);
    let mut out = args[..at.min(args.len())].to_vec();
    out.extend(flags.into_iter().map(OsString::from));
    out.extend_from_slice(&args[at.min(args.len())..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let text = "# PT(3,4)\nlambda = 3\n--nu=4\n\ncase = delete-ground\nq = -1.5\n";
        let flags = parse_config(text, Path::new("c.conf")).unwrap();
        assert_eq!(
            flags,
            vec!["--lambda=3", "--nu=4", "--case=delete-ground", "--q=-1.5"]
        );
        assert!(parse_config("lambda 3", Path::new("c")).is_err());
        assert!(parse_config("config = x", Path::new("c")).is_err());
    }

    #[test]
    fn splices_after_the_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("job.conf");
        std::fs::write(&p, "lambda = 3\nnu = 4\n").unwrap();
        let args: Vec<OsString> = [
            "susy",
            "pt-partner",
            "--config",
            p.to_str().unwrap(),
            "--nu",
            "5",
        ]
        .iter()
        .map(OsString::from)
        .collect();
        let out = expand_config(args).unwrap();
        let s: Vec<String> = out
            .iter()
            .map(|a| a.to_string_lossy().into_owned())
            .collect();
        assert_eq!(&s[..4], &["susy", "pt-partner", "--lambda=3", "--nu=4"]);
        assert_eq!(&s[s.len() - 2..], &["--nu", "5"]);
    }
}
