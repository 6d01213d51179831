//! Manifest files: a JSON or TOML document standing for a command line.
//!
//! ```toml
//! command = "check-equivalence"
//! vars = ["z", "w"]
//! trunc = 6
//! map = "(z, w + z)"
//! mode = "set"
//! order = 3
//! left = ["w - 2*z - z^2", { label = "b", generators = ["w", "z^2"] }]
//! right = ["w - 3*z - z^2", "w - z"]
//! ```
//!
//! `command` names the subcommand (`"counterexample verify"` for nested
//! ones). Every other key `some_key` becomes the flag `--some-key`: strings
//! and numbers are passed as values, `true` as a bare flag, and arrays as one
//! flag per element. A member table `{ label, generators }` (or `{ label,
//! expr }`) becomes the member syntax `label: g1; g2`.

use std::path::Path;

use serde_json::Value;

pub(crate) struct Manifest {
    pub command: Vec<String>,
    pub flags: Vec<String>,
}

pub(crate) fn load(path: &Path) -> Result<Manifest, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read manifest {}: {e}", path.display()))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let value: Value = match ext {
        "json" => serde_json::from_str(&text).map_err(|e| format!("manifest {}: {e}", path.display()))?,
        "toml" => toml::from_str(&text).map_err(|e| format!("manifest {}: {e}", path.display()))?,
        _ => serde_json::from_str(&text)
            .or_else(|_| toml::from_str(&text))
            .map_err(|e| format!("manifest {} is neither JSON nor TOML: {e}", path.display()))?,
    };
    from_value(value)
}

pub(crate) fn from_value(value: Value) -> Result<Manifest, String> {
    let Value::Object(map) = value else {
        return Err("a manifest must be a table of keys".into());
    };
    let mut command = Vec::new();
    let mut flags = Vec::new();
    for (key, val) in map {
        if key == "command" {
            let Value::String(s) = val else {
                return Err("`command` must be a string".into());
            };
            command = s.split_whitespace().map(str::to_string).collect();
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match val {
            Value::Array(items) => {
                for item in items {
                    flags.push(flag.clone());
                    flags.push(scalar_or_member(&key, item)?);
                }
            }
            Value::Bool(true) => flags.push(flag),
            Value::Bool(false) | Value::Null => {}
            other => {
                flags.push(flag);
                flags.push(scalar_or_member(&key, other)?);
            }
        }
    }
    Ok(Manifest { command, flags })
}

fn scalar_or_member(key: &str, v: Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::Object(m) => {
            let label = match m.get("label") {
                Some(Value::String(s)) => Some(s.clone()),
                Some(_) => return Err(format!("`{key}`: member label must be a string")),
                None => None,
            };
            let body = match (m.get("generators"), m.get("expr")) {
                (Some(Value::Array(gens)), None) => gens
                    .iter()
                    .map(|g| g.as_str().map(str::to_string).ok_or_else(|| format!("`{key}`: generators must be strings")))
                    .collect::<Result<Vec<_>, _>>()?
                    .join("; "),
                (None, Some(Value::String(e))) => e.clone(),
                _ => return Err(format!("`{key}`: a member table needs `generators` (array) or `expr` (string)")),
            };
            Ok(match label {
                Some(l) => format!("{l}: {body}"),
                None => body,
            })
        }
        other => Err(format!("`{key}`: unsupported value {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_from_toml() {
        let v: Value = toml::from_str(
            r#"
            command = "counterexample verify"
            m_max = 4
            realify = true
            left = ["w", { label = "b", generators = ["w", "z^2"] }]
            "#,
        )
        .unwrap();
        let m = from_value(v).unwrap();
        assert_eq!(m.command, ["counterexample", "verify"]);
        let joined = m.flags.join(" ");
        assert!(joined.contains("--m-max 4"), "{joined}");
        assert!(joined.contains("--left w --left b: w; z^2"), "{joined}");
        assert!(m.flags.contains(&"--realify".to_string()));
    }

    #[test]
    fn rejects_non_tables() {
        assert!(from_value(Value::Array(vec![])).is_err());
        assert!(from_value(serde_json::json!({"left": [{"label": "a"}]})).is_err());
    }
}
