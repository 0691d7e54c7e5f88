//! Flag defaults from a TOML file.
//!
//! Keys are flag names (`precision-bits` or `precision_bits`). A table named
//! after the subcommand overrides top-level keys, so one file can hold
//! defaults for several subcommands:
//!
//! ```toml
//! poly = "c:1,1,-2,-1"
//! precision-bits = 512
//!
//! [approx]
//! x = "0,-1,1"
//! n = [5, 20, 35]
//! ```

use std::path::Path;

use toml::{Table, Value};

use crate::CliError;

#[derive(Debug, Default)]
pub struct FileConfig {
    top: Table,
    section: Option<Table>,
}

impl FileConfig {
    pub fn load(path: &Path, subcommand: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
        Self::parse(&text, subcommand)
            .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))
    }

    pub fn parse(text: &str, subcommand: &str) -> Result<Self, String> {
        let mut top: Table = text.parse().map_err(|e: toml::de::Error| e.to_string())?;
        let section = match top.remove(subcommand) {
            Some(Value::Table(t)) => Some(t),
            Some(_) => return Err(format!("`{subcommand}` must be a table")),
            None => None,
        };
        Ok(FileConfig { top, section })
    }

    fn lookup(&self, key: &str) -> Option<&Value> {
        fn find<'a>(t: &'a Table, key: &str) -> Option<&'a Value> {
            t.get(key).or_else(|| t.get(&key.replace('-', "_")))
        }
        self.section
            .as_ref()
            .and_then(|s| find(s, key))
            .or_else(|| find(&self.top, key))
    }

    /// The value of `key` rendered the way it would be typed on the command
    /// line; arrays are joined with commas.
    pub fn get(&self, key: &str) -> Result<Option<String>, CliError> {
        match self.lookup(key) {
            None => Ok(None),
            Some(v) => render(v)
                .map(Some)
                .ok_or_else(|| CliError::Usage(format!("config key `{key}`: unsupported value {v}"))),
        }
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.lookup(key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(v) => Err(CliError::Usage(format!("config key `{key}`: expected a boolean, found {v}"))),
        }
    }
}

fn render(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Integer(i) => Some(i.to_string()),
        Value::Boolean(b) => Some(b.to_string()),
        Value::Array(items) => items
            .iter()
            .map(render)
            .collect::<Option<Vec<_>>>()
            .map(|parts| parts.join(",")),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_overrides_top_level() {
        let c = FileConfig::parse("x = \"1,0,0\"\nn = 3\n[approx]\nn = [5, 20]\n", "approx").unwrap();
        assert_eq!(c.get("x").unwrap().as_deref(), Some("1,0,0"));
        assert_eq!(c.get("n").unwrap().as_deref(), Some("5,20"));
        let c = FileConfig::parse("x = \"1,0,0\"\nn = 3\n[approx]\nn = [5, 20]\n", "power").unwrap();
        assert_eq!(c.get("n").unwrap().as_deref(), Some("3"));
    }

    #[test]
    fn underscore_and_dash_keys() {
        let c = FileConfig::parse("precision_bits = 512\n", "roots").unwrap();
        assert_eq!(c.get("precision-bits").unwrap().as_deref(), Some("512"));
    }

    #[test]
    fn rejects_tables_as_values() {
        let c = FileConfig::parse("[poly]\na = 1\n", "roots").unwrap();
        assert!(c.get("poly").is_err());
    }
}
