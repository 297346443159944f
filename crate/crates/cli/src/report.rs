use std::fs;
use std::path::Path;
use std::time::Duration;

use anyhow::{Context as _, Result};
use hap_taylor::hpnum::to_decimal;
use hap_taylor::BigReal;
use serde_json::{json, Value};

use crate::{Command, Common};

/// A number as a decimal string, or `null` when absent.
pub fn num(x: Option<&BigReal>) -> Value {
    x.map_or(Value::Null, |v| Value::String(to_decimal(v)))
}

pub fn dec(x: &BigReal) -> Value {
    Value::String(to_decimal(x))
}

/// Report skeleton: the subcommand, its flags and the precision.
pub fn header(common: &Common, command: &Command) -> serde_json::Map<String, Value> {
    let mut map = serde_json::Map::new();
    map.insert("subcommand".into(), json!(command.name()));
    map.insert(
        "config".into(),
        json!({
            "precision_bits": common.precision_bits,
            "seed": common.seed,
            "arguments": command,
        }),
    );
    map.insert("p_bits".into(), json!(common.precision_bits));
    map
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json(dir: &Path, name: &str, map: serde_json::Map<String, Value>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&Value::Object(map))?;
    text.push('\n');
    write(dir, name, &text)
}

pub fn write_timing(dir: &Path, common: &Common, command: &Command, elapsed: Duration) -> Result<()> {
    let mut map = header(common, command);
    map.insert("wall_seconds".into(), json!(elapsed.as_secs_f64()));
    write_json(dir, "timing.json", map)
}
