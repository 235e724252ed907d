use std::fs;
use std::io::Read;
use std::path::Path;

use orbitlab::preorder::{parse_classes_json, parse_classes_text, validate_classes};
use orbitlab::{Error, OrderedPartition};

use crate::Failure;

fn read_source(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Reads an instance in the text or JSON format; JSON is recognized by a
/// leading `{` or `[`.
pub fn load_instance(path: &Path) -> Result<OrderedPartition, Failure> {
    let src = read_source(path)?;
    let json = matches!(src.trim_start().chars().next(), Some('{' | '['));
    let parsed = if json {
        parse_classes_json(&src)
    } else {
        parse_classes_text(&src)
    };
    let ctx = |e: Error| Failure::from_core(e).context(path.display().to_string());
    let (n, classes) = parsed.map_err(ctx)?;
    let report = validate_classes(n, &classes, None).map_err(ctx)?;
    if let Some(msg) = report.structural_failure() {
        return Err(Failure::input(format!("{}: {msg}", path.display())));
    }
    OrderedPartition::new(n, classes).map_err(ctx)
}
