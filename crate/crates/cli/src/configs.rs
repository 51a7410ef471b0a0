//! Config lookup: a path on disk, or the name of a bundled example.

use std::path::Path;

const BUNDLED: [(&str, &str); 4] = [
    ("fig2.json", include_str!("../configs/fig2.json")),
    ("uniform.json", include_str!("../configs/uniform.json")),
    ("dirac.json", include_str!("../configs/dirac.json")),
    ("cantor_mix.json", include_str!("../configs/cantor_mix.json")),
];

/// Reads `path` if it exists, otherwise falls back to a bundled config with
/// the same file name (with or without the `.json` suffix).
pub fn source(path: &str) -> Result<String, String> {
    if Path::new(path).exists() {
        return std::fs::read_to_string(path).map_err(|e| e.to_string());
    }
    let name = Path::new(path)
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or(path);
    BUNDLED
        .iter()
        .find(|(file, _)| *file == name || file.strip_suffix(".json") == Some(name))
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| "no such file or bundled config".to_string())
}
