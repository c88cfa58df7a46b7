//! Corpus discovery: recursive walk for image files in a stable order.

use std::path::{Path, PathBuf};

use walkdir::WalkDir;

/// Recursively collects `.png`/`.jpg`/`.jpeg` files (case-insensitive),
/// sorted lexicographically by full path. The position in this list is the
/// image index used for seed derivation, so the order must be stable.
pub fn discover(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in WalkDir::new(dir) {
        let entry = entry.map_err(std::io::Error::other)?;
        if !entry.file_type().is_file() {
            continue;
        }
        let path = entry.into_path();
        let matches = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| {
                let e = e.to_ascii_lowercase();
                e == "png" || e == "jpg" || e == "jpeg"
            })
            .unwrap_or(false);
        if matches {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.as_os_str().cmp(b.as_os_str()));
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    #[test]
    fn discovery_is_recursive_sorted_and_filtered() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        fs::create_dir(root.join("sub")).unwrap();
        for name in ["b.png", "a.JPG", "sub/c.jpeg", "notes.txt", "d.tiff"] {
            fs::write(root.join(name), b"x").unwrap();
        }
        let found = discover(root).unwrap();
        let names: Vec<String> = found
            .iter()
            .map(|p| {
                p.strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned()
            })
            .collect();
        assert_eq!(names, ["a.JPG", "b.png", "sub/c.jpeg"]);
    }

    #[test]
    fn missing_directory_errors() {
        assert!(discover(Path::new("/no/such/dir")).is_err());
    }
}
