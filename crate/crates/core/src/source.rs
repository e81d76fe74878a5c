//! Source files and the file-system abstraction the loader reads through.

use std::collections::BTreeMap;
use std::io;
use std::path::{Component, Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Language {
    /// `.crysl`
    CrySL,
    /// `.mcsl`
    AbstractCrySL,
    /// `.ref`
    Refinement,
    /// `.conf`
    Config,
}

impl Language {
    pub fn from_path(path: &Path) -> Option<Language> {
        match path.extension()?.to_str()? {
            "crysl" => Some(Language::CrySL),
            "mcsl" => Some(Language::AbstractCrySL),
            "ref" => Some(Language::Refinement),
            "conf" => Some(Language::Config),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Language::CrySL => "crysl",
            Language::AbstractCrySL => "mcsl",
            Language::Refinement => "ref",
            Language::Config => "conf",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
    pub language: Option<Language>,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Self {
        let path = path.into();
        let language = Language::from_path(Path::new(&path));
        SourceFile { path, text: text.into(), language }
    }

    pub fn with_language(path: impl Into<String>, text: impl Into<String>, language: Language) -> Self {
        SourceFile { path: path.into(), text: text.into(), language: Some(language) }
    }

    /// Reads a file; invalid UTF-8 is an `InvalidData` error.
    pub fn read(path: &Path) -> io::Result<Self> {
        let bytes = std::fs::read(path)?;
        let text = String::from_utf8(bytes).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        Ok(SourceFile::new(path.display().to_string(), text))
    }
}

/// Read-only view of a directory tree.
pub trait FileSource {
    fn is_dir(&self, path: &Path) -> bool;
    fn is_file(&self, path: &Path) -> bool;
    fn read_to_string(&self, path: &Path) -> io::Result<String>;
    /// Direct children that are files, sorted by path.
    fn list_files(&self, dir: &Path) -> io::Result<Vec<PathBuf>>;

    fn exists(&self, path: &Path) -> bool {
        self.is_dir(path) || self.is_file(path)
    }
}

/// The real file system; relative paths resolve against `root`.
#[derive(Debug, Clone)]
pub struct OsFs {
    root: PathBuf,
}

impl OsFs {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        OsFs { root: root.into() }
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.root.join(path)
        }
    }
}

impl FileSource for OsFs {
    fn is_dir(&self, path: &Path) -> bool {
        self.resolve(path).is_dir()
    }

    fn is_file(&self, path: &Path) -> bool {
        self.resolve(path).is_file()
    }

    fn read_to_string(&self, path: &Path) -> io::Result<String> {
        let bytes = std::fs::read(self.resolve(path))?;
        String::from_utf8(bytes).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }

    fn list_files(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        for entry in std::fs::read_dir(self.resolve(dir))? {
            let entry = entry?;
            if entry.file_type()?.is_file() {
                out.push(dir.join(entry.file_name()));
            }
        }
        out.sort();
        Ok(out)
    }
}

/// An in-memory tree keyed by normalized relative paths.
#[derive(Debug, Clone, Default)]
pub struct MemFs {
    files: BTreeMap<PathBuf, String>,
}

impl MemFs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, path: impl AsRef<Path>, text: impl Into<String>) -> &mut Self {
        self.files.insert(normalize(path.as_ref()), text.into());
        self
    }

    pub fn with(mut self, path: impl AsRef<Path>, text: impl Into<String>) -> Self {
        self.insert(path, text);
        self
    }
}

impl FileSource for MemFs {
    fn is_dir(&self, path: &Path) -> bool {
        let dir = normalize(path);
        if dir.as_os_str().is_empty() {
            return true;
        }
        self.files.keys().any(|p| p.starts_with(&dir) && p != &dir)
    }

    fn is_file(&self, path: &Path) -> bool {
        self.files.contains_key(&normalize(path))
    }

    fn read_to_string(&self, path: &Path) -> io::Result<String> {
        self.files
            .get(&normalize(path))
            .cloned()
            .ok_or_else(|| io::Error::new(io::ErrorKind::NotFound, format!("{} not found", path.display())))
    }

    fn list_files(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        if !self.is_dir(dir) {
            return Err(io::Error::new(io::ErrorKind::NotFound, format!("{} not found", dir.display())));
        }
        let norm = normalize(dir);
        Ok(self
            .files
            .keys()
            .filter(|p| p.parent().map(Path::to_path_buf).unwrap_or_default() == norm)
            .map(|p| dir.join(p.file_name().expect("file entries have names")))
            .collect())
    }
}

/// Drops `.` components and trailing separators.
pub fn normalize(path: &Path) -> PathBuf {
    path.components().filter(|c| !matches!(c, Component::CurDir)).collect()
}

/// True when the path has a `..` component.
pub fn escapes_parent(path: &Path) -> bool {
    path.components().any(|c| matches!(c, Component::ParentDir))
}
