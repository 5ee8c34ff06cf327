use std::fs::{self, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use super::TranscriptRecord;

/// A per-run directory `runs/<timestamp>/` holding one jsonl transcript per
/// puzzle and mode.
#[derive(Debug, Clone)]
pub struct RunDir {
    path: PathBuf,
}

impl RunDir {
    /// Creates a fresh timestamped directory under `root`. A numeric suffix
    /// is added if two runs start within the same millisecond.
    pub fn create(root: impl AsRef<Path>) -> io::Result<Self> {
        let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string();
        fs::create_dir_all(root.as_ref())?;
        let mut path = root.as_ref().join(&stamp);
        let mut n = 1;
        loop {
            match fs::create_dir(&path) {
                Ok(()) => return Ok(RunDir { path }),
                Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                    path = root.as_ref().join(format!("{stamp}-{n}"));
                    n += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn transcript_path(&self, puzzle: &str, mode: &str) -> PathBuf {
        self.path.join(format!("{puzzle}.{mode}.jsonl"))
    }

    /// Appends records to `<puzzle>.<mode>.jsonl`, one JSON object per line.
    pub fn append(&self, puzzle: &str, mode: &str, records: &[TranscriptRecord]) -> io::Result<PathBuf> {
        let path = self.transcript_path(puzzle, mode);
        let mut file = OpenOptions::new().create(true).append(true).open(&path)?;
        for r in records {
            let line = serde_json::to_string(r).map_err(io::Error::other)?;
            writeln!(file, "{line}")?;
        }
        Ok(path)
    }
}

pub fn read_transcripts(path: impl AsRef<Path>) -> io::Result<Vec<TranscriptRecord>> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?);
    }
    Ok(out)
}
