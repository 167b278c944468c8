//! Append-only persistence: `index.jsonl` lists sessions, `<id>.jsonl` holds each
//! session's answers in order.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::session::{AnswerLine, SessionSpec};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexEntry {
    pub id: String,
    pub created: u64,
    pub spec: SessionSpec,
}

#[derive(Debug)]
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn open(dir: impl AsRef<Path>) -> io::Result<Store> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(Store { dir: dir.as_ref().to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn session_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.jsonl"))
    }

    fn append(path: &Path, value: &impl Serialize) -> io::Result<()> {
        let mut line = serde_json::to_vec(value)?;
        line.push(b'\n');
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        f.write_all(&line)?;
        f.sync_data()
    }

    pub fn create(&self, entry: &IndexEntry) -> io::Result<()> {
        File::create(self.session_path(&entry.id))?;
        Self::append(&self.dir.join("index.jsonl"), entry)
    }

    pub fn append_answer(&self, id: &str, line: &AnswerLine) -> io::Result<()> {
        Self::append(&self.session_path(id), line)
    }

    fn read_lines<T: for<'de> Deserialize<'de>>(path: &Path) -> io::Result<Vec<T>> {
        let f = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        let mut out = Vec::new();
        for (no, line) in BufReader::new(f).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let value = serde_json::from_str(&line)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, format!("{}:{}: {e}", path.display(), no + 1)))?;
            out.push(value);
        }
        Ok(out)
    }

    /// Every indexed session with its stored answers.
    pub fn load(&self) -> io::Result<Vec<(IndexEntry, Vec<AnswerLine>)>> {
        Self::read_lines::<IndexEntry>(&self.dir.join("index.jsonl"))?
            .into_iter()
            .map(|entry| {
                let answers = Self::read_lines(&self.session_path(&entry.id))?;
                Ok((entry, answers))
            })
            .collect()
    }
}
