//! Append-only JSON-lines checkpoints for long parameter scans.
//!
//! Each line is `{"kind": <scan kind>, "record": <record>}` for one finished
//! `(n, a, b)` work item. A torn last line from an interrupted write is cut
//! off when the file is reopened.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Work items are identified by `(n, a, b)`.
pub trait Keyed {
    fn key(&self) -> (usize, usize, usize);
}

#[derive(Serialize, Deserialize)]
struct Line<T> {
    kind: String,
    record: T,
}

pub struct Checkpoint {
    kind: String,
    out: BufWriter<File>,
}

impl Checkpoint {
    /// Opens (or creates) `path` and returns the records already in it.
    pub fn open<T: DeserializeOwned>(path: &Path, kind: &str) -> Result<(Checkpoint, Vec<T>)> {
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .truncate(false)
            .open(path)?;
        let mut records = Vec::new();
        let mut valid_len = 0u64;
        {
            let mut reader = BufReader::new(&mut file);
            let mut buf = String::new();
            loop {
                buf.clear();
                let read = reader.read_line(&mut buf)?;
                if read == 0 || !buf.ends_with('\n') {
                    break;
                }
                let line: Line<T> = serde_json::from_str(buf.trim_end()).map_err(|e| {
                    Error::invalid(format!("corrupt checkpoint {}: {e}", path.display()))
                })?;
                if line.kind != kind {
                    return Err(Error::invalid(format!(
                        "checkpoint {} holds '{}' records, expected '{kind}'",
                        path.display(),
                        line.kind
                    )));
                }
                records.push(line.record);
                valid_len += read as u64;
            }
        }
        file.set_len(valid_len)?;
        file.seek(SeekFrom::End(0))?;
        Ok((
            Checkpoint {
                kind: kind.to_string(),
                out: BufWriter::new(file),
            },
            records,
        ))
    }

    /// Appends records and flushes them to disk.
    pub fn append<T: Serialize>(&mut self, records: &[T]) -> Result<()> {
        for record in records {
            let line = Line {
                kind: self.kind.clone(),
                record,
            };
            serde_json::to_writer(&mut self.out, &line)?;
            self.out.write_all(b"\n")?;
        }
        self.out.flush()?;
        self.out.get_ref().sync_data()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Rec {
        n: usize,
    }

    #[test]
    fn resume_and_torn_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.jsonl");
        {
            let (mut ck, old) = Checkpoint::open::<Rec>(&path, "t").unwrap();
            assert!(old.is_empty());
            ck.append(&[Rec { n: 1 }, Rec { n: 2 }]).unwrap();
        }
        // simulate a crash mid-write
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(br#"{"kind":"t","rec"#).unwrap();
        drop(f);
        {
            let (mut ck, old) = Checkpoint::open::<Rec>(&path, "t").unwrap();
            assert_eq!(old, [Rec { n: 1 }, Rec { n: 2 }]);
            ck.append(&[Rec { n: 3 }]).unwrap();
        }
        let (_, old) = Checkpoint::open::<Rec>(&path, "t").unwrap();
        assert_eq!(old.len(), 3);
        assert!(Checkpoint::open::<Rec>(&path, "other").is_err());
    }
}
