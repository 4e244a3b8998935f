//! Minimal tab-separated reading and atomic-friendly writing.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TsvError<E: std::fmt::Display> {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:1: expected header {expected:?}, found {found:?}", path.display())]
    Header {
        path: PathBuf,
        expected: String,
        found: String,
    },
    #[error("{}:{line}: expected {expected} fields, found {found}", path.display())]
    FieldCount {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{}:{line}: {error}", path.display())]
    Row { path: PathBuf, line: usize, error: E },
}

/// Streams the data rows of a headed TSV file.
///
/// The header must match `header` exactly (after trimming a trailing `\r`).
/// Blank lines are skipped. `f` receives the 1-based line number and the
/// split fields.
pub fn for_each_row<E, F>(path: &Path, header: &[&str], mut f: F) -> Result<usize, TsvError<E>>
where
    E: std::fmt::Display,
    F: FnMut(usize, &[&str]) -> Result<(), E>,
{
    let io_err = |source| TsvError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    let mut reader = BufReader::with_capacity(1 << 20, file);
    let mut line = String::new();
    let mut line_no = 0usize;
    let expected = header.join("\t");

    let mut read = |buf: &mut String| -> Result<bool, TsvError<E>> {
        buf.clear();
        let n = reader.read_line(buf).map_err(io_err)?;
        while buf.ends_with('\n') || buf.ends_with('\r') {
            buf.pop();
        }
        Ok(n > 0)
    };

    if !read(&mut line)? {
        return Err(TsvError::Header {
            path: path.to_path_buf(),
            expected,
            found: String::new(),
        });
    }
    line_no += 1;
    let found = line.trim_start_matches('\u{feff}');
    if found != expected {
        return Err(TsvError::Header {
            path: path.to_path_buf(),
            expected,
            found: found.to_string(),
        });
    }

    let mut rows = 0;
    while read(&mut line)? {
        line_no += 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != header.len() {
            return Err(TsvError::FieldCount {
                path: path.to_path_buf(),
                line: line_no,
                expected: header.len(),
                found: fields.len(),
            });
        }
        f(line_no, &fields).map_err(|error| TsvError::Row {
            path: path.to_path_buf(),
            line: line_no,
            error,
        })?;
        rows += 1;
    }
    Ok(rows)
}

/// Writes a header followed by rows, one `\t`-joined line each.
pub fn write_rows<W, I, R>(mut w: W, header: &[&str], rows: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = R>,
    R: AsRef<[String]>,
{
    writeln!(w, "{}", header.join("\t"))?;
    for row in rows {
        writeln!(w, "{}", row.as_ref().join("\t"))?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn reads_rows_and_skips_blank_lines() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "a.tsv", "x\ty\r\n1\t2\n\n3\t4\n");
        let mut seen = Vec::new();
        let n = for_each_row::<String, _>(&p, &["x", "y"], |line, f| {
            seen.push((line, f[0].to_string(), f[1].to_string()));
            Ok(())
        })
        .unwrap();
        assert_eq!(n, 2);
        assert_eq!(seen[1], (4, "3".into(), "4".into()));
    }

    #[test]
    fn header_mismatch_and_field_count() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "a.tsv", "x\tz\n1\t2\n");
        assert!(matches!(
            for_each_row::<String, _>(&p, &["x", "y"], |_, _| Ok(())),
            Err(TsvError::Header { .. })
        ));
        let p = write(dir.path(), "b.tsv", "x\ty\n1\n");
        match for_each_row::<String, _>(&p, &["x", "y"], |_, _| Ok(())) {
            Err(TsvError::FieldCount { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
