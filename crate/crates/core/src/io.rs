//! File formats for arrays, query batches and answers.
//!
//! * Arrays: raw little-endian `u32` values, no header.
//! * Queries: one `l r` pair per text line (0-based), or pairs of
//!   little-endian `u64` when the path ends in `.qbin`.
//! * Answers: one 0-based position per text line, or little-endian `u64`
//!   values in binary mode.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::types::{InputArray, Query, QueryBatch};

fn invalid_data(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}

pub fn write_array(path: &Path, a: &[u32]) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for &v in a {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()
}

pub fn read_array(path: &Path) -> io::Result<InputArray> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() % 4 != 0 {
        return Err(invalid_data(format!(
            "array file length {} is not a multiple of 4",
            bytes.len()
        )));
    }
    let values: Vec<u32> = bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    InputArray::new(values).map_err(|e| invalid_data(e.to_string()))
}

/// True when the path selects the binary query format.
pub fn is_binary_query_path(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "qbin")
}

pub fn write_queries(path: &Path, batch: &QueryBatch) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    if is_binary_query_path(path) {
        for q in batch.queries() {
            w.write_all(&(q.l as u64).to_le_bytes())?;
            w.write_all(&(q.r as u64).to_le_bytes())?;
        }
    } else {
        for q in batch.queries() {
            writeln!(w, "{} {}", q.l, q.r)?;
        }
    }
    w.flush()
}

pub fn read_queries(path: &Path) -> io::Result<QueryBatch> {
    let queries = if is_binary_query_path(path) {
        let mut bytes = Vec::new();
        File::open(path)?.read_to_end(&mut bytes)?;
        if bytes.len() % 16 != 0 {
            return Err(invalid_data(format!(
                "binary query file length {} is not a multiple of 16",
                bytes.len()
            )));
        }
        bytes
            .chunks_exact(16)
            .map(|c| {
                let l = u64::from_le_bytes(c[..8].try_into().unwrap());
                let r = u64::from_le_bytes(c[8..].try_into().unwrap());
                Ok(Query::new(l as usize, r as usize))
            })
            .collect::<io::Result<Vec<_>>>()?
    } else {
        let reader = BufReader::new(File::open(path)?);
        let mut queries = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> io::Result<usize> {
                tok.ok_or_else(|| invalid_data(format!("query line {}: missing field", lineno + 1)))?
                    .parse::<usize>()
                    .map_err(|e| invalid_data(format!("query line {}: {}", lineno + 1, e)))
            };
            let l = parse(it.next())?;
            let r = parse(it.next())?;
            queries.push(Query::new(l, r));
        }
        queries
    };
    for (i, q) in queries.iter().enumerate() {
        if q.l > q.r {
            return Err(invalid_data(format!("query {} has l > r", i)));
        }
    }
    let max_width = queries.iter().map(|q| q.width()).max().unwrap_or(0);
    QueryBatch::new(queries, max_width).map_err(|e| invalid_data(e.to_string()))
}

pub fn write_answers(path: &Path, answers: &[usize], binary: bool) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    if binary {
        for &p in answers {
            w.write_all(&(p as u64).to_le_bytes())?;
        }
    } else {
        for &p in answers {
            writeln!(w, "{}", p)?;
        }
    }
    w.flush()
}
