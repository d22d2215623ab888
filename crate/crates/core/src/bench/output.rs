//! CSV and JSONL serialization of episode results.

use std::io::{BufRead, Read, Write};

use super::run::{EpisodeRecord, EpisodeResult};
use super::BenchError;

pub fn write_csv<W: Write>(w: W, results: &[EpisodeResult]) -> Result<(), BenchError> {
    let mut wr = csv::Writer::from_writer(w);
    for r in results {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<EpisodeResult>, BenchError> {
    let mut rd = csv::Reader::from_reader(r);
    rd.deserialize().map(|r| r.map_err(BenchError::from)).collect()
}

pub fn write_jsonl<W: Write>(mut w: W, records: &[EpisodeRecord]) -> Result<(), BenchError> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<EpisodeRecord>, BenchError> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}
