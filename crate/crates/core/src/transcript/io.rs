//! Writing and reading line-delimited transcripts, gzip-aware.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use super::format::{Line, ResultRecord, TranscriptHeader, TranscriptRecord};
use crate::error::{Error, Result};
use crate::search::{Progress, SearchObserver};

/// Streams one or more sections (header, nodes, result) to a sink.
pub struct TranscriptWriter<W: Write> {
    sink: W,
    lines_written: u64,
}

impl<W: Write> TranscriptWriter<W> {
    pub fn new(sink: W) -> Self {
        TranscriptWriter {
            sink,
            lines_written: 0,
        }
    }

    pub fn lines_written(&self) -> u64 {
        self.lines_written
    }

    fn write_line(&mut self, line: &Line) -> Result<()> {
        let mut text = line.to_json();
        text.push('\n');
        self.sink.write_all(text.as_bytes()).map_err(|source| Error::PartialWrite {
            lines_written: self.lines_written,
            source,
        })?;
        self.lines_written += 1;
        Ok(())
    }

    pub fn begin_section(&mut self, header: &TranscriptHeader) -> Result<()> {
        self.write_line(&Line::Header(header.clone()))
    }

    pub fn end_section(&mut self, result: &ResultRecord) -> Result<()> {
        self.write_line(&Line::Result(result.clone()))
    }

    pub fn finish(mut self) -> Result<W> {
        self.sink.flush().map_err(|source| Error::PartialWrite {
            lines_written: self.lines_written,
            source,
        })?;
        Ok(self.sink)
    }
}

impl<W: Write> SearchObserver for TranscriptWriter<W> {
    fn record(&mut self, record: &TranscriptRecord) -> Result<()> {
        self.write_line(&Line::Node(record.clone()))
    }
}

/// Forwards records to a writer and progress to a callback.
pub struct WithProgress<'a, O: SearchObserver + ?Sized> {
    pub inner: &'a mut O,
    pub on_progress: &'a mut dyn FnMut(&Progress),
}

impl<O: SearchObserver + ?Sized> SearchObserver for WithProgress<'_, O> {
    fn record(&mut self, record: &TranscriptRecord) -> Result<()> {
        self.inner.record(record)
    }

    fn progress(&mut self, progress: &Progress) {
        (self.on_progress)(progress);
    }
}

/// Writes a complete single-section transcript into a byte vector.
pub fn write_stream(header: &TranscriptHeader, records: &[TranscriptRecord], result: &ResultRecord) -> Vec<u8> {
    let mut w = TranscriptWriter::new(Vec::new());
    w.begin_section(header).expect("in-memory write");
    for r in records {
        w.record(r).expect("in-memory write");
    }
    w.end_section(result).expect("in-memory write");
    w.finish().expect("in-memory write")
}

/// Opens `path` for writing, gzip-compressed when it ends in `.gz`.
pub fn create_sink(path: &Path) -> Result<Box<dyn Write>> {
    let file = BufWriter::new(File::create(path)?);
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(GzEncoder::new(file, Compression::default())))
    } else {
        Ok(Box::new(file))
    }
}

/// Opens `path` for reading, decompressing gzip input detected by its magic bytes.
pub fn open_source(path: &Path) -> Result<Box<dyn BufRead>> {
    let mut file = File::open(path)?;
    let mut magic = [0u8; 2];
    let n = read_prefix(&mut file, &mut magic)?;
    let file = File::open(path)?;
    if n == 2 && magic == [0x1f, 0x8b] {
        Ok(Box::new(BufReader::new(GzDecoder::new(file))))
    } else {
        Ok(Box::new(BufReader::new(file)))
    }
}

fn read_prefix(r: &mut impl Read, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..])? {
            0 => break,
            n => filled += n,
        }
    }
    Ok(filled)
}
