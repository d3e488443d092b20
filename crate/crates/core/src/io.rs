//! File formats: EMB1 binary embeddings, CSV embeddings, label tables,
//! impostor score lists and reports.
//!
//! EMB1 layout (all integers little-endian), 24-byte header then payload:
//!
//! | offset | size | field                          |
//! |--------|------|--------------------------------|
//! | 0      | 4    | magic `EMB1`                   |
//! | 4      | 4    | version, u32 = 1               |
//! | 8      | 8    | rows, u64                      |
//! | 16     | 4    | dim, u32                       |
//! | 20     | 1    | dtype, u8 (0 = f32 LE)         |
//! | 21     | 3    | reserved, zero                 |
//! | 24     | ...  | rows × dim values, row-major   |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::empirical::{EmbeddingSet, LabelRecord, LabelTable};
use crate::error::{Error, FormatError, Result};
use crate::report::Report;

pub const MAGIC: [u8; 4] = *b"EMB1";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: u64 = 24;
pub const DTYPE_F32: u8 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingFileHeader {
    pub rows: u64,
    pub dim: u32,
    pub dtype: u8,
}

impl EmbeddingFileHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN as usize] {
        let mut h = [0u8; HEADER_LEN as usize];
        h[0..4].copy_from_slice(&MAGIC);
        h[4..8].copy_from_slice(&VERSION.to_le_bytes());
        h[8..16].copy_from_slice(&self.rows.to_le_bytes());
        h[16..20].copy_from_slice(&self.dim.to_le_bytes());
        h[20] = self.dtype;
        h
    }

    fn parse(bytes: &[u8; HEADER_LEN as usize], path: &Path) -> Result<Self> {
        let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(FormatError::BadMagic {
                path: path.into(),
                found: magic,
            }
            .into());
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(FormatError::UnsupportedVersion {
                path: path.into(),
                version,
            }
            .into());
        }
        let dtype = bytes[20];
        if dtype != DTYPE_F32 {
            return Err(FormatError::UnsupportedDtype {
                path: path.into(),
                dtype,
            }
            .into());
        }
        if bytes[21..24] != [0, 0, 0] {
            return Err(FormatError::ReservedBytes { path: path.into() }.into());
        }
        Ok(Self {
            rows: u64::from_le_bytes(bytes[8..16].try_into().unwrap()),
            dim: u32::from_le_bytes(bytes[16..20].try_into().unwrap()),
            dtype,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmbeddingFormat {
    /// Binary if the file starts with the EMB1 magic, CSV otherwise.
    #[default]
    Auto,
    Binary,
    Csv,
}

impl FromStr for EmbeddingFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "binary" | "emb" => Ok(Self::Binary),
            "csv" => Ok(Self::Csv),
            other => Err(Error::domain("EmbeddingFormat", format!("unknown format {other:?}"))),
        }
    }
}

/// Reads embeddings. The result is not normalized.
pub fn read_embeddings(path: impl AsRef<Path>, format: EmbeddingFormat) -> Result<EmbeddingSet> {
    let path = path.as_ref();
    match format {
        EmbeddingFormat::Binary => read_binary(path),
        EmbeddingFormat::Csv => read_csv(path),
        EmbeddingFormat::Auto => {
            let mut magic = [0u8; 4];
            let mut f = File::open(path).map_err(|e| Error::io(path, e))?;
            let n = read_up_to(&mut f, &mut magic).map_err(|e| Error::io(path, e))?;
            if n == 4 && magic == MAGIC {
                read_binary(path)
            } else {
                read_csv(path)
            }
        }
    }
}

fn read_up_to(r: &mut impl Read, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..])? {
            0 => break,
            k => filled += k,
        }
    }
    Ok(filled)
}

fn read_binary(path: &Path) -> Result<EmbeddingSet> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let file_len = file.metadata().map_err(|e| Error::io(path, e))?.len();
    let mut reader = BufReader::new(file);

    let mut header = [0u8; HEADER_LEN as usize];
    let got = read_up_to(&mut reader, &mut header).map_err(|e| Error::io(path, e))?;
    if got < header.len() {
        return Err(FormatError::Truncated {
            path: path.into(),
            offset: got as u64,
            expected: HEADER_LEN,
        }
        .into());
    }
    let h = EmbeddingFileHeader::parse(&header, path)?;
    log::debug!("{}: EMB1 header rows={} dim={}", path.display(), h.rows, h.dim);

    // validate the header's promise against the real size before allocating
    let expected = h
        .rows
        .checked_mul(u64::from(h.dim))
        .and_then(|v| v.checked_mul(4))
        .and_then(|v| v.checked_add(HEADER_LEN))
        .ok_or_else(|| FormatError::Header {
            path: path.into(),
            detail: format!("rows {} x dim {} overflows", h.rows, h.dim),
        })?;
    if file_len < expected {
        return Err(FormatError::Truncated {
            path: path.into(),
            offset: file_len,
            expected,
        }
        .into());
    }
    if file_len > expected {
        return Err(FormatError::TrailingBytes {
            path: path.into(),
            offset: expected,
            extra: file_len - expected,
        }
        .into());
    }

    let count = (h.rows * u64::from(h.dim)) as usize;
    let mut data = Vec::with_capacity(count);
    let mut buf = vec![0u8; 1 << 16];
    let mut offset = HEADER_LEN;
    while data.len() < count {
        let want = ((count - data.len()) * 4).min(buf.len());
        reader
            .read_exact(&mut buf[..want])
            .map_err(|e| match e.kind() {
                std::io::ErrorKind::UnexpectedEof => FormatError::Truncated {
                    path: path.into(),
                    offset,
                    expected,
                }
                .into(),
                _ => Error::io(path, e),
            })?;
        for chunk in buf[..want].chunks_exact(4) {
            let v = f32::from_le_bytes(chunk.try_into().unwrap());
            if !v.is_finite() {
                return Err(FormatError::NonFiniteBinary {
                    path: path.into(),
                    offset,
                }
                .into());
            }
            data.push(f64::from(v));
            offset += 4;
        }
    }
    EmbeddingSet::new(h.rows as usize, h.dim as usize, data)
}

fn csv_reader(path: &Path, has_headers: bool) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(has_headers)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file))
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    if err.is_io_error() {
        if let csv::ErrorKind::Io(e) = err.into_kind() {
            return Error::io(path, e);
        }
        unreachable!()
    }
    FormatError::Parse {
        path: path.into(),
        line,
        detail: err.to_string(),
    }
    .into()
}

fn read_csv(path: &Path) -> Result<EmbeddingSet> {
    let mut reader = csv_reader(path, false)?;
    let mut data = Vec::new();
    let mut dim = None;
    let mut rows = 0usize;
    let mut first = true;
    for rec in reader.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if first {
            first = false;
            if rec[0].parse::<f64>().is_err() {
                continue; // header line
            }
        }
        let expected = *dim.get_or_insert(rec.len());
        if rec.len() != expected {
            return Err(FormatError::Ragged {
                path: path.into(),
                line,
                expected,
                found: rec.len(),
            }
            .into());
        }
        for field in rec.iter() {
            let v: f64 = field.parse().map_err(|_| FormatError::Parse {
                path: path.into(),
                line,
                detail: format!("not a number: {field:?}"),
            })?;
            if !v.is_finite() {
                return Err(FormatError::NonFiniteCsv { path: path.into(), line }.into());
            }
            data.push(v);
        }
        rows += 1;
    }
    let Some(dim) = dim else {
        return Err(FormatError::Header {
            path: path.into(),
            detail: "no data rows".into(),
        }
        .into());
    };
    EmbeddingSet::new(rows, dim, data)
}

/// Writes the EMB1 binary format. Values are stored as f32, so the
/// round trip is bitwise exact for data that is already single precision.
pub fn write_embeddings(e: &EmbeddingSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let dim = u32::try_from(e.dim()).map_err(|_| FormatError::Header {
        path: path.into(),
        detail: format!("dimension {} does not fit in u32", e.dim()),
    })?;
    let header = EmbeddingFileHeader {
        rows: e.rows() as u64,
        dim,
        dtype: DTYPE_F32,
    };
    let file = File::create(path).map_err(|err| Error::io(path, err))?;
    let mut w = BufWriter::new(file);
    let io = |err| Error::io(path, err);
    w.write_all(&header.to_bytes()).map_err(io)?;
    for &v in e.data() {
        w.write_all(&(v as f32).to_le_bytes()).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// CSV embeddings, one row per line, nine significant digits per value.
pub fn write_embeddings_csv(e: &EmbeddingSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|err| Error::io(path, err))?;
    let mut w = BufWriter::new(file);
    let io = |err| Error::io(path, err);
    for i in 0..e.rows() {
        let line: Vec<String> = e.row(i).iter().map(|v| format!("{v:.8e}")).collect();
        writeln!(w, "{}", line.join(",")).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Reads a label CSV: header required, column `row` required, optional
/// `identity`, every other column an attribute. Empty cells are treated as
/// missing.
pub fn read_labels(path: impl AsRef<Path>) -> Result<LabelTable> {
    let path = path.as_ref();
    let mut reader = csv_reader(path, true)?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let row_col = headers.iter().position(|h| h == "row").ok_or_else(|| FormatError::Header {
        path: path.into(),
        detail: "missing header with required column \"row\"".into(),
    })?;
    let id_col = headers.iter().position(|h| h == "identity");

    let mut table = LabelTable::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if rec.len() != headers.len() {
            return Err(FormatError::Ragged {
                path: path.into(),
                line,
                expected: headers.len(),
                found: rec.len(),
            }
            .into());
        }
        let row: usize = rec[row_col].parse().map_err(|_| FormatError::Parse {
            path: path.into(),
            line,
            detail: format!("row index {:?} is not a non-negative integer", &rec[row_col]),
        })?;
        let mut record = LabelRecord::default();
        for (k, (name, value)) in headers.iter().zip(rec.iter()).enumerate() {
            if k == row_col || value.is_empty() {
                continue;
            }
            if Some(k) == id_col {
                record.identity = Some(value.to_string());
            } else {
                record.attributes.insert(name.to_string(), value.to_string());
            }
        }
        table.insert(row, record).map_err(|e| match e {
            Error::Labels(msg) => Error::Labels(format!("{}:{line}: {msg}", path.display())),
            other => other,
        })?;
    }
    Ok(table)
}

pub fn write_labels(labels: &LabelTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut attrs: Vec<&str> = labels
        .iter()
        .flat_map(|(_, r)| r.attributes.keys().map(String::as_str))
        .collect();
    attrs.sort_unstable();
    attrs.dedup();

    let to_err = |e: csv::Error| csv_error(path, e);
    let file = File::create(path).map_err(|err| Error::io(path, err))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let mut header = vec!["row", "identity"];
    header.extend(&attrs);
    w.write_record(&header).map_err(to_err)?;
    for (row, rec) in labels.iter() {
        let mut fields = vec![row.to_string(), rec.identity.clone().unwrap_or_default()];
        fields.extend(attrs.iter().map(|a| rec.attributes.get(*a).cloned().unwrap_or_default()));
        w.write_record(&fields).map_err(to_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads impostor scores: one cosine per line in the first CSV column, with
/// an optional non-numeric header line.
pub fn read_scores(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let mut reader = csv_reader(path, false)?;
    let mut scores = Vec::new();
    let mut first = true;
    for rec in reader.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec[0].is_empty() {
            continue;
        }
        match rec[0].parse::<f64>() {
            Ok(v) if v.is_finite() => scores.push(v),
            Ok(_) => return Err(FormatError::NonFiniteCsv { path: path.into(), line }.into()),
            Err(_) if first => {}
            Err(_) => {
                return Err(FormatError::Parse {
                    path: path.into(),
                    line,
                    detail: format!("not a number: {:?}", &rec[0]),
                }
                .into())
            }
        }
        first = false;
    }
    Ok(scores)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::domain("ReportFormat", format!("unknown format {other:?}"))),
        }
    }
}

pub const CURVE_CSV_HEADER: &str = "cos_delta,capacity,clamped_population,clamped_identity";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders a report. JSON is pretty-printed; CSV is the curve table (with
/// a leading `category` column for subgroup reports).
pub fn render_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut out = String::new();
            match report {
                Report::Capacity(r) => {
                    out.push_str(CURVE_CSV_HEADER);
                    out.push('\n');
                    for e in &r.curve {
                        out.push_str(&format!(
                            "{},{},{},{}\n",
                            e.cos_delta,
                            opt(e.capacity),
                            e.clamped_population,
                            e.clamped_identity
                        ));
                    }
                }
                Report::Subgroup(r) => {
                    out.push_str("category,");
                    out.push_str(CURVE_CSV_HEADER);
                    out.push('\n');
                    for g in &r.groups {
                        for e in &g.curve {
                            out.push_str(&format!(
                                "{},{},{},{},{}\n",
                                g.category,
                                e.cos_delta,
                                opt(e.capacity),
                                e.clamped_population,
                                e.clamped_identity
                            ));
                        }
                    }
                }
            }
            out
        }
    }
}

pub fn write_report(report: &Report, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_report(report, format)).map_err(|e| Error::io(path, e))
}
