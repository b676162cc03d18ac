//! On-disk cache of exact `β_k` polynomials.
//!
//! ```text
//! zeta-alpha-cache v1 max_k=3
//! 1:1/2
//! 2:1/12;1/8
//! 3:1/24;1/16;1/48
//! <sha256 hex of every preceding byte>
//! ```
//!
//! Each record lists the coefficients of `β_k`, lowest power first, in
//! reduced `num/den` form (the denominator is omitted when it is 1). The
//! serialization is canonical, so loading and re-saving reproduces the file
//! byte for byte.

use std::fmt;
use std::io;
use std::path::Path;

use sha2::{Digest, Sha256};
use zeta_alpha_core::{AlphaTable, RationalPolynomial};

pub const MAGIC: &str = "zeta-alpha-cache";
pub const VERSION: u32 = 1;

#[derive(Debug)]
pub enum CacheError {
    Io(io::Error),
    /// A well-formed header with a different format version.
    Version { found: String },
    Corrupt(String),
    /// A prefix longer than the cache was requested.
    Limit { requested: usize, available: usize },
}

impl fmt::Display for CacheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheError::Io(e) => write!(f, "cache io error: {e}"),
            CacheError::Version { found } => {
                write!(f, "cache format version {found} is not supported (expected v{VERSION})")
            }
            CacheError::Corrupt(why) => write!(f, "corrupt cache: {why}"),
            CacheError::Limit { requested, available } => {
                write!(f, "cache holds k <= {available}, requested {requested}")
            }
        }
    }
}

impl std::error::Error for CacheError {}

impl From<io::Error> for CacheError {
    fn from(e: io::Error) -> Self {
        CacheError::Io(e)
    }
}

pub fn checksum(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn encode_body(table: &AlphaTable) -> String {
    let mut body = format!("{MAGIC} v{VERSION} max_k={}\n", table.max_k());
    for (i, beta) in table.betas().iter().enumerate() {
        body.push_str(&format!("{}:{}\n", i + 1, beta.to_strings().join(";")));
    }
    body
}

/// The checksum line that [`encode`] writes for `table`.
pub fn table_checksum(table: &AlphaTable) -> String {
    checksum(encode_body(table).as_bytes())
}

pub fn encode(table: &AlphaTable) -> Vec<u8> {
    let mut body = encode_body(table);
    let sum = checksum(body.as_bytes());
    body.push_str(&sum);
    body.push('\n');
    body.into_bytes()
}

fn parse_header(line: &str) -> Result<usize, CacheError> {
    let mut parts = line.split(' ');
    let (magic, version, max_k) = (parts.next(), parts.next(), parts.next());
    if magic != Some(MAGIC) || parts.next().is_some() {
        return Err(CacheError::Corrupt("missing cache header".into()));
    }
    let version = version.and_then(|v| v.strip_prefix('v')).ok_or_else(|| CacheError::Corrupt("bad version field".into()))?;
    if version != VERSION.to_string() {
        return Err(CacheError::Version { found: version.into() });
    }
    max_k
        .and_then(|m| m.strip_prefix("max_k="))
        .and_then(|m| m.parse().ok())
        .ok_or_else(|| CacheError::Corrupt("bad max_k field".into()))
}

/// Decodes a cache, keeping the first `kmax` entries when given. The header
/// version and the checksum are verified before any record is read.
pub fn decode(bytes: &[u8], kmax: Option<usize>) -> Result<AlphaTable, CacheError> {
    let text = std::str::from_utf8(bytes).map_err(|_| CacheError::Corrupt("not utf-8".into()))?;
    let header = text.split('\n').next().unwrap_or_default();
    let max_k = parse_header(header)?;

    let body_text = text.strip_suffix('\n').ok_or_else(|| CacheError::Corrupt("truncated".into()))?;
    let split = body_text.rfind('\n').ok_or_else(|| CacheError::Corrupt("missing checksum".into()))?;
    let (body, sum) = (&text[..split + 1], &body_text[split + 1..]);
    if checksum(body.as_bytes()) != sum {
        return Err(CacheError::Corrupt("checksum mismatch".into()));
    }

    let records: Vec<&str> = body.lines().skip(1).collect();
    if records.len() != max_k {
        return Err(CacheError::Corrupt(format!("expected {max_k} records, found {}", records.len())));
    }
    let want = kmax.unwrap_or(max_k);
    if want > max_k {
        return Err(CacheError::Limit { requested: want, available: max_k });
    }
    let mut betas = Vec::with_capacity(want);
    for (i, line) in records.iter().take(want).enumerate() {
        let k = i + 1;
        let (idx, coeffs) =
            line.split_once(':').ok_or_else(|| CacheError::Corrupt(format!("record {k} has no index")))?;
        if idx.parse::<usize>().ok() != Some(k) {
            return Err(CacheError::Corrupt(format!("record {k} is labelled {idx:?}")));
        }
        let items: Vec<&str> = coeffs.split(';').collect();
        let beta = RationalPolynomial::from_strs(&items).map_err(|e| CacheError::Corrupt(format!("record {k}: {e}")))?;
        if items.len() != k || beta.degree() != Some(k - 1) {
            return Err(CacheError::Corrupt(format!("record {k} has the wrong degree")));
        }
        betas.push(beta);
    }
    Ok(AlphaTable::from_betas(betas))
}

/// Writes the cache through a temporary file and a rename so that readers
/// never observe a partial file. Returns the checksum.
pub fn save(path: &Path, table: &AlphaTable) -> Result<String, CacheError> {
    let bytes = encode(table);
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, &bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(table_checksum(table))
}

pub fn load(path: &Path, kmax: Option<usize>) -> Result<AlphaTable, CacheError> {
    decode(&std::fs::read(path)?, kmax)
}
