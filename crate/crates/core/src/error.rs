use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the cipher, the metrics, or the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("image dimensions {height}x{width} are not multiples of block size {block}")]
    Divisibility {
        height: usize,
        width: usize,
        block: usize,
    },

    #[error("s-box is not a bijection: {0}")]
    NotBijective(String),

    #[error("malformed s-box file: {0}")]
    SBoxFile(String),

    #[error("malformed key file: {0}")]
    KeyFileMalformed(String),

    #[error("unsupported key file version {found} (expected {expected})")]
    KeyFileVersion { found: u32, expected: u32 },

    #[error(
        "recovered plaintext hash prefix {recovered} does not match key file prefix {expected}"
    )]
    Integrity { expected: String, recovered: String },

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("not a binary PGM file (magic {0:?})")]
    PgmBadMagic(String),

    #[error("unsupported PGM maxval {0} (only 255 is supported)")]
    PgmUnsupportedDepth(u32),

    #[error("malformed PGM header: {0}")]
    PgmHeader(String),

    #[error("PGM header value too large: {0}")]
    PgmHeaderOverflow(String),

    #[error("truncated PGM payload: expected {expected} bytes, found {found}")]
    PgmTruncated { expected: usize, found: usize },

    #[error("{0} unexpected bytes after PGM payload")]
    PgmTrailingBytes(usize),

    #[error("malformed metrics report: {0}")]
    ReportMalformed(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    /// Short machine-readable category, used as the `error:<category>:` prefix by the CLI.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Dimension(_) | Error::Divisibility { .. } => "dimension",
            Error::NotBijective(_) | Error::SBoxFile(_) => "sbox",
            Error::KeyFileMalformed(_) | Error::KeyFileVersion { .. } => "keyfile",
            Error::Integrity { .. } => "integrity",
            Error::UndefinedCorrelation(_) => "correlation",
            Error::PgmBadMagic(_)
            | Error::PgmUnsupportedDepth(_)
            | Error::PgmHeader(_)
            | Error::PgmHeaderOverflow(_)
            | Error::PgmTruncated { .. }
            | Error::PgmTrailingBytes(_) => "format",
            Error::ReportMalformed(_) => "report",
            Error::Io(_) => "io",
        }
    }
}
