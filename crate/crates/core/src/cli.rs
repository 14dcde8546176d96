//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input or parameters, 3 I/O failure,
//! 4 integrity failure on decrypt. Every failure prints one line to stderr
//! of the form `error:<category>: <message>`. Output files are written to a
//! temporary file in the destination directory and renamed into place, so a
//! failed command leaves no partial output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use tempfile::NamedTempFile;

use crate::chaos::MapParams;
use crate::cipher::{decrypt_with, encrypt_with};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::keys::{KeyFile, DEFAULT_BLOCK_SIZE};
use crate::metrics::{entropy, full_report, histogram, GlcmConfig, MetricsReport};
use crate::pgm::{load_pgm, write_pgm};
use crate::sbox::{SBox, SBoxSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INTEGRITY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "noisecrypt",
    version,
    about = "Chaotic grayscale image cipher and security metrics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encrypt a binary PGM image and write its key file
    Encrypt {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        /// Where to write the key file (secret: it grants decryption)
        #[arg(long, short)]
        key: PathBuf,
        #[command(flatten)]
        cipher: CipherOpts,
    },
    /// Decrypt a cipher PGM with its key file and verify the result
    Decrypt {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        key: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        /// Replacement table for the second S-box (must match the one used to encrypt)
        #[arg(long)]
        sbox: Option<PathBuf>,
    },
    /// Compute the security metrics of a plain/cipher pair
    Analyze {
        #[arg(long)]
        plain: PathBuf,
        #[arg(long)]
        cipher: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        plain_histogram: PathBuf,
        #[arg(long)]
        cipher_histogram: PathBuf,
    },
    /// Differential test: encrypt an image and a one-bit-modified copy, report NPCR/UACI
    Diff {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Bit to flip as `row,col,bit`, or `none` to compare the image with itself
        #[arg(long, default_value = "0,0,0")]
        bit: BitPosition,
        #[command(flatten)]
        cipher: CipherOpts,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CipherOpts {
    /// Logistic-tent control parameter, in (0, 4]
    #[arg(long, default_value_t = MapParams::DEFAULT_R_LT, allow_negative_numbers = true)]
    pub r_lt: f64,
    /// Logistic-sine-cosine control parameter, in [0, 1]
    #[arg(long, default_value_t = MapParams::DEFAULT_R_LSC, allow_negative_numbers = true)]
    pub r_lsc: f64,
    /// Diffusion block size; must divide both image dimensions
    #[arg(long, short = 'z', default_value_t = DEFAULT_BLOCK_SIZE)]
    pub block_size: usize,
    /// Replacement table for the second S-box: 256 whitespace-separated decimal bytes
    #[arg(long)]
    pub sbox: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitPosition {
    None,
    At { row: usize, col: usize, bit: u8 },
}

impl FromStr for BitPosition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("none") {
            return Ok(BitPosition::None);
        }
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [row, col, bit] = parts.as_slice() else {
            return Err(format!("expected `row,col,bit` or `none`, got {s:?}"));
        };
        let bad = |what: &str| format!("invalid {what} in bit position {s:?}");
        let bit: u8 = bit.parse().map_err(|_| bad("bit"))?;
        if bit > 7 {
            return Err(bad("bit"));
        }
        Ok(BitPosition::At {
            row: row.parse().map_err(|_| bad("row"))?,
            col: col.parse().map_err(|_| bad("col"))?,
            bit,
        })
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::Integrity { .. } => EXIT_INTEGRITY,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error:usage: {first}");
            return EXIT_INVALID;
        }
    };
    match execute(&cli.command) {
        Ok(summary) => {
            println!("{summary}");
            EXIT_OK
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error:{}: {msg}", e.category());
            exit_code(&e)
        }
    }
}

/// Runs one command and returns its one-line summary.
pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Encrypt {
            input,
            output,
            key,
            cipher,
        } => cmd_encrypt(input, output, key, cipher),
        Command::Decrypt {
            input,
            key,
            output,
            sbox,
        } => cmd_decrypt(input, key, output, sbox.as_deref()),
        Command::Analyze {
            plain,
            cipher,
            report,
            plain_histogram,
            cipher_histogram,
        } => cmd_analyze(plain, cipher, report, plain_histogram, cipher_histogram),
        Command::Diff {
            input,
            report,
            bit,
            cipher,
        } => cmd_diff(input, report, *bit, cipher),
    }
}

fn load_boxes(path: Option<&Path>) -> Result<SBoxSet> {
    match path {
        None => Ok(SBoxSet::default()),
        Some(p) => {
            let text = fs::read_to_string(p)?;
            Ok(SBoxSet::with_second(SBox::from_text(
                p.display().to_string(),
                &text,
            )?))
        }
    }
}

fn staged(path: &Path, bytes: &[u8]) -> Result<NamedTempFile> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    Ok(tmp)
}

/// Writes every file only after all of them have been staged successfully.
fn write_all_atomic(files: &[(&Path, &[u8])]) -> Result<()> {
    let staged: Vec<NamedTempFile> = files
        .iter()
        .map(|(p, b)| staged(p, b))
        .collect::<Result<_>>()?;
    for (tmp, (path, _)) in staged.into_iter().zip(files) {
        tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    }
    Ok(())
}

fn cmd_encrypt(input: &Path, output: &Path, key: &Path, opts: &CipherOpts) -> Result<String> {
    let params = MapParams::new(opts.r_lt, opts.r_lsc)?;
    let boxes = load_boxes(opts.sbox.as_deref())?;
    let plain = load_pgm(input)?;
    let art = encrypt_with(&plain, params, opts.block_size, &boxes)?;
    write_all_atomic(&[
        (output, &write_pgm(&art.cipher)),
        (key, art.key.to_text().as_bytes()),
    ])?;
    Ok(format!(
        "encrypted {}x{} image, Z={}, cipher entropy {:.4}",
        plain.height(),
        plain.width(),
        opts.block_size,
        entropy(&histogram(&art.cipher))
    ))
}

fn cmd_decrypt(input: &Path, key: &Path, output: &Path, sbox: Option<&Path>) -> Result<String> {
    let boxes = load_boxes(sbox)?;
    let key = KeyFile::read_from(key)?;
    let cipher = load_pgm(input)?;
    let plain = decrypt_with(&cipher, &key, &boxes)?;
    write_all_atomic(&[(output, &write_pgm(&plain))])?;
    Ok(format!(
        "decrypted {}x{} image, hash prefix {} verified",
        plain.height(),
        plain.width(),
        key.seed.hash_prefix()
    ))
}

fn cmd_analyze(
    plain: &Path,
    cipher: &Path,
    report: &Path,
    plain_hist: &Path,
    cipher_hist: &Path,
) -> Result<String> {
    let p = load_pgm(plain)?;
    let c = load_pgm(cipher)?;
    let r = full_report(&p, &c, None, &GlcmConfig::default())?;
    write_all_atomic(&[
        (report, r.to_text().as_bytes()),
        (plain_hist, histogram(&p).to_csv().as_bytes()),
        (cipher_hist, histogram(&c).to_csv().as_bytes()),
    ])?;
    Ok(format!(
        "cipher entropy {:.4}, contrast {:.4}, homogeneity {:.4}, energy {:.4}",
        r.cipher.entropy, r.cipher.contrast, r.cipher.homogeneity, r.cipher.energy
    ))
}

/// Encrypts `plain` and its bit-flipped copy independently; each is rekeyed
/// from its own hash.
pub fn differential_report(
    plain: &GrayImage,
    bit: BitPosition,
    params: MapParams,
    block_size: usize,
    boxes: &SBoxSet,
) -> Result<MetricsReport> {
    let tampered = match bit {
        BitPosition::None => plain.clone(),
        BitPosition::At { row, col, bit } => plain.with_bit_flipped(row, col, bit)?,
    };
    let c1 = encrypt_with(plain, params, block_size, boxes)?.cipher;
    let c2 = encrypt_with(&tampered, params, block_size, boxes)?.cipher;
    full_report(plain, &c1, Some(&c2), &GlcmConfig::default())
}

fn cmd_diff(input: &Path, report: &Path, bit: BitPosition, opts: &CipherOpts) -> Result<String> {
    let params = MapParams::new(opts.r_lt, opts.r_lsc)?;
    let boxes = load_boxes(opts.sbox.as_deref())?;
    let plain = load_pgm(input)?;
    let r = differential_report(&plain, bit, params, opts.block_size, &boxes)?;
    write_all_atomic(&[(report, r.to_text().as_bytes())])?;
    Ok(format!(
        "NPCR {:.4}%, UACI {:.4}%",
        r.npcr.unwrap_or_default(),
        r.uaci.unwrap_or_default()
    ))
}
