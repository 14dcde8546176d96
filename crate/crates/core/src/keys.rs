//! Plaintext-derived seeding and the three keystream matrices.
//!
//! The seed is taken from the SHA-256 digest of the raw row-major pixel
//! buffer: the first 11 lowercase hex characters are parsed as an integer
//! `d`, and `dd = d / 10^14` becomes the initial state of every map. All
//! three keys start from the same `dd`.
//!
//! | key  | map                  | length | modulus | shape |
//! |------|----------------------|--------|---------|-------|
//! | key1 | logistic-tent        | M*N    | 3       | M x N |
//! | key2 | logistic-tent        | Z*Z    | 256     | Z x Z |
//! | key3 | logistic-sine-cosine | M*N    | 256     | M x N |
//!
//! Because key1 and key2 share map, seed and `r`, key2's raw iterates are a
//! prefix of key1's.
//!
//! The key file written here is secret material. It holds the hash prefix
//! from which every key is regenerated, so anyone holding it can decrypt.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::chaos::{generate, quantize, MapKind, MapParams};
use crate::error::{Error, Result};
use crate::image::{reshape_row_major, GrayImage, Matrix};

/// Number of hex digits of the digest used as seed material.
pub const HASH_PREFIX_LEN: usize = 11;

/// Seed used in place of `dd = 0`, which is a fixed point of both maps.
pub const DEGENERATE_SEED: f64 = 1e-14;

pub const DEFAULT_BLOCK_SIZE: usize = 16;

pub const KEY_FILE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SeedMaterial {
    hash_prefix: String,
    d: u64,
    dd: f64,
}

impl SeedMaterial {
    /// Builds the seed from an 11-character lowercase hex prefix.
    pub fn from_prefix(prefix: &str) -> Result<Self> {
        let valid = prefix.len() == HASH_PREFIX_LEN
            && prefix
                .bytes()
                .all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b));
        if !valid {
            return Err(Error::Parameter(format!(
                "hash prefix must be {HASH_PREFIX_LEN} lowercase hex characters, got {prefix:?}"
            )));
        }
        let d = u64::from_str_radix(prefix, 16)
            .map_err(|e| Error::Parameter(format!("hash prefix {prefix:?}: {e}")))?;
        let dd = if d == 0 {
            DEGENERATE_SEED
        } else {
            d as f64 / 1e14
        };
        Ok(SeedMaterial {
            hash_prefix: prefix.to_owned(),
            d,
            dd,
        })
    }

    pub fn hash_prefix(&self) -> &str {
        &self.hash_prefix
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Initial state shared by all three maps.
    pub fn dd(&self) -> f64 {
        self.dd
    }
}

/// Lowercase hex prefix of the SHA-256 digest of the raw pixel buffer.
pub fn hash_prefix(img: &GrayImage) -> String {
    let digest = Sha256::digest(img.pixels());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        write!(hex, "{byte:02x}").unwrap();
    }
    hex.truncate(HASH_PREFIX_LEN);
    hex
}

pub fn derive_seed(img: &GrayImage) -> Result<SeedMaterial> {
    if img.is_empty() {
        return Err(Error::Parameter("cannot seed from an empty image".into()));
    }
    SeedMaterial::from_prefix(&hash_prefix(img))
}

fn to_bytes(values: Vec<u32>) -> Vec<u8> {
    // quantize guarantees every value is below the modulus (<= 256)
    values.into_iter().map(|v| v as u8).collect()
}

/// S-box selectors in `{0, 1, 2}`.
pub fn build_key1(
    seed: &SeedMaterial,
    params: &MapParams,
    rows: usize,
    cols: usize,
) -> Result<Matrix<u8>> {
    let seq = generate(seed.dd, params.r_lt(), rows * cols, MapKind::LogisticTent)?;
    reshape_row_major(to_bytes(quantize(&seq, 3)?), rows, cols)
}

/// Byte key mixed into the first diffusion block.
pub fn build_key2(seed: &SeedMaterial, params: &MapParams, block: usize) -> Result<Matrix<u8>> {
    if block == 0 {
        return Err(Error::Parameter("block size must be at least 1".into()));
    }
    let seq = generate(seed.dd, params.r_lt(), block * block, MapKind::LogisticTent)?;
    reshape_row_major(to_bytes(quantize(&seq, 256)?), block, block)
}

/// Noise layer XORed over the whole diffused image.
pub fn build_key3(
    seed: &SeedMaterial,
    params: &MapParams,
    rows: usize,
    cols: usize,
) -> Result<Matrix<u8>> {
    let seq = generate(
        seed.dd,
        params.r_lsc(),
        rows * cols,
        MapKind::LogisticSineCosine,
    )?;
    reshape_row_major(to_bytes(quantize(&seq, 256)?), rows, cols)
}

pub(crate) fn check_block_size(rows: usize, cols: usize, block: usize) -> Result<()> {
    if block == 0 {
        return Err(Error::Parameter("block size must be at least 1".into()));
    }
    if !rows.is_multiple_of(block) || !cols.is_multiple_of(block) {
        return Err(Error::Divisibility {
            height: rows,
            width: cols,
            block,
        });
    }
    Ok(())
}

/// The expanded key material for one image.
#[derive(Debug, Clone, PartialEq)]
pub struct KeySchedule {
    pub key1: Matrix<u8>,
    pub key2: Matrix<u8>,
    pub key3: Matrix<u8>,
    pub params: MapParams,
    pub block_size: usize,
    pub seed: SeedMaterial,
}

impl KeySchedule {
    pub fn build(
        seed: SeedMaterial,
        params: MapParams,
        block_size: usize,
        rows: usize,
        cols: usize,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Parameter("image must be non-empty".into()));
        }
        check_block_size(rows, cols, block_size)?;
        Ok(KeySchedule {
            key1: build_key1(&seed, &params, rows, cols)?,
            key2: build_key2(&seed, &params, block_size)?,
            key3: build_key3(&seed, &params, rows, cols)?,
            params,
            block_size,
            seed,
        })
    }

    pub fn for_image(img: &GrayImage, params: MapParams, block_size: usize) -> Result<Self> {
        Self::build(
            derive_seed(img)?,
            params,
            block_size,
            img.height(),
            img.width(),
        )
    }

    pub fn key_file(&self) -> KeyFile {
        KeyFile {
            seed: self.seed.clone(),
            params: self.params,
            block_size: self.block_size,
            width: self.key1.cols(),
            height: self.key1.rows(),
        }
    }
}

/// Everything a decryptor needs to regenerate a [`KeySchedule`].
///
/// Text format, UTF-8 with LF line endings. Blank lines and lines starting
/// with `#` are ignored; every other line is `key = value`. All seven keys
/// are required exactly once and unknown keys are rejected:
///
/// ```text
/// version = 1
/// hash_prefix = 1f0c3a9e4b2
/// r_lt = 3.99
/// r_lsc = 0.5
/// z = 16
/// width = 256
/// height = 256
/// ```
///
/// Reals are written in shortest round-trip decimal form.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyFile {
    pub seed: SeedMaterial,
    pub params: MapParams,
    pub block_size: usize,
    pub width: usize,
    pub height: usize,
}

impl KeyFile {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::Parameter(format!(
                "image dimensions must be positive, got {}x{}",
                self.height, self.width
            )));
        }
        MapParams::new(self.params.r_lt(), self.params.r_lsc())?;
        check_block_size(self.height, self.width, self.block_size)
    }

    pub fn schedule(&self) -> Result<KeySchedule> {
        self.validate()?;
        KeySchedule::build(
            self.seed.clone(),
            self.params,
            self.block_size,
            self.height,
            self.width,
        )
    }

    pub fn to_text(&self) -> String {
        format!(
            "# noisecrypt key file: secret, grants decryption\n\
             version = {KEY_FILE_VERSION}\n\
             hash_prefix = {}\n\
             r_lt = {}\n\
             r_lsc = {}\n\
             z = {}\n\
             width = {}\n\
             height = {}\n",
            self.seed.hash_prefix,
            self.params.r_lt(),
            self.params.r_lsc(),
            self.block_size,
            self.width,
            self.height,
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut fields: [Option<&str>; 7] = [None; 7];
        const NAMES: [&str; 7] = [
            "version",
            "hash_prefix",
            "r_lt",
            "r_lsc",
            "z",
            "width",
            "height",
        ];
        for (lineno, raw) in text.split('\n').enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::KeyFileMalformed(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            let idx = NAMES.iter().position(|n| *n == key).ok_or_else(|| {
                Error::KeyFileMalformed(format!("line {}: unknown key {key:?}", lineno + 1))
            })?;
            if fields[idx].replace(value.trim()).is_some() {
                return Err(Error::KeyFileMalformed(format!(
                    "line {}: duplicate key {key:?}",
                    lineno + 1
                )));
            }
        }
        let get = |i: usize| {
            fields[i].ok_or_else(|| Error::KeyFileMalformed(format!("missing key {:?}", NAMES[i])))
        };
        fn num<T: std::str::FromStr>(name: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::KeyFileMalformed(format!("{name}: cannot parse {v:?}")))
        }

        let version: u32 = num("version", get(0)?)?;
        if version != KEY_FILE_VERSION {
            return Err(Error::KeyFileVersion {
                found: version,
                expected: KEY_FILE_VERSION,
            });
        }
        let seed = SeedMaterial::from_prefix(get(1)?)
            .map_err(|e| Error::KeyFileMalformed(e.to_string()))?;
        let params = MapParams::new(num("r_lt", get(2)?)?, num("r_lsc", get(3)?)?)?;
        let key = KeyFile {
            seed,
            params,
            block_size: num("z", get(4)?)?,
            width: num("width", get(5)?)?,
            height: num("height", get(6)?)?,
        };
        key.validate()?;
        Ok(key)
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        let text = String::from_utf8(bytes)
            .map_err(|_| Error::KeyFileMalformed("key file is not valid UTF-8".into()))?;
        Self::parse(&text)
    }
}
