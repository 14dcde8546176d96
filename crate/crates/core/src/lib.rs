//! Grayscale image encryption with hash-seeded hybrid chaotic keystreams.
//!
//! Encryption runs three stages over an 8-bit image:
//!
//! 1. per-pixel substitution through one of three S-boxes, chosen by a
//!    ternary keystream from the logistic-tent map;
//! 2. block-chained XOR diffusion over `Z x Z` blocks, keyed on the first
//!    block by a second logistic-tent keystream;
//! 3. XOR with a noise layer drawn from the logistic-sine-cosine map.
//!
//! All three keystreams are seeded from the SHA-256 digest of the plaintext
//! pixels, so every image encrypts under its own keys. Decryption reverses
//! the stages and checks the recovered image against the stored hash prefix.
//!
//! The [`metrics`] module measures the statistical quality of a cipher image
//! (histogram uniformity, entropy, GLCM texture, correlation, NPCR and UACI).

pub mod chaos;
pub mod cipher;
pub mod cli;
pub mod error;
pub mod image;
pub mod keys;
pub mod metrics;
pub mod pgm;
pub mod sbox;

pub use chaos::{MapKind, MapParams};
pub use cipher::{decrypt, encrypt, CipherArtifacts};
pub use error::{Error, Result};
pub use image::{GrayImage, Matrix};
pub use keys::{KeyFile, KeySchedule, SeedMaterial};
pub use metrics::MetricsReport;
pub use sbox::{SBox, SBoxSet};
