//! Encryption and decryption pipelines.
//!
//! ```text
//! encrypt: plain -> substitute(key1) -> block chain(key2) -> XOR noise(key3) -> cipher
//! decrypt: cipher -> XOR noise(key3) -> unchain(key2) -> inverse substitute(key1) -> plain
//! ```
//!
//! Block chaining splits the image into `Z x Z` blocks visited in row-major
//! block order. The first block is XORed with key2 and every later block with
//! the previous *output* block. Unchaining only needs the received blocks, so
//! a single corrupted cipher byte garbles the same in-block position of its own
//! block and of the next block, and nothing else.
//!
//! Because keys are derived from the plaintext hash, decryption can check its
//! own result: the recovered image must hash to the prefix in the key file.

use crate::chaos::MapParams;
use crate::error::{Error, Result};
use crate::image::{GrayImage, Matrix};
use crate::keys::{check_block_size, hash_prefix, KeyFile, KeySchedule};
use crate::sbox::{inverse_substitute_image, substitute_image, SBoxSet};

fn check_block_key(img: &GrayImage, key2: &Matrix<u8>, block: usize) -> Result<()> {
    check_block_size(img.height(), img.width(), block)?;
    if key2.rows() != block || key2.cols() != block {
        return Err(Error::Dimension(format!(
            "key2 is {}x{} but block size is {block}",
            key2.rows(),
            key2.cols()
        )));
    }
    Ok(())
}

/// Visits every block in row-major block order, handing the callback the
/// row-major pixel offsets of each block row.
fn for_each_block(
    img: &GrayImage,
    block: usize,
    mut f: impl FnMut(&mut dyn Iterator<Item = usize>),
) {
    let width = img.width();
    for br in 0..img.height() / block {
        for bc in 0..width / block {
            let mut offsets = (0..block).flat_map(move |i| {
                let start = (br * block + i) * width + bc * block;
                start..start + block
            });
            f(&mut offsets);
        }
    }
}

/// `X_1 = B_1 ^ key2`, `X_k = B_k ^ X_{k-1}`.
pub fn block_chain_forward(sub: &GrayImage, key2: &Matrix<u8>, block: usize) -> Result<GrayImage> {
    check_block_key(sub, key2, block)?;
    let mut out = sub.clone();
    let mut prev = key2.as_slice().to_vec();
    let src = sub.pixels();
    let dst = out.pixels_mut();
    for_each_block(sub, block, |offsets| {
        for (p, off) in prev.iter_mut().zip(offsets) {
            *p ^= src[off];
            dst[off] = *p;
        }
    });
    Ok(out)
}

/// `B_1 = X_1 ^ key2`, `B_k = X_k ^ X_{k-1}`.
pub fn block_chain_inverse(x: &GrayImage, key2: &Matrix<u8>, block: usize) -> Result<GrayImage> {
    check_block_key(x, key2, block)?;
    let mut out = x.clone();
    let mut prev = key2.as_slice().to_vec();
    let src = x.pixels();
    let dst = out.pixels_mut();
    for_each_block(x, block, |offsets| {
        for (p, off) in prev.iter_mut().zip(offsets) {
            dst[off] = src[off] ^ *p;
            *p = src[off];
        }
    });
    Ok(out)
}

/// Pixel-wise XOR with key3. Its own inverse.
pub fn noise_xor(img: &GrayImage, key3: &Matrix<u8>) -> Result<GrayImage> {
    if !img.same_shape(key3) {
        return Err(Error::Dimension(format!(
            "key3 is {}x{} but image is {}x{}",
            key3.rows(),
            key3.cols(),
            img.height(),
            img.width()
        )));
    }
    let mut out = img.clone();
    for (p, &k) in out.pixels_mut().iter_mut().zip(key3.as_slice()) {
        *p ^= k;
    }
    Ok(out)
}

/// A cipher image and the key file needed to decrypt it.
#[derive(Debug, Clone, PartialEq)]
pub struct CipherArtifacts {
    pub cipher: GrayImage,
    pub key: KeyFile,
}

/// Runs the three forward stages with an already expanded schedule.
pub fn apply_schedule(
    plain: &GrayImage,
    schedule: &KeySchedule,
    boxes: &SBoxSet,
) -> Result<GrayImage> {
    let sub = substitute_image(plain, &schedule.key1, boxes)?;
    let chained = block_chain_forward(&sub, &schedule.key2, schedule.block_size)?;
    noise_xor(&chained, &schedule.key3)
}

/// Runs the three inverse stages. Does not check the result.
pub fn invert_schedule(
    cipher: &GrayImage,
    schedule: &KeySchedule,
    boxes: &SBoxSet,
) -> Result<GrayImage> {
    let chained = noise_xor(cipher, &schedule.key3)?;
    let sub = block_chain_inverse(&chained, &schedule.key2, schedule.block_size)?;
    inverse_substitute_image(&sub, &schedule.key1, boxes)
}

pub fn encrypt(plain: &GrayImage, params: MapParams, block_size: usize) -> Result<CipherArtifacts> {
    encrypt_with(plain, params, block_size, &SBoxSet::default())
}

pub fn encrypt_with(
    plain: &GrayImage,
    params: MapParams,
    block_size: usize,
    boxes: &SBoxSet,
) -> Result<CipherArtifacts> {
    let schedule = KeySchedule::for_image(plain, params, block_size)?;
    Ok(CipherArtifacts {
        cipher: apply_schedule(plain, &schedule, boxes)?,
        key: schedule.key_file(),
    })
}

pub fn decrypt(cipher: &GrayImage, key: &KeyFile) -> Result<GrayImage> {
    decrypt_with(cipher, key, &SBoxSet::default())
}

/// Inverts the pipeline without the hash check. The result is garbage when
/// the key or ciphertext is wrong.
pub fn decrypt_unverified(cipher: &GrayImage, key: &KeyFile, boxes: &SBoxSet) -> Result<GrayImage> {
    if cipher.width() != key.width || cipher.height() != key.height {
        return Err(Error::Dimension(format!(
            "cipher is {}x{} but key file describes {}x{}",
            cipher.height(),
            cipher.width(),
            key.height,
            key.width
        )));
    }
    invert_schedule(cipher, &key.schedule()?, boxes)
}

pub fn decrypt_with(cipher: &GrayImage, key: &KeyFile, boxes: &SBoxSet) -> Result<GrayImage> {
    let plain = decrypt_unverified(cipher, key, boxes)?;
    let recovered = hash_prefix(&plain);
    if recovered != key.seed.hash_prefix() {
        return Err(Error::Integrity {
            expected: key.seed.hash_prefix().to_owned(),
            recovered,
        });
    }
    Ok(plain)
}
