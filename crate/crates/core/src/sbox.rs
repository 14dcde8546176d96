//! Substitution boxes and the per-pixel chaotic substitution layer.
//!
//! Three boxes are used, selected per pixel by key1:
//!
//! * selector 0: the AES S-box, built from inversion in GF(2^8) followed by
//!   the AES affine map;
//! * selector 1: a chaotic permutation, the argsort of 256 logistic-tent
//!   iterates from the fixed public seed `x0 = 0.37`, `r = 3.999`. It fills
//!   the slot of a published table that can be supplied from a file instead
//!   (see [`SBox::from_text`]);
//! * selector 2: the Gray-coded AES S-box, `g(S(v))` with `g(x) = x ^ (x >> 1)`.
//!
//! Looking up row `v >> 4` and column `v & 15` of a 16x16 table is the same as
//! indexing the flat table at `v`.

use std::fmt;

use crate::chaos::{generate, MapKind};
use crate::error::{Error, Result};
use crate::image::{GrayImage, Matrix};

pub const CHAOTIC_SBOX_SEED: f64 = 0.37;
pub const CHAOTIC_SBOX_R: f64 = 3.999;

/// A bijective byte substitution table together with its inverse.
#[derive(Clone, PartialEq, Eq)]
pub struct SBox {
    name: String,
    table: [u8; 256],
    inverse: [u8; 256],
}

impl fmt::Debug for SBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SBox")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl SBox {
    pub fn from_table(name: impl Into<String>, table: [u8; 256]) -> Result<Self> {
        let name = name.into();
        let mut inverse = [0u8; 256];
        let mut seen = [false; 256];
        for (v, &s) in table.iter().enumerate() {
            if std::mem::replace(&mut seen[s as usize], true) {
                return Err(Error::NotBijective(format!(
                    "{name}: output {s} appears more than once"
                )));
            }
            inverse[s as usize] = v as u8;
        }
        Ok(SBox {
            name,
            table,
            inverse,
        })
    }

    /// Parses 256 whitespace-separated decimal bytes.
    pub fn from_text(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut table = [0u8; 256];
        let mut count = 0usize;
        for tok in text.split_whitespace() {
            let v: u8 = tok
                .parse()
                .map_err(|_| Error::SBoxFile(format!("{tok:?} is not a byte value")))?;
            if count == 256 {
                return Err(Error::SBoxFile("more than 256 entries".into()));
            }
            table[count] = v;
            count += 1;
        }
        if count != 256 {
            return Err(Error::SBoxFile(format!(
                "expected 256 entries, found {count}"
            )));
        }
        Self::from_table(name, table)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(1024);
        for row in self.table.chunks(16) {
            let line: Vec<String> = row.iter().map(u8::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &[u8; 256] {
        &self.table
    }

    pub fn inverse(&self) -> &[u8; 256] {
        &self.inverse
    }

    #[inline]
    pub fn apply(&self, v: u8) -> u8 {
        self.table[v as usize]
    }

    #[inline]
    pub fn invert(&self, v: u8) -> u8 {
        self.inverse[v as usize]
    }
}

fn gf_mul(mut a: u8, mut b: u8) -> u8 {
    let mut p = 0u8;
    while b != 0 {
        if b & 1 != 0 {
            p ^= a;
        }
        let carry = a & 0x80 != 0;
        a <<= 1;
        if carry {
            a ^= 0x1b;
        }
        b >>= 1;
    }
    p
}

/// Multiplicative inverse in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1, with 0 -> 0.
fn gf_inv(a: u8) -> u8 {
    // a^254 = a^-1 for nonzero a; 0^254 = 0
    let mut result = 1u8;
    let mut base = a;
    let mut e = 254u32;
    while e > 0 {
        if e & 1 != 0 {
            result = gf_mul(result, base);
        }
        base = gf_mul(base, base);
        e >>= 1;
    }
    if a == 0 {
        0
    } else {
        result
    }
}

fn aes_affine(b: u8) -> u8 {
    b ^ b.rotate_left(1) ^ b.rotate_left(2) ^ b.rotate_left(3) ^ b.rotate_left(4) ^ 0x63
}

fn aes_table() -> [u8; 256] {
    let mut t = [0u8; 256];
    for (v, slot) in t.iter_mut().enumerate() {
        *slot = aes_affine(gf_inv(v as u8));
    }
    t
}

#[inline]
pub fn gray_code(x: u8) -> u8 {
    x ^ (x >> 1)
}

pub fn build_aes_sbox() -> SBox {
    SBox::from_table("aes", aes_table()).expect("AES S-box is a bijection")
}

pub fn build_gray_sbox() -> SBox {
    let aes = aes_table();
    let mut t = [0u8; 256];
    for (slot, &s) in t.iter_mut().zip(aes.iter()) {
        *slot = gray_code(s);
    }
    SBox::from_table("gray", t).expect("gray-coded AES S-box is a bijection")
}

/// Argsort of 256 logistic-tent iterates; equal iterates keep index order.
pub fn build_chaotic_sbox(seed_x0: f64, r: f64) -> Result<SBox> {
    let seq = generate(seed_x0, r, 256, MapKind::LogisticTent)?;
    let values = seq.values();
    let mut order: Vec<usize> = (0..256).collect();
    // stable sort keeps ties in index order
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut t = [0u8; 256];
    for (slot, idx) in t.iter_mut().zip(order) {
        *slot = idx as u8;
    }
    SBox::from_table("chaotic", t)
}

/// The three boxes indexed by key1 selector value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SBoxSet {
    boxes: [SBox; 3],
}

impl SBoxSet {
    pub fn new(s1: SBox, s2: SBox, s3: SBox) -> Self {
        SBoxSet {
            boxes: [s1, s2, s3],
        }
    }

    /// Default set with the middle slot replaced, e.g. by a table loaded from a file.
    pub fn with_second(s2: SBox) -> Self {
        Self::new(build_aes_sbox(), s2, build_gray_sbox())
    }

    pub fn get(&self, selector: u8) -> &SBox {
        &self.boxes[selector as usize]
    }

    pub fn boxes(&self) -> &[SBox; 3] {
        &self.boxes
    }
}

impl Default for SBoxSet {
    fn default() -> Self {
        let chaotic = build_chaotic_sbox(CHAOTIC_SBOX_SEED, CHAOTIC_SBOX_R)
            .expect("fixed chaotic S-box parameters are valid");
        Self::with_second(chaotic)
    }
}

fn check_selectors(img: &GrayImage, key1: &Matrix<u8>) -> Result<()> {
    if !img.same_shape(key1) {
        return Err(Error::Dimension(format!(
            "key1 is {}x{} but image is {}x{}",
            key1.rows(),
            key1.cols(),
            img.height(),
            img.width()
        )));
    }
    if let Some(bad) = key1.as_slice().iter().find(|&&s| s > 2) {
        return Err(Error::Parameter(format!(
            "S-box selector {bad} is not in 0..=2"
        )));
    }
    Ok(())
}

/// `out(i, j) = boxes[key1(i, j)].table[img(i, j)]`
pub fn substitute_image(img: &GrayImage, key1: &Matrix<u8>, boxes: &SBoxSet) -> Result<GrayImage> {
    check_selectors(img, key1)?;
    let mut out = img.clone();
    for (p, &sel) in out.pixels_mut().iter_mut().zip(key1.as_slice()) {
        *p = boxes.get(sel).apply(*p);
    }
    Ok(out)
}

pub fn inverse_substitute_image(
    img: &GrayImage,
    key1: &Matrix<u8>,
    boxes: &SBoxSet,
) -> Result<GrayImage> {
    check_selectors(img, key1)?;
    let mut out = img.clone();
    for (p, &sel) in out.pixels_mut().iter_mut().zip(key1.as_slice()) {
        *p = boxes.get(sel).invert(*p);
    }
    Ok(out)
}
