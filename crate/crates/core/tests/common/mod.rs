//! Straight-line reference implementations used as test oracles. Nothing in
//! here calls into the library's cipher, key or metric code.
#![allow(dead_code)]

use std::path::PathBuf;

use noisecrypt::GrayImage;
use sha2::{Digest, Sha256};

pub fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/cameraman.pgm")
}

pub fn corpus() -> GrayImage {
    noisecrypt::pgm::load_pgm(&corpus_path()).expect("corpus image")
}

#[rustfmt::skip]
pub const FIPS197_SBOX: [u8; 256] = [
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16,
];

// ---------------------------------------------------------------------------
// cipher oracle
// ---------------------------------------------------------------------------

fn oracle_round(s: f64) -> i64 {
    if s >= 0.0 {
        (s + 0.5).floor() as i64
    } else {
        -((-s + 0.5).floor() as i64)
    }
}

fn oracle_mod(v: i64, m: i64) -> i64 {
    ((v % m) + m) % m
}

fn oracle_lt(x: f64, r: f64) -> f64 {
    let y = if x < 0.5 {
        r * x * (1.0 - x) + (4.0 - r) * x / 2.0
    } else {
        r * x * (1.0 - x) + (4.0 - r) * (1.0 - x) / 2.0
    };
    y % 1.0
}

fn oracle_lsc(x: f64, r: f64) -> f64 {
    let pi = std::f64::consts::PI;
    (pi * (4.0 * r * x * (1.0 - x) + (1.0 - r) * (pi * x).sin() - 0.5)).cos()
}

fn oracle_stream(f: fn(f64, f64) -> f64, x0: f64, r: f64, n: usize, m: i64) -> Vec<u8> {
    let mut out = Vec::new();
    let mut x = x0;
    for _ in 0..n {
        x = f(x, r);
        out.push(oracle_mod(oracle_round(x * 1e14), m) as u8);
    }
    out
}

pub fn oracle_seed(pixels: &[u8]) -> (String, f64) {
    let digest = Sha256::digest(pixels);
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let prefix = hex[..11].to_string();
    let d = u64::from_str_radix(&prefix, 16).unwrap();
    let dd = if d == 0 { 1e-14 } else { d as f64 / 1e14 };
    (prefix, dd)
}

fn oracle_chaotic_box() -> [u8; 256] {
    let mut vals = Vec::new();
    let mut x = 0.37;
    for i in 0..256 {
        x = oracle_lt(x, 3.999);
        vals.push((x, i));
    }
    // selection sort by (value, index)
    let mut table = [0u8; 256];
    let mut used = [false; 256];
    for slot in table.iter_mut() {
        let mut best: Option<usize> = None;
        for (k, &(v, _)) in vals.iter().enumerate() {
            if used[k] {
                continue;
            }
            if best.is_none_or(|b| v < vals[b].0) {
                best = Some(k);
            }
        }
        let b = best.unwrap();
        used[b] = true;
        *slot = vals[b].1 as u8;
    }
    table
}

/// Full forward pipeline written out stage by stage over flat buffers.
pub fn oracle_encrypt(
    pixels: &[u8],
    rows: usize,
    cols: usize,
    r_lt: f64,
    r_lsc: f64,
    z: usize,
) -> Vec<u8> {
    let n = rows * cols;
    let (_, dd) = oracle_seed(pixels);
    let key1 = oracle_stream(oracle_lt, dd, r_lt, n, 3);
    let key2 = oracle_stream(oracle_lt, dd, r_lt, z * z, 256);
    let key3 = oracle_stream(oracle_lsc, dd, r_lsc, n, 256);

    let chaotic = oracle_chaotic_box();
    let mut sub = vec![0u8; n];
    for k in 0..n {
        let v = pixels[k];
        let row = (v >> 4) as usize;
        let col = (v & 0x0f) as usize;
        sub[k] = match key1[k] {
            0 => FIPS197_SBOX[row * 16 + col],
            1 => chaotic[row * 16 + col],
            _ => {
                let s = FIPS197_SBOX[row * 16 + col];
                s ^ (s >> 1)
            }
        };
    }

    let mut xored = vec![0u8; n];
    let mut prev = key2.clone();
    for br in 0..rows / z {
        for bc in 0..cols / z {
            for i in 0..z {
                for j in 0..z {
                    let at = (br * z + i) * cols + bc * z + j;
                    xored[at] = sub[at] ^ prev[i * z + j];
                }
            }
            for i in 0..z {
                for j in 0..z {
                    prev[i * z + j] = xored[(br * z + i) * cols + bc * z + j];
                }
            }
        }
    }

    (0..n).map(|k| xored[k] ^ key3[k]).collect()
}

// ---------------------------------------------------------------------------
// metric oracles
// ---------------------------------------------------------------------------

pub struct OracleMetrics {
    pub entropy: f64,
    pub chi_square: f64,
    pub contrast: f64,
    pub homogeneity: f64,
    pub energy: f64,
    pub horizontal: Option<f64>,
    pub vertical: Option<f64>,
    pub diagonal: Option<f64>,
}

fn oracle_corr(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for k in 0..xs.len() {
        num += (xs[k] - mx) * (ys[k] - my);
        dx += (xs[k] - mx) * (xs[k] - mx);
        dy += (ys[k] - my) * (ys[k] - my);
    }
    if dx == 0.0 || dy == 0.0 {
        None
    } else {
        Some(num / (dx * dy).sqrt())
    }
}

fn oracle_neighbour_corr(img: &GrayImage, dr: usize, dc: usize) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in 0..img.height() - dr {
        for c in 0..img.width() - dc {
            xs.push(img.get(r, c) as f64);
            ys.push(img.get(r + dr, c + dc) as f64);
        }
    }
    oracle_corr(&xs, &ys)
}

pub fn oracle_metrics(img: &GrayImage) -> OracleMetrics {
    let total = (img.width() * img.height()) as f64;
    let mut hist = [0f64; 256];
    for r in 0..img.height() {
        for c in 0..img.width() {
            hist[img.get(r, c) as usize] += 1.0;
        }
    }
    let mut entropy = 0.0;
    let mut chi_square = 0.0;
    let e = total / 256.0;
    for f in hist {
        if f > 0.0 {
            entropy += (f / total) * (total / f).log2();
        }
        chi_square += (f - e) * (f - e) / e;
    }

    let mut g = [[0f64; 8]; 8];
    let mut pairs = 0.0;
    for r in 0..img.height() {
        for c in 0..img.width() - 1 {
            g[(img.get(r, c) / 32) as usize][(img.get(r, c + 1) / 32) as usize] += 1.0;
            pairs += 1.0;
        }
    }
    let (mut contrast, mut homogeneity, mut energy) = (0.0, 0.0, 0.0);
    for (i, row) in g.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            let p = count / pairs;
            let d = (i as f64 - j as f64).abs();
            contrast += d * d * p;
            homogeneity += p / (1.0 + d);
            energy += p * p;
        }
    }

    OracleMetrics {
        entropy,
        chi_square,
        contrast,
        homogeneity,
        energy,
        horizontal: oracle_neighbour_corr(img, 0, 1),
        vertical: oracle_neighbour_corr(img, 1, 0),
        diagonal: oracle_neighbour_corr(img, 1, 1),
    }
}

pub fn oracle_cross(a: &GrayImage, b: &GrayImage) -> Option<f64> {
    let xs: Vec<f64> = a.pixels().iter().map(|&v| v as f64).collect();
    let ys: Vec<f64> = b.pixels().iter().map(|&v| v as f64).collect();
    oracle_corr(&xs, &ys)
}

pub fn oracle_npcr_uaci(a: &GrayImage, b: &GrayImage) -> (f64, f64) {
    let mut diff = 0.0;
    let mut abs = 0.0;
    for k in 0..a.pixels().len() {
        let (x, y) = (a.pixels()[k] as f64, b.pixels()[k] as f64);
        if x != y {
            diff += 1.0;
        }
        abs += (x - y).abs() / 255.0;
    }
    let n = a.pixels().len() as f64;
    (diff / n * 100.0, abs / n * 100.0)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300) || (a - b).abs() <= 1e-15
}
