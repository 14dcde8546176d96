//! Statistical security metrics for plain/cipher image pairs.
//!
//! GLCM statistics use a configurable level count and offset; the default
//! (8 levels, offset (0, 1), gray limits [0, 255], unsymmetric, normalized)
//! gives 10.5 contrast, 1/64 energy and ~0.3894 homogeneity on i.i.d.
//! uniform pixels, which is what a good cipher image should approach.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Gray-level counts of an image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; 256],
}

impl Histogram {
    pub fn from_counts(counts: [u64; 256]) -> Self {
        Histogram { counts }
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `value,count` CSV with a header line and one row per gray level.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,count\n");
        for (v, c) in self.counts.iter().enumerate() {
            writeln!(out, "{v},{c}").unwrap();
        }
        out
    }
}

pub fn histogram(img: &GrayImage) -> Histogram {
    let mut counts = [0u64; 256];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    Histogram { counts }
}

/// `sum (f_i - e)^2 / e` with `e = total / 256`.
pub fn chi_square(hist: &Histogram) -> f64 {
    let expected = hist.total() as f64 / 256.0;
    if expected == 0.0 {
        return 0.0;
    }
    hist.counts
        .iter()
        .map(|&f| {
            let d = f as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Shannon entropy in bits; empty bins contribute nothing.
pub fn entropy(hist: &Histogram) -> f64 {
    let total = hist.total() as f64;
    if total == 0.0 {
        return 0.0;
    }
    hist.counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>()
        .max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GlcmConfig {
    levels: usize,
    offset: (isize, isize),
}

impl GlcmConfig {
    pub fn new(levels: usize, offset: (isize, isize)) -> Result<Self> {
        if !(2..=256).contains(&levels) {
            return Err(Error::Parameter(format!(
                "GLCM levels must be in 2..=256, got {levels}"
            )));
        }
        if offset == (0, 0) {
            return Err(Error::Parameter("GLCM offset must be nonzero".into()));
        }
        Ok(GlcmConfig { levels, offset })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// (row delta, column delta)
    pub fn offset(&self) -> (isize, isize) {
        self.offset
    }

    #[inline]
    fn bin(&self, v: u8) -> usize {
        v as usize * self.levels / 256
    }
}

impl Default for GlcmConfig {
    fn default() -> Self {
        GlcmConfig {
            levels: 8,
            offset: (0, 1),
        }
    }
}

/// Normalized gray-level co-occurrence matrix, row-major `levels x levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct Glcm {
    levels: usize,
    p: Vec<f64>,
}

impl Glcm {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.levels + j]
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.levels;
        self.p
            .iter()
            .enumerate()
            .map(move |(k, &p)| (k / n, k % n, p))
    }
}

pub fn glcm(img: &GrayImage, config: &GlcmConfig) -> Result<Glcm> {
    let (dr, dc) = config.offset;
    let (h, w) = (img.height() as isize, img.width() as isize);
    if dr.abs() >= h || dc.abs() >= w {
        return Err(Error::Parameter(format!(
            "{h}x{w} image has no pixel pairs at offset ({dr},{dc})"
        )));
    }
    let n = config.levels;
    let mut counts = vec![0u64; n * n];
    let rows = (0.max(-dr))..(h.min(h - dr));
    let cols = (0.max(-dc))..(w.min(w - dc));
    for r in rows {
        for c in cols.clone() {
            let a = config.bin(img.get(r as usize, c as usize));
            let b = config.bin(img.get((r + dr) as usize, (c + dc) as usize));
            counts[a * n + b] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    let p = counts
        .into_iter()
        .map(|c| c as f64 / total as f64)
        .collect();
    Ok(Glcm { levels: n, p })
}

/// `sum |i - j|^2 p(i, j)`
pub fn contrast(g: &Glcm) -> f64 {
    g.cells()
        .map(|(i, j, p)| {
            let d = i as f64 - j as f64;
            d * d * p
        })
        .sum()
}

/// `sum p(i, j) / (1 + |i - j|)`
pub fn homogeneity(g: &Glcm) -> f64 {
    g.cells()
        .map(|(i, j, p)| p / (1.0 + i.abs_diff(j) as f64))
        .sum()
}

/// `sum p(i, j)^2`
pub fn energy(g: &Glcm) -> f64 {
    g.p.iter().map(|p| p * p).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
    Diagonal,
}

impl Direction {
    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (0, 1),
            Direction::Vertical => (1, 0),
            Direction::Diagonal => (1, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
            Direction::Diagonal => "diagonal",
        }
    }
}

/// Pearson coefficient from exact integer moments.
fn pearson(pairs: impl Iterator<Item = (u8, u8)>, what: &str) -> Result<f64> {
    let (mut n, mut sx, mut sy, mut sxx, mut syy, mut sxy) =
        (0i128, 0i128, 0i128, 0i128, 0i128, 0i128);
    for (x, y) in pairs {
        let (x, y) = (i128::from(x), i128::from(y));
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    if n < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "{what}: fewer than two samples"
        )));
    }
    let cov = n * sxy - sx * sy;
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx == 0 || vy == 0 {
        return Err(Error::UndefinedCorrelation(format!(
            "{what}: zero variance"
        )));
    }
    Ok((cov as f64 / ((vx as f64).sqrt() * (vy as f64).sqrt())).clamp(-1.0, 1.0))
}

/// Pearson correlation over every pair of neighbours in `direction`.
pub fn adjacent_correlation(img: &GrayImage, direction: Direction) -> Result<f64> {
    let (dr, dc) = direction.offset();
    let (h, w) = (img.height(), img.width());
    if h <= dr || w <= dc {
        return Err(Error::UndefinedCorrelation(format!(
            "{h}x{w} image has no {} neighbours",
            direction.name()
        )));
    }
    let pairs = (0..h - dr)
        .flat_map(move |r| (0..w - dc).map(move |c| (img.get(r, c), img.get(r + dr, c + dc))));
    pearson(pairs, direction.name())
}

/// Pearson correlation between corresponding pixels of two images.
pub fn cross_correlation(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dims(b)?;
    pearson(
        a.pixels().iter().copied().zip(b.pixels().iter().copied()),
        "cross",
    )
}

/// Percentage of positions where the two images differ.
pub fn npcr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dims(b)?;
    let differing = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .filter(|(x, y)| x != y)
        .count();
    Ok(100.0 * differing as f64 / a.len() as f64)
}

/// Mean absolute difference as a percentage of 255.
pub fn uaci(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    a.ensure_same_dims(b)?;
    let total: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| u64::from(x.abs_diff(y)))
        .sum();
    Ok(100.0 * total as f64 / (255.0 * a.len() as f64))
}

/// Per-image statistics, one column of the results table.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageStats {
    pub entropy: f64,
    pub chi_square: f64,
    pub contrast: f64,
    pub homogeneity: f64,
    pub energy: f64,
    /// Horizontal adjacent-pixel correlation; `None` when undefined (constant image).
    pub correlation: Option<f64>,
}

pub fn image_stats(img: &GrayImage, config: &GlcmConfig) -> Result<ImageStats> {
    let hist = histogram(img);
    let g = glcm(img, config)?;
    let correlation = match adjacent_correlation(img, Direction::Horizontal) {
        Ok(v) => Some(v),
        Err(Error::UndefinedCorrelation(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ImageStats {
        entropy: entropy(&hist),
        chi_square: chi_square(&hist),
        contrast: contrast(&g),
        homogeneity: homogeneity(&g),
        energy: energy(&g),
        correlation,
    })
}

pub const REPORT_VERSION: u32 = 1;

/// Everything measured for a plain/cipher pair, optionally with a second
/// cipher of a one-bit-modified plaintext for the differential metrics.
///
/// Serialized as UTF-8 `key = value` lines (`#` comments ignored):
///
/// ```text
/// version = 1
/// width = 256
/// height = 256
/// glcm_levels = 8
/// glcm_offset = 0,1
/// correlation_direction = horizontal
/// plain.entropy = ...        (also chi_square, contrast, homogeneity, energy, correlation)
/// cipher.entropy = ...       (same six fields)
/// cross_correlation = ...
/// npcr = ...                 (only with a tampered cipher)
/// uaci = ...                 (only with a tampered cipher)
/// ```
///
/// Correlations that are undefined are written as `undefined`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub width: usize,
    pub height: usize,
    pub glcm: GlcmConfig,
    pub plain: ImageStats,
    pub cipher: ImageStats,
    pub cross_correlation: Option<f64>,
    pub npcr: Option<f64>,
    pub uaci: Option<f64>,
}

pub fn full_report(
    plain: &GrayImage,
    cipher: &GrayImage,
    tampered_cipher: Option<&GrayImage>,
    config: &GlcmConfig,
) -> Result<MetricsReport> {
    plain.ensure_same_dims(cipher)?;
    let cross = match cross_correlation(plain, cipher) {
        Ok(v) => Some(v),
        Err(Error::UndefinedCorrelation(_)) => None,
        Err(e) => return Err(e),
    };
    let (npcr_v, uaci_v) = match tampered_cipher {
        Some(t) => (Some(npcr(cipher, t)?), Some(uaci(cipher, t)?)),
        None => (None, None),
    };
    Ok(MetricsReport {
        width: plain.width(),
        height: plain.height(),
        glcm: *config,
        plain: image_stats(plain, config)?,
        cipher: image_stats(cipher, config)?,
        cross_correlation: cross,
        npcr: npcr_v,
        uaci: uaci_v,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_owned(), |x| x.to_string())
}

impl MetricsReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("# noisecrypt metrics report\n");
        writeln!(out, "version = {REPORT_VERSION}").unwrap();
        writeln!(out, "width = {}", self.width).unwrap();
        writeln!(out, "height = {}", self.height).unwrap();
        writeln!(out, "glcm_levels = {}", self.glcm.levels).unwrap();
        writeln!(
            out,
            "glcm_offset = {},{}",
            self.glcm.offset.0, self.glcm.offset.1
        )
        .unwrap();
        writeln!(out, "correlation_direction = horizontal").unwrap();
        for (name, s) in [("plain", &self.plain), ("cipher", &self.cipher)] {
            writeln!(out, "{name}.entropy = {}", s.entropy).unwrap();
            writeln!(out, "{name}.chi_square = {}", s.chi_square).unwrap();
            writeln!(out, "{name}.contrast = {}", s.contrast).unwrap();
            writeln!(out, "{name}.homogeneity = {}", s.homogeneity).unwrap();
            writeln!(out, "{name}.energy = {}", s.energy).unwrap();
            writeln!(out, "{name}.correlation = {}", opt(s.correlation)).unwrap();
        }
        writeln!(out, "cross_correlation = {}", opt(self.cross_correlation)).unwrap();
        if let Some(v) = self.npcr {
            writeln!(out, "npcr = {v}").unwrap();
        }
        if let Some(v) = self.uaci {
            writeln!(out, "uaci = {v}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        use std::collections::HashMap;

        let mut map: HashMap<&str, &str> = HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::ReportMalformed(format!("not a key/value line: {line:?}")))?;
            if map.insert(k.trim(), v.trim()).is_some() {
                return Err(Error::ReportMalformed(format!(
                    "duplicate key {:?}",
                    k.trim()
                )));
            }
        }
        let get = |k: &str| {
            map.get(k)
                .copied()
                .ok_or_else(|| Error::ReportMalformed(format!("missing key {k:?}")))
        };
        fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::ReportMalformed(format!("{k}: cannot parse {v:?}")))
        }
        let real = |k: &str| -> Result<f64> { num(k, get(k)?) };
        let maybe = |k: &str| -> Result<Option<f64>> {
            match get(k)? {
                "undefined" => Ok(None),
                v => num(k, v).map(Some),
            }
        };
        let optional =
            |k: &str| -> Result<Option<f64>> { map.get(k).map(|v| num(k, v)).transpose() };

        let version: u32 = num("version", get("version")?)?;
        if version != REPORT_VERSION {
            return Err(Error::ReportMalformed(format!(
                "unsupported version {version}"
            )));
        }
        let (r, c) = get("glcm_offset")?
            .split_once(',')
            .ok_or_else(|| Error::ReportMalformed("glcm_offset must be `row,col`".into()))?;
        let glcm = GlcmConfig::new(
            num("glcm_levels", get("glcm_levels")?)?,
            (num("glcm_offset", r.trim())?, num("glcm_offset", c.trim())?),
        )
        .map_err(|e| Error::ReportMalformed(e.to_string()))?;
        let stats = |prefix: &str| -> Result<ImageStats> {
            Ok(ImageStats {
                entropy: real(&format!("{prefix}.entropy"))?,
                chi_square: real(&format!("{prefix}.chi_square"))?,
                contrast: real(&format!("{prefix}.contrast"))?,
                homogeneity: real(&format!("{prefix}.homogeneity"))?,
                energy: real(&format!("{prefix}.energy"))?,
                correlation: maybe(&format!("{prefix}.correlation"))?,
            })
        };
        Ok(MetricsReport {
            width: num("width", get("width")?)?,
            height: num("height", get("height")?)?,
            glcm,
            plain: stats("plain")?,
            cipher: stats("cipher")?,
            cross_correlation: maybe("cross_correlation")?,
            npcr: optional("npcr")?,
            uaci: optional("uaci")?,
        })
    }
}
