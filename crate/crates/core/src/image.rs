//! Row-major matrices and the 8-bit grayscale image type.

use crate::error::{Error, Result};

/// Dense row-major matrix. Element `k` of the backing buffer lives at
/// row `k / cols`, column `k % cols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn map<U>(self, f: impl FnMut(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.into_iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }
}

/// Lays a flat list out as a `rows x cols` matrix in row-major order.
pub fn reshape_row_major<T>(values: Vec<T>, rows: usize, cols: usize) -> Result<Matrix<T>> {
    let expected = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Parameter(format!("matrix shape {rows}x{cols} overflows")))?;
    if values.len() != expected {
        return Err(Error::Parameter(format!(
            "cannot reshape {} values into {rows}x{cols}",
            values.len()
        )));
    }
    Ok(Matrix {
        rows,
        cols,
        data: values,
    })
}

/// Inverse of [`reshape_row_major`].
pub fn flatten_row_major<T>(matrix: Matrix<T>) -> Vec<T> {
    matrix.data
}

/// An `height x width` image of 8-bit gray levels stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!(
                "image must be non-empty, got {width}x{height}"
            )));
        }
        if width.checked_mul(height) != Some(pixels.len()) {
            return Err(Error::Dimension(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width.saturating_mul(height),
                pixels.len()
            )));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }

    pub fn same_shape<T>(&self, m: &Matrix<T>) -> bool {
        m.rows() == self.height && m.cols() == self.width
    }

    pub(crate) fn ensure_same_dims(&self, other: &GrayImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.height, self.width, other.height, other.width
            )));
        }
        Ok(())
    }

    /// Copy of this image with bit `bit` of pixel (`row`, `col`) inverted.
    pub fn with_bit_flipped(&self, row: usize, col: usize, bit: u8) -> Result<GrayImage> {
        if row >= self.height || col >= self.width || bit > 7 {
            return Err(Error::Parameter(format!(
                "bit position ({row},{col},{bit}) outside {}x{} image",
                self.height, self.width
            )));
        }
        let mut out = self.clone();
        out.pixels[row * self.width + col] ^= 1 << bit;
        Ok(out)
    }
}
