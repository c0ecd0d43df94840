//! Dense float grids, binary instance masks and three-plane images.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RasterError {
    #[error("grid of {height}x{width} needs {expected} values, got {got}")]
    WrongLength {
        height: usize,
        width: usize,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("pixel ({row}, {col}) outside a {height}x{width} grid")]
    OutOfBounds {
        row: usize,
        col: usize,
        height: usize,
        width: usize,
    },
}

/// Row-major `H x W` grid of finite values. Used for both disparity and
/// depth maps.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarMap {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

pub type DisparityMap = ScalarMap;
pub type DepthMap = ScalarMap;

impl ScalarMap {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self, RasterError> {
        if values.len() != height * width {
            return Err(RasterError::WrongLength {
                height,
                width,
                expected: height * width,
                got: values.len(),
            });
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(RasterError::NonFinite {
                row: idx / width,
                col: idx % width,
            });
        }
        Ok(Self {
            height,
            width,
            values,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, RasterError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let values: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(height, width, values)
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Result<Self, RasterError> {
        Self::new(height, width, vec![value; height * width])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        (row < self.height && col < self.width).then(|| self.values[row * self.width + col])
    }

    pub fn at(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, RasterError> {
        Self::new(
            self.height,
            self.width,
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn same_shape(&self, height: usize, width: usize) -> Result<(), RasterError> {
        if (self.height, self.width) == (height, width) {
            Ok(())
        } else {
            Err(RasterError::DimensionMismatch(
                self.height,
                self.width,
                height,
                width,
            ))
        }
    }
}

/// A set of pixels on an `H x W` grid, stored as sorted row-major indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceMask {
    height: usize,
    width: usize,
    pixels: Vec<usize>,
}

impl InstanceMask {
    pub fn from_indices(
        height: usize,
        width: usize,
        mut pixels: Vec<usize>,
    ) -> Result<Self, RasterError> {
        pixels.sort_unstable();
        pixels.dedup();
        if let Some(&idx) = pixels.last() {
            if idx >= height * width {
                return Err(RasterError::OutOfBounds {
                    row: idx / width.max(1),
                    col: idx % width.max(1),
                    height,
                    width,
                });
            }
        }
        Ok(Self {
            height,
            width,
            pixels,
        })
    }

    pub fn from_coords(
        height: usize,
        width: usize,
        coords: &[(usize, usize)],
    ) -> Result<Self, RasterError> {
        let mut pixels = Vec::with_capacity(coords.len());
        for &(row, col) in coords {
            if row >= height || col >= width {
                return Err(RasterError::OutOfBounds {
                    row,
                    col,
                    height,
                    width,
                });
            }
            pixels.push(row * width + col);
        }
        Self::from_indices(height, width, pixels)
    }

    /// Every pixel of the grid.
    pub fn full(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            pixels: (0..height * width).collect(),
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn indices(&self) -> &[usize] {
        &self.pixels
    }

    pub fn coords(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pixels
            .iter()
            .map(|&i| (i / self.width, i % self.width))
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        row < self.height
            && col < self.width
            && self.pixels.binary_search(&(row * self.width + col)).is_ok()
    }

    /// Largest row index of any pixel.
    pub fn bottom_row(&self) -> Option<usize> {
        self.pixels.last().map(|&i| i / self.width)
    }

    pub fn intersects(&self, other: &InstanceMask) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.pixels.len() && j < other.pixels.len() {
            match self.pixels[i].cmp(&other.pixels[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Values of `map` under the mask, in row-major order.
    pub fn sample(&self, map: &ScalarMap) -> Result<Vec<f64>, RasterError> {
        map.same_shape(self.height, self.width)?;
        Ok(self.pixels.iter().map(|&i| map.at(i)).collect())
    }
}

/// Three intensity planes with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneImage {
    planes: [ScalarMap; 3],
}

impl PlaneImage {
    pub fn new(planes: [ScalarMap; 3]) -> Result<Self, RasterError> {
        let (h, w) = (planes[0].height(), planes[0].width());
        for p in &planes[1..] {
            p.same_shape(h, w)?;
        }
        Ok(Self { planes })
    }

    /// The same plane replicated three times.
    pub fn gray(plane: ScalarMap) -> Self {
        Self {
            planes: [plane.clone(), plane.clone(), plane],
        }
    }

    pub fn height(&self) -> usize {
        self.planes[0].height()
    }

    pub fn width(&self) -> usize {
        self.planes[0].width()
    }

    pub fn planes(&self) -> &[ScalarMap; 3] {
        &self.planes
    }
}
