//! Centre layout and fixed interpolation weights.
//!
//! Field-of-play centres form a rectangular grid; a location inside a grid
//! cell is tied to the cell's four corners by bilinear weights. The try area
//! has its own row of x-only centres with linear weights. A location never
//! carries weight on the other region's centres.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Depth of the try area beyond the try line, metres.
pub const TRY_AREA_DEPTH: f64 = 10.0;

/// Maximum number of non-zero weights for any location.
pub const MAX_SUPPORT: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    FieldOfPlay,
    TryArea,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::FieldOfPlay => "field",
            Region::TryArea => "try",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Centre {
    pub index: usize,
    pub x: f64,
    /// `None` for try-area centres.
    pub y: Option<f64>,
    pub region: Region,
}

/// Grid-cell corners bracketing a field-of-play location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
    /// Column index of `x1` in the x grid.
    pub ix: usize,
    /// Row index of `y1` in the y grid.
    pub iy: usize,
}

/// The centre layout. Field centres are indexed row by row (increasing y,
/// then increasing x) followed by the try-area centres in increasing x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentreSet {
    field_xs: Vec<f64>,
    field_ys: Vec<f64>,
    try_xs: Vec<f64>,
}

impl Default for CentreSet {
    fn default() -> Self {
        CentreSet::standard()
    }
}

impl CentreSet {
    /// The 33-centre layout: 5 × 6 field grid plus 3 try-area centres.
    pub fn standard() -> Self {
        CentreSet {
            field_xs: vec![0.0, 20.0, 35.0, 50.0, 70.0],
            field_ys: vec![-10.0, 20.0, 35.0, 65.0, 90.0, 100.0],
            try_xs: vec![0.0, 35.0, 70.0],
        }
    }

    /// Custom grid coordinates. The field x range and the try x range must
    /// coincide so every location across the pitch width is covered.
    pub fn new(field_xs: Vec<f64>, field_ys: Vec<f64>, try_xs: Vec<f64>) -> Result<Self> {
        fn increasing(v: &[f64]) -> bool {
            v.len() >= 2 && v.iter().all(|c| c.is_finite()) && v.windows(2).all(|w| w[0] < w[1])
        }
        if !increasing(&field_xs) || !increasing(&field_ys) || !increasing(&try_xs) {
            return Err(Error::Config(
                "centre coordinates must be finite, strictly increasing, at least two per axis"
                    .into(),
            ));
        }
        if field_xs.first() != try_xs.first() || field_xs.last() != try_xs.last() {
            return Err(Error::Config(
                "try-area centres must span the same x range as the field".into(),
            ));
        }
        Ok(CentreSet {
            field_xs,
            field_ys,
            try_xs,
        })
    }

    pub fn field_xs(&self) -> &[f64] {
        &self.field_xs
    }

    pub fn field_ys(&self) -> &[f64] {
        &self.field_ys
    }

    pub fn try_xs(&self) -> &[f64] {
        &self.try_xs
    }

    pub fn num_field(&self) -> usize {
        self.field_xs.len() * self.field_ys.len()
    }

    pub fn len(&self) -> usize {
        self.num_field() + self.try_xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_min(&self) -> f64 {
        self.field_xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.field_xs.last().unwrap()
    }

    pub fn y_min(&self) -> f64 {
        self.field_ys[0]
    }

    /// The try line.
    pub fn y_try_line(&self) -> f64 {
        *self.field_ys.last().unwrap()
    }

    pub fn y_max(&self) -> f64 {
        self.y_try_line() + TRY_AREA_DEPTH
    }

    pub fn field_index(&self, ix: usize, iy: usize) -> usize {
        iy * self.field_xs.len() + ix
    }

    pub fn try_index(&self, i: usize) -> usize {
        self.num_field() + i
    }

    pub fn centre(&self, index: usize) -> Centre {
        let nf = self.num_field();
        if index < nf {
            let nx = self.field_xs.len();
            Centre {
                index,
                x: self.field_xs[index % nx],
                y: Some(self.field_ys[index / nx]),
                region: Region::FieldOfPlay,
            }
        } else {
            Centre {
                index,
                x: self.try_xs[index - nf],
                y: None,
                region: Region::TryArea,
            }
        }
    }

    pub fn centres(&self) -> impl Iterator<Item = Centre> + '_ {
        (0..self.len()).map(move |k| self.centre(k))
    }

    /// A representative location for a centre; try-area centres sit midway
    /// into the try area.
    pub fn centre_location(&self, index: usize) -> (f64, f64) {
        let c = self.centre(index);
        (c.x, c.y.unwrap_or(self.y_try_line() + TRY_AREA_DEPTH / 2.0))
    }

    /// Finds the centre index for a table key `(x, y)` where `y = None`
    /// denotes the try area.
    pub fn lookup(&self, x: f64, y: Option<f64>) -> Option<usize> {
        match y {
            Some(y) => {
                let ix = self.field_xs.iter().position(|&c| c == x)?;
                let iy = self.field_ys.iter().position(|&c| c == y)?;
                Some(self.field_index(ix, iy))
            }
            None => {
                let i = self.try_xs.iter().position(|&c| c == x)?;
                Some(self.try_index(i))
            }
        }
    }

    pub fn region_of(&self, y: f64) -> Region {
        if y > self.y_try_line() {
            Region::TryArea
        } else {
            Region::FieldOfPlay
        }
    }

    pub fn in_pitch(&self, x: f64, y: f64) -> bool {
        x >= self.x_min() && x <= self.x_max() && y >= self.y_min() && y <= self.y_max()
    }

    /// Finds the grid cell containing a field-of-play location. Locations on
    /// an interior grid line belong to the cell on their greater side; the
    /// last cell is closed.
    pub fn locate_cell(&self, x: f64, y: f64) -> Result<Cell> {
        if !(x >= self.x_min() && x <= self.x_max() && y >= self.y_min() && y <= self.y_try_line())
        {
            return Err(Error::Region {
                x,
                y,
                region: "field of play",
            });
        }
        let ix = bracket(&self.field_xs, x);
        let iy = bracket(&self.field_ys, y);
        Ok(Cell {
            x1: self.field_xs[ix],
            x2: self.field_xs[ix + 1],
            y1: self.field_ys[iy],
            y2: self.field_ys[iy + 1],
            ix,
            iy,
        })
    }

    /// Bilinear weights on the four corners of the containing cell.
    pub fn field_support(&self, x: f64, y: f64) -> Result<Support> {
        let cell = self.locate_cell(x, y)?;
        let d = (cell.x2 - cell.x1) * (cell.y2 - cell.y1);
        let z11 = (cell.x2 - x) * (cell.y2 - y) / d;
        let z12 = (cell.x2 - x) * (y - cell.y1) / d;
        let z21 = (x - cell.x1) * (cell.y2 - y) / d;
        let z22 = (x - cell.x1) * (y - cell.y1) / d;
        let mut s = Support::default();
        s.push(self.field_index(cell.ix, cell.iy), z11);
        s.push(self.field_index(cell.ix, cell.iy + 1), z12);
        s.push(self.field_index(cell.ix + 1, cell.iy), z21);
        s.push(self.field_index(cell.ix + 1, cell.iy + 1), z22);
        Ok(s)
    }

    /// Linear weights on the two try-area centres bracketing `x`.
    pub fn try_support(&self, x: f64) -> Result<Support> {
        if !(x >= self.x_min() && x <= self.x_max()) {
            return Err(Error::Region {
                x,
                y: f64::NAN,
                region: "try area",
            });
        }
        let i = bracket(&self.try_xs, x);
        let (x1, x2) = (self.try_xs[i], self.try_xs[i + 1]);
        let mut s = Support::default();
        s.push(self.try_index(i), (x2 - x) / (x2 - x1));
        s.push(self.try_index(i + 1), (x - x1) / (x2 - x1));
        Ok(s)
    }

    /// Region dispatch: the try line itself belongs to the field of play.
    pub fn support(&self, x: f64, y: f64) -> Result<Support> {
        if !self.in_pitch(x, y) {
            return Err(Error::Region {
                x,
                y,
                region: "pitch",
            });
        }
        match self.region_of(y) {
            Region::FieldOfPlay => self.field_support(x, y),
            Region::TryArea => self.try_support(x),
        }
    }

    pub fn field_weights(&self, x: f64, y: f64) -> Result<WeightVector> {
        Ok(self.field_support(x, y)?.to_dense(self.len()))
    }

    pub fn try_weights(&self, x: f64) -> Result<WeightVector> {
        Ok(self.try_support(x)?.to_dense(self.len()))
    }

    pub fn weights_for(&self, x: f64, y: f64) -> Result<WeightVector> {
        Ok(self.support(x, y)?.to_dense(self.len()))
    }

    /// Writes the centre table as CSV: `index,x,y,region`, with `TRY` in the
    /// y column for try-area centres.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["index", "x", "y", "region"])?;
        for c in self.centres() {
            let y = c.y.map_or_else(|| "TRY".to_string(), |y| y.to_string());
            out.write_record([
                c.index.to_string(),
                c.x.to_string(),
                y,
                c.region.as_str().to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Index `i` with `grid[i] <= v < grid[i + 1]`, or the last cell when `v`
/// equals the upper end.
fn bracket(grid: &[f64], v: f64) -> usize {
    let upper = grid.partition_point(|&g| g <= v);
    upper.clamp(1, grid.len() - 1) - 1
}

/// Sparse weights: the non-zero entries of a [`WeightVector`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Support {
    len: usize,
    centres: [usize; MAX_SUPPORT],
    weights: [f64; MAX_SUPPORT],
}

impl Support {
    fn push(&mut self, centre: usize, weight: f64) {
        if weight > 0.0 {
            self.centres[self.len] = centre;
            self.weights[self.len] = weight;
            self.len += 1;
        }
    }

    /// Builds a support from explicit pairs; zero weights are dropped.
    pub fn from_pairs(pairs: &[(usize, f64)]) -> Result<Self> {
        if pairs.len() > MAX_SUPPORT {
            return Err(Error::Config(format!(
                "support has {} entries, at most {MAX_SUPPORT} allowed",
                pairs.len()
            )));
        }
        let mut s = Support::default();
        for &(c, w) in pairs {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::Config(format!("invalid weight {w}")));
            }
            s.push(c, w);
        }
        let total = s.weights().iter().sum::<f64>();
        if s.len == 0 || (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "support weights sum to {total}, not 1"
            )));
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn centres(&self) -> &[usize] {
        &self.centres[..self.len]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights[..self.len]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.centres()
            .iter()
            .copied()
            .zip(self.weights().iter().copied())
    }

    pub fn to_dense(&self, n: usize) -> WeightVector {
        let mut weights = vec![0.0; n];
        for (k, w) in self.iter() {
            weights[k] += w;
        }
        WeightVector { weights }
    }
}

/// Per-location weights over every centre.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub weights: Vec<f64>,
}

impl WeightVector {
    pub fn sum(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, w)| w != 0.0)
    }

    pub fn get(&self, k: usize) -> f64 {
        self.weights[k]
    }
}
