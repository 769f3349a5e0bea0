use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fmt;
use crate::geometry::{CentreSet, Region, TRY_AREA_DEPTH};
use crate::mixture::Posterior;
use crate::outcome::{Outcome, NUM_OUTCOMES};

use super::{epv_sd_from_prob_sd, prob_at, prob_sd_at, SdFormula};

pub const GRID_COLUMNS: [&str; 15] = [
    "x", "y", "region", "p_no", "p_drop", "p_pen", "p_u4", "p_c6", "epv", "sd_no", "sd_drop",
    "sd_pen", "sd_u4", "sd_c6", "sd_epv",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub x: f64,
    pub y: f64,
    pub region: Region,
    pub p: [f64; NUM_OUTCOMES],
    pub epv: f64,
    pub sd: [f64; NUM_OUTCOMES],
    pub sd_epv: f64,
}

impl GridRow {
    fn record(&self) -> Vec<String> {
        let mut r = vec![
            fmt::sig(self.x, 9),
            fmt::sig(self.y, 9),
            self.region.as_str().to_string(),
        ];
        r.extend(self.p.iter().map(|v| fmt::sig(*v, 9)));
        r.push(fmt::sig(self.epv, 9));
        r.extend(self.sd.iter().map(|v| fmt::sig(*v, 9)));
        r.push(fmt::sig(self.sd_epv, 9));
        r
    }

    fn same_cell(&self, other: &GridRow) -> bool {
        self.region == other.region
            && (self.x - other.x).abs() < 1e-9
            && (self.y - other.y).abs() < 1e-9
    }
}

/// Whole-pitch evaluation: field rows in increasing y then x, followed by
/// one try-area band at the middle of the try area.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub resolution: f64,
    pub sd_formula: SdFormula,
    pub rows: Vec<GridRow>,
}

fn steps(lo: f64, hi: f64, res: f64) -> Vec<f64> {
    let n = ((hi - lo) / res + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * res).collect()
}

fn check_resolution(resolution: f64) -> Result<()> {
    if resolution > 0.0 && resolution <= 10.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "resolution must lie in (0, 10] metres, got {resolution}"
        )))
    }
}

/// Evaluates mean and sd surfaces from centre summaries.
pub fn render_surface(
    centres: &CentreSet,
    mean: &[[f64; NUM_OUTCOMES]],
    std: &[[f64; NUM_OUTCOMES]],
    resolution: f64,
    formula: SdFormula,
) -> Result<SurfaceGrid> {
    check_resolution(resolution)?;
    let xs = steps(centres.x_min(), centres.x_max(), resolution);
    let ys = steps(centres.y_min(), centres.y_try_line(), resolution);
    let try_y = centres.y_try_line() + TRY_AREA_DEPTH / 2.0;
    let cells = ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| (x, y)))
        .chain(xs.iter().map(|&x| (x, try_y)));
    let mut rows = Vec::with_capacity(xs.len() * (ys.len() + 1));
    for (x, y) in cells {
        let p = prob_at(centres, mean, x, y)?;
        let sd = prob_sd_at(centres, std, x, y, formula)?;
        rows.push(GridRow {
            x,
            y,
            region: centres.region_of(y),
            p: p.0,
            epv: p.epv(),
            sd,
            sd_epv: epv_sd_from_prob_sd(&sd, formula),
        });
    }
    Ok(SurfaceGrid {
        resolution,
        sd_formula: formula,
        rows,
    })
}

pub fn render_grid(
    posterior: &Posterior,
    resolution: f64,
    formula: SdFormula,
) -> Result<SurfaceGrid> {
    render_surface(
        posterior.centres(),
        posterior.mean(),
        posterior.std(),
        resolution,
        formula,
    )
}

fn write_rows<'a, W: Write>(w: W, rows: impl Iterator<Item = &'a GridRow>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(GRID_COLUMNS)?;
    for r in rows {
        out.write_record(r.record())?;
    }
    out.flush()?;
    Ok(())
}

fn field_dims(rows: &[GridRow]) -> (usize, usize) {
    let field: Vec<&GridRow> = rows
        .iter()
        .filter(|r| r.region == Region::FieldOfPlay)
        .collect();
    let nx = field.iter().take_while(|r| r.y == field[0].y).count();
    (nx, if nx == 0 { 0 } else { field.len() / nx })
}

impl SurfaceGrid {
    pub fn field_rows(&self) -> impl Iterator<Item = &GridRow> + '_ {
        self.rows.iter().filter(|r| r.region == Region::FieldOfPlay)
    }

    pub fn try_rows(&self) -> impl Iterator<Item = &GridRow> + '_ {
        self.rows.iter().filter(|r| r.region == Region::TryArea)
    }

    /// Columns and rows of the field-of-play part.
    pub fn field_dims(&self) -> (usize, usize) {
        field_dims(&self.rows)
    }

    /// Every row, try band included.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rows(w, self.rows.iter())
    }

    /// Field-of-play rows only; try-area values are left out of plots.
    pub fn write_plot_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rows(w, self.field_rows())
    }

    pub fn metadata(&self) -> serde_json::Value {
        let (nx, ny) = self.field_dims();
        json!({
            "kind": "surface",
            "resolution": self.resolution,
            "sd_formula": self.sd_formula.as_str(),
            "columns": GRID_COLUMNS,
            "field_columns": nx,
            "field_rows": ny,
            "try_rows": self.try_rows().count(),
            "try_band_y": self.try_rows().next().map(|r| r.y),
            "precision": "9 significant digits",
        })
    }

    /// Writes `<stem>.csv`, `<stem>_plot.csv` and `<stem>.json` into `dir`.
    pub fn save(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        save_triplet(
            dir,
            stem,
            &self.metadata(),
            |w| self.write_csv(w),
            |w| self.write_plot_csv(w),
        )
    }
}

fn save_triplet(
    dir: &Path,
    stem: &str,
    metadata: &serde_json::Value,
    full: impl FnOnce(&mut Vec<u8>) -> Result<()>,
    plot: impl FnOnce(&mut Vec<u8>) -> Result<()>,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let paths = [
        dir.join(format!("{stem}.csv")),
        dir.join(format!("{stem}_plot.csv")),
        dir.join(format!("{stem}.json")),
    ];
    let mut buf = Vec::new();
    full(&mut buf)?;
    fs::write(&paths[0], &buf)?;
    buf.clear();
    plot(&mut buf)?;
    fs::write(&paths[1], &buf)?;
    let mut json = serde_json::to_string_pretty(metadata)?;
    json.push('\n');
    fs::write(&paths[2], json)?;
    Ok(paths.to_vec())
}

/// Reads a full grid CSV. The resolution is taken from the x spacing of the
/// first field row.
pub fn read_grid_csv<R: Read>(r: R) -> Result<SurfaceGrid> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header != GRID_COLUMNS {
        return Err(Error::Parse {
            line: 1,
            message: format!("grid header must be {}", GRID_COLUMNS.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let num = |j: usize| -> Result<f64> {
            rec[j].trim().parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("column {} is not a number: {:?}", GRID_COLUMNS[j], &rec[j]),
            })
        };
        let region = match rec[2].trim() {
            "field" => Region::FieldOfPlay,
            "try" => Region::TryArea,
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown region {other:?}"),
                })
            }
        };
        let mut p = [0.0; NUM_OUTCOMES];
        let mut sd = [0.0; NUM_OUTCOMES];
        for s in 0..NUM_OUTCOMES {
            p[s] = num(3 + s)?;
            sd[s] = num(9 + s)?;
        }
        rows.push(GridRow {
            x: num(0)?,
            y: num(1)?,
            region,
            p,
            epv: num(8)?,
            sd,
            sd_epv: num(14)?,
        });
    }
    let resolution = match rows.as_slice() {
        [a, b, ..] if b.y == a.y && b.x > a.x => b.x - a.x,
        _ => {
            return Err(Error::Parse {
                line: 2,
                message: "cannot infer grid resolution".into(),
            })
        }
    };
    Ok(SurfaceGrid {
        resolution,
        sd_formula: SdFormula::Printed,
        rows,
    })
}

/// Which team model a differential grid compares against the league.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSide {
    Attack,
    Defence,
}

impl ModelSide {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelSide::Attack => "attack",
            ModelSide::Defence => "defence",
        }
    }

    /// Sign that turns a column's team-minus-league value into "good for the
    /// team" (plotted green when positive).
    pub fn favourable_sign(self, column: Option<Outcome>) -> f64 {
        let attack = if column == Some(Outcome::NoPoints) {
            -1.0
        } else {
            1.0
        };
        match self {
            ModelSide::Attack => attack,
            ModelSide::Defence => -attack,
        }
    }
}

/// Team-minus-league values, row-aligned with the input grids.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffGrid {
    pub side: ModelSide,
    pub resolution: f64,
    pub rows: Vec<GridRow>,
}

pub type DiffRow = GridRow;

pub fn diff_grid(team: &SurfaceGrid, league: &SurfaceGrid, side: ModelSide) -> Result<DiffGrid> {
    if (team.resolution - league.resolution).abs() > 1e-12 {
        return Err(Error::GridMismatch(format!(
            "resolutions differ: {} vs {}",
            team.resolution, league.resolution
        )));
    }
    if team.rows.len() != league.rows.len() {
        return Err(Error::GridMismatch(format!(
            "row counts differ: {} vs {}",
            team.rows.len(),
            league.rows.len()
        )));
    }
    let mut rows = Vec::with_capacity(team.rows.len());
    for (i, (t, l)) in team.rows.iter().zip(&league.rows).enumerate() {
        if !t.same_cell(l) {
            return Err(Error::GridMismatch(format!(
                "row {i}: ({}, {}) vs ({}, {})",
                t.x, t.y, l.x, l.y
            )));
        }
        let mut p = [0.0; NUM_OUTCOMES];
        let mut sd = [0.0; NUM_OUTCOMES];
        for s in 0..NUM_OUTCOMES {
            p[s] = t.p[s] - l.p[s];
            sd[s] = t.sd[s] - l.sd[s];
        }
        rows.push(GridRow {
            p,
            epv: t.epv - l.epv,
            sd,
            sd_epv: t.sd_epv - l.sd_epv,
            ..*t
        });
    }
    Ok(DiffGrid {
        side,
        resolution: team.resolution,
        rows,
    })
}

impl DiffGrid {
    pub fn field_rows(&self) -> impl Iterator<Item = &GridRow> + '_ {
        self.rows.iter().filter(|r| r.region == Region::FieldOfPlay)
    }

    pub fn field_dims(&self) -> (usize, usize) {
        field_dims(&self.rows)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rows(w, self.rows.iter())
    }

    pub fn write_plot_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rows(w, self.field_rows())
    }

    pub fn metadata(&self) -> serde_json::Value {
        let mut signs = serde_json::Map::new();
        for o in Outcome::ALL {
            signs.insert(
                format!("p_{}", o.short_name()),
                json!(self.side.favourable_sign(Some(o))),
            );
        }
        signs.insert("epv".into(), json!(self.side.favourable_sign(None)));
        let convention = match self.side {
            ModelSide::Attack => {
                "values are team minus league; green marks outcomes more favourable to the \
                 attacking team (higher probability of every scoring outcome, lower probability \
                 of no points)"
            }
            ModelSide::Defence => {
                "values are team minus league for points conceded; green marks outcomes more \
                 favourable to the defending team (lower probability of every scoring outcome, \
                 higher probability of no points)"
            }
        };
        json!({
            "kind": "diff",
            "model": self.side.as_str(),
            "resolution": self.resolution,
            "columns": GRID_COLUMNS,
            "convention": convention,
            "favourable_sign": signs,
            "precision": "9 significant digits",
        })
    }

    pub fn save(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        save_triplet(
            dir,
            stem,
            &self.metadata(),
            |w| self.write_csv(w),
            |w| self.write_plot_csv(w),
        )
    }
}
