//! PNG heatmaps and a 2-D histogram of action locations.

use std::io::Write;
use std::path::{Path, PathBuf};

use image::{Rgb, RgbImage};

use crate::error::{Error, Result};
use crate::fmt;
use crate::geometry::CentreSet;
use crate::outcome::Outcome;

use super::grid::{DiffGrid, GridRow, SurfaceGrid};

/// Dark-to-bright ramp: brighter pixels are higher values.
fn ramp(t: f64) -> Rgb<u8> {
    let t = t.clamp(0.0, 1.0);
    let stops = [
        (0.0, [0.0, 0.0, 4.0]),
        (0.35, [120.0, 28.0, 109.0]),
        (0.7, [237.0, 105.0, 37.0]),
        (1.0, [252.0, 255.0, 164.0]),
    ];
    let i = stops
        .iter()
        .rposition(|(s, _)| *s <= t)
        .unwrap()
        .min(stops.len() - 2);
    let (s0, c0) = stops[i];
    let (s1, c1) = stops[i + 1];
    let f = (t - s0) / (s1 - s0);
    Rgb([0, 1, 2].map(|j| (c0[j] + f * (c1[j] - c0[j])).round() as u8))
}

/// White at zero, green for favourable and red for unfavourable differences.
fn diverging(t: f64) -> Rgb<u8> {
    let t = t.clamp(-1.0, 1.0);
    let fade = (255.0 * (1.0 - t.abs())).round() as u8;
    if t >= 0.0 {
        Rgb([fade, 255 - ((255 - 128) as f64 * t).round() as u8, fade])
    } else {
        Rgb([255 - ((255 - 178) as f64 * -t).round() as u8, fade, fade])
    }
}

/// Field rows laid out as an image: x to the right, attacking direction
/// (increasing y) upwards.
fn paint(
    rows: &[&GridRow],
    nx: usize,
    ny: usize,
    value: impl Fn(&GridRow) -> f64,
    colour: impl Fn(f64) -> Rgb<u8>,
) -> RgbImage {
    let mut img = RgbImage::new(nx as u32, ny as u32);
    for (i, r) in rows.iter().enumerate() {
        let (ix, iy) = (i % nx, i / nx);
        img.put_pixel(ix as u32, (ny - 1 - iy) as u32, colour(value(r)));
    }
    img
}

fn columns() -> Vec<(String, Box<dyn Fn(&GridRow) -> f64>, Option<Outcome>)> {
    let mut cols: Vec<(String, Box<dyn Fn(&GridRow) -> f64>, Option<Outcome>)> = Outcome::ALL
        .iter()
        .map(|&o| {
            let f: Box<dyn Fn(&GridRow) -> f64> = Box::new(move |r: &GridRow| r.p[o.index()]);
            (format!("p_{}", o.short_name()), f, Some(o))
        })
        .collect();
    cols.push(("epv".into(), Box::new(|r: &GridRow| r.epv), None));
    cols
}

fn field_layout<'a>(
    rows: impl Iterator<Item = &'a GridRow>,
    dims: (usize, usize),
) -> Result<Vec<&'a GridRow>> {
    let rows: Vec<&GridRow> = rows.collect();
    if dims.0 == 0 || rows.len() != dims.0 * dims.1 {
        return Err(Error::GridMismatch(
            "field rows do not form a rectangle".into(),
        ));
    }
    Ok(rows)
}

/// One PNG per outcome probability plus EPV, each scaled to its own range.
pub fn write_grid_pngs(grid: &SurfaceGrid, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let (nx, ny) = grid.field_dims();
    let rows = field_layout(grid.field_rows(), (nx, ny))?;
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, value, _) in columns() {
        let (lo, hi) = rows
            .iter()
            .map(|r| value(r))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
                (a.min(v), b.max(v))
            });
        let span = hi - lo;
        let img = paint(&rows, nx, ny, &value, |v| {
            ramp(if span > 0.0 { (v - lo) / span } else { 0.5 })
        });
        let path = dir.join(format!("{stem}_{name}.png"));
        img.save(&path)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Differential PNGs coloured by favourability for the team.
pub fn write_diff_pngs(diff: &DiffGrid, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let (nx, ny) = diff.field_dims();
    let rows = field_layout(diff.field_rows(), (nx, ny))?;
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, value, column) in columns() {
        let sign = diff.side.favourable_sign(column);
        let scale = rows.iter().map(|r| value(r).abs()).fold(0.0, f64::max);
        let img = paint(&rows, nx, ny, &value, |v| {
            diverging(if scale > 0.0 { sign * v / scale } else { 0.0 })
        });
        let path = dir.join(format!("{stem}_{name}.png"));
        img.save(&path)?;
        paths.push(path);
    }
    Ok(paths)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityBin {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub count: usize,
    /// Fraction of locations per square metre.
    pub density: f64,
}

/// Square-bin histogram of locations over the whole pitch, try area
/// included. Bins are listed by increasing y then x; the last bin on each
/// axis is closed.
pub fn density_histogram(
    centres: &CentreSet,
    locations: &[(f64, f64)],
    bin: f64,
) -> Result<Vec<DensityBin>> {
    if !(bin > 0.0 && bin.is_finite()) {
        return Err(Error::Config(format!(
            "bin size must be positive, got {bin}"
        )));
    }
    let (x0, y0) = (centres.x_min(), centres.y_min());
    let nx = ((centres.x_max() - x0) / bin - 1e-9).ceil().max(1.0) as usize;
    let ny = ((centres.y_max() - y0) / bin - 1e-9).ceil().max(1.0) as usize;
    let mut counts = vec![0usize; nx * ny];
    for &(x, y) in locations {
        if !centres.in_pitch(x, y) {
            return Err(Error::Region {
                x,
                y,
                region: "pitch",
            });
        }
        let ix = (((x - x0) / bin) as usize).min(nx - 1);
        let iy = (((y - y0) / bin) as usize).min(ny - 1);
        counts[iy * nx + ix] += 1;
    }
    let n = locations.len().max(1) as f64;
    let mut bins = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            let x_lo = x0 + ix as f64 * bin;
            let y_lo = y0 + iy as f64 * bin;
            let x_hi = (x_lo + bin).min(centres.x_max());
            let y_hi = (y_lo + bin).min(centres.y_max());
            let count = counts[iy * nx + ix];
            bins.push(DensityBin {
                x_lo,
                x_hi,
                y_lo,
                y_hi,
                count,
                density: count as f64 / n / ((x_hi - x_lo) * (y_hi - y_lo)),
            });
        }
    }
    Ok(bins)
}

pub fn write_density_csv<W: Write>(w: W, bins: &[DensityBin]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x_lo", "x_hi", "y_lo", "y_hi", "count", "density"])?;
    for b in bins {
        out.write_record([
            fmt::sig(b.x_lo, 9),
            fmt::sig(b.x_hi, 9),
            fmt::sig(b.y_lo, 9),
            fmt::sig(b.y_hi, 9),
            b.count.to_string(),
            fmt::sig(b.density, 9),
        ])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{render_surface, SdFormula};

    #[test]
    fn ramp_is_monotone_in_brightness() {
        let lum = |c: Rgb<u8>| c.0.iter().map(|v| *v as u32).sum::<u32>();
        let mut last = 0;
        for i in 0..=20 {
            let l = lum(ramp(i as f64 / 20.0));
            assert!(l >= last);
            last = l;
        }
        assert_eq!(diverging(0.0), Rgb([255, 255, 255]));
        assert!(diverging(1.0).0[1] > diverging(1.0).0[0]);
        assert!(diverging(-1.0).0[0] > diverging(-1.0).0[1]);
    }

    #[test]
    fn pngs_have_field_dimensions() {
        let mean: Vec<[f64; 5]> = (0..33)
            .map(|k| {
                if k < 15 {
                    [0.9, 0.0, 0.0, 0.0, 0.1]
                } else {
                    [0.5, 0.1, 0.1, 0.1, 0.2]
                }
            })
            .collect();
        let g = render_surface(
            &CentreSet::standard(),
            &mean,
            &[[0.0; 5]; 33],
            5.0,
            SdFormula::Printed,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let paths = write_grid_pngs(&g, dir.path(), "league").unwrap();
        assert_eq!(paths.len(), 6);
        let img = image::open(&paths[5]).unwrap().to_rgb8();
        assert_eq!(img.dimensions(), (15, 23));
        // attacking end at the top is brighter for EPV
        let top = img.get_pixel(7, 0).0.iter().map(|v| *v as u32).sum::<u32>();
        let bottom = img
            .get_pixel(7, 22)
            .0
            .iter()
            .map(|v| *v as u32)
            .sum::<u32>();
        assert!(top > bottom);
    }

    #[test]
    fn histogram_counts() {
        let c = CentreSet::standard();
        let locs = [(0.0, -10.0), (70.0, 110.0), (35.0, 50.0), (35.5, 50.5)];
        let bins = density_histogram(&c, &locs, 10.0).unwrap();
        assert_eq!(bins.len(), 7 * 12);
        assert_eq!(bins.iter().map(|b| b.count).sum::<usize>(), 4);
        let mass: f64 = bins
            .iter()
            .map(|b| b.density * (b.x_hi - b.x_lo) * (b.y_hi - b.y_lo))
            .sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!(density_histogram(&c, &[(80.0, 0.0)], 10.0).is_err());
    }
}
