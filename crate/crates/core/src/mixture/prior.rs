use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::CentreSet;
use crate::outcome::{Outcome, NUM_OUTCOMES};

use super::OutcomeSimplex;

/// Per-centre Dirichlet parameters over the five outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    alpha: Vec<[f64; NUM_OUTCOMES]>,
}

/// Hand-set league priors by field row (increasing y), then the try area.
const LEAGUE_ROWS: [[f64; NUM_OUTCOMES]; 6] = [
    [90.0, 1.0, 1.0, 4.0, 4.0],
    [90.0, 1.0, 1.0, 4.0, 4.0],
    [85.0, 1.0, 3.0, 5.0, 6.0],
    [80.0, 1.0, 3.0, 7.0, 9.0],
    [75.0, 1.0, 3.0, 9.0, 12.0],
    [70.0, 1.0, 3.0, 10.0, 15.0],
];
const LEAGUE_TRY: [f64; NUM_OUTCOMES] = [35.0, 1.0, 1.0, 28.0, 35.0];

const HEADER: [&str; 7] = [
    "centre_x",
    "centre_y",
    "no_points",
    "drop_goal",
    "penalty_goal",
    "unconverted_try",
    "converted_try",
];

impl PriorSpec {
    pub fn new(alpha: Vec<[f64; NUM_OUTCOMES]>) -> Result<Self> {
        for (k, row) in alpha.iter().enumerate() {
            if row.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
                return Err(Error::Prior(format!(
                    "centre {k}: alpha entries must be finite and positive, got {row:?}"
                )));
            }
        }
        Ok(PriorSpec { alpha })
    }

    /// The whole-league prior for the standard 33-centre layout: points
    /// become more likely towards the opposition try line.
    pub fn league_default() -> Self {
        let mut alpha = Vec::with_capacity(33);
        for row in LEAGUE_ROWS {
            alpha.extend(std::iter::repeat_n(row, 5));
        }
        alpha.extend(std::iter::repeat_n(LEAGUE_TRY, 3));
        PriorSpec { alpha }
    }

    pub fn uniform(n_centres: usize, a: f64) -> Self {
        PriorSpec::new(vec![[a; NUM_OUTCOMES]; n_centres]).expect("positive alpha")
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn alpha(&self, centre: usize) -> &[f64; NUM_OUTCOMES] {
        &self.alpha[centre]
    }

    pub fn rows(&self) -> &[[f64; NUM_OUTCOMES]] {
        &self.alpha
    }

    pub fn concentration(&self, centre: usize) -> f64 {
        self.alpha[centre].iter().sum()
    }

    /// Prior mean `alpha_k / sum(alpha_k)`.
    pub fn mean(&self, centre: usize) -> OutcomeSimplex {
        let total = self.concentration(centre);
        OutcomeSimplex(self.alpha[centre].map(|a| a / total))
    }

    pub fn check_centres(&self, centres: &CentreSet) -> Result<()> {
        if self.len() != centres.len() {
            return Err(Error::Prior(format!(
                "prior has {} centres, layout has {}",
                self.len(),
                centres.len()
            )));
        }
        Ok(())
    }

    /// Reads the table layout `centre_x, centre_y | TRY, five alpha columns`.
    /// Rows may come in any order but every centre must appear once.
    pub fn read_csv<R: Read>(r: R, centres: &CentreSet) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(r);
        let headers = rdr.headers()?.clone();
        if headers.len() != HEADER.len() {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "prior CSV needs {} columns, found {}",
                    HEADER.len(),
                    headers.len()
                ),
            });
        }
        let mut alpha: Vec<Option<[f64; NUM_OUTCOMES]>> = vec![None; centres.len()];
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let parse = |i: usize| -> Result<f64> {
                rec[i].parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("{}: expected a number, got {:?}", HEADER[i], &rec[i]),
                })
            };
            let x = parse(0)?;
            let y = if rec[1].eq_ignore_ascii_case("TRY") {
                None
            } else {
                Some(parse(1)?)
            };
            let k = centres.lookup(x, y).ok_or_else(|| Error::Parse {
                line,
                message: format!("no centre at ({}, {})", &rec[0], &rec[1]),
            })?;
            if alpha[k].is_some() {
                return Err(Error::Parse {
                    line,
                    message: format!("centre ({}, {}) listed twice", &rec[0], &rec[1]),
                });
            }
            let mut row = [0.0; NUM_OUTCOMES];
            for (s, v) in row.iter_mut().enumerate() {
                *v = parse(2 + s)?;
            }
            alpha[k] = Some(row);
        }
        let alpha = alpha
            .into_iter()
            .enumerate()
            .map(|(k, row)| row.ok_or_else(|| Error::Prior(format!("missing row for centre {k}"))))
            .collect::<Result<Vec<_>>>()?;
        PriorSpec::new(alpha)
    }

    /// Writes one row per centre in centre order. Values use the shortest
    /// representation that round-trips exactly.
    pub fn write_csv<W: Write>(&self, w: W, centres: &CentreSet) -> Result<()> {
        self.check_centres(centres)?;
        write_simplex_table(w, centres, &self.alpha)
    }
}

/// Writes a centre-by-outcome table in the prior layout; also used for
/// ground-truth simplices.
pub fn write_simplex_table<W: Write>(
    w: W,
    centres: &CentreSet,
    rows: &[[f64; NUM_OUTCOMES]],
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HEADER)?;
    for (c, row) in centres.centres().zip(rows) {
        let mut rec = vec![
            c.x.to_string(),
            c.y.map_or_else(|| "TRY".to_string(), |y| y.to_string()),
        ];
        rec.extend(row.iter().map(|v| v.to_string()));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a centre-by-outcome table whose rows must each lie on the simplex.
pub fn read_simplex_table<R: Read>(r: R, centres: &CentreSet) -> Result<Vec<OutcomeSimplex>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut rows: Vec<Option<OutcomeSimplex>> = vec![None; centres.len()];
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |m: String| Error::Parse { line, message: m };
        if rec.len() != HEADER.len() {
            return Err(bad(format!("expected {} columns", HEADER.len())));
        }
        let num = |i: usize| {
            rec[i]
                .parse::<f64>()
                .map_err(|_| bad(format!("bad number {:?}", &rec[i])))
        };
        let x = num(0)?;
        let y = if rec[1].eq_ignore_ascii_case("TRY") {
            None
        } else {
            Some(num(1)?)
        };
        let k = centres
            .lookup(x, y)
            .ok_or_else(|| bad(format!("no centre at ({}, {})", &rec[0], &rec[1])))?;
        let mut p = [0.0; NUM_OUTCOMES];
        for (s, v) in p.iter_mut().enumerate() {
            *v = num(2 + s)?;
        }
        rows[k] = Some(
            OutcomeSimplex::new(p)
                .ok_or_else(|| bad(format!("row {p:?} is not a probability simplex")))?,
        );
    }
    rows.into_iter()
        .enumerate()
        .map(|(k, r)| r.ok_or_else(|| Error::Prior(format!("missing row for centre {k}"))))
        .collect()
}

impl PriorSpec {
    pub fn outcome_alpha(&self, centre: usize, o: Outcome) -> f64 {
        self.alpha[centre][o.index()]
    }
}
