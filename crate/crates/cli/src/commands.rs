//! One function per subcommand. Every stage writes its artifacts under the
//! output directory and prints a short summary to stdout.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use epv_core::ingest::{self, read_actions, read_raw_events, write_actions, write_raw_events};
use epv_core::mixture::{derive_team_prior, gibbs_fit, read_simplex_table, write_simplex_table};
use epv_core::ratings::{format_table, rate_players, summary_table, write_ratings_csv};
use epv_core::surfaces::{
    density_histogram, diff_grid, read_grid_csv, render_grid, write_density_csv, write_diff_pngs,
    write_grid_pngs, ModelSide, SurfaceGrid,
};
use epv_core::synth::{random_truth, LocationLaw, SyntheticSpec};
use epv_core::{
    Action, CentreSet, Error, IngestReport, Posterior, PreparedDataset, PriorSpec, Result,
    SdFormula, SubsetLabel,
};

use crate::config::{require_dir, require_file, RunConfig};
use crate::{
    DeriveArgs, FitArgs, Law, PreprocessArgs, RateArgs, SdChoice, Side, SurfaceArgs, SynthArgs,
};

const DEFAULT_RESOLUTION: f64 = 1.0;
const DEFAULT_TOP_K: usize = 20;

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn load_actions(path: &Path) -> Result<Vec<Action>> {
    require_file(path)?;
    read_actions(File::open(path)?)
}

fn load_posterior(dir: &Path) -> Result<Posterior> {
    require_dir(dir)?;
    Posterior::load(dir)
}

pub fn preprocess(a: &PreprocessArgs, out: &Path) -> Result<()> {
    require_file(&a.input)?;
    let (actions, report) = if a.pre_segmented {
        let actions = read_actions(File::open(&a.input)?)?;
        let report = IngestReport::for_actions(&actions);
        (actions, report)
    } else {
        ingest::preprocess(&read_raw_events(File::open(&a.input)?)?)?
    };
    let path = out.join("actions.csv");
    let mut w = create(&path)?;
    write_actions(&mut w, &actions)?;
    w.flush()?;
    write_json(&out.join("ingest_report.json"), &report)?;
    say!(
        "{} rows read, {} actions kept in {} possessions ({} duplicates dropped, {} locations clamped)",
        report.rows_read,
        report.rows_kept,
        report.possessions,
        report.dedupe_drops,
        report.clamped_locations
    );
    say!("wrote {}", path.display());
    Ok(())
}

fn subset_dir_name(label: &SubsetLabel) -> String {
    let clean = |t: &str| -> String {
        t.chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' {
                    c
                } else {
                    '_'
                }
            })
            .collect()
    };
    match label {
        SubsetLabel::WholeLeague => "posterior_league".into(),
        SubsetLabel::TeamAttack(t) => format!("posterior_{}_attack", clean(t)),
        SubsetLabel::TeamDefence(t) => format!("posterior_{}_defence", clean(t)),
    }
}

pub fn fit(a: &FitArgs, cfg: &RunConfig, out: &Path) -> Result<()> {
    let seed = cfg.require_seed(a.seed, "fit")?;
    let sampler = cfg.sampler(&a.sampler_flags(), seed);
    sampler.validate()?;
    let label = SubsetLabel::parse(&RunConfig::pick(
        a.subset.clone(),
        &cfg.subset,
        "league".to_string(),
    ))?;
    let prior_path = a.prior.clone().or_else(|| cfg.prior.clone());
    if let Some(p) = &prior_path {
        require_file(p)?;
    }
    let actions = load_actions(&a.actions)?;

    let centres = CentreSet::standard();
    let prior = match &prior_path {
        Some(p) => PriorSpec::read_csv(File::open(p)?, &centres)?,
        None => PriorSpec::league_default(),
    };
    let team = match &label {
        SubsetLabel::WholeLeague => None,
        SubsetLabel::TeamAttack(t) | SubsetLabel::TeamDefence(t) => Some(t),
    };
    if let Some(t) = team {
        if !ingest::teams(&actions).contains(t) {
            return Err(Error::UnknownTeam(t.clone()));
        }
    }
    let data = ingest::subset(&actions, label.clone());
    let prepared = PreparedDataset::from_actions(&centres, &data.actions)?;
    let post = gibbs_fit(&prepared, &prior, &sampler)?;

    let dir = a
        .posterior_dir
        .clone()
        .unwrap_or_else(|| out.join(subset_dir_name(&label)));
    post.save(&dir)?;
    let mut w = create(&dir.join("prior.csv"))?;
    prior.write_csv(&mut w, &centres)?;
    w.flush()?;

    say!("fitted {} actions", data.actions.len());
    say!("{}", post.diagnostics_summary());
    say!("wrote {}", dir.display());
    Ok(())
}

pub fn derive_priors(a: &DeriveArgs, out: &Path) -> Result<()> {
    let post = load_posterior(&a.posterior)?;
    let prior = derive_team_prior(&post)?;
    let path = a
        .output
        .clone()
        .unwrap_or_else(|| out.join("team_prior.csv"));
    let mut w = create(&path)?;
    prior.write_csv(&mut w, post.centres())?;
    w.flush()?;
    say!(
        "derived a prior for {} centres from {} draws",
        prior.len(),
        post.n_draws()
    );
    say!("wrote {}", path.display());
    Ok(())
}

fn sd_formula(choice: Option<SdChoice>, cfg: &RunConfig) -> SdFormula {
    match choice {
        Some(SdChoice::Printed) => SdFormula::Printed,
        Some(SdChoice::Propagated) => SdFormula::Propagated,
        None => cfg.sd_formula.unwrap_or_default(),
    }
}

fn league_grid(path: &Path, resolution: f64, formula: SdFormula) -> Result<SurfaceGrid> {
    if path.is_dir() {
        render_grid(&Posterior::load(path)?, resolution, formula)
    } else {
        require_file(path)?;
        read_grid_csv(File::open(path)?)
    }
}

pub fn surface(a: &SurfaceArgs, cfg: &RunConfig, out: &Path) -> Result<()> {
    let resolution = RunConfig::pick(a.resolution, &cfg.resolution, DEFAULT_RESOLUTION);
    let formula = sd_formula(a.sd_formula, cfg);
    if let Some(d) = &a.density {
        require_file(d)?;
    }
    let post = load_posterior(&a.posterior)?;
    let grid = render_grid(&post, resolution, formula)?;
    let mut written = grid.save(out, &a.stem)?;
    if a.png {
        written.extend(write_grid_pngs(&grid, out, &a.stem)?);
    }
    if let Some(league) = &a.league {
        let league = league_grid(league, resolution, formula)?;
        let side = match a.side {
            Side::Attack => ModelSide::Attack,
            Side::Defence => ModelSide::Defence,
        };
        let diff = diff_grid(&grid, &league, side)?;
        let stem = format!("{}_diff_{}", a.stem, side.as_str());
        written.extend(diff.save(out, &stem)?);
        if a.png {
            written.extend(write_diff_pngs(&diff, out, &stem)?);
        }
    }
    if let Some(d) = &a.density {
        let actions = read_actions(File::open(d)?)?;
        let locations: Vec<(f64, f64)> = actions.iter().map(|x| (x.x, x.y)).collect();
        let bins = density_histogram(post.centres(), &locations, a.bin)?;
        let path = out.join("density.csv");
        let mut w = create(&path)?;
        write_density_csv(&mut w, &bins)?;
        w.flush()?;
        written.push(path);
    }
    say!(
        "{} grid rows at {} m ({} standard deviations)",
        grid.rows.len(),
        resolution,
        formula.as_str()
    );
    for p in written {
        say!("wrote {}", p.display());
    }
    Ok(())
}

pub fn rate(a: &RateArgs, cfg: &RunConfig, out: &Path) -> Result<()> {
    let top_k = RunConfig::pick(a.top_k, &cfg.top_k, DEFAULT_TOP_K);
    require_dir(&a.posterior)?;
    let actions = load_actions(&a.actions)?;
    let post = Posterior::load(&a.posterior)?;
    let ratings = rate_players(&actions, &post)?;
    let path = out.join("ratings.csv");
    let mut w = create(&path)?;
    write_ratings_csv(&mut w, &ratings)?;
    w.flush()?;
    say_raw!("{}", format_table(summary_table(&ratings, top_k)));
    say!("wrote {}", path.display());
    Ok(())
}

pub fn synth(a: &SynthArgs, cfg: &RunConfig, out: &Path) -> Result<()> {
    let centres = CentreSet::standard();
    let mut spec = match &a.spec {
        Some(p) => {
            require_file(p)?;
            serde_json::from_str::<SyntheticSpec>(&fs::read_to_string(p)?)
                .map_err(|e| Error::Config(format!("synthetic spec {}: {e}", p.display())))?
        }
        None => SyntheticSpec::default(),
    };
    let seed = a.seed.or(cfg.seed).or(a.spec.as_ref().map(|_| spec.seed));
    spec.seed = seed.ok_or_else(|| {
        Error::Config("synth needs a seed (--seed, the config file or the spec file)".into())
    })?;
    if let Some(p) = &a.truth {
        require_file(p)?;
        spec.truth = read_simplex_table(File::open(p)?, &centres)?
            .into_iter()
            .map(|s| s.0)
            .collect();
    }
    if let Some(s) = a.truth_seed {
        spec.truth = random_truth(&PriorSpec::league_default(), s);
    }
    if let Some(n) = a.n {
        spec.n_observations = n;
    }
    if let Some(law) = a.law {
        spec.location = match law {
            Law::Uniform => LocationLaw::Uniform,
            Law::Central => LocationLaw::Central,
            Law::Nodes => LocationLaw::Nodes,
        };
    }
    if let Some(t) = a.teams {
        spec.teams = t;
    }
    if let Some(f) = a.fixtures {
        spec.fixtures = f;
    }
    if let Some(k) = a.actions_per_possession {
        spec.actions_per_possession = k;
    }
    let data = spec.generate(&centres)?;

    let paths: [PathBuf; 4] =
        ["raw.csv", "actions.csv", "truth.csv", "spec.json"].map(|f| out.join(f));
    let mut w = create(&paths[0])?;
    write_raw_events(&mut w, &data.raw)?;
    w.flush()?;
    let mut w = create(&paths[1])?;
    write_actions(&mut w, &data.actions)?;
    w.flush()?;
    let mut w = create(&paths[2])?;
    write_simplex_table(&mut w, &centres, &spec.truth)?;
    w.flush()?;
    write_json(&paths[3], &spec)?;
    say!(
        "{} actions, {} raw events",
        data.actions.len(),
        data.raw.len()
    );
    for p in &paths {
        say!("wrote {}", p.display());
    }
    Ok(())
}
