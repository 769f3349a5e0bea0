//! Split R-hat and multi-chain effective sample size.
//!
//! Both statistics split every chain in half so that within-chain drift shows
//! up as between-chain disagreement. The ESS uses Geyer's initial monotone
//! sequence on the combined autocorrelation estimate.

fn split(chains: &[&[f64]]) -> Vec<Vec<f64>> {
    let n = chains.iter().map(|c| c.len()).min().unwrap_or(0) / 2;
    chains
        .iter()
        .flat_map(|c| [c[..n].to_vec(), c[n..2 * n].to_vec()])
        .collect()
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn variance(v: &[f64], m: f64) -> f64 {
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
}

struct Components {
    n: usize,
    means: Vec<f64>,
    within: f64,
    between_over_n: f64,
}

fn components(chains: &[Vec<f64>]) -> Components {
    let n = chains[0].len();
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let within = chains
        .iter()
        .zip(&means)
        .map(|(c, &m)| variance(c, m))
        .sum::<f64>()
        / chains.len() as f64;
    let grand = mean(&means);
    let between_over_n = variance(&means, grand);
    Components {
        n,
        means,
        within,
        between_over_n,
    }
}

/// Potential scale reduction factor over split chains. Returns 1 for a
/// constant parameter and infinity when chains are individually constant but
/// disagree.
pub fn split_rhat(chains: &[&[f64]]) -> f64 {
    let halves = split(chains);
    if halves.len() < 2 || halves[0].len() < 2 {
        return f64::NAN;
    }
    let c = components(&halves);
    if c.within <= 0.0 {
        return if c.between_over_n <= 0.0 {
            1.0
        } else {
            f64::INFINITY
        };
    }
    let n = c.n as f64;
    let var_plus = (n - 1.0) / n * c.within + c.between_over_n;
    (var_plus / c.within).sqrt()
}

/// Effective sample size of the pooled draws.
pub fn effective_sample_size(chains: &[&[f64]]) -> f64 {
    let halves = split(chains);
    let m = halves.len();
    if m < 2 || halves[0].len() < 4 {
        return f64::NAN;
    }
    let c = components(&halves);
    let n = c.n;
    let total = (m * n) as f64;
    if c.within <= 0.0 {
        return total;
    }
    let nf = n as f64;
    let var_plus = (nf - 1.0) / nf * c.within + c.between_over_n;

    // biased autocovariance, averaged over chains
    let acov = |lag: usize| -> f64 {
        halves
            .iter()
            .zip(&c.means)
            .map(|(ch, &mu)| {
                (0..n - lag)
                    .map(|i| (ch[i] - mu) * (ch[i + lag] - mu))
                    .sum::<f64>()
                    / nf
            })
            .sum::<f64>()
            / m as f64
    };
    let rho = |lag: usize| -> f64 {
        if lag == 0 {
            1.0
        } else {
            1.0 - (c.within - acov(lag)) / var_plus
        }
    };

    let mut sum_pairs = 0.0;
    let mut prev_pair = f64::INFINITY;
    let mut t = 0;
    while t + 1 < n {
        let mut pair = rho(t) + rho(t + 1);
        if pair <= 0.0 {
            break;
        }
        if pair > prev_pair {
            pair = prev_pair;
        }
        sum_pairs += pair;
        prev_pair = pair;
        t += 2;
    }
    // antithetic chains can push tau below 1; cap ESS at total * log10(total)
    let tau = (-1.0 + 2.0 * sum_pairs).max(1.0 / total.log10().max(1.0));
    total / tau
}
