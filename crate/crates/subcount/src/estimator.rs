//! From single draws to a `(1 ± eps)` high-probability estimate: averaging,
//! median amplification with a per-round query budget, a downward geometric
//! search over the copy-count guess, an exact fallback for small inputs,
//! colorful counting, and a star-specialized draw schedule.

use std::time::Instant;

use num_traits::ToPrimitive;

use crate::graph::{Graph, QueryCounts, QuerySession};
use crate::pattern::{decompose, Decomposition, Pattern, Rational};
use crate::samplers::subgraph_sampler_estimate;
use crate::{oracle, Error, Result};

#[derive(Clone, Debug)]
pub struct EstimationConfig {
    /// Target precision, in (0, 1).
    pub epsilon: f64,
    /// Averaging constant in the draw-count formula.
    pub c: f64,
    /// Per-round query cap multiplier; rounds past the cap are dropped.
    pub budget_factor: f64,
    pub seed: u64,
    /// Count color-matching copies instead of plain copies.
    pub colored: bool,
    /// Use the star draw schedule (single-star patterns only).
    pub star_fast: bool,
    /// Known lower bound on the copy count; skips the geometric search.
    pub h_hint: Option<f64>,
    /// Fixed amplification round count; `None` derives it from `n`.
    pub rounds_override: Option<usize>,
    /// Keep sampling even when the draw count reaches `m` (benchmarks that
    /// measure the sampling core).
    pub disable_fallback: bool,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        EstimationConfig {
            epsilon: 0.1,
            c: 64.0,
            budget_factor: 10.0,
            seed: 0,
            colored: false,
            star_fast: false,
            h_hint: None,
            rounds_override: None,
            disable_fallback: false,
        }
    }
}

impl EstimationConfig {
    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InfeasibleInstance(
                "epsilon must lie in (0, 1)".into(),
            ));
        }
        if self.c < 1.0 {
            return Err(Error::InfeasibleInstance("c must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub estimate: f64,
    pub f: Rational,
    pub rho: Rational,
    /// Draws per round at the final guess.
    pub k_used: u64,
    /// Amplification rounds at the final guess (0 on the pure exact path).
    pub rounds: usize,
    /// Every guess tried with its round median, in search order.
    pub h_trace: Vec<(f64, f64)>,
    pub counts: QueryCounts,
    pub fallback_used: bool,
    pub wall_ms: u64,
}

impl EstimateReport {
    /// The machine-readable result line.
    pub fn result_line(&self) -> String {
        format!(
            "estimate={} f={} rho={} rounds={} k={} fallback={} q_degree={} q_neighbor={} q_pair={} q_edge={} time_ms={}",
            self.estimate,
            format_rational(self.f),
            format_rational(self.rho),
            self.rounds,
            self.k_used,
            self.fallback_used as u8,
            self.counts.degree,
            self.counts.neighbor,
            self.counts.pair,
            self.counts.edge_sample,
            self.wall_ms,
        )
    }
}

pub fn format_rational(r: Rational) -> String {
    if r.denom() == &1 {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `ceil(12 ln n)` clamped to `[9, 61]` and made odd.
pub fn amplification_rounds(n: usize) -> usize {
    let raw = (12.0 * (n.max(1) as f64).ln()).ceil() as usize;
    let clamped = raw.clamp(9, 61);
    if clamped.is_multiple_of(2) {
        clamped + 1
    } else {
        clamped
    }
}

/// Calibrated per-draw query mean used to size round budgets: sampling cost
/// per component plus the leaf check, times the expected branching envelope
/// (at most 6 children per cycle block).
pub fn calibrated_queries_per_draw(h: &Pattern, d: &Decomposition) -> f64 {
    let branch = 6f64.powi(d.cycles.len() as i32);
    let sample_cost: f64 = d
        .cycles
        .iter()
        .map(|c| ((c.len() - 1) / 2 + 8) as f64)
        .sum::<f64>()
        + d.stars
            .iter()
            .map(|(_, p)| (p.len() + 2) as f64)
            .sum::<f64>();
    let leaf_cost = (h.vertex_count() + h.edge_count()) as f64;
    branch * (sample_cost + leaf_cost)
}

#[derive(Clone, Copy)]
enum DrawSchedule {
    /// `k = c m^rho / (eps^2 h)`.
    Standard,
    /// `k = 4 c l^{2l} m / (eps^2 h^{1/l})` for a single-star pattern.
    Star { petals: usize },
}

impl DrawSchedule {
    fn draw_count(&self, m: usize, rho: f64, cfg: &EstimationConfig, h_guess: f64) -> f64 {
        let eps2 = cfg.epsilon * cfg.epsilon;
        match *self {
            DrawSchedule::Standard => (cfg.c * (m as f64).powf(rho) / (eps2 * h_guess)).ceil(),
            DrawSchedule::Star { petals } => {
                let l = petals as f64;
                (cfg.c * 4.0 * l.powf(2.0 * l) * m as f64 / (eps2 * h_guess.powf(1.0 / l)))
                    .ceil()
            }
        }
    }
}

/// Mean of `k` independent draws.
pub fn averaged_estimate(
    s: &mut QuerySession,
    h: &Pattern,
    d: &Decomposition,
    colored: bool,
    k: u64,
) -> Result<f64> {
    assert!(k >= 1);
    let mut sum = 0.0;
    for _ in 0..k {
        sum += subgraph_sampler_estimate(s, h, d, colored)?;
    }
    Ok(sum / k as f64)
}

/// Mean of `k` draws, aborted (returning `None`) once the session exceeds
/// `query_cap` additional queries.
fn budgeted_round(
    s: &mut QuerySession,
    h: &Pattern,
    d: &Decomposition,
    colored: bool,
    k: u64,
    query_cap: f64,
) -> Result<Option<f64>> {
    let start = s.counts().total();
    let mut sum = 0.0;
    for _ in 0..k {
        if (s.counts().total() - start) as f64 > query_cap {
            return Ok(None);
        }
        sum += subgraph_sampler_estimate(s, h, d, colored)?;
    }
    Ok(Some(sum / k as f64))
}

/// Exact profile count (copy count times the profile multiplicity), used by
/// the fallback paths; the whole edge list is read offline.
fn exact_profile_total(g: &Graph, h: &Pattern, d: &Decomposition, colored: bool) -> Result<f64> {
    let counts = oracle::exact_count(g, h, colored)?;
    let total = if colored {
        counts.colorful_count.expect("colored exact count")
            * oracle::self_profile_count_colored(h, d)?
    } else {
        counts.subgraph_count * d.profile_multiplicity()
    };
    Ok(total as f64)
}

struct RoundsOutcome {
    /// Median round estimate, in profile-count units.
    value: f64,
    exact: bool,
    k: u64,
    rounds: usize,
}

#[allow(clippy::too_many_arguments)]
fn rounds_at_guess(
    sess: &mut QuerySession,
    g: &Graph,
    h: &Pattern,
    d: &Decomposition,
    cfg: &EstimationConfig,
    colored: bool,
    schedule: DrawSchedule,
    h_guess: f64,
) -> Result<RoundsOutcome> {
    let m = g.m();
    let rho = d.rho.to_f64().unwrap();
    let k_f = schedule.draw_count(m, rho, cfg, h_guess).max(1.0);
    if !cfg.disable_fallback && k_f >= m as f64 {
        let value = exact_profile_total(g, h, d, colored)?;
        sess.charge_pair_equivalents(m as u64);
        return Ok(RoundsOutcome {
            value,
            exact: true,
            k: m as u64,
            rounds: 0,
        });
    }
    let k = k_f as u64;
    let rounds = cfg.rounds_override.unwrap_or_else(|| amplification_rounds(g.n()));
    let cap = cfg.budget_factor * k as f64 * calibrated_queries_per_draw(h, d);
    let mut survivors = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        if let Some(v) = budgeted_round(sess, h, d, colored, k, cap)? {
            survivors.push(v);
        }
    }
    if survivors.is_empty() {
        return Err(Error::BudgetExhausted);
    }
    // lower median: keeps the effective survivor count odd
    survivors.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let value = survivors[(survivors.len() - 1) / 2];
    Ok(RoundsOutcome {
        value,
        exact: false,
        k,
        rounds,
    })
}

/// Median of amplified rounds at a fixed copy-count lower bound `h_guess`,
/// in profile-count units (unscaled by `f`). Falls back to the exact count
/// when the per-round draw count reaches `m`.
pub fn high_probability_estimate(
    g: &Graph,
    h: &Pattern,
    cfg: &EstimationConfig,
    h_guess: f64,
) -> Result<f64> {
    cfg.validate()?;
    assert!(h_guess >= 1.0, "the guess is a lower bound on a count");
    let d = decompose(h)?;
    let mut sess = QuerySession::new(g, cfg.seed);
    let out = rounds_at_guess(
        &mut sess,
        g,
        h,
        &d,
        cfg,
        cfg.colored,
        DrawSchedule::Standard,
        h_guess,
    )?;
    Ok(out.value)
}

fn pipeline(
    g: &Graph,
    h: &Pattern,
    cfg: &EstimationConfig,
    colored: bool,
    schedule: DrawSchedule,
) -> Result<EstimateReport> {
    cfg.validate()?;
    let start = Instant::now();
    let d = decompose(h)?;
    if let DrawSchedule::Star { petals } = schedule {
        let pure_star = d.cycles.is_empty()
            && d.stars.len() == 1
            && d.cross_edges.is_empty()
            && d.stars[0].1.len() == petals;
        if !pure_star {
            return Err(Error::NotAStar);
        }
    }
    let multiplicity = if colored {
        oracle::self_profile_count_colored(h, &d)?
    } else {
        d.profile_multiplicity()
    };
    let f = Rational::new(1, multiplicity as i64);
    let f_f64 = 1.0 / multiplicity as f64;
    let rho_f = d.rho.to_f64().unwrap();
    let m = g.m();

    let mut sess = QuerySession::new(g, cfg.seed);
    let mut h_trace: Vec<(f64, f64)> = Vec::new();
    let mut k_used = 0u64;
    let mut rounds = 0usize;
    let mut fallback_used = false;

    let value: f64 = if let Some(hint) = cfg.h_hint {
        let out = rounds_at_guess(&mut sess, g, h, &d, cfg, colored, schedule, hint.max(1.0))?;
        h_trace.push((hint, out.value));
        k_used = out.k;
        rounds = out.rounds;
        fallback_used = out.exact;
        out.value
    } else {
        let mut guess = (m as f64).powf(rho_f) / 2.0;
        let mut accepted: Option<f64> = None;
        loop {
            if guess < 1.0 {
                // no guess was self-consistent: few copies remain possible,
                // read the graph and count exactly
                let exact = exact_profile_total(g, h, &d, colored)?;
                sess.charge_pair_equivalents(m as u64);
                h_trace.push((guess, exact));
                fallback_used = true;
                break exact;
            }
            let out = rounds_at_guess(&mut sess, g, h, &d, cfg, colored, schedule, guess)?;
            h_trace.push((guess, out.value));
            k_used = out.k;
            rounds = out.rounds;
            if out.exact {
                fallback_used = true;
                break out.value;
            }
            if let Some(prev) = accepted {
                // guard step: the halved guess must agree with the first
                // accepted estimate
                if (out.value - prev).abs() <= 2.0 * cfg.epsilon * prev {
                    break out.value;
                }
            }
            accepted = (out.value >= guess).then_some(out.value);
            guess /= 2.0;
        }
    };

    Ok(EstimateReport {
        estimate: f_f64 * value,
        f,
        rho: d.rho,
        k_used,
        rounds,
        h_trace,
        counts: sess.counts(),
        fallback_used,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

/// Full `(1 ± eps)` estimate of the number of pattern copies.
pub fn count_subgraph(g: &Graph, h: &Pattern, cfg: &EstimationConfig) -> Result<EstimateReport> {
    pipeline(g, h, cfg, false, DrawSchedule::Standard)
}

/// As [`count_subgraph`], counting only copies whose edge colors match the
/// pattern's. Graph and pattern must agree on color mode.
pub fn count_colorful(g: &Graph, h: &Pattern, cfg: &EstimationConfig) -> Result<EstimateReport> {
    if g.is_colored() != h.is_colored() {
        return Err(Error::ColorModeMismatch);
    }
    pipeline(g, h, cfg, true, DrawSchedule::Standard)
}

/// Star-count estimate with the draw schedule sized by the sharper star
/// variance bound; the pattern must decompose to a single star.
pub fn star_fast_count(g: &Graph, h: &Pattern, cfg: &EstimationConfig) -> Result<EstimateReport> {
    let d = decompose(h)?;
    let petals = if d.cycles.is_empty() && d.stars.len() == 1 && d.cross_edges.is_empty() {
        d.stars[0].1.len()
    } else {
        return Err(Error::NotAStar);
    };
    pipeline(g, h, cfg, false, DrawSchedule::Star { petals })
}

/// Dispatches on the config flags, the way the command line does.
pub fn run(g: &Graph, h: &Pattern, cfg: &EstimationConfig) -> Result<EstimateReport> {
    if cfg.star_fast {
        star_fast_count(g, h, cfg)
    } else if cfg.colored {
        count_colorful(g, h, cfg)
    } else {
        count_subgraph(g, h, cfg)
    }
}
