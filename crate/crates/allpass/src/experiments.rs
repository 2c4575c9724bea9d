//! Desk-scale reproduction of the precoder interpolation experiments:
//! random frequency-selective MIMO channels, per-frequency SVD precoder
//! extraction with phase tracking, method comparison sweeps and timing
//! benches.

use crate::baselines::{flag_distance, frobenius_error, geodesic_interpolate, UnitarySample};
use crate::construct::{design_allpass, DesignOptions};
use crate::dataset::{validate_dataset, InterpolationPoint};
use crate::gdopt::{optimize_group_delays, BarrierConfig};
use crate::linalg::{cis, cplx, CMat};
use crate::polyfilter::eval_filter;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

/// Tap delays (in samples) and average powers (dB), normalized so the
/// linear powers sum to one.
#[derive(Debug, Clone)]
pub struct PowerDelayProfile {
    delays: Vec<usize>,
    powers_db: Vec<f64>,
    powers_linear: Vec<f64>,
}

impl PowerDelayProfile {
    pub fn new(delays: Vec<usize>, powers_db: Vec<f64>) -> Result<Self> {
        if delays.is_empty() || delays.len() != powers_db.len() {
            return Err(Error::BadConfig(
                "profile needs matching non-empty delay and power lists".into(),
            ));
        }
        let mut linear: Vec<f64> = powers_db.iter().map(|db| 10f64.powf(db / 10.0)).collect();
        let total: f64 = linear.iter().sum();
        for p in &mut linear {
            *p /= total;
        }
        Ok(Self {
            delays,
            powers_db,
            powers_linear: linear,
        })
    }

    /// Rounds nanosecond delays onto the sample grid of the given rate.
    pub fn from_ns(delays_ns: &[f64], powers_db: &[f64], sample_rate_hz: f64) -> Result<Self> {
        if sample_rate_hz <= 0.0 {
            return Err(Error::BadConfig("sample rate must be positive".into()));
        }
        let delays = delays_ns
            .iter()
            .map(|ns| (ns * 1e-9 * sample_rate_hz).round() as usize)
            .collect();
        Self::new(delays, powers_db.to_vec())
    }

    /// ITU Vehicular A at 10 MHz sampling: delays 0, 310, 710, 1090, 1730,
    /// 2510 ns and powers 0, −1, −9, −10, −15, −20 dB.
    pub fn itu_vehicular_a() -> Self {
        Self::from_ns(
            &[0.0, 310.0, 710.0, 1090.0, 1730.0, 2510.0],
            &[0.0, -1.0, -9.0, -10.0, -15.0, -20.0],
            10e6,
        )
        .unwrap()
    }

    pub fn len(&self) -> usize {
        self.delays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delays.is_empty()
    }

    pub fn delays(&self) -> &[usize] {
        &self.delays
    }

    pub fn powers_db(&self) -> &[f64] {
        &self.powers_db
    }

    pub fn powers_linear(&self) -> &[f64] {
        &self.powers_linear
    }
}

/// One Rayleigh-fading draw: tap matrices aligned with the profile delays.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub taps: Vec<CMat>,
    pub delays: Vec<usize>,
    pub seed: u64,
}

/// h_l = √p_l · G with i.i.d. CN(0,1) entries, deterministic under the seed.
pub fn gen_channel(pdp: &PowerDelayProfile, m: usize, seed: u64) -> ChannelRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taps = pdp
        .powers_linear
        .iter()
        .map(|&p| {
            let scale = p.sqrt() / (2.0f64).sqrt();
            CMat::from_fn(m, m, |_, _| {
                use rand_distr::StandardNormal;
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                cplx(re * scale, im * scale)
            })
        })
        .collect();
    ChannelRealization {
        taps,
        delays: pdp.delays.clone(),
        seed,
    }
}

/// H(e^{jω}) = Σ_l h_l e^{−jω·delay_l}.
pub fn channel_freq_response(ch: &ChannelRealization, omega: f64) -> CMat {
    let m = ch.taps[0].nrows();
    let mut h = CMat::zeros(m, m);
    for (tap, &delay) in ch.taps.iter().zip(&ch.delays) {
        let ph = cis(-omega * delay as f64);
        h += tap.map(|v| v * ph);
    }
    h
}

/// Right-singular-vector samples along a frequency grid, with column phases
/// aligned to the previous grid point for a continuous track.
#[derive(Debug, Clone)]
pub struct SvdTrack {
    pub samples: Vec<UnitarySample>,
    /// Grid points where consecutive singular values were closer than 1e−9
    /// (column pairing ambiguous; sample kept).
    pub degenerate: Vec<bool>,
}

pub fn svd_precoder_track(ch: &ChannelRealization, grid: &[f64]) -> Result<SvdTrack> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadConfig("frequency grid must be sorted".into()));
    }
    let m = ch.taps[0].nrows();
    let mut samples: Vec<UnitarySample> = Vec::with_capacity(grid.len());
    let mut degenerate = Vec::with_capacity(grid.len());
    for &omega in grid {
        let h = channel_freq_response(ch, omega);
        let svd = h.svd(false, true);
        // rows of v_t are the right singular vectors; columns of V
        let mut v = svd.v_t.as_ref().unwrap().adjoint();
        let sv = &svd.singular_values;
        degenerate.push(sv.as_slice().windows(2).any(|w| (w[0] - w[1]).abs() < 1e-9));
        if let Some(prev) = samples.last() {
            for c in 0..m {
                let mut inner = cplx(0.0, 0.0);
                for r in 0..m {
                    inner += prev.u[(r, c)].conj() * v[(r, c)];
                }
                if inner.norm() > 0.0 {
                    let phase = (inner / inner.norm()).conj();
                    for r in 0..m {
                        v[(r, c)] *= phase;
                    }
                }
            }
        }
        samples.push(UnitarySample { omega, u: v });
    }
    Ok(SvdTrack {
        samples,
        degenerate,
    })
}

/// Interpolation methods the comparison harness knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    SnipOptimized,
    Geodesic,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::SnipOptimized => "snip_optimized",
            Method::Geodesic => "geodesic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "snip_optimized" => Ok(Method::SnipOptimized),
            "geodesic" => Ok(Method::Geodesic),
            other => Err(Error::BadConfig(format!("unknown method '{other}'"))),
        }
    }
}

/// Sweep configuration; `point_omegas` are snapped to the evaluation grid.
#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub m: usize,
    pub point_omegas: Vec<f64>,
    pub grid_size: usize,
    pub n_seeds: usize,
    pub methods: Vec<Method>,
    pub pdp: PowerDelayProfile,
    pub base_seed: u64,
    pub barrier: BarrierConfig,
    pub design: DesignOptions,
}

/// The six interpolation frequencies of the reference experiment.
pub fn paper_point_omegas() -> Vec<f64> {
    vec![
        -0.99 * PI,
        -3.0 * PI / 5.0,
        -PI / 5.0,
        PI / 5.0,
        3.0 * PI / 5.0,
        0.99 * PI,
    ]
}

impl CompareConfig {
    /// m×m sweep with the reference six-point data set, 257-point grid and
    /// 100 seeds.
    pub fn default_for(m: usize) -> Self {
        Self {
            m,
            point_omegas: paper_point_omegas(),
            grid_size: 257,
            n_seeds: 100,
            methods: vec![Method::SnipOptimized, Method::Geodesic],
            pdp: PowerDelayProfile::itu_vehicular_a(),
            base_seed: 0,
            barrier: BarrierConfig::default(),
            design: DesignOptions::default(),
        }
    }
}

/// Mean and median error curves for one method.
#[derive(Debug, Clone)]
pub struct MethodCurves {
    pub method: Method,
    pub frob_mean: Vec<f64>,
    pub frob_median: Vec<f64>,
    pub flag_mean: Vec<f64>,
    pub flag_median: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub grid: Vec<f64>,
    /// Grid indices the interpolation points snapped to.
    pub anchor_indices: Vec<usize>,
    pub curves: Vec<MethodCurves>,
    pub seeds_used: usize,
    pub failures: usize,
    pub failure_rate: f64,
    pub config_m: usize,
    pub config_n_seeds: usize,
}

/// Uniform grid over (−π, π].
pub fn frequency_grid(size: usize) -> Vec<f64> {
    (0..size)
        .map(|k| -PI + 2.0 * PI * (k as f64 + 1.0) / size as f64)
        .collect()
}

struct SeedErrors {
    // per method: (frobenius, flag) per grid point
    per_method: Vec<(Vec<f64>, Vec<f64>)>,
}

fn run_seed(cfg: &CompareConfig, grid: &[f64], anchors: &[usize], seed: u64) -> Result<SeedErrors> {
    let ch = gen_channel(&cfg.pdp, cfg.m, seed);
    let track = svd_precoder_track(&ch, grid)?;
    let samples: Vec<UnitarySample> = anchors
        .iter()
        .map(|&i| track.samples[i].clone())
        .collect();
    let mut per_method = Vec::with_capacity(cfg.methods.len());
    for method in &cfg.methods {
        let interpolants: Vec<CMat> = match method {
            Method::SnipOptimized => {
                let omegas: Vec<f64> = samples.iter().map(|s| s.omega).collect();
                let responses: Vec<CMat> = samples.iter().map(|s| s.u.clone()).collect();
                let gammas = optimize_group_delays(&omegas, &responses, &cfg.barrier)?;
                // near-π anchors make poor early recursion pivots
                let order = crate::construct::conditioning_order(&omegas);
                let raw: Vec<InterpolationPoint> = order
                    .iter()
                    .map(|&i| {
                        InterpolationPoint::new(
                            samples[i].omega,
                            samples[i].u.clone(),
                            Some(gammas.gammas[i].clone()),
                        )
                    })
                    .collect();
                let ds = validate_dataset(&raw)?;
                let filter = design_allpass(&ds, &cfg.design)?;
                grid.iter()
                    .map(|&w| eval_filter(&filter, w))
                    .collect::<Result<_>>()?
            }
            Method::Geodesic => grid
                .iter()
                .map(|&w| piecewise_geodesic(&samples, w))
                .collect::<Result<_>>()?,
        };
        let mut frob = Vec::with_capacity(grid.len());
        let mut flag = Vec::with_capacity(grid.len());
        for (i, got) in interpolants.iter().enumerate() {
            let truth = &track.samples[i].u;
            frob.push(frobenius_error(got, truth));
            flag.push(flag_distance(got, truth));
        }
        per_method.push((frob, flag));
    }
    Ok(SeedErrors { per_method })
}

/// Piecewise geodesic between consecutive anchors, wrapping around the
/// circle outside the anchored range.
pub fn piecewise_geodesic(samples: &[UnitarySample], omega: f64) -> Result<CMat> {
    if samples.is_empty() {
        return Err(Error::BadConfig("no anchor samples".into()));
    }
    if samples.len() == 1 {
        return Ok(samples[0].u.clone());
    }
    let first = samples.first().unwrap();
    let last = samples.last().unwrap();
    if omega < first.omega {
        // wrap segment from the last anchor (shifted down a period)
        let ghost = UnitarySample {
            omega: last.omega - 2.0 * PI,
            u: last.u.clone(),
        };
        return Ok(geodesic_interpolate(&ghost, first, omega)?.0);
    }
    if omega > last.omega {
        let ghost = UnitarySample {
            omega: first.omega + 2.0 * PI,
            u: first.u.clone(),
        };
        return Ok(geodesic_interpolate(last, &ghost, omega)?.0);
    }
    let hi = samples.partition_point(|s| s.omega < omega).min(samples.len() - 1);
    let lo = hi.saturating_sub(1);
    if (samples[hi].omega - omega).abs() < 1e-15 {
        return Ok(samples[hi].u.clone());
    }
    Ok(geodesic_interpolate(&samples[lo], &samples[hi], omega)?.0)
}

fn snap_to_grid(grid: &[f64], omegas: &[f64]) -> Result<Vec<usize>> {
    let mut indices = Vec::with_capacity(omegas.len());
    for &w in omegas {
        // skip grid frequencies in the π exclusion zone: they cannot serve
        // as interpolation nodes
        let idx = grid
            .iter()
            .enumerate()
            .filter(|(_, g)| crate::dataset::angle_distance(**g, PI) >= 1e-6)
            .min_by(|(_, a), (_, b)| (*a - w).abs().total_cmp(&(*b - w).abs()))
            .map(|(i, _)| i)
            .ok_or_else(|| Error::BadConfig("grid has no usable frequencies".into()))?;
        if indices.contains(&idx) {
            return Err(Error::BadConfig(
                "two interpolation points snapped to the same grid frequency".into(),
            ));
        }
        indices.push(idx);
    }
    Ok(indices)
}

fn thread_count() -> usize {
    std::env::var("ALLPASS_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

/// Runs the sweep: per seed, extract precoders, design and evaluate each
/// method against the true track, aggregate mean and median curves.
/// Construction failures are counted and the seed excluded from the curves.
pub fn run_comparison(cfg: &CompareConfig) -> Result<ComparisonReport> {
    if cfg.methods.is_empty() {
        return Err(Error::BadConfig("methods list is empty".into()));
    }
    if cfg.grid_size < 2 || cfg.n_seeds == 0 {
        return Err(Error::BadConfig("grid and seed counts must be positive".into()));
    }
    let grid = frequency_grid(cfg.grid_size);
    let anchors = snap_to_grid(&grid, &cfg.point_omegas)?;

    let seeds: Vec<u64> = (0..cfg.n_seeds as u64).map(|s| cfg.base_seed + s).collect();
    let threads = thread_count().min(seeds.len());
    let mut outcomes: Vec<Option<SeedErrors>> = Vec::with_capacity(seeds.len());
    if threads <= 1 {
        for &seed in &seeds {
            outcomes.push(run_seed(cfg, &grid, &anchors, seed).ok());
        }
    } else {
        let mut slots: Vec<Option<SeedErrors>> = (0..seeds.len()).map(|_| None).collect();
        std::thread::scope(|scope| {
            for (chunk_ids, chunk_slots) in seeds
                .chunks(seeds.len().div_ceil(threads))
                .zip(slots.chunks_mut(seeds.len().div_ceil(threads)))
            {
                let grid = &grid;
                let anchors = &anchors;
                scope.spawn(move || {
                    for (slot, &seed) in chunk_slots.iter_mut().zip(chunk_ids) {
                        *slot = run_seed(cfg, grid, anchors, seed).ok();
                    }
                });
            }
        });
        outcomes = slots;
    }

    let successes: Vec<&SeedErrors> = outcomes.iter().flatten().collect();
    let failures = cfg.n_seeds - successes.len();
    if successes.is_empty() {
        return Err(Error::BadConfig("every seed failed to construct".into()));
    }

    let aggregate = |values: &mut Vec<f64>| -> (f64, f64) {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        values.sort_by(f64::total_cmp);
        let mid = values.len() / 2;
        let median = if values.len() % 2 == 1 {
            values[mid]
        } else {
            0.5 * (values[mid - 1] + values[mid])
        };
        (mean, median)
    };

    let mut curves = Vec::with_capacity(cfg.methods.len());
    for (mi, method) in cfg.methods.iter().enumerate() {
        let mut frob_mean = Vec::with_capacity(grid.len());
        let mut frob_median = Vec::with_capacity(grid.len());
        let mut flag_mean = Vec::with_capacity(grid.len());
        let mut flag_median = Vec::with_capacity(grid.len());
        for g in 0..grid.len() {
            let mut frob: Vec<f64> = successes.iter().map(|s| s.per_method[mi].0[g]).collect();
            let mut flag: Vec<f64> = successes.iter().map(|s| s.per_method[mi].1[g]).collect();
            let (fm, fmed) = aggregate(&mut frob);
            let (gm, gmed) = aggregate(&mut flag);
            frob_mean.push(fm);
            frob_median.push(fmed);
            flag_mean.push(gm);
            flag_median.push(gmed);
        }
        curves.push(MethodCurves {
            method: *method,
            frob_mean,
            frob_median,
            flag_mean,
            flag_median,
        });
    }
    Ok(ComparisonReport {
        grid,
        anchor_indices: anchors,
        curves,
        seeds_used: successes.len(),
        failures,
        failure_rate: failures as f64 / cfg.n_seeds as f64,
        config_m: cfg.m,
        config_n_seeds: cfg.n_seeds,
    })
}

/// Timing bench configuration.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub m_list: Vec<usize>,
    pub n_points: usize,
    pub repetitions: usize,
    pub eval_points: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            m_list: vec![2, 3, 4, 5, 6, 7],
            n_points: 6,
            repetitions: 20,
            eval_points: 64,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TimingRow {
    pub method: Method,
    pub m: usize,
    pub mean_ms: f64,
}

/// Wall-clock means for reconstructing one precoder at one frequency:
/// evaluating a prebuilt filter versus a fresh geodesic log/exp step.
pub fn bench_timing(cfg: &BenchConfig) -> Result<Vec<TimingRow>> {
    if cfg.n_points < 2 {
        return Err(Error::BadConfig("bench needs at least two points".into()));
    }
    let mut rows = Vec::new();
    let pdp = PowerDelayProfile::itu_vehicular_a();
    for &m in &cfg.m_list {
        let point_omegas = if cfg.n_points == 6 {
            paper_point_omegas()
        } else {
            (0..cfg.n_points)
                .map(|i| -0.99 * PI + 1.98 * PI * i as f64 / (cfg.n_points - 1) as f64)
                .collect()
        };
        let ch = gen_channel(&pdp, m, cfg.seed);
        let track = svd_precoder_track(&ch, &point_omegas)?;
        let samples = track.samples;
        let omegas: Vec<f64> = samples.iter().map(|s| s.omega).collect();
        let responses: Vec<CMat> = samples.iter().map(|s| s.u.clone()).collect();
        let gammas = optimize_group_delays(&omegas, &responses, &BarrierConfig::default())?;
        let order = crate::construct::conditioning_order(&omegas);
        let raw: Vec<InterpolationPoint> = order
            .iter()
            .map(|&i| {
                InterpolationPoint::new(
                    samples[i].omega,
                    samples[i].u.clone(),
                    Some(gammas.gammas[i].clone()),
                )
            })
            .collect();
        let filter = design_allpass(&validate_dataset(&raw)?, &DesignOptions::default())?;

        let eval_grid: Vec<f64> = (0..cfg.eval_points)
            .map(|k| -0.98 * PI + 1.96 * PI * (k as f64 + 0.5) / cfg.eval_points as f64)
            .collect();

        let evals = (cfg.repetitions * cfg.eval_points) as f64;
        let t0 = Instant::now();
        for _ in 0..cfg.repetitions {
            for &w in &eval_grid {
                let g = eval_filter(&filter, w)?;
                std::hint::black_box(&g);
            }
        }
        rows.push(TimingRow {
            method: Method::SnipOptimized,
            m,
            mean_ms: t0.elapsed().as_secs_f64() * 1e3 / evals,
        });

        let t1 = Instant::now();
        for _ in 0..cfg.repetitions {
            for &w in &eval_grid {
                let g = piecewise_geodesic(&samples, w)?;
                std::hint::black_box(&g);
            }
        }
        rows.push(TimingRow {
            method: Method::Geodesic,
            m,
            mean_ms: t1.elapsed().as_secs_f64() * 1e3 / evals,
        });
    }
    Ok(rows)
}
