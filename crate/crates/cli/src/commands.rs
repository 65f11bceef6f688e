use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use freelsd::analysis::{ks_to_density, shrinkage_experiment};
use freelsd::lsd::{lsd_density, toeplitz_lsd_density};
use freelsd::montecarlo::{
    eigenvalues, sample_ar1, sample_covariance_trial, sample_sigma_s, sample_sigma_t, sample_spiked,
    sample_wigner, ArMode,
};
use freelsd::spiked::{wigner_spike_map, wigner_spike_shrink};
use freelsd::transforms::evaluate;
use freelsd::validation::{run_suite, ALL, ANALYTIC, SHRINKAGE_MULTIPLES};
use freelsd::{
    BaseModel, Complex64, DensityCurve, EsdSample, GridSpec, InversionConfig, ModelParams, SimSpec,
    SpikeSpec, SpikedModel, TransformKind,
};

use crate::output::{num, Format, Sink, Table};
use crate::Failure;

#[derive(Debug, Parser)]
#[command(name = "freelsd", version, about = "Limiting spectra of separable sample covariance matrices")]
pub struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory that relative `--out` paths are resolved against.
    #[arg(long, global = true, env = "FREELSD_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct OutArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format; inferred from the `--out` extension by default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args, Serialize)]
pub struct ParamArgs {
    /// Dimension ratio N/T (for simulations, defaults to n/t).
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    /// AR(1) correlation of the temporal covariance.
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<ModelParams, Failure> {
        Ok(ModelParams::new(self.c.unwrap_or(0.5), self.alpha, self.beta, self.r)?)
    }

    /// Parameters for an `n × t` simulation; an explicit `--c` must equal `n/t`.
    fn sim_params(&self, n: usize, t: usize) -> Result<ModelParams, Failure> {
        let ratio = n as f64 / t as f64;
        if let Some(c) = self.c {
            if (c - ratio).abs() > 1e-12 * ratio {
                return Err(Failure::Usage(format!("--c {c} does not match n/t = {n}/{t} = {ratio}")));
            }
        }
        Ok(ModelParams::new(ratio, self.alpha, self.beta, self.r)?)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, requires = "hi")]
    pub lo: Option<f64>,
    #[arg(long, requires = "lo")]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = GridSpec::DEFAULT_COUNT)]
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    Mp,
    Semicircle,
    Toeplitz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    Cauchy,
    M,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleArg {
    SampleCovariance,
    Wigner,
    Spatial,
    Toeplitz,
    Spiked,
    Ar1Heterogeneous,
    Ar1Homogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Every acceptance criterion.
    Quick,
    /// Only the checks without random matrices.
    Analytic,
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let re = re.trim().parse().map_err(|e| format!("bad real part {re:?}: {e}"))?;
    let im = im.trim().parse().map_err(|e| format!("bad imaginary part {im:?}: {e}"))?;
    Ok((re, im))
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Cauchy, M or N transform of a base model at complex points.
    Transform {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, value_enum, default_value = "cauchy")]
        kind: KindArg,
        /// Marchenko-Pastur ratio.
        #[arg(long, default_value_t = 0.5)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        /// Evaluation point `RE,IM`; repeat for several.
        #[arg(long = "z", value_parser = parse_complex, required = true, allow_hyphen_values = true)]
        z: Vec<(f64, f64)>,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutArgs,
    },
    /// Limiting density of the separable sample covariance.
    Lsd {
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        #[serde(flatten)]
        grid: GridArgs,
        /// Decreasing imaginary offsets for Stieltjes inversion.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 1e-4, 1e-5])]
        eps: Vec<f64>,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutArgs,
    },
    /// Limiting density of the Toeplitz matrix `r^|i-j|`.
    ToeplitzLsd {
        #[arg(long, default_value_t = 0.5)]
        r: f64,
        #[command(flatten)]
        #[serde(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutArgs,
    },
    /// Eigenvalues of one simulated realization.
    Simulate {
        #[arg(long, value_enum, default_value = "sample-covariance")]
        ensemble: EnsembleArg,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        t: usize,
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Spike levels (spiked ensemble), descending.
        #[arg(long, value_delimiter = ',')]
        theta: Vec<f64>,
        /// Also report the KS distance to the limiting density.
        #[arg(long)]
        ks: bool,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutArgs,
    },
    /// Predicted outlier locations for spike levels.
    SpikeForward {
        #[arg(long, value_delimiter = ',', required = true)]
        theta: Vec<f64>,
        /// Use the Wigner closed form instead of the separable model.
        #[arg(long)]
        wigner: bool,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutArgs,
    },
    /// Spike levels recovered from observed top eigenvalues.
    Shrink {
        /// Observed eigenvalues, descending.
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<f64>,
        #[arg(long)]
        wigner: bool,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutArgs,
    },
    /// Shrinkage error over repeated spiked simulations.
    Experiment {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        t: usize,
        #[command(flatten)]
        #[serde(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Spike levels, descending; defaults to fixed multiples of the
        /// phase-transition threshold.
        #[arg(long, value_delimiter = ',')]
        theta: Vec<f64>,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutArgs,
    },
    /// Runs the acceptance checks; exits with status 2 if any fails.
    Validate {
        #[arg(long, value_enum, default_value = "quick")]
        suite: Suite,
        /// Restrict to these criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[command(flatten)]
        #[serde(flatten)]
        out: OutArgs,
    },
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let started = Instant::now();
    let config = serde_json::to_value(&cli.command).expect("arguments serialize");
    let sink = |out: &OutArgs| Sink::new(out.out.as_deref(), cli.out_dir.as_deref(), out.format, started);
    match &cli.command {
        Command::Transform { model, kind, c, alpha, beta, r, z, out } => {
            let model = match model {
                ModelArg::Mp => BaseModel::marchenko_pastur(*c)?,
                ModelArg::Semicircle => BaseModel::shifted_semicircle(*alpha, *beta)?,
                ModelArg::Toeplitz => BaseModel::exponential_toeplitz(*r)?,
            };
            let kind = match kind {
                KindArg::Cauchy => TransformKind::Cauchy,
                KindArg::M => TransformKind::M,
                KindArg::N => TransformKind::N,
            };
            let values = z
                .iter()
                .map(|&(re, im)| evaluate(&model, kind, Complex64::new(re, im)))
                .collect::<freelsd::Result<Vec<_>>>()?;
            let mut table = Table::new(&["re", "im", "value_re", "value_im"]);
            for v in &values {
                table.push(vec![num(v.z.re), num(v.z.im), num(v.value.re), num(v.value.im)]);
            }
            let body = json!({ "model": model, "kind": kind, "values": values });
            sink(out).emit(&table, body, config)?;
        }
        Command::Lsd { params, grid, eps, out } => {
            let p = params.params()?;
            let mut cfg = InversionConfig { epsilon_schedule: eps.clone(), ..Default::default() };
            cfg.grid = match (grid.lo, grid.hi) {
                (Some(lo), Some(hi)) => Some(GridSpec::new(lo, hi, grid.count)?),
                _ => {
                    let auto = GridSpec::auto(&p);
                    Some(GridSpec::new(auto.lo, auto.hi, grid.count)?)
                }
            };
            let curve = lsd_density(&p, &cfg)?;
            log::info!("lsd mass {:.6}, support [{}, {}]", curve.mass, curve.support.lo, curve.support.hi);
            let body = json!({ "params": p, "grid": cfg.grid, "xs": curve.xs, "density": curve.density,
                "support": curve.support, "mass": curve.mass });
            sink(out).emit(&density_table(&curve), body, config)?;
        }
        Command::ToeplitzLsd { r, grid, out } => {
            let model = BaseModel::exponential_toeplitz(*r)?;
            let support = model.support();
            let spec = GridSpec::new(grid.lo.unwrap_or(support.lo), grid.hi.unwrap_or(support.hi), grid.count)?;
            let curve = toeplitz_lsd_density(*r, spec)?;
            let body = json!({ "r": r, "grid": spec, "xs": curve.xs, "density": curve.density,
                "support": curve.support, "mass": curve.mass });
            sink(out).emit(&density_table(&curve), body, config)?;
        }
        Command::Simulate { ensemble, n, t, params, seed, trial, theta, ks, out } => {
            let p = params.sim_params(*n, *t)?;
            let spec = SimSpec::new(*n, *t, &p, *seed, (*trial as usize) + 1)?;
            let sample = simulate(*ensemble, &spec, *trial, theta)?;
            let ks_value = if *ks {
                if *ensemble != EnsembleArg::SampleCovariance {
                    return Err(Failure::Usage("--ks is only available for the sample-covariance ensemble".into()));
                }
                Some(ks_to_density(&sample, &lsd_density(&p, &InversionConfig::default())?)?)
            } else {
                None
            };
            if let Some(v) = ks_value {
                eprintln!("ks {v}");
            }
            let mut table = Table::new(&["index", "eigenvalue"]);
            for (i, v) in sample.eigenvalues.iter().enumerate() {
                table.push(vec![i.to_string(), num(*v)]);
            }
            let body = json!({ "spec": spec, "ensemble": ensemble, "seed": seed, "trial": trial,
                "clamped": sample.clamped, "ks": ks_value, "eigenvalues": sample.eigenvalues });
            sink(out).emit(&table, body, config)?;
        }
        Command::SpikeForward { theta, wigner, sigma, params, out } => {
            let mut table = Table::new(&["theta", "eta", "detectable"]);
            let body = if *wigner {
                check_sigma(*sigma)?;
                let mut rows = Vec::new();
                for &th in theta {
                    let eta = wigner_spike_map(th, *sigma);
                    table.push(vec![num(th), num(eta), (th > *sigma).to_string()]);
                    rows.push(json!({ "theta": th, "eta": eta, "detectable": th > *sigma }));
                }
                json!({ "sigma": sigma, "results": rows })
            } else {
                let model = SpikedModel::new(params.params()?)?;
                let results = model.forward_map(&SpikeSpec::new(theta.clone())?)?;
                for r in &results {
                    table.push(vec![num(r.theta.unwrap_or(f64::NAN)), num(r.eta), r.detectable.to_string()]);
                }
                json!({ "params": model.params(), "critical_theta": model.critical_theta(),
                    "support_edge": model.support_edge(), "results": results })
            };
            sink(out).emit(&table, body, config)?;
        }
        Command::Shrink { lambda, wigner, sigma, params, out } => {
            let mut table = Table::new(&["lambda", "theta_hat", "recoverable"]);
            let cell = |v: Option<f64>| v.map(num).unwrap_or_default();
            let body = if *wigner {
                check_sigma(*sigma)?;
                let mut rows = Vec::new();
                for &l in lambda {
                    let hat = wigner_spike_shrink(l, *sigma);
                    table.push(vec![num(l), cell(hat), hat.is_some().to_string()]);
                    rows.push(json!({ "lambda": l, "theta_hat": hat }));
                }
                json!({ "sigma": sigma, "results": rows })
            } else {
                let model = SpikedModel::new(params.params()?)?;
                let results = model.shrink(lambda)?;
                for r in &results {
                    table.push(vec![num(r.eta), cell(r.theta_hat), r.theta_hat.is_some().to_string()]);
                }
                json!({ "params": model.params(), "critical_theta": model.critical_theta(),
                    "support_edge": model.support_edge(), "results": results })
            };
            sink(out).emit(&table, body, config)?;
        }
        Command::Experiment { n, t, params, seed, trials, theta, out } => {
            let p = params.sim_params(*n, *t)?;
            let spec = SimSpec::new(*n, *t, &p, *seed, *trials)?;
            let thetas = if theta.is_empty() {
                let crit = SpikedModel::new(p)?.critical_theta();
                SHRINKAGE_MULTIPLES.iter().take((n / 100).max(1)).map(|m| m * crit).collect()
            } else {
                theta.clone()
            };
            let table_data = shrinkage_experiment(&spec, &SpikeSpec::new(thetas)?, *trials)?;
            let mut table = Table::new(&["theta", "trial", "rel_error"]);
            for (k, column) in table_data.errors.iter().enumerate() {
                for (trial, e) in column.iter().enumerate() {
                    table.push(vec![num(table_data.thetas[k]), trial.to_string(), e.map(num).unwrap_or_default()]);
                }
            }
            let body = json!({ "spec": spec, "thetas": table_data.thetas,
                "critical_theta": table_data.critical_theta, "flagged": table_data.flagged,
                "summaries": table_data.summaries, "errors": table_data.errors });
            sink(out).emit(&table, body, config)?;
        }
        Command::Validate { suite, only, out } => {
            let pool: &[u8] = match suite {
                Suite::Quick => &ALL,
                Suite::Analytic => &ANALYTIC,
            };
            if let Some(bad) = only.iter().find(|id| !ALL.contains(id)) {
                return Err(Failure::Usage(format!("no criterion numbered {bad}; expected 1 to 12")));
            }
            let ids: Vec<u8> = pool.iter().copied().filter(|id| only.is_empty() || only.contains(id)).collect();
            let reports = run_suite(&ids);
            for r in &reports {
                println!("{}", r.line());
            }
            if out.out.is_some() {
                let mut table = Table::new(&["id", "passed", "measured", "threshold", "elapsed_s"]);
                for r in &reports {
                    table.push(vec![r.id.to_string(), r.passed.to_string(), num(r.measured), num(r.threshold), num(r.elapsed_s)]);
                }
                sink(out).emit(&table, json!({ "reports": reports }), config)?;
            }
            let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
            if !failed.is_empty() {
                return Err(Failure::Validation(format!("failed criteria: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}

fn density_table(curve: &DensityCurve) -> Table {
    let mut table = Table::new(&["x", "density"]);
    for (x, d) in curve.xs.iter().zip(&curve.density) {
        table.push(vec![num(*x), num(*d)]);
    }
    table
}

fn check_sigma(sigma: f64) -> Result<(), Failure> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--sigma must be positive, got {sigma}")))
    }
}

fn simulate(ensemble: EnsembleArg, spec: &SimSpec, trial: u64, theta: &[f64]) -> Result<EsdSample, Failure> {
    if ensemble != EnsembleArg::Spiked && !theta.is_empty() {
        return Err(Failure::Usage("--theta applies only to the spiked ensemble".into()));
    }
    let (n, t, seed, p) = (spec.n, spec.t, spec.seed, spec.params);
    let wrap = |eigenvalues: Vec<f64>, len: usize, ensemble, clamped| EsdSample {
        eigenvalues,
        n: len,
        t,
        seed,
        trial,
        ensemble,
        clamped,
    };
    use freelsd::montecarlo::Ensemble;
    Ok(match ensemble {
        EnsembleArg::SampleCovariance => sample_covariance_trial(spec, trial)?,
        EnsembleArg::Spiked => {
            if theta.is_empty() {
                return Err(Failure::Usage("the spiked ensemble needs --theta".into()));
            }
            sample_spiked(spec, &SpikeSpec::new(theta.to_vec())?, trial)?
        }
        EnsembleArg::Wigner => wrap(eigenvalues(&sample_wigner(n, seed)?)?, n, Ensemble::Wigner, 0),
        EnsembleArg::Spatial => {
            let s = sample_sigma_s(n, p.alpha(), p.beta(), seed)?;
            let mut values = s.eigenvalues;
            values.sort_by(f64::total_cmp);
            wrap(values, n, Ensemble::SpatialCovariance, s.clamped)
        }
        EnsembleArg::Toeplitz => wrap(eigenvalues(&sample_sigma_t(t, p.r())?.matrix)?, t, Ensemble::Toeplitz, 0),
        EnsembleArg::Ar1Heterogeneous => sample_ar1(n, t, ArMode::Heterogeneous, seed)?,
        EnsembleArg::Ar1Homogeneous => sample_ar1(n, t, ArMode::Homogeneous, seed)?,
    })
}
