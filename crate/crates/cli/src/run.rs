//! Dispatch of a parsed [`RunConfig`].

use std::path::{Path, PathBuf};

use eecrit_core::alpha::{
    feasible_alpha, optimal_alpha_classical, oracle_grid, solve_x0, AlphaGrid, AlphaInterval,
    Crossover,
};
use eecrit_core::cutoff::{
    build_cutoff, lemma_conv_sweep, make_dyadic_cover, sharpness_disjoint, Cover, CutoffChecks,
    CutoffGrid, Layout,
};
use eecrit_core::numeric::format_rational;
use eecrit_core::region::bifurcation::bifurcation_thresholds;
use eecrit_core::region::boundary::build_region;
use eecrit_core::region::export::{to_csv, to_json, to_svg, to_svg_titled, DEFAULT_ARC_SAMPLES};
use eecrit_core::region::figures::figure;
use eecrit_core::spectral::{
    band_limited, commutator_report, commutator_two_mode, corpus_report, interpolation_bound_ratio,
    periodic_cutoff, CorpusConfig, Experiment, PeriodicField,
};
use eecrit_core::{
    final_verdict, type_i_verdict, Error, ExponentPoint, Point, Real, Scenario, SingularityKind,
    Status, TypeIKind,
};
use serde::Serialize;

use crate::config::{Command, FormatArg, KindArg, LayoutArg, RunConfig, ScenarioArgs, TypeIArg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_OUT_OF_DOMAIN: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable naming the default output directory.
pub const OUT_DIR_VAR: &str = "EECRIT_OUT_DIR";

/// Rendered artifact and the exit code it implies.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            code: EXIT_OK,
        }
    }

    fn with(body: String, success: bool, code_on_failure: i32) -> Self {
        Outcome {
            body,
            code: if success { EXIT_OK } else { code_on_failure },
        }
    }
}

/// Run failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub code: i32,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutOfDomain(_) | Error::InvalidScenario(_) | Error::NoRoot(_) => {
                EXIT_OUT_OF_DOMAIN
            }
            Error::InvalidArgument(_) | Error::Parse(_) | Error::UnknownFigure(_) => EXIT_USAGE,
            Error::Numerical(_) => EXIT_FAILURE,
        };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure {
        message: e.to_string(),
        code: EXIT_FAILURE,
    })?;
    s.push('\n');
    Ok(s)
}

fn scenario(a: &ScenarioArgs) -> Result<Scenario, Failure> {
    let kind = match a.scenario {
        KindArg::Slice => SingularityKind::Slice,
        KindArg::General => SingularityKind::General,
    };
    Ok(Scenario::new(a.gamma.clone(), kind, a.d.clone())?.with_measure_zero(a.measure_zero))
}

#[derive(Serialize)]
struct AlphaOutput {
    scenario: Scenario,
    optimal_alpha_classical: Option<String>,
    x0: Option<Crossover>,
    x0_note: Option<String>,
    point: Option<ExponentPoint>,
    feasible_alpha: Option<AlphaInterval>,
}

#[derive(Serialize)]
struct CutoffOutput {
    cylinders: usize,
    h: Real,
    cover: Cover,
    grid: CutoffGrid,
    exponent_a: f64,
    checks: CutoffChecks,
}

#[derive(Serialize)]
struct TwoModeOutput {
    k: u32,
    m: u32,
    gamma: f64,
    residual_l2: f64,
    closed_form: f64,
    abs_error: f64,
    report: eecrit_core::spectral::CommutatorReport,
}

/// Computes the artifact for `cfg` without writing it anywhere.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, Failure> {
    match &cfg.command {
        Command::Check { scenario: sa, p, q } => {
            let s = scenario(sa)?;
            let pt = ExponentPoint::from_exponents(p, q)?;
            let v = final_verdict(&pt, &s)?;
            let code = if v.status == Status::OutOfDomain {
                EXIT_OUT_OF_DOMAIN
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                body: json(&v)?,
                code,
            })
        }
        Command::Region {
            scenario: sa,
            format,
            arc_samples,
        } => {
            let rb = build_region(&scenario(sa)?)?;
            let body = match format {
                FormatArg::Json => {
                    let mut s = to_json(&rb)?;
                    s.push('\n');
                    s
                }
                FormatArg::Csv => to_csv(&rb, *arc_samples)?,
                FormatArg::Svg => to_svg(&rb, *arc_samples),
            };
            Ok(Outcome::ok(body))
        }
        Command::Figure { name, scenario: sa } => {
            if name == "custom" {
                let s = scenario(sa)?;
                let rb = build_region(&s)?;
                let title = s.to_string();
                Ok(Outcome::ok(to_svg_titled(&rb, DEFAULT_ARC_SAMPLES, &title)))
            } else {
                Ok(Outcome::ok(figure(name)?.svg()?))
            }
        }
        Command::Bifurcations { gamma } => Ok(Outcome::ok(json(&bifurcation_thresholds(gamma)?)?)),
        Command::Alpha {
            scenario: sa,
            x0,
            p,
            q,
        } => {
            let s = scenario(sa)?;
            if *x0 {
                let c = solve_x0(&s.d, &s.gamma)?;
                let v = match &c.exact {
                    Some(r) => format_rational(r),
                    None => format!("{}", c.value),
                };
                return Ok(Outcome::ok(format!("{v}\n")));
            }
            let (x0v, note) = match solve_x0(&s.d, &s.gamma) {
                Ok(c) => (Some(c), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let classical = if s.is_classical() {
                Some(format_rational(&optimal_alpha_classical(&s.d)?))
            } else {
                None
            };
            let (point, feasible) = match (p, q) {
                (Some(p), Some(q)) => {
                    let pt = ExponentPoint::from_exponents(p, q)?;
                    let feasible = match &pt {
                        ExponentPoint::Exact { x, y } => {
                            feasible_alpha(&s, &Point::new(x.clone(), y.clone()))
                        }
                        ExponentPoint::Float { .. } => None,
                    };
                    (Some(pt), feasible)
                }
                _ => (None, None),
            };
            let out = AlphaOutput {
                scenario: s,
                optimal_alpha_classical: classical,
                x0: x0v,
                x0_note: note,
                point,
                feasible_alpha: feasible,
            };
            Ok(Outcome::ok(json(&out)?))
        }
        Command::LemmaConv {
            d,
            alpha,
            sigma,
            s,
            j_max,
            format,
        } => {
            let rep = lemma_conv_sweep(d, alpha, sigma, s, *j_max)?;
            conv_outcome(&rep, *format)
        }
        Command::Sharpness {
            d,
            sigma,
            s,
            j_max,
            format,
        } => {
            let rep = sharpness_disjoint(d, sigma, s, *j_max)?;
            conv_outcome(&rep, *format)
        }
        Command::Cutoff {
            d,
            alpha,
            generations,
            layout,
            radius,
            dim,
            n,
            nt,
            a,
        } => {
            let cover = match radius {
                Some(r) => Cover::single(r.clone(), alpha.clone()),
                None => {
                    let layout = match layout {
                        LayoutArg::Nested => Layout::Nested,
                        LayoutArg::Disjoint => Layout::Disjoint,
                    };
                    make_dyadic_cover(d, *generations, layout, alpha)?
                }
            };
            let grid = CutoffGrid::around(&cover, *dim, *n, *nt);
            let field = build_cutoff(&cover, &grid, *a)?;
            let passed = field.checks.passed;
            let out = CutoffOutput {
                cylinders: cover.entries.len(),
                h: cover.h.clone(),
                cover,
                grid: field.grid,
                exponent_a: field.exponent_a,
                checks: field.checks,
            };
            Ok(Outcome::with(json(&out)?, passed, EXIT_INCONCLUSIVE))
        }
        Command::Commutator {
            gamma,
            p,
            modes,
            n,
            dim,
            seed,
            corpus,
        } => {
            if let Some(samples) = corpus {
                let cfg = CorpusConfig {
                    dim: *dim,
                    n: *n,
                    samples: *samples,
                    seed: *seed,
                };
                let rep = corpus_report(Experiment::Commutator, &cfg, *gamma, *p)?;
                return Ok(Outcome::with(json(&rep)?, rep.stable, EXIT_INCONCLUSIVE));
            }
            match modes {
                Some((k, m)) => {
                    if *dim != 1 {
                        return Err(Failure {
                            message: "--modes needs --dim 1".into(),
                            code: EXIT_USAGE,
                        });
                    }
                    let (kf, mf) = (*k as f64, *m as f64);
                    let u = PeriodicField::from_fn(1, *n, |x| (kf * x[0]).cos())?;
                    let phi = PeriodicField::from_fn(1, *n, |x| (mf * x[0]).cos())?;
                    let report = commutator_report(&u, &phi, *gamma, *p)?;
                    let closed_form = commutator_two_mode(*k, *m, *gamma);
                    let out = TwoModeOutput {
                        k: *k,
                        m: *m,
                        gamma: *gamma,
                        residual_l2: report.lhs,
                        closed_form,
                        abs_error: (report.lhs - closed_form).abs(),
                        report,
                    };
                    Ok(Outcome::ok(json(&out)?))
                }
                None => {
                    let k_max = n / 8;
                    let u = band_limited(*dim, *n, k_max, seed.wrapping_add(1))?;
                    let phi = band_limited(*dim, *n, k_max, *seed)?;
                    Ok(Outcome::ok(json(&commutator_report(
                        &u, &phi, *gamma, *p,
                    )?)?))
                }
            }
        }
        Command::InterpBound {
            gamma,
            a,
            mode,
            cutoff_radius,
            n,
            dim,
            seed,
            corpus,
        } => {
            if let Some(samples) = corpus {
                let cfg = CorpusConfig {
                    dim: *dim,
                    n: *n,
                    samples: *samples,
                    seed: *seed,
                };
                let rep = corpus_report(Experiment::Interpolation, &cfg, *gamma, *a)?;
                return Ok(Outcome::with(json(&rep)?, rep.stable, EXIT_INCONCLUSIVE));
            }
            let phi = match (mode, cutoff_radius) {
                (Some(_), Some(_)) => {
                    return Err(Failure {
                        message: "--mode and --cutoff-radius are exclusive".into(),
                        code: EXIT_USAGE,
                    })
                }
                (Some(k), None) => {
                    let kf = *k as f64;
                    PeriodicField::from_fn(*dim, *n, |x| {
                        x.iter().map(|xi| (kf * xi).cos()).product()
                    })?
                }
                (None, Some(r)) => periodic_cutoff(*dim, *n, *r)?,
                (None, None) => band_limited(*dim, *n, n / 8, *seed)?,
            };
            Ok(Outcome::ok(json(&interpolation_bound_ratio(
                &phi, *gamma, *a,
            )?)?))
        }
        Command::Oracle {
            scenario: sa,
            resolution,
        } => {
            let rep = oracle_grid(&scenario(sa)?, *resolution, &AlphaGrid::extended())?;
            Ok(Outcome::with(json(&rep)?, rep.passed(), EXIT_INCONCLUSIVE))
        }
        Command::TypeI { kind, d } => {
            let k = match kind {
                TypeIArg::InSpace => TypeIKind::InSpace,
                TypeIArg::InTime => TypeIKind::InTime,
            };
            Ok(Outcome::ok(json(&type_i_verdict(k, d)?)?))
        }
    }
}

fn conv_outcome(
    rep: &eecrit_core::cutoff::ConvSweepReport,
    format: FormatArg,
) -> Result<Outcome, Failure> {
    let body = match format {
        FormatArg::Json => json(rep)?,
        FormatArg::Csv => rep.to_csv(),
        FormatArg::Svg => {
            return Err(Failure {
                message: "sweeps export json or csv, not svg".into(),
                code: EXIT_USAGE,
            })
        }
    };
    let decided = rep.is_bounded() || rep.is_divergent();
    Ok(Outcome::with(body, decided, EXIT_INCONCLUSIVE))
}

/// Resolves `--out` against the output-directory variable.
pub fn output_path(out: &Path, env_dir: Option<&str>) -> PathBuf {
    match env_dir {
        Some(dir) if out.is_relative() && !dir.is_empty() => Path::new(dir).join(out),
        _ => out.to_path_buf(),
    }
}

/// Writes to stdout, ignoring a closed pipe.
pub fn emit(body: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(body.as_bytes()).and_then(|_| out.flush());
}

/// Executes `cfg` and writes the artifact to `--out` or stdout.
pub fn run(cfg: &RunConfig) -> i32 {
    match execute(cfg) {
        Ok(outcome) => {
            match &cfg.out {
                Some(out) => {
                    let path = output_path(out, std::env::var(OUT_DIR_VAR).ok().as_deref());
                    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                        if let Err(e) = std::fs::create_dir_all(parent) {
                            eprintln!("error: cannot create {}: {e}", parent.display());
                            return EXIT_FAILURE;
                        }
                    }
                    if let Err(e) = std::fs::write(&path, &outcome.body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return EXIT_FAILURE;
                    }
                }
                None => emit(&outcome.body),
            }
            outcome.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
