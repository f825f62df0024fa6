//! Command-line configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eecrit_core::numeric::{format_rational, parse_rational};
use eecrit_core::{Exponent, Rational};

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn exponent(s: &str) -> Result<Exponent, String> {
    Exponent::parse(s).map_err(|e| e.to_string())
}

/// A float that also accepts `inf`.
fn extended_f64(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "infinity" | "Inf" | "∞" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("`{t}`: {e}")),
    }
}

fn mode_pair(s: &str) -> Result<(u32, u32), String> {
    let (k, m) = s
        .split_once(',')
        .ok_or_else(|| format!("expected k,m, got `{s}`"))?;
    let k = k.trim().parse::<u32>().map_err(|e| format!("`{k}`: {e}"))?;
    let m = m.trim().parse::<u32>().map_err(|e| format!("`{m}`: {e}"))?;
    Ok((k, m))
}

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v}")
    }
}

#[derive(Parser, Clone, Debug, PartialEq)]
#[command(
    name = "eecrit",
    version,
    about = "Energy-equality criteria for Navier-Stokes with a singular set"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the artifact to this file instead of stdout. Relative paths are
    /// resolved against $EECRIT_OUT_DIR when it is set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct ScenarioArgs {
    /// Dissipation power γ, as a rational `a/b` or decimal.
    #[arg(long, default_value = "1", value_parser = rational)]
    pub gamma: Rational,
    /// Dimension of the singular set.
    #[arg(long, default_value = "0", value_parser = rational)]
    pub d: Rational,
    /// Where the singular set lives.
    #[arg(long, value_enum, default_value_t = KindArg::Slice)]
    pub scenario: KindArg,
    /// The singular set has zero d-dimensional measure.
    #[arg(long)]
    pub measure_zero: bool,
}

impl Default for ScenarioArgs {
    fn default() -> Self {
        ScenarioArgs {
            gamma: Rational::from_integer(1.into()),
            d: Rational::from_integer(0.into()),
            scenario: KindArg::Slice,
            measure_zero: false,
        }
    }
}

impl ScenarioArgs {
    fn push_args(&self, out: &mut Vec<String>) {
        out.extend([
            "--gamma".into(),
            format_rational(&self.gamma),
            "--d".into(),
            format_rational(&self.d),
        ]);
        out.extend(["--scenario".into(), self.scenario.name().into()]);
        if self.measure_zero {
            out.push("--measure-zero".into());
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    Slice,
    General,
}

impl KindArg {
    fn name(self) -> &'static str {
        match self {
            KindArg::Slice => "slice",
            KindArg::General => "general",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Json,
    Csv,
    Svg,
}

impl FormatArg {
    pub fn name(self) -> &'static str {
        match self {
            FormatArg::Json => "json",
            FormatArg::Csv => "csv",
            FormatArg::Svg => "svg",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayoutArg {
    Nested,
    Disjoint,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeIArg {
    #[value(name = "in_space")]
    InSpace,
    #[value(name = "in_time")]
    InTime,
}

#[derive(Subcommand, Clone, Debug, PartialEq)]
pub enum Command {
    /// Verdict for the space L^q_t L^p_x.
    Check {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Space exponent p (`inf` allowed).
        #[arg(long, value_parser = exponent)]
        p: Exponent,
        /// Time exponent q (`inf` allowed).
        #[arg(long, value_parser = exponent)]
        q: Exponent,
    },
    /// Boundary of the guaranteed region.
    Region {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Samples per curved piece in CSV and SVG output.
        #[arg(long, default_value_t = 256)]
        arc_samples: usize,
    },
    /// SVG of a named figure (fig1..fig11 or an alias), or `custom` with the
    /// scenario flags.
    Figure {
        name: String,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Thresholds in d where the fractional diagram changes shape.
    Bifurcations {
        /// Dissipation power, strictly between 0 and 1.
        #[arg(long, value_parser = rational)]
        gamma: Rational,
    },
    /// Optimal α and the crossover x₀.
    Alpha {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Print only the crossover abscissa x₀.
        #[arg(long)]
        x0: bool,
        /// Also report the feasible α set at this space exponent.
        #[arg(long, value_parser = exponent, requires = "q")]
        p: Option<Exponent>,
        #[arg(long, value_parser = exponent, requires = "p")]
        q: Option<Exponent>,
    },
    /// Dyadic sweep of the convolution integral against H^s.
    LemmaConv {
        #[arg(long, value_parser = rational)]
        d: Rational,
        #[arg(long, value_parser = rational)]
        alpha: Rational,
        #[arg(long, value_parser = rational)]
        sigma: Rational,
        #[arg(long, value_parser = rational)]
        s: Rational,
        #[arg(long, default_value_t = 12)]
        j_max: u32,
        /// json or csv.
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Disjoint doubled intervals with α = 2 at the critical exponent.
    Sharpness {
        #[arg(long, value_parser = rational)]
        d: Rational,
        #[arg(long, value_parser = rational)]
        sigma: Rational,
        #[arg(long, value_parser = rational)]
        s: Rational,
        #[arg(long, default_value_t = 12)]
        j_max: u32,
        /// json or csv.
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Sampled cutoff for a dyadic cover, or a single cylinder with --radius.
    Cutoff {
        #[arg(long, default_value = "0", value_parser = rational)]
        d: Rational,
        #[arg(long, default_value = "2", value_parser = rational)]
        alpha: Rational,
        #[arg(long, default_value_t = 2)]
        generations: u32,
        #[arg(long, value_enum, default_value_t = LayoutArg::Nested)]
        layout: LayoutArg,
        /// Single cylinder of this radius instead of a dyadic cover.
        #[arg(long, value_parser = rational)]
        radius: Option<Rational>,
        /// Spatial dimension of the sampling grid.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Samples per spatial axis.
        #[arg(long, default_value_t = 257)]
        n: usize,
        /// Samples in time.
        #[arg(long, default_value_t = 257)]
        nt: usize,
        /// Integrability exponent for the derivative bounds.
        #[arg(long, default_value_t = 2.0)]
        a: f64,
    },
    /// Commutator [Λ^{2γ}, φ]u against the product bound.
    Commutator {
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Exponent p of u; q = 2p/(p-2). `inf` allowed.
        #[arg(long, default_value = "4", value_parser = extended_f64)]
        p: f64,
        /// Use u = cos(kx), φ = cos(mx) instead of random fields.
        #[arg(long, value_parser = mode_pair)]
        modes: Option<(u32, u32)>,
        #[arg(long, default_value_t = 4096)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 20260101)]
        seed: u64,
        /// Run the refinement check over a random corpus of this many pairs.
        #[arg(long)]
        corpus: Option<usize>,
    },
    /// ‖Λ^{2γ}φ‖_a against ‖φ‖_a^{1-2γ}‖∇φ‖_a^{2γ}.
    InterpBound {
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Lebesgue exponent a (`inf` allowed).
        #[arg(long, default_value = "2", value_parser = extended_f64)]
        a: f64,
        /// Use φ = cos(kx) instead of a random field.
        #[arg(long)]
        mode: Option<u32>,
        /// Use a periodic cutoff of this radius instead of a random field.
        #[arg(long)]
        cutoff_radius: Option<f64>,
        #[arg(long, default_value_t = 4096)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 20260101)]
        seed: u64,
        /// Run the refinement check over a random corpus of this many fields.
        #[arg(long)]
        corpus: Option<usize>,
    },
    /// Closed form against the brute-force α sweep on a grid.
    Oracle {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value_t = 101)]
        resolution: usize,
    },
    /// Verdict under a Type-I blowup assumption.
    TypeI {
        #[arg(long, value_enum)]
        kind: TypeIArg,
        #[arg(long, default_value = "0", value_parser = rational)]
        d: Rational,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Region { .. } => "region",
            Command::Figure { .. } => "figure",
            Command::Bifurcations { .. } => "bifurcations",
            Command::Alpha { .. } => "alpha",
            Command::LemmaConv { .. } => "lemma-conv",
            Command::Sharpness { .. } => "sharpness",
            Command::Cutoff { .. } => "cutoff",
            Command::Commutator { .. } => "commutator",
            Command::InterpBound { .. } => "interp-bound",
            Command::Oracle { .. } => "oracle",
            Command::TypeI { .. } => "type-i",
        }
    }
}

fn flag(out: &mut Vec<String>, name: &str, value: impl Into<String>) {
    out.push(format!("--{name}"));
    out.push(value.into());
}

impl RunConfig {
    /// Arguments (without the program name) that parse back to `self`.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = vec![self.command.name().to_string()];
        let r = format_rational;
        match &self.command {
            Command::Check { scenario, p, q } => {
                scenario.push_args(&mut a);
                flag(&mut a, "p", p.to_string());
                flag(&mut a, "q", q.to_string());
            }
            Command::Region {
                scenario,
                format,
                arc_samples,
            } => {
                scenario.push_args(&mut a);
                flag(&mut a, "format", format.name());
                flag(&mut a, "arc-samples", arc_samples.to_string());
            }
            Command::Figure { name, scenario } => {
                a.push(name.clone());
                scenario.push_args(&mut a);
            }
            Command::Bifurcations { gamma } => flag(&mut a, "gamma", r(gamma)),
            Command::Alpha { scenario, x0, p, q } => {
                scenario.push_args(&mut a);
                if *x0 {
                    a.push("--x0".into());
                }
                if let (Some(p), Some(q)) = (p, q) {
                    flag(&mut a, "p", p.to_string());
                    flag(&mut a, "q", q.to_string());
                }
            }
            Command::LemmaConv {
                d,
                alpha,
                sigma,
                s,
                j_max,
                format,
            } => {
                flag(&mut a, "d", r(d));
                flag(&mut a, "alpha", r(alpha));
                flag(&mut a, "sigma", r(sigma));
                flag(&mut a, "s", r(s));
                flag(&mut a, "j-max", j_max.to_string());
                flag(&mut a, "format", format.name());
            }
            Command::Sharpness {
                d,
                sigma,
                s,
                j_max,
                format,
            } => {
                flag(&mut a, "d", r(d));
                flag(&mut a, "sigma", r(sigma));
                flag(&mut a, "s", r(s));
                flag(&mut a, "j-max", j_max.to_string());
                flag(&mut a, "format", format.name());
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
                a: exp,
            } => {
                flag(&mut a, "d", r(d));
                flag(&mut a, "alpha", r(alpha));
                flag(&mut a, "generations", generations.to_string());
                flag(
                    &mut a,
                    "layout",
                    if *layout == LayoutArg::Nested {
                        "nested"
                    } else {
                        "disjoint"
                    },
                );
                if let Some(rad) = radius {
                    flag(&mut a, "radius", r(rad));
                }
                flag(&mut a, "dim", dim.to_string());
                flag(&mut a, "n", n.to_string());
                flag(&mut a, "nt", nt.to_string());
                flag(&mut a, "a", fmt_f64(*exp));
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
                flag(&mut a, "gamma", fmt_f64(*gamma));
                flag(&mut a, "p", fmt_f64(*p));
                if let Some((k, m)) = modes {
                    flag(&mut a, "modes", format!("{k},{m}"));
                }
                flag(&mut a, "n", n.to_string());
                flag(&mut a, "dim", dim.to_string());
                flag(&mut a, "seed", seed.to_string());
                if let Some(c) = corpus {
                    flag(&mut a, "corpus", c.to_string());
                }
            }
            Command::InterpBound {
                gamma,
                a: exp,
                mode,
                cutoff_radius,
                n,
                dim,
                seed,
                corpus,
            } => {
                flag(&mut a, "gamma", fmt_f64(*gamma));
                flag(&mut a, "a", fmt_f64(*exp));
                if let Some(k) = mode {
                    flag(&mut a, "mode", k.to_string());
                }
                if let Some(c) = cutoff_radius {
                    flag(&mut a, "cutoff-radius", fmt_f64(*c));
                }
                flag(&mut a, "n", n.to_string());
                flag(&mut a, "dim", dim.to_string());
                flag(&mut a, "seed", seed.to_string());
                if let Some(c) = corpus {
                    flag(&mut a, "corpus", c.to_string());
                }
            }
            Command::Oracle {
                scenario,
                resolution,
            } => {
                scenario.push_args(&mut a);
                flag(&mut a, "resolution", resolution.to_string());
            }
            Command::TypeI { kind, d } => {
                flag(
                    &mut a,
                    "kind",
                    if *kind == TypeIArg::InSpace {
                        "in_space"
                    } else {
                        "in_time"
                    },
                );
                flag(&mut a, "d", r(d));
            }
        }
        if let Some(out) = &self.out {
            flag(&mut a, "out", out.to_string_lossy().into_owned());
        }
        a
    }
}
