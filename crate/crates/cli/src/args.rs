//! Command-line arguments and their translation into a [`RunSpec`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use powerset_core::realcore::exponent::parse_rational;
use powerset_core::realcore::{DigitSequence, Exponent};
use sha2::{Digest, Sha256};

use crate::spec::{OutputFormat, RunSpec};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "powerset",
    version,
    about = "Certified additive combinatorics of c-th powers"
)]
pub struct Cli {
    /// Maximum working precision in bits.
    #[arg(long, global = true, default_value_t = 4096)]
    pub precision: u32,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Result cache directory; `POWERSET_CACHE_DIR` takes precedence.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Skip the cache even when a directory is configured.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Exponent: `a/q`, `sqrt2`, `pi/k`, `plastic`, `ball:<v>+-<r>`, `alglog:...`, `digits:...`.
    #[arg(long)]
    pub c: String,
    #[arg(long = "N")]
    pub n: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolutionFamily {
    Sporadic,
    ThreeAp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundKind {
    Psi,
    BakerWustholz,
    C0,
    RationalThreshold,
    AlphaLower,
    PrimeCorollary,
    Feldman,
    CorollaryChain,
    PrimePi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Variant {
    Full,
    ZeroSum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExpsumMode {
    D,
    Profile,
    Parseval,
    FourthMoment,
    LargeValues,
    Window,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Additive energy E(c, N) with trivial and nontrivial counts.
    Energy(PowerArgs),
    /// Size of S + S.
    Sumset(PowerArgs),
    /// Exponent with a nontrivial solution in closed form.
    Sporadic {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = SolutionFamily::Sporadic)]
        family: SolutionFamily,
    },
    /// Exact nontrivial counts for c = a/q.
    Rational {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        q: u64,
        /// Comma-separated list of N.
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<u64>,
        /// Also compare with direct enumeration up to the largest N.
        #[arg(long)]
        brute_force: bool,
    },
    /// Solutions of x1^-n + x2^-n = x3^-n + x4^-n and their classification.
    Negative {
        #[arg(long)]
        n: u64,
        #[arg(long = "N")]
        big_n: u64,
    },
    /// sum over b <= N of (N/b)^alpha against its main term.
    PartialSum {
        #[arg(long)]
        alpha: String,
        #[arg(long = "N")]
        n: u64,
    },
    /// Evaluates one of the explicit bounds.
    Bounds(BoundArgs),
    /// Digit positions of a dissociating exponent, or one digit.
    Digits {
        /// `digits:<radix>:<rule>`
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 6)]
        count: usize,
        /// Answer the digit at this position instead.
        #[arg(long)]
        query: Option<String>,
    },
    /// Dissociativity of {x^c : x in set}, or multiplicative independence of the set.
    Dissociate {
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long, value_enum, default_value_t = Variant::Full)]
        variant: Variant,
        #[arg(long)]
        multiplicative: bool,
    },
    /// Nonvanishing of sum a_n x_n^c.
    VerifyForm {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        coeffs: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<u64>,
        #[arg(long)]
        c: String,
        /// Rational `a/q` for the decomposition diagnostics.
        #[arg(long)]
        approximant: Option<String>,
    },
    /// Exponential sums and the identities over S + S.
    Expsum(ExpsumArgs),
    /// Re-verifies a certificate file.
    RecheckCertificate { path: PathBuf },
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub kind: BoundKind,
    #[arg(long = "A")]
    pub big_a: Option<u64>,
    #[arg(long = "N")]
    pub n: Option<String>,
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<i64>,
    #[arg(long)]
    pub a_max: Option<u64>,
    /// Real parameter (decimal or fraction).
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long)]
    pub c3: Option<String>,
    #[arg(long)]
    pub c8: Option<String>,
}

#[derive(Debug, Args)]
pub struct ExpsumArgs {
    #[arg(long, value_enum)]
    pub mode: ExpsumMode,
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long = "N")]
    pub n: Option<u64>,
    /// Point t for `D(t)`.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<String>,
    /// Thresholds V for large values, comma-separated.
    #[arg(long = "V", value_delimiter = ',')]
    pub v: Vec<String>,
    /// Window centre: a rational or `diff:<x1>,<x2>`.
    #[arg(long, allow_negative_numbers = true)]
    pub y: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Counts for a Parseval check without an exponent.
    #[arg(long, value_delimiter = ',')]
    pub phi: Vec<u64>,
}

type Params = BTreeMap<String, String>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn exponent(s: &str) -> Result<String, CliError> {
    s.parse::<Exponent>()
        .map(|c| c.to_string())
        .map_err(|e| usage(format!("--c: {e}")))
}

fn rational(flag: &str, s: &str) -> Result<String, CliError> {
    let r = parse_rational(s).ok_or_else(|| usage(format!("--{flag}: not a number: `{s}`")))?;
    Ok(if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        r.to_string()
    })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn put(p: &mut Params, k: &str, v: impl ToString) {
    p.insert(k.to_string(), v.to_string());
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Energy(_) => "energy",
            Command::Sumset(_) => "sumset",
            Command::Sporadic { .. } => "sporadic",
            Command::Rational { .. } => "rational",
            Command::Negative { .. } => "negative",
            Command::PartialSum { .. } => "partial-sum",
            Command::Bounds(_) => "bounds",
            Command::Digits { .. } => "digits",
            Command::Dissociate { .. } => "dissociate",
            Command::VerifyForm { .. } => "verify-form",
            Command::Expsum(_) => "expsum",
            Command::RecheckCertificate { .. } => "recheck-certificate",
        }
    }

    /// Validated parameters in canonical string form.
    pub fn params(&self) -> Result<Params, CliError> {
        let mut p = Params::new();
        match self {
            Command::Energy(a) | Command::Sumset(a) => {
                put(&mut p, "c", exponent(&a.c)?);
                put(&mut p, "N", a.n);
            }
            Command::Sporadic { n, family } => {
                put(&mut p, "n", n);
                let f = match family {
                    SolutionFamily::Sporadic => "sporadic",
                    SolutionFamily::ThreeAp => "three-ap",
                };
                put(&mut p, "family", f);
            }
            Command::Rational { a, q, n, brute_force } => {
                put(&mut p, "a", a);
                put(&mut p, "q", q);
                put(&mut p, "N", join(n));
                put(&mut p, "brute_force", brute_force);
            }
            Command::Negative { n, big_n } => {
                put(&mut p, "n", n);
                put(&mut p, "N", big_n);
            }
            Command::PartialSum { alpha, n } => {
                put(&mut p, "alpha", rational("alpha", alpha)?);
                put(&mut p, "N", n);
            }
            Command::Bounds(b) => b.params(&mut p)?,
            Command::Digits { c, count, query } => {
                let seq: DigitSequence = c.parse().map_err(|e| usage(format!("--c: {e}")))?;
                put(&mut p, "c", seq);
                match query {
                    Some(q) => {
                        let pos: powerset_core::Integer = q
                            .parse()
                            .map_err(|_| usage(format!("--query: not an integer: `{q}`")))?;
                        if pos < 1 {
                            return Err(usage("--query: positions start at 1"));
                        }
                        put(&mut p, "query", pos);
                    }
                    None => put(&mut p, "count", count),
                }
            }
            Command::Dissociate {
                set,
                c,
                variant,
                multiplicative,
            } => {
                put(&mut p, "set", join(set));
                if *multiplicative {
                    if c.is_some() {
                        return Err(usage("--multiplicative takes no exponent"));
                    }
                    put(&mut p, "mode", "multiplicative");
                } else {
                    let c = c.as_deref().ok_or_else(|| usage("--c is required"))?;
                    put(&mut p, "c", exponent(c)?);
                    put(&mut p, "mode", "dissociated");
                    let v = match variant {
                        Variant::Full => "full",
                        Variant::ZeroSum => "zero-sum",
                    };
                    put(&mut p, "variant", v);
                }
            }
            Command::VerifyForm {
                coeffs,
                points,
                c,
                approximant,
            } => {
                if coeffs.len() != points.len() {
                    return Err(usage("--coeffs and --points need equal lengths"));
                }
                put(&mut p, "coeffs", join(coeffs));
                put(&mut p, "points", join(points));
                put(&mut p, "c", exponent(c)?);
                if let Some(r) = approximant {
                    put(&mut p, "approximant", rational("approximant", r)?);
                }
            }
            Command::Expsum(e) => e.params(&mut p)?,
            Command::RecheckCertificate { path } => {
                let bytes = std::fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                put(&mut p, "path", path.display());
                put(&mut p, "sha256", hex::encode(Sha256::digest(&bytes)));
            }
        }
        Ok(p)
    }
}

impl BoundArgs {
    fn params(&self, p: &mut Params) -> Result<(), CliError> {
        let (kind, needed): (&str, &[&str]) = match self.kind {
            BoundKind::Psi => ("psi", &["A", "N", "s", "q", "c8"]),
            BoundKind::BakerWustholz => ("baker-wustholz", &["m", "N"]),
            BoundKind::C0 => ("c0", &["m", "N"]),
            BoundKind::RationalThreshold => ("rational-threshold", &["m", "N", "a", "q", "c"]),
            BoundKind::AlphaLower => ("alpha-lower", &["m", "N", "r", "q"]),
            BoundKind::PrimeCorollary => ("prime-corollary", &["c", "q", "N"]),
            BoundKind::Feldman => ("feldman", &["s", "q", "a-max", "N", "a", "c3"]),
            BoundKind::CorollaryChain => ("corollary-chain", &["a", "q", "N", "c"]),
            BoundKind::PrimePi => ("prime-pi", &["N"]),
        };
        put(p, "kind", kind);
        let given: [(&str, Option<String>); 11] = [
            ("A", self.big_a.map(|v| v.to_string())),
            ("N", self.n.as_deref().map(|s| rational("N", s)).transpose()?),
            ("s", self.s.map(|v| v.to_string())),
            ("q", self.q.map(|v| v.to_string())),
            ("m", self.m.map(|v| v.to_string())),
            ("a", self.a.map(|v| v.to_string())),
            ("a-max", self.a_max.map(|v| v.to_string())),
            ("c", self.c.as_deref().map(|s| rational("c", s)).transpose()?),
            ("r", self.r.as_deref().map(|s| rational("r", s)).transpose()?),
            ("c3", self.c3.as_deref().map(|s| rational("c3", s)).transpose()?),
            ("c8", self.c8.as_deref().map(|s| rational("c8", s)).transpose()?),
        ];
        for (name, value) in given {
            match (needed.contains(&name), value) {
                (true, Some(v)) => put(p, name, v),
                (true, None) => return Err(usage(format!("--kind {kind} needs --{name}"))),
                (false, Some(_)) => return Err(usage(format!("--kind {kind} takes no --{name}"))),
                (false, None) => {}
            }
        }
        Ok(())
    }
}

impl ExpsumArgs {
    fn params(&self, p: &mut Params) -> Result<(), CliError> {
        let mode = match self.mode {
            ExpsumMode::D => "d",
            ExpsumMode::Profile => "profile",
            ExpsumMode::Parseval => "parseval",
            ExpsumMode::FourthMoment => "fourth-moment",
            ExpsumMode::LargeValues => "large-values",
            ExpsumMode::Window => "window",
        };
        put(p, "mode", mode);
        if matches!(self.mode, ExpsumMode::Parseval) && !self.phi.is_empty() {
            if self.c.is_some() || self.n.is_some() {
                return Err(usage("--phi replaces --c and --N"));
            }
            put(p, "phi", join(&self.phi));
            return Ok(());
        }
        let c = self.c.as_deref().ok_or_else(|| usage("--c is required"))?;
        put(p, "c", exponent(c)?);
        put(p, "N", self.n.ok_or_else(|| usage("--N is required"))?);
        match self.mode {
            ExpsumMode::D => {
                let t = self.t.as_deref().ok_or_else(|| usage("--t is required"))?;
                put(p, "t", rational("t", t)?);
            }
            ExpsumMode::LargeValues => {
                if self.v.is_empty() {
                    return Err(usage("--V is required"));
                }
                let v: Vec<String> = self.v.iter().map(|s| rational("V", s)).collect::<Result<_, _>>()?;
                put(p, "V", v.join(","));
            }
            ExpsumMode::Window => {
                let y = self.y.as_deref().ok_or_else(|| usage("--y is required"))?;
                let target: powerset_core::expsum::WindowTarget = y.parse().map_err(|e| usage(format!("--y: {e}")))?;
                put(p, "y", target);
                if let Some(d) = &self.delta {
                    put(p, "delta", rational("delta", d)?);
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl Cli {
    /// The run this command line asks for. The environment variable
    /// `POWERSET_CACHE_DIR`, when set, overrides `--cache-dir`.
    pub fn to_spec(&self) -> Result<RunSpec, CliError> {
        if self.precision < 32 {
            return Err(usage("--precision must be at least 32"));
        }
        let threads = match self.threads {
            Some(0) => return Err(usage("--threads must be positive")),
            Some(t) => t,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let cache_dir = if self.no_cache {
            None
        } else {
            std::env::var_os(crate::CACHE_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
                .or_else(|| self.cache_dir.clone())
        };
        Ok(RunSpec {
            subcommand: self.command.name().to_string(),
            params: self.command.params()?,
            precision: self.precision,
            threads,
            output: self.output,
            cache_dir,
        })
    }
}
