use clap::{Args, Parser, Subcommand};
use h90::config::Config;
use h90::lattice::NfContext;
use h90::mackey::cmf_from_json;
use h90::nf::NFElement;
use h90::prime_split::split_type;
use h90::ranstat::{
    exhaustive_full_rank_frequency, expected_bad_primes, monte_carlo_rank, rank_full_lower_bound,
    rank_full_probability,
};
use h90::rayclass_q::{criterion_over_q, ray_class_group_q, RamData, RayClassInputQ};
use h90::scan::{decimal, ratio, scan_family, scan_primes, FamilySpec, ScanUnits};
use h90::sunits::{field_id, load_family_fixture, load_fixture};
use h90::tau::{tau_verdict, GensSource, TauStatus};
use h90::{Error, NumberField};
use num_bigint::BigInt;
use serde_json::{json, Value};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "h90",
    version,
    about = "S-unit τ maps, prime scans, ray class groups over Q and Mackey cohomology"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// configuration file (key = value lines)
    #[arg(long)]
    config: Option<PathBuf>,
    /// override one configuration key, e.g. --set hmax=4
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// worker threads (default: one per core)
    #[arg(long)]
    threads: Option<usize>,
}

impl ConfigArgs {
    fn load(&self) -> Result<Config, Error> {
        let mut c = match &self.config {
            Some(p) => Config::parse(&std::fs::read_to_string(p)?)?,
            None => Config::default(),
        };
        for kv in &self.overrides {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("--set expects KEY=VALUE, got {kv:?}")))?;
            c.set(k, v)?;
        }
        if let Some(t) = self.threads {
            c.threads = Some(t);
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Args)]
struct FieldArgs {
    /// defining polynomial, ascending integer coefficients: -2,0,1 is x² − 2
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// field fixture with units (and optionally an integral basis)
    #[arg(long)]
    fixture: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide surjectivity of τ for one field and prime
    Tau {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        p: u64,
        /// exit with status 3 when the verdict is inconclusive
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Scan primes up to a bound for a fixed field
    ScanPrimes {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        xmax: u64,
        /// τ verdicts from the internal unit search when no fixture is given
        #[arg(long)]
        search_units: bool,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_json: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Scan λ over a one-parameter family g(X, λ)
    ScanFamily {
        /// coefficients of X^0, X^1, … separated by ';', each a list of
        /// coefficients in t: "-1;-3,1;0,1;1" is X³ + tX² + (t−3)X − 1
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        #[arg(long)]
        p: u64,
        /// family fixture with per-λ units
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_json: Option<PathBuf>,
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Generalized ray class group of Q
    RayclassQ {
        #[arg(long)]
        m0: u64,
        /// include the real place in the modulus
        #[arg(long)]
        infty: bool,
        /// primes of S, comma separated
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Ray-class criterion for the S-class Hilbert 90 property over Q
    CriterionQ {
        /// finite part of the conductor
        #[arg(long)]
        f0: u64,
        /// conductor contains the real place
        #[arg(long)]
        infty: bool,
        /// ramification data prime:e:f, comma separated
        #[arg(long, value_delimiter = ',')]
        ram: Vec<String>,
        #[arg(long)]
        p: u64,
        /// a single v0; all finite primes of S are tried by default
        #[arg(long)]
        v0: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Section cohomology of a cyclic cohomological Mackey functor (JSON in)
    Mackey {
        /// JSON file, or - for standard input
        #[arg(long, default_value = "-")]
        input: String,
        /// restrict to the p-primary part
        #[arg(long)]
        p: Option<u64>,
    },
    /// Rank statistics of random matrices over F_p
    Rankstat {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// exact probability of full row rank
        #[arg(long)]
        exact: bool,
        /// frequency by enumerating all matrices
        #[arg(long)]
        enumerate: bool,
        /// Monte Carlo estimate with this many trials
        #[arg(long)]
        mc: Option<u64>,
        /// expected number of rank-deficient primes up to this bound
        #[arg(long)]
        expect: Option<u64>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Validate a field or family fixture
    CheckFixture {
        file: PathBuf,
        #[arg(long)]
        family: bool,
    },
}

fn parse_poly(s: &str) -> Result<Vec<BigInt>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Invalid(format!("bad coefficient {x:?}")))
        })
        .collect()
}

/// Field plus the context the τ code works in: the fixture order and units
/// when a fixture is given, otherwise the maximal order and no units.
fn load_field(
    f: &FieldArgs,
    cfg: &Config,
) -> Result<(NumberField, NfContext, Option<Vec<NFElement>>), Error> {
    match (&f.poly, &f.fixture) {
        (_, Some(path)) => {
            let fx = load_fixture(path)?;
            if let Some(p) = &f.poly {
                if parse_poly(p)? != fx.poly {
                    return Err(Error::Invalid(
                        "--poly does not match the fixture polynomial".into(),
                    ));
                }
            }
            let k = NumberField::with_cert_primes(&fx.poly, &cfg.cert_primes)?;
            let o = fx.order(&k)?;
            Ok((k.clone(), NfContext::new(k, o), Some(fx.units)))
        }
        (Some(p), None) => {
            let k = NumberField::with_cert_primes(&parse_poly(p)?, &cfg.cert_primes)?;
            Ok((k.clone(), NfContext::maximal(k, 1_000_000), None))
        }
        (None, None) => Err(Error::Invalid("give --poly or --fixture".into())),
    }
}

fn write_or_print(path: &Option<PathBuf>, text: &str, print: bool) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None if print => print!("{text}"),
        None => {}
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Tau {
            field,
            p,
            strict,
            cfg,
        } => {
            let cfg = cfg.load()?;
            let (k, ctx, units) = load_field(&field, &cfg)?;
            let split = split_type(&k, p, Some(&ctx.o))?;
            let source = match &units {
                Some(u) => GensSource::Units(u),
                None => GensSource::Search {
                    effort: cfg.unit_effort,
                },
            };
            let v = tau_verdict(&ctx, &split, source, &cfg.bounds(), cfg.candidates)?;
            let out = json!({
                "field": k.render(),
                "field_id": field_id(&k),
                "p": p,
                "split": split.render(),
                "status": v.status.as_str(),
                "rank": v.rank,
                "target": v.target_dim,
                "choice": v.choice,
                "h_p": v.h_p,
                "units": if units.is_some() { "fixture" } else { "search" },
                "config": cfg.render(),
            });
            print!("{}", pretty(&out));
            Ok(if strict && v.status == TauStatus::InconclusiveData {
                EXIT_INCONCLUSIVE
            } else {
                0
            })
        }
        Cmd::ScanPrimes {
            field,
            xmax,
            search_units,
            out_csv,
            out_json,
            strict,
            cfg,
        } => {
            let cfg = cfg.load()?;
            let (k, ctx, units) = load_field(&field, &cfg)?;
            let mode = match units {
                Some(u) => ScanUnits::Fixture(ctx, u),
                None if search_units => ScanUnits::Search(ctx),
                None => ScanUnits::SplitOnly,
            };
            let rep = scan_primes(&k, xmax, &mode, &cfg);
            write_or_print(&out_csv, &rep.to_csv(), out_json.is_none())?;
            write_or_print(&out_json, &pretty(&rep.to_json()), false)?;
            Ok(if strict && rep.agg.inconclusive_count > 0 {
                EXIT_INCONCLUSIVE
            } else {
                0
            })
        }
        Cmd::ScanFamily {
            g,
            from,
            to,
            p,
            fixture,
            out_csv,
            out_json,
            strict,
            cfg,
        } => {
            let cfg = cfg.load()?;
            let spec = FamilySpec::new(FamilySpec::parse_g(&g)?, from, to)?;
            let fx = fixture.as_deref().map(load_family_fixture).transpose()?;
            let rep = scan_family(&spec, p, fx.as_ref(), &cfg);
            write_or_print(&out_csv, &rep.to_csv(), out_json.is_none())?;
            write_or_print(&out_json, &pretty(&rep.to_json()), false)?;
            Ok(if strict && rep.n_inconclusive > 0 {
                EXIT_INCONCLUSIVE
            } else {
                0
            })
        }
        Cmd::RayclassQ { m0, infty, s, json } => {
            let g = ray_class_group_q(&RayClassInputQ {
                m0,
                inf: infty,
                s: s.clone(),
            })?;
            if json {
                let inv: Vec<String> = g.invariants.iter().map(|d| d.to_string()).collect();
                print!(
                    "{}",
                    pretty(
                        &json!({"m0": m0, "infty": infty, "S": s, "invariants": inv, "order": g.order().to_string()})
                    )
                );
            } else {
                println!("{g}");
            }
            Ok(0)
        }
        Cmd::CriterionQ {
            f0,
            infty,
            ram,
            p,
            v0,
            json,
        } => {
            let ram: Vec<RamData> = ram.iter().map(|r| parse_ram(r)).collect::<Result<_, _>>()?;
            let choices: Vec<u64> = match v0 {
                Some(v) => vec![v],
                None => ram.iter().map(|r| r.prime).collect(),
            };
            let outcomes = choices
                .iter()
                .map(|&v| criterion_over_q(f0, infty, &ram, p, v))
                .collect::<Result<Vec<_>, _>>()?;
            let holds = outcomes.iter().any(|o| o.holds);
            if json {
                let per: Vec<Value> = outcomes
                    .iter()
                    .map(|o| {
                        json!({
                            "v0": o.v0,
                            "holds": o.holds,
                            "f_prime": o.f_prime,
                            "S_s": o.s_s,
                            "group": o.group.invariants.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                print!(
                    "{}",
                    pretty(&json!({"p": p, "holds": holds, "choices": per}))
                );
            } else {
                for o in &outcomes {
                    println!(
                        "v0={} f'={}{} group={} holds={}",
                        o.v0,
                        o.f_prime,
                        if infty { "·∞" } else { "" },
                        o.group,
                        o.holds
                    );
                }
                println!("{holds}");
            }
            Ok(0)
        }
        Cmd::Mackey { input, p } => {
            let text = if input == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(Path::new(&input))?
            };
            let v: Value =
                serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("JSON: {e}")))?;
            let mut cmf = cmf_from_json(&v)?;
            if let Some(p) = p {
                cmf = cmf.p_part(p);
            }
            let h = cmf.section_cohomology();
            let check = cmf.six_term_check();
            let mut out = h.to_json();
            out["six_term_exact"] = json!(check.ok());
            out["six_term_failures"] = json!(check.failures());
            print!("{}", pretty(&out));
            Ok(0)
        }
        Cmd::Rankstat {
            p,
            n,
            k,
            exact,
            enumerate,
            mc,
            expect,
            cfg,
        } => {
            let cfg = cfg.load()?;
            if !h90::arith::is_prime_u64(p) {
                return Err(Error::Invalid(format!("{p} is not prime")));
            }
            let mut any = false;
            if exact {
                println!("{}", ratio(&rank_full_probability(p, n, k)));
                any = true;
            }
            if enumerate {
                if (p as f64).powi((n * k) as i32) > 1e8 {
                    return Err(Error::Invalid("too many matrices to enumerate".into()));
                }
                println!("{}", ratio(&exhaustive_full_rank_frequency(p, n, k)));
                any = true;
            }
            if let Some(trials) = mc {
                let full = rayon::ThreadPoolBuilder::new()
                    .num_threads(cfg.threads.unwrap_or(0))
                    .build()
                    .map_err(|e| Error::Invalid(e.to_string()))?
                    .install(|| monte_carlo_rank(p, n, k, trials, cfg.mc_seed));
                println!("{full}/{trials}");
                any = true;
            }
            if let Some(x) = expect {
                println!(
                    "{}",
                    decimal(&expected_bad_primes(n, k, x), cfg.round_places)
                );
                any = true;
            }
            if !any {
                println!("{}", ratio(&rank_full_probability(p, n, k)));
                if let Some(lb) = rank_full_lower_bound(p, n, k) {
                    println!("lower bound {}", ratio(&lb));
                }
            }
            Ok(0)
        }
        Cmd::CheckFixture { file, family } => {
            if family {
                let fx = load_family_fixture(&file)?;
                let Some(g) = fx.family_g.clone() else {
                    println!(
                        "ok: {} records (no family.g, unit norms not checked)",
                        fx.records.len()
                    );
                    return Ok(0);
                };
                let (a, b) = fx.records.iter().fold((i64::MAX, i64::MIN), |(a, b), r| {
                    (a.min(r.lambda), b.max(r.lambda))
                });
                let spec = FamilySpec::new(g, a.min(b), b.max(a))?;
                for r in &fx.records {
                    let k = NumberField::new(&spec.substitute(r.lambda))?;
                    r.validate(&k)
                        .map_err(|e| Error::SchemaError(format!("lambda {}: {e}", r.lambda)))?;
                }
                println!("ok: {} records, all unit norms ±1", fx.records.len());
            } else {
                let fx = load_fixture(&file)?;
                println!(
                    "ok: {} units, class number {}, {}",
                    fx.units.len(),
                    fx.class_number
                        .map_or("unknown".to_string(), |h| h.to_string()),
                    fx.provenance
                );
            }
            Ok(0)
        }
    }
}

fn parse_ram(s: &str) -> Result<RamData, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| {
        x.trim()
            .parse::<u64>()
            .map_err(|_| Error::Invalid(format!("bad ramification entry {s:?}")))
    };
    match parts.as_slice() {
        [q, e, f] => Ok(RamData {
            prime: num(q)?,
            e: num(e)?,
            f: num(f)?,
        }),
        _ => Err(Error::Invalid(format!(
            "ramification entries are prime:e:f, got {s:?}"
        ))),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
