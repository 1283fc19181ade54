use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use mitd::ball::DEFAULT_PRECISION_CAP;
use mitd::bounds::{cover_max_gap, default_grid, envelope, to_csv, CoverSystem};
use mitd::cheb::{certify_attainment_with, RootValueCheck};
use mitd::io::{read_db, write_db, ProductFile};
use mitd::padic::{attainment_obstruction, identify_maximal_critical, AttainmentStatus};
use mitd::robinson::search;
use mitd::roots::{root_span, RatInterval};
use mitd::scalar::{format_rational, parse_rational, rational_to_f64};
use mitd::special::{
    exceeds_one_minus_sqrt, farey_conjecture_check, farey_max_obstruction, gamma_lower, FareyCase, FareyCheck,
    FareyInterval,
};
use mitd::{fixtures, Error, ObstructionValue, Poly};

const EXIT_INPUT: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;
const EXIT_PRECISION: u8 = 4;

#[derive(Parser)]
#[command(name = "mitd", version, about = "Bounds and certificates for the monic integer transfinite diameter")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IntervalArg {
    /// Interval endpoints as `p/q` or exact decimals.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
    interval: Vec<String>,
}

impl IntervalArg {
    fn parse(&self) -> Result<RatInterval, Error> {
        RatInterval::parse(&self.interval[0], &self.interval[1])
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate obstruction polynomials with all roots in a box and value above t.
    Search {
        #[command(flatten)]
        interval: IntervalArg,
        /// Maximal degree.
        #[arg(long)]
        degree: usize,
        /// Largest leading coefficient (default 2^degree).
        #[arg(long)]
        lead: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// JSONL output (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify that a product attains the value of its obstruction polynomial.
    Verify {
        #[arg(long)]
        product: PathBuf,
        /// Precision cap in bits.
        #[arg(long, default_value_t = DEFAULT_PRECISION_CAP)]
        precision: u32,
    },
    /// Write the L-(t) / L+(t) envelope as CSV.
    Bounds {
        /// Extra obstruction records (JSONL).
        #[arg(long)]
        db: Vec<PathBuf>,
        /// Grid points (default: thresholds of the records plus k/100 on [1/2, 1]).
        #[arg(long)]
        t: Vec<String>,
        /// Points on the P_alpha curve.
        #[arg(long, default_value_t = 100)]
        alpha_steps: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximal obstruction of an interval without integers inside, and the Farey-interval proof.
    Farey {
        #[command(flatten)]
        interval: IntervalArg,
    },
    /// Valuation test for attaining the obstruction value of a nonmonic polynomial.
    Padic {
        #[arg(long)]
        poly: String,
    },
    /// Lower bounds for gamma(b) as CSV, using m = b.
    Gamma {
        /// Values of b (default k/100 for k = 1..10).
        #[arg(long)]
        b: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-certify the shipped tables.
    Tables,
}

fn rational(text: &str) -> Result<BigRational, Error> {
    parse_rational(text).ok_or_else(|| Error::Parse { pos: 0, msg: format!("bad rational '{text}'") })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Undecided { .. } | Error::StrictMaxUndecided { .. } => EXIT_PRECISION,
        Error::ValueNotAboveT
        | Error::NotCertified(_)
        | Error::ResultantFailed { .. }
        | Error::NotCritical
        | Error::SupExceedsM { .. }
        | Error::ConjugateCheckFailed(_)
        | Error::NoCandidate
        | Error::MultipleCandidates(_)
        | Error::Infeasible
        | Error::UnboundedBelow
        | Error::NoRoot => EXIT_NEGATIVE,
        _ => EXIT_INPUT,
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Search { interval, degree, lead, t, out } => {
            let i0 = interval.parse()?;
            let t = rational(&t)?;
            let records = search(degree, lead, &i0, &t);
            let mut buf = Vec::new();
            write_db(&mut buf, &records)?;
            emit(&out, &String::from_utf8(buf).expect("utf-8 records"))?;
            eprintln!("{} records", records.len());
            Ok(0)
        }
        Command::Verify { product, precision } => {
            let file = ProductFile::read(&product)?;
            let c = certify_attainment_with(&file.product, &file.interval, &file.obstruction, precision)?;
            println!("interval = {}", c.interval);
            println!("obstruction = {}", c.obstruction);
            if let RootValueCheck::ConjugateUnit { signs, bits } = &c.certificate.root_values {
                println!("conjugate signs = {signs:?} at {bits} bits");
            }
            println!("sup_value = {} certified", c.sup_value);
            Ok(0)
        }
        Command::Bounds { db, t, alpha_steps, out } => {
            let mut data = fixtures::shipped_envelope_data(alpha_steps)?;
            for path in &db {
                data.records.extend(read_db(path)?);
            }
            let grid = if t.is_empty() {
                let values: Vec<ObstructionValue> = data.records.iter().map(|r| r.value.clone()).collect();
                default_grid(&values)
            } else {
                t.iter().map(|s| rational(s)).collect::<Result<_, _>>()?
            };
            emit(&out, &to_csv(&envelope(&grid, &data)))?;
            Ok(0)
        }
        Command::Farey { interval } => farey(&interval.parse()?),
        Command::Padic { poly } => {
            let q = Poly::parse(&poly)?;
            let v = attainment_obstruction(&q)?;
            if v.gcd_failure {
                println!("gcd(a_0, a_d) != 1");
            }
            for f in &v.failures {
                let actual = f.actual.map_or("inf".to_string(), |a| a.to_string());
                println!("p = {}: v_p(a_{}) = {} < {}", f.prime, f.index, actual, format_rational(&f.required));
            }
            match v.status {
                AttainmentStatus::Impossible => {
                    println!("{q}: impossible");
                    Ok(EXIT_NEGATIVE)
                }
                AttainmentStatus::Consistent => {
                    println!("{q}: consistent");
                    Ok(0)
                }
            }
        }
        Command::Gamma { b, out } => {
            let bs: Vec<BigRational> = if b.is_empty() {
                (1..=10).map(|k| BigRational::new(BigInt::from(k), BigInt::from(100))).collect()
            } else {
                b.iter().map(|s| rational(s)).collect::<Result<_, _>>()?
            };
            let mut csv = String::from("b,gamma_lo,gamma_hi,above_1_minus_sqrt_b\n");
            for b in &bs {
                match gamma_lower(b, b) {
                    Ok(g) => {
                        let lo = g.lower_rational();
                        csv.push_str(&format!(
                            "{},{},{},{}\n",
                            format_rational(b),
                            mitd::io::format_directed(&lo, 10, false),
                            mitd::io::format_directed(&g.upper_rational(), 10, true),
                            exceeds_one_minus_sqrt(&lo, b)
                        ));
                    }
                    Err(Error::NoRoot) => csv.push_str(&format!("{},,,\n", format_rational(b))),
                    Err(e) => return Err(e),
                }
            }
            emit(&out, &csv)?;
            Ok(0)
        }
        Command::Tables => tables(),
    }
}

/// The mirror image `x -> 1 - x` of a Farey interval.
fn mirror(f: &FareyInterval) -> FareyInterval {
    FareyInterval::new(&f.c2 - &f.b2, f.c2.clone(), &f.c1 - &f.b1, f.c1.clone()).expect("mirror is Farey")
}

/// Proof of `t_M(F) = 1/c` from the hypothesis check on `F` or its mirror.
fn farey_proof(f: &FareyInterval, c: &BigInt) -> Option<(FareyInterval, Poly<BigInt>)> {
    let two = BigInt::from(2);
    let mut tries = Vec::new();
    if f.c1 >= two && &f.c1 == c {
        tries.push(f.clone());
    }
    if f.c2 >= two && &f.c2 == c {
        tries.push(mirror(f));
    }
    tries.into_iter().find_map(|g| match farey_conjecture_check(&g) {
        Ok(FareyCheck::Proved { witness, .. }) => Some((g, witness)),
        _ => None,
    })
}

fn farey(i: &RatInterval) -> Result<u8, Error> {
    let v = farey_max_obstruction(i)?;
    let c = v.polynomial.lead();
    let tag = match v.case_tag {
        FareyCase::LeftEndpoint => "left-endpoint",
        FareyCase::RightEndpoint => "right-endpoint",
        FareyCase::FullFarey => "full-farey",
        FareyCase::Mediant => "mediant",
    };
    println!("minimal Farey interval = {}", v.farey);
    println!("maximal obstruction = {} from {} ({tag})", v.value, v.polynomial);
    // I lies in the Farey interval, so t_M(I) <= t_M(F) = 1/c matches the obstruction
    let proof = if v.case_tag == FareyCase::Mediant { None } else { farey_proof(&v.farey, &c) };
    match proof {
        Some((g, witness)) => {
            println!("witness = {witness} on {g}");
            println!("t_M({i}) = {} proved", v.value);
        }
        None => println!("t_M({i}) = {} conjectured", v.value),
    }
    Ok(0)
}

fn check(ok: bool, label: &str, detail: String, failures: &mut usize) {
    println!("{} {label}: {detail}", if ok { "ok  " } else { "FAIL" });
    if !ok {
        *failures += 1;
    }
}

fn tables() -> Result<u8, Error> {
    let mut failures = 0;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000));

    let start = Instant::now();
    let recs = fixtures::table1_48_records()?;
    let above = recs.iter().all(|r| r.value.exceeds(&half));
    let cover = CoverSystem::from_records(&recs)?;
    let gap = cover_max_gap(&cover, &half)?;
    check(
        above,
        "table 1.48",
        format!(
            "{} records above 1/2, L+(1/2) <= {:.10} ({:?})",
            recs.len(),
            rational_to_f64(&gap.value),
            start.elapsed()
        ),
        &mut failures,
    );

    let start = Instant::now();
    let products = fixtures::table2_certified()?;
    let ok = products.iter().all(|p| p.sup_value.as_rational() == Some(half.clone()));
    check(ok, "table 2", format!("{} products certify 1/2 ({:?})", products.len(), start.elapsed()), &mut failures);

    let start = Instant::now();
    let mut bad = 0;
    for row in fixtures::table3() {
        let s = root_span(&row.poly, 64)?;
        if row.span < s.lower_rational() - &tol || row.span > s.upper_rational() + &tol {
            bad += 1;
        }
    }
    check(
        bad == 0,
        "table 3",
        format!("{} spans within 1e-6 ({:?})", fixtures::table3().len() - bad, start.elapsed()),
        &mut failures,
    );

    let start = Instant::now();
    let t4 = fixtures::table4();
    let desk = fixtures::desk_db()?;
    let t = rational("0.5773502691")?;
    let m = cover_max_gap(&CoverSystem::from_records(&desk)?, &t)?;
    let row30 = t4.iter().find(|r| r.row == 30).expect("row 30");
    let diff = (rational_to_f64(&m.value) - rational_to_f64(&row30.span)).abs();
    check(
        diff < 1e-5,
        "table 4",
        format!(
            "{} reference rows; desk database reproduces row 30: {:.6} vs {:.5} ({:?})",
            t4.len(),
            rational_to_f64(&m.value),
            rational_to_f64(&row30.span),
            start.elapsed()
        ),
        &mut failures,
    );

    let start = Instant::now();
    let mut values = Vec::new();
    for p in fixtures::table5()? {
        let c = certify_attainment_with(&p.product, &p.interval, &p.obstruction, DEFAULT_PRECISION_CAP)?;
        values.push(format!("{} on {}", c.sup_value, c.interval));
    }
    check(true, "table 5", format!("{} ({:?})", values.join(", "), start.elapsed()), &mut failures);

    let start = Instant::now();
    let big = fixtures::degree_670320()?;
    let c = certify_attainment_with(&big.product, &big.interval, &big.obstruction, DEFAULT_PRECISION_CAP)?;
    check(true, "degree 670320", format!("{} on {} ({:?})", c.sup_value, c.interval, start.elapsed()), &mut failures);

    let start = Instant::now();
    let r = fixtures::witness_r()?;
    let rec = identify_maximal_critical(&r.product, &r.interval)?;
    let impossible = !attainment_obstruction(&rec.poly)?.is_consistent();
    check(
        rec.poly == r.obstruction && impossible,
        "witness R",
        format!("unique maximal critical {} ({}), not attained ({:?})", rec.poly, rec.value, start.elapsed()),
        &mut failures,
    );

    Ok(if failures == 0 { 0 } else { EXIT_NEGATIVE })
}
