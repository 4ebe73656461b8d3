use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use feketelab::equidist::{builtin, equidist_sweep};
use feketelab::expr::parse_map;
use feketelab::fekete::{EnergyReport, Fekete};
use feketelab::nonarch::{gauss_green, RationalLift};
use feketelab::pullback::{pullback, DEFAULT_BUDGET};
use feketelab::quadrature::QuadratureRule;
use feketelab::{Error, HomLift, ProjPoint};

mod selftest;

const HEADER: &str = "# feketelab v1";

#[derive(Parser)]
#[command(name = "feketelab", version, about = "Fekete energies, Green functions and p-adic kernels of rational maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Energy report for k = 1..=kmax.
    Energy {
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value = "csv")]
        out: OutFormat,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Sandwich bounds with margins.
    Bounds {
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Equidistribution error, bound and inferred constant.
    Equidist {
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: String,
        /// One of re, im, height, bump, radial.
        #[arg(long)]
        phi: String,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = 128)]
        quad: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Atoms of the k-th pullback.
    Pullback {
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dump: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Energy and proximity over an equal-area grid of initial points.
    Scan {
        #[arg(long)]
        map: String,
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Exact p-adic report for a lift given as JSON (text or file).
    Nonarch {
        #[arg(long)]
        lift: String,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        kmax: usize,
    },
    /// Closed-form oracle suite.
    Selftest,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } | Error::Degenerate(_) => 2,
        Error::Budget(_) => 4,
        _ => 3,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid-input",
        Error::Parse { .. } => "parse",
        Error::Degenerate(_) => "degenerate",
        Error::Budget(_) => "budget",
        Error::NonConvergence { .. } => "nonconvergence",
        Error::Domain(_) => "domain",
        Error::Consistency(_) => "consistency",
    }
}

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

fn point_str(p: &ProjPoint) -> String {
    match p.affine() {
        Some(z) if !p.is_infinity() => format!("{},{}", f(z.re), f(z.im)),
        _ => "inf,inf".to_string(),
    }
}

fn parse_point(s: &str) -> Result<ProjPoint, Error> {
    s.parse()
}

fn check_k(k: usize) -> Result<(), Error> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    Ok(())
}

fn energy_csv(reports: &[EnergyReport]) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(
        s,
        "k,a_re,a_im,energy_direct,energy_cz,route_diff,eta,D,proximity_max,proximity_sum,lower_bound,upper_bound,C_f_est,C_fa,r1,r2,r3,cf_heuristic,cz_low_confidence,at_critical_value,bounds_hold"
    )
    .unwrap();
    for r in reports {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            point_str(&r.a),
            f(r.energy_direct),
            f(r.energy_cz),
            f(r.route_diff),
            r.eta_seq.last().unwrap(),
            r.d_seq.last().unwrap(),
            f(r.proximity_max),
            f(r.proximity_sum),
            f(r.lower_bound),
            f(r.upper_bound),
            f(r.c_f_est),
            f(r.c_fa),
            f(r.rate_bundle.r1),
            f(r.rate_bundle.r2),
            f(r.rate_bundle.r3),
            r.cf_heuristic,
            r.cz_low_confidence,
            r.at_critical_value,
            r.bounds_hold
        )
        .unwrap();
    }
    s
}

fn bounds_csv(reports: &[EnergyReport]) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(s, "k,lower_bound,energy,upper_bound,margin_lower,margin_upper,C_f_est,C_fa,critical_hits,cf_heuristic,bounds_hold").unwrap();
    for r in reports {
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            f(r.lower_bound),
            f(r.energy_direct),
            f(r.upper_bound),
            f(r.margin_lower),
            f(r.margin_upper),
            f(r.c_f_est),
            f(r.c_fa),
            r.critical_hits,
            r.cf_heuristic,
            r.bounds_hold
        )
        .unwrap();
    }
    s
}

fn warn_all(reports: &[EnergyReport]) {
    for r in reports {
        for w in &r.warnings {
            eprintln!("warning: k={}: {w}", r.k);
        }
    }
}

fn load_lift(text: &str) -> Result<HomLift, Error> {
    let body = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        std::fs::read_to_string(text).map_err(|e| Error::InvalidInput(format!("cannot read {text}: {e}")))?
    };
    HomLift::from_json(&body)
}

/// `n` equal-height bands in `x_3`, `2n` equal sectors each; cell centers.
fn equal_area_grid(n: usize) -> Vec<(usize, usize, ProjPoint)> {
    let mut out = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        let x3 = -1.0 + (2 * i + 1) as f64 / n as f64;
        let s = (1.0 - x3 * x3).sqrt();
        for j in 0..2 * n {
            let phi = std::f64::consts::PI * (2 * j + 1) as f64 / (2 * n) as f64;
            out.push((i, j, ProjPoint::from_sphere([s * phi.cos(), s * phi.sin(), x3])));
        }
    }
    out
}

fn run(cmd: Command) -> Result<(String, bool), Error> {
    match cmd {
        Command::Energy { map, point, kmax, out, budget } => {
            check_k(kmax)?;
            let fk = Fekete::new(parse_map(&map)?)?;
            let reports = fk.sweep(&parse_point(&point)?, kmax, budget)?;
            warn_all(&reports);
            let text = match out {
                OutFormat::Csv => energy_csv(&reports),
                OutFormat::Json => serde_json::to_string_pretty(&reports).map_err(|e| Error::Consistency(e.to_string()))? + "\n",
            };
            Ok((text, true))
        }
        Command::Bounds { map, point, kmax, budget } => {
            check_k(kmax)?;
            let fk = Fekete::new(parse_map(&map)?)?;
            let reports = fk.sweep(&parse_point(&point)?, kmax, budget)?;
            warn_all(&reports);
            for r in fk.cf_estimate().reasons.iter() {
                eprintln!("warning: C_f heuristic: {r}");
            }
            Ok((bounds_csv(&reports), true))
        }
        Command::Equidist { map, point, phi, kmax, quad, budget } => {
            check_k(kmax)?;
            let test_fn = builtin(&phi)?;
            let fk = Fekete::new(parse_map(&map)?)?;
            let a = parse_point(&point)?;
            let tower = feketelab::pullback::preimage_tower(fk.lift(), &a, kmax, budget)?;
            let reports = (1..=kmax).map(|k| fk.report_from_tower(&tower[..=k])).collect::<Result<Vec<_>, _>>()?;
            let rows = equidist_sweep(fk.green(), &tower, &reports, &test_fn, &QuadratureRule::new(quad, 2 * quad));
            let mut s = String::new();
            writeln!(s, "{HEADER}").unwrap();
            writeln!(s, "k,error,energy,bound,inferred_C,margin,quad_error").unwrap();
            for r in rows {
                writeln!(s, "{},{},{},{},{},{},{}", r.k, f(r.error), f(r.energy), f(r.bound), f(r.inferred_c), f(r.margin), f(r.quad_error)).unwrap();
            }
            Ok((s, true))
        }
        Command::Pullback { map, point, k, dump, budget } => {
            let lift = parse_map(&map)?;
            let nu = pullback(&lift, &parse_point(&point)?, k, budget)?;
            let mut atoms = String::new();
            writeln!(atoms, "{HEADER}").unwrap();
            writeln!(atoms, "re,im,is_infinity,weight").unwrap();
            for row in nu.to_csv_rows() {
                writeln!(atoms, "{row}").unwrap();
            }
            std::fs::write(&dump, atoms).map_err(|e| Error::InvalidInput(format!("cannot write {dump}: {e}")))?;
            let (eta, dsum) = nu.eta_and_d();
            for w in &nu.warnings {
                eprintln!("warning: {w}");
            }
            let mut s = String::new();
            writeln!(s, "{HEADER}").unwrap();
            writeln!(s, "k,atoms,mass,eta,D,residual_max,at_critical_value").unwrap();
            writeln!(s, "{},{},{},{},{},{},{}", k, nu.atoms.len(), nu.mass(), eta, dsum, f(nu.residual_max), nu.at_critical_value).unwrap();
            Ok((s, true))
        }
        Command::Scan { map, grid, k, budget } => {
            check_k(k)?;
            if grid == 0 {
                return Err(Error::InvalidInput("grid must be at least 1".into()));
            }
            let fk = Fekete::new(parse_map(&map)?)?;
            let mut s = String::new();
            writeln!(s, "{HEADER}").unwrap();
            writeln!(s, "band,sector,a_re,a_im,energy,proximity_max,bounds_hold").unwrap();
            for (i, j, a) in equal_area_grid(grid) {
                let r = fk.report(&a, k, budget)?;
                writeln!(s, "{},{},{},{},{},{}", i, j, point_str(&a), f(r.energy_direct), f(r.proximity_max), r.bounds_hold).unwrap();
            }
            Ok((s, true))
        }
        Command::Nonarch { lift, prime, kmax } => {
            let f = RationalLift::from_homlift(&load_lift(&lift)?)?;
            let r = gauss_green(&f, prime, kmax)?;
            let v = serde_json::json!({
                "p": prime,
                "VF_logp": r.vf,
                "gauss_green": r.sequence,
                "gauss_green_diff": r.differences,
                "phi_self": r.phi_self,
            });
            Ok((v.to_string() + "\n", true))
        }
        Command::Selftest => Ok(selftest::run()),
    }
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("FEKETELAB_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error[invalid-input]: FEKETELAB_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {}", kind(&e), e.to_string().replace('\n', " "));
            ExitCode::from(exit_code(&e))
        }
    }
}
