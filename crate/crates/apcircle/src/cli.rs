//! Command-line surface tying the modules together.
//!
//! Exit codes: 0 success, 1 failed verification or runtime error, 2 usage
//! error. All results go to stdout, logs to stderr; identical arguments and
//! seeds produce byte-identical output. Printed reals use the shortest
//! representation that re-parses to the exact value.

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds;
use crate::counting::{self, EtaMethod};
use crate::decomposition;
use crate::expsums::{self, HBoundMode, HSumQuery};
use crate::verify;
use crate::{arith, Error};

/// Default seed printed and used when a randomized subcommand gets none.
pub const DEFAULT_SEED: u64 = 2_718_281_828;

#[derive(Parser, Debug)]
#[command(
    name = "apcircle",
    about = "Lattice counts, exponential sums and remainder bounds for the circle problem in arithmetic progressions",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EtaMethodArg {
    Convolution,
    Brute,
    Multiplicative,
}

impl From<EtaMethodArg> for EtaMethod {
    fn from(m: EtaMethodArg) -> Self {
        match m {
            EtaMethodArg::Convolution => EtaMethod::Convolution,
            EtaMethodArg::Brute => EtaMethod::Brute,
            EtaMethodArg::Multiplicative => EtaMethod::Multiplicative,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EvalRoute {
    Direct,
    Closed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HRoute {
    Direct,
    Fast,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HBoundArg {
    Full,
    Simplified,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact lattice count S_{q,a}(x) with main term and remainder.
    Count {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: i64,
        /// Use the O(x) enumeration oracle instead of the fast counter.
        #[arg(long)]
        brute: bool,
    },
    /// η_a(q): solutions of α² + β² ≡ a (mod q) in [1,q]².
    Eta {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: i64,
        #[arg(long, value_enum, default_value = "convolution")]
        method: EtaMethodArg,
    },
    /// ω_a(q): square roots of a modulo q.
    Omega {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: i64,
    },
    /// Gauss sum S(q; k, m).
    Gauss {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, value_enum, default_value = "closed")]
        method: EvalRoute,
    },
    /// Kloosterman sum K(q; k, n) with the Weil bound check.
    Kloosterman {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        n: i64,
    },
    /// Bilinear sum H_{h,n}(q, a) with its bound check.
    Hsum {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: i64,
        #[arg(long = "h")]
        h: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, value_enum, default_value = "fast")]
        method: HRoute,
        #[arg(long, value_enum, default_value = "full")]
        mode: HBoundArg,
    },
    /// Full decomposition report with identity residuals for one (x, q, a).
    Decompose {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        a: i64,
        /// Absolute tolerance for the arc-integral quadrature
        /// (default 1e-8·√x).
        #[arg(long)]
        quadrature_tol: Option<f64>,
    },
    /// Run the property suite of one module (or `all`).
    Verify {
        #[arg(long)]
        module: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a sweep experiment from a JSON config.
    Sweep {
        #[arg(long)]
        config: String,
        /// Overrides the config's worker count (APCIRCLE_WORKERS also
        /// applies, between this flag and the config value).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Summarize a sweep CSV: max ratios, per-decade maxima, applicability.
    Report {
        #[arg(long)]
        input: String,
    },
}

/// Parse argv without exiting; usage errors map to exit code 2 in the
/// binary.
pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

fn print_complex_with_bound(value: expsums::ComplexValue, bound_name: &str, bound: f64) {
    println!("re {}", value.re);
    println!("im {}", value.im);
    println!("{bound_name} {bound}");
    println!(
        "check {}",
        if value.norm() <= bound + 1e-9 { "OK" } else { "VIOLATION" }
    );
}

fn run_command(command: Command) -> Result<i32, Error> {
    match command {
        Command::Count { x, q, a, brute } => {
            let count = if brute {
                counting::count_brute(x, q, a)?
            } else {
                counting::count_progression(x, q, a)?
            };
            let eta = counting::eta(q, a, EtaMethod::Convolution)?;
            let main = counting::main_term(x, q, a)?;
            println!("x {x}");
            println!("q {q}");
            println!("a {a}");
            println!("total {}", count.total);
            println!("quadrant {}", count.quadrant);
            println!("axis {}", count.axis);
            println!("origin {}", count.origin);
            println!("eta {eta}");
            println!("main {main}");
            println!("remainder {}", count.total as f64 - main);
            Ok(0)
        }
        Command::Eta { q, a, method } => {
            println!("{}", counting::eta(q, a, method.into())?);
            Ok(0)
        }
        Command::Omega { q, a } => {
            println!("{}", counting::omega(q, a));
            Ok(0)
        }
        Command::Gauss { q, k, m, method } => {
            let value = match method {
                EvalRoute::Direct => expsums::gauss_direct(q, k, m),
                EvalRoute::Closed => expsums::gauss_closed(q, k, m),
            };
            // |S(q;k,m)| ≤ √(2dq) with d = (k, q); coarse but unconditional.
            let d = arith::gcd(arith::reduce_mod(k, q), q);
            let bound = (2.0 * d as f64 * q as f64).sqrt();
            print_complex_with_bound(value, "magnitude_bound", bound);
            Ok(0)
        }
        Command::Kloosterman { q, k, n } => {
            let value = expsums::kloosterman_direct(q, k, n);
            print_complex_with_bound(value, "weil_bound", expsums::weil_bound_value(q, k, n));
            Ok(0)
        }
        Command::Hsum {
            q,
            a,
            h,
            n,
            method,
            mode,
        } => {
            let query = HSumQuery::new(q, a, h, n);
            let value = match method {
                HRoute::Direct => expsums::h_direct(query),
                HRoute::Fast => expsums::h_fast(query),
            };
            let mode = match mode {
                HBoundArg::Full => HBoundMode::Full,
                HBoundArg::Simplified => HBoundMode::Simplified,
            };
            print_complex_with_bound(value, "bound", expsums::h_bound_value(query, mode));
            Ok(0)
        }
        Command::Decompose {
            x,
            q,
            a,
            quadrature_tol,
        } => {
            let tol = quadrature_tol.unwrap_or_else(|| decomposition::default_quadrature_tol(x));
            let rep = decomposition::decompose(x, q, a, tol)?;
            println!("x {x}");
            println!("q {q}");
            println!("a {a}");
            println!("s1 {}", rep.s1);
            println!("s2 {}", rep.s2);
            println!("s1_0 {}", rep.s1_0);
            println!("s1_1 {}", rep.s1_1);
            println!("s1_2 {}", rep.s1_2);
            println!("s2_0 {}", rep.s2_0);
            println!("s2_1 {}", rep.s2_1);
            println!("frak_n {}", rep.frak_n);
            println!("frak_n0 {}", rep.frak_n0);
            println!("frak_d {}", rep.frak_d);
            println!("gamma_sum {}", rep.gamma_sum);
            println!("gamma_error {}", rep.gamma_error);
            for (name, value) in &rep.residuals {
                println!("residual.{name} {value}");
            }
            Ok(0)
        }
        Command::Verify { module, seed } => {
            let seed = match seed {
                Some(s) => s,
                None => {
                    println!("seed {DEFAULT_SEED} (default)");
                    DEFAULT_SEED
                }
            };
            let modules: Vec<&str> = if module == "all" {
                verify::MODULES.to_vec()
            } else {
                vec![module.as_str()]
            };
            let mut passed = 0usize;
            let mut failed = 0usize;
            for m in modules {
                let report = verify::run_module(m, seed)?;
                for check in &report.checks {
                    println!(
                        "[{}] {}::{}: {}",
                        if check.passed { "PASS" } else { "FAIL" },
                        report.module,
                        check.name,
                        check.detail
                    );
                }
                passed += report.pass_count();
                failed += report.fail_count();
            }
            println!("passed {passed}");
            println!("failed {failed}");
            Ok(if failed == 0 { 0 } else { 1 })
        }
        Command::Sweep { config, workers } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Error::Domain(format!("cannot read {config}: {e}")))?;
            let mut config: bounds::SweepConfig = serde_json::from_str(&text)
                .map_err(|e| Error::Domain(format!("bad sweep config: {e}")))?;
            if let Some(w) = workers
                .or_else(|| std::env::var("APCIRCLE_WORKERS").ok()?.parse().ok())
            {
                config.workers = w;
            }
            if config.workers == 0 {
                config.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
            }
            let records = bounds::run_sweep(&config)?;
            let errored = records.iter().filter(|r| r.error.is_some()).count();
            println!("cells {}", records.len());
            println!("errored {errored}");
            if !config.output_path.is_empty() {
                println!("csv {}", config.output_path);
            }
            if !records.is_empty() {
                print!("{}", bounds::report_constants(&records)?);
            }
            Ok(0)
        }
        Command::Report { input } => {
            let records = bounds::read_csv(&input)?;
            print!("{}", bounds::report_constants(&records)?);
            Ok(0)
        }
    }
}

/// Binary entry point: parse, dispatch, map errors to exit codes.
pub fn run_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 for usage errors, 0 for --help/--version.
            e.exit();
        }
    };
    match run_command(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_count_args() {
        let cli = parse_args(["apcircle", "count", "--x", "25", "--q", "4", "--a", "1"]).unwrap();
        match cli.command {
            Command::Count { x, q, a, brute } => {
                assert_eq!((x, q, a, brute), (25, 4, 1, false));
            }
            other => panic!("parsed {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_negative_x() {
        assert!(parse_args(["apcircle", "count", "--x", "-1", "--q", "4", "--a", "1"]).is_err());
    }

    #[test]
    fn parse_sweep_args() {
        let cli = parse_args(["apcircle", "sweep", "--config", "cfg.json"]).unwrap();
        match cli.command {
            Command::Sweep { config, workers } => {
                assert_eq!(config, "cfg.json");
                assert_eq!(workers, None);
            }
            other => panic!("parsed {other:?}"),
        }
    }
}
