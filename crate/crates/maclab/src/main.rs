use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use maclab::run::{dispatch, Command as RunCommand, RunConfig};

/// Exact desk-scale verification of truncated Lie algebra cohomology,
/// Laplacian operator identities and affine constant-term identities.
#[derive(Parser)]
#[command(name = "maclab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args, Clone)]
struct Common {
    /// Cartan type, e.g. A1, A2, D4, gl2 (case-insensitive).
    #[arg(long = "type", default_value = "A1")]
    type_str: String,
    /// q-order cutoff (integer part; exponents run to nq exactly).
    #[arg(long, default_value_t = 6)]
    nq: i64,
    /// t-order cutoff.
    #[arg(long, default_value_t = 6)]
    nt: i64,
    /// q-exponent denominator (2 enables half-integer exponents).
    #[arg(long, default_value_t = 1)]
    qden: i64,
    /// Most negative z-weight examined (non-positive).
    #[arg(long = "weight-bound", default_value_t = -4, allow_hyphen_values = true)]
    weight_bound: i64,
    /// Largest symmetric degree examined.
    #[arg(long = "p-bound", default_value_t = 3)]
    p_bound: i64,
    /// Worker threads (defaults to available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for modular-rank primes and torus-point sampling.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
    /// Embed both sides' coefficient tables up to this order.
    #[arg(long = "dump-order")]
    dump_order: Option<i64>,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone)]
enum CliCommand {
    /// Cohomology of the truncated algebra against the free-exterior table.
    VerifyTrunc {
        #[command(flatten)]
        common: Common,
        /// Truncation order of the algebra.
        #[arg(long, default_value_t = 2)]
        n: i64,
    },
    /// Invariant restricted complex against the free-algebra table.
    VerifySym {
        #[command(flatten)]
        common: Common,
    },
    /// The spectral-sequence operator: injectivity and cokernel weights.
    VerifyDelta1 {
        #[command(flatten)]
        common: Common,
        /// Exponent parameter of the operator.
        #[arg(long, default_value_t = 1)]
        m: i64,
        /// Truncation order parameter of the operator.
        #[arg(long, default_value_t = 2)]
        n: i64,
    },
    /// The Laplacian identity on full and invariant slices.
    VerifyNakano {
        #[command(flatten)]
        common: Common,
    },
    /// Harmonic space = cohomology, Hodge dimensions, cocycle generation.
    VerifyHarmonic {
        #[command(flatten)]
        common: Common,
    },
    /// The level-0 lattice-sum vs product identity, with torus constancy.
    #[command(name = "verify-1psi1")]
    Verify1psi1 {
        #[command(flatten)]
        common: Common,
    },
    /// The constant-term identity for the adjoint plethysm.
    VerifyMacdonaldCt {
        #[command(flatten)]
        common: Common,
    },
    /// The level-1 lattice identity for simply laced types.
    VerifyLevel1 {
        #[command(flatten)]
        common: Common,
    },
    /// The rank-1 specialization with half-integer exponents (qden = 2).
    BaileySl2 {
        #[command(flatten)]
        common: Common,
    },
    /// Vacuum-module constant term and the graded invariant dimension.
    VerifyBrylinski {
        #[command(flatten)]
        common: Common,
    },
    /// The level-1 near-orthogonality product identity.
    VerifyOrtho {
        #[command(flatten)]
        common: Common,
    },
    /// Dump a differential or operator matrix in sparse triplet form.
    DumpMatrix {
        #[command(flatten)]
        common: Common,
        /// "delta" (truncated complex, needs --n) or an operator name such
        /// as dbar, dbar_star, box, boxbar, dlap, k, ad:i:m, r:i:m, d:i:m.
        #[arg(long)]
        operator: String,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, default_value_t = 1)]
        degree: i64,
        /// z-weight of the source slice.
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        z_weight: i64,
    },
    /// Dump a named series: kac, psi-product, basic-character.
    DumpSeries {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        series: String,
    },
}

fn to_config(common: &Common, command: RunCommand, n: Option<i64>, m: Option<i64>) -> RunConfig {
    let threads = common.threads.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|v| v.get())
            .unwrap_or(1)
    });
    RunConfig {
        command,
        root_system: common.type_str.clone(),
        n,
        nq: common.nq,
        nt: common.nt,
        qden: common.qden,
        weight_bound: common.weight_bound,
        p_bound: common.p_bound,
        threads,
        seed: common.seed,
        dump_order: common.dump_order,
        m,
        cap: maclab::cap_from_env(),
        object: None,
        degree: None,
        z_weight: None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, common) = match &cli.command {
        CliCommand::VerifyTrunc { common, n } => (
            to_config(common, RunCommand::VerifyTrunc, Some(*n), None),
            common,
        ),
        CliCommand::VerifySym { common } => {
            (to_config(common, RunCommand::VerifySym, None, None), common)
        }
        CliCommand::VerifyDelta1 { common, m, n } => (
            to_config(common, RunCommand::VerifyDelta1, Some(*n), Some(*m)),
            common,
        ),
        CliCommand::VerifyNakano { common } => (
            to_config(common, RunCommand::VerifyNakano, None, None),
            common,
        ),
        CliCommand::VerifyHarmonic { common } => (
            to_config(common, RunCommand::VerifyHarmonic, None, None),
            common,
        ),
        CliCommand::Verify1psi1 { common } => (
            to_config(common, RunCommand::Verify1psi1, None, None),
            common,
        ),
        CliCommand::VerifyMacdonaldCt { common } => (
            to_config(common, RunCommand::VerifyMacdonaldCt, None, None),
            common,
        ),
        CliCommand::VerifyLevel1 { common } => (
            to_config(common, RunCommand::VerifyLevel1, None, None),
            common,
        ),
        CliCommand::BaileySl2 { common } => {
            let mut cfg = to_config(common, RunCommand::BaileySl2, None, None);
            cfg.root_system = "A1".to_string();
            cfg.qden = 2;
            (cfg, common)
        }
        CliCommand::VerifyBrylinski { common } => (
            to_config(common, RunCommand::VerifyBrylinski, None, None),
            common,
        ),
        CliCommand::VerifyOrtho { common } => (
            to_config(common, RunCommand::VerifyOrtho, None, None),
            common,
        ),
        CliCommand::DumpMatrix {
            common,
            operator,
            n,
            degree,
            z_weight,
        } => {
            let mut cfg = to_config(common, RunCommand::DumpMatrix, *n, None);
            cfg.object = Some(operator.clone());
            cfg.degree = Some(*degree);
            cfg.z_weight = Some(*z_weight);
            (cfg, common)
        }
        CliCommand::DumpSeries { common, series } => {
            let mut cfg = to_config(common, RunCommand::DumpSeries, None, None);
            cfg.object = Some(series.clone());
            (cfg, common)
        }
    };

    let report = dispatch(&config);
    let rendered = if common.format == "json" {
        report.to_json()
    } else {
        report.to_text()
    };
    match &common.out {
        Some(path) => {
            let mut f = std::fs::File::create(path).expect("create output file");
            f.write_all(rendered.as_bytes()).expect("write report");
        }
        None => {
            println!("{rendered}");
        }
    }
    match report.exit_code() {
        0 => ExitCode::SUCCESS,
        1 => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}
