//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the process exit status.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::block_encoding::{
    apply_block_encoding, fourier_block_encoding, lcu_block_encoding, normalize_for_fourier,
    FourierOptions,
};
use crate::convolution::{convolve_direct, convolve_fourier, operation_matrix, OperationVariant};
use crate::deconvolution::{deconvolve_exact, deconvolve_svt, EncodingMethod};
use crate::error::{Error, Result};
use crate::group::{parse_group_spec, FiniteGroup};
use crate::integral::{convergence_study, PeriodicKernel};
use crate::io::{fmt_f64, read_signal, write_matrix, write_signal, Format};
use crate::linalg::max_abs_diff_vec;
use crate::representations::{fourier_apply, fourier_apply_inverse, fourier_matrix, irreps};
use crate::signal::GroupSignal;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "groupconv", version, about = "Group convolution, block encodings and deconvolution over finite groups")]
pub struct Cli {
    /// Output format for vectors, matrices and reports.
    #[arg(long, global = true, default_value = "csv", value_parser = parse_format)]
    pub format: Format,

    /// Tolerance used by verification checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,

    #[command(subcommand)]
    pub command: Command,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> std::result::Result<OperationVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_encoding(s: &str) -> std::result::Result<EncodingMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print order, Cayley table and irrep dimensions.
    Group {
        /// e.g. `cyclic:4`, `dihedral:3`, `product:cyclic:2,cyclic:3`, `cayley:table.json`
        spec: String,
    },
    /// Apply the unitary Fourier matrix (or its inverse) to a signal.
    Fourier {
        #[arg(long)]
        group: String,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        inverse: bool,
        /// Also write the Fourier matrix itself.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Apply one of the four group operations.
    Convolve {
        #[command(flatten)]
        op: OperationArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "direct", value_parser = ["direct", "matrix", "fourier"])]
        method: String,
        /// Compare against the other evaluation paths.
        #[arg(long)]
        verify: bool,
    },
    /// Build a block encoding and check its contract.
    Encode {
        #[command(flatten)]
        op: OperationArgs,
        #[arg(long, default_value = "lcu", value_parser = parse_encoding)]
        method: EncodingMethod,
        #[arg(long)]
        quantize_bits: Option<u32>,
        /// Scale the filter so its largest Fourier entry has modulus one.
        #[arg(long)]
        normalize: bool,
        /// Post-select on this input and report the success probability.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the full unitary.
        #[arg(long)]
        unitary: Option<PathBuf>,
    },
    /// Invert a group operation.
    Deconvolve {
        #[command(flatten)]
        op: OperationArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "exact", value_parser = ["exact", "svt"])]
        method: String,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Block encoding used by the svt method.
        #[arg(long, default_value = "lcu", value_parser = parse_encoding)]
        encoding: EncodingMethod,
        /// Write the unnormalized solution instead of the unit state.
        #[arg(long)]
        unnormalized: bool,
    },
    /// Convergence study for the periodic Fredholm example.
    Integral {
        #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value = "exp-manhattan")]
        kernel: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write `(ln n, ln error)` pairs here.
        #[arg(long)]
        plot_data: Option<PathBuf>,
        /// Report `runtime_ms` as 0 so repeated runs are byte-identical.
        #[arg(long)]
        deterministic: bool,
    },
}

#[derive(Debug, Args)]
pub struct OperationArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long, default_value = "convolution", value_parser = parse_variant)]
    pub variant: OperationVariant,
    #[arg(long)]
    pub filter: PathBuf,
}

impl OperationArgs {
    fn load(&self) -> Result<(FiniteGroup, GroupSignal)> {
        let group = parse_group_spec(&self.group)?;
        let m = read_checked(&self.filter, &group)?;
        Ok((group, m))
    }
}

fn read_checked(path: &Path, group: &FiniteGroup) -> Result<GroupSignal> {
    let s = read_signal(path)?;
    s.ensure_on(group)?;
    Ok(s)
}

/// Ordered key/value report rendered as `key,value` CSV or a JSON object.
#[derive(Default)]
struct Report(Vec<(&'static str, Value)>);

impl Report {
    fn put(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Self {
        self.0.push((key, value.into()));
        self
    }

    fn num(&mut self, key: &'static str, v: f64) -> &mut Self {
        let value = if v.is_finite() { json!(v) } else { json!(v.to_string()) };
        self.put(key, value)
    }

    fn render(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                for (k, v) in &self.0 {
                    let text = match v {
                        Value::String(s) => s.clone(),
                        Value::Number(n) => match n.as_f64() {
                            Some(f) if !n.is_i64() && !n.is_u64() => fmt_f64(f),
                            _ => n.to_string(),
                        },
                        other => other.to_string(),
                    };
                    w.write_record([*k, text.as_str()])
                        .map_err(|e| Error::Parse(e.to_string()))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let body: Vec<String> = self
                    .0
                    .iter()
                    .map(|(k, v)| format!("{}:{}", json!(k), v))
                    .collect();
                writeln!(out, "{{{}}}", body.join(","))?;
            }
        }
        Ok(())
    }
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    format: Format,
}

impl Io<'_> {
    /// Vector to `path` or stdout; the report then goes to the other stream.
    fn emit(
        &mut self,
        signal: &GroupSignal,
        labels: Option<&[String]>,
        path: Option<&Path>,
        report: &Report,
    ) -> Result<()> {
        match path {
            Some(p) => {
                let format = Format::from_path(p).unwrap_or(self.format);
                let file = fs::File::create(p)?;
                write_signal(std::io::BufWriter::new(file), signal, format, labels)?;
                report.render(self.format, self.stdout)
            }
            None => {
                write_signal(&mut *self.stdout, signal, self.format, labels)?;
                if !report.0.is_empty() {
                    report.render(self.format, self.stderr)?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns 0 on success, 1 on a library error and 2 on a usage error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let mut io = Io {
        stdout,
        stderr,
        format: cli.format,
    };
    match dispatch(&cli, &mut io) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(io.stderr, "error[{}]: {e}", e.name());
            1
        }
    }
}

fn dispatch(cli: &Cli, io: &mut Io<'_>) -> Result<()> {
    match &cli.command {
        Command::Group { spec } => cmd_group(spec, io),
        Command::Fourier {
            group,
            input,
            output,
            inverse,
            matrix,
        } => cmd_fourier(group, input.as_deref(), output.as_deref(), *inverse, matrix.as_deref(), io),
        Command::Convolve {
            op,
            input,
            output,
            method,
            verify,
        } => cmd_convolve(op, input, output.as_deref(), method, *verify, cli.tolerance, io),
        Command::Encode {
            op,
            method,
            quantize_bits,
            normalize,
            input,
            unitary,
        } => cmd_encode(
            op,
            *method,
            *quantize_bits,
            *normalize,
            input.as_deref(),
            unitary.as_deref(),
            cli.tolerance,
            io,
        ),
        Command::Deconvolve {
            op,
            input,
            output,
            method,
            epsilon,
            encoding,
            unnormalized,
        } => cmd_deconvolve(op, input, output.as_deref(), method, *epsilon, *encoding, *unnormalized, io),
        Command::Integral {
            n_list,
            lambda,
            kernel,
            dim,
            out,
            plot_data,
            deterministic,
        } => cmd_integral(
            n_list,
            *lambda,
            kernel,
            *dim,
            out.as_deref(),
            plot_data.as_deref(),
            *deterministic,
            io,
        ),
    }
}

fn cmd_group(spec: &str, io: &mut Io<'_>) -> Result<()> {
    let g = parse_group_spec(spec)?;
    let (labels, dims): (Vec<String>, Vec<usize>) = match irreps(&g) {
        Ok(reps) => reps.iter().map(|r| (r.label().to_string(), r.dim())).unzip(),
        Err(Error::IrrepsUnavailable(_)) => (Vec::new(), Vec::new()),
        Err(e) => return Err(e),
    };
    let table = g.cayley_table();
    match io.format {
        Format::Json => {
            let v = json!({
                "order": g.order(),
                "family": g.family().describe(),
                "abelian": g.is_abelian(),
                "irrep_labels": labels,
                "irrep_dims": dims,
                "cayley_table": table,
            });
            writeln!(io.stdout, "{v}")?;
        }
        Format::Csv => {
            let dims_text = format!(
                "[{}]",
                dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
            );
            let mut r = Report::default();
            r.put("order", g.order())
                .put("family", g.family().describe())
                .put("abelian", g.is_abelian().to_string())
                .put("irrep_labels", labels.join(" "))
                .put("irrep_dims", dims_text);
            r.render(Format::Csv, io.stdout)?;
            writeln!(io.stdout, "cayley_table")?;
            for row in table {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(io.stdout, "{}", cells.join(","))?;
            }
        }
    }
    Ok(())
}

fn cmd_fourier(
    group: &str,
    input: Option<&Path>,
    output: Option<&Path>,
    inverse: bool,
    matrix: Option<&Path>,
    io: &mut Io<'_>,
) -> Result<()> {
    let g = parse_group_spec(group)?;
    let fm = fourier_matrix(&g)?;
    if let Some(p) = matrix {
        let format = Format::from_path(p).unwrap_or(io.format);
        write_matrix(std::io::BufWriter::new(fs::File::create(p)?), &fm.matrix, format)?;
    }
    let Some(input) = input else {
        if matrix.is_none() {
            write_matrix(&mut *io.stdout, &fm.matrix, io.format)?;
        }
        return Ok(());
    };
    let x = read_checked(input, &g)?;
    let labels: Vec<String> = fm.row_index.iter().map(|r| r.to_string()).collect();
    if inverse {
        let y = fourier_apply_inverse(&fm, &x)?;
        io.emit(&y, None, output, &Report::default())
    } else {
        let y = fourier_apply(&fm, &x)?;
        io.emit(&y, Some(&labels), output, &Report::default())
    }
}

fn cmd_convolve(
    op: &OperationArgs,
    input: &Path,
    output: Option<&Path>,
    method: &str,
    verify: bool,
    tolerance: f64,
    io: &mut Io<'_>,
) -> Result<()> {
    let (g, m) = op.load()?;
    let x = read_checked(input, &g)?;
    let by = |name: &str| -> Result<GroupSignal> {
        match name {
            "direct" => convolve_direct(&g, &m, &x, op.variant),
            "matrix" => operation_matrix(&g, &m, op.variant)?.apply(&x),
            _ => convolve_fourier(&g, &m, &x, op.variant),
        }
    };
    let y = by(method)?;
    let mut report = Report::default();
    if verify {
        let mut worst: f64 = 0.0;
        for other in ["direct", "matrix", "fourier"] {
            match by(other) {
                Ok(z) => worst = worst.max(max_abs_diff_vec(y.values(), z.values())),
                Err(Error::IrrepsUnavailable(_)) => {}
                Err(e) => return Err(e),
            }
        }
        report
            .num("max_path_deviation", worst)
            .put("paths_agree", (worst <= tolerance).to_string());
        io.emit(&y, None, output, &report)?;
        if worst > tolerance {
            return Err(Error::Precondition(format!(
                "evaluation paths differ by {worst:e} > tolerance {tolerance:e}"
            )));
        }
        return Ok(());
    }
    io.emit(&y, None, output, &report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_encode(
    op: &OperationArgs,
    method: EncodingMethod,
    quantize_bits: Option<u32>,
    normalize: bool,
    input: Option<&Path>,
    unitary: Option<&Path>,
    tolerance: f64,
    io: &mut Io<'_>,
) -> Result<()> {
    let (g, mut m) = op.load()?;
    let mut report = Report::default();
    let be = match method {
        EncodingMethod::Lcu => lcu_block_encoding(&g, &m, op.variant)?,
        EncodingMethod::Fourier => {
            if normalize {
                let (scaled, factor) = normalize_for_fourier(&g, &m, op.variant)?;
                report.num("filter_scale", factor);
                m = scaled;
            }
            fourier_block_encoding(&g, &m, op.variant, FourierOptions { quantize_bits })?
        }
    };
    let residual = be.block_residual();
    let unitarity = be.unitarity_residual();
    report
        .put("construction", be.tag.name())
        .num("alpha", be.normalization)
        .put("data_qubits", be.data_qubits)
        .put("ancilla_qubits", be.ancilla_qubits)
        .num("block_residual", residual)
        .num("unitarity_residual", unitarity)
        .put(
            "block_contract",
            if residual <= tolerance && unitarity <= tolerance { "pass" } else { "fail" },
        )
        .num("kappa", be.spectrum.kappa)
        .num("norm", be.spectrum.norm);
    if let Some(p) = input {
        let x = read_checked(p, &g)?;
        let r = apply_block_encoding(&be, &x)?;
        report
            .num("success_probability", r.success_probability)
            .num("worst_case_probability", r.worst_case_probability)
            .num("repetitions_plain", r.expected_repetitions_plain)
            .put("repetitions_amplified", r.expected_repetitions_amplified)
            .num("garbage_leak", r.garbage_leak);
    }
    if let Some(p) = unitary {
        let format = Format::from_path(p).unwrap_or(io.format);
        write_matrix(std::io::BufWriter::new(fs::File::create(p)?), &be.unitary, format)?;
    }
    report.render(io.format, io.stdout)
}

#[allow(clippy::too_many_arguments)]
fn cmd_deconvolve(
    op: &OperationArgs,
    input: &Path,
    output: Option<&Path>,
    method: &str,
    epsilon: f64,
    encoding: EncodingMethod,
    unnormalized: bool,
    io: &mut Io<'_>,
) -> Result<()> {
    let (g, m) = op.load()?;
    let y = read_checked(input, &g)?;
    let mut report = Report::default();
    report.put("method", method.to_string());
    let state = if method == "exact" {
        let r = deconvolve_exact(&g, &m, &y, op.variant)?;
        report
            .num("kappa", r.condition.kappa)
            .num("sigma_min", r.condition.sigma_min)
            .num("scale", r.scale);
        if unnormalized {
            r.solution()
        } else {
            r.state
        }
    } else {
        let r = deconvolve_svt(&g, &m, &y, op.variant, epsilon, encoding)?;
        report
            .put("encoding", encoding.name())
            .num("kappa", r.kappa)
            .num("alpha", r.alpha)
            .num("delta", r.delta)
            .num("delta_encoded", r.delta_encoded)
            .num("rescale", r.rescale)
            .put("degree", r.degree)
            .num("success_probability", r.success_probability)
            .num("predicted_probability", r.predicted_probability)
            .num("worst_case_probability", r.worst_case_probability)
            .num("repetitions_plain", r.expected_repetitions_plain)
            .put("repetitions_amplified", r.expected_repetitions_amplified);
        if unnormalized {
            log::warn!("svt recovers a unit state only; --unnormalized ignored");
        }
        r.state
    };
    io.emit(&state, None, output, &report)
}

#[allow(clippy::too_many_arguments)]
fn cmd_integral(
    n_list: &[usize],
    lambda: f64,
    kernel: &str,
    dim: usize,
    out: Option<&Path>,
    plot_data: Option<&Path>,
    deterministic: bool,
    io: &mut Io<'_>,
) -> Result<()> {
    PeriodicKernel::parse(kernel, dim)?;
    let study = convergence_study(n_list, dim, lambda)?;
    let mut buf = Vec::new();
    match out.and_then(Format::from_path).unwrap_or(io.format) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            let err = |e: csv::Error| Error::Parse(e.to_string());
            w.write_record(["n", "error", "kappa_measured", "kappa_bound", "runtime_ms"])
                .map_err(err)?;
            for r in &study.rows {
                let runtime = if deterministic { 0.0 } else { r.runtime_ms };
                w.write_record([
                    r.n.to_string(),
                    fmt_f64(r.error),
                    fmt_f64(r.kappa_measured),
                    fmt_f64(r.kappa_bound),
                    format!("{runtime:.3}"),
                ])
                .map_err(err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = study
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": r.n,
                        "error": r.error,
                        "kappa_measured": r.kappa_measured,
                        "kappa_bound": r.kappa_bound,
                        "runtime_ms": if deterministic { 0.0 } else { r.runtime_ms },
                    })
                })
                .collect();
            writeln!(buf, "{}", json!({ "rows": rows, "slope": study.slope }))?;
        }
    }
    match out {
        Some(p) => {
            fs::write(p, &buf)?;
            writeln!(io.stdout, "slope,{}", fmt_f64(study.slope))?;
        }
        None => io.stdout.write_all(&buf)?,
    }
    if let Some(p) = plot_data {
        let mut text = String::from("log_n,log_error\n");
        for (x, y) in study.plot_points() {
            text.push_str(&format!("{},{}\n", fmt_f64(x), fmt_f64(y)));
        }
        fs::write(p, text)?;
    }
    Ok(())
}
