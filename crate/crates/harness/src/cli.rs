// SPDX-License-Identifier: Apache-2.0

//! `nibmul` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nibmul_core::engine::multiply_traced;
use nibmul_core::netlist::{build_netlist, emit_verilog};
use nibmul_core::{ArchKind, VectorJob};

use crate::bench::run_bench;
use crate::config::{parse_archs, parse_ns};
use crate::stimulus::random_jobs;
use crate::verify::run_verify;
use crate::waves::{check_shape, trace_csv, trace_vcd};
use crate::{exit, write_file, HarnessError, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "nibmul", version, about = "Nibble multiplier workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every model and netlist against the oracle; writes verify.txt.
    Verify(Common),
    /// Cost proxies beside published figures; writes bench.csv and bench.txt.
    Bench(Common),
    /// Cycle trace of one job as CSV and VCD.
    Trace(TraceArgs),
    /// Structural Verilog for one design.
    Emit(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// key=value config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated architectures: shiftadd, booth, nibble, wallace, lutarray.
    #[arg(long)]
    arch: Option<String>,
    /// Comma-separated vector lengths.
    #[arg(long)]
    n: Option<String>,
    /// Nibble mode: sequential or unrolled.
    #[arg(long)]
    mode: Option<String>,
    /// Nibble lanes.
    #[arg(long)]
    lanes: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// `exhaustive` or `random:COUNT`.
    #[arg(long)]
    stimulus: Option<String>,
    /// Output directory (for `emit`, the output file).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated multiplicands; overrides `--n`.
    #[arg(long, value_delimiter = ',')]
    a: Vec<u8>,
    /// Broadcast scalar.
    #[arg(long)]
    b: Option<u8>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, HarnessError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
            cfg.apply_text(&text)?;
        }
        if let Some(v) = &self.arch {
            cfg.archs = parse_archs(v)?;
        }
        if let Some(v) = &self.n {
            cfg.ns = parse_ns(v)?;
        }
        if let Some(v) = &self.mode {
            cfg.set("mode", v)?;
        }
        if let Some(v) = self.lanes {
            cfg.mode.lanes = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.stimulus {
            cfg.set("stimulus", v)?;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Single-design commands take exactly one architecture and length.
    fn single(&self, cfg: &RunConfig) -> Result<(ArchKind, usize), HarnessError> {
        match (cfg.archs.as_slice(), cfg.ns.as_slice()) {
            ([arch], [n]) => Ok((*arch, *n)),
            _ => Err(HarnessError::Usage(
                "this command needs exactly one --arch and one --n".into(),
            )),
        }
    }
}

fn report(out: &mut dyn Write, text: &str) -> Result<(), HarnessError> {
    out.write_all(text.as_bytes())
        .map_err(|e| HarnessError::io("<stdout>", e))
}

fn verify(c: &Common, out: &mut dyn Write) -> Result<(), HarnessError> {
    let cfg = c.config()?;
    let r = run_verify(&cfg)?;
    let text = r.render();
    write_file(&cfg.out.join("verify.txt"), &text)?;
    report(out, &text)?;
    if r.passed() {
        Ok(())
    } else {
        Err(HarnessError::Verification(format!(
            "see {}",
            cfg.out.join("verify.txt").display()
        )))
    }
}

fn bench(c: &Common, out: &mut dyn Write) -> Result<(), HarnessError> {
    let cfg = c.config()?;
    let r = run_bench(&cfg)?;
    write_file(&cfg.out.join("bench.csv"), &r.to_csv())?;
    let table = r.to_table();
    write_file(&cfg.out.join("bench.txt"), &table)?;
    report(out, &table)
}

fn trace(t: &TraceArgs, out: &mut dyn Write) -> Result<(), HarnessError> {
    let mut cfg = t.common.config()?;
    if !t.a.is_empty() {
        cfg.ns = vec![t.a.len()];
        cfg.validate()?;
    }
    let (arch, n) = t.common.single(&cfg)?;
    let job = if t.a.is_empty() {
        let j = random_jobs(n, 1, cfg.seed).remove(0);
        match t.b {
            Some(b) => {
                VectorJob::from_bytes(&j.a_ops().iter().map(|a| a.0).collect::<Vec<_>>(), b)?
            }
            None => j,
        }
    } else {
        VectorJob::from_bytes(&t.a, t.b.unwrap_or(1))?
    };
    let mode = cfg.mode_for(n);
    mode.check(n)?;
    let (_, trace) = multiply_traced(arch, &job, mode)?;
    check_shape(arch, mode, &job, &trace).map_err(HarnessError::Verification)?;
    let stem = format!("trace_{arch}_n{n}");
    let csv = cfg.out.join(format!("{stem}.csv"));
    let vcd = cfg.out.join(format!("{stem}.vcd"));
    write_file(&csv, &trace_csv(&trace))?;
    write_file(&vcd, &trace_vcd(&trace, n))?;
    report(
        out,
        &format!(
            "{} cycles, {} writes\n{}\n{}\n",
            trace.last_cycle(),
            trace.writes().len(),
            csv.display(),
            vcd.display()
        ),
    )
}

fn emit(c: &Common, out: &mut dyn Write) -> Result<(), HarnessError> {
    let cfg = c.config()?;
    let (arch, n) = c.single(&cfg)?;
    let mode = (arch == ArchKind::Nibble).then(|| cfg.mode_for(n));
    let design = build_netlist(arch, n, mode)?;
    let module = format!("{arch}_n{n}");
    let text = emit_verilog(&design.netlist, &module)?;
    let path = match &c.out {
        Some(p) => p.clone(),
        None => Path::new(&format!("{module}.v")).to_path_buf(),
    };
    write_file(&path, &text)?;
    report(out, &format!("{}\n", path.display()))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
        }
    };
    let result = match &cli.command {
        Command::Verify(c) => verify(c, out),
        Command::Bench(c) => bench(c, out),
        Command::Trace(t) => trace(t, out),
        Command::Emit(c) => emit(c, out),
    };
    match result {
        Ok(()) => exit::OK,
        Err(e) => {
            let _ = writeln!(err, "nibmul: {e}");
            e.exit_code()
        }
    }
}
