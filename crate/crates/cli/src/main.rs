mod cli;
mod commands;
mod config;
mod manifest;
mod pipeline;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use cli::{Cli, Command};
use commands::{Ctx, Exit, Outcome, EXIT_USAGE};
use config::Config;
use manifest::{manifest_path, Recorder, RunManifest};

fn dispatch(ctx: &mut Ctx, command: &Command) -> Result<Outcome> {
    match command {
        Command::Construct(c) => commands::construct(ctx, c),
        Command::Schedule { k, n } => commands::schedule(*k, *n),
        Command::Transform(t) => commands::transform(ctx, t),
        Command::Certify(args) => commands::certify(ctx, args),
        Command::Audit { certificate, td } => commands::audit(ctx, certificate, td),
        Command::Search(s) => commands::search(ctx, s),
        Command::Verify(v) => commands::verify(ctx, v),
        Command::Pipeline(args) => pipeline::run(ctx, args),
        Command::Export(e) => commands::export(ctx, e),
    }
}

fn emit(ctx: &mut Ctx, out: &Outcome, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => {
            ctx.rec.write(path, &out.body)?;
            for (suffix, contents) in &out.sidecars {
                let mut p = path.as_os_str().to_owned();
                p.push(suffix);
                ctx.rec.write(Path::new(&p), contents)?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let (started, started_at) = manifest::now();
    let config = match Config::load(args.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if let Some(jobs) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    let mut ctx = Ctx { config, seed: args.seed, rec: Recorder::default() };
    let code = match dispatch(&mut ctx, &args.command).and_then(|out| {
        emit(&mut ctx, &out, args.output.as_deref())?;
        Ok(out.code)
    }) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            e.downcast_ref::<Exit>().map_or(EXIT_USAGE, |x| x.code)
        }
    };

    let manifest = RunManifest {
        command_line: std::env::args().collect(),
        config: ctx.config.clone(),
        inputs: std::mem::take(&mut ctx.rec.inputs),
        seed: args.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_at,
        elapsed_ms: started.elapsed().map(|d| d.as_millis()).unwrap_or(0),
        outputs: std::mem::take(&mut ctx.rec.outputs),
        exit_code: code,
    };
    let path = manifest_path(args.manifest.as_deref(), args.output.as_deref());
    let written = serde_json::to_string_pretty(&manifest)
        .map_err(anyhow::Error::from)
        .and_then(|s| std::fs::write(&path, s + "\n").map_err(Into::into));
    if let Err(e) = written {
        eprintln!("error: writing manifest {}: {e}", path.display());
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(code as u8)
}
