use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use ranksvm_core::bmrm::lambda_from_c;
use ranksvm_core::data::{parse_svmlight, write_svmlight, ParseOptions, SyntheticConfig};
use ranksvm_core::eval::grouped_ranking_error;
use ranksvm_core::scaling::{sweep, timing_slope, SweepConfig, Timing};
use ranksvm_core::{
    pairwise_ranking_error, predict, train, Backend, Dataset, TrainConfig, ViewMode,
};

use crate::args::{
    BenchArgs, BenchBackend, DataArgs, EvalArgs, GenerateArgs, KindArg, PredictArgs, TrainArgs,
};
use crate::error::{CliError, CliResult};
use crate::model::ModelFile;

pub fn load_data(input: &DataArgs) -> CliResult<Dataset> {
    let file = File::open(&input.data).map_err(|e| CliError::io(&input.data, e))?;
    let opts = ParseOptions {
        dims: input.dims,
        mode: if input.column_only {
            ViewMode::ColumnOnly
        } else {
            ViewMode::Dual
        },
    };
    parse_svmlight(BufReader::new(file), opts)
        .map_err(|e| CliError::Data(format!("{}: {e}", input.data.display())))
}

pub fn load_model(path: &Path) -> CliResult<ModelFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ModelFile::parse(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

/// A file when `path` is given, otherwise standard output.
fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| match path {
        Some(p) => CliError::io(p, e),
        None => CliError::Data(format!("standard output: {e}")),
    }
}

/// Brings the data into the model's index space.
fn align(data: Dataset, model: &ModelFile) -> CliResult<Dataset> {
    if data.n() > model.n() {
        return Err(CliError::Data(format!(
            "dimension mismatch: model has {} features but data has {}",
            model.n(),
            data.n()
        )));
    }
    Ok(data.with_dims(model.n())?)
}

pub fn cmd_train(args: &TrainArgs) -> CliResult<()> {
    if !(args.epsilon > 0.0 && args.epsilon.is_finite()) {
        return Err(CliError::Usage(format!(
            "--epsilon must be > 0, got {}",
            args.epsilon
        )));
    }
    if args.max_iters == 0 {
        return Err(CliError::Usage("--max-iters must be at least 1".into()));
    }
    let data = load_data(&args.input)?;
    let summary = data.validate()?;
    let lambda = match (args.lambda, args.c) {
        (_, Some(c)) => lambda_from_c(c, summary.pair_count)?,
        (Some(l), None) => l,
        (None, None) => 0.1,
    };
    let cfg = TrainConfig {
        lambda,
        epsilon: args.epsilon,
        max_iters: args.max_iters,
        backend: args.backend.into(),
        ..Default::default()
    };
    cfg.validate()?;
    log::info!(
        "training on {} examples, {} features, {} preference pairs, lambda = {lambda}",
        data.m(),
        data.n(),
        summary.pair_count
    );
    let model = train(&data, cfg, None)?;

    if let Some(path) = &args.trace_out {
        let mut out = create(path)?;
        let write = |out: &mut BufWriter<File>| -> io::Result<()> {
            writeln!(out, "iter,J_wt,Jt_wt,J_wb,eps_t,seconds")?;
            for r in &model.trace {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.iter, r.j_wt, r.jt_wt, r.j_wb, r.eps_t, r.seconds
                )?;
            }
            out.flush()
        };
        write(&mut out).map_err(|e| CliError::io(path, e))?;
    }
    let file = ModelFile {
        lambda,
        epsilon: args.epsilon,
        converged: model.converged,
        iterations: model.iterations(),
        w: model.w.clone(),
    };
    if let Some(path) = &args.model_out {
        std::fs::write(path, file.to_text()).map_err(|e| CliError::io(path, e))?;
    }

    if !model.converged {
        eprintln!(
            "warning: not converged after {} iterations (gap {:e} >= epsilon {})",
            model.iterations(),
            model.final_gap().unwrap_or(f64::NAN),
            args.epsilon
        );
    }
    println!("J(w_b) = {}", model.objective().unwrap_or(f64::NAN));
    println!("eps_t = {}", model.final_gap().unwrap_or(f64::NAN));
    println!("iterations = {}", model.iterations());
    println!("converged = {}", model.converged);
    Ok(())
}

pub fn cmd_predict(args: &PredictArgs) -> CliResult<()> {
    let model = load_model(&args.model)?;
    let data = align(load_data(&args.input)?, &model)?;
    let scores = predict(data.x(), &model.w)?;
    let out_path = args.out.as_deref();
    let mut out = output(out_path)?;
    for s in scores {
        writeln!(out, "{s}").map_err(write_err(out_path))?;
    }
    out.flush().map_err(write_err(out_path))
}

pub fn cmd_eval(args: &EvalArgs) -> CliResult<()> {
    let model = load_model(&args.model)?;
    let data = align(load_data(&args.input)?, &model)?;
    let scores = predict(data.x(), &model.w)?;
    let (report, queries) = match data.qid() {
        Some(q) => {
            let used = data.validate()?.groups_used;
            (grouped_ranking_error(&scores, data.y(), q)?, Some(used))
        }
        None => (pairwise_ranking_error(&scores, data.y())?, None),
    };

    match queries {
        Some(k) => println!("error (mean over {k} queries) = {}", report.error),
        None => println!("error = {}", report.error),
    }
    println!("swapped = {}", report.swapped);
    println!("pairs = {}", report.pair_count);
    println!("tied_predictions = {}", report.tied_predictions);

    if let Some(path) = &args.csv {
        let mut out = create(path)?;
        let q = queries.map_or(String::new(), |k| k.to_string());
        writeln!(out, "error,swapped,pairs,tied_predictions,queries")
            .and_then(|_| {
                writeln!(
                    out,
                    "{},{},{},{},{q}",
                    report.error, report.swapped, report.pair_count, report.tied_predictions
                )
            })
            .and_then(|_| out.flush())
            .map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

pub fn cmd_generate(args: &GenerateArgs) -> CliResult<()> {
    let sparsity = args.sparsity.unwrap_or(match args.kind {
        KindArg::DenseRegression => 1.0,
        KindArg::SparseSimilarity => 0.02,
    });
    let data = SyntheticConfig::new(args.kind.into(), args.m, args.n, sparsity, args.seed)
        .with_noise(args.noise)
        .generate()?;
    let out_path = args.out.as_deref();
    let mut out = output(out_path)?;
    write_svmlight(&data, &mut out)
        .and_then(|_| out.flush())
        .map_err(write_err(out_path))
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    if args.repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    if args.sizes.iter().any(|&m| m < 2) {
        return Err(CliError::Usage("every size must be at least 2".into()));
    }
    let backends: &[Backend] = match args.backend {
        BenchBackend::Tree => &[Backend::Tree],
        BenchBackend::Brute => &[Backend::Brute],
        BenchBackend::Both => &[Backend::Tree, Backend::Brute],
    };
    let cfg = SweepConfig {
        kind: args.kind.into(),
        n: args.n,
        sparsity: args.sparsity,
        repeats: args.repeats,
        seed: args.seed,
    };
    let results: Vec<Vec<Timing>> = backends
        .iter()
        .map(|&b| sweep(&args.sizes, b, &cfg))
        .collect::<Result<_, _>>()?;

    let out_path = args.out.as_deref();
    let mut out = output(out_path)?;
    let write = |out: &mut dyn Write| -> io::Result<()> {
        writeln!(out, "m,backend,mean_s,stdev_s")?;
        for t in results.iter().flatten() {
            writeln!(out, "{},{},{},{}", t.m, t.backend, t.mean_s, t.stdev_s)?;
        }
        out.flush()
    };
    write(&mut out).map_err(write_err(out_path))?;
    drop(out);

    for timings in &results {
        let backend = timings[0].backend;
        match timing_slope(timings) {
            Ok(slope) => eprintln!("slope {backend} {slope:.3}"),
            Err(_) => eprintln!("slope {backend} n/a (needs two distinct sizes)"),
        }
    }
    Ok(())
}
