use std::fmt::Write as _;
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::Path;

use log::{error, info};
use rbm_decoder::bench::{self, compare_decoders, reports_to_csv, DecoderKind, EvalReport};
use rbm_decoder::decoders::{MwpmDecoder, NeuralDecoder};
use rbm_decoder::noise::{generate_dataset, load_dataset, save_dataset};
use rbm_decoder::rbm::{load_model, save_model, ModelHeader};
use rbm_decoder::rng::{derive_seed, Domain};
use rbm_decoder::training::{grid_search, train_with, GridScore, TRAIN_LOG_HEADER};
use rbm_decoder::{ErrorModel, Hyperparams, Lattice, RbmParamsF64};

use crate::config::{Config, ConfigError};
use crate::{Command, CompareArgs, DecoderArg, EvalArgs, GenArgs, GridArgs, HistArgs, HyperOverrides, TestSetArgs, TrainArgs};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Precondition(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }
}

impl From<rbm_decoder::Error> for Failure {
    fn from(err: rbm_decoder::Error) -> Self {
        if err.is_format_or_io() {
            Failure::Io(err.to_string())
        } else {
            Failure::Precondition(err.to_string())
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(err: ConfigError) -> Self {
        Failure::Io(err.to_string())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gen(args) => gen(args),
        Command::Train(args) => train(args),
        Command::Grid(args) => grid(args),
        Command::Eval(args) => eval(args),
        Command::Compare(args) => compare(args),
        Command::Hist(args) => hist(args),
    }
}

fn gen(args: GenArgs) -> Result<(), Failure> {
    let lattice = Lattice::new(args.size)?;
    let dataset = generate_dataset(lattice, ErrorModel::new(args.p_err)?, args.count, args.seed)?;
    save_dataset(&dataset, &args.out)?;
    info!(
        "wrote {} chains (L={}, p={}) to {}",
        dataset.len(),
        args.size,
        args.p_err,
        args.out.display()
    );
    Ok(())
}

fn apply_overrides(hyper: &mut Hyperparams, o: &HyperOverrides) {
    macro_rules! set {
        ($($field:ident),*) => {
            $(if let Some(v) = o.$field { hyper.$field = v; })*
        };
    }
    set!(eta, batch_size, init_width, cd_k, l2, n_h, epochs, n_eq);
}

fn train(args: TrainArgs) -> Result<(), Failure> {
    let config = Config::load_or_default(args.config.as_deref())?;
    let mut hyper = config.hyper.clone();
    apply_overrides(&mut hyper, &args.hyper);
    hyper.validate()?;
    let dataset = load_dataset(&args.data)?;

    let log_path = args.log.or(config.train_log);
    let mut log_file = match &log_path {
        Some(path) => {
            let fresh = !path.exists();
            let mut file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| Failure::Io(format!("cannot open {}: {e}", path.display())))?;
            if fresh {
                writeln!(file, "{TRAIN_LOG_HEADER}").map_err(|e| Failure::Io(e.to_string()))?;
            }
            Some(file)
        }
        None => None,
    };
    let mut log_error = None;
    let outcome = train_with::<f64>(&dataset, &hyper, args.seed, |record, _| {
        if record.epoch % 10 == 0 || record.epoch == hyper.epochs {
            info!(
                "epoch {}: mean effective energy {:.4}",
                record.epoch, record.mean_effective_energy
            );
        }
        if let Some(file) = log_file.as_mut() {
            if let Err(e) = writeln!(file, "{}", record.csv_row()) {
                log_error.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = log_error {
        return Err(Failure::Io(format!("cannot write training log: {e}")));
    }
    let header = ModelHeader {
        lattice: dataset.lattice,
        n_h: hyper.n_h,
        p_err: dataset.p_err,
    };
    save_model(&header, &outcome.params, &args.out)?;
    info!("saved model to {}", args.out.display());
    Ok(())
}

const GRID_REPORT_HEADER: &str =
    "index,n_h,eta,cd_k,l2,batch_size,init_width,epochs,n_eq,n_fail,n_timeout,p_fail,train_seconds,selected";

fn grid_report(scores: &[GridScore], best: usize) -> String {
    let mut out = format!("{GRID_REPORT_HEADER}\n");
    for s in scores {
        let h = &s.hyper;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{:.3},{}",
            s.index,
            h.n_h,
            h.eta,
            h.cd_k,
            h.l2,
            h.batch_size,
            h.init_width,
            h.epochs,
            h.n_eq,
            s.n_fail,
            s.n_timeout,
            s.p_fail,
            s.train_seconds,
            u8::from(s.index == best)
        );
    }
    out
}

fn grid(args: GridArgs) -> Result<(), Failure> {
    let mut config = Config::load_or_default(args.config.as_deref())?;
    if let Some(n) = args.validation_size {
        config.validation.size = n;
    }
    if let Some(n) = args.max_sweeps {
        config.validation.max_sweeps = n;
    }
    let dataset = load_dataset(&args.data)?;
    let mut points = config.grid_for(&dataset.lattice);
    if let Some(epochs) = args.epochs {
        points.iter_mut().for_each(|h| h.epochs = epochs);
    }
    let validation = generate_dataset(
        dataset.lattice,
        ErrorModel::new(dataset.p_err)?,
        config.validation.size,
        derive_seed(args.seed, Domain::Validation, 0),
    )?;
    info!(
        "grid search over {} points, {} validation chains",
        points.len(),
        validation.len()
    );
    let outcome = grid_search::<f64>(&dataset, &points, &validation.chains, args.seed, config.validation.max_sweeps)?;
    write_file(&args.report, &grid_report(&outcome.scores, outcome.best_index))?;
    let header = ModelHeader {
        lattice: dataset.lattice,
        n_h: outcome.hyper.n_h,
        p_err: dataset.p_err,
    };
    save_model(&header, &outcome.params, &args.out)?;
    let best = &outcome.scores[outcome.best_index];
    info!(
        "selected grid point {} (validation p_fail {:.4}), saved to {}",
        outcome.best_index,
        best.p_fail,
        args.out.display()
    );
    Ok(())
}

fn load_model_for(path: &Path, lattice: &Lattice) -> Result<RbmParamsF64, Failure> {
    let (header, params) = load_model::<f64>(path)?;
    if header.lattice != *lattice {
        return Err(rbm_decoder::Error::LatticeMismatch {
            expected: lattice.size(),
            found: header.lattice.size(),
        }
        .into());
    }
    Ok(params)
}

fn log_report(report: &EvalReport) {
    info!(
        "{} L={} p={}: p_fail {:.4} ± {:.4} ({} of {}, {} timeouts), classes {:?}",
        report.decoder,
        report.lattice_size,
        report.p_err,
        report.p_fail,
        report.std_error(),
        report.n_fail,
        report.m,
        report.n_timeout,
        report.class_counts
    );
}

fn neural_report(model: &Path, test: &TestSetArgs) -> Result<EvalReport, Failure> {
    let lattice = Lattice::new(test.size)?;
    let params = load_model_for(model, &lattice)?;
    let decoder = NeuralDecoder::new(lattice, params, test.n_eq, test.max_sweeps)?;
    Ok(bench::estimate_pfail(&decoder, test.p_err, test.count, test.seed)?)
}

fn eval(args: EvalArgs) -> Result<(), Failure> {
    let test = &args.test;
    let report = match args.decoder {
        DecoderArg::Mwpm => {
            let lattice = Lattice::new(test.size)?;
            bench::estimate_pfail(&MwpmDecoder::new(lattice), test.p_err, test.count, test.seed)?
        }
        DecoderArg::Neural => {
            let model = args
                .model
                .as_deref()
                .ok_or_else(|| Failure::Usage("--decoder neural requires --model".into()))?;
            neural_report(model, test)?
        }
    };
    log_report(&report);
    write_file(&test.out, &reports_to_csv(&[report]))
}

fn hist(args: HistArgs) -> Result<(), Failure> {
    let report = neural_report(&args.model, &args.test)?;
    let c = report.class_counts;
    println!("h0 {}\nZ1 {}\nZ2 {}\nZ1Z2 {}\ntimeout {}", c[0], c[1], c[2], c[3], report.n_timeout);
    write_file(&args.test.out, &reports_to_csv(&[report]))
}

fn compare(args: CompareArgs) -> Result<(), Failure> {
    let mut config = Config::load(&args.config)?.compare;
    if let Some(m) = args.count {
        config.m = m;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(n) = args.max_sweeps {
        config.max_sweeps = n;
    }
    let mut reports = Vec::new();
    let mut first_failure = None;
    for row in compare_decoders(&config) {
        match row {
            Ok(report) => {
                log_report(&report);
                reports.push(report);
            }
            Err(row) => {
                let model = match row.decoder {
                    DecoderKind::Neural => format!(" model={}", config.model_path(row.lattice_size, row.p_err).display()),
                    DecoderKind::Mwpm => String::new(),
                };
                error!(
                    "row failed: decoder={} L={} p_err={}{model}: {}",
                    row.decoder.name(),
                    row.lattice_size,
                    row.p_err,
                    row.error
                );
                first_failure.get_or_insert(Failure::from(row.error));
            }
        }
    }
    write_file(&args.out, &reports_to_csv(&reports))?;
    first_failure.map_or(Ok(()), Err)
}
