//! Command-line interface: `hpsg convert | parse | train | eval | check | scores`.
//!
//! Exit statuses: 0 success, 1 usage or configuration error, 2 data error,
//! 3 failed check or violated invariant.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::decode::{
    brute_force, decode_division, decode_eisner, decode_joint, decode_joint_capped, DecodeConfig, DecoderKind,
    BRUTE_FORCE_CAP, DEFAULT_LEN_CAP,
};
use crate::division::{from_division, to_division};
use crate::error::{Error, Result};
use crate::eval::{attachment_scores, bracket_f1, format_report, EvalConfig, EvalReport};
use crate::hpsg::{fuse, project_constituents, project_dependencies, HeadAuditReport, HpsgTree};
use crate::scoring::{
    oracle_division_scores, oracle_scores, read_model, read_scores, train_linear_with, tree_score, write_model,
    write_scores, CategoryVocab, LinearModel, ScoreTable, TrainConfig, DEFAULT_DIM,
};
use crate::tree::{ConstituentTree, DependencyTree, Token};
use crate::treebank::{
    pair_treebanks, read_bracketed, read_conll, read_hpsg, write_bracketed, write_conll, write_hpsg,
};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(name = "hpsg", version, about = "Joint constituent and dependency parsing over head-annotated trees")]
struct Cli {
    /// TOML file with default values for the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for sentence-level parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// More log output (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fuse a bracketed treebank and a CoNLL treebank into head-annotated trees.
    Convert {
        #[arg(long)]
        constituents: PathBuf,
        #[arg(long)]
        dependencies: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Also write the full per-sentence audit here.
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Decode sentences with a score file or a trained model.
    Parse(ParseArgs),
    /// Train the linear scorer on head-annotated trees.
    Train(TrainArgs),
    /// Score predicted trees against gold trees.
    Eval(EvalArgs),
    /// Compare the joint decoder against exhaustive search and oracle scores.
    Check(CheckArgs),
    /// Write oracle or model score files for a head-annotated corpus.
    Scores {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, value_enum)]
        decoder: Option<DecoderArg>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum DecoderArg {
    Division,
    Joint,
    Eisner,
}

impl From<DecoderArg> for DecoderKind {
    fn from(d: DecoderArg) -> Self {
        match d {
            DecoderArg::Division => DecoderKind::Division,
            DecoderArg::Joint => DecoderKind::Joint,
            DecoderArg::Eisner => DecoderKind::Eisner,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Hpsg,
    Bracketed,
    Conll,
    /// One sentence per line of `word/TAG` tokens.
    Tagged,
}

#[derive(Args, Debug)]
struct ParseArgs {
    /// Sentences to parse; only forms and POS tags are used.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    #[arg(long, conflicts_with = "model")]
    scores: Option<PathBuf>,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_enum)]
    decoder: Option<DecoderArg>,
    #[arg(long)]
    len_cap: Option<usize>,
    /// Head-annotated trees, or CoNLL for the eisner decoder.
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long)]
    constituents_out: Option<PathBuf>,
    #[arg(long)]
    dependencies_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// Head-annotated training trees.
    #[arg(long)]
    corpus: PathBuf,
    /// Head-annotated development trees; the best epoch on them is kept.
    #[arg(long)]
    dev: Option<PathBuf>,
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    decoder: Option<DecoderArg>,
    /// Number of hashed feature weights (a power of two).
    #[arg(long)]
    dim: Option<usize>,
    /// Keep the last weights instead of their running average.
    #[arg(long)]
    no_average: bool,
    /// Tab-separated per-epoch log.
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long)]
    punct_set: Option<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    gold_trees: Option<PathBuf>,
    #[arg(long)]
    pred_trees: Option<PathBuf>,
    #[arg(long)]
    gold_deps: Option<PathBuf>,
    #[arg(long)]
    pred_deps: Option<PathBuf>,
    /// Head-annotated gold trees; supplies both views.
    #[arg(long)]
    gold_hpsg: Option<PathBuf>,
    #[arg(long)]
    pred_hpsg: Option<PathBuf>,
    #[arg(long)]
    punct_set: Option<String>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Head-annotated corpus for the oracle decoding suite.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Largest sentence length for the exhaustive comparison.
    #[arg(long, default_value_t = 6)]
    n_cap: usize,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    lambda: Option<f64>,
}

/// Values a `--config` file may provide.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    lambda: Option<f64>,
    decoder: Option<DecoderArg>,
    threads: Option<usize>,
    seed: Option<u64>,
    punct_set: Option<String>,
    len_cap: Option<usize>,
    epochs: Option<usize>,
    step: Option<f64>,
    dim: Option<usize>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => toml::from_str(&read_text(p)?).map_err(|e| Error::Config(format!("{}: {e}", p.display()))),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::TooLong { .. } => 1,
        Error::Contract(_) => 3,
        _ => 2,
    }
}

/// Runs the CLI on the process arguments and returns the exit status.
pub fn main() -> i32 {
    run(std::env::args_os())
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let file = load_config(cli.config.as_deref())?;
    let threads = cli.threads.or(file.threads).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Convert {
            constituents,
            dependencies,
            out,
            audit,
        } => cmd_convert(&constituents, &dependencies, &out, audit.as_deref()),
        Command::Parse(args) => cmd_parse(args, &file),
        Command::Train(args) => cmd_train(args, &file),
        Command::Eval(args) => cmd_eval(args, &file),
        Command::Check(args) => cmd_check(args, &file),
        Command::Scores {
            corpus,
            model,
            decoder,
            out,
        } => cmd_scores(&corpus, model.as_deref(), decoder.or(file.decoder), &out),
    })
}

fn lambda_of(flag: Option<f64>, file: &FileConfig) -> Result<f64> {
    let lambda = flag.or(file.lambda).unwrap_or(0.5);
    crate::scoring::check_lambda(lambda)?;
    Ok(lambda)
}

fn eval_config(flag: Option<&str>, file: &FileConfig) -> EvalConfig {
    match flag.or(file.punct_set.as_deref()) {
        Some(list) => EvalConfig::with_punct(list),
        None => EvalConfig::default(),
    }
}

/// Fuses the two treebanks sentence by sentence.
pub fn convert(c: Vec<ConstituentTree>, d: Vec<DependencyTree>) -> Result<Vec<(HpsgTree, HeadAuditReport)>> {
    pair_treebanks(c, d)?
        .iter()
        .enumerate()
        .map(|(offset, (c, d))| {
            let (tree, mut report) = fuse(c, d).map_err(|e| match e {
                Error::InvalidTree(m) => Error::structure(offset + 1, m),
                other => other,
            })?;
            report.sentence = offset + 1;
            let check = crate::hpsg::validate(&tree);
            report.residual += check.residual;
            report.offending.extend(check.offending);
            Ok((tree, report))
        })
        .collect()
}

fn audit_text(reports: &[HeadAuditReport]) -> (String, String) {
    let multi: usize = reports.iter().map(|r| r.multi_head).sum();
    let residual: usize = reports.iter().map(|r| r.residual).sum();
    let reattached: usize = reports.iter().map(|r| r.reattached.len()).sum();
    let clean = reports.iter().filter(|r| r.is_clean()).count();
    let with_residual = reports.iter().filter(|r| r.residual > 0).count();
    let summary = format!(
        "sentences={}\nmulti_head_phrases={multi}\nresidual_phrases={residual}\nsentences_with_residual={with_residual}\nreattached_arcs={reattached}\nclean_sentences={clean}\n",
        reports.len()
    );
    let mut detail = String::new();
    for r in reports {
        for span in &r.offending {
            detail.push_str(&format!("sentence {} residual {span}\n", r.sentence));
        }
        for token in &r.reattached {
            detail.push_str(&format!("sentence {} reattached token {token}\n", r.sentence));
        }
    }
    (summary, detail)
}

fn cmd_convert(constituents: &Path, dependencies: &Path, out: &Path, audit: Option<&Path>) -> Result<i32> {
    let read = read_bracketed(&read_text(constituents)?)?;
    for skip in &read.skipped {
        eprintln!("skipped tree {} (line {}): {}", skip.tree, skip.line, skip.reason);
    }
    let deps = read_conll(&read_text(dependencies)?)?;
    let fused = convert(read.trees, deps)?;
    let (trees, reports): (Vec<_>, Vec<_>) = fused.into_iter().unzip();
    write_text(out, &write_hpsg(&trees))?;
    let (summary, detail) = audit_text(&reports);
    eprint!("{summary}");
    for line in detail.lines().filter(|l| l.contains("residual")) {
        eprintln!("{line}");
    }
    if let Some(path) = audit {
        write_text(path, &format!("{summary}{detail}"))?;
    }
    Ok(0)
}

fn read_tokens(path: &Path, format: Option<InputFormat>) -> Result<Vec<Vec<Token>>> {
    let text = read_text(path)?;
    let format = format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("hpsg") => InputFormat::Hpsg,
        Some("conll" | "conllx" | "conllu") => InputFormat::Conll,
        Some("tagged" | "pos") => InputFormat::Tagged,
        _ => InputFormat::Bracketed,
    });
    Ok(match format {
        InputFormat::Hpsg => read_hpsg(&text)?.into_iter().map(|t| t.tokens).collect(),
        InputFormat::Bracketed => read_bracketed(&text)?.trees.into_iter().map(|t| t.tokens).collect(),
        InputFormat::Conll => read_conll(&text)?.into_iter().map(|t| t.tokens).collect(),
        InputFormat::Tagged => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(offset, line)| {
                line.split_whitespace()
                    .enumerate()
                    .map(|(i, item)| {
                        let (form, pos) = item
                            .rsplit_once('/')
                            .filter(|(f, p)| !f.is_empty() && !p.is_empty())
                            .ok_or_else(|| Error::parse(offset + 1, format!("token '{item}' is not word/TAG")))?;
                        Ok(Token::new(i + 1, form, pos))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?,
    })
}

enum Source {
    Scores(Vec<Option<ScoreTable>>),
    Model(Box<LinearModel>),
}

enum Parsed {
    Tree(HpsgTree),
    Deps(DependencyTree),
}

fn parse_one(
    tokens: &[Token],
    table: &ScoreTable,
    vocab: &CategoryVocab,
    decoder: DecoderKind,
    cfg: &DecodeConfig,
    len_cap: usize,
) -> Result<Parsed> {
    match decoder {
        DecoderKind::Joint => Ok(Parsed::Tree(decode_joint_capped(tokens, table, vocab, cfg, len_cap)?.0)),
        DecoderKind::Division => {
            let (tree, _) = decode_division(tokens, table, vocab)?;
            let (tree, issues) = from_division(&tree)?;
            for issue in issues {
                log::warn!("{}: {}", issue.span, issue.message);
            }
            Ok(Parsed::Tree(tree))
        }
        DecoderKind::Eisner => Ok(Parsed::Deps(decode_eisner(tokens, table)?.0)),
    }
}

fn cmd_parse(args: ParseArgs, file: &FileConfig) -> Result<i32> {
    let lambda = lambda_of(args.lambda, file)?;
    let len_cap = args.len_cap.or(file.len_cap).unwrap_or(DEFAULT_LEN_CAP);
    let sentences = read_tokens(&args.input, args.format)?;
    let (source, vocab, decoder) = match (&args.scores, &args.model) {
        (Some(path), None) => {
            let decoder: DecoderKind = args.decoder.or(file.decoder).unwrap_or(DecoderArg::Joint).into();
            let mut vocab = match decoder {
                DecoderKind::Division => CategoryVocab::division(),
                _ => CategoryVocab::new(),
            };
            let blocks = read_scores(&read_text(path)?, &mut vocab)?;
            let mut tables: Vec<Option<ScoreTable>> = vec![None; sentences.len()];
            for (ordinal, table) in blocks {
                match tables.get_mut(ordinal.wrapping_sub(1)) {
                    Some(slot) => *slot = Some(table.widen(vocab.len())),
                    None => log::warn!("score block for sentence {ordinal} has no matching sentence"),
                }
            }
            (Source::Scores(tables), vocab, decoder)
        }
        (None, Some(path)) => {
            let model = read_model(&read_text(path)?)?;
            let decoder = args.decoder.or(file.decoder).map(DecoderKind::from).unwrap_or(model.decoder);
            if (decoder == DecoderKind::Division) != (model.decoder == DecoderKind::Division) {
                return Err(Error::Config(format!(
                    "a model trained for the {} decoder cannot drive the {decoder} decoder",
                    model.decoder
                )));
            }
            let vocab = model.vocab.clone();
            (Source::Model(Box::new(model)), vocab, decoder)
        }
        _ => return Err(Error::Config("parse needs exactly one of --scores or --model".to_string())),
    };
    let cfg = DecodeConfig::with_lambda(lambda)?;
    let results: Vec<Result<Parsed>> = sentences
        .par_iter()
        .enumerate()
        .map(|(offset, tokens)| {
            let owned;
            let table = match &source {
                Source::Scores(tables) => match &tables[offset] {
                    Some(t) => t,
                    None => return Err(Error::structure(offset + 1, "no score block")),
                },
                Source::Model(model) => {
                    owned = model.score_table(tokens);
                    &owned
                }
            };
            if table.len() != tokens.len() {
                return Err(Error::structure(
                    offset + 1,
                    format!("score block has {} tokens, sentence has {}", table.len(), tokens.len()),
                ));
            }
            parse_one(tokens, table, &vocab, decoder, &cfg, len_cap)
        })
        .collect();

    let mut trees = Vec::new();
    let mut deps = Vec::new();
    let mut failures = 0;
    for (offset, result) in results.into_iter().enumerate() {
        match result {
            Ok(Parsed::Tree(t)) => trees.push(t),
            Ok(Parsed::Deps(d)) => deps.push(d),
            Err(e) => {
                failures += 1;
                eprintln!("sentence {}: failed: {e}", offset + 1);
            }
        }
    }
    if decoder == DecoderKind::Eisner {
        write_text(&args.out, &write_conll(&deps))?;
        if let Some(path) = &args.dependencies_out {
            write_text(path, &write_conll(&deps))?;
        }
    } else {
        write_text(&args.out, &write_hpsg(&trees))?;
        if let Some(path) = &args.constituents_out {
            let projected = trees.iter().map(project_constituents).collect::<Result<Vec<_>>>()?;
            write_text(path, &write_bracketed(&projected))?;
        }
        if let Some(path) = &args.dependencies_out {
            let projected = trees.iter().map(project_dependencies).collect::<Result<Vec<_>>>()?;
            write_text(path, &write_conll(&projected))?;
        }
    }
    eprintln!("parsed={} failed={failures}", sentences.len() - failures);
    Ok(if failures > 0 { 2 } else { 0 })
}

/// F1 and UAS of `model` on `dev`, decoded with the model's own decoder.
pub fn evaluate_model(model: &LinearModel, dev: &[HpsgTree], lambda: f64, punct: &EvalConfig) -> Result<EvalReport> {
    let cfg = DecodeConfig::with_lambda(lambda)?;
    let predicted = dev
        .par_iter()
        .map(|gold| match model.decoder {
            DecoderKind::Division => {
                let table = model.score_spans(&gold.tokens);
                let (tree, _) = decode_division(&gold.tokens, &table, &model.vocab)?;
                Ok(from_division(&tree)?.0)
            }
            _ => {
                let table = model.score_table(&gold.tokens);
                Ok(decode_joint_capped(&gold.tokens, &table, &model.vocab, &cfg, DEFAULT_LEN_CAP)?.0)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    evaluate_trees(dev, &predicted, punct)
}

/// Bracket and attachment scores of predicted against gold head-annotated trees.
pub fn evaluate_trees(gold: &[HpsgTree], pred: &[HpsgTree], punct: &EvalConfig) -> Result<EvalReport> {
    let views = |trees: &[HpsgTree]| -> Result<(Vec<ConstituentTree>, Vec<DependencyTree>)> {
        let c = trees.iter().map(project_constituents).collect::<Result<Vec<_>>>()?;
        let d = trees.iter().map(project_dependencies).collect::<Result<Vec<_>>>()?;
        Ok((c, d))
    };
    let (gc, gd) = views(gold)?;
    let (pc, pd) = views(pred)?;
    Ok(EvalReport {
        brackets: Some(bracket_f1(&gc, &pc, punct)?),
        attachment: Some(attachment_scores(&gd, &pd, punct)?),
    })
}

fn cmd_train(args: TrainArgs, file: &FileConfig) -> Result<i32> {
    let config = TrainConfig {
        epochs: args.epochs.or(file.epochs).unwrap_or(10),
        step: args.step.or(file.step).unwrap_or(0.1),
        lambda: lambda_of(args.lambda, file)?,
        averaged: !args.no_average,
        seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        dim: args.dim.or(file.dim).unwrap_or(DEFAULT_DIM),
        decoder: args.decoder.or(file.decoder).unwrap_or(DecoderArg::Joint).into(),
    };
    let corpus = read_hpsg(&read_text(&args.corpus)?)?;
    let dev = match &args.dev {
        Some(path) => Some(read_hpsg(&read_text(path)?)?),
        None => None,
    };
    let punct = eval_config(args.punct_set.as_deref(), file);
    let mut log_lines = vec!["epoch\tobjective\tupdates\tdev_f1\tdev_uas".to_string()];
    let mut best: Option<(f64, LinearModel)> = None;
    let mut failure = None;
    let (last, _) = train_linear_with(&corpus, &config, |stats, model| {
        let (mut f1, mut uas) = (f64::NAN, f64::NAN);
        if let Some(dev) = &dev {
            match evaluate_model(model, dev, config.lambda, &punct) {
                Ok(report) => {
                    f1 = report.brackets.as_ref().map_or(0.0, |b| b.f1);
                    uas = report.attachment.as_ref().map_or(0.0, |a| a.uas);
                    let key = if config.decoder == DecoderKind::Division { f1 } else { f1 + uas };
                    if stats.epoch > 0 && best.as_ref().is_none_or(|(b, _)| key > *b) {
                        best = Some((key, model.clone()));
                    }
                }
                Err(e) => failure = Some(e),
            }
        }
        eprintln!(
            "epoch {} objective {:.6} updates {} dev_f1 {f1:.2} dev_uas {uas:.2}",
            stats.epoch, stats.objective, stats.updates
        );
        log_lines.push(format!("{}\t{:.6}\t{}\t{f1:.2}\t{uas:.2}", stats.epoch, stats.objective, stats.updates));
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let model = best.map(|(_, m)| m).unwrap_or(last);
    write_text(&args.out, &write_model(&model))?;
    if let Some(path) = &args.log {
        write_text(path, &(log_lines.join("\n") + "\n"))?;
    }
    Ok(0)
}

fn cmd_eval(args: EvalArgs, file: &FileConfig) -> Result<i32> {
    let punct = eval_config(args.punct_set.as_deref(), file);
    let mut report = EvalReport::default();
    if let (Some(g), Some(p)) = (&args.gold_hpsg, &args.pred_hpsg) {
        let gold = read_hpsg(&read_text(g)?)?;
        let pred = read_hpsg(&read_text(p)?)?;
        report = evaluate_trees(&gold, &pred, &punct)?;
    }
    if let (Some(g), Some(p)) = (&args.gold_trees, &args.pred_trees) {
        let gold = read_bracketed(&read_text(g)?)?.trees;
        let pred = read_bracketed(&read_text(p)?)?.trees;
        report.brackets = Some(bracket_f1(&gold, &pred, &punct)?);
    }
    if let (Some(g), Some(p)) = (&args.gold_deps, &args.pred_deps) {
        let gold = read_conll(&read_text(g)?)?;
        let pred = read_conll(&read_text(p)?)?;
        report.attachment = Some(attachment_scores(&gold, &pred, &punct)?);
    }
    if report.brackets.is_none() && report.attachment.is_none() {
        return Err(Error::Config(
            "eval needs a gold/pred pair of trees, dependencies or head-annotated trees".to_string(),
        ));
    }
    print!("{}", format_report(&report));
    Ok(0)
}

/// Categories used for the random tables of the exhaustive check.
const CHECK_LABELS: [&str; 5] = ["<E>", "#", "NP", "VP", "S"];

/// Result of comparing the joint decoder with exhaustive search.
#[derive(Clone, Debug, Default)]
pub struct BruteCheck {
    pub trials: usize,
    pub max_discrepancy: f64,
    /// `(n, trial, joint score, exhaustive score, table)` for each failure.
    pub failures: Vec<(usize, usize, f64, f64, ScoreTable)>,
}

/// Joint decoding against exhaustive search on uniform tables in [-1, 1).
/// Tables are drawn from a generator seeded with `seed`.
pub fn brute_force_check(max_n: usize, trials: usize, seed: u64, lambda: f64) -> Result<BruteCheck> {
    if max_n > BRUTE_FORCE_CAP {
        return Err(Error::TooLong {
            n: max_n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let vocab = CategoryVocab::from_names(CHECK_LABELS);
    let cfg = DecodeConfig::with_lambda(lambda)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BruteCheck::default();
    for n in 2..=max_n {
        let tokens: Vec<Token> = (1..=n).map(|i| Token::new(i, format!("w{i}"), "X")).collect();
        for trial in 0..trials {
            let table = ScoreTable::uniform(n, vocab.len(), -1.0, 1.0, &mut rng);
            let (tree, joint) = decode_joint(&tokens, &table, &vocab, &cfg)?;
            let (_, exhaustive) = brute_force(&tokens, &table, &vocab, &cfg)?;
            let recomputed = tree_score(&tree, &table, &vocab, lambda)?;
            let gap = (joint - exhaustive).abs().max((joint - recomputed).abs());
            out.trials += 1;
            out.max_discrepancy = out.max_discrepancy.max(gap);
            if gap > 1e-9 {
                out.failures.push((n, trial, joint, exhaustive, table));
            }
        }
    }
    Ok(out)
}

/// Sentences whose oracle decode differs from the gold tree.
pub fn oracle_check(corpus: &[HpsgTree], lambda: f64) -> Result<Vec<usize>> {
    let vocab = CategoryVocab::for_hpsg(corpus);
    let cfg = DecodeConfig::with_lambda(lambda)?;
    let misses = corpus
        .par_iter()
        .enumerate()
        .map(|(offset, gold)| {
            let table = oracle_scores(gold, &vocab)?;
            let (tree, _) = decode_joint(&gold.tokens, &table, &vocab, &cfg)?;
            Ok((!tree.same_structure(gold)).then_some(offset + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(misses.into_iter().flatten().collect())
}

fn cmd_check(args: CheckArgs, file: &FileConfig) -> Result<i32> {
    let seed = args.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let lambda = lambda_of(args.lambda, file)?;
    let check = brute_force_check(args.n_cap, args.trials, seed, lambda)?;
    println!("brute_force_trials={}", check.trials);
    println!("max_discrepancy={:e}", check.max_discrepancy);
    let mut failed = !check.failures.is_empty();
    let vocab = CategoryVocab::from_names(CHECK_LABELS);
    for (n, trial, joint, exhaustive, table) in &check.failures {
        eprintln!("mismatch: seed {seed} n {n} trial {trial}: joint {joint} exhaustive {exhaustive}");
        eprint!("{}", write_scores([(1, table)], &vocab));
    }
    if let Some(path) = &args.corpus {
        let corpus = read_hpsg(&read_text(path)?)?;
        let misses = oracle_check(&corpus, lambda)?;
        println!("oracle_sentences={}", corpus.len());
        println!("oracle_exact={}", corpus.len() - misses.len());
        for s in &misses {
            eprintln!("oracle mismatch at sentence {s}");
        }
        failed |= !misses.is_empty();
    }
    println!("status={}", if failed { "fail" } else { "pass" });
    Ok(if failed { 3 } else { 0 })
}

fn cmd_scores(corpus: &Path, model: Option<&Path>, decoder: Option<DecoderArg>, out: &Path) -> Result<i32> {
    let trees = read_hpsg(&read_text(corpus)?)?;
    let decoder: DecoderKind = decoder.unwrap_or(DecoderArg::Joint).into();
    let (tables, vocab) = match model {
        Some(path) => {
            let model = read_model(&read_text(path)?)?;
            let tables: Vec<ScoreTable> = trees.par_iter().map(|t| model.score_table(&t.tokens)).collect();
            (tables, model.vocab)
        }
        None if decoder == DecoderKind::Division => {
            let divisions = trees.iter().map(to_division).collect::<Result<Vec<_>>>()?;
            let vocab = CategoryVocab::for_division(&divisions);
            let tables = divisions
                .iter()
                .map(|d| oracle_division_scores(d, &vocab))
                .collect::<Result<Vec<_>>>()?;
            (tables, vocab)
        }
        None => {
            let vocab = CategoryVocab::for_hpsg(&trees);
            let tables = trees.iter().map(|t| oracle_scores(t, &vocab)).collect::<Result<Vec<_>>>()?;
            (tables, vocab)
        }
    };
    write_text(out, &write_scores(tables.iter().enumerate().map(|(i, t)| (i + 1, t)), &vocab))?;
    Ok(0)
}
