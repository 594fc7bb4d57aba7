mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hpsg::treebank::{read_conll, read_hpsg};
use tempfile::TempDir;

fn hpsg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpsg")).args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        fs::write(&p, text).unwrap();
        p
    }

    /// Converts the sample corpus and returns the head-annotated file.
    fn converted(&self) -> PathBuf {
        let out = self.path("sample.hpsg");
        let run = hpsg(&[
            "convert",
            "--constituents",
            s(&common::data_path("sample.mrg")),
            "--dependencies",
            s(&common::data_path("sample.conll")),
            "--out",
            s(&out),
        ]);
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
        out
    }

    /// The first `n` lines of the converted corpus.
    fn subset(&self, name: &str, n: usize) -> PathBuf {
        let text = fs::read_to_string(self.converted()).unwrap();
        let lines: Vec<&str> = text.lines().take(n).collect();
        self.write(name, &(lines.join("\n") + "\n"))
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn convert_prints_audit_and_head_annotation() {
    let ws = Workspace::new();
    let audit = ws.path("audit.txt");
    let out = ws.path("sample.hpsg");
    let run = hpsg(&[
        "convert",
        "--constituents",
        s(&common::data_path("sample.mrg")),
        "--dependencies",
        s(&common::data_path("sample.conll")),
        "--out",
        s(&out),
        "--audit",
        s(&audit),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let err = stderr(&run);
    assert!(err.contains("residual_phrases=1"), "{err}");
    assert!(err.contains("sentence 137 residual (2,7)"), "{err}");
    assert!(fs::read_to_string(&audit).unwrap().contains("reattached token 8"));
    let first = fs::read_to_string(&out).unwrap().lines().next().unwrap().to_string();
    assert!(first.contains("(NP[3] (NNP[1] Federal)"), "{first}");
}

#[test]
fn convert_rejects_misaligned_files() {
    let ws = Workspace::new();
    let c = ws.write("c.mrg", "(S (NP (NN paper)) (VP (VBZ sells)))\n");
    let d = ws.write("d.conll", "1\tpapers\t_\tNN\tNN\t_\t2\tnsubj\n2\tsells\t_\tVBZ\tVBZ\t_\t0\troot\n");
    let run = hpsg(&["convert", "--constituents", s(&c), "--dependencies", s(&d), "--out", s(&ws.path("o"))]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("sentence 1"), "{}", stderr(&run));
}

#[test]
fn oracle_scores_parse_back_to_gold() {
    let ws = Workspace::new();
    let gold = ws.converted();
    let scores = ws.path("oracle.scores");
    assert!(hpsg(&["scores", "--corpus", s(&gold), "--out", s(&scores)]).status.success());
    let pred = ws.path("pred.hpsg");
    let run = hpsg(&["parse", "--input", s(&gold), "--scores", s(&scores), "--lambda", "0.5", "--out", s(&pred)]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
    assert_eq!(fs::read_to_string(&pred).unwrap(), fs::read_to_string(&gold).unwrap());

    let eval = hpsg(&["eval", "--gold-hpsg", s(&gold), "--pred-hpsg", s(&pred)]);
    assert_eq!(eval.status.code(), Some(0));
    assert!(stdout(&eval).contains("f1=100.00") && stdout(&eval).contains("uas=100.00"));
}

#[test]
fn span_only_parse_matches_division_decoder() {
    let ws = Workspace::new();
    let gold = ws.subset("gold.hpsg", 60);
    let joint_scores = ws.path("joint.scores");
    let division_scores = ws.path("division.scores");
    assert!(hpsg(&["scores", "--corpus", s(&gold), "--out", s(&joint_scores)]).status.success());
    assert!(hpsg(&["scores", "--corpus", s(&gold), "--decoder", "division", "--out", s(&division_scores)])
        .status
        .success());
    let (a, b) = (ws.path("a.mrg"), ws.path("b.mrg"));
    let run = hpsg(&[
        "parse", "--input", s(&gold), "--scores", s(&joint_scores), "--lambda", "1", "--out", s(&ws.path("a.hpsg")),
        "--constituents-out", s(&a),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));
    let run = hpsg(&[
        "parse", "--input", s(&gold), "--scores", s(&division_scores), "--decoder", "division", "--out",
        s(&ws.path("b.hpsg")), "--constituents-out", s(&b),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn arc_only_parse_matches_eisner() {
    let ws = Workspace::new();
    let gold = ws.subset("gold.hpsg", 40);
    let scores = ws.path("s.scores");
    assert!(hpsg(&["scores", "--corpus", s(&gold), "--out", s(&scores)]).status.success());
    let (a, b) = (ws.path("a.conll"), ws.path("b.conll"));
    let run = hpsg(&[
        "parse", "--input", s(&gold), "--scores", s(&scores), "--lambda", "0", "--out", s(&ws.path("a.hpsg")),
        "--dependencies-out", s(&a),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));
    let run = hpsg(&["parse", "--input", s(&gold), "--scores", s(&scores), "--decoder", "eisner", "--out", s(&b)]);
    assert!(run.status.success(), "{}", stderr(&run));
    let heads = |p: &Path| -> Vec<Vec<usize>> {
        read_conll(&fs::read_to_string(p).unwrap()).unwrap().into_iter().map(|d| d.heads).collect()
    };
    assert_eq!(heads(&a), heads(&b));
}

#[test]
fn missing_score_block_fails_only_that_sentence() {
    let ws = Workspace::new();
    let gold = ws.subset("gold.hpsg", 3);
    let scores = ws.path("s.scores");
    assert!(hpsg(&["scores", "--corpus", s(&gold), "--out", s(&scores)]).status.success());
    // Drop the block of sentence 2.
    let text = fs::read_to_string(&scores).unwrap();
    let kept: Vec<&str> = text.split("\n\n").filter(|b| !b.starts_with("#sent 2 ")).collect();
    fs::write(&scores, kept.join("\n\n")).unwrap();
    let out = ws.path("p.hpsg");
    let run = hpsg(&["parse", "--input", s(&gold), "--scores", s(&scores), "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("sentence 2"), "{}", stderr(&run));
    assert_eq!(read_hpsg(&fs::read_to_string(&out).unwrap()).unwrap().len(), 2);
}

#[test]
fn training_is_deterministic_and_fits_one_sentence() {
    let ws = Workspace::new();
    let one = ws.subset("one.hpsg", 1);
    let (m1, m2, log) = (ws.path("m1"), ws.path("m2"), ws.path("log.tsv"));
    for model in [&m1, &m2] {
        let run = hpsg(&[
            "train", "--corpus", s(&one), "--dev", s(&one), "--out", s(model), "--epochs", "5", "--dim", "65536",
            "--seed", "7", "--log", s(&log),
        ]);
        assert!(run.status.success(), "{}", stderr(&run));
    }
    assert_eq!(fs::read(&m1).unwrap(), fs::read(&m2).unwrap());
    let log = fs::read_to_string(&log).unwrap();
    let last = log.lines().last().unwrap();
    let cols: Vec<&str> = last.split('\t').collect();
    assert_eq!(cols[3], "100.00", "{log}");

    let pred = ws.path("p.hpsg");
    assert!(hpsg(&["parse", "--input", s(&one), "--model", s(&m1), "--out", s(&pred)]).status.success());
    assert_eq!(fs::read_to_string(&pred).unwrap(), fs::read_to_string(&one).unwrap());
}

#[test]
fn objective_falls_on_fifty_sentences() {
    let ws = Workspace::new();
    let fifty = ws.subset("fifty.hpsg", 50);
    let log = ws.path("log.tsv");
    let run = hpsg(&[
        "train", "--corpus", s(&fifty), "--out", s(&ws.path("m")), "--epochs", "10", "--dim", "262144", "--log", s(&log),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));
    let objectives: Vec<f64> = fs::read_to_string(&log)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(objectives.len(), 11);
    assert!(objectives[10] < objectives[0], "{objectives:?}");
}

#[test]
fn configuration_errors_exit_with_one() {
    let ws = Workspace::new();
    let empty = ws.write("empty.hpsg", "");
    let run = hpsg(&["train", "--corpus", s(&empty), "--out", s(&ws.path("m"))]);
    assert_eq!(run.status.code(), Some(1), "{}", stderr(&run));

    let gold = ws.subset("g.hpsg", 2);
    let run = hpsg(&["parse", "--input", s(&gold), "--out", s(&ws.path("p"))]);
    assert_eq!(run.status.code(), Some(1));

    let config = ws.write("bad.toml", "lambda = 2.0\n");
    let run = hpsg(&["--config", s(&config), "check", "--trials", "1", "--n-cap", "3"]);
    assert_eq!(run.status.code(), Some(1), "{}", stderr(&run));
}

#[test]
fn flags_override_the_config_file() {
    let ws = Workspace::new();
    let config = ws.write("c.toml", "lambda = 2.0\nseed = 3\n");
    let run = hpsg(&["--config", s(&config), "check", "--trials", "5", "--n-cap", "3", "--lambda", "0.3"]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
}

#[test]
fn eval_reports_alignment_errors() {
    let ws = Workspace::new();
    let g = ws.write("g.mrg", "(S (NP (NN a)) (VP (VB b)))\n");
    let p = ws.write("p.mrg", "(S (NP (NN a)) (VP (VB c)))\n");
    let run = hpsg(&["eval", "--gold-trees", s(&g), "--pred-trees", s(&p)]);
    assert_eq!(run.status.code(), Some(2));
    let run = hpsg(&["eval", "--gold-trees", s(&g), "--pred-trees", s(&g)]);
    assert_eq!(run.status.code(), Some(0));
    assert!(stdout(&run).contains("f1=100.00"));
}

#[test]
fn check_passes_and_refuses_long_sentences() {
    let ws = Workspace::new();
    let gold = ws.subset("g.hpsg", 30);
    let run = hpsg(&["check", "--corpus", s(&gold), "--n-cap", "6", "--trials", "200"]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
    let out = stdout(&run);
    assert!(out.contains("brute_force_trials=1000"), "{out}");
    assert!(out.contains("oracle_exact=30") && out.contains("status=pass"), "{out}");

    let run = hpsg(&["check", "--n-cap", "9", "--trials", "1"]);
    assert_eq!(run.status.code(), Some(1));
    assert!(stderr(&run).contains("9"), "{}", stderr(&run));
}

#[test]
fn tagged_input_parses_with_a_model() {
    let ws = Workspace::new();
    let train = ws.subset("t.hpsg", 20);
    let model = ws.path("m");
    assert!(hpsg(&["train", "--corpus", s(&train), "--out", s(&model), "--epochs", "2", "--dim", "65536"])
        .status
        .success());
    let input = ws.write("in.tagged", "They/PRP sold/VBD shares/NNS ./.\n");
    let out = ws.path("o.hpsg");
    let run = hpsg(&["parse", "--input", s(&input), "--model", s(&model), "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
    let trees = read_hpsg(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(trees.len(), 1);
    assert_eq!(trees[0].len(), 4);

    // A joint model cannot drive the division decoder.
    let run = hpsg(&["parse", "--input", s(&input), "--model", s(&model), "--decoder", "division", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(1));
}
