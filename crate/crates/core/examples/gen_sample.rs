//! Writes the bundled sample treebank: `data/sample.mrg` (bracketed, with
//! function tags and empty elements) and `data/sample.conll` (projective
//! dependencies over the same words).
//!
//! Run with `cargo run --example gen_sample`. Output is deterministic.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SENTENCES: usize = 260;
const MAX_LEN: usize = 28;
const SEED: u64 = 20_201;

/// The figure sentence with both conjuncts attached to the verb, and one
/// sentence whose preposition hangs off a non-head word of its sister.
const FIXED: [(usize, &str, &str); 2] = [
    (
        1,
        "(S (NP-SBJ (NNP Federal) (NNP Paper) (NNP Board)) (VP (VBZ sells) (NP (NN paper) (CC and) (NN wood) (NNS products))) (. .))",
        "Federal NNP 3 nn|Paper NNP 3 nn|Board NNP 4 nsubj|sells VBZ 0 root|paper NN 4 dobj|and CC 5 cc|wood NN 8 nn|products NNS 4 conj|. . 4 punct",
    ),
    (
        137,
        "(S (NP-SBJ (PRP They)) (VP (VBD bought) (NP (NNS stocks) (JJ available)) (PP-MNR (IN at) (NP (DT a) (NN discount)))) (. .))",
        "They PRP 2 nsubj|bought VBD 0 root|stocks NNS 2 dobj|available JJ 3 amod|at IN 4 prep|a DT 7 det|discount NN 5 pobj|. . 2 punct",
    ),
];

struct Node {
    label: String,
    rel: &'static str,
    form: Option<String>,
    kids: Vec<Node>,
    head: usize,
    /// `(dependent kid, governing kid)` pairs overriding attachment to the head kid.
    attach: Vec<(usize, usize)>,
}

fn word(pos: &str, form: &str, rel: &'static str) -> Node {
    Node {
        label: pos.to_string(),
        rel,
        form: Some(form.to_string()),
        kids: Vec::new(),
        head: 0,
        attach: Vec::new(),
    }
}

fn trace(form: &str) -> Node {
    word("-NONE-", form, "")
}

fn phrase(label: &str, rel: &'static str, head: usize, kids: Vec<Node>) -> Node {
    Node {
        label: label.to_string(),
        rel,
        form: None,
        kids,
        head,
        attach: Vec::new(),
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, items: &[&'a str]) -> &'a str {
    items.choose(rng).unwrap()
}

const DET: [&str; 6] = ["the", "a", "this", "that", "some", "every"];
const NOUN: [&str; 36] = [
    "company", "market", "investor", "bank", "price", "share", "stock", "plan", "deal", "report", "unit",
    "analyst", "quarter", "firm", "board", "program", "contract", "offer", "group", "industry", "official",
    "trader", "bond", "fund", "rate", "loss", "profit", "sale", "issue", "court", "agency", "network",
    "product", "brand", "factory", "manager",
];
const PLURAL: [&str; 16] = [
    "shares", "prices", "investors", "banks", "stocks", "bonds", "funds", "rates", "losses", "profits",
    "sales", "products", "workers", "buyers", "sellers", "analysts",
];
const PROPER: [&str; 18] = [
    "Federal", "Paper", "Board", "General", "Motors", "Texas", "Air", "Boston", "National", "Trust",
    "Pacific", "Steel", "Japan", "Digital", "Equipment", "Wall", "Street", "Chicago",
];
const ADJ: [&str; 14] = [
    "new", "large", "small", "strong", "weak", "major", "recent", "foreign", "big", "federal", "high", "low",
    "early", "final",
];
const ADV: [&str; 6] = ["very", "quite", "relatively", "extremely", "too", "so"];
const TRANS: [(&str, &str); 12] = [
    ("VBD", "bought"),
    ("VBD", "sold"),
    ("VBZ", "sells"),
    ("VBD", "acquired"),
    ("VBZ", "owns"),
    ("VBD", "reported"),
    ("VBD", "approved"),
    ("VBZ", "expects"),
    ("VBD", "rejected"),
    ("VBD", "raised"),
    ("VBZ", "holds"),
    ("VBD", "signed"),
];
const INTRANS: [(&str, &str); 6] = [
    ("VBD", "rose"),
    ("VBD", "fell"),
    ("VBZ", "declines"),
    ("VBD", "gained"),
    ("VBD", "slipped"),
    ("VBZ", "trades"),
];
const BASE: [&str; 6] = ["buy", "sell", "approve", "raise", "sign", "acquire"];
const PARTICIPLE: [&str; 5] = ["acquired", "approved", "sold", "rejected", "signed"];
const SAY: [(&str, &str); 3] = [("VBD", "said"), ("VBZ", "believes"), ("VBD", "noted")];
const PREP: [&str; 7] = ["in", "of", "for", "with", "from", "on", "by"];
const TIME: [&str; 4] = ["yesterday", "today", "recently", "later"];
const PRON: [&str; 4] = ["It", "They", "He", "She"];
const NUM: [&str; 6] = ["20", "100", "3.5", "two", "15", "million"];
const MODAL: [&str; 4] = ["will", "could", "may", "would"];
const COPULA: [(&str, &str); 2] = [("VBZ", "is"), ("VBD", "was")];

struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn noun(&mut self, rel: &'static str) -> Node {
        if self.chance(0.3) {
            word("NNS", pick(&mut self.rng, &PLURAL), rel)
        } else {
            word("NN", pick(&mut self.rng, &NOUN), rel)
        }
    }

    fn adjective(&mut self) -> Vec<Node> {
        let adj = pick(&mut self.rng, &ADJ);
        if self.chance(0.25) {
            vec![word("RB", pick(&mut self.rng, &ADV), "advmod"), word("JJ", adj, "amod")]
        } else {
            vec![word("JJ", adj, "amod")]
        }
    }

    /// Flat base noun phrase; premodifying adverbs attach to their adjective.
    fn base_np(&mut self, rel: &'static str, label: &str) -> Node {
        let roll = self.rng.gen_range(0..10);
        let mut kids = Vec::new();
        let mut attach = Vec::new();
        match roll {
            0 => return phrase(label, rel, 0, vec![word("PRP", &pick(&mut self.rng, &PRON).to_lowercase(), rel)]),
            1 | 2 => {
                let count = self.rng.gen_range(1..=3);
                let start = self.rng.gen_range(0..PROPER.len() - count);
                for name in &PROPER[start..start + count] {
                    kids.push(word("NNP", name, "nn"));
                }
                return phrase(label, rel, count - 1, kids);
            }
            3 => {
                kids.push(word("CD", pick(&mut self.rng, &NUM), "num"));
                kids.push(word("NNS", pick(&mut self.rng, &PLURAL), rel));
                return phrase(label, rel, 1, kids);
            }
            4 => {
                // Flat coordination: the second conjunct's modifier hangs off it.
                kids.push(word("NN", pick(&mut self.rng, &NOUN), rel));
                kids.push(word("CC", pick(&mut self.rng, &["and", "or"]), "cc"));
                kids.push(word("NN", pick(&mut self.rng, &NOUN), "nn"));
                kids.push(word("NNS", pick(&mut self.rng, &PLURAL), "conj"));
                attach.push((2, 3));
                let mut np = phrase(label, rel, 0, kids);
                np.attach = attach;
                return np;
            }
            _ => {
                kids.push(word("DT", pick(&mut self.rng, &DET), "det"));
                if self.chance(0.45) {
                    let adj = self.adjective();
                    if adj.len() == 2 {
                        attach.push((kids.len(), kids.len() + 1));
                    }
                    kids.extend(adj);
                }
                if self.chance(0.25) {
                    kids.push(word("NN", pick(&mut self.rng, &NOUN), "nn"));
                }
            }
        }
        let head = kids.len();
        kids.push(self.noun(rel));
        let mut np = phrase(label, rel, head, kids);
        np.attach = attach;
        np
    }

    fn np(&mut self, rel: &'static str, label: &str, depth: usize) -> Node {
        let roll = if depth >= 3 { 0 } else { self.rng.gen_range(0..10) };
        match roll {
            6 | 7 => {
                let inner = self.base_np(rel, "NP");
                let pp = self.pp(depth + 1, "");
                phrase(label, rel, 0, vec![inner, pp])
            }
            8 => {
                let left = self.base_np(rel, "NP");
                let cc = word("CC", "and", "cc");
                let right = self.base_np("conj", "NP");
                phrase(label, rel, 0, vec![left, cc, right])
            }
            9 => {
                // Relative clause with a subject trace.
                let inner = self.base_np(rel, "NP");
                let which = phrase("WHNP-1", "nsubj", 0, vec![word("WDT", pick(&mut self.rng, &["that", "which"]), "nsubj")]);
                let subject = phrase("NP-SBJ", "", 0, vec![trace("*T*-1")]);
                let vp = self.vp(depth + 2);
                let s = phrase("S", "", 1, vec![subject, vp]);
                let sbar = phrase("SBAR", "rcmod", 1, vec![which, s]);
                phrase(label, rel, 0, vec![inner, sbar])
            }
            _ => self.base_np(rel, label),
        }
    }

    fn pp(&mut self, depth: usize, tag: &str) -> Node {
        let prep = pick(&mut self.rng, &PREP);
        let object = self.np("pobj", "NP", depth + 1);
        phrase(&format!("PP{tag}"), "prep", 0, vec![word("IN", prep, "prep"), object])
    }

    fn vp(&mut self, depth: usize) -> Node {
        let roll = if depth >= 3 { self.rng.gen_range(0..3) } else { self.rng.gen_range(0..10) };
        match roll {
            0 | 1 | 5 => {
                let (pos, verb) = *TRANS.choose(&mut self.rng).unwrap();
                let mut kids = vec![word(pos, verb, ""), self.np("dobj", "NP", depth + 1)];
                if depth < 3 && self.chance(0.3) {
                    let tag = pick(&mut self.rng, &["", "-LOC", "-TMP"]);
                    kids.push(self.pp(depth + 1, tag));
                }
                phrase("VP", "", 0, kids)
            }
            2 => {
                let (pos, verb) = *INTRANS.choose(&mut self.rng).unwrap();
                let mut kids = vec![word(pos, verb, "")];
                if self.chance(0.5) {
                    kids.push(phrase("ADVP-TMP", "advmod", 0, vec![word("RB", pick(&mut self.rng, &TIME), "advmod")]));
                }
                phrase("VP", "", 0, kids)
            }
            3 => {
                let inner = phrase(
                    "VP",
                    "",
                    0,
                    vec![word("VB", pick(&mut self.rng, &BASE), ""), self.np("dobj", "NP", depth + 1)],
                );
                phrase("VP", "", 1, vec![word("MD", pick(&mut self.rng, &MODAL), "aux"), inner])
            }
            4 => {
                // Passive with an object trace.
                let mut inner = vec![word("VBN", pick(&mut self.rng, &PARTICIPLE), ""), phrase("NP", "", 0, vec![trace("*-1")])];
                if self.chance(0.6) {
                    let agent = self.np("pobj", "NP", depth + 1);
                    inner.push(phrase("PP", "prep", 0, vec![word("IN", "by", "prep"), agent]));
                }
                let (pos, aux) = *COPULA.choose(&mut self.rng).unwrap();
                phrase("VP", "", 1, vec![word(pos, aux, "auxpass"), phrase("VP", "", 0, inner)])
            }
            6 | 7 => {
                let (pos, verb) = *SAY.choose(&mut self.rng).unwrap();
                let clause = self.s(depth + 2, false);
                let sbar = phrase("SBAR", "ccomp", 1, vec![word("IN", "that", "mark"), clause]);
                phrase("VP", "", 0, vec![word(pos, verb, ""), sbar])
            }
            _ => {
                let (pos, cop) = *COPULA.choose(&mut self.rng).unwrap();
                let adj = self.adjective();
                let head = adj.len() - 1;
                let mut adjp = phrase("ADJP-PRD", "acomp", head, adj);
                adjp.kids[head].rel = "acomp";
                phrase("VP", "", 0, vec![word(pos, cop, ""), adjp])
            }
        }
    }

    fn s(&mut self, depth: usize, top: bool) -> Node {
        let mut kids = Vec::new();
        if top && self.chance(0.15) {
            kids.push(self.pp(depth + 1, "-TMP"));
            kids.push(word(",", ",", "punct"));
        }
        let vp = self.vp(depth + 1);
        let passive = vp.kids.first().is_some_and(|k| k.rel == "auxpass");
        let subject_label = if passive { "NP-SBJ-1" } else { "NP-SBJ" };
        kids.push(self.np(if passive { "nsubjpass" } else { "nsubj" }, subject_label, depth + 1));
        let head = kids.len();
        kids.push(vp);
        if top {
            kids.push(word(".", ".", "punct"));
        }
        phrase("S", "", head, kids)
    }
}

/// Lexical head token of `node`, numbering tokens from `next`; fills
/// `heads` and `rels` for every token below.
fn number(node: &Node, next: &mut usize, words: &mut Vec<(String, String)>, heads: &mut Vec<usize>, rels: &mut Vec<String>) -> Option<usize> {
    if let Some(form) = &node.form {
        if node.label == "-NONE-" {
            return None;
        }
        *next += 1;
        words.push((form.clone(), node.label.clone()));
        heads.push(0);
        rels.push(node.rel.to_string());
        return Some(*next);
    }
    let kid_heads: Vec<Option<usize>> = node.kids.iter().map(|k| number(k, next, words, heads, rels)).collect();
    // Only phrases made of empty elements have an empty head daughter.
    let head = kid_heads[node.head]?;
    for (x, h) in kid_heads.iter().enumerate() {
        let Some(h) = *h else { continue };
        if x == node.head {
            continue;
        }
        let governor = node
            .attach
            .iter()
            .find(|(d, _)| *d == x)
            .and_then(|(_, g)| kid_heads[*g])
            .unwrap_or(head);
        heads[h - 1] = governor;
        if !node.kids[x].rel.is_empty() {
            rels[h - 1] = node.kids[x].rel.to_string();
        }
    }
    Some(head)
}

fn bracket(node: &Node, out: &mut String) {
    match &node.form {
        Some(form) => {
            let _ = write!(out, "({} {form})", node.label);
        }
        None => {
            let _ = write!(out, "({}", node.label);
            for kid in &node.kids {
                out.push(' ');
                bracket(kid, out);
            }
            out.push(')');
        }
    }
}

fn conll(words: &[(String, String)], heads: &[usize], rels: &[String]) -> String {
    let mut out = String::new();
    for (i, ((form, pos), (head, rel))) in words.iter().zip(heads.iter().zip(rels)).enumerate() {
        let rel = if *head == 0 { "root" } else if rel.is_empty() { "dep" } else { rel.as_str() };
        let _ = writeln!(out, "{}\t{form}\t_\t{pos}\t{pos}\t_\t{head}\t{rel}\t_\t_", i + 1);
    }
    out
}

fn projective(heads: &[usize]) -> bool {
    let arcs: Vec<(usize, usize)> = heads
        .iter()
        .enumerate()
        .filter(|(_, &h)| h > 0)
        .map(|(i, &h)| ((i + 1).min(h), (i + 1).max(h)))
        .collect();
    arcs.iter().all(|&(a, b)| arcs.iter().all(|&(c, d)| !(a < c && c < b && b < d)))
}

fn main() {
    let mut gen = Gen {
        rng: ChaCha8Rng::seed_from_u64(SEED),
    };
    let mut trees = String::new();
    let mut deps = String::new();
    for index in 1..=SENTENCES {
        if let Some((_, tree, rows)) = FIXED.iter().find(|(i, _, _)| *i == index) {
            let _ = writeln!(trees, "( {tree} )");
            for (i, row) in rows.split('|').enumerate() {
                let cols: Vec<&str> = row.split(' ').collect();
                let _ = writeln!(deps, "{}\t{}\t_\t{}\t{}\t_\t{}\t{}\t_\t_", i + 1, cols[0], cols[1], cols[1], cols[2], cols[3]);
            }
            deps.push('\n');
            continue;
        }
        loop {
            let mut tree = gen.s(0, true);
            capitalize_first(&mut tree);
            let (mut next, mut words, mut heads, mut rels) = (0, Vec::new(), Vec::new(), Vec::new());
            number(&tree, &mut next, &mut words, &mut heads, &mut rels);
            if words.len() < 3 || words.len() > MAX_LEN || !projective(&heads) {
                continue;
            }
            let mut line = String::new();
            bracket(&tree, &mut line);
            let _ = writeln!(trees, "( {line} )");
            deps.push_str(&conll(&words, &heads, &rels));
            deps.push('\n');
            break;
        }
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    fs::create_dir_all(&dir).expect("create data directory");
    fs::write(dir.join("sample.mrg"), trees).expect("write trees");
    fs::write(dir.join("sample.conll"), deps).expect("write dependencies");
    println!("wrote {SENTENCES} sentences to {}", dir.display());
}

/// Sentence-initial capitalization.
fn capitalize_first(node: &mut Node) -> bool {
    if let Some(form) = &mut node.form {
        if node.label == "-NONE-" {
            return false;
        }
        let mut chars = form.chars();
        if let Some(c) = chars.next() {
            *form = c.to_uppercase().chain(chars).collect();
        }
        return true;
    }
    node.kids.iter_mut().any(capitalize_first)
}
