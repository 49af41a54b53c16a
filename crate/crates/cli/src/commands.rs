//! One function per subcommand. Each builds a serializable report; the text
//! form is rendered from the same value.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use qmlines::enumerate::enumerate_consistent_with;
use qmlines::format::{parse_triples, write_matrix};
use qmlines::isomorphism::Canonizer;
use qmlines::verify::{verify_paper_only, PaperFixtures, PaperReport, CHECK_IDS};
use qmlines::{
    betweenness_of, canonical_form, classify_with, dbe_verdict, isomorphism_witness, line_set,
    realize, realize_bounded_integer, realize_digraph, validate_quasi_metric, Betweenness,
    ClassifyOptions, Labels, PointSet, Variant,
};
use serde::Serialize;

use crate::input::{
    load_matrix, load_quasi_metric, load_relation, load_triples, require_consistent, InputError,
};

pub enum Exit {
    Positive,
    Negative,
}

pub struct Output {
    pub json: serde_json::Value,
    pub text: String,
    pub exit: Exit,
}

fn output<R: Serialize>(report: &R, text: String, positive: bool) -> Output {
    Output {
        json: serde_json::to_value(report).expect("reports serialize"),
        text,
        exit: if positive {
            Exit::Positive
        } else {
            Exit::Negative
        },
    }
}

fn triple_names(b: &Betweenness, labels: &Labels) -> Vec<String> {
    b.iter().map(|t| labels.format_triple(t)).collect()
}

fn set_names(set: PointSet, labels: &Labels) -> Vec<String> {
    set.iter().map(|p| labels.name(p).to_string()).collect()
}

fn matrix_rows<T: ToString>(entries: &[T], n: usize) -> Vec<Vec<String>> {
    entries
        .chunks(n)
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

/// Canonical forms try every relabeling, so they stay below 10! of them.
const MAX_CANON_POINTS: usize = 9;

fn check_canon_size(n: usize) -> Result<(), InputError> {
    if n > MAX_CANON_POINTS {
        return Err(InputError::Invalid(format!(
            "canonical forms are limited to {MAX_CANON_POINTS} points, got {n}"
        )));
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct ValidateReport {
    command: &'static str,
    labels: Vec<String>,
    is_quasi_metric: bool,
    violations: Vec<String>,
}

pub fn validate(path: &Path) -> Result<Output, InputError> {
    let m = load_matrix(path)?;
    let v = validate_quasi_metric(&m);
    let report = ValidateReport {
        command: "validate",
        labels: m.labels().as_slice().to_vec(),
        is_quasi_metric: v.is_ok(),
        violations: v
            .violations
            .iter()
            .map(|x| x.describe(m.labels()))
            .collect(),
    };
    let mut text = format!("quasi-metric: {}\n", yes_no(report.is_quasi_metric));
    for line in &report.violations {
        let _ = writeln!(text, "  {line}");
    }
    Ok(output(&report, text, report.is_quasi_metric))
}

#[derive(Serialize)]
struct BetweennessReport {
    command: &'static str,
    labels: Vec<String>,
    count: usize,
    triples: Vec<String>,
}

pub fn betweenness(path: &Path) -> Result<Output, InputError> {
    let m = load_quasi_metric(path)?;
    let b = betweenness_of(&m);
    let report = BetweennessReport {
        command: "betweenness",
        labels: m.labels().as_slice().to_vec(),
        count: b.len(),
        triples: triple_names(&b, m.labels()),
    };
    let mut text = format!("{} triples\n", report.count);
    for t in &report.triples {
        let _ = writeln!(text, "{t}");
    }
    Ok(output(&report, text, true))
}

#[derive(Serialize)]
struct PairLine {
    pair: String,
    line: Vec<String>,
}

#[derive(Serialize)]
struct LinesReport {
    command: &'static str,
    labels: Vec<String>,
    line_count: usize,
    has_universal: bool,
    lines: Vec<Vec<String>>,
    pairs: Vec<PairLine>,
}

pub fn lines(
    matrix: Option<&Path>,
    triples: Option<&Path>,
    labels: Option<&str>,
) -> Result<Output, InputError> {
    let (b, labels) = load_relation(matrix, triples, labels)?;
    let ls = line_set(&b);
    let report = LinesReport {
        command: "lines",
        labels: labels.as_slice().to_vec(),
        line_count: ls.len(),
        has_universal: ls.has_universal(),
        lines: ls.lines().map(|l| set_names(l, &labels)).collect(),
        pairs: ls
            .pairs()
            .map(|((x, y), l)| PairLine {
                pair: format!("{}{}", labels.name(x), labels.name(y)),
                line: set_names(l, &labels),
            })
            .collect(),
    };
    let mut text = format!(
        "{} lines, universal: {}\n",
        report.line_count,
        yes_no(report.has_universal)
    );
    for l in &report.lines {
        let _ = writeln!(text, "{{{}}}", l.join(","));
    }
    text.push_str("per pair:\n");
    for p in &report.pairs {
        let _ = writeln!(text, "  {}: {{{}}}", p.pair, p.line.join(","));
    }
    Ok(output(&report, text, true))
}

#[derive(Serialize)]
struct DbeReport {
    command: &'static str,
    n: usize,
    line_count: usize,
    has_universal: bool,
    satisfies_dbe: bool,
}

pub fn dbe(
    matrix: Option<&Path>,
    triples: Option<&Path>,
    labels: Option<&str>,
) -> Result<Output, InputError> {
    let (b, _) = load_relation(matrix, triples, labels)?;
    let v = dbe_verdict(&b);
    let report = DbeReport {
        command: "dbe",
        n: b.n(),
        line_count: v.line_count,
        has_universal: v.has_universal,
        satisfies_dbe: v.satisfies_dbe,
    };
    let text = format!(
        "points: {}\nlines: {}\nuniversal line: {}\nsatisfies DBE: {}\n",
        report.n,
        report.line_count,
        yes_no(report.has_universal),
        yes_no(report.satisfies_dbe)
    );
    Ok(output(&report, text, report.satisfies_dbe))
}

#[derive(Serialize)]
struct CanonReport {
    command: &'static str,
    labels: Vec<String>,
    encoding: Option<String>,
    class_size: usize,
    /// Input label to the label of its canonical position.
    relabeling: BTreeMap<String, String>,
    canonical: Vec<String>,
}

pub fn canon(triples: &Path, labels: Option<&str>) -> Result<Output, InputError> {
    let (b, labels) = load_triples(triples, labels)?;
    check_canon_size(b.n())?;
    let (c, f) = canonical_form(&b);
    let class_size = Canonizer::new(b.n()).orbit_size(&b);
    let report = CanonReport {
        command: "canon",
        labels: labels.as_slice().to_vec(),
        encoding: c.encoding().map(|e| e.to_string()),
        class_size,
        relabeling: (0..b.n())
            .map(|i| {
                (
                    labels.name(i).to_string(),
                    labels.name(f.image(i)).to_string(),
                )
            })
            .collect(),
        canonical: triple_names(&c, &labels),
    };
    let mut text = String::new();
    if let Some(e) = &report.encoding {
        let _ = writeln!(text, "encoding: {e}");
    }
    let _ = writeln!(text, "class size: {}", report.class_size);
    let map: Vec<String> = report
        .relabeling
        .iter()
        .map(|(a, b)| format!("{a}->{b}"))
        .collect();
    let _ = writeln!(text, "relabeling: {}", map.join(" "));
    text.push_str("canonical triples:\n");
    for t in &report.canonical {
        let _ = writeln!(text, "{t}");
    }
    Ok(output(&report, text, true))
}

#[derive(Serialize)]
struct IsoReport {
    command: &'static str,
    isomorphic: bool,
    /// Label in the first file to its image in the second.
    witness: Option<BTreeMap<String, String>>,
}

pub fn iso(
    a: &Path,
    b: &Path,
    labels_a: Option<&str>,
    labels_b: Option<&str>,
) -> Result<Output, InputError> {
    let (ra, la) = load_triples(a, labels_a)?;
    let (rb, lb) = load_triples(b, labels_b)?;
    check_canon_size(ra.n().max(rb.n()))?;
    let witness = if ra.n() == rb.n() {
        isomorphism_witness(&ra, &rb)?
    } else {
        None
    };
    let report = IsoReport {
        command: "iso",
        isomorphic: witness.is_some(),
        witness: witness.map(|f| {
            (0..ra.n())
                .map(|i| (la.name(i).to_string(), lb.name(f.image(i)).to_string()))
                .collect()
        }),
    };
    let mut text = format!("isomorphic: {}\n", yes_no(report.isomorphic));
    if let Some(w) = &report.witness {
        let map: Vec<String> = w.iter().map(|(x, y)| format!("{x}->{y}")).collect();
        let _ = writeln!(text, "witness: {}", map.join(" "));
    }
    Ok(output(&report, text, report.isomorphic))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealizeVariant {
    Quasi,
    Metric,
    Int(u32),
    Digraph,
}

impl std::str::FromStr for RealizeVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quasi" => Ok(RealizeVariant::Quasi),
            "metric" => Ok(RealizeVariant::Metric),
            "digraph" => Ok(RealizeVariant::Digraph),
            _ => match s.strip_prefix("int:").map(str::parse::<u32>) {
                Some(Ok(k)) if k > 0 => Ok(RealizeVariant::Int(k)),
                _ => Err(format!(
                    "unknown variant {s:?}; expected quasi, metric, int:K (K >= 1) or digraph"
                )),
            },
        }
    }
}

impl std::fmt::Display for RealizeVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RealizeVariant::Quasi => f.write_str("quasi"),
            RealizeVariant::Metric => f.write_str("metric"),
            RealizeVariant::Int(k) => write!(f, "int:{k}"),
            RealizeVariant::Digraph => f.write_str("digraph"),
        }
    }
}

#[derive(Serialize)]
struct RealizeReport {
    command: &'static str,
    variant: String,
    labels: Vec<String>,
    realizable: bool,
    /// Only for the linear-programming variants.
    optimal_slack: Option<String>,
    witness: Option<Vec<Vec<String>>>,
    /// Only for the digraph variant.
    arcs: Option<Vec<String>>,
}

pub fn realize_cmd(
    variant: RealizeVariant,
    matrix: Option<&Path>,
    triples: Option<&Path>,
    labels: Option<&str>,
) -> Result<Output, InputError> {
    let (b, labels) = load_relation(matrix, triples, labels)?;
    require_consistent(&b, &labels)?;
    let n = b.n();
    let mut report = RealizeReport {
        command: "realize",
        variant: variant.to_string(),
        labels: labels.as_slice().to_vec(),
        realizable: false,
        optimal_slack: None,
        witness: None,
        arcs: None,
    };
    let mut witness_text = None;
    match variant {
        RealizeVariant::Quasi | RealizeVariant::Metric => {
            let v = if variant == RealizeVariant::Quasi {
                Variant::Quasi
            } else {
                Variant::Metric
            };
            let out = realize(&b, v)?;
            report.realizable = out.is_realizable();
            report.optimal_slack = out.optimal_slack.as_ref().map(ToString::to_string);
            if let Some(w) = out.witness {
                let w = w.with_labels(labels.clone())?;
                report.witness = Some(matrix_rows(w.entries(), n));
                witness_text = Some(write_matrix(&w));
            }
        }
        RealizeVariant::Int(k) => {
            if let Some(w) = realize_bounded_integer(&b, k)? {
                let w = w.with_labels(labels.clone())?;
                report.realizable = true;
                report.witness = Some(matrix_rows(w.entries(), n));
                witness_text = Some(write_matrix(&w));
            }
        }
        RealizeVariant::Digraph => {
            if let Some(g) = realize_digraph(&b)? {
                let d = g
                    .distances()
                    .expect("found digraphs are strongly connected")
                    .with_labels(labels.clone())?;
                report.realizable = true;
                report.arcs = Some(
                    g.arcs()
                        .iter()
                        .map(|&(u, v)| format!("{}{}", labels.name(u), labels.name(v)))
                        .collect(),
                );
                report.witness = Some(matrix_rows(d.entries(), n));
                witness_text = Some(write_matrix(&d));
            }
        }
    }
    let mut text = format!(
        "{} realizable: {}\n",
        report.variant,
        yes_no(report.realizable)
    );
    if let Some(s) = &report.optimal_slack {
        let _ = writeln!(text, "optimal slack: {s}");
    }
    if let Some(a) = &report.arcs {
        let _ = writeln!(text, "arcs: {}", a.join(" "));
    }
    if let Some(w) = witness_text {
        text.push_str("witness:\n");
        text.push_str(&w);
    }
    Ok(output(&report, text, report.realizable))
}

#[derive(Serialize)]
struct ClassRow {
    encoding: String,
    triples: Vec<String>,
    class_size: usize,
    line_count: usize,
    has_universal: bool,
    satisfies_dbe: bool,
    realizable_quasi: bool,
    quasi_slack: Option<String>,
    realizable_metric: bool,
    metric_slack: Option<String>,
    realizable_int: BTreeMap<String, bool>,
    realizable_digraph: bool,
    witness: Option<Vec<Vec<String>>>,
}

#[derive(Serialize)]
struct EnumerateReport {
    command: &'static str,
    n: usize,
    raw_candidates: u64,
    class_count: usize,
    quasi_realizable: usize,
    metric_realizable: usize,
    classes: Vec<ClassRow>,
}

pub fn enumerate(n: usize, kmax_list: Vec<u32>, threads: usize) -> Result<Output, InputError> {
    let raw = enumerate_consistent_with(n, threads)?.raw_count;
    let records = classify_with(
        n,
        &ClassifyOptions {
            kmax_list: kmax_list.clone(),
            threads,
        },
    )?;
    let labels = Labels::alphabetic(n);
    let classes: Vec<ClassRow> = records
        .iter()
        .map(|r| ClassRow {
            encoding: r
                .canonical
                .encoding()
                .map_or_else(String::new, |e| e.to_string()),
            triples: triple_names(&r.canonical, &labels),
            class_size: r.class_size,
            line_count: r.line_count,
            has_universal: r.has_universal,
            satisfies_dbe: r.satisfies_dbe,
            realizable_quasi: r.realizable_quasi,
            quasi_slack: r.quasi_slack.as_ref().map(ToString::to_string),
            realizable_metric: r.realizable_metric,
            metric_slack: r.metric_slack.as_ref().map(ToString::to_string),
            realizable_int: r
                .realizable_int
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            realizable_digraph: r.realizable_digraph,
            witness: r.witness.as_ref().map(|w| matrix_rows(w.entries(), n)),
        })
        .collect();
    let report = EnumerateReport {
        command: "enumerate",
        n,
        raw_candidates: raw,
        class_count: classes.len(),
        quasi_realizable: classes.iter().filter(|c| c.realizable_quasi).count(),
        metric_realizable: classes.iter().filter(|c| c.realizable_metric).count(),
        classes,
    };
    let mut text = format!(
        "n = {}: {} consistent relations, {} classes, {} quasi-realizable, {} metric-realizable\n",
        report.n,
        report.raw_candidates,
        report.class_count,
        report.quasi_realizable,
        report.metric_realizable
    );
    let int_cols: String = kmax_list.iter().map(|k| format!(" int:{k}")).collect();
    let _ = writeln!(
        text,
        "encoding size lines univ dbe quasi metric{int_cols} digraph triples"
    );
    for c in &report.classes {
        let ints: String = c
            .realizable_int
            .values()
            .map(|&v| format!(" {}", yes_no(v)))
            .collect();
        let _ = writeln!(
            text,
            "{} {} {} {} {} {} {}{} {} {{{}}}",
            c.encoding,
            c.class_size,
            c.line_count,
            yes_no(c.has_universal),
            yes_no(c.satisfies_dbe),
            yes_no(c.realizable_quasi),
            yes_no(c.realizable_metric),
            ints,
            yes_no(c.realizable_digraph),
            c.triples.join(",")
        );
    }
    Ok(output(&report, text, true))
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    command: &'static str,
    #[serde(flatten)]
    report: &'a PaperReport,
}

pub fn verify(
    q4_matrix: Option<&Path>,
    q4_triples: Option<&Path>,
    only: &[String],
    threads: usize,
) -> Result<Output, InputError> {
    if let Some(bad) = only.iter().find(|id| !CHECK_IDS.contains(&id.as_str())) {
        return Err(InputError::Invalid(format!(
            "unknown check {bad:?}; known: {}",
            CHECK_IDS.join(", ")
        )));
    }
    let ids: Vec<&str> = if only.is_empty() {
        CHECK_IDS.to_vec()
    } else {
        only.iter().map(String::as_str).collect()
    };
    let mut fx = PaperFixtures::default();
    if let Some(p) = q4_matrix {
        fx.q4_matrix = load_matrix(p)?;
    }
    if let Some(p) = q4_triples {
        let text = std::fs::read_to_string(p).map_err(|e| InputError::Io(p.to_path_buf(), e))?;
        fx.q4_triples = parse_triples(&text, fx.q4_matrix.labels())
            .map_err(|e| InputError::Parse(p.to_path_buf(), e))?;
    }
    let report = verify_paper_only(&fx, threads, &ids);
    Ok(output(
        &VerifyReport {
            command: "verify-paper",
            report: &report,
        },
        report.render(),
        report.all_passed,
    ))
}
