//! Command-line front end for the certification library: one subcommand per
//! verified statement, plus raw expansion dumps and a cartesian sweep runner.
//!
//! Output contracts:
//!
//! * JSON: a single object per report — `claim_id`, `params`, `status`,
//!   `rows` (each row at least `i`, `observed`, `required`, `margin`), and
//!   `notes`; sweeps produce an array of such objects.
//! * CSV: pinned header `claim_id,p,k,i,observed,required,margin,status`,
//!   one line per primary index (multi-index families are folded to their
//!   worst margin per primary index; the JSON carries the full detail).
//! * Text: an aligned table for reading.
//!
//! Valuations and bounds are serialized as exact fractions (`"20/3"`) or
//! `"inf"`, never as decimals.  Machine output contains no timestamps: a
//! rerun with the same argv is byte-identical.
//!
//! Exit codes: 0 = all checks passed; 1 = a violation was found (the report
//! is still written); 2 = usage or parameter error (including refused
//! parameter domains); 3 = internal consistency failure.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use oclab_core::arith::padic_val;
use oclab_core::error::Error;
use oclab_core::qseries::QSeries;
use oclab_core::verify::{
    ratio_estar_over_f, ratio_estar_vstar, ratio_f_over_estar, ratio_uf_over_f, verify_congruence,
    verify_cor_uf_f, verify_identities_21, verify_lemma_ui, verify_prop_es_vs_f,
    verify_serre_convergence, verify_special, verify_theorem_a, verify_theorem_a_katz,
    verify_umatrix_general, verify_umatrix_star, ClaimId, ReportRow, RowLabel, VerificationReport,
};

/// Serialized form of a report row.  `i` is the primary index; `index` is the
/// inner index of a U-iterate family; `j` is the matrix column attaining the
/// row's worst margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowDoc {
    pub i: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    pub observed: String,
    pub required: String,
    pub margin: String,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub p: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prec: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub i_max: Option<usize>,
}

/// Serialized form of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub claim_id: String,
    pub params: ParamsDoc,
    pub status: String,
    pub rows: Vec<RowDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

fn status_str(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn row_doc(r: &ReportRow) -> RowDoc {
    let (i, index, j) = match r.label {
        RowLabel::Index(i) => (i, None, None),
        RowLabel::Iterate { iter, index } => (iter, Some(index), None),
        RowLabel::Entry { i, j } => (i, None, j),
    };
    RowDoc {
        i,
        index,
        j,
        detail: r.detail.clone(),
        observed: r.observed.to_string(),
        required: r.required.to_string(),
        margin: r.margin.to_string(),
        status: status_str(r.pass).to_string(),
    }
}

impl ReportDoc {
    pub fn from_report(r: &VerificationReport) -> ReportDoc {
        ReportDoc {
            claim_id: r.claim.as_str().to_string(),
            params: ParamsDoc {
                p: r.p,
                k: r.k,
                terms: r.terms,
                prec: r.prec,
                i_max: r.i_max,
            },
            status: status_str(r.pass).to_string(),
            rows: r.rows.iter().map(row_doc).collect(),
            notes: r.notes.clone(),
        }
    }

    /// A placeholder document for a sweep cell skipped on a parameter error.
    pub fn skipped(claim: ClaimId, p: u32, k: Option<u32>, why: &Error) -> ReportDoc {
        ReportDoc {
            claim_id: claim.as_str().to_string(),
            params: ParamsDoc { p, k, terms: None, prec: None, i_max: None },
            status: "skip".to_string(),
            rows: Vec::new(),
            notes: vec![why.to_string()],
        }
    }
}

pub const CSV_HEADER: &str = "claim_id,p,k,i,observed,required,margin,status";

/// One CSV line per primary index: within an index group the row with the
/// smallest margin is emitted, and the group's status is "pass" only if every
/// member passed.
pub fn csv_lines(report: &VerificationReport) -> Vec<String> {
    struct Fold<'a> {
        key: usize,
        best: &'a ReportRow,
        all_pass: bool,
    }
    let mut folds: Vec<Fold> = Vec::new();
    for r in &report.rows {
        let key = r.label.primary();
        match folds.iter_mut().find(|f| f.key == key) {
            Some(f) => {
                if r.margin < f.best.margin {
                    f.best = r;
                }
                f.all_pass &= r.pass;
            }
            None => folds.push(Fold { key, best: r, all_pass: r.pass }),
        }
    }
    let k = report.k.map(|k| k.to_string()).unwrap_or_default();
    folds
        .iter()
        .map(|f| {
            format!(
                "{},{},{},{},{},{},{},{}",
                report.claim.as_str(),
                report.p,
                k,
                f.key,
                f.best.observed,
                f.best.required,
                f.best.margin,
                status_str(f.all_pass)
            )
        })
        .collect()
}

fn csv_skip_line(claim: ClaimId, p: u32, k: Option<u32>) -> String {
    let k = k.map(|k| k.to_string()).unwrap_or_default();
    format!("{},{p},{k},,,,,skip", claim.as_str())
}

fn text_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (c, cell) in row.iter().enumerate() {
            widths[c] = widths[c].max(cell.len());
        }
    }
    let mut out = String::new();
    let emit = |out: &mut String, cells: &[String]| {
        for (c, cell) in cells.iter().enumerate() {
            if c > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            for _ in cell.len()..widths[c] {
                out.push(' ');
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    let head: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    emit(&mut out, &head);
    for row in rows {
        emit(&mut out, row);
    }
    out
}

pub fn text_report(report: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("claim {}  p={}", report.claim.as_str(), report.p));
    if let Some(k) = report.k {
        out.push_str(&format!(" k={k}"));
    }
    if let Some(m) = report.terms {
        out.push_str(&format!(" terms={m}"));
    }
    if let Some(n) = report.prec {
        out.push_str(&format!(" prec={n}"));
    }
    if let Some(i) = report.i_max {
        out.push_str(&format!(" i_max={i}"));
    }
    out.push_str(&format!("  status {}\n", status_str(report.pass)));
    let with_detail = report.rows.iter().any(|r| r.detail.is_some());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for r in &report.rows {
        let label = match r.label {
            RowLabel::Index(i) => i.to_string(),
            RowLabel::Iterate { iter, index } => format!("{iter}.{index}"),
            RowLabel::Entry { i, j: Some(j) } => format!("{i},{j}"),
            RowLabel::Entry { i, j: None } => format!("{i},-"),
        };
        let mut row = vec![label];
        if with_detail {
            row.push(r.detail.clone().unwrap_or_default());
        }
        row.extend([
            r.observed.to_string(),
            r.required.to_string(),
            r.margin.to_string(),
            status_str(r.pass).to_string(),
        ]);
        rows.push(row);
    }
    let header: Vec<&str> = if with_detail {
        vec!["i", "detail", "observed", "required", "margin", "status"]
    } else {
        vec!["i", "observed", "required", "margin", "status"]
    };
    out.push_str(&text_table(&header, &rows));
    if !report.notes.is_empty() {
        out.push_str("notes:\n");
        for n in &report.notes {
            out.push_str(&format!("  - {n}\n"));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "oclab",
    version,
    about = "Exact valuation certificates for level-1 Eisenstein data at small primes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UCheck {
    General,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExpandTarget {
    /// E*_k / V(E*_k)
    Esv,
    /// U(F) / F
    Uff,
    /// E*_k / F
    Esf,
    /// F / E*_k
    Fes,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Slope bound for E*_k/V(E*_k) expanded in the uniformizer f_p.
    #[command(name = "thm-a")]
    ThmA {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        /// Highest expansion index checked.
        #[arg(long, default_value_t = 20)]
        terms: usize,
        /// q-adic working precision (auto-sized when omitted).
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Refined small-prime bound (p = 2, 3) with sharpness probe.
    Special {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Congruences E* = E = F and U^i(F) = F modulo p^t.
    Congruence {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed forms of E_4/V(E_4) and E_6/V(E_6) in f_p (p = 2, 3), exact.
    Identities {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Slope bound for U(F)/F with offset -1.
    #[command(name = "cor-uf")]
    CorUf {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Slope bound for U^i(F)/F - U(F)/F, i = 2..=i_max.
    #[command(name = "lemma-ui")]
    LemmaUi {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 3)]
        imax: usize,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Both slope bounds for E*_k/F and F/E*_k.
    #[command(name = "es-vs-f")]
    EsVsF {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Convergence U^i(F) -> E*_k in q-expansion (p <= 7).
    Serre {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 4)]
        imax: usize,
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Valuation bounds for the matrix of U_p on powers of f_p.
    Umatrix {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 8)]
        imax: usize,
        /// Which bound to check; the sharpened bound is refused for p >= 5.
        #[arg(long, value_enum, default_value_t = UCheck::General)]
        check: UCheck,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The same slope statement certified through Katz expansions (p >= 5).
    Katz {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 6)]
        imax: usize,
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump the f_p expansion of a built-in ratio: exact coefficients and
    /// their valuations.
    Expand {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum)]
        target: ExpandTarget,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long)]
        prec: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run one claim over the cartesian product of primes and weights.
    Sweep {
        /// Claim tag (THM_A, PROP_SPECIAL, ...) or subcommand alias (thm-a, ...).
        #[arg(long)]
        claim: String,
        /// Primes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        /// Weights, comma separated (ignored by weight-free claims).
        #[arg(long, value_delimiter = ',')]
        k: Vec<u32>,
        #[arg(long, default_value_t = 20)]
        terms: usize,
        #[arg(long)]
        prec: Option<usize>,
        #[arg(long)]
        imax: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

struct Rendered {
    body: String,
    pass: bool,
}

fn render_one(report: &VerificationReport, format: Format) -> Rendered {
    let body = match format {
        Format::Json => {
            let doc = ReportDoc::from_report(report);
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for line in csv_lines(report) {
                s.push_str(&line);
                s.push('\n');
            }
            s
        }
        Format::Text => text_report(report),
    };
    Rendered { body, pass: report.pass }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffDoc {
    pub i: usize,
    pub value: String,
    pub valuation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionDoc {
    pub p: u32,
    pub k: u32,
    pub target: String,
    pub prec: usize,
    pub coeffs: Vec<CoeffDoc>,
}

fn render_expansion(doc: &ExpansionDoc, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("dump serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("i,value,valuation\n");
            for c in &doc.coeffs {
                s.push_str(&format!("{},{},{}\n", c.i, c.value, c.valuation));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "expansion of {} in f_{} (k={}, q-precision {})\n",
                doc.target, doc.p, doc.k, doc.prec
            );
            let rows: Vec<Vec<String>> = doc
                .coeffs
                .iter()
                .map(|c| vec![c.i.to_string(), c.value.clone(), c.valuation.clone()])
                .collect();
            s.push_str(&text_table(&["i", "value", "valuation"], &rows));
            s
        }
    }
}

fn expand_dump(
    p: u32,
    k: u32,
    target: ExpandTarget,
    terms: usize,
    prec: Option<usize>,
) -> Result<ExpansionDoc, Error> {
    if terms == 0 {
        return Err(Error::Parameter("terms must be at least 1".into()));
    }
    let needed = terms + 1;
    let n = match prec {
        None => needed,
        Some(n) if n >= needed => n,
        Some(n) => return Err(Error::Precision { needed, have: n }),
    };
    let (name, g): (&str, QSeries) = match target {
        ExpandTarget::Esv => ("E*/V(E*)", ratio_estar_vstar(p, k, n)?),
        ExpandTarget::Uff => ("U(F)/F", ratio_uf_over_f(p, k, n)?),
        ExpandTarget::Esf => ("E*/F", ratio_estar_over_f(p, k, n)?),
        ExpandTarget::Fes => ("F/E*", ratio_f_over_estar(p, k, n)?),
    };
    let e = oclab_core::fpbasis::expand_in_fp(&g, p, terms)?;
    let coeffs = e
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(CoeffDoc {
                i,
                value: c.to_string(),
                valuation: padic_val(c, p)?.to_string(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ExpansionDoc { p, k, target: name.to_string(), prec: n, coeffs })
}

/// Whether a sweep treats `claim` as weight-free (one cell per prime).
fn claim_ignores_k(claim: ClaimId) -> bool {
    matches!(
        claim,
        ClaimId::Identities21 | ClaimId::UmatrixGeneral | ClaimId::UmatrixStar
    )
}

fn run_claim_cell(
    claim: ClaimId,
    p: u32,
    k: Option<u32>,
    terms: usize,
    prec: Option<usize>,
    imax: Option<usize>,
) -> Result<VerificationReport, Error> {
    let need_k = || k.ok_or_else(|| Error::Parameter("this claim needs a weight k".into()));
    match claim {
        ClaimId::ThmA => verify_theorem_a(p, need_k()?, terms, prec),
        ClaimId::PropSpecial => verify_special(p, need_k()?, terms, prec),
        ClaimId::PropCongr => verify_congruence(p, need_k()?, prec),
        ClaimId::Identities21 => verify_identities_21(p, prec),
        ClaimId::CorUfF => verify_cor_uf_f(p, need_k()?, terms, prec),
        ClaimId::LemmaUi => verify_lemma_ui(p, need_k()?, imax.unwrap_or(3), terms, prec),
        ClaimId::PropEsVsF => verify_prop_es_vs_f(p, need_k()?, terms, prec),
        ClaimId::SerreConv => verify_serre_convergence(p, need_k()?, imax.unwrap_or(4), prec),
        ClaimId::UmatrixGeneral => verify_umatrix_general(p, imax.unwrap_or(8)),
        ClaimId::UmatrixStar => verify_umatrix_star(p, imax.unwrap_or(8)),
    }
}

/// Outcome of a single sweep cell: a report, or the parameters that were
/// skipped together with the reason.
type CellOutcome = Result<VerificationReport, (u32, Option<u32>, Error)>;

fn run_sweep(
    claim: ClaimId,
    mut ps: Vec<u32>,
    mut ks: Vec<u32>,
    terms: usize,
    prec: Option<usize>,
    imax: Option<usize>,
    format: Format,
) -> Result<Rendered, Error> {
    ps.sort_unstable();
    ps.dedup();
    ks.sort_unstable();
    ks.dedup();
    let cells: Vec<(u32, Option<u32>)> = if claim_ignores_k(claim) {
        ps.iter().map(|&p| (p, None)).collect()
    } else {
        if ks.is_empty() {
            return Err(Error::Parameter(
                "this claim sweeps over weights: pass --k".into(),
            ));
        }
        ps.iter()
            .flat_map(|&p| ks.iter().map(move |&k| (p, Some(k))))
            .collect()
    };
    let mut reports: Vec<CellOutcome> = Vec::new();
    for &(p, k) in &cells {
        match run_claim_cell(claim, p, k, terms, prec, imax) {
            Ok(r) => reports.push(Ok(r)),
            Err(e) if e.is_parameter_class() => reports.push(Err((p, k, e))),
            Err(e) => return Err(e),
        }
    }
    if reports.iter().all(|r| r.is_err()) {
        let (p, k, e) = reports
            .into_iter()
            .find_map(|r| r.err())
            .expect("at least one cell");
        let at = match k {
            Some(k) => format!("(p, k) = ({p}, {k})"),
            None => format!("p = {p}"),
        };
        return Err(Error::Parameter(format!(
            "every sweep cell was skipped; first at {at}: {e}"
        )));
    }
    let pass = reports.iter().all(|r| r.as_ref().map_or(true, |x| x.pass));
    let body = match format {
        Format::Json => {
            let docs: Vec<ReportDoc> = reports
                .iter()
                .map(|r| match r {
                    Ok(rep) => ReportDoc::from_report(rep),
                    Err((p, k, e)) => ReportDoc::skipped(claim, *p, *k, e),
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&docs).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in &reports {
                match r {
                    Ok(rep) => {
                        for line in csv_lines(rep) {
                            s.push_str(&line);
                            s.push('\n');
                        }
                    }
                    Err((p, k, _)) => {
                        s.push_str(&csv_skip_line(claim, *p, *k));
                        s.push('\n');
                    }
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                match r {
                    Ok(rep) => s.push_str(&text_report(rep)),
                    Err((p, k, e)) => {
                        let at = match k {
                            Some(k) => format!("p={p} k={k}"),
                            None => format!("p={p}"),
                        };
                        s.push_str(&format!("claim {}  {at}  status skip ({e})\n", claim.as_str()));
                    }
                }
                s.push('\n');
            }
            while s.ends_with('\n') {
                s.pop();
            }
            s.push('\n');
            s
        }
    };
    Ok(Rendered { body, pass })
}

fn execute(cmd: Cmd) -> Result<(Rendered, OutputArgs), Error> {
    Ok(match cmd {
        Cmd::ThmA { p, k, terms, prec, output } => {
            (render_one(&verify_theorem_a(p, k, terms, prec)?, output.format), output)
        }
        Cmd::Special { p, k, terms, prec, output } => {
            (render_one(&verify_special(p, k, terms, prec)?, output.format), output)
        }
        Cmd::Congruence { p, k, prec, output } => {
            (render_one(&verify_congruence(p, k, prec)?, output.format), output)
        }
        Cmd::Identities { p, prec, output } => {
            (render_one(&verify_identities_21(p, prec)?, output.format), output)
        }
        Cmd::CorUf { p, k, terms, prec, output } => {
            (render_one(&verify_cor_uf_f(p, k, terms, prec)?, output.format), output)
        }
        Cmd::LemmaUi { p, k, imax, terms, prec, output } => (
            render_one(&verify_lemma_ui(p, k, imax, terms, prec)?, output.format),
            output,
        ),
        Cmd::EsVsF { p, k, terms, prec, output } => {
            (render_one(&verify_prop_es_vs_f(p, k, terms, prec)?, output.format), output)
        }
        Cmd::Serre { p, k, imax, prec, output } => (
            render_one(&verify_serre_convergence(p, k, imax, prec)?, output.format),
            output,
        ),
        Cmd::Umatrix { p, imax, check, output } => {
            let report = match check {
                UCheck::General => verify_umatrix_general(p, imax)?,
                UCheck::Star => verify_umatrix_star(p, imax)?,
            };
            (render_one(&report, output.format), output)
        }
        Cmd::Katz { p, k, imax, prec, output } => (
            render_one(&verify_theorem_a_katz(p, k, imax, prec)?, output.format),
            output,
        ),
        Cmd::Expand { p, k, target, terms, prec, output } => {
            let doc = expand_dump(p, k, target, terms, prec)?;
            (
                Rendered { body: render_expansion(&doc, output.format), pass: true },
                output,
            )
        }
        Cmd::Sweep { claim, p, k, terms, prec, imax, output } => {
            let claim = ClaimId::parse(&claim)
                .ok_or_else(|| Error::Parameter(format!("unknown claim tag: {claim}")))?;
            let into_k = if claim_ignores_k(claim) { Vec::new() } else { k };
            (run_sweep(claim, p, into_k, terms, prec, imax, output.format)?, output)
        }
    })
}

fn exit_code_for(e: &Error) -> i32 {
    if e.is_parameter_class() {
        2
    } else {
        3
    }
}

/// Parse argv, run the subcommand, write the report, and return the process
/// exit code (0 pass, 1 violation, 2 usage/parameter error, 3 internal
/// inconsistency).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.cmd) {
        Ok((rendered, output)) => {
            if let Some(path) = &output.out {
                if let Err(io) = std::fs::write(path, rendered.body.as_bytes()) {
                    eprintln!("error: cannot write {}: {io}", path.display());
                    return 2;
                }
            } else {
                print!("{}", rendered.body);
            }
            if rendered.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
