//! End-to-end certification of each named valuation statement, over exact
//! arithmetic, reported as structured per-index tables.
//!
//! Every verifier follows the same discipline:
//!
//! * the required column is computed from `Params` alone;
//! * the observed column is computed from q-expansions alone;
//! * precision is auto-sized from the requested index range when not given,
//!   and a too-small explicit precision is an error — never a silent
//!   truncation;
//! * sharpness/optimality probes are reported in `notes` but never fail a
//!   run: attainment is exhibited by examples, not claimed universally.
//!
//! Reports are plain data (no interior state, no clocks): re-running a
//! verifier with the same arguments produces an identical report.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::arith::{rational, BigRational, PadicVal};
use crate::eisenstein::{eisenstein_series, estar, lift_f, params, Params};
use crate::error::Error;
use crate::fpbasis::{check_bound, expand_in_fp, fp_slope, valuation_profile, FpExpansion, LinearBound};
use crate::katz::{dim_level1, katz_expand, katz_profile};
use crate::qseries::{eta_quotient_fp, QSeries};
use crate::umatrix::{check_general_bound, check_star_bound, compute_umatrix, UBoundReport};

/// Statement tags, one per certified claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimId {
    ThmA,
    PropSpecial,
    PropCongr,
    Identities21,
    CorUfF,
    LemmaUi,
    PropEsVsF,
    SerreConv,
    UmatrixGeneral,
    UmatrixStar,
}

impl ClaimId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimId::ThmA => "THM_A",
            ClaimId::PropSpecial => "PROP_SPECIAL",
            ClaimId::PropCongr => "PROP_CONGR",
            ClaimId::Identities21 => "IDENTITIES_21",
            ClaimId::CorUfF => "COR_UF_F",
            ClaimId::LemmaUi => "LEMMA_UI",
            ClaimId::PropEsVsF => "PROP_ES_VS_F",
            ClaimId::SerreConv => "SERRE_CONV",
            ClaimId::UmatrixGeneral => "UMATRIX_GENERAL",
            ClaimId::UmatrixStar => "UMATRIX_STAR",
        }
    }

    /// Accepts the report tag or its subcommand-style alias.
    pub fn parse(s: &str) -> Option<ClaimId> {
        Some(match s {
            "THM_A" | "thm-a" => ClaimId::ThmA,
            "PROP_SPECIAL" | "special" => ClaimId::PropSpecial,
            "PROP_CONGR" | "congruence" => ClaimId::PropCongr,
            "IDENTITIES_21" | "identities" => ClaimId::Identities21,
            "COR_UF_F" | "cor-uf" => ClaimId::CorUfF,
            "LEMMA_UI" | "lemma-ui" => ClaimId::LemmaUi,
            "PROP_ES_VS_F" | "es-vs-f" => ClaimId::PropEsVsF,
            "SERRE_CONV" | "serre" => ClaimId::SerreConv,
            "UMATRIX_GENERAL" | "umatrix-general" => ClaimId::UmatrixGeneral,
            "UMATRIX_STAR" | "umatrix-star" => ClaimId::UmatrixStar,
            _ => return None,
        })
    }
}

/// What a report row is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowLabel {
    /// A single expansion index i (or a U-iterate count, for convergence
    /// sequences).
    Index(usize),
    /// Expansion index within a U-iterate family.
    Iterate { iter: usize, index: usize },
    /// A matrix row, pointing at the column where the margin is worst.
    Entry { i: usize, j: Option<usize> },
}

impl RowLabel {
    /// The primary index used when rows are folded to one line per i.
    pub fn primary(&self) -> usize {
        match *self {
            RowLabel::Index(i) => i,
            RowLabel::Iterate { iter, .. } => iter,
            RowLabel::Entry { i, .. } => i,
        }
    }
}

/// One checked inequality: observed valuation vs required lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: RowLabel,
    /// What the observed number is, when the label alone is ambiguous.
    pub detail: Option<String>,
    pub observed: PadicVal,
    pub required: BigRational,
    pub margin: PadicVal,
    pub pass: bool,
}

/// A full verification run: parameters, per-index table, outcome, notes.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub claim: ClaimId,
    pub p: u32,
    pub k: Option<u32>,
    /// Expansion index range checked (M), when applicable.
    pub terms: Option<usize>,
    /// q-adic working precision actually used (echoed even when auto-sized).
    pub prec: Option<usize>,
    pub i_max: Option<usize>,
    pub pass: bool,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
}

fn resolve_prec(requested: Option<usize>, needed: usize) -> Result<usize, Error> {
    match requested {
        None => Ok(needed),
        Some(n) if n >= needed => Ok(n),
        Some(n) => Err(Error::Precision { needed, have: n }),
    }
}

/// Precision that survives `pow` applications of U_p with `prec` coefficients
/// left at the end.
fn scaled_prec(p: u32, prec: usize, pow: u32) -> Result<usize, Error> {
    let mut n = prec;
    for _ in 0..pow {
        n = (p as usize)
            .checked_mul(n - 1)
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| Error::Parameter("requested precision overflows usize".into()))?;
    }
    Ok(n)
}

fn margin_ok(m: &PadicVal) -> bool {
    match m {
        PadicVal::Infinite => true,
        PadicVal::Finite(v) => !v.is_negative(),
    }
}

fn row_at(
    label: RowLabel,
    detail: Option<String>,
    observed: PadicVal,
    required: BigRational,
) -> ReportRow {
    let margin = observed.sub_rational(&required);
    let pass = margin_ok(&margin);
    ReportRow { label, detail, observed, required, margin, pass }
}

/// Rows for v_p(a_i) >= bound(i) over i = start ..= max_index, labelled as a
/// plain index family or as one U-iterate family.
fn expansion_rows(
    exp: &FpExpansion,
    bound: &LinearBound,
    iter: Option<usize>,
    detail: Option<&str>,
) -> Vec<ReportRow> {
    let profile = valuation_profile(exp);
    (bound.start..=exp.max_index())
        .map(|i| {
            let label = match iter {
                None => RowLabel::Index(i),
                Some(it) => RowLabel::Iterate { iter: it, index: i },
            };
            row_at(
                label,
                detail.map(String::from),
                profile[i].clone(),
                bound.required_at(i),
            )
        })
        .collect()
}

fn all_pass(rows: &[ReportRow]) -> bool {
    rows.iter().all(|r| r.pass)
}

fn sigma_main(pr: &Params) -> BigRational {
    rational(i64::from(pr.t), i64::from(pr.t) + 1) * &pr.rho
}

/// E*_k / V(E*_k) at precision `prec`.
pub fn ratio_estar_vstar(p: u32, k: u32, prec: usize) -> Result<QSeries, Error> {
    let e = estar(p, k, prec)?;
    let v = e.apply_v(p).truncate(prec);
    Ok(e.mul(&v.invert()?))
}

/// U(F) / F at precision `prec` (F computed with the p-fold headroom U needs).
pub fn ratio_uf_over_f(p: u32, k: u32, prec: usize) -> Result<QSeries, Error> {
    let big = lift_f(p, k, scaled_prec(p, prec, 1)?)?;
    let uf = big.apply_u(p);
    Ok(uf.truncate(prec).mul(&big.truncate(prec).invert()?))
}

/// E*_k / F at precision `prec`.
pub fn ratio_estar_over_f(p: u32, k: u32, prec: usize) -> Result<QSeries, Error> {
    let es = estar(p, k, prec)?;
    let f = lift_f(p, k, prec)?;
    Ok(es.mul(&f.invert()?))
}

/// F / E*_k at precision `prec`.
pub fn ratio_f_over_estar(p: u32, k: u32, prec: usize) -> Result<QSeries, Error> {
    let es = estar(p, k, prec)?;
    let f = lift_f(p, k, prec)?;
    Ok(f.mul(&es.invert()?))
}

/// The exact index where the main bound line sigma_main * i overtakes the
/// small-prime line s + sigma_special * i (slopes in f_p units): the rational
/// solution of s + slope_special * x = slope_main * x.  None when the main
/// slope does not exceed the special one (then the special line dominates for
/// every i >= 0) or when s is not defined (p >= 5).
pub fn crossover_index(pr: &Params) -> Option<BigRational> {
    let s = pr.s?;
    let slope_main = fp_slope(pr.p, &sigma_main(pr));
    let slope_special = fp_slope(pr.p, &rational(1, 2 * i64::from(pr.p)));
    let gap = slope_main - slope_special;
    if gap > BigRational::zero() {
        Some(BigRational::from_integer(s.into()) / gap)
    } else {
        None
    }
}

fn constant_term_note(exp: &FpExpansion, rows_pass: &mut bool, notes: &mut Vec<String>) {
    if exp.coeff(0).is_one() {
        notes.push("constant term a_0 = 1".into());
    } else {
        *rows_pass = false;
        notes.push(format!("constant term a_0 = {} (expected 1)", exp.coeff(0)));
    }
}

/// v_p(a_i) >= (12/(p-1)) (t/(t+1)) rho * i for the expansion of
/// E*_k / V(E*_k) in f_p, i = 1..=terms.
pub fn verify_theorem_a(
    p: u32,
    k: u32,
    terms: usize,
    prec: Option<usize>,
) -> Result<VerificationReport, Error> {
    let pr = params(p, k)?;
    if terms == 0 {
        return Err(Error::Parameter("terms must be at least 1".into()));
    }
    let n = resolve_prec(prec, terms + 1)?;
    let g = ratio_estar_vstar(p, k, n)?;
    let exp = expand_in_fp(&g, p, terms)?;
    let sigma = sigma_main(&pr);
    let bound = LinearBound::new(BigRational::zero(), fp_slope(p, &sigma), 1);
    let rep = check_bound(&exp, &bound)?;
    let rows = expansion_rows(&exp, &bound, None, None);
    let mut pass = all_pass(&rows);
    debug_assert_eq!(pass, rep.pass());
    let mut notes = Vec::new();
    constant_term_note(&exp, &mut pass, &mut notes);
    notes.push(format!("sigma = {sigma}, slope = {}", bound.slope));
    if let Some(x) = crossover_index(&pr) {
        notes.push(format!(
            "small-prime line s + {} i crosses this line at i = {x}",
            fp_slope(p, &rational(1, 2 * i64::from(p)))
        ));
    }
    Ok(VerificationReport {
        claim: ClaimId::ThmA,
        p,
        k: Some(k),
        terms: Some(terms),
        prec: Some(n),
        i_max: None,
        pass,
        rows,
        notes,
    })
}

/// The same region membership certified on the Katz side (p >= 5):
/// v_p(b_i) >= (t/(t+1)) rho * i for the expansion of E*_k / V(E*_k) in
/// b_i / E_{p-1}^i.  The required column is in per-Katz-index units, not in
/// f_p-slope units.
pub fn verify_theorem_a_katz(
    p: u32,
    k: u32,
    i_max: usize,
    prec: Option<usize>,
) -> Result<VerificationReport, Error> {
    if p < 5 {
        return Err(Error::Parameter(format!(
            "the Katz certifier needs p >= 5 (E_{{p-1}} of level 1); got {p}"
        )));
    }
    let pr = params(p, k)?;
    let d_top = dim_level1(i_max as i64 * i64::from(p - 1));
    let n = resolve_prec(prec, d_top.max(2))?;
    let g = ratio_estar_vstar(p, k, n)?;
    let e = katz_expand(&g, p, i_max, n)?;
    let profile = katz_profile(&e);
    let sigma = sigma_main(&pr);
    let rows: Vec<ReportRow> = profile
        .iter()
        .enumerate()
        .map(|(i, v)| {
            row_at(
                RowLabel::Index(i),
                None,
                v.clone(),
                &sigma * rational(i as i64, 1),
            )
        })
        .collect();
    let pass = all_pass(&rows);
    let notes = alloc::vec![
        format!("certifier: Katz expansion in E_{{{}}} powers", p - 1),
        format!("sigma = {sigma} (required column is sigma * i)"),
        format!("expansion justified through q-precision {}", e.justified_prec),
    ];
    Ok(VerificationReport {
        claim: ClaimId::ThmA,
        p,
        k: Some(k),
        terms: None,
        prec: Some(n),
        i_max: Some(i_max),
        pass,
        rows,
        notes,
    })
}

/// The sharper small-prime bound: a_0 = 1 and v_p(a_i) >= s + 3i (p = 2) or
/// s + i (p = 3), plus a sharpness probe reporting any attained equality.
pub fn verify_special(
    p: u32,
    k: u32,
    terms: usize,
    prec: Option<usize>,
) -> Result<VerificationReport, Error> {
    if p != 2 && p != 3 {
        return Err(Error::Parameter(format!(
            "the refined bound is stated for p in {{2, 3}} only; got {p}"
        )));
    }
    let pr = params(p, k)?;
    if terms == 0 {
        return Err(Error::Parameter("terms must be at least 1".into()));
    }
    let s = i64::from(pr.s.expect("s is defined for p <= 3"));
    let n = resolve_prec(prec, terms + 1)?;
    let g = ratio_estar_vstar(p, k, n)?;
    let exp = expand_in_fp(&g, p, terms)?;
    let bound = LinearBound::new(
        rational(s, 1),
        fp_slope(p, &rational(1, 2 * i64::from(p))),
        1,
    );
    check_bound(&exp, &bound)?;
    let rows = expansion_rows(&exp, &bound, None, None);
    let mut pass = all_pass(&rows);
    let mut notes = Vec::new();
    constant_term_note(&exp, &mut pass, &mut notes);
    notes.push(format!("s = {s}, slope = {}", bound.slope));
    match rows.iter().find(|r| r.margin == PadicVal::from_int(0)) {
        Some(r) => notes.push(format!(
            "sharp: equality attained at i = {}",
            r.label.primary()
        )),
        None => notes.push("no equality attained in the checked range".into()),
    }
    if let Some(x) = crossover_index(&pr) {
        notes.push(format!("main line overtakes this one at i = {x}"));
    }
    Ok(VerificationReport {
        claim: ClaimId::PropSpecial,
        p,
        k: Some(k),
        terms: Some(terms),
        prec: Some(n),
        i_max: None,
        pass,
        rows,
        notes,
    })
}

/// Congruences E*_k = E_k = F and U^i(F) = F (mod p^t), i = 1..4, observed as
/// minimum q-expansion valuations at precision N (default 64).
pub fn verify_congruence(p: u32, k: u32, prec: Option<usize>) -> Result<VerificationReport, Error> {
    let pr = params(p, k)?;
    let n = prec.unwrap_or(64);
    if n < 2 {
        return Err(Error::Parameter("precision must be at least 2".into()));
    }
    let iterates = 4usize;
    let t = rational(i64::from(pr.t), 1);
    let e = eisenstein_series(k, n)?;
    let es = estar(p, k, n)?;
    let f = lift_f(p, k, n)?;
    let mut rows = Vec::new();
    rows.push(row_at(
        RowLabel::Index(0),
        Some("E* - E".into()),
        es.sub(&e).min_val(p, 0)?,
        t.clone(),
    ));
    rows.push(row_at(
        RowLabel::Index(1),
        Some("E* - F".into()),
        es.sub(&f).min_val(p, 0)?,
        t.clone(),
    ));
    let mut g = f.clone();
    for i in 1..=iterates {
        g = g.apply_u(p);
        let diff = g.sub(&f.truncate(g.prec()));
        rows.push(row_at(
            RowLabel::Index(1 + i),
            Some(format!("U^{i}(F) - F (q-precision {})", g.prec())),
            diff.min_val(p, 0)?,
            t.clone(),
        ));
    }
    let pass = all_pass(&rows);
    let mut notes = alloc::vec![format!("t = {}", pr.t)];
    if rows[1].margin == PadicVal::from_int(0) {
        notes.push("the E* - F congruence is attained exactly at t (optimal here)".into());
    } else {
        notes.push("the E* - F congruence holds strictly above t here".into());
    }
    Ok(VerificationReport {
        claim: ClaimId::PropCongr,
        p,
        k: Some(k),
        terms: None,
        prec: Some(n),
        i_max: Some(iterates),
        pass,
        rows,
        notes,
    })
}

/// The closed-form identities for E_4/V(E_4) and E_6/V(E_6) as rational
/// functions of f_p, p in {2, 3}: checked cross-multiplied, so the test is
/// exact polynomial identity of q-series to precision N (default 200).
pub fn verify_identities_21(p: u32, prec: Option<usize>) -> Result<VerificationReport, Error> {
    if p != 2 && p != 3 {
        return Err(Error::Parameter(format!(
            "closed forms in f_p are available for p in {{2, 3}} only; got {p}"
        )));
    }
    let n = prec.unwrap_or(200);
    if n < 2 {
        return Err(Error::Parameter("precision must be at least 2".into()));
    }
    let f = eta_quotient_fp(p, n)?;
    let one = QSeries::one(n);
    let lin = |c: i64| one.add(&f.scale(&rational(c, 1)));
    // (numerator in f, denominator in f, weight tag) with
    // E_w * den == V(E_w) * num the cross-multiplied form
    let cases: Vec<(QSeries, QSeries, u32)> = if p == 2 {
        alloc::vec![
            (lin(256), lin(16), 4),
            (lin(-512), lin(-8), 6),
        ]
    } else {
        let f2 = f.mul(&f);
        let quad = |a: i64, b: i64| {
            one.add(&f.scale(&rational(a, 1))).add(&f2.scale(&rational(b, 1)))
        };
        alloc::vec![
            (lin(243), lin(3), 4),
            (quad(-486, -19683), quad(18, -27), 6),
        ]
    };
    let mut rows = Vec::new();
    for (idx, (num, den, w)) in cases.iter().enumerate() {
        let e = eisenstein_series(*w, n)?;
        let v = e.apply_v(p).truncate(n);
        let diff = e.mul(den).sub(&v.mul(num));
        let observed = diff.min_val(p, 0)?;
        let exact = observed == PadicVal::Infinite;
        let margin = observed.sub_rational(&BigRational::zero());
        rows.push(ReportRow {
            label: RowLabel::Index(idx + 1),
            detail: Some(format!("E_{w} * den(f) - V(E_{w}) * num(f), exactness required")),
            observed,
            required: BigRational::zero(),
            margin,
            pass: exact,
        });
    }
    let pass = all_pass(&rows);
    let notes = alloc::vec![
        "both sides compared cross-multiplied; pass requires the difference to vanish identically"
            .into(),
        "constant terms match trivially (both sides are 1 + O(q))".into(),
    ];
    Ok(VerificationReport {
        claim: ClaimId::Identities21,
        p,
        k: None,
        terms: None,
        prec: Some(n),
        i_max: None,
        pass,
        rows,
        notes,
    })
}

/// v_p(a_i) >= -1 + (12/(p-1)) p rho * i for the expansion of U(F)/F in f_p.
pub fn verify_cor_uf_f(
    p: u32,
    k: u32,
    terms: usize,
    prec: Option<usize>,
) -> Result<VerificationReport, Error> {
    let pr = params(p, k)?;
    if terms == 0 {
        return Err(Error::Parameter("terms must be at least 1".into()));
    }
    let n = resolve_prec(prec, terms + 1)?;
    let g = ratio_uf_over_f(p, k, n)?;
    let exp = expand_in_fp(&g, p, terms)?;
    let p_rho = rational(i64::from(p), 1) * &pr.rho;
    let bound = LinearBound::new(rational(-1, 1), fp_slope(p, &p_rho), 1);
    check_bound(&exp, &bound)?;
    let rows = expansion_rows(&exp, &bound, None, None);
    let mut pass = all_pass(&rows);
    let mut notes = Vec::new();
    constant_term_note(&exp, &mut pass, &mut notes);
    notes.push(format!("p rho = {p_rho}, slope = {}, offset = -1", bound.slope));
    Ok(VerificationReport {
        claim: ClaimId::CorUfF,
        p,
        k: Some(k),
        terms: Some(terms),
        prec: Some(n),
        i_max: None,
        pass,
        rows,
        notes,
    })
}

/// v_p(a_i) >= (12/(p-1)) p rho * i for the expansions of
/// U^i(F)/F - U(F)/F, i = 2..=i_max (the i = 1 member vanishes identically).
/// Index 0 of each expansion is included: the required value there is 0.
pub fn verify_lemma_ui(
    p: u32,
    k: u32,
    i_max: usize,
    terms: usize,
    prec: Option<usize>,
) -> Result<VerificationReport, Error> {
    let pr = params(p, k)?;
    if i_max == 0 {
        return Err(Error::Parameter("i_max must be at least 1".into()));
    }
    if terms == 0 {
        return Err(Error::Parameter("terms must be at least 1".into()));
    }
    let n = resolve_prec(prec, terms + 1)?;
    let p_rho = rational(i64::from(p), 1) * &pr.rho;
    let bound = LinearBound::new(BigRational::zero(), fp_slope(p, &p_rho), 0);
    let mut rows = Vec::new();
    if i_max >= 2 {
        let big = lift_f(p, k, scaled_prec(p, n, i_max as u32)?)?;
        let f_inv = big.truncate(n).invert()?;
        let mut iterate = big.clone();
        let mut base: Option<QSeries> = None;
        for it in 1..=i_max {
            iterate = iterate.apply_u(p);
            let ratio = iterate.truncate(n).mul(&f_inv);
            match &base {
                None => base = Some(ratio),
                Some(b) => {
                    let exp = expand_in_fp(&ratio.sub(b), p, terms)?;
                    check_bound(&exp, &bound)?;
                    rows.extend(expansion_rows(&exp, &bound, Some(it), None));
                }
            }
        }
    }
    let pass = all_pass(&rows);
    let mut notes = alloc::vec![format!("p rho = {p_rho}, slope = {}", bound.slope)];
    if i_max == 1 {
        notes.push("i = 1 only: the difference vanishes identically (vacuous pass)".into());
    }
    Ok(VerificationReport {
        claim: ClaimId::LemmaUi,
        p,
        k: Some(k),
        terms: Some(terms),
        prec: Some(n),
        i_max: Some(i_max),
        pass,
        rows,
        notes,
    })
}

/// Both directions of the unit criterion: E*_k/F with offset -1 and slope
/// (12/(p-1)) p rho, and F/E*_k with offset 0 and the shallower slope
/// (12/(p-1)) (t/(t+1)) p rho.
pub fn verify_prop_es_vs_f(
    p: u32,
    k: u32,
    terms: usize,
    prec: Option<usize>,
) -> Result<VerificationReport, Error> {
    let pr = params(p, k)?;
    if terms == 0 {
        return Err(Error::Parameter("terms must be at least 1".into()));
    }
    let n = resolve_prec(prec, terms + 1)?;
    let p_rho = rational(i64::from(p), 1) * &pr.rho;
    let fwd = expand_in_fp(&ratio_estar_over_f(p, k, n)?, p, terms)?;
    let bwd = expand_in_fp(&ratio_f_over_estar(p, k, n)?, p, terms)?;
    let bound_fwd = LinearBound::new(rational(-1, 1), fp_slope(p, &p_rho), 1);
    let tt = rational(i64::from(pr.t), i64::from(pr.t) + 1);
    let bound_bwd = LinearBound::new(BigRational::zero(), fp_slope(p, &(tt * &p_rho)), 1);
    check_bound(&fwd, &bound_fwd)?;
    check_bound(&bwd, &bound_bwd)?;
    let mut rows = expansion_rows(&fwd, &bound_fwd, None, Some("E*/F"));
    rows.extend(expansion_rows(&bwd, &bound_bwd, None, Some("F/E*")));
    let mut pass = all_pass(&rows);
    let mut notes = Vec::new();
    constant_term_note(&fwd, &mut pass, &mut notes);
    constant_term_note(&bwd, &mut pass, &mut notes);
    notes.push(format!(
        "E*/F: offset -1, slope {}; F/E*: offset 0, slope {}",
        bound_fwd.slope, bound_bwd.slope
    ));
    Ok(VerificationReport {
        claim: ClaimId::PropEsVsF,
        p,
        k: Some(k),
        terms: Some(terms),
        prec: Some(n),
        i_max: None,
        pass,
        rows,
        notes,
    })
}

fn serre_auto_prec(p: u32, i_max: usize) -> Result<usize, Error> {
    let mut n: usize = 2;
    for _ in 1..i_max.max(1) {
        n = n
            .checked_mul(p as usize)
            .ok_or_else(|| Error::Parameter("auto-sized precision overflows usize".into()))?;
    }
    Ok(n.max(17))
}

/// The convergence U^i(F) -> E*_k in q-expansion: the sequence
/// m_i = min_val(U^i(F) - E*_k) is reported for i = 0..=i_max, each m_i is
/// checked against t, the sequence must be nondecreasing, and the last term
/// must strictly exceed the first.  Limited to p <= 7, where the growth
/// mechanism applies.
pub fn verify_serre_convergence(
    p: u32,
    k: u32,
    i_max: usize,
    prec: Option<usize>,
) -> Result<VerificationReport, Error> {
    if !matches!(p, 2 | 3 | 5 | 7) {
        return Err(Error::Parameter(format!(
            "the convergence criterion is run for p in {{2, 3, 5, 7}}; got {p}"
        )));
    }
    if i_max == 0 {
        return Err(Error::Parameter("i_max must be at least 1".into()));
    }
    let pr = params(p, k)?;
    let n = match prec {
        Some(n) if n >= 2 => n,
        Some(_) => return Err(Error::Parameter("precision must be at least 2".into())),
        None => serre_auto_prec(p, i_max)?,
    };
    let t = rational(i64::from(pr.t), 1);
    let es = estar(p, k, n)?;
    let f = lift_f(p, k, n)?;
    let mut rows = Vec::new();
    let mut g = f;
    for i in 0..=i_max {
        if i > 0 {
            g = g.apply_u(p);
        }
        let diff = g.sub(&es.truncate(g.prec()));
        rows.push(row_at(
            RowLabel::Index(i),
            Some(format!("U^{i}(F) - E* (q-precision {})", g.prec())),
            diff.min_val(p, 0)?,
            t.clone(),
        ));
    }
    let nondecreasing = rows.windows(2).all(|w| w[0].observed <= w[1].observed);
    let strict_growth = rows[0].observed < rows[i_max].observed;
    let pass = all_pass(&rows) && nondecreasing && strict_growth;
    let notes = alloc::vec![
        format!("t = {}", pr.t),
        format!("nondecreasing: {}", if nondecreasing { "yes" } else { "no" }),
        format!(
            "m_{i_max} > m_0: {}",
            if strict_growth { "yes" } else { "no" }
        ),
    ];
    Ok(VerificationReport {
        claim: ClaimId::SerreConv,
        p,
        k: Some(k),
        terms: None,
        prec: Some(n),
        i_max: Some(i_max),
        pass,
        rows,
        notes,
    })
}

fn umatrix_rows(rep: &UBoundReport) -> Vec<ReportRow> {
    rep.per_row
        .iter()
        .map(|r| {
            let margin = r.margin.clone();
            let pass = margin_ok(&margin);
            ReportRow {
                label: RowLabel::Entry { i: r.i, j: r.j_at_min },
                detail: None,
                observed: r.observed.clone(),
                required: r.required.clone(),
                margin,
                pass,
            }
        })
        .collect()
}

fn umatrix_report(
    claim: ClaimId,
    rep: &UBoundReport,
    support_violations: &[(usize, usize)],
) -> VerificationReport {
    let mut rows = umatrix_rows(rep);
    let mut pass = all_pass(&rows) && rep.pass();
    let mut notes = alloc::vec![format!(
        "required = {} * (p j - i) + {}; {} entries checked; worst margin {}",
        rep.rate, rep.offset, rep.entries_checked, rep.min_margin
    )];
    match support_violations.first() {
        None => notes.push("support confined to ceil(i/p) <= j <= i p".into()),
        Some(&(i, j)) => {
            pass = false;
            notes.push(format!("support violated first at (i, j) = ({i}, {j})"));
        }
    }
    if rep.min_margin == PadicVal::from_int(0) {
        notes.push("the bound is attained with equality somewhere in range".into());
    }
    if let Some(v) = rep.violations.first() {
        rows.push(ReportRow {
            label: RowLabel::Entry { i: v.i, j: Some(v.j) },
            detail: Some("first violating entry".into()),
            observed: v.observed.clone(),
            required: v.required.clone(),
            margin: v.observed.sub_rational(&v.required),
            pass: false,
        });
    }
    VerificationReport {
        claim,
        p: rep.p,
        k: None,
        terms: None,
        prec: None,
        i_max: Some(rep.i_max),
        pass,
        rows,
        notes,
    }
}

/// The generally valid U-matrix bound v_p(c_{i,j}) >= 12/(p^2-1) (p j - i) - 1
/// together with the support condition, through row i_max.
pub fn verify_umatrix_general(p: u32, i_max: usize) -> Result<VerificationReport, Error> {
    let u = compute_umatrix(p, i_max)?;
    let rep = check_general_bound(&u);
    Ok(umatrix_report(ClaimId::UmatrixGeneral, &rep, &u.support_violations()))
}

/// The sharpened U-matrix bound (p in {2, 3} only; other p are refused with
/// the explicit counterexample).
pub fn verify_umatrix_star(p: u32, i_max: usize) -> Result<VerificationReport, Error> {
    let u = compute_umatrix(p, i_max)?;
    let rep = check_star_bound(&u)?;
    Ok(umatrix_report(ClaimId::UmatrixStar, &rep, &u.support_violations()))
}
