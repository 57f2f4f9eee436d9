//! Stable JSON and text renderings of an [`ObstructionReport`].
//!
//! Integers that can grow with `A` are written as decimal strings and
//! rationals as `{"num": "...", "den": "..."}` so nothing is rounded.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::families::{SmallSeifertData, TransverseWitness};
use crate::lattice::DiagonalizationCertificate;
use crate::obstruction::{ObstructionReport, TwistCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for Rational {
    fn from(q: &BigRational) -> Self {
        Rational {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

fn ints(xs: &[BigInt]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn rats(xs: &[BigRational]) -> Vec<Rational> {
    xs.iter().map(Rational::from).collect()
}

#[derive(Debug, Serialize)]
pub struct PlumbingJson {
    pub center: i64,
    pub legs: Vec<Vec<i64>>,
}

#[derive(Debug, Serialize)]
pub struct GluingJson {
    pub u: Vec<String>,
    pub v: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct AbsentWitnessJson {
    pub norm_minus_one_vectors: usize,
    pub span_rank: usize,
}

#[derive(Debug, Serialize)]
pub struct SmoothTauJson {
    pub paper_form: Rational,
    pub sharp_form: Option<Rational>,
}

#[derive(Debug, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct TightJson {
    pub kn: String,
    pub holds: bool,
}

#[derive(Debug, Serialize)]
pub struct TwistCertificateJson {
    /// 1-based fiber indices.
    pub indices: Vec<usize>,
    pub d: String,
    pub k: Vec<String>,
    pub slopes: Vec<Rational>,
    pub ruling_slopes: Vec<Rational>,
    pub s_tcr: Rational,
    pub partial_slope_sum: Rational,
    pub vertical_twist: String,
    pub vertical_twist_certified: bool,
    pub tight_slope_inequality: Vec<TightJson>,
    pub checks: Vec<CheckJson>,
    pub all_passed: bool,
}

impl From<&TwistCertificate> for TwistCertificateJson {
    fn from(c: &TwistCertificate) -> Self {
        TwistCertificateJson {
            indices: c.indices.iter().map(|i| i + 1).collect(),
            d: c.d.to_string(),
            k: ints(&c.k),
            slopes: rats(&c.slopes),
            ruling_slopes: rats(&c.ruling_slopes),
            s_tcr: (&c.s_tcr).into(),
            partial_slope_sum: (&c.partial_slope_sum).into(),
            vertical_twist: c.vertical_twist.to_string(),
            vertical_twist_certified: false,
            tight_slope_inequality: c
                .tight_slope_inequality
                .iter()
                .map(|(k, holds)| TightJson {
                    kn: k.to_string(),
                    holds: *holds,
                })
                .collect(),
            checks: c
                .checks
                .iter()
                .map(|x| CheckJson {
                    name: x.name.clone(),
                    passed: x.passed,
                })
                .collect(),
            all_passed: c.all_passed(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportJson {
    pub input: Vec<i64>,
    #[serde(rename = "A")]
    pub a: String,
    pub unnormalized_b: Vec<String>,
    pub e0: i64,
    pub tilde_b: Vec<i64>,
    pub gluing: GluingJson,
    pub plumbing: PlumbingJson,
    pub det: String,
    pub negative_definite: bool,
    pub diagonalizable: bool,
    #[serde(rename = "E")]
    pub e: Option<Vec<Vec<String>>>,
    pub diagonalization_witness: Option<AbsentWitnessJson>,
    #[serde(rename = "P")]
    pub p: Option<String>,
    pub d_invariant: Rational,
    pub tw_min: String,
    pub smooth_tau_upper: SmoothTauJson,
    pub contact_tau_lower_at_tw_min: Rational,
    pub gap_lower: Option<Rational>,
    pub twist_certificate: TwistCertificateJson,
    pub verdict: &'static str,
    pub caveats: Vec<String>,
    pub elapsed_ms: u64,
}

impl ReportJson {
    pub fn new(r: &ObstructionReport, elapsed_ms: u64) -> Self {
        let (e, witness) = match &r.diagonalization {
            DiagonalizationCertificate::Present { e } => {
                (Some(e.iter().map(|row| ints(row)).collect()), None)
            }
            DiagonalizationCertificate::Absent {
                vectors_found,
                span_rank,
            } => (
                None,
                Some(AbsentWitnessJson {
                    norm_minus_one_vectors: *vectors_found,
                    span_rank: *span_rank,
                }),
            ),
        };
        ReportJson {
            input: r.multiplicities.as_slice().to_vec(),
            a: r.multiplicities.product().to_string(),
            unnormalized_b: ints(&r.presentation.bs),
            e0: r.normalized.e0,
            tilde_b: r.normalized.tilde_b.clone(),
            gluing: GluingJson {
                u: ints(&r.gluing.u),
                v: ints(&r.gluing.v),
            },
            plumbing: PlumbingJson {
                center: r.plumbing.center,
                legs: r.plumbing.legs.clone(),
            },
            det: r.form.det.to_string(),
            negative_definite: r.form.negative_definite,
            diagonalizable: r.diagonalization.is_present(),
            e,
            diagonalization_witness: witness,
            p: r.max_sharp_pairing.as_ref().map(ToString::to_string),
            d_invariant: (&r.d_invariant.value).into(),
            tw_min: r.tw_min.to_string(),
            smooth_tau_upper: SmoothTauJson {
                paper_form: (&r.smooth_tau_upper_sqrt).into(),
                sharp_form: r.smooth_tau_upper_sharp.as_ref().map(Rational::from),
            },
            contact_tau_lower_at_tw_min: (&r.contact_tau_lower_at_tw_min.tau_lower).into(),
            gap_lower: r.gap_lower.as_ref().map(Rational::from),
            twist_certificate: (&r.twist_certificate).into(),
            verdict: r.verdict.as_str(),
            caveats: r.caveats.clone(),
            elapsed_ms,
        }
    }
}

pub fn to_json(r: &ObstructionReport, elapsed_ms: u64) -> String {
    serde_json::to_string(&ReportJson::new(r, elapsed_ms)).expect("report serializes")
}

fn approx(q: &BigRational) -> String {
    match q.to_f64() {
        Some(_) if q.is_integer() => q.numer().to_string(),
        Some(x) => format!("{q} (≈ {x:.6})"),
        None => q.to_string(),
    }
}

pub fn to_text(r: &ObstructionReport, elapsed_ms: u64) -> String {
    let mut s = String::new();
    let m = &r.multiplicities;
    let list = |xs: &[BigInt]| {
        xs.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    let _ = writeln!(
        s,
        "Σ({})",
        m.as_slice()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    let _ = writeln!(s, "  A = a1⋯an          {}", m.product());
    let _ = writeln!(s, "  unnormalized b     ({})", list(&r.presentation.bs));
    let _ = writeln!(
        s,
        "  normalized         e0 = {}, b̃ = ({})",
        r.normalized.e0,
        r.normalized
            .tilde_b
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(s, "  gluing u           ({})", list(&r.gluing.u));
    let _ = writeln!(s, "  gluing v           ({})", list(&r.gluing.v));
    let _ = writeln!(
        s,
        "  plumbing           center {}, legs {:?}",
        r.plumbing.center, r.plumbing.legs
    );
    let _ = writeln!(
        s,
        "  intersection form  rank {}, det {}, negative definite: {}",
        r.form.rank(),
        r.form.det,
        r.form.negative_definite
    );
    let _ = writeln!(s, "  (Q^-1)_11          {}", r.inverse_entry_11);
    match &r.diagonalization {
        DiagonalizationCertificate::Present { .. } => {
            let _ = writeln!(s, "  diagonalizable     yes (E^T Q E = -I verified)");
        }
        DiagonalizationCertificate::Absent {
            vectors_found,
            span_rank,
        } => {
            let _ = writeln!(
                s,
                "  diagonalizable     no ({vectors_found} norm -1 vectors, span rank {span_rank})"
            );
        }
    }
    if let Some(p) = &r.max_sharp_pairing {
        let _ = writeln!(s, "  P (max sharp pair) {p}");
    }
    let _ = writeln!(s, "  d-invariant        {}", approx(&r.d_invariant.value));
    let _ = writeln!(s, "  tw_min             {}", r.tw_min);
    let _ = writeln!(
        s,
        "  tau_sm upper       (A - ceil√A)/2 = {}",
        approx(&r.smooth_tau_upper_sqrt)
    );
    if let Some(sharp) = &r.smooth_tau_upper_sharp {
        let _ = writeln!(s, "                     (A - P)/2 = {}", approx(sharp));
    }
    let _ = writeln!(
        s,
        "  tau_xi lower       (tw_min + A + 1)/2 = {}",
        approx(&r.contact_tau_lower_at_tw_min.tau_lower)
    );
    if let Some(gap) = &r.gap_lower {
        let _ = writeln!(s, "  gap lower          tw_min + P + 1 = {}", approx(gap));
    }
    let c = &r.twist_certificate;
    let _ = writeln!(s, "  twist certificate  d = {}, k = ({})", c.d, list(&c.k));
    let _ = writeln!(
        s,
        "                     slopes = ({}), s_CR = {}",
        c.slopes
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", "),
        c.s_tcr
    );
    let _ = writeln!(
        s,
        "                     vertical twist {} (asserted)",
        c.vertical_twist
    );
    let passed = c.checks.iter().filter(|x| x.passed).count();
    let _ = writeln!(
        s,
        "                     checks {passed}/{} passed",
        c.checks.len()
    );
    for x in c.checks.iter().filter(|x| !x.passed) {
        let _ = writeln!(s, "                     FAILED {}", x.name);
    }
    let _ = writeln!(s, "  verdict            {}", r.verdict.as_str());
    for cav in &r.caveats {
        let _ = writeln!(s, "  note: {cav}");
    }
    let _ = writeln!(s, "  elapsed            {elapsed_ms} ms");
    s
}

#[derive(Debug, Serialize)]
pub struct FamilyJson {
    pub e: i64,
    pub r: Vec<Rational>,
    pub fibers: usize,
    pub transverse: TransverseJson,
}

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TransverseJson {
    Present { a: u64, m: u64 },
    Absent { max_m_exclusive: u64, note: String },
    NotApplicable { reason: String },
}

impl FamilyJson {
    pub fn new(data: &SmallSeifertData, witness: Result<TransverseWitness, String>) -> Self {
        let transverse = match witness {
            Ok(TransverseWitness::Present { a, m }) => TransverseJson::Present { a, m },
            Ok(TransverseWitness::Absent { max_m_exclusive }) => TransverseJson::Absent {
                max_m_exclusive,
                note: "no contact structure transverse to the Seifert fibration; by the \
                       Lisca-Stipsicz equivalence M is an L-space (stated, not computed independently)"
                    .to_string(),
            },
            Err(reason) => TransverseJson::NotApplicable { reason },
        };
        FamilyJson {
            e: data.e,
            r: rats(&data.r),
            fibers: data.r.len(),
            transverse,
        }
    }
}

pub fn family_text(f: &FamilyJson) -> String {
    let mut s = String::new();
    let r: Vec<String> = f.r.iter().map(|q| format!("{}/{}", q.num, q.den)).collect();
    let _ = writeln!(
        s,
        "M({}; {})  [{} singular fibers]",
        f.e,
        r.join(", "),
        f.fibers
    );
    match &f.transverse {
        TransverseJson::Present { a, m } => {
            let _ = writeln!(
                s,
                "  transverse contact structure: yes, witness (a, m) = ({a}, {m})"
            );
        }
        TransverseJson::Absent {
            max_m_exclusive,
            note,
        } => {
            let _ = writeln!(
                s,
                "  transverse contact structure: none (searched m < {max_m_exclusive})"
            );
            let _ = writeln!(s, "  note: {note}");
        }
        TransverseJson::NotApplicable { reason } => {
            let _ = writeln!(s, "  transverse criterion not applicable: {reason}");
        }
    }
    s
}
