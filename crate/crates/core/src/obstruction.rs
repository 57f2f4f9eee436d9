//! The inequality chain that rules out contact-type embeddings of
//! `Σ(a₁,…,aₙ)` into standard symplectic ℝ⁴, evaluated exactly.
//!
//! Two branches:
//! - the plumbing form is not diagonalizable, so `Σ` bounds no integer
//!   homology ball (Donaldson) and cannot be a hypersurface in ℝ⁴;
//! - the form is diagonalizable, and the maximal sharp pairing `P` forces
//!   `2(τ_ξ − τ_sm) ≥ tw(ξ) + P + 1 > 0` for the regular fiber, which is
//!   incompatible with a symplectically convex filling.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{ceil_sqrt, crt, isqrt};
use crate::error::{Error, Result};
use crate::lattice::{self, DInvariant, DiagonalizationCertificate, DualClass, SearchConfig};
use crate::plumbing::{self, IntersectionForm, PlumbingGraph};
use crate::seifert::{
    self, GluingData, Multiplicities, NormalizedPresentation, SeifertPresentation,
};

fn rat(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn int(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Least integer strictly greater than `−√A`, i.e. `−isqrt(A − 1)`.
pub fn twist_lower_bound(a: &BigInt) -> BigInt {
    assert!(a.is_positive(), "A must be positive");
    -isqrt(&(a - 1))
}

/// Upper bounds on `τ_sm` of a regular fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothTauUpper {
    /// `(A − ⌈√A⌉)/2`, the integral consequence of `2τ_sm ≤ A − √A`.
    pub paper_form: BigRational,
    /// `(A − P)/2`.
    pub sharp_form: BigRational,
}

/// `(A − ⌈√A⌉)/2`.
pub fn sqrt_form_tau_upper(a: &BigInt) -> BigRational {
    rat(a - ceil_sqrt(a), BigInt::from(2))
}

pub fn smooth_tau_upper(a: &BigInt, p: Option<&BigInt>) -> Result<SmoothTauUpper> {
    let p = p.ok_or(Error::NotDiagonalizable)?;
    Ok(SmoothTauUpper {
        paper_form: sqrt_form_tau_upper(a),
        sharp_form: rat(a - p, BigInt::from(2)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactTauLower {
    /// `(tw + A + 1)/2`
    pub tau_lower: BigRational,
    /// Thurston–Bennequin number of the fiber, `tw + A`.
    pub tb: BigInt,
}

pub fn contact_tau_lower(a: &BigInt, tw: &BigInt) -> ContactTauLower {
    ContactTauLower {
        tau_lower: rat(tw + a + 1, BigInt::from(2)),
        tb: tw + a,
    }
}

/// Lower bound on `2(τ_ξ − τ_sm)` at the least admissible twist number:
/// `tw_min + P + 1`.
pub fn tau_gap_lower(a: &BigInt, p: Option<&BigInt>) -> Result<BigRational> {
    let p = p.ok_or(Error::NotDiagonalizable)?;
    Ok(int(twist_lower_bound(a) + p + 1))
}

/// Dividing slope `(bk + v)/(ak + u)` of a standard neighborhood of a
/// Legendrian exceptional fiber with twist `k`, seen from the base side.
pub fn fiber_boundary_slope(
    a: &BigInt,
    b: &BigInt,
    u: &BigInt,
    v: &BigInt,
    k: &BigInt,
) -> BigRational {
    let den = a * k + u;
    assert!(!den.is_zero(), "ak + u vanishes");
    rat(b * k + v, den)
}

/// Slope of the vertical ruling measured on the solid torus, `−a/u`.
pub fn ruling_slope(a: &BigInt, u: &BigInt) -> BigRational {
    assert!(u.is_positive() && u < a, "gluing coefficient out of range");
    rat(-a, u.clone())
}

/// Common value `d = aᵢkᵢ + uᵢ` for twist-balanced fibers in `indices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedTwists {
    pub indices: Vec<usize>,
    pub d: BigInt,
    pub k: Vec<BigInt>,
}

/// Largest negative `d` with `d ≡ uᵢ (mod aᵢ)` on `indices` (0-based), and
/// `kᵢ = (d − uᵢ)/aᵢ`.
pub fn balanced_twists(
    p: &SeifertPresentation,
    g: &GluingData,
    indices: &[usize],
) -> BalancedTwists {
    assert!(indices.len() >= 2, "need at least two fibers");
    let m = &p.multiplicities;
    let moduli: Vec<BigInt> = indices.iter().map(|&i| m.get(i)).collect();
    let residues: Vec<BigInt> = indices.iter().map(|&i| g.u[i].clone()).collect();
    let (r, modulus) = crt(&residues, &moduli).expect("multiplicities are pairwise coprime");
    let d = if r.is_zero() { -modulus } else { r - modulus };
    let k = indices
        .iter()
        .map(|&i| {
            let (q, rem) = (&d - &g.u[i]).div_rem(&m.get(i));
            debug_assert!(rem.is_zero());
            q
        })
        .collect();
    BalancedTwists {
        indices: indices.to_vec(),
        d,
        k,
    }
}

/// Dividing slope of the cut-and-round torus: `Σ sᵢ − (n − 2)/d`.
pub fn cut_and_round_slope(s: &[BigRational], d: &BigInt, n: usize) -> BigRational {
    assert!(d.is_negative(), "d must be negative");
    assert_eq!(s.len() + 1, n, "expects n − 1 slopes");
    let sum: BigRational = s.iter().cloned().sum();
    sum - rat(BigInt::from(n as i64 - 2), d.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCertificate {
    pub indices: Vec<usize>,
    pub d: BigInt,
    pub k: Vec<BigInt>,
    pub slopes: Vec<BigRational>,
    pub ruling_slopes: Vec<BigRational>,
    pub s_tcr: BigRational,
    /// `b₁/a₁ + ⋯ + b_{n−1}/a_{n−1}`
    pub partial_slope_sum: BigRational,
    /// Twist number `−a₁⋯a_{n−1}` of the vertical Legendrian; its existence
    /// is a contact-geometric statement and is recorded, not certified.
    pub vertical_twist: BigInt,
    /// For each `kₙ`, whether `Σ_{i<n} bᵢ/aᵢ ≥ −sₙ(kₙ)` holds. This tight
    /// form holds exactly when `|aₙkₙ + uₙ| ≥ a₁⋯a_{n−1}`.
    pub tight_slope_inequality: Vec<(BigInt, bool)>,
    pub checks: Vec<Check>,
}

impl TwistCertificate {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn verify_twist_chain(
    p: &SeifertPresentation,
    g: &GluingData,
    kn_range: &[BigInt],
) -> TwistCertificate {
    let m = &p.multiplicities;
    let n = m.len();
    let last = n - 1;
    let indices: Vec<usize> = (0..last).collect();
    let balanced = balanced_twists(p, g, &indices);

    let mut checks = Vec::new();
    checks.push(Check::new("d_negative", balanced.d.is_negative()));
    checks.push(Check::new(
        "balanced",
        indices
            .iter()
            .zip(&balanced.k)
            .all(|(&i, k)| m.get(i) * k + &g.u[i] == balanced.d && *k <= -BigInt::one()),
    ));

    let ruling_slopes: Vec<BigRational> =
        (0..n).map(|i| ruling_slope(&m.get(i), &g.u[i])).collect();
    let minus_one = -BigRational::one();
    checks.push(Check::new(
        "ruling_reciprocal_in_(-1,0)",
        ruling_slopes.iter().all(|r| {
            let inv = r.recip();
            inv > minus_one && inv.is_negative()
        }),
    ));

    let slopes: Vec<BigRational> = indices
        .iter()
        .zip(&balanced.k)
        .map(|(&i, k)| fiber_boundary_slope(&m.get(i), &p.bs[i], &g.u[i], &g.v[i], k))
        .collect();
    let s_tcr = cut_and_round_slope(&slopes, &balanced.d, n);
    let partial_slope_sum: BigRational = indices
        .iter()
        .map(|&i| rat(p.bs[i].clone(), m.get(i)))
        .sum();
    checks.push(Check::new(
        "cut_and_round_slope_bound",
        s_tcr >= partial_slope_sum,
    ));

    let an = m.get(last);
    let bn = &p.bs[last];
    let last_ratio = rat(bn.clone(), an.clone());
    checks.push(Check::new(
        "partial_sum_identity",
        partial_slope_sum == rat(BigInt::one(), m.product().clone()) - &last_ratio,
    ));

    let lhs = BigRational::one() - &last_ratio;
    let mut tight_slope_inequality = Vec::with_capacity(kn_range.len());
    for kn in kn_range {
        let neg_sn = -fiber_boundary_slope(&an, bn, &g.u[last], &g.v[last], kn);
        checks.push(Check::new(
            format!("slope_inequality_kn={kn}"),
            lhs >= neg_sn,
        ));
        tight_slope_inequality.push((kn.clone(), partial_slope_sum >= neg_sn));
    }

    let vertical_twist = -indices.iter().map(|&i| m.get(i)).product::<BigInt>();

    TwistCertificate {
        indices,
        d: balanced.d,
        k: balanced.k,
        slopes,
        ruling_slopes,
        s_tcr,
        partial_slope_sum,
        vertical_twist,
        tight_slope_inequality,
        checks,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ObstructedDonaldson,
    ObstructedFloerGap,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ObstructedDonaldson => "obstructed_donaldson",
            Verdict::ObstructedFloerGap => "obstructed_floer_gap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    pub search: SearchConfig,
    /// `kₙ` ranges over `{−1, …, kn_bound}`.
    pub kn_bound: i64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            search: SearchConfig::default(),
            kn_bound: -10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub multiplicities: Multiplicities,
    pub presentation: SeifertPresentation,
    pub normalized: NormalizedPresentation,
    pub gluing: GluingData,
    pub plumbing: PlumbingGraph,
    pub form: IntersectionForm,
    pub inverse_entry_11: BigRational,
    pub dual: DualClass,
    pub diagonalization: DiagonalizationCertificate,
    pub max_sharp_pairing: Option<BigInt>,
    pub d_invariant: DInvariant,
    pub tw_min: BigInt,
    pub smooth_tau_upper_sqrt: BigRational,
    pub smooth_tau_upper_sharp: Option<BigRational>,
    pub contact_tau_lower_at_tw_min: ContactTauLower,
    pub gap_lower: Option<BigRational>,
    pub twist_certificate: TwistCertificate,
    pub verdict: Verdict,
    pub caveats: Vec<String>,
}

pub fn verdict(m: &Multiplicities, config: PipelineConfig) -> Result<ObstructionReport> {
    let a = m.product().clone();
    let presentation = seifert::solve_unnormalized(m);
    let normalized = seifert::normalize(&presentation);
    let gluing = seifert::gluing_data(&presentation);
    let graph = plumbing::build_plumbing(&normalized, m);
    let form = plumbing::intersection_form(&graph);
    assert!(
        form.negative_definite && form.is_unimodular(),
        "plumbing form must be unimodular and negative definite"
    );
    let inverse_entry_11 = plumbing::inverse_entry_11(&form)?;
    assert_eq!(inverse_entry_11, int(-a.clone()), "(Q⁻¹)₁₁ = −A");
    let dual = lattice::dual_class(&form)?;

    let diagonalization = lattice::diagonalize(&form, config.search)?;
    let max_sharp_pairing = match diagonalization.is_present() {
        true => Some(lattice::max_sharp_pairing(&form, &diagonalization, &dual)?),
        false => None,
    };
    let d_invariant = lattice::d_invariant(&form, config.search)?;

    let tw_min = twist_lower_bound(&a);
    let smooth_tau_upper_sqrt = sqrt_form_tau_upper(&a);
    let smooth_tau_upper_sharp = match &max_sharp_pairing {
        Some(p) => Some(smooth_tau_upper(&a, Some(p))?.sharp_form),
        None => None,
    };
    let contact_tau_lower_at_tw_min = contact_tau_lower(&a, &tw_min);
    let gap_lower = match &max_sharp_pairing {
        Some(p) => Some(tau_gap_lower(&a, Some(p))?),
        None => None,
    };

    let kn_range: Vec<BigInt> = (config.kn_bound..=-1).rev().map(BigInt::from).collect();
    let twist_certificate = verify_twist_chain(&presentation, &gluing, &kn_range);

    let mut caveats = vec![
        "d-invariant is the maximal characteristic square of the plumbing; it equals d(Y) because \
         these star-shaped plumbings carry sharp spin^c structures"
            .to_string(),
        format!(
            "vertical Legendrian twist {} is asserted by the convex-surface argument, not certified here",
            twist_certificate.vertical_twist
        ),
        "rotation numbers are not modeled; |rot(K)| >= 0 is discarded from the tb bound".to_string(),
    ];
    let verdict = if diagonalization.is_present() {
        assert!(
            d_invariant.value.is_zero(),
            "diagonalizable forms have d = 0"
        );
        caveats.push(
            "Floer-gap branch: any contact structure with tw >= tw_min has tau_xi > tau_sm on a regular \
             fiber, so it bounds no symplectically convex domain"
                .to_string(),
        );
        Verdict::ObstructedFloerGap
    } else {
        caveats.push(
            "Donaldson branch: the plumbing form is not diagonalizable, so Y bounds no integer homology \
             ball and has no embedding in R^4 as a hypersurface"
                .to_string(),
        );
        Verdict::ObstructedDonaldson
    };

    Ok(ObstructionReport {
        multiplicities: m.clone(),
        presentation,
        normalized,
        gluing,
        plumbing: graph,
        form,
        inverse_entry_11,
        dual,
        diagonalization,
        max_sharp_pairing,
        d_invariant,
        tw_min,
        smooth_tau_upper_sqrt,
        smooth_tau_upper_sharp,
        contact_tau_lower_at_tw_min,
        gap_lower,
        twist_certificate,
        verdict,
        caveats,
    })
}
