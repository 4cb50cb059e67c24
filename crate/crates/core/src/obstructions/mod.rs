//! Obstruction inequalities and the certified bound intervals they produce.

mod aggregate;
mod search;

use std::fmt;

use crate::casson_gordon::CgError;
use crate::ccomplex_link::{multivariable_signature_nullity_with, CComplexData, CComplexError, LinkSignature};
use crate::exact_algebra::{prime_power_base, RootOfUnity, DEFAULT_PRECISION_BITS};
use crate::linking_form::LinkingFormError;
use crate::seifert_knot::SeifertError;

pub use aggregate::{
    aggregate, replay, AggregateReport, Assertion, BoundReport, Contribution, KnotSubject, LinkSubject,
    ProvenanceEntry, Quantity, RuleId, RuleSet, StablySliceInputs, Subject, Witness,
};
pub use search::{
    cg_sn_obstruct, cg_sn_obstruct_by_splittings, gilmer_g4_obstruct, gilmer_g4_obstruct_by_splittings,
    InequalityInstance, ObstructionResult, ObstructionWitness, Refutation, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObstructionError {
    #[error("evaluation point {point} is not admissible (orders must be powers of one prime)")]
    InadmissiblePoint { point: String },
    #[error("inconsistent bounds for {quantity}: lower {lower} exceeds upper {upper}")]
    InconsistentBounds { quantity: Quantity, lower: u64, upper: u64 },
    #[error("rule {0} does not apply to this input")]
    RuleNotApplicable(RuleId),
    #[error(transparent)]
    CassonGordon(#[from] CgError),
    #[error(transparent)]
    LinkingForm(#[from] LinkingFormError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    CComplex(#[from] CComplexError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub assume_admissible: bool,
    pub precision_bits: u32,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            assume_admissible: false,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }
}

/// Data of a nullhomologous cobordism Σ ⊂ (S³ × I) # V between two colored links.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismContext {
    pub sign_v: i64,
    pub euler_v: i64,
    pub euler_surfaces: Vec<i64>,
    pub double_points: u64,
}

/// Both sides of |σ' − σ + sign V| + |η' − η| ≤ c − Σχ(Σᵢ) + χ(V) − 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismInequality {
    /// σ', σ and sign V, the operands of the signature term.
    pub operands: [i64; 3],
    pub signature_term: i64,
    pub nullity_term: i64,
    pub bound: i64,
}

impl CobordismInequality {
    pub fn holds(&self) -> bool {
        self.signature_term.abs() + self.nullity_term.abs() <= self.bound
    }
}

impl fmt::Display for CobordismInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [to, from, sign] = self.operands;
        let paren = |x: i64| if x < 0 { format!("({x})") } else { x.to_string() };
        let op = if sign < 0 { '-' } else { '+' };
        write!(
            f,
            "|{to} - {} {op} {}| + {} ≤ {}",
            paren(from),
            sign.abs(),
            self.nullity_term.abs(),
            self.bound
        )
    }
}

pub fn cobordism_inequality(
    ctx: &CobordismContext,
    sigma_l: i64,
    eta_l: i64,
    sigma_l2: i64,
    eta_l2: i64,
) -> CobordismInequality {
    let surfaces: i64 = ctx.euler_surfaces.iter().sum();
    CobordismInequality {
        operands: [sigma_l2, sigma_l, ctx.sign_v],
        signature_term: sigma_l2 - sigma_l + ctx.sign_v,
        nullity_term: eta_l2 - eta_l,
        bound: ctx.double_points as i64 - surfaces + ctx.euler_v - 2,
    }
}

/// Whether the cobordism inequality holds for L → L' at a common ω.
pub fn nullhomologous_cobordism_check(
    ctx: &CobordismContext,
    sigma_l: i64,
    eta_l: i64,
    sigma_l2: i64,
    eta_l2: i64,
) -> bool {
    cobordism_inequality(ctx, sigma_l, eta_l, sigma_l2, eta_l2).holds()
}

/// All coordinates ≠ 1 with orders powers of a single prime.
pub fn is_admissible(point: &[RootOfUnity]) -> bool {
    let mut prime = None;
    for w in point {
        match prime_power_base(w.order()) {
            Some(p) if prime.is_none_or(|q| q == p) => prime = Some(p),
            _ => return false,
        }
    }
    !point.is_empty()
}

pub(crate) fn format_point(point: &[RootOfUnity]) -> String {
    let parts: Vec<String> = point.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// |σ_L(ω)| + |η_L(ω) − m + 1| at one point, and the bound ⌈·/2⌉ it gives on sn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointBound {
    pub omega: Vec<RootOfUnity>,
    pub signature: LinkSignature,
    pub value: u64,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnLowerBound {
    pub lower: u64,
    pub witness: Option<PointBound>,
    pub points: Vec<PointBound>,
}

pub fn point_bound(
    cc: &CComplexData,
    omega: &[RootOfUnity],
    opts: &EvalOptions,
) -> Result<PointBound, ObstructionError> {
    if !opts.assume_admissible && !is_admissible(omega) {
        return Err(ObstructionError::InadmissiblePoint {
            point: format_point(omega),
        });
    }
    let m = cc.num_components() as i64;
    let s = multivariable_signature_nullity_with(cc, omega, opts.precision_bits)?;
    let value = s.sigma.unsigned_abs() + (s.eta as i64 - m + 1).unsigned_abs();
    Ok(PointBound {
        omega: omega.to_vec(),
        signature: s,
        value,
        bound: value.div_ceil(2),
    })
}

/// sn(L) ≥ max over the points of ⌈(|σ_L(ω)| + |η_L(ω) − m + 1|)/2⌉.
pub fn sn_lower_bound(
    cc: &CComplexData,
    points: &[Vec<RootOfUnity>],
    opts: &EvalOptions,
) -> Result<SnLowerBound, ObstructionError> {
    let points: Vec<PointBound> = points
        .iter()
        .map(|w| point_bound(cc, w, opts))
        .collect::<Result<_, _>>()?;
    let witness = points
        .iter()
        .fold(None::<&PointBound>, |best, p| match best {
            Some(b) if b.bound >= p.bound => Some(b),
            _ => Some(p),
        })
        .cloned();
    Ok(SnLowerBound {
        lower: witness.as_ref().map_or(0, |w| w.bound),
        witness,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::IntegerMatrix;

    #[test]
    fn cobordism_examples() {
        let cp2bar = CobordismContext {
            sign_v: -1,
            euler_v: 3,
            euler_surfaces: vec![0],
            double_points: 0,
        };
        let ineq = cobordism_inequality(&cp2bar, -2, 0, 0, 0);
        assert_eq!(ineq.to_string(), "|0 - (-2) - 1| + 0 ≤ 1");
        assert_eq!(ineq.signature_term, 1);
        assert!(ineq.holds());
        let s4 = CobordismContext {
            sign_v: 0,
            euler_v: 2,
            euler_surfaces: vec![0],
            double_points: 0,
        };
        assert!(nullhomologous_cobordism_check(&s4, 0, 0, 0, 0));
        assert!(!nullhomologous_cobordism_check(&s4, -2, 0, 0, 0));
    }

    #[test]
    fn admissibility() {
        let w = |k, d| RootOfUnity::new(k, d);
        assert!(is_admissible(&[w(1, 2), w(1, 4)]));
        assert!(is_admissible(&[w(1, 9)]));
        assert!(!is_admissible(&[w(1, 2), w(1, 3)]));
        assert!(!is_admissible(&[w(1, 15)]));
        assert!(!is_admissible(&[w(0, 1)]));
        assert!(!is_admissible(&[]));
    }

    #[test]
    fn six_component_bound() {
        let a = IntegerMatrix::from_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        let cc = CComplexData::constant(3, vec![0, 0, 1, 1, 2, 2], a).unwrap();
        let half = RootOfUnity::minus_one();
        let r = sn_lower_bound(&cc, &[vec![half; 3]], &EvalOptions::default()).unwrap();
        assert_eq!(r.lower, 2);
        let w = r.witness.unwrap();
        assert_eq!(w.value, 4);
        assert_eq!(w.signature, LinkSignature { sigma: -1, eta: 2 });
        let bad = [vec![half, half, RootOfUnity::new(1, 3)]];
        assert!(matches!(
            sn_lower_bound(&cc, &bad, &EvalOptions::default()),
            Err(ObstructionError::InadmissiblePoint { .. })
        ));
        let opts = EvalOptions {
            assume_admissible: true,
            ..EvalOptions::default()
        };
        assert!(sn_lower_bound(&cc, &bad, &opts).is_ok());
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::casson_gordon::{CgEvaluation, CgValue};
    use crate::exact_algebra::IntegerMatrix;
    use crate::linking_form::{GroupElement, LinkingForm};
    use crate::seifert_knot::SeifertMatrix;
    use crate::testing::{ccomplex, point, seifert, unimodular};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn zero_cg(_: &GroupElement) -> Result<CgEvaluation, CgError> {
        Ok(CgEvaluation {
            value: CgValue::default(),
            terms: vec![],
        })
    }

    /// Hyperbolic blocks [[0, d], [d, 0]] moved by a unimodular congruence.
    fn metabolic_form() -> impl Strategy<Value = LinkingForm> {
        prop::collection::vec(prop::sample::select(vec![2i64, 3, 4, 5, 6]), 1..=2)
            .prop_flat_map(|ds| {
                let n = 2 * ds.len();
                (Just(ds), unimodular(n))
            })
            .prop_map(|(ds, p)| {
                let blocks: Vec<IntegerMatrix> = ds
                    .iter()
                    .map(|&d| IntegerMatrix::from_rows(&[[0, d], [d, 0]]))
                    .collect();
                let b = IntegerMatrix::block_diag(&blocks, BigInt::from(0));
                LinkingForm::new(p.transpose().mul(&b).mul(&p)).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn zero_inputs_are_not_obstructed(lf in metabolic_form(), c in 0u64..=2) {
            prop_assert_eq!(gilmer_g4_obstruct(&lf, c, 0, &zero_cg).unwrap().verdict, Verdict::NotObstructed);
            prop_assert_eq!(cg_sn_obstruct(&lf, c, 0, &zero_cg).unwrap().verdict, Verdict::NotObstructed);
            prop_assert_eq!(
                gilmer_g4_obstruct_by_splittings(&lf, c, 0, &zero_cg).unwrap().verdict,
                Verdict::NotObstructed
            );
        }

        #[test]
        fn obstruction_is_monotone_and_routes_agree(lf in metabolic_form(), v in 0i64..=12, sigma in -2i64..=2) {
            let eval = move |x: &GroupElement| -> Result<CgEvaluation, CgError> {
                let weight = x.0.iter().sum::<u64>() as i64 % 3;
                Ok(CgEvaluation { value: CgValue::from_ints(v * weight, 0), terms: vec![] })
            };
            let mut previous = Verdict::Obstructed;
            for g in 0..=3 {
                let a = gilmer_g4_obstruct(&lf, g, sigma, &eval).unwrap().verdict;
                let b = gilmer_g4_obstruct_by_splittings(&lf, g, sigma, &eval).unwrap().verdict;
                prop_assert_eq!(a, b, "genus {}", g);
                if previous == Verdict::NotObstructed {
                    prop_assert_eq!(a, Verdict::NotObstructed);
                }
                previous = a;
            }
            for n in 0..=1 {
                let a = cg_sn_obstruct(&lf, n, sigma, &eval).unwrap().verdict;
                let b = cg_sn_obstruct_by_splittings(&lf, n, sigma, &eval).unwrap().verdict;
                prop_assert_eq!(a, b, "n {}", n);
            }
        }

        #[test]
        fn more_points_never_lower_the_bound(
            (cc, a, b) in ccomplex().prop_flat_map(|cc| {
                let mu = cc.num_colors();
                (Just(cc), prop::collection::vec(point(mu), 1..3), prop::collection::vec(point(mu), 1..3))
            })
        ) {
            let opts = EvalOptions { assume_admissible: true, ..EvalOptions::default() };
            let small = sn_lower_bound(&cc, &a, &opts).unwrap().lower;
            let both: Vec<_> = a.iter().chain(&b).cloned().collect();
            prop_assert!(sn_lower_bound(&cc, &both, &opts).unwrap().lower >= small);
        }

        #[test]
        fn provenance_replays(s in seifert(3), upper in 0u64..=4) {
            let mut k = KnotSubject::new(s);
            k.points = vec![RootOfUnity::minus_one(), RootOfUnity::new(1, 3), RootOfUnity::new(2, 5)];
            k.assertions = vec![Assertion { quantity: Quantity::G4, upper: upper + 3, note: "given".into() }];
            let subject = Subject::Knot(k);
            let opts = EvalOptions::default();
            let report = aggregate(&subject, &RuleSet::all(), &opts).unwrap();
            for e in report.sn.provenance.iter().chain(report.g4.iter().flat_map(|g| &g.provenance)) {
                prop_assert_eq!(replay(&subject, e, &opts).unwrap(), e.contribution);
            }
        }
    }

    #[test]
    fn seifert_subject_round_trip() {
        let s = SeifertMatrix::from_rows(&[[0, 1], [2, 0]]).unwrap();
        let r = aggregate(
            &Subject::Knot(KnotSubject::new(s)),
            &RuleSet::all(),
            &EvalOptions::default(),
        )
        .unwrap();
        assert_eq!(r.sn.to_string(), "sn ∈ [0, 1]");
    }
}
