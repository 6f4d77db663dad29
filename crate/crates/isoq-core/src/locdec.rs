//! Local decisions: does a quadratic space over F_q, Q_p, or R admit an
//! isometry with a prescribed module?
//!
//! All three backends run the same reduction first: split the module into
//! its odd semisimplification Mbar plus a hyperbolic complement of dimension
//! 2 tau. Over F_q the complement only shifts the determinant by (-1)^tau;
//! over Q_p it costs tau from the Witt index; over R it costs (tau, tau)
//! from the signature.

use num_bigint::BigInt;
use num_traits::Zero;
use std::fmt;

use crate::arith::{is_local_square, is_prime_u64, legendre, Place};
use crate::kxmodule::{KxError, ModuleSpec};
use crate::poly::modp::FpPoly;
use crate::qspace::QuadraticSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Undecided,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Yes => write!(f, "YES"),
            Answer::No => write!(f, "NO"),
            Answer::Undecided => write!(f, "UNDECIDED"),
        }
    }
}

/// The condition a local NO or UNDECIDED hangs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalReason {
    DetCondition,
    WittIndex,
    Signature,
    Parity,
    PairingUnresolved,
}

impl fmt::Display for LocalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            LocalReason::DetCondition => "DET_CONDITION",
            LocalReason::WittIndex => "WITT_INDEX",
            LocalReason::Signature => "SIGNATURE",
            LocalReason::Parity => "PARITY",
            LocalReason::PairingUnresolved => "PAIRING_UNRESOLVED",
        };
        write!(f, "{}", tag)
    }
}

/// Which completion or finite field the verdict speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalField {
    Finite(u64),
    Padic(u64),
    Real,
}

impl fmt::Display for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalField::Finite(q) => write!(f, "F_{}", q),
            LocalField::Padic(p) => write!(f, "Q_{}", p),
            LocalField::Real => write!(f, "R"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalVerdict {
    pub answer: Answer,
    /// None exactly on YES.
    pub reason: Option<LocalReason>,
    pub place: LocalField,
}

impl LocalVerdict {
    pub fn yes(place: LocalField) -> LocalVerdict {
        LocalVerdict { answer: Answer::Yes, reason: None, place }
    }

    pub fn no(place: LocalField, reason: LocalReason) -> LocalVerdict {
        LocalVerdict { answer: Answer::No, reason: Some(reason), place }
    }

    pub fn undecided(place: LocalField, reason: LocalReason) -> LocalVerdict {
        LocalVerdict { answer: Answer::Undecided, reason: Some(reason), place }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocDecError {
    DimensionMismatch { form: usize, module: usize },
    /// A diagonal entry vanished over F_q.
    DegenerateForm,
    /// The finite-field backend supports odd primes q only.
    UnsupportedField(u64),
    NotPrime(u64),
    Module(KxError),
}

impl fmt::Display for LocDecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocDecError::DimensionMismatch { form, module } => {
                write!(f, "form has dimension {} but the module has {}", form, module)
            }
            LocDecError::DegenerateForm => write!(f, "degenerate form (zero diagonal entry)"),
            LocDecError::UnsupportedField(q) => {
                write!(f, "unsupported field F_{} (odd primes only)", q)
            }
            LocDecError::NotPrime(p) => write!(f, "{} is not prime", p),
            LocDecError::Module(e) => write!(f, "module error: {}", e),
        }
    }
}

impl std::error::Error for LocDecError {}

/// One component [F_q[X]/(f^e)]^n of a module over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FfComponent {
    pub f: FpPoly,
    pub e: u32,
    pub n: u32,
}

impl FfComponent {
    pub fn dim(&self) -> usize {
        self.f.deg() * self.e as usize * self.n as usize
    }
}

/// Self-dual torsion F_q[X]-module, validated on construction: components
/// must be irreducible over F_q, the dual of every component must be present
/// with the same exponent and multiplicity, and even-exponent components at
/// the eigenvalues +-1 need even multiplicity (no isometry realizes them
/// otherwise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FfModuleSpec {
    q: u64,
    components: Vec<FfComponent>,
}

impl FfModuleSpec {
    pub fn new(q: u64, raw: Vec<(FpPoly, u32, u32)>) -> Result<FfModuleSpec, LocDecError> {
        if q == 2 || !is_prime_u64(q) {
            return Err(LocDecError::UnsupportedField(q));
        }
        let mut components: Vec<FfComponent> = Vec::new();
        for (f, e, n) in raw {
            assert_eq!(f.p, q, "component polynomial built over the wrong field");
            if f.is_zero() || !f.is_monic() || f.deg() == 0 {
                return Err(LocDecError::Module(KxError::BadPolynomial));
            }
            if e == 0 || n == 0 {
                return Err(LocDecError::Module(KxError::BadCount));
            }
            match components.iter_mut().find(|c| c.f == f && c.e == e) {
                Some(c) => c.n += n,
                None => components.push(FfComponent { f, e, n }),
            }
        }
        components.sort_by(|a, b| {
            (a.f.deg(), a.f.coeffs(), a.e).cmp(&(b.f.deg(), b.f.coeffs(), b.e))
        });
        for c in &components {
            if c.f.coeff(0) == 0 {
                return Err(LocDecError::Module(KxError::MissingPartner(format!(
                    "{} is not invertible on its component",
                    c.f
                ))));
            }
            if !c.f.is_irreducible() {
                return Err(LocDecError::Module(KxError::Reducible(c.f.to_string())));
            }
            let dual = c.f.star();
            if dual == c.f {
                // X -+ 1 when linear; the unipotent realizability constraint
                if c.f.deg() == 1 && c.e % 2 == 0 && c.n % 2 == 1 {
                    return Err(LocDecError::Module(KxError::Unrealizable(format!(
                        "[F_{}[X]/(({})^{})]^{} needs even multiplicity",
                        q, c.f, c.e, c.n
                    ))));
                }
            } else {
                let found = components.iter().any(|d| d.e == c.e && d.n == c.n && d.f == dual);
                if !found {
                    return Err(LocDecError::Module(KxError::MissingPartner(format!(
                        "({}, e = {}, n = {}) for {}",
                        dual, c.e, c.n, c.f
                    ))));
                }
            }
        }
        Ok(FfModuleSpec { q, components })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn components(&self) -> &[FfComponent] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(FfComponent::dim).sum()
    }
}

fn mulq(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn powq(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulq(acc, b, q);
        }
        b = mulq(b, b, q);
        e >>= 1;
    }
    acc
}

/// Decision over F_q (q an odd prime): a diagonal form admits an isometry
/// with the given module iff det(q_diag) * (-1)^tau * F(1)F(-1) is a square
/// in F_q, where F is the characteristic polynomial of the odd
/// semisimplification and tau its hyperbolic defect; a vanishing product
/// (an eigenvalue at +-1 surviving the reduction) makes the condition
/// vacuous. Every form over F_q has enough Witt index for the reduction, so
/// no further condition appears.
pub fn decide_finite_field(
    q_diag: &[u64],
    spec: &FfModuleSpec,
) -> Result<LocalVerdict, LocDecError> {
    let q = spec.q();
    if q_diag.len() != spec.dim() {
        return Err(LocDecError::DimensionMismatch { form: q_diag.len(), module: spec.dim() });
    }
    let mut det = 1u64;
    for &a in q_diag {
        if a % q == 0 {
            return Err(LocDecError::DegenerateForm);
        }
        det = mulq(det, a, q);
    }

    let mut value = det;
    let mut dropped = 0usize;
    for c in spec.components() {
        if c.f == c.f.star() && c.e % 2 == 1 {
            // kept in the reduction with exponent lowered to 1
            dropped += c.f.deg() * (c.e as usize - 1) * c.n as usize;
            let ends = mulq(c.f.eval(1), c.f.eval(q - 1), q);
            value = mulq(value, powq(ends, c.n as u64, q), q);
        } else {
            dropped += c.dim();
        }
    }
    debug_assert_eq!(dropped % 2, 0);
    let tau = dropped / 2;
    if tau % 2 == 1 {
        value = mulq(value, q - 1, q);
    }

    let field = LocalField::Finite(q);
    let square = legendre(&BigInt::from(value), q).expect("q is an odd prime");
    if square >= 0 {
        Ok(LocalVerdict::yes(field))
    } else {
        Ok(LocalVerdict::no(field, LocalReason::DetCondition))
    }
}

/// Decision over Q_p. After the tau-reduction (which needs local Witt index
/// at least tau), the reduced module is localized: a nonzero local type-1
/// part makes the determinant condition det * (-1)^tau * F(1)F(-1) square
/// (or zero) decisive; with no local type-1 part the form must instead split
/// as many hyperbolic planes as the local type-2 half-dimension demands.
pub fn decide_padic(
    gram: &QuadraticSpace,
    spec: &ModuleSpec,
    p: u64,
) -> Result<LocalVerdict, LocDecError> {
    if !is_prime_u64(p) {
        return Err(LocDecError::NotPrime(p));
    }
    if gram.dim() != spec.dim() {
        return Err(LocDecError::DimensionMismatch { form: gram.dim(), module: spec.dim() });
    }
    spec.validate().map_err(LocDecError::Module)?;
    let field = LocalField::Padic(p);
    let place = Place::Prime(p);

    let (mbar, tau) = spec.odd_semisimplification();
    let form = gram.diagonal_form();
    let witt = form.witt_index_at(place);
    if witt < tau {
        return Ok(LocalVerdict::no(field, LocalReason::WittIndex));
    }

    let shape = mbar.localize(place).map_err(LocDecError::Module)?;
    if !shape.resolved {
        return Ok(LocalVerdict::undecided(field, LocalReason::PairingUnresolved));
    }

    if shape.n1_dim > 0 {
        let fm = mbar.characteristic_polynomial();
        let ends = fm.eval_i64(1) * fm.eval_i64(-1);
        if ends.is_zero() {
            return Ok(LocalVerdict::yes(field));
        }
        // det of the reduced form: splitting tau hyperbolic planes costs (-1)^tau
        let mut value = gram.det() * ends;
        if tau % 2 == 1 {
            value = -value;
        }
        let square = is_local_square(&value, place).expect("nonzero rational");
        return if square {
            Ok(LocalVerdict::yes(field))
        } else {
            Ok(LocalVerdict::no(field, LocalReason::DetCondition))
        };
    }

    // no local type-1 mass: everything beyond the type-0 part is locally
    // paired and forces hyperbolic planes
    if witt - tau >= shape.n2_half_dim {
        Ok(LocalVerdict::yes(field))
    } else {
        Ok(LocalVerdict::no(field, LocalReason::WittIndex))
    }
}

/// Decision over R from the signature (r, s): both entries must be at least
/// tau + sigma, where sigma is half the number of off-circle roots of the
/// reduced module, and when the reduction leaves no eigenvalue at +-1 the
/// excess must be even (the on-circle part contributes signature in pairs).
pub fn decide_real(
    signature: (usize, usize),
    spec: &ModuleSpec,
) -> Result<LocalVerdict, LocDecError> {
    let (r, s) = signature;
    if r + s != spec.dim() {
        return Err(LocDecError::DimensionMismatch { form: r + s, module: spec.dim() });
    }
    spec.validate().map_err(LocDecError::Module)?;
    let field = LocalField::Real;

    let (mbar, tau) = spec.odd_semisimplification();
    let shape = mbar.localize(Place::Real).map_err(LocDecError::Module)?;
    let need = tau + shape.n2_half_dim;
    if r < need || s < need {
        return Ok(LocalVerdict::no(field, LocalReason::Signature));
    }
    if shape.n0_dim == 0 && (r - need) % 2 != 0 {
        return Ok(LocalVerdict::no(field, LocalReason::Parity));
    }
    Ok(LocalVerdict::yes(field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    fn module(raw: &[(&[i64], u32, u32)]) -> ModuleSpec {
        ModuleSpec::new(raw.iter().map(|(c, e, n)| (Poly::from_i64(c), *e, *n)).collect())
            .unwrap()
    }

    fn ff(q: u64, raw: &[(&[i64], u32, u32)]) -> FfModuleSpec {
        FfModuleSpec::new(
            q,
            raw.iter().map(|(c, e, n)| (FpPoly::from_i64(q, c), *e, *n)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn finite_field_square_criterion() {
        // det <1,1> * (X^2+1)(1) * (X^2+1)(-1) = 4, a square in F_3
        let m = ff(3, &[(&[1, 0, 1], 1, 1)]);
        let v = decide_finite_field(&[1, 1], &m).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.place, LocalField::Finite(3));
        // det <1,-1> = -1 makes the product 8 = 2, a nonsquare in F_3
        let v = decide_finite_field(&[1, 2], &m).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.reason, Some(LocalReason::DetCondition));
    }

    #[test]
    fn eigenvalue_at_one_makes_every_form_admissible() {
        // X^2 - X + 1 is irreducible over F_5 (disc -3 = 2 is a nonsquare)
        let m = ff(5, &[(&[-1, 1], 1, 1), (&[1, -1, 1], 1, 1)]);
        for diag in [[1, 1, 1], [2, 1, 1], [3, 4, 2]] {
            let v = decide_finite_field(&diag, &m).unwrap();
            assert_eq!(v.answer, Answer::Yes);
        }
    }

    #[test]
    fn hyperbolic_module_over_ff_needs_matching_det() {
        // [F_3[X]/((X-1)^2)]^2 drops entirely: tau = 2, so det must be square
        let m = ff(3, &[(&[-1, 1], 2, 2)]);
        assert_eq!(decide_finite_field(&[1, 1, 1, 1], &m).unwrap().answer, Answer::Yes);
        assert_eq!(decide_finite_field(&[1, 1, 1, 2], &m).unwrap().answer, Answer::No);
    }

    #[test]
    fn odd_exponent_keeps_one_copy_over_ff() {
        // [F_3[X]/((X-1)^3)]^1: Mbar = (X-1), F(1) = 0, any ternary form works
        let m = ff(3, &[(&[-1, 1], 3, 1)]);
        assert_eq!(decide_finite_field(&[1, 1, 1], &m).unwrap().answer, Answer::Yes);
        assert_eq!(decide_finite_field(&[1, 1, 2], &m).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn ff_module_validation() {
        assert!(matches!(
            FfModuleSpec::new(9, vec![(FpPoly::from_i64(9, &[-1, 1]), 1, 1)]),
            Err(LocDecError::UnsupportedField(9))
        ));
        assert!(matches!(
            FfModuleSpec::new(2, vec![(FpPoly::from_i64(2, &[1, 1]), 1, 1)]),
            Err(LocDecError::UnsupportedField(2))
        ));
        // X^2 - 1 is reducible over F_5
        assert!(matches!(
            FfModuleSpec::new(5, vec![(FpPoly::from_i64(5, &[-1, 0, 1]), 1, 1)]),
            Err(LocDecError::Module(KxError::Reducible(_)))
        ));
        // X - 2 needs its partner X - 3 over F_5
        assert!(matches!(
            FfModuleSpec::new(5, vec![(FpPoly::from_i64(5, &[-2, 1]), 1, 1)]),
            Err(LocDecError::Module(KxError::MissingPartner(_)))
        ));
        let ok = FfModuleSpec::new(
            5,
            vec![(FpPoly::from_i64(5, &[-2, 1]), 1, 1), (FpPoly::from_i64(5, &[-3, 1]), 1, 1)],
        )
        .unwrap();
        assert_eq!(ok.dim(), 2);
        // even unipotent blocks with odd multiplicity are unrealizable
        assert!(matches!(
            FfModuleSpec::new(3, vec![(FpPoly::from_i64(3, &[-1, 1]), 2, 1)]),
            Err(LocDecError::Module(KxError::Unrealizable(_)))
        ));
        // degenerate entry
        let m = ff(3, &[(&[-1, 1], 1, 1)]);
        assert!(matches!(decide_finite_field(&[3], &m), Err(LocDecError::DegenerateForm)));
        assert!(matches!(
            decide_finite_field(&[1, 1], &m),
            Err(LocDecError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn padic_symmetric_factor_makes_det_decisive() {
        // the tenth cyclotomic is irreducible over Q_5; det 5 * F(1)F(-1) = 25
        let g = QuadraticSpace::from_diagonal_i64(&[1, 1, 1, 5]).unwrap();
        let m = module(&[(&[1, -1, 1, -1, 1], 1, 1)]);
        let v = decide_padic(&g, &m, 5).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.place, LocalField::Padic(5));
    }

    #[test]
    fn padic_det_condition_fails_with_odd_valuation() {
        // X^2 - 3X + 1 stays irreducible over Q_3; 3 * (-5) has odd valuation
        let g = QuadraticSpace::from_diagonal_i64(&[1, 3]).unwrap();
        let m = module(&[(&[1, -3, 1], 1, 1)]);
        let v = decide_padic(&g, &m, 3).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.reason, Some(LocalReason::DetCondition));
    }

    #[test]
    fn padic_split_module_needs_witt_index() {
        // X^2 - 3X + 1 splits over Q_11 into a swapped pair, so the form
        // must contain a hyperbolic plane; <1,1> is anisotropic at 11
        let g = QuadraticSpace::from_diagonal_i64(&[1, 1]).unwrap();
        let m = module(&[(&[1, -3, 1], 1, 1)]);
        let v = decide_padic(&g, &m, 11).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.reason, Some(LocalReason::WittIndex));
        // <1,-1> has Witt index 1 everywhere
        let g = QuadraticSpace::from_diagonal_i64(&[1, -1]).unwrap();
        let v = decide_padic(&g, &m, 11).unwrap();
        assert_eq!(v.answer, Answer::Yes);
    }

    #[test]
    fn padic_tau_reduction_costs_witt_index() {
        // [(X^2-3X+1)^2]: hyperbolic module of dimension 4, tau = 2
        let m = module(&[(&[1, -3, 1], 2, 1)]);
        let h2 = QuadraticSpace::hyperbolic(2);
        assert_eq!(decide_padic(&h2, &m, 7).unwrap().answer, Answer::Yes);
        let g = QuadraticSpace::from_diagonal_i64(&[1, 1, 1, 1]).unwrap();
        // <1,1,1,1> is anisotropic over Q_2: Witt index 0 < tau
        let v = decide_padic(&g, &m, 2).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.reason, Some(LocalReason::WittIndex));
    }

    #[test]
    fn real_signature_bounds() {
        let m = module(&[(&[1, -3, 1], 1, 1)]);
        assert_eq!(decide_real((1, 1), &m).unwrap().answer, Answer::Yes);
        let v = decide_real((2, 0), &m).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.reason, Some(LocalReason::Signature));
    }

    #[test]
    fn real_parity_when_no_unit_eigenvalue() {
        let m = module(&[(&[1, -1, 1, -1, 1], 1, 1)]);
        // all roots on the circle: signature must be even in each slot
        assert_eq!(decide_real((2, 2), &m).unwrap().answer, Answer::Yes);
        assert_eq!(decide_real((4, 0), &m).unwrap().answer, Answer::Yes);
        let v = decide_real((3, 1), &m).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.reason, Some(LocalReason::Parity));
    }

    #[test]
    fn real_parity_skipped_with_unit_eigenvalue() {
        // a surviving eigenvalue 1 absorbs any leftover signature parity
        let m = module(&[(&[-1, 1], 1, 1), (&[1, -1, 1, -1, 1], 1, 1)]);
        assert_eq!(decide_real((1, 4), &m).unwrap().answer, Answer::Yes);
        assert_eq!(decide_real((5, 0), &m).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn real_tau_reduction_costs_signature() {
        let m = module(&[(&[1, -3, 1], 2, 1)]);
        assert_eq!(decide_real((2, 2), &m).unwrap().answer, Answer::Yes);
        let v = decide_real((3, 1), &m).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.reason, Some(LocalReason::Signature));
    }

    #[test]
    fn padic_unresolved_pairing_is_undecided() {
        // depth-one analysis cannot separate this quartic at 5
        let f = Poly::from_i64(&[1, -19, 61, -19, 1]);
        assert!(crate::poly::factor::is_irreducible(&f));
        let m = module(&[(&[1, -19, 61, -19, 1], 1, 1)]);
        let g = QuadraticSpace::from_diagonal_i64(&[1, 1, 1, 5]).unwrap();
        let v = decide_padic(&g, &m, 5).unwrap();
        assert_eq!(v.answer, Answer::Undecided);
        assert_eq!(v.reason, Some(LocalReason::PairingUnresolved));
        // the same module is perfectly decidable at other primes
        assert!(matches!(decide_padic(&g, &m, 3).unwrap().answer, Answer::Yes | Answer::No));
    }

    #[test]
    fn input_errors() {
        let m = module(&[(&[1, -3, 1], 1, 1)]);
        let g = QuadraticSpace::from_diagonal_i64(&[1, 1, 1]).unwrap();
        assert!(matches!(
            decide_padic(&g, &m, 5),
            Err(LocDecError::DimensionMismatch { form: 3, module: 2 })
        ));
        let g2 = QuadraticSpace::from_diagonal_i64(&[1, 1]).unwrap();
        assert!(matches!(decide_padic(&g2, &m, 6), Err(LocDecError::NotPrime(6))));
        assert!(matches!(
            decide_real((2, 1), &m),
            Err(LocDecError::DimensionMismatch { .. })
        ));
    }
}
