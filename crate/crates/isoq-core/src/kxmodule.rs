//! Self-dual torsion Q[X]-modules prescribing the structure of an isometry.
//!
//! A module is a direct sum of components [Q[X]/(f^e)]^n with f monic
//! irreducible. The involute f -> f* sorts irreducibles into three types:
//! X -+ 1 (type 0), symmetric of degree >= 2 (type 1), and swapped pairs
//! (type 2, whose dual component must be present for the module to carry a
//! form at all). This module computes the type split, the characteristic
//! polynomial, the odd semisimplification with its hyperbolic defect, and
//! the local type split at each place of Q.

use num_traits::Zero;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::arith::Place;
use crate::poly::factor::is_irreducible;
use crate::poly::padic::{local_factor_pairing, LocalSplit, PairingError};
use crate::poly::sturm::unit_circle_counts;
use crate::poly::Poly;

/// One isotypic piece [Q[X]/(f^e)]^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub f: Poly,
    pub e: u32,
    pub n: u32,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.f.deg() * self.e as usize * self.n as usize
    }
}

/// Behaviour of an irreducible f under the involute f -> f*.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentType {
    /// X - 1 or X + 1.
    Zero,
    /// Fixed by the involute, degree >= 2.
    One,
    /// Moved by the involute.
    Two,
}

/// Type of a monic polynomial of degree >= 1 under f -> f*.
pub fn component_type(f: &Poly) -> ComponentType {
    if f.deg() == 1 {
        // X - c is fixed by the involute only for c = c^{-1}
        if f.eval_i64(1).is_zero() || f.eval_i64(-1).is_zero() {
            return ComponentType::Zero;
        }
        return ComponentType::Two;
    }
    if f.is_symmetric() {
        ComponentType::One
    } else {
        ComponentType::Two
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KxError {
    /// Component polynomials are monic of degree >= 1.
    BadPolynomial,
    /// Exponents and multiplicities start at 1.
    BadCount,
    Reducible(String),
    MissingPartner(String),
    /// No isometry of a nondegenerate space has this module.
    Unrealizable(String),
    NotSemisimple,
    /// A local pairing run rejected input that validation had accepted.
    Pairing(String),
}

impl fmt::Display for KxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KxError::BadPolynomial => write!(f, "component polynomial must be monic of degree >= 1"),
            KxError::BadCount => write!(f, "exponents and multiplicities must be >= 1"),
            KxError::Reducible(g) => write!(f, "component polynomial {} is reducible", g),
            KxError::MissingPartner(what) => write!(f, "missing star partner: {}", what),
            KxError::Unrealizable(what) => write!(f, "unrealizable module: {}", what),
            KxError::NotSemisimple => write!(f, "semisimple module required (all exponents 1)"),
            KxError::Pairing(why) => write!(f, "local pairing failed: {}", why),
        }
    }
}

impl std::error::Error for KxError {}

/// Indices of a spec's components by type, with the dimension bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeSplit {
    pub m0: Vec<usize>,
    pub m1: Vec<usize>,
    pub m2: Vec<usize>,
    pub m0_dim: usize,
    pub m1_dim: usize,
    /// Half the type-2 dimension (even by self-duality).
    pub m2_half_dim: usize,
    pub dim: usize,
}

/// The type split after extending scalars to a completion of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalModuleShape {
    pub place: Place,
    /// Dimension of the local type-1 part.
    pub n1_dim: usize,
    /// Half-dimension of the local type-2 part.
    pub n2_half_dim: usize,
    /// Local type-0 dimension (equal to the global one at every place).
    pub n0_dim: usize,
    /// False when some pairing was undecided; the dimensions then park the
    /// unknown mass in n1 to keep the bookkeeping consistent, but carry no
    /// information.
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpec {
    components: Vec<Component>,
}

impl ModuleSpec {
    /// Builds a spec from raw (f, e, n) triples: entries with equal (f, e)
    /// merge by adding multiplicities and the result is sorted canonically
    /// (degree, then coefficients, then exponent).
    pub fn new(raw: Vec<(Poly, u32, u32)>) -> Result<ModuleSpec, KxError> {
        let mut components: Vec<Component> = Vec::new();
        for (f, e, n) in raw {
            if f.is_zero() || !f.is_monic() || f.deg() == 0 {
                return Err(KxError::BadPolynomial);
            }
            if e == 0 || n == 0 {
                return Err(KxError::BadCount);
            }
            match components.iter_mut().find(|c| c.f == f && c.e == e) {
                Some(c) => c.n += n,
                None => components.push(Component { f, e, n }),
            }
        }
        components.sort_by(|a, b| {
            (a.f.deg(), a.f.coeffs(), a.e).cmp(&(b.f.deg(), b.f.coeffs(), b.e))
        });
        Ok(ModuleSpec { components })
    }

    /// The zero module.
    pub fn empty() -> ModuleSpec {
        ModuleSpec { components: Vec::new() }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.components.iter().map(Component::dim).sum()
    }

    pub fn is_semisimple(&self) -> bool {
        self.components.iter().all(|c| c.e == 1)
    }

    /// Checks irreducibility, self-duality and realizability, and splits the
    /// components by type.
    ///
    /// Realizability: [Q[X]/((X -+ 1)^e)]^n with e even and n odd is not the
    /// module of any isometry of a nondegenerate symmetric form (even Jordan
    /// blocks for the eigenvalues +-1 come in pairs), so it is rejected here
    /// rather than letting downstream reductions answer for a module that
    /// nothing realizes.
    pub fn validate(&self) -> Result<TypeSplit, KxError> {
        let mut split = TypeSplit {
            m0: Vec::new(),
            m1: Vec::new(),
            m2: Vec::new(),
            m0_dim: 0,
            m1_dim: 0,
            m2_half_dim: 0,
            dim: self.dim(),
        };
        let mut m2_dim = 0usize;
        for (i, c) in self.components.iter().enumerate() {
            if c.f.constant_term().is_zero() {
                return Err(KxError::MissingPartner(format!(
                    "{} is not invertible on its component",
                    c.f
                )));
            }
            if !is_irreducible(&c.f) {
                return Err(KxError::Reducible(c.f.to_string()));
            }
            match component_type(&c.f) {
                ComponentType::Zero => {
                    if c.e % 2 == 0 && c.n % 2 == 1 {
                        return Err(KxError::Unrealizable(format!(
                            "[Q[X]/(({})^{})]^{} needs even multiplicity",
                            c.f, c.e, c.n
                        )));
                    }
                    split.m0.push(i);
                    split.m0_dim += c.dim();
                }
                ComponentType::One => {
                    split.m1.push(i);
                    split.m1_dim += c.dim();
                }
                ComponentType::Two => {
                    let dual = c.f.star().expect("nonzero constant term checked above");
                    let found = self
                        .components
                        .iter()
                        .any(|d| d.e == c.e && d.n == c.n && d.f == dual);
                    if !found {
                        return Err(KxError::MissingPartner(format!(
                            "({}, e = {}, n = {}) for {}",
                            dual, c.e, c.n, c.f
                        )));
                    }
                    split.m2.push(i);
                    m2_dim += c.dim();
                }
            }
        }
        debug_assert_eq!(m2_dim % 2, 0);
        split.m2_half_dim = m2_dim / 2;
        Ok(split)
    }

    /// F_M = product of f^(e n) over the components; symmetric up to the
    /// sign of its constant term whenever the spec is self-dual.
    pub fn characteristic_polynomial(&self) -> Poly {
        let mut acc = Poly::one();
        for c in &self.components {
            acc = acc.mul(&c.f.pow(c.e * c.n));
        }
        acc
    }

    /// Drops symmetric components with even exponent entirely and lowers odd
    /// exponents to 1; type-2 components are dropped too. The complement of
    /// the result inside M supports only hyperbolic forms, of dimension
    /// 2 tau.
    pub fn odd_semisimplification(&self) -> (ModuleSpec, usize) {
        let mut kept: Vec<(Poly, u32, u32)> = Vec::new();
        for c in &self.components {
            let symmetric = matches!(
                component_type(&c.f),
                ComponentType::Zero | ComponentType::One
            );
            if symmetric && c.e % 2 == 1 {
                kept.push((c.f.clone(), 1, c.n));
            }
        }
        let mbar = ModuleSpec::new(kept).expect("kept components are well-formed");
        let defect = self.dim() - mbar.dim();
        debug_assert_eq!(defect % 2, 0);
        (mbar, defect / 2)
    }

    /// A module forces hyperbolic forms exactly when its odd
    /// semisimplification vanishes.
    pub fn is_hyperbolic_module(&self) -> bool {
        self.odd_semisimplification().0.is_empty()
    }

    /// Type split after extension to the completion at v. Requires a
    /// semisimple spec. Type-0 and type-2 parts keep their types at every
    /// place; type-1 components split by the local factor pairing (finite v)
    /// or by the unit-circle root count (real v).
    pub fn localize(&self, v: Place) -> Result<LocalModuleShape, KxError> {
        if !self.is_semisimple() {
            return Err(KxError::NotSemisimple);
        }
        let split = self.validate()?;
        let n0 = split.m0_dim;
        let mut n1 = 0usize;
        // full (not halved) local type-2 dimension
        let mut n2 = 2 * split.m2_half_dim;
        let mut resolved = true;
        for &i in &split.m1 {
            let c = &self.components[i];
            match v {
                Place::Prime(p) => match cached_pairing(&c.f, p)? {
                    Some(ls) => {
                        n1 += c.n as usize * ls.symmetric_dim;
                        n2 += c.n as usize * ls.paired_dim;
                    }
                    None => {
                        resolved = false;
                        n1 += c.dim();
                    }
                },
                Place::Real => {
                    let (on, off) = unit_circle_counts(&c.f);
                    n1 += c.n as usize * on;
                    n2 += c.n as usize * off;
                }
            }
        }
        debug_assert_eq!(n2 % 2, 0);
        debug_assert_eq!(n0 + n1 + n2, split.dim);
        Ok(LocalModuleShape {
            place: v,
            n1_dim: n1,
            n2_half_dim: n2 / 2,
            n0_dim: n0,
            resolved,
        })
    }
}

// The global decision asks for the same (f, p) pairings over and over; keep
// the splits. None records an unresolved run. Entries are deterministic, so
// a racing double insert is harmless.
fn pairing_cache() -> &'static Mutex<HashMap<(u64, Poly), Option<LocalSplit>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, Poly), Option<LocalSplit>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached_pairing(f: &Poly, p: u64) -> Result<Option<LocalSplit>, KxError> {
    let key = (p, f.clone());
    if let Some(hit) = pairing_cache().lock().unwrap().get(&key) {
        return Ok(*hit);
    }
    let out = match local_factor_pairing(f, p) {
        Ok(o) => Some(o.split),
        Err(PairingError::Unresolved(_)) => None,
        Err(e) => return Err(KxError::Pairing(e.to_string())),
    };
    pairing_cache().lock().unwrap().insert(key, out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    fn spec(raw: &[(&[i64], u32, u32)]) -> ModuleSpec {
        ModuleSpec::new(raw.iter().map(|(c, e, n)| (poly(c), *e, *n)).collect()).unwrap()
    }

    #[test]
    fn merging_and_canonical_order() {
        let a = spec(&[(&[-1, 1], 1, 1), (&[1, -3, 1], 1, 1), (&[-1, 1], 1, 2)]);
        let b = spec(&[(&[1, -3, 1], 1, 1), (&[-1, 1], 1, 3)]);
        assert_eq!(a, b);
        assert_eq!(a.components().len(), 2);
        assert_eq!(a.components()[0].n, 3);
        assert_eq!(a.dim(), 5);
    }

    #[test]
    fn ill_formed_components_are_rejected() {
        assert_eq!(
            ModuleSpec::new(vec![(poly(&[2, 2]), 1, 1)]).unwrap_err(),
            KxError::BadPolynomial
        );
        assert_eq!(
            ModuleSpec::new(vec![(poly(&[1]), 1, 1)]).unwrap_err(),
            KxError::BadPolynomial
        );
        assert_eq!(
            ModuleSpec::new(vec![(poly(&[-1, 1]), 0, 1)]).unwrap_err(),
            KxError::BadCount
        );
        assert_eq!(
            ModuleSpec::new(vec![(poly(&[-1, 1]), 1, 0)]).unwrap_err(),
            KxError::BadCount
        );
    }

    #[test]
    fn type_split_of_a_type_one_component() {
        let m = spec(&[(&[1, -3, 1], 1, 1)]);
        let split = m.validate().unwrap();
        assert_eq!(split.m1, vec![0]);
        assert!(split.m0.is_empty() && split.m2.is_empty());
        assert_eq!(split.m1_dim, 2);
        assert_eq!(split.dim, 2);
    }

    #[test]
    fn type_zero_components_and_their_dimension() {
        let m = spec(&[(&[-1, 1], 3, 2)]);
        let split = m.validate().unwrap();
        assert_eq!(split.m0, vec![0]);
        assert_eq!(split.m0_dim, 6);
        assert_eq!(split.dim, 6);
    }

    #[test]
    fn missing_star_partner_is_rejected() {
        let m = spec(&[(&[-2, 1], 1, 1)]);
        assert!(matches!(m.validate(), Err(KxError::MissingPartner(_))));
        // partner present but with a different multiplicity
        let m = ModuleSpec::new(vec![
            (poly(&[-2, 1]), 1, 2),
            (Poly::from_coeffs(vec![
                num_rational::BigRational::new((-1).into(), 2.into()),
                num_rational::BigRational::from_integer(1.into()),
            ]), 1, 1),
        ])
        .unwrap();
        assert!(matches!(m.validate(), Err(KxError::MissingPartner(_))));
        // X itself has no partner at all
        let m = spec(&[(&[0, 1], 1, 1)]);
        assert!(matches!(m.validate(), Err(KxError::MissingPartner(_))));
    }

    #[test]
    fn dual_pair_with_matching_counts_validates() {
        let m = ModuleSpec::new(vec![
            (poly(&[-2, 1]), 1, 1),
            (Poly::from_coeffs(vec![
                num_rational::BigRational::new((-1).into(), 2.into()),
                num_rational::BigRational::from_integer(1.into()),
            ]), 1, 1),
        ])
        .unwrap();
        let split = m.validate().unwrap();
        assert_eq!(split.m2.len(), 2);
        assert_eq!(split.m2_half_dim, 1);
        // and the characteristic polynomial is symmetric
        let f = m.characteristic_polynomial();
        assert_eq!(f, Poly::from_coeffs(vec![
            num_rational::BigRational::from_integer(1.into()),
            num_rational::BigRational::new((-5).into(), 2.into()),
            num_rational::BigRational::from_integer(1.into()),
        ]));
        assert!(f.is_symmetric());
    }

    #[test]
    fn reducible_component_is_rejected() {
        let m = spec(&[(&[-1, 0, 1], 1, 1)]);
        assert!(matches!(m.validate(), Err(KxError::Reducible(_))));
    }

    #[test]
    fn even_unipotent_blocks_need_even_multiplicity() {
        let m = spec(&[(&[-1, 1], 2, 1)]);
        assert!(matches!(m.validate(), Err(KxError::Unrealizable(_))));
        let m = spec(&[(&[1, 1], 2, 3)]);
        assert!(matches!(m.validate(), Err(KxError::Unrealizable(_))));
        let m = spec(&[(&[-1, 1], 2, 2)]);
        assert!(m.validate().is_ok());
        // odd exponents carry no such constraint
        let m = spec(&[(&[1, 1], 3, 1)]);
        assert!(m.validate().is_ok());
    }

    #[test]
    fn characteristic_polynomial_multiplies_out() {
        let phi10 = &[1, -1, 1, -1, 1];
        let m = spec(&[(&[-1, 1], 2, 1), (phi10, 1, 1)]);
        let expect = poly(&[-1, 1]).pow(2).mul(&poly(phi10));
        assert_eq!(m.characteristic_polynomial(), expect);
        let m = spec(&[(&[1, -3, 1], 1, 4)]);
        assert_eq!(m.characteristic_polynomial(), poly(&[1, -3, 1]).pow(4));
    }

    #[test]
    fn odd_semisimplification_keeps_one_copy_of_odd_exponents() {
        let m = spec(&[(&[-1, 1], 3, 1)]);
        let (mbar, tau) = m.odd_semisimplification();
        assert_eq!(mbar, spec(&[(&[-1, 1], 1, 1)]));
        assert_eq!(tau, 1);
        assert!(!m.is_hyperbolic_module());
    }

    #[test]
    fn even_exponents_drop_out_entirely() {
        let m = spec(&[(&[1, -3, 1], 2, 3)]);
        let (mbar, tau) = m.odd_semisimplification();
        assert!(mbar.is_empty());
        assert_eq!(tau, 6);
        assert!(m.is_hyperbolic_module());
    }

    #[test]
    fn semisimple_type_one_modules_are_their_own_reduction() {
        let m = spec(&[(&[1, -3, 1], 1, 1)]);
        let (mbar, tau) = m.odd_semisimplification();
        assert_eq!(mbar, m);
        assert_eq!(tau, 0);
        assert!(!m.is_hyperbolic_module());
    }

    #[test]
    fn pure_type_two_modules_are_hyperbolic() {
        let m = ModuleSpec::new(vec![
            (poly(&[-2, 1]), 1, 1),
            (Poly::from_coeffs(vec![
                num_rational::BigRational::new((-1).into(), 2.into()),
                num_rational::BigRational::from_integer(1.into()),
            ]), 1, 1),
        ])
        .unwrap();
        let (mbar, tau) = m.odd_semisimplification();
        assert!(mbar.is_empty());
        assert_eq!(tau, 1);
        assert!(m.is_hyperbolic_module());
    }

    #[test]
    fn localize_splits_at_a_split_prime() {
        // X^2 - 3X + 1 factors mod 11 into a swapped pair
        let m = spec(&[(&[1, -3, 1], 1, 1)]);
        let shape = m.localize(Place::Prime(11)).unwrap();
        assert_eq!((shape.n0_dim, shape.n1_dim, shape.n2_half_dim), (0, 0, 1));
        assert!(shape.resolved);
    }

    #[test]
    fn localize_stays_symmetric_at_an_inert_prime() {
        let m = spec(&[(&[1, -3, 1], 1, 1)]);
        let shape = m.localize(Place::Prime(3)).unwrap();
        assert_eq!((shape.n0_dim, shape.n1_dim, shape.n2_half_dim), (0, 2, 0));
        assert!(shape.resolved);
    }

    #[test]
    fn localize_at_the_real_place_counts_off_circle_roots() {
        // both roots of X^2 - 3X + 1 are real, off the unit circle
        let m = spec(&[(&[1, -3, 1], 1, 1)]);
        let shape = m.localize(Place::Real).unwrap();
        assert_eq!((shape.n0_dim, shape.n1_dim, shape.n2_half_dim), (0, 0, 1));
        assert!(shape.resolved);
        // the tenth cyclotomic has all four roots on the circle
        let m = spec(&[(&[1, -1, 1, -1, 1], 1, 1)]);
        let shape = m.localize(Place::Real).unwrap();
        assert_eq!((shape.n0_dim, shape.n1_dim, shape.n2_half_dim), (0, 4, 0));
    }

    #[test]
    fn localize_carries_type_zero_and_type_two_through() {
        let m = ModuleSpec::new(vec![
            (poly(&[-1, 1]), 1, 2),
            (poly(&[-2, 1]), 1, 1),
            (Poly::from_coeffs(vec![
                num_rational::BigRational::new((-1).into(), 2.into()),
                num_rational::BigRational::from_integer(1.into()),
            ]), 1, 1),
            (poly(&[1, -3, 1]), 1, 1),
        ])
        .unwrap();
        for v in [Place::Prime(11), Place::Prime(3), Place::Real] {
            let shape = m.localize(v).unwrap();
            assert_eq!(shape.n0_dim, 2);
            assert_eq!(
                shape.n0_dim + shape.n1_dim + 2 * shape.n2_half_dim,
                m.dim()
            );
            assert!(shape.resolved);
        }
        assert_eq!(m.localize(Place::Prime(11)).unwrap().n2_half_dim, 2);
        assert_eq!(m.localize(Place::Prime(3)).unwrap().n1_dim, 2);
    }

    #[test]
    fn localize_requires_semisimple_input() {
        let m = spec(&[(&[-1, 1], 2, 2)]);
        assert_eq!(m.localize(Place::Prime(5)).unwrap_err(), KxError::NotSemisimple);
    }

    #[test]
    fn localize_agrees_with_multiplicity() {
        // n copies scale every local dimension by n
        let one = spec(&[(&[1, -3, 1], 1, 1)]);
        let four = spec(&[(&[1, -3, 1], 1, 4)]);
        for v in [Place::Prime(11), Place::Prime(3), Place::Real] {
            let a = one.localize(v).unwrap();
            let b = four.localize(v).unwrap();
            assert_eq!(4 * a.n1_dim, b.n1_dim);
            assert_eq!(4 * a.n2_half_dim, b.n2_half_dim);
        }
    }
}
