//! The global decision procedure: does a rational quadratic space admit an
//! isometry with prescribed self-dual torsion module?
//!
//! The input module is first reduced to its odd semisimplification (M, tau);
//! the form must then split tau hyperbolic planes, and everything after that
//! happens at the level of form invariants. Unit eigenvalues (type 0) absorb
//! local obstructions, symmetric irreducible blocks (type 1) impose the
//! determinant, signature, and local hyperbolicity conditions, and with
//! several type-1 blocks the remaining freedom is a parity problem over the
//! Hasse symbols of a candidate orthogonal decomposition. The parity search
//! is bounded; exhausting the bound yields UNDECIDED, never NO.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::arith::{hilbert, odd_support, primes_from, Place};
use crate::kxmodule::{component_type, ComponentType, KxError, ModuleSpec};
use crate::locdec::Answer;
use crate::poly::padic::{local_factor_pairing, PairingError};
use crate::poly::sturm::unit_circle_counts;
use crate::poly::Poly;
use crate::qspace::{FormInvariants, QuadraticSpace};
use crate::transfer::{construct_with_det, IsometryCertificate};

/// Primes up to this bound are scanned when the parity repair step looks
/// for places connecting two module components.
pub const DEFAULT_PRIME_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlobDecError {
    DimensionMismatch { form: usize, module: usize },
    /// The polynomial is not monic symmetric irreducible of degree >= 2.
    NotTypeOne,
    /// The entry point got a module outside its shape contract.
    WrongShape(String),
    Module(KxError),
}

impl std::fmt::Display for GlobDecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GlobDecError::DimensionMismatch { form, module } => {
                write!(f, "form has dimension {} but the module has {}", form, module)
            }
            GlobDecError::NotTypeOne => {
                write!(f, "polynomial is not symmetric irreducible of degree >= 2")
            }
            GlobDecError::WrongShape(why) => write!(f, "unsupported module shape: {}", why),
            GlobDecError::Module(e) => write!(f, "module error: {}", e),
        }
    }
}

impl std::error::Error for GlobDecError {}

impl From<KxError> for GlobDecError {
    fn from(e: KxError) -> GlobDecError {
        GlobDecError::Module(e)
    }
}

/// The condition a NO verdict violates, or the obstacle behind UNDECIDED.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlobalReason {
    DetCondition,
    Signature,
    WittIndex,
    /// A completion refuses: the local form cannot carry the local module.
    LocalFail(Place),
    /// A factor pairing over Q_p could not be resolved.
    PairingUnresolved(Place),
    /// The parity repair graph did not connect the odd columns within the
    /// prime bound.
    ParityDisconnected,
}

impl std::fmt::Display for GlobalReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GlobalReason::DetCondition => write!(f, "DET_CONDITION"),
            GlobalReason::Signature => write!(f, "SIGNATURE"),
            GlobalReason::WittIndex => write!(f, "WITT_INDEX"),
            GlobalReason::LocalFail(v) => write!(f, "LOCAL_FAIL@{}", v),
            GlobalReason::PairingUnresolved(v) => write!(f, "PAIRING_UNRESOLVED@{}", v),
            GlobalReason::ParityDisconnected => write!(f, "PARITY_DISCONNECTED"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub answer: Answer,
    /// Present on NO and UNDECIDED.
    pub reason: Option<GlobalReason>,
    /// Present on YES when the module is semisimple: an explicit space with
    /// the right determinant carrying an isometry with the full module.
    pub certificate: Option<IsometryCertificate>,
    /// The prime bound in force when a search gave up (UNDECIDED only).
    pub search_bound: Option<u64>,
}

impl Verdict {
    fn yes() -> Verdict {
        Verdict { answer: Answer::Yes, reason: None, certificate: None, search_bound: None }
    }

    fn no(reason: GlobalReason) -> Verdict {
        Verdict { answer: Answer::No, reason: Some(reason), certificate: None, search_bound: None }
    }

    fn undecided(reason: GlobalReason, bound: Option<u64>) -> Verdict {
        Verdict { answer: Answer::Undecided, reason: Some(reason), certificate: None, search_bound: bound }
    }
}

/// The places where local comparisons between a form and a type-1 module
/// can fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceSupport {
    /// Places where the form differs from the split form of its dimension.
    pub s: Vec<Place>,
    /// Places where the pairwise symbols of the component determinants
    /// multiply to -1.
    pub t: Vec<Place>,
    /// Union of the two with 2 and the real place always included.
    pub sigma: Vec<Place>,
}

// Data attached to one type-1 component: the polynomial, the total dimension
// deg(f) * n, the exact determinant representative (f(1) f(-1))^n, and the
// number of signature pairs forced by roots off the unit circle.
struct Type1Data {
    f: Poly,
    dim: usize,
    d: BigRational,
    sigma: usize,
}

fn type1_data(spec: &ModuleSpec) -> Vec<Type1Data> {
    let mut out = Vec::new();
    for c in spec.components() {
        if !matches!(component_type(&c.f), ComponentType::One) {
            continue;
        }
        debug_assert_eq!(c.e, 1, "type-1 data is collected from semisimple specs");
        let ends = c.f.eval_i64(1) * c.f.eval_i64(-1);
        let mut d = BigRational::one();
        for _ in 0..c.n {
            d *= &ends;
        }
        let (on, off) = unit_circle_counts(&c.f);
        debug_assert_eq!(on + off, c.f.deg());
        debug_assert_eq!(off % 2, 0, "off-circle roots of a symmetric polynomial pair up");
        out.push(Type1Data {
            f: c.f.clone(),
            dim: c.f.deg() * c.n as usize,
            d,
            sigma: (off / 2) * c.n as usize,
        });
    }
    out
}

fn is_rational_square(x: &BigRational) -> bool {
    if !x.is_positive() {
        return false;
    }
    let sn = x.numer().sqrt();
    let sd = x.denom().sqrt();
    &(&sn * &sn) == x.numer() && &(&sd * &sd) == x.denom()
}

fn neg_one() -> BigRational {
    -BigRational::one()
}

// Hasse symbol of the split form of m hyperbolic planes.
fn hyperbolic_hasse(m: usize, v: Place) -> i32 {
    if (m * m.saturating_sub(1) / 2) % 2 == 0 {
        1
    } else {
        hilbert(&neg_one(), &neg_one(), v).expect("units")
    }
}

// Product of the pairwise symbols of the component determinants at v.
fn pair_symbol(comps: &[Type1Data], v: Place) -> i32 {
    let mut prod = 1;
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            prod *= hilbert(&comps[i].d, &comps[j].d, v).expect("nonzero determinants");
        }
    }
    prod
}

// Does f keep a symmetric irreducible factor over Q_p? When it does, the
// local determinant condition is the only constraint there and the Hasse
// symbol of a carrying form is free; when it does not, the local module is
// hyperbolic and any carrying form is forced split at p.
fn component_free_at(f: &Poly, p: u64) -> Result<bool, ()> {
    match local_factor_pairing(f, p) {
        Ok(out) => Ok(out.split.symmetric_dim > 0),
        Err(PairingError::Unresolved(_)) => Err(()),
        Err(_) => {
            debug_assert!(false, "validated component polynomials are squarefree");
            Err(())
        }
    }
}

fn support_places(inv: &FormInvariants, comps: &[Type1Data]) -> PlaceSupport {
    let mut s: Vec<Place> = Vec::new();
    if inv.dim() % 2 == 0 {
        let m = inv.dim() / 2;
        let mut cands = inv.finite_support();
        cands.push(Place::Real);
        for v in cands {
            if inv.hasse(v) != hyperbolic_hasse(m, v) {
                s.push(v);
            }
        }
    }
    let mut t: Vec<Place> = Vec::new();
    let mut cands: BTreeSet<Place> = BTreeSet::new();
    cands.insert(Place::Prime(2));
    cands.insert(Place::Real);
    for c in comps {
        for p in odd_support(&c.d) {
            cands.insert(Place::Prime(p));
        }
    }
    for v in cands {
        if pair_symbol(comps, v) == -1 {
            t.push(v);
        }
    }
    let mut sigma: BTreeSet<Place> = s.iter().chain(t.iter()).copied().collect();
    sigma.insert(Place::Prime(2));
    sigma.insert(Place::Real);
    PlaceSupport { s, t, sigma: sigma.into_iter().collect() }
}

/// The comparison places for a form against a module: everywhere else the
/// form is split as far as dimension allows, the component determinants
/// pair trivially, and no local condition can fail.
pub fn compute_support(q: &QuadraticSpace, spec: &ModuleSpec) -> PlaceSupport {
    support_places(&q.invariants(), &type1_data(spec))
}

/// Smallest odd prime up to the bound at which both polynomials keep a
/// symmetric irreducible factor locally. At such a place the Hasse symbols
/// of two carrying blocks can flip together; the dyadic place never
/// qualifies because the flip is only licensed at odd places.
pub fn find_pair_place(fi: &Poly, fj: &Poly, bound: u64) -> Option<u64> {
    for p in primes_from(3) {
        if p > bound {
            return None;
        }
        if let (Ok(true), Ok(true)) = (component_free_at(fi, p), component_free_at(fj, p)) {
            return Some(p);
        }
    }
    None
}

fn binom2_parity(s: usize) -> i32 {
    if (s * s.saturating_sub(1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

// The decision for a collection of type-1 components carried by a form with
// the given invariants. Stages: determinant class, signature, the forced
// local splits, and finally the Hasse parity problem across components.
fn decide_type1_inner(
    inv: &FormInvariants,
    comps: &[Type1Data],
    bound: u64,
) -> Result<Verdict, GlobDecError> {
    let mut dprod = BigRational::one();
    for c in comps {
        dprod *= &c.d;
    }
    // det(q) and the product of the component determinants must agree as
    // square classes; equivalently their product is a square
    if !is_rational_square(&(inv.det() * &dprod)) {
        return Ok(Verdict::no(GlobalReason::DetCondition));
    }

    let (r, s) = inv.signature();
    let need: usize = comps.iter().map(|c| c.sigma).sum();
    if r < need || s < need || (r - need) % 2 != 0 {
        return Ok(Verdict::no(GlobalReason::Signature));
    }

    // forced local splits: where every component is locally hyperbolic the
    // carrying form must be split too
    let support = support_places(inv, comps);
    let rows: Vec<u64> = support
        .sigma
        .iter()
        .filter_map(|v| match v {
            Place::Prime(p) => Some(*p),
            Place::Real => None,
        })
        .collect();
    let mut free = vec![vec![false; comps.len()]; rows.len()];
    for (k, &p) in rows.iter().enumerate() {
        for (i, c) in comps.iter().enumerate() {
            match component_free_at(&c.f, p) {
                Ok(b) => free[k][i] = b,
                Err(()) => {
                    return Ok(Verdict::undecided(
                        GlobalReason::PairingUnresolved(Place::Prime(p)),
                        None,
                    ))
                }
            }
        }
        if free[k].iter().all(|b| !b) && !inv.is_hyperbolic_at(Place::Prime(p)) {
            return Ok(Verdict::no(GlobalReason::LocalFail(Place::Prime(p))));
        }
    }

    // a single component has no freedom left to distribute
    if comps.len() <= 1 {
        return Ok(Verdict::yes());
    }
    // with every root on the unit circle the signature carries no forced
    // part and the conditions so far are already sufficient
    if comps.iter().all(|c| c.sigma == 0) {
        return Ok(Verdict::yes());
    }

    // Parity stage. A carrying decomposition q = q_1 + ... + q_r assigns
    // each component a form of dimension dim_i and determinant d_i; all
    // local data is fixed by the conditions above except the Hasse symbols,
    // whose row products are pinned at every place while each column must
    // have an even number of -1 entries over all places (symbol
    // reciprocity). Build a canonical candidate, then repair odd columns in
    // pairs through places where two components are both locally free.
    let caps: Vec<usize> = comps.iter().map(|c| c.dim - 2 * c.sigma).collect();
    debug_assert!(caps.iter().all(|c| c % 2 == 0));
    let mut a = vec![0usize; comps.len()];
    let mut rem = r - need;
    for i in 0..comps.len() {
        let take = std::cmp::min(caps[i], rem);
        debug_assert_eq!(take % 2, 0);
        a[i] = take;
        rem -= take;
    }
    assert_eq!(rem, 0, "signature excess must be absorbed by the free capacities");
    let mut b: Vec<usize> = (0..comps.len()).map(|i| caps[i] - a[i]).collect();

    let mut minus: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); comps.len()];
    for (k, &p) in rows.iter().enumerate() {
        let v = Place::Prime(p);
        for (i, c) in comps.iter().enumerate() {
            if !free[k][i] && hyperbolic_hasse(c.dim / 2, v) == -1 {
                minus[i].insert(p);
            }
        }
        let mut prod = 1;
        for m in &minus {
            if m.contains(&p) {
                prod = -prod;
            }
        }
        let target = inv.hasse(v) * pair_symbol(comps, v);
        if prod != target {
            let flip = (0..comps.len())
                .find(|&i| free[k][i])
                .expect("a fully split row was already checked hyperbolic");
            minus[flip].insert(p);
        }
    }
    {
        // the real row closes automatically once the signature adds up
        let mut prod = 1;
        for i in 0..comps.len() {
            prod *= binom2_parity(comps[i].sigma + b[i]);
        }
        assert_eq!(
            prod * pair_symbol(comps, Place::Real),
            inv.hasse(Place::Real),
            "real Hasse bookkeeping must close"
        );
    }

    let col_odd = |minus: &[BTreeSet<u64>], b: &[usize], i: usize| -> bool {
        (minus[i].len() + if binom2_parity(comps[i].sigma + b[i]) == -1 { 1 } else { 0 }) % 2 == 1
    };

    let mut pair_cache: HashMap<(usize, usize), Option<u64>> = HashMap::new();
    loop {
        let odd: Vec<usize> = (0..comps.len()).filter(|&i| col_odd(&minus, &b, i)).collect();
        assert_eq!(odd.len() % 2, 0, "symbol reciprocity forces an even defect");
        if odd.is_empty() {
            break;
        }
        let start = odd[0];
        // breadth-first search for another odd column; edges connect
        // components sharing an odd free place, or exchange signature pairs
        // through the real place
        #[derive(Clone, Copy)]
        enum Step {
            Finite(u64),
            Real,
        }
        let mut seen = vec![false; comps.len()];
        let mut from: Vec<Option<(usize, Step)>> = vec![None; comps.len()];
        let mut queue = VecDeque::new();
        seen[start] = true;
        queue.push_back(start);
        let mut found: Option<usize> = None;
        'bfs: while let Some(u) = queue.pop_front() {
            for w in 0..comps.len() {
                if seen[w] {
                    continue;
                }
                let key = (u.min(w), u.max(w));
                let finite = *pair_cache
                    .entry(key)
                    .or_insert_with(|| find_pair_place(&comps[u].f, &comps[w].f, bound));
                let step = if let Some(p) = finite {
                    Some(Step::Finite(p))
                } else if (a[u] >= 2 && b[w] >= 2) || (a[w] >= 2 && b[u] >= 2) {
                    Some(Step::Real)
                } else {
                    None
                };
                if let Some(step) = step {
                    seen[w] = true;
                    from[w] = Some((u, step));
                    if w != start && col_odd(&minus, &b, w) {
                        found = Some(w);
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        let Some(mut w) = found else {
            return Ok(Verdict::undecided(GlobalReason::ParityDisconnected, Some(bound)));
        };
        // walk back to the start, flipping both ends of every edge; interior
        // columns are flipped twice and keep their parity
        while let Some((u, step)) = from[w] {
            match step {
                Step::Finite(p) => {
                    for i in [u, w] {
                        if !minus[i].insert(p) {
                            minus[i].remove(&p);
                        }
                    }
                }
                Step::Real => {
                    // move one signature pair between the two components
                    if a[u] >= 2 && b[w] >= 2 {
                        a[u] -= 2;
                        b[u] += 2;
                        b[w] -= 2;
                        a[w] += 2;
                    } else if a[w] >= 2 && b[u] >= 2 {
                        a[w] -= 2;
                        b[w] += 2;
                        b[u] -= 2;
                        a[u] += 2;
                    } else {
                        // an earlier exchange on this path used up the slack
                        return Ok(Verdict::undecided(
                            GlobalReason::ParityDisconnected,
                            Some(bound),
                        ));
                    }
                }
            }
            w = u;
        }
    }

    // audit the final profile: row products pinned everywhere, columns even
    let mut places: BTreeSet<u64> = rows.iter().copied().collect();
    for m in &minus {
        places.extend(m.iter().copied());
    }
    for &p in &places {
        let v = Place::Prime(p);
        let mut prod = 1;
        for m in &minus {
            if m.contains(&p) {
                prod = -prod;
            }
        }
        assert_eq!(prod, inv.hasse(v) * pair_symbol(comps, v), "row audit at {}", p);
    }
    let mut total_r = 0;
    let mut total_s = 0;
    for i in 0..comps.len() {
        assert!(!col_odd(&minus, &b, i), "column audit at component {}", i);
        assert_eq!(a[i] + b[i], caps[i]);
        assert_eq!(a[i] % 2, 0);
        total_r += comps[i].sigma + a[i];
        total_s += comps[i].sigma + b[i];
    }
    assert_eq!((total_r, total_s), (r, s), "signature audit");

    Ok(Verdict::yes())
}

// Decision when unit eigenvalues are present (type-0 dimension m0 > 0,
// no type-2 part). The unit eigenspace absorbs local obstructions: with
// m0 >= 3 the signature bound is everything; with m0 = 2 the form either
// donates a hyperbolic plane or satisfies a purely local Witt condition;
// with m0 = 1 it must represent the determinant of the unit slot.
fn decide_mixed_inner(
    inv: &FormInvariants,
    m0dim: usize,
    comps: &[Type1Data],
    bound: u64,
) -> Result<Verdict, GlobDecError> {
    let (r, s) = inv.signature();
    let need: usize = comps.iter().map(|c| c.sigma).sum();
    if r < need || s < need {
        return Ok(Verdict::no(GlobalReason::Signature));
    }
    if m0dim >= 3 {
        return Ok(Verdict::yes());
    }
    let mut dprod = BigRational::one();
    for c in comps {
        dprod *= &c.d;
    }
    if m0dim == 2 {
        let forced_plane = is_rational_square(&-(inv.det() * &dprod));
        if !forced_plane {
            // the unit slot takes care of the determinant; the only local
            // obstructions sit where the whole type-1 part splits
            let support = support_places(inv, comps);
            let m1dim: usize = comps.iter().map(|c| c.dim).sum();
            for v in support.sigma {
                let Place::Prime(p) = v else { continue };
                let mut all_split = true;
                for c in comps {
                    match component_free_at(&c.f, p) {
                        Ok(true) => {
                            all_split = false;
                            break;
                        }
                        Ok(false) => {}
                        Err(()) => {
                            return Ok(Verdict::undecided(
                                GlobalReason::PairingUnresolved(v),
                                None,
                            ))
                        }
                    }
                }
                if all_split && inv.witt_index_at(v) < m1dim / 2 {
                    return Ok(Verdict::no(GlobalReason::LocalFail(v)));
                }
            }
            return Ok(Verdict::yes());
        }
        // det(q) = -d_1...d_r: the unit slot is forced onto a hyperbolic
        // plane, which the form must donate
        if inv.global_witt_index() < 1 {
            return Ok(Verdict::no(GlobalReason::WittIndex));
        }
        return decide_type1_inner(&inv.cancel_hyperbolic(1), comps, bound);
    }
    // m0dim == 1: the unit slot carries <d0> with d0 = det(q) d_1...d_r
    let d0 = inv.det() * &dprod;
    let sum = inv.add_entry(&-&d0);
    let mut places = sum.finite_support();
    places.push(Place::Real);
    for v in places {
        if sum.witt_index_at(v) < 1 {
            // q does not represent d0
            let reason = if matches!(v, Place::Real) {
                GlobalReason::Signature
            } else {
                GlobalReason::LocalFail(v)
            };
            return Ok(Verdict::no(reason));
        }
    }
    decide_type1_inner(&inv.remove_entry(&d0), comps, bound)
}

fn attach_certificate(verdict: &mut Verdict, spec: &ModuleSpec, q: &QuadraticSpace) {
    if verdict.answer == Answer::Yes && spec.is_semisimple() {
        verdict.certificate = construct_with_det(spec, &q.det()).ok();
        debug_assert!(
            verdict.certificate.is_some(),
            "a semisimple YES always admits the canonical construction"
        );
    }
}

/// Decide whether q admits an isometry whose module is the single symmetric
/// irreducible block f with multiplicity m.
pub fn decide_irreducible(q: &QuadraticSpace, f: &Poly, m: u32) -> Result<Verdict, GlobDecError> {
    decide_irreducible_bounded(q, f, m, DEFAULT_PRIME_BOUND)
}

pub fn decide_irreducible_bounded(
    q: &QuadraticSpace,
    f: &Poly,
    m: u32,
    bound: u64,
) -> Result<Verdict, GlobDecError> {
    if !matches!(component_type(f), ComponentType::One) {
        return Err(GlobDecError::NotTypeOne);
    }
    let spec = ModuleSpec::new(vec![(f.clone(), 1, m)])?;
    spec.validate()?;
    if q.dim() != spec.dim() {
        return Err(GlobDecError::DimensionMismatch { form: q.dim(), module: spec.dim() });
    }
    let mut verdict = decide_type1_inner(&q.invariants(), &type1_data(&spec), bound)?;
    attach_certificate(&mut verdict, &spec, q);
    Ok(verdict)
}

/// Decide for a semisimple module built entirely from symmetric irreducible
/// blocks of degree >= 2.
pub fn decide_type1(q: &QuadraticSpace, spec: &ModuleSpec) -> Result<Verdict, GlobDecError> {
    decide_type1_bounded(q, spec, DEFAULT_PRIME_BOUND)
}

pub fn decide_type1_bounded(
    q: &QuadraticSpace,
    spec: &ModuleSpec,
    bound: u64,
) -> Result<Verdict, GlobDecError> {
    let split = spec.validate()?;
    if !spec.is_semisimple() {
        return Err(GlobDecError::WrongShape("the module must be semisimple".into()));
    }
    if !split.m0.is_empty() || !split.m2.is_empty() {
        return Err(GlobDecError::WrongShape(
            "only symmetric blocks of degree >= 2 are allowed".into(),
        ));
    }
    if q.dim() != spec.dim() {
        return Err(GlobDecError::DimensionMismatch { form: q.dim(), module: spec.dim() });
    }
    let mut verdict = decide_type1_inner(&q.invariants(), &type1_data(spec), bound)?;
    attach_certificate(&mut verdict, spec, q);
    Ok(verdict)
}

/// Decide for a semisimple module mixing unit eigenvalues with symmetric
/// blocks (no paired blocks).
pub fn decide_mixed(q: &QuadraticSpace, spec: &ModuleSpec) -> Result<Verdict, GlobDecError> {
    decide_mixed_bounded(q, spec, DEFAULT_PRIME_BOUND)
}

pub fn decide_mixed_bounded(
    q: &QuadraticSpace,
    spec: &ModuleSpec,
    bound: u64,
) -> Result<Verdict, GlobDecError> {
    let split = spec.validate()?;
    if !spec.is_semisimple() {
        return Err(GlobDecError::WrongShape("the module must be semisimple".into()));
    }
    if split.m0.is_empty() || !split.m2.is_empty() {
        return Err(GlobDecError::WrongShape(
            "a unit eigenvalue part is required and paired blocks are not allowed".into(),
        ));
    }
    if q.dim() != spec.dim() {
        return Err(GlobDecError::DimensionMismatch { form: q.dim(), module: spec.dim() });
    }
    let inv = q.invariants();
    let mut verdict = decide_mixed_inner(&inv, split.m0_dim, &type1_data(spec), bound)?;
    attach_certificate(&mut verdict, spec, q);
    Ok(verdict)
}

/// The full decision: any well-formed self-dual module against any
/// nondegenerate form over Q.
pub fn decide_global(q: &QuadraticSpace, spec: &ModuleSpec) -> Result<Verdict, GlobDecError> {
    decide_global_bounded(q, spec, DEFAULT_PRIME_BOUND)
}

pub fn decide_global_bounded(
    q: &QuadraticSpace,
    spec: &ModuleSpec,
    bound: u64,
) -> Result<Verdict, GlobDecError> {
    if q.dim() != spec.dim() {
        return Err(GlobDecError::DimensionMismatch { form: q.dim(), module: spec.dim() });
    }
    spec.validate()?;
    let (mbar, tau) = spec.odd_semisimplification();
    let inv = q.invariants();
    // the complement of the odd semisimplification carries hyperbolic
    // planes, so the form must split tau of them at every place
    if inv.global_witt_index() < tau {
        return Ok(Verdict::no(GlobalReason::WittIndex));
    }
    let inv = inv.cancel_hyperbolic(tau);
    let split = mbar.validate().expect("the odd semisimplification is well-formed");
    debug_assert!(split.m2.is_empty(), "paired blocks never survive the reduction");
    let comps = type1_data(&mbar);
    let mut verdict = if split.m1.is_empty() {
        // only unit eigenvalues survive; any form of the right dimension
        // splits into eigenspaces of an involution
        Verdict::yes()
    } else if split.m0.is_empty() {
        decide_type1_inner(&inv, &comps, bound)?
    } else {
        decide_mixed_inner(&inv, split.m0_dim, &comps, bound)?
    };
    attach_certificate(&mut verdict, spec, q);
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qspace::Mat;
    use crate::transfer::{transfer_gram, twist, verify, HermitianSpec};

    fn golden() -> Poly {
        // X^2 - 3X + 1, symmetric with roots off the unit circle
        Poly::from_i64(&[1, -3, 1])
    }

    fn quartic_cyclotomic() -> Poly {
        // X^4 - X^3 + X^2 - X + 1, all roots on the unit circle
        Poly::from_i64(&[1, -1, 1, -1, 1])
    }

    fn gaussian() -> Poly {
        Poly::from_i64(&[1, 0, 1])
    }

    fn spec_of(parts: &[(Poly, u32, u32)]) -> ModuleSpec {
        ModuleSpec::new(parts.to_vec()).unwrap()
    }

    fn q_diag(entries: &[i64]) -> QuadraticSpace {
        QuadraticSpace::from_diagonal_i64(entries).unwrap()
    }

    #[test]
    fn golden_module_needs_the_golden_determinant() {
        let f = golden();
        let yes = decide_irreducible(&q_diag(&[1, -5]), &f, 1).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        let cert = yes.certificate.expect("semisimple yes carries a certificate");
        verify(&cert).unwrap();
        assert_eq!(cert.gram, Mat::from_i64(&[&[2, 3], &[3, 2]]));

        let no = decide_irreducible(&q_diag(&[1, 5]), &f, 1).unwrap();
        assert_eq!(no.answer, Answer::No);
        assert_eq!(no.reason, Some(GlobalReason::DetCondition));
    }

    #[test]
    fn cyclotomic_module_on_four_squares_plus_five() {
        let f = quartic_cyclotomic();
        let spec = spec_of(&[(f.clone(), 1, 1)]);
        let yes = decide_global(&q_diag(&[1, 1, 1, 5]), &spec).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        verify(&yes.certificate.expect("certificate")).unwrap();

        let no = decide_global(&q_diag(&[1, 1, 1, 1]), &spec).unwrap();
        assert_eq!(no.answer, Answer::No);
        assert_eq!(no.reason, Some(GlobalReason::DetCondition));
    }

    #[test]
    fn signature_rules_out_definite_carriers_of_off_circle_roots() {
        // two copies of the golden block force signature at least (2, 2)
        let spec = spec_of(&[(golden(), 1, 2)]);
        let verdict = decide_global(&q_diag(&[1, 1, 1, 25]), &spec).unwrap();
        assert_eq!(verdict.answer, Answer::No);
        assert_eq!(verdict.reason, Some(GlobalReason::Signature));
    }

    #[test]
    fn support_of_the_frozen_example() {
        let q = q_diag(&[1, 1, 1, 5]);
        let spec = spec_of(&[(quartic_cyclotomic(), 1, 1)]);
        let sup = compute_support(&q, &spec);
        assert_eq!(sup.s, vec![Place::Prime(2), Place::Real]);
        assert!(sup.t.is_empty());
        assert_eq!(sup.sigma, vec![Place::Prime(2), Place::Real]);
    }

    #[test]
    fn pairwise_symbols_show_up_in_the_support() {
        // d = -5 and d = -12 pair nontrivially at 5 and at infinity
        let other = Poly::from_i64(&[1, -4, 1]);
        let spec = spec_of(&[(golden(), 1, 1), (other, 1, 1)]);
        let q = q_diag(&[1, -1, 1, 60]);
        let sup = compute_support(&q, &spec);
        assert!(sup.t.contains(&Place::Prime(5)));
        assert!(sup.t.contains(&Place::Real));
        assert!(sup.sigma.contains(&Place::Prime(5)));
    }

    #[test]
    fn hyperbolic_modules_follow_the_witt_index() {
        // the module forces hyperbolic carriers: (f, e=2, n=1) reduces away
        let spec = spec_of(&[(golden(), 2, 1)]);
        let yes = decide_global(&QuadraticSpace::hyperbolic(2), &spec).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        assert!(yes.certificate.is_none(), "no construction for nilpotent structure");

        let no = decide_global(&q_diag(&[1, 1, 1, 1]), &spec).unwrap();
        assert_eq!(no.answer, Answer::No);
        assert_eq!(no.reason, Some(GlobalReason::WittIndex));
    }

    #[test]
    fn a_large_unit_eigenspace_absorbs_every_local_obstruction() {
        let spec = spec_of(&[
            (Poly::from_i64(&[-1, 1]), 1, 3),
            (quartic_cyclotomic(), 1, 1),
        ]);
        let verdict = decide_global(&q_diag(&[1, 1, 1, 1, 1, 1, 1]), &spec).unwrap();
        assert_eq!(verdict.answer, Answer::Yes);
        verify(&verdict.certificate.expect("certificate")).unwrap();
    }

    #[test]
    fn one_unit_eigenvalue_steers_through_representation() {
        let spec = spec_of(&[
            (Poly::from_i64(&[-1, 1]), 1, 1),
            (quartic_cyclotomic(), 1, 1),
        ]);
        let yes = decide_global(&q_diag(&[1, 1, 1, 1, 5]), &spec).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        let cert = yes.certificate.expect("certificate");
        verify(&cert).unwrap();

        // the golden blocks force two negative entries the form cannot offer
        let tight = spec_of(&[(Poly::from_i64(&[-1, 1]), 1, 1), (golden(), 1, 2)]);
        let no = decide_global(&q_diag(&[1, 1, 1, 1, -5]), &tight).unwrap();
        assert_eq!(no.answer, Answer::No);
        assert_eq!(no.reason, Some(GlobalReason::Signature));
    }

    #[test]
    fn a_forced_plane_must_be_donated_by_the_form() {
        let spec = spec_of(&[
            (Poly::from_i64(&[-1, 1]), 1, 1),
            (Poly::from_i64(&[1, 1]), 1, 1),
            (golden(), 1, 1),
        ]);
        // det 5 = -(-5): the unit pair sits on a hyperbolic plane, but this
        // scaled quaternion norm form is anisotropic at 11 and has no plane
        // to give
        let no = decide_global(&q_diag(&[1, -2, -11, 110]), &spec).unwrap();
        assert_eq!(no.answer, Answer::No);
        assert_eq!(no.reason, Some(GlobalReason::WittIndex));

        let yes = decide_global(&q_diag(&[1, -1, 1, -5]), &spec).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        verify(&yes.certificate.expect("certificate")).unwrap();
    }

    #[test]
    fn a_free_plane_still_obeys_local_witt_bounds() {
        let spec = spec_of(&[(Poly::from_i64(&[-1, 1]), 1, 2), (golden(), 1, 1)]);
        // the norm form of the quaternion algebra (2, 11) is anisotropic at
        // 11 while the golden block splits there, so the local Witt index
        // falls short
        let no = decide_global(&q_diag(&[1, -2, -11, 22]), &spec).unwrap();
        assert_eq!(no.answer, Answer::No);
        assert_eq!(no.reason, Some(GlobalReason::LocalFail(Place::Prime(11))));

        let yes = decide_global(&q_diag(&[1, 1, 1, -1]), &spec).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        verify(&yes.certificate.expect("certificate")).unwrap();
    }

    #[test]
    fn parity_repair_connects_components_through_an_odd_place() {
        // Hasse -1 at 5 forces a flip on the golden column while the
        // signature puts one on the gaussian column; the repair flips both
        // at 3, the smallest odd place where neither block splits.
        let spec = spec_of(&[(golden(), 1, 1), (gaussian(), 1, 1)]);
        let q = q_diag(&[-1, -2, -10, 1]);
        let yes = decide_global(&q, &spec).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        verify(&yes.certificate.expect("certificate")).unwrap();

        // with no odd primes inside the bound the repair graph has no edges
        let stuck = decide_global_bounded(&q, &spec, 2).unwrap();
        assert_eq!(stuck.answer, Answer::Undecided);
        assert_eq!(stuck.reason, Some(GlobalReason::ParityDisconnected));
        assert_eq!(stuck.search_bound, Some(2));
    }

    #[test]
    fn direct_sums_of_transferred_blocks_come_back_yes() {
        let g1 = transfer_gram(&HermitianSpec::unit_form(golden(), 1).unwrap()).unwrap();
        let twisted = twist(&HermitianSpec::unit_form(gaussian(), 1).unwrap(), 2).unwrap();
        let g2 = transfer_gram(&twisted).unwrap();
        let q = QuadraticSpace::new(g1.gram.direct_sum(&g2.gram)).unwrap();
        let spec = spec_of(&[(golden(), 1, 1), (gaussian(), 1, 1)]);
        let verdict = decide_global(&q, &spec).unwrap();
        assert_eq!(verdict.answer, Answer::Yes);
        verify(&verdict.certificate.expect("certificate")).unwrap();
    }

    #[test]
    fn pair_places_skip_the_dyadic_place() {
        assert_eq!(find_pair_place(&golden(), &gaussian(), 100), Some(3));
        assert_eq!(find_pair_place(&golden(), &golden(), 100), Some(3));
        assert_eq!(find_pair_place(&golden(), &gaussian(), 2), None);
    }

    #[test]
    fn growing_the_bound_never_flips_a_decision() {
        let spec = spec_of(&[(golden(), 1, 1), (gaussian(), 1, 1)]);
        for entries in [
            vec![-1i64, -2, -10, 1],
            vec![1, -1, 1, -20],
            vec![2, -1, 5, 2],
            vec![1, 1, -1, -20],
        ] {
            let q = q_diag(&entries);
            let small = decide_global_bounded(&q, &spec, 2).unwrap();
            let large = decide_global_bounded(&q, &spec, DEFAULT_PRIME_BOUND).unwrap();
            match small.answer {
                Answer::Undecided => {}
                a => assert_eq!(a, large.answer, "decided answers are final: {:?}", entries),
            }
        }
    }

    #[test]
    fn input_validation() {
        let spec = spec_of(&[(golden(), 1, 1)]);
        let err = decide_global(&q_diag(&[1, 1, 1]), &spec).unwrap_err();
        assert!(matches!(err, GlobDecError::DimensionMismatch { form: 3, module: 2 }));

        let err = decide_irreducible(&q_diag(&[1, 1]), &Poly::from_i64(&[-1, 0, 1]), 1);
        assert!(matches!(err, Err(GlobDecError::Module(KxError::Reducible(_)))));

        let err = decide_irreducible(&q_diag(&[1]), &Poly::from_i64(&[-1, 1]), 1);
        assert!(matches!(err, Err(GlobDecError::NotTypeOne)));

        let mixed = spec_of(&[(Poly::from_i64(&[-1, 1]), 1, 1), (golden(), 1, 1)]);
        let err = decide_type1(&q_diag(&[1, 1, 5]), &mixed).unwrap_err();
        assert!(matches!(err, GlobDecError::WrongShape(_)));

        let pure = spec_of(&[(golden(), 1, 1)]);
        let err = decide_mixed(&q_diag(&[1, 5]), &pure).unwrap_err();
        assert!(matches!(err, GlobDecError::WrongShape(_)));
    }

    #[test]
    fn global_yes_is_locally_yes() {
        use crate::locdec::{decide_padic, decide_real};
        let cases: Vec<(Vec<i64>, ModuleSpec)> = vec![
            (vec![1, -5], spec_of(&[(golden(), 1, 1)])),
            (vec![1, 1, 1, 5], spec_of(&[(quartic_cyclotomic(), 1, 1)])),
            (vec![-1, -2, -10, 1], spec_of(&[(golden(), 1, 1), (gaussian(), 1, 1)])),
            (
                vec![1, 1, 1, 1, 5],
                spec_of(&[(Poly::from_i64(&[-1, 1]), 1, 1), (quartic_cyclotomic(), 1, 1)]),
            ),
        ];
        for (entries, spec) in cases {
            let q = q_diag(&entries);
            let verdict = decide_global(&q, &spec).unwrap();
            assert_eq!(verdict.answer, Answer::Yes, "{:?}", entries);
            let (r, s) = q.diagonal_form().signature();
            assert_eq!(decide_real((r, s), &spec).unwrap().answer, Answer::Yes);
            for p in [2u64, 3, 5, 7, 11, 13] {
                let local = decide_padic(&q, &spec, p).unwrap();
                assert_ne!(local.answer, Answer::No, "local failure at {} on {:?}", p, entries);
            }
        }
    }
}
