//! Dual-pairing structure of the irreducible factors of a symmetric
//! polynomial over Q_p.
//!
//! For monic symmetric squarefree f with p-integral coefficients, the monic
//! irreducible factors over Q_p are permuted by the involute h -> h*. This
//! module computes how many factors are fixed (self-reciprocal) and how much
//! degree sits in swapped pairs, together with a factorization certificate
//! at finite p-adic precision whenever the factors can be separated.
//!
//! The analysis never needs the factors themselves to decide the split:
//! a mod-p block that is moved by the involute is entirely paired, and a
//! fixed block is resolved through the Newton polygon of a shifted or
//! g-adic expansion, whose segment residuals carry the involute as the
//! sign-flip y -> -y. Blocks beyond that depth report Unresolved rather
//! than guessing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::factor::{
    fp_to_z, hensel_lift_multi, poly_mod_pk, zp_add, zp_center, zp_divmod_monic, zp_mul,
    zp_to_poly, zp_trim, ZPoly,
};
use super::modp::FpPoly;
use super::{Poly, PolyError};
use crate::arith::valuation;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairTag {
    /// Factor fixed by the involute h -> h*.
    Symmetric,
    /// Factor swapped with its partner entry.
    Paired,
}

#[derive(Debug, Clone)]
pub struct CertEntry {
    /// Approximation of a monic factor over Z_p (exact when possible).
    pub poly: Poly,
    pub tag: PairTag,
    /// Index of the dual entry; None exactly when the tag is Symmetric.
    pub partner: Option<usize>,
    /// Claimed irreducible over Q_p (comes with a checkable witness).
    pub irreducible: bool,
}

#[derive(Debug, Clone)]
pub struct PairingCertificate {
    /// Entries are congruent to true factors mod p^precision.
    pub precision: u32,
    pub entries: Vec<CertEntry>,
}

/// How the degree of f distributes over Q_p-factors under the involute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LocalSplit {
    /// Number of self-reciprocal irreducible factors.
    pub symmetric_count: usize,
    /// Total degree of the self-reciprocal factors.
    pub symmetric_dim: usize,
    /// Total degree of factors living in swapped pairs (even).
    pub paired_dim: usize,
}

#[derive(Debug, Clone)]
pub struct PairingOutcome {
    pub p: u64,
    pub split: LocalSplit,
    /// Present when every factor could be separated at the working precision.
    pub certificate: Option<PairingCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairingError {
    BadInput(PolyError),
    NotSquarefree,
    /// The factor structure needs more than depth-one ramification analysis.
    Unresolved(String),
}

impl std::fmt::Display for PairingError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PairingError::BadInput(e) => write!(f, "bad input: {}", e),
            PairingError::NotSquarefree => write!(f, "polynomial is not squarefree"),
            PairingError::Unresolved(why) => write!(f, "pairing unresolved: {}", why),
        }
    }
}

impl std::error::Error for PairingError {}

// Internal block-analysis failures: retryable at higher precision or final.
enum BlockErr {
    Precision,
    Final(String),
}

fn check_input(f: &Poly, p: u64) -> Result<(), PairingError> {
    debug_assert!(crate::arith::is_prime_u64(p), "modulus must be prime");
    if f.is_zero() || !f.is_monic() {
        return Err(PairingError::BadInput(PolyError::NotMonic));
    }
    if !f.is_symmetric() {
        return Err(PairingError::BadInput(PolyError::NotSymmetric));
    }
    if !f.is_squarefree() {
        return Err(PairingError::NotSquarefree);
    }
    Ok(())
}

fn is_p_integral(f: &Poly, p: u64) -> bool {
    let pb = BigInt::from(p);
    f.coeffs().iter().all(|a| !a.denom().mod_floor(&pb).is_zero())
}

fn censored_val(c: &BigInt, p: u64, k: u32) -> u32 {
    if c.is_zero() {
        return k;
    }
    let pb = BigInt::from(p);
    let mut v = 0u32;
    let mut c = c.clone();
    while v < k {
        let (q, r) = c.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        c = q;
        v += 1;
    }
    v
}

// b(Z + c0) over Z/m, by Horner.
fn zp_shift(b: &[BigInt], c0: i64, m: &BigInt) -> ZPoly {
    let lin = vec![BigInt::from(c0).mod_floor(m), BigInt::one()];
    let mut acc: ZPoly = Vec::new();
    for coeff in b.iter().rev() {
        acc = zp_mul(&acc, &lin, m);
        acc = zp_add(&acc, std::slice::from_ref(coeff), m);
    }
    acc
}

// (-1)^deg t(-Y), monic again when t is monic.
fn fp_negate_input(t: &FpPoly) -> FpPoly {
    let d = t.deg();
    let c: Vec<u64> = t
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &a)| if (d - i) % 2 == 1 { (t.p - a) % t.p } else { a })
        .collect();
    FpPoly::new(t.p, &c)
}

// Lower convex hull of (i, v_i), left to right; collinear points merge
// into one segment. Returns the vertex list.
fn lower_hull(points: &[(usize, i64)]) -> Vec<(usize, i64)> {
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &(x, y) in points {
        while hull.len() >= 2 {
            let (ax, ay) = hull[hull.len() - 2];
            let (bx, by) = hull[hull.len() - 1];
            // pop b when it lies on or above the chord a -> (x, y)
            let lhs = (x as i128 - ax as i128) * (by as i128 - ay as i128);
            let rhs = (y as i128 - ay as i128) * (bx as i128 - ax as i128);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    hull
}

struct SegmentData {
    // reduced slope is a / ramification, segment spans width ramification * m
    ramification: usize,
    m: usize,
    residual: FpPoly,
}

// Cut one hull segment into its residual polynomial. vals[i] is the censored
// valuation of coeffs[i]; unit extraction is exact because on-hull censored
// values are strict (< k).
fn segment_residual(
    coeffs: &[BigInt],
    vals: &[u32],
    p: u64,
    seg: ((usize, i64), (usize, i64)),
) -> SegmentData {
    let ((i1, v1), (i2, v2)) = seg;
    let width = i2 - i1;
    let drop = v1 - v2;
    debug_assert!(drop > 0 && width > 0);
    let d = (drop as u64).gcd(&(width as u64)) as usize;
    let a = drop as usize / d;
    let e = width / d;
    let mut s = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let idx = i1 + j * e;
        let expect = v1 - (j * a) as i64;
        debug_assert!(expect >= 0);
        if vals[idx] as i64 == expect {
            let q = &coeffs[idx] / BigInt::from(p).pow(expect as u32);
            s.push(q.mod_floor(&BigInt::from(p)).to_u64().unwrap());
        } else {
            s.push(0);
        }
    }
    SegmentData { ramification: e, m: d, residual: FpPoly::new(p, &s) }
}

// Accumulates the split and, when possible, certificate entries.
#[derive(Clone)]
struct Tally {
    split: LocalSplit,
    entries: Option<Vec<CertEntry>>,
}

impl Tally {
    fn new() -> Tally {
        Tally { split: LocalSplit::default(), entries: Some(Vec::new()) }
    }

    fn symmetric(&mut self, dim: usize) {
        self.split.symmetric_count += 1;
        self.split.symmetric_dim += dim;
    }

    fn push_symmetric(&mut self, poly: Poly, irreducible: bool) {
        if let Some(es) = self.entries.as_mut() {
            es.push(CertEntry { poly, tag: PairTag::Symmetric, partner: None, irreducible });
        }
    }

    fn push_pair(&mut self, a: Poly, b: Poly, irreducible: bool) {
        if let Some(es) = self.entries.as_mut() {
            let i = es.len();
            es.push(CertEntry { poly: a, tag: PairTag::Paired, partner: Some(i + 1), irreducible });
            es.push(CertEntry { poly: b, tag: PairTag::Paired, partner: Some(i), irreducible });
        }
    }

    // A block whose factors pair off entirely among themselves.
    fn push_self_paired(&mut self, poly: Poly) {
        if let Some(es) = self.entries.as_mut() {
            let i = es.len();
            es.push(CertEntry { poly, tag: PairTag::Paired, partner: Some(i), irreducible: false });
        }
    }

    fn drop_entries(&mut self) {
        self.entries = None;
    }
}

// Analysis of one mod-p block fixed by the involute, B = lift of gbar^e.
// Updates the split tally and returns true when the block is a single
// irreducible factor (so the block approximation itself is a usable
// certificate entry).
fn analyze_fixed_block(
    tally: &mut Tally,
    block: &ZPoly,
    gbar: &FpPoly,
    e: u32,
    p: u64,
    k: u32,
    modulus: &BigInt,
) -> Result<bool, BlockErr> {
    let bdeg = gbar.deg() * e as usize;
    if e == 1 {
        tally.symmetric(bdeg);
        return Ok(true);
    }
    if gbar.deg() == 1 {
        // all roots of the block reduce to a single residue, necessarily +-1
        let root = (p - gbar.coeff(0)) % p;
        let c0: i64 = if root == 1 {
            1
        } else if root + 1 == p {
            -1
        } else {
            unreachable!("fixed linear block with residue root not +-1")
        };
        let shifted = zp_shift(block, c0, modulus);
        debug_assert_eq!(shifted.len(), bdeg + 1);
        let vals: Vec<u32> = shifted.iter().map(|c| censored_val(c, p, k)).collect();
        if vals[0] >= k {
            return Err(BlockErr::Precision);
        }
        let points: Vec<(usize, i64)> =
            vals.iter().enumerate().map(|(i, &v)| (i, v as i64)).collect();
        let hull = lower_hull(&points);
        let segs: Vec<SegmentData> = hull
            .windows(2)
            .map(|w| segment_residual(&shifted, &vals, p, (w[0], w[1])))
            .collect();
        let block_irreducible = segs.len() == 1 && segs[0].m == 1;
        for seg in &segs {
            let span = seg.ramification * seg.m;
            if seg.m == 1 {
                // one totally ramified root orbit: a single self-reciprocal
                // factor of degree span
                tally.symmetric(span);
                continue;
            }
            let res = &seg.residual;
            debug_assert_eq!(res.deg(), seg.m);
            if res.gcd(&res.derivative()).deg() > 0 {
                return Err(BlockErr::Final(format!(
                    "inseparable residual {} on a slope of width {}",
                    res, span
                )));
            }
            let (_, rfactors) = res.factor();
            debug_assert!(rfactors.iter().all(|(_, m)| *m == 1));
            if seg.ramification % 2 == 0 {
                // the involute acts on residual roots by sign flip, which an
                // even ramification index absorbs: every factor is fixed
                for (t, _) in &rfactors {
                    tally.symmetric(t.deg() * seg.ramification);
                }
            } else {
                let mut used = vec![false; rfactors.len()];
                for i in 0..rfactors.len() {
                    if used[i] {
                        continue;
                    }
                    used[i] = true;
                    let t = &rfactors[i].0;
                    let tn = fp_negate_input(t);
                    if tn == *t {
                        tally.symmetric(t.deg() * seg.ramification);
                    } else {
                        let j = rfactors
                            .iter()
                            .position(|(u, _)| *u == tn)
                            .expect("sign-flipped residual factor must appear");
                        debug_assert!(!used[j]);
                        used[j] = true;
                        tally.split.paired_dim += 2 * t.deg() * seg.ramification;
                    }
                }
            }
        }
        return Ok(block_irreducible);
    }
    // gbar of degree >= 2 with e >= 2: expand in powers of a lift G of gbar
    // and read the G-adic polygon; only the plainly irreducible shape
    // (one segment, coprime endpoints) is decided at this depth.
    let g = fp_to_z(gbar);
    let mut rest = block.clone();
    let mut vals: Vec<u32> = Vec::with_capacity(e as usize + 1);
    while !rest.is_empty() {
        let (q, r) = zp_divmod_monic(&rest, &g, modulus);
        let v = r.iter().map(|c| censored_val(c, p, k)).min().unwrap_or(k);
        vals.push(v);
        rest = q;
    }
    if vals.len() != e as usize + 1 || vals[e as usize] != 0 {
        return Err(BlockErr::Final(
            "unexpected shape in the g-adic expansion of a ramified block".into(),
        ));
    }
    let v0 = vals[0];
    if v0 >= k {
        return Err(BlockErr::Precision);
    }
    let on_or_above = (1..e as usize).all(|i| {
        // point (i, v_i) must lie on or above the chord (0, v0) -> (e, 0)
        vals[i] as u64 * e as u64 >= v0 as u64 * (e as usize - i) as u64
    });
    if on_or_above && (v0 as u64).gcd(&(e as u64)) == 1 {
        tally.symmetric(bdeg);
        return Ok(true);
    }
    Err(BlockErr::Final(
        "ramified block of degree >= 2 beyond depth-one analysis".into(),
    ))
}

/// Split the Q_p-factors of a monic symmetric squarefree f into
/// involute-fixed factors and swapped pairs.
pub fn local_factor_pairing(f: &Poly, p: u64) -> Result<PairingOutcome, PairingError> {
    check_input(f, p)?;
    let mut tally = Tally::new();

    // X - 1 and X + 1 are the only possible symmetric linear factors; peel
    // them off so evaluations at +-1 below are nonzero.
    let mut rest = f.clone();
    for c0 in [1i64, -1] {
        if rest.eval_i64(c0).is_zero() {
            let lin = Poly::from_i64(&[-c0, 1]);
            rest = rest.div_exact(&lin).expect("root gives exact linear division");
            tally.symmetric(1);
            tally.push_symmetric(lin, true);
        }
    }

    if rest.deg() == 0 {
        let entries = tally.entries.take().unwrap();
        return Ok(PairingOutcome {
            p,
            split: tally.split,
            certificate: Some(PairingCertificate { precision: 1, entries }),
        });
    }

    if !is_p_integral(&rest, p) {
        return slope_pairing(&rest, f, p, tally);
    }

    // Working precision: enough to separate any two factors of f (twice the
    // valuation of any pairwise resultant stays below it) and to see the
    // full polygon of any fixed block over a unit residue (bounded by the
    // valuations at +-1). Blocks over residues of degree >= 2 have no such
    // proven bound, so the precision escalates a few times before giving up.
    let vdisc = valuation(&f.discriminant(), p).expect("nonzero discriminant").max(0) as u32;
    let vends = valuation(&(rest.eval_i64(1) * rest.eval_i64(-1)), p)
        .expect("roots at +-1 were stripped")
        .max(0) as u32;
    let mut k = 2 * vdisc + vends + 1;
    for _ in 0..5 {
        match pairing_attempt(f.deg(), &rest, p, k, tally.clone()) {
            Ok(outcome) => return Ok(outcome),
            Err(BlockErr::Precision) => k *= 2,
            Err(BlockErr::Final(msg)) => return Err(PairingError::Unresolved(msg)),
        }
    }
    Err(PairingError::Unresolved("precision escalation exhausted".into()))
}

// Factors with nonzero root valuation pair off by the reflection of the
// Newton polygon; a polynomial with denominators at p whose polygon has no
// flat segment is therefore entirely paired. A flat segment would need its
// own unit-root factor extracted, which is beyond this analysis.
fn slope_pairing(
    rest: &Poly,
    f: &Poly,
    p: u64,
    mut tally: Tally,
) -> Result<PairingOutcome, PairingError> {
    let points: Vec<(usize, i64)> = rest
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| (i, valuation(a, p).expect("nonzero coefficient")))
        .collect();
    let hull = lower_hull(&points);
    let flat = hull.windows(2).find(|w| w[0].1 == w[1].1);
    if let Some(w) = flat {
        return Err(PairingError::Unresolved(format!(
            "unit-valuation part of width {} in a non-integral polynomial",
            w[1].0 - w[0].0
        )));
    }
    // the involute mirrors slopes, and no factor sits at slope zero
    debug_assert_eq!(rest.deg() % 2, 0);
    tally.split.paired_dim += rest.deg();
    tally.drop_entries();
    debug_assert_eq!(tally.split.symmetric_dim + tally.split.paired_dim, f.deg());
    Ok(PairingOutcome { p, split: tally.split, certificate: None })
}

// One full analysis pass at fixed precision p^k.
fn pairing_attempt(
    full_deg: usize,
    rest: &Poly,
    p: u64,
    k: u32,
    mut tally: Tally,
) -> Result<PairingOutcome, BlockErr> {
    let modulus = BigInt::from(p).pow(k);
    let fz = poly_mod_pk(rest, p, k).expect("p-integral by branch");
    let fbar = FpPoly::reduce_from(rest, p).expect("p-integral by branch");
    let (_, blocks) = fbar.factor();

    // the involute permutes the blocks; find it on the residue factors
    let stars: Vec<FpPoly> = blocks.iter().map(|(g, _)| g.star()).collect();
    let sigma: Vec<usize> = blocks
        .iter()
        .enumerate()
        .map(|(j, (_, ej))| {
            blocks
                .iter()
                .position(|(gi, ei)| ei == ej && *gi == stars[j])
                .expect("involute must permute the residue blocks")
        })
        .collect();

    let whole = blocks.len() == 1 && tally.split.symmetric_dim == 0;
    if blocks.iter().all(|(_, e)| *e == 1) {
        // unramified reduction: factors lift one-to-one from mod p
        let reds: Vec<FpPoly> = blocks.iter().map(|(g, _)| g.clone()).collect();
        let lifted = hensel_lift_multi(&fz, &reds, p, k);
        for j in 0..blocks.len() {
            let poly = if whole {
                rest.clone()
            } else {
                zp_to_poly(&zp_center(&lifted[j], &modulus))
            };
            if sigma[j] == j {
                tally.symmetric(blocks[j].0.deg());
                tally.push_symmetric(poly, true);
            } else if sigma[j] > j {
                let partner = zp_to_poly(&zp_center(&lifted[sigma[j]], &modulus));
                tally.split.paired_dim += 2 * blocks[j].0.deg();
                tally.push_pair(poly, partner, true);
            }
        }
    } else {
        let reds: Vec<FpPoly> = blocks
            .iter()
            .map(|(g, e)| {
                let mut acc = FpPoly::new(p, &[1]);
                for _ in 0..*e {
                    acc = acc.mul(g);
                }
                acc
            })
            .collect();
        let lifted = hensel_lift_multi(&fz, &reds, p, k);
        for j in 0..blocks.len() {
            let bdeg = blocks[j].0.deg() * blocks[j].1 as usize;
            if sigma[j] < j {
                continue;
            }
            if sigma[j] > j {
                // the whole block is swapped with its dual block
                let (a, b) = (
                    zp_to_poly(&zp_center(&lifted[j], &modulus)),
                    zp_to_poly(&zp_center(&lifted[sigma[j]], &modulus)),
                );
                tally.split.paired_dim += 2 * bdeg;
                tally.push_pair(a, b, blocks[j].1 == 1);
                continue;
            }
            let paired_before = tally.split.paired_dim;
            let irreducible = analyze_fixed_block(
                &mut tally,
                &lifted[j],
                &blocks[j].0,
                blocks[j].1,
                p,
                k,
                &modulus,
            )?;
            let poly = if whole {
                rest.clone()
            } else {
                zp_to_poly(&zp_center(&lifted[j], &modulus))
            };
            if irreducible {
                tally.push_symmetric(poly, true);
            } else if tally.split.paired_dim - paired_before == bdeg {
                // every factor of the block pairs off within the block
                tally.push_self_paired(poly);
            } else {
                // mixed block: the split is known but the factors are not
                // separated, so no certificate can cover it
                tally.drop_entries();
            }
        }
    }

    debug_assert_eq!(tally.split.symmetric_dim + tally.split.paired_dim, full_deg);
    debug_assert_eq!(tally.split.paired_dim % 2, 0);
    let certificate = tally
        .entries
        .take()
        .map(|entries| PairingCertificate { precision: k, entries });
    Ok(PairingOutcome { p, split: tally.split, certificate })
}

// Irreducibility witness for a certificate entry: either the reduction
// mod p is irreducible of full degree, or the entry is a single block
// whose (shifted or g-adic) polygon is one segment with coprime endpoints.
// Censored values only shrink the polygon, so acceptance is sound.
fn irreducibility_witness(h: &Poly, p: u64, k: u32) -> Result<(), String> {
    let hbar = FpPoly::reduce_from(h, p).map_err(|e| format!("reduction failed: {}", e))?;
    if hbar.deg() == h.deg() && hbar.is_irreducible() {
        return Ok(());
    }
    let (_, blocks) = hbar.factor();
    if blocks.len() != 1 {
        return Err("reducible entry claims irreducibility".into());
    }
    let (gbar, e) = &blocks[0];
    if gbar.deg() * *e as usize != h.deg() {
        return Err("entry reduction drops degree".into());
    }
    let modulus = BigInt::from(p).pow(k);
    let hz = poly_mod_pk(h, p, k).map_err(|e| format!("entry not p-integral: {}", e))?;
    let (v0, width, vals): (u32, usize, Vec<u32>) = if gbar.deg() == 1 {
        let root = (p - gbar.coeff(0)) % p;
        // any lift of the residue root works as the shift center
        let c0: i64 = if root <= p / 2 { root as i64 } else { root as i64 - p as i64 };
        let shifted = zp_shift(&hz, c0, &modulus);
        let vals: Vec<u32> = shifted.iter().map(|c| censored_val(c, p, k)).collect();
        (vals[0], h.deg(), vals)
    } else {
        let g = fp_to_z(gbar);
        let mut chain_vals = Vec::new();
        let mut rest = hz;
        while !rest.is_empty() {
            let (q, r) = zp_divmod_monic(&rest, &g, &modulus);
            chain_vals.push(r.iter().map(|c| censored_val(c, p, k)).min().unwrap_or(k));
            rest = q;
        }
        if chain_vals.len() != *e as usize + 1 || chain_vals[*e as usize] != 0 {
            return Err("malformed g-adic expansion".into());
        }
        (chain_vals[0], *e as usize, chain_vals)
    };
    if v0 >= k {
        return Err("polygon exceeds certificate precision".into());
    }
    if (v0 as u64).gcd(&(width as u64)) != 1 {
        return Err("polygon endpoints are not coprime".into());
    }
    let ok = (1..width).all(|i| vals[i] as u64 * width as u64 >= v0 as u64 * (width - i) as u64);
    if ok {
        Ok(())
    } else {
        Err("polygon is not a single segment".into())
    }
}

/// Independent check of a pairing certificate against f: the entries must
/// multiply back to f mod p^precision, be pairwise separated well within
/// that precision, respect the claimed involute action, and carry witnesses
/// for every irreducibility claim.
pub fn verify_pairing_certificate(
    f: &Poly,
    p: u64,
    cert: &PairingCertificate,
) -> Result<(), String> {
    check_input(f, p).map_err(|e| e.to_string())?;
    let k = cert.precision;
    if k == 0 {
        return Err("precision must be positive".into());
    }
    let modulus = BigInt::from(p).pow(k);

    let mut total = 0usize;
    let mut product: ZPoly = vec![BigInt::one()];
    let mut reduced: Vec<ZPoly> = Vec::new();
    for (i, entry) in cert.entries.iter().enumerate() {
        let h = &entry.poly;
        if h.is_zero() || !h.is_monic() || h.deg() == 0 {
            return Err(format!("entry {} is not monic of positive degree", i));
        }
        if valuation(&h.constant_term(), p).map_err(|e| e.to_string())? != 0 {
            return Err(format!("entry {} has non-unit constant term", i));
        }
        let hz = poly_mod_pk(h, p, k).map_err(|_| format!("entry {} not p-integral", i))?;
        if hz.len() != h.deg() + 1 {
            return Err(format!("entry {} degenerates mod p^{}", i, k));
        }
        total += h.deg();
        product = zp_mul(&product, &hz, &modulus);
        reduced.push(hz);
    }
    if total != f.deg() {
        return Err("entry degrees do not sum to deg f".into());
    }
    let fz = poly_mod_pk(f, p, k).map_err(|_| "f not p-integral at this precision".to_string())?;
    if zp_trim(product) != fz {
        return Err(format!("entries do not multiply to f mod p^{}", k));
    }

    for (i, entry) in cert.entries.iter().enumerate() {
        match (entry.tag, entry.partner) {
            (PairTag::Symmetric, None) => {}
            (PairTag::Paired, Some(j)) if j == i => {
                // a block whose factors pair off among themselves
                if entry.irreducible {
                    return Err(format!("entry {} is self-paired yet claims irreducibility", i));
                }
            }
            (PairTag::Paired, Some(j)) => {
                if j >= cert.entries.len() {
                    return Err(format!("entry {} has invalid partner {}", i, j));
                }
                let other = &cert.entries[j];
                if other.tag != PairTag::Paired || other.partner != Some(i) {
                    return Err(format!("entries {} and {} are not mutually paired", i, j));
                }
            }
            _ => return Err(format!("entry {} mixes tag and partner inconsistently", i)),
        }
        let star = entry.poly.star().map_err(|e| format!("entry {}: {}", i, e))?;
        let sz = poly_mod_pk(&star, p, k)
            .map_err(|_| format!("entry {} involute not p-integral", i))?;
        let target = entry.partner.unwrap_or(i);
        if sz != reduced[target] {
            return Err(format!(
                "involute of entry {} does not match entry {} mod p^{}",
                i, target, k
            ));
        }
    }

    for i in 0..cert.entries.len() {
        for j in (i + 1)..cert.entries.len() {
            let r = cert.entries[i].poly.resultant(&cert.entries[j].poly);
            if r.is_zero() {
                return Err(format!("entries {} and {} share a factor", i, j));
            }
            let v = valuation(&r, p).expect("nonzero resultant");
            if v < 0 {
                return Err(format!("entries {} and {} have a non-integral resultant", i, j));
            }
            if 2 * v as u32 >= k {
                return Err(format!(
                    "entries {} and {} are not separated at precision p^{}",
                    i, j, k
                ));
            }
        }
    }

    for (i, entry) in cert.entries.iter().enumerate() {
        if entry.tag == PairTag::Symmetric && !entry.irreducible {
            return Err(format!("entry {} counts as symmetric without irreducibility", i));
        }
        if entry.irreducible {
            irreducibility_witness(&entry.poly, p, k)
                .map_err(|e| format!("entry {}: {}", i, e))?;
        }
    }
    Ok(())
}
