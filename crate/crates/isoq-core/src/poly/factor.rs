//! Factorization over Q: Yun's squarefree decomposition, then for each
//! squarefree part a Zassenhaus round (factor mod a good prime, quadratic
//! Hensel lift to past the Mignotte bound, subset recombination).
//!
//! The Hensel machinery works on dense integer polynomials modulo p^k and is
//! shared with the p-adic analysis, which lifts pairwise coprime factor blocks
//! of possibly non-squarefree reductions.

use super::modp::FpPoly;
use super::{Poly, PolyError};
use crate::arith::primes_from;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

// ---- dense integer polynomials modulo m (coefficients in [0, m)) ----

pub type ZPoly = Vec<BigInt>;

pub fn zp_trim(mut v: ZPoly) -> ZPoly {
    while v.last().map_or(false, |x| x.is_zero()) {
        v.pop();
    }
    v
}

pub fn zp_deg(v: &ZPoly) -> usize {
    assert!(!v.is_empty(), "degree of zero");
    v.len() - 1
}

pub fn zp_reduce(v: &[BigInt], m: &BigInt) -> ZPoly {
    zp_trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

pub fn zp_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero);
        out.push(x.mod_floor(m));
    }
    zp_trim(out)
}

fn zp_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero);
        out.push(x.mod_floor(m));
    }
    zp_trim(out)
}

pub fn zp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zp_trim(out.into_iter().map(|c| c.mod_floor(m)).collect())
}

// division by a monic divisor, valid over Z/m
pub fn zp_divmod_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    assert!(d.last().map_or(false, |x| x.is_one()), "divisor must be monic");
    let dd = d.len() - 1;
    let mut r: ZPoly = a.to_vec();
    r = zp_trim(r);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dd];
    while r.len() > dd {
        let k = r.len() - 1;
        let t = r[k].clone();
        if !t.is_zero() {
            q[k - dd] = t.clone();
            for i in 0..=dd {
                let idx = k - dd + i;
                let v = (&r[idx] - &d[i] * &t).mod_floor(m);
                r[idx] = v;
            }
        }
        r.pop();
        while r.last().map_or(false, |x| x.is_zero()) {
            r.pop();
        }
    }
    (zp_trim(q), r)
}

/// Symmetric representative of v mod m, coefficients in (-m/2, m/2].
pub fn zp_center(v: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    zp_trim(
        v.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

pub fn fp_to_z(f: &FpPoly) -> ZPoly {
    f.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

/// Rational polynomial to Z/p^k (denominators must be prime to p).
pub fn poly_mod_pk(f: &Poly, p: u64, k: u32) -> Result<ZPoly, PolyError> {
    let m = BigInt::from(p).pow(k);
    let mut out = Vec::with_capacity(f.coeffs().len());
    for a in f.coeffs() {
        if a.denom().mod_floor(&BigInt::from(p)).is_zero() {
            return Err(PolyError::NotInvertible);
        }
        let den_inv = crate::arith::mod_inverse(&a.denom().mod_floor(&m), &m);
        out.push((a.numer() * den_inv).mod_floor(&m));
    }
    Ok(zp_trim(out))
}

pub fn zp_to_poly(v: &[BigInt]) -> Poly {
    Poly::from_coeffs(v.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

// One quadratic Hensel step: from a factorization and Bezout pair mod m to mod m^2.
// f, g, h monic; f = g h (mod m); s g + t h = 1 (mod m); deg s < deg h, deg t < deg g.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zp_sub(f, &zp_mul(g, h, &m2), &m2);
    let (q, r) = zp_divmod_monic(&zp_mul(s, &e, &m2), h, &m2);
    let g1 = zp_add(&zp_add(g, &zp_mul(t, &e, &m2), &m2), &zp_mul(&q, g, &m2), &m2);
    let h1 = zp_add(h, &r, &m2);
    debug_assert_eq!(zp_deg(&g1), zp_deg(&g.to_vec()));
    debug_assert_eq!(zp_deg(&h1), zp_deg(&h.to_vec()));
    // Bezout update to mod m^2
    let b = zp_sub(&zp_add(&zp_mul(s, &g1, &m2), &zp_mul(t, &h1, &m2), &m2), &[BigInt::one()], &m2);
    let (q2, r2) = zp_divmod_monic(&zp_mul(s, &b, &m2), &h1, &m2);
    let s1 = zp_sub(s, &r2, &m2);
    let t1 = zp_sub(&zp_sub(t, &zp_mul(t, &b, &m2), &m2), &zp_mul(&q2, &g1, &m2), &m2);
    (g1, h1, s1, t1)
}

/// Lift f = g0 h0 (mod p), with g0 h0 coprime monic, to f = G H (mod p^k).
pub fn hensel_lift_pair(f: &[BigInt], g0: &FpPoly, h0: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, s0, t0) = g0.ext_gcd(h0);
    assert!(one.is_one(), "factors must be coprime mod p");
    let mut g = fp_to_z(g0);
    let mut h = fp_to_z(h0);
    let mut s = fp_to_z(&s0);
    let mut t = fp_to_z(&t0);
    let mut a = 1u32;
    let mut m = BigInt::from(p);
    while a < k {
        let (g1, h1, s1, t1) = hensel_step(&zp_reduce(f, &(&m * &m)), &g, &h, &s, &t, &m);
        g = g1;
        h = h1;
        s = s1;
        t = t1;
        m = &m * &m;
        a *= 2;
    }
    let target = BigInt::from(p).pow(k);
    (zp_reduce(&g, &target), zp_reduce(&h, &target))
}

/// Lift a list of pairwise coprime monic factors of f mod p to mod p^k.
/// f must be monic with product of the list congruent to f mod p.
pub fn hensel_lift_multi(f: &[BigInt], factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    let target = BigInt::from(p).pow(k);
    if factors.len() == 1 {
        return vec![zp_reduce(f, &target)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let mut gl = FpPoly::one(p);
    for q in left {
        gl = gl.mul(q);
    }
    let mut gr = FpPoly::one(p);
    for q in right {
        gr = gr.mul(q);
    }
    let (bigg, bigh) = hensel_lift_pair(f, &gl, &gr, p, k);
    let mut out = hensel_lift_multi(&bigg, left, p, k);
    out.extend(hensel_lift_multi(&bigh, right, p, k));
    out
}

// ---- integer polynomial utilities for the recombination phase ----

fn int_poly_divmod_monic(a: &[BigInt], d: &[BigInt]) -> (ZPoly, ZPoly) {
    assert!(d.last().map_or(false, |x| x.is_one()));
    let dd = d.len() - 1;
    let mut r: ZPoly = zp_trim(a.to_vec());
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dd];
    while r.len() > dd {
        let k = r.len() - 1;
        let t = r[k].clone();
        if !t.is_zero() {
            q[k - dd] = t.clone();
            for i in 0..=dd {
                let idx = k - dd + i;
                let v = &r[idx] - &d[i] * &t;
                r[idx] = v;
            }
        }
        r.pop();
        while r.last().map_or(false, |x| x.is_zero()) {
            r.pop();
        }
    }
    (zp_trim(q), r)
}

fn int_sqrt_upper(n: &BigInt) -> BigInt {
    // integer upper bound for sqrt
    let s = n.sqrt();
    if &(&s * &s) == n {
        s
    } else {
        s + 1
    }
}

// Coefficient bound for monic divisors of monic integer f (Mignotte style).
fn factor_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    (BigInt::one() << n) * int_sqrt_upper(&norm2)
}

// f monic squarefree with integer coefficients: monic irreducible integer factors.
fn zassenhaus_squarefree(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.to_vec()];
    }
    // prime with squarefree reduction of the same degree (monic, so degree holds)
    let mut chosen = None;
    for p in primes_from(3).take(200) {
        let fp = FpPoly::new(p, &f.iter().map(|c| c.mod_floor(&BigInt::from(p)).to_u64_digits().1.first().copied().unwrap_or(0)).collect::<Vec<_>>());
        if fp.degree() == Some(n) && fp.gcd(&fp.derivative()).is_one() {
            chosen = Some((p, fp));
            break;
        }
    }
    let (p, fp) = chosen.expect("no squarefree reduction found in prime scan");
    let (_, fs) = fp.factor();
    debug_assert!(fs.iter().all(|(_, e)| *e == 1));
    let modular: Vec<FpPoly> = fs.into_iter().map(|(g, _)| g).collect();
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    // lift past twice the divisor coefficient bound
    let bound = factor_bound(f);
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    let two_bound = &bound * 2;
    while pk <= two_bound {
        pk *= pk.clone();
        k *= 2;
    }
    let lifted = hensel_lift_multi(f, &modular, p, k);
    let modulus = BigInt::from(p).pow(k);

    // subset recombination
    let mut active: Vec<usize> = (0..lifted.len()).collect();
    let mut remaining: ZPoly = f.to_vec();
    let mut out: Vec<ZPoly> = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= active.len() {
        let combos = combinations(active.len(), size);
        for combo in combos {
            let subset: Vec<usize> = combo.iter().map(|&i| active[i]).collect();
            let mut prod: ZPoly = vec![BigInt::one()];
            for &i in &subset {
                prod = zp_mul(&prod, &lifted[i], &modulus);
            }
            let cand = zp_center(&prod, &modulus);
            if cand.len() < 2 {
                continue;
            }
            let (q, r) = int_poly_divmod_monic(&remaining, &cand);
            if r.is_empty() {
                out.push(cand);
                remaining = q;
                active.retain(|i| !subset.contains(i));
                continue 'outer;
            }
        }
        size += 1;
    }
    if remaining.len() > 1 {
        out.push(remaining);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // advance odometer
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Yun's squarefree decomposition for monic f over Q: pairs (w, i) with
/// f = prod w^i, each w monic squarefree, distinct w coprime.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    assert!(!f.is_zero());
    let f = f.make_monic();
    if f.deg() == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let a = f.gcd(&df);
    let mut b = f.div_exact(&a).unwrap();
    let mut c = df.div_exact(&a).unwrap();
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1u32;
    while !(b.deg() == 0) {
        let ai = b.gcd(&d);
        if ai.deg() > 0 {
            out.push((ai.clone(), i));
        }
        b = b.div_exact(&ai).unwrap();
        c = d.div_exact(&ai).unwrap();
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

/// Complete factorization over Q: leading coefficient and monic irreducible
/// factors with multiplicities, deterministically ordered.
pub fn factor_rational(f: &Poly) -> (BigRational, Vec<(Poly, u32)>) {
    assert!(!f.is_zero(), "factor of zero polynomial");
    let lead = f.leading();
    let monic = f.make_monic();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (w, mult) in squarefree_decomposition(&monic) {
        // clear denominators: W(X) = L^d w(X/L) is integer monic
        let mut l = BigInt::one();
        for a in w.coeffs() {
            l = l.lcm(a.denom());
        }
        let lr = BigRational::from_integer(l.clone());
        let d = w.deg() as u32;
        let scaled = w.scale_input(&(BigRational::one() / &lr)).scale(&pow_rational(&lr, d));
        let coeffs: Vec<BigInt> = scaled
            .coeffs()
            .iter()
            .map(|c| {
                debug_assert!(c.denom().is_one());
                c.numer().clone()
            })
            .collect();
        for g in zassenhaus_squarefree(&coeffs) {
            // map back h(X) -> h(L X) / L^deg h
            let gp = zp_to_poly(&g);
            let back = gp.scale_input(&lr).make_monic();
            out.push((back, mult));
        }
    }
    out.sort_by(|a, b| {
        (a.0.deg(), a.0.coeffs(), a.1).cmp(&(b.0.deg(), b.0.coeffs(), b.1))
    });
    (lead, out)
}

fn pow_rational(a: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= a;
    }
    acc
}

pub fn is_irreducible(f: &Poly) -> bool {
    if f.is_zero() || f.deg() == 0 {
        return false;
    }
    let (_, fs) = factor_rational(f);
    fs.len() == 1 && fs[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    fn reassemble(lead: &BigRational, fs: &[(Poly, u32)]) -> Poly {
        let mut acc = Poly::constant(lead.clone());
        for (g, e) in fs {
            acc = acc.mul(&g.pow(*e));
        }
        acc
    }

    #[test]
    fn hensel_pair_lift_works() {
        // X^2 - 3X + 1 = (X - 5)(X - 9) mod 11; lift to 11^4
        let f: ZPoly = vec![BigInt::from(1), BigInt::from(-3), BigInt::from(1)];
        let f = zp_reduce(&f, &BigInt::from(11u64).pow(4));
        let g0 = FpPoly::from_i64(11, &[-5, 1]);
        let h0 = FpPoly::from_i64(11, &[-9, 1]);
        let (g, h) = hensel_lift_pair(&f, &g0, &h0, 11, 4);
        let m = BigInt::from(11u64).pow(4);
        assert_eq!(zp_mul(&g, &h, &m), f);
        // the lifted roots multiply to 1 mod 11^4
        let r1 = (&m - &g[0]).mod_floor(&m);
        let r2 = (&m - &h[0]).mod_floor(&m);
        assert_eq!((r1 * r2).mod_floor(&m), BigInt::one());
    }

    #[test]
    fn hensel_multi_lift_works() {
        // X^3 - 1 = (X-1)(X-2)(X-4) mod 7
        let m = BigInt::from(7u64).pow(8);
        let f: ZPoly = zp_reduce(&[BigInt::from(-1), BigInt::zero(), BigInt::zero(), BigInt::one()], &m);
        let parts = vec![
            FpPoly::from_i64(7, &[-1, 1]),
            FpPoly::from_i64(7, &[-2, 1]),
            FpPoly::from_i64(7, &[-4, 1]),
        ];
        let lifted = hensel_lift_multi(&f, &parts, 7, 8);
        assert_eq!(lifted.len(), 3);
        let mut prod: ZPoly = vec![BigInt::one()];
        for g in &lifted {
            prod = zp_mul(&prod, g, &m);
        }
        assert_eq!(prod, f);
        // each lifted root is a cube root of 1 mod 7^8
        for g in &lifted {
            let r = (&m - &g[0]).mod_floor(&m);
            assert_eq!(r.modpow(&BigInt::from(3), &m), BigInt::one());
        }
    }

    #[test]
    fn squarefree_decomposition_yun() {
        // (X-1)^2 (X+2)^3
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]).pow(3));
        let parts = squarefree_decomposition(&f);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (p(&[-1, 1]), 2));
        assert_eq!(parts[1], (p(&[2, 1]), 3));
        // squarefree input comes back whole
        let g = p(&[1, -3, 1]);
        assert_eq!(squarefree_decomposition(&g), vec![(g.clone(), 1)]);
    }

    #[test]
    fn factor_quadratics() {
        let (lead, fs) = factor_rational(&p(&[1, -3, 1]));
        assert!(lead.is_one());
        assert_eq!(fs, vec![(p(&[1, -3, 1]), 1)]);
        let (_, fs) = factor_rational(&p(&[-1, 0, 1]));
        assert_eq!(fs, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);
    }

    #[test]
    fn factor_cyclotomic_products() {
        // X^4 - 1 = (X-1)(X+1)(X^2+1)
        let (_, fs) = factor_rational(&p(&[-1, 0, 0, 0, 1]));
        assert_eq!(fs, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1), (p(&[1, 0, 1]), 1)]);
        // X^12 - 1 has the six cyclotomic factors of the divisors of 12
        let mut xf = vec![0i64; 13];
        xf[0] = -1;
        xf[12] = 1;
        let (_, fs) = factor_rational(&p(&xf));
        let expected: Vec<Poly> = vec![
            p(&[-1, 1]),
            p(&[1, 1]),
            p(&[1, -1, 1]),
            p(&[1, 0, 1]),
            p(&[1, 1, 1]),
            p(&[1, 0, -1, 0, 1]),
        ];
        let got: Vec<Poly> = fs.iter().map(|(g, _)| g.clone()).collect();
        for e in &expected {
            assert!(got.contains(e), "missing factor {}", e);
        }
        assert_eq!(fs.len(), 6);
        assert!(fs.iter().all(|(_, e)| *e == 1));
    }

    #[test]
    fn factor_needs_recombination() {
        // X^4 - 10X^2 + 1 is irreducible over Q but splits mod every prime
        let f = p(&[1, 0, -10, 0, 1]);
        let (_, fs) = factor_rational(&f);
        assert_eq!(fs, vec![(f.clone(), 1)]);
        assert!(is_irreducible(&f));
    }

    #[test]
    fn factor_cyclotomic_ten_irreducible() {
        let f = p(&[1, -1, 1, -1, 1]);
        assert!(is_irreducible(&f));
        assert!(!is_irreducible(&p(&[-1, 0, 1])));
    }

    #[test]
    fn factor_with_multiplicities_and_mixed_parts() {
        let f = p(&[-1, 1])
            .pow(2)
            .mul(&p(&[1, 0, 1]))
            .mul(&p(&[1, -3, 1]));
        let (lead, fs) = factor_rational(&f);
        assert_eq!(reassemble(&lead, &fs), f);
        assert_eq!(fs.len(), 3);
        let m: std::collections::HashMap<Poly, u32> = fs.into_iter().collect();
        assert_eq!(m[&p(&[-1, 1])], 2);
        assert_eq!(m[&p(&[1, 0, 1])], 1);
        assert_eq!(m[&p(&[1, -3, 1])], 1);
    }

    #[test]
    fn factor_rational_coefficients() {
        // (X - 1/2)(X + 1/3), and with leading coefficient 6
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let f1 = Poly::from_coeffs(vec![-half.clone(), BigRational::one()]);
        let f2 = Poly::from_coeffs(vec![third.clone(), BigRational::one()]);
        let f = f1.mul(&f2);
        let (lead, fs) = factor_rational(&f);
        assert!(lead.is_one());
        assert_eq!(fs.len(), 2);
        assert_eq!(reassemble(&lead, &fs), f);
        let g = f.scale(&BigRational::from_integer(BigInt::from(6)));
        let (lead, fs) = factor_rational(&g);
        assert_eq!(lead, BigRational::from_integer(BigInt::from(6)));
        assert_eq!(reassemble(&lead, &fs), g);
    }

    #[test]
    fn factor_big_coefficients() {
        // product with coefficients in the hundreds, multiplicity checked by roundtrip
        let f = p(&[-100, 1]).mul(&p(&[99, 1])).mul(&p(&[1, 10000, 1]));
        let (lead, fs) = factor_rational(&f);
        assert_eq!(reassemble(&lead, &fs), f);
        assert_eq!(fs.len(), 3);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn factor_roundtrip_random_products(picks in proptest::collection::vec(0usize..7, 1..5)) {
            let pool = [
                p(&[-1, 1]),
                p(&[1, 1]),
                p(&[2, 1]),
                p(&[1, 0, 1]),
                p(&[1, 1, 1]),
                p(&[1, -3, 1]),
                p(&[-2, 0, 0, 1]),
            ];
            let mut f = Poly::one();
            for &i in &picks {
                f = f.mul(&pool[i]);
            }
            let (lead, fs) = factor_rational(&f);
            proptest::prop_assert_eq!(reassemble(&lead, &fs), f);
            for (g, _) in &fs {
                proptest::prop_assert!(pool.contains(g));
            }
        }
    }
}
