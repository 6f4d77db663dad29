//! Dense polynomials over a prime field F_p (p a u64 prime) with complete
//! factorization: squarefree split, distinct-degree split, then equal-degree
//! splitting (Cantor-Zassenhaus for odd p, trace maps for p = 2). Randomness
//! is a ChaCha stream seeded from the input so runs are reproducible.

use super::{Poly, PolyError};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    pub p: u64,
    // c[i] is the coefficient of X^i in [0, p); invariant: last entry nonzero
    c: Vec<u64>,
}

fn mulp(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powp(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulp(acc, b, p);
        }
        b = mulp(b, b, p);
        e >>= 1;
    }
    acc
}

fn invp(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    powp(a, p - 2, p)
}

impl FpPoly {
    pub fn new(p: u64, coeffs: &[u64]) -> FpPoly {
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> FpPoly {
        let c: Vec<u64> = coeffs.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect();
        FpPoly::new(p, &c)
    }

    /// Reduce a rational polynomial mod p; fails if a denominator is divisible by p.
    pub fn reduce_from(f: &Poly, p: u64) -> Result<FpPoly, PolyError> {
        use num_integer::Integer;
        let pb = num_bigint::BigInt::from(p);
        let mut c = Vec::with_capacity(f.coeffs().len());
        for a in f.coeffs() {
            if a.denom().mod_floor(&pb).is_zero() {
                return Err(PolyError::NotInvertible);
            }
            let num = a.numer().mod_floor(&pb);
            let den = a.denom().mod_floor(&pb);
            let num = num.to_u64_digits().1.first().copied().unwrap_or(0);
            let den = den.to_u64_digits().1.first().copied().unwrap_or(0);
            c.push(mulp(num, invp(den, p), p));
        }
        Ok(FpPoly::new(p, &c))
    }

    pub fn zero(p: u64) -> FpPoly {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> FpPoly {
        FpPoly::new(p, &[1])
    }

    pub fn x(p: u64) -> FpPoly {
        FpPoly::new(p, &[0, 1])
    }

    pub fn constant(p: u64, a: u64) -> FpPoly {
        FpPoly::new(p, &[a])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn leading(&self) -> u64 {
        *self.c.last().expect("leading of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.c.last() == Some(&1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &a in self.c.iter().rev() {
            acc = (mulp(acc, x, self.p) + a) % self.p;
        }
        acc
    }

    pub fn neg(&self) -> FpPoly {
        let p = self.p;
        FpPoly::new(p, &self.c.iter().map(|&a| (p - a) % p).collect::<Vec<_>>())
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, o.p);
        let p = self.p;
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push((self.coeff(i) + o.coeff(i)) % p);
        }
        FpPoly::new(p, &c)
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, o.p);
        let p = self.p;
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(p);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulp(a, b, p)) % p;
            }
        }
        FpPoly::new(p, &c)
    }

    pub fn scale(&self, a: u64) -> FpPoly {
        let p = self.p;
        FpPoly::new(p, &self.c.iter().map(|&x| mulp(x, a, p)).collect::<Vec<_>>())
    }

    pub fn make_monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invp(self.leading(), self.p))
    }

    pub fn divmod(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        debug_assert_eq!(self.p, d.p);
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = d.deg();
        let lcinv = invp(d.leading(), p);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        while r.len() > dd {
            let k = r.len() - 1;
            let t = mulp(r[k], lcinv, p);
            if t != 0 {
                q[k - dd] = t;
                for i in 0..=dd {
                    let sub = mulp(d.c[i], t, p);
                    let idx = k - dd + i;
                    r[idx] = (r[idx] + p - sub) % p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        (FpPoly::new(p, &q), FpPoly::new(p, &r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.divmod(d).1
    }

    pub fn div_exact(&self, d: &FpPoly) -> FpPoly {
        let (q, r) = self.divmod(d);
        debug_assert!(r.is_zero());
        q
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// (g, u, v) with u*self + v*other = g, g monic gcd.
    pub fn ext_gcd(&self, other: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
        let p = self.p;
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let (mut u0, mut u1) = (FpPoly::one(p), FpPoly::zero(p));
        let (mut v0, mut v1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            r0 = r1;
            r1 = r;
            let u = u0.sub(&q.mul(&u1));
            u0 = u1;
            u1 = u;
            let v = v0.sub(&q.mul(&v1));
            v0 = v1;
            v1 = v;
        }
        if r0.is_zero() {
            return (r0, u0, v0);
        }
        let s = invp(r0.leading(), p);
        (r0.scale(s), u0.scale(s), v0.scale(s))
    }

    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        if self.c.len() <= 1 {
            return FpPoly::zero(p);
        }
        let mut c = Vec::with_capacity(self.c.len() - 1);
        for (i, &a) in self.c.iter().enumerate().skip(1) {
            c.push(mulp(a, (i as u64) % p, p));
        }
        FpPoly::new(p, &c)
    }

    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly) -> FpPoly {
        let p = self.p;
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(p);
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        acc
    }

    /// For f with f' = 0 (every exponent divisible by p), the g with g^p = f.
    /// Coefficient p-th roots are the identity on F_p.
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        let mut c = Vec::new();
        for (i, &a) in self.c.iter().enumerate() {
            if i % p == 0 {
                c.push(a);
            } else {
                debug_assert_eq!(a, 0);
            }
        }
        FpPoly::new(self.p, &c)
    }

    /// Complete factorization of a nonzero polynomial into monic irreducibles
    /// with multiplicities, plus the leading unit. Deterministic.
    pub fn factor(&self) -> (u64, Vec<(FpPoly, u32)>) {
        assert!(!self.is_zero());
        let unit = self.leading();
        let mut out: Vec<(FpPoly, u32)> = Vec::new();
        factor_monic(&self.make_monic(), 1, &mut out);
        out.sort_by(|a, b| (a.0.deg(), &a.0.c).cmp(&(b.0.deg(), &b.0.c)));
        (unit, out)
    }

    pub fn is_irreducible(&self) -> bool {
        if self.is_zero() || self.deg() == 0 {
            return false;
        }
        let (_, fs) = self.factor();
        fs.len() == 1 && fs[0].1 == 1
    }

    /// The reciprocal involute h(0)^{-1} X^deg h(1/X); needs h(0) != 0.
    pub fn star(&self) -> FpPoly {
        assert!(self.coeff(0) != 0, "star needs a unit constant term");
        let mut c = self.c.clone();
        c.reverse();
        FpPoly { p: self.p, c }.scale(invp(self.coeff(0), self.p))
    }

    /// Roots in F_p (no multiplicity), ascending.
    pub fn roots(&self) -> Vec<u64> {
        let (_, fs) = self.factor();
        let p = self.p;
        let mut out: Vec<u64> = fs
            .iter()
            .filter(|(g, _)| g.deg() == 1)
            .map(|(g, _)| (p - g.coeff(0)) % p)
            .collect();
        out.sort_unstable();
        out
    }
}

impl std::fmt::Display for FpPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.c.len()).rev() {
            let a = self.c[i];
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 || a != 1 {
                write!(f, "{}", a)?;
            }
            if i >= 1 {
                if a != 1 {
                    write!(f, "*")?;
                }
                write!(f, "X")?;
                if i > 1 {
                    write!(f, "^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

// multiplicity_scale: multiplicities accumulated so far (p^j from p-th root layers)
fn factor_monic(f: &FpPoly, multiplicity_scale: u32, out: &mut Vec<(FpPoly, u32)>) {
    let p = f.p;
    if f.deg() == 0 {
        return;
    }
    let mut rem = f.clone();
    let deriv = rem.derivative();
    if !deriv.is_zero() {
        // distinct irreducibles with multiplicity not divisible by p
        let w = rem.div_exact(&rem.gcd(&deriv));
        for q in factor_squarefree(&w) {
            let mut e = 0u32;
            loop {
                let (quo, r) = rem.divmod(&q);
                if !r.is_zero() {
                    break;
                }
                rem = quo;
                e += 1;
            }
            out.push((q, e * multiplicity_scale));
        }
    }
    if rem.deg() > 0 {
        // remaining multiplicities all divisible by p: rem = h^p
        debug_assert!(rem.derivative().is_zero());
        let h = rem.pth_root();
        factor_monic(&h, multiplicity_scale * p as u32, out);
    }
}

// f monic squarefree: list of its monic irreducible factors
fn factor_squarefree(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let mut rng = seeded_rng(f);
    // distinct-degree split
    let mut rem = f.clone();
    let x = FpPoly::x(p);
    let mut h = x.pow_mod(&BigUint::from(p), &rem); // X^(p^d) iterated
    let mut d = 1usize;
    while rem.deg() >= 2 * d {
        let g = h.sub(&x).gcd(&rem);
        if g.deg() > 0 {
            equal_degree_split(&g, d, &mut rng, &mut out);
            rem = rem.div_exact(&g);
            h = h.rem(&rem);
        }
        d += 1;
        if rem.deg() == 0 {
            break;
        }
        h = h.pow_mod(&BigUint::from(p), &rem);
    }
    if rem.deg() > 0 {
        out.push(rem);
    }
    out
}

fn seeded_rng(f: &FpPoly) -> ChaCha8Rng {
    let mut hasher = DefaultHasher::new();
    f.p.hash(&mut hasher);
    f.c.hash(&mut hasher);
    ChaCha8Rng::seed_from_u64(hasher.finish())
}

// g monic squarefree, all irreducible factors of degree d: split fully
fn equal_degree_split(g: &FpPoly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
    let p = g.p;
    if g.deg() == d {
        out.push(g.make_monic());
        return;
    }
    loop {
        let n = g.deg();
        let mut coeffs = vec![0u64; n];
        for c in coeffs.iter_mut() {
            *c = rng.gen_range(0..p);
        }
        let a = FpPoly::new(p, &coeffs);
        if a.is_zero() {
            continue;
        }
        let candidate = if p == 2 {
            // trace map into F_2: T(a) = a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut cur = a.clone();
            for _ in 1..d {
                cur = cur.mul(&cur).rem(g);
                t = t.add(&cur);
            }
            t.gcd(g)
        } else {
            let q = BigUint::from(p).pow(d as u32);
            let e = (&q - BigUint::one()) / BigUint::from(2u32);
            let b = a.pow_mod(&e, g);
            b.sub(&FpPoly::one(p)).gcd(g)
        };
        if candidate.deg() > 0 && candidate.deg() < g.deg() {
            let other = g.div_exact(&candidate);
            equal_degree_split(&candidate, d, rng, out);
            equal_degree_split(&other, d, rng, out);
            return;
        }
    }
}
