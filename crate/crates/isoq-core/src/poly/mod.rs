//! Dense univariate polynomials over Q, with the operations the decision
//! procedures need: Euclidean arithmetic, the reciprocal (star) involution,
//! trace polynomials for symmetric inputs, resultants, Newton power sums and
//! arithmetic in quotient rings Q[X]/(f).

pub mod factor;
pub mod modp;
pub mod padic;
pub mod sturm;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    // coefficients, c[i] is the coefficient of X^i; invariant: last entry nonzero
    c: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    DivisionByZero,
    NotMonic,
    NotSymmetric,
    ZeroConstantTerm,
    NotInvertible,
    OddDegree,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::DivisionByZero => write!(f, "polynomial division by zero"),
            PolyError::NotMonic => write!(f, "monic polynomial required"),
            PolyError::NotSymmetric => write!(f, "symmetric polynomial required"),
            PolyError::ZeroConstantTerm => write!(f, "nonzero constant term required"),
            PolyError::NotInvertible => write!(f, "element not invertible in quotient ring"),
            PolyError::OddDegree => write!(f, "even degree required"),
        }
    }
}

impl std::error::Error for PolyError {}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn from_coeffs(mut c: Vec<BigRational>) -> Poly {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_i64(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&n| rat(n)).collect())
    }

    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn x() -> Poly {
        Poly::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(a: BigRational) -> Poly {
        Poly::from_coeffs(vec![a])
    }

    /// X^k
    pub fn monomial(k: usize) -> Poly {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        Poly::from_coeffs(c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree; zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Degree of a nonzero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn leading(&self) -> BigRational {
        self.c.last().cloned().expect("leading coefficient of zero polynomial")
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().map_or(false, |x| x.is_one())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigRational {
        self.eval(&rat(x))
    }

    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|a| -a).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(self.coeff(i) + other.coeff(i));
        }
        Poly::from_coeffs(c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, a: &BigRational) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|x| x * a).collect())
    }

    /// f(a X)
    pub fn scale_input(&self, a: &BigRational) -> Poly {
        let mut pw = BigRational::one();
        let mut c = Vec::with_capacity(self.c.len());
        for x in &self.c {
            c.push(x * &pw);
            pw *= a;
        }
        Poly::from_coeffs(c)
    }

    /// f(g(X)) by Horner.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(a.clone()));
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly), PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dd = d.deg();
        let lc = d.leading();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let t = r[k].clone() / &lc;
            if !t.is_zero() {
                q[k - dd] = t.clone();
                for i in 0..=dd {
                    let v = &d.c[i] * &t;
                    r[k - dd + i] -= v;
                }
            }
            r.pop();
            while r.last().map_or(false, |x| x.is_zero()) {
                r.pop();
            }
            if r.len() <= dd {
                break;
            }
        }
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly, PolyError> {
        Ok(self.divmod(d)?.1)
    }

    pub fn div_exact(&self, d: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.divmod(d)?;
        debug_assert!(r.is_zero(), "div_exact with nonzero remainder");
        Ok(q)
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        let mut c = Vec::with_capacity(self.c.len() - 1);
        for (i, a) in self.c.iter().enumerate().skip(1) {
            c.push(a * rat(i as i64));
        }
        Poly::from_coeffs(c)
    }

    pub fn make_monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading();
        self.scale(&(BigRational::one() / lc))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic (or zero).
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let (mut u0, mut u1) = (Poly::one(), Poly::zero());
        let (mut v0, mut v1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).unwrap();
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
        let lc = r0.leading();
        let inv = BigRational::one() / lc;
        (r0.scale(&inv), u0.scale(&inv), v0.scale(&inv))
    }

    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.deg() == 0 {
            return true;
        }
        self.gcd(&self.derivative()).deg() == 0
    }

    /// X^d f(1/X) (coefficient reversal).
    pub fn reverse(&self) -> Poly {
        let mut c = self.c.clone();
        c.reverse();
        Poly::from_coeffs(c)
    }

    /// The reciprocal involute f*(X) = f(0)^{-1} X^deg(f) f(1/X).
    pub fn star(&self) -> Result<Poly, PolyError> {
        if self.is_zero() || self.constant_term().is_zero() {
            return Err(PolyError::ZeroConstantTerm);
        }
        let rev = self.reverse();
        let inv = BigRational::one() / self.constant_term();
        Ok(rev.scale(&inv))
    }

    /// f = f* (and f(0) != 0).
    pub fn is_symmetric(&self) -> bool {
        match self.star() {
            Ok(s) => s == *self,
            Err(_) => false,
        }
    }

    /// Content: positive rational c with self = c * (primitive integer polynomial).
    pub fn content(&self) -> BigRational {
        use num_integer::Integer;
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for a in &self.c {
            num_gcd = num_gcd.gcd(a.numer());
            den_lcm = den_lcm.lcm(a.denom());
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// self / content: integer coefficients with gcd 1, sign of leading kept.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        self.scale(&(BigRational::one() / c))
    }

    /// Integer coefficients if the polynomial has them.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.c.len());
        for a in &self.c {
            if !a.denom().is_one() {
                return None;
            }
            out.push(a.numer().clone());
        }
        Some(out)
    }

    /// res(f, g) = lc(f)^deg g * prod g(roots of f).
    pub fn resultant(&self, other: &Poly) -> BigRational {
        let mut f = self.clone();
        let mut g = other.clone();
        if f.is_zero() || g.is_zero() {
            return BigRational::zero();
        }
        let mut acc = BigRational::one();
        let mut sign = 1i64;
        loop {
            if g.deg() == 0 {
                let e = f.deg() as u32;
                return acc * pow_rat(&g.leading(), e) * rat(sign);
            }
            if f.deg() == 0 {
                let e = g.deg() as u32;
                return acc * pow_rat(&f.leading(), e) * rat(sign);
            }
            if f.deg() < g.deg() {
                if (f.deg() * g.deg()) % 2 == 1 {
                    sign = -sign;
                }
                std::mem::swap(&mut f, &mut g);
                continue;
            }
            let r = f.rem(&g).unwrap();
            if r.is_zero() {
                return BigRational::zero();
            }
            // res(f, g) = (-1)^(deg f * deg g) lc(g)^(deg f - deg r) res(g, r)
            if (f.deg() * g.deg()) % 2 == 1 {
                sign = -sign;
            }
            acc *= pow_rat(&g.leading(), (f.deg() - r.deg()) as u32);
            f = g;
            g = r;
        }
    }

    pub fn discriminant(&self) -> BigRational {
        let d = self.deg();
        if d == 0 {
            return BigRational::one();
        }
        let r = self.resultant(&self.derivative());
        let s = if (d * (d - 1) / 2) % 2 == 0 { 1 } else { -1 };
        r * rat(s) / self.leading()
    }

    /// Power sums p_k = sum of roots^k (with multiplicity) for monic f, k = 0..=kmax.
    /// Newton's identities; exact over Q.
    pub fn power_sums(&self, kmax: usize) -> Result<Vec<BigRational>, PolyError> {
        if !self.is_monic() {
            return Err(PolyError::NotMonic);
        }
        let d = self.deg();
        // c[i] below is the coefficient of X^(d-i)
        let cof = |i: usize| -> BigRational {
            if i > d {
                BigRational::zero()
            } else {
                self.coeff(d - i)
            }
        };
        let mut p = Vec::with_capacity(kmax + 1);
        p.push(rat(d as i64));
        for k in 1..=kmax {
            let mut s = -cof(k) * rat(k as i64);
            for i in 1..k {
                let term = cof(i) * &p[k - i];
                s -= term;
            }
            p.push(s);
        }
        Ok(p)
    }

    /// For monic symmetric f of even degree 2d, the monic degree-d polynomial g
    /// with f(X) = X^d g(X + 1/X).
    pub fn trace_polynomial(&self) -> Result<Poly, PolyError> {
        if !self.is_monic() {
            return Err(PolyError::NotMonic);
        }
        if !self.is_symmetric() {
            return Err(PolyError::NotSymmetric);
        }
        let n = self.deg();
        if n % 2 != 0 {
            return Err(PolyError::OddDegree);
        }
        let d = n / 2;
        // X^j + X^(-j) = t_j(X + 1/X), t_0 = 2, t_1 = Y, t_{j+1} = Y t_j - t_{j-1}
        let y = Poly::x();
        let mut tj_prev = Poly::constant(rat(2));
        let mut tj = y.clone();
        let mut g = Poly::constant(self.coeff(d));
        for j in 1..=d {
            g = g.add(&tj.scale(&self.coeff(d + j)));
            if j < d {
                let next = y.mul(&tj).sub(&tj_prev);
                tj_prev = tj;
                tj = next;
            }
        }
        Ok(g)
    }
}

fn pow_rat(a: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= a;
    }
    acc
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.c.len()).rev() {
            let a = &self.c[i];
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if a.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            if i >= 1 {
                if show_coeff {
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

/// Arithmetic in Q[X]/(modulus); modulus monic of positive degree.
pub struct QuotientRing {
    pub modulus: Poly,
}

impl QuotientRing {
    pub fn new(modulus: Poly) -> QuotientRing {
        assert!(modulus.is_monic() && modulus.deg() >= 1);
        QuotientRing { modulus }
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.rem(&self.modulus).unwrap()
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&a.mul(b))
    }

    pub fn pow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut base = self.reduce(a);
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: &Poly) -> Result<Poly, PolyError> {
        let a = self.reduce(a);
        let (g, u, _) = a.ext_gcd(&self.modulus);
        if g.is_one() {
            Ok(self.reduce(&u))
        } else {
            Err(PolyError::NotInvertible)
        }
    }

    /// X^{-1} mod f; needs f(0) != 0. Writes f - f(0) = X h, then -h/f(0) works.
    pub fn x_inverse(&self) -> Result<Poly, PolyError> {
        let f0 = self.modulus.constant_term();
        if f0.is_zero() {
            return Err(PolyError::ZeroConstantTerm);
        }
        let d = self.modulus.deg();
        let mut h = Vec::with_capacity(d);
        for i in 1..=d {
            h.push(self.modulus.coeff(i));
        }
        let h = Poly::from_coeffs(h);
        Ok(h.scale(&(-BigRational::one() / f0)))
    }

    /// a(X) -> a(X^{-1}) mod f. For symmetric f this is the bar involution.
    pub fn involute(&self, a: &Poly) -> Result<Poly, PolyError> {
        let xi = self.x_inverse()?;
        // Horner in X^{-1}
        let mut acc = Poly::zero();
        for ai in a.coeffs().iter().rev() {
            acc = self.mul(&acc, &xi).add(&Poly::constant(ai.clone()));
        }
        Ok(self.reduce(&acc))
    }
}

/// Coefficients of the characteristic products: prod f_i^{e_i}.
pub fn product_of_powers(parts: &[(Poly, u32)]) -> Poly {
    let mut acc = Poly::one();
    for (f, e) in parts {
        acc = acc.mul(&f.pow(*e));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_i64(coeffs)
    }

    #[test]
    fn divmod_and_gcd() {
        let f = p(&[-1, 0, 1]); // X^2 - 1
        let g = p(&[1, 1]); // X + 1
        let (q, r) = f.divmod(&g).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&g), g);
        let a = p(&[2, 3, 1]); // (X+1)(X+2)
        let b = p(&[6, 5, 1]); // (X+2)(X+3)
        assert_eq!(a.gcd(&b), p(&[2, 1]));
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = p(&[2, 3, 1]);
        let b = p(&[6, 5, 1]);
        let (g, u, v) = a.ext_gcd(&b);
        assert_eq!(u.mul(&a).add(&v.mul(&b)), g);
        assert_eq!(g, p(&[2, 1]));
    }

    #[test]
    fn star_frozen_value() {
        // star(X - 2) = X - 1/2
        let f = p(&[-2, 1]);
        let s = f.star().unwrap();
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        assert_eq!(s, Poly::from_coeffs(vec![half, BigRational::one()]));
        // star is an involution away from zero constant term
        assert_eq!(s.star().unwrap(), f);
    }

    #[test]
    fn symmetry_detection() {
        assert!(p(&[1, -3, 1]).is_symmetric());
        assert!(p(&[1, 0, 1]).is_symmetric());
        assert!(p(&[1, -1, 1, -1, 1]).is_symmetric());
        assert!(!p(&[-2, 1]).is_symmetric());
        assert!(!p(&[0, 1]).is_symmetric()); // X has zero constant term
        assert!(p(&[1, 1]).is_symmetric());
        assert!(p(&[-1, 1]).is_symmetric());
    }

    #[test]
    fn trace_polynomial_frozen_values() {
        // X^4 - X^3 + X^2 - X + 1 -> Y^2 - Y - 1
        assert_eq!(p(&[1, -1, 1, -1, 1]).trace_polynomial().unwrap(), p(&[-1, -1, 1]));
        // X^2 - 3X + 1 -> Y - 3
        assert_eq!(p(&[1, -3, 1]).trace_polynomial().unwrap(), p(&[-3, 1]));
        // X^2 + 1 -> Y
        assert_eq!(p(&[1, 0, 1]).trace_polynomial().unwrap(), p(&[0, 1]));
        assert_eq!(p(&[1, 1]).trace_polynomial(), Err(PolyError::OddDegree));
    }

    #[test]
    fn trace_polynomial_identity() {
        // f(X) = X^d g(X + 1/X) checked at sample points
        for f in [p(&[1, -3, 1]), p(&[1, -1, 1, -1, 1]), p(&[1, 2, 3, 2, 1])] {
            let g = f.trace_polynomial().unwrap();
            let d = f.deg() / 2;
            for xn in [2i64, 3, 5, -7] {
                let x = BigRational::new(BigInt::from(xn), BigInt::from(1));
                let y = &x + BigRational::one() / &x;
                let lhs = f.eval(&x);
                let rhs = pow_rat(&x, d as u32) * g.eval(&y);
                assert_eq!(lhs, rhs, "f = {}", f);
            }
        }
    }

    #[test]
    fn resultant_and_discriminant() {
        // disc(X^2 - 3X + 1) = 5
        assert_eq!(p(&[1, -3, 1]).discriminant(), rat(5));
        // disc(X^2 + 1) = -4
        assert_eq!(p(&[1, 0, 1]).discriminant(), rat(-4));
        // res(X - a, X - b) = b - a evaluated: res(X-2, X-5) = (X-5) at 2 = -3
        assert_eq!(p(&[-2, 1]).resultant(&p(&[-5, 1])), rat(-3));
        // res(f, g) via roots: f = X^2 - 1, g = X - 3 -> g(1) g(-1) = (-2)(-4) = 8
        assert_eq!(p(&[-1, 0, 1]).resultant(&p(&[-3, 1])), rat(8));
        // shared root -> 0
        assert_eq!(p(&[-1, 0, 1]).resultant(&p(&[-1, 1])), rat(0));
        // disc of cyclotomic Phi_10 is 125
        assert_eq!(p(&[1, -1, 1, -1, 1]).discriminant(), rat(125));
    }

    #[test]
    fn resultant_multiplicative() {
        let f = p(&[1, -3, 1]);
        let g = p(&[1, 0, 1]);
        let h = p(&[2, 1]);
        let fg = f.mul(&g);
        assert_eq!(fg.resultant(&h), f.resultant(&h) * g.resultant(&h));
        // swap symmetry: res(f,g) = (-1)^(deg f deg g) res(g,f)
        assert_eq!(f.resultant(&g), g.resultant(&f));
        assert_eq!(f.resultant(&h), h.resultant(&f));
    }

    #[test]
    fn power_sums_newton() {
        // X^2 - 3X + 1: roots sum 3, p2 = 7, p3 = 18
        let ps = p(&[1, -3, 1]).power_sums(4).unwrap();
        assert_eq!(ps, vec![rat(2), rat(3), rat(7), rat(18), rat(47)]);
        // (X-1)^3: p_k = 3
        let ps = p(&[-1, 3, -3, 1]).power_sums(3).unwrap();
        assert_eq!(ps, vec![rat(3), rat(3), rat(3), rat(3)]);
    }

    #[test]
    fn quotient_ring_ops() {
        let ring = QuotientRing::new(p(&[1, -3, 1]));
        let x = Poly::x();
        // X^2 = 3X - 1 mod f
        assert_eq!(ring.mul(&x, &x), p(&[-1, 3]));
        let xi = ring.x_inverse().unwrap();
        assert_eq!(ring.mul(&x, &xi), Poly::one());
        // for symmetric f, the involution fixes X + 1/X
        let inv = ring.involute(&x).unwrap();
        assert_eq!(inv, xi);
        let y = x.add(&xi);
        assert_eq!(ring.involute(&y).unwrap(), ring.reduce(&y));
        // inverse of a generic element
        let a = p(&[2, 5]);
        let ainv = ring.inverse(&a).unwrap();
        assert_eq!(ring.mul(&a, &ainv), Poly::one());
        // pow
        assert_eq!(ring.pow(&x, 2), p(&[-1, 3]));
        assert_eq!(ring.pow(&x, 0), Poly::one());
    }

    #[test]
    fn content_and_primitive() {
        let f = Poly::from_coeffs(vec![
            BigRational::new(BigInt::from(2), BigInt::from(3)),
            BigRational::new(BigInt::from(4), BigInt::from(3)),
        ]);
        assert_eq!(f.content(), BigRational::new(BigInt::from(2), BigInt::from(3)));
        assert_eq!(f.primitive_part(), p(&[1, 2]));
        assert_eq!(p(&[-2, -4]).primitive_part(), p(&[-1, -2]));
    }

    #[test]
    fn display_readable() {
        assert_eq!(p(&[1, -3, 1]).to_string(), "X^2 - 3*X + 1");
        assert_eq!(p(&[0, 1]).to_string(), "X");
        assert_eq!(p(&[-1]).to_string(), "-1");
        assert_eq!(Poly::zero().to_string(), "0");
    }

    proptest::proptest! {
        #[test]
        fn divmod_reconstructs(fa in proptest::collection::vec(-9i64..10, 0..7),
                               ga in proptest::collection::vec(-9i64..10, 1..5)) {
            let f = Poly::from_i64(&fa);
            let g = Poly::from_i64(&ga);
            proptest::prop_assume!(!g.is_zero());
            let (q, r) = f.divmod(&g).unwrap();
            proptest::prop_assert_eq!(q.mul(&g).add(&r), f);
            if !r.is_zero() {
                proptest::prop_assert!(r.deg() < g.deg());
            }
        }

        #[test]
        fn gcd_divides_both(fa in proptest::collection::vec(-5i64..6, 1..6),
                            ga in proptest::collection::vec(-5i64..6, 1..6)) {
            let f = Poly::from_i64(&fa);
            let g = Poly::from_i64(&ga);
            proptest::prop_assume!(!f.is_zero() && !g.is_zero());
            let d = f.gcd(&g);
            proptest::prop_assert!(f.rem(&d).unwrap().is_zero());
            proptest::prop_assert!(g.rem(&d).unwrap().is_zero());
        }
    }
}
