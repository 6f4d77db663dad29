//! Exact real-root counting (Sturm sequences) and counting polynomial roots
//! on versus off the complex unit circle.
//!
//! Circle counting works through the substitution Y = X + 1/X: a conjugate
//! pair e^{±it} of roots corresponds to a real root Y in (-2, 2) of the trace
//! polynomial, while a reciprocal pair (a, 1/a) off the circle corresponds to
//! a real root outside [-2, 2] or a non-real root. Roots at ±1 are stripped
//! first, so the trace polynomial never vanishes at Y = ±2.

use super::factor::squarefree_decomposition;
use super::Poly;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Sturm chain of f (with primitive-part normalization to tame coefficients;
/// positive scaling keeps all signs).
fn sturm_chain(f: &Poly) -> Vec<Poly> {
    let mut seq = Vec::new();
    let f0 = f.primitive_part();
    let f1 = f.derivative().primitive_part();
    seq.push(f0);
    if f1.is_zero() {
        return seq;
    }
    seq.push(f1);
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]).unwrap();
        if r.is_zero() {
            break;
        }
        seq.push(r.neg().primitive_part());
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut changes = 0usize;
    for f in seq {
        let v = f.eval(x);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots of f in the open interval (a, b).
/// Requires f(a) != 0 and f(b) != 0.
pub fn count_distinct_roots_in(f: &Poly, a: &BigRational, b: &BigRational) -> usize {
    assert!(a < b);
    assert!(!f.is_zero());
    let sf = f.div_exact(&f.gcd(&f.derivative())).unwrap();
    assert!(!sf.eval(a).is_zero() && !sf.eval(b).is_zero(), "roots at interval endpoints");
    let chain = sturm_chain(&sf);
    sign_changes(&chain, a) - sign_changes(&chain, b)
}

/// Roots of f on and off the complex unit circle, counted with multiplicity.
/// Zero roots count as off.
pub fn unit_circle_counts(f: &Poly) -> (usize, usize) {
    assert!(!f.is_zero());
    let mut rest = f.make_monic();
    let mut on = 0usize;
    let mut off = 0usize;
    // strip zero roots
    while rest.deg() >= 1 && rest.constant_term().is_zero() {
        rest = rest.div_exact(&Poly::x()).unwrap();
        off += 1;
    }
    // strip roots at 1 and -1 (they lie on the circle)
    for root in [1i64, -1] {
        let lin = Poly::from_i64(&[-root, 1]);
        while rest.deg() >= 1 && rest.eval_i64(root).is_zero() {
            rest = rest.div_exact(&lin).unwrap();
            on += 1;
        }
    }
    if rest.deg() == 0 {
        return (on, off);
    }
    for (w, e) in squarefree_decomposition(&rest) {
        let e = e as usize;
        let h = w.gcd(&w.star().expect("zero roots were stripped"));
        let on_w = if h.deg() == 0 {
            0
        } else {
            // h: symmetric squarefree, no roots at 0 or ±1, so even degree and
            // a squarefree trace polynomial that is nonzero at ±2
            let g = h.trace_polynomial().expect("reciprocal core is symmetric");
            let two = BigRational::from_integer(2.into());
            2 * count_distinct_roots_in(&g, &(-two.clone()), &two)
        };
        on += e * on_w;
        off += e * (w.deg() - on_w);
    }
    debug_assert_eq!(on + off, f.deg());
    (on, off)
}
