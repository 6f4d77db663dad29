//! Quadratic spaces over Q with exact rational arithmetic: Gram matrices,
//! congruence diagonalization, and the complete set of local invariants
//! (determinant class, signature, Hasse symbols) together with isotropy
//! and Witt index computations at every completion.
//!
//! Equivalence and representation tests reduce to finitely many places:
//! the real place, 2, and the odd primes dividing the diagonal entries.
//! At any other prime the form is a unit form with trivial Hasse symbol,
//! and such a form can never have a smaller Witt index than one of the
//! listed places, so minima over the listed places are global minima.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{hilbert, is_local_square, odd_support, valuation, ArithError, Place, SquareClass};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QSpaceError {
    NotSquare,
    NotSymmetric,
    Degenerate,
    DimensionMismatch,
    Arith(ArithError),
}

impl std::fmt::Display for QSpaceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QSpaceError::NotSquare => write!(f, "matrix is not square"),
            QSpaceError::NotSymmetric => write!(f, "matrix is not symmetric"),
            QSpaceError::Degenerate => write!(f, "form is degenerate"),
            QSpaceError::DimensionMismatch => write!(f, "dimension mismatch"),
            QSpaceError::Arith(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for QSpaceError {}

impl From<ArithError> for QSpaceError {
    fn from(e: ArithError) -> Self {
        QSpaceError::Arith(e)
    }
}

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: Vec<Vec<BigRational>>,
}

impl Mat {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Mat, QSpaceError> {
        let w = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != w) {
            return Err(QSpaceError::DimensionMismatch);
        }
        Ok(Mat { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Mat {
        Mat {
            rows: rows
                .iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
                .collect(),
        }
    }

    pub fn zeros(r: usize, c: usize) -> Mat {
        Mat { rows: vec![vec![BigRational::zero(); c]; r] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = BigRational::one();
        }
        m
    }

    pub fn diagonal(d: &[BigRational]) -> Mat {
        let mut m = Mat::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.rows[i][i] = x.clone();
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn is_square(&self) -> bool {
        self.n_rows() == self.n_cols()
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.n_rows();
        (0..n).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn transpose(&self) -> Mat {
        let (r, c) = (self.n_rows(), self.n_cols());
        let mut t = Mat::zeros(c, r);
        for i in 0..r {
            for j in 0..c {
                t.rows[j][i] = self.rows[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.n_cols(), o.n_rows(), "matrix product shape");
        let (r, mid, c) = (self.n_rows(), self.n_cols(), o.n_cols());
        let mut out = Mat::zeros(r, c);
        for i in 0..r {
            for k in 0..mid {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..c {
                    let add = a * &o.rows[k][j];
                    out.rows[i][j] += add;
                }
            }
        }
        out
    }

    pub fn scale(&self, a: &BigRational) -> Mat {
        Mat { rows: self.rows.iter().map(|r| r.iter().map(|x| x * a).collect()).collect() }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!(self.n_rows(), o.n_rows());
        assert_eq!(self.n_cols(), o.n_cols());
        let mut out = self.clone();
        for i in 0..self.n_rows() {
            for j in 0..self.n_cols() {
                out.rows[i][j] += &o.rows[i][j];
            }
        }
        out
    }

    /// Exact determinant by fraction-free style Gaussian elimination.
    pub fn det(&self) -> BigRational {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.n_rows();
        let mut a = self.rows.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let pivot = (k..n).find(|&i| !a[i][k].is_zero());
            let Some(pi) = pivot else {
                return BigRational::zero();
            };
            if pi != k {
                a.swap(pi, k);
                det = -det;
            }
            det *= &a[k][k];
            let inv = BigRational::one() / &a[k][k];
            for i in (k + 1)..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] * &inv;
                for j in k..n {
                    let sub = &f * &a[k][j];
                    a[i][j] -= sub;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan; None when singular.
    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.n_rows();
        let mut a = self.rows.clone();
        let mut b = Mat::identity(n).rows;
        for k in 0..n {
            let pi = (k..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(pi, k);
            b.swap(pi, k);
            let inv = BigRational::one() / &a[k][k];
            for j in 0..n {
                a[k][j] *= &inv;
                b[k][j] *= &inv;
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    let s1 = &f * &a[k][j];
                    a[i][j] -= s1;
                    let s2 = &f * &b[k][j];
                    b[i][j] -= s2;
                }
            }
        }
        Some(Mat { rows: b })
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, o: &Mat) -> Mat {
        let (r1, c1) = (self.n_rows(), self.n_cols());
        let mut out = Mat::zeros(r1 + o.n_rows(), c1 + o.n_cols());
        for i in 0..r1 {
            for j in 0..c1 {
                out.rows[i][j] = self.rows[i][j].clone();
            }
        }
        for i in 0..o.n_rows() {
            for j in 0..o.n_cols() {
                out.rows[r1 + i][c1 + j] = o.rows[i][j].clone();
            }
        }
        out
    }
}

/// Nondegenerate quadratic space over Q given by a symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: Mat,
}

impl QuadraticSpace {
    pub fn new(gram: Mat) -> Result<QuadraticSpace, QSpaceError> {
        if !gram.is_square() {
            return Err(QSpaceError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(QSpaceError::NotSymmetric);
        }
        if gram.n_rows() > 0 && gram.det().is_zero() {
            return Err(QSpaceError::Degenerate);
        }
        Ok(QuadraticSpace { gram })
    }

    pub fn from_diagonal(d: &[BigRational]) -> Result<QuadraticSpace, QSpaceError> {
        QuadraticSpace::new(Mat::diagonal(d))
    }

    pub fn from_diagonal_i64(d: &[i64]) -> Result<QuadraticSpace, QSpaceError> {
        let v: Vec<BigRational> =
            d.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        QuadraticSpace::from_diagonal(&v)
    }

    /// Orthogonal sum of m hyperbolic planes.
    pub fn hyperbolic(m: usize) -> QuadraticSpace {
        let mut g = Mat::zeros(2 * m, 2 * m);
        for i in 0..m {
            g.set(2 * i, 2 * i + 1, BigRational::one());
            g.set(2 * i + 1, 2 * i, BigRational::one());
        }
        QuadraticSpace { gram: g }
    }

    pub fn dim(&self) -> usize {
        self.gram.n_rows()
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn det(&self) -> BigRational {
        self.gram.det()
    }

    pub fn direct_sum(&self, o: &QuadraticSpace) -> QuadraticSpace {
        QuadraticSpace { gram: self.gram.direct_sum(&o.gram) }
    }

    /// Congruence diagonalization: returns (d, c) with c^T gram c diagonal
    /// with entries d. The columns of c are the new basis vectors.
    pub fn diagonalization(&self) -> (Vec<BigRational>, Mat) {
        let n = self.dim();
        let mut g = self.gram.rows().to_vec();
        let mut c = Mat::identity(n);
        for k in 0..n {
            if g[k][k].is_zero() {
                // bring a nonzero length onto the pivot: prefer a later
                // diagonal entry, else add a vector pairing with e_k
                if let Some(i) = ((k + 1)..n).find(|&i| !g[i][i].is_zero()) {
                    g.swap(i, k);
                    for row in g.iter_mut() {
                        row.swap(i, k);
                    }
                    for row in c.rows.iter_mut() {
                        row.swap(i, k);
                    }
                } else {
                    let j = ((k + 1)..n)
                        .find(|&j| !g[k][j].is_zero())
                        .expect("nondegenerate block has a nonzero pairing");
                    // e_k += e_j doubles the pairing onto the diagonal
                    for idx in 0..n {
                        let add = g[j][idx].clone();
                        g[k][idx] += add;
                    }
                    for row in g.iter_mut() {
                        let add = row[j].clone();
                        row[k] += add;
                    }
                    for row in c.rows.iter_mut() {
                        let add = row[j].clone();
                        row[k] += add;
                    }
                }
            }
            let pivot = g[k][k].clone();
            for i in (k + 1)..n {
                if g[i][k].is_zero() {
                    continue;
                }
                let f = &g[i][k] / &pivot;
                for idx in 0..n {
                    let sub = &f * &g[k][idx];
                    g[i][idx] -= sub;
                }
                for row in g.iter_mut().take(n) {
                    let sub = &f * &row[k];
                    row[i] -= sub;
                }
                for row in c.rows.iter_mut() {
                    let sub = &f * &row[k];
                    row[i] -= sub;
                }
            }
        }
        let d: Vec<BigRational> = (0..n).map(|i| g[i][i].clone()).collect();
        debug_assert!(d.iter().all(|x| !x.is_zero()));
        (d, c)
    }

    pub fn diagonal_form(&self) -> DiagonalForm {
        DiagonalForm { entries: self.diagonalization().0 }
    }

    /// The places where any invariant of the space can be nontrivial: the
    /// real place, 2, the odd primes dividing an entry denominator, and the
    /// odd primes of det(gram). At any other prime the gram matrix is
    /// unimodular over Z_p, so the local form has unit determinant and
    /// Hasse symbol +1. Only input-sized data gets factored here; the
    /// entries of a diagonalization are minor ratios whose sizes have
    /// nothing to do with the input and must never reach a factorization.
    pub fn support(&self) -> Vec<Place> {
        use num_integer::Integer;
        let mut scale = BigInt::one();
        for row in self.gram.rows() {
            for x in row {
                scale = scale.lcm(x.denom());
            }
        }
        let mut primes = odd_support(&self.det());
        for p in odd_support(&BigRational::from_integer(scale)) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
        primes.sort_unstable();
        let mut places = vec![Place::Real, Place::Prime(2)];
        places.extend(primes.into_iter().map(Place::Prime));
        places.sort();
        places
    }

    /// Classifying invariants, with the support bounded by gram-level data.
    /// A diagonalization is used only inside Hilbert symbols at the places
    /// from `support`, which needs valuations and residues of the entries
    /// but never their factorizations.
    pub fn invariants(&self) -> FormInvariants {
        let form = self.diagonal_form();
        let places = self.support();
        let det = reduced_det(&self.det(), &places);
        let hasse_minus = places
            .into_iter()
            .filter(|v| !matches!(v, Place::Real) && form.hasse(*v) == -1)
            .collect();
        FormInvariants { dim: self.dim(), det, sig: form.signature(), hasse_minus }
    }

    /// Spaces are isometric over Q iff dimension, determinant class,
    /// signature, and all Hasse symbols agree, i.e. iff the classifying
    /// invariants are equal.
    pub fn equivalent_to(&self, o: &QuadraticSpace) -> bool {
        self.invariants() == o.invariants()
    }
}

/// Squarefree representative of `exact` read off its valuations at the
/// finite places in `places`. Correct whenever the valuation of `exact`
/// vanishes away from those places, which every support computation here
/// guarantees.
fn reduced_det(exact: &BigRational, places: &[Place]) -> BigRational {
    let mut sf = BigInt::one();
    for v in places {
        if let Place::Prime(p) = v {
            if valuation(exact, *p).expect("nonzero det") % 2 != 0 {
                sf *= BigInt::from(*p);
            }
        }
    }
    if exact.is_negative() {
        sf = -sf;
    }
    BigRational::from_integer(sf)
}

/// Diagonalized nondegenerate form; all entries nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    pub entries: Vec<BigRational>,
}

impl DiagonalForm {
    pub fn from_i64(d: &[i64]) -> DiagonalForm {
        assert!(d.iter().all(|&x| x != 0), "diagonal entries must be nonzero");
        DiagonalForm {
            entries: d.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> BigRational {
        self.entries.iter().product()
    }

    pub fn det_class(&self) -> SquareClass {
        SquareClass::of(&self.det())
    }

    /// (positive, negative) entry counts.
    pub fn signature(&self) -> (usize, usize) {
        let pos = self.entries.iter().filter(|x| x.is_positive()).count();
        (pos, self.dim() - pos)
    }

    /// Product of hilbert symbols over pairs i < j.
    pub fn hasse(&self, v: Place) -> i32 {
        let mut e = 1;
        for i in 0..self.entries.len() {
            for j in (i + 1)..self.entries.len() {
                e *= hilbert(&self.entries[i], &self.entries[j], v)
                    .expect("nonzero entries at a valid place");
            }
        }
        e
    }

    pub fn direct_sum(&self, o: &DiagonalForm) -> DiagonalForm {
        let mut entries = self.entries.clone();
        entries.extend(o.entries.iter().cloned());
        DiagonalForm { entries }
    }

    /// The places where any invariant can be nontrivial: the real place, 2,
    /// and the odd primes dividing some entry.
    pub fn support(&self) -> Vec<Place> {
        let mut places = vec![Place::Real, Place::Prime(2)];
        let mut primes: Vec<u64> = Vec::new();
        for a in &self.entries {
            for p in odd_support(a) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort_unstable();
        places.extend(primes.into_iter().map(Place::Prime));
        places.sort();
        places
    }

    /// Dimension of the anisotropic kernel over the completion at v.
    pub fn anisotropic_dim_at(&self, v: Place) -> usize {
        if let Place::Real = v {
            let (r, s) = self.signature();
            return r.abs_diff(s);
        }
        let mut n = self.dim();
        let mut d = self.det();
        let mut eps = self.hasse(v);
        while n > 0 && local_isotropic(n, &d, eps, v) {
            // split one hyperbolic plane off
            n -= 2;
            d = -d;
            eps *= hilbert(&big_neg_one(), &d, v).expect("nonzero det");
        }
        n
    }

    pub fn witt_index_at(&self, v: Place) -> usize {
        (self.dim() - self.anisotropic_dim_at(v)) / 2
    }

    /// Witt index over Q; the minimum of the local indices, attained on the
    /// support places.
    pub fn global_witt_index(&self) -> usize {
        self.support().into_iter().map(|v| self.witt_index_at(v)).min().unwrap_or(0)
    }

    pub fn is_isotropic_at(&self, v: Place) -> bool {
        self.witt_index_at(v) > 0
    }

    pub fn is_isotropic(&self) -> bool {
        self.global_witt_index() > 0
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.dim() % 2 == 0 && self.global_witt_index() == self.dim() / 2
    }

    pub fn is_hyperbolic_at(&self, v: Place) -> bool {
        self.dim() % 2 == 0 && self.witt_index_at(v) == self.dim() / 2
    }

    /// Forms over Q are equivalent iff dimension, determinant class,
    /// signature, and all Hasse symbols agree.
    pub fn equivalent(&self, o: &DiagonalForm) -> bool {
        if self.dim() != o.dim() {
            return false;
        }
        if self.det_class() != o.det_class() {
            return false;
        }
        if self.signature() != o.signature() {
            return false;
        }
        let mut places = self.support();
        for v in o.support() {
            if !places.contains(&v) {
                places.push(v);
            }
        }
        places.into_iter().all(|v| self.hasse(v) == o.hasse(v))
    }

    /// Does the form take the value d on some nonzero vector over Q?
    pub fn represents(&self, d: &BigRational) -> bool {
        assert!(!d.is_zero(), "representation of zero is the isotropy question");
        if self.dim() == 0 {
            return false;
        }
        let mut entries = self.entries.clone();
        entries.push(-d.clone());
        DiagonalForm { entries }.is_isotropic()
    }

    pub fn invariants(&self) -> FormInvariants {
        let places = self.support();
        let det = reduced_det(&self.det(), &places);
        let hasse_minus = places
            .into_iter()
            .filter(|v| !matches!(v, Place::Real) && self.hasse(*v) == -1)
            .collect();
        FormInvariants {
            dim: self.dim(),
            det,
            sig: self.signature(),
            hasse_minus,
        }
    }
}

/// A rational form given purely by its classifying invariants: dimension,
/// the squarefree determinant representative, signature, and the finite
/// places with Hasse symbol -1. Forms over Q are determined by these data,
/// so splitting off hyperbolic planes or diagonal entries can be done here
/// without touching a basis, and equality of the structs is equivalence
/// of the forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormInvariants {
    dim: usize,
    det: BigRational,
    sig: (usize, usize),
    hasse_minus: Vec<Place>,
}

impl FormInvariants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn det(&self) -> &BigRational {
        &self.det
    }

    pub fn signature(&self) -> (usize, usize) {
        self.sig
    }

    pub fn hasse(&self, v: Place) -> i32 {
        match v {
            // product over pairs of negative entries
            Place::Real => {
                if (self.sig.1 * self.sig.1.saturating_sub(1) / 2) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            _ => {
                if self.hasse_minus.contains(&v) {
                    -1
                } else {
                    1
                }
            }
        }
    }

    /// Finite places where any invariant can be nontrivial. Away from these
    /// the determinant is a unit, the Hasse symbol is +1, and the place is
    /// odd, so the local form is as isotropic as dimension allows.
    pub fn finite_support(&self) -> Vec<Place> {
        let mut places = vec![Place::Prime(2)];
        for p in odd_support(&self.det) {
            places.push(Place::Prime(p));
        }
        for v in &self.hasse_minus {
            if !places.contains(v) {
                places.push(*v);
            }
        }
        places.sort();
        places
    }

    pub fn anisotropic_dim_at(&self, v: Place) -> usize {
        if let Place::Real = v {
            return self.sig.0.abs_diff(self.sig.1);
        }
        let mut n = self.dim;
        let mut d = self.det.clone();
        let mut eps = self.hasse(v);
        while n > 0 && local_isotropic(n, &d, eps, v) {
            n -= 2;
            d = -d;
            eps *= hilbert(&big_neg_one(), &d, v).expect("nonzero det");
        }
        n
    }

    pub fn witt_index_at(&self, v: Place) -> usize {
        (self.dim - self.anisotropic_dim_at(v)) / 2
    }

    pub fn global_witt_index(&self) -> usize {
        let mut places = self.finite_support();
        places.push(Place::Real);
        places.into_iter().map(|v| self.witt_index_at(v)).min().unwrap_or(0)
    }

    pub fn is_hyperbolic_at(&self, v: Place) -> bool {
        self.dim % 2 == 0 && self.witt_index_at(v) == self.dim / 2
    }

    /// Invariants of the orthogonal complement of k hyperbolic planes.
    /// Requires Witt index >= k at every place; the caller checks this.
    pub fn cancel_hyperbolic(&self, k: usize) -> FormInvariants {
        assert!(self.dim >= 2 * k && self.sig.0 >= k && self.sig.1 >= k);
        let sign = if k % 2 == 0 { BigRational::one() } else { big_neg_one() };
        let det = &self.det * &sign;
        let h = DiagonalForm::from_i64(&vec![1, -1].repeat(k));
        // w(q) = w(q') w(H^k) (det q', det H^k) and symbols are self-inverse
        let mut minus: Vec<Place> = Vec::new();
        let mut candidates = self.finite_support();
        for p in odd_support(&det) {
            let v = Place::Prime(p);
            if !candidates.contains(&v) {
                candidates.push(v);
            }
        }
        for v in candidates {
            let w = self.hasse(v)
                * h.hasse(v)
                * hilbert(&det, &sign, v).expect("nonzero det");
            if w == -1 {
                minus.push(v);
            }
        }
        minus.sort();
        FormInvariants {
            dim: self.dim - 2 * k,
            det,
            sig: (self.sig.0 - k, self.sig.1 - k),
            hasse_minus: minus,
        }
    }

    /// Invariants of q with one diagonal entry c adjoined.
    pub fn add_entry(&self, c: &BigRational) -> FormInvariants {
        assert!(!c.is_zero());
        let mut minus: Vec<Place> = Vec::new();
        let mut candidates = self.finite_support();
        for p in odd_support(c) {
            let v = Place::Prime(p);
            if !candidates.contains(&v) {
                candidates.push(v);
            }
        }
        // w(q + <c>) = w(q) (det q, c)
        for v in &candidates {
            let w = self.hasse(*v) * hilbert(&self.det, c, *v).expect("nonzero entries");
            if w == -1 {
                minus.push(*v);
            }
        }
        minus.sort();
        let sig = if c.is_positive() {
            (self.sig.0 + 1, self.sig.1)
        } else {
            (self.sig.0, self.sig.1 + 1)
        };
        let det = reduced_det(&(&self.det * c), &candidates);
        FormInvariants { dim: self.dim + 1, det, sig, hasse_minus: minus }
    }

    /// Invariants of the orthogonal complement of one diagonal entry c.
    /// Requires that q represents c; the caller checks this.
    pub fn remove_entry(&self, c: &BigRational) -> FormInvariants {
        assert!(!c.is_zero() && self.dim >= 1);
        let det = &self.det / c;
        let mut minus: Vec<Place> = Vec::new();
        let mut candidates = self.finite_support();
        for p in odd_support(c) {
            let v = Place::Prime(p);
            if !candidates.contains(&v) {
                candidates.push(v);
            }
        }
        // w(q) = w(q'') (det q'', c)
        for v in &candidates {
            let w = self.hasse(*v) * hilbert(&det, c, *v).expect("nonzero entries");
            if w == -1 {
                minus.push(*v);
            }
        }
        let det = reduced_det(&det, &candidates);
        minus.sort();
        let sig = if c.is_positive() {
            (self.sig.0 - 1, self.sig.1)
        } else {
            (self.sig.0, self.sig.1 - 1)
        };
        FormInvariants { dim: self.dim - 1, det, sig, hasse_minus: minus }
    }

    /// Does the form take the value c on some nonzero vector over Q?
    pub fn represents(&self, c: &BigRational) -> bool {
        assert!(!c.is_zero());
        if self.dim == 0 {
            return false;
        }
        let sum = self.add_entry(&-c);
        let mut places = sum.finite_support();
        places.push(Place::Real);
        places.into_iter().all(|v| sum.witt_index_at(v) >= 1)
    }
}

fn big_neg_one() -> BigRational {
    -BigRational::one()
}

// Isotropy of a form over Q_v with the given dimension, determinant and
// Hasse symbol. The real place is handled by signatures upstream.
fn local_isotropic(n: usize, d: &BigRational, eps: i32, v: Place) -> bool {
    debug_assert!(!matches!(v, Place::Real));
    let neg = big_neg_one();
    match n {
        0 | 1 => false,
        2 => {
            // isotropic iff the form is a hyperbolic plane: -d a square
            is_local_square(&(&neg * d), v).expect("nonzero det")
        }
        3 => eps == hilbert(&neg, &(&neg * d), v).expect("nonzero det"),
        4 => {
            !(is_local_square(d, v).expect("nonzero det")
                && eps == -hilbert(&neg, &neg, v).expect("units"))
        }
        _ => true,
    }
}
