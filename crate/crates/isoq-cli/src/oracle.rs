//! Brute-force cross-check of the finite-field decision.
//!
//! For a field F_q and a dimension d the oracle enumerates every symmetric
//! nondegenerate d x d matrix (bucketed by determinant class), every
//! isometry t of a diagonal representative of each class, and every valid
//! self-dual module of dimension d. Each isometry's module is read off its
//! invariant factors, and the realized set is compared in both directions
//! against decide_finite_field. A clean run reports no mismatches.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use isoq_core::locdec::{decide_finite_field, Answer, FfModuleSpec};
use isoq_core::poly::modp::FpPoly;

/// Canonical module fingerprint: (coefficients, exponent, multiplicity)
/// triples, sorted. Both the enumeration side and the validation side are
/// funneled through the same canonicalization so the sets compare exactly.
type ModKey = Vec<(Vec<u64>, u32, u32)>;

#[derive(Debug, Serialize)]
pub struct FfComponentDto {
    /// Coefficients in F_q, constant term first.
    pub poly: Vec<u64>,
    pub e: u32,
    pub n: u32,
}

#[derive(Debug, Serialize)]
pub struct ClassReport {
    pub det_class: String,
    /// Diagonal of the form the isometries were enumerated on.
    pub representative: Vec<u64>,
    /// Symmetric nondegenerate matrices in the class.
    pub forms: u64,
    /// Size of the isometry group of the representative.
    pub isometries: u64,
    /// Distinct modules realized by those isometries.
    pub modules: usize,
}

#[derive(Debug, Serialize)]
pub struct PairReport {
    pub det_class: String,
    pub module: Vec<FfComponentDto>,
    /// Some isometry of the representative carries this module.
    pub enumerated: bool,
    pub decided: String,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub q: u64,
    pub dim: usize,
    pub form_classes: Vec<ClassReport>,
    pub checked: usize,
    pub pairs: Vec<PairReport>,
    pub mismatches: Vec<PairReport>,
}

pub fn run(q: u64, dim: usize) -> Result<OracleReport, String> {
    if q % 2 == 0 {
        return Err(format!("field size {} is even; the oracle needs an odd prime", q));
    }
    if !matches!(q, 3 | 5 | 7) {
        return Err(format!("unsupported field size {}; use 3, 5, or 7", q));
    }
    if dim == 0 || dim > 4 {
        return Err(format!("dimension {} out of range", dim));
    }

    let ns = nonresidue(q);
    let mut rep_nonsquare = vec![1u64; dim];
    rep_nonsquare[dim - 1] = ns;
    let reps: [(&str, Vec<u64>); 2] =
        [("square", vec![1u64; dim]), ("nonsquare", rep_nonsquare)];

    let valid = valid_specs(q, dim)?;
    let direct_counts = if dim <= 3 { Some(symmetric_counts(q, dim)) } else { None };
    let gl = gl_order(q, dim);

    let mut form_classes = Vec::new();
    let mut pairs = Vec::new();
    let mut mismatches = Vec::new();

    for (idx, (name, rep)) in reps.iter().enumerate() {
        let mut realized: BTreeSet<ModKey> = BTreeSet::new();
        let mut iso_count: u64 = 0;
        for_each_isometry(rep, q, &mut |t| {
            iso_count += 1;
            realized.insert(module_key_of(t, q));
        });

        // orbit-stabilizer: congruence classes partition GL by the
        // isometry group of any member
        if gl % iso_count as u128 != 0 {
            return Err(format!(
                "isometry count {} does not divide |GL_{}(F_{})|",
                iso_count, dim, q
            ));
        }
        let forms = (gl / iso_count as u128) as u64;
        if let Some(counts) = direct_counts {
            let direct = if idx == 0 { counts.0 } else { counts.1 };
            if direct != forms {
                return Err(format!(
                    "class {}: direct count {} disagrees with orbit count {}",
                    name, direct, forms
                ));
            }
        }

        for (key, spec) in &valid {
            let verdict = decide_finite_field(rep, spec)
                .map_err(|e| format!("decision failed on an enumerated module: {}", e))?;
            let enumerated = realized.contains(key);
            let row = PairReport {
                det_class: name.to_string(),
                module: key_dto(key),
                enumerated,
                decided: verdict.answer.to_string(),
            };
            if enumerated != (verdict.answer == Answer::Yes) {
                mismatches.push(PairReport {
                    det_class: row.det_class.clone(),
                    module: key_dto(key),
                    enumerated,
                    decided: row.decided.clone(),
                });
            }
            pairs.push(row);
        }
        // every realized module must also pass validation
        for key in &realized {
            if !valid.contains_key(key) {
                mismatches.push(PairReport {
                    det_class: name.to_string(),
                    module: key_dto(key),
                    enumerated: true,
                    decided: "REJECTED".to_string(),
                });
            }
        }

        form_classes.push(ClassReport {
            det_class: name.to_string(),
            representative: rep.clone(),
            forms,
            isometries: iso_count,
            modules: realized.len(),
        });
    }

    let checked = pairs.len();
    Ok(OracleReport { q, dim, form_classes, checked, pairs, mismatches })
}

fn key_dto(key: &ModKey) -> Vec<FfComponentDto> {
    key.iter()
        .map(|(c, e, n)| FfComponentDto { poly: c.clone(), e: *e, n: *n })
        .collect()
}

fn mulq(a: u64, b: u64, q: u64) -> u64 {
    a * b % q
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

fn legendre(a: u64, q: u64) -> i32 {
    debug_assert!(a % q != 0);
    if powq(a, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

fn nonresidue(q: u64) -> u64 {
    (2..q).find(|&a| legendre(a, q) == -1).expect("odd field has a nonresidue")
}

fn gl_order(q: u64, d: usize) -> u128 {
    let qd = (q as u128).pow(d as u32);
    (0..d).map(|i| qd - (q as u128).pow(i as u32)).product()
}

/// Signed permutations of 0..d, for determinants by direct expansion.
fn permutations_with_sign(d: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..d).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, bool)>) {
        let d = perm.len();
        if k == d {
            let mut inv = 0usize;
            for i in 0..d {
                for j in i + 1..d {
                    if perm[i] > perm[j] {
                        inv += 1;
                    }
                }
            }
            out.push((perm.clone(), inv % 2 == 1));
            return;
        }
        for i in k..d {
            perm.swap(k, i);
            rec(k + 1, perm, out);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, &mut out);
    out
}

fn det_mod(m: &[Vec<u64>], q: u64, perms: &[(Vec<usize>, bool)]) -> u64 {
    let mut pos = 0u64;
    let mut neg = 0u64;
    for (perm, odd) in perms {
        let mut term = 1u64;
        for (i, &j) in perm.iter().enumerate() {
            term *= m[i][j] % q;
            term %= q;
        }
        if *odd {
            neg += term;
        } else {
            pos += term;
        }
    }
    (pos % q + q - neg % q) % q
}

/// Counts of nondegenerate symmetric matrices per determinant class, by
/// walking all of them. Only used for small dimensions, as a cross-check
/// of the orbit-stabilizer counts.
fn symmetric_counts(q: u64, d: usize) -> (u64, u64) {
    let perms = permutations_with_sign(d);
    let slots: Vec<(usize, usize)> =
        (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
    let mut vals = vec![0u64; slots.len()];
    let mut m = vec![vec![0u64; d]; d];
    let mut square = 0u64;
    let mut nonsquare = 0u64;
    loop {
        for (s, &(i, j)) in slots.iter().enumerate() {
            m[i][j] = vals[s];
            m[j][i] = vals[s];
        }
        let det = det_mod(&m, q, &perms);
        if det != 0 {
            if legendre(det, q) == 1 {
                square += 1;
            } else {
                nonsquare += 1;
            }
        }
        let mut s = 0;
        loop {
            if s == vals.len() {
                return (square, nonsquare);
            }
            vals[s] += 1;
            if vals[s] < q {
                break;
            }
            vals[s] = 0;
            s += 1;
        }
    }
}

/// Visits every t with t^T G t = G, G = diag(diag), by extending isometric
/// column tuples. Columns with matching inner products are automatically
/// independent, so no invertibility check is needed.
fn for_each_isometry<F: FnMut(&[Vec<u64>])>(diag: &[u64], q: u64, visit: &mut F) {
    let d = diag.len();
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(d);
    let mut t = vec![vec![0u64; d]; d];
    extend_columns(diag, q, &mut cols, &mut t, visit);
}

fn extend_columns<F: FnMut(&[Vec<u64>])>(
    diag: &[u64],
    q: u64,
    cols: &mut Vec<Vec<u64>>,
    t: &mut Vec<Vec<u64>>,
    visit: &mut F,
) {
    let d = diag.len();
    let k = cols.len();
    if k == d {
        for (j, c) in cols.iter().enumerate() {
            for i in 0..d {
                t[i][j] = c[i];
            }
        }
        visit(t);
        return;
    }
    let mut v = vec![0u64; d];
    loop {
        let norm = (0..d).map(|i| diag[i] * v[i] % q * v[i] % q).sum::<u64>() % q;
        if norm == diag[k] % q
            && cols.iter().all(|c| {
                (0..d).map(|i| diag[i] * v[i] % q * c[i] % q).sum::<u64>() % q == 0
            })
        {
            cols.push(v.clone());
            extend_columns(diag, q, cols, t, visit);
            cols.pop();
        }
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            v[i] += 1;
            if v[i] < q {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Invariant factors of XI - t over F_q[X], smallest degree first.
fn invariant_factors_fp(t: &[Vec<u64>], q: u64) -> Vec<FpPoly> {
    let n = t.len();
    let mut a = vec![vec![FpPoly::zero(q); n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = FpPoly::constant(q, (q - t[i][j] % q) % q);
            a[i][j] = if i == j { FpPoly::x(q).add(&c) } else { c };
        }
    }

    for k in 0..n {
        'reduce: loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if !a[i][j].is_zero()
                        && pivot.map_or(true, |(pi, pj)| a[i][j].deg() < a[pi][pj].deg())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }

            let mut dirty = false;
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let (quot, r) = a[i][k].divmod(&a[k][k]);
                for j in k..n {
                    let v = a[i][j].sub(&quot.mul(&a[k][j]));
                    a[i][j] = v;
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            for j in k + 1..n {
                if a[k][j].is_zero() {
                    continue;
                }
                let (quot, r) = a[k][j].divmod(&a[k][k]);
                for i in k..n {
                    let v = a[i][j].sub(&quot.mul(&a[i][k]));
                    a[i][j] = v;
                }
                if !r.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the rest of the submatrix
            for i in k + 1..n {
                for j in k + 1..n {
                    if !a[i][j].rem(&a[k][k]).is_zero() {
                        for jj in k..n {
                            let v = a[k][jj].add(&a[i][jj]);
                            a[k][jj] = v;
                        }
                        continue 'reduce;
                    }
                }
            }
            break;
        }
    }

    let out: Vec<FpPoly> = (0..n)
        .map(|k| {
            debug_assert!(!a[k][k].is_zero(), "XI - t is nonsingular over F_q(X)");
            a[k][k].make_monic()
        })
        .filter(|f| f.deg() >= 1)
        .collect();
    debug_assert!(out.windows(2).all(|w| w[1].rem(&w[0]).is_zero()));
    out
}

fn canonical_key<I: IntoIterator<Item = (Vec<u64>, u32, u32)>>(raw: I) -> ModKey {
    let mut counts: BTreeMap<(Vec<u64>, u32), u32> = BTreeMap::new();
    for (c, e, n) in raw {
        *counts.entry((c, e)).or_insert(0) += n;
    }
    let mut key: ModKey = counts.into_iter().map(|((c, e), n)| (c, e, n)).collect();
    key.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
    key
}

fn module_key_of(t: &[Vec<u64>], q: u64) -> ModKey {
    canonical_key(invariant_factors_fp(t, q).into_iter().flat_map(|d| {
        let (_, facs) = d.factor();
        facs.into_iter().map(|(f, e)| (f.coeffs().to_vec(), e, 1))
    }))
}

fn monic_polys(q: u64, deg: usize) -> Vec<FpPoly> {
    let mut out = Vec::new();
    let mut lower = vec![0u64; deg];
    loop {
        let mut coeffs = lower.clone();
        coeffs.push(1);
        out.push(FpPoly::new(q, &coeffs));
        let mut i = 0;
        loop {
            if i == deg {
                return out;
            }
            lower[i] += 1;
            if lower[i] < q {
                break;
            }
            lower[i] = 0;
            i += 1;
        }
    }
}

/// Every validated self-dual module of the given dimension, keyed
/// canonically. Candidates are multisets of primary blocks (f, e, n) with
/// distinct (f, e); validation prunes the ones no isometry can carry.
fn valid_specs(q: u64, dim: usize) -> Result<BTreeMap<ModKey, FfModuleSpec>, String> {
    let mut blocks: Vec<(usize, FpPoly, u32)> = Vec::new();
    for deg in 1..=dim {
        for f in monic_polys(q, deg) {
            if !f.is_irreducible() {
                continue;
            }
            let mut e = 1u32;
            while deg * e as usize <= dim {
                blocks.push((deg * e as usize, f.clone(), e));
                e += 1;
            }
        }
    }

    let mut out = BTreeMap::new();
    let mut cur: Vec<(FpPoly, u32, u32)> = Vec::new();
    fill_blocks(q, dim, 0, &blocks, &mut cur, &mut out);
    Ok(out)
}

fn fill_blocks(
    q: u64,
    rem: usize,
    start: usize,
    blocks: &[(usize, FpPoly, u32)],
    cur: &mut Vec<(FpPoly, u32, u32)>,
    out: &mut BTreeMap<ModKey, FfModuleSpec>,
) {
    if rem == 0 {
        if let Ok(spec) = FfModuleSpec::new(q, cur.clone()) {
            let key = canonical_key(
                cur.iter().map(|(f, e, n)| (f.coeffs().to_vec(), *e, *n)),
            );
            out.insert(key, spec);
        }
        return;
    }
    for i in start..blocks.len() {
        let (w, f, e) = &blocks[i];
        if *w > rem {
            continue;
        }
        let mut n = 1usize;
        while w * n <= rem {
            cur.push((f.clone(), *e, n as u32));
            fill_blocks(q, rem - w * n, i + 1, blocks, cur, out);
            cur.pop();
            n += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants_come_out_right() {
        let q = 7;
        let perms = permutations_with_sign(3);
        let m = vec![vec![1, 2, 3], vec![0, 4, 5], vec![0, 0, 6]];
        assert_eq!(det_mod(&m, q, &perms), 24 % 7);
        let singular = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 1, 1]];
        assert_eq!(det_mod(&singular, q, &perms), 0);
    }

    #[test]
    fn isometry_group_sizes_match_the_classical_orders() {
        // |O_1| = 2, |O_2^+|(disc -1 square) vs split/nonsplit, |O_3| = 2q(q^2-1)
        for q in [3u64, 5, 7] {
            let mut count = 0u64;
            for_each_isometry(&[1], q, &mut |_| count += 1);
            assert_eq!(count, 2);

            let mut count3 = 0u64;
            for_each_isometry(&[1, 1, 1], q, &mut |_| count3 += 1);
            assert_eq!(count3, 2 * q * (q * q - 1));
        }
    }

    #[test]
    fn plane_isometry_groups_depend_on_the_discriminant_class() {
        // the split plane has 2(q-1) isometries, the anisotropic one 2(q+1)
        for q in [3u64, 5, 7] {
            let ns = nonresidue(q);
            let mut split = 0u64;
            let mut aniso = 0u64;
            // -1 square: <1,1> split exactly when -1 is a square
            let (g_split, g_aniso) = if legendre(q - 1, q) == 1 {
                (vec![1, 1], vec![1, ns])
            } else {
                (vec![1, ns], vec![1, 1])
            };
            for_each_isometry(&g_split, q, &mut |_| split += 1);
            for_each_isometry(&g_aniso, q, &mut |_| aniso += 1);
            assert_eq!(split, 2 * (q - 1));
            assert_eq!(aniso, 2 * (q + 1));
        }
    }

    #[test]
    fn invariant_factors_recover_rotation_modules() {
        // the rotation by a primitive 4th root acts with module X^2 + 1
        let q = 3;
        let t = vec![vec![0, q - 1], vec![1, 0]];
        let key = module_key_of(&t, q);
        assert_eq!(key, vec![(vec![1, 0, 1], 1, 1)]);

        // identity in dimension 3: (X - 1)^1 with multiplicity 3
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(module_key_of(&id, 3), vec![(vec![2, 1], 1, 3)]);
    }

    #[test]
    fn the_direct_and_orbit_form_counts_agree_in_dimension_two() {
        for q in [3u64, 5, 7] {
            let (sq, nsq) = symmetric_counts(q, 2);
            let gl = gl_order(q, 2);
            let mut iso_sq = 0u64;
            let ns = nonresidue(q);
            for_each_isometry(&[1, 1], q, &mut |_| iso_sq += 1);
            let mut iso_ns = 0u64;
            for_each_isometry(&[1, ns], q, &mut |_| iso_ns += 1);
            assert_eq!(sq as u128, gl / iso_sq as u128);
            assert_eq!(nsq as u128, gl / iso_ns as u128);
        }
    }

    #[test]
    fn the_smallest_grid_cell_has_no_mismatches() {
        let report = run(3, 1).expect("oracle runs");
        assert!(report.mismatches.is_empty());
        // dimension 1 realizes exactly X-1 and X+1 on each class
        for c in &report.form_classes {
            assert_eq!(c.isometries, 2);
            assert_eq!(c.modules, 2);
        }
    }
}
