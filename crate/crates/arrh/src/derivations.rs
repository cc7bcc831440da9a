//! The derivation module D(A, m), computed degree by degree: graded kernels
//! of the coefficient/powered-form block matrix, minimal generators, Saito's
//! criterion, free-basis search, and the rank-two exponent toolkit.

use crate::arrangement::{ArrangementError, MultiArrangement};
use crate::field::{Field, Scalar};
use crate::matrix::{Mat, RowSpan};
use crate::poly::{monomials, Mono, Poly, PolyVec};

/// A homogeneous derivation theta = sum f_i d/dx_i with all f_i of one
/// degree. Membership in D(A, m) means alpha_H^m(H) divides theta(alpha_H)
/// for every H.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub coeffs: PolyVec,
    pub degree: u32,
}

impl Derivation {
    pub fn new(coeffs: Vec<Poly>, degree: u32) -> Derivation {
        let field = coeffs[0].field;
        let nvars = coeffs[0].nvars;
        for p in &coeffs {
            debug_assert!(p.is_zero() || p.homogeneous_degree() == Some(degree));
        }
        Derivation {
            coeffs: PolyVec::from_entries(field, nvars, coeffs),
            degree,
        }
    }

    /// theta applied to a polynomial: sum f_i * d(poly)/dx_i.
    pub fn apply(&self, poly: &Poly) -> Poly {
        let field = self.coeffs.field;
        let nvars = self.coeffs.nvars;
        let mut out = Poly::zero(field, nvars);
        for (m, c) in &poly.terms {
            for i in 0..nvars {
                let e = m.0[i];
                if e == 0 {
                    continue;
                }
                let mut lower = m.0.clone();
                lower[i] -= 1;
                let coeff = c.mul(&field.from_i64(e as i64));
                let t = self.coeffs.entries[i].mul_mono(&Mono(lower)).scale(&coeff);
                out = out.add(&t);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
}

/// The Euler derivation sum x_i d/dx_i.
pub fn euler_derivation(field: Field, nvars: usize) -> Derivation {
    let coeffs = (0..nvars).map(|i| Poly::var(field, nvars, i)).collect();
    Derivation::new(coeffs, 1)
}

/// Exact membership test: alpha_H^m(H) | theta(alpha_H) for every H.
pub fn is_member(arr: &MultiArrangement, theta: &Derivation) -> bool {
    (0..arr.size()).all(|h| {
        let alpha = arr.form_poly(h);
        theta.apply(&alpha).divisible_by_power(&alpha, arr.mult(h))
    })
}

/// Basis of the degree-d part of D(A, m): kernel of the block matrix
/// [B | diag(alpha_j^m_j)] restricted to degree d, projected to the f-part.
pub fn derivation_space(arr: &MultiArrangement, d: u32) -> Vec<Derivation> {
    let field = arr.field;
    let nvars = arr.num_vars;
    let n = arr.size();
    let monos_d = monomials(nvars, d);
    let md = monos_d.len();
    let mono_index: std::collections::HashMap<&Mono, usize> =
        monos_d.iter().enumerate().map(|(i, m)| (m, i)).collect();

    // unknown layout: f_i coefficient blocks, then h_j blocks (degree d - m_j)
    let f_cols = nvars * md;
    let mut h_offsets = Vec::with_capacity(n);
    let mut cols = f_cols;
    let mut h_monos: Vec<Vec<Mono>> = Vec::with_capacity(n);
    for j in 0..n {
        h_offsets.push(cols);
        if d >= arr.mult(j) {
            let hm = monomials(nvars, d - arr.mult(j));
            cols += hm.len();
            h_monos.push(hm);
        } else {
            h_monos.push(Vec::new());
        }
    }

    // equations: for each hyperplane j and monomial mu of degree d:
    //   sum_i a_ij f_i[mu] + (alpha_j^m_j * h_j)[mu] = 0
    let mut mat = Mat::zero(field, n * md, cols);
    for j in 0..n {
        let form = arr.form(j);
        for (mi, _mu) in monos_d.iter().enumerate() {
            let row = j * md + mi;
            for i in 0..nvars {
                if !form[i].is_zero() {
                    mat[(row, i * md + mi)] = form[i].clone();
                }
            }
        }
        let power = arr.form_poly(j).pow(arr.mult(j));
        for (hi, nu) in h_monos[j].iter().enumerate() {
            for (pm, pc) in &power.terms {
                let mu = pm.mul(nu);
                let mi = mono_index[&mu];
                let row = j * md + mi;
                mat[(row, h_offsets[j] + hi)] = pc.clone();
            }
        }
    }

    let kernel = mat.kernel_basis();
    let mut out = Vec::new();
    for v in kernel {
        let coeffs: Vec<Poly> = (0..nvars)
            .map(|i| {
                let mut p = Poly::zero(field, nvars);
                for (mi, m) in monos_d.iter().enumerate() {
                    p.add_term(m.clone(), v[i * md + mi].clone());
                }
                p
            })
            .collect();
        let theta = Derivation::new(coeffs, d);
        // kernel vectors with zero f-part cannot occur: diag entries are
        // nonzero polynomials
        debug_assert!(!theta.is_zero());
        out.push(theta);
    }
    out
}

/// Minimal generator data of D(A, m) found by searching degrees 0..=d_max.
#[derive(Clone, Debug)]
pub struct MinimalGenerators {
    /// Degrees of new generators, ascending.
    pub degrees: Vec<u32>,
    pub generators: Vec<Derivation>,
    pub searched_to: u32,
}

fn flatten(theta: &Derivation, monos: &[Mono]) -> Vec<Scalar> {
    let mut v = Vec::with_capacity(theta.coeffs.entries.len() * monos.len());
    for p in &theta.coeffs.entries {
        v.extend(p.coeff_vector(monos));
    }
    v
}

/// Enumerates minimal generators degree by degree. `stop` may terminate the
/// search early based on the generators found so far.
pub fn minimal_generators_with<F: Fn(&MinimalGenerators) -> bool>(
    arr: &MultiArrangement,
    d_max: u32,
    stop: F,
) -> MinimalGenerators {
    let field = arr.field;
    let nvars = arr.num_vars;
    let mut data = MinimalGenerators {
        degrees: Vec::new(),
        generators: Vec::new(),
        searched_to: 0,
    };
    let mut prev_basis: Vec<Derivation> = Vec::new();
    for d in 0..=d_max {
        let basis = derivation_space(arr, d);
        let monos = monomials(nvars, d);
        let mut span = RowSpan::new(field, nvars * monos.len());
        // span of S_1 * D_(d-1) inside degree d
        for theta in &prev_basis {
            for i in 0..nvars {
                let xi = Poly::var(field, nvars, i);
                let coeffs: Vec<Poly> =
                    theta.coeffs.entries.iter().map(|p| p.mul(&xi)).collect();
                let shifted = Derivation::new(coeffs, d);
                span.insert(flatten(&shifted, &monos));
            }
        }
        for theta in &basis {
            if span.insert(flatten(theta, &monos)) {
                data.degrees.push(d);
                data.generators.push(theta.clone());
            }
        }
        data.searched_to = d;
        prev_basis = basis;
        if stop(&data) {
            break;
        }
    }
    data
}

pub fn minimal_generators(arr: &MultiArrangement, d_max: u32) -> MinimalGenerators {
    minimal_generators_with(arr, d_max, |_| false)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SaitoError {
    #[error("expected {0} derivations, got {1}")]
    WrongCount(usize, usize),
    #[error("derivation {0} is not in D(A, m)")]
    NotMember(usize),
}

/// Saito's criterion: the derivations form a basis of D(A, m) iff the
/// determinant of their coefficient matrix is a nonzero scalar multiple of
/// the defining polynomial.
pub fn saito_check(arr: &MultiArrangement, thetas: &[Derivation]) -> Result<bool, SaitoError> {
    if thetas.len() != arr.num_vars {
        return Err(SaitoError::WrongCount(arr.num_vars, thetas.len()));
    }
    for (i, t) in thetas.iter().enumerate() {
        if !is_member(arr, t) {
            return Err(SaitoError::NotMember(i));
        }
    }
    let rows: Vec<Vec<Poly>> = thetas.iter().map(|t| t.coeffs.entries.clone()).collect();
    let det = crate::poly::poly_mat_det(&rows);
    if det.is_zero() {
        return Ok(false);
    }
    let q = arr.defining_polynomial();
    let (_, lc_det) = det.leading().unwrap();
    let (_, lc_q) = q.leading().unwrap();
    Ok(det.scale(lc_q) == q.scale(lc_det))
}

/// Outcome of the degree-bounded basis search.
#[derive(Clone, Debug)]
pub enum BasisSearch {
    Free {
        basis: Vec<Derivation>,
        exponents: Vec<u32>,
    },
    NotFound,
}

/// Searches for a free basis among minimal generators in degrees 0..=|m|.
///
/// When D(A, m) is free its minimal generators are exactly num_vars
/// homogeneous derivations with degree sum |m| and nonzero Saito
/// determinant, so this search is complete for free inputs. NotFound is
/// never by itself a proof of non-freeness.
pub fn free_basis_search(arr: &MultiArrangement) -> BasisSearch {
    let total = arr.total_multiplicity();
    let nvars = arr.num_vars;
    let data = minimal_generators_with(arr, total, |d| {
        d.generators.len() > nvars
            || (d.generators.len() == nvars
                && d.degrees.iter().sum::<u32>() >= total)
    });
    if data.generators.len() != nvars {
        return BasisSearch::NotFound;
    }
    if data.degrees.iter().sum::<u32>() != total {
        return BasisSearch::NotFound;
    }
    match saito_check(arr, &data.generators) {
        Ok(true) => {
            let mut exps = data.degrees.clone();
            exps.sort_unstable_by(|a, b| b.cmp(a));
            BasisSearch::Free {
                basis: data.generators,
                exponents: exps,
            }
        }
        _ => BasisSearch::NotFound,
    }
}

/// Exponents of a rank-two multi-arrangement, descending (d1 >= d2),
/// together with the two essential generators lifted to ambient
/// coordinates. Always free by Ziegler's bound.
pub fn rank2_exponents(
    arr: &MultiArrangement,
) -> Result<((u32, u32), Vec<Derivation>), ArrangementError> {
    if arr.rank() != 2 {
        return Err(ArrangementError::NotAFlat(2));
    }
    let (ess, basis) = arr.essentialize();
    let total = ess.total_multiplicity();
    let data = minimal_generators_with(&ess, total, |d| {
        d.degrees.iter().sum::<u32>() >= total && d.degrees.len() >= 2
    });
    assert_eq!(
        data.degrees.len(),
        2,
        "rank-2 module must have exactly two essential generators"
    );
    assert_eq!(
        data.degrees.iter().sum::<u32>(),
        total,
        "rank-2 exponents must sum to |m|"
    );
    let lifted: Vec<Derivation> = data
        .generators
        .iter()
        .zip(&data.degrees)
        .map(|(g, &d)| lift_derivation(arr, &basis, g, d))
        .collect();
    let (d1, d2) = (data.degrees[1], data.degrees[0]);
    Ok(((d1.max(d2), d1.min(d2)), lifted))
}

/// Lifts a derivation on the essentialized coordinates u = Bx back to the
/// ambient variables: theta = sum_i g_i(Bx) v_i with v_i vector fields
/// satisfying v_i(u_k) = delta_ik.
pub fn lift_derivation(
    arr: &MultiArrangement,
    basis: &Mat,
    theta: &Derivation,
    degree: u32,
) -> Derivation {
    let field = arr.field;
    let nvars = arr.num_vars;
    let r = basis.rows;
    // rows of C solve B C^T = I
    let c_rows: Vec<Vec<Scalar>> = (0..r)
        .map(|i| {
            let mut e = vec![field.zero(); r];
            e[i] = field.one();
            basis.solve(&e).expect("basis has full row rank")
        })
        .collect();
    let b_forms: Vec<Poly> = (0..r)
        .map(|i| Poly::linear(field, basis.row(i)))
        .collect();
    let mut coeffs = vec![Poly::zero(field, nvars); nvars];
    for i in 0..r {
        let gi = theta.coeffs.entries[i].subst(&b_forms);
        for j in 0..nvars {
            if !c_rows[i][j].is_zero() {
                coeffs[j] = coeffs[j].add(&gi.scale(&c_rows[i][j]));
            }
        }
    }
    let out = Derivation::new(coeffs, degree);
    debug_assert!(is_member(arr, &out));
    out
}

/// Whether `e` occurs among the exponents of a rank-two multi-arrangement.
pub fn rank2_has_exponent(arr: &MultiArrangement, e: u32) -> Result<bool, ArrangementError> {
    let ((d1, d2), _) = rank2_exponents(arr)?;
    Ok(e == d1 || e == d2)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Rank2Error {
    #[error("roots must be distinct and nonzero")]
    BadRoots,
    #[error("closed form requires at most n simple points (k <= n)")]
    TooManyPoints,
    #[error("requires characteristic zero")]
    CharacteristicNotZero,
    #[error("requires a non-boolean arrangement")]
    Boolean,
    #[error("{0}")]
    Arrangement(#[from] ArrangementError),
}

/// Exponents of x^n y^n (x - a_1 y) ... (x - a_k y): equal to (n + k, n)
/// exactly when the a_i are distinct (n-1)st roots of one nonzero constant,
/// in which case x^n d/dx + beta y^n d/dy realizes the smaller exponent.
/// Cross-checked against the generic degree-by-degree solver.
pub fn nn11_closed_form(
    field: Field,
    n: u32,
    roots: &[Scalar],
) -> Result<(u32, u32), Rank2Error> {
    let k = roots.len() as u32;
    if k > n {
        return Err(Rank2Error::TooManyPoints);
    }
    for (i, a) in roots.iter().enumerate() {
        if a.is_zero() {
            return Err(Rank2Error::BadRoots);
        }
        for b in &roots[..i] {
            if a == b {
                return Err(Rank2Error::BadRoots);
            }
        }
    }
    let powers: Vec<Scalar> = roots.iter().map(|a| a.pow(n - 1)).collect();
    let aligned = powers.windows(2).all(|w| w[0] == w[1]);
    let closed = if aligned && !roots.is_empty() {
        Some((n + k, n))
    } else {
        None
    };
    // generic solver on the explicit arrangement
    let mut forms = vec![vec![field.one(), field.zero()], vec![field.zero(), field.one()]];
    let mut mults = vec![n, n];
    for a in roots {
        forms.push(vec![field.one(), a.neg()]);
        mults.push(1);
    }
    let arr = MultiArrangement::new(field, forms, mults)?;
    let (exps, _) = rank2_exponents(&arr)?;
    if let Some(c) = closed {
        assert_eq!(c, exps, "closed form disagrees with generic solver");
    } else if !roots.is_empty() {
        assert_ne!(exps.1, n, "generic solver found exponent n unexpectedly");
    }
    Ok(exps)
}

/// Three points in P^1 with multiplicities (m_x, m_y, m_z), characteristic
/// zero: m_z is an exponent iff m_x + m_y + m_z <= 2 m_z + 1.
pub fn wakamiko_has_exponent(
    field: Field,
    m_x: u32,
    m_y: u32,
    m_z: u32,
) -> Result<bool, Rank2Error> {
    if field.characteristic() != 0 {
        return Err(Rank2Error::CharacteristicNotZero);
    }
    Ok(m_x + m_y + m_z <= 2 * m_z + 1)
}

/// For a non-boolean rank-two multi-arrangement: a derivation whose value on
/// some form is a nonzero constant multiple of that powered form vanishes on
/// no form at all.
pub fn nonvanishing_check(
    arr: &MultiArrangement,
    theta: &Derivation,
) -> Result<bool, Rank2Error> {
    if arr.rank() != 2 {
        return Err(Rank2Error::Arrangement(ArrangementError::NotAFlat(2)));
    }
    if arr.size() <= 2 {
        return Err(Rank2Error::Boolean);
    }
    Ok((0..arr.size()).all(|h| !theta.apply(&arr.form_poly(h)).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::MultiArrangement;

    fn q() -> Field {
        Field::Q
    }

    fn boolean3_mults(a: u32, b: u32, c: u32) -> MultiArrangement {
        MultiArrangement::from_int_forms(
            q(),
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            &[a, b, c],
        )
        .unwrap()
    }

    #[test]
    fn boolean_contains_coordinate_powers() {
        let arr = boolean3_mults(2, 3, 4);
        let basis = derivation_space(&arr, 2);
        // x^2 d/dx is a degree-2 derivation
        let target = Derivation::new(
            vec![
                Poly::var(q(), 3, 0).pow(2),
                Poly::zero(q(), 3),
                Poly::zero(q(), 3),
            ],
            2,
        );
        assert!(is_member(&arr, &target));
        let monos = monomials(3, 2);
        let mut span = RowSpan::new(q(), 3 * monos.len());
        for b in &basis {
            span.insert(flatten(b, &monos));
        }
        assert!(span.contains(&flatten(&target, &monos)));
    }

    #[test]
    fn membership_of_every_solver_vector() {
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[vec![1, 0], vec![0, 1], vec![1, -1]],
            &[3, 3, 3],
        )
        .unwrap();
        for d in 0..=5 {
            for theta in derivation_space(&arr, d) {
                assert!(is_member(&arr, &theta));
            }
        }
    }

    #[test]
    fn example_x3y3xy3_exponents() {
        // x^3 y^3 (x-y)^3 has exponents (5, 4): degree 3 empty, degree 4
        // one-dimensional
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[vec![1, 0], vec![0, 1], vec![1, -1]],
            &[3, 3, 3],
        )
        .unwrap();
        assert!(derivation_space(&arr, 3).is_empty());
        assert_eq!(derivation_space(&arr, 4).len(), 1);
        let ((d1, d2), gens) = rank2_exponents(&arr).unwrap();
        assert_eq!((d1, d2), (5, 4));
        assert!(saito_check(&arr, &gens).unwrap());
    }

    #[test]
    fn rank2_exponent_pairs_from_flagship_examples() {
        // x^3 z^3 (x-z)(x-2z) -> (4,4); x^3 z^3 (x-2z)(x+2z) -> (5,3)
        let a = MultiArrangement::from_int_forms(
            q(),
            &[vec![1, 0], vec![0, 1], vec![1, -1], vec![1, -2]],
            &[3, 3, 1, 1],
        )
        .unwrap();
        assert_eq!(rank2_exponents(&a).unwrap().0, (4, 4));
        let b = MultiArrangement::from_int_forms(
            q(),
            &[vec![1, 0], vec![0, 1], vec![1, -2], vec![1, 2]],
            &[3, 3, 1, 1],
        )
        .unwrap();
        assert_eq!(rank2_exponents(&b).unwrap().0, (5, 3));
    }

    #[test]
    fn nn11_against_solver() {
        // n=3, roots {2,-2}: squares agree -> (5,3)
        let exps = nn11_closed_form(q(), 3, &[q().from_i64(2), q().from_i64(-2)]).unwrap();
        assert_eq!(exps, (5, 3));
        // n=3, roots {2,3}: 4 != 9 -> (4,4)
        let exps = nn11_closed_form(q(), 3, &[q().from_i64(2), q().from_i64(3)]).unwrap();
        assert_eq!(exps, (4, 4));
        // n=1, single root: boolean-like (2,1)
        let exps = nn11_closed_form(q(), 1, &[q().from_i64(7)]).unwrap();
        assert_eq!(exps, (2, 1));
        // derivation from the lemma is a member
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[vec![1, 0], vec![0, 1], vec![1, -2], vec![1, 2]],
            &[3, 3, 1, 1],
        )
        .unwrap();
        let beta = q().from_i64(4);
        let theta = Derivation::new(
            vec![Poly::var(q(), 2, 0).pow(3), Poly::var(q(), 2, 1).pow(3).scale(&beta)],
            3,
        );
        assert!(is_member(&arr, &theta));
    }

    #[test]
    fn wakamiko_cases() {
        assert!(!wakamiko_has_exponent(q(), 3, 3, 3).unwrap());
        assert!(wakamiko_has_exponent(q(), 1, 1, 1).unwrap());
        assert!(wakamiko_has_exponent(q(), 2, 1, 4).unwrap());
        // cross-validate (2,1,4) with the generic solver
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[vec![1, 0], vec![0, 1], vec![1, -1]],
            &[2, 1, 4],
        )
        .unwrap();
        assert!(rank2_has_exponent(&arr, 4).unwrap());
        assert!(wakamiko_has_exponent(Field::Fp(5), 1, 1, 1).is_err());
    }

    #[test]
    fn saito_boolean_and_degenerate() {
        let arr = boolean3_mults(2, 3, 4);
        let basis: Vec<Derivation> = vec![
            Derivation::new(
                vec![Poly::var(q(), 3, 0).pow(2), Poly::zero(q(), 3), Poly::zero(q(), 3)],
                2,
            ),
            Derivation::new(
                vec![Poly::zero(q(), 3), Poly::var(q(), 3, 1).pow(3), Poly::zero(q(), 3)],
                3,
            ),
            Derivation::new(
                vec![Poly::zero(q(), 3), Poly::zero(q(), 3), Poly::var(q(), 3, 2).pow(4)],
                4,
            ),
        ];
        assert!(saito_check(&arr, &basis).unwrap());
        // repeated Euler derivation fails (zero determinant)
        let simple = boolean3_mults(1, 1, 1);
        let e = euler_derivation(q(), 3);
        assert!(!saito_check(&simple, &[e.clone(), e.clone(), e]).unwrap());
    }

    #[test]
    fn char_p_saito_power_basis() {
        // over GF(3): x^3 d/dx + y^3 d/dy and x^9 d/dx + y^9 d/dy form a
        // basis for x^3 y^3 (x-y)^3 ... here with p^k = 3, p^(k+1) = 9
        let f = Field::Fp(3);
        let arr = MultiArrangement::from_int_forms(
            f,
            &[vec![1, 0], vec![0, 1], vec![1, -1]],
            &[3, 3, 3],
        )
        .unwrap();
        let t1 = Derivation::new(vec![Poly::var(f, 2, 0).pow(3), Poly::var(f, 2, 1).pow(3)], 3);
        let t2 = Derivation::new(vec![Poly::var(f, 2, 0).pow(6), Poly::var(f, 2, 1).pow(6)], 6);
        assert!(saito_check(&arr, &[t1, t2]).unwrap());
        // and the solver agrees: exponents (6, 3) over GF(3)
        assert_eq!(rank2_exponents(&arr).unwrap().0, (6, 3));
    }

    #[test]
    fn free_search_on_boolean() {
        let arr = boolean3_mults(5, 2, 7);
        match free_basis_search(&arr) {
            BasisSearch::Free { exponents, basis } => {
                assert_eq!(exponents, vec![7, 5, 2]);
                assert!(saito_check(&arr, &basis).unwrap());
            }
            BasisSearch::NotFound => panic!("boolean must be free"),
        }
    }

    #[test]
    fn minimal_generator_degrees_braid() {
        // A3 braid simple: exponents 1, 2, 3
        let braid = crate::arrangement::graphic_arrangement(
            q(),
            4,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
            &[1; 6],
        )
        .unwrap();
        let (ess, _) = braid.essentialize();
        let data = minimal_generators(&ess, 6);
        assert_eq!(data.degrees, vec![1, 2, 3]);
    }

    #[test]
    fn monotonicity_under_multiplicity_drop() {
        // D(A, m') contains D(A, m) when m' <= m
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[vec![1, 0], vec![0, 1], vec![1, -1]],
            &[3, 2, 2],
        )
        .unwrap();
        let lower = arr.with_mults(vec![3, 1, 2]).unwrap();
        for d in 0..=5 {
            assert!(derivation_space(&arr, d).len() <= derivation_space(&lower, d).len());
        }
    }

    #[test]
    fn euler_membership_iff_simple() {
        let e = euler_derivation(q(), 3);
        assert!(is_member(&boolean3_mults(1, 1, 1), &e));
        assert!(!is_member(&boolean3_mults(2, 1, 1), &e));
    }

    #[test]
    fn nonvanishing_lemma_cases() {
        // x^3 y^3 (x-y)^3 degree-4 generator: all three evaluations nonzero
        let arr = MultiArrangement::from_int_forms(
            q(),
            &[vec![1, 0], vec![0, 1], vec![1, -1]],
            &[3, 3, 3],
        )
        .unwrap();
        let (_, gens) = rank2_exponents(&arr).unwrap();
        assert!(nonvanishing_check(&arr, &gens[0]).unwrap());
        // boolean refused
        let boolean = MultiArrangement::from_int_forms(q(), &[vec![1, 0], vec![0, 1]], &[2, 2])
            .unwrap();
        let t = Derivation::new(vec![Poly::var(q(), 2, 0).pow(2), Poly::zero(q(), 2)], 2);
        assert_eq!(nonvanishing_check(&boolean, &t), Err(Rank2Error::Boolean));
    }
}
