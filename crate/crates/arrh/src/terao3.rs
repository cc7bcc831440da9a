//! The pruned rank-3 syzygetic complex for simple line arrangements that
//! are formal but not TF2:
//!
//!   0 -> Dbar(A) -> (+)_X S(-|A_X|+1) -> S(-1)^(kappa - e) -> J_3(A) -> 0
//!
//! with the middle maps assembled from the rank-two generators around the
//! triple points and the quotient of the edge module by the hyperplane
//! inclusions and the Euler columns. Exactness is probed degree by degree.

use crate::arrangement::MultiArrangement;
use crate::complexes::ComplexBundle;
use crate::derivations::{derivation_space, euler_derivation, rank2_exponents, saito_check, Derivation};
use crate::field::Scalar;
use crate::matrix::{Mat, RowSpan};
use crate::poly::{monomials, num_monomials, Poly, PolyVec};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Terao3Error {
    #[error("requires an essential arrangement of rank 3")]
    NotRank3,
    #[error("requires a simple arrangement")]
    NotSimple,
    #[error("requires a formal arrangement")]
    NotFormal,
    #[error("input is TF2; use the H^2 presentation instead")]
    IsTf2,
    #[error("hyperplane {0} lies on no triple flat")]
    LonelyHyperplane(usize),
    #[error("{0}")]
    Arrangement(#[from] crate::arrangement::ArrangementError),
}

/// Cohomology dimensions of the pruned complex at one degree, positions
/// ordered left to right.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeExactness {
    pub degree: u32,
    /// [at Dbar, at (+)S(-c_X), at S(-1)^(kappa-e), at J_3].
    pub h: [usize; 4],
}

#[derive(Clone, Debug, Serialize)]
pub struct Terao3Report {
    pub kappa: usize,
    /// Rank of the span of the Euler columns.
    pub euler_rank: usize,
    /// (triple flat hyperplane indices, generator degree |A_X| - 1).
    pub generator_degrees: Vec<(Vec<usize>, u32)>,
    pub degree_bound: u32,
    pub per_degree: Vec<DegreeExactness>,
    pub exact: bool,
}

pub fn terao_rank3_complex(
    arr: &MultiArrangement,
    d_max: u32,
) -> Result<Terao3Report, Terao3Error> {
    if arr.rank() != 3 || !arr.is_essential() {
        return Err(Terao3Error::NotRank3);
    }
    if !arr.is_simple() {
        return Err(Terao3Error::NotSimple);
    }
    let bundle = ComplexBundle::build(arr);
    let prof = crate::complexes::formality_profile(arr, &bundle.scalar);
    if !prof.is_formal() {
        return Err(Terao3Error::NotFormal);
    }
    if crate::tf2::is_tf2(&bundle) {
        return Err(Terao3Error::IsTf2);
    }
    let field = arr.field;
    let nvars = arr.num_vars;
    let n = arr.size();
    let trips = bundle.lattice.triple_flats();

    // edges [X, H] in flat-major order
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &fi in &trips {
        for &h in &bundle.lattice.flats[fi].hyperplanes {
            edges.push((fi, h));
        }
    }
    // representative edge per hyperplane (first occurrence); rest are the
    // coker(iota) basis
    let mut rep_of: Vec<Option<usize>> = vec![None; n];
    let mut basis_edges: Vec<usize> = Vec::new();
    for (p, &(_, h)) in edges.iter().enumerate() {
        if rep_of[h].is_none() {
            rep_of[h] = Some(p);
        } else {
            basis_edges.push(p);
        }
    }
    for h in 0..n {
        if rep_of[h].is_none() {
            return Err(Terao3Error::LonelyHyperplane(h));
        }
    }
    let kappa = basis_edges.len();
    debug_assert_eq!(
        kappa,
        edges.len() - n,
        "kappa = sum |A_X| - |A| for TF-like inputs"
    );
    let basis_pos_of_edge: Vec<Option<usize>> = {
        let mut v = vec![None; edges.len()];
        for (bi, &p) in basis_edges.iter().enumerate() {
            v[p] = Some(bi);
        }
        v
    };
    // q(edge p) in coker(iota) coordinates
    let q_col = |p: usize| -> Vec<Scalar> {
        let mut v = vec![field.zero(); kappa];
        if let Some(bi) = basis_pos_of_edge[p] {
            v[bi] = field.one();
        } else {
            let (_, h) = edges[p];
            for (bi, &bp) in basis_edges.iter().enumerate() {
                if edges[bp].1 == h {
                    v[bi] = field.one().neg();
                }
            }
        }
        v
    };

    // Euler columns per triple flat and the quotient by their span
    let mut euler_span = RowSpan::new(field, kappa);
    let mut euler_cols: Vec<Vec<Scalar>> = Vec::new();
    for &fi in &trips {
        let mut col = vec![field.zero(); kappa];
        for (p, &(f, _)) in edges.iter().enumerate() {
            if f == fi {
                let qc = q_col(p);
                for (i, c) in qc.into_iter().enumerate() {
                    col[i] = col[i].add(&c);
                }
            }
        }
        euler_span.insert(col.clone());
        euler_cols.push(col);
    }
    let e = euler_span.dim();
    let pivots: Vec<usize> = euler_span.basis().iter().map(|_| 0).collect();
    // recover pivot positions from the reduced basis rows
    let pivot_cols: Vec<usize> = euler_span
        .basis()
        .iter()
        .map(|row| row.iter().position(|s| !s.is_zero()).unwrap())
        .collect();
    drop(pivots);
    let nonpivot_cols: Vec<usize> =
        (0..kappa).filter(|c| !pivot_cols.contains(c)).collect();
    let project = |v: &[Scalar]| -> Vec<Scalar> {
        // subtract the Euler-span reduction, keep non-pivot coordinates
        let reduced = euler_span.reduce(v.to_vec());
        nonpivot_cols.iter().map(|&c| reduced[c].clone()).collect()
    };
    let quot_dim = kappa - e;

    // rank-two data per triple flat: the high-degree generator theta_X, the
    // direction derivation, and the Euler derivation form a basis
    let euler = euler_derivation(field, nvars);
    let mut theta_x: Vec<Derivation> = Vec::new();
    let mut dir_x: Vec<Derivation> = Vec::new();
    let mut c_x: Vec<u32> = Vec::new();
    let mut generator_degrees = Vec::new();
    for &fi in &trips {
        let flat = &bundle.lattice.flats[fi];
        let sub = arr.subarrangement(flat);
        let ((d1, d2), gens) = rank2_exponents(&sub).map_err(Terao3Error::Arrangement)?;
        debug_assert_eq!(d2, 1, "simple triple flat has exponents (1, |A_X|-1)");
        let theta = gens
            .iter()
            .find(|g| g.degree == d1)
            .expect("high-degree generator present")
            .clone();
        // direction derivation: constant coefficients spanning the flat line
        let span = flat.span_basis(arr);
        let kernel = span.kernel_basis();
        debug_assert_eq!(kernel.len(), 1);
        let dir = Derivation::new(
            kernel[0]
                .iter()
                .map(|c| Poly::constant(field, nvars, c.clone()))
                .collect(),
            0,
        );
        debug_assert!(saito_check(&sub, &[dir.clone(), euler.clone(), theta.clone()]) == Ok(true));
        generator_degrees.push((flat.indices(), d1));
        c_x.push(d1);
        theta_x.push(theta);
        dir_x.push(dir);
    }

    // psi-bar column of theta_X projected to the quotient: entries are
    // polynomials of degree c_X - 1
    let psi_col = |fi_pos: usize| -> Vec<Poly> {
        let fi = trips[fi_pos];
        let mut acc = vec![Poly::zero(field, nvars); kappa];
        for (p, &(f, h)) in edges.iter().enumerate() {
            if f != fi {
                continue;
            }
            let alpha = arr.form_poly(h);
            let val = theta_x[fi_pos].apply(&alpha).exact_div_power(&alpha, 1);
            let qc = q_col(p);
            for (i, c) in qc.into_iter().enumerate() {
                if !c.is_zero() {
                    acc[i] = acc[i].add(&val.scale(&c));
                }
            }
        }
        // project each coordinate through the scalar quotient
        let mut rows: Vec<Poly> = vec![Poly::zero(field, nvars); quot_dim];
        // projection is scalar: apply to each monomial coefficient vector
        // by linearity; equivalently reduce the scalar coefficients of each
        // kappa-vector of polynomials coordinate-wise
        // (project acts on scalars; extend to polynomials entry-wise)
        let mut mono_set: std::collections::BTreeSet<crate::poly::Mono> = Default::default();
        for p in &acc {
            mono_set.extend(p.terms.keys().cloned());
        }
        for m in mono_set {
            let coeffs: Vec<Scalar> = acc
                .iter()
                .map(|p| p.terms.get(&m).cloned().unwrap_or_else(|| field.zero()))
                .collect();
            let proj = project(&coeffs);
            for (i, c) in proj.into_iter().enumerate() {
                rows[i].add_term(m.clone(), c);
            }
        }
        rows
    };
    let vbar: Vec<Vec<Poly>> = (0..trips.len()).map(psi_col).collect();

    // Delta-bar columns: one per quotient coordinate (non-pivot basis edge),
    // the image delta^2(g_(X,H)) in S^3 coordinates
    let j3_width = bundle.scalar.dims[3];
    let delta_edge = |p: usize| -> PolyVec {
        let (fi, h) = edges[p];
        let g = bundle
            .jcomplex
            .generators(2)
            .iter()
            .find(|g| g.flat == fi && g.source == Some(h))
            .expect("level-2 generator for each edge");
        bundle.scalar.apply_diff(2, &g.vec)
    };
    // sanity: Delta kills iota columns and Euler columns
    #[cfg(debug_assertions)]
    {
        for h in 0..n {
            let mut acc = vec![Poly::zero(field, nvars); j3_width];
            for (p, &(_, eh)) in edges.iter().enumerate() {
                if eh == h {
                    let img = delta_edge(p);
                    for i in 0..j3_width {
                        acc[i] = acc[i].add(&img.entries[i]);
                    }
                }
            }
            debug_assert!(acc.iter().all(|p| p.is_zero()), "Delta . iota != 0");
        }
        for &fi in &trips {
            let mut acc = vec![Poly::zero(field, nvars); j3_width];
            for (p, &(f, _)) in edges.iter().enumerate() {
                if f == fi {
                    let img = delta_edge(p);
                    for i in 0..j3_width {
                        acc[i] = acc[i].add(&img.entries[i]);
                    }
                }
            }
            debug_assert!(acc.iter().all(|p| p.is_zero()), "Euler column not killed");
        }
    }
    let delta_cols: Vec<PolyVec> = nonpivot_cols
        .iter()
        .map(|&c| delta_edge(basis_edges[c]))
        .collect();

    // degree-by-degree exactness
    let analyzer = crate::homology::GradedAnalyzer::new(&bundle);
    let mut per_degree = Vec::new();
    for d in 0..=d_max {
        let monos_d = monomials(nvars, d);
        // position 1: ker(tau-bar on D_d) modulo (S . Euler)_d
        let dbasis = derivation_space(arr, d);
        let tau_rows: Vec<Vec<Scalar>> = dbasis
            .iter()
            .map(|theta| tau_bar_row(arr, &bundle, &trips, &dir_x, &euler, &theta_x, &c_x, theta, d))
            .collect();
        let tau_rank = if tau_rows.is_empty() {
            0
        } else {
            Mat::from_rows(field, tau_rows.clone()).unwrap().rank()
        };
        let euler_part = if d >= 1 {
            num_monomials(nvars, d - 1)
        } else {
            0
        };
        let h1 = (dbasis.len() - tau_rank) - euler_part;

        // position 2: ker(Mbar_d) / im(tau_d)
        let dom2: usize = c_x
            .iter()
            .map(|&c| if d >= c { num_monomials(nvars, d - c) } else { 0 })
            .sum();
        let mbar_cols = mbar_columns(field, nvars, &vbar, &c_x, quot_dim, d);
        let mbar_rank = if mbar_cols.is_empty() {
            0
        } else {
            Mat::from_rows(field, mbar_cols).unwrap().rank()
        };
        let h2 = (dom2 - mbar_rank) - tau_rank;

        // position 3: ker(Delta-bar_d) / im(Mbar_d)
        let dom3 = if d >= 1 {
            quot_dim * num_monomials(nvars, d - 1)
        } else {
            0
        };
        let mut dcols = Vec::new();
        if d >= 1 {
            for col in &delta_cols {
                for nu in monomials(nvars, d - 1) {
                    let shifted = PolyVec::from_entries(
                        field,
                        nvars,
                        col.entries.iter().map(|p| p.mul_mono(&nu)).collect(),
                    );
                    let mut flat_v = Vec::with_capacity(j3_width * monos_d.len());
                    for p in &shifted.entries {
                        flat_v.extend(p.coeff_vector(&monos_d));
                    }
                    dcols.push(flat_v);
                }
            }
        }
        let delta_rank = if dcols.is_empty() {
            0
        } else {
            Mat::from_rows(field, dcols).unwrap().rank()
        };
        let h3 = (dom3 - delta_rank) - mbar_rank;

        // position 4: J_3 in degree d modulo the Delta image
        let j3_dim = analyzer.j_dim(3, d);
        let h4 = j3_dim - delta_rank;

        per_degree.push(DegreeExactness {
            degree: d,
            h: [h1, h2, h3, h4],
        });
    }
    let exact = per_degree.iter().all(|r| r.h == [0, 0, 0, 0]);
    Ok(Terao3Report {
        kappa,
        euler_rank: e,
        generator_degrees,
        degree_bound: d_max,
        per_degree,
        exact,
    })
}

/// Coordinates of tau-bar(theta) in (+)_X S(-c_X)_d: the theta_X-component
/// of theta expressed in the basis (dir_X, Euler, theta_X) of D(A_X).
#[allow(clippy::too_many_arguments)]
fn tau_bar_row(
    arr: &MultiArrangement,
    _bundle: &ComplexBundle,
    trips: &[usize],
    dir_x: &[Derivation],
    euler: &Derivation,
    theta_x: &[Derivation],
    c_x: &[u32],
    theta: &Derivation,
    d: u32,
) -> Vec<Scalar> {
    let field = arr.field;
    let nvars = arr.num_vars;
    let mut out = Vec::new();
    for i in 0..trips.len() {
        let c = c_x[i];
        let f_monos = if d >= c {
            monomials(nvars, d - c)
        } else {
            Vec::new()
        };
        if f_monos.is_empty() && d < c {
            continue;
        }
        // solve theta = a dir + b E + f theta_X coefficient-wise in degree d
        let a_monos = monomials(nvars, d);
        let b_monos = if d >= 1 { monomials(nvars, 1 + (d - 1)) } else { vec![] };
        // b has degree d - 1
        let b_monos = if d >= 1 { monomials(nvars, d - 1) } else { b_monos };
        let cols = a_monos.len() + b_monos.len() + f_monos.len();
        let target_monos = monomials(nvars, d);
        let rows = nvars * target_monos.len();
        let mut mat = Mat::zero(field, rows, cols);
        let mut rhs = vec![field.zero(); rows];
        let mono_index: std::collections::HashMap<&crate::poly::Mono, usize> =
            target_monos.iter().enumerate().map(|(k, m)| (m, k)).collect();
        // contribution of unknown blocks to coordinate j
        for (ci, am) in a_monos.iter().enumerate() {
            for j in 0..nvars {
                let p = dir_x[i].coeffs.entries[j].mul_mono(am);
                for (m, cval) in &p.terms {
                    mat[(j * target_monos.len() + mono_index[m], ci)] = cval.clone();
                }
            }
        }
        for (ci, bm) in b_monos.iter().enumerate() {
            for j in 0..nvars {
                let p = euler.coeffs.entries[j].mul_mono(bm);
                for (m, cval) in &p.terms {
                    mat[(j * target_monos.len() + mono_index[m], a_monos.len() + ci)] =
                        cval.clone();
                }
            }
        }
        for (ci, fm) in f_monos.iter().enumerate() {
            for j in 0..nvars {
                let p = theta_x[i].coeffs.entries[j].mul_mono(fm);
                for (m, cval) in &p.terms {
                    mat[(
                        j * target_monos.len() + mono_index[m],
                        a_monos.len() + b_monos.len() + ci,
                    )] = cval.clone();
                }
            }
        }
        for j in 0..nvars {
            for (m, cval) in &theta.coeffs.entries[j].terms {
                rhs[j * target_monos.len() + mono_index[m]] = cval.clone();
            }
        }
        let sol = mat
            .solve(&rhs)
            .expect("theta decomposes in the free basis of D(A_X)");
        out.extend(sol[a_monos.len() + b_monos.len()..].iter().cloned());
    }
    out
}

/// Monomial-multiplied columns of Mbar in degree d, flattened over
/// (quotient coordinate, monomial of degree d-1).
fn mbar_columns(
    _field: crate::field::Field,
    nvars: usize,
    vbar: &[Vec<Poly>],
    c_x: &[u32],
    quot_dim: usize,
    d: u32,
) -> Vec<Vec<Scalar>> {
    if d < 1 {
        return Vec::new();
    }
    let target_monos = monomials(nvars, d - 1);
    let mut cols = Vec::new();
    for (i, col) in vbar.iter().enumerate() {
        let c = c_x[i];
        if d < c {
            continue;
        }
        for nu in monomials(nvars, d - c) {
            let mut v = Vec::with_capacity(quot_dim * target_monos.len());
            for p in col {
                v.extend(p.mul_mono(&nu).coeff_vector(&target_monos));
            }
            cols.push(v);
        }
    }
    cols
}
