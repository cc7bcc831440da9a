//! Named arrangement families with parameters, shared by the CLI, the
//! sampler, and the test suites.

use crate::arrangement::{graphic_arrangement, IntersectionLattice, MultiArrangement};
use crate::field::{Field, Scalar};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("unknown family `{0}`")]
    Unknown(String),
    #[error("family `{family}` needs parameter `{param}`")]
    MissingParam { family: String, param: String },
    #[error("cannot parse parameter `{0}`")]
    BadParam(String),
    #[error("multiplicity list has wrong length: expected {expected}, got {got}")]
    BadMultiplicityCount { expected: usize, got: usize },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("{0}")]
    Arrangement(#[from] crate::arrangement::ArrangementError),
    #[error("field error: {0}")]
    Field(#[from] crate::field::FieldError),
}

/// Multiplicity request for a family: the family's n-pattern, an explicit
/// list, or all ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultSpec {
    Default,
    N(u32),
    List(Vec<u32>),
}

pub fn family_names() -> &'static [&'static str] {
    &[
        "boolean",
        "x3",
        "ex11",
        "ex12",
        "braid",
        "cycle4chord",
        "xrt",
        "ziegler",
    ]
}

fn get_scalar(
    field: Field,
    params: &BTreeMap<String, String>,
    family: &str,
    key: &str,
) -> Result<Scalar, FamilyError> {
    let raw = params.get(key).ok_or_else(|| FamilyError::MissingParam {
        family: family.to_string(),
        param: key.to_string(),
    })?;
    Ok(field.parse(raw).map_err(|_| FamilyError::BadParam(raw.clone()))?)
}

fn get_usize(
    params: &BTreeMap<String, String>,
    key: &str,
    default: usize,
) -> Result<usize, FamilyError> {
    match params.get(key) {
        None => Ok(default),
        Some(raw) => raw.parse().map_err(|_| FamilyError::BadParam(raw.clone())),
    }
}

fn apply_mults(
    arr: MultiArrangement,
    pattern_for_n: impl Fn(u32) -> Vec<u32>,
    mults: &MultSpec,
) -> Result<MultiArrangement, FamilyError> {
    let m = match mults {
        MultSpec::Default => return Ok(arr),
        MultSpec::N(n) => pattern_for_n(*n),
        MultSpec::List(list) => {
            if list.len() != arr.size() {
                return Err(FamilyError::BadMultiplicityCount {
                    expected: arr.size(),
                    got: list.len(),
                });
            }
            list.clone()
        }
    };
    Ok(arr.with_mults(m)?)
}

/// Builds a named family. Field parameters use the field-aware `p/q`
/// syntax; structural parameters are plain integers.
pub fn build_family(
    field: Field,
    name: &str,
    params: &BTreeMap<String, String>,
    mults: &MultSpec,
) -> Result<MultiArrangement, FamilyError> {
    field.validate()?;
    match name {
        "boolean" => {
            let l = get_usize(params, "l", 3)?;
            let forms: Vec<Vec<i64>> = (0..l)
                .map(|i| {
                    let mut v = vec![0; l];
                    v[i] = 1;
                    v
                })
                .collect();
            let arr = MultiArrangement::simple_from_int_forms(field, &forms)?;
            apply_mults(arr, |n| vec![n; l], mults)
        }
        "x3" => {
            let t = get_scalar(field, params, name, "t")?;
            let forms = vec![
                vec![field.one(), field.zero(), field.zero()],
                vec![field.zero(), field.one(), field.zero()],
                vec![field.zero(), field.zero(), field.one()],
                vec![field.one(), t.neg(), field.zero()],
                vec![field.one(), field.zero(), field.one()],
                vec![field.zero(), field.one(), field.one()],
            ];
            let arr = MultiArrangement::new(field, forms, vec![1; 6])?;
            apply_mults(arr, |n| vec![n, n, n, 1, 1, 1], mults)
        }
        "ex11" => {
            // xyz(x - a z)(x - b z)(y - z)
            let a = get_scalar(field, params, name, "a")?;
            let b = get_scalar(field, params, name, "b")?;
            let forms = vec![
                vec![field.one(), field.zero(), field.zero()],
                vec![field.zero(), field.one(), field.zero()],
                vec![field.zero(), field.zero(), field.one()],
                vec![field.one(), field.zero(), a.neg()],
                vec![field.one(), field.zero(), b.neg()],
                vec![field.zero(), field.one(), field.one().neg()],
            ];
            let arr = MultiArrangement::new(field, forms, vec![1; 6])?;
            apply_mults(arr, |n| vec![n, n, n, 1, 1, n], mults)
        }
        "ex12" => {
            // xyz(x - a y)(x - b y)(y - z)(x - z)
            let a = get_scalar(field, params, name, "a")?;
            let b = get_scalar(field, params, name, "b")?;
            let forms = vec![
                vec![field.one(), field.zero(), field.zero()],
                vec![field.zero(), field.one(), field.zero()],
                vec![field.zero(), field.zero(), field.one()],
                vec![field.one(), a.neg(), field.zero()],
                vec![field.one(), b.neg(), field.zero()],
                vec![field.zero(), field.one(), field.one().neg()],
                vec![field.one(), field.zero(), field.one().neg()],
            ];
            let arr = MultiArrangement::new(field, forms, vec![1; 7])?;
            apply_mults(arr, |n| vec![n, n, n, 1, 1, 1, 1], mults)
        }
        "braid" => {
            let l = get_usize(params, "l", 4)?;
            let mut edges = Vec::new();
            for i in 0..l {
                for j in i + 1..l {
                    edges.push((i, j));
                }
            }
            let count = edges.len();
            let arr = graphic_arrangement(field, l, &edges, &vec![1; count])?;
            apply_mults(arr, |n| vec![n; count], mults)
        }
        "cycle4chord" => {
            // xyz(x-y)(y-z): graphic four-cycle with a chord
            let forms = vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, -1, 0],
                vec![0, 1, -1],
            ];
            let arr = MultiArrangement::simple_from_int_forms(field, &forms)?;
            apply_mults(arr, |n| vec![n; 5], mults)
        }
        "xrt" => {
            let r = get_usize(params, "r", 3)?;
            let t = get_scalar(field, params, name, "t")?;
            let arr = crate::tf2::xrt_family(field, r, &t).map_err(|e| match e {
                crate::tf2::Tf2Error::Arrangement(a) => FamilyError::Arrangement(a),
                other => FamilyError::Degenerate(other.to_string()),
            })?;
            let size = arr.size();
            apply_mults(arr, |n| vec![n; size], mults)
        }
        "ziegler" => {
            let variant = params
                .get("variant")
                .map(|s| s.as_str())
                .unwrap_or("nonconic");
            let conic = match variant {
                "conic" => true,
                "nonconic" => false,
                other => return Err(FamilyError::BadParam(other.to_string())),
            };
            let arr = ziegler_realization(field, conic)?;
            let size = arr.size();
            apply_mults(arr, |n| vec![n; size], mults)
        }
        other => Err(FamilyError::Unknown(other.to_string())),
    }
}

/// Nine lines extending the edges and main diagonals of a hexagon whose
/// vertices are the six triple points {145, 138, 256, 289, 367, 479}
/// (1-indexed). The conic variant places the vertices on y^2 = xz; the
/// non-conic variant perturbs one vertex. Candidate vertex tuples are
/// searched deterministically until the lattice profile is right.
pub fn ziegler_realization(field: Field, conic: bool) -> Result<MultiArrangement, FamilyError> {
    // hexagon vertices in cyclic order P1..P6; line labels from the flat
    // structure: l1 = P6 P1, l2 = P2 P5, l3 = P3 P6, l4 = P1 P4,
    // l5 = P1 P2, l6 = P2 P3, l7 = P3 P4, l8 = P5 P6, l9 = P4 P5
    let cross = |p: &[Scalar; 3], q: &[Scalar; 3]| -> Vec<Scalar> {
        vec![
            p[1].mul(&q[2]).sub(&p[2].mul(&q[1])),
            p[2].mul(&q[0]).sub(&p[0].mul(&q[2])),
            p[0].mul(&q[1]).sub(&p[1].mul(&q[0])),
        ]
    };
    let build = |pts: &[[Scalar; 3]; 6]| -> Option<MultiArrangement> {
        let line = |i: usize, j: usize| cross(&pts[i], &pts[j]);
        let forms = vec![
            line(5, 0),
            line(1, 4),
            line(2, 5),
            line(0, 3),
            line(0, 1),
            line(1, 2),
            line(2, 3),
            line(4, 5),
            line(3, 4),
        ];
        if forms.iter().any(|f| f.iter().all(|s| s.is_zero())) {
            return None;
        }
        MultiArrangement::new(field, forms, vec![1; 9]).ok()
    };
    // the flats {145, 138, 256, 289, 367, 479}, zero-indexed and sorted
    let expected_trips: Vec<Vec<usize>> = vec![
        vec![0, 2, 7],
        vec![0, 3, 4],
        vec![1, 4, 5],
        vec![1, 7, 8],
        vec![2, 5, 6],
        vec![3, 6, 8],
    ];
    let lattice_ok = |arr: &MultiArrangement| -> bool {
        let lat = IntersectionLattice::build(arr);
        if lat.rank != 3 {
            return false;
        }
        let trips = lat.triple_flats();
        if trips.len() != 6 || lat.flats_of_rank(2).len() != 24 {
            return false;
        }
        let mut sets: Vec<Vec<usize>> = trips.iter().map(|&fi| lat.flats[fi].indices()).collect();
        sets.sort();
        sets == expected_trips
    };
    // vertex parameter search: conic points (1, t, t^2); the non-conic
    // variant shifts the last coordinate of P6 off the conic
    let mut candidates: Vec<(Vec<i64>, i64)> = Vec::new();
    if conic {
        for a in 1..12i64 {
            for b in (a + 1)..13i64 {
                candidates.push((vec![0, a, b, b + 1, b + 2, b + 4], 0));
            }
        }
    } else {
        for bump in 1..10i64 {
            candidates.push((vec![0, 1, 2, 3, 4, 5], bump));
        }
    }
    for (ts, bump) in candidates {
        let mut distinct = ts.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != 6 {
            continue;
        }
        let mut pts: Vec<[Scalar; 3]> = ts
            .iter()
            .map(|&t| {
                [
                    field.one(),
                    field.from_i64(t),
                    field.from_i64(t * t),
                ]
            })
            .collect();
        pts[5][2] = pts[5][2].add(&field.from_i64(bump));
        let arr_pts: [[Scalar; 3]; 6] = pts.try_into().unwrap();
        if let Some(arr) = build(&arr_pts) {
            if lattice_ok(&arr) && six_points_on_conic(field, &arr_pts) == conic {
                return Ok(arr);
            }
        }
    }
    Err(FamilyError::Degenerate(
        "no ziegler realization found in the search grid".to_string(),
    ))
}

/// Whether six projective points lie on a common conic: vanishing of the
/// 6x6 determinant of the quadric monomials.
pub fn six_points_on_conic(field: Field, pts: &[[Scalar; 3]; 6]) -> bool {
    use crate::matrix::Mat;
    let rows: Vec<Vec<Scalar>> = pts
        .iter()
        .map(|p| {
            vec![
                p[0].mul(&p[0]),
                p[0].mul(&p[1]),
                p[1].mul(&p[1]),
                p[0].mul(&p[2]),
                p[1].mul(&p[2]),
                p[2].mul(&p[2]),
            ]
        })
        .collect();
    Mat::from_rows(field, rows).unwrap().det().is_zero()
}
