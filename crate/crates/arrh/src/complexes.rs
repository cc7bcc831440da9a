//! The scalar complex S^. (flat-block scalar differentials built from
//! relation spaces), formality tests, and the graded generator complex J^.
//! sitting inside it.

use crate::arrangement::{IntersectionLattice, MultiArrangement};
use crate::field::{Field, Scalar};
use crate::matrix::Mat;
use crate::poly::{Poly, PolyVec};
use std::ops::Range;

/// The complex S^0 -> S^1 -> ... -> S^r with flat-block structure.
///
/// `diffs[k]` is the matrix of delta^k: S^k -> S^(k+1); its rows are grouped
/// by flats of rank k+1 and encode a canonical basis of the relations among
/// the rows of delta^(k-1) lying over each flat.
#[derive(Clone, Debug)]
pub struct ScalarComplex {
    pub field: Field,
    pub rank: usize,
    pub diffs: Vec<Mat>,
    /// blocks[k]: (lattice flat id, coordinate range) for the summands of S^k.
    pub blocks: Vec<Vec<(usize, Range<usize>)>>,
    /// dims[k] = rank of the free module S^k.
    pub dims: Vec<usize>,
}

impl ScalarComplex {
    pub fn build(arr: &MultiArrangement, lattice: &IntersectionLattice) -> ScalarComplex {
        let field = arr.field;
        let r = lattice.rank;
        let ell = arr.num_vars;
        let mut dims = vec![ell];
        let mut blocks: Vec<Vec<(usize, Range<usize>)>> =
            vec![vec![(lattice.by_rank[0][0], 0..ell)]];
        let mut diffs: Vec<Mat> = Vec::new();

        // level-1 blocks: one coordinate per hyperplane, in arrangement order
        let mut level1 = Vec::new();
        for (pos, &fi) in lattice.flats_of_rank(1).iter().enumerate() {
            level1.push((fi, pos..pos + 1));
        }
        blocks.push(level1);
        dims.push(arr.size());
        diffs.push(arr.coefficient_matrix());

        for k in 1..r {
            // delta^k rows live over flats of rank k+1
            let mut next_blocks = Vec::new();
            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            let mut offset = 0usize;
            for &xi in lattice.flats_of_rank(k + 1) {
                let x = &lattice.flats[xi];
                // rows of delta^(k-1) lying in blocks of rank-k flats below x
                let mut row_ids: Vec<usize> = Vec::new();
                for (fi, range) in &blocks[k] {
                    if lattice.flats[*fi].leq(x) {
                        row_ids.extend(range.clone());
                    }
                }
                let sel = Mat::from_rows(
                    field,
                    row_ids.iter().map(|&i| diffs[k - 1].row(i).to_vec()).collect(),
                )
                .unwrap();
                // relations among the selected rows = kernel of the transpose
                let rels = sel.transpose().kernel_basis();
                let bsize = rels.len();
                for rel in rels {
                    let mut full = vec![field.zero(); dims[k]];
                    for (pos, &ri) in row_ids.iter().enumerate() {
                        full[ri] = rel[pos].clone();
                    }
                    rows.push(full);
                }
                next_blocks.push((xi, offset..offset + bsize));
                offset += bsize;
            }
            let mat = if rows.is_empty() {
                Mat::zero(field, 0, dims[k])
            } else {
                Mat::from_rows(field, rows).unwrap()
            };
            debug_assert!(mat.mul(&diffs[k - 1]).is_zero());
            diffs.push(mat);
            blocks.push(next_blocks);
            dims.push(offset);
        }

        ScalarComplex {
            field,
            rank: r,
            diffs,
            blocks,
            dims,
        }
    }

    /// Cohomology dimensions h^0..h^r of the scalar complex (ranks of the
    /// constant matrices; tensoring with S preserves them).
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let r = self.rank;
        let mut ranks = Vec::with_capacity(r);
        for d in &self.diffs {
            ranks.push(d.rank());
        }
        let mut h = Vec::with_capacity(r + 1);
        for i in 0..=r {
            let ker = if i < r {
                self.dims[i] - ranks[i]
            } else {
                self.dims[r]
            };
            let im = if i == 0 { 0 } else { ranks[i - 1] };
            h.push(ker - im);
        }
        h
    }

    /// Applies delta^k to a polynomial vector in S^k coordinates.
    pub fn apply_diff(&self, k: usize, v: &PolyVec) -> PolyVec {
        let d = &self.diffs[k];
        assert_eq!(v.entries.len(), d.cols);
        let mut out = vec![Poly::zero(self.field, v.nvars); d.rows];
        for i in 0..d.rows {
            for j in 0..d.cols {
                let c = &d[(i, j)];
                if !c.is_zero() && !v.entries[j].is_zero() {
                    out[i] = out[i].add(&v.entries[j].scale(c));
                }
            }
        }
        PolyVec::from_entries(self.field, v.nvars, out)
    }

    /// Replaces each flat block of each differential by a random invertible
    /// recombination of its rows. The result is still a valid scalar complex
    /// for the arrangement (any relation basis is allowed); homology
    /// dimensions must not change. Used by cross-check tests.
    pub fn randomize_bases<R: rand::Rng>(&mut self, rng: &mut R) {
        for k in 1..self.diffs.len() {
            let (lo, hi) = (-3i64, 3i64);
            let blocks = self.blocks[k + 1].clone();
            for (_, range) in blocks {
                let b = range.len();
                if b == 0 {
                    continue;
                }
                let u = loop {
                    let rows: Vec<Vec<i64>> = (0..b)
                        .map(|_| (0..b).map(|_| rng.gen_range(lo..=hi)).collect())
                        .collect();
                    let cand = Mat::from_int_rows(self.field, &rows);
                    if !cand.det().is_zero() {
                        break cand;
                    }
                };
                // rows[range] <- u * rows[range]
                let old: Vec<Vec<Scalar>> = range
                    .clone()
                    .map(|i| self.diffs[k].row(i).to_vec())
                    .collect();
                for (bi, i) in range.clone().enumerate() {
                    for j in 0..self.diffs[k].cols {
                        let mut acc = self.field.zero();
                        for bj in 0..b {
                            if !u[(bi, bj)].is_zero() && !old[bj][j].is_zero() {
                                acc = acc.add(&u[(bi, bj)].mul(&old[bj][j]));
                            }
                        }
                        self.diffs[k][(i, j)] = acc;
                    }
                }
                // the rows of delta^(k+1) are relations among the old rows;
                // transform its columns by u^(-1) to keep the composite zero
                if k + 1 < self.diffs.len() {
                    let uinv = {
                        let mut inv_cols = Vec::with_capacity(b);
                        for i in 0..b {
                            let mut e = vec![self.field.zero(); b];
                            e[i] = self.field.one();
                            inv_cols.push(u.solve(&e).unwrap());
                        }
                        // inv_cols[j] is column j of u^(-1)
                        inv_cols
                    };
                    let next = &mut self.diffs[k + 1];
                    for row in 0..next.rows {
                        let old_cols: Vec<Scalar> =
                            range.clone().map(|c| next[(row, c)].clone()).collect();
                        for (cj, c) in range.clone().enumerate() {
                            let mut acc = self.field.zero();
                            for bi in 0..b {
                                if !old_cols[bi].is_zero() && !uinv[cj][bi].is_zero() {
                                    acc = acc.add(&old_cols[bi].mul(&uinv[cj][bi]));
                                }
                            }
                            next[(row, c)] = acc;
                        }
                    }
                }
            }
        }
    }
}

/// Per-index cohomology of S^. with the formality flags read off it.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FormalityProfile {
    pub h_dims: Vec<usize>,
    pub is_essential: bool,
    /// is_k_formal[k] for k = 2..=rank: H^i = 0 for 1 <= i <= k-1.
    pub k_formal: Vec<bool>,
    pub rank: usize,
}

impl FormalityProfile {
    pub fn is_formal(&self) -> bool {
        self.rank < 2 || self.h_dims.get(1).copied().unwrap_or(0) == 0
    }

    /// k-formal for every applicable k (H^1..H^(r-1) all vanish).
    pub fn fully_formal(&self) -> bool {
        (1..self.rank).all(|i| self.h_dims[i] == 0)
    }

    /// The complex is exact away from degree zero (includes the top).
    pub fn exact_above_zero(&self) -> bool {
        (1..=self.rank).all(|i| self.h_dims[i] == 0)
    }
}

pub fn formality_profile(arr: &MultiArrangement, sc: &ScalarComplex) -> FormalityProfile {
    let h = sc.cohomology_dims();
    let rank = sc.rank;
    let k_formal = (2..=rank.max(2))
        .map(|k| (1..k.min(rank + 1)).all(|i| h.get(i).copied().unwrap_or(0) == 0))
        .collect();
    FormalityProfile {
        is_essential: h[0] == 0,
        h_dims: h,
        k_formal,
        rank: arr.rank(),
    }
}

/// Totally formal: every closed subarrangement A_X is k-formal for
/// 2 <= k <= r(X). Returns the first failing flat (lattice id) if any.
pub fn is_totally_formal(
    arr: &MultiArrangement,
    lattice: &IntersectionLattice,
) -> (bool, Option<usize>) {
    for rank in 3..=lattice.rank {
        for &fi in lattice.flats_of_rank(rank) {
            let sub = arr.subarrangement(&lattice.flats[fi]);
            let sub_lat = IntersectionLattice::build(&sub);
            let sc = ScalarComplex::build(&sub, &sub_lat);
            let h = sc.cohomology_dims();
            if (1..rank).any(|i| h[i] != 0) {
                return (false, Some(fi));
            }
        }
    }
    (true, None)
}

/// Strengthened gate used for homology transport: S^.(A_X) exact above
/// degree zero for every flat (essential + totally formal in the sense of
/// the Euler-characteristic lemma).
pub fn scalar_complexes_exact(
    arr: &MultiArrangement,
    lattice: &IntersectionLattice,
) -> (bool, Option<usize>) {
    for rank in 3..=lattice.rank {
        for &fi in lattice.flats_of_rank(rank) {
            let sub = arr.subarrangement(&lattice.flats[fi]);
            let sub_lat = IntersectionLattice::build(&sub);
            let sc = ScalarComplex::build(&sub, &sub_lat);
            let h = sc.cohomology_dims();
            if (1..=rank).any(|i| h[i] != 0) {
                return (false, Some(fi));
            }
        }
    }
    (true, None)
}

/// One generator column of the graded complex J^.: a polynomial vector in
/// S^k coordinates supported in a single flat block.
#[derive(Clone, Debug)]
pub struct JGenerator {
    pub level: usize,
    /// Lattice flat id of the block the generator lives in.
    pub flat: usize,
    pub vec: PolyVec,
    pub degree: u32,
    /// Index of the level-(k-1) generator this one is the pushforward of.
    pub source: Option<usize>,
}

/// The graded submodule complex J^1 -> ... -> J^r: explicit generator
/// columns inside the free modules S^k, with the scalar differentials of
/// S^. as maps.
#[derive(Clone, Debug)]
pub struct JComplex {
    /// levels[k-1] holds the level-k generators, k = 1..=rank.
    pub levels: Vec<Vec<JGenerator>>,
    pub rank: usize,
}

impl JComplex {
    pub fn build(
        arr: &MultiArrangement,
        lattice: &IntersectionLattice,
        sc: &ScalarComplex,
    ) -> JComplex {
        let field = arr.field;
        let nvars = arr.num_vars;
        let r = sc.rank;
        let mut levels: Vec<Vec<JGenerator>> = Vec::new();

        // level 1: alpha_H^m(H) in the block of H
        let mut level1 = Vec::new();
        for (pos, &fi) in lattice.flats_of_rank(1).iter().enumerate() {
            let h = *lattice.flats[fi].hyperplanes.iter().next().unwrap();
            let mut entries = vec![Poly::zero(field, nvars); sc.dims[1]];
            entries[pos] = arr.form_poly(h).pow(arr.mult(h));
            level1.push(JGenerator {
                level: 1,
                flat: fi,
                vec: PolyVec::from_entries(field, nvars, entries),
                degree: arr.mult(h),
                source: None,
            });
        }
        levels.push(level1);

        // level k+1: per-flat components of pushforwards through delta^k
        for k in 1..r {
            let mut next = Vec::new();
            for (xi, range) in &sc.blocks[k + 1] {
                if range.is_empty() {
                    continue;
                }
                let x = &lattice.flats[*xi];
                for (gi, g) in levels[k - 1].iter().enumerate() {
                    if !lattice.flats[g.flat].leq(x) {
                        continue;
                    }
                    let image = sc.apply_diff(k, &g.vec);
                    let mut entries = vec![Poly::zero(field, nvars); sc.dims[k + 1]];
                    let mut nonzero = false;
                    for i in range.clone() {
                        if !image.entries[i].is_zero() {
                            entries[i] = image.entries[i].clone();
                            nonzero = true;
                        }
                    }
                    if nonzero {
                        next.push(JGenerator {
                            level: k + 1,
                            flat: *xi,
                            vec: PolyVec::from_entries(field, nvars, entries),
                            degree: g.degree,
                            source: Some(gi),
                        });
                    }
                }
            }
            levels.push(next);
        }
        JComplex { levels, rank: r }
    }

    pub fn generators(&self, level: usize) -> &[JGenerator] {
        if level == 0 || level > self.levels.len() {
            &[]
        } else {
            &self.levels[level - 1]
        }
    }
}

/// Everything needed to analyze one arrangement: lattice, scalar complex,
/// generator complex.
#[derive(Clone, Debug)]
pub struct ComplexBundle {
    pub arr: MultiArrangement,
    pub lattice: IntersectionLattice,
    pub scalar: ScalarComplex,
    pub jcomplex: JComplex,
}

impl ComplexBundle {
    pub fn build(arr: &MultiArrangement) -> ComplexBundle {
        let lattice = IntersectionLattice::build(arr);
        let scalar = ScalarComplex::build(arr, &lattice);
        let jcomplex = JComplex::build(arr, &lattice, &scalar);
        ComplexBundle {
            arr: arr.clone(),
            lattice,
            scalar,
            jcomplex,
        }
    }
}

/// Basis matrix of the relation space F(A) = ker(e_H -> alpha_H): rows are
/// the relation vectors, |A| columns, canonical.
pub fn relation_space(arr: &MultiArrangement) -> Mat {
    let b = arr.coefficient_matrix();
    let kernel = b.transpose().kernel_basis();
    if kernel.is_empty() {
        return Mat::zero(arr.field, 0, arr.size());
    }
    Mat::from_rows(arr.field, kernel).unwrap()
}

/// Ideal generators of J(sigma) for each simplex of the clique complex of a
/// graph, dimension >= 1: the powered edge forms of the clique.
pub fn graphic_d_description(
    field: Field,
    n: usize,
    edges: &[(usize, usize)],
    mults: &[u32],
) -> Vec<Vec<(Vec<usize>, Vec<Poly>)>> {
    let cc = crate::arrangement::clique_complex(n, edges);
    let mult_of = |a: usize, b: usize| -> u32 {
        let key = (a.min(b), a.max(b));
        edges
            .iter()
            .position(|&(x, y)| (x.min(y), x.max(y)) == key)
            .map(|i| mults[i])
            .expect("edge of clique")
    };
    let mut out = Vec::new();
    for simplices in cc.iter().skip(1) {
        let mut level = Vec::new();
        for s in simplices {
            let mut gens = Vec::new();
            for i in 0..s.len() {
                for j in i + 1..s.len() {
                    let mut f = vec![field.zero(); n];
                    f[s[i]] = field.one();
                    f[s[j]] = field.one().neg();
                    gens.push(Poly::linear(field, &f).pow(mult_of(s[i], s[j])));
                }
            }
            level.push((s.clone(), gens));
        }
        out.push(level);
    }
    out
}

/// Simplicial cochain cohomology dims of a complex over a field: independent
/// reference implementation for the graphic-arrangement equivalence.
pub fn simplicial_cohomology_dims(field: Field, complex: &[Vec<Vec<usize>>]) -> Vec<usize> {
    let top = complex.len();
    // coboundary C^k -> C^(k+1): for each (k+1)-simplex t and face s = t - v,
    // sign = (-1)^(position of v in t)
    let mut mats: Vec<Mat> = Vec::new();
    for k in 0..top.saturating_sub(1) {
        let rows = complex[k + 1].len();
        let cols = complex[k].len();
        let mut m = Mat::zero(field, rows, cols);
        for (ti, t) in complex[k + 1].iter().enumerate() {
            for drop in 0..t.len() {
                let face: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, &v)| v)
                    .collect();
                let si = complex[k]
                    .iter()
                    .position(|s| *s == face)
                    .expect("complex closed under faces");
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                m[(ti, si)] = field.from_i64(sign);
            }
        }
        mats.push(m);
    }
    let mut h = Vec::new();
    for k in 0..top {
        let dim_k = complex[k].len();
        let rank_out = if k < mats.len() { mats[k].rank() } else { 0 };
        let rank_in = if k == 0 { 0 } else { mats[k - 1].rank() };
        h.push(dim_k - rank_out - rank_in);
    }
    h
}
