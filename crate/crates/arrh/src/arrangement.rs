//! Central multi-arrangements, their intersection lattices, and the basic
//! constructions: closed subarrangements, restrictions, Ziegler restriction,
//! irreducible factors, graphic arrangements, characteristic polynomial.

use crate::field::{Field, Scalar};
use crate::matrix::Mat;
use crate::poly::Poly;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArrangementError {
    #[error("arrangement must have at least one hyperplane")]
    Empty,
    #[error("forms and multiplicities have different lengths")]
    LengthMismatch,
    #[error("hyperplane {0} has zero defining form")]
    ZeroForm(usize),
    #[error("hyperplanes {0} and {1} are proportional")]
    ProportionalForms(usize, usize),
    #[error("multiplicity of hyperplane {0} must be positive")]
    NonPositiveMultiplicity(usize),
    #[error("field error: {0}")]
    Field(#[from] crate::field::FieldError),
    #[error("index {0} is not a flat of this arrangement")]
    NotAFlat(usize),
    #[error("hyperplane index {0} out of range")]
    BadHyperplane(usize),
    #[error("operation requires a simple arrangement (all multiplicities 1)")]
    NotSimple,
    #[error("graph edge ({0},{1}) is a loop or repeated")]
    BadEdge(usize, usize),
}

/// A central multi-arrangement: hyperplanes given by nonzero linear forms
/// (pairwise non-proportional) with positive integer multiplicities.
///
/// Forms are canonically rescaled on construction (primitive integer vector
/// with positive leading coefficient over Q, leading coefficient 1 over
/// GF(p)); hyperplanes are unchanged as geometric objects.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiArrangement {
    pub field: Field,
    pub num_vars: usize,
    forms: Vec<Vec<Scalar>>,
    mults: Vec<u32>,
}

impl std::fmt::Debug for MultiArrangement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MultiArrangement over {} in {} vars:", self.field, self.num_vars)?;
        for i in 0..self.size() {
            write!(f, " ({})^{}", self.form_poly(i), self.mults[i])?;
        }
        Ok(())
    }
}

fn canonical_scale(field: Field, form: &[Scalar]) -> Vec<Scalar> {
    match field {
        Field::Q => crate::field::primitive_integer_row(form)
            .unwrap()
            .into_iter()
            .map(|n| Scalar::Q(num_rational::BigRational::from(n)))
            .collect(),
        Field::Fp(_) => {
            let lead = form.iter().find(|s| !s.is_zero());
            match lead {
                None => form.to_vec(),
                Some(l) => {
                    let inv = l.inv().unwrap();
                    form.iter().map(|s| s.mul(&inv)).collect()
                }
            }
        }
    }
}

fn proportional(a: &[Scalar], b: &[Scalar]) -> bool {
    // both canonically scaled, so proportional means equal
    a == b
}

impl MultiArrangement {
    pub fn new(
        field: Field,
        forms: Vec<Vec<Scalar>>,
        mults: Vec<u32>,
    ) -> Result<MultiArrangement, ArrangementError> {
        field.validate()?;
        if forms.is_empty() {
            return Err(ArrangementError::Empty);
        }
        if forms.len() != mults.len() {
            return Err(ArrangementError::LengthMismatch);
        }
        let num_vars = forms[0].len();
        let mut canonical = Vec::with_capacity(forms.len());
        for (i, f) in forms.iter().enumerate() {
            assert_eq!(f.len(), num_vars, "ragged form list");
            for s in f {
                if s.field() != field {
                    return Err(crate::field::FieldError::Mismatch.into());
                }
            }
            if f.iter().all(|s| s.is_zero()) {
                return Err(ArrangementError::ZeroForm(i));
            }
            canonical.push(canonical_scale(field, f));
        }
        for i in 0..canonical.len() {
            for j in i + 1..canonical.len() {
                if proportional(&canonical[i], &canonical[j]) {
                    return Err(ArrangementError::ProportionalForms(i, j));
                }
            }
        }
        for (i, &m) in mults.iter().enumerate() {
            if m == 0 {
                return Err(ArrangementError::NonPositiveMultiplicity(i));
            }
        }
        Ok(MultiArrangement {
            field,
            num_vars,
            forms: canonical,
            mults,
        })
    }

    pub fn from_int_forms(
        field: Field,
        forms: &[Vec<i64>],
        mults: &[u32],
    ) -> Result<MultiArrangement, ArrangementError> {
        let conv = forms
            .iter()
            .map(|f| f.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        MultiArrangement::new(field, conv, mults.to_vec())
    }

    pub fn simple_from_int_forms(
        field: Field,
        forms: &[Vec<i64>],
    ) -> Result<MultiArrangement, ArrangementError> {
        MultiArrangement::from_int_forms(field, forms, &vec![1; forms.len()])
    }

    /// Number of hyperplanes |A|.
    pub fn size(&self) -> usize {
        self.forms.len()
    }

    /// Total multiplicity |m|.
    pub fn total_multiplicity(&self) -> u32 {
        self.mults.iter().sum()
    }

    pub fn form(&self, i: usize) -> &[Scalar] {
        &self.forms[i]
    }

    pub fn forms(&self) -> &[Vec<Scalar>] {
        &self.forms
    }

    pub fn mult(&self, i: usize) -> u32 {
        self.mults[i]
    }

    pub fn mults(&self) -> &[u32] {
        &self.mults
    }

    pub fn is_simple(&self) -> bool {
        self.mults.iter().all(|&m| m == 1)
    }

    pub fn with_mults(&self, mults: Vec<u32>) -> Result<MultiArrangement, ArrangementError> {
        MultiArrangement::new(self.field, self.forms.clone(), mults)
    }

    pub fn simple(&self) -> MultiArrangement {
        self.with_mults(vec![1; self.size()]).unwrap()
    }

    pub fn form_poly(&self, i: usize) -> Poly {
        Poly::linear(self.field, &self.forms[i])
    }

    /// The defining polynomial Q(A, m) = prod alpha_H^(m(H)).
    pub fn defining_polynomial(&self) -> Poly {
        let mut q = Poly::constant(self.field, self.num_vars, self.field.one());
        for i in 0..self.size() {
            q = q.mul(&self.form_poly(i).pow(self.mults[i]));
        }
        q
    }

    /// The coefficient matrix B: one row per hyperplane, in order.
    pub fn coefficient_matrix(&self) -> Mat {
        Mat::from_rows(self.field, self.forms.clone()).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.coefficient_matrix().rank()
    }

    pub fn is_essential(&self) -> bool {
        self.rank() == self.num_vars
    }

    /// Rank of the span of a subset of hyperplanes.
    pub fn subset_rank(&self, indices: &[usize]) -> usize {
        let rows: Vec<Vec<Scalar>> = indices.iter().map(|&i| self.forms[i].clone()).collect();
        if rows.is_empty() {
            return 0;
        }
        Mat::from_rows(self.field, rows).unwrap().rank()
    }

    /// The closed subarrangement A_X on the given flat.
    pub fn subarrangement(&self, flat: &Flat) -> MultiArrangement {
        let forms = flat.hyperplanes.iter().map(|&i| self.forms[i].clone()).collect();
        let mults = flat.hyperplanes.iter().map(|&i| self.mults[i]).collect();
        MultiArrangement::new(self.field, forms, mults).unwrap()
    }

    /// Restriction A^X: the simple arrangement of traces H∩X for H not
    /// containing X, in coordinates on X.
    pub fn restriction(&self, flat: &Flat) -> MultiArrangement {
        let (traces, _) = self.trace_classes(flat);
        let forms: Vec<Vec<Scalar>> = traces.iter().map(|t| t.0.clone()).collect();
        let mults = vec![1; forms.len()];
        MultiArrangement::new(self.field, forms, mults).unwrap()
    }

    /// Ziegler restriction (A^H, m^H): restriction to hyperplane `h` with
    /// each trace X weighted by #{H' != H : H' ∩ H = X}.
    pub fn ziegler_restriction(&self, h: usize) -> Result<MultiArrangement, ArrangementError> {
        if !self.is_simple() {
            return Err(ArrangementError::NotSimple);
        }
        if h >= self.size() {
            return Err(ArrangementError::BadHyperplane(h));
        }
        let flat = Flat::from_hyperplanes(self, &[h]);
        let (traces, counts) = self.trace_classes(&flat);
        let forms: Vec<Vec<Scalar>> = traces.iter().map(|t| t.0.clone()).collect();
        MultiArrangement::new(self.field, forms, counts)
    }

    /// Groups hyperplanes not containing the flat by their trace on it.
    /// Returns (distinct trace forms in flat coordinates, group sizes),
    /// ordered by first occurrence.
    fn trace_classes(&self, flat: &Flat) -> (Vec<(Vec<Scalar>,)>, Vec<u32>) {
        let basis = self.flat_coordinates(flat);
        let mut traces: Vec<(Vec<Scalar>,)> = Vec::new();
        let mut counts: Vec<u32> = Vec::new();
        for i in 0..self.size() {
            if flat.hyperplanes.contains(&i) {
                continue;
            }
            // alpha_i restricted to the flat: row vector times basis matrix
            let t: Vec<Scalar> = (0..basis.cols)
                .map(|c| {
                    let mut acc = self.field.zero();
                    for r in 0..basis.rows {
                        acc = acc.add(&self.forms[i][r].mul(&basis[(r, c)]));
                    }
                    acc
                })
                .collect();
            if t.iter().all(|s| s.is_zero()) {
                // hyperplane contains the flat but was not in the closed set:
                // cannot happen for closed flats
                unreachable!("trace of non-containing hyperplane vanished");
            }
            let canon = canonical_scale(self.field, &t);
            if let Some(k) = traces.iter().position(|(u,)| *u == canon) {
                counts[k] += 1;
            } else {
                traces.push((canon,));
                counts.push(1);
            }
        }
        (traces, counts)
    }

    /// A basis matrix of the flat's subspace: num_vars x (num_vars - rank),
    /// columns deterministic (RREF kernel of the span).
    fn flat_coordinates(&self, flat: &Flat) -> Mat {
        let span = flat.span_basis(self);
        let kernel = span.kernel_basis();
        let cols = kernel.len();
        let mut m = Mat::zero(self.field, self.num_vars, cols);
        for (j, v) in kernel.iter().enumerate() {
            for i in 0..self.num_vars {
                m[(i, j)] = v[i].clone();
            }
        }
        m
    }

    /// Finest partition of the hyperplanes into groups whose form-spans are
    /// pairwise independent (the matroid component partition). Computed by
    /// union-find over fundamental circuits of a fixed basis: each non-basis
    /// form is expanded in the basis and merged with the support of its
    /// expansion.
    pub fn irreducible_factor_indices(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        fn union(parent: &mut Vec<usize>, a: usize, b: usize) {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        // greedy basis in hyperplane order
        let mut basis: Vec<usize> = Vec::new();
        for i in 0..n {
            let mut cand = basis.clone();
            cand.push(i);
            if self.subset_rank(&cand) > self.subset_rank(&basis) {
                basis.push(i);
            }
        }
        let rows: Vec<Vec<Scalar>> = basis.iter().map(|&i| self.forms[i].clone()).collect();
        let basis_mat = Mat::from_rows(self.field, rows).unwrap().transpose();
        for i in 0..n {
            if basis.contains(&i) {
                continue;
            }
            let coeffs = basis_mat
                .solve(self.form(i))
                .expect("form lies in basis span");
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    union(&mut parent, i, basis[k]);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    pub fn irreducible_factors(&self) -> Vec<MultiArrangement> {
        self.irreducible_factor_indices()
            .into_iter()
            .map(|g| {
                let forms = g.iter().map(|&i| self.forms[i].clone()).collect();
                let mults = g.iter().map(|&i| self.mults[i]).collect();
                MultiArrangement::new(self.field, forms, mults).unwrap()
            })
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible_factor_indices().len() == 1
    }

    /// Essentialization: rewrites the forms in a basis of their span,
    /// yielding an essential arrangement in rank(A) variables. Returns the
    /// arrangement together with the basis matrix B (rank x num_vars, RREF
    /// rows): new coordinates are u = B x.
    pub fn essentialize(&self) -> (MultiArrangement, Mat) {
        let (rref, pivots) = self.coefficient_matrix().rref();
        let r = pivots.len();
        let mut basis = Mat::zero(self.field, r, self.num_vars);
        for i in 0..r {
            for j in 0..self.num_vars {
                basis[(i, j)] = rref[(i, j)].clone();
            }
        }
        // express each form in the basis: alpha = c . B with c read off the
        // pivot columns (B is in RREF)
        let forms: Vec<Vec<Scalar>> = (0..self.size())
            .map(|h| pivots.iter().map(|&pc| self.forms[h][pc].clone()).collect())
            .collect();
        let arr = MultiArrangement::new(self.field, forms, self.mults.clone()).unwrap();
        (arr, basis)
    }

    /// Product arrangement: block-diagonal union of self and other.
    pub fn product(&self, other: &MultiArrangement) -> MultiArrangement {
        assert_eq!(self.field, other.field);
        let n = self.num_vars + other.num_vars;
        let mut forms = Vec::new();
        let mut mults = Vec::new();
        for i in 0..self.size() {
            let mut f = self.forms[i].clone();
            f.extend(vec![self.field.zero(); other.num_vars]);
            forms.push(f);
            mults.push(self.mults[i]);
        }
        for i in 0..other.size() {
            let mut f = vec![self.field.zero(); self.num_vars];
            f.extend(other.forms[i].iter().cloned());
            forms.push(f);
            mults.push(other.mults[i]);
        }
        let arr = MultiArrangement::new(self.field, forms, mults).unwrap();
        assert_eq!(arr.num_vars, n);
        arr
    }
}

/// A flat of the intersection lattice: a closed set of hyperplane indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Flat {
    /// Closed: contains every hyperplane whose form lies in the span.
    pub hyperplanes: BTreeSet<usize>,
    pub rank: usize,
}

impl Flat {
    /// Closure of a set of hyperplanes: all hyperplanes whose forms lie in
    /// the span of the given ones.
    pub fn from_hyperplanes(arr: &MultiArrangement, gens: &[usize]) -> Flat {
        let rows: Vec<Vec<Scalar>> = gens.iter().map(|&i| arr.form(i).to_vec()).collect();
        let span = Mat::from_rows(arr.field, rows).unwrap();
        let (rref, pivots) = span.rref();
        let rank = pivots.len();
        let mut closed = BTreeSet::new();
        for h in 0..arr.size() {
            if in_row_span(&rref, &pivots, arr.form(h)) {
                closed.insert(h);
            }
        }
        Flat {
            hyperplanes: closed,
            rank,
        }
    }

    /// RREF basis of the span of the flat's forms.
    pub fn span_basis(&self, arr: &MultiArrangement) -> Mat {
        let rows: Vec<Vec<Scalar>> = self.hyperplanes.iter().map(|&i| arr.form(i).to_vec()).collect();
        if rows.is_empty() {
            return Mat::zero(arr.field, 0, arr.num_vars);
        }
        let m = Mat::from_rows(arr.field, rows).unwrap();
        let (rref, pivots) = m.rref();
        let mut basis = Mat::zero(arr.field, pivots.len(), arr.num_vars);
        for i in 0..pivots.len() {
            for j in 0..arr.num_vars {
                basis[(i, j)] = rref[(i, j)].clone();
            }
        }
        basis
    }

    pub fn size(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.hyperplanes.iter().copied().collect()
    }

    /// Lattice order: self <= other iff the index set is contained in the
    /// other's (reverse inclusion of subspaces).
    pub fn leq(&self, other: &Flat) -> bool {
        self.hyperplanes.is_subset(&other.hyperplanes)
    }
}

fn in_row_span(rref: &Mat, pivots: &[usize], v: &[Scalar]) -> bool {
    // reduce v by the RREF rows and test for zero
    let mut v = v.to_vec();
    for (ri, &pc) in pivots.iter().enumerate() {
        if !v[pc].is_zero() {
            let f = v[pc].clone();
            for j in 0..v.len() {
                let d = rref[(ri, j)].mul(&f);
                v[j] = v[j].sub(&d);
            }
        }
    }
    v.iter().all(|s| s.is_zero())
}

/// The intersection lattice: flats graded by rank (codimension), with
/// Möbius numbers.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    /// flats[0] is the ambient space (empty index set). Within a rank,
    /// flats are sorted by index set.
    pub flats: Vec<Flat>,
    /// Indices into `flats`, grouped by rank 0..=r.
    pub by_rank: Vec<Vec<usize>>,
    pub mobius: Vec<i64>,
    /// Index of the center flat (all hyperplanes).
    pub center: usize,
    pub rank: usize,
}

impl IntersectionLattice {
    pub fn build(arr: &MultiArrangement) -> IntersectionLattice {
        let bottom = Flat {
            hyperplanes: BTreeSet::new(),
            rank: 0,
        };
        let mut flats: Vec<Flat> = vec![bottom];
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(vec![]);
        // BFS: close each known flat against each hyperplane
        let mut frontier: Vec<usize> = vec![0];
        while let Some(fi) = frontier.pop() {
            for h in 0..arr.size() {
                if flats[fi].hyperplanes.contains(&h) {
                    continue;
                }
                let mut gens: Vec<usize> = flats[fi].indices();
                gens.push(h);
                let new = Flat::from_hyperplanes(arr, &gens);
                let key = new.indices();
                if seen.insert(key) {
                    flats.push(new);
                    frontier.push(flats.len() - 1);
                }
            }
        }
        let max_rank = flats.iter().map(|f| f.rank).max().unwrap_or(0);
        // sort flats by (rank, index set) for determinism
        flats.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.indices().cmp(&b.indices())));
        let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); max_rank + 1];
        for (i, f) in flats.iter().enumerate() {
            by_rank[f.rank].push(i);
        }
        // Möbius numbers by the defining recursion
        let mut mobius = vec![0i64; flats.len()];
        mobius[0] = 1;
        for i in 1..flats.len() {
            let mut acc = 0i64;
            for j in 0..flats.len() {
                if j != i && flats[j].leq(&flats[i]) {
                    acc += mobius[j];
                }
            }
            mobius[i] = -acc;
        }
        let center = flats
            .iter()
            .position(|f| f.hyperplanes.len() == arr.size())
            .expect("center flat");
        IntersectionLattice {
            flats,
            by_rank,
            mobius,
            center,
            rank: max_rank,
        }
    }

    pub fn flats_of_rank(&self, k: usize) -> &[usize] {
        self.by_rank.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Rank-2 flats lying on at least three hyperplanes.
    pub fn triple_flats(&self) -> Vec<usize> {
        self.flats_of_rank(2)
            .iter()
            .copied()
            .filter(|&i| self.flats[i].size() >= 3)
            .collect()
    }

    pub fn find(&self, indices: &BTreeSet<usize>) -> Option<usize> {
        self.flats.iter().position(|f| &f.hyperplanes == indices)
    }
}

/// Characteristic polynomial of a simple arrangement: coefficients of
/// chi(t) = sum_X mu(X) t^(dim X), index = power of t.
pub fn characteristic_polynomial(
    arr: &MultiArrangement,
    lattice: &IntersectionLattice,
) -> Result<Vec<i64>, ArrangementError> {
    if !arr.is_simple() {
        return Err(ArrangementError::NotSimple);
    }
    let mut coeffs = vec![0i64; arr.num_vars + 1];
    for (i, f) in lattice.flats.iter().enumerate() {
        coeffs[arr.num_vars - f.rank] += lattice.mobius[i];
    }
    Ok(coeffs)
}

/// Whether an integer polynomial factors completely into integer linear
/// factors; if so, the roots (with multiplicity, ascending).
pub fn integer_roots_if_split(coeffs: &[i64]) -> Option<Vec<i64>> {
    // strip trailing zero coefficients from the top, factor out t^k
    let mut c: Vec<i64> = coeffs.to_vec();
    while c.last() == Some(&0) {
        c.pop();
    }
    if c.is_empty() {
        return Some(vec![]);
    }
    let mut roots = Vec::new();
    while c[0] == 0 {
        roots.push(0);
        c.remove(0);
    }
    let mut deg = c.len() - 1;
    // candidate roots divide the constant term
    'outer: while deg > 0 {
        let c0 = c[0].unsigned_abs();
        for cand in 1..=c0 {
            if c0 % cand != 0 {
                continue;
            }
            for root in [cand as i64, -(cand as i64)] {
                // synthetic division by (t - root)
                let mut q = vec![0i64; deg];
                let mut carry = c[deg];
                for k in (0..deg).rev() {
                    q[k] = carry;
                    carry = c[k] + carry * root;
                }
                if carry == 0 {
                    roots.push(root);
                    c = {
                        let mut v = q;
                        v.truncate(deg);
                        v
                    };
                    deg -= 1;
                    continue 'outer;
                }
            }
        }
        return None;
    }
    roots.sort_unstable();
    Some(roots)
}

/// Graphic arrangement of a simple graph on `n` vertices: one hyperplane
/// x_i - x_j per edge.
pub fn graphic_arrangement(
    field: Field,
    n: usize,
    edges: &[(usize, usize)],
    mults: &[u32],
) -> Result<MultiArrangement, ArrangementError> {
    let mut seen = BTreeSet::new();
    let mut forms = Vec::new();
    for &(a, b) in edges {
        if a == b || a >= n || b >= n {
            return Err(ArrangementError::BadEdge(a, b));
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            return Err(ArrangementError::BadEdge(a, b));
        }
        let mut f = vec![0i64; n];
        f[key.0] = 1;
        f[key.1] = -1;
        forms.push(f);
    }
    MultiArrangement::from_int_forms(field, &forms, mults)
}

/// Clique complex of a simple graph: simplices grouped by dimension,
/// each simplex a sorted vertex list. Dimension 0 = vertices.
pub fn clique_complex(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Vec<usize>>> {
    assert!(n <= 16, "clique complex limited to 16 vertices");
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|v| vec![v]).collect()];
    loop {
        let last = by_dim.last().unwrap();
        let mut next: Vec<Vec<usize>> = Vec::new();
        for simplex in last {
            let max = *simplex.last().unwrap();
            for v in max + 1..n {
                if simplex.iter().all(|&u| adj[u][v]) {
                    let mut s = simplex.clone();
                    s.push(v);
                    next.push(s);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        by_dim.push(next);
    }
    by_dim
}
