//! Dense exact matrices: rank, reduced row echelon form, kernels, solving,
//! determinants.
//!
//! Over Q, rank and determinant run fraction-free (Bareiss) on cleared
//! integer rows to control coefficient blowup; reduced echelon forms use
//! field arithmetic because canonical (bit-reproducible) bases are needed
//! downstream. Over GF(p) everything is plain Gaussian elimination.

use crate::field::{primitive_integer_row, Field, FieldError, Scalar};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Dense row-major matrix over a fixed field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Mat {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Builds a matrix from rows, validating that all entries share `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Mat, FieldError> {
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            for s in r {
                if s.field() != field {
                    return Err(FieldError::Mismatch);
                }
                data.push(s.clone());
            }
        }
        Ok(Mat {
            rows: rows.len(),
            cols: ncols,
            field,
            data,
        })
    }

    pub fn from_int_rows(field: Field, rows: &[Vec<i64>]) -> Mat {
        let conv: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Mat::from_rows(field, conv).unwrap()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Mat::zero(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc.add(&self[(i, j)].mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }

    pub fn stack(field: Field, mats: &[&Mat]) -> Mat {
        let cols = mats.first().map(|m| m.cols).unwrap_or(0);
        let mut rows = Vec::new();
        for m in mats {
            assert_eq!(m.cols, cols);
            for i in 0..m.rows {
                rows.push(m.row(i).to_vec());
            }
        }
        Mat::from_rows(field, rows).unwrap()
    }

    /// Reduced row echelon form with the list of pivot columns.
    ///
    /// Pivots are chosen left to right, first nonzero row below the cursor;
    /// this makes the output canonical given the row order.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut pr = None;
            for i in r..m.rows {
                if !m[(i, c)].is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in 0..m.cols {
                    let a = m[(pr, j)].clone();
                    let b = m[(r, j)].clone();
                    m[(pr, j)] = b;
                    m[(r, j)] = a;
                }
            }
            let inv = m[(r, c)].inv().unwrap();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let delta = m[(r, j)].mul(&f);
                        m[(i, j)] = m[(i, j)].sub(&delta);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Exact rank. Fraction-free over Q, Gaussian over GF(p).
    pub fn rank(&self) -> usize {
        match self.field {
            Field::Q => bareiss_rank(self),
            Field::Fp(_) => self.rref().1.len(),
        }
    }

    /// Canonical basis of the right kernel { v : Av = 0 }.
    ///
    /// One basis vector per free column, in column order, with 1 in the free
    /// coordinate; this is the standard RREF kernel basis and is canonical.
    /// Over Q the forward elimination runs fraction-free; the result is
    /// identical to the RREF kernel because pivot columns are intrinsic.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        if self.field == Field::Q && self.rows * self.cols > 0 {
            return bareiss_kernel(self);
        }
        self.kernel_basis_rref()
    }

    fn kernel_basis_rref(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = r[(pi, free)].neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Particular solution of Ax = b, if the system is consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zero(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(pi, self.cols)].clone();
        }
        Some(x)
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        match self.field {
            Field::Q => bareiss_det(self),
            Field::Fp(_) => fp_det(self),
        }
    }
}

/// Kernel over Q via fraction-free forward elimination (row echelon over Z)
/// followed by exact rational back-substitution per free column.
fn bareiss_kernel(m: &Mat) -> Vec<Vec<Scalar>> {
    use num_rational::BigRational;
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| primitive_integer_row(m.row(i)).expect("rational matrix"))
        .collect();
    let rows = m.rows;
    let cols = m.cols;
    let mut pivots: Vec<usize> = Vec::new(); // pivot column per echelon row
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let mut best: Option<usize> = None;
        for (i, row) in a.iter().enumerate().skip(rank) {
            if !row[c].is_zero() {
                match best {
                    Some(b) if a[b][c].abs() <= row[c].abs() => {}
                    _ => best = Some(i),
                }
            }
        }
        let Some(pr) = best else { continue };
        a.swap(rank, pr);
        let pivot = a[rank][c].clone();
        for i in rank + 1..rows {
            if a[i][c..].iter().all(|v| v.is_zero()) {
                continue;
            }
            let head = a[i][c].clone();
            for j in c..cols {
                let num = &pivot * &a[i][j] - &head * &a[rank][j];
                a[i][j] = num / &prev;
            }
        }
        prev = pivot;
        pivots.push(c);
        rank += 1;
    }
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut x: Vec<BigRational> = vec![BigRational::zero(); cols];
        x[free] = BigRational::from(BigInt::from(1));
        for k in (0..rank).rev() {
            let pc = pivots[k];
            if pc > free {
                continue;
            }
            let mut acc = BigRational::from(a[k][free].clone());
            for (&pj, _) in pivots.iter().zip(0..).skip(k + 1) {
                if !a[k][pj].is_zero() && !x[pj].is_zero() {
                    acc += BigRational::from(a[k][pj].clone()) * &x[pj];
                }
            }
            x[pc] = -acc / BigRational::from(a[k][pc].clone());
        }
        basis.push(x.into_iter().map(Scalar::Q).collect());
    }
    basis
}

/// Incremental row-echelon accumulator: tracks the span of inserted vectors
/// with a fully reduced (canonical) basis.
pub struct RowSpan {
    pub field: Field,
    pub width: usize,
    /// (pivot column, row with pivot normalized to 1), kept fully reduced
    /// and sorted by pivot column.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl RowSpan {
    pub fn new(field: Field, width: usize) -> RowSpan {
        RowSpan {
            field,
            width,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` by the current basis (eliminating pivot coordinates).
    pub fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for (pc, row) in &self.rows {
            if !v[*pc].is_zero() {
                let f = v[*pc].clone();
                for j in *pc..self.width {
                    if !row[j].is_zero() {
                        let d = row[j].mul(&f);
                        v[j] = v[j].sub(&d);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v.to_vec()).iter().all(|s| s.is_zero())
    }

    /// Inserts a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let v = self.reduce(v);
        let Some(pc) = v.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = v[pc].inv().unwrap();
        let norm: Vec<Scalar> = v.iter().map(|s| s.mul(&inv)).collect();
        // back-reduce existing rows to keep the basis canonical
        for (_, row) in self.rows.iter_mut() {
            if !row[pc].is_zero() {
                let f = row[pc].clone();
                for j in 0..row.len() {
                    if !norm[j].is_zero() {
                        let d = norm[j].mul(&f);
                        row[j] = row[j].sub(&d);
                    }
                }
            }
        }
        let at = self.rows.partition_point(|(c, _)| *c < pc);
        self.rows.insert(at, (pc, norm));
        true
    }

    /// The canonical reduced basis rows.
    pub fn basis(&self) -> Vec<&[Scalar]> {
        self.rows.iter().map(|(_, r)| r.as_slice()).collect()
    }

    pub fn same_span(&self, other: &RowSpan) -> bool {
        self.dim() == other.dim()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|((pa, ra), (pb, rb))| pa == pb && ra == rb)
    }
}

/// Fraction-free Bareiss elimination on cleared integer rows; returns rank.
fn bareiss_rank(m: &Mat) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| primitive_integer_row(m.row(i)).expect("rational matrix"))
        .collect();
    let rows = m.rows;
    let cols = m.cols;
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    let mut c = 0;
    while rank < rows && c < cols {
        // pick the structurally cheapest pivot: smallest |entry| in this column
        let mut best: Option<(usize, &BigInt)> = None;
        for (i, row) in a.iter().enumerate().skip(rank) {
            let v = &row[c];
            if !v.is_zero() {
                match best {
                    Some((_, bv)) if bv.abs() <= v.abs() => {}
                    _ => best = Some((i, v)),
                }
            }
        }
        let Some((pr, _)) = best else {
            c += 1;
            continue;
        };
        a.swap(rank, pr);
        let pivot = a[rank][c].clone();
        for i in rank + 1..rows {
            if a[i][c].is_zero() && a[i][c + 1..].iter().all(|v| v.is_zero()) {
                continue;
            }
            let head = a[i][c].clone();
            for j in c..cols {
                let num = &pivot * &a[i][j] - &head * &a[rank][j];
                a[i][j] = num / &prev;
            }
        }
        prev = pivot;
        rank += 1;
        c += 1;
    }
    rank
}

fn bareiss_det(m: &Mat) -> Scalar {
    use num_rational::BigRational;
    let n = m.rows;
    if n == 0 {
        return m.field.one();
    }
    // clear denominators per row, tracking the scaling
    let mut scale = BigRational::from(BigInt::from(1));
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        use num_integer::Integer;
        use num_traits::One;
        let mut lcm = BigInt::one();
        for s in m.row(i) {
            lcm = lcm.lcm(s.as_rational().expect("rational matrix").denom());
        }
        scale *= BigRational::new(BigInt::one(), lcm.clone());
        a.push(
            m.row(i)
                .iter()
                .map(|s| {
                    let r = s.as_rational().unwrap();
                    r.numer() * (&lcm / r.denom())
                })
                .collect(),
        );
    }
    let mut sign = 1i64;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(pr) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return m.field.zero();
            };
            a.swap(k, pr);
            sign = -sign;
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            let head = a[i][k].clone();
            for j in k..n {
                let num = &pivot * &a[i][j] - &head * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = pivot;
    }
    let det_int = a[n - 1][n - 1].clone();
    Scalar::Q(BigRational::from(det_int * BigInt::from(sign)) * scale)
}

fn fp_det(m: &Mat) -> Scalar {
    let mut a = m.clone();
    let n = a.rows;
    let mut det = a.field.one();
    for k in 0..n {
        let Some(pr) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
            return a.field.zero();
        };
        if pr != k {
            for j in 0..n {
                let x = a[(pr, j)].clone();
                let y = a[(k, j)].clone();
                a[(pr, j)] = y;
                a[(k, j)] = x;
            }
            det = det.neg();
        }
        det = det.mul(&a[(k, k)]);
        let inv = a[(k, k)].inv().unwrap();
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = a[(i, k)].mul(&inv);
            for j in k..n {
                let delta = a[(k, j)].mul(&f);
                a[(i, j)] = a[(i, j)].sub(&delta);
            }
        }
    }
    det
}

/// Rank, kernel basis, and an optional particular solution in one call.
pub fn rank_kernel_solve(
    m: &Mat,
    rhs: Option<&[Scalar]>,
) -> Result<(usize, Vec<Vec<Scalar>>, Option<Vec<Scalar>>), FieldError> {
    if let Some(b) = rhs {
        for s in b {
            if s.field() != m.field {
                return Err(FieldError::Mismatch);
            }
        }
    }
    let kernel = m.kernel_basis();
    let rank = m.cols - kernel.len();
    let sol = rhs.and_then(|b| m.solve(b));
    Ok((rank, kernel, sol))
}
