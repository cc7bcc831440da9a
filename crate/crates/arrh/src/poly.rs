//! Multivariate polynomials with exact coefficients, graded-lex monomial
//! order throughout.

use crate::field::{Field, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector. Ordering is graded lexicographic: total degree first,
/// then lexicographic on exponents (x1 heaviest). Larger in the order means
/// the later monomial under `Ord`, so `terms.iter().last()` is the leading
/// term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn one(nvars: usize) -> Mono {
        Mono(vec![0; nvars])
    }

    pub fn mul(&self, rhs: &Mono) -> Mono {
        Mono(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, rhs: &Mono) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, rhs: &Mono) -> Mono {
        Mono(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of the given total degree, in descending graded-lex
/// order (so `x1^d` comes first). The list length is C(d+n-1, n-1).
pub fn monomials(nvars: usize, degree: u32) -> Vec<Mono> {
    fn rec(nvars: usize, degree: u32, prefix: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if nvars == 1 {
            prefix.push(degree as u16);
            out.push(Mono(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e as u16);
            rec(nvars - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    assert!(nvars >= 1);
    let mut out = Vec::new();
    rec(nvars, degree, &mut Vec::new(), &mut out);
    out
}

pub fn num_monomials(nvars: usize, degree: u32) -> usize {
    // C(degree + nvars - 1, nvars - 1)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..(nvars as u128 - 1) {
        num *= degree as u128 + i + 1;
        den *= i + 1;
    }
    (num / den) as usize
}

/// A multivariate polynomial; only nonzero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub field: Field,
    pub terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero(field: Field, nvars: usize) -> Poly {
        Poly {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, nvars: usize, c: Scalar) -> Poly {
        let mut p = Poly::zero(field, nvars);
        if !c.is_zero() {
            p.terms.insert(Mono::one(nvars), c);
        }
        p
    }

    pub fn monomial(field: Field, m: Mono, c: Scalar) -> Poly {
        let mut p = Poly::zero(field, m.0.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The linear form with the given coefficient vector.
    pub fn linear(field: Field, coeffs: &[Scalar]) -> Poly {
        let n = coeffs.len();
        let mut p = Poly::zero(field, n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u16; n];
                e[i] = 1;
                p.terms.insert(Mono(e), c.clone());
            }
        }
        p
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Poly {
        let mut e = vec![0u16; nvars];
        e[i] = 1;
        Poly::monomial(field, Mono(e), field.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field, self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        let mut out = Poly::zero(self.field, self.nvars);
        for (m1, c1) in &self.terms {
            out.terms.insert(m1.mul(m), c1.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(self.field, self.nvars, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree if the polynomial is homogeneous (zero counts as homogeneous).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let Some(d) = it.next() else { return Some(0) };
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                t = t.mul(&point[i].pow(e as u32));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Division with remainder by a single divisor (graded-lex reduction).
    /// Returns (quotient, remainder) with self = q * divisor + r and no term
    /// of r divisible by the leading monomial of the divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let (lm, lc) = divisor.leading().expect("division by zero polynomial");
        let lm = lm.clone();
        let lc = lc.clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.field, self.nvars);
        loop {
            let Some((m, c)) = rem
                .terms
                .iter()
                .rev()
                .find(|(m, _)| lm.divides(m))
                .map(|(m, c)| (m.clone(), c.clone()))
            else {
                break;
            };
            let qm = m.div(&lm);
            let qc = c.div(&lc);
            quot.add_term(qm.clone(), qc.clone());
            let t = divisor.mul(&Poly::monomial(self.field, qm, qc));
            rem = rem.sub(&t);
        }
        (quot, rem)
    }

    /// Whether `divisor^power` divides self exactly.
    pub fn divisible_by_power(&self, divisor: &Poly, power: u32) -> bool {
        let mut cur = self.clone();
        for _ in 0..power {
            if cur.is_zero() {
                return true;
            }
            let (q, r) = cur.div_rem(divisor);
            if !r.is_zero() {
                return false;
            }
            cur = q;
        }
        true
    }

    /// Exact quotient by `divisor^power`; panics if not divisible.
    pub fn exact_div_power(&self, divisor: &Poly, power: u32) -> Poly {
        let mut cur = self.clone();
        for _ in 0..power {
            let (q, r) = cur.div_rem(divisor);
            assert!(r.is_zero(), "not divisible");
            cur = q;
        }
        cur
    }

    /// Substitutes variable i by forms[i]; the forms live in a possibly
    /// different variable count.
    pub fn subst(&self, forms: &[Poly]) -> Poly {
        assert_eq!(forms.len(), self.nvars);
        let out_nvars = forms.first().map(|f| f.nvars).unwrap_or(0);
        let mut out = Poly::zero(self.field, out_nvars);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(self.field, out_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&forms[i].pow(e as u32));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// The coefficient vector over `monomials(nvars, d)` order; zero padding.
    pub fn coeff_vector(&self, monos: &[Mono]) -> Vec<Scalar> {
        monos
            .iter()
            .map(|m| self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero()))
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["x", "y", "z", "w", "u", "v", "s", "t"];
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let cs = c.to_string();
            let (sign, mag) = if let Some(stripped) = cs.strip_prefix('-') {
                ("-", stripped.to_string())
            } else {
                ("+", cs)
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let is_const = m.degree() == 0;
            if mag != "1" || is_const {
                write!(f, "{}", mag)?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first_var = true;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                let name = names
                    .get(i)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| format!("x{}", i + 1));
                if e == 1 {
                    write!(f, "{}", name)?;
                } else {
                    write!(f, "{}^{}", name, e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Determinant of a square polynomial matrix by Laplace expansion with
/// memoization over column subsets. Fine for the small sizes used here.
pub fn poly_mat_det(rows: &[Vec<Poly>]) -> Poly {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n));
    if n == 0 {
        panic!("empty determinant");
    }
    let field = rows[0][0].field;
    let nvars = rows[0][0].nvars;
    let mut memo: std::collections::HashMap<u32, Poly> = std::collections::HashMap::new();
    fn rec(
        rows: &[Vec<Poly>],
        row: usize,
        colmask: u32,
        field: Field,
        nvars: usize,
        memo: &mut std::collections::HashMap<u32, Poly>,
    ) -> Poly {
        let n = rows.len();
        if row == n {
            return Poly::constant(field, nvars, field.one());
        }
        if let Some(p) = memo.get(&colmask) {
            return p.clone();
        }
        let mut acc = Poly::zero(field, nvars);
        let mut sign_pos = true;
        for c in 0..n {
            if colmask & (1 << c) != 0 {
                continue;
            }
            let entry = &rows[row][c];
            if !entry.is_zero() {
                let sub = rec(rows, row + 1, colmask | (1 << c), field, nvars, memo);
                let term = entry.mul(&sub);
                acc = if sign_pos { acc.add(&term) } else { acc.sub(&term) };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(colmask, acc.clone());
        acc
    }
    rec(rows, 0, 0, field, nvars, &mut memo)
}

/// A vector of polynomials with per-coordinate grading shifts: entry i of a
/// homogeneous element of degree d has polynomial degree d - shift_i.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVec {
    pub nvars: usize,
    pub field: Field,
    pub entries: Vec<Poly>,
    pub shifts: Vec<i64>,
}

impl PolyVec {
    pub fn zero(field: Field, nvars: usize, len: usize) -> PolyVec {
        PolyVec {
            nvars,
            field,
            entries: vec![Poly::zero(field, nvars); len],
            shifts: vec![0; len],
        }
    }

    pub fn from_entries(field: Field, nvars: usize, entries: Vec<Poly>) -> PolyVec {
        let n = entries.len();
        PolyVec {
            nvars,
            field,
            entries,
            shifts: vec![0; n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| p.is_zero())
    }

    /// Common degree d such that entry i is homogeneous of degree d - shift_i
    /// (or zero). None if entries are inhomogeneous or inconsistent.
    pub fn degree(&self) -> Option<i64> {
        let mut d: Option<i64> = None;
        for (p, &s) in self.entries.iter().zip(&self.shifts) {
            if p.is_zero() {
                continue;
            }
            let pd = p.homogeneous_degree()? as i64 + s;
            match d {
                None => d = Some(pd),
                Some(x) if x == pd => {}
                _ => return None,
            }
        }
        Some(d.unwrap_or(0))
    }

    pub fn scale(&self, c: &Scalar) -> PolyVec {
        PolyVec {
            nvars: self.nvars,
            field: self.field,
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
            shifts: self.shifts.clone(),
        }
    }

    pub fn add(&self, rhs: &PolyVec) -> PolyVec {
        assert_eq!(self.shifts, rhs.shifts);
        PolyVec {
            nvars: self.nvars,
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
            shifts: self.shifts.clone(),
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Vec<Scalar> {
        self.entries.iter().map(|p| p.eval(point)).collect()
    }
}
