//! Matrix rings over a field or a Laurent polynomial ring, with the
//! transpose-plus-entry involution, skew-symmetric spanning sets, and the
//! explicit bracket recursions showing (non-)solvability.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{add_term, SparseVec, Subspace};
use crate::scalar::{FieldElem, FieldSpec, LaurentPoly};
use crate::series::{run_series, Algebra, SeriesKind, SeriesOptions, SeriesRun};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("case needs characteristic {expected}, got {got}")]
    WrongCharacteristic { expected: String, got: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Commutative coefficient ring with an involution `♮`.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero(field: FieldSpec) -> Self;
    fn one(field: FieldSpec) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
}

impl Ring for FieldElem {
    fn zero(field: FieldSpec) -> Self {
        field.zero()
    }
    fn one(field: FieldSpec) -> Self {
        field.one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }
    /// Trivial involution on a field.
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Ring for LaurentPoly {
    fn zero(field: FieldSpec) -> Self {
        LaurentPoly::zero(field)
    }
    fn one(field: FieldSpec) -> Self {
        LaurentPoly::constant(field.one())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn conj(&self) -> Self {
        self.involute()
    }
}

/// Square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    n: usize,
    field: FieldSpec,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zero(n: usize, field: FieldSpec) -> Self {
        Matrix {
            n,
            field,
            data: vec![R::zero(field); n * n],
        }
    }

    /// The matrix unit `E_ij` with 1-based indices.
    pub fn unit(n: usize, field: FieldSpec, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n, field);
        m.set(i, j, R::one(field));
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            field,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Entry at 1-based position.
    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[(i - 1) * self.n + (j - 1)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[(i - 1) * self.n + (j - 1)] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn zip(&self, o: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        Matrix {
            n: self.n,
            field: self.field,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, R::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, R::sub)
    }

    pub fn neg(&self) -> Self {
        Matrix {
            n: self.n,
            field: self.field,
            data: self.data.iter().map(R::neg).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Matrix {
            n: self.n,
            field: self.field,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zero(n, self.field);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &o.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] = out.data[i * n + j].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// `(a_ij) -> (a_ji♮)`
    pub fn star(&self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n, self.field);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn is_skew(&self) -> bool {
        self.star() == self.neg()
    }
}

impl<R: Ring> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.n + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn mat_involution<R: Ring>(m: &Matrix<R>) -> Matrix<R> {
    m.star()
}

/// Spanning set of skew matrices in `M_n(K)` under the transpose.
pub fn skew_field_basis(field: FieldSpec, n: usize) -> Vec<Matrix<FieldElem>> {
    let e = |i, j| Matrix::<FieldElem>::unit(n, field, i, j);
    let mut out = Vec::new();
    if field.characteristic() == 2 {
        for i in 1..=n {
            out.push(e(i, i));
        }
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(e(i, j).add(&e(j, i)));
            }
        }
    } else {
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(e(i, j).sub(&e(j, i)));
            }
        }
    }
    out
}

/// Skew elements `a = -a♮` of `K[x,x^-1]` with exponents in `[-bound, bound]`.
pub fn skew_laurent_scalars(field: FieldSpec, bound: usize) -> Vec<LaurentPoly> {
    let b = bound as i64;
    let mut out = Vec::new();
    if field.characteristic() == 2 {
        out.push(LaurentPoly::constant(field.one()));
    }
    for k in 1..=b {
        let p = LaurentPoly::monomial(field.one(), k);
        out.push(&p - &p.involute());
    }
    out
}

/// Spanning set of skew matrices in `M_n(K[x,x^-1])` whose entries have
/// exponents in `[-bound, bound]`.
pub fn skew_laurent_basis(field: FieldSpec, n: usize, bound: usize) -> Vec<Matrix<LaurentPoly>> {
    let mut out = Vec::new();
    for i in 1..=n {
        for a in skew_laurent_scalars(field, bound) {
            let mut m = Matrix::zero(n, field);
            m.set(i, i, a);
            out.push(m);
        }
    }
    let b = bound as i64;
    for i in 1..=n {
        for j in i + 1..=n {
            for k in -b..=b {
                let p = LaurentPoly::monomial(field.one(), k);
                let mut m = Matrix::zero(n, field);
                m.set(j, i, p.conj().neg());
                m.set(i, j, p);
                out.push(m);
            }
        }
    }
    out
}

/// `M_n` over a field (`laurent = false`) or over `K[x,x^-1]`, as a series
/// algebra on the basis `x^k E_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixAlgebra {
    pub n: usize,
    pub field: FieldSpec,
    pub laurent: bool,
}

pub type MatKey = (usize, usize, i64);

impl MatrixAlgebra {
    pub fn field_to_sparse(m: &Matrix<FieldElem>) -> SparseVec<MatKey> {
        let mut v = SparseVec::new();
        for i in 1..=m.n {
            for j in 1..=m.n {
                add_term(&mut v, (i, j, 0), m.get(i, j).clone());
            }
        }
        v
    }

    pub fn laurent_to_sparse(m: &Matrix<LaurentPoly>) -> SparseVec<MatKey> {
        let mut v = SparseVec::new();
        for i in 1..=m.n {
            for j in 1..=m.n {
                for (e, c) in m.get(i, j).terms() {
                    add_term(&mut v, (i, j, e), c.clone());
                }
            }
        }
        v
    }

    pub fn to_laurent(&self, v: &SparseVec<MatKey>) -> Matrix<LaurentPoly> {
        let mut m = Matrix::<LaurentPoly>::zero(self.n, self.field);
        for (&(i, j, e), c) in v {
            let entry = m.get(i, j).add(&LaurentPoly::monomial(c.clone(), e));
            m.set(i, j, entry);
        }
        m
    }
}

impl Algebra for MatrixAlgebra {
    type Key = MatKey;

    fn field(&self) -> FieldSpec {
        self.field
    }

    fn mul(&self, x: &SparseVec<MatKey>, y: &SparseVec<MatKey>) -> SparseVec<MatKey> {
        let mut out = SparseVec::new();
        for (&(i, k, e1), a) in x {
            for (&(k2, j, e2), b) in y.range((k, 0, i64::MIN)..=(k, usize::MAX, i64::MAX)) {
                debug_assert_eq!(k, k2);
                add_term(&mut out, (i, j, e1 + e2), a * b);
            }
        }
        out
    }

    fn render(&self, v: &SparseVec<MatKey>) -> String {
        let m = self.to_laurent(v);
        if self.laurent {
            m.to_string()
        } else {
            let f = Matrix::from_rows(
                self.field,
                (1..=self.n)
                    .map(|i| (1..=self.n).map(|j| m.get(i, j).coeff(0)).collect())
                    .collect(),
            );
            f.to_string()
        }
    }
}

/// Outcome of a matrix case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatrixReport {
    pub case: String,
    pub params: BTreeMap<String, String>,
    pub steps_checked: usize,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl MatrixReport {
    fn new(case: &str, params: &[(&str, String)]) -> Self {
        MatrixReport {
            case: case.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            steps_checked: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn need_char(field: FieldSpec, two: bool) -> Result<(), MatrixError> {
    let c = field.characteristic();
    if (c == 2) != two {
        return Err(MatrixError::WrongCharacteristic {
            expected: if two { "2".into() } else { "not 2".into() },
            got: c,
        });
    }
    Ok(())
}

fn nge3_shape(n: usize, field: FieldSpec, x: &FieldElem, y: &FieldElem) -> Matrix<FieldElem> {
    let e = |i, j| Matrix::<FieldElem>::unit(n, field, i, j);
    e(1, 2).sub(&e(2, 1)).scale(x).add(&e(1, 3).sub(&e(3, 1)).scale(y))
}

fn nge3_b(n: usize, field: FieldSpec, c: &FieldElem) -> Matrix<FieldElem> {
    let e = |i, j| Matrix::<FieldElem>::unit(n, field, i, j);
    e(2, 3).sub(&e(3, 2)).scale(c)
}

/// `X_m` of the `n ≥ 3` recursion, by direct bracket evaluation.
pub fn nge3_x(field: FieldSpec, n: usize, a: &FieldElem, b: &FieldElem, c: &FieldElem, m: usize) -> Matrix<FieldElem> {
    assert!(m >= 1 && n >= 3);
    let mut am = nge3_shape(n, field, a, b);
    let mut bm = nge3_b(n, field, c);
    let mut x = am.bracket(&bm);
    for _ in 1..m {
        let next_a = x.bracket(&bm);
        let next_b = x.bracket(&am);
        am = next_a;
        bm = next_b;
        x = am.bracket(&bm);
    }
    x
}

/// Runs `A_{m+1} = [X_m, B_m]`, `B_{m+1} = [X_m, A_m]`, `X_m = [A_m, B_m]`
/// from `A_1 = a(E12-E21) + b(E13-E31)`, `B_1 = c(E23-E32)` and checks each
/// step against the closed forms.
pub fn witness_nge3(
    field: FieldSpec,
    n: usize,
    a: &FieldElem,
    b: &FieldElem,
    c: &FieldElem,
    steps: usize,
) -> Result<MatrixReport, MatrixError> {
    if n < 3 {
        return Err(MatrixError::Precondition(format!("degree {n} < 3")));
    }
    if c.is_zero() {
        return Err(MatrixError::Precondition("c = 0".into()));
    }
    if (a * a + b * b).is_zero() {
        return Err(MatrixError::Precondition("a^2 + b^2 = 0".into()));
    }
    let mut report = MatrixReport::new(
        "prop3a",
        &[
            ("field", field.to_string()),
            ("n", n.to_string()),
            ("a", a.to_string()),
            ("b", b.to_string()),
            ("c", c.to_string()),
            ("steps", steps.to_string()),
        ],
    );
    let (mut ak, mut bk, mut ck) = (a.clone(), b.clone(), c.clone());
    let mut am = nge3_shape(n, field, a, b);
    let mut bm = nge3_b(n, field, c);
    for m in 1..=steps {
        let x = am.bracket(&bm);
        if am != nge3_shape(n, field, &ak, &bk) {
            report.failures.push(format!("step {m}: A_m differs from closed form"));
        }
        if bm != nge3_b(n, field, &ck) {
            report.failures.push(format!("step {m}: B_m differs from closed form"));
        }
        let x_closed = nge3_shape(n, field, &-(&bk * &ck), &(&ak * &ck));
        if x != x_closed {
            report.failures.push(format!("step {m}: X_m differs from closed form"));
        }
        if x.is_zero() {
            report.failures.push(format!("step {m}: X_m = 0"));
        }
        for (name, mat) in [("A", &am), ("B", &bm), ("X", &x)] {
            if !mat.is_skew() {
                report.failures.push(format!("step {m}: {name}_m not skew"));
            }
        }
        report.steps_checked = m;
        if m == steps {
            break;
        }
        let c2 = &ck * &ck;
        let s = &ak * &ak + &bk * &bk;
        let next = (-(&ak * &c2), -(&bk * &c2), &s * &ck);
        let next_a = x.bracket(&bm);
        let next_b = x.bracket(&am);
        am = next_a;
        bm = next_b;
        (ak, bk, ck) = next;
    }
    Ok(report)
}

/// `[A, _m B] = E12 + E21` for `A = E12 + E21`, `B = E11` in `M_2` over a
/// field of characteristic 2.
pub fn witness_nilpotent_char2(field: FieldSpec, steps: usize) -> Result<MatrixReport, MatrixError> {
    need_char(field, true)?;
    let e = |i, j| Matrix::<FieldElem>::unit(2, field, i, j);
    let a = e(1, 2).add(&e(2, 1));
    let b = e(1, 1);
    let mut report = MatrixReport::new("prop3b", &[("field", field.to_string()), ("steps", steps.to_string())]);
    for (name, m) in [("A", &a), ("B", &b)] {
        if !m.is_skew() {
            report.failures.push(format!("{name} is not skew"));
        }
    }
    let mut acc = a.clone();
    for m in 1..=steps {
        acc = acc.bracket(&b);
        if acc != a {
            report.failures.push(format!("step {m}: [A,_m B] = {acc}"));
        }
        report.steps_checked = m;
    }
    Ok(report)
}

fn laurent_mat(field: FieldSpec, rows: [[LaurentPoly; 2]; 2]) -> Matrix<LaurentPoly> {
    Matrix::from_rows(field, rows.into_iter().map(Vec::from).collect())
}

/// The `M_2(K[x,x^-1])` recursion from `A_1 = [[0,u],[u,0]]`,
/// `B_1 = diag(u,-u)`, checked against `v_{m+1} = 4 v_m^3`.
pub fn witness_laurent_nonsolvable(u: &LaurentPoly, steps: usize) -> Result<MatrixReport, MatrixError> {
    let field = u.field();
    need_char(field, false)?;
    if u.is_zero() {
        return Err(MatrixError::Precondition("u = 0".into()));
    }
    if u.involute() != -u {
        return Err(MatrixError::Precondition(format!("{u} is not skew")));
    }
    let mut report = MatrixReport::new("prop3d", &[("u", u.to_string()), ("steps", steps.to_string())]);
    let zero = LaurentPoly::zero(field);
    let k = |n: i64| LaurentPoly::constant(field.from_i64(n));
    let mut v = u.clone();
    let mut am = laurent_mat(field, [[zero.clone(), u.clone()], [u.clone(), zero.clone()]]);
    let mut bm = laurent_mat(field, [[u.clone(), zero.clone()], [zero.clone(), -u]]);
    for m in 1..=steps {
        let x = am.bracket(&bm);
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let a_closed = laurent_mat(field, [[zero.clone(), v.clone()], [v.clone(), zero.clone()]]);
        let b_closed = laurent_mat(field, [[&v * &k(-sign), zero.clone()], [zero.clone(), &v * &k(sign)]]);
        let two_v2 = &(&v * &v) * &k(2);
        let x_closed = laurent_mat(
            field,
            [[zero.clone(), &two_v2 * &k(sign)], [&two_v2 * &k(-sign), zero.clone()]],
        );
        if am != a_closed {
            report.failures.push(format!("step {m}: A_m differs from closed form"));
        }
        if bm != b_closed {
            report.failures.push(format!("step {m}: B_m differs from closed form"));
        }
        if x != x_closed {
            report.failures.push(format!("step {m}: X_m differs from closed form"));
        }
        if x.is_zero() {
            report.failures.push(format!("step {m}: X_m = 0"));
        }
        if v.involute() != -&v || v.is_zero() {
            report.failures.push(format!("step {m}: v_m is zero or not skew"));
        }
        for (name, mat) in [("A", &am), ("B", &bm), ("X", &x)] {
            if !mat.is_skew() {
                report.failures.push(format!("step {m}: {name}_m not skew"));
            }
        }
        report.steps_checked = m;
        if m == steps {
            report.notes.push(format!("v_{m} has {} terms", v.len()));
            break;
        }
        let next_a = x.bracket(&bm);
        let next_b = x.bracket(&am);
        am = next_a;
        bm = next_b;
        v = &(&v * &v) * &(&v * &k(4));
    }
    Ok(report)
}

/// Entries of a skew `2×2` matrix `[[a, b], [-b♮, c]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Skew2 {
    pub a: LaurentPoly,
    pub b: LaurentPoly,
    pub c: LaurentPoly,
}

impl Skew2 {
    pub fn matrix(&self) -> Matrix<LaurentPoly> {
        let f = self.a.field();
        laurent_mat(
            f,
            [[self.a.clone(), self.b.clone()], [-&self.b.involute(), self.c.clone()]],
        )
    }
}

fn random_laurent(rng: &mut ChaCha8Rng, field: FieldSpec, bound: i64) -> LaurentPoly {
    let p = match field {
        FieldSpec::Prime(p) => p,
        FieldSpec::Rational => 7,
    };
    LaurentPoly::from_terms(
        field,
        (-bound..=bound).map(|e| (e, field.from_i64(rng.gen_range(0..p) as i64))),
    )
}

/// Random skew `2×2` matrix: diagonal entries `f - f♮`, off-diagonal free.
pub fn random_skew2(rng: &mut ChaCha8Rng, field: FieldSpec, bound: i64) -> Skew2 {
    let skew = |rng: &mut ChaCha8Rng| {
        let f = random_laurent(rng, field, bound);
        &f - &f.involute()
    };
    let a = skew(rng);
    let c = skew(rng);
    let b = random_laurent(rng, field, bound);
    Skew2 { a, b, c }
}

/// `r = b♮v - bv♮` and `s = v(a - c) + b(w - u)` for `X = [A, B]` with
/// `A = [[a,b],[-b♮,c]]`, `B = [[u,v],[-v♮,w]]`.
pub fn bracket_rs(a: &Skew2, b: &Skew2) -> (LaurentPoly, LaurentPoly) {
    let r = &(&a.b.involute() * &b.b) - &(&a.b * &b.b.involute());
    let s = &(&b.b * &(&a.a - &a.c)) + &(&a.b * &(&b.c - &b.a));
    (r, s)
}

/// `s_2 s_1♮ - s_1 s_2♮` expanded in the entries of the four matrices.
pub fn diagonal_expansion(a1: &Skew2, b1: &Skew2, a2: &Skew2, b2: &Skew2) -> LaurentPoly {
    let conj = |p: &LaurentPoly| p.involute();
    let (v1, v2) = (&b1.b, &b2.b);
    let (bb1, bb2) = (&a1.b, &a2.b);
    let d1 = &a1.a - &a1.c;
    let d2 = &a2.a - &a2.c;
    let t1 = &(&(v2 * &conj(v1)) - &(v1 * &conj(v2))) * &(&d1 * &(-&d2));
    let t2 = &(&(v2 * &conj(bb1)) - &(bb1 * &conj(v2))) * &(&d2 * &(&b1.a - &b1.c));
    let t3 = &(&(v1 * &conj(bb2)) - &(bb2 * &conj(v1))) * &(&(&b2.c - &b2.a) * &d1);
    let t4 = &(&(bb1 * &conj(bb2)) - &(bb2 * &conj(bb1))) * &(&(&b1.a - &b1.c) * &(&b2.a - &b2.c));
    &(&t1 + &t2) + &(&t3 + &t4)
}

/// Checks one sample of four skew pairs; returns failure descriptions.
pub fn check_index3_sample(pairs: &[(Skew2, Skew2); 4]) -> Vec<String> {
    let mut failures = Vec::new();
    let field = pairs[0].0.a.field();
    let two = LaurentPoly::constant(field.from_i64(2));
    let mut xs = Vec::new();
    let mut rs = Vec::new();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let x = a.matrix().bracket(&b.matrix());
        let (r, s) = bracket_rs(a, b);
        let closed = laurent_mat(field, [[r.clone(), s.clone()], [-&s.involute(), -&r]]);
        if x != closed {
            failures.push(format!("X{} does not match its r/s form", i + 1));
        }
        xs.push(x);
        rs.push((r, s));
    }
    let x12 = xs[0].bracket(&xs[1]);
    let (r1, s1) = &rs[0];
    let (r2, s2) = &rs[1];
    let diag11 = &(s2 * &s1.involute()) - &(s1 * &s2.involute());
    let diag22 = &(&s2.involute() * s1) - &(&s1.involute() * s2);
    let lower = &two * &(&(r1 * &s2.involute()) - &(&s1.involute() * r2));
    let upper = &two * &(&(r1 * s2) - &(r2 * s1));
    let closed = laurent_mat(field, [[diag11.clone(), upper], [lower, diag22]]);
    if x12 != closed {
        failures.push("[X1,X2] does not match its closed form".into());
    }
    if diag11 != diagonal_expansion(&pairs[0].0, &pairs[0].1, &pairs[1].0, &pairs[1].1) {
        failures.push("diagonal entry of [X1,X2] does not match its expansion".into());
    }
    let x34 = xs[2].bracket(&xs[3]);
    if !x12.bracket(&x34).is_zero() {
        failures.push("[[X1,X2],[X3,X4]] != 0".into());
    }
    failures
}

/// Seeded random check that `K^(3) = 0` in `M_2(K[x,x^-1])` over a field
/// of characteristic 2. Sample `i` draws from stream `i` of the seed.
pub fn char2_laurent_index3_check(
    field: FieldSpec,
    samples: usize,
    bound: usize,
    seed: u64,
) -> Result<MatrixReport, MatrixError> {
    need_char(field, true)?;
    let mut report = MatrixReport::new(
        "prop3c-upper",
        &[
            ("field", field.to_string()),
            ("samples", samples.to_string()),
            ("bound", bound.to_string()),
            ("seed", seed.to_string()),
        ],
    );
    let results: Vec<Vec<String>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let pairs: [(Skew2, Skew2); 4] = std::array::from_fn(|_| {
                let a = random_skew2(&mut rng, field, bound as i64);
                let b = random_skew2(&mut rng, field, bound as i64);
                (a, b)
            });
            check_index3_sample(&pairs)
        })
        .collect();
    for (i, fs) in results.into_iter().enumerate() {
        report
            .failures
            .extend(fs.into_iter().map(|f| format!("sample {i}: {f}")));
    }
    report.steps_checked = samples;
    report
        .notes
        .push("lower-left entry of [X1,X2] is read as 2(r1 s2♮ - s1♮ r2)".into());
    Ok(report)
}

/// The sharpness choice `a_i = c_i = 0`, `b_1 = 1`, `b_2 = x`, `u_i = 1`,
/// `w_i = 0`, `v_i = 0`, for which `[X_1, X_2] ≠ 0`.
pub fn sharpness_pairs(field: FieldSpec) -> [(Skew2, Skew2); 2] {
    let zero = LaurentPoly::zero(field);
    let one = LaurentPoly::constant(field.one());
    let a = |b: LaurentPoly| Skew2 {
        a: zero.clone(),
        b,
        c: zero.clone(),
    };
    let b = Skew2 {
        a: one.clone(),
        b: zero.clone(),
        c: zero.clone(),
    };
    [(a(one.clone()), b.clone()), (a(LaurentPoly::x(field)), b)]
}

pub fn char2_laurent_sharpness(field: FieldSpec) -> Result<(MatrixReport, Matrix<LaurentPoly>), MatrixError> {
    need_char(field, true)?;
    let mut report = MatrixReport::new("prop3c-sharp", &[("field", field.to_string())]);
    let [(a1, b1), (a2, b2)] = sharpness_pairs(field);
    for (name, s) in [("A1", &a1), ("B1", &b1), ("A2", &a2), ("B2", &b2)] {
        if !s.matrix().is_skew() {
            report.failures.push(format!("{name} is not skew"));
        }
    }
    let x1 = a1.matrix().bracket(&b1.matrix());
    let x2 = a2.matrix().bracket(&b2.matrix());
    let x12 = x1.bracket(&x2);
    if x12.is_zero() {
        report.failures.push("[X1,X2] = 0".into());
    }
    let expected = &(&a2.b.involute() - &a2.b) * &(&b1.a * &b1.a);
    if *x12.get(1, 1) != expected {
        report.failures.push(format!(
            "[X1,X2] has (1,1) entry {}, expected {expected}",
            x12.get(1, 1)
        ));
    }
    report.steps_checked = 1;
    report.notes.push(format!("[X1,X2] = {x12}"));
    Ok((report, x12))
}

fn series_of<A: Algebra>(
    alg: &A,
    gens: Vec<SparseVec<A::Key>>,
    kind: SeriesKind,
    opts: SeriesOptions,
) -> SeriesRun<A::Key> {
    run_series(alg, Subspace::from_vectors(alg.field(), gens), kind, opts)
}

/// Derived and lower central series of skew matrices in `M_n(K)`.
pub fn corollary_field(field: FieldSpec, n: usize, depth: usize) -> MatrixReport {
    let alg = MatrixAlgebra {
        n,
        field,
        laurent: false,
    };
    let gens: Vec<_> = skew_field_basis(field, n)
        .iter()
        .map(MatrixAlgebra::field_to_sparse)
        .collect();
    let opts = SeriesOptions {
        max_depth: depth,
        max_rows: None,
    };
    let derived = series_of(&alg, gens.clone(), SeriesKind::Derived, opts);
    let lower = series_of(&alg, gens, SeriesKind::LowerCentral, opts);
    let mut report = MatrixReport::new(
        "cor-field",
        &[
            ("field", field.to_string()),
            ("n", n.to_string()),
            ("depth", depth.to_string()),
        ],
    );
    report.steps_checked = depth;
    report.notes.push(format!("derived dims {:?}", derived.dims));
    report.notes.push(format!("lower central dims {:?}", lower.dims));
    let char2 = field.characteristic() == 2;
    let expect_derived = match (n, char2) {
        (1, _) => Some(if char2 { 1 } else { 0 }),
        (2, false) => Some(1),
        (2, true) => Some(2),
        _ => None,
    };
    if derived.vanished_at != expect_derived {
        report.failures.push(format!(
            "derived series vanishes at {:?}, expected {:?}",
            derived.vanished_at, expect_derived
        ));
    }
    let expect_nilpotent = n == 1 || (n == 2 && !char2);
    if lower.vanished_at.is_some() != expect_nilpotent {
        report.failures.push(format!(
            "lower central series vanishes at {:?}, expected {}",
            lower.vanished_at,
            if expect_nilpotent {
                "vanishing"
            } else {
                "never vanishing"
            }
        ));
    }
    report
}

/// Derived and lower central series of skew matrices in `M_2(K[x,x^-1])`
/// with entries truncated to exponents in `[-bound, bound]`. Nonzero terms
/// are proofs; vanishing is evidence.
pub fn corollary_laurent(field: FieldSpec, bound: usize, depth: usize, max_rows: Option<usize>) -> MatrixReport {
    let alg = MatrixAlgebra {
        n: 2,
        field,
        laurent: true,
    };
    let gens: Vec<_> = skew_laurent_basis(field, 2, bound)
        .iter()
        .map(MatrixAlgebra::laurent_to_sparse)
        .collect();
    let opts = SeriesOptions {
        max_depth: depth,
        max_rows,
    };
    let derived = series_of(&alg, gens.clone(), SeriesKind::Derived, opts);
    let lower = series_of(&alg, gens, SeriesKind::LowerCentral, opts);
    let mut report = MatrixReport::new(
        "cor-laurent",
        &[
            ("field", field.to_string()),
            ("bound", bound.to_string()),
            ("depth", depth.to_string()),
        ],
    );
    report.steps_checked = depth;
    report.notes.push(format!("derived dims {:?}", derived.dims));
    report.notes.push(format!("lower central dims {:?}", lower.dims));
    if derived.capped || lower.capped {
        report
            .notes
            .push(format!("row cap {} reached", max_rows.unwrap_or_default()));
    }
    if field.characteristic() == 2 {
        if derived.vanished_at != Some(3) {
            report.failures.push(format!(
                "derived series vanishes at {:?}, expected 3",
                derived.vanished_at
            ));
        }
    } else if derived.vanished_at.is_some() {
        report.failures.push(format!(
            "derived series vanishes at {:?}, expected never",
            derived.vanished_at
        ));
    }
    if lower.vanished_at.is_some() {
        report
            .failures
            .push(format!("lower central series vanishes at {:?}", lower.vanished_at));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> FieldElem {
        FieldSpec::Rational.from_i64(n)
    }

    #[test]
    fn involution_examples() {
        let f = FieldSpec::Rational;
        let m = Matrix::from_rows(f, vec![vec![q(1), q(2)], vec![q(3), q(4)]]);
        assert_eq!(
            mat_involution(&m),
            Matrix::from_rows(f, vec![vec![q(1), q(3)], vec![q(2), q(4)]])
        );
        let x = LaurentPoly::x(f);
        let z = LaurentPoly::zero(f);
        let lm = laurent_mat(f, [[x.clone(), z.clone()], [z.clone(), z.clone()]]);
        assert_eq!(*mat_involution(&lm).get(1, 1), x.involute());
    }

    #[test]
    fn skew_basis_examples() {
        assert_eq!(skew_field_basis(FieldSpec::Rational, 2).len(), 1);
        let f2 = skew_field_basis(FieldSpec::Prime(2), 2);
        assert_eq!(f2.len(), 3);
        assert!(f2.iter().all(Matrix::is_skew));
        let f = FieldSpec::Rational;
        let lb = skew_laurent_basis(f, 2, 1);
        let x = LaurentPoly::x(f);
        let mut d = Matrix::zero(2, f);
        d.set(1, 1, &x - &x.involute());
        assert!(lb.contains(&d));
        assert!(lb.iter().all(Matrix::is_skew));
    }

    #[test]
    fn nge3_examples() {
        let f = FieldSpec::Rational;
        let e = |i, j| Matrix::<FieldElem>::unit(3, f, i, j);
        let x1 = nge3_x(f, 3, &q(1), &q(1), &q(1), 1);
        assert_eq!(x1, e(1, 3).sub(&e(3, 1)).sub(&e(1, 2).sub(&e(2, 1))));
        let x2 = nge3_x(f, 3, &q(1), &q(1), &q(1), 2);
        assert_eq!(
            x2,
            e(1, 2)
                .sub(&e(2, 1))
                .scale(&q(2))
                .sub(&e(1, 3).sub(&e(3, 1)).scale(&q(2)))
        );
        let r = witness_nge3(f, 3, &q(1), &q(1), &q(1), 6).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(witness_nge3(f, 3, &q(1), &q(1), &q(0), 2).is_err());
        assert!(witness_nge3(
            FieldSpec::Prime(5),
            3,
            &FieldSpec::Prime(5).from_i64(1),
            &FieldSpec::Prime(5).from_i64(2),
            &FieldSpec::Prime(5).from_i64(1),
            2
        )
        .is_err());
    }

    #[test]
    fn nilpotent_char2_examples() {
        let r = witness_nilpotent_char2(FieldSpec::Prime(2), 1).unwrap();
        assert!(r.passed());
        assert!(matches!(
            witness_nilpotent_char2(FieldSpec::Prime(3), 1),
            Err(MatrixError::WrongCharacteristic { .. })
        ));
    }

    #[test]
    fn laurent_nonsolvable_first_step() {
        let f = FieldSpec::Rational;
        let x = LaurentPoly::x(f);
        let u = &x - &x.involute();
        let r = witness_laurent_nonsolvable(&u, 3).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert!(witness_laurent_nonsolvable(&LaurentPoly::zero(f), 1).is_err());
        assert!(witness_laurent_nonsolvable(&x, 1).is_err());
    }

    #[test]
    fn zero_tuple_brackets_vanish() {
        let f = FieldSpec::Prime(2);
        let z = LaurentPoly::zero(f);
        let s = Skew2 {
            a: z.clone(),
            b: z.clone(),
            c: z,
        };
        let pairs: [(Skew2, Skew2); 4] = std::array::from_fn(|_| (s.clone(), s.clone()));
        assert!(check_index3_sample(&pairs).is_empty());
        assert!(s.matrix().bracket(&s.matrix()).is_zero());
    }

    #[test]
    fn sharpness_entry() {
        let f = FieldSpec::Prime(2);
        let (r, x12) = char2_laurent_sharpness(f).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let x = LaurentPoly::x(f);
        assert_eq!(*x12.get(1, 1), &x + &x.involute());
    }

    #[test]
    fn matrix_algebra_mul_matches_dense() {
        let f = FieldSpec::Prime(3);
        let alg = MatrixAlgebra {
            n: 2,
            field: f,
            laurent: true,
        };
        let basis = skew_laurent_basis(f, 2, 1);
        for a in &basis {
            for b in &basis {
                let dense = MatrixAlgebra::laurent_to_sparse(&a.mul(b));
                let sparse = alg.mul(
                    &MatrixAlgebra::laurent_to_sparse(a),
                    &MatrixAlgebra::laurent_to_sparse(b),
                );
                assert_eq!(dense, sparse);
            }
        }
    }
}
