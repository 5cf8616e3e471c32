//! Leavitt path algebras: normal-form monomials `λν*`, multiplication via
//! the Cuntz-Krieger relations, the standard involution, and the skew and
//! symmetric generator sets.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::{EdgeIdx, Graph, VertexIdx};
use crate::linalg::{add_scaled, add_term, scaled, SparseVec};
use crate::scalar::{FieldElem, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpaError {
    #[error("elements belong to different algebras")]
    ContextMismatch,
    #[error("malformed path pair: {0}")]
    MalformedPathPair(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Path = SmallVec<[EdgeIdx; 8]>;

/// A real-path pair `λν*` with `r(λ) = r(ν) = anchor`. Empty paths stand
/// for the anchor vertex, so `(∅, ∅, v)` is the vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub lambda: Path,
    pub nu: Path,
    pub anchor: VertexIdx,
}

impl Monomial {
    pub fn vertex(v: VertexIdx) -> Self {
        Monomial {
            lambda: Path::new(),
            nu: Path::new(),
            anchor: v,
        }
    }

    pub fn weight(&self) -> usize {
        self.lambda.len() + self.nu.len()
    }

    pub fn star(&self) -> Monomial {
        Monomial {
            lambda: self.nu.clone(),
            nu: self.lambda.clone(),
            anchor: self.anchor,
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.lambda == self.nu
    }
}

/// Weight first, then longer real part first, then edge sequences
/// lexicographically, then anchor.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.lambda.len().cmp(&self.lambda.len()))
            .then_with(|| self.lambda.cmp(&other.lambda))
            .then_with(|| self.nu.cmp(&other.nu))
            .then_with(|| self.anchor.cmp(&other.anchor))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type Terms = SparseVec<Monomial>;

/// `L_K(E)` for a validated graph and a coefficient field. Relation (CK2) is
/// applied only at regular vertices; flagged infinite emitters are exempt.
#[derive(Debug, PartialEq, Eq)]
pub struct LeavittAlgebra {
    graph: Graph,
    field: FieldSpec,
}

impl LeavittAlgebra {
    pub fn new(graph: Graph, field: FieldSpec) -> Arc<Self> {
        Arc::new(LeavittAlgebra { graph, field })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    fn src(&self, e: EdgeIdx) -> VertexIdx {
        self.graph.edge(e).src
    }

    fn dst(&self, e: EdgeIdx) -> VertexIdx {
        self.graph.edge(e).dst
    }

    fn is_path(&self, p: &[EdgeIdx]) -> bool {
        p.iter().all(|&e| e < self.graph.edge_count()) && p.windows(2).all(|w| self.dst(w[0]) == self.src(w[1]))
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<(), LpaError> {
        if m.anchor >= self.graph.vertex_count() {
            return Err(LpaError::MalformedPathPair(format!("unknown anchor {}", m.anchor)));
        }
        for p in [&m.lambda, &m.nu] {
            if !self.is_path(p) {
                return Err(LpaError::MalformedPathPair(format!("{p:?} is not a path")));
            }
            if let Some(&last) = p.last() {
                if self.dst(last) != m.anchor {
                    return Err(LpaError::MalformedPathPair(format!(
                        "path {p:?} does not end at anchor {}",
                        m.anchor
                    )));
                }
            }
        }
        Ok(())
    }

    /// False exactly for monomials of the excluded shape `λ' e e* ν'*` where
    /// `e` is the last edge out of the regular vertex `s(e)`.
    pub fn is_basis(&self, m: &Monomial) -> bool {
        match (m.lambda.last(), m.nu.last()) {
            (Some(&a), Some(&b)) if a == b => self.graph.last_out_edge(self.src(a)) != Some(a),
            _ => true,
        }
    }

    /// Rewrites arbitrary path-pair terms into the monomial basis.
    ///
    /// Each excluded monomial `λ'e e*ν'*` becomes `λ'ν'* - Σ_{f≠e} λ'f f*ν'*`
    /// by (CK2) at `s(e)`. The `f`-terms end in a non-last edge so they are
    /// basis monomials; only the strictly shorter `λ'ν'*` is revisited, so
    /// the loop terminates.
    pub fn normal_form_terms(&self, raw: impl IntoIterator<Item = (Monomial, FieldElem)>) -> Terms {
        let mut out = Terms::new();
        for (m, c) in raw {
            self.push_normal(&mut out, m, c);
        }
        out
    }

    fn push_normal(&self, out: &mut Terms, mut m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        loop {
            if self.is_basis(&m) {
                add_term(out, m, c);
                return;
            }
            let e = m.lambda.pop().expect("excluded monomial has an edge");
            m.nu.pop();
            let v = self.src(e);
            m.anchor = v;
            let neg = -&c;
            for &f in self.graph.out_edges(v) {
                if f == e {
                    continue;
                }
                let mut lambda = m.lambda.clone();
                lambda.push(f);
                let mut nu = m.nu.clone();
                nu.push(f);
                add_term(
                    out,
                    Monomial {
                        lambda,
                        nu,
                        anchor: self.dst(f),
                    },
                    neg.clone(),
                );
            }
        }
    }

    /// Product of two path pairs before normalization.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let right_a = a.nu.first().map_or(a.anchor, |&e| self.src(e));
        let left_b = b.lambda.first().map_or(b.anchor, |&e| self.src(e));
        if right_a != left_b {
            return None;
        }
        let (mu, sigma) = (&a.nu, &b.lambda);
        if sigma.starts_with(mu) {
            let mut lambda = a.lambda.clone();
            lambda.extend_from_slice(&sigma[mu.len()..]);
            Some(Monomial {
                lambda,
                nu: b.nu.clone(),
                anchor: b.anchor,
            })
        } else if mu.starts_with(sigma) {
            let mut nu = b.nu.clone();
            nu.extend_from_slice(&mu[sigma.len()..]);
            Some(Monomial {
                lambda: a.lambda.clone(),
                nu,
                anchor: a.anchor,
            })
        } else {
            None
        }
    }

    pub fn mul_terms(&self, x: &Terms, y: &Terms) -> Terms {
        let mut out = Terms::new();
        for (a, ca) in x {
            for (b, cb) in y {
                if let Some(m) = self.mul_monomials(a, b) {
                    self.push_normal(&mut out, m, ca * cb);
                }
            }
        }
        out
    }

    pub fn involute_terms(&self, x: &Terms) -> Terms {
        x.iter().map(|(m, c)| (m.star(), c.clone())).collect()
    }

    /// Basis monomials of weight at most `bound`, in monomial order.
    pub fn basis_monomials(&self, bound: usize) -> Vec<Monomial> {
        self.basis_levels(bound).flatten().collect()
    }

    /// Basis monomials grouped by weight `0..=bound`, each group sorted.
    pub fn basis_levels(&self, bound: usize) -> BasisLevels<'_> {
        let n = self.graph.vertex_count();
        // ending[x][k]: paths of length k ending at x
        let mut ending: Vec<Vec<Vec<Path>>> = vec![vec![vec![Path::new()]]; n];
        for k in 1..=bound {
            for x in 0..n {
                let mut level = Vec::new();
                for &e in self.graph.in_edges(x) {
                    for p in &ending[self.src(e)][k - 1] {
                        let mut q = p.clone();
                        q.push(e);
                        level.push(q);
                    }
                }
                ending[x].push(level);
            }
        }
        BasisLevels {
            alg: self,
            ending,
            next: 0,
            bound,
        }
    }

    /// Length of the longest materialized path, or `None` if there is a cycle.
    pub fn longest_path(&self) -> Option<usize> {
        if !self.graph.is_acyclic() {
            return None;
        }
        let n = self.graph.vertex_count();
        let mut memo: Vec<Option<usize>> = vec![None; n];
        fn depth(g: &Graph, v: VertexIdx, memo: &mut [Option<usize>]) -> usize {
            if let Some(d) = memo[v] {
                return d;
            }
            let d = g
                .out_edges(v)
                .iter()
                .map(|&e| 1 + depth(g, g.edge(e).dst, memo))
                .max()
                .unwrap_or(0);
            memo[v] = Some(d);
            d
        }
        Some((0..n).map(|v| depth(&self.graph, v, &mut memo)).max().unwrap_or(0))
    }

    /// The whole monomial basis when the algebra is finite dimensional.
    pub fn full_basis(&self) -> Option<Vec<Monomial>> {
        self.longest_path().map(|l| self.basis_monomials(2 * l))
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        if m.lambda.is_empty() && m.nu.is_empty() {
            return self.graph.vertex(m.anchor).id.clone();
        }
        let mut parts: Vec<String> = m.lambda.iter().map(|&e| self.graph.edge(e).id.clone()).collect();
        parts.extend(m.nu.iter().rev().map(|&e| format!("{}'", self.graph.edge(e).id)));
        parts.join("·")
    }

    pub fn render_terms(&self, t: &Terms) -> String {
        if t.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in t.iter().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            s.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            if !mag.is_one() {
                s.push_str(&format!("{mag}·"));
            }
            s.push_str(&self.render_monomial(m));
        }
        s
    }
}

pub struct BasisLevels<'a> {
    alg: &'a LeavittAlgebra,
    ending: Vec<Vec<Vec<Path>>>,
    next: usize,
    bound: usize,
}

impl Iterator for BasisLevels<'_> {
    type Item = Vec<Monomial>;

    fn next(&mut self) -> Option<Vec<Monomial>> {
        if self.next > self.bound {
            return None;
        }
        let w = self.next;
        self.next += 1;
        let mut out = Vec::new();
        for (x, by_len) in self.ending.iter().enumerate() {
            for a in 0..=w {
                for lambda in &by_len[a] {
                    for nu in &by_len[w - a] {
                        let m = Monomial {
                            lambda: lambda.clone(),
                            nu: nu.clone(),
                            anchor: x,
                        };
                        if self.alg.is_basis(&m) {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out.sort();
        Some(out)
    }
}

/// An element of a [`LeavittAlgebra`] in normal form.
#[derive(Clone, Debug)]
pub struct Element {
    alg: Arc<LeavittAlgebra>,
    terms: Terms,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl Eq for Element {}

fn same_context(a: &Arc<LeavittAlgebra>, b: &Arc<LeavittAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Constructors bound to an algebra handle.
pub trait AlgebraHandle {
    fn zero(&self) -> Element;
    fn vertex(&self, v: VertexIdx) -> Element;
    fn edge(&self, e: EdgeIdx) -> Element;
    fn ghost(&self, e: EdgeIdx) -> Element;
    fn scalar_vertex_sum(&self, c: FieldElem) -> Element;
    fn monomial(&self, m: Monomial) -> Result<Element, LpaError>;
    fn normal_form(&self, raw: Vec<(Monomial, FieldElem)>) -> Result<Element, LpaError>;
    fn from_terms(&self, terms: Terms) -> Element;
    fn vertex_named(&self, id: &str) -> Option<Element>;
    fn edge_named(&self, id: &str) -> Option<Element>;
    fn ghost_named(&self, id: &str) -> Option<Element>;
}

impl AlgebraHandle for Arc<LeavittAlgebra> {
    fn zero(&self) -> Element {
        self.from_terms(Terms::new())
    }

    fn vertex(&self, v: VertexIdx) -> Element {
        self.from_terms(Terms::from([(Monomial::vertex(v), self.field.one())]))
    }

    fn edge(&self, e: EdgeIdx) -> Element {
        let m = Monomial {
            lambda: Path::from_slice(&[e]),
            nu: Path::new(),
            anchor: self.dst(e),
        };
        self.from_terms(Terms::from([(m, self.field.one())]))
    }

    fn ghost(&self, e: EdgeIdx) -> Element {
        let m = Monomial {
            lambda: Path::new(),
            nu: Path::from_slice(&[e]),
            anchor: self.dst(e),
        };
        self.from_terms(Terms::from([(m, self.field.one())]))
    }

    /// `c` times the sum of all vertices (a unit when the graph is finite).
    fn scalar_vertex_sum(&self, c: FieldElem) -> Element {
        let terms = (0..self.graph.vertex_count())
            .map(|v| (Monomial::vertex(v), c.clone()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        self.from_terms(terms)
    }

    fn monomial(&self, m: Monomial) -> Result<Element, LpaError> {
        let one = self.field.one();
        self.normal_form(vec![(m, one)])
    }

    fn normal_form(&self, raw: Vec<(Monomial, FieldElem)>) -> Result<Element, LpaError> {
        for (m, c) in &raw {
            self.check_monomial(m)?;
            if c.field() != self.field {
                return Err(LpaError::ContextMismatch);
            }
        }
        Ok(self.from_terms(self.normal_form_terms(raw)))
    }

    fn from_terms(&self, terms: Terms) -> Element {
        Element {
            alg: Arc::clone(self),
            terms,
        }
    }

    fn vertex_named(&self, id: &str) -> Option<Element> {
        self.graph.vertex_index(id).map(|v| self.vertex(v))
    }

    fn edge_named(&self, id: &str) -> Option<Element> {
        self.graph.edge_index(id).map(|e| self.edge(e))
    }

    fn ghost_named(&self, id: &str) -> Option<Element> {
        self.graph.edge_index(id).map(|e| self.ghost(e))
    }
}

impl Element {
    pub fn algebra(&self) -> &Arc<LeavittAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.alg.field.zero())
    }

    fn check(&self, other: &Element) -> Result<(), LpaError> {
        if same_context(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(LpaError::ContextMismatch)
        }
    }

    fn with_terms(&self, terms: Terms) -> Element {
        Element {
            alg: Arc::clone(&self.alg),
            terms,
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, LpaError> {
        self.check(other)?;
        let mut t = self.terms.clone();
        add_scaled(&mut t, &other.terms, &self.alg.field.one());
        Ok(self.with_terms(t))
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element, LpaError> {
        self.check(other)?;
        let mut t = self.terms.clone();
        add_scaled(&mut t, &other.terms, &self.alg.field.from_i64(-1));
        Ok(self.with_terms(t))
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element, LpaError> {
        self.check(other)?;
        Ok(self.with_terms(self.alg.mul_terms(&self.terms, &other.terms)))
    }

    pub fn scale(&self, c: &FieldElem) -> Element {
        self.with_terms(scaled(&self.terms, c))
    }

    /// The standard involution: `(λν*)* = νλ*`, coefficients fixed.
    pub fn involute(&self) -> Element {
        self.with_terms(self.alg.involute_terms(&self.terms))
    }

    /// `xy - yx`
    pub fn bracket(&self, other: &Element) -> Result<Element, LpaError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// `xy + yx`
    pub fn circle(&self, other: &Element) -> Result<Element, LpaError> {
        self.try_mul(other)?.try_add(&other.try_mul(self)?)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alg.render_terms(&self.terms))
    }
}

macro_rules! element_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a Element> for &'a Element {
            type Output = Element;
            fn $m(self, rhs: &'a Element) -> Element {
                self.$checked(rhs).expect("operands from the same algebra")
            }
        }
    };
}
element_op!(Add, add, try_add);
element_op!(Sub, sub, try_sub);
element_op!(Mul, mul, try_mul);

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&self.alg.field.from_i64(-1))
    }
}

/// Spanning set of the skew elements (`x* = -x`) among basis monomials of
/// weight at most `bound`.
pub fn skew_generators(alg: &Arc<LeavittAlgebra>, bound: usize) -> Vec<Element> {
    involution_generators(alg, &alg.basis_monomials(bound), -1)
}

/// Spanning set of the symmetric elements (`x* = x`) among basis monomials
/// of weight at most `bound`.
pub fn symmetric_generators(alg: &Arc<LeavittAlgebra>, bound: usize) -> Vec<Element> {
    involution_generators(alg, &alg.basis_monomials(bound), 1)
}

/// `b + sign·b*` for each pair `b < b*`, plus the fixed monomials when they
/// qualify (`sign = 1`, or characteristic 2 where `-1 = 1`).
pub fn involution_generators(alg: &Arc<LeavittAlgebra>, basis: &[Monomial], sign: i64) -> Vec<Element> {
    let f = alg.field();
    let s = f.from_i64(sign);
    let fixed_allowed = s.is_one();
    let mut out = Vec::new();
    for b in basis {
        let bs = b.star();
        match b.cmp(&bs) {
            Ordering::Equal if fixed_allowed => {
                out.push(alg.from_terms(Terms::from([(b.clone(), f.one())])));
            }
            Ordering::Less => {
                let mut t = Terms::new();
                add_term(&mut t, b.clone(), f.one());
                add_term(&mut t, bs, s.clone());
                out.push(alg.from_terms(t));
            }
            _ => {}
        }
    }
    out
}

/// Outcome of checking a family `u_ij` against the matrix-unit relations.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct MatrixUnitReport {
    pub n: usize,
    pub products_checked: usize,
    pub failures: Vec<String>,
}

impl MatrixUnitReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `u_ij u_kl = δ_jk u_il`, that `Σ u_ii` is idempotent, and that
/// the involution sends `u_ij` to `u_ji` (compatibility with transpose).
pub fn verify_matrix_units(units: &BTreeMap<(usize, usize), Element>) -> MatrixUnitReport {
    let n = units.keys().map(|&(i, j)| i.max(j)).max().unwrap_or(0);
    let mut failures = Vec::new();
    let mut checked = 0;
    let Some(any) = units.values().next() else {
        return MatrixUnitReport {
            n,
            products_checked: 0,
            failures,
        };
    };
    let alg = Arc::clone(any.algebra());
    let get = |i: usize, j: usize| units.get(&(i, j)).cloned().unwrap_or_else(|| alg.zero());
    for i in 1..=n {
        for j in 1..=n {
            if !units.contains_key(&(i, j)) {
                failures.push(format!("u{i}{j} missing"));
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            let uij = get(i, j);
            for k in 1..=n {
                for l in 1..=n {
                    checked += 1;
                    let prod = match uij.try_mul(&get(k, l)) {
                        Ok(p) => p,
                        Err(e) => {
                            failures.push(format!("u{i}{j}·u{k}{l}: {e}"));
                            continue;
                        }
                    };
                    let expected = if j == k { get(i, l) } else { alg.zero() };
                    if prod != expected {
                        failures.push(format!(
                            "u{i}{j}·u{k}{l} = {prod}, expected {}",
                            if j == k { format!("u{i}{l}") } else { "0".into() }
                        ));
                    }
                }
            }
        }
    }
    let mut sum = alg.zero();
    for i in 1..=n {
        sum = &sum + &get(i, i);
    }
    if sum.is_zero() || &sum * &sum != sum {
        failures.push(format!("Σ u_ii = {sum} is not a nonzero idempotent"));
    }
    for i in 1..=n {
        for j in 1..=n {
            if get(i, j).involute() != get(j, i) {
                failures.push(format!("(u{i}{j})* != u{j}{i}"));
            }
        }
    }
    MatrixUnitReport {
        n,
        products_checked: checked,
        failures,
    }
}
