//! Products of subspaces and the derived, lower central and Jordan series,
//! together with the solvability probe over a path algebra.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::{add_scaled, SparseVec, Subspace};
use crate::lpa::{involution_generators, Element, LeavittAlgebra, LpaError, Monomial};
use crate::scalar::FieldSpec;

/// An associative algebra over an exact field with a fixed ordered basis.
pub trait Algebra: Sync {
    type Key: Ord + Clone + Send + Sync + fmt::Debug;

    fn field(&self) -> FieldSpec;
    fn mul(&self, x: &SparseVec<Self::Key>, y: &SparseVec<Self::Key>) -> SparseVec<Self::Key>;
    fn render(&self, x: &SparseVec<Self::Key>) -> String;
}

impl Algebra for LeavittAlgebra {
    type Key = Monomial;

    fn field(&self) -> FieldSpec {
        LeavittAlgebra::field(self)
    }

    fn mul(&self, x: &SparseVec<Monomial>, y: &SparseVec<Monomial>) -> SparseVec<Monomial> {
        self.mul_terms(x, y)
    }

    fn render(&self, x: &SparseVec<Monomial>) -> String {
        self.render_terms(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductOp {
    /// `xy - yx`
    Bracket,
    /// `xy + yx`
    Circle,
}

pub fn apply_op<A: Algebra>(alg: &A, op: ProductOp, x: &SparseVec<A::Key>, y: &SparseVec<A::Key>) -> SparseVec<A::Key> {
    let sign = match op {
        ProductOp::Bracket => -1,
        ProductOp::Circle => 1,
    };
    let mut out = alg.mul(x, y);
    add_scaled(&mut out, &alg.mul(y, x), &alg.field().from_i64(sign));
    out
}

/// Canonical span of a list of path-algebra elements.
pub fn span(alg: &Arc<LeavittAlgebra>, elems: &[Element]) -> Result<Subspace<Monomial>, LpaError> {
    let mut s = Subspace::zero(alg.field());
    for x in elems {
        if **x.algebra() != **alg {
            return Err(LpaError::ContextMismatch);
        }
        s.insert(x.terms().clone());
    }
    Ok(s)
}

const CHUNK: usize = 512;

/// Span of `op(a, b)` over spanning vectors `a` of `s` and `b` of `t`.
///
/// With a row cap the pairs are taken sparsest first and the result keeps
/// only the first `cap` independent products; it is then a subspace of the
/// full product. The flag reports whether the cap cut anything off.
pub fn product_span_capped<A: Algebra>(
    alg: &A,
    s: &Subspace<A::Key>,
    t: &Subspace<A::Key>,
    op: ProductOp,
    cap: Option<usize>,
) -> (Subspace<A::Key>, bool) {
    let same = std::ptr::eq(s, t) || s == t;
    let left = s.spanning();
    let right = if same { left } else { t.spanning() };
    let mut pairs: Vec<(usize, usize)> = (0..left.len())
        .flat_map(|i| {
            let from = match (same, op) {
                (false, _) => 0,
                (true, ProductOp::Bracket) => i + 1,
                (true, ProductOp::Circle) => i,
            };
            (from..right.len()).map(move |j| (i, j))
        })
        .collect();
    if cap.is_some() {
        pairs.sort_by_key(|&(i, j)| left[i].len() * right[j].len());
    }
    let mut out = Subspace::zero(alg.field());
    let mut at = 0;
    while at < pairs.len() {
        let room = cap.map_or(CHUNK, |c| c.saturating_sub(out.dim()).clamp(16, CHUNK));
        let chunk = &pairs[at..pairs.len().min(at + room)];
        at += chunk.len();
        let products: Vec<SparseVec<A::Key>> = chunk
            .par_iter()
            .map(|&(i, j)| apply_op(alg, op, &left[i], &right[j]))
            .collect();
        for p in products {
            if cap.is_some_and(|c| out.dim() >= c) {
                return (out, true);
            }
            out.insert(p);
        }
    }
    (out, false)
}

pub fn product_span<A: Algebra>(
    alg: &A,
    s: &Subspace<A::Key>,
    t: &Subspace<A::Key>,
    op: ProductOp,
) -> Subspace<A::Key> {
    product_span_capped(alg, s, t, op, None).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Derived,
    LowerCentral,
    JordanDerived,
    JordanLower,
}

impl SeriesKind {
    pub fn op(self) -> ProductOp {
        match self {
            SeriesKind::Derived | SeriesKind::LowerCentral => ProductOp::Bracket,
            SeriesKind::JordanDerived | SeriesKind::JordanLower => ProductOp::Circle,
        }
    }

    fn is_derived(self) -> bool {
        matches!(self, SeriesKind::Derived | SeriesKind::JordanDerived)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Truncated { weight: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesOptions {
    pub max_depth: usize,
    pub max_rows: Option<usize>,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            max_depth: 8,
            max_rows: None,
        }
    }
}

/// The computed terms of a series. `steps[k]` is the k-th term for every
/// computed k; when the series stabilizes the remaining terms up to the
/// depth equal the last one and are not stored.
#[derive(Clone, Debug)]
pub struct SeriesRun<K: Ord> {
    pub kind: SeriesKind,
    pub steps: Vec<Subspace<K>>,
    pub dims: Vec<usize>,
    pub vanished_at: Option<usize>,
    pub stable_from: Option<usize>,
    pub capped: bool,
}

impl<K: Ord + Clone> SeriesRun<K> {
    /// Sparsest spanning vector of the deepest nonzero computed step.
    pub fn witness(&self) -> Option<&SparseVec<K>> {
        self.steps.iter().rev().find(|s| !s.is_zero()).and_then(|s| {
            s.spanning()
                .iter()
                .min_by_key(|r| (r.len(), r.keys().next_back().cloned()))
        })
    }
}

pub fn run_series<A: Algebra>(
    alg: &A,
    s0: Subspace<A::Key>,
    kind: SeriesKind,
    opts: SeriesOptions,
) -> SeriesRun<A::Key> {
    let op = kind.op();
    let mut run = SeriesRun {
        kind,
        dims: vec![s0.dim()],
        vanished_at: s0.is_zero().then_some(0),
        steps: vec![s0],
        stable_from: None,
        capped: false,
    };
    if run.vanished_at.is_some() {
        return run;
    }
    for k in 1..=opts.max_depth {
        let prev = &run.steps[k - 1];
        let other = if kind.is_derived() { prev } else { &run.steps[0] };
        let (next, hit) = product_span_capped(alg, prev, other, op, opts.max_rows);
        run.capped |= hit;
        run.dims.push(next.dim());
        if next.is_zero() {
            run.steps.push(next);
            run.vanished_at = Some(k);
            break;
        }
        let stable = !run.capped && next == *prev;
        run.steps.push(next);
        if stable {
            run.stable_from = Some(k - 1);
            let d = run.dims[k];
            run.dims.resize(opts.max_depth + 1, d);
            break;
        }
    }
    run
}

pub fn derived_series<A: Algebra>(
    alg: &A,
    s0: Subspace<A::Key>,
    op: ProductOp,
    opts: SeriesOptions,
) -> SeriesRun<A::Key> {
    let kind = match op {
        ProductOp::Bracket => SeriesKind::Derived,
        ProductOp::Circle => SeriesKind::JordanDerived,
    };
    run_series(alg, s0, kind, opts)
}

pub fn lower_central_series<A: Algebra>(
    alg: &A,
    s0: Subspace<A::Key>,
    op: ProductOp,
    opts: SeriesOptions,
) -> SeriesRun<A::Key> {
    let kind = match op {
        ProductOp::Bracket => SeriesKind::LowerCentral,
        ProductOp::Circle => SeriesKind::JordanLower,
    };
    run_series(alg, s0, kind, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    #[serde(flatten)]
    pub mode: Mode,
    pub dims: Vec<usize>,
    pub vanished_at: Option<usize>,
    pub witness: Option<String>,
    pub caveat: Option<String>,
    pub stable_from: Option<usize>,
    pub row_cap: Option<usize>,
}

impl SeriesReport {
    pub fn from_run<A: Algebra>(alg: &A, run: &SeriesRun<A::Key>, mode: Mode, row_cap: Option<usize>) -> Self {
        let mut caveats = Vec::new();
        if let Mode::Truncated { weight } = mode {
            caveats.push(format!(
                "generators truncated at weight {weight}: a nonzero step proves the true term is nonzero, a vanishing step is only evidence"
            ));
        }
        if run.capped {
            caveats.push(format!(
                "row cap {} reached: each step is a subspace of the true term",
                row_cap.unwrap_or_default()
            ));
        }
        if run.vanished_at.is_none() {
            if let Some(k) = run.stable_from {
                caveats.push(format!("series is constant from step {k}, so it never vanishes"));
            }
        }
        SeriesReport {
            kind: run.kind,
            mode,
            dims: run.dims.clone(),
            vanished_at: run.vanished_at,
            witness: run.witness().map(|w| alg.render(w)),
            caveat: (!caveats.is_empty()).then(|| caveats.join("; ")),
            stable_from: run.stable_from,
            row_cap: if run.capped { row_cap } else { None },
        }
    }

    pub fn nonzero_through(&self) -> usize {
        match self.vanished_at {
            Some(k) => k.saturating_sub(1),
            None => self.dims.len() - 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Structure {
    Lie,
    Jordan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeOptions {
    pub mode: Mode,
    pub max_depth: usize,
    pub max_rows: Option<usize>,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            mode: Mode::Truncated { weight: 6 },
            max_depth: 8,
            max_rows: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("exact mode needs an acyclic graph")]
    ExactOnCyclic,
}

/// Generators of `K` (Lie) or `S` (Jordan) up to the mode's weight bound.
/// With a limit, whole weight levels are added until at least `limit`
/// generators are present.
pub fn structure_generators(
    alg: &Arc<LeavittAlgebra>,
    structure: Structure,
    mode: Mode,
    limit: Option<usize>,
) -> Result<Vec<Element>, ProbeError> {
    let bound = match mode {
        Mode::Exact => alg.longest_path().ok_or(ProbeError::ExactOnCyclic)? * 2,
        Mode::Truncated { weight } => weight,
    };
    let sign = match structure {
        Structure::Lie => -1,
        Structure::Jordan => 1,
    };
    let mut gens = Vec::new();
    for level in alg.basis_levels(bound) {
        gens.extend(involution_generators(alg, &level, sign));
        if limit.is_some_and(|l| gens.len() >= l) {
            break;
        }
    }
    Ok(gens)
}

/// Derived series of `K` (bracket) or `S` (circle) for the path algebra.
pub fn probe(
    alg: &Arc<LeavittAlgebra>,
    structure: Structure,
    opts: ProbeOptions,
) -> Result<(SeriesRun<Monomial>, SeriesReport), ProbeError> {
    let cap = match opts.mode {
        Mode::Exact => None,
        Mode::Truncated { .. } => opts.max_rows,
    };
    let gens = structure_generators(alg, structure, opts.mode, cap)?;
    let mut s0 = Subspace::zero(alg.field());
    let mut capped = false;
    for g in gens {
        if cap.is_some_and(|c| s0.dim() >= c) {
            capped = true;
            break;
        }
        s0.insert(g.into_terms());
    }
    let op = match structure {
        Structure::Lie => ProductOp::Bracket,
        Structure::Jordan => ProductOp::Circle,
    };
    let series_opts = SeriesOptions {
        max_depth: opts.max_depth,
        max_rows: cap,
    };
    let mut run = derived_series(&**alg, s0, op, series_opts);
    if capped {
        run.capped = true;
        run.stable_from = None;
    }
    let mut report = SeriesReport::from_run(&**alg, &run, opts.mode, cap);
    if alg.graph().has_flagged_vertex() {
        let note = "flagged infinite emitters contribute only their materialized edges";
        report.caveat = Some(match report.caveat {
            Some(c) => format!("{c}; {note}"),
            None => note.to_string(),
        });
    }
    Ok((run, report))
}

pub fn solvability_probe(
    graph: &Graph,
    field: FieldSpec,
    structure: Structure,
    opts: ProbeOptions,
) -> Result<SeriesReport, ProbeError> {
    let alg = LeavittAlgebra::new(graph.clone(), field);
    probe(&alg, structure, opts).map(|(_, r)| r)
}

/// `X_0 = x`, `X_m = X_{m-1} ∘ x`.
pub fn jordan_power(x: &Element, m: usize) -> Result<Element, LpaError> {
    let mut acc = x.clone();
    for _ in 0..m {
        acc = acc.circle(x)?;
    }
    Ok(acc)
}

/// Unnormalized lower central iterate `[..[x, y], y].., y]` with `m` brackets.
pub fn iterated_bracket(x: &Element, y: &Element, m: usize) -> Result<Element, LpaError> {
    let mut acc = x.clone();
    for _ in 0..m {
        acc = acc.bracket(y)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_pairs;
    use crate::lpa::{skew_generators, symmetric_generators, AlgebraHandle};

    fn e4(n: usize, flagged: bool, field: FieldSpec) -> Arc<LeavittAlgebra> {
        let pairs: Vec<_> = (1..=n).map(|i| (0, i)).collect();
        LeavittAlgebra::new(graph_from_pairs(n + 1, &pairs, if flagged { &[0] } else { &[] }), field)
    }

    #[test]
    fn span_examples() {
        let a = e4(2, false, FieldSpec::Rational);
        let v = a.vertex(0);
        assert_eq!(
            span(&a, &[v.clone(), v.scale(&FieldSpec::Rational.from_i64(2))])
                .unwrap()
                .dim(),
            1
        );
        assert!(span(&a, &[]).unwrap().is_zero());
        let basis: Vec<Element> = a
            .full_basis()
            .unwrap()
            .into_iter()
            .map(|m| a.monomial(m).unwrap())
            .collect();
        assert_eq!(span(&a, &basis).unwrap().dim(), 8);
        let other = e4(2, false, FieldSpec::Prime(3));
        assert_eq!(span(&a, &[other.vertex(0)]), Err(LpaError::ContextMismatch));
    }

    #[test]
    fn product_span_examples() {
        let q = FieldSpec::Rational;
        let a = e4(2, false, q);
        let k = span(&a, &skew_generators(&a, 2)).unwrap();
        assert_eq!(k.dim(), 2);
        assert!(product_span(&*a, &k, &k, ProductOp::Bracket).is_zero());
        let zero = Subspace::zero(q);
        assert!(product_span(&*a, &zero, &k, ProductOp::Bracket).is_zero());

        let f2 = e4(2, true, FieldSpec::Prime(2));
        let s = span(&f2, &skew_generators(&f2, 2)).unwrap();
        let t = span(&f2, &symmetric_generators(&f2, 2)[..3]).unwrap();
        assert_eq!(
            product_span(&*f2, &s, &t, ProductOp::Circle),
            product_span(&*f2, &s, &t, ProductOp::Bracket)
        );
    }

    #[test]
    fn zero_subspace_vanishes_at_zero() {
        let a = e4(1, false, FieldSpec::Rational);
        let run = derived_series(
            &*a,
            Subspace::zero(a.field()),
            ProductOp::Bracket,
            SeriesOptions::default(),
        );
        assert_eq!(run.vanished_at, Some(0));
        assert_eq!(run.dims, vec![0]);
        let run = lower_central_series(
            &*a,
            Subspace::zero(a.field()),
            ProductOp::Bracket,
            SeriesOptions::default(),
        );
        assert_eq!(run.vanished_at, Some(0));
    }

    #[test]
    fn lower_central_with_vertex_alternates() {
        let q = FieldSpec::Rational;
        let a = e4(1, true, q);
        let x = &a.edge(0) - &a.ghost(0);
        let u = a.vertex(0);
        let s0 = span(&a, &[x.clone(), u.clone()]).unwrap();
        let opts = SeriesOptions {
            max_depth: 10,
            max_rows: None,
        };
        let run = lower_central_series(&*a, s0, ProductOp::Bracket, opts);
        assert_eq!(run.vanished_at, None);
        assert_eq!(run.dims.len(), 11);
        for m in 1..=10 {
            let w = iterated_bracket(&x, &u, m).unwrap();
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let expected = &a.edge(0).scale(&q.from_i64(sign)) - &a.ghost(0);
            assert_eq!(w, expected);
        }
    }

    #[test]
    fn jordan_power_doubles() {
        let q = FieldSpec::Rational;
        let a = e4(1, false, q);
        let v = a.vertex(1);
        for m in 0..=30 {
            let x = jordan_power(&v, m).unwrap();
            assert_eq!(x, v.scale(&q.from_i64(1i64 << m)));
        }
    }

    #[test]
    fn exact_mode_rejects_cycles() {
        let g = graph_from_pairs(1, &[(0, 0)], &[]);
        let opts = ProbeOptions {
            mode: Mode::Exact,
            ..Default::default()
        };
        assert_eq!(
            solvability_probe(&g, FieldSpec::Rational, Structure::Lie, opts),
            Err(ProbeError::ExactOnCyclic)
        );
    }

    #[test]
    fn report_json_shape() {
        let g = graph_from_pairs(1, &[(0, 0)], &[]);
        let r = solvability_probe(&g, FieldSpec::Rational, Structure::Lie, ProbeOptions::default()).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["kind"], "derived");
        assert_eq!(j["mode"], "truncated");
        assert_eq!(j["weight"], 6);
        assert_eq!(j["vanished_at"], 1);
    }
}
