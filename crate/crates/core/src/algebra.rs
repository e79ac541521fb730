//! Exact symbolic arithmetic in the Leavitt path algebra `L_ℚ(E)` of a
//! finite graph without ω-bundles.
//!
//! Elements are rational linear combinations of monomials `αβ*` with
//! `r(α) = r(β)`. The CK-1 relations and unit absorption are resolved
//! structurally by the prefix rule for products; the CK-2 relations are
//! oriented into a rewriting system that eliminates, at each regular vertex
//! `v`, every monomial whose two sides both end in the designated edge
//! `ê(v)` (the lexicographically smallest edge leaving `v`):
//!
//! ```text
//! (α'ê)(β'ê)*  ->  α'β'*  -  Σ_{f ≠ ê, s(f)=v} (α'f)(β'f)*
//! ```
//!
//! The measure `|α| + |β|` of offending terms strictly decreases, so
//! rewriting terminates, and the surviving monomials form a basis, so every
//! rewriting order reaches the same normal form. The randomized-strategy
//! confluence suite exercises exactly that.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{cycles, EdgeId, Graph, Path, VertexId};
use crate::ideal::Card;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("graph has an infinite emitter; CK-2 does not apply there")]
    OmegaUnsupported,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("elements belong to different graphs")]
    GraphMismatch,
    #[error("monomial sides end at different vertices")]
    RangeMismatch,
    #[error("zeroth power is undefined: the algebra has no global unit")]
    ZeroPower,
}

/// One generator of the algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    Vertex(VertexId),
    Edge(EdgeId),
    /// The ghost edge `e*`.
    Ghost(EdgeId),
}

/// A basis word `αβ*`; trivial `β` gives a real path, a trivial pair gives a
/// vertex idempotent.
#[derive(Clone, PartialEq, Eq)]
pub struct Monomial {
    alpha: Path,
    beta: Path,
}

impl Monomial {
    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    /// Grading degree `|α| − |β|`.
    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }

    fn vertex(v: VertexId) -> Monomial {
        Monomial {
            alpha: Path::trivial(v.clone()),
            beta: Path::trivial(v),
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical term order: (degree, |α|, α, β).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.alpha.len().cmp(&other.alpha.len()))
            .then_with(|| self.alpha.cmp(&other.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.alpha.is_trivial(), self.beta.is_trivial()) {
            (true, true) => write!(f, "{}", self.alpha.source()),
            (false, true) => write!(f, "{}", self.alpha),
            (true, false) => write_ghost(f, &self.beta),
            (false, false) => {
                write!(f, "{} ", self.alpha)?;
                write_ghost(f, &self.beta)
            }
        }
    }
}

fn write_ghost(f: &mut fmt::Formatter<'_>, beta: &Path) -> fmt::Result {
    let mut first = true;
    for e in beta.edges().iter().rev() {
        if !first {
            f.write_str(" ")?;
        }
        write!(f, "{e}*")?;
        first = false;
    }
    Ok(())
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

/// An element of `L_ℚ(E)` in designated-edge normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    graph: Arc<Graph>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Splits into homogeneous components keyed by degree `|α| − |β|`; the
    /// components sum back to the element.
    pub fn degree_components(&self) -> BTreeMap<i64, AlgebraElement> {
        let mut out: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| AlgebraElement {
                    graph: Arc::clone(&self.graph),
                    terms: BTreeMap::new(),
                })
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    /// Degrees at which the element has a nonzero component.
    pub fn support_degrees(&self) -> BTreeSet<i64> {
        self.terms.keys().map(Monomial::degree).collect()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude} ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraElement({self})")
    }
}

/// Outcome of a bounded nilpotency search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    /// Least `k` with `a^k = 0`.
    Nilpotent(usize),
    NotNilpotentWithin(usize),
}

/// Order in which offending monomials are rewritten; all strategies reach
/// the same normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionStrategy {
    /// Reduce after every product step, always rewriting the least monomial.
    EagerLexFirst,
    /// Defer reduction to the end of a word, rewriting greatest-first.
    LazyLexLast,
    /// Defer reduction, rewriting in seeded random order.
    LazySeeded(u64),
}

enum PickOrder {
    First,
    Last,
    Random(ChaCha8Rng),
}

/// Arithmetic context for one graph: holds the designated-edge table and
/// validates that elements belong to it.
pub struct LeavittAlgebra {
    graph: Arc<Graph>,
    designated: BTreeMap<VertexId, EdgeId>,
}

impl LeavittAlgebra {
    pub fn new(g: &Graph) -> Result<LeavittAlgebra, AlgebraError> {
        if g.has_omega_bundles() {
            return Err(AlgebraError::OmegaUnsupported);
        }
        let designated = g
            .vertices()
            .filter(|v| g.is_regular(v))
            .map(|v| (v.clone(), g.out_edges(v)[0].clone()))
            .collect();
        Ok(LeavittAlgebra {
            graph: Arc::new(g.clone()),
            designated,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The eliminated edge `ê(v)` of a regular vertex.
    pub fn designated_edge(&self, v: &VertexId) -> Option<&EdgeId> {
        self.designated.get(v)
    }

    fn owns(&self, a: &AlgebraElement) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.graph, &a.graph) || *self.graph == *a.graph {
            Ok(())
        } else {
            Err(AlgebraError::GraphMismatch)
        }
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            graph: Arc::clone(&self.graph),
            terms: BTreeMap::new(),
        }
    }

    pub fn vertex(&self, v: &VertexId) -> Result<AlgebraElement, AlgebraError> {
        if !self.graph.contains_vertex(v) {
            return Err(AlgebraError::UnknownVertex(v.as_str().to_string()));
        }
        Ok(self.from_raw(vec![(Monomial::vertex(v.clone()), BigRational::one())]))
    }

    pub fn edge(&self, e: &EdgeId) -> Result<AlgebraElement, AlgebraError> {
        let r = self
            .graph
            .range(e)
            .map_err(|_| AlgebraError::UnknownEdge(e.as_str().to_string()))?
            .clone();
        let alpha = Path::from_edges(&self.graph, vec![e.clone()]).expect("edge exists");
        Ok(self.from_raw(vec![(
            Monomial {
                alpha,
                beta: Path::trivial(r),
            },
            BigRational::one(),
        )]))
    }

    pub fn ghost(&self, e: &EdgeId) -> Result<AlgebraElement, AlgebraError> {
        self.edge(e).map(|el| self.star(&el))
    }

    pub fn generator(&self, gen: &Generator) -> Result<AlgebraElement, AlgebraError> {
        match gen {
            Generator::Vertex(v) => self.vertex(v),
            Generator::Edge(e) => self.edge(e),
            Generator::Ghost(e) => self.ghost(e),
        }
    }

    /// The real-path element `μ = μ · r(μ)*`.
    pub fn path_element(&self, p: &Path) -> AlgebraElement {
        let beta = Path::trivial(p.range().clone());
        self.from_raw(vec![(
            Monomial {
                alpha: p.clone(),
                beta,
            },
            BigRational::one(),
        )])
    }

    /// A single monomial `k · αβ*`; the sides must end at the same vertex.
    pub fn monomial(
        &self,
        alpha: Path,
        beta: Path,
        coeff: BigRational,
    ) -> Result<AlgebraElement, AlgebraError> {
        if alpha.range() != beta.range() {
            return Err(AlgebraError::RangeMismatch);
        }
        Ok(self.from_raw(vec![(Monomial { alpha, beta }, coeff)]))
    }

    fn from_raw(&self, raw: Vec<(Monomial, BigRational)>) -> AlgebraElement {
        let mut terms = merge(raw);
        reduce(&self.graph, &self.designated, &mut terms, &mut PickOrder::First);
        AlgebraElement {
            graph: Arc::clone(&self.graph),
            terms,
        }
    }

    pub fn add(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        self.owns(a)?;
        self.owns(b)?;
        let mut terms = a.terms.clone();
        for (m, c) in &b.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        // both inputs are normal forms, so the sum already is one
        Ok(AlgebraElement {
            graph: Arc::clone(&self.graph),
            terms,
        })
    }

    pub fn neg(&self, a: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            graph: Arc::clone(&self.graph),
            terms: a.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: &BigRational, a: &AlgebraElement) -> AlgebraElement {
        if k.is_zero() {
            return self.zero();
        }
        AlgebraElement {
            graph: Arc::clone(&self.graph),
            terms: a.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(
        &self,
        a: &AlgebraElement,
        b: &AlgebraElement,
    ) -> Result<AlgebraElement, AlgebraError> {
        self.owns(a)?;
        self.owns(b)?;
        let raw = self.mul_raw(&a.terms, &b.terms);
        Ok(self.from_raw(raw))
    }

    /// Prefix-rule product of term lists, before CK-2 reduction.
    fn mul_raw(
        &self,
        a: &BTreeMap<Monomial, BigRational>,
        b: &BTreeMap<Monomial, BigRational>,
    ) -> Vec<(Monomial, BigRational)> {
        let g = &self.graph;
        let mut out = Vec::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                if let Some(m) = mul_monomials(g, ma, mb) {
                    out.push((m, ca * cb));
                }
            }
        }
        out
    }

    /// K-linear involution swapping the two sides of each monomial.
    pub fn star(&self, a: &AlgebraElement) -> AlgebraElement {
        // the normal-form condition is symmetric in α and β
        AlgebraElement {
            graph: Arc::clone(&self.graph),
            terms: a
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        Monomial {
                            alpha: m.beta.clone(),
                            beta: m.alpha.clone(),
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// `a^k` for `k ≥ 1`.
    pub fn pow(&self, a: &AlgebraElement, k: u32) -> Result<AlgebraElement, AlgebraError> {
        if k == 0 {
            return Err(AlgebraError::ZeroPower);
        }
        let mut acc = a.clone();
        for _ in 1..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Least `k ≤ bound` with `a^k = 0`, if any.
    pub fn nilpotency_index(&self, a: &AlgebraElement, bound: usize) -> Nilpotency {
        assert!(bound >= 1, "bound must be positive");
        let mut acc = a.clone();
        for k in 1..=bound {
            if acc.is_zero() {
                return Nilpotency::Nilpotent(k);
            }
            if k < bound {
                acc = self.mul(&acc, a).expect("same algebra");
            }
        }
        Nilpotency::NotNilpotentWithin(bound)
    }

    /// The shift `Σ_i p_i p_{i+1}*` over paths with a common range; its
    /// nilpotency index is the path count.
    pub fn shift(&self, paths: &[Path]) -> Result<AlgebraElement, AlgebraError> {
        let mut acc = self.zero();
        for w in paths.windows(2) {
            let m = self.monomial(w[0].clone(), w[1].clone(), BigRational::one())?;
            acc = self.add(&acc, &m)?;
        }
        Ok(acc)
    }

    /// Evaluates a product word of generators with the canonical strategy.
    pub fn eval_word(&self, word: &[Generator]) -> Result<AlgebraElement, AlgebraError> {
        self.eval_word_with(word, ReductionStrategy::EagerLexFirst)
    }

    /// Evaluates a product word under a chosen reduction strategy. Used by
    /// the confluence suites; every strategy returns the same element.
    pub fn eval_word_with(
        &self,
        word: &[Generator],
        strategy: ReductionStrategy,
    ) -> Result<AlgebraElement, AlgebraError> {
        let mut order = match strategy {
            ReductionStrategy::EagerLexFirst => PickOrder::First,
            ReductionStrategy::LazyLexLast => PickOrder::Last,
            ReductionStrategy::LazySeeded(seed) => {
                PickOrder::Random(ChaCha8Rng::seed_from_u64(seed))
            }
        };
        let eager = matches!(strategy, ReductionStrategy::EagerLexFirst);
        let mut acc: Option<BTreeMap<Monomial, BigRational>> = None;
        for gen in word {
            let next = self.generator_raw(gen)?;
            acc = Some(match acc {
                None => next,
                Some(cur) => {
                    let mut terms = merge(self.mul_raw(&cur, &next));
                    if eager {
                        reduce(&self.graph, &self.designated, &mut terms, &mut order);
                    }
                    terms
                }
            });
        }
        let mut terms = acc.unwrap_or_default();
        reduce(&self.graph, &self.designated, &mut terms, &mut order);
        Ok(AlgebraElement {
            graph: Arc::clone(&self.graph),
            terms,
        })
    }

    fn generator_raw(
        &self,
        gen: &Generator,
    ) -> Result<BTreeMap<Monomial, BigRational>, AlgebraError> {
        // unreduced single-term map for word evaluation
        let el = match gen {
            Generator::Vertex(v) => self.vertex(v)?,
            Generator::Edge(e) => self.edge(e)?,
            Generator::Ghost(e) => self.ghost(e)?,
        };
        Ok(el.terms)
    }
}

/// Monomial product by the prefix rule: `(αβ*)(γδ*)` survives only when one
/// of `β`, `γ` is a prefix of the other.
fn mul_monomials(g: &Graph, a: &Monomial, b: &Monomial) -> Option<Monomial> {
    if a.beta.is_prefix_of(&b.alpha) {
        let rest = a.beta.strip_prefix_of(g, &b.alpha).unwrap();
        let alpha = a.alpha.concat(&rest).expect("ranges align");
        Some(Monomial {
            alpha,
            beta: b.beta.clone(),
        })
    } else if b.alpha.is_prefix_of(&a.beta) {
        let rest = b.alpha.strip_prefix_of(g, &a.beta).unwrap();
        let beta = b.beta.concat(&rest).expect("ranges align");
        Some(Monomial {
            alpha: a.alpha.clone(),
            beta,
        })
    } else {
        None
    }
}

fn merge(raw: Vec<(Monomial, BigRational)>) -> BTreeMap<Monomial, BigRational> {
    let mut terms = BTreeMap::new();
    for (m, c) in raw {
        accumulate(&mut terms, m, c);
    }
    terms
}

fn accumulate(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn violates(designated: &BTreeMap<VertexId, EdgeId>, g: &Graph, m: &Monomial) -> bool {
    match (m.alpha.edges().last(), m.beta.edges().last()) {
        (Some(ea), Some(eb)) if ea == eb => {
            let v = g.source(ea).expect("edge of valid path");
            designated.get(v) == Some(ea)
        }
        _ => false,
    }
}

fn drop_last(g: &Graph, p: &Path) -> Path {
    let edges = p.edges();
    if edges.len() == 1 {
        Path::trivial(p.source().clone())
    } else {
        Path::from_edges(g, edges[..edges.len() - 1].to_vec()).expect("prefix composes")
    }
}

/// Rewrites until no monomial has both sides ending in a designated edge.
/// `order` picks which offending monomial goes first; confluence makes the
/// result independent of that choice.
fn reduce(
    g: &Graph,
    designated: &BTreeMap<VertexId, EdgeId>,
    terms: &mut BTreeMap<Monomial, BigRational>,
    order: &mut PickOrder,
) {
    let mut pending: BTreeSet<Monomial> = terms
        .keys()
        .filter(|m| violates(designated, g, m))
        .cloned()
        .collect();
    while !pending.is_empty() {
        let m = match order {
            PickOrder::First => pending.iter().next().unwrap().clone(),
            PickOrder::Last => pending.iter().next_back().unwrap().clone(),
            PickOrder::Random(rng) => {
                let idx = rng.gen_range(0..pending.len());
                pending.iter().nth(idx).unwrap().clone()
            }
        };
        pending.remove(&m);
        let coeff = match terms.remove(&m) {
            Some(c) => c,
            None => continue, // cancelled by an earlier rewrite
        };
        let e_hat = m.alpha.edges().last().unwrap().clone();
        let v = g.source(&e_hat).unwrap().clone();
        let alpha = drop_last(g, &m.alpha);
        let beta = drop_last(g, &m.beta);
        let mut produced = vec![(
            Monomial {
                alpha: alpha.clone(),
                beta: beta.clone(),
            },
            coeff.clone(),
        )];
        for f in g.out_edges(&v) {
            if *f == e_hat {
                continue;
            }
            let mut af = alpha.clone();
            af.push_unchecked(f.clone(), g.range(f).unwrap().clone());
            let mut bf = beta.clone();
            bf.push_unchecked(f.clone(), g.range(f).unwrap().clone());
            produced.push((Monomial { alpha: af, beta: bf }, -coeff.clone()));
        }
        for (pm, pc) in produced {
            let offending = violates(designated, g, &pm);
            accumulate(terms, pm.clone(), pc);
            if offending {
                if terms.contains_key(&pm) {
                    pending.insert(pm);
                } else {
                    pending.remove(&pm);
                }
            }
        }
    }
}

/// Dimension of `L_ℚ(E)` over `ℚ`: the designated-edge basis count for an
/// acyclic graph, ω as soon as the graph has a cycle.
pub fn dim_over_k(g: &Graph) -> Result<Card, AlgebraError> {
    if g.has_omega_bundles() {
        return Err(AlgebraError::OmegaUnsupported);
    }
    if !cycles(g).is_empty() {
        return Ok(Card::Omega);
    }
    let mut count = 0usize;
    for w in g.vertices() {
        let ending = crate::graph::simple_paths_ending_at(g, w).expect("own vertex");
        for alpha in &ending.paths {
            for beta in &ending.paths {
                let excluded = match (alpha.edges().last(), beta.edges().last()) {
                    (Some(ea), Some(eb)) if ea == eb => {
                        let v = g.source(ea).unwrap();
                        g.is_regular(v) && g.out_edges(v)[0] == *ea
                    }
                    _ => false,
                };
                if !excluded {
                    count += 1;
                }
            }
        }
    }
    Ok(Card::Finite(count))
}

/// Seeded samplers shared by the property suites and the representation
/// oracle.
pub mod sampling {
    use super::*;

    /// A random composable word of generators starting anywhere.
    pub fn word(g: &Graph, rng: &mut impl Rng, len: usize) -> Vec<Generator> {
        let vertices: Vec<&VertexId> = g.vertices().collect();
        let mut at = vertices[rng.gen_range(0..vertices.len())].clone();
        let mut word = Vec::with_capacity(len);
        for _ in 0..len {
            // choices keeping the running product nonzero
            let mut options: Vec<(Generator, VertexId)> = vec![(
                Generator::Vertex(at.clone()),
                at.clone(),
            )];
            for e in g.out_edges(&at) {
                options.push((Generator::Edge(e.clone()), g.range(e).unwrap().clone()));
            }
            for e in g.in_edges(&at) {
                options.push((Generator::Ghost(e.clone()), g.source(e).unwrap().clone()));
            }
            let (gen, next) = options[rng.gen_range(0..options.len())].clone();
            word.push(gen);
            at = next;
        }
        word
    }

    /// A random formal sum of scaled words.
    pub fn expression(
        g: &Graph,
        rng: &mut impl Rng,
        max_words: usize,
        max_len: usize,
    ) -> Vec<(BigRational, Vec<Generator>)> {
        let words = rng.gen_range(1..=max_words);
        (0..words)
            .map(|_| {
                let len = rng.gen_range(1..=max_len);
                (small_rational(rng), word(g, rng, len))
            })
            .collect()
    }

    /// A nonzero rational with numerator in −2..=2 and denominator 1 or 2.
    pub fn small_rational(rng: &mut impl Rng) -> BigRational {
        let numerator = *[-2i64, -1, 1, 2].iter().nth(rng.gen_range(0..4)).unwrap();
        let denominator = if rng.gen_bool(0.25) { 2 } else { 1 };
        BigRational::new(numerator.into(), denominator.into())
    }

    /// A random normal-form element with a few monomial terms.
    pub fn element(
        alg: &LeavittAlgebra,
        rng: &mut impl Rng,
        max_terms: usize,
        max_len: usize,
    ) -> AlgebraElement {
        let g = alg.graph();
        let mut acc = alg.zero();
        for _ in 0..rng.gen_range(1..=max_terms) {
            let alpha = random_path(g, rng, max_len, None);
            let beta = random_path_ending_at(g, rng, max_len, alpha.range());
            let term = alg
                .monomial(alpha, beta, small_rational(rng))
                .expect("ranges match by construction");
            acc = alg.add(&acc, &term).expect("same algebra");
        }
        acc
    }

    fn random_path(g: &Graph, rng: &mut impl Rng, max_len: usize, from: Option<&VertexId>) -> Path {
        let vertices: Vec<&VertexId> = g.vertices().collect();
        let start = match from {
            Some(v) => v.clone(),
            None => vertices[rng.gen_range(0..vertices.len())].clone(),
        };
        let mut path = Path::trivial(start);
        for _ in 0..max_len {
            if rng.gen_bool(0.35) {
                break;
            }
            let out = g.out_edges(path.range());
            if out.is_empty() {
                break;
            }
            let e = &out[rng.gen_range(0..out.len())];
            path.push_unchecked(e.clone(), g.range(e).unwrap().clone());
        }
        path
    }

    fn random_path_ending_at(
        g: &Graph,
        rng: &mut impl Rng,
        max_len: usize,
        end: &VertexId,
    ) -> Path {
        // walk backwards over in-edges, then materialize forwards
        let mut edges: Vec<EdgeId> = Vec::new();
        let mut at = end.clone();
        for _ in 0..max_len {
            if rng.gen_bool(0.35) {
                break;
            }
            let inc = g.in_edges(&at);
            if inc.is_empty() {
                break;
            }
            let e = inc[rng.gen_range(0..inc.len())].clone();
            at = g.source(&e).unwrap().clone();
            edges.insert(0, e);
        }
        if edges.is_empty() {
            Path::trivial(end.clone())
        } else {
            Path::from_edges(g, edges).expect("backward walk composes")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn v(s: &str) -> VertexId {
        VertexId::new(s)
    }
    fn e(s: &str) -> EdgeId {
        EdgeId::new(s)
    }
    fn alg(g: &Graph) -> LeavittAlgebra {
        LeavittAlgebra::new(g).unwrap()
    }

    #[test]
    fn rejects_omega_graphs() {
        assert_eq!(
            LeavittAlgebra::new(&fixtures::omega_clock()).err(),
            Some(AlgebraError::OmegaUnsupported)
        );
    }

    #[test]
    fn generators_have_expected_shape() {
        let g = fixtures::single_edge();
        let a = alg(&g);
        assert_eq!(a.vertex(&v("v")).unwrap().to_string(), "v");
        assert_eq!(a.edge(&e("e")).unwrap().to_string(), "e");
        assert_eq!(a.ghost(&e("e")).unwrap().to_string(), "e*");
        assert!(a.vertex(&v("zz")).is_err());
        assert!(a.edge(&e("zz")).is_err());
    }

    #[test]
    fn ck1_relations() {
        let g = fixtures::star2();
        let a = alg(&g);
        let e1 = a.edge(&e("e1")).unwrap();
        let e2 = a.edge(&e("e2")).unwrap();
        // e*e = r(e)
        assert_eq!(
            a.mul(&a.star(&e1), &e1).unwrap(),
            a.vertex(&v("w1")).unwrap()
        );
        // e*f = 0 for distinct edges
        assert!(a.mul(&a.star(&e1), &e2).unwrap().is_zero());
    }

    #[test]
    fn ck2_collapses_to_zero() {
        // v - Σ ee* at a regular vertex
        let g = fixtures::star2();
        let a = alg(&g);
        let mut acc = a.vertex(&v("v")).unwrap();
        for id in ["e1", "e2"] {
            let ee = a
                .mul(&a.edge(&e(id)).unwrap(), &a.ghost(&e(id)).unwrap())
                .unwrap();
            acc = a.sub(&acc, &ee).unwrap();
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn toeplitz_loop_projection_is_not_vertex() {
        // ê(v) = e, so ee* rewrites to v − ff*; either way it differs from v.
        let g = fixtures::toeplitz();
        let a = alg(&g);
        let ee = a
            .mul(&a.edge(&e("e")).unwrap(), &a.ghost(&e("e")).unwrap())
            .unwrap();
        let vtx = a.vertex(&v("v")).unwrap();
        assert_ne!(ee, vtx);
        assert_eq!(ee.to_string(), "v - f f*");
        let ff = a
            .mul(&a.edge(&e("f")).unwrap(), &a.ghost(&e("f")).unwrap())
            .unwrap();
        assert_eq!(a.add(&ee, &ff).unwrap(), vtx);
    }

    #[test]
    fn telescoping_product() {
        // (αβ*)(βγ*) = αγ*
        let g = fixtures::line(3);
        let a = alg(&g);
        let alpha = Path::from_edges(&g, vec![e("e1"), e("e2")]).unwrap();
        let beta = Path::from_edges(&g, vec![e("e2")]).unwrap();
        let gamma = Path::trivial(v("v3"));
        let left = a
            .monomial(alpha.clone(), beta.clone(), BigRational::one())
            .unwrap();
        let right = a.monomial(beta, gamma.clone(), BigRational::one()).unwrap();
        let expected = a.monomial(alpha, gamma, BigRational::one()).unwrap();
        assert_eq!(a.mul(&left, &right).unwrap(), expected);
    }

    #[test]
    fn vertices_act_as_local_units() {
        let g = fixtures::toeplitz();
        let a = alg(&g);
        let x = a.edge(&e("f")).unwrap();
        let left_unit = a.vertex(&v("v")).unwrap();
        let right_unit = a.vertex(&v("w")).unwrap();
        assert_eq!(a.mul(&left_unit, &x).unwrap(), x);
        assert_eq!(a.mul(&x, &right_unit).unwrap(), x);
        assert!(a.mul(&x, &left_unit).unwrap().is_zero());
    }

    #[test]
    fn star_is_an_involution_and_antihomomorphism() {
        let g = fixtures::rose(2);
        let a = alg(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = sampling::element(&a, &mut rng, 3, 4);
            let y = sampling::element(&a, &mut rng, 3, 4);
            assert_eq!(a.star(&a.star(&x)), x);
            let lhs = a.star(&a.mul(&x, &y).unwrap());
            let rhs = a.mul(&a.star(&y), &a.star(&x)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn degree_components_split_and_multiply() {
        let g = fixtures::loop_();
        let a = alg(&g);
        let c = a.edge(&e("c")).unwrap();
        let x = a.add(&c, &a.star(&c)).unwrap();
        let comps = x.degree_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[&1].to_string(), "c");
        assert_eq!(comps[&-1].to_string(), "c*");
        let c2 = a.pow(&c, 2).unwrap();
        assert_eq!(c2.support_degrees(), BTreeSet::from([2]));
        let vtx = a.vertex(&v("v")).unwrap();
        assert_eq!(vtx.support_degrees(), BTreeSet::from([0]));
    }

    #[test]
    fn grading_is_multiplicative() {
        let g = fixtures::twocycles();
        let a = alg(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x = sampling::element(&a, &mut rng, 2, 4);
            let y = sampling::element(&a, &mut rng, 2, 4);
            let prod = a.mul(&x, &y).unwrap();
            let sums: BTreeSet<i64> = x
                .support_degrees()
                .iter()
                .flat_map(|dx| y.support_degrees().iter().map(|dy| dx + dy).collect::<Vec<_>>())
                .collect();
            for d in prod.support_degrees() {
                assert!(sums.contains(&d));
            }
        }
    }

    #[test]
    fn normal_form_is_idempotent_under_restar() {
        // rebuilding an element from its own terms must not change it
        let g = fixtures::toeplitz();
        let a = alg(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = sampling::element(&a, &mut rng, 3, 5);
            let rebuilt = x
                .terms()
                .map(|(m, c)| (m.clone(), c.clone()))
                .fold(a.zero(), |acc, (m, c)| {
                    let t = a.monomial(m.alpha().clone(), m.beta().clone(), c).unwrap();
                    a.add(&acc, &t).unwrap()
                });
            assert_eq!(rebuilt, x);
        }
    }

    #[test]
    fn nilpotency_cases() {
        let g = fixtures::line(3);
        let a = alg(&g);
        assert_eq!(a.nilpotency_index(&a.zero(), 5), Nilpotency::Nilpotent(1));
        let vtx = a.vertex(&v("v1")).unwrap();
        assert_eq!(
            a.nilpotency_index(&vtx, 6),
            Nilpotency::NotNilpotentWithin(6)
        );
        // shift over the three paths ending at the sink
        let paths = crate::graph::simple_paths_ending_at(&g, &v("v3"))
            .unwrap()
            .paths;
        let shift = a.shift(&paths).unwrap();
        assert_eq!(a.nilpotency_index(&shift, 10), Nilpotency::Nilpotent(3));
    }

    #[test]
    fn dims_match_matrix_sizes() {
        assert_eq!(
            dim_over_k(&fixtures::single_edge()).unwrap(),
            Card::Finite(4)
        );
        assert_eq!(dim_over_k(&fixtures::star2()).unwrap(), Card::Finite(8));
        assert_eq!(dim_over_k(&fixtures::loop_()).unwrap(), Card::Omega);
        assert_eq!(dim_over_k(&fixtures::line(3)).unwrap(), Card::Finite(9));
    }

    #[test]
    fn direct_finiteness_witness_identities() {
        // c*c = v, cc* ≠ v, f*(cc*) = 0 on both graphs with an exit cycle
        for (g, cycle_edge, exit_edge, base) in [
            (fixtures::toeplitz(), "e", "f", "v"),
            (fixtures::twocycles(), "g", "h", "u"),
        ] {
            let a = alg(&g);
            let c = a.edge(&e(cycle_edge)).unwrap();
            let f_star = a.ghost(&e(exit_edge)).unwrap();
            let base = a.vertex(&v(base)).unwrap();
            assert_eq!(a.mul(&a.star(&c), &c).unwrap(), base);
            let cc = a.mul(&c, &a.star(&c)).unwrap();
            assert_ne!(cc, base);
            assert!(a.mul(&f_star, &cc).unwrap().is_zero());
        }
    }

    #[test]
    fn strategies_agree_on_fixture_words() {
        let g = fixtures::toeplitz();
        let a = alg(&g);
        let word = [
            Generator::Edge(e("e")),
            Generator::Ghost(e("e")),
            Generator::Edge(e("e")),
            Generator::Ghost(e("e")),
        ];
        let canonical = a.eval_word(&word).unwrap();
        for strategy in [
            ReductionStrategy::LazyLexLast,
            ReductionStrategy::LazySeeded(5),
            ReductionStrategy::LazySeeded(99),
        ] {
            assert_eq!(a.eval_word_with(&word, strategy).unwrap(), canonical);
        }
    }

    #[test]
    fn graph_mismatch_is_rejected() {
        let a1 = alg(&fixtures::line(2));
        let a2 = alg(&fixtures::loop_());
        let x = a2.vertex(&v("v")).unwrap();
        assert_eq!(
            a1.mul(&x, &x).err(),
            Some(AlgebraError::GraphMismatch)
        );
    }
}
