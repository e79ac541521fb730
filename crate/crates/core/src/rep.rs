//! Explicit decomposition `L ≅ ⊕ M_{n_i}(ℚ) ⊕ ⊕ M_{n_j}(ℚ[x,x⁻¹])` and the
//! faithful block-matrix representation used as the brute-force oracle for
//! the decision procedures.
//!
//! Applicable exactly when no cycle has an exit (and the graph has no
//! ω-bundles): one block per sink, indexed by the paths ending there, and one
//! Laurent block per (no-exit) cycle, indexed by the paths ending at its base
//! that do not wrap it.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{sampling, AlgebraElement, LeavittAlgebra};
use crate::graph::{cycles, simple_paths_ending_at, ArcRef, Cycle, EdgeId, Graph, Path, VertexId};
use crate::laurent::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("graph has an infinite emitter; no finite matrix decomposition")]
    OmegaUnsupported,
    #[error("decomposition not applicable: cycle `{cycle}` has an exit")]
    NotApplicable { cycle: String },
    #[error("element belongs to a different graph")]
    GraphMismatch,
}

/// Why a graph has no matrix decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExitObstruction {
    pub cycle: Cycle,
    pub exit: ArcRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SinkBlock {
    pub sink: VertexId,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleBlock {
    pub base: VertexId,
    pub size: usize,
}

/// The block structure of `L`: applicable iff no cycle has an exit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<ExitObstruction>,
    pub sink_blocks: Vec<SinkBlock>,
    pub cycle_blocks: Vec<CycleBlock>,
}

impl DecompositionReport {
    pub fn max_block_size(&self) -> usize {
        self.sink_blocks
            .iter()
            .map(|b| b.size)
            .chain(self.cycle_blocks.iter().map(|b| b.size))
            .max()
            .unwrap_or(0)
    }
}

/// Computes the decomposition report; errors only on ω-bundles.
pub fn decompose(g: &Graph) -> Result<DecompositionReport, RepError> {
    if g.has_omega_bundles() {
        return Err(RepError::OmegaUnsupported);
    }
    let all_cycles = cycles(g);
    if let Some(bad) = all_cycles.iter().find(|c| !c.exits.is_empty()) {
        return Ok(DecompositionReport {
            applicable: false,
            reason: Some(ExitObstruction {
                cycle: bad.cycle.clone(),
                exit: bad.exits[0].clone(),
            }),
            sink_blocks: Vec::new(),
            cycle_blocks: Vec::new(),
        });
    }
    let sink_blocks = g
        .vertices()
        .filter(|v| g.is_sink(v))
        .map(|w| SinkBlock {
            sink: w.clone(),
            size: simple_paths_ending_at(g, w).expect("own vertex").paths.len(),
        })
        .collect();
    let cycle_blocks = all_cycles
        .iter()
        .map(|c| CycleBlock {
            base: c.cycle.base().clone(),
            size: simple_paths_ending_at(g, c.cycle.base())
                .expect("own vertex")
                .paths
                .len(),
        })
        .collect();
    Ok(DecompositionReport {
        applicable: true,
        reason: None,
        sink_blocks,
        cycle_blocks,
    })
}

/// Entry arithmetic shared by the two block kinds.
pub trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    /// Involution applied entrywise under conjugate transposition.
    fn star(&self) -> Self;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn star(&self) -> Self {
        self.clone()
    }
}

impl Scalar for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn star(&self) -> Self {
        self.invert_variable()
    }
}

/// Dense square matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zero(n: usize) -> Mat<T> {
        Mat {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    pub fn add_assign_at(&mut self, i: usize, j: usize, value: &T) {
        let cur = self.get(i, j).add(value);
        self.set(i, j, cur);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn matmul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.n, other.n);
        let mut out = Mat::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_assign_at(i, j, &a.mul(b));
                }
            }
        }
        out
    }

    pub fn matadd(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.n, other.n);
        let mut out = Mat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(i, j).add(other.get(i, j)));
            }
        }
        out
    }

    /// Transpose with the entrywise involution.
    pub fn conjugate_transpose(&self) -> Mat<T> {
        let mut out = Mat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).star());
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BlockData {
    Rational(Mat<BigRational>),
    Laurent(Mat<LaurentPoly>),
}

impl BlockData {
    fn size(&self) -> usize {
        match self {
            BlockData::Rational(m) => m.size(),
            BlockData::Laurent(m) => m.size(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            BlockData::Rational(m) => m.is_zero(),
            BlockData::Laurent(m) => m.is_zero(),
        }
    }

    fn matmul(&self, other: &BlockData) -> BlockData {
        match (self, other) {
            (BlockData::Rational(a), BlockData::Rational(b)) => BlockData::Rational(a.matmul(b)),
            (BlockData::Laurent(a), BlockData::Laurent(b)) => BlockData::Laurent(a.matmul(b)),
            _ => panic!("mismatched block kinds"),
        }
    }

    fn matadd(&self, other: &BlockData) -> BlockData {
        match (self, other) {
            (BlockData::Rational(a), BlockData::Rational(b)) => BlockData::Rational(a.matadd(b)),
            (BlockData::Laurent(a), BlockData::Laurent(b)) => BlockData::Laurent(a.matadd(b)),
            _ => panic!("mismatched block kinds"),
        }
    }

    fn conjugate_transpose(&self) -> BlockData {
        match self {
            BlockData::Rational(m) => BlockData::Rational(m.conjugate_transpose()),
            BlockData::Laurent(m) => BlockData::Laurent(m.conjugate_transpose()),
        }
    }
}

/// One matrix per block, in the order of the decomposition report.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockMatrix {
    pub blocks: Vec<(VertexId, BlockData)>,
}

impl BlockMatrix {
    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|(_, b)| b.is_zero())
    }

    pub fn matmul(&self, other: &BlockMatrix) -> BlockMatrix {
        BlockMatrix {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|((v, a), (_, b))| (v.clone(), a.matmul(b)))
                .collect(),
        }
    }

    pub fn matadd(&self, other: &BlockMatrix) -> BlockMatrix {
        BlockMatrix {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|((v, a), (_, b))| (v.clone(), a.matadd(b)))
                .collect(),
        }
    }

    pub fn conjugate_transpose(&self) -> BlockMatrix {
        BlockMatrix {
            blocks: self
                .blocks
                .iter()
                .map(|(v, b)| (v.clone(), b.conjugate_transpose()))
                .collect(),
        }
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(|(_, b)| b.size()).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixNilpotency {
    Nilpotent(usize),
    NotNilpotent,
}

/// Least `k` with `m^k = 0`; block sizes bound the search because the base
/// rings are domains.
pub fn matrix_nilpotency_index(m: &BlockMatrix) -> MatrixNilpotency {
    let bound = m.max_block_size();
    if bound == 0 {
        return MatrixNilpotency::Nilpotent(1);
    }
    let mut acc = m.clone();
    for k in 1..=bound {
        if acc.is_zero() {
            return MatrixNilpotency::Nilpotent(k);
        }
        if k < bound {
            acc = acc.matmul(m);
        }
    }
    if acc.is_zero() {
        MatrixNilpotency::Nilpotent(bound)
    } else {
        MatrixNilpotency::NotNilpotent
    }
}

enum BlockKind {
    Sink,
    Cycle { word: Vec<EdgeId> },
}

struct BlockMeta {
    anchor: VertexId,
    kind: BlockKind,
    paths: Vec<Path>,
    index: BTreeMap<Path, usize>,
}

/// The faithful representation of `L` on its block decomposition; holds the
/// path index of every block. Read-only once constructed.
pub struct Representation {
    alg: LeavittAlgebra,
    report: DecompositionReport,
    blocks: Vec<BlockMeta>,
    sink_of: BTreeMap<VertexId, usize>,
    cycle_of: BTreeMap<VertexId, usize>,
}

impl Representation {
    pub fn new(g: &Graph) -> Result<Representation, RepError> {
        let report = decompose(g)?;
        if !report.applicable {
            let reason = report.reason.expect("inapplicable report carries reason");
            return Err(RepError::NotApplicable {
                cycle: reason.cycle.to_string(),
            });
        }
        let alg = LeavittAlgebra::new(g).expect("no bundles checked by decompose");
        let mut blocks = Vec::new();
        let mut sink_of = BTreeMap::new();
        let mut cycle_of = BTreeMap::new();
        for sb in &report.sink_blocks {
            let paths = simple_paths_ending_at(g, &sb.sink).expect("sink").paths;
            let index = paths
                .iter()
                .enumerate()
                .map(|(i, p)| (p.clone(), i))
                .collect();
            sink_of.insert(sb.sink.clone(), blocks.len());
            blocks.push(BlockMeta {
                anchor: sb.sink.clone(),
                kind: BlockKind::Sink,
                paths,
                index,
            });
        }
        for c in cycles(g) {
            let base = c.cycle.base().clone();
            let paths = simple_paths_ending_at(g, &base).expect("base").paths;
            let index = paths
                .iter()
                .enumerate()
                .map(|(i, p)| (p.clone(), i))
                .collect();
            for v in c.cycle.vertices(g) {
                cycle_of.insert(v, blocks.len());
            }
            blocks.push(BlockMeta {
                anchor: base,
                kind: BlockKind::Cycle {
                    word: c.cycle.edges().to_vec(),
                },
                paths,
                index,
            });
        }
        Ok(Representation {
            alg,
            report,
            blocks,
            sink_of,
            cycle_of,
        })
    }

    pub fn graph(&self) -> &Graph {
        self.alg.graph()
    }

    pub fn algebra(&self) -> &LeavittAlgebra {
        &self.alg
    }

    pub fn report(&self) -> &DecompositionReport {
        &self.report
    }

    pub fn zero_matrix(&self) -> BlockMatrix {
        BlockMatrix {
            blocks: self
                .blocks
                .iter()
                .map(|b| {
                    let n = b.paths.len();
                    let data = match b.kind {
                        BlockKind::Sink => BlockData::Rational(Mat::zero(n)),
                        BlockKind::Cycle { .. } => BlockData::Laurent(Mat::zero(n)),
                    };
                    (b.anchor.clone(), data)
                })
                .collect(),
        }
    }

    /// The ring homomorphism `L → ⊕ blocks`.
    pub fn represent(&self, a: &AlgebraElement) -> Result<BlockMatrix, RepError> {
        if *a.graph() != *self.alg.graph() {
            return Err(RepError::GraphMismatch);
        }
        let mut out = self.zero_matrix();
        for (m, c) in a.terms() {
            self.contribute(m.alpha().clone(), m.beta().clone(), c, &mut out);
        }
        Ok(out)
    }

    fn contribute(&self, alpha: Path, beta: Path, coeff: &BigRational, out: &mut BlockMatrix) {
        let g = self.alg.graph();
        let u = alpha.range().clone();
        if let Some(&bi) = self.sink_of.get(&u) {
            let meta = &self.blocks[bi];
            let i = meta.index[&alpha];
            let j = meta.index[&beta];
            match &mut out.blocks[bi].1 {
                BlockData::Rational(m) => m.add_assign_at(i, j, coeff),
                BlockData::Laurent(_) => unreachable!("sink blocks are rational"),
            }
            return;
        }
        if let Some(&bi) = self.cycle_of.get(&u) {
            let meta = &self.blocks[bi];
            let word = match &meta.kind {
                BlockKind::Cycle { word } => word,
                BlockKind::Sink => unreachable!(),
            };
            // ride the cycle to its base, then peel full wraps
            let arc = arc_to_base(g, word, &u);
            let alpha = alpha.concat(&arc).expect("arc starts at range");
            let beta = beta.concat(&arc).expect("arc starts at range");
            let (k1, p) = peel_wraps(g, word, &alpha);
            let (k2, q) = peel_wraps(g, word, &beta);
            let i = meta.index[&p];
            let j = meta.index[&q];
            let entry = LaurentPoly::monomial(k1 - k2, coeff.clone());
            match &mut out.blocks[bi].1 {
                BlockData::Laurent(m) => m.add_assign_at(i, j, &entry),
                BlockData::Rational(_) => unreachable!("cycle blocks are Laurent"),
            }
            return;
        }
        // regular vertex off every terminal: expand with CK-2
        for e in g.out_edges(&u) {
            let r = g.range(e).unwrap().clone();
            let mut ae = alpha.clone();
            ae.push_unchecked(e.clone(), r.clone());
            let mut be = beta.clone();
            be.push_unchecked(e.clone(), r);
            self.contribute(ae, be, coeff, out);
        }
    }

    /// The inverse of [`represent`](Self::represent) on block matrices.
    pub fn element_from_matrix(&self, m: &BlockMatrix) -> AlgebraElement {
        let g = self.alg.graph();
        let mut acc = self.alg.zero();
        for (bi, meta) in self.blocks.iter().enumerate() {
            match (&meta.kind, &m.blocks[bi].1) {
                (BlockKind::Sink, BlockData::Rational(mat)) => {
                    for i in 0..mat.size() {
                        for j in 0..mat.size() {
                            let c = mat.get(i, j);
                            if Zero::is_zero(c) {
                                continue;
                            }
                            let term = self
                                .alg
                                .monomial(meta.paths[i].clone(), meta.paths[j].clone(), c.clone())
                                .expect("block paths share a range");
                            acc = self.alg.add(&acc, &term).expect("same algebra");
                        }
                    }
                }
                (BlockKind::Cycle { word }, BlockData::Laurent(mat)) => {
                    for i in 0..mat.size() {
                        for j in 0..mat.size() {
                            for (exp, c) in mat.get(i, j).terms() {
                                let mut alpha = meta.paths[i].clone();
                                let mut beta = meta.paths[j].clone();
                                let wraps = exp.unsigned_abs() as usize;
                                let target = if *exp >= 0 { &mut alpha } else { &mut beta };
                                for _ in 0..wraps {
                                    for e in word {
                                        target.push_unchecked(
                                            e.clone(),
                                            g.range(e).unwrap().clone(),
                                        );
                                    }
                                }
                                let term = self
                                    .alg
                                    .monomial(alpha, beta, c.clone())
                                    .expect("wrapped paths share the base");
                                acc = self.alg.add(&acc, &term).expect("same algebra");
                            }
                        }
                    }
                }
                _ => unreachable!("block kinds fixed at construction"),
            }
        }
        acc
    }

    /// The shift element of the block anchored at `v`: `Σ p_i p_{i+1}*` over
    /// the block's path basis. Its nilpotency index equals the block size.
    pub fn shift_element(&self, v: &VertexId) -> Option<AlgebraElement> {
        let meta = self.blocks.iter().find(|b| &b.anchor == v)?;
        Some(self.alg.shift(&meta.paths).expect("paths share a range"))
    }

    /// Anchor of a block of maximal size.
    pub fn largest_block_anchor(&self) -> Option<&VertexId> {
        self.blocks
            .iter()
            .max_by_key(|b| b.paths.len())
            .map(|b| &b.anchor)
    }

    /// Samples random element pairs and checks multiplicativity and the star
    /// compatibility of the representation.
    pub fn verify_homomorphism(&self, trials: usize, seed: u64) -> HomomorphismReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max_len = self.alg.graph().vertex_count() + 2;
        for trial in 0..trials {
            let x = sampling::element(&self.alg, &mut rng, 3, max_len);
            let y = sampling::element(&self.alg, &mut rng, 3, max_len);
            let xy = self.alg.mul(&x, &y).expect("same algebra");
            let lhs = self.represent(&xy).expect("own element");
            let rhs = self
                .represent(&x)
                .expect("own element")
                .matmul(&self.represent(&y).expect("own element"));
            if lhs != rhs {
                return HomomorphismReport {
                    trials,
                    passed: false,
                    failure: Some(format!("multiplicativity failed at trial {trial}: ({x})({y})")),
                };
            }
            let star_lhs = self.represent(&self.alg.star(&x)).expect("own element");
            let star_rhs = self.represent(&x).expect("own element").conjugate_transpose();
            if star_lhs != star_rhs {
                return HomomorphismReport {
                    trials,
                    passed: false,
                    failure: Some(format!("star compatibility failed at trial {trial}: {x}")),
                };
            }
        }
        HomomorphismReport {
            trials,
            passed: true,
            failure: None,
        }
    }

    /// A random nilpotent element: pull back a strictly triangular matrix
    /// (under a random basis permutation) through the representation.
    pub fn random_nilpotent(&self, rng: &mut impl Rng) -> AlgebraElement {
        let mut m = self.zero_matrix();
        for (bi, meta) in self.blocks.iter().enumerate() {
            let n = meta.paths.len();
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(0.5) {
                        continue;
                    }
                    match &mut m.blocks[bi].1 {
                        BlockData::Rational(mat) => {
                            mat.set(perm[i], perm[j], sampling::small_rational(rng));
                        }
                        BlockData::Laurent(mat) => {
                            let exp = rng.gen_range(-1..=1);
                            mat.set(
                                perm[i],
                                perm[j],
                                LaurentPoly::monomial(exp, sampling::small_rational(rng)),
                            );
                        }
                    }
                }
            }
        }
        self.element_from_matrix(&m)
    }

    /// A random element of the image ring, drawn entrywise.
    fn random_matrix(&self, rng: &mut impl Rng) -> BlockMatrix {
        let mut m = self.zero_matrix();
        for (bi, meta) in self.blocks.iter().enumerate() {
            let n = meta.paths.len();
            for i in 0..n {
                for j in 0..n {
                    if rng.gen_bool(0.4) {
                        continue;
                    }
                    match &mut m.blocks[bi].1 {
                        BlockData::Rational(mat) => {
                            mat.set(i, j, sampling::small_rational(rng));
                        }
                        BlockData::Laurent(mat) => {
                            let exp = rng.gen_range(-1..=1);
                            mat.set(i, j, LaurentPoly::monomial(exp, sampling::small_rational(rng)));
                        }
                    }
                }
            }
        }
        m
    }

    /// Samples `m` orthogonal diagonal idempotents `e_1, …, e_m` and random
    /// ring elements `r_1, …, r_{m−1}`, and tests whether every product
    /// `e_1 r_1 e_2 ⋯ r_{m−1} e_m` vanishes.
    pub fn orthogonal_idempotent_probe(&self, m: usize, trials: usize, seed: u64) -> bool {
        assert!(m >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let mut idempotents = vec![self.zero_matrix(); m];
            for (bi, meta) in self.blocks.iter().enumerate() {
                for slot in 0..meta.paths.len() {
                    // label 0 leaves the slot unused
                    let label = rng.gen_range(0..=m);
                    if label == 0 {
                        continue;
                    }
                    match &mut idempotents[label - 1].blocks[bi].1 {
                        BlockData::Rational(mat) => mat.set(slot, slot, BigRational::one()),
                        BlockData::Laurent(mat) => mat.set(slot, slot, LaurentPoly::one()),
                    }
                }
            }
            let mut product = idempotents[0].clone();
            for e_next in idempotents.iter().skip(1) {
                let filler = self.random_matrix(&mut rng);
                product = product.matmul(&filler).matmul(e_next);
            }
            if !product.is_zero() {
                return false;
            }
        }
        true
    }
}

fn arc_to_base(g: &Graph, word: &[EdgeId], from: &VertexId) -> Path {
    let base = g.source(&word[0]).expect("cycle edge").clone();
    if *from == base {
        return Path::trivial(base);
    }
    let pos = word
        .iter()
        .position(|e| g.source(e).unwrap() == from)
        .expect("vertex lies on the cycle");
    Path::from_edges(g, word[pos..].to_vec()).expect("cycle arc composes")
}

/// Splits a path ending at the cycle base into full wraps and a remainder
/// that no longer ends with the cycle word.
fn peel_wraps(g: &Graph, word: &[EdgeId], path: &Path) -> (i64, Path) {
    let mut edges = path.edges().to_vec();
    let mut wraps = 0i64;
    while edges.len() >= word.len() && edges[edges.len() - word.len()..] == *word {
        edges.truncate(edges.len() - word.len());
        wraps += 1;
    }
    let base = g.source(&word[0]).unwrap().clone();
    let remainder = if edges.is_empty() {
        Path::trivial(base)
    } else {
        Path::from_edges(g, edges).expect("prefix of a valid path composes")
    };
    (wraps, remainder)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomomorphismReport {
    pub trials: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Convenience wrapper asserting agreement of the algebra-side and
/// matrix-side nilpotency searches.
pub fn nilpotency_agreement(
    rep: &Representation,
    a: &AlgebraElement,
    bound: usize,
) -> (crate::algebra::Nilpotency, MatrixNilpotency) {
    let alg_side = rep.algebra().nilpotency_index(a, bound);
    let mat_side = matrix_nilpotency_index(&rep.represent(a).expect("own element"));
    (alg_side, mat_side)
}
