//! Bigraded polynomial arithmetic on the Cox ring of `X_e` over a prime
//! field, monomial section bases, and the graded-piece matrices of
//! form-valued maps.
//!
//! The four variables are `s0, s1, t0, t1` with degrees
//! `deg s0 = (1,0)`, `deg s1 = (1,e)`, `deg t0 = deg t1 = (0,1)`,
//! so the bidegree-`(t,s)` piece of the ring is exactly `H⁰(O(t·C0 + s·f))`.
//! Divisors are always `(alpha, beta)` coefficients of `C0, f`; no other
//! convention appears below this layer.

use std::collections::BTreeMap;
use std::ops::Mul;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp::{FieldPrime, FpMatrix};
use crate::picard::{Divisor, SurfaceParams};

pub use crate::fp::FieldError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("entry at ({row}, {col}) has degree {got:?}, expected {expected:?}")]
    DegreeMismatch {
        row: usize,
        col: usize,
        expected: Divisor,
        got: Divisor,
    },
    #[error("coefficient {0} is out of range for the field")]
    BadCoefficient(u64),
    #[error("ragged entry matrix: row {0} has wrong length")]
    RaggedEntries(usize),
    #[error("form matrices are not composable: inner twists differ")]
    NotComposable,
}

/// Exponents `(i, j, k, l)` of `s0^i s1^j t0^k t1^l`. Lexicographic order on
/// the exponent vector is the monomial order used everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    pub exps: [u32; 4],
}

impl Monomial {
    pub const S0: Monomial = Monomial { exps: [1, 0, 0, 0] };
    pub const S1: Monomial = Monomial { exps: [0, 1, 0, 0] };
    pub const T0: Monomial = Monomial { exps: [0, 0, 1, 0] };
    pub const T1: Monomial = Monomial { exps: [0, 0, 0, 1] };
    pub const ONE: Monomial = Monomial { exps: [0, 0, 0, 0] };

    pub fn new(i: u32, j: u32, k: u32, l: u32) -> Self {
        Self { exps: [i, j, k, l] }
    }

    /// Bidegree `(i + j, j·e + k + l)`.
    pub fn bidegree(self, e: SurfaceParams) -> Divisor {
        let [i, j, k, l] = self.exps.map(i64::from);
        Divisor::new(i + j, j * e.e() + k + l)
    }

    pub fn evaluate(self, point: [u64; 4], field: FieldPrime) -> u64 {
        let mut acc = 1 % field.p();
        for (coord, exp) in point.iter().zip(self.exps) {
            acc = field.mul(acc, field.pow(*coord, u64::from(exp)));
        }
        acc
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial {
            exps: [
                self.exps[0] + rhs.exps[0],
                self.exps[1] + rhs.exps[1],
                self.exps[2] + rhs.exps[2],
                self.exps[3] + rhs.exps[3],
            ],
        }
    }
}

/// All monomials of bidegree `D`, in lexicographic order. Empty when `t < 0`
/// or when no exponent solution exists; the count always equals `h⁰(O(D))`.
pub fn monomial_basis(e: SurfaceParams, d: Divisor) -> Vec<Monomial> {
    let (t, s) = (d.alpha, d.beta);
    let mut out = Vec::new();
    if t < 0 {
        return out;
    }
    // j descending makes i = t - j ascend, so the output is lex-sorted.
    for j in (0..=t).rev() {
        let rem = s - j * e.e();
        if rem < 0 {
            continue;
        }
        let i = (t - j) as u32;
        for k in 0..=rem {
            out.push(Monomial::new(i, j as u32, k as u32, (rem - k) as u32));
        }
    }
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out
}

/// A bihomogeneous polynomial: a fixed bidegree and a sparse term map with
/// nonzero coefficients in `[1, p-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedPoly {
    degree: Divisor,
    terms: BTreeMap<Monomial, u64>,
}

impl BigradedPoly {
    pub fn zero(degree: Divisor) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Single-term polynomial `c·m`; the degree is read off the monomial.
    pub fn monomial_term(e: SurfaceParams, m: Monomial, c: u64, field: FieldPrime) -> Self {
        let mut poly = Self::zero(m.bidegree(e));
        poly.add_term(m, c, field);
        poly
    }

    pub fn degree(&self) -> Divisor {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: u64, field: FieldPrime) {
        let c = c % field.p();
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m).or_insert(0);
        *entry = field.add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, rhs: &BigradedPoly, field: FieldPrime) -> BigradedPoly {
        debug_assert_eq!(self.degree, rhs.degree);
        let mut out = self.clone();
        for (&m, &c) in &rhs.terms {
            out.add_term(m, c, field);
        }
        out
    }

    /// Product with `deg(f·g) = deg f + deg g`; zero terms are dropped.
    pub fn multiply(&self, rhs: &BigradedPoly, field: FieldPrime) -> BigradedPoly {
        let mut out = BigradedPoly::zero(self.degree + rhs.degree);
        for (&ma, &ca) in &self.terms {
            for (&mb, &cb) in &rhs.terms {
                out.add_term(ma * mb, field.mul(ca, cb), field);
            }
        }
        out
    }

    pub fn evaluate(&self, point: [u64; 4], field: FieldPrime) -> u64 {
        let mut acc = 0;
        for (&m, &c) in &self.terms {
            acc = field.add(acc, field.mul(c, m.evaluate(point, field)));
        }
        acc
    }
}

/// Product of two bigraded polynomials over the given field.
pub fn multiply(f: &BigradedPoly, g: &BigradedPoly, field: FieldPrime) -> BigradedPoly {
    f.multiply(g, field)
}

/// Uniformly random form of bidegree `D`: every basis monomial gets a
/// coefficient drawn from `[0, p)`, zeros dropped. Deterministic given the
/// generator state; the zero form when the basis is empty.
pub fn random_form(
    e: SurfaceParams,
    d: Divisor,
    field: FieldPrime,
    rng: &mut impl Rng,
) -> BigradedPoly {
    let mut poly = BigradedPoly::zero(d);
    for m in monomial_basis(e, d) {
        let c = rng.gen_range(0..field.p());
        poly.add_term(m, c, field);
    }
    poly
}

/// A matrix of bihomogeneous forms representing a map
/// `⊕_j O(col_twist_j) → ⊕_i O(row_twist_i)`; entry `(i, j)` is zero or has
/// bidegree `row_twist_i - col_twist_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "FormMatrixWire", try_from = "FormMatrixWire")]
pub struct FormMatrix {
    surface: SurfaceParams,
    field: FieldPrime,
    row_twists: Vec<Divisor>,
    col_twists: Vec<Divisor>,
    entries: Vec<Vec<BigradedPoly>>,
}

impl FormMatrix {
    pub fn new(
        surface: SurfaceParams,
        field: FieldPrime,
        row_twists: Vec<Divisor>,
        col_twists: Vec<Divisor>,
    ) -> Self {
        let entries = row_twists
            .iter()
            .map(|&r| {
                col_twists
                    .iter()
                    .map(|&c| BigradedPoly::zero(r - c))
                    .collect()
            })
            .collect();
        Self {
            surface,
            field,
            row_twists,
            col_twists,
            entries,
        }
    }

    pub fn surface(&self) -> SurfaceParams {
        self.surface
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.row_twists.len()
    }

    pub fn cols(&self) -> usize {
        self.col_twists.len()
    }

    pub fn row_twists(&self) -> &[Divisor] {
        &self.row_twists
    }

    pub fn col_twists(&self) -> &[Divisor] {
        &self.col_twists
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigradedPoly {
        &self.entries[i][j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, poly: BigradedPoly) -> Result<(), CoxError> {
        let expected = self.row_twists[i] - self.col_twists[j];
        if !poly.is_zero() && poly.degree() != expected {
            return Err(CoxError::DegreeMismatch {
                row: i,
                col: j,
                expected,
                got: poly.degree(),
            });
        }
        self.entries[i][j] = poly;
        Ok(())
    }

    /// The induced map on global sections at the given twist:
    /// `⊕_j H⁰(O(col_j + twist)) → ⊕_i H⁰(O(row_i + twist))` in the monomial
    /// bases, each block acting by multiplication by the matching entry.
    pub fn graded_piece(&self, twist: Divisor) -> GradedPieceMap {
        let e = self.surface;
        let field = self.field;
        let codomain_basis: Vec<Vec<Monomial>> = self
            .row_twists
            .iter()
            .map(|&r| monomial_basis(e, r + twist))
            .collect();
        let domain_basis: Vec<Vec<Monomial>> = self
            .col_twists
            .iter()
            .map(|&c| monomial_basis(e, c + twist))
            .collect();
        let row_dims: Vec<usize> = codomain_basis.iter().map(Vec::len).collect();
        let col_dims: Vec<usize> = domain_basis.iter().map(Vec::len).collect();
        let row_offsets = offsets(&row_dims);
        let col_offsets = offsets(&col_dims);
        let mut matrix = FpMatrix::zeros(field, row_dims.iter().sum(), col_dims.iter().sum());
        for (j, dom) in domain_basis.iter().enumerate() {
            for (dj, &dm) in dom.iter().enumerate() {
                let col = col_offsets[j] + dj;
                for (i, cod) in codomain_basis.iter().enumerate() {
                    for (&m, &c) in self.entries[i][j].terms() {
                        let target = m * dm;
                        let pos = cod
                            .binary_search(&target)
                            .expect("product monomial must lie in the codomain basis");
                        matrix.add_assign_at(row_offsets[i] + pos, col, c);
                    }
                }
            }
        }
        GradedPieceMap {
            matrix,
            domain_basis,
            codomain_basis,
        }
    }

    /// Composition `self ∘ rhs` of maps `rhs: A → B`, `self: B → C`.
    pub fn compose(&self, rhs: &FormMatrix) -> Result<FormMatrix, CoxError> {
        if self.col_twists != rhs.row_twists {
            return Err(CoxError::NotComposable);
        }
        let field = self.field;
        let mut out = FormMatrix::new(
            self.surface,
            field,
            self.row_twists.clone(),
            rhs.col_twists.clone(),
        );
        for i in 0..self.rows() {
            for j in 0..rhs.cols() {
                let mut acc = BigradedPoly::zero(self.row_twists[i] - rhs.col_twists[j]);
                for k in 0..self.cols() {
                    if self.entries[i][k].is_zero() || rhs.entries[k][j].is_zero() {
                        continue;
                    }
                    acc = acc.add(
                        &self.entries[i][k].multiply(&rhs.entries[k][j], field),
                        field,
                    );
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Numeric matrix of the entries at a point of `F_p⁴`.
    pub fn evaluate_at(&self, point: [u64; 4]) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.field, self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                m.set(i, j, self.entries[i][j].evaluate(point, self.field));
            }
        }
        m
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut off = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &d in dims {
        off.push(acc);
        acc += d;
    }
    off
}

/// Wire form of [`FormMatrix`]: `{e, p, row_twists, col_twists, entries}`
/// with each entry a list of `[[i,j,k,l], coeff]` pairs in monomial order.
#[derive(Serialize, Deserialize)]
struct FormMatrixWire {
    e: u32,
    p: u64,
    row_twists: Vec<Divisor>,
    col_twists: Vec<Divisor>,
    entries: Vec<Vec<Vec<(Monomial, u64)>>>,
}

impl From<FormMatrix> for FormMatrixWire {
    fn from(m: FormMatrix) -> Self {
        let entries = m
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|poly| poly.terms().iter().map(|(&mo, &c)| (mo, c)).collect())
                    .collect()
            })
            .collect();
        Self {
            e: m.surface.e() as u32,
            p: m.field.p(),
            row_twists: m.row_twists,
            col_twists: m.col_twists,
            entries,
        }
    }
}

impl TryFrom<FormMatrixWire> for FormMatrix {
    type Error = CoxError;

    fn try_from(w: FormMatrixWire) -> Result<Self, CoxError> {
        let surface = SurfaceParams::new(w.e);
        let field = FieldPrime::new(w.p)?;
        if w.entries.len() != w.row_twists.len() {
            return Err(CoxError::RaggedEntries(w.entries.len()));
        }
        let mut m = FormMatrix::new(surface, field, w.row_twists, w.col_twists);
        for (i, row) in w.entries.into_iter().enumerate() {
            if row.len() != m.col_twists.len() {
                return Err(CoxError::RaggedEntries(i));
            }
            for (j, terms) in row.into_iter().enumerate() {
                let mut poly = BigradedPoly::zero(m.row_twists[i] - m.col_twists[j]);
                for (mo, c) in terms {
                    if c == 0 || c >= field.p() {
                        return Err(CoxError::BadCoefficient(c));
                    }
                    if mo.bidegree(surface) != poly.degree() {
                        return Err(CoxError::DegreeMismatch {
                            row: i,
                            col: j,
                            expected: poly.degree(),
                            got: mo.bidegree(surface),
                        });
                    }
                    poly.add_term(mo, c, field);
                }
                m.entries[i][j] = poly;
            }
        }
        Ok(m)
    }
}

/// The matrix of a graded piece together with the ordered monomial bases
/// (one list per summand) that index its columns and rows.
#[derive(Debug, Clone)]
pub struct GradedPieceMap {
    pub matrix: FpMatrix,
    pub domain_basis: Vec<Vec<Monomial>>,
    pub codomain_basis: Vec<Vec<Monomial>>,
}

/// Outcome of exact elimination: `rank + kernel_dim` is the column count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel_dim: usize,
}

pub fn rank_and_kernel(piece: &GradedPieceMap) -> RankKernel {
    let rank = piece.matrix.rank();
    RankKernel {
        rank,
        kernel_dim: piece.matrix.cols() - rank,
    }
}
