//! The chain complex of a ternary group: tuples as free generators, the
//! two-sided differential, the degenerate subcomplex, and boundary
//! matrices of the quotient complex with deterministic lexicographic
//! bases.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::cube::{SkewTable, TernaryCube};
use crate::error::{Error, Result};
use crate::par::{par_map_range, seq_map_range};

/// A degree-n generator is an (n+2)-tuple of elements, stored 0-based.
pub type Tuple = Vec<usize>;

/// A sparse integer combination of same-degree tuples. Zero coefficients
/// are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub degree: i64,
    pub terms: HashMap<Tuple, i64>,
}

impl Chain {
    pub fn zero(degree: i64) -> Self {
        Chain {
            degree,
            terms: HashMap::new(),
        }
    }

    pub fn add_term(&mut self, t: Tuple, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(t) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&mut self, other: &Chain) {
        for (t, &c) in &other.terms {
            self.add_term(t.clone(), c);
        }
    }

    pub fn negate(&mut self) {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms(degree: i64, terms: impl IntoIterator<Item = (Tuple, i64)>) -> Self {
        let mut c = Chain::zero(degree);
        for (t, coeff) in terms {
            c.add_term(t, coeff);
        }
        c
    }

    /// Drops every degenerate tuple: projection to the quotient complex.
    pub fn project(&self, cube: &TernaryCube, skew: &SkewTable) -> Chain {
        let mut out = Chain::zero(self.degree);
        for (t, &c) in &self.terms {
            if !is_degenerate(cube, skew, t) {
                out.add_term(t.clone(), c);
            }
        }
        out
    }

    /// Tuples in lexicographic order with their coefficients, 1-based.
    pub fn sorted_terms_one_based(&self) -> Vec<(Vec<usize>, i64)> {
        let mut v: Vec<(Vec<usize>, i64)> = self
            .terms
            .iter()
            .map(|(t, &c)| (t.iter().map(|&e| e + 1).collect(), c))
            .collect();
        v.sort();
        v
    }
}

/// Which half of the differential to take.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundaryPart {
    Full,
    Left,
    Right,
}

/// The differential of a single tuple. Degree is `t.len() - 2`; degrees
/// below 0 map to zero. The left part keeps the leading face and rewrites
/// the prefix through `[x_j x̄_i x_{i+1}]`; the right part keeps the
/// trailing face and rewrites the suffix through `[x_{i-1} x̄_i x_j]`;
/// the full differential is their difference.
pub fn boundary(cube: &TernaryCube, skew: &SkewTable, t: &[usize], part: BoundaryPart) -> Chain {
    let n = t.len() as i64 - 2;
    let mut out = Chain::zero(n - 1);
    if n < 0 {
        return out;
    }
    if n == 0 {
        // d(x0, x1) = x1 - x0
        match part {
            BoundaryPart::Full => {
                out.add_term(vec![t[1]], 1);
                out.add_term(vec![t[0]], -1);
            }
            BoundaryPart::Left => out.add_term(vec![t[1]], 1),
            BoundaryPart::Right => out.add_term(vec![t[0]], 1),
        }
        return out;
    }
    let n = n as usize;
    let bracket = |a: usize, b: usize, c: usize| cube.m(a, skew.get(crate::cube::Element(b)).0, c);
    let want_left = matches!(part, BoundaryPart::Full | BoundaryPart::Left);
    let want_right = matches!(part, BoundaryPart::Full | BoundaryPart::Right);
    // Right-part terms enter the full differential with sign flipped.
    let right_sign = if part == BoundaryPart::Full { -1 } else { 1 };
    if want_left {
        out.add_term(t[1..].to_vec(), 1);
    }
    if want_right {
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        out.add_term(t[..t.len() - 1].to_vec(), sign * right_sign);
    }
    for i in 1..=n {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        if want_left {
            let mut face = Vec::with_capacity(t.len() - 1);
            for j in 0..i {
                face.push(bracket(t[j], t[i], t[i + 1]));
            }
            face.extend_from_slice(&t[i + 1..]);
            out.add_term(face, sign);
        }
        if want_right {
            let mut face = Vec::with_capacity(t.len() - 1);
            face.extend_from_slice(&t[..i]);
            for j in i + 1..t.len() {
                face.push(bracket(t[i - 1], t[i], t[j]));
            }
            out.add_term(face, -sign * right_sign);
        }
    }
    out
}

/// Degenerate tuples: some window of three consecutive entries is
/// `(a, b, [b ā b])` or `([b ā b], b, a)`. Degrees below 1 are never
/// degenerate.
pub fn is_degenerate(cube: &TernaryCube, skew: &SkewTable, t: &[usize]) -> bool {
    if t.len() < 3 {
        return false;
    }
    t.windows(3).any(|w| {
        let (u, v, x) = (w[0], w[1], w[2]);
        x == cube.m(v, skew.get(crate::cube::Element(u)).0, v)
            || u == cube.m(v, skew.get(crate::cube::Element(x)).0, v)
    })
}

/// All non-degenerate tuples of the given degree, lexicographic on the
/// 0-based entries (equivalently on the 1-based rendering).
pub fn nondegenerate_basis(
    cube: &TernaryCube,
    skew: &SkewTable,
    degree: i64,
    max_basis: usize,
) -> Result<Vec<Tuple>> {
    let len = degree + 2;
    if len < 1 {
        return Err(Error::Malformed(format!("no tuple basis in degree {degree}")));
    }
    let len = len as usize;
    let n = cube.order();
    let total = n.checked_pow(len as u32).ok_or_else(|| {
        Error::ResourceLimit(format!("basis size overflow in degree {degree}"))
    })?;
    if total > max_basis {
        return Err(Error::ResourceLimit(format!(
            "degree {degree} basis would enumerate {total} tuples (cap {max_basis})"
        )));
    }
    let mut basis = Vec::new();
    let mut t = vec![0usize; len];
    loop {
        if !is_degenerate(cube, skew, &t) {
            basis.push(t.clone());
        }
        // lexicographic increment
        let mut k = len;
        loop {
            if k == 0 {
                return Ok(basis);
            }
            k -= 1;
            t[k] += 1;
            if t[k] < n {
                break;
            }
            t[k] = 0;
        }
    }
}

/// The matrix of the induced differential on the quotient complex, from
/// the non-degenerate degree-`degree` basis to the degree-`degree - 1`
/// basis. Columns hold sparse (row, coefficient) pairs sorted by row.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub degree: i64,
    pub rows: Vec<Tuple>,
    pub cols: Vec<Tuple>,
    pub columns: Vec<Vec<(usize, i64)>>,
}

pub const DEFAULT_MAX_BASIS: usize = 1 << 22;

impl BoundaryMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Expands a chain into a coefficient vector over this matrix's
    /// column basis, projecting out degenerate tuples. Errors if a
    /// non-degenerate tuple of the chain is missing from the basis.
    pub fn chain_to_col_vector(
        &self,
        cube: &TernaryCube,
        skew: &SkewTable,
        z: &Chain,
    ) -> Result<Vec<i64>> {
        let index: HashMap<&Tuple, usize> =
            self.cols.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut v = vec![0i64; self.cols.len()];
        for (t, &c) in &z.terms {
            if is_degenerate(cube, skew, t) {
                continue;
            }
            let i = index.get(t).ok_or_else(|| {
                Error::Malformed(format!("tuple {t:?} not in degree {} basis", self.degree))
            })?;
            v[*i] += c;
        }
        Ok(v)
    }

    /// Sparse triplet export: header `degree nrows ncols`, then one
    /// `row col value` line per entry (0-based indices).
    pub fn to_triplet_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# degree {} rows {} cols {}", self.degree, self.nrows(), self.ncols())
            .unwrap();
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                writeln!(out, "{i} {j} {v}").unwrap();
            }
        }
        out
    }
}

fn assemble_column(
    cube: &TernaryCube,
    skew: &SkewTable,
    row_index: &HashMap<Tuple, usize>,
    t: &Tuple,
) -> Vec<(usize, i64)> {
    let b = boundary(cube, skew, t, BoundaryPart::Full);
    let mut entries: Vec<(usize, i64)> = b
        .terms
        .iter()
        .filter_map(|(face, &c)| row_index.get(face).map(|&i| (i, c)))
        .collect();
    entries.sort_unstable();
    entries
}

fn boundary_matrix_impl(
    cube: &TernaryCube,
    skew: &SkewTable,
    degree: i64,
    max_basis: usize,
    parallel: bool,
) -> Result<BoundaryMatrix> {
    if degree < 0 {
        return Err(Error::Malformed("boundary matrices start at degree 0".into()));
    }
    let rows = nondegenerate_basis(cube, skew, degree - 1, max_basis)?;
    let cols = nondegenerate_basis(cube, skew, degree, max_basis)?;
    let row_index: HashMap<Tuple, usize> = rows
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let columns = if parallel {
        par_map_range(cols.len(), |j| assemble_column(cube, skew, &row_index, &cols[j]))
    } else {
        seq_map_range(cols.len(), |j| assemble_column(cube, skew, &row_index, &cols[j]))
    };
    Ok(BoundaryMatrix {
        degree,
        rows,
        cols,
        columns,
    })
}

pub fn boundary_matrix(cube: &TernaryCube, skew: &SkewTable, degree: i64) -> Result<BoundaryMatrix> {
    boundary_matrix_impl(cube, skew, degree, DEFAULT_MAX_BASIS, true)
}

pub fn boundary_matrix_with_cap(
    cube: &TernaryCube,
    skew: &SkewTable,
    degree: i64,
    max_basis: usize,
) -> Result<BoundaryMatrix> {
    boundary_matrix_impl(cube, skew, degree, max_basis, true)
}

/// Sequential assembly with identical output, kept for benchmarking.
pub fn boundary_matrix_seq(
    cube: &TernaryCube,
    skew: &SkewTable,
    degree: i64,
) -> Result<BoundaryMatrix> {
    boundary_matrix_impl(cube, skew, degree, DEFAULT_MAX_BASIS, false)
}

/// First violation found by `verify_complex`.
#[derive(Clone, Debug)]
pub enum ComplexViolation {
    /// d² of this tuple is nonzero (on the full or quotient complex).
    NotSquareZero { tuple: Tuple, quotient: bool },
    /// The boundary of this degenerate tuple has a non-degenerate term.
    SubcomplexEscape { tuple: Tuple },
}

/// Checks, through `max_degree`, that the differential squares to zero on
/// the full and quotient complexes and that the degenerate subcomplex is
/// closed under the differential.
pub fn verify_complex(
    cube: &TernaryCube,
    skew: &SkewTable,
    max_degree: i64,
) -> std::result::Result<(), ComplexViolation> {
    let n = cube.order();
    for degree in 0..=max_degree {
        let len = (degree + 2) as usize;
        let total = n.pow(len as u32);
        let found: Vec<Option<ComplexViolation>> = par_map_range(total, |mut code| {
            let mut t = vec![0usize; len];
            for k in (0..len).rev() {
                t[k] = code % n;
                code /= n;
            }
            let d = boundary(cube, skew, &t, BoundaryPart::Full);
            let mut dd = Chain::zero(degree - 2);
            for (face, &c) in &d.terms {
                let mut b = boundary(cube, skew, face, BoundaryPart::Full);
                for v in b.terms.values_mut() {
                    *v *= c;
                }
                dd.add(&b);
            }
            if !dd.is_zero() {
                return Some(ComplexViolation::NotSquareZero {
                    tuple: t,
                    quotient: false,
                });
            }
            if is_degenerate(cube, skew, &t) {
                // subcomplex closure: every surviving term degenerate
                if d.terms
                    .iter()
                    .any(|(face, &c)| c != 0 && !is_degenerate(cube, skew, face))
                {
                    return Some(ComplexViolation::SubcomplexEscape { tuple: t });
                }
            } else {
                // quotient: project, differentiate, project
                let dq = d.project(cube, skew);
                let mut ddq = Chain::zero(degree - 2);
                for (face, &c) in &dq.terms {
                    let mut b = boundary(cube, skew, face, BoundaryPart::Full);
                    for v in b.terms.values_mut() {
                        *v *= c;
                    }
                    ddq.add(&b);
                }
                if !ddq.project(cube, skew).is_zero() {
                    return Some(ComplexViolation::NotSquareZero {
                        tuple: t,
                        quotient: true,
                    });
                }
            }
            None
        });
        if let Some(v) = found.into_iter().flatten().next() {
            return Err(v);
        }
    }
    Ok(())
}
