//! 1-cocycles of the quotient complex with Z_m coefficients, and the
//! state-sum knot invariant they induce.
//!
//! A cocycle is a function f: X³ → Z_m vanishing on degenerate triples
//! with f∘∂₂ = 0. The solution space mod m is read off an exact Smith
//! normal form of the transposed degree-2 boundary matrix: with
//! ∂₂ᵀ = U S V, the condition becomes S(Vf) ≡ 0 (mod m), which frees
//! each V-coordinate to a multiple of m / gcd(dᵢ, m).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::braid::BraidWord;
use crate::chain::{boundary_matrix, is_degenerate, Chain, Tuple};
use crate::coloring::enumerate_colorings;
use crate::cube::{SkewTable, TernaryCube};
use crate::error::{Error, Result};
use crate::par::par_map_range;
use crate::snf::{smith_normal_form, SmithOptions, SparseIntMatrix};

/// A Z_m-valued function on triples, zero outside the stored support.
/// The support only ever contains non-degenerate triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleFunction {
    pub modulus: u64,
    pub values: HashMap<[usize; 3], u64>,
}

impl CocycleFunction {
    pub fn zero(modulus: u64) -> Self {
        CocycleFunction {
            modulus,
            values: HashMap::new(),
        }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> u64 {
        self.values.get(&[a, b, c]).copied().unwrap_or(0)
    }

    pub fn set(&mut self, t: [usize; 3], val: u64) {
        let v = val % self.modulus;
        if v == 0 {
            self.values.remove(&t);
        } else {
            self.values.insert(t, v);
        }
    }

    /// f + g mod m.
    pub fn add(&self, other: &CocycleFunction) -> CocycleFunction {
        assert_eq!(self.modulus, other.modulus);
        let mut out = self.clone();
        for (&t, &v) in &other.values {
            out.set(t, out.get(t[0], t[1], t[2]) + v);
        }
        out
    }

    /// k·f mod m.
    pub fn scale(&self, k: u64) -> CocycleFunction {
        let mut out = CocycleFunction::zero(self.modulus);
        for (&t, &v) in &self.values {
            out.set(t, v.wrapping_mul(k) % self.modulus);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Pairing with an integer chain of degree 1: Σ coeff·f(t) in Z_m.
    pub fn evaluate_chain(&self, z: &Chain) -> u64 {
        let m = self.modulus as i128;
        let mut acc: i128 = 0;
        for (t, &coeff) in &z.terms {
            if t.len() == 3 {
                acc += coeff as i128 * self.get(t[0], t[1], t[2]) as i128;
            }
        }
        acc.rem_euclid(m) as u64
    }

    /// Stable JSON rendering: modulus plus a sorted sparse table with
    /// 1-based triples.
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut entries: Vec<([usize; 3], u64)> = self
            .values
            .iter()
            .map(|(&t, &v)| ([t[0] + 1, t[1] + 1, t[2] + 1], v))
            .collect();
        entries.sort();
        serde_json::json!({
            "modulus": self.modulus,
            "values": entries
                .iter()
                .map(|(t, v)| serde_json::json!({"triple": t, "value": v}))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<CocycleFunction> {
        let modulus = v["modulus"]
            .as_u64()
            .ok_or_else(|| Error::Malformed("cocycle JSON needs a modulus".into()))?;
        if modulus < 2 {
            return Err(Error::Malformed("cocycle modulus must be at least 2".into()));
        }
        let mut f = CocycleFunction::zero(modulus);
        let entries = v["values"]
            .as_array()
            .ok_or_else(|| Error::Malformed("cocycle JSON needs a values array".into()))?;
        for e in entries {
            let t = e["triple"]
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::Malformed("cocycle triple must have 3 entries".into()))?;
            let mut idx = [0usize; 3];
            for (k, x) in t.iter().enumerate() {
                let one_based = x
                    .as_u64()
                    .filter(|&x| x >= 1)
                    .ok_or_else(|| Error::Malformed("cocycle triple entries are 1-based".into()))?;
                idx[k] = one_based as usize - 1;
            }
            let val = e["value"]
                .as_u64()
                .ok_or_else(|| Error::Malformed("cocycle value must be a nonnegative integer".into()))?;
            f.set(idx, val);
        }
        Ok(f)
    }
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::Malformed(format!("modulus {m} must be at least 2")));
    }
    Ok(())
}

fn function_from_column(triples: &[Tuple], modulus: u64, col: &[u64]) -> CocycleFunction {
    let mut f = CocycleFunction::zero(modulus);
    for (t, &v) in triples.iter().zip(col) {
        f.set([t[0], t[1], t[2]], v);
    }
    f
}

/// Generators of the space of mod-m cocycles: solutions f of
/// ∂₂ᵀ f ≡ 0 (mod m) supported on non-degenerate triples. The returned
/// functions generate the solution space as a Z_m-module.
pub fn cocycle_space(cube: &TernaryCube, skew: &SkewTable, m: u64) -> Result<Vec<CocycleFunction>> {
    check_modulus(m)?;
    let d2 = boundary_matrix(cube, skew, 2)?;
    let triples = d2.rows.clone();
    // transpose: rows of A are quadruples, columns are triples
    let mut entries = Vec::new();
    for (j, col) in d2.columns.iter().enumerate() {
        for &(i, v) in col {
            entries.push((j, i, BigInt::from(v)));
        }
    }
    let a = SparseIntMatrix {
        nrows: d2.ncols(),
        ncols: d2.nrows(),
        entries,
    };
    let snf = smith_normal_form(
        &a,
        &SmithOptions {
            track_v_inv: true,
            ..SmithOptions::default()
        },
    )?;
    let v_inv = snf.v_inv.as_ref().expect("V^-1 tracked");
    let big_m = BigInt::from(m);
    let mut basis = Vec::new();
    let mut push_column = |j: usize, scale: &BigInt| {
        let col: Vec<u64> = v_inv
            .iter()
            .map(|row| {
                (&row[j] * scale)
                    .mod_floor(&big_m)
                    .to_u64()
                    .expect("residue fits u64")
            })
            .collect();
        let f = function_from_column(&triples, m, &col);
        if !f.is_zero() {
            basis.push(f);
        }
    };
    for (i, d) in snf.factors.iter().enumerate() {
        // d·y ≡ 0 (mod m) frees y to multiples of m / gcd(d, m)
        let step = &big_m / d.gcd(&big_m);
        if step < big_m {
            push_column(i, &step);
        }
    }
    let one = BigInt::from(1);
    for j in snf.rank()..a.ncols {
        push_column(j, &one);
    }
    Ok(basis)
}

/// Generators of the space of mod-m coboundaries: f = g∘∂₁ with g an
/// indicator function on pairs. These are the rows of the degree-1
/// boundary matrix reduced mod m.
pub fn coboundary_space(
    cube: &TernaryCube,
    skew: &SkewTable,
    m: u64,
) -> Result<Vec<CocycleFunction>> {
    check_modulus(m)?;
    let d1 = boundary_matrix(cube, skew, 1)?;
    let mut rows: Vec<CocycleFunction> = vec![CocycleFunction::zero(m); d1.nrows()];
    for (j, col) in d1.columns.iter().enumerate() {
        let t = &d1.cols[j];
        for &(i, v) in col {
            let val = (v as i128).rem_euclid(m as i128) as u64;
            let prev = rows[i].get(t[0], t[1], t[2]);
            rows[i].set([t[0], t[1], t[2]], prev + val);
        }
    }
    rows.retain(|f| !f.is_zero());
    Ok(rows)
}

/// Checks the cocycle invariants exhaustively: support only on
/// non-degenerate triples and f∘∂₂ = 0 on every non-degenerate
/// quadruple (degenerate ones only hit degenerate faces, where f is
/// zero by construction).
pub fn verify_cocycle(cube: &TernaryCube, skew: &SkewTable, f: &CocycleFunction) -> Result<()> {
    check_modulus(f.modulus)?;
    for (t, &v) in &f.values {
        if v >= f.modulus {
            return Err(Error::Malformed(format!(
                "cocycle value {v} not reduced mod {}",
                f.modulus
            )));
        }
        if is_degenerate(cube, skew, t) {
            return Err(Error::Contract(format!(
                "cocycle is nonzero on the degenerate triple {t:?}"
            )));
        }
    }
    let d2 = boundary_matrix(cube, skew, 2)?;
    let faults = par_map_range(d2.ncols(), |j| {
        let m = f.modulus as i128;
        let mut acc: i128 = 0;
        for &(i, v) in &d2.columns[j] {
            let t = &d2.rows[i];
            acc += v as i128 * f.get(t[0], t[1], t[2]) as i128;
        }
        (acc.rem_euclid(m) != 0).then(|| d2.cols[j].clone())
    });
    if let Some(q) = faults.into_iter().flatten().next() {
        return Err(Error::Contract(format!(
            "cocycle condition fails on the quadruple {q:?}"
        )));
    }
    Ok(())
}

/// The state-sum multiset: `counts[r]` colorings evaluate to residue r.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateSum {
    pub modulus: u64,
    pub counts: Vec<usize>,
}

impl StateSum {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Group-ring rendering, e.g. `36·u^0 + 36·u^1`.
    pub fn to_group_ring_string(&self) -> String {
        let terms: Vec<String> = self
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, c)| format!("{c}·u^{r}"))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Evaluates sign-weighted f over the crossings of every coloring of
/// the braid closure and aggregates the residues.
pub fn state_sum(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
    f: &CocycleFunction,
) -> Result<StateSum> {
    check_modulus(f.modulus)?;
    let colorings = enumerate_colorings(cube, skew, braid)?;
    let m = f.modulus as i128;
    let residues = par_map_range(colorings.len(), |i| {
        let mut acc: i128 = 0;
        for (sign, [a, b, c]) in colorings[i].crossing_triples(braid) {
            acc += sign as i128 * f.get(a, b, c) as i128;
        }
        acc.rem_euclid(m) as usize
    });
    let mut counts = vec![0usize; f.modulus as usize];
    for r in residues {
        counts[r] += 1;
    }
    Ok(StateSum {
        modulus: f.modulus,
        counts,
    })
}
