//! Finite ternary groupoids represented as multiplication cubes, and the
//! structure checks that make them ternary groups: associativity, the
//! quasigroup conditions, skew elements, the knot-theoretic operation `T`
//! and its three divisions, and reducibility to a binary group.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::par_map_range;

/// An element of a cube, stored 0-based. All I/O renders elements 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Element(pub usize);

impl Element {
    pub fn one_based(self) -> usize {
        self.0 + 1
    }
}

/// An order-n ternary operation table, indexed a-major: entry for
/// `[a b c]` sits at `(a*n + b)*n + c`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TernaryCube {
    order: usize,
    table: Vec<Element>,
    pub name: Option<String>,
}

/// Skew elements: `skew[a]` is the unique solution of `[a a x] = a`.
#[derive(Clone, Debug)]
pub struct SkewTable {
    skew: Vec<Element>,
}

impl SkewTable {
    pub fn get(&self, a: Element) -> Element {
        self.skew[a.0]
    }

    /// The skew list rendered 1-based, in element order.
    pub fn one_based(&self) -> Vec<usize> {
        self.skew.iter().map(|e| e.one_based()).collect()
    }
}

/// A violation found by `verify_group`.
#[derive(Clone, Debug, Serialize)]
pub enum Witness {
    /// `[[abc]de]`, `[a[bcd]e]`, `[ab[cde]]` disagree for this 5-tuple
    /// (1-based).
    Associativity { tuple: [usize; 5] },
    /// The map in `slot` with the other two arguments fixed is not a
    /// bijection; `pair` is the fixed pair (1-based).
    NotBijective { slot: usize, pair: [usize; 2] },
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub is_semigroup: bool,
    pub is_quasigroup: bool,
    pub witnesses: Vec<Witness>,
}

impl AxiomReport {
    pub fn is_group(&self) -> bool {
        self.is_semigroup && self.is_quasigroup
    }
}

/// The four quasigroup operations derived from a ternary group:
/// `T` itself and its left, middle and right divisions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DivisionKind {
    T,
    L,
    M,
    R,
}

pub const DEFAULT_WITNESS_CAP: usize = 10;

/// On-disk cube format, 1-based.
#[derive(Serialize, Deserialize)]
struct CubeFile {
    order: usize,
    table: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

impl TernaryCube {
    pub fn new(order: usize, table: Vec<Element>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Malformed("cube order must be positive".into()));
        }
        if table.len() != order * order * order {
            return Err(Error::Malformed(format!(
                "table has {} entries, expected {}",
                table.len(),
                order * order * order
            )));
        }
        if let Some(e) = table.iter().find(|e| e.0 >= order) {
            return Err(Error::Malformed(format!(
                "table entry {} out of range for order {order}",
                e.one_based()
            )));
        }
        Ok(TernaryCube {
            order,
            table,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Unchecked raw product on 0-based indices.
    #[inline]
    pub fn m(&self, a: usize, b: usize, c: usize) -> usize {
        self.table[(a * self.order + b) * self.order + c].0
    }

    /// `[a b c]`, with range checking.
    pub fn mul(&self, a: Element, b: Element, c: Element) -> Result<Element> {
        for e in [a, b, c] {
            if e.0 >= self.order {
                return Err(Error::Malformed(format!(
                    "element {} out of range for order {}",
                    e.one_based(),
                    self.order
                )));
            }
        }
        Ok(Element(self.m(a.0, b.0, c.0)))
    }

    /// Axiom violations with `a` as the outermost (or one fixed) argument.
    fn axiom_scan_slice(&self, a: usize, witness_cap: usize) -> (Vec<Witness>, Vec<Witness>) {
        let n = self.order;
        let mut assoc = Vec::new();
        let mut bij = Vec::new();
        'outer: for b in 0..n {
            for c in 0..n {
                let abc = self.m(a, b, c);
                for d in 0..n {
                    let bcd = self.m(b, c, d);
                    for e in 0..n {
                        let x = self.m(abc, d, e);
                        let y = self.m(a, bcd, e);
                        let z = self.m(a, b, self.m(c, d, e));
                        if x != y || y != z {
                            assoc.push(Witness::Associativity {
                                tuple: [a + 1, b + 1, c + 1, d + 1, e + 1],
                            });
                            if assoc.len() >= witness_cap {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        // Slot bijectivity: with (a, b) as the fixed pair.
        let mut seen = vec![false; n];
        for b in 0..n {
            for slot in 0..3usize {
                seen.iter_mut().for_each(|s| *s = false);
                let mut ok = true;
                for x in 0..n {
                    let v = match slot {
                        0 => self.m(x, a, b),
                        1 => self.m(a, x, b),
                        _ => self.m(a, b, x),
                    };
                    if seen[v] {
                        ok = false;
                        break;
                    }
                    seen[v] = true;
                }
                if !ok && bij.len() < witness_cap {
                    bij.push(Witness::NotBijective {
                        slot,
                        pair: [a + 1, b + 1],
                    });
                }
            }
        }
        (assoc, bij)
    }

    fn merge_axiom_slices(
        per_a: Vec<(Vec<Witness>, Vec<Witness>)>,
        witness_cap: usize,
    ) -> AxiomReport {
        let mut witnesses = Vec::new();
        let mut is_semigroup = true;
        let mut is_quasigroup = true;
        for (assoc, bij) in per_a {
            is_semigroup &= assoc.is_empty();
            is_quasigroup &= bij.is_empty();
            for w in assoc.into_iter().chain(bij) {
                if witnesses.len() < witness_cap {
                    witnesses.push(w);
                }
            }
        }
        AxiomReport {
            is_semigroup,
            is_quasigroup,
            witnesses,
        }
    }

    /// Full axiom scan: all n^5 associativity triples and per-slot
    /// bijectivity with the other two arguments fixed. Witness list is
    /// truncated to `witness_cap` entries.
    pub fn verify_group_with_cap(&self, witness_cap: usize) -> AxiomReport {
        let n = self.order;
        // Per outer index a, collect local violations (truncated), then
        // merge in order so the report is deterministic under parallelism.
        let per_a = par_map_range(n, |a| self.axiom_scan_slice(a, witness_cap));
        Self::merge_axiom_slices(per_a, witness_cap)
    }

    /// Sequential axiom scan with the same output as `verify_group`.
    pub fn verify_group_seq(&self) -> AxiomReport {
        let n = self.order;
        let per_a = crate::par::seq_map_range(n, |a| {
            self.axiom_scan_slice(a, DEFAULT_WITNESS_CAP)
        });
        Self::merge_axiom_slices(per_a, DEFAULT_WITNESS_CAP)
    }

    pub fn verify_group(&self) -> AxiomReport {
        self.verify_group_with_cap(DEFAULT_WITNESS_CAP)
    }

    /// Skew elements for all of X, with the standard identities asserted:
    /// the four border identities, the anti-homomorphism property of the
    /// skew map over products, and involutivity.
    pub fn skew_table(&self) -> Result<SkewTable> {
        let n = self.order;
        let mut skew = Vec::with_capacity(n);
        for a in 0..n {
            let sols: Vec<usize> = (0..n).filter(|&x| self.m(a, a, x) == a).collect();
            match sols.as_slice() {
                [x] => skew.push(Element(*x)),
                [] => {
                    return Err(Error::NotAGroup(format!(
                        "[{0} {0} x] = {0} has no solution",
                        a + 1
                    )))
                }
                _ => {
                    return Err(Error::NotAGroup(format!(
                        "[{0} {0} x] = {0} has multiple solutions",
                        a + 1
                    )))
                }
            }
        }
        let t = SkewTable { skew };
        for a in 0..n {
            let sa = t.skew[a].0;
            if t.skew[sa].0 != a {
                return Err(Error::NotAGroup(format!("skew of {} is not involutive", a + 1)));
            }
            for b in 0..n {
                let border = [
                    self.m(b, a, sa),
                    self.m(b, sa, a),
                    self.m(a, sa, b),
                    self.m(sa, a, b),
                ];
                if border.iter().any(|&v| v != b) {
                    return Err(Error::NotAGroup(format!(
                        "border identity fails for a={}, b={}",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = t.skew[self.m(a, b, c)].0;
                    let rhs = self.m(t.skew[c].0, t.skew[b].0, t.skew[a].0);
                    if lhs != rhs {
                        return Err(Error::NotAGroup(format!(
                            "skew([{} {} {}]) != [c̄ b̄ ā]",
                            a + 1,
                            b + 1,
                            c + 1
                        )));
                    }
                }
            }
        }
        Ok(t)
    }

    /// `T` and its divisions: `abcT = [a b̄ c]`, `abcL = [a c̄ b]`,
    /// `abcM = [c b̄ a]`, `abcR = [b ā c]`.
    pub fn division(
        &self,
        skew: &SkewTable,
        kind: DivisionKind,
        a: Element,
        b: Element,
        c: Element,
    ) -> Result<Element> {
        for e in [a, b, c] {
            if e.0 >= self.order {
                return Err(Error::Malformed(format!(
                    "element {} out of range",
                    e.one_based()
                )));
            }
        }
        let s = |e: Element| skew.get(e).0;
        let v = match kind {
            DivisionKind::T => self.m(a.0, s(b), c.0),
            DivisionKind::L => self.m(a.0, s(c), b.0),
            DivisionKind::M => self.m(c.0, s(b), a.0),
            DivisionKind::R => self.m(b.0, s(a), c.0),
        };
        Ok(Element(v))
    }

    /// `abcT = [a b̄ c]` on raw indices, for hot loops.
    #[inline]
    pub fn t_op(&self, skew: &SkewTable, a: usize, b: usize, c: usize) -> usize {
        self.m(a, skew.skew[b].0, c)
    }

    /// Searches for a binary group structure `x ∘ y = [x ē y]` whose triple
    /// product reproduces the cube. Candidate identities are the
    /// idempotents (a derived operation forces `[eee] = e`). Returns the
    /// first witness in element order, with the binary Cayley table.
    pub fn is_reducible(&self) -> Option<(Element, Vec<Element>)> {
        let n = self.order;
        'cand: for e in 0..n {
            if self.m(e, e, e) != e {
                continue;
            }
            let mut bin = Vec::with_capacity(n * n);
            // x ∘ y = [x ē y]; ē is the unique z with [e e z] = e.
            let eskew = (0..n).find(|&z| self.m(e, e, z) == e)?;
            for x in 0..n {
                for y in 0..n {
                    bin.push(Element(self.m(x, eskew, y)));
                }
            }
            for a in 0..n {
                for b in 0..n {
                    let ab = bin[a * n + b].0;
                    for c in 0..n {
                        if bin[ab * n + c].0 != self.m(a, b, c) {
                            continue 'cand;
                        }
                    }
                }
            }
            return Some((Element(e), bin));
        }
        None
    }

    /// Applies a relabeling: `new[p(a) p(b) p(c)] = p(old[a b c])`.
    pub fn relabel(&self, perm: &[usize]) -> Result<TernaryCube> {
        let n = self.order;
        if perm.len() != n {
            return Err(Error::Malformed("permutation length mismatch".into()));
        }
        let mut table = vec![Element(0); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    table[(perm[a] * n + perm[b]) * n + perm[c]] =
                        Element(perm[self.m(a, b, c)]);
                }
            }
        }
        TernaryCube::new(n, table)
    }

    /// True when some relabeling carries `self` onto `other`.
    pub fn find_isomorphism(&self, other: &TernaryCube) -> Option<Vec<usize>> {
        if self.order != other.order {
            return None;
        }
        let n = self.order;
        let mut perm: Vec<usize> = (0..n).collect();
        permute_search(&mut perm, 0, &mut |p| {
            (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| p[self.m(a, b, c)] == other.m(p[a], p[b], p[c])))
            })
        })
    }

    pub fn to_json(&self) -> String {
        let f = CubeFile {
            order: self.order,
            table: self.table.iter().map(|e| e.one_based()).collect(),
            name: self.name.clone(),
        };
        serde_json::to_string_pretty(&f).expect("cube serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: CubeFile = serde_json::from_str(s)?;
        let table = f
            .table
            .iter()
            .map(|&v| {
                if v == 0 || v > f.order {
                    Err(Error::Malformed(format!("1-based entry {v} out of range")))
                } else {
                    Ok(Element(v - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cube = TernaryCube::new(f.order, table)?;
        cube.name = f.name;
        Ok(cube)
    }

    /// Plain-text slice format: one n×n block per fixed first argument,
    /// mirroring the usual way these cubes are printed.
    pub fn to_slices_text(&self) -> String {
        let n = self.order;
        let mut out = String::new();
        for a in 0..n {
            out.push_str(&format!("# slice a={}\n", a + 1));
            for b in 0..n {
                let row: Vec<String> = (0..n)
                    .map(|c| (self.m(a, b, c) + 1).to_string())
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

fn permute_search(
    perm: &mut Vec<usize>,
    k: usize,
    check: &mut impl FnMut(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    let n = perm.len();
    if k == n {
        return check(perm).then(|| perm.clone());
    }
    for i in k..n {
        perm.swap(k, i);
        if let Some(p) = permute_search(perm, k + 1, check) {
            return Some(p);
        }
        perm.swap(k, i);
    }
    None
}

/// The cyclic cube `[a b c] = a + b + c (mod n)`, derived from Z_n.
pub fn cyclic_cube(n: usize) -> TernaryCube {
    let mut table = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                table.push(Element((a + b + c) % n));
            }
        }
    }
    TernaryCube::new(n, table).unwrap().with_name(format!("cyclic-{n}"))
}

/// The published multiplication cube of the odd part of the (2,2,3)
/// triangle group, six 6×6 slices with the standard element numbering
/// 1) c, 2) a, 3) b, 4) acb, 5) bcb, 6) abc.
pub fn reference_cube_2_2_3() -> TernaryCube {
    const SLICES: [[[usize; 6]; 6]; 6] = [
        [
            [1, 2, 3, 4, 5, 6],
            [2, 1, 4, 3, 6, 5],
            [5, 4, 1, 6, 3, 2],
            [6, 3, 2, 5, 4, 1],
            [3, 6, 5, 2, 1, 4],
            [4, 5, 6, 1, 2, 3],
        ],
        [
            [2, 1, 4, 3, 6, 5],
            [1, 2, 3, 4, 5, 6],
            [6, 3, 2, 5, 4, 1],
            [5, 4, 1, 6, 3, 2],
            [4, 5, 6, 1, 2, 3],
            [3, 6, 5, 2, 1, 4],
        ],
        [
            [3, 6, 5, 2, 1, 4],
            [6, 3, 2, 5, 4, 1],
            [1, 2, 3, 4, 5, 6],
            [4, 5, 6, 1, 2, 3],
            [5, 4, 1, 6, 3, 2],
            [2, 1, 4, 3, 6, 5],
        ],
        [
            [4, 5, 6, 1, 2, 3],
            [5, 4, 1, 6, 3, 2],
            [2, 1, 4, 3, 6, 5],
            [3, 6, 5, 2, 1, 4],
            [6, 3, 2, 5, 4, 1],
            [1, 2, 3, 4, 5, 6],
        ],
        [
            [5, 4, 1, 6, 3, 2],
            [4, 5, 6, 1, 2, 3],
            [3, 6, 5, 2, 1, 4],
            [2, 1, 4, 3, 6, 5],
            [1, 2, 3, 4, 5, 6],
            [6, 3, 2, 5, 4, 1],
        ],
        [
            [6, 3, 2, 5, 4, 1],
            [3, 6, 5, 2, 1, 4],
            [4, 5, 6, 1, 2, 3],
            [1, 2, 3, 4, 5, 6],
            [2, 1, 4, 3, 6, 5],
            [5, 4, 1, 6, 3, 2],
        ],
    ];
    let mut table = Vec::with_capacity(216);
    for slice in &SLICES {
        for row in slice {
            for &v in row {
                table.push(Element(v - 1));
            }
        }
    }
    TernaryCube::new(6, table)
        .unwrap()
        .with_name("reference-triangle-2-2-3")
}
