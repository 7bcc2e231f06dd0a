//! Region colorings of braid closures by a ternary group.
//!
//! A k-strand braid has k+1 gap regions per horizontal level. Sweeping
//! top to bottom, the crossing for letter ±i rewrites gap i only: at a
//! positive crossing with left gap a, upper middle b and right gap c the
//! new middle is d = [a b̄ c]; at a negative crossing the new middle is
//! the solution d of [a d̄ c] = b, which is d = [c b̄ a]. The closure
//! accepts exactly the sweeps whose bottom gaps equal their top gaps.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::braid::BraidWord;
use crate::chain::{boundary, BoundaryPart, Chain};
use crate::cube::{Element, SkewTable, TernaryCube};
use crate::error::{Error, Result};
use crate::homology::{ClassCoordinates, HomologyClassifier};
use crate::par::{par_map_range, seq_map_range};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionColoring {
    /// Colors of the k+1 gaps at the top of the braid.
    pub top_gaps: Vec<Element>,
    /// Gap colors after each crossing, one row per letter.
    pub level_gaps: Vec<Vec<Element>>,
}

impl RegionColoring {
    /// The relation triple (a, b, c) and sign at each crossing: at a
    /// positive crossing b is the upper middle gap, at a negative one
    /// the lower middle gap, so that the relation reads d = [a b̄ c] in
    /// both cases.
    pub fn crossing_triples(&self, braid: &BraidWord) -> Vec<(i64, [usize; 3])> {
        let mut out = Vec::with_capacity(braid.letters.len());
        let mut cur: Vec<usize> = self.top_gaps.iter().map(|e| e.0).collect();
        for (level, &letter) in braid.letters.iter().enumerate() {
            let i = letter.unsigned_abs() as usize;
            let next: Vec<usize> = self.level_gaps[level].iter().map(|e| e.0).collect();
            let (a, c) = (cur[i - 1], cur[i + 1]);
            if letter > 0 {
                out.push((1, [a, cur[i], c]));
            } else {
                out.push((-1, [a, next[i], c]));
            }
            cur = next;
        }
        out
    }
}

pub const DEFAULT_SWEEP_BUDGET: usize = 1 << 26;

fn sweep_raw(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
    top: &[usize],
) -> Option<Vec<Vec<usize>>> {
    let mut cur = top.to_vec();
    let mut levels = Vec::with_capacity(braid.letters.len());
    for &letter in &braid.letters {
        let i = letter.unsigned_abs() as usize;
        let (a, b, c) = (cur[i - 1], cur[i], cur[i + 1]);
        let d = if letter > 0 {
            cube.t_op(skew, a, b, c)
        } else {
            cube.m(c, skew.get(Element(b)).0, a)
        };
        cur[i] = d;
        levels.push(cur.clone());
    }
    (cur == top).then_some(levels)
}

/// Sweeps one top assignment; None when the closure condition fails.
pub fn sweep_coloring(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
    top: &[Element],
) -> Result<Option<RegionColoring>> {
    if top.len() != braid.gaps() {
        return Err(Error::Malformed(format!(
            "expected {} top gap colors, got {}",
            braid.gaps(),
            top.len()
        )));
    }
    for e in top {
        if e.0 >= cube.order() {
            return Err(Error::Malformed(format!(
                "color {} out of range",
                e.one_based()
            )));
        }
    }
    let raw: Vec<usize> = top.iter().map(|e| e.0).collect();
    Ok(sweep_raw(cube, skew, braid, &raw).map(|levels| RegionColoring {
        top_gaps: top.to_vec(),
        level_gaps: levels
            .into_iter()
            .map(|row| row.into_iter().map(Element).collect())
            .collect(),
    }))
}

fn enumerate_block(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
    first: usize,
) -> Vec<RegionColoring> {
    let n = cube.order();
    let gaps = braid.gaps();
    let rest = gaps - 1;
    let mut out = Vec::new();
    let mut top = vec![0usize; gaps];
    top[0] = first;
    let total = n.pow(rest as u32);
    for mut code in 0..total {
        for k in (1..gaps).rev() {
            top[k] = code % n;
            code /= n;
        }
        if let Some(levels) = sweep_raw(cube, skew, braid, &top) {
            out.push(RegionColoring {
                top_gaps: top.iter().copied().map(Element).collect(),
                level_gaps: levels
                    .into_iter()
                    .map(|row| row.into_iter().map(Element).collect())
                    .collect(),
            });
        }
    }
    out
}

fn enumerate_impl(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
    budget: usize,
    parallel: bool,
) -> Result<Vec<RegionColoring>> {
    let n = cube.order();
    let space = n
        .checked_pow(braid.gaps() as u32)
        .ok_or_else(|| Error::ResourceLimit("assignment space overflows".into()))?;
    if space > budget {
        return Err(Error::ResourceLimit(format!(
            "{space} top assignments exceed the sweep budget {budget}"
        )));
    }
    let blocks = if parallel {
        par_map_range(n, |first| enumerate_block(cube, skew, braid, first))
    } else {
        seq_map_range(n, |first| enumerate_block(cube, skew, braid, first))
    };
    Ok(blocks.into_iter().flatten().collect())
}

/// All valid region colorings, by exhaustive sweep over the n^(k+1) top
/// assignments.
pub fn enumerate_colorings(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
) -> Result<Vec<RegionColoring>> {
    enumerate_impl(cube, skew, braid, DEFAULT_SWEEP_BUDGET, true)
}

pub fn enumerate_colorings_with_budget(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
    budget: usize,
) -> Result<Vec<RegionColoring>> {
    enumerate_impl(cube, skew, braid, budget, true)
}

/// Sequential enumeration with identical output, kept for benchmarking.
pub fn enumerate_colorings_seq(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
) -> Result<Vec<RegionColoring>> {
    enumerate_impl(cube, skew, braid, DEFAULT_SWEEP_BUDGET, false)
}

/// The degree-1 cycle of a coloring: the signed sum of crossing triples.
/// Asserts the cycle condition in the quotient complex.
pub fn cycle_of_coloring(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
    coloring: &RegionColoring,
) -> Result<Chain> {
    let mut z = Chain::zero(1);
    for (sign, [a, b, c]) in coloring.crossing_triples(braid) {
        z.add_term(vec![a, b, c], sign);
    }
    // cycle check: project, differentiate, expect exactly zero
    let projected = z.project(cube, skew);
    let mut dz = Chain::zero(0);
    for (t, &coeff) in &projected.terms {
        let mut b = boundary(cube, skew, t, BoundaryPart::Full);
        for v in b.terms.values_mut() {
            *v *= coeff;
        }
        dz.add(&b);
    }
    if !dz.is_zero() {
        return Err(Error::Contract(
            "coloring chain is not a cycle: crossing convention fault".into(),
        ));
    }
    Ok(z)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub name: Option<String>,
    pub braid: Vec<i32>,
    pub total: usize,
    /// Homology-class key -> number of colorings in that class.
    pub class_histogram: BTreeMap<String, usize>,
    /// Colorings whose class has additive order exactly 3.
    pub order3_count: usize,
}

/// Coloring count plus the homology-class histogram of the coloring
/// cycles.
pub fn invariant_report(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
) -> Result<InvariantReport> {
    let classifier = HomologyClassifier::new(cube, skew, 1)?;
    invariant_report_with_classifier(cube, skew, braid, &classifier)
}

/// Same, reusing a prebuilt classifier across many braids.
pub fn invariant_report_with_classifier(
    cube: &TernaryCube,
    skew: &SkewTable,
    braid: &BraidWord,
    classifier: &HomologyClassifier,
) -> Result<InvariantReport> {
    let colorings = enumerate_colorings(cube, skew, braid)?;
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let mut order3 = 0usize;
    let classes: Vec<Result<ClassCoordinates>> = par_map_range(colorings.len(), |i| {
        let z = cycle_of_coloring(cube, skew, braid, &colorings[i])?;
        classifier.class_of(cube, skew, &z)
    });
    for class in classes {
        let class = class?;
        if class.additive_order() == Some(3.into()) {
            order3 += 1;
        }
        *histogram.entry(class.key()).or_insert(0) += 1;
    }
    Ok(InvariantReport {
        name: braid.name.clone(),
        braid: braid.letters.clone(),
        total: colorings.len(),
        class_histogram: histogram,
        order3_count: order3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;
    use crate::cube::reference_cube_2_2_3;

    fn setup() -> (TernaryCube, SkewTable) {
        let cube = reference_cube_2_2_3();
        let skew = cube.skew_table().unwrap();
        (cube, skew)
    }

    #[test]
    fn empty_braid_all_tops_close() {
        let (cube, skew) = setup();
        let b = parse_braid("[]", Some(1)).unwrap();
        let colorings = enumerate_colorings(&cube, &skew, &b).unwrap();
        assert_eq!(colorings.len(), 36);
        for c in &colorings {
            let z = cycle_of_coloring(&cube, &skew, &b, c).unwrap();
            assert!(z.is_zero());
        }
    }

    #[test]
    fn trefoil_has_72_colorings() {
        let (cube, skew) = setup();
        let b = parse_braid("[1,1,1]", None).unwrap();
        let colorings = enumerate_colorings(&cube, &skew, &b).unwrap();
        assert_eq!(colorings.len(), 72);
    }

    #[test]
    fn some_trefoil_top_fails_closure() {
        let (cube, skew) = setup();
        let b = parse_braid("[1,1,1]", None).unwrap();
        let failures = (0..216).filter(|&code| {
            let top = [code / 36, (code / 6) % 6, code % 6];
            sweep_raw(&cube, &skew, &b, &top).is_none()
        });
        assert_eq!(failures.count(), 216 - 72);
    }

    #[test]
    fn trefoil_reproduces_reference_cycle() {
        let (cube, skew) = setup();
        let b = parse_braid("[1,1,1]", None).unwrap();
        let expected = Chain::from_terms(
            1,
            vec![(vec![2, 1, 0], 1), (vec![2, 5, 0], 1), (vec![2, 3, 0], 1)],
        );
        let found = enumerate_colorings(&cube, &skew, &b)
            .unwrap()
            .into_iter()
            .any(|c| cycle_of_coloring(&cube, &skew, &b, &c).unwrap() == expected);
        assert!(found, "no coloring yields (3,2,1)+(3,6,1)+(3,4,1)");
    }

    #[test]
    fn all_trefoil_cycles_are_cycles() {
        let (cube, skew) = setup();
        let b = parse_braid("[1,1,1]", None).unwrap();
        for c in enumerate_colorings(&cube, &skew, &b).unwrap() {
            cycle_of_coloring(&cube, &skew, &b, &c).unwrap();
        }
    }

    #[test]
    fn unknot_as_one_crossing_gives_degenerate_cycles() {
        let (cube, skew) = setup();
        let b = parse_braid("[1]", None).unwrap();
        let colorings = enumerate_colorings(&cube, &skew, &b).unwrap();
        assert!(!colorings.is_empty());
        for c in colorings {
            let z = cycle_of_coloring(&cube, &skew, &b, &c).unwrap();
            assert!(z.project(&cube, &skew).is_zero());
        }
    }

    #[test]
    fn trefoil_report_matches_reference_counts() {
        let (cube, skew) = setup();
        let b = parse_braid("[1,1,1]", None).unwrap();
        let report = invariant_report(&cube, &skew, &b).unwrap();
        assert_eq!(report.total, 72);
        assert_eq!(report.order3_count, 36);
    }

    #[test]
    fn markov_stabilization_preserves_report() {
        let (cube, skew) = setup();
        let b1 = parse_braid("[1,1,1]", None).unwrap();
        let b2 = parse_braid("[1,1,1,2]", None).unwrap();
        let r1 = invariant_report(&cube, &skew, &b1).unwrap();
        let r2 = invariant_report(&cube, &skew, &b2).unwrap();
        assert_eq!(r1.total, r2.total);
        assert_eq!(r1.class_histogram, r2.class_histogram);
        assert_eq!(r1.order3_count, r2.order3_count);
    }

    #[test]
    fn mirror_negates_cycles() {
        let (cube, skew) = setup();
        let b = parse_braid("[1,1,1]", None).unwrap();
        let m = b.mirror();
        let r1 = invariant_report(&cube, &skew, &b).unwrap();
        let r2 = invariant_report(&cube, &skew, &m).unwrap();
        assert_eq!(r1.total, r2.total);
        assert_eq!(r1.order3_count, r2.order3_count);
    }

    #[test]
    fn relabeling_by_automorphism_preserves_counts() {
        let (mut cube, skew) = setup();
        cube.name = None; // relabel drops the name; compare tables only
        let autos: Vec<Vec<usize>> = {
            let mut found = Vec::new();
            // perm is an automorphism iff relabel(perm) == cube
            let mut perm: Vec<usize> = (0..6).collect();
            permutohedron_heap(&mut perm, &mut |p: &[usize]| {
                if cube.relabel(p).unwrap() == cube {
                    found.push(p.to_vec());
                }
            });
            found
        };
        assert!(autos.len() > 1, "no nontrivial automorphism found");
        let b = parse_braid("[1,1,1]", None).unwrap();
        let base = enumerate_colorings(&cube, &skew, &b).unwrap().len();
        // counts agree for the relabeled cube as well
        let relabeled = cube.relabel(&autos[1]).unwrap();
        let rskew = relabeled.skew_table().unwrap();
        let count = enumerate_colorings(&relabeled, &rskew, &b).unwrap().len();
        assert_eq!(base, count);
    }

    fn permutohedron_heap(perm: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        fn rec(k: usize, perm: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
            if k == 1 {
                visit(perm);
                return;
            }
            for i in 0..k {
                rec(k - 1, perm, visit);
                if k.is_multiple_of(2) {
                    perm.swap(i, k - 1);
                } else {
                    perm.swap(0, k - 1);
                }
            }
        }
        let n = perm.len();
        rec(n, perm, visit);
    }
}
