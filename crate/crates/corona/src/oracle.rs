//! Brute-force ground truth.
//!
//! Packings are generated by breadth-first closure of the Descartes
//! reflection `d4 -> 2(d1 + d2 + d3) - d4`, starting from a seed quad
//! reduced to its root, pruned at a curvature bound, deduplicated on the
//! exact coordinate quadruple. Coronas are extracted by the exact
//! tangency test and their areas summed directly as rationals. Everything
//! here is the side the lattice-sum formulas are checked against.

use std::collections::{HashSet, VecDeque};

use num_traits::{Signed, Zero};

use crate::disk::{reflect_unchecked, DescartesQuad, DiskSymbol};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, to_f64, Rat};
use crate::spinor::{tangency_spinor, TangencySpinor};
use crate::zeta::{reciprocal_square_sum, SpinorFrame};

/// Axis-aligned generation window. Periodic packings (two parallel
/// lines) contain infinitely many disks under any curvature bound, so
/// generation must additionally be clipped; choose the window larger
/// than the region you will query.
#[derive(Clone, Debug)]
pub struct Region {
    pub xmin: Rat,
    pub xmax: Rat,
    pub ymin: Rat,
    pub ymax: Rat,
}

impl Region {
    /// Lines and enclosing disks are never clipped.
    fn admits(&self, d: &DiskSymbol) -> bool {
        if d.b().is_positive() {
            let (x, y) = d.center().expect("positive curvature");
            x >= self.xmin && x <= self.xmax && y >= self.ymin && y <= self.ymax
        } else {
            true
        }
    }
}

/// Deduplicated set of disks generated from a seed quad.
#[derive(Clone, Debug)]
pub struct Packing {
    seed: DescartesQuad,
    curv_bound: Rat,
    disks: Vec<DiskSymbol>,
}

impl Packing {
    pub fn disks(&self) -> &[DiskSymbol] {
        &self.disks
    }

    pub fn seed(&self) -> &DescartesQuad {
        &self.seed
    }

    pub fn curv_bound(&self) -> &Rat {
        &self.curv_bound
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn contains(&self, d: &DiskSymbol) -> bool {
        self.disks.binary_search(d).is_ok()
    }

    /// Test-harness hook: breaks one disk so negative controls can watch
    /// the verification suites fail.
    #[doc(hidden)]
    pub fn corrupt_for_negative_control(&mut self) {
        if let Some(d) = self.disks.pop() {
            let bumped = DiskSymbol::from_parts_unchecked(
                d.b().clone(),
                d.b_co().clone(),
                d.xd() + Rat::from_integer(1.into()),
                d.yd().clone(),
            );
            self.disks.push(bumped);
        }
    }
}

/// Replaces the seed by the root quad of its packing: repeatedly reflect
/// the largest curvature while that strictly decreases it.
fn reduce_to_root(quad: &DescartesQuad) -> [DiskSymbol; 4] {
    let mut disks = quad.disks().clone();
    loop {
        let i_max = (0..4)
            .max_by(|&i, &j| disks[i].b().cmp(disks[j].b()))
            .unwrap();
        let others: Vec<&DiskSymbol> = (0..4).filter(|&k| k != i_max).map(|k| &disks[k]).collect();
        let reflected = reflect_unchecked(others[0], others[1], others[2], &disks[i_max]);
        if reflected.b() < disks[i_max].b() {
            disks[i_max] = reflected;
        } else {
            return disks;
        }
    }
}

/// Breadth-first closure under the Descartes reflection, pruned at
/// `curv_bound` (positive curvatures only; lines and enclosing disks are
/// exempt).
pub fn generate_packing(seed: &DescartesQuad, curv_bound: &Rat) -> Result<Packing> {
    generate_packing_clipped(seed, curv_bound, None)
}

/// Same as [`generate_packing`] with an optional generation window for
/// unbounded (strip-like) packings.
pub fn generate_packing_clipped(
    seed: &DescartesQuad,
    curv_bound: &Rat,
    region: Option<&Region>,
) -> Result<Packing> {
    for d in seed.disks() {
        if d.b().is_positive() && d.b() > curv_bound {
            return Err(Error::BoundBelowSeed(fmt_rat(d.b())));
        }
    }
    let root = reduce_to_root(seed);

    let mut seen: HashSet<DiskSymbol> = root.iter().cloned().collect();
    let mut queue: VecDeque<([DiskSymbol; 4], Option<usize>)> = VecDeque::new();
    queue.push_back((root, None));
    while let Some((quad, born)) = queue.pop_front() {
        for i in 0..4 {
            if born == Some(i) {
                continue;
            }
            let others: Vec<&DiskSymbol> = (0..4).filter(|&k| k != i).map(|k| &quad[k]).collect();
            let fresh = reflect_unchecked(others[0], others[1], others[2], &quad[i]);
            if fresh.b() > curv_bound {
                continue;
            }
            if let Some(r) = region {
                if !r.admits(&fresh) {
                    continue;
                }
            }
            if seen.insert(fresh.clone()) {
                let mut next = quad.clone();
                next[i] = fresh;
                queue.push_back((next, Some(i)));
            }
        }
    }

    let mut disks: Vec<DiskSymbol> = seen.into_iter().collect();
    disks.sort();
    Ok(Packing {
        seed: seed.clone(),
        curv_bound: curv_bound.clone(),
        disks,
    })
}

/// All packing disks tangent to `base`, ordered deterministically: for a
/// line base by tangency position along the line, otherwise by
/// (curvature, reduced center).
#[derive(Clone, Debug)]
pub struct Corona {
    base: DiskSymbol,
    members: Vec<DiskSymbol>,
}

impl Corona {
    pub fn base(&self) -> &DiskSymbol {
        &self.base
    }

    pub fn members(&self) -> &[DiskSymbol] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Float image of a symbol for tangency prefiltering.
pub(crate) fn f64_parts(d: &DiskSymbol) -> (f64, f64, f64, f64) {
    (
        to_f64(d.b()),
        to_f64(d.b_co()),
        to_f64(d.xd()),
        to_f64(d.yd()),
    )
}

/// Cheap necessary condition for tangency. Conversion to f64 is
/// correctly rounded, so the inversive product is computed to within
/// ~1e-13 of scale; anything farther than 1e-9 * scale from -1 cannot be
/// tangent. Positives must still be confirmed exactly.
pub(crate) fn maybe_tangent(a: &(f64, f64, f64, f64), b: &(f64, f64, f64, f64)) -> bool {
    let (ba, ca, xa, ya) = *a;
    let (bb, cb, xb, yb) = *b;
    let prod = xa * xb + ya * yb - (ba * cb + bb * ca) / 2.0;
    let scale = 1.0 + (ba * cb).abs() + (bb * ca).abs() + (xa * xb).abs() + (ya * yb).abs();
    (prod + 1.0).abs() <= 1e-9 * scale
}

/// Signed position of the tangency point of `d` along the line `base`,
/// measured along the direction obtained by rotating the normal by 90
/// degrees.
pub fn tangency_param_on_line(base: &DiskSymbol, d: &DiskSymbol) -> Option<Rat> {
    if !base.is_line() || d.b().is_zero() {
        return None;
    }
    Some((base.xd() * d.yd() - base.yd() * d.xd()) / d.b())
}

pub fn corona_of(p: &Packing, base: &DiskSymbol) -> Result<Corona> {
    if !p.contains(base) {
        return Err(Error::NotInPacking);
    }
    let base_f = f64_parts(base);
    let mut members: Vec<DiskSymbol> = p
        .disks
        .iter()
        .filter(|d| *d != base && maybe_tangent(&base_f, &f64_parts(d)) && base.tangent(d))
        .cloned()
        .collect();
    if base.is_line() {
        members.sort_by(|a, b| {
            let ka = tangency_param_on_line(base, a);
            let kb = tangency_param_on_line(base, b);
            ka.cmp(&kb).then_with(|| a.cmp(b))
        });
    } else {
        members.sort();
    }
    Ok(Corona {
        base: base.clone(),
        members,
    })
}

/// Exact corona area in units of pi (`sum 1/b^2`) plus its float value.
pub fn corona_area_direct(c: &Corona) -> Result<(Rat, f64)> {
    if c.members.iter().any(|d| !d.b().is_positive()) {
        return Err(Error::NonPositiveMemberCurvature);
    }
    if c.members.is_empty() {
        return Ok((Rat::zero(), 0.0));
    }
    let curvatures: Vec<Rat> = c.members.iter().map(|d| d.b().clone()).collect();
    let exact = reciprocal_square_sum(&curvatures);
    let float = to_f64(&exact);
    Ok((exact, float))
}

/// Member curvatures at most `cmax`, sorted with multiplicity.
pub fn curvature_multiset(c: &Corona, cmax: &Rat) -> Vec<Rat> {
    let mut out: Vec<Rat> = c
        .members
        .iter()
        .map(|d| d.b().clone())
        .filter(|b| b <= cmax)
        .collect();
    out.sort();
    out
}

/// One frame per unordered pair of mutually tangent corona members:
/// `(spinor(base -> d), spinor(base -> d'), base.b)`. Frames are built
/// unchecked so the determinant law stays a checkable claim.
pub fn neighbor_spinor_frames(p: &Packing, base: &DiskSymbol) -> Result<Vec<SpinorFrame>> {
    let corona = corona_of(p, base)?;
    let spinors: Vec<TangencySpinor> = corona
        .members()
        .iter()
        .map(|d| tangency_spinor(base, d))
        .collect::<Result<_>>()?;
    let parts: Vec<(f64, f64, f64, f64)> = corona.members().iter().map(f64_parts).collect();
    let mut frames = Vec::new();
    for i in 0..corona.members().len() {
        for j in i + 1..corona.members().len() {
            if !maybe_tangent(&parts[i], &parts[j])
                || !corona.members()[i].tangent(&corona.members()[j])
            {
                continue;
            }
            let (u, v) = match (&spinors[i], &spinors[j]) {
                (TangencySpinor::Exact(a), TangencySpinor::Exact(b)) => (a.clone(), b.clone()),
                _ => return Err(Error::InexactSpinor("neighbor frames need exact spinors")),
            };
            frames.push(SpinorFrame::new_unchecked(u, v, base.b().clone()));
        }
    }
    Ok(frames)
}

/// Seed quads and frames for the named packings.
pub mod presets {
    use super::*;
    use crate::rat::{rat, rat_i};

    fn disk(x: (i64, i64), y: (i64, i64), r: (i64, i64)) -> DiskSymbol {
        DiskSymbol::from_center_radius(&rat(x.0, x.1), &rat(y.0, y.1), &rat(r.0, r.1))
            .expect("preset disk")
    }

    /// Unit-circle packing `(-1, 2, 2, 3)`.
    pub fn window_seed() -> DescartesQuad {
        DescartesQuad::new([
            disk((0, 1), (0, 1), (-1, 1)),
            disk((1, 2), (0, 1), (1, 2)),
            disk((-1, 2), (0, 1), (1, 2)),
            disk((0, 1), (2, 3), (1, 3)),
        ])
        .expect("window seed")
    }

    /// Strip packing `(0, 0, 1, 1)`: lines `x = 1` and `x = -1` plus two
    /// unit disks.
    pub fn belt_seed() -> DescartesQuad {
        let l1 = DiskSymbol::line_from_normal_offset(&rat_i(1), &rat_i(0), &rat_i(1))
            .expect("belt line");
        let l2 = DiskSymbol::line_from_normal_offset(&rat_i(-1), &rat_i(0), &rat_i(1))
            .expect("belt line");
        DescartesQuad::new([
            l1,
            l2,
            disk((0, 1), (0, 1), (1, 1)),
            disk((0, 1), (2, 1), (1, 1)),
        ])
        .expect("belt seed")
    }

    /// Asymmetric integral packing `(-11, 21, 24, 28)`.
    pub fn example4_seed() -> DescartesQuad {
        DescartesQuad::new([
            disk((8, 11), (6, 11), (-1, 11)),
            disk((16, 21), (12, 21), (1, 21)),
            disk((17, 24), (12, 24), (1, 24)),
            disk((19, 28), (16, 28), (1, 28)),
        ])
        .expect("example4 seed")
    }

    pub fn seed_by_name(name: &str) -> Option<DescartesQuad> {
        match name {
            "window" => Some(window_seed()),
            "belt" => Some(belt_seed()),
            "example4" => Some(example4_seed()),
            _ => None,
        }
    }

    /// Default generation window for the strip packing: a few periods on
    /// either side of the origin.
    pub fn belt_region() -> Region {
        Region {
            xmin: rat_i(-2),
            xmax: rat_i(2),
            ymin: rat_i(-4),
            ymax: rat_i(4),
        }
    }

    pub fn region_for(name: &str) -> Option<Region> {
        match name {
            "belt" => Some(belt_region()),
            _ => None,
        }
    }

    /// Degenerate line-corona frame: both spinors `[1, 0]`, base 0.
    pub fn ford_frame() -> SpinorFrame {
        SpinorFrame::from_ints((1, 0), (1, 0), 0).expect("ford frame")
    }

    /// Great-circle frame of the unit-circle packing.
    pub fn window_outer_frame() -> SpinorFrame {
        SpinorFrame::from_ints((0, 1), (1, 0), -1).expect("window frame")
    }

    /// Frame of the right curvature-2 disk of the unit-circle packing.
    pub fn window_disk2_frame() -> SpinorFrame {
        SpinorFrame::from_ints((1, 2), (2, 2), 2).expect("disk-2 frame")
    }

    /// Quarter-fragment frame at the great circle.
    pub fn window_quarter_frame() -> SpinorFrame {
        SpinorFrame::from_ints((1, 1), (0, 1), -1).expect("quarter frame")
    }

    /// Frame at the 24-disk of the asymmetric packing.
    pub fn example4_frame() -> SpinorFrame {
        SpinorFrame::from_ints((8, 0), (2, -3), 24).expect("example4 frame")
    }

    /// The disk a named base curvature refers to within a preset.
    pub fn base_disk(preset: &str, curv: i64) -> Option<DiskSymbol> {
        match (preset, curv) {
            ("window", -1) => Some(disk((0, 1), (0, 1), (-1, 1))),
            ("window", 2) => Some(disk((1, 2), (0, 1), (1, 2))),
            ("example4", 24) => Some(disk((17, 24), (12, 24), (1, 24))),
            _ => None,
        }
    }
}
