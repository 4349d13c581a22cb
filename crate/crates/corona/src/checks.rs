//! Verification suites over generated packings.
//!
//! Each check harvests configurations (tangent pairs, mutually tangent
//! triples, Descartes quads) from a brute-force packing and replays the
//! spinor identities on them exactly. The CLI `verify` subcommand and the
//! acceptance suite both run through here.

use num_traits::Signed;
use serde::Serialize;

use crate::disk::{descartes_check, descartes_complete, DiskSymbol};
use crate::error::{Error, Result};
use crate::oracle::{
    corona_of, curvature_multiset, generate_packing_clipped, neighbor_spinor_frames, presets,
    Packing,
};
use crate::rat::{fmt_rat, rat_i, to_f64, to_i64_exact};
use crate::spinor::{check_curl, tangency_spinor, Spinor, TangencySpinor};
use crate::sternbrocot::IndexSet;
use crate::zeta::{
    corona_area, corona_curvatures_leq, ford_corona_area, geo_zeta, sl2_transform, totient_sieve,
    QuadForm, SpinorFrame, ZetaParams,
};

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl CheckReport {
    fn pass(name: &str, details: String) -> Self {
        CheckReport {
            name: name.into(),
            passed: true,
            details,
        }
    }

    fn fail(name: &str, details: String) -> Self {
        CheckReport {
            name: name.into(),
            passed: false,
            details,
        }
    }
}

/// Tangency structure of a packing: adjacency, triangles, and Descartes
/// quads, all index-based.
pub struct Harvest {
    pub adjacency: Vec<Vec<usize>>,
    pub triangles: Vec<[usize; 3]>,
    pub quads: Vec<[usize; 4]>,
}

/// Builds the tangency graph with a float prefilter and exact
/// confirmation. In an exact packing non-tangent inversive products are
/// well separated from -1, so the prefilter only skips clear misses.
pub fn harvest(p: &Packing) -> Harvest {
    let disks = p.disks();
    let n = disks.len();
    let approx: Vec<(f64, f64, f64, f64)> = disks.iter().map(crate::oracle::f64_parts).collect();
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if !crate::oracle::maybe_tangent(&approx[i], &approx[j]) {
                continue;
            }
            if disks[i].tangent(&disks[j]) {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    let mut triangles = Vec::new();
    for i in 0..n {
        for &j in &adjacency[i] {
            if j <= i {
                continue;
            }
            for &k in &adjacency[j] {
                if k <= j || !adjacency[i].contains(&k) {
                    continue;
                }
                triangles.push([i, j, k]);
            }
        }
    }
    let mut quads = Vec::new();
    for &[i, j, k] in &triangles {
        for &l in &adjacency[k] {
            if l <= k || !adjacency[i].contains(&l) || !adjacency[j].contains(&l) {
                continue;
            }
            quads.push([i, j, k, l]);
        }
    }
    Harvest {
        adjacency,
        triangles,
        quads,
    }
}

pub fn check_symbol_constraints(p: &Packing) -> CheckReport {
    let one = rat_i(1);
    for d in p.disks() {
        if d.xd() * d.xd() + d.yd() * d.yd() - d.b() * d.b_co() != one {
            return CheckReport::fail(
                "symbol_constraints",
                format!("constraint violated by {d:?}"),
            );
        }
    }
    CheckReport::pass(
        "symbol_constraints",
        format!("{} disks satisfy the inversive constraint", p.len()),
    )
}

fn exact_spinor(d1: &DiskSymbol, d2: &DiskSymbol) -> Result<Spinor> {
    match tangency_spinor(d1, d2)? {
        TangencySpinor::Exact(s) => Ok(s),
        TangencySpinor::Approx { .. } => Err(Error::InexactSpinor(
            "integral packing produced a float spinor",
        )),
    }
}

/// Norm, square-consistency, and reversal laws on every tangent pair.
pub fn check_pair_laws(p: &Packing, h: &Harvest) -> CheckReport {
    let disks = p.disks();
    let mut pairs = 0u64;
    for i in 0..disks.len() {
        for &j in &h.adjacency[i] {
            if j <= i {
                continue;
            }
            let (a, b) = (&disks[i], &disks[j]);
            let u = match exact_spinor(a, b) {
                Ok(u) => u,
                Err(e) => return CheckReport::fail("pair_laws", format!("{a:?} -> {b:?}: {e}")),
            };
            if u.norm_sq() != a.b() + b.b() {
                return CheckReport::fail(
                    "pair_laws",
                    format!("|u|^2 != b1 + b2 for {a:?} -> {b:?}"),
                );
            }
            let (ta, tb, _) = crate::disk::pythagorean_triple(a, b).expect("tangent");
            if u.complex_square() != (ta, tb) {
                return CheckReport::fail(
                    "pair_laws",
                    format!("u^2 disagrees with the triple for {a:?} -> {b:?}"),
                );
            }
            let back = match exact_spinor(b, a) {
                Ok(v) => v,
                Err(e) => return CheckReport::fail("pair_laws", format!("{b:?} -> {a:?}: {e}")),
            };
            if back.canonical() != u.reverse().canonical() {
                return CheckReport::fail(
                    "pair_laws",
                    format!("reversal law broken for {a:?} <-> {b:?}"),
                );
            }
            pairs += 1;
        }
    }
    CheckReport::pass("pair_laws", format!("{pairs} tangent pairs, all exact"))
}

/// Curl and symplectic laws on every mutually tangent triple.
pub fn check_triple_laws(p: &Packing, h: &Harvest) -> CheckReport {
    let disks = p.disks();
    for &[i, j, k] in &h.triangles {
        let (a, b, c) = (&disks[i], &disks[j], &disks[k]);
        let uij = exact_spinor(a, b).unwrap();
        let ujk = exact_spinor(b, c).unwrap();
        let uki = exact_spinor(c, a).unwrap();
        if !check_curl(&uij, &ujk, &uki) {
            return CheckReport::fail(
                "triple_laws",
                format!("curl fails on curvatures ({}, {}, {})", a.b(), b.b(), c.b()),
            );
        }
        for (base, x, y) in [(a, b, c), (b, a, c), (c, a, b)] {
            let s = exact_spinor(base, x)
                .unwrap()
                .symplectic(&exact_spinor(base, y).unwrap());
            if s.abs() != base.b().abs() {
                return CheckReport::fail(
                    "triple_laws",
                    format!(
                        "symplectic product {} != |{}| at base {base:?}",
                        fmt_rat(&s),
                        fmt_rat(base.b())
                    ),
                );
            }
        }
    }
    CheckReport::pass(
        "triple_laws",
        format!(
            "{} triples: curl and symplectic laws hold",
            h.triangles.len()
        ),
    )
}

/// Divergence, additivity, and the two-completion identity on every
/// Descartes quad found in the packing.
pub fn check_quad_laws(p: &Packing, h: &Harvest) -> CheckReport {
    let disks = p.disks();
    for &[i, j, k, l] in &h.quads {
        let quad = [&disks[i], &disks[j], &disks[k], &disks[l]];
        if !descartes_check(quad[0].b(), quad[1].b(), quad[2].b(), quad[3].b()) {
            return CheckReport::fail(
                "quad_laws",
                format!(
                    "curvature identity fails on quad {:?}",
                    quad.map(|d| fmt_rat(d.b()))
                ),
            );
        }
        for sink in 0..4 {
            let rest: Vec<usize> = (0..4).filter(|&x| x != sink).collect();
            let ins: Vec<Spinor> = rest
                .iter()
                .map(|&x| exact_spinor(quad[x], quad[sink]).unwrap())
                .collect();
            if !check_curl(&ins[0], &ins[1], &ins[2]) {
                return CheckReport::fail(
                    "quad_laws",
                    format!("divergence fails into {:?}", quad[sink]),
                );
            }
        }
        for center in 0..4 {
            let rest: Vec<usize> = (0..4).filter(|&x| x != center).collect();
            // For each partner pair, the spinor sum (some signs) must be
            // the spinor toward the remaining disk, and the two mixed
            // norms must recover both Descartes completions.
            for t in 0..3 {
                let (x, y, d) = (rest[t], rest[(t + 1) % 3], rest[(t + 2) % 3]);
                let a = exact_spinor(quad[center], quad[x]).unwrap();
                let b = exact_spinor(quad[center], quad[y]).unwrap();
                let toward = exact_spinor(quad[center], quad[d]).unwrap().canonical();
                let sum = (&a + &b).canonical();
                let diff = (&a - &b).canonical();
                if sum != toward && diff != toward {
                    return CheckReport::fail(
                        "quad_laws",
                        format!("additivity fails at base {:?}", quad[center]),
                    );
                }
                let other = descartes_complete(quad[center], quad[x], quad[y], quad[d])
                    .expect("valid quad");
                let mut got = [
                    (&a + &b).norm_sq() - quad[center].b(),
                    (&a - &b).norm_sq() - quad[center].b(),
                ];
                let mut want = [quad[d].b().clone(), other.b().clone()];
                got.sort();
                want.sort();
                if got != want {
                    return CheckReport::fail(
                        "quad_laws",
                        format!("completion norms fail at base {:?}", quad[center]),
                    );
                }
            }
        }
    }
    CheckReport::pass(
        "quad_laws",
        format!(
            "{} quads: divergence, additivity, completion norms hold",
            h.quads.len()
        ),
    )
}

/// `|det M| = |B|` for every frame harvested from every base disk.
pub fn check_frame_determinants(p: &Packing) -> CheckReport {
    let mut frames = 0u64;
    for base in p.disks() {
        let fs = match neighbor_spinor_frames(p, base) {
            Ok(fs) => fs,
            Err(e) => return CheckReport::fail("frame_determinants", format!("{base:?}: {e}")),
        };
        for f in &fs {
            if !f.det_consistent() {
                return CheckReport::fail(
                    "frame_determinants",
                    format!("|det| != |B| at base {base:?}: {f:?}"),
                );
            }
        }
        frames += fs.len() as u64;
    }
    CheckReport::pass(
        "frame_determinants",
        format!("{frames} frames satisfy |det M| = |B|"),
    )
}

/// The polynomial's curvature multiset equals the oracle corona multiset
/// up to the cutoff.
pub fn check_multiset(
    p: &Packing,
    frame: &SpinorFrame,
    base: &DiskSymbol,
    cmax: i64,
) -> CheckReport {
    let name = "curvature_multiset";
    let formula = match corona_curvatures_leq(frame, cmax) {
        Ok(v) => v,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    let corona = match corona_of(p, base) {
        Ok(c) => c,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    let oracle: Vec<i128> = curvature_multiset(&corona, &rat_i(cmax))
        .iter()
        .map(|r| to_i64_exact(r).expect("integral corona") as i128)
        .collect();
    if formula == oracle {
        CheckReport::pass(
            name,
            format!(
                "{} curvatures <= {} agree at base {}",
                oracle.len(),
                cmax,
                fmt_rat(base.b())
            ),
        )
    } else {
        CheckReport::fail(
            name,
            format!(
                "mismatch at base {}: formula {} entries vs oracle {}",
                fmt_rat(base.b()),
                formula.len(),
                oracle.len()
            ),
        )
    }
}

/// Deterministic xorshift-style generator for reproducible sampling.
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn entry(&mut self) -> i64 {
        (self.next_u64() % 7) as i64 - 3
    }
}

/// Samples unimodular integer matrices with entries in [-3, 3].
pub fn random_unimodular(rng: &mut SplitMix64) -> [[i64; 2]; 2] {
    loop {
        let g = [[rng.entry(), rng.entry()], [rng.entry(), rng.entry()]];
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        if det == 1 || det == -1 {
            return g;
        }
    }
}

/// Invariance of the corona value under the right unimodular action:
/// truncated values must agree within the sum of reported tail bounds,
/// and tail bounds must be small.
pub fn check_sl2_invariance(
    frame: &SpinorFrame,
    samples: u32,
    trunc: u32,
    tail_cap: f64,
) -> CheckReport {
    let name = "sl2_invariance";
    let form = QuadForm::from_frame(frame);
    let params = ZetaParams {
        rho: 2.0,
        beta: to_f64(frame.base_b()),
        trunc,
        set: IndexSet::AllCoprime,
    };
    let base = match geo_zeta(&form, &params) {
        Ok(r) => r,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    if base.tail_bound > tail_cap {
        return CheckReport::fail(
            name,
            format!("base tail bound {} exceeds {}", base.tail_bound, tail_cap),
        );
    }
    let mut rng = SplitMix64::new(0x5eed_0c07_ab1e_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let g = random_unimodular(&mut rng);
        let tf = match sl2_transform(frame, g) {
            Ok(t) => t,
            Err(e) => return CheckReport::fail(name, e.to_string()),
        };
        let r = match geo_zeta(&QuadForm::from_frame(&tf), &params) {
            Ok(r) => r,
            Err(e) => return CheckReport::fail(name, format!("g = {g:?}: {e}")),
        };
        if r.tail_bound > tail_cap {
            return CheckReport::fail(
                name,
                format!(
                    "tail bound {} exceeds {} for g = {g:?}",
                    r.tail_bound, tail_cap
                ),
            );
        }
        let dev = (base.value - r.value).abs();
        if dev > base.tail_bound + r.tail_bound {
            return CheckReport::fail(
                name,
                format!(
                    "value drift {dev} exceeds tails {} + {} for g = {g:?}",
                    base.tail_bound, r.tail_bound
                ),
            );
        }
        worst = worst.max(dev);
    }
    CheckReport::pass(
        name,
        format!("{samples} transforms agree; worst drift {worst:.3e}"),
    )
}

/// The coprime-pair diagonal path and the totient-sieve path of the
/// line-corona constant, compared at every truncation up to `limit`.
/// Returns the worst pointwise deviation in the details.
pub fn check_ford_dual_path(limit: u32) -> CheckReport {
    let name = "ford_dual_path";
    let phi = totient_sieve(limit);
    let mut sieve_path = 1.0f64;
    let mut pair_path = 1.0f64;
    let mut worst: f64 = 0.0;
    for s in 1..=limit {
        let w = (s as f64).powi(-4);
        sieve_path += phi[s as usize] as f64 * w;
        let mut count = 0u32;
        for k in 0..=s {
            if crate::sternbrocot::coprime(k as i64, (s - k) as i64) {
                count += 1;
            }
        }
        // The leading 1 absorbs one of the two unit end terms at s = 1.
        let add = if s == 1 { count - 1 } else { count };
        pair_path += add as f64 * w;
        worst = worst.max((sieve_path - pair_path).abs());
        if worst > 1e-12 {
            return CheckReport::fail(name, format!("paths diverge by {worst} at truncation {s}"));
        }
    }
    // Tie both ladders to the library endpoints.
    let lib_pairs = match corona_area(&presets::ford_frame(), limit) {
        Ok(r) => r.value / std::f64::consts::PI,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    let lib_phi = match ford_corona_area(limit) {
        Ok(r) => r.value / std::f64::consts::PI,
        Err(e) => return CheckReport::fail(name, e.to_string()),
    };
    let d1 = (lib_pairs - pair_path).abs();
    let d2 = (lib_phi - sieve_path).abs();
    if d1 > 1e-12 || d2 > 1e-12 {
        return CheckReport::fail(
            name,
            format!("library endpoints drift: pairs {d1}, sieve {d2}"),
        );
    }
    CheckReport::pass(
        name,
        format!("agree to {worst:.3e} at every truncation <= {limit}"),
    )
}

/// Runs the full suite for a named preset.
pub fn run_preset_suite(preset: &str, bound: i64, trunc: u32) -> Result<Vec<CheckReport>> {
    let seed = presets::seed_by_name(preset)
        .ok_or_else(|| Error::Parse(format!("unknown preset `{preset}`")))?;
    let region = presets::region_for(preset);
    let packing = generate_packing_clipped(&seed, &rat_i(bound), region.as_ref())?;
    run_packing_suite(preset, &packing, bound, trunc)
}

/// Same suite against an existing packing (used for negative controls).
pub fn run_packing_suite(
    preset: &str,
    packing: &Packing,
    bound: i64,
    trunc: u32,
) -> Result<Vec<CheckReport>> {
    let h = harvest(packing);
    let mut reports = vec![
        check_symbol_constraints(packing),
        check_pair_laws(packing, &h),
        check_triple_laws(packing, &h),
        check_quad_laws(packing, &h),
        check_frame_determinants(packing),
    ];
    let cmax = bound;
    match preset {
        "window" => {
            for (frame, curv) in [
                (presets::window_outer_frame(), -1),
                (presets::window_disk2_frame(), 2),
            ] {
                let base = presets::base_disk("window", curv).expect("preset base");
                reports.push(check_multiset(packing, &frame, &base, cmax));
            }
            let tail_cap = (100.0 / (trunc as f64).powi(2)).max(2e-5);
            reports.push(check_sl2_invariance(
                &presets::window_outer_frame(),
                8,
                trunc,
                tail_cap,
            ));
        }
        "example4" => {
            let base = presets::base_disk("example4", 24).expect("preset base");
            reports.push(check_multiset(
                packing,
                &presets::example4_frame(),
                &base,
                cmax,
            ));
        }
        _ => {}
    }
    reports.push(check_ford_dual_path(trunc.min(2000)));
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::generate_packing;

    #[test]
    fn window_suite_passes() {
        let reports = run_preset_suite("window", 120, 400).unwrap();
        for r in &reports {
            assert!(r.passed, "{}: {}", r.name, r.details);
        }
    }

    #[test]
    fn example4_suite_passes() {
        let reports = run_preset_suite("example4", 400, 400).unwrap();
        for r in &reports {
            assert!(r.passed, "{}: {}", r.name, r.details);
        }
    }

    #[test]
    fn belt_suite_passes() {
        let reports = run_preset_suite("belt", 50, 400).unwrap();
        for r in &reports {
            assert!(r.passed, "{}: {}", r.name, r.details);
        }
    }

    #[test]
    fn corrupted_packing_fails() {
        let mut p = generate_packing(&presets::window_seed(), &rat_i(30)).unwrap();
        p.corrupt_for_negative_control();
        let reports = run_packing_suite("window", &p, 30, 100).unwrap();
        assert!(
            reports.iter().any(|r| !r.passed),
            "corruption went unnoticed"
        );
    }

    #[test]
    fn unimodular_sampler_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..20 {
            let ga = random_unimodular(&mut a);
            let gb = random_unimodular(&mut b);
            assert_eq!(ga, gb);
            let det = ga[0][0] * ga[1][1] - ga[0][1] * ga[1][0];
            assert!(det == 1 || det == -1);
            assert!(ga.iter().flatten().all(|e| e.abs() <= 3));
        }
    }
}
