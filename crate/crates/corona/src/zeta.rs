//! Lattice zeta sums and corona areas.
//!
//! The central object is the half-sum over coprime integer vectors
//! `Z(S, rho, beta) = 1/2 * sum (f^T S f - beta)^(-rho)` for a positive
//! definite form `S`. With `S = M^T M` built from two neighboring spinors
//! of a base disk of curvature `B`, `rho = 2` and `beta = B`, the value
//! times pi is the area of the disk's corona; quadrant-restricted sums
//! give corona fragments. Evaluation runs in a fixed diagonal order with
//! compensated accumulation, partitioned into fixed blocks that may be
//! summed in parallel: results are bit-identical for any thread count.
//!
//! Full-plane sums truncate by the box `max(|m|,|n|) <= N`; fragment
//! sums truncate by the diagonal `m + n <= N`, which is the recursive
//! evaluation order. Every truncated result carries a rigorous tail
//! bound. For integral frames the same sums are also available as exact
//! rationals restricted by a curvature cutoff, which is what the
//! brute-force oracle checks against.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rat::{balanced_sum, fmt_rat, rat_i, to_f64, to_i64_exact, Rat};
use crate::spinor::Spinor;
use crate::sternbrocot::{coprime, for_each_in_diagonal, IndexSet};
use crate::summation::CompensatedSum;

/// Binary quadratic form `[[s11, s12], [s12, s22]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadForm {
    s11: f64,
    s12: f64,
    s22: f64,
}

impl QuadForm {
    /// Validated positive definite form.
    pub fn new(s11: f64, s12: f64, s22: f64) -> Result<Self> {
        let q = QuadForm { s11, s12, s22 };
        if !q.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(q)
    }

    /// `M^T M` for the frame matrix; may be singular (parallel spinors).
    pub fn from_frame(frame: &SpinorFrame) -> Self {
        let (s11, s12, s22) = frame.gram();
        QuadForm {
            s11: to_f64(&s11),
            s12: to_f64(&s12),
            s22: to_f64(&s22),
        }
    }

    pub fn s11(&self) -> f64 {
        self.s11
    }

    pub fn s12(&self) -> f64 {
        self.s12
    }

    pub fn s22(&self) -> f64 {
        self.s22
    }

    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s12
    }

    pub fn is_positive_definite(&self) -> bool {
        self.s11 > 0.0 && self.det() > 0.0 && self.s11.is_finite() && self.s22.is_finite()
    }

    #[inline]
    pub fn eval(&self, m: f64, n: f64) -> f64 {
        self.s11 * m * m + 2.0 * self.s12 * m * n + self.s22 * n * n
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_trace = (self.s11 + self.s22) / 2.0;
        let half_gap = ((self.s11 - self.s22) / 2.0).hypot(self.s12);
        (half_trace - half_gap, half_trace + half_gap)
    }

    /// Minimum of the form on the sup-norm unit shell `max(|x|,|y|) = 1`.
    fn min_on_unit_box(&self) -> f64 {
        let edge = |a: f64, b: f64, c: f64| {
            // a + 2bt + ct^2 over t in [-1, 1]
            let mut best = (a + 2.0 * b + c).min(a - 2.0 * b + c);
            if c > 0.0 {
                let t = -b / c;
                if t.abs() <= 1.0 {
                    best = best.min(a + 2.0 * b * t + c * t * t);
                }
            }
            best
        };
        edge(self.s11, self.s12, self.s22).min(edge(self.s22, self.s12, self.s11))
    }
}

/// Two spinors rooted at a common disk, with that disk's curvature.
/// For genuine neighboring pairs `|det [u|v]| = |B|` exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorFrame {
    u: Spinor,
    v: Spinor,
    base_b: Rat,
}

impl SpinorFrame {
    /// Checked constructor: enforces the determinant law.
    pub fn new(u: Spinor, v: Spinor, base_b: Rat) -> Result<Self> {
        let frame = SpinorFrame { u, v, base_b };
        if !frame.det_consistent() {
            return Err(Error::FrameMismatch {
                det: fmt_rat(&frame.det()),
                base: fmt_rat(&frame.base_b),
            });
        }
        Ok(frame)
    }

    /// Builds without the determinant check; violations stay observable
    /// through [`SpinorFrame::det_consistent`].
    pub fn new_unchecked(u: Spinor, v: Spinor, base_b: Rat) -> Self {
        SpinorFrame { u, v, base_b }
    }

    pub fn from_ints(u: (i64, i64), v: (i64, i64), base_b: i64) -> Result<Self> {
        SpinorFrame::new(
            Spinor::from_ints(u.0, u.1),
            Spinor::from_ints(v.0, v.1),
            rat_i(base_b),
        )
    }

    pub fn u(&self) -> &Spinor {
        &self.u
    }

    pub fn v(&self) -> &Spinor {
        &self.v
    }

    pub fn base_b(&self) -> &Rat {
        &self.base_b
    }

    /// `det [u | v]`.
    pub fn det(&self) -> Rat {
        self.u.symplectic(&self.v)
    }

    pub fn det_consistent(&self) -> bool {
        self.det().abs() == self.base_b.abs()
    }

    /// Entries of `S = M^T M` as exact rationals.
    pub fn gram(&self) -> (Rat, Rat, Rat) {
        let dot = self.u.m() * self.v.m() + self.u.n() * self.v.n();
        (self.u.norm_sq(), dot, self.v.norm_sq())
    }

    /// `f^T S f` at integer indices, exact.
    pub fn form_at(&self, m: i64, n: i64) -> Rat {
        let fm = rat_i(m);
        let fn_ = rat_i(n);
        let x = &fm * self.u.m() + &fn_ * self.v.m();
        let y = &fm * self.u.n() + &fn_ * self.v.n();
        &x * &x + &y * &y
    }

    /// Frame entries as `i64` when everything is integral.
    fn as_i64(&self) -> Result<(i64, i64, i64, i64, i64)> {
        let g = |r: &Rat| to_i64_exact(r).ok_or(Error::NonIntegralFrame);
        Ok((
            g(self.u.m())?,
            g(self.u.n())?,
            g(self.v.m())?,
            g(self.v.n())?,
            g(&self.base_b)?,
        ))
    }
}

/// Parameters of a truncated lattice sum.
#[derive(Clone, Copy, Debug)]
pub struct ZetaParams {
    pub rho: f64,
    pub beta: f64,
    pub trunc: u32,
    pub set: IndexSet,
}

impl ZetaParams {
    fn validate(&self) -> Result<()> {
        if self.rho.is_nan() || self.rho <= 1.0 {
            return Err(Error::RhoTooSmall);
        }
        if self.trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        Ok(())
    }
}

/// Truncated sum plus a rigorous bound on everything beyond the
/// truncation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SumResult {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

#[derive(Clone, Copy)]
enum Pairs {
    Set(IndexSet),
    FullLattice,
}

/// Diagonals per parallel block. Fixed so that block boundaries, and
/// therefore rounding, never depend on the thread count.
const BLOCK_DIAGS: i64 = 64;

#[inline]
fn term_value(base: f64, rho: f64, m: i64, n: i64) -> Result<f64> {
    if base == 0.0 {
        return Err(Error::ZeroTermBase(m, n));
    }
    if rho == 2.0 {
        let r = 1.0 / base;
        return Ok(r * r);
    }
    if base > 0.0 {
        Ok(base.powf(-rho))
    } else if rho.fract() == 0.0 && rho.abs() < i32::MAX as f64 {
        Ok(base.powi(-(rho as i32)))
    } else {
        Err(Error::NegativeTermBase(m, n))
    }
}

fn for_each_lattice_diagonal(s: i64, bound: i64, f: &mut impl FnMut(i64, i64)) {
    let cap = s.min(bound);
    for m in -cap..=cap {
        let na = s - m.abs();
        if na > bound {
            continue;
        }
        if na == 0 {
            f(m, 0);
        } else {
            f(m, na);
            f(m, -na);
        }
    }
}

fn sum_block(
    form: &QuadForm,
    rho: f64,
    beta: f64,
    bound: i64,
    pairs: Pairs,
    s_range: std::ops::RangeInclusive<i64>,
) -> Result<(f64, u64)> {
    let mut acc = CompensatedSum::new();
    let mut count = 0u64;
    let mut first_err: Option<Error> = None;
    {
        let mut visit = |m: i64, n: i64| {
            if first_err.is_some() {
                return;
            }
            let base = form.eval(m as f64, n as f64) - beta;
            match term_value(base, rho, m, n) {
                Ok(t) => {
                    acc.add(t);
                    count += 1;
                }
                Err(e) => first_err = Some(e),
            }
        };
        for s in s_range {
            match pairs {
                Pairs::Set(set) => for_each_in_diagonal(set, s, bound, &mut visit),
                Pairs::FullLattice => for_each_lattice_diagonal(s, bound, &mut visit),
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok((acc.total(), count)),
    }
}

/// Raw truncated sum (no half factor) over diagonals `1..=max_diag`
/// clipped to `max(|m|,|n|) <= bound`. Deterministic for any thread
/// count: fixed blocks of diagonals are accumulated independently and
/// combined in block order.
fn lattice_sum(
    form: &QuadForm,
    rho: f64,
    beta: f64,
    bound: i64,
    max_diag: i64,
    pairs: Pairs,
) -> Result<(f64, u64)> {
    let block_starts: Vec<i64> = (1..=max_diag).step_by(BLOCK_DIAGS as usize).collect();
    let partials: Vec<Result<(f64, u64)>> = block_starts
        .par_iter()
        .map(|&start| {
            let end = (start + BLOCK_DIAGS - 1).min(max_diag);
            sum_block(form, rho, beta, bound, pairs, start..=end)
        })
        .collect();
    let mut acc = CompensatedSum::new();
    let mut terms = 0u64;
    for p in partials {
        let (v, c) = p?;
        acc.add(v);
        terms += c;
    }
    Ok((acc.total(), terms))
}

/// Upper bound on the full-plane integer-lattice tail
/// `sum_{max(|m|,|n|) > N} (f^T S f - beta)^(-rho)`.
///
/// Every unit square attached to an outside lattice point lies outside
/// the `N`-box, and on it `sqrt(x^T S x) >= sqrt(f^T S f) - sqrt(2 L)`
/// with `L` the top eigenvalue; integrating the decreasing radial
/// profile over form level sets gives the closed form below. When the
/// analytic bound at `N` is loose, it is tightened by summing the actual
/// lattice terms out to a larger box and restarting the analytic bound
/// there.
fn plane_tail_bound(form: &QuadForm, rho: f64, beta: f64, trunc: u32) -> f64 {
    let analytic = |m: u32| -> f64 {
        let q = form.min_on_unit_box();
        if q <= 0.0 {
            return f64::INFINITY;
        }
        let (_, lmax) = form.eigenvalues();
        let c = (2.0 * lmax).sqrt();
        let s0 = (m as f64) * q.sqrt() - c;
        if s0 <= 0.0 {
            return f64::INFINITY;
        }
        let kappa = if beta > 0.0 {
            let d = s0 * s0 - beta;
            if d <= 0.0 {
                return f64::INFINITY;
            }
            s0 * s0 / d
        } else {
            1.0
        };
        let det = form.det();
        if det <= 0.0 {
            return f64::INFINITY;
        }
        (2.0 * std::f64::consts::PI / det.sqrt())
            * kappa.powf(rho)
            * (s0.powf(2.0 - 2.0 * rho) / (2.0 * rho - 2.0)
                + c * s0.powf(1.0 - 2.0 * rho) / (2.0 * rho - 1.0))
    };

    let direct = analytic(trunc);
    if direct <= 5e-6 {
        return direct;
    }
    // Extend by explicit shells while the annulus stays affordable.
    let n = trunc as i64;
    let m = (3 * n).min(n + 6_000);
    if (2 * m + 1).pow(2) - (2 * n + 1).pow(2) > 80_000_000 {
        return direct;
    }
    let mut acc = CompensatedSum::new();
    let mut bad = false;
    for k in (n + 1)..=m {
        let mut visit = |x: i64, y: i64| {
            let base = form.eval(x as f64, y as f64) - beta;
            if base <= 0.0 {
                bad = true;
            } else {
                acc.add(base.powf(-rho));
            }
        };
        // Shell max(|x|,|y|) = k, row by row.
        for x in -k..=k {
            if x.abs() == k {
                for y in -k..=k {
                    visit(x, y);
                }
            } else {
                visit(x, k);
                visit(x, -k);
            }
        }
    }
    if bad {
        return direct;
    }
    let hybrid = acc.total() + analytic(m as u32);
    direct.min(hybrid)
}

/// Tail bound for diagonal-truncated quadrant sums: on diagonal `s` the
/// form is at least `c_min * s^2` and a diagonal holds at most `s + 1`
/// pairs.
fn diagonal_tail_bound(c_min: f64, rho: f64, beta: f64, trunc: u32) -> f64 {
    if c_min <= 0.0 {
        return f64::INFINITY;
    }
    let n = trunc as f64;
    let kappa = if beta > 0.0 {
        let at = c_min * (n + 1.0) * (n + 1.0);
        if at <= beta {
            return f64::INFINITY;
        }
        at / (at - beta)
    } else {
        1.0
    };
    kappa.powf(rho)
        * c_min.powf(-rho)
        * (n.powf(2.0 - 2.0 * rho) / (2.0 * rho - 2.0)
            + n.powf(1.0 - 2.0 * rho) / (2.0 * rho - 1.0))
}

/// Lower bound constant `c_min` with `f^T S f >= c_min (m+n)^2` on the
/// closed quadrant, used by fragment tails.
fn quadrant_floor(form: &QuadForm) -> f64 {
    let (lmin, _) = form.eigenvalues();
    if lmin > 0.0 {
        // |f|^2 >= s^2 / 2 on the diagonal m + n = s.
        lmin / 2.0
    } else if form.s12 >= 0.0 {
        // Parallel spinors with aligned signs: the form is
        // (sqrt(s11) m + sqrt(s22) n)^2 >= min(s11, s22) s^2.
        form.s11.min(form.s22)
    } else {
        0.0
    }
}

/// Geometric zeta value: half-sum of `(f^T S f - beta)^(-rho)` over the
/// chosen coprime index set, truncated to `max(|m|,|n|) <= trunc`.
///
/// A vanishing term base is always an error; a negative base is allowed
/// only for integer `rho`, where the power is still well defined (the
/// enclosing disk of a corona enters this way).
pub fn geo_zeta(form: &QuadForm, params: &ZetaParams) -> Result<SumResult> {
    params.validate()?;
    if !form.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let bound = params.trunc as i64;
    let (raw, terms) = lattice_sum(
        form,
        params.rho,
        params.beta,
        bound,
        2 * bound,
        Pairs::Set(params.set),
    )?;
    Ok(SumResult {
        value: 0.5 * raw,
        tail_bound: 0.5 * plane_tail_bound(form, params.rho, params.beta, params.trunc),
        terms,
    })
}

/// Classical lattice zeta: half-sum over all nonzero integer vectors of
/// `(f^T S f)^(-rho)`, truncated to the box.
pub fn epstein_zeta(form: &QuadForm, rho: f64, trunc: u32) -> Result<SumResult> {
    if rho.is_nan() || rho <= 1.0 {
        return Err(Error::RhoTooSmall);
    }
    if trunc == 0 {
        return Err(Error::ZeroTruncation);
    }
    if !form.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let bound = trunc as i64;
    let (raw, terms) = lattice_sum(form, rho, 0.0, bound, 2 * bound, Pairs::FullLattice)?;
    Ok(SumResult {
        value: 0.5 * raw,
        tail_bound: 0.5 * plane_tail_bound(form, rho, 0.0, trunc),
        terms,
    })
}

/// Area of the full corona of the frame's base disk: `pi` times the
/// geometric zeta value at `rho = 2`, `beta = B`.
///
/// A singular frame (parallel spinors) is geometric only for a
/// curvature-0 base; that case degenerates to the one-parameter
/// diagonal sum over the quadrant-with-ends set, matching the totient
/// route.
pub fn corona_area(frame: &SpinorFrame, trunc: u32) -> Result<SumResult> {
    let form = QuadForm::from_frame(frame);
    if frame.det().is_zero() {
        if !frame.base_b().is_zero() {
            return Err(Error::SingularForm);
        }
        if trunc == 0 {
            return Err(Error::ZeroTruncation);
        }
        let bound = trunc as i64;
        let (raw, terms) = lattice_sum(
            &form,
            2.0,
            0.0,
            bound,
            bound,
            Pairs::Set(IndexSet::QuadrantWithEnds),
        )?;
        return Ok(SumResult {
            value: std::f64::consts::PI * raw,
            tail_bound: std::f64::consts::PI
                * diagonal_tail_bound(quadrant_floor(&form), 2.0, 0.0, trunc),
            terms,
        });
    }
    let params = ZetaParams {
        rho: 2.0,
        beta: to_f64(frame.base_b()),
        trunc,
        set: IndexSet::AllCoprime,
    };
    let r = geo_zeta(&form, &params)?;
    Ok(SumResult {
        value: std::f64::consts::PI * r.value,
        tail_bound: std::f64::consts::PI * r.tail_bound,
        terms: r.terms,
    })
}

/// Area of the corona fragment spanned by the frame: `pi` times the
/// quadrant sum truncated by diagonal, optionally including the two end
/// disks.
pub fn fragment_area(frame: &SpinorFrame, include_ends: bool, trunc: u32) -> Result<SumResult> {
    if trunc == 0 {
        return Err(Error::ZeroTruncation);
    }
    let form = QuadForm::from_frame(frame);
    if frame.det().is_zero() && !frame.base_b().is_zero() {
        return Err(Error::SingularForm);
    }
    let set = if include_ends {
        IndexSet::QuadrantWithEnds
    } else {
        IndexSet::Quadrant
    };
    let beta = to_f64(frame.base_b());
    let bound = trunc as i64;
    let (raw, terms) = lattice_sum(&form, 2.0, beta, bound, bound, Pairs::Set(set))?;
    Ok(SumResult {
        value: std::f64::consts::PI * raw,
        tail_bound: std::f64::consts::PI
            * diagonal_tail_bound(quadrant_floor(&form), 2.0, beta, trunc),
        terms,
    })
}

/// Euler totients `0..=n` by sieve.
pub fn totient_sieve(n: u32) -> Vec<u32> {
    let n = n as usize;
    let mut phi: Vec<u32> = (0..=n as u32).collect();
    for p in 2..=n {
        if phi[p] == p as u32 {
            let mut k = p;
            while k <= n {
                phi[k] -= phi[k] / p as u32;
                k += p;
            }
        }
    }
    phi
}

/// Truncated Dirichlet series `sum phi(n)/n^s`, `s > 2`, with the
/// integral tail bound `N^(2-s)/(s-2)`.
pub fn totient_series(s: f64, trunc: u32) -> Result<SumResult> {
    if s.is_nan() || s <= 2.0 {
        return Err(Error::SeriesExponentTooSmall);
    }
    if trunc == 0 {
        return Err(Error::ZeroTruncation);
    }
    let phi = totient_sieve(trunc);
    let mut acc = CompensatedSum::new();
    for n in 1..=trunc {
        acc.add(phi[n as usize] as f64 * (n as f64).powf(-s));
    }
    Ok(SumResult {
        value: acc.total(),
        tail_bound: (trunc as f64).powf(2.0 - s) / (s - 2.0),
        terms: trunc as u64,
    })
}

/// Area between two neighboring disks of the strip packing's line corona
/// via the totient route: `pi * (1 + sum phi(n)/n^4)`.
pub fn ford_corona_area(trunc: u32) -> Result<SumResult> {
    let s = totient_series(4.0, trunc)?;
    Ok(SumResult {
        value: std::f64::consts::PI * (1.0 + s.value),
        tail_bound: std::f64::consts::PI * s.tail_bound,
        terms: s.terms,
    })
}

/// Exact curvature produced by the frame at a coprime index pair:
/// `f^T (M^T M) f - B`.
pub fn curvature_polynomial(frame: &SpinorFrame, m: i64, n: i64) -> Result<Rat> {
    if !coprime(m, n) {
        return Err(Error::NonCoprimeIndex(m, n));
    }
    Ok(frame.form_at(m, n) - frame.base_b())
}

/// Right action of a unimodular integer matrix on the frame:
/// `M -> M g`, same base curvature. Preserves `|det M|`.
pub fn sl2_transform(frame: &SpinorFrame, g: [[i64; 2]; 2]) -> Result<SpinorFrame> {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if det != 1 && det != -1 {
        return Err(Error::NotUnimodular);
    }
    let col = |c0: i64, c1: i64| {
        Spinor::new(
            rat_i(c0) * frame.u().m() + rat_i(c1) * frame.v().m(),
            rat_i(c0) * frame.u().n() + rat_i(c1) * frame.v().n(),
        )
    };
    Ok(SpinorFrame {
        u: col(g[0][0], g[1][0]),
        v: col(g[0][1], g[1][1]),
        base_b: frame.base_b.clone(),
    })
}

// ---------------------------------------------------------------------
// Exact partial evaluation for integral frames.
// ---------------------------------------------------------------------

fn integral_box_for_cutoff(frame: &SpinorFrame, form: &QuadForm, cmax: i64) -> Result<i64> {
    let floor = quadrant_floor(form);
    if floor <= 0.0 {
        return Err(Error::SingularForm);
    }
    let b = to_f64(frame.base_b());
    let cap = ((cmax as f64 + b.abs() + 1.0) / (floor * (1.0 - 1e-9))).sqrt();
    Ok(cap.ceil() as i64 + 2)
}

fn integral_curvature_at(frame_i: (i64, i64, i64, i64, i64), m: i64, n: i64) -> i128 {
    let (a, b, c, d, base) = frame_i;
    let x = (a as i128) * (m as i128) + (c as i128) * (n as i128);
    let y = (b as i128) * (m as i128) + (d as i128) * (n as i128);
    x * x + y * y - base as i128
}

/// Visits one representative of every `{f, -f}` pair of coprime indices
/// whose curvature is at most `cmax`. Requires a nonsingular integral
/// frame.
fn for_each_half_set_curvature(
    frame: &SpinorFrame,
    cmax: i64,
    f: &mut impl FnMut(i128),
) -> Result<()> {
    let fi = frame.as_i64()?;
    let form = QuadForm::from_frame(frame);
    let (lmin, _) = form.eigenvalues();
    if lmin <= 0.0 {
        return Err(Error::SingularForm);
    }
    let b = to_f64(frame.base_b());
    let box_bound =
        (((cmax as f64 + b.abs() + 1.0) / (lmin * (1.0 - 1e-9))).sqrt()).ceil() as i64 + 2;
    let cutoff = cmax as i128;
    let mut push = |m: i64, n: i64| {
        let c = integral_curvature_at(fi, m, n);
        if c <= cutoff {
            f(c);
        }
    };
    push(1, 0);
    push(0, 1);
    for m in 1..=box_bound {
        for n in 1..=box_bound {
            if coprime(m, n) {
                push(m, n);
                push(m, -n);
            }
        }
    }
    Ok(())
}

/// Sorted multiset of corona curvatures `<= cmax` generated by the
/// polynomial over coprime pairs, one entry per `{f, -f}` class. For a
/// neighboring frame this is the corona's exact curvature list.
pub fn corona_curvatures_leq(frame: &SpinorFrame, cmax: i64) -> Result<Vec<i128>> {
    let mut out = Vec::new();
    for_each_half_set_curvature(frame, cmax, &mut |c| out.push(c))?;
    out.sort_unstable();
    Ok(out)
}

/// Exact value of the curvature-restricted corona sum
/// `1/2 * sum_{P(f) <= cmax} P(f)^(-2)` over all coprime pairs, i.e.
/// `sum 1/c^2` over the corona disks of curvature at most `cmax`.
pub fn corona_partial_sum_exact(frame: &SpinorFrame, cmax: i64) -> Result<Rat> {
    let mut terms = Vec::new();
    for_each_half_set_curvature(frame, cmax, &mut |c| {
        terms.push(c * c);
    })?;
    Ok(sum_reciprocals(terms))
}

/// Exact curvature-restricted fragment sum over the quadrant (optionally
/// with end pairs): `sum_{P(f) <= cmax} P(f)^(-2)`.
pub fn fragment_partial_sum_exact(
    frame: &SpinorFrame,
    include_ends: bool,
    cmax: i64,
) -> Result<Rat> {
    let fi = frame.as_i64()?;
    let form = QuadForm::from_frame(frame);
    let box_bound = integral_box_for_cutoff(frame, &form, cmax)?;
    let cutoff = cmax as i128;
    let mut terms = Vec::new();
    let mut push = |m: i64, n: i64| {
        let c = integral_curvature_at(fi, m, n);
        if c <= cutoff {
            terms.push(c * c);
        }
    };
    if include_ends {
        push(1, 0);
        push(0, 1);
    }
    for m in 1..=box_bound {
        for n in 1..=box_bound {
            if coprime(m, n) {
                push(m, n);
            }
        }
    }
    Ok(sum_reciprocals(terms))
}

/// `sum 1/d` over the exact denominators, by balanced reduction.
fn sum_reciprocals(dens: Vec<i128>) -> Rat {
    let fracs: Vec<Rat> = dens
        .into_iter()
        .map(|den| Rat::new(num_bigint::BigInt::from(1), num_bigint::BigInt::from(den)))
        .collect();
    balanced_sum(fracs)
}

/// Exact `sum 1/c^2` over a list of curvatures (oracle side).
pub fn reciprocal_square_sum(curvatures: &[Rat]) -> Rat {
    let fracs: Vec<Rat> = curvatures.iter().map(|c| (c * c).recip()).collect();
    balanced_sum(fracs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn window_outer() -> SpinorFrame {
        SpinorFrame::from_ints((0, 1), (1, 0), -1).unwrap()
    }

    #[test]
    fn frame_determinant_law() {
        assert!(window_outer().det_consistent());
        assert!(SpinorFrame::from_ints((1, 2), (2, 2), 2).is_ok());
        assert!(SpinorFrame::from_ints((8, 0), (2, -3), 24).is_ok());
        assert!(SpinorFrame::from_ints((1, 0), (1, 0), 0).is_ok());
        assert!(matches!(
            SpinorFrame::from_ints((1, 0), (0, 1), 2),
            Err(Error::FrameMismatch { .. })
        ));
    }

    #[test]
    fn quad_form_basics() {
        let f = SpinorFrame::from_ints((8, 0), (2, -3), 24).unwrap();
        let q = QuadForm::from_frame(&f);
        assert_eq!((q.s11(), q.s12(), q.s22()), (64.0, 16.0, 13.0));
        assert_eq!(q.det(), 576.0);
        let (lmin, lmax) = q.eigenvalues();
        assert!(lmin > 8.0 && lmin < 9.0);
        assert!(lmax > 68.0 && lmax < 69.0);
        assert!(QuadForm::new(1.0, 1.0, 1.0).is_err());
        assert!(QuadForm::new(-1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn epstein_identity_unit_form() {
        // Independent reference: sum over all nonzero (m,n) of
        // (m^2+n^2)^-2 equals 4*zeta(2)*beta(2); the half-sum is half
        // that.
        let q = QuadForm::new(1.0, 0.0, 1.0).unwrap();
        let r = epstein_zeta(&q, 2.0, 600).unwrap();
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        let beta2 = 0.915_965_594_177_219_f64; // Catalan
        let reference = 2.0 * zeta2 * beta2;
        assert!(
            (r.value - reference).abs() <= r.tail_bound + 1e-9,
            "value {} vs reference {} (tail {})",
            r.value,
            reference,
            r.tail_bound
        );
        // Monotone in rho.
        let r3 = epstein_zeta(&q, 3.0, 600).unwrap();
        assert!(r3.value < r.value);
    }

    #[test]
    fn epstein_matches_brute_force_at_same_truncation() {
        let q = QuadForm::new(2.0, 1.0, 3.0).unwrap();
        let n = 120i64;
        let mut brute = 0.0f64;
        for m in -n..=n {
            for k in -n..=n {
                if (m, k) == (0, 0) {
                    continue;
                }
                let v = q.eval(m as f64, k as f64);
                brute += (1.0 / v) * (1.0 / v);
            }
        }
        let r = epstein_zeta(&q, 2.0, n as u32).unwrap();
        assert!((r.value - 0.5 * brute).abs() < 1e-9);
        assert_eq!(r.terms, ((2 * n + 1) * (2 * n + 1) - 1) as u64);
    }

    #[test]
    fn geo_zeta_matches_brute_force_coprime_sum() {
        // The unit-form shifted sum behind the great-circle corona.
        let q = QuadForm::new(1.0, 0.0, 1.0).unwrap();
        let p = ZetaParams {
            rho: 2.0,
            beta: -1.0,
            trunc: 400,
            set: IndexSet::AllCoprime,
        };
        let r = geo_zeta(&q, &p).unwrap();
        let n = 400i64;
        let mut brute = 0.0f64;
        for m in -n..=n {
            for k in -n..=n {
                if coprime(m, k) {
                    let v = (m * m + k * k + 1) as f64;
                    brute += 1.0 / (v * v);
                }
            }
        }
        assert!((r.value - 0.5 * brute).abs() < 1e-9);
    }

    #[test]
    fn gcd_layering_ties_the_two_zetas() {
        // Splitting every lattice vector as g * (coprime vector) turns the
        // full-lattice sum into a sum of scaled coprime sums, exactly at
        // matched truncations.
        let q = QuadForm::new(1.0, 0.0, 2.0).unwrap();
        let n = 200u32;
        let full = epstein_zeta(&q, 2.0, n).unwrap().value;
        let mut layered = 0.0f64;
        for g in 1..=n {
            let inner = geo_zeta(
                &q,
                &ZetaParams {
                    rho: 2.0,
                    beta: 0.0,
                    trunc: n / g,
                    set: IndexSet::AllCoprime,
                },
            );
            match inner {
                Ok(r) => layered += (g as f64).powi(-4) * r.value,
                Err(Error::ZeroTruncation) => break,
                Err(e) => panic!("{e}"),
            }
        }
        assert!((full - layered).abs() < 1e-10, "{full} vs {layered}");
    }

    #[test]
    fn zero_and_negative_term_bases() {
        let q = QuadForm::new(1.0, 0.0, 1.0).unwrap();
        // beta = 2 hits (1,1) dead on: 1 + 1 - 2 = 0.
        let err = geo_zeta(
            &q,
            &ZetaParams {
                rho: 2.0,
                beta: 2.0,
                trunc: 10,
                set: IndexSet::AllCoprime,
            },
        )
        .unwrap_err();
        assert_eq!(err, Error::ZeroTermBase(1, 1));
        // Negative bases are fine for integer rho...
        assert!(geo_zeta(
            &q,
            &ZetaParams {
                rho: 2.0,
                beta: 1.5,
                trunc: 10,
                set: IndexSet::AllCoprime,
            },
        )
        .is_ok());
        // ...but not for fractional rho.
        let err = geo_zeta(
            &q,
            &ZetaParams {
                rho: 2.5,
                beta: 1.5,
                trunc: 10,
                set: IndexSet::AllCoprime,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::NegativeTermBase(_, _)));
    }

    #[test]
    fn corona_area_window_value() {
        // Direct half-sum over coprime pairs of (m^2+n^2+1)^-2, boxed.
        let frame = window_outer();
        let r = corona_area(&frame, 500).unwrap();
        let n = 500i64;
        let mut brute = 0.0f64;
        for m in -n..=n {
            for k in -n..=n {
                if coprime(m, k) {
                    let v = (m * m + k * k + 1) as f64;
                    brute += 1.0 / (v * v);
                }
            }
        }
        let want = std::f64::consts::PI * 0.5 * brute;
        assert!((r.value - want).abs() < 1e-9);
        assert!(r.tail_bound < 1e-4);
    }

    #[test]
    fn corona_area_rejects_nonzero_singular() {
        let f =
            SpinorFrame::new_unchecked(Spinor::from_ints(1, 1), Spinor::from_ints(2, 2), rat_i(2));
        assert_eq!(corona_area(&f, 100), Err(Error::SingularForm));
    }

    #[test]
    fn ford_route_degenerates_to_totient_series() {
        let frame = SpinorFrame::from_ints((1, 0), (1, 0), 0).unwrap();
        let n = 800;
        let via_pairs = corona_area(&frame, n).unwrap();
        let via_phi = ford_corona_area(n).unwrap();
        assert!((via_pairs.value - via_phi.value).abs() < 1e-12);
        assert!(via_pairs.tail_bound < 1e-4);
    }

    #[test]
    fn totient_series_values() {
        assert!((totient_series(4.0, 1).unwrap().value - 1.0).abs() < 1e-15);
        assert!((totient_series(3.0, 2).unwrap().value - 1.125).abs() < 1e-15);
        assert_eq!(totient_series(2.0, 5), Err(Error::SeriesExponentTooSmall));
        // zeta(3)/zeta(4) by two independent series.
        let zeta3: f64 = (1..200_000).map(|k: u64| (k as f64).powi(-3)).sum();
        let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
        let r = totient_series(4.0, 20_000).unwrap();
        assert!((r.value - zeta3 / zeta4).abs() < 1e-7);
    }

    #[test]
    fn totient_sieve_matches_trial_division() {
        let phi = totient_sieve(300);
        for n in 1..=300u32 {
            let brute = (1..=n).filter(|k| coprime(n as i64, *k as i64)).count() as u32;
            assert_eq!(phi[n as usize], brute, "phi({n})");
        }
    }

    #[test]
    fn curvature_polynomial_values() {
        let f2 = SpinorFrame::from_ints((1, 2), (2, 2), 2).unwrap();
        assert_eq!(curvature_polynomial(&f2, 1, 1).unwrap(), rat_i(23));
        let fo = window_outer();
        assert_eq!(curvature_polynomial(&fo, 1, 1).unwrap(), rat_i(3));
        let f4 = SpinorFrame::from_ints((8, 0), (2, -3), 24).unwrap();
        assert_eq!(curvature_polynomial(&f4, 0, 1).unwrap(), rat_i(-11));
        assert_eq!(
            curvature_polynomial(&fo, 2, 4),
            Err(Error::NonCoprimeIndex(2, 4))
        );
    }

    #[test]
    fn sl2_action() {
        let fo = window_outer();
        let id = sl2_transform(&fo, [[1, 0], [0, 1]]).unwrap();
        assert_eq!(id, fo);
        let sheared = sl2_transform(&fo, [[1, 1], [0, 1]]).unwrap();
        assert_eq!(sheared.u(), &Spinor::from_ints(0, 1));
        assert_eq!(sheared.v(), &Spinor::from_ints(1, 1));
        assert!(sheared.det_consistent());
        let swapped = sl2_transform(&fo, [[0, 1], [1, 0]]).unwrap();
        let a = corona_area(&fo, 300).unwrap();
        let b = corona_area(&swapped, 300).unwrap();
        assert!((a.value - b.value).abs() <= 1e-13 * a.value.abs());
        assert_eq!(
            sl2_transform(&fo, [[2, 0], [0, 1]]),
            Err(Error::NotUnimodular)
        );
    }

    #[test]
    fn sl2_invariance_within_tails() {
        let fo = window_outer();
        let base = corona_area(&fo, 900).unwrap();
        for g in [[[1, 1], [0, 1]], [[2, 1], [1, 1]], [[3, 2], [1, 1]]] {
            let t = sl2_transform(&fo, g).unwrap();
            let r = corona_area(&t, 900).unwrap();
            assert!(
                (base.value - r.value).abs() <= base.tail_bound + r.tail_bound,
                "g = {g:?}: {} vs {} (tails {} + {})",
                base.value,
                r.value,
                base.tail_bound,
                r.tail_bound
            );
        }
    }

    #[test]
    fn exact_partial_sums_small_cutoff() {
        // Corona of the great circle up to curvature 6: disks 2,2,3,3 and
        // four 6s.
        let fo = window_outer();
        let got = corona_partial_sum_exact(&fo, 6).unwrap();
        let want = rat(2, 4) + rat(2, 9) + rat(4, 36);
        assert_eq!(got, want);
        let ms = corona_curvatures_leq(&fo, 6).unwrap();
        assert_eq!(ms, vec![2, 2, 3, 3, 6, 6, 6, 6]);

        // Quarter fragment up to 6: disks 2, 3, 6.
        let quarter = SpinorFrame::from_ints((1, 1), (0, 1), -1).unwrap();
        let got = fragment_partial_sum_exact(&quarter, true, 6).unwrap();
        assert_eq!(got, rat(1, 4) + rat(1, 9) + rat(1, 36));
        let strict = fragment_partial_sum_exact(&quarter, false, 6).unwrap();
        assert_eq!(strict, rat(1, 36));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let q = QuadForm::new(1.0, 0.0, 1.0).unwrap();
        let p = ZetaParams {
            rho: 2.0,
            beta: -1.0,
            trunc: 600,
            set: IndexSet::AllCoprime,
        };
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| geo_zeta(&q, &p).unwrap())
        };
        let (a, b, c) = (run(1), run(3), run(8));
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.value.to_bits(), c.value.to_bits());
        assert_eq!(a.terms, c.terms);
    }

    #[test]
    fn monotone_in_truncation() {
        let q = QuadForm::new(3.0, 1.0, 2.0).unwrap();
        let mut last = 0.0;
        let mut last_tail = f64::INFINITY;
        for n in [50u32, 100, 200, 400] {
            let r = geo_zeta(
                &q,
                &ZetaParams {
                    rho: 2.0,
                    beta: 0.5,
                    trunc: n,
                    set: IndexSet::AllCoprime,
                },
            )
            .unwrap();
            assert!(r.value >= last);
            assert!(r.tail_bound <= last_tail);
            last = r.value;
            last_tail = r.tail_bound;
        }
    }
}
