//! Tangency spinors.
//!
//! An ordered pair of tangent disks with curvatures `b1`, `b2` and
//! center difference `z` determines a 2-vector `u` with `u^2 = b1*b2*z`
//! (as a complex square), defined up to a global sign. Its squared norm is
//! `b1 + b2`, and the complex square reproduces the pair's Pythagorean
//! triple. Spinors are exact whenever that square is a perfect square of a
//! Gaussian rational; otherwise a double-precision approximation is
//! returned and flagged.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;

use crate::disk::{pythagorean_triple, DiskSymbol};
use crate::error::{Error, Result};
use crate::rat::{fmt_rat, rat_i, sqrt_exact, to_f64, Rat};

/// Exact spinor `[m, n]^T`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Spinor {
    m: Rat,
    n: Rat,
}

impl Spinor {
    pub fn new(m: Rat, n: Rat) -> Self {
        Spinor { m, n }
    }

    pub fn from_ints(m: i64, n: i64) -> Self {
        Spinor::new(rat_i(m), rat_i(n))
    }

    pub fn m(&self) -> &Rat {
        &self.m
    }

    pub fn n(&self) -> &Rat {
        &self.n
    }

    pub fn norm_sq(&self) -> Rat {
        &self.m * &self.m + &self.n * &self.n
    }

    /// Multiplication by `i`: the spinor of the reversed pair.
    pub fn reverse(&self) -> Spinor {
        Spinor::new(-self.n.clone(), self.m.clone())
    }

    /// `det [self | other]`.
    pub fn symplectic(&self, other: &Spinor) -> Rat {
        &self.m * &other.n - &self.n * &other.m
    }

    /// `(m + ni)^2` as `(re, im)`.
    pub fn complex_square(&self) -> (Rat, Rat) {
        (
            &self.m * &self.m - &self.n * &self.n,
            rat_i(2) * &self.m * &self.n,
        )
    }

    /// Sign representative with `m > 0`, or `m = 0` and `n >= 0`.
    pub fn canonical(&self) -> Spinor {
        if self.m.is_negative() || (self.m.is_zero() && self.n.is_negative()) {
            -self
        } else {
            self.clone()
        }
    }

    pub fn is_integral(&self) -> bool {
        self.m.is_integer() && self.n.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero() && self.n.is_zero()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.m), to_f64(&self.n))
    }
}

impl fmt::Debug for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}]", fmt_rat(&self.m), fmt_rat(&self.n))
    }
}

impl Add for &Spinor {
    type Output = Spinor;
    fn add(self, rhs: &Spinor) -> Spinor {
        Spinor::new(&self.m + &rhs.m, &self.n + &rhs.n)
    }
}

impl Sub for &Spinor {
    type Output = Spinor;
    fn sub(self, rhs: &Spinor) -> Spinor {
        Spinor::new(&self.m - &rhs.m, &self.n - &rhs.n)
    }
}

impl Neg for &Spinor {
    type Output = Spinor;
    fn neg(self) -> Spinor {
        Spinor::new(-self.m.clone(), -self.n.clone())
    }
}

impl serde::Serialize for Spinor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (fmt_rat(&self.m), fmt_rat(&self.n)).serialize(s)
    }
}

/// Result of [`tangency_spinor`]: exact when the pair's Gaussian square
/// admits an exact root, double precision otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum TangencySpinor {
    Exact(Spinor),
    Approx { m: f64, n: f64 },
}

impl TangencySpinor {
    pub fn is_exact(&self) -> bool {
        matches!(self, TangencySpinor::Exact(_))
    }

    pub fn exact(&self) -> Option<&Spinor> {
        match self {
            TangencySpinor::Exact(s) => Some(s),
            TangencySpinor::Approx { .. } => None,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            TangencySpinor::Exact(s) => s.to_f64_pair(),
            TangencySpinor::Approx { m, n } => (*m, *n),
        }
    }
}

impl serde::Serialize for TangencySpinor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TangencySpinor", 2)?;
        match self {
            TangencySpinor::Exact(sp) => {
                st.serialize_field("u", &(fmt_rat(sp.m()), fmt_rat(sp.n())))?;
                st.serialize_field("exact", &true)?;
            }
            TangencySpinor::Approx { m, n } => {
                st.serialize_field("u", &(m, n))?;
                st.serialize_field("exact", &false)?;
            }
        }
        st.end()
    }
}

/// Spinor of the ordered tangent pair `(d1, d2)`, canonical sign.
///
/// The complex square of the result equals the `(a, b)` legs of the pair's
/// Pythagorean triple, and `|u|^2 = b1 + b2`, both exactly on the exact
/// path.
pub fn tangency_spinor(d1: &DiskSymbol, d2: &DiskSymbol) -> Result<TangencySpinor> {
    let (a, b, c) = pythagorean_triple(d1, d2)?;
    let half_sum = (&c + &a) / rat_i(2);
    let half_diff = (&c - &a) / rat_i(2);
    if let (Some(m), Some(n0)) = (sqrt_exact(&half_sum), sqrt_exact(&half_diff)) {
        let n = if b.is_negative() { -n0 } else { n0 };
        return Ok(TangencySpinor::Exact(Spinor::new(m, n).canonical()));
    }
    let (af, bf, cf) = (to_f64(&a), to_f64(&b), to_f64(&c));
    let m = ((cf + af) / 2.0).max(0.0).sqrt();
    let mut n = ((cf - af) / 2.0).max(0.0).sqrt();
    if bf < 0.0 {
        n = -n;
    }
    if m == 0.0 {
        n = n.abs();
    }
    Ok(TangencySpinor::Approx { m, n })
}

/// True when some sign assignment makes the three spinors sum to zero.
pub fn check_curl(a: &Spinor, b: &Spinor, c: &Spinor) -> bool {
    let combos = [&(a + b) + c, &(a + b) - c, &(a - b) + c, &(a - b) - c];
    combos.iter().any(|s| s.is_zero())
}

/// Componentwise sum. Under harmonized signs this is the spinor toward
/// the Descartes completion between the two targets.
pub fn add_spinors(a: &Spinor, b: &Spinor) -> Spinor {
    a + b
}

/// Reconstructs the disk a spinor points at from its base disk.
///
/// Inverts the defining relation: the target curvature is
/// `|u|^2 - base.b` and the center offset is `u^2 / (base.b * target.b)`.
/// A curvature-0 target is rebuilt as the tangent line with normal
/// `u^2 / base.b`.
pub fn disk_from_spinor(base: &DiskSymbol, u: &Spinor) -> Result<DiskSymbol> {
    if base.is_line() {
        return Err(Error::LineUnsupported(
            "a line base does not pin the target position",
        ));
    }
    let bt = u.norm_sq() - base.b();
    let (re, im) = u.complex_square();
    let (cx, cy) = base.center().expect("nonzero curvature");
    if bt.is_zero() {
        let nx = &re / base.b();
        let ny = &im / base.b();
        let d = (base.xd() * &nx + base.yd() * &ny + rat_i(1)) / base.b();
        return DiskSymbol::line_from_normal_offset(&nx, &ny, &d);
    }
    let scale = base.b() * &bt;
    let tx = cx + &re / &scale;
    let ty = cy + &im / &scale;
    DiskSymbol::from_center_radius(&tx, &ty, &bt.recip())
}

/// Curvature of the completion inscribed between three mutually tangent
/// disks (the larger Descartes root). Exact when the discriminant is a
/// perfect square.
fn inner_completion_curvature(c1: &Rat, c2: &Rat, c3: &Rat) -> Option<Rat> {
    let disc = c1 * c2 + c2 * c3 + c3 * c1;
    let root = sqrt_exact(&disc)?;
    Some(c1 + c2 + c3 + rat_i(2) * root)
}

/// Checks whether two spinors from a common base are harmonized over the
/// arc between their targets: their sum must point at the completion
/// inscribed between the two target disks.
pub fn harmonized(a: &Spinor, b: &Spinor, base: &DiskSymbol) -> Result<bool> {
    let da = disk_from_spinor(base, a)?;
    let db = disk_from_spinor(base, b)?;
    if !da.tangent(&db) {
        return Err(Error::NotTangent);
    }
    let sum_curv = (a + b).norm_sq() - base.b();
    match inner_completion_curvature(base.b(), da.b(), db.b()) {
        Some(inner) => Ok(sum_curv == inner),
        None => {
            // Non-integral configuration: fall back to a numeric compare.
            let disc = to_f64(&(base.b() * da.b() + da.b() * db.b() + db.b() * base.b()));
            let inner = to_f64(&(base.b() + da.b() + db.b())) + 2.0 * disc.max(0.0).sqrt();
            let got = to_f64(&sum_curv);
            Ok((got - inner).abs() <= 1e-9 * inner.abs().max(1.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn disk(x: (i64, i64), y: (i64, i64), r: (i64, i64)) -> DiskSymbol {
        DiskSymbol::from_center_radius(&rat(x.0, x.1), &rat(y.0, y.1), &rat(r.0, r.1)).unwrap()
    }

    fn sp(m: i64, n: i64) -> Spinor {
        Spinor::from_ints(m, n)
    }

    fn exact_spinor(d1: &DiskSymbol, d2: &DiskSymbol) -> Spinor {
        match tangency_spinor(d1, d2).unwrap() {
            TangencySpinor::Exact(s) => s,
            TangencySpinor::Approx { .. } => panic!("expected exact spinor"),
        }
    }

    #[test]
    fn spinors_match_arrow_labels() {
        let d24 = disk((17, 24), (12, 24), (1, 24));
        let d40 = disk((31, 40), (20, 40), (1, 40));
        assert_eq!(exact_spinor(&d24, &d40), sp(8, 0));

        let d11 = disk((8, 11), (6, 11), (-1, 11));
        assert_eq!(exact_spinor(&d24, &d11), sp(2, -3));
        assert_eq!(exact_spinor(&d24, &d11).norm_sq(), rat_i(13));

        let right2 = disk((1, 2), (0, 1), (1, 2));
        let top3 = disk((0, 1), (2, 3), (1, 3));
        assert_eq!(exact_spinor(&right2, &top3), sp(1, 2));
    }

    #[test]
    fn spinor_squares_match_triples() {
        let right2 = disk((1, 2), (0, 1), (1, 2));
        let top3 = disk((0, 1), (2, 3), (1, 3));
        let u = exact_spinor(&right2, &top3);
        let (a, b, c) = pythagorean_triple(&right2, &top3).unwrap();
        assert_eq!(u.complex_square(), (a, b));
        assert_eq!(u.norm_sq(), c);
    }

    #[test]
    fn reverse_is_rotation_by_i() {
        assert_eq!(sp(8, 0).reverse(), sp(0, 8));
        assert_eq!(sp(1, 2).reverse(), sp(-2, 1));
        let u = sp(3, -5);
        assert_eq!(u.reverse().reverse(), -&u);
        assert_eq!(u.reverse().norm_sq(), u.norm_sq());
    }

    #[test]
    fn norms_add_curvatures() {
        assert_eq!(sp(1, 2).norm_sq(), rat_i(5));
        assert_eq!(sp(8, 0).norm_sq(), rat_i(64));
        assert_eq!(sp(2, -3).norm_sq(), rat_i(13));
    }

    #[test]
    fn symplectic_products() {
        assert_eq!(sp(8, 0).symplectic(&sp(6, 3)), rat_i(24));
        assert_eq!(sp(2, -3).symplectic(&sp(4, 6)), rat_i(24));
        assert_eq!(sp(1, 2).symplectic(&sp(2, 4)), rat_i(0));
        // Antisymmetry and invariance under reversal.
        let (a, b) = (sp(3, 1), sp(-2, 5));
        assert_eq!(a.symplectic(&b), -b.symplectic(&a));
        assert_eq!(a.reverse().symplectic(&b.reverse()), a.symplectic(&b));
    }

    #[test]
    fn curl_sign_search() {
        assert!(check_curl(&sp(1, 0), &sp(0, 1), &sp(1, 1)));
        assert!(!check_curl(&sp(1, 0), &sp(0, 1), &sp(5, 5)));

        // Spinors among the mutually tangent disks 2, 3, 6.
        let right2 = disk((1, 2), (0, 1), (1, 2));
        let top3 = disk((0, 1), (2, 3), (1, 3));
        let six = disk((1, 2), (2, 3), (1, 6));
        let a = exact_spinor(&right2, &top3);
        let b = exact_spinor(&top3, &six);
        let c = exact_spinor(&six, &right2);
        assert!(check_curl(&a, &b, &c));
    }

    #[test]
    fn additivity_examples() {
        let s = &sp(1, 2) + &sp(2, 2);
        assert_eq!(s, sp(3, 4));
        assert_eq!(s.norm_sq(), rat_i(25));

        let t = &sp(8, 0) + &sp(6, 3);
        assert_eq!(t, sp(14, 3));
        assert_eq!(t.norm_sq(), rat_i(205));

        let w = &sp(1, 2) + &sp(-2, -2);
        assert_eq!(w, sp(-1, 0));
        assert_eq!(w.norm_sq(), rat_i(1));
    }

    #[test]
    fn disk_reconstruction_from_spinor() {
        let right2 = disk((1, 2), (0, 1), (1, 2));
        assert_eq!(
            disk_from_spinor(&right2, &sp(1, 2)).unwrap(),
            disk((0, 1), (2, 3), (1, 3))
        );
        assert_eq!(
            disk_from_spinor(&right2, &sp(2, 2)).unwrap(),
            disk((1, 2), (2, 3), (1, 6))
        );
        assert_eq!(
            disk_from_spinor(&right2, &sp(1, 0)).unwrap(),
            disk((0, 1), (0, 1), (-1, 1))
        );

        // Curvature-0 target: the strip line x = 1 from a unit disk.
        let unit = disk((0, 1), (0, 1), (1, 1));
        let line = disk_from_spinor(&unit, &sp(1, 0)).unwrap();
        assert!(line.is_line());
        assert_eq!(line.xd(), &rat_i(1));
        assert_eq!(line.b_co(), &rat_i(2));
    }

    #[test]
    fn harmonization() {
        let right2 = disk((1, 2), (0, 1), (1, 2));
        assert_eq!(harmonized(&sp(1, 2), &sp(2, 2), &right2), Ok(true));
        assert_eq!(harmonized(&sp(1, 2), &sp(-2, -2), &right2), Ok(false));

        let d24 = disk((17, 24), (12, 24), (1, 24));
        assert_eq!(harmonized(&sp(8, 0), &sp(6, 3), &d24), Ok(true));

        // Targets that are not mutually tangent are a precondition error.
        assert_eq!(
            harmonized(&sp(1, 2), &sp(1, -2), &right2),
            Err(Error::NotTangent)
        );
    }

    #[test]
    fn approximate_spinor_for_non_square_pairs() {
        // A rational tangent pair whose Gaussian square has no exact root.
        let a = disk((0, 1), (0, 1), (1, 1));
        let b = disk((3, 1), (0, 1), (2, 1));
        let ts = tangency_spinor(&a, &b).unwrap();
        assert!(!ts.is_exact());
        let (m, n) = ts.to_f64_pair();
        // |u|^2 = b1 + b2 = 1 + 1/2.
        assert!((m * m + n * n - 1.5).abs() < 1e-12);
    }
}
