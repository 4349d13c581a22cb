//! Disks in inversive coordinates.
//!
//! A disk is stored as the quadruple `(b, b_co, xd, yd)`: curvature,
//! co-curvature and reduced center, bound together by the exact constraint
//! `xd^2 + yd^2 - b*b_co = 1`. Lines are curvature-0 disks whose `(xd, yd)`
//! is the unit normal pointing away from the packing region and whose
//! co-curvature is twice the signed offset. Enclosing disks carry negative
//! curvature. This keeps the Descartes reflection linear in all four
//! coordinates and gives a single exact tangency predicate.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde::de::Error as _;
use serde::ser::SerializeStruct;

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, parse_rat, rat_i, Rat};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiskSymbol {
    b: Rat,
    b_co: Rat,
    xd: Rat,
    yd: Rat,
}

impl DiskSymbol {
    /// Builds a symbol from raw inversive coordinates, checking the
    /// constraint exactly.
    pub fn from_parts(b: Rat, b_co: Rat, xd: Rat, yd: Rat) -> Result<Self> {
        if &xd * &xd + &yd * &yd - &b * &b_co != rat_i(1) {
            return Err(Error::ConstraintViolation);
        }
        Ok(DiskSymbol { b, b_co, xd, yd })
    }

    /// Test-harness hook: bypasses the constraint check.
    #[doc(hidden)]
    pub fn from_parts_unchecked(b: Rat, b_co: Rat, xd: Rat, yd: Rat) -> Self {
        DiskSymbol { b, b_co, xd, yd }
    }

    /// Disk with center `(x, y)` and signed radius `r` (negative for an
    /// enclosing disk).
    pub fn from_center_radius(x: &Rat, y: &Rat, r: &Rat) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::ZeroRadius);
        }
        let b = r.recip();
        let xd = x / r;
        let yd = y / r;
        let b_co = (x * x + y * y - r * r) / r;
        Ok(DiskSymbol { b, b_co, xd, yd })
    }

    /// Line `{p : n . p = d}` as a curvature-0 disk. The unit normal `n`
    /// points away from the packing region.
    pub fn line_from_normal_offset(nx: &Rat, ny: &Rat, d: &Rat) -> Result<Self> {
        if nx * nx + ny * ny != rat_i(1) {
            return Err(Error::NonUnitNormal);
        }
        Ok(DiskSymbol {
            b: Rat::zero(),
            b_co: d * rat_i(2),
            xd: nx.clone(),
            yd: ny.clone(),
        })
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn b_co(&self) -> &Rat {
        &self.b_co
    }

    pub fn xd(&self) -> &Rat {
        &self.xd
    }

    pub fn yd(&self) -> &Rat {
        &self.yd
    }

    pub fn is_line(&self) -> bool {
        self.b.is_zero()
    }

    pub fn center(&self) -> Option<(Rat, Rat)> {
        if self.is_line() {
            None
        } else {
            Some((&self.xd / &self.b, &self.yd / &self.b))
        }
    }

    pub fn radius(&self) -> Option<Rat> {
        if self.is_line() {
            None
        } else {
            Some(self.b.recip())
        }
    }

    /// Inversive product. Equals exactly -1 for externally tangent disks
    /// under the orientation convention above; two parallel lines of an
    /// Apollonian strip also give -1 (tangency at infinity).
    pub fn inversive_product(&self, other: &DiskSymbol) -> Rat {
        &self.xd * &other.xd + &self.yd * &other.yd
            - (&self.b * &other.b_co + &other.b * &self.b_co) / rat_i(2)
    }

    pub fn tangent(&self, other: &DiskSymbol) -> bool {
        self.inversive_product(other) == rat_i(-1)
    }

    /// Compact `"xd,yd/b"` form mirroring the fraction-like labels; only
    /// defined for nonzero curvature.
    pub fn to_compact(&self) -> Option<String> {
        if self.is_line() {
            None
        } else {
            Some(format!(
                "{},{}/{}",
                fmt_rat(&self.xd),
                fmt_rat(&self.yd),
                fmt_rat(&self.b)
            ))
        }
    }

    /// Parses the compact form; the co-curvature is recovered from the
    /// constraint.
    pub fn parse_compact(s: &str) -> Result<Self> {
        let (head, b) = s
            .rsplit_once('/')
            .ok_or_else(|| Error::Parse(format!("bad symbol `{s}`")))?;
        let (xd, yd) = head
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("bad symbol `{s}`")))?;
        let b = parse_rat(b)?;
        if b.is_zero() {
            return Err(Error::Parse("compact form cannot encode a line".into()));
        }
        let xd = parse_rat(xd)?;
        let yd = parse_rat(yd)?;
        let b_co = (&xd * &xd + &yd * &yd - rat_i(1)) / &b;
        Ok(DiskSymbol { b, b_co, xd, yd })
    }
}

impl fmt::Debug for DiskSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})/{} [co {}]",
            fmt_rat(&self.xd),
            fmt_rat(&self.yd),
            fmt_rat(&self.b),
            fmt_rat(&self.b_co)
        )
    }
}

impl PartialOrd for DiskSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DiskSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.b
            .cmp(&other.b)
            .then_with(|| self.xd.cmp(&other.xd))
            .then_with(|| self.yd.cmp(&other.yd))
            .then_with(|| self.b_co.cmp(&other.b_co))
    }
}

impl serde::Serialize for DiskSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DiskSymbol", 4)?;
        st.serialize_field("b", &fmt_rat(&self.b))?;
        st.serialize_field("b_co", &fmt_rat(&self.b_co))?;
        st.serialize_field("xd", &fmt_rat(&self.xd))?;
        st.serialize_field("yd", &fmt_rat(&self.yd))?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for DiskSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            b: String,
            b_co: String,
            xd: String,
            yd: String,
        }
        let raw = Raw::deserialize(d)?;
        let p = |s: &str| parse_rat(s).map_err(D::Error::custom);
        DiskSymbol::from_parts(p(&raw.b)?, p(&raw.b_co)?, p(&raw.xd)?, p(&raw.yd)?)
            .map_err(D::Error::custom)
    }
}

/// Exact Descartes curvature identity for four mutually tangent disks.
pub fn descartes_check(b1: &Rat, b2: &Rat, b3: &Rat, b4: &Rat) -> bool {
    let s = b1 + b2 + b3 + b4;
    &s * &s == rat_i(2) * (b1 * b1 + b2 * b2 + b3 * b3 + b4 * b4)
}

/// Four pairwise tangent disks satisfying the curvature identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescartesQuad {
    disks: [DiskSymbol; 4],
}

impl DescartesQuad {
    pub fn new(disks: [DiskSymbol; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in i + 1..4 {
                if !disks[i].tangent(&disks[j]) {
                    return Err(Error::InvalidQuad);
                }
            }
        }
        if !descartes_check(disks[0].b(), disks[1].b(), disks[2].b(), disks[3].b()) {
            return Err(Error::InvalidQuad);
        }
        Ok(DescartesQuad { disks })
    }

    pub fn disks(&self) -> &[DiskSymbol; 4] {
        &self.disks
    }
}

/// Reflects `d4` through the other three: the second solution of the
/// Descartes problem, componentwise `2(d1 + d2 + d3) - d4` on all four
/// coordinates.
pub fn descartes_complete(
    d1: &DiskSymbol,
    d2: &DiskSymbol,
    d3: &DiskSymbol,
    d4: &DiskSymbol,
) -> Result<DiskSymbol> {
    DescartesQuad::new([d1.clone(), d2.clone(), d3.clone(), d4.clone()])?;
    Ok(reflect_unchecked(d1, d2, d3, d4))
}

/// The same reflection without revalidating the quad. Used by the packing
/// generator, which maintains quad validity by construction.
pub(crate) fn reflect_unchecked(
    d1: &DiskSymbol,
    d2: &DiskSymbol,
    d3: &DiskSymbol,
    d4: &DiskSymbol,
) -> DiskSymbol {
    let two = rat_i(2);
    DiskSymbol {
        b: &two * (&d1.b + &d2.b + &d3.b) - &d4.b,
        b_co: &two * (&d1.b_co + &d2.b_co + &d3.b_co) - &d4.b_co,
        xd: &two * (&d1.xd + &d2.xd + &d3.xd) - &d4.xd,
        yd: &two * (&d1.yd + &d2.yd + &d3.yd) - &d4.yd,
    }
}

/// Right triangle attached to an ordered tangent pair:
/// `(b1*xd2 - b2*xd1, b1*yd2 - b2*yd1, b1 + b2)`, an exact Pythagorean
/// triple.
pub fn pythagorean_triple(d1: &DiskSymbol, d2: &DiskSymbol) -> Result<(Rat, Rat, Rat)> {
    if !d1.tangent(d2) {
        return Err(Error::NotTangent);
    }
    let a = &d1.b * &d2.xd - &d2.b * &d1.xd;
    let b = &d1.b * &d2.yd - &d2.b * &d1.yd;
    let c = &d1.b + &d2.b;
    Ok((a, b, c))
}

/// `(m^2 - n^2, 2mn, m^2 + n^2)`: the complex square of `m + ni` together
/// with its modulus.
pub fn euclid_param_square(m: i64, n: i64) -> (i64, i64, i64) {
    (m * m - n * n, 2 * m * n, m * m + n * n)
}
