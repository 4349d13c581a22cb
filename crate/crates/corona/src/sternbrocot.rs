//! Generalized Stern-Brocot spinor arrays and coprime index-set
//! enumeration.
//!
//! Rows grow by inserting neighbor sums: row `n+1` keeps row `n` at even
//! positions and inserts `R[i] + R[i+1]` between consecutive entries.
//! Starting from `[0,1]` and `[1,0]` this is the classical Stern-Brocot
//! array; any other endpoint pair is its image under the matrix
//! `M = [u|v]`. Enumerators stream coprime index pairs in a fixed
//! diagonal order so truncated sums are reproducible.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::spinor::Spinor;

/// Memory guard: a row at depth `d` has `2^d + 1` entries.
pub const MAX_DEPTH: u32 = 20;

/// `gcd(|m|, |n|) == 1`; `(0, 0)` is excluded.
pub fn coprime(m: i64, n: i64) -> bool {
    m.unsigned_abs().gcd(&n.unsigned_abs()) == 1
}

/// Which coprime pairs a sum ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSet {
    /// All coprime integer pairs, every sign quadrant.
    AllCoprime,
    /// Coprime pairs with both components >= 1.
    Quadrant,
    /// Coprime pairs with both components >= 0, i.e. the quadrant plus
    /// the end pairs (1,0) and (0,1).
    QuadrantWithEnds,
}

/// Row of the generalized array at the given depth; endpoints are `u` and
/// `v` at every depth.
pub fn sb_row(u: &Spinor, v: &Spinor, depth: u32) -> Result<Vec<Spinor>> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthOverflow(depth, MAX_DEPTH));
    }
    let mut row = vec![u.clone(), v.clone()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(row.len() * 2 - 1);
        for i in 0..row.len() - 1 {
            next.push(row[i].clone());
            next.push(&row[i] + &row[i + 1]);
        }
        next.push(row[row.len() - 1].clone());
        row = next;
    }
    Ok(row)
}

/// Curvatures read off a row: `|entry|^2 - base_b` for each entry.
pub fn sb_row_curvatures(u: &Spinor, v: &Spinor, base_b: &Rat, depth: u32) -> Result<Vec<Rat>> {
    Ok(sb_row(u, v, depth)?
        .iter()
        .map(|s| s.norm_sq() - base_b)
        .collect())
}

/// Calls `f` for every pair of the index set on diagonal `s`, clipped to
/// `max(|m|, |n|) <= bound`, in the fixed enumeration order. Diagonal 1
/// holds the axis pairs; diagonal `s >= 2` holds interior pairs with
/// `m + n = s`, ascending in `m`, each followed by its sign variants for
/// `AllCoprime`.
pub(crate) fn for_each_in_diagonal(
    set: IndexSet,
    s: i64,
    bound: i64,
    f: &mut impl FnMut(i64, i64),
) {
    if s == 1 {
        match set {
            IndexSet::AllCoprime => {
                f(1, 0);
                f(-1, 0);
                f(0, 1);
                f(0, -1);
            }
            IndexSet::QuadrantWithEnds => {
                f(1, 0);
                f(0, 1);
            }
            IndexSet::Quadrant => {}
        }
        return;
    }
    let lo = 1.max(s - bound);
    let hi = (s - 1).min(bound);
    for m in lo..=hi {
        let n = s - m;
        if !coprime(m, n) {
            continue;
        }
        match set {
            IndexSet::AllCoprime => {
                f(m, n);
                f(-m, n);
                f(m, -n);
                f(-m, -n);
            }
            IndexSet::Quadrant | IndexSet::QuadrantWithEnds => f(m, n),
        }
    }
}

/// Streams every coprime pair of the set with `max(|m|, |n|) <= bound`,
/// exactly once, in diagonal order.
pub fn enumerate_coprime(set: IndexSet, bound: u32) -> impl Iterator<Item = (i64, i64)> {
    let bound = bound as i64;
    let mut buf: Vec<(i64, i64)> = Vec::new();
    let mut s: i64 = 0;
    std::iter::from_fn(move || loop {
        if let Some(p) = buf.pop() {
            return Some(p);
        }
        s += 1;
        if s > 2 * bound {
            return None;
        }
        for_each_in_diagonal(set, s, bound, &mut |m, n| buf.push((m, n)));
        buf.reverse();
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;

    fn sp(m: i64, n: i64) -> Spinor {
        Spinor::from_ints(m, n)
    }

    #[test]
    fn coprime_basics() {
        assert!(!coprime(4, 6));
        assert!(coprime(1, 0));
        assert!(coprime(35, 12));
        assert!(!coprime(0, 0));
        assert!(coprime(-3, 2));
    }

    #[test]
    fn row_depth_zero_is_endpoints() {
        assert_eq!(
            sb_row(&sp(1, 2), &sp(2, 2), 0).unwrap(),
            vec![sp(1, 2), sp(2, 2)]
        );
    }

    #[test]
    fn row_matches_array_listing() {
        let row = sb_row(&sp(1, 2), &sp(2, 2), 3).unwrap();
        let want = [
            (1, 2),
            (5, 8),
            (4, 6),
            (7, 10),
            (3, 4),
            (8, 10),
            (5, 6),
            (7, 8),
            (2, 2),
        ];
        assert_eq!(row, want.map(|(m, n)| sp(m, n)).to_vec());
    }

    #[test]
    fn universal_row() {
        let row = sb_row(&sp(0, 1), &sp(1, 0), 2).unwrap();
        assert_eq!(row, vec![sp(0, 1), sp(1, 2), sp(1, 1), sp(2, 1), sp(1, 0)]);
    }

    #[test]
    fn row_curvatures() {
        let curvs = sb_row_curvatures(&sp(1, 2), &sp(2, 2), &rat_i(2), 3).unwrap();
        let want: Vec<_> = [3, 87, 50, 147, 23, 162, 59, 111, 6]
            .iter()
            .map(|&c| rat_i(c))
            .collect();
        assert_eq!(curvs, want);

        let univ = sb_row_curvatures(&sp(0, 1), &sp(1, 0), &rat_i(-1), 1).unwrap();
        assert_eq!(univ, vec![rat_i(2), rat_i(3), rat_i(2)]);

        assert_eq!(
            sb_row_curvatures(&sp(1, 0), &sp(1, 0), &rat_i(-1), 0).unwrap()[0],
            rat_i(2)
        );
    }

    #[test]
    fn depth_guard() {
        assert_eq!(
            sb_row(&sp(0, 1), &sp(1, 0), MAX_DEPTH + 1),
            Err(Error::DepthOverflow(MAX_DEPTH + 1, MAX_DEPTH))
        );
    }

    #[test]
    fn universal_entries_are_reduced_and_ordered() {
        // Fractions m/n across a universal row are strictly increasing and
        // every entry is reduced: the classical array.
        let row = sb_row(&sp(0, 1), &sp(1, 0), 9).unwrap();
        for w in row.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            // a.m/a.n < b.m/b.n via cross multiplication.
            assert!((a.m() * b.n() - b.m() * a.n()) < rat_i(0));
        }
        for e in &row {
            let m = e.m().numer().try_into().unwrap();
            let n = e.n().numer().try_into().unwrap();
            assert!(coprime(m, n), "entry {e:?} not reduced");
        }
    }

    #[test]
    fn universal_row_reaches_small_coprime_pairs() {
        // A pair (m, n) enters the array no later than depth m + n, so
        // depth 14 certainly holds every coprime pair bounded by 7.
        let row = sb_row(&sp(0, 1), &sp(1, 0), 14).unwrap();
        let entries: std::collections::HashSet<(i64, i64)> = row
            .iter()
            .map(|e| {
                (
                    e.m().numer().try_into().unwrap(),
                    e.n().numer().try_into().unwrap(),
                )
            })
            .collect();
        for (m, n) in enumerate_coprime(IndexSet::QuadrantWithEnds, 7) {
            assert!(entries.contains(&(m, n)), "({m},{n}) missing");
        }
    }

    #[test]
    fn general_row_is_matrix_image_of_universal() {
        let (u, v) = (sp(3, -1), sp(2, 5));
        let univ = sb_row(&sp(1, 0), &sp(0, 1), 6).unwrap();
        let gen = sb_row(&u, &v, 6).unwrap();
        for (e, g) in univ.iter().zip(&gen) {
            let mapped = Spinor::new(e.m() * u.m() + e.n() * v.m(), e.m() * u.n() + e.n() * v.n());
            assert_eq!(&mapped, g);
        }
    }

    #[test]
    fn enumeration_order_and_contents() {
        let ends: Vec<_> = enumerate_coprime(IndexSet::QuadrantWithEnds, 2).collect();
        assert_eq!(ends, vec![(1, 0), (0, 1), (1, 1), (1, 2), (2, 1)]);

        let z: Vec<_> = enumerate_coprime(IndexSet::AllCoprime, 1).collect();
        assert_eq!(
            z,
            vec![
                (1, 0),
                (-1, 0),
                (0, 1),
                (0, -1),
                (1, 1),
                (-1, 1),
                (1, -1),
                (-1, -1)
            ]
        );

        let q: Vec<_> = enumerate_coprime(IndexSet::Quadrant, 3).collect();
        assert_eq!(
            q,
            vec![(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)]
        );
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        for bound in [1u32, 2, 3, 5, 10, 40, 150, 1000] {
            let b = bound as i64;
            let mut brute = 0u64;
            for m in -b..=b {
                for n in -b..=b {
                    if coprime(m, n) {
                        brute += 1;
                    }
                }
            }
            let mut seen = std::collections::HashSet::new();
            for p in enumerate_coprime(IndexSet::AllCoprime, bound) {
                assert!(seen.insert(p), "duplicate pair {p:?}");
                assert!(p.0.abs().max(p.1.abs()) <= b);
            }
            assert_eq!(seen.len() as u64, brute, "bound {bound}");
        }
    }
}
