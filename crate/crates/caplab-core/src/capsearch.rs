//! Exhaustive search for the largest cap in F_3^n, n <= 4.
//!
//! Points are encoded as base-3 integers in [0, 3^n). Three distinct points
//! a, b, c are collinear exactly when a + b + c = 0 componentwise mod 3, so
//! the cap test only needs, for every pair, a membership probe of the third
//! point -(a+b). The search is plain depth-first branch and bound over
//! points in increasing order, with the affine symmetry of the space used to
//! pin the first points of the search: every maximum cap is affinely
//! equivalent to one containing 0 and e_1, and (for caps of size >= 3) also
//! the point e_2 off that line.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CapError {
    #[error("dimension {0} exceeds the exhaustive-search capacity (n <= 4)")]
    Capacity(u32),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("duplicate point {0} in input")]
    DuplicatePoint(u32),
    #[error("point {0} out of range for dimension {1}")]
    PointOutOfRange(u32, u32),
}

/// A set of points in F_3^n with an optional no-progression certificate.
#[derive(Debug, Clone)]
pub struct CapSet {
    pub n: u32,
    /// Base-3 encoded points, strictly increasing.
    pub points: Vec<u32>,
    pub certified: bool,
}

impl CapSet {
    /// Decode a point into its coordinate vector.
    pub fn decode(n: u32, mut p: u32) -> Vec<u8> {
        let mut v = Vec::with_capacity(n as usize);
        for _ in 0..n {
            v.push((p % 3) as u8);
            p /= 3;
        }
        v
    }
}

fn pow3(n: u32) -> u32 {
    3u32.pow(n)
}

/// Componentwise -(a+b) mod 3 on base-3 encodings.
fn third_point(n: u32, a: u32, b: u32) -> u32 {
    let mut out = 0u32;
    let mut mul = 1u32;
    let (mut x, mut y) = (a, b);
    for _ in 0..n {
        let d = (x % 3 + y % 3) % 3;
        out += ((3 - d) % 3) * mul;
        mul *= 3;
        x /= 3;
        y /= 3;
    }
    out
}

fn validate(points: &[u32], n: u32) -> Result<(), CapError> {
    if n == 0 {
        return Err(CapError::ZeroDimension);
    }
    let size = pow3(n);
    let mut seen = vec![false; size as usize];
    for &p in points {
        if p >= size {
            return Err(CapError::PointOutOfRange(p, n));
        }
        if seen[p as usize] {
            return Err(CapError::DuplicatePoint(p));
        }
        seen[p as usize] = true;
    }
    Ok(())
}

/// True iff no three distinct points of the set are collinear.
///
/// Pair-closure check: for each pair, look up the unique completing point.
pub fn is_cap(points: &[u32], n: u32) -> Result<bool, CapError> {
    validate(points, n)?;
    let size = pow3(n) as usize;
    let mut member = vec![false; size];
    for &p in points {
        member[p as usize] = true;
    }
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            // For distinct a, b the completing point differs from both.
            if member[third_point(n, a, b) as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Reference implementation scanning all triples; used to cross-check the
/// pair-closure test.
pub fn is_cap_triple_scan(points: &[u32], n: u32) -> Result<bool, CapError> {
    validate(points, n)?;
    for (i, &a) in points.iter().enumerate() {
        for (j, &b) in points.iter().enumerate().skip(i + 1) {
            for &c in &points[j + 1..] {
                let mut x = a;
                let mut y = b;
                let mut z = c;
                let mut zero = true;
                for _ in 0..n {
                    if (x % 3 + y % 3 + z % 3) % 3 != 0 {
                        zero = false;
                        break;
                    }
                    x /= 3;
                    y /= 3;
                    z /= 3;
                }
                if zero {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

struct Search {
    size: u32,
    third: Vec<u32>,
    best: Vec<u32>,
}

impl Search {
    fn forbid_mask(&self, stack: &[u32], p: u32) -> u128 {
        let mut m = 0u128;
        for &a in stack {
            m |= 1u128 << self.third[(a * self.size + p) as usize];
        }
        m
    }

    fn dfs(&mut self, stack: &mut Vec<u32>, forbidden: u128, from: u32) {
        if stack.len() > self.best.len() {
            self.best = stack.clone();
        }
        let full = (1u128 << self.size) - 1;
        for p in from..self.size {
            // Even taking every remaining allowed point cannot beat the
            // incumbent: prune. The count only shrinks as p grows, so stop.
            let tail = full & !((1u128 << p) - 1);
            let remaining = (tail & !forbidden).count_ones() as usize;
            if stack.len() + remaining <= self.best.len() {
                return;
            }
            if (forbidden >> p) & 1 == 1 {
                continue;
            }
            let add = self.forbid_mask(stack, p);
            stack.push(p);
            self.dfs(stack, forbidden | add | (1u128 << p), p + 1);
            stack.pop();
        }
    }
}

/// Maximum cap size and a witness, by exhaustive branch and bound.
pub fn max_cap(n: u32) -> Result<(usize, CapSet), CapError> {
    if n == 0 {
        return Err(CapError::ZeroDimension);
    }
    if n > 4 {
        return Err(CapError::Capacity(n));
    }
    let size = pow3(n);
    let mut third = vec![0u32; (size * size) as usize];
    for a in 0..size {
        for b in 0..size {
            third[(a * size + b) as usize] = third_point(n, a, b);
        }
    }
    let mut search = Search {
        size,
        third,
        best: Vec::new(),
    };
    // Every cap of size >= 2 is affinely equivalent to one containing
    // {0, 1}; for size >= 3 also the off-line point 3 (n >= 2). The search
    // therefore starts from that pinned prefix.
    let mut stack = vec![0u32, 1u32];
    let mut forbidden = 1u128 | (1u128 << 1) | (1u128 << search.third[1]);
    if n >= 2 {
        let add = search.forbid_mask(&stack, 3);
        stack.push(3);
        forbidden |= add | (1u128 << 3);
        search.best = stack.clone();
        search.dfs(&mut stack, forbidden, 4);
    } else {
        search.best = stack.clone();
        search.dfs(&mut stack, forbidden, 2);
    }
    let points = search.best;
    let certified = is_cap(&points, n)?;
    let len = points.len();
    Ok((
        len,
        CapSet {
            n,
            points,
            certified,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tiny_sets_are_caps() {
        assert!(is_cap(&[0], 3).unwrap());
        assert!(is_cap(&[5, 17], 3).unwrap());
        assert!(is_cap(&[], 2).unwrap());
    }

    #[test]
    fn full_line_is_not_a_cap() {
        assert!(!is_cap(&[0, 1, 2], 1).unwrap());
    }

    #[test]
    fn duplicate_points_rejected() {
        assert_eq!(is_cap(&[1, 1], 2), Err(CapError::DuplicatePoint(1)));
    }

    #[test]
    fn out_of_range_rejected() {
        assert_eq!(is_cap(&[9], 2), Err(CapError::PointOutOfRange(9, 2)));
    }

    #[test]
    fn third_point_completes_lines() {
        // (1,0) + (0,1) + (2,2) = 0 componentwise.
        assert_eq!(third_point(2, 1, 3), 8);
        // third(a, a) = a (the degenerate diagonal).
        for a in 0..9 {
            assert_eq!(third_point(2, a, a), a);
        }
    }

    #[test]
    fn pair_check_agrees_with_triple_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4u32);
            let size = 3u32.pow(n);
            let k = rng.gen_range(0..=size.min(30)) as usize;
            let mut pts: Vec<u32> = (0..size).collect();
            pts.shuffle(&mut rng);
            pts.truncate(k);
            pts.sort_unstable();
            assert_eq!(
                is_cap(&pts, n).unwrap(),
                is_cap_triple_scan(&pts, n).unwrap()
            );
        }
    }

    #[test]
    fn known_maximum_caps_low_dimensions() {
        let (c1, w1) = max_cap(1).unwrap();
        assert_eq!(c1, 2);
        assert!(w1.certified);
        let (c2, w2) = max_cap(2).unwrap();
        assert_eq!(c2, 4);
        assert!(w2.certified);
        let (c3, w3) = max_cap(3).unwrap();
        assert_eq!(c3, 9);
        assert!(w3.certified);
        assert!(is_cap_triple_scan(&w3.points, 3).unwrap());
    }

    #[test]
    fn maximum_cap_dimension_four() {
        let (c4, w4) = max_cap(4).unwrap();
        assert_eq!(c4, 20);
        assert!(w4.certified);
        assert!(is_cap_triple_scan(&w4.points, 4).unwrap());
    }

    #[test]
    fn capacity_and_dimension_errors() {
        assert_eq!(max_cap(5).unwrap_err(), CapError::Capacity(5));
        assert_eq!(max_cap(0).unwrap_err(), CapError::ZeroDimension);
    }

    #[test]
    fn monotone_growth() {
        let sizes: Vec<usize> = (1..=4).map(|n| max_cap(n).unwrap().0).collect();
        for w in sizes.windows(2) {
            assert!(w[0] <= w[1]);
            assert!(w[1] <= 3 * w[0]);
        }
    }
}
