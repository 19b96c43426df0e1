//! Sectors and polyline geodesics in `(ℝⁿ, d∞)`.
//!
//! The sector `S_i^ε(p)` holds the points `q` with `d∞(p, q) = ε(q_i − p_i)`.
//! A path is a `d∞` geodesic exactly when every later point lies in the same
//! sector of every earlier point. For a polyline that reduces to one
//! coordinate moving at full slope with one sign on every segment.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::embedding::EmbedError;
use crate::rational::{lerp, linf_norm, sub_vec, add_vec, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i8) -> Sign {
        if v >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn apply(self, x: &Rational) -> Rational {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => -x,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Sector `S_i^ε`; `coordinate` is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SectorIndex {
    pub coordinate: usize,
    pub sign: Sign,
}

impl SectorIndex {
    pub fn new(coordinate: usize, sign: Sign) -> Self {
        SectorIndex { coordinate, sign }
    }
}

impl fmt::Display for SectorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.coordinate, self.sign)
    }
}

/// `q ∈ S_i^ε(p)`.
pub fn in_sector(p: &[Rational], q: &[Rational], s: SectorIndex) -> Result<bool, EmbedError> {
    if p.len() != q.len() {
        return Err(EmbedError::VectorLengthMismatch(p.len(), q.len()));
    }
    if s.coordinate >= p.len() {
        return Err(EmbedError::VectorLengthMismatch(s.coordinate + 1, p.len()));
    }
    let diff = sub_vec(q, p);
    Ok(s.sign.apply(&diff[s.coordinate]) == linf_norm(&diff))
}

/// A piecewise-affine path in `(ℝⁿ, d∞)`, parametrized by `d∞` arclength.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicPolyline {
    breakpoints: Vec<Vec<Rational>>,
}

impl GeodesicPolyline {
    /// At least two breakpoints of one common positive dimension, with
    /// consecutive breakpoints distinct.
    pub fn new(breakpoints: Vec<Vec<Rational>>) -> Result<Self, EmbedError> {
        if breakpoints.len() < 2 {
            return Err(EmbedError::InvalidPolyline);
        }
        let dim = breakpoints[0].len();
        if dim == 0 {
            return Err(EmbedError::InvalidPolyline);
        }
        if let Some(bad) = breakpoints.iter().find(|b| b.len() != dim) {
            return Err(EmbedError::VectorLengthMismatch(dim, bad.len()));
        }
        if breakpoints.windows(2).any(|w| w[0] == w[1]) {
            return Err(EmbedError::InvalidPolyline);
        }
        Ok(GeodesicPolyline { breakpoints })
    }

    pub fn breakpoints(&self) -> &[Vec<Rational>] {
        &self.breakpoints
    }

    pub fn dimension(&self) -> usize {
        self.breakpoints[0].len()
    }

    pub fn segment_lengths(&self) -> Vec<Rational> {
        self.breakpoints
            .windows(2)
            .map(|w| linf_norm(&sub_vec(&w[1], &w[0])))
            .collect()
    }

    pub fn arclength(&self) -> Rational {
        self.segment_lengths()
            .into_iter()
            .fold(Rational::zero(), |acc, l| acc + l)
    }

    /// `α(t)` for `0 ≤ t ≤ arclength`, `None` outside.
    pub fn point_at(&self, t: &Rational) -> Option<Vec<Rational>> {
        if t.is_negative() {
            return None;
        }
        let mut start = Rational::zero();
        for (w, len) in self.breakpoints.windows(2).zip(self.segment_lengths()) {
            let end = &start + &len;
            if *t <= end {
                return Some(lerp(&w[0], &w[1], &((t - &start) / len)));
            }
            start = end;
        }
        None
    }
}

/// Returns the least sector `(i, ε)` (coordinates ascending, `+` first) in
/// which every segment moves at full slope, or `None` if the polyline is not
/// a `d∞` geodesic.
///
/// When the endpoint lies in several sectors of the start, any one of them
/// that works along the whole path is accepted.
pub fn is_geodesic_polyline(poly: &GeodesicPolyline) -> Option<SectorIndex> {
    let segments: Vec<(Vec<Rational>, Rational)> = poly
        .breakpoints
        .windows(2)
        .map(|w| {
            let diff = sub_vec(&w[1], &w[0]);
            let len = linf_norm(&diff);
            (diff, len)
        })
        .collect();
    (0..poly.dimension())
        .flat_map(|i| [SectorIndex::new(i, Sign::Plus), SectorIndex::new(i, Sign::Minus)])
        .find(|s| {
            segments
                .iter()
                .all(|(diff, len)| s.sign.apply(&diff[s.coordinate]) == *len)
        })
}

/// Cuts `α` on `(c, d)` and glues the tail back at `α(c)`:
/// `α̃(t) = α(t)` on `[0, c]`, `α̃(t) = α(t − c + d) − α(d) + α(c)` after.
pub fn shorten_geodesic(
    poly: &GeodesicPolyline,
    c: &Rational,
    d: &Rational,
) -> Result<GeodesicPolyline, EmbedError> {
    if is_geodesic_polyline(poly).is_none() {
        return Err(EmbedError::NotGeodesic);
    }
    let total = poly.arclength();
    if !(c.is_positive() && c < d && *d < total) {
        return Err(EmbedError::CutOutOfRange);
    }
    let at_c = poly.point_at(c).expect("c within range");
    let at_d = poly.point_at(d).expect("d within range");
    let shift = sub_vec(&at_c, &at_d);

    let mut cumulative = Rational::zero();
    let mut head = vec![poly.breakpoints[0].clone()];
    let mut tail = Vec::new();
    for (point, len) in poly.breakpoints[1..].iter().zip(poly.segment_lengths()) {
        cumulative += len;
        if cumulative < *c {
            head.push(point.clone());
        } else if cumulative > *d {
            tail.push(add_vec(point, &shift));
        }
    }
    head.push(at_c);
    head.extend(tail);
    GeodesicPolyline::new(head)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn poly(points: &[&[Rational]]) -> GeodesicPolyline {
        GeodesicPolyline::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn sector_membership() {
        let o = [int(0), int(0)];
        let q = [int(3), int(1)];
        assert!(in_sector(&o, &q, SectorIndex::new(0, Sign::Plus)).unwrap());
        assert!(!in_sector(&o, &q, SectorIndex::new(1, Sign::Plus)).unwrap());
        for i in 0..2 {
            for s in [Sign::Plus, Sign::Minus] {
                assert!(in_sector(&o, &o, SectorIndex::new(i, s)).unwrap());
            }
        }
        assert!(in_sector(&o, &[int(1)], SectorIndex::new(0, Sign::Plus)).is_err());
    }

    #[test]
    fn geodesic_witnesses() {
        let a = poly(&[&[int(0), int(0)], &[int(1), int(1)], &[int(2), ratio(1, 2)]]);
        assert_eq!(is_geodesic_polyline(&a), Some(SectorIndex::new(0, Sign::Plus)));
        // Coordinate 0 reverses but coordinate 1 climbs at full slope throughout.
        let b = poly(&[&[int(0), int(0)], &[int(1), int(1)], &[int(0), int(2)]]);
        assert_eq!(is_geodesic_polyline(&b), Some(SectorIndex::new(1, Sign::Plus)));
        let c = poly(&[&[int(0), int(0)], &[int(2), int(1)], &[int(0), int(2)]]);
        assert_eq!(is_geodesic_polyline(&c), None);
        let single = poly(&[&[int(0), int(0)], &[int(-1), ratio(1, 3)]]);
        assert_eq!(is_geodesic_polyline(&single), Some(SectorIndex::new(0, Sign::Minus)));
    }

    #[test]
    fn invalid_polylines() {
        assert!(GeodesicPolyline::new(vec![vec![int(0)]]).is_err());
        assert!(GeodesicPolyline::new(vec![vec![int(0)], vec![int(0)]]).is_err());
        assert!(GeodesicPolyline::new(vec![vec![int(0)], vec![int(0), int(1)]]).is_err());
    }

    #[test]
    fn shortening_example() {
        let a = poly(&[&[int(0), int(0)], &[int(1), int(1)], &[int(2), ratio(1, 2)]]);
        let s = shorten_geodesic(&a, &ratio(1, 2), &ratio(3, 2)).unwrap();
        assert_eq!(
            s.breakpoints(),
            &[
                vec![int(0), int(0)],
                vec![ratio(1, 2), ratio(1, 2)],
                vec![int(1), ratio(1, 4)]
            ]
        );
        assert_eq!(s.arclength(), int(1));
        assert_eq!(is_geodesic_polyline(&s), Some(SectorIndex::new(0, Sign::Plus)));
    }

    #[test]
    fn shortening_a_straight_segment() {
        let a = poly(&[&[int(0), int(0)], &[int(4), int(2)]]);
        let s = shorten_geodesic(&a, &int(1), &ratio(5, 4)).unwrap();
        // The cut point stays as a (collinear) breakpoint.
        assert_eq!(
            s.breakpoints(),
            &[
                vec![int(0), int(0)],
                vec![int(1), ratio(1, 2)],
                vec![ratio(15, 4), ratio(15, 8)]
            ]
        );
        assert_eq!(s.arclength(), ratio(15, 4));
    }

    #[test]
    fn tiny_head_keeps_only_translated_tail() {
        let a = poly(&[&[int(0), int(0)], &[int(1), int(1)], &[int(2), int(0)]]);
        let c = ratio(1, 1000);
        let s = shorten_geodesic(&a, &c, &ratio(3, 2)).unwrap();
        assert_eq!(s.breakpoints()[1], vec![c.clone(), c.clone()]);
        assert_eq!(s.arclength(), int(2) - ratio(3, 2) + c);
    }

    #[test]
    fn shortening_errors() {
        let a = poly(&[&[int(0), int(0)], &[int(2), int(1)], &[int(0), int(2)]]);
        assert_eq!(
            shorten_geodesic(&a, &int(1), &int(2)).unwrap_err(),
            EmbedError::NotGeodesic
        );
        let b = poly(&[&[int(0)], &[int(3)]]);
        for (c, d) in [(int(0), int(1)), (int(2), int(1)), (int(1), int(3)), (int(1), int(1))] {
            assert_eq!(
                shorten_geodesic(&b, &c, &d).unwrap_err(),
                EmbedError::CutOutOfRange
            );
        }
    }
}
