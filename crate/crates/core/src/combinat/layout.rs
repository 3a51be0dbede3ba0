//! Integer drawing of a partition and exact segment intersection counting.

/// A point of the drawing. Coordinates are small integers, so products in the
/// orientation test fit comfortably in `i128`.
pub type Point = (i64, i64);

/// A block drawn as a polyline from the baseline up and (for pairs) back down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyline {
    pub points: Vec<Point>,
}

impl Polyline {
    /// Two legs at `xa`, `xb` rising to `h`, joined by a horizontal.
    pub fn arch(xa: i64, xb: i64, h: i64) -> Self {
        Polyline {
            points: vec![(xa, 0), (xa, h), (xb, h), (xb, 0)],
        }
    }

    pub fn line(x: i64, top: i64) -> Self {
        Polyline {
            points: vec![(x, 0), (x, top)],
        }
    }

    fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|s| (s[0], s[1]))
    }
}

fn orient(a: Point, b: Point, c: Point) -> i128 {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    let (bx, by) = (b.0 as i128, b.1 as i128);
    let (cx, cy) = (c.0 as i128, c.1 as i128);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// Whether two segments cross at a single interior point.
///
/// Panics if the segments touch in any other way (shared endpoint, an
/// endpoint on the other segment, collinear overlap): the drawing rules make
/// that impossible, so it signals a layout bug.
fn proper_crossing(s: (Point, Point), t: (Point, Point)) -> bool {
    let (a, b) = s;
    let (c, d) = t;
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let touching = on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d);
    assert!(
        !touching,
        "degenerate drawing: segments {s:?} and {t:?} touch"
    );
    o1.signum() * o2.signum() < 0 && o3.signum() * o4.signum() < 0
}

/// Number of intersection points between two polylines of distinct blocks.
pub fn intersections(p: &Polyline, r: &Polyline) -> usize {
    let mut n = 0;
    for s in p.segments() {
        for t in r.segments() {
            if proper_crossing(s, t) {
                n += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arch_and_line() {
        // line at x=1 under an arch spanning 0..2 at height 1, rising to 3
        assert_eq!(intersections(&Polyline::arch(0, 2, 1), &Polyline::line(1, 3)), 1);
        // line lower than the horizontal
        assert_eq!(intersections(&Polyline::arch(0, 2, 2), &Polyline::line(1, 1)), 0);
        // two interleaved arches: the taller one's inner leg crosses once
        assert_eq!(intersections(&Polyline::arch(2, 5, 1), &Polyline::arch(0, 4, 2)), 1);
        // nested arch under a spanning one: no crossing when lower
        assert_eq!(intersections(&Polyline::arch(0, 5, 2), &Polyline::arch(1, 3, 1)), 0);
        // nested arch reaching above: both legs cross
        assert_eq!(intersections(&Polyline::arch(0, 5, 1), &Polyline::arch(1, 3, 2)), 2);
    }

    #[test]
    #[should_panic(expected = "degenerate")]
    fn shared_endpoint_panics() {
        intersections(&Polyline::line(1, 3), &Polyline::arch(1, 2, 1));
    }
}
