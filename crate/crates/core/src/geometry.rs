//! Convex clipping in the exponent square, generic over the scalar field.

use std::cmp::Ordering;

use crate::constraint::{HalfPlane, Linear};
use crate::numeric::{Field, Rational};
use crate::point::Point;

/// Intersection of finitely many half-planes.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPiece<F> {
    pub bounds: Vec<HalfPlane<F>>,
}

impl<F: Field> ConvexPiece<F> {
    pub fn new(bounds: Vec<HalfPlane<F>>) -> Self {
        ConvexPiece { bounds }
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        self.bounds.iter().all(|h| h.contains(p))
    }

    /// Every bound holds with positive slack.
    pub fn contains_strictly(&self, p: &Point<F>) -> bool {
        self.bounds
            .iter()
            .all(|h| h.line.slack(p).sign() == Ordering::Greater)
    }
}

impl ConvexPiece<Rational> {
    pub fn to_field<F: Field>(&self) -> ConvexPiece<F> {
        ConvexPiece {
            bounds: self.bounds.iter().map(|h| h.to_field()).collect(),
        }
    }
}

/// How a polygon meets a convex piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Meet {
    Empty,
    /// Nonempty but of zero area.
    Degenerate,
    Proper,
}

/// Keep the part of `poly` where `line`'s slack is nonnegative.
pub fn clip<F: Field>(poly: &[Point<F>], line: &Linear<F>) -> Vec<Point<F>> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    if n == 0 {
        return out;
    }
    let slacks: Vec<F> = poly.iter().map(|p| line.slack(p)).collect();
    for i in 0..n {
        let j = (i + 1) % n;
        let (si, sj) = (slacks[i].sign(), slacks[j].sign());
        if si != Ordering::Less {
            out.push(poly[i].clone());
        }
        let crosses = (si == Ordering::Greater && sj == Ordering::Less)
            || (si == Ordering::Less && sj == Ordering::Greater);
        if crosses && n > 1 {
            let t = slacks[i].clone() / (slacks[i].clone() - slacks[j].clone());
            out.push(poly[i].lerp(&poly[j], &t));
        }
    }
    out
}

/// Twice the signed area.
pub fn area2<F: Field>(poly: &[Point<F>]) -> F {
    let n = poly.len();
    let mut acc = F::zero_f();
    for i in 0..n {
        let j = (i + 1) % n;
        acc = acc + poly[i].x.clone() * poly[j].y.clone() - poly[j].x.clone() * poly[i].y.clone();
    }
    acc
}

pub fn vertex_mean<F: Field>(poly: &[Point<F>]) -> Point<F> {
    let n = F::from_int(poly.len() as i64);
    let mut sx = F::zero_f();
    let mut sy = F::zero_f();
    for p in poly {
        sx = sx + p.x.clone();
        sy = sy + p.y.clone();
    }
    Point {
        x: sx / n.clone(),
        y: sy / n,
    }
}

/// Intersect a convex polygon with a piece. Returns the kind of meet and a
/// point of the intersection that respects strict bounds.
pub fn meet<F: Field>(poly: &[Point<F>], piece: &ConvexPiece<F>) -> (Meet, Option<Point<F>>) {
    let mut cur = poly.to_vec();
    for h in &piece.bounds {
        cur = clip(&cur, &h.line);
        if cur.is_empty() {
            return (Meet::Empty, None);
        }
    }
    let c = vertex_mean(&cur);
    if !piece.contains(&c) {
        return (Meet::Empty, None);
    }
    let kind = if area2(&cur).sign() == Ordering::Equal {
        Meet::Degenerate
    } else {
        Meet::Proper
    };
    (kind, Some(c))
}

/// Barycentric coordinates of `p` in the triangle `(a, b, c)`.
pub fn barycentric<F: Field>(
    p: &Point<F>,
    a: &Point<F>,
    b: &Point<F>,
    c: &Point<F>,
) -> Option<[F; 3]> {
    let det = (b.x.clone() - a.x.clone()) * (c.y.clone() - a.y.clone())
        - (c.x.clone() - a.x.clone()) * (b.y.clone() - a.y.clone());
    if det.sign() == Ordering::Equal {
        return None;
    }
    let l1 = ((p.x.clone() - a.x.clone()) * (c.y.clone() - a.y.clone())
        - (c.x.clone() - a.x.clone()) * (p.y.clone() - a.y.clone()))
        / det.clone();
    let l2 = ((b.x.clone() - a.x.clone()) * (p.y.clone() - a.y.clone())
        - (p.x.clone() - a.x.clone()) * (b.y.clone() - a.y.clone()))
        / det;
    let l0 = F::from_int(1) - l1.clone() - l2.clone();
    Some([l0, l1, l2])
}
