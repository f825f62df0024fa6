//! Interpolation closure with the Leray–Hopf segment.
//!
//! A Leray–Hopf solution lies in every space on the segment from
//! `L^∞L²` = (1/2, 0) to `L²L^{6/(3-2γ)}` = ((3-2γ)/6, 1/2). If it also lies
//! in the space at `pt`, it lies in every space on `[pt, b]` for `b` on that
//! segment, so `pt` inherits the criterion from any core point in the
//! triangle spanned by `pt` and the segment.

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::geometry::{barycentric, meet, ConvexPiece, Meet};
use crate::numeric::{int, rat, Field, Rational};
use crate::point::{ExponentPoint, Point};

/// Endpoints of the Leray–Hopf segment.
pub fn leray_hopf_segment(gamma: &Rational) -> [Point<Rational>; 2] {
    [
        Point::new(rat(1, 2), Rational::zero()),
        Point::new((int(3) - int(2) * gamma) / int(6), rat(1, 2)),
    ]
}

/// Exact closure of a finite union of convex pieces.
#[derive(Clone, Debug)]
pub struct ClosureModel {
    exact: Vec<ConvexPiece<Rational>>,
    float: Vec<ConvexPiece<f64>>,
    lh: [Point<Rational>; 2],
    lh_f: [Point<f64>; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureWitness {
    /// Point of the Leray–Hopf segment the segment runs toward.
    pub leray_hopf_point: ExponentPoint,
    /// Core point on `[pt, leray_hopf_point]`.
    pub core_point: ExponentPoint,
    /// Fraction of the way from `pt` to the Leray–Hopf point.
    #[serde(with = "crate::numeric::serde_rational")]
    pub theta: Rational,
}

impl ClosureModel {
    pub fn new(pieces: Vec<ConvexPiece<Rational>>, gamma: &Rational) -> Self {
        let lh = leray_hopf_segment(gamma);
        let lh_f = [lh[0].to_f64(), lh[1].to_f64()];
        let float = pieces.iter().map(|p| p.to_field()).collect();
        ClosureModel {
            exact: pieces,
            float,
            lh,
            lh_f,
        }
    }

    /// Closure of a single point, e.g. `L⁴L⁴` for the Lions-implicated set.
    pub fn singleton(p: &Point<Rational>, gamma: &Rational) -> Self {
        use crate::constraint::HalfPlane;
        let bounds = vec![
            HalfPlane::le(int(1), int(0), p.x.clone()),
            HalfPlane::le(int(-1), int(0), -p.x.clone()),
            HalfPlane::le(int(0), int(1), p.y.clone()),
            HalfPlane::le(int(0), int(-1), -p.y.clone()),
        ];
        Self::new(vec![ConvexPiece::new(bounds)], gamma)
    }

    pub fn pieces(&self) -> &[ConvexPiece<Rational>] {
        &self.exact
    }

    fn run<F: Field>(
        pieces: &[ConvexPiece<F>],
        lh: &[Point<F>; 2],
        p: &Point<F>,
    ) -> (Meet, Option<Point<F>>) {
        if pieces.iter().any(|c| c.contains_strictly(p)) {
            return (Meet::Proper, Some(p.clone()));
        }
        let tri = [p.clone(), lh[0].clone(), lh[1].clone()];
        let mut best = (Meet::Empty, None);
        for piece in pieces {
            let (m, c) = meet(&tri, piece);
            match m {
                Meet::Proper => return (m, c),
                Meet::Degenerate if best.0 == Meet::Empty => best = (m, c),
                _ => {}
            }
        }
        best
    }

    pub fn classify_exact(&self, p: &Point<Rational>) -> Meet {
        Self::run(&self.exact, &self.lh, p).0
    }

    pub fn classify_f64(&self, p: &Point<f64>) -> Meet {
        Self::run(&self.float, &self.lh_f, p).0
    }

    pub fn contains(&self, pt: &ExponentPoint) -> bool {
        match pt {
            ExponentPoint::Exact { .. } => self.classify_exact(&pt.to_exact()) != Meet::Empty,
            ExponentPoint::Float { .. } => self.classify_f64(&pt.to_f64()) != Meet::Empty,
        }
    }

    /// Whether the point lies in a core piece itself.
    pub fn in_core(&self, p: &Point<Rational>) -> bool {
        self.exact.iter().any(|c| c.contains(p))
    }

    /// An exact interpolation witness for a closure point outside the core.
    pub fn witness(&self, p: &Point<Rational>) -> Option<ClosureWitness> {
        if self.in_core(p) {
            return None;
        }
        let tri = [p.clone(), self.lh[0].clone(), self.lh[1].clone()];
        for piece in &self.exact {
            let (m, c) = meet(&tri, piece);
            if m == Meet::Empty {
                continue;
            }
            let c = c?;
            let l = barycentric(&c, &tri[0], &tri[1], &tri[2]);
            let (theta, b) = match l {
                Some([_, l1, l2]) => {
                    let theta = &l1 + &l2;
                    let b = Point::new(
                        (&l1 * &self.lh[0].x + &l2 * &self.lh[1].x) / &theta,
                        (&l1 * &self.lh[0].y + &l2 * &self.lh[1].y) / &theta,
                    );
                    (theta, b)
                }
                // Degenerate triangle: the point sits on the segment's line.
                None => return None,
            };
            return Some(ClosureWitness {
                leray_hopf_point: b.into(),
                core_point: c.into(),
                theta,
            });
        }
        None
    }
}

/// Search resolution for the closure of an arbitrary predicate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureLattice {
    pub n_b: usize,
    pub n_theta: usize,
    pub tol: f64,
}

impl Default for ClosureLattice {
    fn default() -> Self {
        ClosureLattice {
            n_b: 400,
            n_theta: 400,
            tol: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeWitness {
    pub leray_hopf_point: ExponentPoint,
    pub core_point: ExponentPoint,
    /// Smallest θ found, refined by bisection.
    pub theta: f64,
}

/// Look for a core point on `[pt, b]` over a lattice of `b` on the segment
/// and `θ` along it; refine the first hit by bisection in θ.
pub fn closure_search<M>(
    membership: &M,
    gamma: &Rational,
    lattice: &ClosureLattice,
    pt: &ExponentPoint,
) -> Option<LatticeWitness>
where
    M: Fn(&ExponentPoint) -> bool + ?Sized,
{
    let p = pt.to_f64();
    if membership(pt) {
        return Some(LatticeWitness {
            leray_hopf_point: pt.clone(),
            core_point: pt.clone(),
            theta: 0.0,
        });
    }
    let [a, b] = leray_hopf_segment(gamma);
    let (a, b) = (a.to_f64(), b.to_f64());
    let hit = |q: &Point<f64>| membership(&ExponentPoint::float(q.x, q.y));
    for i in 0..=lattice.n_b {
        let lh = a.lerp(&b, &(i as f64 / lattice.n_b as f64));
        for j in 1..=lattice.n_theta {
            let t = j as f64 / lattice.n_theta as f64;
            let q = p.lerp(&lh, &t);
            if !hit(&q) {
                continue;
            }
            let (mut lo, mut hi) = ((j - 1) as f64 / lattice.n_theta as f64, t);
            while hi - lo > lattice.tol {
                let mid = 0.5 * (lo + hi);
                if hit(&p.lerp(&lh, &mid)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let q = p.lerp(&lh, &hi);
            return Some(LatticeWitness {
                leray_hopf_point: ExponentPoint::float(lh.x, lh.y),
                core_point: ExponentPoint::float(q.x, q.y),
                theta: hi,
            });
        }
    }
    None
}

/// The closure of `membership` as a predicate.
pub fn interpolation_closure<'a, M>(
    membership: M,
    gamma: &Rational,
    lattice: ClosureLattice,
) -> impl Fn(&ExponentPoint) -> bool + 'a
where
    M: Fn(&ExponentPoint) -> bool + 'a,
{
    let gamma = gamma.clone();
    move |pt| closure_search(&membership, &gamma, &lattice, pt).is_some()
}

/// The set implied by `L⁴L⁴` together with the Leray–Hopf memberships.
pub fn lions_implicated() -> ClosureModel {
    ClosureModel::singleton(&Point::new(rat(1, 4), rat(1, 4)), &int(1))
}
