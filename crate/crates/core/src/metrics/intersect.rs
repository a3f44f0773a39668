//! Closed triangle–triangle and segment–segment intersection predicates.
//!
//! Two closed triangles meet iff an edge of one meets the other triangle,
//! so the 3D test reduces to six segment–triangle tests built on orientation
//! determinants. Determinants within `eps · L³` of zero (`L` the longest
//! edge involved, `eps` from [`Scalar::orientation_eps`]) count as zero;
//! touching configurations are reported as intersecting. Zero-area
//! triangles are treated as the union of their edges.

use crate::scalar::Scalar;

pub type Point3<T> = [T; 3];
pub type Triangle<T> = [Point3<T>; 3];
pub type Point2<T> = [T; 2];

#[inline]
fn sub<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> Point3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn cross<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> Point3<T> {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
fn dot<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Signed volume (×6) of the tetrahedron `abcd`; positive when `d` lies on
/// the side of plane `abc` that its normal `(b-a)×(c-a)` points to.
#[inline]
pub fn orient3d<T: Scalar>(a: &Point3<T>, b: &Point3<T>, c: &Point3<T>, d: &Point3<T>) -> T {
    dot(&cross(&sub(b, a), &sub(c, a)), &sub(d, a))
}

/// Twice the signed area of triangle `abc`.
#[inline]
pub fn orient2d<T: Scalar>(a: &Point2<T>, b: &Point2<T>, c: &Point2<T>) -> T {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

#[inline]
fn sign<T: Scalar>(x: T, tol: T) -> i8 {
    if x > tol {
        1
    } else if x < -tol {
        -1
    } else {
        0
    }
}

fn len<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> T {
    let d = sub(a, b);
    dot(&d, &d).sqrt()
}

fn longest_edge<T: Scalar>(t: &Triangle<T>) -> T {
    len(&t[0], &t[1]).max(len(&t[1], &t[2])).max(len(&t[2], &t[0]))
}

struct Tol<T> {
    len: T,
    area: T,
    volume: T,
}

impl<T: Scalar> Tol<T> {
    fn new(scale: T) -> Self {
        let eps = T::orientation_eps();
        let s = if scale > T::zero() { scale } else { T::one() };
        Self { len: eps * s, area: eps * s * s, volume: eps * s * s * s }
    }
}

fn boxes_disjoint<T: Scalar>(a: &Triangle<T>, b: &Triangle<T>) -> bool {
    (0..3).any(|d| {
        let amin = a[0][d].min(a[1][d]).min(a[2][d]);
        let amax = a[0][d].max(a[1][d]).max(a[2][d]);
        let bmin = b[0][d].min(b[1][d]).min(b[2][d]);
        let bmax = b[0][d].max(b[1][d]).max(b[2][d]);
        amax < bmin || bmax < amin
    })
}

fn is_degenerate<T: Scalar>(t: &Triangle<T>, tol: &Tol<T>) -> bool {
    let n = cross(&sub(&t[1], &t[0]), &sub(&t[2], &t[0]));
    dot(&n, &n).sqrt() <= tol.area
}

/// True iff the closed triangles `a` and `b` share at least one point.
pub fn tri_tri_intersect<T: Scalar>(a: &Triangle<T>, b: &Triangle<T>) -> bool {
    if boxes_disjoint(a, b) {
        return false;
    }
    let tol = Tol::new(longest_edge(a).max(longest_edge(b)));
    let edges = |t: &Triangle<T>| [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])];
    match (is_degenerate(a, &tol), is_degenerate(b, &tol)) {
        (false, false) => {
            edges(a).iter().any(|(p, q)| segment_triangle(p, q, b, &tol))
                || edges(b).iter().any(|(p, q)| segment_triangle(p, q, a, &tol))
        }
        (true, false) => edges(a).iter().any(|(p, q)| segment_triangle(p, q, b, &tol)),
        (false, true) => edges(b).iter().any(|(p, q)| segment_triangle(p, q, a, &tol)),
        (true, true) => edges(a)
            .iter()
            .any(|(p, q)| edges(b).iter().any(|(r, s)| segments_meet_3d(p, q, r, s, &tol))),
    }
}

/// Closed segment `pq` against a non-degenerate closed triangle.
fn segment_triangle<T: Scalar>(p: &Point3<T>, q: &Point3<T>, t: &Triangle<T>, tol: &Tol<T>) -> bool {
    let op = sign(orient3d(&t[0], &t[1], &t[2], p), tol.volume);
    let oq = sign(orient3d(&t[0], &t[1], &t[2], q), tol.volume);
    if op == oq && op != 0 {
        return false;
    }
    if op == 0 && oq == 0 {
        return coplanar_segment_triangle(p, q, t, tol);
    }
    let s = [
        sign(orient3d(p, q, &t[0], &t[1]), tol.volume),
        sign(orient3d(p, q, &t[1], &t[2]), tol.volume),
        sign(orient3d(p, q, &t[2], &t[0]), tol.volume),
    ];
    !(s.contains(&1) && s.contains(&-1))
}

fn drop_axis<T: Scalar>(t: &Triangle<T>) -> usize {
    let n = cross(&sub(&t[1], &t[0]), &sub(&t[2], &t[0]));
    let (ax, ay, az) = (n[0].abs(), n[1].abs(), n[2].abs());
    if ax >= ay && ax >= az {
        0
    } else if ay >= az {
        1
    } else {
        2
    }
}

fn project<T: Scalar>(p: &Point3<T>, drop: usize) -> Point2<T> {
    match drop {
        0 => [p[1], p[2]],
        1 => [p[2], p[0]],
        _ => [p[0], p[1]],
    }
}

fn coplanar_segment_triangle<T: Scalar>(p: &Point3<T>, q: &Point3<T>, t: &Triangle<T>, tol: &Tol<T>) -> bool {
    let drop = drop_axis(t);
    let (p, q) = (project(p, drop), project(q, drop));
    let t = [project(&t[0], drop), project(&t[1], drop), project(&t[2], drop)];
    point_in_triangle_2d(&p, &t, tol.area)
        || point_in_triangle_2d(&q, &t, tol.area)
        || (0..3).any(|k| segments_meet_2d(&p, &q, &t[k], &t[(k + 1) % 3], tol.area))
}

fn point_in_triangle_2d<T: Scalar>(x: &Point2<T>, t: &[Point2<T>; 3], tol: T) -> bool {
    let s = [
        sign(orient2d(&t[0], &t[1], x), tol),
        sign(orient2d(&t[1], &t[2], x), tol),
        sign(orient2d(&t[2], &t[0], x), tol),
    ];
    !(s.contains(&1) && s.contains(&-1))
}

fn within_box<T: Scalar>(p: &Point2<T>, q: &Point2<T>, r: &Point2<T>) -> bool {
    r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
}

/// Closed segments `pq` and `rs` share a point (collinear overlap included).
fn segments_meet_2d<T: Scalar>(p: &Point2<T>, q: &Point2<T>, r: &Point2<T>, s: &Point2<T>, tol: T) -> bool {
    let o1 = sign(orient2d(p, q, r), tol);
    let o2 = sign(orient2d(p, q, s), tol);
    let o3 = sign(orient2d(r, s, p), tol);
    let o4 = sign(orient2d(r, s, q), tol);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within_box(p, q, r))
        || (o2 == 0 && within_box(p, q, s))
        || (o3 == 0 && within_box(r, s, p))
        || (o4 == 0 && within_box(r, s, q))
}

/// Segments in 3D meet when their closest points are within tolerance.
fn segments_meet_3d<T: Scalar>(p: &Point3<T>, q: &Point3<T>, r: &Point3<T>, s: &Point3<T>, tol: &Tol<T>) -> bool {
    let (c1, c2) = closest_points(p, q, r, s);
    len(&c1, &c2) <= tol.len
}

fn closest_points<T: Scalar>(p1: &Point3<T>, q1: &Point3<T>, p2: &Point3<T>, q2: &Point3<T>) -> (Point3<T>, Point3<T>) {
    let zero = T::zero();
    let one = T::one();
    let d1 = sub(q1, p1);
    let d2 = sub(q2, p2);
    let r = sub(p1, p2);
    let a = dot(&d1, &d1);
    let e = dot(&d2, &d2);
    let f = dot(&d2, &r);
    let tiny = T::min_positive_value();
    let clamp = |x: T| x.max(zero).min(one);
    let (s, t) = if a <= tiny && e <= tiny {
        (zero, zero)
    } else if a <= tiny {
        (zero, clamp(f / e))
    } else {
        let c = dot(&d1, &r);
        if e <= tiny {
            (clamp(-c / a), zero)
        } else {
            let b = dot(&d1, &d2);
            let denom = a * e - b * b;
            let mut s = if denom > zero { clamp((b * f - c * e) / denom) } else { zero };
            let mut t = (b * s + f) / e;
            if t < zero {
                t = zero;
                s = clamp(-c / a);
            } else if t > one {
                t = one;
                s = clamp((b - c) / a);
            }
            (s, t)
        }
    };
    let at = |p: &Point3<T>, d: &Point3<T>, k: T| [p[0] + d[0] * k, p[1] + d[1] * k, p[2] + d[2] * k];
    (at(p1, &d1, s), at(p2, &d2, t))
}

/// Proper crossing of 2D segments: each segment's endpoints lie strictly on
/// opposite sides of the other's supporting line.
pub fn segments_cross_2d<T: Scalar>(p: &Point2<T>, q: &Point2<T>, r: &Point2<T>, s: &Point2<T>) -> bool {
    let l = |a: &Point2<T>, b: &Point2<T>| ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    let scale = l(p, q).max(l(r, s));
    let tol = Tol::new(scale).area;
    let o1 = sign(orient2d(p, q, r), tol);
    let o2 = sign(orient2d(p, q, s), tol);
    let o3 = sign(orient2d(r, s, p), tol);
    let o4 = sign(orient2d(r, s, q), tol);
    o1 * o2 < 0 && o3 * o4 < 0
}
