//! Seeded random configurations for the verification sweeps.
//!
//! Every sample draws from its own ChaCha stream selected by
//! `(seed, sample_index)`, so results do not depend on evaluation order.

use std::f64::consts::FRAC_PI_2;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cross_ratio::CollinearQuadruple;
use crate::hilbert::BallSpec;
use crate::linalg::{dot_unchecked, RealVector};
use crate::model::{geodesic_point, GeodesicRay, Geometry, ModelPoint};
use crate::triangle::Triangle;

pub type SampleRng = ChaCha8Rng;

/// Sampled spherical points keep at least this much latitude above the
/// equator.
pub const EQUATOR_CLEARANCE: f64 = 0.05;

/// Minimum gap between the sorted arclength parameters of a quadruple.
pub const MIN_PARAMETER_GAP: f64 = 1e-3;

/// Half-width of the parameter window for hyperbolic quadruples; with base
/// points within distance 1 of the apex, pairwise arclengths stay ≤ 3.
pub const HYPERBOLIC_HALF_SPAN: f64 = 1.5;

const EUCLIDEAN_HALF_SPAN: f64 = 2.0;

/// The generator for sample `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform unit vector in ℝ^len.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, len);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Unit tangent at `base` in a uniformly random direction.
pub fn random_tangent<R: Rng + ?Sized>(rng: &mut R, base: &ModelPoint) -> RealVector {
    random_tangent_orthogonal(rng, base, None)
}

/// Unit tangent at `base`, orthogonal to `other` when given (which must itself
/// be a unit tangent at `base`).
pub fn random_tangent_orthogonal<R: Rng + ?Sized>(
    rng: &mut R,
    base: &ModelPoint,
    other: Option<&RealVector>,
) -> RealVector {
    let len = base.position().len();
    let form = base.geometry().form();
    let p = base.position();
    loop {
        let mut t = RealVector::from_vec_unchecked(gaussian_vec(rng, len));
        match base.geometry() {
            Geometry::Euclidean => {
                let mut c = t.into_vec();
                c[len - 1] = 0.0;
                t = RealVector::from_vec_unchecked(c);
            }
            Geometry::Spherical => {
                let c = dot_unchecked(form, p.as_slice(), t.as_slice());
                t = t.add_scaled(-c, p);
            }
            Geometry::Hyperbolic => {
                let c = dot_unchecked(form, p.as_slice(), t.as_slice());
                t = t.add_scaled(c, p);
            }
        }
        if let Some(o) = other {
            let c = dot_unchecked(form, o.as_slice(), t.as_slice());
            t = t.add_scaled(-c, o);
        }
        let sq = dot_unchecked(form, t.as_slice(), t.as_slice());
        if sq > 1e-6 {
            return t.scale(1.0 / sq.sqrt());
        }
    }
}

/// A random point of the model: Euclidean in `[−2, 2]ⁿ`, spherical with
/// colatitude at most `π/2 − 0.1`, hyperbolic within distance 1 of the apex.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, geometry: Geometry, n: usize) -> ModelPoint {
    match geometry {
        Geometry::Euclidean => {
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect();
            ModelPoint::from_coords(geometry, &c).expect("finite chart point")
        }
        Geometry::Spherical => {
            let theta = rng.random_range(0.0..=FRAC_PI_2 - 2.0 * EQUATOR_CLEARANCE);
            point_at(rng, geometry, n, theta)
        }
        Geometry::Hyperbolic => {
            let r = rng.random_range(0.0..=1.0);
            point_at(rng, geometry, n, r)
        }
    }
}

/// A point at distance `r` from the reference point in a random direction.
pub fn point_at<R: Rng + ?Sized>(rng: &mut R, geometry: Geometry, n: usize, r: f64) -> ModelPoint {
    let center = ModelPoint::reference(geometry, n);
    let dir = random_tangent(rng, &center);
    let ray = GeodesicRay::new(center, dir).expect("tangent at reference point");
    geodesic_point(&ray, r).expect("point inside the model")
}

/// A random point inside a geodesic ball, at most `fraction·ρ` from its
/// centre, with radial density uniform in volume for the Euclidean chart.
pub fn point_in_ball<R: Rng + ?Sized>(
    rng: &mut R,
    ball: &BallSpec,
    n: usize,
    fraction: f64,
) -> ModelPoint {
    let u: f64 = rng.random_range(0.0..1.0);
    let r = ball.radius() * fraction * u.powf(1.0 / n as f64);
    point_at(rng, ball.geometry(), n, r)
}

/// Four sorted parameters in `[lo, hi]` with pairwise gaps at least `gap`.
fn sorted_parameters<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64, gap: f64) -> [f64; 4] {
    loop {
        let mut t = [0.0; 4];
        for x in &mut t {
            *x = rng.random_range(lo..=hi);
        }
        t.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if t.windows(2).all(|w| w[1] - w[0] >= gap) {
            return t;
        }
    }
}

/// Parameter window `[lo, hi]` around 0 for a ray; spherical windows keep
/// every point at colatitude at most `π/2 − 0.05`.
fn parameter_window(ray: &GeodesicRay) -> (f64, f64) {
    match ray.geometry() {
        Geometry::Euclidean => (-EUCLIDEAN_HALF_SPAN, EUCLIDEAN_HALF_SPAN),
        Geometry::Hyperbolic => (-HYPERBOLIC_HALF_SPAN, HYPERBOLIC_HALF_SPAN),
        Geometry::Spherical => {
            // Height along the great circle is A·cos(s − φ).
            let bz = ray.base().position().last();
            let dz = ray.direction().last();
            let amplitude = bz.hypot(dz);
            let phase = dz.atan2(bz);
            let half = (EQUATOR_CLEARANCE.sin() / amplitude).min(1.0).acos();
            (phase - half, phase + half)
        }
    }
}

/// A random geodesic ray: random base point and direction.
pub fn random_ray<R: Rng + ?Sized>(rng: &mut R, geometry: Geometry, n: usize) -> GeodesicRay {
    let base = random_point(rng, geometry, n);
    let dir = random_tangent(rng, &base);
    GeodesicRay::new(base, dir).expect("unit tangent")
}

/// A random collinear quadruple: random geodesic, four arclength parameters
/// with gaps at least `1e−3`, assigned to `A₁…A₄` in random order.
pub fn sample_quadruple<R: Rng + ?Sized>(
    rng: &mut R,
    geometry: Geometry,
    n: usize,
) -> CollinearQuadruple {
    loop {
        let ray = random_ray(rng, geometry, n);
        let (lo, hi) = parameter_window(&ray);
        let mut params = sorted_parameters(rng, lo, hi, MIN_PARAMETER_GAP);
        params.shuffle(rng);
        let points: Option<Vec<ModelPoint>> = params
            .iter()
            .map(|&s| geodesic_point(&ray, s).ok())
            .collect();
        if let Some(points) = points {
            let points: [ModelPoint; 4] = points.try_into().expect("four points");
            if let Ok(q) = CollinearQuadruple::new(points) {
                return q;
            }
        }
    }
}

/// A quadruple on a random geodesic at parameters `scale·t` with `t` drawn
/// from `[−1, 1]` (gaps at least 0.1, random order). Returns the quadruple
/// builder so the same configuration can be evaluated at several scales.
pub fn sample_shrinkable<R: Rng + ?Sized>(
    rng: &mut R,
    geometry: Geometry,
    n: usize,
) -> (GeodesicRay, [f64; 4]) {
    let ray = random_ray(rng, geometry, n);
    let mut params = sorted_parameters(rng, -1.0, 1.0, 0.1);
    params.shuffle(rng);
    (ray, params)
}

/// Draws three side lengths in `[lo, hi]` satisfying the triangle inequality
/// with slack `slack` in each of its three forms.
fn triangle_sides<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64, slack: f64) -> [f64; 3] {
    loop {
        let s = [0; 3].map(|_| rng.random_range(lo..=hi));
        let [a, b, c] = s;
        if b + c - a >= slack && a + c - b >= slack && a + b - c >= slack {
            return s;
        }
    }
}

/// Cosine of the angle opposite side `a` from the law of cosines.
fn cos_opposite(g: Geometry, a: f64, b: f64, c: f64) -> f64 {
    match g {
        Geometry::Euclidean => (b * b + c * c - a * a) / (2.0 * b * c),
        Geometry::Spherical => (a.cos() - b.cos() * c.cos()) / (b.sin() * c.sin()),
        Geometry::Hyperbolic => (b.cosh() * c.cosh() - a.cosh()) / (b.sinh() * c.sinh()),
    }
}

/// A random nondegenerate triangle with sides in `[0.1, 1.5]`, built from
/// its side lengths by the law of cosines at a random vertex and frame.
/// Requires `n ≥ 2`.
pub fn sample_triangle<R: Rng + ?Sized>(rng: &mut R, geometry: Geometry, n: usize) -> Triangle {
    assert!(n >= 2, "triangles need n >= 2");
    loop {
        let [a, b, c] = triangle_sides(rng, 0.1, 1.5, 0.05);
        let angle = cos_opposite(geometry, a, b, c).clamp(-1.0, 1.0).acos();
        let base = match geometry {
            // Keep all three vertices in the upper hemisphere more often.
            Geometry::Spherical => {
                let theta = rng.random_range(0.0..=0.5);
                point_at(rng, geometry, n, theta)
            }
            _ => random_point(rng, geometry, n),
        };
        let e1 = random_tangent(rng, &base);
        let e2 = random_tangent_orthogonal(rng, &base, Some(&e1));
        let toward_c = e1.scale(angle.cos()).add_scaled(angle.sin(), &e2);
        let vb = GeodesicRay::new(base.clone(), e1).and_then(|r| geodesic_point(&r, c));
        let vc = GeodesicRay::new(base.clone(), toward_c).and_then(|r| geodesic_point(&r, b));
        if let (Ok(vb), Ok(vc)) = (vb, vc) {
            if let Ok(t) = Triangle::new(base, vb, vc) {
                return t;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::distance;

    #[test]
    fn substreams_are_deterministic_and_distinct() {
        let a: u64 = substream(7, 3).random();
        let b: u64 = substream(7, 3).random();
        let c: u64 = substream(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn quadruple_contract() {
        let mut rng = substream(1, 0);
        let q = sample_quadruple(&mut rng, Geometry::Euclidean, 2);
        assert_eq!(q.n(), 2);
        let again = sample_quadruple(&mut substream(1, 0), Geometry::Euclidean, 2);
        assert_eq!(q, again);
    }

    #[test]
    fn spherical_quadruples_stay_off_equator() {
        let min_height = EQUATOR_CLEARANCE.sin();
        for i in 0..1000 {
            let q = sample_quadruple(
                &mut substream(9, i),
                Geometry::Spherical,
                1 + (i as usize % 4),
            );
            for p in q.points() {
                assert!(p.position().last() >= min_height - 1e-12);
            }
        }
    }

    #[test]
    fn hyperbolic_quadruples_have_short_arcs() {
        for i in 0..200 {
            let q = sample_quadruple(&mut substream(3, i), Geometry::Hyperbolic, 3);
            let p = q.points();
            for a in 0..4 {
                for b in 0..4 {
                    assert!(distance(&p[a], &p[b]).unwrap() <= 3.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn triangles_have_requested_sides() {
        for g in Geometry::ALL {
            for i in 0..100 {
                let t = sample_triangle(&mut substream(5, i), g, 2);
                for s in t.sides() {
                    assert!((0.1 - 1e-9..=1.5 + 1e-9).contains(&s), "{g} side {s}");
                }
            }
        }
    }

    #[test]
    fn ball_points_inside() {
        let ball = BallSpec::new(Geometry::Spherical, 0.5).unwrap();
        for i in 0..100 {
            let p = point_in_ball(&mut substream(2, i), &ball, 3, 0.98);
            assert!(distance(&ball.center(3), &p).unwrap() <= 0.49 + 1e-12);
        }
    }
}
