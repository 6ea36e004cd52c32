//! Exact 3D primitives for axis-aligned ray tracing.
//!
//! Everything the tracer does reduces to ray/box intersections, specular
//! direction reflection and point mirroring across face planes. All scene
//! geometry is axis-aligned, which keeps face-plane arithmetic exact: a
//! hit point's coordinate along the face axis is snapped to the plane
//! coordinate rather than left to rounding.

use std::ops::{Add, Div, Index, Mul, Neg, Sub};

use thiserror::Error;

/// Guard distance for ray restarts; hits closer than this are ignored so a
/// reflected ray does not re-intersect the surface it just left.
pub const HIT_EPSILON: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("incident direction does not point into the surface (incident·normal = {0})")]
    NotIncident(f64),
}

/// 3D vector, meters for positions, unitless for directions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn try_normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 {
            Some(self / n)
        } else {
            None
        }
    }

    /// Unit vector in the same direction. Panics on the zero vector.
    pub fn normalized(self) -> Vec3 {
        self.try_normalized().expect("cannot normalize zero vector")
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn is_unit(self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Componentwise access by axis index (0 = x, 1 = y, 2 = z).
    pub fn axis(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis out of range: {axis}"),
        }
    }

    pub fn set_axis(&mut self, axis: usize, value: f64) {
        match axis {
            0 => self.x = value,
            1 => self.y = value,
            2 => self.z = value,
            _ => panic!("axis out of range: {axis}"),
        }
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, axis: usize) -> &f64 {
        match axis {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("axis out of range: {axis}"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Ray with unit direction.
#[derive(Debug, Clone, Copy)]
pub struct Ray {
    pub origin: Vec3,
    pub dir: Vec3,
}

impl Ray {
    pub fn new(origin: Vec3, dir: Vec3) -> Self {
        debug_assert!(dir.is_unit(1e-12), "ray direction must be unit");
        Ray { origin, dir }
    }

    pub fn at(&self, t: f64) -> Vec3 {
        self.origin + self.dir * t
    }
}

/// Axis-aligned box. Each of the six faces carries a stable surface id
/// `surface_id_base + face_index`, face index order -x, +x, -y, +y, -z, +z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
    pub surface_id_base: u32,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3, surface_id_base: u32) -> Self {
        assert!(
            min.x < max.x && min.y < max.y && min.z < max.z,
            "box corners must satisfy min < max componentwise"
        );
        Aabb { min, max, surface_id_base }
    }

    pub fn surface_id(&self, face: usize) -> u32 {
        debug_assert!(face < 6);
        self.surface_id_base + face as u32
    }

    /// Outward unit normal of a face index.
    pub fn face_normal(face: usize) -> Vec3 {
        match face {
            0 => Vec3::new(-1.0, 0.0, 0.0),
            1 => Vec3::new(1.0, 0.0, 0.0),
            2 => Vec3::new(0.0, -1.0, 0.0),
            3 => Vec3::new(0.0, 1.0, 0.0),
            4 => Vec3::new(0.0, 0.0, -1.0),
            5 => Vec3::new(0.0, 0.0, 1.0),
            _ => panic!("face out of range: {face}"),
        }
    }

    /// Axis (0..3) a face is perpendicular to.
    pub fn face_axis(face: usize) -> usize {
        face / 2
    }

    /// Plane coordinate of a face along its axis.
    pub fn face_coord(&self, face: usize) -> f64 {
        let axis = Self::face_axis(face);
        if face.is_multiple_of(2) {
            self.min.axis(axis)
        } else {
            self.max.axis(axis)
        }
    }

    /// Point strictly inside the box.
    pub fn contains_interior(&self, p: Vec3) -> bool {
        p.x > self.min.x
            && p.x < self.max.x
            && p.y > self.min.y
            && p.y < self.max.y
            && p.z > self.min.z
            && p.z < self.max.z
    }

    /// True when the in-face coordinates of `p` lie within the face
    /// rectangle (inclusive, with `tol` slack).
    pub fn point_on_face(&self, face: usize, p: Vec3, tol: f64) -> bool {
        let axis = Self::face_axis(face);
        for a in 0..3 {
            if a == axis {
                continue;
            }
            if p.axis(a) < self.min.axis(a) - tol || p.axis(a) > self.max.axis(a) + tol {
                return false;
            }
        }
        true
    }

    pub fn overlaps(&self, other: &Aabb) -> bool {
        self.min.x < other.max.x
            && other.min.x < self.max.x
            && self.min.y < other.max.y
            && other.min.y < self.max.y
            && self.min.z < other.max.z
            && other.min.z < self.max.z
    }
}

/// Nearest ray/surface crossing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceHit {
    pub surface_id: u32,
    pub point: Vec3,
    /// Outward face normal (exact axis-aligned unit vector).
    pub normal: Vec3,
    pub distance: f64,
}

/// Nearest intersection of a ray with a box, ignoring crossings closer
/// than [`HIT_EPSILON`]. A ray starting on or inside the box reports the
/// exit crossing. The hit point's face-axis coordinate is snapped to the
/// exact plane coordinate.
pub fn ray_box_intersect(ray: &Ray, bx: &Aabb) -> Option<SurfaceHit> {
    let mut t_enter = f64::NEG_INFINITY;
    let mut t_exit = f64::INFINITY;
    // Which face (index 0..6) bounds the interval on each side.
    let mut enter_face = usize::MAX;
    let mut exit_face = usize::MAX;

    for axis in 0..3 {
        let o = ray.origin.axis(axis);
        let d = ray.dir.axis(axis);
        let lo = bx.min.axis(axis);
        let hi = bx.max.axis(axis);
        if d == 0.0 {
            if o < lo || o > hi {
                return None;
            }
            continue;
        }
        let inv = 1.0 / d;
        let (t_lo, t_hi, face_lo, face_hi) = if inv >= 0.0 {
            ((lo - o) * inv, (hi - o) * inv, 2 * axis, 2 * axis + 1)
        } else {
            ((hi - o) * inv, (lo - o) * inv, 2 * axis + 1, 2 * axis)
        };
        if t_lo > t_enter {
            t_enter = t_lo;
            enter_face = face_lo;
        }
        if t_hi < t_exit {
            t_exit = t_hi;
            exit_face = face_hi;
        }
        if t_enter > t_exit {
            return None;
        }
    }

    let (t, face) = if t_enter > HIT_EPSILON && enter_face != usize::MAX {
        (t_enter, enter_face)
    } else if t_exit > HIT_EPSILON && exit_face != usize::MAX {
        (t_exit, exit_face)
    } else {
        return None;
    };

    let mut point = ray.at(t);
    point.set_axis(Aabb::face_axis(face), bx.face_coord(face));
    Some(SurfaceHit {
        surface_id: bx.surface_id(face),
        point,
        normal: Aabb::face_normal(face),
        distance: t,
    })
}

/// Specular reflection of a unit direction off a surface with unit
/// outward normal. The incident direction must point into the surface.
pub fn reflect_direction(incident: Vec3, normal: Vec3) -> Result<Vec3, GeomError> {
    let cos = incident.dot(normal);
    if cos >= 0.0 {
        return Err(GeomError::NotIncident(cos));
    }
    Ok(incident - normal * (2.0 * cos))
}

/// Mirror image of a point across the plane through `plane_point` with
/// unit normal `plane_normal`.
pub fn mirror_point(point: Vec3, plane_point: Vec3, plane_normal: Vec3) -> Vec3 {
    let d = (point - plane_point).dot(plane_normal);
    point - plane_normal * (2.0 * d)
}
