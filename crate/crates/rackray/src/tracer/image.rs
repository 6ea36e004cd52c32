//! Image-method refinement of a discovered reflection sequence.
//!
//! Mirroring RX backward across the signature's face planes and then
//! intersecting forward from TX yields the exact specular points in one
//! pass; the specular law holds by construction. The sequence is feasible
//! only if every reflection point lands inside its face rectangle, every
//! bounce approaches the face from outside, and every segment is
//! unobstructed.

use crate::geom::Vec3;
use crate::scene::{Scene, SurfacePlane};

use super::{Interaction, InteractionKind, PropagationPath, SigStep, MIN_SEGMENT};

/// Exact specular path for an ordered reflection-surface sequence, if the
/// sequence is geometrically feasible. An empty signature degenerates to
/// the line-of-sight test.
pub fn refine_specular_path(
    scene: &Scene,
    tx: Vec3,
    rx: Vec3,
    signature: &[SigStep],
) -> Option<PropagationPath> {
    if signature.is_empty() {
        return super::find_los(scene, tx, rx);
    }
    let planes: Vec<SurfacePlane> = signature
        .iter()
        .map(|step| match step {
            SigStep::Reflection(id) => scene.surface_plane(*id),
            SigStep::Diffraction(_) => None,
        })
        .collect::<Option<Vec<_>>>()?;

    // Mirror RX across the planes in reverse order; images[i] is the
    // straightened target to aim at from reflection point i.
    let k = planes.len();
    let mut images = vec![Vec3::ZERO; k];
    let mut img = rx;
    for i in (0..k).rev() {
        img = crate::geom::mirror_point(img, planes[i].point(), planes[i].normal);
        images[i] = img;
    }

    let mut points = Vec::with_capacity(k);
    let mut prev = tx;
    for (i, plane) in planes.iter().enumerate() {
        let axis = plane.axis;
        let target = images[i];
        let run = target.axis(axis) - prev.axis(axis);
        if run.abs() < 1e-15 {
            return None;
        }
        let t = (plane.coord - prev.axis(axis)) / run;
        if !(t > 0.0 && t < 1.0) {
            return None;
        }
        // Approach must come from the outward side of the face.
        let side = (prev.axis(axis) - plane.coord) * plane.normal.axis(axis);
        if side <= 0.0 {
            return None;
        }
        let mut point = prev + (target - prev) * t;
        point.set_axis(axis, plane.coord);
        if !scene.point_on_surface(plane.surface_id, point, 1e-9) {
            return None;
        }
        if point.distance(prev) <= MIN_SEGMENT {
            return None;
        }
        points.push(point);
        prev = point;
    }
    if rx.distance(prev) <= MIN_SEGMENT {
        return None;
    }

    // Visibility of every segment, re-checked against the full scene.
    let mut waypoints = Vec::with_capacity(k + 2);
    waypoints.push(tx);
    waypoints.extend_from_slice(&points);
    waypoints.push(rx);
    for w in waypoints.windows(2) {
        if !scene.segment_clear(w[0], w[1]) {
            return None;
        }
    }

    let mut interactions = Vec::with_capacity(k + 2);
    interactions.push(Interaction { kind: InteractionKind::Launch, point: tx });
    for (plane, point) in planes.iter().zip(points.iter()) {
        interactions.push(Interaction {
            kind: InteractionKind::Reflection {
                surface_id: plane.surface_id,
                normal: plane.normal,
            },
            point: *point,
        });
    }
    interactions.push(Interaction { kind: InteractionKind::Arrival, point: rx });

    Some(PropagationPath::new(interactions, signature.to_vec()))
}
