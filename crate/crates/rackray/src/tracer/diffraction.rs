//! Single-edge diffraction over box edges.
//!
//! For every box edge the diffraction point is the generalized Fermat
//! point: the interior point of the edge minimizing the two-leg length,
//! equivalently the point where incident and diffracted rays make equal
//! angles with the edge (the Keller cone condition). A path is kept only
//! when the edge is a silhouette edge as seen from both endpoints and
//! both legs are unobstructed. Diffraction is never mixed with
//! reflections.

use crate::geom::{Aabb, Vec3};
use crate::scene::Scene;

use super::{Interaction, InteractionKind, PropagationPath, SigStep, TraceBudget, MIN_SEGMENT};

/// Edges per box.
pub const EDGES_PER_BOX: usize = 12;

/// One box edge with its two adjacent faces, in the frame UTD needs.
#[derive(Debug, Clone, Copy)]
pub struct EdgeGeometry {
    pub edge_id: u32,
    pub start: Vec3,
    pub end: Vec3,
    /// Unit direction start -> end.
    pub dir: Vec3,
    pub length: f64,
    /// Outward normals of the two adjacent faces; index 0 is the
    /// reference ("o") face for diffraction angles.
    pub face_normals: [Vec3; 2],
    /// In-face unit directions pointing away from the edge.
    pub face_tangents: [Vec3; 2],
    pub surface_ids: [u32; 2],
}

pub fn edge_count(scene: &Scene) -> usize {
    scene.boxes().len() * EDGES_PER_BOX
}

/// Geometry of edge `edge_index` (0..12) of a box.
pub fn box_edge(bx: &Aabb, box_index: usize, edge_index: usize) -> EdgeGeometry {
    debug_assert!(edge_index < EDGES_PER_BOX);
    let axis = edge_index / 4;
    let side_b = (edge_index % 4) / 2;
    let side_c = edge_index % 2;
    let axis_b = (axis + 1) % 3;
    let axis_c = (axis + 2) % 3;

    let coord = |axis: usize, side: usize| {
        if side == 0 {
            bx.min.axis(axis)
        } else {
            bx.max.axis(axis)
        }
    };

    let mut start = Vec3::ZERO;
    start.set_axis(axis, bx.min.axis(axis));
    start.set_axis(axis_b, coord(axis_b, side_b));
    start.set_axis(axis_c, coord(axis_c, side_c));
    let mut end = start;
    end.set_axis(axis, bx.max.axis(axis));

    let mut dir = Vec3::ZERO;
    dir.set_axis(axis, 1.0);

    let face = |face_axis: usize, side: usize| 2 * face_axis + side;
    let face_b = face(axis_b, side_b);
    let face_c = face(axis_c, side_c);

    // In-face direction away from the edge: on face_b the free in-plane
    // axis is axis_c, pointing into the box footprint.
    let mut tangent_b = Vec3::ZERO;
    tangent_b.set_axis(axis_c, if side_c == 0 { 1.0 } else { -1.0 });
    let mut tangent_c = Vec3::ZERO;
    tangent_c.set_axis(axis_b, if side_b == 0 { 1.0 } else { -1.0 });

    EdgeGeometry {
        edge_id: (box_index * EDGES_PER_BOX + edge_index) as u32,
        start,
        end,
        dir,
        length: end.distance(start),
        face_normals: [Aabb::face_normal(face_b), Aabb::face_normal(face_c)],
        face_tangents: [tangent_b, tangent_c],
        surface_ids: [bx.surface_id(face_b), bx.surface_id(face_c)],
    }
}

/// Geometry of a global edge id.
pub fn edge_geometry(scene: &Scene, edge_id: u32) -> Option<EdgeGeometry> {
    let box_index = edge_id as usize / EDGES_PER_BOX;
    let edge_index = edge_id as usize % EDGES_PER_BOX;
    scene
        .boxes()
        .get(box_index)
        .map(|bx| box_edge(bx, box_index, edge_index))
}

/// Fermat point of the two-leg path tx -> edge -> rx, if it lies in the
/// edge interior. Returns the point and its arc-length parameter.
pub fn fermat_point(edge: &EdgeGeometry, tx: Vec3, rx: Vec3) -> Option<(Vec3, f64)> {
    let t_tx = (tx - edge.start).dot(edge.dir);
    let t_rx = (rx - edge.start).dot(edge.dir);
    let r_tx = (tx - edge.start - edge.dir * t_tx).norm();
    let r_rx = (rx - edge.start - edge.dir * t_rx).norm();
    if r_tx < MIN_SEGMENT || r_rx < MIN_SEGMENT {
        return None;
    }
    // Unfold both points into a common plane around the edge line; the
    // straightened path crosses the edge at the perpendicular-distance
    // weighted average of the two parameters.
    let t = (t_tx * r_rx + t_rx * r_tx) / (r_tx + r_rx);
    if !(t > MIN_SEGMENT && t < edge.length - MIN_SEGMENT) {
        return None;
    }
    Some((edge.start + edge.dir * t, t))
}

fn is_silhouette(edge: &EdgeGeometry, q: Vec3, p: Vec3) -> bool {
    let lit0 = edge.face_normals[0].dot(p - q) > 1e-12;
    let lit1 = edge.face_normals[1].dot(p - q) > 1e-12;
    lit0 != lit1
}

/// All single-diffraction paths between TX and RX.
pub fn find_diffraction_paths(
    scene: &Scene,
    tx: Vec3,
    rx: Vec3,
    budget: &TraceBudget,
) -> Vec<PropagationPath> {
    if !budget.enable_diffraction {
        return Vec::new();
    }
    let mut paths = Vec::new();
    for (box_index, bx) in scene.boxes().iter().enumerate() {
        for edge_index in 0..EDGES_PER_BOX {
            let edge = box_edge(bx, box_index, edge_index);
            let Some((q, _)) = fermat_point(&edge, tx, rx) else {
                continue;
            };
            if !is_silhouette(&edge, q, tx) || !is_silhouette(&edge, q, rx) {
                continue;
            }
            if !scene.segment_clear(tx, q) || !scene.segment_clear(q, rx) {
                continue;
            }
            paths.push(PropagationPath::new(
                vec![
                    Interaction { kind: InteractionKind::Launch, point: tx },
                    Interaction {
                        kind: InteractionKind::Diffraction {
                            edge_id: edge.edge_id,
                            edge_dir: edge.dir,
                        },
                        point: q,
                    },
                    Interaction { kind: InteractionKind::Arrival, point: rx },
                ],
                vec![SigStep::Diffraction(edge.edge_id)],
            ));
        }
    }
    super::sort_canonical(&mut paths);
    paths
}
