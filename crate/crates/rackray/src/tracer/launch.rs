//! Deterministic launch-direction lattice: geodesic subdivision of an
//! icosahedron. No randomness anywhere, so repeated runs launch exactly
//! the same fan of rays.

use std::collections::HashMap;

use crate::geom::Vec3;

/// Arc between adjacent icosahedron vertices, radians (acos(1/sqrt(5))).
const ICOSA_EDGE_ARC: f64 = 1.1071487177940904;

/// Geodesic sphere directions with at least roughly `target` points.
///
/// Returns the direction set (size `10 nu^2 + 2` for subdivision frequency
/// `nu`) and the nominal angular spacing between neighboring directions.
pub fn geodesic_directions(target: u32) -> (Vec<Vec3>, f64) {
    let nu = (((target.max(12) as f64 - 2.0) / 10.0).sqrt().round() as u32).max(1);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ];
    let verts: Vec<Vec3> = raw
        .iter()
        .map(|&(x, y, z)| Vec3::new(x, y, z).normalized())
        .collect();
    const FACES: [(usize, usize, usize); 20] = [
        (0, 11, 5),
        (0, 5, 1),
        (0, 1, 7),
        (0, 7, 10),
        (0, 10, 11),
        (1, 5, 9),
        (5, 11, 4),
        (11, 10, 2),
        (10, 7, 6),
        (7, 1, 8),
        (3, 9, 4),
        (3, 4, 2),
        (3, 2, 6),
        (3, 6, 8),
        (3, 8, 9),
        (4, 9, 5),
        (2, 4, 11),
        (6, 2, 10),
        (8, 6, 7),
        (9, 8, 1),
    ];

    let expected = (10 * nu * nu + 2) as usize;
    let mut out = Vec::with_capacity(expected);
    let mut seen: HashMap<(i64, i64, i64), ()> = HashMap::with_capacity(expected * 2);
    // Lattice points on shared edges/vertices are emitted by several faces
    // with sub-1e-12 float differences; quantizing at 1e-7 merges them
    // (distinct directions are >= 1e-3 apart for any practical nu).
    let quantize = |v: Vec3| {
        (
            (v.x * 1e7).round() as i64,
            (v.y * 1e7).round() as i64,
            (v.z * 1e7).round() as i64,
        )
    };

    for &(ia, ib, ic) in FACES.iter() {
        let (a, b, c) = (verts[ia], verts[ib], verts[ic]);
        for i in 0..=nu {
            for j in 0..=(nu - i) {
                let k = nu - i - j;
                let p = (a * k as f64 + b * i as f64 + c * j as f64).normalized();
                if seen.insert(quantize(p), ()).is_none() {
                    out.push(p);
                }
            }
        }
    }
    debug_assert_eq!(out.len(), expected);
    (out, ICOSA_EDGE_ARC / nu as f64)
}
