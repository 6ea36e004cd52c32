//! Shooting-and-bouncing-ray launch tree.
//!
//! The bounce chains launched from a transmitter depend only on the scene
//! and budget, not on any receiver, so they are traced once and reused
//! across the whole receiver grid. Each chain is a run of segments; a
//! receiver "captures" a segment when it passes within the unfolded-length
//! proportional capture radius, and the segment's bounce history is the
//! candidate signature handed to image refinement.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use std::collections::BTreeSet;

use crate::geom::{reflect_direction, Ray, Vec3};
use crate::scene::Scene;

use super::launch::geodesic_directions;
use super::{SigStep, Signature, TraceBudget};

const NO_PARENT: u32 = u32::MAX;
const NO_SURFACE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct TreeSegment {
    origin: Vec3,
    dir: Vec3,
    /// Traced length of this segment (to the hit point or the apron exit).
    len: f64,
    /// Unfolded path length from TX to this segment's origin.
    unfolded_start: f64,
    parent: u32,
    /// Surface whose reflection started this segment; NO_SURFACE for the
    /// launch segment.
    bounce_surface: u32,
}

/// Immutable bounce-chain forest for one transmitter.
#[derive(Debug)]
pub struct LaunchTree {
    segments: Vec<TreeSegment>,
    tx: Vec3,
    angular_spacing: f64,
    capture_alpha: f64,
}

impl LaunchTree {
    pub fn build(scene: &Scene, tx: Vec3, budget: &TraceBudget) -> Self {
        let (dirs, angular_spacing) = geodesic_directions(budget.launch_rays);

        #[cfg(feature = "parallel")]
        let chains: Vec<Vec<TreeSegment>> = dirs
            .par_iter()
            .map(|&d| trace_chain(scene, tx, d, budget.max_reflections))
            .collect();
        #[cfg(not(feature = "parallel"))]
        let chains: Vec<Vec<TreeSegment>> = dirs
            .iter()
            .map(|&d| trace_chain(scene, tx, d, budget.max_reflections))
            .collect();

        let total: usize = chains.iter().map(Vec::len).sum();
        let mut segments = Vec::with_capacity(total);
        for chain in chains {
            let offset = segments.len() as u32;
            segments.extend(chain.into_iter().map(|mut seg| {
                if seg.parent != NO_PARENT {
                    seg.parent += offset;
                }
                seg
            }));
        }

        LaunchTree { segments, tx, angular_spacing, capture_alpha: budget.capture_alpha }
    }

    pub fn tx(&self) -> Vec3 {
        self.tx
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn angular_spacing(&self) -> f64 {
        self.angular_spacing
    }

    /// Candidate reflection signatures for a receiver point: the bounce
    /// histories of every segment passing within the capture radius
    /// `alpha * L * angular_spacing` of `rx`, where `L` is the unfolded
    /// length from TX to the closest approach.
    pub fn candidate_signatures(&self, rx: Vec3) -> BTreeSet<Signature> {
        let mut out = BTreeSet::new();
        let scale = self.capture_alpha * self.angular_spacing;
        for (idx, seg) in self.segments.iter().enumerate() {
            let w = rx - seg.origin;
            let along = w.dot(seg.dir).clamp(0.0, seg.len);
            let d2 = (w - seg.dir * along).norm_squared();
            let radius = scale * (seg.unfolded_start + along);
            if d2 <= radius * radius {
                out.insert(self.signature_of(idx as u32));
            }
        }
        out
    }

    fn signature_of(&self, mut idx: u32) -> Signature {
        let mut sig = Vec::new();
        loop {
            let seg = &self.segments[idx as usize];
            if seg.bounce_surface != NO_SURFACE {
                sig.push(SigStep::Reflection(seg.bounce_surface));
            }
            if seg.parent == NO_PARENT {
                break;
            }
            idx = seg.parent;
        }
        sig.reverse();
        sig
    }
}

/// Trace the bounce chain of one launch direction. Rays terminate when
/// they leave the scene apron or exhaust the reflection budget; the final
/// segment is clipped at the apron so capture tests stay bounded.
fn trace_chain(scene: &Scene, tx: Vec3, launch: Vec3, max_reflections: u32) -> Vec<TreeSegment> {
    let apron = scene.apron();
    let mut chain = Vec::new();
    let mut origin = tx;
    let mut dir = launch;
    let mut unfolded = 0.0;
    let mut parent = NO_PARENT;
    let mut bounce_surface = NO_SURFACE;

    for depth in 0..=max_reflections {
        let ray = Ray { origin, dir };
        let hit = scene.intersect(&ray);
        let hit = match hit {
            Some(h) if apron.contains(h.point) => Some(h),
            _ => None,
        };

        match hit {
            Some(h) => {
                chain.push(TreeSegment {
                    origin,
                    dir,
                    len: h.distance,
                    unfolded_start: unfolded,
                    parent,
                    bounce_surface,
                });
                if depth == max_reflections {
                    break;
                }
                let reflected = match reflect_direction(dir, h.normal) {
                    Ok(d) => d,
                    Err(_) => break,
                };
                parent = (chain.len() - 1) as u32;
                origin = h.point;
                dir = reflected;
                unfolded += h.distance;
                bounce_surface = h.surface_id;
            }
            None => {
                // Escape: clip at the apron boundary (plus a margin so
                // receivers near the boundary still capture).
                let len = match apron.exit_distance(&ray) {
                    Some(t) => t + 1.0,
                    None => break,
                };
                if len > 0.0 {
                    chain.push(TreeSegment {
                        origin,
                        dir,
                        len,
                        unfolded_start: unfolded,
                        parent,
                        bounce_surface,
                    });
                }
                break;
            }
        }
    }
    chain
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{Bounds, Material};

    #[test]
    fn floor_tree_has_launch_and_bounce_segments() {
        let scene = Scene::open_ground(
            Material::concrete(),
            0.3,
            Bounds::new(Vec3::new(-10.0, -10.0, 0.0), Vec3::new(10.0, 10.0, 5.0)),
        );
        let budget = TraceBudget { launch_rays: 1000, ..TraceBudget::default() };
        let tree = LaunchTree::build(&scene, Vec3::new(0.0, 0.0, 1.5), &budget);
        // Every launch direction yields at least one segment; downward ones
        // add a bounce segment.
        assert!(tree.segment_count() > 1002);
        assert!(tree.segment_count() < 3 * 1002);
    }

    #[test]
    fn direct_capture_contains_empty_signature() {
        let scene = Scene::free_space(Bounds::new(
            Vec3::new(-10.0, -10.0, -10.0),
            Vec3::new(10.0, 10.0, 10.0),
        ));
        let budget = TraceBudget { launch_rays: 1000, ..TraceBudget::default() };
        let tree = LaunchTree::build(&scene, Vec3::ZERO, &budget);
        let sigs = tree.candidate_signatures(Vec3::new(3.0, 1.0, 0.5));
        assert!(sigs.contains(&Vec::new()));
    }
}
