//! Propagation path enumeration.
//!
//! Three mechanisms, each deterministic:
//!
//! * line of sight ([`find_los`]),
//! * specular reflection chains up to a configurable order, discovered by
//!   a shooting-and-bouncing-ray sweep over a geodesic launch lattice and
//!   then refined to exact reflection points with the image method
//!   ([`enumerate_specular_paths`]),
//! * single-edge diffraction over box edges at the generalized Fermat
//!   point ([`find_diffraction_paths`]).
//!
//! Discovery via the capture test is density-dependent; the returned
//! geometry never is, because every candidate surface sequence is solved
//! exactly and visibility-verified before a path is emitted. Path lists
//! are canonically ordered (signature, then length) so downstream
//! summation is bit-stable.

mod diffraction;
mod image;
mod launch;
mod tree;

pub use diffraction::{
    box_edge, edge_count, edge_geometry, fermat_point, find_diffraction_paths, EdgeGeometry,
};
pub use image::refine_specular_path;
pub use launch::geodesic_directions;
pub use tree::LaunchTree;

use crate::geom::Vec3;
use crate::scene::Scene;

/// Minimum separation between consecutive path points.
pub const MIN_SEGMENT: f64 = 1e-9;

/// One step of a path signature, by surface or edge id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SigStep {
    Reflection(u32),
    Diffraction(u32),
}

/// Ordered interaction ids, used for deduplication and canonical sorting.
pub type Signature = Vec<SigStep>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InteractionKind {
    Launch,
    Reflection { surface_id: u32, normal: Vec3 },
    Diffraction { edge_id: u32, edge_dir: Vec3 },
    Arrival,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interaction {
    pub kind: InteractionKind,
    pub point: Vec3,
}

/// A geometric path from TX to RX: launch, zero or more interactions,
/// arrival. At most one diffraction, never mixed with reflections.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationPath {
    pub interactions: Vec<Interaction>,
    pub total_length: f64,
    pub signature: Signature,
}

impl PropagationPath {
    pub(crate) fn new(interactions: Vec<Interaction>, signature: Signature) -> Self {
        debug_assert!(interactions.len() >= 2);
        let total_length = interactions
            .windows(2)
            .map(|w| (w[1].point - w[0].point).norm())
            .sum();
        PropagationPath { interactions, total_length, signature }
    }

    pub fn line_of_sight(tx: Vec3, rx: Vec3) -> Self {
        PropagationPath::new(
            vec![
                Interaction { kind: InteractionKind::Launch, point: tx },
                Interaction { kind: InteractionKind::Arrival, point: rx },
            ],
            Vec::new(),
        )
    }

    pub fn points(&self) -> impl Iterator<Item = Vec3> + '_ {
        self.interactions.iter().map(|i| i.point)
    }

    /// Unit direction of the first segment (departure from TX).
    pub fn launch_dir(&self) -> Vec3 {
        (self.interactions[1].point - self.interactions[0].point).normalized()
    }

    /// Unit direction of the last segment (propagation toward RX).
    pub fn arrival_dir(&self) -> Vec3 {
        let n = self.interactions.len();
        (self.interactions[n - 1].point - self.interactions[n - 2].point).normalized()
    }

    pub fn is_line_of_sight(&self) -> bool {
        self.signature.is_empty()
    }

    pub fn has_diffraction(&self) -> bool {
        self.signature.iter().any(|s| matches!(s, SigStep::Diffraction(_)))
    }

    /// Canonical ordering key: signature, then length.
    fn canonical_key(&self) -> (&Signature, f64) {
        (&self.signature, self.total_length)
    }
}

/// Sort paths into the canonical order used for all downstream sums.
pub fn sort_canonical(paths: &mut [PropagationPath]) {
    paths.sort_by(|a, b| {
        let (sa, la) = a.canonical_key();
        let (sb, lb) = b.canonical_key();
        sa.cmp(sb).then(la.total_cmp(&lb))
    });
}

/// Ray-launching and capture budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceBudget {
    pub max_reflections: u32,
    pub enable_diffraction: bool,
    /// Requested launch-lattice size; the actual geodesic count is the
    /// nearest 10 nu^2 + 2.
    pub launch_rays: u32,
    /// Capture radius multiplier: r = alpha * L * angular_spacing.
    pub capture_alpha: f64,
}

impl Default for TraceBudget {
    fn default() -> Self {
        TraceBudget {
            max_reflections: 6,
            enable_diffraction: true,
            launch_rays: 100_000,
            capture_alpha: 1.5,
        }
    }
}

/// Direct path, present iff the open TX-RX segment crosses no geometry.
pub fn find_los(scene: &Scene, tx: Vec3, rx: Vec3) -> Option<PropagationPath> {
    assert!(tx.distance(rx) > MIN_SEGMENT, "tx and rx must be distinct");
    scene.segment_clear(tx, rx).then(|| PropagationPath::line_of_sight(tx, rx))
}

/// All reflection-only paths (order >= 1) between TX and RX.
///
/// Launches rays from TX over the geodesic lattice, registers a candidate
/// surface sequence whenever a bounced ray passes within the capture
/// radius of RX, then refines each unique sequence with the image method.
/// Only exact, visibility-verified paths are returned, each signature at
/// most once, canonically ordered.
pub fn enumerate_specular_paths(
    scene: &Scene,
    tx: Vec3,
    rx: Vec3,
    budget: &TraceBudget,
) -> Vec<PropagationPath> {
    let tree = LaunchTree::build(scene, tx, budget);
    specular_paths_from_tree(scene, &tree, rx)
}

/// Same as [`enumerate_specular_paths`] but reusing a prebuilt launch
/// tree (the tree depends only on the scene, TX and budget, so one tree
/// serves a whole receiver grid).
pub fn specular_paths_from_tree(
    scene: &Scene,
    tree: &LaunchTree,
    rx: Vec3,
) -> Vec<PropagationPath> {
    let mut paths: Vec<PropagationPath> = tree
        .candidate_signatures(rx)
        .into_iter()
        .filter(|sig| !sig.is_empty())
        .filter_map(|sig| refine_specular_path(scene, tree.tx(), rx, &sig))
        .collect();
    sort_canonical(&mut paths);
    paths
}

/// Every path between TX and RX: LOS, specular chains and single
/// diffractions, canonically ordered.
pub fn trace_point(
    scene: &Scene,
    tree: &LaunchTree,
    rx: Vec3,
    budget: &TraceBudget,
) -> Vec<PropagationPath> {
    let mut paths = Vec::new();
    if let Some(los) = find_los(scene, tree.tx(), rx) {
        paths.push(los);
    }
    paths.extend(specular_paths_from_tree(scene, tree, rx));
    paths.extend(find_diffraction_paths(scene, tree.tx(), rx, budget));
    sort_canonical(&mut paths);
    paths
}
