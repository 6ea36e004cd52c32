//! Warehouse scene: axis-aligned rack boxes over a concrete floor slab,
//! plus the parameterized builder for the rack-cluster layout.
//!
//! Surface ids are stable: the floor top surface is id 0, box `i` owns ids
//! `1 + 6*i .. 1 + 6*i + 5` in face order -x, +x, -y, +y, -z, +z.

use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::geom::{ray_box_intersect, Aabb, Ray, SurfaceHit, Vec3, HIT_EPSILON};

/// Surface id of the floor top plane (z = 0).
pub const FLOOR_SURFACE_ID: u32 = 0;

/// Extra distance past the scene bounds inside which rays are still traced.
/// Bounces farther out than this are treated as escapes.
pub const BOUNDS_APRON: f64 = 2.0;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("non-positive dimension: {0}")]
    NonPositiveDimension(&'static str),
    #[error("cluster counts must be at least 1")]
    EmptyCluster,
    #[error("invalid material: {0}")]
    InvalidMaterial(&'static str),
    #[error("unknown scene preset {0:?} (expected \"paper-default\")")]
    UnknownPreset(String),
    #[error("scene config: {0}")]
    Config(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialKind {
    /// Perfect electric conductor.
    Pec,
    /// Lossy dielectric with relative permittivity and conductivity in S/m.
    Dielectric { eps_r: f64, sigma: f64 },
}

/// Surface material: electrical kind plus the standard deviation of
/// surface height irregularities (0 = flat).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub kind: MaterialKind,
    pub roughness_dh: f64,
}

impl Material {
    pub fn pec() -> Self {
        Material { kind: MaterialKind::Pec, roughness_dh: 0.0 }
    }

    pub fn dielectric(eps_r: f64, sigma: f64) -> Result<Self, SceneError> {
        if eps_r < 1.0 {
            return Err(SceneError::InvalidMaterial("eps_r must be >= 1"));
        }
        if sigma < 0.0 {
            return Err(SceneError::InvalidMaterial("sigma must be >= 0"));
        }
        Ok(Material { kind: MaterialKind::Dielectric { eps_r, sigma }, roughness_dh: 0.0 })
    }

    /// Warehouse floor concrete, eps_r 7, sigma 0.015 S/m.
    pub fn concrete() -> Self {
        Material::dielectric(7.0, 0.015).unwrap()
    }

    pub fn with_roughness(mut self, dh: f64) -> Self {
        assert!(dh >= 0.0, "roughness must be non-negative");
        self.roughness_dh = dh;
        self
    }
}

/// Floor slab: top interface at z = 0, given thickness below. Only the top
/// surface reflects; bounces inside the slab are not modeled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Floor {
    pub material: usize,
    pub thickness: f64,
}

/// Axis-aligned scene extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: Vec3,
    pub max: Vec3,
}

impl Bounds {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Bounds { min, max }
    }

    pub fn inflated(&self, by: f64) -> Bounds {
        let d = Vec3::new(by, by, by);
        Bounds { min: self.min - d, max: self.max + d }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }

    /// Distance along a ray to the exit of the bounds, if the ray starts
    /// inside; `None` when the origin is already outside.
    pub fn exit_distance(&self, ray: &Ray) -> Option<f64> {
        if !self.contains(ray.origin) {
            return None;
        }
        let mut t_exit = f64::INFINITY;
        for axis in 0..3 {
            let d = ray.dir.axis(axis);
            if d == 0.0 {
                continue;
            }
            let o = ray.origin.axis(axis);
            let bound = if d > 0.0 { self.max.axis(axis) } else { self.min.axis(axis) };
            t_exit = t_exit.min((bound - o) / d);
        }
        Some(t_exit.max(0.0))
    }
}

/// Plane carrying one reflective surface, for image-method refinement.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePlane {
    pub surface_id: u32,
    /// Axis the plane is perpendicular to.
    pub axis: usize,
    /// Plane coordinate along that axis.
    pub coord: f64,
    /// Outward unit normal.
    pub normal: Vec3,
}

impl SurfacePlane {
    pub fn point(&self) -> Vec3 {
        let mut p = Vec3::ZERO;
        p.set_axis(self.axis, self.coord);
        p
    }
}

/// Immutable warehouse scene.
#[derive(Debug, Clone)]
pub struct Scene {
    materials: Vec<Material>,
    boxes: Vec<Aabb>,
    box_material: Vec<usize>,
    floor: Option<Floor>,
    bounds: Bounds,
}

impl Scene {
    pub fn new(
        materials: Vec<Material>,
        boxes_with_materials: Vec<(Aabb, usize)>,
        floor: Option<Floor>,
        bounds: Bounds,
    ) -> Self {
        let mut boxes = Vec::with_capacity(boxes_with_materials.len());
        let mut box_material = Vec::with_capacity(boxes_with_materials.len());
        for (i, (bx, m)) in boxes_with_materials.into_iter().enumerate() {
            assert_eq!(bx.surface_id_base, box_surface_base(i), "boxes must use sequential ids");
            assert!(m < materials.len(), "material index out of range");
            boxes.push(bx);
            box_material.push(m);
        }
        if let Some(f) = floor {
            assert!(f.material < materials.len(), "floor material index out of range");
        }
        Scene { materials, boxes, box_material, floor, bounds }
    }

    /// Scene with no geometry at all (free space), for oracles and tests.
    pub fn free_space(bounds: Bounds) -> Self {
        Scene { materials: Vec::new(), boxes: Vec::new(), box_material: Vec::new(), floor: None, bounds }
    }

    /// Bare ground plane of the given material, no racks.
    pub fn open_ground(material: Material, thickness: f64, bounds: Bounds) -> Self {
        Scene {
            materials: vec![material],
            boxes: Vec::new(),
            box_material: Vec::new(),
            floor: Some(Floor { material: 0, thickness }),
            bounds,
        }
    }

    pub fn boxes(&self) -> &[Aabb] {
        &self.boxes
    }

    pub fn floor(&self) -> Option<Floor> {
        self.floor
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }

    pub fn apron(&self) -> Bounds {
        self.bounds.inflated(BOUNDS_APRON)
    }

    pub fn box_for_surface(&self, surface_id: u32) -> Option<(usize, usize)> {
        if surface_id == FLOOR_SURFACE_ID {
            return None;
        }
        let idx = ((surface_id - 1) / 6) as usize;
        let face = ((surface_id - 1) % 6) as usize;
        (idx < self.boxes.len()).then_some((idx, face))
    }

    pub fn material_for_surface(&self, surface_id: u32) -> Option<&Material> {
        if surface_id == FLOOR_SURFACE_ID {
            self.floor.map(|f| &self.materials[f.material])
        } else {
            self.box_for_surface(surface_id)
                .map(|(idx, _)| &self.materials[self.box_material[idx]])
        }
    }

    pub fn surface_plane(&self, surface_id: u32) -> Option<SurfacePlane> {
        if surface_id == FLOOR_SURFACE_ID {
            return self.floor.map(|_| SurfacePlane {
                surface_id,
                axis: 2,
                coord: 0.0,
                normal: Vec3::new(0.0, 0.0, 1.0),
            });
        }
        let (idx, face) = self.box_for_surface(surface_id)?;
        let bx = &self.boxes[idx];
        Some(SurfacePlane {
            surface_id,
            axis: Aabb::face_axis(face),
            coord: bx.face_coord(face),
            normal: Aabb::face_normal(face),
        })
    }

    /// True when the surface point lies within the actual face rectangle
    /// (always true for the floor, which extends under the whole scene).
    pub fn point_on_surface(&self, surface_id: u32, p: Vec3, tol: f64) -> bool {
        if surface_id == FLOOR_SURFACE_ID {
            return self.floor.is_some();
        }
        match self.box_for_surface(surface_id) {
            Some((idx, face)) => self.boxes[idx].point_on_face(face, p, tol),
            None => false,
        }
    }

    pub fn point_in_solid(&self, p: Vec3) -> bool {
        self.boxes.iter().any(|b| b.contains_interior(p)) || (self.floor.is_some() && p.z < 0.0)
    }

    /// Nearest intersection with any scene surface.
    pub fn intersect(&self, ray: &Ray) -> Option<SurfaceHit> {
        let mut best: Option<SurfaceHit> = None;
        for bx in &self.boxes {
            if let Some(hit) = ray_box_intersect(ray, bx) {
                if best.is_none_or(|b| hit.distance < b.distance) {
                    best = Some(hit);
                }
            }
        }
        if self.floor.is_some() && ray.dir.z < 0.0 && ray.origin.z > 0.0 {
            let t = -ray.origin.z / ray.dir.z;
            if t > HIT_EPSILON && best.is_none_or(|b| t < b.distance) {
                let mut point = ray.at(t);
                point.z = 0.0;
                best = Some(SurfaceHit {
                    surface_id: FLOOR_SURFACE_ID,
                    point,
                    normal: Vec3::new(0.0, 0.0, 1.0),
                    distance: t,
                });
            }
        }
        best
    }

    /// True when the open segment between two points crosses no geometry.
    pub fn segment_clear(&self, a: Vec3, b: Vec3) -> bool {
        let delta = b - a;
        let len = delta.norm();
        if len <= HIT_EPSILON {
            return true;
        }
        let ray = Ray { origin: a, dir: delta / len };
        match self.intersect(&ray) {
            Some(hit) => hit.distance >= len - HIT_EPSILON,
            None => true,
        }
    }

    /// Copy of the scene with every box material's roughness replaced.
    /// The floor is left untouched.
    pub fn with_box_roughness(&self, dh: f64) -> Scene {
        let mut scene = self.clone();
        // Box materials may be shared with the floor; split them first.
        let mut remap = vec![usize::MAX; scene.materials.len()];
        for m in scene.box_material.iter_mut() {
            if remap[*m] == usize::MAX {
                let mat = scene.materials[*m].with_roughness(dh);
                if scene.floor.is_some_and(|f| f.material == *m) {
                    scene.materials.push(mat);
                    remap[*m] = scene.materials.len() - 1;
                } else {
                    scene.materials[*m] = mat;
                    remap[*m] = *m;
                }
            }
            *m = remap[*m];
        }
        scene
    }
}

pub fn box_surface_base(box_index: usize) -> u32 {
    1 + 6 * box_index as u32
}

/// Parameters of the rack-cluster warehouse layout.
///
/// Defaults reproduce the 56-rack reference layout: 1.3 m by 1.3 m racks,
/// 2 m tall, on a 0.30 m air gap, grouped into 7 by 2 clusters with 5 cm
/// intra-cluster gaps, four clusters in a 2 by 2 grid separated by 1.5 m
/// corridors, over a 30 cm concrete floor, inside 22 m by 8 m bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct WarehouseParams {
    pub rack_w: f64,
    pub rack_d: f64,
    pub rack_h: f64,
    pub ground_clearance: f64,
    pub intra_gap: f64,
    /// Racks per cluster along y.
    pub cluster_rows: u32,
    /// Racks per cluster along x.
    pub cluster_cols: u32,
    pub corridor_w: f64,
    /// Clusters along (x, y).
    pub cluster_grid: (u32, u32),
    pub rack_material: Material,
    pub floor_material: Material,
    pub floor_thickness: f64,
    /// Free margin around the rack field along x and y, per side.
    pub margin: (f64, f64),
}

impl Default for WarehouseParams {
    fn default() -> Self {
        WarehouseParams {
            rack_w: 1.3,
            rack_d: 1.3,
            rack_h: 2.0,
            ground_clearance: 0.30,
            intra_gap: 0.05,
            cluster_rows: 2,
            cluster_cols: 7,
            corridor_w: 1.5,
            cluster_grid: (2, 2),
            rack_material: Material::pec(),
            floor_material: Material::concrete(),
            floor_thickness: 0.30,
            // Sized so the default observation area comes out 22 m x 8 m.
            margin: (0.85, 0.60),
        }
    }
}

impl WarehouseParams {
    fn validate(&self) -> Result<(), SceneError> {
        for (v, name) in [
            (self.rack_w, "rack_w"),
            (self.rack_d, "rack_d"),
            (self.rack_h, "rack_h"),
            (self.ground_clearance, "ground_clearance"),
            (self.intra_gap, "intra_gap"),
            (self.corridor_w, "corridor_w"),
            (self.floor_thickness, "floor_thickness"),
        ] {
            if v <= 0.0 {
                return Err(SceneError::NonPositiveDimension(name));
            }
        }
        if self.margin.0 < 0.0 || self.margin.1 < 0.0 {
            return Err(SceneError::NonPositiveDimension("margin"));
        }
        if self.cluster_rows == 0
            || self.cluster_cols == 0
            || self.cluster_grid.0 == 0
            || self.cluster_grid.1 == 0
        {
            return Err(SceneError::EmptyCluster);
        }
        Ok(())
    }

    /// Cluster footprint (x, y).
    pub fn cluster_footprint(&self) -> (f64, f64) {
        (
            self.cluster_cols as f64 * self.rack_w + (self.cluster_cols - 1) as f64 * self.intra_gap,
            self.cluster_rows as f64 * self.rack_d + (self.cluster_rows - 1) as f64 * self.intra_gap,
        )
    }

    /// Full rack field extent (x, y), clusters plus corridors.
    pub fn field_extent(&self) -> (f64, f64) {
        let (cw, cd) = self.cluster_footprint();
        (
            self.cluster_grid.0 as f64 * cw + (self.cluster_grid.0 - 1) as f64 * self.corridor_w,
            self.cluster_grid.1 as f64 * cd + (self.cluster_grid.1 - 1) as f64 * self.corridor_w,
        )
    }
}

/// Build the warehouse scene. Box order is deterministic: cluster rows
/// (y), then cluster columns (x), then rack rows, then rack columns.
pub fn build_warehouse(params: &WarehouseParams) -> Result<Scene, SceneError> {
    params.validate()?;

    let (cw, cd) = params.cluster_footprint();
    let (fx, fy) = params.field_extent();
    let bounds = Bounds::new(
        Vec3::ZERO,
        Vec3::new(
            fx + 2.0 * params.margin.0,
            fy + 2.0 * params.margin.1,
            params.ground_clearance + params.rack_h,
        ),
    );

    let materials = vec![params.rack_material, params.floor_material];
    let mut boxes = Vec::new();
    for cy in 0..params.cluster_grid.1 {
        for cx in 0..params.cluster_grid.0 {
            let cluster_x = params.margin.0 + cx as f64 * (cw + params.corridor_w);
            let cluster_y = params.margin.1 + cy as f64 * (cd + params.corridor_w);
            for row in 0..params.cluster_rows {
                for col in 0..params.cluster_cols {
                    let x = cluster_x + col as f64 * (params.rack_w + params.intra_gap);
                    let y = cluster_y + row as f64 * (params.rack_d + params.intra_gap);
                    let min = Vec3::new(x, y, params.ground_clearance);
                    let max = Vec3::new(
                        x + params.rack_w,
                        y + params.rack_d,
                        params.ground_clearance + params.rack_h,
                    );
                    let idx = boxes.len();
                    boxes.push((Aabb::new(min, max, box_surface_base(idx)), 0usize));
                }
            }
        }
    }

    let floor = Some(Floor { material: 1, thickness: params.floor_thickness });
    Ok(Scene::new(materials, boxes, floor, bounds))
}

/// Scene consistency diagnostics. An empty list means the scene is valid.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    BoxesOverlap { a: usize, b: usize },
    BoxBelowFloor { index: usize },
    UnreferencedMaterial { index: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::BoxesOverlap { a, b } => write!(f, "boxes {a} and {b} overlap"),
            Diagnostic::BoxBelowFloor { index } => {
                write!(f, "box {index} extends below the floor plane")
            }
            Diagnostic::UnreferencedMaterial { index } => {
                write!(f, "material {index} is not referenced by any surface")
            }
        }
    }
}

pub fn validate_scene(scene: &Scene) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let boxes = scene.boxes();
    for a in 0..boxes.len() {
        for b in (a + 1)..boxes.len() {
            if boxes[a].overlaps(&boxes[b]) {
                out.push(Diagnostic::BoxesOverlap { a, b });
            }
        }
    }
    for (i, bx) in boxes.iter().enumerate() {
        if bx.min.z < 0.0 {
            out.push(Diagnostic::BoxBelowFloor { index: i });
        }
    }
    let mut used = vec![false; scene.materials().len()];
    for i in 0..boxes.len() {
        used[scene.box_material_index(i)] = true;
    }
    if let Some(f) = scene.floor() {
        used[f.material] = true;
    }
    for (i, u) in used.iter().enumerate() {
        if !u {
            out.push(Diagnostic::UnreferencedMaterial { index: i });
        }
    }
    out
}

impl Scene {
    pub fn box_material_index(&self, box_index: usize) -> usize {
        self.box_material[box_index]
    }
}

// ---------------------------------------------------------------------------
// JSON scene configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum MaterialConfig {
    Pec {
        #[serde(default)]
        roughness_dh: f64,
    },
    Dielectric {
        eps_r: f64,
        sigma: f64,
        #[serde(default)]
        roughness_dh: f64,
    },
}

impl MaterialConfig {
    fn into_material(self) -> Result<Material, SceneError> {
        match self {
            MaterialConfig::Pec { roughness_dh } => {
                if roughness_dh < 0.0 {
                    return Err(SceneError::InvalidMaterial("roughness_dh must be >= 0"));
                }
                Ok(Material::pec().with_roughness(roughness_dh))
            }
            MaterialConfig::Dielectric { eps_r, sigma, roughness_dh } => {
                if roughness_dh < 0.0 {
                    return Err(SceneError::InvalidMaterial("roughness_dh must be >= 0"));
                }
                Ok(Material::dielectric(eps_r, sigma)?.with_roughness(roughness_dh))
            }
        }
    }
}

/// JSON mirror of [`WarehouseParams`]; every field optional, missing
/// fields fall back to the `preset` (only `"paper-default"` is defined,
/// and it is also the default when no preset is named). Unknown keys are
/// rejected.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    preset: Option<String>,
    rack_w: Option<f64>,
    rack_d: Option<f64>,
    rack_h: Option<f64>,
    ground_clearance: Option<f64>,
    intra_gap: Option<f64>,
    cluster_rows: Option<u32>,
    cluster_cols: Option<u32>,
    corridor_w: Option<f64>,
    cluster_grid: Option<(u32, u32)>,
    rack_material: Option<MaterialConfig>,
    floor_material: Option<MaterialConfig>,
    floor_thickness: Option<f64>,
    margin: Option<(f64, f64)>,
}

impl SceneConfig {
    pub fn into_params(self) -> Result<WarehouseParams, SceneError> {
        match self.preset.as_deref() {
            None | Some("paper-default") => {}
            Some(other) => return Err(SceneError::UnknownPreset(other.to_string())),
        }
        let mut p = WarehouseParams::default();
        if let Some(v) = self.rack_w {
            p.rack_w = v;
        }
        if let Some(v) = self.rack_d {
            p.rack_d = v;
        }
        if let Some(v) = self.rack_h {
            p.rack_h = v;
        }
        if let Some(v) = self.ground_clearance {
            p.ground_clearance = v;
        }
        if let Some(v) = self.intra_gap {
            p.intra_gap = v;
        }
        if let Some(v) = self.cluster_rows {
            p.cluster_rows = v;
        }
        if let Some(v) = self.cluster_cols {
            p.cluster_cols = v;
        }
        if let Some(v) = self.corridor_w {
            p.corridor_w = v;
        }
        if let Some(v) = self.cluster_grid {
            p.cluster_grid = v;
        }
        if let Some(m) = self.rack_material {
            p.rack_material = m.into_material()?;
        }
        if let Some(m) = self.floor_material {
            p.floor_material = m.into_material()?;
        }
        if let Some(v) = self.floor_thickness {
            p.floor_thickness = v;
        }
        if let Some(v) = self.margin {
            p.margin = v;
        }
        Ok(p)
    }
}

/// Parse a scene config document and build the scene.
pub fn scene_from_json(text: &str) -> Result<Scene, SceneError> {
    let config: SceneConfig = serde_json::from_str(text)?;
    build_warehouse(&config.into_params()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_warehouse_has_56_racks_and_floor() {
        let scene = build_warehouse(&WarehouseParams::default()).unwrap();
        assert_eq!(scene.boxes().len(), 56);
        assert!(scene.floor().is_some());
        assert_eq!(scene.floor().unwrap().thickness, 0.30);
    }

    #[test]
    fn default_bounds_are_22_by_8() {
        let scene = build_warehouse(&WarehouseParams::default()).unwrap();
        let b = scene.bounds();
        assert!((b.max.x - b.min.x - 22.0).abs() < 1e-12);
        assert!((b.max.y - b.min.y - 8.0).abs() < 1e-12);
    }

    #[test]
    fn single_rack_layout() {
        let params = WarehouseParams {
            cluster_rows: 1,
            cluster_cols: 1,
            cluster_grid: (1, 1),
            ..WarehouseParams::default()
        };
        let scene = build_warehouse(&params).unwrap();
        assert_eq!(scene.boxes().len(), 1);
        let bx = scene.boxes()[0];
        assert!((bx.min.z - 0.30).abs() < 1e-15);
        assert!((bx.max.z - 2.30).abs() < 1e-15);
    }

    #[test]
    fn cluster_footprint_arithmetic() {
        let p = WarehouseParams::default();
        let (cw, cd) = p.cluster_footprint();
        assert!((cw - 9.40).abs() < 1e-12);
        assert!((cd - 2.65).abs() < 1e-12);
    }

    #[test]
    fn rack_z_extent_and_gaps_exact() {
        let p = WarehouseParams::default();
        let scene = build_warehouse(&p).unwrap();
        for bx in scene.boxes() {
            assert_eq!(bx.min.z, 0.30);
            assert_eq!(bx.max.z, 2.30);
        }
        // Adjacent racks inside the first cluster: gap along x is 5 cm.
        let a = scene.boxes()[0];
        let b = scene.boxes()[1];
        assert!((b.min.x - a.max.x - p.intra_gap).abs() < 1e-12);
        // Cluster separation along x equals the corridor width.
        let last_in_row = scene.boxes()[p.cluster_cols as usize - 1];
        let first_next_cluster = scene.boxes()[(p.cluster_rows * p.cluster_cols) as usize];
        assert!((first_next_cluster.min.x - last_in_row.max.x - p.corridor_w).abs() < 1e-12);
    }

    #[test]
    fn build_is_deterministic() {
        let a = build_warehouse(&WarehouseParams::default()).unwrap();
        let b = build_warehouse(&WarehouseParams::default()).unwrap();
        assert_eq!(a.boxes(), b.boxes());
    }

    #[test]
    fn rejects_non_positive_dimension() {
        let params = WarehouseParams { rack_w: 0.0, ..WarehouseParams::default() };
        assert!(build_warehouse(&params).is_err());
    }

    #[test]
    fn default_warehouse_validates_clean() {
        let scene = build_warehouse(&WarehouseParams::default()).unwrap();
        assert!(validate_scene(&scene).is_empty());
    }

    #[test]
    fn overlap_diagnostic() {
        let m = vec![Material::pec()];
        let bx = |i| Aabb::new(Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 1.0, 1.0), box_surface_base(i));
        let scene = Scene::new(
            m,
            vec![(bx(0), 0), (bx(1), 0)],
            None,
            Bounds::new(Vec3::ZERO, Vec3::new(2.0, 2.0, 2.0)),
        );
        let diags = validate_scene(&scene);
        assert_eq!(diags, vec![Diagnostic::BoxesOverlap { a: 0, b: 1 }]);
    }

    #[test]
    fn below_floor_diagnostic() {
        let m = vec![Material::pec()];
        let scene = Scene::new(
            m,
            vec![(
                Aabb::new(Vec3::new(0.0, 0.0, -1.0), Vec3::new(1.0, 1.0, 1.0), 1),
                0,
            )],
            None,
            Bounds::new(Vec3::new(0.0, 0.0, -1.0), Vec3::new(2.0, 2.0, 2.0)),
        );
        assert_eq!(validate_scene(&scene), vec![Diagnostic::BoxBelowFloor { index: 0 }]);
    }

    #[test]
    fn unreferenced_material_diagnostic() {
        let scene = Scene::new(
            vec![Material::pec(), Material::concrete()],
            vec![(Aabb::new(Vec3::ZERO, Vec3::new(1.0, 1.0, 1.0), 1), 0)],
            None,
            Bounds::new(Vec3::ZERO, Vec3::new(2.0, 2.0, 2.0)),
        );
        assert_eq!(validate_scene(&scene), vec![Diagnostic::UnreferencedMaterial { index: 1 }]);
    }

    #[test]
    fn segment_visibility_through_rack_blocked() {
        let scene = build_warehouse(&WarehouseParams::default()).unwrap();
        let bx = scene.boxes()[0];
        let mid = (bx.min + bx.max) * 0.5;
        let a = Vec3::new(bx.min.x - 1.0, mid.y, mid.z);
        let b = Vec3::new(bx.max.x + 1.0, mid.y, mid.z);
        assert!(!scene.segment_clear(a, b));
        // Above the racks the same horizontal segment is clear.
        let a_hi = Vec3::new(a.x, a.y, 3.0);
        let b_hi = Vec3::new(b.x, b.y, 3.0);
        assert!(scene.segment_clear(a_hi, b_hi));
    }

    #[test]
    fn roughness_override_spares_floor() {
        let scene = build_warehouse(&WarehouseParams::default()).unwrap();
        let rough = scene.with_box_roughness(0.05);
        let rack_mat = rough.material_for_surface(box_surface_base(0)).unwrap();
        assert_eq!(rack_mat.roughness_dh, 0.05);
        let floor_mat = rough.material_for_surface(FLOOR_SURFACE_ID).unwrap();
        assert_eq!(floor_mat.roughness_dh, 0.0);
    }

    #[test]
    fn config_preset_shorthand() {
        let scene = scene_from_json(r#"{ "preset": "paper-default" }"#).unwrap();
        assert_eq!(scene.boxes().len(), 56);
    }

    #[test]
    fn config_overrides_and_unknown_keys() {
        let scene = scene_from_json(
            r#"{ "preset": "paper-default", "cluster_grid": [1, 1], "rack_material": { "kind": "pec", "roughness_dh": 0.05 } }"#,
        )
        .unwrap();
        assert_eq!(scene.boxes().len(), 14);
        assert_eq!(scene.material_for_surface(1).unwrap().roughness_dh, 0.05);

        assert!(scene_from_json(r#"{ "rack_width": 2.0 }"#).is_err());
        assert!(scene_from_json(r#"{ "preset": "other" }"#).is_err());
    }
}
