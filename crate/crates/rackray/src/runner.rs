//! Scenario orchestration: build the scene, place the antennas, sweep the
//! receiver grid, and emit coverage maps.
//!
//! Cell computations are independent; with the `parallel` feature they fan
//! out over a rayon pool, and results are assembled by cell index, so the
//! output bytes are identical for any worker count. Path lists are
//! canonically sorted before summation, which keeps per-cell floating
//! point bit-stable too.

use std::io::{self, Write};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use thiserror::Error;

use crate::antenna::{Antenna, Polarization};
use crate::field::{band_averaged_power, path_loss, LinkBudget, Waveform};
use crate::geom::Vec3;
use crate::scene::{build_warehouse, Scene, WarehouseParams};
use crate::tracer::{trace_point, LaunchTree, TraceBudget};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("transmitter at {0:?} is inside a solid box")]
    TxInsideSolid(Vec3),
    #[error("transmitter at {0:?} is outside the traced region around the scene bounds")]
    TxOutsideScene(Vec3),
    #[error("invalid scenario: {0}")]
    InvalidScenario(&'static str),
}

/// One simulation setup: transmitter placement, polarizations, rack
/// roughness and receiver grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub tx_position: Vec3,
    pub tx_polarization: Polarization,
    pub rx_polarization: Polarization,
    /// Rack-wall roughness standard deviation, m (0 = flat).
    pub roughness_dh: f64,
    /// Receiver grid height, m.
    pub grid_height: f64,
    pub grid_spacing: f64,
}

impl Scenario {
    pub fn custom(tx_position: Vec3, tx_pol: Polarization, rx_pol: Polarization) -> Self {
        Scenario {
            name: "custom".to_string(),
            tx_position,
            tx_polarization: tx_pol,
            rx_polarization: rx_pol,
            roughness_dh: 0.0,
            grid_height: 0.2,
            grid_spacing: 0.25,
        }
    }

    /// Transmitter height above the floor, m.
    pub fn tx_height(&self) -> f64 {
        self.tx_position.z
    }
}

/// The ten named scenario presets over the default warehouse: two TX
/// positions (warehouse center; 2 m before the leftmost cluster on its
/// centerline), standing (1.5 m) and lying (0.2 m) TX heights, the
/// polarization pairings, and the 5 cm rough-rack variants.
pub fn scenario_presets() -> Vec<Scenario> {
    let p = WarehouseParams::default();
    let (fx, fy) = p.field_extent();
    let center_x = p.margin.0 + fx / 2.0;
    let center_y = p.margin.1 + fy / 2.0;
    let before_left_x = p.margin.0 - 2.0;
    let before_left_y = p.margin.1 + p.cluster_footprint().1 / 2.0;

    let preset = |name: &str, pos: Vec3, tx_pol, rx_pol, dh: f64| Scenario {
        name: name.to_string(),
        tx_position: pos,
        tx_polarization: tx_pol,
        rx_polarization: rx_pol,
        roughness_dh: dh,
        grid_height: 0.2,
        grid_spacing: 0.25,
    };

    use Polarization::{HorizontalX, HorizontalY, Vertical};
    let center = |h: f64| Vec3::new(center_x, center_y, h);
    let before_left = |h: f64| Vec3::new(before_left_x, before_left_y, h);
    vec![
        preset("fig4", center(1.5), Vertical, Vertical, 0.0),
        preset("fig5", before_left(1.5), Vertical, Vertical, 0.0),
        preset("fig6", center(1.5), HorizontalY, HorizontalY, 0.0),
        preset("fig7", center(1.5), HorizontalY, Vertical, 0.0),
        preset("fig8", center(1.5), Vertical, HorizontalY, 0.0),
        preset("fig9", center(0.2), Vertical, Vertical, 0.0),
        preset("fig10", center(0.2), HorizontalX, Vertical, 0.0),
        preset("fig11", center(0.2), HorizontalY, Vertical, 0.0),
        preset("fig12", center(1.5), Vertical, Vertical, 0.05),
        preset("fig13", before_left(1.5), Vertical, Vertical, 0.05),
    ]
}

pub fn scenario_preset(name: &str) -> Option<Scenario> {
    scenario_presets().into_iter().find(|s| s.name == name)
}

/// One receiver cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    /// Grid point inside a solid box; no receiver can sit here.
    Excluded,
    Value { power_dbm: f64, path_count: u32, safe: bool },
}

/// Rectangular receiver lattice with computed received power.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageGrid {
    pub origin: (f64, f64),
    pub spacing: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, x fastest.
    pub cells: Vec<Cell>,
}

impl CoverageGrid {
    /// Cell counts for an extent at a spacing (ceil per axis).
    pub fn layout(extent: (f64, f64), spacing: f64) -> (usize, usize) {
        ((extent.0 / spacing).ceil() as usize, (extent.1 / spacing).ceil() as usize)
    }

    pub fn cell(&self, ix: usize, iy: usize) -> Cell {
        self.cells[iy * self.nx + ix]
    }

    /// Center position of a cell.
    pub fn position(&self, ix: usize, iy: usize) -> Vec3 {
        Vec3::new(
            self.origin.0 + (ix as f64 + 0.5) * self.spacing,
            self.origin.1 + (iy as f64 + 0.5) * self.spacing,
            self.height,
        )
    }

    pub fn indexed_cells(&self) -> impl Iterator<Item = (usize, usize, Cell)> + '_ {
        (0..self.ny).flat_map(move |iy| (0..self.nx).map(move |ix| (ix, iy, self.cell(ix, iy))))
    }
}

/// Sweep the receiver grid for one scenario. Uses the rayon pool when the
/// `parallel` feature is enabled; output is identical either way.
pub fn run_scenario(
    scene: &Scene,
    scenario: &Scenario,
    budget: &TraceBudget,
    waveform: &Waveform,
    link: &LinkBudget,
) -> Result<CoverageGrid, RunError> {
    run_impl(scene, scenario, budget, waveform, link, cfg!(feature = "parallel"))
}

/// Forced single-threaded sweep, independent of the feature set.
pub fn run_scenario_sequential(
    scene: &Scene,
    scenario: &Scenario,
    budget: &TraceBudget,
    waveform: &Waveform,
    link: &LinkBudget,
) -> Result<CoverageGrid, RunError> {
    run_impl(scene, scenario, budget, waveform, link, false)
}

fn run_impl(
    scene: &Scene,
    scenario: &Scenario,
    budget: &TraceBudget,
    waveform: &Waveform,
    link: &LinkBudget,
    parallel: bool,
) -> Result<CoverageGrid, RunError> {
    if scenario.grid_spacing <= 0.0 {
        return Err(RunError::InvalidScenario("grid_spacing must be positive"));
    }
    if scene.point_in_solid(scenario.tx_position) {
        return Err(RunError::TxInsideSolid(scenario.tx_position));
    }
    // The TX may stand a little outside the observation bounds (some
    // presets do), but not beyond the apron where rays are traced.
    if !scene.apron().contains(scenario.tx_position) {
        return Err(RunError::TxOutsideScene(scenario.tx_position));
    }

    let scene = scene.with_box_roughness(scenario.roughness_dh);
    let mut tx = Antenna::with_polarization(scenario.tx_position, scenario.tx_polarization);
    tx.tx_power_dbm = link.tx_power_dbm;

    let bounds = scene.bounds();
    let extent = (bounds.max.x - bounds.min.x, bounds.max.y - bounds.min.y);
    let (nx, ny) = CoverageGrid::layout(extent, scenario.grid_spacing);
    let grid_meta = CoverageGrid {
        origin: (bounds.min.x, bounds.min.y),
        spacing: scenario.grid_spacing,
        height: scenario.grid_height,
        nx,
        ny,
        cells: Vec::new(),
    };

    let tree = LaunchTree::build(&scene, scenario.tx_position, budget);

    let compute = |index: usize| -> Cell {
        let (ix, iy) = (index % nx, index / nx);
        let pos = grid_meta.position(ix, iy);
        if scene.point_in_solid(pos) {
            return Cell::Excluded;
        }
        let paths = trace_point(&scene, &tree, pos, budget);
        let mut rx = Antenna::with_polarization(pos, scenario.rx_polarization);
        rx.sensitivity_dbm = link.sensitivity_dbm;
        let power = band_averaged_power(&paths, &tx, &rx, waveform, &scene);
        let (_, safe) = path_loss(power, link);
        Cell::Value { power_dbm: power, path_count: paths.len() as u32, safe }
    };

    let cells: Vec<Cell> = if parallel {
        #[cfg(feature = "parallel")]
        {
            (0..nx * ny).into_par_iter().map(compute).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..nx * ny).map(compute).collect()
        }
    } else {
        (0..nx * ny).map(compute).collect()
    };

    Ok(CoverageGrid { cells, ..grid_meta })
}

/// CSV export: header, one row per non-excluded cell, row-major with x
/// fastest, power with two decimals, the below-floor marker as `-inf`.
pub fn write_grid_csv(grid: &CoverageGrid, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "x_m,y_m,z_m,power_dbm,path_count,safe")?;
    for (ix, iy, cell) in grid.indexed_cells() {
        let Cell::Value { power_dbm, path_count, safe } = cell else {
            continue;
        };
        let pos = grid.position(ix, iy);
        let power = if power_dbm.is_finite() {
            format!("{power_dbm:.2}")
        } else {
            "-inf".to_string()
        };
        writeln!(out, "{:.3},{:.3},{:.3},{},{},{}", pos.x, pos.y, pos.z, power, path_count, safe)?;
    }
    Ok(())
}

/// Binary portable pixmap (P6) heatmap: one pixel per cell, blue (min)
/// through green to red (max), excluded cells black, unreachable cells
/// dark gray. Pixel (0, 0) is the cell at the grid origin.
pub fn write_heatmap(
    grid: &CoverageGrid,
    out: &mut impl Write,
    scale: (f64, f64),
) -> io::Result<()> {
    assert!(scale.0 < scale.1, "scale must be (min_dbm, max_dbm) with min < max");
    write!(out, "P6\n{} {}\n255\n", grid.nx, grid.ny)?;
    let mut row = Vec::with_capacity(grid.nx * 3);
    for iy in 0..grid.ny {
        row.clear();
        for ix in 0..grid.nx {
            let rgb = match grid.cell(ix, iy) {
                Cell::Excluded => [0, 0, 0],
                Cell::Value { power_dbm, .. } if !power_dbm.is_finite() => [64, 64, 64],
                Cell::Value { power_dbm, .. } => {
                    let t = ((power_dbm - scale.0) / (scale.1 - scale.0)).clamp(0.0, 1.0);
                    colormap(t)
                }
            };
            row.extend_from_slice(&rgb);
        }
        out.write_all(&row)?;
    }
    Ok(())
}

fn colormap(t: f64) -> [u8; 3] {
    let lerp = |a: f64, b: f64, s: f64| (a + (b - a) * s).round() as u8;
    if t < 0.5 {
        let s = t * 2.0;
        [0, lerp(0.0, 255.0, s), lerp(255.0, 0.0, s)]
    } else {
        let s = (t - 0.5) * 2.0;
        [lerp(0.0, 255.0, s), lerp(255.0, 0.0, s), 0]
    }
}

/// Convenience: the scene every preset runs against.
pub fn default_scene() -> Scene {
    build_warehouse(&WarehouseParams::default()).expect("default params are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Aabb;
    use crate::scene::{box_surface_base, Bounds, Material};

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    fn small_budget() -> TraceBudget {
        TraceBudget { launch_rays: 5_000, max_reflections: 2, ..TraceBudget::default() }
    }

    #[test]
    fn presets_match_their_captions() {
        use Polarization::{HorizontalX, HorizontalY, Vertical};
        let presets = scenario_presets();
        assert_eq!(presets.len(), 10);
        let by_name = |n: &str| presets.iter().find(|s| s.name == n).unwrap();

        // (name, center?, height, tx pol, rx pol, roughness)
        let table: [(&str, bool, f64, Polarization, Polarization, f64); 10] = [
            ("fig4", true, 1.5, Vertical, Vertical, 0.0),
            ("fig5", false, 1.5, Vertical, Vertical, 0.0),
            ("fig6", true, 1.5, HorizontalY, HorizontalY, 0.0),
            ("fig7", true, 1.5, HorizontalY, Vertical, 0.0),
            ("fig8", true, 1.5, Vertical, HorizontalY, 0.0),
            ("fig9", true, 0.2, Vertical, Vertical, 0.0),
            ("fig10", true, 0.2, HorizontalX, Vertical, 0.0),
            ("fig11", true, 0.2, HorizontalY, Vertical, 0.0),
            ("fig12", true, 1.5, Vertical, Vertical, 0.05),
            ("fig13", false, 1.5, Vertical, Vertical, 0.05),
        ];
        for (name, at_center, height, tx_pol, rx_pol, dh) in table {
            let s = by_name(name);
            assert_eq!(s.tx_height(), height, "{name}");
            assert_eq!(s.tx_polarization, tx_pol, "{name}");
            assert_eq!(s.rx_polarization, rx_pol, "{name}");
            assert_eq!(s.roughness_dh, dh, "{name}");
            assert_eq!(s.grid_height, 0.2, "{name}");
            if at_center {
                assert_eq!((s.tx_position.x, s.tx_position.y), (11.0, 4.0), "{name}");
            } else {
                assert!((s.tx_position.x - -1.15).abs() < 1e-12, "{name}");
                assert!((s.tx_position.y - 1.925).abs() < 1e-12, "{name}");
            }
        }
    }

    #[test]
    fn grid_layout_matches_extent_arithmetic() {
        assert_eq!(CoverageGrid::layout((22.0, 8.0), 0.25), (88, 32));
    }

    #[test]
    fn tx_inside_solid_is_configuration_error() {
        let scene = Scene::new(
            vec![Material::pec()],
            vec![(Aabb::new(v(0.0, 0.0, 0.0), v(2.0, 2.0, 2.0), box_surface_base(0)), 0)],
            None,
            Bounds::new(v(0.0, 0.0, 0.0), v(4.0, 4.0, 3.0)),
        );
        let scenario = Scenario::custom(
            v(1.0, 1.0, 1.0),
            Polarization::Vertical,
            Polarization::Vertical,
        );
        let err = run_scenario(
            &scene,
            &scenario,
            &small_budget(),
            &Waveform::default(),
            &LinkBudget::default(),
        );
        assert!(matches!(err, Err(RunError::TxInsideSolid(_))));
    }

    #[test]
    fn tx_far_outside_bounds_is_configuration_error() {
        let scene = Scene::free_space(Bounds::new(v(0.0, 0.0, 0.0), v(4.0, 4.0, 3.0)));
        let scenario = Scenario::custom(
            v(-10.0, 2.0, 1.5),
            Polarization::Vertical,
            Polarization::Vertical,
        );
        let err = run_scenario(
            &scene,
            &scenario,
            &small_budget(),
            &Waveform::default(),
            &LinkBudget::default(),
        );
        assert!(matches!(err, Err(RunError::TxOutsideScene(_))));
        // Slightly outside the bounds is allowed (presets rely on it).
        let near = Scenario::custom(
            v(-1.2, 2.0, 1.5),
            Polarization::Vertical,
            Polarization::Vertical,
        );
        assert!(run_scenario(
            &scene,
            &near,
            &small_budget(),
            &Waveform::default(),
            &LinkBudget::default(),
        )
        .is_ok());
    }

    #[test]
    fn free_space_power_decays_with_distance() {
        let scene = Scene::free_space(Bounds::new(v(0.0, 0.0, 0.0), v(8.0, 2.0, 3.0)));
        let mut scenario = Scenario::custom(
            v(0.5, 1.0, 0.2),
            Polarization::Vertical,
            Polarization::Vertical,
        );
        scenario.grid_spacing = 0.5;
        let grid = run_scenario(
            &scene,
            &scenario,
            &small_budget(),
            &Waveform::narrowband(3.994e9),
            &LinkBudget::default(),
        )
        .unwrap();
        // Walk away from the TX along +x on the TX row: monotone decay.
        let iy = 1;
        let mut last = f64::INFINITY;
        for ix in 1..grid.nx {
            let Cell::Value { power_dbm, .. } = grid.cell(ix, iy) else {
                panic!("free space has no excluded cells")
            };
            assert!(power_dbm < last, "ix {ix}: {power_dbm} !< {last}");
            last = power_dbm;
        }
    }

    #[test]
    fn csv_layout_and_exclusions() {
        // 1 m x 0.5 m bounds at 0.25 m spacing: 4 x 2 cells; one box
        // swallows the two rightmost columns at grid height.
        let scene = Scene::new(
            vec![Material::pec()],
            vec![(Aabb::new(v(0.5, 0.0, 0.0), v(1.0, 0.5, 1.0), box_surface_base(0)), 0)],
            None,
            Bounds::new(v(0.0, 0.0, 0.0), v(1.0, 0.5, 1.0)),
        );
        let mut scenario = Scenario::custom(
            v(0.25, 0.25, 0.9),
            Polarization::Vertical,
            Polarization::Vertical,
        );
        scenario.grid_height = 0.2;
        let grid = run_scenario(
            &scene,
            &scenario,
            &small_budget(),
            &Waveform::narrowband(3.994e9),
            &LinkBudget::default(),
        )
        .unwrap();
        assert_eq!((grid.nx, grid.ny), (4, 2));

        let mut csv = Vec::new();
        write_grid_csv(&grid, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x_m,y_m,z_m,power_dbm,path_count,safe");
        // 8 cells minus 4 excluded (x >= 0.5 columns).
        assert_eq!(lines.len(), 1 + 4);
        assert!(lines[1].starts_with("0.125,0.125,0.200,"));
        // Re-running is byte-identical.
        let grid2 = run_scenario(
            &scene,
            &scenario,
            &small_budget(),
            &Waveform::narrowband(3.994e9),
            &LinkBudget::default(),
        )
        .unwrap();
        let mut csv2 = Vec::new();
        write_grid_csv(&grid2, &mut csv2).unwrap();
        assert_eq!(text.as_bytes(), csv2.as_slice());
    }

    #[test]
    fn heatmap_colors_and_dimensions() {
        let uniform = |cell: Cell, nx: usize, ny: usize| CoverageGrid {
            origin: (0.0, 0.0),
            spacing: 0.25,
            height: 0.2,
            nx,
            ny,
            cells: vec![cell; nx * ny],
        };
        let hot = uniform(
            Cell::Value { power_dbm: -40.0, path_count: 3, safe: true },
            88,
            32,
        );
        let mut ppm = Vec::new();
        write_heatmap(&hot, &mut ppm, (-110.0, -40.0)).unwrap();
        let header = b"P6\n88 32\n255\n";
        assert_eq!(&ppm[..header.len()], header);
        assert_eq!(ppm.len(), header.len() + 88 * 32 * 3);
        assert_eq!(&ppm[header.len()..header.len() + 3], &[255, 0, 0]);

        let dark = uniform(Cell::Excluded, 2, 2);
        let mut ppm = Vec::new();
        write_heatmap(&dark, &mut ppm, (-110.0, -40.0)).unwrap();
        assert!(ppm.ends_with(&[0u8; 12]));

        let unreachable = uniform(
            Cell::Value { power_dbm: f64::NEG_INFINITY, path_count: 0, safe: false },
            1,
            1,
        );
        let mut ppm = Vec::new();
        write_heatmap(&unreachable, &mut ppm, (-110.0, -40.0)).unwrap();
        assert!(ppm.ends_with(&[64, 64, 64]));
    }

    #[test]
    fn sequential_matches_default_run() {
        let scene = Scene::open_ground(
            Material::concrete(),
            0.3,
            Bounds::new(v(0.0, 0.0, 0.0), v(3.0, 1.0, 3.0)),
        );
        let mut scenario = Scenario::custom(
            v(0.3, 0.5, 1.5),
            Polarization::Vertical,
            Polarization::Vertical,
        );
        scenario.grid_spacing = 0.5;
        let a = run_scenario(
            &scene,
            &scenario,
            &small_budget(),
            &Waveform::default(),
            &LinkBudget::default(),
        )
        .unwrap();
        let b = run_scenario_sequential(
            &scene,
            &scenario,
            &small_budget(),
            &Waveform::default(),
            &LinkBudget::default(),
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
