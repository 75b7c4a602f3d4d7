//! Raster and vector rendering of sweep grids. Both backends write the same
//! pixels for the same grid, byte for byte, run after run.

use std::fmt::Write as _;
use std::path::Path;

use crate::equilibria::ScenarioLabel;
use crate::error::{Error, Result};
use crate::sweep::{CellRecord, RegionGrid};

pub const COLOR_DISEASE_FREE: [u8; 3] = [255, 215, 0];
/// endemic with the opportunistic layer absent
pub const COLOR_ENDEMIC_SINGLE: [u8; 3] = [255, 140, 0];
/// endemic with a coinfected pool at the fast equilibrium
pub const COLOR_ENDEMIC_COINFECTED: [u8; 3] = [200, 30, 30];
pub const COLOR_BISTABLE: [u8; 3] = [128, 128, 128];
pub const COLOR_EXTINCTION: [u8; 3] = [30, 30, 30];
pub const COLOR_TANGENT: [u8; 3] = [60, 80, 220];
pub const COLOR_BOUNDARY: [u8; 3] = [255, 255, 255];

/// Display color of one cell. Endemic cells split by whether coinfection is
/// active there.
pub fn cell_color(cell: &CellRecord) -> [u8; 3] {
    match cell.label {
        ScenarioLabel::Extinction => COLOR_EXTINCTION,
        ScenarioLabel::DiseaseFreeGlobal => COLOR_DISEASE_FREE,
        ScenarioLabel::EndemicGlobal | ScenarioLabel::EndemicLocal => {
            if cell.nu_star > 0.0 {
                COLOR_ENDEMIC_COINFECTED
            } else {
                COLOR_ENDEMIC_SINGLE
            }
        }
        ScenarioLabel::Bistable => COLOR_BISTABLE,
        ScenarioLabel::DegenerateTangent => COLOR_TANGENT,
        ScenarioLabel::Boundary => COLOR_BOUNDARY,
    }
}

/// Binary PPM (P6), one pixel per cell, top row = highest y.
pub fn render_ppm(grid: &RegionGrid) -> Vec<u8> {
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    let mut out = format!("P6\n{nx} {ny}\n255\n").into_bytes();
    out.reserve(3 * nx * ny);
    for iy in (0..ny).rev() {
        for ix in 0..nx {
            out.extend_from_slice(&cell_color(grid.cell(ix, iy)));
        }
    }
    out
}

fn css(color: [u8; 3]) -> String {
    format!("#{:02x}{:02x}{:02x}", color[0], color[1], color[2])
}

type CellPredicate = Box<dyn Fn(&CellRecord) -> bool>;

/// Legend entries in canonical order, restricted to what the grid contains.
fn legend_entries(grid: &RegionGrid) -> Vec<(&'static str, [u8; 3])> {
    let all: [(&str, [u8; 3], CellPredicate); 7] = [
        (
            "disease-free",
            COLOR_DISEASE_FREE,
            Box::new(|c: &CellRecord| c.label == ScenarioLabel::DiseaseFreeGlobal),
        ),
        (
            "endemic",
            COLOR_ENDEMIC_SINGLE,
            Box::new(|c: &CellRecord| {
                matches!(
                    c.label,
                    ScenarioLabel::EndemicGlobal | ScenarioLabel::EndemicLocal
                ) && c.nu_star == 0.0
            }),
        ),
        (
            "endemic, coinfected",
            COLOR_ENDEMIC_COINFECTED,
            Box::new(|c: &CellRecord| {
                matches!(
                    c.label,
                    ScenarioLabel::EndemicGlobal | ScenarioLabel::EndemicLocal
                ) && c.nu_star > 0.0
            }),
        ),
        (
            "bistable",
            COLOR_BISTABLE,
            Box::new(|c: &CellRecord| c.label == ScenarioLabel::Bistable),
        ),
        (
            "extinction",
            COLOR_EXTINCTION,
            Box::new(|c: &CellRecord| c.label == ScenarioLabel::Extinction),
        ),
        (
            "tangency",
            COLOR_TANGENT,
            Box::new(|c: &CellRecord| c.label == ScenarioLabel::DegenerateTangent),
        ),
        (
            "threshold boundary",
            COLOR_BOUNDARY,
            Box::new(|c: &CellRecord| c.label == ScenarioLabel::Boundary),
        ),
    ];
    all.into_iter()
        .filter(|(_, _, pred)| grid.cells.iter().any(pred))
        .map(|(name, color, _)| (name, color))
        .collect()
}

/// SVG with horizontal runs of equal color merged into single rectangles,
/// plus axes and a legend.
pub fn render_svg(grid: &RegionGrid) -> String {
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    const ML: f64 = 70.0; // margins
    const MT: f64 = 20.0;
    const MB: f64 = 55.0;
    const PLOT: f64 = 560.0;
    const LEGEND_W: f64 = 185.0;
    let cw = PLOT / nx as f64;
    let ch = PLOT / ny as f64;
    let width = ML + PLOT + 15.0 + LEGEND_W;
    let height = MT + PLOT + MB;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect width="{width:.0}" height="{height:.0}" fill="white"/>"#
    )
    .unwrap();

    // cells, one rect per maximal run of identical color within a row
    for iy in 0..ny {
        let y = MT + (ny - 1 - iy) as f64 * ch;
        let mut ix = 0;
        while ix < nx {
            let color = cell_color(grid.cell(ix, iy));
            let mut end = ix + 1;
            while end < nx && cell_color(grid.cell(end, iy)) == color {
                end += 1;
            }
            let x = ML + ix as f64 * cw;
            let w = (end - ix) as f64 * cw;
            writeln!(
                s,
                r#"<rect class="c" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{ch:.2}" fill="{}"/>"#,
                css(color)
            )
            .unwrap();
            ix = end;
        }
    }

    // frame and tick labels at the range endpoints and midpoints
    writeln!(
        s,
        r#"<rect x="{ML:.2}" y="{MT:.2}" width="{PLOT:.2}" height="{PLOT:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    )
    .unwrap();
    let (x_lo, x_hi) = grid.spec.x_range;
    let (y_lo, y_hi) = grid.spec.y_range;
    let font = r#"font-family="sans-serif" font-size="13""#;
    for (frac, value) in [(0.0, x_lo), (0.5, 0.5 * (x_lo + x_hi)), (1.0, x_hi)] {
        let x = ML + frac * PLOT;
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" {font}>{value}</text>"#,
            MT + PLOT + 18.0
        )
        .unwrap();
    }
    for (frac, value) in [(0.0, y_lo), (0.5, 0.5 * (y_lo + y_hi)), (1.0, y_hi)] {
        let y = MT + PLOT - frac * PLOT;
        writeln!(
            s,
            r#"<text x="{:.2}" y="{y:.2}" text-anchor="end" dominant-baseline="middle" {font}>{value}</text>"#,
            ML - 8.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" {font}>{}</text>"#,
        ML + 0.5 * PLOT,
        MT + PLOT + 40.0,
        grid.spec.x_key
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" {font} transform="rotate(-90 {x} {y})">{key}</text>"#,
        18.0,
        MT + 0.5 * PLOT,
        x = 18.0,
        y = MT + 0.5 * PLOT,
        key = grid.spec.y_key
    )
    .unwrap();

    // legend
    let lx = ML + PLOT + 15.0;
    for (k, (name, color)) in legend_entries(grid).iter().enumerate() {
        let y = MT + 10.0 + k as f64 * 24.0;
        writeln!(
            s,
            r#"<rect class="l" x="{lx:.2}" y="{y:.2}" width="16" height="16" fill="{}" stroke="black" stroke-width="0.5"/>"#,
            css(*color)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" dominant-baseline="middle" {font}>{name}</text>"#,
            lx + 22.0,
            y + 8.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Writes the grid as an image, picking the format from the extension.
pub fn write_image(grid: &RegionGrid, path: &Path) -> Result<()> {
    let bytes = match path.extension().and_then(|e| e.to_str()) {
        Some("ppm") => render_ppm(grid),
        Some("svg") => render_svg(grid).into_bytes(),
        other => {
            return Err(Error::SweepSpec(format!(
                "unsupported image extension {:?}; use .ppm or .svg",
                other.unwrap_or("")
            )))
        }
    };
    // stage then rename so an interrupted write cannot leave a torn file
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("image");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes)?;
    Ok(std::fs::rename(&tmp, path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::sweep::{run_sweep_serial, SweepSpec};
    use std::collections::HashSet;

    fn grid() -> RegionGrid {
        let spec = SweepSpec {
            nx: 12,
            ny: 9,
            x_range: (0.0, 4.0),
            y_range: (0.0, 6.0),
            ..SweepSpec::default()
        };
        run_sweep_serial(&presets::baseline(), &spec).unwrap()
    }

    #[test]
    fn palette_is_collision_free() {
        let colors = [
            COLOR_DISEASE_FREE,
            COLOR_ENDEMIC_SINGLE,
            COLOR_ENDEMIC_COINFECTED,
            COLOR_BISTABLE,
            COLOR_EXTINCTION,
            COLOR_TANGENT,
            COLOR_BOUNDARY,
        ];
        let unique: HashSet<[u8; 3]> = colors.iter().copied().collect();
        assert_eq!(unique.len(), colors.len());
    }

    #[test]
    fn ppm_has_the_right_shape_and_orientation() {
        let g = grid();
        let bytes = render_ppm(&g);
        let header = format!("P6\n{} {}\n255\n", g.spec.nx, g.spec.ny);
        assert!(bytes.starts_with(header.as_bytes()));
        assert_eq!(bytes.len(), header.len() + 3 * g.spec.nx * g.spec.ny);
        // first pixel is the top-left cell: lowest x, highest y
        let top_left = cell_color(g.cell(0, g.spec.ny - 1));
        assert_eq!(&bytes[header.len()..header.len() + 3], &top_left);
        let last = bytes.len() - 3;
        let bottom_right = cell_color(g.cell(g.spec.nx - 1, 0));
        assert_eq!(&bytes[last..], &bottom_right);
    }

    #[test]
    fn svg_is_deterministic_and_labeled() {
        let g = grid();
        let a = render_svg(&g);
        let b = render_svg(&g);
        assert_eq!(a, b);
        assert!(a.contains(">delta<"));
        assert!(a.contains(">lambda<"));
        assert!(a.contains("</svg>"));
    }

    #[test]
    fn svg_merges_runs_within_rows() {
        let g = grid();
        let cell_rects = render_svg(&g).matches(r#"<rect class="c""#).count();
        // merging is effective: far fewer rects than cells, at least one per row
        assert!(cell_rects >= g.spec.ny);
        assert!(cell_rects < g.spec.nx * g.spec.ny / 2);
        // and lossless: runs change color exactly where neighboring cells do
        let mut expected = 0;
        for iy in 0..g.spec.ny {
            expected += 1;
            for ix in 1..g.spec.nx {
                if cell_color(g.cell(ix, iy)) != cell_color(g.cell(ix - 1, iy)) {
                    expected += 1;
                }
            }
        }
        assert_eq!(cell_rects, expected);
    }

    #[test]
    fn legend_tracks_grid_content() {
        let g = grid();
        let entries = legend_entries(&g);
        assert!(!entries.is_empty());
        let svg = render_svg(&g);
        for (name, _) in &entries {
            assert!(svg.contains(name), "missing legend entry {name}");
        }
        // baseline sweep has no extinction cells: r > m everywhere
        assert!(entries.iter().all(|(n, _)| *n != "extinction"));
    }

    #[test]
    fn image_writer_dispatches_on_extension() {
        let g = grid();
        let dir = tempfile::tempdir().unwrap();
        let ppm = dir.path().join("map.ppm");
        let svg = dir.path().join("map.svg");
        write_image(&g, &ppm).unwrap();
        write_image(&g, &svg).unwrap();
        assert_eq!(std::fs::read(&ppm).unwrap(), render_ppm(&g));
        assert_eq!(std::fs::read_to_string(&svg).unwrap(), render_svg(&g));
        assert!(write_image(&g, &dir.path().join("map.png")).is_err());
    }
}
