//! Trajectory rendering: plain-text grids and standalone SVG documents.
//!
//! Both renderers are pure functions of the world state, so rendering the
//! same run twice yields byte-identical output.

use cellnav_core::{CellCoord, CellLookup, CellState, Grid, RobotAgent, Tessellation};
use std::fmt::Write as _;

/// Per-robot accent colors for SVG paths and labels, reused cyclically.
const PALETTE: [&str; 10] = [
    "#e63946", "#1d3557", "#2a9d8f", "#e76f51", "#6a4c93", "#457b9d", "#f4a261", "#264653",
    "#8338ec", "#06d6a0",
];

fn start_symbol(robot_count: usize, id: u8) -> char {
    if robot_count == 1 {
        'S'
    } else {
        (b'0' + id) as char
    }
}

fn target_symbol(robot_count: usize, id: u8) -> char {
    if robot_count == 1 {
        'F'
    } else {
        (b'a' + id) as char
    }
}

fn step_symbol(step: usize) -> char {
    char::from_digit((step % 10) as u32, 10).unwrap()
}

/// Where the robot started: the head of its walked path, or its current
/// cell when it has not been stepped yet.
fn start_cell(robot: &RobotAgent) -> CellCoord {
    robot.path.first().copied().unwrap_or(robot.cell)
}

/// Render the grid as the same text format the map parser accepts: `#` for
/// obstacles, visited cells as their step number mod 10 (intermediate path
/// cells only), and start/target marks drawn last. With no robots this is
/// exactly a bare map, so parsing the output reproduces the grid. Hex grids
/// render as their rectangular storage lattice.
pub fn render_ascii(grid: &Grid, robots: &[RobotAgent]) -> String {
    let (w, h) = (grid.width() as usize, grid.height() as usize);
    let mut canvas = vec![vec!['.'; w]; h];
    for (y, row) in canvas.iter_mut().enumerate() {
        for (x, slot) in row.iter_mut().enumerate() {
            if grid.state(CellCoord::new(x as i32, y as i32)) == CellState::Obstacle {
                *slot = '#';
            }
        }
    }
    let paint = |canvas: &mut Vec<Vec<char>>, cell: CellCoord, symbol: char| {
        canvas[cell.y as usize][cell.x as usize] = symbol;
    };
    for robot in robots {
        for (step, &cell) in robot.path.iter().enumerate().skip(1) {
            paint(&mut canvas, cell, step_symbol(step));
        }
    }
    for robot in robots {
        paint(
            &mut canvas,
            start_cell(robot),
            start_symbol(robots.len(), robot.id.0),
        );
    }
    for robot in robots {
        paint(
            &mut canvas,
            robot.target,
            target_symbol(robots.len(), robot.id.0),
        );
    }
    let mut out = String::with_capacity((w + 1) * h);
    for row in canvas.iter().rev() {
        out.extend(row.iter());
        out.push('\n');
    }
    out
}

const SQRT3: f64 = 1.732_050_807_568_877_2;
/// Pointy-top hexagon corner offsets as (cos, sin) pairs, fixed so the
/// output never depends on platform trig.
const HEX_CORNERS: [(f64, f64); 6] = [
    (0.866_025_403_784_438_7, -0.5),
    (0.866_025_403_784_438_7, 0.5),
    (0.0, 1.0),
    (-0.866_025_403_784_438_7, 0.5),
    (-0.866_025_403_784_438_7, -0.5),
    (0.0, -1.0),
];

struct Layout {
    tessellation: Tessellation,
    height: i32,
    margin: f64,
    cell: f64,
}

impl Layout {
    /// Pixel center of a cell, with y flipped so north points up the page.
    fn center(&self, cell: CellCoord) -> (f64, f64) {
        let row_from_top = (self.height - 1 - cell.y) as f64;
        match self.tessellation {
            Tessellation::Square => (
                self.margin + self.cell * (cell.x as f64 + 0.5),
                self.margin + self.cell * (row_from_top + 0.5),
            ),
            Tessellation::Hex => {
                let size = self.cell / 2.0;
                let hex_w = SQRT3 * size;
                let shift = if cell.y & 1 == 1 { hex_w / 2.0 } else { 0.0 };
                (
                    self.margin + hex_w * (cell.x as f64 + 0.5) + shift,
                    self.margin + 1.5 * size * row_from_top + size,
                )
            }
        }
    }
}

fn push_cell_shape(out: &mut String, layout: &Layout, cell: CellCoord, fill: &str) {
    let (cx, cy) = layout.center(cell);
    match layout.tessellation {
        Tessellation::Square => {
            let half = layout.cell / 2.0;
            writeln!(
                out,
                r##"  <rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}" stroke="#bbbbbb" stroke-width="1"/>"##,
                cx - half,
                cy - half,
                layout.cell,
                layout.cell,
                fill
            )
            .unwrap();
        }
        Tessellation::Hex => {
            let size = layout.cell / 2.0;
            let points: Vec<String> = HEX_CORNERS
                .iter()
                .map(|(dx, dy)| format!("{:.2},{:.2}", cx + size * dx, cy + size * dy))
                .collect();
            writeln!(
                out,
                r##"  <polygon points="{}" fill="{}" stroke="#bbbbbb" stroke-width="1"/>"##,
                points.join(" "),
                fill
            )
            .unwrap();
        }
    }
}

fn push_label(out: &mut String, layout: &Layout, cell: CellCoord, color: &str, text: char) {
    let (cx, cy) = layout.center(cell);
    writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="{:.2}" fill="{}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
        cx,
        cy,
        layout.cell * 0.5,
        color,
        text
    )
    .unwrap();
}

/// Render the grid and every robot's trajectory as a standalone SVG: one
/// shape per cell, a polyline per robot, and step numbers as text labels.
pub fn render_svg(grid: &Grid, robots: &[RobotAgent]) -> String {
    let (w, h) = (grid.width(), grid.height());
    let layout = Layout {
        tessellation: grid.tessellation(),
        height: h,
        margin: 4.0,
        cell: 24.0,
    };
    let (page_w, page_h) = match layout.tessellation {
        Tessellation::Square => (
            2.0 * layout.margin + layout.cell * w as f64,
            2.0 * layout.margin + layout.cell * h as f64,
        ),
        Tessellation::Hex => {
            let size = layout.cell / 2.0;
            let hex_w = SQRT3 * size;
            (
                2.0 * layout.margin + hex_w * (w as f64 + 0.5),
                2.0 * layout.margin + 1.5 * size * (h as f64 - 1.0) + 2.0 * size,
            )
        }
    };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {page_w:.2} {page_h:.2}" width="{page_w:.2}" height="{page_h:.2}">"#
    )
    .unwrap();
    for y in (0..h).rev() {
        for x in 0..w {
            let cell = CellCoord::new(x, y);
            let fill = match grid.state(cell) {
                CellState::Obstacle => "#444444",
                _ => "#ffffff",
            };
            push_cell_shape(&mut out, &layout, cell, fill);
        }
    }
    for robot in robots {
        if robot.path.len() < 2 {
            continue;
        }
        let color = PALETTE[robot.id.0 as usize % PALETTE.len()];
        let points: Vec<String> = robot
            .path
            .iter()
            .map(|&cell| {
                let (cx, cy) = layout.center(cell);
                format!("{cx:.2},{cy:.2}")
            })
            .collect();
        writeln!(
            out,
            r#"  <polyline points="{}" fill="none" stroke="{}" stroke-width="2" stroke-opacity="0.6"/>"#,
            points.join(" "),
            color
        )
        .unwrap();
    }
    for robot in robots {
        let color = PALETTE[robot.id.0 as usize % PALETTE.len()];
        for (step, &cell) in robot.path.iter().enumerate().skip(1) {
            if cell != robot.target {
                push_label(&mut out, &layout, cell, color, step_symbol(step));
            }
        }
    }
    for robot in robots {
        let color = PALETTE[robot.id.0 as usize % PALETTE.len()];
        push_label(
            &mut out,
            &layout,
            start_cell(robot),
            color,
            start_symbol(robots.len(), robot.id.0),
        );
        push_label(
            &mut out,
            &layout,
            robot.target,
            color,
            target_symbol(robots.len(), robot.id.0),
        );
    }
    out.push_str("</svg>\n");
    out
}
