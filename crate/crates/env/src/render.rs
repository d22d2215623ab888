use kinder_geom::{PlacedShape, Vec2};

use crate::robot::{RobotConfig, RobotDims};
use crate::schema::ObjectType;
use crate::state::{SceneState, ROBOT};
use crate::variant::WORLD;

pub const BACKGROUND: [u8; 3] = [255, 255, 255];

/// A row-major RGB8 image; row 0 is the top of the world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl RgbImage {
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

fn to_u8(c: [f64; 3]) -> [u8; 3] {
    c.map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
}

fn layer(ty: ObjectType) -> u8 {
    match ty {
        ObjectType::Region => 0,
        ObjectType::Table | ObjectType::Surface => 1,
        ObjectType::Wall => 2,
        ObjectType::Button => 3,
        _ => 4,
    }
}

/// Orthographic rasterization of the 10 m × 10 m world. A pixel takes the
/// color of the topmost shape containing its center.
pub fn render(state: &SceneState, width: usize, height: usize) -> RgbImage {
    let mut img = RgbImage { width, height, data: BACKGROUND.repeat(width * height) };
    let sx = width as f64 / WORLD.0;
    let sy = height as f64 / WORLD.1;
    let mut draw = |shape: &PlacedShape, color: [u8; 3]| {
        let b = shape.aabb();
        let x0 = ((b.min.x * sx).floor().max(0.0)) as usize;
        let x1 = ((b.max.x * sx).ceil().min(width as f64)) as usize;
        let r0 = (((WORLD.1 - b.max.y) * sy).floor().max(0.0)) as usize;
        let r1 = (((WORLD.1 - b.min.y) * sy).ceil().min(height as f64)) as usize;
        for row in r0..r1 {
            let y = WORLD.1 - (row as f64 + 0.5) / sy;
            for col in x0..x1 {
                let x = (col as f64 + 0.5) / sx;
                if shape.contains_point(Vec2::new(x, y)) {
                    let i = 3 * (row * width + col);
                    img.data[i..i + 3].copy_from_slice(&color);
                }
            }
        }
    };
    let mut order: Vec<_> = state.objects.iter().filter(|(n, _)| &***n != ROBOT).collect();
    order.sort_by_key(|(_, o)| layer(o.ty));
    for (_, o) in order {
        draw(&o.placed(), to_u8(o.color()));
    }
    if let Some(r) = state.get(ROBOT) {
        let dims = RobotDims::from_state(state);
        let cfg = RobotConfig::from_state(state);
        let c = to_u8(r.color());
        draw(&dims.arm(&cfg), [60, 60, 60]);
        draw(&dims.vacuum(&cfg), if cfg.vacuum_on { [200, 40, 200] } else { [120, 40, 120] });
        draw(&dims.base(&cfg), c);
    }
    img
}
