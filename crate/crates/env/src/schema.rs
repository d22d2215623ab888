//! Object types and their feature layouts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectType {
    Robot,
    Wall,
    Table,
    Surface,
    Region,
    Block,
    Stick,
    Button,
    Hook,
}

/// Feature indices for the robot.
pub mod robot {
    pub const X: usize = 0;
    pub const Y: usize = 1;
    pub const THETA: usize = 2;
    pub const EXT: usize = 3;
    pub const VACUUM: usize = 4;
    pub const BASE_RADIUS: usize = 5;
    pub const ARM_MIN: usize = 6;
    pub const ARM_MAX: usize = 7;
    pub const VAC_HALF_W: usize = 8;
    pub const VAC_HALF_H: usize = 9;
}

/// Feature indices shared by every rectangle-shaped type.
pub mod rect {
    pub const X: usize = 0;
    pub const Y: usize = 1;
    pub const THETA: usize = 2;
    pub const HALF_W: usize = 3;
    pub const HALF_H: usize = 4;
    pub const IS_HELD: usize = 5;
    pub const R: usize = 6;
    pub const G: usize = 7;
    pub const B: usize = 8;
    pub const STATIC: usize = 9;
}

pub mod button {
    pub const X: usize = 0;
    pub const Y: usize = 1;
    pub const RADIUS: usize = 2;
    pub const PRESSED: usize = 3;
    pub const MOVABLE: usize = 4;
    pub const R: usize = 5;
    pub const G: usize = 6;
    pub const B: usize = 7;
}

/// The hook is an L: a long bar along local +x and a short bar rising
/// along local +y from the +x end.
pub mod hook {
    pub const X: usize = 0;
    pub const Y: usize = 1;
    pub const THETA: usize = 2;
    pub const LONG_HALF: usize = 3;
    pub const SHORT_HALF: usize = 4;
    pub const THICK_HALF: usize = 5;
    pub const IS_HELD: usize = 6;
    pub const R: usize = 7;
    pub const G: usize = 8;
    pub const B: usize = 9;
}

const ROBOT_FEATURES: &[(&str, &str)] = &[
    ("x", "m"),
    ("y", "m"),
    ("theta", "rad"),
    ("ext", "m"),
    ("vacuum_on", "bool"),
    ("base_radius", "m"),
    ("arm_min", "m"),
    ("arm_max", "m"),
    ("vacuum_half_w", "m"),
    ("vacuum_half_h", "m"),
];

const RECT_FEATURES: &[(&str, &str)] = &[
    ("x", "m"),
    ("y", "m"),
    ("theta", "rad"),
    ("half_w", "m"),
    ("half_h", "m"),
    ("is_held", "bool"),
    ("r", "1"),
    ("g", "1"),
    ("b", "1"),
    ("static", "bool"),
];

const BUTTON_FEATURES: &[(&str, &str)] = &[
    ("x", "m"),
    ("y", "m"),
    ("radius", "m"),
    ("pressed", "bool"),
    ("movable", "bool"),
    ("r", "1"),
    ("g", "1"),
    ("b", "1"),
];

const HOOK_FEATURES: &[(&str, &str)] = &[
    ("x", "m"),
    ("y", "m"),
    ("theta", "rad"),
    ("long_half", "m"),
    ("short_half", "m"),
    ("thick_half", "m"),
    ("is_held", "bool"),
    ("r", "1"),
    ("g", "1"),
    ("b", "1"),
];

/// An object type with its immutable feature schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObjectTypeDef {
    pub ty: ObjectType,
    /// `(name, unit)` pairs in vector order.
    pub features: &'static [(&'static str, &'static str)],
}

impl ObjectType {
    pub const ALL: [ObjectType; 9] = [
        ObjectType::Robot,
        ObjectType::Wall,
        ObjectType::Table,
        ObjectType::Surface,
        ObjectType::Region,
        ObjectType::Block,
        ObjectType::Stick,
        ObjectType::Button,
        ObjectType::Hook,
    ];

    pub fn def(self) -> ObjectTypeDef {
        let features = match self {
            ObjectType::Robot => ROBOT_FEATURES,
            ObjectType::Button => BUTTON_FEATURES,
            ObjectType::Hook => HOOK_FEATURES,
            _ => RECT_FEATURES,
        };
        ObjectTypeDef { ty: self, features }
    }

    pub fn dim(self) -> usize {
        self.def().features.len()
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectType::Robot => "robot",
            ObjectType::Wall => "wall",
            ObjectType::Table => "table",
            ObjectType::Surface => "surface",
            ObjectType::Region => "region",
            ObjectType::Block => "block",
            ObjectType::Stick => "stick",
            ObjectType::Button => "button",
            ObjectType::Hook => "hook",
        }
    }

    /// Types the vacuum can pick up.
    pub fn is_graspable(self) -> bool {
        matches!(self, ObjectType::Block | ObjectType::Stick | ObjectType::Hook)
    }

    pub fn is_rect(self) -> bool {
        matches!(
            self,
            ObjectType::Wall
                | ObjectType::Table
                | ObjectType::Surface
                | ObjectType::Region
                | ObjectType::Block
                | ObjectType::Stick
        )
    }

    /// Index of the continuous features that describe pose (x, y, theta, ext).
    pub fn pose_features(self) -> &'static [usize] {
        match self {
            ObjectType::Robot => &[robot::X, robot::Y, robot::THETA, robot::EXT],
            ObjectType::Button => &[button::X, button::Y],
            _ => &[0, 1, 2],
        }
    }

    pub fn feature_index(self, name: &str) -> Option<usize> {
        self.def().features.iter().position(|(n, _)| *n == name)
    }
}

impl fmt::Display for ObjectType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ObjectType::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown object type `{s}`"))
    }
}
