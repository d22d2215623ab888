use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::EnvError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EnvId {
    Motion2D,
    Obstruction2D,
    ClutteredRetrieval2D,
    ClutteredStorage2D,
    PushPullHook2D,
    StickButton2D,
}

impl EnvId {
    pub const ALL: [EnvId; 6] = [
        EnvId::Motion2D,
        EnvId::Obstruction2D,
        EnvId::ClutteredRetrieval2D,
        EnvId::ClutteredStorage2D,
        EnvId::PushPullHook2D,
        EnvId::StickButton2D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnvId::Motion2D => "Motion2D",
            EnvId::Obstruction2D => "Obstruction2D",
            EnvId::ClutteredRetrieval2D => "ClutteredRetrieval2D",
            EnvId::ClutteredStorage2D => "ClutteredStorage2D",
            EnvId::PushPullHook2D => "PushPullHook2D",
            EnvId::StickButton2D => "StickButton2D",
        }
    }

    /// Letter of the count parameter: passages, obstructions, or blocks/buttons.
    pub fn letter(self) -> char {
        match self {
            EnvId::Motion2D => 'p',
            EnvId::Obstruction2D | EnvId::ClutteredRetrieval2D => 'o',
            EnvId::ClutteredStorage2D | EnvId::PushPullHook2D | EnvId::StickButton2D => 'b',
        }
    }

    /// Obstruction2D is drawn from the side; every other env from above.
    pub fn side_view(self) -> bool {
        self == EnvId::Obstruction2D
    }

    fn count_range(self) -> (u32, u32) {
        match self {
            EnvId::PushPullHook2D => (1, 1),
            EnvId::StickButton2D => (1, 10),
            EnvId::Motion2D => (0, 6),
            EnvId::Obstruction2D => (0, 4),
            EnvId::ClutteredRetrieval2D => (0, 8),
            EnvId::ClutteredStorage2D => (1, 7),
        }
    }
}

impl fmt::Display for EnvId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A constant-object variant such as `StickButton2D-b5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariantSpec {
    pub env: EnvId,
    pub count: u32,
}

/// Every env lives in a 10 m × 10 m world with its lower-left corner at the origin.
pub const WORLD: (f64, f64) = (10.0, 10.0);

impl VariantSpec {
    pub fn new(env: EnvId, count: u32) -> Self {
        Self { env, count }
    }

    pub fn world(&self) -> (f64, f64) {
        WORLD
    }

    fn grammar() -> String {
        EnvId::ALL
            .iter()
            .map(|e| {
                let (lo, hi) = e.count_range();
                format!("{}-{}<{}..={}>", e.name(), e.letter(), lo, hi)
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}{}", self.env.name(), self.env.letter(), self.count)
    }
}

impl FromStr for VariantSpec {
    type Err = EnvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: String| EnvError::BadVariant { input: s.to_string(), reason };
        let (name, code) = s
            .split_once('-')
            .ok_or_else(|| bad(format!("expected <EnvName>-<letter><count>; valid: {}", Self::grammar())))?;
        let env = EnvId::ALL
            .into_iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| bad(format!("unknown env `{name}`; valid: {}", Self::grammar())))?;
        let mut chars = code.chars();
        let letter = chars.next().ok_or_else(|| bad("missing count code".into()))?;
        if letter != env.letter() {
            return Err(bad(format!(
                "{} takes letter `{}`, got `{letter}`; valid: {}",
                env.name(),
                env.letter(),
                Self::grammar()
            )));
        }
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(format!("count `{digits}` is not a non-negative integer")));
        }
        let count: u32 = digits.parse().map_err(|_| bad(format!("count `{digits}` out of range")))?;
        let (lo, hi) = env.count_range();
        if count < lo || count > hi {
            return Err(bad(format!("{} supports counts {lo}..={hi}", env.name())));
        }
        Ok(VariantSpec { env, count })
    }
}
