//! Clocks for timing planner compute.

use std::cell::Cell;
use std::time::{Duration, Instant};

pub trait Clock {
    fn now(&self) -> Duration;
}

/// Monotonic wall clock measured from construction.
#[derive(Debug)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn new() -> Self {
        Self(Instant::now())
    }
}

impl Default for WallClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for WallClock {
    fn now(&self) -> Duration {
        self.0.elapsed()
    }
}

/// Advances by a fixed tick on every reading, so a timed region measures
/// exactly one tick per bracketed call.
#[derive(Debug)]
pub struct FakeClock {
    tick: Duration,
    t: Cell<Duration>,
}

impl FakeClock {
    pub fn new(tick: Duration) -> Self {
        Self { tick, t: Cell::new(Duration::ZERO) }
    }

    /// Number of readings so far.
    pub fn readings(&self) -> u64 {
        if self.tick.is_zero() {
            0
        } else {
            (self.t.get().as_nanos() / self.tick.as_nanos()) as u64
        }
    }
}

impl Clock for FakeClock {
    fn now(&self) -> Duration {
        let t = self.t.get() + self.tick;
        self.t.set(t);
        t
    }
}

/// Which clock each episode gets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClockKind {
    Wall,
    Fake(Duration),
}

impl ClockKind {
    pub fn make(self) -> Box<dyn Clock> {
        match self {
            ClockKind::Wall => Box::new(WallClock::new()),
            ClockKind::Fake(tick) => Box::new(FakeClock::new(tick)),
        }
    }
}

/// Accumulates time spent inside explicitly bracketed regions.
pub struct Stopwatch<'a> {
    clock: &'a dyn Clock,
    total: Duration,
}

impl<'a> Stopwatch<'a> {
    pub fn new(clock: &'a dyn Clock) -> Self {
        Self { clock, total: Duration::ZERO }
    }

    pub fn time<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let t0 = self.clock.now();
        let out = f();
        self.total += self.clock.now().saturating_sub(t0);
        out
    }

    pub fn total(&self) -> Duration {
        self.total
    }
}
