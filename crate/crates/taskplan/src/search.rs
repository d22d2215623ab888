use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};
use std::sync::mpsc::{sync_channel, Receiver};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use crate::ground::GroundProblem;
use crate::hff::Hff;

/// A sequence of ground operator indices into a [`GroundProblem`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractPlan {
    pub ops: Vec<u32>,
}

impl AbstractPlan {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn names<'a>(&'a self, g: &'a GroundProblem) -> impl Iterator<Item = &'a str> {
        self.ops.iter().map(move |&o| g.ops[o as usize].name.as_str())
    }

    /// Simulates the plan from the initial state; `Some(final state)` when every step applies.
    pub fn simulate(&self, g: &GroundProblem) -> Option<FixedBitSet> {
        let mut s = g.init.clone();
        for &o in &self.ops {
            let op = g.ops.get(o as usize)?;
            if !op.applicable(&s) {
                return None;
            }
            s = op.apply(&s);
        }
        Some(s)
    }

    pub fn is_valid(&self, g: &GroundProblem) -> bool {
        self.simulate(g).is_some_and(|s| g.satisfies_goal(&s))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: usize,
    pub generated: usize,
    pub plans: usize,
    pub timed_out: bool,
}

struct Node {
    parent: Option<u32>,
    op: u32,
    state: FixedBitSet,
}

/// Lazy greedy best-first search yielding distinct plans in discovery order.
pub struct PlanStream<'g> {
    g: &'g GroundProblem,
    h: Hff,
    nodes: Vec<Node>,
    open: BinaryHeap<Reverse<(u32, u64, u32)>>,
    emitted: HashSet<Vec<u32>>,
    pending: VecDeque<AbstractPlan>,
    counter: u64,
    max_plans: usize,
    deadline: Instant,
    stats: SearchStats,
    started: bool,
}

/// Plans for `g` by greedy best-first tree search on hFF with FIFO tie-breaking. Paths never
/// revisit one of their own states, but distinct paths may share states, so a goal state can be
/// reached by several plans. Each goal state generated yields a plan unless the same action
/// sequence was already produced. The stream ends after `max_plans` plans, at `deadline`, or
/// when the search space is exhausted.
pub fn gbfs_plans(g: &GroundProblem, max_plans: usize, deadline: Duration) -> PlanStream<'_> {
    assert!(max_plans >= 1, "max_plans must be at least 1");
    PlanStream {
        g,
        h: Hff::new(&g.ops, g.num_atoms()),
        nodes: Vec::new(),
        open: BinaryHeap::new(),
        emitted: HashSet::new(),
        pending: VecDeque::new(),
        counter: 0,
        max_plans,
        deadline: Instant::now() + deadline,
        stats: SearchStats::default(),
        started: false,
    }
}

impl PlanStream<'_> {
    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    fn path(&self, mut i: u32) -> Vec<u32> {
        let mut ops = Vec::new();
        while let Some(p) = self.nodes[i as usize].parent {
            ops.push(self.nodes[i as usize].op);
            i = p;
        }
        ops.reverse();
        ops
    }

    fn on_path(&self, mut i: u32, state: &FixedBitSet) -> bool {
        loop {
            let n = &self.nodes[i as usize];
            if &n.state == state {
                return true;
            }
            match n.parent {
                Some(p) => i = p,
                None => return false,
            }
        }
    }

    fn emit(&mut self, ops: Vec<u32>) {
        if self.emitted.insert(ops.clone()) {
            self.pending.push_back(AbstractPlan { ops });
        }
    }

    fn push(&mut self, node: Node) {
        let Some(h) = self.h.eval(&node.state, &self.g.goal) else {
            return;
        };
        self.nodes.push(node);
        let id = (self.nodes.len() - 1) as u32;
        self.open.push(Reverse((h, self.counter, id)));
        self.counter += 1;
    }

    fn start(&mut self) {
        self.started = true;
        let init = self.g.init.clone();
        if self.g.satisfies_goal(&init) {
            self.pending.push_back(AbstractPlan { ops: Vec::new() });
            self.emitted.insert(Vec::new());
        }
        self.push(Node { parent: None, op: 0, state: init });
    }

    fn expand(&mut self, id: u32) {
        self.stats.expanded += 1;
        let state = self.nodes[id as usize].state.clone();
        for (o, op) in self.g.ops.iter().enumerate() {
            if !op.applicable(&state) {
                continue;
            }
            let child = op.apply(&state);
            self.stats.generated += 1;
            if self.g.satisfies_goal(&child) {
                let mut ops = self.path(id);
                ops.push(o as u32);
                self.emit(ops);
                continue;
            }
            if !self.on_path(id, &child) {
                self.push(Node { parent: Some(id), op: o as u32, state: child });
            }
        }
    }
}

impl Iterator for PlanStream<'_> {
    type Item = AbstractPlan;

    fn next(&mut self) -> Option<AbstractPlan> {
        if self.stats.plans >= self.max_plans {
            return None;
        }
        if !self.started {
            self.start();
        }
        loop {
            if let Some(p) = self.pending.pop_front() {
                self.stats.plans += 1;
                return Some(p);
            }
            if Instant::now() >= self.deadline {
                self.stats.timed_out = true;
                return None;
            }
            let Reverse((_, _, id)) = self.open.pop()?;
            self.expand(id);
        }
    }
}

/// Runs the search on its own thread; plans arrive on the returned channel as they are found.
/// The worker stops when the receiver is dropped, the budget is spent, or the deadline passes.
pub fn spawn_plans(g: Arc<GroundProblem>, max_plans: usize, deadline: Duration) -> Receiver<AbstractPlan> {
    let (tx, rx) = sync_channel(max_plans.max(1));
    thread::spawn(move || {
        for plan in gbfs_plans(&g, max_plans, deadline) {
            if tx.send(plan).is_err() {
                break;
            }
        }
    });
    rx
}
