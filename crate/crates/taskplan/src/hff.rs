use fixedbitset::FixedBitSet;

use crate::ground::GroundOp;

const UNREACHED: u32 = u32::MAX;

/// Precomputed indices for repeated relaxed-plan evaluations over one operator set.
#[derive(Debug, Clone)]
pub struct Hff {
    num_atoms: usize,
    pre: Vec<Vec<u32>>,
    add: Vec<Vec<u32>>,
    /// Operators with each atom as a precondition.
    consumers: Vec<Vec<u32>>,
    /// Achievers of each atom, in operator name order.
    achievers: Vec<Vec<u32>>,
}

impl Hff {
    pub fn new(ops: &[GroundOp], num_atoms: usize) -> Self {
        let num_atoms = ops
            .iter()
            .flat_map(|o| o.pre.iter().chain(&o.add).chain(&o.del))
            .map(|&a| a as usize + 1)
            .max()
            .unwrap_or(0)
            .max(num_atoms);
        let mut consumers = vec![Vec::new(); num_atoms];
        let mut achievers = vec![Vec::new(); num_atoms];
        let mut by_name: Vec<u32> = (0..ops.len() as u32).collect();
        by_name.sort_by(|&a, &b| ops[a as usize].name.cmp(&ops[b as usize].name).then(a.cmp(&b)));
        for &o in &by_name {
            for &a in &ops[o as usize].add {
                achievers[a as usize].push(o);
            }
        }
        for (o, op) in ops.iter().enumerate() {
            for &p in &op.pre {
                consumers[p as usize].push(o as u32);
            }
        }
        Self {
            num_atoms,
            pre: ops.iter().map(|o| o.pre.clone()).collect(),
            add: ops.iter().map(|o| o.add.clone()).collect(),
            consumers,
            achievers,
        }
    }

    /// Relaxed-plan length from `state` to `goal`, or `None` when the goal is unreachable
    /// even with delete effects ignored.
    pub fn eval(&self, state: &FixedBitSet, goal: &[u32]) -> Option<u32> {
        if goal.iter().all(|&g| state.contains(g as usize)) {
            return Some(0);
        }
        if goal.iter().any(|&g| g as usize >= self.num_atoms) {
            return None;
        }
        let n_ops = self.pre.len();
        let mut atom_layer = vec![UNREACHED; self.num_atoms];
        let mut op_layer = vec![UNREACHED; n_ops];
        let mut missing: Vec<u32> = self.pre.iter().map(|p| p.len() as u32).collect();
        let mut frontier: Vec<u32> = state.ones().filter(|&i| i < self.num_atoms).map(|i| i as u32).collect();
        for &a in &frontier {
            atom_layer[a as usize] = 0;
        }
        let mut ready: Vec<u32> = (0..n_ops as u32).filter(|&o| missing[o as usize] == 0).collect();
        let mut layer = 0u32;
        let mut goals_left = goal.iter().filter(|&&g| atom_layer[g as usize] == UNREACHED).count();
        loop {
            for &a in &frontier {
                for &o in &self.consumers[a as usize] {
                    missing[o as usize] -= 1;
                    if missing[o as usize] == 0 {
                        ready.push(o);
                    }
                }
            }
            if goals_left == 0 {
                break;
            }
            let mut next = Vec::new();
            for &o in &ready {
                op_layer[o as usize] = layer;
                for &a in &self.add[o as usize] {
                    if atom_layer[a as usize] == UNREACHED {
                        atom_layer[a as usize] = layer + 1;
                        next.push(a);
                    }
                }
            }
            ready.clear();
            if next.is_empty() {
                return None;
            }
            goals_left = goal.iter().filter(|&&g| atom_layer[g as usize] == UNREACHED).count();
            frontier = next;
            layer += 1;
        }

        let top = goal.iter().map(|&g| atom_layer[g as usize]).max().unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); top + 1];
        let mut marked = vec![false; self.num_atoms];
        for &g in goal {
            if !marked[g as usize] {
                marked[g as usize] = true;
                buckets[atom_layer[g as usize] as usize].push(g);
            }
        }
        let mut chosen = vec![false; n_ops];
        let mut count = 0;
        for l in (1..=top).rev() {
            let mut i = 0;
            while i < buckets[l].len() {
                let g = buckets[l][i];
                i += 1;
                let o = *self.achievers[g as usize]
                    .iter()
                    .find(|&&o| op_layer[o as usize] == l as u32 - 1)
                    .expect("reached atom has a supporter one layer below");
                if chosen[o as usize] {
                    continue;
                }
                chosen[o as usize] = true;
                count += 1;
                for &p in &self.pre[o as usize] {
                    let pl = atom_layer[p as usize] as usize;
                    if pl > 0 && !marked[p as usize] {
                        marked[p as usize] = true;
                        buckets[pl].push(p);
                    }
                }
            }
        }
        Some(count)
    }
}

/// FF heuristic: length of a relaxed plan extracted by lowest-layer best supporters,
/// ties broken by operator name. `None` stands for infinity.
pub fn hff(state: &FixedBitSet, goal: &[u32], ops: &[GroundOp]) -> Option<u32> {
    Hff::new(ops, state.len()).eval(state, goal)
}
