use std::collections::HashSet;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use indexmap::IndexSet;

use crate::model::{Atom, Domain, Problem};

/// An operator instantiated with objects, referring to interned atom ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundOp {
    pub schema: usize,
    pub args: Vec<Arc<str>>,
    pub name: String,
    pub pre: Vec<u32>,
    pub add: Vec<u32>,
    pub del: Vec<u32>,
}

impl GroundOp {
    pub fn applicable(&self, state: &FixedBitSet) -> bool {
        self.pre.iter().all(|&p| state.contains(p as usize))
    }

    /// STRIPS successor: deletes first, then adds.
    pub fn apply(&self, state: &FixedBitSet) -> FixedBitSet {
        let mut s = state.clone();
        for &d in &self.del {
            s.set(d as usize, false);
        }
        for &a in &self.add {
            s.insert(a as usize);
        }
        s
    }
}

/// A fully instantiated problem over an interned atom table.
#[derive(Debug, Clone)]
pub struct GroundProblem {
    pub objects: Vec<(Arc<str>, String)>,
    pub atoms: IndexSet<Atom>,
    pub ops: Vec<GroundOp>,
    pub init: FixedBitSet,
    pub goal: Vec<u32>,
}

impl GroundProblem {
    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_id(&self, a: &Atom) -> Option<u32> {
        self.atoms.get_index_of(a).map(|i| i as u32)
    }

    pub fn atom(&self, id: u32) -> &Atom {
        &self.atoms[id as usize]
    }

    /// Bitset of the given atoms; atoms outside the table are irrelevant to every operator and are dropped.
    pub fn state_of<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.atoms.len());
        for a in atoms {
            if let Some(i) = self.atoms.get_index_of(a) {
                s.insert(i);
            }
        }
        s
    }

    pub fn atoms_of(&self, state: &FixedBitSet) -> Vec<Atom> {
        state.ones().map(|i| self.atoms[i].clone()).collect()
    }

    pub fn satisfies_goal(&self, state: &FixedBitSet) -> bool {
        self.goal.iter().all(|&g| state.contains(g as usize))
    }

    pub fn op_by_name(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }
}

fn objects_of<'a>(domain: &Domain, problem: &'a Problem, ty: &str) -> Vec<&'a str> {
    problem.objects.iter().filter(|(_, t)| domain.is_subtype(t, ty)).map(|(o, _)| o.as_str()).collect()
}

fn instantiate(atom: &Atom, names: &[&str], binding: &[&str]) -> Atom {
    Atom {
        pred: atom.pred.clone(),
        args: atom
            .args
            .iter()
            .map(|a| names.iter().position(|n| n == a).map_or_else(|| a.clone(), |i| binding[i].to_owned()))
            .collect(),
    }
}

/// Instantiates every operator with every type-consistent binding, in schema order and then
/// lexicographic order of object declaration. Operators with a precondition atom that is
/// neither in the initial state nor added by any ground operator are dropped.
pub fn ground(domain: &Domain, problem: &Problem) -> GroundProblem {
    let fluent: HashSet<&str> = domain.actions.iter().flat_map(|a| a.add.iter().map(|x| x.pred.as_str())).collect();
    let init: HashSet<&Atom> = problem.init.iter().collect();

    struct Lifted {
        schema: usize,
        args: Vec<String>,
        pre: Vec<Atom>,
        add: Vec<Atom>,
        del: Vec<Atom>,
    }
    let mut candidates = Vec::new();
    for (si, schema) in domain.actions.iter().enumerate() {
        let domains: Vec<Vec<&str>> = schema.params.iter().map(|p| objects_of(domain, problem, &p.ty)).collect();
        if domains.iter().any(Vec::is_empty) {
            continue;
        }
        let names: Vec<&str> = schema.params.iter().map(|p| p.name.as_str()).collect();
        let mut idx = vec![0usize; domains.len()];
        'bindings: loop {
            let binding: Vec<&str> = idx.iter().zip(&domains).map(|(&i, d)| d[i]).collect();
            let pre: Vec<Atom> = schema.pre.iter().map(|a| instantiate(a, &names, &binding)).collect();
            let static_ok = pre.iter().all(|a| fluent.contains(a.pred.as_str()) || init.contains(a));
            if static_ok {
                candidates.push(Lifted {
                    schema: si,
                    args: binding.iter().map(|s| s.to_string()).collect(),
                    pre,
                    add: schema.add.iter().map(|a| instantiate(a, &names, &binding)).collect(),
                    del: schema.del.iter().map(|a| instantiate(a, &names, &binding)).collect(),
                });
            }
            let mut k = domains.len();
            loop {
                if k == 0 {
                    break 'bindings;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < domains[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    let added: HashSet<&Atom> = candidates.iter().flat_map(|c| c.add.iter()).collect();
    let keep: Vec<bool> =
        candidates.iter().map(|c| c.pre.iter().all(|a| init.contains(a) || added.contains(a))).collect();

    let mut atoms: IndexSet<Atom> = IndexSet::new();
    let mut intern = |a: &Atom| -> u32 {
        if let Some(i) = atoms.get_index_of(a) {
            i as u32
        } else {
            atoms.insert(a.clone());
            (atoms.len() - 1) as u32
        }
    };
    let init_ids: Vec<u32> = problem.init.iter().map(&mut intern).collect();
    let goal: Vec<u32> = problem.goal.iter().map(&mut intern).collect();
    let mut ops = Vec::new();
    for (c, _) in candidates.iter().zip(&keep).filter(|(_, k)| **k) {
        let ids = |v: &[Atom], f: &mut dyn FnMut(&Atom) -> u32| {
            let mut out: Vec<u32> = v.iter().map(f).collect();
            out.sort_unstable();
            out.dedup();
            out
        };
        let pre = ids(&c.pre, &mut intern);
        let add = ids(&c.add, &mut intern);
        let del = ids(&c.del, &mut intern);
        let name = Atom { pred: domain.actions[c.schema].name.clone(), args: c.args.clone() }.to_string();
        ops.push(GroundOp {
            schema: c.schema,
            args: c.args.iter().map(|s| Arc::from(s.as_str())).collect(),
            name,
            pre,
            add,
            del,
        });
    }
    let mut init = FixedBitSet::with_capacity(atoms.len());
    for i in init_ids {
        init.insert(i as usize);
    }
    GroundProblem {
        objects: problem.objects.iter().map(|(o, t)| (Arc::from(o.as_str()), t.clone())).collect(),
        atoms,
        ops,
        init,
        goal,
    }
}
