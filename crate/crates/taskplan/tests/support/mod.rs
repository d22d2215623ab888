#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use kinder_taskplan::{Atom, Domain, GroundProblem, OperatorSchema, Param, Predicate, Problem};
use rand::Rng;

pub const BLOCKS: &str = r#"
; Classic four-operator blocks world.
(define (domain blocks)
  (:requirements :strips :typing)
  (:types block)
  (:predicates (on ?x - block ?y - block) (ontable ?x - block) (clear ?x - block)
               (handempty) (holding ?x - block))
  (:action pick-up
    :parameters (?x - block)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x) (not (ontable ?x)) (not (clear ?x)) (not (handempty))))
  (:action put-down
    :parameters (?x - block)
    :precondition (holding ?x)
    :effect (and (clear ?x) (handempty) (ontable ?x) (not (holding ?x))))
  (:action stack
    :parameters (?x - block ?y - block)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (on ?x ?y) (clear ?x) (handempty) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x - block ?y - block)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (on ?x ?y)) (not (clear ?x)) (not (handempty)))))
"#;

/// Blocks `a b c` on the table, goal tower `a` on `b` on `c`.
pub const BLOCKS3: &str = r#"
(define (problem tower3)
  (:domain blocks)
  (:objects a b c - block)
  (:init (ontable a) (ontable b) (ontable c) (clear a) (clear b) (clear c) (handempty))
  (:goal (and (on a b) (on b c))))
"#;

pub type Set = BTreeSet<Atom>;

/// Instantiates one operator directly from the lifted schema.
pub fn instantiate(op: &OperatorSchema, args: &[String]) -> (Vec<Atom>, Vec<Atom>, Vec<Atom>) {
    let sub = |a: &Atom| Atom {
        pred: a.pred.clone(),
        args: a.args.iter().map(|x| args[op.params.iter().position(|p| &p.name == x).unwrap()].clone()).collect(),
    };
    (op.pre.iter().map(sub).collect(), op.add.iter().map(sub).collect(), op.del.iter().map(sub).collect())
}

/// Exhaustive type-respecting bindings, filtered by the static precondition rule, from the lifted model.
pub fn brute_force_ground(d: &Domain, p: &Problem) -> Vec<(String, Vec<String>)> {
    fn rec(d: &Domain, p: &Problem, ps: &[Param], cur: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        if cur.len() == ps.len() {
            out.push(cur.clone());
            return;
        }
        for (o, t) in &p.objects {
            if d.is_subtype(t, &ps[cur.len()].ty) {
                cur.push(o.clone());
                rec(d, p, ps, cur, out);
                cur.pop();
            }
        }
    }
    let init: HashSet<&Atom> = p.init.iter().collect();
    let fluent: HashSet<&str> = d.actions.iter().flat_map(|a| a.add.iter().map(|x| x.pred.as_str())).collect();
    let mut all = Vec::new();
    for op in &d.actions {
        let mut bs = Vec::new();
        rec(d, p, &op.params, &mut Vec::new(), &mut bs);
        for b in bs {
            let (pre, add, _) = instantiate(op, &b);
            if pre.iter().all(|a| fluent.contains(a.pred.as_str()) || init.contains(a)) {
                all.push((op.name.clone(), b, pre, add));
            }
        }
    }
    let added: HashSet<Atom> = all.iter().flat_map(|x| x.3.iter().cloned()).collect();
    all.into_iter()
        .filter(|(_, _, pre, _)| pre.iter().all(|a| init.contains(a) || added.contains(a)))
        .map(|(n, b, _, _)| (n, b))
        .collect()
}

/// Replays a plan by name against the lifted domain; returns the final state when every step applies.
pub fn simulate_lifted(d: &Domain, p: &Problem, g: &GroundProblem, plan: &[u32]) -> Option<Set> {
    let mut s: Set = p.init.iter().cloned().collect();
    for &o in plan {
        let op = &g.ops[o as usize];
        let schema = &d.actions[op.schema];
        let args: Vec<String> = op.args.iter().map(|a| a.to_string()).collect();
        let (pre, add, del) = instantiate(schema, &args);
        if !pre.iter().all(|a| s.contains(a)) {
            return None;
        }
        for a in del {
            s.remove(&a);
        }
        s.extend(add);
    }
    Some(s)
}

pub fn goal_holds(p: &Problem, s: &Set) -> bool {
    p.goal.iter().all(|a| s.contains(a))
}

/// Breadth-first shortest plan length and number of states popped before reaching the goal.
pub fn bfs(d: &Domain, p: &Problem) -> Option<(usize, usize)> {
    let ground = brute_force_ground(d, p);
    let ops: Vec<(Vec<Atom>, Vec<Atom>, Vec<Atom>)> =
        ground.iter().map(|(n, b)| instantiate(d.action(n).unwrap(), b)).collect();
    let start: Set = p.init.iter().cloned().collect();
    let mut dist: HashMap<Set, usize> = HashMap::from([(start.clone(), 0)]);
    let mut q = VecDeque::from([start]);
    let mut popped = 0;
    while let Some(s) = q.pop_front() {
        popped += 1;
        let ds = dist[&s];
        if goal_holds(p, &s) {
            return Some((ds, popped));
        }
        for (pre, add, del) in &ops {
            if pre.iter().all(|a| s.contains(a)) {
                let mut t = s.clone();
                for a in del {
                    t.remove(a);
                }
                t.extend(add.iter().cloned());
                if !dist.contains_key(&t) {
                    dist.insert(t.clone(), ds + 1);
                    q.push_back(t);
                }
            }
        }
        assert!(dist.len() <= 100_000, "oracle limited to small state spaces");
    }
    None
}

/// Shortest delete-free plan length by breadth-first search over relaxed states.
pub fn relaxed_optimal(ops: &[(Vec<u32>, Vec<u32>)], init: &BTreeSet<u32>, goal: &[u32]) -> Option<usize> {
    let mut seen = HashSet::from([init.clone()]);
    let mut q = VecDeque::from([(init.clone(), 0usize)]);
    while let Some((s, d)) = q.pop_front() {
        if goal.iter().all(|g| s.contains(g)) {
            return Some(d);
        }
        for (pre, add) in ops {
            if pre.iter().all(|a| s.contains(a)) && !add.iter().all(|a| s.contains(a)) {
                let mut t = s.clone();
                t.extend(add.iter().copied());
                if seen.insert(t.clone()) {
                    q.push_back((t, d + 1));
                }
            }
        }
    }
    None
}

/// Random propositional domain over `n` nullary atoms `p0..`, with a matching problem.
pub fn random_propositional(rng: &mut impl Rng, n: usize, n_ops: usize) -> (Domain, Problem) {
    let mut d = Domain::new("rand");
    for i in 0..n {
        d.predicates.push(Predicate { name: format!("p{i}"), params: vec![] });
    }
    let atom = |i: usize| Atom::new(&format!("p{i}"), Vec::<String>::new());
    for k in 0..n_ops {
        let mut pick = |max: usize| -> Vec<usize> {
            let m = rng.random_range(0..=max);
            let mut v: Vec<usize> = (0..m).map(|_| rng.random_range(0..n)).collect();
            v.sort();
            v.dedup();
            v
        };
        let pre = pick(2);
        let add = pick(2);
        let del: Vec<usize> = pick(2).into_iter().filter(|x| !add.contains(x)).collect();
        d.actions.push(OperatorSchema {
            name: format!("op{k}"),
            params: vec![],
            pre: pre.into_iter().map(atom).collect(),
            add: add.into_iter().map(atom).collect(),
            del: del.into_iter().map(atom).collect(),
        });
    }
    let mut p = Problem::new("rand", &d);
    for i in 0..n {
        if rng.random_bool(0.25) {
            p.init.push(atom(i));
        }
    }
    let mut goal: Vec<usize> = (0..rng.random_range(1..=3)).map(|_| rng.random_range(0..n)).collect();
    goal.sort();
    goal.dedup();
    p.goal = goal.into_iter().map(atom).collect();
    (d, p)
}
