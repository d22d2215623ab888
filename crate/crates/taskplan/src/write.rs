use std::fmt;

use crate::model::{Atom, Domain, OperatorSchema, Param, Problem};

fn params(f: &mut fmt::Formatter<'_>, ps: &[Param]) -> fmt::Result {
    let parts: Vec<String> = ps.iter().map(|p| format!("{} - {}", p.name, p.ty)).collect();
    write!(f, "({})", parts.join(" "))
}

fn conj(f: &mut fmt::Formatter<'_>, pos: &[Atom], neg: &[Atom]) -> fmt::Result {
    write!(f, "(and")?;
    for a in pos {
        write!(f, " {a}")?;
    }
    for a in neg {
        write!(f, " (not {a})")?;
    }
    write!(f, ")")
}

impl fmt::Display for OperatorSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "  (:action {}", self.name)?;
        write!(f, "    :parameters ")?;
        params(f, &self.params)?;
        write!(f, "\n    :precondition ")?;
        conj(f, &self.pre, &[])?;
        write!(f, "\n    :effect ")?;
        conj(f, &self.add, &self.del)?;
        write!(f, ")")
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (domain {})", self.name)?;
        if !self.requirements.is_empty() {
            writeln!(f, "  (:requirements {})", self.requirements.join(" "))?;
        }
        write!(f, "  (:types")?;
        for t in &self.types {
            write!(f, "\n    {} - {}", t.name, t.parent)?;
        }
        writeln!(f, ")")?;
        write!(f, "  (:predicates")?;
        for p in &self.predicates {
            write!(f, "\n    ({}", p.name)?;
            for q in &p.params {
                write!(f, " {} - {}", q.name, q.ty)?;
            }
            write!(f, ")")?;
        }
        writeln!(f, ")")?;
        for a in &self.actions {
            writeln!(f, "{a}")?;
        }
        writeln!(f, ")")
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (problem {})", self.name)?;
        writeln!(f, "  (:domain {})", self.domain)?;
        write!(f, "  (:objects")?;
        for (o, t) in &self.objects {
            write!(f, "\n    {o} - {t}")?;
        }
        writeln!(f, ")")?;
        write!(f, "  (:init")?;
        for a in &self.init {
            write!(f, "\n    {a}")?;
        }
        writeln!(f, ")")?;
        write!(f, "  (:goal ")?;
        conj(f, &self.goal, &[])?;
        writeln!(f, "))")
    }
}
