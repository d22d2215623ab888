use std::collections::HashSet;
use std::fmt;

use crate::error::ModelError;

/// Root of every type hierarchy.
pub const OBJECT_TYPE: &str = "object";

/// A predicate applied to arguments: variables (`?x`) in schemas, object names in problems.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<String>,
}

impl Atom {
    pub fn new<I, S>(pred: &str, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { pred: pred.to_owned(), args: args.into_iter().map(Into::into).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.pred)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// A typed variable, written with its leading `?`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Param {
    pub name: String,
    pub ty: String,
}

impl Param {
    pub fn new(name: &str, ty: &str) -> Self {
        let name = if name.starts_with('?') { name.to_owned() } else { format!("?{name}") };
        Self { name, ty: ty.to_owned() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeDecl {
    pub name: String,
    pub parent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub name: String,
    pub params: Vec<Param>,
}

/// A lifted STRIPS operator with positive preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatorSchema {
    pub name: String,
    pub params: Vec<Param>,
    pub pre: Vec<Atom>,
    pub add: Vec<Atom>,
    pub del: Vec<Atom>,
}

impl OperatorSchema {
    /// Checks that every argument is a parameter and that add and delete sets are disjoint.
    pub fn validate(&self) -> Result<(), ModelError> {
        let names: HashSet<&str> = self.params.iter().map(|p| p.name.as_str()).collect();
        if names.len() != self.params.len() {
            return Err(ModelError::Duplicate(format!("parameter of {}", self.name)));
        }
        for atom in self.pre.iter().chain(&self.add).chain(&self.del) {
            if let Some(arg) = atom.args.iter().find(|a| !names.contains(a.as_str())) {
                return Err(ModelError::UnboundArgument { op: self.name.clone(), arg: arg.clone() });
            }
        }
        if let Some(a) = self.add.iter().find(|a| self.del.contains(a)) {
            return Err(ModelError::AddDeleteOverlap { op: self.name.clone(), atom: a.to_string() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: Vec<TypeDecl>,
    pub predicates: Vec<Predicate>,
    pub actions: Vec<OperatorSchema>,
}

impl Domain {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            requirements: vec![":strips".into(), ":typing".into()],
            types: Vec::new(),
            predicates: Vec::new(),
            actions: Vec::new(),
        }
    }

    pub fn has_type(&self, ty: &str) -> bool {
        ty == OBJECT_TYPE || self.types.iter().any(|t| t.name == ty)
    }

    pub fn parent(&self, ty: &str) -> Option<&str> {
        self.types.iter().find(|t| t.name == ty).map(|t| t.parent.as_str())
    }

    /// Whether `ty` equals `ancestor` or descends from it.
    pub fn is_subtype(&self, ty: &str, ancestor: &str) -> bool {
        let mut cur = ty;
        for _ in 0..=self.types.len() {
            if cur == ancestor {
                return true;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
        false
    }

    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&OperatorSchema> {
        self.actions.iter().find(|a| a.name == name)
    }

    fn check_atom(&self, atom: &Atom) -> Result<(), ModelError> {
        let p = self.predicate(&atom.pred).ok_or_else(|| ModelError::UnknownPredicate(atom.pred.clone()))?;
        if p.params.len() != atom.args.len() {
            return Err(ModelError::Arity { pred: atom.pred.clone(), expected: p.params.len(), got: atom.args.len() });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let mut seen = HashSet::new();
        for t in &self.types {
            if !seen.insert(t.name.as_str()) || t.name == OBJECT_TYPE {
                return Err(ModelError::Duplicate(t.name.clone()));
            }
            if !self.has_type(&t.parent) {
                return Err(ModelError::UnknownType(t.parent.clone()));
            }
        }
        let mut seen = HashSet::new();
        for p in &self.predicates {
            if !seen.insert(p.name.as_str()) {
                return Err(ModelError::Duplicate(p.name.clone()));
            }
            if let Some(q) = p.params.iter().find(|q| !self.has_type(&q.ty)) {
                return Err(ModelError::UnknownType(q.ty.clone()));
            }
        }
        let mut seen = HashSet::new();
        for a in &self.actions {
            if !seen.insert(a.name.as_str()) {
                return Err(ModelError::Duplicate(a.name.clone()));
            }
            if let Some(q) = a.params.iter().find(|q| !self.has_type(&q.ty)) {
                return Err(ModelError::UnknownType(q.ty.clone()));
            }
            for atom in a.pre.iter().chain(&a.add).chain(&a.del) {
                self.check_atom(atom)?;
            }
            a.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub domain: String,
    pub objects: Vec<(String, String)>,
    pub init: Vec<Atom>,
    pub goal: Vec<Atom>,
}

impl Problem {
    pub fn new(name: &str, domain: &Domain) -> Self {
        Self {
            name: name.to_owned(),
            domain: domain.name.clone(),
            objects: Vec::new(),
            init: Vec::new(),
            goal: Vec::new(),
        }
    }

    pub fn object_type(&self, name: &str) -> Option<&str> {
        self.objects.iter().find(|(o, _)| o == name).map(|(_, t)| t.as_str())
    }

    pub fn validate(&self, domain: &Domain) -> Result<(), ModelError> {
        let mut seen = HashSet::new();
        for (o, t) in &self.objects {
            if !seen.insert(o.as_str()) {
                return Err(ModelError::Duplicate(o.clone()));
            }
            if !domain.has_type(t) {
                return Err(ModelError::UnknownType(t.clone()));
            }
        }
        for atom in self.init.iter().chain(&self.goal) {
            domain.check_atom(atom)?;
            if let Some(a) = atom.args.iter().find(|a| !seen.contains(a.as_str())) {
                return Err(ModelError::UnknownObject(a.clone()));
            }
        }
        Ok(())
    }
}
