use std::collections::HashSet;

use crate::error::ParseError;
use crate::model::{Atom, Domain, OperatorSchema, Param, Predicate, Problem, TypeDecl, OBJECT_TYPE};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> (Vec<Token>, (usize, usize)) {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '(' | ')' => {
                chars.next();
                col += 1;
                out.push(Token { tok: if c == '(' { Tok::Open } else { Tok::Close }, line: l, col: k });
            }
            _ => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    w.extend(c.to_lowercase());
                    chars.next();
                    col += 1;
                }
                out.push(Token { tok: Tok::Word(w), line: l, col: k });
            }
        }
    }
    (out, (line, col))
}

type Res<T> = Result<T, ParseError>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    eof: (usize, usize),
    context: String,
}

fn is_name(w: &str) -> bool {
    !w.is_empty() && !w.starts_with('?') && !w.starts_with(':') && w != "-"
}

impl Parser {
    fn new(text: &str) -> Self {
        let (toks, eof) = lex(text);
        Self { toks, pos: 0, eof, context: String::new() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn error_at(&self, pos: usize, expected: &[&str]) -> ParseError {
        let (line, col, found) = match self.toks.get(pos) {
            Some(t) => (
                t.line,
                t.col,
                match &t.tok {
                    Tok::Open => "`(`".to_owned(),
                    Tok::Close => "`)`".to_owned(),
                    Tok::Word(w) => format!("`{w}`"),
                },
            ),
            None => (self.eof.0, self.eof.1, "end of input".to_owned()),
        };
        ParseError {
            line,
            col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
            context: self.context.clone(),
        }
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        self.error_at(self.pos, expected)
    }

    fn open(&mut self) -> Res<()> {
        match self.peek() {
            Some(Tok::Open) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&["`(`"])),
        }
    }

    fn close(&mut self) -> Res<()> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&["`)`"])),
        }
    }

    fn at_close(&self) -> bool {
        matches!(self.peek(), Some(Tok::Close))
    }

    fn word(&mut self, what: &str) -> Res<(String, usize)> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok((w, self.pos - 1))
            }
            _ => Err(self.err(&[what])),
        }
    }

    fn name(&mut self, what: &str) -> Res<(String, usize)> {
        let at = self.pos;
        let (w, i) = self.word(what)?;
        if is_name(&w) {
            Ok((w, i))
        } else {
            Err(self.error_at(at, &[what]))
        }
    }

    fn keyword(&mut self, kw: &str) -> Res<()> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&[&format!("`{kw}`")])),
        }
    }

    fn end(&self) -> Res<()> {
        if self.pos < self.toks.len() {
            Err(self.err(&["end of input"]))
        } else {
            Ok(())
        }
    }

    /// `a b - t c` style list; entries without a type get `object`. Returns token positions too.
    fn typed_list(&mut self, vars: bool) -> Res<Vec<(String, String, usize)>> {
        let what = if vars { "variable" } else { "name" };
        let mut out = Vec::new();
        let mut pending: Vec<(String, usize)> = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Close) => break,
                Some(Tok::Word(w)) if w == "-" => {
                    if pending.is_empty() {
                        return Err(self.err(&[what]));
                    }
                    self.pos += 1;
                    let (ty, _) = self.name("type name")?;
                    out.extend(pending.drain(..).map(|(n, i)| (n, ty.clone(), i)));
                }
                Some(Tok::Word(w)) => {
                    let ok = if vars { w.len() > 1 && w.starts_with('?') } else { is_name(w) };
                    if !ok {
                        return Err(self.err(&[what, "`-`", "`)`"]));
                    }
                    pending.push((w.clone(), self.pos));
                    self.pos += 1;
                }
                _ => return Err(self.err(&[what, "`-`", "`)`"])),
            }
        }
        out.extend(pending.into_iter().map(|(n, i)| (n, OBJECT_TYPE.to_owned(), i)));
        Ok(out)
    }

    /// Body of an atom after its `(`: predicate name, arguments, `)`.
    fn atom_body(&mut self, first: &[&str]) -> Res<(Atom, usize)> {
        let at = self.pos;
        let (pred, _) = match self.peek() {
            Some(Tok::Word(w)) if is_name(w) && w != "not" && w != "and" => self.word("")?,
            _ => return Err(self.err(first)),
        };
        let mut args = Vec::new();
        while !self.at_close() {
            match self.peek() {
                Some(Tok::Word(w)) if w != "-" && !w.starts_with(':') => {
                    args.push(w.clone());
                    self.pos += 1;
                }
                _ => return Err(self.err(&["argument", "`)`"])),
            }
        }
        self.close()?;
        Ok((Atom { pred, args }, at))
    }

    /// `(and lit*)`, a single literal, or `()`. Literals may be negated when `allow_not`.
    fn conjunction(&mut self, allow_not: bool) -> Res<Vec<(Atom, bool, usize)>> {
        let lit_first: &[&str] = if allow_not { &["predicate name", "`not`"] } else { &["predicate name"] };
        let mut first: Vec<&str> = lit_first.to_vec();
        first.extend(["`and`", "`)`"]);
        self.open()?;
        if self.at_close() {
            self.close()?;
            return Ok(Vec::new());
        }
        if matches!(self.peek(), Some(Tok::Word(w)) if w == "and") {
            self.pos += 1;
            let mut out = Vec::new();
            while !self.at_close() {
                if self.peek().is_none() {
                    return Err(self.err(&["`(`", "`)`"]));
                }
                self.open()?;
                out.push(self.literal(allow_not, lit_first)?);
            }
            self.close()?;
            Ok(out)
        } else {
            if !matches!(self.peek(), Some(Tok::Word(w)) if is_name(w)) {
                return Err(self.err(&first));
            }
            Ok(vec![self.literal(allow_not, lit_first)?])
        }
    }

    fn literal(&mut self, allow_not: bool, first: &[&str]) -> Res<(Atom, bool, usize)> {
        if allow_not && matches!(self.peek(), Some(Tok::Word(w)) if w == "not") {
            self.pos += 1;
            self.open()?;
            let (a, at) = self.atom_body(&["predicate name"])?;
            self.close()?;
            Ok((a, false, at))
        } else {
            let (a, at) = self.atom_body(first)?;
            Ok((a, true, at))
        }
    }
}

fn check_atom(p: &Parser, domain: &Domain, atom: &Atom, at: usize) -> Res<()> {
    match domain.predicate(&atom.pred) {
        None => Err(p.error_at(at, &["declared predicate"])),
        Some(d) if d.params.len() != atom.args.len() => {
            let msg = format!("{} argument(s) for `{}`", d.params.len(), atom.pred);
            Err(p.error_at(at, &[&msg]))
        }
        Some(_) => Ok(()),
    }
}

fn check_type(p: &Parser, domain: &Domain, ty: &str, at: usize) -> Res<()> {
    if domain.has_type(ty) {
        Ok(())
    } else {
        Err(p.error_at(at, &[&format!("declared type (not `{ty}`)")]))
    }
}

/// Parses a domain in the `.kd-pddl` s-expression subset.
pub fn parse_domain(text: &str) -> Result<Domain, ParseError> {
    let mut p = Parser::new(text);
    p.open()?;
    p.keyword("define")?;
    p.open()?;
    p.keyword("domain")?;
    let (name, _) = p.name("domain name")?;
    p.close()?;
    let mut d =
        Domain { name, requirements: Vec::new(), types: Vec::new(), predicates: Vec::new(), actions: Vec::new() };
    while !p.at_close() {
        p.open()?;
        p.context.clear();
        let kw_at = p.pos;
        let (kw, _) = p.word("section keyword")?;
        match kw.as_str() {
            ":requirements" => {
                while !p.at_close() {
                    let (r, at) = p.word("requirement")?;
                    if !r.starts_with(':') {
                        return Err(p.error_at(at, &["requirement keyword"]));
                    }
                    d.requirements.push(r);
                }
            }
            ":types" => {
                p.context = "types".into();
                for (n, parent, at) in p.typed_list(false)? {
                    if n == OBJECT_TYPE || d.has_type(&n) {
                        return Err(p.error_at(at, &["new type name"]));
                    }
                    d.types.push(TypeDecl { name: n, parent });
                }
                for t in &d.types {
                    if !d.has_type(&t.parent) {
                        return Err(p.err(&[&format!("declared type (not `{}`)", t.parent)]));
                    }
                }
            }
            ":predicates" => {
                p.context = "predicates".into();
                while !p.at_close() {
                    p.open()?;
                    let (n, at) = p.name("predicate name")?;
                    if d.predicate(&n).is_some() {
                        return Err(p.error_at(at, &["new predicate name"]));
                    }
                    let mut params = Vec::new();
                    for (v, ty, at) in p.typed_list(true)? {
                        check_type(&p, &d, &ty, at)?;
                        params.push(Param { name: v, ty });
                    }
                    p.close()?;
                    d.predicates.push(Predicate { name: n, params });
                }
            }
            ":action" => {
                let op = parse_action(&mut p, &d)?;
                d.actions.push(op);
            }
            _ => return Err(p.error_at(kw_at, &["`:requirements`", "`:types`", "`:predicates`", "`:action`"])),
        }
        p.close()?;
    }
    p.context.clear();
    p.close()?;
    p.end()?;
    Ok(d)
}

fn parse_action(p: &mut Parser, d: &Domain) -> Res<OperatorSchema> {
    let (name, at) = p.name("action name")?;
    if d.action(&name).is_some() {
        return Err(p.error_at(at, &["new action name"]));
    }
    p.context = format!("action `{name}`");
    let mut op = OperatorSchema { name, params: Vec::new(), pre: Vec::new(), add: Vec::new(), del: Vec::new() };
    let mut seen: HashSet<&str> = HashSet::new();
    while !p.at_close() {
        let kw_at = p.pos;
        let (kw, _) = p.word("`:parameters`, `:precondition` or `:effect`")?;
        if !seen.insert(match kw.as_str() {
            ":parameters" => ":parameters",
            ":precondition" => ":precondition",
            ":effect" => ":effect",
            _ => return Err(p.error_at(kw_at, &["`:parameters`", "`:precondition`", "`:effect`", "`)`"])),
        }) {
            return Err(p.error_at(kw_at, &["each action section at most once"]));
        }
        match kw.as_str() {
            ":parameters" => {
                p.context = format!(":parameters of action `{}`", op.name);
                p.open()?;
                for (v, ty, at) in p.typed_list(true)? {
                    check_type(p, d, &ty, at)?;
                    if op.params.iter().any(|q| q.name == v) {
                        return Err(p.error_at(at, &["distinct parameter name"]));
                    }
                    op.params.push(Param { name: v, ty });
                }
                p.close()?;
            }
            ":precondition" => {
                p.context = format!(":precondition of action `{}`", op.name);
                for (a, _, at) in p.conjunction(false)? {
                    check_atom(p, d, &a, at)?;
                    check_args(p, &op, &a, at)?;
                    if !op.pre.contains(&a) {
                        op.pre.push(a);
                    }
                }
            }
            _ => {
                p.context = format!(":effect of action `{}`", op.name);
                for (a, positive, at) in p.conjunction(true)? {
                    check_atom(p, d, &a, at)?;
                    check_args(p, &op, &a, at)?;
                    let (this, other) = if positive { (&mut op.add, &op.del) } else { (&mut op.del, &op.add) };
                    if other.contains(&a) {
                        return Err(p.error_at(at, &["add and delete effects to be disjoint"]));
                    }
                    if !this.contains(&a) {
                        this.push(a);
                    }
                }
            }
        }
        p.context = format!("action `{}`", op.name);
    }
    Ok(op)
}

fn check_args(p: &Parser, op: &OperatorSchema, atom: &Atom, at: usize) -> Res<()> {
    for (i, arg) in atom.args.iter().enumerate() {
        if !op.params.iter().any(|q| &q.name == arg) {
            return Err(p.error_at(at + 1 + i, &["parameter variable"]));
        }
    }
    Ok(())
}

/// Parses a problem against an already parsed domain.
pub fn parse_problem(text: &str, domain: &Domain) -> Result<Problem, ParseError> {
    let mut p = Parser::new(text);
    p.open()?;
    p.keyword("define")?;
    p.open()?;
    p.keyword("problem")?;
    let (name, _) = p.name("problem name")?;
    p.close()?;
    let mut pr = Problem { name, domain: String::new(), objects: Vec::new(), init: Vec::new(), goal: Vec::new() };
    let mut seen: HashSet<String> = HashSet::new();
    while !p.at_close() {
        p.open()?;
        let kw_at = p.pos;
        let (kw, _) = p.word("section keyword")?;
        if !seen.insert(kw.clone()) {
            return Err(p.error_at(kw_at, &["each problem section at most once"]));
        }
        p.context = kw.clone();
        match kw.as_str() {
            ":domain" => {
                let (dn, at) = p.name("domain name")?;
                if dn != domain.name {
                    return Err(p.error_at(at, &[&format!("`{}`", domain.name)]));
                }
                pr.domain = dn;
            }
            ":objects" => {
                for (o, ty, at) in p.typed_list(false)? {
                    check_type(&p, domain, &ty, at)?;
                    if pr.object_type(&o).is_some() {
                        return Err(p.error_at(at, &["distinct object name"]));
                    }
                    pr.objects.push((o, ty));
                }
            }
            ":init" => {
                while !p.at_close() {
                    p.open()?;
                    let (a, at) = p.atom_body(&["predicate name"])?;
                    check_problem_atom(&p, domain, &pr, &a, at)?;
                    if !pr.init.contains(&a) {
                        pr.init.push(a);
                    }
                }
            }
            ":goal" => {
                for (a, _, at) in p.conjunction(false)? {
                    check_problem_atom(&p, domain, &pr, &a, at)?;
                    if !pr.goal.contains(&a) {
                        pr.goal.push(a);
                    }
                }
            }
            _ => return Err(p.error_at(kw_at, &["`:domain`", "`:objects`", "`:init`", "`:goal`"])),
        }
        p.close()?;
    }
    p.context.clear();
    if pr.domain.is_empty() {
        return Err(p.err(&["`(:domain ...)` section"]));
    }
    p.close()?;
    p.end()?;
    Ok(pr)
}

fn check_problem_atom(p: &Parser, d: &Domain, pr: &Problem, a: &Atom, at: usize) -> Res<()> {
    check_atom(p, d, a, at)?;
    for (i, arg) in a.args.iter().enumerate() {
        if pr.object_type(arg).is_none() {
            return Err(p.error_at(at + 1 + i, &["declared object"]));
        }
    }
    Ok(())
}
