use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fol::{ArithOp, FamilyBody, FamilyKind, FoTerm, Formula, Sort, Symbol, Variable};
use crate::term::Relation;

use super::eval::Compiled;
use super::{OracleError, Universe, Value};

pub type NodeId = u32;
pub const TRUE: NodeId = 0;
pub const FALSE: NodeId = 1;

/// Solutions beyond this many make a quantifier fall back to the domain.
const MAX_CANDIDATES: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub predicate: Arc<str>,
    pub args: Vec<Value>,
}

impl GroundAtom {
    pub fn new(predicate: &str, args: Vec<Value>) -> Self {
        GroundAtom { predicate: predicate.into(), args }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    atoms: Vec<GroundAtom>,
    index: BTreeMap<GroundAtom, u32>,
}

impl AtomTable {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn get(&self, id: u32) -> &GroundAtom {
        &self.atoms[id as usize]
    }

    pub fn id(&self, a: &GroundAtom) -> Option<u32> {
        self.index.get(a).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundAtom> {
        self.atoms.iter()
    }

    fn insert(&mut self, a: GroundAtom) -> u32 {
        if let Some(&i) = self.index.get(&a) {
            return i;
        }
        let i = self.atoms.len() as u32;
        self.index.insert(a.clone(), i);
        self.atoms.push(a);
        i
    }
}

/// A node of a ground propositional formula. Counting nodes stand for
/// extended precomputed atoms and are evaluated definitionally from the
/// values of their witness formulas.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    True,
    False,
    Atom { atom: u32, primed: bool },
    Not(NodeId),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    Implies(NodeId, NodeId),
    AtLeast { items: Vec<NodeId>, bound: u32, primed: bool },
    AtMost { items: Vec<NodeId>, bound: u32, primed: bool },
    Start { base: NodeId, items: Vec<NodeId>, bound: u32, primed: bool },
}

type Env = Vec<(Variable, Value)>;

fn lookup<'e>(env: &'e Env, v: &Variable) -> Option<&'e Value> {
    env.iter().rev().find(|(w, _)| w == v).map(|(_, x)| x)
}

fn constant(c: &crate::term::PrecomputedTerm) -> Result<Value, OracleError> {
    Value::try_from(c)
}

/// Evaluate a term under an assignment. Unbound variables are an error.
pub(crate) fn eval_term(t: &FoTerm, env: &Env) -> Result<Value, OracleError> {
    let int = |t: &FoTerm| -> Result<i64, OracleError> {
        match eval_term(t, env)? {
            Value::Int(n) => Ok(n),
            v => Err(OracleError::NonInteger(v.to_string())),
        }
    };
    Ok(match t {
        FoTerm::Constant(c) => constant(c)?,
        FoTerm::Var(v) => lookup(env, v).cloned().ok_or_else(|| OracleError::Unbound(v.name.clone()))?,
        FoTerm::Neg(a) => Value::Int(int(a)?.checked_neg().ok_or(OracleError::Overflow)?),
        FoTerm::Abs(a) => Value::Int(int(a)?.checked_abs().ok_or(OracleError::Overflow)?),
        FoTerm::Binary(op, a, b) => {
            let (x, y) = (int(a)?, int(b)?);
            Value::Int(
                match op {
                    ArithOp::Add => x.checked_add(y),
                    ArithOp::Sub => x.checked_sub(y),
                    ArithOp::Mul => x.checked_mul(y),
                }
                .ok_or(OracleError::Overflow)?,
            )
        }
    })
}

fn term_bound(t: &FoTerm, env: &Env) -> bool {
    t.all_vars(&mut |v| lookup(env, v).is_some())
}

/// a·x + b form of a term in the integer variable x, if it has one.
fn linear(t: &FoTerm, x: &Variable, env: &Env) -> Option<(i128, i128)> {
    Some(match t {
        FoTerm::Var(v) if v == x => (1, 0),
        FoTerm::Var(v) => (0, lookup(env, v)?.as_int()? as i128),
        FoTerm::Constant(c) => (0, c.as_i64()? as i128),
        FoTerm::Neg(a) => {
            let (p, q) = linear(a, x, env)?;
            (-p, -q)
        }
        FoTerm::Abs(a) => match linear(a, x, env)? {
            (0, q) => (0, q.abs()),
            _ => return None,
        },
        FoTerm::Binary(op, a, b) => {
            let (p1, q1) = linear(a, x, env)?;
            let (p2, q2) = linear(b, x, env)?;
            match op {
                ArithOp::Add => (p1.checked_add(p2)?, q1.checked_add(q2)?),
                ArithOp::Sub => (p1.checked_sub(p2)?, q1.checked_sub(q2)?),
                ArithOp::Mul if p1 == 0 => (q1.checked_mul(p2)?, q1.checked_mul(q2)?),
                ArithOp::Mul if p2 == 0 => (p1.checked_mul(q2)?, q1.checked_mul(q2)?),
                ArithOp::Mul => return None,
            }
        }
    })
}

fn floor_div(n: i128, d: i128) -> i128 {
    let q = n / d;
    if n % d != 0 && ((n < 0) != (d < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(n: i128, d: i128) -> i128 {
    -floor_div(-n, d)
}

/// What the conjuncts of a formula say about one variable.
struct Constraint {
    sort: Sort,
    empty: bool,
    eq: Option<BTreeSet<Value>>,
    lo: Option<i128>,
    hi: Option<i128>,
}

impl Constraint {
    fn new(sort: Sort) -> Self {
        Constraint { sort, empty: false, eq: None, lo: None, hi: None }
    }

    fn restrict(&mut self, set: BTreeSet<Value>) {
        self.eq = Some(match self.eq.take() {
            None => set,
            Some(old) => old.intersection(&set).cloned().collect(),
        });
    }

    fn lower(&mut self, v: i128) {
        self.lo = Some(self.lo.map_or(v, |l| l.max(v)));
    }

    fn upper(&mut self, v: i128) {
        self.hi = Some(self.hi.map_or(v, |h| h.min(v)));
    }

    fn admits(&self, v: &Value) -> bool {
        if self.sort == Sort::Integer && !v.is_int() {
            return false;
        }
        match v.as_int() {
            Some(n) => self.lo.is_none_or(|l| n as i128 >= l) && self.hi.is_none_or(|h| n as i128 <= h),
            None => self.sort == Sort::General,
        }
    }

    fn finish(self) -> Option<Vec<Value>> {
        if self.empty {
            return Some(Vec::new());
        }
        if let Some(eq) = &self.eq {
            return Some(eq.iter().filter(|v| self.admits(v)).cloned().collect());
        }
        if self.sort == Sort::Integer {
            if let (Some(lo), Some(hi)) = (self.lo, self.hi) {
                if hi < lo {
                    return Some(Vec::new());
                }
                if hi - lo < MAX_CANDIDATES as i128 {
                    let lo = i64::try_from(lo).ok()?;
                    let hi = i64::try_from(hi).ok()?;
                    return Some((lo..=hi).map(Value::Int).collect());
                }
            }
        }
        None
    }
}

/// Witness tuples of a family body with their ground nodes.
type Witnesses = Arc<Vec<(Vec<Value>, NodeId)>>;

/// Builds ground propositional formulas over a finite universe.
pub struct Grounder<'u> {
    universe: &'u Universe,
    atoms: AtomTable,
    nodes: Vec<Node>,
    index: BTreeMap<Node, NodeId>,
    instances: BTreeMap<(Arc<FamilyBody>, Vec<Value>), Witnesses>,
    warnings: BTreeSet<String>,
}

impl<'u> Grounder<'u> {
    pub fn new(universe: &'u Universe) -> Self {
        let mut g = Grounder {
            universe,
            atoms: AtomTable::default(),
            nodes: Vec::new(),
            index: BTreeMap::new(),
            instances: BTreeMap::new(),
            warnings: BTreeSet::new(),
        };
        g.mk(Node::True);
        g.mk(Node::False);
        g
    }

    pub fn universe(&self) -> &Universe {
        self.universe
    }

    /// Register every atom p(t) with t drawn from the atom base, in order.
    pub fn declare_predicate(&mut self, name: &str, arity: usize) {
        let base = self.universe.base().to_vec();
        let mut tuple = vec![0usize; arity];
        if arity > 0 && base.is_empty() {
            return;
        }
        loop {
            self.atoms.insert(GroundAtom::new(name, tuple.iter().map(|&i| base[i].clone()).collect()));
            let mut k = arity;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                tuple[k] += 1;
                if tuple[k] < base.len() {
                    break;
                }
                tuple[k] = 0;
            }
        }
    }

    pub fn declare_atom(&mut self, a: &GroundAtom) -> u32 {
        self.atoms.insert(a.clone())
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id as usize]
    }

    pub fn warnings(&self) -> impl Iterator<Item = &String> {
        self.warnings.iter()
    }

    fn mk(&mut self, n: Node) -> NodeId {
        if let Some(&i) = self.index.get(&n) {
            return i;
        }
        let i = self.nodes.len() as NodeId;
        self.index.insert(n.clone(), i);
        self.nodes.push(n);
        i
    }

    pub fn mk_not(&mut self, a: NodeId) -> NodeId {
        match a {
            TRUE => FALSE,
            FALSE => TRUE,
            _ => self.mk(Node::Not(a)),
        }
    }

    pub fn mk_and(&mut self, items: Vec<NodeId>) -> NodeId {
        let mut out = Vec::with_capacity(items.len());
        for i in items {
            match i {
                TRUE => {}
                FALSE => return FALSE,
                _ => match &self.nodes[i as usize] {
                    Node::And(inner) => out.extend_from_slice(inner),
                    _ => out.push(i),
                },
            }
        }
        out.sort_unstable();
        out.dedup();
        match out.len() {
            0 => TRUE,
            1 => out[0],
            _ => self.mk(Node::And(out)),
        }
    }

    pub fn mk_or(&mut self, items: Vec<NodeId>) -> NodeId {
        let mut out = Vec::with_capacity(items.len());
        for i in items {
            match i {
                FALSE => {}
                TRUE => return TRUE,
                _ => match &self.nodes[i as usize] {
                    Node::Or(inner) => out.extend_from_slice(inner),
                    _ => out.push(i),
                },
            }
        }
        out.sort_unstable();
        out.dedup();
        match out.len() {
            0 => FALSE,
            1 => out[0],
            _ => self.mk(Node::Or(out)),
        }
    }

    pub fn mk_implies(&mut self, a: NodeId, b: NodeId) -> NodeId {
        match (a, b) {
            (FALSE, _) | (_, TRUE) => TRUE,
            (TRUE, _) => b,
            (_, FALSE) => self.mk_not(a),
            _ if a == b => TRUE,
            _ => self.mk(Node::Implies(a, b)),
        }
    }

    fn warn(&mut self, w: String) {
        self.warnings.insert(w);
    }

    /// Ground a closed formula.
    pub fn ground(&mut self, f: &Formula) -> Result<NodeId, OracleError> {
        let mut free = None;
        if !f.all_free_vars(&mut |v| {
            free = Some(v.name.clone());
            false
        }) {
            return Err(OracleError::NotClosed(free.unwrap_or_default()));
        }
        self.ground_in(f, &mut Vec::new())
    }

    /// Ground a formula whose free variables are given values.
    pub fn ground_with(&mut self, f: &Formula, assignment: &[(Variable, Value)]) -> Result<NodeId, OracleError> {
        let mut env = assignment.to_vec();
        let mut free = None;
        if !f.all_free_vars(&mut |v| {
            lookup(&env, v).is_some() || {
                free = Some(v.name.clone());
                false
            }
        }) {
            return Err(OracleError::NotClosed(free.unwrap_or_default()));
        }
        self.ground_in(f, &mut env)
    }

    fn ground_in(&mut self, f: &Formula, env: &mut Env) -> Result<NodeId, OracleError> {
        Ok(match f {
            Formula::True => TRUE,
            Formula::False => FALSE,
            Formula::Compare(l, r, m) => {
                let (a, b) = (eval_term(l, env)?, eval_term(m, env)?);
                if r.holds(a.cmp(&b)) {
                    TRUE
                } else {
                    FALSE
                }
            }
            Formula::Atom(a) => {
                let args = a.args.iter().map(|t| eval_term(t, env)).collect::<Result<Vec<_>, _>>()?;
                self.ground_atom(&a.predicate.symbol, a.predicate.primed, args)?
            }
            Formula::Not(g) => {
                let g = self.ground_in(g, env)?;
                self.mk_not(g)
            }
            Formula::And(fs) => {
                let mut items = Vec::with_capacity(fs.len());
                for g in fs {
                    let i = self.ground_in(g, env)?;
                    if i == FALSE {
                        return Ok(FALSE);
                    }
                    items.push(i);
                }
                self.mk_and(items)
            }
            Formula::Or(fs) => {
                let mut items = Vec::with_capacity(fs.len());
                for g in fs {
                    let i = self.ground_in(g, env)?;
                    if i == TRUE {
                        return Ok(TRUE);
                    }
                    items.push(i);
                }
                self.mk_or(items)
            }
            Formula::Implies(a, b) => {
                let a = self.ground_in(a, env)?;
                if a == FALSE {
                    return Ok(TRUE);
                }
                let b = self.ground_in(b, env)?;
                self.mk_implies(a, b)
            }
            Formula::Iff(a, b) => {
                let a = self.ground_in(a, env)?;
                let b = self.ground_in(b, env)?;
                let l = self.mk_implies(a, b);
                let r = self.mk_implies(b, a);
                self.mk_and(vec![l, r])
            }
            Formula::Forall(vs, body) => self.ground_quant(true, vs, body, env)?,
            Formula::Exists(vs, body) => self.ground_quant(false, vs, body, env)?,
        })
    }

    fn sort_domain(&self, s: Sort) -> &'u [Value] {
        match s {
            Sort::General => self.universe.domain(),
            Sort::Integer => self.universe.integers(),
        }
    }

    fn ground_quant(&mut self, forall: bool, vars: &[Variable], body: &Formula, env: &mut Env) -> Result<NodeId, OracleError> {
        if vars.is_empty() {
            return self.ground_in(body, env);
        }
        let guide = match (forall, body) {
            (true, Formula::Implies(a, _)) => Some(&**a),
            (true, _) => None,
            (false, _) => Some(body),
        };
        let mut pick = None;
        if let Some(g) = guide {
            for (i, v) in vars.iter().enumerate() {
                if let Some(c) = self.candidates(v, g, env)? {
                    pick = Some((i, c));
                    break;
                }
            }
        }
        let (i, values) = match pick {
            Some(p) => p,
            None => (0, self.sort_domain(vars[0].sort).to_vec()),
        };
        let rest: Vec<Variable> = vars.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
        let mut items = Vec::with_capacity(values.len());
        for val in values {
            env.push((vars[i].clone(), val));
            let r = self.ground_quant(forall, &rest, body, env);
            env.pop();
            let r = r?;
            if forall && r == FALSE {
                return Ok(FALSE);
            }
            if !forall && r == TRUE {
                return Ok(TRUE);
            }
            items.push(r);
        }
        Ok(if forall { self.mk_and(items) } else { self.mk_or(items) })
    }

    /// Values of `x` outside the returned set make `f` ⊥ in every world.
    /// `None` means no such finite set was found.
    fn candidates(&self, x: &Variable, f: &Formula, env: &mut Env) -> Result<Option<Vec<Value>>, OracleError> {
        let mut c = Constraint::new(x.sort);
        self.collect(x, f, env, &mut c)?;
        Ok(c.finish())
    }

    fn collect(&self, x: &Variable, f: &Formula, env: &mut Env, c: &mut Constraint) -> Result<(), OracleError> {
        if c.empty {
            return Ok(());
        }
        match f {
            Formula::False => c.empty = true,
            Formula::And(fs) => {
                for g in fs {
                    self.collect(x, g, env, c)?;
                }
            }
            Formula::Compare(l, rel, r) => {
                let lx = l.contains_var(x);
                let rx = r.contains_var(x);
                if !lx && !rx {
                    if term_bound(l, env) && term_bound(r, env) {
                        let (a, b) = (eval_term(l, env)?, eval_term(r, env)?);
                        if !rel.holds(a.cmp(&b)) {
                            c.empty = true;
                        }
                    }
                    return Ok(());
                }
                if *rel == Relation::Eq {
                    let other = match (l, r) {
                        (FoTerm::Var(v), t) | (t, FoTerm::Var(v)) if v == x && !t.contains_var(x) => Some(t),
                        _ => None,
                    };
                    if let Some(t) = other {
                        if term_bound(t, env) {
                            let mut s = BTreeSet::new();
                            s.insert(eval_term(t, env)?);
                            c.restrict(s);
                            return Ok(());
                        }
                    }
                }
                if x.sort == Sort::Integer {
                    self.linear_bound(x, l, *rel, r, env, c);
                }
            }
            Formula::Implies(a, b) => {
                if let Some(true) = self.eval_closed_sigma0(a, env)? {
                    self.collect(x, b, env, c)?;
                }
            }
            Formula::Or(fs) => {
                let mut union = BTreeSet::new();
                for g in fs {
                    match self.candidates(x, g, env)? {
                        Some(vs) => union.extend(vs),
                        None => return Ok(()),
                    }
                }
                c.restrict(union);
            }
            Formula::Exists(ys, h) => {
                if ys.contains(x) || !h.has_free_var(x) {
                    return Ok(());
                }
                let mut union = BTreeSet::new();
                if self.union_over_solutions(x, ys, h, env, &mut union)? {
                    c.restrict(union);
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Accumulate candidates for `x` in `h` over every solution of `ys`.
    /// Returns false when some branch gives no finite answer.
    fn union_over_solutions(
        &self,
        x: &Variable,
        ys: &[Variable],
        h: &Formula,
        env: &mut Env,
        out: &mut BTreeSet<Value>,
    ) -> Result<bool, OracleError> {
        if ys.is_empty() {
            return Ok(match self.candidates(x, h, env)? {
                Some(vs) => {
                    out.extend(vs);
                    out.len() <= MAX_CANDIDATES
                }
                None => false,
            });
        }
        for (i, y) in ys.iter().enumerate() {
            if let Some(vals) = self.candidates(y, h, env)? {
                let rest: Vec<Variable> = ys.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect();
                for val in vals {
                    env.push((y.clone(), val));
                    let ok = self.union_over_solutions(x, &rest, h, env, out);
                    env.pop();
                    if !ok? {
                        return Ok(false);
                    }
                }
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn linear_bound(&self, x: &Variable, l: &FoTerm, rel: Relation, r: &FoTerm, env: &Env, c: &mut Constraint) {
        let (Some((a1, b1)), Some((a2, b2))) = (linear(l, x, env), linear(r, x, env)) else {
            return;
        };
        let (Some(a), Some(b)) = (a1.checked_sub(a2), b1.checked_sub(b2)) else {
            return;
        };
        // a·x + b rel 0, i.e. a·x rel n
        let Some(n) = b.checked_neg() else { return };
        if a == 0 {
            if !rel.holds(0i128.cmp(&n)) {
                c.empty = true;
            }
            return;
        }
        let rel = if a < 0 { flip(rel) } else { rel };
        let (a, n) = if a < 0 { (-a, -n) } else { (a, n) };
        match rel {
            Relation::Eq => {
                if n % a != 0 {
                    c.empty = true;
                } else if let Ok(v) = i64::try_from(n / a) {
                    let mut s = BTreeSet::new();
                    s.insert(Value::Int(v));
                    c.restrict(s);
                } else {
                    c.empty = true;
                }
            }
            Relation::Ne => {}
            Relation::Lt => c.upper(ceil_div(n, a) - 1),
            Relation::Le => c.upper(floor_div(n, a)),
            Relation::Gt => c.lower(floor_div(n, a) + 1),
            Relation::Ge => c.lower(ceil_div(n, a)),
        }
    }

    /// Truth value of a quantifier-free σ0 formula whose variables are all
    /// bound, or `None` if the formula is not of that kind.
    fn eval_closed_sigma0(&self, f: &Formula, env: &Env) -> Result<Option<bool>, OracleError> {
        Ok(match f {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Compare(l, r, m) => {
                if term_bound(l, env) && term_bound(m, env) {
                    Some(r.holds(eval_term(l, env)?.cmp(&eval_term(m, env)?)))
                } else {
                    None
                }
            }
            Formula::Not(g) => self.eval_closed_sigma0(g, env)?.map(|b| !b),
            Formula::And(fs) => {
                let mut all = true;
                for g in fs {
                    match self.eval_closed_sigma0(g, env)? {
                        Some(true) => {}
                        Some(false) => return Ok(Some(false)),
                        None => all = false,
                    }
                }
                if all {
                    Some(true)
                } else {
                    None
                }
            }
            _ => None,
        })
    }

    fn ground_atom(&mut self, symbol: &Symbol, primed: bool, args: Vec<Value>) -> Result<NodeId, OracleError> {
        match symbol {
            Symbol::Plain { name, arity } => {
                let atom = GroundAtom::new(name, args);
                let id = match self.atoms.id(&atom) {
                    Some(id) => id,
                    None if atom.args.iter().all(|v| self.universe.in_base(v)) => self.atoms.insert(atom),
                    None => {
                        self.warn(format!("atoms of {name}/{arity} with arguments outside the universe are fixed false"));
                        return Ok(FALSE);
                    }
                };
                Ok(self.mk(Node::Atom { atom: id, primed }))
            }
            Symbol::Family(kind, body) => self.ground_family(*kind, body, primed, args),
        }
    }

    fn instance(&mut self, body: &Arc<FamilyBody>, v: &[Value]) -> Result<Witnesses, OracleError> {
        let key = (body.clone(), v.to_vec());
        if let Some(w) = self.instances.get(&key) {
            return Ok(w.clone());
        }
        let k = body.bound().len();
        let domain = self.universe.domain();
        let mut out = Vec::new();
        let mut env: Env = body.params().iter().cloned().zip(v.iter().cloned()).collect();
        let mut idx = vec![0usize; k];
        if domain.is_empty() {
            let w = Arc::new(out);
            self.instances.insert(key, w.clone());
            return Ok(w);
        }
        loop {
            let tuple: Vec<Value> = idx.iter().map(|&i| domain[i].clone()).collect();
            let base = env.len();
            env.extend(body.bound().iter().cloned().zip(tuple.iter().cloned()));
            let id = self.ground_in(body.formula(), &mut env);
            env.truncate(base);
            let id = id?;
            if id != FALSE {
                if tuple.iter().any(|t| !self.universe.in_base(t)) {
                    self.warn(format!(
                        "witnesses of {} lie outside the universe; counts over it are truncated",
                        body.canonical()
                    ));
                }
                out.push((tuple, id));
            }
            let mut j = k;
            loop {
                if j == 0 {
                    let w = Arc::new(out);
                    self.instances.insert(key, w.clone());
                    return Ok(w);
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < domain.len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }

    fn ground_family(&mut self, kind: FamilyKind, body: &Arc<FamilyBody>, primed: bool, args: Vec<Value>) -> Result<NodeId, OracleError> {
        let k = body.bound().len();
        let m = body.params().len();
        match kind {
            FamilyKind::Atleast | FamilyKind::Atmost => {
                let witnesses = self.instance(body, &args[..m])?;
                let n = witnesses.len() as i64;
                let r = match &args[m] {
                    Value::Int(r) => *r,
                    _ => return Ok(if kind == FamilyKind::Atleast { FALSE } else { TRUE }),
                };
                let items: Vec<NodeId> = witnesses.iter().map(|(_, i)| *i).collect();
                if kind == FamilyKind::Atleast {
                    if r <= 0 {
                        return Ok(TRUE);
                    }
                    if r > n {
                        return Ok(FALSE);
                    }
                    Ok(self.mk(Node::AtLeast { items, bound: r as u32, primed }))
                } else {
                    if r < 0 {
                        return Ok(FALSE);
                    }
                    if r >= n {
                        return Ok(TRUE);
                    }
                    Ok(self.mk(Node::AtMost { items, bound: r as u32, primed }))
                }
            }
            FamilyKind::Start => {
                let x = &args[..k];
                let v = &args[k..k + m];
                let n = match &args[k + m] {
                    Value::Int(n) => *n,
                    other => return Err(OracleError::NonInteger(other.to_string())),
                };
                if n <= 0 {
                    return Ok(TRUE);
                }
                let witnesses = self.instance(body, v)?;
                let mut env: Env = body.params().iter().cloned().zip(v.iter().cloned()).collect();
                env.extend(body.bound().iter().cloned().zip(x.iter().cloned()));
                let base = self.ground_in(body.formula(), &mut env)?;
                if base == FALSE {
                    return Ok(FALSE);
                }
                let items: Vec<NodeId> = witnesses.iter().filter(|(t, _)| t.as_slice() > x).map(|(_, i)| *i).collect();
                if (n - 1) as usize > items.len() {
                    return Ok(FALSE);
                }
                Ok(self.mk(Node::Start { base, items, bound: n as u32, primed }))
            }
        }
    }

    /// Freeze the nodes reachable from `roots` into an evaluator.
    pub fn compile(&self, roots: &[NodeId]) -> Compiled {
        Compiled::new(&self.nodes, roots)
    }

    pub fn into_grounding(self, roots: &[NodeId]) -> Grounding {
        let program = self.compile(roots);
        Grounding { atoms: self.atoms, program, warnings: self.warnings.into_iter().collect() }
    }
}

fn flip(r: Relation) -> Relation {
    match r {
        Relation::Lt => Relation::Gt,
        Relation::Gt => Relation::Lt,
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        r => r,
    }
}

/// Ground formulas together with the atoms they mention.
#[derive(Clone, Debug)]
pub struct Grounding {
    pub atoms: AtomTable,
    pub program: Compiled,
    pub warnings: Vec<String>,
}
