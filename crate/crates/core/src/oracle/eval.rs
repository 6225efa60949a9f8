use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::ground::{Node, NodeId};

/// Value in the here-world.
pub const H: u8 = 1;
/// Value in the there-world.
pub const T: u8 = 2;
/// Classical value over the primed signature, reading unprimed symbols in
/// the here-world and primed symbols in the there-world.
pub const C: u8 = 4;

/// Atom membership for the two worlds of an HT-interpretation.
pub trait World {
    fn here(&self, atom: u32) -> bool;
    fn there(&self, atom: u32) -> bool;
}

/// Worlds given as bit masks over atoms 0..64.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Masks {
    pub here: u64,
    pub there: u64,
}

impl World for Masks {
    #[inline]
    fn here(&self, atom: u32) -> bool {
        self.here >> atom & 1 == 1
    }

    #[inline]
    fn there(&self, atom: u32) -> bool {
        self.there >> atom & 1 == 1
    }
}

/// Worlds given as membership vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub here: Vec<bool>,
    pub there: Vec<bool>,
}

impl World for Flags {
    fn here(&self, atom: u32) -> bool {
        self.here[atom as usize]
    }

    fn there(&self, atom: u32) -> bool {
        self.there[atom as usize]
    }
}

#[derive(Clone, Debug)]
enum Op {
    Const(bool),
    Atom(u32, bool),
    Not(u32),
    And(Box<[u32]>),
    Or(Box<[u32]>),
    Implies(u32, u32),
    /// Here and there counts of true items; referenced by the counting ops.
    Count(Box<[u32]>),
    AtLeast(u32, u32, bool),
    AtMost(u32, u32),
    Start(u32, u32, u32, bool),
}

/// A linearized ground formula DAG with one or more roots.
#[derive(Clone, Debug)]
pub struct Compiled {
    ops: Vec<Op>,
    roots: Vec<u32>,
}

/// Working memory for [`Compiled::eval`].
#[derive(Clone, Debug, Default)]
pub struct Scratch {
    vals: Vec<u8>,
    counts: Vec<(u32, u32)>,
}

fn children(n: &Node) -> Vec<NodeId> {
    match n {
        Node::True | Node::False | Node::Atom { .. } => Vec::new(),
        Node::Not(a) => vec![*a],
        Node::And(xs) | Node::Or(xs) => xs.clone(),
        Node::Implies(a, b) => vec![*a, *b],
        Node::AtLeast { items, .. } | Node::AtMost { items, .. } => items.clone(),
        Node::Start { base, items, .. } => {
            let mut v = items.clone();
            v.push(*base);
            v
        }
    }
}

#[inline]
fn bits(h: bool, t: bool, c: bool) -> u8 {
    ((h as u8) * H) | ((t as u8) * T) | ((c as u8) * C)
}

impl Compiled {
    pub(crate) fn new(nodes: &[Node], roots: &[NodeId]) -> Self {
        let mut live = vec![false; nodes.len()];
        let mut stack: Vec<NodeId> = roots.to_vec();
        while let Some(n) = stack.pop() {
            if !live[n as usize] {
                live[n as usize] = true;
                stack.extend(children(&nodes[n as usize]));
            }
        }
        // children always precede parents, so ascending id order is topological
        let mut slot = vec![u32::MAX; nodes.len()];
        let mut ops = Vec::new();
        let mut counts: BTreeMap<Box<[u32]>, u32> = BTreeMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            let s = |x: &NodeId| slot[*x as usize];
            let map = |xs: &[NodeId]| xs.iter().map(s).collect::<Box<[u32]>>();
            let mut count = |items: &[NodeId], ops: &mut Vec<Op>| {
                let key = map(items);
                *counts.entry(key.clone()).or_insert_with(|| {
                    ops.push(Op::Count(key));
                    ops.len() as u32 - 1
                })
            };
            let op = match n {
                Node::True => Op::Const(true),
                Node::False => Op::Const(false),
                Node::Atom { atom, primed } => Op::Atom(*atom, *primed),
                Node::Not(a) => Op::Not(s(a)),
                Node::And(xs) => Op::And(map(xs)),
                Node::Or(xs) => Op::Or(map(xs)),
                Node::Implies(a, b) => Op::Implies(s(a), s(b)),
                Node::AtLeast { items, bound, primed } => Op::AtLeast(count(items, &mut ops), *bound, *primed),
                Node::AtMost { items, bound, .. } => Op::AtMost(count(items, &mut ops), *bound),
                Node::Start { base, items, bound, primed } => Op::Start(s(base), count(items, &mut ops), *bound, *primed),
            };
            slot[i] = ops.len() as u32;
            ops.push(op);
        }
        let roots = roots.iter().map(|r| slot[*r as usize]).collect();
        Compiled { ops, roots }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn scratch(&self) -> Scratch {
        Scratch { vals: vec![0; self.ops.len()], counts: vec![(0, 0); self.ops.len()] }
    }

    /// Evaluate every node in both worlds.
    pub fn eval<W: World>(&self, w: &W, sc: &mut Scratch) {
        if sc.vals.len() != self.ops.len() {
            *sc = self.scratch();
        }
        let (buf, counts) = (&mut sc.vals, &mut sc.counts);
        for (i, op) in self.ops.iter().enumerate() {
            let v = match op {
                Op::Const(true) => H | T | C,
                Op::Const(false) => 0,
                Op::Atom(a, primed) => {
                    let t = w.there(*a);
                    let h = if *primed { t } else { w.here(*a) };
                    bits(h, t, h)
                }
                Op::Not(a) => {
                    let g = buf[*a as usize];
                    let v = if g & T == 0 { H | T } else { 0 };
                    v | if g & C == 0 { C } else { 0 }
                }
                Op::And(xs) => xs.iter().fold(H | T | C, |acc, x| acc & buf[*x as usize]),
                Op::Or(xs) => xs.iter().fold(0, |acc, x| acc | buf[*x as usize]),
                Op::Implies(a, b) => {
                    let (a, b) = (buf[*a as usize], buf[*b as usize]);
                    let t = a & T == 0 || b & T != 0;
                    let h = t && (a & H == 0 || b & H != 0);
                    bits(h, t, a & C == 0 || b & C != 0)
                }
                Op::Count(items) => {
                    let (mut ch, mut ct) = (0, 0);
                    for &x in items.iter() {
                        let v = buf[x as usize];
                        ch += (v & H != 0) as u32;
                        ct += (v & T != 0) as u32;
                    }
                    counts[i] = (ch, ct);
                    0
                }
                Op::AtLeast(k, r, primed) => {
                    let (ch, ct) = counts[*k as usize];
                    let (h, t) = (ch >= *r, ct >= *r);
                    bits(h, t, if *primed { t } else { h })
                }
                Op::AtMost(k, r) => {
                    if counts[*k as usize].1 <= *r {
                        H | T | C
                    } else {
                        0
                    }
                }
                Op::Start(base, k, r, primed) => {
                    let b = buf[*base as usize];
                    let (ch, ct) = counts[*k as usize];
                    let t = b & T != 0 && ct + 1 >= *r;
                    let h = b & H != 0 && ch + 1 >= *r;
                    bits(h, t, if *primed { t } else { h })
                }
            };
            buf[i] = v;
        }
    }

    /// Re-evaluate the here-world only, reusing there-world values left by
    /// a previous [`Compiled::eval`] with the same there-world. Classical
    /// bits are not maintained.
    pub fn eval_here<W: World>(&self, w: &W, sc: &mut Scratch) {
        let (buf, counts) = (&mut sc.vals, &mut sc.counts);
        for (i, op) in self.ops.iter().enumerate() {
            let old = buf[i] & T;
            let h = match op {
                Op::Const(b) => *b,
                Op::Atom(a, primed) => {
                    if *primed {
                        old != 0
                    } else {
                        w.here(*a)
                    }
                }
                Op::Not(_) | Op::AtMost(..) => old != 0,
                Op::And(xs) => xs.iter().all(|x| buf[*x as usize] & H != 0),
                Op::Or(xs) => xs.iter().any(|x| buf[*x as usize] & H != 0),
                Op::Implies(a, b) => old != 0 && (buf[*a as usize] & H == 0 || buf[*b as usize] & H != 0),
                Op::Count(items) => {
                    counts[i].0 = items.iter().filter(|x| buf[**x as usize] & H != 0).count() as u32;
                    false
                }
                Op::AtLeast(k, r, _) => counts[*k as usize].0 >= *r,
                Op::Start(base, k, r, _) => buf[*base as usize] & H != 0 && counts[*k as usize].0 + 1 >= *r,
            };
            buf[i] = old | ((h as u8) * H);
        }
    }

    /// Result bits of root `i` after evaluation.
    #[inline]
    pub fn root(&self, sc: &Scratch, i: usize) -> u8 {
        sc.vals[self.roots[i] as usize]
    }
}
