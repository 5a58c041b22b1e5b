//! Navigation over banana trees: births, trails, the string, spine labels,
//! and a structural signature used for link-for-link comparison.
//!
//! Link discipline. At a leaf `a`, `in_`/`mid` name the lowest interior node
//! of its in-/mid-trail, or the upper end `dth(a)` when that trail is empty.
//! At an internal node `b`, `in_`/`mid` name the topmost interior node of the
//! trail, or the leaf `birth(b)` when it is empty. `up`/`dn` link the
//! interior nodes of one trail; the lowest interior node has `dn` equal to
//! the leaf and the topmost has `up` equal to the upper end.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::ids::{ItemId, ListId, NodeId};
use crate::value::Polarity;
use crate::workspace::{Workspace, LEFT, RIGHT};

/// Which trail of a banana.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Trail {
    In,
    Mid,
}

/// Spine membership of an internal node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpineSide {
    None,
    Left,
    Right,
    Both,
}

impl SpineSide {
    pub(crate) fn from_flags(f: u8) -> Self {
        match f {
            0 => SpineSide::None,
            LEFT => SpineSide::Left,
            RIGHT => SpineSide::Right,
            _ => SpineSide::Both,
        }
    }
}

/// Identity of a node that survives rebuilding: item key, hook side, or root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeLabel {
    Nil,
    Item(u64),
    LeftHook,
    RightHook,
    Root,
}

/// Per-node links keyed by [`NodeLabel`]: `[in, mid, up, dn, low, dth]`
/// plus the spine flags.
pub type TreeSignature = BTreeMap<NodeLabel, ([NodeLabel; 6], u8)>;

impl Workspace {
    pub(crate) fn birth(&self, q: NodeId) -> NodeId {
        self.n(self.n(q).in_).low
    }

    pub(crate) fn trail_top(&self, b: NodeId, t: Trail) -> NodeId {
        match t {
            Trail::In => self.n(b).in_,
            Trail::Mid => self.n(b).mid,
        }
    }

    /// Interior nodes of one trail of `b`'s banana, top to bottom.
    pub(crate) fn trail_nodes(&self, b: NodeId, t: Trail) -> Vec<NodeId> {
        let a = self.birth(b);
        let mut out = Vec::new();
        let mut x = self.trail_top(b, t);
        while x != a {
            out.push(x);
            x = self.n(x).dn;
        }
        out
    }

    pub(crate) fn interior_nodes(&self, b: NodeId) -> Vec<NodeId> {
        let mut v = self.trail_nodes(b, Trail::In);
        v.extend(self.trail_nodes(b, Trail::Mid));
        v
    }

    /// `LEFT` if `v` lies left of the lower end of the banana it is interior to.
    pub(crate) fn trail_side(&self, v: NodeId) -> u8 {
        if self.lt(v, self.n(v).low) {
            LEFT
        } else {
            RIGHT
        }
    }

    /// The trail of `b` whose interior nodes lie left of `birth(b)`.
    pub(crate) fn left_trail(&self, b: NodeId) -> Trail {
        if self.lt(b, self.birth(b)) {
            Trail::Mid
        } else {
            Trail::In
        }
    }

    pub fn special_root(&self, list: ListId, pol: Polarity) -> Option<NodeId> {
        let b = self.ls(list).beta[pol.idx()];
        (!b.is_nil()).then_some(b)
    }

    /// Nodes in string order, the special root excluded.
    pub(crate) fn string_nodes(&self, beta: NodeId) -> Vec<NodeId> {
        enum Task {
            Emit(NodeId),
            Visit(NodeId),
        }
        let mut out = Vec::new();
        let mut tasks = vec![Task::Visit(beta)];
        while let Some(t) = tasks.pop() {
            match t {
                Task::Emit(x) => out.push(x),
                Task::Visit(b) => {
                    let a = self.birth(b);
                    let lt = self.left_trail(b);
                    let rt = if lt == Trail::In { Trail::Mid } else { Trail::In };
                    let left = self.trail_nodes(b, lt);
                    let mut right = self.trail_nodes(b, rt);
                    right.reverse();
                    let b_first = self.lt(b, a);
                    let mut seq: Vec<Task> = Vec::new();
                    if b_first {
                        seq.push(Task::Emit(b));
                    }
                    seq.extend(left.into_iter().map(Task::Visit));
                    seq.push(Task::Emit(a));
                    seq.extend(right.into_iter().map(Task::Visit));
                    if !b_first && !self.is_root(b) {
                        seq.push(Task::Emit(b));
                    }
                    tasks.extend(seq.into_iter().rev());
                }
            }
        }
        out
    }

    pub(crate) fn label_of(&self, x: NodeId) -> NodeLabel {
        if x.is_nil() {
            return NodeLabel::Nil;
        }
        let i = self.n(x).item;
        if i.is_nil() {
            return NodeLabel::Root;
        }
        self.item_label(i)
    }

    pub(crate) fn item_label(&self, i: ItemId) -> NodeLabel {
        let it = self.it(i);
        if it.crit.is_hook() {
            let s = self.ls(it.list);
            if s.hooks[0] == i {
                NodeLabel::LeftHook
            } else {
                NodeLabel::RightHook
            }
        } else {
            NodeLabel::Item(it.key)
        }
    }

    /// Every node of one tree: the critical members and the special root.
    pub(crate) fn tree_nodes(&self, list: ListId, pol: Polarity) -> Vec<NodeId> {
        let mut v: Vec<NodeId> =
            self.members(list).into_iter().map(|i| self.it(i).node[pol.idx()]).filter(|x| !x.is_nil()).collect();
        let b = self.ls(list).beta[pol.idx()];
        if !b.is_nil() {
            v.push(b);
        }
        v
    }

    pub fn signature(&self, list: ListId, pol: Polarity) -> TreeSignature {
        let mut sig = TreeSignature::new();
        for x in self.tree_nodes(list, pol) {
            let n = self.n(x);
            let links = [n.in_, n.mid, n.up, n.dn, n.low, n.dth].map(|y| self.label_of(y));
            sig.insert(self.label_of(x), (links, n.spine));
        }
        sig
    }

    pub fn spine_side(&self, x: NodeId) -> SpineSide {
        SpineSide::from_flags(self.n(x).spine)
    }

    /// Deterministic text rendering of one tree in string order.
    pub fn dump(&self, list: ListId, pol: Polarity) -> String {
        let mut out = String::new();
        let Some(beta) = self.special_root(list, pol) else {
            return out;
        };
        let mut order = vec![beta];
        order.extend(self.string_nodes(beta));
        for x in order {
            let n = self.n(x);
            let kind = if self.is_root(x) {
                "root"
            } else if self.is_leaf(x) {
                "leaf"
            } else {
                "internal"
            };
            let _ = write!(out, "{:?} {kind} v={}", self.label_of(x), self.h(x).signed(pol).ext());
            for (name, y) in [("in", n.in_), ("mid", n.mid), ("up", n.up), ("dn", n.dn), ("low", n.low), ("dth", n.dth)]
            {
                let _ = write!(out, " {name}={:?}", self.label_of(y));
            }
            let _ = writeln!(out, " spine={:?}", self.spine_side(x));
        }
        out
    }
}
