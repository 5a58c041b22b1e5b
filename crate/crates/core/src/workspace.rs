//! The arena that owns every item, tree node, and list.
//!
//! Lists share one workspace so that cut and glue can move nodes between
//! trees without copying. Each list with at least two real items carries a
//! hook item at each end and one banana tree per polarity.

use serde::{Deserialize, Serialize};

use crate::counters::CostCounters;
use crate::dict::CritDict;
use crate::error::BananaError;
use crate::ids::{ItemId, ListId, NodeId};
use crate::value::{ExtValue, Height, Polarity};

/// Criticality of an item with respect to `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Crit {
    Minimum,
    Maximum,
    NonCritical,
    /// Hook below its endpoint: a leaf of the up-tree.
    UpHook,
    /// Hook above its endpoint: a leaf of the down-tree.
    DownHook,
}

/// Criticality within one tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Role {
    Min,
    Max,
    None,
}

impl Crit {
    pub(crate) fn role(self, pol: Polarity) -> Role {
        match (self, pol) {
            (Crit::Minimum, Polarity::Up) | (Crit::Maximum, Polarity::Down) => Role::Min,
            (Crit::Maximum, Polarity::Up) | (Crit::Minimum, Polarity::Down) => Role::Max,
            (Crit::UpHook, Polarity::Up) | (Crit::DownHook, Polarity::Down) => Role::Min,
            _ => Role::None,
        }
    }

    pub fn is_hook(self) -> bool {
        matches!(self, Crit::UpHook | Crit::DownHook)
    }

    pub(crate) fn from_role(role: Role, pol: Polarity) -> Crit {
        match (role, pol) {
            (Role::Min, Polarity::Up) | (Role::Max, Polarity::Down) => Crit::Minimum,
            (Role::Max, Polarity::Up) | (Role::Min, Polarity::Down) => Crit::Maximum,
            (Role::None, _) => Crit::NonCritical,
        }
    }
}

/// A value of the input together with the key that identifies its item.
/// Keys break ties between equal reals (smaller key compares lower).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub value: f64,
    pub key: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct Item {
    pub height: Height,
    pub key: u64,
    pub crit: Crit,
    pub prev: ItemId,
    pub next: ItemId,
    pub label: u64,
    pub list: ListId,
    pub node: [NodeId; 2],
    pub alive: bool,
}

pub(crate) const LEFT: u8 = 1;
pub(crate) const RIGHT: u8 = 2;

/// A banana-tree node. `in_`/`mid` at a leaf point to the first node of
/// each trail going up; at an internal node they point to the topmost
/// interior node of each trail of its own banana, or to the leaf when the
/// trail is empty. `up`/`dn` are trail neighbours of internal nodes.
#[derive(Clone, Debug)]
pub(crate) struct Node {
    /// `NIL` for the special root.
    pub item: ItemId,
    pub pol: Polarity,
    pub in_: NodeId,
    pub mid: NodeId,
    pub up: NodeId,
    pub dn: NodeId,
    pub low: NodeId,
    pub dth: NodeId,
    /// `LEFT | RIGHT` spine membership.
    pub spine: u8,
    /// Special root only: value in tree orientation.
    pub root_val: Height,
    /// Special root only: `+1` right of every item, `-1` left of every item.
    pub root_side: i8,
}

#[derive(Clone, Debug)]
pub(crate) struct ListState {
    pub head: ItemId,
    pub tail: ItemId,
    /// Left and right hook; `NIL` while the list has fewer than two items.
    pub hooks: [ItemId; 2],
    pub len: usize,
    pub beta: [NodeId; 2],
    pub minima: CritDict,
    pub maxima: CritDict,
}

impl ListState {
    fn empty() -> Self {
        ListState {
            head: ItemId::NIL,
            tail: ItemId::NIL,
            hooks: [ItemId::NIL; 2],
            len: 0,
            beta: [NodeId::NIL; 2],
            minima: CritDict::new(),
            maxima: CritDict::new(),
        }
    }

    pub fn has_trees(&self) -> bool {
        !self.beta[0].is_nil()
    }
}

pub(crate) const LABEL_BASE: u64 = 1 << 40;
pub(crate) const LABEL_GAP: u64 = 1 << 20;

#[derive(Clone, Debug, Default)]
pub(crate) struct Coupling {
    /// Structural min-interchanges performed as the twin of a max-interchange.
    pub paired: u64,
    /// Structural min-interchanges without a twin; must stay zero.
    pub standalone: u64,
}

#[derive(Debug, Default)]
pub struct Workspace {
    pub(crate) items: Vec<Item>,
    pub(crate) nodes: Vec<Node>,
    pub(crate) lists: Vec<Option<ListState>>,
    pub(crate) next_key: u64,
    pub(crate) cost: CostCounters,
    pub(crate) coupling: Coupling,
    /// Number of walk steps of anti-cancellations in the current operation.
    pub(crate) kprime: u64,
    /// Nodes whose links changed since the last spine repair.
    pub(crate) dirty: Vec<NodeId>,
    pub(crate) trace: Vec<crate::prim::Primitive>,
}

impl Workspace {
    pub fn new() -> Self {
        Workspace { next_key: 1, ..Default::default() }
    }

    // ----- raw accessors -------------------------------------------------

    pub(crate) fn it(&self, i: ItemId) -> &Item {
        &self.items[i.ix()]
    }

    pub(crate) fn itm(&mut self, i: ItemId) -> &mut Item {
        &mut self.items[i.ix()]
    }

    pub(crate) fn n(&self, x: NodeId) -> &Node {
        &self.nodes[x.ix()]
    }

    pub(crate) fn nm(&mut self, x: NodeId) -> &mut Node {
        &mut self.nodes[x.ix()]
    }

    pub(crate) fn ls(&self, l: ListId) -> &ListState {
        self.lists[l.ix()].as_ref().expect("live list")
    }

    pub(crate) fn lsm(&mut self, l: ListId) -> &mut ListState {
        self.lists[l.ix()].as_mut().expect("live list")
    }

    pub(crate) fn check_list(&self, l: ListId) -> Result<(), BananaError> {
        match self.lists.get(l.0 as usize) {
            Some(Some(_)) => Ok(()),
            _ => Err(BananaError::UnknownList),
        }
    }

    pub(crate) fn touch(&mut self, k: u64) {
        self.cost.nodes_visited += k;
    }

    // ----- allocation ----------------------------------------------------

    pub(crate) fn new_list(&mut self) -> ListId {
        self.lists.push(Some(ListState::empty()));
        ListId(self.lists.len() as u32 - 1)
    }

    pub(crate) fn new_item(&mut self, height: Height, key: u64, list: ListId) -> ItemId {
        self.items.push(Item {
            height,
            key,
            crit: Crit::NonCritical,
            prev: ItemId::NIL,
            next: ItemId::NIL,
            label: 0,
            list,
            node: [NodeId::NIL; 2],
            alive: true,
        });
        ItemId(self.items.len() as u32 - 1)
    }

    pub(crate) fn fresh_key(&mut self) -> u64 {
        let k = self.next_key;
        self.next_key += 1;
        k
    }

    pub(crate) fn new_node(&mut self, item: ItemId, pol: Polarity) -> NodeId {
        self.nodes.push(Node {
            item,
            pol,
            in_: NodeId::NIL,
            mid: NodeId::NIL,
            up: NodeId::NIL,
            dn: NodeId::NIL,
            low: NodeId::NIL,
            dth: NodeId::NIL,
            spine: 0,
            root_val: Height::TOP,
            root_side: 1,
        });
        let id = NodeId(self.nodes.len() as u32 - 1);
        if !item.is_nil() {
            self.itm(item).node[pol.idx()] = id;
        }
        id
    }

    // ----- values and positions ------------------------------------------

    /// Value of a node in its own tree's orientation.
    pub(crate) fn h(&self, x: NodeId) -> Height {
        let nd = self.n(x);
        if nd.item.is_nil() {
            nd.root_val
        } else {
            self.it(nd.item).height.signed(nd.pol)
        }
    }

    /// Value of an item in the orientation of `pol`.
    pub(crate) fn hi(&self, i: ItemId, pol: Polarity) -> Height {
        self.it(i).height.signed(pol)
    }

    pub(crate) fn pos(&self, x: NodeId) -> (i8, u64) {
        let nd = self.n(x);
        if nd.item.is_nil() {
            (nd.root_side, 0)
        } else {
            (0, self.it(nd.item).label)
        }
    }

    pub(crate) fn lt(&self, a: NodeId, b: NodeId) -> bool {
        self.pos(a) < self.pos(b)
    }

    /// Leaves are exactly the nodes that are their own lower end.
    pub(crate) fn is_leaf(&self, x: NodeId) -> bool {
        let nd = self.n(x);
        !nd.item.is_nil() && nd.low == x
    }

    pub(crate) fn is_root(&self, x: NodeId) -> bool {
        self.n(x).item.is_nil()
    }

    // ----- list structure ------------------------------------------------

    pub(crate) fn first_member(&self, l: ListId) -> ItemId {
        let s = self.ls(l);
        if s.hooks[0].is_nil() {
            s.head
        } else {
            s.hooks[0]
        }
    }

    /// All members including hooks, in list order.
    pub(crate) fn members(&self, l: ListId) -> Vec<ItemId> {
        let mut out = Vec::with_capacity(self.ls(l).len + 2);
        let mut i = self.first_member(l);
        while !i.is_nil() {
            out.push(i);
            i = self.it(i).next;
        }
        out
    }

    /// Real items in list order.
    pub(crate) fn real_items(&self, l: ListId) -> Vec<ItemId> {
        let s = self.ls(l);
        let mut out = Vec::with_capacity(s.len);
        let mut i = s.head;
        while !i.is_nil() && !self.it(i).crit.is_hook() {
            out.push(i);
            i = self.it(i).next;
        }
        out
    }

    /// Role of a member given the current values of its list neighbours.
    pub(crate) fn local_role(&self, i: ItemId, pol: Polarity) -> Role {
        let it = self.it(i);
        let v = it.height.signed(pol);
        let nbrs = [it.prev, it.next];
        let mut lower = 0;
        let mut higher = 0;
        for nb in nbrs.into_iter().filter(|n| !n.is_nil()) {
            if self.hi(nb, pol) < v {
                higher += 1;
            } else {
                lower += 1;
            }
        }
        if higher + lower == 0 {
            return Role::None;
        }
        if it.crit.is_hook() {
            return if higher == 0 { Role::Min } else { Role::None };
        }
        if higher == 0 {
            Role::Min
        } else if lower == 0 {
            Role::Max
        } else {
            Role::None
        }
    }

    /// Criticality in `f` computed from the neighbours' current values.
    pub(crate) fn local_crit(&self, i: ItemId) -> Crit {
        let it = self.it(i);
        if it.crit.is_hook() {
            return if self.local_role(i, Polarity::Up) == Role::Min { Crit::UpHook } else { Crit::DownHook };
        }
        Crit::from_role(self.local_role(i, Polarity::Up), Polarity::Up)
    }

    pub(crate) fn is_endpoint(&self, i: ItemId) -> bool {
        let s = self.ls(self.it(i).list);
        s.len >= 2 && (i == s.head || i == s.tail)
    }

    /// Hook hugging endpoint `e`, if the list has hooks.
    pub(crate) fn hook_of(&self, e: ItemId) -> ItemId {
        let s = self.ls(self.it(e).list);
        if s.hooks[0].is_nil() {
            ItemId::NIL
        } else if e == s.head {
            s.hooks[0]
        } else if e == s.tail {
            s.hooks[1]
        } else {
            ItemId::NIL
        }
    }

    /// The real neighbour of an endpoint.
    pub(crate) fn inner_neighbor(&self, e: ItemId) -> ItemId {
        let s = self.ls(self.it(e).list);
        if e == s.head {
            self.it(e).next
        } else {
            self.it(e).prev
        }
    }

    /// Hook value for endpoint `e`: one step toward its real neighbour.
    pub(crate) fn hook_height(&self, e: ItemId) -> Height {
        let nb = self.inner_neighbor(e);
        let he = self.it(e).height;
        if self.it(nb).height > he {
            he.offset(1)
        } else {
            he.offset(-1)
        }
    }

    pub(crate) fn set_crit(&mut self, i: ItemId, c: Crit) {
        let old = self.it(i).crit;
        if old == c {
            return;
        }
        let (list, label) = (self.it(i).list, self.it(i).label);
        if !old.is_hook() {
            let s = self.lsm(list);
            match old {
                Crit::Minimum => {
                    s.minima.remove(label);
                }
                Crit::Maximum => {
                    s.maxima.remove(label);
                }
                _ => {}
            }
            match c {
                Crit::Minimum => s.minima.insert(label, i),
                Crit::Maximum => s.maxima.insert(label, i),
                _ => {}
            }
            self.cost.dict_ops += 1;
        }
        self.itm(i).crit = c;
    }

    // ----- order labels --------------------------------------------------

    /// Links `new` into the list right after `after` (or at the front when
    /// `after` is nil) and gives it a label between its neighbours.
    pub(crate) fn link_after(&mut self, list: ListId, after: ItemId, new: ItemId) {
        let before = if after.is_nil() { self.first_member(list) } else { self.it(after).next };
        self.itm(new).prev = after;
        self.itm(new).next = before;
        self.itm(new).list = list;
        if !after.is_nil() {
            self.itm(after).next = new;
        }
        if !before.is_nil() {
            self.itm(before).prev = new;
        }
        self.assign_label(new);
    }

    pub(crate) fn unlink(&mut self, i: ItemId) {
        let (p, n) = (self.it(i).prev, self.it(i).next);
        if !p.is_nil() {
            self.itm(p).next = n;
        }
        if !n.is_nil() {
            self.itm(n).prev = p;
        }
        self.itm(i).prev = ItemId::NIL;
        self.itm(i).next = ItemId::NIL;
    }

    fn assign_label(&mut self, i: ItemId) {
        let (p, n) = (self.it(i).prev, self.it(i).next);
        let lo = if p.is_nil() { None } else { Some(self.it(p).label) };
        let hi = if n.is_nil() { None } else { Some(self.it(n).label) };
        let label = match (lo, hi) {
            (None, None) => Some(LABEL_BASE),
            (Some(a), None) => a.checked_add(LABEL_GAP),
            (None, Some(b)) => b.checked_sub(LABEL_GAP),
            (Some(a), Some(b)) => (b - a >= 2).then(|| a + (b - a) / 2),
        };
        match label {
            Some(l) => self.itm(i).label = l,
            None => self.relabel_around(i),
        }
    }

    /// Spreads labels evenly over a window around `i` that is sparse enough.
    fn relabel_around(&mut self, i: ItemId) {
        let mut left = i;
        let mut right = i;
        let mut count: u64 = 1;
        let mut reach: u64 = 1;
        loop {
            for _ in 0..reach {
                let p = self.it(left).prev;
                if !p.is_nil() {
                    left = p;
                    count += 1;
                }
                let n = self.it(right).next;
                if !n.is_nil() {
                    right = n;
                    count += 1;
                }
            }
            let lo = {
                let p = self.it(left).prev;
                if p.is_nil() {
                    0
                } else {
                    self.it(p).label
                }
            };
            let hi = {
                let n = self.it(right).next;
                if n.is_nil() {
                    u64::MAX
                } else {
                    self.it(n).label
                }
            };
            let span = hi - lo;
            if span / (count + 1) >= (count + 1).max(4) || (lo == 0 && hi == u64::MAX) {
                self.spread(left, right, count, lo, hi);
                return;
            }
            reach *= 2;
        }
    }

    /// Assigns evenly spaced labels in the open interval `(lo, hi)` to the
    /// `count` members from `first` to `last`, re-keying dictionary entries.
    pub(crate) fn spread(&mut self, first: ItemId, last: ItemId, count: u64, lo: u64, hi: u64) {
        let step = (hi - lo) / (count + 1);
        assert!(step >= 1, "label space exhausted");
        let mut run = Vec::with_capacity(count as usize);
        let mut cur = first;
        loop {
            run.push(cur);
            if cur == last {
                break;
            }
            cur = self.it(cur).next;
        }
        // Dictionary entries leave before any label changes so that old and
        // new labels never collide.
        for &i in &run {
            self.rekey(i, false);
        }
        for (k, &i) in run.iter().enumerate() {
            self.itm(i).label = lo + step * (k as u64 + 1);
        }
        for &i in &run {
            self.rekey(i, true);
        }
    }

    /// Removes or inserts the dictionary entry of a critical item.
    fn rekey(&mut self, i: ItemId, insert: bool) {
        let (label, crit, list) = (self.it(i).label, self.it(i).crit, self.it(i).list);
        let s = self.lsm(list);
        let dict = match crit {
            Crit::Minimum => &mut s.minima,
            Crit::Maximum => &mut s.maxima,
            _ => return,
        };
        if insert {
            dict.insert(label, i);
        } else {
            dict.remove(label);
        }
    }

    // ----- public queries ------------------------------------------------

    pub fn len(&self, l: ListId) -> usize {
        self.ls(l).len
    }

    pub fn is_empty(&self, l: ListId) -> bool {
        self.ls(l).len == 0
    }

    pub fn lists(&self) -> impl Iterator<Item = ListId> + '_ {
        self.lists.iter().enumerate().filter(|(_, s)| s.is_some()).map(|(i, _)| ListId(i as u32))
    }

    /// The current values with their keys, in list order.
    pub fn samples(&self, l: ListId) -> Vec<Sample> {
        self.real_items(l).into_iter().map(|i| Sample { value: self.it(i).height.real, key: self.it(i).key }).collect()
    }

    pub fn values(&self, l: ListId) -> Vec<f64> {
        self.samples(l).into_iter().map(|s| s.value).collect()
    }

    /// Key of the item at 1-based position `pos`.
    pub fn key_at(&self, l: ListId, pos: usize) -> Result<u64, BananaError> {
        let items = self.real_items(l);
        let len = items.len();
        items.get(pos.wrapping_sub(1)).map(|&i| self.it(i).key).ok_or(BananaError::Position { pos, len })
    }

    pub fn criticality(&self, l: ListId) -> Vec<Crit> {
        self.real_items(l).into_iter().map(|i| self.it(i).crit).collect()
    }

    pub fn value_of(&self, i: ItemId) -> ExtValue {
        self.it(i).height.ext()
    }

    pub fn counters(&self) -> CostCounters {
        self.cost
    }

    pub fn reset_counters(&mut self) {
        self.cost = CostCounters::default();
        self.kprime = 0;
    }

    /// Walk steps of anti-cancellations since the last counter reset.
    pub fn kprime(&self) -> u64 {
        self.kprime
    }

    /// `(paired, standalone)` structural min-interchanges so far.
    pub fn coupling_stats(&self) -> (u64, u64) {
        (self.coupling.paired, self.coupling.standalone)
    }

    pub fn drop_list(&mut self, l: ListId) {
        for i in self.members(l) {
            self.itm(i).alive = false;
        }
        self.lists[l.ix()] = None;
    }
}
