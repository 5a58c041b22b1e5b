//! Link surgery behind the local primitives.
//!
//! Every write to a node link goes through `set`, which records both ends as
//! dirty; `flush_spine` then repairs spine labels starting from those nodes.
//! Leaf-ness is structural here (`low == self`) because criticality is
//! synchronised only after a primitive completes.

use serde::Serialize;

use crate::ids::{ItemId, NodeId};
use crate::tree::Trail;
use crate::value::Polarity;
use crate::workspace::Workspace;

/// One applied primitive and the tree it ran in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Primitive {
    MaxInterchange { tree: Polarity },
    MinInterchange { tree: Polarity },
    Cancel { tree: Polarity },
    AntiCancel { tree: Polarity },
    Slide { tree: Polarity },
    Endpoint { tree: Polarity, case: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    In,
    Mid,
    Up,
    Dn,
}

impl Trail {
    pub(crate) fn slot(self) -> Slot {
        match self {
            Trail::In => Slot::In,
            Trail::Mid => Slot::Mid,
        }
    }

    pub(crate) fn other(self) -> Trail {
        match self {
            Trail::In => Trail::Mid,
            Trail::Mid => Trail::In,
        }
    }
}

impl Workspace {
    pub(crate) fn get(&self, x: NodeId, s: Slot) -> NodeId {
        let n = self.n(x);
        match s {
            Slot::In => n.in_,
            Slot::Mid => n.mid,
            Slot::Up => n.up,
            Slot::Dn => n.dn,
        }
    }

    pub(crate) fn set(&mut self, x: NodeId, s: Slot, v: NodeId) {
        let n = self.nm(x);
        match s {
            Slot::In => n.in_ = v,
            Slot::Mid => n.mid = v,
            Slot::Up => n.up = v,
            Slot::Dn => n.dn = v,
        }
        self.dirty.push(x);
        if !v.is_nil() {
            self.dirty.push(v);
        }
    }

    pub(crate) fn set_low(&mut self, x: NodeId, a: NodeId) {
        self.nm(x).low = a;
        self.dirty.push(x);
    }

    pub(crate) fn node_of(&self, i: ItemId, pol: Polarity) -> NodeId {
        self.it(i).node[pol.idx()]
    }

    /// The slot of `up(x)` that holds interior node `x`.
    fn slot_above(&self, x: NodeId) -> Slot {
        let u = self.n(x).up;
        if self.n(u).in_ == x {
            Slot::In
        } else if self.n(u).mid == x {
            Slot::Mid
        } else {
            Slot::Dn
        }
    }

    /// The slot of `dn(x)` that holds interior node `x`.
    fn slot_below(&self, x: NodeId) -> Slot {
        let d = self.n(x).dn;
        if !self.is_leaf(d) {
            Slot::Up
        } else if self.n(d).in_ == x {
            Slot::In
        } else {
            Slot::Mid
        }
    }

    /// Removes interior node `x` from its trail, joining its neighbours.
    pub(crate) fn unhook(&mut self, x: NodeId) {
        let (u, d) = (self.n(x).up, self.n(x).dn);
        let (su, sd) = (self.slot_above(x), self.slot_below(x));
        self.set(u, su, d);
        self.set(d, sd, u);
    }

    /// Inserts `x` directly above interior node `t` on `t`'s trail.
    fn link_above(&mut self, x: NodeId, t: NodeId) {
        let u = self.n(t).up;
        let su = self.slot_above(t);
        self.set(u, su, x);
        self.set(x, Slot::Up, u);
        self.set(x, Slot::Dn, t);
        self.set(t, Slot::Up, x);
        let low = self.n(t).low;
        self.set_low(x, low);
    }

    /// Inserts `x` directly below interior node `t` on `t`'s trail.
    fn link_below(&mut self, x: NodeId, t: NodeId) {
        let d = self.n(t).dn;
        let sd = self.slot_below(t);
        self.set(d, sd, x);
        self.set(x, Slot::Dn, d);
        self.set(x, Slot::Up, t);
        self.set(t, Slot::Dn, x);
        let low = self.n(t).low;
        self.set_low(x, low);
    }

    /// Makes `x` the topmost interior node of trail `k` of `b`'s banana.
    pub(crate) fn link_top(&mut self, x: NodeId, b: NodeId, k: Trail) {
        let a = self.birth(b);
        let old = self.get(b, k.slot());
        if old == a {
            self.set(a, k.slot(), x);
        } else {
            self.set(old, Slot::Up, x);
        }
        self.set(b, k.slot(), x);
        self.set(x, Slot::Up, b);
        self.set(x, Slot::Dn, old);
        self.set_low(x, a);
    }

    /// Makes `x` the lowest interior node of trail `k` of leaf `a`'s banana.
    pub(crate) fn link_bottom(&mut self, x: NodeId, a: NodeId, k: Trail) {
        let b = self.n(a).dth;
        let old = self.get(a, k.slot());
        if old == b {
            self.set(b, k.slot(), x);
        } else {
            self.set(old, Slot::Dn, x);
        }
        self.set(a, k.slot(), x);
        self.set(x, Slot::Dn, a);
        self.set(x, Slot::Up, old);
        self.set_low(x, a);
    }

    pub(crate) fn swap_trails(&mut self, x: NodeId) {
        let (i, m) = (self.n(x).in_, self.n(x).mid);
        self.set(x, Slot::In, m);
        self.set(x, Slot::Mid, i);
    }

    pub(crate) fn swap_items(&mut self, x: NodeId, y: NodeId) {
        let pol = self.n(x).pol;
        let (ix, iy) = (self.n(x).item, self.n(y).item);
        self.nm(x).item = iy;
        self.nm(y).item = ix;
        self.itm(iy).node[pol.idx()] = x;
        self.itm(ix).node[pol.idx()] = y;
        self.dirty.extend([x, y]);
    }

    /// Moves node `x` to item `to`; the previous item loses its node.
    pub(crate) fn retag(&mut self, x: NodeId, to: ItemId) {
        let pol = self.n(x).pol;
        let from = self.n(x).item;
        if self.it(from).node[pol.idx()] == x {
            self.itm(from).node[pol.idx()] = NodeId::NIL;
        }
        self.nm(x).item = to;
        self.itm(to).node[pol.idx()] = x;
        self.dirty.push(x);
    }

    pub(crate) fn release(&mut self, x: NodeId) {
        let pol = self.n(x).pol;
        let i = self.n(x).item;
        if self.it(i).node[pol.idx()] == x {
            self.itm(i).node[pol.idx()] = NodeId::NIL;
        }
        self.nm(x).item = ItemId::NIL;
        self.nm(x).dth = NodeId::NIL;
        self.nm(x).low = NodeId::NIL;
    }

    fn live(&self, x: NodeId) -> bool {
        let n = self.n(x);
        !n.item.is_nil() && self.it(n.item).node[n.pol.idx()] == x
    }

    /// Trail of `b`'s banana on the side of position `target` relative to
    /// leaf `a`: the mid-trail lies between `a` and its upper end.
    pub(crate) fn side_trail(&self, a: NodeId, target: (i8, u64)) -> Trail {
        let d = self.n(a).dth;
        if (target < self.pos(a)) == self.lt(d, a) {
            Trail::Mid
        } else {
            Trail::In
        }
    }

    pub(crate) fn item_pos(&self, i: ItemId) -> (i8, u64) {
        (0, self.it(i).label)
    }

    /// Repairs spine labels of every dirty node and, where a label changed,
    /// of the trail tops below it.
    pub(crate) fn flush_spine(&mut self) {
        let mut stack = std::mem::take(&mut self.dirty);
        while let Some(x) = stack.pop() {
            if self.is_root(x) || !self.live(x) {
                continue;
            }
            self.touch(1);
            let f = if self.is_leaf(x) {
                0
            } else {
                let u = self.n(x).up;
                if self.n(u).in_ == x || self.n(u).mid == x {
                    self.n(u).spine & self.trail_side(x)
                } else {
                    0
                }
            };
            if f != self.n(x).spine {
                self.nm(x).spine = f;
                if !self.is_leaf(x) {
                    stack.push(self.n(x).in_);
                    stack.push(self.n(x).mid);
                }
            }
        }
    }

    pub(crate) fn log(&mut self, p: Primitive) {
        self.trace.push(p);
    }

    // ----- primitives -----------------------------------------------------

    /// Max `j` passes its parent `q = up(j)` in tree `pol`.
    pub(crate) fn max_interchange(&mut self, pol: Polarity, j: NodeId, q: NodeId) {
        debug_assert_eq!(self.n(j).up, q, "max-interchange needs q = up(j)");
        let i = self.birth(j);
        let p = self.birth(q);
        self.touch(2);
        if self.n(q).in_ == j {
            self.unhook(j);
            self.link_above(j, q);
        } else if self.n(q).mid == j {
            // Labels swap: the upper node now carries j, the lower one q.
            self.swap_items(j, q);
            let (upper, lower) = (q, j);
            self.unhook(lower);
            self.link_below(lower, upper);
            self.swap_trails(i);
            self.swap_trails(lower);
        } else if self.h(i) < self.h(p) {
            self.unhook(q);
            self.link_top(q, j, Trail::In);
        } else {
            self.swap_items(j, q);
            let (upper, lower) = (q, j);
            self.unhook(lower);
            self.link_top(lower, upper, Trail::Mid);
            self.swap_trails(i);
            self.swap_trails(lower);
        }
        self.cost.interchanges_max += 1;
        self.log(Primitive::MaxInterchange { tree: pol });
        self.flush_spine();
    }

    /// Min `i` passes min `p` from above in tree `pol`; structural only when
    /// `p = low(dth(i))`. Returns whether anything changed.
    pub(crate) fn min_interchange(&mut self, pol: Polarity, i: ItemId, p: ItemId) -> bool {
        let (ni, np) = (self.node_of(i, pol), self.node_of(p, pol));
        self.touch(1);
        let j = self.n(ni).dth;
        if self.n(j).low != np {
            return false;
        }
        let q = self.n(np).dth;
        let kj = if self.lt(np, j) == self.lt(j, q) { Trail::Mid } else { Trail::In };
        let ko = kj.other();
        let (uj, dj, ij, mj) = {
            let n = self.n(j);
            (n.up, n.dn, n.in_, n.mid)
        };
        let hj = self.h(j);
        let mut sp = q;
        let mut sm = self.get(q, ko.slot());
        while sm != np && self.h(sm) > hj {
            self.touch(1);
            sp = sm;
            sm = self.n(sm).dn;
        }
        let (i_in, i_mid) = (self.n(ni).in_, self.n(ni).mid);
        let (p_o, p_j) = (self.get(np, ko.slot()), self.get(np, kj.slot()));

        self.set(j, Slot::Dn, mj);
        self.set(j, Slot::Mid, dj);
        self.set(j, Slot::In, sm);
        self.set(j, Slot::Up, sp);
        // The part of j's old trail above j continues into j's old in-trail.
        if ij != ni {
            self.set(ij, Slot::Up, uj);
        }
        if uj == q {
            self.set(q, kj.slot(), ij);
        } else {
            self.set(uj, Slot::Dn, ij);
        }
        if sp == q {
            self.set(q, ko.slot(), j);
        } else {
            self.set(sp, Slot::Dn, j);
        }
        if sm != np {
            self.set(sm, Slot::Up, j);
        }
        self.set(ni, ko.slot(), i_mid);
        self.set(ni, kj.slot(), if ij == ni { uj } else { i_in });
        self.set(np, Slot::In, if sm == np { j } else { p_o });
        self.set(np, Slot::Mid, if dj == np { j } else { p_j });
        self.nm(ni).dth = q;
        self.nm(np).dth = j;
        self.set_low(j, ni);
        for start in [uj, sp] {
            let mut x = start;
            while x != q {
                self.touch(1);
                self.set_low(x, ni);
                x = self.n(x).up;
            }
        }
        self.cost.interchanges_min += 1;
        self.log(Primitive::MinInterchange { tree: pol });
        self.flush_spine();
        true
    }

    /// Max-interchange of `x` past `up(x)` in `pol` with its twin
    /// min-interchange in the other tree.
    pub(crate) fn coupled_interchange(&mut self, pol: Polarity, x: NodeId, y: NodeId) {
        let (xi, yi) = (self.n(x).item, self.n(y).item);
        self.max_interchange(pol, x, y);
        if self.min_interchange(pol.flip(), xi, yi) {
            self.coupling.paired += 1;
        }
    }

    /// The top of the other trail of the special banana when `x` tops one
    /// of them and that trail is not empty.
    pub(crate) fn root_rival(&self, x: NodeId) -> Option<NodeId> {
        let u = self.n(x).up;
        if !self.is_root(u) {
            return None;
        }
        let c = if self.n(u).in_ == x { self.n(u).mid } else { self.n(u).in_ };
        (!self.is_leaf(c)).then_some(c)
    }

    /// Max item `x` passes max item `y` across the special banana: no link
    /// changes in `pol`, only the twin min-interchange.
    pub(crate) fn root_interchange(&mut self, pol: Polarity, x: ItemId, y: ItemId) {
        self.touch(1);
        self.cost.interchanges_max += 1;
        self.log(Primitive::MaxInterchange { tree: pol });
        if self.min_interchange(pol.flip(), x, y) {
            self.coupling.paired += 1;
        }
    }

    /// Removes the empty banana of leaf item `a` and max item `b`.
    pub(crate) fn cancel(&mut self, pol: Polarity, a: ItemId, b: ItemId) {
        let (na, nb) = (self.node_of(a, pol), self.node_of(b, pol));
        debug_assert!(
            self.n(na).dth == nb && self.n(nb).in_ == na && self.n(nb).mid == na,
            "cancel needs an empty banana"
        );
        self.touch(2);
        self.unhook(nb);
        self.release(na);
        self.release(nb);
        self.cost.cancellations += 1;
        self.log(Primitive::Cancel { tree: pol });
        self.flush_spine();
    }

    /// Non-critical neighbours `p` (new min) and `q` (new max) become an
    /// empty banana. Heights must already hold their new values.
    pub(crate) fn anti_cancel(&mut self, pol: Polarity, p: ItemId, q: ItemId) {
        let lp = self.it(p).label;
        let away = if lp < self.it(q).label { crate::dict::Direction::Left } else { crate::dict::Direction::Right };
        let s = self.ls(self.it(p).list);
        let dict = if pol == Polarity::Up { &s.maxima } else { &s.minima };
        let b = dict.nearest(lp, away).expect("a maximum beyond a non-critical item");
        self.cost.dict_ops += 1;
        let nb = self.node_of(b, pol);
        let a = self.birth(nb);
        let same_side = (self.pos(a) < self.pos(nb)) == (self.item_pos(p) < self.pos(nb));
        let mut t = if same_side { self.n(nb).mid } else { self.n(nb).dn };
        let thr = self.hi(q, pol);
        self.touch(1);
        while self.h(t) > thr {
            t = self.n(t).in_;
            self.kprime += 1;
            self.touch(1);
        }
        let nq = self.new_node(q, pol);
        let np = self.new_node(p, pol);
        if self.is_leaf(t) {
            let k = self.side_trail(t, self.item_pos(q));
            self.link_bottom(nq, t, k);
        } else {
            self.link_above(nq, t);
        }
        {
            let n = self.nm(np);
            n.in_ = nq;
            n.mid = nq;
            n.dth = nq;
            n.low = np;
        }
        self.nm(nq).in_ = np;
        self.nm(nq).mid = np;
        self.dirty.extend([np, nq]);
        self.cost.anticancellations += 1;
        self.log(Primitive::AntiCancel { tree: pol });
        self.flush_spine();
    }

    /// Criticality moves from item `from` to its neighbour `to`.
    pub(crate) fn slide(&mut self, pol: Polarity, from: ItemId, to: ItemId) {
        let x = self.node_of(from, pol);
        self.touch(1);
        self.retag(x, to);
        self.cost.slides += 1;
        self.log(Primitive::Slide { tree: pol });
        self.flush_spine();
    }

    /// Endpoint `q` and its neighbour `a` change type across the hook `hk`.
    ///
    /// 1: max `q` becomes a min, min `a` non-critical.
    /// 2: max `q` becomes a min, `a` becomes a max.
    /// 3: min `q` becomes a max, max `a` non-critical.
    /// 4: min `q` becomes a max, `a` becomes a min.
    pub(crate) fn endpoint_case(&mut self, pol: Polarity, case: u8, q: ItemId, a: ItemId, hk: ItemId) {
        self.touch(2);
        match case {
            1 => {
                let (nq, nh, na) = (self.node_of(q, pol), self.node_of(hk, pol), self.node_of(a, pol));
                self.unhook(nq);
                self.release(nq);
                self.release(nh);
                self.retag(na, q);
            }
            2 => {
                let (nq, nh) = (self.node_of(q, pol), self.node_of(hk, pol));
                self.retag(nq, a);
                self.retag(nh, q);
            }
            3 => {
                let (nq, na) = (self.node_of(q, pol), self.node_of(a, pol));
                self.retag(nq, hk);
                self.retag(na, q);
            }
            4 => {
                let nq = self.node_of(q, pol);
                self.retag(nq, a);
                let na = nq;
                let fresh = self.new_node(q, pol);
                let k = self.side_trail(na, self.item_pos(q));
                self.link_bottom(fresh, na, k);
                let nh = self.new_node(hk, pol);
                {
                    let n = self.nm(nh);
                    n.in_ = fresh;
                    n.mid = fresh;
                    n.dth = fresh;
                    n.low = nh;
                }
                self.nm(fresh).in_ = nh;
                self.nm(fresh).mid = nh;
                self.dirty.extend([nh, fresh]);
            }
            _ => unreachable!("endpoint cases are 1 to 4"),
        }
        self.log(Primitive::Endpoint { tree: pol, case });
        self.flush_spine();
    }
}
