//! Value changes, insertions and deletions.
//!
//! A change moves one item along the straight line from its old to its new
//! value and stops at each crossing that matters: the next crossing is read
//! off the trees (its parent, its children in the other tree, or a list
//! neighbour). Before each primitive the moving item is parked just past the
//! value it crosses, two infinitesimal steps away, so that every comparison
//! made by the primitive sees the post-crossing order. Hooks of a moving
//! endpoint travel with it one step away.

use serde::Serialize;

use crate::counters::CostCounters;
use crate::diagram::{diff, Diagram};
use crate::error::BananaError;
use crate::ids::{ItemId, ListId};
use crate::prim::Primitive;
use crate::value::{ExtValue, Height, Polarity};
use crate::workspace::{Crit, Role, Workspace};

/// What one public edit did.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EditOutcome {
    /// Size of the symmetric difference between the diagrams before and after.
    pub k: usize,
    /// Nodes walked by anti-cancellations.
    pub kprime: u64,
    pub counters: CostCounters,
    pub primitives: Vec<Primitive>,
}

struct Snapshot {
    before: Diagram,
    cost: CostCounters,
    kprime: u64,
}

impl Workspace {
    /// The item at 1-based position `pos`.
    pub fn item_at(&self, list: ListId, pos: usize) -> Result<ItemId, BananaError> {
        self.check_list(list)?;
        let items = self.real_items(list);
        let len = items.len();
        items.get(pos.wrapping_sub(1)).copied().ok_or(BananaError::Position { pos, len })
    }

    /// Key of a live item.
    pub fn key_of(&self, i: ItemId) -> Result<u64, BananaError> {
        self.check_item(i)?;
        Ok(self.it(i).key)
    }

    /// The list holding a live item.
    pub fn list_of(&self, i: ItemId) -> Result<ListId, BananaError> {
        self.check_item(i)?;
        Ok(self.it(i).list)
    }

    pub(crate) fn check_item(&self, i: ItemId) -> Result<(), BananaError> {
        match self.items.get(i.0 as usize) {
            Some(it) if it.alive && !it.crit.is_hook() && self.check_list(it.list).is_ok() => Ok(()),
            _ => Err(BananaError::UnknownItem),
        }
    }

    fn snapshot(&mut self, list: ListId) -> Snapshot {
        self.trace.clear();
        Snapshot { before: self.diagram(list), cost: self.cost, kprime: self.kprime }
    }

    fn outcome(&mut self, list: ListId, s: Snapshot) -> EditOutcome {
        let after = self.diagram(list);
        EditOutcome {
            k: diff(&s.before, &after),
            kprime: self.kprime - s.kprime,
            counters: self.cost.since(&s.cost),
            primitives: std::mem::take(&mut self.trace),
        }
    }

    /// Sets the value of `item`, keeping both trees equal to a fresh build.
    pub fn change_value(&mut self, item: ItemId, value: f64) -> Result<EditOutcome, BananaError> {
        self.check_item(item)?;
        ExtValue::finite(value)?;
        let list = self.it(item).list;
        let s = self.snapshot(list);
        let target = Height::item(value, self.it(item).key as i64);
        self.move_to(item, target);
        Ok(self.outcome(list, s))
    }

    /// Inserts a new item after 1-based position `after` (0 for the front).
    pub fn insert_item(
        &mut self,
        list: ListId,
        after: usize,
        value: f64,
    ) -> Result<(ItemId, EditOutcome), BananaError> {
        self.check_list(list)?;
        ExtValue::finite(value)?;
        let len = self.ls(list).len;
        if after > len {
            return Err(BananaError::Position { pos: after, len });
        }
        let s = self.snapshot(list);
        let key = self.fresh_key();
        let target = Height::item(value, key as i64);
        let e = if len < 2 {
            let prev = if after == 0 { ItemId::NIL } else { self.real_items(list)[after - 1] };
            let e = self.new_item(target, key, list);
            self.link_after(list, prev, e);
            let st = self.lsm(list);
            if after == 0 {
                st.head = e;
            }
            if after == len {
                st.tail = e;
            }
            st.len += 1;
            self.install(list);
            e
        } else if after == 0 || after == len {
            let e = self.extend_end(list, after == 0, key);
            self.move_to(e, target);
            e
        } else {
            let a = self.real_items(list)[after - 1];
            let b = self.it(a).next;
            let d = if self.it(b).height > self.it(a).height { 2 } else { -2 };
            let e = self.new_item(Height { eps: d, ..self.it(a).height }, key, list);
            self.link_after(list, a, e);
            self.lsm(list).len += 1;
            self.move_to(e, target);
            e
        };
        Ok((e, self.outcome(list, s)))
    }

    /// Removes `item` after moving it to a value where it is not critical.
    pub fn delete_item(&mut self, item: ItemId) -> Result<EditOutcome, BananaError> {
        self.check_item(item)?;
        let list = self.it(item).list;
        let s = self.snapshot(list);
        if self.ls(list).len <= 3 {
            self.detach(item);
            self.install(list);
        } else if self.is_endpoint(item) {
            self.retract_end(item);
        } else {
            let (a, b) = (self.it(item).prev, self.it(item).next);
            let d = if self.it(b).height > self.it(a).height { 2 } else { -2 };
            self.move_to(item, Height { eps: d, ..self.it(a).height });
            debug_assert_eq!(self.it(item).crit, Crit::NonCritical);
            self.detach(item);
        }
        Ok(self.outcome(list, s))
    }

    /// Unlinks a non-critical item, fixing the list ends.
    fn detach(&mut self, i: ItemId) {
        let list = self.it(i).list;
        let (p, n) = (self.it(i).prev, self.it(i).next);
        self.unlink(i);
        self.itm(i).alive = false;
        let st = self.lsm(list);
        if st.head == i {
            st.head = if n.is_nil() || st.hooks[1] == n { ItemId::NIL } else { n };
        }
        if st.tail == i {
            st.tail = if p.is_nil() || st.hooks[0] == p { ItemId::NIL } else { p };
        }
        st.len -= 1;
        if st.len == 0 {
            st.head = ItemId::NIL;
            st.tail = ItemId::NIL;
        }
    }

    // ----- the homotopy ---------------------------------------------------

    fn place(&mut self, j: ItemId, h: Height) {
        let old = self.it(j).height;
        self.itm(j).height = h;
        let hk = self.hook_of(j);
        if !hk.is_nil() {
            let above = self.it(hk).height > old;
            self.itm(hk).height = h.offset(if above { 1 } else { -1 });
        }
    }

    /// Just past `y` for an item rising in `pol`.
    fn past(&self, y: ItemId, pol: Polarity) -> Height {
        let h = self.it(y).height;
        debug_assert_eq!(h.eps, 0, "crossing partners are at rest");
        Height { eps: if pol == Polarity::Up { 2 } else { -2 }, ..h }
    }

    fn sync(&mut self, items: &[ItemId]) {
        for &i in items {
            if !i.is_nil() {
                let c = self.local_crit(i);
                self.set_crit(i, c);
            }
        }
    }

    fn refresh_hook(&mut self, e: ItemId) -> ItemId {
        let hk = self.hook_of(e);
        let h = self.hook_height(e);
        self.itm(hk).height = h;
        hk
    }

    pub(crate) fn move_to(&mut self, j: ItemId, target: Height) {
        let list = self.it(j).list;
        let cur = self.it(j).height;
        if cur == target {
            return;
        }
        if !self.ls(list).has_trees() {
            self.itm(j).height = target;
            return;
        }
        if self.ls(list).len == 2 {
            self.itm(j).height = target;
            self.install(list);
            return;
        }
        let pol = if target > cur { Polarity::Up } else { Polarity::Down };
        let g = target.signed(pol);
        loop {
            let moved = match (self.it(j).crit.role(pol), self.is_endpoint(j)) {
                (Role::Max, _) => {
                    self.rise_max(pol, j, g);
                    false
                }
                (Role::None, _) => self.lift_regular(pol, j, g),
                (Role::Min, false) => self.lift_min(pol, j, g),
                (Role::Min, true) => self.lift_end_min(pol, j, g),
            };
            if !moved {
                break;
            }
        }
        self.place(j, target);
    }

    /// A max rises past the parents below `g`.
    fn rise_max(&mut self, pol: Polarity, j: ItemId, g: Height) {
        loop {
            let x = self.node_of(j, pol);
            let u = self.n(x).up;
            self.touch(1);
            if self.is_root(u) {
                let Some(c) = self.root_rival(x) else { return };
                let ci = self.n(c).item;
                let hc = self.hi(ci, pol);
                if hc < self.hi(j, pol) || hc >= g {
                    return;
                }
                let h = self.past(ci, pol);
                self.place(j, h);
                self.root_interchange(pol, j, ci);
                continue;
            }
            let ui = self.n(u).item;
            if self.hi(ui, pol) >= g {
                return;
            }
            let h = self.past(ui, pol);
            self.place(j, h);
            self.coupled_interchange(pol, x, u);
        }
    }

    /// A non-critical interior item rises; returns whether it crossed its
    /// higher neighbour and became a max.
    fn lift_regular(&mut self, pol: Polarity, j: ItemId, g: Height) -> bool {
        let other = pol.flip();
        let (l, r) = (self.it(j).prev, self.it(j).next);
        let n = if self.hi(l, pol) > self.hi(r, pol) { l } else { r };
        self.touch(1);
        if g < self.hi(n, pol) {
            return false;
        }
        let h = self.past(n, pol);
        self.place(j, h);
        let mut hk = ItemId::NIL;
        if self.is_endpoint(n) {
            hk = self.hook_of(n);
            self.endpoint_case(pol, 2, n, j, hk);
            self.endpoint_case(other, 4, n, j, hk);
            self.refresh_hook(n);
        } else {
            let n2 = if self.it(n).prev == j { self.it(n).next } else { self.it(n).prev };
            if self.hi(n2, pol) > self.hi(n, pol) {
                self.anti_cancel(pol, n, j);
                self.anti_cancel(other, j, n);
            } else {
                self.slide(pol, n, j);
                self.slide(other, n, j);
            }
        }
        self.sync(&[j, n, hk]);
        true
    }

    /// An interior min rises: first past its children in the other tree,
    /// then past its lower neighbour. Returns whether it crossed the
    /// neighbour.
    fn lift_min(&mut self, pol: Polarity, j: ItemId, g: Height) -> bool {
        let other = pol.flip();
        let (l, r) = (self.it(j).prev, self.it(j).next);
        let n = if self.hi(l, pol) < self.hi(r, pol) { l } else { r };
        let bound = g.min(self.hi(n, pol));
        loop {
            let m = self.node_of(j, other);
            let nd = self.n(m);
            let mut best = None;
            for c in [nd.dn, nd.in_, nd.mid] {
                if self.is_leaf(c) {
                    continue;
                }
                let hc = self.hi(self.n(c).item, pol);
                if best.is_none_or(|(_, hb, _)| hc < hb) {
                    best = Some((c, hc, false));
                }
            }
            if let Some(c) = self.root_rival(m) {
                let hc = self.hi(self.n(c).item, pol);
                if hc > self.hi(j, pol) && best.is_none_or(|(_, hb, _)| hc < hb) {
                    best = Some((c, hc, true));
                }
            }
            self.touch(3);
            match best {
                Some((c, hc, rival)) if hc < bound => {
                    let ci = self.n(c).item;
                    let h = self.past(ci, pol);
                    self.place(j, h);
                    if rival {
                        self.root_interchange(other, ci, j);
                    } else {
                        self.coupled_interchange(other, c, m);
                    }
                }
                _ => break,
            }
        }
        if g < self.hi(n, pol) {
            return false;
        }
        let h = self.past(n, pol);
        self.place(j, h);
        let mut hk = ItemId::NIL;
        if self.is_endpoint(n) {
            hk = self.hook_of(n);
            self.endpoint_case(pol, 1, n, j, hk);
            self.endpoint_case(other, 3, n, j, hk);
            self.refresh_hook(n);
        } else if self.it(n).crit.role(pol) == Role::Max {
            self.cancel(pol, j, n);
            self.cancel(other, n, j);
        } else {
            self.slide(pol, j, n);
            self.slide(other, j, n);
        }
        self.sync(&[j, n, hk]);
        true
    }

    /// An endpoint min rises past its trail neighbours in the other tree,
    /// then past its inner neighbour. Returns whether it crossed it.
    fn lift_end_min(&mut self, pol: Polarity, j: ItemId, g: Height) -> bool {
        let other = pol.flip();
        let a = self.inner_neighbor(j);
        let bound = g.min(self.hi(a, pol));
        loop {
            let m = self.node_of(j, other);
            let d = self.n(m).dn;
            self.touch(1);
            let mut best = (!self.is_leaf(d)).then(|| (d, self.hi(self.n(d).item, pol), false));
            if let Some(c) = self.root_rival(m) {
                let hc = self.hi(self.n(c).item, pol);
                if hc > self.hi(j, pol) && best.is_none_or(|(_, hb, _)| hc < hb) {
                    best = Some((c, hc, true));
                }
            }
            let Some((c, hc, rival)) = best else { break };
            if hc >= bound {
                break;
            }
            let ci = self.n(c).item;
            let h = self.past(ci, pol);
            self.place(j, h);
            if rival {
                self.root_interchange(other, ci, j);
            } else {
                self.coupled_interchange(other, c, m);
            }
        }
        if g < self.hi(a, pol) {
            return false;
        }
        let h = self.past(a, pol);
        self.place(j, h);
        let hk = self.hook_of(j);
        if self.it(a).crit.role(pol) == Role::Max {
            self.endpoint_case(pol, 3, j, a, hk);
            self.endpoint_case(other, 1, j, a, hk);
        } else {
            self.endpoint_case(pol, 4, j, a, hk);
            self.endpoint_case(other, 2, j, a, hk);
        }
        self.refresh_hook(j);
        self.sync(&[j, a, hk]);
        true
    }

    // ----- list ends ------------------------------------------------------

    /// Appends a new endpoint three steps beyond the current one, on the
    /// side that keeps the old endpoint's type. The old hook's leaf passes to
    /// the new item; the new item gets a fresh hook between the two.
    fn extend_end(&mut self, list: ListId, front: bool, key: u64) -> ItemId {
        let side = usize::from(!front);
        let m = if front { self.ls(list).head } else { self.ls(list).tail };
        let old_hook = self.ls(list).hooks[side];
        let is_max = self.it(m).crit == Crit::Maximum;
        let d = if is_max { -1 } else { 1 };
        let hm = self.it(m).height;
        let (keeps, grows) = if is_max { (Polarity::Up, Polarity::Down) } else { (Polarity::Down, Polarity::Up) };

        let e = self.new_item(Height { eps: 3 * d, ..hm }, key, list);
        self.unlink(old_hook);
        self.itm(old_hook).alive = false;
        {
            let st = self.lsm(list);
            st.hooks[side] = ItemId::NIL;
            if front {
                st.head = m;
                st.hooks[0] = ItemId::NIL;
            }
        }
        if front {
            // With no left hook the list starts at `m`.
            self.link_after(list, ItemId::NIL, e);
        } else {
            self.link_after(list, m, e);
        }
        let hkey = self.fresh_key();
        let nh = self.new_item(Height { eps: 2 * d, ..hm }, hkey, list);
        self.itm(nh).crit = if is_max { Crit::DownHook } else { Crit::UpHook };
        {
            let st = self.lsm(list);
            if front {
                st.head = e;
            } else {
                st.tail = e;
            }
            st.len += 1;
        }
        if front {
            self.link_after(list, ItemId::NIL, nh);
        } else {
            self.link_after(list, e, nh);
        }
        self.lsm(list).hooks[side] = nh;
        let c = self.local_crit(e);
        self.set_crit(e, c);

        let x = self.node_of(old_hook, keeps);
        self.retag(x, e);
        let leaf = self.node_of(m, grows);
        let ne = self.new_node(e, grows);
        let k = self.side_trail(leaf, self.item_pos(e));
        self.link_bottom(ne, leaf, k);
        self.hook_banana(nh, ne, grows);
        self.flush_spine();
        e
    }

    /// Makes leaf node for hook `hk` spanning an empty banana with `top`.
    pub(crate) fn hook_banana(&mut self, hk: ItemId, top: crate::ids::NodeId, pol: Polarity) {
        let nh = self.new_node(hk, pol);
        {
            let n = self.nm(nh);
            n.in_ = top;
            n.mid = top;
            n.dth = top;
            n.low = nh;
        }
        self.nm(top).in_ = nh;
        self.nm(top).mid = nh;
        self.dirty.extend([nh, top]);
    }

    /// Deletes endpoint `j`: parks it three steps beyond its inner neighbour
    /// and undoes the end extension.
    fn retract_end(&mut self, j: ItemId) {
        let list = self.it(j).list;
        let front = j == self.ls(list).head;
        let side = usize::from(!front);
        let y = self.inner_neighbor(j);
        let z = if front { self.it(y).next } else { self.it(y).prev };
        let y_max = self.it(y).height > self.it(z).height;
        let d = if y_max { -1 } else { 1 };
        let hy = self.it(y).height;
        self.move_to(j, Height { eps: 3 * d, ..hy });
        let (keeps, grows) = if y_max { (Polarity::Up, Polarity::Down) } else { (Polarity::Down, Polarity::Up) };
        let hj = self.ls(list).hooks[side];

        let key = self.fresh_key();
        let nh = self.new_item(Height { eps: d, ..hy }, key, list);
        self.itm(nh).crit = if y_max { Crit::UpHook } else { Crit::DownHook };
        let x = self.node_of(j, keeps);
        self.retag(x, nh);
        let nj = self.node_of(j, grows);
        let nhj = self.node_of(hj, grows);
        self.unhook(nj);
        self.release(nj);
        self.release(nhj);

        self.set_crit(j, Crit::NonCritical);
        self.unlink(hj);
        self.itm(hj).alive = false;
        self.unlink(j);
        self.itm(j).alive = false;
        {
            let st = self.lsm(list);
            st.hooks[side] = ItemId::NIL;
            st.len -= 1;
            if front {
                st.head = y;
            } else {
                st.tail = y;
            }
        }
        if front {
            self.link_after(list, ItemId::NIL, nh);
        } else {
            self.link_after(list, y, nh);
        }
        self.lsm(list).hooks[side] = nh;
        self.flush_spine();
    }
}
