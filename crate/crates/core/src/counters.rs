//! Per-operation cost tallies.

use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostCounters {
    pub nodes_visited: u64,
    pub interchanges_max: u64,
    pub interchanges_min: u64,
    pub cancellations: u64,
    pub anticancellations: u64,
    pub slides: u64,
    pub dict_ops: u64,
}

impl CostCounters {
    pub fn primitives(&self) -> u64 {
        self.interchanges_max + self.interchanges_min + self.cancellations + self.anticancellations + self.slides
    }
}

impl CostCounters {
    /// Tallies accumulated since `earlier` was taken.
    pub fn since(&self, earlier: &CostCounters) -> CostCounters {
        CostCounters {
            nodes_visited: self.nodes_visited - earlier.nodes_visited,
            interchanges_max: self.interchanges_max - earlier.interchanges_max,
            interchanges_min: self.interchanges_min - earlier.interchanges_min,
            cancellations: self.cancellations - earlier.cancellations,
            anticancellations: self.anticancellations - earlier.anticancellations,
            slides: self.slides - earlier.slides,
            dict_ops: self.dict_ops - earlier.dict_ops,
        }
    }
}

impl AddAssign for CostCounters {
    fn add_assign(&mut self, o: Self) {
        self.nodes_visited += o.nodes_visited;
        self.interchanges_max += o.interchanges_max;
        self.interchanges_min += o.interchanges_min;
        self.cancellations += o.cancellations;
        self.anticancellations += o.anticancellations;
        self.slides += o.slides;
        self.dict_ops += o.dict_ops;
    }
}
