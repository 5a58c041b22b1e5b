//! Arena indices. Ids are never reused within one workspace.

use std::fmt;

macro_rules! arena_id {
    ($name:ident) => {
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub(crate) u32);

        impl $name {
            pub const NIL: $name = $name(u32::MAX);

            pub fn is_nil(self) -> bool {
                self == Self::NIL
            }

            pub(crate) fn ix(self) -> usize {
                debug_assert!(!self.is_nil(), concat!("nil ", stringify!($name)));
                self.0 as usize
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.is_nil() {
                    write!(f, concat!(stringify!($name), "(nil)"))
                } else {
                    write!(f, concat!(stringify!($name), "({})"), self.0)
                }
            }
        }
    };
}

arena_id!(ItemId);
arena_id!(NodeId);
arena_id!(ListId);
