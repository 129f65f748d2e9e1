use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

string_id!(
    /// Opaque identifier of a flag (half-edge).
    FlagId
);
string_id!(
    /// Opaque identifier of a vertex.
    VertexId
);
string_id!(
    /// Name of a puncture / tail label, element of `I_NS` or `I_R`.
    Label
);

impl FlagId {
    /// The label a tail carries when a graph is labeled by its own tails.
    pub fn to_label(&self) -> Label {
        Label(self.0.clone())
    }
}

impl Label {
    pub fn to_flag(&self) -> FlagId {
        FlagId(self.0.clone())
    }
}

/// Prefix an identifier with a component tag, as used by tagged disjoint unions.
pub(crate) fn tagged(tag: usize, id: &str) -> String {
    format!("{tag}/{id}")
}
