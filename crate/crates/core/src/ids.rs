//! Dense integer identifiers for the domain entities.
//!
//! Every entity is numbered `0..n` within its instance, which keeps file
//! formats compact and lets lookup tables be plain vectors.

use serde::{Deserialize, Serialize};
use std::fmt;

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            fn from(value: usize) -> Self {
                Self(value as u32)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(
    /// A ship in the fleet.
    ShipId
);
id_type!(
    /// A directed trade lane between two regions.
    LaneId
);
id_type!(
    /// A route: a directed cycle of trade lanes joined by ballast legs.
    RouteId
);
id_type!(
    /// A cargo contract.
    ContractId
);
id_type!(
    /// A cargo capacity type (hold/tank class).
    CapacityTypeId
);
id_type!(
    /// A second-stage market scenario.
    ScenarioId
);
