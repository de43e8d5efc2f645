//! Exact and certified computations on the degree-10 cuboid characteristic
//! polynomial `Q_pq(t)`.

mod bigjson;
pub mod charpoly;
pub mod cuboid;
pub mod exactpoly;
pub mod expansion;
pub mod hp;
pub mod region;
pub mod roots;
pub mod scan;
pub mod sites;
pub mod verify;
