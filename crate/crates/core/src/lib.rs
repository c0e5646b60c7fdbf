pub mod census;
pub mod cli;
pub mod constructions;
pub mod field;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod superalg;
pub mod modrep;
pub mod hcpair;
