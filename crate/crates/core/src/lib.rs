pub mod arith;
pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod exact;
pub mod field;
pub mod psl2;
pub mod report;
pub mod screen;
pub mod smallgroup;
pub mod twogroups;
pub mod units;
