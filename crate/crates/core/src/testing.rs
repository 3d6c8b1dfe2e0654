//! Shared fixtures for unit tests.

use crate::format::parse_vpt;
use crate::machine::Vpt;

pub const FIG1: &str = include_str!("../../../fixtures/fig1.vpt");

pub fn fig1() -> Vpt {
    parse_vpt(FIG1).expect("fixture parses")
}
