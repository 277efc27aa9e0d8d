//! Float functions routed through `libm`, so results do not depend on
//! whether `std` happens to be linked.

pub(crate) use libm::{cos, erfc, exp, log, pow, sin, sqrt, tanh};

pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516;
