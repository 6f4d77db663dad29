//! Exact-arithmetic engine deciding whether a quadratic space over Q (or Q_p, R, F_q)
//! admits an isometry whose module of torsion k[X]-structure is prescribed, together
//! with constructive certificates for the positive cases.
//!
//! All arithmetic is exact (arbitrary-precision rationals); no floating point is used
//! anywhere in the decision paths. Verdicts are three-valued: YES (with certificate
//! where the constructive machinery applies), NO (with the violated condition), or
//! UNDECIDED (with the search bound that was exhausted).

pub mod arith;
pub mod kxmodule;
pub mod locdec;
pub mod globdec;
pub mod poly;
pub mod qspace;
pub mod transfer;
