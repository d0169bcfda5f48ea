//! Exact-arithmetic kernel for differential polynomial rings together with
//! the calculus of explicit bound functions built on Cantor-normal-form
//! ordinals and ordinal-indexed function iteration.
//!
//! The crate is organized around five areas:
//!
//! * [`ordinal`] — ordinals below epsilon_0 in Cantor normal form, fundamental
//!   sequences, natural sum/product, and the ordinal rank assignments for bad
//!   Dickson sequences, bad leader sequences, and autoreduced sets.
//! * [`growth`] — ordinal-indexed iteration `g^alpha(b)` with budgeted exact
//!   evaluation, the multiset recursion `m`, the bound-function catalogue,
//!   the knitting combinator, and sampled dominance checks.
//! * [`polyring`] — sparse exact-rational multivariate polynomials and the
//!   bounded-degree linear-algebra toolbox: ideal membership certificates,
//!   syzygy generators, Dickson/Hilbert chain witnesses, radical trees.
//! * [`diffring`] — the differential kernel: orderly rankings, leaders,
//!   initials, separants, pseudodivision with certificates, autoreduced and
//!   coherent sets, stratified membership, and the characteristic-set loop.
//! * [`chains`] — chain-stabilization witness scans tying the kernel to the
//!   bound catalogue.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals, and
//! evaluation that would exceed a configured bit budget returns a residue
//! instead of an approximation.

pub mod budget;
pub mod chains;
pub mod diffring;
pub mod growth;
pub mod ordinal;
pub mod polyring;
pub mod verify;
