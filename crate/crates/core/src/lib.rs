// Copyright 2026 The pb-bobw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Fair lotteries over participatory-budgeting outcomes.
//!
//! The crate turns fractional budget allocations into lotteries over funded
//! project sets whose every outcome overspends by at most one project, runs
//! the rules that pair ex-ante fair-share guarantees with ex-post
//! proportional representation, and checks all of these axioms exactly.
//!
//! * [`model`]: instances, outcomes, lotteries and exact rationals.
//! * [`rounding`]: dependent rounding and budget predicates.
//! * [`exante`]: fair-share checks on fractional outcomes.
//! * [`expost`]: justified-representation checks on integral outcomes.
//! * [`rules`]: random dictator, greedy cohesive rule, equal shares and the
//!   two best-of-both-worlds rules.
//! * [`oracle`]: outcome enumeration, exact lottery feasibility and the
//!   counterexample families.
//! * [`cli`]: the `pb-bobw` command line.

pub mod cli;
pub mod error;
pub mod exante;
pub mod expost;
pub mod limits;
pub mod model;
pub mod oracle;
pub mod random;
pub mod report;
pub mod rounding;
pub mod rules;

pub use error::{Error, Result};
pub use limits::Limits;
pub use model::{FractionalOutcome, IntegralOutcome, Lottery, PbInstance, Rational, Setting};
