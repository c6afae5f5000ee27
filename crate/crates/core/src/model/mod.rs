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

//! Instances, outcomes, lotteries and exact arithmetic.

mod instance;
mod outcome;
mod rational;

pub(crate) use instance::mask_members;
pub use instance::{parse_instance, PbInstance, Setting};
pub use outcome::{implements, FractionalOutcome, IntegralOutcome, Lottery, PaymentMatrix};
pub use rational::{dyadic_below, ParseRationalError, Rational};
