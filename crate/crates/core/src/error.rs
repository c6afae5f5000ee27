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

use thiserror::Error;

use crate::model::{ParseRationalError, Setting};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("invalid rational: {0}")]
    Rational(#[from] ParseRationalError),

    /// An instance invariant was violated; `field` names the offending entry.
    #[error("validation error at {field}: {message}")]
    Validation { field: String, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} has size {size}, above the exhaustive-check limit {limit}")]
    Scale {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("operation requires a {expected} instance, found {found}")]
    Setting {
        expected: &'static str,
        found: Setting,
    },

    /// A property proved for the algorithm failed at runtime.
    #[error("invariant breach: {0}")]
    InvariantBreach(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}
