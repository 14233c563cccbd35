/*
Copyright 2026 The Plancraft Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace plancraft {

/// Caller passed something the operation cannot accept (unknown id, bad dimension, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A session operation was called in a phase that does not allow it,
/// or a decision does not answer the pending prompt.
class ProtocolError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A decision that does not answer the pending prompt: wrong kind for the
/// case, unknown or non-ready tasks, or a deferral the progress rule forbids.
class IllegalDecision : public ProtocolError {
public:
    using ProtocolError::ProtocolError;
};

/// Broken internal invariant. Seeing one of these means a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace plancraft
