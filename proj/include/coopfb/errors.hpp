// SPDX-License-Identifier: Apache-2.0
//
// coopfb - cooperative precoder feedback for two-user MIMO interference channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef COOPFB_ERRORS_HPP
#define COOPFB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coopfb {

// Argument outside the documented domain (shape mismatch, NaN, range violation).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input is well formed but the requested object does not exist
// (rank-deficient basis, zero-dimensional Grassmannian, ...).
class DegenerateInput : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Request would exceed a hard size cap.
class ResourceLimit : public std::length_error {
public:
    using std::length_error::length_error;
};

// Malformed configuration text. Carries the offending line (0 if unknown) and key.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, unsigned long line, std::string field)
        : std::runtime_error(what), line_(line), field_(std::move(field)) {}

    unsigned long line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    unsigned long line_;
    std::string field_;
};

// Configuration parsed but violates an invariant; the message names the invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace coopfb

#endif  // COOPFB_ERRORS_HPP
