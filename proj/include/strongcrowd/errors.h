// include/strongcrowd/errors.h

// Copyright 2026  The strongcrowd Authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STRONGCROWD_ERRORS_H_
#define STRONGCROWD_ERRORS_H_

#include <stdexcept>
#include <string>

namespace strongcrowd {

// Malformed or inconsistent input data (files, event lists, annotation sets).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Soundscape generation could not satisfy its configuration.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Worker assignment could not satisfy the campaign constraints.  The
// constraint that could not be met is kept in binding_constraint().
class AssignmentError : public std::runtime_error {
 public:
  AssignmentError(const std::string &constraint, const std::string &what)
      : std::runtime_error(what + " (binding constraint: " + constraint + ")"),
        constraint_(constraint) {}
  const std::string &binding_constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

}  // namespace strongcrowd

#endif  // STRONGCROWD_ERRORS_H_
