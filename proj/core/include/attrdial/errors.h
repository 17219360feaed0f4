// Copyright 2026 The attrdial Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#ifndef ATTRDIAL_ERRORS_H_
#define ATTRDIAL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace attrdial {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, missing fields, wrong types.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A broken internal invariant (e.g. a mention span outside its utterance).
class InternalError : public Error {
 public:
  using Error::Error;
};

// The recommender had nothing satisfying a relexicalization request.
class NoCandidateError : public Error {
 public:
  using Error::Error;
};

// A pluggable backend (labeler, predictor, generator, remote service) failed.
class BackendError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class SessionClosedError : public Error {
 public:
  using Error::Error;
};

}  // namespace attrdial

#endif  // ATTRDIAL_ERRORS_H_
