/* Copyright 2026 The DAGAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DAGAM_ERRORS_H_
#define DAGAM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dagam {

// Root of every error raised by the library. The CLI maps subclasses to exit
// codes, so each category below corresponds to one failure class.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor shapes do not agree for the requested operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Reduction or readout over an empty extent.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Caller violated an operation precondition (non-scalar loss, rows that are
// not probability vectors, non-smooth gradient-check point, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Electrode layout problems: coincident electrodes, unknown channel names.
class LayoutError : public Error {
 public:
  using Error::Error;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

// File could not be read or parsed. Message carries file and line.
class LoadError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class TrainingDivergenceError : public Error {
 public:
  TrainingDivergenceError(int epoch, const std::string& what)
      : Error(what), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace dagam

#endif  // DAGAM_ERRORS_H_
