// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace histop {

// Invalid or inconsistent run configuration (rejected before any computation).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failure while interrogating a material oracle (carries context such as the
// basis column being sampled).
struct oracle_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: singular assembly, indefinite moduli, bracketing failure.
struct numerics_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace histop
