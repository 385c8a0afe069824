// Copyright (c) the histop authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "histop/reduce.hpp"

namespace histop {

// Structured-text model file; write -> read -> write is byte-identical.
void save_model(const ReducedModel& rm, const std::string& path);
ReducedModel load_model(const std::string& path);

using CsvValue = std::variant<long long, double, std::string>;
using CsvRow = std::vector<CsvValue>;

// Header row, '.' decimal, doubles in scientific notation with 17 significant
// digits; written atomically (temp file + rename).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows);

// Atomic small-file write.
void write_text_atomic(const std::string& path, const std::string& content);

std::string format_double(double v);

}  // namespace histop
