// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "contreg/common.hpp"

namespace contreg {

// CSV with a single versioned comment header line ("# contreg-csv v1 ...")
// followed by a column-name row; numeric cells use 17 significant digits so
// files round-trip doubles exactly.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& tag,
            const std::vector<std::string>& columns);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

 private:
  struct Impl;
  Impl* impl_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace contreg
