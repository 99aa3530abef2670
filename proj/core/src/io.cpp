// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/io.hpp"

#include <fstream>

namespace contreg {

struct CsvWriter::Impl {
  std::ofstream out;
  size_t ncols = 0;
};

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& tag,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);  // binary: identical bytes everywhere
  if (!impl_->out) throw Error("cannot open '" + path.string() + "' for writing");
  impl_->ncols = columns.size();
  impl_->out << "# contreg-csv v1 " << tag << "\n";
  for (size_t i = 0; i < columns.size(); ++i)
    impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
  impl_->out.flush();
  delete impl_;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != impl_->ncols) throw Error("csv row width mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    impl_->out << fmt17(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != impl_->ncols) throw Error("csv row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i)
    impl_->out << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << content;
}

}  // namespace contreg
