// Copyright 2026 The contreg authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "contreg/common.hpp"

#include <cstdio>

namespace contreg {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_string(const Point& p) {
  std::string s = "(";
  for (int i = 0; i < p.n; ++i) {
    if (i) s += ", ";
    s += fmt17(p[i]);
  }
  s += ")";
  return s;
}

}  // namespace contreg
