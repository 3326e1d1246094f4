#pragma once

#include <stdexcept>
#include <string>

#include "hkt/torus.hpp"

namespace hkt {

class FieldFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary scalar-field snapshot, all integers and doubles little-endian:
//   char[4]  "HQF1"
//   int32    n
//   int32    points per axis N
//   int32    number of active axes d
//   int32[d] active axes, 0-based real axis indices, ascending
//   uint64   point count (N^d)
//   float64  values, row-major over the active axes, last axis fastest
void write_field(const std::string& path, const ScalarField& f);
ScalarField read_field(const std::string& path);

// CSV: header "x<axis>,...,value" with 1-based axis names, one row per point.
void write_field_csv(const std::string& path, const ScalarField& f);

}  // namespace hkt
