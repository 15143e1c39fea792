#ifndef CAUSALKIT_MODEL_IO_HPP
#define CAUSALKIT_MODEL_IO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>

#include "causalkit/model.hpp"

namespace causalkit {

// Model file schema (JSON):
//   {
//     "variables": [{"name": "A", "cardinality": 2}, ...],
//     "edges": [["A", "C"], ...],
//     "cpts": {"C": [{"given": {"A": 0, "B": 1}, "dist": ["1/2", "1/2"]}, ...], ...}
//   }
// Rational entries are "num/den" strings; floating entries are JSON numbers.
// A model mixes no modes. Rational round-trips are lossless and, after one
// canonicalization, byte-identical.

enum class ModelIoCode {
    schema,
    unknown_variable,
    malformed_rational,
    mixed_mode,
    row_sum,
    missing_row,
    parent_mismatch,
    io,
};

class ModelIoError : public std::runtime_error {
  public:
    ModelIoError(ModelIoCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}
    ModelIoCode code() const { return code_; }

  private:
    ModelIoCode code_;
};

std::string serialize_model(const CausalModel& m);
CausalModel parse_model(const std::string& json_text);

CausalModel load_model(const std::filesystem::path& path);
void save_model(const CausalModel& m, const std::filesystem::path& path);

}  // namespace causalkit

#endif  // CAUSALKIT_MODEL_IO_HPP
