#pragma once

#include "bt/relations.hpp"

#include <filesystem>
#include <string>

namespace bt {

// JSON layout: {"g": g, "basis_real": [[...], ...], "basis_imag": [[...], ...]},
// 2g rows of d entries each. Flat row-major arrays of length 2g*d are accepted on input.
std::string relation_to_json(const Relation& r);
Relation relation_from_json(const std::string& text, double tol = kRankTol);

Relation read_relation_file(const std::filesystem::path& path, double tol = kRankTol);
void write_relation_file(const std::filesystem::path& path, const Relation& r);

}  // namespace bt
